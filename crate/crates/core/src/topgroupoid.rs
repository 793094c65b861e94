//! Finite topological groupoids: a groupoid whose arrow set carries an
//! Alexandrov topology making the structure maps continuous.
//!
//! Paths in a finite space are comparability walks, so the star identity
//! path component at `x` is the comparability component of `id(x)` inside the
//! star. Everything about `C₁` below reduces to [`components_in`].

use crate::bits::{self, Bits};
use crate::error::{Error, Result};
use crate::finspace::{components_in, FinSpace, OpenSet, Point};
use crate::germs::{self, Atlas, LocalSubgroupoid};
use crate::groupoid::{
    action_groupoid, bundle_of_groups, pair_groupoid, product_with_pair, sym_groupoid, Arrow,
    FinGroup, FinGroupoid, PrincipalBundle, WideSubgroupoid,
};
use crate::par;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopGroupoid {
    base: FinGroupoid,
    arrow_space: FinSpace,
}

impl TopGroupoid {
    /// Checks that `src`, `dst`, `inv`, `id` and composition are continuous.
    pub fn new(base: FinGroupoid, arrow_space: FinSpace) -> Result<Self> {
        if arrow_space.len() != base.len() {
            return Err(Error::NotTopological(format!(
                "arrow space has {} points for {} arrows",
                arrow_space.len(),
                base.len()
            )));
        }
        let t = TopGroupoid { base, arrow_space };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        let q = &self.base;
        let x = q.objects();
        let a = &self.arrow_space;
        let fail = |what: &str, g: Arrow| {
            Err(Error::NotTopological(format!(
                "{what} is not continuous at `{}`",
                q.arrow_name(g)
            )))
        };
        for g in 0..q.len() {
            for h in a.minup(g).ones() {
                if !x.minup(q.src(g)).contains(q.src(h)) {
                    return fail("source", g);
                }
                if !x.minup(q.dst(g)).contains(q.dst(h)) {
                    return fail("target", g);
                }
                if !a.minup(q.inv(g)).contains(q.inv(h)) {
                    return fail("inverse", g);
                }
            }
        }
        for p in 0..x.len() {
            for y in x.minup(p).ones() {
                if !a.minup(q.id(p)).contains(q.id(y)) {
                    return Err(Error::NotTopological(format!(
                        "identity map is not continuous at `{}`",
                        x.name(p)
                    )));
                }
            }
        }
        for (g, h) in q.composable_pairs() {
            let gh = q.compose(g, h).expect("composable");
            for g2 in a.minup(g).ones() {
                for h2 in a.minup(h).ones() {
                    if let Some(k) = q.compose(g2, h2) {
                        if !a.minup(gh).contains(k) {
                            return Err(Error::NotTopological(format!(
                                "composition is not continuous at (`{}`, `{}`)",
                                q.arrow_name(g),
                                q.arrow_name(h)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Arrow topology given as minimal neighbourhoods per arrow.
    pub fn from_minups(base: FinGroupoid, minups: Vec<Vec<Arrow>>) -> Result<Self> {
        let space = FinSpace::new(base.arrow_names().to_vec(), minups)?;
        TopGroupoid::new(base, space)
    }

    /// The coarsest topology making `(src, dst)` continuous:
    /// `minup(g) = {h : src h ∈ minup(src g), dst h ∈ minup(dst g)}`.
    /// On a pair groupoid this is the product topology.
    pub fn with_anchor_topology(base: FinGroupoid) -> Self {
        let labels = vec![0; base.len()];
        TopGroupoid::with_labelled_topology(base, &labels).expect("anchor topology is always valid")
    }

    /// The anchor topology cut down to arrows carrying the same label.
    pub fn with_labelled_topology(base: FinGroupoid, labels: &[usize]) -> Result<Self> {
        let x = base.objects();
        let minups = (0..base.len())
            .map(|g| {
                (0..base.len())
                    .filter(|&h| {
                        labels[h] == labels[g]
                            && x.minup(base.src(g)).contains(base.src(h))
                            && x.minup(base.dst(g)).contains(base.dst(h))
                    })
                    .collect()
            })
            .collect();
        TopGroupoid::from_minups(base, minups)
    }

    /// Discrete arrow topology; valid only when identities stay continuous,
    /// which forces a discrete object space.
    pub fn with_discrete_topology(base: FinGroupoid) -> Result<Self> {
        let minups = (0..base.len()).map(|g| vec![g]).collect();
        TopGroupoid::from_minups(base, minups)
    }

    pub fn base(&self) -> &FinGroupoid {
        &self.base
    }

    pub fn arrow_space(&self) -> &FinSpace {
        &self.arrow_space
    }

    pub fn objects(&self) -> &FinSpace {
        self.base.objects()
    }

    /// Arrows with source `x`.
    pub fn star(&self, x: Point) -> Result<Bits> {
        if x >= self.objects().len() {
            return Err(Error::UnknownObject(format!("#{x}")));
        }
        Ok(self.base.arrow_set(self.base.out_of(x).iter().copied()))
    }

    /// The star of `Q|U` at `x`: arrows from `x` into `U`.
    pub fn star_in(&self, u: &OpenSet, x: Point) -> Bits {
        self.base.arrow_set(
            self.base
                .out_of(x)
                .iter()
                .copied()
                .filter(|&g| u.contains(self.base.dst(g))),
        )
    }

    /// Star at `x` as a subspace; the second value maps its points to arrows.
    pub fn star_space(&self, x: Point) -> Result<(FinSpace, Vec<Arrow>)> {
        Ok(self.arrow_space.subspace(&self.star(x)?))
    }

    /// Comparability component of `id(x)` in the star of `Q|U` at `x`.
    pub fn star_component(&self, u: &OpenSet, x: Point) -> Bits {
        let star = self.star_in(u, x);
        let id = self.base.id(x);
        components_in(self.arrow_minups(), &star)
            .into_iter()
            .find(|c| c.contains(id))
            .expect("identity lies in its star")
    }

    fn arrow_minups(&self) -> &[Bits] {
        self.arrow_space.minups()
    }

    /// `C₁(Q|U)`: the union over `x ∈ U` of the star identity components.
    /// Closure under composition and inverse is not enforced here; it is a
    /// property checked by the test suite.
    pub fn c1(&self, u: &OpenSet) -> WideSubgroupoid {
        let points: Vec<Point> = u.points().collect();
        let parts = par::map(&points, |&x| self.star_component(u, x));
        let mut arrows = self.base.empty_arrows();
        for p in parts {
            arrows.union_with(&p);
        }
        WideSubgroupoid::from_parts(u.clone(), arrows)
    }

    pub fn is_star_connected_on(&self, u: &OpenSet) -> bool {
        self.c1(u) == self.base.full_on(u)
    }

    /// `Q = C₁(Q)`.
    pub fn is_star_connected(&self) -> bool {
        self.is_star_connected_on(&self.objects().whole())
    }

    /// `C₁(Q|U)` for each member of the cover, in member order.
    pub fn c1_charts(&self, cover: &Cover) -> Vec<WideSubgroupoid> {
        par::map(cover.members(), |u| self.c1(u))
    }
}

// ---------------------------------------------------------------------------
// builders with their natural topologies

/// Pair groupoid with the product topology on `X × X`.
pub fn top_pair(x: &FinSpace) -> TopGroupoid {
    TopGroupoid::with_anchor_topology(pair_groupoid(x))
}

/// Bundle of copies of one group over `X`, topologized as `X × G` with `G`
/// discrete.
pub fn top_bundle(x: &FinSpace, group: &FinGroup) -> TopGroupoid {
    let fibres = vec![group.clone(); x.len()];
    let q = bundle_of_groups(x, &fibres).expect("uniform bundle");
    let labels: Vec<usize> = (0..q.len()).map(|g| g % group.order()).collect();
    TopGroupoid::with_labelled_topology(q, &labels).expect("X × G is a topological groupoid")
}

/// Action groupoid topologized as `X × Ω` with `Ω` discrete.
pub fn top_action(x: &FinSpace, group: &FinGroup, action: &[Vec<Point>]) -> Result<TopGroupoid> {
    let q = action_groupoid(x, group, action)?;
    let labels: Vec<usize> = (0..q.len()).map(|g| g % group.order()).collect();
    TopGroupoid::with_labelled_topology(q, &labels)
}

/// `G × (U × U)` with `G` discrete.
pub fn top_product(group: &FinGroup, u: &FinSpace) -> TopGroupoid {
    let q = product_with_pair(group, u);
    let labels: Vec<usize> = (0..q.len()).map(|g| g % group.order()).collect();
    TopGroupoid::with_labelled_topology(q, &labels).expect("G × (U × U) is a topological groupoid")
}

/// Symmetry groupoid of a principal bundle with the quotient topology from
/// `E × E`, each arrow being the class formed by its graph.
pub fn top_sym(bundle: &PrincipalBundle) -> Result<TopGroupoid> {
    let (q, graphs) = sym_groupoid(bundle)?;
    let e = bundle.projection.dom();
    let ee = e.product(e);
    let classes: Vec<Vec<Point>> = graphs
        .iter()
        .map(|g| g.iter().map(|&(a, b)| a * e.len() + b).collect())
        .collect();
    let covered: usize = classes.iter().map(Vec::len).sum();
    if covered != ee.len() {
        return Err(Error::InvalidPartition(
            "arrow graphs do not partition E × E".into(),
        ));
    }
    let (quot, proj) = ee.quotient(&classes)?;
    // quotient classes are ordered by least member; map them back to arrows
    let mut class_to_arrow = vec![0; q.len()];
    for (g, c) in classes.iter().enumerate() {
        class_to_arrow[proj[c[0]]] = g;
    }
    let mut arrow_to_class = vec![0; q.len()];
    for (c, &g) in class_to_arrow.iter().enumerate() {
        arrow_to_class[g] = c;
    }
    let minups = (0..q.len())
        .map(|g| {
            quot.minup(arrow_to_class[g])
                .ones()
                .map(|c| class_to_arrow[c])
                .collect()
        })
        .collect();
    TopGroupoid::from_minups(q, minups)
}

// ---------------------------------------------------------------------------
// covers

/// An indexed family of open sets whose union is `carrier`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cover {
    carrier: OpenSet,
    members: Vec<OpenSet>,
}

impl Cover {
    pub fn new(space: &FinSpace, carrier: &OpenSet, members: Vec<OpenSet>) -> Result<Self> {
        let mut union = bits::empty(space.len());
        for m in &members {
            if !m.is_subset(carrier) {
                return Err(Error::NotACover(format!(
                    "member {} leaves {}",
                    space.fmt_set(m.bits()),
                    space.fmt_set(carrier.bits())
                )));
            }
            union.union_with(m.bits());
        }
        if &union != carrier.bits() {
            return Err(Error::NotACover(format!(
                "members miss {}",
                space.fmt_set(&bits::difference(carrier.bits(), &union))
            )));
        }
        Ok(Cover {
            carrier: carrier.clone(),
            members,
        })
    }

    pub fn single(u: &OpenSet) -> Self {
        Cover {
            carrier: u.clone(),
            members: vec![u.clone()],
        }
    }

    /// `{minup(x) : x ∈ U}`, refining every cover of `U`.
    pub fn minimal(space: &FinSpace, u: &OpenSet) -> Self {
        Cover {
            carrier: u.clone(),
            members: u.points().map(|x| space.minup_open(x)).collect(),
        }
    }

    /// Every cover of `U` by distinct nonempty open subsets, ordered by the
    /// mask over the open-set list. Refuses more than `max_opens` candidates.
    pub fn all_covers(
        space: &FinSpace,
        u: &OpenSet,
        max_points: usize,
        max_opens: usize,
    ) -> Result<Vec<Cover>> {
        let opens: Vec<OpenSet> = space
            .open_sets(max_points)?
            .into_iter()
            .filter(|v| !v.is_empty() && v.is_subset(u))
            .collect();
        if opens.len() > max_opens {
            return Err(Error::too_large("open-set family", opens.len(), max_opens));
        }
        let mut out = Vec::new();
        for mask in 1u64..(1u64 << opens.len()) {
            let mut union = bits::empty(space.len());
            let members: Vec<OpenSet> = opens
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, v)| {
                    union.union_with(v.bits());
                    v.clone()
                })
                .collect();
            if &union == u.bits() {
                out.push(Cover {
                    carrier: u.clone(),
                    members,
                });
            }
        }
        if u.is_empty() {
            out.push(Cover {
                carrier: u.clone(),
                members: Vec::new(),
            });
        }
        Ok(out)
    }

    pub fn carrier(&self) -> &OpenSet {
        &self.carrier
    }

    pub fn members(&self) -> &[OpenSet] {
        &self.members
    }

    /// `𝒰 ∩ V`, dropping empty intersections.
    pub fn restrict(&self, v: &OpenSet) -> Cover {
        Cover {
            carrier: self.carrier.intersection(v),
            members: self
                .members
                .iter()
                .map(|m| m.intersection(v))
                .filter(|m| !m.is_empty())
                .collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// c₁(Q, 𝒰)

/// Checks `C₁(Q|U_i)|minup(x) = C₁(Q|U_j)|minup(x)` on every overlap and
/// returns the charts `C₁(Q|U_i)`.
pub fn path_compatible_charts(q: &TopGroupoid, cover: &Cover) -> Result<Vec<WideSubgroupoid>> {
    let charts = q.c1_charts(cover);
    check_overlaps(q.base(), cover, &charts).map_err(|(i, j, x, left, right)| {
        Error::NotPathCompatible {
            i,
            j,
            x: q.objects().name(x).to_string(),
            left: q.base().fmt_arrows(&left),
            right: q.base().fmt_arrows(&right),
        }
    })?;
    Ok(charts)
}

/// First overlap point where two charts have different germs.
pub(crate) fn check_overlaps(
    q: &FinGroupoid,
    cover: &Cover,
    charts: &[WideSubgroupoid],
) -> std::result::Result<(), (usize, usize, Point, Bits, Bits)> {
    let space = q.objects();
    let members = cover.members();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            for x in members[i].intersection(&members[j]).points() {
                let w = space.minup_open(x);
                let left = q.restrict_unchecked(&charts[i], &w);
                let right = q.restrict_unchecked(&charts[j], &w);
                if left != right {
                    return Err((i, j, x, left.arrows().clone(), right.arrows().clone()));
                }
            }
        }
    }
    Ok(())
}

pub fn is_path_compatible(q: &TopGroupoid, cover: &Cover) -> bool {
    path_compatible_charts(q, cover).is_ok()
}

/// The atlas `{(U_i, C₁(Q|U_i))}`.
pub fn c1_atlas(q: &TopGroupoid, cover: &Cover) -> Result<Atlas> {
    let charts = path_compatible_charts(q, cover)?;
    Atlas::new(q.base(), cover.carrier(), charts)
}

/// `c₁(Q, 𝒰)`, with germ `[U_i, C₁(Q|U_i)]_x` at `x ∈ U_i`.
pub fn c1_local(q: &TopGroupoid, cover: &Cover) -> Result<LocalSubgroupoid> {
    Ok(germs::from_atlas(q.base(), &c1_atlas(q, cover)?))
}

/// Where a cover fails to be path local.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathLocalWitness {
    pub u: OpenSet,
    pub i: usize,
    pub j: usize,
    pub x: Point,
}

/// Checks, for every open `U`, charts `i, j` and `x ∈ U_i ∩ U_j ∩ U`, that
/// `C₁(Q|U_i)|minup(x) = C₁(Q|U_j ∩ U)|minup(x)`. Returns the first failure.
pub fn path_local_witness(
    q: &TopGroupoid,
    cover: &Cover,
    max_points: usize,
) -> Result<Option<PathLocalWitness>> {
    let space = q.objects();
    let charts = path_compatible_charts(q, cover)?;
    let opens = space.open_sets(max_points)?;
    let members = cover.members();
    Ok(par::find_first(&opens, |u| {
        for (j, uj) in members.iter().enumerate() {
            let inner = q.c1(&uj.intersection(u));
            for (i, ui) in members.iter().enumerate() {
                for x in ui.intersection(uj).intersection(u).points() {
                    let w = space.minup_open(x);
                    if q.base().restrict_unchecked(&charts[i], &w)
                        != q.base().restrict_unchecked(&inner, &w)
                    {
                        return Some(PathLocalWitness {
                            u: u.clone(),
                            i,
                            j,
                            x,
                        });
                    }
                }
            }
        }
        None
    }))
}

pub fn is_path_local(q: &TopGroupoid, cover: &Cover, max_points: usize) -> Result<bool> {
    Ok(path_local_witness(q, cover, max_points)?.is_none())
}

// ---------------------------------------------------------------------------
// retractions

/// A groupoid retraction `Q|from → Q|onto` over a retraction of object sets.
/// Both maps are indexed by points and arrows of the whole groupoid; entries
/// outside `Q|from` are ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Retraction {
    pub from: OpenSet,
    pub onto: OpenSet,
    pub object_map: Vec<Point>,
    pub arrow_map: Vec<Arrow>,
}

impl Retraction {
    pub fn identity(q: &FinGroupoid, u: &OpenSet) -> Self {
        Retraction {
            from: u.clone(),
            onto: u.clone(),
            object_map: (0..q.objects().len()).collect(),
            arrow_map: (0..q.len()).collect(),
        }
    }
}

/// Checks that `r` is a continuous groupoid morphism `Q|from → Q|onto` which is
/// the identity on `Q|onto`.
pub fn check_retraction(q: &TopGroupoid, r: &Retraction) -> Result<()> {
    let g = q.base();
    let space = q.objects();
    let a = q.arrow_space();
    let bad = |msg: String| Err(Error::NotARetraction(msg));
    if !r.onto.is_subset(&r.from) {
        return bad("target is not inside the source".into());
    }
    if r.object_map.len() != space.len() || r.arrow_map.len() != g.len() {
        return bad("maps are not total".into());
    }
    for x in r.from.points() {
        let y = r.object_map[x];
        if y >= space.len() || !r.onto.contains(y) {
            return bad(format!("`{}` is not sent into the target", space.name(x)));
        }
        if r.onto.contains(x) && y != x {
            return bad(format!("`{}` is moved", space.name(x)));
        }
        for z in space.minup(x).ones() {
            if r.from.contains(z) && !space.minup(y).contains(r.object_map[z]) {
                return Err(Error::NotContinuous(space.name(x).to_string()));
            }
        }
    }
    let arrows: Vec<Arrow> = g.arrows_over(r.from.bits()).ones().collect();
    for &h in &arrows {
        let k = r.arrow_map[h];
        if k >= g.len() || g.src(k) != r.object_map[g.src(h)] || g.dst(k) != r.object_map[g.dst(h)]
        {
            return bad(format!("endpoints of `{}`", g.arrow_name(h)));
        }
        if r.onto.contains(g.src(h)) && r.onto.contains(g.dst(h)) && k != h {
            return bad(format!("`{}` is moved", g.arrow_name(h)));
        }
        for h2 in a.minup(h).ones() {
            if !a.minup(k).contains(r.arrow_map[h2]) {
                return Err(Error::NotContinuous(g.arrow_name(h).to_string()));
            }
        }
    }
    for &h in &arrows {
        for &k in g.out_of(g.dst(h)) {
            if !r.from.contains(g.dst(k)) {
                continue;
            }
            let hk = g.compose(h, k).expect("composable");
            if g.compose(r.arrow_map[h], r.arrow_map[k]) != Some(r.arrow_map[hk]) {
                return bad(format!(
                    "composite of `{}`, `{}` is not preserved",
                    g.arrow_name(h),
                    g.arrow_name(k)
                ));
            }
        }
    }
    Ok(())
}

/// Retractions required by the retraction criterion: for every pair of
/// members `i < j` and every `x ∈ U_i ∩ U_j`, retractions onto a common `W ∋ x`.
#[derive(Debug, Clone)]
pub struct RetractionFamily {
    pub entries: Vec<(usize, usize, Point, Retraction, Retraction)>,
}

/// Validates every retraction, checks that each required `(i, j, x)` is
/// covered, and returns whether the cover is path compatible (which the
/// criterion guarantees).
pub fn check_retraction_criterion(
    q: &TopGroupoid,
    cover: &Cover,
    family: &RetractionFamily,
) -> Result<bool> {
    let members = cover.members();
    for (i, j, x, ri, rj) in &family.entries {
        let (i, j, x) = (*i, *j, *x);
        if i >= members.len() || j >= members.len() {
            return Err(Error::NotARetraction(format!(
                "no cover member {}",
                i.max(j)
            )));
        }
        if ri.from != members[i] || rj.from != members[j] {
            return Err(Error::NotARetraction(
                "retraction source is not the cover member".into(),
            ));
        }
        if ri.onto != rj.onto
            || !ri.onto.contains(x)
            || !ri.onto.is_subset(&members[i].intersection(&members[j]))
        {
            return Err(Error::NotARetraction(format!(
                "retractions at `{}` do not share a neighbourhood inside the overlap",
                q.objects().name(x)
            )));
        }
        check_retraction(q, ri)?;
        check_retraction(q, rj)?;
    }
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            for x in members[i].intersection(&members[j]).points() {
                if !family
                    .entries
                    .iter()
                    .any(|e| e.0 == i && e.1 == j && e.2 == x)
                {
                    return Err(Error::NotARetraction(format!(
                        "no retraction given for charts {i}, {j} at `{}`",
                        q.objects().name(x)
                    )));
                }
            }
        }
    }
    Ok(is_path_compatible(q, cover))
}

/// Identity retractions for a cover whose overlaps all equal both members.
pub fn identity_retractions(q: &TopGroupoid, cover: &Cover) -> RetractionFamily {
    let members = cover.members();
    let mut entries = Vec::new();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            for x in members[i].intersection(&members[j]).points() {
                entries.push((
                    i,
                    j,
                    x,
                    Retraction::identity(q.base(), &members[i]),
                    Retraction::identity(q.base(), &members[j]),
                ));
            }
        }
    }
    RetractionFamily { entries }
}

/// Continuous retractions `U → W` of object spaces, found by exhaustive search
/// in lexicographic order. Returns the first one, indexed over all points.
pub fn find_space_retraction(space: &FinSpace, u: &OpenSet, w: &OpenSet) -> Option<Vec<Point>> {
    if !w.is_subset(u) || w.is_empty() {
        return None;
    }
    let free: Vec<Point> = u.points().filter(|&x| !w.contains(x)).collect();
    let targets: Vec<Point> = w.points().collect();
    let mut map: Vec<Point> = (0..space.len()).collect();
    fn continuous_so_far(space: &FinSpace, u: &OpenSet, map: &[Point], assigned: &Bits) -> bool {
        assigned.ones().all(|x| {
            space
                .minup(x)
                .ones()
                .filter(|z| u.contains(*z) && assigned.contains(*z))
                .all(|z| space.minup(map[x]).contains(map[z]))
        })
    }
    fn go(
        k: usize,
        free: &[Point],
        targets: &[Point],
        space: &FinSpace,
        u: &OpenSet,
        map: &mut Vec<Point>,
        assigned: &mut Bits,
    ) -> bool {
        if k == free.len() {
            return true;
        }
        for &t in targets {
            map[free[k]] = t;
            assigned.insert(free[k]);
            if continuous_so_far(space, u, map, assigned)
                && go(k + 1, free, targets, space, u, map, assigned)
            {
                return true;
            }
            assigned.set(free[k], false);
        }
        false
    }
    let mut assigned = w.bits().clone();
    if !continuous_so_far(space, u, &map, &assigned) {
        return None;
    }
    go(0, &free, &targets, space, u, &mut map, &mut assigned).then_some(map)
}

// ---------------------------------------------------------------------------
// sections and trivialization

/// A continuous `s: U → star(x)` with `dst ∘ s = 1_U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub base: Point,
    pub carrier: OpenSet,
    /// `values[y]` is defined for `y ∈ carrier`.
    pub values: Vec<Option<Arrow>>,
}

impl Section {
    pub fn at(&self, y: Point) -> Arrow {
        self.values[y].expect("point in carrier")
    }
}

/// Checks that `s` is a continuous section of `dst` over its carrier.
pub fn check_section(q: &TopGroupoid, s: &Section) -> Result<()> {
    let g = q.base();
    let space = q.objects();
    if !s.carrier.contains(s.base) {
        return Err(Error::PointNotInCarrier(space.name(s.base).to_string()));
    }
    for y in s.carrier.points() {
        let Some(v) = s.values.get(y).copied().flatten() else {
            return Err(Error::PointNotInCarrier(space.name(y).to_string()));
        };
        if g.src(v) != s.base || g.dst(v) != y {
            return Err(Error::NotAMorphism(format!(
                "`{}` is not an arrow from the base point to `{}`",
                g.arrow_name(v),
                space.name(y)
            )));
        }
    }
    for y in s.carrier.points() {
        for z in space.minup(y).ones() {
            if !q.arrow_space().minup(s.at(y)).contains(s.at(z)) {
                return Err(Error::NotContinuous(space.name(y).to_string()));
            }
        }
    }
    Ok(())
}

/// First continuous section `U → star(x)` in lexicographic order of choices.
pub fn find_section(q: &TopGroupoid, u: &OpenSet, x: Point) -> Result<Section> {
    let g = q.base();
    let space = q.objects();
    if !u.contains(x) {
        return Err(Error::PointNotInCarrier(space.name(x).to_string()));
    }
    let points: Vec<Point> = u.points().collect();
    let a = q.arrow_space();
    let mut values: Vec<Option<Arrow>> = vec![None; space.len()];
    fn go(
        k: usize,
        points: &[Point],
        x: Point,
        g: &FinGroupoid,
        space: &FinSpace,
        a: &FinSpace,
        values: &mut Vec<Option<Arrow>>,
    ) -> bool {
        if k == points.len() {
            return true;
        }
        let y = points[k];
        let options: Vec<Arrow> = g.hom(x, y).collect();
        for v in options {
            let ok = points[..k].iter().all(|&z| {
                let vz = values[z].expect("assigned");
                (!space.minup(y).contains(z) || a.minup(v).contains(vz))
                    && (!space.minup(z).contains(y) || a.minup(vz).contains(v))
            });
            if ok {
                values[y] = Some(v);
                if go(k + 1, points, x, g, space, a, values) {
                    return true;
                }
                values[y] = None;
            }
        }
        false
    }
    if go(0, &points, x, g, space, a, &mut values) {
        Ok(Section {
            base: x,
            carrier: u.clone(),
            values,
        })
    } else {
        Err(Error::NoSection)
    }
}

/// The isomorphism `Q|U ≅ Q(x) × (U × U)`, `g ↦ (s(y)·g·s(z)⁻¹, (y, z))`.
#[derive(Debug, Clone)]
pub struct Trivialization {
    /// `Q(x) × (U × U)`; its objects are `U` re-indexed in increasing order.
    pub product: TopGroupoid,
    /// Arrows of `Q(x)`, in increasing order; index `k` is group element `k`.
    pub vertex_group: Vec<Arrow>,
    /// Point of `U` to object of the product.
    pub object_map: Vec<Option<Point>>,
    /// Arrow of `Q|U` to arrow of the product.
    pub arrow_map: Vec<Option<Arrow>>,
    /// Inverse of `arrow_map`.
    pub inverse: Vec<Arrow>,
}

/// Builds the product groupoid and the map `φ` and verifies arrow by arrow
/// that `φ` is a bijective morphism, continuous in both directions.
pub fn trivialize(q: &TopGroupoid, s: &Section) -> Result<Trivialization> {
    check_section(q, s)?;
    let g = q.base();
    let space = q.objects();
    let a = q.arrow_space();
    let u = &s.carrier;
    let x = s.base;
    let vertex: Vec<Arrow> = g.hom(x, x).collect();
    let pos = |k: Arrow| {
        vertex
            .iter()
            .position(|&v| v == k)
            .expect("vertex group element")
    };
    let table: Vec<Vec<usize>> = vertex
        .iter()
        .map(|&k| {
            vertex
                .iter()
                .map(|&l| pos(g.compose(k, l).expect("loops compose")))
                .collect()
        })
        .collect();
    let group = FinGroup::from_table(
        vertex
            .iter()
            .map(|&k| g.arrow_name(k).to_string())
            .collect(),
        table,
    )?;
    let m = group.order();
    let (sub, back) = space.subspace(u.bits());
    let n = sub.len();
    let mut object_map = vec![None; space.len()];
    for (i, &p) in back.iter().enumerate() {
        object_map[p] = Some(i);
    }
    // product topology: Q(x) as a subspace of the arrow space, times U × U
    let prod = product_with_pair(&group, &sub);
    let idx = |k: usize, y: usize, z: usize| (y * n + z) * m + k;
    let minups: Vec<Vec<Arrow>> = (0..prod.len())
        .map(|p| {
            let (k, yz) = (p % m, p / m);
            let (y, z) = (yz / n, yz % n);
            let mut row = Vec::new();
            for k2 in 0..m {
                if !a.minup(vertex[k]).contains(vertex[k2]) {
                    continue;
                }
                for y2 in sub.minup(y).ones() {
                    for z2 in sub.minup(z).ones() {
                        row.push(idx(k2, y2, z2));
                    }
                }
            }
            row
        })
        .collect();
    let product = TopGroupoid::from_minups(prod, minups)
        .map_err(|e| Error::NotAnIso(format!("product is not topological: {e}")))?;

    let phi = |h: Arrow| -> Arrow {
        let (y, z) = (g.src(h), g.dst(h));
        let k = g
            .compose(
                g.compose(s.at(y), h).expect("s(y) ends at y"),
                g.inv(s.at(z)),
            )
            .expect("g ends at z");
        idx(
            pos(k),
            object_map[y].expect("in U"),
            object_map[z].expect("in U"),
        )
    };
    let over_u: Vec<Arrow> = g.arrows_over(u.bits()).ones().collect();
    let mut arrow_map = vec![None; g.len()];
    let mut inverse = vec![usize::MAX; product.base().len()];
    for &h in &over_u {
        let p = phi(h);
        if inverse[p] != usize::MAX {
            return Err(Error::NotAnIso(format!(
                "`{}` and `{}` collide",
                g.arrow_name(inverse[p]),
                g.arrow_name(h)
            )));
        }
        inverse[p] = h;
        arrow_map[h] = Some(p);
    }
    if let Some(p) = inverse.iter().position(|&h| h == usize::MAX) {
        return Err(Error::NotAnIso(format!(
            "`{}` is not hit",
            product.base().arrow_name(p)
        )));
    }
    let pb = product.base();
    let pa = product.arrow_space();
    for &h in &over_u {
        let p = arrow_map[h].expect("mapped");
        if pb.src(p) != object_map[g.src(h)].expect("in U")
            || pb.dst(p) != object_map[g.dst(h)].expect("in U")
        {
            return Err(Error::NotAnIso(format!(
                "endpoints of `{}`",
                g.arrow_name(h)
            )));
        }
        for &k in g.out_of(g.dst(h)) {
            if !u.contains(g.dst(k)) {
                continue;
            }
            let hk = g.compose(h, k).expect("composable");
            if pb.compose(p, arrow_map[k].expect("mapped")) != arrow_map[hk] {
                return Err(Error::NotAnIso(format!(
                    "composite of `{}`, `{}`",
                    g.arrow_name(h),
                    g.arrow_name(k)
                )));
            }
        }
        for h2 in a.minup(h).ones() {
            if !pa
                .minup(p)
                .contains(arrow_map[h2].expect("minup stays over U"))
            {
                return Err(Error::NotAnIso(format!(
                    "not continuous at `{}`",
                    g.arrow_name(h)
                )));
            }
        }
    }
    for p in 0..pb.len() {
        for p2 in pa.minup(p).ones() {
            if !a.minup(inverse[p]).contains(inverse[p2]) {
                return Err(Error::NotAnIso(format!(
                    "inverse not continuous at `{}`",
                    pb.arrow_name(p)
                )));
            }
        }
    }
    Ok(Trivialization {
        product,
        vertex_group: vertex,
        object_map,
        arrow_map,
        inverse,
    })
}

/// Retraction `Q|U → Q|W` covering a space retraction `ρ: U → W`, built from
/// a section over `U`: `r(g) = s(ρy)⁻¹·s(y)·g·s(z)⁻¹·s(ρz)`.
pub fn retraction_from_section(
    q: &TopGroupoid,
    s: &Section,
    w: &OpenSet,
    rho: &[Point],
) -> Result<Retraction> {
    check_section(q, s)?;
    let g = q.base();
    let u = &s.carrier;
    if !w.is_subset(u) {
        return Err(Error::NotARetraction(
            "target is not inside the section's domain".into(),
        ));
    }
    let mut arrow_map: Vec<Arrow> = (0..g.len()).collect();
    for h in g.arrows_over(u.bits()).ones() {
        let (y, z) = (g.src(h), g.dst(h));
        let (ry, rz) = (rho[y], rho[z]);
        if !w.contains(ry) || !w.contains(rz) {
            return Err(Error::NotARetraction("object map leaves the target".into()));
        }
        let c = |a: Arrow, b: Arrow| g.compose(a, b).expect("composable by construction");
        let loop_ = c(c(s.at(y), h), g.inv(s.at(z)));
        arrow_map[h] = c(c(g.inv(s.at(ry)), loop_), s.at(rz));
    }
    let r = Retraction {
        from: u.clone(),
        onto: w.clone(),
        object_map: rho.to_vec(),
        arrow_map,
    };
    check_retraction(q, &r)?;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn star_of_pair_d2() {
        let q = top_pair(&fixtures::d2());
        let star = q.star(0).unwrap();
        assert_eq!(q.base().fmt_arrows(&star), "{a/a, a/b}");
        assert!(matches!(q.star(7), Err(Error::UnknownObject(_))));
    }

    #[test]
    fn star_of_bundle_is_the_fibre() {
        let q = top_bundle(&fixtures::c4(), &FinGroup::cyclic(2));
        let star = q.star(2).unwrap();
        assert_eq!(star, q.base().vertex_group(2));
    }

    #[test]
    fn sym2_star_has_eight_arrows_and_is_a_circle() {
        let q = fixtures::sym2();
        for b in 0..4 {
            assert_eq!(q.star(b).unwrap().count_ones(..), 8);
            let (sp, _) = q.star_space(b).unwrap();
            assert!(sp.find_homeomorphism(&fixtures::c8()).is_some());
        }
    }

    #[test]
    fn discrete_topology_needs_discrete_base() {
        let ok = TopGroupoid::with_discrete_topology(pair_groupoid(&fixtures::d2()));
        assert!(ok.is_ok());
        let bad = TopGroupoid::with_discrete_topology(pair_groupoid(&fixtures::s2()));
        assert!(matches!(bad, Err(Error::NotTopological(_))));
    }

    #[test]
    fn sierpinski_topology_on_z2_is_rejected() {
        // composition fails to be continuous whichever element is open
        let q = bundle_of_groups(&FinSpace::discrete(&["*"]), &[FinGroup::cyclic(2)]).unwrap();
        let err = TopGroupoid::from_minups(q.clone(), vec![vec![0, 1], vec![1]]).unwrap_err();
        assert!(matches!(err, Error::NotTopological(_)));
        assert!(TopGroupoid::from_minups(q.clone(), vec![vec![0], vec![0, 1]]).is_err());
        assert!(TopGroupoid::from_minups(q, vec![vec![0, 1], vec![0, 1]]).is_ok());
    }

    #[test]
    fn c1_of_discrete_bundle_is_discrete() {
        let q = top_bundle(&fixtures::d2(), &FinGroup::cyclic(2));
        assert_eq!(q.c1(&q.objects().whole()), q.base().discrete());
        assert!(!q.is_star_connected());
    }

    #[test]
    fn pair_groupoids_are_star_connected_on_connected_spaces() {
        let q = top_pair(&fixtures::c4());
        assert!(q.is_star_connected());
        let q = top_pair(&fixtures::s2());
        assert!(q.is_star_connected());
        let q = top_pair(&fixtures::d2());
        assert!(!q.is_star_connected());
    }

    #[test]
    fn sym2_is_star_connected_but_not_on_a_punctured_circle() {
        let q = fixtures::sym2();
        assert!(q.is_star_connected());
        let u = q.objects().open_named(&["x1", "x2", "y1"]).unwrap();
        let c = q.c1(&u);
        assert!(c.len() < q.base().full_on(&u).len());
        assert!(q.base().wide(&u, c.arrows().clone()).is_ok());
    }

    #[test]
    fn single_member_cover_gives_loc_of_c1() {
        let q = fixtures::sym2();
        let whole = q.objects().whole();
        let s = c1_local(&q, &Cover::single(&whole)).unwrap();
        assert_eq!(s, germs::loc(q.base(), &q.c1(&whole)));
    }

    #[test]
    fn sym2_two_chart_cover_is_path_compatible() {
        let q = fixtures::sym2();
        let cover = fixtures::sym2_cover(&q);
        assert!(is_path_compatible(&q, &cover));
        let s = c1_local(&q, &cover).unwrap();
        assert_eq!(germs::glob(q.base(), &s), q.base().full());
    }

    #[test]
    fn incompatible_cover_is_reported() {
        let (q, cover) = fixtures::incompatible_cover();
        match c1_local(&q, &cover) {
            Err(Error::NotPathCompatible { left, right, .. }) => assert_ne!(left, right),
            other => panic!("expected incompatibility, got {other:?}"),
        }
    }

    #[test]
    fn cover_validation() {
        let c4 = fixtures::c4();
        let u = c4.open_named(&["x1"]).unwrap();
        assert!(matches!(
            Cover::new(&c4, &c4.whole(), vec![u]),
            Err(Error::NotACover(_))
        ));
        let covers = Cover::all_covers(&c4, &c4.whole(), 12, 16).unwrap();
        assert!(covers.iter().any(|c| c.members().len() == 1));
        assert!(covers
            .iter()
            .all(|c| Cover::new(&c4, &c4.whole(), c.members().to_vec()).is_ok()));
    }

    #[test]
    fn discrete_space_covers_are_path_local() {
        let d2 = fixtures::d2();
        let q = top_pair(&d2);
        for cover in Cover::all_covers(&d2, &d2.whole(), 12, 16).unwrap() {
            assert!(is_path_local(&q, &cover, 12).unwrap());
        }
    }

    #[test]
    fn identity_retractions_pass_the_criterion() {
        let q = top_pair(&fixtures::c4());
        let whole = q.objects().whole();
        let cover = Cover::new(q.objects(), &whole, vec![whole.clone(), whole.clone()]).unwrap();
        let fam = identity_retractions(&q, &cover);
        assert!(check_retraction_criterion(&q, &cover, &fam).unwrap());
    }

    #[test]
    fn broken_retraction_is_rejected() {
        let q = top_pair(&fixtures::c4());
        let whole = q.objects().whole();
        let mut r = Retraction::identity(q.base(), &whole);
        let a = q.base().arrow_index("x1/y1").unwrap();
        r.arrow_map[a] = q.base().arrow_index("x1/x1").unwrap();
        assert!(matches!(
            check_retraction(&q, &r),
            Err(Error::NotARetraction(_))
        ));
    }

    #[test]
    fn product_retraction_from_a_section() {
        let q = top_product(&FinGroup::cyclic(2), &fixtures::s2());
        let whole = q.objects().whole();
        let o = q.objects().open_named(&["o"]).unwrap();
        let s = find_section(&q, &whole, 0).unwrap();
        let rho = find_space_retraction(q.objects(), &whole, &o).unwrap();
        let r = retraction_from_section(&q, &s, &o, &rho).unwrap();
        assert!(check_retraction(&q, &r).is_ok());
    }

    #[test]
    fn sections_exist_or_not() {
        let q = top_pair(&fixtures::c4());
        assert!(find_section(&q, &q.objects().whole(), 0).is_ok());
        let b = top_bundle(&fixtures::c4(), &FinGroup::cyclic(2));
        assert_eq!(
            find_section(&b, &b.objects().whole(), 0),
            Err(Error::NoSection)
        );
        let sym = fixtures::sym2();
        let u = sym.objects().open_named(&["x1", "x2", "y1"]).unwrap();
        assert!(find_section(&sym, &u, 0).is_ok());
        assert_eq!(
            find_section(&sym, &sym.objects().whole(), 0),
            Err(Error::NoSection)
        );
    }

    #[test]
    fn trivialization_of_sym2_on_a_punctured_circle() {
        let sym = fixtures::sym2();
        let u = sym.objects().open_named(&["x1", "x2", "y1"]).unwrap();
        let s = find_section(&sym, &u, 2).unwrap();
        let t = trivialize(&sym, &s).unwrap();
        assert_eq!(t.product.base().len(), 2 * 9);
        assert_eq!(t.vertex_group.len(), 2);
    }
}
