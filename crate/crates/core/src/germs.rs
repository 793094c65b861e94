//! The sheaf of germs of wide subgroupoids and its continuous sections.
//!
//! Every point `x` of an Alexandrov space has a smallest open neighbourhood
//! `minup(x)`, contained in every open set around `x`. Two wide subgroupoids
//! agree on *some* neighbourhood of `x` iff they agree on `minup(x)`, so the
//! germ at `x` is represented exactly by the restriction to `minup(x)` and germ
//! equality is representative equality. The same fact makes the stalk order
//! plain inclusion of representatives.
//!
//! A consequence used throughout: `glob(s)` (the least wide `H` with
//! `s ≤ loc(H)`) is the subgroupoid generated by the union of all germ
//! representatives, since `s(x) ≤ loc(H)(x)` says exactly that the arrows of
//! the representative at `x` lie in `H`. The defining intersection is kept as
//! [`glob_oracle`] and the two are compared in tests.
//!
//! Another: every local subgroupoid over an Alexandrov space is coherent. The
//! arrows of `s(x)` lie inside `minup(x)` and inside `glob(s)`, hence inside
//! `glob(s)|minup(x) = loc(glob(s))(x)`.

use std::collections::{HashMap, HashSet};

use crate::bits::{self, Bits};
use crate::error::{Error, Result};
use crate::finspace::{OpenSet, Point};
use crate::groupoid::{FinGroupoid, WideSubgroupoid};
use crate::par;

/// Default bound on the number of sections [`enumerate_sections`] will produce.
pub const DEFAULT_MAX_SECTIONS: usize = 200_000;

/// A germ at `basepoint`, represented by its restriction to `minup(basepoint)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Germ {
    basepoint: Point,
    rep: WideSubgroupoid,
}

impl Germ {
    pub fn basepoint(&self) -> Point {
        self.basepoint
    }

    pub fn rep(&self) -> &WideSubgroupoid {
        &self.rep
    }
}

/// A continuous section of the germ sheaf of `Q|carrier`: one canonical
/// representative per point, with `s(y) = s(x)|minup(y)` whenever
/// `y ∈ minup(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalSubgroupoid {
    carrier: OpenSet,
    reps: Vec<Option<WideSubgroupoid>>,
}

impl LocalSubgroupoid {
    /// Validates continuity and that each representative lives on `minup(x)`.
    pub fn from_reps(
        q: &FinGroupoid,
        carrier: &OpenSet,
        reps: Vec<(Point, WideSubgroupoid)>,
    ) -> Result<Self> {
        let space = q.objects();
        let mut slots: Vec<Option<WideSubgroupoid>> = vec![None; space.len()];
        for (x, rep) in reps {
            if !carrier.contains(x) {
                return Err(Error::PointNotInCarrier(space.name(x).to_string()));
            }
            if rep.carrier().bits() != space.minup(x) {
                return Err(Error::DiscontinuousSection(space.name(x).to_string()));
            }
            q.wide(rep.carrier(), rep.arrows().clone())?;
            slots[x] = Some(rep);
        }
        for x in carrier.points() {
            if slots[x].is_none() {
                return Err(Error::PointNotInCarrier(format!(
                    "no germ given at `{}`",
                    space.name(x)
                )));
            }
        }
        let s = LocalSubgroupoid {
            carrier: carrier.clone(),
            reps: slots,
        };
        if let Some(x) = s.discontinuity(q) {
            return Err(Error::DiscontinuousSection(space.name(x).to_string()));
        }
        Ok(s)
    }

    fn discontinuity(&self, q: &FinGroupoid) -> Option<Point> {
        let space = q.objects();
        for x in self.carrier.points() {
            let rx = self.rep(x);
            for y in space.minup(x).ones() {
                if y == x {
                    continue;
                }
                let restricted = q.restrict_unchecked(rx, &space.minup_open(y));
                if &restricted != self.rep(y) {
                    return Some(x);
                }
            }
        }
        None
    }

    pub fn carrier(&self) -> &OpenSet {
        &self.carrier
    }

    /// Representative of the germ at `x`. Panics if `x` is outside the carrier.
    pub fn rep(&self, x: Point) -> &WideSubgroupoid {
        self.reps[x].as_ref().expect("point in carrier")
    }

    pub fn germ(&self, x: Point) -> Result<Germ> {
        match &self.reps.get(x) {
            Some(Some(rep)) => Ok(Germ {
                basepoint: x,
                rep: rep.clone(),
            }),
            _ => Err(Error::PointNotInCarrier(format!("#{x}"))),
        }
    }

    /// All arrows appearing in some representative.
    pub fn arrow_union(&self, q: &FinGroupoid) -> Bits {
        let mut out = q.empty_arrows();
        for x in self.carrier.points() {
            out.union_with(self.rep(x).arrows());
        }
        out
    }
}

/// A family of charts `(U_i, H_i)` covering `carrier` with `Comp(H)`:
/// `H_i|minup(x) = H_j|minup(x)` for every `x ∈ U_i ∩ U_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atlas {
    carrier: OpenSet,
    charts: Vec<WideSubgroupoid>,
}

impl Atlas {
    pub fn new(q: &FinGroupoid, carrier: &OpenSet, charts: Vec<WideSubgroupoid>) -> Result<Self> {
        let space = q.objects();
        let mut covered = bits::empty(space.len());
        for h in &charts {
            if !h.carrier().is_subset(carrier) {
                return Err(Error::NotAnAtlas("chart leaves the carrier".into()));
            }
            q.wide(h.carrier(), h.arrows().clone())?;
            covered.union_with(h.carrier().bits());
        }
        if &covered != carrier.bits() {
            return Err(Error::NotAnAtlas(format!(
                "charts do not cover {}",
                space.fmt_set(carrier.bits())
            )));
        }
        for (i, hi) in charts.iter().enumerate() {
            for (j, hj) in charts.iter().enumerate().skip(i + 1) {
                for x in hi.carrier().intersection(hj.carrier()).points() {
                    let w = space.minup_open(x);
                    if q.restrict_unchecked(hi, &w) != q.restrict_unchecked(hj, &w) {
                        return Err(Error::CompViolation {
                            i,
                            j,
                            x: space.name(x).to_string(),
                        });
                    }
                }
            }
        }
        Ok(Atlas {
            carrier: carrier.clone(),
            charts,
        })
    }

    /// The one-chart atlas `{(U, H)}`.
    pub fn single(h: WideSubgroupoid) -> Self {
        Atlas {
            carrier: h.carrier().clone(),
            charts: vec![h],
        }
    }

    /// The atlas `{(minup(x), s(x))}`, which refines every atlas of `s`.
    pub fn minimal(q: &FinGroupoid, s: &LocalSubgroupoid) -> Self {
        let _ = q;
        Atlas {
            carrier: s.carrier.clone(),
            charts: s.carrier.points().map(|x| s.rep(x).clone()).collect(),
        }
    }

    pub fn carrier(&self) -> &OpenSet {
        &self.carrier
    }

    pub fn charts(&self) -> &[WideSubgroupoid] {
        &self.charts
    }
}

pub fn germ_of(q: &FinGroupoid, h: &WideSubgroupoid, x: Point) -> Result<Germ> {
    if !h.carrier().contains(x) {
        return Err(Error::PointNotInCarrier(q.objects().name(x).to_string()));
    }
    Ok(Germ {
        basepoint: x,
        rep: q.restrict_unchecked(h, &q.objects().minup_open(x)),
    })
}

/// `loc(G)(x) = [U, G]_x` over the carrier `U` of `G`.
pub fn loc(q: &FinGroupoid, g: &WideSubgroupoid) -> LocalSubgroupoid {
    let space = q.objects();
    let mut reps = vec![None; space.len()];
    for x in g.carrier().points() {
        reps[x] = Some(q.restrict_unchecked(g, &space.minup_open(x)));
    }
    LocalSubgroupoid {
        carrier: g.carrier().clone(),
        reps,
    }
}

/// The local subgroupoid of an atlas: `s(x) = H_i|minup(x)` for any chart
/// containing `x`.
pub fn from_atlas(q: &FinGroupoid, atlas: &Atlas) -> LocalSubgroupoid {
    let space = q.objects();
    let mut reps = vec![None; space.len()];
    for h in &atlas.charts {
        for x in h.carrier().points() {
            if reps[x].is_none() {
                reps[x] = Some(q.restrict_unchecked(h, &space.minup_open(x)));
            }
        }
    }
    LocalSubgroupoid {
        carrier: atlas.carrier.clone(),
        reps,
    }
}

/// Two atlases are compatible iff their charts agree on `minup(x)` at every
/// shared point.
pub fn atlases_compatible(q: &FinGroupoid, a: &Atlas, b: &Atlas) -> bool {
    let space = q.objects();
    a.charts.iter().all(|hi| {
        b.charts.iter().all(|hj| {
            hi.carrier().intersection(hj.carrier()).points().all(|x| {
                let w = space.minup_open(x);
                q.restrict_unchecked(hi, &w) == q.restrict_unchecked(hj, &w)
            })
        })
    })
}

/// `s|U`, a local subgroupoid of `Q|U`. `minup(y)` is unchanged for `y ∈ U`
/// since `U` is open.
pub fn restrict_local(s: &LocalSubgroupoid, u: &OpenSet) -> Result<LocalSubgroupoid> {
    if !u.is_subset(&s.carrier) {
        return Err(Error::CarrierMismatch);
    }
    let reps = s
        .reps
        .iter()
        .enumerate()
        .map(|(x, r)| if u.contains(x) { r.clone() } else { None })
        .collect();
    Ok(LocalSubgroupoid {
        carrier: u.clone(),
        reps,
    })
}

pub fn stalk_le(a: &Germ, b: &Germ) -> Result<bool> {
    if a.basepoint != b.basepoint {
        return Err(Error::BasepointMismatch);
    }
    a.rep.le(&b.rep)
}

/// Pointwise stalk order.
pub fn local_le(s: &LocalSubgroupoid, t: &LocalSubgroupoid) -> Result<bool> {
    if s.carrier != t.carrier {
        return Err(Error::CarrierMismatch);
    }
    Ok(s.carrier
        .points()
        .all(|x| s.rep(x).arrows().is_subset(t.rep(x).arrows())))
}

/// Least wide subgroupoid `H` of `Q|U` with `s ≤ loc(H)`, computed as the
/// subgroupoid generated by all germ representatives.
pub fn glob(q: &FinGroupoid, s: &LocalSubgroupoid) -> WideSubgroupoid {
    q.generate(&s.carrier, &s.arrow_union(q))
        .expect("representatives lie over the carrier")
}

/// The defining intersection of all wide `H` with `s ≤ loc(H)`, by enumeration.
pub fn glob_oracle(
    q: &FinGroupoid,
    s: &LocalSubgroupoid,
    max_arrows: usize,
) -> Result<WideSubgroupoid> {
    let all = q.enumerate_wide(&s.carrier, max_arrows)?;
    let mut acc = q.full_on(&s.carrier);
    for h in all {
        if local_le(s, &loc(q, &h))? {
            acc = acc.meet(&h)?;
        }
    }
    Ok(acc)
}

/// Subgroupoid generated by all chart subgroupoids.
pub fn glob_atlas(q: &FinGroupoid, atlas: &Atlas) -> WideSubgroupoid {
    let mut seed = q.empty_arrows();
    for h in &atlas.charts {
        seed.union_with(h.arrows());
    }
    q.generate(&atlas.carrier, &seed)
        .expect("charts lie over the carrier")
}

/// `b` refines `a`: each chart `(V_j, K_j)` of `b` sits in some `U_i` with
/// `H_i|V_j = K_j`.
pub fn refines(q: &FinGroupoid, b: &Atlas, a: &Atlas) -> bool {
    b.charts.iter().all(|k| {
        a.charts.iter().any(|h| {
            k.carrier().is_subset(h.carrier()) && &q.restrict_unchecked(h, k.carrier()) == k
        })
    })
}

/// Bound on candidate charts searched by [`glob_via_refinements`].
pub const MAX_REFINEMENT_CHARTS: usize = 18;

/// Intersection of `glob` over every refinement of `a` whose charts are
/// either charts of `a` or their restrictions to minimal neighbourhoods. The
/// candidate charts are deduplicated and every covering subfamily is visited.
pub fn glob_via_refinements(q: &FinGroupoid, a: &Atlas) -> Result<WideSubgroupoid> {
    let space = q.objects();
    let mut candidates: Vec<WideSubgroupoid> = Vec::new();
    let mut seen = HashSet::new();
    let push = |h: WideSubgroupoid,
                candidates: &mut Vec<WideSubgroupoid>,
                seen: &mut HashSet<WideSubgroupoid>| {
        if seen.insert(h.clone()) {
            candidates.push(h);
        }
    };
    for h in &a.charts {
        push(h.clone(), &mut candidates, &mut seen);
        for x in h.carrier().points() {
            push(
                q.restrict_unchecked(h, &space.minup_open(x)),
                &mut candidates,
                &mut seen,
            );
        }
    }
    if candidates.len() > MAX_REFINEMENT_CHARTS {
        return Err(Error::too_large(
            "refinement chart family",
            candidates.len(),
            MAX_REFINEMENT_CHARTS,
        ));
    }
    let k = candidates.len();
    let masks: Vec<u64> = (1u64..(1u64 << k)).collect();
    let globs: Vec<Option<Bits>> = par::map(&masks, |&m| {
        let mut cover = bits::empty(space.len());
        let mut seed = q.empty_arrows();
        for (c, h) in candidates.iter().enumerate() {
            if m >> c & 1 == 1 {
                cover.union_with(h.carrier().bits());
                seed.union_with(h.arrows());
            }
        }
        (&cover == a.carrier.bits()).then(|| {
            q.generate(&a.carrier, &seed)
                .expect("charts lie over the carrier")
                .arrows()
                .clone()
        })
    });
    let mut acc = q.arrows_over(a.carrier.bits());
    for g in globs.into_iter().flatten() {
        acc.intersect_with(&g);
    }
    Ok(WideSubgroupoid::from_parts(a.carrier.clone(), acc))
}

// ---------------------------------------------------------------------------
// coherence

/// Why a local subgroupoid fails a coherence property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoherenceWitness {
    /// At this point the germs of `s` and `loc(glob(s))` differ; `extra` are
    /// the arrows of `glob(s)|minup(x)` missing from `s(x)` and `missing` the
    /// arrows of `s(x)` outside `glob(s)`.
    Point {
        x: Point,
        extra: Bits,
        missing: Bits,
    },
    /// `s|U` is not coherent.
    Open { u: OpenSet, x: Point },
}

/// Point where `s(x) ⊄ glob(s)|minup(x)`, if any.
pub fn coherence_witness(q: &FinGroupoid, s: &LocalSubgroupoid) -> Option<CoherenceWitness> {
    let g = glob(q, s);
    let lg = loc(q, &g);
    s.carrier.points().find_map(|x| {
        let missing = bits::difference(s.rep(x).arrows(), lg.rep(x).arrows());
        (!missing.is_clear()).then(|| CoherenceWitness::Point {
            x,
            extra: bits::difference(lg.rep(x).arrows(), s.rep(x).arrows()),
            missing,
        })
    })
}

/// `s ≤ loc(glob(s))`.
pub fn is_coherent(q: &FinGroupoid, s: &LocalSubgroupoid) -> bool {
    coherence_witness(q, s).is_none()
}

pub fn global_coherence_witness(q: &FinGroupoid, s: &LocalSubgroupoid) -> Option<CoherenceWitness> {
    let g = glob(q, s);
    let lg = loc(q, &g);
    s.carrier.points().find_map(|x| {
        (s.rep(x) != lg.rep(x)).then(|| CoherenceWitness::Point {
            x,
            extra: bits::difference(lg.rep(x).arrows(), s.rep(x).arrows()),
            missing: bits::difference(s.rep(x).arrows(), lg.rep(x).arrows()),
        })
    })
}

/// `s = loc(glob(s))`.
pub fn is_globally_coherent(q: &FinGroupoid, s: &LocalSubgroupoid) -> bool {
    global_coherence_witness(q, s).is_none()
}

pub fn total_coherence_witness(
    q: &FinGroupoid,
    s: &LocalSubgroupoid,
    max_points: usize,
) -> Result<Option<CoherenceWitness>> {
    let opens: Vec<OpenSet> = q
        .objects()
        .open_sets(max_points)?
        .into_iter()
        .filter(|u| u.is_subset(&s.carrier) && !u.is_empty())
        .collect();
    par::try_find_first(&opens, |u| {
        let su = restrict_local(s, u)?;
        Ok(match coherence_witness(q, &su) {
            Some(CoherenceWitness::Point { x, .. }) => {
                Some(CoherenceWitness::Open { u: u.clone(), x })
            }
            _ => None,
        })
    })
}

/// `s|U` coherent for every open `U`.
pub fn is_totally_coherent(
    q: &FinGroupoid,
    s: &LocalSubgroupoid,
    max_points: usize,
) -> Result<bool> {
    Ok(total_coherence_witness(q, s, max_points)?.is_none())
}

/// `loc(H)` is coherent.
pub fn is_locally_coherent(q: &FinGroupoid, h: &WideSubgroupoid) -> bool {
    is_coherent(q, &loc(q, h))
}

/// Arrows of `H` not in `glob(loc(H))`; empty iff `H` is coherent.
pub fn incoherent_arrows(q: &FinGroupoid, h: &WideSubgroupoid) -> Bits {
    let g = glob(q, &loc(q, h));
    bits::difference(h.arrows(), g.arrows())
}

/// `H = glob(loc(H))`.
pub fn is_coherent_wide(q: &FinGroupoid, h: &WideSubgroupoid) -> bool {
    incoherent_arrows(q, h).is_clear()
}

/// `glob(s) = glob(atlas)`, after checking that the atlas defines `s`.
pub fn is_globally_adapted(q: &FinGroupoid, atlas: &Atlas, s: &LocalSubgroupoid) -> Result<bool> {
    if &from_atlas(q, atlas) != s {
        return Err(Error::NotAnAtlas(
            "atlas does not define this section".into(),
        ));
    }
    Ok(glob(q, s) == glob_atlas(q, atlas))
}

// ---------------------------------------------------------------------------
// enumeration and the sheaf condition

/// Wide subgroupoids of `Q|minup(x)` for every point, computed once.
fn minup_options(
    q: &FinGroupoid,
    points: &[Point],
    max_arrows: usize,
) -> Result<HashMap<Point, Vec<WideSubgroupoid>>> {
    let space = q.objects();
    let lists = par::map(points, |&x| {
        q.enumerate_wide(&space.minup_open(x), max_arrows)
    });
    let mut out = HashMap::new();
    for (&x, l) in points.iter().zip(lists) {
        out.insert(x, l?);
    }
    Ok(out)
}

/// Backtracking over assignments `x ↦ H_x ∈ options[x]` for the points of `U`
/// in increasing order, keeping only those accepted by `agree` on each pair.
fn assignments<F>(
    points: &[Point],
    options: &HashMap<Point, Vec<WideSubgroupoid>>,
    agree: F,
    limit: usize,
    mut visit: impl FnMut(&[usize]) -> bool,
) -> Result<()>
where
    F: Fn(Point, &WideSubgroupoid, Point, &WideSubgroupoid) -> bool,
{
    let mut choice = vec![0usize; points.len()];
    let mut count = 0usize;
    #[allow(clippy::too_many_arguments)]
    fn go<F: Fn(Point, &WideSubgroupoid, Point, &WideSubgroupoid) -> bool>(
        k: usize,
        points: &[Point],
        options: &HashMap<Point, Vec<WideSubgroupoid>>,
        agree: &F,
        choice: &mut Vec<usize>,
        count: &mut usize,
        limit: usize,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> Result<bool> {
        if k == points.len() {
            *count += 1;
            if *count > limit {
                return Err(Error::too_large("section family", *count, limit));
            }
            return Ok(visit(choice));
        }
        let x = points[k];
        for (c, hx) in options[&x].iter().enumerate() {
            let ok = (0..k).all(|j| {
                let y = points[j];
                agree(x, hx, y, &options[&y][choice[j]])
            });
            if ok {
                choice[k] = c;
                if !go(k + 1, points, options, agree, choice, count, limit, visit)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
    go(
        0,
        points,
        options,
        &agree,
        &mut choice,
        &mut count,
        limit,
        &mut visit,
    )?;
    Ok(())
}

/// Every local subgroupoid of `Q|U`, in lexicographic order of the per-point
/// choices (points increasing, each point's options in canonical order).
pub fn enumerate_sections(
    q: &FinGroupoid,
    u: &OpenSet,
    max_arrows: usize,
    max_sections: usize,
) -> Result<Vec<LocalSubgroupoid>> {
    let space = q.objects();
    let points: Vec<Point> = u.points().collect();
    let options = minup_options(q, &points, max_arrows)?;
    let agree = |x: Point, hx: &WideSubgroupoid, y: Point, hy: &WideSubgroupoid| {
        let germ_ok = |a: Point, ha: &WideSubgroupoid, b: Point, hb: &WideSubgroupoid| {
            !space.minup(a).contains(b) || &q.restrict_unchecked(ha, &space.minup_open(b)) == hb
        };
        germ_ok(x, hx, y, hy) && germ_ok(y, hy, x, hx)
    };
    let mut out = Vec::new();
    assignments(&points, &options, agree, max_sections, |choice| {
        let mut reps = vec![None; space.len()];
        for (k, &x) in points.iter().enumerate() {
            reps[x] = Some(options[&x][choice[k]].clone());
        }
        out.push(LocalSubgroupoid {
            carrier: u.clone(),
            reps,
        });
        true
    })?;
    Ok(out)
}

/// A failure of the sheaf condition on the minimal cover of an open set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SheafFailure {
    /// The compatible family glues to at least these two distinct subgroupoids.
    NonUnique {
        u: OpenSet,
        family: Vec<(Point, WideSubgroupoid)>,
        gluings: [WideSubgroupoid; 2],
    },
    /// The compatible family has no gluing.
    NoGluing {
        u: OpenSet,
        family: Vec<(Point, WideSubgroupoid)>,
    },
}

/// Checks the sheaf condition for `L_Q` on every open `U` with respect to its
/// minimal cover `{minup(x) : x ∈ U}`. Every cover of an open set in an
/// Alexandrov space is refined by this one, so nothing is lost by testing it
/// alone. Returns the first failure in open-set order.
pub fn presheaf_is_sheaf(
    q: &FinGroupoid,
    max_points: usize,
    max_arrows: usize,
) -> Result<Option<SheafFailure>> {
    let space = q.objects();
    let opens: Vec<OpenSet> = space
        .open_sets(max_points)?
        .into_iter()
        .filter(|u| !u.is_empty())
        .collect();
    let all_points: Vec<Point> = (0..space.len()).collect();
    let options = minup_options(q, &all_points, max_arrows)?;
    par::try_find_first(&opens, |u| sheaf_failure_on(q, u, &options, max_arrows))
}

fn sheaf_failure_on(
    q: &FinGroupoid,
    u: &OpenSet,
    options: &HashMap<Point, Vec<WideSubgroupoid>>,
    max_arrows: usize,
) -> Result<Option<SheafFailure>> {
    let space = q.objects();
    let points: Vec<Point> = u.points().collect();
    let family_of = |h: &WideSubgroupoid| -> Vec<WideSubgroupoid> {
        points
            .iter()
            .map(|&x| q.restrict_unchecked(h, &space.minup_open(x)))
            .collect()
    };
    let mut glued: HashMap<Vec<WideSubgroupoid>, WideSubgroupoid> = HashMap::new();
    for h in q.enumerate_wide(u, max_arrows)? {
        let fam = family_of(&h);
        if let Some(first) = glued.get(&fam) {
            return Ok(Some(SheafFailure::NonUnique {
                u: u.clone(),
                family: points.iter().copied().zip(fam).collect(),
                gluings: [first.clone(), h],
            }));
        }
        glued.insert(fam, h);
    }
    // compatible on pairwise intersections of the cover members
    let agree = |x: Point, hx: &WideSubgroupoid, y: Point, hy: &WideSubgroupoid| {
        let w = space.minup_open(x).intersection(&space.minup_open(y));
        q.restrict_unchecked(hx, &w) == q.restrict_unchecked(hy, &w)
    };
    let mut missing = None;
    assignments(&points, options, agree, DEFAULT_MAX_SECTIONS, |choice| {
        let fam: Vec<WideSubgroupoid> = points
            .iter()
            .enumerate()
            .map(|(k, x)| options[x][choice[k]].clone())
            .collect();
        if glued.contains_key(&fam) {
            true
        } else {
            missing = Some(fam);
            false
        }
    })?;
    Ok(missing.map(|fam| SheafFailure::NoGluing {
        u: u.clone(),
        family: points.iter().copied().zip(fam).collect(),
    }))
}
