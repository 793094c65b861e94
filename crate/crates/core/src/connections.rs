//! Path connections on finite spaces.
//!
//! Paths are comparability walks `x₀, x₁, …, xₙ`. A connection assigns an
//! arrow `x → y` to each comparable ordered pair, with `γ(x, x) = id(x)` and
//! `γ(y, x) = γ(x, y)⁻¹`; transport along a walk is the product of its steps.
//! The transport and concatenation laws then hold by construction.

use std::collections::{HashMap, VecDeque};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::finspace::{FinSpace, OpenSet, Point};
use crate::germs::{self, Atlas, LocalSubgroupoid};
use crate::groupoid::{Arrow, FinGroupoid, WideSubgroupoid};
use crate::par;
use crate::topgroupoid::{check_overlaps, Cover, Section, TopGroupoid};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Walk {
    vertices: Vec<Point>,
}

impl Walk {
    pub fn new(space: &FinSpace, vertices: Vec<Point>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidConnection("empty walk".into()));
        }
        for &v in &vertices {
            if v >= space.len() {
                return Err(Error::UnknownPoint(format!("#{v}")));
            }
        }
        for w in vertices.windows(2) {
            if !space.comparable(w[0], w[1]) {
                return Err(Error::NonComparableStep(
                    space.name(w[0]).to_string(),
                    space.name(w[1]).to_string(),
                ));
            }
        }
        Ok(Walk { vertices })
    }

    pub fn trivial(x: Point) -> Self {
        Walk { vertices: vec![x] }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn start(&self) -> Point {
        self.vertices[0]
    }

    pub fn end(&self) -> Point {
        *self.vertices.last().expect("nonempty")
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn reversed(&self) -> Walk {
        let mut v = self.vertices.clone();
        v.reverse();
        Walk { vertices: v }
    }

    /// `self` followed by `other`; `None` unless `self` ends where `other` starts.
    pub fn then(&self, other: &Walk) -> Option<Walk> {
        (self.end() == other.start()).then(|| {
            let mut v = self.vertices.clone();
            v.extend_from_slice(&other.vertices[1..]);
            Walk { vertices: v }
        })
    }

    pub fn lies_in(&self, u: &OpenSet) -> bool {
        self.vertices.iter().all(|&v| u.contains(v))
    }

    pub fn fmt(&self, space: &FinSpace) -> String {
        self.vertices
            .iter()
            .map(|&v| space.name(v))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathConnection {
    n: usize,
    gamma: Vec<Option<Arrow>>,
}

impl PathConnection {
    /// Builds `γ` from entries `(x, y, g)` on comparable pairs. Reverse entries
    /// are filled with inverses and the diagonal with identities. Every
    /// comparable pair must end up with an arrow.
    pub fn new(q: &FinGroupoid, entries: &[(Point, Point, Arrow)]) -> Result<Self> {
        let space = q.objects();
        let n = space.len();
        let mut gamma = vec![None; n * n];
        for x in 0..n {
            gamma[x * n + x] = Some(q.id(x));
        }
        let name = |x: Point| space.name(x).to_string();
        let set = |gamma: &mut Vec<Option<Arrow>>, x: Point, y: Point, g: Arrow| -> Result<()> {
            match gamma[x * n + y] {
                Some(old) if old != g => Err(Error::InvalidConnection(format!(
                    "conflicting values `{}` and `{}` for ({}, {})",
                    q.arrow_name(old),
                    q.arrow_name(g),
                    name(x),
                    name(y)
                ))),
                _ => {
                    gamma[x * n + y] = Some(g);
                    Ok(())
                }
            }
        };
        for &(x, y, g) in entries {
            if x >= n || y >= n {
                return Err(Error::UnknownPoint(format!("#{}", x.max(y))));
            }
            if g >= q.len() {
                return Err(Error::UnknownArrow(format!("#{g}")));
            }
            if !space.comparable(x, y) {
                return Err(Error::NonComparableStep(name(x), name(y)));
            }
            if q.src(g) != x || q.dst(g) != y {
                return Err(Error::InvalidConnection(format!(
                    "`{}` does not run from `{}` to `{}`",
                    q.arrow_name(g),
                    name(x),
                    name(y)
                )));
            }
            set(&mut gamma, x, y, g)?;
            set(&mut gamma, y, x, q.inv(g))?;
        }
        for x in 0..n {
            for y in 0..n {
                if space.comparable(x, y) && gamma[x * n + y].is_none() {
                    return Err(Error::InvalidConnection(format!(
                        "no value for ({}, {})",
                        name(x),
                        name(y)
                    )));
                }
            }
        }
        Ok(PathConnection { n, gamma })
    }

    /// `γ(x, y) = s(x)⁻¹·s(y)` from a section over the whole space. Transport
    /// then telescopes, so the connection is flat.
    pub fn from_section(q: &FinGroupoid, s: &Section) -> Result<Self> {
        let space = q.objects();
        if s.carrier != space.whole() {
            return Err(Error::InvalidConnection("section must be global".into()));
        }
        let mut entries = Vec::new();
        for x in 0..space.len() {
            for y in space.minup(x).ones() {
                if y != x {
                    let g = q
                        .compose(q.inv(s.at(x)), s.at(y))
                        .expect("both start at the base point");
                    entries.push((x, y, g));
                }
            }
        }
        PathConnection::new(q, &entries)
    }

    /// `γ(x, y)`; `None` when `x, y` are not comparable.
    pub fn gamma(&self, x: Point, y: Point) -> Option<Arrow> {
        self.gamma[x * self.n + y]
    }

    /// Entries `(x, y, γ(x, y))` with `y ∈ minup(x)`, `y ≠ x`, in order.
    pub fn entries(&self, space: &FinSpace) -> Vec<(Point, Point, Arrow)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in space.minup(x).ones() {
                if y != x {
                    out.push((x, y, self.gamma(x, y).expect("comparable")));
                }
            }
        }
        out
    }

    pub fn transport(&self, q: &FinGroupoid, w: &Walk) -> Result<Arrow> {
        let mut acc = q.id(w.start());
        for step in w.vertices.windows(2) {
            let g = self.gamma(step[0], step[1]).ok_or_else(|| {
                Error::NonComparableStep(
                    q.objects().name(step[0]).to_string(),
                    q.objects().name(step[1]).to_string(),
                )
            })?;
            acc = q.compose(acc, g).expect("walk steps are consecutive");
        }
        Ok(acc)
    }

    /// Arrows `γ(x, y)` for distinct comparable `x, y ∈ U`.
    fn step_arrows(&self, q: &FinGroupoid, u: &OpenSet) -> Bits {
        let mut out = q.empty_arrows();
        for x in u.points() {
            for y in u.points() {
                if x != y {
                    if let Some(g) = self.gamma(x, y) {
                        out.insert(g);
                    }
                }
            }
        }
        out
    }

    /// `C_Γ(Q|U)` as the subgroupoid generated by the step arrows inside `U`.
    pub fn c_gamma(&self, q: &FinGroupoid, u: &OpenSet) -> WideSubgroupoid {
        q.generate(u, &self.step_arrows(q, u))
            .expect("step arrows lie over U")
    }

    /// `C_Γ(Q|U)` as the set of transports of all walks in `U`, by search over
    /// `(endpoint, transport)` states.
    pub fn c_gamma_by_walks(&self, q: &FinGroupoid, u: &OpenSet) -> Bits {
        let space = q.objects();
        let mut out = q.empty_arrows();
        for x in u.points() {
            let mut seen = q.empty_arrows();
            let mut queue = VecDeque::from([q.id(x)]);
            seen.insert(q.id(x));
            while let Some(g) = queue.pop_front() {
                let at = q.dst(g);
                for y in u.points() {
                    if y != at && space.comparable(at, y) {
                        let h = q
                            .compose(g, self.gamma(at, y).expect("comparable"))
                            .expect("consecutive");
                        if !seen.contains(h) {
                            seen.insert(h);
                            queue.push_back(h);
                        }
                    }
                }
            }
            out.union_with(&seen);
        }
        out
    }

    /// Every step arrow lies in the comparability component of its source
    /// identity within the star, so `C_Γ(Q) ≤ C₁(Q)`.
    pub fn steps_in_star_components(&self, q: &TopGroupoid) -> bool {
        let whole = q.objects().whole();
        (0..self.n).all(|x| {
            let comp = q.star_component(&whole, x);
            (0..self.n).all(|y| self.gamma(x, y).is_none_or(|g| comp.contains(g)))
        })
    }
}

/// How spanning trees are grown in [`is_flat_on`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreeStrategy {
    Bfs,
    Dfs,
}

/// A closed walk with nontrivial transport.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatnessWitness {
    pub cycle: Walk,
    pub transport: Arrow,
}

/// Spanning forest of the comparability graph on `U`: parent per point, roots
/// are least points of their components. Neighbours are visited in index order.
fn spanning_forest(space: &FinSpace, u: &OpenSet, strategy: TreeStrategy) -> Vec<Option<Point>> {
    let n = space.len();
    let mut parent: Vec<Option<Point>> = vec![None; n];
    let mut seen = vec![false; n];
    for root in u.points() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut frontier: VecDeque<Point> = VecDeque::from([root]);
        while let Some(v) = match strategy {
            TreeStrategy::Bfs => frontier.pop_front(),
            TreeStrategy::Dfs => frontier.pop_back(),
        } {
            let nbrs: Vec<Point> = u
                .points()
                .filter(|&w| w != v && !seen[w] && space.comparable(v, w))
                .collect();
            match strategy {
                TreeStrategy::Bfs => {
                    for w in nbrs {
                        seen[w] = true;
                        parent[w] = Some(v);
                        frontier.push_back(w);
                    }
                }
                TreeStrategy::Dfs => {
                    // descend into the first unseen neighbour, revisit v later
                    if let Some(&w) = nbrs.first() {
                        seen[w] = true;
                        parent[w] = Some(v);
                        frontier.push_back(v);
                        frontier.push_back(w);
                    }
                }
            }
        }
    }
    parent
}

fn path_to_root(parent: &[Option<Point>], mut v: Point) -> Vec<Point> {
    let mut out = vec![v];
    while let Some(p) = parent[v] {
        out.push(p);
        v = p;
    }
    out
}

/// Whether transport inside `U` is independent of the walk. A spanning tree of
/// each component fixes a transport from the root to every point; the
/// connection is flat iff every non-tree edge agrees with it, that is, every
/// fundamental cycle has identity transport. The first failing cycle (edges
/// in index order) is returned.
pub fn flatness_witness(
    gamma: &PathConnection,
    q: &FinGroupoid,
    u: &OpenSet,
    strategy: TreeStrategy,
) -> Option<FlatnessWitness> {
    let space = q.objects();
    let parent = spanning_forest(space, u, strategy);
    let mut tree_transport: HashMap<Point, Arrow> = HashMap::new();
    let walk_from_root = |v: Point| {
        let mut p = path_to_root(&parent, v);
        p.reverse();
        Walk { vertices: p }
    };
    for v in u.points() {
        let t = gamma
            .transport(q, &walk_from_root(v))
            .expect("tree edges are comparable");
        tree_transport.insert(v, t);
    }
    for a in u.points() {
        for b in u.points() {
            if a >= b || !space.comparable(a, b) || parent[a] == Some(b) || parent[b] == Some(a) {
                continue;
            }
            let via = q
                .compose(tree_transport[&a], gamma.gamma(a, b).expect("comparable"))
                .expect("consecutive");
            if via != tree_transport[&b] {
                let to_a = walk_from_root(a);
                let edge = Walk {
                    vertices: vec![a, b],
                };
                let back = walk_from_root(b).reversed();
                let cycle = to_a
                    .then(&edge)
                    .and_then(|w| w.then(&back))
                    .expect("closed walk");
                let transport = gamma.transport(q, &cycle).expect("valid walk");
                return Some(FlatnessWitness { cycle, transport });
            }
        }
    }
    None
}

pub fn is_flat_on(
    gamma: &PathConnection,
    q: &FinGroupoid,
    u: &OpenSet,
    strategy: TreeStrategy,
) -> bool {
    flatness_witness(gamma, q, u, strategy).is_none()
}

/// A cover with one chosen walk per pair of points in the same component of
/// each member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicStructure {
    cover: Cover,
    geod: HashMap<(usize, Point, Point), Walk>,
}

impl GeodesicStructure {
    /// Validates the walks: each stays in its member and joins the right
    /// points, every pair in a common component has one, and members agree on
    /// shared pairs. Length-0 walks are implied on the diagonal.
    pub fn new(space: &FinSpace, cover: Cover, walks: Vec<(usize, Walk)>) -> Result<Self> {
        let members = cover.members();
        let mut geod: HashMap<(usize, Point, Point), Walk> = HashMap::new();
        for (i, w) in walks {
            let Some(ui) = members.get(i) else {
                return Err(Error::InvalidGeodesics(format!("no cover member {i}")));
            };
            if !w.lies_in(ui) {
                return Err(Error::InvalidGeodesics(format!(
                    "walk {} leaves member {i}",
                    w.fmt(space)
                )));
            }
            let key = (i, w.start(), w.end());
            if geod.insert(key, w.clone()).is_some() {
                return Err(Error::InvalidGeodesics(format!(
                    "two walks for ({}, {}) in member {i}",
                    space.name(key.1),
                    space.name(key.2)
                )));
            }
        }
        for (i, ui) in members.iter().enumerate() {
            for x in ui.points() {
                geod.entry((i, x, x)).or_insert_with(|| Walk::trivial(x));
            }
            for block in space.connected_components(ui) {
                for x in block.ones() {
                    for y in block.ones() {
                        if !geod.contains_key(&(i, x, y)) {
                            return Err(Error::InvalidGeodesics(format!(
                                "no walk from `{}` to `{}` in member {i}",
                                space.name(x),
                                space.name(y)
                            )));
                        }
                    }
                }
            }
        }
        for ((i, x, y), w) in &geod {
            for (j, uj) in members.iter().enumerate() {
                if j != *i && uj.contains(*x) && uj.contains(*y) {
                    if let Some(w2) = geod.get(&(j, *x, *y)) {
                        if w2 != w {
                            return Err(Error::InvalidGeodesics(format!(
                                "members {i} and {j} disagree on ({}, {})",
                                space.name(*x),
                                space.name(*y)
                            )));
                        }
                    }
                }
            }
        }
        Ok(GeodesicStructure { cover, geod })
    }

    /// Picks, for every pair, the walk through the breadth-first tree of the
    /// union of the members containing both points. Walks of different
    /// members then agree by construction only when the chosen trees agree, so
    /// the result is validated like any other.
    pub fn from_search(space: &FinSpace, cover: Cover) -> Result<Self> {
        let mut walks = Vec::new();
        for (i, ui) in cover.members().iter().enumerate() {
            for x in ui.points() {
                for y in ui.points() {
                    if x == y {
                        continue;
                    }
                    // the region where every member containing x and y agrees
                    let mut region = ui.clone();
                    for uj in cover.members() {
                        if uj.contains(x) && uj.contains(y) {
                            region = region.intersection(uj);
                        }
                    }
                    let w = shortest_walk(space, &region, x, y)
                        .or_else(|| shortest_walk(space, ui, x, y));
                    if let Some(w) = w {
                        walks.push((i, w));
                    }
                }
            }
        }
        GeodesicStructure::new(space, cover, walks)
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn geod(&self, i: usize, x: Point, y: Point) -> Option<&Walk> {
        self.geod.get(&(i, x, y))
    }

    /// Walks in a canonical order `(member, start, end)`.
    pub fn walks(&self) -> Vec<(usize, &Walk)> {
        let mut keys: Vec<&(usize, Point, Point)> = self.geod.keys().collect();
        keys.sort();
        keys.into_iter().map(|k| (k.0, &self.geod[k])).collect()
    }
}

/// Breadth-first walk from `x` to `y` inside `u`, neighbours in index order.
pub fn shortest_walk(space: &FinSpace, u: &OpenSet, x: Point, y: Point) -> Option<Walk> {
    if !u.contains(x) || !u.contains(y) {
        return None;
    }
    let mut prev = vec![usize::MAX; space.len()];
    prev[x] = x;
    let mut queue = VecDeque::from([x]);
    while let Some(v) = queue.pop_front() {
        if v == y {
            let mut path = vec![y];
            let mut c = y;
            while c != x {
                c = prev[c];
                path.push(c);
            }
            path.reverse();
            return Some(Walk { vertices: path });
        }
        for w in u.points() {
            if prev[w] == usize::MAX && space.comparable(v, w) {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

/// `c_Γ(Q, 𝒰)`, with germ `[U_i, C_Γ(Q|U_i)]_x` at `x ∈ U_i`. Every chart must
/// be flat and the chart germs must agree on overlaps.
pub fn c_gamma_local(
    q: &FinGroupoid,
    gamma: &PathConnection,
    geo: &GeodesicStructure,
) -> Result<LocalSubgroupoid> {
    let cover = geo.cover();
    for (i, ui) in cover.members().iter().enumerate() {
        if !is_flat_on(gamma, q, ui, TreeStrategy::Bfs) {
            return Err(Error::NotFlat(i));
        }
        // along geodesics transport must be the walk-independent one
        for x in ui.points() {
            for y in ui.points() {
                if let Some(w) = geo.geod(i, x, y) {
                    gamma.transport(q, w)?;
                }
            }
        }
    }
    let charts: Vec<WideSubgroupoid> = par::map(cover.members(), |u| gamma.c_gamma(q, u));
    check_overlaps(q, cover, &charts).map_err(|(i, j, x, _, _)| Error::OverlapMismatch {
        i,
        j,
        x: q.objects().name(x).to_string(),
    })?;
    let atlas = Atlas::new(q, cover.carrier(), charts)?;
    Ok(germs::from_atlas(q, &atlas))
}

/// Where a cover fails to be `Γ` path local.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaPathLocalWitness {
    pub u: OpenSet,
    pub i: usize,
    pub j: usize,
    pub x: Point,
}

/// For every open `U`, charts `i, j` and `x ∈ U_i ∩ U_j ∩ U`, checks
/// `C_Γ(Q|U_i)|minup(x) = C_Γ(Q|U_j ∩ U)|minup(x)`.
pub fn gamma_path_local_witness(
    q: &FinGroupoid,
    gamma: &PathConnection,
    cover: &Cover,
    max_points: usize,
) -> Result<Option<GammaPathLocalWitness>> {
    let space = q.objects();
    let opens = space.open_sets(max_points)?;
    let members = cover.members();
    let charts: Vec<WideSubgroupoid> = members.iter().map(|u| gamma.c_gamma(q, u)).collect();
    Ok(par::find_first(&opens, |u| {
        for (j, uj) in members.iter().enumerate() {
            let inner = gamma.c_gamma(q, &uj.intersection(u));
            for (i, ui) in members.iter().enumerate() {
                for x in ui.intersection(uj).intersection(u).points() {
                    let w = space.minup_open(x);
                    if q.restrict_unchecked(&charts[i], &w) != q.restrict_unchecked(&inner, &w) {
                        return Some(GammaPathLocalWitness {
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

pub fn is_gamma_path_local(
    q: &FinGroupoid,
    gamma: &PathConnection,
    cover: &Cover,
    max_points: usize,
) -> Result<bool> {
    Ok(gamma_path_local_witness(q, gamma, cover, max_points)?.is_none())
}
