//! Brute-force oracles and shared checks. Each oracle recomputes its answer
//! from definitions, without going through the library routine it checks.
#![allow(dead_code, clippy::needless_range_loop)]

pub mod criteria;

use std::collections::{HashSet, VecDeque};

use lsg_core::bits::{self, Bits};
use lsg_core::connections::PathConnection;
use lsg_core::finspace::{FinSpace, OpenSet, Point};
use lsg_core::germs::LocalSubgroupoid;
use lsg_core::groupoid::{pair_groupoid, product_with_pair, FinGroup, FinGroupoid};
use lsg_core::topgroupoid::{top_pair, top_product, TopGroupoid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Least set containing `seed` and the identities of `u`, closed under
/// inverse and composition, by repeated full passes.
pub fn closure_naive(q: &FinGroupoid, u: &OpenSet, seed: &Bits) -> Bits {
    let mut set = seed.clone();
    set.grow(q.len());
    for x in u.points() {
        set.insert(q.id(x));
    }
    loop {
        let mut next = set.clone();
        for g in set.ones() {
            next.insert(q.inv(g));
            for h in set.ones() {
                if let Some(k) = q.compose(g, h) {
                    next.insert(k);
                }
            }
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

/// Direct test of the wide-subgroupoid axioms over `u`.
pub fn is_wide_naive(q: &FinGroupoid, u: &OpenSet, set: &Bits) -> bool {
    set.ones()
        .all(|g| u.contains(q.src(g)) && u.contains(q.dst(g)))
        && u.points().all(|x| set.contains(q.id(x)))
        && set.ones().all(|g| set.contains(q.inv(g)))
        && set.ones().all(|g| {
            set.ones()
                .all(|h| q.compose(g, h).is_none_or(|k| set.contains(k)))
        })
}

/// Every wide subgroupoid of `Q|U`, by testing every subset of non-identity
/// arrows. Sorted by arrow list.
pub fn wide_by_subsets(q: &FinGroupoid, u: &OpenSet) -> Vec<Bits> {
    let arrows = q.arrows_over(u.bits());
    let free: Vec<usize> = arrows.ones().filter(|&g| !q.is_identity(g)).collect();
    assert!(free.len() <= 16, "subset oracle is limited to 16 arrows");
    let ids = q.identities_over(u.bits());
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << free.len()) {
        let mut set = ids.clone();
        for (k, &g) in free.iter().enumerate() {
            if mask >> k & 1 == 1 {
                set.insert(g);
            }
        }
        if is_wide_naive(q, u, &set) {
            out.push(set);
        }
    }
    out.sort_by_key(bits::to_vec);
    out
}

/// Wide subgroupoids of `Q|U`: the subset oracle when small enough, else the
/// library lattice enumeration (which the subset oracle validates elsewhere).
pub fn wide_sets(q: &FinGroupoid, u: &OpenSet) -> Vec<Bits> {
    let free = q.non_identity_over(u.bits()).len();
    if free <= 14 {
        wide_by_subsets(q, u)
    } else {
        q.enumerate_wide(u, 64)
            .expect("enumeration")
            .into_iter()
            .map(|h| h.arrows().clone())
            .collect()
    }
}

/// `glob(s)` from its definition: intersection of all wide `H` whose germs
/// dominate those of `s`.
pub fn glob_by_intersection(q: &FinGroupoid, s: &LocalSubgroupoid, wides: &[Bits]) -> Bits {
    let space = q.objects();
    let mut acc = q.arrows_over(s.carrier().bits());
    for h in wides {
        let dominates = s.carrier().points().all(|x| {
            let local = bits::intersection(h, &q.arrows_over(space.minup(x)));
            s.rep(x).arrows().is_subset(&local)
        });
        if dominates {
            acc.intersect_with(h);
        }
    }
    acc
}

/// Every continuous section over `u` as one arrow set per point, by checking
/// all combinations of per-point wide subgroupoids.
pub fn sections_brute(q: &FinGroupoid, u: &OpenSet) -> Vec<Vec<(Point, Bits)>> {
    let space = q.objects();
    let points: Vec<Point> = u.points().collect();
    let options: Vec<Vec<Bits>> = points
        .iter()
        .map(|&x| wide_sets(q, &space.minup_open(x)))
        .collect();
    let total: usize = options.iter().map(Vec::len).product();
    assert!(total <= 2_000_000, "too many combinations");
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut choice = Vec::with_capacity(points.len());
        for opts in &options {
            choice.push(&opts[code % opts.len()]);
            code /= opts.len();
        }
        let continuous = points.iter().enumerate().all(|(i, &x)| {
            points.iter().enumerate().all(|(j, &y)| {
                !space.minup(x).contains(y)
                    || bits::intersection(choice[i], &q.arrows_over(space.minup(y))) == *choice[j]
            })
        });
        if continuous {
            out.push(
                points
                    .iter()
                    .copied()
                    .zip(choice.into_iter().cloned())
                    .collect(),
            );
        }
    }
    out
}

/// Component of `id(x)` in the star of `Q|U` at `x`, by flood fill over the
/// comparability relation of the arrow space.
pub fn star_component_naive(q: &TopGroupoid, u: &OpenSet, x: Point) -> Bits {
    let g = q.base();
    let a = q.arrow_space();
    let star: Vec<usize> = (0..g.len())
        .filter(|&h| g.src(h) == x && u.contains(g.dst(h)))
        .collect();
    let mut seen = HashSet::from([g.id(x)]);
    let mut queue = VecDeque::from([g.id(x)]);
    while let Some(h) = queue.pop_front() {
        for &k in &star {
            if !seen.contains(&k) && (a.minup(h).contains(k) || a.minup(k).contains(h)) {
                seen.insert(k);
                queue.push_back(k);
            }
        }
    }
    bits::from_iter(g.len(), seen)
}

pub fn c1_naive(q: &TopGroupoid, u: &OpenSet) -> Bits {
    let mut out = bits::empty(q.base().len());
    for x in u.points() {
        out.union_with(&star_component_naive(q, u, x));
    }
    out
}

/// Flat iff, from every start point, every endpoint is reached with a single
/// transport; found by search over `(point, transport)` states.
pub fn flat_by_search(q: &FinGroupoid, gamma: &PathConnection, u: &OpenSet) -> bool {
    let space = q.objects();
    for x in u.points() {
        let mut reached: Vec<HashSet<usize>> = vec![HashSet::new(); space.len()];
        let mut queue = VecDeque::from([q.id(x)]);
        reached[x].insert(q.id(x));
        while let Some(g) = queue.pop_front() {
            let at = q.dst(g);
            for y in u.points() {
                if y != at && space.comparable(at, y) {
                    let h = q.compose(g, gamma.gamma(at, y).unwrap()).unwrap();
                    if reached[y].insert(h) {
                        queue.push_back(h);
                    }
                }
            }
        }
        if reached.iter().any(|r| r.len() > 1) {
            return false;
        }
    }
    true
}

/// Every family of nonempty open subsets of `u` covering `u`.
pub fn covers_naive(space: &FinSpace, u: &OpenSet) -> Vec<Vec<OpenSet>> {
    let opens: Vec<OpenSet> = space
        .open_sets(12)
        .unwrap()
        .into_iter()
        .filter(|v| !v.is_empty() && v.is_subset(u))
        .collect();
    assert!(opens.len() <= 16);
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << opens.len()) {
        let mut union = bits::empty(space.len());
        let fam: Vec<OpenSet> = opens
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, v)| {
                union.union_with(v.bits());
                v.clone()
            })
            .collect();
        if &union == u.bits() {
            out.push(fam);
        }
    }
    out
}

/// Random finite space: a random relation on `n` points oriented from lower
/// to higher index, closed transitively.
pub fn random_space(rng: &mut ChaCha8Rng, n: usize, density: f64) -> FinSpace {
    let mut up = vec![vec![false; n]; n];
    for (i, row) in up.iter_mut().enumerate() {
        row[i] = true;
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                up[j][i] = true;
            }
        }
    }
    // transitive closure: minup(j) ∋ i and minup(i) ∋ k ⇒ minup(j) ∋ k
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if up[i][k] && up[k][j] {
                    up[i][j] = true;
                }
            }
        }
    }
    let names = (0..n).map(|i| format!("p{i}")).collect();
    let minup = (0..n)
        .map(|i| (0..n).filter(|&j| up[i][j]).collect())
        .collect();
    FinSpace::new(names, minup).unwrap()
}

/// A random groupoid over `x` from a small menu, with its natural topology.
pub fn random_groupoid(rng: &mut ChaCha8Rng, x: &FinSpace) -> TopGroupoid {
    match rng.random_range(0..3) {
        0 => top_pair(x),
        1 => top_product(&FinGroup::cyclic(2), x),
        _ => top_product(&FinGroup::cyclic(3), x),
    }
}

/// A random connection: each comparable pair `(x, y)` with `y ∈ minup(x)`
/// gets a uniformly chosen arrow `x → y`.
pub fn random_connection(rng: &mut ChaCha8Rng, q: &FinGroupoid) -> PathConnection {
    let space = q.objects();
    let mut entries = Vec::new();
    for x in 0..space.len() {
        for y in space.minup(x).ones() {
            if y != x {
                let hom: Vec<usize> = q.hom(x, y).collect();
                entries.push((x, y, hom[rng.random_range(0..hom.len())]));
            }
        }
    }
    PathConnection::new(q, &entries).unwrap()
}

/// A connection on `G × PAIR(X)` of the form `γ(x, y) = s(x)⁻¹·s(y)` for a
/// random choice of labels `s`, hence flat.
pub fn random_flat_connection(
    rng: &mut ChaCha8Rng,
    group: &FinGroup,
    x: &FinSpace,
) -> (FinGroupoid, PathConnection) {
    let q = product_with_pair(group, x);
    let m = group.order();
    let n = x.len();
    let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..m)).collect();
    let mut entries = Vec::new();
    for a in 0..n {
        for b in x.minup(a).ones() {
            if a != b {
                let g = group.mul(group.inv(labels[a]), labels[b]);
                entries.push((a, b, (a * n + b) * m + g));
            }
        }
    }
    let gamma = PathConnection::new(&q, &entries).unwrap();
    (q, gamma)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pair_of(x: &FinSpace) -> FinGroupoid {
    pair_groupoid(x)
}
