//! Bundled spaces, groupoids and connections used by the tests, the bench and
//! the CLI generators.
//!
//! `C4` is the four-point circle: open points `x1, x2` and closed points
//! `y1, y2` with `minup(yi) = {x1, x2, yi}`. `C8` is the eight-point circle:
//! open `o0..o3`, closed `c0..c3` with `minup(ck) = {ck, ok, o(k+1)}`. The
//! double cover `C8 → C4` sends `ok ↦ x(k mod 2 + 1)` and `ck ↦ y(k mod 2 + 1)`;
//! `ℤ/2` acts on `C8` by `k ↦ k + 2`.

use crate::connections::PathConnection;
use crate::finspace::{ContMap, FinSpace, OpenSet};
use crate::groupoid::{
    discrete_groupoid, pair_groupoid, product_with_pair, FinGroup, FinGroupoid, PrincipalBundle,
};
use crate::topgroupoid::{
    top_action, top_bundle, top_pair, top_product, top_sym, Cover, Section, TopGroupoid,
};

pub fn d2() -> FinSpace {
    FinSpace::discrete(&["a", "b"])
}

pub fn s2() -> FinSpace {
    FinSpace::from_named(&[("o", &["o"]), ("c", &["o", "c"])]).expect("Sierpinski space")
}

/// Two open points under one closed point.
pub fn v3() -> FinSpace {
    FinSpace::from_named(&[("a", &["a"]), ("b", &["b"]), ("c", &["a", "b", "c"])]).expect("V space")
}

pub fn c4() -> FinSpace {
    FinSpace::from_named(&[
        ("x1", &["x1"]),
        ("x2", &["x2"]),
        ("y1", &["x1", "x2", "y1"]),
        ("y2", &["x1", "x2", "y2"]),
    ])
    .expect("four-point circle")
}

pub fn c8() -> FinSpace {
    let names: Vec<String> = (0..4)
        .map(|k| format!("o{k}"))
        .chain((0..4).map(|k| format!("c{k}")))
        .collect();
    let minup = (0..4)
        .map(|k| vec![k])
        .chain((0..4).map(|k| vec![4 + k, k, (k + 1) % 4]))
        .collect();
    FinSpace::new(names, minup).expect("eight-point circle")
}

/// Orbits of `k ↦ k + 2` on `C8`.
pub fn antipodal_classes() -> Vec<Vec<usize>> {
    vec![vec![0, 2], vec![1, 3], vec![4, 6], vec![5, 7]]
}

pub fn double_cover() -> ContMap {
    let assignment = (0..4)
        .map(|k| k % 2)
        .chain((0..4).map(|k| 2 + k % 2))
        .collect();
    ContMap::new(c8(), c4(), assignment).expect("double cover is continuous")
}

pub fn double_cover_bundle() -> PrincipalBundle {
    let shift: Vec<usize> = (0..8)
        .map(|p| {
            if p < 4 {
                (p + 2) % 4
            } else {
                4 + (p - 4 + 2) % 4
            }
        })
        .collect();
    PrincipalBundle {
        projection: double_cover(),
        group: FinGroup::cyclic(2),
        action: vec![(0..8).collect(), shift],
    }
}

/// The symmetry groupoid of the double cover, with the quotient topology.
pub fn sym2() -> TopGroupoid {
    top_sym(&double_cover_bundle()).expect("symmetry groupoid of the double cover")
}

/// `{C4 \ {y2}, C4 \ {y1}}`.
pub fn sym2_cover(q: &TopGroupoid) -> Cover {
    let x = q.objects();
    let u1 = x.open_named(&["x1", "x2", "y1"]).expect("open");
    let u2 = x.open_named(&["x1", "x2", "y2"]).expect("open");
    Cover::new(x, &x.whole(), vec![u1, u2]).expect("cover")
}

/// SYM2 covered by the whole circle and a punctured one: the star at `y1`
/// connects in the first chart but not in the second.
pub fn incompatible_cover() -> (TopGroupoid, Cover) {
    let q = sym2();
    let x = q.objects().clone();
    let u = x.open_named(&["x1", "x2", "y1"]).expect("open");
    let cover = Cover::new(&x, &x.whole(), vec![x.whole(), u]).expect("cover");
    (q, cover)
}

/// `ℤ/2` acting on `C4` by swapping `x1` and `x2`.
pub fn c4_swap_action() -> Vec<Vec<usize>> {
    vec![vec![0, 1, 2, 3], vec![1, 0, 2, 3]]
}

/// A named topological groupoid of the fixture suite.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub groupoid: TopGroupoid,
}

/// Every bundled topological groupoid, in a fixed order.
pub fn suite() -> Vec<Fixture> {
    let z2 = FinGroup::cyclic(2);
    let z3 = FinGroup::cyclic(3);
    let mk = |name, groupoid| Fixture { name, groupoid };
    vec![
        mk(
            "discrete-c4",
            TopGroupoid::with_anchor_topology(discrete_groupoid(&c4())),
        ),
        mk("pair-d2", top_pair(&d2())),
        mk("pair-s2", top_pair(&s2())),
        mk("pair-v3", top_pair(&v3())),
        mk("pair-c4", top_pair(&c4())),
        mk("z2bundle-d2", top_bundle(&d2(), &z2)),
        mk("z2bundle-s2", top_bundle(&s2(), &z2)),
        mk("z2bundle-c4", top_bundle(&c4(), &z2)),
        mk("z3bundle-s2", top_bundle(&s2(), &z3)),
        mk("z2pair-d2", top_product(&z2, &d2())),
        mk("z2pair-s2", top_product(&z2, &s2())),
        mk(
            "action-c4",
            top_action(&c4(), &z2, &c4_swap_action()).expect("swap action"),
        ),
        mk("sym2", sym2()),
    ]
}

pub fn by_name(name: &str) -> Option<TopGroupoid> {
    suite()
        .into_iter()
        .find(|f| f.name == name)
        .map(|f| f.groupoid)
}

/// Names of the fixtures whose groupoid is a bundle of groups.
pub fn bundle_names() -> &'static [&'static str] {
    &[
        "discrete-c4",
        "z2bundle-d2",
        "z2bundle-s2",
        "z2bundle-c4",
        "z3bundle-s2",
    ]
}

/// `PAIR(S2)` with `γ(c, o) = c/o`.
pub fn pair_s2_connection() -> (FinGroupoid, PathConnection) {
    let q = pair_groupoid(&s2());
    let g = q.arrow_index("c/o").expect("arrow");
    let gamma = PathConnection::new(&q, &[(1, 0, g)]).expect("connection");
    (q, gamma)
}

fn z2_pair_c4() -> FinGroupoid {
    product_with_pair(&FinGroup::cyclic(2), &c4())
}

/// `ℤ/2 × PAIR(C4)`: every step of the 4-cycle carries the trivial element
/// except `y2 → x2`, so going once around the circle picks up the generator.
pub fn nonflat_connection() -> (FinGroupoid, PathConnection) {
    let q = z2_pair_c4();
    let entries: Vec<(usize, usize, usize)> = [
        ("y1", "x1", 0),
        ("y1", "x2", 0),
        ("y2", "x1", 0),
        ("y2", "x2", 1),
    ]
    .iter()
    .map(|&(y, x, g)| {
        let s = q.objects();
        let name = format!("{y}/{x}^{g}");
        (
            s.index_of(y).expect("point"),
            s.index_of(x).expect("point"),
            q.arrow_index(&name).expect("arrow"),
        )
    })
    .collect();
    let gamma = PathConnection::new(&q, &entries).expect("connection");
    (q, gamma)
}

/// The flat connection `γ(x, y) = s(x)⁻¹·s(y)` of the section of
/// `ℤ/2 × PAIR(C4)` at `x1` with `s(y2) = x1/y2^1`, identity labels elsewhere.
pub fn flat_connection() -> (FinGroupoid, PathConnection) {
    let q = z2_pair_c4();
    let s = c4_section(&q);
    let gamma = PathConnection::from_section(&q, &s).expect("connection");
    (q, gamma)
}

fn c4_section(q: &FinGroupoid) -> Section {
    let x = q.objects();
    let values = ["x1/x1^0", "x1/x2^0", "x1/y1^0", "x1/y2^1"]
        .iter()
        .map(|n| Some(q.arrow_index(n).expect("arrow")))
        .collect();
    Section {
        base: 0,
        carrier: x.whole(),
        values,
    }
}

/// The cover `{C4 \ {y2}, C4 \ {y1}}` of `C4`.
pub fn c4_two_chart_cover() -> Cover {
    let x = c4();
    let u1: OpenSet = x.open_named(&["x1", "x2", "y1"]).expect("open");
    let u2 = x.open_named(&["x1", "x2", "y2"]).expect("open");
    Cover::new(&x, &x.whole(), vec![u1, u2]).expect("cover")
}
