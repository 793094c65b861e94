//! One check per acceptance criterion that does not involve the CLI. Each
//! returns a short summary on success and the first counterexample on failure.

use lsg_core::bits::{self, Bits};
use lsg_core::connections::{
    c_gamma_local, flatness_witness, is_flat_on, GeodesicStructure, PathConnection, TreeStrategy,
    Walk,
};
use lsg_core::finspace::{FinSpace, OpenSet};
use lsg_core::fixtures::{self, Fixture};
use lsg_core::germs::{
    self, enumerate_sections, glob, glob_oracle, glob_via_refinements, loc, local_le,
    restrict_local, Atlas, LocalSubgroupoid, SheafFailure, DEFAULT_MAX_SECTIONS,
};
use lsg_core::groupoid::{FinGroup, FinGroupoid, WideSubgroupoid};
use lsg_core::topgroupoid::{
    c1_atlas, c1_local, find_section, is_path_compatible, is_path_local, trivialize, Cover,
    Section, TopGroupoid,
};
use lsg_core::transfer::anchor;
use rand::Rng;

use super::*;

pub type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(format!($($arg)*));
        }
    };
}

fn ok<T, E: std::fmt::Display>(
    r: std::result::Result<T, E>,
    what: &str,
) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn non_identity_count(q: &FinGroupoid) -> usize {
    q.len() - q.objects().len()
}

fn nonempty_opens(space: &FinSpace) -> Vec<OpenSet> {
    space
        .open_sets(12)
        .expect("small space")
        .into_iter()
        .filter(|u| !u.is_empty())
        .collect()
}

fn sections(q: &FinGroupoid, u: &OpenSet) -> std::result::Result<Vec<LocalSubgroupoid>, String> {
    ok(
        enumerate_sections(q, u, 64, DEFAULT_MAX_SECTIONS),
        "enumerate sections",
    )
}

fn wide(q: &FinGroupoid, u: &OpenSet, arrows: Bits) -> WideSubgroupoid {
    q.wide(u, arrows)
        .expect("oracle produced a wide subgroupoid")
}

fn union_of<'a>(q: &FinGroupoid, sets: impl IntoIterator<Item = &'a WideSubgroupoid>) -> Bits {
    let mut acc = q.empty_arrows();
    for h in sets {
        acc.union_with(h.arrows());
    }
    acc
}

/// `glob ⊣ loc` and `anchor_* ⊣ anchor^*`, over every open set, section and
/// wide subgroupoid of each fixture with at most 24 non-identity arrows.
pub fn galois() -> Check {
    let mut pairs = 0usize;
    let mut fixtures_checked = 0usize;
    for Fixture { name, groupoid } in fixtures::suite() {
        let q = groupoid.base();
        if non_identity_count(q) > 24 {
            continue;
        }
        fixtures_checked += 1;
        let a = anchor(q);
        for u in nonempty_opens(q.objects()) {
            let secs = sections(q, &u)?;
            let brute = sections_brute(q, &u).len();
            ensure!(
                secs.len() == brute,
                "{name}: {} sections enumerated, oracle finds {brute}",
                secs.len()
            );
            let wides = wide_sets(q, &u);
            for s in &secs {
                let g = glob(q, s);
                for h in &wides {
                    let left = ok(local_le(s, &loc(q, &wide(q, &u, h.clone()))), "local order")?;
                    let right = g.arrows().is_subset(h);
                    ensure!(
                        left == right,
                        "{name}: glob/loc adjunction fails on {} for H = {}",
                        q.objects().fmt_set(u.bits()),
                        q.fmt_arrows(h)
                    );
                    pairs += 1;
                }
            }
            let pair_secs = sections(a.cod(), &u)?;
            for s in &secs {
                for r in &pair_secs {
                    let (left, right) = ok(a.check_adjunction(s, r), "anchor adjunction")?;
                    ensure!(
                        left == right,
                        "{name}: anchor adjunction fails on {}",
                        q.objects().fmt_set(u.bits())
                    );
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} pairs over {fixtures_checked} fixtures"))
}

/// The generator formula for `glob` agrees with the defining intersection on
/// every section over every open set of every fixture, and so does the
/// refinement description on the minimal atlas.
pub fn glob_matches_oracle() -> Check {
    let mut count = 0usize;
    for Fixture { name, groupoid } in fixtures::suite() {
        let q = groupoid.base();
        for u in nonempty_opens(q.objects()) {
            let wides = wide_sets(q, &u);
            for s in sections(q, &u)? {
                let fast = glob(q, &s);
                let slow = glob_by_intersection(q, &s, &wides);
                ensure!(
                    fast.arrows() == &slow,
                    "{name}: glob differs from the intersection oracle"
                );
                let lib = ok(glob_oracle(q, &s, 64), "glob oracle")?;
                ensure!(lib == fast, "{name}: library oracle differs");
                let refined = ok(
                    glob_via_refinements(q, &Atlas::minimal(q, &s)),
                    "refinements",
                )?;
                ensure!(refined == fast, "{name}: refinement intersection differs");
                count += 1;
            }
        }
    }
    Ok(format!("{count} sections"))
}

/// On discrete spaces `glob(loc(Q)) = Inn(Q)`, strictly below `Q` for the
/// pair groupoids.
pub fn discrete_glob_is_inner() -> Check {
    let mut strict = Vec::new();
    for name in ["pair-d2", "z2bundle-d2", "z2pair-d2", "discrete-c4"] {
        let q = fixtures::by_name(name).expect("fixture").base().clone();
        let space = q.objects();
        if !space
            .names()
            .iter()
            .enumerate()
            .all(|(x, _)| space.minup(x).count_ones(..) == 1)
        {
            continue;
        }
        let g = glob(&q, &loc(&q, &q.full()));
        let oracle = glob_by_intersection(&q, &loc(&q, &q.full()), &wide_sets(&q, &space.whole()));
        ensure!(g.arrows() == &oracle, "{name}: glob differs from oracle");
        ensure!(
            g == q.inn(),
            "{name}: glob(loc(Q)) = {} but Inn(Q) = {}",
            q.fmt_arrows(g.arrows()),
            q.fmt_arrows(q.inn().arrows())
        );
        if g != q.full() {
            strict.push(name);
        }
    }
    ensure!(strict.contains(&"pair-d2"), "no strict fixture");
    Ok(format!("strictly smaller on {}", strict.join(", ")))
}

/// Every bundle of groups gives a sheaf; `PAIR(D2)` fails uniqueness.
pub fn sheaf_condition() -> Check {
    for &name in fixtures::bundle_names() {
        let q = fixtures::by_name(name).expect("fixture").base().clone();
        let failure = ok(germs::presheaf_is_sheaf(&q, 12, 64), "sheaf check")?;
        ensure!(failure.is_none(), "{name}: {failure:?}");
        // oracle: loc is a bijection from wide subgroupoids to sections
        for u in nonempty_opens(q.objects()) {
            let wides = wide_sets(&q, &u);
            let secs = sections_brute(&q, &u);
            let images: HashSet<Vec<Bits>> = wides
                .iter()
                .map(|h| {
                    let s = loc(&q, &wide(&q, &u, h.clone()));
                    u.points().map(|x| s.rep(x).arrows().clone()).collect()
                })
                .collect();
            ensure!(
                images.len() == wides.len() && wides.len() == secs.len(),
                "{name}: loc is not a bijection on {}",
                q.objects().fmt_set(u.bits())
            );
        }
    }
    let q = fixtures::by_name("pair-d2")
        .expect("fixture")
        .base()
        .clone();
    match ok(germs::presheaf_is_sheaf(&q, 12, 64), "sheaf check")? {
        Some(SheafFailure::NonUnique { u, family, gluings }) => {
            ensure!(gluings[0] != gluings[1], "gluings coincide");
            for h in &gluings {
                for (x, rep) in &family {
                    let r = q
                        .restrict_wide(h, &q.objects().minup_open(*x))
                        .expect("restriction");
                    ensure!(&r == rep, "witness gluing does not restrict to the family");
                }
            }
            Ok(format!(
                "{} bundles are sheaves; PAIR(D2) has two gluings {} and {} on {}",
                fixtures::bundle_names().len(),
                q.fmt_arrows(gluings[0].arrows()),
                q.fmt_arrows(gluings[1].arrows()),
                q.objects().fmt_set(u.bits())
            ))
        }
        other => Err(format!(
            "PAIR(D2): expected a uniqueness failure, got {other:?}"
        )),
    }
}

/// SYM2 is star connected and `C₁` of a punctured circle is proper.
pub fn sym2_stars() -> Check {
    let q = fixtures::sym2();
    let g = q.base();
    let space = q.objects();
    ensure!(q.is_star_connected(), "SYM2 is not star connected");
    ensure!(
        c1_naive(&q, &space.whole()) == bits::full(g.len()),
        "oracle: SYM2 is not star connected"
    );
    let u = ok(space.open_named(&["x1", "x2", "y1"]), "open set")?;
    let c1 = q.c1(&u);
    ensure!(
        c1.arrows() == &c1_naive(&q, &u),
        "C1 differs from flood fill"
    );
    let full = g.full_on(&u);
    ensure!(c1 != full, "C1 of the punctured circle is not proper");
    Ok(format!(
        "C1(C4 \\ y2) has {} of {} arrows",
        c1.arrows().count_ones(..),
        full.arrows().count_ones(..)
    ))
}

/// Star-connected fixtures are generated by `C₁` of any cover, and `C_Γ` by
/// the chart values of any cover, for spaces with at most five points.
pub fn generation() -> Check {
    let mut covers = 0usize;
    for Fixture { name, groupoid } in fixtures::suite() {
        let q = groupoid.base();
        let space = q.objects();
        if space.len() > 5 || c1_naive(&groupoid, &space.whole()) != bits::full(q.len()) {
            continue;
        }
        for cover in covers_naive(space, &space.whole()) {
            let mut seed = q.empty_arrows();
            for v in &cover {
                let c = groupoid.c1(v);
                ensure!(
                    c.arrows() == &c1_naive(&groupoid, v),
                    "{name}: C1 differs from flood fill"
                );
                seed.union_with(c.arrows());
            }
            ensure!(
                closure_naive(q, &space.whole(), &seed) == bits::full(q.len()),
                "{name}: C1 charts do not generate Q"
            );
            covers += 1;
        }
    }
    let mut conns = vec![
        fixtures::pair_s2_connection(),
        fixtures::nonflat_connection(),
        fixtures::flat_connection(),
    ];
    let mut r = rng(7);
    for _ in 0..12 {
        let n = r.random_range(2..=4);
        let x = random_space(&mut r, n, 0.6);
        let q = random_groupoid(&mut r, &x).base().clone();
        let gamma = random_connection(&mut r, &q);
        conns.push((q, gamma));
    }
    for (q, gamma) in &conns {
        let space = q.objects();
        let whole = gamma.c_gamma(q, &space.whole());
        ensure!(
            whole.arrows()
                == &closure_naive(q, &space.whole(), &gamma_seed(q, gamma, &space.whole())),
            "C_Gamma differs from the closure of its generators"
        );
        for cover in covers_naive(space, &space.whole()) {
            let seed = union_of(
                q,
                cover
                    .iter()
                    .map(|v| gamma.c_gamma(q, v))
                    .collect::<Vec<_>>()
                    .iter(),
            );
            ensure!(
                closure_naive(q, &space.whole(), &seed) == *whole.arrows(),
                "C_Gamma charts do not generate C_Gamma"
            );
            covers += 1;
        }
    }
    Ok(format!("{covers} covers"))
}

/// Arrows `γ(x, y)` over comparable pairs of `u`.
pub fn gamma_seed(q: &FinGroupoid, gamma: &PathConnection, u: &OpenSet) -> Bits {
    let space = q.objects();
    let mut seed = q.empty_arrows();
    for x in u.points() {
        for y in u.points() {
            if space.comparable(x, y) {
                seed.insert(gamma.gamma(x, y).expect("comparable"));
            }
        }
    }
    seed
}

fn generated_by_restrictions(q: &FinGroupoid, h: &WideSubgroupoid, cover: &[OpenSet]) -> bool {
    let seed = union_of(
        q,
        cover
            .iter()
            .map(|v| q.restrict_wide(h, v).expect("restriction"))
            .collect::<Vec<_>>()
            .iter(),
    );
    closure_naive(q, h.carrier(), &seed) == *h.arrows()
}

/// The coherence statements: `glob(loc(H)) ≤ H`, `glob(s|U) ≤ glob(s)|U`,
/// the four restriction statements, the cover characterisation of coherent
/// wide subgroupoids, `glob(c₁) = C₁`, `glob(c_Γ) = C_Γ` and global
/// adaptedness of path local atlases.
pub fn coherence_suite() -> Check {
    let mut counts = [0usize; 8];
    for Fixture { name, groupoid } in fixtures::suite() {
        let q = groupoid.base();
        let space = q.objects();
        let whole = space.whole();
        let wides = wide_sets(q, &whole);
        let small = space.len() <= 5;
        let covers = if small {
            covers_naive(space, &whole)
        } else {
            Vec::new()
        };
        // glob(loc(H)) ≤ H, and the cover characterisation of coherence
        for h in &wides {
            let hw = wide(q, &whole, h.clone());
            let g = glob(q, &loc(q, &hw));
            ensure!(
                g.arrows().is_subset(h),
                "{name}: glob(loc(H)) is not below H"
            );
            let coherent = g == hw;
            ensure!(
                coherent == germs::is_coherent_wide(q, &hw),
                "{name}: coherence flag disagrees"
            );
            if small {
                let by_covers = covers.iter().all(|c| generated_by_restrictions(q, &hw, c));
                ensure!(
                    coherent == by_covers,
                    "{name}: H = {} is coherent: {coherent}, generated by every cover: {by_covers}",
                    q.fmt_arrows(h)
                );
                counts[3] += 1;
            }
            counts[0] += 1;
        }
        let opens = nonempty_opens(space);
        for s in sections(q, &whole)? {
            let gs = glob(q, &s);
            let global = germs::is_globally_coherent(q, &s);
            ensure!(
                germs::is_coherent(q, &s),
                "{name}: a section is not coherent"
            );
            let mut total = true;
            for u in &opens {
                let su = ok(restrict_local(&s, u), "restriction")?;
                let gu = glob(q, &su);
                ensure!(
                    gu.arrows()
                        .is_subset(q.restrict_wide(&gs, u).expect("restriction").arrows()),
                    "{name}: glob(s|U) is not below glob(s)|U"
                );
                counts[1] += 1;
                let su_coherent = germs::is_coherent(q, &su);
                total &= su_coherent;
                // (i)
                if global && su_coherent {
                    ensure!(
                        germs::is_globally_coherent(q, &su),
                        "{name}: restriction loses global coherence"
                    );
                }
            }
            ensure!(
                total == ok(germs::is_totally_coherent(q, &s, 12), "total coherence")?,
                "{name}: total coherence flag disagrees"
            );
            for cover in &covers {
                // (ii)
                let parts: Vec<LocalSubgroupoid> = cover
                    .iter()
                    .map(|v| restrict_local(&s, v).expect("restriction"))
                    .collect();
                if parts.iter().all(|p| germs::is_coherent(q, p)) {
                    ensure!(germs::is_coherent(q, &s), "{name}: coherence does not glue");
                }
                // (iii)
                if global {
                    ensure!(
                        generated_by_restrictions(q, &gs, cover),
                        "{name}: glob(s) is not generated by a cover"
                    );
                }
                // (iv)
                let parts_ok = parts.iter().zip(cover).all(|(p, _)| {
                    germs::is_globally_coherent(q, p)
                        && germs::is_totally_coherent(q, p, 12).unwrap_or(false)
                });
                if parts_ok {
                    ensure!(total, "{name}: total coherence does not glue");
                }
                counts[2] += 1;
            }
        }
        // glob(c₁) = C₁ and adaptedness, over every path compatible cover
        let c1 = groupoid.c1(&whole);
        let all_covers = if small {
            ok(Cover::all_covers(space, &whole, 5, 16), "covers")?
        } else {
            vec![
                Cover::single(&whole),
                Cover::minimal(space, &whole),
                fixtures::sym2_cover(&groupoid),
            ]
        };
        for cover in &all_covers {
            if !is_path_compatible(&groupoid, cover) {
                continue;
            }
            let local = ok(c1_local(&groupoid, cover), "c1 local")?;
            let g = glob(q, &local);
            ensure!(
                g == c1,
                "{name}: glob(c1) = {} but C1 = {}",
                q.fmt_arrows(g.arrows()),
                q.fmt_arrows(c1.arrows())
            );
            ensure!(germs::is_coherent(q, &local), "{name}: c1 is not coherent");
            counts[4] += 1;
            if ok(is_path_local(&groupoid, cover, 12), "path local")? {
                let atlas = ok(c1_atlas(&groupoid, cover), "atlas")?;
                ensure!(
                    ok(germs::is_globally_adapted(q, &atlas, &local), "adapted")?,
                    "{name}: path local atlas is not globally adapted"
                );
                ensure!(
                    ok(germs::is_totally_coherent(q, &local, 12), "total")?,
                    "{name}: c1 of a path local cover is not totally coherent"
                );
                counts[6] += 1;
            }
        }
    }
    // glob(c_Γ) = C_Γ for flat connections on every cover with flat charts
    let mut conns = vec![
        fixtures::pair_s2_connection(),
        fixtures::flat_connection(),
        fixtures::nonflat_connection(),
    ];
    let mut r = rng(11);
    for _ in 0..8 {
        let n = r.random_range(2..=4);
        let x = random_space(&mut r, n, 0.6);
        let group = FinGroup::cyclic(r.random_range(2..=3));
        conns.push(random_flat_connection(&mut r, &group, &x));
    }
    for (q, gamma) in &conns {
        let space = q.objects();
        let cg = gamma.c_gamma(q, &space.whole());
        for cover in ok(Cover::all_covers(space, &space.whole(), 5, 16), "covers")? {
            // covers whose overlaps disconnect pairs admit no geodesic structure
            let Ok(geo) = GeodesicStructure::from_search(space, cover.clone()) else {
                continue;
            };
            let Ok(local) = c_gamma_local(q, gamma, &geo) else {
                continue;
            };
            ensure!(glob(q, &local) == cg, "glob(c_Gamma) differs from C_Gamma");
            counts[5] += 1;
        }
    }
    ensure!(counts[5] > 0 && counts[6] > 0, "vacuous: {counts:?}");
    Ok(format!(
        "sim {}, subres {}, covers {}, cohgen {}, c1 {}, cGamma {}, adapted {}",
        counts[0], counts[1], counts[2], counts[3], counts[4], counts[5], counts[6]
    ))
}

/// Composite of `γ` along a walk, recomputed step by step.
pub fn transport_naive(q: &FinGroupoid, gamma: &PathConnection, w: &Walk) -> usize {
    let v = w.vertices();
    let mut acc = q.id(v[0]);
    for pair in v.windows(2) {
        acc = q
            .compose(acc, gamma.gamma(pair[0], pair[1]).unwrap())
            .unwrap();
    }
    acc
}

fn check_witness(
    q: &FinGroupoid,
    gamma: &PathConnection,
    u: &OpenSet,
    strategy: TreeStrategy,
) -> std::result::Result<bool, String> {
    match flatness_witness(gamma, q, u, strategy) {
        None => Ok(true),
        Some(w) => {
            ensure!(w.cycle.start() == w.cycle.end(), "witness is not closed");
            ensure!(w.cycle.lies_in(u), "witness leaves U");
            let t = transport_naive(q, gamma, &w.cycle);
            ensure!(
                t == w.transport && !q.is_identity(t),
                "witness transport is wrong"
            );
            Ok(false)
        }
    }
}

/// Flatness via two different spanning trees on 100 random instances, both
/// compared with a search oracle; the seeded non-flat cycle is found.
pub fn flatness() -> Check {
    let mut r = rng(2024);
    let mut flat = 0usize;
    for k in 0..100 {
        let n = r.random_range(3..=5);
        let x = random_space(&mut r, n, 0.5);
        let (q, gamma) = if k % 2 == 0 {
            let q = random_groupoid(&mut r, &x).base().clone();
            let gamma = random_connection(&mut r, &q);
            (q, gamma)
        } else {
            random_flat_connection(&mut r, &FinGroup::cyclic(3), &x)
        };
        let opens = nonempty_opens(q.objects());
        let u = &opens[r.random_range(0..opens.len())];
        for u in [&q.objects().whole(), u] {
            let bfs = check_witness(&q, &gamma, u, TreeStrategy::Bfs)?;
            let dfs = check_witness(&q, &gamma, u, TreeStrategy::Dfs)?;
            let oracle = flat_by_search(&q, &gamma, u);
            ensure!(
                bfs == dfs && dfs == oracle,
                "instance {k}: bfs {bfs}, dfs {dfs}, oracle {oracle}"
            );
            flat += usize::from(bfs);
        }
    }
    let (q, gamma) = fixtures::nonflat_connection();
    let whole = q.objects().whole();
    let w = flatness_witness(&gamma, &q, &whole, TreeStrategy::Bfs)
        .ok_or("seeded cycle not detected")?;
    ensure!(
        !check_witness(&q, &gamma, &whole, TreeStrategy::Dfs)?,
        "DFS misses the seeded cycle"
    );
    ensure!(
        !flat_by_search(&q, &gamma, &whole),
        "oracle misses the seeded cycle"
    );
    let (fq, fg) = fixtures::flat_connection();
    ensure!(
        is_flat_on(&fg, &fq, &fq.objects().whole(), TreeStrategy::Dfs),
        "flat fixture reported non-flat"
    );
    Ok(format!(
        "{flat} of 200 flat; seeded cycle {} with transport {}",
        w.cycle.fmt(q.objects()),
        q.arrow_name(w.transport)
    ))
}

/// Every continuous section `s: U → star(x)`, by backtracking over the
/// arrows `x → y` with the continuity condition checked on each pair.
pub fn all_sections_naive(q: &TopGroupoid, u: &OpenSet, x: usize) -> Vec<Section> {
    let g = q.base();
    let space = q.objects();
    let a = q.arrow_space();
    let points: Vec<usize> = u.points().collect();
    let options: Vec<Vec<usize>> = points.iter().map(|&y| g.hom(x, y).collect()).collect();
    let total: usize = options.iter().map(Vec::len).product();
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut values = vec![None; space.len()];
        for (k, &y) in points.iter().enumerate() {
            values[y] = Some(options[k][code % options[k].len()]);
            code /= options[k].len();
        }
        let continuous = points.iter().all(|&y| {
            space
                .minup(y)
                .ones()
                .all(|z| a.minup(values[y].unwrap()).contains(values[z].unwrap()))
        });
        if continuous {
            out.push(Section {
                base: x,
                carrier: u.clone(),
                values,
            });
        }
    }
    out
}

/// `trivialize` on every section of every fixture, with the iso checked
/// arrow by arrow and continuity in both directions.
pub fn trivializations() -> Check {
    let mut count = 0usize;
    for Fixture { name, groupoid } in fixtures::suite() {
        let g = groupoid.base();
        let space = groupoid.objects();
        for u in nonempty_opens(space) {
            for x in u.points() {
                let naive = all_sections_naive(&groupoid, &u, x);
                ensure!(
                    naive.is_empty() == find_section(&groupoid, &u, x).is_err(),
                    "{name}: section search disagrees with the oracle"
                );
                for s in naive {
                    let t = ok(trivialize(&groupoid, &s), name)?;
                    let p = t.product.base();
                    let pa = t.product.arrow_space();
                    let a = groupoid.arrow_space();
                    let arrows: Vec<usize> = g.arrows_over(u.bits()).ones().collect();
                    ensure!(arrows.len() == p.len(), "{name}: sizes differ");
                    let phi = |h: usize| t.arrow_map[h].expect("arrow over U");
                    let mut image = HashSet::new();
                    for &h in &arrows {
                        let k = phi(h);
                        ensure!(image.insert(k), "{name}: not injective");
                        ensure!(t.inverse[k] == h, "{name}: inverse disagrees");
                        ensure!(
                            t.object_map[g.src(h)] == Some(p.src(k))
                                && t.object_map[g.dst(h)] == Some(p.dst(k)),
                            "{name}: endpoints not preserved"
                        );
                        // arrow at (vertex, (y, z)) is s(y)·h·s(z)⁻¹
                        let loop_ = g
                            .compose(g.compose(s.at(g.src(h)), h).unwrap(), g.inv(s.at(g.dst(h))))
                            .unwrap();
                        let pos = t.vertex_group.iter().position(|&v| v == loop_).unwrap();
                        let (oy, oz) = (p.src(k), p.dst(k));
                        let m = t.vertex_group.len();
                        ensure!(
                            k == (oy * u.len() + oz) * m + pos,
                            "{name}: wrong vertex label"
                        );
                        for &l in &arrows {
                            if let Some(c) = g.compose(h, l) {
                                ensure!(
                                    p.compose(k, phi(l)) == Some(phi(c)),
                                    "{name}: composition not preserved"
                                );
                            }
                            let up = a.minup(h).contains(l);
                            let up_image = pa.minup(k).contains(phi(l));
                            ensure!(
                                up == up_image,
                                "{name}: not a homeomorphism at {}",
                                g.arrow_name(h)
                            );
                        }
                    }
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} sections trivialized"))
}

/// Criterion number, description and check.
pub type Criterion = (usize, &'static str, fn() -> Check);

pub fn all() -> Vec<Criterion> {
    vec![
        (
            1,
            "glob and loc, anchor pushforward and pullback form Galois connections",
            galois as fn() -> Check,
        ),
        (
            2,
            "glob agrees with the intersection oracle",
            glob_matches_oracle,
        ),
        (
            3,
            "glob(loc(Q)) = Inn(Q) on discrete spaces",
            discrete_glob_is_inner,
        ),
        (
            4,
            "bundles of groups are sheaves, PAIR(D2) is not",
            sheaf_condition,
        ),
        (
            5,
            "SYM2 is star connected with a proper punctured C1",
            sym2_stars,
        ),
        (6, "C1 and C_Gamma are generated by any cover", generation),
        (7, "coherence suite", coherence_suite),
        (8, "flatness is independent of the spanning tree", flatness),
        (9, "trivialization over every section", trivializations),
    ]
}
