//! Text reports over a parsed document. Each report says whether the property
//! it is about holds, so the binary can turn that into an exit code.

use std::fmt::Write;

use lsg_core::bits::{self, Bits};
use lsg_core::connections::{
    c_gamma_local, flatness_witness, gamma_path_local_witness, TreeStrategy,
};
use lsg_core::finspace::OpenSet;
use lsg_core::germs::{
    from_atlas, glob, glob_atlas, glob_oracle, incoherent_arrows, is_locally_coherent, loc,
    presheaf_is_sheaf, restrict_local, LocalSubgroupoid, SheafFailure,
};
use lsg_core::groupoid::{FinGroupoid, WideSubgroupoid};
use lsg_core::topgroupoid::{c1_local, path_compatible_charts, path_local_witness};
use lsg_core::transfer::anchor_relation;

use crate::error::Result;
use crate::gdf::{GdfDocument, MorphismTarget};

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub max_points: usize,
    pub max_arrows: usize,
    /// Compute `glob` by intersecting all wide subgroupoids instead of generating.
    pub oracle: bool,
    /// Print germs and other detail beyond the witnesses of failures.
    pub witness: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            max_points: lsg_core::finspace::DEFAULT_MAX_POINTS,
            max_arrows: lsg_core::groupoid::DEFAULT_MAX_ARROWS,
            oracle: false,
            witness: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub text: String,
    /// False when the property the report is about fails somewhere.
    pub holds: bool,
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn set(doc: &GdfDocument, b: &Bits) -> String {
    doc.space().fmt_set(b)
}

fn arrows(q: &FinGroupoid, b: &Bits) -> String {
    q.fmt_arrows(b)
}

fn non_identity(q: &FinGroupoid, b: &Bits) -> Bits {
    bits::from_iter(q.len(), b.ones().filter(|&g| !q.is_identity(g)))
}

/// Summary of what the document declares.
pub fn check(doc: &GdfDocument) -> Result<Report> {
    let q = doc.q();
    let space = doc.space();
    let mut out = String::new();
    let opens = space.open_sets(64)?.len();
    writeln!(out, "space: {} points, {} open sets", space.len(), opens).unwrap();
    writeln!(
        out,
        "groupoid: {} arrows, {} non-identity ({:?})",
        q.len(),
        q.non_identity_over(space.whole().bits()).len(),
        doc.groupoid_spec
    )
    .unwrap();
    writeln!(out, "topology: {:?}", doc.topology_spec).unwrap();
    for (name, h) in &doc.wides {
        writeln!(
            out,
            "wide {name}: {} arrows on {}",
            h.len(),
            set(doc, h.carrier().bits())
        )
        .unwrap();
    }
    for (name, c) in &doc.covers {
        writeln!(out, "cover {name}: {} members", c.members().len()).unwrap();
    }
    for a in &doc.atlases {
        writeln!(out, "atlas {}: charts {}", a.name, a.charts.join(" ")).unwrap();
    }
    for (name, _) in &doc.connections {
        writeln!(out, "connection {name}").unwrap();
    }
    for g in &doc.geodesics {
        writeln!(out, "geodesics {} on cover {}", g.name, g.cover).unwrap();
    }
    for m in &doc.morphisms {
        writeln!(out, "morphism {} to {}", m.name, target_name(m.target)).unwrap();
    }
    out.push_str("ok\n");
    Ok(Report {
        text: out,
        holds: true,
    })
}

fn target_name(t: MorphismTarget) -> &'static str {
    match t {
        MorphismTarget::Pair => "pair",
        MorphismTarget::Same => "self",
    }
}

/// `C1(X)`, star components, and `c1` along each declared cover.
pub fn c1(doc: &GdfDocument, opts: &Options) -> Result<Report> {
    let top = &doc.groupoid;
    let q = doc.q();
    let whole = doc.space().whole();
    let c = top.c1(&whole);
    let mut out = String::new();
    let mut holds = true;
    writeln!(out, "C1(X) = {}", arrows(q, &non_identity(q, c.arrows()))).unwrap();
    writeln!(out, "C1(X) has {} of {} arrows", c.len(), q.len()).unwrap();
    for x in whole.points() {
        let comp = non_identity(q, &top.star_component(&whole, x));
        writeln!(
            out,
            "star component at {}: {}",
            doc.space().name(x),
            arrows(q, &comp)
        )
        .unwrap();
    }
    for (name, cover) in &doc.covers {
        writeln!(out, "cover {name}:").unwrap();
        match path_compatible_charts(top, cover) {
            Err(e) => {
                holds = false;
                writeln!(out, "  path compatible: no").unwrap();
                writeln!(out, "  witness: {e}").unwrap();
            }
            Ok(charts) => {
                writeln!(out, "  path compatible: yes").unwrap();
                if opts.witness {
                    for (i, h) in charts.iter().enumerate() {
                        writeln!(
                            out,
                            "  chart {i}: {}",
                            arrows(q, &non_identity(q, h.arrows()))
                        )
                        .unwrap();
                    }
                }
                let local = c1_local(top, cover)?;
                let g = glob(q, &local);
                writeln!(
                    out,
                    "  glob(c1) = C1(carrier): {}",
                    yes(g == top.c1(cover.carrier()))
                )
                .unwrap();
                match path_local_witness(top, cover, opts.max_points)? {
                    None => writeln!(out, "  path local: yes").unwrap(),
                    Some(w) => {
                        holds = false;
                        writeln!(out, "  path local: no").unwrap();
                        writeln!(
                            out,
                            "  witness: U = {}, charts {} and {} at {}",
                            set(doc, w.u.bits()),
                            w.i,
                            w.j,
                            doc.space().name(w.x)
                        )
                        .unwrap();
                    }
                }
            }
        }
    }
    Ok(Report { text: out, holds })
}

pub fn star_connectivity(doc: &GdfDocument, opts: &Options) -> Result<Report> {
    let top = &doc.groupoid;
    let q = doc.q();
    let mut out = String::new();
    let whole_ok = top.is_star_connected();
    writeln!(out, "star connected: {}", yes(whole_ok)).unwrap();
    if !whole_ok {
        let missing = bits::difference(
            &q.arrows_over(doc.space().whole().bits()),
            top.c1(&doc.space().whole()).arrows(),
        );
        writeln!(out, "witness: outside C1(X): {}", arrows(q, &missing)).unwrap();
    }
    let opens: Vec<OpenSet> = doc
        .space()
        .open_sets(opts.max_points)?
        .into_iter()
        .filter(|u| !u.is_empty())
        .collect();
    let failing: Vec<&OpenSet> = opens
        .iter()
        .filter(|u| !top.is_star_connected_on(u))
        .collect();
    writeln!(
        out,
        "open sets on which Q|U is star connected: {} of {}",
        opens.len() - failing.len(),
        opens.len()
    )
    .unwrap();
    if opts.witness {
        for u in failing {
            writeln!(out, "  not star connected on {}", set(doc, u.bits())).unwrap();
        }
    }
    Ok(Report {
        text: out,
        holds: whole_ok,
    })
}

/// A section to classify and, for atlas rows, the atlas defining it.
struct Row<'a> {
    name: String,
    section: LocalSubgroupoid,
    atlas: Option<&'a lsg_core::germs::Atlas>,
}

struct Flags {
    coherent: Option<String>,
    globally: Option<String>,
    totally: Option<String>,
    adapted: Option<Option<String>>,
}

fn glob_with(q: &FinGroupoid, s: &LocalSubgroupoid, opts: &Options) -> Result<WideSubgroupoid> {
    Ok(if opts.oracle {
        glob_oracle(q, s, opts.max_arrows)?
    } else {
        glob(q, s)
    })
}

/// Each flag is `None` when it holds and a witness line when it fails.
fn flags(doc: &GdfDocument, row: &Row<'_>, opts: &Options) -> Result<Flags> {
    let q = doc.q();
    let space = doc.space();
    let s = &row.section;
    let g = glob_with(q, s, opts)?;
    let lg = loc(q, &g);
    let coherent = s.carrier().points().find_map(|x| {
        let missing = bits::difference(s.rep(x).arrows(), lg.rep(x).arrows());
        (!missing.is_clear()).then(|| {
            format!(
                "at {}: s(x) has {} outside glob(s)",
                space.name(x),
                arrows(q, &missing)
            )
        })
    });
    let globally = s.carrier().points().find_map(|x| {
        (s.rep(x) != lg.rep(x)).then(|| {
            let extra = bits::difference(lg.rep(x).arrows(), s.rep(x).arrows());
            let missing = bits::difference(s.rep(x).arrows(), lg.rep(x).arrows());
            format!(
                "at {}: loc(glob(s)) adds {} and drops {}",
                space.name(x),
                arrows(q, &extra),
                arrows(q, &missing)
            )
        })
    });
    let mut totally = None;
    for u in space.open_sets(opts.max_points)? {
        if u.is_empty() || !u.is_subset(s.carrier()) {
            continue;
        }
        let su = restrict_local(s, &u)?;
        let gu = loc(q, &glob_with(q, &su, opts)?);
        let bad = su
            .carrier()
            .points()
            .find(|&x| !su.rep(x).arrows().is_subset(gu.rep(x).arrows()));
        if let Some(x) = bad {
            totally = Some(format!(
                "s|{} is not coherent at {}",
                set(doc, u.bits()),
                space.name(x)
            ));
            break;
        }
    }
    let adapted = row.atlas.map(|a| {
        let ga = glob_atlas(q, a);
        (ga != g).then(|| {
            format!(
                "glob(atlas) has {} beyond glob(s)",
                arrows(q, &bits::difference(ga.arrows(), g.arrows()))
            )
        })
    });
    Ok(Flags {
        coherent,
        globally,
        totally,
        adapted,
    })
}

/// Coherence flags for `C1`, `loc` of every declared wide subgroupoid and
/// every declared atlas, and local coherence of the wide subgroupoids.
pub fn coherence(doc: &GdfDocument, opts: &Options) -> Result<Report> {
    let q = doc.q();
    let whole = doc.space().whole();
    let mut rows = vec![Row {
        name: "C1".to_string(),
        section: loc(q, &doc.groupoid.c1(&whole)),
        atlas: None,
    }];
    for (name, h) in &doc.wides {
        rows.push(Row {
            name: format!("loc({name})"),
            section: loc(q, h),
            atlas: None,
        });
    }
    for a in &doc.atlases {
        rows.push(Row {
            name: format!("atlas {}", a.name),
            section: from_atlas(q, &a.atlas),
            atlas: Some(&a.atlas),
        });
    }
    let width = rows
        .iter()
        .map(|r| r.name.len())
        .max()
        .unwrap_or(0)
        .max("section".len());
    let mut out = String::new();
    let mut witnesses = String::new();
    let mut holds = true;
    writeln!(
        out,
        "{:width$}  coherent  globally  totally  adapted",
        "section"
    )
    .unwrap();
    for row in &rows {
        let f = flags(doc, row, opts)?;
        let adapted = match &f.adapted {
            None => "-",
            Some(a) => yes(a.is_none()),
        };
        writeln!(
            out,
            "{:width$}  {:8}  {:8}  {:7}  {}",
            row.name,
            yes(f.coherent.is_none()),
            yes(f.globally.is_none()),
            yes(f.totally.is_none()),
            adapted
        )
        .unwrap();
        let fails = [
            ("coherent", &f.coherent),
            ("globally coherent", &f.globally),
            ("totally coherent", &f.totally),
            ("globally adapted", f.adapted.as_ref().unwrap_or(&None)),
        ];
        for (what, w) in fails {
            if let Some(w) = w {
                holds = false;
                writeln!(witnesses, "{} not {what}: {w}", row.name).unwrap();
            }
        }
        if opts.witness {
            let g = glob_with(q, &row.section, opts)?;
            writeln!(
                witnesses,
                "{}: glob = {}",
                row.name,
                arrows(q, &non_identity(q, g.arrows()))
            )
            .unwrap();
            for x in row.section.carrier().points() {
                let rep = non_identity(q, row.section.rep(x).arrows());
                writeln!(
                    witnesses,
                    "{}: germ at {} = {}",
                    row.name,
                    doc.space().name(x),
                    arrows(q, &rep)
                )
                .unwrap();
            }
        }
    }
    let mut wides: Vec<(String, WideSubgroupoid)> =
        vec![("C1".to_string(), doc.groupoid.c1(&whole))];
    wides.extend(doc.wides.iter().cloned());
    let width = wides
        .iter()
        .map(|(n, _)| n.len())
        .max()
        .unwrap_or(0)
        .max("wide".len());
    writeln!(out, "\n{:width$}  locally  coherent", "wide").unwrap();
    for (name, h) in &wides {
        let locally = is_locally_coherent(q, h);
        let bad = incoherent_arrows(q, h);
        writeln!(
            out,
            "{name:width$}  {:7}  {}",
            yes(locally),
            yes(bad.is_clear())
        )
        .unwrap();
        if !locally {
            holds = false;
            writeln!(witnesses, "{name} not locally coherent").unwrap();
        }
        if !bad.is_clear() {
            holds = false;
            writeln!(
                witnesses,
                "{name} not coherent: {} outside glob(loc({name}))",
                arrows(q, &bad)
            )
            .unwrap();
        }
    }
    if !witnesses.is_empty() {
        out.push('\n');
        out.push_str(&witnesses);
    }
    Ok(Report { text: out, holds })
}

/// Flatness, `C_Γ` and, for geodesic structures, `c_Γ` and path locality.
pub fn connection(doc: &GdfDocument, opts: &Options) -> Result<Report> {
    let q = doc.q();
    let space = doc.space();
    let whole = space.whole();
    let mut out = String::new();
    let mut holds = true;
    for (name, gamma) in &doc.connections {
        writeln!(out, "connection {name}:").unwrap();
        let bfs = flatness_witness(gamma, q, &whole, TreeStrategy::Bfs);
        let dfs = flatness_witness(gamma, q, &whole, TreeStrategy::Dfs);
        writeln!(out, "  flat: {}", yes(bfs.is_none())).unwrap();
        if bfs.is_some() != dfs.is_some() {
            // the two trees must agree; a disagreement is a bug worth surfacing
            holds = false;
            writeln!(out, "  spanning trees disagree").unwrap();
        }
        if let Some(w) = &bfs {
            holds = false;
            writeln!(
                out,
                "  witness: cycle {} transports to {}",
                w.cycle.fmt(space),
                q.arrow_name(w.transport)
            )
            .unwrap();
        }
        let cg = gamma.c_gamma(q, &whole);
        writeln!(
            out,
            "  C_gamma(X) = {}",
            arrows(q, &non_identity(q, cg.arrows()))
        )
        .unwrap();
        writeln!(
            out,
            "  steps in star components: {}",
            yes(gamma.steps_in_star_components(&doc.groupoid))
        )
        .unwrap();
        for g in doc.geodesics.iter() {
            let cover = g.structure.cover();
            writeln!(out, "  geodesics {}:", g.name).unwrap();
            match c_gamma_local(q, gamma, &g.structure) {
                Ok(local) => {
                    let same = glob(q, &local) == gamma.c_gamma(q, cover.carrier());
                    writeln!(out, "    glob(c_gamma) = C_gamma(carrier): {}", yes(same)).unwrap();
                    if !same {
                        holds = false;
                    }
                }
                Err(e) => {
                    holds = false;
                    writeln!(out, "    c_gamma undefined: {e}").unwrap();
                }
            }
            match gamma_path_local_witness(q, gamma, cover, opts.max_points)? {
                None => writeln!(out, "    gamma path local: yes").unwrap(),
                Some(w) => {
                    writeln!(out, "    gamma path local: no").unwrap();
                    writeln!(
                        out,
                        "    witness: U = {}, charts {} and {} at {}",
                        set(doc, w.u.bits()),
                        w.i,
                        w.j,
                        space.name(w.x)
                    )
                    .unwrap();
                }
            }
            if opts.witness {
                for (i, w) in g.structure.walks() {
                    if !w.is_empty() {
                        writeln!(out, "    walk in member {i}: {}", w.fmt(space)).unwrap();
                    }
                }
            }
        }
    }
    if doc.connections.is_empty() {
        out.push_str("no connections declared\n");
    }
    Ok(Report { text: out, holds })
}

/// Pushforward and pullback of the declared wide subgroupoids and of `C1`
/// along each morphism, with the adjunction checked on sections.
pub fn transfer(doc: &GdfDocument, opts: &Options) -> Result<Report> {
    let q = doc.q();
    let space = doc.space();
    let whole = space.whole();
    let mut out = String::new();
    let mut holds = true;
    let mut wides: Vec<(String, WideSubgroupoid)> =
        vec![("C1".to_string(), doc.groupoid.c1(&whole))];
    wides.extend(doc.wides.iter().cloned());
    for m in &doc.morphisms {
        let t = &m.transfer;
        let cod = t.cod();
        writeln!(out, "morphism {} to {}:", m.name, target_name(m.target)).unwrap();
        for (name, h) in &wides {
            let pushed = t.pushforward(h);
            let back = t.pullback(&pushed);
            writeln!(
                out,
                "  push({name}) = {}",
                arrows(cod, &non_identity(cod, pushed.arrows()))
            )
            .unwrap();
            let unit = h.le(&back)?;
            writeln!(out, "  {name} <= pull(push({name})): {}", yes(unit)).unwrap();
            if opts.witness {
                writeln!(
                    out,
                    "  pull(push({name})) = {}",
                    arrows(q, &non_identity(q, back.arrows()))
                )
                .unwrap();
            }
            let s = loc(q, h);
            let r = t.push_local(&s)?;
            let (left, right) = t.check_adjunction(&s, &r)?;
            writeln!(out, "  adjunction on loc({name}): {}", yes(left && right)).unwrap();
            holds &= unit && left && right;
            if m.target == MorphismTarget::Pair
                && t.morphism() == lsg_core::transfer::anchor(q).morphism()
            {
                let rel = anchor_relation(q, &s)?;
                for x in s.carrier().points() {
                    let classes: Vec<String> = rel.classes(x).iter().map(|c| set(doc, c)).collect();
                    writeln!(
                        out,
                        "  classes of {name} at {}: {}",
                        space.name(x),
                        classes.join(" ")
                    )
                    .unwrap();
                }
            }
        }
    }
    if doc.morphisms.is_empty() {
        out.push_str("no morphisms declared\n");
    }
    Ok(Report { text: out, holds })
}

pub fn sheaf(doc: &GdfDocument, opts: &Options) -> Result<Report> {
    let q = doc.q();
    let mut out = String::new();
    let failure = presheaf_is_sheaf(q, opts.max_points, opts.max_arrows)?;
    out.push_str(if failure.is_none() {
        "a sheaf\n"
    } else {
        "not a sheaf\n"
    });
    let family_text = |family: &[(usize, WideSubgroupoid)]| -> String {
        family
            .iter()
            .map(|(x, h)| {
                format!(
                    "{}: {}",
                    doc.space().name(*x),
                    arrows(q, &non_identity(q, h.arrows()))
                )
            })
            .collect::<Vec<_>>()
            .join("; ")
    };
    match &failure {
        None => {}
        Some(SheafFailure::NonUnique { u, family, gluings }) => {
            writeln!(
                out,
                "witness: gluing on {} is not unique",
                set(doc, u.bits())
            )
            .unwrap();
            writeln!(out, "  family: {}", family_text(family)).unwrap();
            for g in gluings {
                writeln!(out, "  gluing: {}", arrows(q, &non_identity(q, g.arrows()))).unwrap();
            }
        }
        Some(SheafFailure::NoGluing { u, family }) => {
            writeln!(out, "witness: no gluing on {}", set(doc, u.bits())).unwrap();
            writeln!(out, "  family: {}", family_text(family)).unwrap();
        }
    }
    Ok(Report {
        text: out,
        holds: failure.is_none(),
    })
}
