//! Exhaustive search for a section that is coherent but not globally coherent.

use lsg_core::finspace::FinSpace;
use lsg_core::germs::{
    enumerate_sections, global_coherence_witness, Atlas, CoherenceWitness, LocalSubgroupoid,
};

use crate::error::Result;
use crate::gdf::{natural_topology, AtlasDecl, GdfDocument, GroupoidSpec, TopologySpec};

/// Upper bound on sections enumerated per candidate groupoid.
const MAX_SECTIONS: usize = 100_000;

/// T0 spaces on `n` points up to homeomorphism, points named `p0, p1, ...`.
pub fn t0_spaces(n: usize) -> Vec<FinSpace> {
    let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut out: Vec<FinSpace> = Vec::new();
    // each pair is unrelated, i in minup(j), or j in minup(i)
    let total = 3usize.pow(pairs.len() as u32);
    for mut code in 0..total {
        let mut below = vec![vec![false; n]; n];
        for (i, row) in below.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(i, j) in &pairs {
            match code % 3 {
                1 => below[j][i] = true,
                2 => below[i][j] = true,
                _ => {}
            }
            code /= 3;
        }
        let transitive = (0..n)
            .all(|a| (0..n).all(|b| (0..n).all(|c| !(below[a][b] && below[b][c]) || below[a][c])));
        if !transitive {
            continue;
        }
        let minup = (0..n)
            .map(|x| (0..n).filter(|&y| below[x][y]).collect())
            .collect();
        let Ok(space) = FinSpace::new(names.clone(), minup) else {
            continue;
        };
        if out.iter().all(|s| s.find_homeomorphism(&space).is_none()) {
            out.push(space);
        }
    }
    out
}

/// Groupoid shapes tried on each space, smallest first.
fn candidate_specs() -> Vec<GroupoidSpec> {
    vec![
        GroupoidSpec::Discrete,
        GroupoidSpec::Pair,
        GroupoidSpec::Bundle { order: 2 },
        GroupoidSpec::Product { order: 2 },
    ]
}

#[derive(Debug, Clone)]
pub struct Found {
    pub doc: GdfDocument,
    pub witness: String,
}

/// First section of `doc`'s groupoid over the whole space that is not
/// globally coherent, as a document declaring the section by its minimal atlas.
pub fn search_document(doc: &GdfDocument, max_arrows: usize) -> Result<Option<Found>> {
    let q = doc.q();
    let whole = doc.space().whole();
    let sections = enumerate_sections(q, &whole, max_arrows, MAX_SECTIONS)?;
    let Some((s, w)) = sections
        .iter()
        .find_map(|s| global_coherence_witness(q, s).map(|w| (s, w)))
    else {
        return Ok(None);
    };
    Ok(Some(found(doc, s, &w)))
}

fn found(doc: &GdfDocument, s: &LocalSubgroupoid, w: &CoherenceWitness) -> Found {
    let q = doc.q();
    let space = doc.space();
    let mut out = GdfDocument::bare(
        doc.groupoid_spec.clone(),
        doc.topology_spec,
        doc.groupoid.clone(),
    );
    let atlas = Atlas::minimal(q, s);
    let mut charts = Vec::new();
    for (x, h) in s.carrier().points().zip(atlas.charts()) {
        let name = format!("s_{}", space.name(x));
        out.wides.push((name.clone(), h.clone()));
        charts.push(name);
    }
    out.atlases.push(AtlasDecl {
        name: "s".to_string(),
        charts,
        atlas,
    });
    let witness = match w {
        CoherenceWitness::Point { x, extra, missing } => format!(
            "at {}: loc(glob(s)) adds {} and drops {}",
            space.name(*x),
            q.fmt_arrows(extra),
            q.fmt_arrows(missing)
        ),
        CoherenceWitness::Open { u, x } => {
            format!("on {} at {}", space.fmt_set(u.bits()), space.name(*x))
        }
    };
    Found { doc: out, witness }
}

/// Every candidate groupoid on every T0 space with at most `max_points`
/// points, in increasing size. Candidates beyond the guards are skipped.
pub fn search_all(max_points: usize, max_arrows: usize) -> Result<(Option<Found>, usize)> {
    let mut tried = 0;
    for n in 1..=max_points {
        for space in t0_spaces(n) {
            for spec in candidate_specs() {
                let top = natural_topology(&spec, &space)?;
                if top.base().non_identity_over(space.whole().bits()).len() > max_arrows {
                    continue;
                }
                let doc = GdfDocument::bare(spec, TopologySpec::Natural, top);
                tried += 1;
                match search_document(&doc, max_arrows) {
                    Ok(Some(f)) => return Ok((Some(f), tried)),
                    Ok(None) => {}
                    Err(e) if e.exit_code() == 3 => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok((None, tried))
}
