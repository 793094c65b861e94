//! Documents for the bundled examples.

use clap::ValueEnum;
use lsg_core::finspace::FinSpace;
use lsg_core::fixtures;

use crate::error::{CliError, Result};
use crate::gdf::{natural_topology, GdfDocument, GroupoidSpec, TopologySpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Example {
    /// Two-point discrete space.
    D2,
    /// Sierpinski space.
    S2,
    /// Four-point circle.
    C4,
    /// Eight-point circle.
    C8,
    /// Pair groupoid, on d2 unless `--on` says otherwise.
    Pair,
    /// Z2 bundle of groups, on c4 unless `--on` says otherwise.
    Z2bundle,
    /// Symmetry groupoid of the double cover of c4, with its two-chart cover.
    Sym2,
}

pub fn space_named(name: &str) -> Result<FinSpace> {
    Ok(match name {
        "d2" => fixtures::d2(),
        "s2" => fixtures::s2(),
        "v3" => fixtures::v3(),
        "c4" => fixtures::c4(),
        "c8" => fixtures::c8(),
        other => {
            return Err(CliError::Usage(format!(
                "unknown space `{other}`; expected d2, s2, v3, c4 or c8"
            )))
        }
    })
}

fn from_spec(spec: GroupoidSpec, space: &FinSpace) -> Result<GdfDocument> {
    let top = natural_topology(&spec, space)?;
    Ok(GdfDocument::bare(spec, TopologySpec::Natural, top))
}

pub fn generate(example: Example, on: Option<&str>) -> Result<GdfDocument> {
    let on_or = |default: &str| space_named(on.unwrap_or(default));
    let space_only = |name: &str| -> Result<GdfDocument> {
        if on.is_some() {
            return Err(CliError::Usage(
                "`--on` applies to pair and z2bundle only".into(),
            ));
        }
        from_spec(GroupoidSpec::Discrete, &space_named(name)?)
    };
    match example {
        Example::D2 => space_only("d2"),
        Example::S2 => space_only("s2"),
        Example::C4 => space_only("c4"),
        Example::C8 => space_only("c8"),
        Example::Pair => from_spec(GroupoidSpec::Pair, &on_or("d2")?),
        Example::Z2bundle => from_spec(GroupoidSpec::Bundle { order: 2 }, &on_or("c4")?),
        Example::Sym2 => {
            if on.is_some() {
                return Err(CliError::Usage(
                    "`--on` applies to pair and z2bundle only".into(),
                ));
            }
            let q = fixtures::sym2();
            let cover = fixtures::sym2_cover(&q);
            let mut doc = GdfDocument::bare(GroupoidSpec::Explicit, TopologySpec::Explicit, q);
            doc.covers.push(("halves".to_string(), cover));
            Ok(doc)
        }
    }
}
