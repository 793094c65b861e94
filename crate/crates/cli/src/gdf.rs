//! The GDF text format: a line-oriented description of a finite space, a
//! groupoid over it, its arrow topology and named auxiliary data.
//!
//! ```text
//! # comment
//! [space]
//! points = x1 x2 y1 y2
//! minup(y1) = x1 x2 y1
//!
//! [groupoid]
//! builder = pair            # or explicit arrows, see below
//!
//! [wide H]
//! arrows = x1/y1 y1/x1
//! ```
//!
//! Every line is a `[kind name]` header, a `key = value` entry or an arrow
//! declaration `name: a -> b`. Keys may take arguments, as in `comp(f, g) = h`.
//! Values are whitespace-separated identifiers. The printer emits a canonical
//! form and `parse(print(parse(t))) == parse(t)`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use lsg_core::connections::{GeodesicStructure, PathConnection, Walk};
use lsg_core::finspace::{FinSpace, OpenSet, Point};
use lsg_core::germs::Atlas;
use lsg_core::groupoid::{
    discrete_groupoid, pair_groupoid, Arrow, FinGroup, FinGroupoid, GroupoidMorphism, RawGroupoid,
    WideSubgroupoid,
};
use lsg_core::topgroupoid::{top_action, top_bundle, top_pair, top_product, Cover, TopGroupoid};
use lsg_core::transfer::{anchor, Transfer};

use crate::error::{CliError, Result};

/// How the groupoid section was given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupoidSpec {
    Discrete,
    Pair,
    /// `X × ℤ/n` as a bundle of groups.
    Bundle {
        order: usize,
    },
    /// `ℤ/n × (X × X)`.
    Product {
        order: usize,
    },
    /// `ℤ/n` acting on `X`; `images[k - 1]` is the permutation of element `k`.
    Action {
        order: usize,
        images: Vec<Vec<Point>>,
    },
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopologySpec {
    /// The builder's own topology; anchor for explicit groupoids.
    Natural,
    Anchor,
    Discrete,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtlasDecl {
    pub name: String,
    pub charts: Vec<String>,
    pub atlas: Atlas,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicsDecl {
    pub name: String,
    pub cover: String,
    pub structure: GeodesicStructure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphismTarget {
    /// The document's own groupoid.
    Same,
    /// The pair groupoid on the document's space.
    Pair,
}

#[derive(Debug, Clone)]
pub struct MorphismDecl {
    pub name: String,
    pub target: MorphismTarget,
    pub transfer: Transfer,
}

impl PartialEq for MorphismDecl {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.target == other.target
            && self.transfer.morphism() == other.transfer.morphism()
    }
}

impl Eq for MorphismDecl {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GdfDocument {
    pub groupoid_spec: GroupoidSpec,
    pub topology_spec: TopologySpec,
    pub groupoid: TopGroupoid,
    pub wides: Vec<(String, WideSubgroupoid)>,
    pub covers: Vec<(String, Cover)>,
    pub atlases: Vec<AtlasDecl>,
    pub connections: Vec<(String, PathConnection)>,
    pub geodesics: Vec<GeodesicsDecl>,
    pub morphisms: Vec<MorphismDecl>,
}

impl GdfDocument {
    /// A document with no auxiliary sections.
    pub fn bare(
        groupoid_spec: GroupoidSpec,
        topology_spec: TopologySpec,
        groupoid: TopGroupoid,
    ) -> Self {
        GdfDocument {
            groupoid_spec,
            topology_spec,
            groupoid,
            wides: Vec::new(),
            covers: Vec::new(),
            atlases: Vec::new(),
            connections: Vec::new(),
            geodesics: Vec::new(),
            morphisms: Vec::new(),
        }
    }

    pub fn space(&self) -> &FinSpace {
        self.groupoid.objects()
    }

    pub fn q(&self) -> &FinGroupoid {
        self.groupoid.base()
    }

    pub fn cover(&self, name: &str) -> Option<&Cover> {
        self.covers.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }
}

// ---------------------------------------------------------------------------
// lexing

#[derive(Debug, Clone)]
enum Body {
    Assign {
        key: String,
        args: Vec<String>,
        values: Vec<String>,
    },
    Arrow {
        name: String,
        src: String,
        dst: String,
    },
}

#[derive(Debug, Clone)]
struct Entry {
    line: usize,
    body: Body,
}

#[derive(Debug, Clone)]
struct Section {
    kind: String,
    name: Option<String>,
    line: usize,
    entries: Vec<Entry>,
}

const RESERVED: &[char] = &['[', ']', '(', ')', '=', ',', ':', '#'];

fn ident(line: usize, s: &str) -> Result<String> {
    let s = s.trim();
    if s.is_empty()
        || s.chars()
            .any(|c| c.is_whitespace() || RESERVED.contains(&c))
    {
        return Err(CliError::parse(line, format!("bad identifier `{s}`")));
    }
    Ok(s.to_string())
}

fn lex(text: &str) -> Result<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(inner) = content.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| CliError::parse(line, "unterminated section header"))?;
            let parts: Vec<&str> = inner.split_whitespace().collect();
            let (kind, name) = match parts.as_slice() {
                [kind] => (kind.to_string(), None),
                [kind, name] => (kind.to_string(), Some(ident(line, name)?)),
                _ => return Err(CliError::parse(line, "expected `[kind]` or `[kind name]`")),
            };
            sections.push(Section {
                kind,
                name,
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let body = if let Some((lhs, rhs)) = content.split_once('=') {
            let lhs = lhs.trim();
            let (key, args) = match lhs.split_once('(') {
                Some((key, rest)) => {
                    let inside = rest
                        .strip_suffix(')')
                        .ok_or_else(|| CliError::parse(line, "unbalanced parentheses in key"))?;
                    let args = inside
                        .split(',')
                        .map(|a| ident(line, a))
                        .collect::<Result<Vec<_>>>()?;
                    (ident(line, key)?, args)
                }
                None => (ident(line, lhs)?, Vec::new()),
            };
            let values = rhs
                .split_whitespace()
                .map(|v| ident(line, v))
                .collect::<Result<Vec<_>>>()?;
            Body::Assign { key, args, values }
        } else if let Some((name, ends)) = content.split_once(':') {
            let (src, dst) = ends
                .split_once("->")
                .ok_or_else(|| CliError::parse(line, "arrow declaration needs `a -> b`"))?;
            Body::Arrow {
                name: ident(line, name)?,
                src: ident(line, src)?,
                dst: ident(line, dst)?,
            }
        } else {
            return Err(CliError::parse(
                line,
                "expected `key = value` or `name: a -> b`",
            ));
        };
        let section = sections
            .last_mut()
            .ok_or_else(|| CliError::parse(line, "entry before the first section header"))?;
        section.entries.push(Entry { line, body });
    }
    Ok(sections)
}

// ---------------------------------------------------------------------------
// building

fn invalid(line: usize) -> impl Fn(lsg_core::Error) -> CliError {
    move |source| CliError::Invalid { line, source }
}

struct Ctx<'a> {
    space: &'a FinSpace,
}

impl Ctx<'_> {
    fn point(&self, line: usize, name: &str) -> Result<Point> {
        self.space.index_of(name).map_err(invalid(line))
    }

    fn points(&self, line: usize, names: &[String]) -> Result<Vec<Point>> {
        names.iter().map(|n| self.point(line, n)).collect()
    }

    fn open(&self, line: usize, names: &[String]) -> Result<OpenSet> {
        let pts = self.points(line, names)?;
        self.space
            .open(self.space.point_set(pts))
            .map_err(invalid(line))
    }
}

fn arrow(q: &FinGroupoid, line: usize, name: &str) -> Result<Arrow> {
    q.arrow_index(name).map_err(invalid(line))
}

fn single_value(line: usize, values: &[String]) -> Result<&str> {
    match values {
        [v] => Ok(v),
        _ => Err(CliError::parse(line, "expected exactly one value")),
    }
}

fn arity(line: usize, key: &str, args: &[String], n: usize) -> Result<()> {
    if args.len() != n {
        return Err(CliError::parse(
            line,
            format!("`{key}` takes {n} argument(s)"),
        ));
    }
    Ok(())
}

fn parse_group(line: usize, v: &str) -> Result<usize> {
    v.strip_prefix('Z')
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::parse(line, format!("unknown group `{v}`, expected `Zn`")))
}

fn build_space(sec: &Section) -> Result<FinSpace> {
    let mut names: Option<Vec<String>> = None;
    let mut ups: Vec<(usize, String, Vec<String>)> = Vec::new();
    for e in &sec.entries {
        match &e.body {
            Body::Assign { key, args, values } if key == "points" && args.is_empty() => {
                if names.replace(values.clone()).is_some() {
                    return Err(CliError::parse(e.line, "`points` given twice"));
                }
            }
            Body::Assign { key, args, values } if key == "minup" => {
                arity(e.line, key, args, 1)?;
                ups.push((e.line, args[0].clone(), values.clone()));
            }
            _ => {
                return Err(CliError::parse(
                    e.line,
                    "expected `points = ...` or `minup(p) = ...`",
                ))
            }
        }
    }
    let names = names.ok_or_else(|| CliError::parse(sec.line, "missing `points`"))?;
    let index: HashMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let lookup = |line: usize, n: &str| {
        index
            .get(n)
            .copied()
            .ok_or_else(|| CliError::parse(line, format!("unknown point `{n}`")))
    };
    let mut minup: Vec<Vec<Point>> = (0..names.len()).map(|i| vec![i]).collect();
    let mut given = HashSet::new();
    for (line, p, vals) in ups {
        let x = lookup(line, &p)?;
        if !given.insert(x) {
            return Err(CliError::parse(line, format!("`minup({p})` given twice")));
        }
        for v in vals {
            let y = lookup(line, &v)?;
            if !minup[x].contains(&y) {
                minup[x].push(y);
            }
        }
        minup[x].sort_unstable();
    }
    FinSpace::new(names, minup).map_err(invalid(sec.line))
}

fn build_groupoid(
    sec: Option<&Section>,
    space: &FinSpace,
) -> Result<(GroupoidSpec, FinGroupoid, usize)> {
    let Some(sec) = sec else {
        return Ok((GroupoidSpec::Discrete, discrete_groupoid(space), 0));
    };
    let ctx = Ctx { space };
    let mut builder: Option<(usize, String)> = None;
    let mut group: Option<usize> = None;
    let mut acts: BTreeMap<usize, (usize, Vec<Point>)> = BTreeMap::new();
    let mut arrows: Vec<(usize, String, Point, Point)> = Vec::new();
    let mut ids: Vec<(usize, String, String)> = Vec::new();
    let mut invs: Vec<(usize, String, String)> = Vec::new();
    let mut comps: Vec<(usize, String, String, String)> = Vec::new();
    for e in &sec.entries {
        match &e.body {
            Body::Arrow { name, src, dst } => {
                arrows.push((
                    e.line,
                    name.clone(),
                    ctx.point(e.line, src)?,
                    ctx.point(e.line, dst)?,
                ));
            }
            Body::Assign { key, args, values } => match key.as_str() {
                "builder" => {
                    arity(e.line, key, args, 0)?;
                    builder = Some((e.line, single_value(e.line, values)?.to_string()));
                }
                "group" => {
                    arity(e.line, key, args, 0)?;
                    group = Some(parse_group(e.line, single_value(e.line, values)?)?);
                }
                "act" => {
                    arity(e.line, key, args, 1)?;
                    let k: usize = args[0].parse().map_err(|_| {
                        CliError::parse(e.line, "`act` takes a group element number")
                    })?;
                    acts.insert(k, (e.line, ctx.points(e.line, values)?));
                }
                "id" => {
                    arity(e.line, key, args, 1)?;
                    ids.push((
                        e.line,
                        args[0].clone(),
                        single_value(e.line, values)?.to_string(),
                    ));
                }
                "inv" => {
                    arity(e.line, key, args, 1)?;
                    invs.push((
                        e.line,
                        args[0].clone(),
                        single_value(e.line, values)?.to_string(),
                    ));
                }
                "comp" => {
                    arity(e.line, key, args, 2)?;
                    comps.push((
                        e.line,
                        args[0].clone(),
                        args[1].clone(),
                        single_value(e.line, values)?.to_string(),
                    ));
                }
                _ => {
                    return Err(CliError::parse(
                        e.line,
                        format!("unknown groupoid key `{key}`"),
                    ))
                }
            },
        }
    }
    let explicit = !arrows.is_empty() || !ids.is_empty() || !invs.is_empty() || !comps.is_empty();
    let Some((bline, kind)) = builder else {
        if !explicit {
            return Ok((GroupoidSpec::Discrete, discrete_groupoid(space), sec.line));
        }
        if group.is_some() || !acts.is_empty() {
            return Err(CliError::parse(
                sec.line,
                "`group` and `act` need a builder",
            ));
        }
        let q = explicit_groupoid(space, sec.line, arrows, ids, invs, comps)?;
        return Ok((GroupoidSpec::Explicit, q, sec.line));
    };
    if explicit {
        return Err(CliError::parse(
            bline,
            "a builder cannot be mixed with explicit arrows",
        ));
    }
    let need_group = || {
        group.ok_or_else(|| CliError::parse(bline, format!("builder `{kind}` needs `group = Zn`")))
    };
    let spec = match kind.as_str() {
        "discrete" => GroupoidSpec::Discrete,
        "pair" => GroupoidSpec::Pair,
        "bundle" => GroupoidSpec::Bundle {
            order: need_group()?,
        },
        "product" => GroupoidSpec::Product {
            order: need_group()?,
        },
        "action" => {
            let order = need_group()?;
            let mut images = Vec::new();
            for k in 1..order {
                let (_, img) = acts
                    .remove(&k)
                    .ok_or_else(|| CliError::parse(bline, format!("missing `act({k})`")))?;
                images.push(img);
            }
            if let Some((&k, (line, _))) = acts.iter().next() {
                return Err(CliError::parse(
                    *line,
                    format!("group element {k} out of range"),
                ));
            }
            GroupoidSpec::Action { order, images }
        }
        other => return Err(CliError::parse(bline, format!("unknown builder `{other}`"))),
    };
    if !matches!(spec, GroupoidSpec::Action { .. }) && !acts.is_empty() {
        return Err(CliError::parse(bline, "`act` needs `builder = action`"));
    }
    let top = natural_topology(&spec, space).map_err(invalid(bline))?;
    Ok((spec, top.base().clone(), bline))
}

fn explicit_groupoid(
    space: &FinSpace,
    line: usize,
    arrows: Vec<(usize, String, Point, Point)>,
    ids: Vec<(usize, String, String)>,
    invs: Vec<(usize, String, String)>,
    comps: Vec<(usize, String, String, String)>,
) -> Result<FinGroupoid> {
    let mut index: HashMap<String, usize> = HashMap::new();
    for (k, (l, name, _, _)) in arrows.iter().enumerate() {
        if index.insert(name.clone(), k).is_some() {
            return Err(CliError::parse(
                *l,
                format!("arrow `{name}` declared twice"),
            ));
        }
    }
    let find = |l: usize, n: &str| {
        index
            .get(n)
            .copied()
            .ok_or_else(|| CliError::parse(l, format!("unknown arrow `{n}`")))
    };
    let n = arrows.len();
    let mut id: Vec<Option<Arrow>> = vec![None; space.len()];
    for (l, p, a) in &ids {
        let x = space.index_of(p).map_err(invalid(*l))?;
        if id[x].replace(find(*l, a)?).is_some() {
            return Err(CliError::parse(
                *l,
                format!("identity of `{p}` given twice"),
            ));
        }
    }
    let id: Vec<Arrow> = id
        .into_iter()
        .enumerate()
        .map(|(x, e)| {
            e.ok_or_else(|| CliError::parse(line, format!("no identity for `{}`", space.name(x))))
        })
        .collect::<Result<_>>()?;
    let src: Vec<Point> = arrows.iter().map(|a| a.2).collect();
    let dst: Vec<Point> = arrows.iter().map(|a| a.3).collect();
    let mut table: HashMap<(Arrow, Arrow), Arrow> = HashMap::new();
    for (l, a, b, c) in &comps {
        let key = (find(*l, a)?, find(*l, b)?);
        if table.insert(key, find(*l, c)?).is_some() {
            return Err(CliError::parse(
                *l,
                format!("composite of `{a}`, `{b}` given twice"),
            ));
        }
    }
    // composites with identities are implied
    let is_id: HashSet<Arrow> = id.iter().copied().collect();
    for g in 0..n {
        if src[g] < space.len() && dst[g] < space.len() {
            table.entry((id[src[g]], g)).or_insert(g);
            table.entry((g, id[dst[g]])).or_insert(g);
        }
    }
    let mut inv: Vec<Option<Arrow>> = vec![None; n];
    for (l, a, b) in &invs {
        let g = find(*l, a)?;
        if inv[g].replace(find(*l, b)?).is_some() {
            return Err(CliError::parse(*l, format!("inverse of `{a}` given twice")));
        }
    }
    // missing inverses are read off the composition table
    for g in 0..n {
        if inv[g].is_none() {
            inv[g] = (0..n)
                .find(|&h| table.get(&(g, h)) == Some(&id[src[g]]) && is_id.contains(&id[src[g]]));
        }
    }
    let inv: Vec<Arrow> = inv
        .into_iter()
        .enumerate()
        .map(|(g, h)| {
            h.ok_or_else(|| CliError::parse(line, format!("no inverse for `{}`", arrows[g].1)))
        })
        .collect::<Result<_>>()?;
    let mut comp: Vec<(Arrow, Arrow, Arrow)> =
        table.into_iter().map(|((g, h), k)| (g, h, k)).collect();
    comp.sort_unstable();
    let raw = RawGroupoid {
        arrows: arrows
            .into_iter()
            .map(|(_, name, s, d)| (name, s, d))
            .collect(),
        id,
        inv,
        comp,
    };
    FinGroupoid::new(space.clone(), raw).map_err(invalid(line))
}

/// The topology each builder comes with.
pub fn natural_topology(spec: &GroupoidSpec, space: &FinSpace) -> lsg_core::Result<TopGroupoid> {
    Ok(match spec {
        GroupoidSpec::Discrete => TopGroupoid::with_anchor_topology(discrete_groupoid(space)),
        GroupoidSpec::Pair => top_pair(space),
        GroupoidSpec::Bundle { order } => top_bundle(space, &FinGroup::cyclic(*order)),
        GroupoidSpec::Product { order } => top_product(&FinGroup::cyclic(*order), space),
        GroupoidSpec::Action { order, images } => {
            let mut action = vec![(0..space.len()).collect::<Vec<_>>()];
            action.extend(images.iter().cloned());
            top_action(space, &FinGroup::cyclic(*order), &action)?
        }
        GroupoidSpec::Explicit => unreachable!("explicit groupoids have no builder topology"),
    })
}

fn build_topology(
    sec: Option<&Section>,
    spec: &GroupoidSpec,
    q: FinGroupoid,
    gline: usize,
) -> Result<(TopologySpec, TopGroupoid)> {
    let mut kind: Option<(usize, TopologySpec)> = None;
    let mut ups: Vec<(usize, String, Vec<String>)> = Vec::new();
    let line = sec.map_or(gline, |s| s.line);
    for e in sec.map(|s| s.entries.as_slice()).unwrap_or(&[]) {
        match &e.body {
            Body::Assign { key, args, values } if key == "kind" && args.is_empty() => {
                let k = match single_value(e.line, values)? {
                    "natural" => TopologySpec::Natural,
                    "anchor" => TopologySpec::Anchor,
                    "discrete" => TopologySpec::Discrete,
                    "explicit" => TopologySpec::Explicit,
                    other => {
                        return Err(CliError::parse(
                            e.line,
                            format!("unknown topology kind `{other}`"),
                        ))
                    }
                };
                kind = Some((e.line, k));
            }
            Body::Assign { key, args, values } if key == "minup" => {
                arity(e.line, key, args, 1)?;
                ups.push((e.line, args[0].clone(), values.clone()));
            }
            _ => {
                return Err(CliError::parse(
                    e.line,
                    "expected `kind = ...` or `minup(arrow) = ...`",
                ))
            }
        }
    }
    let kind = match kind {
        Some((l, k)) if k != TopologySpec::Explicit && !ups.is_empty() => {
            return Err(CliError::parse(l, "`minup` entries need `kind = explicit`"));
        }
        Some((_, k)) => k,
        None if ups.is_empty() => TopologySpec::Natural,
        None => TopologySpec::Explicit,
    };
    let top = match kind {
        TopologySpec::Natural if *spec == GroupoidSpec::Explicit => {
            TopGroupoid::with_anchor_topology(q)
        }
        TopologySpec::Natural => natural_topology(spec, q.objects()).map_err(invalid(line))?,
        TopologySpec::Anchor => TopGroupoid::with_anchor_topology(q),
        TopologySpec::Discrete => TopGroupoid::with_discrete_topology(q).map_err(invalid(line))?,
        TopologySpec::Explicit => {
            let mut minups: Vec<Vec<Arrow>> = (0..q.len()).map(|g| vec![g]).collect();
            let mut given = HashSet::new();
            for (l, a, vals) in ups {
                let g = arrow(&q, l, &a)?;
                if !given.insert(g) {
                    return Err(CliError::parse(l, format!("`minup({a})` given twice")));
                }
                for v in vals {
                    let h = arrow(&q, l, &v)?;
                    if !minups[g].contains(&h) {
                        minups[g].push(h);
                    }
                }
                minups[g].sort_unstable();
            }
            TopGroupoid::from_minups(q, minups).map_err(invalid(line))?
        }
    };
    Ok((kind, top))
}

fn build_wide(sec: &Section, q: &FinGroupoid) -> Result<WideSubgroupoid> {
    let ctx = Ctx { space: q.objects() };
    let mut carrier = q.objects().whole();
    let mut arrows = q.empty_arrows();
    for e in &sec.entries {
        match &e.body {
            Body::Assign { key, args, values } if key == "carrier" && args.is_empty() => {
                carrier = ctx.open(e.line, values)?;
            }
            Body::Assign { key, args, values } if key == "arrows" && args.is_empty() => {
                for v in values {
                    arrows.insert(arrow(q, e.line, v)?);
                }
            }
            _ => {
                return Err(CliError::parse(
                    e.line,
                    "expected `carrier = ...` or `arrows = ...`",
                ))
            }
        }
    }
    arrows.union_with(&q.identities_over(carrier.bits()));
    q.wide(&carrier, arrows).map_err(invalid(sec.line))
}

fn build_cover(sec: &Section, space: &FinSpace) -> Result<Cover> {
    let ctx = Ctx { space };
    let mut carrier = space.whole();
    let mut members = Vec::new();
    for e in &sec.entries {
        match &e.body {
            Body::Assign { key, args, values } if key == "carrier" && args.is_empty() => {
                carrier = ctx.open(e.line, values)?;
            }
            Body::Assign { key, args, values } if key == "member" && args.is_empty() => {
                members.push(ctx.open(e.line, values)?);
            }
            _ => {
                return Err(CliError::parse(
                    e.line,
                    "expected `carrier = ...` or `member = ...`",
                ))
            }
        }
    }
    Cover::new(space, &carrier, members).map_err(invalid(sec.line))
}

fn build_atlas(
    sec: &Section,
    q: &FinGroupoid,
    wides: &[(String, WideSubgroupoid)],
) -> Result<(Vec<String>, Atlas)> {
    let ctx = Ctx { space: q.objects() };
    let mut carrier = q.objects().whole();
    let mut names = Vec::new();
    let mut charts = Vec::new();
    for e in &sec.entries {
        match &e.body {
            Body::Assign { key, args, values } if key == "carrier" && args.is_empty() => {
                carrier = ctx.open(e.line, values)?;
            }
            Body::Assign { key, args, values } if key == "chart" && args.is_empty() => {
                let name = single_value(e.line, values)?;
                let h = wides
                    .iter()
                    .find(|(n, _)| n == name)
                    .map(|(_, h)| h.clone())
                    .ok_or_else(|| {
                        CliError::parse(e.line, format!("no wide subgroupoid `{name}`"))
                    })?;
                names.push(name.to_string());
                charts.push(h);
            }
            _ => {
                return Err(CliError::parse(
                    e.line,
                    "expected `carrier = ...` or `chart = ...`",
                ))
            }
        }
    }
    let atlas = Atlas::new(q, &carrier, charts).map_err(invalid(sec.line))?;
    Ok((names, atlas))
}

fn build_connection(sec: &Section, q: &FinGroupoid) -> Result<PathConnection> {
    let ctx = Ctx { space: q.objects() };
    let mut entries = Vec::new();
    for e in &sec.entries {
        match &e.body {
            Body::Assign { key, args, values } if key == "gamma" => {
                arity(e.line, key, args, 2)?;
                entries.push((
                    ctx.point(e.line, &args[0])?,
                    ctx.point(e.line, &args[1])?,
                    arrow(q, e.line, single_value(e.line, values)?)?,
                ));
            }
            _ => return Err(CliError::parse(e.line, "expected `gamma(x, y) = arrow`")),
        }
    }
    PathConnection::new(q, &entries).map_err(invalid(sec.line))
}

fn build_geodesics(
    sec: &Section,
    space: &FinSpace,
    covers: &[(String, Cover)],
) -> Result<(String, GeodesicStructure)> {
    let ctx = Ctx { space };
    let mut cover: Option<(String, Cover)> = None;
    let mut walks = Vec::new();
    for e in &sec.entries {
        match &e.body {
            Body::Assign { key, args, values } if key == "cover" && args.is_empty() => {
                let name = single_value(e.line, values)?;
                let c = covers
                    .iter()
                    .find(|(n, _)| n == name)
                    .ok_or_else(|| CliError::parse(e.line, format!("no cover `{name}`")))?;
                cover = Some(c.clone());
            }
            Body::Assign { key, args, values } if key == "walk" => {
                arity(e.line, key, args, 1)?;
                let i: usize = args[0]
                    .parse()
                    .map_err(|_| CliError::parse(e.line, "`walk` takes a cover member number"))?;
                let w = Walk::new(space, ctx.points(e.line, values)?).map_err(invalid(e.line))?;
                walks.push((i, w));
            }
            _ => {
                return Err(CliError::parse(
                    e.line,
                    "expected `cover = ...` or `walk(i) = ...`",
                ))
            }
        }
    }
    let (name, cover) = cover.ok_or_else(|| CliError::parse(sec.line, "missing `cover`"))?;
    let g = GeodesicStructure::new(space, cover, walks).map_err(invalid(sec.line))?;
    Ok((name, g))
}

fn build_morphism(sec: &Section, q: &FinGroupoid) -> Result<(MorphismTarget, Transfer)> {
    let mut target = MorphismTarget::Pair;
    let mut maps: Vec<(usize, String, String)> = Vec::new();
    for e in &sec.entries {
        match &e.body {
            Body::Assign { key, args, values } if key == "target" && args.is_empty() => {
                target = match single_value(e.line, values)? {
                    "pair" => MorphismTarget::Pair,
                    "self" => MorphismTarget::Same,
                    other => {
                        return Err(CliError::parse(e.line, format!("unknown target `{other}`")))
                    }
                };
            }
            Body::Assign { key, args, values } if key == "map" => {
                arity(e.line, key, args, 1)?;
                maps.push((
                    e.line,
                    args[0].clone(),
                    single_value(e.line, values)?.to_string(),
                ));
            }
            _ => {
                return Err(CliError::parse(
                    e.line,
                    "expected `target = ...` or `map(arrow) = arrow`",
                ))
            }
        }
    }
    if maps.is_empty() && target == MorphismTarget::Pair {
        return Ok((target, anchor(q)));
    }
    let cod = match target {
        MorphismTarget::Pair => pair_groupoid(q.objects()),
        MorphismTarget::Same => q.clone(),
    };
    let mut arrow_map: Vec<Option<Arrow>> = vec![None; q.len()];
    for (l, a, b) in maps {
        let g = arrow(q, l, &a)?;
        if arrow_map[g].replace(arrow(&cod, l, &b)?).is_some() {
            return Err(CliError::parse(l, format!("`map({a})` given twice")));
        }
    }
    let arrow_map: Vec<Arrow> = arrow_map
        .into_iter()
        .enumerate()
        .map(|(g, h)| {
            h.ok_or_else(|| {
                CliError::parse(sec.line, format!("no image for `{}`", q.arrow_name(g)))
            })
        })
        .collect::<Result<_>>()?;
    let phi = GroupoidMorphism::new(q, &cod, (0..q.objects().len()).collect(), arrow_map)
        .map_err(invalid(sec.line))?;
    let t = Transfer::new(q.clone(), cod, phi).map_err(invalid(sec.line))?;
    Ok((target, t))
}

pub fn parse_gdf(text: &str) -> Result<GdfDocument> {
    let sections = lex(text)?;
    let mut singles: HashMap<&str, &Section> = HashMap::new();
    let mut named: BTreeMap<&str, Vec<&Section>> = BTreeMap::new();
    let mut seen_names: HashSet<(&str, &str)> = HashSet::new();
    for s in &sections {
        match (s.kind.as_str(), &s.name) {
            (k @ ("space" | "groupoid" | "topology"), None) => {
                if singles.insert(k, s).is_some() {
                    return Err(CliError::parse(s.line, format!("second `[{k}]` section")));
                }
            }
            (
                k @ ("wide" | "cover" | "atlas" | "connection" | "geodesics" | "morphism"),
                Some(n),
            ) => {
                if !seen_names.insert((k, n.as_str())) {
                    return Err(CliError::parse(
                        s.line,
                        format!("second `[{k} {n}]` section"),
                    ));
                }
                named.entry(k).or_default().push(s);
            }
            ("space" | "groupoid" | "topology", Some(_)) => {
                return Err(CliError::parse(
                    s.line,
                    format!("`[{}]` takes no name", s.kind),
                ));
            }
            ("wide" | "cover" | "atlas" | "connection" | "geodesics" | "morphism", None) => {
                return Err(CliError::parse(
                    s.line,
                    format!("`[{}]` needs a name", s.kind),
                ));
            }
            (k, _) => return Err(CliError::parse(s.line, format!("unknown section `{k}`"))),
        }
    }
    let space_sec = singles
        .get("space")
        .ok_or_else(|| CliError::parse(1, "missing `[space]` section"))?;
    let space = build_space(space_sec)?;
    let (gspec, q, gline) = build_groupoid(singles.get("groupoid").copied(), &space)?;
    let (tspec, top) = build_topology(singles.get("topology").copied(), &gspec, q, gline)?;
    let q = top.base().clone();
    let of = |k: &str| named.get(k).cloned().unwrap_or_default();
    let name = |s: &Section| s.name.clone().expect("named section");

    let mut doc = GdfDocument::bare(gspec, tspec, top);
    for s in of("wide") {
        doc.wides.push((name(s), build_wide(s, &q)?));
    }
    for s in of("cover") {
        doc.covers.push((name(s), build_cover(s, &space)?));
    }
    for s in of("atlas") {
        let (charts, atlas) = build_atlas(s, &q, &doc.wides)?;
        doc.atlases.push(AtlasDecl {
            name: name(s),
            charts,
            atlas,
        });
    }
    for s in of("connection") {
        doc.connections.push((name(s), build_connection(s, &q)?));
    }
    for s in of("geodesics") {
        let (cover, structure) = build_geodesics(s, &space, &doc.covers)?;
        doc.geodesics.push(GeodesicsDecl {
            name: name(s),
            cover,
            structure,
        });
    }
    for s in of("morphism") {
        let (target, transfer) = build_morphism(s, &q)?;
        doc.morphisms.push(MorphismDecl {
            name: name(s),
            target,
            transfer,
        });
    }
    Ok(doc)
}

// ---------------------------------------------------------------------------
// printing

fn names_of(space: &FinSpace, set: impl IntoIterator<Item = Point>) -> String {
    set.into_iter()
        .map(|x| space.name(x))
        .collect::<Vec<_>>()
        .join(" ")
}

fn carrier_line(f: &mut fmt::Formatter<'_>, space: &FinSpace, u: &OpenSet) -> fmt::Result {
    if u.bits() != space.whole().bits() {
        writeln!(f, "carrier = {}", names_of(space, u.points()))?;
    }
    Ok(())
}

impl fmt::Display for GdfDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let space = self.space();
        let q = self.q();
        writeln!(f, "[space]")?;
        writeln!(f, "points = {}", space.names().join(" "))?;
        for x in 0..space.len() {
            if space.minup(x).count_ones(..) > 1 {
                writeln!(
                    f,
                    "minup({}) = {}",
                    space.name(x),
                    names_of(space, space.minup(x).ones())
                )?;
            }
        }

        writeln!(f, "\n[groupoid]")?;
        match &self.groupoid_spec {
            GroupoidSpec::Discrete => writeln!(f, "builder = discrete")?,
            GroupoidSpec::Pair => writeln!(f, "builder = pair")?,
            GroupoidSpec::Bundle { order } => writeln!(f, "builder = bundle\ngroup = Z{order}")?,
            GroupoidSpec::Product { order } => writeln!(f, "builder = product\ngroup = Z{order}")?,
            GroupoidSpec::Action { order, images } => {
                writeln!(f, "builder = action\ngroup = Z{order}")?;
                for (k, img) in images.iter().enumerate() {
                    writeln!(
                        f,
                        "act({}) = {}",
                        k + 1,
                        names_of(space, img.iter().copied())
                    )?;
                }
            }
            GroupoidSpec::Explicit => {
                for g in 0..q.len() {
                    writeln!(
                        f,
                        "{}: {} -> {}",
                        q.arrow_name(g),
                        space.name(q.src(g)),
                        space.name(q.dst(g))
                    )?;
                }
                for x in 0..space.len() {
                    writeln!(f, "id({}) = {}", space.name(x), q.arrow_name(q.id(x)))?;
                }
                for g in 0..q.len() {
                    writeln!(f, "inv({}) = {}", q.arrow_name(g), q.arrow_name(q.inv(g)))?;
                }
                for (g, h) in q.composable_pairs() {
                    if q.is_identity(g) || q.is_identity(h) {
                        continue;
                    }
                    let k = q.compose(g, h).expect("composable");
                    writeln!(
                        f,
                        "comp({}, {}) = {}",
                        q.arrow_name(g),
                        q.arrow_name(h),
                        q.arrow_name(k)
                    )?;
                }
            }
        }

        if self.topology_spec != TopologySpec::Natural {
            writeln!(f, "\n[topology]")?;
            match self.topology_spec {
                TopologySpec::Natural => {}
                TopologySpec::Anchor => writeln!(f, "kind = anchor")?,
                TopologySpec::Discrete => writeln!(f, "kind = discrete")?,
                TopologySpec::Explicit => {
                    writeln!(f, "kind = explicit")?;
                    let a = self.groupoid.arrow_space();
                    for g in 0..q.len() {
                        if a.minup(g).count_ones(..) > 1 {
                            let ups: Vec<&str> =
                                a.minup(g).ones().map(|h| q.arrow_name(h)).collect();
                            writeln!(f, "minup({}) = {}", q.arrow_name(g), ups.join(" "))?;
                        }
                    }
                }
            }
        }

        for (name, h) in &self.wides {
            writeln!(f, "\n[wide {name}]")?;
            carrier_line(f, space, h.carrier())?;
            let arrows: Vec<&str> = h
                .arrows()
                .ones()
                .filter(|&g| !q.is_identity(g))
                .map(|g| q.arrow_name(g))
                .collect();
            if arrows.is_empty() {
                writeln!(f, "arrows =")?;
            } else {
                writeln!(f, "arrows = {}", arrows.join(" "))?;
            }
        }
        for (name, c) in &self.covers {
            writeln!(f, "\n[cover {name}]")?;
            carrier_line(f, space, c.carrier())?;
            for m in c.members() {
                writeln!(f, "member = {}", names_of(space, m.points()))?;
            }
        }
        for a in &self.atlases {
            writeln!(f, "\n[atlas {}]", a.name)?;
            carrier_line(f, space, a.atlas.carrier())?;
            for c in &a.charts {
                writeln!(f, "chart = {c}")?;
            }
        }
        for (name, gamma) in &self.connections {
            writeln!(f, "\n[connection {name}]")?;
            for (x, y, g) in gamma.entries(space) {
                writeln!(
                    f,
                    "gamma({}, {}) = {}",
                    space.name(x),
                    space.name(y),
                    q.arrow_name(g)
                )?;
            }
        }
        for g in &self.geodesics {
            writeln!(f, "\n[geodesics {}]", g.name)?;
            writeln!(f, "cover = {}", g.cover)?;
            for (i, w) in g.structure.walks() {
                if !w.is_empty() {
                    writeln!(
                        f,
                        "walk({i}) = {}",
                        names_of(space, w.vertices().iter().copied())
                    )?;
                }
            }
        }
        for m in &self.morphisms {
            writeln!(f, "\n[morphism {}]", m.name)?;
            let cod = m.transfer.cod();
            match m.target {
                MorphismTarget::Pair => writeln!(f, "target = pair")?,
                MorphismTarget::Same => writeln!(f, "target = self")?,
            }
            for g in 0..q.len() {
                writeln!(
                    f,
                    "map({}) = {}",
                    q.arrow_name(g),
                    cod.arrow_name(m.transfer.morphism().apply(g))
                )?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const C4_PAIR: &str = "\
[space]
points = x1 x2 y1 y2
minup(y1) = x1 x2
minup(y2) = x1 x2 y2

[groupoid]
builder = pair

[wide H]
arrows = x1/y1 y1/x1

[cover halves]
member = x1 x2 y1
member = x1 x2 y2
";

    #[test]
    fn empty_groupoid_section_gives_discrete_groupoid() {
        let doc = parse_gdf("[space]\npoints = a b\n").unwrap();
        assert_eq!(doc.groupoid_spec, GroupoidSpec::Discrete);
        assert_eq!(doc.q().len(), 2);
        let doc = parse_gdf("[space]\npoints = a b\n[groupoid]\n").unwrap();
        assert_eq!(doc.q().len(), 2);
    }

    #[test]
    fn builder_document_round_trips() {
        let doc = parse_gdf(C4_PAIR).unwrap();
        assert_eq!(doc.q().len(), 16);
        assert_eq!(doc.wides[0].1.len(), 6);
        let printed = doc.to_string();
        let again = parse_gdf(&printed).unwrap();
        assert_eq!(again, doc);
        assert_eq!(again.to_string(), printed);
    }

    #[test]
    fn explicit_groupoid_with_implied_tables() {
        let text = "\
[space]
points = a b

[groupoid]
ea: a -> a
eb: b -> b
f: a -> b
g: b -> a
id(a) = ea
id(b) = eb
comp(f, g) = ea
comp(g, f) = eb
";
        let doc = parse_gdf(text).unwrap();
        let q = doc.q();
        assert_eq!(
            q.inv(q.arrow_index("f").unwrap()),
            q.arrow_index("g").unwrap()
        );
        let again = parse_gdf(&doc.to_string()).unwrap();
        assert_eq!(again, doc);
    }

    #[test]
    fn malformed_composition_is_reported_on_its_line() {
        let text = "[space]\npoints = a\n[groupoid]\ne: a -> a\nid(a) = e\ncomp(e) = e\n";
        match parse_gdf(text) {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_names_are_line_anchored() {
        let text = "[space]\npoints = a b\n[groupoid]\nbuilder = pair\n[wide H]\narrows = a/c\n";
        match parse_gdf(text) {
            Err(CliError::Invalid { line, .. }) => assert_eq!(line, 6),
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn non_open_member_is_rejected() {
        let text = "[space]\npoints = o c\nminup(c) = o\n[cover bad]\nmember = c\n";
        assert!(matches!(
            parse_gdf(text),
            Err(CliError::Invalid { line: 5, .. })
        ));
    }

    #[test]
    fn entries_need_a_section() {
        assert!(matches!(
            parse_gdf("points = a\n"),
            Err(CliError::Parse { line: 1, .. })
        ));
    }
}
