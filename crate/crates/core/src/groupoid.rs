//! Finite groupoids with explicit composition tables, their wide subgroupoids,
//! and the standard builders.
//!
//! Composition is written in diagrammatic order: `compose(g, h)` is "g then
//! h", defined iff `dst(g) == src(h)`, and runs from `src(g)` to `dst(h)`.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::bits::{self, Bits};
use crate::error::{Error, Result};
use crate::finspace::{ContMap, FinSpace, OpenSet, Point};
use crate::par;

pub type Arrow = usize;

/// Default bound on non-identity arrows for [`FinGroupoid::enumerate_wide`].
pub const DEFAULT_MAX_ARROWS: usize = 24;

const NONE: u32 = u32::MAX;

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinGroup {
    names: Vec<String>,
    mul: Vec<Vec<usize>>,
    identity: usize,
    inv: Vec<usize>,
}

impl FinGroup {
    pub fn from_table(names: Vec<String>, mul: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0
            || mul.len() != n
            || mul
                .iter()
                .any(|r| r.len() != n || r.iter().any(|&v| v >= n))
        {
            return Err(Error::NotAMorphism("malformed group table".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| mul[e][g] == g && mul[g][e] == g))
            .ok_or_else(|| Error::UnitViolation("group".into()))?;
        let mut inv = vec![0; n];
        for g in 0..n {
            inv[g] = (0..n)
                .find(|&h| mul[g][h] == identity && mul[h][g] == identity)
                .ok_or_else(|| Error::InverseViolation(names[g].clone()))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::AssociativityViolation(
                            names[a].clone(),
                            names[b].clone(),
                            names[c].clone(),
                        ));
                    }
                }
            }
        }
        Ok(FinGroup {
            names,
            mul,
            identity,
            inv,
        })
    }

    /// ℤ/n with elements named `0..n`.
    pub fn cyclic(n: usize) -> Self {
        let names = (0..n).map(|k| k.to_string()).collect();
        let mul = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        FinGroup::from_table(names, mul).expect("cyclic group")
    }

    pub fn trivial() -> Self {
        FinGroup::cyclic(1)
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }
}

/// Unvalidated tables, the input to [`FinGroupoid::new`].
#[derive(Debug, Clone, Default)]
pub struct RawGroupoid {
    /// `(name, src, dst)` per arrow.
    pub arrows: Vec<(String, Point, Point)>,
    /// Identity arrow per object.
    pub id: Vec<Arrow>,
    pub inv: Vec<Arrow>,
    /// `(g, h, g·h)` for every composable pair.
    pub comp: Vec<(Arrow, Arrow, Arrow)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinGroupoid {
    objects: Arc<FinSpace>,
    names: Vec<String>,
    src: Vec<Point>,
    dst: Vec<Point>,
    id: Vec<Arrow>,
    inv: Vec<Arrow>,
    comp: Vec<u32>,
    by_src: Vec<Vec<Arrow>>,
}

/// Wide subgroupoid of `Q|carrier`, stored as its arrow set. Identities of the
/// carrier are always members. The parent groupoid is not referenced; callers
/// pass it alongside.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WideSubgroupoid {
    carrier: OpenSet,
    arrows: Bits,
}

impl WideSubgroupoid {
    pub fn carrier(&self) -> &OpenSet {
        &self.carrier
    }

    pub fn arrows(&self) -> &Bits {
        &self.arrows
    }

    pub fn contains(&self, g: Arrow) -> bool {
        self.arrows.contains(g)
    }

    pub fn len(&self) -> usize {
        self.arrows.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_clear()
    }

    pub(crate) fn from_parts(carrier: OpenSet, arrows: Bits) -> Self {
        WideSubgroupoid { carrier, arrows }
    }

    /// Arrow-set inclusion over the same carrier.
    pub fn le(&self, other: &WideSubgroupoid) -> Result<bool> {
        if self.carrier != other.carrier {
            return Err(Error::CarrierMismatch);
        }
        Ok(self.arrows.is_subset(&other.arrows))
    }

    /// Intersection; always closed and wide.
    pub fn meet(&self, other: &WideSubgroupoid) -> Result<WideSubgroupoid> {
        if self.carrier != other.carrier {
            return Err(Error::CarrierMismatch);
        }
        Ok(WideSubgroupoid {
            carrier: self.carrier.clone(),
            arrows: bits::intersection(&self.arrows, &other.arrows),
        })
    }
}

impl FinGroupoid {
    pub fn new(objects: FinSpace, raw: RawGroupoid) -> Result<Self> {
        let n_obj = objects.len();
        let n = raw.arrows.len();
        let mut names = Vec::with_capacity(n);
        let mut src = Vec::with_capacity(n);
        let mut dst = Vec::with_capacity(n);
        let mut seen = HashSet::new();
        for (name, s, d) in &raw.arrows {
            if !seen.insert(name.as_str()) {
                return Err(Error::Duplicate(name.clone()));
            }
            for p in [s, d] {
                if *p >= n_obj {
                    return Err(Error::UnknownObject(format!("#{p}")));
                }
            }
            names.push(name.clone());
            src.push(*s);
            dst.push(*d);
        }
        let arrow_ok = |a: Arrow| -> Result<()> {
            if a < n {
                Ok(())
            } else {
                Err(Error::UnknownArrow(format!("#{a}")))
            }
        };
        if raw.id.len() != n_obj {
            return Err(Error::UnitViolation("identity table is not total".into()));
        }
        for (x, &e) in raw.id.iter().enumerate() {
            arrow_ok(e)?;
            if src[e] != x || dst[e] != x {
                return Err(Error::EndpointMismatch(format!(
                    "identity `{}` is not a loop at `{}`",
                    names[e],
                    objects.name(x)
                )));
            }
        }
        if raw.inv.len() != n {
            return Err(Error::InverseViolation("inverse table is not total".into()));
        }
        for (g, &h) in raw.inv.iter().enumerate() {
            arrow_ok(h)?;
            if src[h] != dst[g] || dst[h] != src[g] {
                return Err(Error::InverseViolation(names[g].clone()));
            }
        }
        let mut comp = vec![NONE; n * n];
        for &(g, h, k) in &raw.comp {
            arrow_ok(g)?;
            arrow_ok(h)?;
            arrow_ok(k)?;
            if dst[g] != src[h] {
                return Err(Error::EndpointMismatch(format!(
                    "`{}` then `{}` is not composable",
                    names[g], names[h]
                )));
            }
            if src[k] != src[g] || dst[k] != dst[h] {
                return Err(Error::EndpointMismatch(format!(
                    "`{}` then `{}` gives `{}` with wrong endpoints",
                    names[g], names[h], names[k]
                )));
            }
            let slot = &mut comp[g * n + h];
            if *slot != NONE && *slot as usize != k {
                return Err(Error::Duplicate(format!(
                    "composite of `{}`, `{}`",
                    names[g], names[h]
                )));
            }
            *slot = k as u32;
        }
        let mut by_src = vec![Vec::new(); n_obj];
        for g in 0..n {
            by_src[src[g]].push(g);
        }
        for g in 0..n {
            for &h in &by_src[dst[g]] {
                if comp[g * n + h] == NONE {
                    return Err(Error::EndpointMismatch(format!(
                        "composite of `{}`, `{}` is missing",
                        names[g], names[h]
                    )));
                }
            }
        }
        let q = FinGroupoid {
            objects: Arc::new(objects),
            names,
            src,
            dst,
            id: raw.id,
            inv: raw.inv,
            comp,
            by_src,
        };
        q.check_axioms()?;
        Ok(q)
    }

    fn check_axioms(&self) -> Result<()> {
        for g in 0..self.len() {
            let (s, d) = (self.src[g], self.dst[g]);
            if self.c(self.id[s], g) != g || self.c(g, self.id[d]) != g {
                return Err(Error::UnitViolation(self.names[g].clone()));
            }
            let gi = self.inv[g];
            if self.c(g, gi) != self.id[s] || self.c(gi, g) != self.id[d] {
                return Err(Error::InverseViolation(self.names[g].clone()));
            }
        }
        for g in 0..self.len() {
            for &h in &self.by_src[self.dst[g]] {
                let gh = self.c(g, h);
                for &k in &self.by_src[self.dst[h]] {
                    if self.c(gh, k) != self.c(g, self.c(h, k)) {
                        return Err(Error::AssociativityViolation(
                            self.names[g].clone(),
                            self.names[h].clone(),
                            self.names[k].clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    fn c(&self, g: Arrow, h: Arrow) -> Arrow {
        self.comp[g * self.len() + h] as usize
    }

    /// Tables in the form accepted by [`FinGroupoid::new`].
    pub fn to_raw(&self) -> RawGroupoid {
        let arrows = (0..self.len())
            .map(|g| (self.names[g].clone(), self.src[g], self.dst[g]))
            .collect();
        let mut comp = Vec::new();
        for g in 0..self.len() {
            for &h in &self.by_src[self.dst[g]] {
                comp.push((g, h, self.c(g, h)));
            }
        }
        RawGroupoid {
            arrows,
            id: self.id.clone(),
            inv: self.inv.clone(),
            comp,
        }
    }

    pub fn objects(&self) -> &FinSpace {
        &self.objects
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn arrow_names(&self) -> &[String] {
        &self.names
    }

    pub fn arrow_name(&self, g: Arrow) -> &str {
        &self.names[g]
    }

    pub fn arrow_index(&self, name: &str) -> Result<Arrow> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    pub fn src(&self, g: Arrow) -> Point {
        self.src[g]
    }

    pub fn dst(&self, g: Arrow) -> Point {
        self.dst[g]
    }

    pub fn id(&self, x: Point) -> Arrow {
        self.id[x]
    }

    pub fn inv(&self, g: Arrow) -> Arrow {
        self.inv[g]
    }

    pub fn is_identity(&self, g: Arrow) -> bool {
        self.id[self.src[g]] == g
    }

    /// "g then h", if composable.
    pub fn compose(&self, g: Arrow, h: Arrow) -> Option<Arrow> {
        (self.dst[g] == self.src[h]).then(|| self.c(g, h))
    }

    /// Arrows with source `x`.
    pub fn out_of(&self, x: Point) -> &[Arrow] {
        &self.by_src[x]
    }

    pub fn hom(&self, x: Point, y: Point) -> impl Iterator<Item = Arrow> + '_ {
        self.by_src[x]
            .iter()
            .copied()
            .filter(move |&g| self.dst[g] == y)
    }

    pub fn empty_arrows(&self) -> Bits {
        bits::empty(self.len())
    }

    pub fn arrow_set<I: IntoIterator<Item = Arrow>>(&self, items: I) -> Bits {
        bits::from_iter(self.len(), items)
    }

    /// Arrows of `Q|U`: both endpoints in `U`.
    pub fn arrows_over(&self, u: &Bits) -> Bits {
        bits::from_iter(
            self.len(),
            (0..self.len()).filter(|&g| u.contains(self.src[g]) && u.contains(self.dst[g])),
        )
    }

    pub fn identities_over(&self, u: &Bits) -> Bits {
        bits::from_iter(self.len(), u.ones().map(|x| self.id[x]))
    }

    /// Non-identity arrows of `Q|U`.
    pub fn non_identity_over(&self, u: &Bits) -> Vec<Arrow> {
        self.arrows_over(u)
            .ones()
            .filter(|&g| !self.is_identity(g))
            .collect()
    }

    /// Full subgroupoid on `U`, re-indexed over the subspace `U`. Returns the
    /// groupoid and the map from its arrows back to arrows of `self`.
    pub fn full_restrict(&self, u: &OpenSet) -> (FinGroupoid, Vec<Arrow>) {
        let (sub, keep_pts) = self.objects.subspace(u.bits());
        let mut pt_back = vec![usize::MAX; self.objects.len()];
        for (i, &p) in keep_pts.iter().enumerate() {
            pt_back[p] = i;
        }
        let keep: Vec<Arrow> = self.arrows_over(u.bits()).ones().collect();
        let mut back = vec![usize::MAX; self.len()];
        for (i, &g) in keep.iter().enumerate() {
            back[g] = i;
        }
        let arrows = keep
            .iter()
            .map(|&g| {
                (
                    self.names[g].clone(),
                    pt_back[self.src[g]],
                    pt_back[self.dst[g]],
                )
            })
            .collect();
        let id = keep_pts.iter().map(|&x| back[self.id[x]]).collect();
        let inv = keep.iter().map(|&g| back[self.inv[g]]).collect();
        let mut comp = Vec::new();
        for &g in &keep {
            for &h in &self.by_src[self.dst[g]] {
                if back[h] != usize::MAX {
                    comp.push((back[g], back[h], back[self.c(g, h)]));
                }
            }
        }
        let raw = RawGroupoid {
            arrows,
            id,
            inv,
            comp,
        };
        let q = FinGroupoid::new(sub, raw).expect("full subgroupoid of a valid groupoid");
        (q, keep)
    }

    /// Validates an arrow set as a wide subgroupoid of `Q|U`.
    pub fn wide(&self, carrier: &OpenSet, arrows: Bits) -> Result<WideSubgroupoid> {
        let mut arrows = arrows;
        arrows.grow(self.len());
        if arrows.len() > self.len() {
            return Err(Error::UnknownArrow("arrow index out of range".into()));
        }
        for g in arrows.ones() {
            if !carrier.contains(self.src[g]) || !carrier.contains(self.dst[g]) {
                return Err(Error::NotWide(format!(
                    "`{}` leaves the carrier",
                    self.names[g]
                )));
            }
            if !arrows.contains(self.inv[g]) {
                return Err(Error::NotWide(format!(
                    "inverse of `{}` missing",
                    self.names[g]
                )));
            }
        }
        for x in carrier.points() {
            if !arrows.contains(self.id[x]) {
                return Err(Error::NotWide(format!(
                    "identity at `{}` missing",
                    self.objects.name(x)
                )));
            }
        }
        for g in arrows.ones() {
            for &h in &self.by_src[self.dst[g]] {
                if arrows.contains(h) && !arrows.contains(self.c(g, h)) {
                    return Err(Error::NotWide(format!(
                        "composite of `{}`, `{}` missing",
                        self.names[g], self.names[h]
                    )));
                }
            }
        }
        Ok(WideSubgroupoid {
            carrier: carrier.clone(),
            arrows,
        })
    }

    /// The discrete (identities only) wide subgroupoid of `Q|U`.
    pub fn discrete_on(&self, u: &OpenSet) -> WideSubgroupoid {
        WideSubgroupoid {
            carrier: u.clone(),
            arrows: self.identities_over(u.bits()),
        }
    }

    /// `Q|U` as a wide subgroupoid of itself.
    pub fn full_on(&self, u: &OpenSet) -> WideSubgroupoid {
        WideSubgroupoid {
            carrier: u.clone(),
            arrows: self.arrows_over(u.bits()),
        }
    }

    pub fn discrete(&self) -> WideSubgroupoid {
        self.discrete_on(&self.objects.whole())
    }

    pub fn full(&self) -> WideSubgroupoid {
        self.full_on(&self.objects.whole())
    }

    /// Least wide subgroupoid of `Q|U` containing `seed`.
    pub fn generate(&self, u: &OpenSet, seed: &Bits) -> Result<WideSubgroupoid> {
        for g in seed.ones() {
            if g >= self.len() {
                return Err(Error::UnknownArrow(format!("#{g}")));
            }
            if !u.contains(self.src[g]) || !u.contains(self.dst[g]) {
                return Err(Error::NotWide(format!(
                    "seed arrow `{}` leaves the carrier",
                    self.names[g]
                )));
            }
        }
        let base = self.identities_over(u.bits());
        Ok(WideSubgroupoid {
            carrier: u.clone(),
            arrows: self.close_over(base, seed.ones()),
        })
    }

    /// Closes `closed ∪ extra` under composition and inverse. `closed` must
    /// already be closed; the result is the generated subgroupoid.
    fn close_over(&self, closed: Bits, extra: impl Iterator<Item = Arrow>) -> Bits {
        let mut set = closed;
        set.grow(self.len());
        let mut work: Vec<Arrow> = Vec::new();
        for g in extra {
            if !set.contains(g) {
                set.insert(g);
                work.push(g);
            }
        }
        while let Some(g) = work.pop() {
            let gi = self.inv[g];
            if !set.contains(gi) {
                set.insert(gi);
                work.push(gi);
            }
            let members: Vec<Arrow> = set.ones().collect();
            for h in members {
                if self.dst[g] == self.src[h] {
                    let k = self.c(g, h);
                    if !set.contains(k) {
                        set.insert(k);
                        work.push(k);
                    }
                }
                if self.dst[h] == self.src[g] {
                    let k = self.c(h, g);
                    if !set.contains(k) {
                        set.insert(k);
                        work.push(k);
                    }
                }
            }
        }
        set
    }

    /// `H|V` for open `V ⊆ carrier(H)`.
    pub fn restrict_wide(&self, h: &WideSubgroupoid, v: &OpenSet) -> Result<WideSubgroupoid> {
        if !v.is_subset(&h.carrier) {
            return Err(Error::CarrierMismatch);
        }
        Ok(self.restrict_unchecked(h, v))
    }

    pub(crate) fn restrict_unchecked(&self, h: &WideSubgroupoid, v: &OpenSet) -> WideSubgroupoid {
        let arrows = bits::intersection(&h.arrows, &self.arrows_over(v.bits()));
        WideSubgroupoid {
            carrier: v.clone(),
            arrows,
        }
    }

    /// All wide subgroupoids of `Q|U`, without duplicates, in canonical order
    /// (by size, then by sorted arrow list). Explores the lattice upward from
    /// the discrete subgroupoid by adjoining one arrow at a time.
    pub fn enumerate_wide(&self, u: &OpenSet, max_arrows: usize) -> Result<Vec<WideSubgroupoid>> {
        let candidates = self.non_identity_over(u.bits());
        if candidates.len() > max_arrows {
            return Err(Error::too_large(
                "non-identity arrow set",
                candidates.len(),
                max_arrows,
            ));
        }
        let bottom = self.identities_over(u.bits());
        let mut seen: HashSet<Bits> = HashSet::new();
        seen.insert(bottom.clone());
        let mut frontier = vec![bottom];
        let mut all = frontier.clone();
        while !frontier.is_empty() {
            let grown: Vec<Vec<Bits>> = par::map(&frontier, |s| {
                let mut out = Vec::new();
                let mut local: HashSet<Bits> = HashSet::new();
                for &a in &candidates {
                    if s.contains(a) {
                        continue;
                    }
                    // adjoining g and its inverse give the same closure
                    let ai = self.inv[a];
                    if ai < a && !s.contains(ai) {
                        continue;
                    }
                    let t = self.close_over(s.clone(), std::iter::once(a));
                    if local.insert(t.clone()) {
                        out.push(t);
                    }
                }
                out
            });
            let mut next = Vec::new();
            for batch in grown {
                for t in batch {
                    if seen.insert(t.clone()) {
                        next.push(t.clone());
                        all.push(t);
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<WideSubgroupoid> = all
            .into_iter()
            .map(|arrows| WideSubgroupoid {
                carrier: u.clone(),
                arrows,
            })
            .collect();
        sort_canonical(&mut out);
        Ok(out)
    }

    /// `Inn(Q)`: the union of all vertex groups.
    pub fn inn(&self) -> WideSubgroupoid {
        WideSubgroupoid {
            carrier: self.objects.whole(),
            arrows: bits::from_iter(
                self.len(),
                (0..self.len()).filter(|&g| self.src[g] == self.dst[g]),
            ),
        }
    }

    /// Vertex group at `x` as an arrow set.
    pub fn vertex_group(&self, x: Point) -> Bits {
        bits::from_iter(self.len(), self.hom(x, x))
    }

    pub fn fmt_arrows(&self, set: &Bits) -> String {
        bits::fmt_named(set, &self.names)
    }

    /// Every composable pair, in arrow order.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (Arrow, Arrow)> + '_ {
        (0..self.len()).flat_map(move |g| self.by_src[self.dst[g]].iter().map(move |&h| (g, h)))
    }
}

pub fn sort_canonical(items: &mut [WideSubgroupoid]) {
    items.sort_by_cached_key(|h| (h.len(), h.arrows.ones().collect::<Vec<_>>()));
}

/// Identity-on-anything morphism of groupoids as a pair of maps. The domain and
/// codomain are supplied to [`GroupoidMorphism::new`] for validation and are
/// not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidMorphism {
    object_map: Vec<Point>,
    arrow_map: Vec<Arrow>,
}

impl GroupoidMorphism {
    pub fn new(
        dom: &FinGroupoid,
        cod: &FinGroupoid,
        object_map: Vec<Point>,
        arrow_map: Vec<Arrow>,
    ) -> Result<Self> {
        if object_map.len() != dom.objects.len() || arrow_map.len() != dom.len() {
            return Err(Error::NotAMorphism("maps are not total".into()));
        }
        if object_map.iter().any(|&x| x >= cod.objects.len())
            || arrow_map.iter().any(|&g| g >= cod.len())
        {
            return Err(Error::NotAMorphism("map leaves the codomain".into()));
        }
        for g in 0..dom.len() {
            let fg = arrow_map[g];
            if cod.src[fg] != object_map[dom.src[g]] || cod.dst[fg] != object_map[dom.dst[g]] {
                return Err(Error::NotAMorphism(format!(
                    "endpoints of `{}`",
                    dom.names[g]
                )));
            }
            if arrow_map[dom.inv[g]] != cod.inv[fg] {
                return Err(Error::NotAMorphism(format!(
                    "inverse of `{}`",
                    dom.names[g]
                )));
            }
        }
        for x in 0..dom.objects.len() {
            if arrow_map[dom.id[x]] != cod.id[object_map[x]] {
                return Err(Error::NotAMorphism(format!(
                    "identity at `{}`",
                    dom.objects.name(x)
                )));
            }
        }
        for (g, h) in dom.composable_pairs() {
            let lhs = arrow_map[dom.c(g, h)];
            let rhs = cod.c(arrow_map[g], arrow_map[h]);
            if lhs != rhs {
                return Err(Error::NotAMorphism(format!(
                    "composite of `{}`, `{}`",
                    dom.names[g], dom.names[h]
                )));
            }
        }
        Ok(GroupoidMorphism {
            object_map,
            arrow_map,
        })
    }

    pub fn identity(q: &FinGroupoid) -> Self {
        GroupoidMorphism {
            object_map: (0..q.objects.len()).collect(),
            arrow_map: (0..q.len()).collect(),
        }
    }

    pub fn object_map(&self) -> &[Point] {
        &self.object_map
    }

    pub fn arrow_map(&self) -> &[Arrow] {
        &self.arrow_map
    }

    pub fn apply(&self, g: Arrow) -> Arrow {
        self.arrow_map[g]
    }

    pub fn is_identity_on_objects(&self) -> bool {
        self.object_map.iter().enumerate().all(|(i, &x)| i == x)
    }
}

// ---------------------------------------------------------------------------
// builders

/// Groupoid whose arrows are exactly the identities.
pub fn discrete_groupoid(x: &FinSpace) -> FinGroupoid {
    let n = x.len();
    let raw = RawGroupoid {
        arrows: (0..n)
            .map(|p| (format!("{0}/{0}", x.name(p)), p, p))
            .collect(),
        id: (0..n).collect(),
        inv: (0..n).collect(),
        comp: (0..n).map(|p| (p, p, p)).collect(),
    };
    FinGroupoid::new(x.clone(), raw).expect("discrete groupoid")
}

/// `X × X` with `(x, y)(y, z) = (x, z)`. Arrow `(x, y)` has index
/// `x * |X| + y` and name `x/y`.
pub fn pair_groupoid(x: &FinSpace) -> FinGroupoid {
    let n = x.len();
    let idx = |a: usize, b: usize| a * n + b;
    let mut raw = RawGroupoid::default();
    for a in 0..n {
        for b in 0..n {
            raw.arrows
                .push((format!("{}/{}", x.name(a), x.name(b)), a, b));
            raw.inv.push(idx(b, a));
            for c in 0..n {
                raw.comp.push((idx(a, b), idx(b, c), idx(a, c)));
            }
        }
    }
    raw.id = (0..n).map(|a| idx(a, a)).collect();
    FinGroupoid::new(x.clone(), raw).expect("pair groupoid")
}

/// Bundle of groups: one group per point, no arrows between distinct points.
/// Arrow `(x, k)` is named `x^k`.
pub fn bundle_of_groups(x: &FinSpace, fibres: &[FinGroup]) -> Result<FinGroupoid> {
    if fibres.len() != x.len() {
        return Err(Error::NotAMorphism("one fibre per point required".into()));
    }
    let mut offset = Vec::with_capacity(x.len());
    let mut raw = RawGroupoid::default();
    for (p, g) in fibres.iter().enumerate() {
        let base = raw.arrows.len();
        offset.push(base);
        for k in 0..g.order() {
            raw.arrows
                .push((format!("{}^{}", x.name(p), g.name(k)), p, p));
        }
        for k in 0..g.order() {
            raw.inv.push(base + g.inv(k));
            for l in 0..g.order() {
                raw.comp.push((base + k, base + l, base + g.mul(k, l)));
            }
        }
        raw.id.push(base + g.identity());
    }
    FinGroupoid::new(x.clone(), raw)
}

/// Action groupoid `X ⋊ Ω` for a right action given as one point permutation
/// per group element. Arrow `(x, ω): x → x·ω` is named `x@ω`; its index is
/// `x * |Ω| + ω`.
pub fn action_groupoid(
    x: &FinSpace,
    group: &FinGroup,
    action: &[Vec<Point>],
) -> Result<FinGroupoid> {
    let n = x.len();
    let m = group.order();
    check_action(x, group, action)?;
    let idx = |p: usize, w: usize| p * m + w;
    let mut raw = RawGroupoid::default();
    for p in 0..n {
        for w in 0..m {
            let target = action[w][p];
            raw.arrows
                .push((format!("{}@{}", x.name(p), group.name(w)), p, target));
            raw.inv.push(idx(target, group.inv(w)));
            for w2 in 0..m {
                raw.comp
                    .push((idx(p, w), idx(target, w2), idx(p, group.mul(w, w2))));
            }
        }
    }
    raw.id = (0..n).map(|p| idx(p, group.identity())).collect();
    FinGroupoid::new(x.clone(), raw)
}

/// Checks that `action` is a right action by homeomorphisms.
pub(crate) fn check_action(x: &FinSpace, group: &FinGroup, action: &[Vec<Point>]) -> Result<()> {
    let n = x.len();
    if action.len() != group.order() || action.iter().any(|perm| perm.len() != n) {
        return Err(Error::NotEquivariant("action table has wrong shape".into()));
    }
    for (w, perm) in action.iter().enumerate() {
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::NotEquivariant(format!(
                    "element `{}` does not act by a bijection",
                    group.name(w)
                )));
            }
        }
        ContMap::new(x.clone(), x.clone(), perm.clone()).map_err(|_| {
            Error::NotEquivariant(format!("element `{}` is not continuous", group.name(w)))
        })?;
    }
    for a in 0..group.order() {
        for b in 0..group.order() {
            let ab = group.mul(a, b);
            if (0..n).any(|p| action[ab][p] != action[b][action[a][p]]) {
                return Err(Error::NotEquivariant(format!(
                    "`{}`·`{}` is not compatible with the action",
                    group.name(a),
                    group.name(b)
                )));
            }
        }
    }
    Ok(())
}

/// Product groupoid `G × (U × U)` with `(g,(y,z))(h,(z,w)) = (gh,(y,w))`.
/// Arrow `(g, y, z)` has index `(y * |U| + z) * |G| + g` and name `y/z^g`.
pub fn product_with_pair(group: &FinGroup, u: &FinSpace) -> FinGroupoid {
    let n = u.len();
    let m = group.order();
    let idx = |g: usize, y: usize, z: usize| (y * n + z) * m + g;
    let mut raw = RawGroupoid {
        arrows: vec![(String::new(), 0, 0); n * n * m],
        id: Vec::new(),
        inv: vec![0; n * n * m],
        comp: Vec::new(),
    };
    for y in 0..n {
        for z in 0..n {
            for g in 0..m {
                let a = idx(g, y, z);
                raw.arrows[a] = (
                    format!("{}/{}^{}", u.name(y), u.name(z), group.name(g)),
                    y,
                    z,
                );
                raw.inv[a] = idx(group.inv(g), z, y);
                for w in 0..n {
                    for h in 0..m {
                        raw.comp.push((a, idx(h, z, w), idx(group.mul(g, h), y, w)));
                    }
                }
            }
        }
    }
    raw.id = (0..n).map(|y| idx(group.identity(), y, y)).collect();
    FinGroupoid::new(u.clone(), raw).expect("product groupoid")
}

/// Graph of a fibre map as sorted `(e, f(e))` pairs.
pub type ArrowGraph = Vec<(Point, Point)>;

/// Principal-bundle data: a covering-style map `p: E → B` and a group acting
/// on `E` (right action, one permutation per element) freely and transitively
/// on each fibre, with `p(e·ω) = p(e)`.
#[derive(Debug, Clone)]
pub struct PrincipalBundle {
    pub projection: ContMap,
    pub group: FinGroup,
    pub action: Vec<Vec<Point>>,
}

impl PrincipalBundle {
    pub fn validate(&self) -> Result<()> {
        let e = self.projection.dom();
        check_action(e, &self.group, &self.action)?;
        if !self.projection.is_surjective() {
            return Err(Error::NotEquivariant("projection is not surjective".into()));
        }
        for (w, perm) in self.action.iter().enumerate() {
            for p in 0..e.len() {
                if self.projection.apply(perm[p]) != self.projection.apply(p) {
                    return Err(Error::NotEquivariant(format!(
                        "`{}` moves `{}` off its fibre",
                        self.group.name(w),
                        e.name(p)
                    )));
                }
                if w != self.group.identity() && perm[p] == p {
                    return Err(Error::NonFreeAction(format!(
                        "`{}` fixes `{}`",
                        self.group.name(w),
                        e.name(p)
                    )));
                }
            }
        }
        for b in 0..self.projection.cod().len() {
            let fibre = self.projection.fibre(b);
            if fibre.len() != self.group.order() {
                return Err(Error::NonFreeAction(format!(
                    "fibre over `{}` is not a single free orbit",
                    self.projection.cod().name(b)
                )));
            }
        }
        Ok(())
    }
}

/// Symmetry groupoid of a principal bundle: arrows `b → b'` are the
/// equivariant bijections `p⁻¹(b) → p⁻¹(b')`. Such a map is fixed by the image
/// `f` of the least point `e` of `p⁻¹(b)`; the arrow is named `e>f`.
///
/// Returns the groupoid and, per arrow, the pairs `(e, f(e))` forming its graph.
pub fn sym_groupoid(bundle: &PrincipalBundle) -> Result<(FinGroupoid, Vec<ArrowGraph>)> {
    bundle.validate()?;
    let p = &bundle.projection;
    let e_space = p.dom();
    let base = p.cod();
    let fibres: Vec<Vec<Point>> = (0..base.len()).map(|b| p.fibre(b)).collect();
    let mut graphs: Vec<Vec<(Point, Point)>> = Vec::new();
    let mut arrows = Vec::new();
    let mut index: HashMap<Vec<(Point, Point)>, Arrow> = HashMap::new();
    for b in 0..base.len() {
        for b2 in 0..base.len() {
            let e0 = fibres[b][0];
            for &f0 in &fibres[b2] {
                // e0·ω ↦ f0·ω
                let mut graph: Vec<(Point, Point)> = (0..bundle.group.order())
                    .map(|w| (bundle.action[w][e0], bundle.action[w][f0]))
                    .collect();
                graph.sort_unstable();
                index.insert(graph.clone(), arrows.len());
                arrows.push((format!("{}>{}", e_space.name(e0), e_space.name(f0)), b, b2));
                graphs.push(graph);
            }
        }
    }
    let apply = |graph: &[(Point, Point)], e: Point| -> Point {
        graph
            .iter()
            .find(|(a, _)| *a == e)
            .map(|(_, b)| *b)
            .expect("point in domain fibre")
    };
    let n = arrows.len();
    let mut raw = RawGroupoid {
        arrows,
        ..Default::default()
    };
    for g in 0..n {
        let inverse: Vec<(Point, Point)> = {
            let mut v: Vec<_> = graphs[g].iter().map(|&(a, b)| (b, a)).collect();
            v.sort_unstable();
            v
        };
        raw.inv.push(index[&inverse]);
    }
    for b in 0..base.len() {
        let graph: Vec<(Point, Point)> = fibres[b].iter().map(|&e| (e, e)).collect();
        raw.id.push(index[&graph]);
    }
    for g in 0..n {
        for h in 0..n {
            if raw.arrows[g].2 != raw.arrows[h].1 {
                continue;
            }
            let mut graph: Vec<(Point, Point)> = graphs[g]
                .iter()
                .map(|&(a, b)| (a, apply(&graphs[h], b)))
                .collect();
            graph.sort_unstable();
            raw.comp.push((g, h, index[&graph]));
        }
    }
    let q = FinGroupoid::new(base.clone(), raw)?;
    Ok((q, graphs))
}
