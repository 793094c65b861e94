//! Finite Alexandrov spaces.
//!
//! A space is stored as the minimal open neighbourhood `minup(x)` of every
//! point. Open sets are exactly the unions of minimal neighbourhoods, so a set
//! is open iff it contains `minup(x)` for each of its members. Nothing else is
//! stored; every open set is derived.
//!
//! Path components of a finite space are the components of its comparability
//! graph (`x ~ y` when `y ∈ minup(x)` or `x ∈ minup(y)`). All connectivity in
//! this crate goes through [`FinSpace::components_of`].

use std::collections::HashMap;

use crate::bits::{self, Bits};
use crate::error::{Error, Result};

pub type Point = usize;

/// Default bound on the number of points for which open sets are enumerated.
pub const DEFAULT_MAX_POINTS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSpace {
    names: Vec<String>,
    minup: Vec<Bits>,
}

/// A set of points closed under taking minimal neighbourhoods.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpenSet(Bits);

impl OpenSet {
    pub fn bits(&self) -> &Bits {
        &self.0
    }

    pub fn contains(&self, x: Point) -> bool {
        self.0.contains(x)
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.0.ones()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_subset(&self, other: &OpenSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Finite intersections of open sets are open.
    pub fn intersection(&self, other: &OpenSet) -> OpenSet {
        OpenSet(bits::intersection(&self.0, &other.0))
    }

    pub fn union(&self, other: &OpenSet) -> OpenSet {
        OpenSet(bits::union(&self.0, &other.0))
    }
}

impl FinSpace {
    /// Validates the two Alexandrov axioms: `x ∈ minup(x)` and
    /// `y ∈ minup(x) ⇒ minup(y) ⊆ minup(x)`.
    pub fn new(names: Vec<String>, minup: Vec<Vec<Point>>) -> Result<Self> {
        let n = names.len();
        let mut seen = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if seen.insert(name.as_str(), i).is_some() {
                return Err(Error::Duplicate(name.clone()));
            }
        }
        if minup.len() != n {
            return Err(Error::InvalidPartition(format!(
                "{} points but {} neighbourhoods",
                n,
                minup.len()
            )));
        }
        let mut sets = Vec::with_capacity(n);
        for row in &minup {
            if let Some(&bad) = row.iter().find(|&&p| p >= n) {
                return Err(Error::UnknownPoint(format!("#{bad}")));
            }
            sets.push(bits::from_iter(n, row.iter().copied()));
        }
        for x in 0..n {
            if !sets[x].contains(x) {
                return Err(Error::AxiomViolation {
                    point: names[x].clone(),
                    other: names[x].clone(),
                    reason: "point is not in its own minimal neighbourhood",
                });
            }
        }
        for x in 0..n {
            for y in sets[x].ones() {
                if !sets[y].is_subset(&sets[x]) {
                    return Err(Error::AxiomViolation {
                        point: names[x].clone(),
                        other: names[y].clone(),
                        reason: "minup(y) is not contained in minup(x)",
                    });
                }
            }
        }
        Ok(FinSpace { names, minup: sets })
    }

    /// Builds a space from `(point, minup)` name lists.
    pub fn from_named(spec: &[(&str, &[&str])]) -> Result<Self> {
        let names: Vec<String> = spec.iter().map(|(p, _)| p.to_string()).collect();
        let index: HashMap<&str, usize> =
            spec.iter().enumerate().map(|(i, (p, _))| (*p, i)).collect();
        let mut minup = Vec::with_capacity(spec.len());
        for (_, up) in spec {
            let mut row = Vec::with_capacity(up.len());
            for name in up.iter() {
                let i = index
                    .get(name)
                    .ok_or_else(|| Error::UnknownPoint(name.to_string()))?;
                row.push(*i);
            }
            minup.push(row);
        }
        FinSpace::new(names, minup)
    }

    pub fn discrete(names: &[&str]) -> Self {
        let minup = (0..names.len()).map(|i| vec![i]).collect();
        FinSpace::new(names.iter().map(|s| s.to_string()).collect(), minup)
            .expect("discrete space is valid")
    }

    pub fn indiscrete(names: &[&str]) -> Self {
        let all: Vec<Point> = (0..names.len()).collect();
        let minup = vec![all; names.len()];
        FinSpace::new(names.iter().map(|s| s.to_string()).collect(), minup)
            .expect("indiscrete space is valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: Point) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Result<Point> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    pub fn minup(&self, x: Point) -> &Bits {
        &self.minup[x]
    }

    pub(crate) fn minups(&self) -> &[Bits] {
        &self.minup
    }

    pub fn minup_open(&self, x: Point) -> OpenSet {
        OpenSet(self.minup[x].clone())
    }

    /// `x` and `y` are comparable in the specialization order.
    pub fn comparable(&self, x: Point, y: Point) -> bool {
        self.minup[x].contains(y) || self.minup[y].contains(x)
    }

    pub fn whole(&self) -> OpenSet {
        OpenSet(bits::full(self.len()))
    }

    pub fn empty_open(&self) -> OpenSet {
        OpenSet(bits::empty(self.len()))
    }

    pub fn point_set<I: IntoIterator<Item = Point>>(&self, items: I) -> Bits {
        bits::from_iter(self.len(), items)
    }

    fn check_members(&self, set: &Bits) -> Result<()> {
        if set.len() > self.len() {
            if let Some(bad) = set.ones().find(|&i| i >= self.len()) {
                return Err(Error::UnknownPoint(format!("#{bad}")));
            }
        }
        Ok(())
    }

    /// True iff `set` is a union of minimal neighbourhoods.
    pub fn is_open(&self, set: &Bits) -> Result<bool> {
        self.check_members(set)?;
        Ok(set.ones().all(|x| self.minup[x].is_subset(set)))
    }

    pub fn open(&self, set: Bits) -> Result<OpenSet> {
        if self.is_open(&set)? {
            let mut set = set;
            set.grow(self.len());
            Ok(OpenSet(set))
        } else {
            Err(Error::NotOpen(self.fmt_set(&set)))
        }
    }

    pub fn open_named(&self, names: &[&str]) -> Result<OpenSet> {
        let mut set = bits::empty(self.len());
        for n in names {
            set.insert(self.index_of(n)?);
        }
        self.open(set)
    }

    /// Smallest open set containing `set`.
    pub fn open_hull(&self, set: &Bits) -> OpenSet {
        let mut out = bits::empty(self.len());
        for x in set.ones() {
            out.union_with(&self.minup[x]);
        }
        OpenSet(out)
    }

    /// All open sets, ordered by their membership mask. Refuses spaces with more
    /// than `max_points` points.
    pub fn open_sets(&self, max_points: usize) -> Result<Vec<OpenSet>> {
        let n = self.len();
        if n > max_points || n > 24 {
            return Err(Error::too_large("space", n, max_points.min(24)));
        }
        let masks: Vec<u64> = self.minup.iter().map(bits::to_mask).collect();
        let opens = (0u64..(1u64 << n))
            .filter(|&m| (0..n).all(|x| m >> x & 1 == 0 || masks[x] & !m == 0))
            .map(|m| OpenSet(bits::from_mask(n, m)))
            .collect();
        Ok(opens)
    }

    /// Comparability-graph components of an arbitrary subset, each block
    /// listed once, ordered by least member.
    pub fn components_of(&self, set: &Bits) -> Vec<Bits> {
        components_in(&self.minup, set)
    }

    pub fn connected_components(&self, set: &OpenSet) -> Vec<Bits> {
        self.components_of(&set.0)
    }

    pub fn is_connected(&self, set: &Bits) -> bool {
        self.components_of(set).len() <= 1
    }

    /// The subspace on `set`, re-indexed in increasing order. The returned
    /// vector maps new indices back to points of `self`.
    pub fn subspace(&self, set: &Bits) -> (FinSpace, Vec<Point>) {
        let keep: Vec<Point> = set.ones().collect();
        let mut back = vec![usize::MAX; self.len()];
        for (i, &p) in keep.iter().enumerate() {
            back[p] = i;
        }
        let names = keep.iter().map(|&p| self.names[p].clone()).collect();
        let minup = keep
            .iter()
            .map(|&p| {
                self.minup[p]
                    .ones()
                    .filter(|&q| set.contains(q))
                    .map(|q| back[q])
                    .collect()
            })
            .collect();
        let sub = FinSpace::new(names, minup).expect("subspace of a valid space");
        (sub, keep)
    }

    /// Product with componentwise minimal neighbourhoods. Point `(a, b)` has
    /// index `a * |other| + b` and name `a*b`.
    pub fn product(&self, other: &FinSpace) -> FinSpace {
        let m = other.len();
        let mut names = Vec::with_capacity(self.len() * m);
        let mut minup = Vec::with_capacity(self.len() * m);
        for a in 0..self.len() {
            for b in 0..m {
                names.push(format!("{}*{}", self.names[a], other.names[b]));
                let mut row = Vec::new();
                for a2 in self.minup[a].ones() {
                    for b2 in other.minup[b].ones() {
                        row.push(a2 * m + b2);
                    }
                }
                minup.push(row);
            }
        }
        FinSpace::new(names, minup).expect("product of valid spaces")
    }

    /// Quotient by a partition of the points. The minimal neighbourhood of a
    /// class is the smallest saturated open set containing it. Classes are
    /// ordered by least member and named by joining member names with `+`.
    pub fn quotient(&self, classes: &[Vec<Point>]) -> Result<(FinSpace, Vec<Point>)> {
        let n = self.len();
        let mut class_of = vec![usize::MAX; n];
        for (c, members) in classes.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::InvalidPartition("empty class".into()));
            }
            for &p in members {
                if p >= n {
                    return Err(Error::UnknownPoint(format!("#{p}")));
                }
                if class_of[p] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "`{}` lies in two classes",
                        self.names[p]
                    )));
                }
                class_of[p] = c;
            }
        }
        if let Some(p) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidPartition(format!(
                "`{}` lies in no class",
                self.names[p]
            )));
        }
        // canonical class order: by least member
        let mut order: Vec<usize> = (0..classes.len()).collect();
        order.sort_by_key(|&c| classes[c].iter().min().copied());
        let mut rank = vec![0; classes.len()];
        for (r, &c) in order.iter().enumerate() {
            rank[c] = r;
        }
        let projection: Vec<Point> = class_of.iter().map(|&c| rank[c]).collect();
        let k = classes.len();
        let mut members: Vec<Bits> = vec![bits::empty(n); k];
        for p in 0..n {
            members[projection[p]].insert(p);
        }
        let names = members
            .iter()
            .map(|m| {
                m.ones()
                    .map(|p| self.names[p].as_str())
                    .collect::<Vec<_>>()
                    .join("+")
            })
            .collect();
        let mut minup = Vec::with_capacity(k);
        for start in &members {
            let mut cur = start.clone();
            loop {
                let mut next = self.open_hull(&cur).0;
                for p in next.clone().ones() {
                    next.union_with(&members[projection[p]]);
                }
                if next == cur {
                    break;
                }
                cur = next;
            }
            let row: Vec<Point> = (0..k).filter(|&c| members[c].is_subset(&cur)).collect();
            minup.push(row);
        }
        Ok((FinSpace::new(names, minup)?, projection))
    }

    /// Searches for a homeomorphism `self → other`; returns the point map.
    pub fn find_homeomorphism(&self, other: &FinSpace) -> Option<Vec<Point>> {
        if self.len() != other.len() {
            return None;
        }
        let n = self.len();
        let sig = |s: &FinSpace, x: Point| {
            let up = s.minup[x].count_ones(..);
            let down = (0..s.len()).filter(|&y| s.minup[y].contains(x)).count();
            (up, down)
        };
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            a: &FinSpace,
            b: &FinSpace,
            x: usize,
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
            sig: &dyn Fn(&FinSpace, Point) -> (usize, usize),
        ) -> bool {
            if x == a.len() {
                return true;
            }
            for y in 0..b.len() {
                if used[y] || sig(a, x) != sig(b, y) {
                    continue;
                }
                // relations with already mapped points must match both ways
                let ok = (0..x).all(|z| {
                    a.minup[x].contains(z) == b.minup[y].contains(map[z])
                        && a.minup[z].contains(x) == b.minup[map[z]].contains(y)
                });
                if !ok {
                    continue;
                }
                map[x] = y;
                used[y] = true;
                if go(a, b, x + 1, map, used, sig) {
                    return true;
                }
                used[y] = false;
            }
            false
        }
        if go(self, other, 0, &mut map, &mut used, &sig) {
            Some(map)
        } else {
            None
        }
    }

    pub fn fmt_set(&self, set: &Bits) -> String {
        bits::fmt_named(set, &self.names)
    }
}

pub(crate) fn components_in(minup: &[Bits], set: &Bits) -> Vec<Bits> {
    let n = minup.len();
    let mut seen = bits::empty(n);
    let mut out = Vec::new();
    for start in set.ones() {
        if seen.contains(start) {
            continue;
        }
        let mut block = bits::empty(n);
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(x) = stack.pop() {
            block.insert(x);
            for y in set.ones() {
                if !seen.contains(y) && (minup[x].contains(y) || minup[y].contains(x)) {
                    seen.insert(y);
                    stack.push(y);
                }
            }
        }
        out.push(block);
    }
    out
}

/// Alexandrov-continuous map between finite spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContMap {
    dom: FinSpace,
    cod: FinSpace,
    assignment: Vec<Point>,
}

impl ContMap {
    /// Continuity: `y ∈ minup(x) ⇒ f(y) ∈ minup(f(x))`.
    pub fn new(dom: FinSpace, cod: FinSpace, assignment: Vec<Point>) -> Result<Self> {
        if assignment.len() != dom.len() {
            return Err(Error::InvalidPartition("assignment is not total".into()));
        }
        if let Some(&bad) = assignment.iter().find(|&&p| p >= cod.len()) {
            return Err(Error::UnknownPoint(format!("#{bad}")));
        }
        for x in 0..dom.len() {
            for y in dom.minup[x].ones() {
                if !cod.minup[assignment[x]].contains(assignment[y]) {
                    return Err(Error::NotContinuous(dom.names[x].clone()));
                }
            }
        }
        Ok(ContMap {
            dom,
            cod,
            assignment,
        })
    }

    pub fn dom(&self) -> &FinSpace {
        &self.dom
    }

    pub fn cod(&self) -> &FinSpace {
        &self.cod
    }

    pub fn apply(&self, x: Point) -> Point {
        self.assignment[x]
    }

    pub fn assignment(&self) -> &[Point] {
        &self.assignment
    }

    pub fn fibre(&self, b: Point) -> Vec<Point> {
        (0..self.dom.len())
            .filter(|&x| self.assignment[x] == b)
            .collect()
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = bits::empty(self.cod.len());
        for &p in &self.assignment {
            hit.insert(p);
        }
        hit.count_ones(..) == self.cod.len()
    }

    /// Covering map test: over every `minup(b)` the preimage is the disjoint
    /// union of the `minup(e)`, `e` over the fibre of `b`, each mapped
    /// homeomorphically onto `minup(b)`.
    pub fn is_covering(&self) -> bool {
        if !self.is_surjective() {
            return false;
        }
        for b in 0..self.cod.len() {
            let base = &self.cod.minup[b];
            let pre: Bits = bits::from_iter(
                self.dom.len(),
                (0..self.dom.len()).filter(|&x| base.contains(self.assignment[x])),
            );
            let mut covered = bits::empty(self.dom.len());
            for e in self.fibre(b) {
                let sheet = &self.dom.minup[e];
                if !covered.is_disjoint(sheet) {
                    return false;
                }
                covered.union_with(sheet);
                // bijective onto minup(b), order preserved both ways
                let image: Vec<Point> = sheet.ones().map(|x| self.assignment[x]).collect();
                let mut sorted = image.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != image.len() || sorted != base.ones().collect::<Vec<_>>() {
                    return false;
                }
                for x in sheet.ones() {
                    for y in sheet.ones() {
                        let up = self.dom.minup[x].contains(y);
                        let down = self.cod.minup[self.assignment[x]].contains(self.assignment[y]);
                        if up != down {
                            return false;
                        }
                    }
                }
            }
            if covered != pre {
                return false;
            }
        }
        true
    }
}
