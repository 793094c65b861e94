//! Moving wide and local subgroupoids along identity-on-objects morphisms.
//!
//! For `φ: Q → H` the image of a wide subgroupoid is written
//! [`pushforward`] (`φ_*`, from `Q` to `H`) and the preimage [`pullback`]
//! (`φ^*`, from `H` to `Q`). Both act germwise on local subgroupoids, and
//! `φ_* s ≤ r ⟺ s ≤ φ^* r`.

use crate::bits::{self, Bits};
use crate::error::{Error, Result};
use crate::finspace::Point;
use crate::germs::LocalSubgroupoid;
use crate::groupoid::{pair_groupoid, FinGroupoid, GroupoidMorphism, WideSubgroupoid};

/// A validated identity-on-objects morphism together with its endpoints.
#[derive(Debug, Clone)]
pub struct Transfer {
    dom: FinGroupoid,
    cod: FinGroupoid,
    phi: GroupoidMorphism,
}

impl Transfer {
    pub fn new(dom: FinGroupoid, cod: FinGroupoid, phi: GroupoidMorphism) -> Result<Self> {
        if dom.objects() != cod.objects() || !phi.is_identity_on_objects() {
            return Err(Error::NotIdentityOnObjects);
        }
        // re-validate: the morphism may have been built against other groupoids
        let phi = GroupoidMorphism::new(
            &dom,
            &cod,
            phi.object_map().to_vec(),
            phi.arrow_map().to_vec(),
        )?;
        Ok(Transfer { dom, cod, phi })
    }

    pub fn identity(q: &FinGroupoid) -> Self {
        Transfer {
            dom: q.clone(),
            cod: q.clone(),
            phi: GroupoidMorphism::identity(q),
        }
    }

    pub fn dom(&self) -> &FinGroupoid {
        &self.dom
    }

    pub fn cod(&self) -> &FinGroupoid {
        &self.cod
    }

    pub fn morphism(&self) -> &GroupoidMorphism {
        &self.phi
    }

    /// Image of `H`. Closed because `φ` is a morphism injective on objects.
    pub fn pushforward(&self, h: &WideSubgroupoid) -> WideSubgroupoid {
        let image = bits::from_iter(self.cod.len(), h.arrows().ones().map(|g| self.phi.apply(g)));
        self.cod
            .wide(h.carrier(), image)
            .expect("image of a wide subgroupoid under an identity-on-objects morphism")
    }

    /// Preimage of `K`.
    pub fn pullback(&self, k: &WideSubgroupoid) -> WideSubgroupoid {
        let pre = bits::from_iter(
            self.dom.len(),
            self.dom
                .arrows_over(k.carrier().bits())
                .ones()
                .filter(|&g| k.contains(self.phi.apply(g))),
        );
        self.dom
            .wide(k.carrier(), pre)
            .expect("preimage of a wide subgroupoid")
    }

    /// `φ_*` on sections. Image commutes with restriction, so the result is
    /// continuous; this is rechecked.
    pub fn push_local(&self, s: &LocalSubgroupoid) -> Result<LocalSubgroupoid> {
        let reps = s
            .carrier()
            .points()
            .map(|x| (x, self.pushforward(s.rep(x))))
            .collect();
        LocalSubgroupoid::from_reps(&self.cod, s.carrier(), reps)
    }

    /// `φ^*` on sections.
    pub fn pull_local(&self, r: &LocalSubgroupoid) -> Result<LocalSubgroupoid> {
        let reps = r
            .carrier()
            .points()
            .map(|x| (x, self.pullback(r.rep(x))))
            .collect();
        LocalSubgroupoid::from_reps(&self.dom, r.carrier(), reps)
    }

    /// Both sides of `s ≤ φ^* r ⟺ φ_* s ≤ r`, in that order.
    pub fn check_adjunction(
        &self,
        s: &LocalSubgroupoid,
        r: &LocalSubgroupoid,
    ) -> Result<(bool, bool)> {
        let left = crate::germs::local_le(s, &self.pull_local(r)?)?;
        let right = crate::germs::local_le(&self.push_local(s)?, r)?;
        Ok((left, right))
    }
}

/// The anchor `Q → X × X`, `g ↦ (src g, dst g)`.
pub fn anchor(q: &FinGroupoid) -> Transfer {
    let pair = pair_groupoid(q.objects());
    let n = q.objects().len();
    let arrow_map = (0..q.len()).map(|g| q.src(g) * n + q.dst(g)).collect();
    let phi =
        GroupoidMorphism::new(q, &pair, (0..n).collect(), arrow_map).expect("anchor is a morphism");
    Transfer {
        dom: q.clone(),
        cod: pair,
        phi,
    }
}

/// A local subgroupoid of a pair groupoid whose germs are equivalence
/// relations on the minimal neighbourhoods.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalEquivRel {
    n: usize,
    section: LocalSubgroupoid,
}

impl LocalEquivRel {
    pub fn new(pair: &FinGroupoid, s: LocalSubgroupoid) -> Result<Self> {
        let n = pair.objects().len();
        if pair.len() != n * n
            || (0..pair.len()).any(|g| pair.src(g) != g / n || pair.dst(g) != g % n)
        {
            return Err(Error::NotAMorphism("not a pair groupoid".into()));
        }
        for x in s.carrier().points() {
            let rel = s.rep(x).arrows();
            let pts: Vec<Point> = s.rep(x).carrier().points().collect();
            for &a in &pts {
                if !rel.contains(a * n + a) {
                    return Err(Error::NotWide(format!(
                        "not reflexive at `{}`",
                        pair.objects().name(a)
                    )));
                }
                for &b in &pts {
                    if rel.contains(a * n + b) != rel.contains(b * n + a) {
                        return Err(Error::NotWide("not symmetric".into()));
                    }
                    for &c in &pts {
                        if rel.contains(a * n + b)
                            && rel.contains(b * n + c)
                            && !rel.contains(a * n + c)
                        {
                            return Err(Error::NotWide("not transitive".into()));
                        }
                    }
                }
            }
        }
        Ok(LocalEquivRel { n, section: s })
    }

    pub fn section(&self) -> &LocalSubgroupoid {
        &self.section
    }

    /// Classes of the germ at `x`, as point sets ordered by least member.
    pub fn classes(&self, x: Point) -> Vec<Bits> {
        let rep = self.section.rep(x);
        let pts = self.n;
        let mut out: Vec<Bits> = Vec::new();
        for a in rep.carrier().points() {
            if out.iter().any(|c| c.contains(a)) {
                continue;
            }
            out.push(bits::from_iter(
                pts,
                rep.carrier()
                    .points()
                    .filter(|&b| rep.contains(a * pts + b)),
            ));
        }
        out
    }
}

/// `A_*(s)` as a local equivalence relation.
pub fn anchor_relation(q: &FinGroupoid, s: &LocalSubgroupoid) -> Result<LocalEquivRel> {
    let a = anchor(q);
    let pushed = a.push_local(s)?;
    LocalEquivRel::new(a.cod(), pushed)
}
