//! Nef testing for surface classes. The effective-curve edges are the
//! fiber and the sections, so nefness is a sign condition on the fiber
//! degree plus a global section minimum; the degenerate fiber-orthogonal
//! case is resolved analytically (such a class must be a fiber multiple,
//! since a linear form bounded below on the section lattice is constant and
//! the pairing is nondegenerate).

use std::sync::OnceLock;

use num_traits::Signed;

use crate::arith::{Int, QVec};
use crate::lattice::DivisorClass;

use super::quadform::min_over_sections;
use super::{extreme_rays, facet_normals, PairingForm, RationalCone};

/// The per-class summary feeding nef decisions, including the threefold
/// gauge interval: the effective minimum over the moving edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SideMu {
    /// Positive fiber degree: the exact section minimum.
    Min(Int),
    /// Fiber multiple lambda·f: every section pairs to lambda.
    FiberScale(Int),
    /// Fiber degree zero but not a fiber multiple: section values are
    /// unbounded below.
    UnboundedBelow,
    /// Negative fiber degree: never nef.
    NegativeFiberDegree,
}

impl SideMu {
    pub fn of(x: &DivisorClass) -> SideMu {
        let fd = x.pair(&DivisorClass::fiber());
        if fd.is_negative() {
            return SideMu::NegativeFiberDegree;
        }
        if fd.is_positive() {
            let m = min_over_sections(x).expect("positive fiber degree");
            return SideMu::Min(m.mu);
        }
        match x.as_fiber_multiple() {
            Some(lambda) => SideMu::FiberScale(lambda),
            None => SideMu::UnboundedBelow,
        }
    }

    /// The value entering the nef inequality, when one exists.
    pub fn effective_min(&self) -> Option<&Int> {
        match self {
            SideMu::Min(v) | SideMu::FiberScale(v) => Some(v),
            _ => None,
        }
    }
}

/// Nef = nonnegative against the fiber and every section.
pub fn surface_nef_test(x: &DivisorClass) -> bool {
    match SideMu::of(x) {
        SideMu::Min(mu) => !mu.is_negative(),
        SideMu::FiberScale(lambda) => !lambda.is_negative(),
        SideMu::UnboundedBelow | SideMu::NegativeFiberDegree => false,
    }
}

/// The finite rational polyhedral cone cut out of the closed chamber by the
/// nef conditions: {x : x·alpha >= 0 for the nine roots, x·e_i >= 0 for the
/// nine exceptional classes}. Extreme rays in canonical order plus the
/// facet description.
pub fn nef_chamber_polytope() -> RationalCone {
    static CONE: OnceLock<RationalCone> = OnceLock::new();
    CONE.get_or_init(|| {
        let mut normals: Vec<QVec> = crate::weyl::simple_roots()
            .iter()
            .map(|r| PairingForm::Picard.normal_of(&r.class.to_rationals()))
            .collect();
        for i in 1..=9 {
            normals
                .push(PairingForm::Picard.normal_of(&DivisorClass::exceptional(i).to_rationals()));
        }
        let vrep = extreme_rays(&normals, 10);
        assert!(vrep.lineality.is_empty(), "the nef chamber cone is pointed");
        let generators = vrep.generators();
        let facets = facet_normals(&generators, 10);
        RationalCone::from_rays(generators)
            .expect("nef chamber cone is nontrivial")
            .with_facets(facets)
    })
    .clone()
}
