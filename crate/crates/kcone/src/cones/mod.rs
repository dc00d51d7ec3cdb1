//! Exact rational polyhedral-cone machinery: double description between
//! generator and inequality descriptions, LP-backed membership with Farkas
//! certificates, the quadratic model of section values with its lattice
//! enumeration, the telescoping decomposition of section classes over the
//! root basis, and fundamental-domain reduction.

mod dd;
mod lemma24;
mod lp;
mod nef;
mod quadform;
mod reduce;

pub use dd::{dual_cone, extreme_rays, facet_normals, VRep};
pub use lemma24::{
    lemma24_coefficients, lemma24_reconstruct, lemma24_scan, lemma24_scan_seq, two_d_plus_s,
    SweepReport,
};
pub use lp::{cone_member, Membership};
pub use nef::{nef_chamber_polytope, surface_nef_test, SideMu};
pub use quadform::{
    min_over_sections, min_over_sections_seq, section_value_form, sections_with_value_at_most,
    QuadraticModel, SectionMinimum,
};
pub use reduce::{reduce_mod_translations, DomainReduction};

use num_traits::Signed;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{dot, format_rat, parse_rat, primitive_integer, qvec_is_zero, QMat, QVec, Rat};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, RANK};

/// The bilinear form against which duality and membership certificates are
/// expressed: either the standard dot product or the intersection pairing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairingForm {
    #[default]
    Euclidean,
    /// diag(1, -1, ..., -1) on 10 coordinates (h, e1..e9).
    Picard,
}

impl PairingForm {
    /// G·v, the covector of y -> <v, y> in standard coordinates.
    pub fn normal_of(&self, v: &[Rat]) -> QVec {
        match self {
            PairingForm::Euclidean => v.to_vec(),
            PairingForm::Picard => {
                assert_eq!(v.len(), RANK, "the intersection pairing lives on 10 coordinates");
                v.iter()
                    .enumerate()
                    .map(|(i, x)| if i == 0 { x.clone() } else { -x.clone() })
                    .collect()
            }
        }
    }

    pub fn pair(&self, x: &[Rat], y: &[Rat]) -> Rat {
        dot(&self.normal_of(x), y)
    }
}

/// A rational polyhedral cone given by generators, optionally carrying an
/// inequality description. Lineality directions appear as +/- generator
/// pairs. All stored vectors are primitive integers in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCone {
    rays: Vec<QVec>,
    facets: Option<Vec<QVec>>,
}

impl RationalCone {
    pub fn from_rays(rays: Vec<QVec>) -> Result<Self> {
        if rays.is_empty() {
            return Err(Error::Degenerate);
        }
        let dim = rays[0].len();
        if rays.iter().any(|r| r.len() != dim) {
            return Err(Error::Malformed("generators of mixed dimension".into()));
        }
        if rays.iter().any(|r| qvec_is_zero(r)) {
            return Err(Error::Malformed("zero generator".into()));
        }
        let mut canon: Vec<Vec<crate::arith::Int>> = rays.iter().map(|r| primitive_integer(r)).collect();
        canon.sort();
        canon.dedup();
        Ok(RationalCone {
            rays: canon.into_iter().map(|v| crate::arith::ints_to_rats(&v)).collect(),
            facets: None,
        })
    }

    pub fn from_classes(classes: &[DivisorClass]) -> Result<Self> {
        Self::from_rays(classes.iter().map(|c| c.to_rationals()).collect())
    }

    pub(crate) fn with_facets(mut self, facets: Vec<QVec>) -> Self {
        let mut canon: Vec<Vec<crate::arith::Int>> = facets.iter().map(|f| primitive_integer(f)).collect();
        canon.sort();
        canon.dedup();
        self.facets = Some(canon.into_iter().map(|v| crate::arith::ints_to_rats(&v)).collect());
        self
    }

    pub fn rays(&self) -> &[QVec] {
        &self.rays
    }

    pub fn facets(&self) -> Option<&[QVec]> {
        self.facets.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.rays[0].len()
    }

    /// Rays as divisor classes (10-dimensional cones only).
    pub fn rays_as_classes(&self) -> Vec<DivisorClass> {
        self.rays
            .iter()
            .map(|r| {
                let ints = primitive_integer(r);
                DivisorClass::from_coords(&ints)
            })
            .collect()
    }

    /// Recomputes the facet list from the generators (standard-dot
    /// covectors; equations show up as +/- pairs).
    pub fn compute_facets(&self) -> Vec<QVec> {
        facet_normals(&self.rays, self.dim())
    }

    /// Checks the stored inequality description against the generators.
    pub fn h_description_is_consistent(&self) -> bool {
        match &self.facets {
            None => true,
            Some(facets) => self
                .rays
                .iter()
                .all(|r| facets.iter().all(|f| !dot(f, r).is_negative())),
        }
    }

    /// Rank of the linear span of the generators.
    pub fn span_rank(&self) -> usize {
        QMat::from_rows(self.rays.clone()).rank()
    }
}

// JSON shape: {"rays": [["p/q", ...]], "facets": [[...]]} with facets
// optional.
impl Serialize for RationalCone {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            rays: Vec<Vec<String>>,
            #[serde(skip_serializing_if = "Option::is_none")]
            facets: Option<Vec<Vec<String>>>,
        }
        let conv = |vs: &[QVec]| vs.iter().map(|v| v.iter().map(format_rat).collect()).collect();
        Repr { rays: conv(&self.rays), facets: self.facets.as_deref().map(conv) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalCone {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            rays: Vec<Vec<String>>,
            #[serde(default)]
            facets: Option<Vec<Vec<String>>>,
        }
        let repr = Repr::deserialize(d)?;
        let conv = |vs: &[Vec<String>]| -> std::result::Result<Vec<QVec>, D::Error> {
            vs.iter()
                .map(|v| v.iter().map(|s| parse_rat(s)).collect::<Result<QVec>>())
                .collect::<Result<Vec<QVec>>>()
                .map_err(|e| D::Error::custom(format!("field `rays`/`facets`: {e}")))
        };
        let mut cone =
            RationalCone::from_rays(conv(&repr.rays)?).map_err(|e| D::Error::custom(e.to_string()))?;
        if let Some(f) = repr.facets {
            cone = cone.with_facets(conv(&f)?);
            if !cone.h_description_is_consistent() {
                return Err(D::Error::custom("field `facets`: some generator violates a facet"));
            }
        }
        Ok(cone)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qvec_from_i64;

    #[test]
    fn cone_construction_and_canonical_form() {
        let c = RationalCone::from_rays(vec![
            qvec_from_i64(&[2, 0]),
            qvec_from_i64(&[0, 3]),
            qvec_from_i64(&[1, 0]), // duplicate direction of the first
        ])
        .unwrap();
        assert_eq!(c.rays().len(), 2);
        assert_eq!(c.rays()[0], qvec_from_i64(&[0, 1]));
        assert_eq!(c.rays()[1], qvec_from_i64(&[1, 0]));

        assert_eq!(RationalCone::from_rays(vec![]), Err(Error::Degenerate));
        assert!(RationalCone::from_rays(vec![qvec_from_i64(&[0, 0])]).is_err());
    }

    #[test]
    fn picard_form_normals() {
        let f = DivisorClass::fiber().to_rationals();
        let n = PairingForm::Picard.normal_of(&f);
        assert_eq!(n, qvec_from_i64(&[3, 1, 1, 1, 1, 1, 1, 1, 1, 1]));
        assert_eq!(PairingForm::Picard.pair(&f, &f), crate::arith::rat_int(0));
    }

    #[test]
    fn json_round_trip() {
        let c = RationalCone::from_rays(vec![qvec_from_i64(&[1, 2]), qvec_from_i64(&[-1, 1])])
            .unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: RationalCone = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        // inconsistent facets rejected
        let bad = r#"{"rays": [["1","0"]], "facets": [["-1","0"]]}"#;
        assert!(serde_json::from_str::<RationalCone>(bad).is_err());
    }
}
