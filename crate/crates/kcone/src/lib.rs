//! Exact computations with the Picard lattice of a general rational
//! elliptic surface and of the fiber product of two such surfaces over the
//! line: the intersection pairing, the root basis and its reflection group,
//! Mordell-Weil translations, nef-cone decision procedures, and
//! fundamental-domain reduction for the induced automorphism action.
//!
//! Everything is exact: integers are arbitrary precision and polyhedral
//! data is rational. There is no floating-point fast path.
//!
//! The hot sweeps (lattice-point censuses, batch minimization) run on rayon
//! when the default `parallel` feature is enabled and fall back to
//! sequential iteration otherwise; results are identical either way.
//!
//! ```
//! use kcone::lattice::DivisorClass;
//! use kcone::mordell_weil::{manin_class, SectionCoords};
//! use kcone::cones::{min_over_sections, surface_nef_test};
//!
//! // the class of the section with coordinates a2 = -1 is e2
//! let a = SectionCoords::from_integers([-1, 0, 0, 0, 0, 0, 0, 0]);
//! assert_eq!(manin_class(&a).unwrap(), DivisorClass::exceptional(2));
//!
//! // the hyperplane class is nef and meets nine sections in zero
//! let h = DivisorClass::hyperplane();
//! assert!(surface_nef_test(&h));
//! let min = min_over_sections(&h).unwrap();
//! assert_eq!(min.mu, 0.into());
//! assert_eq!(min.minimizers.len(), 9);
//! ```

pub mod arith;
pub mod cones;
pub mod error;
pub mod lattice;
pub mod mordell_weil;
pub mod threefold;
pub mod weyl;

pub use error::{Error, Result};
pub use lattice::{DivisorClass, IntersectionForm};
pub use mordell_weil::SectionCoords;
pub use weyl::{ChamberPosition, LatticeMap, WeylWord};
