//! Exact computations with one-dimensional sheaves on the projective plane
//! given as cokernels of matrices of forms: cohomology of twists, duality,
//! the multiplicity-6 strata registry and classifier, Kronecker module
//! semistability, stability criteria and minimal resolutions of point ideals.

pub mod error;
pub mod exact;
pub mod kronecker;
pub mod points;
pub mod presentation;
pub mod stability;
pub mod strata;

pub use error::{Error, Result};
pub use exact::{Form, Matrix, Rational};
pub use kronecker::{Destabilizer, KroneckerModule, KroneckerVerdict};
pub use points::{BettiShape, PointClaim, PointConfig};
pub use presentation::{CohomologyProfile, HilbertData, Presentation};
pub use stability::{BoundsQuery, BoundsVerdict, StabilityVerdict, VerdictKind};
pub use strata::{QuotientKind, RowReport, StratumLabel, StratumRow};
