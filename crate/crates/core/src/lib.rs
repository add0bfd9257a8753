//! Exact computations with Gale duality for finite point configurations in
//! projective space over Q and prime fields.

pub mod error;
pub mod exactla;
pub mod elliptic;
pub mod gale;
pub mod plane_curves;
pub mod polyspace;
pub mod scalars;
pub mod surface_goppa;

pub use error::{Error, Result};
pub use exactla::{Matrix, Subspace};
pub use gale::{DualCertificate, PointConfig, Transport};
pub use polyspace::{BasePointSpec, HomogPoly, MonomialBasis, UniPoly};
pub use scalars::{FieldElement, FieldKind, FieldSpec};
