pub mod census;
pub mod control;
pub mod error;
pub mod gf;
pub mod linalg;
pub mod matpoly;
pub mod poly;
pub mod splitfield;
pub mod verify;

pub use error::{Error, Result, DEFAULT_BUDGET};
pub use gf::{Fe, Field, FieldElement, FieldSpec};
pub use linalg::{MatF, SubspaceBasis};
pub use poly::{Degree, Poly};
pub use matpoly::{is_unimodular, linear_pencil, linearize, minors_gcd, smith_form, MatPoly, SmithForm};
pub use control::{BrunovskyPair, ControllabilityData, MatrixPair};
pub use census::CountResult;
pub use splitfield::{ExtFieldCtx, MCompanion};
