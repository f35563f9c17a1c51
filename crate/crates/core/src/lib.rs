//! Exact Hall algebras of quivers with an admissible automorphism over finite
//! fields, computed by enumeration of the fixed-point representation spaces.

pub mod error;
pub mod gf;
pub mod algebra;
pub mod functions;
pub mod hall;
pub mod linalg;
pub mod quiver;
pub mod repspace;
pub mod sweep;
pub mod workbench;

pub use error::{HallError, Result};
pub use gf::{FieldSpec, Scalar};
pub use quiver::{DimVector, QuiverWithAut};
pub use repspace::ModuleClass;
pub use workbench::{Limits, TableStore, Workbench};
