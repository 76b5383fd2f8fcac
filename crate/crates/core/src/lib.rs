//! Johansson diagrams of filling Dehn spheres, their branched coverings along
//! a monodromy representation, and fundamental-group presentations of the
//! covering manifolds.

pub mod diagram;
pub mod fan;
pub mod lift;
pub mod monodromy;
pub mod pi1;
mod text;

pub use diagram::{Diagram, DiagramError, IssueKind, ValidationReport};
pub use fan::{banchoff_fan, Fan, FanError};
pub use lift::{lift, LiftError, Lifted};
pub use monodromy::{enumerate_reps, validate_rep, MonodromyError, MonodromyRep, RepReport};
pub use pi1::{build_complex, cell_presentation, dual_presentation, CellComplex, Pi1Error, TreeStrategy};
