//! Finite-field linear algebra for matrix spaces whose every element is
//! triangularizable: detection, witnesses, flag recovery, structure maps,
//! and exhaustive campaigns over small fields.
//!
//! Field elements are plain integers in `0..q` (see [`field`]); matrices and
//! spaces carry a [`FieldCtx`] handle.

pub mod adapted;
pub mod error;
pub mod field;
pub mod flag;
pub mod grassmann;
pub mod lemma;
pub mod linalg;
pub mod mat;
pub mod par;
pub mod poly;
pub mod recover;
pub mod space;
pub mod spacefile;
pub mod structure;
pub mod survey;
pub mod sweep;
pub mod triang;

pub use error::{Error, Result};
pub use field::{Elem, FieldCtx};
pub use flag::Flag;
pub use mat::{Mat, Vector};
pub use par::Execution;
pub use poly::Poly;
pub use recover::{recover_flag, recover_flag_with, Alarm, RecoverOptions, RecoveryTrace};
pub use space::{MatSpace, DEFAULT_BUDGET};
pub use structure::StructureReport;
pub use triang::{space_weakly_triangularizable, Mode, Verdict};
