//! Linearized-polynomial model of GL(2,q), closed-form multiplicity counts,
//! and exhaustive verification that the image of `{f_{t,0}, f_{0,t}}` is a
//! λ-code in the Cayley graph `Cay(PGL(2,q), A)`.
//!
//! ```
//! use pglcode::{Field, oracle::{verify_theorem_pgl, VerifyOptions}};
//!
//! let f = Field::for_q(5).unwrap();
//! let report = verify_theorem_pgl(&f, &VerifyOptions::default()).unwrap();
//! assert!(report.pass);
//! assert_eq!(report.expected, 4);
//! ```

pub mod counting;
pub mod error;
pub mod export;
pub mod field;
pub mod gl2;
pub mod numtheory;
pub mod oracle;
pub mod pgl;

pub use counting::{Counter, TripleCount};
pub use error::{Error, Result};
pub use field::{Field, FieldElem, FieldSpec};
pub use gl2::{Gl2, GroupElem, SParam};
pub use oracle::{Level, OracleMode, VerificationReport, VerifyOptions};
pub use pgl::{Pgl, PglElem};
