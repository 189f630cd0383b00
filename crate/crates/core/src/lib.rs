//! Complete complementary codes from q-ary functions over mixed-radix domains.
//!
//! The crate builds code sets from chain-quadratic functions on
//! `Z_{p_1}^{m_1} x .. x Z_{p_k}^{m_k}` and certifies the CCC property with
//! exact arithmetic in `Z[xi_q]`. Floating point is only used for advisory
//! checks and for plotting data.
//!
//! ```
//! use ccc_core::construct::build_theorem1;
//! use ccc_core::qary_function::{ChainLink, FuncTable};
//! use ccc_core::verify::{verify_ccc, VerifyOptions};
//!
//! let set = build_theorem1(
//!     3,
//!     2,
//!     vec![ChainLink::identity(3)],
//!     vec![FuncTable::zero(3); 2],
//!     vec![0, 1],
//! )
//! .unwrap();
//! let report = verify_ccc(&set, &VerifyOptions::default());
//! assert!(report.is_ccc);
//! assert_eq!(report.peak, 27);
//! ```

#![no_std]

extern crate alloc;

pub mod construct;
pub mod correlation;
pub mod cyclotomic;
pub mod error;
pub mod mixed_radix;
pub mod qary_function;
pub mod verify;
pub mod waveform;

pub use construct::{CodeMeta, CodeSet, ConstructionKind};
pub use correlation::{GroupRingElement, ZeroTester};
pub use error::{Error, Result, Side};
pub use mixed_radix::{Block, DomainPoint, DomainSpec};
pub use qary_function::{
    Branch, BlockForm, ChainLink, Coupling, FuncTable, GeneralizedQuadraticSpec, QaryFunction,
};
pub use waveform::RootSequence;
