// SPDX-License-Identifier: Apache-2.0

//! Semi-private accounting: invariant-aware adjacency, sensitivity spaces,
//! additive mechanisms and private inference for contingency tables.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cnd;
pub mod dataspace;
pub mod diagnostics;
pub mod error;
pub mod inference;
pub mod mechanisms;
pub mod normal;
pub mod rng;
pub mod sensitivity;
pub mod tradeoff;

pub use cnd::CndSpec;
pub use dataspace::{Dataset, DataspaceSpec, InvariantSpec, InvariantValue};
pub use error::{Error, Result};
pub use inference::{Margins, Table2x2, TestResult};
pub use mechanisms::MechanismOutput;
pub use rng::RngSeed;
pub use sensitivity::{Norm, SensitivitySpace};
pub use tradeoff::{PrivacyGuarantee, TradeoffSpec};
