//! Step refinable functions and tight wavelet frames on the additive group
//! of p-adic numbers.
//!
//! The construction designs a mask on a p-ary tree of dual cosets, solves a
//! Vandermonde system for the refinement coefficients, and reads wavelet
//! supports off the tree of `φ̂(χA⁻¹)` values. Every frame can be checked
//! independently by computing its coefficients and comparing the Parseval
//! sum with `‖f‖²`.

pub mod cli;
pub mod document;
pub mod error;
pub mod frame;
pub mod group;
pub mod mask;
pub mod render;
pub mod step;
pub mod tree;
pub mod vandermonde;
pub mod verify;

pub use document::{FrameDocument, TreeFile};
pub use error::{Error, Result};
pub use frame::{
    build_frame, check_theorem31, Branch, BuildOptions, FrameSystem, JPartition, TilingReport,
    WaveletSpec,
};
pub use group::{
    enumerate_h0, pair, CharacterWord, DualCoset, GroupElement, GroupParams, TimeCoset,
};
pub use mask::{solve_mask, MaskSpec};
pub use step::{fourier, inverse_fourier, StepFunctionFreq, StepFunctionTime};
pub use tree::{shift_tree, Classification, MaskTree, NodeState, PaddingRule, Transform};
pub use verify::{verify_frame, VerificationReport, VerifyOptions};
