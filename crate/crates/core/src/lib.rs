//! Contagion simulation and systemic-risk scoring for "cheques-as-collateral"
//! lending networks.
//!
//! A bank lends working capital to customers against post-dated cheques they
//! received from their own clients. Each cheque links an issuer to a funded
//! recipient; aggregating all cheques gives a weighted directed network where
//! the weight of `i -> j` is the share of the bank's total collateral value
//! that `i` owes `j`. When an issuer fails, every cheque it issued bounces and
//! the loss can push recipients over their own failure thresholds.
//!
//! The crate is `no_std` (with `alloc`). Money is kept in integer euro cents
//! and failure thresholds are compared exactly; floating point only appears in
//! reported fractions and the statistical analyses.
//!
//! * [`graph`]: network construction and descriptive statistics.
//! * [`contagion`]: the stage-wise failure cascade.
//! * [`risk`]: per-customer scores, scenario losses and loss distributions.
//! * [`synth`]: deterministic synthetic network generator.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod contagion;
pub mod error;
pub mod graph;
pub mod risk;
pub mod synth;

pub use contagion::{BasisPoints, CascadeResult, ContagionConfig, Stage};
pub use error::{Error, Result};
pub use graph::{Cheque, CollateralNetwork, Customer, CustomerId, Edge, NetworkStats};
