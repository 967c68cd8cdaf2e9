//! Multimedia identifiable-parent-property (MIPP) fingerprinting codes.
//!
//! A code is `t`-MIPP when, for any set of words a coalition of at most `t`
//! users can jointly produce, some codeword belongs to every coalition that
//! could have produced it. This crate verifies the property exactly, traces
//! colluders from averaging-attack statistics, and builds optimal and
//! asymptotically optimal 3-MIPP codes of length 2 from generalized
//! quadrangles.

pub mod attack;
pub mod bounds;
pub mod characterization;
pub mod cli;
pub mod code;
pub mod construction;
pub mod field;
pub mod quadrangle;
pub mod text;

pub use code::{Code, CodeError, DescendantSet, Limits, Symbol, TraceOutcome};
