//! Exact statistics of the partial quotients of `a/N` as `a` runs over the
//! reduced residues modulo `N`.

pub mod arith;
pub mod cf;
pub mod dedekind;
pub mod discrepancy;
pub mod ensemble;
pub mod error;
pub mod farey;
pub mod rational;
pub mod reflect;
pub mod search;
pub mod weight;

pub use cf::{expand, ContinuedFraction, ReducedFraction, WeightFn, Window};
pub use error::{Error, Result};
pub use rational::ExactRational;
