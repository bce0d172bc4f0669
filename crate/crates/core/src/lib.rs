//! Structured-concurrency building blocks and a dataflow engine built on them.
//!
//! - [`sync`]: counting [`Semaphore`](sync::Semaphore) with blocking acquire and a
//!   fixed-capacity [`BoundedChannel`](sync::BoundedChannel) guarded by three of them.
//! - [`forkjoin`]: divide-and-conquer recursion turned into task trees
//!   (quicksort and the pairing reduction over any associative operation).
//! - [`horner`]: polynomial evaluation as a pairing reduction over affine maps.
//! - [`wavenet`]: wave systems, i.e. acyclic single-writer/single-reader Petri nets
//!   whose places are bounded channels and whose transitions are looping workers.
//! - [`netfmt`]: a line-oriented text format for wave-system nets.
//! - [`cli`]: deterministic demos that print `computed == oracle` tables.

pub mod cli;
pub mod forkjoin;
pub mod horner;
pub mod netfmt;
pub mod sync;
pub mod wavenet;

pub use forkjoin::{par_quicksort, par_reduce, seq_fold, JoinMode, JoinPolicy};
pub use horner::{AffinePair, Polynomial};
pub use netfmt::{parse_net, serialize_net};
pub use sync::{BoundedChannel, Semaphore};
pub use wavenet::{fig1_net, NetSpec, OpKind, RunReport};
