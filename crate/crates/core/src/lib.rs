//! Worst-case interactive communication between correlated informants and a
//! single recipient, applied to data-gathering sensor networks.
//!
//! The crate is layered bottom-up:
//!
//! - [`correlation`]: joint supports and conditional ambiguity sets.
//! - [`protocol`]: worst-case bit budgets, the four objectives, and
//!   bit-exact transcripts of the one- and two-message protocols.
//! - [`scheduling`]: the Minimum Cost Next (MCN) greedy scheduler and
//!   exhaustive oracles over all polling orders.
//! - [`lifetime`]: per-node energy accounting and worst-case network
//!   lifetime optimization for single-hop networks.
//! - [`netsim`]: a clustered, round-based network simulator comparing
//!   interactive MCN polling with LEACH.
//! - [`fixtures`], [`audit`]: generated instances and the oracle comparisons
//!   run by `intercomm verify`.
//! - [`cli`]: configuration, experiment orchestration and report output.
//!
//! Runnable walkthroughs of each layer live in the crate's `examples/`
//! directory (`cargo run -p intercomm --example <name>`).

pub mod audit;
pub mod bits;
pub mod cli;
pub mod correlation;
mod error;
pub mod fixtures;
pub mod lifetime;
pub mod netsim;
pub mod protocol;
pub mod scheduling;

pub use correlation::{Alphabet, AmbiguitySet, ConditioningContext, JointSupport, Symbol, Weight};
pub use error::{Error, Result};
pub use protocol::{Accounting, BitBudget, Problem, ProtocolKind, Transcript};
pub use scheduling::{Schedule, SolveReport, StepCost};
