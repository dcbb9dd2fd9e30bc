//! Learning Boolean functions from label proportions, at desk scale.
//!
//! - [`f2_linalg`]: bit-packed GF(2) elimination, solving and nullspaces.
//! - [`llp_core`]: bags, instances, hypotheses and the LLPB text format.
//! - [`parity_solver`]: the random-parity algorithm for parity-consistent bags,
//!   plus an exhaustive oracle.
//! - [`dictator_test`]: the dictatorship-test bag distribution with an exact
//!   label-vector oracle.
//! - [`labelcover`]: bipartite and smooth Label-Cover instances with planted labelings.
//! - [`reductions`]: the Label-Cover to LLP bag samplers and their canonical hypotheses.
//! - [`hypothesis_search`]: exhaustive OR/CNF/DNF/parity oracles over small families.

pub mod f2_linalg;
pub mod hypothesis_search;
pub mod labelcover;
pub mod llp_core;
pub mod parity_solver;
pub mod reductions;
pub mod seeding;

pub use f2_linalg::{BitVector, F2Matrix, LinearSystem, SolutionSpace};
pub use llp_core::{Bag, CnfHypothesis, DnfHypothesis, Hypothesis, Literal, LlpInstance, ParityHypothesis, Proportion};
