//! Equivalence-class sorting under a synchronous pairwise-comparison cost
//! model: classify `n` elements into their hidden classes using only
//! same/different tests, counting comparison rounds and totals.
//!
//! The crate provides the cost model itself ([`model`]), the knowledge graph
//! shared by all sorters ([`partition`]), parallel sorters driven by class
//! counts or by the smallest-class fraction ([`parallel`]), the sequential
//! round-robin sorter ([`round_robin`]), an adaptive adversary oracle that
//! enforces quadratic comparison floors ([`adversary`]), and samplers for
//! class-size distributions with the rank-sum comparison bound ([`dist`]).

pub mod adversary;
pub(crate) mod fast_hash;
pub mod dist;
pub mod model;
pub mod parallel;
pub mod partition;
pub mod round_robin;

pub use adversary::{AdversaryState, Certification, CheckedAdversary, FloorClaim};
pub use dist::{dominance_bound, realize_labels, riemann_zeta, sample_ranks, ClassDistribution};
pub use model::{
    execute_round, make_truth_oracle, validate_cr_round, validate_er_round, ComparisonResult,
    ElementId, GroundTruth, ModelError, Oracle, RoundMode, RoundSchedule, RunMetrics, TruthOracle,
};
pub use parallel::{
    compute_d, cr_sort, er_constant_retry, er_constant_sort, er_sort, merge_answers_pair, Answer,
    ConstantRoundParams, MergeMode, SortError, SortOptions, SortOutcome,
};
pub use partition::{PartitionError, PartitionState, Relation};
pub use round_robin::{round_robin_sort, RoundRobinRun};
