//! Structural analysis of games: balancedness, convexity through the Weber
//! set, exactness, large cores, XOS representations and allocation rules.

pub mod allocation;
pub mod balance;
pub mod collections;
pub mod exact;
pub mod large_core;
pub mod polytope;
pub mod weber;
pub mod xos;

pub use allocation::{prefix_robust_allocation, tolerance_allocation, PrefixAllocation, ToleranceOutcome};
pub use balance::{
    aspiration_program, check_balanced, find_core_point, partition_program, BalanceCertificate, BalanceReport,
};
pub use collections::enumerate_minimal_balanced_collections;
pub use exact::{check_exact, ExactReport};
pub use large_core::{check_large_core, LargeCoreReport};
pub use weber::{shapley_ichiishi_check, weber_set, ConvexityReport, WeberSet};
pub use xos::{xos_representation, Xos, XosClause};
