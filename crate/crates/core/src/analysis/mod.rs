//! Rationalizability of stochastic demand: the row test, the maximal
//! rational weight, optimal decompositions, type classes and exchange
//! repair.

mod decompose;
mod demand;
mod repair;
mod report;
mod verify;

pub use decompose::{
    check_decomposition_optimality, in_class, primal_decompose, rational_types_span,
    shared_classes, solve_dual, type_classes, type_dual_value, Decomposition, OptimalityVerdict,
    TypeClass,
};
pub use demand::{random_demand, random_type, StochasticDemand};
pub use repair::{choice_counts, exchange_repair, Exchange, RepairOutcome};
pub use report::{max_rational_weight, minimal_violations, test_rationalizable, RationalityReport};
pub use verify::{cross_validate, Certificate};
