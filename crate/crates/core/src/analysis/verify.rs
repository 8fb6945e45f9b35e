//! Cross-validation of the row test against independent LP oracles.

use super::decompose::{primal_decompose, rational_types_span, solve_dual};
use super::demand::StochasticDemand;
use super::report::test_rationalizable;
use crate::error::Result;
use crate::geometry::PatchLayout;
use crate::rational::Rational;
use crate::revealed::TypeSpace;
use crate::xi::XiMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    /// `Ξπ >= 1`
    pub row_test: bool,
    /// `π = A* τ*` for some `τ* >= 0`
    pub oracle: bool,
    /// Row minimum over the extended system.
    pub d_value: Rational,
    /// Optimum of the primal program.
    pub primal_value: Rational,
    /// Optimum of the dual program, solved directly.
    pub dual_value: Rational,
    /// Empty when every check agrees.
    pub disagreements: Vec<String>,
}

impl Certificate {
    pub fn agree(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Checks that the row test matches LP feasibility over rational types and
/// that the row minimum equals both the primal and the dual optimum.
pub fn cross_validate(layout: &PatchLayout, xi: &XiMatrix, space: &TypeSpace, pi: &StochasticDemand) -> Result<Certificate> {
    let report = test_rationalizable(layout, xi, pi)?;
    let oracle = rational_types_span(layout, space, pi)?;
    let primal = primal_decompose(layout, space, pi)?;
    let (dual_value, _) = solve_dual(layout, space, pi)?;

    let mut disagreements = Vec::new();
    if report.rationalizable != oracle {
        disagreements.push(format!(
            "row test says {}, rational-type feasibility says {}",
            report.rationalizable, oracle
        ));
    }
    if report.d_value != primal.value_p {
        disagreements.push(format!(
            "row minimum {} differs from primal optimum {}",
            report.d_value, primal.value_p
        ));
    }
    if report.d_value != dual_value {
        disagreements.push(format!(
            "row minimum {} differs from dual optimum {}",
            report.d_value, dual_value
        ));
    }
    Ok(Certificate {
        row_test: report.rationalizable,
        oracle,
        d_value: report.d_value,
        primal_value: primal.value_p,
        dual_value,
        disagreements,
    })
}
