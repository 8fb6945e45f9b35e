use num_traits::Zero;

use super::demand::StochasticDemand;
use crate::error::{Error, Result};
use crate::geometry::PatchLayout;
use crate::rational::{one, Rational};
use crate::xi::{RowIndex, Subfamily, XiMatrix};

/// Everything `Ξπ` says about a stochastic demand system.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalityReport {
    /// `ξ^J · π` for every ordinary row, in matrix row order.
    pub xi_products: Vec<(Subfamily, Rational)>,
    pub rationalizable: bool,
    /// Subfamilies with `ξ^J · π < 1`.
    pub violations: Vec<Subfamily>,
    /// Inclusion-minimal members of `violations`.
    pub minimal_violations: Vec<Subfamily>,
    /// Minimum of `ξ^J · π` over the extended row set: the largest
    /// population weight that rational types can carry.
    pub d_value: Rational,
    /// Every row of the extended set attaining `d_value`.
    pub argmin: Vec<RowIndex>,
}

impl RationalityReport {
    pub fn product(&self, s: Subfamily) -> Option<&Rational> {
        self.xi_products.iter().find(|(t, _)| *t == s).map(|(_, v)| v)
    }
}

/// Evaluates `Ξπ >= 1` and the row minimum `D(π)`.
pub fn test_rationalizable(layout: &PatchLayout, xi: &XiMatrix, pi: &StochasticDemand) -> Result<RationalityReport> {
    if pi.as_slice().len() != layout.total() || xi.num_cols() != layout.total() {
        return Err(Error::Dimension(format!(
            "demand has {} entries, Ξ has {} columns, layout has {} patches",
            pi.as_slice().len(),
            xi.num_cols(),
            layout.total()
        )));
    }
    let xi_products: Vec<(Subfamily, Rational)> = xi
        .subfamilies()
        .iter()
        .map(|&s| (s, xi.dot(RowIndex::Subfamily(s), pi.as_slice())))
        .collect();
    let violations: Vec<Subfamily> = xi_products
        .iter()
        .filter(|(_, v)| *v < one())
        .map(|(s, _)| *s)
        .collect();
    let minimal_violations = inclusion_minimal(&violations);

    let extended = xi.dot(RowIndex::Extended, pi.as_slice());
    let d_value = xi_products
        .iter()
        .map(|(_, v)| v)
        .chain(std::iter::once(&extended))
        .min()
        .cloned()
        .unwrap_or_else(Rational::zero);
    let argmin = xi_products
        .iter()
        .filter(|(_, v)| *v == d_value)
        .map(|(s, _)| RowIndex::Subfamily(*s))
        .chain((extended == d_value).then_some(RowIndex::Extended))
        .collect();

    Ok(RationalityReport {
        rationalizable: violations.is_empty(),
        xi_products,
        violations,
        minimal_violations,
        d_value,
        argmin,
    })
}

fn inclusion_minimal(sets: &[Subfamily]) -> Vec<Subfamily> {
    sets.iter()
        .copied()
        .filter(|&s| !sets.iter().any(|&t| t != s && t.is_subset(s)))
        .collect()
}

/// Inclusion-minimal subfamilies with `ξ^J · π < 1`. Any decomposition of
/// `π` must put positive weight on types cycling through all of each one.
pub fn minimal_violations(report: &RationalityReport) -> Vec<Subfamily> {
    report.minimal_violations.clone()
}

/// `D(π)` together with the rows attaining it.
pub fn max_rational_weight(report: &RationalityReport) -> (Rational, Vec<RowIndex>) {
    (report.d_value.clone(), report.argmin.clone())
}
