//! Report documents. Every rational is written as an exact `"p/q"` string,
//! so parsing a machine report back gives bit-identical values.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::analysis::{
    Certificate, Decomposition, OptimalityVerdict, RationalityReport, RepairOutcome, TypeClass,
};
use crate::error::{Error, Result};
use crate::problem::Instance;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::revealed::{satisfies_sarp, BehavioralType};
use crate::xi::{ChainPartition, RowIndex, Subfamily, TumVerdict};

/// A rational that serializes as its exact string form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exact(pub Rational);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map(Exact).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn exact(values: &[Rational]) -> Vec<Exact> {
    values.iter().cloned().map(Exact).collect()
}

/// A row of the extended system: one-based budget labels, or the string
/// `"extended"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RowDoc {
    Subfamily(Vec<usize>),
    Extended(String),
}

impl From<RowIndex> for RowDoc {
    fn from(row: RowIndex) -> Self {
        match row {
            RowIndex::Subfamily(s) => RowDoc::Subfamily(s.labels()),
            RowIndex::Extended => RowDoc::Extended("extended".into()),
        }
    }
}

impl fmt::Display for RowDoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowDoc::Subfamily(labels) => f.write_str(&braces(labels)),
            RowDoc::Extended(s) => f.write_str(s),
        }
    }
}

fn braces(labels: &[usize]) -> String {
    let parts: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn rows(rows: &[RowIndex]) -> Vec<RowDoc> {
    rows.iter().map(|&r| r.into()).collect()
}

fn subfamilies(list: &[Subfamily]) -> Vec<Vec<usize>> {
    list.iter().map(|s| s.labels()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchEntry {
    pub label: String,
    /// One-based index in canonical order.
    pub canonical: usize,
    /// `+` above, `-` below, one symbol per other budget in ascending order.
    pub signs: String,
    pub witness: Vec<Exact>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchesDoc {
    pub counts: Vec<usize>,
    pub total: usize,
    /// Display order.
    pub patches: Vec<PatchEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiRowDoc {
    pub subfamily: Vec<usize>,
    pub entries: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiDoc {
    pub columns: Vec<String>,
    pub rows: Vec<XiRowDoc>,
    pub extended: Vec<Exact>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductDoc {
    pub subfamily: Vec<usize>,
    pub value: Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestDoc {
    pub rationalizable: bool,
    pub xi_pi: Vec<ProductDoc>,
    pub violations: Vec<Vec<usize>>,
    pub minimal_violations: Vec<Vec<usize>>,
    pub d_value: Exact,
    pub argmin: Vec<RowDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightDoc {
    pub d_value: Exact,
    pub argmin: Vec<RowDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeDoc {
    /// One-based display index of the chosen patch on each budget.
    pub choices: Vec<usize>,
    pub rational: bool,
    /// A revealed preference cycle over one-based budgets, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<usize>>,
}

impl fmt::Display for TypeDoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.choices.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))?;
        match &self.cycle {
            Some(cycle) => {
                let c: Vec<String> = cycle.iter().map(|j| j.to_string()).collect();
                write!(f, " irrational, cycle {}", c.join(" > "))
            }
            None => f.write_str(" rational"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedTypeDoc {
    #[serde(rename = "type")]
    pub ty: TypeDoc,
    pub weight: Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecomposeDoc {
    pub value_p: Exact,
    pub total_rational_weight: Exact,
    pub weights: Vec<WeightedTypeDoc>,
    /// Rows whose type class contains the whole support.
    pub witnesses: Vec<RowDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassDoc {
    pub row: RowDoc,
    pub members: Vec<TypeDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassesDoc {
    pub classes: Vec<ClassDoc>,
    /// Rows whose class holds every type given in the problem file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shared_by_given_types: Option<Vec<RowDoc>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExchangeDoc {
    pub budget: usize,
    pub inputs: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepairDoc {
    pub inputs: Vec<TypeDoc>,
    pub outputs: Vec<TypeDoc>,
    /// `order[k]` is the one-based input whose slot became output `k + 1`.
    pub order: Vec<usize>,
    pub exchanges: Vec<ExchangeDoc>,
    pub sum_preserved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainDoc {
    pub direction: Vec<Exact>,
    pub order: Vec<usize>,
    pub values: Vec<Exact>,
    pub chain_patches: Vec<String>,
    pub parts: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyDoc {
    pub agree: bool,
    pub row_test: bool,
    pub oracle: bool,
    pub d_value: Exact,
    pub primal_value: Exact,
    pub dual_value: Exact,
    /// Types whose SARP verdict differs from `Ξa >= 1`.
    pub sarp_exceptions: usize,
    pub types_checked: usize,
    /// Extra seeded random demand systems checked the same way.
    pub random_samples: usize,
    pub disagreements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationDoc {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub determinant: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TumDoc {
    pub rows: usize,
    pub cols: usize,
    pub unimodular: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exhaustive: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<ViolationDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Report {
    Patches(PatchesDoc),
    Xi(XiDoc),
    Test(TestDoc),
    Weight(WeightDoc),
    Decompose(DecomposeDoc),
    Classes(ClassesDoc),
    Repair(RepairDoc),
    Chain(ChainDoc),
    Verify(VerifyDoc),
    Tum(TumDoc),
}

pub fn to_machine(report: &Report) -> String {
    serde_json::to_string_pretty(report).expect("reports always serialize")
}

pub fn parse_report(text: &str) -> Result<Report> {
    serde_json::from_str(text).map_err(|e| Error::Problem {
        field: "report".into(),
        reason: e.to_string(),
    })
}

// Builders: canonical results to display-order documents.

pub fn type_doc(inst: &Instance, a: &BehavioralType) -> TypeDoc {
    let verdict = satisfies_sarp(&inst.layout, a);
    TypeDoc {
        choices: (0..inst.layout.budgets())
            .map(|j| inst.index_map.display(j, a.choice(j)) + 1)
            .collect(),
        rational: verdict.consistent,
        cycle: verdict.cycle.map(|c| c.into_iter().map(|j| j + 1).collect()),
    }
}

pub fn patches_doc(inst: &Instance) -> PatchesDoc {
    let layout = &inst.layout;
    let mut patches = Vec::with_capacity(layout.total());
    for j in 0..layout.budgets() {
        for d in 0..layout.count(j) {
            let c = inst.index_map.canonical(j, d);
            let p = layout.patch(j, c);
            patches.push(PatchEntry {
                label: inst.index_map.label(j, c),
                canonical: c + 1,
                signs: p.signs.to_string(),
                witness: exact(&p.witness),
            });
        }
    }
    PatchesDoc {
        counts: layout.counts(),
        total: layout.total(),
        patches,
    }
}

fn column_labels(inst: &Instance) -> Vec<String> {
    let layout = &inst.layout;
    (0..layout.budgets())
        .flat_map(|j| (0..layout.count(j)).map(move |d| format!("B{}{}", j + 1, d + 1)))
        .collect()
}

pub fn xi_doc(inst: &Instance) -> XiDoc {
    XiDoc {
        columns: column_labels(inst),
        rows: inst
            .xi
            .subfamilies()
            .iter()
            .zip(inst.xi.rows())
            .map(|(s, r)| XiRowDoc {
                subfamily: s.labels(),
                entries: inst.display(&r.iter().map(|&b| u8::from(b)).collect::<Vec<_>>()),
            })
            .collect(),
        extended: exact(&inst.display(inst.xi.extended_row())),
    }
}

pub fn test_doc(report: &RationalityReport) -> TestDoc {
    TestDoc {
        rationalizable: report.rationalizable,
        xi_pi: report
            .xi_products
            .iter()
            .map(|(s, v)| ProductDoc {
                subfamily: s.labels(),
                value: Exact(v.clone()),
            })
            .collect(),
        violations: subfamilies(&report.violations),
        minimal_violations: subfamilies(&report.minimal_violations),
        d_value: Exact(report.d_value.clone()),
        argmin: rows(&report.argmin),
    }
}

pub fn weight_doc(report: &RationalityReport) -> WeightDoc {
    WeightDoc {
        d_value: Exact(report.d_value.clone()),
        argmin: rows(&report.argmin),
    }
}

pub fn decompose_doc(inst: &Instance, d: &Decomposition, verdict: &OptimalityVerdict) -> DecomposeDoc {
    DecomposeDoc {
        value_p: Exact(d.value_p.clone()),
        total_rational_weight: Exact(d.total_rational_weight.clone()),
        weights: d
            .weights
            .iter()
            .map(|(a, w)| WeightedTypeDoc {
                ty: type_doc(inst, a),
                weight: Exact(w.clone()),
            })
            .collect(),
        witnesses: rows(&verdict.witnesses),
    }
}

pub fn classes_doc(inst: &Instance, classes: &[TypeClass], shared: Option<&[RowIndex]>) -> ClassesDoc {
    ClassesDoc {
        classes: classes
            .iter()
            .map(|c| ClassDoc {
                row: c.row.into(),
                members: c.members.iter().map(|a| type_doc(inst, a)).collect(),
            })
            .collect(),
        shared_by_given_types: shared.map(rows),
    }
}

pub fn repair_doc(inst: &Instance, inputs: &[BehavioralType], outcome: &RepairOutcome, sum_preserved: bool) -> RepairDoc {
    RepairDoc {
        inputs: inputs.iter().map(|a| type_doc(inst, a)).collect(),
        outputs: outcome.types.iter().map(|a| type_doc(inst, a)).collect(),
        order: outcome.order.iter().map(|k| k + 1).collect(),
        exchanges: outcome
            .exchanges
            .iter()
            .map(|e| ExchangeDoc {
                budget: e.budget + 1,
                inputs: (e.inputs.0 + 1, e.inputs.1 + 1),
            })
            .collect(),
        sum_preserved,
    }
}

pub fn chain_doc(inst: &Instance, chain: &ChainPartition) -> ChainDoc {
    ChainDoc {
        direction: exact(&chain.direction),
        order: chain.order.iter().map(|j| j + 1).collect(),
        values: exact(&chain.values),
        chain_patches: chain
            .order
            .iter()
            .zip(&chain.chain_patches)
            .map(|(&j, &i)| inst.index_map.label(j, i))
            .collect(),
        parts: chain.parts.iter().map(|p| subfamilies(p)).collect(),
    }
}

pub fn verify_doc(
    certificate: &Certificate,
    sarp_exceptions: usize,
    types_checked: usize,
    random_samples: usize,
    extra_disagreements: Vec<String>,
) -> VerifyDoc {
    let mut disagreements = certificate.disagreements.clone();
    disagreements.extend(extra_disagreements);
    if sarp_exceptions > 0 {
        disagreements.push(format!("{sarp_exceptions} types where SARP and Ξa >= 1 disagree"));
    }
    VerifyDoc {
        agree: disagreements.is_empty(),
        row_test: certificate.row_test,
        oracle: certificate.oracle,
        d_value: Exact(certificate.d_value.clone()),
        primal_value: Exact(certificate.primal_value.clone()),
        dual_value: Exact(certificate.dual_value.clone()),
        sarp_exceptions,
        types_checked,
        random_samples,
        disagreements,
    }
}

pub fn tum_doc(rows: usize, cols: usize, verdict: &TumVerdict) -> TumDoc {
    match verdict {
        TumVerdict::NoViolation {
            max_order,
            exhaustive,
        } => TumDoc {
            rows,
            cols,
            unimodular: true,
            max_order: Some(*max_order),
            exhaustive: Some(*exhaustive),
            violation: None,
        },
        TumVerdict::Violation {
            rows: r,
            cols: c,
            determinant,
        } => TumDoc {
            rows,
            cols,
            unimodular: false,
            max_order: None,
            exhaustive: None,
            violation: Some(ViolationDoc {
                rows: r.iter().map(|k| k + 1).collect(),
                cols: c.iter().map(|k| k + 1).collect(),
                determinant: determinant.to_string(),
            }),
        },
    }
}

fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn join_sets(sets: &[Vec<usize>]) -> String {
    if sets.is_empty() {
        return "none".into();
    }
    sets.iter().map(|s| braces(s)).collect::<Vec<_>>().join(" ")
}

fn verdict(rationalizable: bool) -> &'static str {
    if rationalizable {
        "rationalizable"
    } else {
        "not rationalizable"
    }
}

/// Human-readable rendering.
pub fn to_text(report: &Report) -> String {
    let mut out = String::new();
    let w = &mut out;
    match report {
        Report::Patches(doc) => {
            let _ = writeln!(w, "patches per budget: {} (total {})", join(&doc.counts, " "), doc.total);
            for p in &doc.patches {
                let _ = writeln!(w, "  {:<6} signs {:<8} witness ({})", p.label, p.signs, join(&p.witness, ", "));
            }
        }
        Report::Xi(doc) => {
            let width = doc.columns.iter().map(String::len).max().unwrap_or(1);
            let _ = writeln!(w, "{:<10} {}", "", doc.columns.iter().map(|c| format!("{c:>width$}")).collect::<Vec<_>>().join(" "));
            for r in &doc.rows {
                let cells: Vec<String> = r.entries.iter().map(|e| format!("{e:>width$}")).collect();
                let _ = writeln!(w, "{:<10} {}", braces(&r.subfamily), cells.join(" "));
            }
        }
        Report::Test(doc) => {
            let _ = writeln!(w, "verdict: {}", verdict(doc.rationalizable));
            for p in &doc.xi_pi {
                let mark = if p.value.0 < crate::rational::one() { "  < 1" } else { "" };
                let _ = writeln!(w, "  xi{} . pi = {}{}", braces(&p.subfamily), p.value, mark);
            }
            let _ = writeln!(w, "minimal violations: {}", join_sets(&doc.minimal_violations));
            let _ = writeln!(w, "D(pi) = {} attained by {}", doc.d_value, join(&doc.argmin, " "));
        }
        Report::Weight(doc) => {
            let _ = writeln!(w, "maximal rational weight D(pi) = {}", doc.d_value);
            let _ = writeln!(w, "attained by {}", join(&doc.argmin, " "));
        }
        Report::Decompose(doc) => {
            let _ = writeln!(w, "P(pi) = {}, rational weight in this decomposition = {}", doc.value_p, doc.total_rational_weight);
            for t in &doc.weights {
                let _ = writeln!(w, "  {:>8}  {}", t.weight.to_string(), t.ty);
            }
            let _ = writeln!(w, "support lies in the classes of: {}", if doc.witnesses.is_empty() { "none".into() } else { join(&doc.witnesses, " ") });
        }
        Report::Classes(doc) => {
            for c in &doc.classes {
                let _ = writeln!(w, "class {} ({} types)", c.row, c.members.len());
                for m in &c.members {
                    let _ = writeln!(w, "  {m}");
                }
            }
            if let Some(shared) = &doc.shared_by_given_types {
                let _ = writeln!(w, "given types share: {}", if shared.is_empty() { "none".into() } else { join(shared, " ") });
            }
        }
        Report::Repair(doc) => {
            let _ = writeln!(w, "inputs:");
            for t in &doc.inputs {
                let _ = writeln!(w, "  {t}");
            }
            for e in &doc.exchanges {
                let _ = writeln!(w, "exchange on budget {} between inputs {} and {}", e.budget, e.inputs.0, e.inputs.1);
            }
            let _ = writeln!(w, "outputs (from inputs {}):", join(&doc.order, " "));
            for t in &doc.outputs {
                let _ = writeln!(w, "  {t}");
            }
            let _ = writeln!(w, "sum preserved: {}", doc.sum_preserved);
        }
        Report::Chain(doc) => {
            let _ = writeln!(w, "direction ({})", join(&doc.direction, ", "));
            for (k, ((j, v), patch)) in doc.order.iter().zip(&doc.values).zip(&doc.chain_patches).enumerate() {
                let part = doc.parts.get(k).map(|p| join_sets(p)).unwrap_or_else(|| "-".into());
                let _ = writeln!(w, "  {}. budget {} (p.d = {}) chain patch {}  part: {}", k + 1, j, v, patch, part);
            }
        }
        Report::Verify(doc) => {
            let _ = writeln!(w, "certificate: {}", if doc.agree { "agree" } else { "DISAGREE" });
            let _ = writeln!(w, "row test: {}, rational-type LP: {}", verdict(doc.row_test), verdict(doc.oracle));
            let _ = writeln!(w, "D = {}, primal P = {}, dual = {}", doc.d_value, doc.primal_value, doc.dual_value);
            let _ = writeln!(w, "SARP vs row test on {} types: {} exceptions", doc.types_checked, doc.sarp_exceptions);
            let _ = writeln!(w, "random demand systems checked: {}", doc.random_samples);
            for d in &doc.disagreements {
                let _ = writeln!(w, "  {d}");
            }
        }
        Report::Tum(doc) => {
            let _ = write!(w, "{}x{} matrix: ", doc.rows, doc.cols);
            match &doc.violation {
                None => {
                    let _ = writeln!(
                        w,
                        "no square submatrix up to order {} has determinant outside {{-1,0,1}} ({})",
                        doc.max_order.unwrap_or(0),
                        if doc.exhaustive == Some(true) { "exhaustive" } else { "sampled" }
                    );
                }
                Some(v) => {
                    let _ = writeln!(w, "rows {} cols {} have determinant {}", braces(&v.rows), braces(&v.cols), v.determinant);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn exact_round_trip() {
        let doc = Report::Weight(WeightDoc {
            d_value: Exact(ratio(-7, 12)),
            argmin: vec![RowDoc::Subfamily(vec![1, 2, 3]), RowDoc::Extended("extended".into())],
        });
        let text = to_machine(&doc);
        assert!(text.contains("\"-7/12\""));
        assert_eq!(parse_report(&text).unwrap(), doc);
    }

    #[test]
    fn malformed_rational_in_report_is_rejected() {
        let text = r#"{"command":"weight","d_value":"1/0","argmin":[]}"#;
        assert!(parse_report(text).is_err());
    }
}
