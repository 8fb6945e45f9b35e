//! Acceptance run: one PASS/FAIL line per criterion, exact arithmetic,
//! zero tolerance. Exits nonzero if any criterion fails, except a failure
//! of criterion 11 that matches the documented determinant-two witness.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{load, q, qs};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rum_dual::analysis::{
    cross_validate, exchange_repair, choice_counts, primal_decompose, random_demand, random_type,
    shared_classes, test_rationalizable, StochasticDemand,
};
use rum_dual::problem::Instance;
use rum_dual::rational::{int, ratio, Rational};
use rum_dual::revealed::{enumerate_types, satisfies_sarp, BehavioralType, DEFAULT_TYPE_CAP};
use rum_dual::xi::{chain_partition, check_total_unimodularity, determinant, RowIndex, Subfamily, TumVerdict};

const SEED: u64 = 20_240_601;
const RANDOM_DEMANDS: usize = 200;
const SAMPLES: usize = 50;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn row(labels: &[usize]) -> Subfamily {
    Subfamily::from_labels(labels)
}

/// Rows in the order {1,2,3}, {1,2}, {2,3}, {1,3}.
fn listed_rows() -> [Subfamily; 4] {
    [row(&[1, 2, 3]), row(&[1, 2]), row(&[2, 3]), row(&[1, 3])]
}

fn shown_xi(inst: &Instance) -> Vec<Vec<u8>> {
    listed_rows()
        .iter()
        .map(|s| {
            let bits: Vec<u8> = inst.xi.row(*s).unwrap().iter().map(|&b| u8::from(b)).collect();
            inst.display(&bits)
        })
        .collect()
}

fn products(inst: &Instance, pi: &StochasticDemand) -> Vec<Rational> {
    let r = test_rationalizable(&inst.layout, &inst.xi, pi).unwrap();
    listed_rows().iter().map(|s| r.product(*s).unwrap().clone()).collect()
}

fn display_type(inst: &Instance, bits: &[u8]) -> BehavioralType {
    let canonical = inst.index_map.flat_from_display(&inst.layout, bits);
    BehavioralType::from_binary(&inst.layout, &canonical).unwrap()
}

fn c1() -> Outcome {
    let inst = load("example1");
    ensure(inst.layout.counts() == [3, 3, 3], || format!("patch counts {:?}", inst.layout.counts()))?;
    let expected: Vec<Vec<u8>> = vec![
        vec![1, 0, 0, 0, 1, 0, 0, 0, 1],
        vec![1, 0, 0, 0, 1, 1, 0, 0, 0],
        vec![0, 0, 0, 1, 1, 0, 0, 0, 1],
        vec![1, 1, 0, 0, 0, 0, 0, 1, 1],
    ];
    let got = shown_xi(&inst);
    ensure(got == expected, || format!("matrix {got:?}"))?;
    Ok("3 patches per budget; 4x9 matrix matches entrywise".into())
}

fn c2() -> Outcome {
    let inst = load("example2");
    let pi = inst.pi.as_ref().unwrap();
    let got = products(&inst, pi);
    ensure(got == qs(&["1", "1", "1", "4/3"]), || format!("products {got:?}"))?;
    let r = test_rationalizable(&inst.layout, &inst.xi, pi).unwrap();
    ensure(r.rationalizable, || "verdict not rationalizable".into())?;
    Ok("Ξπ = (1,1,1,4/3), rationalizable".into())
}

fn c3() -> Outcome {
    let inst = load("example3");
    let pi = inst.pi.as_ref().unwrap();
    let got = products(&inst, pi);
    ensure(got == qs(&["2/5", "7/10", "7/10", "9/5"]), || format!("products {got:?}"))?;
    let r = test_rationalizable(&inst.layout, &inst.xi, pi).unwrap();
    ensure(!r.rationalizable, || "verdict rationalizable".into())?;
    ensure(r.minimal_violations == [row(&[1, 2]), row(&[2, 3])], || {
        format!("minimal violations {:?}", r.minimal_violations)
    })?;
    ensure(r.d_value == q("2/5"), || format!("D = {}", r.d_value))?;
    ensure(r.argmin == [RowIndex::Subfamily(row(&[1, 2, 3]))], || format!("argmin {:?}", r.argmin))?;

    let space = enumerate_types(&inst.layout, DEFAULT_TYPE_CAP).map_err(|e| e.to_string())?;
    let d = primal_decompose(&inst.layout, &space, pi).map_err(|e| e.to_string())?;
    ensure(d.value_p == q("2/5"), || format!("primal optimum {}", d.value_p))?;
    let mut rebuilt = vec![int(0); inst.layout.total()];
    for (a, w) in &d.weights {
        for j in 0..inst.layout.budgets() {
            rebuilt[inst.layout.flat(j, a.choice(j))] += w;
        }
    }
    ensure(rebuilt == pi.as_slice(), || "τ does not reconstruct π".into())?;
    Ok(format!(
        "Ξπ = (2/5,7/10,7/10,9/5); minimal {{1,2}} {{2,3}}; D = P = 2/5 by {{1,2,3}}; τ on {} types reconstructs π",
        d.weights.len()
    ))
}

fn c4() -> Outcome {
    let inst = load("example4");
    ensure(inst.layout.total() == 12, || format!("I = {}", inst.layout.total()))?;
    let expected: Vec<Vec<u8>> = vec![
        vec![0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1],
        vec![0, 0, 1, 1, 0, 1, 0, 1, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 0, 0, 1, 1, 0, 1, 0, 1],
        vec![0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1, 1],
    ];
    let got = shown_xi(&inst);
    ensure(got == expected, || format!("matrix {got:?}"))?;
    let pi = inst.pi.as_ref().unwrap();
    let got = products(&inst, pi);
    ensure(got == qs(&["0", "1", "1", "1"]), || format!("products {got:?}"))?;
    let r = test_rationalizable(&inst.layout, &inst.xi, pi).unwrap();
    ensure(r.d_value == q("0"), || format!("D = {}", r.d_value))?;
    ensure(r.minimal_violations == [row(&[1, 2, 3])], || format!("minimal {:?}", r.minimal_violations))?;
    ensure(
        r.xi_products.iter().filter(|(s, _)| s.len() == 2).all(|(_, v)| *v >= int(1)),
        || "a pair row is violated".into(),
    )?;
    let space = enumerate_types(&inst.layout, DEFAULT_TYPE_CAP).map_err(|e| e.to_string())?;
    let d = primal_decompose(&inst.layout, &space, pi).map_err(|e| e.to_string())?;
    ensure(d.value_p == q("0"), || format!("P = {}", d.value_p))?;
    Ok("I = 12; 4x12 matrix matches; Ξπ = (0,1,1,1); D = P = 0; minimal {1,2,3}; pair rows hold".into())
}

fn c5() -> Outcome {
    let inst = load("example5");
    ensure(
        inst.types.iter().all(|a| !satisfies_sarp(&inst.layout, a).consistent),
        || "an input type is rational".into(),
    )?;
    let out = exchange_repair(&inst.layout, &inst.xi, &inst.types).map_err(|e| e.to_string())?;
    let expected = [
        display_type(&inst, &[1, 0, 0, 1, 0, 0, 1, 0, 0]),
        display_type(&inst, &[0, 0, 1, 0, 0, 1, 0, 0, 1]),
    ];
    ensure(out.types == expected, || format!("repaired {:?}", out.types))?;
    ensure(out.types.iter().all(|a| satisfies_sarp(&inst.layout, a).consistent), || "output irrational".into())?;
    ensure(
        choice_counts(&inst.layout, &out.types) == choice_counts(&inst.layout, &inst.types),
        || "sum changed".into(),
    )?;
    let pi = inst.pi.as_ref().unwrap();
    ensure(test_rationalizable(&inst.layout, &inst.xi, pi).unwrap().rationalizable, || "midpoint not rationalizable".into())?;
    let space = enumerate_types(&inst.layout, DEFAULT_TYPE_CAP).map_err(|e| e.to_string())?;
    let d = primal_decompose(&inst.layout, &space, pi).map_err(|e| e.to_string())?;
    ensure(d.value_p == q("1"), || format!("P = {}", d.value_p))?;
    Ok("both outputs rational, sum preserved; midpoint rationalizable with P = 1".into())
}

fn c6() -> Outcome {
    let mut notes = Vec::new();
    for (name, size) in [("example1", 27), ("example4", 64)] {
        let inst = load(name);
        let space = enumerate_types(&inst.layout, DEFAULT_TYPE_CAP).map_err(|e| e.to_string())?;
        ensure(space.len() == size, || format!("{name}: {} types", space.len()))?;
        let exceptions = space
            .all
            .iter()
            .zip(&space.rational)
            .filter(|(a, &r)| inst.xi.covers(&inst.layout, a) != r)
            .count();
        ensure(exceptions == 0, || format!("{name}: {exceptions} exceptions"))?;
        notes.push(format!("{size} types, {} rational", space.rational_count()));
    }
    Ok(format!("{}; zero exceptions", notes.join(" / ")))
}

/// Seeded mixtures of three rational types with random weights; these are
/// rationalizable by construction.
fn rational_mixtures(inst: &Instance, rng: &mut ChaCha8Rng, count: usize) -> Vec<StochasticDemand> {
    let space = enumerate_types(&inst.layout, DEFAULT_TYPE_CAP).unwrap();
    let rational: Vec<BehavioralType> = space.rational_types().cloned().collect();
    (0..count)
        .map(|_| {
            let w: Vec<i64> = (0..3).map(|_| rng.gen_range(1..=9)).collect();
            let total: i64 = w.iter().sum();
            let parts: Vec<(BehavioralType, Rational)> = w
                .iter()
                .map(|&x| (rational[rng.gen_range(0..rational.len())].clone(), ratio(x, total)))
                .collect();
            StochasticDemand::mixture(&inst.layout, &parts).unwrap()
        })
        .collect()
}

/// Per family: the worked-example demand systems, seeded random ones and
/// seeded rational mixtures.
fn demand_sets() -> Vec<(Instance, Vec<StochasticDemand>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = Vec::new();
    let one = load("example1");
    let mut pis: Vec<StochasticDemand> = ["example2", "example3", "example5"]
        .iter()
        .map(|n| load(n).pi.unwrap())
        .collect();
    pis.extend((0..RANDOM_DEMANDS).map(|_| random_demand(&one.layout, &mut rng)));
    pis.extend(rational_mixtures(&one, &mut rng, SAMPLES));
    out.push((one, pis));
    let four = load("example4");
    let mut pis = vec![four.pi.clone().unwrap()];
    pis.extend((0..RANDOM_DEMANDS).map(|_| random_demand(&four.layout, &mut rng)));
    pis.extend(rational_mixtures(&four, &mut rng, SAMPLES));
    out.push((four, pis));
    out
}

fn c7_c8(sets: &[(Instance, Vec<StochasticDemand>)]) -> (Outcome, Outcome) {
    let mut verdicts = 0;
    let mut verdict_fail = Vec::new();
    let mut value_fail = Vec::new();
    let mut irrational = 0;
    for (inst, pis) in sets {
        let space = match enumerate_types(&inst.layout, DEFAULT_TYPE_CAP) {
            Ok(s) => s,
            Err(e) => return (Err(e.to_string()), Err(e.to_string())),
        };
        for (k, pi) in pis.iter().enumerate() {
            let c = match cross_validate(&inst.layout, &inst.xi, &space, pi) {
                Ok(c) => c,
                Err(e) => return (Err(e.to_string()), Err(e.to_string())),
            };
            verdicts += 1;
            if !c.row_test {
                irrational += 1;
            }
            if c.row_test != c.oracle {
                verdict_fail.push(format!("π #{k}"));
            }
            if c.d_value != c.primal_value || c.d_value != c.dual_value {
                value_fail.push(format!("π #{k}: D {} P {} dual {}", c.d_value, c.primal_value, c.dual_value));
            }
        }
    }
    let c7 = if verdict_fail.is_empty() {
        Ok(format!("{verdicts} demand systems ({irrational} not rationalizable), zero disagreements"))
    } else {
        Err(format!("{} disagreements: {}", verdict_fail.len(), verdict_fail.join(", ")))
    };
    let c8 = if value_fail.is_empty() {
        Ok(format!("{verdicts} demand systems: row minimum = primal = dual exactly"))
    } else {
        Err(format!("{} disagreements: {}", value_fail.len(), value_fail.join("; ")))
    };
    (c7, c8)
}

fn c9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut checks = 0;
    for name in ["example1", "example4"] {
        let inst = load(name);
        let chain = chain_partition(&inst.family, &inst.layout).map_err(|e| e.to_string())?;
        let all = inst.xi.subfamilies().to_vec();
        ensure(chain.parts.len() == inst.layout.budgets() - 1, || format!("{name}: part count"))?;
        let mut covered: Vec<Subfamily> = chain.parts.iter().flatten().copied().collect();
        let total = covered.len();
        covered.sort();
        covered.dedup();
        ensure(covered == all && total == all.len(), || format!("{name}: parts do not partition"))?;
        for _ in 0..SAMPLES {
            let u: Vec<Rational> = all
                .iter()
                .map(|_| ratio(rng.gen_range(-20..=20), rng.gen_range(1..=12)))
                .collect();
            for (k, part) in chain.parts.iter().enumerate() {
                let col = chain.chain_coordinate(&inst.layout, k);
                let lhs: Rational = all
                    .iter()
                    .zip(&u)
                    .filter(|(s, _)| inst.xi.row(**s).unwrap()[col])
                    .map(|(_, w)| w.clone())
                    .sum();
                let rhs: Rational = all
                    .iter()
                    .zip(&u)
                    .filter(|(s, _)| part.contains(s))
                    .map(|(_, w)| w.clone())
                    .sum();
                ensure(lhs == rhs, || format!("{name}: identity fails at part {}", k + 1))?;
            }
            checks += 1;
        }
    }
    Ok(format!("partition verified on both families; identity holds for {checks} random u"))
}

fn c10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);
    let mut counted = [0usize; 2];
    for name in ["example1", "example4"] {
        let inst = load(name);
        let d_type = |a: &BehavioralType| {
            test_rationalizable(&inst.layout, &inst.xi, &StochasticDemand::from_type(&inst.layout, a))
                .unwrap()
                .d_value
        };
        let mut found = 0;
        let mut draws = 0;
        while found < SAMPLES {
            draws += 1;
            ensure(draws < 100_000, || format!("{name}: too few tuples without a common class"))?;
            let m = if draws % 2 == 0 { 2 } else { 3 };
            let types: Vec<BehavioralType> = (0..m).map(|_| random_type(&inst.layout, &mut rng)).collect();
            if !shared_classes(&inst.layout, &inst.xi, &types).is_empty() {
                continue;
            }
            let mix = StochasticDemand::uniform(&inst.layout, &types).unwrap();
            let d_mix = test_rationalizable(&inst.layout, &inst.xi, &mix).unwrap().d_value;
            let mean = types.iter().map(&d_type).sum::<Rational>() / int(m as i64);
            ensure(d_mix > mean, || format!("{name}: D(mix) {d_mix} <= mean {mean}"))?;
            counted[m - 2] += 1;
            found += 1;
        }
    }
    Ok(format!(
        "{} tuples (m=2: {}, m=3: {}): D(mixture) > mean D strictly",
        counted[0] + counted[1],
        counted[0],
        counted[1]
    ))
}

enum Verdict {
    Pass(String),
    Fail(String),
    /// Fails exactly as documented in the decisions ledger and README.
    Conflict(String),
}

fn c11() -> Verdict {
    let triangle = vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]];
    let mut notes = Vec::new();
    let mut documented = true;
    for name in ["example1", "example4"] {
        let inst = load(name);
        let m = inst.xi.as_integers();
        let full = m.len().min(m[0].len());
        match check_total_unimodularity(&m, full, 0) {
            TumVerdict::NoViolation { exhaustive, .. } => {
                notes.push(format!("{name}: no violation (exhaustive {exhaustive})"));
                documented = false;
            }
            TumVerdict::Violation { rows, cols, determinant: det } => {
                let sub: Vec<Vec<i64>> = rows.iter().map(|&r| cols.iter().map(|&c| m[r][c]).collect()).collect();
                let pair_rows = rows.iter().all(|&r| inst.xi.subfamilies()[r].len() == 2);
                let is_triangle = determinant(&sub).magnitude() == determinant(&triangle).magnitude();
                documented &= pair_rows && is_triangle && rows.len() == 3;
                let cols_shown: Vec<String> = cols.iter().map(|&c| {
                    let (j, i) = inst.layout.locate(c);
                    inst.index_map.label(j, i)
                }).collect();
                let rows_shown: Vec<String> = rows.iter().map(|&r| inst.xi.subfamilies()[r].to_string()).collect();
                notes.push(format!(
                    "{name}: rows {} x cols {} have determinant {det}",
                    rows_shown.join(" "),
                    cols_shown.join(" ")
                ));
            }
        }
    }
    let detail = notes.join("; ");
    if notes.iter().all(|n| n.contains("no violation")) {
        Verdict::Pass(detail)
    } else if documented {
        Verdict::Conflict(format!(
            "{detail} — the matrices are not totally unimodular, so the criterion cannot hold"
        ))
    } else {
        Verdict::Fail(detail)
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let sets = demand_sets();
    let (r7, r8) = c7_c8(&sets);
    let results: Vec<(usize, &str, Verdict)> = vec![
        (1, "two-good family: patches and matrix", c1().into()),
        (2, "uniform demand: row products and verdict", c2().into()),
        (3, "pair-violation demand: products, minimal sets, maximal weight", c3().into()),
        (4, "three-good family: matrix, products, zero rational weight", c4().into()),
        (5, "exchange repair of an irrational pair", c5().into()),
        (6, "SARP iff every row covered, all types", c6().into()),
        (7, "row test vs LP feasibility over rational types", r7.into()),
        (8, "row minimum vs primal and dual optima", r8.into()),
        (9, "chain partition and indicator identity", c9().into()),
        (10, "strict gain from mixing types without a common class", c10().into()),
        (11, "total unimodularity probe on both example matrices", c11()),
    ];

    let mut hard_failures = 0;
    for (id, name, verdict) in &results {
        match verdict {
            Verdict::Pass(d) => println!("criterion {id:>2}: PASS  {name} — {d}"),
            Verdict::Fail(d) => {
                hard_failures += 1;
                println!("criterion {id:>2}: FAIL  {name} — {d}");
            }
            Verdict::Conflict(d) => println!("criterion {id:>2}: FAIL  {name} — {d} (documented conflict)"),
        }
    }
    let passed = results.iter().filter(|(_, _, v)| matches!(v, Verdict::Pass(_))).count();
    println!(
        "acceptance: {passed}/{} passed, {hard_failures} unexpected failures, {:.1}s",
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if hard_failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

impl From<Outcome> for Verdict {
    fn from(o: Outcome) -> Self {
        match o {
            Ok(d) => Verdict::Pass(d),
            Err(d) => Verdict::Fail(d),
        }
    }
}
