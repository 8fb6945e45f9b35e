//! The worked examples, reproduced through the problem files in
//! `problems/` and checked against independent oracles.

mod common;

use common::{all_profiles, family, load, q, qs, witness_sarp};
use rum_dual::analysis::{
    check_decomposition_optimality, cross_validate, exchange_repair, primal_decompose,
    shared_classes, solve_dual, test_rationalizable, type_classes, Decomposition, StochasticDemand,
};
use rum_dual::geometry::enumerate_patches;
use rum_dual::problem::Instance;
use rum_dual::revealed::{enumerate_types, satisfies_sarp, BehavioralType, DEFAULT_TYPE_CAP};
use rum_dual::xi::{chain_partition, check_total_unimodularity, determinant, RowIndex, Subfamily};

fn row(labels: &[usize]) -> Subfamily {
    Subfamily::from_labels(labels)
}

/// Rows listed in the order {1,2,3}, {1,2}, {2,3}, {1,3}, columns in
/// display order.
fn assert_xi(inst: &Instance, expected: [&[u8]; 4]) {
    let order = [row(&[1, 2, 3]), row(&[1, 2]), row(&[2, 3]), row(&[1, 3])];
    for (s, want) in order.iter().zip(expected) {
        let bits: Vec<u8> = inst.xi.row(*s).unwrap().iter().map(|&b| u8::from(b)).collect();
        assert_eq!(inst.display(&bits), want, "row {s}");
    }
}

fn display_type(inst: &Instance, bits: &[u8]) -> BehavioralType {
    let canonical = inst.index_map.flat_from_display(&inst.layout, bits);
    BehavioralType::from_binary(&inst.layout, &canonical).unwrap()
}

fn products_in_listed_order(inst: &Instance, pi: &StochasticDemand) -> Vec<rum_dual::Rational> {
    let r = test_rationalizable(&inst.layout, &inst.xi, pi).unwrap();
    [row(&[1, 2, 3]), row(&[1, 2]), row(&[2, 3]), row(&[1, 3])]
        .iter()
        .map(|s| r.product(*s).unwrap().clone())
        .collect()
}

#[test]
fn two_good_family_matrix() {
    let inst = load("example1");
    assert_eq!(inst.layout.counts(), vec![3, 3, 3]);
    assert_xi(
        &inst,
        [
            &[1, 0, 0, 0, 1, 0, 0, 0, 1],
            &[1, 0, 0, 0, 1, 1, 0, 0, 0],
            &[0, 0, 0, 1, 1, 0, 0, 0, 1],
            &[1, 1, 0, 0, 0, 0, 0, 1, 1],
        ],
    );
}

#[test]
fn two_good_family_sarp_count_matches_witness_oracle() {
    let inst = load("example1");
    let fam = family(&[&[4, 1], &[2, 2], &[1, 4]]);
    let space = enumerate_types(&inst.layout, DEFAULT_TYPE_CAP).unwrap();
    assert_eq!(space.len(), 27);
    for (a, &r) in space.all.iter().zip(&space.rational) {
        assert_eq!(witness_sarp(&fam, &inst.layout, a.choices()), r, "{a}");
    }
    // Frozen from the oracle above.
    assert_eq!(space.rational_count(), 14);
}

#[test]
fn cycle_hidden_from_the_full_row() {
    // (0,1,0;1,0,0;0,0,1): the full row is satisfied, the pair row is not.
    let inst = load("example1");
    let a = display_type(&inst, &[0, 1, 0, 1, 0, 0, 0, 0, 1]);
    assert_eq!(inst.xi.count_undominated(&inst.layout, row(&[1, 2, 3]), &a), 1);
    assert_eq!(inst.xi.count_undominated(&inst.layout, row(&[1, 2]), &a), 0);
    let verdict = satisfies_sarp(&inst.layout, &a);
    assert!(!verdict.consistent);
    let mut cycle = verdict.cycle.unwrap();
    cycle.sort();
    assert_eq!(cycle, vec![0, 1]);
}

#[test]
fn uniform_demand_is_rationalizable() {
    let inst = load("example2");
    let pi = inst.pi.as_ref().unwrap();
    assert_eq!(products_in_listed_order(&inst, pi), qs(&["1", "1", "1", "4/3"]));
    assert!(test_rationalizable(&inst.layout, &inst.xi, pi).unwrap().rationalizable);
}

#[test]
fn pair_violations_and_maximal_weight() {
    let inst = load("example3");
    let pi = inst.pi.as_ref().unwrap();
    assert_eq!(products_in_listed_order(&inst, pi), qs(&["2/5", "7/10", "7/10", "9/5"]));
    let r = test_rationalizable(&inst.layout, &inst.xi, pi).unwrap();
    assert!(!r.rationalizable);
    assert_eq!(r.minimal_violations, vec![row(&[1, 2]), row(&[2, 3])]);
    assert_eq!(r.d_value, q("2/5"));
    assert_eq!(r.argmin, vec![RowIndex::Subfamily(row(&[1, 2, 3]))]);

    let space = enumerate_types(&inst.layout, DEFAULT_TYPE_CAP).unwrap();
    let d = primal_decompose(&inst.layout, &space, pi).unwrap();
    assert_eq!(d.value_p, q("2/5"));
    let (dual, _) = solve_dual(&inst.layout, &space, pi).unwrap();
    assert_eq!(dual, q("2/5"));
}

#[test]
fn stated_decompositions_of_the_pair_violation_demand() {
    let inst = load("example3");
    let pi = inst.pi.as_ref().unwrap();
    let space = enumerate_types(&inst.layout, DEFAULT_TYPE_CAP).unwrap();
    let classes = type_classes(&inst.layout, &inst.xi, &space);
    let value_p = q("2/5");

    // a1..a5 with weights 1/10, 2/10, 1/10, 3/10, 3/10: optimal.
    let optimal: Vec<_> = inst.types.iter().cloned().zip(qs(&["1/10", "2/10", "1/10", "3/10", "3/10"])).collect();
    let d = Decomposition::from_weights(&inst.layout, pi, optimal, value_p.clone()).unwrap();
    assert_eq!(d.total_rational_weight, q("2/5"));
    let rational: Vec<bool> = inst.types.iter().map(|a| satisfies_sarp(&inst.layout, a).consistent).collect();
    assert_eq!(rational, vec![true, true, true, false, false]);
    let v = check_decomposition_optimality(&d, &classes);
    assert!(v.optimal);
    assert!(v.witnesses.contains(&RowIndex::Subfamily(row(&[1, 2, 3]))));

    // The alternative with weight 1/5 on rational types is not optimal.
    let alt = vec![
        (display_type(&inst, &[1, 0, 0, 0, 1, 0, 0, 0, 1]), q("1/10")),
        (inst.types[1].clone(), q("1/10")),
        (display_type(&inst, &[0, 0, 1, 0, 0, 1, 1, 0, 0]), q("1/10")),
        (inst.types[3].clone(), q("4/10")),
        (inst.types[4].clone(), q("3/10")),
    ];
    let d = Decomposition::from_weights(&inst.layout, pi, alt, value_p).unwrap();
    assert_eq!(d.total_rational_weight, q("1/5"));
    assert!(!check_decomposition_optimality(&d, &classes).optimal);
}

#[test]
fn three_good_family_is_warp_consistent_but_irrational() {
    let inst = load("example4");
    assert_eq!(inst.layout.total(), 12);
    assert_xi(
        &inst,
        [
            &[0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1],
            &[0, 0, 1, 1, 0, 1, 0, 1, 0, 0, 0, 0],
            &[0, 0, 0, 0, 0, 0, 1, 1, 0, 1, 0, 1],
            &[0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1, 1],
        ],
    );
    let pi = inst.pi.as_ref().unwrap();
    assert_eq!(products_in_listed_order(&inst, pi), qs(&["0", "1", "1", "1"]));
    let r = test_rationalizable(&inst.layout, &inst.xi, pi).unwrap();
    assert_eq!(r.minimal_violations, vec![row(&[1, 2, 3])]);
    assert_eq!(r.d_value, q("0"));

    let space = enumerate_types(&inst.layout, DEFAULT_TYPE_CAP).unwrap();
    let c = cross_validate(&inst.layout, &inst.xi, &space, pi).unwrap();
    assert!(c.agree());
    assert_eq!(c.primal_value, q("0"));

    // Midpoint of the two stated types, both WARP-consistent, both in the
    // class of {1,2,3}.
    for a in &inst.types {
        assert!(!satisfies_sarp(&inst.layout, a).consistent);
        for pair in [row(&[1, 2]), row(&[1, 3]), row(&[2, 3])] {
            assert!(inst.xi.count_undominated(&inst.layout, pair, a) >= 1);
        }
    }
    assert!(shared_classes(&inst.layout, &inst.xi, &inst.types).contains(&RowIndex::Subfamily(row(&[1, 2, 3]))));
    assert_eq!(&StochasticDemand::uniform(&inst.layout, &inst.types).unwrap(), pi);
}

#[test]
fn exchange_repair_of_an_irrational_pair() {
    let inst = load("example5");
    let pi = inst.pi.as_ref().unwrap();
    assert!(inst.types.iter().all(|a| !satisfies_sarp(&inst.layout, a).consistent));
    assert!(shared_classes(&inst.layout, &inst.xi, &inst.types).is_empty());

    let out = exchange_repair(&inst.layout, &inst.xi, &inst.types).unwrap();
    let shown: Vec<Vec<u8>> = out.types.iter().map(|a| inst.display_type(a)).collect();
    assert_eq!(shown, vec![vec![1, 0, 0, 1, 0, 0, 1, 0, 0], vec![0, 0, 1, 0, 0, 1, 0, 0, 1]]);
    assert!(out.types.iter().all(|a| satisfies_sarp(&inst.layout, a).consistent));
    assert_eq!(&StochasticDemand::uniform(&inst.layout, &out.types).unwrap(), pi);

    assert!(test_rationalizable(&inst.layout, &inst.xi, pi).unwrap().rationalizable);
    let space = enumerate_types(&inst.layout, DEFAULT_TYPE_CAP).unwrap();
    assert_eq!(primal_decompose(&inst.layout, &space, pi).unwrap().value_p, q("1"));
}

#[test]
fn chain_along_the_first_axis() {
    let inst = load("example1");
    let chain = chain_partition(&inst.family, &inst.layout).unwrap();
    assert_eq!(chain.direction, qs(&["1", "0"]));
    assert_eq!(chain.order, vec![2, 1, 0]);
    let labels: Vec<String> = chain
        .order
        .iter()
        .zip(&chain.chain_patches)
        .map(|(&j, &i)| inst.index_map.label(j, i))
        .collect();
    assert_eq!(labels, ["B33", "B23", "B13"]);
    assert_eq!(chain.parts[0], vec![row(&[1, 3]), row(&[2, 3]), row(&[1, 2, 3])]);
    assert_eq!(chain.parts[1], vec![row(&[1, 2])]);
}

#[test]
fn chain_needs_a_mixed_direction_for_symmetric_prices() {
    // No coordinate separates all three price vectors of the three-good
    // family, so a later direction is used.
    let inst = load("example4");
    let chain = chain_partition(&inst.family, &inst.layout).unwrap();
    let distinct = chain.values.windows(2).all(|w| w[0] < w[1]);
    assert!(distinct);
    assert_eq!(chain.parts.iter().map(Vec::len).sum::<usize>(), 4);
}

#[test]
fn printed_matrices_have_a_determinant_two_submatrix() {
    // Pair rows on the three columns undominated in {1,2,3}.
    let triangle = vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]];
    assert_eq!(determinant(&triangle), 2.into());
    for name in ["example1", "example4"] {
        let inst = load(name);
        let m = inst.xi.as_integers();
        let v = check_total_unimodularity(&m, 4, 0);
        assert!(!v.is_unimodular(), "{name}");
    }
}

#[test]
fn patch_enumeration_is_stable_under_reparsing() {
    let inst = load("example4");
    let again = enumerate_patches(&inst.family).unwrap();
    assert_eq!(again, inst.layout);
    let profiles = all_profiles(&inst.layout.counts());
    assert_eq!(profiles.len(), 64);
}
