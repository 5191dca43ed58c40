//! Polarization: from power-sum form to multilinear trace form.
//!
//! A pure identity of weight N polarizes into a combination of set-partition
//! trace monomials in N independent matrix variables. The coefficient of
//! each shape is the original coefficient times the shape's symmetry weight,
//! and the all-singletons term carries N! times the coefficient of p_1^N.

use specsym::forge::{build_chain, ChainBudget};
use specsym::multilinear::{
    expand_multilinear, multilinearize, trace_count_report, verify_multilinear,
};
use specsym::WeightVector;

fn main() {
    let chain = build_chain(2, &ChainBudget::default()).unwrap();

    // The arity-1 pure identity p1^2 - d1*p2 polarizes into two shapes.
    let small = chain.level(1).unwrap().pure.clone();
    let poly = multilinearize(&small, 5).unwrap();
    println!("source: {small}");
    println!("polarized: {poly}");
    println!("singleton coefficient: {}", poly.singleton_coefficient());

    let d1 = WeightVector::symbolic(1).unwrap();
    assert!(verify_multilinear(&poly, &d1).unwrap());
    println!("vanishes in 2 independent matrix variables: yes");

    // The arity-2 pure identity has weight 5, so five matrix variables.
    let big = chain.pure().clone();
    let poly5 = multilinearize(&big, 5).unwrap();
    println!("\nsource weight {}: {} shapes", big.weight(), poly5.terms().count());
    println!("singleton coefficient: {}", poly5.singleton_coefficient());

    let d2 = WeightVector::symbolic(2).unwrap();
    let expanded = expand_multilinear(&poly5, &d2).unwrap();
    println!("symbolic expansion is zero: {}", expanded.is_zero());
    assert!(expanded.is_zero());

    // How many trace factors each shape contributes.
    let counts = trace_count_report(&poly5);
    println!("trace factors per monomial: {} to {}", counts.min_traces, counts.max_traces);
    for (shape, traces, count) in counts.rows.iter().take(3) {
        println!("  shape {shape}: {traces} traces, {count} set partitions");
    }
}
