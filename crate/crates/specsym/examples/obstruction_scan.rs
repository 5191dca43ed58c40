//! Zero-sum weight subsets and what they forbid.
//!
//! A subset of weights summing to zero lets the slots be filled so that
//! every specialized power sum vanishes at once. No monic mixed identity
//! can survive that, so power-sum reduction is unavailable at such weights.
//! The chain's leading coefficient sees this coming: it vanishes on every
//! zero-sum locus.

use specsym::forge::{build_chain, reduce_power, ChainBudget};
use specsym::integrality::{
    demonstrate_obstruction, find_zero_subset, leading_vanishes_on_zero_sum_loci,
};
use specsym::WeightVector;

fn main() {
    // Scan a few weight vectors for zero-sum subsets.
    for entries in [vec![2, 3], vec![1, -1], vec![1, 2, -3], vec![1, 2, 4]] {
        let d = WeightVector::from_ints(&entries).unwrap();
        match find_zero_subset(&d).unwrap() {
            Some(subset) => println!("{d}: zero-sum subset {subset:?}"),
            None => println!("{d}: no zero-sum subset"),
        }
    }

    // Demonstrate the collapse at (1,2,-3): all slots in the subset get the
    // same value, the rest get zero, and p_1..p_10 vanish simultaneously.
    let d = WeightVector::from_ints(&[1, 2, -3]).unwrap();
    let demo = demonstrate_obstruction(&d, &[1, 2, 3], 10).unwrap();
    println!(
        "\n{d}: subset {:?}, p_1..p_{} all vanish = {}",
        demo.subset,
        demo.power_cap,
        demo.all_powers_vanish()
    );
    assert!(demo.all_powers_vanish());

    // The chain's leading coefficient vanishes on every zero-sum locus.
    let chain = build_chain(2, &ChainBudget::default()).unwrap();
    let loci = leading_vanishes_on_zero_sum_loci(chain.mixed()).unwrap();
    println!("\nleading coefficient of the arity-2 chain on each locus:");
    for (subset, vanished) in &loci {
        println!("  d restricted to sum({subset:?}) = 0: vanishes = {vanished}");
        assert!(vanished);
    }

    // And indeed reduction is refused at obstructed weights.
    let bad = WeightVector::from_ints(&[1, -1]).unwrap();
    match reduce_power(6, &bad, chain.mixed()) {
        Err(e) => println!("\nreduction at {bad} correctly refused: {e}"),
        Ok(_) => unreachable!("reduction must fail at obstructed weights"),
    }
}
