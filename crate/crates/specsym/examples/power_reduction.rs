//! Rewriting high power sums in terms of low ones.
//!
//! At numeric weights where the chain's leading coefficient survives, the
//! monic mixed identity turns into a rewrite rule: any p_n with n above the
//! identity's weight reduces to an exact polynomial in p_1..p_M. Each
//! result is checked by expanding it back into the slot variables.

use specsym::forge::{build_chain, reduce_power, ChainBudget};
use specsym::symfun::power_sum;
use specsym::WeightVector;

fn main() {
    let chain = build_chain(2, &ChainBudget::default()).unwrap();
    let relation = chain.mixed();
    println!("relation: arity {}, weight {}", relation.arity(), relation.weight());

    let d = WeightVector::from_ints(&[2, 3]).unwrap();
    for n in 5..=8 {
        let expr = reduce_power(n, &d, relation).unwrap();
        println!("\n{expr}");
        // Exactness check: the rewritten form expands to the same
        // polynomial in the slot variables as the power sum itself.
        assert_eq!(expr.expand().unwrap(), power_sum(&d, n).unwrap());
        println!("  parts stay within 1..={}", expr.max_part());
        assert!(expr.max_part() <= relation.weight());
    }

    // At weights with a zero-sum subset the leading coefficient dies and
    // the rewrite rule with it.
    let blocked = WeightVector::from_ints(&[1, -1]).unwrap();
    match reduce_power(5, &blocked, relation) {
        Err(e) => println!("\nat {blocked}: {e}"),
        Ok(_) => unreachable!("reduction must fail at obstructed weights"),
    }
}
