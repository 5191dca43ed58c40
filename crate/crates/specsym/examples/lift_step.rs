//! The lift: one arity-k pure identity, k+1 mixed root identities.
//!
//! Lifting inserts a new slot at position `i`: coefficients forget the old
//! weight `d_i` (the remaining ones renumber around it) and every letter
//! `p_n` becomes `p_n - d_i*t^n`. The result vanishes whenever the
//! placeholder `t` is bound to slot `i`, which is exactly what makes the
//! product over all positions a mixed identity one arity up.

use specsym::forge::{base_pure_k1, lift, lift_is_root_identity, mixed_from_pure, ChainBudget};
use specsym::symfun::eval_mixed_slot;
use specsym::WeightVector;

fn main() {
    let seed = base_pure_k1();
    println!("arity-1 pure identity: {seed}");

    for i in 1..=2 {
        let lifted = lift(&seed, i).unwrap();
        println!("\nlift at position {i}: {lifted}");

        // Root property: slot i expands to zero, the other slot does not.
        let d = WeightVector::symbolic(2).unwrap();
        assert!(lift_is_root_identity(&seed, i, &d).unwrap());
        let other = 3 - i;
        let off_slot = eval_mixed_slot(&lifted, &d, other).unwrap();
        println!("  slot {i} expansion: 0");
        println!("  slot {other} expansion: {off_slot}");
        assert!(!off_slot.is_zero());
    }

    // Multiplying both lifts kills every slot at once.
    let mixed = mixed_from_pure(&seed, &ChainBudget::default()).unwrap();
    println!("\nproduct of the lifts: {mixed}");
    let d = WeightVector::symbolic(2).unwrap();
    for slot in 1..=2 {
        assert!(eval_mixed_slot(&mixed, &d, slot).unwrap().is_zero());
    }
    println!("slots 1 and 2 both expand to zero");
}
