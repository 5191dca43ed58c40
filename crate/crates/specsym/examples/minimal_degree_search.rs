//! Exhaustive identity search and the multiplicity prediction.
//!
//! At numeric weights, identities of a fixed weight form the nullspace of
//! an exact linear system. Scanning weights upward finds the minimal ones,
//! and the multiplicity profile of the weight vector predicts where they
//! appear: with profile product m, the first monic mixed identity shows up
//! at weight m-1 and the first pure identity at weight m.

use specsym::search::{prediction_report, search_mixed, Verdict};
use specsym::WeightVector;

fn main() {
    // Fixed-weight search at (2,3): weight 2 has nothing, weight 3 does.
    let d = WeightVector::from_ints(&[2, 3]).unwrap();
    let none = search_mixed(&d, 2).unwrap();
    println!("weights {d}, mixed weight 2: dimension {}", none.dimension);
    assert_eq!(none.dimension, 0);

    let some = search_mixed(&d, 3).unwrap();
    println!("weights {d}, mixed weight 3: dimension {}", some.dimension);
    let monic = some.monic.as_ref().expect("a monic representative exists");
    println!("monic representative: {monic}");

    // Prediction reports across weight vectors of different multiplicity
    // profiles. Repeats in the weights raise the profile product.
    for entries in [vec![1, 1], vec![2, 3], vec![1, 1, 1]] {
        let d = WeightVector::from_ints(&entries).unwrap();
        let report = prediction_report(&d, 6).unwrap();
        println!(
            "\nweights {d}: profile product m = {}",
            report.profile_product
        );
        println!(
            "  monic mixed: predicted {}, found {:?} ({:?})",
            report.predicted_mixed_weight, report.mixed_search.found, report.mixed_verdict
        );
        println!(
            "  pure:        predicted {}, found {:?} ({:?})",
            report.predicted_pure_weight, report.pure_search.found, report.pure_verdict
        );
        assert_eq!(report.mixed_verdict, Verdict::Match);
        assert_eq!(report.pure_verdict, Verdict::Match);
    }
}
