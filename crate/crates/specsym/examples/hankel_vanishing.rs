//! Moment determinants and the rank obstruction.
//!
//! At arity k the moment matrix `[p_(a_i + b_j)]` factors through a rank-k
//! product, so every (k+1) x (k+1) determinant of specialized power sums
//! vanishes identically while the k x k standard determinant stays nonzero.

use specsym::hankel::{
    control_determinant, hankel_determinant, moment_matrix, scan_vanishing, HankelSpec, ScanMode,
};
use specsym::WeightVector;

fn main() {
    let d = WeightVector::symbolic(2).unwrap();

    // The standard 3x3 spec at arity 2: offsets (1,2,3) x (0,1,2).
    let spec = HankelSpec::new(vec![1, 2, 3], vec![0, 1, 2]).unwrap();
    let matrix = moment_matrix(&d, &spec).unwrap();
    println!("spec {spec}");
    for row in &matrix {
        let cells: Vec<String> = row.iter().map(|p| p.to_string()).collect();
        println!("  [ {} ]", cells.join(" | "));
    }
    let det = hankel_determinant(&d, &spec).unwrap();
    println!("determinant: {}", if det.is_zero() { "0" } else { "nonzero" });
    assert!(det.is_zero());

    // The 2x2 control stays nonzero: rank really is 2, not less.
    let control = control_determinant(&d).unwrap();
    println!("2x2 control: {control}");
    assert!(!control.is_zero());

    // Exhaustive scan over all offset choices up to 3.
    let report = scan_vanishing(&d, 3, ScanMode::Exhaustive).unwrap();
    println!(
        "exhaustive scan: {} specs checked, all vanished = {}",
        report.checked,
        report.all_vanished()
    );
    assert!(report.all_vanished());

    // Arity 3 is bigger; a seeded sample keeps it quick and reproducible.
    let d3 = WeightVector::symbolic(3).unwrap();
    let sampled = scan_vanishing(&d3, 4, ScanMode::Sampled { count: 10, seed: 11 }).unwrap();
    println!(
        "arity-3 sampled scan: {} specs checked, all vanished = {}",
        sampled.checked,
        sampled.all_vanished()
    );
    assert!(sampled.all_vanished());
}
