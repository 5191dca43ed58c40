//! Tour of the exact polynomial layer.
//!
//! Builds a few multivariate polynomials over the rationals, runs them
//! through arithmetic, substitution, and content extraction, and shows the
//! canonical text form that every other layer leans on.

use std::collections::BTreeMap;

use specsym::{MultiPoly, VarId};

fn main() {
    // Polynomials parse from the same compact form they print.
    let a: MultiPoly = "d1^2+d1*d2".parse().unwrap();
    let b: MultiPoly = "p1^2-2*d1*p2".parse().unwrap();
    println!("a      = {a}");
    println!("b      = {b}");
    println!("a + b  = {}", &a + &b);
    println!("a * b  = {}", &a * &b);
    println!("b^2    = {}", b.pow(2));

    // Substitution is simultaneous: bind p1 to a polynomial that itself
    // mentions p2 and the two bindings do not interfere.
    let mut bindings = BTreeMap::new();
    bindings.insert(VarId::p(1), "p2+t".parse().unwrap());
    bindings.insert(VarId::p(2), "d2*t^2".parse().unwrap());
    println!("b with p1 -> p2+t, p2 -> d2*t^2: {}", b.substitute(&bindings));

    // Rational content splits off the common scalar, leaving a primitive
    // integer polynomial with positive leading coefficient.
    let c: MultiPoly = "3/4*p1*p2-3/2*p2^2".parse().unwrap();
    let (content, primitive) = c.content_split();
    println!("c = {c}");
    println!("content {content} times primitive {primitive}");

    // Display is canonical, so equal polynomials always print identically.
    let d1: MultiPoly = "p2*p1+p1".parse().unwrap();
    let d2: MultiPoly = "p1+p1*p2".parse().unwrap();
    assert_eq!(d1, d2);
    assert_eq!(d1.to_string(), d2.to_string());
    println!("canonical form: {d1}");
}
