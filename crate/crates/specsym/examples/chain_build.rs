//! Builds the inductive chain of sufficiently monic identities.
//!
//! Climbs from the one-slot seed to arity 3, prints the per-level shape of
//! the chain, verifies it, and round-trips the whole thing through its JSON
//! document form.

use specsym::forge::{build_chain, verify_chain, ChainBudget};
use specsym::serial::{chain_cache_filename, load_json, save_json, ChainDoc};

fn main() {
    let budget = ChainBudget::default();
    let chain = build_chain(3, &budget).unwrap();

    println!("chain to arity {}", chain.arity());
    for level in chain.levels() {
        println!(
            "  level {}: mixed weight {:2} ({} terms), pure weight {:2} ({} terms)",
            level.arity,
            level.mixed.weight(),
            level.mixed.terms().count(),
            level.pure.weight(),
            level.pure.terms().count()
        );
    }

    // The level-2 identities are small enough to read in full.
    let two = chain.level(2).unwrap();
    println!("\nlevel 2 mixed: {}", two.mixed);
    println!("level 2 pure:  {}", two.pure);

    // A tight term budget makes the verifier fall back from full symbolic
    // expansion to seeded random weight samples; both modes are exact.
    let tight = ChainBudget {
        max_arity: 3,
        max_terms: 20_000,
    };
    let outcome = verify_chain(&chain, &tight).unwrap();
    println!("\nverification ({:?}): all_ok = {}", outcome.mode, outcome.all_ok);
    assert!(outcome.all_ok);

    // Serialize, reload, and compare: the document form is lossless.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join(chain_cache_filename(3));
    save_json(&path, &ChainDoc::from_chain(&chain)).unwrap();
    let reloaded: ChainDoc = load_json(&path).unwrap();
    let chain2 = reloaded.to_chain().unwrap();
    assert_eq!(chain2.pure().to_poly(), chain.pure().to_poly());
    println!("round-trip through {} ok", path.display());
}
