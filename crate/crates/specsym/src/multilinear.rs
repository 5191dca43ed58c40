//! Full polarization of pure identities into multilinear trace form.
//!
//! Replacing the single matrix argument by a sum `c_1 X_1 + ... + c_N X_N`
//! and extracting the coefficient of `c_1 c_2 ... c_N` turns a weight-`N`
//! pure identity into a multilinear identity in `N` matrix variables. In
//! the diagonal algebra the natural basis is indexed by set partitions `P`
//! of `{1..N}`: the monomial `T_P` is the product over blocks `B` of the
//! block trace `sum_i d_i prod_(m in B) y_(i,m)`, where `y_(i,m)` is slot
//! `i` of matrix `m`.
//!
//! Polarizing one term `p_lambda` produces every set partition of shape
//! `lambda`, each with the same combinatorial weight
//! `W(lambda) = prod_m lambda_m! * prod_s r_s!` (`r_s` counts repeats of
//! part `s`), so the multilinear form of `sum alpha_lambda p_lambda` is
//! `sum_lambda alpha_lambda W(lambda) sum_(shape(P) = lambda) T_P`. The
//! count of shape-`lambda` set partitions times `W(lambda)` is exactly
//! `N!`, which pins both factors in tests.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::partition::Partition;
use crate::poly::{rat, Monomial, MultiPoly, VarId};
use crate::symfun::{PureIdentity, WeightVector};
use crate::Result;

/// Default bound on the number of matrix variables (the weight of the
/// polarized identity); Bell-number growth makes larger weights expensive.
pub const DEFAULT_MAX_VARS: u32 = 5;

/// Hard ceiling on the number of matrix variables.
pub const MAX_VARS_LIMIT: u32 = 8;

/// The polarization weight `W(lambda) = prod_m lambda_m! * prod_s r_s!`.
pub fn polarization_weight(lambda: &Partition) -> u64 {
    fn factorial(n: u64) -> u64 {
        (2..=n).product::<u64>().max(1)
    }
    let parts: u64 = lambda
        .parts()
        .iter()
        .map(|&p| factorial(u64::from(p)))
        .product();
    let repeats: u64 = lambda
        .multiplicities()
        .iter()
        .map(|&(_, r)| factorial(u64::from(r)))
        .product();
    parts * repeats
}

/// All set partitions of `{1..n}` via restricted-growth strings, each as a
/// list of blocks; blocks and their contents are sorted ascending.
pub fn set_partitions(n: u32) -> Vec<Vec<Vec<u32>>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut rgs = vec![0u32; n as usize];
    loop {
        let blocks = {
            let count = rgs.iter().copied().max().unwrap_or(0) + 1;
            let mut blocks: Vec<Vec<u32>> = vec![Vec::new(); count as usize];
            for (idx, &b) in rgs.iter().enumerate() {
                blocks[b as usize].push(idx as u32 + 1);
            }
            blocks
        };
        out.push(blocks);
        // Successor: increment the rightmost position that may still grow.
        let mut pos = n as usize - 1;
        loop {
            if pos == 0 {
                return out;
            }
            let max_prefix = rgs[..pos].iter().copied().max().unwrap_or(0);
            if rgs[pos] <= max_prefix {
                rgs[pos] += 1;
                for r in rgs.iter_mut().skip(pos + 1) {
                    *r = 0;
                }
                break;
            }
            pos -= 1;
        }
    }
}

/// The shape of a set partition: block sizes as a partition.
pub fn shape_of(blocks: &[Vec<u32>]) -> Partition {
    Partition::from_unsorted(blocks.iter().map(|b| b.len() as u32).collect::<Vec<_>>())
        .expect("set-partition blocks are nonempty")
}

/// Set partitions of `{1..n}` whose block sizes form `lambda`.
pub fn set_partitions_of_shape(n: u32, lambda: &Partition) -> Vec<Vec<Vec<u32>>> {
    set_partitions(n)
        .into_iter()
        .filter(|blocks| shape_of(blocks) == *lambda)
        .collect()
}

/// A pure identity polarized into multilinear trace form: coefficients
/// `beta_lambda` (polynomials in the weights) attached to the symmetrized
/// sums `sum_(shape(P) = lambda) T_P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultilinearTraceIdentity {
    arity: u32,
    num_vars: u32,
    terms: BTreeMap<Partition, MultiPoly>,
}

impl MultilinearTraceIdentity {
    pub fn arity(&self) -> u32 {
        self.arity
    }

    /// Number of matrix variables (the weight of the source identity).
    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &MultiPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, lambda: &Partition) -> MultiPoly {
        self.terms.get(lambda).cloned().unwrap_or_else(MultiPoly::zero)
    }

    /// Coefficient of the all-singletons set partition term.
    pub fn singleton_coefficient(&self) -> MultiPoly {
        self.coefficient(&crate::symfun::all_ones(self.num_vars))
    }
}

impl std::fmt::Display for MultilinearTraceIdentity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (lambda, beta) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let shape = lambda
                .parts()
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",");
            if beta.num_terms() > 1 {
                write!(f, "({beta})*S({shape})")?;
            } else {
                write!(f, "{beta}*S({shape})")?;
            }
        }
        Ok(())
    }
}

/// Polarizes a pure identity of weight `N <= max_vars` into its
/// multilinear trace form: `beta_lambda = alpha_lambda * W(lambda)`.
pub fn multilinearize(f: &PureIdentity, max_vars: u32) -> Result<MultilinearTraceIdentity> {
    let n = f.weight();
    let cap = max_vars.min(MAX_VARS_LIMIT);
    if n > cap {
        return Err(Error::BudgetExceeded {
            what: "multilinear matrix variables".into(),
            used: u64::from(n),
            limit: u64::from(cap),
        });
    }
    let mut terms = BTreeMap::new();
    for (lambda, alpha) in f.terms() {
        let beta = alpha.scale(&rat(polarization_weight(lambda) as i64));
        if !beta.is_zero() {
            terms.insert(lambda.clone(), beta);
        }
    }
    Ok(MultilinearTraceIdentity {
        arity: f.arity(),
        num_vars: n,
        terms,
    })
}

/// The block trace `sum_i d_i prod_(m in B) y_(i,m)`.
pub fn block_trace(d: &WeightVector, block: &[u32]) -> Result<MultiPoly> {
    if block.is_empty() {
        return Err(Error::MalformedIdentity("empty block in a set partition".into()));
    }
    let mut acc = MultiPoly::zero();
    for i in 1..=d.arity() {
        let mono = Monomial::from_pairs(block.iter().map(|&m| (VarId::y(i, m), 1)));
        acc += d.entry_poly(i)?.mul_monomial(&mono);
    }
    Ok(acc)
}

/// The trace monomial `T_P`: product of block traces.
pub fn trace_monomial(d: &WeightVector, blocks: &[Vec<u32>]) -> Result<MultiPoly> {
    let mut acc = MultiPoly::one();
    for block in blocks {
        acc = &acc * &block_trace(d, block)?;
    }
    Ok(acc)
}

/// Expands a multilinear trace identity fully in the `y`-variables at the
/// given weights.
pub fn expand_multilinear(
    g: &MultilinearTraceIdentity,
    d: &WeightVector,
) -> Result<MultiPoly> {
    if g.arity() != d.arity() {
        return Err(Error::ArityMismatch {
            expected: g.arity(),
            found: d.arity(),
        });
    }
    let bind = d.d_bindings();
    let mut acc = MultiPoly::zero();
    for (lambda, beta) in g.terms() {
        let beta = if bind.is_empty() { beta.clone() } else { beta.substitute(&bind) };
        let mut symmetrized = MultiPoly::zero();
        for blocks in set_partitions_of_shape(g.num_vars(), lambda) {
            symmetrized = &symmetrized + &trace_monomial(d, &blocks)?;
        }
        acc += &beta * &symmetrized;
    }
    Ok(acc)
}

/// Checks that the polarized form vanishes identically in all `N * arity`
/// slot variables.
pub fn verify_multilinear(g: &MultilinearTraceIdentity, d: &WeightVector) -> Result<bool> {
    Ok(expand_multilinear(g, d)?.is_zero())
}

/// Per-shape bookkeeping of a polarized identity.
#[derive(Clone, Debug)]
pub struct TraceCountReport {
    /// `(shape, trace factors per monomial, set partitions of that shape)`.
    pub rows: Vec<(Partition, usize, u64)>,
    /// Fewest trace factors over all present shapes.
    pub min_traces: usize,
    /// Most trace factors over all present shapes.
    pub max_traces: usize,
}

/// Tabulates, for each shape present in `g`, how many trace factors its
/// monomials carry and how many set partitions realize it.
pub fn trace_count_report(g: &MultilinearTraceIdentity) -> TraceCountReport {
    let mut rows = Vec::new();
    for (lambda, _) in g.terms() {
        let count = set_partitions_of_shape(g.num_vars(), lambda).len() as u64;
        rows.push((lambda.clone(), lambda.len(), count));
    }
    let min_traces = rows.iter().map(|r| r.1).min().unwrap_or(0);
    let max_traces = rows.iter().map(|r| r.1).max().unwrap_or(0);
    TraceCountReport {
        rows,
        min_traces,
        max_traces,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::{base_pure_k1, build_chain, ChainBudget};
    use crate::partition::partitions_of;
    use crate::poly::Rational;
    use crate::symfun::power_sum;

    fn pv(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    // --- truncated polarization oracle -----------------------------------

    /// Multiplication that drops any term where some `c`-variable reaches
    /// exponent 2; keeps the multilinear layer honest and small.
    fn mul_trunc(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        let product = a * b;
        let kept: Vec<(Monomial, Rational)> = product
            .terms()
            .filter(|(m, _)| {
                m.iter().all(|&(v, e)| !matches!(v, VarId::C(_)) || e <= 1)
            })
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        MultiPoly::from_terms(kept)
    }

    /// `p_n` evaluated at `c_1 X_1 + ... + c_N X_N` on the diagonal
    /// algebra, truncated to multilinear `c`-degree.
    fn polarized_power(d: &WeightVector, n: u32, num_vars: u32) -> MultiPoly {
        let mut acc = MultiPoly::zero();
        for i in 1..=d.arity() {
            let mut linear = MultiPoly::zero();
            for m in 1..=num_vars {
                linear = &linear
                    + &MultiPoly::from_monomial(
                        Monomial::from_pairs([(VarId::c(m), 1), (VarId::y(i, m), 1)]),
                        rat(1),
                    );
            }
            let mut power = MultiPoly::one();
            for _ in 0..n {
                power = mul_trunc(&power, &linear);
            }
            acc += &d.entry_poly(i).unwrap() * &power;
        }
        acc
    }

    /// Coefficient of `c_1 c_2 ... c_N`.
    fn full_c_coefficient(poly: &MultiPoly, num_vars: u32) -> MultiPoly {
        let kept: Vec<(Monomial, Rational)> = poly
            .terms()
            .filter(|(m, _)| {
                (1..=num_vars).all(|j| m.degree_in(VarId::c(j)) == 1)
            })
            .map(|(m, c)| {
                let stripped: Vec<(VarId, u32)> = m
                    .iter()
                    .filter(|(v, _)| !matches!(v, VarId::C(_)))
                    .copied()
                    .collect();
                (Monomial::from_pairs(stripped), c.clone())
            })
            .collect();
        MultiPoly::from_terms(kept)
    }

    #[test]
    fn bell_numbers_count_set_partitions() {
        let bells = [1u64, 1, 2, 5, 15, 52];
        for (n, &bell) in bells.iter().enumerate() {
            assert_eq!(set_partitions(n as u32).len() as u64, bell, "n = {n}");
        }
        // Shapes partition the whole family.
        for n in 1..=5u32 {
            let total: usize = partitions_of(n)
                .map(|l| set_partitions_of_shape(n, &l).len())
                .sum();
            assert_eq!(total, set_partitions(n).len());
        }
    }

    #[test]
    fn weight_times_shape_count_is_a_factorial() {
        fn factorial(n: u64) -> u64 {
            (2..=n).product::<u64>().max(1)
        }
        for n in 1..=5u32 {
            for lambda in partitions_of(n) {
                let w = polarization_weight(&lambda);
                let count = set_partitions_of_shape(n, &lambda).len() as u64;
                assert_eq!(w * count, factorial(u64::from(n)), "shape {lambda}");
            }
        }
    }

    #[test]
    fn polarization_weights_are_the_known_values() {
        assert_eq!(polarization_weight(&Partition::new([1, 1])), 2);
        assert_eq!(polarization_weight(&Partition::new([2])), 2);
        assert_eq!(polarization_weight(&Partition::new([5])), 120);
        assert_eq!(polarization_weight(&Partition::new([1, 1, 1, 1, 1])), 120);
        assert_eq!(polarization_weight(&Partition::new([2, 1])), 2);
        assert_eq!(polarization_weight(&Partition::new([2, 2, 1])), 8);
        assert_eq!(polarization_weight(&Partition::new([3, 1, 1])), 12);
    }

    #[test]
    fn truncated_polarization_recovers_the_weights() {
        // For each shape, the coefficient of c_1...c_N in the polarized
        // p_lambda must equal W(lambda) times the symmetrized trace sum.
        for arity in [1u32, 2] {
            let d = WeightVector::symbolic(arity).unwrap();
            for n in 1..=4u32 {
                for lambda in partitions_of(n) {
                    let mut polarized = MultiPoly::one();
                    for &part in lambda.parts() {
                        polarized = mul_trunc(&polarized, &polarized_power(&d, part, n));
                    }
                    let extracted = full_c_coefficient(&polarized, n);
                    let mut expected = MultiPoly::zero();
                    for blocks in set_partitions_of_shape(n, &lambda) {
                        expected = &expected + &trace_monomial(&d, &blocks).unwrap();
                    }
                    let w = rat(polarization_weight(&lambda) as i64);
                    assert_eq!(
                        extracted,
                        expected.scale(&w),
                        "shape {lambda} at arity {arity}"
                    );
                }
            }
        }
    }

    #[test]
    fn seed_identity_polarizes_and_vanishes() {
        let base = base_pure_k1();
        let g = multilinearize(&base, DEFAULT_MAX_VARS).unwrap();
        assert_eq!(g.num_vars(), 2);
        assert_eq!(g.coefficient(&Partition::new([1, 1])), pv("2"));
        assert_eq!(g.coefficient(&Partition::new([2])), pv("-2*d1"));
        assert_eq!(g.singleton_coefficient(), pv("2"));
        let d = WeightVector::symbolic(1).unwrap();
        assert!(verify_multilinear(&g, &d).unwrap());
    }

    #[test]
    fn chain_pure_identity_polarizes_and_vanishes() {
        let budget = ChainBudget::default();
        let chain = build_chain(2, &budget).unwrap();
        let g = multilinearize(chain.pure(), DEFAULT_MAX_VARS).unwrap();
        assert_eq!(g.num_vars(), 5);
        // The all-singletons coefficient is N! times the all-ones
        // coefficient of the source, which is 1.
        assert_eq!(g.singleton_coefficient(), pv("120"));
        // The single-block coefficient is W((5)) = 120 times alpha_(5).
        assert_eq!(
            g.coefficient(&Partition::new([5])),
            pv("120*d1^3*d2+240*d1^2*d2^2+120*d1*d2^3")
        );
        let d = WeightVector::symbolic(2).unwrap();
        assert!(verify_multilinear(&g, &d).unwrap());
        let numeric = WeightVector::from_ints(&[2, 3]).unwrap();
        assert!(verify_multilinear(&g, &numeric).unwrap());
    }

    #[test]
    fn non_identities_fail_multilinear_verification() {
        let f = PureIdentity::new(2, 2, [(Partition::new([2]), MultiPoly::one())]).unwrap();
        let g = multilinearize(&f, DEFAULT_MAX_VARS).unwrap();
        let d = WeightVector::symbolic(2).unwrap();
        assert!(!verify_multilinear(&g, &d).unwrap());
    }

    #[test]
    fn weights_above_the_cap_are_refused() {
        let budget = ChainBudget::default();
        let chain = build_chain(2, &budget).unwrap();
        assert!(matches!(
            multilinearize(chain.pure(), 4),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(multilinearize(chain.pure(), 5).is_ok());
    }

    #[test]
    fn expansion_is_label_symmetric() {
        // Take a non-identity so the expansion is a nonzero polynomial,
        // then relabel the matrix variables by a permutation: the grouped
        // shape form must be invariant.
        let f = PureIdentity::new(
            2,
            3,
            [
                (Partition::new([3]), pv("d1")),
                (Partition::new([2, 1]), pv("d2-d1")),
            ],
        )
        .unwrap();
        let g = multilinearize(&f, DEFAULT_MAX_VARS).unwrap();
        let d = WeightVector::from_ints(&[2, 3]).unwrap();
        let expanded = expand_multilinear(&g, &d).unwrap();
        assert!(!expanded.is_zero());
        // sigma = (1 2 3) acting on the matrix label.
        let sigma = |m: u32| (m % 3) + 1;
        let mut bind = std::collections::BTreeMap::new();
        for i in 1..=2u32 {
            for m in 1..=3u32 {
                bind.insert(VarId::y(i, m), MultiPoly::var(VarId::y(i, sigma(m))));
            }
        }
        assert_eq!(expanded.substitute(&bind), expanded);
    }

    #[test]
    fn trace_counts_are_tabulated() {
        let budget = ChainBudget::default();
        let chain = build_chain(2, &budget).unwrap();
        let g = multilinearize(chain.pure(), DEFAULT_MAX_VARS).unwrap();
        let report = trace_count_report(&g);
        assert_eq!(report.min_traces, 1);
        assert_eq!(report.max_traces, 5);
        let singleton_row = report
            .rows
            .iter()
            .find(|(l, _, _)| *l == Partition::new([1, 1, 1, 1, 1]))
            .unwrap();
        assert_eq!(singleton_row.2, 1);
        let pairs_row = report
            .rows
            .iter()
            .find(|(l, _, _)| *l == Partition::new([2, 2, 1]))
            .unwrap();
        assert_eq!(pairs_row.2, 15);
    }

    #[test]
    fn block_traces_specialize_to_power_sums() {
        // Binding every matrix in a block to the same single matrix turns
        // the block trace into the ordinary power sum.
        let d = WeightVector::symbolic(2).unwrap();
        let block = vec![1u32, 2, 3];
        let tr = block_trace(&d, &block).unwrap();
        let mut bind = std::collections::BTreeMap::new();
        for i in 1..=2u32 {
            for m in 1..=3u32 {
                bind.insert(VarId::y(i, m), MultiPoly::var(VarId::x(i)));
            }
        }
        assert_eq!(tr.substitute(&bind), power_sum(&d, 3).unwrap());
        assert!(block_trace(&d, &[]).is_err());
    }
}
