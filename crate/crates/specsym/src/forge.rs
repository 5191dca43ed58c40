//! Inductive construction of sufficiently monic trace identities.
//!
//! The engine climbs arities one at a time. Given a sufficiently monic pure
//! identity `f` of weight `N` at arity `k`:
//!
//! 1. [`lift`] produces, for each insertion position `i`, a mixed identity
//!    at arity `k+1` that the matrix placeholder satisfies whenever `t` is
//!    bound to slot `i`: substitute the deleted weight vector (drop `d_i`,
//!    renumber) into the coefficients and replace every trace letter
//!    `p_n` by `p_n - d_i t^n`.
//! 2. [`mixed_from_pure`] multiplies the `k+1` lifts; since each slot kills
//!    one factor, the product vanishes in every slot: a mixed identity of
//!    weight `(k+1) N`, again sufficiently monic (its `t`-free leading
//!    coefficient is the product of the factors' leading coefficients).
//! 3. [`pure_from_mixed`] applies the trace step: multiply by the matrix
//!    once more and take the weighted trace, which replaces each `t^(M-|lambda|)`
//!    by the letter `p_(M+1-|lambda|)`, giving a pure identity of weight
//!    `M + 1`.
//!
//! [`build_chain`] iterates these steps from the one-slot seed and records
//! every level; [`reduce_power`] uses a monic mixed identity at numeric
//! weights to rewrite any high power sum as a polynomial in low ones.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::partition::Partition;
use crate::poly::{rat, MultiPoly, Rational, VarId};
use crate::symfun::{MixedIdentity, PowerSumEvaluator, PureIdentity, WeightVector};
use crate::Result;

// =============================================================================
// Budgets
// =============================================================================

/// Resource guard for chain construction and symbolic verification.
#[derive(Clone, Debug)]
pub struct ChainBudget {
    /// Largest arity the chain may climb to.
    pub max_arity: u32,
    /// Cap on the number of terms any intermediate flattened polynomial or
    /// expansion may reach.
    pub max_terms: u64,
}

impl Default for ChainBudget {
    fn default() -> Self {
        ChainBudget {
            max_arity: 4,
            max_terms: 2_000_000,
        }
    }
}

fn budget_error(what: &str, used: u64, limit: u64) -> Error {
    Error::BudgetExceeded {
        what: what.to_string(),
        used,
        limit,
    }
}

// =============================================================================
// Base and lift
// =============================================================================

/// The one-slot seed: `p_1^2 - d_1 p_2`, the smallest sufficiently monic
/// pure identity at arity 1.
pub fn base_pure_k1() -> PureIdentity {
    PureIdentity::new(
        1,
        2,
        [
            (Partition::new([1, 1]), MultiPoly::one()),
            (
                Partition::new([2]),
                MultiPoly::from_monomial(crate::poly::Monomial::var(VarId::d(1)), rat(-1)),
            ),
        ],
    )
    .expect("seed identity is well formed")
}

/// Lifts a pure identity from arity `k` to a mixed identity at arity `k+1`
/// rooted at slot `i` (`1 <= i <= k+1`): coefficients are rewritten over the
/// deleted weight vector (old `d_j` becomes `d_j` for `j < i`, `d_{j+1}`
/// otherwise) and every trace letter `p_n` becomes `p_n - d_i t^n`.
///
/// The result has the same weight as `f`, its bare-`t` coefficient is
/// `sum_lambda alpha_lambda(deleted d) (-d_i)^(parts of lambda)` and its
/// `t`-free part is `f` itself over the deleted weights.
pub fn lift(f: &PureIdentity, i: u32) -> Result<MixedIdentity> {
    let k = f.arity();
    if i == 0 || i > k + 1 {
        return Err(Error::LiftIndexOutOfRange { index: i, limit: k + 1 });
    }
    let flat = f.to_poly();
    let mut bindings: BTreeMap<VarId, MultiPoly> = BTreeMap::new();
    for j in 1..=k {
        let renamed = if j < i { j } else { j + 1 };
        bindings.insert(VarId::d(j), MultiPoly::var(VarId::d(renamed)));
    }
    let d_i = MultiPoly::var(VarId::d(i));
    for v in flat.variables() {
        if let VarId::P(n) = v {
            let t_pow = MultiPoly::from_monomial(
                crate::poly::Monomial::from_pairs([(VarId::t(), n)]),
                rat(-1),
            );
            bindings.insert(v, &MultiPoly::var(v) + &(&d_i * &t_pow));
        }
    }
    let lifted = flat.substitute(&bindings);
    MixedIdentity::from_poly(&lifted, k + 1, f.weight())
}

/// Checks the defining property of a lift: at the weights `d_plus` (arity
/// `k+1`), binding the placeholder to slot `i` expands to zero.
pub fn lift_is_root_identity(f: &PureIdentity, i: u32, d_plus: &WeightVector) -> Result<bool> {
    let lifted = lift(f, i)?;
    if d_plus.arity() != lifted.arity() {
        return Err(Error::ArityMismatch {
            expected: lifted.arity(),
            found: d_plus.arity(),
        });
    }
    Ok(crate::symfun::eval_mixed_slot(&lifted, d_plus, i)?.is_zero())
}

// =============================================================================
// Product and trace step
// =============================================================================

/// Multiplies the `k+1` lifts of `f` into one mixed identity of weight
/// `(k+1) * f.weight()` at arity `k+1`.
pub fn mixed_from_pure(f: &PureIdentity, budget: &ChainBudget) -> Result<MixedIdentity> {
    let k = f.arity();
    // Every lift keeps the flattened form of `f` intact as its t-free part,
    // so the second product step must estimate at least `flat^2` terms.
    // Checking that floor first aborts hopeless inputs before any lift or
    // multiplication is paid for.
    let flat = f.to_poly().num_terms() as u64;
    let floor = flat.saturating_mul(flat);
    if k + 1 >= 2 && floor > budget.max_terms {
        return Err(budget_error("flattened product terms", floor, budget.max_terms));
    }
    let mut acc = MultiPoly::one();
    for i in 1..=k + 1 {
        let g = lift(f, i)?.to_poly();
        let estimate = (acc.num_terms() as u64).saturating_mul(g.num_terms() as u64);
        if estimate > budget.max_terms {
            return Err(budget_error("flattened product terms", estimate, budget.max_terms));
        }
        acc = &acc * &g;
        if acc.num_terms() as u64 > budget.max_terms {
            return Err(budget_error(
                "flattened product terms",
                acc.num_terms() as u64,
                budget.max_terms,
            ));
        }
    }
    MixedIdentity::from_poly(&acc, k + 1, (k + 1) * f.weight())
}

/// The generalized trace step: multiplying a weight-`M` mixed identity by
/// `X^i` and tracing replaces each term's `t^(M - |lambda|)` by the letter
/// `p_(M + i - |lambda|)`. Partition collisions accumulate. Requires
/// `i >= 1`.
pub fn trace_relation(f: &MixedIdentity, i: u32) -> Result<PureIdentity> {
    if i == 0 {
        return Err(Error::PowerSumIndex(0));
    }
    let target = f.weight() + i;
    let terms = f.terms().map(|(lambda, alpha)| {
        let new_part = target - lambda.weight();
        (lambda.with_part(new_part), alpha.clone())
    });
    PureIdentity::new(f.arity(), target, terms.collect::<Vec<_>>())
}

/// The trace step proper: weight `M` mixed to weight `M + 1` pure.
pub fn pure_from_mixed(f: &MixedIdentity) -> Result<PureIdentity> {
    trace_relation(f, 1)
}

// =============================================================================
// Chains
// =============================================================================

/// One level of the inductive chain.
#[derive(Clone, Debug)]
pub struct ChainLevel {
    pub arity: u32,
    pub mixed: MixedIdentity,
    pub pure: PureIdentity,
    /// Insertion positions of the lifts multiplied at this level (empty for
    /// the seeded level 1).
    pub lift_indices: Vec<u32>,
}

/// The full inductive chain up to a requested arity.
#[derive(Clone, Debug)]
pub struct ChainResult {
    levels: Vec<ChainLevel>,
}

impl ChainResult {
    /// Rebuilds a chain from stored levels, checking the structural
    /// recurrences (arity sequence, weight laws) but not re-verifying the
    /// identities themselves.
    pub(crate) fn from_levels(levels: Vec<ChainLevel>) -> Result<ChainResult> {
        if levels.is_empty() {
            return Err(Error::InvalidDocument("chain has no levels".into()));
        }
        for (idx, level) in levels.iter().enumerate() {
            let k = idx as u32 + 1;
            if level.arity != k || level.mixed.arity() != k || level.pure.arity() != k {
                return Err(Error::InvalidDocument(format!(
                    "level {k} carries the wrong arity"
                )));
            }
            if level.pure.weight() != level.mixed.weight() + 1 {
                return Err(Error::InvalidDocument(format!(
                    "level {k} breaks the trace-step weight law"
                )));
            }
            let expected_mixed = if k == 1 {
                1
            } else {
                k * levels[idx - 1].pure.weight()
            };
            if level.mixed.weight() != expected_mixed {
                return Err(Error::InvalidDocument(format!(
                    "level {k} breaks the product weight law"
                )));
            }
        }
        Ok(ChainResult { levels })
    }

    pub fn arity(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn levels(&self) -> &[ChainLevel] {
        &self.levels
    }

    pub fn level(&self, k: u32) -> Option<&ChainLevel> {
        self.levels.get((k as usize).wrapping_sub(1))
    }

    /// The top-level mixed identity (weight `k * previous pure weight`).
    pub fn mixed(&self) -> &MixedIdentity {
        &self.levels.last().expect("chain is nonempty").mixed
    }

    /// The top-level pure identity (weight `mixed.weight() + 1`).
    pub fn pure(&self) -> &PureIdentity {
        &self.levels.last().expect("chain is nonempty").pure
    }
}

/// Builds the chain of sufficiently monic identities up to arity `k`:
/// level 1 is seeded with the one-slot relation `p_1 - d_1 t` (whose trace
/// step is exactly [`base_pure_k1`]), and each later level multiplies the
/// lifts of the previous pure identity and traces once.
pub fn build_chain(k: u32, budget: &ChainBudget) -> Result<ChainResult> {
    if k == 0 {
        return Err(Error::EmptyWeightVector);
    }
    if k > budget.max_arity {
        return Err(budget_error("chain arity", k as u64, budget.max_arity as u64));
    }
    let seed = MixedIdentity::new(
        1,
        1,
        [
            (
                Partition::empty(),
                MultiPoly::from_monomial(crate::poly::Monomial::var(VarId::d(1)), rat(-1)),
            ),
            (Partition::new([1]), MultiPoly::one()),
        ],
    )?;
    let pure1 = pure_from_mixed(&seed)?;
    debug_assert_eq!(pure1, base_pure_k1());
    let mut levels = vec![ChainLevel {
        arity: 1,
        mixed: seed,
        pure: pure1,
        lift_indices: Vec::new(),
    }];
    for arity in 2..=k {
        let prev_pure = &levels.last().unwrap().pure;
        let mixed = mixed_from_pure(prev_pure, budget)?;
        let pure = pure_from_mixed(&mixed)?;
        if !mixed.is_sufficiently_monic() || !pure.is_sufficiently_monic() {
            return Err(Error::VerificationFailed(format!(
                "chain level {arity} lost sufficient monicity"
            )));
        }
        levels.push(ChainLevel {
            arity,
            mixed,
            pure,
            lift_indices: (1..=arity).collect(),
        });
    }
    Ok(ChainResult { levels })
}

// =============================================================================
// Capped expansion and chain verification
// =============================================================================

/// Expands every slot of a mixed identity with a shared power-sum cache and
/// a term cap; aborts with a budget error instead of growing past the cap.
pub fn expand_mixed_slots_capped(
    f: &MixedIdentity,
    d: &WeightVector,
    cap: u64,
) -> Result<Vec<MultiPoly>> {
    if f.arity() != d.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: d.arity(),
        });
    }
    let bind = d.d_bindings();
    let mut ev = PowerSumEvaluator::new(d);
    let mut pieces: Vec<(u32, MultiPoly)> = Vec::new();
    for (lambda, alpha) in f.terms() {
        let alpha = if bind.is_empty() { alpha.clone() } else { alpha.substitute(&bind) };
        let prod = ev.partition_product(lambda)?;
        let estimate = alpha.num_terms() as u64 * prod.num_terms() as u64;
        if estimate > cap {
            return Err(budget_error("slot expansion product", estimate, cap));
        }
        pieces.push((f.weight() - lambda.weight(), &alpha * prod));
    }
    let mut slots = Vec::with_capacity(f.arity() as usize);
    for j in 1..=f.arity() {
        let mut acc = MultiPoly::zero();
        for (t_exp, piece) in &pieces {
            let shifted = piece.mul_monomial(&crate::poly::Monomial::from_pairs([(
                VarId::x(j),
                *t_exp,
            )]));
            acc += shifted;
            if acc.num_terms() as u64 > cap {
                return Err(budget_error("slot expansion terms", acc.num_terms() as u64, cap));
            }
        }
        slots.push(acc);
    }
    Ok(slots)
}

/// Expands a pure identity with a shared power-sum cache and a term cap.
pub fn expand_pure_capped(f: &PureIdentity, d: &WeightVector, cap: u64) -> Result<MultiPoly> {
    if f.arity() != d.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: d.arity(),
        });
    }
    let bind = d.d_bindings();
    let mut ev = PowerSumEvaluator::new(d);
    let mut acc = MultiPoly::zero();
    for (lambda, alpha) in f.terms() {
        let alpha = if bind.is_empty() { alpha.clone() } else { alpha.substitute(&bind) };
        let prod = ev.partition_product(lambda)?;
        let estimate = alpha.num_terms() as u64 * prod.num_terms() as u64;
        if estimate > cap {
            return Err(budget_error("expansion product", estimate, cap));
        }
        acc += &alpha * prod;
        if acc.num_terms() as u64 > cap {
            return Err(budget_error("expansion terms", acc.num_terms() as u64, cap));
        }
    }
    Ok(acc)
}

/// How a chain verification was performed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    /// Full symbolic expansion with the weights left symbolic.
    Full,
    /// Budget fallback: expansion at seeded random nonzero rational weight
    /// vectors plus symbolic monicity checks. Always reported, never silent.
    Sampled { samples: u32 },
}

/// Per-level outcome of a chain verification.
#[derive(Clone, Debug)]
pub struct LevelCheck {
    pub arity: u32,
    pub mixed_weight: u32,
    pub pure_weight: u32,
    pub mixed_ok: bool,
    pub pure_ok: bool,
    pub mixed_monic: bool,
    pub pure_monic: bool,
}

impl LevelCheck {
    pub fn all_ok(&self) -> bool {
        self.mixed_ok && self.pure_ok && self.mixed_monic && self.pure_monic
    }
}

/// Outcome of verifying a whole chain.
#[derive(Clone, Debug)]
pub struct ChainVerification {
    pub mode: VerifyMode,
    pub levels: Vec<LevelCheck>,
    pub all_ok: bool,
}

fn random_weights(rng: &mut ChaCha8Rng, arity: u32) -> WeightVector {
    let entries = (0..arity)
        .map(|_| loop {
            let num: i64 = rng.gen_range(-9..=9);
            if num != 0 {
                let den: i64 = rng.gen_range(1..=4);
                return Rational::new(num.into(), den.into());
            }
        })
        .collect();
    WeightVector::numeric(entries).expect("entries are nonzero")
}

fn check_level(
    level: &ChainLevel,
    d: &WeightVector,
    cap: u64,
) -> Result<(bool, bool)> {
    let slots = expand_mixed_slots_capped(&level.mixed, d, cap)?;
    let mixed_ok = slots.iter().all(MultiPoly::is_zero);
    let pure_ok = expand_pure_capped(&level.pure, d, cap)?.is_zero();
    Ok((mixed_ok, pure_ok))
}

/// Verifies every level of a chain. Tries full symbolic expansion first;
/// if the term budget is exceeded it falls back to expansion at
/// `samples` seeded random numeric weight vectors and reports that mode.
pub fn verify_chain(chain: &ChainResult, budget: &ChainBudget) -> Result<ChainVerification> {
    verify_chain_with_samples(chain, budget, 5)
}

/// [`verify_chain`] with an explicit fallback sample count.
pub fn verify_chain_with_samples(
    chain: &ChainResult,
    budget: &ChainBudget,
    samples: u32,
) -> Result<ChainVerification> {
    let mut levels = Vec::new();
    let mut mode = VerifyMode::Full;
    for level in chain.levels() {
        let monic_mixed = level.mixed.is_sufficiently_monic();
        let monic_pure = level.pure.is_sufficiently_monic();
        let symbolic = WeightVector::symbolic(level.arity)?;
        let outcome = check_level(level, &symbolic, budget.max_terms);
        let (mixed_ok, pure_ok) = match outcome {
            Ok(pair) => pair,
            Err(Error::BudgetExceeded { .. }) => {
                // Fallback: seeded random numeric weights. A failure at any
                // sample disproves the identity; passing all samples is
                // reported as sampled evidence, not a symbolic proof.
                let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
                let mut all = (true, true);
                for _ in 0..samples {
                    let d = random_weights(&mut rng, level.arity);
                    let (m, p) = check_level(level, &d, budget.max_terms)?;
                    all.0 &= m;
                    all.1 &= p;
                }
                mode = VerifyMode::Sampled { samples };
                all
            }
            Err(e) => return Err(e),
        };
        levels.push(LevelCheck {
            arity: level.arity,
            mixed_weight: level.mixed.weight(),
            pure_weight: level.pure.weight(),
            mixed_ok,
            pure_ok,
            mixed_monic: monic_mixed,
            pure_monic: monic_pure,
        });
    }
    let all_ok = levels.iter().all(LevelCheck::all_ok);
    Ok(ChainVerification { mode, levels, all_ok })
}

// =============================================================================
// Power reduction
// =============================================================================

/// A power sum rewritten as a rational combination of low power-sum
/// products at fixed numeric weights: `p_n = sum c_lambda p_lambda` with
/// every part of every `lambda` at most the relation weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PureExpression {
    d: WeightVector,
    weight: u32,
    coeffs: BTreeMap<Partition, Rational>,
}

impl PureExpression {
    pub fn weights(&self) -> &WeightVector {
        &self.d
    }

    /// The exponent `n` of the power sum this expression rewrites.
    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.coeffs.iter()
    }

    /// Largest trace-letter index used.
    pub fn max_part(&self) -> u32 {
        self.coeffs.keys().map(Partition::max_part).max().unwrap_or(0)
    }

    /// Expands the right-hand side in the `x`-variables; equals
    /// `power_sum(d, n)` exactly when the reduction is correct.
    pub fn expand(&self) -> Result<MultiPoly> {
        let mut ev = PowerSumEvaluator::new(&self.d);
        let mut acc = MultiPoly::zero();
        for (lambda, c) in &self.coeffs {
            let prod = ev.partition_product(lambda)?;
            acc += prod.scale(c);
        }
        Ok(acc)
    }
}

impl std::fmt::Display for PureExpression {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "p{} = ", self.weight)?;
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (lambda, c)) in self.coeffs.iter().enumerate() {
            let mono = crate::symfun::partition_monomial(lambda).to_string();
            let mag = c.abs();
            let piece = if mag.is_one() && mono != "1" {
                mono
            } else if mono == "1" {
                crate::poly::rational_string(&mag)
            } else {
                format!("{}*{mono}", crate::poly::rational_string(&mag))
            };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            write!(f, "{piece}")?;
        }
        Ok(())
    }
}

/// Rewrites `p_n` at numeric weights `d` using a mixed identity whose top
/// coefficient does not vanish at `d`: repeatedly replaces the largest
/// letter above the relation weight `M` via
/// `p_v = -(1/alpha_empty(d)) * sum_(lambda != empty) alpha_lambda(d) p_lambda p_(v - |lambda|)`
/// until every letter index is at most `M`. Requires `n > M`.
pub fn reduce_power(n: u32, d: &WeightVector, relation: &MixedIdentity) -> Result<PureExpression> {
    if !d.is_numeric() {
        return Err(Error::NumericWeightsRequired {
            operation: "reduce_power",
        });
    }
    if relation.arity() != d.arity() {
        return Err(Error::ArityMismatch {
            expected: relation.arity(),
            found: d.arity(),
        });
    }
    let m = relation.weight();
    if n <= m {
        return Err(Error::ReductionOutOfRange { exponent: n, weight: m });
    }
    let bind = d.d_bindings();
    let alpha_empty = relation
        .alpha_empty()
        .substitute(&bind)
        .as_constant()
        .expect("numeric coefficient");
    if alpha_empty.is_zero() {
        return Err(Error::ReductionUnavailable {
            coefficient: relation.alpha_empty().to_string(),
            weights: d.to_string(),
        });
    }
    // Rewrite table: p_v -> sum rho_lambda p_lambda p_(v - |lambda|).
    let mut table: Vec<(Partition, Rational)> = Vec::new();
    for (lambda, alpha) in relation.terms() {
        if lambda.is_empty() {
            continue;
        }
        let value = alpha
            .substitute(&bind)
            .as_constant()
            .expect("numeric coefficient");
        if !value.is_zero() {
            table.push((lambda.clone(), -value / &alpha_empty));
        }
    }

    let mut work: BTreeMap<Partition, Rational> = BTreeMap::new();
    work.insert(Partition::new([n]), rat(1));
    loop {
        let target = work
            .keys()
            .find(|lambda| lambda.max_part() > m)
            .cloned();
        let Some(lambda) = target else { break };
        let coef = work.remove(&lambda).expect("key just found");
        let v = lambda.max_part();
        let rest = lambda.without_max_part();
        for (mu, rho) in &table {
            let fresh = v - mu.weight();
            debug_assert!(fresh >= 1, "relation weight bounds the shift");
            let key = rest.union(mu).with_part(fresh);
            let mut value = work.remove(&key).unwrap_or_else(|| rat(0));
            value += &coef * rho;
            if !value.is_zero() {
                work.insert(key, value);
            }
        }
    }
    work.retain(|_, c| !c.is_zero());
    Ok(PureExpression {
        d: d.clone(),
        weight: n,
        coeffs: work,
    })
}

// =============================================================================
// Tests
// =============================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfun::{eval_mixed_slot, is_mixed_identity, is_pure_identity, power_sum};

    fn pv(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    fn part(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    /// Independent combinatorial route to the lift, used as an oracle: for a
    /// single term `alpha * p_lambda`, expanding
    /// `prod_m (p_(lambda_m) - d_i t^(lambda_m))` over sub-multisets `mu`
    /// gives `sum_mu ways(mu) alpha' (-d_i)^(len(lambda)-len(mu)) p_mu t^(|lambda|-|mu|)`.
    fn lift_by_submultisets(f: &PureIdentity, i: u32) -> MixedIdentity {
        let k = f.arity();
        let mut rename: BTreeMap<VarId, MultiPoly> = BTreeMap::new();
        for j in 1..=k {
            let renamed = if j < i { j } else { j + 1 };
            rename.insert(VarId::d(j), MultiPoly::var(VarId::d(renamed)));
        }
        let minus_di = pv(&format!("-d{i}"));
        let mut terms: Vec<(Partition, MultiPoly)> = Vec::new();
        for (lambda, alpha) in f.terms() {
            let alpha = alpha.substitute(&rename);
            for (mu, ways) in lambda.sub_multisets() {
                let dropped = (lambda.len() - mu.len()) as u32;
                let c = &alpha.scale(&rat(ways as i64)) * &minus_di.pow(dropped);
                terms.push((mu, c));
            }
        }
        MixedIdentity::new(k + 1, f.weight(), terms).unwrap()
    }

    /// Hand-derived coefficient table of the first root quadratic at
    /// arity 2: `d1(d1+d2) t^2 - 2 d1 p1 t + (p1^2 - d2 p2)`.
    fn golden_quadratic(i: u32) -> MixedIdentity {
        let (top, mid, bot) = match i {
            1 => ("d1^2+d1*d2", "-2*d1", "-d2"),
            2 => ("d1*d2+d2^2", "-2*d2", "-d1"),
            _ => unreachable!(),
        };
        MixedIdentity::new(
            2,
            2,
            [
                (Partition::empty(), pv(top)),
                (part(&[1]), pv(mid)),
                (part(&[2]), pv(bot)),
                (part(&[1, 1]), MultiPoly::one()),
            ],
        )
        .unwrap()
    }

    /// Hand-derived weight-4 product of the two quadratics.
    fn golden_mixed_k2() -> MixedIdentity {
        MixedIdentity::new(
            2,
            4,
            [
                (Partition::empty(), pv("d1^3*d2+2*d1^2*d2^2+d1*d2^3")),
                (part(&[1]), pv("-4*d1^2*d2-4*d1*d2^2")),
                (part(&[2]), pv("-d1^3-d1^2*d2-d1*d2^2-d2^3")),
                (part(&[1, 1]), pv("d1^2+6*d1*d2+d2^2")),
                (part(&[2, 1]), pv("2*d1^2+2*d2^2")),
                (part(&[1, 1, 1]), pv("-2*d1-2*d2")),
                (part(&[2, 2]), pv("d1*d2")),
                (part(&[2, 1, 1]), pv("-d1-d2")),
                (part(&[1, 1, 1, 1]), MultiPoly::one()),
            ],
        )
        .unwrap()
    }

    /// Hand-derived weight-5 trace step of the product.
    fn golden_pure_k2() -> PureIdentity {
        PureIdentity::new(
            2,
            5,
            [
                (part(&[5]), pv("d1^3*d2+2*d1^2*d2^2+d1*d2^3")),
                (part(&[4, 1]), pv("-4*d1^2*d2-4*d1*d2^2")),
                (part(&[3, 2]), pv("-d1^3-d1^2*d2-d1*d2^2-d2^3")),
                (part(&[3, 1, 1]), pv("d1^2+6*d1*d2+d2^2")),
                (part(&[2, 2, 1]), pv("2*d1^2+d1*d2+2*d2^2")),
                (part(&[2, 1, 1, 1]), pv("-3*d1-3*d2")),
                (part(&[1, 1, 1, 1, 1]), MultiPoly::one()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn lifting_the_seed_gives_the_golden_quadratics() {
        let base = base_pure_k1();
        assert_eq!(lift(&base, 1).unwrap(), golden_quadratic(1));
        assert_eq!(lift(&base, 2).unwrap(), golden_quadratic(2));
        assert!(lift(&base, 0).is_err());
        assert!(lift(&base, 3).is_err());
    }

    #[test]
    fn lift_agrees_with_submultiset_expansion() {
        let base = base_pure_k1();
        for i in 1..=2 {
            assert_eq!(lift(&base, i).unwrap(), lift_by_submultisets(&base, i));
        }
        let pure2 = golden_pure_k2();
        for i in 1..=3 {
            assert_eq!(lift(&pure2, i).unwrap(), lift_by_submultisets(&pure2, i));
        }
    }

    #[test]
    fn lift_structure_per_basis_term() {
        // For a single term p_lambda the lift has top t-coefficient
        // (-d_i)^(number of parts) and t-free part p_lambda itself.
        for (arity, i, parts) in [
            (1u32, 1u32, vec![3u32, 1, 1]),
            (1, 2, vec![2, 2]),
            (2, 2, vec![1u32]),
            (2, 3, vec![4, 3, 3, 1]),
        ] {
            let lambda = part(&parts);
            let f = PureIdentity::new(arity, lambda.weight(), [(lambda.clone(), MultiPoly::one())])
                .unwrap();
            let lifted = lift(&f, i).unwrap().to_poly();
            let top = lifted.coefficient_of(VarId::t(), lambda.weight());
            let expect_top = pv(&format!("-d{i}")).pow(lambda.len() as u32);
            assert_eq!(top, expect_top, "top coefficient for {lambda}");
            let bottom = lifted.coefficient_of(VarId::t(), 0);
            assert_eq!(
                bottom,
                f.to_poly(),
                "t-free part must be the original term"
            );
        }
    }

    #[test]
    fn lift_top_coefficient_formula() {
        // alpha_empty(lift(f, i)) = sum_lambda alpha_lambda(deleted d) (-d_i)^len(lambda).
        let f = golden_pure_k2();
        for i in 1..=3u32 {
            let lifted = lift(&f, i).unwrap();
            let mut rename: BTreeMap<VarId, MultiPoly> = BTreeMap::new();
            for j in 1..=2 {
                let renamed = if j < i { j } else { j + 1 };
                rename.insert(VarId::d(j), MultiPoly::var(VarId::d(renamed)));
            }
            let minus_di = pv(&format!("-d{i}"));
            let mut expect = MultiPoly::zero();
            for (lambda, alpha) in f.terms() {
                expect = &expect + &(&alpha.substitute(&rename) * &minus_di.pow(lambda.len() as u32));
            }
            assert_eq!(lifted.alpha_empty(), expect, "lift index {i}");
        }
    }

    #[test]
    fn lifts_are_root_identities_exactly_in_their_slot() {
        let base = base_pure_k1();
        let d2 = WeightVector::symbolic(2).unwrap();
        for i in 1..=2u32 {
            assert!(lift_is_root_identity(&base, i, &d2).unwrap());
            let other = if i == 1 { 2 } else { 1 };
            let lifted = lift(&base, i).unwrap();
            assert!(!eval_mixed_slot(&lifted, &d2, other).unwrap().is_zero());
        }
        let num = WeightVector::from_ints(&[3, -7]).unwrap();
        assert!(lift_is_root_identity(&base, 1, &num).unwrap());
        assert!(lift_is_root_identity(&base, 2, &num).unwrap());
    }

    #[test]
    fn product_matches_golden_table_and_verifies() {
        let budget = ChainBudget::default();
        let mixed = mixed_from_pure(&base_pure_k1(), &budget).unwrap();
        assert_eq!(mixed, golden_mixed_k2());
        let d = WeightVector::symbolic(2).unwrap();
        assert!(is_mixed_identity(&mixed, &d).unwrap());
        assert!(mixed.is_sufficiently_monic());
    }

    #[test]
    fn trace_step_matches_golden_table_and_verifies() {
        let budget = ChainBudget::default();
        let mixed = mixed_from_pure(&base_pure_k1(), &budget).unwrap();
        let pure = pure_from_mixed(&mixed).unwrap();
        assert_eq!(pure, golden_pure_k2());
        let d = WeightVector::symbolic(2).unwrap();
        assert!(is_pure_identity(&pure, &d).unwrap());
        assert!(pure.is_sufficiently_monic());
    }

    #[test]
    fn trace_step_accumulates_partition_collisions() {
        // Weight-3 mixed with terms at (1) and (3): both trace to (3,1).
        let f = MixedIdentity::new(
            1,
            3,
            [
                (part(&[1]), MultiPoly::one()),
                (part(&[3]), MultiPoly::one()),
            ],
        )
        .unwrap();
        let traced = trace_relation(&f, 1).unwrap();
        assert_eq!(traced.coefficient(&part(&[3, 1])), pv("2"));
        assert_eq!(traced.weight(), 4);
        assert!(trace_relation(&f, 0).is_err());
    }

    #[test]
    fn chain_weights_follow_the_recurrence() {
        let budget = ChainBudget::default();
        let chain = build_chain(3, &budget).unwrap();
        let weights: Vec<(u32, u32)> = chain
            .levels()
            .iter()
            .map(|l| (l.mixed.weight(), l.pure.weight()))
            .collect();
        assert_eq!(weights, vec![(1, 2), (4, 5), (15, 16)]);
        for level in chain.levels() {
            assert_eq!(level.pure.weight(), level.mixed.weight() + 1);
            assert!(level.mixed.is_sufficiently_monic());
            assert!(level.pure.is_sufficiently_monic());
        }
        assert_eq!(chain.level(2).unwrap().mixed, golden_mixed_k2());
        assert_eq!(chain.levels()[1].lift_indices, vec![1, 2]);
        assert_eq!(chain.levels()[2].lift_indices, vec![1, 2, 3]);
    }

    #[test]
    fn chain_respects_budgets() {
        let tight = ChainBudget { max_arity: 2, max_terms: 2_000_000 };
        assert!(matches!(
            build_chain(3, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
        let tiny = ChainBudget { max_arity: 4, max_terms: 10 };
        assert!(matches!(
            build_chain(3, &tiny),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(build_chain(0, &ChainBudget::default()).is_err());
    }

    #[test]
    fn capped_expansion_agrees_with_reference_evaluation() {
        let mixed = golden_mixed_k2();
        let d = WeightVector::symbolic(2).unwrap();
        let slots = expand_mixed_slots_capped(&mixed, &d, 1_000_000).unwrap();
        for j in 1..=2u32 {
            assert_eq!(slots[(j - 1) as usize], eval_mixed_slot(&mixed, &d, j).unwrap());
        }
        let num = WeightVector::from_ints(&[2, 3]).unwrap();
        let pure = golden_pure_k2();
        assert_eq!(
            expand_pure_capped(&pure, &num, 1_000_000).unwrap(),
            crate::symfun::eval_pure(&pure, &num).unwrap()
        );
        assert!(matches!(
            expand_pure_capped(&pure, &num, 2),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn verify_chain_full_and_sampled_modes() {
        let budget = ChainBudget::default();
        let chain = build_chain(2, &budget).unwrap();
        let full = verify_chain(&chain, &budget).unwrap();
        assert_eq!(full.mode, VerifyMode::Full);
        assert!(full.all_ok);
        assert_eq!(full.levels.len(), 2);

        // Starve the verifier: symbolic products at level 2 no longer fit,
        // numeric samples still do. It must fall back and say so.
        let starved = ChainBudget { max_arity: 4, max_terms: 6 };
        let sampled = verify_chain(&chain, &starved).unwrap();
        assert_eq!(sampled.mode, VerifyMode::Sampled { samples: 5 });
        assert!(sampled.all_ok);
    }

    #[test]
    fn reduce_power_with_the_classical_two_slot_relation() {
        // At d = (1,1) the matrix satisfies the monic weight-2 relation
        // 2 t^2 - 2 p1 t + (p1^2 - p2).
        let relation = MixedIdentity::new(
            2,
            2,
            [
                (Partition::empty(), pv("2")),
                (part(&[1]), pv("-2")),
                (part(&[2]), pv("-1")),
                (part(&[1, 1]), MultiPoly::one()),
            ],
        )
        .unwrap();
        let d = WeightVector::from_ints(&[1, 1]).unwrap();
        assert!(is_mixed_identity(&relation, &d).unwrap());
        let expr = reduce_power(3, &d, &relation).unwrap();
        let mut want = BTreeMap::new();
        want.insert(part(&[2, 1]), crate::poly::ratio(3, 2));
        want.insert(part(&[1, 1, 1]), crate::poly::ratio(-1, 2));
        let got: BTreeMap<Partition, Rational> =
            expr.terms().map(|(l, c)| (l.clone(), c.clone())).collect();
        assert_eq!(got, want);
        assert_eq!(expr.expand().unwrap(), pv("x1^3+x2^3"));
        assert_eq!(expr.to_string(), "p3 = 3/2*p1*p2 - 1/2*p1^3");
        assert!(reduce_power(2, &d, &relation).is_err());
    }

    #[test]
    fn reduce_power_via_the_chain_matches_the_power_sum() {
        let budget = ChainBudget::default();
        let chain = build_chain(2, &budget).unwrap();
        let d = WeightVector::from_ints(&[2, 3]).unwrap();
        for n in 5..=9u32 {
            let expr = reduce_power(n, &d, chain.mixed()).unwrap();
            assert!(expr.max_part() <= 4, "letters bounded by relation weight");
            assert_eq!(
                expr.expand().unwrap(),
                power_sum(&d, n).unwrap(),
                "reduction of p_{n}"
            );
        }
    }

    #[test]
    fn reduce_power_refuses_vanishing_leading_coefficient() {
        let budget = ChainBudget::default();
        let chain = build_chain(2, &budget).unwrap();
        let bad = WeightVector::from_ints(&[1, -1]).unwrap();
        match reduce_power(5, &bad, chain.mixed()) {
            Err(Error::ReductionUnavailable { coefficient, weights }) => {
                assert_eq!(coefficient, "d1^3*d2+2*d1^2*d2^2+d1*d2^3");
                assert_eq!(weights, "(1,-1)");
            }
            other => panic!("expected ReductionUnavailable, got {other:?}"),
        }
        let sym = WeightVector::symbolic(2).unwrap();
        assert!(matches!(
            reduce_power(5, &sym, chain.mixed()),
            Err(Error::NumericWeightsRequired { .. })
        ));
    }

    #[test]
    fn undivided_rewrite_rule_is_the_trace_relation() {
        // The symbolic counterpart of reduce_power: for n > M,
        // trace_relation(f, n - M) is the undivided rule
        // alpha_empty p_n + sum ... = 0, a pure identity.
        let budget = ChainBudget::default();
        let chain = build_chain(2, &budget).unwrap();
        let rule = trace_relation(chain.mixed(), 3).unwrap();
        assert_eq!(rule.weight(), 7);
        assert_eq!(rule.coefficient(&part(&[7])), chain.mixed().alpha_empty());
        let d = WeightVector::symbolic(2).unwrap();
        assert!(is_pure_identity(&rule, &d).unwrap());
    }
}
