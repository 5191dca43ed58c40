//! Exact search for identities at fixed numeric weights.
//!
//! An identity candidate of weight `N` is a rational coefficient vector
//! indexed by partitions. Expanding every candidate term in the slot
//! variables turns "is an identity" into an exact homogeneous linear
//! system: one column per partition (canonical order), one row per
//! occurring slot monomial (and per slot, for mixed candidates). The
//! nullspace is computed fraction-free over big integers, so search
//! results are exact, deterministic, and reproducible.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::partition::{partitions_of, partitions_up_to, Partition};
use crate::poly::{Monomial, MultiPoly, Rational, VarId};
use crate::symfun::{
    eval_mixed_slot, eval_pure, power_sum, MixedIdentity, PowerSumEvaluator, PureIdentity,
    WeightVector,
};
use crate::Result;

// =============================================================================
// Linear systems
// =============================================================================

/// What kind of identity a system searches for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchKind {
    /// All partitions of exactly the target weight; one equation block.
    Pure,
    /// All partitions of weight at most the target, each padded by a slot
    /// power; one equation block per slot.
    Mixed,
}

/// A homogeneous system whose nullspace is the space of identities.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub kind: SearchKind,
    pub weight: u32,
    /// Column labels in canonical partition order.
    pub columns: Vec<Partition>,
    /// Row labels: slot index (1-based; always 1 for pure) and monomial.
    pub rows: Vec<(u32, Monomial)>,
    pub matrix: Vec<Vec<Rational>>,
}

fn require_numeric(d: &WeightVector, operation: &'static str) -> Result<()> {
    if !d.is_numeric() {
        return Err(Error::NumericWeightsRequired { operation });
    }
    Ok(())
}

/// Builds the exact linear system for identities of the given weight at
/// numeric weights `d`.
pub fn build_linear_system(
    d: &WeightVector,
    weight: u32,
    kind: SearchKind,
) -> Result<LinearSystem> {
    require_numeric(d, "build_linear_system")?;
    if weight == 0 {
        return Err(Error::MalformedIdentity("weight must be at least 1".into()));
    }
    let columns: Vec<Partition> = match kind {
        SearchKind::Pure => partitions_of(weight).collect(),
        SearchKind::Mixed => partitions_up_to(weight).collect(),
    };
    let mut ev = PowerSumEvaluator::new(d);
    // entries[(slot, monomial)][column] accumulated sparsely.
    let mut entries: BTreeMap<(u32, Monomial), BTreeMap<usize, Rational>> = BTreeMap::new();
    for (col, lambda) in columns.iter().enumerate() {
        let base = ev.partition_product(lambda)?.clone();
        match kind {
            SearchKind::Pure => {
                for (mono, c) in base.terms() {
                    entries
                        .entry((1, mono.clone()))
                        .or_default()
                        .insert(col, c.clone());
                }
            }
            SearchKind::Mixed => {
                let pad = weight - lambda.weight();
                for slot in 1..=d.arity() {
                    let shifted =
                        base.mul_monomial(&Monomial::from_pairs([(VarId::x(slot), pad)]));
                    for (mono, c) in shifted.terms() {
                        entries
                            .entry((slot, mono.clone()))
                            .or_default()
                            .insert(col, c.clone());
                    }
                }
            }
        }
    }
    let mut rows = Vec::with_capacity(entries.len());
    let mut matrix = Vec::with_capacity(entries.len());
    for ((slot, mono), cols) in entries {
        let mut row = vec![Rational::zero(); columns.len()];
        for (col, c) in cols {
            row[col] = c;
        }
        rows.push((slot, mono));
        matrix.push(row);
    }
    Ok(LinearSystem {
        kind,
        weight,
        columns,
        rows,
        matrix,
    })
}

// =============================================================================
// Fraction-free nullspace
// =============================================================================

fn clear_row_denominators(row: &[Rational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in row {
        lcm = lcm.lcm(c.denom());
    }
    row.iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect()
}

/// Exact nullspace basis by fraction-free (Bareiss) elimination with
/// first-nonzero pivoting, then rational back-substitution. Basis vectors
/// correspond one-to-one to free columns, each set to 1 with the other
/// free columns at 0.
pub fn nullspace(matrix: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<BigInt>> = matrix.iter().map(|r| clear_row_denominators(r)).collect();
    let nrows = m.len();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut prev = BigInt::one();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pivot_row) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot_row);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let updated = (&m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev;
                m[r][c] = updated;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        pivot_cols.push(col);
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; ncols];
        for &c in &pivot_cols {
            v[c] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut x = vec![Rational::zero(); ncols];
        x[free] = Rational::one();
        for i in (0..rank).rev() {
            let pc = pivot_cols[i];
            let mut acc = Rational::zero();
            for c in pc + 1..ncols {
                if !x[c].is_zero() && !m[i][c].is_zero() {
                    acc += Rational::from(m[i][c].clone()) * &x[c];
                }
            }
            x[pc] = -acc / Rational::from(m[i][pc].clone());
        }
        basis.push(x);
    }
    basis
}

/// Scales a solution so its distinguished coordinate is 1: the all-ones
/// partition's coefficient when nonzero, otherwise the first nonzero
/// coordinate in canonical column order.
pub fn normalize_solution(columns: &[Partition], solution: &mut [Rational], weight: u32) {
    let unit = crate::symfun::all_ones(weight);
    let unit_idx = columns.iter().position(|l| *l == unit);
    let idx = match unit_idx {
        Some(i) if !solution[i].is_zero() => Some(i),
        _ => solution.iter().position(|c| !c.is_zero()),
    };
    if let Some(i) = idx {
        let scale = solution[i].clone();
        for c in solution.iter_mut() {
            *c /= &scale;
        }
    }
}

// =============================================================================
// Identity search
// =============================================================================

/// Pure identities of one weight at fixed numeric weights.
#[derive(Clone, Debug)]
pub struct PureSearch {
    pub weight: u32,
    pub dimension: usize,
    pub basis: Vec<PureIdentity>,
}

/// Mixed identities up to one weight at fixed numeric weights.
#[derive(Clone, Debug)]
pub struct MixedSearch {
    pub weight: u32,
    pub dimension: usize,
    pub basis: Vec<MixedIdentity>,
    /// A monic representative (nonzero bare-`t` coefficient, all-ones
    /// coefficient scaled to 1) when the solution space contains one.
    pub monic: Option<MixedIdentity>,
}

fn solution_terms(
    columns: &[Partition],
    solution: &[Rational],
) -> Vec<(Partition, MultiPoly)> {
    columns
        .iter()
        .zip(solution)
        .filter(|(_, c)| !c.is_zero())
        .map(|(l, c)| (l.clone(), MultiPoly::constant(c.clone())))
        .collect()
}

/// Finds every pure identity of the given weight at `d`, as a normalized
/// nullspace basis.
pub fn search_pure(d: &WeightVector, weight: u32) -> Result<PureSearch> {
    let system = build_linear_system(d, weight, SearchKind::Pure)?;
    let mut basis = Vec::new();
    for mut v in nullspace(&system.matrix, system.columns.len()) {
        normalize_solution(&system.columns, &mut v, weight);
        basis.push(PureIdentity::new(
            d.arity(),
            weight,
            solution_terms(&system.columns, &v),
        )?);
    }
    Ok(PureSearch {
        weight,
        dimension: basis.len(),
        basis,
    })
}

/// Finds every mixed identity of the given weight at `d`, plus a monic
/// representative if one exists in the span.
pub fn search_mixed(d: &WeightVector, weight: u32) -> Result<MixedSearch> {
    let system = build_linear_system(d, weight, SearchKind::Mixed)?;
    let raw = nullspace(&system.matrix, system.columns.len());
    let empty_idx = system
        .columns
        .iter()
        .position(Partition::is_empty)
        .expect("the empty partition is always a column");
    let mut basis = Vec::new();
    let mut monic = None;
    for v in &raw {
        let mut w = v.clone();
        normalize_solution(&system.columns, &mut w, weight);
        let identity = MixedIdentity::new(
            d.arity(),
            weight,
            solution_terms(&system.columns, &w),
        )?;
        if monic.is_none() && !v[empty_idx].is_zero() {
            // Scale so the all-ones coefficient is 1 when possible; the
            // canonicalized copy keeps the nonzero bare-t coefficient.
            monic = Some(identity.clone());
        }
        basis.push(identity);
    }
    Ok(MixedSearch {
        weight,
        dimension: basis.len(),
        basis,
        monic,
    })
}

/// Outcome of an incremental minimal-weight search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalSearch {
    pub found: Option<u32>,
    pub searched_up_to: u32,
}

/// Smallest weight carrying a monic mixed identity at `d`, scanning
/// weights `1..=cap`.
pub fn minimal_monic_mixed_weight(d: &WeightVector, cap: u32) -> Result<MinimalSearch> {
    for weight in 1..=cap {
        if search_mixed(d, weight)?.monic.is_some() {
            return Ok(MinimalSearch {
                found: Some(weight),
                searched_up_to: weight,
            });
        }
    }
    Ok(MinimalSearch {
        found: None,
        searched_up_to: cap,
    })
}

/// Smallest weight carrying any nonzero pure identity at `d`, scanning
/// weights `1..=cap`.
pub fn minimal_pure_weight(d: &WeightVector, cap: u32) -> Result<MinimalSearch> {
    for weight in 1..=cap {
        if search_pure(d, weight)?.dimension > 0 {
            return Ok(MinimalSearch {
                found: Some(weight),
                searched_up_to: weight,
            });
        }
    }
    Ok(MinimalSearch {
        found: None,
        searched_up_to: cap,
    })
}

// =============================================================================
// Multiplicity predictions
// =============================================================================

/// Distinct weight values with their multiplicities, sorted by value.
pub fn multiplicity_profile(d: &WeightVector) -> Result<Vec<(Rational, u32)>> {
    let entries = d
        .entries()
        .ok_or(Error::NumericWeightsRequired {
            operation: "multiplicity_profile",
        })?;
    let mut counts: BTreeMap<Rational, u32> = BTreeMap::new();
    for e in entries {
        *counts.entry(e.clone()).or_insert(0) += 1;
    }
    Ok(counts.into_iter().collect())
}

/// The product of `(multiplicity + 1)` over distinct weight values.
pub fn profile_product(profile: &[(Rational, u32)]) -> u64 {
    profile.iter().map(|(_, m)| u64::from(*m) + 1).product()
}

/// How a searched minimum compares with the profile prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Match,
    Mismatch,
    /// The search cap was reached without an answer.
    Inconclusive,
}

fn verdict(found: &MinimalSearch, predicted: u64) -> Verdict {
    match found.found {
        Some(w) if u64::from(w) == predicted => Verdict::Match,
        Some(_) => Verdict::Mismatch,
        None => {
            if u64::from(found.searched_up_to) >= predicted {
                Verdict::Mismatch
            } else {
                Verdict::Inconclusive
            }
        }
    }
}

/// Compares searched minimal weights against the multiplicity-profile
/// predictions: with `m` the profile product, monic mixed identities are
/// expected to start at weight `m - 1` and pure identities at weight `m`.
#[derive(Clone, Debug)]
pub struct PredictionReport {
    pub profile: Vec<(Rational, u32)>,
    pub profile_product: u64,
    pub predicted_mixed_weight: u64,
    pub predicted_pure_weight: u64,
    pub mixed_search: MinimalSearch,
    pub pure_search: MinimalSearch,
    pub mixed_verdict: Verdict,
    pub pure_verdict: Verdict,
}

/// Runs both minimal searches up to `cap` and grades them against the
/// profile predictions.
pub fn prediction_report(d: &WeightVector, cap: u32) -> Result<PredictionReport> {
    let profile = multiplicity_profile(d)?;
    let m = profile_product(&profile);
    let mixed_search = minimal_monic_mixed_weight(d, cap)?;
    let pure_search = minimal_pure_weight(d, cap)?;
    Ok(PredictionReport {
        mixed_verdict: verdict(&mixed_search, m - 1),
        pure_verdict: verdict(&pure_search, m),
        profile,
        profile_product: m,
        predicted_mixed_weight: m - 1,
        predicted_pure_weight: m,
        mixed_search,
        pure_search,
    })
}

// =============================================================================
// Cross-validation
// =============================================================================

/// Agreement record between two independent evaluation paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossValidation {
    /// The structured path (shared power-sum cache) found zero.
    pub structured_zero: bool,
    /// The direct path (generic substitution into the flattened form)
    /// found zero.
    pub direct_zero: bool,
}

impl CrossValidation {
    /// Both paths computed the same verdict.
    pub fn agreed(&self) -> bool {
        self.structured_zero == self.direct_zero
    }

    /// Both paths agree the candidate is an identity.
    pub fn confirms_identity(&self) -> bool {
        self.structured_zero && self.direct_zero
    }
}

/// Evaluates a pure candidate along two independent code paths
/// (structured expansion with a shared power-sum cache vs. generic
/// substitution into the flattened form) and compares verdicts. Works for
/// any candidate, identity or not.
pub fn cross_validate_pure(f: &PureIdentity, d: &WeightVector) -> Result<CrossValidation> {
    if f.arity() != d.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: d.arity(),
        });
    }
    let structured = eval_pure(f, d)?;
    let flat = f.to_poly();
    let mut bind = d.d_bindings();
    for v in flat.variables() {
        if let VarId::P(n) = v {
            bind.insert(v, power_sum(d, n)?);
        }
    }
    let direct = flat.substitute(&bind);
    Ok(CrossValidation {
        structured_zero: structured.is_zero(),
        direct_zero: direct.is_zero(),
    })
}

/// Evaluates a mixed candidate in every slot along two independent code
/// paths (structured slot evaluation vs. substitution into the flattened
/// form with `t` bound to the slot variable) and compares verdicts.
pub fn cross_validate_mixed(f: &MixedIdentity, d: &WeightVector) -> Result<CrossValidation> {
    if f.arity() != d.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: d.arity(),
        });
    }
    let mut structured_zero = true;
    for slot in 1..=f.arity() {
        structured_zero &= eval_mixed_slot(f, d, slot)?.is_zero();
    }
    let direct = crate::symfun::matrix_eval(f, d)?;
    Ok(CrossValidation {
        structured_zero,
        direct_zero: direct.is_zero(),
    })
}
