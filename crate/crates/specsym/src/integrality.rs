//! The zero-sum obstruction to monic mixed identities.
//!
//! If some nonempty subset `I` of the numeric weights sums to zero, then
//! specializing `x_i` to a common value for `i` in `I` and to zero
//! elsewhere kills every power sum `p_j` at once. A monic mixed identity
//! would survive that specialization as `alpha_empty * t^N = 0` with
//! `alpha_empty != 0`, which is absurd; so no monic mixed identity exists
//! at such weights, and high power sums cannot be rewritten in terms of
//! low ones there. This module finds zero-sum subsets, demonstrates the
//! specialization argument by exact expansion, and checks that the chain's
//! leading coefficients really do vanish on every zero-sum locus.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::Error;
use crate::poly::{MultiPoly, Rational, VarId};
use crate::symfun::{power_sum, MixedIdentity, WeightVector};
use crate::Result;

/// Largest arity the subset scan will enumerate (`2^k` masks).
pub const MAX_SCAN_ARITY: u32 = 20;

fn require_numeric(d: &WeightVector, operation: &'static str) -> Result<Vec<Rational>> {
    match d.entries() {
        Some(entries) => Ok(entries.to_vec()),
        None => Err(Error::NumericWeightsRequired { operation }),
    }
}

/// Cleans a subset description: sorted, deduplicated, 1-based indices in
/// range.
fn normalize_subset(subset: &[u32], arity: u32) -> Result<Vec<u32>> {
    let mut v = subset.to_vec();
    v.sort_unstable();
    v.dedup();
    for &i in &v {
        if i == 0 || i > arity {
            return Err(Error::WeightIndexOutOfRange { index: i, arity });
        }
    }
    Ok(v)
}

/// Sum of the weights indexed by `subset` (1-based, duplicates ignored).
pub fn subset_sum(d: &WeightVector, subset: &[u32]) -> Result<Rational> {
    let entries = require_numeric(d, "subset_sum")?;
    let subset = normalize_subset(subset, d.arity())?;
    let mut acc = Rational::zero();
    for i in subset {
        acc += &entries[(i - 1) as usize];
    }
    Ok(acc)
}

/// Finds the first nonempty subset of the weights that sums to zero, in
/// ascending bitmask order (so ties resolve deterministically toward
/// low indices). Returns sorted 1-based indices.
pub fn find_zero_subset(d: &WeightVector) -> Result<Option<Vec<u32>>> {
    let entries = require_numeric(d, "find_zero_subset")?;
    let k = d.arity();
    if k > MAX_SCAN_ARITY {
        return Err(Error::BudgetExceeded {
            what: "zero-subset scan arity".into(),
            used: u64::from(k),
            limit: u64::from(MAX_SCAN_ARITY),
        });
    }
    for mask in 1u32..(1u32 << k) {
        let mut acc = Rational::zero();
        for (idx, entry) in entries.iter().enumerate() {
            if mask & (1 << idx) != 0 {
                acc += entry;
            }
        }
        if acc.is_zero() {
            let subset = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
            return Ok(Some(subset));
        }
    }
    Ok(None)
}

/// Exact record of the specialization argument for one zero-sum subset.
#[derive(Clone, Debug)]
pub struct ObstructionDemo {
    /// The zero-sum subset, sorted 1-based indices.
    pub subset: Vec<u32>,
    /// Highest power-sum index checked.
    pub power_cap: u32,
    /// For each `j = 1..=power_cap`, whether the specialized `p_j`
    /// expanded to zero.
    pub per_power: Vec<bool>,
}

impl ObstructionDemo {
    pub fn all_powers_vanish(&self) -> bool {
        self.per_power.iter().all(|&ok| ok)
    }
}

/// Verifies that `subset` sums to zero and then demonstrates the
/// obstruction: substituting a common value for the subset slots and zero
/// for the rest must kill `p_1, ..., p_power_cap` exactly.
pub fn demonstrate_obstruction(
    d: &WeightVector,
    subset: &[u32],
    power_cap: u32,
) -> Result<ObstructionDemo> {
    require_numeric(d, "demonstrate_obstruction")?;
    let subset = normalize_subset(subset, d.arity())?;
    if subset.is_empty() || !subset_sum(d, &subset)?.is_zero() {
        return Err(Error::NotAZeroSumSubset { subset });
    }
    let common = MultiPoly::var(VarId::x(1));
    let mut bind: BTreeMap<VarId, MultiPoly> = BTreeMap::new();
    for i in 1..=d.arity() {
        let target = if subset.contains(&i) {
            common.clone()
        } else {
            MultiPoly::zero()
        };
        bind.insert(VarId::x(i), target);
    }
    let mut per_power = Vec::with_capacity(power_cap as usize);
    for j in 1..=power_cap {
        let specialized = power_sum(d, j)?.substitute(&bind);
        per_power.push(specialized.is_zero());
    }
    Ok(ObstructionDemo {
        subset,
        power_cap,
        per_power,
    })
}

/// Value of a mixed identity's bare-`t` coefficient at numeric weights.
/// Zero exactly when the identity stops being monic there.
pub fn alpha_empty_value(f: &MixedIdentity, d: &WeightVector) -> Result<Rational> {
    require_numeric(d, "alpha_empty_value")?;
    if f.arity() != d.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: d.arity(),
        });
    }
    Ok(f.alpha_empty()
        .substitute(&d.d_bindings())
        .as_constant()
        .expect("numeric weights leave a constant"))
}

/// Symbolic converse check: on every locus `sum_(i in I) d_i = 0` the
/// bare-`t` coefficient of `f` must vanish identically. For each nonempty
/// subset the locus is imposed by eliminating one of its variables
/// (singletons set `d_i = 0`). Returns `(subset, vanished)` pairs in
/// ascending bitmask order.
pub fn leading_vanishes_on_zero_sum_loci(
    f: &MixedIdentity,
) -> Result<Vec<(Vec<u32>, bool)>> {
    let k = f.arity();
    if k > MAX_SCAN_ARITY {
        return Err(Error::BudgetExceeded {
            what: "zero-sum locus scan arity".into(),
            used: u64::from(k),
            limit: u64::from(MAX_SCAN_ARITY),
        });
    }
    let alpha = f.alpha_empty();
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << k) {
        let subset: Vec<u32> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
        let mut bind: BTreeMap<VarId, MultiPoly> = BTreeMap::new();
        let (&last, rest) = subset.split_last().expect("mask is nonzero");
        if rest.is_empty() {
            bind.insert(VarId::d(last), MultiPoly::zero());
        } else {
            let mut sum = MultiPoly::zero();
            for &i in rest {
                sum = &sum - &MultiPoly::var(VarId::d(i));
            }
            bind.insert(VarId::d(last), sum);
        }
        out.push((subset, alpha.substitute(&bind).is_zero()));
    }
    Ok(out)
}
