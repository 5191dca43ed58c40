//! Weight vectors, specialized power sums, and trace identities.
//!
//! For a weight vector `d = (d_1, ..., d_k)` the algebra under study is the
//! set of diagonal matrices `X = diag(x_1, ..., x_k)` equipped with the
//! weighted trace `tr(X) = d_1 x_1 + ... + d_k x_k`, so that
//! `tr(X^n) = p_n = d_1 x_1^n + ... + d_k x_k^n` (a *specialized power sum*).
//!
//! Two identity shapes are handled:
//!
//! * a [`PureIdentity`] of weight `N` is a combination
//!   `sum over partitions lambda of N  of  alpha_lambda * p_lambda`
//!   that vanishes identically in the `x`-variables once each `p_n` is
//!   expanded (here `p_lambda = p_{lambda_1} * p_{lambda_2} * ...`);
//! * a [`MixedIdentity`] of weight `N` also carries the matrix itself as a
//!   placeholder letter `t`:
//!   `sum over |lambda| <= N  of  alpha_lambda * p_lambda * t^(N - |lambda|)`,
//!   which must vanish when `t` is replaced by any diagonal slot `x_j`.
//!
//! Coefficients `alpha_lambda` are polynomials in the symbolic weights
//! `d_1, ..., d_k` (constants when the weights are numeric). An identity is
//! *sufficiently monic* when its unit coefficient (`p_1^N`) is exactly 1 and
//! its top coefficient (`p_N` for pure, the bare `t^N` for mixed) is nonzero
//! as a polynomial; at numeric weights "nonzero" means nonzero after
//! evaluation.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::partition::Partition;
use crate::poly::{rat, rational_string, Monomial, MultiPoly, Rational, VarId};
use crate::Result;

// =============================================================================
// Weight vectors
// =============================================================================

/// A vector of algebra weights: either fully symbolic (`d1, ..., dk`) or a
/// concrete vector of nonzero rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum WeightVector {
    Symbolic { arity: u32 },
    Numeric { entries: Vec<Rational> },
}

impl WeightVector {
    /// Fully symbolic weights of the given arity.
    pub fn symbolic(arity: u32) -> Result<Self> {
        if arity == 0 {
            return Err(Error::EmptyWeightVector);
        }
        Ok(WeightVector::Symbolic { arity })
    }

    /// Concrete weights; every entry must be nonzero.
    pub fn numeric(entries: Vec<Rational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyWeightVector);
        }
        for (i, e) in entries.iter().enumerate() {
            if e.is_zero() {
                return Err(Error::ZeroWeightEntry { position: i + 1 });
            }
        }
        Ok(WeightVector::Numeric { entries })
    }

    /// Concrete weights from integers.
    pub fn from_ints(entries: &[i64]) -> Result<Self> {
        WeightVector::numeric(entries.iter().map(|&n| rat(n)).collect())
    }

    pub fn arity(&self) -> u32 {
        match self {
            WeightVector::Symbolic { arity } => *arity,
            WeightVector::Numeric { entries } => entries.len() as u32,
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, WeightVector::Numeric { .. })
    }

    /// The concrete entries, when numeric.
    pub fn entries(&self) -> Option<&[Rational]> {
        match self {
            WeightVector::Symbolic { .. } => None,
            WeightVector::Numeric { entries } => Some(entries),
        }
    }

    /// The i-th weight as a polynomial: the variable `d{i}` in symbolic mode,
    /// a constant in numeric mode. Indices run `1..=arity`.
    pub fn entry_poly(&self, i: u32) -> Result<MultiPoly> {
        if i == 0 || i > self.arity() {
            return Err(Error::WeightIndexOutOfRange {
                index: i,
                arity: self.arity(),
            });
        }
        Ok(match self {
            WeightVector::Symbolic { .. } => MultiPoly::var(VarId::d(i)),
            WeightVector::Numeric { entries } => {
                MultiPoly::constant(entries[(i - 1) as usize].clone())
            }
        })
    }

    /// The vector with entry `i` removed (arity drops by one).
    pub fn without_entry(&self, i: u32) -> Result<Self> {
        if i == 0 || i > self.arity() {
            return Err(Error::WeightIndexOutOfRange {
                index: i,
                arity: self.arity(),
            });
        }
        if self.arity() == 1 {
            return Err(Error::EmptyWeightVector);
        }
        Ok(match self {
            WeightVector::Symbolic { arity } => WeightVector::Symbolic { arity: arity - 1 },
            WeightVector::Numeric { entries } => {
                let mut e = entries.clone();
                e.remove((i - 1) as usize);
                WeightVector::Numeric { entries: e }
            }
        })
    }

    /// Bindings `d{i} -> entry` for evaluating symbolic coefficients at
    /// numeric weights. Empty in symbolic mode.
    pub fn d_bindings(&self) -> BTreeMap<VarId, MultiPoly> {
        match self {
            WeightVector::Symbolic { .. } => BTreeMap::new(),
            WeightVector::Numeric { entries } => entries
                .iter()
                .enumerate()
                .map(|(i, e)| (VarId::d(i as u32 + 1), MultiPoly::constant(e.clone())))
                .collect(),
        }
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightVector::Symbolic { arity } => {
                write!(f, "(")?;
                for i in 1..=*arity {
                    if i > 1 {
                        write!(f, ",")?;
                    }
                    write!(f, "d{i}")?;
                }
                write!(f, ")")
            }
            WeightVector::Numeric { entries } => {
                write!(f, "(")?;
                for (i, e) in entries.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", rational_string(e))?;
                }
                write!(f, ")")
            }
        }
    }
}

/// The specialized power sum `p_n = sum_i d_i x_i^n` for the given weights.
/// Requires `n >= 1`.
pub fn power_sum(d: &WeightVector, n: u32) -> Result<MultiPoly> {
    if n == 0 {
        return Err(Error::PowerSumIndex(0));
    }
    let mut out = MultiPoly::zero();
    for i in 1..=d.arity() {
        let x_pow = MultiPoly::from_monomial(Monomial::from_pairs([(VarId::x(i), n)]), rat(1));
        out += &d.entry_poly(i)? * &x_pow;
    }
    Ok(out)
}

// =============================================================================
// Partition <-> monomial bridges
// =============================================================================

/// `p_lambda` as a monomial in the trace letters: part `n` with multiplicity
/// `m` becomes `p{n}^m`.
pub fn partition_monomial(lambda: &Partition) -> Monomial {
    Monomial::from_pairs(
        lambda
            .multiplicities()
            .into_iter()
            .map(|(part, mult)| (VarId::p(part), mult)),
    )
}

fn monomial_partition(m: &Monomial) -> Result<Partition> {
    let mut parts = Vec::new();
    for &(v, e) in m.iter() {
        match v {
            VarId::P(n) => parts.extend(std::iter::repeat(n).take(e as usize)),
            other => {
                return Err(Error::MalformedIdentity(format!(
                    "expected only trace letters, found {other}"
                )))
            }
        }
    }
    Partition::from_unsorted(parts).map_err(|e| Error::MalformedIdentity(e.to_string()))
}

fn check_coefficient_vars(alpha: &MultiPoly, arity: u32) -> Result<()> {
    for v in alpha.variables() {
        match v {
            VarId::D(i) if i <= arity => {}
            other => {
                return Err(Error::MalformedIdentity(format!(
                    "coefficient may only use d1..d{arity}, found {other}"
                )))
            }
        }
    }
    Ok(())
}

// =============================================================================
// Pure identities
// =============================================================================

/// A weight-homogeneous combination `sum alpha_lambda p_lambda` over the
/// partitions of a fixed weight, with coefficients polynomial in the
/// symbolic weights.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PureIdentity {
    arity: u32,
    weight: u32,
    coeffs: BTreeMap<Partition, MultiPoly>,
}

impl PureIdentity {
    pub fn new(
        arity: u32,
        weight: u32,
        coeffs: impl IntoIterator<Item = (Partition, MultiPoly)>,
    ) -> Result<Self> {
        if arity == 0 {
            return Err(Error::EmptyWeightVector);
        }
        if weight == 0 {
            return Err(Error::MalformedIdentity("weight must be >= 1".into()));
        }
        let mut map = BTreeMap::new();
        for (lambda, alpha) in coeffs {
            if alpha.is_zero() {
                continue;
            }
            if lambda.weight() != weight {
                return Err(Error::MalformedIdentity(format!(
                    "partition {lambda} has weight {} but the identity has weight {weight}",
                    lambda.weight()
                )));
            }
            check_coefficient_vars(&alpha, arity)?;
            let entry: &mut MultiPoly = map.entry(lambda).or_insert_with(MultiPoly::zero);
            *entry = &*entry + &alpha;
        }
        map.retain(|_, alpha: &mut MultiPoly| !alpha.is_zero());
        Ok(PureIdentity { arity, weight, coeffs: map })
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Terms in canonical partition order.
    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &MultiPoly)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, lambda: &Partition) -> MultiPoly {
        self.coeffs.get(lambda).cloned().unwrap_or_else(MultiPoly::zero)
    }

    /// Flattens to a polynomial in the trace letters `p{n}` and the symbolic
    /// weights.
    pub fn to_poly(&self) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (lambda, alpha) in &self.coeffs {
            out += alpha.mul_monomial(&partition_monomial(lambda));
        }
        out
    }

    /// Collects a flattened polynomial back into identity form. Every term
    /// must be (d-monomial) x (trace-letter monomial) of the stated weight.
    pub fn from_poly(poly: &MultiPoly, arity: u32, weight: u32) -> Result<Self> {
        let mut coeffs: BTreeMap<Partition, MultiPoly> = BTreeMap::new();
        for (m, c) in poly.terms() {
            let mut d_part = Vec::new();
            let mut p_part = Vec::new();
            for &(v, e) in m.iter() {
                match v {
                    VarId::D(_) => d_part.push((v, e)),
                    VarId::P(_) => p_part.push((v, e)),
                    other => {
                        return Err(Error::MalformedIdentity(format!(
                            "unexpected variable {other} in pure identity"
                        )))
                    }
                }
            }
            let lambda = monomial_partition(&Monomial::from_pairs(p_part))?;
            let entry = coeffs.entry(lambda).or_insert_with(MultiPoly::zero);
            *entry = &*entry + &MultiPoly::from_monomial(Monomial::from_pairs(d_part), c.clone());
        }
        PureIdentity::new(arity, weight, coeffs)
    }

    /// Scales every coefficient by a rational.
    pub fn scale(&self, c: &Rational) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(l, a)| (l.clone(), a.scale(c)))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        PureIdentity {
            arity: self.arity,
            weight: self.weight,
            coeffs,
        }
    }

    /// The unit coefficient `alpha` at `p_1^N`.
    pub fn unit_coefficient(&self) -> MultiPoly {
        self.coefficient(&all_ones(self.weight))
    }

    /// The top coefficient `alpha` at the single-row partition `(N)`.
    pub fn top_coefficient(&self) -> MultiPoly {
        self.coefficient(&Partition::new([self.weight]))
    }

    /// Monicity report; see [`MonicReport`]. Pass numeric weights to get the
    /// numeric-mode check.
    pub fn monic_report(&self, d: Option<&WeightVector>) -> Result<MonicReport> {
        monic_report_from(
            self.arity,
            self.top_coefficient(),
            self.unit_coefficient(),
            d,
        )
    }

    /// Symbolic-mode sufficient monicity: top coefficient nonzero as a
    /// polynomial and unit coefficient exactly 1.
    pub fn is_sufficiently_monic(&self) -> bool {
        self.monic_report(None).map(|r| r.is_monic).unwrap_or(false)
    }

    /// Scales the unit coefficient to 1 when it is a nonzero rational;
    /// otherwise returns the identity unchanged.
    pub fn canonicalize(&self) -> Self {
        match self.unit_coefficient().as_constant() {
            Some(c) if !c.is_zero() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    /// Equality up to a nonzero rational scalar.
    pub fn equals_up_to_scale(&self, other: &Self) -> bool {
        self.arity == other.arity
            && self.weight == other.weight
            && maps_proportional(&self.coeffs, &other.coeffs)
    }
}

/// The all-ones partition `(1^n)`.
pub fn all_ones(n: u32) -> Partition {
    Partition::new(vec![1u32; n as usize])
}

fn maps_proportional(
    a: &BTreeMap<Partition, MultiPoly>,
    b: &BTreeMap<Partition, MultiPoly>,
) -> bool {
    if a.is_empty() || b.is_empty() {
        return a.is_empty() && b.is_empty();
    }
    if a.keys().ne(b.keys()) {
        return false;
    }
    // Ratio fixed by the first coefficient pair; both leading monomials must
    // agree for a rational ratio to exist.
    let (_, ca) = a.iter().next().unwrap();
    let (_, cb) = b.iter().next().unwrap();
    let (ma, la) = match ca.leading_term() {
        Some(t) => t,
        None => return false,
    };
    let (mb, lb) = match cb.leading_term() {
        Some(t) => t,
        None => return false,
    };
    if ma != mb {
        return false;
    }
    let ratio = la / lb;
    a.iter()
        .zip(b.iter())
        .all(|((_, pa), (_, pb))| *pa == pb.scale(&ratio))
}

// =============================================================================
// Mixed identities
// =============================================================================

/// A weight-homogeneous combination
/// `sum over |lambda| <= N of alpha_lambda p_lambda t^(N - |lambda|)`
/// where `t` stands for the matrix itself (weight 1).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MixedIdentity {
    arity: u32,
    weight: u32,
    coeffs: BTreeMap<Partition, MultiPoly>,
}

impl MixedIdentity {
    pub fn new(
        arity: u32,
        weight: u32,
        coeffs: impl IntoIterator<Item = (Partition, MultiPoly)>,
    ) -> Result<Self> {
        if arity == 0 {
            return Err(Error::EmptyWeightVector);
        }
        if weight == 0 {
            return Err(Error::MalformedIdentity("weight must be >= 1".into()));
        }
        let mut map = BTreeMap::new();
        for (lambda, alpha) in coeffs {
            if alpha.is_zero() {
                continue;
            }
            if lambda.weight() > weight {
                return Err(Error::MalformedIdentity(format!(
                    "partition {lambda} exceeds identity weight {weight}"
                )));
            }
            check_coefficient_vars(&alpha, arity)?;
            let entry: &mut MultiPoly = map.entry(lambda).or_insert_with(MultiPoly::zero);
            *entry = &*entry + &alpha;
        }
        map.retain(|_, alpha: &mut MultiPoly| !alpha.is_zero());
        Ok(MixedIdentity { arity, weight, coeffs: map })
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Terms in canonical partition order (ascending partition weight, i.e.
    /// descending power of `t`).
    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &MultiPoly)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, lambda: &Partition) -> MultiPoly {
        self.coeffs.get(lambda).cloned().unwrap_or_else(MultiPoly::zero)
    }

    /// The coefficient of the bare `t^N` term.
    pub fn alpha_empty(&self) -> MultiPoly {
        self.coefficient(&Partition::empty())
    }

    /// The unit coefficient at `p_1^N`.
    pub fn unit_coefficient(&self) -> MultiPoly {
        self.coefficient(&all_ones(self.weight))
    }

    /// Flattens to a polynomial in the trace letters, `t`, and the symbolic
    /// weights.
    pub fn to_poly(&self) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (lambda, alpha) in &self.coeffs {
            let mono = partition_monomial(lambda)
                .mul(&Monomial::from_pairs([(VarId::t(), self.weight - lambda.weight())]));
            out += alpha.mul_monomial(&mono);
        }
        out
    }

    /// Collects a flattened polynomial back into mixed form. Every term must
    /// be (d-monomial) x (trace monomial) x `t^e` with
    /// `e = weight - |lambda|`; anything else is rejected, so this doubles
    /// as a homogeneity check.
    pub fn from_poly(poly: &MultiPoly, arity: u32, weight: u32) -> Result<Self> {
        let mut coeffs: BTreeMap<Partition, MultiPoly> = BTreeMap::new();
        for (m, c) in poly.terms() {
            let mut d_part = Vec::new();
            let mut p_part = Vec::new();
            let mut t_exp = 0u32;
            for &(v, e) in m.iter() {
                match v {
                    VarId::D(_) => d_part.push((v, e)),
                    VarId::P(_) => p_part.push((v, e)),
                    VarId::T => t_exp = e,
                    other => {
                        return Err(Error::MalformedIdentity(format!(
                            "unexpected variable {other} in mixed identity"
                        )))
                    }
                }
            }
            let lambda = monomial_partition(&Monomial::from_pairs(p_part))?;
            if lambda.weight() + t_exp != weight {
                return Err(Error::MalformedIdentity(format!(
                    "term p_{lambda} t^{t_exp} is not weight-homogeneous of weight {weight}"
                )));
            }
            let entry = coeffs.entry(lambda).or_insert_with(MultiPoly::zero);
            *entry = &*entry + &MultiPoly::from_monomial(Monomial::from_pairs(d_part), c.clone());
        }
        MixedIdentity::new(arity, weight, coeffs)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(l, a)| (l.clone(), a.scale(c)))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        MixedIdentity {
            arity: self.arity,
            weight: self.weight,
            coeffs,
        }
    }

    /// Monicity report: top coefficient is `alpha_empty` (the bare `t^N`).
    pub fn monic_report(&self, d: Option<&WeightVector>) -> Result<MonicReport> {
        monic_report_from(self.arity, self.alpha_empty(), self.unit_coefficient(), d)
    }

    pub fn is_sufficiently_monic(&self) -> bool {
        self.monic_report(None).map(|r| r.is_monic).unwrap_or(false)
    }

    pub fn canonicalize(&self) -> Self {
        match self.unit_coefficient().as_constant() {
            Some(c) if !c.is_zero() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    pub fn equals_up_to_scale(&self, other: &Self) -> bool {
        self.arity == other.arity
            && self.weight == other.weight
            && maps_proportional(&self.coeffs, &other.coeffs)
    }
}

// =============================================================================
// Monicity
// =============================================================================

/// Result of a sufficient-monicity check.
#[derive(Clone, Debug)]
pub struct MonicReport {
    /// Coefficient that must not vanish: `alpha_(N)` for pure identities,
    /// `alpha_empty` for mixed ones.
    pub top_coefficient: MultiPoly,
    /// Coefficient of `p_1^N`; must be exactly 1.
    pub unit_coefficient: MultiPoly,
    /// The top coefficient evaluated at the weights, when numeric weights
    /// were supplied.
    pub top_value: Option<Rational>,
    pub is_monic: bool,
}

fn monic_report_from(
    arity: u32,
    top: MultiPoly,
    unit: MultiPoly,
    d: Option<&WeightVector>,
) -> Result<MonicReport> {
    let top_value = match d {
        Some(w) => {
            if w.arity() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: w.arity(),
                });
            }
            match w {
                WeightVector::Symbolic { .. } => None,
                WeightVector::Numeric { .. } => Some(
                    top.substitute(&w.d_bindings())
                        .as_constant()
                        .expect("fully bound d-polynomial must be constant"),
                ),
            }
        }
        None => None,
    };
    let top_ok = match &top_value {
        Some(v) => !v.is_zero(),
        None => !top.is_zero(),
    };
    let is_monic = top_ok && unit.is_one();
    Ok(MonicReport {
        top_coefficient: top,
        unit_coefficient: unit,
        top_value,
        is_monic,
    })
}

// =============================================================================
// Evaluation and verification
// =============================================================================

/// Shared expansion cache: powers sums `p_n` and partition products
/// `p_lambda` expanded in the `x`-variables for one weight vector.
pub struct PowerSumEvaluator {
    d: WeightVector,
    powers: HashMap<u32, MultiPoly>,
    products: HashMap<Partition, MultiPoly>,
}

impl PowerSumEvaluator {
    pub fn new(d: &WeightVector) -> Self {
        let mut products = HashMap::new();
        products.insert(Partition::empty(), MultiPoly::one());
        PowerSumEvaluator {
            d: d.clone(),
            powers: HashMap::new(),
            products,
        }
    }

    pub fn weights(&self) -> &WeightVector {
        &self.d
    }

    fn ensure_power(&mut self, n: u32) -> Result<()> {
        if !self.powers.contains_key(&n) {
            let p = power_sum(&self.d, n)?;
            self.powers.insert(n, p);
        }
        Ok(())
    }

    fn ensure_product(&mut self, lambda: &Partition) -> Result<()> {
        if self.products.contains_key(lambda) {
            return Ok(());
        }
        let rest = lambda.without_max_part();
        self.ensure_product(&rest)?;
        self.ensure_power(lambda.max_part())?;
        let prod = &self.products[&rest] * &self.powers[&lambda.max_part()];
        self.products.insert(lambda.clone(), prod);
        Ok(())
    }

    /// The expansion of `p_lambda` in the `x`-variables (and symbolic `d`s).
    pub fn partition_product(&mut self, lambda: &Partition) -> Result<&MultiPoly> {
        self.ensure_product(lambda)?;
        Ok(&self.products[lambda])
    }
}

/// Expands a pure identity fully in the `x`-variables.
pub fn eval_pure(f: &PureIdentity, d: &WeightVector) -> Result<MultiPoly> {
    if f.arity() != d.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: d.arity(),
        });
    }
    let bind = d.d_bindings();
    let mut ev = PowerSumEvaluator::new(d);
    let mut out = MultiPoly::zero();
    for (lambda, alpha) in f.terms() {
        let alpha = if bind.is_empty() { alpha.clone() } else { alpha.substitute(&bind) };
        let prod = ev.partition_product(lambda)?;
        out += &alpha * prod;
    }
    Ok(out)
}

/// Expands one diagonal slot of a mixed identity: substitutes `t -> x_j` and
/// expands fully.
pub fn eval_mixed_slot(f: &MixedIdentity, d: &WeightVector, slot: u32) -> Result<MultiPoly> {
    if f.arity() != d.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: d.arity(),
        });
    }
    if slot == 0 || slot > f.arity() {
        return Err(Error::SlotOutOfRange {
            slot,
            arity: f.arity(),
        });
    }
    let bind = d.d_bindings();
    let mut ev = PowerSumEvaluator::new(d);
    let mut out = MultiPoly::zero();
    for (lambda, alpha) in f.terms() {
        let alpha = if bind.is_empty() { alpha.clone() } else { alpha.substitute(&bind) };
        let slot_mono = Monomial::from_pairs([(VarId::x(slot), f.weight() - lambda.weight())]);
        let prod = ev.partition_product(lambda)?;
        out += (&alpha * prod).mul_monomial(&slot_mono);
    }
    Ok(out)
}

/// Evaluation of a mixed identity on the whole diagonal algebra: one
/// polynomial per matrix slot. Computed by generic substitution into the
/// flattened polynomial, a deliberately independent code path from
/// [`eval_mixed_slot`].
#[derive(Clone, Debug)]
pub struct DiagonalEval {
    pub arity: u32,
    pub slots: Vec<MultiPoly>,
}

impl DiagonalEval {
    pub fn is_zero(&self) -> bool {
        self.slots.iter().all(MultiPoly::is_zero)
    }
}

/// Evaluates `f` with the matrix placeholder bound to each diagonal slot in
/// turn, by substitution into the flattened form.
pub fn matrix_eval(f: &MixedIdentity, d: &WeightVector) -> Result<DiagonalEval> {
    if f.arity() != d.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: d.arity(),
        });
    }
    let flat = f.to_poly();
    let mut common: BTreeMap<VarId, MultiPoly> = d.d_bindings();
    let mut max_p = 0;
    for v in flat.variables() {
        if let VarId::P(n) = v {
            max_p = max_p.max(n);
        }
    }
    for n in 1..=max_p {
        common.insert(VarId::p(n), power_sum(d, n)?);
    }
    let mut slots = Vec::new();
    for j in 1..=f.arity() {
        let mut bind = common.clone();
        bind.insert(VarId::t(), MultiPoly::var(VarId::x(j)));
        slots.push(flat.substitute(&bind));
    }
    Ok(DiagonalEval {
        arity: f.arity(),
        slots,
    })
}

/// Outcome of an exact verification, with a witness when it fails.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub ok: bool,
    /// Slot whose expansion was nonzero (always 1 for pure identities).
    pub failing_slot: Option<u32>,
    /// Leading term of the nonzero expansion, as text.
    pub witness: Option<String>,
}

impl VerifyReport {
    fn pass() -> Self {
        VerifyReport {
            ok: true,
            failing_slot: None,
            witness: None,
        }
    }

    fn fail(slot: u32, poly: &MultiPoly) -> Self {
        let witness = poly.leading_term().map(|(m, c)| {
            let coef = rational_string(c);
            if m.is_constant() {
                coef
            } else {
                format!("{coef}*{m}")
            }
        });
        VerifyReport {
            ok: false,
            failing_slot: Some(slot),
            witness,
        }
    }
}

/// Cheap numeric point evaluation used to short-circuit *failing*
/// verifications; a zero here proves nothing, a nonzero disproves.
fn pure_probe(f: &PureIdentity, d: &WeightVector) -> Result<bool> {
    let mut point = probe_point(d, f.arity())?;
    let mut acc = rat(0);
    for (lambda, alpha) in f.terms() {
        let a = alpha.eval_rational(&point.d_only)?;
        let mut prod = a;
        for &part in lambda.parts() {
            prod *= point.power(part);
        }
        acc += prod;
    }
    Ok(acc.is_zero())
}

struct ProbePoint {
    d_only: BTreeMap<VarId, Rational>,
    d_vals: Vec<Rational>,
    x_vals: Vec<Rational>,
    cache: HashMap<u32, Rational>,
}

impl ProbePoint {
    fn power(&mut self, n: u32) -> Rational {
        if let Some(v) = self.cache.get(&n) {
            return v.clone();
        }
        let mut total = rat(0);
        for (d, x) in self.d_vals.iter().zip(&self.x_vals) {
            let mut xp = rat(1);
            for _ in 0..n {
                xp *= x;
            }
            total += d * xp;
        }
        self.cache.insert(n, total.clone());
        total
    }
}

fn probe_point(d: &WeightVector, arity: u32) -> Result<ProbePoint> {
    // Fixed pseudo-generic point: prime-ish weights, distinct small x values.
    const PRIMES: [i64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
    let d_vals: Vec<Rational> = match d.entries() {
        Some(e) => e.to_vec(),
        None => (0..arity).map(|i| rat(PRIMES[(i % 8) as usize])).collect(),
    };
    let x_vals: Vec<Rational> = (0..arity).map(|i| rat(i as i64 + 2)).collect();
    let mut d_only = BTreeMap::new();
    for (i, v) in d_vals.iter().enumerate() {
        d_only.insert(VarId::d(i as u32 + 1), v.clone());
    }
    Ok(ProbePoint {
        d_only,
        d_vals,
        x_vals,
        cache: HashMap::new(),
    })
}

/// Full exact verification of a pure identity at the given weights.
pub fn verify_pure(f: &PureIdentity, d: &WeightVector) -> Result<VerifyReport> {
    if f.arity() != d.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: d.arity(),
        });
    }
    if d.is_numeric() && !pure_probe(f, d)? {
        // The probe is sound only in the failing direction; expand to get
        // the witness term.
        let expansion = eval_pure(f, d)?;
        return Ok(VerifyReport::fail(1, &expansion));
    }
    let expansion = eval_pure(f, d)?;
    if expansion.is_zero() {
        Ok(VerifyReport::pass())
    } else {
        Ok(VerifyReport::fail(1, &expansion))
    }
}

/// Full exact verification of a mixed identity: every slot must expand to
/// zero.
pub fn verify_mixed(f: &MixedIdentity, d: &WeightVector) -> Result<VerifyReport> {
    for slot in 1..=f.arity() {
        let expansion = eval_mixed_slot(f, d, slot)?;
        if !expansion.is_zero() {
            return Ok(VerifyReport::fail(slot, &expansion));
        }
    }
    Ok(VerifyReport::pass())
}

/// True when the pure combination vanishes identically at the weights.
pub fn is_pure_identity(f: &PureIdentity, d: &WeightVector) -> Result<bool> {
    Ok(verify_pure(f, d)?.ok)
}

/// True when the mixed combination vanishes in every slot at the weights.
pub fn is_mixed_identity(f: &MixedIdentity, d: &WeightVector) -> Result<bool> {
    Ok(verify_mixed(f, d)?.ok)
}

// =============================================================================
// Human-readable rendering
// =============================================================================

fn render_term(alpha: &MultiPoly, tail: &str, first: bool, out: &mut String) {
    let (content, prim) = alpha.content_split();
    let neg = content.is_negative();
    let mag = content.abs();
    let sign = if neg { "-" } else { "+" };
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(&format!(" {sign} "));
    }
    let coef_str = if prim.is_one() {
        if mag.is_one() && !tail.is_empty() {
            String::new()
        } else {
            rational_string(&mag)
        }
    } else if prim.num_terms() == 1 {
        let base = prim.to_string();
        if mag.is_one() {
            base
        } else {
            format!("{}*{}", rational_string(&mag), base)
        }
    } else if mag.is_one() {
        format!("({prim})")
    } else {
        format!("{}*({prim})", rational_string(&mag))
    };
    match (coef_str.is_empty(), tail.is_empty()) {
        (true, true) => out.push('1'),
        (true, false) => out.push_str(tail),
        (false, true) => out.push_str(&coef_str),
        (false, false) => out.push_str(&format!("{coef_str}*{tail}")),
    }
}

impl fmt::Display for PureIdentity {
    /// Human form: terms in canonical order, coefficients factored by
    /// content only, e.g. `-3*(d1+d2)*p2*p1^3 + p1^5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut s = String::new();
        for (i, (lambda, alpha)) in self.coeffs.iter().enumerate() {
            let tail = partition_monomial(lambda).to_string();
            let tail = if tail == "1" { String::new() } else { tail };
            render_term(alpha, &tail, i == 0, &mut s);
        }
        write!(f, "{s}")
    }
}

impl fmt::Display for MixedIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut s = String::new();
        for (i, (lambda, alpha)) in self.coeffs.iter().enumerate() {
            let p_mono = partition_monomial(lambda);
            let t_exp = self.weight - lambda.weight();
            let mut tail = String::new();
            if !p_mono.is_constant() {
                tail.push_str(&p_mono.to_string());
            }
            if t_exp > 0 {
                if !tail.is_empty() {
                    tail.push('*');
                }
                if t_exp == 1 {
                    tail.push('t');
                } else {
                    tail.push_str(&format!("t^{t_exp}"));
                }
            }
            render_term(alpha, &tail, i == 0, &mut s);
        }
        write!(f, "{s}")
    }
}

// =============================================================================
// Tests
// =============================================================================

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    /// `p1^2 - d1*p2` at arity 1.
    fn base_pure() -> PureIdentity {
        PureIdentity::new(
            1,
            2,
            [
                (Partition::new([1, 1]), MultiPoly::one()),
                (Partition::new([2]), pv("-d1")),
            ],
        )
        .unwrap()
    }

    /// The two one-variable root relations at arity 2, built from their
    /// hand-expanded coefficient tables.
    fn quadratic(i: u32) -> MixedIdentity {
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
                (Partition::new([1]), pv(mid)),
                (Partition::new([2]), pv(bot)),
                (Partition::new([1, 1]), MultiPoly::one()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn power_sum_shapes() {
        let sym = WeightVector::symbolic(2).unwrap();
        assert_eq!(power_sum(&sym, 1).unwrap(), pv("d1*x1+d2*x2"));
        assert_eq!(power_sum(&sym, 3).unwrap(), pv("d1*x1^3+d2*x2^3"));
        let num = WeightVector::from_ints(&[2, 3]).unwrap();
        assert_eq!(power_sum(&num, 2).unwrap(), pv("2*x1^2+3*x2^2"));
        assert!(power_sum(&sym, 0).is_err());
    }

    #[test]
    fn weight_vector_validation() {
        assert!(WeightVector::numeric(vec![]).is_err());
        assert!(WeightVector::from_ints(&[1, 0, 2]).is_err());
        assert!(WeightVector::symbolic(0).is_err());
        let d = WeightVector::from_ints(&[1, -1, 3]).unwrap();
        assert_eq!(d.without_entry(2).unwrap(), WeightVector::from_ints(&[1, 3]).unwrap());
        assert_eq!(d.to_string(), "(1,-1,3)");
    }

    #[test]
    fn base_relation_is_an_identity_and_monic() {
        let d = WeightVector::symbolic(1).unwrap();
        assert!(is_pure_identity(&base_pure(), &d).unwrap());
        let report = base_pure().monic_report(None).unwrap();
        assert!(report.is_monic);
        assert_eq!(report.top_coefficient, pv("-d1"));
        assert_eq!(report.unit_coefficient, MultiPoly::one());
    }

    #[test]
    fn quadratics_vanish_only_in_their_own_slot() {
        let d = WeightVector::symbolic(2).unwrap();
        for i in 1..=2u32 {
            let g = quadratic(i);
            for j in 1..=2u32 {
                let slot = eval_mixed_slot(&g, &d, j).unwrap();
                if i == j {
                    assert!(slot.is_zero(), "g{i} must vanish in slot {j}");
                } else {
                    assert!(!slot.is_zero(), "g{i} must not vanish in slot {j}");
                }
            }
            assert!(!is_mixed_identity(&g, &d).unwrap());
        }
    }

    #[test]
    fn matrix_eval_agrees_with_slot_evaluation() {
        let d = WeightVector::symbolic(2).unwrap();
        let g = quadratic(1);
        let me = matrix_eval(&g, &d).unwrap();
        for j in 1..=2u32 {
            assert_eq!(me.slots[(j - 1) as usize], eval_mixed_slot(&g, &d, j).unwrap());
        }
        let num = WeightVector::from_ints(&[5, 7]).unwrap();
        let me = matrix_eval(&g, &num).unwrap();
        for j in 1..=2u32 {
            assert_eq!(me.slots[(j - 1) as usize], eval_mixed_slot(&g, &num, j).unwrap());
        }
    }

    #[test]
    fn numeric_evaluation_commutes_with_specialization() {
        // Expanding with symbolic d and then substituting numbers equals
        // expanding with numeric d directly.
        let f = base_pure();
        let sym = WeightVector::symbolic(1).unwrap();
        let num = WeightVector::from_ints(&[7]).unwrap();
        let via_sym = eval_pure(&f, &sym).unwrap().substitute(&num.d_bindings());
        let direct = eval_pure(&f, &num).unwrap();
        assert_eq!(via_sym, direct);

        let g = quadratic(2);
        let sym2 = WeightVector::symbolic(2).unwrap();
        let num2 = WeightVector::from_ints(&[3, -5]).unwrap();
        for j in 1..=2 {
            let via_sym = eval_mixed_slot(&g, &sym2, j).unwrap().substitute(&num2.d_bindings());
            let direct = eval_mixed_slot(&g, &num2, j).unwrap();
            assert_eq!(via_sym, direct);
        }
    }

    #[test]
    fn verify_reports_carry_witnesses() {
        let d = WeightVector::symbolic(2).unwrap();
        let r = verify_mixed(&quadratic(1), &d).unwrap();
        assert!(!r.ok);
        assert_eq!(r.failing_slot, Some(2));
        assert!(r.witness.is_some());

        let not_identity = PureIdentity::new(
            1,
            2,
            [(Partition::new([2]), MultiPoly::one())],
        )
        .unwrap();
        let d1 = WeightVector::symbolic(1).unwrap();
        let r = verify_pure(&not_identity, &d1).unwrap();
        assert!(!r.ok);
        let num = WeightVector::from_ints(&[4]).unwrap();
        let r = verify_pure(&not_identity, &num).unwrap();
        assert!(!r.ok, "probe must not mask a failing verification");
    }

    #[test]
    fn monic_at_numeric_weights() {
        let g = MixedIdentity::new(
            2,
            4,
            [
                (Partition::empty(), pv("d1^3*d2+2*d1^2*d2^2+d1*d2^3")),
                (all_ones(4), MultiPoly::one()),
            ],
        )
        .unwrap();
        let ok = g
            .monic_report(Some(&WeightVector::from_ints(&[2, 3]).unwrap()))
            .unwrap();
        assert!(ok.is_monic);
        assert_eq!(ok.top_value, Some(rat(150)));
        let bad = g
            .monic_report(Some(&WeightVector::from_ints(&[1, -1]).unwrap()))
            .unwrap();
        assert!(!bad.is_monic, "top coefficient vanishes at (1,-1)");
        assert_eq!(bad.top_value, Some(rat(0)));
    }

    #[test]
    fn poly_roundtrip_and_homogeneity_guard() {
        let g = quadratic(1);
        let flat = g.to_poly();
        assert_eq!(MixedIdentity::from_poly(&flat, 2, 2).unwrap(), g);
        // Break homogeneity: t-degree no longer matches.
        let broken = &flat * &MultiPoly::var(VarId::t());
        assert!(MixedIdentity::from_poly(&broken, 2, 2).is_err());
        assert!(MixedIdentity::from_poly(&broken, 2, 3).is_ok());

        let f = base_pure();
        assert_eq!(PureIdentity::from_poly(&f.to_poly(), 1, 2).unwrap(), f);
        assert!(PureIdentity::from_poly(&pv("p1"), 1, 2).is_err());
        assert!(PureIdentity::from_poly(&pv("x1*p1^2"), 1, 2).is_err());
    }

    #[test]
    fn coefficients_must_use_only_valid_weights() {
        assert!(PureIdentity::new(1, 2, [(Partition::new([2]), pv("d2"))]).is_err());
        assert!(PureIdentity::new(1, 2, [(Partition::new([2]), pv("x1"))]).is_err());
        assert!(PureIdentity::new(2, 2, [(Partition::new([1]), pv("d2"))]).is_err());
    }

    #[test]
    fn canonicalization_and_scalar_equality() {
        let f = base_pure();
        let doubled = f.scale(&rat(2));
        assert!(f.equals_up_to_scale(&doubled));
        assert_eq!(doubled.canonicalize(), f);
        assert!(!f.equals_up_to_scale(&base_pure().scale(&rat(0))));
        let other = PureIdentity::new(
            1,
            2,
            [
                (Partition::new([1, 1]), MultiPoly::one()),
                (Partition::new([2]), pv("d1")),
            ],
        )
        .unwrap();
        assert!(!f.equals_up_to_scale(&other));
    }

    #[test]
    fn human_rendering() {
        assert_eq!(base_pure().to_string(), "-d1*p2 + p1^2");
        let g = quadratic(1);
        assert_eq!(
            g.to_string(),
            "(d1^2+d1*d2)*t^2 - 2*d1*p1*t - d2*p2 + p1^2"
        );
    }
}
