//! Sparse multivariate polynomials over exact big rationals.
//!
//! Six variable families cover everything the crate manipulates:
//!
//! * `d1, d2, ...` — symbolic weight-vector entries,
//! * `x1, x2, ...` — matrix diagonal entries (slot variables),
//! * `p1, p2, ...` — power sums / formal trace letters (index >= 1),
//! * `t` — the matrix placeholder in mixed identities,
//! * `c1, c2, ...` — multilinearization scalars,
//! * `y1_1, y1_2, ...` — doubly indexed multilinearization matrix letters.
//!
//! Variables are totally ordered by family `d < x < p < t < c < y`, then by
//! index. Monomials compare lexicographically in that variable order (a
//! higher power on the earliest differing variable wins), and a polynomial's
//! canonical text form lists terms in decreasing monomial order.
//!
//! # Canonical text grammar
//!
//! ```text
//! poly    := '0' | '-'? term (('+' | '-') term)*
//! term    := coef | coef '*' mono | mono
//! mono    := varpow ('*' varpow)*
//! varpow  := var ('^' uint)?
//! coef    := uint | uint '/' uint
//! var     := 'd' uint | 'x' uint | 'p' uint | 't' | 'c' uint
//!          | 'y' uint '_' uint          (indices are >= 1)
//! ```
//!
//! Serialization is canonical: terms in decreasing monomial order, variables
//! inside a monomial in increasing order, `^1` omitted, unit coefficients
//! omitted (`-d2`, not `-1*d2`), rationals printed `num` or `num/den` in
//! lowest terms. The parser is more liberal: it accepts whitespace, any term
//! order, repeated variables (exponents add), and repeated numeric factors
//! (they multiply); re-serialization restores the canonical form.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact arbitrary-precision rational, always in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for a rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for a rational from a numerator/denominator pair.
///
/// Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

// =============================================================================
// Variables
// =============================================================================

/// A typed variable. The derived ordering is the documented one:
/// family `d < x < p < t < c < y`, then indices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum VarId {
    /// Symbolic weight entry `d{i}`, `i >= 1`.
    D(u32),
    /// Diagonal slot variable `x{i}`, `i >= 1`.
    X(u32),
    /// Power sum / formal trace letter `p{n}`, `n >= 1`.
    P(u32),
    /// Matrix placeholder `t` in mixed identities.
    T,
    /// Multilinearization scalar `c{i}`, `i >= 1`.
    C(u32),
    /// Multilinearization matrix letter `y{i}_{j}`, both indices >= 1.
    Y(u32, u32),
}

impl VarId {
    pub fn d(i: u32) -> Self {
        assert!(i >= 1, "d-variable index must be >= 1");
        VarId::D(i)
    }
    pub fn x(i: u32) -> Self {
        assert!(i >= 1, "x-variable index must be >= 1");
        VarId::X(i)
    }
    pub fn p(n: u32) -> Self {
        assert!(n >= 1, "p-variable index must be >= 1");
        VarId::P(n)
    }
    pub fn t() -> Self {
        VarId::T
    }
    pub fn c(i: u32) -> Self {
        assert!(i >= 1, "c-variable index must be >= 1");
        VarId::C(i)
    }
    pub fn y(i: u32, j: u32) -> Self {
        assert!(i >= 1 && j >= 1, "y-variable indices must be >= 1");
        VarId::Y(i, j)
    }

    /// Weight under the standard grading: `x`, `t`, `y` carry weight 1,
    /// `p{n}` carries weight n, and `d`, `c` carry weight 0.
    pub fn standard_weight(self) -> i64 {
        match self {
            VarId::D(_) | VarId::C(_) => 0,
            VarId::X(_) | VarId::T | VarId::Y(_, _) => 1,
            VarId::P(n) => n as i64,
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::D(i) => write!(f, "d{i}"),
            VarId::X(i) => write!(f, "x{i}"),
            VarId::P(i) => write!(f, "p{i}"),
            VarId::T => write!(f, "t"),
            VarId::C(i) => write!(f, "c{i}"),
            VarId::Y(i, j) => write!(f, "y{i}_{j}"),
        }
    }
}

// =============================================================================
// Monomials
// =============================================================================

/// A monomial: variables with positive exponents, sorted by variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    factors: Vec<(VarId, u32)>,
}

impl Monomial {
    /// The empty (constant) monomial.
    pub fn one() -> Self {
        Monomial { factors: Vec::new() }
    }

    /// A single variable to the first power.
    pub fn var(v: VarId) -> Self {
        Monomial { factors: vec![(v, 1)] }
    }

    /// Builds a monomial from arbitrary (variable, exponent) pairs:
    /// sorts, merges duplicates, drops zero exponents.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, u32)>) -> Self {
        let mut factors: Vec<(VarId, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        factors.sort_by_key(|&(v, _)| v);
        let mut merged: Vec<(VarId, u32)> = Vec::with_capacity(factors.len());
        for (v, e) in factors {
            match merged.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial { factors: merged }
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(VarId, u32)> {
        self.factors.iter()
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.factors
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// Degree under an arbitrary per-variable weight function.
    pub fn weighted_degree(&self, weight: impl Fn(VarId) -> i64) -> i64 {
        self.factors
            .iter()
            .map(|&(v, e)| weight(v) * e as i64)
            .sum()
    }

    /// Product of two monomials (exponents add).
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (va, ea) = self.factors[i];
            let (vb, eb) = other.factors[j];
            match va.cmp(&vb) {
                Ordering::Less => {
                    out.push((va, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((vb, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((va, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Monomial { factors: out }
    }

    /// Splits off one variable: returns its exponent and the monomial with
    /// that variable removed.
    pub fn split_var(&self, v: VarId) -> (u32, Monomial) {
        let mut rest = Vec::with_capacity(self.factors.len());
        let mut exp = 0;
        for &(w, e) in &self.factors {
            if w == v {
                exp = e;
            } else {
                rest.push((w, e));
            }
        }
        (exp, Monomial { factors: rest })
    }
}

impl Ord for Monomial {
    /// Lexicographic in the variable order: the monomial with the higher
    /// power on the earliest differing variable is the greater one.
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.factors.iter();
        let mut b = other.factors.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    match va.cmp(&vb) {
                        // self has a positive power on an earlier variable
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => {
                            if ea != eb {
                                return ea.cmp(&eb);
                            }
                        }
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_constant() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(v, e) in &self.factors {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

// =============================================================================
// Polynomials
// =============================================================================

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Invariant: no stored coefficient is zero. Equality is structural, which
/// by canonicity is mathematical equality.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        MultiPoly::constant(rat(1))
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        MultiPoly { terms }
    }

    pub fn var(v: VarId) -> Self {
        MultiPoly::from_monomial(Monomial::var(v), rat(1))
    }

    pub fn from_monomial(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut out = MultiPoly::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::one())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    /// The constant this polynomial equals, if it is constant
    /// (the zero polynomial yields 0).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(rat(0)),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// The greatest monomial and its coefficient (canonical leading term).
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(|| rat(0))
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Multiplies by a single monomial.
    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(mm, c)| (mm.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut exp = e;
        let mut acc = MultiPoly::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// All variables that occur with a positive exponent.
    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms
            .keys()
            .flat_map(|m| m.iter().map(|&(v, _)| v))
            .collect()
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    /// Maximum total degree over terms; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Maximum degree over terms under a per-variable weight function;
    /// `None` for the zero polynomial.
    pub fn weighted_degree(&self, weight: impl Fn(VarId) -> i64 + Copy) -> Option<i64> {
        self.terms.keys().map(|m| m.weighted_degree(weight)).max()
    }

    /// True when every term has the same weighted degree (vacuously true for
    /// the zero polynomial).
    pub fn is_homogeneous(&self, weight: impl Fn(VarId) -> i64 + Copy) -> bool {
        let mut degrees = self.terms.keys().map(|m| m.weighted_degree(weight));
        match degrees.next() {
            None => true,
            Some(d0) => degrees.all(|d| d == d0),
        }
    }

    /// The coefficient of `v^exp`, a polynomial in the remaining variables.
    pub fn coefficient_of(&self, v: VarId, exp: u32) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            if e == exp {
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// Simultaneous substitution. Bound variables are replaced by their
    /// polynomial; unbound variables pass through unchanged. Powers of each
    /// binding are computed once and cached.
    pub fn substitute(&self, bindings: &BTreeMap<VarId, MultiPoly>) -> MultiPoly {
        let mut powers: HashMap<VarId, Vec<MultiPoly>> = HashMap::new();
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut unbound: Vec<(VarId, u32)> = Vec::new();
            let mut bound: Vec<(VarId, u32)> = Vec::new();
            for &(v, e) in m.iter() {
                if bindings.contains_key(&v) {
                    bound.push((v, e));
                } else {
                    unbound.push((v, e));
                }
            }
            let mut term = MultiPoly::from_monomial(Monomial::from_pairs(unbound), c.clone());
            for (v, e) in bound {
                let cache = powers.entry(v).or_insert_with(|| vec![MultiPoly::one()]);
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap() * &bindings[&v];
                    cache.push(next);
                }
                term = &term * &powers[&v][e as usize];
            }
            out += term;
        }
        out
    }

    /// Full rational evaluation: every occurring variable must be bound.
    pub fn eval_rational(&self, bindings: &BTreeMap<VarId, Rational>) -> Result<Rational, Error> {
        let mut total = rat(0);
        for (m, c) in &self.terms {
            let mut prod = c.clone();
            for &(v, e) in m.iter() {
                let val = bindings
                    .get(&v)
                    .ok_or_else(|| Error::Parse(format!("unbound variable {v} in evaluation")))?;
                for _ in 0..e {
                    prod *= val;
                }
            }
            total += prod;
        }
        Ok(total)
    }

    /// Rational content: the positive rational `c` such that `self / c` has
    /// coprime integer coefficients (0 for the zero polynomial).
    pub fn content(&self) -> Rational {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            rat(0)
        } else {
            Rational::new(num_gcd, den_lcm)
        }
    }

    /// `(content, primitive part)`: `self == content * primitive` where the
    /// primitive part has coprime integer coefficients and a positive
    /// leading coefficient (the sign lives in the content).
    pub fn content_split(&self) -> (Rational, MultiPoly) {
        let mut c = self.content();
        if c.is_zero() {
            return (c, MultiPoly::zero());
        }
        if self
            .leading_term()
            .map(|(_, lead)| lead.is_negative())
            .unwrap_or(false)
        {
            c = -c;
        }
        let inv = c.recip();
        (c, self.scale(&inv))
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$method(rhs)
            }
        }
        impl $trait<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl AddAssign for MultiPoly {
    fn add_assign(&mut self, rhs: MultiPoly) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign for MultiPoly {
    fn sub_assign(&mut self, rhs: MultiPoly) {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
    }
}

impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

// =============================================================================
// Canonical text form
// =============================================================================

/// Renders a rational in the grammar's `num` / `num/den` form.
pub fn rational_string(c: &Rational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            let abs = c.abs();
            if m.is_constant() {
                write!(f, "{}", rational_string(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", rational_string(&abs))?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser { bytes: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn parse_uint(&mut self) -> Result<BigInt, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected integer"));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn parse_index(&mut self) -> Result<u32, Error> {
        let n = self.parse_uint()?;
        let idx: u32 = n
            .try_into()
            .map_err(|_| self.error("variable index too large"))?;
        if idx == 0 {
            return Err(self.error("variable index must be >= 1"));
        }
        Ok(idx)
    }

    fn parse_var(&mut self) -> Result<VarId, Error> {
        match self.bump() {
            Some(b'd') => Ok(VarId::D(self.parse_index()?)),
            Some(b'x') => Ok(VarId::X(self.parse_index()?)),
            Some(b'p') => Ok(VarId::P(self.parse_index()?)),
            Some(b'c') => Ok(VarId::C(self.parse_index()?)),
            Some(b't') => Ok(VarId::T),
            Some(b'y') => {
                let i = self.parse_index()?;
                if self.bump() != Some(b'_') {
                    return Err(self.error("expected '_' in y-variable"));
                }
                let j = self.parse_index()?;
                Ok(VarId::Y(i, j))
            }
            _ => Err(self.error("expected variable")),
        }
    }

    fn parse_exponent(&mut self) -> Result<u32, Error> {
        if self.peek() == Some(b'^') {
            self.bump();
            let n = self.parse_uint()?;
            n.try_into().map_err(|_| self.error("exponent too large"))
        } else {
            Ok(1)
        }
    }

    /// One term: product of rational and variable-power factors.
    fn parse_term(&mut self) -> Result<(Monomial, Rational), Error> {
        let mut coef = rat(1);
        let mut pairs: Vec<(VarId, u32)> = Vec::new();
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_digit() => {
                    let num = self.parse_uint()?;
                    let mut val = Rational::from_integer(num);
                    if self.peek() == Some(b'/') {
                        self.bump();
                        let den = self.parse_uint()?;
                        if den.is_zero() {
                            return Err(self.error("zero denominator"));
                        }
                        val /= Rational::from_integer(den);
                    }
                    coef *= val;
                }
                Some(b'd') | Some(b'x') | Some(b'p') | Some(b't') | Some(b'c') | Some(b'y') => {
                    let v = self.parse_var()?;
                    let e = self.parse_exponent()?;
                    pairs.push((v, e));
                }
                _ => return Err(self.error("expected factor")),
            }
            if self.peek() == Some(b'*') {
                self.bump();
            } else {
                break;
            }
        }
        Ok((Monomial::from_pairs(pairs), coef))
    }

    fn parse_poly(&mut self) -> Result<MultiPoly, Error> {
        let mut out = MultiPoly::zero();
        let mut sign = rat(1);
        match self.peek() {
            Some(b'-') => {
                self.bump();
                sign = rat(-1);
            }
            Some(b'+') => {
                self.bump();
            }
            _ => {}
        }
        loop {
            let (m, c) = self.parse_term()?;
            out.add_term(m, c * &sign);
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    sign = rat(1);
                }
                Some(b'-') => {
                    self.bump();
                    sign = rat(-1);
                }
                None => break,
                _ => return Err(self.error("expected '+', '-', or end")),
            }
        }
        Ok(out)
    }
}

impl FromStr for MultiPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let mut p = Parser::new(s);
        let poly = p.parse_poly()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.error("trailing input"));
        }
        Ok(poly)
    }
}

// =============================================================================
// Tests
// =============================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pv(s: &str) -> MultiPoly {
        s.parse().expect("test polynomial must parse")
    }

    #[test]
    fn variable_order_is_family_then_index() {
        let mut vars = vec![
            VarId::y(1, 2),
            VarId::t(),
            VarId::p(2),
            VarId::d(2),
            VarId::x(1),
            VarId::c(1),
            VarId::p(1),
            VarId::d(1),
        ];
        vars.sort();
        assert_eq!(
            vars,
            vec![
                VarId::d(1),
                VarId::d(2),
                VarId::x(1),
                VarId::p(1),
                VarId::p(2),
                VarId::t(),
                VarId::c(1),
                VarId::y(1, 2),
            ]
        );
    }

    #[test]
    fn monomial_order_is_lexicographic() {
        let x2 = Monomial::from_pairs([(VarId::x(1), 2)]);
        let xy = Monomial::from_pairs([(VarId::x(1), 1), (VarId::x(2), 1)]);
        let y2 = Monomial::from_pairs([(VarId::x(2), 2)]);
        assert!(x2 > xy);
        assert!(xy > y2);
        assert!(Monomial::one() < y2);
    }

    #[test]
    fn difference_of_squares() {
        let sum = pv("p1+t");
        let diff = pv("p1-t");
        assert_eq!(&sum * &diff, pv("p1^2-t^2"));
    }

    #[test]
    fn coefficient_extraction_from_lift_factor_product() {
        // (p1 - d1*t) * (p2 - d1*t^2) has t^3 coefficient d1^2.
        let f = &pv("p1-d1*t") * &pv("p2-d1*t^2");
        assert_eq!(f.coefficient_of(VarId::t(), 3), pv("d1^2"));
        assert_eq!(f.coefficient_of(VarId::t(), 0), pv("p1*p2"));
        assert_eq!(f.coefficient_of(VarId::t(), 1), pv("-d1*p2"));
        assert_eq!(f.coefficient_of(VarId::t(), 2), pv("-d1*p1"));
    }

    #[test]
    fn weighted_degree_standard_grading() {
        let f = pv("p3*p1*t^2");
        assert_eq!(f.weighted_degree(VarId::standard_weight), Some(6));
        assert!(f.is_homogeneous(VarId::standard_weight));
        let g = pv("p3*p1*t^2+p1");
        assert!(!g.is_homogeneous(VarId::standard_weight));
        assert!(MultiPoly::zero().is_homogeneous(VarId::standard_weight));
        assert_eq!(MultiPoly::zero().weighted_degree(VarId::standard_weight), None);
    }

    #[test]
    fn substitution_is_simultaneous() {
        // x1 -> x2, x2 -> x1 swaps rather than chains.
        let f = pv("x1^2+2*x2");
        let mut b = BTreeMap::new();
        b.insert(VarId::x(1), MultiPoly::var(VarId::x(2)));
        b.insert(VarId::x(2), MultiPoly::var(VarId::x(1)));
        assert_eq!(f.substitute(&b), pv("x2^2+2*x1"));
    }

    #[test]
    fn substitution_leaves_unbound_variables() {
        let f = pv("d1*p2+t");
        let mut b = BTreeMap::new();
        b.insert(VarId::p(2), pv("x1^2+x2^2"));
        assert_eq!(f.substitute(&b), pv("d1*x1^2+d1*x2^2+t"));
    }

    #[test]
    fn canonical_display_and_reparse() {
        for s in [
            "0",
            "1",
            "-1",
            "5/3",
            "-d1*p2+p1^2",
            "d1^3*d2+2*d1^2*d2^2+d1*d2^3",
            "-4*d1^2*d2-4*d1*d2^2",
            "-x1*x2+t^2",
            "-c1*c2+y1_2*y2_1",
        ] {
            let f = pv(s);
            assert_eq!(f.to_string(), s, "canonical form of {s}");
        }
    }

    #[test]
    fn liberal_parse_canonicalizes() {
        assert_eq!(pv("p1^2 - d1*p2").to_string(), "-d1*p2+p1^2");
        assert_eq!(pv("x1*2*x1").to_string(), "2*x1^2");
        assert_eq!(pv("3*1/3*t").to_string(), "t");
        assert_eq!(pv("p1-p1").to_string(), "0");
        assert_eq!(pv("+t").to_string(), "t");
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "p0", "d0", "1/0", "p1^", "p1++p2", "q1", "y1", "y1_0", "p1 p2"] {
            assert!(s.parse::<MultiPoly>().is_err(), "should reject {s:?}");
        }
    }

    #[test]
    fn content_split_extracts_positive_rational() {
        let f = pv("4/3*x1-2*x2");
        let (c, prim) = f.content_split();
        assert_eq!(c, ratio(2, 3));
        assert_eq!(prim, pv("2*x1-3*x2"));
        assert_eq!(prim.scale(&c), f);
        assert_eq!(MultiPoly::zero().content(), rat(0));
    }

    #[test]
    fn eval_rational_requires_all_bindings() {
        let f = pv("d1*x1^2");
        let mut b = BTreeMap::new();
        b.insert(VarId::d(1), rat(3));
        assert!(f.eval_rational(&b).is_err());
        b.insert(VarId::x(1), ratio(1, 2));
        assert_eq!(f.eval_rational(&b).unwrap(), ratio(3, 4));
    }

    // ---- randomized algebra laws ----

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
    }

    fn arb_var() -> impl Strategy<Value = VarId> {
        prop_oneof![
            (1u32..=2).prop_map(VarId::d),
            (1u32..=2).prop_map(VarId::x),
            (1u32..=3).prop_map(VarId::p),
            Just(VarId::t()),
        ]
    }

    fn arb_monomial() -> impl Strategy<Value = Monomial> {
        proptest::collection::vec((arb_var(), 1u32..=3), 0..=3).prop_map(Monomial::from_pairs)
    }

    pub(crate) fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec((arb_monomial(), arb_rational()), 0..=4)
            .prop_map(MultiPoly::from_terms)
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &MultiPoly::zero(), a.clone());
            prop_assert_eq!(&a * &MultiPoly::one(), a.clone());
            prop_assert_eq!(&a - &a, MultiPoly::zero());
            prop_assert_eq!(&a * &MultiPoly::zero(), MultiPoly::zero());
        }

        #[test]
        fn display_roundtrip(a in arb_poly()) {
            let s = a.to_string();
            let back: MultiPoly = s.parse().unwrap();
            prop_assert_eq!(&back, &a);
            prop_assert_eq!(back.to_string(), s);
        }

        #[test]
        fn substitution_is_a_ring_map(a in arb_poly(), b in arb_poly()) {
            let mut bind = BTreeMap::new();
            bind.insert(VarId::p(1), "x1+d1".parse::<MultiPoly>().unwrap());
            bind.insert(VarId::t(), "2*x2".parse::<MultiPoly>().unwrap());
            let sum = (&a + &b).substitute(&bind);
            prop_assert_eq!(sum, &a.substitute(&bind) + &b.substitute(&bind));
            let prod = (&a * &b).substitute(&bind);
            prop_assert_eq!(prod, &a.substitute(&bind) * &b.substitute(&bind));
        }

        #[test]
        fn multiplication_adds_weighted_degrees(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let w = VarId::standard_weight;
            if a.is_homogeneous(w) && b.is_homogeneous(w) {
                let prod = &a * &b;
                prop_assert!(prod.is_homogeneous(w));
                if !prod.is_zero() {
                    prop_assert_eq!(
                        prod.weighted_degree(w).unwrap(),
                        a.weighted_degree(w).unwrap() + b.weighted_degree(w).unwrap()
                    );
                }
            }
        }

        #[test]
        fn pow_matches_repeated_multiplication(a in arb_poly(), e in 0u32..=4) {
            let mut expect = MultiPoly::one();
            for _ in 0..e {
                expect = &expect * &a;
            }
            prop_assert_eq!(a.pow(e), expect);
        }
    }
}
