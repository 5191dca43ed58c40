//! Moment matrices of specialized power sums and their vanishing minors.
//!
//! With weights `d = (d_1, ..., d_k)`, the sequence `p_n = sum_i d_i x_i^n`
//! is a weighted sum of `k` geometric progressions, so the moment matrix
//! `M[m][j] = p_(a_m + b_j)` factors as `A diag(d_i) B^T` with
//! `A[m][i] = x_i^(a_m)` and `B[j][i] = x_i^(b_j)` and has rank at most
//! `k`. Every `(k+1) x (k+1)` determinant of this shape therefore vanishes
//! identically, while `k x k` ones are generically nonzero; the vanishing
//! is a necessary condition for a sequence to arise from `k` weighted
//! slots, and the engine checks it by exact expansion.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::poly::MultiPoly;
use crate::symfun::{power_sum, WeightVector};
use crate::Result;

/// Largest supported matrix side; the expansion enumerates all `s!`
/// permutations.
pub const MAX_SIDE: usize = 8;

/// Exponent offsets for a square moment matrix: entry `(m, j)` holds
/// `p_(a[m] + b[j])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HankelSpec {
    a: Vec<u32>,
    b: Vec<u32>,
}

impl HankelSpec {
    /// Validates: equal nonzero lengths at most [`MAX_SIDE`], and every
    /// pairwise sum at least 1 (there is no zeroth power sum). Repeated
    /// offsets are allowed; they just force the determinant to vanish for
    /// the trivial reason of equal rows.
    pub fn new(a: Vec<u32>, b: Vec<u32>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::InvalidHankelSpec(format!(
                "offset vectors must have equal nonzero lengths, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        if a.len() > MAX_SIDE {
            return Err(Error::InvalidHankelSpec(format!(
                "side {} exceeds the supported maximum {MAX_SIDE}",
                a.len()
            )));
        }
        let min_a = *a.iter().min().expect("nonempty");
        let min_b = *b.iter().min().expect("nonempty");
        if min_a + min_b < 1 {
            return Err(Error::InvalidHankelSpec(
                "offsets 0 + 0 would index a zeroth power sum".into(),
            ));
        }
        Ok(HankelSpec { a, b })
    }

    pub fn side(&self) -> usize {
        self.a.len()
    }

    pub fn row_offsets(&self) -> &[u32] {
        &self.a
    }

    pub fn column_offsets(&self) -> &[u32] {
        &self.b
    }

    /// The square spec with rows and columns offset by `1..=side`.
    pub fn standard(side: usize) -> Result<Self> {
        let v: Vec<u32> = (1..=side as u32).collect();
        HankelSpec::new(v.clone(), v)
    }
}

impl std::fmt::Display for HankelSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &[u32]| {
            v.iter()
                .map(|n| n.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "a=({}) b=({})", join(&self.a), join(&self.b))
    }
}

/// Expands the moment matrix `[p_(a_m + b_j)]` at the given weights.
pub fn moment_matrix(d: &WeightVector, spec: &HankelSpec) -> Result<Vec<Vec<MultiPoly>>> {
    let mut rows = Vec::with_capacity(spec.side());
    for &am in spec.row_offsets() {
        let mut row = Vec::with_capacity(spec.side());
        for &bj in spec.column_offsets() {
            row.push(power_sum(d, am + bj)?);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Exact determinant by signed permutation expansion (Heap's algorithm).
pub fn determinant(matrix: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = matrix.len();
    if n == 0 {
        return MultiPoly::one();
    }
    debug_assert!(matrix.iter().all(|row| row.len() == n));
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    let mut sign = 1i64;
    let term = |perm: &[usize], sign: i64| {
        let mut prod = MultiPoly::constant(crate::poly::rat(sign));
        for (row, &col) in perm.iter().enumerate() {
            prod = &prod * &matrix[row][col];
        }
        prod
    };
    let mut acc = term(&perm, sign);
    let mut i = 0;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            sign = -sign;
            acc += term(&perm, sign);
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    acc
}

/// Determinant of the moment matrix for `spec` at weights `d`.
pub fn hankel_determinant(d: &WeightVector, spec: &HankelSpec) -> Result<MultiPoly> {
    Ok(determinant(&moment_matrix(d, spec)?))
}

/// Checks the rank obstruction: for a spec of side `arity + 1` the moment
/// determinant must vanish identically.
pub fn check_vanishing(d: &WeightVector, spec: &HankelSpec) -> Result<bool> {
    if spec.side() != d.arity() as usize + 1 {
        return Err(Error::InvalidHankelSpec(format!(
            "vanishing check needs side {} at arity {}, got {}",
            d.arity() + 1,
            d.arity(),
            spec.side()
        )));
    }
    Ok(hankel_determinant(d, spec)?.is_zero())
}

/// The negative control: the standard `k x k` moment determinant, which is
/// nonzero for generic weights (and symbolically).
pub fn control_determinant(d: &WeightVector) -> Result<MultiPoly> {
    let spec = HankelSpec::standard(d.arity() as usize)?;
    hankel_determinant(d, &spec)
}

/// How a vanishing scan walks the space of offset vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScanMode {
    /// Every pair of nondecreasing offset vectors with entries up to the
    /// bound.
    Exhaustive,
    /// Seeded random offset vectors, `count` valid specs.
    Sampled { count: u32, seed: u64 },
}

/// Outcome of a vanishing scan.
#[derive(Clone, Debug)]
pub struct ScanReport {
    pub arity: u32,
    pub max_offset: u32,
    pub mode: ScanMode,
    pub checked: u64,
    /// Specs whose determinant failed to vanish; empty when the rank
    /// obstruction holds.
    pub failures: Vec<HankelSpec>,
}

impl ScanReport {
    pub fn all_vanished(&self) -> bool {
        self.failures.is_empty()
    }
}

fn nondecreasing_vectors(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; len];
    loop {
        out.push(cur.clone());
        // Successor in lexicographic order among nondecreasing vectors.
        let mut pos = len;
        while pos > 0 {
            pos -= 1;
            if cur[pos] < max {
                let v = cur[pos] + 1;
                for item in cur.iter_mut().skip(pos) {
                    *item = v;
                }
                break;
            }
            if pos == 0 {
                return out;
            }
        }
        if len == 0 {
            return out;
        }
    }
}

/// Scans `(arity+1)`-sided specs with offsets up to `max_offset` and checks
/// the rank obstruction for each. Offset vectors are taken nondecreasing
/// (row and column order only permutes the determinant's sign).
pub fn scan_vanishing(d: &WeightVector, max_offset: u32, mode: ScanMode) -> Result<ScanReport> {
    let side = d.arity() as usize + 1;
    if side > MAX_SIDE {
        return Err(Error::InvalidHankelSpec(format!(
            "side {side} exceeds the supported maximum {MAX_SIDE}"
        )));
    }
    let mut checked = 0u64;
    let mut failures = Vec::new();
    match &mode {
        ScanMode::Exhaustive => {
            let vectors = nondecreasing_vectors(side, max_offset);
            for a in &vectors {
                for b in &vectors {
                    let Ok(spec) = HankelSpec::new(a.clone(), b.clone()) else {
                        continue;
                    };
                    checked += 1;
                    if !check_vanishing(d, &spec)? {
                        failures.push(spec);
                    }
                }
            }
        }
        ScanMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            while checked < u64::from(*count) {
                let draw = |rng: &mut ChaCha8Rng| {
                    let mut v: Vec<u32> =
                        (0..side).map(|_| rng.gen_range(0..=max_offset)).collect();
                    v.sort_unstable();
                    v
                };
                let a = draw(&mut rng);
                let b = draw(&mut rng);
                let Ok(spec) = HankelSpec::new(a, b) else {
                    continue;
                };
                checked += 1;
                if !check_vanishing(d, &spec)? {
                    failures.push(spec);
                }
            }
        }
    }
    Ok(ScanReport {
        arity: d.arity(),
        max_offset,
        mode,
        checked,
        failures,
    })
}
