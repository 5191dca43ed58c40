//! Integer partitions and their canonical enumeration order.
//!
//! A partition is a weakly decreasing sequence of positive integers; the
//! empty partition has weight 0. The canonical order used everywhere in this
//! crate (term order in identities, unknown order in linear systems, JSON
//! term order) is: **ascending weight, then within one weight descending
//! lexicographic on the part vectors**, so weight 4 enumerates as
//! `(4), (3,1), (2,2), (2,1,1), (1,1,1,1)`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Error;

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// The empty partition (weight 0).
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Validating constructor.
    pub fn try_new(parts: impl Into<Vec<u32>>) -> Result<Self, Error> {
        let parts = parts.into();
        for w in parts.windows(2) {
            if w[0] < w[1] {
                return Err(Error::InvalidPartition(format!(
                    "parts must be weakly decreasing, got {parts:?}"
                )));
            }
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition(format!(
                "parts must be positive, got {parts:?}"
            )));
        }
        Ok(Partition { parts })
    }

    /// Panicking constructor for literals known to be valid.
    pub fn new(parts: impl Into<Vec<u32>>) -> Self {
        Self::try_new(parts).expect("invalid partition literal")
    }

    /// Builds from parts in any order.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Result<Self, Error> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::try_new(parts)
    }

    /// Sum of the parts.
    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Largest part (0 for the empty partition).
    pub fn max_part(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    /// `(part value, multiplicity)` pairs, largest part first.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((v, m)) if *v == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Multiset union of two partitions.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = Vec::with_capacity(self.parts.len() + other.parts.len());
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            if self.parts[i] >= other.parts[j] {
                parts.push(self.parts[i]);
                i += 1;
            } else {
                parts.push(other.parts[j]);
                j += 1;
            }
        }
        parts.extend_from_slice(&self.parts[i..]);
        parts.extend_from_slice(&other.parts[j..]);
        Partition { parts }
    }

    /// This partition with one extra part inserted.
    pub fn with_part(&self, part: u32) -> Partition {
        assert!(part >= 1, "parts must be positive");
        self.union(&Partition { parts: vec![part] })
    }

    /// This partition with its largest part removed (no-op on the empty
    /// partition).
    pub fn without_max_part(&self) -> Partition {
        Partition {
            parts: self.parts.get(1..).unwrap_or(&[]).to_vec(),
        }
    }

    /// Every sub-multiset of the parts, paired with the number of ways to
    /// choose it (the product over part values of `C(multiplicity, chosen)`).
    /// Used as an independent combinatorial route to product expansions.
    pub fn sub_multisets(&self) -> Vec<(Partition, u64)> {
        let mults = self.multiplicities();
        let mut out: Vec<(Vec<u32>, u64)> = vec![(Vec::new(), 1)];
        for (value, mult) in mults {
            let mut next = Vec::with_capacity(out.len() * (mult as usize + 1));
            for (chosen, ways) in &out {
                for take in 0..=mult {
                    let mut c = chosen.clone();
                    c.extend(std::iter::repeat(value).take(take as usize));
                    next.push((c, ways * binomial(mult, take)));
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|(parts, ways)| (Partition { parts }, ways))
            .collect()
    }
}

fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k as u64 {
        acc = acc * (n as u64 - i) / (i + 1);
    }
    acc
}

impl Ord for Partition {
    /// Canonical order: ascending weight, then descending lexicographic on
    /// part vectors (so `(4) < (3,1) < (2,2) < (2,1,1) < (1,1,1,1)`).
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Iterator over partitions of a fixed weight in canonical order.
struct PartitionsOf {
    next: Option<Vec<u32>>,
}

impl Iterator for PartitionsOf {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let current = self.next.take()?;
        // Successor in descending lexicographic order: shrink the last
        // part that exceeds 1, then refill the freed weight greedily.
        let mut succ = None;
        if let Some(i) = current.iter().rposition(|&p| p > 1) {
            let mut parts: Vec<u32> = current[..i].to_vec();
            let freed: u32 = current[i..].iter().sum();
            let cap = current[i] - 1;
            let mut rem = freed;
            while rem > 0 {
                let part = cap.min(rem);
                parts.push(part);
                rem -= part;
            }
            succ = Some(parts);
        }
        self.next = succ;
        Some(Partition { parts: current })
    }
}

/// All partitions of weight `n` with parts bounded by `max_part`, in
/// canonical order. An effective bound of 0 with `n > 0` yields nothing.
pub fn partitions_of_bounded(n: u32, max_part: u32) -> impl Iterator<Item = Partition> {
    let first = if n == 0 {
        Some(Vec::new())
    } else if max_part == 0 {
        None
    } else {
        let mut parts = Vec::new();
        let mut rem = n;
        while rem > 0 {
            let part = max_part.min(rem);
            parts.push(part);
            rem -= part;
        }
        Some(parts)
    };
    PartitionsOf { next: first }
}

/// All partitions of weight `n` in canonical order, starting from `(n)`.
pub fn partitions_of(n: u32) -> impl Iterator<Item = Partition> {
    partitions_of_bounded(n, n)
}

/// All partitions of weight at most `n`, in the global canonical order
/// (ascending weight, canonical within each weight).
pub fn partitions_up_to(n: u32) -> impl Iterator<Item = Partition> {
    (0..=n).flat_map(partitions_of)
}

/// Number of partitions of `n`, by direct enumeration.
pub fn count_partitions(n: u32) -> u64 {
    partitions_of(n).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_enumeration_weight_four() {
        let got: Vec<Partition> = partitions_of(4).collect();
        let want = vec![
            Partition::new([4]),
            Partition::new([3, 1]),
            Partition::new([2, 2]),
            Partition::new([2, 1, 1]),
            Partition::new([1, 1, 1, 1]),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn weight_zero_and_one() {
        assert_eq!(partitions_of(0).collect::<Vec<_>>(), vec![Partition::empty()]);
        assert_eq!(partitions_of(1).collect::<Vec<_>>(), vec![Partition::new([1])]);
    }

    #[test]
    fn bounded_enumeration() {
        let got: Vec<Partition> = partitions_of_bounded(5, 2).collect();
        let want = vec![
            Partition::new([2, 2, 1]),
            Partition::new([2, 1, 1, 1]),
            Partition::new([1, 1, 1, 1, 1]),
        ];
        assert_eq!(got, want);
        assert_eq!(partitions_of_bounded(3, 0).count(), 0);
        assert_eq!(partitions_of_bounded(0, 0).count(), 1);
    }

    #[test]
    fn ord_matches_enumeration_order() {
        let enumerated: Vec<Partition> = partitions_up_to(6).collect();
        let mut sorted = enumerated.clone();
        sorted.sort();
        assert_eq!(enumerated, sorted);
        let mut seen = std::collections::HashSet::new();
        for p in &enumerated {
            assert!(seen.insert(p.clone()), "duplicate {p}");
        }
    }

    /// Independent counting oracle: the pentagonal-number recurrence
    /// p(n) = sum_k (-1)^(k-1) [p(n - k(3k-1)/2) + p(n - k(3k+1)/2)].
    fn pentagonal_counts(up_to: u32) -> Vec<i64> {
        let n = up_to as usize;
        let mut p = vec![0i64; n + 1];
        p[0] = 1;
        for m in 1..=n {
            let mut total = 0i64;
            let mut k = 1i64;
            loop {
                let g1 = k * (3 * k - 1) / 2;
                let g2 = k * (3 * k + 1) / 2;
                if g1 as usize > m {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                total += sign * p[m - g1 as usize];
                if g2 as usize <= m {
                    total += sign * p[m - g2 as usize];
                }
                k += 1;
            }
            p[m] = total;
        }
        p
    }

    #[test]
    fn counts_match_pentagonal_recurrence_up_to_thirty() {
        let oracle = pentagonal_counts(30);
        for n in 0..=30u32 {
            assert_eq!(
                count_partitions(n),
                oracle[n as usize] as u64,
                "partition count mismatch at n = {n}"
            );
        }
        assert_eq!(count_partitions(16), 231);
        assert_eq!(count_partitions(30), 5604);
    }

    #[test]
    fn multiplicities_and_union() {
        let p = Partition::new([3, 2, 2, 1]);
        assert_eq!(p.multiplicities(), vec![(3, 1), (2, 2), (1, 1)]);
        let q = Partition::new([4, 2]);
        assert_eq!(p.union(&q), Partition::new([4, 3, 2, 2, 2, 1]));
        assert_eq!(Partition::empty().union(&q), q);
        assert_eq!(p.with_part(5), Partition::new([5, 3, 2, 2, 1]));
        assert_eq!(p.without_max_part(), Partition::new([2, 2, 1]));
    }

    #[test]
    fn sub_multisets_count_choices() {
        let p = Partition::new([2, 1, 1]);
        let subs = p.sub_multisets();
        // (empty,1) (2,1) (1,2) (1,1,1) (2,1,2) (2,1,1,1): 6 entries.
        assert_eq!(subs.len(), 6);
        let total: u64 = subs.iter().map(|(_, w)| w).sum();
        assert_eq!(total, 8, "sum of choice counts is 2^3");
        let find = |parts: &[u32]| {
            subs.iter()
                .find(|(q, _)| q == &Partition::new(parts.to_vec()))
                .map(|(_, w)| *w)
                .unwrap()
        };
        assert_eq!(find(&[]), 1);
        assert_eq!(find(&[1]), 2);
        assert_eq!(find(&[2, 1]), 2);
        assert_eq!(find(&[2, 1, 1]), 1);
    }

    #[test]
    fn invalid_partitions_are_rejected() {
        assert!(Partition::try_new(vec![1, 2]).is_err());
        assert!(Partition::try_new(vec![2, 0]).is_err());
        assert!(Partition::from_unsorted(vec![1, 3, 2]).is_ok());
        assert_eq!(
            Partition::from_unsorted(vec![1, 3, 2]).unwrap(),
            Partition::new([3, 2, 1])
        );
    }
}
