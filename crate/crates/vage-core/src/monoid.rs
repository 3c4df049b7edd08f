//! Multi-index arithmetic and enumeration for the free commutative monoid
//! generated by `x_1, x_2, ...`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};

/// Exponent vector with finite support.
///
/// Stored sparse as `(generator, exponent)` pairs with strictly increasing
/// generator indices (1-based) and exponents >= 1. The empty sequence is the
/// monoid identity. The `Ord` implementation is graded-lexicographic: total
/// degree first, then the expanded generator word compared letter by letter,
/// so `x1^2 < x1*x2 < x2^2` within a degree class.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MultiIndex {
    entries: Vec<(u32, u32)>,
}

impl MultiIndex {
    /// The monoid identity.
    pub fn zero() -> Self {
        MultiIndex {
            entries: Vec::new(),
        }
    }

    /// The generator `e_n` (`n` is 1-based).
    pub fn unit(generator: u32) -> Self {
        Self::single(generator, 1)
    }

    /// `exponent * e_generator`.
    pub fn single(generator: u32, exponent: u32) -> Self {
        assert!(generator >= 1, "generator indices are 1-based");
        if exponent == 0 {
            return Self::zero();
        }
        MultiIndex {
            entries: alloc::vec![(generator, exponent)],
        }
    }

    /// Builds a multi-index from arbitrary pairs; duplicates are summed and
    /// zero exponents dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut entries: Vec<(u32, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        for &(g, _) in &entries {
            assert!(g >= 1, "generator indices are 1-based");
        }
        entries.sort_unstable_by_key(|&(g, _)| g);
        let mut merged: Vec<(u32, u32)> = Vec::with_capacity(entries.len());
        for (g, e) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == g => last.1 += e,
                _ => merged.push((g, e)),
            }
        }
        MultiIndex { entries: merged }
    }

    pub fn entries(&self) -> &[(u32, u32)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Exponent of the given generator (0 when absent).
    pub fn exponent(&self, generator: u32) -> u32 {
        self.entries
            .binary_search_by_key(&generator, |&(g, _)| g)
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    /// Sum of all exponents.
    pub fn total_degree(&self) -> u64 {
        self.entries.iter().map(|&(_, e)| e as u64).sum()
    }

    /// Number of generators with nonzero exponent.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// Largest generator index in the support (0 for the identity).
    pub fn max_generator(&self) -> u32 {
        self.entries.last().map(|&(g, _)| g).unwrap_or(0)
    }

    /// Componentwise sum.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            let (ga, ea) = self.entries[i];
            let (gb, eb) = other.entries[j];
            match ga.cmp(&gb) {
                Ordering::Less => {
                    out.push((ga, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((gb, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((ga, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.entries[i..]);
        out.extend_from_slice(&other.entries[j..]);
        MultiIndex { entries: out }
    }

    /// `self - other` when `other <= self` componentwise, otherwise `None`.
    /// Absence realizes the monoid partial order.
    pub fn try_sub(&self, other: &Self) -> Option<Self> {
        let mut out = Vec::with_capacity(self.entries.len());
        let mut i = 0;
        for &(gb, eb) in &other.entries {
            loop {
                if i >= self.entries.len() {
                    return None;
                }
                let (ga, ea) = self.entries[i];
                if ga < gb {
                    out.push((ga, ea));
                    i += 1;
                } else if ga == gb {
                    if ea < eb {
                        return None;
                    }
                    if ea > eb {
                        out.push((ga, ea - eb));
                    }
                    i += 1;
                    break;
                } else {
                    return None;
                }
            }
        }
        out.extend_from_slice(&self.entries[i..]);
        Some(MultiIndex { entries: out })
    }

    /// Product of the exponent factorials, as a float.
    pub fn factorial(&self) -> Result<f64> {
        let mut acc = 1.0f64;
        for &(_, e) in &self.entries {
            for k in 2..=e {
                acc *= k as f64;
                if !acc.is_finite() {
                    return Err(Error::FactorialOverflow);
                }
            }
        }
        Ok(acc)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Equal degree: compare the expanded words (each generator repeated
        // exponent-many times) lexicographically. When one side moves to its
        // next entry while the other still holds the current generator, the
        // generator comparison on the next pass settles the order.
        let (mut i, mut j) = (0usize, 0usize);
        let (mut ra, mut rb) = (0u32, 0u32); // letters already consumed at position i / j
        loop {
            match (i >= self.entries.len(), j >= other.entries.len()) {
                (true, true) => return Ordering::Equal,
                (true, false) => return Ordering::Less,
                (false, true) => return Ordering::Greater,
                (false, false) => {}
            }
            let (ga, ea) = self.entries[i];
            let (gb, eb) = other.entries[j];
            match ga.cmp(&gb) {
                Ordering::Equal => {
                    let step = (ea - ra).min(eb - rb);
                    ra += step;
                    rb += step;
                    if ra == ea {
                        i += 1;
                        ra = 0;
                    }
                    if rb == eb {
                        j += 1;
                        rb = 0;
                    }
                }
                ord => return ord,
            }
        }
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "1");
        }
        for (k, &(g, e)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "x{g}")?;
            } else {
                write!(f, "x{g}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Truncation window: generator indices at most `max_generator`, total degree
/// at most `max_degree`. All ring operations are exact on this window.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct TruncationSpec {
    pub max_generator: u32,
    pub max_degree: u32,
}

impl TruncationSpec {
    pub fn new(max_generator: u32, max_degree: u32) -> Self {
        assert!(max_generator >= 1, "window needs at least one generator");
        TruncationSpec {
            max_generator,
            max_degree,
        }
    }

    pub fn contains(&self, alpha: &MultiIndex) -> bool {
        alpha.max_generator() <= self.max_generator
            && alpha.total_degree() <= self.max_degree as u64
    }

    /// All in-window multi-indices in graded-lexicographic order.
    pub fn enumerate(&self) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut prefix: Vec<(u32, u32)> = Vec::new();
        for degree in 0..=self.max_degree {
            emit_degree(1, degree, self.max_generator, &mut prefix, &mut out);
        }
        out
    }

    /// Number of in-window multi-indices: sum over degrees of the multiset
    /// coefficients C(d + K - 1, K - 1). Saturates at `u64::MAX` when the
    /// count leaves the representable range.
    pub fn index_count(&self) -> u64 {
        let k = self.max_generator as u128;
        let mut total = 0u128;
        for d in 0..=self.max_degree as u128 {
            let mut c = 1u128;
            for i in 1..k {
                c = match c.checked_mul(d + i) {
                    Some(v) => v / i,
                    None => return u64::MAX,
                };
            }
            total = total.saturating_add(c);
        }
        total.min(u64::MAX as u128) as u64
    }
}

fn emit_degree(
    generator: u32,
    remaining: u32,
    max_generator: u32,
    prefix: &mut Vec<(u32, u32)>,
    out: &mut Vec<MultiIndex>,
) {
    if remaining == 0 {
        out.push(MultiIndex {
            entries: prefix.clone(),
        });
        return;
    }
    if generator > max_generator {
        return;
    }
    // Descending exponent on the current generator yields ascending word
    // order: more copies of a small generator sort earlier.
    for e in (0..=remaining).rev() {
        if e > 0 {
            prefix.push((generator, e));
        }
        emit_degree(generator + 1, remaining - e, max_generator, prefix, out);
        if e > 0 {
            prefix.pop();
        }
    }
}
