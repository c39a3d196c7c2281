//! Exact Jaccard similarity and MinOverlap arithmetic.
//!
//! Thresholds are held as reduced fractions and every comparison is done by
//! cross-multiplication, so values that sit exactly on the threshold (2/5
//! against 0.4, say) are classified correctly.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThresholdError {
    #[error("malformed number {0:?}")]
    Malformed(String),
    #[error("threshold must be greater than zero")]
    Zero,
    #[error("threshold {0} is greater than one")]
    AboveOne(String),
    #[error("number {0:?} overflows the scalar type")]
    Overflow(String),
}

/// Parses a non-negative decimal (`0.35`, `.5`, `1`) or a fraction (`7/20`)
/// into an exact `(numerator, denominator)` pair, reduced to lowest terms.
pub fn parse_fraction<T: Scalar>(text: &str) -> Result<(T, T), ThresholdError> {
    let s = text.trim();
    let malformed = || ThresholdError::Malformed(text.to_string());
    let overflow = || ThresholdError::Overflow(text.to_string());
    let digits = |d: &str| -> Result<T, ThresholdError> {
        if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        T::from_str_radix(d, 10).map_err(|_| overflow())
    };

    let (num, den) = if let Some((n, d)) = s.split_once('/') {
        let den = digits(d)?;
        if den.is_zero() {
            return Err(malformed());
        }
        (digits(n)?, den)
    } else {
        let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(malformed());
        }
        let ten = T::from_size(10);
        let mut den = T::one();
        for _ in 0..frac_part.len() {
            den = den.checked_mul(&ten).ok_or_else(overflow)?;
        }
        let int_val = if int_part.is_empty() { T::zero() } else { digits(int_part)? };
        let frac_val = if frac_part.is_empty() { T::zero() } else { digits(frac_part)? };
        let num = int_val
            .checked_mul(&den)
            .and_then(|v| v.checked_add(&frac_val))
            .ok_or_else(overflow)?;
        (num, den)
    };
    let g = num.gcd(&den);
    if g.is_zero() {
        return Ok((num, den));
    }
    Ok((num / g, den / g))
}

/// Minimum similarity threshold θ = numerator / denominator, with 0 < θ ≤ 1,
/// stored in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThresholdOf<T> {
    numerator: T,
    denominator: T,
}

impl<T: Scalar> ThresholdOf<T> {
    pub fn new(numerator: T, denominator: T) -> Result<Self, ThresholdError> {
        if denominator.is_zero() {
            return Err(ThresholdError::Malformed(format!("{numerator}/0")));
        }
        if numerator.is_zero() {
            return Err(ThresholdError::Zero);
        }
        if numerator > denominator {
            return Err(ThresholdError::AboveOne(format!("{numerator}/{denominator}")));
        }
        let g = numerator.gcd(&denominator);
        Ok(Self {
            numerator: numerator / g,
            denominator: denominator / g,
        })
    }

    pub fn numerator(&self) -> T {
        self.numerator
    }

    pub fn denominator(&self) -> T {
        self.denominator
    }

    pub fn as_ratio(&self) -> Ratio<T> {
        Ratio::new_raw(self.numerator, self.denominator)
    }

    /// Whether `overlap / union` meets or exceeds θ.
    pub fn is_met(&self, overlap: T, union: T) -> bool {
        overlap * self.denominator >= self.numerator * union
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator.to_f64().unwrap_or(f64::NAN) / self.denominator.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T: Scalar> FromStr for ThresholdOf<T> {
    type Err = ThresholdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, d) = parse_fraction::<T>(s)?;
        if n > d {
            return Err(ThresholdError::AboveOne(s.trim().to_string()));
        }
        Self::new(n, d)
    }
}

impl<T: Scalar> fmt::Display for ThresholdOf<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// Number of elements two sorted, duplicate-free slices have in common.
pub fn overlap_count<E: Ord>(x: &[E], y: &[E]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < x.len() && j < y.len() {
        match x[i].cmp(&y[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Exact Jaccard similarity `|X ∩ Y| / |X ∪ Y|` of two sorted,
/// duplicate-free, nonempty element lists.
pub fn jaccard<T: Scalar, E: Ord>(x: &[E], y: &[E]) -> Ratio<T> {
    let common = overlap_count(x, y);
    let union = x.len() + y.len() - common;
    Ratio::new(T::from_size(common), T::from_size(union))
}

/// Smallest overlap `m` at which a size-`x` and a size-`y` signature are
/// similar under θ, or `None` when no overlap up to `min(x, y)` suffices.
///
/// `m / (x + y - m) >= p / q` rearranges to `m >= p (x + y) / (p + q)`, so
/// the answer is that quotient rounded up.
pub fn min_overlap<T: Scalar>(theta: &ThresholdOf<T>, x: T, y: T) -> Option<T> {
    let p = theta.numerator;
    let q = theta.denominator;
    let m = (p * (x + y)).div_ceil(&(p + q));
    (m <= x.min(y)).then_some(m)
}

/// Brute-force counterpart to [`min_overlap`]: walks `m = 1..=min(x, y)` and
/// returns the first overlap whose Jaccard ratio reaches θ.
pub fn min_overlap_oracle<T: Scalar>(theta: &ThresholdOf<T>, x: T, y: T) -> Option<T> {
    let target = theta.as_ratio();
    let mut m = T::one();
    while m <= x.min(y) {
        if Ratio::new(m, x + y - m) >= target {
            return Some(m);
        }
        m = m + T::one();
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SizeSetError {
    #[error("size set is empty")]
    Empty,
    #[error("signature sizes must be at least 1")]
    ZeroSize,
    #[error("malformed size range {0:?}, expected <min>-<max>")]
    Malformed(String),
}

/// The allowed signature sizes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SizeSet(BTreeSet<usize>);

impl SizeSet {
    pub fn new(sizes: impl IntoIterator<Item = usize>) -> Result<Self, SizeSetError> {
        let set: BTreeSet<usize> = sizes.into_iter().collect();
        if set.is_empty() {
            return Err(SizeSetError::Empty);
        }
        if set.contains(&0) {
            return Err(SizeSetError::ZeroSize);
        }
        Ok(Self(set))
    }

    pub fn range(min: usize, max: usize) -> Result<Self, SizeSetError> {
        Self::new(min..=max)
    }

    pub fn contains(&self, size: usize) -> bool {
        self.0.contains(&size)
    }

    pub fn min(&self) -> usize {
        *self.0.first().expect("nonempty")
    }

    pub fn max(&self) -> usize {
        *self.0.last().expect("nonempty")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl FromStr for SizeSet {
    type Err = SizeSetError;

    /// Parses `min-max` or a single size.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || SizeSetError::Malformed(s.to_string());
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| malformed());
        let (min, max) = match s.split_once('-') {
            Some((a, b)) => (num(a)?, num(b)?),
            None => {
                let n = num(s)?;
                (n, n)
            }
        };
        if min > max {
            return Err(malformed());
        }
        Self::range(min, max)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct SizeEntry {
    pairs: Vec<(usize, usize)>,
    partial_sizes: Vec<usize>,
}

/// MinOverlap values for every pair of allowed sizes, computed once up front.
///
/// For each allowed size `x` it stores the `(y, m)` pairs with `m` the
/// MinOverlap of sizes `x` and `y` (omitting `y` where no overlap suffices),
/// and the set `L_x` of distinct `m` values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinOverlapTable {
    sizes: SizeSet,
    entries: Vec<SizeEntry>,
}

impl MinOverlapTable {
    pub fn build<T: Scalar>(theta: &ThresholdOf<T>, sizes: &SizeSet) -> Self {
        let mut entries = vec![SizeEntry::default(); sizes.max() + 1];
        for x in sizes.iter() {
            let entry = &mut entries[x];
            for y in sizes.iter() {
                if let Some(m) = min_overlap(theta, T::from_size(x), T::from_size(y)) {
                    entry.pairs.push((y, m.to_size()));
                }
            }
            let distinct: BTreeSet<usize> = entry.pairs.iter().map(|&(_, m)| m).collect();
            entry.partial_sizes = distinct.into_iter().collect();
        }
        Self {
            sizes: sizes.clone(),
            entries,
        }
    }

    pub fn sizes(&self) -> &SizeSet {
        &self.sizes
    }

    /// `(y, m)` pairs for signatures of size `x`, ascending in `y`.
    pub fn pairs(&self, x: usize) -> &[(usize, usize)] {
        match self.entries.get(x) {
            Some(e) if self.sizes.contains(x) => &e.pairs,
            _ => &[],
        }
    }

    /// Distinct partial-signature sizes `L_x`, ascending.
    pub fn partial_sizes(&self, x: usize) -> &[usize] {
        match self.entries.get(x) {
            Some(e) if self.sizes.contains(x) => &e.partial_sizes,
            _ => &[],
        }
    }
}

/// Builds the MinOverlap table for θ and the allowed sizes.
pub fn build_table<T: Scalar>(theta: &ThresholdOf<T>, sizes: &SizeSet) -> MinOverlapTable {
    MinOverlapTable::build(theta, sizes)
}
