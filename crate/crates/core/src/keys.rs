//! Partial signatures and size-prefixed Mark-In / Match-Out keys.
//!
//! A key renders as `<size>-<e1>-<e2>-…`: the decimal size prefix followed by
//! the partial signature's elements in ascending order. Mark-In (MI) keys
//! carry the size of the signature being marked; Match-Out (MO) keys carry
//! the size of a signature that could be similar to the one being checked.
//! Two signatures with sizes in the table are similar exactly when an MI key
//! of one equals an MO key of the other.

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::signature::{Signature, SEPARATOR};
use crate::similarity::MinOverlapTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("partial size {size} is outside 1..={len}")]
pub struct PartialSizeError {
    pub size: usize,
    pub len: usize,
}

/// Lexicographic k-subsets of `0..n`, as ascending index lists.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    indices: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            indices: (0..k).collect(),
            done: k > n,
        }
    }

    /// Current subset without advancing; `None` once exhausted.
    pub fn current(&self) -> Option<&[usize]> {
        (!self.done).then_some(self.indices.as_slice())
    }

    /// Steps to the next subset in lexicographic order.
    pub fn advance(&mut self) {
        if self.done {
            return;
        }
        let k = self.indices.len();
        let n = self.n;
        let Some(i) = (0..k).rev().find(|&i| self.indices[i] < n - k + i) else {
            self.done = true;
            return;
        };
        self.indices[i] += 1;
        for j in i + 1..k {
            self.indices[j] = self.indices[j - 1] + 1;
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Self::Item> {
        let out = self.current()?.to_vec();
        self.advance();
        Some(out)
    }
}

/// All size-`j` partial signatures of `sig`, in lexicographic order.
pub fn enumerate_partials(
    sig: &Signature,
    j: usize,
) -> Result<impl Iterator<Item = Vec<&str>> + '_, PartialSizeError> {
    if j == 0 || j > sig.len() {
        return Err(PartialSizeError { size: j, len: sig.len() });
    }
    let elements = sig.elements();
    Ok(Combinations::new(elements.len(), j)
        .map(move |idx| idx.iter().map(|&i| elements[i].as_str()).collect()))
}

/// A rendered key and its size prefix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Key {
    size_prefix: usize,
    rendered: String,
}

impl Key {
    pub fn new<S: AsRef<str>>(size_prefix: usize, partial: &[S]) -> Self {
        let mut rendered = String::new();
        write!(rendered, "{size_prefix}").unwrap();
        for e in partial {
            rendered.push(SEPARATOR);
            rendered.push_str(e.as_ref());
        }
        Self { size_prefix, rendered }
    }

    pub fn size_prefix(&self) -> usize {
        self.size_prefix
    }

    pub fn partial(&self) -> impl Iterator<Item = &str> {
        self.rendered.split(SEPARATOR).skip(1)
    }

    pub fn as_str(&self) -> &str {
        &self.rendered
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rendered)
    }
}

/// Renders every `m`-subset of `elements` prefixed with `prefix` into a
/// reused buffer and hands each rendering to `visit`.
pub(crate) fn visit_partials(
    elements: &[String],
    prefix: usize,
    m: usize,
    buf: &mut String,
    visit: &mut impl FnMut(&str),
) {
    buf.clear();
    write!(buf, "{prefix}").unwrap();
    let head = buf.len();
    let mut combos = Combinations::new(elements.len(), m);
    while let Some(idx) = combos.current() {
        buf.truncate(head);
        for &i in idx {
            buf.push(SEPARATOR);
            buf.push_str(&elements[i]);
        }
        visit(buf);
        combos.advance();
    }
}

/// Visits the MI keys of a signature: every `m`-subset for `m ∈ L_|sig|`,
/// prefixed with `|sig|`.
pub(crate) fn visit_mi_keys(
    elements: &[String],
    table: &MinOverlapTable,
    buf: &mut String,
    mut visit: impl FnMut(&str),
) {
    let x = elements.len();
    for &m in table.partial_sizes(x) {
        visit_partials(elements, x, m, buf, &mut visit);
    }
}

/// Visits the MO keys of a signature: for each `(y, m)` pair under `|sig|`,
/// every `m`-subset prefixed with `y`.
pub(crate) fn visit_mo_keys(
    elements: &[String],
    table: &MinOverlapTable,
    buf: &mut String,
    mut visit: impl FnMut(&str),
) {
    for &(y, m) in table.pairs(elements.len()) {
        visit_partials(elements, y, m, buf, &mut visit);
    }
}

type KeyVisitor = fn(&[String], &MinOverlapTable, &mut String, &mut dyn FnMut(&str));

fn collect_keys(sig: &Signature, table: &MinOverlapTable, visit: KeyVisitor) -> Vec<Key> {
    let mut keys = Vec::new();
    let mut buf = String::new();
    visit(sig.elements(), table, &mut buf, &mut |k: &str| {
        let (prefix, _) = k.split_once(SEPARATOR).expect("key has a prefix");
        keys.push(Key {
            size_prefix: prefix.parse().expect("decimal prefix"),
            rendered: k.to_string(),
        });
    });
    keys
}

/// Mark-In keys of `sig`, ordered by partial size then lexicographically.
///
/// The keys are distinct: each partial size contributes its own subsets.
pub fn mi_keys(sig: &Signature, table: &MinOverlapTable) -> Vec<Key> {
    collect_keys(sig, table, |e, t, b, v| visit_mi_keys(e, t, b, v))
}

/// Match-Out keys of `sig`, ordered by target size then lexicographically.
///
/// Distinct target sizes give distinct prefixes, so no key repeats.
pub fn mo_keys(sig: &Signature, table: &MinOverlapTable) -> Vec<Key> {
    collect_keys(sig, table, |e, t, b, v| visit_mo_keys(e, t, b, v))
}

/// Number of MI keys a size-`x` signature produces.
pub fn mi_key_count(x: usize, table: &MinOverlapTable) -> u64 {
    table.partial_sizes(x).iter().map(|&m| binomial(x, m)).sum()
}

/// Number of MO keys a size-`x` signature produces.
pub fn mo_key_count(x: usize, table: &MinOverlapTable) -> u64 {
    table.pairs(x).iter().map(|&(_, m)| binomial(x, m)).sum()
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
