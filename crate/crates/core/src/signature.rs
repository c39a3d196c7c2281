//! Data item signatures and their line format.
//!
//! A signature is written on one line with its elements joined by `-`, in
//! ascending byte order and without duplicates: `BALLOT-BOND-SCHOOL-TAX`.

use std::fmt;

use thiserror::Error;

use crate::similarity::SizeSet;

/// Separator between elements on an input line and inside rendered keys.
pub const SEPARATOR: char = '-';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureErrorKind {
    #[error("empty element")]
    EmptyElement,
    #[error("element {0:?} contains a line break")]
    InvalidElement(String),
    #[error("elements are not in ascending byte order at {0:?}")]
    UnsortedElements(String),
    #[error("duplicate element {0:?}")]
    DuplicateElement(String),
    #[error("signature has {size} elements, allowed sizes are {min}..={max}")]
    SizeOutOfRange { size: usize, min: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct SignatureError {
    pub line: u64,
    pub kind: SignatureErrorKind,
}

/// A data item signature: a 1-based ordinal and a sorted set of element
/// tokens.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    ordinal: u64,
    elements: Vec<String>,
}

impl Signature {
    /// Builds a signature from elements that must already be sorted and
    /// distinct. Size membership is not checked here.
    pub fn new(ordinal: u64, elements: Vec<String>) -> Result<Self, SignatureError> {
        let err = |kind| SignatureError { line: ordinal, kind };
        for e in &elements {
            check_element(e).map_err(err)?;
        }
        for w in elements.windows(2) {
            match w[0].as_bytes().cmp(w[1].as_bytes()) {
                std::cmp::Ordering::Less => {}
                std::cmp::Ordering::Equal => {
                    return Err(err(SignatureErrorKind::DuplicateElement(w[1].clone())))
                }
                std::cmp::Ordering::Greater => {
                    return Err(err(SignatureErrorKind::UnsortedElements(w[1].clone())))
                }
            }
        }
        if elements.is_empty() {
            return Err(err(SignatureErrorKind::EmptyElement));
        }
        Ok(Self { ordinal, elements })
    }

    pub fn ordinal(&self) -> u64 {
        self.ordinal
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn with_ordinal(mut self, ordinal: u64) -> Self {
        self.ordinal = ordinal;
        self
    }

    pub fn into_elements(self) -> Vec<String> {
        self.elements
    }

    pub fn check_size(&self, sizes: &SizeSet) -> Result<(), SignatureError> {
        if sizes.contains(self.len()) {
            Ok(())
        } else {
            Err(SignatureError {
                line: self.ordinal,
                kind: SignatureErrorKind::SizeOutOfRange {
                    size: self.len(),
                    min: sizes.min(),
                    max: sizes.max(),
                },
            })
        }
    }

    /// Hyphen-joined line form.
    pub fn render(&self) -> String {
        self.elements.join("-")
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, "{SEPARATOR}")?;
            }
            f.write_str(e)?;
        }
        Ok(())
    }
}

fn check_element(e: &str) -> Result<(), SignatureErrorKind> {
    if e.is_empty() {
        Err(SignatureErrorKind::EmptyElement)
    } else if e.contains(['\n', '\r', SEPARATOR]) {
        Err(SignatureErrorKind::InvalidElement(e.to_string()))
    } else {
        Ok(())
    }
}

/// Parses one input line (without its newline) as signature number
/// `ordinal`, rejecting unsorted or repeated elements and sizes outside
/// `sizes`.
pub fn parse_line(line: &str, ordinal: u64, sizes: &SizeSet) -> Result<Signature, SignatureError> {
    let elements = line.split(SEPARATOR).map(str::to_owned).collect();
    let sig = Signature::new(ordinal, elements)?;
    sig.check_size(sizes)?;
    Ok(sig)
}

/// Like [`parse_line`] but sorts and deduplicates the elements instead of
/// rejecting them.
pub fn parse_line_normalized(
    line: &str,
    ordinal: u64,
    sizes: &SizeSet,
) -> Result<Signature, SignatureError> {
    let mut elements: Vec<String> = line.split(SEPARATOR).map(str::to_owned).collect();
    elements.sort_unstable_by(|a, b| a.as_bytes().cmp(b.as_bytes()));
    elements.dedup();
    let sig = Signature::new(ordinal, elements)?;
    sig.check_size(sizes)?;
    Ok(sig)
}

/// Keeps the first `max` elements of a sorted list, dropping the rest.
pub fn truncate<T>(mut elements: Vec<T>, max: usize) -> Vec<T> {
    elements.truncate(max);
    elements
}
