//! Deterministic synthetic signature streams with planted clusters.
//!
//! Each line is either fresh (a random size from the allowed set, filled
//! with distinct random tokens) or, with the planted-cluster probability, a
//! perturbed copy of a random earlier line. A perturbed copy keeps the
//! parent's size and swaps out at most `x - m` elements, where `m` is the
//! MinOverlap of two size-`x` signatures, so it stays similar to its parent.

use rand::seq::index;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::similarity::{min_overlap, parse_fraction, SizeSet, ThresholdError};
use crate::Threshold;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("count must be at least 1")]
    ZeroCount,
    #[error("alphabet of {alphabet} tokens cannot fill a signature of {max} elements")]
    AlphabetTooSmall { alphabet: usize, max: usize },
    #[error("planted-cluster rate must lie in [0, 1]")]
    RateOutOfRange,
    #[error("planted-cluster rate: {0}")]
    Rate(#[from] ThresholdError),
}

/// Probability held as an exact fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rate {
    numerator: u64,
    denominator: u64,
}

impl Rate {
    pub fn new(numerator: u64, denominator: u64) -> Result<Self, SynthError> {
        if denominator == 0 || numerator > denominator {
            return Err(SynthError::RateOutOfRange);
        }
        Ok(Self {
            numerator,
            denominator,
        })
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> bool {
        rng.random_range(0..self.denominator) < self.numerator
    }
}

impl std::str::FromStr for Rate {
    type Err = SynthError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, d) = parse_fraction::<u64>(s)?;
        Self::new(n, d)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthConfig {
    pub count: u64,
    pub sizes: SizeSet,
    pub alphabet_size: usize,
    pub planted_rate: Rate,
    /// Threshold the planted perturbations stay within.
    pub theta: Threshold,
    pub seed: u64,
}

impl SynthConfig {
    pub fn new(count: u64, sizes: SizeSet, seed: u64) -> Self {
        Self {
            count,
            sizes,
            alphabet_size: 20_000,
            planted_rate: Rate::new(1, 2).expect("valid rate"),
            theta: Threshold::new(3, 5).expect("valid threshold"),
            seed,
        }
    }
}

/// Iterator over generated lines (without trailing newlines).
pub struct SyntheticStream {
    rng: ChaCha8Rng,
    remaining: u64,
    sizes: Vec<usize>,
    alphabet_size: usize,
    token_width: usize,
    planted_rate: Rate,
    theta: Threshold,
    emitted: Vec<Vec<u32>>,
}

/// Starts a deterministic stream for `config`.
pub fn generate_synthetic(config: &SynthConfig) -> Result<SyntheticStream, SynthError> {
    if config.count == 0 {
        return Err(SynthError::ZeroCount);
    }
    if config.alphabet_size < config.sizes.max() {
        return Err(SynthError::AlphabetTooSmall {
            alphabet: config.alphabet_size,
            max: config.sizes.max(),
        });
    }
    assert!(config.alphabet_size <= u32::MAX as usize, "alphabet exceeds u32");
    let mut token_width = 1;
    let mut capacity = 26usize;
    while capacity < config.alphabet_size {
        capacity = capacity.saturating_mul(26);
        token_width += 1;
    }
    Ok(SyntheticStream {
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        remaining: config.count,
        sizes: config.sizes.iter().collect(),
        alphabet_size: config.alphabet_size,
        token_width,
        planted_rate: config.planted_rate,
        theta: config.theta,
        emitted: Vec::new(),
    })
}

impl SyntheticStream {
    fn fresh(&mut self) -> Vec<u32> {
        let size = self.sizes[self.rng.random_range(0..self.sizes.len())];
        index::sample(&mut self.rng, self.alphabet_size, size)
            .into_iter()
            .map(|i| i as u32)
            .collect()
    }

    fn perturb(&mut self, parent: &[u32]) -> Vec<u32> {
        let x = parent.len();
        let keep_at_least = min_overlap(&self.theta, x as u64, x as u64).expect("m(x, x) <= x") as usize;
        let swaps = self.rng.random_range(0..=x - keep_at_least);
        let mut child = parent.to_vec();
        for _ in 0..swaps {
            let drop = self.rng.random_range(0..child.len());
            child.swap_remove(drop);
        }
        while child.len() < x {
            let t = self.rng.random_range(0..self.alphabet_size) as u32;
            if !parent.contains(&t) && !child.contains(&t) {
                child.push(t);
            }
        }
        child
    }

    fn render(&self, mut tokens: Vec<u32>) -> String {
        // fixed-width base-26 tokens sort by byte order exactly as by index
        tokens.sort_unstable();
        let mut line = String::with_capacity(tokens.len() * (self.token_width + 1));
        for (i, &t) in tokens.iter().enumerate() {
            if i > 0 {
                line.push('-');
            }
            let mut digits = vec![b'A'; self.token_width];
            let mut v = t as usize;
            for d in digits.iter_mut().rev() {
                *d = b'A' + (v % 26) as u8;
                v /= 26;
            }
            line.push_str(std::str::from_utf8(&digits).expect("ascii"));
        }
        line
    }
}

impl Iterator for SyntheticStream {
    type Item = String;

    fn next(&mut self) -> Option<String> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let tokens = if !self.emitted.is_empty() && self.planted_rate.sample(&mut self.rng) {
            let parent = self.emitted[self.rng.random_range(0..self.emitted.len())].clone();
            self.perturb(&parent)
        } else {
            self.fresh()
        };
        let line = self.render(tokens.clone());
        self.emitted.push(tokens);
        Some(line)
    }
}
