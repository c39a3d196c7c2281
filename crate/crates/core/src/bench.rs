//! Benchmark harness: clustering runs, cluster-size histograms, timing
//! series and synthetic input.
//!
//! Run output has one line per item, `<cluster_id>\t<ordinal>\t<e1-e2-…>`,
//! interleaved with timing comments `# n=<ordinal> elapsed=<seconds>` after
//! every 10th item up to 2,000 and every 1,000th item after that.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::centroid::CentroidEngine;
use crate::cluster::{Clusterer, EngineError};
use crate::engine::{EngineConfig, MimosaEngine, Neighborhood};
use crate::signature::{parse_line, parse_line_normalized, truncate, SignatureError, SEPARATOR};
use crate::similarity::SizeSet;
use crate::synth::{generate_synthetic, SynthConfig, SynthError};
use crate::Threshold;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error("line {line}: {reason}")]
    Malformed { line: u64, reason: String },
    #[error("no timestamp lines found")]
    NoTimestamps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Centroid,
    Mimosa,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    pub theta: Threshold,
    pub sizes: SizeSet,
    pub algorithm: Algorithm,
    /// Stop after this many items.
    pub count: u64,
    pub mode: Neighborhood,
    /// Sort and deduplicate elements instead of rejecting the line.
    pub normalize: bool,
    /// Count and skip invalid lines instead of aborting.
    pub skip_bad: bool,
    /// Drop elements beyond the largest allowed size before validation.
    pub truncate: bool,
}

impl RunOptions {
    pub fn new(theta: Threshold, sizes: SizeSet, algorithm: Algorithm, count: u64) -> Self {
        Self {
            theta,
            sizes,
            algorithm,
            count,
            mode: Neighborhood::Centroid,
            normalize: false,
            skip_bad: false,
            truncate: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub items: u64,
    pub clusters: u64,
    pub skipped: u64,
    /// Engine work counter, see [`Clusterer::work`].
    pub work: u64,
    pub elapsed: Duration,
    /// Marker store footprint for key-based runs.
    pub store_bytes: Option<usize>,
}

/// Whether a timing line follows item `ordinal`.
pub fn is_timestamp_ordinal(ordinal: u64) -> bool {
    if ordinal <= 2_000 {
        ordinal.is_multiple_of(10)
    } else {
        ordinal.is_multiple_of(1_000)
    }
}

enum Engine {
    Centroid(CentroidEngine),
    Mimosa(MimosaEngine),
}

impl Engine {
    fn as_clusterer(&mut self) -> &mut dyn Clusterer {
        match self {
            Engine::Centroid(e) => e,
            Engine::Mimosa(e) => e,
        }
    }
}

/// Clusters the signatures read from `input`, writing assignments and
/// timing lines to `out`.
pub fn run<R: BufRead, W: Write>(
    opts: &RunOptions,
    mut input: R,
    mut out: W,
) -> Result<RunSummary, BenchError> {
    let start = Instant::now();
    let mut engine = match opts.algorithm {
        Algorithm::Centroid => Engine::Centroid(CentroidEngine::new(opts.theta, opts.sizes.clone())),
        Algorithm::Mimosa => Engine::Mimosa(MimosaEngine::new(EngineConfig {
            theta: opts.theta,
            sizes: opts.sizes.clone(),
            mode: opts.mode,
        })),
    };
    let clusterer = engine.as_clusterer();

    let mut buf = String::new();
    let mut line_no = 0u64;
    let mut items = 0u64;
    let mut skipped = 0u64;
    while items < opts.count {
        buf.clear();
        if input.read_line(&mut buf)? == 0 {
            break;
        }
        line_no += 1;
        let mut line = buf.strip_suffix('\n').unwrap_or(&buf);
        line = line.strip_suffix('\r').unwrap_or(line);
        let truncated;
        if opts.truncate {
            truncated = truncate(line.split(SEPARATOR).collect(), opts.sizes.max()).join("-");
            line = &truncated;
        }
        let parsed = if opts.normalize {
            parse_line_normalized(line, line_no, &opts.sizes)
        } else {
            parse_line(line, line_no, &opts.sizes)
        };
        let sig = match parsed {
            Ok(sig) => sig,
            Err(_) if opts.skip_bad => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        items += 1;
        let assignment = clusterer.process(sig.with_ordinal(items))?;
        writeln!(out, "{assignment}")?;
        if is_timestamp_ordinal(items) {
            writeln!(out, "# n={items} elapsed={:.6}", start.elapsed().as_secs_f64())?;
        }
    }
    out.flush()?;

    let store_bytes = match &engine {
        Engine::Mimosa(e) => Some(e.store().heap_bytes()),
        Engine::Centroid(_) => None,
    };
    let clusterer = engine.as_clusterer();
    Ok(RunSummary {
        items,
        clusters: clusterer.cluster_count(),
        skipped,
        work: clusterer.work(),
        elapsed: start.elapsed(),
        store_bytes,
    })
}

/// One parsed assignment line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentRow {
    pub cluster_id: u32,
    pub ordinal: u64,
    pub elements: String,
}

fn malformed(line: u64, reason: impl Into<String>) -> BenchError {
    BenchError::Malformed {
        line,
        reason: reason.into(),
    }
}

fn parse_assignment(line: &str, line_no: u64) -> Result<AssignmentRow, BenchError> {
    let mut cols = line.split('\t');
    let (Some(id), Some(ordinal), Some(elements), None) =
        (cols.next(), cols.next(), cols.next(), cols.next())
    else {
        return Err(malformed(line_no, "expected three tab-separated columns"));
    };
    let cluster_id: u32 = id
        .parse()
        .ok()
        .filter(|&v| v > 0)
        .ok_or_else(|| malformed(line_no, format!("bad cluster id {id:?}")))?;
    let ordinal: u64 = ordinal
        .parse()
        .map_err(|_| malformed(line_no, format!("bad ordinal {ordinal:?}")))?;
    if elements.is_empty() {
        return Err(malformed(line_no, "no elements"));
    }
    Ok(AssignmentRow {
        cluster_id,
        ordinal,
        elements: elements.to_string(),
    })
}

/// Reads the assignment lines of a run output, skipping `#` comments.
pub fn read_assignments<R: BufRead>(input: R) -> Result<Vec<AssignmentRow>, BenchError> {
    let mut rows = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.starts_with('#') {
            continue;
        }
        rows.push(parse_assignment(&line, i as u64 + 1)?);
    }
    Ok(rows)
}

/// Cluster-size histogram of a run output: `(cluster size, number of
/// clusters)` pairs in ascending size order.
pub fn hist<R: BufRead>(input: R) -> Result<Vec<(u64, u64)>, BenchError> {
    let mut members: BTreeMap<u32, u64> = BTreeMap::new();
    for row in read_assignments(input)? {
        *members.entry(row.cluster_id).or_default() += 1;
    }
    let mut sizes: BTreeMap<u64, u64> = BTreeMap::new();
    for n in members.into_values() {
        *sizes.entry(n).or_default() += 1;
    }
    Ok(sizes.into_iter().collect())
}

pub fn write_hist<W: Write>(rows: &[(u64, u64)], mut out: W) -> io::Result<()> {
    for (size, count) in rows {
        writeln!(out, "{size}\t{count}")?;
    }
    out.flush()
}

/// Elapsed time recorded after a given number of items.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingRecord {
    pub ordinal: u64,
    pub elapsed: f64,
}

impl TimingRecord {
    /// Seconds per item averaged over the whole run so far.
    pub fn cumulative_average(&self) -> f64 {
        self.elapsed / self.ordinal as f64
    }
}

fn parse_timestamp(line: &str, line_no: u64) -> Result<Option<TimingRecord>, BenchError> {
    let Some(rest) = line.strip_prefix("# n=") else {
        return Ok(None);
    };
    let bad = || malformed(line_no, format!("bad timestamp {line:?}"));
    let (n, elapsed) = rest.split_once(" elapsed=").ok_or_else(bad)?;
    let ordinal: u64 = n.parse().map_err(|_| bad())?;
    let elapsed: f64 = elapsed.parse().map_err(|_| bad())?;
    if ordinal == 0 || !elapsed.is_finite() || elapsed < 0.0 {
        return Err(bad());
    }
    Ok(Some(TimingRecord { ordinal, elapsed }))
}

/// Extracts the timing series from a run output.
pub fn times<R: BufRead>(input: R) -> Result<Vec<TimingRecord>, BenchError> {
    let mut records: Vec<TimingRecord> = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let line_no = i as u64 + 1;
        if let Some(rec) = parse_timestamp(&line, line_no)? {
            if let Some(prev) = records.last() {
                if rec.ordinal <= prev.ordinal || rec.elapsed < prev.elapsed {
                    return Err(malformed(line_no, "timestamps out of order"));
                }
            }
            records.push(rec);
        }
    }
    if records.is_empty() {
        return Err(BenchError::NoTimestamps);
    }
    Ok(records)
}

/// Writes `<ordinal>\t<elapsed>\t<cumulative average>` rows.
pub fn write_times<W: Write>(records: &[TimingRecord], mut out: W) -> io::Result<()> {
    for r in records {
        writeln!(out, "{}\t{}\t{}", r.ordinal, r.elapsed, r.cumulative_average())?;
    }
    out.flush()
}

/// Writes a synthetic signature stream, one line per signature. Returns the
/// number of lines written.
pub fn gen<W: Write>(config: &SynthConfig, mut out: W) -> Result<u64, BenchError> {
    let mut n = 0;
    for line in generate_synthetic(config)? {
        writeln!(out, "{line}")?;
        n += 1;
    }
    out.flush()?;
    Ok(n)
}

/// Drops `#` comment lines, leaving assignment lines only.
pub fn strip_comments(output: &str) -> String {
    output
        .lines()
        .filter(|l| !l.starts_with('#'))
        .flat_map(|l| [l, "\n"])
        .collect()
}
