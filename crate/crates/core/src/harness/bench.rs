//! Scaling benchmarks for indexing and learning.

use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use super::save_index;
use crate::corpus::{gen_random_word, sha256_hex, Labeller};
use crate::learner::{Index, LearnError, Pipeline, TrainingSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Indexing,
    Learning,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "indexing" => Ok(Suite::Indexing),
            "learning" => Ok(Suite::Learning),
            _ => Err(format!("unknown suite `{s}` (expected indexing or learning)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub operation: String,
    pub word_len: usize,
    pub training_len: usize,
    /// Best of the repeats, in seconds.
    pub wall_secs: f64,
    pub nodes_touched: u64,
    pub products: u64,
    pub index_bytes: usize,
    pub config_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub suite: Suite,
    pub config_hash: String,
    pub records: Vec<BenchRecord>,
    /// Least-squares slope of log(time) against log(|B|).
    pub slope: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    pub seed: u64,
    pub repeats: usize,
    pub training_len: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            seed: 0,
            repeats: 3,
            training_len: 10,
        }
    }
}

/// SHA-256 over the formula text (which includes the alphabet) and caps.
pub fn config_hash(p: &Pipeline) -> String {
    let caps = p.caps();
    sha256_hex(format!("{}\nstates={}\nmonoid={}", p.formula(), caps.states, caps.monoid).as_bytes())
}

/// Slope of the least-squares line through `(ln x, ln y)`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Index build time with the pipeline already constructed.
pub fn time_indexing(p: &Arc<Pipeline>, n: usize, seed: u64, repeats: usize) -> Result<(f64, Index), LearnError> {
    let word = gen_random_word(p.formula().alphabet(), n, seed);
    let mut best = f64::INFINITY;
    let mut index = None;
    for _ in 0..repeats.max(1) {
        let w = word.clone();
        let start = Instant::now();
        let idx = Index::build(p.clone(), w)?;
        best = best.min(start.elapsed().as_secs_f64());
        index = Some(idx);
    }
    Ok((best, index.unwrap()))
}

/// `count` examples at evenly spread positions, labelled by the formula with
/// every parameter at the middle of the word.
pub fn scaled_training_set(labeller: &Labeller, index: &Index, count: usize) -> TrainingSet {
    let n = index.word().len();
    let params = vec![(n / 2).max(1); index.pipeline().formula().num_params()];
    let labels = labeller.label(index.word(), &params);
    TrainingSet::new((0..count).map(|j| {
        let pos = ((2 * j + 1) * n / (2 * count)).clamp(1, n);
        (pos, labels[pos - 1])
    }))
}

pub fn run_bench(
    p: &Arc<Pipeline>,
    suite: Suite,
    sizes: &[usize],
    cfg: BenchConfig,
) -> Result<BenchReport, LearnError> {
    let hash = config_hash(p);
    let labeller = match suite {
        Suite::Learning => Some(Labeller::new(p.formula()).map_err(|e| match e {
            crate::corpus::CorpusError::Compile(c) => LearnError::Compile(c),
            _ => unreachable!("labeller only fails to compile"),
        })?),
        Suite::Indexing => None,
    };
    let mut records = Vec::new();
    for &n in sizes {
        let (secs, index) = time_indexing(p, n, cfg.seed, cfg.repeats)?;
        let record = match &labeller {
            None => BenchRecord {
                operation: "index".into(),
                word_len: n,
                training_len: 0,
                wall_secs: secs,
                nodes_touched: index.tree().num_nodes() as u64,
                products: 0,
                index_bytes: save_index(&index).len(),
                config_hash: hash.clone(),
            },
            Some(lab) => {
                let t = scaled_training_set(lab, &index, cfg.training_len);
                let mut best = f64::INFINITY;
                let mut stats = None;
                for _ in 0..cfg.repeats.max(1) {
                    let start = Instant::now();
                    let learned = index.learn(&t);
                    best = best.min(start.elapsed().as_secs_f64());
                    stats = Some(learned?.stats);
                }
                let stats = stats.unwrap();
                BenchRecord {
                    operation: "learn".into(),
                    word_len: n,
                    training_len: t.len(),
                    wall_secs: best,
                    nodes_touched: stats.nodes_touched,
                    products: stats.products,
                    index_bytes: 0,
                    config_hash: hash.clone(),
                }
            }
        };
        records.push(record);
    }
    let slope = log_log_slope(
        &records
            .iter()
            .map(|r| (r.word_len as f64, r.wall_secs))
            .collect::<Vec<_>>(),
    );
    Ok(BenchReport {
        suite,
        config_hash: hash,
        records,
        slope,
    })
}
