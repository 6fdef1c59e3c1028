//! Corpus-level evaluation: Hamming and edit-distance diversity, duplicate
//! and playability rates, tile frequencies, tile-pattern KL divergence, and
//! key-to-door path statistics.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::flows;
use crate::level::{GameConfig, Level, ObjectId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("levels have different dimensions")]
    DimensionMismatch,
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("tile patterns need levels of at least 2x2")]
    LevelTooSmall,
}

/// Number of cells whose object types differ.
pub fn hamming(a: &Level, b: &Level) -> Result<usize, MetricsError> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(MetricsError::DimensionMismatch);
    }
    Ok(a.cells()
        .iter()
        .zip(b.cells().iter())
        .filter(|(x, y)| x != y)
        .count())
}

/// 2x2 window patterns (stride 1, no wraparound), packed four ids to a key.
fn pattern_counts(corpus: &[Level]) -> Result<HashMap<u32, u64>, MetricsError> {
    let mut counts = HashMap::new();
    for level in corpus {
        if level.rows() < 2 || level.cols() < 2 {
            return Err(MetricsError::LevelTooSmall);
        }
        for r in 0..level.rows() - 1 {
            for c in 0..level.cols() - 1 {
                let key = (level.get(r, c) as u32)
                    | (level.get(r, c + 1) as u32) << 8
                    | (level.get(r + 1, c) as u32) << 16
                    | (level.get(r + 1, c + 1) as u32) << 24;
                *counts.entry(key).or_insert(0) += 1;
            }
        }
    }
    Ok(counts)
}

/// KL(generated || reference) between empirical 2x2 tile-pattern
/// distributions. Both distributions are smoothed by adding `epsilon` to
/// every pattern in the union of supports and re-normalizing.
pub fn tile_pattern_kl(
    generated: &[Level],
    reference: &[Level],
    epsilon: f64,
) -> Result<f64, MetricsError> {
    if generated.is_empty() || reference.is_empty() {
        return Err(MetricsError::EmptyCorpus);
    }
    let p_counts = pattern_counts(generated)?;
    let q_counts = pattern_counts(reference)?;
    let p_total: u64 = p_counts.values().sum();
    let q_total: u64 = q_counts.values().sum();
    let mut support: Vec<u32> = p_counts.keys().chain(q_counts.keys()).copied().collect();
    support.sort_unstable();
    support.dedup();
    let norm_p = 1.0 + epsilon * support.len() as f64;
    let norm_q = norm_p;
    let mut kl = 0.0;
    for key in support {
        let p = (p_counts.get(&key).copied().unwrap_or(0) as f64 / p_total as f64 + epsilon)
            / norm_p;
        let q = (q_counts.get(&key).copied().unwrap_or(0) as f64 / q_total as f64 + epsilon)
            / norm_q;
        kl += p * (p / q).ln();
    }
    Ok(kl)
}

#[derive(Debug, Clone, Serialize)]
pub struct TileFrequency {
    pub object: String,
    pub frequency: f64,
}

/// Summary metrics for one corpus, measured against a reference corpus.
#[derive(Debug, Clone, Serialize)]
pub struct CorpusReport {
    pub corpus_size: usize,
    pub playable_fraction: f64,
    pub duplicate_fraction: f64,
    pub playable_and_unique_fraction: f64,
    /// Mean Hamming distance over unordered pairs; None for one level.
    pub mean_pairwise_hamming: Option<f64>,
    /// Mean edit distance over unordered pairs; None for one level.
    pub mean_pairwise_edit_distance: Option<f64>,
    pub tile_frequencies: Vec<TileFrequency>,
    /// KL(corpus || reference) over 2x2 tile patterns.
    pub tile_pattern_kl: f64,
    /// (path length, number of levels) pairs, ascending.
    pub min_path_histogram: Vec<(usize, usize)>,
    pub mean_min_path: Option<f64>,
    /// Levels skipped by the path metric (no unique endpoints or no path).
    pub min_path_unavailable: usize,
}

/// Endpoint pair for the path metric: the first two target types required
/// to occur exactly once (key and door for Zelda). None disables the metric.
fn path_endpoints(config: &GameConfig) -> Option<(ObjectId, ObjectId)> {
    let singles: Vec<ObjectId> = config
        .target_set
        .iter()
        .copied()
        .filter(|t| {
            config
                .count_constraints
                .iter()
                .any(|&(ct, n)| ct == *t && n == 1)
        })
        .collect();
    match singles.as_slice() {
        [a, b, ..] => Some((*a, *b)),
        _ => None,
    }
}

pub fn corpus_report(
    levels: &[Level],
    reference: &[Level],
    config: &GameConfig,
    epsilon: f64,
) -> Result<CorpusReport, MetricsError> {
    if levels.is_empty() || reference.is_empty() {
        return Err(MetricsError::EmptyCorpus);
    }
    let n = levels.len();

    let playable_flags: Vec<bool> = levels
        .par_iter()
        .map(|l| flows::validate_playable(l, config).is_empty())
        .collect();
    let playable = playable_flags.iter().filter(|&&p| p).count();

    // exact-equality duplicate groups; the first of each group is "unique"
    let mut seen: HashMap<&[ObjectId], usize> = HashMap::new();
    let mut first_instance = vec![false; n];
    for (i, level) in levels.iter().enumerate() {
        if !seen.contains_key(level.cells()) {
            seen.insert(level.cells(), i);
            first_instance[i] = true;
        }
    }
    let unique = seen.len();
    let playable_and_unique = (0..n)
        .filter(|&i| playable_flags[i] && first_instance[i])
        .count();

    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let (mean_pairwise_hamming, mean_pairwise_edit_distance) = if pairs.is_empty() {
        (None, None)
    } else {
        let sums = pairs
            .par_iter()
            .map(|&(i, j)| {
                let h = hamming(&levels[i], &levels[j]).unwrap_or(0);
                let (e, _) = flows::edit_distance(&levels[i], &levels[j], config)
                    .unwrap_or((0, Default::default()));
                (h as f64, e as f64)
            })
            .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        let count = pairs.len() as f64;
        (Some(sums.0 / count), Some(sums.1 / count))
    };

    let freqs = crate::level::object_frequencies(levels, config.alphabet.len())
        .map_err(|_| MetricsError::EmptyCorpus)?;
    let tile_frequencies = config
        .alphabet
        .iter()
        .map(|o| TileFrequency {
            object: o.name.clone(),
            frequency: freqs[o.id as usize],
        })
        .collect();

    let kl = tile_pattern_kl(levels, reference, epsilon)?;

    let mut histogram: HashMap<usize, usize> = HashMap::new();
    let mut path_sum = 0usize;
    let mut path_count = 0usize;
    let mut unavailable = 0usize;
    if let Some((from, to)) = path_endpoints(config) {
        for level in levels {
            match flows::min_path_length(level, from, to, config) {
                Ok(Some(len)) => {
                    *histogram.entry(len).or_insert(0) += 1;
                    path_sum += len;
                    path_count += 1;
                }
                _ => unavailable += 1,
            }
        }
    } else {
        unavailable = n;
    }
    let mut min_path_histogram: Vec<(usize, usize)> = histogram.into_iter().collect();
    min_path_histogram.sort_unstable();

    Ok(CorpusReport {
        corpus_size: n,
        playable_fraction: playable as f64 / n as f64,
        duplicate_fraction: (n - unique) as f64 / n as f64,
        playable_and_unique_fraction: playable_and_unique as f64 / n as f64,
        mean_pairwise_hamming,
        mean_pairwise_edit_distance,
        tile_frequencies,
        tile_pattern_kl: kl,
        min_path_histogram,
        mean_min_path: if path_count > 0 {
            Some(path_sum as f64 / path_count as f64)
        } else {
            None
        },
        min_path_unavailable: unavailable,
    })
}

impl CorpusReport {
    /// Fixed-format text block; used by the CLI and the experiment report.
    pub fn render_text(&self, name: &str) -> String {
        let mut out = String::new();
        out.push_str(&format!("[{name}]\n"));
        out.push_str(&format!("  levels:              {}\n", self.corpus_size));
        out.push_str(&format!(
            "  playable:            {:.1}%\n",
            self.playable_fraction * 100.0
        ));
        out.push_str(&format!(
            "  duplicates:          {:.1}%\n",
            self.duplicate_fraction * 100.0
        ));
        out.push_str(&format!(
            "  playable and unique: {:.1}%\n",
            self.playable_and_unique_fraction * 100.0
        ));
        if let Some(h) = self.mean_pairwise_hamming {
            out.push_str(&format!("  mean pairwise hamming: {h:.3}\n"));
        }
        if let Some(e) = self.mean_pairwise_edit_distance {
            out.push_str(&format!("  mean pairwise edit distance: {e:.3}\n"));
        }
        out.push_str(&format!(
            "  tile-pattern KL vs reference: {:.6}\n",
            self.tile_pattern_kl
        ));
        match self.mean_min_path {
            Some(p) => out.push_str(&format!(
                "  mean min path: {:.3} (over {} levels)\n",
                p,
                self.corpus_size - self.min_path_unavailable
            )),
            None => out.push_str("  mean min path: n/a\n"),
        }
        let freq_line: Vec<String> = self
            .tile_frequencies
            .iter()
            .map(|t| format!("{}={:.4}", t.object, t.frequency))
            .collect();
        out.push_str(&format!("  tile frequencies: {}\n", freq_line.join(" ")));
        out
    }
}
