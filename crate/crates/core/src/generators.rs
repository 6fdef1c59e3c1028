//! Deterministic level sources: the multinomial random baseline, the
//! corruption generator, and corpus loading.
//!
//! All randomness comes from ChaCha8 seeded with a caller-supplied 64-bit
//! seed, so output is byte-stable across platforms and runs. Batch callers
//! derive per-level seeds by mixing the base seed with the level index.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::level::{GameConfig, Level, ObjectId};

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("frequencies must be non-negative and sum to 1 (got sum {0})")]
    BadFrequencies(f64),
    #[error("cannot corrupt {k} cells of a {cells}-cell level")]
    KTooLarge { k: usize, cells: usize },
    #[error("empty corpus at {0}")]
    EmptyCorpus(String),
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0} corpus file(s) failed to parse:\n{1}")]
    ParseFailures(usize, String),
}

/// What to generate; the seed fully determines the output.
#[derive(Debug, Clone)]
pub enum GeneratorSpec {
    /// Sample every cell i.i.d. from the given per-type distribution.
    RandomMultinomial { frequencies: Vec<f64> },
    /// Resample `count` distinct cells of a source level.
    Corrupt {
        frequencies: Vec<f64>,
        corruption_count: usize,
    },
}

fn check_frequencies(frequencies: &[f64]) -> Result<(), GeneratorError> {
    let sum: f64 = frequencies.iter().sum();
    if frequencies.iter().any(|&f| f < 0.0) || (sum - 1.0).abs() > 1e-9 || frequencies.len() > 256
    {
        return Err(GeneratorError::BadFrequencies(sum));
    }
    Ok(())
}

fn sample_type(frequencies: &[f64], rng: &mut ChaCha8Rng) -> ObjectId {
    let r: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = 0;
    for (id, &f) in frequencies.iter().enumerate() {
        if f <= 0.0 {
            continue;
        }
        acc += f;
        last = id;
        if r < acc {
            return id as ObjectId;
        }
    }
    last as ObjectId // rounding left r just past the accumulated mass
}

/// Level with every cell sampled independently from `frequencies`
/// (probability per object id). Deterministic per seed.
pub fn generate_random(
    rows: usize,
    cols: usize,
    frequencies: &[f64],
    seed: u64,
) -> Result<Level, GeneratorError> {
    check_frequencies(frequencies)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = (0..rows * cols)
        .map(|_| sample_type(frequencies, &mut rng))
        .collect();
    Ok(Level::from_cells(rows, cols, cells))
}

/// Resample `k` distinct cells of `level` from `frequencies`. A resampled
/// cell may receive its old type, so `hamming(level, corrupt(level, k)) <= k`.
pub fn corrupt(
    level: &Level,
    k: usize,
    frequencies: &[f64],
    seed: u64,
) -> Result<Level, GeneratorError> {
    check_frequencies(frequencies)?;
    let cells = level.node_count();
    if k > cells {
        return Err(GeneratorError::KTooLarge { k, cells });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices: Vec<usize> = (0..cells).collect();
    for i in 0..k {
        let j = i + rng.gen_range(0..cells - i);
        indices.swap(i, j);
    }
    let mut out = level.clone();
    for &v in &indices[..k] {
        out.set(
            v / level.cols(),
            v % level.cols(),
            sample_type(frequencies, &mut rng),
        );
    }
    Ok(out)
}

/// Mix a base seed with a level index; used to parallelize batch generation
/// while keeping per-level determinism.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = base.wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Parse every regular file in `path` (sorted by file name) as a level.
pub fn load_corpus(
    path: &Path,
    config: &GameConfig,
) -> Result<Vec<(String, Level)>, GeneratorError> {
    let mut names: Vec<String> = Vec::new();
    let entries = std::fs::read_dir(path).map_err(|source| GeneratorError::Io {
        path: path.display().to_string(),
        source,
    })?;
    for entry in entries {
        let entry = entry.map_err(|source| GeneratorError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let p = entry.path();
        if p.is_file() {
            names.push(p.display().to_string());
        }
    }
    names.sort();
    if names.is_empty() {
        return Err(GeneratorError::EmptyCorpus(path.display().to_string()));
    }
    let mut levels = Vec::new();
    let mut failures = Vec::new();
    for name in names {
        match std::fs::read_to_string(&name) {
            Err(e) => failures.push(format!("{name}: {e}")),
            Ok(text) => match Level::parse(&text, config) {
                Ok(level) => levels.push((name, level)),
                Err(e) => failures.push(format!("{name}: {e}")),
            },
        }
    }
    if !failures.is_empty() {
        return Err(GeneratorError::ParseFailures(
            failures.len(),
            failures.join("\n"),
        ));
    }
    Ok(levels)
}

/// Tiny splitmix64 stream for seeded unit tests.
#[cfg(test)]
pub(crate) fn test_rng(seed: u64) -> u64 {
    seed
}

#[cfg(test)]
pub(crate) fn next_u64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets;
    use crate::level::object_frequencies;
    use crate::metrics::hamming;

    fn zelda() -> GameConfig {
        GameConfig::parse(assets::ZELDA_CONFIG).unwrap()
    }

    #[test]
    fn all_mass_on_one_type() {
        let cfg = zelda();
        let wall = cfg.object_by_name("wall").unwrap().id;
        let mut freqs = vec![0.0; 8];
        freqs[wall as usize] = 1.0;
        let level = generate_random(9, 13, &freqs, 7).unwrap();
        assert_eq!(level.count_of(wall), 117);
    }

    #[test]
    fn same_seed_same_level() {
        let cfg = zelda();
        let levels: Vec<Level> = assets::zelda_corpus()
            .iter()
            .map(|(_, t)| Level::parse(t, &cfg).unwrap())
            .collect();
        let freqs = object_frequencies(&levels, 8).unwrap();
        let a = generate_random(9, 13, &freqs, 42).unwrap();
        let b = generate_random(9, 13, &freqs, 42).unwrap();
        assert_eq!(a, b);
        let c = generate_random(9, 13, &freqs, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn empirical_frequencies_track_target() {
        // 1000 samples x 117 cells; binomial s.d. is ~0.0015 per type, so a
        // +-0.02 window leaves the flake probability far below 1e-6
        let cfg = zelda();
        let levels: Vec<Level> = assets::zelda_corpus()
            .iter()
            .map(|(_, t)| Level::parse(t, &cfg).unwrap())
            .collect();
        let freqs = object_frequencies(&levels, 8).unwrap();
        let samples: Vec<Level> = (0..1000)
            .map(|i| generate_random(9, 13, &freqs, derive_seed(99, i)).unwrap())
            .collect();
        let got = object_frequencies(&samples, 8).unwrap();
        for (id, (&want, &have)) in freqs.iter().zip(got.iter()).enumerate() {
            assert!(
                (want - have).abs() < 0.02,
                "type {id}: want {want}, have {have}"
            );
        }
    }

    #[test]
    fn rejects_bad_frequencies() {
        assert!(matches!(
            generate_random(2, 2, &[0.5, 0.4], 1),
            Err(GeneratorError::BadFrequencies(_))
        ));
    }

    #[test]
    fn corrupt_zero_is_identity() {
        let cfg = zelda();
        let level = Level::parse(assets::zelda_corpus()[0].1, &cfg).unwrap();
        let freqs = vec![0.125; 8];
        assert_eq!(corrupt(&level, 0, &freqs, 5).unwrap(), level);
    }

    #[test]
    fn corrupt_all_cells_with_point_mass() {
        let cfg = zelda();
        let empty = cfg.object_by_name("empty").unwrap().id;
        let level = Level::parse(assets::zelda_corpus()[0].1, &cfg).unwrap();
        let mut freqs = vec![0.0; 8];
        freqs[empty as usize] = 1.0;
        let out = corrupt(&level, 117, &freqs, 5).unwrap();
        assert_eq!(out.count_of(empty), 117);
    }

    #[test]
    fn corrupt_changes_at_most_k_cells() {
        let cfg = zelda();
        let level = Level::parse(assets::zelda_corpus()[0].1, &cfg).unwrap();
        let freqs = vec![0.125; 8];
        for k in [1usize, 5, 15, 60] {
            for seed in 0..20u64 {
                let out = corrupt(&level, k, &freqs, seed).unwrap();
                assert!(hamming(&level, &out).unwrap() <= k);
            }
        }
    }

    #[test]
    fn corrupt_rejects_oversized_k() {
        let cfg = zelda();
        let level = Level::parse(assets::zelda_corpus()[0].1, &cfg).unwrap();
        assert!(matches!(
            corrupt(&level, 118, &vec![0.125; 8], 1),
            Err(GeneratorError::KTooLarge { .. })
        ));
    }

    #[test]
    fn load_corpus_from_directory() {
        let cfg = zelda();
        let dir = tempfile::tempdir().unwrap();
        for (name, text) in assets::zelda_corpus() {
            std::fs::write(dir.path().join(name), text).unwrap();
        }
        let corpus = load_corpus(dir.path(), &cfg).unwrap();
        assert_eq!(corpus.len(), 8);
        for (_, level) in &corpus {
            assert!(crate::flows::validate_playable(level, &cfg).is_empty());
        }
    }

    #[test]
    fn load_corpus_empty_directory() {
        let cfg = zelda();
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            load_corpus(dir.path(), &cfg),
            Err(GeneratorError::EmptyCorpus(_))
        ));
    }

    #[test]
    fn load_corpus_reports_malformed_file() {
        let cfg = zelda();
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("good.txt"), assets::zelda_corpus()[0].1).unwrap();
        std::fs::write(dir.path().join("bad.txt"), "wxw\nw").unwrap();
        match load_corpus(dir.path(), &cfg) {
            Err(GeneratorError::ParseFailures(1, msg)) => assert!(msg.contains("bad.txt")),
            other => panic!("expected parse failure, got {other:?}"),
        }
    }
}
