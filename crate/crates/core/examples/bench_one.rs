use std::time::Instant;

use levelrepair::generators::{corrupt, derive_seed};
use levelrepair::level::{object_frequencies, GameConfig, Level};
use levelrepair::solver::SolverOptions;
use levelrepair::{assets, repair};

fn main() {
    let i: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let cfg = GameConfig::parse(assets::ZELDA_CONFIG).unwrap();
    let humans: Vec<Level> = assets::zelda_corpus()
        .iter()
        .map(|(_, t)| Level::parse(t, &cfg).unwrap())
        .collect();
    let freqs = object_frequencies(&humans, cfg.alphabet.len()).unwrap();
    let base = &humans[i % humans.len()];
    let k = 1 + (i % 15);
    let input = corrupt(base, k, &freqs, derive_seed(0xbeef, i as u64)).unwrap();
    eprintln!("input k={k} violations: {:?}", levelrepair::flows::validate_playable(&input, &cfg));
    eprintln!("diff vs base: {:?}", levelrepair::metrics::hamming(&base, &input));
    eprintln!("{}", input.render(&cfg));
    let options = SolverOptions { time_limit_seconds: 60.0, ..SolverOptions::default() };
    let t0 = Instant::now();
    match repair::repair(&input, &cfg, &options) {
        Ok((_out, report)) => eprintln!("cost {} in {:.2}s", report.total_cost, t0.elapsed().as_secs_f64()),
        Err(e) => eprintln!("FAILED after {:.2}s: {e}", t0.elapsed().as_secs_f64()),
    }
}
