use std::time::Instant;

use levelrepair::generators::{corrupt, derive_seed};
use levelrepair::level::{object_frequencies, GameConfig, Level};
use levelrepair::solver::SolverOptions;
use levelrepair::{assets, flows, repair};

fn main() {
    let cfg = GameConfig::parse(assets::ZELDA_CONFIG).unwrap();
    let humans: Vec<Level> = assets::zelda_corpus()
        .iter()
        .map(|(_, t)| Level::parse(t, &cfg).unwrap())
        .collect();
    let freqs = object_frequencies(&humans, cfg.alphabet.len()).unwrap();
    let options = SolverOptions::default();
    let mut worst = 0.0f64;
    let mut total = 0.0f64;
    let n = 30;
    for i in 0..n {
        let base = &humans[i % humans.len()];
        let k = 1 + (i % 15);
        let input = corrupt(base, k, &freqs, derive_seed(0xbeef, i as u64)).unwrap();
        let t0 = Instant::now();
        let result = repair::repair(&input, &cfg, &options);
        let dt = t0.elapsed().as_secs_f64();
        let (output, report) = match result {
            Ok(x) => x,
            Err(e) => {
                println!("level {i:2} k={k:2} FAILED after {dt:.1}s: {e}");
                continue;
            }
        };
        total += dt;
        worst = worst.max(dt);
        let ok = flows::validate_playable(&output, &cfg).is_empty();
        let (oracle, _) = flows::edit_distance(&input, &output, &cfg).unwrap();
        assert!(ok);
        assert_eq!(oracle, report.total_cost);
        println!(
            "level {i:2} k={k:2} cost={:3} time={:.3}s",
            report.total_cost, dt
        );
    }
    println!("mean {:.3}s worst {:.3}s", total / n as f64, worst);
}
