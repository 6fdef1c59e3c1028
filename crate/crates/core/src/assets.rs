//! Bundled game configurations and human-authored level corpora.
//!
//! Everything here is embedded in the binary so the CLI works without any
//! external data files; the same files live under `crates/core/assets/` for
//! use as templates.

/// GVGAI-style Zelda configuration (9x13 grids).
pub const ZELDA_CONFIG: &str = include_str!("../assets/configs/zelda.game");

/// Pac-Man configuration (toroidal 9x13 grids, no dead ends).
pub const PACMAN_CONFIG: &str = include_str!("../assets/configs/pacman.game");

/// Human-authored Zelda corpus as (file name, level text) pairs.
pub fn zelda_corpus() -> Vec<(&'static str, &'static str)> {
    vec![
        ("human0.txt", include_str!("../assets/corpus/zelda/human0.txt")),
        ("human1.txt", include_str!("../assets/corpus/zelda/human1.txt")),
        ("human2.txt", include_str!("../assets/corpus/zelda/human2.txt")),
        ("human3.txt", include_str!("../assets/corpus/zelda/human3.txt")),
        ("human4.txt", include_str!("../assets/corpus/zelda/human4.txt")),
        ("human5.txt", include_str!("../assets/corpus/zelda/human5.txt")),
        ("human6.txt", include_str!("../assets/corpus/zelda/human6.txt")),
        ("human7.txt", include_str!("../assets/corpus/zelda/human7.txt")),
    ]
}

/// Human-authored Pac-Man corpus as (file name, level text) pairs.
pub fn pacman_corpus() -> Vec<(&'static str, &'static str)> {
    vec![
        ("human0.txt", include_str!("../assets/corpus/pacman/human0.txt")),
        ("human1.txt", include_str!("../assets/corpus/pacman/human1.txt")),
        ("human2.txt", include_str!("../assets/corpus/pacman/human2.txt")),
    ]
}

/// Resolve a `--config` argument: a bundled name or a file path's contents.
pub fn bundled_config(name: &str) -> Option<&'static str> {
    match name {
        "zelda" => Some(ZELDA_CONFIG),
        "pacman" => Some(PACMAN_CONFIG),
        _ => None,
    }
}

/// Resolve a bundled corpus name.
pub fn bundled_corpus(name: &str) -> Option<Vec<(&'static str, &'static str)>> {
    match name {
        "zelda" => Some(zelda_corpus()),
        "pacman" => Some(pacman_corpus()),
        _ => None,
    }
}
