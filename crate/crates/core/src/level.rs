//! Level grids, game configurations, and the space graph they live on.
//!
//! A [`Level`] is a row-major grid of object ids drawn from the alphabet of a
//! [`GameConfig`]. The config also names the source/target/blocking sets, the
//! edit costs, and the domain constraints (counts, density, border, dead
//! ends) for one game; it is loaded from a plain-text key-value file so new
//! games need no code changes. The [`SpaceGraph`] is the 4-neighborhood
//! adjacency graph (optionally toroidal) that every flow construction and
//! every search in this crate runs on.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Index of an object type within one [`GameConfig`] alphabet.
pub type ObjectId = u8;

/// One entry of a game's object alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectType {
    /// Dense index, `0..alphabet.len()`.
    pub id: ObjectId,
    /// Identifier used in config files and reports.
    pub name: String,
    /// Single character used in level files.
    pub glyph: char,
}

/// A maximum-share constraint: the listed types may cover at most
/// `num/den` of the available space (non-border cells when a border
/// object is configured, all cells otherwise).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityConstraint {
    pub types: Vec<ObjectId>,
    pub num: u64,
    pub den: u64,
}

/// Alphabet plus rules for one game.
#[derive(Debug, Clone)]
pub struct GameConfig {
    pub name: String,
    /// Grid dimensions the bundled corpus and generators target.
    pub rows: usize,
    pub cols: usize,
    pub alphabet: Vec<ObjectType>,
    /// Types that supply reachability flow (the player).
    pub source_set: Vec<ObjectId>,
    /// Types that must be reachable from a source.
    pub target_set: Vec<ObjectId>,
    /// Impassable types; flow may enter their cells but never leave.
    pub blocking_set: Vec<ObjectId>,
    /// Cost of deleting an object.
    pub delete_cost: u32,
    /// Cost of moving an object one cell.
    pub move_cost: u32,
    /// Toroidal adjacency (tunnels joining opposite borders).
    pub wraparound: bool,
    /// (type, exact number of occurrences) requirements.
    pub count_constraints: Vec<(ObjectId, u32)>,
    pub density_constraints: Vec<DensityConstraint>,
    /// Type that must fill the outer perimeter, if any.
    pub border_object: Option<ObjectId>,
    /// Require every empty-space cell to have at least two passable neighbors.
    pub no_dead_ends: bool,
    /// The plain-floor type: filler for canonical levels and the subject of
    /// the no-dead-end rule.
    pub empty_object: ObjectId,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    MissingEquals { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: malformed value for `{key}`: {reason}")]
    BadValue {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("line {line}: unknown object name `{name}`")]
    UnknownObject { line: usize, name: String },
    #[error("duplicate object name `{0}`")]
    DuplicateName(String),
    #[error("duplicate glyph `{0}`")]
    DuplicateGlyph(char),
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("source and blocking sets overlap on `{0}`")]
    SourceBlockingOverlap(String),
    #[error("delete_cost ({delete}) must be >= move_cost ({mv})")]
    CostOrder { delete: u32, mv: u32 },
    #[error("density fraction must be in (0, 1], got {0}")]
    BadFraction(String),
    #[error("alphabet holds at most 256 object types")]
    AlphabetTooLarge,
}

impl GameConfig {
    /// Parse the key-value config format. Keys: `name`, `rows`, `cols`,
    /// `object` (repeatable, `<name> <glyph>`), `empty`, `source`, `target`,
    /// `blocking`, `delete_cost`, `move_cost`, `wraparound`, `count`
    /// (repeatable, `<name> <n>`), `density` (repeatable,
    /// `<names...> <= <fraction>`), `border`, `no_dead_ends`.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<GameConfig, ConfigError> {
        let mut name = None;
        let mut rows = None;
        let mut cols = None;
        let mut alphabet: Vec<ObjectType> = Vec::new();
        let mut raw: Vec<(usize, String, String)> = Vec::new();

        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(ConfigError::MissingEquals { line: line_no })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            match key.as_str() {
                "name" => name = Some(value),
                "rows" => rows = Some(parse_usize(line_no, &key, &value)?),
                "cols" => cols = Some(parse_usize(line_no, &key, &value)?),
                "object" => {
                    let (obj_name, glyph) = parse_object(line_no, &value)?;
                    if alphabet.iter().any(|o| o.name == obj_name) {
                        return Err(ConfigError::DuplicateName(obj_name));
                    }
                    if alphabet.iter().any(|o| o.glyph == glyph) {
                        return Err(ConfigError::DuplicateGlyph(glyph));
                    }
                    if alphabet.len() >= 256 {
                        return Err(ConfigError::AlphabetTooLarge);
                    }
                    alphabet.push(ObjectType {
                        id: alphabet.len() as ObjectId,
                        name: obj_name,
                        glyph,
                    });
                }
                _ => raw.push((line_no, key, value)),
            }
        }

        if alphabet.is_empty() {
            return Err(ConfigError::MissingKey("object"));
        }
        let lookup = |line: usize, n: &str| -> Result<ObjectId, ConfigError> {
            alphabet
                .iter()
                .find(|o| o.name == n)
                .map(|o| o.id)
                .ok_or_else(|| ConfigError::UnknownObject {
                    line,
                    name: n.to_string(),
                })
        };

        let mut cfg = GameConfig {
            name: name.ok_or(ConfigError::MissingKey("name"))?,
            rows: rows.ok_or(ConfigError::MissingKey("rows"))?,
            cols: cols.ok_or(ConfigError::MissingKey("cols"))?,
            alphabet: Vec::new(),
            source_set: Vec::new(),
            target_set: Vec::new(),
            blocking_set: Vec::new(),
            delete_cost: 10,
            move_cost: 1,
            wraparound: false,
            count_constraints: Vec::new(),
            density_constraints: Vec::new(),
            border_object: None,
            no_dead_ends: false,
            empty_object: 0,
        };
        let mut empty_seen = false;

        for (line, key, value) in raw {
            match key.as_str() {
                "empty" => {
                    cfg.empty_object = lookup(line, &value)?;
                    empty_seen = true;
                }
                "source" => cfg.source_set = parse_set(line, &value, &lookup)?,
                "target" => cfg.target_set = parse_set(line, &value, &lookup)?,
                "blocking" => cfg.blocking_set = parse_set(line, &value, &lookup)?,
                "delete_cost" => cfg.delete_cost = parse_u32(line, &key, &value)?,
                "move_cost" => cfg.move_cost = parse_u32(line, &key, &value)?,
                "wraparound" => cfg.wraparound = parse_bool(line, &key, &value)?,
                "no_dead_ends" => cfg.no_dead_ends = parse_bool(line, &key, &value)?,
                "border" => cfg.border_object = Some(lookup(line, &value)?),
                "count" => {
                    let (n, c) = value.rsplit_once(char::is_whitespace).ok_or_else(|| {
                        ConfigError::BadValue {
                            line,
                            key: key.clone(),
                            reason: "expected `<name> <count>`".into(),
                        }
                    })?;
                    let id = lookup(line, n.trim())?;
                    let c = parse_u32(line, &key, c.trim())?;
                    cfg.count_constraints.push((id, c));
                }
                "density" => {
                    let (names, frac) =
                        value
                            .split_once("<=")
                            .ok_or_else(|| ConfigError::BadValue {
                                line,
                                key: key.clone(),
                                reason: "expected `<names...> <= <fraction>`".into(),
                            })?;
                    let types = parse_set(line, names.trim(), &lookup)?;
                    let (num, den) = parse_fraction(frac.trim())?;
                    cfg.density_constraints
                        .push(DensityConstraint { types, num, den });
                }
                _ => return Err(ConfigError::UnknownKey { line, key }),
            }
        }

        if !empty_seen {
            return Err(ConfigError::MissingKey("empty"));
        }
        cfg.alphabet = alphabet;
        for &s in &cfg.source_set {
            if cfg.blocking_set.contains(&s) {
                return Err(ConfigError::SourceBlockingOverlap(
                    cfg.alphabet[s as usize].name.clone(),
                ));
            }
        }
        if cfg.delete_cost < cfg.move_cost {
            return Err(ConfigError::CostOrder {
                delete: cfg.delete_cost,
                mv: cfg.move_cost,
            });
        }
        Ok(cfg)
    }

    pub fn object(&self, id: ObjectId) -> &ObjectType {
        &self.alphabet[id as usize]
    }

    pub fn object_by_name(&self, name: &str) -> Option<&ObjectType> {
        self.alphabet.iter().find(|o| o.name == name)
    }

    pub fn glyph_to_id(&self, glyph: char) -> Option<ObjectId> {
        self.alphabet.iter().find(|o| o.glyph == glyph).map(|o| o.id)
    }

    /// Per-id membership mask for an object set.
    pub fn mask(&self, set: &[ObjectId]) -> Vec<bool> {
        let mut m = vec![false; self.alphabet.len()];
        for &id in set {
            m[id as usize] = true;
        }
        m
    }

    /// Space graph for this config's grid dimensions.
    pub fn space_graph(&self) -> SpaceGraph {
        SpaceGraph::build(self.rows, self.cols, self.wraparound)
    }
}

fn parse_object(line: usize, value: &str) -> Result<(String, char), ConfigError> {
    let mut parts = value.split_whitespace();
    let name = parts.next();
    let glyph = parts.next();
    match (name, glyph, parts.next()) {
        (Some(n), Some(g), None) if g.chars().count() == 1 => {
            Ok((n.to_string(), g.chars().next().unwrap()))
        }
        _ => Err(ConfigError::BadValue {
            line,
            key: "object".into(),
            reason: "expected `<name> <single-char glyph>`".into(),
        }),
    }
}

fn parse_set(
    line: usize,
    value: &str,
    lookup: &impl Fn(usize, &str) -> Result<ObjectId, ConfigError>,
) -> Result<Vec<ObjectId>, ConfigError> {
    let mut out = Vec::new();
    for n in value.split_whitespace() {
        let id = lookup(line, n)?;
        if !out.contains(&id) {
            out.push(id);
        }
    }
    out.sort_unstable();
    Ok(out)
}

fn parse_usize(line: usize, key: &str, value: &str) -> Result<usize, ConfigError> {
    value.parse().map_err(|_| ConfigError::BadValue {
        line,
        key: key.to_string(),
        reason: format!("`{value}` is not a non-negative integer"),
    })
}

fn parse_u32(line: usize, key: &str, value: &str) -> Result<u32, ConfigError> {
    value.parse().map_err(|_| ConfigError::BadValue {
        line,
        key: key.to_string(),
        reason: format!("`{value}` is not a non-negative integer"),
    })
}

fn parse_bool(line: usize, key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(ConfigError::BadValue {
            line,
            key: key.to_string(),
            reason: format!("`{value}` is not `true`/`false`"),
        }),
    }
}

/// Parse a decimal fraction exactly into num/den, e.g. "0.6" -> 3/5.
fn parse_fraction(text: &str) -> Result<(u64, u64), ConfigError> {
    let bad = || ConfigError::BadFraction(text.to_string());
    let (int_part, frac_part) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
        || frac_part.len() > 9
    {
        return Err(bad());
    }
    let int_val: u64 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().map_err(|_| bad())?
    };
    let frac_val: u64 = if frac_part.is_empty() {
        0
    } else {
        frac_part.parse().map_err(|_| bad())?
    };
    let den = 10u64.pow(frac_part.len() as u32);
    let num = int_val * den + frac_val;
    if num == 0 || num > den {
        return Err(bad());
    }
    let g = gcd(num, den);
    Ok((num / g, den / g))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LevelError {
    #[error("empty input")]
    EmptyInput,
    #[error("row {row} has length {len}, expected {expected}")]
    RaggedRows {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("unknown glyph `{glyph}` at row {row}, column {col}")]
    UnknownGlyph { row: usize, col: usize, glyph: char },
    #[error("cell ({row}, {col}) holds object id {id} outside the alphabet")]
    InvalidCell { row: usize, col: usize, id: ObjectId },
}

/// A rectangular grid assigning exactly one object type to each cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Level {
    rows: usize,
    cols: usize,
    cells: Vec<ObjectId>,
}

impl Level {
    /// Build from raw cells (row-major, length `rows * cols`).
    pub fn from_cells(rows: usize, cols: usize, cells: Vec<ObjectId>) -> Level {
        assert_eq!(cells.len(), rows * cols, "cell count must match dimensions");
        assert!(rows > 0 && cols > 0, "dimensions must be positive");
        Level { rows, cols, cells }
    }

    /// Parse a glyph grid: newline-separated rows, one glyph per cell.
    pub fn parse(text: &str, config: &GameConfig) -> Result<Level, LevelError> {
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        if lines.is_empty() {
            return Err(LevelError::EmptyInput);
        }
        let cols = lines[0].chars().count();
        let rows = lines.len();
        let mut cells = Vec::with_capacity(rows * cols);
        for (r, line) in lines.iter().enumerate() {
            let row_glyphs: Vec<char> = line.chars().collect();
            if row_glyphs.len() != cols {
                return Err(LevelError::RaggedRows {
                    row: r,
                    len: row_glyphs.len(),
                    expected: cols,
                });
            }
            for (c, glyph) in row_glyphs.into_iter().enumerate() {
                match config.glyph_to_id(glyph) {
                    Some(id) => cells.push(id),
                    None => return Err(LevelError::UnknownGlyph { row: r, col: c, glyph }),
                }
            }
        }
        Ok(Level { rows, cols, cells })
    }

    /// Render back to the glyph grid. `parse(render(l)) == l`.
    pub fn render(&self, config: &GameConfig) -> String {
        let mut out = String::with_capacity(self.cells.len() + self.rows);
        for r in 0..self.rows {
            if r > 0 {
                out.push('\n');
            }
            for c in 0..self.cols {
                out.push(config.object(self.cells[r * self.cols + c]).glyph);
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn node_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[ObjectId] {
        &self.cells
    }

    pub fn get(&self, row: usize, col: usize) -> ObjectId {
        self.cells[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, id: ObjectId) {
        self.cells[row * self.cols + col] = id;
    }

    /// Cell id at a flat node index.
    pub fn at(&self, node: usize) -> ObjectId {
        self.cells[node]
    }

    pub fn count_of(&self, id: ObjectId) -> usize {
        self.cells.iter().filter(|&&c| c == id).count()
    }

    /// Flat node indices holding the given type.
    pub fn positions_of(&self, id: ObjectId) -> Vec<usize> {
        (0..self.cells.len()).filter(|&v| self.cells[v] == id).collect()
    }

    /// Check every cell id lies inside the config alphabet.
    pub fn check_alphabet(&self, config: &GameConfig) -> Result<(), LevelError> {
        for (v, &id) in self.cells.iter().enumerate() {
            if (id as usize) >= config.alphabet.len() {
                return Err(LevelError::InvalidCell {
                    row: v / self.cols,
                    col: v % self.cols,
                    id,
                });
            }
        }
        Ok(())
    }

    /// True for cells on the outer perimeter.
    pub fn is_perimeter(&self, node: usize) -> bool {
        let (r, c) = (node / self.cols, node % self.cols);
        r == 0 || c == 0 || r == self.rows - 1 || c == self.cols - 1
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} level", self.rows, self.cols)
    }
}

/// 4-neighborhood adjacency over the grid cells, optionally joining the
/// first/last rows and columns (only meaningful when the wrapped dimension
/// has at least 3 cells; shorter dimensions would duplicate existing edges).
#[derive(Debug, Clone)]
pub struct SpaceGraph {
    pub rows: usize,
    pub cols: usize,
    pub wrap_rows: bool,
    pub wrap_cols: bool,
    /// Directed edges (from, to); symmetric as a set.
    pub directed_edges: Vec<(usize, usize)>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
    edge_index: HashMap<(usize, usize), usize>,
}

impl SpaceGraph {
    pub fn build(rows: usize, cols: usize, wraparound: bool) -> SpaceGraph {
        assert!(rows >= 1 && cols >= 1);
        let wrap_rows = wraparound && rows >= 3;
        let wrap_cols = wraparound && cols >= 3;
        let n = rows * cols;
        let mut directed_edges = Vec::new();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        let mut edge_index = HashMap::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                let mut neighbors = Vec::with_capacity(4);
                if r > 0 {
                    neighbors.push(v - cols);
                } else if wrap_rows {
                    neighbors.push((rows - 1) * cols + c);
                }
                if r + 1 < rows {
                    neighbors.push(v + cols);
                } else if wrap_rows {
                    neighbors.push(c);
                }
                if c > 0 {
                    neighbors.push(v - 1);
                } else if wrap_cols {
                    neighbors.push(r * cols + cols - 1);
                }
                if c + 1 < cols {
                    neighbors.push(v + 1);
                } else if wrap_cols {
                    neighbors.push(r * cols);
                }
                for u in neighbors {
                    let e = directed_edges.len();
                    directed_edges.push((v, u));
                    out_edges[v].push(e);
                    in_edges[u].push(e);
                    edge_index.insert((v, u), e);
                }
            }
        }
        SpaceGraph {
            rows,
            cols,
            wrap_rows,
            wrap_cols,
            directed_edges,
            out_edges,
            in_edges,
            edge_index,
        }
    }

    pub fn node_count(&self) -> usize {
        self.rows * self.cols
    }

    pub fn edge_count(&self) -> usize {
        self.directed_edges.len()
    }

    /// Edge ids leaving `v`.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    /// Edge ids entering `v`.
    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    pub fn edge_id(&self, from: usize, to: usize) -> Option<usize> {
        self.edge_index.get(&(from, to)).copied()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.out_edges[v].iter().map(|&e| self.directed_edges[e].1)
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.cols + col
    }

    pub fn coords(&self, node: usize) -> (usize, usize) {
        (node / self.cols, node % self.cols)
    }

    /// Shortest grid-graph distance between two cells, ignoring blocking.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        let (ar, ac) = self.coords(a);
        let (br, bc) = self.coords(b);
        let dr = ar.abs_diff(br);
        let dc = ac.abs_diff(bc);
        let dr = if self.wrap_rows { dr.min(self.rows - dr) } else { dr };
        let dc = if self.wrap_cols { dc.min(self.cols - dc) } else { dc };
        dr + dc
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("empty corpus")]
    EmptyCorpus,
}

/// Per-type empirical frequency over all cells of a corpus, indexed by
/// object id. Frequencies sum to 1.
pub fn object_frequencies(
    corpus: &[Level],
    alphabet_len: usize,
) -> Result<Vec<f64>, CorpusError> {
    if corpus.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    let mut counts = vec![0u64; alphabet_len];
    let mut total = 0u64;
    for level in corpus {
        for &c in level.cells() {
            counts[c as usize] += 1;
            total += 1;
        }
    }
    Ok(counts.iter().map(|&c| c as f64 / total as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets;

    fn zelda() -> GameConfig {
        GameConfig::parse(assets::ZELDA_CONFIG).unwrap()
    }

    #[test]
    fn zelda_config_parses() {
        let cfg = zelda();
        assert_eq!(cfg.name, "zelda");
        assert_eq!(cfg.alphabet.len(), 8);
        assert_eq!(cfg.rows, 9);
        assert_eq!(cfg.cols, 13);
        assert_eq!(cfg.delete_cost, 10);
        assert_eq!(cfg.move_cost, 1);
        assert!(!cfg.wraparound);
        assert_eq!(cfg.count_constraints.len(), 3);
        assert_eq!(cfg.density_constraints.len(), 1);
        // 0.6 reduces to 3/5
        assert_eq!(cfg.density_constraints[0].num, 3);
        assert_eq!(cfg.density_constraints[0].den, 5);
        assert!(cfg.border_object.is_some());
        // ids are dense and glyphs unique
        for (i, o) in cfg.alphabet.iter().enumerate() {
            assert_eq!(o.id as usize, i);
        }
    }

    #[test]
    fn config_rejects_source_blocking_overlap() {
        let text = "name = t\nrows = 3\ncols = 3\nobject = a x\nobject = b y\n\
                    empty = a\nsource = b\nblocking = b\n";
        assert!(matches!(
            GameConfig::parse(text),
            Err(ConfigError::SourceBlockingOverlap(_))
        ));
    }

    #[test]
    fn config_rejects_cost_inversion() {
        let text = "name = t\nrows = 3\ncols = 3\nobject = a x\nempty = a\n\
                    delete_cost = 1\nmove_cost = 5\n";
        assert!(matches!(
            GameConfig::parse(text),
            Err(ConfigError::CostOrder { .. })
        ));
    }

    #[test]
    fn fraction_parsing_is_exact() {
        assert_eq!(parse_fraction("0.6").unwrap(), (3, 5));
        assert_eq!(parse_fraction("0.25").unwrap(), (1, 4));
        assert_eq!(parse_fraction("1").unwrap(), (1, 1));
        assert_eq!(parse_fraction("1.0").unwrap(), (1, 1));
        assert!(parse_fraction("0").is_err());
        assert!(parse_fraction("1.5").is_err());
        assert!(parse_fraction("x").is_err());
    }

    #[test]
    fn parse_well_formed_zelda_level() {
        let cfg = zelda();
        let (_, text) = assets::zelda_corpus()[0];
        let level = Level::parse(text, &cfg).unwrap();
        assert_eq!(level.rows(), 9);
        assert_eq!(level.cols(), 13);
    }

    #[test]
    fn parse_rejects_unknown_glyph() {
        let cfg = zelda();
        let text = "www\nwxw\nwww";
        assert_eq!(
            Level::parse(text, &cfg),
            Err(LevelError::UnknownGlyph {
                row: 1,
                col: 1,
                glyph: 'x'
            })
        );
    }

    #[test]
    fn parse_rejects_ragged_rows() {
        let cfg = zelda();
        let text = "wwwwwwwwwwwww\nwwwwwwwwwwww";
        assert!(matches!(
            Level::parse(text, &cfg),
            Err(LevelError::RaggedRows { row: 1, .. })
        ));
    }

    #[test]
    fn parse_rejects_empty_input() {
        let cfg = zelda();
        assert_eq!(Level::parse("", &cfg), Err(LevelError::EmptyInput));
        assert_eq!(Level::parse("  \n ", &cfg), Err(LevelError::EmptyInput));
    }

    #[test]
    fn render_round_trips_bundled_corpus() {
        let cfg = zelda();
        for (name, text) in assets::zelda_corpus() {
            let level = Level::parse(text, &cfg).unwrap();
            let rendered = level.render(&cfg);
            assert_eq!(rendered, text.trim_end(), "corpus file {name}");
            let reparsed = Level::parse(&rendered, &cfg).unwrap();
            assert_eq!(reparsed, level, "corpus file {name}");
        }
    }

    #[test]
    fn render_single_cell() {
        let cfg = zelda();
        let wall = cfg.object_by_name("wall").unwrap().id;
        let level = Level::from_cells(1, 1, vec![wall]);
        assert_eq!(level.render(&cfg), "w");
    }

    #[test]
    fn render_covers_whole_alphabet() {
        let cfg = zelda();
        let cells: Vec<ObjectId> = (0..8).collect();
        let level = Level::from_cells(2, 4, cells);
        let rendered = level.render(&cfg);
        for o in &cfg.alphabet {
            assert!(rendered.contains(o.glyph), "missing glyph {}", o.glyph);
        }
    }

    #[test]
    fn space_graph_9x13_edge_counts() {
        let g = SpaceGraph::build(9, 13, false);
        assert_eq!(g.node_count(), 117);
        assert_eq!(g.edge_count(), 424);
        let g = SpaceGraph::build(9, 13, true);
        assert_eq!(g.edge_count(), 424 + 2 * 9 + 2 * 13);
    }

    #[test]
    fn space_graph_degenerate() {
        let g = SpaceGraph::build(1, 1, false);
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn space_graph_edge_formula_small_scan() {
        for rows in 1..=50usize {
            for cols in 1..=50usize {
                let g = SpaceGraph::build(rows, cols, false);
                let expected = 2 * (rows * (cols - 1) + (rows - 1) * cols);
                assert_eq!(g.edge_count(), expected, "{rows}x{cols}");
            }
        }
        for rows in 3..=50usize {
            for cols in 3..=50usize {
                let g = SpaceGraph::build(rows, cols, true);
                let expected = 2 * (rows * (cols - 1) + (rows - 1) * cols) + 2 * rows + 2 * cols;
                assert_eq!(g.edge_count(), expected, "{rows}x{cols} wrap");
            }
        }
    }

    #[test]
    fn space_graph_edges_symmetric() {
        for &(rows, cols, wrap) in &[(9, 13, false), (9, 13, true), (1, 7, false), (4, 4, true)] {
            let g = SpaceGraph::build(rows, cols, wrap);
            for &(u, v) in &g.directed_edges {
                assert!(g.edge_id(v, u).is_some(), "missing reverse of ({u},{v})");
            }
        }
    }

    #[test]
    fn wrap_distance_uses_shortcuts() {
        let g = SpaceGraph::build(5, 7, true);
        assert_eq!(g.distance(g.index(0, 0), g.index(4, 0)), 1);
        assert_eq!(g.distance(g.index(0, 0), g.index(0, 6)), 1);
        let g = SpaceGraph::build(5, 7, false);
        assert_eq!(g.distance(g.index(0, 0), g.index(4, 6)), 10);
    }

    #[test]
    fn frequencies_all_wall() {
        let cfg = zelda();
        let wall = cfg.object_by_name("wall").unwrap().id;
        let level = Level::from_cells(2, 2, vec![wall; 4]);
        let f = object_frequencies(&[level], cfg.alphabet.len()).unwrap();
        assert_eq!(f[wall as usize], 1.0);
        assert_eq!(f.iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn frequencies_direct_count() {
        let cfg = zelda();
        let wall = cfg.object_by_name("wall").unwrap().id;
        let empty = cfg.object_by_name("empty").unwrap().id;
        let a = Level::from_cells(2, 2, vec![wall; 4]);
        let b = Level::from_cells(2, 2, vec![empty; 4]);
        let f = object_frequencies(&[a, b], cfg.alphabet.len()).unwrap();
        assert_eq!(f[wall as usize], 0.5);
        assert_eq!(f[empty as usize], 0.5);
    }

    #[test]
    fn frequencies_bundled_corpus_normalized() {
        let cfg = zelda();
        let levels: Vec<Level> = assets::zelda_corpus()
            .iter()
            .map(|(_, t)| Level::parse(t, &cfg).unwrap())
            .collect();
        let f = object_frequencies(&levels, cfg.alphabet.len()).unwrap();
        assert!((f.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn frequencies_empty_corpus_rejected() {
        assert_eq!(object_frequencies(&[], 8), Err(CorpusError::EmptyCorpus));
    }
}
