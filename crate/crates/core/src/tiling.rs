//! Reflection rules as three-colored gluing graphs.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::exact::IntMatrix;

/// Edge/face color of a tile. The order red, blue, black is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Red,
    Blue,
    Black,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Red, Color::Blue, Color::Black];

    /// Zero-based position in `ALL`.
    pub fn index(self) -> usize {
        self as usize
    }

    /// One-based color number ν.
    pub fn number(self) -> usize {
        self.index() + 1
    }

    pub fn from_index(i: usize) -> Option<Color> {
        Color::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Blue => "blue",
            Color::Black => "black",
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Color {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "red" => Ok(Color::Red),
            "blue" => Ok(Color::Blue),
            "black" => Ok(Color::Black),
            _ => Err(format!("unknown color `{s}`")),
        }
    }
}

/// What a tile's colored side is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Glue {
    Tile(usize),
    Boundary,
}

impl Glue {
    pub fn tile(self) -> Option<usize> {
        match self {
            Glue::Tile(j) => Some(j),
            Glue::Boundary => None,
        }
    }
}

/// Sign placed on the diagonal for a boundary side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SignConvention {
    #[default]
    Dirichlet,
    Neumann,
}

impl SignConvention {
    pub fn boundary_sign(self) -> i64 {
        match self {
            SignConvention::Dirichlet => -1,
            SignConvention::Neumann => 1,
        }
    }
}

impl FromStr for SignConvention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dirichlet" => Ok(SignConvention::Dirichlet),
            "neumann" => Ok(SignConvention::Neumann),
            _ => Err(format!("unknown convention `{s}`")),
        }
    }
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignConvention::Dirichlet => "dirichlet",
            SignConvention::Neumann => "neumann",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TilingError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: tile `{label}` is out of range or undeclared")]
    UnknownTile { line: usize, label: String },
    #[error("line {line}: tile {tile} has two {color} entries")]
    DuplicateEntry {
        line: usize,
        tile: String,
        color: Color,
    },
    #[error("line {line}: tile {tile} is glued to itself")]
    SelfGlue { line: usize, tile: String },
    #[error("{side}: tile {tile} has no {color} entry")]
    MissingEntry {
        side: String,
        tile: String,
        color: Color,
    },
    #[error("{color} gluing is not an involution at tile {tile}")]
    NotInvolution { color: Color, tile: usize },
    #[error("graph must have at least one tile")]
    Empty,
    #[error("{0} is not connected")]
    Disconnected(String),
    #[error("glue table for {color} has {found} entries, expected {expected}")]
    WrongLength {
        color: Color,
        expected: usize,
        found: usize,
    },
    #[error("label list has {found} entries, expected {expected}")]
    LabelCount { expected: usize, found: usize },
    #[error("left and right graphs have different tile counts ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },
}

/// N tiles plus one involution per color. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GluingGraph {
    n_tiles: usize,
    glue: [Vec<Glue>; 3],
    labels: Vec<String>,
}

impl GluingGraph {
    /// Validates involution, self-glue and connectivity.
    pub fn new(glue: [Vec<Glue>; 3]) -> Result<Self, TilingError> {
        let n = glue[0].len();
        if n == 0 {
            return Err(TilingError::Empty);
        }
        for c in Color::ALL {
            let g = &glue[c.index()];
            if g.len() != n {
                return Err(TilingError::WrongLength {
                    color: c,
                    expected: n,
                    found: g.len(),
                });
            }
            for (i, e) in g.iter().enumerate() {
                if let Glue::Tile(j) = *e {
                    if j >= n || j == i || g[j] != Glue::Tile(i) {
                        return Err(TilingError::NotInvolution { color: c, tile: i });
                    }
                }
            }
        }
        let graph = Self {
            n_tiles: n,
            glue,
            labels: (0..n).map(|i| i.to_string()).collect(),
        };
        if !graph.is_connected() {
            return Err(TilingError::Disconnected("gluing graph".into()));
        }
        Ok(graph)
    }

    /// Builds from glued pairs; every side not mentioned is boundary.
    pub fn from_pairs(n_tiles: usize, pairs: [&[(usize, usize)]; 3]) -> Result<Self, TilingError> {
        let mut glue = [
            vec![Glue::Boundary; n_tiles],
            vec![Glue::Boundary; n_tiles],
            vec![Glue::Boundary; n_tiles],
        ];
        for c in Color::ALL {
            for &(i, j) in pairs[c.index()] {
                if i >= n_tiles || j >= n_tiles || i == j {
                    return Err(TilingError::NotInvolution { color: c, tile: i });
                }
                let g = &mut glue[c.index()];
                if g[i] != Glue::Boundary || g[j] != Glue::Boundary {
                    return Err(TilingError::NotInvolution { color: c, tile: i });
                }
                g[i] = Glue::Tile(j);
                g[j] = Glue::Tile(i);
            }
        }
        Self::new(glue)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, TilingError> {
        if labels.len() != self.n_tiles {
            return Err(TilingError::LabelCount {
                expected: self.n_tiles,
                found: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn n_tiles(&self) -> usize {
        self.n_tiles
    }

    pub fn glue(&self, color: Color, tile: usize) -> Glue {
        self.glue[color.index()][tile]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, tile: usize) -> &str {
        &self.labels[tile]
    }

    fn has_default_labels(&self) -> bool {
        self.labels.iter().enumerate().all(|(i, l)| *l == i.to_string())
    }

    /// Glued pairs `(i, j)` with `i < j` for one color.
    pub fn pairs(&self, color: Color) -> Vec<(usize, usize)> {
        self.glue[color.index()]
            .iter()
            .enumerate()
            .filter_map(|(i, g)| match *g {
                Glue::Tile(j) if i < j => Some((i, j)),
                _ => None,
            })
            .collect()
    }

    pub fn boundary_tiles(&self, color: Color) -> Vec<usize> {
        (0..self.n_tiles)
            .filter(|&i| self.glue(color, i) == Glue::Boundary)
            .collect()
    }

    pub fn glued_count(&self) -> usize {
        Color::ALL.iter().map(|&c| self.pairs(c).len()).sum()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n_tiles];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for c in Color::ALL {
                if let Glue::Tile(j) = self.glue(c, i) {
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Renames tile `i` to `perm[i]`. Labels travel with their tiles.
    pub fn relabel(&self, perm: &[usize]) -> GluingGraph {
        assert_eq!(perm.len(), self.n_tiles, "permutation has wrong length");
        let mut glue = [
            vec![Glue::Boundary; self.n_tiles],
            vec![Glue::Boundary; self.n_tiles],
            vec![Glue::Boundary; self.n_tiles],
        ];
        let mut labels = vec![String::new(); self.n_tiles];
        for i in 0..self.n_tiles {
            labels[perm[i]] = self.labels[i].clone();
            for c in Color::ALL {
                glue[c.index()][perm[i]] = match self.glue(c, i) {
                    Glue::Tile(j) => Glue::Tile(perm[j]),
                    Glue::Boundary => Glue::Boundary,
                };
            }
        }
        GluingGraph {
            n_tiles: self.n_tiles,
            glue,
            labels,
        }
    }

    /// Recolors every side: old color `c` becomes `perm.apply(c)`.
    pub fn permute_colors(&self, perm: ColorPermutation) -> GluingGraph {
        let mut glue = self.glue.clone();
        for c in Color::ALL {
            glue[perm.apply(c).index()] = self.glue[c.index()].clone();
        }
        GluingGraph {
            n_tiles: self.n_tiles,
            glue,
            labels: self.labels.clone(),
        }
    }

    /// The signed matrix of one color.
    pub fn signed_matrix(&self, color: Color, conv: SignConvention) -> IntMatrix {
        let n = self.n_tiles;
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            match self.glue(color, i) {
                Glue::Tile(j) => m[(i, j)] = 1,
                Glue::Boundary => m[(i, i)] = conv.boundary_sign(),
            }
        }
        m
    }

    /// Red, blue and black signed matrices.
    pub fn to_signed_matrices(&self, conv: SignConvention) -> [IntMatrix; 3] {
        Color::ALL.map(|c| self.signed_matrix(c, conv))
    }
}

/// A bijection of the three colors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ColorPermutation([Color; 3]);

impl ColorPermutation {
    pub fn identity() -> Self {
        ColorPermutation(Color::ALL)
    }

    /// `images[c.index()]` is where color `c` goes.
    pub fn new(images: [Color; 3]) -> Option<Self> {
        let mut seen = [false; 3];
        for c in images {
            if std::mem::replace(&mut seen[c.index()], true) {
                return None;
            }
        }
        Some(ColorPermutation(images))
    }

    pub fn swap(a: Color, b: Color) -> Self {
        let mut images = Color::ALL;
        images.swap(a.index(), b.index());
        ColorPermutation(images)
    }

    /// red → blue → black → red.
    pub fn cycle() -> Self {
        ColorPermutation([Color::Blue, Color::Black, Color::Red])
    }

    pub fn all() -> [ColorPermutation; 6] {
        use Color::*;
        [
            [Red, Blue, Black],
            [Red, Black, Blue],
            [Blue, Red, Black],
            [Blue, Black, Red],
            [Black, Red, Blue],
            [Black, Blue, Red],
        ]
        .map(ColorPermutation)
    }

    pub fn apply(self, c: Color) -> Color {
        self.0[c.index()]
    }

    /// `self` after `other`.
    pub fn compose(self, other: ColorPermutation) -> ColorPermutation {
        ColorPermutation(Color::ALL.map(|c| self.apply(other.apply(c))))
    }

    pub fn images(self) -> [Color; 3] {
        self.0
    }
}

/// Whether a shipped family passed the algebraic checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum VerificationStatus {
    #[default]
    Verified,
    Unverified,
}

/// The `(k, m)` support counts expected for a family of `n` tiles.
pub fn expected_signature_for(n_tiles: usize) -> Option<(usize, usize)> {
    match n_tiles {
        7 => Some((3, 4)),
        13 => Some((4, 9)),
        15 => Some((7, 8)),
        21 => Some((5, 16)),
        _ => None,
    }
}

/// Two gluing graphs claimed to be transplantable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FamilyPair {
    pub family_id: String,
    pub left: GluingGraph,
    pub right: GluingGraph,
    pub expected_signature: Option<(usize, usize)>,
    pub status: VerificationStatus,
}

impl FamilyPair {
    pub fn new(
        family_id: impl Into<String>,
        left: GluingGraph,
        right: GluingGraph,
    ) -> Result<Self, TilingError> {
        if left.n_tiles() != right.n_tiles() {
            return Err(TilingError::SizeMismatch {
                left: left.n_tiles(),
                right: right.n_tiles(),
            });
        }
        let expected_signature = expected_signature_for(left.n_tiles());
        Ok(Self {
            family_id: family_id.into(),
            left,
            right,
            expected_signature,
            status: VerificationStatus::Verified,
        })
    }

    pub fn n_tiles(&self) -> usize {
        self.left.n_tiles()
    }

    pub fn permute_colors(&self, perm: ColorPermutation) -> FamilyPair {
        FamilyPair {
            left: self.left.permute_colors(perm),
            right: self.right.permute_colors(perm),
            ..self.clone()
        }
    }

    /// Serializes to the gluing file format.
    pub fn to_gluing_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("family {}\n", self.family_id));
        out.push_str(&format!("tiles {}\n", self.n_tiles()));
        if self.status == VerificationStatus::Unverified {
            out.push_str("status unverified\n");
        }
        for (name, g) in [("left", &self.left), ("right", &self.right)] {
            out.push_str(&format!("[{name}]\n"));
            if !g.has_default_labels() {
                out.push_str(&format!("labels {}\n", g.labels().join(" ")));
            }
            for c in Color::ALL {
                for i in 0..g.n_tiles() {
                    match g.glue(c, i) {
                        Glue::Tile(j) if i < j => {
                            out.push_str(&format!("{} {} {}\n", c, g.label(i), g.label(j)))
                        }
                        Glue::Tile(_) => {}
                        Glue::Boundary => out.push_str(&format!("{} {} -\n", c, g.label(i))),
                    }
                }
            }
        }
        out
    }
}

#[derive(Default)]
struct SideBuilder {
    labels: Option<(usize, Vec<String>)>,
    entries: Vec<(usize, Color, String, Option<String>)>,
}

/// Parses the line-based gluing file format.
///
/// Beyond `family`, `tiles` and the `[left]`/`[right]` sections, a
/// `labels` line declares tile names in index order (globally or per
/// section) and `status unverified` marks a family that failed checks.
pub fn parse_gluing_file(bytes: &[u8]) -> Result<FamilyPair, TilingError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        TilingError::Syntax {
            line,
            message: "invalid UTF-8".into(),
        }
    })?;

    let mut family: Option<String> = None;
    let mut tiles: Option<usize> = None;
    let mut status = VerificationStatus::Verified;
    let mut global_labels: Option<(usize, Vec<String>)> = None;
    let mut sides: [Option<SideBuilder>; 2] = [None, None];
    let mut current: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |message: String| TilingError::Syntax { line, message };
        if content.starts_with('[') {
            let side = match content {
                "[left]" => 0,
                "[right]" => 1,
                _ => return Err(syntax(format!("unknown section `{content}`"))),
            };
            if sides[side].is_some() {
                return Err(syntax(format!("section `{content}` repeated")));
            }
            sides[side] = Some(SideBuilder::default());
            current = Some(side);
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens[0] {
            "family" => {
                if tokens.len() != 2 {
                    return Err(syntax("expected `family <id>`".into()));
                }
                if current.is_some() || family.is_some() {
                    return Err(syntax("`family` must appear once, before sections".into()));
                }
                family = Some(tokens[1].to_string());
            }
            "tiles" => {
                if tokens.len() != 2 {
                    return Err(syntax("expected `tiles <N>`".into()));
                }
                if current.is_some() || tiles.is_some() {
                    return Err(syntax("`tiles` must appear once, before sections".into()));
                }
                let n: usize = tokens[1]
                    .parse()
                    .map_err(|_| syntax(format!("bad tile count `{}`", tokens[1])))?;
                if n == 0 {
                    return Err(syntax("tile count must be positive".into()));
                }
                tiles = Some(n);
            }
            "status" => {
                status = match tokens.get(1..) {
                    Some(["verified"]) => VerificationStatus::Verified,
                    Some(["unverified"]) => VerificationStatus::Unverified,
                    _ => return Err(syntax("expected `status verified|unverified`".into())),
                };
            }
            "labels" => {
                let labels: Vec<String> = tokens[1..].iter().map(|s| s.to_string()).collect();
                let slot = match current {
                    Some(side) => &mut sides[side].as_mut().expect("open section").labels,
                    None => &mut global_labels,
                };
                if slot.is_some() {
                    return Err(syntax("labels declared twice".into()));
                }
                *slot = Some((line, labels));
            }
            word => {
                let color: Color = word.parse().map_err(syntax)?;
                let Some(side) = current else {
                    return Err(syntax("color entry outside a section".into()));
                };
                if tokens.len() != 3 {
                    return Err(syntax(format!("expected `{word} <i> <j|->`")));
                }
                let other = (tokens[2] != "-").then(|| tokens[2].to_string());
                sides[side].as_mut().expect("open section").entries.push((
                    line,
                    color,
                    tokens[1].to_string(),
                    other,
                ));
            }
        }
    }

    let family = family.ok_or(TilingError::Syntax {
        line: 0,
        message: "missing `family` line".into(),
    })?;
    let n = tiles.ok_or(TilingError::Syntax {
        line: 0,
        message: "missing `tiles` line".into(),
    })?;
    let mut graphs = Vec::with_capacity(2);
    for (side, name) in [(0, "left"), (1, "right")] {
        let builder = sides[side].take().ok_or(TilingError::Syntax {
            line: 0,
            message: format!("missing [{name}] section"),
        })?;
        let labels = builder.labels.clone().or_else(|| global_labels.clone());
        graphs.push(build_side(name, n, labels, &builder.entries)?);
    }
    let right = graphs.pop().expect("two sides");
    let left = graphs.pop().expect("two sides");
    let mut pair = FamilyPair::new(family, left, right)?;
    pair.status = status;
    Ok(pair)
}

fn build_side(
    side: &str,
    n: usize,
    labels: Option<(usize, Vec<String>)>,
    entries: &[(usize, Color, String, Option<String>)],
) -> Result<GluingGraph, TilingError> {
    let names: Vec<String> = match labels {
        Some((line, names)) => {
            if names.len() != n {
                return Err(TilingError::Syntax {
                    line,
                    message: format!("expected {} labels, found {}", n, names.len()),
                });
            }
            let mut seen = HashMap::new();
            for name in &names {
                if seen.insert(name.as_str(), ()).is_some() {
                    return Err(TilingError::Syntax {
                        line,
                        message: format!("label `{name}` repeated"),
                    });
                }
            }
            names
        }
        None => (0..n).map(|i| i.to_string()).collect(),
    };
    let lookup: HashMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let resolve = |line: usize, label: &str| {
        lookup
            .get(label)
            .copied()
            .ok_or_else(|| TilingError::UnknownTile {
                line,
                label: label.to_string(),
            })
    };

    let mut glue: [Vec<Option<Glue>>; 3] = [vec![None; n], vec![None; n], vec![None; n]];
    for (line, color, a, b) in entries {
        let line = *line;
        let i = resolve(line, a)?;
        let g = &mut glue[color.index()];
        match b {
            None => {
                if g[i].is_some() {
                    return Err(TilingError::DuplicateEntry {
                        line,
                        tile: names[i].clone(),
                        color: *color,
                    });
                }
                g[i] = Some(Glue::Boundary);
            }
            Some(b) => {
                let j = resolve(line, b)?;
                if i == j {
                    return Err(TilingError::SelfGlue {
                        line,
                        tile: names[i].clone(),
                    });
                }
                for t in [i, j] {
                    if g[t].is_some() {
                        return Err(TilingError::DuplicateEntry {
                            line,
                            tile: names[t].clone(),
                            color: *color,
                        });
                    }
                }
                g[i] = Some(Glue::Tile(j));
                g[j] = Some(Glue::Tile(i));
            }
        }
    }
    let mut full: [Vec<Glue>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for c in Color::ALL {
        for (i, e) in glue[c.index()].iter().enumerate() {
            match e {
                Some(g) => full[c.index()].push(*g),
                None => {
                    return Err(TilingError::MissingEntry {
                        side: side.to_string(),
                        tile: names[i].clone(),
                        color: c,
                    })
                }
            }
        }
    }
    let graph = GluingGraph::new(full).map_err(|e| match e {
        TilingError::Disconnected(_) => TilingError::Disconnected(format!("[{side}] graph")),
        other => other,
    })?;
    graph.with_labels(names)
}
