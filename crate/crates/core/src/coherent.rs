//! Color matrices and coherent configurations.
//!
//! A [`ColorMatrix`] is an `n x n` array of color indices describing a
//! partition of `Ω x Ω`. [`build_configuration`] checks the three coherence
//! axioms (diagonal is a union of classes, converse closure, constant
//! intersection numbers) and returns an immutable [`Configuration`] carrying
//! fibers, valencies, the converse map and the intersection tensor.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::hash::Hash;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Index of a basis relation.
pub type Color = usize;

/// Set of colors, ordered by index.
pub type ColorSet = BTreeSet<Color>;

/// Ranks above this store the intersection tensor sparsely only.
pub const DEFAULT_DENSE_LIMIT: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix must have at least one point")]
    Empty,
    #[error("expected {expected} cells, got {found}")]
    CellCount { expected: usize, found: usize },
    #[error("color {color} out of range for rank {rank}")]
    ColorOutOfRange { color: usize, rank: usize },
    #[error("color {0} never occurs")]
    UnusedColor(usize),
}

/// Failure while reading CCM text. `line` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing header")]
    MissingHeader,
    #[error("malformed header, expected \"n r\" with n, r >= 1")]
    MalformedHeader,
    #[error("invalid integer {0:?}")]
    BadToken(String),
    #[error("color {color} out of range for rank {rank}")]
    ColorOutOfRange { color: usize, rank: usize },
    #[error("color {0} never occurs")]
    UnusedColor(usize),
    #[error("expected {expected} entries per row, found {found}")]
    NonSquare { expected: usize, found: usize },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
}

/// Partition of `Ω x Ω` given as a dense array of color indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColorMatrix {
    n: usize,
    rank: usize,
    cells: Vec<u32>,
}

impl ColorMatrix {
    /// Wraps row-major cells, checking that colors are exactly `0..rank`.
    pub fn new(n: usize, cells: Vec<usize>) -> Result<Self, MatrixError> {
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        if cells.len() != n * n {
            return Err(MatrixError::CellCount {
                expected: n * n,
                found: cells.len(),
            });
        }
        let rank = cells.iter().copied().max().unwrap_or(0) + 1;
        Self::with_rank(n, rank, cells)
    }

    /// Like [`ColorMatrix::new`] but with a declared rank.
    pub fn with_rank(n: usize, rank: usize, cells: Vec<usize>) -> Result<Self, MatrixError> {
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        if cells.len() != n * n {
            return Err(MatrixError::CellCount {
                expected: n * n,
                found: cells.len(),
            });
        }
        let mut seen = vec![false; rank];
        for &c in &cells {
            if c >= rank {
                return Err(MatrixError::ColorOutOfRange { color: c, rank });
            }
            seen[c] = true;
        }
        if let Some(c) = seen.iter().position(|s| !s) {
            return Err(MatrixError::UnusedColor(c));
        }
        Ok(Self {
            n,
            rank,
            cells: cells.into_iter().map(|c| c as u32).collect(),
        })
    }

    /// Builds a matrix from arbitrary cell labels; colors are numbered by
    /// first occurrence in a row-major scan.
    pub fn from_labels<K, F>(n: usize, mut label: F) -> Self
    where
        K: Eq + Hash,
        F: FnMut(usize, usize) -> K,
    {
        assert!(n > 0, "matrix must have at least one point");
        let mut ids: HashMap<K, u32> = HashMap::new();
        let mut cells = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let next = ids.len() as u32;
                cells.push(*ids.entry(label(a, b)).or_insert(next));
            }
        }
        Self {
            n,
            rank: ids.len(),
            cells,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> Color {
        self.cells[a * self.n + b] as Color
    }

    pub fn row(&self, a: usize) -> impl Iterator<Item = Color> + '_ {
        self.cells[a * self.n..(a + 1) * self.n]
            .iter()
            .map(|&c| c as Color)
    }

    pub(crate) fn raw_cells(&self) -> &[u32] {
        &self.cells
    }

    /// Parses the CCM text format.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (header_line, header) = lines.next().ok_or(ParseError {
            line: 1,
            kind: ParseErrorKind::MissingHeader,
        })?;
        let malformed = || ParseError {
            line: header_line,
            kind: ParseErrorKind::MalformedHeader,
        };
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(malformed());
        }
        let n: usize = fields[0].parse().map_err(|_| malformed())?;
        let rank: usize = fields[1].parse().map_err(|_| malformed())?;
        if n == 0 || rank == 0 {
            return Err(malformed());
        }

        let mut cells = Vec::with_capacity(n * n);
        let mut rows = 0;
        let mut last_line = header_line;
        for (line, body) in lines {
            last_line = line;
            if rows == n {
                return Err(ParseError {
                    line,
                    kind: ParseErrorKind::RowCount {
                        expected: n,
                        found: rows + 1,
                    },
                });
            }
            let before = cells.len();
            for tok in body.split_whitespace() {
                let c: usize = tok.parse().map_err(|_| ParseError {
                    line,
                    kind: ParseErrorKind::BadToken(tok.to_string()),
                })?;
                if c >= rank {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::ColorOutOfRange { color: c, rank },
                    });
                }
                cells.push(c);
            }
            if cells.len() - before != n {
                return Err(ParseError {
                    line,
                    kind: ParseErrorKind::NonSquare {
                        expected: n,
                        found: cells.len() - before,
                    },
                });
            }
            rows += 1;
        }
        if rows != n {
            return Err(ParseError {
                line: last_line,
                kind: ParseErrorKind::RowCount {
                    expected: n,
                    found: rows,
                },
            });
        }
        ColorMatrix::with_rank(n, rank, cells).map_err(|e| match e {
            MatrixError::UnusedColor(c) => ParseError {
                line: header_line,
                kind: ParseErrorKind::UnusedColor(c),
            },
            // Everything else was rejected while reading rows.
            other => unreachable!("{other}"),
        })
    }

    /// Serializes to CCM text: header line, then one row per line.
    pub fn to_ccm(&self) -> String {
        let mut out = String::with_capacity(self.n * self.n * 3 + 16);
        let _ = writeln!(out, "{} {}", self.n, self.rank);
        for a in 0..self.n {
            let mut first = true;
            for c in self.row(a) {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{c}");
            }
            out.push('\n');
        }
        out
    }

    /// Canonical renumbering: diagonal colors first (in order of first
    /// appearance on the diagonal), then off-diagonal colors ordered by
    /// (domain fiber, codomain fiber, valency, first row-major occurrence).
    ///
    /// Returns the relabelled matrix and the map old color -> new color.
    pub fn canonical_form(&self) -> (ColorMatrix, Vec<Color>) {
        let n = self.n;
        let r = self.rank;
        let mut first = vec![usize::MAX; r];
        for (idx, &c) in self.cells.iter().enumerate() {
            let c = c as usize;
            if first[c] == usize::MAX {
                first[c] = idx;
            }
        }
        let mut diag_order: Vec<Color> = Vec::new();
        let mut is_diag = vec![false; r];
        for a in 0..n {
            let d = self.get(a, a);
            if !is_diag[d] {
                is_diag[d] = true;
                diag_order.push(d);
            }
        }
        let fiber_rank: HashMap<Color, usize> =
            diag_order.iter().enumerate().map(|(i, &d)| (d, i)).collect();
        let fiber_of = |p: usize| fiber_rank[&self.get(p, p)];

        let mut keyed: Vec<((usize, usize, usize, usize), Color)> = (0..r)
            .filter(|&c| !is_diag[c])
            .map(|c| {
                let (a, b) = (first[c] / n, first[c] % n);
                let val = self.row(a).filter(|&x| x == c).count();
                ((fiber_of(a), fiber_of(b), val, first[c]), c)
            })
            .collect();
        keyed.sort();

        let mut relabel = vec![0; r];
        for (new, &old) in diag_order
            .iter()
            .chain(keyed.iter().map(|(_, c)| c))
            .enumerate()
        {
            relabel[old] = new;
        }
        let cells = self
            .cells
            .iter()
            .map(|&c| relabel[c as usize] as u32)
            .collect();
        (ColorMatrix { n, rank: r, cells }, relabel)
    }

    /// Shorthand for the matrix part of [`ColorMatrix::canonical_form`].
    pub fn canonical(&self) -> ColorMatrix {
        self.canonical_form().0
    }

    /// Restriction to the given points, colors renumbered by first occurrence.
    pub fn restrict(&self, points: &[usize]) -> ColorMatrix {
        ColorMatrix::from_labels(points.len(), |a, b| self.get(points[a], points[b]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoherenceError {
    #[error("diagonal color {color} also occurs off the diagonal at ({alpha}, {beta})")]
    DiagonalNotUnion {
        color: Color,
        alpha: usize,
        beta: usize,
    },
    #[error("color {color} has converse pairs in colors {first} and {second}, the latter at ({beta}, {alpha})")]
    ConverseNotClosed {
        color: Color,
        first: Color,
        second: Color,
        alpha: usize,
        beta: usize,
    },
    #[error("color {color} meets more than one fiber pair")]
    SplitAcrossFibers { color: Color },
    #[error("color {color}: point {point} has {found} successors, expected {expected}")]
    ValencyIrregular {
        color: Color,
        point: usize,
        expected: usize,
        found: usize,
    },
    #[error(
        "intersection number c[{s},{t}]^{u} is not constant: pair ({alpha}, {beta}) counts {actual}, expected {expected}"
    )]
    IrregularTriple {
        s: Color,
        t: Color,
        u: Color,
        alpha: usize,
        beta: usize,
        expected: u32,
        actual: u32,
    },
    #[error("intersection tensor for rank {rank} exceeds the configured limit")]
    TooLarge { rank: usize },
}

/// Storage knobs for the intersection tensor.
#[derive(Debug, Clone, Copy)]
pub struct TensorOptions {
    /// Store a dense `r^3` array only while `r` is at most this value.
    pub dense_limit: usize,
    /// Refuse outright above this rank (`None` = no limit).
    pub max_rank: Option<usize>,
}

impl Default for TensorOptions {
    fn default() -> Self {
        Self {
            dense_limit: DEFAULT_DENSE_LIMIT,
            max_rank: None,
        }
    }
}

/// Intersection numbers `c_st^u`, sparse by `(s, t)` with an optional dense
/// copy for constant-time lookups.
#[derive(Debug, Clone)]
struct Tensor {
    rank: usize,
    support: Vec<Vec<(Color, u32)>>,
    dense: Option<Vec<u32>>,
}

impl Tensor {
    fn get(&self, s: Color, t: Color, u: Color) -> u32 {
        let r = self.rank;
        match &self.dense {
            Some(d) => d[(s * r + t) * r + u],
            None => self.support[s * r + t]
                .binary_search_by_key(&u, |&(c, _)| c)
                .map(|i| self.support[s * r + t][i].1)
                .unwrap_or(0),
        }
    }

    fn support(&self, s: Color, t: Color) -> &[(Color, u32)] {
        &self.support[s * self.rank + t]
    }
}

/// A validated coherent configuration.
#[derive(Debug, Clone)]
pub struct Configuration {
    matrix: ColorMatrix,
    fibers: Vec<Vec<usize>>,
    fiber_of: Vec<usize>,
    diagonal: Vec<Color>,
    converse: Vec<Color>,
    domain: Vec<usize>,
    codomain: Vec<usize>,
    valency: Vec<usize>,
    tensor: Tensor,
}

/// Checks the coherence axioms with default tensor options.
pub fn build_configuration(m: ColorMatrix) -> Result<Configuration, CoherenceError> {
    build_configuration_with(m, TensorOptions::default())
}

pub fn build_configuration_with(
    m: ColorMatrix,
    opts: TensorOptions,
) -> Result<Configuration, CoherenceError> {
    let n = m.n();
    let r = m.rank();
    if let Some(max) = opts.max_rank {
        if r > max {
            return Err(CoherenceError::TooLarge { rank: r });
        }
    }

    // Diagonal colors and fibers, fibers ordered by least point.
    let mut diag_fiber = vec![usize::MAX; r];
    let mut diagonal = Vec::new();
    let mut fibers: Vec<Vec<usize>> = Vec::new();
    let mut fiber_of = vec![0; n];
    for a in 0..n {
        let d = m.get(a, a);
        if diag_fiber[d] == usize::MAX {
            diag_fiber[d] = diagonal.len();
            diagonal.push(d);
            fibers.push(Vec::new());
        }
        fiber_of[a] = diag_fiber[d];
        fibers[diag_fiber[d]].push(a);
    }
    for a in 0..n {
        for b in 0..n {
            let c = m.get(a, b);
            if a != b && diag_fiber[c] != usize::MAX {
                return Err(CoherenceError::DiagonalNotUnion {
                    color: c,
                    alpha: a,
                    beta: b,
                });
            }
        }
    }

    // Converse map and fiber frames.
    let mut converse = vec![usize::MAX; r];
    let mut domain = vec![usize::MAX; r];
    let mut codomain = vec![usize::MAX; r];
    for a in 0..n {
        for b in 0..n {
            let c = m.get(a, b);
            let back = m.get(b, a);
            if converse[c] == usize::MAX {
                converse[c] = back;
                domain[c] = fiber_of[a];
                codomain[c] = fiber_of[b];
            } else {
                if converse[c] != back {
                    return Err(CoherenceError::ConverseNotClosed {
                        color: c,
                        first: converse[c],
                        second: back,
                        alpha: a,
                        beta: b,
                    });
                }
                if domain[c] != fiber_of[a] || codomain[c] != fiber_of[b] {
                    return Err(CoherenceError::SplitAcrossFibers { color: c });
                }
            }
        }
    }
    debug_assert!((0..r).all(|c| converse[converse[c]] == c));

    // Constant row degree.
    let mut valency = vec![usize::MAX; r];
    let mut counts = vec![0usize; r];
    for a in 0..n {
        counts.iter_mut().for_each(|x| *x = 0);
        for c in m.row(a) {
            counts[c] += 1;
        }
        for c in 0..r {
            if domain[c] != fiber_of[a] {
                continue;
            }
            if valency[c] == usize::MAX {
                valency[c] = counts[c];
            } else if valency[c] != counts[c] {
                return Err(CoherenceError::ValencyIrregular {
                    color: c,
                    point: a,
                    expected: valency[c],
                    found: counts[c],
                });
            }
        }
    }

    let tensor = build_tensor(&m, opts)?;
    Ok(Configuration {
        matrix: m,
        fibers,
        fiber_of,
        diagonal,
        converse,
        domain,
        codomain,
        valency,
        tensor,
    })
}

/// Sorted run-length profile of `(color(a, g), color(g, b))` over all `g`.
fn pair_profile(m: &ColorMatrix, a: usize, b: usize, scratch: &mut Vec<u64>) -> Vec<(u64, u32)> {
    let n = m.n();
    let r = m.rank() as u64;
    scratch.clear();
    scratch.extend((0..n).map(|g| m.get(a, g) as u64 * r + m.get(g, b) as u64));
    scratch.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for &k in scratch.iter() {
        match out.last_mut() {
            Some((last, cnt)) if *last == k => *cnt += 1,
            _ => out.push((k, 1)),
        }
    }
    out
}

fn build_tensor(m: &ColorMatrix, opts: TensorOptions) -> Result<Tensor, CoherenceError> {
    let n = m.n();
    let r = m.rank();

    let mut rep = vec![usize::MAX; r];
    for (idx, &c) in m.raw_cells().iter().enumerate() {
        if rep[c as usize] == usize::MAX {
            rep[c as usize] = idx;
        }
    }
    let mut scratch = Vec::with_capacity(n);
    let profiles: Vec<Vec<(u64, u32)>> = rep
        .iter()
        .map(|&idx| pair_profile(m, idx / n, idx % n, &mut scratch))
        .collect();

    // Every pair must reproduce the profile of its color's representative.
    let witness = (0..n).into_par_iter().find_map_first(|a| {
        let mut scratch = Vec::with_capacity(n);
        for b in 0..n {
            let u = m.get(a, b);
            let here = pair_profile(m, a, b, &mut scratch);
            if here != profiles[u] {
                return Some(first_difference(&profiles[u], &here, r, u, a, b));
            }
        }
        None
    });
    if let Some(err) = witness {
        return Err(err);
    }

    let mut support: Vec<Vec<(Color, u32)>> = vec![Vec::new(); r * r];
    for (u, prof) in profiles.iter().enumerate() {
        for &(key, cnt) in prof {
            support[key as usize].push((u, cnt));
        }
    }
    let dense = (r <= opts.dense_limit).then(|| {
        let mut d = vec![0u32; r * r * r];
        for (st, entries) in support.iter().enumerate() {
            for &(u, cnt) in entries {
                d[st * r + u] = cnt;
            }
        }
        d
    });
    Ok(Tensor {
        rank: r,
        support,
        dense,
    })
}

fn first_difference(
    expected: &[(u64, u32)],
    actual: &[(u64, u32)],
    r: usize,
    u: Color,
    a: usize,
    b: usize,
) -> CoherenceError {
    let lookup = |v: &[(u64, u32)], k: u64| {
        v.binary_search_by_key(&k, |&(key, _)| key)
            .map(|i| v[i].1)
            .unwrap_or(0)
    };
    let keys: BTreeSet<u64> = expected.iter().chain(actual).map(|&(k, _)| k).collect();
    let key = keys
        .into_iter()
        .find(|&k| lookup(expected, k) != lookup(actual, k))
        .expect("profiles differ");
    CoherenceError::IrregularTriple {
        s: key as usize / r,
        t: key as usize % r,
        u,
        alpha: a,
        beta: b,
        expected: lookup(expected, key),
        actual: lookup(actual, key),
    }
}

impl Configuration {
    pub fn matrix(&self) -> &ColorMatrix {
        &self.matrix
    }

    pub fn degree(&self) -> usize {
        self.matrix.n()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    #[inline]
    pub fn relation(&self, a: usize, b: usize) -> Color {
        self.matrix.get(a, b)
    }

    pub fn fibers(&self) -> &[Vec<usize>] {
        &self.fibers
    }

    pub fn fiber_count(&self) -> usize {
        self.fibers.len()
    }

    pub fn fiber_of(&self, point: usize) -> usize {
        self.fiber_of[point]
    }

    pub fn is_homogeneous(&self) -> bool {
        self.fibers.len() == 1
    }

    /// The color `1_{Ω_i}` of fiber `i`.
    pub fn diagonal_color(&self, fiber: usize) -> Color {
        self.diagonal[fiber]
    }

    pub fn is_diagonal(&self, c: Color) -> bool {
        self.diagonal[self.domain[c]] == c
    }

    pub fn converse(&self, c: Color) -> Color {
        self.converse[c]
    }

    pub fn domain(&self, c: Color) -> usize {
        self.domain[c]
    }

    pub fn codomain(&self, c: Color) -> usize {
        self.codomain[c]
    }

    pub fn valency(&self, c: Color) -> usize {
        self.valency[c]
    }

    pub fn valencies(&self) -> &[usize] {
        &self.valency
    }

    /// `|s| = n_s * |domain fiber|`.
    pub fn size(&self, c: Color) -> usize {
        self.valency[c] * self.fibers[self.domain[c]].len()
    }

    pub fn is_thin(&self, c: Color) -> bool {
        self.valency[c] == 1
    }

    /// The colors `S_ij` from fiber `i` to fiber `j`, ascending.
    pub fn colors_between(&self, i: usize, j: usize) -> Vec<Color> {
        (0..self.rank())
            .filter(|&c| self.domain[c] == i && self.codomain[c] == j)
            .collect()
    }

    /// `αs = {β | (α, β) ∈ s}`.
    pub fn successors(&self, a: usize, s: Color) -> impl Iterator<Item = usize> + '_ {
        self.matrix
            .row(a)
            .enumerate()
            .filter(move |&(_, c)| c == s)
            .map(|(b, _)| b)
    }

    /// The unique successor of `a` under a thin color.
    pub fn thin_image(&self, a: usize, t: Color) -> Option<usize> {
        if self.valency[t] != 1 || self.domain[t] != self.fiber_of[a] {
            return None;
        }
        self.successors(a, t).next()
    }

    /// `c_st^u`; zero when the fiber frames of `s`, `t`, `u` do not compose.
    pub fn intersection_number(&self, s: Color, t: Color, u: Color) -> u32 {
        if self.codomain[s] != self.domain[t]
            || self.domain[u] != self.domain[s]
            || self.codomain[u] != self.codomain[t]
        {
            return 0;
        }
        self.tensor.get(s, t, u)
    }

    /// Nonzero terms of `σ_s σ_t = Σ_u c_st^u σ_u`, ascending in `u`.
    pub fn product(&self, s: Color, t: Color) -> &[(Color, u32)] {
        if self.codomain[s] != self.domain[t] {
            return &[];
        }
        self.tensor.support(s, t)
    }

    /// Complex product `TU = {u | c_tu^u > 0 for some t ∈ T, u ∈ U}`.
    pub fn complex_product(&self, left: &ColorSet, right: &ColorSet) -> ColorSet {
        let mut out = ColorSet::new();
        for &t in left {
            for &u in right {
                out.extend(self.product(t, u).iter().map(|&(c, _)| c));
            }
        }
        out
    }

    pub fn converse_set(&self, set: &ColorSet) -> ColorSet {
        set.iter().map(|&c| self.converse[c]).collect()
    }

    /// Union of colors as an `n x n` membership test on points.
    pub fn in_set(&self, set: &ColorSet, a: usize, b: usize) -> bool {
        set.contains(&self.relation(a, b))
    }

    /// The same configuration with canonically numbered colors.
    pub fn canonical(&self) -> Configuration {
        build_configuration(self.matrix.canonical()).expect("relabelling preserves coherence")
    }
}

/// One failed identity found by [`check_lemma_int`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "identity", rename_all = "snake_case")]
pub enum LemmaIntViolation {
    ValencySum {
        r: Color,
        s: Color,
        product: usize,
        sum: usize,
    },
    Symmetry {
        r: Color,
        s: Color,
        t: Color,
        values: [usize; 3],
    },
    ProductSize {
        r: Color,
        s: Color,
        size: usize,
        gcd: usize,
    },
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct LemmaIntReport {
    pub valency_sums_checked: usize,
    pub symmetries_checked: usize,
    pub product_sizes_checked: usize,
    pub violations: Vec<LemmaIntViolation>,
}

impl LemmaIntReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Checks the basic intersection-number identities:
/// `n_r n_s = Σ_t c_rs^t n_t`, `|t| c_rs^{t*} = |r| c_st^{r*} = |s| c_tr^{s*}`
/// and `|rs| <= gcd(n_r, n_s)`, the last only when the fibers of `r` and
/// `s` have equal size.
pub fn check_lemma_int(c: &Configuration) -> LemmaIntReport {
    let r = c.rank();
    let mut report = LemmaIntReport::default();
    for a in 0..r {
        for b in 0..r {
            let terms = c.product(a, b);
            if terms.is_empty() {
                continue;
            }
            report.valency_sums_checked += 1;
            let product = c.valency(a) * c.valency(b);
            let sum: usize = terms.iter().map(|&(u, k)| k as usize * c.valency(u)).sum();
            if product != sum {
                report.violations.push(LemmaIntViolation::ValencySum {
                    r: a,
                    s: b,
                    product,
                    sum,
                });
            }
            let sizes = [c.domain(a), c.codomain(a), c.codomain(b)].map(|i| c.fibers()[i].len());
            if sizes[0] != sizes[1] || sizes[1] != sizes[2] {
                continue;
            }
            report.product_sizes_checked += 1;
            let g = gcd(c.valency(a), c.valency(b));
            if terms.len() > g {
                report.violations.push(LemmaIntViolation::ProductSize {
                    r: a,
                    s: b,
                    size: terms.len(),
                    gcd: g,
                });
            }
        }
    }
    for a in 0..r {
        for b in 0..r {
            for t in 0..r {
                report.symmetries_checked += 1;
                let values = [
                    c.size(t) * c.intersection_number(a, b, c.converse(t)) as usize,
                    c.size(a) * c.intersection_number(b, t, c.converse(a)) as usize,
                    c.size(b) * c.intersection_number(t, a, c.converse(b)) as usize,
                ];
                if values[0] != values[1] || values[1] != values[2] {
                    report.violations.push(LemmaIntViolation::Symmetry {
                        r: a,
                        s: b,
                        t,
                        values,
                    });
                }
            }
        }
    }
    report
}
