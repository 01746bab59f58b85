//! Coherent closure by two-dimensional Weisfeiler-Leman refinement.
//!
//! Each round replaces the color of `(α, β)` by the old color together with
//! the multiset of `(color(α, γ), color(γ, β))` over all `γ`; new colors are
//! numbered by sorted signature. The first round also records whether the
//! cell is diagonal and the color of `(β, α)`.

use rayon::prelude::*;
use thiserror::Error;

use crate::coherent::{build_configuration, ColorMatrix, Configuration};
use crate::structure::{self, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabilizationError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("refinement split the residue class {class:?} into fibers {fibers:?}")]
    FiberSplit {
        class: Vec<usize>,
        fibers: Vec<Vec<usize>>,
    },
    #[error("partition seed has {found} entries, expected {expected}")]
    SeedLength { expected: usize, found: usize },
}

/// A partition of `Ω x Ω` used as refinement input. Unlike a
/// [`Configuration`] it need not be converse-closed or separate the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    matrix: ColorMatrix,
}

impl Coloring {
    pub fn from_matrix(matrix: ColorMatrix) -> Self {
        Self { matrix }
    }

    pub fn from_labels<K: Eq + std::hash::Hash>(
        n: usize,
        label: impl FnMut(usize, usize) -> K,
    ) -> Self {
        Self {
            matrix: ColorMatrix::from_labels(n, label),
        }
    }

    /// Diagonal / edge / non-edge coloring of an undirected graph.
    pub fn from_graph(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![false; n * n];
        for &(a, b) in edges {
            adj[a * n + b] = true;
            adj[b * n + a] = true;
        }
        Self::from_labels(n, |a, b| {
            if a == b {
                0u8
            } else if adj[a * n + b] {
                1
            } else {
                2
            }
        })
    }

    /// Refines by a vertex partition: the cell `(α, β)` also records the
    /// classes of `α` and `β`.
    pub fn with_point_classes(&self, classes: &[usize]) -> Result<Self, StabilizationError> {
        let n = self.matrix.n();
        if classes.len() != n {
            return Err(StabilizationError::SeedLength {
                expected: n,
                found: classes.len(),
            });
        }
        Ok(Self::from_labels(n, |a, b| {
            (self.matrix.get(a, b), classes[a], classes[b])
        }))
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn matrix(&self) -> &ColorMatrix {
        &self.matrix
    }
}

/// Parses a point-partition seed: one class index per line.
pub fn parse_point_classes(text: &str) -> Result<Vec<usize>, String> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(line, l)| {
            l.parse()
                .map_err(|_| format!("line {line}: invalid class index {l:?}"))
        })
        .collect()
}

/// Run-length encoded multiset of `(color(α, γ), color(γ, β))` keys.
type Signature = (u32, Vec<(u64, u32)>);

fn renumber(sigs: Vec<Signature>) -> (Vec<u32>, usize) {
    let mut sorted: Vec<&Signature> = sigs.iter().collect();
    sorted.sort_unstable();
    sorted.dedup();
    let count = sorted.len();
    let ids = sigs
        .iter()
        .map(|s| sorted.binary_search(&s).expect("signature present") as u32)
        .collect();
    (ids, count)
}

fn refine_round(n: usize, cells: &[u32], rank: usize) -> (Vec<u32>, usize) {
    let r = rank as u64;
    let sigs: Vec<Signature> = (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut keys = Vec::with_capacity(n);
            (0..n)
                .map(move |b| {
                    keys.clear();
                    keys.extend(
                        (0..n).map(|g| cells[a * n + g] as u64 * r + cells[g * n + b] as u64),
                    );
                    keys.sort_unstable();
                    let mut rle: Vec<(u64, u32)> = Vec::new();
                    for &k in &keys {
                        match rle.last_mut() {
                            Some((last, cnt)) if *last == k => *cnt += 1,
                            _ => rle.push((k, 1)),
                        }
                    }
                    (cells[a * n + b], rle)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    renumber(sigs)
}

/// The coarsest coherent configuration refining `col`, canonically numbered.
pub fn wl_closure(col: &Coloring) -> Configuration {
    let (cells, rounds) = wl_refine(col);
    debug_assert!(rounds <= col.n() * col.n() + 1);
    let m = ColorMatrix::new(col.n(), cells.into_iter().map(|c| c as usize).collect())
        .expect("refinement numbers colors densely");
    build_configuration(m.canonical()).expect("stable colorings are coherent")
}

/// Stable cells and the number of rounds that changed the partition.
fn wl_refine(col: &Coloring) -> (Vec<u32>, usize) {
    let n = col.n();
    let m = col.matrix();
    let seed: Vec<Signature> = (0..n * n)
        .map(|i| {
            let (a, b) = (i / n, i % n);
            let tag = (a == b) as u64 * m.rank() as u64 + m.get(b, a) as u64;
            (m.get(a, b) as u32, vec![(tag, 0)])
        })
        .collect();
    let (mut cells, mut rank) = renumber(seed);
    let mut rounds = 0;
    // Color count grows strictly until stable and is bounded by n^2.
    for _ in 0..=n * n {
        let (next, next_rank) = refine_round(n, &cells, rank);
        if next_rank == rank {
            return (cells, rounds);
        }
        cells = next;
        rank = next_rank;
        rounds += 1;
    }
    unreachable!("refinement exceeded n^2 rounds");
}

/// Refines a homogeneous scheme by the classes of its thin residue and closes
/// coherently. The fibers of the result must be exactly those classes.
pub fn thin_residue_extension(c: &Configuration) -> Result<Configuration, StabilizationError> {
    let residue = structure::thin_residue(c)?;
    let classes = residue.classes(c);
    let mut class_of = vec![0; c.degree()];
    for (k, cl) in classes.iter().enumerate() {
        for &x in cl {
            class_of[x] = k;
        }
    }
    let seed = Coloring::from_matrix(c.matrix().clone()).with_point_classes(&class_of)?;
    let ext = wl_closure(&seed);
    for cl in &classes {
        let fibers: Vec<Vec<usize>> = ext
            .fibers()
            .iter()
            .filter(|f| f.iter().any(|x| cl.contains(x)))
            .cloned()
            .collect();
        if fibers.len() != 1 || fibers[0] != *cl {
            return Err(StabilizationError::FiberSplit {
                class: cl.clone(),
                fibers,
            });
        }
    }
    Ok(ext)
}
