//! Shipped group fixtures.
//!
//! Cayley tables for small groups (cyclic, `S_3`, `D_4`, `Q_8`, the five
//! groups of order 27), permutation groups of small degree, and a set of
//! order-81 groups given by permutation generators.

use crate::coherent::{ColorMatrix, Configuration};
use crate::stabilization::{thin_residue_extension, Coloring};
use crate::constructions::{
    coset_action, cyclic_scheme, multi_coset_action, orbitals, wreath_cpcp, CayleyGroup, PermGroup,
};

fn table(order: usize, mul: impl FnMut(usize, usize) -> usize) -> CayleyGroup {
    CayleyGroup::from_fn(order, mul).expect("fixture table is a group")
}

pub fn cyclic(n: usize) -> CayleyGroup {
    table(n, |a, b| (a + b) % n)
}

pub fn symmetric3() -> CayleyGroup {
    s3_natural().to_cayley().expect("S_3").0
}

pub fn dihedral4() -> CayleyGroup {
    d4_square().to_cayley().expect("D_4").0
}

/// `±{1, i, j, k}`, element `4 * sign + unit` with units ordered `1, i, j, k`.
pub fn quaternion() -> CayleyGroup {
    // (sign, unit) of unit products
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    table(8, |a, b| {
        let (s, u) = UNIT[a % 4][b % 4];
        ((a / 4 + b / 4 + s) % 2) * 4 + u
    })
}

/// Upper unitriangular 3x3 matrices over `Z_p`; `(a, b, c)` is stored as
/// `a p^2 + b p + c` with product `(a + a', b + b', c + c' + a b')`.
pub fn heisenberg(p: usize) -> CayleyGroup {
    let split = move |x: usize| (x / (p * p), x / p % p, x % p);
    table(p * p * p, |x, y| {
        let (a, b, c) = split(x);
        let (a2, b2, c2) = split(y);
        ((a + a2) % p) * p * p + ((b + b2) % p) * p + (c + c2 + a * b2) % p
    })
}

/// `Z_m x Z_n`, element `a n + b`.
pub fn cyclic_product(m: usize, n: usize) -> CayleyGroup {
    table(m * n, |x, y| ((x / n + y / n) % m) * n + (x + y) % n)
}

pub fn elementary_abelian27() -> CayleyGroup {
    table(27, |x, y| {
        (0..3)
            .map(|d| 3usize.pow(d))
            .map(|w| ((x / w + y / w) % 3) * w)
            .sum()
    })
}

/// `Z_9 ⋊ Z_3` with the generator of `Z_3` acting as `x ↦ 4x`; element `3x + y`.
pub fn extraspecial27_exp9() -> CayleyGroup {
    table(27, |u, v| {
        let (x, y) = (u / 3, u % 3);
        let (x2, y2) = (v / 3, v % 3);
        ((x + 4usize.pow(y as u32) * x2) % 9) * 3 + (y + y2) % 3
    })
}

/// The five groups of order 27.
pub fn order27_groups() -> Vec<(&'static str, CayleyGroup)> {
    vec![
        ("z27", cyclic(27)),
        ("z9xz3", cyclic_product(9, 3)),
        ("z3^3", elementary_abelian27()),
        ("heis27", heisenberg(3)),
        ("z9:z3", extraspecial27_exp9()),
    ]
}

/// Named Cayley-table fixtures.
pub fn cayley_groups() -> Vec<(&'static str, CayleyGroup)> {
    let mut v = vec![
        ("z1", cyclic(1)),
        ("z3", cyclic(3)),
        ("z5", cyclic(5)),
        ("z6", cyclic(6)),
        ("z9", cyclic(9)),
        ("s3", symmetric3()),
        ("d4", dihedral4()),
        ("q8", quaternion()),
    ];
    v.extend(order27_groups());
    v
}

fn perm(degree: usize, gens: &[&[&[usize]]]) -> PermGroup {
    PermGroup::from_cycles(degree, gens).expect("fixture generators are permutations")
}

pub fn s3_natural() -> PermGroup {
    perm(3, &[&[&[0, 1, 2]], &[&[0, 1]]])
}

pub fn d4_square() -> PermGroup {
    perm(4, &[&[&[0, 1, 2, 3]], &[&[1, 3]]])
}

/// Sylow 3-subgroup of `S_9`.
pub fn c3_wr_c3() -> PermGroup {
    perm(9, &[&[&[0, 1, 2]], &[&[0, 3, 6], &[1, 4, 7], &[2, 5, 8]]])
}

/// Heisenberg group of order 27 acting on `Z_3^2` (point `3x + y`) by
/// translations and the shear `(x, y) ↦ (x, x + y)`.
pub fn heis27_on_plane() -> PermGroup {
    let map = |f: &dyn Fn(usize, usize) -> (usize, usize)| -> Vec<usize> {
        (0..9)
            .map(|pt| {
                let (x, y) = f(pt / 3, pt % 3);
                3 * x + y
            })
            .collect()
    };
    PermGroup::new(
        9,
        vec![
            map(&|x, y| ((x + 1) % 3, y)),
            map(&|x, y| (x, (y + 1) % 3)),
            map(&|x, y| (x, (x + y) % 3)),
        ],
    )
    .expect("Heisenberg generators")
}

/// Affine maps `x ↦ x + 1`, `x ↦ 10x` of `Z_27`; order 81.
pub fn z27_by_z3_affine() -> PermGroup {
    PermGroup::new(
        27,
        vec![
            (0..27).map(|x| (x + 1) % 27).collect(),
            (0..27).map(|x| 10 * x % 27).collect(),
        ],
    )
    .expect("affine generators")
}

/// `Heis(27) x C_3` on 9 + 3 points.
pub fn heis27_times_c3() -> PermGroup {
    let mut gens: Vec<Vec<usize>> = heis27_on_plane()
        .generators()
        .iter()
        .map(|g| g.iter().copied().chain(9..12).collect())
        .collect();
    gens.push((0..9).chain([10, 11, 9]).collect());
    PermGroup::new(12, gens).expect("direct product generators")
}

/// `Z_3^4` on four disjoint triangles.
pub fn elementary_abelian81() -> PermGroup {
    perm(
        12,
        &[&[&[0, 1, 2]], &[&[3, 4, 5]], &[&[6, 7, 8]], &[&[9, 10, 11]]],
    )
}

/// `Z_9 ⋊ Z_9` (generator of the top acting as `x ↦ 4x`), right regular.
pub fn z9_by_z9_regular() -> PermGroup {
    table(81, |u, v| {
        let (a, b) = (u / 9, u % 9);
        let (a2, b2) = (v / 9, v % 9);
        ((a + 4usize.pow((b % 3) as u32) * a2) % 9) * 9 + (b + b2) % 9
    })
    .right_regular()
}

/// `Z_3 x Z_27`, right regular.
pub fn z3_times_z27_regular() -> PermGroup {
    cyclic_product(3, 27).right_regular()
}

/// Order-81 fixtures, in search order.
pub fn order81_groups() -> Vec<(&'static str, PermGroup)> {
    vec![
        ("z3^4", elementary_abelian81()),
        ("heis27xz3", heis27_times_c3()),
        ("z3xz27", z3_times_z27_regular()),
        ("z9:z9", z9_by_z9_regular()),
        ("z27:z3", z27_by_z3_affine()),
        ("z3wrz3", c3_wr_c3()),
    ]
}

/// Permutation-group fixtures of small degree.
pub fn perm_groups() -> Vec<(&'static str, PermGroup)> {
    let mut v = vec![
        ("trivial2", PermGroup::new(2, vec![]).expect("trivial")),
        ("z3_two_orbits", perm(6, &[&[&[0, 1, 2], &[3, 4, 5]]])),
        ("s3_natural", s3_natural()),
        ("s4_natural", perm(4, &[&[&[0, 1, 2, 3]], &[&[0, 1]]])),
        ("d4_square", d4_square()),
        ("c5_on_10", perm(10, &[&[&[0, 1, 2, 3, 4], &[5, 6, 7, 8, 9]], &[&[0, 5]]])),
        ("heis27_plane", heis27_on_plane()),
        ("z3wrz3", c3_wr_c3()),
        ("heis27xz3", heis27_times_c3()),
        ("z3^4", elementary_abelian81()),
        ("z27:z3", z27_by_z3_affine()),
    ];
    for (name, g) in cayley_groups() {
        if g.order() > 1 {
            v.push((name, g.right_regular()));
        }
    }
    v
}

/// Order-3 subgroup of [`c3_wr_c3`] (Cayley numbering of `to_cayley`)
/// satisfying `H < N_G(H) < N_G(N_G(H)) ⊴ G` with `|N_G(N_G(H))| = 27`.
pub const WREATH81_CHAIN_SUBGROUP: [usize; 3] = [0, 2, 6];

const WREATH81_NINE: [[usize; 9]; 5] = [
    [0, 1, 3, 20, 28, 32, 39, 43, 54],
    [0, 1, 3, 34, 45, 56, 64, 72, 76],
    [0, 1, 3, 49, 50, 60, 61, 68, 69],
    [0, 2, 6, 27, 45, 62, 67, 76, 80],
    [0, 4, 16, 21, 45, 53, 70, 75, 76],
];

pub fn wreath81() -> CayleyGroup {
    c3_wr_c3().to_cayley().expect("C_3 wr C_3").0
}

/// The 27-point scheme of `C_3 ≀ C_3` acting on the cosets of
/// [`WREATH81_CHAIN_SUBGROUP`].
pub fn coset27_scheme() -> Configuration {
    let ca = coset_action(&wreath81(), &WREATH81_CHAIN_SUBGROUP).expect("subgroup");
    orbitals(&ca.action)
}

/// Configurations with `C_3 ≀ C_3` fibers from actions of `C_3 ≀ C_3` on
/// unions of coset spaces of order-9 subgroups.
pub fn multi_orbit_fixtures() -> Vec<(&'static str, Configuration)> {
    let g = wreath81();
    let build = |idx: &[usize]| {
        let subs: Vec<&[usize]> = idx.iter().map(|&i| &WREATH81_NINE[i][..]).collect();
        orbitals(&multi_coset_action(&g, &subs).expect("subgroups"))
    };
    vec![
        ("two_orbit_all_regular", build(&[0, 1])),
        ("two_orbit_all_n", build(&[1, 3])),
        ("three_orbit_all_regular", build(&[0, 1, 2])),
        ("three_orbit_all_n", build(&[1, 3, 4])),
    ]
}

/// C_3 with row 0 changed from `0 1 2` to `0 2 1`.
pub fn perturbed_c3() -> ColorMatrix {
    ColorMatrix::new(3, vec![0, 2, 1, 2, 0, 1, 1, 2, 0]).expect("valid matrix")
}

/// Diagonal / edge / non-edge coloring of a graph, as a CCM matrix.
pub fn graph_coloring(n: usize, edges: &[(usize, usize)]) -> ColorMatrix {
    Coloring::from_graph(n, edges).matrix().clone()
}

/// Contents of the files shipped under `fixtures/`, by file name.
pub fn fixture_files() -> Vec<(&'static str, String)> {
    let ccm = |c: &Configuration| c.matrix().to_ccm();
    let coset27 = coset27_scheme().canonical();
    let ext27 = thin_residue_extension(&coset27).expect("residue classes are fibers");
    let orbit = multi_orbit_fixtures();
    let find = |name: &str| orbit.iter().find(|(n, _)| *n == name).expect("fixture").1.canonical();
    vec![
        ("c3.ccm", ccm(&cyclic_scheme(3))),
        ("c3_perturbed.ccm", perturbed_c3().to_ccm()),
        ("c9.ccm", ccm(&cyclic_scheme(9))),
        ("c2wrc2.ccm", ccm(&wreath_cpcp(2))),
        ("c3wrc3.ccm", ccm(&wreath_cpcp(3))),
        ("four_cycle.ccm", graph_coloring(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).to_ccm()),
        ("path3.ccm", graph_coloring(3, &[(0, 1), (1, 2)]).to_ccm()),
        ("coset27.ccm", ccm(&coset27)),
        ("ext27.ccm", ccm(&ext27)),
        ("two_orbit_all_regular.ccm", ccm(&find("two_orbit_all_regular"))),
        ("three_orbit_all_n.ccm", ccm(&find("three_orbit_all_n"))),
        ("s3.cay", symmetric3().to_text()),
        ("heis27.cay", heisenberg(3).to_text()),
        ("z27.cay", cyclic(27).to_text()),
        ("wreath81.cay", wreath81().to_text()),
        ("c3wrc3_81.perm", c3_wr_c3().to_text()),
        ("s3_natural.perm", s3_natural().to_text()),
        ("fourier3.gh", "3\n0 0 0\n0 1 2\n0 2 1\n".to_string()),
        ("repeated_row.gh", "3\n0 0 0\n0 1 2\n0 1 2\n".to_string()),
    ]
}
