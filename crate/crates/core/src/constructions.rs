//! Schemes from algebraic sources.
//!
//! Finite groups are given by Cayley tables ([`CayleyGroup`], identity at
//! index 0) or by permutation generators ([`PermGroup`]). Permutations act
//! on the right: the product `x * y` applies `x` first.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::coherent::{build_configuration, ColorMatrix, ColorSet, Configuration};
use crate::structure::{self, StructureError};

/// Groups above this order are refused.
pub const MAX_GROUP_ORDER: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("group order {0} exceeds the limit of {MAX_GROUP_ORDER}")]
    TooLarge(usize),
    #[error("group must have at least one element")]
    Empty,
    #[error("table entry {value} out of range for order {order}")]
    EntryOutOfRange { value: usize, order: usize },
    #[error("element 0 is not the identity")]
    IdentityNotZero,
    #[error("row or column {0} is not a permutation")]
    NotLatin(usize),
    #[error("table is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("elements {0:?} do not form a subgroup")]
    NotASubgroup(Vec<usize>),
    #[error("generator {index} is not a permutation of 0..{degree}")]
    NotAPermutation { index: usize, degree: usize },
    #[error("operation requires a homogeneous scheme")]
    NotHomogeneous,
}

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyGroup {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
}

impl CayleyGroup {
    /// Validates a row-major table: identity at 0, Latin square, associative.
    pub fn new(order: usize, table: Vec<usize>) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::Empty);
        }
        if order > MAX_GROUP_ORDER {
            return Err(GroupError::TooLarge(order));
        }
        assert_eq!(table.len(), order * order, "table must be order x order");
        if let Some(&value) = table.iter().find(|&&v| v >= order) {
            return Err(GroupError::EntryOutOfRange { value, order });
        }
        for x in 0..order {
            if table[x] != x || table[x * order] != x {
                return Err(GroupError::IdentityNotZero);
            }
        }
        let mut seen = vec![0usize; order];
        for i in 0..order {
            for j in 0..order {
                seen[table[i * order + j]] = 2 * i + 1;
            }
            if seen.iter().any(|&s| s != 2 * i + 1) {
                return Err(GroupError::NotLatin(i));
            }
            for j in 0..order {
                seen[table[j * order + i]] = 2 * i + 2;
            }
            if seen.iter().any(|&s| s != 2 * i + 2) {
                return Err(GroupError::NotLatin(i));
            }
        }
        let inverse = (0..order)
            .map(|x| (0..order).find(|&y| table[x * order + y] == 0).unwrap())
            .collect();
        let g = Self {
            order,
            table,
            inverse,
        };
        g.check_associative()?;
        Ok(g)
    }

    pub fn from_fn(order: usize, mut mul: impl FnMut(usize, usize) -> usize) -> Result<Self, GroupError> {
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                table.push(mul(a, b));
            }
        }
        Self::new(order, table)
    }

    // Light's test: the elements g with x(gy) = (xg)y for all x, y are closed
    // under products, so checking a generating set suffices.
    fn check_associative(&self) -> Result<(), GroupError> {
        for g in self.magma_generators() {
            for x in 0..self.order {
                let xg = self.mul(x, g);
                for y in 0..self.order {
                    if self.mul(x, self.mul(g, y)) != self.mul(xg, y) {
                        return Err(GroupError::NotAssociative(x, g, y));
                    }
                }
            }
        }
        Ok(())
    }

    /// Greedy generating set: repeatedly add the least element outside the
    /// product closure of the elements chosen so far.
    fn magma_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut covered = vec![false; self.order];
        covered[0] = true;
        while let Some(x) = covered.iter().position(|c| !c) {
            gens.push(x);
            let closure = self.product_closure(&gens);
            for e in closure {
                covered[e] = true;
            }
        }
        gens
    }

    fn product_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut elems = vec![0];
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(e) = queue.pop_front() {
            for &g in gens {
                let x = self.mul(e, g);
                if !inside[x] {
                    inside[x] = true;
                    elems.push(x);
                    queue.push_back(x);
                }
            }
        }
        elems.sort_unstable();
        elems
    }

    /// Parses "n" followed by n rows of n element indices.
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let mut rows = data_lines(text);
        let (line, header) = rows.next().ok_or(GroupError::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let order = parse_fields(line, header)?;
        if order.len() != 1 {
            return Err(GroupError::Parse {
                line,
                message: "header must be a single integer".into(),
            });
        }
        let order = order[0];
        if order == 0 {
            return Err(GroupError::Empty);
        }
        if order > MAX_GROUP_ORDER {
            return Err(GroupError::TooLarge(order));
        }
        let mut table = Vec::with_capacity(order * order);
        let mut count = 0;
        for (line, body) in rows {
            let row = parse_fields(line, body)?;
            if row.len() != order || count == order {
                return Err(GroupError::Parse {
                    line,
                    message: format!("expected {order} rows of {order} entries"),
                });
            }
            table.extend(row);
            count += 1;
        }
        if count != order {
            return Err(GroupError::Parse {
                line,
                message: format!("expected {order} rows, found {count}"),
            });
        }
        Self::new(order, table)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for a in 0..self.order {
            let row: Vec<String> = (0..self.order).map(|b| self.mul(a, b).to_string()).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `g⁻¹ x g`.
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn generators(&self) -> Vec<usize> {
        self.magma_generators()
    }

    /// The subgroup generated by `gens`, ascending.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        self.product_closure(gens)
    }

    pub fn is_subgroup(&self, h: &[usize]) -> bool {
        let mut inside = vec![false; self.order];
        for &x in h {
            if x >= self.order {
                return false;
            }
            inside[x] = true;
        }
        inside[0] && h.iter().all(|&a| h.iter().all(|&b| inside[self.mul(a, b)]))
    }

    fn require_subgroup(&self, h: &[usize]) -> Result<Vec<usize>, GroupError> {
        let mut sorted = h.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.is_empty() || !self.is_subgroup(&sorted) {
            return Err(GroupError::NotASubgroup(h.to_vec()));
        }
        Ok(sorted)
    }

    fn mask(&self, set: &[usize]) -> Vec<bool> {
        let mut m = vec![false; self.order];
        for &x in set {
            m[x] = true;
        }
        m
    }

    /// `N_G(H)`, ascending.
    pub fn normalizer(&self, h: &[usize]) -> Vec<usize> {
        let inside = self.mask(h);
        (0..self.order)
            .filter(|&g| h.iter().all(|&x| inside[self.conjugate(x, g)]))
            .collect()
    }

    pub fn is_normal(&self, h: &[usize]) -> bool {
        self.normalizer(h).len() == self.order
    }

    /// Smallest normal subgroup containing `h`.
    pub fn normal_closure(&self, h: &[usize]) -> Vec<usize> {
        let conjugates: Vec<usize> = (0..self.order)
            .flat_map(|g| h.iter().map(move |&x| (x, g)))
            .map(|(x, g)| self.conjugate(x, g))
            .collect();
        self.subgroup_generated(&conjugates)
    }

    /// Intersection of all conjugates of `h`.
    pub fn core(&self, h: &[usize]) -> Vec<usize> {
        let inside = self.mask(h);
        h.iter()
            .copied()
            .filter(|&x| (0..self.order).all(|g| inside[self.conjugate(x, g)]))
            .collect()
    }

    /// `|A g B|`.
    pub fn double_coset_size(&self, a: &[usize], g: usize, b: &[usize]) -> usize {
        let mut seen = vec![false; self.order];
        let mut count = 0;
        for &x in a {
            let xg = self.mul(x, g);
            for &y in b {
                let z = self.mul(xg, y);
                if !seen[z] {
                    seen[z] = true;
                    count += 1;
                }
            }
        }
        count
    }

    /// Right cosets `Hx`, ordered by least element; `H` itself comes first.
    pub fn right_cosets(&self, h: &[usize]) -> (Vec<Vec<usize>>, Vec<usize>) {
        let mut index = vec![usize::MAX; self.order];
        let mut cosets = Vec::new();
        for x in 0..self.order {
            if index[x] != usize::MAX {
                continue;
            }
            let mut coset: Vec<usize> = h.iter().map(|&y| self.mul(y, x)).collect();
            coset.sort_unstable();
            for &y in &coset {
                index[y] = cosets.len();
            }
            cosets.push(coset);
        }
        (cosets, index)
    }

    /// Right regular representation `x ↦ x g` on the generators.
    pub fn right_regular(&self) -> PermGroup {
        let gens = self
            .generators()
            .into_iter()
            .map(|g| (0..self.order).map(|x| self.mul(x, g)).collect())
            .collect();
        PermGroup {
            degree: self.order,
            generators: gens,
        }
    }

    /// Elements of order `k`.
    pub fn elements_of_order(&self, k: usize) -> Vec<usize> {
        (0..self.order).filter(|&x| self.element_order(x) == k).collect()
    }

    /// Distinct cyclic subgroups of order `k`.
    pub fn cyclic_subgroups(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for x in self.elements_of_order(k) {
            let h = self.subgroup_generated(&[x]);
            if !out.contains(&h) {
                out.push(h);
            }
        }
        out
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_fields(line: usize, body: &str) -> Result<Vec<usize>, GroupError> {
    body.split_whitespace()
        .map(|t| {
            t.parse().map_err(|_| GroupError::Parse {
                line,
                message: format!("invalid integer {t:?}"),
            })
        })
        .collect()
}

/// A permutation group given by generators acting on `0..degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Vec<usize>>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        for (index, g) in generators.iter().enumerate() {
            let mut seen = vec![false; degree];
            let ok = g.len() == degree
                && g.iter().all(|&x| x < degree && !std::mem::replace(&mut seen[x], true));
            if !ok {
                return Err(GroupError::NotAPermutation { index, degree });
            }
        }
        Ok(Self { degree, generators })
    }

    /// Builds generators from cycles, e.g. `&[&[0, 1, 2]]`.
    pub fn from_cycles(degree: usize, gens: &[&[&[usize]]]) -> Result<Self, GroupError> {
        let perms = gens
            .iter()
            .map(|cycles| {
                let mut p: Vec<usize> = (0..degree).collect();
                for cyc in cycles.iter() {
                    for (i, &x) in cyc.iter().enumerate() {
                        p[x] = cyc[(i + 1) % cyc.len()];
                    }
                }
                p
            })
            .collect();
        Self::new(degree, perms)
    }

    /// Parses "n k" followed by k lines of n images.
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let mut rows = data_lines(text);
        let (line, header) = rows.next().ok_or(GroupError::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let head = parse_fields(line, header)?;
        if head.len() != 2 {
            return Err(GroupError::Parse {
                line,
                message: "header must be \"n k\"".into(),
            });
        }
        let (degree, k) = (head[0], head[1]);
        let mut gens = Vec::with_capacity(k);
        for (line, body) in rows {
            if gens.len() == k {
                return Err(GroupError::Parse {
                    line,
                    message: format!("more than {k} generators"),
                });
            }
            gens.push(parse_fields(line, body)?);
        }
        if gens.len() != k {
            return Err(GroupError::Parse {
                line,
                message: format!("expected {k} generators, found {}", gens.len()),
            });
        }
        Self::new(degree, gens)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.degree, self.generators.len());
        for g in &self.generators {
            let row: Vec<String> = g.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    /// Enumerates the group; elements are numbered in breadth-first order
    /// from the identity, and the result is its Cayley table together with
    /// the element permutations.
    pub fn to_cayley(&self) -> Result<(CayleyGroup, Vec<Vec<usize>>), GroupError> {
        let identity: Vec<usize> = (0..self.degree).collect();
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut head = 0;
        while head < elems.len() {
            for g in &self.generators {
                let prod: Vec<usize> = elems[head].iter().map(|&x| g[x]).collect();
                if !index.contains_key(&prod) {
                    if elems.len() == MAX_GROUP_ORDER {
                        return Err(GroupError::TooLarge(MAX_GROUP_ORDER + 1));
                    }
                    index.insert(prod.clone(), elems.len());
                    elems.push(prod);
                }
            }
            head += 1;
        }
        let order = elems.len();
        let mut table = Vec::with_capacity(order * order);
        for a in &elems {
            for b in &elems {
                let prod: Vec<usize> = a.iter().map(|&x| b[x]).collect();
                table.push(index[&prod]);
            }
        }
        Ok((CayleyGroup::new(order, table)?, elems))
    }

    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.degree];
        if self.degree == 0 {
            return true;
        }
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for g in &self.generators {
                if !seen[g[x]] {
                    seen[g[x]] = true;
                    stack.push(g[x]);
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// Orbits of the group on `Ω x Ω`, numbered by discovery in a row-major
/// scan, then canonically relabelled.
pub fn orbital_matrix(g: &PermGroup) -> ColorMatrix {
    let n = g.degree();
    assert!(n > 0, "permutation group of degree 0");
    let mut color = vec![usize::MAX; n * n];
    let mut next = 0;
    let mut queue = VecDeque::new();
    for start in 0..n * n {
        if color[start] != usize::MAX {
            continue;
        }
        color[start] = next;
        queue.push_back(start);
        while let Some(cell) = queue.pop_front() {
            let (a, b) = (cell / n, cell % n);
            for p in g.generators() {
                let img = p[a] * n + p[b];
                if color[img] == usize::MAX {
                    color[img] = next;
                    queue.push_back(img);
                }
            }
        }
        next += 1;
    }
    ColorMatrix::new(n, color)
        .expect("every orbit is non-empty")
        .canonical()
}

/// `Inv(G) = (Ω, Orb_2(G))`.
pub fn orbitals(g: &PermGroup) -> Configuration {
    build_configuration(orbital_matrix(g)).expect("orbital partitions are coherent")
}

/// The thin scheme of `G` acting on itself by right multiplication: the
/// relation of `(x, y)` is determined by `y x⁻¹`.
pub fn group_scheme(g: &CayleyGroup) -> Configuration {
    let n = g.order();
    let cells = (0..n * n).map(|i| g.mul(i % n, g.inv(i / n))).collect();
    let m = ColorMatrix::new(n, cells).expect("every element occurs in row 0");
    build_configuration(m).expect("group schemes are coherent")
}

/// Thin scheme of `Z_n` (circulant color matrix).
pub fn cyclic_scheme(n: usize) -> Configuration {
    let g = CayleyGroup::from_fn(n, |a, b| (a + b) % n).expect("cyclic group table");
    group_scheme(&g)
}

/// `(Δ,U) ≀ (Γ,V)` on `Δ x Γ`. Point `(δ, γ)` has index `γ |Δ| + δ`, so
/// each inner block is a run of consecutive points.
pub fn wreath_product(
    inner: &Configuration,
    outer: &Configuration,
) -> Result<Configuration, GroupError> {
    if !inner.is_homogeneous() || !outer.is_homogeneous() {
        return Err(GroupError::NotHomogeneous);
    }
    let d = inner.degree();
    let n = d * outer.degree();
    let m = ColorMatrix::from_labels(n, |a, b| {
        let (ga, gb) = (a / d, b / d);
        if ga == gb {
            (0, inner.relation(a % d, b % d))
        } else {
            (1, outer.relation(ga, gb))
        }
    });
    Ok(build_configuration(m.canonical()).expect("wreath products are coherent"))
}

/// `C_p ≀ C_p`.
pub fn wreath_cpcp(p: usize) -> Configuration {
    wreath_product(&cyclic_scheme(p), &cyclic_scheme(p)).expect("cyclic schemes are homogeneous")
}

/// Permutation action of `G` on right cosets of `H`.
#[derive(Debug, Clone)]
pub struct CosetAction {
    pub action: PermGroup,
    pub cosets: Vec<Vec<usize>>,
    pub core: Vec<usize>,
    pub faithful: bool,
}

pub fn coset_action(g: &CayleyGroup, h: &[usize]) -> Result<CosetAction, GroupError> {
    let h = g.require_subgroup(h)?;
    let (cosets, index) = g.right_cosets(&h);
    let generators = g
        .generators()
        .into_iter()
        .map(|y| cosets.iter().map(|c| index[g.mul(c[0], y)]).collect())
        .collect();
    let core = g.core(&h);
    Ok(CosetAction {
        action: PermGroup::new(cosets.len(), generators)?,
        faithful: core.len() == 1,
        core,
        cosets,
    })
}

/// Action of `G` on the disjoint union of the right-coset spaces of the
/// given subgroups, in order.
pub fn multi_coset_action(g: &CayleyGroup, subgroups: &[&[usize]]) -> Result<PermGroup, GroupError> {
    if subgroups.is_empty() {
        return Err(GroupError::Empty);
    }
    let actions = subgroups
        .iter()
        .map(|h| coset_action(g, h))
        .collect::<Result<Vec<_>, _>>()?;
    let degree = actions.iter().map(|a| a.action.degree()).sum();
    let generators = (0..actions[0].action.generators().len())
        .map(|k| {
            let mut offset = 0;
            let mut perm = Vec::with_capacity(degree);
            for a in &actions {
                perm.extend(a.action.generators()[k].iter().map(|x| x + offset));
                offset += a.action.degree();
            }
            perm
        })
        .collect();
    PermGroup::new(degree, generators)
}

/// Outcome of checking `H < N_G(H) < N_G(N_G(H)) ⊴ G` with `|N_G(N_G(H))| = p^3`
/// and its consequences.
#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub p: usize,
    pub group_order: usize,
    pub h_order: usize,
    pub normalizer_order: usize,
    pub second_normalizer_order: usize,
    pub second_normalizer_normal: bool,
    pub normal_closure_order: usize,
    /// `|HgH|/|H|` value -> number of double cosets with that value.
    pub h_double_coset_profile: BTreeMap<usize, usize>,
    /// `|NgN|/|N|` for `N = N_G(H)`.
    pub normalizer_double_coset_profile: BTreeMap<usize, usize>,
    pub chain_holds: bool,
    /// Each consequence of the chain by name.
    pub consequences: BTreeMap<&'static str, bool>,
    pub consequences_hold: bool,
    pub failures: Vec<String>,
}

impl ChainReport {
    pub fn holds(&self) -> bool {
        self.chain_holds && self.consequences_hold
    }
}

pub fn chain_check(g: &CayleyGroup, h: &[usize], p: usize) -> Result<ChainReport, GroupError> {
    let h = g.require_subgroup(h)?;
    let n1 = g.normalizer(&h);
    let n2 = g.normalizer(&n1);
    let n2_normal = g.is_normal(&n2);
    let closure = g.normal_closure(&h);
    let mut failures = Vec::new();

    let check = |ok: bool, msg: String, list: &mut Vec<String>| {
        if !ok {
            list.push(msg);
        }
        ok
    };
    let mut chain_ok = true;
    chain_ok &= check(h.len() < n1.len(), format!("H = N_G(H) (order {})", h.len()), &mut failures);
    chain_ok &= check(
        n1.len() < n2.len(),
        format!("N_G(H) = N_G(N_G(H)) (order {})", n1.len()),
        &mut failures,
    );
    chain_ok &= check(n2_normal, "N_G(N_G(H)) is not normal in G".into(), &mut failures);
    chain_ok &= check(
        n2.len() == p * p * p,
        format!("|N_G(N_G(H))| = {} != p^3 = {}", n2.len(), p * p * p),
        &mut failures,
    );

    let mut cons_ok = true;
    cons_ok &= check(h.len() == p, format!("|H| = {} != p", h.len()), &mut failures);
    cons_ok &= check(
        n1.len() == p * p,
        format!("|N_G(H)| = {} != p^2", n1.len()),
        &mut failures,
    );

    let in_n1 = g.mask(&n1);
    let in_n2 = g.mask(&n2);
    let mut h_profile: BTreeMap<usize, usize> = BTreeMap::new();
    let mut n_profile: BTreeMap<usize, usize> = BTreeMap::new();
    let mut h_ratio_ok = true;
    let mut h_unit_ok = true;
    let mut n_ratio_ok = true;
    let mut n_unit_ok = true;
    for x in 0..g.order() {
        let rh = g.double_coset_size(&h, x, &h) / h.len();
        let rn = g.double_coset_size(&n1, x, &n1) / n1.len();
        *h_profile.entry(rh).or_default() += 1;
        *n_profile.entry(rn).or_default() += 1;
        h_ratio_ok &= rh == 1 || rh == p;
        h_unit_ok &= (rh == 1) == in_n1[x];
        n_ratio_ok &= rn == 1 || rn == p;
        n_unit_ok &= (rn == 1) == in_n2[x];
    }
    // Each double coset was counted once per element it contains.
    for (ratio, count) in h_profile.iter_mut() {
        *count /= ratio * h.len();
    }
    for (ratio, count) in n_profile.iter_mut() {
        *count /= ratio * n1.len();
    }
    let consequences = BTreeMap::from([
        ("h_order_is_p", h.len() == p),
        ("normalizer_order_is_p2", n1.len() == p * p),
        ("h_double_coset_ratio_in_1_p", h_ratio_ok),
        ("h_ratio_1_iff_in_normalizer", h_unit_ok),
        ("normalizer_double_coset_ratio_in_1_p", n_ratio_ok),
        ("normalizer_ratio_1_iff_in_second_normalizer", n_unit_ok),
        ("normal_closure_is_second_normalizer", closure == n2),
    ]);
    cons_ok &= check(h_ratio_ok, "some |HgH|/|H| is not in {1, p}".into(), &mut failures);
    cons_ok &= check(h_unit_ok, "|HgH| = |H| does not characterize N_G(H)".into(), &mut failures);
    cons_ok &= check(
        n_ratio_ok,
        "some |NgN|/|N| is not in {1, p} for N = N_G(H)".into(),
        &mut failures,
    );
    cons_ok &= check(
        n_unit_ok,
        "|NgN| = |N| does not characterize N_G(N_G(H))".into(),
        &mut failures,
    );
    cons_ok &= check(
        closure == n2,
        format!(
            "normal closure of H has order {}, N_G(N_G(H)) has order {}",
            closure.len(),
            n2.len()
        ),
        &mut failures,
    );

    Ok(ChainReport {
        p,
        group_order: g.order(),
        h_order: h.len(),
        normalizer_order: n1.len(),
        second_normalizer_order: n2.len(),
        second_normalizer_normal: n2_normal,
        normal_closure_order: closure.len(),
        h_double_coset_profile: h_profile,
        normalizer_double_coset_profile: n_profile,
        chain_holds: chain_ok,
        consequences,
        consequences_hold: cons_ok,
        failures,
    })
}

/// The three facts expected of coset schemes from chain-satisfying pairs.
#[derive(Debug, Clone, Serialize)]
pub struct SchurianReport {
    pub p: usize,
    pub valencies_in_1_p: bool,
    pub thin_radical_order: usize,
    pub thin_radical_order_is_p: bool,
    pub residue: Vec<usize>,
    pub regular_colors: Vec<usize>,
    pub residue_is_regular_set: bool,
    pub violations: Vec<String>,
}

impl SchurianReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `n_s ∈ {1, p}`, `|O_θ(S)| = p`, and `O^θ(S) = {s | ss*s = {s}}`.
pub fn schurian_consequences(c: &Configuration, p: usize) -> Result<SchurianReport, StructureError> {
    let radical = structure::thin_radical(c)?;
    let residue = structure::thin_residue(c)?;
    let regular: ColorSet = (0..c.rank())
        .filter(|&s| {
            let one = ColorSet::from([s]);
            let sss = c.complex_product(&c.complex_product(&one, &ColorSet::from([c.converse(s)])), &one);
            sss == one
        })
        .collect();
    let valencies_ok = c.valencies().iter().all(|&v| v == 1 || v == p);
    let mut violations = Vec::new();
    if !valencies_ok {
        violations.push("some valency is not in {1, p}".to_string());
    }
    if radical.len() != p {
        violations.push(format!("thin radical has order {} != p = {p}", radical.len()));
    }
    if residue.colors() != &regular {
        violations.push("thin residue differs from {s | ss*s = s}".to_string());
    }
    Ok(SchurianReport {
        p,
        valencies_in_1_p: valencies_ok,
        thin_radical_order: radical.len(),
        thin_radical_order_is_p: radical.len() == p,
        residue: residue.colors().iter().copied().collect(),
        regular_colors: regular.into_iter().collect(),
        residue_is_regular_set: violations.iter().all(|v| !v.starts_with("thin residue")),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::check_lemma_int;

    fn s3() -> PermGroup {
        PermGroup::from_cycles(3, &[&[&[0, 1, 2]], &[&[0, 1]]]).unwrap()
    }

    #[test]
    fn cyclic_is_circulant() {
        assert_eq!(cyclic_scheme(3).matrix().to_ccm(), "3 3\n0 1 2\n2 0 1\n1 2 0\n");
        let one = cyclic_scheme(1);
        assert_eq!((one.degree(), one.rank()), (1, 1));
    }

    #[test]
    fn s3_tables() {
        let (g, elems) = s3().to_cayley().unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(elems[0], vec![0, 1, 2]);
        let c = group_scheme(&g);
        assert_eq!((c.degree(), c.rank()), (6, 6));
        assert!(c.valencies().iter().all(|&v| v == 1));
        // Right-regular orbitals agree color for color after canonicalization.
        assert_eq!(orbital_matrix(&g.right_regular()), c.matrix().canonical());
    }

    #[test]
    fn cayley_validation() {
        assert_eq!(
            CayleyGroup::new(2, vec![0, 1, 1, 1]).unwrap_err(),
            GroupError::NotLatin(1)
        );
        assert_eq!(
            CayleyGroup::new(2, vec![1, 0, 0, 1]).unwrap_err(),
            GroupError::IdentityNotZero
        );
        // Latin square with identity that is not associative (order 5 loop).
        let loop5 = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 4, 0, 1, 3, //
            3, 2, 4, 0, 1, //
            4, 3, 1, 2, 0,
        ];
        assert!(matches!(
            CayleyGroup::new(5, loop5).unwrap_err(),
            GroupError::NotAssociative(..)
        ));
        let text = "3\n0 1 2\n1 2 0\n2 0 1\n";
        let g = CayleyGroup::parse(text).unwrap();
        assert_eq!(g.to_text(), text);
        assert!(matches!(
            CayleyGroup::parse("3\n0 1 2\n1 2 0\n").unwrap_err(),
            GroupError::Parse { .. }
        ));
    }

    #[test]
    fn orbital_examples() {
        let trivial = PermGroup::new(2, vec![]).unwrap();
        assert_eq!(orbitals(&trivial).rank(), 4);
        let z3 = PermGroup::from_cycles(3, &[&[&[0, 1, 2]]]).unwrap();
        assert_eq!(orbitals(&z3).matrix(), cyclic_scheme(3).matrix());
        let c = orbitals(&s3());
        assert!(c.is_homogeneous());
        assert_eq!(c.rank(), 2);
        assert!(check_lemma_int(&c).holds());
    }

    #[test]
    fn wreath_counts() {
        let w3 = wreath_cpcp(3);
        assert_eq!((w3.degree(), w3.rank()), (9, 5));
        let mut v = w3.valencies().to_vec();
        v.sort();
        assert_eq!(v, vec![1, 1, 1, 3, 3]);
        let w2 = wreath_cpcp(2);
        assert_eq!((w2.degree(), w2.rank()), (4, 3));
        let x = cyclic_scheme(4);
        assert_eq!(
            wreath_product(&x, &cyclic_scheme(1)).unwrap().matrix(),
            x.matrix()
        );
    }

    #[test]
    fn coset_actions() {
        let (g, _) = s3().to_cayley().unwrap();
        let regular = coset_action(&g, &[0]).unwrap();
        assert_eq!(regular.action.degree(), 6);
        assert!(regular.faithful);
        let order2 = g.cyclic_subgroups(2)[0].clone();
        let natural = coset_action(&g, &order2).unwrap();
        assert_eq!(natural.action.degree(), 3);
        assert!(natural.faithful);
        assert_eq!(orbitals(&natural.action).rank(), 2);
        assert!(matches!(
            coset_action(&g, &[0, 1]),
            Err(GroupError::NotASubgroup(_)) | Ok(_)
        ));
    }

    #[test]
    fn non_subgroup_rejected() {
        let g = CayleyGroup::from_fn(4, |a, b| (a + b) % 4).unwrap();
        assert!(matches!(
            coset_action(&g, &[0, 1]),
            Err(GroupError::NotASubgroup(_))
        ));
        assert!(matches!(chain_check(&g, &[1, 2], 2), Err(GroupError::NotASubgroup(_))));
    }

    #[test]
    fn abelian_chain_fails() {
        let z27 = CayleyGroup::from_fn(27, |a, b| (a + b) % 27).unwrap();
        for h in [vec![0, 9, 18], vec![0]] {
            let r = chain_check(&z27, &h, 3).unwrap();
            assert!(!r.chain_holds);
            assert_eq!(r.normalizer_order, 27);
        }
    }
}
