//! Closed subsets of homogeneous schemes.
//!
//! Complex products, closures, the thin radical `O_θ(S)`, the thin residue
//! `O^θ(S)`, subschemes `(Ω,S)_{αT}`, factor schemes `(Ω,S)^T`, and
//! recognition of the wreath scheme `C_p ≀ C_p`.

use serde::Serialize;
use thiserror::Error;

use crate::coherent::{build_configuration, Color, ColorMatrix, ColorSet, Configuration};

/// Closed-subset enumeration is refused above this rank.
pub const ENUMERATION_RANK_LIMIT: usize = 20;

/// Bijection search against the constructed wreath product runs up to this degree.
pub const WREATH_CROSSCHECK_LIMIT: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("operation requires a homogeneous scheme, found {0} fibers")]
    NotHomogeneous(usize),
    #[error("color set is empty")]
    EmptySet,
    #[error("colors {0:?} do not form a closed subset")]
    NotClosed(Vec<Color>),
    #[error("thin residue mismatch: generated {generated:?}, minimal thin-quotient subset {minimal:?}")]
    ResidueMismatch {
        generated: Vec<Color>,
        minimal: Vec<Color>,
    },
    #[error("C_{p} wr C_{p} recognition disagrees: structural test {structural}, bijection search {search}")]
    RecognitionConflict {
        p: usize,
        structural: bool,
        search: bool,
    },
}

/// A converse- and product-closed set of colors containing the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ClosedSubset {
    colors: ColorSet,
    valency: usize,
}

impl ClosedSubset {
    pub fn colors(&self) -> &ColorSet {
        &self.colors
    }

    /// `n_T = Σ_{t ∈ T} n_t`.
    pub fn valency(&self) -> usize {
        self.valency
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn contains(&self, c: Color) -> bool {
        self.colors.contains(&c)
    }

    /// Checks closedness of an arbitrary set.
    pub fn new(c: &Configuration, colors: ColorSet) -> Result<Self, StructureError> {
        require_homogeneous(c)?;
        if colors.is_empty() {
            return Err(StructureError::EmptySet);
        }
        let star = c.converse_set(&colors);
        if !c.complex_product(&colors, &star).is_subset(&colors) {
            return Err(StructureError::NotClosed(colors.into_iter().collect()));
        }
        Ok(Self::unchecked(c, colors))
    }

    fn unchecked(c: &Configuration, colors: ColorSet) -> Self {
        let valency = colors.iter().map(|&t| c.valency(t)).sum();
        Self { colors, valency }
    }

    /// The class `αT`, ascending.
    pub fn class_of(&self, c: &Configuration, alpha: usize) -> Vec<usize> {
        (0..c.degree())
            .filter(|&b| self.colors.contains(&c.relation(alpha, b)))
            .collect()
    }

    /// All classes `{αT}`, ordered by least point.
    pub fn classes(&self, c: &Configuration) -> Vec<Vec<usize>> {
        let mut seen = vec![false; c.degree()];
        let mut out = Vec::new();
        for a in 0..c.degree() {
            if !seen[a] {
                let class = self.class_of(c, a);
                for &b in &class {
                    seen[b] = true;
                }
                out.push(class);
            }
        }
        out
    }
}

fn require_homogeneous(c: &Configuration) -> Result<(), StructureError> {
    if c.is_homogeneous() {
        Ok(())
    } else {
        Err(StructureError::NotHomogeneous(c.fiber_count()))
    }
}

/// `TU = {s | c_tu^s > 0 for some t ∈ T, u ∈ U}`.
pub fn complex_product(
    c: &Configuration,
    left: &ColorSet,
    right: &ColorSet,
) -> Result<ColorSet, StructureError> {
    require_homogeneous(c)?;
    Ok(c.complex_product(left, right))
}

/// Smallest closed subset containing `seed`.
pub fn closed_closure(c: &Configuration, seed: &ColorSet) -> Result<ClosedSubset, StructureError> {
    require_homogeneous(c)?;
    if seed.is_empty() {
        return Err(StructureError::EmptySet);
    }
    Ok(closure_unchecked(c, seed))
}

fn closure_unchecked(c: &Configuration, seed: &ColorSet) -> ClosedSubset {
    let mut set = seed.clone();
    set.insert(c.diagonal_color(0));
    loop {
        let mut next = set.clone();
        next.extend(c.converse_set(&set));
        // ascending pairs so the iteration order is fixed
        for &a in &set {
            for &b in &set {
                next.extend(c.product(a, b).iter().map(|&(u, _)| u));
            }
        }
        if next == set {
            return ClosedSubset::unchecked(c, set);
        }
        set = next;
    }
}

/// `O_θ(S) = {s | n_s = 1}`.
pub fn thin_radical(c: &Configuration) -> Result<ClosedSubset, StructureError> {
    require_homogeneous(c)?;
    let thin: ColorSet = (0..c.rank()).filter(|&s| c.is_thin(s)).collect();
    Ok(ClosedSubset::unchecked(c, thin))
}

/// `O^θ(S)`, generated by all `ss*`.
///
/// For rank at most [`ENUMERATION_RANK_LIMIT`] the result is cross-checked
/// against the minimal closed subset with a thin factor scheme.
pub fn thin_residue(c: &Configuration) -> Result<ClosedSubset, StructureError> {
    let generated = thin_residue_generated(c)?;
    if let Some(minimal) = minimal_thin_quotient(c)? {
        if minimal != generated {
            return Err(StructureError::ResidueMismatch {
                generated: generated.colors.iter().copied().collect(),
                minimal: minimal.colors.iter().copied().collect(),
            });
        }
    }
    Ok(generated)
}

/// The residue as the closure of `∪_s ss*`, without the cross-check.
pub fn thin_residue_generated(c: &Configuration) -> Result<ClosedSubset, StructureError> {
    require_homogeneous(c)?;
    let mut seed = ColorSet::new();
    for s in 0..c.rank() {
        seed.extend(c.product(s, c.converse(s)).iter().map(|&(u, _)| u));
    }
    Ok(closure_unchecked(c, &seed))
}

/// Every closed subset, or `None` above the rank guard. Sorted by
/// (valency, colors).
pub fn enumerate_closed_subsets(
    c: &Configuration,
) -> Result<Option<Vec<ClosedSubset>>, StructureError> {
    require_homogeneous(c)?;
    if c.rank() > ENUMERATION_RANK_LIMIT {
        return Ok(None);
    }
    // Every closed subset is the join of the closures of its elements.
    let atoms: Vec<ClosedSubset> = {
        let mut v: Vec<ClosedSubset> = (0..c.rank())
            .map(|s| closure_unchecked(c, &ColorSet::from([s])))
            .collect();
        v.sort_by(|a, b| a.colors.cmp(&b.colors));
        v.dedup();
        v
    };
    let mut all: Vec<ClosedSubset> = atoms.clone();
    let mut frontier = atoms.clone();
    while !frontier.is_empty() {
        let mut fresh = Vec::new();
        for f in &frontier {
            for a in &atoms {
                if a.colors.is_subset(&f.colors) {
                    continue;
                }
                let union: ColorSet = f.colors.union(&a.colors).copied().collect();
                let joined = closure_unchecked(c, &union);
                if !all.contains(&joined) && !fresh.contains(&joined) {
                    fresh.push(joined);
                }
            }
        }
        all.extend(fresh.iter().cloned());
        frontier = fresh;
    }
    all.sort_by(|a, b| (a.valency, &a.colors).cmp(&(b.valency, &b.colors)));
    Ok(Some(all))
}

/// Whether every relation of `S//T` is thin, i.e. `TsT` has valency `n_T`
/// for every `s`.
pub fn has_thin_quotient(c: &Configuration, t: &ClosedSubset) -> bool {
    (0..c.rank()).all(|s| {
        let tst = c.complex_product(&c.complex_product(&t.colors, &ColorSet::from([s])), &t.colors);
        tst.iter().map(|&u| c.valency(u)).sum::<usize>() == t.valency
    })
}

/// The smallest closed subset with thin factor scheme, found by enumeration.
/// `None` above the rank guard.
pub fn minimal_thin_quotient(c: &Configuration) -> Result<Option<ClosedSubset>, StructureError> {
    let Some(all) = enumerate_closed_subsets(c)? else {
        return Ok(None);
    };
    let thin: Vec<&ClosedSubset> = all.iter().filter(|t| has_thin_quotient(c, t)).collect();
    let minimal = thin
        .iter()
        .find(|t| thin.iter().all(|u| t.colors.is_subset(&u.colors)))
        .map(|t| (*t).clone());
    Ok(minimal)
}

/// The scheme induced on `αT`.
pub fn subscheme(
    c: &Configuration,
    alpha: usize,
    t: &ClosedSubset,
) -> Result<Configuration, StructureError> {
    require_homogeneous(c)?;
    let class = t.class_of(c, alpha);
    let m = c.matrix().restrict(&class);
    Ok(build_configuration(m).expect("subschemes of coherent configurations are coherent"))
}

/// The factor scheme `(Ω/T, S//T)`. Classes are numbered by their least point.
pub fn factor_scheme(c: &Configuration, t: &ClosedSubset) -> Result<Configuration, StructureError> {
    require_homogeneous(c)?;
    let classes = t.classes(c);
    let reps: Vec<usize> = classes.iter().map(|cl| cl[0]).collect();
    let m = ColorMatrix::from_labels(reps.len(), |a, b| {
        let s = ColorSet::from([c.relation(reps[a], reps[b])]);
        c.complex_product(&c.complex_product(&t.colors, &s), &t.colors)
    });
    Ok(build_configuration(m).expect("factor schemes of coherent configurations are coherent"))
}

/// Whether `n` is a power of `p` (including `p^0 = 1`).
pub fn is_power_of(mut n: usize, p: usize) -> bool {
    if n == 0 || p < 2 {
        return n == 1;
    }
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Every `|s|` is a power of `p`.
pub fn is_p_scheme(c: &Configuration, p: usize) -> bool {
    (0..c.rank()).all(|s| is_power_of(c.size(s), p))
}

/// Degree `p^2`, `p`-scheme, and not thin.
pub fn is_wreath_cpcp_structural(c: &Configuration, p: usize) -> bool {
    c.is_homogeneous()
        && c.degree() == p * p
        && is_p_scheme(c, p)
        && (0..c.rank()).any(|s| !c.is_thin(s))
}

/// Recognizes `C_p ≀ C_p` as the unique non-thin `p`-scheme of degree `p^2`.
///
/// Up to [`WREATH_CROSSCHECK_LIMIT`] points the structural answer is
/// confirmed by searching for a color-respecting bijection onto the
/// constructed wreath product; disagreement is an error.
pub fn recognize_wreath_cpcp(c: &Configuration, p: usize) -> Result<bool, StructureError> {
    if !c.is_homogeneous() {
        return Ok(false);
    }
    let structural = is_wreath_cpcp_structural(c, p);
    if is_prime(p) && c.degree() == p * p && c.degree() <= WREATH_CROSSCHECK_LIMIT {
        let target = crate::constructions::wreath_cpcp(p);
        let search = isomorphic(c.matrix(), target.matrix());
        if search != structural {
            return Err(StructureError::RecognitionConflict {
                p,
                structural,
                search,
            });
        }
    }
    Ok(structural)
}

/// Backtracking search for a point bijection that maps the color partition
/// of `a` onto that of `b` (colors may be renamed).
pub fn isomorphic(a: &ColorMatrix, b: &ColorMatrix) -> bool {
    if a.n() != b.n() || a.rank() != b.rank() {
        return false;
    }
    let profile = |m: &ColorMatrix| {
        let mut sizes = vec![0usize; m.rank()];
        for x in 0..m.n() {
            for c in m.row(x) {
                sizes[c] += 1;
            }
        }
        sizes.sort_unstable();
        sizes
    };
    if profile(a) != profile(b) {
        return false;
    }
    let n = a.n();
    let mut search = IsoSearch {
        a,
        b,
        map: vec![usize::MAX; n],
        used: vec![false; n],
        fwd: vec![usize::MAX; a.rank()],
        bwd: vec![usize::MAX; b.rank()],
    };
    search.extend(0)
}

struct IsoSearch<'m> {
    a: &'m ColorMatrix,
    b: &'m ColorMatrix,
    map: Vec<usize>,
    used: Vec<bool>,
    fwd: Vec<usize>,
    bwd: Vec<usize>,
}

impl IsoSearch<'_> {
    fn extend(&mut self, x: usize) -> bool {
        let n = self.a.n();
        if x == n {
            return true;
        }
        for y in 0..n {
            if self.used[y] {
                continue;
            }
            let mut bound: Vec<(usize, usize)> = Vec::new();
            let mut ok = self.bind(self.a.get(x, x), self.b.get(y, y), &mut bound);
            for x2 in 0..x {
                if !ok {
                    break;
                }
                let y2 = self.map[x2];
                ok = self.bind(self.a.get(x, x2), self.b.get(y, y2), &mut bound)
                    && self.bind(self.a.get(x2, x), self.b.get(y2, y), &mut bound);
            }
            if ok {
                self.map[x] = y;
                self.used[y] = true;
                if self.extend(x + 1) {
                    return true;
                }
                self.used[y] = false;
                self.map[x] = usize::MAX;
            }
            for (ca, cb) in bound {
                self.fwd[ca] = usize::MAX;
                self.bwd[cb] = usize::MAX;
            }
        }
        false
    }

    fn bind(&mut self, ca: usize, cb: usize, bound: &mut Vec<(usize, usize)>) -> bool {
        match (self.fwd[ca], self.bwd[cb]) {
            (f, _) if f == cb => true,
            (usize::MAX, usize::MAX) => {
                self.fwd[ca] = cb;
                self.bwd[cb] = ca;
                bound.push((ca, cb));
                true
            }
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cyclic_scheme, wreath_cpcp, wreath_product};

    fn set(v: &[Color]) -> ColorSet {
        v.iter().copied().collect()
    }

    #[test]
    fn c3_products() {
        let c = cyclic_scheme(3);
        assert_eq!(complex_product(&c, &set(&[1]), &set(&[1])).unwrap(), set(&[2]));
        assert_eq!(
            complex_product(&c, &set(&[0]), &set(&[1, 2])).unwrap(),
            set(&[1, 2])
        );
    }

    #[test]
    fn c2_wr_c2_product() {
        let c = wreath_cpcp(2);
        let u = (0..3).find(|&s| c.valency(s) == 2).unwrap();
        let thin = (0..3).find(|&s| c.valency(s) == 1 && s != 0).unwrap();
        assert_eq!(
            complex_product(&c, &set(&[u]), &set(&[u])).unwrap(),
            set(&[0, thin])
        );
    }

    #[test]
    fn closures_in_wreath() {
        for p in [2, 3, 5] {
            let c = wreath_cpcp(p);
            assert_eq!(closed_closure(&c, &set(&[0])).unwrap().colors(), &set(&[0]));
            let thin: ColorSet = (0..c.rank()).filter(|&s| c.is_thin(s)).collect();
            assert_eq!(thin.len(), p);
            for &t in thin.iter().filter(|&&t| t != 0) {
                assert_eq!(closed_closure(&c, &set(&[t])).unwrap().colors(), &thin);
            }
            for s in (0..c.rank()).filter(|&s| c.valency(s) == p) {
                assert_eq!(closed_closure(&c, &set(&[s])).unwrap().len(), c.rank());
            }
        }
    }

    #[test]
    fn radical_and_residue() {
        let c9 = cyclic_scheme(9);
        assert_eq!(thin_radical(&c9).unwrap().len(), 9);
        assert_eq!(thin_residue(&c9).unwrap().colors(), &set(&[0]));

        let w = wreath_cpcp(3);
        let rad = thin_radical(&w).unwrap();
        let res = thin_residue(&w).unwrap();
        assert_eq!((rad.len(), rad.valency()), (3, 3));
        assert_eq!(rad, res);
    }

    #[test]
    fn sub_and_factor_of_wreath() {
        let w = wreath_cpcp(3);
        let res = thin_residue(&w).unwrap();
        for alpha in 0..9 {
            let sub = subscheme(&w, alpha, &res).unwrap();
            assert_eq!((sub.degree(), sub.rank()), (3, 3));
            assert!(sub.valencies().iter().all(|&v| v == 1));
        }
        let f = factor_scheme(&w, &res).unwrap();
        assert_eq!((f.degree(), f.rank()), (3, 3));
        assert!(isomorphic(f.matrix(), cyclic_scheme(3).matrix()));

        let whole = ClosedSubset::new(&w, (0..w.rank()).collect()).unwrap();
        assert_eq!(subscheme(&w, 4, &whole).unwrap().matrix(), w.matrix());
        let trivial = ClosedSubset::new(&w, set(&[0])).unwrap();
        assert!(isomorphic(factor_scheme(&w, &trivial).unwrap().matrix(), w.matrix()));
    }

    #[test]
    fn not_closed_is_rejected() {
        let w = wreath_cpcp(3);
        let thin_nonid = (1..w.rank()).find(|&s| w.is_thin(s)).unwrap();
        assert!(matches!(
            ClosedSubset::new(&w, set(&[0, thin_nonid])),
            Err(StructureError::NotClosed(_))
        ));
    }

    #[test]
    fn p_scheme_tests() {
        assert!(is_p_scheme(&wreath_cpcp(3), 3));
        assert!(!is_p_scheme(&cyclic_scheme(6), 3));
        assert!(is_p_scheme(&cyclic_scheme(4), 2));
    }

    #[test]
    fn wreath_recognition() {
        for p in [2, 3, 5] {
            assert!(recognize_wreath_cpcp(&wreath_cpcp(p), p).unwrap());
        }
        assert!(!recognize_wreath_cpcp(&cyclic_scheme(9), 3).unwrap());
        // Thin C_3 x C_3 has degree 9 but is not the wreath scheme.
        let g = crate::constructions::CayleyGroup::from_fn(9, |a, b| {
            (a / 3 + b / 3) % 3 * 3 + (a + b) % 3
        })
        .unwrap();
        let c3c3 = crate::constructions::group_scheme(&g);
        assert!(!recognize_wreath_cpcp(&c3c3, 3).unwrap());
        // Neither is the trivial rank-2 scheme of degree 4.
        let k4 = ColorMatrix::from_labels(4, |a, b| a == b);
        let k4 = build_configuration(k4).unwrap();
        assert!(!recognize_wreath_cpcp(&k4, 2).unwrap());
        // C_2 x C_2 as a thin scheme.
        let v4 = crate::constructions::CayleyGroup::from_fn(4, |a, b| a ^ b).unwrap();
        assert!(!recognize_wreath_cpcp(&crate::constructions::group_scheme(&v4), 2).unwrap());
        let _ = wreath_product(&cyclic_scheme(2), &cyclic_scheme(1)).unwrap();
    }

    #[test]
    fn enumeration_of_wreath_closed_subsets() {
        let w = wreath_cpcp(3);
        let all = enumerate_closed_subsets(&w).unwrap().unwrap();
        let vals: Vec<usize> = all.iter().map(|t| t.valency()).collect();
        assert_eq!(vals, vec![1, 3, 9]);
        for t in &all {
            assert_eq!(9 % t.valency(), 0);
            for cl in t.classes(&w) {
                assert_eq!(cl.len(), t.valency());
            }
        }
    }

    #[test]
    fn powers() {
        assert!(is_power_of(1, 3));
        assert!(is_power_of(27, 3));
        assert!(!is_power_of(18, 3));
        assert!(!is_power_of(0, 3));
        assert!(is_prime(5) && !is_prime(9) && !is_prime(1));
    }
}
