//! Generalized Hadamard matrices and mutually unbiased bases read off a
//! configuration with `C_p ≀ C_p` fibers whose inter-fiber colors are all
//! non-regular, and the degree bound `|Ω| ≤ p²(p+1)`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coherent::{Color, Configuration};
use crate::cyclotomic::CyclotomicInt;
use crate::regularity::{HypothesisContext, RegularityError, RegularitySplit, TripleEntry, Verdict};
use crate::structure::{self, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HadamardError {
    #[error(transparent)]
    Regularity(#[from] RegularityError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("operation needs verdict AllN, found {0:?}")]
    PreconditionNotAllN(Verdict),
    #[error("invalid frame choice: {0}")]
    InvalidChoice(String),
    #[error("fiber {fiber} has {candidates} thin colors matching the base relation, expected 1")]
    NoUniqueThin { fiber: usize, candidates: usize },
    #[error("frame map is not an automorphism of order p: pair ({beta}, {gamma})")]
    AutomorphismCheckFailed { beta: usize, gamma: usize },
    #[error("color {0} is not an inter-fiber color")]
    NotInterFiber(Color),
    #[error("color {color}: cell ({k}, {l}) has {count} exponents, expected 1")]
    NonUniqueExponent { color: Color, k: usize, l: usize, count: usize },
    #[error("color {color}: cell structure fails at pair ({beta}, {gamma})")]
    CellStructure { color: Color, beta: usize, gamma: usize },
    #[error("color {color}: translate by t^{a} does not shift exponents by {a}")]
    TranslationLaw { color: Color, a: usize },
    #[error("invalid exponent matrix: {0}")]
    InvalidMatrix(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("H(s1)H(s2) is not a multiple of H(s3) at entry ({k}, {l})")]
    NotProportional { k: usize, l: usize },
    #[error("scalar has norm square {found}, expected {p}")]
    WrongNormSquare { found: String, p: usize },
    #[error("bases {a} and {b} are not unbiased at rows ({k}, {l})")]
    UnbiasednessFailed { a: usize, b: usize, k: usize, l: usize },
    #[error("cyclotomic and combinatorial unbiasedness checks disagree for bases {a}, {b} at rows ({k}, {l})")]
    CrossCheckDisagree { a: usize, b: usize, k: usize, l: usize },
    #[error("hypotheses not met: {0}")]
    HypothesesNotMet(String),
    #[error("degree {degree} exceeds bound {bound}")]
    BoundViolated { degree: usize, bound: usize },
    #[error("degree {degree} differs from p^3 = {expected}")]
    CorollaryViolated { degree: usize, expected: usize },
}

/// Optional overrides for the frame choice policy.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrameChoice {
    pub t1: Option<Color>,
    pub base_points: Option<Vec<usize>>,
    /// Per fiber, one point from each thin class, in the order used for rows.
    pub representatives: Option<Vec<Vec<usize>>>,
}

/// Base points, thin elements, class representatives and the induced
/// semiregular automorphism.
#[derive(Debug, Clone)]
pub struct Frame<'a> {
    ctx: HypothesisContext<'a>,
    base: Vec<usize>,
    thin: Vec<Color>,
    reps: Vec<Vec<usize>>,
    automorphism: Vec<usize>,
    /// `points[i][k][a] = α_ik t_i^a`.
    points: Vec<Vec<Vec<usize>>>,
    /// `(k, a)` with `β = α_ik t_i^a`.
    coords: Vec<(usize, usize)>,
    /// `thin_powers[i][a]` is the color of `t_i^a`.
    thin_powers: Vec<Vec<Color>>,
}

impl<'a> Frame<'a> {
    pub fn context(&self) -> &HypothesisContext<'a> {
        &self.ctx
    }

    pub fn base_points(&self) -> &[usize] {
        &self.base
    }

    pub fn thin_elements(&self) -> &[Color] {
        &self.thin
    }

    pub fn representatives(&self) -> &[Vec<usize>] {
        &self.reps
    }

    pub fn automorphism(&self) -> &[usize] {
        &self.automorphism
    }

    pub fn coordinates(&self, point: usize) -> (usize, usize) {
        self.coords[point]
    }

    /// Exponent `e` with `t = t_i^e`, for a thin color of fiber `i`.
    pub fn thin_exponent(&self, fiber: usize, t: Color) -> Option<usize> {
        self.thin_powers[fiber].iter().position(|&x| x == t)
    }
}

pub fn build_frame<'a>(
    ctx: &HypothesisContext<'a>,
    split: &RegularitySplit,
    choice: &FrameChoice,
) -> Result<Frame<'a>, HadamardError> {
    if split.verdict != Verdict::AllN {
        return Err(HadamardError::PreconditionNotAllN(split.verdict));
    }
    let c = ctx.config();
    let (p, m) = (ctx.p(), ctx.m());
    let bad = |msg: String| HadamardError::InvalidChoice(msg);

    let base = match &choice.base_points {
        Some(b) => {
            if b.len() != m || b.iter().enumerate().any(|(i, &x)| x >= c.degree() || c.fiber_of(x) != i) {
                return Err(bad(format!("base points {b:?} are not one point per fiber")));
            }
            b.clone()
        }
        None => (0..m).map(|i| ctx.fiber(i)[0]).collect(),
    };

    let one0 = c.diagonal_color(0);
    let t1 = match choice.t1 {
        Some(t) if t != one0 && ctx.thin_radical(0).contains(&t) => t,
        Some(t) => return Err(bad(format!("color {t} is not a non-identity thin color of fiber 0"))),
        None => *ctx
            .thin_radical(0)
            .iter()
            .find(|&&t| t != one0)
            .expect("C_p wr C_p has non-identity thin colors"),
    };

    let image = |a: usize, t: Color| c.thin_image(a, t).expect("thin color of the point's fiber");
    let moved0 = image(base[0], t1);
    let mut thin = vec![t1];
    for i in 1..m {
        let target = c.relation(base[0], base[i]);
        let candidates: Vec<Color> = ctx
            .thin_radical(i)
            .iter()
            .copied()
            .filter(|&t| c.relation(moved0, image(base[i], t)) == target)
            .collect();
        if candidates.len() != 1 {
            return Err(HadamardError::NoUniqueThin {
                fiber: i,
                candidates: candidates.len(),
            });
        }
        thin.push(candidates[0]);
    }

    let n = c.degree();
    let automorphism: Vec<usize> = (0..n).map(|b| image(b, thin[c.fiber_of(b)])).collect();
    let g = &automorphism;
    let broken = (0..n).into_par_iter().find_map_first(|b| {
        (0..n)
            .find(|&x| c.relation(g[b], g[x]) != c.relation(b, x))
            .map(|x| (b, x))
    });
    if let Some((beta, gamma)) = broken {
        return Err(HadamardError::AutomorphismCheckFailed { beta, gamma });
    }
    for b in 0..n {
        let mut x = b;
        for step in 1..=p {
            x = g[x];
            if (x == b) != (step == p) {
                return Err(HadamardError::AutomorphismCheckFailed { beta: b, gamma: x });
            }
        }
    }

    let mut reps = Vec::with_capacity(m);
    for i in 0..m {
        let fiber = ctx.fiber(i);
        let class_key = |b: usize| {
            let mut x = b;
            let mut least = b;
            for _ in 0..p {
                x = g[x];
                least = least.min(x);
            }
            least
        };
        let mut keys: Vec<usize> = fiber.iter().map(|&b| class_key(b)).collect();
        keys.sort_unstable();
        keys.dedup();
        let r = match &choice.representatives {
            Some(all) => {
                let r = all.get(i).cloned().unwrap_or_default();
                let mut got: Vec<usize> = r
                    .iter()
                    .filter(|&&b| b < n && c.fiber_of(b) == i)
                    .map(|&b| class_key(b))
                    .collect();
                got.sort_unstable();
                if got != keys {
                    return Err(bad(format!("{r:?} is not a complete set of class representatives of fiber {i}")));
                }
                r
            }
            None => keys,
        };
        reps.push(r);
    }

    let mut points = Vec::with_capacity(m);
    let mut coords = vec![(0, 0); n];
    for r in &reps {
        let mut per = Vec::with_capacity(r.len());
        for (k, &a0) in r.iter().enumerate() {
            let mut orbit = Vec::with_capacity(p);
            let mut x = a0;
            for a in 0..p {
                coords[x] = (k, a);
                orbit.push(x);
                x = g[x];
            }
            per.push(orbit);
        }
        points.push(per);
    }
    let thin_powers = (0..m)
        .map(|i| {
            let mut x = base[i];
            (0..p)
                .map(|_| {
                    let t = c.relation(base[i], x);
                    x = g[x];
                    t
                })
                .collect()
        })
        .collect();

    Ok(Frame {
        ctx: ctx.clone(),
        base,
        thin,
        reps,
        automorphism,
        points,
        coords,
        thin_powers,
    })
}

/// A `p x p` matrix over `Z_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentMatrix {
    pub p: usize,
    pub entries: Vec<Vec<usize>>,
    pub source: Option<Color>,
}

impl ExponentMatrix {
    pub fn new(p: usize, entries: Vec<Vec<usize>>) -> Result<Self, HadamardError> {
        if p == 0 || entries.len() != p || entries.iter().any(|r| r.len() != p) {
            return Err(HadamardError::InvalidMatrix(format!("expected a {p} x {p} matrix")));
        }
        if entries.iter().flatten().any(|&h| h >= p) {
            return Err(HadamardError::InvalidMatrix(format!("entries must lie in 0..{p}")));
        }
        Ok(Self {
            p,
            entries,
            source: None,
        })
    }

    /// Text form: a line with `p`, then `p` rows of `p` residues.
    pub fn parse(text: &str) -> Result<Self, HadamardError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let invalid = |m: &str| HadamardError::InvalidMatrix(m.to_string());
        let p: usize = lines
            .next()
            .ok_or_else(|| invalid("missing header"))?
            .parse()
            .map_err(|_| invalid("malformed header"))?;
        let entries = lines
            .map(|l| {
                l.split_whitespace()
                    .map(|x| x.parse().map_err(|_| invalid(&format!("bad entry {x:?}"))))
                    .collect::<Result<Vec<usize>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(p, entries)
    }

    /// Entries `ξ^{h_kl}`.
    pub fn to_cyclotomic(&self) -> Vec<Vec<CyclotomicInt>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|&h| CyclotomicInt::root(self.p, h as i64)).collect())
            .collect()
    }
}

/// Distinct rows differ in every residue exactly once.
pub fn is_generalized_hadamard(m: &ExponentMatrix) -> bool {
    let p = m.p;
    (0..p).all(|a| {
        (a + 1..p).all(|b| {
            let mut seen = vec![false; p];
            (0..p).all(|l| {
                let d = (m.entries[a][l] + p - m.entries[b][l]) % p;
                !std::mem::replace(&mut seen[d], true)
            })
        })
    })
}

fn raw_exponents(frame: &Frame, s: Color) -> Result<Vec<Vec<usize>>, HadamardError> {
    let c = frame.ctx.config();
    let (i, j) = (c.domain(s), c.codomain(s));
    if i == j {
        return Err(HadamardError::NotInterFiber(s));
    }
    let p = frame.ctx.p();
    let mut out = vec![vec![0; p]; p];
    for k in 0..p {
        let a = frame.points[i][k][0];
        for l in 0..p {
            let hits: Vec<usize> = (0..p)
                .filter(|&h| c.relation(a, frame.points[j][l][h]) == s)
                .collect();
            if hits.len() != 1 {
                return Err(HadamardError::NonUniqueExponent {
                    color: s,
                    k,
                    l,
                    count: hits.len(),
                });
            }
            out[k][l] = hits[0];
        }
    }
    Ok(out)
}

/// `h(s)`, with the translation law and the cell structure checked on every
/// point pair of `Ω_i x Ω_j`.
pub fn exponent_matrix(frame: &Frame, s: Color) -> Result<ExponentMatrix, HadamardError> {
    let c = frame.ctx.config();
    let h = raw_exponents(frame, s)?;
    let (i, j) = (c.domain(s), c.codomain(s));
    let p = frame.ctx.p();
    for &b in frame.ctx.fiber(i) {
        let (k, a) = frame.coords[b];
        for &g in frame.ctx.fiber(j) {
            let (l, bb) = frame.coords[g];
            if (c.relation(b, g) == s) != ((bb + p - a) % p == h[k][l]) {
                return Err(HadamardError::CellStructure {
                    color: s,
                    beta: b,
                    gamma: g,
                });
            }
        }
    }
    for a in 1..p {
        let translate = c.product(s, frame.thin_powers[j][a]);
        if translate.len() != 1 {
            return Err(HadamardError::TranslationLaw { color: s, a });
        }
        let shifted = raw_exponents(frame, translate[0].0)?;
        if (0..p).any(|k| (0..p).any(|l| shifted[k][l] != (h[k][l] + a) % p)) {
            return Err(HadamardError::TranslationLaw { color: s, a });
        }
    }
    Ok(ExponentMatrix {
        p,
        entries: h,
        source: Some(s),
    })
}

/// `α` with `H(s1)H(s2) = α H(s3)`, verified entry-wise, with `α conj(α) = p`.
pub fn product_scalar(frame: &Frame, s1: Color, s2: Color, s3: Color) -> Result<CyclotomicInt, HadamardError> {
    let c = frame.ctx.config();
    let (i, j, k) = (c.domain(s1), c.codomain(s1), c.codomain(s2));
    if c.domain(s2) != j || c.domain(s3) != i || c.codomain(s3) != k || i == j || j == k || i == k {
        return Err(HadamardError::Precondition(format!(
            "colors {s1}, {s2}, {s3} do not lie in S_ij, S_jk, S_ik for distinct fibers"
        )));
    }
    let p = frame.ctx.p();
    let (h1, h2, h3) = (
        exponent_matrix(frame, s1)?,
        exponent_matrix(frame, s2)?,
        exponent_matrix(frame, s3)?,
    );
    let entry = |a: usize, b: usize| {
        let mut g = vec![0i64; p];
        for l in 0..p {
            g[(h1.entries[a][l] + h2.entries[l][b]) % p] += 1;
        }
        g
    };
    let g00 = entry(0, 0);
    let shift = h3.entries[0][0];
    let alpha_ring: Vec<i64> = (0..p).map(|e| g00[(e + shift) % p]).collect();
    let alpha = CyclotomicInt::from_group_ring(p, &alpha_ring);
    for a in 0..p {
        for b in 0..p {
            let lhs = CyclotomicInt::from_group_ring(p, &entry(a, b));
            if lhs != &alpha * &CyclotomicInt::root(p, h3.entries[a][b] as i64) {
                return Err(HadamardError::NotProportional { k: a, l: b });
            }
        }
    }
    let norm = alpha.norm_square();
    if norm.as_integer() != Some(p as i64) {
        return Err(HadamardError::WrongNormSquare {
            found: norm.to_string(),
            p,
        });
    }
    Ok(alpha)
}

/// `Σ_t a_t ξ^{e(t)}` where `t = t_k^{e(t)}`, from tensor coefficients.
pub fn scalar_from_coefficients(frame: &Frame, entry: &TripleEntry) -> CyclotomicInt {
    let c = frame.ctx.config();
    let k = c.codomain(entry.s3);
    let p = frame.ctx.p();
    let mut g = vec![0i64; p];
    for (&t, &a) in entry.thin.iter().zip(&entry.coefficients) {
        let e = frame.thin_exponent(k, t).expect("thin color of fiber k");
        g[e] += a as i64;
    }
    CyclotomicInt::from_group_ring(p, &g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MubBasis {
    /// 1 for the standard basis.
    pub index: usize,
    /// `s_i = r(α_1, α_i)`; `None` for the standard basis.
    pub source: Option<Color>,
    pub exponents: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnbiasedPair {
    pub a: usize,
    pub b: usize,
    pub unbiased: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MubReport {
    pub p: usize,
    pub m: usize,
    pub bases: Vec<MubBasis>,
    pub orthogonal: Vec<bool>,
    pub pairs: Vec<UnbiasedPair>,
    pub bound: usize,
    pub bound_holds: bool,
}

/// `|⟨u, v⟩|² = p` where `u, v` have entries `ξ^x`, `ξ^y`: exactly via
/// cyclotomic norm, and combinatorially via the difference distribution.
fn unbiased_row_pair(p: usize, x: &[usize], y: &[usize]) -> (bool, bool) {
    let mut counts = vec![0i64; p];
    for (&a, &b) in x.iter().zip(y) {
        counts[(a + p - b) % p] += 1;
    }
    let z = CyclotomicInt::from_group_ring(p, &counts);
    let exact = z.norm_square().as_integer() == Some(p as i64);
    let auto = |d: usize| -> i64 { (0..p).map(|e| counts[e] * counts[(e + d) % p]).sum() };
    let a0 = auto(0);
    let combinatorial = (1..p).all(|d| a0 - auto(d) == p as i64);
    (exact, combinatorial)
}

fn rows_orthogonal(m: &ExponentMatrix) -> bool {
    let p = m.p;
    let rows = m.to_cyclotomic();
    (0..p).all(|k| {
        (0..p).all(|l| {
            let ip = (0..p).fold(CyclotomicInt::zero(p), |acc, x| acc + &rows[k][x] * &rows[l][x].conj());
            if k == l {
                ip.as_integer() == Some(p as i64)
            } else {
                ip.is_zero()
            }
        })
    })
}

/// The standard basis together with the rows of `H(s_i)`, `s_i = r(α_1, α_i)`.
pub fn mub_family(frame: &Frame) -> Result<MubReport, HadamardError> {
    let ctx = &frame.ctx;
    let c = ctx.config();
    let (p, m) = (ctx.p(), ctx.m());
    let mut bases = vec![MubBasis {
        index: 1,
        source: None,
        exponents: None,
    }];
    let mut matrices = Vec::new();
    for i in 1..m {
        let s = c.relation(frame.base[0], frame.base[i]);
        let h = exponent_matrix(frame, s)?;
        bases.push(MubBasis {
            index: i + 1,
            source: Some(s),
            exponents: Some(h.entries.clone()),
        });
        matrices.push(h);
    }
    let mut orthogonal = vec![true];
    for (x, h) in matrices.iter().enumerate() {
        let unimodular = h
            .to_cyclotomic()
            .iter()
            .flatten()
            .all(|z| z.norm_square().as_integer() == Some(1));
        let ok = unimodular && rows_orthogonal(h);
        if ok != is_generalized_hadamard(h) {
            return Err(HadamardError::CrossCheckDisagree { a: 1, b: x + 2, k: 0, l: 0 });
        }
        if !ok {
            return Err(HadamardError::UnbiasednessFailed { a: 1, b: x + 2, k: 0, l: 0 });
        }
        orthogonal.push(ok);
    }
    let mut pairs: Vec<UnbiasedPair> = (2..=m).map(|b| UnbiasedPair { a: 1, b, unbiased: true }).collect();
    for a in 0..matrices.len() {
        for b in a + 1..matrices.len() {
            for k in 0..p {
                for l in 0..p {
                    let (exact, comb) = unbiased_row_pair(p, &matrices[a].entries[k], &matrices[b].entries[l]);
                    let (ia, ib) = (a + 2, b + 2);
                    if exact != comb {
                        return Err(HadamardError::CrossCheckDisagree { a: ia, b: ib, k, l });
                    }
                    if !exact {
                        return Err(HadamardError::UnbiasednessFailed { a: ia, b: ib, k, l });
                    }
                }
            }
            pairs.push(UnbiasedPair {
                a: a + 2,
                b: b + 2,
                unbiased: true,
            });
        }
    }
    let bound_holds = m <= p + 1;
    if !bound_holds {
        return Err(HadamardError::BoundViolated {
            degree: c.degree(),
            bound: p * p * (p + 1),
        });
    }
    Ok(MubReport {
        p,
        m,
        bases,
        orthogonal,
        pairs,
        bound: p + 1,
        bound_holds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundVerdict {
    pub degree: usize,
    pub p: usize,
    pub bound: usize,
    pub thin_radical_valency: usize,
    pub thin_residue_valency: usize,
    pub corollary_applies: bool,
    pub corollary_holds: bool,
}

/// Checks `|Ω| ≤ p²(p+1)` for a homogeneous scheme with
/// `O_θ(S) < O^θ(S)`, `n_s ∈ {1, p}` and `n_{O^θ(S)} = p²`, and `|Ω| = p³`
/// when the scheme is a `p`-scheme with `O^θ(S) ≅ C_p ≀ C_p` and `n_s = p`
/// off the residue.
pub fn bound_check(c: &Configuration, p: usize) -> Result<BoundVerdict, HadamardError> {
    if !c.is_homogeneous() {
        return Err(StructureError::NotHomogeneous(c.fiber_count()).into());
    }
    let not_met = |m: String| Err(HadamardError::HypothesesNotMet(m));
    if !structure::is_prime(p) {
        return not_met(format!("{p} is not prime"));
    }
    let radical = structure::thin_radical(c)?;
    let residue = structure::thin_residue(c)?;
    if !radical.colors().is_subset(residue.colors()) || radical == residue {
        return not_met("thin radical is not a proper subset of the thin residue".into());
    }
    if let Some(s) = (0..c.rank()).find(|&s| c.valency(s) != 1 && c.valency(s) != p) {
        return not_met(format!("color {s} has valency {}", c.valency(s)));
    }
    if residue.valency() != p * p {
        return not_met(format!("thin residue has valency {}, expected {}", residue.valency(), p * p));
    }
    let bound = p * p * (p + 1);
    if c.degree() > bound {
        return Err(HadamardError::BoundViolated {
            degree: c.degree(),
            bound,
        });
    }
    let sub = structure::subscheme(c, 0, &residue)?;
    let corollary_applies = structure::is_p_scheme(c, p)
        && structure::recognize_wreath_cpcp(&sub, p)?
        && (0..c.rank()).all(|s| residue.contains(s) || c.valency(s) == p);
    let corollary_holds = c.degree() == p * p * p;
    if corollary_applies && !corollary_holds {
        return Err(HadamardError::CorollaryViolated {
            degree: c.degree(),
            expected: p * p * p,
        });
    }
    Ok(BoundVerdict {
        degree: c.degree(),
        p,
        bound,
        thin_radical_valency: radical.valency(),
        thin_residue_valency: residue.valency(),
        corollary_applies,
        corollary_holds,
    })
}
