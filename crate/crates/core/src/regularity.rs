//! Regular and non-regular relations of configurations whose fibers are
//! `C_p ≀ C_p`, and the integer identities they satisfy.
//!
//! Everything here reads the intersection tensor or the point matrix; no
//! floating point is involved.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coherent::{build_configuration, Color, ColorSet, Configuration};
use crate::structure::{self, StructureError};

/// A failed identity with the colors and points that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: &'static str,
    pub colors: Vec<Color>,
    pub points: Vec<usize>,
    pub expected: Option<u64>,
    pub actual: Option<u64>,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} failed for colors {:?}", self.check, self.colors)?;
        if !self.points.is_empty() {
            write!(f, " at points {:?}", self.points)?;
        }
        if let (Some(e), Some(a)) = (self.expected, self.actual) {
            write!(f, ": expected {e}, found {a}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegularityError {
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("fiber {0} is not C_p wr C_p")]
    FiberNotWreath(usize),
    #[error("inter-fiber color {color} has valency {valency}, expected {p}")]
    BadInterFiberValency { color: Color, valency: usize, p: usize },
    #[error("{0}")]
    LemmaViolation(Violation),
    #[error("split is mixed: regular {regular:?}, non-regular inter-fiber {non_regular:?}")]
    MixedSplit {
        regular: Vec<Color>,
        non_regular: Vec<Color>,
    },
    #[error("operation needs verdict AllN, found {0:?}")]
    PreconditionNotAllN(Verdict),
    #[error("fibers {i}, {j}, {k} are not distinct valid fibers")]
    InvalidFibers { i: usize, j: usize, k: usize },
    #[error("no non-negative integer vector satisfies the triple identities for p = {p}")]
    NoAdmissibleCoefficients { p: usize },
}

fn violation(check: &'static str, colors: Vec<Color>, points: Vec<usize>) -> RegularityError {
    RegularityError::LemmaViolation(Violation {
        check,
        colors,
        points,
        expected: None,
        actual: None,
    })
}

fn mismatch(check: &'static str, colors: Vec<Color>, expected: u64, actual: u64) -> RegularityError {
    RegularityError::LemmaViolation(Violation {
        check,
        colors,
        points: Vec::new(),
        expected: Some(expected),
        actual: Some(actual),
    })
}

/// A configuration verified to have `C_p ≀ C_p` fibers and inter-fiber
/// valency `p`.
#[derive(Debug, Clone)]
pub struct HypothesisContext<'a> {
    config: &'a Configuration,
    p: usize,
    thin: Vec<ColorSet>,
}

impl<'a> HypothesisContext<'a> {
    pub fn config(&self) -> &'a Configuration {
        self.config
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn m(&self) -> usize {
        self.thin.len()
    }

    pub fn fiber(&self, i: usize) -> &'a [usize] {
        &self.config.fibers()[i]
    }

    /// `O_θ(S_i)`, including the identity.
    pub fn thin_radical(&self, i: usize) -> &ColorSet {
        &self.thin[i]
    }

    /// Composite of two thin colors of the same fiber.
    pub fn thin_mul(&self, t: Color, u: Color) -> Color {
        self.config.product(t, u)[0].0
    }

    /// All colors whose domain and codomain differ, ascending.
    pub fn inter_fiber_colors(&self) -> Vec<Color> {
        let c = self.config;
        (0..c.rank()).filter(|&s| c.domain(s) != c.codomain(s)).collect()
    }

    pub fn is_inter_fiber(&self, s: Color) -> bool {
        self.config.domain(s) != self.config.codomain(s)
    }
}

pub fn check_hypothesis(c: &Configuration, p: usize) -> Result<HypothesisContext<'_>, RegularityError> {
    if !structure::is_prime(p) {
        return Err(RegularityError::NotPrime(p));
    }
    let mut thin = Vec::with_capacity(c.fiber_count());
    for (i, fiber) in c.fibers().iter().enumerate() {
        let sub = build_configuration(c.matrix().restrict(fiber))
            .expect("fiber restriction of a coherent configuration is coherent");
        if !structure::recognize_wreath_cpcp(&sub, p)? {
            return Err(RegularityError::FiberNotWreath(i));
        }
        thin.push(
            c.colors_between(i, i)
                .into_iter()
                .filter(|&s| c.is_thin(s))
                .collect(),
        );
    }
    for s in 0..c.rank() {
        if c.domain(s) != c.codomain(s) && c.valency(s) != p {
            return Err(RegularityError::BadInterFiberValency {
                color: s,
                valency: c.valency(s),
                p,
            });
        }
    }
    Ok(HypothesisContext { config: c, p, thin })
}

/// `ss*s = {s}`.
pub fn is_regular(ctx: &HypothesisContext, s: Color) -> bool {
    let c = ctx.config;
    let one = ColorSet::from([s]);
    let sss = c.complex_product(&c.complex_product(&one, &ColorSet::from([c.converse(s)])), &one);
    sss == one
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    AllRegular,
    AllN,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularitySplit {
    pub regular: ColorSet,
    pub n: ColorSet,
    pub verdict: Verdict,
}

/// First triple `(α, β, γ)` with `(α, β), (β, γ)` in the set but `(α, γ)` not.
fn transitivity_witness(c: &Configuration, set: &ColorSet) -> Option<[usize; 3]> {
    let n = c.degree();
    let member: Vec<bool> = (0..c.rank()).map(|s| set.contains(&s)).collect();
    (0..n).into_par_iter().find_map_first(|a| {
        for b in (0..n).filter(|&b| member[c.relation(a, b)]) {
            for g in (0..n).filter(|&g| member[c.relation(b, g)]) {
                if !member[c.relation(a, g)] {
                    return Some([a, b, g]);
                }
            }
        }
        None
    })
}

fn check_equivalence(c: &Configuration, set: &ColorSet, check: &'static str) -> Result<(), RegularityError> {
    for a in 0..c.degree() {
        if !set.contains(&c.relation(a, a)) {
            return Err(violation(check, vec![c.relation(a, a)], vec![a, a]));
        }
    }
    for &s in set {
        if !set.contains(&c.converse(s)) {
            return Err(violation(check, vec![s, c.converse(s)], Vec::new()));
        }
    }
    if let Some(w) = transitivity_witness(c, set) {
        let colors = vec![c.relation(w[0], w[1]), c.relation(w[1], w[2]), c.relation(w[0], w[2])];
        return Err(violation(check, colors, w.to_vec()));
    }
    Ok(())
}

/// Computes `R` and `N`, checks both unions are equivalence relations point
/// by point, and classifies. A configuration with one fiber has `R = N = S`
/// and is reported as `AllN`.
pub fn split_rn(ctx: &HypothesisContext) -> Result<RegularitySplit, RegularityError> {
    let c = ctx.config;
    let all: ColorSet = (0..c.rank()).collect();
    let regular: ColorSet = (0..c.rank()).filter(|&s| is_regular(ctx, s)).collect();
    let intra: ColorSet = (0..c.rank()).filter(|&s| !ctx.is_inter_fiber(s)).collect();
    let n: ColorSet = intra.union(&all.difference(&regular).copied().collect()).copied().collect();
    check_equivalence(c, &regular, "regular relations form an equivalence")?;
    check_equivalence(c, &n, "N relations form an equivalence")?;
    let verdict = if n == all {
        Verdict::AllN
    } else if regular == all {
        Verdict::AllRegular
    } else {
        return Err(RegularityError::MixedSplit {
            regular: regular.iter().copied().filter(|&s| ctx.is_inter_fiber(s)).collect(),
            non_regular: all.difference(&regular).copied().collect(),
        });
    };
    let meet: ColorSet = regular.intersection(&n).copied().collect();
    if meet != intra {
        return Err(violation(
            "R and N meet in the fiber colors",
            meet.symmetric_difference(&intra).copied().collect(),
            Vec::new(),
        ));
    }
    Ok(RegularitySplit { regular, n, verdict })
}

/// Coefficients of a product restricted to one fiber, grouped as
/// identity, non-identity thin colors, and non-thin colors (each ascending).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientVector {
    pub identity: u32,
    pub thin: Vec<u32>,
    pub non_thin: Vec<u32>,
}

/// `σ_s σ_t` expressed over `S_i`, where `i` is the domain of `s` and the
/// codomain of `t`.
pub fn coefficient_vector(ctx: &HypothesisContext, s: Color, t: Color) -> CoefficientVector {
    let c = ctx.config;
    let i = c.domain(s);
    let one = c.diagonal_color(i);
    let mut out = CoefficientVector {
        identity: c.intersection_number(s, t, one),
        thin: Vec::new(),
        non_thin: Vec::new(),
    };
    for u in c.colors_between(i, i) {
        if u == one {
            continue;
        }
        let x = c.intersection_number(s, t, u);
        if ctx.thin[i].contains(&u) {
            out.thin.push(x);
        } else {
            out.non_thin.push(x);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductProfile {
    pub color: Color,
    pub regular: bool,
    /// `σ_s σ_{s*}` over the domain fiber.
    pub left: CoefficientVector,
    /// `σ_{s*} σ_s` over the codomain fiber.
    pub right: CoefficientVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductReport {
    pub colors_checked: usize,
    pub regular: usize,
    pub non_regular: usize,
    pub profiles: Vec<ProductProfile>,
}

fn expected_vector(ctx: &HypothesisContext, fiber: usize, regular: bool) -> CoefficientVector {
    let p = ctx.p as u32;
    let c = ctx.config;
    let thin = ctx.thin[fiber].len() - 1;
    let non_thin = c.colors_between(fiber, fiber).len() - thin - 1;
    if regular {
        CoefficientVector {
            identity: p,
            thin: vec![p; thin],
            non_thin: vec![0; non_thin],
        }
    } else {
        CoefficientVector {
            identity: p,
            thin: vec![0; thin],
            non_thin: vec![1; non_thin],
        }
    }
}

fn compare_vectors(
    check: &'static str,
    s: Color,
    expected: &CoefficientVector,
    actual: &CoefficientVector,
) -> Result<(), RegularityError> {
    let flat = |v: &CoefficientVector| -> Vec<u32> {
        std::iter::once(v.identity).chain(v.thin.iter().copied()).chain(v.non_thin.iter().copied()).collect()
    };
    for (k, (e, a)) in flat(expected).into_iter().zip(flat(actual)).enumerate() {
        if e != a {
            return Err(mismatch(check, vec![s, k], e as u64, a as u64));
        }
    }
    Ok(())
}

/// Product identities for `σ_s σ_{s*}` and `σ_{s*} σ_s` on every inter-fiber
/// color, plus `O_θ(S_i) s = S_ij` for the non-regular ones.
pub fn verify_products(ctx: &HypothesisContext) -> Result<ProductReport, RegularityError> {
    let c = ctx.config;
    let profiles: Vec<ProductProfile> = ctx
        .inter_fiber_colors()
        .into_par_iter()
        .map(|s| {
            let (i, j) = (c.domain(s), c.codomain(s));
            let sc = c.converse(s);
            let regular = is_regular(ctx, s);
            let left = coefficient_vector(ctx, s, sc);
            let right = coefficient_vector(ctx, sc, s);
            let check = if regular {
                "regular product identity"
            } else {
                "non-regular product identity"
            };
            compare_vectors(check, s, &expected_vector(ctx, i, regular), &left)?;
            compare_vectors(check, sc, &expected_vector(ctx, j, regular), &right)?;
            if !regular {
                let translates = c.complex_product(&ctx.thin[i], &ColorSet::from([s]));
                let sij: ColorSet = c.colors_between(i, j).into_iter().collect();
                if translates != sij {
                    return Err(mismatch(
                        "thin translates of a non-regular color cover S_ij",
                        vec![s],
                        sij.len() as u64,
                        translates.len() as u64,
                    ));
                }
            }
            Ok(ProductProfile {
                color: s,
                regular,
                left,
                right,
            })
        })
        .collect::<Result<_, _>>()?;
    let regular = profiles.iter().filter(|p| p.regular).count();
    Ok(ProductReport {
        colors_checked: profiles.len(),
        regular,
        non_regular: profiles.len() - regular,
        profiles,
    })
}

/// `σ_{s1} σ_{s2} = σ_{s3} Σ_t a_t σ_t` with `s3` the least color of `S_ik`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TripleEntry {
    pub s1: Color,
    pub s2: Color,
    pub s3: Color,
    /// Thin colors of fiber `k`, ascending, aligned with `coefficients`.
    pub thin: Vec<Color>,
    pub coefficients: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TripleReport {
    pub fibers: [usize; 3],
    pub entries: Vec<TripleEntry>,
}

/// All non-negative integer vectors indexed by `Z_p` with `Σa = p`,
/// `Σa² = 2p - 1` and `Σ_t a_t a_{t+d} = p - 1` for every `d ≠ 0`.
pub fn admissible_coefficient_vectors(p: usize) -> Vec<Vec<u32>> {
    fn compositions(rest: u32, len: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if len == 1 {
            cur.push(rest);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in 0..=rest {
            cur.push(x);
            compositions(rest - x, len - 1, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    compositions(p as u32, p, &mut Vec::with_capacity(p), &mut all);
    all.retain(|a| {
        a.iter().map(|&x| x * x).sum::<u32>() == 2 * p as u32 - 1
            && (1..p).all(|d| (0..p).map(|t| a[t] * a[(t + d) % p]).sum::<u32>() == p as u32 - 1)
    });
    all
}

/// Checks the three coefficient identities for every `s1 ∈ S_ij`, `s2 ∈ S_jk`.
pub fn verify_triple_coefficients(
    ctx: &HypothesisContext,
    split: &RegularitySplit,
    i: usize,
    j: usize,
    k: usize,
) -> Result<TripleReport, RegularityError> {
    if split.verdict != Verdict::AllN {
        return Err(RegularityError::PreconditionNotAllN(split.verdict));
    }
    let m = ctx.m();
    if i == j || j == k || i == k || i >= m || j >= m || k >= m {
        return Err(RegularityError::InvalidFibers { i, j, k });
    }
    let p = ctx.p;
    if admissible_coefficient_vectors(p).is_empty() {
        return Err(RegularityError::NoAdmissibleCoefficients { p });
    }
    let c = ctx.config;
    let thin: Vec<Color> = ctx.thin[k].iter().copied().collect();
    let sik = c.colors_between(i, k);
    let s3 = sik[0];
    let translates: Vec<Color> = thin
        .iter()
        .map(|&t| {
            let prod = c.product(s3, t);
            debug_assert_eq!(prod.len(), 1);
            prod[0].0
        })
        .collect();
    let mut sorted = translates.clone();
    sorted.sort_unstable();
    if sorted != sik {
        return Err(violation("thin translates of s3 cover S_ik", vec![s3], Vec::new()));
    }
    let index = |t: Color| thin.binary_search(&t).expect("thin color");
    let mut entries = Vec::new();
    for s1 in c.colors_between(i, j) {
        for s2 in c.colors_between(j, k) {
            let a: Vec<u32> = translates
                .iter()
                .map(|&u| c.intersection_number(s1, s2, u))
                .collect();
            let total: u64 = c.product(s1, s2).iter().map(|&(_, x)| x as u64).sum();
            let sum: u64 = a.iter().map(|&x| x as u64).sum();
            if total != sum {
                return Err(mismatch("product support lies in s3 O_θ(S_k)", vec![s1, s2, s3], total, sum));
            }
            if sum != p as u64 {
                return Err(mismatch("Σ a_t = p", vec![s1, s2, s3], p as u64, sum));
            }
            let sq: u64 = a.iter().map(|&x| (x * x) as u64).sum();
            if sq != 2 * p as u64 - 1 {
                return Err(mismatch("Σ a_t² = 2p - 1", vec![s1, s2, s3], 2 * p as u64 - 1, sq));
            }
            for &u in thin.iter().filter(|&&u| u != c.diagonal_color(k)) {
                let corr: u64 = thin
                    .iter()
                    .map(|&t| (a[index(t)] * a[index(ctx.thin_mul(t, u))]) as u64)
                    .sum();
                if corr != p as u64 - 1 {
                    return Err(mismatch("Σ a_t a_tu = p - 1", vec![s1, s2, s3, u], p as u64 - 1, corr));
                }
            }
            entries.push(TripleEntry {
                s1,
                s2,
                s3,
                thin: thin.clone(),
                coefficients: a,
            });
        }
    }
    Ok(TripleReport {
        fibers: [i, j, k],
        entries,
    })
}
