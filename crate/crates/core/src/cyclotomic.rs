//! Exact arithmetic in `Z[ξ_p]` for a prime `p`.
//!
//! Elements are stored in the power basis `1, ξ, ..., ξ^{p-2}`; products are
//! formed in `Z[x]/(x^p - 1)` and reduced with `ξ^{p-1} = -(1 + ... + ξ^{p-2})`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CyclotomicInt {
    p: usize,
    coefficients: Vec<i64>,
}

impl CyclotomicInt {
    /// Coefficients over `1, ξ, ..., ξ^{p-2}`.
    pub fn new(p: usize, coefficients: Vec<i64>) -> Self {
        assert!(p >= 2, "p must be at least 2");
        assert_eq!(coefficients.len(), p - 1, "expected {} coefficients", p - 1);
        Self { p, coefficients }
    }

    pub fn zero(p: usize) -> Self {
        Self::new(p, vec![0; p - 1])
    }

    pub fn from_int(p: usize, k: i64) -> Self {
        let mut c = vec![0; p - 1];
        c[0] = k;
        Self::new(p, c)
    }

    pub fn one(p: usize) -> Self {
        Self::from_int(p, 1)
    }

    /// `ξ^e`.
    pub fn root(p: usize, e: i64) -> Self {
        let mut g = vec![0; p];
        g[e.rem_euclid(p as i64) as usize] = 1;
        Self::from_group_ring(p, &g)
    }

    /// `Σ_e g_e ξ^e` for `e` in `0..p`.
    pub fn from_group_ring(p: usize, g: &[i64]) -> Self {
        assert_eq!(g.len(), p, "expected {p} group-ring coefficients");
        let top = g[p - 1];
        Self::new(p, g[..p - 1].iter().map(|&x| x - top).collect())
    }

    fn group_ring(&self) -> Vec<i64> {
        let mut g = self.coefficients.clone();
        g.push(0);
        g
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0)
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Option<i64> {
        self.coefficients[1..]
            .iter()
            .all(|&c| c == 0)
            .then_some(self.coefficients[0])
    }

    /// Complex conjugate: `ξ ↦ ξ^{-1}`.
    pub fn conj(&self) -> Self {
        let p = self.p;
        let g = self.group_ring();
        let h: Vec<i64> = (0..p).map(|e| g[(p - e) % p]).collect();
        Self::from_group_ring(p, &h)
    }

    /// `z · conj(z)`.
    pub fn norm_square(&self) -> Self {
        self * &self.conj()
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixed cyclotomic fields");
    }
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, &c) in self.coefficients.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            match (first, c < 0) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, _) => write!(f, " {sign} ")?,
            }
            first = false;
            let a = c.unsigned_abs();
            match e {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    write!(f, "ξ")?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn add(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        self.same_field(rhs);
        let c = self.coefficients.iter().zip(&rhs.coefficients).map(|(a, b)| a + b).collect();
        CyclotomicInt::new(self.p, c)
    }
}

impl Sub for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn sub(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        self + &(-rhs)
    }
}

impl Neg for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn neg(self) -> CyclotomicInt {
        CyclotomicInt::new(self.p, self.coefficients.iter().map(|c| -c).collect())
    }
}

impl Mul for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn mul(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        self.same_field(rhs);
        let p = self.p;
        let (a, b) = (self.group_ring(), rhs.group_ring());
        let mut g = vec![0i64; p];
        for (i, &x) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
            for (j, &y) in b.iter().enumerate() {
                g[(i + j) % p] += x * y;
            }
        }
        CyclotomicInt::from_group_ring(p, &g)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for CyclotomicInt {
            type Output = CyclotomicInt;
            fn $m(self, rhs: CyclotomicInt) -> CyclotomicInt {
                (&self).$m(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for CyclotomicInt {
    type Output = CyclotomicInt;
    fn neg(self) -> CyclotomicInt {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_plus_xi() {
        let a = CyclotomicInt::new(3, vec![2, 1]);
        assert_eq!(a.conj(), CyclotomicInt::from_group_ring(3, &[2, 0, 1]));
        assert_eq!(a.norm_square().as_integer(), Some(3));
        assert_eq!(a.to_string(), "2 + ξ");
    }

    #[test]
    fn roots_sum_to_zero() {
        for p in [2, 3, 5, 7] {
            let s = (0..p as i64).fold(CyclotomicInt::zero(p), |acc, e| acc + CyclotomicInt::root(p, e));
            assert!(s.is_zero());
            assert_eq!(CyclotomicInt::root(p, p as i64), CyclotomicInt::one(p));
            assert_eq!(CyclotomicInt::root(p, 1).conj(), CyclotomicInt::root(p, -1));
        }
    }

    #[test]
    fn p_two_is_integers() {
        assert_eq!(CyclotomicInt::root(2, 1).as_integer(), Some(-1));
        let x = CyclotomicInt::from_int(2, 1) + CyclotomicInt::root(2, 1);
        assert!(x.is_zero());
    }

    #[test]
    fn display() {
        assert_eq!(CyclotomicInt::zero(5).to_string(), "0");
        assert_eq!(CyclotomicInt::new(5, vec![0, -1, 3, 0]).to_string(), "-ξ + 3ξ^2");
        assert_eq!(CyclotomicInt::new(5, vec![-2, 0, 0, -1]).to_string(), "-2 - ξ^3");
    }
}
