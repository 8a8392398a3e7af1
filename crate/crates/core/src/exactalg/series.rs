use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

use super::{ExactError, Rat};

/// Integer numerators of `cs` over their common denominator.
fn scaled_numerators(cs: &[Rat]) -> (Vec<BigInt>, BigInt) {
    let den = Rat::denominator_lcm(cs);
    let nums = cs
        .iter()
        .map(|c| {
            if c.is_zero() {
                BigInt::zero()
            } else {
                c.numer() * (&den / c.denom())
            }
        })
        .collect();
    (nums, den)
}

/// A power series in `t` known modulo `t^trunc`.
///
/// `coeffs[i]` is the coefficient of `t^i`; the length of `coeffs` is the
/// truncation order, i.e. the first exponent whose coefficient is unknown.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TSeries {
    coeffs: Vec<Rat>,
}

impl TSeries {
    pub fn new(coeffs: Vec<Rat>) -> TSeries {
        assert!(!coeffs.is_empty(), "truncation order must be positive");
        TSeries { coeffs }
    }

    pub fn zero(trunc: usize) -> TSeries {
        TSeries::new(vec![Rat::zero(); trunc])
    }

    pub fn one(trunc: usize) -> TSeries {
        TSeries::monomial(Rat::one(), 0, trunc)
    }

    /// `c * t^k mod t^trunc`.
    pub fn monomial(c: Rat, k: usize, trunc: usize) -> TSeries {
        let mut s = TSeries::zero(trunc);
        if k < trunc {
            s.coeffs[k] = c;
        }
        s
    }

    /// Builds a series from `(exponent, coefficient)` pairs; terms at or beyond
    /// `trunc` are dropped.
    pub fn from_terms<I>(terms: I, trunc: usize) -> TSeries
    where
        I: IntoIterator<Item = (usize, Rat)>,
    {
        let mut s = TSeries::zero(trunc);
        for (k, c) in terms {
            if k < trunc {
                s.coeffs[k] += &c;
            }
        }
        s
    }

    pub fn from_ints(coeffs: &[i64]) -> TSeries {
        TSeries::new(coeffs.iter().map(|&c| Rat::int(c)).collect())
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rat> {
        self.coeffs
    }

    /// Coefficient of `t^i`, or `None` when `i` is at or beyond the truncation.
    pub fn get(&self, i: usize) -> Option<&Rat> {
        self.coeffs.get(i)
    }

    pub fn coeff(&self, i: usize) -> &Rat {
        &self.coeffs[i]
    }

    /// Least exponent with a nonzero coefficient; `None` when every stored
    /// coefficient vanishes (the order is then at least `trunc`).
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.order().is_none()
    }

    /// Iterator over `(exponent, coefficient)` of the nonzero stored terms.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rat)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn truncate(&self, trunc: usize) -> TSeries {
        assert!(
            trunc >= 1 && trunc <= self.trunc(),
            "cannot raise precision"
        );
        TSeries::new(self.coeffs[..trunc].to_vec())
    }

    /// Same series with extra zero coefficients; only sound when the caller
    /// knows the omitted terms vanish (exact polynomial data).
    pub fn pad_exact(&self, trunc: usize) -> TSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(trunc.max(1), Rat::zero());
        coeffs.truncate(trunc.max(1));
        TSeries::new(coeffs)
    }

    pub fn scale(&self, c: &Rat) -> TSeries {
        TSeries::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplication by `t^k`; the result is known to `trunc + k`.
    pub fn shift(&self, k: usize) -> TSeries {
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        TSeries::new(coeffs)
    }

    /// Division by `t^k`; requires the first `k` coefficients to vanish.
    pub fn unshift(&self, k: usize) -> Option<TSeries> {
        if k >= self.trunc() || self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(TSeries::new(self.coeffs[k..].to_vec()))
    }

    pub fn add(&self, other: &TSeries) -> TSeries {
        let n = self.trunc().min(other.trunc());
        TSeries::new((0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect())
    }

    pub fn sub(&self, other: &TSeries) -> TSeries {
        let n = self.trunc().min(other.trunc());
        TSeries::new((0..n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect())
    }

    /// Product modulo `t^min(trunc)`.
    pub fn mul(&self, other: &TSeries) -> TSeries {
        let n = self.trunc().min(other.trunc());
        self.mul_to(other, n)
    }

    /// Product computed to `n` coefficients, treating both operands as exact
    /// beyond their stored coefficients. Callers are responsible for `n`
    /// being a provable bound.
    pub(crate) fn mul_to(&self, other: &TSeries, n: usize) -> TSeries {
        // Convolve integer numerators over common denominators; normalizing
        // once per output coefficient is far cheaper than per product.
        let (na, da) = scaled_numerators(&self.coeffs[..self.trunc().min(n)]);
        let (nb, db) = scaled_numerators(&other.coeffs[..other.trunc().min(n)]);
        let den = &da * &db;
        let mut acc = vec![BigInt::zero(); n];
        for (i, a) in na.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in nb.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    acc[i + j] += a * b;
                }
            }
        }
        TSeries::new(
            acc.into_iter()
                .map(|c| {
                    if c.is_zero() {
                        Rat::zero()
                    } else {
                        Rat::new(c, den.clone())
                    }
                })
                .collect(),
        )
    }

    pub fn pow(&self, k: u32) -> TSeries {
        let mut acc = TSeries::one(self.trunc());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Inverse of a unit (nonzero constant term).
    pub fn inverse(&self) -> Result<TSeries, ExactError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(ExactError::NonUnitInput(Rat::zero()));
        }
        let inv0 = c0.recip();
        let n = self.trunc();
        let mut out = vec![Rat::zero(); n];
        out[0] = inv0.clone();
        for k in 1..n {
            let mut acc = Rat::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &(&self.coeffs[j] * &out[k - j]);
                }
            }
            out[k] = -(acc * &inv0);
        }
        Ok(TSeries::new(out))
    }

    /// The `e`-th root `r` with `r(0) = 1` of a series with constant term 1,
    /// so that `r^e = self mod t^trunc`.
    ///
    /// Uses the power recurrence `n r_n = sum_{k=1..n} ((a+1)k - n) u_k r_{n-k}`
    /// for `r = u^a`, `a = 1/e`, which is exact over the rationals.
    pub fn eth_root(&self, e: u32) -> Result<TSeries, ExactError> {
        assert!(e >= 1, "root index must be positive");
        if !self.coeffs[0].is_one() {
            return Err(ExactError::NonUnitInput(self.coeffs[0].clone()));
        }
        let n = self.trunc();
        let alpha_plus_one = Rat::new(1, e as i64) + Rat::one();
        let mut r = vec![Rat::zero(); n];
        r[0] = Rat::one();
        for m in 1..n {
            let mut acc = Rat::zero();
            for k in 1..=m {
                let u = &self.coeffs[k];
                if u.is_zero() {
                    continue;
                }
                let w = &alpha_plus_one * &Rat::int(k as i64) - Rat::int(m as i64);
                acc += &(w * u * &r[m - k]);
            }
            r[m] = acc * Rat::new(1, m as i64);
        }
        Ok(TSeries::new(r))
    }

    /// Compositional inverse of a series of order exactly one, modulo the same
    /// truncation: `self(g(t)) = t`.
    pub fn reverse(&self) -> Result<TSeries, ExactError> {
        if self.order() != Some(1) {
            return Err(ExactError::BadOrder {
                expected: "exactly 1",
                found: self.order(),
            });
        }
        let n = self.trunc();
        let mut g = vec![Rat::zero(); n];
        if n <= 1 {
            return Ok(TSeries::new(g));
        }
        // Lagrange inversion: g_k = [t^(k-1)] (t / f)^k / k.
        let h = self.unshift(1).expect("order one").inverse()?;
        let mut power = h.clone();
        for k in 1..n {
            g[k] = power.coeffs[k - 1].clone() * Rat::new(1, k as i64);
            if k + 1 < n {
                power = power.mul(&h);
            }
        }
        Ok(TSeries::new(g))
    }

    /// Composition `self(g(t))` for `g` of positive order.
    ///
    /// With `k = ord(g)`, `m` the least positive exponent carrying a nonzero
    /// coefficient of `self`, the result is known modulo
    /// `t^min(k * self.trunc, g.trunc + k * (m - 1))` (only the first bound
    /// applies when `self` has no such exponent).
    pub fn compose(&self, g: &TSeries) -> Result<TSeries, ExactError> {
        let k = match g.order() {
            Some(k) if k >= 1 => k,
            found => {
                return Err(ExactError::BadOrder {
                    expected: "at least 1",
                    found,
                })
            }
        };
        let from_outer = k * self.trunc();
        let first_positive = self.terms().map(|(i, _)| i).find(|&i| i >= 1);
        let n = match first_positive {
            Some(m) => from_outer.min(g.trunc() + k * (m - 1)),
            None => from_outer,
        };
        let g = g.pad_exact(n);
        let mut out = TSeries::monomial(self.coeffs[0].clone(), 0, n);
        let mut power = TSeries::one(n);
        for j in 1..self.trunc() {
            if j * k >= n {
                break;
            }
            power = power.mul(&g);
            let c = &self.coeffs[j];
            if !c.is_zero() {
                out = out.add(&power.scale(c));
            }
        }
        Ok(out)
    }
}

impl Add for &TSeries {
    type Output = TSeries;
    fn add(self, rhs: &TSeries) -> TSeries {
        TSeries::add(self, rhs)
    }
}

impl Sub for &TSeries {
    type Output = TSeries;
    fn sub(self, rhs: &TSeries) -> TSeries {
        TSeries::sub(self, rhs)
    }
}

impl Mul for &TSeries {
    type Output = TSeries;
    fn mul(self, rhs: &TSeries) -> TSeries {
        TSeries::mul(self, rhs)
    }
}

impl Neg for &TSeries {
    type Output = TSeries;
    fn neg(self) -> TSeries {
        TSeries::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.terms() {
            let (neg, mag) = if c.is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{mag}*t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.trunc())
    }
}

impl fmt::Debug for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
