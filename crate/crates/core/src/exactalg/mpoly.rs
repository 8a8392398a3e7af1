use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{Rat, TSeries};

/// Exponent vector ordered graded-lexicographically: total degree first,
/// then the exponent of the first variable, and so on.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mono(Box<[u32]>);

impl Mono {
    pub fn new(exps: Vec<u32>) -> Mono {
        Mono(exps.into_boxed_slice())
    }

    pub fn one(nvars: usize) -> Mono {
        Mono::new(vec![0; nvars])
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Mono) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Mono) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Sparse multivariate polynomial with rational coefficients over an ordered
/// list of named variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    vars: Arc<[String]>,
    terms: BTreeMap<Mono, Rat>,
}

impl MPoly {
    pub fn zero(vars: &[String]) -> MPoly {
        MPoly {
            vars: vars.into(),
            terms: BTreeMap::new(),
        }
    }

    pub fn zero_like(&self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[String], c: Rat) -> MPoly {
        let mut p = MPoly::zero(vars);
        p.add_term(Mono::one(vars.len()), c);
        p
    }

    pub fn constant_like(&self, c: Rat) -> MPoly {
        let mut p = self.zero_like();
        p.add_term(Mono::one(self.nvars()), c);
        p
    }

    pub fn one(vars: &[String]) -> MPoly {
        MPoly::constant(vars, Rat::one())
    }

    /// The variable `name`, which must belong to `vars`.
    pub fn var(vars: &[String], name: &str) -> MPoly {
        let idx = vars
            .iter()
            .position(|v| v == name)
            .unwrap_or_else(|| panic!("unknown variable {name}"));
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        let mut p = MPoly::zero(vars);
        p.add_term(Mono::new(e), Rat::one());
        p
    }

    pub fn monomial(vars: &[String], exps: Vec<u32>, c: Rat) -> MPoly {
        assert_eq!(exps.len(), vars.len());
        let mut p = MPoly::zero(vars);
        p.add_term(Mono::new(exps), c);
        p
    }

    pub fn from_terms<I>(vars: &[String], terms: I) -> MPoly
    where
        I: IntoIterator<Item = (Mono, Rat)>,
    {
        let mut p = MPoly::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.exps().len(), vars.len());
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn same_vars(&self, other: &MPoly) -> bool {
        Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars
    }

    fn check_vars(&self, other: &MPoly) {
        assert!(
            self.same_vars(other),
            "variable contexts differ: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    pub fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Rat)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading_term(&self) -> Option<(&Mono, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Mono::one(self.nvars()))
    }

    /// The constant value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rat> {
        self.is_constant().then(|| self.constant_term())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::degree).max()
    }

    pub fn degree_in(&self, idx: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exps()[idx]).max()
    }

    /// Least exponent of variable `idx` among the terms.
    pub fn min_degree_in(&self, idx: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exps()[idx]).min()
    }

    /// Total degree in the variables selected by `idxs`.
    pub fn degree_in_vars(&self, idxs: &[usize]) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| idxs.iter().map(|&i| m.exps()[i]).sum())
            .max()
    }

    pub fn uses_var(&self, idx: usize) -> bool {
        self.terms.keys().any(|m| m.exps()[idx] > 0)
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return self.zero_like();
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono, c: &Rat) -> MPoly {
        if c.is_zero() {
            return self.zero_like();
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        self.check_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.check_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        self.scale(&Rat::int(-1))
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        self.check_vars(other);
        let mut out = self.zero_like();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = self.constant_like(Rat::one());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        self.check_vars(divisor);
        let (lm, lc) = divisor.leading_term()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = self.zero_like();
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return None;
            }
            let qm = m.div(&lm);
            let qc = c / &lc;
            rem = rem.sub(&divisor.mul_mono(&qm, &qc));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Rational `c` with `self = c * other`, if it exists (both nonzero).
    pub fn ratio_to(&self, other: &MPoly) -> Option<Rat> {
        self.check_vars(other);
        let (ma, ca) = self.leading_term()?;
        let (mb, cb) = other.leading_term()?;
        if ma != mb || self.num_terms() != other.num_terms() {
            return None;
        }
        let c = ca / cb;
        (other.scale(&c) == *self).then_some(c)
    }

    /// Coefficient of `var^k`, as a polynomial in the same context with that
    /// variable's exponent removed.
    pub fn coeff_of_power(&self, idx: usize, k: u32) -> MPoly {
        let mut out = self.zero_like();
        for (m, c) in &self.terms {
            if m.exps()[idx] == k {
                let mut e = m.exps().to_vec();
                e[idx] = 0;
                out.add_term(Mono::new(e), c.clone());
            }
        }
        out
    }

    /// Coefficient of the partial monomial given by `(var index, exponent)`
    /// pairs; other variables are untouched.
    pub fn coeff_of(&self, fixed: &[(usize, u32)]) -> MPoly {
        let mut out = self.zero_like();
        for (m, c) in &self.terms {
            if fixed.iter().all(|&(i, k)| m.exps()[i] == k) {
                let mut e = m.exps().to_vec();
                for &(i, _) in fixed {
                    e[i] = 0;
                }
                out.add_term(Mono::new(e), c.clone());
            }
        }
        out
    }

    /// Substitutes the polynomial `value` (same context) for variable `idx`.
    pub fn substitute(&self, idx: usize, value: &MPoly) -> MPoly {
        self.check_vars(value);
        let mut powers: Vec<MPoly> = vec![value.constant_like(Rat::one())];
        let mut out = self.zero_like();
        for (m, c) in &self.terms {
            let k = m.exps()[idx] as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap().mul(value);
                powers.push(next);
            }
            let mut e = m.exps().to_vec();
            e[idx] = 0;
            let piece = powers[k].mul_mono(&Mono::new(e), c);
            out = out.add(&piece);
        }
        out
    }

    /// Substitutes a rational value for variable `idx`.
    pub fn eval_var(&self, idx: usize, value: &Rat) -> MPoly {
        let mut out = self.zero_like();
        for (m, c) in &self.terms {
            let mut e = m.exps().to_vec();
            let k = e[idx];
            e[idx] = 0;
            out.add_term(Mono::new(e), c * &value.pow(k));
        }
        out
    }

    /// Moves the polynomial into the context `vars`. Every variable actually
    /// used must exist in `vars` (matched by name).
    pub fn embed(&self, vars: &[String]) -> MPoly {
        self.try_embed(vars)
            .unwrap_or_else(|name| panic!("variable {name} missing from target context"))
    }

    /// Like [`MPoly::embed`] but reports the first used variable missing from
    /// `vars` instead of panicking.
    pub fn try_embed(&self, vars: &[String]) -> Result<MPoly, String> {
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v))
            .collect();
        let mut out = MPoly::zero(vars);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; vars.len()];
            for (i, &k) in m.exps().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => e[j] += k,
                    None => return Err(self.vars[i].clone()),
                }
            }
            out.add_term(Mono::new(e), c.clone());
        }
        Ok(out)
    }

    /// Keeps only terms whose total degree in the variables `idxs` is at most
    /// `max_deg`.
    pub fn truncate_degree_in(&self, idxs: &[usize], max_deg: u32) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| idxs.iter().map(|&i| m.exps()[i]).sum::<u32>() <= max_deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Product truncated to total degree `max_deg` in the variables `idxs`.
    pub fn mul_truncated(&self, other: &MPoly, idxs: &[usize], max_deg: u32) -> MPoly {
        self.check_vars(other);
        let deg = |m: &Mono| idxs.iter().map(|&i| m.exps()[i]).sum::<u32>();
        let mut out = self.zero_like();
        for (ma, ca) in &self.terms {
            let da = deg(ma);
            if da > max_deg {
                continue;
            }
            for (mb, cb) in &other.terms {
                if da + deg(mb) <= max_deg {
                    out.add_term(ma.mul(mb), ca * cb);
                }
            }
        }
        out
    }

    /// Inverse of a polynomial with nonzero constant term, as a power series in
    /// the variables `idxs` truncated at total degree `max_deg`.
    pub fn series_inverse(&self, idxs: &[usize], max_deg: u32) -> Option<MPoly> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return None;
        }
        let inv0 = c0.recip();
        // u = self / c0 = 1 - w, inverse = sum w^k.
        let w = self.constant_like(Rat::one()).sub(&self.scale(&inv0));
        let mut acc = self.constant_like(Rat::one());
        let mut power = acc.clone();
        for _ in 0..max_deg {
            power = power.mul_truncated(&w, idxs, max_deg);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Some(acc.scale(&inv0))
    }

    /// Interprets a polynomial that only uses variable `idx` as a series
    /// modulo `t^trunc`.
    pub fn to_series(&self, idx: usize, trunc: usize) -> TSeries {
        assert!(
            self.terms.keys().all(|m| m
                .exps()
                .iter()
                .enumerate()
                .all(|(i, &e)| i == idx || e == 0)),
            "polynomial depends on variables other than {}",
            self.vars[idx]
        );
        TSeries::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (m.exps()[idx] as usize, c.clone())),
            trunc,
        )
    }

    /// The polynomial with the stored coefficients of `s` in variable `idx`.
    pub fn from_series(vars: &[String], idx: usize, s: &TSeries) -> MPoly {
        let mut p = MPoly::zero(vars);
        for (k, c) in s.terms() {
            let mut e = vec![0; vars.len()];
            e[idx] = k as u32;
            p.add_term(Mono::new(e), c.clone());
        }
        p
    }

    /// Drops every term whose exponent in variable `idx` is at least `bound`.
    pub fn truncate_in(&self, idx: usize, bound: u32) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exps()[idx] < bound)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Canonical text form: terms in descending graded-lexicographic order,
    /// `*` between factors, `^` for powers, rationals as `p/q`.
    pub fn to_canonical_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                factors.push(mag.to_string());
            }
            for (v, &e) in self.vars.iter().zip(m.exps().iter()) {
                match e {
                    0 => {}
                    1 => factors.push(v.clone()),
                    _ => factors.push(format!("{v}^{e}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {:?}", self.to_canonical_string(), &self.vars[..])
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        MPoly::add(self, rhs)
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        MPoly::sub(self, rhs)
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        MPoly::mul(self, rhs)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly::neg(self)
    }
}

/// Builds a variable list from string slices.
pub fn vars(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}
