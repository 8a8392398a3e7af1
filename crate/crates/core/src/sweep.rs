//! Invariant sweeps over the monomial space curves `M(a, b, c)`.

use num_integer::Integer;

use crate::branch::{semigroup_auto, standardize, Branch};
use crate::cone5::secant_cone;
use crate::matfact::{quotient_generators, MatfactError};
use crate::par::{self, Exec};
use crate::projection::{delta_bounds_check, mu_bar, project};

/// Exponent triples `3 <= a < b < c <= max` with `gcd(a, b, c) = 1`.
pub fn monomial_corpus(max: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a in 3..=max {
        for b in a + 1..=max {
            for c in b + 1..=max {
                if a.gcd(&b).gcd(&c) == 1 {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// Invariants of one monomial curve and its generic projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusRow {
    pub exps: [u32; 3],
    pub e0: usize,
    pub delta_x: usize,
    pub delta_y: usize,
    /// `(e0 - 1) δ_X - C(e0 - 1, 2)`.
    pub delta_upper: i64,
    /// Minimal number of generators of `O_X` over a generic projection.
    pub beta: usize,
    pub cone_planes: usize,
    /// Characteristic exponents on two transversal planes with different
    /// kernels.
    pub char_exponents: [Vec<usize>; 2],
    pub mu: usize,
}

pub fn corpus_row(exps: [u32; 3]) -> Result<CorpusRow, MatfactError> {
    let b = standardize(&Branch::monomial(&exps)?)?;
    let cone = secant_cone(&b);
    let mb = mu_bar(&b)?;
    let bounds = delta_bounds_check(&b)?;
    let pb = project(&b, &mb.planes[0], false)?;
    let beta = quotient_generators(&b, &pb)?.b();
    Ok(CorpusRow {
        exps,
        e0: b.e(),
        delta_x: semigroup_auto(&b)?.delta,
        delta_y: bounds.delta_y,
        delta_upper: bounds.upper,
        beta,
        cone_planes: cone.planes.len(),
        char_exponents: [
            mb.puiseux[0].char_exponents.clone(),
            mb.puiseux[1].char_exponents.clone(),
        ],
        mu: mb.mu,
    })
}

/// [`corpus_row`] for every triple, in input order.
pub fn sweep(corpus: &[[u32; 3]], exec: Exec) -> Vec<Result<CorpusRow, MatfactError>> {
    par::map(exec, corpus, |&e| corpus_row(e))
}
