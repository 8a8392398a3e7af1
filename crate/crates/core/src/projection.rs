//! Plane projections of branches, implicit equations of their images, the
//! Milnor number of a generic projection and the δ-inequalities.

use std::collections::BTreeMap;

use num_integer::Integer;

use crate::branch::{
    at_params_zero, branch_vars, puiseux_characteristic, semigroup_auto, standardize, Branch,
    BranchError, PuiseuxData, StandardBranch, TRUNC_CAP,
};
use crate::cone5::{
    is_transversal, pick_two_generic_planes, secant_cone, ConeError, ProjectionPlane,
};
use crate::exactalg::{sylvester_resultant, ExactError, MPoly, Mono, PolyMatrix, Rat};

/// Default order in the parameters for unit normalizations.
pub const PARAM_ORDER: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProjectionError {
    #[error("projection plane is not transversal to the cone of secants")]
    NonTransversal,
    #[error("projected parametrization is not injective: t-exponents share the factor {0}")]
    NonReducedImage(usize),
    #[error("parametrization is only known as a truncated series")]
    NotPolynomialParametrization,
    #[error("implicit equation does not vanish on the parametrization")]
    VerificationFailed,
    #[error("coefficient of y^{0} is not a unit in the parameters")]
    NormalizationNotUnit(u32),
    #[error("plane characteristic exponents differ between generic planes: {0:?} vs {1:?}")]
    EquisingularityMismatch(Vec<usize>, Vec<usize>),
    #[error("no value given for parameter `{0}`")]
    MissingParameter(String),
    #[error(transparent)]
    Branch(#[from] BranchError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Parametrization `t -> (x(t), y(t))` of a plane branch, possibly depending
/// on parameters. Polynomials live in the context `[t, params...]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneBranch {
    pub x: MPoly,
    pub y: MPoly,
    pub params: Vec<String>,
    pub trunc: usize,
    /// False when the coordinates are truncations of series.
    pub exact: bool,
}

impl PlaneBranch {
    /// Validates injectivity at parameters = 0.
    pub fn new(
        x: MPoly,
        y: MPoly,
        params: Vec<String>,
        trunc: usize,
        exact: bool,
    ) -> Result<PlaneBranch, ProjectionError> {
        let vars = branch_vars(&params);
        let (x, y) = (x.embed(&vars), y.embed(&vars));
        let mut g = 0usize;
        for p in [&x, &y] {
            let z = at_params_zero(p);
            if !z.constant_term().is_zero() {
                return Err(BranchError::ConstantTerm(0).into());
            }
            for (m, _) in z.terms() {
                g = g.gcd(&(m.exps()[0] as usize));
            }
        }
        if g == 0 {
            return Err(BranchError::AllCoordinatesZero.into());
        }
        if g > 1 {
            return Err(ProjectionError::NonReducedImage(g));
        }
        Ok(PlaneBranch {
            x,
            y,
            params,
            trunc,
            exact,
        })
    }

    pub fn parse(x: &str, y: &str, params: &[&str]) -> Result<PlaneBranch, ProjectionError> {
        let b = Branch::parse(&[x, y], params)?;
        let trunc = b.trunc();
        let params = b.params().to_vec();
        PlaneBranch::new(
            b.coords()[0].clone(),
            b.coords()[1].clone(),
            params,
            trunc,
            true,
        )
    }

    pub fn vars(&self) -> Vec<String> {
        branch_vars(&self.params)
    }

    pub fn to_branch(&self) -> Branch {
        Branch::new(vec![self.x.clone(), self.y.clone()], self.params.clone())
            .expect("validated on construction")
            .with_trunc(self.trunc)
    }

    /// `t`-orders of `x` and `y` at parameters = 0.
    pub fn orders(&self) -> (Option<usize>, Option<usize>) {
        let o = |p: &MPoly| at_params_zero(p).min_degree_in(0).map(|k| k as usize);
        (o(&self.x), o(&self.y))
    }
}

/// Projects a standardized branch along the plane `l`.
///
/// Unless `allow_nontransversal` is set the plane must be transversal to the
/// cone of secants. The parameters of the plane are appended to those of the
/// branch.
pub fn project(
    b: &StandardBranch,
    l: &ProjectionPlane,
    allow_nontransversal: bool,
) -> Result<PlaneBranch, ProjectionError> {
    let cone = secant_cone(b);
    if !is_transversal(&cone, l)? && !allow_nontransversal {
        return Err(ProjectionError::NonTransversal);
    }
    let mut params = b.params().to_vec();
    for p in l.params() {
        if !params.contains(p) {
            params.push(p.clone());
        }
    }
    let vars = branch_vars(&params);
    let coords: Vec<MPoly> = b.coords().iter().map(|c| c.embed(&vars)).collect();
    let form = |i: usize| {
        l.form(i)
            .iter()
            .zip(&coords)
            .fold(MPoly::zero(&vars), |acc, (z, f)| {
                acc.add(&z.embed(&vars).mul(f))
            })
    };
    PlaneBranch::new(form(0), form(1), params, b.trunc(), b.is_exact())
}

/// How the raw resultant was scaled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalization {
    /// Exponent `k` of the pure power `y^k` whose coefficient became 1.
    pub y_power: u32,
    /// That coefficient in the raw resultant (a polynomial in the
    /// parameters with nonzero constant term).
    pub coefficient: MPoly,
    /// Parameter order of the series inverse, when one was needed.
    pub param_order: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicitEquation {
    /// `Res_t(x - x(t), y - y(t))` in the context `[x, y, params...]`.
    pub raw: MPoly,
    /// Normalized equation. Exact when `normalization.param_order` is
    /// `None`, otherwise a truncated series in the parameters.
    pub f: MPoly,
    pub normalization: Normalization,
    pub params: Vec<String>,
}

impl ImplicitEquation {
    pub fn is_exact(&self) -> bool {
        self.normalization.param_order.is_none()
    }
}

/// Context `[x, y, params...]` of implicit equations and matrix entries.
pub fn xy_vars(params: &[String]) -> Vec<String> {
    ["x", "y"]
        .iter()
        .map(|s| s.to_string())
        .chain(params.iter().cloned())
        .collect()
}

/// Substitutes `x -> x(t)`, `y -> y(t)` into a polynomial over
/// `[x, y, params...]`, giving a polynomial over `[t, params...]`.
pub fn substitute_xy(p: &MPoly, pb: &PlaneBranch) -> MPoly {
    let vars = pb.vars();
    let mut out = MPoly::zero(&vars);
    let mut xpow = vec![MPoly::one(&vars)];
    let mut ypow = vec![MPoly::one(&vars)];
    let np = pb.params.len();
    for (m, c) in p.terms() {
        let e = m.exps();
        let (a, b) = (e[0] as usize, e[1] as usize);
        while xpow.len() <= a {
            let next = xpow.last().unwrap().mul(&pb.x);
            xpow.push(next);
        }
        while ypow.len() <= b {
            let next = ypow.last().unwrap().mul(&pb.y);
            ypow.push(next);
        }
        let mut pe = vec![0; np + 1];
        pe[1..].copy_from_slice(&e[2..]);
        let term = xpow[a].mul(&ypow[b]).mul_mono(&Mono::new(pe), c);
        out = out.add(&term);
    }
    out
}

/// Implicit equation of a polynomially parametrized plane branch by the
/// resultant `Res_t(x - x(t), y - y(t))`, normalized so that the coefficient
/// of `y^k` (with `k = ord_t x(t)`, no `x` factor) is 1.
pub fn implicitize(pb: &PlaneBranch) -> Result<ImplicitEquation, ProjectionError> {
    implicitize_with_order(pb, PARAM_ORDER)
}

pub fn implicitize_with_order(
    pb: &PlaneBranch,
    param_order: u32,
) -> Result<ImplicitEquation, ProjectionError> {
    if !pb.exact {
        return Err(ProjectionError::NotPolynomialParametrization);
    }
    let xy = xy_vars(&pb.params);
    let mut full = vec!["t".to_string()];
    full.extend(xy.iter().cloned());
    let x = MPoly::var(&full, "x").sub(&pb.x.embed(&full));
    let y = MPoly::var(&full, "y").sub(&pb.y.embed(&full));
    let raw = sylvester_resultant(&x, &y, "t")?.embed(&xy);

    if !substitute_xy(&raw, pb).is_zero() {
        return Err(ProjectionError::VerificationFailed);
    }

    let k = pb.orders().0.expect("x has a finite order") as u32;
    let coefficient = raw.coeff_of(&[(0, 0), (1, k)]);
    let c0 = coefficient.constant_term();
    if c0.is_zero() {
        return Err(ProjectionError::NormalizationNotUnit(k));
    }
    let param_idx: Vec<usize> = (2..xy.len()).collect();
    let (f, order) = match coefficient.as_constant() {
        Some(c) => (raw.scale(&c.recip()), None),
        None => {
            let inv = coefficient
                .series_inverse(&param_idx, param_order)
                .expect("nonzero constant term");
            (
                raw.mul_truncated(&inv, &param_idx, param_order),
                Some(param_order),
            )
        }
    };
    if order.is_none() && !substitute_xy(&f, pb).is_zero() {
        return Err(ProjectionError::VerificationFailed);
    }
    Ok(ImplicitEquation {
        raw,
        f,
        normalization: Normalization {
            y_power: k,
            coefficient,
            param_order: order,
        },
        params: pb.params.clone(),
    })
}

/// Brings `f` to coefficient 1 at `y^k` as a series in the parameters
/// truncated at total parameter degree `order`.
pub fn normalize_as_series(f: &MPoly, k: u32, order: u32) -> Option<MPoly> {
    let c = f.coeff_of(&[(0, 0), (1, k)]);
    let idx: Vec<usize> = (2..f.nvars()).collect();
    let inv = c.series_inverse(&idx, order)?;
    Some(f.mul_truncated(&inv, &idx, order))
}

/// Puiseux data of a plane branch, raising the truncation when the
/// coordinates had to be reparametrized and the exponents ran out.
pub fn plane_puiseux(pb: &PlaneBranch) -> Result<PuiseuxData, ProjectionError> {
    let mut b = pb.to_branch();
    // Start low: reparametrizing at a large truncation is costly and most
    // characteristics show up just above the larger order.
    if let (Some(ox), Some(oy)) = pb.orders() {
        let start = 2 * (ox.max(oy) + 1);
        if start < b.trunc() {
            b = b.with_trunc(start);
        }
    }
    let cap = if pb.exact { TRUNC_CAP } else { pb.trunc };
    loop {
        let s = standardize(&b)?;
        match puiseux_characteristic(&s) {
            Err(BranchError::TruncationTooSmall { .. }) if b.trunc() < cap => {
                let next = (b.trunc() * 2).min(cap);
                b = b.with_trunc(next);
            }
            other => return Ok(other?),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuBar {
    pub mu: usize,
    /// The plane used and the cross-check plane.
    pub planes: [ProjectionPlane; 2],
    pub puiseux: [PuiseuxData; 2],
}

/// Milnor number of a generic plane projection, cross-checked on a second
/// transversal plane with a different kernel.
pub fn mu_bar(b: &StandardBranch) -> Result<MuBar, ProjectionError> {
    let cone = secant_cone(b);
    let (p, q) = pick_two_generic_planes(&cone)?;
    let pp = plane_puiseux(&project(b, &p, false)?)?;
    let pq = plane_puiseux(&project(b, &q, false)?)?;
    if pp.char_exponents != pq.char_exponents {
        return Err(ProjectionError::EquisingularityMismatch(
            pp.char_exponents,
            pq.char_exponents,
        ));
    }
    Ok(MuBar {
        mu: pp.mu,
        planes: [p, q],
        puiseux: [pp, pq],
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaBounds {
    pub delta_x: usize,
    pub delta_y: usize,
    pub e0: usize,
    /// `(e0 - 1) δ_X - C(e0 - 1, 2)`.
    pub upper: i64,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

/// `δ_X <= δ_Y <= (e0 - 1) δ_X - C(e0 - 1, 2)` for a generic projection.
pub fn delta_bounds_check(b: &StandardBranch) -> Result<DeltaBounds, ProjectionError> {
    let delta_x = semigroup_auto(b)?.delta;
    let delta_y = mu_bar(b)?.mu / 2;
    let e0 = b.e() as i64;
    let upper = (e0 - 1) * delta_x as i64 - (e0 - 1) * (e0 - 2) / 2;
    Ok(DeltaBounds {
        delta_x,
        delta_y,
        e0: b.e(),
        upper,
        lower_ok: delta_x <= delta_y,
        upper_ok: delta_y as i64 <= upper,
    })
}

/// Assignment of rational values to parameters.
pub type Assignment = BTreeMap<String, Rat>;

fn specialize_poly(
    p: &MPoly,
    params: &[String],
    assignment: &Assignment,
) -> Result<MPoly, ProjectionError> {
    let mut out = p.clone();
    for name in params {
        let v = assignment
            .get(name)
            .ok_or_else(|| ProjectionError::MissingParameter(name.clone()))?;
        if let Some(i) = out.var_index(name) {
            out = out.eval_var(i, v);
        }
    }
    let rest: Vec<String> = p
        .vars()
        .iter()
        .filter(|v| !params.contains(v))
        .cloned()
        .collect();
    Ok(out.embed(&rest))
}

/// Variables of a polynomial context that are not `t`, `x` or `y`.
pub fn param_names(vars: &[String]) -> Vec<String> {
    vars.iter()
        .filter(|v| !matches!(v.as_str(), "t" | "x" | "y"))
        .cloned()
        .collect()
}

/// Exact substitution of rational values for all parameters.
pub trait Specialize: Sized {
    fn specialize(&self, assignment: &Assignment) -> Result<Self, ProjectionError>;
}

impl Specialize for MPoly {
    fn specialize(&self, assignment: &Assignment) -> Result<MPoly, ProjectionError> {
        specialize_poly(self, &param_names(self.vars()), assignment)
    }
}

impl Specialize for PolyMatrix {
    fn specialize(&self, assignment: &Assignment) -> Result<PolyMatrix, ProjectionError> {
        let entries = self
            .entries()
            .iter()
            .map(|p| p.specialize(assignment))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMatrix::new(self.rows(), self.cols(), entries))
    }
}

impl Specialize for PlaneBranch {
    fn specialize(&self, assignment: &Assignment) -> Result<PlaneBranch, ProjectionError> {
        let x = specialize_poly(&self.x, &self.params, assignment)?;
        let y = specialize_poly(&self.y, &self.params, assignment)?;
        PlaneBranch::new(x, y, vec![], self.trunc, self.exact)
    }
}

impl Specialize for ImplicitEquation {
    fn specialize(&self, assignment: &Assignment) -> Result<ImplicitEquation, ProjectionError> {
        let raw = specialize_poly(&self.raw, &self.params, assignment)?;
        let coefficient =
            specialize_poly(&self.normalization.coefficient, &self.params, assignment)?;
        let c = coefficient.as_constant().expect("parameter-free");
        if c.is_zero() {
            return Err(ProjectionError::NormalizationNotUnit(
                self.normalization.y_power,
            ));
        }
        let f = raw.scale(&c.recip());
        Ok(ImplicitEquation {
            raw,
            f,
            normalization: Normalization {
                y_power: self.normalization.y_power,
                coefficient,
                param_order: None,
            },
            params: vec![],
        })
    }
}
