//! Parametrized branches and their intrinsic invariants.
//!
//! A branch is a parametrization `t -> (f_1(t), ..., f_n(t))` whose coordinates
//! are polynomials in `t` and, for families, in deformation parameters. All
//! invariants are computed on the fibre at parameters `= 0`.

use std::collections::BTreeSet;

use num_integer::Integer;

use crate::exactalg::{MPoly, Mono, ParseError, Rat, ShiftModule, TSeries};

/// Name of the uniformizing variable.
pub const T: &str = "t";

/// Hard cap for automatic truncation growth.
pub const TRUNC_CAP: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BranchError {
    #[error("a branch needs at least two coordinates, got {0}")]
    TooFewCoordinates(usize),
    #[error("every coordinate vanishes at parameters = 0")]
    AllCoordinatesZero,
    #[error("coordinate {0} has a nonzero constant term at parameters = 0")]
    ConstantTerm(usize),
    #[error("parametrization is not injective: t-exponents share the factor {0}")]
    NotInjective(usize),
    #[error("multiplicity {e} is not below the truncation order {trunc}")]
    InsufficientTruncation { e: usize, trunc: usize },
    #[error("lowest coefficient of the minimal-order coordinate depends on parameters")]
    FamilyLeadingCoefficient,
    #[error("uniformizer change needed on a parameter-dependent coordinate")]
    UnsupportedFamily,
    #[error(
        "gcd sequence stopped at {partial_gcd} below t^{trunc}; retry with a larger truncation"
    )]
    TruncationTooSmall { partial_gcd: usize, trunc: usize },
    #[error("semigroup not certified complete below {bound} (cap {cap})")]
    IncompleteSemigroup { bound: usize, cap: usize },
    #[error("operation needs a plane branch, got dimension {0}")]
    NotPlane(usize),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
}

/// Variable context `[t, params...]`.
pub fn branch_vars(params: &[String]) -> Vec<String> {
    std::iter::once(T.to_string())
        .chain(params.iter().cloned())
        .collect()
}

/// Sets every parameter (all variables but `t`) to zero.
pub fn at_params_zero(p: &MPoly) -> MPoly {
    let mut out = p.zero_like();
    for (m, c) in p.terms() {
        if m.exps()[1..].iter().all(|&e| e == 0) {
            out.add_term(m.clone(), c.clone());
        }
    }
    out
}

fn t_index(p: &MPoly) -> usize {
    p.var_index(T).expect("branch polynomials carry t")
}

/// Default working truncation: four times the product of the two smallest
/// coordinate orders, capped at [`TRUNC_CAP`].
pub fn default_trunc(orders: &[usize]) -> usize {
    let mut o: Vec<usize> = orders.iter().copied().filter(|&k| k > 0).collect();
    o.sort_unstable();
    let a = o.first().copied().unwrap_or(1);
    let b = o.get(1).copied().unwrap_or(a).max(2);
    (4 * a * b).clamp(a + 2, TRUNC_CAP)
}

/// Parametrization of an irreducible curve germ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    coords: Vec<MPoly>,
    params: Vec<String>,
    trunc: usize,
}

impl Branch {
    /// Validates the coordinates (embedded into the context `[t, params]`)
    /// and picks the default truncation.
    pub fn new(coords: Vec<MPoly>, params: Vec<String>) -> Result<Branch, BranchError> {
        let vars = branch_vars(&params);
        let coords: Vec<MPoly> = coords.iter().map(|c| c.embed(&vars)).collect();
        let orders = Self::validate(&coords)?;
        let trunc = default_trunc(&orders);
        Ok(Branch {
            coords,
            params,
            trunc,
        })
    }

    /// Monomial curve `M(a_1, ..., a_n)`.
    pub fn monomial(exps: &[u32]) -> Result<Branch, BranchError> {
        let vars = branch_vars(&[]);
        let coords = exps
            .iter()
            .map(|&a| MPoly::monomial(&vars, vec![a], Rat::one()))
            .collect();
        Branch::new(coords, vec![])
    }

    /// Parses coordinate expressions over `t` and `params`.
    pub fn parse(coords: &[&str], params: &[&str]) -> Result<Branch, BranchError> {
        let params: Vec<String> = params.iter().map(|s| s.to_string()).collect();
        let vars = branch_vars(&params);
        let coords = coords
            .iter()
            .map(|c| MPoly::parse(c, &vars))
            .collect::<Result<Vec<_>, _>>()?;
        Branch::new(coords, params)
    }

    fn validate(coords: &[MPoly]) -> Result<Vec<usize>, BranchError> {
        if coords.len() < 2 {
            return Err(BranchError::TooFewCoordinates(coords.len()));
        }
        let mut orders = Vec::new();
        let mut g = 0usize;
        for (i, c) in coords.iter().enumerate() {
            let z = at_params_zero(c);
            if z.is_zero() {
                continue;
            }
            let ti = t_index(&z);
            if !z.constant_term().is_zero() {
                return Err(BranchError::ConstantTerm(i));
            }
            orders.push(z.min_degree_in(ti).unwrap() as usize);
            for (m, _) in z.terms() {
                g = g.gcd(&(m.exps()[ti] as usize));
            }
        }
        if orders.is_empty() {
            return Err(BranchError::AllCoordinatesZero);
        }
        if g != 1 {
            return Err(BranchError::NotInjective(g));
        }
        Ok(orders)
    }

    pub fn with_trunc(mut self, trunc: usize) -> Branch {
        self.trunc = trunc.max(2);
        self
    }

    pub fn coords(&self) -> &[MPoly] {
        &self.coords
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn vars(&self) -> Vec<String> {
        branch_vars(&self.params)
    }

    /// Coordinate `t`-orders at parameters = 0 (`None` for a vanishing fibre).
    pub fn orders(&self) -> Vec<Option<usize>> {
        self.coords
            .iter()
            .map(|c| {
                let z = at_params_zero(c);
                z.min_degree_in(t_index(&z)).map(|k| k as usize)
            })
            .collect()
    }

    /// The same branch with all parameters set to the given values, in order.
    pub fn specialize(&self, values: &[Rat]) -> Result<Branch, BranchError> {
        assert_eq!(values.len(), self.params.len(), "one value per parameter");
        let vars = branch_vars(&[]);
        let coords = self
            .coords
            .iter()
            .map(|c| {
                let mut p = c.clone();
                for (i, v) in values.iter().enumerate() {
                    p = p.eval_var(i + 1, v);
                }
                p.embed(&vars)
            })
            .collect();
        Ok(Branch::new(coords, vec![])?.with_trunc(self.trunc))
    }
}

/// Coordinate changes recorded by [`standardize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transform {
    /// Coordinate `from` was moved to the front.
    MoveToFront { from: usize },
    /// The first coordinate was multiplied by `factor`.
    Scale { factor: Rat },
    /// `t` was replaced by the series `t_of_u` in a new uniformizer `u`.
    Reparametrize { t_of_u: TSeries },
    /// `x_coord -> x_coord - lambda * x_1`.
    Shear { coord: usize, lambda: MPoly },
}

/// Branch in standard form: the first coordinate is exactly `t^e` and every
/// other coordinate has order greater than `e` at parameters = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardBranch {
    source: Branch,
    coords: Vec<MPoly>,
    e: usize,
    exact: bool,
    transforms: Vec<Transform>,
}

impl StandardBranch {
    pub fn e(&self) -> usize {
        self.e
    }

    pub fn coords(&self) -> &[MPoly] {
        &self.coords
    }

    pub fn params(&self) -> &[String] {
        self.source.params()
    }

    pub fn vars(&self) -> Vec<String> {
        self.source.vars()
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn trunc(&self) -> usize {
        self.source.trunc()
    }

    /// True when no reparametrization happened, so the coordinates are exact
    /// polynomials rather than truncated series.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn transforms(&self) -> &[Transform] {
        &self.transforms
    }

    pub fn source(&self) -> &Branch {
        &self.source
    }

    pub fn has_params(&self) -> bool {
        !self.params().is_empty()
    }

    /// The standardized coordinates viewed as a new branch.
    pub fn as_branch(&self) -> Branch {
        Branch {
            coords: self.coords.clone(),
            params: self.source.params.clone(),
            trunc: self.source.trunc,
        }
    }

    /// Coordinate `i` at parameters = 0 as a series modulo `t^trunc`.
    ///
    /// Exact branches can be expanded to any precision; otherwise `trunc`
    /// must not exceed the working truncation.
    pub fn coord_series(&self, i: usize, trunc: usize) -> TSeries {
        assert!(
            self.exact || trunc <= self.trunc(),
            "coordinates are only known modulo t^{}",
            self.trunc()
        );
        at_params_zero(&self.coords[i]).to_series(0, trunc)
    }

    /// Highest precision available for coordinate series.
    pub fn max_precision(&self) -> Option<usize> {
        (!self.exact).then(|| self.trunc())
    }

    /// Same branch standardized at a different truncation.
    pub fn with_trunc(&self, trunc: usize) -> Result<StandardBranch, BranchError> {
        standardize(&self.source.clone().with_trunc(trunc))
    }
}

/// Brings a branch to standard form: moves a coordinate of minimal order to
/// the front and scales it to leading coefficient 1, changes the uniformizer
/// so that it becomes exactly `t^e`, and removes order-`e` terms from the
/// other coordinates by linear changes.
pub fn standardize(b: &Branch) -> Result<StandardBranch, BranchError> {
    let n = b.dim();
    let trunc = b.trunc();
    let vars = b.vars();
    let orders = b.orders();
    let e = orders.iter().flatten().copied().min().expect("validated");
    let first = orders.iter().position(|o| *o == Some(e)).unwrap();
    if e >= trunc {
        return Err(BranchError::InsufficientTruncation { e, trunc });
    }

    let mut coords = b.coords().to_vec();
    let mut transforms = Vec::new();
    if first != 0 {
        let c = coords.remove(first);
        coords.insert(0, c);
        transforms.push(Transform::MoveToFront { from: first });
    }

    let lead = coords[0]
        .coeff_of(&[(0, e as u32)])
        .as_constant()
        .ok_or(BranchError::FamilyLeadingCoefficient)?;
    if !lead.is_one() {
        let factor = lead.recip();
        coords[0] = coords[0].scale(&factor);
        transforms.push(Transform::Scale { factor });
    }

    let target = MPoly::monomial(&vars, mono_t(e, vars.len()), Rat::one());
    let mut exact = true;
    if coords[0] != target {
        if (1..vars.len()).any(|i| coords[0].uses_var(i)) {
            return Err(BranchError::UnsupportedFamily);
        }
        exact = false;
        let f1 = coords[0].to_series(0, trunc + e);
        let unit = f1.unshift(e).expect("order e");
        let root = unit.eth_root(e as u32).expect("constant term is one");
        let u_of_t = root.shift(1).truncate(trunc);
        let t_of_u = u_of_t.reverse().expect("order one");
        for c in coords.iter_mut().skip(1) {
            *c = substitute_t(c, &t_of_u, trunc);
        }
        coords[0] = target.clone();
        transforms.push(Transform::Reparametrize { t_of_u });
    }

    for (i, c) in coords.iter_mut().enumerate().skip(1) {
        let lambda = c.coeff_of(&[(0, e as u32)]);
        if lambda.is_zero() {
            continue;
        }
        *c = c.sub(&lambda.mul(&target));
        transforms.push(Transform::Shear { coord: i, lambda });
    }

    debug_assert_eq!(coords.len(), n);
    Ok(StandardBranch {
        source: b.clone(),
        coords,
        e,
        exact,
        transforms,
    })
}

fn mono_t(k: usize, nvars: usize) -> Vec<u32> {
    let mut v = vec![0; nvars];
    v[0] = k as u32;
    v
}

/// Replaces `t` by the series `g` (of order 1) in a polynomial over
/// `[t, params]`, keeping terms of `t`-degree below `trunc`.
fn substitute_t(p: &MPoly, g: &TSeries, trunc: usize) -> MPoly {
    let mut powers = vec![TSeries::one(trunc)];
    let g = g.truncate(trunc.min(g.trunc()));
    let mut out = p.zero_like();
    for (m, c) in p.terms() {
        let k = m.exps()[0] as usize;
        while powers.len() <= k {
            let next = powers.last().unwrap().mul(&g);
            powers.push(next);
        }
        for (j, a) in powers[k].terms() {
            let mut e = m.exps().to_vec();
            e[0] = j as u32;
            out.add_term(Mono::new(e), c * a);
        }
    }
    out
}

pub fn multiplicity(b: &StandardBranch) -> usize {
    b.e()
}

/// Semigroup of values below a bound, with derived invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupData {
    pub bound: usize,
    /// Elements of the semigroup below `bound`.
    pub elements: Vec<usize>,
    pub gaps: Vec<usize>,
    pub delta: usize,
    /// Largest gap; `None` for a smooth branch.
    pub frobenius: Option<usize>,
    pub conductor: usize,
    pub gorenstein: bool,
    /// Whether `e` consecutive elements below `bound` certify the whole
    /// semigroup.
    pub complete: bool,
}

impl SemigroupData {
    pub fn from_elements(elements: BTreeSet<usize>, bound: usize, e: usize) -> SemigroupData {
        let elements: Vec<usize> = elements.into_iter().filter(|&k| k < bound).collect();
        let is_elem = |k: usize| elements.binary_search(&k).is_ok();
        // first start of a run of e consecutive elements
        let run_start =
            (0..bound.saturating_sub(e.saturating_sub(1))).find(|&k| (k..k + e).all(is_elem));
        let complete = run_start.is_some();
        let limit = run_start.unwrap_or(bound);
        let gaps: Vec<usize> = (0..limit).filter(|&k| !is_elem(k)).collect();
        let delta = gaps.len();
        let frobenius = gaps.last().copied();
        let conductor = frobenius.map_or(0, |f| f + 1);
        SemigroupData {
            bound,
            elements,
            gorenstein: complete && conductor == 2 * delta,
            gaps,
            delta,
            frobenius,
            conductor,
            complete,
        }
    }

    pub fn contains(&self, k: usize) -> bool {
        if k >= self.bound {
            return self.complete;
        }
        self.elements.binary_search(&k).is_ok()
    }
}

/// The local ring `Q[[f_1, ..., f_n]]` modulo `t^bound` as a
/// `Q[[t^e]]`-module (the first coordinate is exactly `t^e`).
pub fn local_ring_module(b: &StandardBranch, bound: usize) -> ShiftModule {
    let bound = match b.max_precision() {
        Some(p) => bound.min(p),
        None => bound,
    };
    let mut m = ShiftModule::new(b.e(), bound);
    m.insert(&TSeries::one(bound));
    let mults: Vec<TSeries> = (1..b.dim()).map(|i| b.coord_series(i, bound)).collect();
    m.close_under(&mults);
    m
}

/// Semigroup of values `v_t(O)` below `bound`, parameters set to zero.
///
/// Elements are the leading orders of a triangular basis of the ring modulo
/// `t^bound`. When the branch is not exact the bound is limited by its
/// working truncation.
pub fn semigroup(b: &StandardBranch, bound: usize) -> SemigroupData {
    let m = local_ring_module(b, bound);
    SemigroupData::from_elements(m.values(), m.trunc(), b.e())
}

/// Semigroup at the default bound, doubling it (and re-standardizing when
/// the coordinates are truncated) until complete or [`TRUNC_CAP`] is passed.
pub fn semigroup_auto(b: &StandardBranch) -> Result<SemigroupData, BranchError> {
    let mut bound = b.trunc();
    let mut current = b.clone();
    loop {
        let sg = semigroup(&current, bound);
        if sg.complete {
            return Ok(sg);
        }
        if bound >= TRUNC_CAP {
            return Err(BranchError::IncompleteSemigroup {
                bound,
                cap: TRUNC_CAP,
            });
        }
        bound = (bound * 2).min(TRUNC_CAP);
        if !current.is_exact() {
            current = current.with_trunc(bound)?;
        }
    }
}

/// Puiseux data of a plane branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuiseuxData {
    pub e: usize,
    pub char_exponents: Vec<usize>,
    /// `d_0 = e, d_i = gcd(d_{i-1}, beta_i)`, ending with 1.
    pub gcd_seq: Vec<usize>,
    /// Minimal generators of the semigroup of values.
    pub sg_generators: Vec<usize>,
    /// Multiplicities of the successive blow-ups, down to the first 1.
    pub mult_sequence: Vec<usize>,
    pub delta: usize,
    pub mu: usize,
    pub conductor: usize,
}

/// Characteristic exponents of a standardized plane branch and the data
/// derived from them.
pub fn puiseux_characteristic(b: &StandardBranch) -> Result<PuiseuxData, BranchError> {
    if b.dim() != 2 {
        return Err(BranchError::NotPlane(b.dim()));
    }
    let e = b.e();
    let y = at_params_zero(&b.coords()[1]);
    let limit = if b.is_exact() { None } else { Some(b.trunc()) };
    let mut exps: Vec<usize> = y.terms().map(|(m, _)| m.exps()[0] as usize).collect();
    exps.sort_unstable();

    let mut d = e;
    let mut chars = Vec::new();
    let mut gcds = vec![e];
    for k in exps {
        if d == 1 {
            break;
        }
        if k % d != 0 {
            chars.push(k);
            d = d.gcd(&k);
            gcds.push(d);
        }
    }
    if d != 1 {
        return Err(BranchError::TruncationTooSmall {
            partial_gcd: d,
            trunc: limit.unwrap_or(0),
        });
    }

    let mut gens = vec![e];
    if let Some(&b1) = chars.first() {
        gens.push(b1);
    }
    for i in 1..chars.len() {
        let next = (gcds[i - 1] / gcds[i]) * gens[i] + chars[i] - chars[i - 1];
        gens.push(next);
    }

    let mults = multiplicity_sequence(e, &chars);
    let delta: usize = mults.iter().map(|m| m * (m - 1) / 2).sum();
    // c = sum (n_i - 1) bbeta_i - bbeta_0 + 1 with n_i = d_{i-1} / d_i
    let weighted: usize = (1..gens.len())
        .map(|i| (gcds[i - 1] / gcds[i] - 1) * gens[i])
        .sum();
    let conductor = weighted + 1 - e;
    Ok(PuiseuxData {
        e,
        char_exponents: chars,
        gcd_seq: gcds,
        sg_generators: gens,
        mult_sequence: mults,
        delta,
        mu: 2 * delta,
        conductor,
    })
}

/// Multiplicity sequence from the characteristic exponents by successive
/// Euclidean divisions of `(beta_i - beta_{i-1}, d_{i-1})`, listed down to
/// and including the first 1.
pub fn multiplicity_sequence(e: usize, chars: &[usize]) -> Vec<usize> {
    let mut seq = Vec::new();
    let mut prev = 0;
    let mut d = e;
    for &beta in chars {
        let (mut a, mut b) = (beta - prev, d);
        loop {
            seq.extend(std::iter::repeat_n(b, a / b));
            let r = a % b;
            if r == 0 {
                break;
            }
            a = b;
            b = r;
        }
        d = b;
        prev = beta;
    }
    if let Some(pos) = seq.iter().position(|&m| m == 1) {
        seq.truncate(pos + 1);
    } else {
        seq.push(1);
    }
    seq
}

/// δ of a plane branch computed two ways.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaReport {
    pub from_gaps: usize,
    pub from_multiplicities: usize,
    pub agree: bool,
}

pub fn delta_consistency(b: &StandardBranch) -> Result<DeltaReport, BranchError> {
    let p = puiseux_characteristic(b)?;
    let sg = semigroup_auto(b)?;
    Ok(DeltaReport {
        from_gaps: sg.delta,
        from_multiplicities: p.delta,
        agree: sg.delta == p.delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn std_of(coords: &[&str]) -> StandardBranch {
        standardize(&Branch::parse(coords, &[]).unwrap()).unwrap()
    }

    #[test]
    fn monomial_curve_is_already_standard() {
        let b = Branch::monomial(&[4, 6, 7]).unwrap();
        let s = standardize(&b).unwrap();
        assert_eq!(s.e(), 4);
        assert_eq!(s.coords(), b.coords());
        assert!(s.transforms().is_empty());
        assert!(s.is_exact());
    }

    #[test]
    fn linear_change_removes_order_e_terms() {
        let s = std_of(&["t^2", "t^2 + t^5"]);
        assert_eq!(s.coords()[1].to_string(), "t^5");
        assert!(matches!(
            s.transforms()[0],
            Transform::Shear { coord: 1, .. }
        ));
    }

    #[test]
    fn uniformizer_change() {
        let s = std_of(&["t^2 + t^3", "t^3"]).with_trunc(16).unwrap();
        assert_eq!(s.coords()[0].to_string(), "t^2");
        assert!(!s.is_exact());
        assert_eq!(s.coord_series(1, 16).order(), Some(3));
        // Round trip: substituting t(u) into the original first coordinate
        // yields u^2 modulo u^16.
        let Transform::Reparametrize { t_of_u } = &s.transforms()[0] else {
            panic!("expected a reparametrization");
        };
        let f = TSeries::from_ints(&[0, 0, 1, 1]).pad_exact(16);
        let back = f.compose(t_of_u).unwrap().truncate(16);
        assert_eq!(back, TSeries::monomial(Rat::one(), 2, 16));
    }

    #[test]
    fn permutation_and_scaling() {
        let s = std_of(&["t^5", "2*t^3 + t^4"]);
        assert_eq!(s.e(), 3);
        assert_eq!(
            s.transforms()[0..2],
            [
                Transform::MoveToFront { from: 1 },
                Transform::Scale {
                    factor: Rat::new(1, 2)
                }
            ]
        );
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            Branch::parse(&["t^2"], &[]).unwrap_err(),
            BranchError::TooFewCoordinates(1)
        );
        assert_eq!(
            Branch::parse(&["t^2", "t^4"], &[]).unwrap_err(),
            BranchError::NotInjective(2)
        );
        assert_eq!(
            Branch::parse(&["1 + t", "t^3"], &[]).unwrap_err(),
            BranchError::ConstantTerm(0)
        );
        assert!(matches!(
            Branch::parse(&["t^2", "t^"], &[]),
            Err(BranchError::Parse(_))
        ));
        let b = Branch::monomial(&[4, 6, 7]).unwrap().with_trunc(4);
        assert_eq!(
            standardize(&b).unwrap_err(),
            BranchError::InsufficientTruncation { e: 4, trunc: 4 }
        );
    }

    #[test]
    fn family_leading_coefficient_must_be_constant() {
        let b = Branch::parse(&["(1+s)*t^4", "t^6", "t^7"], &["s"]).unwrap();
        assert_eq!(
            standardize(&b).unwrap_err(),
            BranchError::FamilyLeadingCoefficient
        );
        let b = Branch::parse(&["t^4", "t^6 + (1+s)*t^7"], &["s"]).unwrap();
        let s = standardize(&b).unwrap();
        assert!(s.is_exact());
        assert_eq!(s.coords()[1].to_string(), "t^7*s + t^7 + t^6");
    }

    #[test]
    fn multiplicities() {
        assert_eq!(multiplicity(&std_of(&["t^4", "t^6", "t^7"])), 4);
        assert_eq!(multiplicity(&std_of(&["t^5", "t^6", "t^8", "t^9"])), 5);
        assert_eq!(multiplicity(&std_of(&["t", "t^2"])), 1);
    }

    #[test]
    fn semigroup_of_space_monomial() {
        let sg = semigroup_auto(&std_of(&["t^4", "t^6", "t^7"])).unwrap();
        assert_eq!(sg.gaps, vec![1, 2, 3, 5, 9]);
        assert_eq!((sg.delta, sg.conductor, sg.gorenstein), (5, 10, true));
    }

    #[test]
    fn semigroup_of_plane_branches() {
        let sg = semigroup_auto(&std_of(&["t^3", "t^4"])).unwrap();
        assert_eq!(sg.gaps, vec![1, 2, 5]);
        assert_eq!((sg.delta, sg.conductor, sg.gorenstein), (3, 6, true));

        let sg = semigroup_auto(&std_of(&["t^4", "t^6 + t^7"])).unwrap();
        assert_eq!(sg.gaps, vec![1, 2, 3, 5, 7, 9, 11, 15]);
        assert_eq!((sg.delta, sg.conductor), (8, 16));
    }

    #[test]
    fn smooth_semigroup() {
        let sg = semigroup_auto(&std_of(&["t", "t^2"])).unwrap();
        assert!(sg.gaps.is_empty());
        assert_eq!((sg.delta, sg.conductor, sg.frobenius), (0, 0, None));
        assert!(sg.gorenstein);
    }

    #[test]
    fn incomplete_semigroup_is_flagged() {
        let sg = semigroup(&std_of(&["t^4", "t^6", "t^7"]), 9);
        assert!(!sg.complete);
        assert!(!sg.gorenstein);
    }

    #[test]
    fn puiseux_examples() {
        let p = puiseux_characteristic(&std_of(&["t^4", "t^6 + t^7"])).unwrap();
        assert_eq!(p.char_exponents, vec![6, 7]);
        assert_eq!(p.gcd_seq, vec![4, 2, 1]);
        assert_eq!(p.sg_generators, vec![4, 6, 13]);
        assert_eq!(p.mult_sequence, vec![4, 2, 2, 1]);
        assert_eq!((p.delta, p.mu, p.conductor), (8, 16, 16));

        let p = puiseux_characteristic(&std_of(&["t^2", "t^3"])).unwrap();
        assert_eq!(p.char_exponents, vec![3]);
        assert_eq!(p.mult_sequence, vec![2, 1]);
        assert_eq!((p.delta, p.mu), (1, 2));

        let p = puiseux_characteristic(&std_of(&["t^5", "t^6 + t^8 + t^9"])).unwrap();
        assert_eq!(p.char_exponents, vec![6]);
        assert_eq!((p.delta, p.mu, p.conductor), (10, 20, 20));
    }

    #[test]
    fn puiseux_needs_a_plane_branch() {
        assert_eq!(
            puiseux_characteristic(&std_of(&["t^4", "t^6", "t^7"])).unwrap_err(),
            BranchError::NotPlane(3)
        );
    }

    #[test]
    fn truncated_puiseux_reports_partial_gcd() {
        let b = Branch::parse(&["t^4 + t^6", "t^6 + t^51"], &[])
            .unwrap()
            .with_trunc(8);
        let s = standardize(&b).unwrap();
        match puiseux_characteristic(&s) {
            Err(BranchError::TruncationTooSmall { partial_gcd, trunc }) => {
                assert_eq!((partial_gcd, trunc), (2, 8));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn delta_two_ways() {
        for coords in [
            ["t^4", "t^6 + t^7"],
            ["t^2", "t^3"],
            ["t^5", "t^6 + t^8 + t^9"],
        ] {
            let r = delta_consistency(&std_of(&coords)).unwrap();
            assert!(r.agree, "{coords:?}: {r:?}");
        }
        let r = delta_consistency(&std_of(&["t^5", "t^6 + t^8 + t^9"])).unwrap();
        assert_eq!(r.from_gaps, 10);
    }
}
