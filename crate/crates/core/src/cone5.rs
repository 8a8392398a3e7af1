//! The cone of limits of secants of a branch and transversality of
//! projection planes.
//!
//! For a branch in standard form `(t^e, f_2, ..., f_n)` the cone is a union
//! of 2-planes through the tangent line `(1, 0, ..., 0)`. Each residue
//! `k = 1..e-1` (standing for the root of unity `exp(2 pi i k / e)`)
//! contributes the plane spanned by the tangent and the coefficient vector of
//! the least exponent `j > e` with `e` not dividing `k j`. Roots of unity are
//! never materialized: `eps^j != 1` is exactly `e ∤ k j`.

use std::fmt;

use crate::branch::{at_params_zero, StandardBranch};
use crate::exactalg::{vars, MPoly, ParseError, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConeError {
    #[error("plane has {found} coefficients, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("a projection plane needs an even number of coefficients, got {0}")]
    OddLength(usize),
    #[error("no transversal plane found within max-norm {0}")]
    SearchExhausted(u32),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
}

/// One plane of the cone: span of the tangent and `direction`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConePlane {
    /// Secondary direction, first coordinate 0, first nonzero entry 1.
    pub direction: Vec<Rat>,
    /// Residues `k` producing this plane, ascending.
    pub residues: Vec<usize>,
    /// Jump exponent for each residue, same order.
    pub jumps: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecantCone {
    pub e: usize,
    pub n: usize,
    pub planes: Vec<ConePlane>,
    /// Residues without a jump below the known precision.
    pub truncated_residues: Vec<usize>,
}

impl SecantCone {
    pub fn tangent(&self) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.n];
        v[0] = Rat::one();
        v
    }

    pub fn is_complete(&self) -> bool {
        self.truncated_residues.is_empty()
    }

    /// Directions as integer vectors when all entries are integers.
    pub fn directions(&self) -> Vec<Vec<Rat>> {
        self.planes.iter().map(|p| p.direction.clone()).collect()
    }
}

fn normalize_direction(v: Vec<Rat>) -> Vec<Rat> {
    let lead = v.iter().find(|c| !c.is_zero()).expect("nonzero").recip();
    v.iter().map(|c| c * &lead).collect()
}

/// Cone of limits of secants of a standardized branch at parameters = 0.
pub fn secant_cone(b: &StandardBranch) -> SecantCone {
    let e = b.e();
    let n = b.dim();
    let coords: Vec<MPoly> = b.coords().iter().map(at_params_zero).collect();
    // Exponents j > e carrying a nonzero coefficient in some coordinate 2..n.
    let mut support: Vec<usize> = coords[1..]
        .iter()
        .flat_map(|c| c.terms().map(|(m, _)| m.exps()[0] as usize))
        .filter(|&j| j > e)
        .collect();
    support.sort_unstable();
    support.dedup();
    if let Some(p) = b.max_precision() {
        support.retain(|&j| j < p);
    }

    let coeff_vector = |j: usize| -> Vec<Rat> {
        let mut v = vec![Rat::zero()];
        for c in &coords[1..] {
            v.push(c.coeff_of(&[(0, j as u32)]).constant_term());
        }
        v
    };

    let mut planes: Vec<ConePlane> = Vec::new();
    let mut truncated = Vec::new();
    for k in 1..e {
        let Some(&j) = support.iter().find(|&&j| (k * j) % e != 0) else {
            truncated.push(k);
            continue;
        };
        let dir = normalize_direction(coeff_vector(j));
        match planes.iter_mut().find(|p| p.direction == dir) {
            Some(p) => {
                p.residues.push(k);
                p.jumps.push(j);
            }
            None => planes.push(ConePlane {
                direction: dir,
                residues: vec![k],
                jumps: vec![j],
            }),
        }
    }
    SecantCone {
        e,
        n,
        planes,
        truncated_residues: truncated,
    }
}

/// Pair of linear forms `L_1 = z_1 x_1 + ... + z_n x_n`,
/// `L_2 = z_{n+1} x_1 + ... + z_{2n} x_n`. Coefficients may be polynomials
/// in deformation parameters; transversality is decided at parameters = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionPlane {
    params: Vec<String>,
    z: Vec<MPoly>,
}

impl ProjectionPlane {
    pub fn new(z: Vec<MPoly>, params: Vec<String>) -> Result<ProjectionPlane, ConeError> {
        if !z.len().is_multiple_of(2) || z.is_empty() {
            return Err(ConeError::OddLength(z.len()));
        }
        let z = z.iter().map(|c| c.embed(&params)).collect();
        Ok(ProjectionPlane { params, z })
    }

    pub fn from_rats(z: &[Rat]) -> Result<ProjectionPlane, ConeError> {
        let v = vars(&[]);
        ProjectionPlane::new(
            z.iter().map(|c| MPoly::constant(&v, c.clone())).collect(),
            vec![],
        )
    }

    pub fn from_ints(z: &[i64]) -> Result<ProjectionPlane, ConeError> {
        let z: Vec<Rat> = z.iter().map(|&c| Rat::int(c)).collect();
        ProjectionPlane::from_rats(&z)
    }

    /// Parses a comma-separated coefficient list such as `1,0,0,0,1,1+s6`.
    pub fn parse(text: &str, params: &[String]) -> Result<ProjectionPlane, ConeError> {
        let mut z = Vec::new();
        let mut col = 0;
        for piece in text.split(',') {
            z.push(MPoly::parse_at(piece, params, 1, col)?);
            col += piece.chars().count() + 1;
        }
        ProjectionPlane::new(z, params.to_vec())
    }

    /// Ambient dimension `n`.
    pub fn n(&self) -> usize {
        self.z.len() / 2
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn coeffs(&self) -> &[MPoly] {
        &self.z
    }

    pub fn form(&self, i: usize) -> &[MPoly] {
        let n = self.n();
        &self.z[i * n..(i + 1) * n]
    }

    pub fn has_params(&self) -> bool {
        self.z.iter().any(|c| !c.is_constant())
    }

    /// Coefficients at parameters = 0.
    pub fn at_zero(&self) -> Vec<Rat> {
        self.z.iter().map(MPoly::constant_term).collect()
    }

    /// The two forms at parameters = 0 are linearly independent.
    pub fn is_independent(&self) -> bool {
        let z = self.at_zero();
        let n = self.n();
        (0..n).any(|i| (i + 1..n).any(|j| !(&z[i] * &z[n + j] - &z[j] * &z[n + i]).is_zero()))
    }

    /// Row span at parameters = 0, as a reduced echelon basis.
    pub fn row_span(&self) -> Vec<Vec<Rat>> {
        let z = self.at_zero();
        let n = self.n();
        crate::exactalg::row_echelon(&[z[..n].to_vec(), z[n..].to_vec()], n).rows
    }
}

impl fmt::Display for ProjectionPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.z.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

fn form_value(form: &[Rat], v: &[Rat]) -> Rat {
    form.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Determinant of the 2x2 matrix of the forms evaluated on the tangent and
/// on `w`; the plane meets the kernel of the projection only at 0 iff it is
/// nonzero.
fn plane_det(z: &[Rat], n: usize, tangent: &[Rat], w: &[Rat]) -> Rat {
    let (l1, l2) = (&z[..n], &z[n..]);
    &form_value(l1, tangent) * &form_value(l2, w) - &form_value(l2, tangent) * &form_value(l1, w)
}

/// Whether the kernel of the projection meets the cone only at the origin
/// (at parameters = 0).
pub fn is_transversal(c: &SecantCone, l: &ProjectionPlane) -> Result<bool, ConeError> {
    if l.n() != c.n {
        return Err(ConeError::DimensionMismatch {
            expected: 2 * c.n,
            found: l.coeffs().len(),
        });
    }
    Ok(is_transversal_at(c, &l.at_zero()))
}

fn is_transversal_at(c: &SecantCone, z: &[Rat]) -> bool {
    let n = c.n;
    let tangent = c.tangent();
    if c.planes.is_empty() {
        // Smooth branch: only the tangent line must avoid the kernel, and
        // the forms must be independent.
        let independent =
            (0..n).any(|i| (i + 1..n).any(|j| !(&z[i] * &z[n + j] - &z[j] * &z[n + i]).is_zero()));
        return independent && !(z[0].is_zero() && z[n].is_zero());
    }
    c.planes
        .iter()
        .all(|p| !plane_det(z, n, &tangent, &p.direction).is_zero())
}

/// Coefficient keys in enumeration order: 1, -1, 2, -2, ...
fn key_value(k: u32) -> i64 {
    let m = (k / 2 + 1) as i64;
    if k.is_multiple_of(2) {
        m
    } else {
        -m
    }
}

/// Iterator over nonzero integer vectors of length `len` in the frozen order:
/// max-norm, then support size, then support positions (lexicographic),
/// then coefficients by key `1, -1, 2, -2, ...` (lexicographic), up to
/// `max_norm`.
pub struct PlaneEnumeration {
    len: usize,
    max_norm: u32,
    norm: u32,
    size: usize,
    positions: Vec<usize>,
    keys: Vec<u32>,
    started: bool,
}

impl PlaneEnumeration {
    pub fn new(len: usize, max_norm: u32) -> PlaneEnumeration {
        PlaneEnumeration {
            len,
            max_norm,
            norm: 1,
            size: 1,
            positions: vec![0],
            keys: vec![0],
            started: false,
        }
    }

    fn keys_have_norm(&self) -> bool {
        self.keys.iter().any(|&k| k / 2 + 1 == self.norm)
    }

    fn advance_keys(&mut self) -> bool {
        let top = 2 * self.norm;
        for i in (0..self.keys.len()).rev() {
            if self.keys[i] + 1 < top {
                self.keys[i] += 1;
                for k in &mut self.keys[i + 1..] {
                    *k = 0;
                }
                return true;
            }
        }
        false
    }

    fn advance_positions(&mut self) -> bool {
        let s = self.positions.len();
        for i in (0..s).rev() {
            if self.positions[i] < self.len - s + i {
                self.positions[i] += 1;
                for j in i + 1..s {
                    self.positions[j] = self.positions[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }

    fn step(&mut self) -> bool {
        if self.advance_keys() {
            return true;
        }
        self.keys = vec![0; self.size];
        if self.advance_positions() {
            return true;
        }
        if self.size < self.len {
            self.size += 1;
        } else {
            if self.norm >= self.max_norm {
                return false;
            }
            self.norm += 1;
            self.size = 1;
        }
        self.positions = (0..self.size).collect();
        self.keys = vec![0; self.size];
        true
    }
}

impl Iterator for PlaneEnumeration {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        loop {
            if self.started {
                if !self.step() {
                    return None;
                }
            } else {
                self.started = true;
            }
            if !self.keys_have_norm() {
                continue;
            }
            let mut v = vec![0; self.len];
            for (&p, &k) in self.positions.iter().zip(&self.keys) {
                v[p] = key_value(k);
            }
            return Some(v);
        }
    }
}

/// Default bound on the max-norm searched by [`pick_generic_plane`].
pub const PLANE_SEARCH_NORM: u32 = 3;

/// Transversal planes in the frozen enumeration order.
pub fn transversal_planes(c: &SecantCone) -> impl Iterator<Item = ProjectionPlane> + '_ {
    PlaneEnumeration::new(2 * c.n, PLANE_SEARCH_NORM)
        .map(|v| v.into_iter().map(Rat::int).collect::<Vec<_>>())
        .filter(|z| is_transversal_at(c, z))
        .map(|z| ProjectionPlane::from_rats(&z).expect("even length"))
}

/// First transversal plane of the frozen enumeration.
pub fn pick_generic_plane(c: &SecantCone) -> Result<ProjectionPlane, ConeError> {
    transversal_planes(c)
        .next()
        .ok_or(ConeError::SearchExhausted(PLANE_SEARCH_NORM))
}

/// First two transversal planes of the enumeration with different kernels
/// (for `n = 2`, where every transversal pair spans the whole space, the
/// first two distinct ones).
pub fn pick_two_generic_planes(
    c: &SecantCone,
) -> Result<(ProjectionPlane, ProjectionPlane), ConeError> {
    let mut it = transversal_planes(c);
    let first = it
        .next()
        .ok_or(ConeError::SearchExhausted(PLANE_SEARCH_NORM))?;
    let span = first.row_span();
    let second = if c.n == 2 {
        it.next()
    } else {
        it.find(|p| p.row_span() != span)
    }
    .ok_or(ConeError::SearchExhausted(PLANE_SEARCH_NORM))?;
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch::{standardize, Branch};

    fn cone_of(exps: &[u32]) -> SecantCone {
        secant_cone(&standardize(&Branch::monomial(exps).unwrap()).unwrap())
    }

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&a| Rat::int(a)).collect()
    }

    #[test]
    fn cone_of_m467_has_two_planes() {
        let c = cone_of(&[4, 6, 7]);
        assert_eq!(c.planes.len(), 2);
        assert_eq!(c.planes[0].direction, ints(&[0, 1, 0]));
        assert_eq!(c.planes[0].residues, vec![1, 3]);
        assert_eq!(c.planes[0].jumps, vec![6, 6]);
        assert_eq!(c.planes[1].direction, ints(&[0, 0, 1]));
        assert_eq!(c.planes[1].residues, vec![2]);
        assert!(c.is_complete());
    }

    #[test]
    fn single_plane_cases() {
        let c = cone_of(&[4, 5, 7]);
        assert_eq!(c.directions(), vec![ints(&[0, 1, 0])]);
        let c = cone_of(&[5, 6, 8, 9]);
        assert_eq!(c.directions(), vec![ints(&[0, 1, 0, 0])]);
        assert_eq!(c.planes[0].residues, vec![1, 2, 3, 4]);
    }

    #[test]
    fn monomial_dichotomy_when_first_divides_second() {
        // every n1-th root of unity fixes t^n2, so only (0,0,1) remains
        for exps in [[3, 6, 7], [4, 8, 9], [5, 10, 11]] {
            assert_eq!(cone_of(&exps).directions(), vec![ints(&[0, 0, 1])]);
        }
        for exps in [[4, 6, 7], [6, 9, 10], [6, 8, 11]] {
            let dirs = cone_of(&exps).directions();
            assert_eq!(dirs, vec![ints(&[0, 1, 0]), ints(&[0, 0, 1])], "{exps:?}");
        }
    }

    #[test]
    fn proportional_directions_merge() {
        let b = Branch::parse(&["t^4", "t^6 + 2*t^7", "2*t^6 + 4*t^7"], &[]).unwrap();
        let c = secant_cone(&standardize(&b).unwrap());
        assert_eq!(c.planes.len(), 1);
        assert_eq!(c.planes[0].direction, ints(&[0, 1, 2]));
        assert_eq!(c.planes[0].residues, vec![1, 2, 3]);
    }

    #[test]
    fn transversality_examples() {
        let c = cone_of(&[4, 6, 7]);
        let yes = ProjectionPlane::from_ints(&[1, 0, 0, 0, 1, 1]).unwrap();
        let no = ProjectionPlane::from_ints(&[0, 1, 0, 0, 0, 1]).unwrap();
        assert!(is_transversal(&c, &yes).unwrap());
        assert!(!is_transversal(&c, &no).unwrap());
        let short = ProjectionPlane::from_ints(&[1, 0, 0, 1]).unwrap();
        assert!(matches!(
            is_transversal(&c, &short),
            Err(ConeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn enumeration_order_is_frozen() {
        let first: Vec<Vec<i64>> = PlaneEnumeration::new(3, 2).take(8).collect();
        assert_eq!(
            first,
            vec![
                vec![1, 0, 0],
                vec![-1, 0, 0],
                vec![0, 1, 0],
                vec![0, -1, 0],
                vec![0, 0, 1],
                vec![0, 0, -1],
                vec![1, 1, 0],
                vec![1, -1, 0],
            ]
        );
        // every vector of norm <= 2 appears exactly once
        assert_eq!(PlaneEnumeration::new(3, 2).count(), 5usize.pow(3) - 1);
        let norm2_first = PlaneEnumeration::new(3, 2).nth(26).unwrap();
        assert_eq!(norm2_first, vec![2, 0, 0]);
    }

    #[test]
    fn generic_plane_choices() {
        let c = cone_of(&[4, 6, 7]);
        let (p, q) = pick_two_generic_planes(&c).unwrap();
        assert_eq!(p.at_zero(), ints(&[1, 0, 0, 0, 1, 1]));
        assert_eq!(q.at_zero(), ints(&[1, 0, 0, 0, 1, -1]));

        let c = cone_of(&[3, 4]);
        assert_eq!(
            pick_generic_plane(&c).unwrap().at_zero(),
            ints(&[1, 0, 0, 1])
        );

        let c = cone_of(&[5, 6, 8, 9]);
        for (a8, a9) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let l = ProjectionPlane::from_ints(&[1, 0, 0, 0, 0, 1, a8, a9]).unwrap();
            assert!(is_transversal(&c, &l).unwrap());
        }
    }

    #[test]
    fn plane_with_parameters() {
        let params = vec!["s6".to_string()];
        let l = ProjectionPlane::parse("1,0,0,0,1,1+s6", &params).unwrap();
        assert!(l.has_params());
        assert_eq!(l.at_zero(), ints(&[1, 0, 0, 0, 1, 1]));
        assert_eq!(l.to_string(), "1,0,0,0,1,s6 + 1");
        assert!(matches!(
            ProjectionPlane::parse("1,0,0", &params),
            Err(ConeError::OddLength(3))
        ));
    }
}
