use super::matrix::bareiss_det;
use super::{ExactError, MPoly};

/// Sylvester matrix of `f` and `g` in the variable at `idx`, with entries
/// still living in the full context (they no longer involve that variable).
pub fn sylvester_matrix(f: &MPoly, g: &MPoly, idx: usize) -> Result<Vec<Vec<MPoly>>, ExactError> {
    let (m, n) = match (f.degree_in(idx), g.degree_in(idx)) {
        (Some(m), Some(n)) if m > 0 && n > 0 => (m as usize, n as usize),
        _ => {
            return Err(ExactError::ZeroDegree {
                var: f.vars()[idx].clone(),
            })
        }
    };
    let fc: Vec<MPoly> = (0..=m)
        .rev()
        .map(|k| f.coeff_of_power(idx, k as u32))
        .collect();
    let gc: Vec<MPoly> = (0..=n)
        .rev()
        .map(|k| g.coeff_of_power(idx, k as u32))
        .collect();
    let size = m + n;
    let zero = f.zero_like();
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![zero.clone(); size];
        for (k, c) in fc.iter().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![zero.clone(); size];
        for (k, c) in gc.iter().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Resultant of `f` and `g` with respect to `var`, as the fraction-free
/// determinant of their Sylvester matrix. The result lives in the context
/// with `var` removed.
pub fn sylvester_resultant(f: &MPoly, g: &MPoly, var: &str) -> Result<MPoly, ExactError> {
    let idx = f.var_index(var).ok_or_else(|| ExactError::ZeroDegree {
        var: var.to_string(),
    })?;
    let rows = sylvester_matrix(f, g, idx)?;
    let det = bareiss_det(rows);
    let rest: Vec<String> = f
        .vars()
        .iter()
        .filter(|v| v.as_str() != var)
        .cloned()
        .collect();
    Ok(det.embed(&rest))
}
