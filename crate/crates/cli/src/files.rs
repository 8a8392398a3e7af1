//! Line-oriented input files.
//!
//! `.branch`: `name:`, `params:`, one `coord:` per coordinate and
//! `option key = value` lines. `.module`: `params:`, `x:`, `y:` and one
//! `gen:` per generator. `.mf`: `params:`, `F:`, `d[i,j]:`, `h[i,j]:`
//! (1-based, `h` optional) and optionally the `x:`, `y:`, `gen:` lines of the
//! module the matrix presents. `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use curvemf::branch::{branch_vars, Branch};
use curvemf::exactalg::{MPoly, ParseError, ParseErrorKind, PolyMatrix};
use curvemf::matfact::{MatrixFactorization, ModuleData};
use curvemf::projection::{xy_vars, PlaneBranch};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl From<ParseError> for FileError {
    fn from(e: ParseError) -> FileError {
        let message = match e.kind {
            ParseErrorKind::Syntax(m) => format!("syntax error: {m}"),
            ParseErrorKind::UnknownVariable(v) => format!("unknown variable `{v}`"),
        };
        FileError {
            line: e.line,
            column: e.column,
            message,
        }
    }
}

fn err(line: usize, column: usize, message: impl Into<String>) -> FileError {
    FileError {
        line,
        column,
        message: message.into(),
    }
}

/// A `key: value` or `option key = value` line with the column where the
/// value starts.
struct Entry<'a> {
    line: usize,
    key: &'a str,
    value: &'a str,
    value_col: usize,
}

fn entries(text: &str) -> Result<Vec<Entry<'_>>, FileError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        let body = content.trim_start();
        if let Some(rest) = body.strip_prefix("option ") {
            let Some(eq) = rest.find('=') else {
                return Err(err(line, indent + 1, "expected `option key = value`"));
            };
            let start = indent + "option ".len() + eq + 1;
            let value = &content[start..];
            out.push(Entry {
                line,
                key: rest[..eq].trim(),
                value: value.trim(),
                value_col: start + (value.len() - value.trim_start().len()),
            });
            continue;
        }
        let Some(colon) = body.find(':') else {
            return Err(err(line, indent + 1, "expected `key: value`"));
        };
        let start = indent + colon + 1;
        let value = &content[start..];
        out.push(Entry {
            line,
            key: body[..colon].trim(),
            value: value.trim(),
            value_col: start + (value.len() - value.trim_start().len()),
        });
    }
    Ok(out)
}

fn parse_poly(e: &Entry<'_>, vars: &[String]) -> Result<MPoly, FileError> {
    if e.value.is_empty() {
        return Err(err(e.line, e.value_col + 1, "missing expression"));
    }
    Ok(MPoly::parse_at(e.value, vars, e.line, e.value_col)?)
}

fn parse_params(e: &Entry<'_>) -> Result<Vec<String>, FileError> {
    let mut out = Vec::new();
    for name in e.value.split([',', ' ']).filter(|s| !s.is_empty()) {
        let ok = name
            .chars()
            .next()
            .is_some_and(|c| c.is_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !ok || matches!(name, "t" | "x" | "y") {
            return Err(err(
                e.line,
                e.value_col + 1,
                format!("bad parameter name `{name}`"),
            ));
        }
        if !out.iter().any(|p| p == name) {
            out.push(name.to_string());
        }
    }
    Ok(out)
}

/// `params:` must precede every expression that may use them.
fn params_first(es: &[Entry<'_>]) -> Result<Vec<String>, FileError> {
    let mut params = Vec::new();
    let mut seen_expr = false;
    for e in es {
        if e.key == "params" {
            if seen_expr {
                return Err(err(e.line, 1, "`params:` must come before expressions"));
            }
            params = parse_params(e)?;
        } else if !matches!(e.key, "name") {
            seen_expr = true;
        }
    }
    Ok(params)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchFile {
    pub name: Option<String>,
    pub params: Vec<String>,
    pub coords: Vec<MPoly>,
    pub options: BTreeMap<String, u32>,
}

impl BranchFile {
    pub fn parse(text: &str) -> Result<BranchFile, FileError> {
        let es = entries(text)?;
        let params = params_first(&es)?;
        let vars = branch_vars(&params);
        let mut name = None;
        let mut coords = Vec::new();
        let mut options = BTreeMap::new();
        let mut last_line = 1;
        for e in &es {
            last_line = e.line;
            match e.key {
                "name" => name = Some(e.value.to_string()),
                "params" => {}
                "coord" => coords.push(parse_poly(e, &vars)?),
                "trunc" | "degree" | "param_degree" => {
                    let v = e.value.parse::<u32>().map_err(|_| {
                        err(e.line, e.value_col + 1, "expected a non-negative integer")
                    })?;
                    options.insert(e.key.to_string(), v);
                }
                other => {
                    return Err(err(e.line, 1, format!("unknown key `{other}`")));
                }
            }
        }
        if coords.len() < 2 {
            return Err(err(
                last_line,
                1,
                "a branch needs at least two `coord:` lines",
            ));
        }
        Ok(BranchFile {
            name,
            params,
            coords,
            options,
        })
    }

    pub fn to_branch(&self) -> Result<Branch, String> {
        Branch::new(self.coords.clone(), self.params.clone()).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleFile {
    pub name: Option<String>,
    pub params: Vec<String>,
    pub x: MPoly,
    pub y: MPoly,
    pub gens: Vec<MPoly>,
}

/// `x`, `y` and the generators.
type ModulePart = (Option<MPoly>, Option<MPoly>, Vec<MPoly>);

/// Parses the `x:`, `y:`, `gen:` part shared by `.module` and `.mf` files.
fn module_part(es: &[Entry<'_>], params: &[String]) -> Result<ModulePart, FileError> {
    let vars = branch_vars(params);
    let (mut x, mut y, mut gens) = (None, None, Vec::new());
    for e in es {
        match e.key {
            "x" => x = Some(parse_poly(e, &vars)?),
            "y" => y = Some(parse_poly(e, &vars)?),
            "gen" => gens.push(parse_poly(e, &vars)?),
            _ => {}
        }
    }
    Ok((x, y, gens))
}

impl ModuleFile {
    pub fn parse(text: &str) -> Result<ModuleFile, FileError> {
        let es = entries(text)?;
        let params = params_first(&es)?;
        let mut name = None;
        for e in &es {
            match e.key {
                "name" => name = Some(e.value.to_string()),
                "params" | "x" | "y" | "gen" => {}
                other => return Err(err(e.line, 1, format!("unknown key `{other}`"))),
            }
        }
        let (x, y, gens) = module_part(&es, &params)?;
        let last = es.last().map_or(1, |e| e.line);
        let x = x.ok_or_else(|| err(last, 1, "missing `x:`"))?;
        let y = y.ok_or_else(|| err(last, 1, "missing `y:`"))?;
        if gens.is_empty() {
            return Err(err(last, 1, "missing `gen:` lines"));
        }
        Ok(ModuleFile {
            name,
            params,
            x,
            y,
            gens,
        })
    }

    pub fn to_module(&self) -> Result<ModuleData, String> {
        let pb = plane_branch(&self.x, &self.y, &self.params)?;
        ModuleData::new(pb, self.gens.clone()).map_err(|e| e.to_string())
    }
}

fn plane_branch(x: &MPoly, y: &MPoly, params: &[String]) -> Result<PlaneBranch, String> {
    let b = Branch::new(vec![x.clone(), y.clone()], params.to_vec()).map_err(|e| e.to_string())?;
    PlaneBranch::new(x.clone(), y.clone(), params.to_vec(), b.trunc(), true)
        .map_err(|e| e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MfFile {
    pub name: Option<String>,
    pub params: Vec<String>,
    pub f: MPoly,
    pub d: PolyMatrix,
    pub h: Option<PolyMatrix>,
    pub module: Option<ModuleFile>,
}

fn matrix_index(key: &str) -> Option<(char, usize, usize)> {
    let which = key.chars().next()?;
    if !matches!(which, 'd' | 'h') {
        return None;
    }
    let inner = key[1..].strip_prefix('[')?.strip_suffix(']')?;
    let (i, j) = inner.split_once(',')?;
    Some((which, i.trim().parse().ok()?, j.trim().parse().ok()?))
}

impl MfFile {
    pub fn parse(text: &str) -> Result<MfFile, FileError> {
        let es = entries(text)?;
        let params = params_first(&es)?;
        let vars = xy_vars(&params);
        let mut name = None;
        let mut f = None;
        let mut cells: BTreeMap<(char, usize, usize), MPoly> = BTreeMap::new();
        for e in &es {
            match e.key {
                "name" => name = Some(e.value.to_string()),
                "params" | "x" | "y" | "gen" => {}
                "F" => f = Some(parse_poly(e, &vars)?),
                key => match matrix_index(key) {
                    Some((w, i, j)) if i >= 1 && j >= 1 => {
                        if cells.insert((w, i, j), parse_poly(e, &vars)?).is_some() {
                            return Err(err(e.line, 1, format!("duplicate entry `{key}`")));
                        }
                    }
                    _ => return Err(err(e.line, 1, format!("unknown key `{key}`"))),
                },
            }
        }
        let last = es.last().map_or(1, |e| e.line);
        let f = f.ok_or_else(|| err(last, 1, "missing `F:`"))?;
        let b = cells.keys().map(|&(_, i, j)| i.max(j)).max().unwrap_or(0);
        if b == 0 {
            return Err(err(last, 1, "missing `d[i,j]:` entries"));
        }
        let build = |w: char| -> Option<PolyMatrix> {
            if !cells.keys().any(|k| k.0 == w) {
                return None;
            }
            let entries = (1..=b)
                .flat_map(|i| (1..=b).map(move |j| (i, j)))
                .map(|(i, j)| {
                    cells
                        .get(&(w, i, j))
                        .cloned()
                        .unwrap_or_else(|| MPoly::zero(&vars))
                })
                .collect();
            Some(PolyMatrix::new(b, b, entries))
        };
        let d = build('d').ok_or_else(|| err(last, 1, "missing `d[i,j]:` entries"))?;
        let h = build('h');
        let (x, y, gens) = module_part(&es, &params)?;
        let module = match (x, y) {
            (Some(x), Some(y)) if !gens.is_empty() => Some(ModuleFile {
                name: None,
                params: params.clone(),
                x,
                y,
                gens,
            }),
            (None, None) if gens.is_empty() => None,
            _ => {
                return Err(err(
                    last,
                    1,
                    "module data needs `x:`, `y:` and `gen:` lines",
                ))
            }
        };
        Ok(MfFile {
            name,
            params,
            f,
            d,
            h,
            module,
        })
    }

    pub fn to_mf(&self) -> Result<MatrixFactorization, String> {
        let module = match &self.module {
            Some(m) => Some(m.to_module()?),
            None => None,
        };
        let h = match &self.h {
            Some(h) => h.clone(),
            None => self.d.adjugate().map_err(|e| e.to_string())?,
        };
        Ok(MatrixFactorization {
            f: self.f.clone(),
            d: self.d.clone(),
            h,
            module,
        })
    }
}

/// Canonical `.mf` text for a factorization.
pub fn write_mf(name: Option<&str>, params: &[String], mf: &MatrixFactorization) -> String {
    let mut s = String::new();
    if let Some(n) = name {
        let _ = writeln!(s, "name: {n}");
    }
    if !params.is_empty() {
        let _ = writeln!(s, "params: {}", params.join(", "));
    }
    let _ = writeln!(s, "F: {}", mf.f);
    for (w, m) in [('d', &mf.d), ('h', &mf.h)] {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let _ = writeln!(s, "{w}[{},{}]: {}", i + 1, j + 1, m.get(i, j));
            }
        }
    }
    if let Some(m) = &mf.module {
        let _ = writeln!(s, "x: {}", m.plane.x);
        let _ = writeln!(s, "y: {}", m.plane.y);
        for g in &m.gens {
            let _ = writeln!(s, "gen: {g}");
        }
    }
    s
}
