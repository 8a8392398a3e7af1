use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde_json::{json, Value};

use curvemf::branch::{
    branch_vars, semigroup_auto, standardize, Branch, SemigroupData, StandardBranch,
};
use curvemf::cone5::{
    is_transversal, pick_generic_plane, pick_two_generic_planes, ProjectionPlane, SecantCone,
};
use curvemf::cone5::{secant_cone, ConeError};
use curvemf::exactalg::{MPoly, Rat};
use curvemf::matfact::{
    build_mf, check_generic as check_generic_lib, is_algebra as is_algebra_lib,
    is_generic_projection_witness, mf_equivalent, quotient_generators, verify_mf as verify_mf_lib,
    Certificate, EquivalenceVerdict, MatrixFactorization, MfCaps, MfReport,
};
use curvemf::projection::{
    delta_bounds_check, implicitize as implicitize_lib, mu_bar, plane_puiseux,
    project as project_lib, substitute_xy, Assignment, PlaneBranch, Specialize,
};

use crate::files::{write_mf, BranchFile, FileError, MfFile, ModuleFile};
use crate::report::{self, Report};
use crate::{Common, PlaneArgs};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or input files.
    Usage(String),
    /// A computation failed.
    Math(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Math(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Math(m) => f.write_str(m),
        }
    }
}

fn math(e: impl fmt::Display) -> CliError {
    CliError::Math(e.to_string())
}

fn usage(e: impl fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn at(path: &Path, e: FileError) -> CliError {
    usage(format!("{}:{e}", path.display()))
}

fn file_name(path: &Path) -> String {
    path.file_name().map_or_else(
        || path.display().to_string(),
        |n| n.to_string_lossy().into_owned(),
    )
}

struct Loaded {
    file: BranchFile,
    branch: Branch,
}

fn load_branch(path: &Path, common: &Common, report: &mut Report) -> Result<Loaded, CliError> {
    let file = BranchFile::parse(&read(path)?).map_err(|e| at(path, e))?;
    let mut branch = file
        .to_branch()
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let trunc = common
        .trunc
        .or_else(|| file.options.get("trunc").map(|&t| t as usize));
    if let Some(t) = trunc {
        branch = branch.with_trunc(t);
    }
    report.input("file", file_name(path));
    if let Some(n) = &file.name {
        report.input("name", n.as_str());
    }
    report.input(
        "coords",
        Value::Array(branch.coords().iter().map(report::poly).collect()),
    );
    if !branch.params().is_empty() {
        report.input("params", branch.params().to_vec());
    }
    report.input("trunc", branch.trunc());
    Ok(Loaded { file, branch })
}

/// Values given with `--param`; names must be declared parameters.
fn assignment(common: &Common, declared: &[String]) -> Result<Assignment, CliError> {
    let mut out = Assignment::new();
    for item in &common.params {
        let Some((name, value)) = item.split_once('=') else {
            return Err(usage(format!("--param expects NAME=VALUE, got `{item}`")));
        };
        let name = name.trim();
        if !declared.iter().any(|p| p == name) {
            return Err(usage(format!(
                "--param: `{name}` is not a declared parameter"
            )));
        }
        let v: Rat = value
            .trim()
            .parse()
            .map_err(|e| usage(format!("--param {name}: {e}")))?;
        out.insert(name.to_string(), v);
    }
    Ok(out)
}

/// Extends `asg` to every parameter, setting the missing ones to 0.
fn complete(asg: &Assignment, params: &[String], report: &mut Report) -> Assignment {
    let mut out = asg.clone();
    for p in params {
        if !out.contains_key(p) {
            report.warn(format!("parameter {p} set to 0"));
            out.insert(p.clone(), Rat::zero());
        }
    }
    out
}

fn assignment_json(asg: &Assignment) -> Value {
    Value::Object(
        asg.iter()
            .map(|(k, v)| (k.clone(), report::rat(v)))
            .collect(),
    )
}

fn standard(b: &Branch, report: &mut Report) -> Result<StandardBranch, CliError> {
    let sb = standardize(b).map_err(math)?;
    if !sb.is_exact() {
        report.warn(format!(
            "branch was reparametrized; coordinates are known modulo t^{}",
            sb.trunc()
        ));
    }
    Ok(sb)
}

fn sg_generators(sg: &SemigroupData) -> Vec<usize> {
    let set: BTreeSet<usize> = sg.elements.iter().copied().collect();
    let mut gens: Vec<usize> = Vec::new();
    for &k in sg.elements.iter().filter(|&&k| k > 0) {
        if !set.range(1..k).any(|&a| set.contains(&(k - a))) {
            gens.push(k);
        }
    }
    gens
}

fn semigroup_json(sg: &SemigroupData) -> Value {
    json!({
        "generators": sg_generators(sg),
        "gaps": sg.gaps,
        "delta": sg.delta,
        "conductor": sg.conductor,
        "frobenius": sg.frobenius,
        "gorenstein": sg.gorenstein,
    })
}

fn plane_json(l: &ProjectionPlane) -> Value {
    Value::String(format!("({l})"))
}

fn cone_err(e: ConeError) -> CliError {
    match e {
        ConeError::SearchExhausted(_) => math(e),
        _ => usage(format!("--plane: {e}")),
    }
}

fn choose_plane(
    args: &PlaneArgs,
    sb: &StandardBranch,
    cone: &SecantCone,
    report: &mut Report,
) -> Result<ProjectionPlane, CliError> {
    let l = match &args.plane {
        Some(text) => ProjectionPlane::parse(text, sb.params()).map_err(cone_err)?,
        None => pick_generic_plane(cone).map_err(cone_err)?,
    };
    if l.n() != sb.dim() {
        return Err(usage(format!(
            "--plane: {} coefficients given for a branch in {} variables",
            2 * l.n(),
            sb.dim()
        )));
    }
    report.input("plane", plane_json(&l));
    report.input(
        "plane_source",
        if args.plane.is_some() {
            "given"
        } else {
            "auto"
        },
    );
    Ok(l)
}

pub fn invariants(path: &Path, common: &Common) -> Result<Report, CliError> {
    let mut r = Report::new("invariants");
    let Loaded { branch, .. } = load_branch(path, common, &mut r)?;
    let asg = assignment(common, branch.params())?;
    let branch = if branch.params().is_empty() {
        branch
    } else {
        let full = complete(&asg, branch.params(), &mut r);
        r.input("param_values", assignment_json(&full));
        let values: Vec<Rat> = branch.params().iter().map(|p| full[p].clone()).collect();
        branch.specialize(&values).map_err(math)?
    };
    let sb = standard(&branch, &mut r)?;
    let sg = semigroup_auto(&sb).map_err(math)?;
    r.result("dim", sb.dim());
    r.result("multiplicity", sb.e());
    r.result("semigroup", semigroup_json(&sg));
    r.result("delta", sg.delta);
    if sb.dim() == 2 {
        let c = sb.coords();
        let pb = PlaneBranch::new(
            c[0].clone(),
            c[1].clone(),
            vec![],
            sb.trunc(),
            sb.is_exact(),
        )
        .map_err(math)?;
        let p = plane_puiseux(&pb).map_err(math)?;
        r.result(
            "puiseux",
            json!({
                "char_exponents": p.char_exponents,
                "multiplicity_sequence": p.mult_sequence,
                "semigroup_generators": p.sg_generators,
                "mu": p.mu,
                "delta": p.delta,
            }),
        );
        r.check(
            "delta_gaps_equals_delta_multiplicities",
            p.delta == sg.delta,
        );
    } else {
        let mb = mu_bar(&sb).map_err(math)?;
        let bounds = delta_bounds_check(&sb).map_err(math)?;
        let pb = project_lib(&sb, &mb.planes[0], false).map_err(math)?;
        let beta = quotient_generators(&sb, &pb).map_err(math)?.b();
        r.result(
            "generic_projection",
            json!({
                "planes": [plane_json(&mb.planes[0]), plane_json(&mb.planes[1])],
                "char_exponents": mb.puiseux[0].char_exponents,
                "mu": mb.mu,
                "delta": bounds.delta_y,
                "delta_upper_bound": bounds.upper,
                "module_generators": beta,
            }),
        );
        r.result("cone_planes", secant_cone(&sb).planes.len());
        r.check("delta_lower_bound", bounds.lower_ok);
        r.check("delta_upper_bound", bounds.upper_ok);
    }
    Ok(r)
}

pub fn cone5(path: &Path, common: &Common) -> Result<Report, CliError> {
    let mut r = Report::new("cone5");
    let Loaded { branch, .. } = load_branch(path, common, &mut r)?;
    assignment(common, branch.params())?;
    if !common.params.is_empty() {
        r.warn("the cone is computed at parameters = 0; --param is ignored");
    }
    let sb = standard(&branch, &mut r)?;
    let cone = secant_cone(&sb);
    r.result("multiplicity", cone.e);
    r.result("tangent", report::rats(&cone.tangent()));
    let planes: Vec<Value> = cone
        .planes
        .iter()
        .map(|p| {
            json!({
                "direction": report::rats(&p.direction),
                "residues": p.residues,
                "jumps": p.jumps,
            })
        })
        .collect();
    r.result("planes", planes);
    r.result("complete", cone.is_complete());
    if !cone.is_complete() {
        r.warn(format!(
            "residues {:?} have no jump below the known precision",
            cone.truncated_residues
        ));
    }
    let (p, q) = pick_two_generic_planes(&cone).map_err(cone_err)?;
    r.result("generic_planes", vec![plane_json(&p), plane_json(&q)]);
    Ok(r)
}

fn projected(
    path: &Path,
    plane: &PlaneArgs,
    common: &Common,
    r: &mut Report,
) -> Result<
    (
        Loaded,
        StandardBranch,
        ProjectionPlane,
        PlaneBranch,
        Assignment,
    ),
    CliError,
> {
    let loaded = load_branch(path, common, r)?;
    let asg = assignment(common, loaded.branch.params())?;
    let sb = standard(&loaded.branch, r)?;
    let cone = secant_cone(&sb);
    let l = choose_plane(plane, &sb, &cone, r)?;
    let transversal = is_transversal(&cone, &l).map_err(cone_err)?;
    r.check("transversal", transversal);
    let pb = project_lib(&sb, &l, true).map_err(math)?;
    Ok((loaded, sb, l, pb, asg))
}

pub fn project(path: &Path, plane: &PlaneArgs, common: &Common) -> Result<Report, CliError> {
    let mut r = Report::new("project");
    let (_, _, _, pb, asg) = projected(path, plane, common, &mut r)?;
    r.result("x", report::poly(&pb.x));
    r.result("y", report::poly(&pb.y));
    if !pb.params.is_empty() {
        r.result("params", pb.params.clone());
    }
    let p = plane_puiseux(&pb).map_err(math)?;
    r.result(
        "puiseux",
        json!({"char_exponents": p.char_exponents, "mu": p.mu, "delta": p.delta}),
    );
    if !asg.is_empty() {
        let full = complete(&asg, &pb.params, &mut r);
        let s = pb.specialize(&full).map_err(math)?;
        r.input("param_values", assignment_json(&full));
        r.result(
            "specialized",
            json!({"x": report::poly(&s.x), "y": report::poly(&s.y)}),
        );
    }
    Ok(r)
}

pub fn implicitize(path: &Path, plane: &PlaneArgs, common: &Common) -> Result<Report, CliError> {
    let mut r = Report::new("implicitize");
    let (_, _, _, pb, asg) = projected(path, plane, common, &mut r)?;
    if !pb.exact {
        r.warn("the projection is a truncated series; no exact equation exists");
    }
    let eq = implicitize_lib(&pb).map_err(math)?;
    r.result("F", report::poly(&eq.f));
    r.result("resultant", report::poly(&eq.raw));
    r.result(
        "normalization",
        json!({
            "y_power": eq.normalization.y_power,
            "coefficient": report::poly(&eq.normalization.coefficient),
            "param_order": eq.normalization.param_order,
        }),
    );
    r.result("exact", eq.is_exact());
    if eq.is_exact() {
        r.check("vanishes_on_branch", substitute_xy(&eq.f, &pb).is_zero());
    } else {
        r.warn(format!(
            "F is normalized by a series inverse, exact to total degree {} in the parameters",
            eq.normalization.param_order.unwrap_or(0)
        ));
    }
    if !asg.is_empty() {
        let full = complete(&asg, &pb.params, &mut r);
        r.input("param_values", assignment_json(&full));
        let spec = eq.specialize(&full).map_err(math)?;
        let direct = implicitize_lib(&pb.specialize(&full).map_err(math)?).map_err(math)?;
        r.result("specialized", json!({"F": report::poly(&direct.f)}));
        if eq.is_exact() {
            r.check("specialization_commutes", spec.f == direct.f);
        }
    }
    Ok(r)
}

fn mf_checks(r: &mut Report, prefix: &str, v: &MfReport) {
    r.check(&format!("{prefix}dh_is_F_id"), v.dh_is_f_id);
    r.check(&format!("{prefix}hd_is_F_id"), v.hd_is_f_id);
    r.check(
        &format!("{prefix}entries_in_max_ideal"),
        v.entries_in_max_ideal,
    );
    r.check(
        &format!("{prefix}det_is_unit_multiple_of_F"),
        v.det_ratio.as_ref().is_some_and(|c| !c.is_zero()),
    );
    if let Some(ok) = v.columns_are_syzygies {
        r.check(&format!("{prefix}columns_are_syzygies"), ok);
    }
}

fn mf_results(mf: &MatrixFactorization, v: &MfReport) -> Value {
    json!({
        "F": report::poly(&mf.f),
        "size": mf.b(),
        "d": report::matrix(&mf.d),
        "h": report::matrix(&mf.h),
        "det_ratio": v.det_ratio.as_ref().map(report::rat),
        "first_failure": v.first_failure,
    })
}

/// Verifies the factorization with its parameters replaced by values.
fn specialized_mf(
    mf: &MatrixFactorization,
    params: &[String],
    asg: &Assignment,
    r: &mut Report,
) -> Result<(), CliError> {
    let full = complete(asg, params, r);
    r.input("param_values", assignment_json(&full));
    let s = MatrixFactorization {
        f: mf.f.specialize(&full).map_err(math)?,
        d: mf.d.specialize(&full).map_err(math)?,
        h: mf.h.specialize(&full).map_err(math)?,
        module: None,
    };
    let v = verify_mf_lib(&s);
    r.result("specialized", mf_results(&s, &v));
    mf_checks(r, "specialized.", &v);
    Ok(())
}

pub fn matfact(
    path: &Path,
    plane: &PlaneArgs,
    common: &Common,
    degree: Option<u32>,
    out: Option<&Path>,
) -> Result<Report, CliError> {
    let mut r = Report::new("matfact");
    let loaded = load_branch(path, common, &mut r)?;
    let asg = assignment(common, loaded.branch.params())?;
    let sb = standard(&loaded.branch, &mut r)?;
    let cone = secant_cone(&sb);
    let l = choose_plane(plane, &sb, &cone, &mut r)?;
    let opts = &loaded.file.options;
    let mut caps = MfCaps {
        degree: degree.or_else(|| opts.get("degree").copied()),
        ..MfCaps::default()
    };
    if let Some(&p) = opts.get("param_degree") {
        caps.param_degree = p;
    }
    r.input(
        "caps",
        json!({
            "degree": caps.degree,
            "param_degree": caps.param_degree,
            "max_param_degree": caps.max_param_degree,
            "candidates": caps.candidates,
        }),
    );
    let built = build_mf(&sb, &l, &caps).map_err(math)?;
    let mf = &built.mf;
    let module = mf.module.as_ref().expect("build_mf records the module");
    let v = verify_mf_lib(mf);
    r.result("factorization", mf_results(mf, &v));
    r.result(
        "module",
        json!({
            "x": report::poly(&module.plane.x),
            "y": report::poly(&module.plane.y),
            "generators": module.gens.iter().map(report::poly).collect::<Vec<_>>(),
            "generator_orders": module.gen_orders(),
        }),
    );
    r.result("degree", built.degree);
    r.result("param_degree", built.param_degree);
    mf_checks(&mut r, "", &v);
    if !asg.is_empty() {
        specialized_mf(mf, &module.plane.params, &asg, &mut r)?;
    }
    if let Some(out) = out {
        let text = write_mf(loaded.file.name.as_deref(), &module.plane.params, mf);
        std::fs::write(out, text).map_err(|e| usage(format!("{}: {e}", out.display())))?;
        r.input("out", file_name(out));
    }
    Ok(r)
}

fn load_mf(path: &Path) -> Result<(MfFile, MatrixFactorization), CliError> {
    let file = MfFile::parse(&read(path)?).map_err(|e| at(path, e))?;
    let mf = file
        .to_mf()
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok((file, mf))
}

pub fn verify_mf(path: &Path, common: &Common) -> Result<Report, CliError> {
    let mut r = Report::new("verify-mf");
    let (file, mf) = load_mf(path)?;
    r.input("file", file_name(path));
    if file.h.is_none() {
        r.warn("no h given; using the adjugate of d");
    }
    let asg = assignment(common, &file.params)?;
    let v = verify_mf_lib(&mf);
    r.result("factorization", mf_results(&mf, &v));
    mf_checks(&mut r, "", &v);
    if !asg.is_empty() {
        specialized_mf(&mf, &file.params, &asg, &mut r)?;
    }
    Ok(r)
}

pub fn is_algebra(path: &Path, identity: usize) -> Result<Report, CliError> {
    let mut r = Report::new("is-algebra");
    let file = ModuleFile::parse(&read(path)?).map_err(|e| at(path, e))?;
    let m = file
        .to_module()
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    r.input("file", file_name(path));
    r.input("identity", identity);
    if identity == 0 || identity > m.b() {
        return Err(usage(format!(
            "--identity must be between 1 and {}, got {identity}",
            m.b()
        )));
    }
    let a = is_algebra_lib(&m, identity - 1).map_err(math)?;
    r.result("is_algebra", a.is_algebra);
    r.result(
        "witness",
        a.witness
            .map(|(i, j)| format!("{}·{}", m.gens[i], m.gens[j])),
    );
    r.result(
        "witness_indices",
        a.witness.map(|(i, j)| vec![i + 1, j + 1]),
    );
    r.result("witness_residual_order", a.witness_order);
    r.result("trunc", a.trunc);
    r.check("is_algebra", a.is_algebra);
    Ok(r)
}

pub fn equiv_mf(left: &Path, right: &Path, degree: u32) -> Result<Report, CliError> {
    let mut r = Report::new("equiv-mf");
    let (_, a) = load_mf(left)?;
    let (_, b) = load_mf(right)?;
    r.input("left", file_name(left));
    r.input("right", file_name(right));
    r.input("degree", degree);
    let verdict = mf_equivalent(&a, &b, degree).map_err(math)?;
    let equivalent = matches!(verdict, EquivalenceVerdict::Equivalent { .. });
    match verdict {
        EquivalenceVerdict::Equivalent { phi, psi } => {
            r.result("verdict", "equivalent");
            r.result("phi", report::matrix(&phi));
            r.result("psi", report::matrix(&psi));
        }
        EquivalenceVerdict::Inequivalent(cert) => {
            r.result("verdict", "inequivalent");
            let c = match cert {
                Certificate::CokernelLength { k, left, right } => json!({
                    "kind": "cokernel_length",
                    "k": k,
                    "left": left,
                    "right": right,
                }),
                Certificate::ValueSets { left, right } => json!({
                    "kind": "value_sets",
                    "left": left,
                    "right": right,
                }),
            };
            r.result("certificate", c);
        }
        EquivalenceVerdict::Inconclusive { degree } => {
            r.result("verdict", "inconclusive");
            r.warn(format!(
                "no intertwiner of degree <= {degree} and no distinguishing invariant"
            ));
        }
    }
    r.check("equivalent", equivalent);
    Ok(r)
}

pub fn check_generic(
    path: &Path,
    plane: &PlaneArgs,
    xy: Option<(String, String)>,
    common: &Common,
) -> Result<Report, CliError> {
    let mut r = Report::new("check-generic");
    let loaded = load_branch(path, common, &mut r)?;
    assignment(common, loaded.branch.params())?;
    let sb = standard(&loaded.branch, &mut r)?;
    let w = match xy {
        Some((x, y)) => {
            let vars = branch_vars(sb.params());
            let parse = |flag: &str, s: &str| {
                MPoly::parse_at(s, &vars, 1, 0).map_err(|e| usage(format!("--{flag}: {e}")))
            };
            let (px, py) = (parse("x", &x)?, parse("y", &y)?);
            r.input("x", report::poly(&px));
            r.input("y", report::poly(&py));
            check_generic_lib(&sb, px, py).map_err(math)?
        }
        None => {
            let cone = secant_cone(&sb);
            let l = choose_plane(plane, &sb, &cone, &mut r)?;
            let pb = project_lib(&sb, &l, true).map_err(math)?;
            r.result("x", report::poly(&pb.x));
            r.result("y", report::poly(&pb.y));
            is_generic_projection_witness(&sb, &pb).map_err(math)?
        }
    };
    r.result("independent_mod_m2", w.independent_mod_m2);
    r.result("mu", w.mu);
    r.result("mu_generic", w.mu_bar);
    r.result("reason", w.reason.clone());
    r.result("generic", w.holds);
    r.check("generic", w.holds);
    Ok(r)
}
