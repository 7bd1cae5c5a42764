use std::fs;
use std::path::{Path, PathBuf};

use maxmin_core::format::{decode_instance, encode_instance};
use maxmin_core::local::{approx_ratio, run_local_detailed, AlgoParams, LocalError};
use maxmin_core::lowerbound::{
    appendix_solution, build_s, build_sk, growth_bound, high_girth_biregular, relative_growth, utility_upper_bound,
    BallInstance, GirthBudget, LowerBoundError, LowerBoundInstance, LowerBoundParams,
};
use maxmin_core::lp::{solve_max_min, LpError};
use maxmin_core::model::{check_feasible, min_utility, objective_utility, validate_instance};
use maxmin_core::rational;
use maxmin_core::{MaxMinInstance, Rational, VertexId};

use crate::manifest::{Metric, RunManifest};
use crate::CliError;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const S_FILE: &str = "S.json";

pub fn sk_file(k: usize) -> String {
    format!("sk-{k}.json")
}

pub fn read_instance(path: &Path) -> Result<MaxMinInstance, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let inst = decode_instance(&bytes).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let report = validate_instance(&inst);
    if !report.ok() {
        return Err(CliError::Input(format!("{}: invalid instance\n{report}", path.display())));
    }
    Ok(inst)
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn lp_error(e: LpError) -> CliError {
    match e {
        LpError::Unbounded | LpError::NoObjectives => CliError::Unsupported(e.to_string()),
        LpError::Shape(_) | LpError::InvalidInstance(_) => CliError::Input(e.to_string()),
    }
}

fn local_error(e: LocalError) -> CliError {
    match e {
        LocalError::InvalidParams { .. } | LocalError::InvalidInstance(_) => CliError::Input(e.to_string()),
        LocalError::Lp(e) => lp_error(e),
        _ => CliError::Unsupported(e.to_string()),
    }
}

pub fn lowerbound_error(e: LowerBoundError) -> CliError {
    match e {
        LowerBoundError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
        LowerBoundError::InvalidParams(_) => CliError::Input(e.to_string()),
        _ => CliError::Unsupported(e.to_string()),
    }
}

pub fn solve(path: &Path) -> Result<RunManifest, CliError> {
    let inst = read_instance(path)?;
    let sol = solve_max_min(&inst).map_err(lp_error)?;
    let mut m = RunManifest::new("solve");
    m.param("instance", path.display());
    m.inputs.push(path.display().to_string());
    m.metric("omega", Metric::rational(&sol.omega));
    m.set_assignment(&sol.x);
    Ok(m)
}

pub struct RunLocalArgs<'a> {
    pub instance: &'a Path,
    pub delta_i: usize,
    pub delta_k: usize,
    pub l: usize,
    pub emit_subproblems: Option<&'a Path>,
}

/// Runs the algorithm and checks every objective against `omega* / alpha`.
pub fn run_local(args: &RunLocalArgs) -> Result<RunManifest, CliError> {
    let inst = read_instance(args.instance)?;
    let p = AlgoParams::new(args.delta_i, args.delta_k, args.l).map_err(local_error)?;
    let run = run_local_detailed(&inst, &p).map_err(local_error)?;
    let omega = solve_max_min(&inst).map_err(lp_error)?.omega;
    let alpha = approx_ratio(&p);

    let mut m = RunManifest::new("run-local");
    m.param("instance", args.instance.display());
    m.param("delta_i", p.delta_i);
    m.param("delta_k", p.delta_k);
    m.param("L", p.l);
    m.inputs.push(args.instance.display().to_string());

    let feasible = check_feasible(&inst, &run.x).is_empty();
    let floor = &omega / &alpha;
    let mut within = true;
    for k in inst.objectives() {
        let u = objective_utility(&inst, &run.x, k).map_err(|e| CliError::Input(e.to_string()))?;
        within &= u >= floor;
    }
    let low = min_utility(&inst, &run.x).map_err(|e| CliError::Input(e.to_string()))?;
    m.metric("alpha", Metric::rational(&alpha));
    m.metric("omega", Metric::rational(&omega));
    m.metric("min_utility", Metric::rational(&low));
    m.metric("feasible", Metric::flag(feasible));
    m.metric("within_ratio", Metric::flag(within));
    m.metric("subproblems", Metric::count(run.subproblems.len()));
    if low > rational::zero() {
        m.metric("realized_ratio", Metric::rational(&(&omega / &low)));
    }
    m.set_assignment(&run.x);

    if let Some(dir) = args.emit_subproblems {
        fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
        for (n, doc) in run.subproblems.keys().enumerate() {
            let name = format!("subproblem-{n:04}.json");
            write_file(&dir.join(&name), doc)?;
            m.outputs.push(dir.join(name).display().to_string());
        }
    }
    m.exit_status = if feasible && within { 0 } else { 4 };
    Ok(m)
}

pub struct GenArgs {
    pub d_i: usize,
    pub d_k: usize,
    pub s: usize,
    pub r: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub sk: Vec<usize>,
    pub max_vertices: usize,
    pub attempts_per_lift: usize,
    pub growth_j: u32,
    pub solve: bool,
}

/// Parameters as recorded in a manifest, so verification can rebuild them.
pub fn record_gen_params(m: &mut RunManifest, a: &GenArgs) {
    m.param("d_i", a.d_i);
    m.param("d_k", a.d_k);
    m.param("s", a.s);
    m.param("r", a.r);
    m.param("max_vertices", a.max_vertices);
    m.param("attempts_per_lift", a.attempts_per_lift);
    m.param("growth_j", a.growth_j);
    m.param("solve", a.solve);
    m.param("sk", a.sk.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
    m.seed = Some(a.seed);
}

pub fn gen_args_from(m: &RunManifest, out: &Path) -> Result<GenArgs, CliError> {
    let sk: String = m.get_param("sk")?;
    let sk = sk
        .split(',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| CliError::Input(format!("bad objective id {t:?} in manifest"))))
        .collect::<Result<_, _>>()?;
    Ok(GenArgs {
        d_i: m.get_param("d_i")?,
        d_k: m.get_param("d_k")?,
        s: m.get_param("s")?,
        r: m.get_param("r")?,
        seed: m.seed.ok_or_else(|| CliError::Input("manifest lacks a seed".into()))?,
        out: out.to_path_buf(),
        sk,
        max_vertices: m.get_param("max_vertices")?,
        attempts_per_lift: m.get_param("attempts_per_lift")?,
        growth_j: m.get_param("growth_j")?,
        solve: m.get_param("solve")?,
    })
}

/// The deterministic part of `gen-lowerbound`: skeleton, `S` and its girth.
pub struct Generated {
    pub params: LowerBoundParams,
    pub s: LowerBoundInstance,
    pub girth: Option<usize>,
    pub skeleton_edges: usize,
}

pub fn generate(a: &GenArgs) -> Result<Generated, CliError> {
    let params = LowerBoundParams::new(a.d_i, a.d_k, a.s, a.r).map_err(lowerbound_error)?;
    let budget = GirthBudget {
        max_vertices: a.max_vertices,
        attempts_per_lift: a.attempts_per_lift,
    };
    let (q, report) =
        high_girth_biregular(a.d_i, a.d_k, params.required_girth(), a.seed, &budget).map_err(lowerbound_error)?;
    let s = build_s(&q, &params).map_err(lowerbound_error)?;
    Ok(Generated {
        params,
        s,
        girth: report.girth,
        skeleton_edges: q.edges().len(),
    })
}

/// `S_k` for skeleton objective `k`, checked against the layered solution.
pub fn ball(g: &Generated, k: usize) -> Result<BallInstance, CliError> {
    build_sk(&g.s, VertexId(k)).map_err(lowerbound_error)
}

/// Min utility of the layered solution on `ball`, or `None` if infeasible.
pub fn layered_min_utility(ball: &BallInstance, p: &LowerBoundParams) -> Option<Rational> {
    let y = appendix_solution(ball, p);
    if !check_feasible(&ball.instance, &y).is_empty() {
        return None;
    }
    min_utility(&ball.instance, &y).ok()
}

pub fn growth_metrics(g: &Generated, j: u32) -> Option<(Rational, Rational)> {
    let p = &g.params;
    (p.s >= 1).then(|| {
        let radius = j as usize * p.path_length();
        (relative_growth(&g.s.instance, radius), growth_bound(j, p.s))
    })
}

pub fn gen_lowerbound(mut a: GenArgs) -> Result<RunManifest, CliError> {
    let g = generate(&a)?;
    let p = g.params;
    if a.sk.is_empty() {
        a.sk.push(g.s.objectives[0].0);
    }
    let mut m = RunManifest::new("gen-lowerbound");
    record_gen_params(&mut m, &a);
    fs::create_dir_all(&a.out).map_err(|e| CliError::Input(format!("cannot create {}: {e}", a.out.display())))?;

    write_file(&a.out.join(S_FILE), &encode_instance(&g.s.instance))?;
    m.outputs.push(S_FILE.to_string());
    m.metric("required_girth", Metric::count(p.required_girth()));
    m.metric("girth", Metric::count(g.girth.unwrap_or(0)));
    m.metric("skeleton_edges", Metric::count(g.skeleton_edges));
    m.metric("agents", Metric::count(g.s.instance.agents().count()));
    m.metric("utility_upper_bound", Metric::rational(&utility_upper_bound(p.d_i, p.d_k, p.s)));
    if let Some((growth, bound)) = growth_metrics(&g, a.growth_j) {
        m.metric("relative_growth", Metric::rational(&growth));
        m.metric("growth_bound", Metric::rational(&bound));
    }
    if a.solve {
        let omega = solve_max_min(&g.s.instance).map_err(lp_error)?.omega;
        m.metric("omega", Metric::rational(&omega));
    }
    for &k in &a.sk {
        let b = ball(&g, k)?;
        let name = sk_file(k);
        write_file(&a.out.join(&name), &encode_instance(&b.instance))?;
        m.outputs.push(name);
        if let Some(low) = layered_min_utility(&b, &p) {
            m.metric(&format!("sk.{k}.layered_min_utility"), Metric::rational(&low));
        }
        let omega = solve_max_min(&b.instance).map_err(lp_error)?.omega;
        m.metric(&format!("sk.{k}.omega"), Metric::rational(&omega));
    }
    m.outputs.push(MANIFEST_FILE.to_string());
    write_file(&a.out.join(MANIFEST_FILE), m.to_json().as_bytes())?;
    Ok(m)
}
