//! Re-checks a `gen-lowerbound` directory from its manifest alone.

use std::fs;
use std::path::Path;

use maxmin_core::format::encode_instance;
use maxmin_core::local::{run_local, AlgoParams};
use maxmin_core::lowerbound::{utility_upper_bound, BallInstance};
use maxmin_core::lp::solve_max_min;
use maxmin_core::model::check_feasible;
use maxmin_core::rational;
use maxmin_core::unfold::consistency_check;
use maxmin_core::{IdMode, MaxMinInstance, Role};
use serde::Serialize;

use crate::commands::{
    ball, gen_args_from, generate, growth_metrics, layered_min_utility, read_instance, sk_file, MANIFEST_FILE, S_FILE,
};
use crate::manifest::RunManifest;
use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub dir: String,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub exit_status: u8,
}

impl VerifyReport {
    fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("{verdict} {}: {}\n", c.name, c.detail));
        }
        out.push_str(if self.pass { "verify: PASS\n" } else { "verify: FAIL\n" });
        out
    }
}

fn metric(m: &RunManifest, key: &str) -> Option<String> {
    m.metrics.get(key).map(|x| x.exact.clone())
}

pub fn verify(dir: &Path) -> Result<VerifyReport, CliError> {
    let manifest_path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&manifest_path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", manifest_path.display())))?;
    let m: RunManifest = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", manifest_path.display())))?;
    if m.command != "gen-lowerbound" {
        return Err(CliError::Input(format!("manifest records `{}`, not gen-lowerbound", m.command)));
    }
    let args = gen_args_from(&m, dir)?;
    let s_file = read_instance(&dir.join(S_FILE))?;
    let balls: Vec<(usize, MaxMinInstance)> = args
        .sk
        .iter()
        .map(|&k| read_instance(&dir.join(sk_file(k))).map(|inst| (k, inst)))
        .collect::<Result<_, _>>()?;

    let mut report = VerifyReport {
        dir: dir.display().to_string(),
        checks: Vec::new(),
        pass: true,
        exit_status: 0,
    };
    let g = generate(&args)?;
    let p = g.params;

    // girth
    let recorded = metric(&m, "girth");
    let achieved = g.girth.unwrap_or(0);
    report.check(
        "girth",
        recorded.as_deref() == Some(achieved.to_string().as_str())
            && metric(&m, "required_girth") == Some(p.required_girth().to_string())
            && achieved >= p.required_girth(),
        format!(
            "regenerated {achieved}, required {}, manifest {}",
            p.required_girth(),
            recorded.unwrap_or_else(|| "missing".into())
        ),
    );

    // S is what the manifest's parameters produce
    let same = encode_instance(&s_file) == encode_instance(&g.s.instance);
    report.check("regenerate S", same, format!("{} agents", s_file.agents().count()));

    // counting
    let agents = s_file.agents().count();
    let expected = g.skeleton_edges * (2 * p.s + 1);
    let degrees_ok = s_file.max_degree(Role::Constraint) <= p.d_i && s_file.max_degree(Role::Objective) <= p.d_k;
    report.check(
        "counting",
        agents == expected && degrees_ok && metric(&m, "agents") == Some(agents.to_string()),
        format!("{agents} agents, expected {} skeleton edges x {}", g.skeleton_edges, 2 * p.s + 1),
    );

    // bounds
    let bound = utility_upper_bound(p.d_i, p.d_k, p.s);
    report.check(
        "utility bound",
        metric(&m, "utility_upper_bound") == Some(rational::format(&bound)),
        format!("bound {}", rational::format(&bound)),
    );
    if args.solve {
        match solve_max_min(&s_file) {
            Ok(sol) => report.check(
                "optimum of S",
                sol.omega <= bound && metric(&m, "omega") == Some(rational::format(&sol.omega)),
                format!("omega* = {} <= {}", rational::format(&sol.omega), rational::format(&bound)),
            ),
            Err(e) => report.check("optimum of S", false, e.to_string()),
        }
    }

    // growth
    if let Some((growth, gbound)) = growth_metrics(&g, args.growth_j) {
        report.check(
            "growth",
            growth <= gbound && metric(&m, "relative_growth") == Some(rational::format(&growth)),
            format!("{} <= {}", rational::format(&growth), rational::format(&gbound)),
        );
    }

    // the balls and their layered solutions
    for (k, inst) in &balls {
        let rebuilt = match ball(&g, *k) {
            Ok(b) => b,
            Err(e) => {
                report.check(format!("S_k {k}"), false, e.to_string());
                continue;
            }
        };
        report.check(
            format!("S_k {k} matches S"),
            encode_instance(inst) == encode_instance(&rebuilt.instance),
            format!("{} vertices", inst.num_vertices()),
        );
        // evaluated on the file as written, so edits to it show up here
        let on_file = BallInstance {
            instance: inst.clone(),
            ..rebuilt
        };
        let need = rational::int(p.d_k as i64 - 1);
        match layered_min_utility(&on_file, &p) {
            Some(low) => report.check(
                format!("S_k {k} layered solution"),
                low > need && metric(&m, &format!("sk.{k}.layered_min_utility")) == Some(rational::format(&low)),
                format!("feasible, min utility {} > {}", rational::format(&low), rational::format(&need)),
            ),
            None => report.check(format!("S_k {k} layered solution"), false, "infeasible"),
        }
    }

    // feasibility and consistency of the horizon-3 algorithm on S
    let params = AlgoParams::new(p.d_i, p.d_k, 0).map_err(|e| CliError::Input(e.to_string()))?;
    match run_local(&s_file, &params) {
        Ok(x) => {
            let bad = check_feasible(&s_file, &x);
            report.check("feasibility", bad.is_empty(), format!("{} violations", bad.len()));
            let anonymous = s_file.with_id_mode(IdMode::PortNumbering);
            let pairs = consistency_check(&anonymous, &x, params.horizon());
            report.check("consistency", pairs.is_empty(), format!("{} mismatched pairs", pairs.len()));
        }
        Err(e) => report.check("feasibility", false, e.to_string()),
    }

    report.pass = report.checks.iter().all(|c| c.pass);
    report.exit_status = if report.pass { 0 } else { 4 };
    Ok(report)
}
