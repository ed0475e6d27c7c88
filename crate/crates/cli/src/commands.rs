use anyhow::{Context, Result};
use osci_core::densities::{verify_class_membership, LocationScaleModel, SymmetricDensity};
use osci_core::location_ci::{
    beta_star_numeric, beta_star_with, beta_with, expected_length_with, location_interval, robbins_bound,
    solve_t_nonparametric, solve_t_parametric_with, Method,
};
use osci_core::mc_verify::{
    empirical_worst_case_alpha, play_game, simulate_coverage, AdversaryStrategy, SimConfig, SimKind, SweepTarget,
};
use osci_core::numerics::Tolerances;
use osci_core::scale_ci::{
    design_scale_interval_with, fisher_k_with, g_at_zero, g_curvature_at_zero, g_function, m_star_gaussian_approx,
    m_star_with, scale_coverage_bound_with, scale_interval, ScaleGeometry,
};
use osci_core::scenarios::{desk_scenario, reference_examples, DeskInputs};
use osci_core::Error;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{
    Cli, Command, ComputeCmd, GameArgs, IntervalCmd, ScaleCutoffs, ScenarioCmd, SimTarget, SimulateCmd, SolveCmd,
    TableCmd,
};
use crate::output::Report;

/// Serializes `inf` the way the core types do.
fn real(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn to_value<S: Serialize>(v: &S) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn report(command: &str, payload: Value) -> Report {
    Report {
        command: command.into(),
        payload,
        table: None,
    }
}

fn table(command: &str, payload: Value, field: &'static str) -> Report {
    Report {
        command: command.into(),
        payload,
        table: Some(field),
    }
}

fn tolerances(cli: &Cli) -> Result<Tolerances<f64>> {
    let mut tol = Tolerances::default();
    if let Some(a) = cli.abs_tol {
        tol.quad.abs_tol = a;
    }
    if let Some(r) = cli.rel_tol {
        tol.quad.rel_tol = r;
    }
    tol.quad.validate()?;
    Ok(tol)
}

fn grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Domain("profile needs at least 2 points over a finite, non-empty range".into()).into());
    }
    Ok((0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect())
}

pub fn run(cli: &Cli) -> Result<Report> {
    let tol = tolerances(cli)?;
    match &cli.command {
        Command::Interval(cmd) => interval(cmd),
        Command::Compute(cmd) => compute(cmd, &tol),
        Command::Solve(cmd) => solve(cmd, &tol),
        Command::Simulate(cmd) => simulate(cmd, cli.seed),
        Command::Game(args) => game(args, cli.seed),
        Command::Table(TableCmd::PaperExamples) => {
            let rows = reference_examples()?;
            let all = rows.iter().all(|r| r.confirmed());
            let discrepancies: Vec<_> = rows
                .iter()
                .filter(|r| r.rounding_discrepancy)
                .map(|r| r.published_interval.clone())
                .collect();
            Ok(table(
                "table paper-examples",
                json!({
                    "density": "normal",
                    "all_confirmed": all,
                    "rounding_discrepancies": discrepancies,
                    "rows": to_value(&rows)?,
                }),
                "rows",
            ))
        }
        Command::Scenario(ScenarioCmd::Desk {
            center,
            halfwidth,
            resolution,
            confidence,
            sigma_rule,
            x,
            check_t1,
            check_t2,
            no_check,
        }) => {
            let mut inputs = DeskInputs::desk(*confidence);
            inputs.prior_center = *center;
            inputs.prior_halfwidth = *halfwidth;
            inputs.resolution = *resolution;
            inputs.sigma_rule = *sigma_rule;
            inputs.x = *x;
            if *no_check {
                inputs.reference = None;
            } else if let (Some(t1), Some(t2)) = (check_t1, check_t2) {
                inputs.reference = Some((*t1, *t2));
            }
            Ok(report("scenario desk", to_value(&desk_scenario(&inputs)?)?))
        }
    }
}

fn interval(cmd: &IntervalCmd) -> Result<Report> {
    match cmd {
        IntervalCmd::Location {
            x,
            center,
            t,
            method,
            dist,
        } => {
            let iv = location_interval(*x, *center, *t, *method, Some(&dist.dist))?;
            Ok(report("interval location", to_value(&iv)?))
        }
        IntervalCmd::Scale {
            x,
            center,
            cutoffs: ScaleCutoffs { t1, t2 },
            m,
            dist,
        } => {
            let iv = scale_interval(*x, *center, *t1, *t2, *m, &dist.dist)?;
            Ok(report("interval scale", to_value(&iv)?))
        }
    }
}

fn compute(cmd: &ComputeCmd, tol: &Tolerances<f64>) -> Result<Report> {
    Ok(match cmd {
        ComputeCmd::Beta { alpha, t, dist } => report(
            "compute beta",
            json!({
                "alpha": alpha,
                "t": t,
                "density": dist.dist.name(),
                "beta": beta_with(*alpha, *t, &dist.dist, tol)?,
            }),
        ),
        ComputeCmd::BetaStar { t, numeric, dist } => {
            let b = if *numeric {
                beta_star_numeric(*t, &dist.dist, tol)?
            } else {
                beta_star_with(*t, &dist.dist, tol)?
            };
            report(
                "compute beta-star",
                json!({
                    "t": t,
                    "density": dist.dist.name(),
                    "beta_star": b.beta_star,
                    "alpha_star": b.alpha_star,
                    "closed_form": b.closed_form,
                    "confidence": 1.0 - b.beta_star,
                }),
            )
        }
        ComputeCmd::BetaProfile {
            t,
            alpha_max,
            points,
            dist,
        } => {
            let b = beta_star_with(*t, &dist.dist, tol)?;
            let rows = grid(0.0, *alpha_max, *points)?
                .into_iter()
                .map(|a| Ok(json!({"alpha": a, "beta": beta_with(a, *t, &dist.dist, tol)?})))
                .collect::<Result<Vec<_>>>()?;
            table(
                "compute beta-profile",
                json!({
                    "t": t,
                    "density": dist.dist.name(),
                    "beta_star": b.beta_star,
                    "alpha_star": b.alpha_star,
                    "robbins_bound": robbins_bound(*t)?,
                    "points": rows,
                }),
                "points",
            )
        }
        ComputeCmd::MStar {
            cutoffs: ScaleCutoffs { t1, t2 },
            approx,
            dist,
        } => {
            let (value, found) = if *approx {
                (m_star_gaussian_approx(*t1, *t2, &dist.dist)?, Value::Null)
            } else {
                let m = m_star_with(*t1, *t2, &dist.dist, tol)?;
                (m.value, json!(m.found_crossing))
            };
            report(
                "compute m-star",
                json!({
                    "t1": t1,
                    "t2": real(*t2),
                    "density": dist.dist.name(),
                    "method": if *approx { "approx" } else { "exact" },
                    "m_star": real(value),
                    "found_crossing": found,
                }),
            )
        }
        ComputeCmd::G {
            alpha,
            cutoffs: ScaleCutoffs { t1, t2 },
            dist,
        } => report(
            "compute g",
            json!({
                "alpha": alpha,
                "t1": t1,
                "t2": real(*t2),
                "density": dist.dist.name(),
                "g": g_function(*alpha, *t1, *t2, &dist.dist)?,
                "g0": g_at_zero(*t1, *t2, &dist.dist)?,
            }),
        ),
        ComputeCmd::GProfile {
            cutoffs: ScaleCutoffs { t1, t2 },
            alpha_max,
            points,
            dist,
        } => {
            let d = &dist.dist;
            let rows = grid(0.0, *alpha_max, *points)?
                .into_iter()
                .map(|a| Ok(json!({"alpha": a, "g": g_function(a, *t1, *t2, d)?})))
                .collect::<Result<Vec<_>>>()?;
            let star = match m_star_with(*t1, *t2, d, tol) {
                Ok(m) => real(m.value),
                Err(Error::Condition(_)) => Value::Null,
                Err(e) => return Err(e.into()),
            };
            table(
                "compute g-profile",
                json!({
                    "t1": t1,
                    "t2": real(*t2),
                    "density": d.name(),
                    "g0": g_at_zero(*t1, *t2, d)?,
                    "m_star": star,
                    "points": rows,
                }),
                "points",
            )
        }
        ComputeCmd::Curvature {
            cutoffs: ScaleCutoffs { t1, t2 },
            dist,
        } => {
            let c = g_curvature_at_zero(*t1, *t2, &dist.dist)?;
            report(
                "compute curvature",
                json!({
                    "t1": t1,
                    "t2": real(*t2),
                    "density": dist.dist.name(),
                    "first_deriv": c.first_deriv,
                    "second_deriv": c.second_deriv,
                    "g_second_deriv": c.g_second_deriv,
                    "local_minimum": c.g_second_deriv > 0.0,
                }),
            )
        }
        ComputeCmd::CoverageBound {
            cutoffs: ScaleCutoffs { t1, t2 },
            m,
            dist,
        } => {
            let b = scale_coverage_bound_with(*t1, *t2, *m, &dist.dist, tol)?;
            let mut v = to_value(&b)?;
            let obj = v.as_object_mut().expect("struct");
            obj.insert("t1".into(), json!(t1));
            obj.insert("t2".into(), real(*t2));
            obj.insert("m".into(), real(*m));
            obj.insert("density".into(), dist.dist.name().into());
            report("compute coverage-bound", v)
        }
        ComputeCmd::FisherK { dist, sigma } => {
            if !(*sigma > 0.0) {
                return Err(Error::Domain(format!("sigma must be positive, got {sigma}")).into());
            }
            let geo = ScaleGeometry {
                k: fisher_k_with(&dist.dist, tol)?,
                density: dist.dist.name(),
            };
            report(
                "compute fisher-k",
                json!({
                    "density": geo.density,
                    "k": geo.k,
                    "sigma": sigma,
                    "g_sigma_sigma": geo.g_sigma_sigma_at(*sigma),
                }),
            )
        }
        ComputeCmd::RobbinsBound { t } => {
            let b = robbins_bound(*t)?;
            report(
                "compute robbins-bound",
                json!({"t": t, "bound": b, "confidence": 1.0 - b}),
            )
        }
        ComputeCmd::ExpectedLength {
            t,
            center,
            mu,
            sigma,
            dist,
        } => {
            let model = LocationScaleModel::new(dist.dist.clone(), *mu, *sigma)?;
            let e = expected_length_with(*t, *center, &model, tol)?;
            report(
                "compute expected-length",
                json!({
                    "t": t,
                    "center": center,
                    "mu": mu,
                    "sigma": sigma,
                    "density": dist.dist.name(),
                    "expected_length": to_value(&e)?,
                }),
            )
        }
        ComputeCmd::Membership { grid, dist } => {
            let r = verify_class_membership(&dist.dist, *grid)?;
            let mut v = to_value(&r)?;
            v.as_object_mut()
                .expect("struct")
                .insert("in_class".into(), r.in_class().into());
            report("compute membership", v)
        }
    })
}

fn solve(cmd: &SolveCmd, tol: &Tolerances<f64>) -> Result<Report> {
    Ok(match cmd {
        SolveCmd::LocationT {
            confidence,
            nonparametric,
            dist,
        } => {
            let (t, method, density) = if *nonparametric {
                (solve_t_nonparametric(*confidence)?, Method::Nonparametric, Value::Null)
            } else {
                (
                    solve_t_parametric_with(*confidence, &dist.dist, tol)?,
                    Method::Parametric,
                    dist.dist.name().into(),
                )
            };
            report(
                "solve location-t",
                json!({
                    "confidence": confidence,
                    "method": to_value(&method)?,
                    "density": density,
                    "t": t,
                }),
            )
        }
        SolveCmd::ScaleDesign { confidence, m, dist } => {
            let d = design_scale_interval_with(*confidence, *m, &dist.dist, tol)?;
            let mut v = to_value(&d)?;
            let obj = v.as_object_mut().expect("struct");
            obj.insert("confidence".into(), json!(confidence));
            obj.insert("density".into(), dist.dist.name().into());
            report("solve scale-design", v)
        }
    })
}

fn sweep_target(target: &SimTarget) -> Result<SweepTarget> {
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| Error::Domain(format!("--{name} is required for kind {:?}", target.kind)))
    };
    Ok(match target.kind {
        SimKind::LocationParametric => SweepTarget::LocationParametric { t: need(target.t, "t")? },
        SimKind::LocationNonparametric => SweepTarget::LocationNonparametric { t: need(target.t, "t")? },
        SimKind::Scale => SweepTarget::Scale {
            t1: need(target.t1, "t1")?,
            t2: need(target.t2, "t2")?,
            m: need(target.m, "m")?,
        },
    })
}

fn simulate(cmd: &SimulateCmd, seed: u64) -> Result<Report> {
    match cmd {
        SimulateCmd::Coverage {
            target,
            mu,
            sigma,
            center,
        } => {
            sweep_target(target)?;
            let config = SimConfig {
                kind: target.kind,
                dist: target.dist.dist.clone(),
                mu: *mu,
                sigma: *sigma,
                a: *center,
                t: target.t,
                t1: target.t1,
                t2: target.t2,
                m: target.m,
                reps: target.reps,
                seed,
            };
            Ok(report("simulate coverage", to_value(&simulate_coverage(&config)?)?))
        }
        SimulateCmd::WorstAlpha {
            target,
            alpha_min,
            alpha_max,
            alpha_step,
        } => {
            if !(*alpha_step > 0.0) || !(alpha_max >= alpha_min) {
                return Err(Error::Domain("alpha grid needs step > 0 and max >= min".into()).into());
            }
            let n = ((alpha_max - alpha_min) / alpha_step + 1e-9).floor() as usize + 1;
            let alphas: Vec<f64> = (0..n).map(|i| alpha_min + alpha_step * i as f64).collect();
            let w = empirical_worst_case_alpha(sweep_target(target)?, &target.dist.dist, &alphas, target.reps, seed)?;
            Ok(table("simulate worst-alpha", to_value(&w)?, "curve"))
        }
    }
}

fn game(args: &GameArgs, seed: u64) -> Result<Report> {
    let raw = std::fs::read_to_string(&args.adversary)
        .with_context(|| format!("cannot read adversary file {}", args.adversary.display()))?;
    let strategy: AdversaryStrategy = toml::from_str(&raw)
        .map_err(|e| Error::Config(format!("adversary file {}: {e}", args.adversary.display())))?;
    let mut record = play_game(&strategy, args.t, args.rounds, seed)?;
    if args.summary_only {
        record.log.clear();
    }
    let mut v = to_value(&record)?;
    v.as_object_mut()
        .expect("struct")
        .insert("strategy".into(), to_value(&strategy)?);
    Ok(table("game", v, "log"))
}
