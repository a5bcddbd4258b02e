//! Executes a scenario's tasks in dependency order (validate → conditions →
//! constants → verification/transport), skipping downstream tasks that would
//! consume a refuted condition and aggregating per-task errors without
//! aborting independent work.

use std::time::Instant;

use conewsi::conditions::{ConditionKind, ConditionReport, Verdict};
use conewsi::constants::ConstantResult;
use conewsi::probes::RawExponents;
use conewsi::profiles::ProfileFamily;
use conewsi::transport::{default_bins, DiscreteMeasure, Potential};
use conewsi::{ExponentSet, QuadOptions};

use crate::config::{Scenario, Task};

/// One numeric row of a machine-readable table.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub parameter: String,
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TaskStatus {
    Ok,
    Skipped(String),
    Failed(String),
}

#[derive(Debug, Clone)]
pub struct TaskSection {
    pub task: Task,
    pub status: TaskStatus,
    pub lines: Vec<String>,
    pub rows: Vec<Row>,
    pub warnings: Vec<String>,
    /// Wall-clock time; reported on the console, never written to files so
    /// emitted reports stay byte-stable.
    pub wall_ms: u128,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub scenario_name: String,
    pub sections: Vec<TaskSection>,
}

impl Report {
    pub fn any_failed(&self) -> bool {
        self.sections
            .iter()
            .any(|s| matches!(s.status, TaskStatus::Failed(_)))
    }

    /// True when exponent/scenario validation itself failed.
    pub fn validation_failed(&self) -> bool {
        self.sections
            .iter()
            .any(|s| s.task == Task::Validate && matches!(s.status, TaskStatus::Failed(_)))
    }
}

struct Ctx {
    exps: Option<ExponentSet>,
    condition: Option<ConditionReport>,
    k0: Option<ConstantResult>,
}

fn grid_resolution(requested: usize, n: usize) -> usize {
    if requested > 0 {
        requested
    } else if n <= 2 {
        256
    } else {
        96
    }
}

fn quad_options(s: &Scenario) -> QuadOptions {
    QuadOptions {
        seed: s.knobs.seed ^ 0x9e3779b97f4a7c15,
        ..QuadOptions::default()
    }
}

/// The condition branch a scenario needs: C-1 exactly when n_a = n.
fn branch_of(exps: &ExponentSet) -> ConditionKind {
    if exps.na_equals_n() {
        ConditionKind::C1
    } else {
        ConditionKind::C0
    }
}

fn central_direction(s: &Scenario) -> Vec<f64> {
    let pts = conewsi::sample_cone_sphere(&s.cone, 64, s.knobs.seed ^ 0x517c).unwrap_or_default();
    let mut mean = vec![0.0; s.n];
    for p in &pts {
        for (m, v) in mean.iter_mut().zip(p) {
            *m += v;
        }
    }
    let len: f64 = mean.iter().map(|v| v * v).sum::<f64>().sqrt();
    if len > 1e-6 {
        mean.iter().map(|v| v / len).collect()
    } else {
        let mut e = vec![0.0; s.n];
        e[s.n - 1] = 1.0;
        e
    }
}

/// Tasks in dependency order, with implicit dependencies inserted (the
/// condition branch matching the scenario's fractional dimension).
fn schedule(s: &Scenario, exps: Option<&ExponentSet>) -> Vec<(Task, bool)> {
    let requested = |t: Task| s.tasks.contains(&t);
    let mut out: Vec<(Task, bool)> = Vec::new();
    let push = |t: Task, explicit: bool, out: &mut Vec<(Task, bool)>| {
        if !out.iter().any(|&(have, _)| have == t) {
            out.push((t, explicit));
        }
    };
    push(Task::Validate, requested(Task::Validate), &mut out);
    let needs_condition = [Task::K0, Task::Verify, Task::SpectralGap, Task::Transport]
        .iter()
        .any(|&t| requested(t));
    if let Some(exps) = exps {
        // Explicit condition requests always run, even when inapplicable,
        // so the user sees the not_applicable outcome.
        for t in [Task::CheckC0, Task::CheckC1] {
            if requested(t) {
                push(t, true, &mut out);
            }
        }
        if needs_condition && !requested(Task::CheckC0) && !requested(Task::CheckC1) {
            let implicit = match branch_of(exps) {
                ConditionKind::C0 => Task::CheckC0,
                ConditionKind::C1 => Task::CheckC1,
            };
            push(implicit, false, &mut out);
        }
    }
    for t in [
        Task::K0,
        Task::Sharp,
        Task::Verify,
        Task::Necessity,
        Task::SpectralGap,
        Task::Ckn,
        Task::Heisenberg,
        Task::Transport,
    ] {
        if requested(t) {
            push(t, true, &mut out);
        }
    }
    out
}

pub fn run_scenario(s: &Scenario) -> Report {
    let mut ctx = Ctx {
        exps: None,
        condition: None,
        k0: None,
    };
    let exps_probe = conewsi::validate_exponents(s.n, s.p, s.tau, s.alpha);
    let plan = schedule(s, exps_probe.as_ref().ok());
    let mut sections = Vec::new();
    for (task, _explicit) in plan {
        let start = Instant::now();
        let mut section = run_task(s, task, &mut ctx);
        section.wall_ms = start.elapsed().as_millis();
        sections.push(section);
    }
    Report {
        scenario_name: s.name.clone(),
        sections,
    }
}

fn section_skip(task: Task, reason: String) -> TaskSection {
    TaskSection {
        task,
        status: TaskStatus::Skipped(reason),
        lines: Vec::new(),
        rows: Vec::new(),
        warnings: Vec::new(),
        wall_ms: 0,
    }
}

fn section_err(task: Task, msg: String) -> TaskSection {
    TaskSection {
        task,
        status: TaskStatus::Failed(msg),
        lines: Vec::new(),
        rows: Vec::new(),
        warnings: Vec::new(),
        wall_ms: 0,
    }
}

fn run_task(s: &Scenario, task: Task, ctx: &mut Ctx) -> TaskSection {
    match task {
        Task::Validate => task_validate(s, ctx),
        Task::CheckC0 | Task::CheckC1 => task_condition(s, task, ctx),
        Task::K0 => task_k0(s, ctx),
        Task::Sharp => task_sharp(s, ctx),
        Task::Verify => task_verify(s, ctx),
        Task::Necessity => task_necessity(s),
        Task::SpectralGap => task_spectral_gap(s, ctx),
        Task::Ckn => task_ckn(s),
        Task::Heisenberg => task_heisenberg(s),
        Task::Transport => task_transport(s, ctx),
    }
}

fn task_validate(s: &Scenario, ctx: &mut Ctx) -> TaskSection {
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    let exps = match conewsi::validate_exponents(s.n, s.p, s.tau, s.alpha) {
        Ok(e) => e,
        Err(e) => return section_err(Task::Validate, e.to_string()),
    };
    lines.push(format!(
        "exponents admissible: q = {:.12}, n_a = {}, p' = {}",
        exps.q,
        if exps.na_is_infinite() {
            "inf".to_string()
        } else {
            format!("{:.12}", exps.n_a)
        },
        if exps.p_conj.is_infinite() {
            "inf".to_string()
        } else {
            format!("{:.12}", exps.p_conj)
        },
    ));
    rows.push(Row {
        parameter: "q".into(),
        value: exps.q,
        tolerance: 1e-12,
    });
    rows.push(Row {
        parameter: "n_a".into(),
        value: exps.n_a,
        tolerance: 1e-12,
    });
    let balance = (exps.tau + s.n as f64) / exps.q - ((exps.alpha + s.n as f64) / exps.p - 1.0);
    rows.push(Row {
        parameter: "balance_residual".into(),
        value: balance,
        tolerance: 1e-12,
    });

    // Euler identity sweep over both weights.
    match conewsi::sample_cone_sphere(&s.cone, 1000, s.knobs.seed) {
        Ok(pts) => {
            for (tag, w) in [("omega", &s.omega), ("sigma", &s.sigma)] {
                let mut worst = 0.0f64;
                let mut failures = 0usize;
                for x in &pts {
                    match w.euler_residual(&s.cone, x) {
                        Ok(r) => worst = worst.max(r.abs()),
                        Err(_) => failures += 1,
                    }
                }
                if failures > 0 {
                    warnings.push(format!(
                        "{tag}: {failures} sample points hit non-differentiable values"
                    ));
                }
                lines.push(format!("{tag}: max |Euler residual| = {worst:.3e}"));
                rows.push(Row {
                    parameter: format!("euler_residual_{tag}"),
                    value: worst,
                    tolerance: 1e-10,
                });
            }
        }
        Err(e) => return section_err(Task::Validate, e.to_string()),
    }
    ctx.exps = Some(exps);
    TaskSection {
        task: Task::Validate,
        status: TaskStatus::Ok,
        lines,
        rows,
        warnings,
        wall_ms: 0,
    }
}

fn task_condition(s: &Scenario, requested: Task, ctx: &mut Ctx) -> TaskSection {
    let Some(exps) = ctx.exps.clone() else {
        return section_skip(requested, "exponents invalid; validation failed".into());
    };
    let branch = branch_of(&exps);
    // An explicit request for the inapplicable branch surfaces the
    // not_applicable error instead of being silently rerouted.
    let effective = match requested {
        Task::CheckC0 if branch == ConditionKind::C1 => {
            return section_err(
                Task::CheckC0,
                "not applicable: n_a = n, condition C-1 governs this scenario".into(),
            )
        }
        Task::CheckC1 if branch == ConditionKind::C0 => {
            return section_err(
                Task::CheckC1,
                "not applicable: n_a ≠ n, condition C-0 governs this scenario".into(),
            )
        }
        _ => branch,
    };

    let mut lines = Vec::new();
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    let report = match effective {
        ConditionKind::C0 => conewsi::estimate_best_c0(
            &s.omega,
            &s.sigma,
            &exps,
            &s.cone,
            s.knobs.samples,
            s.knobs.seed,
        ),
        ConditionKind::C1 => conewsi::check_c1(
            &s.omega,
            &s.sigma,
            &exps,
            &s.cone,
            s.knobs.samples,
            s.knobs.seed,
        ),
    };
    let report = match report {
        Ok(r) => r,
        Err(e) => return section_err(requested, e.to_string()),
    };
    let verdict = match report.verdict {
        Verdict::HoldsWithConstant => "holds_with_constant",
        Verdict::Refuted => "refuted",
        Verdict::Inconclusive => "inconclusive",
    };
    let cname = match effective {
        ConditionKind::C0 => "C0",
        ConditionKind::C1 => "C1",
    };
    lines.push(format!(
        "condition {cname}: {verdict}, constant estimate {:.9e} ({} samples, {} gradient violations)",
        report.constant_estimate, report.samples_used, report.gradient_positivity_violations
    ));
    lines.push(format!(
        "witness x = {:?}, y = {:?}",
        report.witness_x, report.witness_y
    ));
    rows.push(Row {
        parameter: format!("{cname}_estimate"),
        value: report.constant_estimate,
        tolerance: 1e-3,
    });
    rows.push(Row {
        parameter: "gradient_positivity_violations".into(),
        value: report.gradient_positivity_violations as f64,
        tolerance: 0.0,
    });

    if effective == ConditionKind::C0 {
        if let Ok(floor) = conewsi::rigidity_floor(&exps) {
            if exps.tau <= exps.alpha {
                lines.push(format!("rigidity floor 1/(n_a−n) = {floor:.9e}"));
                rows.push(Row {
                    parameter: "rigidity_floor".into(),
                    value: floor,
                    tolerance: 1e-12,
                });
                if report.constant_estimate < floor - 1e-6 {
                    warnings.push(format!(
                        "estimate {:.6e} sits below the rigidity floor {floor:.6e}: numerically inconsistent",
                        report.constant_estimate
                    ));
                }
            }
        }
        let (tv, av) = (
            s.omega.as_monomial_exponents(s.n),
            s.sigma.as_monomial_exponents(s.n),
        );
        if let (Some(tv), Some(av)) = (tv, av) {
            match conewsi::monomial_c0(&tv, &av, s.p, s.n) {
                Ok(c) => {
                    lines.push(format!("monomial closed form C0 = {c:.9e}"));
                    rows.push(Row {
                        parameter: "C0_monomial_closed_form".into(),
                        value: c,
                        tolerance: 1e-12,
                    });
                }
                Err(e) => warnings.push(format!("monomial closed form unavailable: {e}")),
            }
        }
        if !exps.na_is_infinite() {
            match conewsi::concavity_sufficient(
                &s.omega,
                &s.sigma,
                &exps,
                &s.cone,
                s.knobs.samples.min(20_000),
                s.knobs.seed ^ 0x51,
            ) {
                Ok(true) => lines.push(format!(
                    "sufficient concavity test passed: C-0 holds with C0 = {:.9e}",
                    exps.na_ratio()
                )),
                Ok(false) => lines.push("sufficient concavity test not satisfied".into()),
                Err(e) => warnings.push(format!("concavity test skipped: {e}")),
            }
        }
    }
    ctx.condition = Some(report);
    TaskSection {
        task: requested,
        status: TaskStatus::Ok,
        lines,
        rows,
        warnings,
        wall_ms: 0,
    }
}

/// Fetches a usable condition constant, or a skip reason.
fn condition_constant(ctx: &Ctx) -> Result<(f64, Vec<String>), String> {
    let Some(cond) = &ctx.condition else {
        return Err("no condition estimate available".into());
    };
    match cond.verdict {
        Verdict::Refuted => Err("condition refuted; no valid constant exists".into()),
        Verdict::HoldsWithConstant => Ok((cond.constant_estimate, Vec::new())),
        Verdict::Inconclusive => Ok((
            cond.constant_estimate,
            vec!["condition estimate is inconclusive; constant is best-effort".into()],
        )),
    }
}

fn task_k0(s: &Scenario, ctx: &mut Ctx) -> TaskSection {
    let Some(exps) = ctx.exps.clone() else {
        return section_skip(Task::K0, "exponents invalid; validation failed".into());
    };
    let (constant, mut warnings) = match condition_constant(ctx) {
        Ok(v) => v,
        Err(reason) => {
            return TaskSection {
                task: Task::K0,
                status: TaskStatus::Skipped(reason),
                lines: Vec::new(),
                rows: Vec::new(),
                warnings: vec!["skipped to avoid deriving a constant from a refuted condition".into()],
                wall_ms: 0,
            }
        }
    };
    let branch = branch_of(&exps);
    let opts = quad_options(s);
    let result = if s.p == 1.0 {
        conewsi::k0_p1(&s.omega, &s.sigma, &exps, &s.cone, constant, branch, &opts)
    } else {
        conewsi::k0_general(
            &s.omega,
            &s.sigma,
            &exps,
            &s.cone,
            constant,
            branch,
            s.knobs.budget,
            &opts,
        )
    };
    let result = match result {
        Ok(r) => r,
        Err(e) => return section_err(Task::K0, e.to_string()),
    };
    let mut lines = vec![format!(
        "K0 = {:.9e} (branch {:?}, quadrature error ≈ {:.1e})",
        result.k0, result.branch, result.quadrature_error
    )];
    if let Some(v) = &result.v_star {
        lines.push(format!("optimizing density: {v:?}"));
    }
    let rows = vec![Row {
        parameter: "K0".into(),
        value: result.k0,
        tolerance: result.quadrature_error,
    }];
    warnings.extend(Vec::new());
    ctx.k0 = Some(result);
    TaskSection {
        task: Task::K0,
        status: TaskStatus::Ok,
        lines,
        rows,
        warnings,
        wall_ms: 0,
    }
}

fn task_sharp(s: &Scenario, ctx: &mut Ctx) -> TaskSection {
    let Some(exps) = ctx.exps.clone() else {
        return section_skip(Task::Sharp, "exponents invalid; validation failed".into());
    };
    // The sharp constant presumes ω = c·σ; check the ratio is constant on
    // sampled directions before trusting the formula.
    if let Ok(pts) = conewsi::sample_cone_sphere(&s.cone, 64, s.knobs.seed ^ 0x5a) {
        let ratios: Vec<f64> = pts
            .iter()
            .map(|x| s.omega.eval_raw(x) / s.sigma.eval_raw(x))
            .collect();
        let (lo, hi) = ratios
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &r| {
                (a.min(r), b.max(r))
            });
        if !(hi - lo).is_finite() || hi - lo > 1e-9 * hi.abs().max(1.0) {
            return section_err(
                Task::Sharp,
                "sharp constant requires omega = c·sigma (sampled ratio is not constant)".into(),
            );
        }
    }
    let result = match conewsi::k0_sharp_equal(&s.sigma, &exps, &s.cone, &quad_options(s)) {
        Ok(r) => r,
        Err(e) => return section_err(Task::Sharp, e.to_string()),
    };
    TaskSection {
        task: Task::Sharp,
        status: TaskStatus::Ok,
        lines: vec![format!(
            "sharp equal-weight constant = {:.9e} ({:?})",
            result.k0, result.branch
        )],
        rows: vec![Row {
            parameter: "K0_sharp".into(),
            value: result.k0,
            tolerance: result.quadrature_error.max(1e-6),
        }],
        warnings: Vec::new(),
        wall_ms: 0,
    }
}

fn task_verify(s: &Scenario, ctx: &mut Ctx) -> TaskSection {
    let Some(exps) = ctx.exps.clone() else {
        return section_skip(Task::Verify, "exponents invalid; validation failed".into());
    };
    let Some(k0) = ctx.k0.as_ref().map(|r| r.k0) else {
        return TaskSection {
            task: Task::Verify,
            status: TaskStatus::Skipped("no K0 available (condition refuted or k0 not run)".into()),
            lines: Vec::new(),
            rows: Vec::new(),
            warnings: Vec::new(),
            wall_ms: 0,
        };
    };
    let res = grid_resolution(s.knobs.grid, s.n);
    let dir = central_direction(s);
    let extent = 1.6;
    let (lo, hi) = verify_box(&s.cone, &dir, extent);
    let center: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
    let families = vec![
        ProfileFamily::SmoothedCap {
            radius: 0.45 * extent,
            smoothing: 0.06 * extent,
            center: center.clone(),
        },
        ProfileFamily::GaussianBump {
            center,
            width: 0.2 * extent,
        },
        ProfileFamily::Talenti {
            gamma: 1.0,
            shift: vec![0.0; s.n],
        },
    ];
    let out = match conewsi::maximize_quotient(
        &s.omega, &s.sigma, &exps, &s.cone, &lo, &hi, res, &families,
    ) {
        Ok(o) => o,
        Err(e) => return section_err(Task::Verify, e.to_string()),
    };
    let ratio = out.best_quotient / k0;
    let sound = out.best_quotient <= k0 * 1.01;
    let mut warnings = Vec::new();
    if !sound {
        warnings.push(format!(
            "best quotient {:.6e} exceeds K0·1.01 = {:.6e}",
            out.best_quotient,
            k0 * 1.01
        ));
    }
    if out.boundary_mass > 1e-6 {
        warnings.push(format!(
            "support touches the grid boundary (ring mass fraction {:.2e})",
            out.boundary_mass
        ));
    }
    TaskSection {
        task: Task::Verify,
        status: TaskStatus::Ok,
        lines: vec![
            format!(
                "best Sobolev quotient {:.9e} from {:?}",
                out.best_quotient, out.best_profile
            ),
            format!("quotient / K0 = {ratio:.6} (soundness requires ≤ 1.01): {sound}"),
        ],
        rows: vec![
            Row {
                parameter: "best_quotient".into(),
                value: out.best_quotient,
                tolerance: 0.01 * out.best_quotient,
            },
            Row {
                parameter: "quotient_over_k0".into(),
                value: ratio,
                tolerance: 0.01,
            },
        ],
        warnings,
        wall_ms: 0,
    }
}

/// A grid box adapted to the cone: centered at the origin when the origin
/// is interior, shifted along the central direction otherwise so the box
/// straddles the cone's bulk.
fn verify_box(cone: &conewsi::ConvexCone, dir: &[f64], extent: f64) -> (Vec<f64>, Vec<f64>) {
    let n = cone.dim();
    let origin_ok = cone.contains(&vec![-1e-3; n]) && cone.contains(&vec![1e-3; n]);
    if origin_ok {
        (vec![-extent; n], vec![extent; n])
    } else {
        let lo: Vec<f64> = dir.iter().map(|&d| d * extent - extent).collect();
        let hi: Vec<f64> = dir.iter().map(|&d| d * extent + extent).collect();
        (lo, hi)
    }
}

fn task_necessity(s: &Scenario) -> TaskSection {
    let raw = match RawExponents::from_balance(s.n, s.p, s.tau, s.alpha) {
        Ok(r) => r,
        Err(e) => return section_err(Task::Necessity, e.to_string()),
    };
    let y0 = s
        .knobs
        .shift_direction
        .clone()
        .unwrap_or_else(|| central_direction(s));
    let res = grid_resolution(s.knobs.grid, s.n).min(128);
    let out = match conewsi::necessity_probe_shift(
        &s.omega,
        &s.sigma,
        &raw,
        &s.cone,
        &y0,
        &s.knobs.deltas,
        res,
    ) {
        Ok(o) => o,
        Err(e) => return section_err(Task::Necessity, e.to_string()),
    };
    let violates = out.fitted_slope > 0.02;
    let mut lines = vec![
        format!(
            "shifted-bump slope {:.6} ± {:.6} (predicted τ/q − α/p = {:.6})",
            out.fitted_slope, out.slope_std_error, out.predicted_exponent
        ),
        format!("positive growth ⇒ the inequality fails for these parameters: {violates}"),
    ];
    let mut rows = vec![
        Row {
            parameter: "fitted_slope".into(),
            value: out.fitted_slope,
            tolerance: out.slope_std_error,
        },
        Row {
            parameter: "predicted_exponent".into(),
            value: out.predicted_exponent,
            tolerance: 0.05 * out.predicted_exponent.abs().max(0.02),
        },
    ];
    for (d, q) in out.parameters.iter().zip(&out.quotients) {
        rows.push(Row {
            parameter: format!("quotient_delta_{d}"),
            value: *q,
            tolerance: 0.01 * q,
        });
    }
    let mut warnings = Vec::new();
    match conewsi::necessity_probe_log(&raw, &s.cone, &s.knobs.epsilons, &quad_options(s)) {
        Ok(log) => {
            let (left, right) = log.side_exponents.unwrap_or((f64::NAN, f64::NAN));
            lines.push(format!(
                "log-family exponents: mass side {left:.4} (predict {:.4}), gradient side {right:.4} (predict {:.4})",
                1.0 + 1.0 / raw.q,
                1.0 + 1.0 / raw.p
            ));
            lines.push(format!(
                "log-family ratio drift {:.4} (positive ⇔ q < p): diverges = {}",
                log.fitted_slope,
                log.fitted_slope > 0.01
            ));
            rows.push(Row {
                parameter: "log_mass_exponent".into(),
                value: left,
                tolerance: 0.05 * (1.0 + 1.0 / raw.q),
            });
            rows.push(Row {
                parameter: "log_gradient_exponent".into(),
                value: right,
                tolerance: 0.08 * (1.0 + 1.0 / raw.p),
            });
            rows.push(Row {
                parameter: "log_ratio_drift".into(),
                value: log.fitted_slope,
                tolerance: log.slope_std_error.max(0.01),
            });
        }
        Err(e) => warnings.push(format!("log-family probe skipped: {e}")),
    }
    TaskSection {
        task: Task::Necessity,
        status: TaskStatus::Ok,
        lines,
        rows,
        warnings,
        wall_ms: 0,
    }
}

fn task_spectral_gap(s: &Scenario, ctx: &mut Ctx) -> TaskSection {
    let Some(exps) = ctx.exps.clone() else {
        return section_skip(Task::SpectralGap, "exponents invalid; validation failed".into());
    };
    let (c0, warnings_in) = match condition_constant(ctx) {
        Ok(v) => v,
        Err(reason) => {
            return TaskSection {
                task: Task::SpectralGap,
                status: TaskStatus::Skipped(reason),
                lines: Vec::new(),
                rows: Vec::new(),
                warnings: Vec::new(),
                wall_ms: 0,
            }
        }
    };
    let (lo, hi) = s
        .knobs
        .region
        .clone()
        .unwrap_or((vec![0.25; s.n], vec![1.75; s.n]));
    let out = match conewsi::spectral_gap_bound(
        &s.omega, &s.sigma, &exps, &s.cone, c0, &lo, &hi, s.knobs.seed,
    ) {
        Ok(o) => o,
        Err(e) => return section_err(Task::SpectralGap, e.to_string()),
    };
    let rqs = conewsi::sampled_rayleigh_quotients(
        &s.omega,
        &s.sigma,
        &s.cone,
        &lo,
        &hi,
        grid_resolution(s.knobs.grid, s.n).min(96),
        50,
        s.knobs.seed ^ 0xabcd,
    );
    let mut lines = vec![format!(
        "spectral gap lower bound {:.9e} (C0 = {c0:.6e}, bump at {:?}, width {:.3e})",
        out.bound, out.best_center, out.best_width
    )];
    let mut rows = vec![Row {
        parameter: "spectral_gap_bound".into(),
        value: out.bound,
        tolerance: 0.03 * out.bound,
    }];
    let mut warnings = warnings_in;
    match rqs {
        Ok(list) => {
            let min_rq = list.iter().cloned().fold(f64::INFINITY, f64::min);
            lines.push(format!(
                "minimum of {} sampled Rayleigh quotients = {min_rq:.9e} (must dominate the bound)",
                list.len()
            ));
            rows.push(Row {
                parameter: "min_rayleigh_quotient".into(),
                value: min_rq,
                tolerance: 0.01 * min_rq,
            });
            if out.bound > min_rq {
                warnings.push("bound exceeds a sampled Rayleigh quotient".into());
            }
        }
        Err(e) => warnings.push(format!("Rayleigh sampling failed: {e}")),
    }
    TaskSection {
        task: Task::SpectralGap,
        status: TaskStatus::Ok,
        lines,
        rows,
        warnings,
        wall_ms: 0,
    }
}

fn task_ckn(s: &Scenario) -> TaskSection {
    let Some((n, p, beta, gamma)) = s.knobs.ckn else {
        return section_err(
            Task::Ckn,
            "ckn task requires the key: ckn = (n, p, beta, gamma)".into(),
        );
    };
    let out = match conewsi::ckn_parameters(n, p, beta, gamma) {
        Ok(o) => o,
        Err(e) => return section_err(Task::Ckn, e.to_string()),
    };
    TaskSection {
        task: Task::Ckn,
        status: TaskStatus::Ok,
        lines: vec![format!(
            "CKN map: r = {:.9}, d = {}, tau = {:.9}, alpha = {:.9} (q = {:.9})",
            out.r, out.d, out.tau, out.alpha, out.exps.q
        )],
        rows: vec![
            Row {
                parameter: "r".into(),
                value: out.r,
                tolerance: 1e-12,
            },
            Row {
                parameter: "d".into(),
                value: out.d,
                tolerance: 0.0,
            },
            Row {
                parameter: "tau".into(),
                value: out.tau,
                tolerance: 1e-12,
            },
            Row {
                parameter: "alpha".into(),
                value: out.alpha,
                tolerance: 1e-12,
            },
        ],
        warnings: Vec::new(),
        wall_ms: 0,
    }
}

fn task_heisenberg(s: &Scenario) -> TaskSection {
    let c = match conewsi::heisenberg_constant(s.p, s.knobs.budget, &quad_options(s)) {
        Ok(c) => c,
        Err(e) => return section_err(Task::Heisenberg, e.to_string()),
    };
    let mut lines = vec![format!("Heisenberg constant C_p = {c:.9e} at p = {}", s.p)];
    let mut rows = vec![Row {
        parameter: "heisenberg_constant".into(),
        value: c,
        tolerance: if s.p == 1.0 { 1e-4 } else { 0.01 * c },
    }];
    if s.p == 1.0 {
        let pansu = conewsi::pansu_constant();
        lines.push(format!(
            "Pansu's claimed optimal constant {pansu:.9e} < C_1: {}",
            pansu < c
        ));
        rows.push(Row {
            parameter: "pansu_constant".into(),
            value: pansu,
            tolerance: 1e-9,
        });
    }
    TaskSection {
        task: Task::Heisenberg,
        status: TaskStatus::Ok,
        lines,
        rows,
        warnings: Vec::new(),
        wall_ms: 0,
    }
}

fn task_transport(s: &Scenario, ctx: &mut Ctx) -> TaskSection {
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    let mut warnings = Vec::new();

    // 1D rescaling against the CDF-inverse oracle.
    let atoms = 64usize;
    let mk_uniform = |n: usize, a: f64, b: f64| {
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|i| vec![a + (b - a) * (i as f64 + 0.5) / n as f64])
            .collect();
        DiscreteMeasure::new(pts, vec![1.0 / n as f64; n]).unwrap()
    };
    let mu = mk_uniform(atoms, 0.0, 1.0);
    let nu = mk_uniform(atoms, 0.0, 2.0);
    match conewsi::solve_discrete_ot(&mu, &nu) {
        Ok(plan) => {
            let exact = plan.entries.iter().all(|&(i, j, _)| i == j);
            lines.push(format!(
                "1D rescaling (64 atoms): monotone pairing atom-exact = {exact}, cost = {:.9e}",
                plan.cost
            ));
            rows.push(Row {
                parameter: "ot_1d_marginal_error".into(),
                value: plan.marginal_error(&mu, &nu),
                tolerance: 1e-10,
            });
        }
        Err(e) => return section_err(Task::Transport, e.to_string()),
    }

    // Monge–Ampère residual under refinement.
    for n_atoms in [64usize, 256, 1024] {
        let mu = mk_uniform(n_atoms, 0.0, 1.0);
        let nu = mk_uniform(n_atoms, 0.0, 2.0);
        match conewsi::monge_ampere_residual(
            &mu,
            &nu,
            &|x| vec![2.0 * x[0]],
            default_bins(n_atoms, 1),
        ) {
            Ok(r) => rows.push(Row {
                parameter: format!("ma_residual_{n_atoms}"),
                value: r,
                tolerance: 2.0 / (n_atoms as f64).sqrt(),
            }),
            Err(e) => warnings.push(format!("residual at {n_atoms} atoms failed: {e}")),
        }
    }

    // Pointwise divergence inequality on the scenario weights.
    if let (Some(exps), Ok((constant, warn))) = (ctx.exps.clone(), condition_constant(ctx)) {
        warnings.extend(warn);
        let branch = branch_of(&exps);
        match conewsi::sample_cone_sphere(&s.cone, 500, s.knobs.seed ^ 0x7a) {
            Ok(points) => {
                for lam in [1.0, 0.5, 2.0] {
                    let phi = Potential::QuadraticShift {
                        lam,
                        shift: vec![0.0; s.n],
                    };
                    match conewsi::pointwise_divergence_check(
                        &s.omega, &s.sigma, &exps, &s.cone, constant, branch, &phi, &points,
                    ) {
                        Ok(out) => rows.push(Row {
                            parameter: format!("divergence_violation_lambda_{lam}"),
                            value: out.max_violation,
                            tolerance: 1e-9,
                        }),
                        Err(e) => {
                            warnings.push(format!("divergence check at λ={lam} failed: {e}"))
                        }
                    }
                }
            }
            Err(e) => warnings.push(format!("divergence sweep skipped: {e}")),
        }
    } else {
        warnings.push("divergence check skipped: no usable condition constant".into());
    }

    lines.push("transport suite complete".into());
    TaskSection {
        task: Task::Transport,
        status: TaskStatus::Ok,
        lines,
        rows,
        warnings,
        wall_ms: 0,
    }
}
