//! Estimation and verification of the joint structural concavity conditions
//! C-0 and C-1, the monomial closed form, the concavity sufficient
//! condition, and the rigidity floor.

use crate::cone::ConvexCone;
use crate::error::{CoreError, Result};
use crate::exponents::ExponentSet;
use crate::sampling::sample_cone_sphere;
use crate::search::{pattern_search_max, SearchOptions};
use crate::weight::HomogeneousWeight;

/// Which condition a report speaks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionKind {
    C0,
    C1,
}

/// Verdicts a sampling estimator can reach.  Sampling can refute a
/// "for a.e. x and all y" condition with a witness, or support it with a
/// stabilized sup estimate; it can never prove it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    HoldsWithConstant,
    Refuted,
    Inconclusive,
}

/// Outcome of a C-0 or C-1 estimation run.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub condition: ConditionKind,
    /// Best constant found: sup of the C-0 ratio, or the C-1 sup.
    pub constant_estimate: f64,
    pub witness_x: Vec<f64>,
    pub witness_y: Vec<f64>,
    pub samples_used: usize,
    pub gradient_positivity_violations: usize,
    pub verdict: Verdict,
}

/// Absolute tolerance for gradient positivity and midpoint concavity after
/// normalizing points to the unit sphere.
const GEOM_TOL: f64 = 1e-9;
/// Stabilization threshold between sample doublings.
const STABLE_TOL: f64 = 1e-3;

fn normalize(x: &[f64]) -> Vec<f64> {
    let len = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter().map(|v| v / len).collect()
}

/// The drift term (∇ω(x)/(p′ω(x)) + ∇σ(x)/(pσ(x))) · y with 1/p′ hardwired
/// to 0 at p = 1.
fn condition_rhs(
    omega: &HomogeneousWeight,
    sigma: &HomogeneousWeight,
    exps: &ExponentSet,
    x: &[f64],
    y: &[f64],
) -> f64 {
    let lo = omega.log_grad_raw(x);
    let ls = sigma.log_grad_raw(x);
    let a = exps.inv_p_conj();
    let b = 1.0 / exps.p;
    lo.iter()
        .zip(ls.iter())
        .zip(y)
        .map(|((&go, &gs), &yi)| (a * go + b * gs) * yi)
        .sum()
}

/// The C-0 ratio LHS/RHS at a pair (x, y) ∈ E².
///
/// LHS = ((σ(y)/σ(x))^{1/p} (ω(x)/ω(y))^{1/q})^{n_a/(n_a−n)}, with the
/// degenerate exponent forms substituted directly when n_a = +∞ (exponent 1,
/// q = p) and when p = 1 (1/p′ = 0 in the RHS).  Returns +∞ when the RHS is
/// non-positive, which refutes C-0 at this pair.
pub fn c0_ratio(
    omega: &HomogeneousWeight,
    sigma: &HomogeneousWeight,
    exps: &ExponentSet,
    cone: &ConvexCone,
    x: &[f64],
    y: &[f64],
) -> Result<f64> {
    if exps.na_equals_n() {
        return Err(CoreError::NotApplicable(
            "C-0 requires n_a > n; use check_c1 when n_a = n".into(),
        ));
    }
    let sx = sigma.eval(cone, x)?;
    let sy = sigma.eval(cone, y)?;
    let ox = omega.eval(cone, x)?;
    let oy = omega.eval(cone, y)?;
    let base = (sy / sx).powf(1.0 / exps.p) * (ox / oy).powf(1.0 / exps.q);
    let lhs = base.powf(exps.na_ratio());
    let rhs = condition_rhs(omega, sigma, exps, x, y);
    if rhs <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(lhs / rhs)
}

/// Shared prefix-sup machinery: scans the pair stream and records the
/// incumbent sup and witness at count/4, count/2 and count (two sample
/// doublings).
struct SupScan {
    prefix_sups: [f64; 3],
    prefix_witness: [(Vec<f64>, Vec<f64>); 3],
    violations: usize,
    refuted_pair: Option<(Vec<f64>, Vec<f64>)>,
}

fn scan_pairs<R>(xs: &[Vec<f64>], ys: &[Vec<f64>], mut ratio: R) -> SupScan
where
    R: FnMut(&[f64], &[f64]) -> (f64, f64),
{
    let count = xs.len();
    let marks = [count / 4, count / 2, count];
    let first = (xs[0].clone(), ys[0].clone());
    let mut scan = SupScan {
        prefix_sups: [f64::NEG_INFINITY; 3],
        prefix_witness: [first.clone(), first.clone(), first],
        violations: 0,
        refuted_pair: None,
    };
    let mut sup = f64::NEG_INFINITY;
    let mut witness = (xs[0].clone(), ys[0].clone());
    for i in 0..count {
        let (value, rhs) = ratio(&xs[i], &ys[i]);
        if rhs < -GEOM_TOL {
            scan.violations += 1;
            if scan.refuted_pair.is_none() {
                scan.refuted_pair = Some((xs[i].clone(), ys[i].clone()));
            }
        }
        if value > sup && value.is_finite() {
            sup = value;
            witness = (xs[i].clone(), ys[i].clone());
        }
        for (j, &m) in marks.iter().enumerate() {
            if i + 1 == m {
                scan.prefix_sups[j] = sup;
                scan.prefix_witness[j] = witness.clone();
            }
        }
    }
    scan
}

/// Stabilized across two sample doublings.
fn stabilized(sups: &[f64; 3]) -> bool {
    let scale = sups[2].abs().max(1.0);
    (sups[2] - sups[1]).abs() <= STABLE_TOL * scale
        && (sups[1] - sups[0]).abs() <= STABLE_TOL * scale
}

/// Estimates the best C-0 constant: sup of `c0_ratio` over sampled pairs on
/// (S^{n−1}∩E)² — valid by scale invariance — refined by pattern search
/// around the incumbent.  Verdict is `Refuted` if any RHS ≤ 0,
/// `HoldsWithConstant` when the estimate stabilized across two sample
/// doublings, `Inconclusive` otherwise.
pub fn estimate_best_c0(
    omega: &HomogeneousWeight,
    sigma: &HomogeneousWeight,
    exps: &ExponentSet,
    cone: &ConvexCone,
    sample_count: usize,
    seed: u64,
) -> Result<ConditionReport> {
    if exps.na_equals_n() {
        return Err(CoreError::NotApplicable(
            "C-0 estimation requires n_a > n".into(),
        ));
    }
    let count = sample_count.max(16);
    let dirs = sample_cone_sphere(cone, 2 * count, seed)?;
    let (xs, ys) = dirs.split_at(count);

    let scan = scan_pairs(xs, ys, |x, y| {
        let rhs = condition_rhs(omega, sigma, exps, x, y);
        let value = if rhs > 0.0 {
            c0_ratio(omega, sigma, exps, cone, x, y).unwrap_or(f64::NEG_INFINITY)
        } else {
            f64::NEG_INFINITY
        };
        (value, rhs)
    });

    if let Some((wx, wy)) = scan.refuted_pair {
        return Ok(ConditionReport {
            condition: ConditionKind::C0,
            constant_estimate: f64::INFINITY,
            witness_x: wx,
            witness_y: wy,
            samples_used: count,
            gradient_positivity_violations: scan.violations,
            verdict: Verdict::Refuted,
        });
    }

    // Refine each prefix incumbent with a local pattern search in the joint
    // chart (x, y) ∈ R^{2n}, renormalizing to the sphere inside the
    // objective.  The stabilization criterion applies to the refined sups.
    let dim = cone.dim();
    let refine = |x0: &[f64], y0: &[f64], margin: f64| -> (Vec<f64>, Vec<f64>, f64) {
        let start: Vec<f64> = x0.iter().chain(y0.iter()).copied().collect();
        let objective = |z: &[f64]| {
            let x = normalize(&z[..dim]);
            let y = normalize(&z[dim..]);
            if !cone.contains_with_margin(&x, margin) || !cone.contains_with_margin(&y, margin) {
                return f64::NEG_INFINITY;
            }
            match c0_ratio(omega, sigma, exps, cone, &x, &y) {
                Ok(v) if v.is_finite() => v,
                _ => f64::NEG_INFINITY,
            }
        };
        let (z, v) = pattern_search_max(
            objective,
            &start,
            None,
            None,
            &SearchOptions {
                initial_step: 0.05,
                shrink_rounds: 40,
                max_evals: 20_000,
                ..Default::default()
            },
        );
        (normalize(&z[..dim]), normalize(&z[dim..]), v)
    };

    let mut refined = [0.0f64; 3];
    let mut witness = (Vec::new(), Vec::new());
    for j in 0..3 {
        let (wx, wy, v) = refine(
            &scan.prefix_witness[j].0,
            &scan.prefix_witness[j].1,
            crate::cone::BOUNDARY_MARGIN,
        );
        refined[j] = v.max(scan.prefix_sups[j]);
        if j == 2 {
            witness = (wx, wy);
        }
    }
    let estimate = refined[2];

    // A sup that keeps growing as the boundary margin shrinks diverges:
    // no finite C₀ works, which an explicit near-boundary witness shows.
    let (_, _, capped) = refine(&scan.prefix_witness[2].0, &scan.prefix_witness[2].1, 1e-3);
    let diverging = !estimate.is_finite()
        || estimate > 1e12
        || (capped.is_finite() && estimate > capped * (1.0 + 0.05) + 50.0 * STABLE_TOL);

    let verdict = if diverging {
        Verdict::Refuted
    } else if stabilized(&refined) {
        Verdict::HoldsWithConstant
    } else {
        Verdict::Inconclusive
    };

    Ok(ConditionReport {
        condition: ConditionKind::C0,
        constant_estimate: if verdict == Verdict::Refuted && !estimate.is_finite() {
            f64::INFINITY
        } else {
            estimate
        },
        witness_x: witness.0,
        witness_y: witness.1,
        samples_used: count,
        gradient_positivity_violations: scan.violations,
        verdict,
    })
}

/// Checks condition C-1 (n_a = n): estimates C₁ = sup_{S^{n−1}∩E}
/// ω^{1/q}/σ^{1/p} — valid by 0-homogeneity — and counts sampled pairs where
/// the gradient-positivity inequality fails.
pub fn check_c1(
    omega: &HomogeneousWeight,
    sigma: &HomogeneousWeight,
    exps: &ExponentSet,
    cone: &ConvexCone,
    sample_count: usize,
    seed: u64,
) -> Result<ConditionReport> {
    if !exps.na_equals_n() {
        return Err(CoreError::NotApplicable(format!(
            "C-1 requires n_a = n (got n_a = {})",
            exps.n_a
        )));
    }
    let count = sample_count.max(16);
    let dirs = sample_cone_sphere(cone, 2 * count, seed)?;
    let (xs, ys) = dirs.split_at(count);

    let value_at = |x: &[f64]| -> f64 {
        let o = omega.eval_raw(x);
        let s = sigma.eval_raw(x);
        if o > 0.0 && s > 0.0 && o.is_finite() && s.is_finite() {
            o.powf(1.0 / exps.q) / s.powf(1.0 / exps.p)
        } else {
            f64::NEG_INFINITY
        }
    };

    let scan = scan_pairs(xs, ys, |x, y| {
        let rhs = condition_rhs(omega, sigma, exps, x, y);
        (value_at(x), rhs)
    });

    let refine = |x0: &[f64], margin: f64| -> (Vec<f64>, f64) {
        let objective = |z: &[f64]| {
            let x = normalize(z);
            if !cone.contains_with_margin(&x, margin) {
                return f64::NEG_INFINITY;
            }
            value_at(&x)
        };
        let (z, v) = pattern_search_max(
            objective,
            x0,
            None,
            None,
            &SearchOptions {
                initial_step: 0.05,
                shrink_rounds: 40,
                max_evals: 20_000,
                ..Default::default()
            },
        );
        (normalize(&z), v)
    };

    let mut refined = [0.0f64; 3];
    let mut wx = Vec::new();
    for j in 0..3 {
        let (w, v) = refine(&scan.prefix_witness[j].0, crate::cone::BOUNDARY_MARGIN);
        refined[j] = v.max(scan.prefix_sups[j]);
        if j == 2 {
            wx = w;
        }
    }
    let estimate = refined[2];

    // A sup that keeps growing as the boundary margin shrinks blows up
    // towards ∂E, refuting C-1; gradient violations refute it outright.
    let (_, capped) = refine(&scan.prefix_witness[2].0, 1e-3);
    let diverging = !estimate.is_finite()
        || estimate > 1e12
        || (capped.is_finite() && estimate > capped * (1.0 + 0.05) + 50.0 * STABLE_TOL);
    let verdict = if scan.violations > 0 || diverging {
        Verdict::Refuted
    } else if stabilized(&refined) {
        Verdict::HoldsWithConstant
    } else {
        Verdict::Inconclusive
    };

    Ok(ConditionReport {
        condition: ConditionKind::C1,
        constant_estimate: estimate,
        witness_x: wx.clone(),
        witness_y: wx,
        samples_used: count,
        gradient_positivity_violations: scan.violations,
        verdict,
    })
}

/// Closed-form C-0 constant for a pair of monomial weights
/// ω = ∏ x_i^{τ_i}, σ = ∏ x_i^{α_i} under the admissibility assumptions
/// γ_i := τ_i/p′ + α_i/p ≥ 0, β_i := α_i/p − τ_i/q ≥ 0 and
/// (γ_i = 0 ⇒ τ_i = α_i = 0):
///
/// C₀ = (n_a/(n_a−n)) · (∏ (β_i/γ_i)^{β_i})^{n_a/(n_a−n)}, convention 0⁰=1;
/// the n_a = +∞ limit is ∏ (β_i/γ_i)^{β_i}.
pub fn monomial_c0(tau_vec: &[f64], alpha_vec: &[f64], p: f64, n: usize) -> Result<f64> {
    if tau_vec.len() != n || alpha_vec.len() != n {
        return Err(CoreError::DimensionMismatch {
            expected: n,
            got: tau_vec.len().max(alpha_vec.len()),
        });
    }
    let tau: f64 = tau_vec.iter().sum();
    let alpha: f64 = alpha_vec.iter().sum();
    let exps = crate::exponents::validate_exponents(n, p, tau, alpha)?;
    if exps.na_equals_n() {
        return Err(CoreError::NotApplicable(
            "monomial C-0 formula requires n_a > n".into(),
        ));
    }
    for (i, &ai) in alpha_vec.iter().enumerate() {
        if ai < 0.0 {
            return Err(CoreError::AssumptionViolation(format!(
                "α_{} = {ai} < 0",
                i + 1
            )));
        }
    }
    let inv_pc = exps.inv_p_conj();
    let mut log_prod = 0.0;
    for i in 0..n {
        let gamma_i = tau_vec[i] * inv_pc + alpha_vec[i] / p;
        let beta_i = alpha_vec[i] / p - tau_vec[i] / exps.q;
        if gamma_i < -1e-12 {
            return Err(CoreError::AssumptionViolation(format!(
                "γ_{} = {gamma_i} < 0",
                i + 1
            )));
        }
        if beta_i < -1e-12 {
            return Err(CoreError::AssumptionViolation(format!(
                "β_{} = {beta_i} < 0",
                i + 1
            )));
        }
        if gamma_i.abs() <= 1e-14 {
            if tau_vec[i] != 0.0 || alpha_vec[i] != 0.0 {
                return Err(CoreError::AssumptionViolation(format!(
                    "γ_{} = 0 requires τ_{} = α_{} = 0",
                    i + 1,
                    i + 1,
                    i + 1
                )));
            }
            continue; // 0⁰ = 1 and the 0/0 factor resolves to 1
        }
        if beta_i.abs() <= 1e-300 {
            continue; // (0/γ)⁰ = 1
        }
        log_prod += beta_i * (beta_i / gamma_i).ln();
    }
    if exps.na_is_infinite() {
        Ok(log_prod.exp())
    } else {
        let ratio = exps.na_ratio();
        Ok(ratio * (ratio * log_prod).exp())
    }
}

/// Sufficient condition for C-0 (with constant n_a/(n_a−n)): midpoint
/// concavity of F = ω^δ σ^γ, δ = −(1/q)·n_a/(n_a−n), γ = (1/p)·n_a/(n_a−n),
/// together with ∇ω(x)·y ≥ 0, checked on sampled pairs.
pub fn concavity_sufficient(
    omega: &HomogeneousWeight,
    sigma: &HomogeneousWeight,
    exps: &ExponentSet,
    cone: &ConvexCone,
    sample_count: usize,
    seed: u64,
) -> Result<bool> {
    if exps.na_is_infinite() || exps.na_equals_n() {
        return Err(CoreError::NotApplicable(
            "concavity test requires finite n_a > n".into(),
        ));
    }
    let ratio = exps.na_ratio();
    let delta = -ratio / exps.q;
    let gam = ratio / exps.p;
    let f = |x: &[f64]| omega.eval_raw(x).powf(delta) * sigma.eval_raw(x).powf(gam);

    let count = sample_count.max(16);
    let dirs = sample_cone_sphere(cone, 2 * count, seed)?;
    let (xs, ys) = dirs.split_at(count);
    for (x, y) in xs.iter().zip(ys) {
        let mid: Vec<f64> = x.iter().zip(y).map(|(a, b)| 0.5 * (a + b)).collect();
        if f(&mid) < 0.5 * (f(x) + f(y)) - GEOM_TOL {
            return Ok(false);
        }
        let grad_omega_dot: f64 = omega
            .log_grad_raw(x)
            .iter()
            .zip(y)
            .map(|(g, yi)| g * yi)
            .sum::<f64>()
            * omega.eval_raw(x);
        if grad_omega_dot < -GEOM_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The rigidity floor C₀ ≥ 1/(n_a−n) that any C-0 constant must respect when
/// τ ≤ α.
pub fn rigidity_floor(exps: &ExponentSet) -> Result<f64> {
    if exps.na_is_infinite() || exps.na_equals_n() {
        return Err(CoreError::NotApplicable(
            "rigidity floor requires finite n_a > n".into(),
        ));
    }
    Ok(1.0 / (exps.n_a - exps.n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::validate_exponents;

    fn orthant2() -> ConvexCone {
        ConvexCone::positive_orthant(2).unwrap()
    }

    #[test]
    fn ratio_at_diagonal_of_equal_monomials() {
        let cone = orthant2();
        let w = HomogeneousWeight::monomial(vec![1.0, 1.0]);
        let exps = validate_exponents(2, 2.0, 2.0, 2.0).unwrap();
        let r = c0_ratio(&w, &w, &exps, &cone, &[1.0, 1.0], &[1.0, 1.0]).unwrap();
        assert!((r - 0.5).abs() < 1e-12, "ratio {r}");
    }

    #[test]
    fn diagonal_identity_general() {
        // c0_ratio(x, x) = 1/(τ/p′ + α/p) by Euler's theorem.
        let cone = orthant2();
        let omega = HomogeneousWeight::monomial(vec![0.5, 1.0]);
        let sigma = HomogeneousWeight::power(HomogeneousWeight::sum_power(1.0), 2.0);
        let exps = validate_exponents(2, 2.0, 1.5, 2.0).unwrap();
        let expected = 1.0 / (exps.tau / exps.p_conj + exps.alpha / exps.p);
        for x in sample_cone_sphere(&cone, 50, 9).unwrap() {
            let r = c0_ratio(&omega, &sigma, &exps, &cone, &x, &x).unwrap();
            assert!((r - expected).abs() < 1e-10 * expected, "{r} vs {expected}");
        }
    }

    #[test]
    fn ratio_scale_invariance() {
        let cone = orthant2();
        let omega = HomogeneousWeight::monomial(vec![1.0, 0.5]);
        let sigma = HomogeneousWeight::monomial(vec![0.5, 1.5]);
        let exps = validate_exponents(2, 2.0, 1.5, 2.0).unwrap();
        let pts = sample_cone_sphere(&cone, 40, 3).unwrap();
        for pair in pts.chunks(2) {
            let [x, y] = pair else { continue };
            let base = c0_ratio(&omega, &sigma, &exps, &cone, x, y).unwrap();
            for (l, m) in [(3.0, 0.25), (0.1, 17.0)] {
                let xs: Vec<f64> = x.iter().map(|v| v * l).collect();
                let ys: Vec<f64> = y.iter().map(|v| v * m).collect();
                let r = c0_ratio(&omega, &sigma, &exps, &cone, &xs, &ys).unwrap();
                assert!((r - base).abs() < 1e-10 * base.abs(), "{r} vs {base}");
            }
        }
    }

    #[test]
    fn best_c0_equal_monomials_hits_rigidity_floor() {
        let cone = orthant2();
        let w = HomogeneousWeight::monomial(vec![1.0, 1.0]);
        let exps = validate_exponents(2, 2.0, 2.0, 2.0).unwrap();
        let report = estimate_best_c0(&w, &w, &exps, &cone, 20_000, 17).unwrap();
        assert!(
            (report.constant_estimate - 0.5).abs() < 1e-3,
            "estimate {}",
            report.constant_estimate
        );
        let floor = rigidity_floor(&exps).unwrap();
        assert!((floor - 0.5).abs() < 1e-15);
        assert!(report.constant_estimate >= floor - 1e-6);
        assert_eq!(report.verdict, Verdict::HoldsWithConstant);
        // Witness normalizes to y ≈ x.
        let d: f64 = report
            .witness_x
            .iter()
            .zip(&report.witness_y)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!(d < 0.05, "witness distance {d}");
    }

    #[test]
    fn best_c0_pure_sigma_p1_case() {
        // ω = 1, σ = x₂^{1/2}, p = 1, n = 2: closed form C₀ = 2.
        let cone = orthant2();
        let omega = HomogeneousWeight::constant(1.0);
        let sigma = HomogeneousWeight::monomial(vec![0.0, 0.5]);
        let exps = validate_exponents(2, 1.0, 0.0, 0.5).unwrap();
        assert!((exps.n_a - 4.0).abs() < 1e-12);
        let report = estimate_best_c0(&omega, &sigma, &exps, &cone, 20_000, 23).unwrap();
        assert!(
            (report.constant_estimate - 2.0).abs() < 1e-2,
            "estimate {}",
            report.constant_estimate
        );
        let closed = monomial_c0(&[0.0, 0.0], &[0.0, 0.5], 1.0, 2).unwrap();
        assert!((closed - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sum_and_marcus_lopes_pair_holds_in_2d() {
        // ω = x₁+x₂, σ = (x₁x₂)^{1/2} satisfies C-0 exactly when n = 2.
        let cone = orthant2();
        let omega = HomogeneousWeight::sum_power(1.0);
        let sigma = HomogeneousWeight::monomial(vec![0.5, 0.5]);
        let exps = validate_exponents(2, 2.0, 1.0, 1.0).unwrap();
        let report = estimate_best_c0(&omega, &sigma, &exps, &cone, 20_000, 29).unwrap();
        assert_eq!(report.verdict, Verdict::HoldsWithConstant, "{report:?}");
        assert!(report.constant_estimate.is_finite());
        assert_eq!(report.gradient_positivity_violations, 0);
    }

    #[test]
    fn c1_constant_weights() {
        let cone = ConvexCone::full_space(2).unwrap();
        let one = HomogeneousWeight::constant(1.0);
        let exps = validate_exponents(2, 1.0, 0.0, 0.0).unwrap();
        let report = check_c1(&one, &one, &exps, &cone, 5_000, 31).unwrap();
        assert!((report.constant_estimate - 1.0).abs() < 1e-9);
        assert_eq!(report.gradient_positivity_violations, 0);
        assert_eq!(report.verdict, Verdict::HoldsWithConstant);
    }

    #[test]
    fn c1_sum_weight_example() {
        // ω = (x₁+x₂)^τ, σ = |x|^{τ(1−p/n)}, n=2, p=1, τ=1: C₁ = 2^{1/4}.
        let cone = orthant2();
        let omega = HomogeneousWeight::sum_power(1.0);
        let sigma = HomogeneousWeight::radial_power(0.5);
        let exps = validate_exponents(2, 1.0, 1.0, 0.5).unwrap();
        assert!(exps.na_equals_n());
        assert!((exps.q - 2.0).abs() < 1e-12);
        let report = check_c1(&omega, &sigma, &exps, &cone, 100_000, 37).unwrap();
        let expected = 2f64.powf(0.25);
        assert!(
            (report.constant_estimate - expected).abs() < 1e-6,
            "C1 {} vs {expected}",
            report.constant_estimate
        );
        assert_eq!(report.gradient_positivity_violations, 0);
    }

    #[test]
    fn c1_unbounded_zero_homogeneous_refuted() {
        // ω = x₁/x₂ is 0-homogeneous but blows up as x₂ → 0⁺.
        let cone = orthant2();
        let omega = HomogeneousWeight::monomial(vec![1.0, -1.0]);
        let sigma = HomogeneousWeight::constant(1.0);
        let exps = validate_exponents(2, 1.5, 0.0, 0.0).unwrap();
        let report = check_c1(&omega, &sigma, &exps, &cone, 20_000, 41).unwrap();
        assert_eq!(report.verdict, Verdict::Refuted, "{report:?}");
    }

    #[test]
    fn monomial_c0_closed_forms() {
        // Equal weights reduce exactly to 1/(n_a−n).
        let c = monomial_c0(&[1.0, 1.0], &[1.0, 1.0], 2.0, 2).unwrap();
        assert!((c - 0.5).abs() < 1e-14, "{c}");
        // n_a = +∞ limit.
        let c = monomial_c0(&[0.0, 0.0], &[1.0, 1.0], 2.0, 2).unwrap();
        assert!((c - 1.0).abs() < 1e-14, "{c}");
        // Failing index is named.
        let err = monomial_c0(&[0.0, -1.0], &[0.0, 0.0], 2.0, 2).unwrap_err();
        match err {
            CoreError::AssumptionViolation(msg) => assert!(msg.contains('2'), "{msg}"),
            CoreError::RangeViolation(_) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn monomial_c0_agrees_with_sampled_estimate() {
        // The AM-GM bound is tight at the witness with γ_i y_i/x_i all
        // equal, so sup-sampling must reproduce the closed form on random
        // admissible configurations.
        let cone = orthant2();
        let mut rng = crate::sampling::rng_from_seed(43);
        let mut done = 0usize;
        let mut attempts = 0usize;
        while done < 20 && attempts < 4000 {
            attempts += 1;
            let p = 1.0 + 1.5 * rand::Rng::gen::<f64>(&mut rng);
            let tv: Vec<f64> = (0..2)
                .map(|_| -0.4 + 1.6 * rand::Rng::gen::<f64>(&mut rng))
                .collect();
            let av: Vec<f64> = (0..2)
                .map(|_| 0.05 + 1.2 * rand::Rng::gen::<f64>(&mut rng))
                .collect();
            let Ok(closed) = monomial_c0(&tv, &av, p, 2) else {
                continue;
            };
            if !(0.05..=10.0).contains(&closed) {
                continue;
            }
            let omega = HomogeneousWeight::monomial(tv.clone());
            let sigma = HomogeneousWeight::monomial(av.clone());
            let exps =
                validate_exponents(2, p, tv.iter().sum(), av.iter().sum()).unwrap();
            let report = estimate_best_c0(&omega, &sigma, &exps, &cone, 30_000, 43).unwrap();
            assert!(
                (report.constant_estimate - closed).abs() < 1e-2 * closed.max(1.0),
                "τ={tv:?} α={av:?} p={p}: sampled {} vs closed {closed}",
                report.constant_estimate
            );
            done += 1;
        }
        assert_eq!(done, 20, "only {done} admissible configurations generated");
    }

    #[test]
    fn sum_and_marcus_lopes_pair_fails_beyond_2d() {
        // ω = x₁+x₂+x₃, σ = (x₁x₂x₃)^{1/3}: the pair satisfies C-0 only in
        // two dimensions, so the estimator must not certify it at n = 3.
        let cone = ConvexCone::positive_orthant(3).unwrap();
        let omega = HomogeneousWeight::sum_power(1.0);
        let sigma = HomogeneousWeight::monomial(vec![1.0 / 3.0; 3]);
        let exps = validate_exponents(3, 2.0, 1.0, 1.0).unwrap();
        let report = estimate_best_c0(&omega, &sigma, &exps, &cone, 30_000, 67).unwrap();
        assert_ne!(
            report.verdict,
            Verdict::HoldsWithConstant,
            "no finite C₀ exists for this pair at n = 3: {report:?}"
        );
    }

    #[test]
    fn concavity_sufficient_examples() {
        let cone = orthant2();
        // ω = 1, σ = Marcus–Lopes(α): C-0 holds with C₀ = p/α.
        let omega = HomogeneousWeight::constant(1.0);
        let sigma = HomogeneousWeight::marcus_lopes(0.8);
        let exps = validate_exponents(2, 1.5, 0.0, 0.8).unwrap();
        assert!((exps.na_ratio() - 1.5 / 0.8).abs() < 1e-12);
        assert!(concavity_sufficient(&omega, &sigma, &exps, &cone, 5_000, 47).unwrap());

        // ω = σ = x₁x₂ passes as well.
        let w = HomogeneousWeight::monomial(vec![1.0, 1.0]);
        let exps = validate_exponents(2, 2.0, 2.0, 2.0).unwrap();
        assert!(concavity_sufficient(&w, &w, &exps, &cone, 5_000, 53).unwrap());

        // ω = σ = |x|³ on R², p = 2 fails the midpoint test (F = |x|).
        let full = ConvexCone::full_space(2).unwrap();
        let r3 = HomogeneousWeight::radial_power(3.0);
        let exps = validate_exponents(2, 2.0, 3.0, 3.0).unwrap();
        assert!(!concavity_sufficient(&r3, &r3, &exps, &full, 5_000, 59).unwrap());
    }

    #[test]
    fn equal_concave_weights_pin_estimate_to_floor() {
        // ω = σ = x₂ on the upper half-plane: σ^{1/α} = x₂ is concave, so
        // the estimate must land on the rigidity floor 1/(n_a−n) = 1 from
        // both sides.
        let cone = ConvexCone::planar_sector(0.0, std::f64::consts::PI).unwrap();
        let w = HomogeneousWeight::monomial(vec![0.0, 1.0]);
        let exps = validate_exponents(2, 1.0, 1.0, 1.0).unwrap();
        let floor = rigidity_floor(&exps).unwrap();
        assert!((floor - 1.0).abs() < 1e-12);
        let report = estimate_best_c0(&w, &w, &exps, &cone, 20_000, 61).unwrap();
        assert!(
            (report.constant_estimate - floor).abs() < 1e-3,
            "estimate {} vs floor {floor}",
            report.constant_estimate
        );
    }

    #[test]
    fn rigidity_floor_values() {
        let exps = validate_exponents(2, 2.0, 2.0, 2.0).unwrap();
        assert!((rigidity_floor(&exps).unwrap() - 0.5).abs() < 1e-15);
        // Consistency: ω=1, σ=x₂^{1/2} has τ ≤ α, floor 0.5, estimate 2.0 ≥ floor.
        let exps = validate_exponents(2, 1.0, 0.0, 0.5).unwrap();
        let floor = rigidity_floor(&exps).unwrap();
        assert!((floor - 0.5).abs() < 1e-15);
        assert!(2.0 >= floor);
        let inf_case = validate_exponents(2, 2.0, 0.0, 2.0).unwrap();
        assert!(matches!(
            rigidity_floor(&inf_case),
            Err(CoreError::NotApplicable(_))
        ));
    }
}
