//! Necessity probes: families of test functions whose asymptotic behaviour
//! forces the admissible parameter ranges.  A positive drift demonstrates
//! failure of the inequality for out-of-range parameters.

use crate::cone::ConvexCone;
use crate::error::{CoreError, Result};
use crate::grid::{weighted_grad_lp_norm, weighted_lq_norm, GridFunction};
use crate::quad::{sphere_integral, tanh_sinh, QuadOptions};
use crate::weight::HomogeneousWeight;

/// Exponent tuple for probes: q is taken from the balance relation even
/// when the range conditions fail (that failure is what the probe shows).
#[derive(Debug, Clone, Copy)]
pub struct RawExponents {
    pub n: usize,
    pub p: f64,
    pub tau: f64,
    pub alpha: f64,
    pub q: f64,
}

impl RawExponents {
    /// q from the balance relation (τ+n)/q = (α+n)/p − 1.
    pub fn from_balance(n: usize, p: f64, tau: f64, alpha: f64) -> Result<Self> {
        let nf = n as f64;
        if !(alpha + nf - p > 0.0) {
            return Err(CoreError::RangeViolation(
                "balance needs α + n − p > 0".into(),
            ));
        }
        Ok(RawExponents {
            n,
            p,
            tau,
            alpha,
            q: p * (tau + nf) / (alpha + nf - p),
        })
    }
}

/// Outcome of a probe sweep: parameter values, measured quotients, the
/// fitted log-log slope with its standard error, and the predicted exponent.
#[derive(Debug, Clone)]
pub struct ProbeResult {
    pub parameters: Vec<f64>,
    pub quotients: Vec<f64>,
    pub fitted_slope: f64,
    pub slope_std_error: f64,
    pub predicted_exponent: f64,
    /// For the log-family probe: fitted growth exponents of the two sides.
    pub side_exponents: Option<(f64, f64)>,
}

/// Least squares fit of y = a + b·x over the last half of the points
/// (the asymptotic regime); returns (b, standard error of b).
fn fit_tail_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let start = xs.len() / 2;
    let x = &xs[start.saturating_sub(1)..];
    let y = &ys[start.saturating_sub(1)..];
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(u, v)| (u - mx) * (v - my)).sum();
    let slope = sxy / sxx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(u, v)| {
            let pred = my + slope * (u - mx);
            (v - pred) * (v - pred)
        })
        .sum();
    let dof = (x.len() as f64 - 2.0).max(1.0);
    let se = (ss_res / dof / sxx).sqrt();
    (slope, se)
}

/// Smooth bump supported in the unit ball.
fn unit_bump(z2: f64) -> f64 {
    if z2 >= 1.0 {
        0.0
    } else {
        (1.0 - z2).powi(4)
    }
}

/// Shifted-bump probe: u_δ(x) = v(x − δy₀) for a fixed bump v in B₁.
/// The quotient scales like δ^{τ/q − α/p}; a positive fitted slope shows
/// the inequality fails, matching violation of the range condition.
pub fn necessity_probe_shift(
    omega: &HomogeneousWeight,
    sigma: &HomogeneousWeight,
    raw: &RawExponents,
    cone: &ConvexCone,
    y0: &[f64],
    deltas: &[f64],
    grid_res: usize,
) -> Result<ProbeResult> {
    let n = cone.dim();
    if y0.len() != n {
        return Err(CoreError::DimensionMismatch {
            expected: n,
            got: y0.len(),
        });
    }
    if deltas.len() < 4 || deltas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CoreError::RangeViolation(
            "need ≥ 4 strictly increasing delta values".into(),
        ));
    }
    let y0_norm: f64 = y0.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (y0_norm - 1.0).abs() > 1e-9 || !cone.contains(y0) {
        return Err(CoreError::RangeViolation(
            "y₀ must be a unit vector inside E".into(),
        ));
    }

    let half = 1.15;
    let mut quotients = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        // The box around the shifted bump must sit inside E; by convexity it
        // suffices to check the 2^n corners.
        let lo: Vec<f64> = y0.iter().map(|&c| delta * c - half).collect();
        let hi: Vec<f64> = y0.iter().map(|&c| delta * c + half).collect();
        for corner in 0..(1usize << n) {
            let pt: Vec<f64> = (0..n)
                .map(|ax| if (corner >> ax) & 1 == 1 { hi[ax] } else { lo[ax] })
                .collect();
            if !cone.contains(&pt) {
                return Err(CoreError::BumpExitsCone(delta));
            }
        }
        let center: Vec<f64> = y0.iter().map(|&c| delta * c).collect();
        let shape = vec![grid_res; n];
        let u = GridFunction::sample(cone, &lo, &hi, &shape, |x| {
            let z2: f64 = x
                .iter()
                .zip(&center)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            unit_bump(z2)
        })?;
        let num = weighted_lq_norm(&u, omega, raw.q)?;
        let den = weighted_grad_lp_norm(&u, sigma, raw.p)?;
        if !(den > 0.0) {
            return Err(CoreError::ZeroGradient);
        }
        quotients.push(num / den);
    }

    let xs: Vec<f64> = deltas.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = quotients.iter().map(|q| q.ln()).collect();
    let (slope, se) = fit_tail_slope(&xs, &ys);
    Ok(ProbeResult {
        parameters: deltas.to_vec(),
        quotients,
        fitted_slope: slope,
        slope_std_error: se,
        predicted_exponent: raw.tau / raw.q - raw.alpha / raw.p,
        side_exponents: None,
    })
}

/// Smooth ramp 0 → 1 over [1, 2].
fn ramp_up(t: f64) -> f64 {
    if t <= 1.0 {
        0.0
    } else if t >= 2.0 {
        1.0
    } else {
        0.5 * (1.0 - (std::f64::consts::PI * (t - 1.0)).cos())
    }
}

fn ramp_up_deriv(t: f64) -> f64 {
    if t <= 1.0 || t >= 2.0 {
        0.0
    } else {
        0.5 * std::f64::consts::PI * (std::f64::consts::PI * (t - 1.0)).sin()
    }
}

/// Logarithmic-family probe: u_ε(x) = |x|^{−β} log|x| φ(|x|/ε) h(|x|) with
/// β = (τ+n)/q.  The weighted L^q mass grows like (log 1/(2ε))^{1+1/q} and
/// the gradient side like (log 1/ε)^{1+1/p}; their ratio stays bounded
/// exactly when p ≤ q.
pub fn necessity_probe_log(
    raw: &RawExponents,
    cone: &ConvexCone,
    epsilons: &[f64],
    opts: &QuadOptions,
) -> Result<ProbeResult> {
    if epsilons.len() < 4 {
        return Err(CoreError::RangeViolation(
            "need ≥ 4 epsilon values for the slope fit".into(),
        ));
    }
    if epsilons
        .windows(2)
        .any(|w| w[1] >= w[0])
    {
        return Err(CoreError::RangeViolation(
            "epsilon values must be strictly decreasing".into(),
        ));
    }
    if epsilons.iter().any(|&e| !(0.0 < e && e < 0.5)) {
        return Err(CoreError::RangeViolation(
            "epsilon values must lie in (0, 1/2)".into(),
        ));
    }
    let nf = raw.n as f64;
    let beta = (raw.tau + nf) / raw.q;

    // No weights are supplied here: the radial powers τ+n−1 and α+n−1 carry
    // the homogeneity, and the angular factors are ε-independent constants
    // that never move the fitted slopes.  |S^{n−1}∩E| stands in for both.
    let s_omega = sphere_integral(cone, |_| 1.0, opts)?.value;
    let s_sigma = s_omega;

    // Outer cutoff h(r): 1 on [0,1], ramp down to 0 over [1,2].
    let h = |r: f64| -> f64 { 1.0 - ramp_up(r) };
    let h_deriv = |r: f64| -> f64 { -ramp_up_deriv(r) };

    // Radial integrals in the coordinate s = ln(1/r): with the singular
    // power split off analytically the integrands are polynomial in s times
    // the ramps, so the deep-ε asymptotic regime stays overflow-free.
    let e_mass = raw.tau + nf - 1.0 - beta * raw.q;
    let e_grad = raw.alpha + nf - 1.0 - (beta + 1.0) * raw.p;

    let mut lhs = Vec::with_capacity(epsilons.len());
    let mut rhs = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let s_max = (1.0 / eps).ln();
        let s_min = -(2.0f64).ln();
        let mass = tanh_sinh(
            |s| {
                let r = (-s).exp();
                let g = s.abs() * ramp_up(r / eps) * h(r);
                g.powf(raw.q) * (-(e_mass + 1.0) * s).exp()
            },
            s_min,
            s_max,
            opts.tol,
        );
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(CoreError::ResolutionInsufficient(format!(
                "ring {{{eps} ≤ |x| ≤ 2}} quadrature degenerated (mass {mass})"
            )));
        }
        let grad = tanh_sinh(
            |s| {
                let r = (-s).exp();
                let phi = ramp_up(r / eps);
                let g = (1.0 + beta * s) * phi * h(r)
                    + (r / eps) * (-s) * ramp_up_deriv(r / eps) * h(r)
                    + r * (-s) * phi * h_deriv(r);
                g.abs().powf(raw.p) * (-(e_grad + 1.0) * s).exp()
            },
            s_min,
            s_max,
            opts.tol,
        );
        lhs.push((s_omega * mass).powf(1.0 / raw.q));
        rhs.push((s_sigma * grad).powf(1.0 / raw.p));
    }

    let t_left: Vec<f64> = epsilons.iter().map(|e| (1.0 / (2.0 * e)).ln().ln()).collect();
    let t_right: Vec<f64> = epsilons.iter().map(|e| (1.0 / e).ln().ln()).collect();
    let yl: Vec<f64> = lhs.iter().map(|v| v.ln()).collect();
    let yr: Vec<f64> = rhs.iter().map(|v| v.ln()).collect();
    let (left_exp, _) = fit_tail_slope(&t_left, &yl);
    let (right_exp, _) = fit_tail_slope(&t_right, &yr);

    let quotients: Vec<f64> = lhs.iter().zip(&rhs).map(|(a, b)| a / b).collect();
    let yq: Vec<f64> = quotients.iter().map(|v| v.ln()).collect();
    let (slope, se) = fit_tail_slope(&t_left, &yq);

    Ok(ProbeResult {
        parameters: epsilons.to_vec(),
        quotients,
        fitted_slope: slope,
        slope_std_error: se,
        predicted_exponent: 1.0 / raw.q - 1.0 / raw.p,
        side_exponents: Some((left_exp, right_exp)),
    })
}
