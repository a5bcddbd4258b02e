//! Lower bound for the spectral gap of the weighted eigenvalue problem
//! −div(σ∇u) = λωu on Ω∩E (α = τ+2, p = q = 2):
//!
//!   λ ≥ (1/(4C₀²)) · sup_v (∫ v ω^{−1/2} σ^{1/2})² / (∫ v|y|² · ∫ v),
//!
//! where the sup runs over densities supported in Ω.  Any sampled v gives a
//! valid bound; for a bump concentrating at y₀ the ratio tends to
//! σ(y₀)/(ω(y₀)|y₀|²).

use crate::cone::ConvexCone;
use crate::error::{CoreError, Result};
use crate::exponents::ExponentSet;
use crate::grid::{weighted_grad_lp_norm, weighted_lq_norm, GridFunction};
use crate::sampling::rng_from_seed;
use crate::search::{pattern_search_max, SearchOptions};
use crate::weight::HomogeneousWeight;
use rand::Rng;

#[derive(Debug, Clone)]
pub struct SpectralGapBound {
    pub bound: f64,
    pub best_center: Vec<f64>,
    pub best_width: f64,
    /// The integral ratio before the 1/(4C₀²) prefactor.
    pub best_ratio: f64,
}

fn check_assumptions(exps: &ExponentSet) -> Result<()> {
    if (exps.alpha - exps.tau - 2.0).abs() > 1e-12 * (1.0 + exps.alpha.abs()) {
        return Err(CoreError::AssumptionViolation(format!(
            "spectral gap bound needs α = τ+2 (τ = {}, α = {})",
            exps.tau, exps.alpha
        )));
    }
    if (exps.p - 2.0).abs() > 1e-12 || !exps.na_is_infinite() {
        return Err(CoreError::AssumptionViolation(
            "spectral gap bound needs p = q = 2".into(),
        ));
    }
    Ok(())
}

/// Integral ratio (∫vh)²/(∫v|y|²·∫v) for a Gaussian bump v at `center` of
/// width `w`, h = (σ/ω)^{1/2}, computed on a local grid clipped to E.
fn bump_ratio(
    omega: &HomogeneousWeight,
    sigma: &HomogeneousWeight,
    cone: &ConvexCone,
    center: &[f64],
    width: f64,
    res: usize,
) -> f64 {
    let n = cone.dim();
    let lo: Vec<f64> = center.iter().map(|c| c - 4.5 * width).collect();
    let hi: Vec<f64> = center.iter().map(|c| c + 4.5 * width).collect();
    let shape = vec![res; n];
    let grid = match GridFunction::sample(cone, &lo, &hi, &shape, |x| {
        let d2: f64 = x
            .iter()
            .zip(center)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        (-0.5 * d2 / (width * width)).exp()
    }) {
        Ok(g) => g,
        Err(_) => return f64::NEG_INFINITY,
    };
    let vol = grid.cell_volume();
    let (mut m_h, mut m_r2, mut m_1) = (0.0, 0.0, 0.0);
    for (idx, (&v, &m)) in grid.values.iter().zip(&grid.mask).enumerate() {
        if !m || v == 0.0 {
            continue;
        }
        let y = grid.center(idx);
        let o = omega.eval_raw(&y);
        let s = sigma.eval_raw(&y);
        if !(o > 0.0) || !(s > 0.0) {
            continue;
        }
        let r2: f64 = y.iter().map(|v| v * v).sum();
        m_h += v * (s / o).sqrt() * vol;
        m_r2 += v * r2 * vol;
        m_1 += v * vol;
    }
    if m_1 > 0.0 && m_r2 > 0.0 {
        m_h * m_h / (m_r2 * m_1)
    } else {
        f64::NEG_INFINITY
    }
}

/// Evaluates the bound over concentrating bumps with centers searched in the
/// box Ω ∩ E.  Returns (1/(4C₀²)) times the best sampled integral ratio — a
/// valid lower bound because the sup dominates every sampled value.
pub fn spectral_gap_bound(
    omega: &HomogeneousWeight,
    sigma: &HomogeneousWeight,
    exps: &ExponentSet,
    cone: &ConvexCone,
    c0: f64,
    region_lo: &[f64],
    region_hi: &[f64],
    seed: u64,
) -> Result<SpectralGapBound> {
    check_assumptions(exps)?;
    if !(c0 > 0.0) {
        return Err(CoreError::RangeViolation("C₀ must be positive".into()));
    }
    let n = cone.dim();
    if region_lo.len() != n || region_hi.len() != n {
        return Err(CoreError::DimensionMismatch {
            expected: n,
            got: region_lo.len().min(region_hi.len()),
        });
    }

    // Concentration limit of the ratio; used only to steer the center search.
    let limit = |c: &[f64]| -> f64 {
        if !cone.contains(c) {
            return f64::NEG_INFINITY;
        }
        let o = omega.eval_raw(c);
        let s = sigma.eval_raw(c);
        let r2: f64 = c.iter().map(|v| v * v).sum();
        if o > 0.0 && s > 0.0 && r2 > 0.0 {
            s / (o * r2)
        } else {
            f64::NEG_INFINITY
        }
    };

    // Seeded multistart over Ω, refined by pattern search on the limit.
    let mut rng = rng_from_seed(seed);
    let mut best_center: Option<Vec<f64>> = None;
    let mut best_limit = f64::NEG_INFINITY;
    for _ in 0..32 {
        let c: Vec<f64> = region_lo
            .iter()
            .zip(region_hi)
            .map(|(&a, &b)| a + (b - a) * rng.gen::<f64>())
            .collect();
        let v = limit(&c);
        if v > best_limit {
            best_limit = v;
            best_center = Some(c);
        }
    }
    let start = best_center.ok_or_else(|| {
        CoreError::EmptyCone("no region sample landed inside the cone".into())
    })?;
    let (center, _) = pattern_search_max(
        |c| limit(c),
        &start,
        Some(region_lo),
        Some(region_hi),
        &SearchOptions {
            initial_step: 0.1,
            shrink_rounds: 30,
            ..Default::default()
        },
    );

    // Shrink the bump until the measured ratio stabilizes at the limit;
    // every measured value is itself a valid bound.
    let wall = center
        .iter()
        .zip(region_lo.iter().zip(region_hi))
        .map(|(&c, (&a, &b))| (c - a).min(b - c))
        .fold(f64::INFINITY, f64::min);
    let mut best_ratio = f64::NEG_INFINITY;
    let mut best_width = wall / 5.0;
    for shrink in [5.0, 10.0, 20.0, 40.0] {
        let w = wall / shrink;
        let r = bump_ratio(omega, sigma, cone, &center, w, 48);
        if r > best_ratio {
            best_ratio = r;
            best_width = w;
        }
    }
    if !best_ratio.is_finite() {
        return Err(CoreError::QuadratureFailure(
            "no admissible bump produced a finite ratio".into(),
        ));
    }
    Ok(SpectralGapBound {
        bound: best_ratio / (4.0 * c0 * c0),
        best_center: center,
        best_width,
        best_ratio,
    })
}

/// Rayleigh quotient (∫|∇u|²σ)/(∫u²ω) of a grid trial function.
pub fn rayleigh_quotient(
    u: &GridFunction,
    omega: &HomogeneousWeight,
    sigma: &HomogeneousWeight,
) -> Result<f64> {
    let num = weighted_grad_lp_norm(u, sigma, 2.0)?;
    let den = weighted_lq_norm(u, omega, 2.0)?;
    if !(den > 0.0) {
        return Err(CoreError::NormalizationFailure(
            "trial function has zero weighted mass".into(),
        ));
    }
    Ok((num / den).powi(2))
}

/// Seeded Gaussian trial bumps in Ω∩E (vanishing at ∂Ω) and their Rayleigh
/// quotients; used to cross-check the bound from below.
pub fn sampled_rayleigh_quotients(
    omega: &HomogeneousWeight,
    sigma: &HomogeneousWeight,
    cone: &ConvexCone,
    region_lo: &[f64],
    region_hi: &[f64],
    res: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let n = cone.dim();
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::with_capacity(count);
    let shape = vec![res; n];
    let extent: Vec<f64> = region_lo
        .iter()
        .zip(region_hi)
        .map(|(&a, &b)| b - a)
        .collect();
    let mut attempts = 0;
    while out.len() < count && attempts < 50 * count {
        attempts += 1;
        let center: Vec<f64> = region_lo
            .iter()
            .zip(region_hi)
            .map(|(&a, &b)| a + (b - a) * (0.25 + 0.5 * rng.gen::<f64>()))
            .collect();
        if !cone.contains(&center) {
            continue;
        }
        let wall = center
            .iter()
            .zip(region_lo.iter().zip(region_hi))
            .map(|(&c, (&a, &b))| (c - a).min(b - c))
            .fold(f64::INFINITY, f64::min);
        let width = wall / (4.0 + 4.0 * rng.gen::<f64>());
        let u = GridFunction::sample(cone, region_lo, region_hi, &shape, |x| {
            let d2: f64 = x
                .iter()
                .zip(&center)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            let v = (-0.5 * d2 / (width * width)).exp();
            if v < 1e-10 {
                0.0
            } else {
                v
            }
        })?;
        let _ = extent.len();
        if let Ok(rq) = rayleigh_quotient(&u, omega, sigma) {
            if rq.is_finite() {
                out.push(rq);
            }
        }
    }
    if out.len() < count {
        return Err(CoreError::EmptyCone(
            "could not place the requested number of trial bumps".into(),
        ));
    }
    Ok(out)
}
