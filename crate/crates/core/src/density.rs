//! Parametric test-density families v ≥ 0 with ∫_E v = 1 and the cone
//! integrals entering the inequality constants.  Any admissible v
//! yields a valid constant, so the optimizer only tightens the result.

use crate::cone::ConvexCone;
use crate::error::{CoreError, Result};
use crate::exponents::ExponentSet;
use crate::quad::{integral_zero_to_inf, sphere_integral, tanh_sinh, QuadOptions};
use crate::weight::HomogeneousWeight;

/// A density shape before normalization.  `Talenti` is the profile
/// u_γ(y)^q σ(y) with u_γ = (γ + |y+x₀|^{p′})^{−(n+α−p)/p}, the shape that
/// attains the infimum in the equal-weight sharp case.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityFamily {
    GaussianBump { center: Vec<f64>, width: f64 },
    Talenti { gamma: f64, shift: Vec<f64> },
    UniformCap { radius: f64, center: Vec<f64> },
}

/// Radial extent of a density along the ray r ↦ r·u.
enum RaySupport {
    Empty,
    Segment(f64, f64),
    Halfline,
}

impl DensityFamily {
    /// Characteristic length used to scale the radial substitution.
    fn radial_scale(&self, p_conj: f64) -> f64 {
        match self {
            DensityFamily::GaussianBump { center, width } => {
                width + center.iter().map(|v| v * v).sum::<f64>().sqrt()
            }
            DensityFamily::Talenti { gamma, .. } => {
                if p_conj.is_finite() && p_conj > 0.0 {
                    gamma.powf(1.0 / p_conj).max(1e-3)
                } else {
                    1.0
                }
            }
            DensityFamily::UniformCap { radius, center } => {
                radius + center.iter().map(|v| v * v).sum::<f64>().sqrt()
            }
        }
    }

    /// Exact (cap) or mass-negligible (Gaussian) support segment along the
    /// ray r·u, so radial quadrature only ever sees smooth integrands.
    fn ray_support(&self, u: &[f64]) -> RaySupport {
        let segment_for = |center: &[f64], reach: f64| -> RaySupport {
            let uc: f64 = u.iter().zip(center).map(|(a, b)| a * b).sum();
            let c2: f64 = center.iter().map(|v| v * v).sum();
            let disc = uc * uc - c2 + reach * reach;
            if disc <= 0.0 {
                return RaySupport::Empty;
            }
            let root = disc.sqrt();
            let hi = uc + root;
            if hi <= 0.0 {
                return RaySupport::Empty;
            }
            RaySupport::Segment((uc - root).max(0.0), hi)
        };
        match self {
            DensityFamily::GaussianBump { center, width } => {
                // Beyond 9 widths the Gaussian carries < 1e-17 of its mass.
                segment_for(center, 9.0 * width)
            }
            DensityFamily::UniformCap { radius, center } => segment_for(center, *radius),
            DensityFamily::Talenti { .. } => RaySupport::Halfline,
        }
    }

    /// Unnormalized density value.
    pub fn raw(&self, exps: &ExponentSet, sigma: &HomogeneousWeight, y: &[f64]) -> f64 {
        match self {
            DensityFamily::GaussianBump { center, width } => {
                let d2: f64 = y
                    .iter()
                    .zip(center)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                (-0.5 * d2 / (width * width)).exp()
            }
            DensityFamily::Talenti { gamma, shift } => {
                let r: f64 = y
                    .iter()
                    .zip(shift)
                    .map(|(a, b)| (a + b) * (a + b))
                    .sum::<f64>()
                    .sqrt();
                let pc = if exps.p_conj.is_finite() {
                    exps.p_conj
                } else {
                    1.0
                };
                let nf = exps.n as f64;
                let expnt = exps.q * (nf + exps.alpha - exps.p) / exps.p;
                let s = sigma.eval_raw(y);
                if !s.is_finite() || s <= 0.0 {
                    return 0.0;
                }
                (gamma + r.powf(pc)).powf(-expnt) * s
            }
            DensityFamily::UniformCap { radius, center } => {
                let d2: f64 = y
                    .iter()
                    .zip(center)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                if d2.sqrt() <= *radius {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// The three integrals of a normalized density needed by the inequality
/// constants: mass, p′-moment, and the two denominators.
#[derive(Debug, Clone)]
pub struct DensityIntegrals {
    pub mass: f64,
    /// ∫ v |y|^{p′} dy for the normalized v.
    pub moment_pc: f64,
    /// ∫ v^{1−1/n_a} ω^{−1/q} σ^{1/p} dy (branch C-0), normalized.
    pub denom_c0: f64,
    /// ∫ v^{1−1/n} dy (branch C-1), normalized.
    pub denom_c1: f64,
}

/// Polar integral over E of an integrand supported on the family's ray
/// segments.
fn polar_with_support<F: Fn(&[f64]) -> f64>(
    family: &DensityFamily,
    cone: &ConvexCone,
    scale: f64,
    opts: &QuadOptions,
    f: F,
) -> Result<f64> {
    let n = cone.dim();
    let radial = |u: &[f64]| -> f64 {
        let mut y = vec![0.0; n];
        let mut integrand = |r: f64| {
            for (yi, &ui) in y.iter_mut().zip(u) {
                *yi = ui * r;
            }
            f(&y) * r.powi(n as i32 - 1)
        };
        match family.ray_support(u) {
            RaySupport::Empty => 0.0,
            RaySupport::Segment(a, b) => tanh_sinh(integrand, a, b, opts.tol),
            RaySupport::Halfline => integral_zero_to_inf(&mut integrand, scale, opts.tol),
        }
    };
    Ok(sphere_integral(cone, radial, opts)?.value)
}

/// Computes the normalized integrals of a family member over the cone.
pub fn density_integrals(
    family: &DensityFamily,
    cone: &ConvexCone,
    exps: &ExponentSet,
    omega: &HomogeneousWeight,
    sigma: &HomogeneousWeight,
    opts: &QuadOptions,
) -> Result<DensityIntegrals> {
    let scale = family.radial_scale(exps.p_conj);
    let raw = |y: &[f64]| family.raw(exps, sigma, y);

    let mass = polar_with_support(family, cone, scale, opts, |y| raw(y))?;
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(CoreError::QuadratureFailure(format!(
            "density mass {mass} is not positive and finite"
        )));
    }
    let pc = exps.p_conj;
    let moment_raw = if pc.is_finite() {
        polar_with_support(family, cone, scale, opts, |y| {
            let r2: f64 = y.iter().map(|v| v * v).sum();
            raw(y) * r2.powf(0.5 * pc)
        })?
    } else {
        f64::NAN
    };

    let s_na = 1.0 - if exps.na_is_infinite() {
        0.0
    } else {
        1.0 / exps.n_a
    };
    let denom_c0_raw = polar_with_support(family, cone, scale, opts, |y| {
        let v = raw(y);
        if v <= 0.0 {
            return 0.0;
        }
        let o = omega.eval_raw(y);
        let s = sigma.eval_raw(y);
        if o <= 0.0 || s <= 0.0 || !o.is_finite() || !s.is_finite() {
            return 0.0;
        }
        v.powf(s_na) * o.powf(-1.0 / exps.q) * s.powf(1.0 / exps.p)
    })?;

    let s_n = 1.0 - 1.0 / exps.n as f64;
    let denom_c1_raw = polar_with_support(family, cone, scale, opts, |y| raw(y).powf(s_n))?;

    Ok(DensityIntegrals {
        mass,
        moment_pc: moment_raw / mass,
        denom_c0: denom_c0_raw / mass.powf(s_na),
        denom_c1: denom_c1_raw / mass.powf(s_n),
    })
}
