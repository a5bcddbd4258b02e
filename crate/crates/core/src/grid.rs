//! Discretized scalar functions on box-clipped cone regions: cell-center
//! values with masking against E, midpoint-rule weighted norms, and central
//! finite differences for the gradient norm.
//!
//! Text format (one grid per file): a header line
//! `n lo_1 .. lo_n hi_1 .. hi_n res_1 .. res_n` followed by one value per
//! line in row-major cell order, with `-` standing for a masked cell.

use crate::cone::ConvexCone;
use crate::error::{CoreError, Result};
use crate::exponents::ExponentSet;
use crate::weight::HomogeneousWeight;

#[derive(Debug, Clone)]
pub struct GridFunction {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    /// Cells per axis.
    pub shape: Vec<usize>,
    /// Mesh spacing per axis.
    pub spacing: Vec<f64>,
    /// Cell-center values, row-major; masked cells carry 0.
    pub values: Vec<f64>,
    /// Active = cell center strictly inside E.
    pub mask: Vec<bool>,
}

impl GridFunction {
    /// Samples `f` at the cell centers of the box [lo, hi] clipped to E.
    pub fn sample<F: Fn(&[f64]) -> f64>(
        cone: &ConvexCone,
        lo: &[f64],
        hi: &[f64],
        shape: &[usize],
        f: F,
    ) -> Result<Self> {
        let n = cone.dim();
        if lo.len() != n || hi.len() != n || shape.len() != n {
            return Err(CoreError::DimensionMismatch {
                expected: n,
                got: lo.len().min(hi.len()).min(shape.len()),
            });
        }
        if shape.iter().any(|&s| s < 2) || lo.iter().zip(hi).any(|(a, b)| !(b > a)) {
            return Err(CoreError::RangeViolation(
                "grid needs hi > lo and at least 2 cells per axis".into(),
            ));
        }
        let spacing: Vec<f64> = lo
            .iter()
            .zip(hi)
            .zip(shape)
            .map(|((a, b), &s)| (b - a) / s as f64)
            .collect();
        let total: usize = shape.iter().product();
        let mut values = vec![0.0; total];
        let mut mask = vec![false; total];
        let mut center = vec![0.0; n];
        for (idx, (v, m)) in values.iter_mut().zip(mask.iter_mut()).enumerate() {
            let mut rem = idx;
            for ax in (0..n).rev() {
                let i = rem % shape[ax];
                rem /= shape[ax];
                center[ax] = lo[ax] + (i as f64 + 0.5) * spacing[ax];
            }
            if cone.contains(&center) {
                *m = true;
                *v = f(&center);
            }
        }
        Ok(GridFunction {
            lo: lo.to_vec(),
            hi: hi.to_vec(),
            shape: shape.to_vec(),
            spacing,
            values,
            mask,
        })
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    fn strides(&self) -> Vec<usize> {
        let n = self.dim();
        let mut s = vec![1usize; n];
        for ax in (0..n.saturating_sub(1)).rev() {
            s[ax] = s[ax + 1] * self.shape[ax + 1];
        }
        s
    }

    /// Multi-index of a flat cell index.
    fn unravel(&self, mut idx: usize) -> Vec<usize> {
        let n = self.dim();
        let mut out = vec![0usize; n];
        for ax in (0..n).rev() {
            out[ax] = idx % self.shape[ax];
            idx /= self.shape[ax];
        }
        out
    }

    /// Center coordinates of a flat cell index.
    pub fn center(&self, idx: usize) -> Vec<f64> {
        self.unravel(idx)
            .iter()
            .enumerate()
            .map(|(ax, &i)| self.lo[ax] + (i as f64 + 0.5) * self.spacing[ax])
            .collect()
    }

    /// Fraction of the total |u| mass sitting on the outermost cell ring;
    /// callers warn when this is non-negligible.
    pub fn boundary_mass_fraction(&self) -> f64 {
        let mut total = 0.0;
        let mut ring = 0.0;
        for (idx, (&v, &m)) in self.values.iter().zip(&self.mask).enumerate() {
            if !m {
                continue;
            }
            let a = v.abs();
            total += a;
            let mi = self.unravel(idx);
            if mi
                .iter()
                .zip(&self.shape)
                .any(|(&i, &s)| i == 0 || i + 1 == s)
            {
                ring += a;
            }
        }
        if total > 0.0 {
            ring / total
        } else {
            0.0
        }
    }

    /// Largest |u| (relative to the global max) on ring cells whose outward
    /// neighbor would still lie inside E.  Such cells sit on a truncation
    /// face interior to the cone, where a genuine test function must vanish;
    /// ring cells on ∂E itself are exempt since (WSI) does not require decay
    /// there.
    pub fn exterior_boundary_sup(&self, cone: &ConvexCone) -> f64 {
        let n = self.dim();
        let mut sup = 0.0f64;
        let mut max_abs = 0.0f64;
        for (idx, (&v, &m)) in self.values.iter().zip(&self.mask).enumerate() {
            if !m {
                continue;
            }
            max_abs = max_abs.max(v.abs());
            let mi = self.unravel(idx);
            let mut critical = false;
            for ax in 0..n {
                for (at_wall, dir) in [(mi[ax] == 0, -1.0), (mi[ax] + 1 == self.shape[ax], 1.0)] {
                    if at_wall {
                        let mut ghost = self.center(idx);
                        ghost[ax] += dir * self.spacing[ax];
                        if cone.contains(&ghost) {
                            critical = true;
                        }
                    }
                }
            }
            if critical {
                sup = sup.max(v.abs());
            }
        }
        if max_abs > 0.0 {
            sup / max_abs
        } else {
            0.0
        }
    }

    /// Central finite-difference gradient at an active cell, one-sided at
    /// mask transitions and box edges; axes with no active neighbor
    /// contribute zero.
    pub fn gradient_at(&self, idx: usize) -> Vec<f64> {
        let n = self.dim();
        let strides = self.strides();
        let mi = self.unravel(idx);
        let mut g = vec![0.0; n];
        for ax in 0..n {
            let h = self.spacing[ax];
            let has_prev = mi[ax] > 0 && self.mask[idx - strides[ax]];
            let has_next = mi[ax] + 1 < self.shape[ax] && self.mask[idx + strides[ax]];
            g[ax] = match (has_prev, has_next) {
                (true, true) => {
                    (self.values[idx + strides[ax]] - self.values[idx - strides[ax]]) / (2.0 * h)
                }
                (false, true) => (self.values[idx + strides[ax]] - self.values[idx]) / h,
                (true, false) => (self.values[idx] - self.values[idx - strides[ax]]) / h,
                (false, false) => 0.0,
            };
        }
        g
    }

    /// Serializes to the documented text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{}", self.dim()));
        for v in self.lo.iter().chain(&self.hi) {
            out.push_str(&format!(" {v:.17e}"));
        }
        for s in &self.shape {
            out.push_str(&format!(" {s}"));
        }
        out.push('\n');
        for (&v, &m) in self.values.iter().zip(&self.mask) {
            if m {
                out.push_str(&format!("{v:.17e}\n"));
            } else {
                out.push_str("-\n");
            }
        }
        out
    }

    /// Parses the text format; the mask is re-derived from the cone so the
    /// active set always matches the membership rule.
    pub fn from_text(text: &str, cone: &ConvexCone) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| CoreError::Parse("empty grid file".into()))?;
        let nums: Vec<&str> = header.split_whitespace().collect();
        if nums.is_empty() {
            return Err(CoreError::Parse("empty grid header".into()));
        }
        let n: usize = nums[0]
            .parse()
            .map_err(|e| CoreError::Parse(format!("bad dimension: {e}")))?;
        if nums.len() != 1 + 3 * n {
            return Err(CoreError::Parse(format!(
                "header needs {} fields for n = {n}, got {}",
                1 + 3 * n,
                nums.len()
            )));
        }
        let parse_f = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|e| CoreError::Parse(format!("bad float {s:?}: {e}")))
        };
        let lo: Vec<f64> = nums[1..1 + n].iter().map(|s| parse_f(s)).collect::<Result<_>>()?;
        let hi: Vec<f64> = nums[1 + n..1 + 2 * n]
            .iter()
            .map(|s| parse_f(s))
            .collect::<Result<_>>()?;
        let shape: Vec<usize> = nums[1 + 2 * n..]
            .iter()
            .map(|s| {
                s.parse()
                    .map_err(|e| CoreError::Parse(format!("bad resolution {s:?}: {e}")))
            })
            .collect::<std::result::Result<_, _>>()?;
        let total: usize = shape.iter().product();
        let mut values = Vec::with_capacity(total);
        for line in lines.take(total) {
            if line.trim() == "-" {
                values.push(f64::NAN);
            } else {
                values.push(parse_f(line.trim())?);
            }
        }
        if values.len() != total {
            return Err(CoreError::Parse(format!(
                "expected {total} cell values, got {}",
                values.len()
            )));
        }
        let mut grid = GridFunction::sample(cone, &lo, &hi, &shape, |_| 0.0)?;
        for (i, v) in values.into_iter().enumerate() {
            if grid.mask[i] {
                grid.values[i] = if v.is_nan() { 0.0 } else { v };
            }
        }
        Ok(grid)
    }
}

/// Weighted L^q norm (∫ |u|^q ω dx)^{1/q} by the midpoint rule over active
/// cells.
pub fn weighted_lq_norm(u: &GridFunction, omega: &HomogeneousWeight, q: f64) -> Result<f64> {
    if !(q > 0.0) {
        return Err(CoreError::RangeViolation("q must be positive".into()));
    }
    let vol = u.cell_volume();
    let mut sum = 0.0;
    for (idx, (&v, &m)) in u.values.iter().zip(&u.mask).enumerate() {
        if m && v != 0.0 {
            let w = omega.eval_raw(&u.center(idx));
            sum += v.abs().powf(q) * w;
        }
    }
    Ok((sum * vol).powf(1.0 / q))
}

/// Weighted gradient L^p norm (∫ |∇u|^p σ dx)^{1/p} with central
/// differences (one-sided at mask transitions).
pub fn weighted_grad_lp_norm(u: &GridFunction, sigma: &HomogeneousWeight, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(CoreError::RangeViolation("p must be ≥ 1".into()));
    }
    let vol = u.cell_volume();
    let mut sum = 0.0;
    for idx in 0..u.values.len() {
        if !u.mask[idx] {
            continue;
        }
        let g = u.gradient_at(idx);
        let norm2: f64 = g.iter().map(|gi| gi * gi).sum();
        if norm2 > 0.0 {
            let w = sigma.eval_raw(&u.center(idx));
            sum += norm2.powf(0.5 * p) * w;
        }
    }
    Ok((sum * vol).powf(1.0 / p))
}

/// The Sobolev quotient ‖u‖_{L^q_ω} / ‖∇u‖_{L^p_σ}.
pub fn sobolev_quotient(
    u: &GridFunction,
    omega: &HomogeneousWeight,
    sigma: &HomogeneousWeight,
    exps: &ExponentSet,
) -> Result<f64> {
    let num = weighted_lq_norm(u, omega, exps.q)?;
    let den = weighted_grad_lp_norm(u, sigma, exps.p)?;
    if !(den > 0.0) {
        return Err(CoreError::ZeroGradient);
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::validate_exponents;

    fn unit_box_grid<F: Fn(&[f64]) -> f64>(res: usize, f: F) -> GridFunction {
        let cone = ConvexCone::full_space(2).unwrap();
        GridFunction::sample(&cone, &[0.0, 0.0], &[1.0, 1.0], &[res, res], f).unwrap()
    }

    #[test]
    fn constant_one_has_unit_l2_norm() {
        let one = HomogeneousWeight::constant(1.0);
        let u = unit_box_grid(64, |_| 1.0);
        let norm = weighted_lq_norm(&u, &one, 2.0).unwrap();
        assert!((norm - 1.0).abs() < 1e-6, "{norm}");
    }

    #[test]
    fn weighted_l1_norm_of_one_with_x2_weight() {
        let w = HomogeneousWeight::monomial(vec![0.0, 1.0]);
        let u = unit_box_grid(128, |_| 1.0);
        let norm = weighted_lq_norm(&u, &w, 1.0).unwrap();
        assert!((norm - 0.5).abs() < 1e-3, "{norm}");
    }

    #[test]
    fn smoothed_disk_l2_norm_matches_area() {
        // Indicator-like smoothed disk of radius r: L² norm ≈ √(π r²).
        let cone = ConvexCone::full_space(2).unwrap();
        let one = HomogeneousWeight::constant(1.0);
        let r0 = 1.0;
        let m = 0.025;
        let u = GridFunction::sample(&cone, &[-1.5, -1.5], &[1.5, 1.5], &[256, 256], |x| {
            let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
            if r <= r0 - m {
                1.0
            } else if r >= r0 + m {
                0.0
            } else {
                0.5 * (1.0 + (std::f64::consts::PI * (r - r0 + m) / (2.0 * m)).cos())
            }
        })
        .unwrap();
        let norm = weighted_lq_norm(&u, &one, 2.0).unwrap();
        let exact = (std::f64::consts::PI * r0 * r0).sqrt();
        assert!(((norm - exact) / exact).abs() < 1e-2, "{norm} vs {exact}");
    }

    #[test]
    fn gradient_norm_of_linear_function() {
        // u = x₁ on the unit box: |∇u| = 1, so the L² norm is vol^{1/2}.
        let one = HomogeneousWeight::constant(1.0);
        let u = unit_box_grid(64, |x| x[0]);
        let norm = weighted_grad_lp_norm(&u, &one, 2.0).unwrap();
        assert!((norm - 1.0).abs() < 1e-2, "{norm}");
    }

    #[test]
    fn gradient_of_constant_vanishes() {
        let one = HomogeneousWeight::constant(1.0);
        let u = unit_box_grid(32, |_| 3.0);
        let norm = weighted_grad_lp_norm(&u, &one, 2.0).unwrap();
        assert!(norm.abs() < 1e-12, "{norm}");
    }

    #[test]
    fn gaussian_gradient_matches_closed_form() {
        // u = e^{-|x|²/2} on R²: ∫|∇u|² = ∫ r² e^{-r²} dx = 2π·(1/2) = π.
        let cone = ConvexCone::full_space(2).unwrap();
        let one = HomogeneousWeight::constant(1.0);
        let u = GridFunction::sample(&cone, &[-6.0, -6.0], &[6.0, 6.0], &[192, 192], |x| {
            (-0.5 * (x[0] * x[0] + x[1] * x[1])).exp()
        })
        .unwrap();
        let norm = weighted_grad_lp_norm(&u, &one, 2.0).unwrap();
        let exact = std::f64::consts::PI.sqrt();
        assert!(
            ((norm - exact) / exact).abs() < 1e-2,
            "{norm} vs {exact}"
        );
    }

    #[test]
    fn quotient_scale_invariant_in_u() {
        let cone = ConvexCone::full_space(2).unwrap();
        let one = HomogeneousWeight::constant(1.0);
        let exps = validate_exponents(2, 1.0, 0.0, 0.0).unwrap();
        let base = GridFunction::sample(&cone, &[-2.0, -2.0], &[2.0, 2.0], &[96, 96], |x| {
            (-(x[0] * x[0] + x[1] * x[1])).exp()
        })
        .unwrap();
        let q0 = sobolev_quotient(&base, &one, &one, &exps).unwrap();
        for c in [2.0, 10.0] {
            let mut scaled = base.clone();
            for v in &mut scaled.values {
                *v *= c;
            }
            let qc = sobolev_quotient(&scaled, &one, &one, &exps).unwrap();
            assert!((qc - q0).abs() < 1e-12 * q0, "c={c}: {qc} vs {q0}");
        }
    }

    #[test]
    fn quotient_invariant_under_domain_scaling() {
        // u → u(λ·) leaves the quotient unchanged under the balance
        // relation; discretely to ~1%.
        let cone = ConvexCone::positive_orthant(2).unwrap();
        let omega = HomogeneousWeight::monomial(vec![1.0, 1.0]);
        let exps = validate_exponents(2, 2.0, 2.0, 2.0).unwrap();
        let profile = |x: &[f64], lam: f64| {
            let cx = 1.5 * lam;
            let d2 = (x[0] - cx).powi(2) + (x[1] - cx).powi(2);
            (-d2 / (2.0 * (0.4 * lam).powi(2))).exp()
        };
        let mut quotients = Vec::new();
        for lam in [0.5, 1.0, 2.0] {
            let u = GridFunction::sample(
                &cone,
                &[0.0, 0.0],
                &[3.2 * lam, 3.2 * lam],
                &[160, 160],
                |x| profile(x, lam),
            )
            .unwrap();
            quotients.push(sobolev_quotient(&u, &omega, &omega, &exps).unwrap());
        }
        for q in &quotients[1..] {
            assert!(
                ((q - quotients[0]) / quotients[0]).abs() < 1e-2,
                "{quotients:?}"
            );
        }
    }

    #[test]
    fn mesh_refinement_converges() {
        let cone = ConvexCone::full_space(2).unwrap();
        let one = HomogeneousWeight::constant(1.0);
        let f = |x: &[f64]| (-(x[0] * x[0] + x[1] * x[1])).exp();
        let norm_at = |res: usize| {
            let u =
                GridFunction::sample(&cone, &[-3.0, -3.0], &[3.0, 3.0], &[res, res], f).unwrap();
            weighted_lq_norm(&u, &one, 2.0).unwrap()
        };
        let coarse = norm_at(64);
        let fine = norm_at(128);
        assert!(((fine - coarse) / fine).abs() < 5e-3, "{coarse} vs {fine}");
    }

    #[test]
    fn text_round_trip() {
        let cone = ConvexCone::positive_orthant(2).unwrap();
        let u = GridFunction::sample(&cone, &[-0.5, -0.5], &[1.0, 1.0], &[12, 9], |x| {
            x[0] + 2.0 * x[1]
        })
        .unwrap();
        let text = u.to_text();
        let back = GridFunction::from_text(&text, &cone).unwrap();
        assert_eq!(u.shape, back.shape);
        assert_eq!(u.mask, back.mask);
        for (a, b) in u.values.iter().zip(&back.values) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn masked_cells_carry_no_value() {
        let cone = ConvexCone::positive_orthant(2).unwrap();
        let u = GridFunction::sample(&cone, &[-1.0, -1.0], &[1.0, 1.0], &[16, 16], |_| 7.0)
            .unwrap();
        for (&v, &m) in u.values.iter().zip(&u.mask) {
            if !m {
                assert_eq!(v, 0.0);
            }
        }
        // Quadrant grid: ~1/4 of cells active.
        let active = u.mask.iter().filter(|&&m| m).count();
        assert_eq!(active, 64);
    }
}
