//! Discrete optimal transport for quadratic cost: exact plans, the
//! Monge–Ampère push-forward residual, and the pointwise divergence
//! inequality behind the transport argument, validated on analytic potentials.
//!
//! Measure text format: one `x_1 … x_n mass` line per atom.

use crate::cone::ConvexCone;
use crate::conditions::ConditionKind;
use crate::constants::divergence_prefactor;
use crate::density::{density_integrals, DensityFamily};
use crate::error::{CoreError, Result};
use crate::exponents::ExponentSet;
use crate::grid::{weighted_grad_lp_norm, weighted_lq_norm, GridFunction};
use crate::quad::QuadOptions;
use crate::simplex::transportation_simplex;
use crate::weight::HomogeneousWeight;

pub const MAX_ATOMS: usize = 2000;

/// A finitely supported probability measure with atoms in E.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    pub points: Vec<Vec<f64>>,
    pub masses: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(points: Vec<Vec<f64>>, masses: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != masses.len() {
            return Err(CoreError::InvalidMeasure(
                "points and masses must be non-empty and aligned".into(),
            ));
        }
        let dim = points[0].len();
        if points.iter().any(|p| p.len() != dim) {
            return Err(CoreError::InvalidMeasure("ragged point dimensions".into()));
        }
        if masses.iter().any(|&m| !(m > 0.0) || !m.is_finite()) {
            return Err(CoreError::InvalidMeasure("masses must be positive".into()));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(CoreError::InvalidMeasure(format!(
                "masses sum to {total}, not 1"
            )));
        }
        Ok(DiscreteMeasure { points, masses })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    /// Checks every atom lies inside the cone.
    pub fn check_in_cone(&self, cone: &ConvexCone) -> Result<()> {
        for p in &self.points {
            if !cone.check_contains(p)? {
                return Err(CoreError::OutsideCone);
            }
        }
        Ok(())
    }

    /// Uniform measure on the active cells of a grid function |u|^q ω.
    pub fn from_grid_density(
        u: &GridFunction,
        omega: &HomogeneousWeight,
        q: f64,
    ) -> Result<Self> {
        let mut points = Vec::new();
        let mut masses = Vec::new();
        for (idx, (&v, &m)) in u.values.iter().zip(&u.mask).enumerate() {
            if m && v != 0.0 {
                let y = u.center(idx);
                let w = omega.eval_raw(&y);
                let mass = v.abs().powf(q) * w;
                if mass > 0.0 && mass.is_finite() {
                    points.push(y);
                    masses.push(mass);
                }
            }
        }
        let total: f64 = masses.iter().sum();
        if !(total > 0.0) {
            return Err(CoreError::InvalidMeasure("grid density vanishes".into()));
        }
        for m in &mut masses {
            *m /= total;
        }
        DiscreteMeasure::new(points, masses)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (p, m) in self.points.iter().zip(&self.masses) {
            for c in p {
                out.push_str(&format!("{c:.17e} "));
            }
            out.push_str(&format!("{m:.17e}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        let mut masses = Vec::new();
        for (lno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let nums: Vec<f64> = line
                .split_whitespace()
                .map(|s| {
                    s.parse()
                        .map_err(|e| CoreError::Parse(format!("line {}: {e}", lno + 1)))
                })
                .collect::<Result<_>>()?;
            if nums.len() < 2 {
                return Err(CoreError::Parse(format!(
                    "line {}: need coordinates plus mass",
                    lno + 1
                )));
            }
            points.push(nums[..nums.len() - 1].to_vec());
            masses.push(nums[nums.len() - 1]);
        }
        DiscreteMeasure::new(points, masses)
    }
}

/// A coupling between two discrete measures with quadratic transport cost.
#[derive(Debug, Clone)]
pub struct TransportPlan {
    /// Sparse coupling entries (source index, target index, mass).
    pub entries: Vec<(usize, usize, f64)>,
    pub cost: f64,
    pub n_source: usize,
    pub n_target: usize,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl TransportPlan {
    /// Maximum marginal violation against the given measures.
    pub fn marginal_error(&self, mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> f64 {
        let mut row = vec![0.0; self.n_source];
        let mut col = vec![0.0; self.n_target];
        for &(i, j, f) in &self.entries {
            row[i] += f;
            col[j] += f;
        }
        let e_row = row
            .iter()
            .zip(&mu.masses)
            .map(|(r, m)| (r - m).abs())
            .fold(0.0f64, f64::max);
        let e_col = col
            .iter()
            .zip(&nu.masses)
            .map(|(c, m)| (c - m).abs())
            .fold(0.0f64, f64::max);
        e_row.max(e_col)
    }

    /// Spot-checks cyclical monotonicity of the support on all transpositions
    /// and sampled 3-cycles: for quadratic cost an optimal support admits no
    /// improving cyclic rearrangement.
    pub fn cyclically_monotone(&self, mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> bool {
        let tol = 1e-9;
        let supp = &self.entries;
        for (a, &(i1, j1, _)) in supp.iter().enumerate() {
            for &(i2, j2, _) in supp.iter().skip(a + 1) {
                let direct = sq_dist(&mu.points[i1], &nu.points[j1])
                    + sq_dist(&mu.points[i2], &nu.points[j2]);
                let swapped = sq_dist(&mu.points[i1], &nu.points[j2])
                    + sq_dist(&mu.points[i2], &nu.points[j1]);
                if swapped < direct - tol {
                    return false;
                }
            }
        }
        // Sampled 3-cycles.
        let k = supp.len();
        for s in 0..k.min(64) {
            let (i1, j1, _) = supp[s];
            let (i2, j2, _) = supp[(s + k / 3) % k];
            let (i3, j3, _) = supp[(s + 2 * k / 3) % k];
            let direct = sq_dist(&mu.points[i1], &nu.points[j1])
                + sq_dist(&mu.points[i2], &nu.points[j2])
                + sq_dist(&mu.points[i3], &nu.points[j3]);
            let rotated = sq_dist(&mu.points[i1], &nu.points[j2])
                + sq_dist(&mu.points[i2], &nu.points[j3])
                + sq_dist(&mu.points[i3], &nu.points[j1]);
            if rotated < direct - tol {
                return false;
            }
        }
        true
    }

    /// Barycentric projection: T(x_i) = Σ_j π_ij y_j / μ_i (approximate map
    /// when the plan splits mass).
    pub fn barycentric_map(&self, mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Vec<Vec<f64>> {
        let dim = nu.dim();
        let mut map = vec![vec![0.0; dim]; mu.len()];
        for &(i, j, f) in &self.entries {
            for (acc, &yc) in map[i].iter_mut().zip(&nu.points[j]) {
                *acc += f * yc;
            }
        }
        for (row, &m) in map.iter_mut().zip(&mu.masses) {
            for c in row.iter_mut() {
                *c /= m;
            }
        }
        map
    }
}

/// Exact optimal plan for quadratic cost.  1D inputs take the monotone
/// rearrangement fast path; higher dimensions run the transportation
/// simplex.  Instances beyond `MAX_ATOMS` per side are rejected.
pub fn solve_discrete_ot(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<TransportPlan> {
    if mu.len() > MAX_ATOMS || nu.len() > MAX_ATOMS {
        return Err(CoreError::SizeExceeded {
            got: mu.len().max(nu.len()),
            max: MAX_ATOMS,
        });
    }
    if mu.dim() != nu.dim() {
        return Err(CoreError::DimensionMismatch {
            expected: mu.dim(),
            got: nu.dim(),
        });
    }
    let entries = if mu.dim() == 1 {
        monotone_rearrangement(mu, nu)
    } else {
        let cost = |i: usize, j: usize| sq_dist(&mu.points[i], &nu.points[j]);
        transportation_simplex(&mu.masses, &nu.masses, &cost)
    };
    let cost: f64 = entries
        .iter()
        .map(|&(i, j, f)| f * sq_dist(&mu.points[i], &nu.points[j]))
        .sum();
    Ok(TransportPlan {
        entries,
        cost,
        n_source: mu.len(),
        n_target: nu.len(),
    })
}

/// 1D optimal coupling: sort both sides and match quantiles.
fn monotone_rearrangement(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
) -> Vec<(usize, usize, f64)> {
    let mut src: Vec<usize> = (0..mu.len()).collect();
    let mut dst: Vec<usize> = (0..nu.len()).collect();
    src.sort_by(|&a, &b| mu.points[a][0].total_cmp(&mu.points[b][0]));
    dst.sort_by(|&a, &b| nu.points[a][0].total_cmp(&nu.points[b][0]));
    let mut entries = Vec::new();
    let (mut si, mut di) = (0usize, 0usize);
    let mut s_rem = mu.masses[src[0]];
    let mut d_rem = nu.masses[dst[0]];
    loop {
        let f = s_rem.min(d_rem);
        if f > 0.0 {
            entries.push((src[si], dst[di], f));
        }
        s_rem -= f;
        d_rem -= f;
        if s_rem <= 1e-18 {
            si += 1;
            if si == src.len() {
                break;
            }
            s_rem = mu.masses[src[si]];
        }
        if d_rem <= 1e-18 {
            di += 1;
            if di == dst.len() {
                break;
            }
            d_rem = nu.masses[dst[di]];
        }
    }
    entries
}

/// Push-forward residual: transports μ's atoms through the map, histograms
/// the image and ν on a shared binning, and returns the total-variation
/// distance of the two histograms.
pub fn monge_ampere_residual(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    map: &dyn Fn(&[f64]) -> Vec<f64>,
    bins_per_axis: usize,
) -> Result<f64> {
    if bins_per_axis == 0 {
        return Err(CoreError::BinningMismatch("need at least one bin".into()));
    }
    let dim = mu.dim();
    if nu.dim() != dim {
        return Err(CoreError::BinningMismatch(
            "measures live in different dimensions".into(),
        ));
    }
    let pushed: Vec<Vec<f64>> = mu.points.iter().map(|p| map(p)).collect();
    if pushed.iter().any(|p| p.len() != dim) {
        return Err(CoreError::BinningMismatch(
            "map output dimension differs".into(),
        ));
    }
    // Common bounding box.
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for p in pushed.iter().chain(nu.points.iter()) {
        for ax in 0..dim {
            lo[ax] = lo[ax].min(p[ax]);
            hi[ax] = hi[ax].max(p[ax]);
        }
    }
    for ax in 0..dim {
        let pad = 1e-9 * (hi[ax] - lo[ax]).abs().max(1.0);
        lo[ax] -= pad;
        hi[ax] += pad;
    }
    let bin_of = |p: &[f64]| -> usize {
        let mut idx = 0usize;
        for ax in 0..dim {
            let t = ((p[ax] - lo[ax]) / (hi[ax] - lo[ax]) * bins_per_axis as f64) as usize;
            idx = idx * bins_per_axis + t.min(bins_per_axis - 1);
        }
        idx
    };
    let total_bins = bins_per_axis.pow(dim as u32);
    let mut h_push = vec![0.0; total_bins];
    let mut h_target = vec![0.0; total_bins];
    for (p, &m) in pushed.iter().zip(&mu.masses) {
        h_push[bin_of(p)] += m;
    }
    for (p, &m) in nu.points.iter().zip(&nu.masses) {
        h_target[bin_of(p)] += m;
    }
    Ok(0.5
        * h_push
            .iter()
            .zip(&h_target)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>())
}

/// Default histogram resolution: √N bins in 1D, N^{1/4} per axis in 2D, …
pub fn default_bins(atoms: usize, dim: usize) -> usize {
    ((atoms as f64).powf(0.5 / dim as f64).round() as usize).max(2)
}

/// Analytic convex potentials with exact Hessians.
#[derive(Debug, Clone)]
pub enum Potential {
    /// φ(x) = λ|x|²/2 + b·x with λ > 0: ∇φ = λx + b, D²φ = λI.
    QuadraticShift { lam: f64, shift: Vec<f64> },
}

impl Potential {
    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Potential::QuadraticShift { lam, shift } => x
                .iter()
                .zip(shift)
                .map(|(&xi, &bi)| lam * xi + bi)
                .collect(),
        }
    }

    pub fn det_hessian(&self, n: usize) -> f64 {
        match self {
            Potential::QuadraticShift { lam, .. } => lam.powi(n as i32),
        }
    }

    pub fn laplacian(&self, n: usize) -> f64 {
        match self {
            Potential::QuadraticShift { lam, .. } => lam * n as f64,
        }
    }
}

/// Outcome of the pointwise divergence-inequality sweep.
#[derive(Debug, Clone)]
pub struct DivergenceCheck {
    pub max_violation: f64,
    pub worst_point: Option<Vec<f64>>,
    pub points_checked: usize,
}

/// Verifies the pointwise divergence inequality
///
///   ω(x)^{1−1/n_a} ω(∇φ)^{−1/q} σ(∇φ)^{1/p} (det D²φ)^{1/n_a}
///     ≤ C̃₀ · div(ω^{1/p′} σ^{1/p} ∇φ)
///
/// (with 1/n_a = 0 at n_a = ∞ and 1/p′ = 0 at p = 1, covering all four
/// degenerate cases), or the C-1 variant with left side ω^{1−1/n_a}(det)^{1/n_a}
/// and prefactor C₁/n_a.  Reports the maximum of LHS − RHS over the points.
pub fn pointwise_divergence_check(
    omega: &HomogeneousWeight,
    sigma: &HomogeneousWeight,
    exps: &ExponentSet,
    cone: &ConvexCone,
    cond_constant: f64,
    branch: ConditionKind,
    phi: &Potential,
    points: &[Vec<f64>],
) -> Result<DivergenceCheck> {
    let n = cone.dim();
    let inv_na = if exps.na_is_infinite() {
        0.0
    } else {
        1.0 / exps.n_a
    };
    let prefactor = match branch {
        ConditionKind::C0 => divergence_prefactor(cond_constant, exps),
        ConditionKind::C1 => {
            if !exps.na_equals_n() {
                return Err(CoreError::BranchMismatch(
                    "branch C-1 requires n_a = n".into(),
                ));
            }
            cond_constant / exps.n_a
        }
    };
    let det = phi.det_hessian(n);
    let lap = phi.laplacian(n);

    let mut max_violation = f64::NEG_INFINITY;
    let mut worst = None;
    for x in points {
        if !cone.check_contains(x)? {
            return Err(CoreError::OutsideCone);
        }
        let image = phi.grad(x);
        if !cone.contains(&image) {
            return Err(CoreError::MapLeavesCone);
        }
        let ox = omega.eval(cone, x)?;
        let sx = sigma.eval(cone, x)?;
        let oi = omega.eval(cone, &image)?;
        let si = sigma.eval(cone, &image)?;

        let lhs = match branch {
            ConditionKind::C0 => {
                ox.powf(1.0 - inv_na)
                    * oi.powf(-1.0 / exps.q)
                    * si.powf(1.0 / exps.p)
                    * det.powf(inv_na)
            }
            ConditionKind::C1 => ox.powf(1.0 - inv_na) * det.powf(inv_na),
        };
        let rho = ox.powf(exps.inv_p_conj()) * sx.powf(1.0 / exps.p);
        let drift: f64 = omega
            .log_grad_raw(x)
            .iter()
            .zip(sigma.log_grad_raw(x).iter())
            .zip(&image)
            .map(|((&go, &gs), &yi)| (exps.inv_p_conj() * go + gs / exps.p) * yi)
            .sum();
        let rhs = prefactor * rho * (drift + lap);

        let violation = lhs - rhs;
        if violation > max_violation {
            max_violation = violation;
            worst = Some(x.clone());
        }
    }
    Ok(DivergenceCheck {
        max_violation,
        worst_point: if max_violation > 1e-9 { worst } else { None },
        points_checked: points.len(),
    })
}

/// Outcome of the integrated transport chain.
#[derive(Debug, Clone)]
pub struct ChainCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Integrated form of the main chain for p > 1: with u normalized so that
/// ∫ u^q ω = 1,
///
///   ∫ v^{1−1/n_a} h dy ≤ C̃₀ q (1−1/n_a) (∫ v|y|^{p′})^{1/p′} (∫|∇u|^p σ)^{1/p},
///
/// h = ω^{−1/q} σ^{1/p} (branch C-0) or h = 1 with C̃ = C₁/n (branch C-1).
pub fn integrated_chain_check(
    u: &GridFunction,
    v: &DensityFamily,
    omega: &HomogeneousWeight,
    sigma: &HomogeneousWeight,
    exps: &ExponentSet,
    cone: &ConvexCone,
    cond_constant: f64,
    branch: ConditionKind,
    opts: &QuadOptions,
) -> Result<ChainCheck> {
    if exps.p <= 1.0 {
        return Err(CoreError::BranchMismatch(
            "the integrated chain uses the p > 1 Hölder step".into(),
        ));
    }
    let z = weighted_lq_norm(u, omega, exps.q)?;
    if !(z > 0.0) || !z.is_finite() {
        return Err(CoreError::NormalizationFailure(format!(
            "∫u^qω = {z} cannot be normalized"
        )));
    }
    let grad = weighted_grad_lp_norm(u, sigma, exps.p)? / z;

    let ints = density_integrals(v, cone, exps, omega, sigma, opts)?;
    let (lhs, prefactor) = match branch {
        ConditionKind::C0 => (
            ints.denom_c0,
            divergence_prefactor(cond_constant, exps),
        ),
        ConditionKind::C1 => (ints.denom_c1, cond_constant / exps.n as f64),
    };
    let inv_na = if exps.na_is_infinite() {
        0.0
    } else {
        1.0 / exps.n_a
    };
    let rhs = prefactor
        * exps.q
        * (1.0 - inv_na)
        * ints.moment_pc.powf(exps.inv_p_conj())
        * grad;
    Ok(ChainCheck {
        lhs,
        rhs,
        holds: lhs <= rhs * 1.01,
    })
}
