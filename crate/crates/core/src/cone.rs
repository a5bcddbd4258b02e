//! Open convex cones in R^n: membership with a boundary safety margin and
//! the spherical cross-section geometry used by sampling and quadrature.

use crate::error::{CoreError, Result};

/// Relative distance to the boundary below which a point is treated as
/// outside.  Weights with negative exponents blow up on the boundary, so the
/// margin keeps every accepted point strictly inside.
pub const BOUNDARY_MARGIN: f64 = 1e-9;

/// An open convex cone E ⊆ R^n, one of four parametric shapes.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexCone {
    /// E = R^n.
    FullSpace { dim: usize },
    /// E = { x : x_i > 0 for each masked coordinate }.
    Orthant { positive: Vec<bool> },
    /// E = { x : n_i · x > 0 for every unit normal n_i }.
    HalfspaceIntersection { dim: usize, normals: Vec<Vec<f64>> },
    /// Planar sector { r(cos θ, sin θ) : start < θ < end, r > 0 }, n = 2,
    /// aperture end − start in (0, π].
    PlanarSector { start: f64, end: f64 },
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

impl ConvexCone {
    pub fn full_space(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(CoreError::RangeViolation("dimension must be ≥ 1".into()));
        }
        Ok(ConvexCone::FullSpace { dim })
    }

    /// The cone with x_i > 0 for every `true` entry of the mask.
    pub fn orthant_product(positive: Vec<bool>) -> Result<Self> {
        if positive.is_empty() {
            return Err(CoreError::RangeViolation("mask must be non-empty".into()));
        }
        Ok(ConvexCone::Orthant { positive })
    }

    pub fn positive_orthant(dim: usize) -> Result<Self> {
        Self::orthant_product(vec![true; dim])
    }

    /// Cone cut out by unit inward normals; normals are normalized here.
    pub fn halfspace_intersection(dim: usize, normals: Vec<Vec<f64>>) -> Result<Self> {
        if normals.is_empty() {
            return Err(CoreError::RangeViolation(
                "at least one normal required".into(),
            ));
        }
        let mut unit = Vec::with_capacity(normals.len());
        for nrm in normals {
            if nrm.len() != dim {
                return Err(CoreError::DimensionMismatch {
                    expected: dim,
                    got: nrm.len(),
                });
            }
            let len = norm(&nrm);
            if len < 1e-14 {
                return Err(CoreError::RangeViolation("zero normal vector".into()));
            }
            unit.push(nrm.iter().map(|v| v / len).collect());
        }
        Ok(ConvexCone::HalfspaceIntersection { dim, normals: unit })
    }

    /// Sector between the boundary angles; aperture must lie in (0, π] so the
    /// cone is convex.
    pub fn planar_sector(start: f64, end: f64) -> Result<Self> {
        let aperture = end - start;
        if !(aperture > 0.0 && aperture <= std::f64::consts::PI + 1e-12) {
            return Err(CoreError::RangeViolation(format!(
                "sector aperture must lie in (0, π], got {aperture}"
            )));
        }
        Ok(ConvexCone::PlanarSector { start, end })
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexCone::FullSpace { dim } => *dim,
            ConvexCone::Orthant { positive } => positive.len(),
            ConvexCone::HalfspaceIntersection { dim, .. } => *dim,
            ConvexCone::PlanarSector { .. } => 2,
        }
    }

    /// Inward unit normals of the sector boundary rays.
    fn sector_normals(start: f64, end: f64) -> [[f64; 2]; 2] {
        [
            [-start.sin(), start.cos()],
            [end.sin(), -end.cos()],
        ]
    }

    /// Strict membership with the relative boundary margin.
    pub fn contains(&self, x: &[f64]) -> bool {
        self.contains_with_margin(x, BOUNDARY_MARGIN)
    }

    /// Membership test with an explicit relative margin (0 gives the
    /// geometric open cone).
    pub fn contains_with_margin(&self, x: &[f64], margin: f64) -> bool {
        if x.len() != self.dim() || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        let m = margin * norm(x);
        match self {
            ConvexCone::FullSpace { .. } => true,
            ConvexCone::Orthant { positive } => positive
                .iter()
                .zip(x)
                .all(|(&pos, &xi)| !pos || xi > m),
            ConvexCone::HalfspaceIntersection { normals, .. } => {
                normals.iter().all(|nrm| dot(nrm, x) > m)
            }
            ConvexCone::PlanarSector { start, end } => {
                Self::sector_normals(*start, *end)
                    .iter()
                    .all(|nrm| dot(nrm, x) > m)
            }
        }
    }

    /// Checks membership, reporting dimension mismatches separately.
    pub fn check_contains(&self, x: &[f64]) -> Result<bool> {
        if x.len() != self.dim() {
            return Err(CoreError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::RangeViolation("point must be finite".into()));
        }
        Ok(self.contains(x))
    }

    /// The arc (θ_lo, θ_hi) of S¹ ∩ E for planar cones; the full circle is
    /// reported as (0, 2π).  Returns None when the cross-section is empty.
    pub fn arc_2d(&self) -> Option<(f64, f64)> {
        assert_eq!(self.dim(), 2, "arc_2d requires a planar cone");
        match self {
            ConvexCone::FullSpace { .. } => Some((0.0, 2.0 * std::f64::consts::PI)),
            ConvexCone::PlanarSector { start, end } => Some((*start, *end)),
            _ => {
                let inside = |theta: f64| {
                    self.contains_with_margin(&[theta.cos(), theta.sin()], 0.0)
                };
                scan_interval(&inside, 0.0, 2.0 * std::f64::consts::PI, 4096, true)
            }
        }
    }

    /// For n = 3: the polar-angle interval (θ_lo, θ_hi) ⊆ (0, π) where the
    /// meridian at azimuth φ meets E.  Directions are
    /// (sin θ cos φ, sin θ sin φ, cos θ).
    pub fn meridian_interval(&self, phi: f64) -> Option<(f64, f64)> {
        assert_eq!(self.dim(), 3, "meridian_interval requires n = 3");
        if matches!(self, ConvexCone::FullSpace { .. }) {
            return Some((0.0, std::f64::consts::PI));
        }
        let inside = |theta: f64| {
            let d = [
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            ];
            self.contains_with_margin(&d, 0.0)
        };
        scan_interval(&inside, 0.0, std::f64::consts::PI, 512, false)
    }
}

/// Locates the single interval where `inside` holds on [a, b] by scanning
/// `steps` points and bisecting the two crossings.  With `wrap` the domain is
/// treated as periodic (arcs that straddle b ≡ a are unwrapped so the
/// returned interval satisfies lo < hi, possibly with hi > b).
fn scan_interval(
    inside: &dyn Fn(f64) -> bool,
    a: f64,
    b: f64,
    steps: usize,
    wrap: bool,
) -> Option<(f64, f64)> {
    let h = (b - a) / steps as f64;
    let flags: Vec<bool> = (0..steps)
        .map(|i| inside(a + (i as f64 + 0.5) * h))
        .collect();
    let count = flags.iter().filter(|&&f| f).count();
    if count == 0 {
        return None;
    }
    if count == steps {
        return Some((a, b));
    }
    // Find the first false→true transition; the interval is contiguous
    // because the cone is convex.
    let start_idx = (0..steps)
        .find(|&i| !flags[(i + steps - 1) % steps] && flags[i])
        .expect("mixed flags must contain a transition");
    let len = (0..steps)
        .take_while(|&k| flags[(start_idx + k) % steps])
        .count();
    let t = |i: usize| a + (i as f64 + 0.5) * h;
    let lo_guess = t(start_idx);
    let hi_guess = lo_guess + (len.saturating_sub(1)) as f64 * h;
    if !wrap && (start_idx + len > steps) {
        // Non-periodic domain cannot wrap; treat conservative.
        return Some((a, b));
    }
    let lo = bisect_edge(inside, lo_guess - h, lo_guess, true);
    let hi = bisect_edge(inside, hi_guess, hi_guess + h, false);
    Some((lo, hi))
}

/// Bisects the membership transition in [lo, hi]; `entering` means the set
/// begins at the returned angle.
fn bisect_edge(inside: &dyn Fn(f64) -> bool, mut lo: f64, mut hi: f64, entering: bool) -> f64 {
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let is_in = inside(mid);
        if is_in == entering {
            // Inside while entering: boundary is below; outside while
            // leaving: boundary is below as well.
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if entering {
        hi
    } else {
        lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn orthant_membership() {
        let cone = ConvexCone::positive_orthant(2).unwrap();
        assert!(cone.contains(&[1.0, 1.0]));
        assert!(!cone.contains(&[1.0, -1.0]));
        assert!(!cone.contains(&[0.0, 1.0]));
    }

    #[test]
    fn sector_excludes_lower_half_plane() {
        let cone = ConvexCone::planar_sector(0.0, PI).unwrap();
        assert!(!cone.contains(&[0.0, -1.0]));
        assert!(cone.contains(&[0.0, 1.0]));
        assert!(cone.contains(&[-1.0, 0.5]));
        assert!(!cone.contains(&[1.0, 0.0])); // boundary ray
    }

    #[test]
    fn dimension_mismatch_reported() {
        let cone = ConvexCone::positive_orthant(2).unwrap();
        assert!(matches!(
            cone.check_contains(&[1.0, 1.0, 1.0]),
            Err(CoreError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn boundary_margin_excludes_near_boundary_points() {
        let cone = ConvexCone::positive_orthant(2).unwrap();
        // Relative distance to the wall below 1e-9.
        assert!(!cone.contains(&[1.0, 1e-10]));
        assert!(cone.contains(&[1.0, 1e-6]));
    }

    #[test]
    fn scaling_and_midpoint_invariance_sampled() {
        let cones = [
            ConvexCone::positive_orthant(3).unwrap(),
            ConvexCone::halfspace_intersection(2, vec![vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap(),
            ConvexCone::planar_sector(0.3, 1.9).unwrap(),
        ];
        for cone in &cones {
            let pts = crate::sampling::sample_cone_sphere(cone, 64, 11).unwrap();
            for lambda in [0.25, 3.0, 117.0] {
                for x in &pts {
                    let scaled: Vec<f64> = x.iter().map(|v| v * lambda).collect();
                    assert!(cone.contains(&scaled), "{cone:?} λ={lambda}");
                }
            }
            for pair in pts.chunks(2) {
                if let [x, y] = pair {
                    let mid: Vec<f64> =
                        x.iter().zip(y.iter()).map(|(a, b)| 0.5 * (a + b)).collect();
                    assert!(cone.contains(&mid), "{cone:?} midpoint escaped");
                }
            }
        }
    }

    #[test]
    fn arc_of_quarter_plane() {
        let cone = ConvexCone::positive_orthant(2).unwrap();
        let (lo, hi) = cone.arc_2d().unwrap();
        assert!((lo - 0.0).abs() < 1e-9, "lo={lo}");
        assert!((hi - PI / 2.0).abs() < 1e-9, "hi={hi}");
    }

    #[test]
    fn arc_wraps_around_positive_x_axis() {
        // Halfplane x1 > 0 has arc (−π/2, π/2), straddling θ = 0 ≡ 2π.
        let cone = ConvexCone::orthant_product(vec![true, false]).unwrap();
        let (lo, hi) = cone.arc_2d().unwrap();
        assert!((hi - lo - PI).abs() < 1e-8, "arc length {}", hi - lo);
        let mid = 0.5 * (lo + hi);
        assert!(cone.contains_with_margin(&[mid.cos(), mid.sin()], 0.0));
    }

    #[test]
    fn meridian_interval_of_octant() {
        let cone = ConvexCone::positive_orthant(3).unwrap();
        let (lo, hi) = cone.meridian_interval(PI / 4.0).unwrap();
        assert!(lo.abs() < 1e-8, "lo={lo}");
        assert!((hi - PI / 2.0).abs() < 1e-8, "hi={hi}");
        assert!(cone.meridian_interval(PI).is_none());
    }
}
