//! Deterministic rejection sampling of unit directions in S^{n−1} ∩ E.
//!
//! Every randomized operation in the toolkit funnels through a seeded
//! ChaCha stream, so results are reproducible for a fixed seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::ConvexCone;
use crate::error::{CoreError, Result};

/// Seeded RNG used across the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One standard normal via Box–Muller.
pub fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let u: f64 = rng.gen::<f64>();
        if u <= f64::MIN_POSITIVE {
            continue;
        }
        let v: f64 = rng.gen::<f64>();
        return (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos();
    }
}

/// A uniform direction on the full sphere S^{n−1}.
pub fn random_direction(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..dim).map(|_| standard_normal(rng)).collect();
        let len = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if len > 1e-8 {
            return x.into_iter().map(|v| v / len).collect();
        }
    }
}

/// Draws `count` unit vectors in S^{n−1} ∩ E, deterministic for a fixed seed.
///
/// Fails with `EmptyCone` when the rejection rate indicates the cross-section
/// is empty (contradictory half-spaces and the like).
pub fn sample_cone_sphere(
    cone: &ConvexCone,
    count: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    if count == 0 {
        return Err(CoreError::RangeViolation("count must be positive".into()));
    }
    let mut rng = rng_from_seed(seed);
    let dim = cone.dim();
    let mut out = Vec::with_capacity(count);
    let max_attempts = 100_000usize.max(2_000 * count);
    let mut attempts = 0usize;
    while out.len() < count {
        if attempts >= max_attempts {
            return Err(CoreError::EmptyCone(format!(
                "accepted {}/{count} directions after {attempts} draws",
                out.len()
            )));
        }
        attempts += 1;
        let d = random_direction(&mut rng, dim);
        if cone.contains(&d) {
            out.push(d);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_fixed_seed() {
        let cone = ConvexCone::full_space(2).unwrap();
        let a = sample_cone_sphere(&cone, 4, 7).unwrap();
        let b = sample_cone_sphere(&cone, 4, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
        for x in &a {
            let len: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((len - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn orthant_samples_strictly_positive() {
        let cone = ConvexCone::positive_orthant(2).unwrap();
        let pts = sample_cone_sphere(&cone, 100, 1).unwrap();
        assert_eq!(pts.len(), 100);
        assert!(pts.iter().all(|x| x[0] > 0.0 && x[1] > 0.0));
    }

    #[test]
    fn contradictory_halfspaces_report_empty() {
        let cone = ConvexCone::halfspace_intersection(
            2,
            vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]],
        )
        .unwrap();
        assert!(matches!(
            sample_cone_sphere(&cone, 4, 3),
            Err(CoreError::EmptyCone(_))
        ));
    }
}
