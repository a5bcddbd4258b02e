//! Derivative-free coordinate pattern search: evaluate ± step moves per
//! coordinate, accept the best improvement, shrink the step when stuck.

/// Options for the pattern search.
#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub initial_step: f64,
    /// Number of step-shrink rounds.
    pub shrink_rounds: usize,
    pub shrink_factor: f64,
    /// Hard cap on objective evaluations (0 = the 500k safety default;
    /// unbounded objectives would otherwise walk forever).
    pub max_evals: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            initial_step: 0.1,
            shrink_rounds: 40,
            shrink_factor: 0.5,
            max_evals: 0,
        }
    }
}

/// Maximizes f from x0, optionally clamped to [lower, upper] per coordinate.
/// Returns (argmax, max).  Non-finite objective values are treated as -∞.
pub fn pattern_search_max<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    lower: Option<&[f64]>,
    upper: Option<&[f64]>,
    opts: &SearchOptions,
) -> (Vec<f64>, f64) {
    let dim = x0.len();
    let clamp = |x: &mut Vec<f64>| {
        if let Some(lo) = lower {
            for (xi, &l) in x.iter_mut().zip(lo) {
                if *xi < l {
                    *xi = l;
                }
            }
        }
        if let Some(hi) = upper {
            for (xi, &u) in x.iter_mut().zip(hi) {
                if *xi > u {
                    *xi = u;
                }
            }
        }
    };
    let cap = if opts.max_evals > 0 {
        opts.max_evals
    } else {
        500_000
    };
    let mut evals = 0usize;
    let value = |f: &mut F, x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::NEG_INFINITY
        }
    };

    let mut best = x0.to_vec();
    clamp(&mut best);
    let mut best_val = value(&mut f, &best, &mut evals);
    let mut step = opts.initial_step;

    for _ in 0..opts.shrink_rounds {
        let mut improved = true;
        while improved {
            improved = false;
            for i in 0..dim {
                for dir in [1.0, -1.0] {
                    if evals >= cap {
                        return (best, best_val);
                    }
                    let mut cand = best.clone();
                    cand[i] += dir * step;
                    clamp(&mut cand);
                    let v = value(&mut f, &cand, &mut evals);
                    if v > best_val {
                        best = cand;
                        best_val = v;
                        improved = true;
                    }
                }
            }
        }
        step *= opts.shrink_factor;
    }
    (best, best_val)
}

/// Minimizes f by maximizing its negation.
pub fn pattern_search_min<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    lower: Option<&[f64]>,
    upper: Option<&[f64]>,
    opts: &SearchOptions,
) -> (Vec<f64>, f64) {
    let (x, v) = pattern_search_max(|x| -f(x), x0, lower, upper, opts);
    (x, -v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_maximum() {
        let (x, v) = pattern_search_max(
            |x| -(x[0] - 1.5).powi(2) - (x[1] + 0.25).powi(2),
            &[0.0, 0.0],
            None,
            None,
            &SearchOptions {
                initial_step: 1.0,
                ..Default::default()
            },
        );
        assert!((x[0] - 1.5).abs() < 1e-9);
        assert!((x[1] + 0.25).abs() < 1e-9);
        assert!(v > -1e-17);
    }

    #[test]
    fn respects_bounds() {
        let (x, _) = pattern_search_max(
            |x| x[0],
            &[0.0],
            Some(&[-1.0]),
            Some(&[2.0]),
            &SearchOptions::default(),
        );
        assert!((x[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn honors_eval_budget() {
        let mut count = 0usize;
        pattern_search_max(
            |x| {
                count += 1;
                -x[0] * x[0]
            },
            &[5.0],
            None,
            None,
            &SearchOptions {
                max_evals: 25,
                ..Default::default()
            },
        );
        assert!(count <= 25);
    }
}
