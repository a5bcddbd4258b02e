//! Property-based invariants over randomly generated inputs.

use conewsi::transport::DiscreteMeasure;
use conewsi::{validate_exponents, ConvexCone, HomogeneousWeight};
use proptest::prelude::*;

proptest! {
    /// Every admissible exponent tuple satisfies the balance identity and
    /// n_a ≥ n.
    #[test]
    fn balance_identity_and_fractional_dimension(
        n in 2usize..6,
        p in 1.0f64..4.0,
        tau in -1.5f64..4.0,
        alpha in -1.5f64..5.0,
    ) {
        if let Ok(e) = validate_exponents(n, p, tau, alpha) {
            let nf = n as f64;
            let balance = (e.tau + nf) / e.q - ((e.alpha + nf) / e.p - 1.0);
            prop_assert!(balance.abs() < 1e-12, "balance residual {balance}");
            if e.n_a.is_finite() {
                prop_assert!(e.n_a >= nf - 1e-9, "n_a = {} < n", e.n_a);
            }
            prop_assert!(e.q >= e.p - 1e-12, "q = {} < p = {}", e.q, e.p);
        }
    }

    /// Positive homogeneity and the Euler identity hold across the whole
    /// weight grammar.
    #[test]
    fn weight_homogeneity_and_euler(
        e1 in -0.75f64..2.0,
        e2 in 0.0f64..2.0,
        t in -0.5f64..2.0,
        s in 0.2f64..1.8,
        lambda in 0.05f64..20.0,
        x1 in 0.05f64..3.0,
        x2 in 0.05f64..3.0,
    ) {
        let cone = ConvexCone::positive_orthant(2).unwrap();
        let w = HomogeneousWeight::product(vec![
            HomogeneousWeight::monomial(vec![e1, e2]),
            HomogeneousWeight::power(HomogeneousWeight::sum_power(t), s),
            HomogeneousWeight::marcus_lopes(0.4),
        ]);
        let x = [x1, x2];
        let base = w.eval(&cone, &x).unwrap();
        let scaled = w.eval(&cone, &[x1 * lambda, x2 * lambda]).unwrap();
        let expected = lambda.powf(w.degree()) * base;
        prop_assert!(
            (scaled - expected).abs() <= 1e-10 * expected.abs().max(1e-10),
            "homogeneity: {scaled} vs {expected}"
        );
        let residual = w.euler_residual(&cone, &x).unwrap();
        prop_assert!(residual.abs() < 1e-10, "Euler residual {residual}");
    }

    /// 1D optimal plans are the monotone rearrangement: the support never
    /// crosses, and marginals are exact.
    #[test]
    fn one_dimensional_plans_are_monotone(
        raw_pts in proptest::collection::vec(-5.0f64..5.0, 2..40),
        raw_mass in proptest::collection::vec(0.05f64..1.0, 2..40),
    ) {
        let k = raw_pts.len().min(raw_mass.len());
        let total: f64 = raw_mass[..k].iter().sum();
        let mu = DiscreteMeasure::new(
            raw_pts[..k].iter().map(|&x| vec![x]).collect(),
            raw_mass[..k].iter().map(|m| m / total).collect(),
        )
        .unwrap();
        let shifted = DiscreteMeasure::new(
            raw_pts[..k].iter().map(|&x| vec![1.5 * x + 2.0]).collect(),
            raw_mass[..k].iter().map(|m| m / total).collect(),
        )
        .unwrap();
        let plan = conewsi::solve_discrete_ot(&mu, &shifted).unwrap();
        prop_assert!(plan.marginal_error(&mu, &shifted) < 1e-10);
        for &(i1, j1, _) in &plan.entries {
            for &(i2, j2, _) in &plan.entries {
                let dx = mu.points[i1][0] - mu.points[i2][0];
                let dy = shifted.points[j1][0] - shifted.points[j2][0];
                prop_assert!(
                    dx * dy >= -1e-12,
                    "crossing pair: sources {dx}, targets {dy}"
                );
            }
        }
    }
}
