//! Homogeneous weight families with analytic gradients.
//!
//! The families form a closed grammar (primitives combined by products and
//! powers), so the logarithmic gradient ∇w/w is available in closed form at
//! every differentiability point; finite differences appear only in tests.

use crate::cone::ConvexCone;
use crate::error::{CoreError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum HomogeneousWeight {
    /// w(x) = c, c > 0.
    Constant(f64),
    /// w(x) = x_1^{e_1} ⋯ x_n^{e_n}.
    Monomial(Vec<f64>),
    /// w(x) = |x|^t.
    RadialPower(f64),
    /// w(x) = (x_1 + … + x_n)^t.
    SumPower(f64),
    /// w(x) = (x_1⋯x_n/(x_1+…+x_n))^{t/(n−1)}, homogeneous of degree t.
    MarcusLopes(f64),
    /// Pointwise product of weights.
    Product(Vec<HomogeneousWeight>),
    /// w(x) = base(x)^s.
    Power(Box<HomogeneousWeight>, f64),
}

impl HomogeneousWeight {
    pub fn constant(c: f64) -> Self {
        HomogeneousWeight::Constant(c)
    }

    pub fn monomial(exponents: Vec<f64>) -> Self {
        HomogeneousWeight::Monomial(exponents)
    }

    pub fn radial_power(t: f64) -> Self {
        HomogeneousWeight::RadialPower(t)
    }

    pub fn sum_power(t: f64) -> Self {
        HomogeneousWeight::SumPower(t)
    }

    pub fn marcus_lopes(t: f64) -> Self {
        HomogeneousWeight::MarcusLopes(t)
    }

    pub fn product(factors: Vec<HomogeneousWeight>) -> Self {
        HomogeneousWeight::Product(factors)
    }

    pub fn power(base: HomogeneousWeight, s: f64) -> Self {
        HomogeneousWeight::Power(Box::new(base), s)
    }

    /// Degree of positive homogeneity.
    pub fn degree(&self) -> f64 {
        match self {
            HomogeneousWeight::Constant(_) => 0.0,
            HomogeneousWeight::Monomial(e) => e.iter().sum(),
            HomogeneousWeight::RadialPower(t)
            | HomogeneousWeight::SumPower(t)
            | HomogeneousWeight::MarcusLopes(t) => *t,
            HomogeneousWeight::Product(ws) => ws.iter().map(|w| w.degree()).sum(),
            HomogeneousWeight::Power(base, s) => base.degree() * s,
        }
    }

    /// Raw evaluation; may return non-finite or non-positive values outside
    /// the weight's natural domain.  Public callers go through `eval`.
    pub fn eval_raw(&self, x: &[f64]) -> f64 {
        match self {
            HomogeneousWeight::Constant(c) => *c,
            HomogeneousWeight::Monomial(e) => e
                .iter()
                .zip(x)
                .map(|(&ei, &xi)| if ei == 0.0 { 1.0 } else { xi.powf(ei) })
                .product(),
            HomogeneousWeight::RadialPower(t) => {
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                r.powf(*t)
            }
            HomogeneousWeight::SumPower(t) => x.iter().sum::<f64>().powf(*t),
            HomogeneousWeight::MarcusLopes(t) => {
                let n = x.len() as f64;
                let prod: f64 = x.iter().product();
                let sum: f64 = x.iter().sum();
                (prod / sum).powf(t / (n - 1.0))
            }
            HomogeneousWeight::Product(ws) => ws.iter().map(|w| w.eval_raw(x)).product(),
            HomogeneousWeight::Power(base, s) => base.eval_raw(x).powf(*s),
        }
    }

    /// Logarithmic gradient ∇w(x)/w(x); closed form for every family.
    pub fn log_grad_raw(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        match self {
            HomogeneousWeight::Constant(_) => vec![0.0; n],
            HomogeneousWeight::Monomial(e) => {
                e.iter().zip(x).map(|(&ei, &xi)| ei / xi).collect()
            }
            HomogeneousWeight::RadialPower(t) => {
                let r2 = x.iter().map(|v| v * v).sum::<f64>();
                x.iter().map(|&xi| t * xi / r2).collect()
            }
            HomogeneousWeight::SumPower(t) => {
                let s: f64 = x.iter().sum();
                vec![t / s; n]
            }
            HomogeneousWeight::MarcusLopes(t) => {
                let s: f64 = x.iter().sum();
                let c = t / (n as f64 - 1.0);
                x.iter().map(|&xi| c * (1.0 / xi - 1.0 / s)).collect()
            }
            HomogeneousWeight::Product(ws) => {
                let mut g = vec![0.0; n];
                for w in ws {
                    for (gi, di) in g.iter_mut().zip(w.log_grad_raw(x)) {
                        *gi += di;
                    }
                }
                g
            }
            HomogeneousWeight::Power(base, s) => base
                .log_grad_raw(x)
                .into_iter()
                .map(|g| s * g)
                .collect(),
        }
    }

    /// Evaluates the weight at a cone point; errors on points outside E and
    /// on non-positive / non-finite values (kinks, zero coordinates, …).
    pub fn eval(&self, cone: &ConvexCone, x: &[f64]) -> Result<f64> {
        if !cone.check_contains(x)? {
            return Err(CoreError::OutsideCone);
        }
        let v = self.eval_raw(x);
        if !v.is_finite() || v <= 0.0 {
            return Err(CoreError::NondifferentiablePoint);
        }
        Ok(v)
    }

    /// Analytic gradient ∇w(x) at a cone point.
    pub fn grad(&self, cone: &ConvexCone, x: &[f64]) -> Result<Vec<f64>> {
        let v = self.eval(cone, x)?;
        let g = self.log_grad_raw(x);
        if g.iter().any(|gi| !gi.is_finite()) {
            return Err(CoreError::NondifferentiablePoint);
        }
        Ok(g.into_iter().map(|gi| gi * v).collect())
    }

    /// Euler identity residual (∇w(x)·x − deg·w(x)) / w(x); identically zero
    /// for exact homogeneity.
    pub fn euler_residual(&self, cone: &ConvexCone, x: &[f64]) -> Result<f64> {
        self.eval(cone, x)?;
        let g = self.log_grad_raw(x);
        if g.iter().any(|gi| !gi.is_finite()) {
            return Err(CoreError::NondifferentiablePoint);
        }
        let dot: f64 = g.iter().zip(x).map(|(gi, xi)| gi * xi).sum();
        Ok(dot - self.degree())
    }

    /// True when the weight is identically constant (for C-1 shortcuts).
    pub fn is_constant(&self) -> bool {
        match self {
            HomogeneousWeight::Constant(_) => true,
            HomogeneousWeight::Monomial(e) => e.iter().all(|&ei| ei == 0.0),
            HomogeneousWeight::RadialPower(t)
            | HomogeneousWeight::SumPower(t)
            | HomogeneousWeight::MarcusLopes(t) => *t == 0.0,
            HomogeneousWeight::Product(ws) => ws.iter().all(|w| w.is_constant()),
            HomogeneousWeight::Power(base, s) => *s == 0.0 || base.is_constant(),
        }
    }

    /// Monomial exponent vector when the weight is a pure monomial (up to
    /// products/powers of monomials), None otherwise.
    pub fn as_monomial_exponents(&self, dim: usize) -> Option<Vec<f64>> {
        match self {
            HomogeneousWeight::Constant(c) if *c == 1.0 => Some(vec![0.0; dim]),
            HomogeneousWeight::Monomial(e) if e.len() == dim => Some(e.clone()),
            HomogeneousWeight::Product(ws) => {
                let mut acc = vec![0.0; dim];
                for w in ws {
                    let e = w.as_monomial_exponents(dim)?;
                    for (a, b) in acc.iter_mut().zip(e) {
                        *a += b;
                    }
                }
                Some(acc)
            }
            HomogeneousWeight::Power(base, s) => {
                let e = base.as_monomial_exponents(dim)?;
                Some(e.into_iter().map(|ei| ei * s).collect())
            }
            _ => None,
        }
    }
}
