//! The exponent algebra tying together (n, p, τ, α) with the derived
//! Sobolev exponent q, the fractional dimension n_a and the conjugate p′.

use crate::error::{CoreError, Result};

/// Relative tolerance used when deciding degenerate branches (n_a = ∞, n_a = n).
const BRANCH_TOL: f64 = 1e-12;

/// A validated exponent tuple.
///
/// `q` solves the dimensional balance (τ+n)/q = (α+n)/p − 1, the fractional
/// dimension satisfies 1/n_a = 1/p − 1/q (`f64::INFINITY` when p = q, i.e.
/// α = p + τ), and `p_conj` is p/(p−1) (`f64::INFINITY` when p = 1).
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentSet {
    pub n: usize,
    pub p: f64,
    pub tau: f64,
    pub alpha: f64,
    pub q: f64,
    pub n_a: f64,
    pub p_conj: f64,
}

impl ExponentSet {
    /// True when n_a = +∞ (equivalently p = q, equivalently α = p + τ).
    pub fn na_is_infinite(&self) -> bool {
        self.n_a.is_infinite()
    }

    /// True when n_a = n (the borderline of α ≥ (1−p/n)τ).
    pub fn na_equals_n(&self) -> bool {
        self.n_a.is_finite() && (self.n_a - self.n as f64).abs() <= BRANCH_TOL * self.n_a.max(1.0)
    }

    /// 1/p′, hardwired to 0 when p = 1.
    pub fn inv_p_conj(&self) -> f64 {
        if self.p_conj.is_infinite() {
            0.0
        } else {
            1.0 / self.p_conj
        }
    }

    /// n_a/(n_a−n), taken as 1 when n_a = +∞.
    pub fn na_ratio(&self) -> f64 {
        if self.na_is_infinite() {
            1.0
        } else {
            self.n_a / (self.n_a - self.n as f64)
        }
    }
}

/// Validates (n, p, τ, α) against the admissible parameter ranges and derives
/// q, n_a and p′.
///
/// Rejections name the violated relation: the local integrability bounds
/// τ+n > 0 and α+n > 0, the two sides of 1 ≤ p < α+n ≤ τ+p+n, and
/// α ≥ (1−p/n)τ.
pub fn validate_exponents(n: usize, p: f64, tau: f64, alpha: f64) -> Result<ExponentSet> {
    if n < 2 {
        return Err(CoreError::RangeViolation(format!("n ≥ 2 (got n={n})")));
    }
    if !(p >= 1.0) || !p.is_finite() {
        return Err(CoreError::RangeViolation(format!("p ≥ 1 (got p={p})")));
    }
    let nf = n as f64;
    if !(tau + nf > 0.0) {
        return Err(CoreError::RangeViolation(format!(
            "τ + n > 0 (local integrability of ω; got τ={tau}, n={n})"
        )));
    }
    if !(alpha + nf > 0.0) {
        return Err(CoreError::RangeViolation(format!(
            "α + n > 0 (local integrability of σ; got α={alpha}, n={n})"
        )));
    }
    if !(p < alpha + nf) {
        return Err(CoreError::RangeViolation(format!(
            "p < α+n (got p={p}, α+n={})",
            alpha + nf
        )));
    }
    let slack = BRANCH_TOL * (1.0 + alpha.abs() + tau.abs() + p);
    if alpha + nf > tau + p + nf + slack {
        return Err(CoreError::RangeViolation(format!(
            "α+n ≤ τ+p+n (got α+n={}, τ+p+n={})",
            alpha + nf,
            tau + p + nf
        )));
    }
    if alpha + slack < (1.0 - p / nf) * tau {
        return Err(CoreError::RangeViolation(format!(
            "α ≥ (1−p/n)τ (got α={alpha}, (1−p/n)τ={})",
            (1.0 - p / nf) * tau
        )));
    }

    let q = p * (tau + nf) / (alpha + nf - p);
    // n_a = +∞ exactly when α = p + τ (equivalently p = q).
    let n_a = if (alpha - p - tau).abs() <= slack {
        f64::INFINITY
    } else {
        1.0 / (1.0 / p - 1.0 / q)
    };
    let p_conj = if p == 1.0 { f64::INFINITY } else { p / (p - 1.0) };

    Ok(ExponentSet {
        n,
        p,
        tau,
        alpha,
        q,
        n_a,
        p_conj,
    })
}
