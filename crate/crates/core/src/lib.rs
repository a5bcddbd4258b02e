//! Numerical toolkit for two-weight Sobolev and isoperimetric inequalities
//! on open convex cones with homogeneous weights: structural-condition
//! estimation, valid constants, discretized verification, necessity probes,
//! and optimal-transport consistency checks.

pub mod conditions;
pub mod cone;
pub mod constants;
pub mod density;
pub mod error;
pub mod exponents;
pub mod grid;
pub mod probes;
pub mod profiles;
pub mod quad;
pub mod sampling;
pub mod search;
pub mod simplex;
pub mod special;
pub mod spectral;
pub mod transport;
pub mod weight;

pub use conditions::{
    c0_ratio, check_c1, concavity_sufficient, estimate_best_c0, monomial_c0, rigidity_floor,
    ConditionKind, ConditionReport, Verdict,
};
pub use cone::ConvexCone;
pub use constants::{
    additive_k0, ckn_parameters, heisenberg_constant, k0_general, k0_p1, k0_sharp_equal,
    pansu_constant, CknParameters, ConstantResult, FormulaBranch,
};
pub use density::{density_integrals, DensityFamily, DensityIntegrals};
pub use error::{CoreError, Result};
pub use grid::{sobolev_quotient, weighted_grad_lp_norm, weighted_lq_norm, GridFunction};
pub use probes::{necessity_probe_log, necessity_probe_shift, ProbeResult, RawExponents};
pub use profiles::{maximize_quotient, ProfileFamily, QuotientSearch};
pub use spectral::{
    rayleigh_quotient, sampled_rayleigh_quotients, spectral_gap_bound, SpectralGapBound,
};
pub use transport::{
    default_bins, integrated_chain_check, monge_ampere_residual, pointwise_divergence_check,
    solve_discrete_ot, ChainCheck, DiscreteMeasure, DivergenceCheck, Potential, TransportPlan,
};
pub use exponents::{validate_exponents, ExponentSet};
pub use quad::{
    cone_ball_integral, cone_polar_integral, sphere_integral, IntegralEstimate, QuadOptions,
};
pub use sampling::sample_cone_sphere;
pub use weight::HomogeneousWeight;
