//! Fluctuating Two-Ray fading statistics.
//!
//! The channel model is evaluated through two finite mixtures: a continuous
//! mixture of squared Rician Shadowed variates over the phase difference of
//! the two specular rays (any `m > 0`), and, for integer `m`, a weighted
//! mixture of squared Nakagami-m variates. Both reduce every statistic to a
//! finite-range integral over `θ ∈ [0, π]` or to a closed form.

pub mod error;
pub mod ftr;
pub mod mc;
pub mod models;
pub mod outage;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
pub use quad::{QuadRule, QuadSpec};
pub use ftr::{
    ftr_cdf, ftr_gmgf, ftr_igmgf, ftr_imgf_lower, ftr_imgf_upper, ftr_mgf, ftr_moment, ftr_pdf,
    ftr_pdf_integer, lift_nakagami_metric, lift_rs_metric, BaseKind, CdfPath, LiftedMetric,
};
pub use models::{FtrParams, MixtureTerm, NakagamiParams, RsParams};
pub use outage::{OutageScenario, ScenarioA, ScenarioB};
pub use mc::{Estimate, McConfig, SpecularAmplitudes};
