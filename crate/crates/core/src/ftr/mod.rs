//! FTR statistics.

mod density;
mod laplace;
mod lift;

pub use density::{ftr_cdf, ftr_pdf, ftr_pdf_integer, CdfPath};
pub use laplace::{
    ftr_gmgf, ftr_igmgf, ftr_imgf_lower, ftr_imgf_upper, ftr_mgf, ftr_moment, nakagami_igmgf,
};
pub use lift::{lift_nakagami_metric, lift_rs_metric, BaseKind, LiftedMetric};

pub(crate) use laplace::nakagami_igmgf_ln;
pub(crate) use lift::lift_nakagami;
