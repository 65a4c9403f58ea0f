pub(crate) mod appell;
mod form;
pub(crate) mod hecke;
mod oracle;
mod theta;

pub use appell::{appell_lerch_sum, AppellLerchSpec};
pub use form::QuadForm;
pub use hecke::{hecke_sum, HeckeRegion, HeckeSpec};
pub use oracle::{brute_force_expand, brute_force_expr};
pub use theta::{jtp_sum, theta_product, ThetaProductSpec};
