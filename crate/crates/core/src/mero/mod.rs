//! Meromorphic b-functions of `f = F/G`.

mod laurent;
mod oracle;
mod reduced;
mod sigma;
mod vroute;

pub use laurent::{apply_operator, LaurentSection, MeroInput};
pub use oracle::{certify, check_witness, verify_functional_equation, Certificate, OracleBounds, OracleSystem, Witness};
pub use sigma::{build_sigma, graph_algebra, seed_generators, SigmaPresentation};
pub use vroute::{ann_ds, b_mero, b_section_along_t, b_simple, theta_to_s, Certification, MeroBFunction};
pub use reduced::{reduced_b, smoothness_test, QuasiHomogeneity, ReducedB};
