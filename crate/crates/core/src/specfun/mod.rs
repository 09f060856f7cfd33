//! Special-function kernel: gamma functions, Laguerre polynomials, Gauss rules,
//! and continuous dual Hahn polynomials.

mod cdh;
mod gamma;
mod laguerre;
mod quadrature;

pub(crate) use cdh::log_weight_any;
pub use cdh::{cdh_3f2, cdh_recursion, cdh_weight, CdhArgs};
pub use gamma::{log_abs_gamma_complex, log_gamma};
pub use laguerre::{hyp1f1_terminating, laguerre, laguerre_sequence, laguerre_x_ddx};
pub(crate) use laguerre::{laguerre_pair, sequence_unchecked};
pub use quadrature::{gauss_laguerre, GaussLegendre, QuadratureRule};
