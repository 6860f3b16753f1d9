//! Special functions and the Helmholtz fundamental solution.

mod fundamental;
mod special;

pub use fundamental::{
    e2, e2_remainder, e2_with_derivative, e3_closed_form, fundamental_gradient,
    fundamental_hessian, fundamental_solution, kernel_difference, kernel_value, KernelValue, SpectralParameter,
};
pub use special::{
    bessel_01, bessel_j, bessel_j_prime, digamma, hankel1, hankel1_01, sqrt_upper, BesselPair,
    EULER_GAMMA, SERIES_RADIUS,
};
