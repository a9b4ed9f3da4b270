//! Special-function kernels: elliptic integrals, Airy, weighted Hermite and parabolic
//! cylinder functions, complex Gamma, confluent hypergeometric 1F1, Bessel J_n.

pub mod airy;
pub mod bessel;
pub mod elliptic;
pub mod gamma;
pub mod hermite;
pub mod kummer;
pub mod pcf;

pub use airy::{airy_ai, airy_ai_prime, airy_pair};
pub use bessel::{bessel_j, bessel_j_all};
pub use elliptic::{ellip_e_imag_amplitude, ellip_e_inc, ellip_f_inc, ellip_k};
pub use gamma::{gamma, gamma_quarter_line, ln_gamma, recip_gamma, GammaQuarterLine};
pub use hermite::{weighted_hermite, weighted_hermite_log};
pub use kummer::{
    kummer_1f1, kummer_1f1_asymptotic, kummer_1f1_continuation, kummer_1f1_series, kummer_1f1_with,
    KummerConfig,
};
pub use pcf::{pcf_d, scaled_pcf, scaled_pcf_airy, scaled_pcf_hermite};
