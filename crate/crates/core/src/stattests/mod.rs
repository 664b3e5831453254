//! Randomness-versus-contagion and Gaussian-domain tests.

mod dispersion;
mod normality;

pub use dispersion::{
    chi_square_lower_tail, chi_square_upper_tail, index_of_dispersion, DispersionClass,
    DispersionResult, DEFAULT_DISPERSION_LEVEL,
};
pub use normality::{
    log1p_series, shapiro_wilk, shapiro_wilk_at, shapiro_wilk_coefficients, NormalityResult,
    NormalityVerdict, DEFAULT_NORMALITY_LEVEL,
};
