//! Free cumulant sequences and the moment-cumulant correspondence.

mod moments;
mod spec;
mod zeta;

pub use moments::{
    cumulant_values_from_moments, cumulants_from_moments, moments_from_cumulant_values,
    moments_from_cumulants_bruteforce, moments_from_cumulants_bruteforce_capped, moments_from_cumulants_recursive,
    moments_from_cumulants_recursive_hp, MomentSequence,
};
pub use spec::{
    cumulants_from_levy_khintchine, dilate, free_convolve, shift_first_cumulant, zeta_series_cumulants,
    CumulantSpec, GrowthBound, UNIFORM_TABLE_LEN,
};
pub use zeta::zeta;
