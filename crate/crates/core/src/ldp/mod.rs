//! Rate functions of the block-size large deviations and the bounded-Lipschitz metric.

mod bl;
mod pmf;
mod rate;

pub use bl::{bounded_lipschitz_distance, bounded_lipschitz_distance_with, BlDistance, BlOptions};
pub use pmf::{ExtReal, PmfOnN, Tail, MASS_TOLERANCE};
pub use rate::{
    entropy, rate_i1, rate_j, rate_j_marginal, relative_entropy_vs_geom, relative_entropy_vs_geom_identity,
    theta, MEAN_TOLERANCE,
};
pub(crate) use rate::theta_unchecked;
