//! The independent-prime model: one Bernoulli indicator per prime `p <= Y`,
//! its exact sum law, Monte Carlo draws and the moment bound.

mod bounds;
mod ensemble;
mod poisson_binomial;
mod sampling;

pub use bounds::{centered_indicator_moment, centered_moment_bound, composition_bound, MomentBound};
pub use ensemble::{compare_modes, exact_probability, BernoulliEnsemble, ModeGap, ProbabilityMode};
pub use poisson_binomial::{
    exact_distribution, PoissonBinomialDist, CANCELLATION_FLAG, CONVOLUTION_BUDGET,
    DEFAULT_MAX_MOMENT,
};
pub use sampling::{compare_with_exact, sample_s, SampleCheck, SampleMoments, SAMPLE_MOMENTS, STREAMS};
