//! Work and heat statistics of single cycles from the two-measurement scheme.

mod distribution;
mod fluctuation;
mod sampling;

pub use distribution::{
    build_joint_distribution, build_reversed_distribution, joint_distribution_from_strokes, Atom, CycleDirection,
    CycleStrokes, DistributionMoments, DistributionOptions, JointWorkHeatDistribution,
};
pub use fluctuation::{check_fluctuation_theorem, entropy_production_distribution, FluctuationReport};
pub use sampling::{sample_trajectories, SampleSummary};
