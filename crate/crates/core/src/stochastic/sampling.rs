use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::distribution::JointWorkHeatDistribution;
use crate::scalar::Real;

/// Empirical statistics of sampled cycles.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSummary<T> {
    pub samples: usize,
    pub mean_w: T,
    pub var_w: T,
    pub mean_qh: T,
    pub se_mean_w: T,
    pub se_var_w: T,
    pub se_mean_qh: T,
    /// Hit count of every atom, in the distribution's atom order.
    pub counts: Vec<u64>,
}

/// Draws `n_samples` cycles by inverse-CDF sampling over the atoms,
/// conditioned on the retained mass. The stream is ChaCha8 seeded with
/// `seed`, so a fixed seed reproduces the output bit for bit.
pub fn sample_trajectories<T: Real>(dist: &JointWorkHeatDistribution<T>, n_samples: usize, seed: u64) -> SampleSummary<T> {
    let atoms = dist.atoms();
    assert!(!atoms.is_empty(), "cannot sample an empty distribution");
    let mut cdf = Vec::with_capacity(atoms.len());
    let mut acc = 0.0f64;
    for a in atoms {
        acc += a.prob.as_f64();
        cdf.push(acc);
    }
    let total = acc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; atoms.len()];
    for _ in 0..n_samples {
        let r: f64 = rng.gen::<f64>() * total;
        let k = cdf.partition_point(|&c| c <= r).min(atoms.len() - 1);
        counts[k] += 1;
    }

    let n = T::of_usize(n_samples.max(1));
    let moment = |f: &dyn Fn(usize) -> T| {
        counts
            .iter()
            .enumerate()
            .map(|(k, &c)| T::of_usize(c as usize) * f(k))
            .sum::<T>()
            / n
    };
    let mean_w = moment(&|k| atoms[k].w);
    let mean_qh = moment(&|k| atoms[k].q_h);
    let m2 = moment(&|k| (atoms[k].w - mean_w).powi(2));
    let m4 = moment(&|k| (atoms[k].w - mean_w).powi(4));
    let var_qh = moment(&|k| (atoms[k].q_h - mean_qh).powi(2));
    let bessel = if n_samples > 1 { n / (n - T::one()) } else { T::one() };
    let var_w = m2 * bessel;
    SampleSummary {
        samples: n_samples,
        mean_w,
        var_w,
        mean_qh,
        se_mean_w: (var_w / n).sqrt(),
        se_var_w: ((m4 - m2 * m2).max(T::zero()) / n).sqrt(),
        se_mean_qh: (var_qh * bessel / n).sqrt(),
        counts,
    }
}
