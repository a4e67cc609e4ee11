use super::distribution::JointWorkHeatDistribution;
use crate::cycle::CycleConfig;
use crate::error::{invalid, Result};
use crate::scalar::Real;

/// `sigma = beta_cold a omega_c + beta_hot b omega_h`, i.e.
/// `(beta_cold - beta_hot) q_h + beta_cold w`.
fn sigma_of<T: Real>(beta_cold: T, beta_hot: T, omega_c: T, omega_h: T, a: i64, b: i64) -> T {
    beta_cold * omega_c * T::of_i64(a) + beta_hot * omega_h * T::of_i64(b)
}

/// Entropy production per atom, re-binned on equal `sigma` and sorted.
///
/// Values closer than `1e-12` relative are merged.
pub fn entropy_production_distribution<T: Real>(dist: &JointWorkHeatDistribution<T>, config: &CycleConfig<T>) -> Result<Vec<(T, T)>> {
    let p = config.resolve()?;
    let (wc, wh) = dist.omegas();
    let mut pts: Vec<(T, T)> = dist
        .atoms()
        .iter()
        .map(|x| (sigma_of(p.beta_cold, p.beta_hot, wc, wh, x.a, x.b), x.prob))
        .collect();
    pts.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite entropy production"));
    let mut out: Vec<(T, T)> = Vec::with_capacity(pts.len());
    let tol = T::lit(1e-12);
    for (s, pr) in pts {
        match out.last_mut() {
            Some(last) if (s - last.0).abs() <= tol * s.abs().max(T::one()) => last.1 += pr,
            _ => out.push((s, pr)),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluctuationReport<T> {
    /// Lattice points where both `p(a, b)` and `p_R(-a, -b)` exceed the floor.
    pub pairs: usize,
    /// `max |ln(p / p_R) - sigma|` over those points.
    pub max_deviation: T,
    /// `sum p exp(-sigma)` over the forward support.
    pub integral: T,
    /// Weighted least squares of `ln(p / p_R)` against `sigma`, weights `p`.
    pub slope: T,
    pub intercept: T,
    pub mean_sigma: T,
}

/// Compares a forward distribution with the reversed one point by point.
pub fn check_fluctuation_theorem<T: Real>(
    forward: &JointWorkHeatDistribution<T>,
    reversed: &JointWorkHeatDistribution<T>,
    config: &CycleConfig<T>,
    floor: T,
) -> Result<FluctuationReport<T>> {
    let p = config.resolve()?;
    let (wc, wh) = forward.omegas();
    if reversed.omegas() != (wc, wh) {
        return Err(invalid("reversed", "distributions use different frequencies"));
    }
    let total = forward.total_probability();
    let (mut integral, mut mean_sigma) = (T::zero(), T::zero());
    let mut pts: Vec<(T, T, T)> = Vec::new();
    let mut max_dev = T::zero();
    for x in forward.atoms() {
        let s = sigma_of(p.beta_cold, p.beta_hot, wc, wh, x.a, x.b);
        integral += x.prob * (-s).exp();
        mean_sigma += x.prob * s;
        let pr = reversed.prob(-x.a, -x.b);
        if x.prob > floor && pr > floor {
            let lr = (x.prob / pr).ln();
            max_dev = max_dev.max((lr - s).abs());
            pts.push((s, lr, x.prob));
        }
    }
    let wsum: T = pts.iter().map(|t| t.2).sum();
    let (mx, my) = pts
        .iter()
        .fold((T::zero(), T::zero()), |(a, b), t| (a + t.2 * t.0, b + t.2 * t.1));
    let (mx, my) = (mx / wsum, my / wsum);
    let (mut sxy, mut sxx) = (T::zero(), T::zero());
    for &(x, y, w) in &pts {
        sxy += w * (x - mx) * (y - my);
        sxx += w * (x - mx) * (x - mx);
    }
    let slope = sxy / sxx;
    Ok(FluctuationReport {
        pairs: pts.len(),
        max_deviation: max_dev,
        integral,
        slope,
        intercept: my - slope * mx,
        mean_sigma: mean_sigma / total,
    })
}
