use std::fmt;

use crate::cycle::{CycleConfig, CycleInputs};
use crate::error::{invalid, Error, Result};
use crate::fock::{unitary_transition_matrix_with, DrivingProtocol, FockCutoff, PropagationOptions, TransitionMatrix};
use crate::scalar::{Complex, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CycleDirection {
    Forward,
    /// The cycle run clockwise: every stroke time-reversed.
    Reversed,
}

impl fmt::Display for CycleDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Forward => "forward",
            Self::Reversed => "reversed",
        })
    }
}

/// One lattice point of the joint distribution.
///
/// With `n -> m` the compression and `i -> j` the expansion quantum numbers,
/// `a = j - n`, `b = m - i`, so `w = a omega_c + b omega_h` and
/// `q_h = -b omega_h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom<T> {
    pub a: i64,
    pub b: i64,
    pub w: T,
    pub q_h: T,
    pub prob: T,
}

/// Moments of the retained probability mass, normalized by it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionMoments<T> {
    pub total: T,
    pub mean_w: T,
    pub var_w: T,
    pub mean_qh: T,
    pub var_qh: T,
    pub mean_qc: T,
    pub cv_power: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointWorkHeatDistribution<T> {
    atoms: Vec<Atom<T>>,
    leak: T,
    direction: CycleDirection,
    omega_c: T,
    omega_h: T,
}

impl<T: Real> JointWorkHeatDistribution<T> {
    /// Atoms sorted by `(a, b)`.
    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    pub fn leak(&self) -> T {
        self.leak
    }

    pub fn direction(&self) -> CycleDirection {
        self.direction
    }

    pub fn omegas(&self) -> (T, T) {
        (self.omega_c, self.omega_h)
    }

    pub fn total_probability(&self) -> T {
        self.atoms.iter().map(|a| a.prob).sum()
    }

    /// Probability of the lattice point `(a, b)`, zero off the support.
    pub fn prob(&self, a: i64, b: i64) -> T {
        self.atoms
            .binary_search_by(|x| (x.a, x.b).cmp(&(a, b)))
            .map(|i| self.atoms[i].prob)
            .unwrap_or_else(|_| T::zero())
    }

    pub fn moments(&self) -> DistributionMoments<T> {
        let total = self.total_probability();
        let mean = |f: &dyn Fn(&Atom<T>) -> T| self.atoms.iter().map(|x| x.prob * f(x)).sum::<T>() / total;
        let mean_w = mean(&|x| x.w);
        let mean_qh = mean(&|x| x.q_h);
        let var_w = mean(&|x| (x.w - mean_w) * (x.w - mean_w));
        let var_qh = mean(&|x| (x.q_h - mean_qh) * (x.q_h - mean_qh));
        DistributionMoments {
            total,
            mean_w,
            var_w,
            mean_qh,
            var_qh,
            mean_qc: -mean_w - mean_qh,
            cv_power: var_w.sqrt() / mean_w.abs(),
        }
    }

    /// `sum p exp(-i v q_h - i u w)` over the retained atoms.
    pub fn characteristic(&self, u: T, v: T) -> Complex<T> {
        self.atoms
            .iter()
            .map(|x| Complex::new(T::zero(), -(v * x.q_h + u * x.w)).exp() * x.prob)
            .fold(Complex::new(T::zero(), T::zero()), |s, z| s + z)
    }

    pub fn is_adiabatic_support(&self) -> bool {
        self.atoms.iter().all(|x| x.a == -x.b)
    }
}

/// Transition matrices of both unitary strokes; they depend on the
/// frequencies and the driving time only, so sweeps over temperatures or
/// coupling can share them.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleStrokes<T> {
    pub compression: TransitionMatrix<T>,
    pub expansion: TransitionMatrix<T>,
}

impl<T: Real> CycleStrokes<T> {
    /// Propagates both ramps, refining the step until every trusted row has
    /// converged. Row leaks are not checked here; the distribution accounts
    /// for them through its weighted leak.
    pub fn propagate(omega_c: T, omega_h: T, tau_dri: T, cutoff: FockCutoff) -> Result<Self> {
        let opts = PropagationOptions {
            leak_threshold: T::infinity(),
            ..PropagationOptions::new(cutoff)
        };
        Ok(Self {
            compression: unitary_transition_matrix_with(&DrivingProtocol::compression(omega_c, omega_h, tau_dri), &opts)?,
            expansion: unitary_transition_matrix_with(&DrivingProtocol::expansion(omega_c, omega_h, tau_dri), &opts)?,
        })
    }

    pub fn for_config(config: &CycleConfig<T>, cutoff: FockCutoff) -> Result<Self> {
        config.validate()?;
        Self::propagate(config.omega_c, config.omega_h, config.tau_dri, cutoff)
    }

    /// Identity strokes, the quasi-static limit.
    pub fn adiabatic(cutoff: FockCutoff) -> Self {
        Self {
            compression: TransitionMatrix::identity(cutoff),
            expansion: TransitionMatrix::identity(cutoff),
        }
    }

    /// Strokes of the clockwise cycle: the compression of the reversed cycle
    /// undoes the forward expansion and vice versa.
    pub fn reversed(&self) -> Self {
        Self {
            compression: self.expansion.transpose(),
            expansion: self.compression.transpose(),
        }
    }

    pub fn cutoff(&self) -> FockCutoff {
        self.compression.cutoff()
    }
}

/// Options for distribution assembly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionOptions<T> {
    pub leak_threshold: T,
}

impl<T: Real> Default for DistributionOptions<T> {
    fn default() -> Self {
        Self {
            leak_threshold: T::lit(1e-6),
        }
    }
}

fn geometric_weights<T: Real>(x: T, n: usize) -> Vec<T> {
    let q = (-x).exp();
    (0..n).map(|k| (T::one() - q) * q.powi(k as i32)).collect()
}

/// Cutoff suggested when the thermal tails of both isochores overflow.
fn suggested_dim<T: Real>(inputs: &CycleInputs<T>, cutoff: FockCutoff, threshold: T) -> usize {
    let x = (inputs.beta_cold * inputs.omega_c).min(inputs.beta_hot * inputs.omega_h);
    let levels = ((threshold * T::lit(0.1)).ln() / -x).ceil().to_usize().unwrap_or(usize::MAX);
    (levels + levels / 2 + cutoff.guard).max(cutoff.dim + cutoff.guard)
}

/// Joint distribution from the two-measurement sum over `(n, m, i, j)`:
/// thermal weights at `(beta_cold, omega_c)` and `(beta_hot, omega_h)` times
/// the stroke transition probabilities. Only quantum numbers below the guard
/// band are kept; the rest is reported as leak.
pub fn joint_distribution_from_strokes<T: Real>(
    inputs: &CycleInputs<T>,
    strokes: &CycleStrokes<T>,
    direction: CycleDirection,
    opts: &DistributionOptions<T>,
) -> Result<JointWorkHeatDistribution<T>> {
    let cutoff = strokes.cutoff();
    if strokes.expansion.cutoff() != cutoff {
        return Err(invalid("strokes", "compression and expansion use different cutoffs"));
    }
    let t = cutoff.trusted();
    let pc = geometric_weights(inputs.beta_cold * inputs.omega_c, t);
    let ph = geometric_weights(inputs.beta_hot * inputs.omega_h, t);
    let (p1, p2) = (&strokes.compression, &strokes.expansion);

    // a = j - n and b = m - i both lie in -(t-1)..=(t-1)
    let off = t as i64 - 1;
    let side = 2 * t - 1;
    let mut grid = vec![T::zero(); side * side];
    let mut first: Vec<(usize, usize, T)> = Vec::new();
    for n in 0..t {
        for m in 0..t {
            let x = pc[n] * p1.get(n, m);
            if x > T::zero() {
                first.push((n, m, x));
            }
        }
    }
    let mut second: Vec<(usize, usize, T)> = Vec::new();
    for i in 0..t {
        for j in 0..t {
            let y = ph[i] * p2.get(i, j);
            if y > T::zero() {
                second.push((i, j, y));
            }
        }
    }
    for &(n, m, x) in &first {
        for &(i, j, y) in &second {
            let a = (j as i64 - n as i64 + off) as usize;
            let b = (m as i64 - i as i64 + off) as usize;
            grid[a * side + b] += x * y;
        }
    }

    let mut atoms = Vec::new();
    for ai in 0..side {
        for bi in 0..side {
            let prob = grid[ai * side + bi];
            if prob > T::zero() {
                let (a, b) = (ai as i64 - off, bi as i64 - off);
                atoms.push(Atom {
                    a,
                    b,
                    w: T::of_i64(a) * inputs.omega_c + T::of_i64(b) * inputs.omega_h,
                    q_h: -T::of_i64(b) * inputs.omega_h,
                    prob,
                });
            }
        }
    }
    let kept: T = atoms.iter().map(|x| x.prob).sum();
    let leak = (T::one() - kept).max(T::zero());
    if leak > opts.leak_threshold {
        return Err(Error::DistributionLeak {
            leak: leak.as_f64(),
            threshold: opts.leak_threshold.as_f64(),
            required: suggested_dim(inputs, cutoff, opts.leak_threshold),
        });
    }
    Ok(JointWorkHeatDistribution {
        atoms,
        leak,
        direction,
        omega_c: inputs.omega_c,
        omega_h: inputs.omega_h,
    })
}

/// Forward joint distribution of `(w, q_h)`.
pub fn build_joint_distribution<T: Real>(config: &CycleConfig<T>, cutoff: FockCutoff) -> Result<JointWorkHeatDistribution<T>> {
    let inputs = config.resolve()?;
    let strokes = CycleStrokes::for_config(config, cutoff)?;
    joint_distribution_from_strokes(&inputs, &strokes, CycleDirection::Forward, &DistributionOptions::default())
}

/// Distribution of the clockwise cycle, in its own `(w, q_h)` variables:
/// a forward trajectory `(a, b)` is mirrored by a reversed one at `(-a, -b)`.
pub fn build_reversed_distribution<T: Real>(config: &CycleConfig<T>, cutoff: FockCutoff) -> Result<JointWorkHeatDistribution<T>> {
    let inputs = config.resolve()?;
    let strokes = CycleStrokes::for_config(config, cutoff)?.reversed();
    joint_distribution_from_strokes(&inputs, &strokes, CycleDirection::Reversed, &DistributionOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adiabatic_strokes_give_diagonal_support() {
        let c = CycleConfig::<f64> { xi: 5.0, ..CycleConfig::reference() };
        let inputs = c.resolve().unwrap();
        let strokes = CycleStrokes::adiabatic(FockCutoff::new(80, 16));
        let d = joint_distribution_from_strokes(&inputs, &strokes, CycleDirection::Forward, &DistributionOptions::default())
            .unwrap();
        assert!(d.is_adiabatic_support());
        let m = d.moments();
        let w = (inputs.omega_h - inputs.omega_c) * (inputs.n_c - inputs.n_h);
        assert!((m.mean_w - w).abs() < 1e-9);
    }

    #[test]
    fn leak_error_suggests_larger_cutoff() {
        let c = CycleConfig::<f64> { xi: 8.0, ..CycleConfig::reference() };
        let inputs = c.resolve().unwrap();
        let strokes = CycleStrokes::adiabatic(FockCutoff::new(12, 4));
        match joint_distribution_from_strokes(&inputs, &strokes, CycleDirection::Forward, &DistributionOptions::default()) {
            Err(Error::DistributionLeak { required, .. }) => assert!(required > 12),
            other => panic!("expected leak error, got {other:?}"),
        }
    }
}
