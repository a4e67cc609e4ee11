//! Coarse-grained master equation of the cavity driven by a stream of atoms:
//!
//! `drho/dt = g r1 (a+ rho a - {a a+, rho}/2) + g r2 (a rho a+ - {a+ a, rho}/2)`
//!
//! with `g = (gamma tau)^2`. The generator only couples `rho[n][m]` to
//! `rho[n-1][m-1]` and `rho[n+1][m+1]`, so each coherence order `m - n` evolves
//! independently.

use super::{FockCutoff, FockOperator};
use crate::error::{invalid, Error, Result};
use crate::linalg::{solve, CMatrix};
use crate::ode::{Control, DormandPrince, Outcome};
use crate::reservoir::EffectiveReservoir;
use crate::scalar::{Complex, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MasterEquation<T> {
    pub r1: T,
    pub r2: T,
    /// `(gamma tau)^2`
    pub prefactor: T,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState<T> {
    Vacuum,
    MaximallyMixed,
    Thermal { beta_omega: T },
    Custom(FockOperator<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateOptions<T> {
    pub gamma_tau: T,
    pub dim: usize,
    pub initial: InitialState<T>,
    /// Stop once `||drho/dt||_F / (gamma tau)^2` falls below this.
    pub residual_tol: T,
    pub max_steps: usize,
    /// Largest admissible thermal mass above the cutoff.
    pub tail_threshold: T,
}

impl<T: Real> Default for SteadyStateOptions<T> {
    fn default() -> Self {
        Self {
            gamma_tau: T::lit(0.05),
            dim: FockCutoff::default().dim,
            initial: InitialState::MaximallyMixed,
            residual_tol: T::lit(1e-10),
            max_steps: 2_000_000,
            tail_threshold: T::lit(1e-12),
        }
    }
}

/// Converged steady state together with what the integration observed.
#[derive(Debug, Clone)]
pub struct SteadyState<T> {
    pub state: FockOperator<T>,
    /// Final `||drho/dt||_F / (gamma tau)^2`.
    pub residual: T,
    /// Physical time at which the residual criterion was met.
    pub time: T,
    pub steps: usize,
    pub max_trace_error: T,
    pub max_hermiticity_error: T,
    pub min_population: T,
}

impl<T: Real> MasterEquation<T> {
    pub fn new(reservoir: &EffectiveReservoir<T>, gamma_tau: T, dim: usize) -> Self {
        Self {
            r1: reservoir.r1,
            r2: reservoir.r2,
            prefactor: gamma_tau * gamma_tau,
            dim,
        }
    }

    #[inline]
    fn c_up(&self, n: usize) -> T {
        // diagonal of a a+ in the truncated space
        if n + 1 < self.dim {
            T::of_usize(n + 1)
        } else {
            T::zero()
        }
    }

    /// Generator divided by the prefactor, on a real interleaved
    /// `(re, im)` row-major layout.
    fn apply_scaled(&self, y: &[T], out: &mut [T]) {
        let d = self.dim;
        let half = T::half();
        for n in 0..d {
            for m in 0..d {
                let idx = 2 * (n * d + m);
                let decay = half * (self.r1 * (self.c_up(n) + self.c_up(m)) + self.r2 * T::of_usize(n + m));
                let mut re = -decay * y[idx];
                let mut im = -decay * y[idx + 1];
                if n > 0 && m > 0 {
                    let w = self.r1 * (T::of_usize(n) * T::of_usize(m)).sqrt();
                    let j = 2 * ((n - 1) * d + (m - 1));
                    re += w * y[j];
                    im += w * y[j + 1];
                }
                if n + 1 < d && m + 1 < d {
                    let w = self.r2 * (T::of_usize(n + 1) * T::of_usize(m + 1)).sqrt();
                    let j = 2 * ((n + 1) * d + (m + 1));
                    re += w * y[j];
                    im += w * y[j + 1];
                }
                out[idx] = re;
                out[idx + 1] = im;
            }
        }
    }

    /// `drho/dt` for a density matrix.
    pub fn apply(&self, rho: &FockOperator<T>) -> FockOperator<T> {
        let y = flatten(rho.matrix());
        let mut out = vec![T::zero(); y.len()];
        self.apply_scaled(&y, &mut out);
        for v in out.iter_mut() {
            *v *= self.prefactor;
        }
        FockOperator::from_matrix(unflatten(&out, self.dim))
    }

    /// Integrates from `initial`, calling `observer(t, rho, residual)` after
    /// every accepted step; `residual` is `||drho/dt||_F / (gamma tau)^2`.
    ///
    /// Time is integrated in units of `1 / (gamma tau)^2`; `t` passed to the
    /// observer is physical time.
    pub fn evolve<O>(&self, initial: &FockOperator<T>, max_steps: usize, mut observer: O) -> Outcome<T>
    where
        O: FnMut(T, &FockOperator<T>, T) -> Control,
    {
        assert_eq!(initial.dim(), self.dim, "initial state has the wrong dimension");
        let total_rate = (self.r1 + self.r2) * T::of_usize(2 * self.dim);
        let dp = DormandPrince {
            rtol: T::lit(1e-10),
            atol: T::lit(1e-14),
            h_init: T::lit(1e-2) / total_rate.max(T::one()),
            h_max: T::infinity(),
            max_steps,
        };
        let prefactor = self.prefactor;
        dp.integrate(
            T::zero(),
            flatten(initial.matrix()),
            |_, y, out| self.apply_scaled(y, out),
            |info| {
                let residual = info.dydt.iter().map(|v| *v * *v).sum::<T>().sqrt();
                let rho = FockOperator::from_matrix(unflatten(info.y, self.dim));
                observer(info.t / prefactor, &rho, residual)
            },
        )
    }
}

fn flatten<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    m.as_slice().iter().flat_map(|z| [z.re, z.im]).collect()
}

fn unflatten<T: Real>(y: &[T], dim: usize) -> CMatrix<T> {
    CMatrix::from_fn(dim, |r, c| {
        let i = 2 * (r * dim + c);
        Complex::new(y[i], y[i + 1])
    })
}

/// Smallest cutoff whose thermal tail `q^dim` with `q = r1/r2` is below
/// `threshold`.
pub fn required_dim<T: Real>(r1: T, r2: T, threshold: T) -> usize {
    let q = r1 / r2;
    if q <= T::zero() {
        return 1;
    }
    (threshold.ln() / q.ln()).ceil().to_usize().unwrap_or(usize::MAX).max(1)
}

fn check_tail<T: Real>(r1: T, r2: T, dim: usize, threshold: T) -> Result<()> {
    let q = r1 / r2;
    let tail = q.powi(dim as i32);
    if tail >= threshold {
        return Err(Error::CutoffTooSmall {
            dim,
            required: required_dim(r1, r2, threshold),
            tail: tail.as_f64(),
            threshold: threshold.as_f64(),
        });
    }
    Ok(())
}

/// Steady state of the master equation by time integration, with the
/// default options apart from `gamma_tau` and `dim`.
pub fn lindblad_steady_state<T: Real>(
    reservoir: &EffectiveReservoir<T>,
    gamma_tau: T,
    dim: usize,
) -> Result<SteadyState<T>> {
    let opts = SteadyStateOptions {
        gamma_tau,
        dim,
        ..SteadyStateOptions::default()
    };
    solve_steady_state(reservoir, &opts)
}

/// Steady state of the master equation by time integration.
pub fn solve_steady_state<T: Real>(
    reservoir: &EffectiveReservoir<T>,
    opts: &SteadyStateOptions<T>,
) -> Result<SteadyState<T>> {
    if opts.dim < 2 {
        return Err(invalid("dim", "need at least two Fock levels"));
    }
    if opts.gamma_tau <= T::zero() || !opts.gamma_tau.is_finite() {
        return Err(invalid("gamma_tau", "must be positive and finite"));
    }
    if reservoir.r1 < T::zero() || reservoir.r2 <= T::zero() {
        return Err(invalid("rates", "need r1 >= 0 and r2 > 0"));
    }
    check_tail(reservoir.r1, reservoir.r2, opts.dim, opts.tail_threshold)?;
    let eq = MasterEquation::new(reservoir, opts.gamma_tau, opts.dim);
    let initial = match &opts.initial {
        InitialState::Vacuum => FockOperator::vacuum(opts.dim),
        InitialState::MaximallyMixed => FockOperator::maximally_mixed(opts.dim),
        InitialState::Thermal { beta_omega } => {
            let t = FockOperator::thermal(*beta_omega, opts.dim);
            let tr = t.trace();
            let m = CMatrix::from_fn(opts.dim, |r, c| t.matrix()[(r, c)] / tr);
            FockOperator::from_matrix(m)
        }
        InitialState::Custom(rho) => {
            if rho.dim() != opts.dim {
                return Err(invalid("initial", "dimension does not match dim"));
            }
            rho.clone()
        }
    };
    let mut max_trace_error = T::zero();
    let mut max_herm = T::zero();
    let mut min_pop = T::infinity();
    let mut last_residual = T::infinity();
    let mut hit_time = T::zero();
    let out = eq.evolve(&initial, opts.max_steps, |t, rho, residual| {
        max_trace_error = max_trace_error.max((rho.trace() - T::one()).abs());
        max_herm = max_herm.max(rho.hermiticity_error());
        for p in rho.populations() {
            min_pop = min_pop.min(p);
        }
        last_residual = residual;
        hit_time = t;
        if residual < opts.residual_tol {
            Control::Stop
        } else {
            Control::Continue
        }
    });
    if !out.stopped_by_observer {
        return Err(Error::NotConverged {
            steps: out.accepted,
            residual: last_residual.as_f64(),
        });
    }
    Ok(SteadyState {
        state: FockOperator::from_matrix(unflatten(&out.y, opts.dim)),
        residual: last_residual,
        time: hit_time,
        steps: out.accepted,
        max_trace_error,
        max_hermiticity_error: max_herm,
        min_population: min_pop,
    })
}

/// Steady state from the kernel of the generator, solved block by block in
/// the coherence order.
///
/// The population block gets its last equation replaced by the trace
/// condition; every coherence block must be non-singular, so its only
/// solution is zero.
pub fn null_space_steady_state<T: Real>(r1: T, r2: T, dim: usize) -> Result<FockOperator<T>> {
    if dim < 2 {
        return Err(invalid("dim", "need at least two Fock levels"));
    }
    let eq = MasterEquation {
        r1,
        r2,
        prefactor: T::one(),
        dim,
    };
    let half = T::half();
    let block = |k: usize| {
        let size = dim - k;
        let mut a = vec![T::zero(); size * size];
        for i in 0..size {
            let (n, m) = (i, i + k);
            a[i * size + i] = -half * (r1 * (eq.c_up(n) + eq.c_up(m)) + r2 * T::of_usize(n + m));
            if i > 0 {
                a[i * size + i - 1] = r1 * (T::of_usize(n) * T::of_usize(m)).sqrt();
            }
            if i + 1 < size {
                a[i * size + i + 1] = r2 * (T::of_usize(n + 1) * T::of_usize(m + 1)).sqrt();
            }
        }
        a
    };

    let mut pop_block = block(0);
    for c in 0..dim {
        pop_block[(dim - 1) * dim + c] = T::one();
    }
    let mut rhs = vec![T::zero(); dim];
    rhs[dim - 1] = T::one();
    let (pops, _) = solve(pop_block, rhs).ok_or_else(|| invalid("rates", "population generator is singular"))?;

    let scale = (r1 + r2) * T::of_usize(dim);
    for k in 1..dim {
        let size = dim - k;
        let singular = match solve(block(k), vec![T::zero(); size]) {
            None => true,
            Some((_, pivot)) => pivot <= T::epsilon() * scale,
        };
        if singular {
            return Err(invalid("rates", format!("coherence block of order {k} has a non-trivial kernel")));
        }
    }
    Ok(FockOperator::from_matrix(CMatrix::from_diagonal(&pops)))
}

/// Geometric steady state `(1 - q) q^{a+ a}` with `q = exp(-beta_eff omega)`,
/// restricted to `dim` levels.
pub fn analytic_steady_state<T: Real>(beta_eff_omega: T, dim: usize) -> FockOperator<T> {
    FockOperator::thermal(beta_eff_omega, dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reservoir(r1: f64, r2: f64) -> EffectiveReservoir<f64> {
        let beta_eff = -(r1 / r2).ln();
        EffectiveReservoir {
            r1,
            r2,
            beta_eff,
            omega: 1.0,
            n_occ: 0.5 / (beta_eff / 2.0).tanh(),
        }
    }

    #[test]
    fn generator_preserves_trace() {
        let eq = MasterEquation {
            r1: 0.3,
            r2: 0.7,
            prefactor: 0.01,
            dim: 12,
        };
        let amps: Vec<Complex<f64>> = (0..12).map(|n| Complex::new(1.0 / (1.0 + n as f64), 0.1 * n as f64)).collect();
        let rho = FockOperator::pure(&amps);
        let d = eq.apply(&rho);
        assert!(d.trace().abs() < 1e-15);
        assert!(d.hermiticity_error() < 1e-15);
    }

    #[test]
    fn pure_decay_relaxes_to_vacuum() {
        let res = EffectiveReservoir {
            r1: 0.0,
            r2: 1.0,
            beta_eff: f64::INFINITY,
            omega: 1.0,
            n_occ: 0.5,
        };
        let ss = lindblad_steady_state(&res, 0.05, 16).unwrap();
        let vac = FockOperator::<f64>::vacuum(16);
        assert!(ss.state.trace_distance(&vac) < 1e-9);
        let ns = null_space_steady_state(0.0, 1.0, 16).unwrap();
        assert!(ns.trace_distance(&vac) < 1e-14);
    }

    #[test]
    fn diagonal_state_stays_diagonal() {
        let res = reservoir(0.2, 0.8);
        let eq = MasterEquation::new(&res, 0.05, 20);
        let init = FockOperator::maximally_mixed(20);
        let mut worst = 0.0f64;
        eq.evolve(&init, 300, |_, rho, _| {
            worst = worst.max(rho.max_coherence());
            Control::Continue
        });
        assert_eq!(worst, 0.0);
    }

    #[test]
    fn null_space_matches_geometric_state() {
        let res = reservoir(0.25, 0.75);
        let ns = null_space_steady_state(res.r1, res.r2, 40).unwrap();
        // truncated geometric state renormalized over the 40 levels
        let q = res.r1 / res.r2;
        let norm: f64 = (0..40).map(|n| q.powi(n)).sum();
        for (n, p) in ns.populations().iter().enumerate() {
            assert!((p - q.powi(n as i32) / norm).abs() < 1e-14);
        }
    }

    #[test]
    fn undersized_cutoff_names_required_dim() {
        let res = reservoir(0.45, 0.55);
        match lindblad_steady_state(&res, 0.05, 10) {
            Err(Error::CutoffTooSmall { required, dim, .. }) => {
                assert_eq!(dim, 10);
                assert_eq!(required, required_dim(0.45, 0.55, 1e-12));
                assert!((0.45f64 / 0.55).powi(required as i32) < 1e-12);
            }
            other => panic!("expected cutoff error, got {other:?}"),
        }
    }

    #[test]
    fn step_budget_exhaustion_is_an_error() {
        let res = reservoir(0.2, 0.8);
        let opts = SteadyStateOptions {
            dim: 24,
            max_steps: 5,
            ..SteadyStateOptions::default()
        };
        assert!(matches!(solve_steady_state(&res, &opts), Err(Error::NotConverged { .. })));
    }
}
