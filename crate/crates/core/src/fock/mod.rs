//! Truncated Fock-space numerics for the cavity mode.

mod lindblad;
mod unitary;

pub use lindblad::{
    analytic_steady_state, lindblad_steady_state, null_space_steady_state, required_dim, solve_steady_state, InitialState,
    MasterEquation, SteadyState, SteadyStateOptions,
};
pub use unitary::{
    nonadiabatic_factor_analytic, nonadiabatic_factor_numeric, unitary_transition_matrix, unitary_transition_matrix_with, Direction,
    DrivingProtocol, PropagationOptions, TransitionMatrix,
};

use crate::linalg::{trace_distance, CMatrix};
use crate::scalar::{Complex, Real};

/// Number-basis cutoff and the width of the top band treated as untrusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockCutoff {
    pub dim: usize,
    pub guard: usize,
}

impl Default for FockCutoff {
    fn default() -> Self {
        Self { dim: 64, guard: 16 }
    }
}

impl FockCutoff {
    pub fn new(dim: usize, guard: usize) -> Self {
        Self { dim, guard }
    }

    /// Levels `0..trusted()` lie below the guard band.
    pub fn trusted(&self) -> usize {
        self.dim.saturating_sub(self.guard)
    }
}

/// Dense operator on the first `dim` number states.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator<T> {
    entries: CMatrix<T>,
}

impl<T: Real> FockOperator<T> {
    pub fn from_matrix(entries: CMatrix<T>) -> Self {
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.entries
    }

    pub fn vacuum(dim: usize) -> Self {
        let mut m = CMatrix::zeros(dim);
        m[(0, 0)] = Complex::new(T::one(), T::zero());
        Self { entries: m }
    }

    /// `(1 - q) q^n` on the diagonal, `q = exp(-beta omega)`, without
    /// renormalizing the truncated tail.
    pub fn thermal(beta_omega: T, dim: usize) -> Self {
        let q = (-beta_omega).exp();
        let diag: Vec<T> = (0..dim).map(|n| (T::one() - q) * q.powi(n as i32)).collect();
        Self {
            entries: CMatrix::from_diagonal(&diag),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let p = T::of_usize(dim).recip();
        Self {
            entries: CMatrix::from_diagonal(&vec![p; dim]),
        }
    }

    /// Pure state `|psi><psi|` for an (unnormalized) amplitude vector.
    pub fn pure(amplitudes: &[Complex<T>]) -> Self {
        let norm: T = amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        let v: Vec<Complex<T>> = amplitudes.iter().map(|a| a / norm).collect();
        Self {
            entries: CMatrix::from_fn(v.len(), |r, c| v[r] * v[c].conj()),
        }
    }

    pub fn populations(&self) -> Vec<T> {
        self.entries.diagonal().into_iter().map(|z| z.re).collect()
    }

    pub fn trace(&self) -> T {
        self.entries.trace().re
    }

    pub fn hermiticity_error(&self) -> T {
        self.entries.hermiticity_error()
    }

    pub fn min_eigenvalue(&self) -> T {
        self.entries.hermitian_eigenvalues()[0]
    }

    /// Largest modulus of an off-diagonal element.
    pub fn max_coherence(&self) -> T {
        let n = self.dim();
        let mut m = T::zero();
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    m = m.max(self.entries[(r, c)].norm());
                }
            }
        }
        m
    }

    pub fn trace_distance(&self, other: &Self) -> T {
        trace_distance(&self.entries, &other.entries)
    }

    /// `<a^dagger a>`.
    pub fn mean_number(&self) -> T {
        self.populations()
            .iter()
            .enumerate()
            .map(|(n, &p)| T::of_usize(n) * p)
            .sum()
    }
}
