//! Unitary frequency ramps of the cavity oscillator.
//!
//! The frequency follows `1/omega(t) = 1/omega_start + (t/tau)(1/omega_end - 1/omega_start)`.
//! Propagation happens in the instantaneous eigenbasis, where the only
//! remaining term is the squeezing coupling
//! `H_I(t) = -i g(t) (a^2 e^{-2i theta(t)} - a+^2 e^{2i theta(t)})`,
//! `g = omega_dot / (4 omega)`, `theta(t) = int_0^t omega`. Number-state
//! transition probabilities are unaffected by the frame change.

use super::FockCutoff;
use crate::error::{invalid, Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::{all_finite, Complex, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `omega_c -> omega_h`
    Compression,
    /// `omega_h -> omega_c`, the time reverse of the compression ramp
    Expansion,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivingProtocol<T> {
    pub omega_start: T,
    pub omega_end: T,
    pub tau: T,
    pub direction: Direction,
}

impl<T: Real> DrivingProtocol<T> {
    pub fn compression(omega_c: T, omega_h: T, tau: T) -> Self {
        Self {
            omega_start: omega_c,
            omega_end: omega_h,
            tau,
            direction: Direction::Compression,
        }
    }

    pub fn expansion(omega_c: T, omega_h: T, tau: T) -> Self {
        Self {
            omega_start: omega_h,
            omega_end: omega_c,
            tau,
            direction: Direction::Expansion,
        }
    }

    /// The same ramp run backwards.
    pub fn reversed(&self) -> Self {
        Self {
            omega_start: self.omega_end,
            omega_end: self.omega_start,
            tau: self.tau,
            direction: match self.direction {
                Direction::Compression => Direction::Expansion,
                Direction::Expansion => Direction::Compression,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !all_finite(&[self.omega_start, self.omega_end, self.tau]) {
            return Err(invalid("protocol", "non-finite parameter"));
        }
        if self.omega_start <= T::zero() || self.omega_end <= T::zero() {
            return Err(invalid("omega", "frequencies must be positive"));
        }
        if self.tau <= T::zero() {
            return Err(invalid("tau_dri", format!("must be positive, got {}", self.tau)));
        }
        let increasing = self.omega_end > self.omega_start;
        let ok = match self.direction {
            Direction::Compression => increasing || self.omega_end == self.omega_start,
            Direction::Expansion => !increasing,
        };
        if !ok {
            return Err(invalid("direction", "does not match the sign of the frequency change"));
        }
        Ok(())
    }

    fn alpha(&self) -> T {
        self.omega_start.recip()
    }

    fn kappa(&self) -> T {
        (self.omega_end.recip() - self.omega_start.recip()) / self.tau
    }

    pub fn omega_at(&self, t: T) -> T {
        (self.alpha() + self.kappa() * t).recip()
    }

    /// `theta(t) = int_0^t omega(s) ds`.
    pub fn phase_at(&self, t: T) -> T {
        let (a, k) = (self.alpha(), self.kappa());
        if k == T::zero() {
            t / a
        } else {
            (k * t / a).ln_1p() / k
        }
    }

    /// `omega_dot / (4 omega)`.
    pub fn coupling_at(&self, t: T) -> T {
        -self.kappa() * self.omega_at(t) / T::lit(4.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationOptions<T> {
    pub cutoff: FockCutoff,
    /// Stop halving the step once no trusted transition probability moves
    /// by more than this.
    pub tolerance: T,
    pub max_refinements: usize,
    /// Largest admissible guard-band mass of a checked row.
    pub leak_threshold: T,
    /// Rows checked for leak and convergence; `None` means the whole
    /// trusted band.
    pub checked_rows: Option<usize>,
}

impl<T: Real> PropagationOptions<T> {
    pub fn new(cutoff: FockCutoff) -> Self {
        Self {
            cutoff,
            tolerance: T::lit(1e-10),
            max_refinements: 10,
            leak_threshold: T::lit(1e-6),
            checked_rows: None,
        }
    }

    pub fn checked_rows(&self) -> usize {
        self.checked_rows.unwrap_or_else(|| self.cutoff.trusted())
    }
}

impl<T: Real> Default for PropagationOptions<T> {
    fn default() -> Self {
        Self::new(FockCutoff::default())
    }
}

/// `p[n][m] = |<m|U|n>|^2` on the truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix<T> {
    dim: usize,
    guard: usize,
    probs: Vec<T>,
    /// Probability of each row that ends up in the guard band.
    pub row_leak: Vec<T>,
    pub steps: usize,
    /// Largest probability change at the last step halving.
    pub last_change: T,
    /// `max |U+ U - 1|`.
    pub unitarity_error: T,
}

impl<T: Real> TransitionMatrix<T> {
    /// Builds a matrix directly from row-major probabilities.
    pub fn from_probabilities(dim: usize, guard: usize, probs: Vec<T>) -> Self {
        assert_eq!(probs.len(), dim * dim, "probability table has the wrong size");
        let mut tm = Self {
            dim,
            guard,
            probs,
            row_leak: Vec::new(),
            steps: 0,
            last_change: T::zero(),
            unitarity_error: T::zero(),
        };
        tm.row_leak = tm.guard_mass();
        tm
    }

    pub fn identity(cutoff: FockCutoff) -> Self {
        let d = cutoff.dim;
        let probs = (0..d * d).map(|i| if i / d == i % d { T::one() } else { T::zero() }).collect();
        Self::from_probabilities(d, cutoff.guard, probs)
    }

    fn guard_mass(&self) -> Vec<T> {
        let start = self.trusted();
        (0..self.dim).map(|n| self.row(n)[start..].iter().copied().sum()).collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoff(&self) -> FockCutoff {
        FockCutoff::new(self.dim, self.guard)
    }

    pub fn trusted(&self) -> usize {
        self.dim.saturating_sub(self.guard)
    }

    #[inline]
    pub fn get(&self, n: usize, m: usize) -> T {
        self.probs[n * self.dim + m]
    }

    pub fn row(&self, n: usize) -> &[T] {
        &self.probs[n * self.dim..(n + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.probs
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let probs = (0..d * d).map(|i| self.probs[(i % d) * d + i / d]).collect();
        let mut t = Self::from_probabilities(d, self.guard, probs);
        t.steps = self.steps;
        t.last_change = self.last_change;
        t.unitarity_error = self.unitarity_error;
        t
    }

    /// `sum_m p[n][m] (m + 1/2)`.
    pub fn final_excitation(&self, n: usize) -> T {
        self.row(n)
            .iter()
            .enumerate()
            .map(|(m, &p)| p * (T::of_usize(m) + T::half()))
            .sum()
    }

    /// Largest `max(|row sum - 1|, |column sum - 1|)` restricted to the first
    /// `rows` indices.
    pub fn stochasticity_error(&self, rows: usize) -> T {
        let mut worst = T::zero();
        for k in 0..rows.min(self.dim) {
            let r: T = self.row(k).iter().copied().sum();
            let c: T = (0..self.dim).map(|n| self.get(n, k)).sum();
            worst = worst.max((r - T::one()).abs()).max((c - T::one()).abs());
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self, rows: usize) -> T {
        let mut worst = T::zero();
        for n in 0..rows.min(self.dim) {
            for (a, b) in self.row(n).iter().zip(other.row(n)) {
                worst = worst.max((*a - *b).abs());
            }
        }
        worst
    }
}

/// `sqrt((n+1)(n+2))`, the matrix element `<n|a^2|n+2>`.
fn pair_amplitudes<T: Real>(dim: usize) -> Vec<T> {
    (0..dim.saturating_sub(2))
        .map(|n| (T::of_usize(n + 1) * T::of_usize(n + 2)).sqrt())
        .collect()
}

/// Diagonal of the truncated commutator `[a^2, a+^2]`.
fn commutator_diagonal<T: Real>(dim: usize) -> Vec<T> {
    (0..dim)
        .map(|n| {
            let up = if n + 2 < dim { T::of_usize((n + 1) * (n + 2)) } else { T::zero() };
            up - T::of_usize(n * n.saturating_sub(1))
        })
        .collect()
}

/// Banded generator `x a^2 + y a+^2 + z C`.
struct Banded<T> {
    x: Complex<T>,
    y: Complex<T>,
    z: Complex<T>,
}

impl<T: Real> Banded<T> {
    fn apply(&self, s: &[T], c: &[T], v: &[Complex<T>], out: &mut [Complex<T>]) {
        let d = v.len();
        for n in 0..d {
            let mut acc = self.z * v[n] * c[n];
            if n + 2 < d {
                acc += self.x * v[n + 2] * s[n];
            }
            if n >= 2 {
                acc += self.y * v[n - 2] * s[n - 2];
            }
            out[n] = acc;
        }
    }

    fn norm_bound(&self, s: &[T], c: &[T]) -> T {
        let smax = s.last().copied().unwrap_or_else(T::zero);
        let cmax = c.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        (self.x.norm() + self.y.norm()) * smax + self.z.norm() * cmax
    }
}

/// `v <- exp(Omega) v` by Taylor series, splitting `Omega` when its norm
/// bound exceeds one half.
fn apply_exp<T: Real>(gen: &Banded<T>, s: &[T], c: &[T], v: &mut [Complex<T>], term: &mut [Complex<T>], next: &mut [Complex<T>]) {
    let bound = gen.norm_bound(s, c);
    let pieces = (bound / T::half()).ceil().to_usize().unwrap_or(1).max(1);
    let scale = T::of_usize(pieces).recip();
    let piece = Banded {
        x: gen.x * scale,
        y: gen.y * scale,
        z: gen.z * scale,
    };
    let tiny = T::epsilon() * T::lit(1e-3);
    for _ in 0..pieces {
        term.copy_from_slice(v);
        for k in 1..64 {
            piece.apply(s, c, term, next);
            let inv = T::of_usize(k).recip();
            let mut largest = T::zero();
            for (t, nx) in term.iter_mut().zip(next.iter()) {
                *t = nx * inv;
                largest = largest.max(t.norm_sqr());
            }
            for (vi, t) in v.iter_mut().zip(term.iter()) {
                *vi += *t;
            }
            if largest.sqrt() < tiny {
                break;
            }
        }
    }
}

/// Columns `U|n>` after propagating with `steps` fourth-order Magnus steps.
fn propagate<T: Real>(protocol: &DrivingProtocol<T>, dim: usize, steps: usize) -> Vec<Vec<Complex<T>>> {
    let s = pair_amplitudes::<T>(dim);
    let c = commutator_diagonal::<T>(dim);
    let h = protocol.tau / T::of_usize(steps);
    let r3 = T::lit(3.0).sqrt();
    let c1 = T::half() - r3 / T::lit(6.0);
    let c2 = T::half() + r3 / T::lit(6.0);
    let coeffs = |t: T| {
        let g = protocol.coupling_at(t);
        let ph = Complex::new(T::zero(), -T::two() * protocol.phase_at(t)).exp();
        // -i H_I = alpha a^2 + beta a+^2
        (ph * (-g), ph.conj() * g)
    };
    let mut cols: Vec<Vec<Complex<T>>> = (0..dim)
        .map(|n| {
            let mut v = vec![Complex::new(T::zero(), T::zero()); dim];
            v[n] = Complex::new(T::one(), T::zero());
            v
        })
        .collect();
    let mut term = vec![Complex::new(T::zero(), T::zero()); dim];
    let mut next = term.clone();
    for k in 0..steps {
        let t = T::of_usize(k) * h;
        let (a1, b1) = coeffs(t + c1 * h);
        let (a2, b2) = coeffs(t + c2 * h);
        let gen = Banded {
            x: (a1 + a2) * (h * T::half()),
            y: (b1 + b2) * (h * T::half()),
            z: (a2 * b1 - a1 * b2) * (r3 / T::lit(12.0) * h * h),
        };
        for col in cols.iter_mut() {
            apply_exp(&gen, &s, &c, col, &mut term, &mut next);
        }
    }
    cols
}

fn initial_steps<T: Real>(protocol: &DrivingProtocol<T>, dim: usize) -> usize {
    let theta = protocol.phase_at(protocol.tau).abs();
    let omega_max = protocol.omega_start.max(protocol.omega_end);
    let g_max = (protocol.kappa() * omega_max).abs() / T::lit(4.0);
    let by_phase = (T::two() * theta / T::lit(0.2)).ceil();
    let by_coupling = (protocol.tau * g_max * T::of_usize(2 * dim) / T::half()).ceil();
    by_phase.max(by_coupling).to_usize().unwrap_or(usize::MAX).max(16)
}

fn to_matrix<T: Real>(cols: &[Vec<Complex<T>>], cutoff: FockCutoff) -> TransitionMatrix<T> {
    let d = cutoff.dim;
    let probs = (0..d * d).map(|i| cols[i / d][i % d].norm_sqr()).collect();
    let mut tm = TransitionMatrix::from_probabilities(d, cutoff.guard, probs);
    let u = CMatrix::from_fn(d, |r, c| cols[c][r]);
    tm.unitarity_error = u.unitarity_error();
    tm
}

/// Transition probabilities of a ramp with default propagation options on
/// the given cutoff.
pub fn unitary_transition_matrix<T: Real>(protocol: &DrivingProtocol<T>, cutoff: FockCutoff) -> Result<TransitionMatrix<T>> {
    unitary_transition_matrix_with(protocol, &PropagationOptions::new(cutoff))
}

/// Transition probabilities of a ramp, halving the Magnus step until the
/// checked rows stop changing.
pub fn unitary_transition_matrix_with<T: Real>(
    protocol: &DrivingProtocol<T>,
    opts: &PropagationOptions<T>,
) -> Result<TransitionMatrix<T>> {
    protocol.validate()?;
    let cutoff = opts.cutoff;
    if cutoff.dim < 4 || cutoff.guard == 0 || cutoff.guard >= cutoff.dim {
        return Err(invalid("dim", "need dim >= 4 and 0 < guard < dim"));
    }
    let rows = opts.checked_rows();
    if rows == 0 || rows > cutoff.trusted() {
        return Err(invalid("checked_rows", format!("must lie in 1..={}", cutoff.trusted())));
    }
    let mut steps = initial_steps(protocol, cutoff.dim);
    let mut prev = to_matrix(&propagate(protocol, cutoff.dim, steps), cutoff);
    let mut change = T::infinity();
    for _ in 0..opts.max_refinements {
        steps *= 2;
        let cur = to_matrix(&propagate(protocol, cutoff.dim, steps), cutoff);
        change = cur.max_abs_diff(&prev, rows);
        prev = cur;
        if change < opts.tolerance {
            break;
        }
    }
    if !(change < opts.tolerance) {
        return Err(Error::PropagationNotConverged { change: change.as_f64() });
    }
    prev.steps = steps;
    prev.last_change = change;
    let worst = (0..rows).fold(0, |w, n| if prev.row_leak[n] > prev.row_leak[w] { n } else { w });
    if prev.row_leak[worst] > opts.leak_threshold {
        return Err(Error::TruncationLeak {
            row: worst,
            leak: prev.row_leak[worst].as_f64(),
            threshold: opts.leak_threshold.as_f64(),
        });
    }
    Ok(prev)
}

/// Nonadiabatic factor
/// `phi = 1 + [1 - cos(sqrt(zeta - 1) ln(omega_h/omega_c))] / (zeta - 1)`,
/// `zeta = [2 tau omega_c omega_h / (omega_h - omega_c)]^2`, continued to
/// `zeta <= 1`.
pub fn nonadiabatic_factor_analytic<T: Real>(tau_dri: T, omega_c: T, omega_h: T) -> Result<T> {
    if !all_finite(&[tau_dri, omega_c, omega_h]) {
        return Err(invalid("phi", "non-finite parameter"));
    }
    if tau_dri <= T::zero() {
        return Err(invalid("tau_dri", format!("must be positive, got {tau_dri}")));
    }
    if omega_c <= T::zero() || omega_h <= T::zero() {
        return Err(invalid("omega", "frequencies must be positive"));
    }
    if omega_c == omega_h {
        return Err(invalid("omega_h", "must differ from omega_c"));
    }
    let zeta = (T::two() * tau_dri * omega_c * omega_h / (omega_h - omega_c)).powi(2);
    let l = (omega_h / omega_c).ln();
    let d = zeta - T::one();
    // below this the series of (1 - cos(x))/x^2 is more accurate than the quotient
    let x2 = d * l * l;
    if x2.abs() < T::lit(1e-4) {
        // (1 - cos x)/d = l^2 (1/2 - x^2/24 + x^4/720)
        let series = T::half() - x2 / T::lit(24.0) + x2 * x2 / T::lit(720.0);
        return Ok(T::one() + l * l * series);
    }
    Ok(if d > T::zero() {
        T::one() + (T::one() - (d.sqrt() * l).cos()) / d
    } else {
        let e = -d;
        T::one() + ((e.sqrt() * l).cosh() - T::one()) / e
    })
}

/// Nonadiabatic factor from the propagated compression stroke: the
/// energy amplification `sum_m p[n][m](m + 1/2) / (n + 1/2)` averaged over a
/// thermal ensemble with `beta omega_c = 2`.
pub fn nonadiabatic_factor_numeric<T: Real>(tau_dri: T, omega_c: T, omega_h: T, cutoff: FockCutoff) -> Result<T> {
    nonadiabatic_factor_analytic(tau_dri, omega_c, omega_h)?;
    let q = (-T::two()).exp();
    let weights: Vec<T> = (0..cutoff.dim)
        .map(|n| (T::one() - q) * q.powi(n as i32))
        .take_while(|w| *w > T::lit(1e-10))
        .collect();
    let opts = PropagationOptions {
        checked_rows: Some(weights.len().min(cutoff.trusted()).max(1)),
        ..PropagationOptions::new(cutoff)
    };
    let protocol = DrivingProtocol::compression(omega_c, omega_h, tau_dri);
    let tm = unitary_transition_matrix_with(&protocol, &opts)?;
    let (mut num, mut den) = (T::zero(), T::zero());
    for (n, w) in weights.iter().enumerate().take(opts.checked_rows()) {
        num += *w * tm.final_excitation(n);
        den += *w * (T::of_usize(n) + T::half());
    }
    Ok(num / den)
}
