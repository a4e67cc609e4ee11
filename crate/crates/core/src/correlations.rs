//! Thermal state of two XY-coupled qubits, its concurrence and its quantum
//! discord.
//!
//! The pair Hamiltonian is `H = (omega/2)(sz1 + sz2) + xi (s1+ s2- + s1- s2+)`.
//! In the product basis `|gg>, |ge>, |eg>, |ee>` the Gibbs state is an X-state
//! with populations `rho_g, rho_d, rho_d, rho_e` and a real coherence
//! `rho_nd` between `|ge>` and `|eg>`. Entropies are measured in bits.

use crate::error::{invalid, Error, Result};
use crate::linalg::symmetric_eigenvalues;
use crate::scalar::{all_finite, entropy_bits, Real};

/// Gibbs state of the correlated atom pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitThermalState<T> {
    pub beta: T,
    pub omega: T,
    pub xi: T,
    /// Partition function `2[cosh(beta omega) + cosh(beta xi)]`.
    pub partition: T,
    /// `<gg|rho|gg>`
    pub rho_g: T,
    /// `<ee|rho|ee>`
    pub rho_e: T,
    /// `<eg|rho|eg> = <ge|rho|ge>`
    pub rho_d: T,
    /// `<eg|rho|ge>`, non-positive for `xi >= 0`.
    pub rho_nd: T,
}

/// Discord of a [`TwoQubitThermalState`] for a measurement on the second atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordResult<T> {
    /// Minimum over the measurement basis, in bits.
    pub discord: T,
    pub classical_correlations: T,
    pub mutual_information: T,
    /// Basis angle at which the minimum is attained.
    pub optimal_theta: T,
    pub phi_plus: T,
    pub phi_minus: T,
    /// Value of the closed form evaluated at `theta = pi/4`.
    pub closed_form: T,
    /// Minimum found by the explicit basis sweep.
    pub sweep_minimum: T,
}

/// Builds the Gibbs state `exp(-beta H)/Z`.
pub fn thermal_state<T: Real>(beta: T, omega: T, xi: T) -> Result<TwoQubitThermalState<T>> {
    if !all_finite(&[beta, omega, xi]) {
        return Err(invalid("beta/omega/xi", "must be finite"));
    }
    if beta <= T::zero() {
        return Err(invalid("beta", format!("must be positive, got {beta}")));
    }
    if omega <= T::zero() {
        return Err(invalid("omega", format!("must be positive, got {omega}")));
    }
    if xi < T::zero() {
        return Err(invalid("xi", format!("must be non-negative, got {xi}")));
    }
    let bw = beta * omega;
    let bx = beta * xi;
    let partition = T::two() * (bw.cosh() + bx.cosh());
    if !partition.is_finite() {
        return Err(invalid("beta", "Boltzmann weights overflow"));
    }
    Ok(TwoQubitThermalState {
        beta,
        omega,
        xi,
        partition,
        rho_g: bw.exp() / partition,
        rho_e: (-bw).exp() / partition,
        rho_d: bx.cosh() / partition,
        rho_nd: -bx.sinh() / partition,
    })
}

impl<T: Real> TwoQubitThermalState<T> {
    /// Explicit 4x4 density matrix in the basis `|gg>, |ge>, |eg>, |ee>`
    /// (atom 1 is the left factor).
    pub fn matrix(&self) -> [[T; 4]; 4] {
        let z = T::zero();
        [
            [self.rho_g, z, z, z],
            [z, self.rho_d, self.rho_nd, z],
            [z, self.rho_nd, self.rho_d, z],
            [z, z, z, self.rho_e],
        ]
    }

    /// Reduced state of either atom (the pair is symmetric): diagonal
    /// `(rho_g + rho_d, rho_e + rho_d)`.
    pub fn reduced_populations(&self) -> (T, T) {
        (self.rho_g + self.rho_d, self.rho_e + self.rho_d)
    }

    /// Population `rho_d + rho_nd` of `(|ge> + |eg>)/sqrt 2`, evaluated as
    /// `exp(-beta xi)/Z` since the sum cancels badly at large `beta xi`.
    pub fn symmetric_population(&self) -> T {
        (-self.beta * self.xi).exp() / self.partition
    }

    /// Eigen-probabilities `Phi_+-` of the conditional state after the
    /// `pi/4` measurement.
    pub fn phi_pm(&self) -> (T, T) {
        let s = ((self.rho_e - self.rho_g).powi(2) + T::lit(4.0) * self.rho_nd * self.rho_nd).sqrt();
        ((T::one() + s) * T::half(), (T::one() - s) * T::half())
    }
}

/// Wootters concurrence of the thermal pair. For this X-shaped state it is
/// `2 max{0, |rho_nd| - sqrt(rho_g rho_e)}`, i.e.
/// `max{0, [sinh(beta xi) - 1] / [cosh(beta omega) + cosh(beta xi)]}`.
pub fn concurrence<T: Real>(state: &TwoQubitThermalState<T>) -> T {
    let bx = state.beta * state.xi;
    let c = (bx.sinh() - T::one()) / ((state.beta * state.omega).cosh() + bx.cosh());
    c.max(T::zero())
}

/// Closed-form discord (bits) for the optimal `theta = pi/4` measurement.
pub fn discord_closed_form<T: Real>(s: &TwoQubitThermalState<T>) -> T {
    let (phi_p, phi_m) = s.phi_pm();
    let bx = s.beta * s.xi;
    let z = s.partition;
    let mut acc = T::two() * bx * s.rho_nd
        + s.rho_d * (z * z * (s.rho_g + s.rho_d) * (s.rho_e + s.rho_d)).ln();
    for rho_a in [s.rho_g, s.rho_e] {
        acc += rho_a * ((rho_a + s.rho_d) / rho_a).ln();
    }
    acc += phi_p.xlnx() + phi_m.xlnx();
    // clamp round-off below zero at xi = 0
    (-acc / T::LN_2()).max(T::zero())
}

/// Eigenvalues of a real symmetric 2x2 matrix `[[a, b], [b, d]]`.
fn eig2<T: Real>(a: T, b: T, d: T) -> [T; 2] {
    let mean = (a + d) * T::half();
    let r = (((a - d) * T::half()).powi(2) + b * b).sqrt();
    [mean + r, mean - r]
}

/// Entropies that do not depend on the measurement basis:
/// `(S(rho_12), S(rho_1), S(rho_2))`.
fn basis_free_entropies<T: Real>(s: &TwoQubitThermalState<T>) -> (T, T, T) {
    let m = s.matrix();
    let flat: Vec<T> = m.iter().flat_map(|r| r.iter().copied()).collect();
    let s12 = entropy_bits(symmetric_eigenvalues(flat, 4));
    // partial traces; index = 2 * atom1 + atom2
    let red = |keep_first: bool| {
        let mut r = [[T::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let (row, col) = if keep_first { (2 * i + k, 2 * j + k) } else { (2 * k + i, 2 * k + j) };
                    r[i][j] += m[row][col];
                }
            }
        }
        r
    };
    let r1 = red(true);
    let r2 = red(false);
    let s1 = entropy_bits(eig2(r1[0][0], r1[0][1], r1[1][1]));
    let s2 = entropy_bits(eig2(r2[0][0], r2[0][1], r2[1][1]));
    (s12, s1, s2)
}

/// Conditional entropy `sum_k p_k S(rho_1^k)` for the von Neumann
/// measurement on atom 2 in the basis
/// `{cos t|g> - sin t|e>, -sin t|g> - cos t|e>}`.
fn conditional_entropy<T: Real>(m: &[[T; 4]; 4], theta: T) -> T {
    let (st, ct) = theta.sin_cos();
    let basis = [[ct, -st], [-st, -ct]];
    let mut total = T::zero();
    for b in basis {
        // <b|_2 rho |b>_2 as a 2x2 operator on atom 1
        let mut c = [[T::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        c[i][j] += b[k] * m[2 * i + k][2 * j + l] * b[l];
                    }
                }
            }
        }
        let p = c[0][0] + c[1][1];
        if p <= T::zero() {
            continue;
        }
        let ev = eig2(c[0][0] / p, c[0][1] / p, c[1][1] / p);
        total += p * entropy_bits(ev);
    }
    total
}

/// Discord as a function of the measurement angle, plus the mutual
/// information and `S(rho_1)` it was computed from.
pub fn discord_at_theta<T: Real>(s: &TwoQubitThermalState<T>, theta: T) -> (T, T, T) {
    let (s12, s1, s2) = basis_free_entropies(s);
    let mutual = s1 + s2 - s12;
    let j = s1 - conditional_entropy(&s.matrix(), theta);
    (mutual - j, mutual, s1)
}

/// Discord with independent verification of the optimal basis.
///
/// Evaluates the closed form and minimizes the from-scratch discord over
/// `theta in [0, pi/2]` (coarse grid of `theta_grid_size` points followed by
/// golden-section refinement to `1e-10` in `theta`). Fails with
/// [`Error::DiscordMismatch`] when the two disagree beyond `1e-9` bits
/// (scaled up for low-precision scalars).
pub fn discord<T: Real>(state: &TwoQubitThermalState<T>, theta_grid_size: usize) -> Result<DiscordResult<T>> {
    if theta_grid_size < 3 {
        return Err(invalid("theta_grid_size", "need at least 3 points"));
    }
    let (s12, s1, s2) = basis_free_entropies(state);
    let mutual = s1 + s2 - s12;
    let m = state.matrix();
    let f = |theta: T| mutual - (s1 - conditional_entropy(&m, theta));

    let upper = T::FRAC_PI_2();
    let step = upper / T::of_usize(theta_grid_size - 1);
    let grid: Vec<T> = (0..theta_grid_size).map(|k| step * T::of_usize(k)).collect();
    let values: Vec<T> = grid.iter().map(|&t| f(t)).collect();
    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(k, _)| k)
        .unwrap();
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(theta_grid_size - 1)];
    let (theta_opt, sweep_min) = golden_section(f, lo, hi, T::lit(1e-10));
    let (theta_opt, sweep_min) = if values[best] < sweep_min {
        (grid[best], values[best])
    } else {
        (theta_opt, sweep_min)
    };

    let closed = discord_closed_form(state);
    let tol = T::lit(1e-9).max(T::epsilon() * T::lit(1e3));
    let difference = (closed - sweep_min.max(T::zero())).abs();
    if difference > tol {
        return Err(Error::DiscordMismatch {
            difference: difference.as_f64(),
        });
    }
    let (phi_plus, phi_minus) = state.phi_pm();
    Ok(DiscordResult {
        discord: closed,
        classical_correlations: mutual - closed,
        mutual_information: mutual,
        optimal_theta: theta_opt,
        phi_plus,
        phi_minus,
        closed_form: closed,
        sweep_minimum: sweep_min,
    })
}

fn golden_section<T: Real>(f: impl Fn(T) -> T, mut a: T, mut b: T, tol: T) -> (T, T) {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) * T::half();
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
    }
    let x = (a + b) * T::half();
    (x, f(x))
}

/// Largest `beta xi` probed when inverting discord.
const BETA_XI_MAX: f64 = 10.0;

/// Interaction strength `xi` at which the thermal pair carries discord
/// `q_target` (bits), by bisection on `[0, xi_max]` with `beta xi_max = 10`.
pub fn xi_for_discord<T: Real>(q_target: T, beta: T, omega: T, tolerance: T) -> Result<T> {
    if !q_target.is_finite() || q_target < T::zero() {
        return Err(invalid("q_target", format!("must be finite and non-negative, got {q_target}")));
    }
    if tolerance <= T::zero() {
        return Err(invalid("tolerance", "must be positive"));
    }
    let q_of = |xi: T| thermal_state(beta, omega, xi).map(|s| discord_closed_form(&s));
    let xi_max = T::lit(BETA_XI_MAX) / beta;
    let probes = 64;
    let mut prev = q_of(T::zero())?;
    for k in 1..=probes {
        let xi = xi_max * T::of_usize(k) / T::of_usize(probes);
        let q = q_of(xi)?;
        if q <= prev {
            return Err(Error::NonMonotoneDiscord { xi: xi.as_f64() });
        }
        prev = q;
    }
    let q_max = prev;
    if q_target == T::zero() {
        return Ok(T::zero());
    }
    if q_target >= q_max {
        return Err(Error::DiscordOutOfRange {
            target: q_target.as_f64(),
            max: q_max.as_f64(),
        });
    }
    let (mut lo, mut hi) = (T::zero(), xi_max);
    for _ in 0..200 {
        let mid = (lo + hi) * T::half();
        let q = q_of(mid)?;
        if (q - q_target).abs() < tolerance * T::lit(0.5) || hi - lo <= T::epsilon() * xi_max {
            return Ok(mid);
        }
        if q < q_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * T::half())
}
