//! Independent dense-matrix oracles for the two-qubit closed forms.

use nalgebra::{Complex, DMatrix, Matrix2, Matrix4, SymmetricEigen};
use qotto::correlations::{concurrence, discord, discord_closed_form, thermal_state};

type C = Complex<f64>;

/// `H = omega (|ee><ee| - |gg><gg|) + xi (|ge><eg| + |eg><ge|)` in the basis
/// `|gg>, |ge>, |eg>, |ee>`.
fn hamiltonian(omega: f64, xi: f64) -> Matrix4<f64> {
    let mut h = Matrix4::zeros();
    h[(0, 0)] = -omega;
    h[(3, 3)] = omega;
    h[(1, 2)] = xi;
    h[(2, 1)] = xi;
    h
}

fn gibbs(beta: f64, omega: f64, xi: f64) -> Matrix4<f64> {
    let e = (hamiltonian(omega, xi) * -beta).exp();
    let z = e.trace();
    e / z
}

fn entropy_bits(m: &DMatrix<C>) -> f64 {
    // hermitian: embed as a real symmetric matrix of twice the size
    let n = m.nrows();
    let big = DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let z = m[(r % n, c % n)];
        match (r < n, c < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    // every eigenvalue appears twice in the embedding
    SymmetricEigen::new(big)
        .eigenvalues
        .iter()
        .filter(|&&p| p > 1e-300)
        .map(|&p| -p * p.log2() / 2.0)
        .sum()
}

fn to_complex(m: &Matrix4<f64>) -> DMatrix<C> {
    DMatrix::from_fn(4, 4, |r, c| C::new(m[(r, c)], 0.0))
}

fn partial_trace_second(m: &DMatrix<C>) -> DMatrix<C> {
    DMatrix::from_fn(2, 2, |a, b| m[(2 * a, 2 * b)] + m[(2 * a + 1, 2 * b + 1)])
}

fn partial_trace_first(m: &DMatrix<C>) -> DMatrix<C> {
    DMatrix::from_fn(2, 2, |a, b| m[(a, b)] + m[(2 + a, 2 + b)])
}

/// Projector on the Bloch direction `(theta, phi)` tensored onto the second qubit.
fn measurement(theta: f64, phi: f64, sign: f64) -> DMatrix<C> {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let v = if sign > 0.0 {
        [C::new(c, 0.0), C::from_polar(s, phi)]
    } else {
        [C::new(-s, 0.0), C::from_polar(c, phi)]
    };
    let p = DMatrix::from_fn(2, 2, |r, k| v[r] * v[k].conj());
    DMatrix::identity(2, 2).kronecker(&p)
}

/// `S(A | B measured along (theta, phi))`.
fn conditional_entropy(rho: &DMatrix<C>, theta: f64, phi: f64) -> f64 {
    [1.0, -1.0]
        .iter()
        .map(|&sgn| {
            let pi = measurement(theta, phi, sgn);
            let post = &pi * rho * &pi;
            let p = post.trace().re;
            if p <= 1e-300 {
                0.0
            } else {
                p * entropy_bits(&(partial_trace_second(&post) / C::new(p, 0.0)))
            }
        })
        .sum()
}

fn brute_force_discord(beta: f64, omega: f64, xi: f64) -> f64 {
    let rho = to_complex(&gibbs(beta, omega, xi));
    let s_ab = entropy_bits(&rho);
    let s_b = entropy_bits(&partial_trace_first(&rho));
    let f = |t: f64, p: f64| s_b - s_ab + conditional_entropy(&rho, t, p);
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..=90 {
        for j in 0..8 {
            let (t, p) = (std::f64::consts::PI * i as f64 / 90.0, std::f64::consts::PI * j as f64 / 4.0);
            let v = f(t, p);
            if v < best.0 {
                best = (v, t, p);
            }
        }
    }
    // shrink a box around the best grid point
    let (mut t0, mut p0, mut step) = (best.1, best.2, std::f64::consts::PI / 90.0);
    let mut val = best.0;
    while step > 1e-9 {
        let mut moved = false;
        for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let v = f(t0 + dt, p0 + dp);
            if v < val {
                val = v;
                t0 += dt;
                p0 += dp;
                moved = true;
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    val
}

/// Wootters concurrence from the spin-flipped state.
fn brute_force_concurrence(rho: &Matrix4<f64>) -> f64 {
    let sy = Matrix2::new(0.0, -1.0, 1.0, 0.0);
    let yy = sy.kronecker(&sy);
    let tilde = yy * rho * yy;
    let eig = SymmetricEigen::new(*rho);
    let root = eig.eigenvectors * Matrix4::from_diagonal(&eig.eigenvalues.map(|x| x.max(0.0).sqrt())) * eig.eigenvectors.transpose();
    let r = root * tilde * root;
    let mut l: Vec<f64> = SymmetricEigen::new((r + r.transpose()) / 2.0)
        .eigenvalues
        .iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    l.sort_by(|a, b| b.partial_cmp(a).unwrap());
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

const CASES: &[(f64, f64, f64)] = &[
    (0.3, 6.0, 0.5),
    (0.3, 6.0, 2.0),
    (0.3, 6.0, 5.0),
    (0.3, 6.0, 12.0),
    (0.6, 2.0, 1.0),
    (0.6, 2.0, 4.0),
    (1.5, 1.0, 3.0),
    (0.05, 6.0, 1.0),
];

#[test]
fn gibbs_state_matches_matrix_exponential() {
    for &(b, w, x) in CASES {
        let s = thermal_state(b, w, x).unwrap();
        let m = s.matrix();
        let oracle = gibbs(b, w, x);
        for r in 0..4 {
            for c in 0..4 {
                assert!((m[r][c] - oracle[(r, c)]).abs() < 1e-14, "{b} {w} {x} ({r},{c})");
            }
        }
    }
}

#[test]
fn concurrence_matches_wootters() {
    for &(b, w, x) in CASES {
        let s = thermal_state(b, w, x).unwrap();
        let oracle = brute_force_concurrence(&gibbs(b, w, x));
        assert!((concurrence(&s) - oracle).abs() < 1e-10, "{b} {w} {x}: {} vs {oracle}", concurrence(&s));
    }
}

#[test]
fn discord_matches_full_bloch_sphere_minimization() {
    for &(b, w, x) in CASES {
        let s = thermal_state(b, w, x).unwrap();
        let oracle = brute_force_discord(b, w, x);
        let closed = discord_closed_form(&s);
        assert!((closed - oracle).abs() < 1e-8, "{b} {w} {x}: {closed} vs {oracle}");
        let checked = discord(&s, 181).unwrap();
        assert!((checked.sweep_minimum - oracle).abs() < 1e-8);
    }
}

#[test]
fn product_state_has_no_correlations() {
    let rho = to_complex(&gibbs(0.4, 3.0, 0.0));
    let a = partial_trace_first(&rho);
    let b = partial_trace_second(&rho);
    let product = b.kronecker(&a);
    assert!((product - &rho).norm() < 1e-15);
    assert!(brute_force_discord(0.4, 3.0, 0.0).abs() < 1e-12);
}
