//! Adaptive Dormand–Prince 5(4) integrator for real state vectors.

use crate::scalar::Real;

/// What the observer wants after an accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

/// State handed to the observer after every accepted step.
pub struct StepInfo<'a, T> {
    pub t: T,
    pub y: &'a [T],
    /// Derivative at `(t, y)`; free thanks to first-same-as-last.
    pub dydt: &'a [T],
    pub accepted: usize,
}

#[derive(Debug, Clone)]
pub struct Outcome<T> {
    pub t: T,
    pub y: Vec<T>,
    pub accepted: usize,
    pub rejected: usize,
    /// `true` when the observer requested the stop, `false` when the step
    /// budget ran out first.
    pub stopped_by_observer: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct DormandPrince<T> {
    pub rtol: T,
    pub atol: T,
    pub h_init: T,
    pub h_max: T,
    pub max_steps: usize,
}

impl<T: Real> Default for DormandPrince<T> {
    fn default() -> Self {
        Self {
            rtol: T::lit(1e-9),
            atol: T::lit(1e-12),
            h_init: T::lit(1e-3),
            h_max: T::infinity(),
            max_steps: 1_000_000,
        }
    }
}

struct Tableau<T> {
    c: [T; 7],
    a: [[T; 6]; 7],
    e: [T; 7],
}

impl<T: Real> Tableau<T> {
    fn new() -> Self {
        let f = |n: f64, d: f64| T::lit(n / d);
        let z = T::zero();
        Self {
            c: [z, f(1., 5.), f(3., 10.), f(4., 5.), f(8., 9.), T::one(), T::one()],
            a: [
                [z; 6],
                [f(1., 5.), z, z, z, z, z],
                [f(3., 40.), f(9., 40.), z, z, z, z],
                [f(44., 45.), f(-56., 15.), f(32., 9.), z, z, z],
                [f(19372., 6561.), f(-25360., 2187.), f(64448., 6561.), f(-212., 729.), z, z],
                [f(9017., 3168.), f(-355., 33.), f(46732., 5247.), f(49., 176.), f(-5103., 18656.), z],
                [f(35., 384.), z, f(500., 1113.), f(125., 192.), f(-2187., 6784.), f(11., 84.)],
            ],
            e: [
                f(71., 57600.),
                z,
                f(-71., 16695.),
                f(71., 1920.),
                f(-17253., 339200.),
                f(22., 525.),
                f(-1., 40.),
            ],
        }
    }
}

impl<T: Real> DormandPrince<T> {
    /// Integrates `dy/dt = rhs(t, y)` from `(t0, y0)` until `observer` returns
    /// [`Control::Stop`] or the step budget is exhausted.
    pub fn integrate<F, O>(&self, t0: T, y0: Vec<T>, mut rhs: F, mut observer: O) -> Outcome<T>
    where
        F: FnMut(T, &[T], &mut [T]),
        O: FnMut(&StepInfo<'_, T>) -> Control,
    {
        let tab = Tableau::<T>::new();
        let n = y0.len();
        let mut k: Vec<Vec<T>> = vec![vec![T::zero(); n]; 7];
        let mut y = y0;
        let mut t = t0;
        let mut h = self.h_init;
        let mut ytmp = vec![T::zero(); n];
        let mut ynew = vec![T::zero(); n];
        let (mut accepted, mut rejected) = (0usize, 0usize);
        rhs(t, &y, &mut k[0]);
        let fifth = T::lit(0.2);
        loop {
            if accepted >= self.max_steps {
                return Outcome {
                    t,
                    y,
                    accepted,
                    rejected,
                    stopped_by_observer: false,
                };
            }
            for s in 1..7 {
                for i in 0..n {
                    let mut acc = y[i];
                    for (j, kj) in k.iter().enumerate().take(s) {
                        let a = tab.a[s][j];
                        if a != T::zero() {
                            acc += h * a * kj[i];
                        }
                    }
                    ytmp[i] = acc;
                }
                rhs(t + tab.c[s] * h, &ytmp, &mut k[s]);
                if s == 6 {
                    ynew.copy_from_slice(&ytmp);
                }
            }
            let mut err = T::zero();
            for i in 0..n {
                let mut e = T::zero();
                for (j, kj) in k.iter().enumerate() {
                    e += tab.e[j] * kj[i];
                }
                let scale = self.atol + self.rtol * y[i].abs().max(ynew[i].abs());
                let r = h * e / scale;
                err += r * r;
            }
            let err = (err / T::of_usize(n.max(1))).sqrt();
            if err <= T::one() {
                t += h;
                std::mem::swap(&mut y, &mut ynew);
                k.swap(0, 6);
                accepted += 1;
                let info = StepInfo {
                    t,
                    y: &y,
                    dydt: &k[0],
                    accepted,
                };
                if observer(&info) == Control::Stop {
                    return Outcome {
                        t,
                        y,
                        accepted,
                        rejected,
                        stopped_by_observer: true,
                    };
                }
                let grow = if err == T::zero() {
                    T::lit(5.0)
                } else {
                    (T::lit(0.9) * err.powf(-fifth)).min(T::lit(5.0)).max(T::lit(0.2))
                };
                h = (h * grow).min(self.h_max);
            } else {
                rejected += 1;
                let shrink = if err.is_finite() {
                    (T::lit(0.9) * err.powf(-fifth)).max(T::lit(0.1))
                } else {
                    T::lit(0.1)
                };
                h *= shrink;
            }
        }
    }
}
