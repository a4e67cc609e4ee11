//! End-to-end cross-checks at a single configuration.

use std::fmt::Write as _;

use qotto::cycle::{cycle_moments, numeric_cumulants};
use qotto::fock::{
    analytic_steady_state, nonadiabatic_factor_analytic, nonadiabatic_factor_numeric, null_space_steady_state,
    solve_steady_state, SteadyStateOptions,
};
use qotto::stochastic::{
    check_fluctuation_theorem, joint_distribution_from_strokes, sample_trajectories, CycleDirection, CycleStrokes,
    DistributionOptions,
};
use qotto::{CharacteristicFunction, CycleConfig, CycleMoments, FockCutoff, JointWorkHeatDistribution, OperatingMode};

use crate::config::Settings;
use crate::table::num;

pub const STEADY_STATE_TOL: f64 = 1e-6;
pub const PHI_TOL: f64 = 1e-3;
pub const MOMENT_TOL: f64 = 1e-6;
pub const G_TOL: f64 = 1e-8;
pub const FT_POINTWISE_TOL: f64 = 1e-8;
pub const FT_INTEGRAL_TOL: f64 = 1e-6;
pub const FT_FLOOR: f64 = 1e-12;
pub const MC_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub measured: Option<f64>,
    pub bound: Option<Bound>,
    pub note: String,
}

/// Acceptance bound on the measured value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    /// `measured <= tol`
    Max(f64),
    /// `measured >= min`
    Min(f64),
}

impl Check {
    fn bound(name: &str, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            status: if measured <= tolerance { Status::Pass } else { Status::Fail },
            measured: Some(measured),
            bound: Some(Bound::Max(tolerance)),
            note: String::new(),
        }
    }

    fn at_least(name: &str, measured: f64, min: f64) -> Self {
        Self {
            name: name.into(),
            status: if measured >= min { Status::Pass } else { Status::Fail },
            measured: Some(measured),
            bound: Some(Bound::Min(min)),
            note: String::new(),
        }
    }

    fn failed(name: &str, err: impl std::fmt::Display) -> Self {
        Self {
            name: name.into(),
            status: Status::Fail,
            measured: None,
            bound: None,
            note: err.to_string(),
        }
    }

    fn skipped(name: &str, why: &str) -> Self {
        Self {
            name: name.into(),
            status: Status::Skip,
            measured: None,
            bound: None,
            note: why.into(),
        }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub header: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.header {
            let _ = writeln!(out, "# {k} = {v}");
        }
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            let _ = write!(out, "{tag} {:width$}", c.name);
            if let Some(m) = c.measured {
                let _ = write!(out, " measured={}", num(m));
            }
            match c.bound {
                Some(Bound::Max(t)) => {
                    let _ = write!(out, " tol={}", num(t));
                }
                Some(Bound::Min(m)) => {
                    let _ = write!(out, " min={}", num(m));
                }
                None => {}
            }
            if !c.note.is_empty() {
                let _ = write!(out, " ({})", c.note);
            }
            out.push('\n');
        }
        let count = |s| self.checks.iter().filter(|c| c.status == s).count();
        let _ = writeln!(
            out,
            "summary: {} passed, {} failed, {} skipped",
            count(Status::Pass),
            count(Status::Fail),
            count(Status::Skip)
        );
        out
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn steady_state_checks(config: &CycleConfig, dim: usize, out: &mut Vec<Check>) {
    let reservoir = match qotto::reservoir::effective_reservoir(&config.nonthermal_reservoir()) {
        Ok(r) => r,
        Err(e) => {
            out.push(Check::failed("steady_state_tail", e));
            return;
        }
    };
    let q = reservoir.r1 / reservoir.r2;
    let opts = SteadyStateOptions { dim, ..SteadyStateOptions::default() };
    let tail = q.powi(dim as i32);
    let required = qotto::fock::required_dim(reservoir.r1, reservoir.r2, opts.tail_threshold);
    let tail_check = Check::bound("steady_state_tail", tail, opts.tail_threshold);
    if tail_check.status == Status::Fail {
        out.push(tail_check.note(format!("dim {dim} too small, need at least {required}")));
        out.push(Check::skipped("steady_state_ode", "cutoff too small"));
        out.push(Check::skipped("steady_state_null_space", "cutoff too small"));
        return;
    }
    out.push(tail_check);
    let analytic = analytic_steady_state(reservoir.beta_eff * reservoir.omega, dim);
    match solve_steady_state(&reservoir, &opts) {
        Ok(ss) => {
            let d = ss.state.trace_distance(&analytic);
            let worst = ss.max_trace_error.max(ss.max_hermiticity_error).max(-ss.min_population);
            out.push(Check::bound("steady_state_ode", d, STEADY_STATE_TOL).note(format!(
                "residual {}, worst trace/hermiticity/positivity error {}",
                num(ss.residual),
                num(worst)
            )));
        }
        Err(e) => out.push(Check::failed("steady_state_ode", e)),
    }
    match null_space_steady_state(reservoir.r1, reservoir.r2, dim) {
        Ok(ns) => out.push(Check::bound("steady_state_null_space", ns.trace_distance(&analytic), STEADY_STATE_TOL)),
        Err(e) => out.push(Check::failed("steady_state_null_space", e)),
    }
}

fn moment_checks(m: &CycleMoments, dist: &JointWorkHeatDistribution, out: &mut Vec<Check>) {
    let d = dist.moments();
    let n = &m.numeric;
    let triangle = |name: &str, closed: f64, fd: f64, brute: f64| {
        let worst = rel(closed, fd).max(rel(closed, brute)).max(rel(fd, brute));
        Check::bound(name, worst, MOMENT_TOL).note(format!(
            "closed {}, lnG {}, distribution {}",
            num(closed),
            num(fd),
            num(brute)
        ))
    };
    out.push(triangle("oracle_mean_w", m.mean_w, n.mean_w, d.mean_w));
    out.push(triangle("oracle_mean_q_h", m.mean_qh, n.mean_qh, d.mean_qh));
    out.push(
        Check::bound("oracle_var_w", rel(m.var_w, d.var_w), MOMENT_TOL)
            .note(format!("lnG {}, distribution {}", num(m.var_w), num(d.var_w))),
    );
    out.push(
        Check::bound("printed_var_w", rel(m.var_w_closed_form, d.var_w), MOMENT_TOL)
            .note(format!("closed {}, distribution {}", num(m.var_w_closed_form), num(d.var_w))),
    );
    let first = (d.mean_w + d.mean_qh + d.mean_qc).abs() + rel(m.mean_qc, d.mean_qc);
    out.push(Check::bound("first_law", first, MOMENT_TOL));
}

fn characteristic_check(g: &CharacteristicFunction, dist: &JointWorkHeatDistribution) -> Check {
    let p = g.inputs();
    // grid inside the first zero of the thermal factors
    let span = 0.5 / (p.omega_c + p.omega_h);
    let grid = qotto::scalar::linspace(-span, span, 5);
    let mut worst = 0.0f64;
    for &u in &grid {
        for &v in &grid {
            worst = worst.max((g.continued(u, v) - dist.characteristic(u, v)).norm());
        }
    }
    Check::bound("characteristic_grid", worst, G_TOL)
}

fn tur_check(m: &CycleMoments) -> Check {
    if m.mode != OperatingMode::Engine {
        return Check::skipped("tur", &format!("machine is a {}", m.mode));
    }
    match m.tur_bound {
        Some(bound) => Check::at_least("tur", m.cv_power, bound).note("cv_power against csch(f(<sigma>))"),
        None => Check::failed("tur", "entropy production is zero"),
    }
}

/// Runs every check; only errors in the configuration itself abort.
pub fn run(settings: &Settings) -> Result<Report, qotto::Error> {
    let config = settings.point()?;
    let cutoff: FockCutoff = settings.cutoff;
    let header = vec![
        ("variant".to_string(), config.variant.to_string()),
        ("omega_c".into(), num(config.omega_c)),
        ("omega_h".into(), num(config.omega_h)),
        ("beta_c".into(), num(config.beta_c)),
        ("beta_h".into(), num(config.beta_h)),
        ("xi".into(), num(config.xi)),
        ("discord".into(), num(config.discord()?)),
        ("tau_dri".into(), num(config.tau_dri)),
        ("dim".into(), cutoff.dim.to_string()),
        ("guard".into(), cutoff.guard.to_string()),
        ("seed".into(), settings.seed.to_string()),
        ("samples".into(), settings.samples.to_string()),
    ];
    let moments = cycle_moments(&config)?;
    let inputs = moments.inputs;
    let mut checks = Vec::new();

    steady_state_checks(&config, cutoff.dim, &mut checks);

    let phi = nonadiabatic_factor_analytic(config.tau_dri, config.omega_c, config.omega_h)?;
    match nonadiabatic_factor_numeric(config.tau_dri, config.omega_c, config.omega_h, cutoff) {
        Ok(x) => checks.push(
            Check::bound("phi_numeric", (x - phi).abs(), PHI_TOL).note(format!("analytic {}, numeric {}", num(phi), num(x))),
        ),
        Err(e) => checks.push(Check::failed("phi_numeric", e)),
    }

    checks.push(Check::at_least("second_law", moments.sigma_mean, 0.0).note("mean entropy production"));
    checks.push(tur_check(&moments));

    let built = CycleStrokes::for_config(&config, cutoff).and_then(|strokes| {
        let opts = DistributionOptions::default();
        let fwd = joint_distribution_from_strokes(&inputs, &strokes, CycleDirection::Forward, &opts)?;
        let rev = joint_distribution_from_strokes(&inputs, &strokes.reversed(), CycleDirection::Reversed, &opts)?;
        Ok((fwd, rev))
    });
    let (fwd, rev) = match built {
        Ok(pair) => pair,
        Err(e) => {
            checks.push(Check::failed("distribution", e));
            return Ok(Report { header, checks });
        }
    };
    checks.push(Check::bound("distribution_leak", fwd.leak(), DistributionOptions::<f64>::default().leak_threshold));
    moment_checks(&moments, &fwd, &mut checks);

    let g = CharacteristicFunction::from_inputs(inputs)?;
    checks.push(characteristic_check(&g, &fwd));
    if let Err(e) = numeric_cumulants(&g) {
        checks.push(Check::failed("cumulants", e));
    }

    match check_fluctuation_theorem(&fwd, &rev, &config, FT_FLOOR) {
        Ok(ft) => {
            checks.push(
                Check::bound("ft_pointwise", ft.max_deviation, FT_POINTWISE_TOL).note(format!("{} shared points", ft.pairs)),
            );
            checks.push(Check::bound("ft_integral", (ft.integral - 1.0).abs(), FT_INTEGRAL_TOL));
            checks.push(
                Check::bound("ft_regression", (ft.slope - 1.0).abs().max(ft.intercept.abs()), FT_POINTWISE_TOL)
                    .note(format!("slope {}, intercept {}", num(ft.slope), num(ft.intercept))),
            );
        }
        Err(e) => checks.push(Check::failed("ft_pointwise", e)),
    }

    let s = sample_trajectories(&fwd, settings.samples, settings.seed);
    let z = |x: f64, mean: f64, se: f64| (x - mean).abs() / se.max(1e-300);
    checks.push(
        Check::bound("monte_carlo_mean_w", z(s.mean_w, moments.mean_w, s.se_mean_w), MC_SIGMAS)
            .note(format!("sample {}, analytic {}", num(s.mean_w), num(moments.mean_w))),
    );
    checks.push(
        Check::bound("monte_carlo_mean_q_h", z(s.mean_qh, moments.mean_qh, s.se_mean_qh), MC_SIGMAS)
            .note(format!("sample {}, analytic {}", num(s.mean_qh), num(moments.mean_qh))),
    );
    Ok(Report { header, checks })
}
