use rayon::prelude::*;

use qotto::correlations::{concurrence, discord_closed_form, thermal_state};
use qotto::cycle::cycle_moments;
use qotto::stochastic::{build_joint_distribution, sample_trajectories};
use qotto::SampleSummary;

use crate::config::Settings;
use crate::sweep::{SweepSpec, SweepVariable};
use crate::table::{num, opt_num, Table};
use crate::CliError;

pub fn correlations_default() -> SweepSpec {
    SweepSpec::linear(SweepVariable::Xi, 0.0, 20.0, 201)
}

pub fn cycle_default() -> SweepSpec {
    SweepSpec::linear(SweepVariable::Discord, 0.0, 0.5, 51)
}

/// Discord and concurrence of the pairs against the coupling, at the pair's
/// `(beta, omega)`.
pub fn correlations(settings: &Settings) -> Result<Table, CliError> {
    let sweep = settings.sweep.clone().unwrap_or_else(correlations_default);
    if sweep.variable != SweepVariable::Xi {
        return Err(CliError::Usage(format!("correlations sweeps `xi`, not `{}`", sweep.variable)));
    }
    let (beta, omega) = settings.cycle.pair_parameters();
    let rows = sweep
        .values()
        .into_par_iter()
        .map(|xi| {
            let s = thermal_state(beta, omega, xi)?;
            Ok(vec![num(xi), num(discord_closed_form(&s)), num(concurrence(&s))])
        })
        .collect::<qotto::Result<Vec<_>>>()?;
    let mut t = Table::new(["xi", "discord", "concurrence"]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

const CYCLE_COLUMNS: &[&str] = &[
    "phi", "beta_cold", "beta_hot", "minus_w", "q_h", "q_c", "var_w", "eta_th", "cop", "eta_carnot_gen", "power",
    "sigma", "mode", "cv_power", "tur_bound",
];

/// Closed-form cycle observables along a sweep.
pub fn cycle(settings: &Settings) -> Result<Table, CliError> {
    let sweep = settings.sweep.clone().unwrap_or_else(cycle_default);
    let lead: Vec<String> = match sweep.variable {
        SweepVariable::Xi | SweepVariable::Discord => vec!["xi".into(), "discord".into()],
        v => vec![v.key().into(), "xi".into(), "discord".into()],
    };
    let rows = sweep
        .values()
        .into_par_iter()
        .map(|x| {
            let c = sweep.config_at(&settings.cycle, settings.discord, x)?;
            let m = cycle_moments(&c)?;
            let p = &m.inputs;
            let mut row = Vec::with_capacity(lead.len() + CYCLE_COLUMNS.len());
            if lead.len() == 3 {
                row.push(num(x));
            }
            row.push(num(c.xi));
            row.push(num(c.discord()?));
            row.extend([
                num(p.phi),
                num(p.beta_cold),
                num(p.beta_hot),
                num(-m.mean_w),
                num(m.mean_qh),
                num(m.mean_qc),
                num(m.var_w),
                opt_num(m.eta_th),
                opt_num(m.cop),
                num(m.eta_carnot_gen),
                num(m.power),
                num(m.sigma_mean),
                m.mode.to_string(),
                num(m.cv_power),
                opt_num(m.tur_bound),
            ]);
            Ok(row)
        })
        .collect::<qotto::Result<Vec<_>>>()?;
    let mut t = Table::new(lead.into_iter().chain(CYCLE_COLUMNS.iter().map(|s| s.to_string())));
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

/// Histogram of sampled cycles over the `(a, b)` lattice, with the summary.
pub fn sample(settings: &Settings) -> Result<(Table, SampleSummary), CliError> {
    if settings.sweep.is_some() {
        return Err(CliError::Usage("sample runs at a single point; remove the sweep keys".into()));
    }
    let config = settings.point()?;
    let dist = build_joint_distribution(&config, settings.cutoff)?;
    let summary = sample_trajectories(&dist, settings.samples, settings.seed);
    let mut t = Table::new(["a", "b", "w", "q_h", "prob", "count", "frequency"]);
    let n = settings.samples as f64;
    for (atom, &count) in dist.atoms().iter().zip(&summary.counts) {
        if count == 0 && atom.prob < 1e-15 {
            continue;
        }
        t.push(vec![
            atom.a.to_string(),
            atom.b.to_string(),
            num(atom.w),
            num(atom.q_h),
            num(atom.prob),
            count.to_string(),
            num(count as f64 / n),
        ]);
    }
    Ok((t, summary))
}

pub fn sample_summary_text(s: &SampleSummary) -> String {
    format!(
        "samples = {}\nmean_w = {} +- {}\nvar_w = {} +- {}\nmean_q_h = {} +- {}\n",
        s.samples,
        num(s.mean_w),
        num(s.se_mean_w),
        num(s.var_w),
        num(s.se_var_w),
        num(s.mean_qh),
        num(s.se_mean_qh)
    )
}
