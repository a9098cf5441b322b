//! One function per mode, each turning a [`RunConfig`] into a [`Table`].

use rayon::prelude::*;

use super::config::{Mode, RunConfig, KEYS};
use super::output::{Cell, Table};
use super::CliError;
use crate::casimir::{cp_energy, cp_energy_continuum, decay_profile, ecp_force, force_curve};
use crate::lattice::{brillouin_modes, dispersion, validate_regime, SymmetricSystem};
use crate::oracle::{cp_energy_ed_sweep, cp_energy_quadrature};
use crate::perturbation::band_energies;
use crate::thermal::{force_vs_temperature, thermal_energy};

pub const QUADRATURE_TOLERANCE: f64 = 1e-9;
pub const ED_TOLERANCE: f64 = 1e-2;

/// A finished table plus anything worth telling the user on stderr.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub table: Table,
    pub warnings: Vec<String>,
    /// Oracle comparisons outside tolerance.
    pub failures: Vec<String>,
}

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let mut report = match config.mode {
        Mode::ForceSweep => force_sweep(config),
        Mode::HoppingSweep => hopping_sweep(config),
        Mode::DetuningSweep => detuning_sweep(config),
        Mode::DecayProfile => decay_sweep(config),
        Mode::ThermalSweep => thermal_sweep(config),
        Mode::OracleCheck => oracle_check(config),
        Mode::DispersionDump => dispersion_dump(config),
    }?;
    let mut meta = vec![
        (
            "tool".to_string(),
            format!("ecp {}", env!("CARGO_PKG_VERSION")),
        ),
        ("mode".to_string(), config.mode.name().to_string()),
    ];
    for (key, _, _) in KEYS.iter().filter(|(k, _, _)| *k != "mode") {
        let (value, source) = &config.provenance[key];
        meta.push((key.to_string(), format!("{value} ({source})")));
    }
    meta.append(&mut report.table.meta);
    report.table.meta = meta;
    Ok(report)
}

fn system(
    c: &RunConfig,
    delta: f64,
    hopping: f64,
    half_length: usize,
) -> Result<SymmetricSystem, CliError> {
    Ok(SymmetricSystem::from_detuning(
        c.eps0,
        delta,
        hopping,
        c.lambda,
        half_length,
    )?)
}

/// Builds the system and checks the perturbative regime at separation `R`.
fn checked_system(
    c: &RunConfig,
    delta: f64,
    hopping: f64,
    half_length: usize,
    separation: usize,
) -> Result<(SymmetricSystem, Option<String>), CliError> {
    let sys = system(c, delta, hopping, half_length)?;
    let imps = sys.impurities(separation)?;
    let report = validate_regime(sys.chain(), &imps).into_result(sys.chain(), separation)?;
    let warning = report.has_warning().then(|| {
        format!(
            "J = {hopping}, delta = {delta}: coupling ratio {:.3} is marginal, expect visible higher-order corrections",
            report.coupling_ratio
        )
    });
    Ok((sys, warning))
}

/// `steps` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    let h = (hi - lo) / (steps - 1) as f64;
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                hi
            } else {
                lo + h * i as f64
            }
        })
        .collect()
}

fn require_separation(max_needed: usize, half_length: usize) -> Result<(), CliError> {
    if max_needed > half_length {
        return Err(CliError::Physics(crate::Error::Dimension {
            separation: max_needed,
            half_length,
            reason: "sweeps need R + 1 <= N",
        }));
    }
    Ok(())
}

fn force_sweep(c: &RunConfig) -> Result<Report, CliError> {
    let n = c.half_lengths[0];
    require_separation(c.r_max + 1, n)?;
    let series: Vec<(f64, f64)> = c
        .detunings
        .iter()
        .flat_map(|&d| c.hoppings.iter().map(move |&j| (d, j)))
        .collect();
    let results = series
        .par_iter()
        .map(|&(delta, j)| {
            let (sys, warning) = checked_system(c, delta, j, n, c.r_max)?;
            Ok((sys, warning, force_curve(&sys, c.r_min, c.r_max)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut table = Table::new(&["J", "delta", "a", "R", "E_cp", "f", "abs_f"]);
    let mut warnings = Vec::new();
    for (sys, warning, curve) in results {
        warnings.extend(warning);
        for p in curve.records {
            table.rows.push(vec![
                sys.chain().hopping().into(),
                sys.delta().into(),
                sys.band_parameter().into(),
                p.separation.into(),
                p.energy.into(),
                p.force.into(),
                p.force.abs().into(),
            ]);
        }
    }
    Ok(Report {
        table,
        warnings,
        failures: Vec::new(),
    })
}

/// Rows of `delta, J, a, R, E_cp, f, abs_f, gamma` for a list of systems.
fn fixed_separation_rows(c: &RunConfig, points: &[(f64, f64)]) -> Result<Report, CliError> {
    let n = c.half_lengths[0];
    let r = c.separation;
    require_separation(r + 1, n)?;
    let rows = points
        .par_iter()
        .map(|&(delta, j)| {
            let (sys, warning) = checked_system(c, delta, j, n, r)?;
            let e = cp_energy(&sys, r)?;
            let f = ecp_force(&sys, r)?;
            let gamma = decay_profile(&sys)?.gamma;
            let row: Vec<Cell> = vec![
                delta.into(),
                j.into(),
                sys.band_parameter().into(),
                r.into(),
                e.into(),
                f.into(),
                f.abs().into(),
                gamma.into(),
            ];
            Ok((row, warning))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut table = Table::new(&["delta", "J", "a", "R", "E_cp", "f", "abs_f", "gamma"]);
    let marginal = rows.iter().filter(|(_, w)| w.is_some()).count();
    table.rows = rows.into_iter().map(|(row, _)| row).collect();
    let warnings = if marginal > 0 {
        vec![format!(
            "{marginal} sweep points have a marginal coupling ratio (> 0.1)"
        )]
    } else {
        Vec::new()
    };
    Ok(Report {
        table,
        warnings,
        failures: Vec::new(),
    })
}

fn hopping_sweep(c: &RunConfig) -> Result<Report, CliError> {
    let mut points = Vec::new();
    for &delta in &c.detunings {
        let lo = c.sweep_min.unwrap_or(0.0);
        let hi = c.sweep_max.unwrap_or(0.95 * delta.abs() / 2.0);
        points.extend(linspace(lo, hi, c.steps).into_iter().map(|j| (delta, j)));
    }
    fixed_separation_rows(c, &points)
}

fn detuning_sweep(c: &RunConfig) -> Result<Report, CliError> {
    let mut points = Vec::new();
    for &j in &c.hoppings {
        let hi = c
            .sweep_max
            .unwrap_or(if j > 0.0 { -2.0 * j / 0.95 } else { -0.1 });
        let lo = c.sweep_min.unwrap_or(hi - 3.0);
        points.extend(linspace(lo, hi, c.steps).into_iter().map(|d| (d, j)));
    }
    fixed_separation_rows(c, &points)
}

fn decay_sweep(c: &RunConfig) -> Result<Report, CliError> {
    let delta = c.detunings[0];
    let lo = c.sweep_min.unwrap_or(-0.99);
    let hi = c.sweep_max.unwrap_or(-0.01);
    let rows = linspace(lo, hi, c.steps)
        .into_par_iter()
        .map(|a| {
            let sys = system(c, delta, a * delta / 2.0, c.half_lengths[0])?;
            let profile = decay_profile(&sys)?;
            let b = cp_energy_continuum(&sys, 1)?.b;
            Ok(vec![
                a.into(),
                sys.chain().hopping().into(),
                profile.gamma.into(),
                profile.characteristic_length.into(),
                b.into(),
                ((b - profile.gamma) / profile.gamma).into(),
            ])
        })
        .collect::<Result<Vec<Vec<Cell>>, CliError>>()?;
    let mut table = Table::new(&[
        "a",
        "J",
        "gamma",
        "R_c",
        "b_continuum",
        "continuum_rel_diff",
    ]);
    table.rows = rows;
    Ok(Report {
        table,
        ..Report::default()
    })
}

fn thermal_sweep(c: &RunConfig) -> Result<Report, CliError> {
    let (delta, j) = (c.detunings[0], c.hoppings[0]);
    let jobs: Vec<(usize, usize)> = c
        .half_lengths
        .iter()
        .flat_map(|&n| (c.r_min..=c.r_max).map(move |r| (n, r)))
        .collect();
    for &n in &c.half_lengths {
        require_separation(c.r_max + 1, n)?;
    }
    let results = jobs
        .par_iter()
        .map(|&(n, r)| {
            let (sys, warning) = checked_system(c, delta, j, n, r + 1)?;
            let sweep = force_vs_temperature(&sys, r, &c.temperatures)?;
            let zero = ecp_force(&sys, r)?;
            let rows = sweep
                .records
                .iter()
                .map(|&(t, f)| {
                    Ok(vec![
                        n.into(),
                        t.into(),
                        r.into(),
                        thermal_energy(&sys, t, r)?.into(),
                        f.into(),
                        f.abs().into(),
                        zero.into(),
                    ])
                })
                .collect::<Result<Vec<Vec<Cell>>, CliError>>()?;
            let order = (!sweep.is_monotone()).then(|| {
                format!("N = {n}, R = {r}: |f_T| is not non-increasing over the given temperatures")
            });
            Ok((rows, warning, order))
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut table = Table::new(&["N", "T", "R", "E_T", "f_T", "abs_f_T", "f_zero_T"]);
    let mut warnings = Vec::new();
    for (rows, warning, order) in results {
        table.rows.extend(rows);
        for w in warning.into_iter().chain(order) {
            if !warnings.contains(&w) {
                warnings.push(w);
            }
        }
    }
    Ok(Report {
        table,
        warnings,
        failures: Vec::new(),
    })
}

fn relative_error(x: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        x.abs()
    } else {
        ((x - reference) / reference).abs()
    }
}

fn oracle_check(c: &RunConfig) -> Result<Report, CliError> {
    let (delta, j, n) = (c.detunings[0], c.hoppings[0], c.half_lengths[0]);
    require_separation(c.r_max, n)?;
    let (sys, warning) = checked_system(c, delta, j, n, c.r_max)?;
    let separations: Vec<usize> = (c.r_min..=c.r_max).collect();
    let quadrature = separations
        .par_iter()
        .map(|&r| cp_energy_quadrature(&sys, r))
        .collect::<Result<Vec<f64>, _>>()?;
    let ed_rs: Vec<usize> = separations
        .iter()
        .copied()
        .filter(|&r| r <= n / 4)
        .collect();
    let ed = cp_energy_ed_sweep(&sys, &ed_rs)?;

    let mut table = Table::new(&[
        "R",
        "E_cp",
        "E_cp_quadrature",
        "E_cp_ed",
        "rel_err_quadrature",
        "rel_err_ed",
        "ed_systematic",
        "quadrature_check",
        "ed_check",
    ]);
    let mut failures = Vec::new();
    for (i, &r) in separations.iter().enumerate() {
        let closed = cp_energy(&sys, r)?;
        let quad_err = relative_error(quadrature[i], closed);
        let quad_ok = quad_err < QUADRATURE_TOLERANCE;
        if !quad_ok {
            failures.push(format!(
                "R = {r}: quadrature relative error {quad_err:e} >= {QUADRATURE_TOLERANCE:e}"
            ));
        }
        let mut row: Vec<Cell> = vec![r.into(), closed.into(), quadrature[i].into()];
        match ed_rs.iter().position(|&x| x == r) {
            Some(pos) => {
                let est = ed[pos].0;
                let ed_err = relative_error(est.energy, closed);
                let ed_ok = ed_err < ED_TOLERANCE;
                if !ed_ok {
                    failures.push(format!(
                        "R = {r}: ED relative error {ed_err:e} >= {ED_TOLERANCE:e}"
                    ));
                }
                row.extend([
                    est.energy.into(),
                    quad_err.into(),
                    ed_err.into(),
                    est.systematic.into(),
                    verdict(quad_ok),
                    verdict(ed_ok),
                ]);
            }
            None => row.extend([
                "-".into(),
                quad_err.into(),
                "-".into(),
                "-".into(),
                verdict(quad_ok),
                "skipped".into(),
            ]),
        }
        table.rows.push(row);
    }
    if let Some((_, at_rmin)) = ed.first() {
        let (ep, em) = crate::perturbation::symmetric_spectrum_closed(&sys, ed_rs[0])?;
        table.push_meta("splitting_R", ed_rs[0].to_string());
        table.push_meta("splitting_closed", format!("{:.16e}", em - ep));
        table.push_meta("splitting_ed", format!("{:.16e}", at_rmin.splitting()));
        table.push_meta(
            "ground_impurity_overlap_ed",
            format!("{:.16e}", at_rmin.ground_impurity_overlap),
        );
    }
    Ok(Report {
        table,
        warnings: warning.into_iter().collect(),
        failures,
    })
}

fn verdict(ok: bool) -> Cell {
    if ok {
        "pass".into()
    } else {
        "fail".into()
    }
}

fn dispersion_dump(c: &RunConfig) -> Result<Report, CliError> {
    let sys = system(c, c.detunings[0], c.hoppings[0], c.half_lengths[0])?;
    let n = c.half_lengths[0] as i64;
    let mut table = Table::new(&["n", "k", "Omega_k", "E_k"]);
    let modes = brillouin_modes(sys.chain());
    for ((idx, k), (_, e)) in (-n..=n).zip(modes).zip(band_energies(&sys)) {
        table.rows.push(vec![
            idx.into(),
            k.into(),
            dispersion(sys.chain(), k).into(),
            e.into(),
        ]);
    }
    Ok(Report {
        table,
        ..Report::default()
    })
}
