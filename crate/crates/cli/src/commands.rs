use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use dce_core::decay::{decay_asymptote, decay_rate, matrix_element, matrix_element_quadrature};
use dce_core::dynamics::{evolve, EvolveControls};
use dce_core::hamiltonian::{compare_models, coupling, coupling_from_integrals, log_grid, photon_frequency, sweep_row};
use dce_core::model::{discrete_band, CavityParams, MirrorTrajectory};
use dce_core::modes::{continuum_mode, overlap, solve_discrete, Branch};
use dce_core::ode::StepControls;
use dce_core::quadrature::QuadratureControls;
use dce_core::{Model, Result as CoreResult};

use crate::config::{
    Cavity, CheckConfig, CompareConfig, DecayConfig, EvolveConfig, ModesConfig, SweepConfig, Trajectory,
};
use crate::error::CliError;
use crate::output::{num, opt, report, Table};

type Out = Box<dyn Write>;

fn params(c: &Cavity) -> Result<CavityParams<f64>, CliError> {
    Ok(CavityParams::from_ratios(c.omega_p_ratio, c.omega_res_ratio, c.length)?)
}

fn columns(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

pub fn modes(cfg: &ModesConfig, out: Out) -> Result<(), CliError> {
    let p = params(&cfg.cavity)?;
    let wc = p.omega_c();
    let kc = wc / p.c();
    let bound = solve_discrete(cfg.cavity.length, &p, cfg.max_node)?;
    let continuum = cfg
        .continuum_k
        .iter()
        .flat_map(|&k| [Branch::One, Branch::Two].map(|b| continuum_mode(k * kc, b, cfg.cavity.length, &p)))
        .collect::<CoreResult<Vec<_>>>()?;
    let mut table = Table::start(
        out,
        "modes",
        cfg,
        &columns(&[
            "kind",
            "n",
            "order",
            "parity_or_branch",
            "omega_over_omega_c",
            "k_over_k_c",
            "kappa_over_k_c",
            "eps",
            "norm",
            "sign",
        ]),
    )?;
    for m in &bound {
        table.row(&[
            "bound".into(),
            m.n.to_string(),
            m.order.to_string(),
            m.parity.name().into(),
            num(m.omega / wc),
            num(m.k / kc),
            num(m.kappa / kc),
            num(m.eps),
            num(m.alpha),
            num(m.sign),
        ])?;
    }
    for m in &continuum {
        table.row(&[
            "continuum".into(),
            String::new(),
            String::new(),
            format!("branch{}", m.branch.index()),
            num(m.omega / wc),
            num(m.k / kc),
            num(m.kappa / kc),
            num(m.eps),
            num(m.norm),
            String::new(),
        ])?;
    }
    Ok(table.finish()?)
}

pub fn sweep(cfg: &SweepConfig, out: Out) -> Result<(), CliError> {
    let rows = log_grid(cfg.ratio_min, cfg.ratio_max, cfg.points)
        .into_par_iter()
        .map(|r| sweep_row(r, cfg.omega_res_ratio, cfg.length))
        .collect::<CoreResult<Vec<_>>>()?;
    let mut table = Table::start(
        out,
        "sweep",
        cfg,
        &columns(&[
            "omega_p_over_omega_c",
            "omega0_over_omega_c",
            "omega1_over_omega_c",
            "minus_c00_l_over_ldot",
            "c01_l_over_ldot",
        ]),
    )?;
    for r in rows {
        table.row(&[
            num(r.omega_p_ratio),
            opt(r.omega0),
            opt(r.omega1),
            opt(r.c00),
            opt(r.c01),
        ])?;
    }
    Ok(table.finish()?)
}

fn trajectory(cfg: &EvolveConfig, p: &CavityParams<f64>) -> Result<MirrorTrajectory<f64>, CliError> {
    let (l0, wc) = (cfg.cavity.length, p.omega_c());
    let traj = match cfg.trajectory {
        Trajectory::Static => MirrorTrajectory::static_mirror(l0)?,
        Trajectory::Ramp {
            velocity,
            duration,
            rise_time,
        } => MirrorTrajectory::linear_ramp(l0, velocity, duration / wc, rise_time / wc)?,
        Trajectory::Sinusoidal {
            amplitude,
            omega_m_over_omega_c,
        } => {
            let omega_m = match (omega_m_over_omega_c, cfg.model.into()) {
                (Some(r), _) => r * wc,
                (None, Model::Photon) => photon_frequency(1, l0) + photon_frequency(2, l0),
                (None, Model::Polariton) => {
                    let m = solve_discrete(l0, p, 1)?;
                    if m.len() < 2 {
                        return Err(CliError::Config(
                            "fewer than two bound modes; set trajectory.omega_m_over_omega_c".into(),
                        ));
                    }
                    m[0].omega + m[1].omega
                }
            };
            MirrorTrajectory::sinusoidal(l0, amplitude, omega_m)?
        }
    };
    Ok(traj)
}

pub fn evolve_cmd(cfg: &EvolveConfig, out: Out) -> Result<(), CliError> {
    let p = params(&cfg.cavity)?;
    let wc = p.omega_c();
    let traj = trajectory(cfg, &p)?;
    let controls = EvolveControls {
        step: StepControls {
            rel_tol: cfg.rel_tol,
            abs_tol: cfg.abs_tol,
            ..Default::default()
        },
        samples: cfg.samples,
        ..Default::default()
    };
    let r = evolve(&traj, &p, cfg.model.into(), cfg.modes, cfg.t_final / wc, &controls)?;
    let mut names = vec!["t_omega_c".to_string(), "length".to_string()];
    names.extend((0..cfg.modes).map(|i| format!("n_{i}")));
    let mut table = Table::start(out, "evolve", cfg, &names)?;
    for s in &r.samples {
        let mut row = vec![num(s.t * wc), num(s.length)];
        row.extend(s.photon_numbers.iter().map(|&n| num(n)));
        table.row(&row)?;
    }
    table.note("symplectic_defect", &num(r.symplectic_defect))?;
    if let Some(dev) = r.table_deviation {
        table.note("table_deviation", &num(dev))?;
    }
    table.note("accepted_steps", &r.stats.accepted.to_string())?;
    table.note("rejected_steps", &r.stats.rejected.to_string())?;
    Ok(table.finish()?)
}

pub fn decay(cfg: &DecayConfig, out: Out) -> Result<(), CliError> {
    let p = params(&cfg.cavity)?;
    let (wc, l0) = (p.omega_c(), cfg.cavity.length);
    let ell = cfg.amplitude * l0;
    let grid = log_grid(cfg.omega_m_min, cfg.omega_m_max, cfg.points);
    let jobs: Vec<(usize, f64)> = cfg
        .nodes
        .iter()
        .flat_map(|&n| grid.iter().map(move |&w| (n, w)))
        .collect();
    let rows = jobs
        .into_par_iter()
        .map(|(n, w)| {
            let omega_m = w * wc;
            let r = decay_rate(n, omega_m, ell, l0, &p)?;
            Ok((n, w, r, decay_asymptote(n, omega_m, ell, l0, &p)))
        })
        .collect::<CoreResult<Vec<_>>>()?;
    let mut table = Table::start(
        out,
        "decay",
        cfg,
        &columns(&[
            "n",
            "omega_m_over_omega_c",
            "rate_over_omega_c",
            "asymptote_over_omega_c",
            "below_threshold",
        ]),
    )?;
    for (n, w, r, asym) in rows {
        table.row(&[
            n.to_string(),
            num(w),
            num(r.rate / wc),
            num(asym / wc),
            u8::from(r.below_threshold).to_string(),
        ])?;
    }
    Ok(table.finish()?)
}

pub fn compare(cfg: &CompareConfig, out: Out) -> Result<(), CliError> {
    let p = params(&cfg.cavity)?;
    // Coefficients are linear in L̇, so the ratios do not depend on it.
    let r = compare_models(cfg.cavity.length, 1.0, cfg.modes, &p)?;
    let n = r.frequency_ratios.len();
    let ratios: Vec<&[f64]> = r.ratios.chunks(n).collect();
    let body = json!({
        "eta": r.eta,
        "scale_factor": r.scale_factor,
        "residual_norm": r.residual_norm,
        "photon_norm": r.photon_norm,
        "cubic_coefficient": r.cubic_coefficient(),
        "coefficient_ratios": ratios,
        "frequency_ratios": r.frequency_ratios,
    });
    Ok(report(out, "compare", cfg, body)?)
}

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    value: f64,
    tolerance: f64,
    passed: bool,
}

impl Check {
    fn new(name: String, value: f64, tolerance: f64) -> Self {
        Self {
            name,
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }
}

fn orthonormality(ratio: f64, cfg: &CheckConfig) -> Result<[Check; 2], CliError> {
    let p = params(&Cavity::metal(ratio))?;
    let modes = solve_discrete(1.0, &p, usize::MAX)?;
    let mut bound = 0.0f64;
    for (i, a) in modes.iter().enumerate() {
        for (j, b) in modes.iter().enumerate() {
            let delta = if i == j { 1.0 } else { 0.0 };
            bound = bound.max((overlap(a, b)? + delta).abs());
        }
    }
    let top = discrete_band(&p).1;
    let mut cross = 0.0f64;
    for m in modes.iter().take(4) {
        for factor in [1.02, 1.5, 3.0, 10.0, 40.0] {
            for branch in [Branch::One, Branch::Two] {
                let c = continuum_mode(factor * top, branch, 1.0, &p)?;
                cross = cross.max(overlap(m, &c)?.abs());
            }
        }
    }
    Ok([
        Check::new(
            format!("bound orthonormality at ωp/ωc={ratio}"),
            bound,
            cfg.orthonormality_tol,
        ),
        Check::new(
            format!("bound–continuum overlap at ωp/ωc={ratio}"),
            cross,
            cfg.continuum_tol,
        ),
    ])
}

fn coefficient_oracle(ratio: f64, cfg: &CheckConfig) -> Result<Check, CliError> {
    let p = params(&Cavity::metal(ratio))?;
    let modes = solve_discrete(1.0, &p, 3)?;
    let controls = QuadratureControls::default();
    let mut worst = 0.0f64;
    for a in &modes {
        for b in &modes {
            let closed = coupling(a, b, 1.0);
            let quad = coupling_from_integrals(a, b, 1.0, &controls)?;
            worst = worst.max((quad - closed).abs() / closed.abs());
        }
    }
    Ok(Check::new(
        format!("closed-form couplings vs quadrature at ωp/ωc={ratio}"),
        worst,
        cfg.coefficient_tol,
    ))
}

fn decay_oracle(cfg: &CheckConfig) -> Result<Check, CliError> {
    let p = params(&Cavity::metal(30.0))?;
    let omega_m = 100.0 * p.omega_p();
    let mut worst = 0.0f64;
    for n in [0, 1] {
        for branch in [Branch::One, Branch::Two] {
            let closed = matrix_element(n, branch, omega_m, 1e-3, 1.0, &p)?;
            let quad = matrix_element_quadrature(n, branch, omega_m, 1e-3, 1.0, &p)?;
            worst = worst.max((closed - quad).norm() / closed.norm());
        }
    }
    Ok(Check::new(
        "decay matrix elements vs quadrature".into(),
        worst,
        cfg.decay_tol,
    ))
}

fn symplectic(cfg: &CheckConfig) -> Result<Check, CliError> {
    let p = params(&Cavity::metal(10.0))?;
    let modes = solve_discrete(1.0, &p, 1)?;
    let traj = MirrorTrajectory::sinusoidal(1.0, 1e-3, modes[0].omega + modes[1].omega)?;
    let t_final = cfg.symplectic_t_final / p.omega_c();
    let r = evolve(&traj, &p, Model::Polariton, 4, t_final, &EvolveControls::default())?;
    Ok(Check::new(
        "symplectic defect of a resonant drive".into(),
        r.symplectic_defect,
        cfg.symplectic_tol,
    ))
}

pub fn check(cfg: &CheckConfig, out: Out) -> Result<(), CliError> {
    let mut checks = Vec::new();
    for &ratio in &cfg.omega_p_ratios {
        checks.extend(orthonormality(ratio, cfg)?);
        // The closed forms need at least four bound modes to compare.
        if solve_discrete(1.0, &params(&Cavity::metal(ratio))?, 3)?.len() == 4 {
            checks.push(coefficient_oracle(ratio, cfg)?);
        }
    }
    checks.push(decay_oracle(cfg)?);
    checks.push(symplectic(cfg)?);
    let failed = checks.iter().filter(|c| !c.passed).count();
    report(out, "check", cfg, json!({ "checks": checks, "passed": failed == 0 }))?;
    if failed > 0 {
        return Err(CliError::CheckFailed(failed));
    }
    Ok(())
}
