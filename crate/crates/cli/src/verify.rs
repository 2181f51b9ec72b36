//! Oracle suite: every analytic formula checked against a brute-force
//! counterpart in a truncated number basis.

use std::f64::consts::FRAC_PI_2;

use anyhow::Result;
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use critmetro_core::fisher_closed::{cfi_gaussian, qfi_breakdown_at_phase, qfi_ratio_omega};
use critmetro_core::fisher_dd::{dd_quad_stats, qfi_dd, steady_state};
use critmetro_core::gaussian::{quad_mean, quad_variance, GaussianPureState, QuadratureSpec};
use critmetro_core::model::accumulated_phase;
use critmetro_core::oracle::fock::rule_n_max;
use critmetro_core::oracle::qfi::DEFAULT_REL_STEP;
use critmetro_core::oracle::ramp::{evolve_ramp_converged, ramp_n_max};
use critmetro_core::oracle::{
    build_state, certify, cfi_direct, closed_family, closed_family_n_max, dd_family, lindblad_run,
    qfi_numeric, truncation_rule, Certificate, Variable,
};
use critmetro_core::{ClosedParams, DrivenDissipativeParams, PhaseConvention};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Level {
    Fast,
    Full,
}

/// Reference point of the closed checks: Ω/ω = 200, α = 0.5 e^{−0.3i}, γ = 1e−3.
pub fn closed_point(ratio: f64) -> Result<ClosedParams> {
    Ok(ClosedParams::from_ratio(
        1.0, 200.0, ratio, 1e-3, 0.5, -0.3,
    )?)
}

/// Numeric QFI of the closed family against the three-term decomposition.
pub fn closed_qfi_check(ratio: f64) -> Result<Certificate> {
    let p = closed_point(ratio)?;
    let phi = accumulated_phase(p.g, &p)?;
    let reference = qfi_breakdown_at_phase(&p, phi)?.total();
    let c = certify(
        &format!("closed QFI at g/g_c = {ratio}"),
        json!({"params": p, "phi": phi}),
        closed_family_n_max(&p),
        Some(reference),
        1e-2,
        true,
        |n| {
            let f = closed_family(p, phi, n, Variable::Splitting);
            qfi_numeric(f, p.splitting, DEFAULT_REL_STEP * p.splitting)
        },
    )?;
    Ok(c)
}

/// `I_ω / I_Ω` from two numeric QFIs against `Ω²/ω²`.
pub fn ratio_law_check() -> Result<Certificate> {
    let p = ClosedParams::from_ratio(1.3, 150.0, 0.6, 2e-3, 0.7, 0.4)?;
    let phi = accumulated_phase(p.g, &p)?;
    let reference = qfi_ratio_omega(p.splitting, p.omega)?;
    let c = certify(
        "QFI ratio omega/Omega",
        json!({"params": p, "phi": phi}),
        closed_family_n_max(&p),
        Some(reference),
        1e-2,
        true,
        |n| {
            let fo = closed_family(p, phi, n, Variable::Omega);
            let fs = closed_family(p, phi, n, Variable::Splitting);
            let io = qfi_numeric(fo, p.omega, DEFAULT_REL_STEP * p.omega)?;
            let is = qfi_numeric(fs, p.splitting, DEFAULT_REL_STEP * p.splitting)?;
            Ok(io / is)
        },
    )?;
    Ok(c)
}

fn dd_qfi_check() -> Result<Certificate> {
    let b = ClosedParams::from_ratio(1.0, 200.0, 0.5, 1e-3, 0.0, 0.0)?;
    let p = DrivenDissipativeParams::resonant(b, 0.5, 1.0, 0.8, PhaseConvention::Arctan)?;
    let n = truncation_rule(b.xi() - 0.05, p.amplitude()) + 8;
    let c = certify(
        "driven QFI at g/g_c = 0.5",
        json!({"params": p}),
        n,
        Some(qfi_dd(&p)?.total()),
        1e-4,
        true,
        |n| qfi_numeric(dd_family(p, n), b.splitting, DEFAULT_REL_STEP * b.splitting),
    )?;
    Ok(c)
}

fn moment_bridge() -> Result<Vec<Certificate>> {
    let mut out = Vec::new();
    for &(xi, m, arg) in &[(-0.4, 1.0, 0.7), (-1.0, 0.5, -2.0)] {
        let g = GaussianPureState::new(xi, m, arg)?;
        let n = rule_n_max(xi, m)?;
        for (label, th) in [("X", 0.0), ("P", FRAC_PI_2)] {
            let spec = QuadratureSpec::new(th);
            out.push(certify(
                &format!("moment bridge mean {label} (xi = {xi}, |beta| = {m})"),
                json!({"xi": xi, "beta_mag": m, "beta_arg": arg, "theta": th}),
                n,
                Some(quad_mean(&g, spec)),
                1e-6,
                false,
                |n| {
                    Ok(build_state(xi, Complex64::from_polar(m, arg), n)?
                        .quadrature_stats(th)
                        .0)
                },
            )?);
            out.push(certify(
                &format!("moment bridge variance {label} (xi = {xi}, |beta| = {m})"),
                json!({"xi": xi, "beta_mag": m, "beta_arg": arg, "theta": th}),
                n,
                Some(quad_variance(&g, spec)),
                1e-6,
                false,
                |n| {
                    Ok(build_state(xi, Complex64::from_polar(m, arg), n)?
                        .quadrature_stats(th)
                        .1)
                },
            )?);
        }
    }
    Ok(out)
}

/// Steady-state point of the master-equation check.
pub fn lindblad_point() -> Result<DrivenDissipativeParams> {
    let b = ClosedParams::from_ratio(1.0, 200.0, 0.3, 1e-3, 0.0, 0.0)?;
    Ok(DrivenDissipativeParams::resonant(
        b,
        1.0,
        1.0,
        0.0,
        PhaseConvention::Arctan,
    )?)
}

/// Master-equation steady state against the analytic ⟨X⟩, ⟨P⟩ and Δ²X.
pub fn lindblad_checks(p: &DrivenDissipativeParams) -> Result<Vec<Certificate>> {
    let s = steady_state(p)?;
    let n = rule_n_max(s.xi, s.beta_mag)?;
    let (mx, vx) = dd_quad_stats(p, 0.0)?;
    let (mp, _) = dd_quad_stats(p, FRAC_PI_2)?;
    let runs = [lindblad_run(p, n)?, lindblad_run(p, 2 * n)?];
    let moments = [runs[0].moments(p), runs[1].moments(p)];
    let mut out = Vec::new();
    for (name, reference, pick) in [
        ("mean X", mx, 0usize),
        ("mean P", mp, 1),
        ("variance X", vx, 2),
    ] {
        let get = |i: usize| match pick {
            0 => moments[i].mean_x,
            1 => moments[i].mean_p,
            _ => moments[i].var_x,
        };
        out.push(certify(
            &format!("Lindblad steady {name}"),
            json!({"params": p, "residual": runs[0].residual, "time": runs[0].time}),
            n,
            Some(reference),
            1e-3,
            false,
            |m| Ok(if m == n { get(0) } else { get(1) }),
        )?);
    }
    Ok(out)
}

/// `cfi_direct` against the two-term Gaussian formula on random families.
pub fn cfi_direct_check(samples: usize, seed: u64) -> Result<Certificate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let mean = rng.random_range(-3.0..3.0);
        let var = rng.random_range(0.05..5.0);
        let dm = rng.random_range(-2.0..2.0);
        let dv = rng.random_range(-2.0..2.0);
        let d = cfi_direct(mean, var, dm, dv)?;
        let g = cfi_gaussian(mean, var, dm, dv)?.total;
        worst = worst.max(((d - g) / g).abs());
    }
    Ok(Certificate {
        check: format!("direct CFI integral vs Gaussian formula ({samples} families)"),
        inputs: json!({"samples": samples, "seed": seed}),
        n_max: 0,
        value: worst,
        value_doubled: worst,
        truncation_change: 0.0,
        reference: Some(0.0),
        deviation: Some(worst),
        relative: true,
        tolerance: 1e-6,
        passed: worst <= 1e-6,
    })
}

/// Ramp fidelity at `g_f/g_c = 0.9`, γ = 1e−3, plus the drop at 100γ.
pub fn ramp_checks() -> Result<Vec<Certificate>> {
    let p = ClosedParams::from_ratio(1.0, 200.0, 0.9, 1e-3, 0.5, 0.0)?;
    let n = ramp_n_max(&p, p.g)?;
    let slow = [
        evolve_ramp_converged(&p, p.g, n)?,
        evolve_ramp_converged(&p, p.g, 2 * n)?,
    ];
    let fast_p = ClosedParams {
        gamma: 100.0 * p.gamma,
        ..p
    };
    let fast = evolve_ramp_converged(&fast_p, fast_p.g, n)?;
    let fs = slow[0].fidelity;
    let adiabatic = Certificate {
        check: "ramp fidelity at g_f/g_c = 0.9, gamma = 1e-3".into(),
        inputs: json!({"params": p, "dt": slow[0].dt, "phase": slow[0].phase}),
        n_max: n,
        value: fs,
        value_doubled: slow[1].fidelity,
        truncation_change: (slow[1].fidelity - fs).abs(),
        reference: Some(1.0),
        deviation: Some(1.0 - fs),
        relative: false,
        tolerance: 1e-3,
        passed: fs >= 0.999 && (slow[1].fidelity - fs).abs() <= 1e-4,
    };
    let diabatic = Certificate {
        check: "ramp fidelity drops at 100 gamma".into(),
        inputs: json!({"params": fast_p, "dt": fast.dt}),
        n_max: n,
        value: fast.fidelity,
        value_doubled: fast.fidelity,
        truncation_change: 0.0,
        reference: Some(fs),
        deviation: Some(fs - fast.fidelity),
        relative: false,
        tolerance: 0.0,
        passed: fast.fidelity < fs,
    };
    Ok(vec![adiabatic, diabatic])
}

pub fn run(level: Level) -> Result<Vec<Certificate>> {
    let mut out = moment_bridge()?;
    out.push(closed_qfi_check(0.5)?);
    out.push(dd_qfi_check()?);
    out.extend(lindblad_checks(&lindblad_point()?)?);
    out.push(cfi_direct_check(100, 7)?);
    if level == Level::Full {
        out.push(closed_qfi_check(0.3)?);
        out.push(closed_qfi_check(0.7)?);
        out.push(ratio_law_check()?);
        out.extend(ramp_checks()?);
    }
    Ok(out)
}

pub fn report_line(c: &Certificate) -> String {
    let status = if c.passed { "PASS" } else { "FAIL" };
    format!(
        "{status}  {}: value {:e}, reference {}, deviation {}, tolerance {:e}, n_max {} (doubled change {:e})",
        c.check,
        c.value,
        c.reference.map_or("-".into(), |r| format!("{r:e}")),
        c.deviation.map_or("-".into(), |d| format!("{d:e}")),
        c.tolerance,
        c.n_max,
        c.truncation_change,
    )
}
