//! Parameter points shared by the benchmarks.

use critmetro_core::{ClosedParams, DrivenDissipativeParams, PhaseConvention};

/// Closed protocol at Ω/ω = 200, α = 0.5 e^{−0.3i}, γ = 1e−3.
pub fn closed_point(ratio: f64) -> ClosedParams {
    ClosedParams::from_ratio(1.0, 200.0, ratio, 1e-3, 0.5, -0.3).expect("valid point")
}

/// Resonantly driven point at Ω/ω = 100.5, η = 8, κ = 1, g/g_c = 0.999.
pub fn driven_point(t: f64) -> DrivenDissipativeParams {
    let b = ClosedParams::from_ratio(1.0, 100.5, 0.999, 1e-3, 0.0, 0.0).expect("valid base");
    DrivenDissipativeParams::resonant(b, 8.0, 1.0, t, PhaseConvention::Zero).expect("valid drive")
}
