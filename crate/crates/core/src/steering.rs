//! Closed-form steering-authority analysis: turning radii of the roll- and
//! yaw-based strategies, vertical-loop top/bottom radii, and the singular
//! speed below which the bottom turn is infeasible.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SteeringError {
    #[error("parameter {name} must be positive (got {value})")]
    NonPositive { name: &'static str, value: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct SteeringParams {
    /// Mass, kg.
    pub mass: f64,
    /// Air density, kg/m^3.
    pub rho: f64,
    /// Lift coefficient of the horizontal wings.
    pub c_l: f64,
    /// Lateral lift coefficient of the vertical wings.
    pub c_l_lateral: f64,
    /// Per-wing surfaces, m^2.
    pub s_up: f64,
    pub s_down: f64,
    pub s_right: f64,
    pub s_left: f64,
    /// Wingspan, m; radii below twice this are outside model validity.
    pub span: f64,
    pub g: f64,
}

impl Default for SteeringParams {
    fn default() -> Self {
        Self {
            mass: 11.0,
            rho: 1.225,
            c_l: 1.0,
            c_l_lateral: 1.0,
            s_up: 0.21,
            s_down: 0.21,
            s_right: 0.21,
            s_left: 0.21,
            span: 1.17,
            g: 9.81,
        }
    }
}

impl SteeringParams {
    pub fn check(&self) -> Result<(), SteeringError> {
        let fields = [
            ("mass", self.mass),
            ("rho", self.rho),
            ("c_l", self.c_l),
            ("c_l_lateral", self.c_l_lateral),
            ("s_up", self.s_up),
            ("s_down", self.s_down),
            ("s_right", self.s_right),
            ("s_left", self.s_left),
            ("span", self.span),
            ("g", self.g),
        ];
        for (name, value) in fields {
            if value <= 0.0 {
                return Err(SteeringError::NonPositive { name, value });
            }
        }
        Ok(())
    }
}

/// Turning radius of the roll-based strategy at bank angle `phi`;
/// `None` (unbounded) at zero bank.
pub fn roll_radius(p: &SteeringParams, phi: f64) -> Option<f64> {
    let s = phi.sin();
    if s <= 0.0 {
        return None;
    }
    Some(2.0 * p.mass / (p.rho * (p.s_up + p.s_down) * p.c_l * s))
}

/// Turning radius of the yaw-based strategy (speed-independent).
pub fn yaw_radius(p: &SteeringParams) -> f64 {
    2.0 * p.mass / (p.rho * (p.s_right + p.s_left) * p.c_l_lateral)
}

/// Lateral centripetal force available at speed `v`, N.
pub fn centripetal_force(p: &SteeringParams, v: f64) -> f64 {
    0.5 * p.rho * (p.s_right + p.s_left) * p.c_l_lateral * v * v
}

/// Speed at which the lateral force exactly cancels gravity; below it the
/// bottom turn of a vertical loop is infeasible.
pub fn singular_speed(p: &SteeringParams) -> f64 {
    (2.0 * p.mass * p.g / (p.rho * (p.s_right + p.s_left) * p.c_l_lateral)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopRadii {
    /// Top-of-loop radius (gravity centripetal), m.
    pub r_top: f64,
    /// Bottom-of-loop radius, m; None below the singular speed.
    pub r_bottom: Option<f64>,
    /// Radius below which the rigid-body analysis is not valid.
    pub validity_floor: f64,
}

/// Top/bottom vertical-loop radii at speed `v` using the lateral wings.
pub fn loop_radii(p: &SteeringParams, v: f64) -> LoopRadii {
    let f_c = centripetal_force(p, v);
    let w = p.mass * p.g;
    LoopRadii {
        r_top: p.mass * v * v / (f_c + w),
        r_bottom: (f_c > w).then(|| p.mass * v * v / (f_c - w)),
        validity_floor: 2.0 * p.span,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub surface_multiplier: f64,
    pub v: f64,
    pub r_top: f64,
    pub r_bottom: Option<f64>,
    pub asymptote: f64,
    pub feasible: bool,
    /// Within the small-radius validity limit of the analysis.
    pub valid: bool,
}

/// Tabulates loop radii over a speed range for each lateral-surface
/// multiplier.
pub fn radius_sweep(
    p: &SteeringParams,
    v_start: f64,
    v_end: f64,
    v_step: f64,
    multipliers: &[f64],
) -> Vec<SweepRow> {
    let mut rows = Vec::new();
    for &mult in multipliers {
        let scaled = SteeringParams {
            s_right: p.s_right * mult,
            s_left: p.s_left * mult,
            ..p.clone()
        };
        let asymptote = yaw_radius(&scaled);
        let mut v = v_start;
        while v <= v_end + 1e-9 {
            let radii = loop_radii(&scaled, v);
            rows.push(SweepRow {
                surface_multiplier: mult,
                v,
                r_top: radii.r_top,
                r_bottom: radii.r_bottom,
                asymptote,
                feasible: radii.r_bottom.is_some(),
                valid: radii.r_top >= radii.validity_floor,
            });
            v += v_step;
        }
    }
    rows
}
