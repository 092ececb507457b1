//! Winch/generator plant and the three ground-station controllers: low-force
//! tether tracking, quadratic generation braking, and reel-in speed control.

use serde::{Deserialize, Serialize};

use crate::config::{GsControlConfig, TetherConfig, WinchConfig};

/// Drum state; the unrolled length follows the drum angle exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WinchState {
    /// Drum angle, rad (0 at mission start).
    pub lambda: f64,
    /// Drum speed, rad/s; positive is reel-out.
    pub lambda_dot: f64,
}

impl WinchState {
    pub fn at_rest() -> Self {
        Self {
            lambda: 0.0,
            lambda_dot: 0.0,
        }
    }

    /// Unrolled tether length, m.
    pub fn l_tether(&self, tether: &TetherConfig, winch: &WinchConfig) -> f64 {
        tether.l_init + winch.r_w * self.lambda
    }

    /// Reel speed, m/s.
    pub fn l_dot(&self, winch: &WinchConfig) -> f64 {
        winch.r_w * self.lambda_dot
    }
}

/// Rotational equilibrium of the motor-winch: `J lambda_ddot = F r_w - T -
/// beta_f lambda_dot`. Returns `(lambda_dot, lambda_ddot)`.
pub fn winch_derivative(
    state: &WinchState,
    f_tether: f64,
    torque: f64,
    p: &WinchConfig,
) -> (f64, f64) {
    let lambda_ddot = (f_tether * p.r_w - torque - p.beta_f * state.lambda_dot) / p.inertia;
    (state.lambda_dot, lambda_ddot)
}

/// Which ground-station control law drives the motor torque.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GsMode {
    /// PD on tether length tracking the drone distance plus a margin; keeps
    /// the tether force near zero. Only valid while reeling in.
    LowForce,
    /// Quadratic braking torque; the winch generates while reeling out.
    Generation,
    /// Proportional reel-in speed control for the taut reentry strategies.
    Reentry,
}

impl std::fmt::Display for GsMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GsMode::LowForce => "LF",
            GsMode::Generation => "GE",
            GsMode::Reentry => "TT",
        })
    }
}

/// Ground-station controller with the low-force PD's discrete memory.
#[derive(Debug, Clone)]
pub struct GsController {
    pub cfg: GsControlConfig,
    /// Resolved generation constant (config override or startup computation).
    pub k_generation: f64,
    t_max: f64,
    r_w: f64,
    /// Tether available on the drum; the low-force reference saturates here.
    l_total: f64,
    dt: f64,
    last_mode: Option<GsMode>,
    lf_prev_error: f64,
    lf_deriv_state: f64,
}

impl GsController {
    pub fn new(
        cfg: GsControlConfig,
        k_generation: f64,
        winch: &WinchConfig,
        l_total: f64,
        dt: f64,
    ) -> Self {
        Self {
            cfg,
            k_generation,
            t_max: winch.t_max,
            r_w: winch.r_w,
            l_total,
            dt,
            last_mode: None,
            lf_prev_error: 0.0,
            lf_deriv_state: 0.0,
        }
    }

    /// Generation constant `2 rho S C_L r_w^2 E`.
    pub fn generation_constant(rho: f64, s: f64, c_l: f64, r_w: f64, efficiency: f64) -> f64 {
        2.0 * rho * s * c_l * r_w * r_w * efficiency
    }

    /// Motor torque for the active mode. `drone_distance` is |p_F|, `l` the
    /// unrolled length, `l_dot` the reel speed, `ldot_ref` the reentry speed
    /// reference (ignored by the other modes).
    pub fn torque(
        &mut self,
        mode: GsMode,
        drone_distance: f64,
        l: f64,
        l_dot: f64,
        ldot_ref: f64,
    ) -> f64 {
        if self.last_mode != Some(mode) {
            self.lf_prev_error = 0.0;
            self.lf_deriv_state = 0.0;
            self.last_mode = Some(mode);
        }
        let t = match mode {
            GsMode::LowForce => self.low_force(drone_distance, l),
            GsMode::Generation => self.generation(l_dot),
            GsMode::Reentry => -self.cfg.k_reentry * (ldot_ref - l_dot),
        };
        t.clamp(-self.t_max, self.t_max)
    }

    fn low_force(&mut self, drone_distance: f64, l: f64) -> f64 {
        let l_ref = (drone_distance + self.cfg.delta_l_hat).min(self.l_total);
        let e = l_ref - l;
        // Backward-difference filtered derivative with pole N_d.
        let n = self.cfg.n_d;
        self.lf_deriv_state = (self.lf_deriv_state + n * (e - self.lf_prev_error))
            / (1.0 + n * self.dt);
        self.lf_prev_error = e;
        // Positive error (tether shorter than reference) must reel out,
        // which needs negative motor torque.
        -(self.cfg.k_p * e + self.cfg.k_d * self.lf_deriv_state)
    }

    // T = k lambda_dot^2, quadratic braking on the drum speed.
    fn generation(&self, l_dot: f64) -> f64 {
        let lambda_dot = l_dot / self.r_w;
        self.k_generation * lambda_dot * lambda_dot
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn winch_balance() {
        let p = WinchConfig::default();
        let s = WinchState {
            lambda: 0.0,
            lambda_dot: 12.58,
        };
        let (ld, ldd) = winch_derivative(&s, 500.0, 70.0, &p);
        assert_abs_diff_eq!(ld, 12.58);
        assert_abs_diff_eq!(ldd, (79.5 - 70.0 - 0.1258) / 0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(ldd, 46.87, epsilon = 0.01);
        // Equilibrium torque gives zero acceleration.
        let t_eq = 500.0 * p.r_w - p.beta_f * s.lambda_dot;
        let (_, ldd) = winch_derivative(&s, 500.0, t_eq, &p);
        assert_abs_diff_eq!(ldd, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn free_decay_time_constant() {
        let p = WinchConfig::default();
        let s = WinchState {
            lambda: 0.0,
            lambda_dot: 3.0,
        };
        let (_, ldd) = winch_derivative(&s, 0.0, 0.0, &p);
        // J/beta_f = 20 s time constant
        assert_abs_diff_eq!(ldd, -3.0 / 20.0, epsilon = 1e-12);
    }

    #[test]
    fn generation_constant_formula() {
        let k = GsController::generation_constant(1.225, 0.84, 1.0, 0.159, 5.0);
        assert_abs_diff_eq!(k, 0.2602, epsilon = 1e-3);
    }

    #[test]
    fn generation_torque_quadratic_and_even() {
        let mut c = controller();
        c.k_generation = 0.26014;
        // Reel-out at 2 m/s is a drum speed of 12.58 rad/s.
        let t1 = c.torque(GsMode::Generation, 0.0, 0.0, 2.0, 0.0);
        assert_abs_diff_eq!(t1, 41.2, epsilon = 0.1);
        let t2 = c.torque(GsMode::Generation, 0.0, 0.0, 4.0, 0.0);
        assert_abs_diff_eq!(t2 / t1, 4.0, epsilon = 1e-9);
        let tn = c.torque(GsMode::Generation, 0.0, 0.0, -2.0, 0.0);
        assert_abs_diff_eq!(tn, t1, epsilon = 1e-12);
        assert_abs_diff_eq!(c.torque(GsMode::Generation, 0.0, 0.0, 0.0, 0.0), 0.0);
    }

    #[test]
    fn reentry_torque_signs() {
        let mut c = controller();
        c.cfg.k_reentry = 50.0;
        assert_abs_diff_eq!(c.torque(GsMode::Reentry, 0.0, 0.0, -3.0, -3.0), 0.0);
        // Reeling too slowly: positive torque drives reel-in.
        let t = c.torque(GsMode::Reentry, 0.0, 0.0, -1.0, -3.0);
        assert_abs_diff_eq!(t, 100.0, epsilon = 1e-9);
    }

    #[test]
    fn low_force_zero_error() {
        let mut c = controller();
        let t = c.torque(GsMode::LowForce, 50.0, 52.0, 0.0, 0.0);
        assert_abs_diff_eq!(t, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn low_force_first_sample_step() {
        let mut c = controller();
        // Step error of 1 m (tether 1 m short of reference).
        let t = c.torque(GsMode::LowForce, 50.0, 51.0, 0.0, 0.0);
        let n = c.cfg.n_d;
        let deriv = n * 1.0 / (1.0 + n * c.dt);
        let expected = -(c.cfg.k_p * 1.0 + c.cfg.k_d * deriv);
        let expected = expected.clamp(-200.0, 200.0);
        assert_abs_diff_eq!(t, expected, epsilon = 1e-9);
        assert!(t < 0.0, "shortfall must reel out (negative torque)");
    }

    #[test]
    fn low_force_memory_resets_on_mode_change() {
        let mut c = controller();
        c.torque(GsMode::LowForce, 50.0, 51.0, 0.0, 0.0);
        c.torque(GsMode::Generation, 50.0, 51.0, 2.0, 0.0);
        let t1 = c.torque(GsMode::LowForce, 50.0, 51.0, 0.0, 0.0);
        let mut fresh = controller();
        let t2 = fresh.torque(GsMode::LowForce, 50.0, 51.0, 0.0, 0.0);
        assert_abs_diff_eq!(t1, t2, epsilon = 1e-12);
    }

    #[test]
    fn torque_saturates() {
        let mut c = controller();
        let t = c.torque(GsMode::LowForce, 200.0, 50.0, 0.0, 0.0);
        assert_abs_diff_eq!(t, -200.0);
    }

    fn controller() -> GsController {
        GsController::new(
            GsControlConfig::default(),
            0.3,
            &WinchConfig::default(),
            500.0,
            0.01,
        )
    }
}
