//! Scenario configuration: every plant parameter, controller gain, supervisor
//! threshold and integrator setting, loadable from TOML with validation.
//!
//! Defaults reproduce the reference vehicle (11.3 kg box-wing VTOL drone,
//! 500 m tether, 0.159 m winch drum) and the tuning used by the acceptance
//! missions. `validation_report` runs every named invariant check and is what
//! the CLI `validate-config` subcommand prints.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid configuration:\n{}", .0.iter().map(|r| format!("  [{}] {}", r.rule, r.detail)).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<RuleFailure>),
}

#[derive(Debug, Clone)]
pub struct RuleFailure {
    pub rule: String,
    pub detail: String,
}

/// One line of the validation report.
#[derive(Debug, Clone)]
pub struct RuleCheck {
    pub rule: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct DroneConfig {
    /// Mass, kg.
    pub mass: f64,
    /// Gravity, m/s^2.
    pub g: f64,
    /// Inertia diagonal, kg m^2.
    pub i_xx: f64,
    pub i_yy: f64,
    pub i_zz: f64,
    /// Product of inertia I_zx, kg m^2 (enters the x/z moment coupling).
    pub i_zx: f64,
    /// Per-propeller thrust coefficient, N/rpm^2.
    pub b_thrust: f64,
    /// Per-propeller drag-torque coefficient, N m/rpm^2.
    pub c_torque: f64,
    /// Propeller speed limit, rpm.
    pub omega_max_rpm: f64,
    /// Propeller arm coordinates in B, m (x then y, one pair per rotor).
    pub prop_d_x: [f64; 4],
    pub prop_d_y: [f64; 4],
    /// Summed rotor angular momentum about z_B, kg m^2/s.
    pub rotor_h_z: f64,
    /// Tether attachment point in B, m.
    pub tether_attach: [f64; 3],
    /// Moment saturation per axis, N m.
    pub moment_limit: f64,
}

impl Default for DroneConfig {
    fn default() -> Self {
        Self {
            mass: 11.3,
            g: 9.81,
            i_xx: 4.53,
            i_yy: 3.28,
            i_zz: 5.49,
            i_zx: -1.35,
            b_thrust: 1.1e-6,
            c_torque: 2.04e-8,
            omega_max_rpm: 12000.0,
            prop_d_x: [0.632, 0.632, 0.632, 0.632],
            prop_d_y: [0.395, 0.585, 0.395, 0.585],
            rotor_h_z: 0.0,
            tether_attach: [-1.0, 0.0, 0.0],
            moment_limit: 20.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct AeroConfig {
    /// Air density, kg/m^3.
    pub rho: f64,
    /// Reference surface in the force equations (all four wings), m^2.
    pub s_ref: f64,
    /// Upper-wing surface in the tether-drag lumping denominator, m^2.
    pub s_up: f64,
    /// Surface used in the generation-torque constant, m^2.
    pub s_generation: f64,
    /// Wing span (lateral reference length), m.
    pub span: f64,
    /// Mean chord (longitudinal reference length), m.
    pub chord: f64,
    /// Optional coefficient-table file; the built-in table is used when None.
    pub table_path: Option<String>,
    /// Static moment-coefficient slopes, 1/rad.
    pub c_l_beta: f64,
    pub c_m_alpha: f64,
    pub c_n_beta: f64,
    /// Incidence of zero static pitch moment, rad.
    pub alpha_trim: f64,
    /// Rate-damping derivatives (dimensionless, negative).
    pub c_lp: f64,
    pub c_mq: f64,
    pub c_nr: f64,
}

impl Default for AeroConfig {
    fn default() -> Self {
        Self {
            rho: 1.225,
            s_ref: 0.84,
            s_up: 0.21,
            s_generation: 0.84,
            span: 1.17,
            chord: 0.18,
            table_path: None,
            c_l_beta: -0.05,
            c_m_alpha: -0.1,
            c_n_beta: 0.05,
            alpha_trim: 0.0,
            c_lp: -0.5,
            c_mq: -0.5,
            c_nr: -0.5,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct TetherConfig {
    /// Force at maximum relative elongation, N.
    pub f_max: f64,
    /// Maximum relative elongation.
    pub eps_max: f64,
    /// Regularization knee of the slack-side exponential branch.
    pub eps_0: f64,
    /// Diameter, m.
    pub d_t: f64,
    /// Tether drag coefficient per unit length.
    pub c_dl: f64,
    /// Total tether on the drum, m.
    pub l_total: f64,
    /// Unrolled length at mission start, m.
    pub l_init: f64,
}

impl Default for TetherConfig {
    fn default() -> Self {
        Self {
            f_max: 2000.0,
            eps_max: 0.01,
            eps_0: 0.001,
            d_t: 0.83e-3,
            c_dl: 1.0,
            l_total: 500.0,
            l_init: 5.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct WinchConfig {
    /// Total drum + machine inertia, kg m^2.
    pub inertia: f64,
    /// Drum radius, m.
    pub r_w: f64,
    /// Viscous friction, N m s.
    pub beta_f: f64,
    /// Motor torque saturation, N m.
    pub t_max: f64,
}

impl Default for WinchConfig {
    fn default() -> Self {
        Self {
            inertia: 0.2,
            r_w: 0.159,
            beta_f: 0.01,
            t_max: 200.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct GsControlConfig {
    /// Low-force PD proportional gain, N m/m.
    pub k_p: f64,
    /// Low-force PD derivative gain, N m s/m.
    pub k_d: f64,
    /// Derivative-filter pole, 1/s.
    pub n_d: f64,
    /// Extra released length tracked in low-force mode, m.
    pub delta_l_hat: f64,
    /// Generation torque constant, N m s^2/rad^2; computed from the aero
    /// table at startup when None.
    pub k_generation: Option<f64>,
    /// Lift coefficient used in the k_generation formula.
    pub c_l_generation: f64,
    /// Reentry speed-loop gain, N m s/m.
    pub k_reentry: f64,
    /// Reel-in speed reference for taut reentry strategies, m/s (negative).
    pub ldot_ref_reentry: f64,
}

impl Default for GsControlConfig {
    fn default() -> Self {
        Self {
            k_p: 60.0,
            k_d: 25.0,
            n_d: 20.0,
            delta_l_hat: 2.0,
            k_generation: None,
            c_l_generation: 0.65,
            k_reentry: 40.0,
            ldot_ref_reentry: -2.5,
        }
    }
}

/// How the reference velocity angle is computed from the target bearing.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum NuRefSign {
    /// Formula exactly as printed.
    Paper,
    /// Elevation term negated; converges to the target with L_N to zenith.
    Flipped,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct FlightControlConfig {
    /// Hover cascade pole magnitudes, 1/s (position -> speed -> attitude).
    pub pole_hover_position: f64,
    pub pole_hover_speed: f64,
    pub pole_hover_attitude: f64,
    /// Hover velocity-loop integral gain, 1/s^2; rejects the steady wind
    /// drag during position holds.
    pub hover_vel_ki: f64,
    /// Clamp on the integral acceleration contribution, m/s^2.
    pub hover_int_limit: f64,
    /// Dynamic-flight altitude-loop pole, 1/s.
    pub pole_ff_altitude: f64,
    /// Dynamic-flight attitude proportional gain (state-feedback equivalent), 1/s.
    pub k_ff_attitude: f64,
    /// Taut-tether attitude poles k_phiL = k_thetaL, 1/s.
    pub pole_tt: f64,
    /// Velocity-angle channel gain, 1/s; well below pole_tt so the heading
    /// never winds far ahead of the achievable velocity turn rate.
    pub k_nu: f64,
    /// Velocity-angle channel rate clamp, rad/s.
    pub nu_rate_limit: f64,
    /// Cap on the commanded lead of the nose heading over the velocity
    /// angle, rad; keeps sideslip near the side-force peak instead of
    /// winding past it.
    pub nu_lead_limit: f64,
    /// Keep-out half-angle around nu = 0 (straight up-sphere) for the
    /// velocity-angle reference, rad; limits the commanded climb slope so
    /// the vehicle does not zoom to a stall short of the target.
    pub nu_climb_limit: f64,
    /// Velocity-angle error above which the turn counts as a reversal and
    /// is routed through a dive, rad.
    pub dive_turn_threshold: f64,
    /// Velocity-angle error below which a latched dive turn releases, rad.
    pub dive_turn_exit: f64,
    /// Minimum altitude for flying a reversal as a diving turn; below it
    /// the turn climbs the long way round, m.
    pub dive_turn_min_altitude: f64,
    /// Maximum speed for latching a diving reversal, m/s; a fast entry
    /// digs the dive deeper than the pull-out floor can absorb.
    pub dive_turn_max_speed: f64,
    /// Pull-out floor, m; below it the velocity-angle reference is kept at
    /// or above the horizon and a latched dive turn is released.
    pub pullout_altitude: f64,
    /// Nose-up pitch held during the hover-capture maneuver, rad.
    pub capture_pitch: f64,
    /// Low-level rate-loop pole, 1/s.
    pub pole_rate: f64,
    /// Body-rate reference clamp, rad/s; keeps large attitude errors from
    /// driving the moment allocation into a saturation limit cycle.
    pub rate_ref_limit: f64,
    /// Thrust / vertical-acceleration loop pole, 1/s.
    pub pole_thrust: f64,
    /// Altitude-error to pitch-reference gain in dynamic flight, rad/m.
    pub k_altitude_to_pitch: f64,
    /// Pitch-reference clamp in dynamic flight, rad.
    pub pitch_ref_limit: f64,
    /// Hover tilt-reference clamp, rad.
    pub tilt_limit: f64,
    /// Hover horizontal velocity-reference clamp, m/s.
    pub hover_speed_limit: f64,
    /// Airspeed held by the powered free-flight thrust loop, m/s.
    pub ff_airspeed_ref: f64,
    /// Front-airspeed-hold thrust gain, 1/s (acceleration per m/s of error);
    /// must out-muscle weight during the powered reentry climb.
    pub k_ff_thrust: f64,
    /// Glide (thrust off) instead of powered free flight.
    pub ff_glide: bool,
    pub nu_ref_sign: NuRefSign,
}

impl Default for FlightControlConfig {
    fn default() -> Self {
        Self {
            pole_hover_position: 0.2,
            pole_hover_speed: 1.0,
            pole_hover_attitude: 5.0,
            hover_vel_ki: 0.3,
            hover_int_limit: 3.0,
            pole_ff_altitude: 10.0,
            k_ff_attitude: 10.0,
            pole_tt: 5.0,
            k_nu: 0.8,
            nu_rate_limit: 2.0,
            nu_lead_limit: 0.8,
            nu_climb_limit: 0.96,
            dive_turn_threshold: 99.0,
            dive_turn_exit: 1.3,
            dive_turn_min_altitude: 45.0,
            dive_turn_max_speed: 18.0,
            pullout_altitude: 34.0,
            capture_pitch: 1.45,
            pole_rate: 40.0,
            rate_ref_limit: 3.0,
            pole_thrust: 20.0,
            k_altitude_to_pitch: 0.03,
            pitch_ref_limit: 0.5,
            tilt_limit: 0.55,
            hover_speed_limit: 20.0,
            ff_airspeed_ref: 20.0,
            k_ff_thrust: 6.0,
            ff_glide: false,
            nu_ref_sign: NuRefSign::Flipped,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    FreeFlight,
    RotationAroundGs,
    ClimbAndDescend,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SupervisorConfig {
    /// Front speed enabling the taut-tether controller, m/s.
    pub v_enable: f64,
    /// Tether length starting reentry, m.
    pub l_max: f64,
    /// Tether length ending reentry, m.
    pub l_min: f64,
    /// Wind-speed operating window, m/s.
    pub cut_in: f64,
    pub cut_out: f64,
    /// Downwind start point, spherical (elevation rad, distance m).
    pub start_elevation: f64,
    pub start_distance: f64,
    /// Position tolerance for reaching the start point, m.
    pub start_tolerance: f64,
    /// Speed command while accelerating toward traction, m/s.
    pub transition_speed: f64,
    /// Tilt limit during the transition to generation, rad. Also sets the
    /// true airspeed at the traction handover: the nose aligns with the
    /// flow at the tilt limit, so the front-airspeed threshold corresponds
    /// to roughly v_enable / sin(tilt).
    pub transition_tilt_limit: f64,
    /// Climb-rate command during the transition to generation, m/s; buys
    /// altitude margin for the first traction turn.
    pub transition_climb_rate: f64,
    /// Traction figure-of-eight targets: elevation and +-azimuth, rad.
    pub traction_elevation: f64,
    pub traction_azimuth: f64,
    /// Angular distance that toggles the active target, rad.
    pub target_switch_radius: f64,
    /// Completed pumping cycles before the mission winds down.
    pub n_cycles: usize,
    /// Land after the last cycle instead of holding hover.
    pub land: bool,
    pub strategy: StrategyKind,
    /// Free-flight reentry: lateral offset of the glide waypoint from the
    /// ground station, m, and its altitude, m.
    pub ff_waypoint_lateral: f64,
    pub ff_waypoint_altitude: f64,
    /// Azimuth magnitude of the free-flight exit waypoint, rad; the exit is
    /// flown to the side opposite the return waypoint so the sphere crossing
    /// has tangential speed for the first figure-eight turn.
    pub ff_exit_azimuth: f64,
    /// Minimum elevation of the outward re-tension crossing, rad.
    pub retension_elevation: f64,
    /// Tether force above which the line counts as re-tensioned, N.
    pub retension_force: f64,
    /// Time the force must hold above the threshold before the taut-tether
    /// handover, s.
    pub retension_hold: f64,
    /// Rotation reentry: elevation of the circular path, rad, and azimuth
    /// step between successive waypoints, rad.
    pub rotation_elevation: f64,
    pub rotation_azimuth_step: f64,
    /// Climb-and-descend reentry: eight elevation (>= 60 deg) and +-azimuth, rad.
    pub cad_elevation: f64,
    pub cad_azimuth: f64,
    /// Reel-in speed reference for climb-and-descend, m/s (negative).
    pub cad_ldot_ref: f64,
    /// Airspeed below which the transition to hovering captures, m/s.
    pub hover_capture_speed: f64,
    /// Altitude where the landing glide hands over to vertical descent, m.
    pub landing_glide_altitude: f64,
    /// Vertical landing descent rate, m/s (positive down).
    pub landing_descent_rate: f64,
}

impl Default for SupervisorConfig {
    fn default() -> Self {
        Self {
            v_enable: 12.0,
            l_max: 160.0,
            l_min: 130.0,
            cut_in: 4.0,
            cut_out: 15.0,
            start_elevation: 32f64.to_radians(),
            start_distance: 130.0,
            start_tolerance: 3.0,
            transition_speed: 20.0,
            transition_tilt_limit: 0.85,
            transition_climb_rate: 2.5,
            traction_elevation: 30f64.to_radians(),
            traction_azimuth: 15f64.to_radians(),
            target_switch_radius: 5f64.to_radians(),
            n_cycles: 3,
            land: true,
            strategy: StrategyKind::FreeFlight,
            ff_waypoint_lateral: 40.0,
            ff_waypoint_altitude: 35.0,
            ff_exit_azimuth: 12f64.to_radians(),
            retension_elevation: 20f64.to_radians(),
            retension_force: 30.0,
            retension_hold: 0.4,
            rotation_elevation: 40f64.to_radians(),
            rotation_azimuth_step: 45f64.to_radians(),
            cad_elevation: 65f64.to_radians(),
            cad_azimuth: 20f64.to_radians(),
            cad_ldot_ref: -1.5,
            hover_capture_speed: 4.0,
            landing_glide_altitude: 50.0,
            landing_descent_rate: 2.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct WindConfig {
    /// Mean wind vector in F, m/s.
    pub mean: [f64; 3],
}

impl Default for WindConfig {
    fn default() -> Self {
        Self {
            mean: [7.0, 0.0, 0.0],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    /// Physics step, s.
    pub dt_physics: f64,
    /// Controller step, s; integer multiple of dt_physics.
    pub dt_control: f64,
    /// Hard mission time limit, s.
    pub duration: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt_physics: 1e-3,
            dt_control: 1e-2,
            duration: 600.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub drone: DroneConfig,
    pub aero: AeroConfig,
    pub tether: TetherConfig,
    pub winch: WinchConfig,
    pub gs_control: GsControlConfig,
    pub flight_control: FlightControlConfig,
    pub supervisor: SupervisorConfig,
    pub wind: WindConfig,
    pub sim: SimConfig,
}

impl ScenarioConfig {
    pub fn from_toml_str(s: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(s)?)
    }

    pub fn load(path: &str) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_string(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Runs every named invariant check; the config is usable iff all pass.
    pub fn validation_report(&self) -> Vec<RuleCheck> {
        let mut out = Vec::new();
        let mut check = |rule: &'static str, passed: bool, detail: String| {
            out.push(RuleCheck {
                rule,
                passed,
                detail,
            });
        };

        let d = &self.drone;
        check("mass_positive", d.mass > 0.0, format!("m = {}", d.mass));
        let inertia_det = d.i_xx * d.i_zz - d.i_zx * d.i_zx;
        check(
            "inertia_positive_definite",
            d.i_xx > 0.0 && d.i_yy > 0.0 && d.i_zz > 0.0 && inertia_det > 0.0,
            format!("Ixx*Izz - Izx^2 = {inertia_det:.4}"),
        );
        check(
            "rotor_coefficients_positive",
            d.b_thrust > 0.0 && d.c_torque > 0.0 && d.omega_max_rpm > 0.0,
            format!("b = {}, c = {}", d.b_thrust, d.c_torque),
        );
        check(
            "moment_limit_positive",
            d.moment_limit > 0.0,
            format!("limit = {}", d.moment_limit),
        );

        let a = &self.aero;
        check(
            "aero_surfaces_positive",
            a.rho > 0.0 && a.s_ref > 0.0 && a.s_up > 0.0 && a.s_generation > 0.0,
            format!("rho = {}, S = {}", a.rho, a.s_ref),
        );
        check(
            "aero_lengths_positive",
            a.span > 0.0 && a.chord > 0.0,
            format!("b = {}, chord = {}", a.span, a.chord),
        );
        check(
            "aero_damping_nonpositive",
            a.c_lp <= 0.0 && a.c_mq <= 0.0 && a.c_nr <= 0.0,
            format!("c_lp = {}, c_mq = {}, c_nr = {}", a.c_lp, a.c_mq, a.c_nr),
        );

        let t = &self.tether;
        check(
            "tether_elongation_ordering",
            0.0 < t.eps_0 && t.eps_0 < t.eps_max,
            format!("eps_0 = {}, eps_max = {}", t.eps_0, t.eps_max),
        );
        check("tether_f_max_positive", t.f_max > 0.0, format!("F_max = {}", t.f_max));
        check(
            "tether_lengths_ordered",
            0.0 < t.l_init && t.l_init < t.l_total && t.d_t > 0.0,
            format!("L_init = {}, L_total = {}", t.l_init, t.l_total),
        );

        let w = &self.winch;
        check(
            "winch_parameters_positive",
            w.inertia > 0.0 && w.r_w > 0.0 && w.beta_f >= 0.0 && w.t_max > 0.0,
            format!("J = {}, r_w = {}, beta_f = {}", w.inertia, w.r_w, w.beta_f),
        );

        let g = &self.gs_control;
        check(
            "gs_gains_positive",
            g.k_p > 0.0 && g.k_d > 0.0 && g.n_d > 0.0 && g.k_reentry > 0.0 && g.delta_l_hat > 0.0,
            format!("Kp = {}, Kd = {}, Nd = {}", g.k_p, g.k_d, g.n_d),
        );
        check(
            "reel_in_reference_negative",
            g.ldot_ref_reentry < 0.0 && self.supervisor.cad_ldot_ref < 0.0,
            format!(
                "Ldot_ref = {}, cad = {}",
                g.ldot_ref_reentry, self.supervisor.cad_ldot_ref
            ),
        );

        let f = &self.flight_control;
        let poles_positive = [
            f.pole_hover_position,
            f.pole_hover_speed,
            f.pole_hover_attitude,
            f.pole_ff_altitude,
            f.k_ff_attitude,
            f.pole_tt,
            f.pole_rate,
            f.pole_thrust,
        ]
        .iter()
        .all(|p| *p > 0.0);
        check("poles_positive", poles_positive, String::new());
        // Cascade separation along each configured loop chain; the
        // state-feedback flight attitude gain is not part of a chain.
        let chains: [&[f64]; 3] = [
            &[
                f.pole_hover_position,
                f.pole_hover_speed,
                f.pole_hover_attitude,
                f.pole_rate,
            ],
            &[f.pole_tt, f.pole_rate],
            &[f.pole_ff_altitude, f.pole_rate],
        ];
        let mut worst = f64::INFINITY;
        for chain in chains {
            for pair in chain.windows(2) {
                worst = worst.min(pair[1] / pair[0]);
            }
        }
        check(
            "cascade_separation",
            worst >= 4.0,
            format!("worst inner/outer pole ratio = {worst:.2}"),
        );

        let s = &self.supervisor;
        check(
            "length_thresholds_ordered",
            s.l_min < s.l_max && s.l_max - s.l_min >= 10.0 && s.l_max <= t.l_total,
            format!("L_min = {}, L_max = {}", s.l_min, s.l_max),
        );
        check(
            "wind_window_ordered",
            0.0 < s.cut_in && s.cut_in < s.cut_out,
            format!("cut_in = {}, cut_out = {}", s.cut_in, s.cut_out),
        );
        check(
            "speed_thresholds_positive",
            s.v_enable > 0.0 && s.hover_capture_speed > 0.0,
            format!("v_enable = {}", s.v_enable),
        );
        check(
            "traction_targets_valid",
            s.traction_elevation > 0.0
                && s.traction_elevation < std::f64::consts::FRAC_PI_2
                && s.traction_azimuth > 0.0
                && s.target_switch_radius > 0.0,
            format!(
                "elevation = {:.3}, azimuth = {:.3}",
                s.traction_elevation, s.traction_azimuth
            ),
        );
        check(
            "cad_elevation_high",
            s.cad_elevation >= 60f64.to_radians() && s.cad_elevation < std::f64::consts::FRAC_PI_2,
            format!("cad_elevation = {:.3} rad", s.cad_elevation),
        );
        check(
            "start_point_valid",
            s.start_distance > 0.0
                && s.start_elevation > 0.0
                && s.start_elevation < std::f64::consts::FRAC_PI_2
                && s.start_tolerance > 0.0,
            format!("distance = {}", s.start_distance),
        );

        let sim = &self.sim;
        let ratio = sim.dt_control / sim.dt_physics;
        check(
            "timestep_positive",
            sim.dt_physics > 0.0 && sim.dt_control > 0.0 && sim.duration > 0.0,
            format!("dt_physics = {}, dt_control = {}", sim.dt_physics, sim.dt_control),
        );
        check(
            "control_step_multiple",
            sim.dt_physics > 0.0 && (ratio - ratio.round()).abs() < 1e-9 && ratio >= 1.0 - 1e-9,
            format!("dt_control/dt_physics = {ratio}"),
        );

        check(
            "aero_table_valid",
            crate::aero::AeroCoeffTable::from_config(a).is_ok(),
            match crate::aero::AeroCoeffTable::from_config(a) {
                Ok(_) => "table loads and is monotone".to_string(),
                Err(e) => e.to_string(),
            },
        );

        out
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let failures: Vec<RuleFailure> = self
            .validation_report()
            .into_iter()
            .filter(|c| !c.passed)
            .map(|c| RuleFailure {
                rule: c.rule.to_string(),
                detail: c.detail,
            })
            .collect();
        if failures.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(failures))
        }
    }

    /// Physics steps per control step.
    pub fn steps_per_control(&self) -> usize {
        (self.sim.dt_control / self.sim.dt_physics).round() as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_passes_all_checks() {
        let cfg = ScenarioConfig::default();
        let report = cfg.validation_report();
        for check in &report {
            assert!(check.passed, "rule {} failed: {}", check.rule, check.detail);
        }
        assert!(report.len() > 15);
    }

    #[test]
    fn toml_round_trip() {
        let cfg = ScenarioConfig::default();
        let text = cfg.to_toml_string();
        let back = ScenarioConfig::from_toml_str(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn length_threshold_ordering_rule() {
        let mut cfg = ScenarioConfig::default();
        cfg.supervisor.l_min = 130.0;
        let report = cfg.validation_report();
        let rule = report
            .iter()
            .find(|c| c.rule == "length_thresholds_ordered")
            .unwrap();
        assert!(!rule.passed);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn eps_ordering_rule() {
        let mut cfg = ScenarioConfig::default();
        cfg.tether.eps_0 = cfg.tether.eps_max;
        let report = cfg.validation_report();
        assert!(!report
            .iter()
            .find(|c| c.rule == "tether_elongation_ordering")
            .unwrap()
            .passed);
    }

    #[test]
    fn cascade_rule_catches_slow_inner_loop() {
        let mut cfg = ScenarioConfig::default();
        cfg.flight_control.pole_rate = 12.0;
        assert!(!cfg
            .validation_report()
            .iter()
            .find(|c| c.rule == "cascade_separation")
            .unwrap()
            .passed);
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(ScenarioConfig::from_toml_str("[drone]\nmasss = 1.0\n").is_err());
    }

    #[test]
    fn partial_toml_fills_defaults() {
        let cfg = ScenarioConfig::from_toml_str("[wind]\nmean = [9.0, 0.0, 0.0]\n").unwrap();
        assert_eq!(cfg.wind.mean, [9.0, 0.0, 0.0]);
        assert_eq!(cfg.drone.mass, 11.3);
    }
}
