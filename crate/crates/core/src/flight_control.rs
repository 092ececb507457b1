//! Drone-side controllers: inertia-aware low-level rate/thrust control, the
//! hovering cascade, the free-flight (dynamic) controller, and the
//! taut-tether velocity-angle guidance.

use crate::config::{DroneConfig, FlightControlConfig, NuRefSign};
use crate::frames::{
    body_to_local, extract_euler, inertial_to_local, wrap_angle, EulerConvention, FrameError,
    SphericalPosition,
};
use crate::vehicle::{ControlCommand, VehicleState};
use crate::{Mat3, Vec3};

/// Tangential speed below which the velocity angle holds its last value.
pub const MIN_TANGENTIAL_SPEED: f64 = 1e-6;
/// Target-bearing magnitude below which the reference angle holds its value.
pub const MIN_BEARING: f64 = 1e-9;

/// Which high-level drone controller is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DroneMode {
    Hover,
    FreeFlight,
    TautTether,
}

impl std::fmt::Display for DroneMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DroneMode::Hover => "HO",
            DroneMode::FreeFlight => "FF",
            DroneMode::TautTether => "TT",
        })
    }
}

/// Reference handed from the high-level controllers to the low-level one.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AttitudeRef {
    pub p_ref: f64,
    pub q_ref: f64,
    pub r_ref: f64,
    /// Total thrust reference, N.
    pub u1_ref: f64,
}

/// Hover guidance: position hold or direct velocity command.
#[derive(Debug, Clone, Copy)]
pub struct HoverRefs {
    pub pos: Vec3,
    /// Velocity feed-forward (the whole command when `use_position` is off).
    pub vel: Vec3,
    pub use_position: bool,
    pub yaw: f64,
    /// Per-phase tilt-limit override, rad.
    pub tilt_limit: Option<f64>,
}

impl Default for HoverRefs {
    fn default() -> Self {
        Self {
            pos: Vec3::zeros(),
            vel: Vec3::zeros(),
            use_position: false,
            yaw: 0.0,
            tilt_limit: None,
        }
    }
}

/// Free-flight guidance: fly toward a waypoint at a reference altitude.
#[derive(Debug, Clone, Copy)]
pub struct FreeFlightRefs {
    pub waypoint: Vec3,
    pub altitude: f64,
    /// Airspeed held by the thrust loop in powered flight, m/s.
    pub airspeed: f64,
    /// Hover-capture maneuver: pitch hard nose-up on weight-level thrust to
    /// bleed the front airspeed for the switch back to the hover cascade.
    pub capture: bool,
}

/// Taut-tether guidance target in spherical coordinates.
#[derive(Debug, Clone, Copy)]
pub struct TautRefs {
    pub theta_el_ref: f64,
    pub phi_az_ref: f64,
}

/// Velocity angle on the tether sphere: 0 toward local North (zenith
/// tangent), +pi/2 toward local West. `p_dot_l` is the drone velocity in L.
pub fn velocity_angle(p_dot_l: Vec3) -> Option<f64> {
    let n = p_dot_l.y;
    let w = p_dot_l.z;
    if n.hypot(w) < MIN_TANGENTIAL_SPEED {
        return None;
    }
    Some(w.atan2(n))
}

/// Reference velocity angle toward the target point. `None` when the target
/// coincides with the current position.
pub fn reference_velocity_angle(
    target: &TautRefs,
    current: &SphericalPosition,
    sign: NuRefSign,
) -> Option<f64> {
    let d_phi = wrap_angle(target.phi_az_ref - current.phi_az);
    let d_theta = target.theta_el_ref - current.theta_el;
    if d_phi.abs() < MIN_BEARING && d_theta.abs() < MIN_BEARING {
        return None;
    }
    let y = -d_phi * current.theta_el.cos();
    let x = match sign {
        NuRefSign::Paper => -d_theta,
        NuRefSign::Flipped => d_theta,
    };
    Some(y.atan2(x))
}

/// Taut-tether attitude law: proportional regulation of the local Euler
/// angles, with the yaw channel tracking the velocity angle.
pub fn taut_tether_rates(
    phi_l: f64,
    theta_l: f64,
    nu: f64,
    nu_ref: f64,
    k: f64,
) -> (f64, f64, f64) {
    (
        k * (0.0 - phi_l),
        k * (0.0 - theta_l),
        k * wrap_angle(nu_ref - nu),
    )
}

/// Local-Euler-rate to body-rate map of the taut-tether controller.
pub fn euler_rates_to_body_rates(
    phi_l: f64,
    theta_l: f64,
    phi_dot: f64,
    theta_dot: f64,
    psi_dot: f64,
) -> (f64, f64, f64) {
    let (sp, cp) = phi_l.sin_cos();
    let (st, ct) = theta_l.sin_cos();
    (
        sp * theta_dot + cp * ct * psi_dot,
        cp * theta_dot - sp * ct * psi_dot,
        phi_dot + st * psi_dot,
    )
}

/// Stateful flight controller; one instance per simulated vehicle.
#[derive(Debug, Clone)]
pub struct FlightController {
    pub cfg: FlightControlConfig,
    drone: DroneConfig,
    inertia: Mat3,
    dt: f64,
    last_nu: f64,
    last_nu_ref: f64,
    hover_int: Vec3,
    /// Turn-direction latch of an in-progress dive reversal; 0 when idle.
    dive_turn_dir: f64,
}

impl FlightController {
    pub fn new(cfg: FlightControlConfig, drone: DroneConfig, inertia: Mat3, dt: f64) -> Self {
        Self {
            cfg,
            drone,
            inertia,
            dt,
            last_nu: 0.0,
            last_nu_ref: 0.0,
            hover_int: Vec3::zeros(),
            dive_turn_dir: 0.0,
        }
    }

    /// Low-level inverse-dynamics rate control: places each rate-loop pole at
    /// `pole_rate`, decoupling the I_zx cross terms, and passes the thrust
    /// reference through saturation.
    pub fn low_level(&self, att: &AttitudeRef, state: &VehicleState) -> ControlCommand {
        let omega = state.rates();
        let lim = self.cfg.rate_ref_limit;
        let omega_ref = Vec3::new(
            att.p_ref.clamp(-lim, lim),
            att.q_ref.clamp(-lim, lim),
            att.r_ref.clamp(-lim, lim),
        );
        let omega_dot_des = self.cfg.pole_rate * (omega_ref - omega);
        let h_rotor = Vec3::new(0.0, 0.0, self.drone.rotor_h_z);
        let m = self.inertia * omega_dot_des + omega.cross(&(self.inertia * omega + h_rotor));
        ControlCommand::saturate(att.u1_ref, m.x, m.y, m.z, &self.drone)
    }

    /// Hovering cascade: position -> velocity -> attitude -> rate references,
    /// with the altitude chain closing on the thrust reference.
    pub fn hover(
        &mut self,
        state: &VehicleState,
        h_bf: &Mat3,
        refs: &HoverRefs,
    ) -> Result<AttitudeRef, FrameError> {
        let cfg = &self.cfg;
        let euler = extract_euler(h_bf, EulerConvention::Hover)?;
        let v_inertial = state.velocity_inertial(h_bf);

        let mut v_cmd = refs.vel;
        if refs.use_position {
            v_cmd += cfg.pole_hover_position * (refs.pos - state.pos);
        }
        let horiz = v_cmd.xy().norm();
        if horiz > cfg.hover_speed_limit {
            let s = cfg.hover_speed_limit / horiz;
            v_cmd.x *= s;
            v_cmd.y *= s;
        }
        v_cmd.z = v_cmd.z.clamp(-3.0, 3.0);

        // Velocity-error integral rejects the steady wind drag during
        // position holds; held in reset while tracking pure velocity
        // references so transitions do not wind it up.
        if refs.use_position {
            let lim = cfg.hover_int_limit;
            self.hover_int += (v_cmd - v_inertial) * (cfg.hover_vel_ki * self.dt);
            self.hover_int = self.hover_int.map(|c| c.clamp(-lim, lim));
        } else {
            self.hover_int = Vec3::zeros();
        }

        // Horizontal acceleration demand mapped to tilt references.
        let ax = cfg.pole_hover_speed * (v_cmd.x - v_inertial.x) + self.hover_int.x;
        let ay = cfg.pole_hover_speed * (v_cmd.y - v_inertial.y) + self.hover_int.y;
        let (s_psi, c_psi) = euler.psi.sin_cos();
        let g = self.drone.g;
        let tilt_limit = refs.tilt_limit.unwrap_or(cfg.tilt_limit);
        let theta_ref = ((ax * c_psi + ay * s_psi) / g).clamp(-tilt_limit, tilt_limit);
        let phi_ref = ((ax * s_psi - ay * c_psi) / g).clamp(-tilt_limit, tilt_limit);

        // Vertical chain: velocity error to thrust about the weight
        // feed-forward, tilt-compensated.
        let az = cfg.pole_thrust * (v_cmd.z - v_inertial.z) + self.hover_int.z;
        let tilt = (euler.phi.cos() * euler.theta.cos()).max(0.5);
        let u1 = self.drone.mass * (g + az) / tilt;

        let phi_dot = cfg.pole_hover_attitude * wrap_angle(phi_ref - euler.phi);
        let theta_dot = cfg.pole_hover_attitude * wrap_angle(theta_ref - euler.theta);
        let psi_dot = cfg.pole_hover_attitude * wrap_angle(refs.yaw - euler.psi);

        // Euler-rate to body-rate map of the hover (Z-Y-X) sequence.
        let (sp, cp) = euler.phi.sin_cos();
        let (st, ct) = euler.theta.sin_cos();
        Ok(AttitudeRef {
            p_ref: phi_dot - psi_dot * st,
            q_ref: theta_dot * cp + psi_dot * ct * sp,
            r_ref: -theta_dot * sp + psi_dot * ct * cp,
            u1_ref: u1,
        })
    }

    /// Free-flight controller: heading toward the waypoint, pitch from the
    /// altitude loop, bank regulated to zero (yaw-based steering).
    pub fn free_flight(
        &self,
        state: &VehicleState,
        h_bf: &Mat3,
        refs: &FreeFlightRefs,
    ) -> Result<AttitudeRef, FrameError> {
        let cfg = &self.cfg;
        let euler = extract_euler(h_bf, EulerConvention::FreeFlight)?;
        let to_wp = refs.waypoint - state.pos;
        let heading_ref = if !refs.capture && to_wp.xy().norm() > MIN_BEARING {
            to_wp.y.atan2(to_wp.x)
        } else {
            euler.phi
        };
        // theta is positive nose-down in this convention, so flying above
        // the reference altitude commands positive pitch.
        let theta_ref = if refs.capture {
            -cfg.capture_pitch
        } else {
            (cfg.k_altitude_to_pitch * (state.pos.z - refs.altitude))
                .clamp(-cfg.pitch_ref_limit, cfg.pitch_ref_limit)
        };

        let k = cfg.k_ff_attitude;
        let phi_dot = k * wrap_angle(heading_ref - euler.phi);
        let theta_dot = k * (theta_ref - euler.theta);
        let psi_dot = k * wrap_angle(0.0 - euler.psi);

        // Euler-rate to body-rate map of the dynamic-flight sequence.
        let (sp, cp) = euler.psi.sin_cos();
        let (st, ct) = euler.theta.sin_cos();
        let p_ref = theta_dot * sp + phi_dot * cp * ct;
        let q_ref = -theta_dot * cp + phi_dot * sp * ct;
        let r_ref = -psi_dot - phi_dot * st;

        let u1 = if refs.capture {
            // Slightly under weight so the maneuver sheds the altitude the
            // pull-up gains instead of ballooning downwind.
            0.85 * self.drone.mass * self.drone.g
        } else if cfg.ff_glide {
            0.0
        } else {
            // Airspeed hold on the front (z_B) velocity component.
            (self.drone.mass * self.cfg.k_ff_thrust * (refs.airspeed - state.w)).max(0.0)
        };
        Ok(AttitudeRef {
            p_ref,
            q_ref,
            r_ref,
            u1_ref: u1,
        })
    }

    /// Taut-tether controller: regulates the local Euler angles and tracks
    /// the reference velocity angle toward the target point.
    pub fn taut_tether(
        &mut self,
        state: &VehicleState,
        h_bf: &Mat3,
        spherical: &SphericalPosition,
        refs: &TautRefs,
    ) -> Result<AttitudeRef, FrameError> {
        let h_bl = body_to_local(h_bf, spherical.theta_el, spherical.phi_az);
        let euler = extract_euler(&h_bl, EulerConvention::TautTether)?;

        let h_fl = inertial_to_local(spherical.theta_el, spherical.phi_az);
        let p_dot_l = h_fl * state.velocity_inertial(h_bf);
        if let Some(nu) = velocity_angle(p_dot_l) {
            self.last_nu = nu;
        }
        if let Some(nu_ref) = reference_velocity_angle(refs, spherical, self.cfg.nu_ref_sign) {
            self.last_nu_ref = nu_ref;
        }

        // A reference too close to nu = 0 (straight up-sphere) commands a
        // zoom climb that bleeds airspeed to a stall before the target is
        // reached; hold the commanded slope down so speed is carried into
        // the next turn instead.
        let mut nu_ref = self.last_nu_ref;
        if nu_ref.abs() < self.cfg.nu_climb_limit {
            let s = if nu_ref != 0.0 {
                nu_ref.signum()
            } else if self.last_nu != 0.0 {
                self.last_nu.signum()
            } else {
                1.0
            };
            nu_ref = s * self.cfg.nu_climb_limit;
        }
        // Hard pull-out floor: close to the ground, never command
        // below-horizon flight and release any latched dive so the
        // reversal finishes level instead of boring in.
        if state.pos.z < self.cfg.pullout_altitude {
            self.dive_turn_dir = 0.0;
            if nu_ref.abs() > std::f64::consts::FRAC_PI_2 {
                nu_ref = nu_ref.signum() * std::f64::consts::FRAC_PI_2;
            }
        }

        let (phi_dot, theta_dot, _) = taut_tether_rates(
            euler.phi,
            euler.theta,
            self.last_nu,
            nu_ref,
            self.cfg.pole_tt,
        );
        // Velocity-angle channel: an outer loop commands a bounded lead of
        // the nose heading over the velocity angle (sideslip stays near the
        // side-force peak), an inner loop servos the heading to that lead.
        let heading = h_bl[(2, 2)].atan2(h_bl[(1, 2)]);
        // nu = +-pi is straight down-sphere. A reversal flown the "up" way
        // is a climbing turn that trades v^2 for height and stalls below
        // ~30 m/s, while the "down" way is a dive turn whose radius gravity
        // tightens. Route reversals through the dive when there is altitude
        // to spend, and climb the long way round otherwise.
        let unwrapped = nu_ref - self.last_nu;
        let wrapped = wrap_angle(unwrapped);
        // The altitude check only gates the entry: the latched direction is
        // held until the error collapses, so a started dive is flown
        // through even while it spends the altitude margin.
        if wrapped.abs() <= self.cfg.dive_turn_exit {
            self.dive_turn_dir = 0.0;
        } else if self.dive_turn_dir == 0.0
            && wrapped.abs() > self.cfg.dive_turn_threshold
            && state.pos.z > self.cfg.dive_turn_min_altitude
            && p_dot_l.norm() < self.cfg.dive_turn_max_speed
            && unwrapped != 0.0
        {
            // Start of a reversal: rotate through +-pi (down), the
            // complement of the direct arc.
            self.dive_turn_dir = -unwrapped.signum();
        }
        let err = if self.dive_turn_dir != 0.0 {
            if wrapped * self.dive_turn_dir >= 0.0 {
                wrapped
            } else {
                wrapped + std::f64::consts::TAU * self.dive_turn_dir
            }
        } else if wrapped.abs() <= self.cfg.dive_turn_threshold {
            wrapped
        } else {
            unwrapped
        };
        let lead_ref =
            (self.cfg.k_nu * err).clamp(-self.cfg.nu_lead_limit, self.cfg.nu_lead_limit);
        let lim = self.cfg.nu_rate_limit;
        let psi_dot = (self.cfg.pole_tt * wrap_angle(self.last_nu + lead_ref - heading))
            .clamp(-lim, lim);
        let (p_ref, q_ref, r_ref) =
            euler_rates_to_body_rates(euler.phi, euler.theta, phi_dot, theta_dot, psi_dot);
        Ok(AttitudeRef {
            p_ref,
            q_ref,
            r_ref,
            u1_ref: 0.0,
        })
    }
}
