//! Drone plant: propeller mixer, tether force/moment coupling, and the
//! 13-state rigid-body derivative (body velocities, body rates, attitude
//! quaternion, inertial position).

use nalgebra::{Matrix4, Vector4};
use thiserror::Error;

use crate::aero::{
    aero_forces, aero_moments, apparent_wind, rotate_to_body, tether_drag_increment, AeroCoeffTable,
    AeroState, CoeffSample,
};
use crate::config::{AeroConfig, DroneConfig, TetherConfig};
use crate::frames::{quat_derivative, quat_to_bf, FrameError, UnitQuat};
use crate::{Mat3, Vec3};

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("mixer input {0} is negative ({1})")]
    NegativeSquaredSpeed(usize, f64),
    #[error("rotor allocation matrix is singular for the configured geometry")]
    SingularMixer,
    #[error("degenerate tether direction: drone at the ground station")]
    DegenerateDirection,
    #[error("non-finite derivative ({context})")]
    NonFinite { context: String },
    #[error(transparent)]
    Frame(#[from] FrameError),
}

/// The 13-component drone state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleState {
    /// Body-frame velocity, m/s.
    pub u: f64,
    pub v: f64,
    pub w: f64,
    /// Body rates, rad/s.
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub quat: UnitQuat,
    /// Inertial position, m.
    pub pos: Vec3,
}

impl VehicleState {
    pub fn at_rest(pos: Vec3) -> Self {
        Self {
            u: 0.0,
            v: 0.0,
            w: 0.0,
            p: 0.0,
            q: 0.0,
            r: 0.0,
            quat: UnitQuat::IDENTITY,
            pos,
        }
    }

    pub fn as_array(&self) -> [f64; 13] {
        let q = self.quat.as_array();
        [
            self.u, self.v, self.w, self.p, self.q, self.r, q[0], q[1], q[2], q[3], self.pos.x,
            self.pos.y, self.pos.z,
        ]
    }

    pub fn from_array(a: &[f64; 13]) -> Self {
        Self {
            u: a[0],
            v: a[1],
            w: a[2],
            p: a[3],
            q: a[4],
            r: a[5],
            quat: UnitQuat::new(a[6], a[7], a[8], a[9]),
            pos: Vec3::new(a[10], a[11], a[12]),
        }
    }

    pub fn velocity_body(&self) -> Vec3 {
        Vec3::new(self.u, self.v, self.w)
    }

    pub fn rates(&self) -> Vec3 {
        Vec3::new(self.p, self.q, self.r)
    }

    /// Inertial velocity, m/s.
    pub fn velocity_inertial(&self, h_bf: &Mat3) -> Vec3 {
        h_bf.transpose() * self.velocity_body()
    }
}

/// Thrust and turning-moment command, clamped to the configured limits.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ControlCommand {
    /// Total thrust along z_B, N.
    pub u1: f64,
    /// Moments about x_B, y_B, z_B, N m.
    pub u2: f64,
    pub u3: f64,
    pub u4: f64,
    pub saturated: bool,
}

impl ControlCommand {
    /// Clamps each channel to its limit and records whether anything clipped.
    pub fn saturate(u1: f64, u2: f64, u3: f64, u4: f64, cfg: &DroneConfig) -> Self {
        let u1_max = 4.0 * cfg.b_thrust * cfg.omega_max_rpm * cfg.omega_max_rpm;
        let m = cfg.moment_limit;
        let c = Self {
            u1: u1.clamp(0.0, u1_max),
            u2: u2.clamp(-m, m),
            u3: u3.clamp(-m, m),
            u4: u4.clamp(-m, m),
            saturated: false,
        };
        Self {
            saturated: c.u1 != u1 || c.u2 != u2 || c.u3 != u3 || c.u4 != u4,
            ..c
        }
    }
}

/// Propeller mixer: squared rotor speeds (rpm^2) to thrust and moments, with
/// its exact inverse for allocation.
#[derive(Debug, Clone)]
pub struct Mixer {
    pub matrix: Matrix4<f64>,
    inverse: Matrix4<f64>,
    omega_sq_max: f64,
}

impl Mixer {
    pub fn new(cfg: &DroneConfig) -> Result<Self, DynamicsError> {
        let b = cfg.b_thrust;
        let c = cfg.c_torque;
        let dx = cfg.prop_d_x;
        let dy = cfg.prop_d_y;
        let matrix = Matrix4::new(
            b,
            b,
            b,
            b, //
            b * dx[0],
            -b * dx[1],
            -b * dx[2],
            b * dx[3], //
            b * dy[0],
            -b * dy[1],
            b * dy[2],
            -b * dy[3], //
            -c,
            -c,
            c,
            c,
        );
        let inverse = matrix.try_inverse().ok_or(DynamicsError::SingularMixer)?;
        Ok(Self {
            matrix,
            inverse,
            omega_sq_max: cfg.omega_max_rpm * cfg.omega_max_rpm,
        })
    }

    /// (U1, dUp2, dUp3, dUp4) from squared rotor speeds in rpm^2.
    pub fn forward(&self, omega_sq: [f64; 4]) -> Result<(f64, f64, f64, f64), DynamicsError> {
        for (j, w2) in omega_sq.iter().enumerate() {
            if *w2 < 0.0 {
                return Err(DynamicsError::NegativeSquaredSpeed(j, *w2));
            }
        }
        let u = self.matrix * Vector4::from(omega_sq);
        Ok((u[0], u[1], u[2], u[3]))
    }

    /// Squared rotor speeds realizing a command, clamped to [0, omega_max^2];
    /// the bool reports whether clamping occurred.
    pub fn allocate(&self, cmd: &ControlCommand) -> ([f64; 4], bool) {
        let w2 = self.inverse * Vector4::new(cmd.u1, cmd.u2, cmd.u3, cmd.u4);
        let mut out = [0.0; 4];
        let mut clamped = false;
        for j in 0..4 {
            out[j] = w2[j].clamp(0.0, self.omega_sq_max);
            clamped |= out[j] != w2[j];
        }
        (out, clamped)
    }
}

/// Tether force magnitude for drone distance `d` and unrolled length `l`:
/// linear elastic branch above the knee `eps_0`, exponential tail below it
/// (C^1 continuous), so a slack tether transfers only a negligible force.
pub fn tether_force_magnitude(d: f64, l: f64, p: &TetherConfig) -> f64 {
    let eps = (d - l) / l;
    if eps >= p.eps_0 {
        p.f_max / p.eps_max * eps
    } else {
        p.f_max * p.eps_0 / (p.eps_max * std::f64::consts::E) * (eps / p.eps_0).exp()
    }
}

/// Tether force and moment in B for a force of magnitude `f_mag` pulling the
/// attachment point toward the ground station.
pub fn tether_wrench(
    h_bf: &Mat3,
    pos: Vec3,
    f_mag: f64,
    attach: Vec3,
) -> Result<(Vec3, Vec3), DynamicsError> {
    let d = pos.norm();
    if d <= 0.0 {
        return Err(DynamicsError::DegenerateDirection);
    }
    let dir_b = h_bf * (pos / d);
    let force = -dir_b * f_mag;
    let moment = attach.cross(&force);
    Ok((force, moment))
}

/// Per-step plant outputs kept for logging and the controllers.
#[derive(Debug, Clone, Copy)]
pub struct PlantOutputs {
    pub aero: AeroState,
    pub coeffs: CoeffSample,
    pub f_tether: f64,
    /// Aerodynamic force in B, N.
    pub f_aero_b: Vec3,
}

/// Immutable plant description: drone, aero table, tether, wind.
#[derive(Debug, Clone)]
pub struct Plant {
    pub drone: DroneConfig,
    pub aero: AeroConfig,
    pub table: AeroCoeffTable,
    pub tether: TetherConfig,
    pub wind: Vec3,
}

impl Plant {
    pub fn inertia_matrix(&self) -> Mat3 {
        let d = &self.drone;
        Mat3::new(
            d.i_xx, 0.0, d.i_zx, //
            0.0, d.i_yy, 0.0, //
            d.i_zx, 0.0, d.i_zz,
        )
    }

    /// Aero/tether outputs at the given state and unrolled tether length.
    pub fn outputs(&self, state: &VehicleState, h_bf: &Mat3, l_tether: f64) -> PlantOutputs {
        let v_inertial = state.velocity_inertial(h_bf);
        let aero = apparent_wind(v_inertial, self.wind, h_bf);
        let coeffs = self.table.lookup(aero.alpha, aero.beta);
        let c_d_tot = tether_drag_increment(
            coeffs.c_d,
            self.tether.c_dl,
            self.tether.d_t,
            l_tether,
            self.aero.s_up,
        );
        let f_wind_axes = aero_forces(aero.w_a, self.aero.rho, self.aero.s_ref, c_d_tot, coeffs.c_s, coeffs.c_l);
        let f_aero_b = rotate_to_body(f_wind_axes, aero.alpha, aero.beta);
        let f_tether = tether_force_magnitude(state.pos.norm().max(1e-9), l_tether, &self.tether);
        PlantOutputs {
            aero,
            coeffs,
            f_tether,
            f_aero_b,
        }
    }

    /// The 13-component state derivative under a held command.
    pub fn derivative(
        &self,
        state: &VehicleState,
        cmd: &ControlCommand,
        l_tether: f64,
    ) -> Result<[f64; 13], DynamicsError> {
        let d = &self.drone;
        let h_bf = quat_to_bf(&state.quat.normalized())?;
        let out = self.outputs(state, &h_bf, l_tether);

        let gravity_b = h_bf * Vec3::new(0.0, 0.0, -d.mass * d.g);
        let thrust_b = Vec3::new(0.0, 0.0, cmd.u1);
        let (f_tether_b, m_tether_b) = if out.f_tether > 0.0 {
            tether_wrench(&h_bf, state.pos, out.f_tether, Vec3::from(d.tether_attach))?
        } else {
            (Vec3::zeros(), Vec3::zeros())
        };
        let force_b = gravity_b + thrust_b + out.f_aero_b + f_tether_b;

        let m_aero = aero_moments(&out.aero, &self.aero, state.p, state.q, state.r);
        let moment_b = Vec3::new(cmd.u2, cmd.u3, cmd.u4) + m_aero + m_tether_b;

        let omega = state.rates();
        let v_b = state.velocity_body();
        let accel_b = force_b / d.mass - omega.cross(&v_b);

        let inertia = self.inertia_matrix();
        let h_rotor = Vec3::new(0.0, 0.0, d.rotor_h_z);
        let rhs = moment_b - omega.cross(&(inertia * omega + h_rotor));
        let omega_dot = inertia
            .try_inverse()
            .ok_or(DynamicsError::SingularMixer)?
            * rhs;

        let q_dot = quat_derivative(&state.quat, state.p, state.q, state.r);
        let pos_dot = state.velocity_inertial(&h_bf);

        let deriv = [
            accel_b.x, accel_b.y, accel_b.z, omega_dot.x, omega_dot.y, omega_dot.z, q_dot[0],
            q_dot[1], q_dot[2], q_dot[3], pos_dot.x, pos_dot.y, pos_dot.z,
        ];
        if deriv.iter().any(|x| !x.is_finite()) {
            return Err(DynamicsError::NonFinite {
                context: format!("state = {state:?}, cmd = {cmd:?}, L = {l_tether}"),
            });
        }
        Ok(deriv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    fn default_plant() -> Plant {
        Plant {
            drone: DroneConfig::default(),
            aero: AeroConfig::default(),
            table: AeroCoeffTable::builtin(),
            tether: TetherConfig::default(),
            wind: Vec3::zeros(),
        }
    }

    fn symmetric_drone() -> DroneConfig {
        DroneConfig {
            prop_d_y: [0.49, 0.49, 0.49, 0.49],
            ..DroneConfig::default()
        }
    }

    #[test]
    fn mixer_thrust_row() {
        let mixer = Mixer::new(&DroneConfig::default()).unwrap();
        let w2 = 6000.0f64 * 6000.0;
        let (u1, _, _, _) = mixer.forward([w2; 4]).unwrap();
        assert_abs_diff_eq!(u1, 158.4, epsilon = 1e-9);
    }

    #[test]
    fn mixer_symmetric_arms_balance() {
        let mixer = Mixer::new(&symmetric_drone()).unwrap();
        let (_, du2, du3, du4) = mixer.forward([2.5e7; 4]).unwrap();
        assert_abs_diff_eq!(du2, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(du3, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(du4, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn mixer_rejects_negative_input() {
        let mixer = Mixer::new(&DroneConfig::default()).unwrap();
        assert!(matches!(
            mixer.forward([1.0, -1.0, 1.0, 1.0]),
            Err(DynamicsError::NegativeSquaredSpeed(1, _))
        ));
    }

    #[test]
    fn hover_allocation_symmetric_arms() {
        let cfg = symmetric_drone();
        let mixer = Mixer::new(&cfg).unwrap();
        let u1 = 11.3 * 9.81;
        let cmd = ControlCommand {
            u1,
            ..Default::default()
        };
        let (w2, clamped) = mixer.allocate(&cmd);
        assert!(!clamped);
        let expected = u1 / (4.0 * cfg.b_thrust);
        for w in w2 {
            assert_abs_diff_eq!(w, expected, epsilon = 1e-3);
        }
        assert_abs_diff_eq!(expected, 2.5194e7, epsilon = 2e3);
        // About 5019 rpm per rotor.
        assert_abs_diff_eq!(expected.sqrt(), 5019.35, epsilon = 0.01);
    }

    #[test]
    fn mixer_round_trip() {
        let mixer = Mixer::new(&DroneConfig::default()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let cmd = ControlCommand {
                u1: rng.gen_range(10.0..400.0),
                u2: rng.gen_range(-15.0..15.0),
                u3: rng.gen_range(-15.0..15.0),
                u4: rng.gen_range(-15.0..15.0),
                saturated: false,
            };
            let (w2, clamped) = mixer.allocate(&cmd);
            if clamped {
                continue;
            }
            let (u1, u2, u3, u4) = mixer.forward(w2).unwrap();
            let scale = cmd.u1.abs().max(1.0);
            assert!((u1 - cmd.u1).abs() / scale < 1e-9);
            assert!((u2 - cmd.u2).abs() < 1e-9 * scale);
            assert!((u3 - cmd.u3).abs() < 1e-9 * scale);
            assert!((u4 - cmd.u4).abs() < 1e-9 * scale);
        }
    }

    #[test]
    fn tether_force_branches() {
        let p = TetherConfig::default();
        // eps = eps_max
        let l = 100.0;
        let d = l * (1.0 + p.eps_max);
        assert_abs_diff_eq!(tether_force_magnitude(d, l, &p), p.f_max, epsilon = 1e-9);
        // Continuity at the knee
        let d_knee = l * (1.0 + p.eps_0);
        let lin = p.f_max / p.eps_max * p.eps_0;
        assert_abs_diff_eq!(tether_force_magnitude(d_knee, l, &p), lin, epsilon = 1e-9);
        let just_below = tether_force_magnitude(d_knee - 1e-9, l, &p);
        assert_abs_diff_eq!(just_below, lin, epsilon = 1e-3);
        // eps = 0
        let f0 = tether_force_magnitude(l, l, &p);
        assert_abs_diff_eq!(f0, 2000.0 * 0.001 / (0.01 * std::f64::consts::E), epsilon = 1e-6);
        assert_abs_diff_eq!(f0, 73.58, epsilon = 0.01);
    }

    #[test]
    fn tether_force_c1_at_knee() {
        let p = TetherConfig::default();
        let l = 100.0;
        let d_knee = l * (1.0 + p.eps_0);
        let h = 1e-7;
        let right = (tether_force_magnitude(d_knee + h, l, &p)
            - tether_force_magnitude(d_knee, l, &p))
            / h;
        let left = (tether_force_magnitude(d_knee, l, &p)
            - tether_force_magnitude(d_knee - h, l, &p))
            / h;
        assert!(((right - left) / right).abs() < 1e-6, "left {left} right {right}");
    }

    #[test]
    fn tether_force_monotone() {
        let p = TetherConfig::default();
        let l = 100.0;
        let mut last = 0.0;
        for i in 0..2000 {
            let d = 90.0 + i as f64 * 0.01;
            let f = tether_force_magnitude(d, l, &p);
            assert!(f >= last);
            last = f;
        }
    }

    #[test]
    fn tether_wrench_geometry() {
        let h = Mat3::identity();
        let pos = Vec3::new(0.0, 0.0, 50.0);
        let attach = Vec3::new(-1.0, 0.0, 0.0);
        // Zero force, zero wrench.
        let (f, m) = tether_wrench(&h, pos, 0.0, attach).unwrap();
        assert_eq!(f, Vec3::zeros());
        assert_eq!(m, Vec3::zeros());
        // Force straight down z_B with magnitude 10: moment = (-1,0,0)x(0,0,-10).
        let (f, m) = tether_wrench(&h, pos, 10.0, attach).unwrap();
        assert_abs_diff_eq!((f - Vec3::new(0.0, 0.0, -10.0)).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((m - Vec3::new(0.0, -10.0, 0.0)).norm(), 0.0, epsilon = 1e-12);
        // Collinear attachment and force: no moment.
        let pos_x = Vec3::new(30.0, 0.0, 0.0);
        let (_, m) = tether_wrench(&h, pos_x, 100.0, attach).unwrap();
        assert_abs_diff_eq!(m.norm(), 0.0, epsilon = 1e-12);
        assert!(tether_wrench(&h, Vec3::zeros(), 1.0, attach).is_err());
    }

    #[test]
    fn hover_equilibrium_has_zero_derivative() {
        let plant = default_plant();
        let state = VehicleState::at_rest(Vec3::new(0.0, 0.0, 1.0));
        let cmd = ControlCommand {
            u1: plant.drone.mass * plant.drone.g,
            ..Default::default()
        };
        let deriv = plant.derivative(&state, &cmd, 5.0).unwrap();
        for (i, d) in deriv.iter().enumerate() {
            assert!(d.abs() < 1e-9, "component {i} = {d}");
        }
    }

    #[test]
    fn free_fall_acceleration() {
        let plant = default_plant();
        let state = VehicleState::at_rest(Vec3::new(0.0, 0.0, 100.0));
        let cmd = ControlCommand::default();
        let deriv = plant.derivative(&state, &cmd, 500.0).unwrap();
        let acc = Vec3::new(deriv[0], deriv[1], deriv[2]);
        assert_abs_diff_eq!(acc.norm(), 9.81, epsilon = 1e-9);
        assert_abs_diff_eq!(acc.z, -9.81, epsilon = 1e-9);
    }

    #[test]
    fn coupled_inertia_moment_response() {
        let plant = default_plant();
        let state = VehicleState::at_rest(Vec3::new(0.0, 0.0, 1.0));
        let cmd = ControlCommand {
            u1: plant.drone.mass * plant.drone.g,
            u2: 1.0,
            ..Default::default()
        };
        let deriv = plant.derivative(&state, &cmd, 5.0).unwrap();
        let det = 4.53 * 5.49 - 1.35 * 1.35;
        assert_abs_diff_eq!(deriv[3], 5.49 / det, epsilon = 1e-6);
        assert_abs_diff_eq!(deriv[5], 1.35 / det, epsilon = 1e-6);
    }

    #[test]
    fn derivative_deterministic() {
        let mut plant = default_plant();
        plant.wind = Vec3::new(7.0, 0.0, 0.0);
        let mut state = VehicleState::at_rest(Vec3::new(40.0, 3.0, 20.0));
        state.u = 3.0;
        state.q = 0.4;
        let cmd = ControlCommand {
            u1: 50.0,
            u2: 0.5,
            u3: -0.2,
            u4: 0.1,
            saturated: false,
        };
        let a = plant.derivative(&state, &cmd, 44.0).unwrap();
        let b = plant.derivative(&state, &cmd, 44.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn command_saturation_flags() {
        let cfg = DroneConfig::default();
        let c = ControlCommand::saturate(1000.0, 25.0, -25.0, 3.0, &cfg);
        assert!(c.saturated);
        assert_abs_diff_eq!(c.u1, 4.0 * cfg.b_thrust * 12000.0f64.powi(2), epsilon = 1e-9);
        assert_abs_diff_eq!(c.u2, 20.0);
        assert_abs_diff_eq!(c.u3, -20.0);
        let ok = ControlCommand::saturate(100.0, 1.0, 1.0, 1.0, &cfg);
        assert!(!ok.saturated);
    }
}
