//! Mission supervisor: the five-phase state machine, controller-pair
//! selection, figure-of-eight target scheduling, and the reentry strategies.

use crate::config::{StrategyKind, SupervisorConfig};
use crate::flight_control::{DroneMode, FreeFlightRefs, HoverRefs, TautRefs};
use crate::frames::{wrap_angle, SphericalPosition};
use crate::ground_station::GsMode;
use crate::Vec3;
use thiserror::Error;

pub use crate::config::StrategyKind as ReentryStrategy;

#[derive(Debug, Error)]
pub enum SupervisorError {
    #[error("supervisor fault in phase {phase}: {reason}")]
    Fault { phase: Phase, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Hovering,
    TransitionToGeneration,
    Traction,
    Reentry,
    TransitionToHovering,
    Landed,
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Phase::Hovering => "Hovering",
            Phase::TransitionToGeneration => "TransitionToGeneration",
            Phase::Traction => "Traction",
            Phase::Reentry => "Reentry",
            Phase::TransitionToHovering => "TransitionToHovering",
            Phase::Landed => "Landed",
        })
    }
}

/// Drone/ground-station controller pair active in a phase.
pub fn controller_pair(phase: Phase, strategy: StrategyKind) -> (DroneMode, GsMode) {
    match phase {
        Phase::Hovering | Phase::Landed => (DroneMode::Hover, GsMode::LowForce),
        Phase::TransitionToGeneration => (DroneMode::Hover, GsMode::Generation),
        Phase::Traction => (DroneMode::TautTether, GsMode::Generation),
        Phase::Reentry => match strategy {
            StrategyKind::FreeFlight => (DroneMode::FreeFlight, GsMode::LowForce),
            _ => (DroneMode::TautTether, GsMode::Reentry),
        },
        Phase::TransitionToHovering => (DroneMode::FreeFlight, GsMode::LowForce),
    }
}

/// Width of the distance band outside L_min where the free-flight reentry
/// may re-tension, m.
const RETENSION_WINDOW: f64 = 18.0;
/// Distance past L_min at which an exit leg that missed the window turns
/// back for another pass, m.
const RETENSION_RETRY: f64 = 25.0;

/// Alternating pair of spherical target points producing figure-of-eight
/// paths; the active target toggles inside the switch radius.
#[derive(Debug, Clone)]
pub struct TargetSchedule {
    pub elevation: f64,
    pub azimuth: f64,
    pub switch_radius: f64,
    pub active: usize,
}

/// Great-circle angular distance between two (elevation, azimuth) points.
pub fn angular_distance(a: &TautRefs, theta_el: f64, phi_az: f64) -> f64 {
    let c = a.theta_el_ref.sin() * theta_el.sin()
        + a.theta_el_ref.cos() * theta_el.cos() * (a.phi_az_ref - phi_az).cos();
    c.clamp(-1.0, 1.0).acos()
}

impl TargetSchedule {
    pub fn new(elevation: f64, azimuth: f64, switch_radius: f64) -> Self {
        Self {
            elevation,
            azimuth,
            switch_radius,
            active: 0,
        }
    }

    pub fn target(&self) -> TautRefs {
        let sign = if self.active == 0 { 1.0 } else { -1.0 };
        TautRefs {
            theta_el_ref: self.elevation,
            phi_az_ref: sign * self.azimuth,
        }
    }

    /// Toggles the active target when the drone enters the switch radius or
    /// its azimuth sweeps past the target azimuth; returns the (possibly new)
    /// target. The azimuth-crossing trigger keeps the eight turning at the
    /// pattern edge even when the elevation error is still large.
    pub fn update(&mut self, sph: &SphericalPosition) -> TautRefs {
        let t = self.target();
        let crossed = if self.active == 0 {
            sph.phi_az >= t.phi_az_ref
        } else {
            sph.phi_az <= t.phi_az_ref
        };
        if crossed || angular_distance(&t, sph.theta_el, sph.phi_az) < self.switch_radius {
            self.active = 1 - self.active;
        }
        self.target()
    }
}

/// Guidance handed to the active drone controller.
#[derive(Debug, Clone, Copy)]
pub enum Guidance {
    Hover(HoverRefs),
    FreeFlight(FreeFlightRefs),
    Taut(TautRefs),
}

/// Measurements the supervisor switches on; assembled by the sim engine
/// once per control step.
#[derive(Debug, Clone, Copy)]
pub struct SupervisorInputs {
    pub t: f64,
    pub pos: Vec3,
    pub vel_f: Vec3,
    /// Airspeed component along the front (z_B) axis, m/s.
    pub front_airspeed: f64,
    pub airspeed: f64,
    pub l_tether: f64,
    /// Straight-line distance to the ground station, m.
    pub d: f64,
    /// z_F component of the front axis (1 in hover attitude).
    pub front_axis_up: f64,
    pub wind_speed: f64,
    /// Current tether force magnitude, N.
    pub tether_force: f64,
}

/// A recorded phase transition with its trigger condition.
#[derive(Debug, Clone)]
pub struct PhaseTransition {
    pub t: f64,
    pub from: Phase,
    pub to: Phase,
    pub trigger: &'static str,
}

/// Per-control-step supervisor decision.
#[derive(Debug, Clone)]
pub struct SupervisorStep {
    pub phase: Phase,
    pub drone_mode: DroneMode,
    pub gs_mode: GsMode,
    pub guidance: Guidance,
    /// Reel speed reference for the ground station's reentry mode, m/s.
    pub ldot_ref: f64,
    pub transition: Option<PhaseTransition>,
}

#[derive(Debug, Clone)]
pub struct Supervisor {
    pub cfg: SupervisorConfig,
    pub phase: Phase,
    schedule: TargetSchedule,
    cad_schedule: TargetSchedule,
    /// Number of Reentry entries so far; n cycles need n+1 reentries.
    pub reentry_count: usize,
    mission_stop: bool,
    /// Rotation-strategy waypoint azimuth, unwrapped.
    rotation_target_az: f64,
    rotation_dir: f64,
    /// Side of the ground station the free-flight reentry aims for.
    ff_side: f64,
    /// Free-flight reentry sub-leg: false while returning toward the
    /// station, true once flying back out to re-tension.
    ff_exit: bool,
    /// Set between the outward L_min crossing and the line coming taut;
    /// the drone stays on the free-flight controller until then.
    retension_pending: bool,
    /// Start of the current uninterrupted above-threshold force stretch.
    retension_since: Option<f64>,
    last_switch_t: f64,
    /// Reel-in speed reference of the taut reentry strategies, m/s.
    reentry_ldot: f64,
    /// Airspeed reference of the powered free-flight reentry, m/s.
    ff_airspeed: f64,
}

impl Supervisor {
    pub fn new(cfg: SupervisorConfig, reentry_ldot: f64, ff_airspeed: f64) -> Self {
        let schedule = TargetSchedule::new(
            cfg.traction_elevation,
            cfg.traction_azimuth,
            cfg.target_switch_radius,
        );
        let cad_schedule =
            TargetSchedule::new(cfg.cad_elevation, cfg.cad_azimuth, cfg.target_switch_radius);
        Self {
            cfg,
            phase: Phase::Hovering,
            schedule,
            cad_schedule,
            reentry_count: 0,
            mission_stop: false,
            rotation_target_az: 0.0,
            rotation_dir: 1.0,
            ff_side: 1.0,
            ff_exit: false,
            retension_pending: false,
            retension_since: None,
            last_switch_t: 0.0,
            reentry_ldot,
            ff_airspeed,
        }
    }

    /// Downwind start point of the generation phases, in F.
    pub fn start_point(&self) -> Vec3 {
        let d = self.cfg.start_distance;
        let el = self.cfg.start_elevation;
        Vec3::new(d * el.cos(), 0.0, d * el.sin())
    }

    fn wind_in_range(&self, w: f64) -> bool {
        w >= self.cfg.cut_in && w <= self.cfg.cut_out
    }

    /// Advances the phase machine by one control step and returns the
    /// controller pair and guidance for the step.
    pub fn step(&mut self, inp: &SupervisorInputs) -> Result<SupervisorStep, SupervisorError> {
        if !inp.pos.iter().all(|v| v.is_finite()) {
            return Err(SupervisorError::Fault {
                phase: self.phase,
                reason: "non-finite drone position".into(),
            });
        }
        if inp.pos.z <= 0.05
            && !matches!(self.phase, Phase::Hovering | Phase::Landed)
            && inp.t > self.last_switch_t + 1.0
        {
            return Err(SupervisorError::Fault {
                phase: self.phase,
                reason: "ground contact outside hovering".into(),
            });
        }
        let from = self.phase;
        let trigger = self.next_phase(inp)?;
        let transition = trigger.map(|(to, trigger)| {
            self.phase = to;
            self.last_switch_t = inp.t;
            self.on_enter(from, to, inp);
            PhaseTransition {
                t: inp.t,
                from,
                to,
                trigger,
            }
        });
        let (mut drone_mode, mut gs_mode) = controller_pair(self.phase, self.cfg.strategy);
        if self.phase == Phase::Traction && self.retension_pending {
            // Hand over to the taut-tether controller only once the force
            // has held for a settling window, not on the first contact
            // transient of the elastic line.
            if inp.tether_force > self.cfg.retension_force {
                let since = *self.retension_since.get_or_insert(inp.t);
                if inp.t - since >= self.cfg.retension_hold {
                    self.retension_pending = false;
                    self.pick_first_target(inp);
                }
            } else {
                self.retension_since = None;
            }
            if self.retension_pending {
                drone_mode = DroneMode::FreeFlight;
            }
        }
        let (guidance, mut ldot_ref) = self.guidance(inp);
        if self.phase == Phase::Traction && self.retension_pending {
            // Pay the drum out under speed control, slightly slower than the
            // drone recedes: the line then loads progressively instead of
            // snatching on the drum inertia when the slack runs out.
            gs_mode = GsMode::Reentry;
            let d_dot = inp.pos.dot(&inp.vel_f) / inp.d.max(1.0);
            ldot_ref = (0.6 * d_dot).max(0.0);
        }
        Ok(SupervisorStep {
            phase: self.phase,
            drone_mode,
            gs_mode,
            guidance,
            ldot_ref,
            transition,
        })
    }

    fn next_phase(
        &mut self,
        inp: &SupervisorInputs,
    ) -> Result<Option<(Phase, &'static str)>, SupervisorError> {
        let cfg = &self.cfg;
        let out = match self.phase {
            Phase::Hovering => {
                if self.mission_stop {
                    if inp.pos.z <= 0.05 && inp.vel_f.norm() < 0.5 {
                        Some((Phase::Landed, "touchdown"))
                    } else {
                        None
                    }
                } else if self.wind_in_range(inp.wind_speed)
                    && (inp.pos - self.start_point()).norm() < cfg.start_tolerance
                {
                    Some((Phase::TransitionToGeneration, "start point reached"))
                } else {
                    None
                }
            }
            Phase::TransitionToGeneration => {
                if !self.wind_in_range(inp.wind_speed) {
                    Some((Phase::TransitionToHovering, "wind outside operating range"))
                } else if inp.front_airspeed >= cfg.v_enable {
                    Some((Phase::Traction, "front airspeed above enable threshold"))
                } else {
                    None
                }
            }
            Phase::Traction => {
                if !self.wind_in_range(inp.wind_speed) {
                    Some((Phase::TransitionToHovering, "wind outside operating range"))
                } else if inp.l_tether >= cfg.l_max {
                    Some((Phase::Reentry, "tether length above maximum"))
                } else {
                    None
                }
            }
            Phase::Reentry => {
                if !self.wind_in_range(inp.wind_speed) {
                    Some((Phase::TransitionToHovering, "wind outside operating range"))
                } else if self.reentry_done(inp) {
                    if self.reentry_count > cfg.n_cycles {
                        self.mission_stop = true;
                        Some((Phase::TransitionToHovering, "mission cycles completed"))
                    } else {
                        Some((Phase::Traction, "tether length back at minimum"))
                    }
                } else {
                    None
                }
            }
            Phase::TransitionToHovering => {
                if inp.front_airspeed.abs() < cfg.hover_capture_speed && inp.front_axis_up > 0.3 {
                    Some((Phase::Hovering, "speed below hover-capture threshold"))
                } else {
                    None
                }
            }
            Phase::Landed => None,
        };
        Ok(out)
    }

    /// Reentry exit condition; the free-flight strategy additionally waits
    /// for the drone to re-tension the tether by crossing the L_min sphere
    /// moving away from the station.
    fn reentry_done(&self, inp: &SupervisorInputs) -> bool {
        match self.cfg.strategy {
            StrategyKind::FreeFlight => {
                // Outward crossing of the L_min sphere, but only once the
                // exit climb has brought the elevation high enough for the
                // taut pattern to open with altitude in hand; a low crossing
                // re-tensions into a stall.
                let d_dot = inp.pos.dot(&inp.vel_f) / inp.d.max(1.0);
                let el = (inp.pos.z / inp.d.max(1.0)).asin();
                self.ff_exit
                    && inp.d >= self.cfg.l_min
                    && inp.d <= self.cfg.l_min + RETENSION_WINDOW
                    && d_dot > 0.0
                    && el >= self.cfg.retension_elevation
            }
            _ => inp.l_tether <= self.cfg.l_min,
        }
    }

    /// First eight target on the side the motion already points to: the
    /// opening move is then a plain climbing leg, and the first reversal is
    /// flown later from the pattern-edge apex where there is altitude for it.
    fn pick_first_target(&mut self, inp: &SupervisorInputs) {
        let az = inp.pos.y.atan2(inp.pos.x);
        let tangential = -inp.vel_f.x * az.sin() + inp.vel_f.y * az.cos();
        self.schedule.active = usize::from(tangential < 0.0);
    }

    fn on_enter(&mut self, from: Phase, phase: Phase, inp: &SupervisorInputs) {
        self.retension_pending = false;
        if phase == Phase::Traction {
            self.pick_first_target(inp);
            // Out of a free-flight reentry the low-force winch leaves a
            // couple of metres of slack; stay on the free-flight controller
            // against the generation brake until the line is solidly taut.
            if from == Phase::Reentry && self.cfg.strategy == StrategyKind::FreeFlight {
                self.retension_pending = true;
                self.retension_since = None;
            }
        }
        if phase == Phase::Reentry {
            self.reentry_count += 1;
            // Rotation strategy circles in the direction of current motion.
            let az = inp.pos.y.atan2(inp.pos.x);
            let tangential = -inp.vel_f.x * az.sin() + inp.vel_f.y * az.cos();
            self.rotation_dir = if tangential >= 0.0 { 1.0 } else { -1.0 };
            self.rotation_target_az = az + self.rotation_dir * self.cfg.rotation_azimuth_step;
            // Free flight exits toward the side the drone is already on.
            self.ff_side = if inp.pos.y >= 0.0 { 1.0 } else { -1.0 };
            self.ff_exit = false;
        }
    }

    fn guidance(&mut self, inp: &SupervisorInputs) -> (Guidance, f64) {
        let cfg = &self.cfg;
        let sph = crate::frames::to_spherical(inp.pos).ok();
        let ldot_ref = match cfg.strategy {
            StrategyKind::ClimbAndDescend => cfg.cad_ldot_ref,
            _ => self.reentry_ldot,
        };
        match self.phase {
            Phase::Hovering | Phase::Landed => {
                let g = if self.mission_stop {
                    self.landing_guidance(inp)
                } else {
                    HoverRefs {
                        pos: self.start_point(),
                        use_position: true,
                        ..HoverRefs::default()
                    }
                };
                (Guidance::Hover(g), ldot_ref)
            }
            Phase::TransitionToGeneration => {
                // Accelerate tangentially (crosswind) with a raised tilt
                // limit. Yaw holds the upper wing pointed radially outward,
                // so the pitch-over is a roll about x_B and the attitude is
                // already close to the taut-tether one at handover.
                let az = inp.pos.y.atan2(inp.pos.x);
                let dir = Vec3::new(-az.sin(), az.cos(), 0.0);
                let v = dir * cfg.transition_speed + Vec3::new(0.0, 0.0, cfg.transition_climb_rate);
                (
                    Guidance::Hover(HoverRefs {
                        vel: v,
                        yaw: az,
                        tilt_limit: Some(cfg.transition_tilt_limit),
                        ..HoverRefs::default()
                    }),
                    ldot_ref,
                )
            }
            Phase::Traction => {
                if self.retension_pending {
                    // Curve toward the first eight target along the sphere
                    // instead of pulling radially outward, so the slack is
                    // taken up by the path bending rather than by a snatch.
                    let tgt = self.schedule.target();
                    let r = inp.d.max(cfg.l_min);
                    let (s_el, c_el) = tgt.theta_el_ref.sin_cos();
                    let (s_az, c_az) = tgt.phi_az_ref.sin_cos();
                    let wp = Vec3::new(r * c_el * c_az, r * c_el * s_az, r * s_el);
                    (
                        Guidance::FreeFlight(FreeFlightRefs {
                            waypoint: wp,
                            altitude: wp.z,
                            airspeed: self.ff_airspeed,
                            capture: false,
                        }),
                        ldot_ref,
                    )
                } else {
                    let t = match sph {
                        Some(s) => self.schedule.update(&s),
                        None => self.schedule.target(),
                    };
                    (Guidance::Taut(t), ldot_ref)
                }
            }
            Phase::Reentry => self.reentry_guidance(inp, sph.as_ref()),
            Phase::TransitionToHovering => {
                // Pitch up and climb to bleed speed before hover capture.
                let dir = inp.vel_f.xy();
                let dir = if dir.norm() > 1e-6 {
                    dir.normalize()
                } else {
                    nalgebra::Vector2::new(1.0, 0.0)
                };
                (
                    Guidance::FreeFlight(FreeFlightRefs {
                        waypoint: inp.pos + Vec3::new(dir.x, dir.y, 0.0) * 200.0,
                        altitude: inp.pos.z + 50.0,
                        airspeed: 0.0,
                        capture: true,
                    }),
                    ldot_ref,
                )
            }
        }
    }

    /// Outbound re-tension reference: through the L_min sphere toward the
    /// traction start elevation, offset to the far side so the crossing has
    /// tangential speed for the opening turn.
    fn ff_exit_refs(&self) -> FreeFlightRefs {
        let cfg = &self.cfg;
        let el = cfg.start_elevation;
        let az = -self.ff_side * cfg.ff_exit_azimuth;
        let r = cfg.l_min + 60.0;
        FreeFlightRefs {
            waypoint: Vec3::new(
                r * el.cos() * az.cos(),
                r * el.cos() * az.sin(),
                r * el.sin(),
            ),
            altitude: r * el.sin(),
            airspeed: self.ff_airspeed,
            capture: false,
        }
    }

    fn reentry_guidance(
        &mut self,
        inp: &SupervisorInputs,
        sph: Option<&SphericalPosition>,
    ) -> (Guidance, f64) {
        let cfg = &self.cfg;
        match cfg.strategy {
            StrategyKind::FreeFlight => {
                // Two legs: glide back past the station while the winch
                // reels in, then climb back out through the L_min sphere to
                // re-tension toward the next traction entry.
                if !self.ff_exit && inp.d < 0.9 * cfg.l_min {
                    self.ff_exit = true;
                } else if self.ff_exit && inp.d > cfg.l_min + RETENSION_RETRY {
                    // Overshot the re-tension window (crossed too low for
                    // the elevation gate): swing back toward the station and
                    // fly the exit again.
                    self.ff_exit = false;
                }
                let refs = if self.ff_exit {
                    self.ff_exit_refs()
                } else {
                    FreeFlightRefs {
                        waypoint: Vec3::new(
                            0.0,
                            self.ff_side * cfg.ff_waypoint_lateral,
                            cfg.ff_waypoint_altitude,
                        ),
                        altitude: cfg.ff_waypoint_altitude,
                        airspeed: self.ff_airspeed,
                        capture: false,
                    }
                };
                (Guidance::FreeFlight(refs), self.reentry_ldot)
            }
            StrategyKind::RotationAroundGs => {
                let t = TautRefs {
                    theta_el_ref: cfg.rotation_elevation,
                    phi_az_ref: wrap_angle(self.rotation_target_az),
                };
                if let Some(s) = sph {
                    if angular_distance(&t, s.theta_el, s.phi_az) < cfg.target_switch_radius {
                        self.rotation_target_az += self.rotation_dir * cfg.rotation_azimuth_step;
                    }
                }
                (Guidance::Taut(t), self.reentry_ldot)
            }
            StrategyKind::ClimbAndDescend => {
                let t = match sph {
                    Some(s) => self.cad_schedule.update(s),
                    None => self.cad_schedule.target(),
                };
                (Guidance::Taut(t), cfg.cad_ldot_ref)
            }
        }
    }

    pub fn mission_stopped(&self) -> bool {
        self.mission_stop
    }

    pub fn last_switch_time(&self) -> f64 {
        self.last_switch_t
    }

    fn landing_guidance(&self, inp: &SupervisorInputs) -> HoverRefs {
        let cfg = &self.cfg;
        let spot = Vec3::new(3.0, 0.0, 0.0);
        let horiz = (inp.pos.xy() - spot.xy()).norm();
        if horiz > 3.0 {
            // Translate above the landing spot before descending.
            HoverRefs {
                pos: Vec3::new(spot.x, spot.y, inp.pos.z.max(10.0)),
                use_position: true,
                ..HoverRefs::default()
            }
        } else {
            // Controlled vertical descent.
            HoverRefs {
                pos: Vec3::new(spot.x, spot.y, inp.pos.z),
                vel: Vec3::new(0.0, 0.0, -cfg.landing_descent_rate),
                use_position: true,
                ..HoverRefs::default()
            }
        }
    }
}
