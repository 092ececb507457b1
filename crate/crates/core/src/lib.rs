//! Simulation suite for a VTOL box-wing pumping airborne wind energy system.
//!
//! The crate models the full plant (drone 6-DOF, elastic tether, motor-winch
//! ground station), the hierarchical control stack (low-level rate control,
//! hovering / free-flight / taut-tether guidance, three ground-station
//! controllers), the supervisory phase machine with three reentry strategies,
//! and a closed-form steering-authority analysis tool.

pub mod aero;
pub mod config;
pub mod flight_control;
pub mod frames;
pub mod ground_station;
pub mod sim;
pub mod steering;
pub mod supervisor;
pub mod vehicle;

pub use config::ScenarioConfig;
pub use sim::{run_scenario, CycleMetrics, MissionOutcome, SimError};
pub use supervisor::{Phase, ReentryStrategy};

/// 3-vector of f64, used for positions, velocities, forces and moments.
pub type Vec3 = nalgebra::Vector3<f64>;
/// 3x3 rotation / generic matrix of f64.
pub type Mat3 = nalgebra::Matrix3<f64>;
