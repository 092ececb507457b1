//! Aerodynamic coefficient table, apparent-wind computation, force/moment
//! evaluation and tether-drag lumping.
//!
//! Incidence convention: `alpha` everywhere in this crate is the wing
//! incidence of the apparent wind in the `x_B`/`z_B` plane, zero when the
//! apparent wind blows along `-z_B` (straight ahead in dynamic flight) and
//! +90 deg when it blows along `+x_B`. The wind-axes rotation of
//! [`crate::frames::wind_to_body`] is parameterized so that its zero angle
//! puts the wind along `+x_B`; the two are offset by 90 deg, which
//! [`rotate_to_body`] applies internally.

use std::f64::consts::FRAC_PI_2;

use thiserror::Error;

use crate::config::AeroConfig;
use crate::frames::wind_to_body;
use crate::{Mat3, Vec3};

/// Relative wind below which incidence angles are undefined.
pub const MIN_APPARENT_WIND: f64 = 1e-6;

const BUILTIN_TABLE: &str = include_str!("../assets/aero_table.txt");

#[derive(Debug, Error)]
pub enum AeroError {
    #[error("cannot read aero table {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("aero table parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("aero table invalid: {0}")]
    Invalid(String),
}

/// Bilinear coefficient table over a rectangular (alpha, beta) grid.
#[derive(Debug, Clone)]
pub struct AeroCoeffTable {
    /// Alpha breakpoints, rad, strictly increasing.
    alpha: Vec<f64>,
    /// Beta breakpoints, rad, strictly increasing.
    beta: Vec<f64>,
    /// Row-major values, one row per alpha breakpoint.
    c_l: Vec<f64>,
    c_d: Vec<f64>,
    c_s: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffSample {
    pub c_l: f64,
    pub c_d: f64,
    pub c_s: f64,
    /// Query was outside the grid and clamped to the boundary.
    pub clamped: bool,
}

/// Apparent-wind state of the drone.
#[derive(Debug, Clone, Copy)]
pub struct AeroState {
    /// Wing incidence, rad (see module docs).
    pub alpha: f64,
    /// Side-slip, rad.
    pub beta: f64,
    /// Apparent wind magnitude, m/s.
    pub w_a: f64,
    /// Apparent wind vector in F, m/s.
    pub wind_f: Vec3,
    /// Incidence undefined (near-zero apparent wind); angles forced to 0.
    pub undefined_incidence: bool,
}

impl AeroCoeffTable {
    pub fn from_str(text: &str) -> Result<Self, AeroError> {
        parse_table(text).and_then(|t| {
            t.check()?;
            Ok(t)
        })
    }

    pub fn from_file(path: &str) -> Result<Self, AeroError> {
        let text = std::fs::read_to_string(path).map_err(|source| AeroError::Io {
            path: path.to_string(),
            source,
        })?;
        Self::from_str(&text)
    }

    /// The built-in default table.
    pub fn builtin() -> Self {
        Self::from_str(BUILTIN_TABLE).expect("built-in table is valid")
    }

    pub fn from_config(cfg: &AeroConfig) -> Result<Self, AeroError> {
        match &cfg.table_path {
            Some(path) => Self::from_file(path),
            None => Ok(Self::builtin()),
        }
    }

    fn check(&self) -> Result<(), AeroError> {
        for grid in [&self.alpha, &self.beta] {
            if grid.len() < 2 {
                return Err(AeroError::Invalid("grid needs >= 2 breakpoints".into()));
            }
            if grid.windows(2).any(|w| w[1] <= w[0]) {
                return Err(AeroError::Invalid(
                    "breakpoints must be strictly increasing".into(),
                ));
            }
        }
        let n = self.alpha.len() * self.beta.len();
        if self.c_l.len() != n || self.c_d.len() != n || self.c_s.len() != n {
            return Err(AeroError::Invalid("coefficient block size mismatch".into()));
        }
        if self.c_d.iter().any(|c| *c <= 0.0) {
            return Err(AeroError::Invalid("c_D must be positive everywhere".into()));
        }
        Ok(())
    }

    /// Bilinear lookup with boundary clamping.
    pub fn lookup(&self, alpha: f64, beta: f64) -> CoeffSample {
        let (ia, ta, ca) = bracket(&self.alpha, alpha);
        let (ib, tb, cb) = bracket(&self.beta, beta);
        let nb = self.beta.len();
        let interp = |v: &[f64]| {
            let v00 = v[ia * nb + ib];
            let v01 = v[ia * nb + ib + 1];
            let v10 = v[(ia + 1) * nb + ib];
            let v11 = v[(ia + 1) * nb + ib + 1];
            let lo = v00 + tb * (v01 - v00);
            let hi = v10 + tb * (v11 - v10);
            lo + ta * (hi - lo)
        };
        CoeffSample {
            c_l: interp(&self.c_l),
            c_d: interp(&self.c_d),
            c_s: interp(&self.c_s),
            clamped: ca || cb,
        }
    }

    /// Grid incidence with the highest lift at beta = 0, and that lift value.
    pub fn alpha_at_cl_max(&self) -> (f64, f64) {
        let mut best = (self.alpha[0], f64::NEG_INFINITY);
        for &a in &self.alpha {
            let c = self.lookup(a, 0.0).c_l;
            if c > best.1 {
                best = (a, c);
            }
        }
        best
    }

    pub fn alpha_range(&self) -> (f64, f64) {
        (self.alpha[0], *self.alpha.last().unwrap())
    }
}

/// Returns (lower index, fraction, clamped) for a query on a breakpoint grid.
fn bracket(grid: &[f64], x: f64) -> (usize, f64, bool) {
    let n = grid.len();
    if x <= grid[0] {
        return (0, 0.0, x < grid[0]);
    }
    if x >= grid[n - 1] {
        return (n - 2, 1.0, x > grid[n - 1]);
    }
    let i = grid.partition_point(|g| *g <= x) - 1;
    let i = i.min(n - 2);
    let t = (x - grid[i]) / (grid[i + 1] - grid[i]);
    (i, t, false)
}

fn parse_table(text: &str) -> Result<AeroCoeffTable, AeroError> {
    let mut unit = 1.0; // radians unless declared otherwise
    let mut alpha: Option<Vec<f64>> = None;
    let mut beta: Option<Vec<f64>> = None;
    let mut blocks: [Option<Vec<f64>>; 3] = [None, None, None];
    let mut current: Option<(usize, Vec<f64>, Vec<f64>)> = None; // (block, alphas, values)

    let finish =
        |cur: &mut Option<(usize, Vec<f64>, Vec<f64>)>,
         alpha: &mut Option<Vec<f64>>,
         blocks: &mut [Option<Vec<f64>>; 3]|
         -> Result<(), AeroError> {
            if let Some((idx, alphas, values)) = cur.take() {
                match alpha {
                    None => *alpha = Some(alphas),
                    Some(prev) if *prev == alphas => {}
                    Some(_) => {
                        return Err(AeroError::Invalid(
                            "alpha breakpoints differ between blocks".into(),
                        ))
                    }
                }
                blocks[idx] = Some(values);
            }
            Ok(())
        };

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| AeroError::Parse {
            line: lineno + 1,
            msg,
        };
        if let Some(rest) = line.strip_prefix("units:") {
            unit = match rest.trim() {
                "deg" => std::f64::consts::PI / 180.0,
                "rad" => 1.0,
                other => return Err(err(format!("unknown units {other:?}"))),
            };
            continue;
        }
        if let Some(idx) = ["c_L", "c_D", "c_S"].iter().position(|n| *n == line) {
            finish(&mut current, &mut alpha, &mut blocks)?;
            current = Some((idx, Vec::new(), Vec::new()));
            continue;
        }
        let nums: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse::<f64>).collect();
        let nums = nums.map_err(|e| err(format!("bad number: {e}")))?;
        match &mut current {
            None => return Err(err("data before any coefficient block".into())),
            Some((_, alphas, values)) => {
                if beta.is_none() && alphas.is_empty() && values.is_empty() {
                    beta = Some(nums.iter().map(|b| b * unit).collect());
                } else if alphas.is_empty() && values.is_empty() && beta.is_some() {
                    // First data row of a later block doubles as its header;
                    // require it to repeat the beta breakpoints or be data.
                    let b = beta.as_ref().unwrap();
                    let as_header: Vec<f64> = nums.iter().map(|v| v * unit).collect();
                    if nums.len() == b.len() && as_header.iter().zip(b).all(|(x, y)| x == y) {
                        continue; // repeated header row
                    }
                    let b_len = b.len();
                    if nums.len() != b_len + 1 {
                        return Err(err(format!(
                            "expected {} columns (alpha + one per beta), got {}",
                            b_len + 1,
                            nums.len()
                        )));
                    }
                    alphas.push(nums[0] * unit);
                    values.extend_from_slice(&nums[1..]);
                } else {
                    let b_len = beta.as_ref().map(Vec::len).unwrap_or(0);
                    if nums.len() != b_len + 1 {
                        return Err(err(format!(
                            "expected {} columns (alpha + one per beta), got {}",
                            b_len + 1,
                            nums.len()
                        )));
                    }
                    alphas.push(nums[0] * unit);
                    values.extend_from_slice(&nums[1..]);
                }
            }
        }
    }
    finish(&mut current, &mut alpha, &mut blocks)?;

    let missing = |what: &str| AeroError::Invalid(format!("missing {what}"));
    let [c_l, c_d, c_s] = blocks;
    Ok(AeroCoeffTable {
        alpha: alpha.ok_or_else(|| missing("alpha breakpoints"))?,
        beta: beta.ok_or_else(|| missing("beta breakpoints"))?,
        c_l: c_l.ok_or_else(|| missing("c_L block"))?,
        c_d: c_d.ok_or_else(|| missing("c_D block"))?,
        c_s: c_s.ok_or_else(|| missing("c_S block"))?,
    })
}

/// Apparent wind seen by the drone and its incidence angles.
///
/// `v_inertial` is the drone velocity in F, `wind_f` the absolute wind in F,
/// `h_bf` the F-to-B rotation.
pub fn apparent_wind(v_inertial: Vec3, wind_f: Vec3, h_bf: &Mat3) -> AeroState {
    let w_f = wind_f - v_inertial;
    let w_a = w_f.norm();
    if w_a < MIN_APPARENT_WIND {
        return AeroState {
            alpha: 0.0,
            beta: 0.0,
            w_a,
            wind_f: w_f,
            undefined_incidence: true,
        };
    }
    let w_b = h_bf * w_f;
    let alpha = w_b.x.atan2(w_b.y.hypot(w_b.z));
    let beta = (-w_b.y).atan2(-w_b.z);
    AeroState {
        alpha,
        beta,
        w_a,
        wind_f: w_f,
        undefined_incidence: false,
    }
}

/// Aerodynamic force vector `[F_D, F_S, F_L]` in wind axes.
pub fn aero_forces(w_a: f64, rho: f64, s: f64, c_d_tot: f64, c_s: f64, c_l: f64) -> Vec3 {
    let q = 0.5 * rho * s * w_a * w_a;
    Vec3::new(q * c_d_tot, q * c_s, q * c_l)
}

/// Rotates a wind-axes vector into the body frame for the given incidence.
pub fn rotate_to_body(v_wind_axes: Vec3, alpha: f64, beta: f64) -> Vec3 {
    wind_to_body(alpha - FRAC_PI_2, beta) * v_wind_axes
}

/// Aerodynamic moment in B: static stability slopes plus rate damping, all
/// scaled by the dynamic pressure and the reference lengths.
pub fn aero_moments(state: &AeroState, cfg: &AeroConfig, p: f64, q: f64, r: f64) -> Vec3 {
    let w_a = state.w_a;
    if w_a < MIN_APPARENT_WIND {
        return Vec3::zeros();
    }
    let p_hat = p * cfg.span / (2.0 * w_a);
    let q_hat = q * cfg.chord / (2.0 * w_a);
    let r_hat = r * cfg.span / (2.0 * w_a);
    let scale = 0.5 * cfg.rho * cfg.s_ref * cfg.chord * w_a * w_a;
    Vec3::new(
        scale * (cfg.c_l_beta * state.beta + cfg.c_lp * p_hat),
        scale * (cfg.c_m_alpha * (state.alpha - cfg.alpha_trim) + cfg.c_mq * q_hat),
        scale * (cfg.c_n_beta * state.beta + cfg.c_nr * r_hat),
    )
}

/// Drag coefficient lumped with the tether contribution.
pub fn tether_drag_increment(c_d: f64, c_dl: f64, d_t: f64, l_t: f64, s_up: f64) -> f64 {
    c_d + c_dl * d_t * l_t / (8.0 * s_up)
}

/// Aerodynamic efficiency at the best-lift incidence with the tether drag
/// increment lumped in; feeds the generation torque constant.
pub fn efficiency_at_cl_max(table: &AeroCoeffTable, drag_increment: f64) -> f64 {
    let (alpha_star, c_l_max) = table.alpha_at_cl_max();
    let c_d = table.lookup(alpha_star, 0.0).c_d;
    c_l_max / (c_d + drag_increment)
}
