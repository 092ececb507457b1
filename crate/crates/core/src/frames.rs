//! Reference frames, spherical coordinates, quaternion algebra and the three
//! Euler-angle conventions used by the controllers.
//!
//! Frames:
//! * `F` — ground-fixed inertial frame, `z_F` up, `x_F` along the prevalent
//!   wind direction, origin at the ground station.
//! * `B` — body frame, `z_B` along the propeller axes, `x_B` towards the
//!   upper wing. Aligned with `F` when the drone sits in hover attitude.
//! * `A_w` — apparent-wind frame, `x_Aw` along the apparent wind.
//! * `L` — local (tether) frame: `L_T` along the tether pointing away from
//!   the ground station, `L_N` towards the local zenith tangent ("North"),
//!   `L_W` towards the local West.
//!
//! All rotation matrices here map *into* the first-named frame of their
//! constructor, i.e. `quat_to_bf` returns `H_BF` with `v_B = H_BF * v_F`.

use thiserror::Error;

use crate::{Mat3, Vec3};

/// Tolerance below which a quaternion is considered unit-norm.
pub const UNIT_NORM_TOL: f64 = 1e-9;
/// Pitch distance from +-pi/2 below which an Euler extraction is flagged as
/// gimbal-locked and the caller must switch convention.
pub const GIMBAL_LOCK_TOL: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum FrameError {
    #[error("degenerate position: zero distance from ground station")]
    DegeneratePosition,
    #[error("quaternion norm {norm} outside unit tolerance; renormalize first")]
    NormalizationRequired { norm: f64 },
    #[error("gimbal lock: pitch within {GIMBAL_LOCK_TOL} rad of +-pi/2 for {convention:?}")]
    GimbalLock { convention: EulerConvention },
    #[error("singular Euler-rate map: |theta_L| at pi/2")]
    SingularRateMap,
}

/// Drone position in spherical coordinates around the ground station.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalPosition {
    /// Distance from the ground station, m.
    pub d: f64,
    /// Elevation angle above the horizon, rad.
    pub theta_el: f64,
    /// Azimuth angle from `x_F`, rad, in (-pi, pi].
    pub phi_az: f64,
}

/// Unit quaternion, scalar-first: `q = [q1, q2, q3, q4]` with `q1` the
/// scalar part. Encodes the rotation from `F` to `B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitQuat {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub q4: f64,
}

/// The Euler-angle convention a triplet was extracted with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EulerConvention {
    /// Z-Y-X sequence from `F` to `B`; the usual multicopter angles.
    Hover,
    /// Dynamic-flight angles: at zero angles `z_B` is horizontal (along
    /// `x_F`) and `x_B` points up. `phi` is the heading, `theta` the flight
    /// pitch, `psi` the bank around the flight axis.
    FreeFlight,
    /// Taut-tether angles, extracted from `H_BL`; zero `phi`/`theta` means
    /// `x_B` aligned with the tether.
    TautTether,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerTriplet {
    pub phi: f64,
    pub theta: f64,
    pub psi: f64,
    pub convention: EulerConvention,
}

/// Wraps an angle to (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let mut w = a.rem_euclid(std::f64::consts::TAU);
    if w > std::f64::consts::PI {
        w -= std::f64::consts::TAU;
    }
    w
}

/// Converts an inertial position to spherical coordinates
/// `(d, theta_el, phi_az)`.
pub fn to_spherical(p: Vec3) -> Result<SphericalPosition, FrameError> {
    let d = p.norm();
    if d <= 0.0 {
        return Err(FrameError::DegeneratePosition);
    }
    let horiz = p.x.hypot(p.y);
    Ok(SphericalPosition {
        d,
        theta_el: p.z.atan2(horiz),
        phi_az: p.y.atan2(p.x),
    })
}

/// Inertial position of a point at the given spherical coordinates.
pub fn from_spherical(s: &SphericalPosition) -> Vec3 {
    Vec3::new(
        s.d * s.theta_el.cos() * s.phi_az.cos(),
        s.d * s.theta_el.cos() * s.phi_az.sin(),
        s.d * s.theta_el.sin(),
    )
}

impl UnitQuat {
    pub const IDENTITY: UnitQuat = UnitQuat {
        q1: 1.0,
        q2: 0.0,
        q3: 0.0,
        q4: 0.0,
    };

    pub fn new(q1: f64, q2: f64, q3: f64, q4: f64) -> Self {
        Self { q1, q2, q3, q4 }
    }

    pub fn norm(&self) -> f64 {
        (self.q1 * self.q1 + self.q2 * self.q2 + self.q3 * self.q3 + self.q4 * self.q4).sqrt()
    }

    /// Returns the renormalized quaternion. Called after every integrator
    /// step to bound drift.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self {
            q1: self.q1 / n,
            q2: self.q2 / n,
            q3: self.q3 / n,
            q4: self.q4 / n,
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.q1, self.q2, self.q3, self.q4]
    }
}

/// Rotation matrix `H_BF` from the inertial frame `F` to the body frame `B`
/// for a unit quaternion, diagonal entries read as `2(q_i^2 + q_j^2) - 1`.
pub fn quat_to_bf(q: &UnitQuat) -> Result<Mat3, FrameError> {
    let norm = q.norm();
    if (norm - 1.0).abs() > UNIT_NORM_TOL {
        return Err(FrameError::NormalizationRequired { norm });
    }
    let (q1, q2, q3, q4) = (q.q1, q.q2, q.q3, q.q4);
    Ok(Mat3::new(
        2.0 * (q1 * q1 + q2 * q2) - 1.0,
        2.0 * (q2 * q3 + q1 * q4),
        2.0 * (q2 * q4 - q1 * q3),
        2.0 * (q2 * q3 - q1 * q4),
        2.0 * (q1 * q1 + q3 * q3) - 1.0,
        2.0 * (q3 * q4 + q1 * q2),
        2.0 * (q2 * q4 + q1 * q3),
        2.0 * (q3 * q4 - q1 * q2),
        2.0 * (q1 * q1 + q4 * q4) - 1.0,
    ))
}

/// Rotation matrix `H_WB` from the apparent-wind frame to the body frame.
pub fn wind_to_body(alpha: f64, beta: f64) -> Mat3 {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    Mat3::new(
        ca,
        0.0,
        -sa, //
        sa * sb,
        cb,
        ca * sb, //
        sa * cb,
        -sb,
        ca * cb,
    )
}

/// Rotation matrix `H_FL` from the inertial frame to the local (tether)
/// frame: rows are the `L_T`, `L_N`, `L_W` unit vectors expressed in `F`.
pub fn inertial_to_local(theta_el: f64, phi_az: f64) -> Mat3 {
    let (st, ct) = theta_el.sin_cos();
    let (sp, cp) = phi_az.sin_cos();
    Mat3::new(
        ct * cp,
        ct * sp,
        st, //
        -st * cp,
        -st * sp,
        ct, //
        sp,
        -cp,
        0.0,
    )
}

/// Quaternion kinematics: `q_dot = 1/2 * Omega(P,Q,R) * q`.
pub fn quat_derivative(q: &UnitQuat, p: f64, qr: f64, r: f64) -> [f64; 4] {
    [
        0.5 * (-p * q.q2 - qr * q.q3 - r * q.q4),
        0.5 * (p * q.q1 + r * q.q3 - qr * q.q4),
        0.5 * (qr * q.q1 - r * q.q2 + p * q.q4),
        0.5 * (r * q.q1 + qr * q.q2 - p * q.q3),
    ]
}

// Frame-rotation (DCM) elementary matrices: coordinates of a fixed vector in
// a frame rotated by the angle about the given axis.
fn rot_x(a: f64) -> Mat3 {
    let (s, c) = a.sin_cos();
    Mat3::new(1.0, 0.0, 0.0, 0.0, c, s, 0.0, -s, c)
}

fn rot_y(a: f64) -> Mat3 {
    let (s, c) = a.sin_cos();
    Mat3::new(c, 0.0, -s, 0.0, 1.0, 0.0, s, 0.0, c)
}

fn rot_z(a: f64) -> Mat3 {
    let (s, c) = a.sin_cos();
    Mat3::new(c, s, 0.0, -s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Constant attitude offset of the free-flight convention: at zero angles
/// `x_B = z_F` (up), `y_B = -y_F`, `z_B = x_F` (forward).
fn free_flight_base() -> Mat3 {
    Mat3::new(0.0, 0.0, 1.0, 0.0, -1.0, 0.0, 1.0, 0.0, 0.0)
}

/// Extracts Euler angles from a rotation matrix.
///
/// `h` is `H_BF` for the `Hover` and `FreeFlight` conventions and `H_BL`
/// for `TautTether`. Fails with a gimbal-lock flag when the pitch angle is
/// within [`GIMBAL_LOCK_TOL`] of +-pi/2; the caller then switches to the
/// complementary convention.
pub fn extract_euler(h: &Mat3, convention: EulerConvention) -> Result<EulerTriplet, FrameError> {
    let asin_clamped = |v: f64| v.clamp(-1.0, 1.0).asin();
    let (phi, theta, psi) = match convention {
        EulerConvention::Hover => (
            h[(1, 2)].atan2(h[(2, 2)]),
            asin_clamped(-h[(0, 2)]),
            h[(0, 1)].atan2(h[(0, 0)]),
        ),
        EulerConvention::FreeFlight => (
            h[(2, 1)].atan2(h[(2, 0)]),
            asin_clamped(-h[(2, 2)]),
            h[(1, 2)].atan2(h[(0, 2)]),
        ),
        EulerConvention::TautTether => (
            (-h[(0, 1)]).atan2(h[(0, 0)]),
            asin_clamped(h[(0, 2)]),
            (-h[(1, 2)]).atan2(h[(2, 2)]),
        ),
    };
    if std::f64::consts::FRAC_PI_2 - theta.abs() < GIMBAL_LOCK_TOL {
        return Err(FrameError::GimbalLock { convention });
    }
    Ok(EulerTriplet {
        phi: wrap_angle(phi),
        theta,
        psi: wrap_angle(psi),
        convention,
    })
}

/// Rebuilds the rotation matrix a triplet was extracted from
/// (`H_BF` for Hover/FreeFlight, `H_BL` for TautTether).
pub fn triplet_to_matrix(t: &EulerTriplet) -> Mat3 {
    match t.convention {
        EulerConvention::Hover => rot_x(t.phi) * rot_y(t.theta) * rot_z(t.psi),
        EulerConvention::FreeFlight => {
            free_flight_base() * rot_x(-t.psi) * rot_y(t.theta) * rot_z(t.phi)
        }
        // Active rotations: H_BL = Rx_a(psi) * Ry_a(theta) * Rz_a(phi).
        EulerConvention::TautTether => {
            rot_x(-t.psi) * rot_y(-t.theta) * rot_z(-t.phi)
        }
    }
}

/// `H_BL`: rotation from body to local frame, `v_L = H_BL v_B`.
pub fn body_to_local(h_bf: &Mat3, theta_el: f64, phi_az: f64) -> Mat3 {
    inertial_to_local(theta_el, phi_az) * h_bf.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn assert_mat_eq(a: &Mat3, b: &Mat3, tol: f64) {
        for i in 0..3 {
            for j in 0..3 {
                assert!(
                    (a[(i, j)] - b[(i, j)]).abs() < tol,
                    "({i},{j}): {} vs {}\na = {a}\nb = {b}",
                    a[(i, j)],
                    b[(i, j)]
                );
            }
        }
    }

    fn assert_orthonormal(m: &Mat3, tol: f64) {
        assert_mat_eq(&(m.transpose() * m), &Mat3::identity(), tol);
        assert!((m.determinant() - 1.0).abs() < tol, "det = {}", m.determinant());
    }

    fn random_unit_quat(rng: &mut impl Rng) -> UnitQuat {
        loop {
            let q = UnitQuat::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let n = q.norm();
            if n > 1e-3 {
                return UnitQuat::new(q.q1 / n, q.q2 / n, q.q3 / n, q.q4 / n);
            }
        }
    }

    // Test-only axis-angle oracle: frame rotation of F by `angle` about `axis`.
    fn axis_angle_dcm(axis: Vec3, angle: f64) -> Mat3 {
        let u = axis.normalize();
        let (s, c) = angle.sin_cos();
        let ux = Mat3::new(0.0, -u.z, u.y, u.z, 0.0, -u.x, -u.y, u.x, 0.0);
        // Active rotation R, then the frame DCM is its transpose.
        let r = Mat3::identity() + s * ux + (1.0 - c) * (ux * ux);
        r.transpose()
    }

    #[test]
    fn spherical_axis_aligned() {
        let s = to_spherical(Vec3::new(100.0, 0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(s.d, 100.0);
        assert_abs_diff_eq!(s.theta_el, 0.0);
        assert_abs_diff_eq!(s.phi_az, 0.0);
    }

    #[test]
    fn spherical_oblique() {
        let s = to_spherical(Vec3::new(0.0, 100.0, 100.0)).unwrap();
        assert_abs_diff_eq!(s.d, 141.4213562373095, epsilon = 1e-9);
        assert_abs_diff_eq!(s.theta_el, std::f64::consts::FRAC_PI_4, epsilon = 1e-9);
        assert_abs_diff_eq!(s.phi_az, std::f64::consts::FRAC_PI_2, epsilon = 1e-9);
    }

    #[test]
    fn spherical_30_degrees_elevation() {
        let z = 100.0 * (30.0_f64).to_radians().tan();
        let s = to_spherical(Vec3::new(100.0, 0.0, z)).unwrap();
        assert_abs_diff_eq!(s.theta_el, 0.5235987755982988, epsilon = 1e-9);
    }

    #[test]
    fn spherical_zero_norm_rejected() {
        assert_eq!(
            to_spherical(Vec3::zeros()),
            Err(FrameError::DegeneratePosition)
        );
    }

    #[test]
    fn spherical_round_trip() {
        let p = Vec3::new(30.0, -40.0, 50.0);
        let s = to_spherical(p).unwrap();
        assert_abs_diff_eq!((from_spherical(&s) - p).norm(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn quat_identity_gives_identity_matrix() {
        let h = quat_to_bf(&UnitQuat::IDENTITY).unwrap();
        assert_mat_eq(&h, &Mat3::identity(), 1e-15);
    }

    #[test]
    fn quat_90deg_yaw() {
        let q = UnitQuat::new(FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2);
        let h = quat_to_bf(&q).unwrap();
        let expected = Mat3::new(0.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
        assert_mat_eq(&h, &expected, 1e-12);
        // Cross-check against the axis-angle oracle: frame yawed +90 deg about z.
        let oracle = axis_angle_dcm(Vec3::z(), std::f64::consts::FRAC_PI_2);
        assert_mat_eq(&h, &oracle, 1e-12);
    }

    #[test]
    fn quat_matrices_orthonormal() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let q = random_unit_quat(&mut rng);
            assert_orthonormal(&quat_to_bf(&q).unwrap(), 1e-9);
        }
    }

    #[test]
    fn quat_non_unit_rejected() {
        let q = UnitQuat::new(1.0, 0.1, 0.0, 0.0);
        assert!(matches!(
            quat_to_bf(&q),
            Err(FrameError::NormalizationRequired { .. })
        ));
    }

    #[test]
    fn wind_to_body_zero_is_identity() {
        assert_mat_eq(&wind_to_body(0.0, 0.0), &Mat3::identity(), 1e-15);
    }

    #[test]
    fn wind_to_body_alpha_90() {
        let h = wind_to_body(std::f64::consts::FRAC_PI_2, 0.0);
        let expected = Mat3::new(0.0, 0.0, -1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0);
        assert_mat_eq(&h, &expected, 1e-12);
    }

    #[test]
    fn wind_to_body_beta_90() {
        let h = wind_to_body(0.0, std::f64::consts::FRAC_PI_2);
        let expected = Mat3::new(1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, -1.0, 0.0);
        assert_mat_eq(&h, &expected, 1e-12);
    }

    #[test]
    fn local_frame_at_origin_azimuth() {
        // theta_el = 0, phi_az = 0: tether along x_F, North is the zenith
        // tangent z_F, West is -y_F.
        let h = inertial_to_local(0.0, 0.0);
        let expected = Mat3::new(1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, -1.0, 0.0);
        assert_mat_eq(&h, &expected, 1e-15);
    }

    #[test]
    fn local_frame_at_zenith() {
        let h = inertial_to_local(std::f64::consts::FRAC_PI_2, 0.0);
        // Tether row points straight up.
        assert_abs_diff_eq!(h[(0, 0)], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(h[(0, 1)], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(h[(0, 2)], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn local_frame_orthonormal_everywhere() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let th = rng.gen_range(-1.5..1.5);
            let ph = rng.gen_range(-3.1..3.1);
            assert_orthonormal(&inertial_to_local(th, ph), 1e-12);
        }
    }

    #[test]
    fn local_frame_tether_row_matches_position_direction() {
        let p = Vec3::new(40.0, 25.0, 30.0);
        let s = to_spherical(p).unwrap();
        let h = inertial_to_local(s.theta_el, s.phi_az);
        let t = Vec3::new(h[(0, 0)], h[(0, 1)], h[(0, 2)]);
        assert_abs_diff_eq!((t - p.normalize()).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn quat_derivative_at_rest() {
        let d = quat_derivative(&UnitQuat::IDENTITY, 0.0, 0.0, 0.0);
        assert_eq!(d, [0.0; 4]);
    }

    #[test]
    fn quat_derivative_pure_roll_rate() {
        let d = quat_derivative(&UnitQuat::IDENTITY, 2.0, 0.0, 0.0);
        assert_abs_diff_eq!(d[0], 0.0);
        assert_abs_diff_eq!(d[1], 1.0);
        assert_abs_diff_eq!(d[2], 0.0);
        assert_abs_diff_eq!(d[3], 0.0);
    }

    #[test]
    fn quat_derivative_norm_preserving() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let q = random_unit_quat(&mut rng);
            let (p, qq, r) = (
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
            );
            let d = quat_derivative(&q, p, qq, r);
            let dot = q.q1 * d[0] + q.q2 * d[1] + q.q3 * d[2] + q.q4 * d[3];
            assert_abs_diff_eq!(dot, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn euler_identity_hover() {
        let t = extract_euler(&Mat3::identity(), EulerConvention::Hover).unwrap();
        assert_abs_diff_eq!(t.phi, 0.0);
        assert_abs_diff_eq!(t.theta, 0.0);
        assert_abs_diff_eq!(t.psi, 0.0);
    }

    #[test]
    fn euler_free_flight_base_round_trip() {
        // The hover identity attitude is the free-flight singularity, so the
        // trivial free-flight attitude is the base matrix itself.
        let base = free_flight_base();
        let t = extract_euler(&base, EulerConvention::FreeFlight).unwrap();
        assert_abs_diff_eq!(t.phi, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.theta, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.psi, 0.0, epsilon = 1e-12);
        assert_mat_eq(&triplet_to_matrix(&t), &base, 1e-12);
    }

    #[test]
    fn euler_hover_yaw_90() {
        let q = UnitQuat::new(FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2);
        let h = quat_to_bf(&q).unwrap();
        let t = extract_euler(&h, EulerConvention::Hover).unwrap();
        // psi_h = atan2(H(1,2), H(1,1)) = atan2(1, 0)
        assert_abs_diff_eq!(t.psi, std::f64::consts::FRAC_PI_2, epsilon = 1e-12);
        assert_abs_diff_eq!(t.phi, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.theta, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn euler_round_trip_all_conventions() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let conventions = [
            EulerConvention::Hover,
            EulerConvention::FreeFlight,
            EulerConvention::TautTether,
        ];
        let mut accepted = [0usize; 3];
        for _ in 0..1000 {
            let q = random_unit_quat(&mut rng);
            let h = quat_to_bf(&q).unwrap();
            for (k, conv) in conventions.iter().enumerate() {
                match extract_euler(&h, *conv) {
                    Ok(t) => {
                        if t.theta.abs() < 85.0_f64.to_radians() {
                            accepted[k] += 1;
                            assert_mat_eq(&triplet_to_matrix(&t), &h, 1e-9);
                        }
                    }
                    Err(FrameError::GimbalLock { .. }) => {}
                    Err(e) => panic!("unexpected error {e}"),
                }
            }
        }
        for count in accepted {
            assert!(count > 500, "too few non-degenerate samples: {count}");
        }
    }

    #[test]
    fn gimbal_lock_never_in_both_hover_and_free_flight() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..2000 {
            let q = random_unit_quat(&mut rng);
            let h = quat_to_bf(&q).unwrap();
            let hover = extract_euler(&h, EulerConvention::Hover);
            let ff = extract_euler(&h, EulerConvention::FreeFlight);
            assert!(
                hover.is_ok() || ff.is_ok(),
                "both conventions locked for {q:?}"
            );
        }
        // The hover-attitude identity is exactly the free-flight singularity
        // and vice versa.
        assert!(matches!(
            extract_euler(&free_flight_base(), EulerConvention::Hover),
            Err(FrameError::GimbalLock { .. })
        ));
        assert!(extract_euler(&free_flight_base(), EulerConvention::FreeFlight).is_ok());
        assert!(matches!(
            extract_euler(&Mat3::identity(), EulerConvention::FreeFlight),
            Err(FrameError::GimbalLock { .. })
        ));
    }

    #[test]
    fn taut_tether_zero_angles_when_x_b_along_tether() {
        // Drone at elevation 0.4, azimuth 0.2, with x_B exactly along the
        // tether: H_BF = H_LF restricted so that body axes coincide with L.
        let (th, ph) = (0.4, 0.2);
        let h_fl = inertial_to_local(th, ph);
        // Choose H_BF = H_FL, i.e. body axes = local axes.
        let h_bl = body_to_local(&h_fl, th, ph);
        let t = extract_euler(&h_bl, EulerConvention::TautTether).unwrap();
        assert_abs_diff_eq!(t.phi, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.theta, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.psi, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn wrap_angle_range() {
        assert_abs_diff_eq!(wrap_angle(3.0 * std::f64::consts::PI), std::f64::consts::PI);
        assert_abs_diff_eq!(wrap_angle(-std::f64::consts::PI), std::f64::consts::PI);
        assert_abs_diff_eq!(wrap_angle(0.1 - std::f64::consts::TAU), 0.1, epsilon = 1e-12);
    }
}
