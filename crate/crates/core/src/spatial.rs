//! Stride length and walking speed by strapdown double integration anchored
//! at foot-flat intervals.
//!
//! Orientation is propagated from the gyroscope between foot-flat intervals
//! and re-levelled from the measured gravity direction inside each of them.
//! Linear acceleration is integrated from one interval midpoint to the next;
//! whatever velocity is left at the second anchor is removed as a linear
//! drift before the second integration.

use nalgebra::{UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{GaitError, Result};
use crate::stats::Summary;
use crate::zv::ZeroVelocityInterval;

pub const STANDARD_GRAVITY: f64 = 9.80665;

/// Body-to-world rotation per sample.
pub type Orientation = UnitQuaternion<f64>;

fn vec3(v: &[f64; 3]) -> Vector3<f64> {
    Vector3::new(v[0], v[1], v[2])
}

/// Heading of the body forward (y) axis in the world horizontal plane.
fn heading(q: &Orientation) -> f64 {
    let f = q * Vector3::y();
    f.y.atan2(f.x)
}

/// Rotation that levels the body frame given a stationary specific-force
/// reading (gravity points along world +z).
fn level_from_gravity(f_body: &Vector3<f64>) -> Orientation {
    UnitQuaternion::rotation_between(f_body, &Vector3::z())
        .unwrap_or_else(|| UnitQuaternion::from_axis_angle(&Vector3::x_axis(), std::f64::consts::PI))
}

fn rotation_step(w0: &[f64; 3], w1: &[f64; 3], dt_s: f64) -> Orientation {
    let w = (vec3(w0) + vec3(w1)) * (0.5 * dt_s).to_radians();
    UnitQuaternion::from_scaled_axis(w)
}

/// Orientation for every sample. Inside each foot-flat interval the attitude
/// is levelled from the mean accelerometer reading, keeping the heading
/// carried in by gyro propagation; elsewhere it is integrated from the
/// gyroscope (deg/s) with the trapezoidal rate.
pub fn estimate_orientation(
    gyro_dps: &[[f64; 3]],
    accel_g: &[[f64; 3]],
    times_ms: &[f64],
    zvs: &[ZeroVelocityInterval],
) -> Result<Vec<Orientation>> {
    let n = times_ms.len();
    if gyro_dps.len() != n || accel_g.len() != n {
        return Err(GaitError::LengthMismatch("gyro, accel and time sequences".into()));
    }
    if zvs.is_empty() {
        return Err(GaitError::NoAnchors);
    }
    if zvs.iter().any(|z| z.start > z.end || z.end >= n) {
        return Err(GaitError::LengthMismatch("zero-velocity interval outside the record".into()));
    }
    let dt = |i: usize| (times_ms[i + 1] - times_ms[i]) / 1000.0;
    let mut q = vec![Orientation::identity(); n];

    let mut carried: Option<Orientation> = None;
    for (k, zv) in zvs.iter().enumerate() {
        let mean_f: Vector3<f64> =
            accel_g[zv.start..=zv.end].iter().map(vec3).sum::<Vector3<f64>>() / (zv.end - zv.start + 1) as f64;
        let mut anchor = level_from_gravity(&mean_f);
        if let Some(prev) = carried {
            let yaw = heading(&prev) - heading(&anchor);
            anchor = UnitQuaternion::from_axis_angle(&Vector3::z_axis(), yaw) * anchor;
        }
        q[zv.start..=zv.end].fill(anchor);

        let stop = zvs.get(k + 1).map_or(n - 1, |next| next.start);
        for i in zv.end..stop {
            q[i + 1] = q[i] * rotation_step(&gyro_dps[i], &gyro_dps[i + 1], dt(i));
        }
        carried = Some(q[stop]);
    }
    for i in (0..zvs[0].start).rev() {
        q[i] = q[i + 1] * rotation_step(&gyro_dps[i], &gyro_dps[i + 1], dt(i)).inverse();
    }
    Ok(q)
}

/// World-frame linear acceleration (m/s^2, gravity removed).
pub fn linear_acceleration(accel_g: &[[f64; 3]], orientation: &[Orientation], gravity: f64) -> Vec<Vector3<f64>> {
    accel_g
        .iter()
        .zip(orientation)
        .map(|(a, q)| q * (vec3(a) * gravity) - Vector3::new(0.0, 0.0, gravity))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrideTrajectory {
    pub stride: usize,
    /// Anchor samples (foot-flat midpoints) the stride runs between.
    pub start: usize,
    pub end: usize,
    pub start_ms: f64,
    pub end_ms: f64,
    #[serde(skip)]
    pub velocity: Vec<Vector3<f64>>,
    #[serde(skip)]
    pub position: Vec<Vector3<f64>>,
    /// Velocity left at the closing anchor before drift removal (m/s).
    pub residual_mps: f64,
    pub stride_length_cm: f64,
}

fn trapezoid(a: &[Vector3<f64>], t_ms: &[f64]) -> Vec<Vector3<f64>> {
    let mut out = Vec::with_capacity(a.len());
    let mut acc = Vector3::zeros();
    out.push(acc);
    for i in 1..a.len() {
        acc += (a[i] + a[i - 1]) * (0.5 * (t_ms[i] - t_ms[i - 1]) / 1000.0);
        out.push(acc);
    }
    out
}

/// Integrates every anchor-to-anchor stride with the zero-velocity update.
pub fn zvu_integrate(
    accel_g: &[[f64; 3]],
    orientation: &[Orientation],
    times_ms: &[f64],
    zvs: &[ZeroVelocityInterval],
    gravity: f64,
) -> Result<Vec<StrideTrajectory>> {
    if zvs.len() < 2 {
        return Err(GaitError::InsufficientAnchors(zvs.len()));
    }
    if accel_g.len() != times_ms.len() || orientation.len() != times_ms.len() {
        return Err(GaitError::LengthMismatch("accel, orientation and time sequences".into()));
    }
    let lin = linear_acceleration(accel_g, orientation, gravity);
    Ok(zvs
        .windows(2)
        .enumerate()
        .map(|(k, w)| integrate_stride(k, &lin, times_ms, w[0].midpoint(), w[1].midpoint()))
        .collect())
}

fn integrate_stride(stride: usize, lin: &[Vector3<f64>], t_ms: &[f64], start: usize, end: usize) -> StrideTrajectory {
    let t = &t_ms[start..=end];
    let raw = trapezoid(&lin[start..=end], t);
    let residual = raw[raw.len() - 1];
    let span = t[t.len() - 1] - t[0];
    let velocity: Vec<Vector3<f64>> = raw
        .iter()
        .zip(t)
        .map(|(v, ti)| if span > 0.0 { v - residual * ((ti - t[0]) / span) } else { *v })
        .collect();
    let position = trapezoid(&velocity, t);
    let d = position[position.len() - 1];
    StrideTrajectory {
        stride,
        start,
        end,
        start_ms: t[0],
        end_ms: t[t.len() - 1],
        velocity,
        position,
        residual_mps: residual.norm(),
        stride_length_cm: d.x.hypot(d.y) * 100.0,
    }
}

/// Plain double integration between two samples with zero initial velocity
/// and no drift removal; returns the horizontal displacement in cm.
pub fn integrate_uncorrected(lin: &[Vector3<f64>], times_ms: &[f64], start: usize, end: usize) -> f64 {
    let t = &times_ms[start..=end];
    let v = trapezoid(&lin[start..=end], t);
    let p = trapezoid(&v, t);
    let d = p[p.len() - 1];
    d.x.hypot(d.y) * 100.0
}

/// Walking speed in km/h from total stride length (cm) over `total_s`.
pub fn session_velocity(trajectories: &[StrideTrajectory], total_s: f64) -> Result<f64> {
    if !(total_s > 0.0) {
        return Err(GaitError::ZeroDuration);
    }
    let length_cm: f64 = trajectories.iter().map(|t| t.stride_length_cm).sum();
    Ok(3.6 / 100.0 * length_cm / total_s)
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SpatialReport {
    pub stride_length_left: Option<Summary>,
    pub stride_length_right: Option<Summary>,
    /// Both feet pooled.
    pub stride_length: Option<Summary>,
    /// Mean of the per-foot speeds, km/h.
    pub velocity: Option<f64>,
}

/// Stride-length summaries and speed. Each foot's speed is its summed stride
/// length over its summed stride time, so strides dropped upstream leave no
/// gap in the denominator.
pub fn spatial_report(left: &[StrideTrajectory], right: &[StrideTrajectory]) -> SpatialReport {
    let lengths = |s: &[StrideTrajectory]| -> Vec<f64> { s.iter().map(|t| t.stride_length_cm).collect() };
    let speed = |s: &[StrideTrajectory]| -> Option<f64> {
        let span: f64 = s.iter().map(|t| t.end_ms - t.start_ms).sum::<f64>() / 1000.0;
        session_velocity(s, span).ok()
    };
    let speeds: Vec<f64> = [speed(left), speed(right)].into_iter().flatten().collect();
    let pooled: Vec<f64> = lengths(left).into_iter().chain(lengths(right)).collect();
    SpatialReport {
        stride_length_left: Summary::of(&lengths(left)),
        stride_length_right: Summary::of(&lengths(right)),
        stride_length: Summary::of(&pooled),
        velocity: crate::stats::mean(&speeds),
    }
}
