//! Synthetic two-foot sessions with exact ground truth.
//!
//! Each foot repeats the same cycle: heel strike, a loading phase ending at
//! toe-on, foot flat, heel-off, a push-off phase ending at toe off, then
//! swing. The foot moves only between heel-off and the next toe-on, along a
//! minimum-jerk forward profile with a vertical lift and a pitch rotation, so
//! the accelerometer and gyroscope readings are analytic derivatives of a
//! known trajectory. Pressure channels follow trapezoids phased on the same
//! events: the hindfoot loads at heel strike and unloads at heel-off, the
//! forefoot loads at toe-on and unloads at toe off.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{GaitError, Result};
use crate::events::{EventKind, GaitEvent};
use crate::model::{FootStream, GaitSession, SensorFrame, Side, CHANNELS, NOMINAL_RATE_HZ};
use crate::spatial::{spatial_report, SpatialReport, StrideTrajectory, STANDARD_GRAVITY};
use crate::temporal::{segment_cycles, temporal_report, GaitCycle, TemporalReport};
use crate::zv::ZeroVelocityInterval;

/// Share of the cycle from heel strike to toe-on.
const LOADING: f64 = 0.12;
/// Share of the cycle from heel-off to toe off.
const PUSH_OFF: f64 = 0.12;
const BASELINE: f64 = 0.02;
/// Curvature of the load curves at contact events and elsewhere, in
/// full-scale units per s^2.
const SHARP: f64 = 45.0;
const GENTLE: f64 = SHARP / 3.0;
const IMPACT_HZ: f64 = 8.0;
const UNLOAD_LEAD_S: f64 = 0.24;
const RISE_START: f64 = SHARP * 0.27;
const RISE_END: f64 = SHARP * 0.45;
/// Events closer than this to either end of the record are left out of the
/// ground truth.
const EDGE_MARGIN_S: f64 = 0.25;

/// Load amplitude per channel (1-based index k at position k - 1).
const HINDFOOT_GAIN: [f64; 2] = [0.70, 0.62];
const FOREFOOT_GAIN: [f64; 3] = [0.55, 0.60, 0.45];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaitProfile {
    pub stride_time_s: f64,
    /// Mean of left and right stance percent.
    pub stance_percent: f64,
    /// Left stance over right stance.
    pub asymmetry: f64,
    /// Delay from a left heel strike to the next right heel strike, as a
    /// share of the stride.
    pub step_phase: f64,
    pub stride_length_cm: f64,
    pub swing_height_m: f64,
    pub pitch_amplitude_deg: f64,
    /// Peak of the heel-strike vibration superimposed on the pitch during
    /// loading.
    pub impact_deg: f64,
    /// Walking direction about the vertical axis.
    pub heading_deg: f64,
    pub accel_noise_g: f64,
    pub gyro_noise_dps: f64,
    pub pressure_noise: f64,
    pub accel_bias_g: [f64; 3],
    pub gyro_bias_dps: [f64; 3],
    /// Multiplies every pressure channel (before the baseline offset).
    pub pressure_scale: f64,
    /// Added to every timestamp.
    pub time_offset_ms: f64,
    pub sample_rate_hz: f64,
    pub seed: u64,
}

impl Default for GaitProfile {
    fn default() -> Self {
        GaitProfile::normal()
    }
}

impl GaitProfile {
    pub fn normal() -> Self {
        GaitProfile {
            stride_time_s: 1.0,
            stance_percent: 60.0,
            asymmetry: 1.0,
            step_phase: 0.5,
            stride_length_cm: 120.0,
            swing_height_m: 0.10,
            pitch_amplitude_deg: 25.0,
            impact_deg: 1.5,
            heading_deg: 0.0,
            accel_noise_g: 0.01,
            gyro_noise_dps: 1.0,
            pressure_noise: 0.003,
            accel_bias_g: [0.0; 3],
            gyro_bias_dps: [0.0; 3],
            pressure_scale: 1.0,
            time_offset_ms: 0.0,
            sample_rate_hz: NOMINAL_RATE_HZ,
            seed: 0,
        }
    }

    /// Hemiparetic gait: long stance, short slow strides, with the longer
    /// stance and the longer step time on the named side.
    pub fn stroke(side: Side) -> Self {
        let (asymmetry, step_phase) = match side {
            Side::Left => (1.052, 0.528),
            Side::Right => (1.0 / 1.052, 0.472),
        };
        GaitProfile {
            stride_time_s: 2.2,
            stance_percent: 80.8,
            asymmetry,
            step_phase,
            stride_length_cm: 48.5,
            swing_height_m: 0.06,
            pitch_amplitude_deg: 15.0,
            ..GaitProfile::normal()
        }
    }

    /// `n` stroke profiles with stride time, stance and stride length drawn
    /// uniformly from the clinical mean +- 1 sd bands, hemiparetic side
    /// chosen at random. Seeded, so the cohort is reproducible.
    pub fn stroke_cohort(n: usize, seed: u64) -> Vec<GaitProfile> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|i| {
                let side = if rng.random_bool(0.5) { Side::Left } else { Side::Right };
                let asym = rng.random_range(1.0..1.08);
                let phase_shift = 0.55 * (asym - 1.0);
                let (asymmetry, step_phase) = match side {
                    Side::Left => (asym, 0.5 + phase_shift),
                    Side::Right => (1.0 / asym, 0.5 - phase_shift),
                };
                GaitProfile {
                    stride_time_s: rng.random_range(1.414..2.938),
                    stance_percent: rng.random_range(76.0..86.0),
                    asymmetry,
                    step_phase,
                    stride_length_cm: rng.random_range(33.6..63.5),
                    seed: seed.wrapping_mul(1000).wrapping_add(i as u64),
                    ..GaitProfile::stroke(side)
                }
            })
            .collect()
    }

    /// Profile by CLI name: `normal`, `stroke-left` or `stroke-right`.
    pub fn named(name: &str) -> Result<Self> {
        match name {
            "normal" => Ok(GaitProfile::normal()),
            "stroke-left" => Ok(GaitProfile::stroke(Side::Left)),
            "stroke-right" => Ok(GaitProfile::stroke(Side::Right)),
            other => Err(GaitError::InvalidProfile(format!(
                "unknown profile {other:?} (expected normal, stroke-left or stroke-right)"
            ))),
        }
    }

    pub fn noiseless(mut self) -> Self {
        self.accel_noise_g = 0.0;
        self.gyro_noise_dps = 0.0;
        self.pressure_noise = 0.0;
        self.accel_bias_g = [0.0; 3];
        self.gyro_bias_dps = [0.0; 3];
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Stance percent of one foot.
    pub fn stance_of(&self, side: Side) -> f64 {
        let right = 2.0 * self.stance_percent / (1.0 + self.asymmetry);
        match side {
            Side::Left => self.asymmetry * right,
            Side::Right => right,
        }
    }

    /// Double stance percent implied by the two stance shares and the step
    /// phase, taking a left cycle as reference.
    pub fn double_stance_percent(&self) -> f64 {
        let (sl, sr) = (self.stance_of(Side::Left) / 100.0, self.stance_of(Side::Right) / 100.0);
        let phi = self.step_phase;
        100.0 * ((phi + sr - 1.0).max(0.0) + (sl - phi).max(0.0))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(GaitError::InvalidProfile(what.to_string()));
        if !(self.stride_time_s > 0.0) {
            return bad("stride time must be positive");
        }
        for side in [Side::Left, Side::Right] {
            let s = self.stance_of(side) / 100.0;
            if !(s > LOADING + PUSH_OFF + 0.05 && s < 1.0) {
                return bad("stance must leave room for loading, foot flat and push-off, and stay below 100%");
            }
        }
        if !(self.asymmetry > 0.0) {
            return bad("asymmetry must be positive");
        }
        if !(self.step_phase > 0.0 && self.step_phase < 1.0) {
            return bad("step phase must lie in (0, 1)");
        }
        if !(self.stride_length_cm >= 0.0) || !(self.swing_height_m >= 0.0) {
            return bad("stride length and swing height must be non-negative");
        }
        if !(self.accel_noise_g >= 0.0 && self.gyro_noise_dps >= 0.0 && self.pressure_noise >= 0.0) {
            return bad("noise levels must be non-negative");
        }
        if !(self.pressure_scale > 0.0) {
            return bad("pressure scale must be positive");
        }
        if !(self.sample_rate_hz > 0.0) {
            return bad("sample rate must be positive");
        }
        Ok(())
    }
}

/// Exact events, foot-flat intervals and parameters of a generated session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub events_left: Vec<GaitEvent>,
    pub events_right: Vec<GaitEvent>,
    pub zv_left: Vec<ZeroVelocityInterval>,
    pub zv_right: Vec<ZeroVelocityInterval>,
    /// Anchor-to-anchor stride lengths per foot (cm).
    pub strides_left: Vec<f64>,
    pub strides_right: Vec<f64>,
    pub temporal: TemporalReport,
    pub spatial: SpatialReport,
}

impl GroundTruth {
    pub fn events(&self, side: Side) -> &[GaitEvent] {
        match side {
            Side::Left => &self.events_left,
            Side::Right => &self.events_right,
        }
    }

    pub fn zero_velocity(&self, side: Side) -> &[ZeroVelocityInterval] {
        match side {
            Side::Left => &self.zv_left,
            Side::Right => &self.zv_right,
        }
    }

    pub fn cycles(&self, side: Side) -> Vec<GaitCycle> {
        segment_cycles(self.events(side)).0
    }
}

/// Timing of one foot's cycle relative to its heel strike, in seconds.
#[derive(Debug, Clone, Copy)]
struct FootPlan {
    side: Side,
    first_hs: f64,
    stride: f64,
    toe_on: f64,
    heel_off: f64,
    toe_off: f64,
    swing_duration: f64,
}

impl FootPlan {
    fn new(profile: &GaitProfile, side: Side, first_hs: f64) -> Self {
        let t = profile.stride_time_s;
        let stance = profile.stance_of(side) / 100.0 * t;
        let toe_on = LOADING * t;
        let heel_off = stance - PUSH_OFF * t;
        FootPlan {
            side,
            first_hs,
            stride: t,
            toe_on,
            heel_off,
            toe_off: stance,
            swing_duration: t - heel_off + toe_on,
        }
    }

    fn heel_strike(&self, k: i64) -> f64 {
        self.first_hs + k as f64 * self.stride
    }

    /// Cycle index and time since that cycle's heel strike.
    fn locate(&self, t: f64) -> (i64, f64) {
        let k = ((t - self.first_hs) / self.stride).floor() as i64;
        (k, t - self.heel_strike(k))
    }

    /// Swing progress in [0, 1] with the index of the stance it leaves, or
    /// `None` while the foot is flat.
    fn swing(&self, t: f64) -> Option<(i64, f64)> {
        let (k, u) = self.locate(t);
        if u >= self.heel_off {
            Some((k, (u - self.heel_off) / self.swing_duration))
        } else if u < self.toe_on {
            Some((k - 1, (u + self.stride - self.heel_off) / self.swing_duration))
        } else {
            None
        }
    }
}

/// Forward, vertical and pitch trajectories of the swing with their time
/// derivatives, as functions of swing progress.
struct SwingShape {
    length_m: f64,
    height_m: f64,
    pitch_rad: f64,
    duration: f64,
}

impl SwingShape {
    /// (forward accel, vertical accel, pitch, pitch rate) in SI units.
    fn at(&self, tau: f64) -> (f64, f64, f64, f64) {
        use std::f64::consts::PI;
        let d2 = self.duration * self.duration;
        let ax = self.length_m * (60.0 * tau - 180.0 * tau.powi(2) + 120.0 * tau.powi(3)) / d2;
        let s = tau - tau * tau;
        let az = self.height_m * 64.0 * 6.0 * s * ((1.0 - 2.0 * tau).powi(2) - s) / d2;
        let pitch = -self.pitch_rad * (PI * tau).sin() * (2.0 * PI * tau).sin();
        let rate = -self.pitch_rad
            * PI
            * ((PI * tau).cos() * (2.0 * PI * tau).sin() + 2.0 * (PI * tau).sin() * (2.0 * PI * tau).cos())
            / self.duration;
        (ax, az, pitch, rate)
    }
}

/// Smooth 0 -> 1 transition `t` seconds after it starts: constant
/// curvature `start` (1/s^2) until the slope peaks, then constant curvature
/// `-end` until it levels off at 1.
fn edge(t: f64, start: f64, end: f64) -> f64 {
    let v = (2.0 / (1.0 / start + 1.0 / end)).sqrt();
    let (a, b) = (v / start, v / end);
    if t <= 0.0 {
        0.0
    } else if t < a {
        0.5 * start * t * t
    } else if t < a + b {
        let r = a + b - t;
        1.0 - 0.5 * end * r * r
    } else {
        1.0
    }
}

/// Start curvature for which an edge ending with curvature `end` lasts
/// `duration` seconds.
fn start_curvature(duration: f64, end: f64) -> f64 {
    1.0 / (duration * duration / 2.0 - 1.0 / end)
}

/// Hindfoot and forefoot load (0..1) at time `u` after heel strike. Contact
/// events (heel strike, toe off) are the sharpest bends. The forefoot starts
/// unloading a fixed lead before heel-off so the top of that edge stays clear
/// of the toe-off search.
fn loads(plan: &FootPlan, u: f64) -> (f64, f64) {
    let hind = edge(u, SHARP, GENTLE) * edge(plan.heel_off - u, GENTLE, GENTLE);
    let unload = plan.toe_off - plan.heel_off + UNLOAD_LEAD_S;
    let fore = edge(u, RISE_START, RISE_END) * edge(plan.toe_off - u, SHARP, start_curvature(unload, SHARP));
    (hind, fore)
}

/// Pitch (rad) and pitch rate (rad/s) of the heel-strike vibration `u`
/// seconds after heel strike, faded in and out so it vanishes smoothly at heel
/// strike and at toe-on.
fn impact(u: f64, loading: f64, amplitude: f64) -> (f64, f64) {
    use std::f64::consts::PI;
    let s = u / loading;
    let (env, denv) = ((PI * s).sin().powi(2), PI / loading * (2.0 * PI * s).sin());
    let w = 2.0 * PI * IMPACT_HZ;
    (amplitude * env * (w * u).sin(), amplitude * (denv * (w * u).sin() + env * w * (w * u).cos()))
}

/// Rounds to the six decimals the log format keeps, so a generated session
/// survives a write/parse round trip unchanged.
fn q6(v: f64) -> f64 {
    (v * 1e6).round() / 1e6
}

struct Noise {
    rng: ChaCha8Rng,
    accel: Option<Normal<f64>>,
    gyro: Option<Normal<f64>>,
    pressure: Option<Normal<f64>>,
}

impl Noise {
    fn new(profile: &GaitProfile) -> Self {
        let dist = |sd: f64| (sd > 0.0).then(|| Normal::new(0.0, sd).expect("finite non-negative sd"));
        Noise {
            rng: ChaCha8Rng::seed_from_u64(profile.seed),
            accel: dist(profile.accel_noise_g),
            gyro: dist(profile.gyro_noise_dps),
            pressure: dist(profile.pressure_noise),
        }
    }

    fn draw(rng: &mut ChaCha8Rng, d: &Option<Normal<f64>>) -> f64 {
        d.as_ref().map_or(0.0, |d| d.sample(rng))
    }

    fn accel(&mut self) -> f64 {
        Self::draw(&mut self.rng, &self.accel)
    }

    fn gyro(&mut self) -> f64 {
        Self::draw(&mut self.rng, &self.gyro)
    }

    fn pressure(&mut self) -> f64 {
        Self::draw(&mut self.rng, &self.pressure)
    }
}

fn synth_foot(profile: &GaitProfile, plan: &FootPlan, n: usize, noise: &mut Noise) -> FootStream {
    let fs = profile.sample_rate_hz;
    let shape = SwingShape {
        length_m: profile.stride_length_cm / 100.0,
        height_m: profile.swing_height_m,
        pitch_rad: profile.pitch_amplitude_deg.to_radians(),
        duration: plan.swing_duration,
    };
    let (sin_h, cos_h) = profile.heading_deg.to_radians().sin_cos();
    let frames = (0..n)
        .map(|i| {
            let t = i as f64 / fs;
            let (ax, az, mut pitch, mut rate) = plan.swing(t).map_or((0.0, 0.0, 0.0, 0.0), |(_, tau)| shape.at(tau));
            let (_, u) = plan.locate(t);
            if u < plan.toe_on {
                let (p, r) = impact(u, plan.toe_on, profile.impact_deg.to_radians());
                pitch += p;
                rate += r;
            }
            // World specific force in g: forward along the heading, plus
            // gravity reaction. Body frame: x lateral, y forward, z up.
            let f_world = [-sin_h * ax / STANDARD_GRAVITY, cos_h * ax / STANDARD_GRAVITY, 1.0 + az / STANDARD_GRAVITY];
            // Undo heading (rotate by -heading about z), then pitch about x.
            let fx = cos_h * f_world[0] + sin_h * f_world[1];
            let fy = -sin_h * f_world[0] + cos_h * f_world[1];
            let fz = f_world[2];
            let (sp, cp) = pitch.sin_cos();
            let body = [fx, cp * fy + sp * fz, -sp * fy + cp * fz];
            let gyro = [rate.to_degrees(), 0.0, 0.0];

            let (hind, fore) = loads(plan, u);
            let mid = hind * fore;
            let load = [0.3 * fore, FOREFOOT_GAIN[0] * fore, FOREFOOT_GAIN[1] * fore, FOREFOOT_GAIN[2] * fore, 0.25 * mid, 0.2 * mid, HINDFOOT_GAIN[0] * hind, HINDFOOT_GAIN[1] * hind];

            let mut accel = [0.0; 3];
            for a in 0..3 {
                accel[a] = q6(body[a] + profile.accel_bias_g[a] + noise.accel());
            }
            let mut g = [0.0; 3];
            for a in 0..3 {
                g[a] = q6(gyro[a] + profile.gyro_bias_dps[a] + noise.gyro());
            }
            let mut pressure = [0.0; CHANNELS];
            for (p, l) in pressure.iter_mut().zip(load) {
                *p = q6((profile.pressure_scale * (BASELINE + l) + noise.pressure()).clamp(0.0, 1.0));
            }
            SensorFrame {
                t_ms: q6(i as f64 * 1000.0 / fs + profile.time_offset_ms),
                accel,
                gyro: g,
                pressure,
            }
        })
        .collect();
    FootStream {
        side: plan.side,
        frames,
        sample_rate_hz: fs,
    }
}

struct FootTruth {
    events: Vec<GaitEvent>,
    zvs: Vec<ZeroVelocityInterval>,
    trajectories: Vec<StrideTrajectory>,
}

fn foot_truth(profile: &GaitProfile, plan: &FootPlan, duration: f64) -> FootTruth {
    let fs = profile.sample_rate_hz;
    let lo = EDGE_MARGIN_S;
    let hi = duration - EDGE_MARGIN_S;
    let ms = |t: f64| t * 1000.0 + profile.time_offset_ms;
    let mut events = Vec::new();
    let mut zvs = Vec::new();
    let mut k = ((lo - plan.first_hs) / plan.stride).floor() as i64;
    loop {
        let hs = plan.heel_strike(k);
        let to = hs + plan.toe_off;
        if to > hi {
            break;
        }
        if hs >= lo {
            let ton = hs + plan.toe_on;
            let ho = hs + plan.heel_off;
            for (kind, t) in [
                (EventKind::HeelStrike, hs),
                (EventKind::ToeOn, ton),
                (EventKind::HeelOff, ho),
                (EventKind::ToeOff, to),
            ] {
                let idx = match kind {
                    EventKind::ToeOn => (ton * fs - 1e-9).ceil(),
                    EventKind::HeelOff => (ho * fs + 1e-9).floor(),
                    _ => (t * fs).round(),
                } as usize;
                events.push(GaitEvent {
                    kind,
                    idx,
                    t_ms: ms(t),
                    side: plan.side,
                });
            }
            zvs.push(ZeroVelocityInterval {
                start: (ton * fs - 1e-9).ceil() as usize,
                end: (ho * fs + 1e-9).floor() as usize,
                side: plan.side,
            });
        }
        k += 1;
    }
    // The heel strike closing the last complete stance, when recorded.
    let hs = plan.heel_strike(k);
    if hs >= lo && hs <= hi {
        events.push(GaitEvent {
            kind: EventKind::HeelStrike,
            idx: (hs * fs).round() as usize,
            t_ms: ms(hs),
            side: plan.side,
        });
    }

    let anchor_ms = |z: &ZeroVelocityInterval| {
        let s = events.iter().find(|e| e.kind == EventKind::ToeOn && e.idx == z.start).map(|e| e.t_ms);
        let e = events.iter().find(|e| e.kind == EventKind::HeelOff && e.idx == z.end).map(|e| e.t_ms);
        0.5 * (s.unwrap_or(0.0) + e.unwrap_or(0.0))
    };
    let trajectories = zvs
        .windows(2)
        .enumerate()
        .map(|(i, w)| StrideTrajectory {
            stride: i,
            start: w[0].midpoint(),
            end: w[1].midpoint(),
            start_ms: anchor_ms(&w[0]),
            end_ms: anchor_ms(&w[1]),
            velocity: Vec::new(),
            position: Vec::new(),
            residual_mps: 0.0,
            stride_length_cm: profile.stride_length_cm,
        })
        .collect();
    FootTruth {
        events,
        zvs,
        trajectories,
    }
}

/// Generates a two-foot session of `duration_s` seconds and its ground truth.
pub fn generate(profile: &GaitProfile, duration_s: f64) -> Result<(GaitSession, GroundTruth)> {
    profile.validate()?;
    if !(duration_s >= 2.0 * profile.stride_time_s) {
        return Err(GaitError::DurationTooShort {
            duration_s,
            stride_s: profile.stride_time_s,
        });
    }
    let fs = profile.sample_rate_hz;
    let n = (duration_s * fs).floor() as usize;
    let first_left = 0.5 * profile.stride_time_s.min(1.0);
    let left = FootPlan::new(profile, Side::Left, first_left);
    let right = FootPlan::new(profile, Side::Right, first_left + profile.step_phase * profile.stride_time_s);

    let mut noise = Noise::new(profile);
    let left_stream = synth_foot(profile, &left, n, &mut noise);
    let right_stream = synth_foot(profile, &right, n, &mut noise);
    let mut session = GaitSession::new(left_stream, right_stream);
    session.meta.insert("generator".into(), "synthetic".into());
    session.meta.insert("seed".into(), profile.seed.to_string());

    let record_s = (n - 1) as f64 / fs;
    let lt = foot_truth(profile, &left, record_s);
    let rt = foot_truth(profile, &right, record_s);
    let (cl, _) = segment_cycles(&lt.events);
    let (cr, _) = segment_cycles(&rt.events);
    let (temporal, _) = temporal_report(&cl, &cr);
    let spatial = spatial_report(&lt.trajectories, &rt.trajectories);
    let truth = GroundTruth {
        strides_left: lt.trajectories.iter().map(|t| t.stride_length_cm).collect(),
        strides_right: rt.trajectories.iter().map(|t| t.stride_length_cm).collect(),
        events_left: lt.events,
        events_right: rt.events,
        zv_left: lt.zvs,
        zv_right: rt.zvs,
        temporal,
        spatial,
    };
    Ok((session, truth))
}

/// What `generate` wrote a log from, saved next to it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthSidecar {
    pub duration_s: f64,
    pub profile: GaitProfile,
    pub truth: GroundTruth,
}

impl TruthSidecar {
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| GaitError::Report(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| GaitError::Report(e.to_string()))
    }
}

/// How well detected events of one kind line up with the ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EventScore {
    pub truth: usize,
    pub detected: usize,
    /// Truth events with a detection of the same kind within tolerance.
    pub hits: usize,
    /// Detections with a truth event of the same kind within tolerance.
    pub true_detections: usize,
}

impl EventScore {
    /// Compares `detected` against `truth` for events of `kind`, counting a
    /// match when the sample indices differ by at most `tolerance`.
    pub fn compare(detected: &[GaitEvent], truth: &[GaitEvent], kind: EventKind, tolerance: usize) -> Self {
        let idx = |ev: &[GaitEvent]| -> Vec<usize> { ev.iter().filter(|e| e.kind == kind).map(|e| e.idx).collect() };
        let (d, t) = (idx(detected), idx(truth));
        let near = |x: usize, pool: &[usize]| pool.iter().any(|p| p.abs_diff(x) <= tolerance);
        EventScore {
            truth: t.len(),
            detected: d.len(),
            hits: t.iter().filter(|x| near(**x, &d)).count(),
            true_detections: d.iter().filter(|x| near(**x, &t)).count(),
        }
    }

    pub fn merge(self, other: EventScore) -> Self {
        EventScore {
            truth: self.truth + other.truth,
            detected: self.detected + other.detected,
            hits: self.hits + other.hits,
            true_detections: self.true_detections + other.true_detections,
        }
    }

    pub fn recall(&self) -> f64 {
        if self.truth == 0 {
            return 1.0;
        }
        self.hits as f64 / self.truth as f64
    }

    pub fn precision(&self) -> f64 {
        if self.detected == 0 {
            return 1.0;
        }
        self.true_detections as f64 / self.detected as f64
    }

    pub fn f1(&self) -> f64 {
        let (p, r) = (self.precision(), self.recall());
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }
}
