//! Sensor data model and the CSV log format.
//!
//! One [`SensorFrame`] is a single sample of one foot: a millisecond
//! timestamp, body-frame acceleration in g (y axis toward the walking
//! direction), angular rate in deg/s and eight film-pressure channels
//! normalized to `[0, 1]`. Channels 1-4 sit under the forefoot (channel 1 is
//! the hallux), 5-6 under the midfoot and 7-8 under the heel.
//!
//! Both feet share one log file, distinguished by the `foot` column:
//!
//! ```text
//! t_ms,foot,ax_g,ay_g,az_g,gx_dps,gy_dps,gz_dps,p1,p2,p3,p4,p5,p6,p7,p8
//! 0,L,0,0,1,0,0,0,0.02,0.5,0.6,0.5,0.1,0.1,0.7,0.7
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::diag::{Diagnostic, DiagnosticKind};
use crate::error::{GaitError, Result};

pub const NOMINAL_RATE_HZ: f64 = 66.0;
pub const CHANNELS: usize = 8;
pub const CSV_HEADER: &str = "t_ms,foot,ax_g,ay_g,az_g,gx_dps,gy_dps,gz_dps,p1,p2,p3,p4,p5,p6,p7,p8";
const COLUMNS: [&str; 16] = [
    "t_ms", "foot", "ax_g", "ay_g", "az_g", "gx_dps", "gy_dps", "gz_dps", "p1", "p2", "p3", "p4",
    "p5", "p6", "p7", "p8",
];

/// Minimum overlap of the two feet's time bases for bilateral parameters.
pub const MIN_BILATERAL_OVERLAP_MS: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn code(self) -> &'static str {
        match self {
            Side::Left => "L",
            Side::Right => "R",
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    fn from_code(s: &str) -> Option<Side> {
        match s {
            "L" => Some(Side::Left),
            "R" => Some(Side::Right),
            _ => None,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorFrame {
    pub t_ms: f64,
    pub accel: [f64; 3],
    pub gyro: [f64; 3],
    pub pressure: [f64; CHANNELS],
}

impl SensorFrame {
    /// Pressure of 1-based channel `k`, matching the insole's channel numbering.
    pub fn channel(&self, k: usize) -> f64 {
        self.pressure[k - 1]
    }

    fn is_finite(&self) -> bool {
        self.t_ms.is_finite()
            && self.accel.iter().all(|v| v.is_finite())
            && self.gyro.iter().all(|v| v.is_finite())
            && self.pressure.iter().all(|v| v.is_finite())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FootStream {
    pub side: Side,
    pub frames: Vec<SensorFrame>,
    pub sample_rate_hz: f64,
}

impl FootStream {
    /// Builds a stream with the sample rate inferred from the median
    /// inter-sample interval (nominal rate when fewer than two frames).
    pub fn from_frames(side: Side, frames: Vec<SensorFrame>) -> Self {
        let sample_rate_hz = median_interval_ms(&frames)
            .filter(|dt| *dt > 0.0)
            .map_or(NOMINAL_RATE_HZ, |dt| 1000.0 / dt);
        FootStream {
            side,
            frames,
            sample_rate_hz,
        }
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn times_ms(&self) -> Vec<f64> {
        self.frames.iter().map(|f| f.t_ms).collect()
    }

    pub fn gyro_axis(&self, axis: usize) -> Vec<f64> {
        self.frames.iter().map(|f| f.gyro[axis]).collect()
    }

    pub fn accel_axis(&self, axis: usize) -> Vec<f64> {
        self.frames.iter().map(|f| f.accel[axis]).collect()
    }

    /// 1-based channel.
    pub fn channel(&self, k: usize) -> Vec<f64> {
        self.frames.iter().map(|f| f.channel(k)).collect()
    }

    fn span_ms(&self) -> Option<(f64, f64)> {
        Some((self.frames.first()?.t_ms, self.frames.last()?.t_ms))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaitSession {
    pub left: FootStream,
    pub right: FootStream,
    pub meta: BTreeMap<String, String>,
}

impl GaitSession {
    pub fn new(left: FootStream, right: FootStream) -> Self {
        GaitSession {
            left,
            right,
            meta: BTreeMap::new(),
        }
    }

    pub fn foot(&self, side: Side) -> &FootStream {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// Overlap of the two feet's time bases in milliseconds (0 when disjoint).
    pub fn bilateral_overlap_ms(&self) -> f64 {
        match (self.left.span_ms(), self.right.span_ms()) {
            (Some((l0, l1)), Some((r0, r1))) => (l1.min(r1) - l0.max(r0)).max(0.0),
            _ => 0.0,
        }
    }

    pub fn has_bilateral_overlap(&self) -> bool {
        self.bilateral_overlap_ms() >= MIN_BILATERAL_OVERLAP_MS
    }
}

fn median_interval_ms(frames: &[SensorFrame]) -> Option<f64> {
    if frames.len() < 2 {
        return None;
    }
    let mut dts: Vec<f64> = frames.windows(2).map(|w| w[1].t_ms - w[0].t_ms).collect();
    dts.sort_by(f64::total_cmp);
    let mid = dts.len() / 2;
    Some(if dts.len() % 2 == 1 {
        dts[mid]
    } else {
        0.5 * (dts[mid - 1] + dts[mid])
    })
}

/// Ingestion options. Raw pressure readings are divided by
/// `pressure_full_scale` so that full scale maps to 1.0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IngestOptions {
    pub pressure_full_scale: f64,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            pressure_full_scale: 1.0,
        }
    }
}

/// Parses one data row. `line` is the 1-based line number used in errors.
pub fn parse_row(text: &str, line: usize, opts: &IngestOptions) -> Result<(Side, SensorFrame)> {
    let malformed = |reason: String| GaitError::MalformedRow { line, reason };
    let fields: Vec<&str> = text.split(',').collect();
    if fields.len() != COLUMNS.len() {
        return Err(malformed(format!(
            "expected {} columns, found {}",
            COLUMNS.len(),
            fields.len()
        )));
    }
    let side = Side::from_code(fields[1])
        .ok_or_else(|| malformed(format!("foot must be L or R, found {:?}", fields[1])))?;

    let mut values = [0.0f64; 16];
    for (i, field) in fields.iter().enumerate() {
        if i == 1 {
            continue;
        }
        let v: f64 = field
            .parse()
            .map_err(|_| malformed(format!("column {} is not a number: {:?}", COLUMNS[i], field)))?;
        if !v.is_finite() {
            return Err(malformed(format!("column {} is not finite", COLUMNS[i])));
        }
        values[i] = v;
    }

    let mut pressure = [0.0; CHANNELS];
    for (k, p) in pressure.iter_mut().enumerate() {
        let v = values[8 + k] / opts.pressure_full_scale;
        if !(0.0..=1.0).contains(&v) {
            return Err(GaitError::OutOfRangeValue {
                line,
                column: COLUMNS[8 + k],
                value: v,
            });
        }
        *p = v;
    }

    Ok((
        side,
        SensorFrame {
            t_ms: values[0],
            accel: [values[2], values[3], values[4]],
            gyro: [values[5], values[6], values[7]],
            pressure,
        },
    ))
}

pub fn parse_log(bytes: &[u8]) -> Result<GaitSession> {
    parse_log_with(bytes, &IngestOptions::default())
}

pub fn parse_log_with(bytes: &[u8], opts: &IngestOptions) -> Result<GaitSession> {
    let text = std::str::from_utf8(bytes).map_err(|e| GaitError::MalformedRow {
        line: 0,
        reason: format!("input is not UTF-8: {e}"),
    })?;

    let mut header_seen = false;
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (i, raw) in text.split('\n').enumerate() {
        let line = i + 1;
        let row = raw.strip_suffix('\r').unwrap_or(raw);
        if row.is_empty() {
            continue;
        }
        if !header_seen {
            if row != CSV_HEADER {
                return Err(GaitError::MalformedRow {
                    line,
                    reason: "missing or unexpected header".into(),
                });
            }
            header_seen = true;
            continue;
        }
        let (side, frame) = parse_row(row, line, opts)?;
        match side {
            Side::Left => left.push(frame),
            Side::Right => right.push(frame),
        }
    }
    if !header_seen {
        return Err(GaitError::MalformedRow {
            line: 1,
            reason: "missing header".into(),
        });
    }
    session_from_frames(left, right)
}

/// Sorts each foot's frames by time and rejects duplicate timestamps.
pub fn session_from_frames(
    mut left: Vec<SensorFrame>,
    mut right: Vec<SensorFrame>,
) -> Result<GaitSession> {
    for (side, frames) in [(Side::Left, &mut left), (Side::Right, &mut right)] {
        frames.sort_by(|a, b| a.t_ms.total_cmp(&b.t_ms));
        if let Some(i) = frames.windows(2).position(|w| w[1].t_ms <= w[0].t_ms) {
            return Err(GaitError::NonMonotoneTime {
                side,
                index: i + 1,
                t_ms: frames[i + 1].t_ms,
            });
        }
    }
    Ok(GaitSession::new(
        FootStream::from_frames(Side::Left, left),
        FootStream::from_frames(Side::Right, right),
    ))
}

/// Formats a float with at most six fractional digits and no trailing zeros.
pub fn fmt_float(v: f64) -> String {
    let mut s = format!("{v:.6}");
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

pub fn format_row(side: Side, f: &SensorFrame) -> String {
    let mut s = String::with_capacity(128);
    s.push_str(&fmt_float(f.t_ms));
    s.push(',');
    s.push_str(side.code());
    for v in f.accel.iter().chain(&f.gyro).chain(&f.pressure) {
        s.push(',');
        s.push_str(&fmt_float(*v));
    }
    s
}

/// Serializes a session as a CSV log, both feet merged in time order (left
/// first on equal timestamps).
pub fn serialize_log(session: &GaitSession) -> String {
    let (l, r) = (&session.left.frames, &session.right.frames);
    let mut out = String::with_capacity(96 * (l.len() + r.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    let (mut i, mut j) = (0, 0);
    while i < l.len() || j < r.len() {
        let take_left = j >= r.len() || (i < l.len() && l[i].t_ms <= r[j].t_ms);
        if take_left {
            let _ = writeln!(out, "{}", format_row(Side::Left, &l[i]));
            i += 1;
        } else {
            let _ = writeln!(out, "{}", format_row(Side::Right, &r[j]));
            j += 1;
        }
    }
    out
}

/// Checks every data-model invariant. An empty list means the session is
/// fully valid; advisory findings (gaps, missing overlap) are also listed.
pub fn validate_session(session: &GaitSession) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for stream in [&session.left, &session.right] {
        validate_stream(stream, &mut out);
    }
    if !session.left.is_empty() && !session.right.is_empty() && !session.has_bilateral_overlap() {
        out.push(Diagnostic::new(
            DiagnosticKind::NoBilateralOverlap,
            format!(
                "feet overlap for {:.0} ms, need {:.0} ms",
                session.bilateral_overlap_ms(),
                MIN_BILATERAL_OVERLAP_MS
            ),
        ));
    }
    out
}

fn validate_stream(stream: &FootStream, out: &mut Vec<Diagnostic>) {
    let side = stream.side;
    if stream.is_empty() {
        out.push(Diagnostic::new(DiagnosticKind::EmptyStream, "no frames").on(side));
        return;
    }
    for (i, f) in stream.frames.iter().enumerate() {
        if !f.is_finite() {
            out.push(Diagnostic::new(DiagnosticKind::NonFinite, "NaN or infinite value").on(side).at(i));
        }
        if let Some(k) = f.pressure.iter().position(|p| !(0.0..=1.0).contains(p)) {
            out.push(
                Diagnostic::new(
                    DiagnosticKind::OutOfRangeValue,
                    format!("p{} = {} outside [0, 1]", k + 1, f.pressure[k]),
                )
                .on(side)
                .at(i),
            );
        }
    }
    for (i, w) in stream.frames.windows(2).enumerate() {
        if !(w[1].t_ms > w[0].t_ms) {
            out.push(
                Diagnostic::new(
                    DiagnosticKind::NonMonotoneTime,
                    format!("t={} does not follow t={}", w[1].t_ms, w[0].t_ms),
                )
                .on(side)
                .at(i + 1),
            );
        }
    }
    let nominal_ms = 1000.0 / stream.sample_rate_hz;
    if let Some(median) = median_interval_ms(&stream.frames) {
        if !(stream.sample_rate_hz > 0.0) || (median - nominal_ms).abs() > 0.2 * nominal_ms {
            out.push(
                Diagnostic::new(
                    DiagnosticKind::RateMismatch,
                    format!(
                        "median interval {median:.3} ms vs {nominal_ms:.3} ms at {} Hz",
                        stream.sample_rate_hz
                    ),
                )
                .on(side),
            );
        }
        for (i, w) in stream.frames.windows(2).enumerate() {
            let dt = w[1].t_ms - w[0].t_ms;
            if dt > 3.0 * nominal_ms {
                out.push(
                    Diagnostic::new(
                        DiagnosticKind::SampleGap,
                        format!("{dt:.1} ms gap ({:.1} nominal intervals)", dt / nominal_ms),
                    )
                    .on(side)
                    .at(i + 1),
                );
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(t: f64, foot: &str, p1: f64) -> String {
        format!("{t},{foot},0,0,1,0,0,0,{p1},0.1,0.1,0.1,0.1,0.1,0.1,0.1")
    }

    fn frame(t: f64) -> SensorFrame {
        SensorFrame {
            t_ms: t,
            accel: [0.0, 0.0, 1.0],
            gyro: [0.0; 3],
            pressure: [0.1; CHANNELS],
        }
    }

    fn stream(side: Side, t0: f64, n: usize) -> FootStream {
        let frames = (0..n).map(|i| frame(t0 + i as f64 * 1000.0 / 66.0)).collect();
        FootStream::from_frames(side, frames)
    }

    #[test]
    fn minimal_log_has_one_frame_per_foot() {
        let text = format!("{CSV_HEADER}\n{}\n{}\n", row(0.0, "L", 0.2), row(0.0, "R", 0.3));
        let s = parse_log(text.as_bytes()).unwrap();
        assert_eq!(s.left.len(), 1);
        assert_eq!(s.right.len(), 1);
        assert_eq!(s.left.frames[0].channel(1), 0.2);
        assert_eq!(s.right.frames[0].channel(1), 0.3);
    }

    #[test]
    fn pressure_above_full_scale_is_rejected() {
        let text = format!("{CSV_HEADER}\n{}\n", row(0.0, "L", 1.3));
        match parse_log(text.as_bytes()) {
            Err(GaitError::OutOfRangeValue { line, column, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(column, "p1");
            }
            other => panic!("expected OutOfRangeValue, got {other:?}"),
        }
    }

    #[test]
    fn full_scale_normalizes_raw_counts() {
        let text = format!("{CSV_HEADER}\n{}\n", row(0.0, "L", 2048.0).replace(",0.1", ",512"));
        let opts = IngestOptions {
            pressure_full_scale: 4096.0,
        };
        let s = parse_log_with(text.as_bytes(), &opts).unwrap();
        assert_eq!(s.left.frames[0].pressure[0], 0.5);
        assert_eq!(s.left.frames[0].pressure[7], 0.125);
    }

    #[test]
    fn malformed_rows_report_line_numbers() {
        let text = format!("{CSV_HEADER}\n{}\n0,L,1,2\n", row(0.0, "L", 0.2));
        let err = parse_log(text.as_bytes()).unwrap_err();
        assert!(err.to_string().starts_with("MalformedRow line 3"), "{err}");

        let text = format!("{CSV_HEADER}\n{}\n", row(0.0, "X", 0.2));
        assert!(matches!(
            parse_log(text.as_bytes()),
            Err(GaitError::MalformedRow { line: 2, .. })
        ));

        let text = format!("{CSV_HEADER}\n{}\n", row(0.0, "L", 0.2).replace("0,0,1", "0,nan,1"));
        assert!(matches!(
            parse_log(text.as_bytes()),
            Err(GaitError::MalformedRow { line: 2, .. })
        ));

        assert!(matches!(
            parse_log(b"t,foot\n"),
            Err(GaitError::MalformedRow { line: 1, .. })
        ));
    }

    #[test]
    fn duplicate_timestamp_is_non_monotone() {
        let text = format!(
            "{CSV_HEADER}\n{}\n{}\n{}\n",
            row(0.0, "L", 0.2),
            row(15.0, "L", 0.2),
            row(15.0, "L", 0.2)
        );
        assert!(matches!(
            parse_log(text.as_bytes()),
            Err(GaitError::NonMonotoneTime {
                side: Side::Left,
                index: 2,
                ..
            })
        ));
    }

    #[test]
    fn rows_are_sorted_per_foot() {
        let text = format!(
            "{CSV_HEADER}\n{}\n{}\n{}\n",
            row(30.0, "L", 0.3),
            row(0.0, "L", 0.1),
            row(15.0, "L", 0.2)
        );
        let s = parse_log(text.as_bytes()).unwrap();
        let ts: Vec<f64> = s.left.times_ms();
        assert_eq!(ts, vec![0.0, 15.0, 30.0]);
        assert!((s.left.sample_rate_hz - 1000.0 / 15.0).abs() < 1e-9);
    }

    #[test]
    fn well_formed_session_validates_clean() {
        let s = GaitSession::new(stream(Side::Left, 0.0, 200), stream(Side::Right, 5.0, 200));
        assert!(validate_session(&s).is_empty());
    }

    #[test]
    fn duplicated_timestamp_is_diagnosed() {
        let mut l = stream(Side::Left, 0.0, 200);
        l.frames[10].t_ms = l.frames[9].t_ms;
        let s = GaitSession::new(l, stream(Side::Right, 0.0, 200));
        let d = validate_session(&s);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, DiagnosticKind::NonMonotoneTime);
        assert_eq!(d[0].index, Some(10));
    }

    #[test]
    fn disjoint_feet_have_no_bilateral_overlap() {
        // left covers ~0..3 s, right starts 2 s after the left ends
        let l = stream(Side::Left, 0.0, 200);
        let r = stream(Side::Right, l.frames.last().unwrap().t_ms + 2000.0, 200);
        let d = validate_session(&GaitSession::new(l, r));
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, DiagnosticKind::NoBilateralOverlap);
    }

    #[test]
    fn gaps_are_advisory() {
        let mut l = stream(Side::Left, 0.0, 200);
        for f in &mut l.frames[100..] {
            f.t_ms += 100.0;
        }
        let s = GaitSession::new(l, stream(Side::Right, 0.0, 220));
        let d = validate_session(&s);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, DiagnosticKind::SampleGap);
        assert!(!d[0].kind.is_invariant_violation());
    }

    #[test]
    fn float_formatting_trims() {
        assert_eq!(fmt_float(1.0), "1");
        assert_eq!(fmt_float(15.151515151), "15.151515");
        assert_eq!(fmt_float(-0.0000001), "0");
        assert_eq!(fmt_float(0.5), "0.5");
        assert_eq!(fmt_float(-2.25), "-2.25");
    }
}
