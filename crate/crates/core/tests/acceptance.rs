//! Acceptance criteria 1-8. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::io::{BufRead, BufReader, Write};
use std::net::TcpStream;
use std::time::{Duration, Instant};

use gaitfuse::config::AnalysisConfig;
use gaitfuse::events::EventKind;
use gaitfuse::filter::{design_lowpass, pressure_sum_filter, GaussKernel};
use gaitfuse::model::{parse_log, serialize_log, GaitSession, Side};
use gaitfuse::spatial::{estimate_orientation, zvu_integrate, STANDARD_GRAVITY};
use gaitfuse::stats::{mean, pearson};
use gaitfuse::stream::StreamServer;
use gaitfuse::synth::{generate, EventScore, GaitProfile};
use gaitfuse::temporal::stance_swing;
use gaitfuse::{analyze, Analysis, GaitReport};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn run(cfg: &AnalysisConfig, s: &GaitSession) -> Analysis {
    analyze(s, cfg).expect("analysis")
}

/// Events within +-2 samples.
const EVENT_TOL: usize = 2;

fn event_recall(noisy: bool) -> (EventScore, EventScore) {
    let cfg = AnalysisConfig::default();
    let names = ["normal", "stroke-left", "stroke-right"];
    let (mut hs, mut to) = (EventScore::default(), EventScore::default());
    for k in 0..20u64 {
        let mut p = GaitProfile::named(names[k as usize % 3]).unwrap().with_seed(100 + k);
        if !noisy {
            p = p.noiseless();
        }
        let (s, truth) = generate(&p, 60.0).unwrap();
        let a = run(&cfg, &s);
        for side in [Side::Left, Side::Right] {
            let d = &a.foot(side).events;
            hs = hs.merge(EventScore::compare(d, truth.events(side), EventKind::HeelStrike, EVENT_TOL));
            to = to.merge(EventScore::compare(d, truth.events(side), EventKind::ToeOff, EVENT_TOL));
        }
    }
    (hs, to)
}

fn criterion_1() -> Outcome {
    let t0 = Instant::now();
    let (hs, to) = event_recall(false);
    let clean_time = t0.elapsed();
    let (nhs, nto) = event_recall(true);
    let pass = hs.recall() >= 0.95
        && to.recall() >= 0.95
        && nhs.recall() >= 0.90
        && nto.recall() >= 0.90
        && clean_time < Duration::from_secs(5);
    outcome(
        pass,
        format!(
            "zero noise HS {:.3} TO {:.3} (>= 0.95); default noise HS {:.3} TO {:.3} (>= 0.90); 20 sessions in {:.2} s (< 5 s)",
            hs.recall(),
            to.recall(),
            nhs.recall(),
            nto.recall(),
            clean_time.as_secs_f64()
        ),
    )
}

fn criterion_2() -> Outcome {
    let cfg = AnalysisConfig::default();
    let period_s = 1.0 / 66.0;
    let mut cycles = 0;
    let mut worst_sum = 0.0f64;
    let mut worst_stride = 0.0f64;
    for (k, name) in ["normal", "stroke-left", "stroke-right"].iter().enumerate() {
        let (s, _) = generate(&GaitProfile::named(name).unwrap().with_seed(7 + k as u64), 60.0).unwrap();
        let a = run(&cfg, &s);
        for c in a.left.cycles.iter().chain(&a.right.cycles) {
            let (st, sw) = stance_swing(c);
            worst_sum = worst_sum.max((st + sw - 100.0).abs());
            cycles += 1;
        }
        let t = &a.temporal;
        let strt = t.stride_time.unwrap().mean;
        let steps = t.step_time_left.unwrap().mean + t.step_time_right.unwrap().mean;
        worst_stride = worst_stride.max((strt - steps).abs());
    }
    outcome(
        cycles > 0 && worst_sum == 0.0 && worst_stride <= period_s,
        format!(
            "{cycles} cycles, max |STP+SWP-100| = {worst_sum:e}; max |STRT-(STT_L+STT_R)| = {:.2} ms (<= {:.2} ms)",
            worst_stride * 1000.0,
            period_s * 1000.0
        ),
    )
}

fn criterion_3() -> Outcome {
    let cfg = AnalysisConfig::default();
    let mut worst_rel = 0.0f64;
    let mut strides = 0;
    for name in ["normal", "stroke-left"] {
        let p = GaitProfile::named(name).unwrap().noiseless();
        let (s, _) = generate(&p, 30.0).unwrap();
        let a = run(&cfg, &s);
        for t in a.left.trajectories.iter().chain(&a.right.trajectories) {
            worst_rel = worst_rel.max((t.stride_length_cm - p.stride_length_cm).abs() / p.stride_length_cm);
            strides += 1;
        }
    }

    // Constant forward accel bias; closed-form drift of plain double
    // integration over a stride of duration T is b*T^2/2.
    let bias_g = 0.02;
    let mut p = GaitProfile::normal().noiseless();
    p.accel_bias_g = [0.0, bias_g, 0.0];
    let (s, _) = generate(&p, 30.0).unwrap();
    let a = run(&cfg, &s);
    let mut worst_ratio = 0.0f64;
    let mut biased = 0;
    for t in a.left.trajectories.iter().chain(&a.right.trajectories) {
        let dt = (t.end_ms - t.start_ms) / 1000.0;
        let uncorrected_cm = 0.5 * bias_g * STANDARD_GRAVITY * dt * dt * 100.0;
        worst_ratio = worst_ratio.max((t.stride_length_cm - p.stride_length_cm).abs() / uncorrected_cm);
        biased += 1;
    }
    outcome(
        strides > 0 && biased > 0 && worst_rel <= 0.02 && worst_ratio <= 0.1,
        format!(
            "{strides} zero-noise strides, worst error {:.3}% (<= 2%); {biased} strides with 0.02 g bias, worst ZVU/uncorrected error ratio {worst_ratio:.4} (<= 0.1)",
            worst_rel * 100.0
        ),
    )
}

/// Clinical means and sds of the eleven parameter rows.
const TABLE: [(&str, f64, f64); 11] = [
    ("stance % L", 78.741, 9.047),
    ("swing % L", 21.259, 9.047),
    ("stance % R", 82.819, 8.117),
    ("swing % R", 17.181, 8.117),
    ("double stance %", 61.607, 8.640),
    ("step time L s", 1.157, 0.458),
    ("step time R s", 1.034, 0.355),
    ("stride time s", 2.176, 0.762),
    ("cadence steps/min", 62.150, 19.834),
    ("stride length cm", 48.544, 14.946),
    ("velocity km/h", 0.910, 0.48),
];

fn parameter_vector(t: &gaitfuse::temporal::TemporalReport, s: &gaitfuse::spatial::SpatialReport) -> Option<[f64; 11]> {
    Some([
        t.stance_left?.mean,
        t.swing_left?.mean,
        t.stance_right?.mean,
        t.swing_right?.mean,
        t.double_stance?.mean,
        t.step_time_left?.mean,
        t.step_time_right?.mean,
        t.stride_time?.mean,
        t.cadence?,
        s.stride_length?.mean,
        s.velocity?,
    ])
}

fn criterion_4() -> Outcome {
    let cfg = AnalysisConfig::default();
    let cohort = GaitProfile::stroke_cohort(27, 2018);
    let mut got: Vec<[f64; 11]> = Vec::new();
    let mut want: Vec<[f64; 11]> = Vec::new();
    let mut missing = 0;
    for p in &cohort {
        let (s, truth) = generate(p, 60.0).unwrap();
        let a = run(&cfg, &s);
        match (parameter_vector(&a.temporal, &a.spatial), parameter_vector(&truth.temporal, &truth.spatial)) {
            (Some(g), Some(w)) => {
                got.push(g);
                want.push(w);
            }
            _ => missing += 1,
        }
    }
    let col = |rows: &[[f64; 11]], j: usize| -> Vec<f64> { rows.iter().map(|r| r[j]).collect() };
    let got_means: Vec<f64> = (0..11).map(|j| mean(&col(&got, j)).unwrap_or(f64::NAN)).collect();
    let want_means: Vec<f64> = (0..11).map(|j| mean(&col(&want, j)).unwrap_or(f64::NAN)).collect();
    let flat_got: Vec<f64> = got.iter().flatten().copied().collect();
    let flat_want: Vec<f64> = want.iter().flatten().copied().collect();
    let pcc_means = pearson(&got_means, &want_means).unwrap_or(f64::NAN);
    let pcc_all = pearson(&flat_got, &flat_want).unwrap_or(f64::NAN);
    let mut outside = Vec::new();
    for (j, (name, m, sd)) in TABLE.iter().enumerate() {
        if (got_means[j] - m).abs() > *sd {
            outside.push(format!("{name} {:.3} not in {m}+-{sd}", got_means[j]));
        }
    }
    let worst_param = (0..11)
        .map(|j| (TABLE[j].0, pearson(&col(&got, j), &col(&want, j)).unwrap_or(f64::NAN)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    outcome(
        missing == 0 && pcc_means >= 0.99 && pcc_all >= 0.99 && outside.is_empty(),
        format!(
            "27 subjects ({missing} without parameters); PCC of parameter means {pcc_means:.6}, of all subject values {pcc_all:.6} (>= 0.99); lowest per-parameter PCC across subjects {} {:.3}; {}",
            worst_param.0,
            worst_param.1,
            if outside.is_empty() { "all means inside the clinical bands".to_string() } else { outside.join(", ") }
        ),
    )
}

fn tone_gain(filter: &gaitfuse::filter::FirFilter, hz: f64) -> f64 {
    let n = 660;
    let x: Vec<f64> = (0..n).map(|i| (2.0 * std::f64::consts::PI * hz * i as f64 / 66.0).sin()).collect();
    let y = filter.apply(&x);
    let rms = |v: &[f64]| (v.iter().map(|a| a * a).sum::<f64>() / v.len() as f64).sqrt();
    rms(&y[100..n - 100]) / rms(&x[100..n - 100])
}

fn criterion_5() -> Outcome {
    let lpf = design_lowpass(20.0, 66.0, 21).unwrap();
    let psum = pressure_sum_filter(23).unwrap();
    let gauss = GaussKernel::new(5.0, 7).unwrap();
    let dc = [
        lpf.coefficients().iter().sum::<f64>(),
        psum.coefficients().iter().sum::<f64>(),
        gauss.taps.iter().sum::<f64>(),
    ];
    let worst_dc = dc.iter().map(|g| (g - 1.0).abs()).fold(0.0, f64::max);
    let sep_db = 20.0 * (tone_gain(&lpf, 1.0) / tone_gain(&lpf, 30.0)).log10();
    let raw: Vec<f64> = (-3..=3).map(|k: i32| (-(k * k) as f64 / 50.0).exp()).collect();
    let total: f64 = raw.iter().sum();
    let worst_gauss = raw
        .iter()
        .zip(&gauss.taps)
        .map(|(r, g)| (r / total - g).abs())
        .fold(0.0, f64::max);
    outcome(
        worst_dc <= 1e-9 && sep_db >= 20.0 && worst_gauss <= 1e-12,
        format!("max |DC gain - 1| = {worst_dc:e}; 1 Hz vs 30 Hz separation {sep_db:.1} dB (>= 20); Gaussian max deviation {worst_gauss:e}"),
    )
}

fn rotate_z(v: [f64; 3], deg: f64) -> [f64; 3] {
    let (s, c) = deg.to_radians().sin_cos();
    [c * v[0] - s * v[1], s * v[0] + c * v[1], v[2]]
}

fn criterion_6() -> Outcome {
    let cfg = AnalysisConfig::default();
    let (s, _) = generate(&GaitProfile::normal().with_seed(5), 30.0).unwrap();
    let base = run(&cfg, &s);
    let indices = |a: &Analysis| -> Vec<(EventKind, usize)> {
        a.left.events.iter().chain(&a.right.events).map(|e| (e.kind, e.idx)).collect()
    };

    let mut scale_ok = true;
    for c in [0.25, 0.5, 0.8] {
        let mut scaled = s.clone();
        for f in scaled.left.frames.iter_mut().chain(scaled.right.frames.iter_mut()) {
            f.pressure.iter_mut().for_each(|p| *p *= c);
        }
        scale_ok &= indices(&run(&cfg, &scaled)) == indices(&base);
    }

    let mut shifted = s.clone();
    for f in shifted.left.frames.iter_mut().chain(shifted.right.frames.iter_mut()) {
        f.t_ms += 3_600_000.0;
    }
    let moved = run(&cfg, &shifted);
    let a = parameter_vector(&base.temporal, &base.spatial).unwrap();
    let b = parameter_vector(&moved.temporal, &moved.spatial).unwrap();
    let worst_shift = a.iter().zip(&b).map(|(x, y)| ((x - y) / x).abs()).fold(0.0, f64::max);

    // Walking direction: the whole pipeline on walks with different headings,
    // then the spatial stage on sensor axes rotated about the vertical.
    let mut worst_heading = 0.0f64;
    let base_len = base.spatial.stride_length.unwrap().mean;
    for heading in [30.0, 90.0, 200.0] {
        let mut p = GaitProfile::normal().with_seed(5);
        p.heading_deg = heading;
        let (hs, _) = generate(&p, 30.0).unwrap();
        let l = run(&cfg, &hs).spatial.stride_length.unwrap().mean;
        worst_heading = worst_heading.max(((l - base_len) / base_len).abs());
    }
    let (clean, ctruth) = generate(&GaitProfile::normal().noiseless(), 30.0).unwrap();
    let foot = &clean.left;
    let times = foot.times_ms();
    let lengths = |deg: f64| -> Vec<f64> {
        let acc: Vec<[f64; 3]> = foot.frames.iter().map(|f| rotate_z(f.accel, deg)).collect();
        let gyr: Vec<[f64; 3]> = foot.frames.iter().map(|f| rotate_z(f.gyro, deg)).collect();
        let zvs = ctruth.zero_velocity(Side::Left);
        let q = estimate_orientation(&gyr, &acc, &times, zvs).unwrap();
        zvu_integrate(&acc, &q, &times, zvs, STANDARD_GRAVITY)
            .unwrap()
            .iter()
            .map(|t| t.stride_length_cm)
            .collect()
    };
    let l0 = lengths(0.0);
    for deg in [45.0, 90.0, 160.0] {
        for (x, y) in l0.iter().zip(lengths(deg)) {
            worst_heading = worst_heading.max(((x - y) / x).abs());
        }
    }
    outcome(
        scale_ok && worst_shift <= 1e-9 && worst_heading <= 1e-6,
        format!(
            "pressure scaling keeps event indices: {scale_ok}; time shift max relative change {worst_shift:e}; heading max relative stride-length change {worst_heading:e} (<= 1e-6)"
        ),
    )
}

fn criterion_7() -> Outcome {
    let cfg = AnalysisConfig::default();
    let (s, _) = generate(&GaitProfile::stroke(Side::Left).with_seed(11), 40.0).unwrap();
    let log = serialize_log(&s);
    let file_report = || {
        let parsed = parse_log(log.as_bytes()).unwrap();
        GaitReport::new(&parsed, &run(&cfg, &parsed)).to_toml().unwrap()
    };
    let (first, second) = (file_report(), file_report());

    let dir = tempfile::tempdir().unwrap();
    let server = StreamServer::bind("127.0.0.1:0", dir.path(), cfg.clone()).unwrap();
    let addr = server.local_addr().unwrap();
    let (handle, join) = server.spawn().unwrap();
    let mut conn = TcpStream::connect(addr).unwrap();
    conn.write_all(log.as_bytes()).unwrap();
    conn.write_all(b"#flush\n").unwrap();
    let mut reply = String::new();
    BufReader::new(conn.try_clone().unwrap()).read_line(&mut reply).unwrap();
    drop(conn);
    handle.shutdown();
    join.join().unwrap().unwrap();
    let streamed = reply
        .strip_prefix("OK ")
        .map(|p| std::fs::read_to_string(p.trim()).unwrap())
        .unwrap_or_default();
    outcome(
        first == second && streamed == first,
        format!(
            "repeat analysis bit-identical: {}; stream report bit-identical to file report: {} ({} bytes)",
            first == second,
            streamed == first,
            first.len()
        ),
    )
}

fn criterion_8() -> Outcome {
    let cfg = AnalysisConfig::default();
    let (s, _) = generate(&GaitProfile::normal().with_seed(3), 600.0).unwrap();
    let log = serialize_log(&s);
    let t0 = Instant::now();
    let parsed = parse_log(log.as_bytes()).unwrap();
    let a = run(&cfg, &parsed);
    let text = GaitReport::new(&parsed, &a).to_toml().unwrap();
    let dt = t0.elapsed();
    outcome(
        dt < Duration::from_secs(1),
        format!(
            "600 s, {} frames parsed, analyzed and reported in {:.3} s (< 1 s); {} report bytes",
            parsed.left.len() + parsed.right.len(),
            dt.as_secs_f64(),
            text.len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("event detection against ground truth", criterion_1),
        ("temporal identities", criterion_2),
        ("spatial accuracy and drift correction", criterion_3),
        ("stroke cohort correlation and clinical bands", criterion_4),
        ("filter contracts", criterion_5),
        ("scale, shift and heading invariances", criterion_6),
        ("determinism and stream/file equivalence", criterion_7),
        ("throughput", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {} {}: {} - {}", i + 1, name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
