//! The CSV log format: write a session, read it back, and let validation
//! point at what is wrong with a damaged copy.
//!
//! cargo run --example log_io

use gaitfuse::model::{validate_session, CSV_HEADER};
use gaitfuse::{generate, parse_log, serialize_log, GaitProfile};

fn main() -> gaitfuse::Result<()> {
    let (session, _) = generate(&GaitProfile::normal(), 3.0)?;
    let text = serialize_log(&session);
    println!("header: {CSV_HEADER}");
    for line in text.lines().skip(1).take(3) {
        println!("row:    {line}");
    }

    let back = parse_log(text.as_bytes())?;
    println!(
        "read back {} + {} frames at {:.3} Hz, identical text: {}",
        back.left.len(),
        back.right.len(),
        back.left.sample_rate_hz,
        serialize_log(&back) == text
    );
    println!("diagnostics on the clean session: {}", validate_session(&back).len());

    let mut damaged = back.clone();
    damaged.left.frames[20].t_ms = damaged.left.frames[19].t_ms;
    for d in validate_session(&damaged) {
        println!("diagnostic: {d}");
    }

    let bad = format!("{CSV_HEADER}\n0,L,0,0,1,0,0,0,0.1,0.1,0.1,0.1,1.3,0.1,0.1,0.1\n");
    match parse_log(bad.as_bytes()) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
