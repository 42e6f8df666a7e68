//! Start the TCP ingest server, stream a generated log into it and compare
//! the report it writes with analyzing the same log from a file.
//!
//! cargo run --example stream_roundtrip

use std::io::{BufRead, BufReader, Write};
use std::net::{Shutdown, TcpStream};

use gaitfuse::stream::StreamServer;
use gaitfuse::{analyze, generate, parse_log, serialize_log, AnalysisConfig, GaitProfile, GaitReport};

fn main() -> gaitfuse::Result<()> {
    let dir = std::env::temp_dir().join(format!("gaitfuse-stream-{}", std::process::id()));
    let cfg = AnalysisConfig::default();
    let (stop, worker) = StreamServer::bind("127.0.0.1:0", &dir, cfg.clone())?.spawn()?;
    println!("listening on {}", stop.addr());

    let (session, _) = generate(&GaitProfile::named("stroke-left")?.with_seed(4), 20.0)?;
    let log = serialize_log(&session);
    let mut conn = TcpStream::connect(stop.addr())?;
    conn.write_all(log.as_bytes())?;
    conn.shutdown(Shutdown::Write)?;
    let mut ack = String::new();
    BufReader::new(conn).read_line(&mut ack)?;
    println!("server: {}", ack.trim());

    let parsed = parse_log(log.as_bytes())?;
    let direct = GaitReport::new(&parsed, &analyze(&parsed, &cfg)?).to_toml()?;
    if let Some(path) = ack.trim().strip_prefix("OK ") {
        let streamed = std::fs::read_to_string(path)?;
        println!("stream report identical to file report: {}", streamed == direct);
    }

    stop.shutdown();
    worker.join().expect("server thread")?;
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
