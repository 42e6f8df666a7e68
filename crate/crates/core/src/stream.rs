//! TCP ingest. Each connection streams CSV rows (the log format, header
//! optional); `#flush` or end of stream analyzes what has been buffered and
//! writes a report into the output directory. Connections are independent
//! sessions served on their own threads.

use std::io::{BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;

use log::{debug, info, warn};

use crate::config::AnalysisConfig;
use crate::diag::{Diagnostic, DiagnosticKind};
use crate::error::{GaitError, Result};
use crate::model::{parse_row, session_from_frames, IngestOptions, SensorFrame, Side, CSV_HEADER};
use crate::pipeline::analyze;
use crate::report::GaitReport;

/// Frames buffered per session before further rows are dropped.
pub const MAX_FRAMES: usize = 1_000_000;

pub const FLUSH_MARKER: &str = "#flush";

/// Frames and protocol diagnostics accumulated by one connection since the
/// last flush.
#[derive(Debug, Default)]
pub struct SessionBuffer {
    left: Vec<SensorFrame>,
    right: Vec<SensorFrame>,
    diagnostics: Vec<Diagnostic>,
    dropped: usize,
    capacity: usize,
}

/// What a line did to the buffer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineOutcome {
    Buffered,
    Ignored,
    Rejected,
    Dropped,
    Flush,
}

impl SessionBuffer {
    pub fn new() -> Self {
        Self::with_capacity(MAX_FRAMES)
    }

    pub fn with_capacity(capacity: usize) -> Self {
        SessionBuffer {
            capacity,
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }

    /// `line` is the 1-based line number within the connection.
    pub fn push_line(&mut self, raw: &str, line: usize, opts: &IngestOptions) -> LineOutcome {
        let row = raw.strip_suffix('\r').unwrap_or(raw);
        if row.is_empty() || row == CSV_HEADER {
            return LineOutcome::Ignored;
        }
        if row.trim() == FLUSH_MARKER {
            return LineOutcome::Flush;
        }
        match parse_row(row, line, opts) {
            Ok(_) if self.len() >= self.capacity => {
                if self.dropped == 0 {
                    self.diagnostics.push(
                        Diagnostic::new(DiagnosticKind::BufferOverflow, format!("buffer full at {} frames", self.capacity))
                            .at(line),
                    );
                }
                self.dropped += 1;
                LineOutcome::Dropped
            }
            Ok((side, frame)) => {
                match side {
                    Side::Left => self.left.push(frame),
                    Side::Right => self.right.push(frame),
                }
                LineOutcome::Buffered
            }
            Err(e) => {
                self.diagnostics
                    .push(Diagnostic::new(DiagnosticKind::ProtocolError, e.to_string()).at(line));
                LineOutcome::Rejected
            }
        }
    }

    /// Analyzes the buffered frames and resets the buffer. Protocol
    /// diagnostics are appended to the report's own.
    pub fn flush(&mut self, cfg: &AnalysisConfig) -> Result<GaitReport> {
        let mut taken = std::mem::replace(self, Self::with_capacity(self.capacity));
        if taken.dropped > 0 {
            taken.diagnostics.push(Diagnostic::new(
                DiagnosticKind::BufferOverflow,
                format!("{} frame(s) dropped", taken.dropped),
            ));
        }
        let session = session_from_frames(taken.left, taken.right)?;
        let analysis = analyze(&session, cfg)?;
        let mut report = GaitReport::new(&session, &analysis);
        report.diagnostics.extend(taken.diagnostics);
        Ok(report)
    }
}

/// Asks a running server to stop accepting connections.
#[derive(Debug, Clone)]
pub struct ShutdownHandle {
    stop: Arc<AtomicBool>,
    addr: SocketAddr,
}

impl ShutdownHandle {
    /// Address the server is listening on.
    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn shutdown(&self) {
        self.stop.store(true, Ordering::SeqCst);
        // Wake the blocking accept.
        let _ = TcpStream::connect(self.addr);
    }
}

pub struct StreamServer {
    listener: TcpListener,
    output_dir: PathBuf,
    config: AnalysisConfig,
    stop: Arc<AtomicBool>,
}

impl StreamServer {
    pub fn bind(addr: impl ToSocketAddrs + std::fmt::Display, output_dir: impl Into<PathBuf>, config: AnalysisConfig) -> Result<Self> {
        config.validate()?;
        let shown = addr.to_string();
        let listener = TcpListener::bind(addr).map_err(|source| GaitError::BindFailure { addr: shown, source })?;
        let output_dir = output_dir.into();
        std::fs::create_dir_all(&output_dir)?;
        Ok(StreamServer {
            listener,
            output_dir,
            config,
            stop: Arc::new(AtomicBool::new(false)),
        })
    }

    pub fn local_addr(&self) -> Result<SocketAddr> {
        Ok(self.listener.local_addr()?)
    }

    pub fn shutdown_handle(&self) -> Result<ShutdownHandle> {
        Ok(ShutdownHandle {
            stop: Arc::clone(&self.stop),
            addr: self.local_addr()?,
        })
    }

    /// Serves until shut down, one thread per connection. Waits for open
    /// connections to finish before returning.
    pub fn run(self) -> Result<()> {
        let counter = Arc::new(AtomicUsize::new(0));
        let config = Arc::new(self.config);
        let dir = Arc::new(self.output_dir);
        let mut workers: Vec<JoinHandle<()>> = Vec::new();
        info!("listening on {}", self.listener.local_addr()?);
        for conn in self.listener.incoming() {
            if self.stop.load(Ordering::SeqCst) {
                break;
            }
            let stream = match conn {
                Ok(s) => s,
                Err(e) => {
                    warn!("accept failed: {e}");
                    continue;
                }
            };
            let id = counter.fetch_add(1, Ordering::SeqCst);
            let (config, dir) = (Arc::clone(&config), Arc::clone(&dir));
            workers.push(std::thread::spawn(move || {
                if let Err(e) = serve_connection(stream, id, &config, &dir) {
                    warn!("connection {id}: {e}");
                }
            }));
            workers.retain(|w| !w.is_finished());
        }
        for w in workers {
            let _ = w.join();
        }
        Ok(())
    }

    /// Runs the server on a background thread.
    pub fn spawn(self) -> Result<(ShutdownHandle, JoinHandle<Result<()>>)> {
        let handle = self.shutdown_handle()?;
        Ok((handle, std::thread::spawn(move || self.run())))
    }
}

/// Report file name for the `seq`-th flush of connection `id`.
pub fn report_name(id: usize, seq: usize) -> String {
    format!("session-{id:04}-{seq:03}.toml")
}

/// Reads rows until end of stream, writing a report per flush. Each flush is
/// acknowledged with one line: `OK <path>` or `ERR <message>`.
fn serve_connection(stream: TcpStream, id: usize, cfg: &AnalysisConfig, dir: &Path) -> Result<()> {
    let peer = stream.peer_addr().map(|a| a.to_string()).unwrap_or_default();
    debug!("connection {id} from {peer}");
    let mut reply = stream.try_clone()?;
    let reader = BufReader::new(stream);
    let opts = cfg.ingest_options();
    let mut buffer = SessionBuffer::new();
    let mut seq = 0;
    let mut flush = |buffer: &mut SessionBuffer, reply: &mut TcpStream| -> Result<()> {
        if buffer.is_empty() && buffer.diagnostics().is_empty() {
            return Ok(());
        }
        let msg = match buffer.flush(cfg).and_then(|r| write_report(&r, &dir.join(report_name(id, seq)))) {
            Ok(path) => format!("OK {}", path.display()),
            Err(e) => format!("ERR {e}"),
        };
        seq += 1;
        info!("connection {id}: {msg}");
        // The client may already be gone at end of stream.
        let _ = writeln!(reply, "{msg}");
        Ok(())
    };
    for (i, line) in reader.lines().enumerate() {
        let line = match line {
            Ok(l) => l,
            Err(e) => {
                warn!("connection {id}: read failed: {e}");
                break;
            }
        };
        if buffer.push_line(&line, i + 1, &opts) == LineOutcome::Flush {
            flush(&mut buffer, &mut reply)?;
        }
    }
    flush(&mut buffer, &mut reply)
}

fn write_report(report: &GaitReport, path: &Path) -> Result<PathBuf> {
    std::fs::write(path, report.to_toml()?)?;
    Ok(path.to_path_buf())
}
