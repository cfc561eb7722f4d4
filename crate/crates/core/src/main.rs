use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use kitecc::cli::{run, ErrorRecord, RunConfig};
use kitecc::KiteError;

fn fail(e: &KiteError) -> ExitCode {
    let record = serde_json::to_string(&ErrorRecord::from(e)).expect("error record serializes");
    eprintln!("{record}");
    ExitCode::from(if matches!(e, KiteError::InvalidArguments(_)) {
        2
    } else {
        1
    })
}

fn thread_pool() -> Result<(), KiteError> {
    let Ok(v) = std::env::var("KITECC_THREADS") else {
        return Ok(());
    };
    let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        KiteError::InvalidArguments(format!(
            "KITECC_THREADS must be a positive integer, got '{v}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| KiteError::InvalidArguments(e.to_string()))
}

fn main() -> ExitCode {
    let cfg = match RunConfig::try_parse() {
        Ok(cfg) => cfg,
        Err(e) if !e.use_stderr() => {
            // help and version text; a closed pipe is not an error
            let _ = write!(std::io::stdout().lock(), "{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            return fail(&KiteError::InvalidArguments(
                e.kind().to_string() + ": " + &e.to_string(),
            ))
        }
    };
    if let Err(e) = thread_pool() {
        return fail(&e);
    }
    let out = match run(&cfg) {
        Ok(out) => out,
        Err(e) => return fail(&e),
    };
    let written = match &cfg.output_path {
        Some(path) => std::fs::write(path, &out),
        None => std::io::stdout().lock().write_all(&out),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => fail(&e.into()),
    }
}
