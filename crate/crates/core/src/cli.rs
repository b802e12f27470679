//! Command-line front end.
//!
//! ```text
//! qprep3 synth <file> [--real] [--prepare] [--verify] [--ry] [--out <path>]
//! qprep3 sweep --n <k> --seed <s> [--real] [--json]
//! qprep3 delta <file>
//! ```
//!
//! Exit codes: 0 success, 1 parse/normalization error (or failed sweep),
//! 2 mode violation, 3 internal invariant failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::circuit::{fidelity_to_basis, Circuit};
use crate::error::Error;
use crate::mat2::{c, C64};
use crate::state::{PureState2, PureState3, DELTA_ZERO, REAL_TOL};
use crate::sweep::{run_sweep, SweepConfig};
use crate::synth::{disentangle, prepare, Direction, Mode, StateInput};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_MODE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "qprep3", version, about = "CZ-minimal preparation circuits for 2- and 3-qubit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize a disentangling (or, with --prepare, preparation) circuit.
    Synth {
        file: PathBuf,
        /// Use real local gates only (input must be real).
        #[arg(long)]
        real: bool,
        /// Emit the |0…0⟩ → |φ⟩ circuit instead of |φ⟩ → |0…0⟩.
        #[arg(long)]
        prepare: bool,
        /// Re-simulate the emitted circuit and report CZ count and fidelity.
        #[arg(long)]
        verify: bool,
        /// Write real local gates as RY rotations.
        #[arg(long)]
        ry: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Synthesize circuits for many random states and summarize.
    Sweep {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        real: bool,
        /// Print the summary as JSON after the text report.
        #[arg(long)]
        json: bool,
    },
    /// Print the discriminant of a real 3-qubit state.
    Delta { file: PathBuf },
}

/// Parses a state file: one amplitude per line as `<re> [<im>]`, `#`
/// starting a comment, 4 or 8 amplitudes in basis order.
pub fn parse_state_file(text: &str) -> Result<StateInput, Error> {
    let mut amps = Vec::with_capacity(8);
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: idx + 1, msg };
        let nums = line
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| err(format!("bad number {t:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let z = match nums[..] {
            [re] => c(re, 0.0),
            [re, im] => c(re, im),
            _ => return Err(err("expected `<re> <im>`".into())),
        };
        if !z.is_finite() {
            return Err(err("non-finite amplitude".into()));
        }
        amps.push(z);
    }
    match amps.len() {
        8 => Ok(StateInput::Three(PureState3::new(amps.try_into().expect("8 amplitudes"))?)),
        4 => Ok(StateInput::Two(PureState2::new(amps.try_into().expect("4 amplitudes"))?)),
        n => Err(Error::Parse { line: 0, msg: format!("expected 4 or 8 amplitudes, found {n}") }),
    }
}

/// Writes a state in the state-file format (17 significant digits).
pub fn emit_state_file(s: &StateInput) -> String {
    let amps: &[C64] = match s {
        StateInput::Two(s) => s.amplitudes(),
        StateInput::Three(s) => s.amplitudes(),
    };
    let width = (amps.len() as f64).log2() as usize;
    let mut out = String::new();
    for (i, z) in amps.iter().enumerate() {
        let _ = writeln!(out, "{:.16e} {:.16e} # |{:0width$b}⟩", z.re, z.im, i);
    }
    out
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvariantViolation { .. } => EXIT_INVARIANT,
        Error::NotReal { .. } => EXIT_MODE,
        _ => EXIT_PARSE,
    }
}

fn read_state(path: &PathBuf, err: &mut dyn Write) -> Result<StateInput, i32> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
        EXIT_PARSE
    })?;
    parse_state_file(&text).map_err(|e| {
        let _ = writeln!(err, "error: {}: {e}", path.display());
        EXIT_PARSE
    })
}

/// Fidelity of the parsed-back circuit text against `input`.
fn verify_text(text: &str, input: &StateInput, direction: Direction) -> Result<f64, Error> {
    let circuit = Circuit::parse(text)?;
    Ok(match (input, direction) {
        (StateInput::Three(s), Direction::Disentangle) => fidelity_to_basis(&circuit.apply(s), 0),
        (StateInput::Three(s), Direction::Prepare) => s.overlap(&circuit.apply(&PureState3::basis(0))),
        (StateInput::Two(s), Direction::Disentangle) => circuit.apply(s).amplitudes()[0].norm().min(1.0),
        (StateInput::Two(s), Direction::Prepare) => s.overlap(&circuit.apply(&PureState2::basis(0))),
    })
}

#[allow(clippy::too_many_arguments)]
fn run_synth(
    file: &PathBuf,
    real: bool,
    prep: bool,
    verify: bool,
    ry: bool,
    out_path: Option<&PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let input = match read_state(file, err) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let mode = if real { Mode::Real } else { Mode::General };
    if real && input.max_imag() > REAL_TOL {
        let _ = writeln!(err, "error: --real requires real amplitudes (max |imag| = {:e})", input.max_imag());
        return EXIT_MODE;
    }
    let result = if prep { prepare(&input, mode) } else { disentangle(&input, mode) };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let Error::InvariantViolation { trace, .. } = &e {
                let _ = writeln!(err, "branch trace: {trace}");
            }
            return exit_code_for(&e);
        }
    };
    if ry && !report.all_real {
        let _ = writeln!(err, "note: --ry ignored, circuit has complex local gates");
    }
    let text = report.circuit.to_text(ry);
    let mut summary = None;
    if verify {
        let fidelity = match verify_text(&text, &input, report.direction) {
            Ok(f) => f,
            Err(e) => {
                let _ = writeln!(err, "error: emitted circuit failed to re-parse: {e}");
                return EXIT_INVARIANT;
            }
        };
        if !(fidelity >= 1.0 - crate::synth::FIDELITY_TOL) {
            let _ = writeln!(err, "error: verification fidelity {fidelity}");
            let _ = writeln!(err, "branch trace: {}", report.trace_string());
            return EXIT_INVARIANT;
        }
        summary = Some(format!(
            "cz={} fidelity={} all_real={} trace={}",
            report.cz_count,
            fidelity,
            report.all_real,
            report.trace_string().replace(' ', ",")
        ));
    }
    match out_path {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                return EXIT_PARSE;
            }
            if let Some(s) = summary {
                let _ = writeln!(out, "{s}");
            }
        }
        None => {
            let _ = out.write_all(text.as_bytes());
            if let Some(s) = summary {
                let _ = writeln!(out, "# {s}");
            }
        }
    }
    EXIT_OK
}

fn run_delta(file: &PathBuf, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let s = match read_state(file, err) {
        Ok(StateInput::Three(s)) => s,
        Ok(StateInput::Two(_)) => {
            let _ = writeln!(err, "error: delta needs a 3-qubit state (8 amplitudes)");
            return EXIT_PARSE;
        }
        Err(code) => return code,
    };
    match s.delta() {
        Ok(d) => {
            let v = d.value();
            if v != 0.0 && v.abs() <= DELTA_ZERO {
                let _ = writeln!(out, "delta~0 bound={}", d.cz_bound());
            } else {
                // shortest round-trip representation, at most 17 significant digits
                let _ = writeln!(out, "delta={} bound={}", v, d.cz_bound());
            }
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

fn run_sweep_cmd(n: u64, seed: u64, real: bool, json: bool, out: &mut dyn Write) -> i32 {
    let cfg = SweepConfig {
        samples: n as usize,
        seed,
        mode: if real { Mode::Real } else { Mode::General },
    };
    let summary = run_sweep(&cfg);
    let _ = out.write_all(summary.to_text().as_bytes());
    if json {
        let _ = writeln!(out, "{}", serde_json::to_string(&summary).expect("summary serializes"));
    }
    if summary.passed() {
        EXIT_OK
    } else {
        EXIT_PARSE
    }
}

/// Runs the CLI with explicit arguments and streams; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_PARSE,
            };
        }
    };
    match cli.command {
        Command::Synth { file, real, prepare, verify, ry, out: out_path } => {
            run_synth(&file, real, prepare, verify, ry, out_path.as_ref(), out, err)
        }
        Command::Sweep { n, seed, real, json } => run_sweep_cmd(n, seed, real, json, out),
        Command::Delta { file } => run_delta(&file, out, err),
    }
}
