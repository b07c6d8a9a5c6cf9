use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vqb_core::vqb::MitigationFamily;
use vqb_core::Pauli;

/// Largest supported `--d`; the Choi circuit register has `2 d^3` levels.
pub const MAX_DIM: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "vqb", version, about = "Virtual quantum broadcasting experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the broadcasting circuit on one input state.
    Broadcast(BroadcastArgs),
    /// Distance between the broadcast and partial-swap Choi states over theta.
    ScanTheta(ScanArgs),
    /// Choi states of the two circuit branches and the assembled broadcast.
    Choi(ChoiArgs),
    /// Cloner versus mitigated single-qubit fidelities over a state family.
    Mitigate(MitigateArgs),
    /// Two-time pseudo-density matrix of a state sent through a channel.
    Pdm(PdmArgs),
    /// Shot-level estimate of a Pauli correlator on the virtual broadcast.
    Sample(SampleArgs),
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output directory; created if missing.
    #[arg(long, default_value = "vqb-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct BroadcastArgs {
    /// Named state or inline JSON (see README).
    #[arg(long, default_value = "zero")]
    pub state: String,
    /// Local dimension; defaults to 2 for named states.
    #[arg(long, value_parser = parse_dim)]
    pub d: Option<usize>,
    /// Partial-swap angle in radians; accepts literals such as `pi/2` or `3pi/4`.
    #[arg(long, default_value = "pi/2", value_parser = parse_angle, allow_hyphen_values = true)]
    pub theta: f64,
    /// Depolarizing strength applied before the control measurement.
    #[arg(long, default_value_t = 0.0, value_parser = parse_unit)]
    pub noise: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 2, value_parser = parse_dim)]
    pub d: usize,
    /// Grid points over [0, 2 pi], endpoints included.
    #[arg(long, default_value_t = 97, value_parser = clap::value_parser!(u32).range(3..))]
    pub points: u32,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct ChoiArgs {
    #[arg(long, default_value_t = 2, value_parser = parse_dim)]
    pub d: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct MitigateArgs {
    #[arg(long, default_value = "polar")]
    pub family: MitigationFamily,
    #[arg(long, default_value_t = 25, value_parser = clap::value_parser!(u32).range(2..))]
    pub steps: u32,
    #[arg(long, default_value_t = 0.0, value_parser = parse_unit)]
    pub noise: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelName {
    Identity,
    Depolarizing,
    Dephasing,
    /// Qubit only.
    Hadamard,
    /// Qubit only.
    X,
    /// Qubit only.
    Y,
    /// Qubit only.
    Z,
}

#[derive(Debug, Args)]
pub struct PdmArgs {
    #[arg(long, default_value = "zero")]
    pub state: String,
    #[arg(long, value_parser = parse_dim)]
    pub d: Option<usize>,
    #[arg(long, value_enum, default_value_t = ChannelName::Identity)]
    pub channel: ChannelName,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Qubit state, named or inline JSON.
    #[arg(long, default_value = "zero")]
    pub state: String,
    #[arg(long)]
    pub obs_a: Pauli,
    #[arg(long)]
    pub obs_b: Pauli,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: u64,
    #[arg(long, env = "VQB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// ChaCha stream index.
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    /// Split the shots over this many independent streams.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: u32,
    #[command(flatten)]
    pub out: OutArgs,
}

fn parse_dim(s: &str) -> Result<usize, String> {
    let d: usize = s.parse().map_err(|e| format!("{e}"))?;
    if !(2..=MAX_DIM).contains(&d) {
        return Err(format!("dimension must be in 2..={MAX_DIM}"));
    }
    Ok(d)
}

fn parse_unit(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !(0.0..=1.0).contains(&x) {
        return Err("expected a value in [0, 1]".into());
    }
    Ok(x)
}

/// Radians, either plain (`1.5707963`) or as a multiple of pi
/// (`pi`, `pi/2`, `3pi/4`, `3*pi/4`, `-pi/4`, `0.5pi`).
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    let value = match t.find("pi") {
        None => t.parse::<f64>().map_err(|_| format!("cannot parse angle {s:?}"))?,
        Some(at) => {
            let coeff = t[..at].trim_end_matches('*');
            let coeff = match coeff {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| format!("bad coefficient in angle {s:?}"))?,
            };
            let rest = &t[at + 2..];
            let denom = match rest {
                "" => 1.0,
                r => r
                    .strip_prefix('/')
                    .and_then(|n| n.parse::<f64>().ok())
                    .filter(|n| *n != 0.0)
                    .ok_or_else(|| format!("bad denominator in angle {s:?}"))?,
            };
            coeff * PI / denom
        }
    };
    if !value.is_finite() {
        return Err(format!("angle {s:?} is not finite"));
    }
    Ok(value)
}
