use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "trcov",
    version,
    about = "Trajectory-representation dwell times, libration periods and past/present coverage"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON configuration file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Human-readable rounding and indented JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Reduced Planck constant (default 1).
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    /// Particle mass (default 1).
    #[arg(long, global = true)]
    pub mass: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateParity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegionArg {
    Free,
    Forbidden,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    Sb,
    SwBound,
    SwExcited,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Kinematics,
    DwellMono,
    Dwell,
    DwellMax,
    Libration,
    LibrationMax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    #[value(name = "E")]
    Energy,
    #[value(name = "U")]
    Height,
    #[value(name = "q")]
    HalfWidth,
    #[value(name = "a")]
    A,
    #[value(name = "c")]
    C,
}

/// `x,t` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventArg {
    pub x: f64,
    pub t: f64,
}

pub fn parse_event(s: &str) -> Result<EventArg, String> {
    let (x, t) = s
        .split_once(',')
        .ok_or_else(|| format!("expected x,t but got '{s}'"))?;
    let num = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|e| format!("bad number '{v}': {e}"))
    };
    Ok(EventArg {
        x: num(x)?,
        t: num(t)?,
    })
}

/// `lo:hi:n` grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeArg {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

pub fn parse_range(s: &str) -> Result<RangeArg, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected lo:hi:n but got '{s}'"));
    }
    let lo = parts[0]
        .trim()
        .parse()
        .map_err(|e| format!("bad lo '{}': {e}", parts[0]))?;
    let hi = parts[1]
        .trim()
        .parse()
        .map_err(|e| format!("bad hi '{}': {e}", parts[1]))?;
    let n = parts[2]
        .trim()
        .parse()
        .map_err(|e| format!("bad n '{}': {e}", parts[2]))?;
    Ok(RangeArg { lo, hi, n })
}

#[derive(Debug, Clone, Args)]
pub struct EnergyArgs {
    /// Energy E (0 < E < U).
    #[arg(long = "E", allow_negative_numbers = true)]
    pub energy: f64,
}

#[derive(Debug, Clone, Default, Args)]
pub struct PotentialArgs {
    /// Barrier height / well depth U.
    #[arg(long = "U", allow_negative_numbers = true)]
    pub height: Option<f64>,
    /// Square-well half-width q.
    #[arg(long = "q", allow_negative_numbers = true)]
    pub half_width: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct MicrostateArgs {
    #[arg(long = "a", default_value_t = 1.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long = "b", default_value_t = 1.0, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long = "c", default_value_t = 0.0, allow_negative_numbers = true)]
    pub c: f64,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    #[arg(long, value_enum, default_value_t = StateParity::Even)]
    pub parity: StateParity,
    /// 0-based index among states of the given parity.
    #[arg(long, default_value_t = 0)]
    pub index: usize,
}

#[derive(Debug, Clone, Args)]
pub struct EventPair {
    /// Past event as x,t.
    #[arg(long, value_parser = parse_event, allow_hyphen_values = true)]
    pub past: EventArg,
    /// Present event as x,t.
    #[arg(long, value_parser = parse_event, allow_hyphen_values = true)]
    pub present: EventArg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// k, kappa and kappa/k for one energy.
    Kinematics {
        #[command(flatten)]
        energy: EnergyArgs,
        #[command(flatten)]
        potential: PotentialArgs,
    },
    /// Square-well bound states.
    Energies {
        #[command(flatten)]
        potential: PotentialArgs,
        #[arg(long, value_enum, default_value_t = ParityArg::Both)]
        parity: ParityArg,
    },
    /// Step-barrier dwell time of one microstate.
    Dwell {
        #[command(flatten)]
        energy: EnergyArgs,
        #[command(flatten)]
        potential: PotentialArgs,
        #[command(flatten)]
        microstate: MicrostateArgs,
        #[arg(long, value_enum, default_value_t = SignArg::Both)]
        sign: SignArg,
    },
    /// Maximum dwell time over admissible microstates.
    DwellMax {
        #[command(flatten)]
        energy: EnergyArgs,
        #[command(flatten)]
        potential: PotentialArgs,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Square-well libration period of one microstate.
    Libration {
        #[command(flatten)]
        energy: EnergyArgs,
        #[command(flatten)]
        potential: PotentialArgs,
        #[command(flatten)]
        microstate: MicrostateArgs,
    },
    /// Maximum libration period, checked against the `[1 - r^2]` bound variant.
    LibrationMax {
        #[command(flatten)]
        energy: EnergyArgs,
        #[command(flatten)]
        potential: PotentialArgs,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Libration period of the probe microstate (A, 1/A, 0).
    LibrationInf {
        #[command(flatten)]
        energy: EnergyArgs,
        #[command(flatten)]
        potential: PotentialArgs,
        /// Probe coefficient(s) A >= 1, comma separated.
        #[arg(long = "A", value_delimiter = ',', required = true)]
        probe: Vec<f64>,
    },
    /// Sampled trajectory (x, t, W_x, dW_x/dE, speed) within one region.
    Trajectory {
        #[command(flatten)]
        energy: EnergyArgs,
        #[command(flatten)]
        potential: PotentialArgs,
        #[command(flatten)]
        microstate: MicrostateArgs,
        #[arg(long, value_enum, default_value_t = RegionArg::Forbidden)]
        region: RegionArg,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 11)]
        n: usize,
    },
    /// Quantum stationary Hamilton–Jacobi residual at given points.
    QshjeCheck {
        #[command(flatten)]
        energy: EnergyArgs,
        #[command(flatten)]
        potential: PotentialArgs,
        #[command(flatten)]
        microstate: MicrostateArgs,
        #[arg(long, value_enum, default_value_t = RegionArg::Forbidden)]
        region: RegionArg,
        /// Points, comma separated.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        x: Vec<f64>,
    },
    /// Past/present admissibility under both theories.
    #[command(subcommand)]
    Coverage(CoverageCommand),
    /// Libration connecting a past to a present in a square well.
    Connect {
        #[command(flatten)]
        potential: PotentialArgs,
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        events: EventPair,
    },
    /// Evaluate a quantity over a uniform parameter range.
    Sweep {
        #[arg(long, value_enum)]
        quantity: Quantity,
        /// Swept parameter; falls back to the config's sweep block.
        #[arg(long, value_enum)]
        param: Option<SweepParam>,
        #[arg(long, allow_negative_numbers = true)]
        start: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        end: Option<f64>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long = "E", allow_negative_numbers = true)]
        energy: Option<f64>,
        #[command(flatten)]
        potential: PotentialArgs,
        #[command(flatten)]
        microstate: MicrostateArgs,
        #[arg(long, value_enum, default_value_t = SignArg::Minus)]
        sign: SignArg,
        #[arg(long)]
        epsilon: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CoverageCommand {
    /// Step barrier: past and present inside the barrier.
    Sb {
        #[command(flatten)]
        energy: EnergyArgs,
        #[command(flatten)]
        potential: PotentialArgs,
        #[command(flatten)]
        events: EventPair,
    },
    /// Square well: past and present inside the well.
    Sw {
        #[command(flatten)]
        potential: PotentialArgs,
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        events: EventPair,
    },
    /// Scan a grid of pasts/presents and report the set relations.
    Report {
        #[arg(long, value_enum)]
        scenario: ScenarioArg,
        /// Energy for the step-barrier scenario.
        #[arg(long = "E", allow_negative_numbers = true)]
        energy: Option<f64>,
        #[command(flatten)]
        potential: PotentialArgs,
        #[command(flatten)]
        state: StateArgs,
        /// Past positions as lo:hi:n.
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        past_x: Option<RangeArg>,
        /// Present positions as lo:hi:n.
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        present_x: Option<RangeArg>,
        /// Elapsed times as lo:hi:n.
        #[arg(long, value_parser = parse_range)]
        dt: Option<RangeArg>,
    },
}
