use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use polarlab::construction::{
    design_profile, select_frozen, DesignParam, Method, SequenceFile, DEFAULT_ROUNDS,
};
use polarlab::decoders::{DecoderKind, Mode};
use polarlab::harness::{
    emit_csv, emit_qsim_csv, run_qsim, run_sweep, SimConfig, StopRule, ENV_SEED, ENV_WORKERS,
};
use polarlab::quantum::{classify_channels, ClassifyRule, QuantumCodeSpec};
use polarlab::{BitVector, CodeSpec, CrcPoly, LlrVec, LlrVector, LlrVectorF32};

#[derive(Parser)]
#[command(
    name = "polarlab",
    version,
    about = "Polar code construction, decoding and simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Design a code and print its reliability sequence or code file.
    Construct(ConstructArgs),
    /// Encode a payload with a code file.
    Encode(EncodeArgs),
    /// Decode one block of channel LLRs.
    Decode(DecodeArgs),
    /// Run a BER/BLER sweep described by a config file.
    Simulate(SimulateArgs),
    /// Estimate the logical error rate of a quantum polar code.
    Qsim(QsimArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Gade,
    Bec,
    Mc,
}

#[derive(Args)]
struct ConstructArgs {
    /// Code length (a power of two).
    #[arg(long)]
    n: usize,
    /// Number of information positions. When given, a code file is written
    /// instead of a reliability sequence.
    #[arg(long)]
    k: Option<usize>,
    /// Construction method.
    #[arg(long, value_enum, default_value = "gade")]
    method: MethodArg,
    /// Design E_b/N_0 in dB for an AWGN design point.
    #[arg(long, conflicts_with = "design")]
    design_ebn0: Option<f64>,
    /// Code rate used to turn --design-ebn0 into a noise variance.
    /// Defaults to k/N, or 1/2 without --k.
    #[arg(long)]
    rate: Option<f64>,
    /// Design parameter: bec:<eps>, bsc:<p>, sigma2:<v> or ebn0:<dB>dB@<rate>.
    #[arg(long)]
    design: Option<String>,
    /// Monte-Carlo rounds for --method mc.
    #[arg(long, default_value_t = DEFAULT_ROUNDS)]
    mc_rounds: u64,
    /// Seed for --method mc.
    #[arg(long, default_value_t = 0)]
    mc_seed: u64,
    /// Outer CRC polynomial such as 0xE21, placed inside the k positions.
    #[arg(long, requires = "k")]
    crc: Option<String>,
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EncodeArgs {
    /// Code file.
    #[arg(long)]
    code: PathBuf,
    /// Payload as a 0/1 string; read from standard input when omitted.
    #[arg(long)]
    payload: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecoderArg {
    Sc,
    Ssc,
    Scl,
    CaScl,
    Scs,
    Bp,
    Scan,
    Ml,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecisionArg {
    F64,
    F32,
}

#[derive(Args)]
struct DecodeArgs {
    /// Code file.
    #[arg(long)]
    code: PathBuf,
    /// File of whitespace-separated LLRs (positive favours 0); `-` or
    /// omitted reads standard input.
    #[arg(long)]
    llr: Option<PathBuf>,
    /// Decoder.
    #[arg(long, value_enum, default_value = "sc")]
    decoder: DecoderArg,
    /// List size for scl and ca-scl.
    #[arg(long, default_value_t = 8)]
    list: usize,
    /// Stack depth for scs.
    #[arg(long, default_value_t = 1024)]
    depth: usize,
    /// Iterations for bp (default 30) and scan (default 1).
    #[arg(long)]
    iterations: Option<usize>,
    /// Check-node kernel: exact or minsum.
    #[arg(long, default_value = "minsum")]
    mode: String,
    /// LLR saturation magnitude.
    #[arg(long, default_value_t = polarlab::channels::DEFAULT_SATURATION)]
    bound: f64,
    /// Floating-point precision of the decoder.
    #[arg(long, value_enum, default_value = "f64")]
    precision: PrecisionArg,
    /// Also print the codeword estimate, path metric and CRC status.
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Args)]
struct SimulateArgs {
    /// TOML sweep configuration.
    #[arg(long)]
    config: PathBuf,
    /// Worker threads; overrides the config and POLARLAB_WORKERS.
    #[arg(long)]
    workers: Option<usize>,
    /// Master seed; overrides the config and POLARLAB_SEED.
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV file; standard output when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct QsimArgs {
    /// Quantum code file. When omitted the code is designed from --n,
    /// --design-p and --k or --threshold.
    #[arg(long, conflicts_with_all = ["n", "k", "threshold"])]
    code: Option<PathBuf>,
    /// Code length for a designed code.
    #[arg(long)]
    n: Option<usize>,
    /// Depolarizing probability the code is designed for.
    #[arg(long, default_value_t = 0.05)]
    design_p: f64,
    /// Keep the k most reliable positions on each side.
    #[arg(long, conflicts_with = "threshold")]
    k: Option<usize>,
    /// Keep positions whose profile value is at most this value (bit-error
    /// probability for mc, Bhattacharyya parameter for bec).
    #[arg(long)]
    threshold: Option<f64>,
    /// Profile used for the design: bec (Bhattacharyya) or mc.
    #[arg(long, value_enum, default_value = "mc")]
    method: MethodArg,
    /// Monte-Carlo rounds for --method mc.
    #[arg(long, default_value_t = DEFAULT_ROUNDS)]
    mc_rounds: u64,
    /// Comma-separated depolarizing probabilities to simulate.
    #[arg(long, value_delimiter = ',', required = true)]
    points: Vec<f64>,
    /// Stop a point after this many logical errors.
    #[arg(long, default_value_t = StopRule::DEFAULT.min_block_errors)]
    min_errors: u64,
    /// Stop a point after this many blocks.
    #[arg(long, default_value_t = StopRule::DEFAULT.max_blocks)]
    max_blocks: u64,
    /// Master seed; overrides POLARLAB_SEED.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; overrides POLARLAB_WORKERS.
    #[arg(long)]
    workers: Option<usize>,
    /// Write the designed code to this file.
    #[arg(long)]
    emit_code: Option<PathBuf>,
    /// Output CSV file; standard output when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn read_code(path: &Path) -> Result<CodeSpec> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.parse()
        .with_context(|| format!("parsing {}", path.display()))
}

fn env_u64(key: &str) -> Result<Option<u64>> {
    std::env::var(key)
        .ok()
        .map(|v| v.trim().parse().with_context(|| format!("{key}={v:?}")))
        .transpose()
}

fn method(m: MethodArg, rounds: u64, seed: u64) -> Method {
    match m {
        MethodArg::Gade => Method::Gade,
        MethodArg::Bec => Method::BecApprox,
        MethodArg::Mc => Method::MonteCarlo { rounds, seed },
    }
}

fn construct(a: ConstructArgs) -> Result<()> {
    let design = match (&a.design, a.design_ebn0) {
        (Some(d), _) => d.parse::<DesignParam>()?,
        (None, Some(db)) => {
            let rate = a.rate.or(a.k.map(|k| k as f64 / a.n as f64)).unwrap_or(0.5);
            DesignParam::EbN0Db { db, rate }
        }
        (None, None) => bail!("give --design-ebn0 or --design"),
    };
    let profile = design_profile(a.n, method(a.method, a.mc_rounds, a.mc_seed), design)?;
    let text = match a.k {
        Some(k) => {
            let mut spec = CodeSpec::new(a.n, select_frozen(&profile, k)?)?;
            if let Some(c) = &a.crc {
                spec = spec.with_crc(c.parse::<CrcPoly>()?)?;
            }
            spec.to_string()
        }
        None => SequenceFile::from_profile(&profile).to_string(),
    };
    write_out(a.output.as_deref(), &text)
}

fn encode(a: EncodeArgs) -> Result<()> {
    let spec = read_code(&a.code)?;
    let text = match a.payload {
        Some(p) => p,
        None => read_input(None)?,
    };
    let payload: BitVector = text.trim().parse()?;
    let x = spec.encode(&payload)?;
    write_out(None, &format!("{x}\n"))
}

fn decoder_kind(a: &DecodeArgs) -> Result<DecoderKind> {
    let mode: Mode = a.mode.parse()?;
    Ok(match a.decoder {
        DecoderArg::Sc => DecoderKind::Sc { mode },
        DecoderArg::Ssc => DecoderKind::Ssc { mode },
        DecoderArg::Scl => DecoderKind::Scl { list: a.list, mode },
        DecoderArg::CaScl => DecoderKind::CaScl { list: a.list, mode },
        DecoderArg::Scs => DecoderKind::Scs {
            depth: a.depth,
            mode,
        },
        DecoderArg::Bp => DecoderKind::Bp {
            iterations: a.iterations.unwrap_or(30),
            mode,
        },
        DecoderArg::Scan => DecoderKind::Scan {
            iterations: a.iterations.unwrap_or(1),
            mode,
        },
        DecoderArg::Ml => DecoderKind::Ml,
    })
}

fn decode_with<T: polarlab::Llr>(
    spec: &CodeSpec,
    kind: DecoderKind,
    llr: LlrVec<T>,
    verbose: bool,
) -> Result<String> {
    kind.validate(spec)?;
    let out = kind.build::<T>(spec)?.decode(&llr)?;
    let mut s = format!("{}\n", out.info_bits);
    if verbose {
        s += &format!("codeword {}\n", out.codeword_hat);
        s += &format!("metric {}\n", out.metric.as_f64());
        if let Some(ok) = out.crc_ok {
            s += &format!("crc {}\n", if ok { "pass" } else { "fail" });
        }
    }
    Ok(s)
}

fn decode(a: DecodeArgs) -> Result<()> {
    let spec = read_code(&a.code)?;
    let kind = decoder_kind(&a)?;
    let text = read_input(a.llr.as_deref())?;
    let values = text
        .split_whitespace()
        .map(|t| t.parse::<f64>().with_context(|| format!("bad LLR {t:?}")))
        .collect::<Result<Vec<f64>>>()?;
    let out = match a.precision {
        PrecisionArg::F64 => decode_with(
            &spec,
            kind,
            LlrVector::from_f64(&values, a.bound)?,
            a.verbose,
        )?,
        PrecisionArg::F32 => decode_with(
            &spec,
            kind,
            LlrVectorF32::from_f64(&values, a.bound)?,
            a.verbose,
        )?,
    };
    write_out(None, &out)
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let mut cfg =
        SimConfig::load(&a.config).with_context(|| format!("loading {}", a.config.display()))?;
    cfg.apply_overrides(|k| std::env::var(k).ok())?;
    if let Some(w) = a.workers {
        cfg.workers = w;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    let records = run_sweep(&cfg)?;
    write_out(a.output.as_deref(), &emit_csv(&records))
}

fn qsim(a: QsimArgs) -> Result<()> {
    let spec: QuantumCodeSpec = match &a.code {
        Some(p) => std::fs::read_to_string(p)
            .with_context(|| format!("reading {}", p.display()))?
            .parse()?,
        None => {
            let Some(n) = a.n else {
                bail!("give --code or --n");
            };
            let rule = match (a.k, a.threshold) {
                (Some(k), _) => ClassifyRule::Rank { k },
                (None, Some(t)) => ClassifyRule::Threshold(t),
                (None, None) => bail!("give --k or --threshold for a designed code"),
            };
            let m = match a.method {
                MethodArg::Gade => bail!("gade needs an AWGN design; use bec or mc"),
                other => method(other, a.mc_rounds, 0),
            };
            classify_channels(n, a.design_p, m, rule)?
        }
    };
    if let Some(p) = &a.emit_code {
        std::fs::write(p, spec.to_string()).with_context(|| format!("writing {}", p.display()))?;
    }
    let seed = match a.seed {
        Some(s) => s,
        None => env_u64(ENV_SEED)?.unwrap_or(0),
    };
    let workers = match a.workers {
        Some(w) => w,
        None => env_u64(ENV_WORKERS)?.map_or(1, |w| w as usize),
    };
    let stop = StopRule {
        min_block_errors: a.min_errors,
        max_blocks: a.max_blocks,
    };
    let records = run_qsim(&spec, &a.points, stop, seed, workers)?;
    write_out(a.output.as_deref(), &emit_qsim_csv(&records))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Construct(a) => construct(a),
        Command::Encode(a) => encode(a),
        Command::Decode(a) => decode(a),
        Command::Simulate(a) => simulate(a),
        Command::Qsim(a) => qsim(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
