//! `qwhash` command line: hash bit messages, run the seeded analysis
//! battery, probe edit sensitivity, and print the birthday bound.
//!
//! Exit status: 0 on success, 1 on usage or configuration errors, 2 on
//! runtime failures (including degenerate-state hash aborts and selftest
//! failures).

mod config;
mod selftest;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use qwhash::analysis::{analyze_battery, birthday_report, sensitivity_suite, TrialPlan};
use qwhash::{Boundary, CoinDirection, CoinKind, Error, Message, Qhf, QhfParams};

#[derive(Parser, Debug)]
#[command(
    name = "qwhash",
    version,
    about = "Hybrid quantum-walk hash function on a path graph, with a statistical analysis battery"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    params: ParamFlags,

    #[command(flatten)]
    run: RunFlags,
}

#[derive(Args, Debug, Clone)]
struct ParamFlags {
    /// Path-graph vertex count
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Bits per output segment (total output is n*k bits)
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Continuous-walk evolution time
    #[arg(long, global = true)]
    t: Option<f64>,
    /// Self-loop (laziness) weight of the Grover coin
    #[arg(long, global = true)]
    l: Option<f64>,
    /// Coin operator
    #[arg(long, global = true, value_parser = ["grover", "fourier"])]
    coin: Option<String>,
    /// Endpoint rule of the shift
    #[arg(long, global = true, value_parser = ["reflect", "cycle"])]
    boundary: Option<String>,
    /// Start vertex, in [0, n); defaults to the centre vertex n/2
    #[arg(long = "initial-vertex", global = true)]
    initial_vertex: Option<usize>,
    /// Start coin direction
    #[arg(long = "initial-coin", global = true, value_parser = ["left", "right", "loop"])]
    initial_coin: Option<String>,
    /// Do not rescale to unit norm after continuous (projecting) steps
    #[arg(long = "no-renormalize", global = true)]
    no_renormalize: bool,
    /// Ignore any QWHASH_CONFIG file and start from built-in defaults
    #[arg(long = "params-default", global = true)]
    params_default: bool,
}

#[derive(Args, Debug, Clone)]
struct RunFlags {
    /// Trials for the statistical battery
    #[arg(long, global = true, default_value_t = 10_000)]
    trials: u64,
    /// Random message bits per trial
    #[arg(long = "msg-len", global = true, default_value_t = 64)]
    msg_len: usize,
    /// Base seed of the trial stream
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads for the battery (0 = all cores, 1 = sequential)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Directory for report files written by `analyze`
    #[arg(long = "out-dir", global = true, default_value = "qwhash-out")]
    out_dir: PathBuf,
    /// Stdout rendering
    #[arg(long, global = true, default_value = "text", value_parser = ["text", "kv", "csv"])]
    format: String,
}

#[derive(Args, Debug, Clone)]
struct InputFlags {
    /// Inline bitstring, e.g. 1011001
    #[arg(long)]
    message: Option<String>,
    /// Text file of 0/1 characters (whitespace ignored)
    #[arg(long = "input-file")]
    input_file: Option<PathBuf>,
    /// Binary file expanded to bits, most significant bit first
    #[arg(long)]
    bytes: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hash a bit message and print bits, hex, and the parameter fingerprint
    Hash(InputFlags),
    /// Run collision, avalanche, and uniformity analyses over one shared
    /// seeded trial stream, writing report files to the output directory
    Analyze,
    /// Hash a message and three standard edits (prepend 0, flip bit 5,
    /// delete bit 3) and report the output-bit distances
    Sensitivity(InputFlags),
    /// Print the birthday-attack bound for the configured output size
    Birthday,
    /// Run the built-in invariant checks
    Selftest,
}

enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::InvalidInput(_) => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn build_params(flags: &ParamFlags) -> Result<QhfParams, CliError> {
    let mut overrides = if flags.params_default {
        config::ParamOverrides::default()
    } else {
        config::from_env().map_err(CliError::Usage)?
    };
    if let Some(n) = flags.n {
        overrides.n = Some(n);
    }
    if let Some(k) = flags.k {
        overrides.k = Some(k);
    }
    if let Some(t) = flags.t {
        overrides.t = Some(t);
    }
    if let Some(l) = flags.l {
        overrides.l = Some(l);
    }
    if let Some(coin) = &flags.coin {
        overrides.coin = Some(CoinKind::parse(coin)?);
    }
    if let Some(boundary) = &flags.boundary {
        overrides.boundary = Some(Boundary::parse(boundary)?);
    }
    if let Some(iv) = flags.initial_vertex {
        overrides.initial_vertex = Some(iv);
    }
    if let Some(ic) = &flags.initial_coin {
        overrides.initial_coin = Some(CoinDirection::parse(ic)?);
    }
    if flags.no_renormalize {
        overrides.renormalize = Some(false);
    }
    let mut params = QhfParams::default();
    overrides.apply(&mut params);
    // The start vertex defaults to the centre of whatever path was chosen.
    if overrides.initial_vertex.is_none() {
        params.initial_vertex = params.n / 2;
    }
    params.validate()?;
    Ok(params)
}

/// Resolve the message from exactly one input source; paths are checked
/// before any work starts.
fn read_message(input: &InputFlags) -> Result<Message, CliError> {
    let sources = usize::from(input.message.is_some())
        + usize::from(input.input_file.is_some())
        + usize::from(input.bytes.is_some());
    if sources != 1 {
        return Err(CliError::Usage(
            "provide exactly one of --message, --input-file, --bytes".into(),
        ));
    }
    if let Some(text) = &input.message {
        return Ok(Message::parse(text)?);
    }
    if let Some(path) = &input.input_file {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        return Ok(Message::parse(&text)?);
    }
    let path = input.bytes.as_ref().expect("one source");
    let bytes = fs::read(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(Message::from_bytes_msb(&bytes)?)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let params = build_params(&cli.params)?;
    match &cli.command {
        Command::Hash(input) => {
            let message = read_message(input)?;
            let hash = Qhf::new(params.clone())?.hash(&message)?;
            match cli.run.format.as_str() {
                "kv" => {
                    print!(
                        "message={message}\nbits={hash}\nhex={}\nfingerprint={}\n",
                        hash.hex(),
                        params.fingerprint()
                    );
                }
                "csv" => {
                    print!(
                        "field,value\nmessage,{message}\nbits,{hash}\nhex,{}\nfingerprint,{}\n",
                        hash.hex(),
                        params.fingerprint()
                    );
                }
                _ => {
                    println!("message bits: {}", message.len());
                    println!("bits: {hash}");
                    println!("hex:  {}", hash.hex_grouped().join(" "));
                    println!("fingerprint: {}", params.fingerprint());
                }
            }
            Ok(())
        }
        Command::Analyze => {
            let plan = TrialPlan {
                trials: cli.run.trials,
                msg_len: cli.run.msg_len,
                seed: cli.run.seed,
                threads: cli.run.threads,
            };
            let (collision, avalanche, uniformity) = analyze_battery(&plan, &params)?;
            let out_dir = &cli.run.out_dir;
            fs::create_dir_all(out_dir)
                .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", out_dir.display())))?;
            let summary = format!(
                "{}\n{}\n{}",
                collision.to_text(),
                avalanche.to_text(),
                uniformity.to_text()
            );
            let files: [(&str, String); 6] = [
                ("collision.kv", collision.to_kv()),
                ("collision_omega_histogram.csv", collision.histogram_csv()),
                ("avalanche.kv", avalanche.to_kv()),
                ("uniformity.kv", uniformity.to_kv()),
                ("uniformity_toggles.csv", uniformity.toggle_csv()),
                ("summary.txt", summary.clone()),
            ];
            for (name, contents) in &files {
                write_file(&out_dir.join(name), contents)?;
            }
            match cli.run.format.as_str() {
                "kv" => {
                    print!("{}{}{}", collision.to_kv(), avalanche.to_kv(), uniformity.to_kv());
                }
                "csv" => {
                    print!("# section=collision_omega_histogram\n{}", collision.histogram_csv());
                    print!("# section=uniformity_toggles\n{}", uniformity.toggle_csv());
                }
                _ => {
                    print!("{summary}");
                    println!("report files written to {}", out_dir.display());
                }
            }
            Ok(())
        }
        Command::Sensitivity(input) => {
            let message = read_message(input)?;
            let report = sensitivity_suite(&message, &params)?;
            match cli.run.format.as_str() {
                "kv" => print!("{}", report.to_kv()),
                "csv" => print!("{}", report.distances_csv()),
                _ => print!("{}", report.to_text()),
            }
            Ok(())
        }
        Command::Birthday => {
            let report = birthday_report(&params)?;
            match cli.run.format.as_str() {
                "kv" => print!("{}", report.to_kv()),
                "csv" => print!(
                    "field,value\ntotal_bits,{}\nattack_exponent,{}\ncomplexity,{}\n",
                    report.total_bits, report.attack_exponent, report.complexity
                ),
                _ => print!("{}", report.to_text()),
            }
            Ok(())
        }
        Command::Selftest => {
            let failures = selftest::run();
            if failures == 0 {
                Ok(())
            } else {
                Err(CliError::Runtime(format!("{failures} selftest checks failed")))
            }
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}
