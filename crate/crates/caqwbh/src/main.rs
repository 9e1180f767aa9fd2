use std::fs::File;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use caqwbh::config::ParamArgs;
use caqwbh::keyfile::KeyFile;
use caqwbh::report::{
    self, BirthdayReportDoc, CollisionDoc, DiffusionDoc, HashDoc, ParamsDoc, PrngDoc, RunDoc,
    SensitivityDoc, UniformityDoc,
};
use caqwbh::vectors::{self, VectorFile};
use caqwbh::{hex_decode, hex_encode, parallel, CliError, Result};
use caqwbh_core::bits::{pack_msb, unpack_msb};
use caqwbh_core::keyed::{mac_context, PrngState};
use caqwbh_core::stats::sensitivity_report;
use caqwbh_core::{Digest, HashContext, HashParams, TrialRng};
use clap::{Parser, Subcommand, ValueEnum};

/// Controlled alternate quantum walk block hash.
#[derive(Debug, Parser)]
#[command(name = "caqwbh", version)]
struct Cli {
    #[command(flatten)]
    params: ParamArgs,
    /// Output format (tests only support structured-report).
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Hex,
    Raw,
    StructuredReport,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Hash a file, or stdin when no file (or `-`) is given.
    Hash { file: Option<PathBuf> },
    /// Keyed hash; parameters and keys come from the key file.
    Mac {
        #[arg(long)]
        key_file: PathBuf,
        file: Option<PathBuf>,
    },
    /// Pseudo-random bits. The generator starts from the initial state
    /// (`--alpha-file`, default e_0) with `--init-hex` as first control block.
    Prng {
        #[arg(long)]
        bits: usize,
        /// First control block, N bits as hex (default all zeros).
        #[arg(long)]
        init_hex: Option<String>,
    },
    /// Statistical test: sensitivity, diffusion, uniformity, collision or birthday.
    Test {
        name: String,
        #[arg(short = 'T', long = "trials", default_value_t = 10000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random message length in bits.
        #[arg(long, default_value_t = 1024)]
        msg_len: usize,
        /// Exit 3 if a statistic falls outside its acceptance band.
        #[arg(long)]
        assert: bool,
        /// Worker thread cap; never changes the results.
        #[arg(long)]
        jobs: Option<usize>,
        /// Include per-trial arrays in the report.
        #[arg(long)]
        verbose: bool,
    },
    /// Golden vectors for the selected parameters.
    Vectors {
        #[arg(value_enum)]
        action: VectorAction,
        path: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VectorAction {
    Generate,
    Verify,
}

fn open_input(file: Option<&Path>) -> Result<Box<dyn Read>> {
    match file {
        None => Ok(Box::new(io::stdin().lock())),
        Some(p) if p == Path::new("-") => Ok(Box::new(io::stdin().lock())),
        Some(p) => Ok(Box::new(File::open(p)?)),
    }
}

/// Streams `input` into `ctx`; returns the message length in bits.
fn absorb_stream(ctx: &mut HashContext, mut input: impl Read) -> Result<usize> {
    let mut buf = vec![0u8; 1 << 16];
    let mut total = 0;
    loop {
        let n = match input.read(&mut buf) {
            Ok(0) => return Ok(total * 8),
            Ok(n) => n,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
            Err(e) => return Err(e.into()),
        };
        ctx.absorb_bytes(&buf[..n]);
        total += n;
    }
}

fn emit(out: &mut impl Write, bytes: &[u8]) -> Result<()> {
    out.write_all(bytes)?;
    out.flush()?;
    Ok(())
}

fn emit_digest(out: &mut impl Write, format: Format, params: &HashParams, bits: usize, d: &Digest) -> Result<()> {
    match format {
        Format::Hex => emit(out, format!("{d}\n").as_bytes()),
        Format::Raw => emit(out, d.as_bytes()),
        Format::StructuredReport => {
            let doc = HashDoc {
                params: ParamsDoc::new(params),
                message_bits: bits,
                digest: d.to_hex(),
            };
            emit(out, report::to_json(&doc).as_bytes())
        }
    }
}

fn init_block(params: &HashParams, hex: Option<&str>) -> Result<Vec<bool>> {
    let n = params.positions();
    let Some(hex) = hex else {
        return Ok(vec![false; n]);
    };
    let bytes = hex_decode(hex)?;
    if bytes.len() != n.div_ceil(8) {
        return Err(CliError::Usage(format!(
            "--init-hex must hold exactly {} bytes for N = {n}",
            n.div_ceil(8)
        )));
    }
    let mut bits = unpack_msb(&bytes);
    bits.truncate(n);
    Ok(bits)
}

fn run_test(params: &HashParams, name: &str, cmd: &Command, out: &mut impl Write) -> Result<()> {
    let Command::Test { trials, seed, msg_len, assert, jobs, verbose, .. } = *cmd else {
        unreachable!()
    };
    let run = || RunDoc { seed, trials, msg_len };
    let (json, assert_doc) = match name {
        "sensitivity" => {
            let mut rng = TrialRng::new(seed, 0);
            let message = rng.bits(msg_len);
            let r = sensitivity_report(params, &message, &mut rng)?;
            let mut doc = SensitivityDoc::new(params, seed, &message, &r, verbose);
            if assert {
                doc.check();
            }
            (report::to_json(&doc), doc.assert)
        }
        "diffusion" | "uniformity" | "collision" => {
            let set = parallel::run_trials(params, trials, msg_len, seed, jobs)?;
            match name {
                "diffusion" => {
                    let doc = DiffusionDoc::new(params, run(), &set, verbose, assert)?;
                    (report::to_json(&doc), doc.assert)
                }
                "uniformity" => {
                    let doc = UniformityDoc::new(params, run(), &set, assert)?;
                    (report::to_json(&doc), doc.assert)
                }
                _ => {
                    let doc = CollisionDoc::new(params, run(), &set, verbose, assert)?;
                    (report::to_json(&doc), doc.assert)
                }
            }
        }
        "birthday" => (report::to_json(&BirthdayReportDoc::new(params)?), None),
        other => {
            return Err(CliError::Usage(format!(
                "unknown test {other:?}; expected sensitivity, diffusion, uniformity, collision or birthday"
            )))
        }
    };
    emit(out, json.as_bytes())?;
    match assert_doc {
        Some(a) if !a.passed => Err(CliError::Assertion(a.violations)),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut out = io::stdout().lock();
    let format = cli.format;
    let byte_format = format.unwrap_or(Format::Hex);
    match &cli.command {
        Command::Hash { file } => {
            let params = cli.params.build()?;
            let input = open_input(file.as_deref())?;
            let mut ctx = HashContext::new(&params)?;
            let bits = absorb_stream(&mut ctx, input)?;
            emit_digest(&mut out, byte_format, &params, bits, &ctx.finalize())
        }
        Command::Mac { key_file, file } => {
            let (params, key) = KeyFile::load(key_file)?.mac_key()?;
            let input = open_input(file.as_deref())?;
            let mut ctx = mac_context(&params, &key)?;
            let bits = absorb_stream(&mut ctx, input)?;
            emit_digest(&mut out, byte_format, &params, bits, &ctx.finalize())
        }
        Command::Prng { bits, init_hex } => {
            let params = cli.params.build()?;
            let block = init_block(&params, init_hex.as_deref())?;
            let mut st = PrngState::seed(&params, params.alpha(), &block)?;
            let output = pack_msb(&st.fill(*bits));
            match byte_format {
                Format::Hex => emit(&mut out, format!("{}\n", hex_encode(&output)).as_bytes()),
                Format::Raw => emit(&mut out, &output),
                Format::StructuredReport => {
                    let doc = PrngDoc {
                        params: ParamsDoc::new(&params),
                        init_block: hex_encode(&pack_msb(&block)),
                        bits: *bits,
                        output: hex_encode(&output),
                    };
                    emit(&mut out, report::to_json(&doc).as_bytes())
                }
            }
        }
        Command::Test { name, .. } => {
            if !matches!(format, None | Some(Format::StructuredReport)) {
                return Err(CliError::Usage("test output is always a structured report".into()));
            }
            let params = cli.params.build()?;
            run_test(&params, name, &cli.command, &mut out)
        }
        Command::Vectors { action, path } => match action {
            VectorAction::Generate => {
                let params = cli.params.build()?;
                let file = vectors::generate(&params)?;
                file.save(path)?;
                emit(&mut out, format!("wrote {} vectors to {}\n", file.vectors.len(), path.display()).as_bytes())
            }
            VectorAction::Verify => {
                let n = vectors::verify(&VectorFile::load(path)?)?;
                emit(&mut out, format!("{n} vectors verified\n").as_bytes())
            }
        },
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("caqwbh: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
