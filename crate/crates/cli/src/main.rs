use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use realcipher::bench::{bench, DEFAULT_REPS, DEFAULT_SIZES};
use realcipher::classical::{keygen_keyword, keygen_permutation};
use realcipher::cryptanalysis::byte_histogram;
use realcipher::linear::keygen_linear;
use realcipher::security::{
    describe_hill_keyspace, equivocation_lower_bound, vigenere_uncertainty, ENGLISH_LETTER_ENTROPY,
};
use realcipher::{
    decrypt_pipeline, encrypt_pipeline, entropy, interpolate_key, kpa_linear, parse_ciphertext,
    parse_key_file, presets, product_gained_uncertainty, transposition_uncertainty,
    write_key_file, FormatSpec, KnownPairs, NonlinearKey, Pipeline, SolverConfig, Stage,
    TranspositionSpec,
};

const SEED_ENV: &str = "REALCIPHER_SEED";

#[derive(Parser)]
#[command(name = "realcipher", version, about = "Ciphers over real arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key file
    Keygen(KeygenArgs),
    /// Encrypt a file with a key file
    Encrypt(CryptArgs),
    /// Decrypt a file with a key file
    Decrypt(CryptArgs),
    /// Recover a key from known plaintext
    #[command(subcommand)]
    Attack(AttackCommand),
    /// Print uncertainty, equivocation and keyspace figures
    Measure(MeasureArgs),
    /// Time encryption and decryption against input size
    Bench(BenchArgs),
}

#[derive(Args)]
struct KeygenArgs {
    #[command(subcommand)]
    kind: KeygenKind,
    /// Seed for the generator; REALCIPHER_SEED overrides it
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Byte-level stage appended to the pipeline
    #[arg(long, global = true, value_enum, default_value_t = Transposition::Halving)]
    transpose: Transposition,
    /// Block size for `--transpose keyed`
    #[arg(long, global = true, default_value_t = 8)]
    block: usize,
    /// Write the key here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum KeygenKind {
    /// Random invertible matrix key
    Linear {
        #[arg(long)]
        n: usize,
        /// Entries are drawn from [-magnitude, magnitude]
        #[arg(long, default_value_t = 10.0)]
        magnitude: f64,
    },
    /// Root-finding key with a random keyword stage
    Nonlinear {
        #[arg(long, value_enum, default_value_t = KeyFunctionPreset::Quintic)]
        function: KeyFunctionPreset,
        /// Keyword length; 0 leaves the keyword stage out
        #[arg(long, default_value_t = 10)]
        keyword_len: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Transposition {
    None,
    Halving,
    Keyed,
}

#[derive(Clone, Copy, ValueEnum)]
enum KeyFunctionPreset {
    /// Degree-5 polynomial, bisection on [0, 2]
    Quintic,
    /// 2^(x² − x/2), secant from seeds 2 and 3
    Exp2,
}

#[derive(Args)]
struct CryptArgs {
    #[arg(long)]
    key: PathBuf,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum AttackCommand {
    /// Solve for a linear key from plaintext and its substitution ciphertext
    Kpa {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        pairs: PairFiles,
    },
    /// Interpolate a nonlinear key from plaintext and its roots
    Interp {
        /// Interval searched when the recovered key encrypts
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [0.0, 2.0], allow_hyphen_values = true)]
        interval: Vec<f64>,
        /// Use at most this many distinct pairs
        #[arg(long)]
        max_points: Option<usize>,
        #[command(flatten)]
        pairs: PairFiles,
    },
}

#[derive(Args)]
struct PairFiles {
    /// Known plaintext
    #[arg(long)]
    plain: PathBuf,
    /// Substitution-stage ciphertext as whitespace-separated decimals
    #[arg(long)]
    cipher: PathBuf,
    /// Where to write the recovered key file
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MeasureArgs {
    /// Ciphertext length for the transposition stage (even)
    #[arg(long, default_value_t = 100)]
    length: u64,
    /// Keyword length of the shift stage
    #[arg(long, default_value_t = 1)]
    keyword_len: u64,
    /// Key entropy H(K) in bits for the equivocation bound
    #[arg(long, default_value_t = 88.0)]
    key_entropy: f64,
    /// Characters intercepted for the equivocation bound
    #[arg(long, default_value_t = 10)]
    chars: u64,
    /// Ciphertext alphabet size for the equivocation bound
    #[arg(long, default_value_t = 26)]
    alphabet: u64,
    /// Largest matrix size in the keyspace table
    #[arg(long, default_value_t = 4)]
    max_n: u32,
    /// Modulus of the keyspace table
    #[arg(long, default_value_t = 26)]
    modulus: u64,
    /// Also report the byte entropy of this file
    #[arg(long)]
    text: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Pipeline to time when no key file is given
    #[arg(long, value_enum, default_value_t = BenchPipeline::Nonlinear)]
    pipeline: BenchPipeline,
    /// Time this key file instead of a built-in pipeline
    #[arg(long)]
    key: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long, default_value_t = DEFAULT_REPS)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the comma-separated table here instead of after the report
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchPipeline {
    /// 3×3 linear key and halving transposition
    Linear,
    /// Quintic key, keyword shift and halving transposition
    Nonlinear,
}

fn seed(flag: u64) -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{SEED_ENV}={v:?} is not an unsigned integer")),
        Err(_) => Ok(flag),
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, data: &[u8]) -> Result<()> {
    fs::write(path, data).with_context(|| format!("cannot write {}", path.display()))
}

fn load_key(path: &Path) -> Result<Pipeline> {
    let text = String::from_utf8(read(path)?).context("key file is not UTF-8")?;
    parse_key_file(&text).with_context(|| format!("key file {}", path.display()))
}

fn keygen(args: KeygenArgs) -> Result<()> {
    let seed = seed(args.seed)?;
    let mut stages = match args.kind {
        KeygenKind::Linear { n, magnitude } => vec![Stage::Linear(keygen_linear(n, seed, magnitude)?)],
        KeygenKind::Nonlinear {
            function,
            keyword_len,
        } => {
            let key = match function {
                KeyFunctionPreset::Quintic => presets::quintic_key(),
                KeyFunctionPreset::Exp2 => presets::exp2_key(),
            };
            let mut stages = vec![Stage::Nonlinear(key)];
            if keyword_len > 0 {
                stages.push(Stage::Vigenere(keygen_keyword(keyword_len, seed, 10.0)?));
            }
            stages
        }
    };
    match args.transpose {
        Transposition::None => {}
        Transposition::Halving => stages.push(Stage::Transpose(TranspositionSpec::Halving)),
        Transposition::Keyed => stages.push(Stage::Transpose(TranspositionSpec::Keyed(
            keygen_permutation(args.block, seed.wrapping_add(1))?,
        ))),
    }
    let text = write_key_file(&Pipeline::with_default_format(stages)?);
    match args.out {
        Some(path) => write(&path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_pairs(files: &PairFiles) -> Result<(Vec<u8>, Vec<f64>)> {
    let plain = read(&files.plain)?;
    let cipher = read(&files.cipher)?;
    let fmt = FormatSpec::with_digits(1)?;
    let text: Vec<u8> = cipher
        .iter()
        .map(|&b| if b.is_ascii_whitespace() { b' ' } else { b })
        .collect();
    let joined = String::from_utf8_lossy(&text)
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ");
    let scalars = parse_ciphertext(joined.as_bytes(), &fmt).context("ciphertext file")?;
    // encryption pads the final block with spaces
    let mut plain = plain;
    let padding = scalars.len().saturating_sub(plain.len());
    if padding >= realcipher::linear::MAX_BLOCK {
        bail!(
            "{} ciphertext values but only {} plaintext bytes",
            scalars.len(),
            plain.len()
        );
    }
    plain.resize(plain.len().max(scalars.len()), realcipher::linear::PAD_BYTE);
    plain.truncate(scalars.len());
    Ok((plain, scalars))
}

fn attack(cmd: AttackCommand) -> Result<()> {
    match cmd {
        AttackCommand::Kpa { n, pairs } => {
            let (plain, cipher) = read_pairs(&pairs)?;
            let usable = cipher.len() / n * n;
            let known = KnownPairs::from_streams(n, &plain[..usable], &cipher[..usable])?;
            let key = kpa_linear(&known, n)?;
            let p = Pipeline::with_default_format(vec![Stage::Linear(key)])?;
            write(&pairs.out, write_key_file(&p).as_bytes())
        }
        AttackCommand::Interp {
            interval,
            max_points,
            pairs,
        } => {
            let (plain, cipher) = read_pairs(&pairs)?;
            let mut pts: Vec<(f64, u8)> = Vec::new();
            for (&x, &c) in cipher.iter().zip(&plain) {
                if pts.iter().all(|&(y, _)| y != x) {
                    pts.push((x, c));
                }
            }
            if let Some(m) = max_points {
                pts.truncate(m);
            }
            let f = interpolate_key(&pts)?;
            let key = NonlinearKey::new(f, SolverConfig::bisection(interval[0], interval[1]))?;
            let p = Pipeline::with_default_format(vec![Stage::Nonlinear(key)])?;
            write(&pairs.out, write_key_file(&p).as_bytes())
        }
    }
}

fn measure(args: MeasureArgs) -> Result<()> {
    let n = args.length;
    let k = args.keyword_len;
    let rows = [
        ("transposition, exact", transposition_uncertainty(n, true)?),
        ("transposition, Stirling", transposition_uncertainty(n, false)?),
        ("keyword shift", vigenere_uncertainty(k)?),
        ("product cipher gain", product_gained_uncertainty(n, k)?),
        (
            "equivocation lower bound",
            equivocation_lower_bound(args.key_entropy, args.chars, ENGLISH_LETTER_ENTROPY, args.alphabet)?,
        ),
    ];
    println!("length {n}, keyword length {k}, H(K) {} bits, {} characters", args.key_entropy, args.chars);
    for (label, bits) in rows {
        println!("  {label:<28}{bits:>12.3} bits");
    }
    if let Some(path) = &args.text {
        let h = entropy(&byte_histogram(&read(path)?));
        println!("  {:<28}{h:>12.3} bits", "byte entropy of text");
    }
    println!("invertible matrices modulo {}:", args.modulus);
    for size in 1..=args.max_n {
        println!("  n={size}  {}", describe_hill_keyspace(size, args.modulus)?);
    }
    Ok(())
}

fn run_bench(args: BenchArgs) -> Result<()> {
    let p = match (&args.key, args.pipeline) {
        (Some(path), _) => load_key(path)?,
        (None, BenchPipeline::Linear) => Pipeline::with_default_format(vec![
            Stage::Linear(keygen_linear(3, seed(args.seed)?, 10.0)?),
            Stage::Transpose(TranspositionSpec::Halving),
        ])?,
        (None, BenchPipeline::Nonlinear) => presets::demo_nonlinear_pipeline()?,
    };
    let sizes = args.sizes.unwrap_or_else(|| DEFAULT_SIZES.to_vec());
    let result = bench(&p, &sizes, args.reps, seed(args.seed)?)?;
    print!("{}", result.to_table());
    match &args.csv {
        Some(path) => write(path, result.to_csv().as_bytes()),
        None => {
            println!();
            print!("{}", result.to_csv());
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Keygen(args) => keygen(args),
        Command::Encrypt(args) => {
            let p = load_key(&args.key)?;
            let ct = encrypt_pipeline(&p, &read(&args.input)?)?;
            write(&args.out, &ct)
        }
        Command::Decrypt(args) => {
            let p = load_key(&args.key)?;
            let pt = decrypt_pipeline(&p, &read(&args.input)?)?;
            write(&args.out, &pt)
        }
        Command::Attack(cmd) => attack(cmd),
        Command::Measure(args) => measure(args),
        Command::Bench(args) => run_bench(args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("realcipher: {e:#}");
            ExitCode::FAILURE
        }
    }
}
