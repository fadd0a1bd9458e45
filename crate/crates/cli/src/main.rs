//! Command-line front end: key generation, signing, verification,
//! known-answer-test files, and a rejection-rate benchmark.
//!
//! Exit codes are a stable contract: 0 success/accept, 1 reject or KAT
//! mismatch, 2 I/O failure, 3 malformed input (bad seed hex, truncated or
//! corrupt object files, unparseable KAT text).

use std::fmt;
use std::fs;
use std::io::Read;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rand::RngCore;

use bgsig::codec::kat::{kat_check, kat_generate, kat_write, KatError};
use bgsig::codec::{decode_pk, decode_sig, decode_sk, encode_pk, encode_sig, encode_sk};
use bgsig::params::ValidatedParamSet;
use bgsig::sampling::{shake256, Seed};
use bgsig::scheme::{
    gather_rejection_stats, keygen, sign_transcript, verify, RejectionStats, SignOptions,
};

#[derive(Parser)]
#[command(name = "bgsig", version, about = "Lattice-based signatures (Fiat-Shamir with aborts)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair (.bgpk / .bgsk)
    Keygen {
        /// 64 hex digits; omit for fresh OS randomness
        #[arg(long)]
        seed: Option<String>,
        /// Public key output path
        #[arg(long)]
        pk: PathBuf,
        /// Secret key output path
        #[arg(long)]
        sk: PathBuf,
    },
    /// Sign a message file (.bgsig); pass `-` as the message to read stdin
    Sign {
        #[arg(long)]
        sk: PathBuf,
        #[arg(long)]
        msg: PathBuf,
        /// Signature output path
        #[arg(long)]
        out: PathBuf,
        /// Mix a fresh salt into the mask derivation instead of fully
        /// deterministic signing
        #[arg(long)]
        randomized: bool,
    },
    /// Verify a signature; prints ACCEPT or REJECT
    Verify {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        msg: PathBuf,
        #[arg(long)]
        sig: PathBuf,
    },
    /// Generate a known-answer-test file (.bgkat)
    KatGen {
        /// Master seed, 64 hex digits
        #[arg(long)]
        seed: String,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-derive every record of a KAT file and compare byte-exactly
    KatCheck {
        path: PathBuf,
    },
    /// Measure rejection-loop acceptance rates and throughput
    Bench {
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Also write the measurements as a one-row CSV
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Key seed for the benchmark key pair (default: fixed)
        #[arg(long)]
        seed: Option<String>,
    },
}

enum CmdError {
    /// Exit 2.
    Io(String),
    /// Exit 3.
    Malformed(String),
}

impl fmt::Display for CmdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmdError::Io(msg) | CmdError::Malformed(msg) => write!(f, "{msg}"),
        }
    }
}

impl CmdError {
    fn code(&self) -> u8 {
        match self {
            CmdError::Io(_) => 2,
            CmdError::Malformed(_) => 3,
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CmdError> {
    fs::read(path).map_err(|e| CmdError::Io(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CmdError> {
    fs::write(path, bytes)
        .map_err(|e| CmdError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Message bytes from a path, with `-` meaning stdin.
fn read_message(path: &Path) -> Result<Vec<u8>, CmdError> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| CmdError::Io(format!("cannot read stdin: {e}")))?;
        Ok(buf)
    } else {
        read_file(path)
    }
}

fn parse_seed(hex64: &str) -> Result<Seed, CmdError> {
    Seed::from_hex(hex64).map_err(|e| CmdError::Malformed(e.to_string()))
}

fn fresh_seed() -> Seed {
    let mut bytes = [0u8; 32];
    rand::rngs::OsRng.fill_bytes(&mut bytes);
    Seed(bytes)
}

fn fingerprint(bytes: &[u8]) -> String {
    hex::encode(shake256(bytes, 4))
}

fn cmd_keygen(
    p: &ValidatedParamSet,
    seed: Option<String>,
    pk_path: &Path,
    sk_path: &Path,
) -> Result<u8, CmdError> {
    let seed = match seed {
        Some(hex64) => parse_seed(&hex64)?,
        None => fresh_seed(),
    };
    let (pk, sk) = keygen(p, &seed);
    let pk_bytes = encode_pk(&pk, p);
    let sk_bytes = encode_sk(&sk, p);
    write_file(pk_path, &pk_bytes)?;
    write_file(sk_path, &sk_bytes)?;
    println!(
        "pk: {} bytes -> {} (fingerprint {})",
        pk_bytes.len(),
        pk_path.display(),
        fingerprint(&pk_bytes)
    );
    println!("sk: {} bytes -> {}", sk_bytes.len(), sk_path.display());
    Ok(0)
}

fn cmd_sign(
    p: &ValidatedParamSet,
    sk_path: &Path,
    msg_path: &Path,
    out_path: &Path,
    randomized: bool,
) -> Result<u8, CmdError> {
    let sk = decode_sk(&read_file(sk_path)?, p)
        .map_err(|e| CmdError::Malformed(format!("bad secret key file: {e}")))?;
    let message = read_message(msg_path)?;
    let opts = SignOptions {
        salt: randomized.then(|| {
            let mut salt = [0u8; 32];
            rand::rngs::OsRng.fill_bytes(&mut salt);
            salt
        }),
        ..Default::default()
    };
    let (sig, transcript) = sign_transcript(p, &sk, &message, &opts)
        .map_err(|e| CmdError::Malformed(format!("signing failed: {e}")))?;
    let sig_bytes = encode_sig(&sig, p);
    write_file(out_path, &sig_bytes)?;
    println!(
        "signature: {} bytes -> {} ({} attempt{})",
        sig_bytes.len(),
        out_path.display(),
        transcript.attempt_count(),
        if transcript.attempt_count() == 1 { "" } else { "s" }
    );
    Ok(0)
}

fn cmd_verify(
    p: &ValidatedParamSet,
    pk_path: &Path,
    msg_path: &Path,
    sig_path: &Path,
) -> Result<u8, CmdError> {
    let pk_bytes = read_file(pk_path)?;
    let sig_bytes = read_file(sig_path)?;
    let message = read_message(msg_path)?;

    // Strict decoding comes first; malformed files reject with exit 3.
    let pk = match decode_pk(&pk_bytes, p) {
        Ok(pk) => pk,
        Err(e) => {
            println!("REJECT");
            return Err(CmdError::Malformed(format!("bad public key file: {e}")));
        }
    };
    let sig = match decode_sig(&sig_bytes, p) {
        Ok(sig) => sig,
        Err(e) => {
            println!("REJECT");
            return Err(CmdError::Malformed(format!("bad signature file: {e}")));
        }
    };

    if verify(p, &pk, &message, &sig) {
        println!("ACCEPT");
        Ok(0)
    } else {
        println!("REJECT");
        Ok(1)
    }
}

fn cmd_kat_gen(
    p: &ValidatedParamSet,
    seed_hex: &str,
    count: usize,
    out_path: &Path,
) -> Result<u8, CmdError> {
    let master = parse_seed(seed_hex)?;
    let records = kat_generate(p, &master, count)
        .map_err(|e| CmdError::Malformed(format!("generation failed: {e}")))?;
    let text = kat_write(&records);
    write_file(out_path, text.as_bytes())?;
    println!("{count} records -> {}", out_path.display());
    Ok(0)
}

fn cmd_kat_check(p: &ValidatedParamSet, path: &Path) -> Result<u8, CmdError> {
    let text = String::from_utf8(read_file(path)?)
        .map_err(|_| CmdError::Malformed("KAT file is not UTF-8".to_string()))?;
    match kat_check(p, &text) {
        Ok(count) => {
            println!("OK ({count} records)");
            Ok(0)
        }
        Err(err @ KatError::Mismatch { .. }) => {
            println!("FAIL: {err}");
            Ok(1)
        }
        Err(err) => Err(CmdError::Malformed(err.to_string())),
    }
}

fn cmd_bench(
    p: &ValidatedParamSet,
    trials: u64,
    csv: Option<&Path>,
    seed: Option<String>,
) -> Result<u8, CmdError> {
    let seed = match seed {
        Some(hex64) => parse_seed(&hex64)?,
        None => Seed(*b"bgsig-bench-key-seed-0123456789a"),
    };
    let (_, sk) = keygen(p, &seed);

    // Trials are independent signings; shard them across threads and
    // merge, which reproduces the single-threaded totals exactly.
    let threads = std::thread::available_parallelism()
        .map(NonZeroUsize::get)
        .unwrap_or(1)
        .min(trials as usize);
    let started = Instant::now();
    let chunk = trials / threads as u64;
    let remainder = trials % threads as u64;
    let shards: Vec<(u64, u64)> = (0..threads as u64)
        .map(|i| {
            let extra = u64::from(i < remainder);
            (i * chunk + i.min(remainder), chunk + extra)
        })
        .collect();
    let results = std::thread::scope(|scope| {
        let handles: Vec<_> = shards
            .iter()
            .map(|&(offset, count)| {
                let sk = &sk;
                scope.spawn(move || gather_rejection_stats(p, sk, count, b"bench", offset))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("bench worker panicked"))
            .collect::<Result<Vec<_>, _>>()
    })
    .map_err(|e| CmdError::Malformed(format!("benchmark signing failed: {e}")))?;
    let mut stats = RejectionStats::default();
    for shard in results {
        stats.merge(shard);
    }
    let elapsed = started.elapsed().as_secs_f64();
    let sigs_per_sec = stats.trials as f64 / elapsed;

    println!("trials:               {}", stats.trials);
    println!("total attempts:       {}", stats.total_attempts);
    println!("z-bound acceptance:   {:.4}", stats.z_accept_rate());
    println!("low-bound acceptance: {:.4}", stats.low_accept_rate());
    println!("combined acceptance:  {:.4}", stats.combined_accept_rate());
    println!("mean attempts:        {:.3}", stats.mean_attempts());
    println!("median attempts:      {}", stats.percentile_attempts(50.0));
    println!("p90 attempts:         {}", stats.percentile_attempts(90.0));
    println!("p99 attempts:         {}", stats.percentile_attempts(99.0));
    println!("signatures/second:    {sigs_per_sec:.1}");

    if let Some(csv_path) = csv {
        let mut text = String::from(
            "trials,total_attempts,z_accept,low_accept,combined_accept,\
             mean_attempts,p50_attempts,p90_attempts,p99_attempts,sigs_per_sec\n",
        );
        text.push_str(&format!(
            "{},{},{:.6},{:.6},{:.6},{:.6},{},{},{},{:.2}\n",
            stats.trials,
            stats.total_attempts,
            stats.z_accept_rate(),
            stats.low_accept_rate(),
            stats.combined_accept_rate(),
            stats.mean_attempts(),
            stats.percentile_attempts(50.0),
            stats.percentile_attempts(90.0),
            stats.percentile_attempts(99.0),
            sigs_per_sec,
        ));
        write_file(csv_path, text.as_bytes())?;
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, CmdError> {
    let p = ValidatedParamSet::default_set();
    match cli.command {
        Command::Keygen { seed, pk, sk } => cmd_keygen(&p, seed, &pk, &sk),
        Command::Sign { sk, msg, out, randomized } => {
            cmd_sign(&p, &sk, &msg, &out, randomized)
        }
        Command::Verify { pk, msg, sig } => cmd_verify(&p, &pk, &msg, &sig),
        Command::KatGen { seed, count, out } => cmd_kat_gen(&p, &seed, count, &out),
        Command::KatCheck { path } => cmd_kat_check(&p, &path),
        Command::Bench { trials, csv, seed } => {
            cmd_bench(&p, trials.max(1), csv.as_deref(), seed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code())
        }
    }
}
