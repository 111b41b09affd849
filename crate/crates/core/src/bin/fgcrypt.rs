//! Command-line interface for the toolkit.
//!
//! Subcommands mirror the library modules: `sss` for the secret-sharing
//! schemes, `cipher` for the symmetric scheme, `pk` for the public-key
//! scheme, and `group` for Nielsen reduction of word tuples. All files are
//! canonical JSON; errors go to stderr as one JSON object with a stable
//! machine-readable `error` kind, and the process exits nonzero.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fgcrypt::canon::to_canonical_json;
use fgcrypt::cipher;
use fgcrypt::error::{Error, Result};
use fgcrypt::files::{
    load, save, CipherKeyFile, CiphertextFile, DealerRecordFile, PkCiphertextFile, PkPrivateFile,
    PkPublicFile, ReductionFile, ShareBody, ShareFile, TranscriptFile, TupleFile,
};
use fgcrypt::nielsen::{is_nielsen_reduced, nielsen_reduce, random_regular_transcript, Transcript};
use fgcrypt::pubkey::{self, PkMode};
use fgcrypt::ratmat::{default_lehner_params, Rational};
use fgcrypt::shares::build_distribution;
use fgcrypt::sss::{
    deal_combinatorial, deal_length, deal_nielsen, reconstruct_combinatorial, reconstruct_length,
    reconstruct_nielsen, SecretFn,
};
use fgcrypt::word::Word;

#[derive(Parser)]
#[command(name = "fgcrypt", about = "Group-based secret sharing and encryption", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// (n,t) secret sharing: deal shares or reconstruct a secret
    Sss {
        #[command(subcommand)]
        command: SssCommand,
    },
    /// Polyalphabetic symmetric cipher over SL(2,Q)
    Cipher {
        #[command(subcommand)]
        command: CipherCommand,
    },
    /// Public-key scheme over free-group automorphisms
    Pk {
        #[command(subcommand)]
        command: PkCommand,
    },
    /// Nielsen reduction of word tuples
    Group {
        #[command(subcommand)]
        command: GroupCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Comb,
    Nielsen,
    Length,
}

#[derive(Clone, Copy, ValueEnum)]
enum SecretFnArg {
    SumInvAbsTrace,
    ProdAbsTrace,
    SumAbsTrace,
    ProdTraceSq,
    SumTraceSq,
    ProdCommutatorTrace,
    SumTraceOfSquares,
}

impl From<SecretFnArg> for SecretFn {
    fn from(a: SecretFnArg) -> SecretFn {
        match a {
            SecretFnArg::SumInvAbsTrace => SecretFn::SumInvAbsTrace,
            SecretFnArg::ProdAbsTrace => SecretFn::ProdAbsTrace,
            SecretFnArg::SumAbsTrace => SecretFn::SumAbsTrace,
            SecretFnArg::ProdTraceSq => SecretFn::ProdTraceSq,
            SecretFnArg::SumTraceSq => SecretFn::SumTraceSq,
            SecretFnArg::ProdCommutatorTrace => SecretFn::ProdCommutatorTrace,
            SecretFnArg::SumTraceOfSquares => SecretFn::SumTraceOfSquares,
        }
    }
}

#[derive(Subcommand)]
enum SssCommand {
    /// Deal shares into an output directory (plus a dealer record)
    Deal(DealArgs),
    /// Reconstruct the secret from share files; prints the secret
    Reconstruct {
        /// share files from at least t participants
        shares: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct DealArgs {
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    t: usize,
    /// comb: comma-separated naturals a_1..a_m
    #[arg(long)]
    values: Option<String>,
    /// comb: target secret; shares then carry the factor x
    #[arg(long)]
    special: Option<Rational>,
    /// nielsen: comma-separated Lehner parameters r_1..r_m (default 3j-1)
    #[arg(long)]
    r: Option<String>,
    /// nielsen: secret derivation function
    #[arg(long, value_enum, default_value = "sum-inv-abs-trace")]
    secret_fn: SecretFnArg,
    /// length: ambient rank of the dealer tuple
    #[arg(long)]
    rank: Option<usize>,
    /// length: tuple file with the Nielsen-reduced dealer words
    #[arg(long)]
    tuple: Option<PathBuf>,
    /// nielsen/length: transcript file with the dealer's scramble
    #[arg(long)]
    transcript: Option<PathBuf>,
    /// nielsen/length: draw a random scramble from this seed instead
    #[arg(long)]
    seed: Option<u64>,
    /// number of random moves when --seed is used
    #[arg(long, default_value_t = 30)]
    moves: usize,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Subcommand)]
enum CipherCommand {
    /// Generate a symmetric key
    Keygen {
        #[arg(long, default_value_t = 26)]
        alphabet: usize,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// comma-separated block lengths p_1..p_k, each in 1..=4
        #[arg(long, default_value = "1,2,3")]
        blocks: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// segment permutation (1-based images), enables segmented mode
        #[arg(long)]
        sigma: Option<String>,
        /// transcript file enabling key evolution
        #[arg(long)]
        evolution: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Encrypt an uppercase message
    Encrypt {
        #[arg(long)]
        key: PathBuf,
        /// the message, A..Z within the key's alphabet
        #[arg(long, conflicts_with = "input")]
        message: Option<String>,
        /// read the message from a text file instead
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decrypt a ciphertext file; prints the message
    Decrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Advance the key-evolution counter by one
    Evolve {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum PkCommand {
    /// Generate a key pair from automorphism images and a secret exponent
    Keygen {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// base word, comma-separated letters (e.g. "1,2" for x1 x2)
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        /// generator images, words separated by ';' (e.g. "1,2;2")
        #[arg(long, allow_hyphen_values = true)]
        images: String,
        /// secret exponent n
        #[arg(long)]
        exponent: u64,
        /// matrix mode: mask the message through the Lehner representation
        #[arg(long)]
        matrix: bool,
        /// Lehner parameters for matrix mode (default 3j-1)
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        pub_out: PathBuf,
        #[arg(long)]
        priv_out: PathBuf,
    },
    /// Encrypt a word under a public key
    Encrypt {
        #[arg(long = "pub")]
        public: PathBuf,
        /// message word, comma-separated letters ("" for the identity)
        #[arg(long, allow_hyphen_values = true)]
        message: String,
        /// session exponent t
        #[arg(long)]
        exponent: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decrypt a ciphertext; prints the message word as JSON letters
    Decrypt {
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long = "priv")]
        private: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Nielsen-reduce a tuple file, emitting the reduced tuple + transcript
    Reduce {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the N0-N2 conditions; prints a JSON verdict
    VerifyReduced {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|item| {
            item.trim()
                .parse::<T>()
                .map_err(|e| Error::InvalidParams(format!("bad {what} entry {item:?}: {e}")))
        })
        .collect()
}

fn parse_word(s: &str) -> Result<Word> {
    let letters: Vec<i32> = parse_list(s, "word letter")?;
    Word::reduce(&letters)
}

fn parse_words(s: &str) -> Result<Vec<Word>> {
    s.split(';').map(parse_word).collect()
}

fn load_or_random_transcript(
    transcript: &Option<PathBuf>,
    seed: Option<u64>,
    moves: usize,
    arity: usize,
) -> Result<Transcript> {
    match (transcript, seed) {
        (Some(path), None) => {
            let tf: TranscriptFile = load(path)?;
            Ok(tf.transcript)
        }
        (None, Some(seed)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(random_regular_transcript(&mut rng, arity, moves))
        }
        (None, None) => Err(Error::InvalidParams(
            "provide either --transcript or --seed for the scramble".into(),
        )),
        (Some(_), Some(_)) => Err(Error::InvalidParams(
            "--transcript and --seed are mutually exclusive".into(),
        )),
    }
}

fn write_shares(out_dir: &Path, files: &[ShareFile], record: &DealerRecordFile) -> Result<()> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| Error::InvalidParams(format!("create {}: {e}", out_dir.display())))?;
    for f in files {
        save(&out_dir.join(format!("share_{}.json", f.participant())), f)?;
    }
    save(&out_dir.join("dealer_record.json"), record)?;
    Ok(())
}

fn run_deal(args: DealArgs) -> Result<()> {
    let DealArgs { scheme, n, t, out_dir, .. } = &args;
    let (n, t) = (*n, *t);
    match scheme {
        SchemeArg::Comb => {
            let values: Vec<u64> = parse_list(
                args.values
                    .as_deref()
                    .ok_or_else(|| Error::InvalidParams("comb scheme requires --values".into()))?,
                "value",
            )?;
            let deal = deal_combinatorial(n, t, &values, args.special.as_ref())?;
            let files: Vec<ShareFile> = deal
                .shares
                .iter()
                .map(|s| ShareFile::new(n, t, ShareBody::Comb { share: s.clone() }))
                .collect();
            let record = DealerRecordFile::new("comb", n, t, deal.secret.clone(), None);
            write_shares(out_dir, &files, &record)?;
            println!("dealt {} comb shares to {}", files.len(), out_dir.display());
        }
        SchemeArg::Nielsen => {
            let m = build_distribution(n, t)?.item_count();
            let params = match &args.r {
                Some(s) => parse_list::<Rational>(s, "Lehner parameter")?,
                None => default_lehner_params(m),
            };
            let transcript =
                load_or_random_transcript(&args.transcript, args.seed, args.moves, m)?;
            let secret_fn: SecretFn = args.secret_fn.into();
            let deal = deal_nielsen(n, t, &params, &transcript, secret_fn)?;
            if let Some(w) = &deal.warning {
                eprintln!("warning: {w}");
            }
            let files: Vec<ShareFile> = deal
                .shares
                .iter()
                .map(|s| {
                    ShareFile::new(n, t, ShareBody::Nielsen { share: s.clone(), secret_fn })
                })
                .collect();
            let record =
                DealerRecordFile::new("nielsen", n, t, deal.secret.clone(), deal.warning.clone());
            write_shares(out_dir, &files, &record)?;
            println!("dealt {} nielsen shares to {}", files.len(), out_dir.display());
        }
        SchemeArg::Length => {
            let rank = args
                .rank
                .ok_or_else(|| Error::InvalidParams("length scheme requires --rank".into()))?;
            let tuple_path = args
                .tuple
                .as_ref()
                .ok_or_else(|| Error::InvalidParams("length scheme requires --tuple".into()))?;
            let tf: TupleFile = load(tuple_path)?;
            let m = build_distribution(n, t)?.item_count();
            let transcript =
                load_or_random_transcript(&args.transcript, args.seed, args.moves, m)?;
            let deal = deal_length(n, t, rank, &tf.words, &transcript)?;
            let files: Vec<ShareFile> = deal
                .shares
                .iter()
                .map(|s| ShareFile::new(n, t, ShareBody::Length { share: s.clone(), rank }))
                .collect();
            let record = DealerRecordFile::new("length", n, t, deal.secret.clone(), None);
            write_shares(out_dir, &files, &record)?;
            println!("dealt {} length shares to {}", files.len(), out_dir.display());
        }
    }
    Ok(())
}

fn run_reconstruct(paths: &[PathBuf]) -> Result<()> {
    if paths.is_empty() {
        return Err(Error::InvalidParams("no share files given".into()));
    }
    let files: Vec<ShareFile> = paths.iter().map(|p| load(p)).collect::<Result<_>>()?;
    let (n, t) = (files[0].n, files[0].t);
    let scheme = files[0].scheme_name();
    for f in &files {
        if f.n != n || f.t != t || f.scheme_name() != scheme {
            return Err(Error::InvalidParams(
                "share files disagree on scheme or (n,t) parameters".into(),
            ));
        }
    }
    let secret = match &files[0].body {
        ShareBody::Comb { .. } => {
            let shares: Vec<_> = files
                .iter()
                .map(|f| match &f.body {
                    ShareBody::Comb { share } => share.clone(),
                    _ => unreachable!("scheme agreement checked above"),
                })
                .collect();
            reconstruct_combinatorial(n, t, &shares)?
        }
        ShareBody::Nielsen { secret_fn, .. } => {
            let tag = *secret_fn;
            let mut shares = Vec::new();
            for f in &files {
                match &f.body {
                    ShareBody::Nielsen { share, secret_fn } if *secret_fn == tag => {
                        shares.push(share.clone())
                    }
                    _ => {
                        return Err(Error::InvalidParams(
                            "share files disagree on the secret function".into(),
                        ))
                    }
                }
            }
            reconstruct_nielsen(n, t, &shares, tag)?.secret
        }
        ShareBody::Length { .. } => {
            let shares: Vec<_> = files
                .iter()
                .map(|f| match &f.body {
                    ShareBody::Length { share, .. } => share.clone(),
                    _ => unreachable!("scheme agreement checked above"),
                })
                .collect();
            reconstruct_length(n, t, &shares)?.secret
        }
    };
    println!("{secret}");
    Ok(())
}

fn run_cipher(cmd: CipherCommand) -> Result<()> {
    match cmd {
        CipherCommand::Keygen { alphabet, rank, blocks, seed, sigma, evolution, out } => {
            let block_seq: Vec<usize> = parse_list(&blocks, "block length")?;
            let opts = cipher::KeygenOptions {
                sigma: sigma.as_deref().map(|s| parse_list(s, "sigma image")).transpose()?,
                evolution: evolution
                    .as_deref()
                    .map(|p| load::<TranscriptFile>(p).map(|tf| tf.transcript))
                    .transpose()?,
                ..Default::default()
            };
            let key =
                cipher::keygen(alphabet, rank, block_seq, cipher::TranscriptSource::Seed(seed), opts)?;
            save(&out, &CipherKeyFile::new(key))?;
            println!("wrote key to {}", out.display());
        }
        CipherCommand::Encrypt { key, message, input, out } => {
            let kf: CipherKeyFile = load(&key)?;
            let message = match (message, input) {
                (Some(m), None) => m,
                (None, Some(path)) => std::fs::read_to_string(&path)
                    .map_err(|e| Error::InvalidParams(format!("read {}: {e}", path.display())))?
                    .trim()
                    .to_string(),
                _ => return Err(Error::InvalidParams("provide --message or --in".into())),
            };
            let ct = cipher::encrypt(&kf.key, &message)?;
            save(&out, &CiphertextFile::new(ct))?;
            println!("wrote ciphertext to {}", out.display());
        }
        CipherCommand::Decrypt { key, input } => {
            let kf: CipherKeyFile = load(&key)?;
            let cf: CiphertextFile = load(&input)?;
            println!("{}", cipher::decrypt(&kf.key, &cf.body)?);
        }
        CipherCommand::Evolve { key, out } => {
            let kf: CipherKeyFile = load(&key)?;
            let evolved = cipher::evolve_key(&kf.key)?;
            let counter = evolved.evolution_counter().unwrap_or(0);
            save(&out, &CipherKeyFile::new(evolved))?;
            println!("wrote evolved key (counter {counter}) to {}", out.display());
        }
    }
    Ok(())
}

fn run_pk(cmd: PkCommand) -> Result<()> {
    match cmd {
        PkCommand::Keygen { rank, base, images, exponent, matrix, r, pub_out, priv_out } => {
            let mode = if matrix { PkMode::Matrix } else { PkMode::Word };
            let params = match (&r, matrix) {
                (Some(s), _) => Some(parse_list::<Rational>(s, "Lehner parameter")?),
                (None, true) => Some(default_lehner_params(rank)),
                (None, false) => None,
            };
            let outcome =
                pubkey::keygen(rank, parse_word(&base)?, parse_words(&images)?, exponent, mode, params)?;
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            save(&pub_out, &PkPublicFile::new(outcome.public))?;
            save(&priv_out, &PkPrivateFile::new(outcome.private))?;
            println!("wrote {} and {}", pub_out.display(), priv_out.display());
        }
        PkCommand::Encrypt { public, message, exponent, out } => {
            let pf: PkPublicFile = load(&public)?;
            let ct = pubkey::encrypt(&pf.key, &parse_word(&message)?, exponent)?;
            save(&out, &PkCiphertextFile::new(ct))?;
            println!("wrote ciphertext to {}", out.display());
        }
        PkCommand::Decrypt { public, private, input } => {
            let pf: PkPublicFile = load(&public)?;
            let sf: PkPrivateFile = load(&private)?;
            let cf: PkCiphertextFile = load(&input)?;
            let m = pubkey::decrypt(&pf.key, &sf.key, &cf.body)?;
            println!("{}", to_canonical_json(&m)?.trim_end());
        }
    }
    Ok(())
}

fn run_group(cmd: GroupCommand) -> Result<()> {
    match cmd {
        GroupCommand::Reduce { input, out } => {
            let tf: TupleFile = load(&input)?;
            for w in &tf.words {
                w.check_rank(tf.rank)?;
            }
            let res = nielsen_reduce(&tf.words)?;
            save(&out, &ReductionFile::new(tf.rank, res.reduced, res.transcript))?;
            println!("wrote reduction to {}", out.display());
        }
        GroupCommand::VerifyReduced { input } => {
            let tf: TupleFile = load(&input)?;
            match is_nielsen_reduced(&tf.words) {
                None => println!("{{\"reduced\": true}}"),
                Some(v) => {
                    println!("{{\"reduced\": false, \"violation\": \"{v:?}\"}}");
                }
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sss { command } => match command {
            SssCommand::Deal(args) => run_deal(args),
            SssCommand::Reconstruct { shares } => run_reconstruct(&shares),
        },
        Command::Cipher { command } => run_cipher(command),
        Command::Pk { command } => run_pk(command),
        Command::Group { command } => run_group(command),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}
