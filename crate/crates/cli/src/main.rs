//! `sckit`: parameter/key generation, file signcryption, Schnorr
//! signatures, security-game runs, and cost benchmarks over the sckit-core
//! library.
//!
//! Exit codes are a public contract:
//!   0  success (including ACCEPT / VERIFIED)
//!   2  invalid flags or flag combinations
//!   3  generation failure (parameter search exhausted)
//!   4  invalid, mismatched, or unreadable files
//!   5  signcryption retry budget exhausted
//!   6  cryptographic rejection (tag mismatch or bad signature)

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sckit_core::cost::{count_baseline_ops, count_ops, measure_expansion, time_schemes};
use sckit_core::format::{
    fingerprint, parse_ciphertext_file, parse_key_file, parse_params_file,
    parse_signature_file, serialize_ciphertext_file, serialize_key_file, serialize_params_file,
    serialize_signature_file, CiphertextFile, KeyFile, KeyRole, ParamsFile, SignatureFile,
    SCHNORR_SIG_TOKEN,
};
use sckit_core::games::{
    builtin_adversary, run_confidentiality_game, run_seed, GameConfig, GameError, Position,
    Setting, BUILTIN_ADVERSARIES,
};
use sckit_core::group::{generate_params, GroupError, GroupParams, RandomScalar};
use sckit_core::primitives::PrimitiveProfile;
use sckit_core::schemes::{
    keygen_receiver, keygen_sender, receiver_from_private, sender_from_private, signcrypt,
    signcrypt_observed, unsigncrypt, ReceiverKeys, SchemeError, SchemeId, SenderKeys,
    SigncryptOverrides, UnsigncryptOutcome,
};
use sckit_core::schnorr::{sign, verify, SchnorrKeyPair};
use sckit_core::observe::NoObserver;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sckit", version, about = "Discrete-log signcryption toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate group parameters and write a params file.
    Paramgen(ParamgenArgs),
    /// Generate a key pair for a scheme and role.
    Keygen(KeygenArgs),
    /// Signcrypt a file from a sender to a receiver.
    Signcrypt(SigncryptArgs),
    /// Unsigncrypt a file and verify its origin.
    Unsigncrypt(UnsigncryptArgs),
    /// Sign a file with a Schnorr key.
    Sign(SignArgs),
    /// Verify a Schnorr signature file.
    Verify(VerifyArgs),
    /// Run confidentiality games against a built-in adversary.
    Game(GameArgs),
    /// Measure operation counts, sizes, and wall-clock medians.
    Bench(BenchArgs),
}

#[derive(Args)]
struct ParamgenArgs {
    /// Bit length of the prime modulus p (minimum 16).
    #[arg(long, default_value_t = 1024)]
    p_bits: u64,
    /// Bit length of the subgroup order q.
    #[arg(long, default_value_t = 160)]
    q_bits: u64,
    /// Primitive profile token recorded in the file.
    #[arg(long, default_value = "modern-default")]
    profile: String,
    /// Deterministic seed; omit for OS entropy.
    #[arg(long)]
    seed: Option<u64>,
    /// Output path for the params file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct KeygenArgs {
    /// Scheme token: schnorr-sc, scs1, scs2, or schnorr (signature keys).
    #[arg(long)]
    scheme: String,
    /// Key role: sender, receiver, or schnorr.
    #[arg(long)]
    role: String,
    /// Params file to bind the keys to.
    #[arg(long)]
    params: PathBuf,
    /// Deterministic seed; omit for OS entropy.
    #[arg(long)]
    seed: Option<u64>,
    /// Output path for the private key file.
    #[arg(long)]
    private_out: PathBuf,
    /// Output path for the public key file.
    #[arg(long)]
    public_out: PathBuf,
    /// Test hook: use this exact private exponent (debug builds only).
    #[cfg(debug_assertions)]
    #[arg(long)]
    force_exponent: Option<u64>,
}

#[derive(Args)]
struct SigncryptArgs {
    /// Scheme token; must match both key files.
    #[arg(long)]
    scheme: String,
    /// Sender private key file.
    #[arg(long)]
    sender_key: PathBuf,
    /// Receiver public key file.
    #[arg(long)]
    receiver_key: PathBuf,
    /// Plaintext input path.
    #[arg(long = "in")]
    input: PathBuf,
    /// Ciphertext output path.
    #[arg(long)]
    out: PathBuf,
    /// Deterministic seed; omit for OS entropy.
    #[arg(long)]
    seed: Option<u64>,
    /// Test hook: use this exact ephemeral nonce (debug builds only).
    #[cfg(debug_assertions)]
    #[arg(long)]
    force_nonce: Option<u64>,
}

#[derive(Args)]
struct UnsigncryptArgs {
    /// Scheme token; must match the key and ciphertext files.
    #[arg(long)]
    scheme: String,
    /// Receiver private key file.
    #[arg(long)]
    receiver_key: PathBuf,
    /// Sender public key file.
    #[arg(long)]
    sender_key: PathBuf,
    /// Ciphertext input path.
    #[arg(long = "in")]
    input: PathBuf,
    /// Recovered plaintext output path (written only on acceptance).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SignArgs {
    /// Schnorr private key file.
    #[arg(long)]
    key: PathBuf,
    /// Message input path.
    #[arg(long = "in")]
    input: PathBuf,
    /// Signature output path.
    #[arg(long)]
    sig: PathBuf,
    /// Deterministic seed; omit for OS entropy.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Schnorr public key file.
    #[arg(long)]
    key: PathBuf,
    /// Message input path.
    #[arg(long = "in")]
    input: PathBuf,
    /// Signature file to check.
    #[arg(long)]
    sig: PathBuf,
}

#[derive(Args)]
struct GameArgs {
    /// Scheme token.
    #[arg(long, default_value = "schnorr-sc")]
    scheme: String,
    /// Game setting: two-user or multi-user.
    #[arg(long, default_value = "two-user")]
    setting: String,
    /// Adversary position: outsider or insider.
    #[arg(long, default_value = "outsider")]
    position: String,
    /// Built-in adversary name.
    #[arg(long)]
    adversary: String,
    /// Number of independent runs.
    #[arg(long, default_value_t = 100)]
    runs: u32,
    /// Master seed; per-run seeds are derived from it by counter.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Oracle query budget per stage.
    #[arg(long, default_value_t = 256)]
    budget: u32,
    #[arg(long, default_value_t = 64)]
    p_bits: u64,
    #[arg(long, default_value_t = 32)]
    q_bits: u64,
    #[arg(long, default_value = "modern-default")]
    profile: String,
    /// Run the deliberately broken scheme variant.
    #[arg(long)]
    sabotage: bool,
    /// Print QUERY/RESULT transcript lines for every run.
    #[arg(long)]
    transcript: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated scheme tokens (default: all three).
    #[arg(long, default_value = "schnorr-sc,scs1,scs2")]
    schemes: String,
    /// Comma-separated plaintext sizes for expansion reporting.
    #[arg(long, default_value = "100")]
    sizes: String,
    /// Timing trials per subject (median reported).
    #[arg(long, default_value_t = 30)]
    trials: u32,
    #[arg(long, default_value_t = 1024)]
    p_bits: u64,
    #[arg(long, default_value_t = 160)]
    q_bits: u64,
    #[arg(long, default_value = "paper-compat")]
    profile: String,
    /// Deterministic seed; omit for OS entropy.
    #[arg(long)]
    seed: Option<u64>,
    /// Emit machine-readable CSV instead of the table.
    #[arg(long)]
    csv: bool,
}

enum CliError {
    /// Exit 2: bad flag values or combinations.
    Usage(String),
    /// Exit 3: generation gave up.
    Generation(String),
    /// Exit 4: unreadable, malformed, or mismatched files.
    File(String),
    /// Exit 5: signcryption retry budget exhausted.
    Retry(String),
    /// Exit 6: cryptographic rejection.
    Rejected(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Generation(_) => 3,
            CliError::File(_) => 4,
            CliError::Retry(_) => 5,
            CliError::Rejected(_) => 6,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Generation(m)
            | CliError::File(m)
            | CliError::Retry(m)
            | CliError::Rejected(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Paramgen(args) => cmd_paramgen(args),
        Command::Keygen(args) => cmd_keygen(args),
        Command::Signcrypt(args) => cmd_signcrypt(args),
        Command::Unsigncrypt(args) => cmd_unsigncrypt(args),
        Command::Sign(args) => cmd_sign(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Game(args) => cmd_game(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

fn make_rng(seed: Option<u64>) -> ChaCha20Rng {
    match seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_entropy(),
    }
}

fn parse_profile_flag(token: &str) -> Result<PrimitiveProfile, CliError> {
    PrimitiveProfile::from_token(token)
        .map_err(|_| CliError::Usage(format!("unknown profile {token:?}")))
}

fn parse_scheme_flag(token: &str) -> Result<SchemeId, CliError> {
    SchemeId::from_token(token)
        .ok_or_else(|| CliError::Usage(format!("unknown scheme {token:?}")))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::File(format!("cannot read {}: {e}", path.display())))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::File(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::File(format!("cannot write {}: {e}", path.display())))
}

fn load_params_file(path: &Path) -> Result<ParamsFile, CliError> {
    let text = read_text(path)?;
    let file = parse_params_file(&text)
        .map_err(|e| CliError::File(format!("{}: {e}", path.display())))?;
    let report = file.params.validate();
    if !report.is_valid() {
        return Err(CliError::File(format!(
            "{}: invalid group parameters: {report}",
            path.display()
        )));
    }
    Ok(file)
}

fn load_key_file(path: &Path) -> Result<KeyFile, CliError> {
    let text = read_text(path)?;
    let file =
        parse_key_file(&text).map_err(|e| CliError::File(format!("{}: {e}", path.display())))?;
    let report = file.params.validate();
    if !report.is_valid() {
        return Err(CliError::File(format!(
            "{}: invalid group parameters: {report}",
            path.display()
        )));
    }
    Ok(file)
}

fn require_role(file: &KeyFile, path: &Path, role: KeyRole) -> Result<(), CliError> {
    if file.role != role {
        return Err(CliError::File(format!(
            "{}: expected a {} key, found {}",
            path.display(),
            role.token(),
            file.role.token()
        )));
    }
    Ok(())
}

fn require_private(file: &KeyFile, path: &Path) -> Result<BigUint, CliError> {
    file.private_exponent.clone().ok_or_else(|| {
        CliError::File(format!(
            "{}: this operation needs a private key file",
            path.display()
        ))
    })
}

fn private_scalar(file: &KeyFile, path: &Path) -> Result<RandomScalar, CliError> {
    let x = require_private(file, path)?;
    RandomScalar::new(x, file.params.q())
        .map_err(|e| CliError::File(format!("{}: private exponent out of range: {e}", path.display())))
}

/// The file-pair preflight for signcrypt/unsigncrypt: identical scheme,
/// profile, and group, all matching the --scheme flag.
fn check_key_pair(
    scheme: SchemeId,
    a: (&KeyFile, &Path),
    b: (&KeyFile, &Path),
) -> Result<(), CliError> {
    for (file, path) in [a, b] {
        if file.scheme_token != scheme.token() {
            return Err(CliError::File(format!(
                "{}: scheme token {} does not match --scheme {}",
                path.display(),
                file.scheme_token,
                scheme.token()
            )));
        }
    }
    if a.0.params != b.0.params {
        return Err(CliError::File(
            "key files use different group parameters".to_string(),
        ));
    }
    if a.0.profile_token != b.0.profile_token {
        return Err(CliError::File(
            "key files use different primitive profiles".to_string(),
        ));
    }
    Ok(())
}

fn map_scheme_error(err: SchemeError) -> CliError {
    match err {
        SchemeError::RetryBudgetExhausted(budget) => CliError::Retry(format!(
            "signcryption retry budget exhausted after {budget} attempts"
        )),
        other => CliError::File(format!("invalid cryptographic input: {other}")),
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_paramgen(args: ParamgenArgs) -> Result<(), CliError> {
    let profile = parse_profile_flag(&args.profile)?;
    let mut rng = make_rng(args.seed);
    let params = generate_params(args.p_bits, args.q_bits, &mut rng).map_err(|e| match e {
        GroupError::BitLengthTooSmall(_) | GroupError::BadQBitLength { .. } => {
            CliError::Usage(e.to_string())
        }
        GroupError::RetryBudgetExhausted(_) => CliError::Generation(e.to_string()),
        other => CliError::Generation(other.to_string()),
    })?;
    let file = ParamsFile {
        profile_token: profile.token().to_string(),
        params,
    };
    let text = serialize_params_file(&file);
    write_file(&args.out, &text)?;
    println!("fingerprint {}", fingerprint(&text));
    Ok(())
}

fn cmd_keygen(args: KeygenArgs) -> Result<(), CliError> {
    let role = KeyRole::from_token(&args.role)
        .ok_or_else(|| CliError::Usage(format!("unknown role {:?}", args.role)))?;
    let params_file = load_params_file(&args.params)?;
    let params = &params_file.params;
    let mut rng = make_rng(args.seed);

    #[cfg(debug_assertions)]
    let forced: Option<u64> = args.force_exponent;
    #[cfg(not(debug_assertions))]
    let forced: Option<u64> = None;
    let forced_scalar = forced
        .map(|x| {
            RandomScalar::new(BigUint::from(x), params.q())
                .map_err(|e| CliError::Usage(format!("--force-exponent out of range: {e}")))
        })
        .transpose()?;

    let (public_element, private_exponent, scheme_token) = match role {
        KeyRole::Schnorr => {
            if args.scheme != SCHNORR_SIG_TOKEN {
                return Err(CliError::Usage(format!(
                    "role schnorr requires --scheme {SCHNORR_SIG_TOKEN}"
                )));
            }
            let keypair = match forced_scalar {
                Some(x) => SchnorrKeyPair::from_private(params, x),
                None => SchnorrKeyPair::generate(params, &mut rng),
            };
            (
                keypair.public().clone(),
                keypair.private().value().clone(),
                SCHNORR_SIG_TOKEN.to_string(),
            )
        }
        KeyRole::Sender => {
            let scheme = parse_scheme_flag(&args.scheme)?;
            let keys = match forced_scalar {
                Some(x) => sender_from_private(scheme, params, x),
                None => keygen_sender(scheme, params, &mut rng),
            };
            (
                keys.public_element().clone(),
                keys.private_scalar().value().clone(),
                scheme.token().to_string(),
            )
        }
        KeyRole::Receiver => {
            let scheme = parse_scheme_flag(&args.scheme)?;
            let keys = match forced_scalar {
                Some(x) => receiver_from_private(scheme, params, x),
                None => keygen_receiver(scheme, params, &mut rng),
            };
            (
                keys.public_element().clone(),
                keys.private_scalar().value().clone(),
                scheme.token().to_string(),
            )
        }
    };

    let private_file = KeyFile {
        role,
        scheme_token: scheme_token.clone(),
        profile_token: params_file.profile_token.clone(),
        params: params.clone(),
        public_element: public_element.clone(),
        private_exponent: Some(private_exponent),
    };
    let public_file = KeyFile {
        private_exponent: None,
        ..private_file.clone()
    };
    write_file(&args.private_out, serialize_key_file(&private_file))?;
    write_file(&args.public_out, serialize_key_file(&public_file))?;
    println!(
        "fingerprint {}",
        fingerprint(&serialize_key_file(&public_file))
    );
    Ok(())
}

fn cmd_signcrypt(args: SigncryptArgs) -> Result<(), CliError> {
    let scheme = parse_scheme_flag(&args.scheme)?;
    let sender_file = load_key_file(&args.sender_key)?;
    let receiver_file = load_key_file(&args.receiver_key)?;
    require_role(&sender_file, &args.sender_key, KeyRole::Sender)?;
    require_role(&receiver_file, &args.receiver_key, KeyRole::Receiver)?;
    check_key_pair(
        scheme,
        (&sender_file, &args.sender_key),
        (&receiver_file, &args.receiver_key),
    )?;
    let profile = PrimitiveProfile::from_token(&sender_file.profile_token)
        .map_err(|e| CliError::File(e.to_string()))?;

    let x = private_scalar(&sender_file, &args.sender_key)?;
    let sender: SenderKeys = sender_from_private(scheme, &sender_file.params, x);
    if sender.public_element() != &sender_file.public_element {
        return Err(CliError::File(format!(
            "{}: public element does not match the private exponent",
            args.sender_key.display()
        )));
    }

    let message = read_bytes(&args.input)?;
    let mut rng = make_rng(args.seed);

    #[cfg(debug_assertions)]
    let forced_nonce: Option<u64> = args.force_nonce;
    #[cfg(not(debug_assertions))]
    let forced_nonce: Option<u64> = None;
    let nonce_scalar = forced_nonce
        .map(|x| {
            RandomScalar::new(BigUint::from(x), sender_file.params.q())
                .map_err(|e| CliError::Usage(format!("--force-nonce out of range: {e}")))
        })
        .transpose()?;

    let payload = match &nonce_scalar {
        Some(nonce) => {
            let overrides = SigncryptOverrides {
                nonce: Some(nonce),
                ..Default::default()
            };
            signcrypt_observed(
                scheme,
                &sender_file.params,
                &profile,
                &sender,
                &receiver_file.public_element,
                &message,
                &mut rng,
                &overrides,
                &NoObserver,
            )
            .map(|(ct, _)| ct)
        }
        None => signcrypt(
            scheme,
            &sender_file.params,
            &profile,
            &sender,
            &receiver_file.public_element,
            &message,
            &mut rng,
        ),
    }
    .map_err(map_scheme_error)?;

    let file = CiphertextFile {
        scheme_token: scheme.token().to_string(),
        profile_token: sender_file.profile_token.clone(),
        payload,
    };
    write_file(&args.out, serialize_ciphertext_file(&file))
}

fn cmd_unsigncrypt(args: UnsigncryptArgs) -> Result<(), CliError> {
    let scheme = parse_scheme_flag(&args.scheme)?;
    let receiver_file = load_key_file(&args.receiver_key)?;
    let sender_file = load_key_file(&args.sender_key)?;
    require_role(&receiver_file, &args.receiver_key, KeyRole::Receiver)?;
    require_role(&sender_file, &args.sender_key, KeyRole::Sender)?;
    check_key_pair(
        scheme,
        (&receiver_file, &args.receiver_key),
        (&sender_file, &args.sender_key),
    )?;

    let ct_text = read_text(&args.input)?;
    let ct_file = parse_ciphertext_file(&ct_text)
        .map_err(|e| CliError::File(format!("{}: {e}", args.input.display())))?;
    if ct_file.scheme_token != scheme.token() {
        return Err(CliError::File(format!(
            "{}: ciphertext scheme token {} does not match --scheme {}",
            args.input.display(),
            ct_file.scheme_token,
            scheme.token()
        )));
    }
    if ct_file.profile_token != receiver_file.profile_token {
        return Err(CliError::File(format!(
            "{}: ciphertext profile does not match the key files",
            args.input.display()
        )));
    }
    let profile = PrimitiveProfile::from_token(&receiver_file.profile_token)
        .map_err(|e| CliError::File(e.to_string()))?;

    let x = private_scalar(&receiver_file, &args.receiver_key)?;
    let receiver: ReceiverKeys = receiver_from_private(scheme, &receiver_file.params, x);
    if receiver.public_element() != &receiver_file.public_element {
        return Err(CliError::File(format!(
            "{}: public element does not match the private exponent",
            args.receiver_key.display()
        )));
    }

    let outcome = unsigncrypt(
        scheme,
        &receiver_file.params,
        &profile,
        &receiver,
        &sender_file.public_element,
        &ct_file.payload,
    )
    .map_err(map_scheme_error)?;

    match outcome {
        UnsigncryptOutcome::Accepted(message) => {
            write_file(&args.out, message)?;
            println!("ACCEPT");
            Ok(())
        }
        UnsigncryptOutcome::Rejected => {
            Err(CliError::Rejected("tag mismatch: message rejected".to_string()))
        }
    }
}

fn cmd_sign(args: SignArgs) -> Result<(), CliError> {
    let key_file = load_key_file(&args.key)?;
    require_role(&key_file, &args.key, KeyRole::Schnorr)?;
    let profile = PrimitiveProfile::from_token(&key_file.profile_token)
        .map_err(|e| CliError::File(e.to_string()))?;
    let x = private_scalar(&key_file, &args.key)?;
    let keypair = SchnorrKeyPair::from_private(&key_file.params, x);
    if keypair.public() != &key_file.public_element {
        return Err(CliError::File(format!(
            "{}: public element does not match the private exponent",
            args.key.display()
        )));
    }

    let message = read_bytes(&args.input)?;
    let mut rng = make_rng(args.seed);
    let signature = sign(&key_file.params, &keypair, &message, &mut rng, &profile);
    let file = SignatureFile {
        profile_token: key_file.profile_token.clone(),
        signature,
    };
    write_file(&args.sig, serialize_signature_file(&file))
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let key_file = load_key_file(&args.key)?;
    require_role(&key_file, &args.key, KeyRole::Schnorr)?;
    let profile = PrimitiveProfile::from_token(&key_file.profile_token)
        .map_err(|e| CliError::File(e.to_string()))?;

    let sig_text = read_text(&args.sig)?;
    let sig_file = parse_signature_file(&sig_text)
        .map_err(|e| CliError::File(format!("{}: {e}", args.sig.display())))?;
    if sig_file.profile_token != key_file.profile_token {
        return Err(CliError::File(
            "signature profile does not match the key file".to_string(),
        ));
    }

    let message = read_bytes(&args.input)?;
    if verify(
        &key_file.params,
        &key_file.public_element,
        &message,
        &sig_file.signature,
        &profile,
    ) {
        println!("VERIFIED");
        Ok(())
    } else {
        Err(CliError::Rejected("signature rejected".to_string()))
    }
}

fn cmd_game(args: GameArgs) -> Result<(), CliError> {
    let scheme = parse_scheme_flag(&args.scheme)?;
    let setting = Setting::from_token(&args.setting)
        .ok_or_else(|| CliError::Usage(format!("unknown setting {:?}", args.setting)))?;
    let position = Position::from_token(&args.position)
        .ok_or_else(|| CliError::Usage(format!("unknown position {:?}", args.position)))?;
    let profile = parse_profile_flag(&args.profile)?;
    if builtin_adversary(&args.adversary).is_none() {
        return Err(CliError::Usage(format!(
            "unknown adversary {:?} (built-ins: {})",
            args.adversary,
            BUILTIN_ADVERSARIES.join(", ")
        )));
    }
    if args.runs == 0 {
        return Err(CliError::Usage("--runs must be at least 1".to_string()));
    }

    let mut config = GameConfig::new(scheme, setting, position);
    config.query_budget = args.budget;
    config.p_bits = args.p_bits;
    config.q_bits = args.q_bits;
    config.profile = profile;
    config.sabotage = args.sabotage;

    let mut wins = 0u64;
    let mut faults = 0u64;
    let mut executed_queries = 0u64;
    let mut forbidden = 0u64;
    for i in 0..args.runs {
        let mut adversary =
            builtin_adversary(&args.adversary).expect("existence checked above");
        let transcript =
            run_confidentiality_game(&config, adversary.as_mut(), run_seed(args.seed, i as u64))
                .map_err(|e| match e {
                    GameError::Group(inner) => CliError::Generation(inner.to_string()),
                    GameError::Scheme(inner) => CliError::Generation(inner.to_string()),
                })?;
        if args.transcript {
            for query in &transcript.queries {
                println!("QUERY {} {}", query.tag, query.digest);
            }
            match (transcript.challenge_bit, transcript.guess) {
                (Some(b), Some(guess)) => {
                    println!("RESULT b={b} guess={guess} win={}", u8::from(transcript.win));
                }
                _ => println!("RESULT fault win=0"),
            }
        }
        if transcript.win {
            wins += 1;
        }
        if let Some(fault) = &transcript.fault {
            faults += 1;
            eprintln!("run {i}: adversary fault: {fault}");
        }
        executed_queries += transcript.queries.len() as u64;
        forbidden += transcript.forbidden_query_attempts as u64;
    }

    let rate = wins as f64 / args.runs as f64;
    println!(
        "game scheme={} setting={} position={} adversary={} sabotage={}",
        scheme.token(),
        setting.token(),
        position.token(),
        args.adversary,
        args.sabotage
    );
    println!("runs {}", args.runs);
    println!("wins {wins}");
    println!("win_rate {rate:.4}");
    println!("faults {faults}");
    println!("executed_queries {executed_queries}");
    println!("forbidden_query_attempts {forbidden}");
    Ok(())
}

fn parse_list<T: std::str::FromStr>(raw: &str, what: &str) -> Result<Vec<T>, CliError> {
    raw.split(',')
        .map(|part| part.trim())
        .filter(|part| !part.is_empty())
        .map(|part| {
            part.parse::<T>()
                .map_err(|_| CliError::Usage(format!("invalid {what} entry {part:?}")))
        })
        .collect()
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    let profile = parse_profile_flag(&args.profile)?;
    let schemes: Vec<SchemeId> = args
        .schemes
        .split(',')
        .map(|part| part.trim())
        .filter(|part| !part.is_empty())
        .map(|part| parse_scheme_flag(part))
        .collect::<Result<_, _>>()?;
    if schemes.is_empty() {
        return Err(CliError::Usage("no schemes selected".to_string()));
    }
    let sizes: Vec<usize> = parse_list(&args.sizes, "size")?;
    if sizes.is_empty() {
        return Err(CliError::Usage("no sizes selected".to_string()));
    }
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".to_string()));
    }

    let mut rng = make_rng(args.seed);
    let params: GroupParams =
        generate_params(args.p_bits, args.q_bits, &mut rng).map_err(|e| match e {
            GroupError::BitLengthTooSmall(_) | GroupError::BadQBitLength { .. } => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Generation(other.to_string()),
        })?;
    let bench_seed = args.seed.unwrap_or_else(|| rng.next_u64());

    let mut ops_rows = Vec::new();
    for &scheme in &schemes {
        let ops = count_ops(scheme, &params, &profile, bench_seed).map_err(map_scheme_error)?;
        ops_rows.push((scheme.token().to_string(), ops));
    }
    ops_rows.push((
        "baseline".to_string(),
        count_baseline_ops(&params, &profile, bench_seed),
    ));

    let mut expansion_rows = Vec::new();
    for &scheme in &schemes {
        for &size in &sizes {
            let report = measure_expansion(scheme, &params, &profile, size, bench_seed)
                .map_err(map_scheme_error)?;
            expansion_rows.push((scheme.token().to_string(), report));
        }
    }

    let timing_rows =
        time_schemes(&params, &profile, args.trials, sizes[0], bench_seed).map_err(map_scheme_error)?;

    if args.csv {
        println!("kind,subject,name,value");
        for (subject, ops) in &ops_rows {
            for (phase, counts) in [("sender", ops.sender), ("receiver", ops.receiver)] {
                println!("ops,{subject},{phase}_mod_exps,{}", counts.mod_exps);
                println!("ops,{subject},{phase}_mod_muls,{}", counts.mod_muls);
                println!("ops,{subject},{phase}_mod_invs,{}", counts.mod_invs);
                println!("ops,{subject},{phase}_hash_calls,{}", counts.hash_calls);
            }
        }
        for (subject, report) in &expansion_rows {
            println!(
                "expansion,{subject},overhead_bytes_at_{},{}",
                report.plaintext_bytes, report.overhead_bytes
            );
        }
        for (_, report) in expansion_rows.iter().take(sizes.len()) {
            println!(
                "expansion,baseline,overhead_bytes_at_{},{}",
                report.plaintext_bytes, report.baseline_overhead_bytes
            );
        }
        for row in &timing_rows {
            println!(
                "timing,{},{}_median_ns,{}",
                row.subject, row.phase, row.median_nanos
            );
        }
        return Ok(());
    }

    println!(
        "bench p_bits={} q_bits={} profile={} trials={}",
        args.p_bits,
        args.q_bits,
        profile.token(),
        args.trials
    );
    println!();
    println!("operation counts (per run)");
    println!("{:<12} {:<9} {:>4} {:>4} {:>4} {:>5}", "subject", "phase", "exp", "mul", "inv", "hash");
    for (subject, ops) in &ops_rows {
        for (phase, counts) in [("sender", ops.sender), ("receiver", ops.receiver)] {
            println!(
                "{:<12} {:<9} {:>4} {:>4} {:>4} {:>5}",
                subject, phase, counts.mod_exps, counts.mod_muls, counts.mod_invs, counts.hash_calls
            );
        }
    }
    println!();
    println!("message expansion (headerless bytes)");
    println!("{:<12} {:>10} {:>9} {:>17}", "subject", "plaintext", "overhead", "baseline overhead");
    for (subject, report) in &expansion_rows {
        println!(
            "{:<12} {:>10} {:>9} {:>17}",
            subject, report.plaintext_bytes, report.overhead_bytes, report.baseline_overhead_bytes
        );
    }
    println!();
    println!("wall-clock medians ({} trials, {}-byte messages)", args.trials, sizes[0]);
    println!("{:<12} {:<15} {:>12}", "subject", "phase", "median_ns");
    for row in &timing_rows {
        println!("{:<12} {:<15} {:>12}", row.subject, row.phase, row.median_nanos);
    }
    Ok(())
}
