//! Executable confidentiality games and forgery probes.
//!
//! The games instantiate the standard two-stage IND-CCA2 experiment for
//! signcryption: the harness runs setup and key generation, stage 1 of the
//! adversary asks oracle queries and outputs two equal-length messages,
//! the harness flips a bit and signcrypts the chosen message into the
//! challenge, and stage 2 guesses the bit under the classic restriction
//! that the exact pair (sender public key, challenge ciphertext) may not be
//! queried to the unsigncryption oracle.
//!
//! Settings: `TwoUser` pins both oracle keys to the fixed pair; `MultiUser`
//! accepts adversary-chosen keys after validating subgroup membership.
//! Positions: an `Outsider` knows only public keys and gets both oracles;
//! an `Insider` supplies the sender key pair itself (the challenge is built
//! from it) and gets only the unsigncryption oracle.
//!
//! The shipped adversaries validate the harness, not the schemes: a null
//! guesser for the coin-flip baseline, a restriction tester that proves the
//! forbidden query is blocked, and a sabotage exploiter that wins only when
//! the deliberately broken scheme variant (all-zero cipher key) is in
//! force. Faulting adversaries lose: every fault is recorded on the
//! transcript and scored as a loss, which keeps win statistics
//! conservative.

use crate::group::{generate_params, is_valid_public_key, GroupError, GroupParams};
use crate::observe::NoObserver;
use crate::primitives::{sym_decrypt, tag_to_scalar, PrimitiveProfile, TagReduction};
use crate::schemes::{
    cipher_body_for_shared, keygen_receiver, keygen_sender, recover_dh, signcrypt_observed,
    unsigncrypt_observed, ReceiverKeys, SchemeError, SchemeId, SenderKeys, SigncryptOverrides,
    SigncryptText, UnsigncryptOutcome, UnsigncryptOverrides,
};
use num_bigint::{BigUint, RandBigInt};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GameError {
    #[error("harness setup failed: {0}")]
    Group(#[from] GroupError),
    #[error("harness challenge construction failed: {0}")]
    Scheme(#[from] SchemeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Setting {
    TwoUser,
    MultiUser,
}

impl Setting {
    pub fn token(self) -> &'static str {
        match self {
            Setting::TwoUser => "two-user",
            Setting::MultiUser => "multi-user",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        match token {
            "two-user" => Some(Setting::TwoUser),
            "multi-user" => Some(Setting::MultiUser),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    Outsider,
    Insider,
}

impl Position {
    pub fn token(self) -> &'static str {
        match self {
            Position::Outsider => "outsider",
            Position::Insider => "insider",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        match token {
            "outsider" => Some(Position::Outsider),
            "insider" => Some(Position::Insider),
            _ => None,
        }
    }
}

pub const DEFAULT_QUERY_BUDGET: u32 = 256;

#[derive(Debug, Clone)]
pub struct GameConfig {
    pub scheme: SchemeId,
    pub setting: Setting,
    pub position: Position,
    /// Maximum oracle calls per stage.
    pub query_budget: u32,
    pub p_bits: u64,
    pub q_bits: u64,
    pub profile: PrimitiveProfile,
    /// Run the deliberately broken scheme variant (all-zero cipher key).
    pub sabotage: bool,
}

impl GameConfig {
    pub fn new(scheme: SchemeId, setting: Setting, position: Position) -> Self {
        Self {
            scheme,
            setting,
            position,
            query_budget: DEFAULT_QUERY_BUDGET,
            p_bits: 64,
            q_bits: 32,
            profile: PrimitiveProfile::modern_default(),
            sabotage: false,
        }
    }
}

/// Everything the adversary is allowed to see. Owns its data so adversaries
/// can stash it in their state.
#[derive(Debug, Clone)]
pub struct PublicView {
    pub scheme: SchemeId,
    pub setting: Setting,
    pub position: Position,
    pub sabotage: bool,
    pub params: GroupParams,
    pub profile: PrimitiveProfile,
    /// The sender's public key. `None` during an insider stage 1, where the
    /// adversary itself has not yet announced the sender pair.
    pub sender_pub: Option<BigUint>,
    pub receiver_pub: BigUint,
}

/// Why an oracle declined to answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DenialReason {
    /// Per-stage query budget spent.
    BudgetExhausted,
    /// Two-user setting: the key is not the pinned one.
    KeyNotPinned,
    /// Multi-user setting: the supplied key failed subgroup validation.
    InvalidKey,
    /// Stage 2 replay of the exact (sender key, challenge) pair.
    ForbiddenChallengeQuery,
    /// Insider games have no signcryption oracle.
    NoSigncryptionOracle,
    /// The query was structurally malformed (tag length, s range).
    MalformedCiphertext,
    /// The scheme itself failed (retry budget); practically unreachable.
    SchemeFailure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleReply {
    Signcrypted(SigncryptText),
    Unsigncrypted(UnsigncryptOutcome),
    Denied(DenialReason),
}

/// One executed oracle query (denied queries are not recorded; blocked
/// challenge replays are counted separately).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryRecord {
    pub stage: u8,
    pub tag: &'static str,
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameTranscript {
    pub queries: Vec<QueryRecord>,
    pub challenge_bit: Option<u8>,
    pub guess: Option<u8>,
    pub win: bool,
    pub forbidden_query_attempts: u32,
    pub fault: Option<String>,
}

/// Adversary-side failure; scored as a loss.
#[derive(Debug, Clone)]
pub struct AdversaryFault(pub String);

#[derive(Debug)]
pub struct Stage1Output {
    pub m0: Vec<u8>,
    pub m1: Vec<u8>,
    /// Opaque state handed back to stage 2.
    pub state: Vec<u8>,
    /// Insider games: the attacked sender key pair. Ignored for outsiders.
    pub sender_keys: Option<SenderKeys>,
}

pub trait Adversary {
    fn stage1(
        &mut self,
        view: &PublicView,
        oracles: &mut Oracles,
        rng: &mut dyn RngCore,
    ) -> Result<Stage1Output, AdversaryFault>;

    fn stage2(
        &mut self,
        view: &PublicView,
        challenge: &SigncryptText,
        state: &[u8],
        oracles: &mut Oracles,
        rng: &mut dyn RngCore,
    ) -> Result<u8, AdversaryFault>;
}

/// The oracle front end handed to adversaries. Owns the private keys; they
/// are not reachable through any public method.
pub struct Oracles {
    scheme: SchemeId,
    setting: Setting,
    profile: PrimitiveProfile,
    params: GroupParams,
    sender: Option<SenderKeys>,
    receiver: ReceiverKeys,
    pinned_sender_pub: Option<BigUint>,
    pinned_receiver_pub: BigUint,
    sabotage: bool,
    stage: u8,
    queries_this_stage: u32,
    query_budget: u32,
    challenge: Option<(BigUint, SigncryptText)>,
    forbidden_query_attempts: u32,
    executed_queries: u64,
    events: Vec<QueryRecord>,
    rng: ChaCha20Rng,
}

impl Oracles {
    #[allow(clippy::too_many_arguments)]
    fn new(
        config: &GameConfig,
        params: GroupParams,
        sender: Option<SenderKeys>,
        receiver: ReceiverKeys,
        rng: ChaCha20Rng,
    ) -> Self {
        let pinned_sender_pub = sender.as_ref().map(|s| s.public_element().clone());
        let pinned_receiver_pub = receiver.public_element().clone();
        Self {
            scheme: config.scheme,
            setting: config.setting,
            profile: config.profile.clone(),
            params,
            sender,
            receiver,
            pinned_sender_pub,
            pinned_receiver_pub,
            sabotage: config.sabotage,
            stage: 1,
            queries_this_stage: 0,
            query_budget: config.query_budget,
            challenge: None,
            forbidden_query_attempts: 0,
            executed_queries: 0,
            events: Vec::new(),
            rng,
        }
    }

    fn begin_stage2(&mut self, challenge_sender_pub: BigUint, challenge: SigncryptText) {
        self.stage = 2;
        self.queries_this_stage = 0;
        if self.setting == Setting::TwoUser && self.pinned_sender_pub.is_none() {
            // Insider two-user: the announced sender key becomes the pin.
            self.pinned_sender_pub = Some(challenge_sender_pub.clone());
        }
        self.challenge = Some((challenge_sender_pub, challenge));
    }

    pub fn stage(&self) -> u8 {
        self.stage
    }

    pub fn queries_remaining(&self) -> u32 {
        self.query_budget.saturating_sub(self.queries_this_stage)
    }

    pub fn forbidden_query_attempts(&self) -> u32 {
        self.forbidden_query_attempts
    }

    /// Signcryption oracle: the honest sender signcrypts `message` to
    /// `receiver_pub`. Not available to insiders.
    pub fn signcrypt(&mut self, receiver_pub: &BigUint, message: &[u8]) -> OracleReply {
        let Some(sender) = self.sender.as_ref() else {
            return OracleReply::Denied(DenialReason::NoSigncryptionOracle);
        };
        if self.queries_this_stage >= self.query_budget {
            return OracleReply::Denied(DenialReason::BudgetExhausted);
        }
        match self.setting {
            Setting::TwoUser => {
                if receiver_pub != &self.pinned_receiver_pub {
                    return OracleReply::Denied(DenialReason::KeyNotPinned);
                }
            }
            Setting::MultiUser => {
                if !is_valid_public_key(&self.params, receiver_pub) {
                    return OracleReply::Denied(DenialReason::InvalidKey);
                }
            }
        }
        let overrides = SigncryptOverrides {
            zero_cipher_key: self.sabotage,
            ..Default::default()
        };
        let result = signcrypt_observed(
            self.scheme,
            &self.params,
            &self.profile,
            sender,
            receiver_pub,
            message,
            &mut self.rng,
            &overrides,
            &NoObserver,
        );
        let ct = match result {
            Ok((ct, _)) => ct,
            Err(_) => return OracleReply::Denied(DenialReason::SchemeFailure),
        };
        self.queries_this_stage += 1;
        self.executed_queries += 1;
        self.events.push(QueryRecord {
            stage: self.stage,
            tag: "SC",
            digest: signcrypt_query_digest(receiver_pub, message),
        });
        OracleReply::Signcrypted(ct)
    }

    /// Unsigncryption oracle: the honest receiver unsigncrypts `ct` under
    /// claimed sender key `sender_pub`.
    pub fn unsigncrypt(&mut self, sender_pub: &BigUint, ct: &SigncryptText) -> OracleReply {
        if self.queries_this_stage >= self.query_budget {
            return OracleReply::Denied(DenialReason::BudgetExhausted);
        }
        if self.stage == 2 {
            if let Some((chal_pk, chal_ct)) = &self.challenge {
                if sender_pub == chal_pk && ct == chal_ct {
                    self.forbidden_query_attempts += 1;
                    return OracleReply::Denied(DenialReason::ForbiddenChallengeQuery);
                }
            }
        }
        match self.setting {
            Setting::TwoUser => match &self.pinned_sender_pub {
                Some(pin) => {
                    if sender_pub != pin {
                        return OracleReply::Denied(DenialReason::KeyNotPinned);
                    }
                }
                // Insider stage 1: no sender key exists yet; accept any
                // valid group element as the claimed sender.
                None => {
                    if !is_valid_public_key(&self.params, sender_pub) {
                        return OracleReply::Denied(DenialReason::InvalidKey);
                    }
                }
            },
            Setting::MultiUser => {
                if !is_valid_public_key(&self.params, sender_pub) {
                    return OracleReply::Denied(DenialReason::InvalidKey);
                }
            }
        }
        let overrides = UnsigncryptOverrides {
            zero_cipher_key: self.sabotage,
        };
        let outcome = match unsigncrypt_observed(
            self.scheme,
            &self.params,
            &self.profile,
            &self.receiver,
            sender_pub,
            ct,
            &overrides,
            &NoObserver,
        ) {
            Ok((outcome, _)) => outcome,
            Err(_) => return OracleReply::Denied(DenialReason::MalformedCiphertext),
        };
        self.queries_this_stage += 1;
        self.executed_queries += 1;
        self.events.push(QueryRecord {
            stage: self.stage,
            tag: "USC",
            digest: unsigncrypt_query_digest(sender_pub, ct),
        });
        OracleReply::Unsigncrypted(outcome)
    }
}

fn hash_chunks(domain: &str, chunks: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    h.update(domain.as_bytes());
    for chunk in chunks {
        h.update((chunk.len() as u64).to_be_bytes());
        h.update(chunk);
    }
    hex::encode(h.finalize())
}

fn signcrypt_query_digest(receiver_pub: &BigUint, message: &[u8]) -> String {
    hash_chunks("sckit-query-sc", &[&receiver_pub.to_bytes_be(), message])
}

fn unsigncrypt_query_digest(sender_pub: &BigUint, ct: &SigncryptText) -> String {
    hash_chunks(
        "sckit-query-usc",
        &[&sender_pub.to_bytes_be(), &ct.r, &ct.s.to_bytes_be(), &ct.c],
    )
}

fn sub_seed(master: u64, label: &str, index: u64) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(b"sckit-game-seed");
    h.update(label.as_bytes());
    h.update(master.to_be_bytes());
    h.update(index.to_be_bytes());
    h.finalize().into()
}

/// Runs one full confidentiality game. Fully deterministic for a given
/// `(config, adversary, seed)`.
pub fn run_confidentiality_game(
    config: &GameConfig,
    adversary: &mut dyn Adversary,
    seed: u64,
) -> Result<GameTranscript, GameError> {
    let mut harness_rng = ChaCha20Rng::from_seed(sub_seed(seed, "harness", 0));
    let mut adversary_rng = ChaCha20Rng::from_seed(sub_seed(seed, "adversary", 0));
    let oracle_rng = ChaCha20Rng::from_seed(sub_seed(seed, "oracle", 0));

    let params = generate_params(config.p_bits, config.q_bits, &mut harness_rng)?;
    let receiver = keygen_receiver(config.scheme, &params, &mut harness_rng);
    let harness_sender = match config.position {
        Position::Outsider => Some(keygen_sender(config.scheme, &params, &mut harness_rng)),
        Position::Insider => None,
    };

    let mut oracles = Oracles::new(
        config,
        params.clone(),
        harness_sender.clone(),
        receiver.clone(),
        oracle_rng,
    );

    let view1 = PublicView {
        scheme: config.scheme,
        setting: config.setting,
        position: config.position,
        sabotage: config.sabotage,
        params: params.clone(),
        profile: config.profile.clone(),
        sender_pub: harness_sender
            .as_ref()
            .map(|s| s.public_element().clone()),
        receiver_pub: receiver.public_element().clone(),
    };

    let finish_fault = |oracles: Oracles, fault: String| GameTranscript {
        queries: oracles.events,
        challenge_bit: None,
        guess: None,
        win: false,
        forbidden_query_attempts: oracles.forbidden_query_attempts,
        fault: Some(fault),
    };

    let stage1 = match adversary.stage1(&view1, &mut oracles, &mut adversary_rng) {
        Ok(out) => out,
        Err(AdversaryFault(msg)) => {
            return Ok(finish_fault(oracles, format!("stage1 fault: {msg}")))
        }
    };

    if stage1.m0.len() != stage1.m1.len() {
        return Ok(finish_fault(
            oracles,
            format!(
                "message length mismatch: {} vs {}",
                stage1.m0.len(),
                stage1.m1.len()
            ),
        ));
    }

    let challenge_sender = match config.position {
        Position::Outsider => harness_sender.clone().expect("outsider harness sender"),
        Position::Insider => match stage1.sender_keys {
            Some(keys) => {
                if keys.convention() != config.scheme.convention() {
                    return Ok(finish_fault(
                        oracles,
                        "insider sender keys use the wrong convention".to_string(),
                    ));
                }
                keys
            }
            None => {
                return Ok(finish_fault(
                    oracles,
                    "insider adversary supplied no sender keys".to_string(),
                ))
            }
        },
    };

    let challenge_bit = (harness_rng.next_u32() & 1) as u8;
    let chosen = if challenge_bit == 0 {
        &stage1.m0
    } else {
        &stage1.m1
    };
    let challenge_overrides = SigncryptOverrides {
        zero_cipher_key: config.sabotage,
        ..Default::default()
    };
    let (challenge_ct, _) = signcrypt_observed(
        config.scheme,
        &params,
        &config.profile,
        &challenge_sender,
        receiver.public_element(),
        chosen,
        &mut harness_rng,
        &challenge_overrides,
        &NoObserver,
    )?;

    let challenge_sender_pub = challenge_sender.public_element().clone();
    oracles.begin_stage2(challenge_sender_pub.clone(), challenge_ct.clone());

    let view2 = PublicView {
        sender_pub: Some(challenge_sender_pub),
        ..view1
    };

    let guess = match adversary.stage2(
        &view2,
        &challenge_ct,
        &stage1.state,
        &mut oracles,
        &mut adversary_rng,
    ) {
        Ok(bit) => bit,
        Err(AdversaryFault(msg)) => {
            return Ok(finish_fault(oracles, format!("stage2 fault: {msg}")))
        }
    };
    if guess > 1 {
        return Ok(finish_fault(oracles, format!("guess out of range: {guess}")));
    }

    Ok(GameTranscript {
        queries: oracles.events,
        challenge_bit: Some(challenge_bit),
        guess: Some(guess),
        win: guess == challenge_bit,
        forbidden_query_attempts: oracles.forbidden_query_attempts,
        fault: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BatchStats {
    pub runs: u32,
    pub wins: u32,
    pub faults: u32,
    pub executed_queries: u64,
    pub forbidden_query_attempts: u64,
}

impl BatchStats {
    pub fn win_rate(&self) -> f64 {
        if self.runs == 0 {
            return 0.0;
        }
        self.wins as f64 / self.runs as f64
    }
}

/// Seed for run `index` of a batch, derived from the master seed so runs
/// are independent and the whole batch is reproducible.
pub fn run_seed(master_seed: u64, index: u64) -> u64 {
    let bytes = sub_seed(master_seed, "run", index);
    u64::from_be_bytes(bytes[..8].try_into().expect("seed slice"))
}

pub fn run_game_batch(
    config: &GameConfig,
    mut adversary_factory: impl FnMut() -> Box<dyn Adversary>,
    master_seed: u64,
    runs: u32,
) -> Result<BatchStats, GameError> {
    let mut stats = BatchStats::default();
    for i in 0..runs {
        let mut adversary = adversary_factory();
        let transcript =
            run_confidentiality_game(config, adversary.as_mut(), run_seed(master_seed, i as u64))?;
        stats.runs += 1;
        if transcript.win {
            stats.wins += 1;
        }
        if transcript.fault.is_some() {
            stats.faults += 1;
        }
        stats.executed_queries += transcript.queries.len() as u64;
        stats.forbidden_query_attempts += transcript.forbidden_query_attempts as u64;
    }
    Ok(stats)
}

// ---------------------------------------------------------------------------
// Built-in adversaries
// ---------------------------------------------------------------------------

/// Makes no queries and guesses a uniformly random bit: the coin-flip
/// baseline every sound harness must reproduce.
#[derive(Debug, Default)]
pub struct NullAdversary;

fn insider_keys_if_needed(
    view: &PublicView,
    rng: &mut dyn RngCore,
) -> Option<SenderKeys> {
    match view.position {
        Position::Insider => Some(keygen_sender(view.scheme, &view.params, rng)),
        Position::Outsider => None,
    }
}

impl Adversary for NullAdversary {
    fn stage1(
        &mut self,
        view: &PublicView,
        _oracles: &mut Oracles,
        rng: &mut dyn RngCore,
    ) -> Result<Stage1Output, AdversaryFault> {
        Ok(Stage1Output {
            m0: b"null adversary message 0".to_vec(),
            m1: b"null adversary message 1".to_vec(),
            state: Vec::new(),
            sender_keys: insider_keys_if_needed(view, rng),
        })
    }

    fn stage2(
        &mut self,
        _view: &PublicView,
        _challenge: &SigncryptText,
        _state: &[u8],
        _oracles: &mut Oracles,
        rng: &mut dyn RngCore,
    ) -> Result<u8, AdversaryFault> {
        Ok((rng.next_u32() & 1) as u8)
    }
}

/// Replays the exact (sender key, challenge) pair to the unsigncryption
/// oracle and reports whether the harness blocked it. Exists to prove the
/// restriction of the game is enforced.
#[derive(Debug, Default)]
pub struct RestrictionTester {
    pub saw_denial: bool,
}

impl Adversary for RestrictionTester {
    fn stage1(
        &mut self,
        view: &PublicView,
        _oracles: &mut Oracles,
        rng: &mut dyn RngCore,
    ) -> Result<Stage1Output, AdversaryFault> {
        Ok(Stage1Output {
            m0: b"restriction probe zero".to_vec(),
            m1: b"restriction probe one.".to_vec(),
            state: Vec::new(),
            sender_keys: insider_keys_if_needed(view, rng),
        })
    }

    fn stage2(
        &mut self,
        view: &PublicView,
        challenge: &SigncryptText,
        _state: &[u8],
        oracles: &mut Oracles,
        _rng: &mut dyn RngCore,
    ) -> Result<u8, AdversaryFault> {
        let sender_pub = view
            .sender_pub
            .as_ref()
            .ok_or_else(|| AdversaryFault("no sender key in stage-2 view".to_string()))?;
        let reply = oracles.unsigncrypt(sender_pub, challenge);
        self.saw_denial = reply == OracleReply::Denied(DenialReason::ForbiddenChallengeQuery);
        if !self.saw_denial {
            return Err(AdversaryFault(format!(
                "forbidden replay was not blocked: {reply:?}"
            )));
        }
        Ok(0)
    }
}

/// Wins whenever the sabotaged variant is in force: with k1 zeroed the
/// keystream is key-independent, so the challenge body decrypts with no
/// secret at all. Against the honest scheme it degenerates to a coin flip.
#[derive(Debug, Default)]
pub struct SabotageExploiter {
    m0: Vec<u8>,
    m1: Vec<u8>,
}

impl Adversary for SabotageExploiter {
    fn stage1(
        &mut self,
        view: &PublicView,
        _oracles: &mut Oracles,
        rng: &mut dyn RngCore,
    ) -> Result<Stage1Output, AdversaryFault> {
        self.m0 = b"sabotage exploit message A".to_vec();
        self.m1 = b"sabotage exploit message B".to_vec();
        Ok(Stage1Output {
            m0: self.m0.clone(),
            m1: self.m1.clone(),
            state: Vec::new(),
            sender_keys: insider_keys_if_needed(view, rng),
        })
    }

    fn stage2(
        &mut self,
        view: &PublicView,
        challenge: &SigncryptText,
        _state: &[u8],
        _oracles: &mut Oracles,
        rng: &mut dyn RngCore,
    ) -> Result<u8, AdversaryFault> {
        let zero_key = vec![0u8; view.profile.digest_length_bytes() / 2];
        let recovered = sym_decrypt(&zero_key, &challenge.c, &view.profile);
        if recovered == self.m1 {
            Ok(1)
        } else if recovered == self.m0 {
            Ok(0)
        } else {
            // Not sabotaged; nothing to exploit.
            Ok((rng.next_u32() & 1) as u8)
        }
    }
}

/// Looks up a shipped adversary by its CLI name.
pub fn builtin_adversary(name: &str) -> Option<Box<dyn Adversary>> {
    match name {
        "null" => Some(Box::<NullAdversary>::default()),
        "restriction-tester" => Some(Box::<RestrictionTester>::default()),
        "sabotage-exploiter" => Some(Box::<SabotageExploiter>::default()),
        _ => None,
    }
}

pub const BUILTIN_ADVERSARIES: [&str; 3] = ["null", "restriction-tester", "sabotage-exploiter"];

// ---------------------------------------------------------------------------
// Forgery probes
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ForgeryStats {
    pub trials: u64,
    pub accepts: u64,
    pub random_triple_trials: u64,
    pub random_triple_accepts: u64,
    pub mutation_trials: u64,
    pub mutation_accepts: u64,
}

fn random_digest(profile: &PrimitiveProfile, rng: &mut ChaCha20Rng) -> Vec<u8> {
    let mut tag = vec![0u8; profile.digest_length_bytes()];
    rng.fill_bytes(&mut tag);
    tag
}

/// Chosen-message outsider forger: half the trials submit fresh random
/// (r, s, c) triples, half submit single-byte mutations of honestly
/// obtained signcryptexts (verbatim replays excluded). Accepts are counted;
/// the expectation is zero, since every accept requires a keyed-hash
/// collision.
pub fn run_outsider_authenticity_probe(
    config: &GameConfig,
    seed: u64,
    trials: u64,
) -> Result<ForgeryStats, GameError> {
    let mut rng = ChaCha20Rng::from_seed(sub_seed(seed, "outsider-probe", 0));
    let params = generate_params(config.p_bits, config.q_bits, &mut rng)?;
    let sender = keygen_sender(config.scheme, &params, &mut rng);
    let receiver = keygen_receiver(config.scheme, &params, &mut rng);

    // The chosen-message phase: the forger asks the sender for
    // signcryptexts of arbitrary messages.
    let mut honest = Vec::new();
    for i in 0..8u32 {
        let msg = format!("chosen message {i}");
        let ct = crate::schemes::signcrypt(
            config.scheme,
            &params,
            &config.profile,
            &sender,
            receiver.public_element(),
            msg.as_bytes(),
            &mut rng,
        )?;
        honest.push(ct);
    }

    let mut stats = ForgeryStats::default();
    for t in 0..trials {
        let candidate = if t % 2 == 0 {
            stats.random_triple_trials += 1;
            let c_len = (rng.next_u32() % 64) as usize;
            let mut c = vec![0u8; c_len];
            rng.fill_bytes(&mut c);
            SigncryptText {
                r: random_digest(&config.profile, &mut rng),
                s: rng.gen_biguint_below(params.q()),
                c,
            }
        } else {
            stats.mutation_trials += 1;
            let base = &honest[(rng.next_u32() as usize) % honest.len()];
            mutate_one_byte(base, &params, &mut rng)
        };
        let accepted = matches!(
            unsigncrypt_observed(
                config.scheme,
                &params,
                &config.profile,
                &receiver,
                sender.public_element(),
                &candidate,
                &UnsigncryptOverrides::default(),
                &NoObserver,
            ),
            Ok((UnsigncryptOutcome::Accepted(_), _))
        );
        stats.trials += 1;
        if accepted {
            stats.accepts += 1;
            if t % 2 == 0 {
                stats.random_triple_accepts += 1;
            } else {
                stats.mutation_accepts += 1;
            }
        }
    }
    Ok(stats)
}

/// XORs a random nonzero byte into one of the three fields, guaranteeing
/// the result differs from the original.
fn mutate_one_byte(
    base: &SigncryptText,
    params: &GroupParams,
    rng: &mut ChaCha20Rng,
) -> SigncryptText {
    let mut mutated = base.clone();
    let mask = loop {
        let b = (rng.next_u32() & 0xff) as u8;
        if b != 0 {
            break b;
        }
    };
    // Field choice: skip c when the body is empty.
    let field = if base.c.is_empty() {
        rng.next_u32() % 2
    } else {
        rng.next_u32() % 3
    };
    match field {
        0 => {
            let idx = (rng.next_u32() as usize) % mutated.r.len();
            mutated.r[idx] ^= mask;
        }
        1 => {
            let width = ((params.q().bits() + 7) / 8) as usize;
            let mut bytes = mutated.s.to_bytes_be();
            while bytes.len() < width {
                bytes.insert(0, 0);
            }
            let idx = (rng.next_u32() as usize) % bytes.len();
            bytes[idx] ^= mask;
            mutated.s = BigUint::from_bytes_be(&bytes);
        }
        _ => {
            let idx = (rng.next_u32() as usize) % mutated.c.len();
            mutated.c[idx] ^= mask;
        }
    }
    mutated
}

/// Receiver-equipped forger: holds the receiver's private key, picks fresh
/// messages never signcrypted by the sender, and builds the most consistent
/// candidate it can (proper cipher body under the key material its own
/// private key recovers). Every accept still requires the keyed hash of the
/// fresh message to equal the guessed tag.
pub fn run_insider_nonrepudiation_probe(
    config: &GameConfig,
    seed: u64,
    trials: u64,
) -> Result<ForgeryStats, GameError> {
    let mut rng = ChaCha20Rng::from_seed(sub_seed(seed, "insider-probe", 0));
    let params = generate_params(config.p_bits, config.q_bits, &mut rng)?;
    let sender = keygen_sender(config.scheme, &params, &mut rng);
    let receiver = keygen_receiver(config.scheme, &params, &mut rng);

    // Messages the sender actually signcrypted (the probe must forge
    // outside this set).
    for i in 0..4u32 {
        let msg = format!("legitimate traffic {i}");
        crate::schemes::signcrypt(
            config.scheme,
            &params,
            &config.profile,
            &sender,
            receiver.public_element(),
            msg.as_bytes(),
            &mut rng,
        )?;
    }

    let reduction = match config.profile.tag_reduction {
        TagReduction::ModP => params.p().clone(),
        TagReduction::ModQ => params.q().clone(),
    };

    let mut stats = ForgeryStats::default();
    for t in 0..trials {
        let fresh = format!("forged insider message {t}");
        let s = rng.gen_biguint_below(params.q());
        let r = random_digest(&config.profile, &mut rng);
        let r_int = tag_to_scalar(&r, &reduction).expect("modulus >= 2");
        // skR lets the forger compute the dh value any receiver would
        // recover for this (r, s), and hence a consistent cipher body.
        let dh = recover_dh(
            config.scheme,
            &params,
            &receiver,
            sender.public_element(),
            &s,
            &r_int,
        )?;
        let c = cipher_body_for_shared(&dh, fresh.as_bytes(), &config.profile);
        let candidate = SigncryptText { r, s, c };
        let accepted = matches!(
            unsigncrypt_observed(
                config.scheme,
                &params,
                &config.profile,
                &receiver,
                sender.public_element(),
                &candidate,
                &UnsigncryptOverrides::default(),
                &NoObserver,
            ),
            Ok((UnsigncryptOutcome::Accepted(_), _))
        );
        stats.trials += 1;
        stats.random_triple_trials += 1;
        if accepted {
            stats.accepts += 1;
            stats.random_triple_accepts += 1;
        }
    }
    Ok(stats)
}
