//! Cost accounting: per-phase operation counts, message expansion, and
//! wall-clock timings, for the three schemes and for the classical
//! signature-then-encryption baseline they are measured against.
//!
//! The baseline pairs a Schnorr signature with a hashed-ElGamal style
//! encryption: sign the message, then encrypt message plus signature under
//! a fresh key-encapsulation element c1 = g^u. That costs three
//! exponentiations per direction and p_bytes + 2*q_bytes of overhead,
//! against one sender exponentiation and digest + q_bytes of overhead for
//! the combined schemes.

use crate::group::{GroupParams, RandomScalar};
use crate::observe::{CountingObserver, NoObserver, OpObserver, PhaseCounts};
use crate::primitives::{derive_key_material, sym_decrypt, sym_encrypt, PrimitiveProfile};
use crate::schemes::{
    keygen_receiver, keygen_sender, signcrypt_observed, unsigncrypt_observed, SchemeError,
    SchemeId, SigncryptOverrides, SigncryptText, UnsigncryptOverrides,
};
use crate::schnorr::{sign_observed, verify_observed, SchnorrKeyPair, SchnorrSignature};
use num_bigint::BigUint;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::time::Instant;

/// Operation counts for one signcrypt/unsigncrypt exchange.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpCounts {
    pub sender: PhaseCounts,
    pub receiver: PhaseCounts,
    /// True when every trial produced identical counts (a retry on the
    /// non-invertible divisor would add operations; it has never been
    /// observed with honest randomness).
    pub consistent: bool,
}

const COUNT_TRIALS: u32 = 5;

/// Counts the modular operations of a full exchange, repeated
/// `COUNT_TRIALS` times to confirm the counts are input-independent.
pub fn count_ops(
    scheme: SchemeId,
    params: &GroupParams,
    profile: &PrimitiveProfile,
    seed: u64,
) -> Result<OpCounts, SchemeError> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let sender = keygen_sender(scheme, params, &mut rng);
    let receiver = keygen_receiver(scheme, params, &mut rng);

    let mut result: Option<OpCounts> = None;
    let mut consistent = true;
    for trial in 0..COUNT_TRIALS {
        let message = format!("op-count probe message {trial}");
        let sc_obs = CountingObserver::new();
        let (ct, _) = signcrypt_observed(
            scheme,
            params,
            profile,
            &sender,
            receiver.public_element(),
            message.as_bytes(),
            &mut rng,
            &SigncryptOverrides::default(),
            &sc_obs,
        )?;
        let usc_obs = CountingObserver::new();
        unsigncrypt_observed(
            scheme,
            params,
            profile,
            &receiver,
            sender.public_element(),
            &ct,
            &UnsigncryptOverrides::default(),
            &usc_obs,
        )?;
        let this = OpCounts {
            sender: sc_obs.snapshot(),
            receiver: usc_obs.snapshot(),
            consistent: true,
        };
        match &result {
            None => result = Some(this),
            Some(first) => {
                if first.sender != this.sender || first.receiver != this.receiver {
                    consistent = false;
                }
            }
        }
    }
    let mut counts = result.expect("at least one trial");
    counts.consistent = consistent;
    Ok(counts)
}

// ---------------------------------------------------------------------------
// Signature-then-encryption baseline
// ---------------------------------------------------------------------------

/// The baseline's transmitted pair: the key-encapsulation element and the
/// encrypted (message || signature) body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaselineCiphertext {
    pub c1: BigUint,
    pub body: Vec<u8>,
}

fn fixed_width_bytes(value: &BigUint, width: usize) -> Vec<u8> {
    let mut bytes = value.to_bytes_be();
    assert!(bytes.len() <= width, "value wider than its field");
    while bytes.len() < width {
        bytes.insert(0, 0);
    }
    bytes
}

fn scalar_width(params: &GroupParams) -> usize {
    ((params.q().bits() + 7) / 8) as usize
}

pub fn baseline_encrypt(
    params: &GroupParams,
    profile: &PrimitiveProfile,
    signer: &SchnorrKeyPair,
    recipient_pub: &BigUint,
    message: &[u8],
    rng: &mut (impl RngCore + ?Sized),
) -> BaselineCiphertext {
    baseline_encrypt_observed(params, profile, signer, recipient_pub, message, rng, &NoObserver)
}

pub fn baseline_encrypt_observed<O: OpObserver>(
    params: &GroupParams,
    profile: &PrimitiveProfile,
    signer: &SchnorrKeyPair,
    recipient_pub: &BigUint,
    message: &[u8],
    rng: &mut (impl RngCore + ?Sized),
    obs: &O,
) -> BaselineCiphertext {
    // Sign first (1 exp), then encapsulate (2 exps).
    let sig = sign_observed(params, signer, message, rng, profile, obs);
    let u = crate::group::random_scalar(params, rng);
    obs.on_mod_exp();
    let c1 = params.g().modpow(u.value(), params.p());
    obs.on_mod_exp();
    let shared = recipient_pub.modpow(u.value(), params.p());
    obs.on_hash_call();
    let key = derive_key_material(&shared, profile);

    let width = scalar_width(params);
    let mut plaintext = message.to_vec();
    plaintext.extend_from_slice(&fixed_width_bytes(&sig.s, width));
    plaintext.extend_from_slice(&fixed_width_bytes(&sig.e, width));
    let body = sym_encrypt(&key, &plaintext, profile);
    BaselineCiphertext { c1, body }
}

pub fn baseline_decrypt(
    params: &GroupParams,
    profile: &PrimitiveProfile,
    recipient: &RandomScalar,
    signer_pub: &BigUint,
    ct: &BaselineCiphertext,
) -> Option<Vec<u8>> {
    baseline_decrypt_observed(params, profile, recipient, signer_pub, ct, &NoObserver)
}

pub fn baseline_decrypt_observed<O: OpObserver>(
    params: &GroupParams,
    profile: &PrimitiveProfile,
    recipient: &RandomScalar,
    signer_pub: &BigUint,
    ct: &BaselineCiphertext,
    obs: &O,
) -> Option<Vec<u8>> {
    // Decapsulate (1 exp), then verify the recovered signature (2 exps).
    obs.on_mod_exp();
    let shared = ct.c1.modpow(recipient.value(), params.p());
    obs.on_hash_call();
    let key = derive_key_material(&shared, profile);
    let plaintext = sym_decrypt(&key, &ct.body, profile);

    let width = scalar_width(params);
    if plaintext.len() < 2 * width {
        return None;
    }
    let split_at = plaintext.len() - 2 * width;
    let (message, tail) = plaintext.split_at(split_at);
    let sig = SchnorrSignature {
        s: BigUint::from_bytes_be(&tail[..width]),
        e: BigUint::from_bytes_be(&tail[width..]),
    };
    if verify_observed(params, signer_pub, message, &sig, profile, obs) {
        Some(message.to_vec())
    } else {
        None
    }
}

/// Baseline operation counts, shaped like [`count_ops`].
pub fn count_baseline_ops(
    params: &GroupParams,
    profile: &PrimitiveProfile,
    seed: u64,
) -> OpCounts {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let signer = SchnorrKeyPair::generate(params, &mut rng);
    let recipient = SchnorrKeyPair::generate(params, &mut rng);

    let mut result: Option<OpCounts> = None;
    let mut consistent = true;
    for trial in 0..COUNT_TRIALS {
        let message = format!("baseline op-count probe {trial}");
        let enc_obs = CountingObserver::new();
        let ct = baseline_encrypt_observed(
            params,
            profile,
            &signer,
            recipient.public(),
            message.as_bytes(),
            &mut rng,
            &enc_obs,
        );
        let dec_obs = CountingObserver::new();
        let recovered = baseline_decrypt_observed(
            params,
            profile,
            recipient.private(),
            signer.public(),
            &ct,
            &dec_obs,
        );
        assert_eq!(recovered.as_deref(), Some(message.as_bytes()));
        let this = OpCounts {
            sender: enc_obs.snapshot(),
            receiver: dec_obs.snapshot(),
            consistent: true,
        };
        match &result {
            None => result = Some(this),
            Some(first) => {
                if first.sender != this.sender || first.receiver != this.receiver {
                    consistent = false;
                }
            }
        }
    }
    let mut counts = result.expect("at least one trial");
    counts.consistent = consistent;
    counts
}

// ---------------------------------------------------------------------------
// Message expansion
// ---------------------------------------------------------------------------

/// Transmitted-size accounting for one plaintext length, measured from
/// actual ciphertexts, headerless (file-format framing is counted by the
/// CLI, not here).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpansionReport {
    pub plaintext_bytes: usize,
    /// r || s || c with s at fixed width ceil(q_bits / 8).
    pub signcrypted_payload_bytes: usize,
    pub overhead_bytes: usize,
    /// c1 || body with c1 at fixed width ceil(p_bits / 8).
    pub baseline_payload_bytes: usize,
    pub baseline_overhead_bytes: usize,
}

pub fn payload_bytes(params: &GroupParams, ct: &SigncryptText) -> usize {
    ct.r.len() + scalar_width(params) + ct.c.len()
}

pub fn measure_expansion(
    scheme: SchemeId,
    params: &GroupParams,
    profile: &PrimitiveProfile,
    plaintext_len: usize,
    seed: u64,
) -> Result<ExpansionReport, SchemeError> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let sender = keygen_sender(scheme, params, &mut rng);
    let receiver = keygen_receiver(scheme, params, &mut rng);
    let mut message = vec![0u8; plaintext_len];
    rng.fill_bytes(&mut message);

    let ct = crate::schemes::signcrypt(
        scheme,
        params,
        profile,
        &sender,
        receiver.public_element(),
        &message,
        &mut rng,
    )?;
    let payload = payload_bytes(params, &ct);

    let signer = SchnorrKeyPair::generate(params, &mut rng);
    let recipient = SchnorrKeyPair::generate(params, &mut rng);
    let baseline_ct = baseline_encrypt(
        params,
        profile,
        &signer,
        recipient.public(),
        &message,
        &mut rng,
    );
    let p_width = ((params.p().bits() + 7) / 8) as usize;
    let baseline_payload = p_width + baseline_ct.body.len();

    Ok(ExpansionReport {
        plaintext_bytes: plaintext_len,
        signcrypted_payload_bytes: payload,
        overhead_bytes: payload - plaintext_len,
        baseline_payload_bytes: baseline_payload,
        baseline_overhead_bytes: baseline_payload - plaintext_len,
    })
}

// ---------------------------------------------------------------------------
// Timing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimingRow {
    pub subject: String,
    pub phase: &'static str,
    pub trials: u32,
    pub median_nanos: u128,
}

fn median_nanos(mut samples: Vec<u128>) -> u128 {
    samples.sort_unstable();
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        (samples[n / 2 - 1] + samples[n / 2]) / 2
    }
}

/// Times every scheme plus the baseline over `trials` runs each and
/// reports medians. Keys are generated once per subject; each trial uses a
/// fresh message of `message_len` bytes.
pub fn time_schemes(
    params: &GroupParams,
    profile: &PrimitiveProfile,
    trials: u32,
    message_len: usize,
    seed: u64,
) -> Result<Vec<TimingRow>, SchemeError> {
    assert!(trials >= 1, "timing requires at least one trial");
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut rows = Vec::new();

    for scheme in crate::schemes::ALL_SCHEMES {
        let sender = keygen_sender(scheme, params, &mut rng);
        let receiver = keygen_receiver(scheme, params, &mut rng);
        let mut sc_samples = Vec::with_capacity(trials as usize);
        let mut usc_samples = Vec::with_capacity(trials as usize);
        for _ in 0..trials {
            let mut message = vec![0u8; message_len];
            rng.fill_bytes(&mut message);
            let started = Instant::now();
            let ct = crate::schemes::signcrypt(
                scheme,
                params,
                profile,
                &sender,
                receiver.public_element(),
                &message,
                &mut rng,
            )?;
            sc_samples.push(started.elapsed().as_nanos());

            let started = Instant::now();
            let outcome = crate::schemes::unsigncrypt(
                scheme,
                params,
                profile,
                &receiver,
                sender.public_element(),
                &ct,
            )?;
            usc_samples.push(started.elapsed().as_nanos());
            assert!(outcome.is_accepted(), "timed exchange must round-trip");
        }
        rows.push(TimingRow {
            subject: scheme.token().to_string(),
            phase: "signcrypt",
            trials,
            median_nanos: median_nanos(sc_samples),
        });
        rows.push(TimingRow {
            subject: scheme.token().to_string(),
            phase: "unsigncrypt",
            trials,
            median_nanos: median_nanos(usc_samples),
        });
    }

    let signer = SchnorrKeyPair::generate(params, &mut rng);
    let recipient = SchnorrKeyPair::generate(params, &mut rng);
    let mut enc_samples = Vec::with_capacity(trials as usize);
    let mut dec_samples = Vec::with_capacity(trials as usize);
    for _ in 0..trials {
        let mut message = vec![0u8; message_len];
        rng.fill_bytes(&mut message);
        let started = Instant::now();
        let ct = baseline_encrypt(
            params,
            profile,
            &signer,
            recipient.public(),
            &message,
            &mut rng,
        );
        enc_samples.push(started.elapsed().as_nanos());

        let started = Instant::now();
        let recovered = baseline_decrypt(params, profile, recipient.private(), signer.public(), &ct);
        dec_samples.push(started.elapsed().as_nanos());
        assert!(recovered.is_some(), "timed baseline must round-trip");
    }
    rows.push(TimingRow {
        subject: "baseline".to_string(),
        phase: "sign+encrypt",
        trials,
        median_nanos: median_nanos(enc_samples),
    });
    rows.push(TimingRow {
        subject: "baseline".to_string(),
        phase: "decrypt+verify",
        trials,
        median_nanos: median_nanos(dec_samples),
    });
    Ok(rows)
}
