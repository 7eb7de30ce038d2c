//! The three discrete-log signcryption schemes.
//!
//! All three share one shape. Signcrypt: draw an ephemeral `x`, compute
//! `dh = Yb^x mod p`, hash it into key material, split into the cipher key
//! `k1` and tag key `k2`, tag the message (`r = KH_k2(m)`, transmitted in
//! full), reduce the tag to a scalar `r_int`, derive `s` from `(x, Xa,
//! r_int)` by the scheme formula, and encrypt (`c = E_k1(m)`). Unsigncrypt
//! recovers `dh` from `(s, r_int)` and the keys, re-derives `k1`/`k2`,
//! decrypts, and accepts only if the recomputed tag equals `r`
//! byte-for-byte.
//!
//! Where they differ:
//!
//! | scheme     | public keys      | s formula              | dh recovery                    |
//! |------------|------------------|------------------------|--------------------------------|
//! | SCS1       | `y = g^x`        | `x / (r + Xa) mod q`   | `(Ya * g^r)^(s*Xb) mod p`      |
//! | SCS2       | `y = g^x`        | `x / (1 + Xa*r) mod q` | `(g * Ya^r)^(s*Xb) mod p`      |
//! | SCHNORR_SC | `y = g^(-x)`     | `x + r*Xa mod q`       | `(g^s * Ya^r)^(-Xb) mod p`     |
//!
//! Negative exponents are realized as `q - exponent` (see
//! [`crate::group::neg_pow`]).

use crate::group::{
    generate_params, is_valid_public_key, mod_inverse, mod_pow, neg_pow, random_scalar,
    GroupError, GroupParams, RandomScalar,
};
use crate::observe::{NoObserver, OpObserver};
use crate::primitives::{
    derive_key_material, keyed_hash, split_key, sym_decrypt, sym_encrypt, tag_to_scalar,
    PrimitiveError, PrimitiveProfile, TagReduction,
};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::RngCore;
use thiserror::Error;

/// Attempts signcrypt makes when the scheme's divisor is non-invertible
/// (SCS1/SCS2 only; each retry draws a fresh ephemeral nonce).
pub const SIGNCRYPT_RETRY_BUDGET: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Primitive(#[from] PrimitiveError),
    #[error("tag length {got} does not match the profile digest length {want}")]
    TagLength { got: usize, want: usize },
    #[error("ciphertext scalar s must lie in [0, q)")]
    CiphertextScalarOutOfRange,
    #[error("public key is outside the valid subgroup range")]
    InvalidPublicKey,
    #[error("key convention does not match the scheme")]
    ConventionMismatch,
    #[error("non-invertible divisor persisted through {0} signcryption attempts")]
    RetryBudgetExhausted(u32),
}

/// Scheme identifier. Serialized tokens are `scs1`, `scs2`, `schnorr-sc`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeId {
    Scs1,
    Scs2,
    SchnorrSc,
}

pub const ALL_SCHEMES: [SchemeId; 3] = [SchemeId::Scs1, SchemeId::Scs2, SchemeId::SchnorrSc];

impl SchemeId {
    pub fn token(self) -> &'static str {
        match self {
            SchemeId::Scs1 => "scs1",
            SchemeId::Scs2 => "scs2",
            SchemeId::SchnorrSc => "schnorr-sc",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        match token {
            "scs1" => Some(SchemeId::Scs1),
            "scs2" => Some(SchemeId::Scs2),
            "schnorr-sc" => Some(SchemeId::SchnorrSc),
            _ => None,
        }
    }

    pub fn convention(self) -> ExponentConvention {
        match self {
            SchemeId::Scs1 | SchemeId::Scs2 => ExponentConvention::Positive,
            SchemeId::SchnorrSc => ExponentConvention::Negative,
        }
    }
}

/// Sign of the exponent in `y = g^(±x) mod p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentConvention {
    Positive,
    Negative,
}

/// The public element a private scalar produces under a scheme's
/// convention.
pub fn expected_public(scheme: SchemeId, params: &GroupParams, x: &RandomScalar) -> BigUint {
    match scheme.convention() {
        ExponentConvention::Positive => params
            .g()
            .modpow(x.value(), params.p()),
        ExponentConvention::Negative => neg_pow(params, params.g(), x.value()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct KeyMaterial {
    x: RandomScalar,
    y: BigUint,
    convention: ExponentConvention,
}

impl KeyMaterial {
    fn new(scheme: SchemeId, params: &GroupParams, x: RandomScalar) -> Self {
        let y = expected_public(scheme, params, &x);
        Self {
            x,
            y,
            convention: scheme.convention(),
        }
    }
}

/// Sender-side key pair (Xa, Ya).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SenderKeys(KeyMaterial);

/// Receiver-side key pair (Xb, Yb).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReceiverKeys(KeyMaterial);

macro_rules! key_accessors {
    ($name:ident) => {
        impl $name {
            pub fn public_element(&self) -> &BigUint {
                &self.0.y
            }

            pub fn private_scalar(&self) -> &RandomScalar {
                &self.0.x
            }

            pub fn convention(&self) -> ExponentConvention {
                self.0.convention
            }
        }
    };
}

key_accessors!(SenderKeys);
key_accessors!(ReceiverKeys);

/// Bundles fresh group parameters with the chosen primitive profile, the
/// scheme's common `param`.
pub fn setup(
    bit_length: u64,
    q_bit_length: u64,
    profile: PrimitiveProfile,
    rng: &mut (impl RngCore + ?Sized),
) -> Result<(GroupParams, PrimitiveProfile), SchemeError> {
    let params = generate_params(bit_length, q_bit_length, rng)?;
    Ok((params, profile))
}

pub fn keygen_sender(
    scheme: SchemeId,
    params: &GroupParams,
    rng: &mut (impl RngCore + ?Sized),
) -> SenderKeys {
    SenderKeys(KeyMaterial::new(scheme, params, random_scalar(params, rng)))
}

pub fn keygen_receiver(
    scheme: SchemeId,
    params: &GroupParams,
    rng: &mut (impl RngCore + ?Sized),
) -> ReceiverKeys {
    ReceiverKeys(KeyMaterial::new(scheme, params, random_scalar(params, rng)))
}

pub fn sender_from_private(scheme: SchemeId, params: &GroupParams, x: RandomScalar) -> SenderKeys {
    SenderKeys(KeyMaterial::new(scheme, params, x))
}

pub fn receiver_from_private(
    scheme: SchemeId,
    params: &GroupParams,
    x: RandomScalar,
) -> ReceiverKeys {
    ReceiverKeys(KeyMaterial::new(scheme, params, x))
}

/// The transmitted triple. `r` is the full keyed-hash tag, `s` the scheme
/// scalar in `[0, q)`, `c` the symmetric ciphertext.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigncryptText {
    pub r: Vec<u8>,
    pub s: BigUint,
    pub c: Vec<u8>,
}

/// Test and harness hooks for [`signcrypt_observed`]. `Default` is the
/// honest path.
#[derive(Debug, Clone, Default)]
pub struct SigncryptOverrides<'a> {
    /// Forces the ephemeral nonce instead of drawing it from the rng.
    pub nonce: Option<&'a RandomScalar>,
    /// Forces the reduced tag scalar r_int (the transmitted tag bytes are
    /// still the real keyed hash).
    pub tag_scalar: Option<&'a BigUint>,
    /// Replaces the cipher key k1 with all-zero bytes of the same length.
    /// This deliberately breaks confidentiality (the keystream becomes
    /// public); the security-game harness uses it to prove it can detect a
    /// broken scheme.
    pub zero_cipher_key: bool,
}

/// Intermediates of a signcrypt run, for instrumented tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigncryptTrace {
    pub nonce: BigUint,
    pub dh: BigUint,
    pub tag_scalar: BigUint,
}

/// Intermediates of an unsigncrypt run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnsigncryptTrace {
    pub recovered_dh: BigUint,
    pub tag_scalar: BigUint,
}

/// Hooks for [`unsigncrypt_observed`]; mirrors the sabotage switch so the
/// broken variant still round-trips inside the game harness.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnsigncryptOverrides {
    pub zero_cipher_key: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnsigncryptOutcome {
    Accepted(Vec<u8>),
    /// The failure symbol: structure was fine but the tag did not match.
    Rejected,
}

impl UnsigncryptOutcome {
    pub fn is_accepted(&self) -> bool {
        matches!(self, UnsigncryptOutcome::Accepted(_))
    }

    pub fn into_message(self) -> Option<Vec<u8>> {
        match self {
            UnsigncryptOutcome::Accepted(m) => Some(m),
            UnsigncryptOutcome::Rejected => None,
        }
    }
}

fn reduction_modulus<'a>(params: &'a GroupParams, profile: &PrimitiveProfile) -> &'a BigUint {
    match profile.tag_reduction {
        TagReduction::ModP => params.p(),
        TagReduction::ModQ => params.q(),
    }
}

/// `s` from the scheme formula, or `None` when the divisor is not
/// invertible (the SCS1/SCS2 retry case).
fn compute_s<O: OpObserver>(
    scheme: SchemeId,
    q: &BigUint,
    x: &BigUint,
    xa: &BigUint,
    r_q: &BigUint,
    obs: &O,
) -> Option<BigUint> {
    match scheme {
        SchemeId::SchnorrSc => {
            obs.on_mod_mul();
            let rxa = r_q * xa % q;
            Some((x + rxa) % q)
        }
        SchemeId::Scs1 => {
            let divisor = (r_q + xa) % q;
            if divisor.is_zero() {
                return None;
            }
            obs.on_mod_inv();
            let inv = mod_inverse(&divisor, q).expect("nonzero element of prime field");
            obs.on_mod_mul();
            Some(x * inv % q)
        }
        SchemeId::Scs2 => {
            obs.on_mod_mul();
            let xar = xa * r_q % q;
            let divisor = (BigUint::one() + xar) % q;
            if divisor.is_zero() {
                return None;
            }
            obs.on_mod_inv();
            let inv = mod_inverse(&divisor, q).expect("nonzero element of prime field");
            obs.on_mod_mul();
            Some(x * inv % q)
        }
    }
}

pub fn signcrypt(
    scheme: SchemeId,
    params: &GroupParams,
    profile: &PrimitiveProfile,
    sender: &SenderKeys,
    receiver_pub: &BigUint,
    message: &[u8],
    rng: &mut (impl RngCore + ?Sized),
) -> Result<SigncryptText, SchemeError> {
    signcrypt_observed(
        scheme,
        params,
        profile,
        sender,
        receiver_pub,
        message,
        rng,
        &SigncryptOverrides::default(),
        &NoObserver,
    )
    .map(|(ct, _)| ct)
}

#[allow(clippy::too_many_arguments)]
pub fn signcrypt_observed<O: OpObserver>(
    scheme: SchemeId,
    params: &GroupParams,
    profile: &PrimitiveProfile,
    sender: &SenderKeys,
    receiver_pub: &BigUint,
    message: &[u8],
    rng: &mut (impl RngCore + ?Sized),
    overrides: &SigncryptOverrides,
    obs: &O,
) -> Result<(SigncryptText, SigncryptTrace), SchemeError> {
    if sender.convention() != scheme.convention() {
        return Err(SchemeError::ConventionMismatch);
    }
    if !is_valid_public_key(params, receiver_pub) {
        return Err(SchemeError::InvalidPublicKey);
    }
    let q = params.q();
    let xa = sender.private_scalar().value();

    for _ in 0..SIGNCRYPT_RETRY_BUDGET {
        let nonce = match overrides.nonce {
            Some(n) => n.clone(),
            None => random_scalar(params, rng),
        };
        obs.on_mod_exp();
        let dh = mod_pow(receiver_pub, nonce.value(), params.p())?;
        obs.on_hash_call();
        let k_material = derive_key_material(&dh, profile);
        let split = split_key(&k_material)?;
        obs.on_hash_call();
        let tag = keyed_hash(&split.k2, message, profile);
        let r_int = match overrides.tag_scalar {
            Some(forced) => forced.clone(),
            None => tag_to_scalar(&tag, reduction_modulus(params, profile))?,
        };
        let r_q = &r_int % q;

        let Some(s) = compute_s(scheme, q, nonce.value(), xa, &r_q, obs) else {
            continue;
        };

        let cipher_key = if overrides.zero_cipher_key {
            vec![0u8; split.k1.len()]
        } else {
            split.k1.clone()
        };
        let c = sym_encrypt(&cipher_key, message, profile);
        let trace = SigncryptTrace {
            nonce: nonce.into_inner(),
            dh,
            tag_scalar: r_int,
        };
        return Ok((SigncryptText { r: tag, s, c }, trace));
    }
    Err(SchemeError::RetryBudgetExhausted(SIGNCRYPT_RETRY_BUDGET))
}

/// Recovers the shared group element from `(s, r_int)` and the receiver's
/// private key: the receiver half of the scheme algebra, factored out so
/// instrumented tests can drive it with forced scalars.
pub fn recover_dh(
    scheme: SchemeId,
    params: &GroupParams,
    receiver: &ReceiverKeys,
    sender_pub: &BigUint,
    s: &BigUint,
    r_int: &BigUint,
) -> Result<BigUint, SchemeError> {
    recover_dh_observed(scheme, params, receiver, sender_pub, s, r_int, &NoObserver)
}

pub fn recover_dh_observed<O: OpObserver>(
    scheme: SchemeId,
    params: &GroupParams,
    receiver: &ReceiverKeys,
    sender_pub: &BigUint,
    s: &BigUint,
    r_int: &BigUint,
    obs: &O,
) -> Result<BigUint, SchemeError> {
    if receiver.convention() != scheme.convention() {
        return Err(SchemeError::ConventionMismatch);
    }
    if !is_valid_public_key(params, sender_pub) {
        return Err(SchemeError::InvalidPublicKey);
    }
    if s >= params.q() {
        return Err(SchemeError::CiphertextScalarOutOfRange);
    }
    let (p, q) = (params.p(), params.q());
    let xb = receiver.private_scalar().value();
    let r_q = r_int % q;

    let dh = match scheme {
        SchemeId::SchnorrSc => {
            // (g^s * Ya^r)^(-Xb) mod p
            obs.on_mod_exp();
            let gs = mod_pow(params.g(), s, p)?;
            obs.on_mod_exp();
            let yar = mod_pow(sender_pub, &r_q, p)?;
            obs.on_mod_mul();
            let base = gs * yar % p;
            obs.on_mod_exp();
            neg_pow(params, &base, xb)
        }
        SchemeId::Scs1 => {
            // (Ya * g^r)^(s*Xb) mod p
            obs.on_mod_exp();
            let gr = mod_pow(params.g(), &r_q, p)?;
            obs.on_mod_mul();
            let base = sender_pub * gr % p;
            obs.on_mod_mul();
            let exp = s * xb % q;
            obs.on_mod_exp();
            mod_pow(&base, &exp, p)?
        }
        SchemeId::Scs2 => {
            // (g * Ya^r)^(s*Xb) mod p
            obs.on_mod_exp();
            let yar = mod_pow(sender_pub, &r_q, p)?;
            obs.on_mod_mul();
            let base = params.g() * yar % p;
            obs.on_mod_mul();
            let exp = s * xb % q;
            obs.on_mod_exp();
            mod_pow(&base, &exp, p)?
        }
    };
    Ok(dh)
}

pub fn unsigncrypt(
    scheme: SchemeId,
    params: &GroupParams,
    profile: &PrimitiveProfile,
    receiver: &ReceiverKeys,
    sender_pub: &BigUint,
    ct: &SigncryptText,
) -> Result<UnsigncryptOutcome, SchemeError> {
    unsigncrypt_observed(
        scheme,
        params,
        profile,
        receiver,
        sender_pub,
        ct,
        &UnsigncryptOverrides::default(),
        &NoObserver,
    )
    .map(|(outcome, _)| outcome)
}

#[allow(clippy::too_many_arguments)]
pub fn unsigncrypt_observed<O: OpObserver>(
    scheme: SchemeId,
    params: &GroupParams,
    profile: &PrimitiveProfile,
    receiver: &ReceiverKeys,
    sender_pub: &BigUint,
    ct: &SigncryptText,
    overrides: &UnsigncryptOverrides,
    obs: &O,
) -> Result<(UnsigncryptOutcome, UnsigncryptTrace), SchemeError> {
    let want = profile.digest_length_bytes();
    if ct.r.len() != want {
        return Err(SchemeError::TagLength {
            got: ct.r.len(),
            want,
        });
    }
    if &ct.s >= params.q() {
        return Err(SchemeError::CiphertextScalarOutOfRange);
    }
    let r_int = tag_to_scalar(&ct.r, reduction_modulus(params, profile))?;
    let dh = recover_dh_observed(scheme, params, receiver, sender_pub, &ct.s, &r_int, obs)?;

    obs.on_hash_call();
    let k_material = derive_key_material(&dh, profile);
    let split = split_key(&k_material)?;
    let cipher_key = if overrides.zero_cipher_key {
        vec![0u8; split.k1.len()]
    } else {
        split.k1.clone()
    };
    let message = sym_decrypt(&cipher_key, &ct.c, profile);
    obs.on_hash_call();
    let expected_tag = keyed_hash(&split.k2, &message, profile);

    let trace = UnsigncryptTrace {
        recovered_dh: dh,
        tag_scalar: r_int,
    };
    if expected_tag == ct.r {
        Ok((UnsigncryptOutcome::Accepted(message), trace))
    } else {
        Ok((UnsigncryptOutcome::Rejected, trace))
    }
}

/// The cipher body that decrypts to `message` under the key material
/// derived from shared element `dh`. This is the sender's final step
/// factored out, so forgery probes holding a recovered `dh` can build the
/// most consistent candidate possible.
pub fn cipher_body_for_shared(dh: &BigUint, message: &[u8], profile: &PrimitiveProfile) -> Vec<u8> {
    let k_material = derive_key_material(dh, profile);
    let split = split_key(&k_material).expect("digest splits into two nonempty halves");
    sym_encrypt(&split.k1, message, profile)
}
