//! Hash, keyed hash, key derivation, and the symmetric cipher.
//!
//! All choices that the schemes depend on are bundled into a
//! [`PrimitiveProfile`]. Two profiles are registered:
//!
//! * `paper-compat`: SHA-1, HMAC-SHA1, decimal-string integer encoding,
//!   tag reduced mod p. Reproduces the legacy digests of the reference
//!   implementation this library was checked against.
//! * `modern-default`: SHA-256, HMAC-SHA256, big-endian minimal-byte
//!   integer encoding, tag reduced mod q.
//!
//! The symmetric cipher is a hash keystream in counter mode for both
//! profiles: zero ciphertext expansion, decryption = encryption.

use hmac::{Hmac, Mac};
use num_bigint::BigUint;
use sha1::Sha1;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrimitiveError {
    #[error("key material must be at least 2 bytes to split")]
    SplitTooShort,
    #[error("reduction modulus must be at least 2")]
    ReductionModulusTooSmall,
    #[error("unknown profile token {0:?}")]
    UnknownProfile(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HashId {
    Sha1,
    Sha256,
}

impl HashId {
    pub fn digest_length_bytes(self) -> usize {
        match self {
            HashId::Sha1 => 20,
            HashId::Sha256 => 32,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyedHashId {
    /// Standard HMAC over the profile hash.
    Hmac,
    /// The literal `hash(key || message)` shorthand. Kept for completeness;
    /// no registered profile uses it.
    PrefixConcat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CipherId {
    /// XOR with `hash(key || counter)` blocks. Zero expansion.
    HashCtr,
}

/// How integers become bytes before hashing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntEncoding {
    /// ASCII base-10, e.g. 13 -> "13".
    DecimalString,
    /// Minimal big-endian bytes, e.g. 13 -> 0x0d. Zero encodes as one 0x00.
    BigEndianMinimal,
}

/// Which modulus reduces the transmitted tag to the scalar r used in the
/// s-formula and exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagReduction {
    ModP,
    ModQ,
}

pub const PROFILE_PAPER_COMPAT: &str = "paper-compat";
pub const PROFILE_MODERN_DEFAULT: &str = "modern-default";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveProfile {
    pub token: &'static str,
    pub hash_id: HashId,
    pub keyed_hash_id: KeyedHashId,
    pub cipher_id: CipherId,
    pub int_encoding: IntEncoding,
    pub tag_reduction: TagReduction,
}

impl PrimitiveProfile {
    pub fn paper_compat() -> Self {
        Self {
            token: PROFILE_PAPER_COMPAT,
            hash_id: HashId::Sha1,
            keyed_hash_id: KeyedHashId::Hmac,
            cipher_id: CipherId::HashCtr,
            int_encoding: IntEncoding::DecimalString,
            tag_reduction: TagReduction::ModP,
        }
    }

    pub fn modern_default() -> Self {
        Self {
            token: PROFILE_MODERN_DEFAULT,
            hash_id: HashId::Sha256,
            keyed_hash_id: KeyedHashId::Hmac,
            cipher_id: CipherId::HashCtr,
            int_encoding: IntEncoding::BigEndianMinimal,
            tag_reduction: TagReduction::ModQ,
        }
    }

    /// Resolves one of the registered serialization tokens.
    pub fn from_token(token: &str) -> Result<Self, PrimitiveError> {
        match token {
            PROFILE_PAPER_COMPAT => Ok(Self::paper_compat()),
            PROFILE_MODERN_DEFAULT => Ok(Self::modern_default()),
            other => Err(PrimitiveError::UnknownProfile(other.to_string())),
        }
    }

    pub fn token(&self) -> &'static str {
        self.token
    }

    pub fn digest_length_bytes(&self) -> usize {
        self.hash_id.digest_length_bytes()
    }
}

/// Plain hash of `data` under the profile's hash function.
pub fn hash_bytes(hash_id: HashId, data: &[u8]) -> Vec<u8> {
    match hash_id {
        HashId::Sha1 => Sha1::digest(data).to_vec(),
        HashId::Sha256 => Sha256::digest(data).to_vec(),
    }
}

/// Canonical integer-to-bytes encoding used before hashing.
pub fn encode_int(profile: &PrimitiveProfile, value: &BigUint) -> Vec<u8> {
    match profile.int_encoding {
        IntEncoding::DecimalString => value.to_str_radix(10).into_bytes(),
        IntEncoding::BigEndianMinimal => value.to_bytes_be(),
    }
}

/// `hash(encode(dh_value))`, the key material both parties derive from the
/// shared group element.
pub fn derive_key_material(dh_value: &BigUint, profile: &PrimitiveProfile) -> Vec<u8> {
    hash_bytes(profile.hash_id, &encode_int(profile, dh_value))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeySplit {
    pub k1: Vec<u8>,
    pub k2: Vec<u8>,
}

/// Splits key material into the cipher key `k1` (first half) and the tag
/// key `k2` (second half; takes the extra byte when the length is odd).
pub fn split_key(k_material: &[u8]) -> Result<KeySplit, PrimitiveError> {
    if k_material.len() < 2 {
        return Err(PrimitiveError::SplitTooShort);
    }
    let half = k_material.len() / 2;
    Ok(KeySplit {
        k1: k_material[..half].to_vec(),
        k2: k_material[half..].to_vec(),
    })
}

/// Keyed one-way hash `KH_key(message)`.
pub fn keyed_hash(key: &[u8], message: &[u8], profile: &PrimitiveProfile) -> Vec<u8> {
    match (profile.keyed_hash_id, profile.hash_id) {
        (KeyedHashId::Hmac, HashId::Sha1) => {
            let mut mac = Hmac::<Sha1>::new_from_slice(key).expect("HMAC accepts any key length");
            mac.update(message);
            mac.finalize().into_bytes().to_vec()
        }
        (KeyedHashId::Hmac, HashId::Sha256) => {
            let mut mac =
                Hmac::<Sha256>::new_from_slice(key).expect("HMAC accepts any key length");
            mac.update(message);
            mac.finalize().into_bytes().to_vec()
        }
        (KeyedHashId::PrefixConcat, hash_id) => {
            let mut data = Vec::with_capacity(key.len() + message.len());
            data.extend_from_slice(key);
            data.extend_from_slice(message);
            hash_bytes(hash_id, &data)
        }
    }
}

/// Interprets a tag as a big-endian unsigned integer and reduces it.
pub fn tag_to_scalar(tag: &[u8], reduction_modulus: &BigUint) -> Result<BigUint, PrimitiveError> {
    if reduction_modulus < &BigUint::from(2u32) {
        return Err(PrimitiveError::ReductionModulusTooSmall);
    }
    Ok(BigUint::from_bytes_be(tag) % reduction_modulus)
}

fn xor_keystream(hash_id: HashId, key: &[u8], data: &[u8]) -> Vec<u8> {
    let block_len = hash_id.digest_length_bytes();
    let mut out = Vec::with_capacity(data.len());
    let mut counter: u64 = 0;
    while out.len() < data.len() {
        let mut block_input = Vec::with_capacity(key.len() + 8);
        block_input.extend_from_slice(key);
        block_input.extend_from_slice(&counter.to_be_bytes());
        let block = hash_bytes(hash_id, &block_input);
        let offset = out.len();
        let take = block_len.min(data.len() - offset);
        for (b, d) in block[..take].iter().zip(&data[offset..offset + take]) {
            out.push(b ^ d);
        }
        counter += 1;
    }
    out
}

/// Encrypts with the profile's cipher. Zero expansion for the keystream
/// cipher; the empty message maps to the empty ciphertext.
pub fn sym_encrypt(key: &[u8], plaintext: &[u8], profile: &PrimitiveProfile) -> Vec<u8> {
    assert!(!key.is_empty(), "cipher key must be nonempty");
    match profile.cipher_id {
        CipherId::HashCtr => xor_keystream(profile.hash_id, key, plaintext),
    }
}

/// Inverse of [`sym_encrypt`]. The keystream cipher is an involution, so
/// this is the same XOR pass.
pub fn sym_decrypt(key: &[u8], ciphertext: &[u8], profile: &PrimitiveProfile) -> Vec<u8> {
    assert!(!key.is_empty(), "cipher key must be nonempty");
    match profile.cipher_id {
        CipherId::HashCtr => xor_keystream(profile.hash_id, key, ciphertext),
    }
}
