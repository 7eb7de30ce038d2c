//! The canonical text serialization for keys, parameters, signcryptexts,
//! and signatures.
//!
//! Files are line-oriented ASCII: a magic line, then `key value` lines in a
//! fixed order. Every integer and byte string is rendered as a
//! length-prefixed lowercase hex token, `<decimal hex-char count>:<hex>`,
//! so `0x17` serializes as `2:17`. Integers use the minimal big-endian
//! byte form (zero is `2:00`); byte strings keep their exact length,
//! leading zeros included. The parser is strict: field order is fixed,
//! unknown or duplicate lines are errors, and nothing here touches
//! cryptographic state, so malformed input dies in the parser.

use crate::group::GroupParams;
use crate::primitives::PrimitiveProfile;
use crate::schemes::{SchemeId, SigncryptText};
use crate::schnorr::SchnorrSignature;
use num_bigint::BigUint;
use num_traits::Zero;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const KEY_MAGIC: &str = "SCKIT1";
pub const CIPHERTEXT_MAGIC: &str = "SCKIT1-CT";
pub const SIGNATURE_MAGIC: &str = "SCKIT1-SIG";

/// The scheme token reserved for Schnorr signature key files, alongside
/// the three signcryption scheme tokens.
pub const SCHNORR_SIG_TOKEN: &str = "schnorr";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("bad magic: expected {expected:?}")]
    BadMagic { expected: &'static str },
    #[error("missing field {0:?}")]
    MissingField(&'static str),
    #[error("malformed field {field:?}: {reason}")]
    Malformed { field: &'static str, reason: String },
    #[error("unexpected content after the last field")]
    TrailingContent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyRole {
    Sender,
    Receiver,
    Schnorr,
}

impl KeyRole {
    pub fn token(self) -> &'static str {
        match self {
            KeyRole::Sender => "sender",
            KeyRole::Receiver => "receiver",
            KeyRole::Schnorr => "schnorr",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        match token {
            "sender" => Some(KeyRole::Sender),
            "receiver" => Some(KeyRole::Receiver),
            "schnorr" => Some(KeyRole::Schnorr),
            _ => None,
        }
    }
}

/// A parsed key file. `private_exponent` is `None` for public-only files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyFile {
    pub role: KeyRole,
    pub scheme_token: String,
    pub profile_token: String,
    pub params: GroupParams,
    pub public_element: BigUint,
    pub private_exponent: Option<BigUint>,
}

/// A params-only file, as written by parameter generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamsFile {
    pub profile_token: String,
    pub params: GroupParams,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CiphertextFile {
    pub scheme_token: String,
    pub profile_token: String,
    pub payload: SigncryptText,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureFile {
    pub profile_token: String,
    pub signature: SchnorrSignature,
}

// ---------------------------------------------------------------------------
// Token codec
// ---------------------------------------------------------------------------

pub fn encode_bytes(bytes: &[u8]) -> String {
    let hex = hex::encode(bytes);
    format!("{}:{}", hex.len(), hex)
}

pub fn encode_uint(value: &BigUint) -> String {
    encode_bytes(&value.to_bytes_be())
}

fn decode_token(field: &'static str, token: &str) -> Result<Vec<u8>, FormatError> {
    let malformed = |reason: &str| FormatError::Malformed {
        field,
        reason: reason.to_string(),
    };
    let (len_part, hex_part) = token
        .split_once(':')
        .ok_or_else(|| malformed("missing ':' length separator"))?;
    let len: usize = len_part
        .parse()
        .map_err(|_| malformed("length prefix is not a number"))?;
    // Re-render to reject non-canonical prefixes like "02" or "+2".
    if len.to_string() != len_part {
        return Err(malformed("length prefix is not canonical decimal"));
    }
    if hex_part.len() != len {
        return Err(malformed("length prefix does not match the hex payload"));
    }
    if len % 2 != 0 {
        return Err(malformed("hex payload must be whole bytes"));
    }
    if !hex_part
        .bytes()
        .all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b))
    {
        return Err(malformed("payload must be lowercase hex"));
    }
    hex::decode(hex_part).map_err(|_| malformed("invalid hex"))
}

fn decode_uint(field: &'static str, token: &str) -> Result<BigUint, FormatError> {
    let bytes = decode_token(field, token)?;
    if bytes.is_empty() {
        return Err(FormatError::Malformed {
            field,
            reason: "integers need at least one byte".to_string(),
        });
    }
    if bytes.len() > 1 && bytes[0] == 0 {
        return Err(FormatError::Malformed {
            field,
            reason: "integer encoding is not minimal".to_string(),
        });
    }
    Ok(BigUint::from_bytes_be(&bytes))
}

/// Hex SHA-256 of the exact serialized bytes; the identity shown to users.
pub fn fingerprint(serialized: &str) -> String {
    hex::encode(Sha256::digest(serialized.as_bytes()))
}

// ---------------------------------------------------------------------------
// Strict line reader
// ---------------------------------------------------------------------------

struct LineReader<'a> {
    lines: std::str::Lines<'a>,
}

impl<'a> LineReader<'a> {
    fn new(text: &'a str) -> Self {
        Self { lines: text.lines() }
    }

    fn expect_magic(&mut self, expected: &'static str) -> Result<(), FormatError> {
        match self.lines.next() {
            Some(line) if line == expected => Ok(()),
            _ => Err(FormatError::BadMagic { expected }),
        }
    }

    fn expect_field(&mut self, key: &'static str) -> Result<&'a str, FormatError> {
        let line = self.lines.next().ok_or(FormatError::MissingField(key))?;
        match line.split_once(' ') {
            Some((k, v)) if k == key && !v.is_empty() && !v.contains(' ') => Ok(v),
            _ => Err(FormatError::MissingField(key)),
        }
    }

    /// An optional trailing field: present with the right key, or absent.
    fn optional_field(&mut self, key: &'static str) -> Result<Option<&'a str>, FormatError> {
        match self.lines.next() {
            None => Ok(None),
            Some(line) => match line.split_once(' ') {
                Some((k, v)) if k == key && !v.is_empty() && !v.contains(' ') => Ok(Some(v)),
                _ => Err(FormatError::MissingField(key)),
            },
        }
    }

    fn expect_end(&mut self) -> Result<(), FormatError> {
        match self.lines.next() {
            None => Ok(()),
            Some(_) => Err(FormatError::TrailingContent),
        }
    }
}

fn check_profile_token(field: &'static str, token: &str) -> Result<String, FormatError> {
    PrimitiveProfile::from_token(token)
        .map(|p| p.token().to_string())
        .map_err(|_| FormatError::Malformed {
            field,
            reason: format!("unknown profile {token:?}"),
        })
}

fn check_scheme_token(
    field: &'static str,
    token: &str,
    allow_signature: bool,
) -> Result<String, FormatError> {
    let known = SchemeId::from_token(token).is_some()
        || (allow_signature && token == SCHNORR_SIG_TOKEN);
    if known {
        Ok(token.to_string())
    } else {
        Err(FormatError::Malformed {
            field,
            reason: format!("unknown scheme {token:?}"),
        })
    }
}

fn params_lines(out: &mut String, params: &GroupParams) {
    out.push_str(&format!("p {}\n", encode_uint(params.p())));
    out.push_str(&format!("q {}\n", encode_uint(params.q())));
    out.push_str(&format!("g {}\n", encode_uint(params.g())));
}

fn parse_params_lines(reader: &mut LineReader) -> Result<GroupParams, FormatError> {
    let p = decode_uint("p", reader.expect_field("p")?)?;
    let q = decode_uint("q", reader.expect_field("q")?)?;
    let g = decode_uint("g", reader.expect_field("g")?)?;
    if p.is_zero() || q.is_zero() {
        return Err(FormatError::Malformed {
            field: "p",
            reason: "group moduli cannot be zero".to_string(),
        });
    }
    Ok(GroupParams::from_parts(p, q, g))
}

// ---------------------------------------------------------------------------
// Key and params files
// ---------------------------------------------------------------------------

pub fn serialize_key_file(file: &KeyFile) -> String {
    let mut out = String::new();
    out.push_str(KEY_MAGIC);
    out.push('\n');
    out.push_str(&format!("role {}\n", file.role.token()));
    out.push_str(&format!("scheme {}\n", file.scheme_token));
    out.push_str(&format!("profile {}\n", file.profile_token));
    params_lines(&mut out, &file.params);
    out.push_str(&format!("pub {}\n", encode_uint(&file.public_element)));
    if let Some(private) = &file.private_exponent {
        out.push_str(&format!("priv {}\n", encode_uint(private)));
    }
    out
}

pub fn parse_key_file(text: &str) -> Result<KeyFile, FormatError> {
    let mut reader = LineReader::new(text);
    reader.expect_magic(KEY_MAGIC)?;
    let role_token = reader.expect_field("role")?;
    let role = KeyRole::from_token(role_token).ok_or_else(|| FormatError::Malformed {
        field: "role",
        reason: format!("unknown role {role_token:?}"),
    })?;
    let scheme_token = check_scheme_token(
        "scheme",
        reader.expect_field("scheme")?,
        role == KeyRole::Schnorr,
    )?;
    match role {
        KeyRole::Schnorr if scheme_token != SCHNORR_SIG_TOKEN => {
            return Err(FormatError::Malformed {
                field: "scheme",
                reason: "schnorr-role keys must use the schnorr scheme".to_string(),
            })
        }
        KeyRole::Sender | KeyRole::Receiver if scheme_token == SCHNORR_SIG_TOKEN => {
            return Err(FormatError::Malformed {
                field: "scheme",
                reason: "signcryption keys need a signcryption scheme".to_string(),
            })
        }
        _ => {}
    }
    let profile_token = check_profile_token("profile", reader.expect_field("profile")?)?;
    let params = parse_params_lines(&mut reader)?;
    let public_element = decode_uint("pub", reader.expect_field("pub")?)?;
    let private_exponent = reader
        .optional_field("priv")?
        .map(|token| decode_uint("priv", token))
        .transpose()?;
    reader.expect_end()?;
    Ok(KeyFile {
        role,
        scheme_token,
        profile_token,
        params,
        public_element,
        private_exponent,
    })
}

pub fn serialize_params_file(file: &ParamsFile) -> String {
    let mut out = String::new();
    out.push_str(KEY_MAGIC);
    out.push('\n');
    out.push_str(&format!("profile {}\n", file.profile_token));
    params_lines(&mut out, &file.params);
    out
}

pub fn parse_params_file(text: &str) -> Result<ParamsFile, FormatError> {
    let mut reader = LineReader::new(text);
    reader.expect_magic(KEY_MAGIC)?;
    let profile_token = check_profile_token("profile", reader.expect_field("profile")?)?;
    let params = parse_params_lines(&mut reader)?;
    reader.expect_end()?;
    Ok(ParamsFile {
        profile_token,
        params,
    })
}

// ---------------------------------------------------------------------------
// Ciphertext files
// ---------------------------------------------------------------------------

pub fn serialize_ciphertext_file(file: &CiphertextFile) -> String {
    let mut out = String::new();
    out.push_str(CIPHERTEXT_MAGIC);
    out.push('\n');
    out.push_str(&format!("scheme {}\n", file.scheme_token));
    out.push_str(&format!("profile {}\n", file.profile_token));
    out.push_str(&format!("r {}\n", encode_bytes(&file.payload.r)));
    out.push_str(&format!("s {}\n", encode_uint(&file.payload.s)));
    out.push_str(&format!("c {}\n", encode_bytes(&file.payload.c)));
    out
}

pub fn parse_ciphertext_file(text: &str) -> Result<CiphertextFile, FormatError> {
    let mut reader = LineReader::new(text);
    reader.expect_magic(CIPHERTEXT_MAGIC)?;
    let scheme_token = check_scheme_token("scheme", reader.expect_field("scheme")?, false)?;
    let profile_token = check_profile_token("profile", reader.expect_field("profile")?)?;
    let r = decode_token("r", reader.expect_field("r")?)?;
    let s = decode_uint("s", reader.expect_field("s")?)?;
    let c = decode_token("c", reader.expect_field("c")?)?;
    reader.expect_end()?;
    Ok(CiphertextFile {
        scheme_token,
        profile_token,
        payload: SigncryptText { r, s, c },
    })
}

// ---------------------------------------------------------------------------
// Signature files
// ---------------------------------------------------------------------------

pub fn serialize_signature_file(file: &SignatureFile) -> String {
    let mut out = String::new();
    out.push_str(SIGNATURE_MAGIC);
    out.push('\n');
    out.push_str(&format!("profile {}\n", file.profile_token));
    out.push_str(&format!("s {}\n", encode_uint(&file.signature.s)));
    out.push_str(&format!("e {}\n", encode_uint(&file.signature.e)));
    out
}

pub fn parse_signature_file(text: &str) -> Result<SignatureFile, FormatError> {
    let mut reader = LineReader::new(text);
    reader.expect_magic(SIGNATURE_MAGIC)?;
    let profile_token = check_profile_token("profile", reader.expect_field("profile")?)?;
    let s = decode_uint("s", reader.expect_field("s")?)?;
    let e = decode_uint("e", reader.expect_field("e")?)?;
    reader.expect_end()?;
    Ok(SignatureFile {
        profile_token,
        signature: SchnorrSignature { s, e },
    })
}
