//! Prime-order subgroup parameters and modular arithmetic.
//!
//! Everything downstream works in the order-`q` subgroup of `(Z/pZ)*`
//! generated by `g`, where `p` and `q` are primes with `q | p - 1`. This
//! module owns parameter generation and validation, the modular primitives,
//! and uniform scalar sampling.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};
use std::fmt;
use std::sync::OnceLock;
use thiserror::Error;

/// Smallest `p` bit length the generator will accept. Parameters this small
/// are useful only for desk checking; validation of externally supplied
/// parameters has no such floor.
pub const MIN_P_BITS: u64 = 16;

/// Candidate budget for prime searches before generation gives up.
pub const DEFAULT_RETRY_BUDGET: u32 = 10_000;

/// Miller-Rabin rounds used everywhere. 40 rounds bound the error below
/// 4^-40 < 2^-80.
pub const MILLER_RABIN_ROUNDS: u32 = 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("modulus must be at least 2")]
    ModulusTooSmall,
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: BigUint, modulus: BigUint },
    #[error("p bit length {0} is below the generation floor of {MIN_P_BITS}")]
    BitLengthTooSmall(u64),
    #[error("q bit length {q_bits} must be at least 2 and smaller than p bit length {p_bits}")]
    BadQBitLength { q_bits: u64, p_bits: u64 },
    #[error("no suitable candidate found within the retry budget of {0}")]
    RetryBudgetExhausted(u32),
    #[error("exponent must lie in [0, q)")]
    ExponentOutOfRange,
    #[error("scalar must lie in [1, q-1]")]
    ScalarOutOfRange,
    #[error("base is not a member of the order-q subgroup")]
    NotInSubgroup,
    #[error("invalid group parameters: {0}")]
    InvalidParams(ValidationReport),
}

/// A single defect found while validating candidate parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamViolation {
    PNotPrime,
    QNotPrime,
    QDoesNotDividePMinusOne,
    GeneratorOutOfRange,
    GeneratorOrderNotQ,
}

impl fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            ParamViolation::PNotPrime => "p is not prime",
            ParamViolation::QNotPrime => "q is not prime",
            ParamViolation::QDoesNotDividePMinusOne => "q does not divide p-1",
            ParamViolation::GeneratorOutOfRange => "g is outside [2, p-1]",
            ParamViolation::GeneratorOrderNotQ => "g does not have order q",
        };
        f.write_str(text)
    }
}

/// Outcome of validating candidate parameters. Empty means valid.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    violations: Vec<ParamViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[ParamViolation] {
        &self.violations
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Public group parameters: primes `p`, `q` with `q | p - 1`, and `g` of
/// order `q` modulo `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupParams {
    p: BigUint,
    q: BigUint,
    g: BigUint,
    bit_length: u64,
}

impl GroupParams {
    /// Wraps raw values without validating them. `bit_length` is derived
    /// from `p`. Use [`GroupParams::validate`] (or [`GroupParams::checked`])
    /// before trusting the result.
    pub fn from_parts(p: BigUint, q: BigUint, g: BigUint) -> Self {
        let bit_length = p.bits();
        Self { p, q, g, bit_length }
    }

    /// Wraps and validates, returning every violation found on failure.
    pub fn checked(p: BigUint, q: BigUint, g: BigUint) -> Result<Self, GroupError> {
        let params = Self::from_parts(p, q, g);
        let report = params.validate();
        if report.is_valid() {
            Ok(params)
        } else {
            Err(GroupError::InvalidParams(report))
        }
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    pub fn g(&self) -> &BigUint {
        &self.g
    }

    /// Bit length of `p`.
    pub fn bit_length(&self) -> u64 {
        self.bit_length
    }

    /// Checks the structural requirements and reports every violation, not
    /// just the first. Primality is probabilistic with error below 2^-80;
    /// witnesses are drawn from a generator seeded from the candidate
    /// itself, so the report is deterministic for a given input.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut rng = rng_for_candidate(&self.p, &self.q, &self.g);

        if !is_probable_prime(&self.p, MILLER_RABIN_ROUNDS, &mut rng) {
            violations.push(ParamViolation::PNotPrime);
        }
        if !is_probable_prime(&self.q, MILLER_RABIN_ROUNDS, &mut rng) {
            violations.push(ParamViolation::QNotPrime);
        }
        let two = BigUint::from(2u32);
        if self.p >= two && self.q >= two {
            if !((&self.p - 1u32) % &self.q).is_zero() {
                violations.push(ParamViolation::QDoesNotDividePMinusOne);
            }
        } else {
            violations.push(ParamViolation::QDoesNotDividePMinusOne);
        }
        if self.g < two || self.g >= self.p {
            violations.push(ParamViolation::GeneratorOutOfRange);
        } else if !self.g.modpow(&self.q, &self.p).is_one() {
            violations.push(ParamViolation::GeneratorOrderNotQ);
        }

        ValidationReport { violations }
    }
}

/// A private exponent in `[1, q-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomScalar(BigUint);

impl RandomScalar {
    pub fn new(value: BigUint, q: &BigUint) -> Result<Self, GroupError> {
        if value.is_zero() || &value >= q {
            return Err(GroupError::ScalarOutOfRange);
        }
        Ok(Self(value))
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }
}

/// `base^exponent mod modulus`. Fails if `modulus < 2`.
pub fn mod_pow(base: &BigUint, exponent: &BigUint, modulus: &BigUint) -> Result<BigUint, GroupError> {
    if modulus < &BigUint::from(2u32) {
        return Err(GroupError::ModulusTooSmall);
    }
    Ok(base.modpow(exponent, modulus))
}

/// `a * b mod modulus`. Fails if `modulus < 2`.
pub fn mod_mul(a: &BigUint, b: &BigUint, modulus: &BigUint) -> Result<BigUint, GroupError> {
    if modulus < &BigUint::from(2u32) {
        return Err(GroupError::ModulusTooSmall);
    }
    Ok((a * b) % modulus)
}

/// Multiplicative inverse of `a` modulo `modulus`, in `[1, modulus-1]`.
pub fn mod_inverse(a: &BigUint, modulus: &BigUint) -> Result<BigUint, GroupError> {
    if modulus < &BigUint::from(2u32) {
        return Err(GroupError::ModulusTooSmall);
    }
    a.modinv(modulus).ok_or_else(|| GroupError::NotInvertible {
        value: a.clone(),
        modulus: modulus.clone(),
    })
}

/// `base^(-exponent) mod p` for a subgroup member `base`, computed as
/// `base^(q - exponent) mod p`. Requires `exponent < q`; the result is only
/// meaningful when `base` has order dividing `q`.
pub fn neg_pow(params: &GroupParams, base: &BigUint, exponent: &BigUint) -> BigUint {
    assert!(
        exponent < params.q(),
        "neg_pow exponent must lie in [0, q)"
    );
    base.modpow(&(params.q() - exponent), params.p())
}

/// Same value as [`neg_pow`] via the other route: invert `base^exponent`
/// modulo `p`. Kept as an independent cross-check of the `q - exponent`
/// shortcut.
pub fn neg_pow_via_inverse(
    params: &GroupParams,
    base: &BigUint,
    exponent: &BigUint,
) -> Result<BigUint, GroupError> {
    if exponent >= params.q() {
        return Err(GroupError::ExponentOutOfRange);
    }
    let forward = mod_pow(base, exponent, params.p())?;
    mod_inverse(&forward, params.p())
}

/// [`neg_pow`] with the preconditions turned into errors: `base` must be a
/// subgroup member and `exponent` must lie in `[0, q)`.
pub fn neg_pow_checked(
    params: &GroupParams,
    base: &BigUint,
    exponent: &BigUint,
) -> Result<BigUint, GroupError> {
    if exponent >= params.q() {
        return Err(GroupError::ExponentOutOfRange);
    }
    if !is_subgroup_member(params, base) {
        return Err(GroupError::NotInSubgroup);
    }
    Ok(neg_pow(params, base, exponent))
}

/// True when `y` lies in the order-`q` subgroup: `1 <= y <= p-1` and
/// `y^q = 1 (mod p)`.
pub fn is_subgroup_member(params: &GroupParams, y: &BigUint) -> bool {
    if y.is_zero() || y >= params.p() {
        return false;
    }
    y.modpow(params.q(), params.p()).is_one()
}

/// Stricter membership test for public keys: additionally excludes the
/// identity element.
pub fn is_valid_public_key(params: &GroupParams, y: &BigUint) -> bool {
    !y.is_one() && is_subgroup_member(params, y)
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = 1024usize;
        let mut sieve = vec![true; limit];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..limit {
            if sieve[i] {
                for j in (i * i..limit).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        (0..limit).filter(|&i| sieve[i]).map(|i| i as u32).collect()
    })
}

/// Miller-Rabin with `rounds` uniformly random witnesses. Error probability
/// is below `4^-rounds` for composite inputs; primes are never rejected.
pub fn is_probable_prime(n: &BigUint, rounds: u32, rng: &mut (impl RngCore + ?Sized)) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for &sp in small_primes() {
        let sp_big = BigUint::from(sp);
        if n == &sp_big {
            return true;
        }
        if (n % &sp_big).is_zero() {
            return false;
        }
    }
    // n is odd and larger than every small prime here.
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;

    'witness: for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &n_minus_one);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rng_for_candidate(p: &BigUint, q: &BigUint, g: &BigUint) -> ChaCha20Rng {
    let mut h = Sha256::new();
    h.update(b"sckit-param-validate");
    for v in [p, q, g] {
        let bytes = v.to_bytes_be();
        h.update((bytes.len() as u64).to_be_bytes());
        h.update(&bytes);
    }
    ChaCha20Rng::from_seed(h.finalize().into())
}

fn random_prime(
    bits: u64,
    budget: u32,
    rng: &mut (impl RngCore + ?Sized),
) -> Result<BigUint, GroupError> {
    for _ in 0..budget {
        let mut candidate = rng.gen_biguint(bits);
        candidate.set_bit(bits - 1, true);
        candidate.set_bit(0, true);
        if is_probable_prime(&candidate, MILLER_RABIN_ROUNDS, rng) {
            return Ok(candidate);
        }
    }
    Err(GroupError::RetryBudgetExhausted(budget))
}

/// Generates fresh parameters with the default retry budget.
pub fn generate_params(
    bit_length: u64,
    q_bit_length: u64,
    rng: &mut (impl RngCore + ?Sized),
) -> Result<GroupParams, GroupError> {
    generate_params_with_budget(bit_length, q_bit_length, rng, DEFAULT_RETRY_BUDGET)
}

/// Generates `p = k*q + 1` with `k` even, `p` of exactly `bit_length` bits,
/// `q` of exactly `q_bit_length` bits, and `g = h^((p-1)/q) != 1` for a
/// random `h`. Each prime search draws at most `budget` candidates.
pub fn generate_params_with_budget(
    bit_length: u64,
    q_bit_length: u64,
    rng: &mut (impl RngCore + ?Sized),
    budget: u32,
) -> Result<GroupParams, GroupError> {
    if bit_length < MIN_P_BITS {
        return Err(GroupError::BitLengthTooSmall(bit_length));
    }
    if q_bit_length < 2 || q_bit_length >= bit_length {
        return Err(GroupError::BadQBitLength {
            q_bits: q_bit_length,
            p_bits: bit_length,
        });
    }

    let q = random_prime(q_bit_length, budget, rng)?;

    let low = BigUint::one() << (bit_length - 1);
    let high = BigUint::one() << bit_length;
    // p = k*q + 1 with low <= p < high, k even so that p stays odd.
    let k_lo = (&low - 1u32).div_ceil(&q);
    let k_hi = (&high - 2u32) / &q;
    let half_lo = k_lo.div_ceil(&BigUint::from(2u32));
    let half_hi = &k_hi / 2u32;
    if half_lo > half_hi {
        return Err(GroupError::RetryBudgetExhausted(budget));
    }

    let mut p = None;
    for _ in 0..budget {
        let half = rng.gen_biguint_range(&half_lo, &(&half_hi + 1u32));
        let candidate = &half * 2u32 * &q + 1u32;
        debug_assert_eq!(candidate.bits(), bit_length);
        if is_probable_prime(&candidate, MILLER_RABIN_ROUNDS, rng) {
            p = Some(candidate);
            break;
        }
    }
    let p = p.ok_or(GroupError::RetryBudgetExhausted(budget))?;

    let cofactor = (&p - 1u32) / &q;
    let g = loop {
        let h = rng.gen_biguint_range(&BigUint::from(2u32), &(&p - 1u32));
        let g = h.modpow(&cofactor, &p);
        if !g.is_one() {
            break g;
        }
    };

    Ok(GroupParams::from_parts(p, q, g))
}

/// Uniform scalar in `[1, q-1]` by rejection sampling, so there is no
/// modulo bias.
pub fn random_scalar(params: &GroupParams, rng: &mut (impl RngCore + ?Sized)) -> RandomScalar {
    let q = params.q();
    let bits = q.bits();
    loop {
        let candidate = rng.gen_biguint(bits);
        if !candidate.is_zero() && &candidate < q {
            return RandomScalar(candidate);
        }
    }
}
