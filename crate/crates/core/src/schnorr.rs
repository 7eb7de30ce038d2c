//! Baseline Schnorr signatures over the prime-order subgroup.
//!
//! Sign: pick nonce `k`, `r = g^k mod p`, `e = H(M || r) mod q`,
//! `s = k - x*e mod q`. Verify: `r_v = g^s * y^e mod p`, accept iff
//! `H(M || r_v) mod q` equals `e`. The byte form of `M || r` is
//! length-prefixed (8-byte big-endian length of `M`, then `M`, then the
//! profile encoding of `r`) to keep the concatenation unambiguous.

use crate::group::{mod_pow, random_scalar, GroupParams, RandomScalar};
use crate::observe::{NoObserver, OpObserver};
use crate::primitives::{encode_int, hash_bytes, tag_to_scalar, PrimitiveProfile};
use num_bigint::BigUint;
use num_traits::Zero;
use rand::RngCore;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchnorrKeyPair {
    x: RandomScalar,
    y: BigUint,
}

impl SchnorrKeyPair {
    pub fn generate(params: &GroupParams, rng: &mut (impl RngCore + ?Sized)) -> Self {
        Self::from_private(params, random_scalar(params, rng))
    }

    /// Builds the pair for a known private scalar: `y = g^x mod p`.
    pub fn from_private(params: &GroupParams, x: RandomScalar) -> Self {
        let y = params.g().modpow(x.value(), params.p());
        Self { x, y }
    }

    pub fn public(&self) -> &BigUint {
        &self.y
    }

    pub fn private(&self) -> &RandomScalar {
        &self.x
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchnorrSignature {
    pub s: BigUint,
    pub e: BigUint,
}

/// `H(len(M) || M || encode(r)) mod q`.
fn challenge_scalar<O: OpObserver>(
    params: &GroupParams,
    profile: &PrimitiveProfile,
    message: &[u8],
    r: &BigUint,
    obs: &O,
) -> BigUint {
    let r_bytes = encode_int(profile, r);
    let mut data = Vec::with_capacity(8 + message.len() + r_bytes.len());
    data.extend_from_slice(&(message.len() as u64).to_be_bytes());
    data.extend_from_slice(message);
    data.extend_from_slice(&r_bytes);
    obs.on_hash_call();
    let digest = hash_bytes(profile.hash_id, &data);
    tag_to_scalar(&digest, params.q()).expect("q >= 2 for valid params")
}

pub fn sign(
    params: &GroupParams,
    keypair: &SchnorrKeyPair,
    message: &[u8],
    rng: &mut (impl RngCore + ?Sized),
    profile: &PrimitiveProfile,
) -> SchnorrSignature {
    let nonce = random_scalar(params, rng);
    sign_with_fixed_nonce_observed(params, keypair, message, &nonce, profile, &NoObserver)
}

/// Deterministic signing with a caller-chosen nonce. Reusing a nonce across
/// two messages reveals the private key; this exists for regression vectors
/// and instrumented tests, not protocol use.
pub fn sign_with_fixed_nonce(
    params: &GroupParams,
    keypair: &SchnorrKeyPair,
    message: &[u8],
    nonce: &RandomScalar,
    profile: &PrimitiveProfile,
) -> SchnorrSignature {
    sign_with_fixed_nonce_observed(params, keypair, message, nonce, profile, &NoObserver)
}

pub fn sign_observed<O: OpObserver>(
    params: &GroupParams,
    keypair: &SchnorrKeyPair,
    message: &[u8],
    rng: &mut (impl RngCore + ?Sized),
    profile: &PrimitiveProfile,
    obs: &O,
) -> SchnorrSignature {
    let nonce = random_scalar(params, rng);
    sign_with_fixed_nonce_observed(params, keypair, message, &nonce, profile, obs)
}

fn sign_with_fixed_nonce_observed<O: OpObserver>(
    params: &GroupParams,
    keypair: &SchnorrKeyPair,
    message: &[u8],
    nonce: &RandomScalar,
    profile: &PrimitiveProfile,
    obs: &O,
) -> SchnorrSignature {
    let q = params.q();
    obs.on_mod_exp();
    let r = mod_pow(params.g(), nonce.value(), params.p()).expect("valid params");
    let e = challenge_scalar(params, profile, message, &r, obs);
    obs.on_mod_mul();
    let xe = keypair.x.value() * &e % q;
    let s = (nonce.value() + (q - xe)) % q;
    SchnorrSignature { s, e }
}

pub fn verify(
    params: &GroupParams,
    public_y: &BigUint,
    message: &[u8],
    sig: &SchnorrSignature,
    profile: &PrimitiveProfile,
) -> bool {
    verify_traced_observed(params, public_y, message, sig, profile, &NoObserver).0
}

pub fn verify_observed<O: OpObserver>(
    params: &GroupParams,
    public_y: &BigUint,
    message: &[u8],
    sig: &SchnorrSignature,
    profile: &PrimitiveProfile,
    obs: &O,
) -> bool {
    verify_traced_observed(params, public_y, message, sig, profile, obs).0
}

/// Like [`verify`] but also returns the recomputed commitment `r_v`, so
/// tests can assert the identity `r_v = g^(k-xe) * g^(xe) = g^k = r`
/// directly. `r_v` is `None` when the signature is structurally invalid.
pub fn verify_traced(
    params: &GroupParams,
    public_y: &BigUint,
    message: &[u8],
    sig: &SchnorrSignature,
    profile: &PrimitiveProfile,
) -> (bool, Option<BigUint>) {
    verify_traced_observed(params, public_y, message, sig, profile, &NoObserver)
}

fn verify_traced_observed<O: OpObserver>(
    params: &GroupParams,
    public_y: &BigUint,
    message: &[u8],
    sig: &SchnorrSignature,
    profile: &PrimitiveProfile,
    obs: &O,
) -> (bool, Option<BigUint>) {
    let (p, q) = (params.p(), params.q());
    if &sig.s >= q || &sig.e >= q || public_y.is_zero() || public_y >= p {
        return (false, None);
    }
    obs.on_mod_exp();
    let gs = mod_pow(params.g(), &sig.s, p).expect("valid params");
    obs.on_mod_exp();
    let ye = mod_pow(public_y, &sig.e, p).expect("valid params");
    obs.on_mod_mul();
    let r_v = gs * ye % p;
    let e_v = challenge_scalar(params, profile, message, &r_v, obs);
    (e_v == sig.e, Some(r_v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::generate_params;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn paper_params() -> GroupParams {
        GroupParams::from_parts(
            BigUint::from(23u32),
            BigUint::from(11u32),
            BigUint::from(2u32),
        )
    }

    fn profile() -> PrimitiveProfile {
        PrimitiveProfile::modern_default()
    }

    #[test]
    fn fixed_nonce_regression_vector() {
        // Frozen from an independent straight-line evaluation: x = 4,
        // k = 7, M = "schnorr fixed vector" on (23, 11, 2) with the
        // modern profile gives r = 13, e = 4, s = 2.
        let params = paper_params();
        let keypair = SchnorrKeyPair::from_private(
            &params,
            RandomScalar::new(BigUint::from(4u32), params.q()).unwrap(),
        );
        assert_eq!(keypair.public(), &BigUint::from(16u32));
        let nonce = RandomScalar::new(BigUint::from(7u32), params.q()).unwrap();
        let sig = sign_with_fixed_nonce(&params, &keypair, b"schnorr fixed vector", &nonce, &profile());
        assert_eq!(sig.e, BigUint::from(4u32));
        assert_eq!(sig.s, BigUint::from(2u32));

        let (ok, r_v) = verify_traced(
            &params,
            keypair.public(),
            b"schnorr fixed vector",
            &sig,
            &profile(),
        );
        assert!(ok);
        assert_eq!(r_v, Some(BigUint::from(13u32)));
    }

    #[test]
    fn straight_line_dual_route_agrees_with_sign() {
        // Draw the nonce from a cloned rng and recompute the signature by
        // direct formula application; the library path must match.
        let params = paper_params();
        let prof = profile();
        let mut rng = ChaCha20Rng::seed_from_u64(99);
        let keypair = SchnorrKeyPair::generate(&params, &mut rng);
        let msg = b"dual route message";

        let mut rng_lib = rng.clone();
        let sig = sign(&params, &keypair, msg, &mut rng_lib, &prof);

        let nonce = random_scalar(&params, &mut rng);
        let r = params.g().modpow(nonce.value(), params.p());
        let r_bytes = encode_int(&prof, &r);
        let mut data = Vec::new();
        data.extend_from_slice(&(msg.len() as u64).to_be_bytes());
        data.extend_from_slice(msg);
        data.extend_from_slice(&r_bytes);
        let e = tag_to_scalar(&hash_bytes(prof.hash_id, &data), params.q()).unwrap();
        let xe = keypair.private().value() * &e % params.q();
        let s = (nonce.value() + (params.q() - xe)) % params.q();

        assert_eq!(sig, SchnorrSignature { s, e });
    }

    #[test]
    fn completeness_small_and_generated_groups() {
        let prof = profile();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let groups = [paper_params(), generate_params(64, 32, &mut rng).unwrap()];
        for params in &groups {
            for i in 0..200u32 {
                let keypair = SchnorrKeyPair::generate(params, &mut rng);
                let msg = format!("message number {i}");
                let sig = sign(params, &keypair, msg.as_bytes(), &mut rng, &prof);
                assert!(&sig.s < params.q());
                assert!(&sig.e < params.q());
                let (ok, r_v) = verify_traced(params, keypair.public(), msg.as_bytes(), &sig, &prof);
                assert!(ok, "round-trip failed at iteration {i}");
                assert!(r_v.is_some());
            }
        }
    }

    #[test]
    fn tampered_message_fails() {
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let params = generate_params(64, 32, &mut rng).unwrap();
        let prof = profile();
        for i in 0..100u32 {
            let keypair = SchnorrKeyPair::generate(&params, &mut rng);
            let mut msg = format!("tamper target {i}").into_bytes();
            let sig = sign(&params, &keypair, &msg, &mut rng, &prof);
            let bit = (rng.next_u32() as usize) % (msg.len() * 8);
            msg[bit / 8] ^= 1 << (bit % 8);
            assert!(
                !verify(&params, keypair.public(), &msg, &sig, &prof),
                "flip accepted at iteration {i}"
            );
        }
    }

    #[test]
    fn zero_signature_rejected_against_random_keys() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let params = generate_params(64, 32, &mut rng).unwrap();
        let prof = profile();
        let sig = SchnorrSignature {
            s: BigUint::zero(),
            e: BigUint::zero(),
        };
        for _ in 0..100 {
            let keypair = SchnorrKeyPair::generate(&params, &mut rng);
            assert!(!verify(&params, keypair.public(), b"msg", &sig, &prof));
        }
    }

    #[test]
    fn structural_problems_return_false() {
        let params = paper_params();
        let prof = profile();
        let y = BigUint::from(16u32);
        let bad_s = SchnorrSignature {
            s: BigUint::from(11u32),
            e: BigUint::from(3u32),
        };
        assert!(!verify(&params, &y, b"m", &bad_s, &prof));
        let bad_e = SchnorrSignature {
            s: BigUint::from(3u32),
            e: BigUint::from(12u32),
        };
        assert!(!verify(&params, &y, b"m", &bad_e, &prof));
        let ok_sig = SchnorrSignature {
            s: BigUint::from(3u32),
            e: BigUint::from(3u32),
        };
        assert!(!verify(&params, &BigUint::zero(), b"m", &ok_sig, &prof));
        assert!(!verify(&params, &BigUint::from(23u32), b"m", &ok_sig, &prof));
    }

    #[test]
    fn different_nonces_give_different_signatures() {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let params = generate_params(64, 32, &mut rng).unwrap();
        let prof = profile();
        let keypair = SchnorrKeyPair::generate(&params, &mut rng);
        let mut distinct = 0;
        for _ in 0..200 {
            let a = sign(&params, &keypair, b"fixed message", &mut rng, &prof);
            let b = sign(&params, &keypair, b"fixed message", &mut rng, &prof);
            if a != b {
                distinct += 1;
            }
        }
        assert!(distinct >= 199, "only {distinct} of 200 pairs were distinct");
    }
}
