//! The acceptance gate: one test per shipping criterion, each printing a
//! single pass/fail line (visible with `--nocapture`). Every tolerance is
//! pinned in the assertion it belongs to.

use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine;
use num_bigint::BigUint;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sckit_core::cost::{count_ops, measure_expansion, time_schemes};
use sckit_core::games::{
    run_confidentiality_game, run_game_batch, run_insider_nonrepudiation_probe,
    run_outsider_authenticity_probe, GameConfig, NullAdversary, Position, RestrictionTester,
    SabotageExploiter, Setting,
};
use sckit_core::group::{generate_params, random_scalar, GroupParams, RandomScalar};
use sckit_core::observe::NoObserver;
use sckit_core::primitives::{derive_key_material, split_key, PrimitiveProfile};
use sckit_core::schemes::{
    keygen_receiver, keygen_sender, recover_dh, receiver_from_private, sender_from_private,
    signcrypt, signcrypt_observed, unsigncrypt, SchemeId, SigncryptOverrides, UnsigncryptOutcome,
    ALL_SCHEMES,
};
use sckit_core::schnorr::{sign_with_fixed_nonce, verify_traced, SchnorrKeyPair};
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

fn criterion<F: FnOnce()>(number: u32, name: &str, body: F) {
    let result = catch_unwind(AssertUnwindSafe(body));
    let verdict = if result.is_ok() { "PASS" } else { "FAIL" };
    println!("criterion {number} ({name}): {verdict}");
    if let Err(payload) = result {
        resume_unwind(payload);
    }
}

fn small_group() -> GroupParams {
    GroupParams::checked(
        BigUint::from(23u32),
        BigUint::from(11u32),
        BigUint::from(2u32),
    )
    .expect("reference group is valid")
}

fn scalar(value: u32, q: u32) -> RandomScalar {
    RandomScalar::new(BigUint::from(value), &BigUint::from(q)).expect("in range")
}

/// 64-bit group shared by the bulk statistical criteria.
fn medium_group() -> &'static GroupParams {
    static PARAMS: OnceLock<GroupParams> = OnceLock::new();
    PARAMS.get_or_init(|| {
        let mut rng = ChaCha20Rng::seed_from_u64(640_320);
        generate_params(64, 32, &mut rng).expect("64-bit generation succeeds")
    })
}

/// Production-size group shared by the overhead and timing criteria.
fn large_group() -> &'static GroupParams {
    static PARAMS: OnceLock<GroupParams> = OnceLock::new();
    PARAMS.get_or_init(|| {
        let mut rng = ChaCha20Rng::seed_from_u64(1_024_160);
        generate_params(1024, 160, &mut rng).expect("1024-bit generation succeeds")
    })
}

#[test]
fn criterion_01_worked_example_reproduction() {
    criterion(1, "worked-example reproduction", || {
        let params = small_group();
        let profile = PrimitiveProfile::paper_compat();
        let started = Instant::now();

        let sender = sender_from_private(SchemeId::SchnorrSc, &params, scalar(4, 11));
        let receiver = receiver_from_private(SchemeId::SchnorrSc, &params, scalar(5, 11));
        // Equalities 1 and 2: the published key pair.
        assert_eq!(sender.public_element(), &BigUint::from(13u32));
        assert_eq!(receiver.public_element(), &BigUint::from(18u32));

        let nonce = scalar(3, 11);
        let forced_tag = BigUint::from(3u32);
        let overrides = SigncryptOverrides {
            nonce: Some(&nonce),
            tag_scalar: Some(&forced_tag),
            ..Default::default()
        };
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        let (ct, trace) = signcrypt_observed(
            SchemeId::SchnorrSc,
            &params,
            &profile,
            &sender,
            receiver.public_element(),
            b"example",
            &mut rng,
            &overrides,
            &NoObserver,
        )
        .expect("signcrypt succeeds");
        // Equalities 3 and 4: shared element and ciphertext scalar.
        assert_eq!(trace.dh, BigUint::from(13u32));
        assert_eq!(ct.s, BigUint::from(4u32));

        // Equality 5: the receiver recovers the same shared element from
        // (s = 4, r = 3) alone.
        let recovered = recover_dh(
            SchemeId::SchnorrSc,
            &params,
            &receiver,
            sender.public_element(),
            &ct.s,
            &forced_tag,
        )
        .expect("receiver algebra succeeds");
        assert_eq!(recovered, BigUint::from(13u32));

        let elapsed = started.elapsed();
        assert!(
            elapsed < Duration::from_millis(1),
            "worked example took {elapsed:?}, budget is 1 ms"
        );
    });
}

#[test]
fn criterion_02_legacy_digest_compatibility() {
    criterion(2, "legacy digest compatibility", || {
        let profile = PrimitiveProfile::paper_compat();
        let material = derive_key_material(&BigUint::from(13u32), &profile);
        let split = split_key(&material).expect("20 bytes split");

        let published_material = "vTB6PsMp4Qos/4+4dICCPaEU+PQ=";
        let published_k1 = "vTB6PsMp4Qos/w==";
        let published_k2 = "j7h0gII9oRT49A==";
        let computed_material = B64.encode(&material);
        let computed_k1 = B64.encode(&split.k1);
        let computed_k2 = B64.encode(&split.k2);

        for (label, computed, published) in [
            ("key material", &computed_material, published_material),
            ("k1", &computed_k1, published_k1),
            ("k2", &computed_k2, published_k2),
        ] {
            if computed != published {
                // The reference rendering is the only binary vector there
                // is; a mismatch must be documented, never skipped.
                println!(
                    "criterion 2 DISCREPANCY ({label}): computed {computed}, published {published}"
                );
            }
            assert_eq!(computed, published, "{label} rendering");
        }
    });
}

#[test]
fn criterion_03_completeness() {
    criterion(3, "completeness", || {
        let started = Instant::now();
        let medium = medium_group();
        let small = small_group();
        let modern = PrimitiveProfile::modern_default();
        let legacy = PrimitiveProfile::paper_compat();
        let mut rng = ChaCha20Rng::seed_from_u64(3_000);

        for scheme in ALL_SCHEMES {
            let sender = keygen_sender(scheme, medium, &mut rng);
            let receiver = keygen_receiver(scheme, medium, &mut rng);
            for i in 0..1000u32 {
                let message = format!("completeness {scheme:?} {i}");
                let ct = signcrypt(
                    scheme,
                    medium,
                    &modern,
                    &sender,
                    receiver.public_element(),
                    message.as_bytes(),
                    &mut rng,
                )
                .expect("signcrypt succeeds");
                let outcome = unsigncrypt(
                    scheme,
                    medium,
                    &modern,
                    &receiver,
                    sender.public_element(),
                    &ct,
                )
                .expect("structurally valid");
                assert_eq!(
                    outcome,
                    UnsigncryptOutcome::Accepted(message.into_bytes()),
                    "{scheme:?} iteration {i}"
                );
            }

            let sender = keygen_sender(scheme, &small, &mut rng);
            let receiver = keygen_receiver(scheme, &small, &mut rng);
            for i in 0..100u32 {
                let message = format!("tiny-group {i}");
                let ct = signcrypt(
                    scheme,
                    &small,
                    &legacy,
                    &sender,
                    receiver.public_element(),
                    message.as_bytes(),
                    &mut rng,
                )
                .expect("signcrypt succeeds");
                let outcome = unsigncrypt(
                    scheme,
                    &small,
                    &legacy,
                    &receiver,
                    sender.public_element(),
                    &ct,
                )
                .expect("structurally valid");
                assert_eq!(outcome, UnsigncryptOutcome::Accepted(message.into_bytes()));
            }
        }

        let elapsed = started.elapsed();
        assert!(
            elapsed < Duration::from_secs(30),
            "completeness run took {elapsed:?}, budget is 30 s"
        );
    });
}

#[test]
fn criterion_04_tamper_rejection() {
    criterion(4, "tamper rejection", || {
        let params = medium_group();
        let profile = PrimitiveProfile::modern_default();
        let mut rng = ChaCha20Rng::seed_from_u64(4_000);
        let q_width = ((params.q().bits() + 7) / 8) as usize;

        for scheme in ALL_SCHEMES {
            let sender = keygen_sender(scheme, params, &mut rng);
            let receiver = keygen_receiver(scheme, params, &mut rng);
            let mut rejections = 0u32;
            for i in 0..1000u32 {
                let message = format!("tamper target {}", i / 100);
                let ct = signcrypt(
                    scheme,
                    params,
                    &profile,
                    &sender,
                    receiver.public_element(),
                    message.as_bytes(),
                    &mut rng,
                )
                .expect("signcrypt succeeds");

                let mut mutated = ct.clone();
                match i % 3 {
                    0 => {
                        let bit = rng.next_u32() as usize % (mutated.r.len() * 8);
                        mutated.r[bit / 8] ^= 1 << (bit % 8);
                    }
                    1 => {
                        let mut bytes = mutated.s.to_bytes_be();
                        while bytes.len() < q_width {
                            bytes.insert(0, 0);
                        }
                        let bit = rng.next_u32() as usize % (bytes.len() * 8);
                        bytes[bit / 8] ^= 1 << (bit % 8);
                        mutated.s = BigUint::from_bytes_be(&bytes);
                    }
                    _ => {
                        let bit = rng.next_u32() as usize % (mutated.c.len() * 8);
                        mutated.c[bit / 8] ^= 1 << (bit % 8);
                    }
                }
                assert_ne!(mutated, ct, "flip must change the triple");

                // A flip either perturbs the algebra (structural error,
                // e.g. s pushed out of range) or reaches the tag check and
                // is rejected; both are non-acceptance.
                let accepted = matches!(
                    unsigncrypt(
                        scheme,
                        params,
                        &profile,
                        &receiver,
                        sender.public_element(),
                        &mutated,
                    ),
                    Ok(UnsigncryptOutcome::Accepted(_))
                );
                assert!(!accepted, "{scheme:?} flip {i} was accepted");
                rejections += 1;
            }
            assert_eq!(rejections, 1000, "{scheme:?}");
        }
    });
}

#[test]
fn criterion_05_signature_completeness_and_verifier_identity() {
    criterion(5, "signature completeness and verifier identity", || {
        let params = medium_group();
        let profile = PrimitiveProfile::modern_default();
        let mut rng = ChaCha20Rng::seed_from_u64(5_000);
        let keypair = SchnorrKeyPair::generate(params, &mut rng);

        for i in 0..1000u32 {
            let message = format!("signature round-trip {i}");
            let nonce = random_scalar(params, &mut rng);
            // r = g^k, recomputed independently of the signer.
            let r = params.g().modpow(nonce.value(), params.p());
            let sig = sign_with_fixed_nonce(params, &keypair, message.as_bytes(), &nonce, &profile);
            let (ok, r_v) = verify_traced(
                params,
                keypair.public(),
                message.as_bytes(),
                &sig,
                &profile,
            );
            assert!(ok, "iteration {i} failed to verify");
            assert_eq!(r_v, Some(r), "iteration {i}: recomputed point differs");
        }
    });
}

#[test]
fn criterion_06_overhead_formula() {
    criterion(6, "overhead formula", || {
        let params = large_group();
        let profile = PrimitiveProfile::paper_compat();
        assert_eq!(params.p().bits(), 1024);
        assert_eq!(params.q().bits(), 160);
        assert_eq!(profile.digest_length_bytes(), 20);

        for scheme in ALL_SCHEMES {
            let report = measure_expansion(scheme, params, &profile, 100, 6_000)
                .expect("expansion measurement succeeds");
            // digest (20) + ceil(160 / 8) (20) = 40 bytes, headerless.
            assert_eq!(report.overhead_bytes, 40, "{scheme:?}");
        }
    });
}

#[test]
fn criterion_07_operation_counts() {
    criterion(7, "operation counts", || {
        let params = medium_group();
        let profile = PrimitiveProfile::modern_default();

        let schnorr_sc = count_ops(SchemeId::SchnorrSc, params, &profile, 7_000).unwrap();
        let scs1 = count_ops(SchemeId::Scs1, params, &profile, 7_001).unwrap();
        let scs2 = count_ops(SchemeId::Scs2, params, &profile, 7_002).unwrap();
        for (label, ops) in [
            ("schnorr-sc", &schnorr_sc),
            ("scs1", &scs1),
            ("scs2", &scs2),
        ] {
            assert!(ops.consistent, "{label} counts varied across trials");
        }

        assert_eq!(schnorr_sc.sender.mod_exps, 1);
        assert_eq!(schnorr_sc.receiver.mod_exps, 3);
        assert_eq!(scs2.sender.mod_muls, scs1.sender.mod_muls + 1);
    });
}

#[test]
fn criterion_08_efficiency_ordering() {
    criterion(8, "efficiency ordering", || {
        let params = large_group();
        let profile = PrimitiveProfile::paper_compat();

        let rows = time_schemes(params, &profile, 31, 256, 8_000).expect("timing succeeds");
        let median = |subject: &str, phase: &str| {
            rows.iter()
                .find(|row| row.subject == subject && row.phase == phase)
                .unwrap_or_else(|| panic!("missing timing row {subject}/{phase}"))
                .median_nanos
        };
        let combined_sender = median("schnorr-sc", "signcrypt");
        let baseline_sender = median("baseline", "sign+encrypt");
        assert!(
            combined_sender < baseline_sender,
            "combined sender median {combined_sender} ns is not below the \
             baseline sender median {baseline_sender} ns (31 trials)"
        );

        let report = measure_expansion(SchemeId::SchnorrSc, params, &profile, 256, 8_001)
            .expect("expansion measurement succeeds");
        assert_eq!(report.overhead_bytes, 40);
        assert_eq!(report.baseline_overhead_bytes, 168);
        assert!(report.overhead_bytes < report.baseline_overhead_bytes);
    });
}

#[test]
fn criterion_09_game_harness_sanity() {
    criterion(9, "game harness sanity", || {
        let started = Instant::now();

        // Coin-flip baseline: 2000 independent seeded runs.
        let config = GameConfig::new(SchemeId::SchnorrSc, Setting::TwoUser, Position::Outsider);
        let stats = run_game_batch(&config, || Box::<NullAdversary>::default(), 9_000, 2000)
            .expect("batch completes");
        assert_eq!(stats.runs, 2000);
        assert_eq!(stats.faults, 0);
        let rate = stats.win_rate();
        assert!(
            (0.45..=0.55).contains(&rate),
            "null adversary win rate {rate} outside [0.45, 0.55]"
        );

        // The challenge-replay restriction is enforced and provably so:
        // the denial is observed by the adversary and the blocked query
        // never produces an oracle record.
        let mut tester = RestrictionTester::default();
        let transcript =
            run_confidentiality_game(&config, &mut tester, 9_100).expect("run completes");
        assert!(transcript.forbidden_query_attempts >= 1);
        assert!(tester.saw_denial);
        assert!(transcript.fault.is_none());
        assert!(transcript.queries.is_empty());

        // The harness detects a deliberately broken scheme.
        let mut sabotaged = config.clone();
        sabotaged.sabotage = true;
        let stats = run_game_batch(
            &sabotaged,
            || Box::<SabotageExploiter>::default(),
            9_200,
            200,
        )
        .expect("batch completes");
        assert_eq!(stats.faults, 0);
        assert!(
            stats.win_rate() >= 0.99,
            "sabotage exploiter won only {} of {}",
            stats.wins,
            stats.runs
        );

        let elapsed = started.elapsed();
        assert!(
            elapsed < Duration::from_secs(60),
            "game sanity run took {elapsed:?}, budget is 60 s"
        );
    });
}

#[test]
fn criterion_10_forgery_probes() {
    criterion(10, "forgery probes", || {
        // 256-bit digests at a 64-bit group: every accept would be a
        // keyed-hash collision, so the tolerance is zero.
        let config = GameConfig::new(SchemeId::SchnorrSc, Setting::TwoUser, Position::Outsider);
        assert!(config.profile.digest_length_bytes() * 8 >= 160);

        let outsider =
            run_outsider_authenticity_probe(&config, 10_000, 10_000).expect("probe completes");
        assert_eq!(outsider.trials, 10_000);
        assert_eq!(
            outsider.accepts, 0,
            "outsider probe found {} forgeries",
            outsider.accepts
        );

        let insider =
            run_insider_nonrepudiation_probe(&config, 10_001, 10_000).expect("probe completes");
        assert_eq!(insider.trials, 10_000);
        assert_eq!(
            insider.accepts, 0,
            "insider probe found {} forgeries",
            insider.accepts
        );
    });
}
