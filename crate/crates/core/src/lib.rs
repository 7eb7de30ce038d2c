//! Discrete-log signcryption toolkit.
//!
//! The library is organised in layers:
//!
//! * [`group`]: prime-order subgroup parameters and modular arithmetic
//! * [`primitives`]: hash, keyed hash, key derivation, and the symmetric cipher,
//!   grouped into swappable profiles
//! * [`observe`]: operation-counting hooks used by the cost benchmark
//! * [`schnorr`]: baseline Schnorr signatures
//! * [`schemes`]: the three signcryption schemes (SCS1, SCS2, SCHNORR_SC)
//! * [`games`]: executable IND-CCA2 security games and forgery probes
//! * [`cost`]: operation counts, wall-clock timing, and message expansion
//! * [`format`]: the text file formats used by the CLI

pub mod cost;
pub mod format;
pub mod games;
pub mod group;
pub mod observe;
pub mod primitives;
pub mod schemes;
pub mod schnorr;
