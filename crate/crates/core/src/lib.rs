//! Numerical toolkit for quantum channels acting on coherent superpositions of
//! trajectories.
//!
//! The crate models communication devices as Kraus-form channels on direct-sum
//! Hilbert spaces with an explicit vacuum sector. On top of that it builds
//! vacuum extensions, operational superpositions of independent channels
//! (two-path, N-path and the controlled-SWAP circuit), correlated-environment
//! channels, the quantum-SWITCH channel with its circuit simulation, and the
//! information quantities (Blahut–Arimoto capacity, coherent information,
//! Holevo bound) used to analyse them.
//!
//! Everything is dense, double-precision and allocation-based; the crate is
//! `no_std` (with `alloc`) so the numerical core stays free of platform
//! dependencies. IO and file formats live in the companion `qtraj` crate.
//!
//! Conventions fixed once and used everywhere:
//!
//! * matrices are row-major; tensor indices are big-endian (first factor is
//!   the most significant),
//! * composite "message ⊗ path" systems put the message on the major factor,
//! * Choi matrices are `Σᵢ vec(Kᵢ) vec(Kᵢ)†` with `vec` the row-major
//!   flattening, so the factor order is (output ⊗ input).

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod capacity;
pub mod channels;
pub mod decomp;
pub mod error;
pub mod linops;
pub mod superpose;
pub mod switchsim;
pub mod vacuum;

pub use error::{Error, Result};

/// Default entrywise comparison tolerance (max-abs norm).
pub const TOL_ENTRY: f64 = 1e-10;
/// Choi–Frobenius distance below which two channels are considered equal.
pub const TOL_CHANNEL_EQ: f64 = 1e-9;
/// Eigenvalue cutoff used when extracting a minimal Kraus list from a Choi matrix.
pub const TOL_CHOI_EIG: f64 = 1e-12;
/// Relative singular-value cutoff for numerical rank decisions.
pub const TOL_RANK_REL: f64 = 1e-10;

#[cfg(test)]
pub(crate) mod testutil {
    use alloc::vec::Vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    use crate::channels::random_channel;
    use crate::decomp;
    use crate::linops::C64;
    use crate::vacuum::VacuumExtension;

    /// Random vacuum extension (v = 1) with Haar-random base and amplitudes,
    /// deterministic per seed.
    pub fn random_extension(d: usize, rank: usize, seed: u64) -> VacuumExtension {
        let base = random_channel(d, d, rank, seed);
        let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x5eed);
        let g = decomp::random_ket(rank, &mut rng);
        let amps: Vec<C64> = (0..rank).map(|i| g[(i, 0)]).collect();
        VacuumExtension::with_amplitudes(base, &amps).unwrap()
    }
}
