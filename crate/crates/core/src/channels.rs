//! Kraus-form quantum channels: CPTP validation, Choi calculus, composition,
//! sector restriction under the no-leakage condition, Stinespring dilation and
//! seeded random-channel generation.
//!
//! A channel is stored as a finite list of `dim_out × dim_in` Kraus operators
//! with `Σᵢ Kᵢ†Kᵢ = I`. Channel equality is decided through the Choi matrix:
//! two Kraus lists describe the same channel exactly when their Choi matrices
//! coincide, and [`KrausChannel::distance`] is the Frobenius norm of the
//! difference.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::decomp;
use crate::error::{Error, Result};
use crate::linops::{C64, CMat, SectorSpace, kron, partial_trace, pauli_x, pauli_y};
use crate::{TOL_CHOI_EIG, TOL_ENTRY};

/// CPTP map as an explicit Kraus list.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<CMat>,
}

/// Outcome of [`KrausChannel::validate`].
#[derive(Clone, Copy, Debug)]
pub struct CptpReport {
    pub is_cptp: bool,
    pub max_deviation: f64,
}

impl KrausChannel {
    /// Builds a channel, checking shapes and trace preservation (tolerance
    /// [`TOL_ENTRY`] in max-abs norm).
    pub fn new(kraus: Vec<CMat>) -> Result<Self> {
        let ch = Self::new_unchecked(kraus)?;
        let report = ch.validate();
        if !report.is_cptp {
            return Err(Error::NotTracePreserving { deviation: report.max_deviation });
        }
        Ok(ch)
    }

    /// Builds without the trace-preservation check (shapes are still enforced);
    /// for maps that are validated after assembly.
    pub fn new_unchecked(kraus: Vec<CMat>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::Domain(String::from("a channel needs at least one Kraus operator")))?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        for k in &kraus {
            if k.rows() != dim_out {
                return Err(Error::DimMismatch {
                    context: "kraus rows",
                    expected: dim_out,
                    found: k.rows(),
                });
            }
            if k.cols() != dim_in {
                return Err(Error::DimMismatch {
                    context: "kraus cols",
                    expected: dim_in,
                    found: k.cols(),
                });
            }
        }
        Ok(KrausChannel { dim_in, dim_out, kraus })
    }

    pub fn identity(dim: usize) -> Self {
        KrausChannel { dim_in: dim, dim_out: dim, kraus: alloc::vec![CMat::identity(dim)] }
    }

    pub fn from_unitary(u: &CMat) -> Result<Self> {
        if !u.is_unitary(TOL_ENTRY) {
            return Err(Error::Domain(String::from("operator is not unitary")));
        }
        Ok(KrausChannel { dim_in: u.cols(), dim_out: u.rows(), kraus: alloc::vec![u.clone()] })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    pub fn kraus_count(&self) -> usize {
        self.kraus.len()
    }

    /// ρ ↦ Σᵢ Kᵢ ρ Kᵢ†.
    pub fn apply(&self, rho: &CMat) -> CMat {
        let mut out = CMat::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out = out.add(&k.sandwich(rho));
        }
        out
    }

    /// Checks Σᵢ Kᵢ†Kᵢ = I and reports the maximal entry deviation.
    pub fn validate(&self) -> CptpReport {
        let mut sum = CMat::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            sum = sum.add(&k.adjoint().mul(k));
        }
        let dev = sum.max_abs_diff(&CMat::identity(self.dim_in));
        CptpReport { is_cptp: dev <= TOL_ENTRY, max_deviation: dev }
    }

    /// Choi matrix Σᵢ vec(Kᵢ) vec(Kᵢ)†, factor order (output ⊗ input).
    pub fn choi(&self) -> ChoiMatrix {
        let d = self.dim_in * self.dim_out;
        let mut mat = CMat::zeros(d, d);
        for k in &self.kraus {
            let v = k.flatten();
            for r in 0..d {
                if v[r] == crate::linops::ZERO {
                    continue;
                }
                for c in 0..d {
                    mat[(r, c)] += v[r] * v[c].conj();
                }
            }
        }
        ChoiMatrix { mat, dim_in: self.dim_in, dim_out: self.dim_out }
    }

    /// Minimal Kraus list from the Choi eigendecomposition, eigenvalues above
    /// [`TOL_CHOI_EIG`] kept, sorted by descending weight.
    pub fn canonical(&self) -> KrausChannel {
        let choi = self.choi();
        let (vals, vecs) = decomp::eigh(&choi.mat);
        let mut kraus = Vec::new();
        for (idx, &lam) in vals.iter().enumerate() {
            if lam <= TOL_CHOI_EIG {
                continue;
            }
            let s = lam.sqrt();
            let flat: Vec<C64> =
                (0..choi.mat.rows()).map(|r| vecs[(r, idx)] * C64::new(s, 0.0)).collect();
            kraus.push(CMat::from_flat(self.dim_out, self.dim_in, &flat));
        }
        KrausChannel { dim_in: self.dim_in, dim_out: self.dim_out, kraus }
    }

    /// Stinespring isometry V = Σᵢ Kᵢ ⊗ |i⟩ (output ⊗ environment ordering)
    /// together with the environment dimension.
    pub fn stinespring(&self) -> (CMat, usize) {
        let env = self.kraus.len();
        let mut v = CMat::zeros(self.dim_out * env, self.dim_in);
        for (i, k) in self.kraus.iter().enumerate() {
            for o in 0..self.dim_out {
                for c in 0..self.dim_in {
                    v[(o * env + i, c)] = k[(o, c)];
                }
            }
        }
        (v, env)
    }

    /// Complementary channel ρ ↦ Tr_out[VρV†]; Kraus operators (⟨o| ⊗ I_E) V.
    pub fn complementary(&self) -> KrausChannel {
        let env = self.kraus.len();
        let kraus: Vec<CMat> = (0..self.dim_out)
            .map(|o| CMat::from_fn(env, self.dim_in, |e, c| self.kraus[e][(o, c)]))
            .collect();
        KrausChannel { dim_in: self.dim_in, dim_out: env, kraus }
    }

    /// Frobenius distance between Choi matrices; zero iff the channels
    /// implement the same map.
    pub fn distance(&self, other: &KrausChannel) -> Result<f64> {
        if self.dim_in != other.dim_in {
            return Err(Error::DimMismatch {
                context: "channel_distance dim_in",
                expected: self.dim_in,
                found: other.dim_in,
            });
        }
        if self.dim_out != other.dim_out {
            return Err(Error::DimMismatch {
                context: "channel_distance dim_out",
                expected: self.dim_out,
                found: other.dim_out,
            });
        }
        Ok(self.choi().mat.sub(&other.choi().mat).frobenius_norm())
    }
}

/// Choi matrix with its channel dimensions.
#[derive(Clone, Debug)]
pub struct ChoiMatrix {
    pub mat: CMat,
    pub dim_in: usize,
    pub dim_out: usize,
}

impl ChoiMatrix {
    /// Complete positivity: the Choi matrix is PSD.
    pub fn is_cp(&self, tol: f64) -> bool {
        self.mat.is_psd(tol)
    }

    /// Trace preservation: tracing the output factor leaves the identity.
    pub fn tp_deviation(&self) -> f64 {
        let marg = partial_trace(&self.mat, &[self.dim_out, self.dim_in], &[1])
            .expect("choi dims consistent");
        marg.max_abs_diff(&CMat::identity(self.dim_in))
    }
}

/// Sequential composition: `a` first, then `b` (Kraus {Bⱼ·Aᵢ}).
pub fn compose(a: &KrausChannel, b: &KrausChannel) -> Result<KrausChannel> {
    if a.dim_out != b.dim_in {
        return Err(Error::DimMismatch { context: "compose", expected: a.dim_out, found: b.dim_in });
    }
    let mut kraus = Vec::with_capacity(a.kraus.len() * b.kraus.len());
    for bj in &b.kraus {
        for ai in &a.kraus {
            kraus.push(bj.mul(ai));
        }
    }
    Ok(KrausChannel { dim_in: a.dim_in, dim_out: b.dim_out, kraus })
}

/// Independent parallel action: Kraus {Aᵢ ⊗ Bⱼ}.
pub fn product(a: &KrausChannel, b: &KrausChannel) -> KrausChannel {
    let mut kraus = Vec::with_capacity(a.kraus.len() * b.kraus.len());
    for ai in &a.kraus {
        for bj in &b.kraus {
            kraus.push(kron(ai, bj));
        }
    }
    KrausChannel { dim_in: a.dim_in * b.dim_in, dim_out: a.dim_out * b.dim_out, kraus }
}

/// Restricts a channel on the full space to one sector, after checking the
/// no-leakage condition `P K̃ᵢ P = K̃ᵢ P` for every Kraus operator.
pub fn restrict_to_sector(
    ch: &KrausChannel,
    space: &SectorSpace,
    label: &str,
) -> Result<KrausChannel> {
    if ch.dim_in != space.total_dim() || ch.dim_out != space.total_dim() {
        return Err(Error::DimMismatch {
            context: "restrict_to_sector",
            expected: space.total_dim(),
            found: ch.dim_in,
        });
    }
    let p = space.projector(label)?;
    let e = space.embedding(label)?;
    for (i, k) in ch.kraus.iter().enumerate() {
        let residual = p.mul(k).mul(&p).sub(&k.mul(&p)).max_abs();
        if residual > TOL_ENTRY {
            return Err(Error::NoLeakageViolation { kraus_index: i, residual });
        }
    }
    let kraus: Vec<CMat> = ch.kraus.iter().map(|k| e.adjoint().mul(k).mul(&e)).collect();
    KrausChannel::new(kraus)
}

/// Worst no-leakage residual of `ch` over all sectors of `space`.
pub fn no_leakage_residual(ch: &KrausChannel, space: &SectorSpace) -> Result<f64> {
    let labels: Vec<String> = space.labels().map(alloc::string::ToString::to_string).collect();
    let mut worst = 0.0f64;
    for label in &labels {
        let p = space.projector(label)?;
        for k in &ch.kraus {
            worst = worst.max(p.mul(k).mul(&p).sub(&k.mul(&p)).max_abs());
        }
    }
    Ok(worst)
}

/// Random channel from a Haar isometry into `dim_out · kraus_rank`,
/// deterministic per seed.
pub fn random_channel(dim_in: usize, dim_out: usize, kraus_rank: usize, seed: u64) -> KrausChannel {
    assert!(kraus_rank >= 1, "kraus_rank must be positive");
    assert!(
        dim_out * kraus_rank >= dim_in,
        "dim_out * kraus_rank must be at least dim_in for an isometry to exist"
    );
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let v = decomp::haar_isometry(dim_out * kraus_rank, dim_in, &mut rng);
    // slice environment blocks: V = Σᵢ Kᵢ ⊗ |i⟩ with (out ⊗ env) row ordering
    let kraus: Vec<CMat> = (0..kraus_rank)
        .map(|i| CMat::from_fn(dim_out, dim_in, |o, c| v[(o * kraus_rank + i, c)]))
        .collect();
    KrausChannel { dim_in, dim_out, kraus }
}

/// Complete dephasing in the computational basis: Kraus {|i⟩⟨i|}.
pub fn complete_dephasing(dim: usize) -> KrausChannel {
    let kraus: Vec<CMat> = (0..dim).map(|i| CMat::pure(&CMat::ket(dim, i))).collect();
    KrausChannel { dim_in: dim, dim_out: dim, kraus }
}

/// Erasure onto a fixed pure state: Kraus {|ψ₀⟩⟨i|}.
pub fn erasure_to(psi0: &CMat) -> KrausChannel {
    let d = psi0.rows();
    let kraus: Vec<CMat> = (0..d).map(|i| CMat::outer(psi0, &CMat::ket(d, i))).collect();
    KrausChannel { dim_in: d, dim_out: d, kraus }
}

/// Random-unitary mixture Σᵢ pᵢ Uᵢ · Uᵢ† with Kraus {√pᵢ Uᵢ}.
pub fn random_unitary_mix(terms: &[(f64, CMat)]) -> Result<KrausChannel> {
    let total: f64 = terms.iter().map(|&(p, _)| p).sum();
    if (total - 1.0).abs() > TOL_ENTRY || terms.iter().any(|&(p, _)| p < 0.0) {
        return Err(Error::Normalization {
            context: "random_unitary_mix probabilities",
            deviation: (total - 1.0).abs(),
        });
    }
    let kraus: Vec<CMat> = terms.iter().map(|(p, u)| u.scale(p.sqrt())).collect();
    KrausChannel::new(kraus)
}

/// The qubit channel ½(𝒳 + 𝒴): apply X or Y with equal probability.
pub fn pauli_xy_mix() -> KrausChannel {
    random_unitary_mix(&[(0.5, pauli_x()), (0.5, pauli_y())]).expect("fixed probabilities")
}
