//! Vacuum extensions of channels.
//!
//! A communication device acts on the direct sum of its message sector and a
//! vacuum sector meaning "no particle was sent". A vacuum extension pairs each
//! Kraus operator `Cᵢ` of the base channel with a vacuum block (a scalar
//! amplitude `γᵢ` when the vacuum is one-dimensional), assembling Kraus
//! operators `Cᵢ ⊕ γᵢ|vac⟩⟨vac|` on dimension `d + v`. The module also covers
//! the vacuum interference operator `F = Σᵢ γ̄ᵢ Cᵢ`, the extreme-point
//! analysis of the convex set of extensions, and the recipe that recovers a
//! pair of v-dimensional extensions from prescribed interference amplitudes.

use alloc::vec::Vec;

use num_traits::Float;

use crate::channels::{KrausChannel, restrict_to_sector};
use crate::decomp;
use crate::error::{Error, Result};
use crate::linops::{C64, CMat, SectorSpace, direct_sum};
use crate::{TOL_ENTRY, TOL_RANK_REL};

/// A channel together with its action on the vacuum sector.
#[derive(Clone, Debug)]
pub struct VacuumExtension {
    base: KrausChannel,
    vac_dim: usize,
    vac_blocks: Vec<CMat>,
}

impl VacuumExtension {
    /// Pairs a base channel with v×v vacuum blocks (one per Kraus operator).
    /// The blocks must themselves form a trace-preserving Kraus list on the
    /// vacuum sector.
    pub fn new(base: KrausChannel, vac_blocks: Vec<CMat>) -> Result<Self> {
        if base.dim_in() != base.dim_out() {
            return Err(Error::DimMismatch {
                context: "vacuum extension base must be square",
                expected: base.dim_in(),
                found: base.dim_out(),
            });
        }
        if vac_blocks.len() != base.kraus_count() {
            return Err(Error::DimMismatch {
                context: "vacuum block count",
                expected: base.kraus_count(),
                found: vac_blocks.len(),
            });
        }
        let v = vac_blocks[0].rows();
        let mut sum = CMat::zeros(v, v);
        for b in &vac_blocks {
            if b.rows() != v || b.cols() != v {
                return Err(Error::DimMismatch {
                    context: "vacuum block shape",
                    expected: v,
                    found: b.rows(),
                });
            }
            sum = sum.add(&b.adjoint().mul(b));
        }
        let dev = sum.max_abs_diff(&CMat::identity(v));
        if dev > TOL_ENTRY {
            return Err(Error::Normalization { context: "vacuum blocks", deviation: dev });
        }
        Ok(VacuumExtension { base, vac_dim: v, vac_blocks })
    }

    /// One-dimensional vacuum: Kraus `Cᵢ ⊕ γᵢ|vac⟩⟨vac|` with `Σ|γᵢ|² = 1`.
    pub fn with_amplitudes(base: KrausChannel, amplitudes: &[C64]) -> Result<Self> {
        if amplitudes.len() != base.kraus_count() {
            return Err(Error::DimMismatch {
                context: "amplitude count",
                expected: base.kraus_count(),
                found: amplitudes.len(),
            });
        }
        let total: f64 = amplitudes.iter().map(|g| g.norm_sqr()).sum();
        if (total - 1.0).abs() > TOL_ENTRY {
            return Err(Error::Normalization {
                context: "vacuum amplitudes",
                deviation: (total - 1.0).abs(),
            });
        }
        let blocks = amplitudes.iter().map(|&g| CMat::scalar(g)).collect();
        VacuumExtension::new(base, blocks)
    }

    /// Extension with no coherence with the vacuum: `{Cᵢ ⊕ 0}` plus one extra
    /// operator `0_d ⊕ I_v` that carries the whole vacuum dynamics.
    pub fn no_coherence(base: KrausChannel) -> Result<Self> {
        let d = base.dim_in();
        let v = 1usize;
        let mut kraus: Vec<CMat> = base.kraus().to_vec();
        kraus.push(CMat::zeros(d, d));
        let mut blocks: Vec<CMat> = (0..base.kraus_count()).map(|_| CMat::zeros(v, v)).collect();
        blocks.push(CMat::identity(v));
        let padded = KrausChannel::new(kraus)?;
        VacuumExtension::new(padded, blocks)
    }

    pub fn base(&self) -> &KrausChannel {
        &self.base
    }

    pub fn message_dim(&self) -> usize {
        self.base.dim_in()
    }

    pub fn vac_dim(&self) -> usize {
        self.vac_dim
    }

    pub fn vac_blocks(&self) -> &[CMat] {
        &self.vac_blocks
    }

    pub fn kraus_count(&self) -> usize {
        self.base.kraus_count()
    }

    /// Scalar amplitudes when the vacuum is one-dimensional.
    pub fn amplitudes(&self) -> Result<Vec<C64>> {
        if self.vac_dim != 1 {
            return Err(Error::UnsupportedVacuumDim { vac_dim: self.vac_dim });
        }
        Ok(self.vac_blocks.iter().map(|b| b[(0, 0)]).collect())
    }

    /// The assembled channel `{Cᵢ ⊕ vac_blockᵢ}` on dimension d + v.
    pub fn assembled(&self) -> KrausChannel {
        let kraus: Vec<CMat> = self
            .base
            .kraus()
            .iter()
            .zip(&self.vac_blocks)
            .map(|(c, b)| direct_sum(c, b))
            .collect();
        KrausChannel::new_unchecked(kraus).expect("shapes consistent by construction")
    }

    /// Sector space message ⊕ vacuum of the assembled channel.
    pub fn sector_space(&self) -> SectorSpace {
        SectorSpace::new(&[("message", self.message_dim()), ("vacuum", self.vac_dim)])
            .expect("positive dims")
    }

    /// Restriction of the assembled channel back to the message sector; equals
    /// the base channel by construction.
    pub fn restricted_to_message(&self) -> Result<KrausChannel> {
        restrict_to_sector(&self.assembled(), &self.sector_space(), "message")
    }

    /// The vacuum-sector dynamics as a channel on dimension v.
    pub fn vacuum_channel(&self) -> KrausChannel {
        KrausChannel::new(self.vac_blocks.clone()).expect("validated at construction")
    }

    /// Vacuum interference operator `F = Σᵢ γ̄ᵢ Cᵢ` (one-dimensional vacuum only).
    pub fn interference_operator(&self) -> Result<CMat> {
        let gammas = self.amplitudes()?;
        let d = self.message_dim();
        let mut f = CMat::zeros(d, d);
        for (g, c) in gammas.iter().zip(self.base.kraus()) {
            f = f.add(&c.scale_c(g.conj()));
        }
        Ok(f)
    }

    /// Extreme-point test for the convex set of vacuum extensions of the base
    /// channel, with the necessary-condition bounds reported alongside.
    pub fn extremality(&self) -> ExtremalityReport {
        let v = self.vac_dim;
        // reduce to a linearly independent Kraus list first
        let assembled: Vec<Vec<C64>> = self
            .base
            .kraus()
            .iter()
            .zip(&self.vac_blocks)
            .map(|(c, b)| direct_sum(c, b).flatten())
            .collect();
        let (r, pivots) = decomp::rank_with_pivots(&assembled, TOL_RANK_REL);
        let kept: Vec<(&CMat, &CMat)> =
            pivots.iter().map(|&i| (&self.base.kraus()[i], &self.vac_blocks[i])).collect();

        let kraus_scale =
            kept.iter().map(|(c, _)| c.frobenius_norm()).fold(0.0, f64::max).max(1e-30);
        let null_kraus = kept.iter().filter(|(c, _)| c.frobenius_norm() < 1e-12 * kraus_scale.max(1.0)).count();

        let mut joint: Vec<Vec<C64>> = Vec::with_capacity(r * r);
        let mut message_only: Vec<Vec<C64>> = Vec::with_capacity(r * r);
        for (ci, bi) in &kept {
            for (cj, bj) in &kept {
                let prod_c = cj.adjoint().mul(ci);
                let prod_b = bj.adjoint().mul(bi);
                let mut row = prod_c.flatten();
                row.extend(prod_b.flatten());
                joint.push(row);
                message_only.push(prod_c.flatten());
            }
        }
        let (joint_rank, _) = decomp::rank_with_pivots(&joint, TOL_RANK_REL);
        let (l, _) = decomp::rank_with_pivots(&message_only, TOL_RANK_REL);

        let z_bound = ((v * v + 1) as f64).sqrt() - 1.0;
        ExtremalityReport {
            extreme: joint_rank == r * r,
            kraus_rank: r,
            product_rank: joint_rank,
            independent_message_products: l,
            rank_bound_holds: r * r <= l + v * v,
            null_kraus_count: null_kraus,
            z_bound_holds: (null_kraus as f64) <= z_bound + 1e-12,
        }
    }
}

/// Outcome of [`VacuumExtension::extremality`].
#[derive(Clone, Copy, Debug)]
pub struct ExtremalityReport {
    /// Extreme point iff the r² operators {Cⱼ†Cᵢ ⊕ bⱼ†bᵢ} are independent.
    pub extreme: bool,
    /// Number of linearly independent assembled Kraus operators (r).
    pub kraus_rank: usize,
    /// Numerical rank of the joint product set.
    pub product_rank: usize,
    /// Number L of independent message-side products {Cⱼ†Cᵢ}.
    pub independent_message_products: usize,
    /// Necessary condition r² ≤ L + v².
    pub rank_bound_holds: bool,
    /// Number z of null message Kraus operators in the reduced list.
    pub null_kraus_count: usize,
    /// Necessary condition z ≤ √(v²+1) − 1.
    pub z_bound_holds: bool,
}

/// Constructs two v-dimensional vacuum extensions whose superposition carries
/// the prescribed interference amplitudes: given Kraus lists for the two
/// channels and matrices `alpha` (r_A × v), `beta` (r_B × v) with unit total
/// square norm, the vacuum blocks are `√pᵢ U_{A,i}` where `U_{A,i}` extends the
/// normalised i-th amplitude row to an orthonormal basis.
pub fn extensions_from_amplitudes(
    kraus_a: Vec<CMat>,
    kraus_b: Vec<CMat>,
    alpha: &CMat,
    beta: &CMat,
) -> Result<(VacuumExtension, VacuumExtension)> {
    let a = KrausChannel::new(kraus_a)?;
    let b = KrausChannel::new(kraus_b)?;
    if alpha.rows() != a.kraus_count() {
        return Err(Error::DimMismatch {
            context: "alpha rows",
            expected: a.kraus_count(),
            found: alpha.rows(),
        });
    }
    if beta.rows() != b.kraus_count() {
        return Err(Error::DimMismatch {
            context: "beta rows",
            expected: b.kraus_count(),
            found: beta.rows(),
        });
    }
    if alpha.cols() != beta.cols() {
        return Err(Error::DimMismatch {
            context: "vacuum dimension of alpha/beta",
            expected: alpha.cols(),
            found: beta.cols(),
        });
    }
    let blocks_a = blocks_from_amplitude_rows(alpha)?;
    let blocks_b = blocks_from_amplitude_rows(beta)?;
    Ok((VacuumExtension::new(a, blocks_a)?, VacuumExtension::new(b, blocks_b)?))
}

fn blocks_from_amplitude_rows(amps: &CMat) -> Result<Vec<CMat>> {
    let v = amps.cols();
    let total: f64 = (0..amps.rows())
        .flat_map(|i| (0..v).map(move |k| (i, k)))
        .map(|(i, k)| amps[(i, k)].norm_sqr())
        .sum();
    if (total - 1.0).abs() > TOL_ENTRY {
        return Err(Error::Normalization {
            context: "amplitude matrix",
            deviation: (total - 1.0).abs(),
        });
    }
    let mut blocks = Vec::with_capacity(amps.rows());
    for i in 0..amps.rows() {
        let p: f64 = (0..v).map(|k| amps[(i, k)].norm_sqr()).sum();
        if p < 1e-24 {
            // zero-weight row: any unitary works, scaled to nothing
            blocks.push(CMat::zeros(v, v));
            continue;
        }
        let first = CMat::from_fn(v, 1, |k, _| amps[(i, k)] / C64::new(p.sqrt(), 0.0));
        let u = decomp::unitary_with_first_column(&first);
        blocks.push(u.scale(p.sqrt()));
    }
    Ok(blocks)
}

/// Vacuum extension induced by a system–environment interaction unitary that
/// acts as the identity on the vacuum ⊗ environment block (a "local vacuum
/// extension"), for an environment prepared in the state `sigma_e`.
///
/// `v_ae` lives on (d+1)·e with the extended system on the major factor; the
/// induced Kraus operators are `(I ⊗ ⟨k|) Ṽ (I ⊗ |χₘ⟩)` weighted by the
/// spectral decomposition of `sigma_e`.
pub fn induced_extension_from_interaction(
    v_ae: &CMat,
    d: usize,
    sigma_e: &CMat,
) -> Result<VacuumExtension> {
    let dt = d + 1;
    if v_ae.rows() % dt != 0 || v_ae.rows() != v_ae.cols() {
        return Err(Error::DimMismatch {
            context: "interaction unitary",
            expected: dt,
            found: v_ae.rows(),
        });
    }
    let e = v_ae.rows() / dt;
    if sigma_e.rows() != e {
        return Err(Error::DimMismatch {
            context: "environment state",
            expected: e,
            found: sigma_e.rows(),
        });
    }
    check_local_vacuum(v_ae, d, e)?;
    if !sigma_e.is_density(TOL_ENTRY) {
        return Err(Error::InvalidDensity {
            context: "environment state",
            deviation: (sigma_e.trace() - crate::linops::ONE).norm(),
        });
    }
    let spectrum = decomp::density_spectrum(sigma_e, 1e-14);
    let mut kraus = Vec::new();
    let mut amps = Vec::new();
    for (w, chi) in &spectrum {
        let col = {
            // I ⊗ |χ⟩ : (d+1) → (d+1)·e
            let mut m = CMat::zeros(dt * e, dt);
            for s in 0..dt {
                for k in 0..e {
                    m[(s * e + k, s)] = chi[(k, 0)];
                }
            }
            m
        };
        for k in 0..e {
            let bra = {
                // I ⊗ ⟨k| : (d+1)·e → (d+1)
                let mut m = CMat::zeros(dt, dt * e);
                for s in 0..dt {
                    m[(s, s * e + k)] = crate::linops::ONE;
                }
                m
            };
            let op = bra.mul(v_ae).mul(&col).scale(w.sqrt());
            amps.push(op[(d, d)]);
            kraus.push(op.block(0, 0, d, d));
        }
    }
    VacuumExtension::with_amplitudes(KrausChannel::new(kraus)?, &amps)
}

/// Checks that `v_ae` is a unitary acting as the identity on Vac ⊗ E.
pub fn check_local_vacuum(v_ae: &CMat, d: usize, e: usize) -> Result<()> {
    if !v_ae.is_unitary(TOL_ENTRY) {
        return Err(Error::Domain(alloc::string::String::from(
            "interaction operator is not unitary",
        )));
    }
    let mut residual = 0.0f64;
    for i in 0..e {
        for j in 0..e {
            let same = if i == j { crate::linops::ONE } else { crate::linops::ZERO };
            residual = residual.max((v_ae[(d * e + i, d * e + j)] - same).norm());
            for a in 0..d {
                residual = residual.max(v_ae[(a * e + i, d * e + j)].norm());
                residual = residual.max(v_ae[(d * e + i, a * e + j)].norm());
            }
        }
    }
    if residual > TOL_ENTRY {
        return Err(Error::LocalVacuumViolation { residual });
    }
    Ok(())
}

/// Unitary extension `U ⊕ |vac⟩⟨vac|` of a unitary channel.
pub fn unitary_extension(u: &CMat) -> Result<VacuumExtension> {
    VacuumExtension::with_amplitudes(KrausChannel::from_unitary(u)?, &[crate::linops::ONE])
}

/// The coherent extension of complete qubit dephasing:
/// Kraus {|i⟩⟨i| ⊕ |vac⟩⟨vac|/√2}.
pub fn dephasing_extension() -> VacuumExtension {
    let s = C64::new(1.0 / 2.0_f64.sqrt(), 0.0);
    VacuumExtension::with_amplitudes(crate::channels::complete_dephasing(2), &[s, s])
        .expect("fixed data")
}

/// Coherent extension of erasure onto `psi0`, with vacuum amplitudes `alpha`.
pub fn erasure_extension(psi0: &CMat, alpha: &[C64]) -> Result<VacuumExtension> {
    VacuumExtension::with_amplitudes(crate::channels::erasure_to(psi0), alpha)
}

/// The coherent extension of the complete qubit depolarising channel:
/// Kraus {(I⊕1)/2, (X⊕i)/2, (Y⊕i)/2, (Z⊕i)/2}.
pub fn depolarizing_extension() -> VacuumExtension {
    use crate::linops::{I_UNIT, ONE, pauli_x, pauli_y, pauli_z};
    let base = KrausChannel::new(alloc::vec![
        CMat::identity(2).scale(0.5),
        pauli_x().scale(0.5),
        pauli_y().scale(0.5),
        pauli_z().scale(0.5),
    ])
    .expect("fixed data");
    let h = C64::new(0.5, 0.0);
    VacuumExtension::with_amplitudes(base, &[ONE * h, I_UNIT * h, I_UNIT * h, I_UNIT * h])
        .expect("fixed data")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{complete_dephasing, erasure_to, random_channel};
    use crate::linops::{ONE, ZERO, pauli_z};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn unitary_extension_is_unitary_channel() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let u = decomp::haar_unitary(3, &mut rng);
        let ext = unitary_extension(&u).unwrap();
        let assembled = ext.assembled();
        assert_eq!(assembled.kraus_count(), 1);
        assert!(assembled.kraus()[0].is_unitary(1e-10));
        assert!(assembled.validate().is_cptp);
    }

    #[test]
    fn dephasing_extension_matches_hand_assembly() {
        let ext = dephasing_extension();
        let assembled = ext.assembled();
        assert!(assembled.validate().is_cptp);
        let s = 1.0 / 2.0_f64.sqrt();
        let mut k0 = CMat::zeros(3, 3);
        k0[(0, 0)] = ONE;
        k0[(2, 2)] = C64::new(s, 0.0);
        assert!(assembled.kraus()[0].max_abs_diff(&k0) < 1e-15);
    }

    #[test]
    fn erasure_extension_restricts_to_base() {
        let psi = CMat::ket(2, 0);
        let alpha = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let ext = erasure_extension(&psi, &alpha).unwrap();
        let restricted = ext.restricted_to_message().unwrap();
        assert!(restricted.distance(&erasure_to(&psi)).unwrap() < 1e-12);
        // vacuum channel is CPTP on dimension 1
        assert!(ext.vacuum_channel().validate().is_cptp);
    }

    #[test]
    fn bad_amplitude_normalisation_rejected() {
        let res = VacuumExtension::with_amplitudes(
            complete_dephasing(2),
            &[C64::new(1.0, 0.0), C64::new(1.0, 0.0)],
        );
        assert!(matches!(res, Err(Error::Normalization { .. })));
    }

    #[test]
    fn amplitude_count_mismatch_rejected() {
        let res = VacuumExtension::with_amplitudes(complete_dephasing(2), &[ONE]);
        assert!(matches!(res, Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn no_coherence_extension_of_identity() {
        let ext = VacuumExtension::no_coherence(KrausChannel::identity(2)).unwrap();
        let assembled = ext.assembled();
        assert!(assembled.validate().is_cptp);
        assert_eq!(assembled.kraus_count(), 2);
        // {I ⊕ 0, 0 ⊕ 1}
        assert_eq!(assembled.kraus()[0][(2, 2)], ZERO);
        assert_eq!(assembled.kraus()[1][(2, 2)], ONE);
        assert!(ext.restricted_to_message().unwrap().distance(&KrausChannel::identity(2)).unwrap() < 1e-12);
    }

    #[test]
    fn interference_operator_dephasing() {
        // F = I/√2
        let f = dephasing_extension().interference_operator().unwrap();
        let expected = CMat::identity(2).scale(1.0 / 2.0_f64.sqrt());
        assert!(f.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn interference_operator_erasure() {
        // F = |ψ₀⟩⟨α|
        let psi = CMat::ket(2, 0);
        let alpha = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let ext = erasure_extension(&psi, &alpha).unwrap();
        let f = ext.interference_operator().unwrap();
        let alpha_ket = CMat::from_complex(2, 1, &alpha);
        let expected = CMat::outer(&psi, &alpha_ket);
        assert!(f.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn interference_operator_depolarizing() {
        // F = (cosθ I − i sinθ S)/2 with cosθ = 1/2 and S = (X+Y+Z)/√3
        use crate::linops::{I_UNIT, pauli_x, pauli_y};
        let f = depolarizing_extension().interference_operator().unwrap();
        let s3 = 3.0_f64.sqrt();
        let s_op = pauli_x().add(&pauli_y()).add(&pauli_z()).scale(1.0 / s3);
        let expected = CMat::identity(2)
            .scale(0.5)
            .sub(&s_op.scale_c(I_UNIT * C64::new(s3 / 2.0, 0.0)))
            .scale(0.5);
        assert!(f.max_abs_diff(&expected) < 1e-15);
        // F†F = I/4, so the interference branch fires with probability 1/4
        assert!(f.adjoint().mul(&f).max_abs_diff(&CMat::identity(2).scale(0.25)) < 1e-15);
    }

    #[test]
    fn interference_contraction_on_random_extensions() {
        // F†F ≤ I since F is an amplitude-weighted Kraus average
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for seed in 0..10 {
            let base = random_channel(3, 3, 3, seed);
            let g = decomp::random_ket(3, &mut rng);
            let amps: Vec<C64> = (0..3).map(|i| g[(i, 0)]).collect();
            let ext = VacuumExtension::with_amplitudes(base, &amps).unwrap();
            let f = ext.interference_operator().unwrap();
            let gap = CMat::identity(3).sub(&f.adjoint().mul(&f));
            assert!(gap.is_psd(1e-10), "seed {seed}");
        }
    }

    #[test]
    fn interference_requires_one_dim_vacuum() {
        let alpha = CMat::from_fn(2, 2, |r, c| {
            if r == c { C64::new(1.0 / 2.0_f64.sqrt(), 0.0) } else { ZERO }
        });
        let (ext, _) = extensions_from_amplitudes(
            complete_dephasing(2).kraus().to_vec(),
            complete_dephasing(2).kraus().to_vec(),
            &alpha,
            &alpha,
        )
        .unwrap();
        assert!(matches!(
            ext.interference_operator(),
            Err(Error::UnsupportedVacuumDim { vac_dim: 2 })
        ));
    }

    #[test]
    fn unitary_extension_is_extreme() {
        let ext = unitary_extension(&pauli_z()).unwrap();
        let report = ext.extremality();
        assert!(report.extreme);
        assert_eq!(report.kraus_rank, 1);
        assert!(report.rank_bound_holds);
        assert!(report.z_bound_holds);
    }

    #[test]
    fn no_coherence_extension_not_extreme() {
        let ext = VacuumExtension::no_coherence(complete_dephasing(2)).unwrap();
        let report = ext.extremality();
        assert!(!report.extreme);
        assert_eq!(report.null_kraus_count, 1);
        assert!(!report.z_bound_holds);
    }

    #[test]
    fn dephasing_extension_not_extreme() {
        // the cross products C₁†C₂ = C₂†C₁ = 0 give coinciding operators 0 ⊕ 1/2
        let report = dephasing_extension().extremality();
        assert!(!report.extreme);
        assert_eq!(report.kraus_rank, 2);
        assert_eq!(report.product_rank, 3);
    }

    #[test]
    fn extremality_invariant_under_kraus_phases() {
        let psi = CMat::ket(2, 1);
        let alpha = [C64::new(0.8, 0.0), C64::new(0.0, 0.6)];
        let ext = erasure_extension(&psi, &alpha).unwrap();
        let phase = C64::new(0.0, 1.3).exp();
        let rotated_kraus: Vec<CMat> = ext
            .base()
            .kraus()
            .iter()
            .enumerate()
            .map(|(i, k)| if i == 0 { k.scale_c(phase) } else { k.clone() })
            .collect();
        let rotated_amps: Vec<C64> =
            alpha.iter().enumerate().map(|(i, &g)| if i == 0 { g * phase } else { g }).collect();
        let rotated = VacuumExtension::with_amplitudes(
            KrausChannel::new(rotated_kraus).unwrap(),
            &rotated_amps,
        )
        .unwrap();
        assert_eq!(ext.extremality().extreme, rotated.extremality().extreme);
    }

    #[test]
    fn convex_mixture_is_not_extreme() {
        // two distinct extensions of the same base, mixed with weights λ, 1−λ
        let base = complete_dephasing(2);
        let s = 1.0 / 2.0_f64.sqrt();
        let amps1 = [C64::new(s, 0.0), C64::new(s, 0.0)];
        let amps2 = [C64::new(s, 0.0), C64::new(-s, 0.0)];
        let lambda: f64 = 0.3;
        let mut kraus: Vec<CMat> =
            base.kraus().iter().map(|k| k.scale(lambda.sqrt())).collect();
        kraus.extend(base.kraus().iter().map(|k| k.scale((1.0 - lambda).sqrt())));
        let mut blocks: Vec<CMat> =
            amps1.iter().map(|&g| CMat::scalar(g * C64::new(lambda.sqrt(), 0.0))).collect();
        blocks.extend(amps2.iter().map(|&g| CMat::scalar(g * C64::new((1.0 - lambda).sqrt(), 0.0))));
        let mixed = VacuumExtension::new(KrausChannel::new(kraus).unwrap(), blocks).unwrap();
        assert!(mixed.assembled().validate().is_cptp);
        assert!(!mixed.extremality().extreme);
    }

    #[test]
    fn extensions_from_amplitudes_v1_reduces_to_scalar_form() {
        let alpha = CMat::from_complex(2, 1, &[C64::new(0.6, 0.0), C64::new(0.0, 0.8)]);
        let beta = CMat::from_complex(2, 1, &[C64::new(1.0, 0.0), ZERO]);
        let (ea, eb) = extensions_from_amplitudes(
            complete_dephasing(2).kraus().to_vec(),
            complete_dephasing(2).kraus().to_vec(),
            &alpha,
            &beta,
        )
        .unwrap();
        assert_eq!(ea.vac_dim(), 1);
        let amps = ea.amplitudes().unwrap();
        assert!((amps[0] - C64::new(0.6, 0.0)).norm() < 1e-12);
        assert!((amps[1] - C64::new(0.0, 0.8)).norm() < 1e-12);
        let amps_b = eb.amplitudes().unwrap();
        assert!((amps_b[0] - ONE).norm() < 1e-12);
    }

    #[test]
    fn extensions_from_amplitudes_v2_invariants() {
        let h = C64::new(0.5, 0.0);
        let alpha = CMat::from_complex(2, 2, &[h, h, h, h * C64::new(0.0, 1.0)]);
        let beta = CMat::from_complex(2, 2, &[h, h * C64::new(0.0, -1.0), h, h]);
        let (ea, eb) = extensions_from_amplitudes(
            complete_dephasing(2).kraus().to_vec(),
            complete_dephasing(2).kraus().to_vec(),
            &alpha,
            &beta,
        )
        .unwrap();
        for ext in [&ea, &eb] {
            assert_eq!(ext.vac_dim(), 2);
            assert!(ext.assembled().validate().is_cptp);
            assert!(ext
                .restricted_to_message()
                .unwrap()
                .distance(&complete_dephasing(2))
                .unwrap()
                < 1e-11);
            // recovered amplitudes ⟨υ_k|block_i|υ₀⟩ match the prescription
        }
        for i in 0..2 {
            for k in 0..2 {
                assert!((ea.vac_blocks()[i][(k, 0)] - alpha[(i, k)]).norm() < 1e-12);
                assert!((eb.vac_blocks()[i][(k, 0)] - beta[(i, k)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn induced_extension_from_control_unitary() {
        // Ṽ = (Σᵢ Uᵢ ⊗ |i⟩⟨i|) ⊕ (|vac⟩⟨vac| ⊗ I) with η = |+⟩ induces the
        // extension {Uᵢ/√2 ⊕ |vac⟩⟨vac|/√2}
        let u0 = CMat::identity(2);
        let u1 = pauli_z();
        let d = 2;
        let e = 2;
        let mut v = CMat::zeros(6, 6);
        for a in 0..d {
            for b in 0..d {
                v[(a * e, b * e)] = u0[(a, b)];
                v[(a * e + 1, b * e + 1)] = u1[(a, b)];
            }
        }
        v[(d * e, d * e)] = ONE;
        v[(d * e + 1, d * e + 1)] = ONE;
        let eta = CMat::pure(&CMat::uniform_ket(2));
        let ext = induced_extension_from_interaction(&v, d, &eta).unwrap();
        assert!(ext.assembled().validate().is_cptp);
        let expected = KrausChannel::new(alloc::vec![
            CMat::identity(2).scale(1.0 / 2.0_f64.sqrt()),
            pauli_z().scale(1.0 / 2.0_f64.sqrt()),
        ])
        .unwrap();
        assert!(ext.base().distance(&expected).unwrap() < 1e-10);
        let total: f64 = ext.amplitudes().unwrap().iter().map(|g| g.norm_sqr()).sum();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn local_vacuum_violation_detected() {
        let mut rng = ChaCha12Rng::seed_from_u64(77);
        let v = decomp::haar_unitary(6, &mut rng);
        let res = induced_extension_from_interaction(&v, 2, &CMat::maximally_mixed(2));
        assert!(matches!(res, Err(Error::LocalVacuumViolation { .. })));
    }
}
