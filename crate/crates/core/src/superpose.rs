//! Operational superpositions of channels.
//!
//! A message travelling along N alternative transmission lines is described in
//! two equivalent pictures: the "particle picture" on message ⊗ path and the
//! "mode picture" on the one-particle sector of ⊗ⱼ(Aⱼ ⊕ Vac). The fixed
//! unitary [`particle_mode_isomorphism`] converts between them and is the
//! single source of truth for basis ordering.
//!
//! The constructions here cover superpositions of independent channels built
//! from their vacuum extensions (two-path, N-path, and the controlled-SWAP
//! circuit), the closed interference form for N identical lines, channels with
//! spatially correlated environments, the v-dimensional vacuum-discarding
//! generalisation, and realisations through unitary dilations.

use alloc::vec::Vec;

use num_traits::Float;

use crate::channels::{KrausChannel, product};
use crate::decomp;
use crate::error::{Error, Result};
use crate::linops::{C64, CMat, ONE, ZERO, embed_op, kron, partial_trace};
use crate::vacuum::{VacuumExtension, check_local_vacuum};
use crate::TOL_ENTRY;

/// Number of coherent paths together with the path state ω.
#[derive(Clone, Debug)]
pub struct PathConfig {
    n_paths: usize,
    omega: CMat,
}

impl PathConfig {
    pub fn new(n_paths: usize, omega: CMat) -> Result<Self> {
        if omega.rows() != n_paths || omega.cols() != n_paths {
            return Err(Error::DimMismatch {
                context: "path state",
                expected: n_paths,
                found: omega.rows(),
            });
        }
        if !omega.is_density(TOL_ENTRY) {
            return Err(Error::InvalidDensity {
                context: "path state",
                deviation: (omega.trace() - ONE).norm(),
            });
        }
        Ok(PathConfig { n_paths, omega })
    }

    /// Maximally coherent path state |e₀⟩ = Σₖ|k⟩/√N.
    pub fn maximally_coherent(n_paths: usize) -> Self {
        PathConfig { n_paths, omega: CMat::pure(&CMat::uniform_ket(n_paths)) }
    }

    pub fn n_paths(&self) -> usize {
        self.n_paths
    }

    pub fn omega(&self) -> &CMat {
        &self.omega
    }
}

/// End-to-end map on the message after fixing the path state: a channel from
/// dimension d to d·N with the message on the major factor.
#[derive(Clone, Debug)]
pub struct EffectiveChannel {
    chan: KrausChannel,
    message_dim: usize,
    n_paths: usize,
}

impl EffectiveChannel {
    pub fn new(chan: KrausChannel, message_dim: usize, n_paths: usize) -> Result<Self> {
        if chan.dim_in() != message_dim {
            return Err(Error::DimMismatch {
                context: "effective channel input",
                expected: message_dim,
                found: chan.dim_in(),
            });
        }
        if chan.dim_out() != message_dim * n_paths {
            return Err(Error::DimMismatch {
                context: "effective channel output",
                expected: message_dim * n_paths,
                found: chan.dim_out(),
            });
        }
        let report = chan.validate();
        if !report.is_cptp {
            return Err(Error::NotTracePreserving { deviation: report.max_deviation });
        }
        Ok(EffectiveChannel { chan, message_dim, n_paths })
    }

    pub fn chan(&self) -> &KrausChannel {
        &self.chan
    }

    pub fn message_dim(&self) -> usize {
        self.message_dim
    }

    pub fn n_paths(&self) -> usize {
        self.n_paths
    }

    pub fn apply(&self, rho: &CMat) -> CMat {
        self.chan.apply(rho)
    }

    /// Which-path populations ⟨j| Tr_M[out] |j⟩ of the output for a given
    /// message input; by no-leakage these equal the initial path populations
    /// whatever the input.
    pub fn path_populations(&self, rho: &CMat) -> Vec<f64> {
        let out = self.chan.apply(rho);
        let (d, n) = (self.message_dim, self.n_paths);
        (0..n).map(|j| (0..d).map(|m| out[(m * n + j, m * n + j)].re).sum()).collect()
    }

    pub fn distance(&self, other: &EffectiveChannel) -> Result<f64> {
        self.chan.distance(&other.chan)
    }
}

/// One branch of a path measurement: outcome probability for the probed
/// input, the conditional (trace-non-increasing) operation on the message and
/// the projector that produced it.
#[derive(Clone, Debug)]
pub struct Branch {
    pub probability: f64,
    pub ops: Vec<CMat>,
    pub path_projector: CMat,
}

/// Path-measurement decomposition of an effective channel.
#[derive(Clone, Debug)]
pub struct BranchDecomposition {
    branches: Vec<Branch>,
}

impl BranchDecomposition {
    /// Decomposes an effective channel along a projective path measurement;
    /// probabilities are evaluated on the given probe state.
    pub fn from_effective(
        eff: &EffectiveChannel,
        projectors: &[CMat],
        probe: &CMat,
    ) -> Result<Self> {
        let n = eff.n_paths();
        let d = eff.message_dim();
        let mut sum = CMat::zeros(n, n);
        for p in projectors {
            if p.rows() != n || p.cols() != n {
                return Err(Error::DimMismatch {
                    context: "path projector",
                    expected: n,
                    found: p.rows(),
                });
            }
            sum = sum.add(p);
        }
        let dev = sum.max_abs_diff(&CMat::identity(n));
        if dev > TOL_ENTRY {
            return Err(Error::InvalidPovm { deviation: dev });
        }
        let scale = eff.chan().kraus().iter().map(|k| k.max_abs()).fold(0.0, f64::max);
        let mut branches = Vec::with_capacity(projectors.len());
        for proj in projectors {
            let mut ops = Vec::new();
            for k in eff.chan().kraus() {
                for m in 0..n {
                    // (I ⊗ ⟨m|Π) K : message → message
                    let mut op = CMat::zeros(d, d);
                    for row in 0..d {
                        for col in 0..d {
                            let mut acc = ZERO;
                            for p in 0..n {
                                acc += proj[(m, p)].conj() * k[(row * n + p, col)];
                            }
                            op[(row, col)] = acc;
                        }
                    }
                    if op.max_abs() > 1e-14 * scale.max(1.0) {
                        ops.push(op);
                    }
                }
            }
            let mut weight = 0.0;
            for op in &ops {
                weight += op.sandwich(probe).trace().re;
            }
            branches.push(Branch { probability: weight, ops, path_projector: proj.clone() });
        }
        Ok(BranchDecomposition { branches })
    }

    /// Builds a decomposition directly from conditional Kraus lists and their
    /// path projectors, probing probabilities on the given state.
    pub fn from_branch_ops(parts: Vec<(Vec<CMat>, CMat)>, probe: &CMat) -> Self {
        let branches = parts
            .into_iter()
            .map(|(ops, path_projector)| {
                let mut weight = 0.0;
                for op in &ops {
                    weight += op.sandwich(probe).trace().re;
                }
                Branch { probability: weight, ops, path_projector }
            })
            .collect();
        BranchDecomposition { branches }
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn probability_sum(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }

    /// Reattaches rank-one path projectors to the branch operations,
    /// reassembling the path-measured effective channel.
    pub fn reassembled(&self, message_dim: usize) -> Result<EffectiveChannel> {
        let n = self.branches.first().map(|b| b.path_projector.rows()).unwrap_or(0);
        let mut kraus = Vec::new();
        for b in &self.branches {
            let tr = b.path_projector.trace().re;
            if (tr - 1.0).abs() > 1e-9 {
                return Err(Error::Domain(alloc::string::String::from(
                    "reassembly needs rank-one path projectors",
                )));
            }
            let spec = decomp::density_spectrum(&b.path_projector, 0.5);
            let ket = &spec[0].1;
            for op in &b.ops {
                let mut k = CMat::zeros(message_dim * n, message_dim);
                for r in 0..message_dim {
                    for c in 0..message_dim {
                        for p in 0..n {
                            k[(r * n + p, c)] = op[(r, c)] * ket[(p, 0)];
                        }
                    }
                }
                kraus.push(k);
            }
        }
        EffectiveChannel::new(KrausChannel::new(kraus)?, message_dim, n)
    }
}

/// The unitary translating the particle picture |ψ⟩⊗|j⟩ (message major) into
/// the canonical one-particle ordering (path major, message minor); a d·N
/// permutation matrix.
pub fn particle_mode_isomorphism(d: usize, n: usize) -> CMat {
    let mut u = CMat::zeros(d * n, d * n);
    for m in 0..d {
        for j in 0..n {
            u[(j * d + m, m * n + j)] = ONE;
        }
    }
    u
}

/// Isometry from the canonical one-particle ordering (index j·d + m) into the
/// full mode space ⊗ⱼ(Aⱼ ⊕ Vac) of dimension (d+1)^N, where slot j holds the
/// message and every other slot the vacuum basis state.
pub fn one_particle_embedding(d: usize, n: usize) -> CMat {
    let dt = d + 1;
    let total = dt.pow(n as u32);
    let mut e = CMat::zeros(total, d * n);
    for j in 0..n {
        for m in 0..d {
            let mut idx = 0usize;
            for slot in 0..n {
                let i_slot = if slot == j { m } else { d };
                idx = idx * dt + i_slot;
            }
            e[(idx, j * d + m)] = ONE;
        }
    }
    e
}

/// Composite embedding from the particle picture straight into the mode space.
pub fn particle_embedding(d: usize, n: usize) -> CMat {
    one_particle_embedding(d, n).mul(&particle_mode_isomorphism(d, n))
}

/// Permutation from the direct-sum picture A ⊕ B (equal sector dimensions d)
/// to the particle picture M ⊗ P.
pub fn sum_to_particle(d: usize) -> CMat {
    let mut p = CMat::zeros(2 * d, 2 * d);
    for a in 0..d {
        p[(a * 2, a)] = ONE;
        p[(a * 2 + 1, d + a)] = ONE;
    }
    p
}

fn decode_multi_index(mut flat: usize, sizes: &[usize]) -> Vec<usize> {
    let mut idx = alloc::vec![0usize; sizes.len()];
    for k in (0..sizes.len()).rev() {
        idx[k] = flat % sizes[k];
        flat /= sizes[k];
    }
    idx
}

/// Superposition of N independent channels given by their (v = 1) vacuum
/// extensions: the channel on message ⊗ path with Kraus operators
/// `Σⱼ (Πₖ≠ⱼ γ⁽ᵏ⁾ᵢₖ) A⁽ʲ⁾ᵢⱼ ⊗ |j⟩⟨j|` over all Kraus multi-indices.
pub fn superpose_independent(exts: &[VacuumExtension]) -> Result<KrausChannel> {
    let n = exts.len();
    if n == 0 {
        return Err(Error::Domain(alloc::string::String::from("need at least one extension")));
    }
    let d = exts[0].message_dim();
    for ext in exts {
        if ext.vac_dim() != 1 {
            return Err(Error::UnsupportedVacuumDim { vac_dim: ext.vac_dim() });
        }
        if ext.message_dim() != d {
            return Err(Error::DimMismatch {
                context: "superpose message dims",
                expected: d,
                found: ext.message_dim(),
            });
        }
    }
    let amps: Vec<Vec<C64>> = exts.iter().map(|e| e.amplitudes()).collect::<Result<_>>()?;
    let sizes: Vec<usize> = exts.iter().map(|e| e.kraus_count()).collect();
    let total: usize = sizes.iter().product();
    let mut kraus = Vec::with_capacity(total);
    for flat in 0..total {
        let idx = decode_multi_index(flat, &sizes);
        let mut s = CMat::zeros(d * n, d * n);
        for j in 0..n {
            let mut coeff = ONE;
            for k in 0..n {
                if k != j {
                    coeff *= amps[k][idx[k]];
                }
            }
            if coeff == ZERO {
                continue;
            }
            let a = &exts[j].base().kraus()[idx[j]];
            for r in 0..d {
                for c in 0..d {
                    s[(r * n + j, c * n + j)] = coeff * a[(r, c)];
                }
            }
        }
        kraus.push(s);
    }
    KrausChannel::new(kraus)
}

/// Fixes the path state: ρ ↦ sup(ρ ⊗ ω), returned as a channel from the
/// message alone into message ⊗ path. A mixed ω is absorbed through its
/// spectral decomposition, one Kraus operator per (Kraus, eigenvector) pair.
pub fn effective_channel(sup: &KrausChannel, cfg: &PathConfig) -> Result<EffectiveChannel> {
    let n = cfg.n_paths();
    if sup.dim_in() != sup.dim_out() || sup.dim_in() % n != 0 {
        return Err(Error::DimMismatch {
            context: "superposition channel dims",
            expected: n,
            found: sup.dim_in(),
        });
    }
    let d = sup.dim_in() / n;
    let spectrum = decomp::density_spectrum(cfg.omega(), 1e-14);
    let mut kraus = Vec::with_capacity(sup.kraus_count() * spectrum.len());
    for (q, phi) in &spectrum {
        // I_d ⊗ √q |φ⟩ : d → d·N
        let mut inject = CMat::zeros(d * n, d);
        for m in 0..d {
            for p in 0..n {
                inject[(m * n + p, m)] = phi[(p, 0)] * C64::new(q.sqrt(), 0.0);
            }
        }
        for s in sup.kraus() {
            kraus.push(s.mul(&inject));
        }
    }
    EffectiveChannel::new(KrausChannel::new(kraus)?, d, n)
}

/// Closed interference form for N identical transmission lines with the path
/// in the maximally coherent state:
/// ρ ↦ (𝒜(ρ) + (N−1)FρF†)/N ⊗ |e₀⟩⟨e₀| + (𝒜(ρ) − FρF†)/N ⊗ (I − |e₀⟩⟨e₀|),
/// assembled analytically from the vacuum interference operator F.
pub fn closed_form_identical(ext: &VacuumExtension, n: usize) -> Result<EffectiveChannel> {
    if n == 0 {
        return Err(Error::Domain(alloc::string::String::from("need at least one path")));
    }
    let d = ext.message_dim();
    let f = ext.interference_operator()?;
    // The defect map (𝒜 − F·F†)/N is completely positive because F is the
    // amplitude-weighted average of the Kraus operators. Its Kraus operators
    // attach to every path basis state; F itself attaches to |e₀⟩.
    let dd = d * d;
    let mut defect_choi = CMat::zeros(dd, dd);
    for a in ext.base().kraus() {
        let v = a.flatten();
        for r in 0..dd {
            for c in 0..dd {
                defect_choi[(r, c)] += v[r] * v[c].conj();
            }
        }
    }
    let fv = f.flatten();
    for r in 0..dd {
        for c in 0..dd {
            defect_choi[(r, c)] -= fv[r] * fv[c].conj();
        }
    }
    let (vals, vecs) = decomp::eigh(&defect_choi);
    let mut kraus: Vec<CMat> = Vec::new();
    for (idx, &lam) in vals.iter().enumerate() {
        if lam <= crate::TOL_CHOI_EIG {
            continue;
        }
        let w = (lam / n as f64).sqrt();
        let op = CMat::from_fn(d, d, |r, c| vecs[(r * d + c, idx)] * C64::new(w, 0.0));
        for j in 0..n {
            let mut k = CMat::zeros(d * n, d);
            for r in 0..d {
                for c in 0..d {
                    k[(r * n + j, c)] = op[(r, c)];
                }
            }
            kraus.push(k);
        }
    }
    let e0 = CMat::uniform_ket(n);
    let mut kf = CMat::zeros(d * n, d);
    for r in 0..d {
        for c in 0..d {
            for j in 0..n {
                kf[(r * n + j, c)] = f[(r, c)] * e0[(j, 0)];
            }
        }
    }
    kraus.push(kf);
    EffectiveChannel::new(KrausChannel::new(kraus)?, d, n)
}

/// Two-path superposition realised as the explicit controlled-SWAP circuit on
/// Ã ⊗ B̃ ⊗ P: route by CSWAP, apply Ã ⊗ B̃, route back, discard the wire
/// holding the vacuum. Returns the channel on message ⊗ path.
pub fn cswap_realization(
    ext_a: &VacuumExtension,
    ext_b: &VacuumExtension,
) -> Result<KrausChannel> {
    let d = ext_a.message_dim();
    if ext_b.message_dim() != d {
        return Err(Error::DimMismatch {
            context: "cswap message dims",
            expected: d,
            found: ext_b.message_dim(),
        });
    }
    if ext_a.vac_dim() != 1 || ext_b.vac_dim() != 1 {
        return Err(Error::UnsupportedVacuumDim { vac_dim: ext_a.vac_dim().max(ext_b.vac_dim()) });
    }
    let dt = d + 1;
    let full = dt * dt * 2;

    // CSWAP = I⊗I⊗|0⟩⟨0| + SWAP⊗|1⟩⟨1| on Ã ⊗ B̃ ⊗ P
    let mut cswap = CMat::zeros(full, full);
    for a in 0..dt {
        for b in 0..dt {
            cswap[((a * dt + b) * 2, (a * dt + b) * 2)] = ONE;
            cswap[((b * dt + a) * 2 + 1, (a * dt + b) * 2 + 1)] = ONE;
        }
    }

    // J : M ⊗ P → Ã ⊗ B̃ ⊗ P, |m⟩|p⟩ ↦ |m⟩_Ã |vac⟩_B̃ |p⟩
    let mut inject = CMat::zeros(full, d * 2);
    for m in 0..d {
        for p in 0..2 {
            inject[((m * dt + d) * 2 + p, m * 2 + p)] = ONE;
        }
    }

    let mut kraus = Vec::new();
    let pre = cswap.mul(&inject);
    for ka in ext_a.assembled().kraus() {
        for kb in ext_b.assembled().kraus() {
            let mid = embed_op(&kron(ka, kb), &[dt, dt, 2], &[0, 1])?;
            let stage = cswap.mul(&mid).mul(&pre);
            // trace the B̃ wire and compress Ã to its message sector
            for b in 0..dt {
                let mut k = CMat::zeros(d * 2, d * 2);
                for m in 0..d {
                    for p in 0..2 {
                        for col in 0..d * 2 {
                            k[(m * 2 + p, col)] = stage[((m * dt + b) * 2 + p, col)];
                        }
                    }
                }
                if k.max_abs() > 1e-15 {
                    kraus.push(k);
                }
            }
        }
    }
    KrausChannel::new(kraus)
}

/// Effective channel for a particle travelling along two paths whose local
/// environments are jointly prepared in `sigma_ef`: embed ρ ⊗ ω into the
/// one-particle sector, interact through the local vacuum extensions, trace
/// the environments and map back to message ⊗ path.
pub fn correlated_env_channel(
    d: usize,
    v_ae: &CMat,
    w_bf: &CMat,
    sigma_ef: &CMat,
    cfg: &PathConfig,
) -> Result<EffectiveChannel> {
    if cfg.n_paths() != 2 {
        return Err(Error::DimMismatch {
            context: "correlated environments need two paths",
            expected: 2,
            found: cfg.n_paths(),
        });
    }
    let dt = d + 1;
    if v_ae.rows() % dt != 0 || w_bf.rows() % dt != 0 {
        return Err(Error::DimMismatch {
            context: "interaction dims",
            expected: dt,
            found: v_ae.rows(),
        });
    }
    let e = v_ae.rows() / dt;
    let f = w_bf.rows() / dt;
    check_local_vacuum(v_ae, d, e)?;
    check_local_vacuum(w_bf, d, f)?;
    if sigma_ef.rows() != e * f || !sigma_ef.is_density(TOL_ENTRY) {
        return Err(Error::InvalidDensity {
            context: "environment state",
            deviation: (sigma_ef.trace() - ONE).norm(),
        });
    }

    let dims = [dt, dt, e, f];
    let emb = particle_embedding(d, 2); // (d+1)² × 2d
    let g = embed_op(v_ae, &dims, &[0, 2])?.mul(&embed_op(w_bf, &dims, &[1, 3])?);

    // channel action on matrix units, reassembled into a Choi matrix
    let dn = d * 2;
    let mut choi = CMat::zeros(dn * d, dn * d);
    for a in 0..d {
        for b in 0..d {
            let mut unit = CMat::zeros(d, d);
            unit[(a, b)] = ONE;
            let rho_mp = kron(&unit, cfg.omega());
            let modes = emb.mul(&rho_mp).mul(&emb.adjoint());
            let full = kron(&modes, sigma_ef);
            let evolved = g.mul(&full).mul(&g.adjoint());
            let traced = partial_trace(&evolved, &dims, &[0, 1])?;
            let out = emb.adjoint().mul(&traced).mul(&emb);
            for r in 0..dn {
                for c in 0..dn {
                    choi[(r * d + a, c * d + b)] = out[(r, c)];
                }
            }
        }
    }
    let chan = kraus_from_choi(&choi, d, dn)?;
    EffectiveChannel::new(chan, d, 2)
}

/// Extracts a Kraus list from a (numerically PSD) Choi matrix.
pub(crate) fn kraus_from_choi(choi: &CMat, dim_in: usize, dim_out: usize) -> Result<KrausChannel> {
    let (vals, vecs) = decomp::eigh(choi);
    let mut kraus = Vec::new();
    for (idx, &lam) in vals.iter().enumerate() {
        if lam <= crate::TOL_CHOI_EIG {
            continue;
        }
        let s = lam.sqrt();
        let flat: Vec<C64> = (0..choi.rows()).map(|r| vecs[(r, idx)] * C64::new(s, 0.0)).collect();
        kraus.push(CMat::from_flat(dim_out, dim_in, &flat));
    }
    KrausChannel::new(kraus)
}

/// The vacuum-discarding map from Ã ⊗ B̃ (v-dimensional vacua) to A ⊕ B:
/// success Kraus `P_A ⊗ ⟨υₖ| ⊕ ⟨υₖ| ⊗ P_B` inverting the one-particle
/// embedding, plus a failure branch preparing `failure_state` on the zero- and
/// two-particle sectors.
pub fn vacuum_discarding_map(
    d_a: usize,
    d_b: usize,
    v: usize,
    failure_state: &CMat,
) -> Result<KrausChannel> {
    let sum_dim = d_a + d_b;
    if failure_state.rows() != sum_dim || failure_state.cols() != 1 {
        return Err(Error::DimMismatch {
            context: "failure state",
            expected: sum_dim,
            found: failure_state.rows(),
        });
    }
    let norm: f64 = failure_state.frobenius_norm();
    if (norm - 1.0).abs() > TOL_ENTRY {
        return Err(Error::Normalization { context: "failure state", deviation: (norm - 1.0).abs() });
    }
    let (at, bt) = (d_a + v, d_b + v);
    let total = at * bt;
    let mut kraus = Vec::new();
    for k in 0..v {
        let mut t = CMat::zeros(sum_dim, total);
        for a in 0..d_a {
            t[(a, a * bt + (d_b + k))] = ONE;
        }
        for b in 0..d_b {
            t[(d_a + b, (d_a + k) * bt + b)] = ONE;
        }
        kraus.push(t);
    }
    // failure branch: |ψ₀⟩⟨χ| over a basis of the orthocomplement of the
    // one-particle sector
    for a in 0..at {
        for b in 0..bt {
            let one_particle = (a < d_a && b >= d_b) || (a >= d_a && b < d_b);
            if one_particle {
                continue;
            }
            let mut t = CMat::zeros(sum_dim, total);
            for r in 0..sum_dim {
                t[(r, a * bt + b)] = failure_state[(r, 0)];
            }
            kraus.push(t);
        }
    }
    KrausChannel::new(kraus)
}

/// Superposition of two channels with a shared v-dimensional vacuum:
/// T ∘ (Ã ⊗ B̃) ∘ V on A ⊕ B, where V is the one-particle embedding and T the
/// vacuum-discarding map.
pub fn superpose_general_vacuum(
    ext_a: &VacuumExtension,
    ext_b: &VacuumExtension,
    failure_state: &CMat,
) -> Result<KrausChannel> {
    let v = ext_a.vac_dim();
    if ext_b.vac_dim() != v {
        return Err(Error::DimMismatch { context: "vacuum dims", expected: v, found: ext_b.vac_dim() });
    }
    let (d_a, d_b) = (ext_a.message_dim(), ext_b.message_dim());
    let bt = d_b + v;

    // V : A ⊕ B → Ã ⊗ B̃, |α⟩⊕|β⟩ ↦ |α⟩⊗|υ₀⟩ ⊕ |υ₀⟩⊗|β⟩
    let mut embed = CMat::zeros((d_a + v) * bt, d_a + d_b);
    for a in 0..d_a {
        embed[(a * bt + d_b, a)] = ONE;
    }
    for b in 0..d_b {
        embed[(d_a * bt + b, d_a + b)] = ONE;
    }

    let discard = vacuum_discarding_map(d_a, d_b, v, failure_state)?;
    let joint = product(&ext_a.assembled(), &ext_b.assembled());
    let mut kraus = Vec::new();
    for t in discard.kraus() {
        for s in joint.kraus() {
            let k = t.mul(s).mul(&embed);
            if k.max_abs() > 1e-15 {
                kraus.push(k);
            }
        }
    }
    KrausChannel::new(kraus)
}

/// Realises the superposition through unitary dilations: the block unitary
/// W = (U_AE ⊗ U_FG) ⊕ (V_BF ⊗ V_EG) applied to ρ ⊗ η ⊗ φ ⊗ γ with the three
/// environments traced out. U_AE/V_BF extend the Stinespring isometries of
/// the two channels; U_FG and V_EG prepare the vacuum-amplitude states.
pub fn oi_realization(ext_a: &VacuumExtension, ext_b: &VacuumExtension) -> Result<KrausChannel> {
    let v = ext_a.vac_dim();
    if ext_b.vac_dim() != v {
        return Err(Error::DimMismatch { context: "vacuum dims", expected: v, found: ext_b.vac_dim() });
    }
    let (d_a, d_b) = (ext_a.message_dim(), ext_b.message_dim());
    let (ra, rb) = (ext_a.kraus_count(), ext_b.kraus_count());
    let s_dim = d_a + d_b;

    // unitary extensions of the Stinespring isometries (environments start in |0⟩)
    let u_ae = {
        let (iso, _) = ext_a.base().stinespring();
        let cols: Vec<(usize, Vec<C64>)> =
            (0..d_a).map(|c| (c * ra, (0..d_a * ra).map(|r| iso[(r, c)]).collect())).collect();
        decomp::unitary_with_columns(d_a * ra, &cols)
    };
    let v_bf = {
        let (iso, _) = ext_b.base().stinespring();
        let cols: Vec<(usize, Vec<C64>)> =
            (0..d_b).map(|c| (c * rb, (0..d_b * rb).map(|r| iso[(r, c)]).collect())).collect();
        decomp::unitary_with_columns(d_b * rb, &cols)
    };
    // amplitude-preparation unitaries: first column = Σᵢₖ amplitude |i⟩|k⟩
    let v_eg = {
        let alpha = CMat::from_fn(ra * v, 1, |rk, _| ext_a.vac_blocks()[rk / v][(rk % v, 0)]);
        decomp::unitary_with_first_column(&alpha)
    };
    let u_fg = {
        let beta = CMat::from_fn(rb * v, 1, |rk, _| ext_b.vac_blocks()[rk / v][(rk % v, 0)]);
        decomp::unitary_with_first_column(&beta)
    };

    // dense W on (A ⊕ B) ⊗ E ⊗ F ⊗ G
    let env = ra * rb * v;
    let total = s_dim * env;
    let mut w = CMat::zeros(total, total);
    let idx = |s: usize, i: usize, j: usize, k: usize| ((s * ra + i) * rb + j) * v + k;
    for s in 0..d_a {
        for s2 in 0..d_a {
            for i in 0..ra {
                for i2 in 0..ra {
                    let ua = u_ae[(s * ra + i, s2 * ra + i2)];
                    if ua == ZERO {
                        continue;
                    }
                    for j in 0..rb {
                        for j2 in 0..rb {
                            for k in 0..v {
                                for k2 in 0..v {
                                    let uf = u_fg[(j * v + k, j2 * v + k2)];
                                    if uf == ZERO {
                                        continue;
                                    }
                                    w[(idx(s, i, j, k), idx(s2, i2, j2, k2))] = ua * uf;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    for s in 0..d_b {
        for s2 in 0..d_b {
            for j in 0..rb {
                for j2 in 0..rb {
                    let vb = v_bf[(s * rb + j, s2 * rb + j2)];
                    if vb == ZERO {
                        continue;
                    }
                    for i in 0..ra {
                        for i2 in 0..ra {
                            for k in 0..v {
                                for k2 in 0..v {
                                    let ve = v_eg[(i * v + k, i2 * v + k2)];
                                    if ve == ZERO {
                                        continue;
                                    }
                                    w[(idx(d_a + s, i, j, k), idx(d_a + s2, i2, j2, k2))] =
                                        vb * ve;
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // channel on A ⊕ B by conjugating basis units with W and tracing E, F, G
    let mut choi = CMat::zeros(s_dim * s_dim, s_dim * s_dim);
    for a in 0..s_dim {
        for b in 0..s_dim {
            let mut unit = CMat::zeros(s_dim, s_dim);
            unit[(a, b)] = ONE;
            let mut env_state = CMat::zeros(env, env);
            env_state[(0, 0)] = ONE;
            let full = kron(&unit, &env_state);
            let evolved = w.mul(&full).mul(&w.adjoint());
            let out = partial_trace(&evolved, &[s_dim, ra, rb, v], &[0])?;
            for r in 0..s_dim {
                for c in 0..s_dim {
                    choi[(r * s_dim + a, c * s_dim + b)] = out[(r, c)];
                }
            }
        }
    }
    kraus_from_choi(&choi, s_dim, s_dim)
}
