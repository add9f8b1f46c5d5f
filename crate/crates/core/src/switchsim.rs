//! The quantum-SWITCH channel and its circuit realisation with memories.
//!
//! `switch_channel` builds the abstract switched channel with Kraus operators
//! `AᵢBⱼ ⊗ |0⟩⟨0| + BⱼAᵢ ⊗ |1⟩⟨1|` on message ⊗ control. The circuit of
//! `simulate_switch_circuit` reproduces it from local resources: two regions
//! with persistent memories, interactions that act trivially on the vacuum,
//! and a mid-circuit SWAP that routes the particle from one region to the
//! other (a bit flip on the path in the particle picture). The port labels are
//! chosen so that control |0⟩ enters the second region first, which makes the
//! circuit output coincide with the abstract Kraus form exactly.
//!
//! `superpose_memory_channels` generalises the circuit to T time steps with
//! product-form repeaters between steps, memories threading through all steps
//! of their wire.

use alloc::vec::Vec;

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linops::{CMat, ONE, embed_op, kron, partial_trace};
use crate::superpose::{BranchDecomposition, kraus_from_choi};
use crate::vacuum::check_local_vacuum;
use crate::TOL_ENTRY;

/// One interaction step: a unitary on (d+1)·m acting as the identity on the
/// vacuum ⊗ memory block.
#[derive(Clone, Debug)]
pub struct MemoryStep {
    unitary: CMat,
    message_dim: usize,
    memory_dim: usize,
}

impl MemoryStep {
    pub fn new(unitary: CMat, message_dim: usize) -> Result<Self> {
        let dt = message_dim + 1;
        if unitary.rows() % dt != 0 || unitary.rows() != unitary.cols() {
            return Err(Error::DimMismatch {
                context: "memory step unitary",
                expected: dt,
                found: unitary.rows(),
            });
        }
        let memory_dim = unitary.rows() / dt;
        check_local_vacuum(&unitary, message_dim, memory_dim)?;
        Ok(MemoryStep { unitary, message_dim, memory_dim })
    }

    pub fn unitary(&self) -> &CMat {
        &self.unitary
    }

    pub fn message_dim(&self) -> usize {
        self.message_dim
    }

    pub fn memory_dim(&self) -> usize {
        self.memory_dim
    }

    /// The message channel obtained by feeding the memory with `eta` and
    /// tracing it out after the interaction.
    pub fn induced_channel(&self, eta: &CMat) -> Result<KrausChannel> {
        let ext =
            crate::vacuum::induced_extension_from_interaction(&self.unitary, self.message_dim, eta)?;
        Ok(ext.base().clone())
    }
}

/// Lifts an interaction unitary on A ⊗ E to the local vacuum extension
/// Ṽ = V ⊕ (|vac⟩⟨vac| ⊗ I) on (A ⊕ Vac) ⊗ E.
pub fn lift_interaction(v: &CMat, d: usize) -> Result<CMat> {
    if v.rows() % d != 0 || v.rows() != v.cols() {
        return Err(Error::DimMismatch { context: "interaction", expected: d, found: v.rows() });
    }
    let m = v.rows() / d;
    let dt = d + 1;
    let mut out = CMat::zeros(dt * m, dt * m);
    for a in 0..d {
        for b in 0..d {
            for i in 0..m {
                for j in 0..m {
                    out[(a * m + i, b * m + j)] = v[(a * m + i, b * m + j)];
                }
            }
        }
    }
    for i in 0..m {
        out[(d * m + i, d * m + i)] = ONE;
    }
    Ok(out)
}

/// The switched channel on message ⊗ control:
/// Kraus `Sᵢⱼ = AᵢBⱼ ⊗ |0⟩⟨0| + BⱼAᵢ ⊗ |1⟩⟨1|`.
pub fn switch_channel(a: &KrausChannel, b: &KrausChannel) -> Result<KrausChannel> {
    let d = a.dim_in();
    if a.dim_out() != d || b.dim_in() != d || b.dim_out() != d {
        return Err(Error::DimMismatch {
            context: "switch_channel",
            expected: d,
            found: b.dim_in(),
        });
    }
    let p0 = CMat::pure(&CMat::ket(2, 0));
    let p1 = CMat::pure(&CMat::ket(2, 1));
    let mut kraus = Vec::with_capacity(a.kraus_count() * b.kraus_count());
    for ai in a.kraus() {
        for bj in b.kraus() {
            let s = kron(&ai.mul(bj), &p0).add(&kron(&bj.mul(ai), &p1));
            kraus.push(s);
        }
    }
    KrausChannel::new(kraus)
}

/// Decomposes the self-switched channel probed with control |+⟩ into its
/// Fourier-basis branches: the anticommutator operation on |+⟩⟨+| and the
/// commutator operation on |−⟩⟨−|, probabilities probed on the maximally
/// mixed input.
pub fn self_switch_decomposition(a: &KrausChannel) -> BranchDecomposition {
    let d = a.dim_in();
    let mut plus_ops = Vec::new();
    let mut minus_ops = Vec::new();
    for ai in a.kraus() {
        for aj in a.kraus() {
            let fwd = ai.mul(aj);
            let bwd = aj.mul(ai);
            plus_ops.push(fwd.add(&bwd).scale(0.5));
            minus_ops.push(fwd.sub(&bwd).scale(0.5));
        }
    }
    let plus = CMat::pure(&CMat::uniform_ket(2));
    let minus = CMat::identity(2).sub(&plus);
    BranchDecomposition::from_branch_ops(
        alloc::vec![(plus_ops, plus), (minus_ops, minus)],
        &CMat::maximally_mixed(d),
    )
}

/// Simulates the two-region circuit: embed the particle, interact with both
/// regions, route across by the mid-circuit SWAP, interact again, trace the
/// memories. Memories persist across the whole circuit. The result is the
/// channel on message ⊗ control and equals [`switch_channel`] of the induced
/// channels whatever the chosen dilations.
pub fn simulate_switch_circuit(
    step_a: &MemoryStep,
    step_b: &MemoryStep,
    eta_e: &CMat,
    eta_f: &CMat,
) -> Result<KrausChannel> {
    let d = step_a.message_dim();
    if step_b.message_dim() != d {
        return Err(Error::DimMismatch {
            context: "switch circuit message dims",
            expected: d,
            found: step_b.message_dim(),
        });
    }
    let (ma, mb) = (step_a.memory_dim(), step_b.memory_dim());
    if !eta_e.is_density(TOL_ENTRY) || eta_e.rows() != ma {
        return Err(Error::InvalidDensity { context: "memory state E", deviation: 0.0 });
    }
    if !eta_f.is_density(TOL_ENTRY) || eta_f.rows() != mb {
        return Err(Error::InvalidDensity { context: "memory state F", deviation: 0.0 });
    }
    let dt = d + 1;
    let dims = [dt, dt, ma, mb];

    let interactions =
        embed_op(step_a.unitary(), &dims, &[0, 2])?.mul(&embed_op(step_b.unitary(), &dims, &[1, 3])?);
    let mut swap = CMat::zeros(dt * dt, dt * dt);
    for x in 0..dt {
        for y in 0..dt {
            swap[(y * dt + x, x * dt + y)] = ONE;
        }
    }
    let total = interactions.mul(&embed_op(&swap, &dims, &[0, 1])?).mul(&interactions);

    // control |0⟩ enters the B wire first and is read out from the A wire
    let dn = 2 * d;
    let mut in_emb = CMat::zeros(dt * dt, dn);
    let mut out_emb = CMat::zeros(dt * dt, dn);
    for m in 0..d {
        in_emb[(d * dt + m, m * 2)] = ONE; // |m⟩⊗|0⟩ ↦ |vac, m⟩
        in_emb[(m * dt + d, m * 2 + 1)] = ONE; // |m⟩⊗|1⟩ ↦ |m, vac⟩
        out_emb[(m * dt + d, m * 2)] = ONE; // |m, vac⟩ ↦ |m⟩⊗|0⟩
        out_emb[(d * dt + m, m * 2 + 1)] = ONE; // |vac, m⟩ ↦ |m⟩⊗|1⟩
    }

    let mut choi = CMat::zeros(dn * dn, dn * dn);
    for a in 0..dn {
        for b in 0..dn {
            let mut unit = CMat::zeros(dn, dn);
            unit[(a, b)] = ONE;
            let modes = in_emb.mul(&unit).mul(&in_emb.adjoint());
            let full = kron(&kron(&modes, eta_e), eta_f);
            let evolved = total.mul(&full).mul(&total.adjoint());
            let traced = partial_trace(&evolved, &dims, &[0, 1])?;
            let out = out_emb.adjoint().mul(&traced).mul(&out_emb);
            for r in 0..dn {
                for c in 0..dn {
                    choi[(r * dn + a, c * dn + b)] = out[(r, c)];
                }
            }
        }
    }
    kraus_from_choi(&choi, dn, dn)
}

/// Splits a repeater channel on message ⊗ path into its product parts,
/// rejecting repeaters that correlate message and path.
pub fn factor_product_repeater(
    repeater: &KrausChannel,
    d: usize,
    n: usize,
) -> Result<(KrausChannel, KrausChannel)> {
    if repeater.dim_in() != d * n || repeater.dim_out() != d * n {
        return Err(Error::DimMismatch {
            context: "repeater dims",
            expected: d * n,
            found: repeater.dim_in(),
        });
    }
    // marginal channels against maximally mixed partners
    let message_part = {
        let mut choi = CMat::zeros(d * d, d * d);
        for a in 0..d {
            for b in 0..d {
                let mut unit = CMat::zeros(d, d);
                unit[(a, b)] = ONE;
                let out = repeater.apply(&kron(&unit, &CMat::maximally_mixed(n)));
                let red = partial_trace(&out, &[d, n], &[0])?;
                for r in 0..d {
                    for c in 0..d {
                        choi[(r * d + a, c * d + b)] = red[(r, c)];
                    }
                }
            }
        }
        kraus_from_choi(&choi, d, d)?
    };
    let path_part = {
        let mut choi = CMat::zeros(n * n, n * n);
        for a in 0..n {
            for b in 0..n {
                let mut unit = CMat::zeros(n, n);
                unit[(a, b)] = ONE;
                let out = repeater.apply(&kron(&CMat::maximally_mixed(d), &unit));
                let red = partial_trace(&out, &[d, n], &[1])?;
                for r in 0..n {
                    for c in 0..n {
                        choi[(r * n + a, c * n + b)] = red[(r, c)];
                    }
                }
            }
        }
        kraus_from_choi(&choi, n, n)?
    };
    let rebuilt = crate::channels::product(&message_part, &path_part);
    let residual = repeater.distance(&rebuilt)?;
    if residual > crate::TOL_CHANNEL_EQ {
        return Err(Error::ProductRepeaterViolation { residual });
    }
    Ok((message_part, path_part))
}

/// End-to-end channel on message ⊗ path for T interaction steps per wire with
/// persistent memories, interleaved with product-form repeaters
/// (message channel, path channel). Path 0 threads through the A wire.
pub fn superpose_memory_channels(
    steps_a: &[MemoryStep],
    steps_b: &[MemoryStep],
    repeaters: &[(KrausChannel, KrausChannel)],
    eta_e: &CMat,
    eta_f: &CMat,
) -> Result<KrausChannel> {
    let t = steps_a.len();
    if t == 0 || steps_b.len() != t {
        return Err(Error::DimMismatch {
            context: "step count",
            expected: t.max(1),
            found: steps_b.len(),
        });
    }
    if repeaters.len() + 1 != t {
        return Err(Error::DimMismatch {
            context: "repeater count",
            expected: t - 1,
            found: repeaters.len(),
        });
    }
    let d = steps_a[0].message_dim();
    let (ma, mb) = (steps_a[0].memory_dim(), steps_b[0].memory_dim());
    for s in steps_a {
        if s.message_dim() != d || s.memory_dim() != ma {
            return Err(Error::DimMismatch {
                context: "A-wire step dims",
                expected: ma,
                found: s.memory_dim(),
            });
        }
    }
    for s in steps_b {
        if s.message_dim() != d || s.memory_dim() != mb {
            return Err(Error::DimMismatch {
                context: "B-wire step dims",
                expected: mb,
                found: s.memory_dim(),
            });
        }
    }
    let dt = d + 1;
    let dims = [dt, dt, ma, mb];
    let dn = 2 * d;

    // standard embedding: path 0 on the A wire
    let mut emb = CMat::zeros(dt * dt, dn);
    for m in 0..d {
        emb[(m * dt + d, m * 2)] = ONE;
        emb[(d * dt + m, m * 2 + 1)] = ONE;
    }

    // lift repeater Kraus operators into the one-particle sector of Ã ⊗ B̃
    let mut lifted_repeaters: Vec<Vec<CMat>> = Vec::with_capacity(repeaters.len());
    for (msg, path) in repeaters {
        if msg.dim_in() != d || msg.dim_out() != d || path.dim_in() != 2 || path.dim_out() != 2 {
            return Err(Error::DimMismatch {
                context: "repeater factor dims",
                expected: d,
                found: msg.dim_in(),
            });
        }
        let mut ops = Vec::new();
        for mk in msg.kraus() {
            for pl in path.kraus() {
                let lifted = emb.mul(&kron(mk, pl)).mul(&emb.adjoint());
                ops.push(embed_op(&lifted, &dims, &[0, 1])?);
            }
        }
        lifted_repeaters.push(ops);
    }

    let step_unitaries: Vec<CMat> = (0..t)
        .map(|k| {
            Ok(embed_op(steps_a[k].unitary(), &dims, &[0, 2])?
                .mul(&embed_op(steps_b[k].unitary(), &dims, &[1, 3])?))
        })
        .collect::<Result<_>>()?;

    let mut choi = CMat::zeros(dn * dn, dn * dn);
    for a in 0..dn {
        for b in 0..dn {
            let mut unit = CMat::zeros(dn, dn);
            unit[(a, b)] = ONE;
            let modes = emb.mul(&unit).mul(&emb.adjoint());
            let mut state = kron(&kron(&modes, eta_e), eta_f);
            for k in 0..t {
                state = step_unitaries[k].mul(&state).mul(&step_unitaries[k].adjoint());
                if k + 1 < t {
                    let mut next = CMat::zeros(state.rows(), state.cols());
                    for op in &lifted_repeaters[k] {
                        next = next.add(&op.mul(&state).mul(&op.adjoint()));
                    }
                    state = next;
                }
            }
            let traced = partial_trace(&state, &dims, &[0, 1])?;
            let out = emb.adjoint().mul(&traced).mul(&emb);
            for r in 0..dn {
                for c in 0..dn {
                    choi[(r * dn + a, c * dn + b)] = out[(r, c)];
                }
            }
        }
    }
    kraus_from_choi(&choi, dn, dn)
}
