//! Information quantities: entropies, the Holevo bound, induced classical
//! channels with their Blahut–Arimoto capacity, a derivative-free coherent
//! information maximiser, and path-measurement decoding with unitary
//! correction search.
//!
//! All logarithms are base 2; capacities are in bits (or qubits) per particle.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::channels::KrausChannel;
use crate::decomp;
use crate::error::{Error, Result};
use crate::linops::{C64, CMat};
use crate::superpose::{BranchDecomposition, EffectiveChannel};
use crate::TOL_ENTRY;

const LN2: f64 = core::f64::consts::LN_2;

/// Row-stochastic matrix describing a discrete memoryless channel.
#[derive(Clone, Debug)]
pub struct StochasticMatrix {
    n_in: usize,
    n_out: usize,
    p: Vec<f64>,
}

impl StochasticMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n_in = rows.len();
        if n_in == 0 {
            return Err(Error::Domain(alloc::string::String::from("empty stochastic matrix")));
        }
        let n_out = rows[0].len();
        let mut p = Vec::with_capacity(n_in * n_out);
        for row in &rows {
            if row.len() != n_out {
                return Err(Error::DimMismatch {
                    context: "stochastic matrix row",
                    expected: n_out,
                    found: row.len(),
                });
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-12 || row.iter().any(|&x| x < -1e-12) {
                return Err(Error::Normalization {
                    context: "stochastic matrix row",
                    deviation: (sum - 1.0).abs(),
                });
            }
            p.extend(row.iter().map(|&x| x.max(0.0)));
        }
        Ok(StochasticMatrix { n_in, n_out, p })
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.p[x * self.n_out + y]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n_in).map(|x| (0..self.n_out).map(|y| self.prob(x, y)).collect()).collect()
    }
}

/// How a capacity figure was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CapacityMethod {
    BlahutArimoto,
    CoherentInfoMax,
    Analytic,
}

/// What achieves the reported value.
#[derive(Clone, Debug)]
pub enum Achiever {
    Distribution(Vec<f64>),
    State(CMat),
    None,
}

/// Capacity value in bits plus convergence metadata.
#[derive(Clone, Debug)]
pub struct CapacityReport {
    pub value: f64,
    pub method: CapacityMethod,
    pub iterations: usize,
    pub residual: f64,
    pub achiever: Achiever,
}

/// Binary entropy h(x) = −x log₂x − (1−x) log₂(1−x), with 0·log 0 = 0.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(alloc::format!("binary entropy argument {x} outside [0, 1]")));
    }
    let term = |t: f64| if t <= 0.0 { 0.0 } else { -t * t.log2() };
    Ok(term(x) + term(1.0 - x))
}

/// Von Neumann entropy −Σ λᵢ log₂ λᵢ over eigenvalues above 1e-12.
pub fn von_neumann_entropy(rho: &CMat) -> Result<f64> {
    if !rho.is_density(TOL_ENTRY) {
        return Err(Error::InvalidDensity {
            context: "entropy input",
            deviation: (rho.trace() - crate::linops::ONE).norm(),
        });
    }
    let (vals, _) = decomp::eigh(rho);
    Ok(vals.iter().filter(|&&l| l > 1e-12).map(|&l| -l * l.log2()).sum())
}

/// p(y|x) = Tr[povm_y · eff(input_x)] for a fixed input ensemble and POVM on
/// the message ⊗ path output.
pub fn induced_classical_channel(
    eff: &EffectiveChannel,
    inputs: &[CMat],
    povm: &[CMat],
) -> Result<StochasticMatrix> {
    let out_dim = eff.chan().dim_out();
    let mut sum = CMat::zeros(out_dim, out_dim);
    for e in povm {
        if e.rows() != out_dim || !e.is_psd(TOL_ENTRY) {
            return Err(Error::InvalidPovm { deviation: f64::NAN });
        }
        sum = sum.add(e);
    }
    let dev = sum.max_abs_diff(&CMat::identity(out_dim));
    if dev > TOL_ENTRY {
        return Err(Error::InvalidPovm { deviation: dev });
    }
    let mut rows = Vec::with_capacity(inputs.len());
    for rho in inputs {
        if !rho.is_density(TOL_ENTRY) {
            return Err(Error::InvalidDensity {
                context: "induced channel input",
                deviation: (rho.trace() - crate::linops::ONE).norm(),
            });
        }
        let out = eff.apply(rho);
        let row: Vec<f64> = povm.iter().map(|e| e.mul(&out).trace().re.max(0.0)).collect();
        rows.push(row);
    }
    StochasticMatrix::new(rows)
}

/// Blahut–Arimoto capacity of a discrete memoryless channel: alternating
/// optimisation with the standard lower/upper capacity bracket; converged
/// when the bracket is narrower than `tol` bits.
pub fn blahut_arimoto(p: &StochasticMatrix, tol: f64, max_iter: usize) -> Result<CapacityReport> {
    if tol <= 0.0 {
        return Err(Error::Domain(alloc::string::String::from("tolerance must be positive")));
    }
    let (n_in, n_out) = (p.n_in, p.n_out);
    let mut r = vec![1.0 / n_in as f64; n_in];
    let mut lower = 0.0;
    let mut upper = f64::INFINITY;
    for iter in 1..=max_iter {
        // q(y) = Σₓ r(x) p(y|x)
        let q: Vec<f64> =
            (0..n_out).map(|y| (0..n_in).map(|x| r[x] * p.prob(x, y)).sum()).collect();
        // per-input information density D(p(·|x) ‖ q) in nats
        let d: Vec<f64> = (0..n_in)
            .map(|x| {
                (0..n_out)
                    .map(|y| {
                        let pyx = p.prob(x, y);
                        if pyx <= 0.0 || q[y] <= 0.0 {
                            0.0
                        } else {
                            pyx * (pyx / q[y]).ln()
                        }
                    })
                    .sum()
            })
            .collect();
        lower = (0..n_in).map(|x| r[x] * d[x]).sum::<f64>() / LN2;
        upper = d.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)) / LN2;
        if upper - lower < tol {
            return Ok(CapacityReport {
                value: lower,
                method: CapacityMethod::BlahutArimoto,
                iterations: iter,
                residual: upper - lower,
                achiever: Achiever::Distribution(r),
            });
        }
        // r(x) ∝ r(x) exp(D(x))
        let mut next: Vec<f64> = (0..n_in).map(|x| r[x] * d[x].exp()).collect();
        let z: f64 = next.iter().sum();
        for v in next.iter_mut() {
            *v /= z;
        }
        r = next;
    }
    Err(Error::NonConvergence { iterations: max_iter, lower, upper })
}

/// Holevo quantity χ = S(Σ pᵢρᵢ) − Σ pᵢ S(ρᵢ) in bits.
pub fn holevo_quantity(ensemble: &[(f64, CMat)]) -> Result<f64> {
    if ensemble.is_empty() {
        return Err(Error::InvalidEnsemble(alloc::string::String::from("empty ensemble")));
    }
    let total: f64 = ensemble.iter().map(|&(p, _)| p).sum();
    if (total - 1.0).abs() > TOL_ENTRY || ensemble.iter().any(|&(p, _)| p < -1e-12) {
        return Err(Error::InvalidEnsemble(alloc::format!(
            "probabilities sum to {total}, must be 1"
        )));
    }
    let dim = ensemble[0].1.rows();
    let mut avg = CMat::zeros(dim, dim);
    let mut inner = 0.0;
    for (p, rho) in ensemble {
        if *p > 1e-15 {
            inner += p * von_neumann_entropy(rho)?;
        }
        avg = avg.add(&rho.scale(*p));
    }
    Ok(von_neumann_entropy(&avg)? - inner)
}

/// Coherent information of a channel at input ρ: S(𝒩(ρ)) − S(𝒩ᶜ(ρ)).
pub fn coherent_information(ch: &KrausChannel, rho: &CMat) -> Result<f64> {
    let out = ch.apply(rho);
    let comp = ch.complementary().apply(rho);
    Ok(entropy_clipped(&out) - entropy_clipped(&comp))
}

fn entropy_clipped(rho: &CMat) -> f64 {
    let (vals, _) = decomp::eigh(rho);
    vals.iter().filter(|&&l| l > 1e-12).map(|&l| -l * l.log2()).sum()
}

/// Maximises the coherent information over input states by restarted
/// Nelder–Mead search on a Cholesky-style parametrisation ρ = LL†/Tr[LL†].
/// Best-effort lower-bound semantics: the raw maximum is reported even when
/// negative.
pub fn coherent_information_max(
    ch: &KrausChannel,
    restarts: usize,
    tol: f64,
    seed: u64,
) -> Result<CapacityReport> {
    if ch.dim_in() != ch.dim_out() {
        return Err(Error::DimMismatch {
            context: "coherent information input",
            expected: ch.dim_in(),
            found: ch.dim_out(),
        });
    }
    let d = ch.dim_in();
    let n_params = 2 * d * d;
    let objective = |theta: &[f64]| -> f64 {
        let l = CMat::from_fn(d, d, |r, c| {
            let k = 2 * (r * d + c);
            C64::new(theta[k], theta[k + 1])
        });
        let g = l.mul(&l.adjoint());
        let tr = g.trace().re;
        if tr < 1e-12 {
            return -1e6;
        }
        let rho = g.scale(1.0 / tr);
        let out = ch.apply(&rho);
        let comp = ch.complementary().apply(&rho);
        entropy_clipped(&out) - entropy_clipped(&comp)
    };

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut best_value = f64::NEG_INFINITY;
    let mut best_theta = vec![0.0; n_params];
    let mut best_residual = f64::INFINITY;
    let mut total_iters = 0usize;
    let runs = restarts.max(1);
    for run in 0..runs {
        let start: Vec<f64> = if run == 0 {
            // maximally mixed start: L = I
            (0..n_params)
                .map(|k| if k % 2 == 0 && (k / 2) % (d + 1) == 0 { 1.0 } else { 0.0 })
                .collect()
        } else {
            (0..n_params).map(|_| StandardNormal.sample(&mut rng)).collect()
        };
        let (theta, value, iters, spread) = nelder_mead_max(&objective, &start, 400, tol * 1e-3);
        total_iters += iters;
        if value > best_value {
            best_value = value;
            best_theta = theta;
            best_residual = spread;
        }
    }
    let l = CMat::from_fn(d, d, |r, c| {
        let k = 2 * (r * d + c);
        C64::new(best_theta[k], best_theta[k + 1])
    });
    let g = l.mul(&l.adjoint());
    let rho = g.scale(1.0 / g.trace().re);
    Ok(CapacityReport {
        value: best_value,
        method: CapacityMethod::CoherentInfoMax,
        iterations: total_iters,
        residual: best_residual,
        achiever: Achiever::State(rho),
    })
}

/// Standard Nelder–Mead maximisation; returns (argmax, max, iterations,
/// final simplex spread).
fn nelder_mead_max(
    f: &dyn Fn(&[f64]) -> f64,
    start: &[f64],
    max_iter: usize,
    f_tol: f64,
) -> (Vec<f64>, f64, usize, f64) {
    let n = start.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(start.to_vec());
    for k in 0..n {
        let mut v = start.to_vec();
        v[k] += if v[k].abs() > 1e-8 { 0.25 * v[k].abs() } else { 0.25 };
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut iters = 0;
    for _ in 0..max_iter {
        iters += 1;
        // sort descending (maximisation)
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
        let reordered: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let revalued: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = reordered;
        values = revalued;
        let spread = values[0] - values[n];
        if spread.abs() < f_tol {
            break;
        }
        let centroid: Vec<f64> =
            (0..n).map(|k| simplex[..n].iter().map(|v| v[k]).sum::<f64>() / n as f64).collect();
        let worst = simplex[n].clone();
        let reflect: Vec<f64> =
            (0..n).map(|k| centroid[k] + (centroid[k] - worst[k])).collect();
        let fr = f(&reflect);
        if fr > values[0] {
            let expand: Vec<f64> =
                (0..n).map(|k| centroid[k] + 2.0 * (centroid[k] - worst[k])).collect();
            let fe = f(&expand);
            if fe > fr {
                simplex[n] = expand;
                values[n] = fe;
            } else {
                simplex[n] = reflect;
                values[n] = fr;
            }
        } else if fr > values[n - 1] {
            simplex[n] = reflect;
            values[n] = fr;
        } else {
            let contract: Vec<f64> =
                (0..n).map(|k| centroid[k] + 0.5 * (worst[k] - centroid[k])).collect();
            let fc = f(&contract);
            if fc > values[n] {
                simplex[n] = contract;
                values[n] = fc;
            } else {
                // shrink toward the best vertex
                let best = simplex[0].clone();
                for v in simplex.iter_mut().skip(1) {
                    for k in 0..n {
                        v[k] = best[k] + 0.5 * (v[k] - best[k]);
                    }
                }
                for (i, v) in simplex.iter().enumerate().skip(1) {
                    values[i] = f(v);
                }
            }
        }
    }
    let spread = {
        let hi = values.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let lo = values.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        hi - lo
    };
    let mut best = 0;
    for i in 1..values.len() {
        if values[i] > values[best] {
            best = i;
        }
    }
    (simplex[best].clone(), values[best], iters, spread)
}

/// Correction strategy for [`measure_path_decode`].
pub enum CorrectionSpec<'a> {
    /// Apply the given channel to the message after each branch, in order.
    Channels(&'a [KrausChannel]),
    /// Search for a unitary making each branch proportional to the identity.
    SearchUnitary,
}

/// Result of path-measurement decoding.
#[derive(Clone, Debug)]
pub struct DecodeReport {
    pub decomposition: BranchDecomposition,
    /// Choi purity per branch; 1 means the branch is a single-operator map.
    pub branch_purity: Vec<f64>,
    /// Correcting unitary per branch when one was found.
    pub corrections: Vec<Option<CMat>>,
    /// Overall corrected message channel when every branch was correctable.
    pub corrected: Option<KrausChannel>,
}

/// Measures the path with the given projectors and conditionally operates on
/// the message. With [`CorrectionSpec::SearchUnitary`] each branch is tested
/// for unitary correctability through its Choi purity (threshold 1 − 1e-8)
/// and the correcting unitary is read off the dominant Choi eigenvector.
pub fn measure_path_decode(
    eff: &EffectiveChannel,
    projectors: &[CMat],
    corrections: CorrectionSpec,
) -> Result<DecodeReport> {
    let d = eff.message_dim();
    let probe = CMat::maximally_mixed(d);
    let decomposition = BranchDecomposition::from_effective(eff, projectors, &probe)?;
    let mut branch_purity = Vec::with_capacity(decomposition.branches().len());
    let mut correcting: Vec<Option<CMat>> = Vec::with_capacity(decomposition.branches().len());
    let mut corrected_kraus: Vec<CMat> = Vec::new();
    let mut all_correctable = true;

    for (b_idx, branch) in decomposition.branches().iter().enumerate() {
        if branch.ops.is_empty() {
            branch_purity.push(1.0);
            correcting.push(Some(CMat::identity(d)));
            continue;
        }
        // Choi matrix of the (trace-non-increasing) branch map
        let dd = d * d;
        let mut choi = CMat::zeros(dd, dd);
        for op in &branch.ops {
            let v = op.flatten();
            for r in 0..dd {
                for c in 0..dd {
                    choi[(r, c)] += v[r] * v[c].conj();
                }
            }
        }
        let tr = choi.trace().re;
        let purity = if tr > 1e-14 {
            choi.mul(&choi).trace().re / (tr * tr)
        } else {
            1.0
        };
        branch_purity.push(purity);

        match &corrections {
            CorrectionSpec::Channels(chs) => {
                let ch = chs.get(b_idx).ok_or(Error::DimMismatch {
                    context: "correction channel count",
                    expected: decomposition.branches().len(),
                    found: chs.len(),
                })?;
                correcting.push(None);
                for op in &branch.ops {
                    for m in ch.kraus() {
                        corrected_kraus.push(m.mul(op));
                    }
                }
            }
            CorrectionSpec::SearchUnitary => {
                if purity > 1.0 - 1e-8 && tr > 1e-14 {
                    let (vals, vecs) = decomp::eigh(&choi);
                    let w = CMat::from_fn(d, d, |r, c| vecs[(r * d + c, 0)])
                        .scale(vals[0].sqrt());
                    // the single operator must itself be proportional to a unitary
                    let gram = w.adjoint().mul(&w);
                    let mean = gram.trace().re / d as f64;
                    let dev = gram.sub(&CMat::identity(d).scale(mean)).max_abs();
                    if dev <= 1e-8 * mean.max(1e-30) {
                        let u = w.adjoint().scale(1.0 / mean.sqrt());
                        for op in &branch.ops {
                            corrected_kraus.push(u.mul(op));
                        }
                        correcting.push(Some(u));
                        continue;
                    }
                }
                all_correctable = false;
                correcting.push(None);
            }
        }
    }

    let corrected = match corrections {
        CorrectionSpec::Channels(_) => Some(KrausChannel::new(corrected_kraus)?),
        CorrectionSpec::SearchUnitary => {
            if all_correctable {
                Some(KrausChannel::new(corrected_kraus)?)
            } else {
                None
            }
        }
    };
    Ok(DecodeReport { decomposition, branch_purity, corrections: correcting, corrected })
}

/// Z-channel capacity log₂(1 + (1−p) p^{p/(1−p)}), the analytic benchmark for
/// the binary asymmetric channel with flip probability p on the `1` input.
pub fn z_channel_capacity(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(alloc::format!("flip probability {p} outside [0, 1]")));
    }
    if p >= 1.0 {
        return Ok(0.0);
    }
    Ok((1.0 + (1.0 - p) * p.powf(p / (1.0 - p))).log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{KrausChannel, complete_dephasing, erasure_to, random_channel};
    use crate::linops::pauli_z;
    use crate::superpose::{PathConfig, effective_channel, superpose_independent};
    use crate::switchsim::{self_switch_decomposition, switch_channel};
    use crate::vacuum::erasure_extension;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        // h(1/3) recomputed from logarithms directly
        let third: f64 = 1.0 / 3.0;
        let expected = (third * 3.0_f64.log2()) + (2.0 * third) * (1.5_f64).log2();
        assert!((binary_entropy(third).unwrap() - expected).abs() < 1e-15);
        assert!((binary_entropy(third).unwrap() - 0.9182958340544896).abs() < 1e-12);
        assert!(binary_entropy(1.5).is_err());
    }

    #[test]
    fn von_neumann_entropy_values() {
        let pure = CMat::pure(&CMat::uniform_ket(2));
        assert!(von_neumann_entropy(&pure).unwrap().abs() < 1e-10);
        assert!((von_neumann_entropy(&CMat::maximally_mixed(2)).unwrap() - 1.0).abs() < 1e-12);
        let diag = CMat::from_real(2, 2, &[2.0 / 3.0, 0.0, 0.0, 1.0 / 3.0]);
        let expected = binary_entropy(1.0 / 3.0).unwrap();
        assert!((von_neumann_entropy(&diag).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn z_channel_capacity_value() {
        // log₂(5/4) at p = 1/2
        assert!((z_channel_capacity(0.5).unwrap() - (1.25f64).log2()).abs() < 1e-15);
    }

    #[test]
    fn blahut_arimoto_z_channel() {
        let p = StochasticMatrix::new(vec![vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
        let report = blahut_arimoto(&p, 1e-9, 20_000).unwrap();
        assert!((report.value - (1.25f64).log2()).abs() < 1e-6);
        assert_eq!(report.method, CapacityMethod::BlahutArimoto);
        assert!(report.residual < 1e-9);
        if let Achiever::Distribution(r) = &report.achiever {
            assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        } else {
            panic!("expected a distribution achiever");
        }
    }

    #[test]
    fn blahut_arimoto_noiseless_and_bsc() {
        let noiseless = StochasticMatrix::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let r = blahut_arimoto(&noiseless, 1e-9, 1000).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8);
        // binary symmetric channel against the analytic formula
        let p = 0.11;
        let bsc = StochasticMatrix::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]]).unwrap();
        let r = blahut_arimoto(&bsc, 1e-9, 20_000).unwrap();
        let expected = 1.0 - binary_entropy(p).unwrap();
        assert!((r.value - expected).abs() < 1e-6);
    }

    #[test]
    fn blahut_arimoto_monotone_bracket() {
        let p = StochasticMatrix::new(vec![
            vec![0.7, 0.2, 0.1],
            vec![0.1, 0.8, 0.1],
            vec![0.25, 0.25, 0.5],
        ])
        .unwrap();
        let r = blahut_arimoto(&p, 1e-8, 20_000).unwrap();
        assert!(r.value >= 0.0);
        assert!(r.value <= (3f64).log2() + 1e-9);
    }

    #[test]
    fn stochastic_matrix_rejects_bad_rows() {
        assert!(StochasticMatrix::new(vec![vec![0.5, 0.4]]).is_err());
        assert!(StochasticMatrix::new(vec![vec![1.2, -0.2]]).is_err());
    }

    #[test]
    fn induced_channel_erasure_pair_is_z_channel() {
        let psi0 = CMat::ket(2, 0);
        let alpha = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let ext = erasure_extension(&psi0, &alpha).unwrap();
        let sup = superpose_independent(&[ext.clone(), ext]).unwrap();
        let eff = effective_channel(&sup, &PathConfig::maximally_coherent(2)).unwrap();
        let alpha_ket = CMat::from_complex(2, 1, &alpha);
        let mut perp = CMat::from_complex(2, 1, &[C64::new(0.0, 0.8), C64::new(0.6, 0.0)]);
        // make sure it is orthogonal to α
        let overlap = alpha_ket.adjoint().mul(&perp)[(0, 0)];
        assert!(overlap.norm() < 1e-12);
        perp = perp.scale(1.0 / perp.frobenius_norm());
        let inputs = [CMat::pure(&alpha_ket), CMat::pure(&perp)];
        let e0 = CMat::pure(&CMat::uniform_ket(2));
        let povm = [
            crate::linops::kron(&CMat::identity(2), &e0),
            crate::linops::kron(&CMat::identity(2), &CMat::identity(2).sub(&e0)),
        ];
        let p = induced_classical_channel(&eff, &inputs, &povm).unwrap();
        assert!((p.prob(0, 0) - 1.0).abs() < 1e-12);
        assert!(p.prob(0, 1).abs() < 1e-12);
        assert!((p.prob(1, 0) - 0.5).abs() < 1e-12);
        assert!((p.prob(1, 1) - 0.5).abs() < 1e-12);
        let report = blahut_arimoto(&p, 1e-9, 20_000).unwrap();
        assert!((report.value - (1.25f64).log2()).abs() < 1e-6);
    }

    #[test]
    fn induced_channel_identity_case() {
        let sup = superpose_independent(&[
            crate::vacuum::unitary_extension(&CMat::identity(2)).unwrap(),
            crate::vacuum::unitary_extension(&CMat::identity(2)).unwrap(),
        ])
        .unwrap();
        let cfg = PathConfig::new(2, CMat::pure(&CMat::ket(2, 0))).unwrap();
        let eff = effective_channel(&sup, &cfg).unwrap();
        let inputs = [CMat::pure(&CMat::ket(2, 0)), CMat::pure(&CMat::ket(2, 1))];
        let povm = [
            crate::linops::kron(&CMat::pure(&CMat::ket(2, 0)), &CMat::identity(2)),
            crate::linops::kron(&CMat::pure(&CMat::ket(2, 1)), &CMat::identity(2)),
        ];
        let p = induced_classical_channel(&eff, &inputs, &povm).unwrap();
        assert!((p.prob(0, 0) - 1.0).abs() < 1e-12);
        assert!((p.prob(1, 1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn induced_channel_rows_normalised_for_random_data() {
        let mut rng = ChaCha12Rng::seed_from_u64(500);
        for seed in 0..5 {
            let ea = crate::testutil::random_extension(2, 2, 600 + seed);
            let eb = crate::testutil::random_extension(2, 2, 700 + seed);
            let sup = superpose_independent(&[ea, eb]).unwrap();
            let eff = effective_channel(&sup, &PathConfig::maximally_coherent(2)).unwrap();
            let inputs = [decomp::random_density(2, &mut rng), decomp::random_density(2, &mut rng)];
            // random two-outcome POVM {E, I − E}
            let g = decomp::random_density(4, &mut rng).scale(0.7);
            let povm = [g.clone(), CMat::identity(4).sub(&g)];
            let p = induced_classical_channel(&eff, &inputs, &povm).unwrap();
            for row in p.rows() {
                assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn holevo_examples() {
        let same = [(0.5, CMat::pure(&CMat::ket(2, 0))), (0.5, CMat::pure(&CMat::ket(2, 0)))];
        assert!(holevo_quantity(&same).unwrap().abs() < 1e-12);
        let orth = [(0.5, CMat::pure(&CMat::ket(2, 0))), (0.5, CMat::pure(&CMat::ket(2, 1)))];
        assert!((holevo_quantity(&orth).unwrap() - 1.0).abs() < 1e-12);
        // frozen from direct eigenvalue computation: mix of |+⟩⟨+| and I/2 has
        // eigenvalues (3/4, 1/4), χ = h(1/4) − 1/2
        let mix = [(0.5, CMat::pure(&CMat::uniform_ket(2))), (0.5, CMat::maximally_mixed(2))];
        let expected = 0.3112781244591328;
        assert!((holevo_quantity(&mix).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn holevo_bounds_induced_capacity() {
        // χ at the achieving prior upper-bounds the Blahut–Arimoto capacity
        let mut rng = ChaCha12Rng::seed_from_u64(510);
        for seed in 0..4 {
            let ch = random_channel(2, 2, 2, 800 + seed);
            let states = [decomp::random_density(2, &mut rng), decomp::random_density(2, &mut rng)];
            let outs: Vec<CMat> = states.iter().map(|s| ch.apply(s)).collect();
            let e = decomp::random_density(2, &mut rng).scale(0.6);
            let povm = [e.clone(), CMat::identity(2).sub(&e)];
            let rows: Vec<Vec<f64>> = outs
                .iter()
                .map(|o| povm.iter().map(|m| m.mul(o).trace().re.max(0.0)).collect())
                .collect();
            let p = StochasticMatrix::new(rows).unwrap();
            let report = blahut_arimoto(&p, 1e-7, 50_000).unwrap();
            let prior = match &report.achiever {
                Achiever::Distribution(r) => r.clone(),
                _ => unreachable!(),
            };
            let ensemble: Vec<(f64, CMat)> =
                prior.iter().zip(&outs).map(|(&p, o)| (p, o.clone())).collect();
            let chi = holevo_quantity(&ensemble).unwrap();
            assert!(chi + 1e-6 >= report.value, "seed {seed}: χ = {chi}, C = {}", report.value);
        }
    }

    #[test]
    fn coherent_info_identity_channel() {
        let report = coherent_information_max(&KrausChannel::identity(2), 8, 1e-5, 42).unwrap();
        assert!((report.value - 1.0).abs() < 1e-4, "got {}", report.value);
    }

    #[test]
    fn coherent_info_dephasing_flavoured() {
        // ρ ↦ (2/3)ρ + (1/3)ZρZ is degradable with quantum capacity 1 − h(1/3)
        let ch = KrausChannel::new(vec![
            CMat::identity(2).scale((2.0f64 / 3.0).sqrt()),
            pauli_z().scale((1.0f64 / 3.0).sqrt()),
        ])
        .unwrap();
        let report = coherent_information_max(&ch, 16, 1e-5, 7).unwrap();
        let expected = 1.0 - binary_entropy(1.0 / 3.0).unwrap();
        assert!((report.value - expected).abs() < 1e-3, "got {}", report.value);
    }

    #[test]
    fn coherent_info_erasure_is_nonpositive() {
        let ch = erasure_to(&CMat::ket(2, 0));
        let report = coherent_information_max(&ch, 8, 1e-5, 3).unwrap();
        assert!(report.value <= 1e-9, "got {}", report.value);
        // sign check on random states: the environment keeps everything
        let mut rng = ChaCha12Rng::seed_from_u64(520);
        for _ in 0..20 {
            let rho = decomp::random_density(2, &mut rng);
            assert!(coherent_information(&ch, &rho).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn decode_switch_of_xy_mix() {
        let a = crate::channels::pauli_xy_mix();
        let sw = switch_channel(&a, &a).unwrap();
        let eff = effective_channel(&sw, &PathConfig::maximally_coherent(2)).unwrap();
        let plus = CMat::pure(&CMat::uniform_ket(2));
        let projectors = [plus.clone(), CMat::identity(2).sub(&plus)];
        let report = measure_path_decode(&eff, &projectors, CorrectionSpec::SearchUnitary).unwrap();
        assert!(report.branch_purity.iter().all(|&p| p > 1.0 - 1e-10));
        let corrected = report.corrected.expect("both branches unitary");
        assert!(corrected.distance(&KrausChannel::identity(2)).unwrap() < 1e-10);
    }

    #[test]
    fn decode_dephasing_two_path() {
        let eff = crate::superpose::closed_form_identical(&crate::vacuum::dephasing_extension(), 2)
            .unwrap();
        let plus = CMat::pure(&CMat::uniform_ket(2));
        let projectors = [plus.clone(), CMat::identity(2).sub(&plus)];
        let report = measure_path_decode(&eff, &projectors, CorrectionSpec::SearchUnitary).unwrap();
        let branches = report.decomposition.branches();
        assert!((branches[0].probability - 0.75).abs() < 1e-12);
        assert!((branches[1].probability - 0.25).abs() < 1e-12);
        // destructive branch is unitary (Z up to phase), constructive is not
        assert!(report.branch_purity[1] > 1.0 - 1e-10);
        assert!(report.branch_purity[0] < 1.0 - 1e-3);
        assert!(report.corrected.is_none());
        let u = report.corrections[1].as_ref().expect("destructive branch correctable");
        // the correction is Z up to a global phase
        let z = pauli_z();
        let phase = u[(0, 0)] / z[(0, 0)];
        assert!((phase.norm() - 1.0).abs() < 1e-9);
        assert!(u.max_abs_diff(&z.scale_c(phase)) < 1e-8);
    }

    #[test]
    fn decode_identity_effective_channel() {
        let sup = switch_channel(&KrausChannel::identity(2), &KrausChannel::identity(2)).unwrap();
        let cfg = PathConfig::new(2, CMat::pure(&CMat::ket(2, 0))).unwrap();
        let eff = effective_channel(&sup, &cfg).unwrap();
        let projectors = [CMat::pure(&CMat::ket(2, 0)), CMat::pure(&CMat::ket(2, 1))];
        let report = measure_path_decode(&eff, &projectors, CorrectionSpec::SearchUnitary).unwrap();
        let branches = report.decomposition.branches();
        assert!((branches[0].probability - 1.0).abs() < 1e-12);
        assert!(branches[1].probability.abs() < 1e-12);
        let corrected = report.corrected.expect("trivially correctable");
        assert!(corrected.distance(&KrausChannel::identity(2)).unwrap() < 1e-10);
    }

    #[test]
    fn self_switch_branches_probability_sums() {
        let dec = self_switch_decomposition(&complete_dephasing(2));
        assert!((dec.probability_sum() - 1.0).abs() < 1e-10);
    }
}
