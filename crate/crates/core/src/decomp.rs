//! Matrix decompositions used by the channel calculus.
//!
//! Everything here targets the small dense Hermitian/isometric matrices this
//! crate produces (dimension ≲ 150): a cyclic complex Jacobi eigensolver,
//! Gram–Schmidt orthonormalisation for Haar sampling and unitary completion,
//! and a pivoted rank estimator for linear-independence decisions.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linops::{C64, CMat, ONE, ZERO};

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns the (real) eigenvalues in descending order and the matrix whose
/// columns are the matching orthonormal eigenvectors.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    assert!(m.is_square(), "eigh requires a square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut v = CMat::identity(n);
    if n > 1 {
        let scale = a.max_abs().max(1.0);
        let tol = 1e-15 * scale;
        for _sweep in 0..60 {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in (p + 1)..n {
                    off = off.max(a[(p, q)].norm());
                }
            }
            if off <= tol {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    let b = apq.norm();
                    if b <= tol * 1e-2 {
                        continue;
                    }
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    let phase = apq / b;
                    let tau = (aqq - app) / (2.0 * b);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    // columns: col_p' = c*col_p - s*conj(phase)*col_q
                    //          col_q' = s*phase*col_p + c*col_q
                    let sp = C64::new(s, 0.0) * phase;
                    let spc = sp.conj();
                    for r in 0..n {
                        let arp = a[(r, p)];
                        let arq = a[(r, q)];
                        a[(r, p)] = arp * c - arq * spc;
                        a[(r, q)] = arp * sp + arq * c;
                        let vrp = v[(r, p)];
                        let vrq = v[(r, q)];
                        v[(r, p)] = vrp * c - vrq * spc;
                        v[(r, q)] = vrp * sp + vrq * c;
                    }
                    // rows (adjoint action)
                    for r in 0..n {
                        let apr = a[(p, r)];
                        let aqr = a[(q, r)];
                        a[(p, r)] = apr * c - aqr * sp;
                        a[(q, r)] = apr * spc + aqr * c;
                    }
                }
            }
        }
    }
    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a[(i, i)].re, i)).collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    let vals: Vec<f64> = pairs.iter().map(|&(l, _)| l).collect();
    let vecs = CMat::from_fn(n, n, |r, c| v[(r, pairs[c].1)]);
    (vals, vecs)
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).fold(ZERO, |u, w| u + w)
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormalises `cols` in place against `basis` (twice, for stability);
/// returns the residual norm before normalisation.
fn orthogonalize(col: &mut [C64], basis: &[Vec<C64>]) -> f64 {
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, col);
            for (x, y) in col.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
    norm(col)
}

/// Haar-random isometry with `rows` ≥ `cols`, sampled by QR of a complex
/// Gaussian matrix. Gram–Schmidt keeps the R diagonal real positive, which is
/// exactly the phase convention that makes the Q factor Haar distributed.
pub fn haar_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    assert!(rows >= cols, "an isometry needs rows >= cols");
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(cols);
    while basis.len() < cols {
        let mut col: Vec<C64> = (0..rows)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                C64::new(re, im)
            })
            .collect();
        let res = orthogonalize(&mut col, &basis);
        if res < 1e-9 {
            continue; // measure-zero degenerate draw; resample
        }
        for x in col.iter_mut() {
            *x /= res;
        }
        basis.push(col);
    }
    CMat::from_fn(rows, cols, |r, c| basis[c][r])
}

/// Haar-random unitary.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    haar_isometry(dim, dim, rng)
}

/// Random density matrix ρ = LL†/Tr[LL†] with Gaussian L.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    let l = CMat::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    });
    let g = l.mul(&l.adjoint());
    let t = g.trace().re;
    g.scale(1.0 / t)
}

/// Random pure state as a dim×1 column.
pub fn random_ket<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    haar_isometry(dim, 1, rng)
}

/// Numerical rank of the span of `vectors`, with a cutoff relative to the
/// largest pivot norm. Returns `(rank, pivot_indices)` where the pivots index
/// a linearly independent subset of the input, chosen greedily by residual
/// norm (pivoted Gram–Schmidt).
pub fn rank_with_pivots(vectors: &[Vec<C64>], rel_tol: f64) -> (usize, Vec<usize>) {
    if vectors.is_empty() {
        return (0, Vec::new());
    }
    let mut residual: Vec<Vec<C64>> = vectors.to_vec();
    let mut alive: Vec<usize> = (0..vectors.len()).collect();
    let mut basis: Vec<Vec<C64>> = Vec::new();
    let mut pivots = Vec::new();
    let scale = vectors.iter().map(|v| norm(v)).fold(0.0, f64::max);
    if scale == 0.0 {
        return (0, Vec::new());
    }
    loop {
        let mut best = 0usize;
        let mut best_norm = -1.0f64;
        for (k, v) in residual.iter().enumerate() {
            let n = norm(v);
            if n > best_norm {
                best_norm = n;
                best = k;
            }
        }
        if best_norm <= rel_tol * scale {
            break;
        }
        let mut chosen = residual.swap_remove(best);
        let idx = alive.swap_remove(best);
        let res = orthogonalize(&mut chosen, &basis);
        if res <= rel_tol * scale {
            continue;
        }
        for x in chosen.iter_mut() {
            *x /= res;
        }
        for v in residual.iter_mut() {
            let c = dot(&chosen, v);
            for (x, y) in v.iter_mut().zip(&chosen) {
                *x -= c * y;
            }
        }
        basis.push(chosen);
        pivots.push(idx);
        if residual.is_empty() {
            break;
        }
    }
    pivots.sort_unstable();
    (pivots.len(), pivots)
}

/// Completes a set of prescribed orthonormal columns to a full unitary.
///
/// `prescribed` maps column indices to column vectors (each of length `dim`);
/// the remaining columns are filled by Gram–Schmidt over the canonical basis.
pub fn unitary_with_columns(dim: usize, prescribed: &[(usize, Vec<C64>)]) -> CMat {
    let mut basis: Vec<Vec<C64>> = prescribed.iter().map(|(_, v)| v.clone()).collect();
    let mut fill: Vec<Vec<C64>> = Vec::new();
    let needed = dim - prescribed.len();
    for k in 0..dim {
        if fill.len() == needed {
            break;
        }
        let mut cand = vec![ZERO; dim];
        cand[k] = ONE;
        let res = orthogonalize(&mut cand, &basis);
        if res > 1e-7 {
            for x in cand.iter_mut() {
                *x /= res;
            }
            basis.push(cand.clone());
            fill.push(cand);
        }
    }
    assert_eq!(fill.len(), needed, "unitary completion failed");
    let mut out = CMat::zeros(dim, dim);
    let mut fill_iter = fill.into_iter();
    let taken: Vec<usize> = prescribed.iter().map(|&(c, _)| c).collect();
    for (c, v) in prescribed {
        for r in 0..dim {
            out[(r, *c)] = v[r];
        }
    }
    for c in 0..dim {
        if taken.contains(&c) {
            continue;
        }
        let v = fill_iter.next().unwrap();
        for r in 0..dim {
            out[(r, c)] = v[r];
        }
    }
    out
}

/// Unitary on `dim` whose first column is the given unit vector.
pub fn unitary_with_first_column(v: &CMat) -> CMat {
    assert_eq!(v.cols(), 1);
    let col: Vec<C64> = (0..v.rows()).map(|r| v[(r, 0)]).collect();
    unitary_with_columns(v.rows(), &[(0, col)])
}

/// Extends an isometry (orthonormal columns) to a unitary whose leading
/// columns coincide with it.
pub fn complete_isometry(iso: &CMat) -> CMat {
    let prescribed: Vec<(usize, Vec<C64>)> = (0..iso.cols())
        .map(|c| (c, (0..iso.rows()).map(|r| iso[(r, c)]).collect()))
        .collect();
    unitary_with_columns(iso.rows(), &prescribed)
}

/// Spectral decomposition of a density matrix clipped to the numerically
/// positive part: returns `(weights, kets)` with weights summing to ≈ 1.
pub fn density_spectrum(rho: &CMat, cutoff: f64) -> Vec<(f64, CMat)> {
    let (vals, vecs) = eigh(rho);
    let mut out = Vec::new();
    for (k, &w) in vals.iter().enumerate() {
        if w > cutoff {
            let ket = CMat::from_fn(rho.rows(), 1, |r, _| vecs[(r, k)]);
            out.push((w, ket));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    #[test]
    fn eigh_diagonalizes_random_hermitian() {
        let mut r = rng(7);
        for n in [2usize, 3, 5, 9, 17] {
            let g = CMat::from_fn(n, n, |_, _| {
                let re: f64 = StandardNormal.sample(&mut r);
                let im: f64 = StandardNormal.sample(&mut r);
                C64::new(re, im)
            });
            let h = g.add(&g.adjoint()).scale(0.5);
            let (vals, vecs) = eigh(&h);
            assert!(vecs.is_unitary(1e-10));
            let mut d = CMat::zeros(n, n);
            for i in 0..n {
                d[(i, i)] = C64::new(vals[i], 0.0);
            }
            let rebuilt = vecs.mul(&d).mul(&vecs.adjoint());
            assert!(rebuilt.max_abs_diff(&h) < 1e-10, "n = {n}");
            // descending order
            for w in vals.windows(2) {
                assert!(w[0] >= w[1] - 1e-12);
            }
        }
    }

    #[test]
    fn eigh_known_spectrum() {
        let h = crate::linops::pauli_x();
        let (vals, _) = eigh(&h);
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn haar_isometry_is_isometric() {
        let mut r = rng(11);
        for (rows, cols) in [(2, 2), (6, 3), (8, 8), (12, 5)] {
            let v = haar_isometry(rows, cols, &mut r);
            let gram = v.adjoint().mul(&v);
            assert!(gram.max_abs_diff(&CMat::identity(cols)) < 1e-12);
        }
    }

    #[test]
    fn rank_detects_duplicates() {
        let v1 = vec![ONE, ZERO, ZERO];
        let v2 = vec![ZERO, ONE, ZERO];
        let v3 = vec![ONE, ONE, ZERO]; // dependent
        let (rank, pivots) = rank_with_pivots(&[v1, v2, v3], 1e-10);
        assert_eq!(rank, 2);
        assert_eq!(pivots.len(), 2);
    }

    #[test]
    fn rank_full_for_random_independent_set() {
        let mut r = rng(3);
        let vs: Vec<Vec<C64>> = (0..4)
            .map(|_| {
                (0..6)
                    .map(|_| {
                        let re: f64 = StandardNormal.sample(&mut r);
                        let im: f64 = StandardNormal.sample(&mut r);
                        C64::new(re, im)
                    })
                    .collect()
            })
            .collect();
        let (rank, _) = rank_with_pivots(&vs, 1e-10);
        assert_eq!(rank, 4);
    }

    #[test]
    fn unitary_completion_keeps_prescribed_columns() {
        let mut r = rng(5);
        let iso = haar_isometry(6, 2, &mut r);
        let u = complete_isometry(&iso);
        assert!(u.is_unitary(1e-10));
        assert!(u.block(0, 0, 6, 2).max_abs_diff(&iso) < 1e-12);
    }

    #[test]
    fn density_spectrum_reassembles() {
        let mut r = rng(9);
        let rho = random_density(4, &mut r);
        let spec = density_spectrum(&rho, 1e-12);
        let mut rebuilt = CMat::zeros(4, 4);
        let mut total = 0.0;
        for (w, ket) in &spec {
            rebuilt = rebuilt.add(&CMat::pure(ket).scale(*w));
            total += w;
        }
        assert!((total - 1.0).abs() < 1e-10);
        assert!(rebuilt.max_abs_diff(&rho) < 1e-10);
    }
}
