//! Dense complex matrices, sector decompositions and tensor algebra.
//!
//! [`CMat`] is the universal value type of the crate: states, Kraus operators,
//! unitaries and Choi matrices are all plain row-major `Complex<f64>` matrices.
//! Tensor indices are big-endian: in `kron(a, b)` the row index is
//! `i_a * b.rows + i_b`, so the first factor is the most significant.
//!
//! [`SectorSpace`] describes an orthogonal decomposition of a Hilbert space
//! into labelled sectors (e.g. message ⊕ vacuum) and owns the corresponding
//! projectors and embedding isometries.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::Float;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

pub const ZERO: C64 = Complex { re: 0.0, im: 0.0 };
pub const ONE: C64 = Complex { re: 1.0, im: 0.0 };
pub const I_UNIT: C64 = Complex { re: 0.0, im: 1.0 };

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// Builds a matrix from real entries, row by row.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        CMat {
            rows,
            cols,
            data: entries.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    pub fn from_complex(rows: usize, cols: usize, entries: &[C64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        CMat { rows, cols, data: entries.to_vec() }
    }

    /// 1×1 matrix holding a single amplitude.
    pub fn scalar(z: C64) -> Self {
        CMat { rows: 1, cols: 1, data: vec![z] }
    }

    /// Computational basis ket |k⟩ as a dim×1 column.
    pub fn ket(dim: usize, k: usize) -> Self {
        let mut m = CMat::zeros(dim, 1);
        m[(k, 0)] = ONE;
        m
    }

    /// Uniform superposition Σₖ|k⟩/√n as a column vector.
    pub fn uniform_ket(dim: usize) -> Self {
        let a = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        CMat { rows: dim, cols: 1, data: vec![a; dim] }
    }

    /// Outer product |v⟩⟨w| of two column vectors.
    pub fn outer(v: &CMat, w: &CMat) -> Self {
        assert_eq!(v.cols, 1);
        assert_eq!(w.cols, 1);
        CMat::from_fn(v.rows, w.rows, |r, c| v[(r, 0)] * w[(c, 0)].conj())
    }

    /// Density matrix |ψ⟩⟨ψ| of a (normalised) column vector.
    pub fn pure(psi: &CMat) -> Self {
        CMat::outer(psi, psi)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        CMat::identity(dim).scale(1.0 / dim as f64)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs.data[k * rhs.cols + c];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        CMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        CMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: f64) -> CMat {
        self.scale_c(C64::new(s, 0.0))
    }

    pub fn scale_c(&self, s: C64) -> CMat {
        let data = self.data.iter().map(|a| a * s).collect();
        CMat { rows: self.rows, cols: self.cols, data }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).fold(ZERO, |a, b| a + b)
    }

    /// K ρ K† for a (possibly rectangular) operator K.
    pub fn sandwich(&self, rho: &CMat) -> CMat {
        self.mul(rho).mul(&self.adjoint())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, rhs: &CMat) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square()
            && self
                .adjoint()
                .mul(self)
                .max_abs_diff(&CMat::identity(self.rows))
                <= tol
    }

    /// Positive semidefiniteness via the spectrum (Hermitian part is checked first).
    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        let (vals, _) = crate::decomp::eigh(self);
        vals.iter().all(|&v| v >= -tol)
    }

    pub fn is_density(&self, tol: f64) -> bool {
        self.is_psd(tol) && (self.trace() - ONE).norm() <= tol
    }

    /// Row-major flattening; `vec(K)` in the Choi convention of this crate.
    pub fn flatten(&self) -> Vec<C64> {
        self.data.clone()
    }

    pub fn from_flat(rows: usize, cols: usize, flat: &[C64]) -> Self {
        CMat::from_complex(rows, cols, flat)
    }

    /// Copies `block` into `self` starting at row/column offsets.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &CMat) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(r0 + r, c0 + c)] = block[(r, c)];
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> CMat {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        CMat::from_fn(rows, cols, |r, c| self[(r0 + r, c0 + c)])
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl core::fmt::Debug for CMat {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Block-diagonal direct sum: `a` in the top-left block, `b` in the bottom-right.
pub fn direct_sum(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros(a.rows + b.rows, a.cols + b.cols);
    out.set_block(0, 0, a);
    out.set_block(a.rows, a.cols, b);
    out
}

/// Kronecker product with the big-endian index convention `i_a * rows_b + i_b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros(a.rows * b.rows, a.cols * b.cols);
    for ra in 0..a.rows {
        for ca in 0..a.cols {
            let f = a[(ra, ca)];
            if f == ZERO {
                continue;
            }
            for rb in 0..b.rows {
                for cb in 0..b.cols {
                    out[(ra * b.rows + rb, ca * b.cols + cb)] = f * b[(rb, cb)];
                }
            }
        }
    }
    out
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Partial trace of a square matrix over the tensor factors *not* listed in `keep`.
///
/// `dims` are the factor dimensions in big-endian order; `keep` lists the factor
/// indices to retain, in increasing order.
pub fn partial_trace(m: &CMat, dims: &[usize], keep: &[usize]) -> Result<CMat> {
    let total: usize = dims.iter().product();
    if m.rows != total || m.cols != total {
        return Err(Error::DimMismatch { context: "partial_trace", expected: total, found: m.rows });
    }
    for w in keep.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Domain("keep indices must be strictly increasing".to_string()));
        }
    }
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::Domain("keep index out of range".to_string()));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let st = strides(dims);
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let out_dim: usize = kept_dims.iter().product();
    let traced_dim: usize = traced.iter().map(|&t| dims[t]).product();

    // base offset of a multi-index over an index subset
    let offset = |subset: &[usize], combo: usize| -> usize {
        let mut rem = combo;
        let mut off = 0;
        for (pos, &factor) in subset.iter().enumerate().rev() {
            let d = dims[factor];
            let _ = pos;
            off += (rem % d) * st[factor];
            rem /= d;
        }
        off
    };

    let mut out = CMat::zeros(out_dim, out_dim);
    for ro in 0..out_dim {
        let r_base = offset(keep, ro);
        for co in 0..out_dim {
            let c_base = offset(keep, co);
            let mut acc = ZERO;
            for t in 0..traced_dim {
                let t_off = offset(&traced, t);
                acc += m[(r_base + t_off, c_base + t_off)];
            }
            out[(ro, co)] = acc;
        }
    }
    Ok(out)
}

/// Embeds an operator acting on the tensor factors `targets` (in the order
/// given) into the full product space described by `dims`, with the identity
/// on all remaining factors. `targets` need not be contiguous or sorted.
pub fn embed_op(op: &CMat, dims: &[usize], targets: &[usize]) -> Result<CMat> {
    let t_dim: usize = targets.iter().map(|&t| dims[t]).product();
    if op.rows != t_dim || op.cols != t_dim {
        return Err(Error::DimMismatch { context: "embed_op", expected: t_dim, found: op.rows });
    }
    let total: usize = dims.iter().product();
    let st = strides(dims);
    let spect: Vec<usize> = (0..dims.len()).filter(|i| !targets.contains(i)).collect();
    let spect_dim: usize = spect.iter().map(|&s| dims[s]).product();

    let offset = |subset: &[usize], combo: usize| -> usize {
        let mut rem = combo;
        let mut off = 0;
        for &factor in subset.iter().rev() {
            let d = dims[factor];
            off += (rem % d) * st[factor];
            rem /= d;
        }
        off
    };

    let mut out = CMat::zeros(total, total);
    for s in 0..spect_dim {
        let s_off = offset(&spect, s);
        for tr in 0..t_dim {
            let r_off = offset(targets, tr);
            for tc in 0..t_dim {
                let v = op[(tr, tc)];
                if v == ZERO {
                    continue;
                }
                let c_off = offset(targets, tc);
                out[(s_off + r_off, s_off + c_off)] = v;
            }
        }
    }
    Ok(out)
}

/// Pauli X.
pub fn pauli_x() -> CMat {
    CMat::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

/// Pauli Y.
pub fn pauli_y() -> CMat {
    CMat::from_complex(2, 2, &[ZERO, -I_UNIT, I_UNIT, ZERO])
}

/// Pauli Z.
pub fn pauli_z() -> CMat {
    CMat::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

pub fn hadamard() -> CMat {
    let s = 1.0 / 2.0_f64.sqrt();
    CMat::from_real(2, 2, &[s, s, s, -s])
}

/// Ordered list of labelled orthogonal sectors partitioning a Hilbert space.
#[derive(Clone, Debug)]
pub struct SectorSpace {
    sectors: Vec<(String, usize)>,
    offsets: Vec<usize>,
    total_dim: usize,
}

impl SectorSpace {
    pub fn new(sectors: &[(&str, usize)]) -> Result<Self> {
        if sectors.is_empty() || sectors.iter().any(|&(_, d)| d == 0) {
            return Err(Error::Domain("sectors must be non-empty with positive dims".to_string()));
        }
        let mut offsets = Vec::with_capacity(sectors.len());
        let mut total = 0usize;
        for &(_, d) in sectors {
            offsets.push(total);
            total += d;
        }
        Ok(SectorSpace {
            sectors: sectors.iter().map(|&(l, d)| (l.to_string(), d)).collect(),
            offsets,
            total_dim: total,
        })
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.sectors.iter().map(|(l, _)| l.as_str())
    }

    fn position(&self, label: &str) -> Result<usize> {
        self.sectors
            .iter()
            .position(|(l, _)| l == label)
            .ok_or_else(|| Error::UnknownSector(label.to_string()))
    }

    pub fn dim(&self, label: &str) -> Result<usize> {
        Ok(self.sectors[self.position(label)?].1)
    }

    pub fn offset(&self, label: &str) -> Result<usize> {
        Ok(self.offsets[self.position(label)?])
    }

    /// Diagonal 0/1 projector onto the sector, in the full space.
    pub fn projector(&self, label: &str) -> Result<CMat> {
        let i = self.position(label)?;
        let (off, d) = (self.offsets[i], self.sectors[i].1);
        let mut p = CMat::zeros(self.total_dim, self.total_dim);
        for k in 0..d {
            p[(off + k, off + k)] = ONE;
        }
        Ok(p)
    }

    /// Isometry total_dim × sector_dim embedding the sector into the full space.
    pub fn embedding(&self, label: &str) -> Result<CMat> {
        let i = self.position(label)?;
        let (off, d) = (self.offsets[i], self.sectors[i].1);
        let mut e = CMat::zeros(self.total_dim, d);
        for k in 0..d {
            e[(off + k, k)] = ONE;
        }
        Ok(e)
    }
}
