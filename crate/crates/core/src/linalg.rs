//! Small dense complex linear algebra: a row-major matrix type for channel
//! construction and the dominant singular triple, computed with nalgebra's SVD.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds `scale * a * b^H`.
    pub fn outer(a: &[Complex64], b: &[Complex64], scale: Complex64) -> Self {
        Self::from_fn(a.len(), b.len(), |r, c| scale * a[r] * b[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Adds `scale * a * b^H` in place.
    pub fn add_outer(&mut self, a: &[Complex64], b: &[Complex64], scale: Complex64) {
        debug_assert_eq!(a.len(), self.rows);
        debug_assert_eq!(b.len(), self.cols);
        for (r, &ar) in a.iter().enumerate() {
            let sa = scale * ar;
            let row = &mut self.data[r * self.cols..(r + 1) * self.cols];
            for (x, &bc) in row.iter_mut().zip(b) {
                *x += sa * bc.conj();
            }
        }
    }

    pub fn scale(&mut self, s: f64) {
        for x in &mut self.data {
            *x *= s;
        }
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self^H * v`.
    pub fn adjoint_mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.rows, "dimension mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); self.cols];
        for (r, &vr) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(r)) {
                *o += a.conj() * vr;
            }
        }
        out
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular triple `(sigma, u, v)` with `H v = sigma u`.
///
/// The phase of the pair is fixed so that the largest-magnitude entry of `u`
/// is real and positive (lowest index on ties).
pub fn dominant_singular_triple(h: &CMatrix) -> Result<(f64, Vec<Complex64>, Vec<Complex64>)> {
    if h.rows == 0 || h.cols == 0 || h.is_zero() {
        return Err(Error::DegenerateChannel);
    }
    let svd = DMatrix::from_row_slice(h.rows, h.cols, &h.data).svd(true, true);
    let (Some(left), Some(right_adj)) = (svd.u, svd.v_t) else {
        return Err(Error::DegenerateChannel);
    };
    let k = svd.singular_values.imax();
    let sigma = svd.singular_values[k];
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::DegenerateChannel);
    }
    let mut u: Vec<Complex64> = left.column(k).iter().copied().collect();
    let mut v: Vec<Complex64> = right_adj.row(k).iter().map(|z| z.conj()).collect();

    // Renormalize against rounding, then fix the phase.
    let nu = norm(&u);
    let nv = norm(&v);
    u.iter_mut().for_each(|z| *z /= nu);
    v.iter_mut().for_each(|z| *z /= nv);

    let mut pivot = 0;
    let mut best = -1.0;
    for (i, z) in u.iter().enumerate() {
        let m = z.norm_sqr();
        if m > best {
            best = m;
            pivot = i;
        }
    }
    let rot = u[pivot].conj() / u[pivot].norm();
    u.iter_mut().for_each(|z| *z *= rot);
    v.iter_mut().for_each(|z| *z *= rot);
    u[pivot] = Complex64::new(u[pivot].re, 0.0);

    Ok((sigma, u, v))
}
