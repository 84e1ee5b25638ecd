//! Dense complex matrices for registers of up to three qubits.
//!
//! Storage is row-major. Multi-qubit operators follow the Kronecker convention
//! in which the left factor is the slowest-varying index, so a basis index on
//! `A ⊗ B ⊗ X` reads `4·a + 2·b + x` with `|↑⟩ = 0` and `|↓⟩ = 1`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Default absolute tolerance (max-norm) for Hermiticity, unitarity and
/// trace checks.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Square dimensions accepted by the spectral routines.
pub const SPECTRAL_DIMS: [usize; 3] = [2, 4, 8];

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(invalid("matrix dimensions must be positive"));
        }
        if data.len() != rows * cols {
            return Err(invalid(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(invalid("ragged rows"));
        }
        Self::from_vec(n, m, rows.concat())
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// `|u⟩⟨v|`
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        let data = u.iter().flat_map(|&a| v.iter().map(move |&b| a * b.conj())).collect();
        Self { rows: u.len(), cols: v.len(), data }
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

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(invalid(format!("vector of length {} against {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows).map(|r| self.row(r).iter().zip(v).map(|(&a, &b)| a * b).sum()).collect())
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    /// Kronecker product; `self` indexes the slower-varying factor.
    pub fn tensor(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Traces out factor `traced_index` of a square operator on a tensor
    /// product space with factor dimensions `dims` (slowest first).
    pub fn partial_trace(&self, dims: &[usize], traced_index: usize) -> Result<Self> {
        let total: usize = dims.iter().product();
        if !self.is_square() || total != self.rows || dims.contains(&0) {
            return Err(invalid(format!(
                "subsystem dimensions {dims:?} do not match a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if traced_index >= dims.len() {
            return Err(invalid(format!("traced index {traced_index} out of range for {} subsystems", dims.len())));
        }
        let left: usize = dims[..traced_index].iter().product();
        let mid = dims[traced_index];
        let right: usize = dims[traced_index + 1..].iter().product();
        let n = left * right;
        let mut out = Self::zeros(n, n);
        for l1 in 0..left {
            for r1 in 0..right {
                for l2 in 0..left {
                    for r2 in 0..right {
                        let mut acc = ZERO;
                        for k in 0..mid {
                            acc += self[((l1 * mid + k) * right + r1, (l2 * mid + k) * right + r2)];
                        }
                        out[(l1 * right + r1, l2 * right + r2)] = acc;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm distance; infinite if the shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(&self.matmul(other)? - &other.matmul(self)?)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.dagger())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `‖U U† − 1‖_max`
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (self * &self.dagger()).max_abs_diff(&Self::identity(self.rows))
    }

    /// `(M + M†)/2`, used to strip round-off from operators that are
    /// Hermitian by construction.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.dagger()).scale_real(0.5)
    }

    /// Spectral decomposition of a Hermitian matrix using the default tolerance.
    pub fn eig_hermitian(&self) -> Result<HermitianEigen> {
        self.eig_hermitian_tol(DEFAULT_TOL)
    }

    /// Eigenvalues are returned in descending order; eigenvector `k` is
    /// column `k` of the returned unitary.
    pub fn eig_hermitian_tol(&self, tol: f64) -> Result<HermitianEigen> {
        self.check_spectral(tol)?;
        let n = self.rows;
        let scale = self.max_abs();
        if scale == 0.0 {
            return Ok(HermitianEigen { values: vec![0.0; n], vectors: Self::identity(n) });
        }
        // unit max-norm keeps the rotations clear of subnormal underflow
        let eig = SymmetricEigen::new(DMatrix::from_row_slice(n, n, &self.data).map(|z| z * (1.0 / scale)));
        if eig.eigenvalues.iter().any(|v| !v.is_finite())
            || eig.eigenvectors.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(invalid("eigendecomposition did not converge"));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let values = order.iter().map(|&k| eig.eigenvalues[k] * scale).collect();
        let mut vectors = Self::zeros(n, n);
        for (col, &k) in order.iter().enumerate() {
            for r in 0..n {
                vectors[(r, col)] = eig.eigenvectors[(r, k)];
            }
        }
        Ok(HermitianEigen { values, vectors })
    }

    /// `exp(−i·h·t)` for Hermitian `h`.
    pub fn matexp_i_hermitian(&self, t: f64) -> Result<Self> {
        let eig = self.eig_hermitian()?;
        let phases: Vec<Complex64> = eig.values.iter().map(|&l| Complex64::from_polar(1.0, -l * t)).collect();
        Ok(eig.reconstruct_with(&phases))
    }

    fn check_spectral(&self, tol: f64) -> Result<()> {
        if !self.is_square() || !SPECTRAL_DIMS.contains(&self.rows) {
            return Err(invalid(format!(
                "spectral routines need a square matrix of dimension 2, 4 or 8, got {}x{}",
                self.rows, self.cols
            )));
        }
        if self.data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("matrix has non-finite entries"));
        }
        let defect = self.hermiticity_defect();
        if defect > tol {
            return Err(invalid(format!("matrix is not Hermitian (defect {defect:e} > {tol:e})")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Descending.
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `U diag(f) U†`
    pub fn reconstruct_with(&self, spectrum: &[Complex64]) -> ComplexMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for r in 0..n {
            for c in 0..n {
                scaled[(r, c)] *= spectrum[c];
            }
        }
        &scaled * &self.vectors.dagger()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let spectrum: Vec<Complex64> = self.values.iter().map(|&l| Complex64::new(l, 0.0)).collect();
        self.reconstruct_with(&spectrum)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

// Operator forms panic on shape mismatch; use `matmul` for checked products.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Single-qubit operators in the `(↑, ↓)` basis.
pub mod pauli {
    use super::{ComplexMatrix, I, ONE, ZERO};

    fn m2(a: [num_complex::Complex64; 4]) -> ComplexMatrix {
        ComplexMatrix { rows: 2, cols: 2, data: a.to_vec() }
    }

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn sigma_1() -> ComplexMatrix {
        m2([ZERO, ONE, ONE, ZERO])
    }

    pub fn sigma_2() -> ComplexMatrix {
        m2([ZERO, -I, I, ZERO])
    }

    pub fn sigma_3() -> ComplexMatrix {
        m2([ONE, ZERO, ZERO, -ONE])
    }

    /// `σ₊ = |↑⟩⟨↓|`
    pub fn raising() -> ComplexMatrix {
        m2([ZERO, ONE, ZERO, ZERO])
    }

    /// `σ₋ = |↓⟩⟨↑|`
    pub fn lowering() -> ComplexMatrix {
        m2([ZERO, ZERO, ONE, ZERO])
    }

    /// `|↑⟩⟨↑|`
    pub fn proj_up() -> ComplexMatrix {
        m2([ONE, ZERO, ZERO, ZERO])
    }

    /// `|↓⟩⟨↓|`
    pub fn proj_down() -> ComplexMatrix {
        m2([ZERO, ZERO, ZERO, ONE])
    }
}

#[cfg(test)]
mod tests {
    use super::pauli::*;
    use super::*;
    use crate::sampling::{ginibre, random_hermitian, rng_from_seed};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn naive_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(a.rows(), b.cols());
        for i in 0..a.rows() {
            for j in 0..b.cols() {
                let mut acc = ZERO;
                for k in 0..a.cols() {
                    acc += a[(i, k)] * b[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// Scaling-and-squaring Taylor series for `exp(−i h t)`.
    fn taylor_expm(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
        let n = h.rows();
        let mut a = h.scale(c(0.0, -t));
        let mut squarings = 0;
        while a.max_abs() * n as f64 > 0.5 {
            a = a.scale_real(0.5);
            squarings += 1;
        }
        let mut term = ComplexMatrix::identity(n);
        let mut sum = ComplexMatrix::identity(n);
        for k in 1..30 {
            term = (&term * &a).scale_real(1.0 / k as f64);
            sum = &sum + &term;
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn eig_of_tiny_matrix_is_scale_covariant() {
        let m = ComplexMatrix::from_real(2, 2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        let tiny = m.scale_real(1e-300);
        let eig = tiny.eig_hermitian().unwrap();
        assert!((eig.values[0] - 3e-300).abs() < 1e-312);
        assert!((eig.values[1] - 1e-300).abs() < 1e-312);
        let zero = ComplexMatrix::zeros(4, 4).eig_hermitian().unwrap();
        assert_eq!(zero.values, vec![0.0; 4]);
    }

    #[test]
    fn identity_times_sigma_1() {
        assert_eq!(identity().matmul(&sigma_1()).unwrap(), sigma_1());
    }

    #[test]
    fn raising_times_lowering_is_up_projector() {
        assert_eq!(&raising() * &lowering(), ComplexMatrix::diagonal(&[ONE, ZERO]));
    }

    #[test]
    fn matmul_matches_triple_loop() {
        let mut rng = rng_from_seed(11);
        let a = ginibre(4, &mut rng);
        let b = ginibre(4, &mut rng);
        assert!(a.matmul(&b).unwrap().approx_eq(&naive_product(&a, &b), 1e-13));
    }

    #[test]
    fn matmul_rejects_mismatched_shapes() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(2, 2);
        assert!(matches!(a.matmul(&b), Err(crate::Error::InvalidInput(_))));
        assert!(ComplexMatrix::from_vec(2, 2, vec![ONE; 3]).is_err());
    }

    #[test]
    fn dagger_cases() {
        assert_eq!(sigma_2().dagger(), sigma_2());
        assert_eq!(raising().dagger(), lowering());
        let mut rng = rng_from_seed(5);
        let a = ginibre(4, &mut rng);
        let b = ginibre(4, &mut rng);
        let lhs = (&a * &b).dagger();
        let rhs = &b.dagger() * &a.dagger();
        assert!(lhs.approx_eq(&rhs, 1e-13));
    }

    #[test]
    fn tensor_cases() {
        assert_eq!(identity().tensor(&identity()), ComplexMatrix::identity(4));
        let p = proj_up().tensor(&proj_down());
        for i in 0..4 {
            for j in 0..4 {
                let expected = if (i, j) == (1, 1) { ONE } else { ZERO };
                assert_eq!(p[(i, j)], expected);
            }
        }
        let mut rng = rng_from_seed(17);
        let [a, b, cc, d] = [0; 4].map(|_| ginibre(2, &mut rng));
        let lhs = &a.tensor(&b) * &cc.tensor(&d);
        let rhs = (&a * &cc).tensor(&(&b * &d));
        assert!(lhs.approx_eq(&rhs, 1e-13));
    }

    #[test]
    fn partial_trace_of_uncorrelated_ancilla() {
        let mut rng = rng_from_seed(3);
        let g = ginibre(4, &mut rng);
        let rho = (&g * &g.dagger()).scale_real(1.0);
        let full = rho.tensor(&proj_up());
        let reduced = full.partial_trace(&[2, 2, 2], 2).unwrap();
        assert!(reduced.approx_eq(&rho, 1e-14));
    }

    #[test]
    fn partial_trace_of_bell_projector() {
        let h = FRAC_1_SQRT_2;
        let psi = [ZERO, c(h, 0.0), c(h, 0.0), ZERO];
        let bell = ComplexMatrix::outer(&psi, &psi);
        let reduced = bell.partial_trace(&[2, 2], 1).unwrap();
        assert!(reduced.approx_eq(&identity().scale_real(0.5), 1e-15));
    }

    #[test]
    fn partial_trace_matches_index_sum() {
        let mut rng = rng_from_seed(23);
        let m = random_hermitian(8, &mut rng);
        for traced in 0..3 {
            let got = m.partial_trace(&[2, 2, 2], traced).unwrap();
            let mut expected = ComplexMatrix::zeros(4, 4);
            // bits of an 8-dim index: (q0, q1, q2), q0 slowest
            let bits = |idx: usize| [(idx >> 2) & 1, (idx >> 1) & 1, idx & 1];
            for i in 0..8 {
                for j in 0..8 {
                    let (bi, bj) = (bits(i), bits(j));
                    if bi[traced] != bj[traced] {
                        continue;
                    }
                    let keep = |b: [usize; 3]| {
                        let rest: Vec<usize> = (0..3).filter(|&q| q != traced).map(|q| b[q]).collect();
                        rest[0] * 2 + rest[1]
                    };
                    expected[(keep(bi), keep(bj))] += m[(i, j)];
                }
            }
            assert!(got.approx_eq(&expected, 1e-13), "traced index {traced}");
        }
    }

    #[test]
    fn partial_trace_rejects_bad_arguments() {
        let m = ComplexMatrix::identity(8);
        assert!(m.partial_trace(&[2, 2, 2], 3).is_err());
        assert!(m.partial_trace(&[2, 2], 0).is_err());
        assert!(ComplexMatrix::zeros(4, 2).partial_trace(&[2, 2], 0).is_err());
    }

    #[test]
    fn eig_of_paulis() {
        let e = sigma_3().eig_hermitian().unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] + 1.0).abs() < 1e-14);

        let e = sigma_1().eig_hermitian().unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] + 1.0).abs() < 1e-14);
        let plus = e.vectors.column(0);
        let minus = e.vectors.column(1);
        // compare up to phase: |⟨expected|v⟩| = 1
        let overlap = |v: &[Complex64], s: f64| (v[0] * FRAC_1_SQRT_2 + v[1] * s * FRAC_1_SQRT_2).norm();
        assert!((overlap(&plus, 1.0) - 1.0).abs() < 1e-12);
        assert!((overlap(&minus, -1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        let mut rng = rng_from_seed(41);
        let m = random_hermitian(8, &mut rng);
        let e = m.eig_hermitian().unwrap();
        assert!(e.reconstruct().approx_eq(&m, 1e-10));
        assert!(e.vectors.unitarity_defect() < 1e-10);
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn eig_rejects_non_hermitian_and_odd_dimensions() {
        assert!(raising().eig_hermitian().is_err());
        assert!(ComplexMatrix::identity(3).eig_hermitian().is_err());
        assert!(raising().matexp_i_hermitian(1.0).is_err());
    }

    #[test]
    fn matexp_of_zero_is_identity() {
        let u = ComplexMatrix::zeros(4, 4).matexp_i_hermitian(3.7).unwrap();
        assert!(u.approx_eq(&ComplexMatrix::identity(4), 1e-15));
    }

    #[test]
    fn matexp_matches_taylor_series() {
        let mut rng = rng_from_seed(7);
        for _ in 0..5 {
            let h = random_hermitian(4, &mut rng);
            let u = h.matexp_i_hermitian(0.8).unwrap();
            assert!(u.approx_eq(&taylor_expm(&h, 0.8), 1e-9));
            assert!(u.unitarity_defect() < 1e-10);
        }
    }

    #[test]
    fn quarter_period_exchange_transfers_excitation() {
        // two-qubit exchange X⊗A with X the slow index: σ₊σ₋ + σ₋σ₊
        let h = &raising().tensor(&lowering()) + &lowering().tensor(&raising());
        let u = h.matexp_i_hermitian(std::f64::consts::FRAC_PI_2).unwrap();
        // |↑⟩_X|↓⟩_A = index 1  ->  −i |↓⟩_X|↑⟩_A = index 2
        let out = u.apply(&[ZERO, ONE, ZERO, ZERO]).unwrap();
        let expected = [ZERO, ZERO, -I, ZERO];
        for (a, b) in out.iter().zip(expected) {
            assert!((a - b).norm() < 1e-14);
        }
        // oracle: same map from the Taylor series
        let out_taylor = taylor_expm(&h, std::f64::consts::FRAC_PI_2).apply(&[ZERO, ONE, ZERO, ZERO]).unwrap();
        assert!((out_taylor[2] - (-I)).norm() < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn matexp_is_unitary(seed in any::<u64>(), t in -10.0f64..10.0) {
                let mut rng = rng_from_seed(seed);
                let h = random_hermitian(8, &mut rng);
                let u = h.matexp_i_hermitian(t).unwrap();
                prop_assert!(u.unitarity_defect() < 1e-10);
            }

            #[test]
            fn tensor_is_associative(entries in prop::collection::vec((-9i32..=9, -9i32..=9), 12)) {
                // Gaussian integers keep every product exact
                let m = |k: usize| {
                    let data = entries[4 * k..4 * k + 4].iter().map(|&(re, im)| c(re as f64, im as f64)).collect();
                    ComplexMatrix::from_vec(2, 2, data).unwrap()
                };
                let (a, b, cc) = (m(0), m(1), m(2));
                prop_assert_eq!(a.tensor(&b).tensor(&cc), a.tensor(&b.tensor(&cc)));
            }

            #[test]
            fn partial_trace_of_product(seed in any::<u64>()) {
                let mut rng = rng_from_seed(seed);
                let a = ginibre(4, &mut rng);
                let b = ginibre(2, &mut rng);
                let reduced = a.tensor(&b).partial_trace(&[4, 2], 1).unwrap();
                prop_assert!(reduced.approx_eq(&a.scale(b.trace()), 1e-12));
            }

            #[test]
            fn psd_spectrum_is_nonnegative(seed in any::<u64>()) {
                let mut rng = rng_from_seed(seed);
                let g = ginibre(8, &mut rng);
                let psd = (&g * &g.dagger()).hermitian_part();
                let e = psd.eig_hermitian().unwrap();
                prop_assert!(e.values.iter().all(|&l| l >= -1e-10));
            }
        }
    }
}
