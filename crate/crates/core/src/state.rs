//! Qubit register states.
//!
//! A [`DensityMatrix`] always satisfies Hermiticity, unit trace and positivity
//! to within [`DEFAULT_TOL`]; constructors that take external data validate,
//! internal constructors receive operators that are valid by construction.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{ComplexMatrix, DEFAULT_TOL, ONE, ZERO};
use crate::sampling::{ginibre, rng_from_seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    /// Basis index: `|↑⟩ = 0`, `|↓⟩ = 1`.
    pub fn index(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    pub fn flipped(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }

    /// Parses `u`/`d` (also `up`/`down`, `↑`/`↓`) labels such as `"ud"`.
    pub fn parse_labels(s: &str) -> Result<Vec<Spin>> {
        let s = s.trim();
        if s.is_empty() {
            return Err(invalid("empty spin label string"));
        }
        let mut spins = Vec::new();
        for token in s.split(',').map(str::trim) {
            match token {
                "up" => spins.push(Spin::Up),
                "down" => spins.push(Spin::Down),
                _ => {
                    for ch in token.chars() {
                        spins.push(match ch {
                            'u' | '↑' => Spin::Up,
                            'd' | '↓' => Spin::Down,
                            other => return Err(invalid(format!("unknown spin label {other:?}"))),
                        });
                    }
                }
            }
        }
        if spins.is_empty() {
            return Err(invalid("empty spin label string"));
        }
        Ok(spins)
    }
}

/// Normalized state vector on 1 to 3 qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let num_qubits = qubits_for_dim(amplitudes.len())?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > DEFAULT_TOL {
            return Err(invalid(format!("state vector has norm {norm}, expected 1")));
        }
        Ok(Self { num_qubits, amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(invalid("cannot normalize a zero or non-finite vector"));
        }
        Self::new(amplitudes.into_iter().map(|a| a / norm).collect())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix { num_qubits: self.num_qubits, matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes) }
    }
}

/// Computational basis vector for spins listed slowest-first (`A, B, X`).
pub fn basis_state(labels: &[Spin]) -> Result<PureState> {
    if labels.is_empty() || labels.len() > 3 {
        return Err(invalid(format!("basis states span 1 to 3 qubits, got {}", labels.len())));
    }
    let index = labels.iter().fold(0, |acc, s| acc * 2 + s.index());
    let mut amplitudes = vec![ZERO; 1 << labels.len()];
    amplitudes[index] = ONE;
    Ok(PureState { num_qubits: labels.len(), amplitudes })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<[f64; 2]>>", into = "Vec<Vec<[f64; 2]>>")]
pub struct DensityMatrix {
    num_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates against all density-matrix invariants at [`DEFAULT_TOL`].
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, DEFAULT_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(invalid("density matrix must be square"));
        }
        let num_qubits = qubits_for_dim(matrix.rows())?;
        let defect = matrix.hermiticity_defect();
        if defect > tol {
            return Err(invalid(format!("density matrix is not Hermitian (defect {defect:e})")));
        }
        let trace = matrix.trace();
        if (trace - ONE).norm() > tol {
            return Err(invalid(format!("density matrix trace is {trace}, expected 1")));
        }
        let min_eig = matrix.eig_hermitian_tol(tol)?.values.last().copied().unwrap_or(0.0);
        if min_eig < -tol {
            return Err(invalid(format!("density matrix has negative eigenvalue {min_eig:e}")));
        }
        Ok(Self { num_qubits, matrix })
    }

    /// Normalizes a positive operator `m` by its (positive) trace. The caller
    /// guarantees `m` is Hermitian PSD up to round-off.
    pub(crate) fn from_positive_unchecked(m: &ComplexMatrix, trace: f64) -> Self {
        let num_qubits = qubits_for_dim(m.rows()).expect("register dimension");
        Self { num_qubits, matrix: m.hermitian_part().scale_real(1.0 / trace) }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `⟨i|ρ|i⟩`
    pub fn population(&self, index: usize) -> f64 {
        self.matrix[(index, index)].re
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Largest violation of the Hermitian / unit-trace / PSD invariants.
    pub fn invariant_defect(&self) -> f64 {
        let herm = self.matrix.hermiticity_defect();
        let trace = (self.matrix.trace() - ONE).norm();
        let neg = self
            .matrix
            .hermitian_part()
            .eig_hermitian_tol(f64::INFINITY)
            .map(|e| (-e.values.last().copied().unwrap_or(0.0)).max(0.0))
            .unwrap_or(f64::INFINITY);
        herm.max(trace).max(neg)
    }

    /// `⟨ψ|ρ|ψ⟩`, clamped to `[0, 1]`.
    pub fn fidelity_pure(&self, psi: &PureState) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(invalid(format!(
                "state of dimension {} against density matrix of dimension {}",
                psi.dim(),
                self.dim()
            )));
        }
        let rho_psi = self.matrix.apply(psi.amplitudes())?;
        let f: Complex64 = psi.amplitudes().iter().zip(&rho_psi).map(|(a, b)| a.conj() * b).sum();
        Ok(f.re.clamp(0.0, 1.0))
    }

    /// Convex combination `p·self + (1−p)·other`.
    pub fn mix(&self, other: &Self, p: f64) -> Result<Self> {
        if self.dim() != other.dim() || !(0.0..=1.0).contains(&p) {
            return Err(invalid("mixture needs equal dimensions and weight in [0, 1]"));
        }
        let m = &self.matrix.scale_real(p) + &other.matrix.scale_real(1.0 - p);
        Ok(Self { num_qubits: self.num_qubits, matrix: m })
    }
}

pub fn maximally_mixed(num_qubits: usize) -> Result<DensityMatrix> {
    if !(1..=3).contains(&num_qubits) {
        return Err(invalid(format!("registers hold 1 to 3 qubits, got {num_qubits}")));
    }
    let dim = 1 << num_qubits;
    Ok(DensityMatrix { num_qubits, matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64) })
}

/// Full-rank random state `GG†/Tr(GG†)` from a seeded complex Gaussian `G`.
pub fn random_density(num_qubits: usize, seed: u64) -> Result<DensityMatrix> {
    if !(1..=3).contains(&num_qubits) {
        return Err(invalid(format!("registers hold 1 to 3 qubits, got {num_qubits}")));
    }
    let mut rng = rng_from_seed(seed);
    let g = ginibre(1 << num_qubits, &mut rng);
    let gg = &g * &g.dagger();
    let trace = gg.trace().re;
    Ok(DensityMatrix::from_positive_unchecked(&gg, trace))
}

fn qubits_for_dim(dim: usize) -> Result<usize> {
    match dim {
        2 => Ok(1),
        4 => Ok(2),
        8 => Ok(3),
        other => Err(invalid(format!("dimension {other} is not a 1-3 qubit register"))),
    }
}

impl TryFrom<Vec<Vec<[f64; 2]>>> for DensityMatrix {
    type Error = crate::Error;

    fn try_from(rows: Vec<Vec<[f64; 2]>>) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> =
            rows.into_iter().map(|r| r.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()).collect();
        DensityMatrix::new(ComplexMatrix::from_rows(&rows)?)
    }
}

impl From<DensityMatrix> for Vec<Vec<[f64; 2]>> {
    fn from(rho: DensityMatrix) -> Self {
        (0..rho.dim()).map(|r| rho.matrix.row(r).iter().map(|z| [z.re, z.im]).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basis_state_ordering() {
        assert_eq!(basis_state(&[Spin::Up]).unwrap().amplitudes(), &[ONE, ZERO]);
        let dd = basis_state(&[Spin::Down, Spin::Down]).unwrap();
        assert_eq!(dd.amplitudes()[3], ONE);
        let udu = basis_state(&[Spin::Up, Spin::Down, Spin::Up]).unwrap();
        assert_eq!(udu.amplitudes().iter().position(|&a| a == ONE), Some(2));
        assert!(basis_state(&[]).is_err());
        assert!(basis_state(&[Spin::Up; 4]).is_err());
    }

    #[test]
    fn label_parsing() {
        assert_eq!(Spin::parse_labels("ud").unwrap(), vec![Spin::Up, Spin::Down]);
        assert_eq!(Spin::parse_labels("down,up").unwrap(), vec![Spin::Down, Spin::Up]);
        assert_eq!(Spin::parse_labels("↑↓").unwrap(), vec![Spin::Up, Spin::Down]);
        assert_eq!(Spin::parse_labels("up").unwrap(), vec![Spin::Up]);
        assert!(Spin::parse_labels("ux").is_err());
        assert!(Spin::parse_labels("").is_err());
    }

    #[test]
    fn maximally_mixed_states() {
        let one = maximally_mixed(1).unwrap();
        assert_eq!(one.matrix(), &ComplexMatrix::diagonal(&[Complex64::new(0.5, 0.0); 2]));
        let two = maximally_mixed(2).unwrap();
        assert_eq!(two.matrix(), &ComplexMatrix::diagonal(&[Complex64::new(0.25, 0.0); 4]));
        for n in 1..=3 {
            let rho = maximally_mixed(n).unwrap();
            assert!((rho.purity() - 1.0 / (1 << n) as f64).abs() < 1e-15);
        }
        assert!(maximally_mixed(0).is_err());
        assert!(maximally_mixed(4).is_err());
    }

    #[test]
    fn random_density_is_deterministic() {
        assert_eq!(random_density(2, 99).unwrap(), random_density(2, 99).unwrap());
        assert_ne!(random_density(2, 99).unwrap(), random_density(2, 100).unwrap());
    }

    #[test]
    fn random_density_mean_approaches_identity_over_four() {
        let n = 1000;
        let mut mean = ComplexMatrix::zeros(4, 4);
        for seed in 0..n {
            mean = &mean + random_density(2, seed).unwrap().matrix();
        }
        let mean = mean.scale_real(1.0 / n as f64);
        let target = ComplexMatrix::identity(4).scale_real(0.25);
        assert!(mean.max_abs_diff(&target) < 5e-2, "{mean:?}");
    }

    #[test]
    fn fidelity_cases() {
        let psi = PureState::normalized(vec![
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.2, 0.5),
            Complex64::new(0.0, 0.4),
            Complex64::new(0.6, 0.0),
        ])
        .unwrap();
        assert!((psi.projector().fidelity_pure(&psi).unwrap() - 1.0).abs() < 1e-12);
        assert!((maximally_mixed(2).unwrap().fidelity_pure(&psi).unwrap() - 0.25).abs() < 1e-15);
        assert!(maximally_mixed(1).unwrap().fidelity_pure(&psi).is_err());

        // explicit double sum Σ_ij ψ_i* ρ_ij ψ_j
        let rho = random_density(2, 8).unwrap();
        let a = psi.amplitudes();
        let mut expected = Complex64::new(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                expected += a[i].conj() * rho.matrix()[(i, j)] * a[j];
            }
        }
        assert!(expected.im.abs() < 1e-12);
        assert!((rho.fidelity_pure(&psi).unwrap() - expected.re).abs() < 1e-12);
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let not_unit_trace = ComplexMatrix::identity(4);
        assert!(DensityMatrix::new(not_unit_trace).is_err());
        let negative = ComplexMatrix::from_real(2, 2, &[1.5, 0.0, 0.0, -0.5]).unwrap();
        assert!(DensityMatrix::new(negative).is_err());
        let non_hermitian = ComplexMatrix::from_real(2, 2, &[0.5, 0.3, 0.0, 0.5]).unwrap();
        assert!(DensityMatrix::new(non_hermitian).is_err());
        let odd = ComplexMatrix::identity(3).scale_real(1.0 / 3.0);
        assert!(DensityMatrix::new(odd).is_err());
        assert!(PureState::new(vec![ONE, ONE]).is_err());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let rho = random_density(2, 4).unwrap();
        let text = serde_json::to_string(&rho).unwrap();
        assert!(text.starts_with("[[["));
        let back: DensityMatrix = serde_json::from_str(&text).unwrap();
        assert!(back.matrix().approx_eq(rho.matrix(), 1e-15));

        let bad = "[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]";
        assert!(serde_json::from_str::<DensityMatrix>(bad).is_err());
        let good = "[[[0.5,0.0],[0.0,0.0]],[[0.0,0.0],[0.5,0.0]]]";
        assert_eq!(serde_json::from_str::<DensityMatrix>(good).unwrap(), maximally_mixed(1).unwrap());
    }

    proptest! {
        #[test]
        fn constructors_satisfy_invariants(seed in any::<u64>(), n in 1usize..=3) {
            let rho = random_density(n, seed).unwrap();
            prop_assert!(rho.invariant_defect() <= DEFAULT_TOL);
            prop_assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
            prop_assert!(maximally_mixed(n).unwrap().invariant_defect() <= DEFAULT_TOL);
        }

        #[test]
        fn fidelity_is_linear_in_rho(s1 in any::<u64>(), s2 in any::<u64>(), p in 0.0f64..=1.0) {
            let a = random_density(2, s1).unwrap();
            let b = random_density(2, s2).unwrap();
            let psi = PureState::normalized(random_density(2, s1 ^ s2).unwrap().matrix().column(0)).unwrap();
            let mixed = a.mix(&b, p).unwrap().fidelity_pure(&psi).unwrap();
            let expected = p * a.fidelity_pure(&psi).unwrap() + (1.0 - p) * b.fidelity_pure(&psi).unwrap();
            prop_assert!((mixed - expected).abs() < 1e-12);
        }
    }
}
