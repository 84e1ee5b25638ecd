//! Two-qubit entanglement: Wootters concurrence for arbitrary states and the
//! closed forms for the state produced by the rightward/leftward/rightward
//! recipe.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::hamiltonian::CouplingParams;
use crate::linalg::{pauli, ComplexMatrix, ZERO};
use crate::state::{DensityMatrix, PureState};

/// Spectral noise floor; eigenvalues above `-SPECTRAL_FLOOR` but below zero
/// are treated as zero.
pub const SPECTRAL_FLOOR: f64 = 1e-10;

const NEGLIGIBLE_WEIGHT: f64 = 1e-30;

/// Threshold below which a closed-form normalization counts as vanishing.
pub const DEGENERACY_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ConcurrenceResult {
    pub value: f64,
    /// Descending.
    pub wootters_lambdas: [f64; 4],
}

/// Wootters concurrence `max(0, λ₁−λ₂−λ₃−λ₄)`.
///
/// The `λᵢ` are the square roots of the eigenvalues of `ρρ̃` with
/// `ρ̃ = (σ₂⊗σ₂)ρ*(σ₂⊗σ₂)`. They are obtained without squaring: with
/// `ρ = WW†`, they are the singular values of `τ = Wᵀ(σ₂⊗σ₂)W`, read off as
/// the nonnegative half of the spectrum of the Hermitian dilation
/// `[[0, τ], [τ†, 0]]`. Working with `τ` keeps the small `λ` of a nearly
/// pure state at round-off level instead of the square root of round-off.
pub fn concurrence(rho: &DensityMatrix) -> Result<ConcurrenceResult> {
    if rho.num_qubits() != 2 {
        return Err(invalid(format!("concurrence needs a two-qubit state, got {} qubits", rho.num_qubits())));
    }
    let eig = rho.matrix().hermitian_part().eig_hermitian()?;
    let mut w = eig.vectors.clone();
    for (c, &p) in eig.values.iter().enumerate() {
        // weights this small move the λ by under 1e-15
        let amp = if p > NEGLIGIBLE_WEIGHT { p.sqrt() } else { 0.0 };
        for r in 0..4 {
            w[(r, c)] *= amp;
        }
    }
    let yy = spin_flip();
    let tau = &(&w.transpose() * &yy) * &w;

    let mut dilation = ComplexMatrix::zeros(8, 8);
    for i in 0..4 {
        for j in 0..4 {
            dilation[(i, 4 + j)] = tau[(i, j)];
            dilation[(4 + j, i)] = tau[(i, j)].conj();
        }
    }
    let spectrum = dilation.eig_hermitian()?.values;
    let mut lambdas = [0.0; 4];
    for (l, &s) in lambdas.iter_mut().zip(&spectrum) {
        *l = if s > -SPECTRAL_FLOOR { s.max(0.0) } else { s };
    }
    let value = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0);
    Ok(ConcurrenceResult { value, wootters_lambdas: lambdas })
}

/// `σ₂ ⊗ σ₂`
pub fn spin_flip() -> ComplexMatrix {
    pauli::sigma_2().tensor(&pauli::sigma_2())
}

/// `C = 2|s_A c_A s_B| / (s_A² + c_A² s_B²)` for the state extracted by the
/// optimal recipe.
pub fn analytic_concurrence(params: &CouplingParams) -> Result<f64> {
    let t = params.trig();
    let denom = t.s_a * t.s_a + t.c_a * t.c_a * t.s_b * t.s_b;
    if denom <= DEGENERACY_EPS {
        return Err(Error::DegenerateState(format!("s_A² + c_A² s_B² = {denom:e}; the extraction operator vanishes")));
    }
    Ok((2.0 * (t.s_a * t.c_a * t.s_b).abs() / denom).min(1.0))
}

/// Yield of the optimal recipe per unit `⟨↓↓|ρ|↓↓⟩`:
/// `4 s_A² c_A² s_B² (1 − c_A² c_B²)`.
pub fn analytic_yield_fraction(params: &CouplingParams) -> f64 {
    let t = params.trig();
    4.0 * (t.s_a * t.c_a * t.s_b).powi(2) * (1.0 - (t.c_a * t.c_b).powi(2))
}

/// `(c_A s_B|↑↓⟩ + s_A|↓↑⟩)/√(1 − c_A² c_B²)`
pub fn target_state(params: &CouplingParams) -> Result<PureState> {
    let t = params.trig();
    let norm2 = 1.0 - t.c_a * t.c_a * t.c_b * t.c_b;
    if norm2 <= DEGENERACY_EPS {
        return Err(Error::DegenerateState(format!("1 − c_A² c_B² = {norm2:e}")));
    }
    let n = norm2.sqrt();
    PureState::normalized(vec![ZERO, Complex64::new(t.c_a * t.s_b / n, 0.0), Complex64::new(t.s_a / n, 0.0), ZERO])
}

/// `tan²θ_A = sin²θ_B`, the condition for unit concurrence. Near the
/// tangent pole the equivalent form `s_A² = c_A² s_B²` is used.
pub fn max_condition(params: &CouplingParams) -> bool {
    let t = params.trig();
    if t.c_a * t.c_a <= DEGENERACY_EPS {
        (t.s_a * t.s_a - t.c_a * t.c_a * t.s_b * t.s_b).abs() < 1e-9
    } else {
        let tan = t.s_a / t.c_a;
        (tan * tan - t.s_b * t.s_b).abs() < 1e-9
    }
}
