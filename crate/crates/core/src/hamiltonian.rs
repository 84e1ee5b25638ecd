//! Hamiltonians of two qubits `A`, `B` and the mediator `X` on the eight
//! dimensional space `A ⊗ B ⊗ X`.
//!
//! Each coupling is a resonant exchange `g(σ₊σ₋ + σ₋σ₊)` between the
//! mediator and one qubit. Everything downstream depends only on the
//! dimensionless products `θ = g·τ`, so propagators are parameterized by
//! angles rather than by couplings and durations separately.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{pauli, ComplexMatrix};

pub const NUM_QUBITS: usize = 3;
pub const DIM: usize = 1 << NUM_QUBITS;

/// Tensor slot of each subsystem in `A ⊗ B ⊗ X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    A = 0,
    B = 1,
    X = 2,
}

/// Which qubit the mediator is currently coupled to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coupling {
    XA,
    XB,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    /// `g_A·τ_A` in radians.
    pub theta_a: f64,
    /// `g_B·τ_B` in radians.
    pub theta_b: f64,
    /// `Ω·τ` accumulated by the free term during one interaction.
    #[serde(default)]
    pub omega_t: f64,
}

impl CouplingParams {
    pub fn new(theta_a: f64, theta_b: f64) -> Self {
        Self { theta_a, theta_b, omega_t: 0.0 }
    }

    pub fn with_omega_t(self, omega_t: f64) -> Self {
        Self { omega_t, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if [self.theta_a, self.theta_b, self.omega_t].iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(invalid(format!("coupling parameters must be finite: {self:?}")))
        }
    }

    pub fn theta(&self, coupling: Coupling) -> f64 {
        match coupling {
            Coupling::XA => self.theta_a,
            Coupling::XB => self.theta_b,
        }
    }

    /// `(sin θ_A, cos θ_A, sin θ_B, cos θ_B)`
    pub fn trig(&self) -> Trig {
        let (s_a, c_a) = self.theta_a.sin_cos();
        let (s_b, c_b) = self.theta_b.sin_cos();
        Trig { s_a, c_a, s_b, c_b }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trig {
    pub s_a: f64,
    pub c_a: f64,
    pub s_b: f64,
    pub c_b: f64,
}

/// Lifts a single-qubit operator into `slot` of the three-qubit register.
pub fn embed(op: &ComplexMatrix, slot: Slot) -> ComplexMatrix {
    let id = pauli::identity();
    let factors: [&ComplexMatrix; NUM_QUBITS] = match slot {
        Slot::A => [op, &id, &id],
        Slot::B => [&id, op, &id],
        Slot::X => [&id, &id, op],
    };
    factors[0].tensor(factors[1]).tensor(factors[2])
}

/// `(Ω/2)(σ₃ᴬ + σ₃ᴮ + σ₃ˣ)`
pub fn h_free(omega: f64) -> ComplexMatrix {
    let z = pauli::sigma_3();
    let sum = &(&embed(&z, Slot::A) + &embed(&z, Slot::B)) + &embed(&z, Slot::X);
    sum.scale_real(omega / 2.0)
}

fn exchange(g: f64, qubit: Slot) -> ComplexMatrix {
    let up_x = embed(&pauli::raising(), Slot::X);
    let down_x = embed(&pauli::lowering(), Slot::X);
    let up_q = embed(&pauli::raising(), qubit);
    let down_q = embed(&pauli::lowering(), qubit);
    (&(&up_x * &down_q) + &(&down_x * &up_q)).scale_real(g)
}

/// `g(σ₊ˣσ₋ᴬ + σ₋ˣσ₊ᴬ)`
pub fn h_int_xa(g: f64) -> ComplexMatrix {
    exchange(g, Slot::A)
}

/// `g(σ₊ˣσ₋ᴮ + σ₋ˣσ₊ᴮ)`
pub fn h_int_xb(g: f64) -> ComplexMatrix {
    exchange(g, Slot::B)
}

pub fn h_int(coupling: Coupling, g: f64) -> ComplexMatrix {
    match coupling {
        Coupling::XA => h_int_xa(g),
        Coupling::XB => h_int_xb(g),
    }
}

/// Number of up spins across `A`, `B` and `X`.
pub fn excitation_number() -> ComplexMatrix {
    let n1 = pauli::proj_up();
    &(&embed(&n1, Slot::A) + &embed(&n1, Slot::B)) + &embed(&n1, Slot::X)
}

/// `exp(−i(H₀·τ·[include_free] + H_int·τ))` for one mediator-qubit
/// interaction, with `H_int·τ` set by the coupling angle and `H₀·τ` by
/// `omega_t`.
pub fn propagator(which: Coupling, params: &CouplingParams, include_free: bool) -> ComplexMatrix {
    let mut generator = h_int(which, params.theta(which));
    if include_free && params.omega_t != 0.0 {
        generator = &generator + &h_free(params.omega_t);
    }
    generator.matexp_i_hermitian(1.0).expect("generator is Hermitian and 8x8")
}
