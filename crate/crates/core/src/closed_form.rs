//! Closed-form single-pass and pipeline operators in the interaction picture.
//!
//! These are reference expressions for verification. The simulation itself
//! always slices the numerically exponentiated propagators.

use num_complex::Complex64;

use crate::hamiltonian::CouplingParams;
use crate::linalg::ComplexMatrix;

const UP: usize = 0;
const DOWN: usize = 1;

fn ket_bra(a: usize, b: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(a, b)] = Complex64::new(1.0, 0.0);
    m
}

/// `p·|↑⟩⟨↑| + q·|↓⟩⟨↓|`
fn diag(p: f64, q: f64) -> ComplexMatrix {
    &ket_bra(UP, UP).scale_real(p) + &ket_bra(DOWN, DOWN).scale_real(q)
}

fn minus_i(m: ComplexMatrix) -> ComplexMatrix {
    m.scale(Complex64::new(0.0, -1.0))
}

/// `−i[s_A|↑⟩⟨↓|⊗(|↓⟩⟨↓| + c_B|↑⟩⟨↑|) + s_B(|↑⟩⟨↑| + c_A|↓⟩⟨↓|)⊗|↑⟩⟨↓|]`
pub fn r_plus(params: &CouplingParams) -> ComplexMatrix {
    let t = params.trig();
    let a = ket_bra(UP, DOWN).scale_real(t.s_a).tensor(&diag(t.c_b, 1.0));
    let b = diag(1.0, t.c_a).scale_real(t.s_b).tensor(&ket_bra(UP, DOWN));
    minus_i(&a + &b)
}

/// `−i[s_A|↑⟩⟨↓|⊗(|↑⟩⟨↑| + c_B|↓⟩⟨↓|) + s_B(|↓⟩⟨↓| + c_A|↑⟩⟨↑|)⊗|↑⟩⟨↓|]`
pub fn l_plus(params: &CouplingParams) -> ComplexMatrix {
    let t = params.trig();
    let a = ket_bra(UP, DOWN).scale_real(t.s_a).tensor(&diag(1.0, t.c_b));
    let b = diag(t.c_a, 1.0).scale_real(t.s_b).tensor(&ket_bra(UP, DOWN));
    minus_i(&a + &b)
}

/// `−i[s_A|↓⟩⟨↑|⊗(|↑⟩⟨↑| + c_B|↓⟩⟨↓|) + s_B(|↓⟩⟨↓| + c_A|↑⟩⟨↑|)⊗|↓⟩⟨↑|]`
pub fn r_minus(params: &CouplingParams) -> ComplexMatrix {
    let t = params.trig();
    let a = ket_bra(DOWN, UP).scale_real(t.s_a).tensor(&diag(1.0, t.c_b));
    let b = diag(t.c_a, 1.0).scale_real(t.s_b).tensor(&ket_bra(DOWN, UP));
    minus_i(&a + &b)
}

/// `V = 2i s_A c_A s_B (c_A s_B|↑↓⟩ + s_A|↓↑⟩)⟨↓↓|`
pub fn extraction_operator(params: &CouplingParams) -> ComplexMatrix {
    let t = params.trig();
    let prefactor = Complex64::new(0.0, 2.0 * t.s_a * t.c_a * t.s_b);
    let mut v = ComplexMatrix::zeros(4, 4);
    v[(1, 3)] = prefactor * t.c_a * t.s_b;
    v[(2, 3)] = prefactor * t.s_a;
    v
}
