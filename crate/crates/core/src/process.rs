//! Post-selected mediator passes.
//!
//! A pass prepares `X` in a basis state, lets it interact with `A` and `B` in
//! the order given by its [`Direction`], and keeps the run only when `X` is
//! found in the requested outcome. On the qubit pair this is the Kraus map
//! `K = ⟨outcome|_X U₂ U₁ |prepared⟩_X`, always obtained here by slicing the
//! full eight-dimensional propagators.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hamiltonian::{propagator, Coupling, CouplingParams, Slot};
use crate::linalg::{pauli, ComplexMatrix};
use crate::state::{DensityMatrix, Spin};

/// Probabilities at or below this are treated as impossible outcomes.
pub const DEFAULT_EPSILON_P: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `X` meets `A`, then `B`.
    Rightward,
    /// `X` meets `B`, then `A`.
    Leftward,
}

impl Direction {
    /// Couplings in the order they act.
    pub fn order(self) -> [Coupling; 2] {
        match self {
            Direction::Rightward => [Coupling::XA, Coupling::XB],
            Direction::Leftward => [Coupling::XB, Coupling::XA],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProcessSpec {
    pub direction: Direction,
    pub prepared: Spin,
    pub outcome: Spin,
}

impl ProcessSpec {
    pub const fn new(direction: Direction, prepared: Spin, outcome: Spin) -> Self {
        Self { direction, prepared, outcome }
    }

    /// `⟨↓|U_B U_A|↑⟩`
    pub const R_PLUS: Self = Self::new(Direction::Rightward, Spin::Up, Spin::Down);
    /// `⟨↓|U_A U_B|↑⟩`
    pub const L_PLUS: Self = Self::new(Direction::Leftward, Spin::Up, Spin::Down);
    /// `⟨↑|U_B U_A|↓⟩`
    pub const R_MINUS: Self = Self::new(Direction::Rightward, Spin::Down, Spin::Up);
    /// `⟨↑|U_A U_B|↓⟩`
    pub const L_MINUS: Self = Self::new(Direction::Leftward, Spin::Down, Spin::Up);
}

impl fmt::Display for ProcessSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = match self.direction {
            Direction::Rightward => 'R',
            Direction::Leftward => 'L',
        };
        let arrow = |s: Spin| match s {
            Spin::Up => '↑',
            Spin::Down => '↓',
        };
        write!(f, "{dir}({}→{})", arrow(self.prepared), arrow(self.outcome))
    }
}

/// Exactly three passes, applied first to last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<ProcessSpec>", into = "Vec<ProcessSpec>")]
pub struct Recipe {
    processes: [ProcessSpec; 3],
}

impl Recipe {
    pub const fn new(processes: [ProcessSpec; 3]) -> Self {
        Self { processes }
    }

    /// Rightward, leftward, rightward: `V = R₋ L₊ R₊`.
    pub const fn optimal() -> Self {
        Self::new([ProcessSpec::R_PLUS, ProcessSpec::L_PLUS, ProcessSpec::R_MINUS])
    }

    pub fn processes(&self) -> &[ProcessSpec; 3] {
        &self.processes
    }

    /// Compact label such as `"R(↑→↓) L(↑→↓) R(↓→↑)"`.
    pub fn label(&self) -> String {
        self.processes.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    }

    /// Direction letters of the three passes, e.g. `"RLR"`.
    pub fn directions(&self) -> String {
        self.processes
            .iter()
            .map(|p| match p.direction {
                Direction::Rightward => 'R',
                Direction::Leftward => 'L',
            })
            .collect()
    }
}

impl TryFrom<Vec<ProcessSpec>> for Recipe {
    type Error = Error;

    fn try_from(v: Vec<ProcessSpec>) -> Result<Self> {
        let processes: [ProcessSpec; 3] =
            v.try_into().map_err(|v: Vec<_>| invalid(format!("a recipe has exactly 3 passes, got {}", v.len())))?;
        Ok(Self { processes })
    }
}

impl From<Recipe> for Vec<ProcessSpec> {
    fn from(r: Recipe) -> Self {
        r.processes.to_vec()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    /// Include `H₀` in the propagators (full picture) instead of working in
    /// the interaction picture.
    pub include_free: bool,
    pub epsilon_p: f64,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self { include_free: false, epsilon_p: DEFAULT_EPSILON_P }
    }
}

impl SimOptions {
    pub fn full_picture() -> Self {
        Self { include_free: true, ..Self::default() }
    }
}

/// Post-selected state together with the probability of the kept branch.
#[derive(Debug, Clone, PartialEq)]
pub struct Conditional {
    pub state: DensityMatrix,
    pub probability: f64,
}

/// The two interaction propagators for one parameter set. Every pass of a
/// recipe reuses them.
#[derive(Debug, Clone)]
pub struct PassPropagators {
    xa: ComplexMatrix,
    xb: ComplexMatrix,
}

impl PassPropagators {
    pub fn new(params: &CouplingParams, include_free: bool) -> Self {
        Self { xa: propagator(Coupling::XA, params, include_free), xb: propagator(Coupling::XB, params, include_free) }
    }

    pub fn from_parts(xa: ComplexMatrix, xb: ComplexMatrix) -> Self {
        Self { xa, xb }
    }

    pub fn get(&self, which: Coupling) -> &ComplexMatrix {
        match which {
            Coupling::XA => &self.xa,
            Coupling::XB => &self.xb,
        }
    }

    /// `U₂ U₁` on the full register for a pass in `direction`.
    pub fn pass_unitary(&self, direction: Direction) -> ComplexMatrix {
        let [first, second] = direction.order();
        self.get(second) * self.get(first)
    }

    pub fn kraus(&self, spec: &ProcessSpec) -> ComplexMatrix {
        let u = self.pass_unitary(spec.direction);
        let (out, prep) = (spec.outcome.index(), spec.prepared.index());
        let mut k = ComplexMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                k[(i, j)] = u[(2 * i + out, 2 * j + prep)];
            }
        }
        k
    }

    pub fn pipeline(&self, recipe: &Recipe) -> ComplexMatrix {
        recipe.processes().iter().fold(ComplexMatrix::identity(4), |acc, spec| &self.kraus(spec) * &acc)
    }
}

/// Kraus operator on `A ⊗ B` for one pass, interaction picture.
pub fn kraus_operator(spec: &ProcessSpec, params: &CouplingParams) -> ComplexMatrix {
    kraus_operator_with(spec, params, &SimOptions::default())
}

pub fn kraus_operator_with(spec: &ProcessSpec, params: &CouplingParams, opts: &SimOptions) -> ComplexMatrix {
    PassPropagators::new(params, opts.include_free).kraus(spec)
}

/// `ρ ↦ KρK†/Tr(KρK†)` for one pass.
pub fn apply_process(rho: &DensityMatrix, spec: &ProcessSpec, params: &CouplingParams) -> Result<Conditional> {
    apply_process_with(rho, spec, params, &SimOptions::default())
}

pub fn apply_process_with(
    rho: &DensityMatrix,
    spec: &ProcessSpec,
    params: &CouplingParams,
    opts: &SimOptions,
) -> Result<Conditional> {
    check_pair(rho)?;
    params.validate()?;
    condition(rho, &kraus_operator_with(spec, params, opts), opts.epsilon_p)
}

/// `V = K₃ K₂ K₁` for a recipe (the third pass acts last).
pub fn pipeline_operator(recipe: &Recipe, params: &CouplingParams) -> ComplexMatrix {
    PassPropagators::new(params, false).pipeline(recipe)
}

/// Runs all three passes: `ρ ↦ VρV†/P` with yield `P = Tr(VρV†)`.
pub fn run_protocol(rho: &DensityMatrix, recipe: &Recipe, params: &CouplingParams) -> Result<Conditional> {
    run_protocol_with(rho, recipe, params, &SimOptions::default())
}

pub fn run_protocol_with(
    rho: &DensityMatrix,
    recipe: &Recipe,
    params: &CouplingParams,
    opts: &SimOptions,
) -> Result<Conditional> {
    check_pair(rho)?;
    params.validate()?;
    let v = PassPropagators::new(params, opts.include_free).pipeline(recipe);
    condition(rho, &v, opts.epsilon_p)
}

/// Unconditional action of one pass, `Σ_outcome KρK†`. Trace preserving.
pub fn unconditional_channel(
    rho: &DensityMatrix,
    direction: Direction,
    prepared: Spin,
    params: &CouplingParams,
) -> ComplexMatrix {
    let props = PassPropagators::new(params, false);
    [Spin::Up, Spin::Down]
        .iter()
        .map(|&outcome| {
            let k = props.kraus(&ProcessSpec::new(direction, prepared, outcome));
            &(&k * rho.matrix()) * &k.dagger()
        })
        .fold(ComplexMatrix::zeros(4, 4), |acc, m| &acc + &m)
}

/// Independent route for one pass: embed `ρ ⊗ |prepared⟩⟨prepared|`, evolve
/// on the full register, project the mediator on the outcome and trace it
/// out.
pub fn full_space_oracle(rho: &DensityMatrix, spec: &ProcessSpec, params: &CouplingParams) -> Result<Conditional> {
    full_space_oracle_with(rho, spec, params, &SimOptions::default())
}

pub fn full_space_oracle_with(
    rho: &DensityMatrix,
    spec: &ProcessSpec,
    params: &CouplingParams,
    opts: &SimOptions,
) -> Result<Conditional> {
    check_pair(rho)?;
    params.validate()?;
    let mediator = |s: Spin| match s {
        Spin::Up => pauli::proj_up(),
        Spin::Down => pauli::proj_down(),
    };
    let joint = rho.matrix().tensor(&mediator(spec.prepared));
    let [first, second] = spec.direction.order();
    let mut evolved = joint;
    for which in [first, second] {
        let u = propagator(which, params, opts.include_free);
        evolved = &(&u * &evolved) * &u.dagger();
    }
    let projector = crate::hamiltonian::embed(&mediator(spec.outcome), Slot::X);
    let projected = &(&projector * &evolved) * &projector;
    let reduced = projected.partial_trace(&[2, 2, 2], Slot::X as usize)?;
    let probability = reduced.trace().re;
    if probability <= opts.epsilon_p {
        return Err(Error::ImpossibleOutcome { probability });
    }
    Ok(Conditional { state: DensityMatrix::from_positive_unchecked(&reduced, probability), probability })
}

fn condition(rho: &DensityMatrix, k: &ComplexMatrix, epsilon_p: f64) -> Result<Conditional> {
    let unnormalized = &(k * rho.matrix()) * &k.dagger();
    let probability = unnormalized.trace().re;
    if probability <= epsilon_p {
        return Err(Error::ImpossibleOutcome { probability });
    }
    Ok(Conditional { state: DensityMatrix::from_positive_unchecked(&unnormalized, probability), probability })
}

fn check_pair(rho: &DensityMatrix) -> Result<()> {
    if rho.num_qubits() != 2 {
        return Err(invalid(format!("mediator passes act on two qubits, got {}", rho.num_qubits())));
    }
    Ok(())
}
