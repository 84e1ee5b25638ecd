//! Recipe enumeration, parameter sweeps and optimum search.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entanglement::concurrence;
use crate::error::{invalid, Result};
use crate::hamiltonian::{propagator, Coupling, CouplingParams};
use crate::linalg::ComplexMatrix;
use crate::process::{Direction, PassPropagators, ProcessSpec, Recipe, DEFAULT_EPSILON_P};
use crate::state::{basis_state, DensityMatrix, Spin};

/// Points with concurrence at least this high count as maximally entangled
/// when searching for the best yield.
pub const UNIT_CONCURRENCE_TOL: f64 = 1e-6;

/// Both figures of merit must reach `1 − SIMULTANEOUS_TOL` for a report to
/// claim they are attained together.
pub const SIMULTANEOUS_TOL: f64 = 1e-9;

/// The four recipes: the first two passes each go either way with `X`
/// prepared up and post-selected down; the third pass is fixed to a
/// rightward down-to-up pass.
pub fn enumerate_recipes() -> Vec<Recipe> {
    let last = ProcessSpec::R_MINUS;
    let mut out = Vec::with_capacity(4);
    for first in [Direction::Rightward, Direction::Leftward] {
        for second in [Direction::Rightward, Direction::Leftward] {
            out.push(Recipe::new([
                ProcessSpec::new(first, Spin::Up, Spin::Down),
                ProcessSpec::new(second, Spin::Up, Spin::Down),
                last,
            ]));
        }
    }
    out
}

/// Evenly spaced angles `start, start + step, …` up to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(start: f64, stop: f64, step: f64) -> Self {
        Self { start, stop, step }
    }

    /// `points` interior points of `(0, π)` spaced `π/(points + 1)`.
    pub fn open_pi(points: usize) -> Self {
        let step = PI / (points as f64 + 1.0);
        Self { start: step, stop: PI - step, step }
    }

    /// `k·π/points` for `k = 1..=points`, i.e. a half-open `(0, π]` grid.
    pub fn half_open_pi(points: usize) -> Self {
        let step = PI / points as f64;
        Self { start: step, stop: PI, step }
    }

    pub fn single(theta: f64) -> Self {
        Self { start: theta, stop: theta, step: 1.0 }
    }

    pub fn len(&self) -> Result<usize> {
        if ![self.start, self.stop, self.step].iter().all(|v| v.is_finite()) {
            return Err(invalid(format!("axis bounds must be finite: {self:?}")));
        }
        if self.step <= 0.0 {
            return Err(invalid(format!("axis step must be positive, got {}", self.step)));
        }
        if self.stop < self.start {
            return Err(invalid(format!("empty axis range [{}, {}]", self.start, self.stop)));
        }
        // slack absorbs round-off when stop is meant to be a grid point
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        Ok(n)
    }

    /// True when the range is empty or malformed.
    pub fn is_empty(&self) -> bool {
        self.len().is_err()
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        Ok((0..self.len()?).map(|k| self.start + k as f64 * self.step).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub theta_a: Axis,
    pub theta_b: Axis,
}

impl GridSpec {
    pub fn square(axis: Axis) -> Self {
        Self { theta_a: axis, theta_b: axis }
    }
}

impl Default for GridSpec {
    /// `kπ/200` for `k = 1..=199` on both axes: open at 0 and π, symmetric
    /// under `θ → π − θ`, and containing π/4 and π/2.
    fn default() -> Self {
        Self::square(Axis::open_pi(199))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub theta_a: f64,
    pub theta_b: f64,
    /// Absent where the recipe annihilates `|↓↓⟩`.
    pub concurrence: Option<f64>,
    /// Yield divided by `⟨↓↓|ρ|↓↓⟩`.
    pub normalized_yield: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub recipe: Recipe,
    pub grid: GridSpec,
    /// Row-major: `θ_A` outer, `θ_B` inner.
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn shape(&self) -> (usize, usize) {
        let na = self.grid.theta_a.len().unwrap_or(0);
        let nb = self.grid.theta_b.len().unwrap_or(0);
        (na, nb)
    }

    pub fn at(&self, i: usize, j: usize) -> &SweepPoint {
        let (_, nb) = self.shape();
        &self.points[i * nb + j]
    }

    /// `theta_a,theta_b,concurrence,normalized_yield`, absent concurrence as
    /// an empty field.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for p in &self.points {
            w.serialize(p).map_err(|e| invalid(format!("csv write failed: {e}")))?;
        }
        w.flush().map_err(|e| invalid(format!("csv write failed: {e}")))?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

/// Figures of merit of the recipe applied to `|↓↓⟩⟨↓↓|` at every grid point.
///
/// Grid points are evaluated in parallel and assembled in row-major order.
pub fn sweep(recipe: &Recipe, grid: &GridSpec) -> Result<SweepResult> {
    let thetas_a = grid.theta_a.values()?;
    let thetas_b = grid.theta_b.values()?;
    // XA depends only on θ_A and XB only on θ_B
    let props_a: Vec<ComplexMatrix> =
        thetas_a.par_iter().map(|&a| propagator(Coupling::XA, &CouplingParams::new(a, 0.0), false)).collect();
    let props_b: Vec<ComplexMatrix> =
        thetas_b.par_iter().map(|&b| propagator(Coupling::XB, &CouplingParams::new(0.0, b), false)).collect();

    let nb = thetas_b.len();
    let points = (0..thetas_a.len() * nb)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / nb, idx % nb);
            let props = PassPropagators::from_parts(props_a[i].clone(), props_b[j].clone());
            evaluate(recipe, &props, thetas_a[i], thetas_b[j])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { recipe: *recipe, grid: *grid, points })
}

/// Figures of merit at a single parameter point.
pub fn evaluate_point(recipe: &Recipe, params: &CouplingParams) -> Result<SweepPoint> {
    params.validate()?;
    evaluate(recipe, &PassPropagators::new(params, false), params.theta_a, params.theta_b)
}

fn evaluate(recipe: &Recipe, props: &PassPropagators, theta_a: f64, theta_b: f64) -> Result<SweepPoint> {
    let v = props.pipeline(recipe);
    let image = v.column(3);
    let normalized_yield: f64 = image.iter().map(|z| z.norm_sqr()).sum();
    if normalized_yield <= DEFAULT_EPSILON_P {
        return Ok(SweepPoint { theta_a, theta_b, concurrence: None, normalized_yield: 0.0 });
    }
    let state = DensityMatrix::from_positive_unchecked(&ComplexMatrix::outer(&image, &image), normalized_yield);
    let c = concurrence(&state)?.value;
    Ok(SweepPoint { theta_a, theta_b, concurrence: Some(c), normalized_yield })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimumReport {
    pub recipe: Recipe,
    pub best_point: (f64, f64),
    pub concurrence_at_best: Option<f64>,
    pub normalized_yield_at_best: f64,
    pub simultaneous_max: bool,
}

/// Best yield among maximally entangled grid points; when there are none,
/// the point maximizing `C·P` instead. Ties go to the lexicographically
/// smallest `(θ_A, θ_B)`.
pub fn find_optimum(result: &SweepResult) -> Result<OptimumReport> {
    if result.points.is_empty() {
        return Err(invalid("cannot search an empty grid"));
    }
    let better = |best: Option<(&SweepPoint, f64)>, p: &SweepPoint, score: f64| match best {
        None => true,
        Some((b, s)) => score > s || (score == s && (p.theta_a, p.theta_b) < (b.theta_a, b.theta_b)),
    };

    let mut best: Option<(&SweepPoint, f64)> = None;
    for p in &result.points {
        if p.concurrence.is_some_and(|c| c >= 1.0 - UNIT_CONCURRENCE_TOL) && better(best, p, p.normalized_yield) {
            best = Some((p, p.normalized_yield));
        }
    }
    if best.is_none() {
        for p in &result.points {
            let score = p.concurrence.unwrap_or(0.0) * p.normalized_yield;
            if better(best, p, score) {
                best = Some((p, score));
            }
        }
    }
    let (p, _) = best.expect("grid is nonempty");
    let simultaneous_max =
        p.concurrence.is_some_and(|c| c >= 1.0 - SIMULTANEOUS_TOL) && p.normalized_yield >= 1.0 - SIMULTANEOUS_TOL;
    Ok(OptimumReport {
        recipe: result.recipe,
        best_point: (p.theta_a, p.theta_b),
        concurrence_at_best: p.concurrence,
        normalized_yield_at_best: p.normalized_yield,
        simultaneous_max,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitializationResult {
    pub state: DensityMatrix,
    pub fidelity_to_up_up: f64,
}

/// Two unconditioned transfer passes: a fresh `X` in `|↑⟩` interacts with `A`
/// alone for angle `θ_A` and is discarded, then another with `B` alone for
/// `θ_B`. At `θ = π/2` each pass swaps `|↑⟩` into its qubit.
pub fn initialization_demo(rho: &DensityMatrix, params: &CouplingParams) -> Result<InitializationResult> {
    if rho.num_qubits() != 2 {
        return Err(invalid("initialization acts on a two-qubit state"));
    }
    params.validate()?;
    let up_x = crate::linalg::pauli::proj_up();
    let mut current = rho.matrix().clone();
    for which in [Coupling::XA, Coupling::XB] {
        let u = propagator(which, params, false);
        let joint = current.tensor(&up_x);
        let evolved = &(&u * &joint) * &u.dagger();
        current = evolved.partial_trace(&[2, 2, 2], 2)?;
    }
    let trace = current.trace().re;
    let state = DensityMatrix::from_positive_unchecked(&current, trace);
    let fidelity_to_up_up = state.fidelity_pure(&basis_state(&[Spin::Up, Spin::Up])?)?;
    Ok(InitializationResult { state, fidelity_to_up_up })
}

/// `|↓↓⟩` population; the sweep's normalized yield times this is the yield
/// for a concrete input.
pub fn down_down_population(rho: &DensityMatrix) -> f64 {
    rho.population(3)
}
