//! Seeded self-check suite: conservation laws, Kraus completeness, agreement
//! of the reduced and full-register routes, and the closed forms.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use serde::Serialize;

use crate::closed_form;
use crate::entanglement::{analytic_concurrence, analytic_yield_fraction, concurrence, target_state};
use crate::error::Result;
use crate::explorer::initialization_demo;
use crate::hamiltonian::{excitation_number, h_free, h_int_xa, h_int_xb, propagator, Coupling};
use crate::linalg::ComplexMatrix;
use crate::process::{
    apply_process, apply_process_with, full_space_oracle_with, kraus_operator, pipeline_operator, run_protocol,
    run_protocol_with, unconditional_channel, Direction, ProcessSpec, Recipe, SimOptions,
};
use crate::sampling::{random_params, rng_from_seed};
use crate::state::{random_density, Spin};

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random draws per check.
    pub draws: usize,
    /// Replaces every per-check tolerance when set.
    pub tolerance_override: Option<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 0, draws: 100, tolerance_override: None }
    }
}

type CheckFn = fn(&mut rand_chacha::ChaCha8Rng, usize) -> Result<f64>;

const CHECKS: &[(&str, f64, CheckFn)] = &[
    ("excitation-number conservation [N, H0+HXA+HXB]", 1e-12, check_n_commutes),
    ("free term commutes with couplings", 1e-12, check_free_commutes),
    ("propagator unitarity", 1e-10, check_unitarity),
    ("propagators conserve N", 1e-10, check_propagator_n),
    ("kraus completeness", 1e-10, check_completeness),
    ("unconditional channel trace preservation", 1e-10, check_trace_preservation),
    ("excitation bookkeeping of up-to-down passes", 1e-12, check_bookkeeping),
    ("single-pass closed forms", 1e-12, check_single_pass_forms),
    ("extraction operator closed form", 1e-12, check_pipeline_form),
    ("reduced vs full-register route", 1e-10, check_oracle),
    ("free-term invariance of probability and concurrence", 1e-10, check_free_invariance),
    ("sequential probabilities multiply", 1e-12, check_sequential),
    ("yield closed form", 1e-10, check_yield),
    ("concurrence closed form", 1e-9, check_concurrence),
    ("extracted state matches target", 1e-10, check_target),
    ("quarter-period initialization", 1e-10, check_initialization),
];

pub fn run_checks(config: &VerifyConfig) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::with_capacity(CHECKS.len());
    for (k, &(name, default_tol, check)) in CHECKS.iter().enumerate() {
        let mut rng = rng_from_seed(config.seed.wrapping_add(k as u64));
        let max_error = check(&mut rng, config.draws)?;
        let tolerance = config.tolerance_override.unwrap_or(default_tol);
        out.push(CheckOutcome { name, max_error, tolerance, passed: max_error <= tolerance });
    }
    Ok(out)
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    // NaN propagates as a failure
    it.into_iter().fold(0.0, |acc, x| if x.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(x) })
}

fn all_passes() -> impl Iterator<Item = ProcessSpec> {
    [Direction::Rightward, Direction::Leftward].into_iter().flat_map(|d| {
        [Spin::Up, Spin::Down]
            .into_iter()
            .flat_map(move |p| [Spin::Up, Spin::Down].into_iter().map(move |o| ProcessSpec::new(d, p, o)))
    })
}

fn check_n_commutes(rng: &mut rand_chacha::ChaCha8Rng, draws: usize) -> Result<f64> {
    let n = excitation_number();
    let mut errs = Vec::with_capacity(draws);
    for _ in 0..draws {
        let h = &(&h_free(rng.random_range(-5.0..5.0)) + &h_int_xa(rng.random_range(-5.0..5.0)))
            + &h_int_xb(rng.random_range(-5.0..5.0));
        errs.push(n.commutator(&h)?.max_abs());
    }
    Ok(max_of(errs))
}

fn check_free_commutes(rng: &mut rand_chacha::ChaCha8Rng, draws: usize) -> Result<f64> {
    let mut errs = Vec::with_capacity(draws);
    for _ in 0..draws {
        let h0 = h_free(rng.random_range(-5.0..5.0));
        errs.push(h0.commutator(&h_int_xa(rng.random_range(-5.0..5.0)))?.max_abs());
        errs.push(h0.commutator(&h_int_xb(rng.random_range(-5.0..5.0)))?.max_abs());
    }
    Ok(max_of(errs))
}

fn random_propagators(rng: &mut rand_chacha::ChaCha8Rng) -> Vec<ComplexMatrix> {
    let p = random_params(rng).with_omega_t(rng.random_range(-2.0 * PI..2.0 * PI));
    let mut out = Vec::with_capacity(4);
    for which in [Coupling::XA, Coupling::XB] {
        for free in [false, true] {
            out.push(propagator(which, &p, free));
        }
    }
    out
}

fn check_unitarity(rng: &mut rand_chacha::ChaCha8Rng, draws: usize) -> Result<f64> {
    Ok(max_of((0..draws).flat_map(|_| random_propagators(rng)).map(|u| u.unitarity_defect())))
}

fn check_propagator_n(rng: &mut rand_chacha::ChaCha8Rng, draws: usize) -> Result<f64> {
    let n = excitation_number();
    let mut errs = Vec::new();
    for _ in 0..draws {
        for u in random_propagators(rng) {
            errs.push(u.commutator(&n)?.max_abs());
        }
    }
    Ok(max_of(errs))
}

fn check_completeness(rng: &mut rand_chacha::ChaCha8Rng, draws: usize) -> Result<f64> {
    let id = ComplexMatrix::identity(4);
    let mut errs = Vec::new();
    for _ in 0..draws {
        let p = random_params(rng);
        for dir in [Direction::Rightward, Direction::Leftward] {
            for prep in [Spin::Up, Spin::Down] {
                let sum = [Spin::Up, Spin::Down]
                    .iter()
                    .map(|&o| {
                        let k = kraus_operator(&ProcessSpec::new(dir, prep, o), &p);
                        &k.dagger() * &k
                    })
                    .fold(ComplexMatrix::zeros(4, 4), |a, b| &a + &b);
                errs.push(sum.max_abs_diff(&id));
            }
        }
    }
    Ok(max_of(errs))
}

fn check_trace_preservation(rng: &mut rand_chacha::ChaCha8Rng, draws: usize) -> Result<f64> {
    let mut errs = Vec::new();
    for _ in 0..draws {
        let rho = random_density(2, rng.random())?;
        let p = random_params(rng);
        for dir in [Direction::Rightward, Direction::Leftward] {
            for prep in [Spin::Up, Spin::Down] {
                let out = unconditional_channel(&rho, dir, prep, &p);
                errs.push((out.trace().re - 1.0).abs().max(out.trace().im.abs()));
            }
        }
    }
    Ok(max_of(errs))
}

fn up_count(ab: usize) -> usize {
    (0..2).filter(|b| (ab >> b) & 1 == 0).count()
}

fn check_bookkeeping(rng: &mut rand_chacha::ChaCha8Rng, draws: usize) -> Result<f64> {
    let mut errs = Vec::new();
    for _ in 0..draws {
        let p = random_params(rng);
        for dir in [Direction::Rightward, Direction::Leftward] {
            let k = kraus_operator(&ProcessSpec::new(dir, Spin::Up, Spin::Down), &p);
            for i in 0..4 {
                for j in 0..4 {
                    if up_count(i) != up_count(j) + 1 {
                        errs.push(k[(i, j)].norm());
                    }
                }
            }
        }
    }
    Ok(max_of(errs))
}

fn check_single_pass_forms(rng: &mut rand_chacha::ChaCha8Rng, draws: usize) -> Result<f64> {
    let mut errs = Vec::new();
    for _ in 0..draws {
        let p = random_params(rng);
        errs.push(kraus_operator(&ProcessSpec::R_PLUS, &p).max_abs_diff(&closed_form::r_plus(&p)));
        errs.push(kraus_operator(&ProcessSpec::L_PLUS, &p).max_abs_diff(&closed_form::l_plus(&p)));
        errs.push(kraus_operator(&ProcessSpec::R_MINUS, &p).max_abs_diff(&closed_form::r_minus(&p)));
    }
    Ok(max_of(errs))
}

fn check_pipeline_form(rng: &mut rand_chacha::ChaCha8Rng, draws: usize) -> Result<f64> {
    Ok(max_of((0..draws).map(|_| {
        let p = random_params(rng);
        pipeline_operator(&Recipe::optimal(), &p).max_abs_diff(&closed_form::extraction_operator(&p))
    })))
}

fn check_oracle(rng: &mut rand_chacha::ChaCha8Rng, draws: usize) -> Result<f64> {
    let passes: Vec<ProcessSpec> = all_passes().collect();
    let mut errs = Vec::new();
    for _ in 0..draws {
        let rho = random_density(2, rng.random())?;
        let spec = passes[rng.random_range(0..passes.len())];
        let opts = SimOptions { include_free: rng.random(), ..SimOptions::default() };
        let p = random_params(rng).with_omega_t(rng.random_range(-2.0 * PI..2.0 * PI));
        let a = apply_process_with(&rho, &spec, &p, &opts)?;
        let b = full_space_oracle_with(&rho, &spec, &p, &opts)?;
        errs.push((a.probability - b.probability).abs());
        errs.push(a.state.matrix().max_abs_diff(b.state.matrix()));
    }
    Ok(max_of(errs))
}

fn check_free_invariance(rng: &mut rand_chacha::ChaCha8Rng, draws: usize) -> Result<f64> {
    let mut errs = Vec::new();
    for _ in 0..draws {
        let rho = random_density(2, rng.random())?;
        let p = random_params(rng).with_omega_t(rng.random_range(-2.0 * PI..2.0 * PI));
        let plain = run_protocol(&rho, &Recipe::optimal(), &p)?;
        let full = run_protocol_with(&rho, &Recipe::optimal(), &p, &SimOptions::full_picture())?;
        errs.push((plain.probability - full.probability).abs());
        errs.push((concurrence(&plain.state)?.value - concurrence(&full.state)?.value).abs());
        let single_plain = apply_process(&rho, &ProcessSpec::R_PLUS, &p)?;
        let single_full = apply_process_with(&rho, &ProcessSpec::R_PLUS, &p, &SimOptions::full_picture())?;
        errs.push((single_plain.probability - single_full.probability).abs());
    }
    Ok(max_of(errs))
}

fn check_sequential(rng: &mut rand_chacha::ChaCha8Rng, draws: usize) -> Result<f64> {
    let mut errs = Vec::new();
    for _ in 0..draws {
        let rho = random_density(2, rng.random())?;
        let p = random_params(rng);
        let whole = run_protocol(&rho, &Recipe::optimal(), &p)?;
        let mut state = rho;
        let mut prob = 1.0;
        for spec in Recipe::optimal().processes() {
            let step = apply_process(&state, spec, &p)?;
            prob *= step.probability;
            state = step.state;
        }
        errs.push((prob - whole.probability).abs());
    }
    Ok(max_of(errs))
}

fn check_yield(rng: &mut rand_chacha::ChaCha8Rng, draws: usize) -> Result<f64> {
    let mut errs = Vec::new();
    for _ in 0..draws {
        let rho = random_density(2, rng.random())?;
        let p = random_params(rng);
        let out = run_protocol(&rho, &Recipe::optimal(), &p)?;
        errs.push((out.probability - analytic_yield_fraction(&p) * rho.population(3)).abs());
    }
    Ok(max_of(errs))
}

fn check_concurrence(rng: &mut rand_chacha::ChaCha8Rng, draws: usize) -> Result<f64> {
    let mut errs = Vec::new();
    for _ in 0..draws {
        let rho = random_density(2, rng.random())?;
        let p = random_params(rng);
        let out = run_protocol(&rho, &Recipe::optimal(), &p)?;
        errs.push((concurrence(&out.state)?.value - analytic_concurrence(&p)?).abs());
    }
    Ok(max_of(errs))
}

fn check_target(rng: &mut rand_chacha::ChaCha8Rng, draws: usize) -> Result<f64> {
    let mut errs = Vec::new();
    for _ in 0..draws {
        let rho = random_density(2, rng.random())?;
        let p = random_params(rng);
        let out = run_protocol(&rho, &Recipe::optimal(), &p)?;
        errs.push(1.0 - out.state.fidelity_pure(&target_state(&p)?)?);
    }
    Ok(max_of(errs))
}

fn check_initialization(rng: &mut rand_chacha::ChaCha8Rng, draws: usize) -> Result<f64> {
    let p = crate::hamiltonian::CouplingParams::new(FRAC_PI_2, FRAC_PI_2);
    let mut errs = Vec::new();
    for _ in 0..draws {
        let rho = random_density(2, rng.random())?;
        errs.push(1.0 - initialization_demo(&rho, &p)?.fidelity_to_up_up);
    }
    Ok(max_of(errs))
}
