//! Parsers for the textual flag values: angles, grids, recipes and states.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use mediator_core::process::ProcessSpec;
use mediator_core::{
    basis_state, maximally_mixed, random_density, Axis, DensityMatrix, Direction, GridSpec, Recipe, Spin,
};

/// A number with an optional `pi` suffix: `0.5`, `0.25pi`, `pi`, `-pi`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let value = match t.strip_suffix("pi").or_else(|| t.strip_suffix('π')) {
        Some(coef) => {
            let coef = coef.trim().trim_end_matches('*');
            let k = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|e| format!("bad angle {s:?}: {e}"))?,
            };
            k * PI
        }
        None => t.parse::<f64>().map_err(|e| format!("bad angle {s:?}: {e}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("angle {s:?} is not finite"))
    }
}

/// `start:stop:step` or a single angle.
pub fn parse_axis(s: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let axis = match parts.as_slice() {
        [single] => Axis::single(parse_angle(single)?),
        [start, stop, step] => Axis::new(parse_angle(start)?, parse_angle(stop)?, parse_angle(step)?),
        _ => return Err(format!("axis {s:?} is neither a value nor start:stop:step")),
    };
    axis.len().map_err(|e| e.to_string())?;
    Ok(axis)
}

/// One axis for both angles, or `θ_A-axis,θ_B-axis`.
pub fn parse_grid(s: &str) -> Result<GridSpec, String> {
    match s.split_once(',') {
        Some((a, b)) => Ok(GridSpec { theta_a: parse_axis(a)?, theta_b: parse_axis(b)? }),
        None => Ok(GridSpec::square(parse_axis(s)?)),
    }
}

/// `fig2`, three direction letters such as `rlr`, or a JSON file holding a
/// list of three passes.
pub fn parse_recipe(s: &str) -> Result<Recipe, String> {
    let lower = s.to_ascii_lowercase();
    if lower == "fig2" || lower == "optimal" {
        return Ok(Recipe::optimal());
    }
    if lower.len() == 3 && lower.chars().all(|c| c == 'r' || c == 'l') {
        let dirs: Vec<Direction> =
            lower.chars().map(|c| if c == 'r' { Direction::Rightward } else { Direction::Leftward }).collect();
        return Ok(Recipe::new([
            ProcessSpec::new(dirs[0], Spin::Up, Spin::Down),
            ProcessSpec::new(dirs[1], Spin::Up, Spin::Down),
            ProcessSpec::new(dirs[2], Spin::Down, Spin::Up),
        ]));
    }
    let text = read(s)?;
    serde_json::from_str(&text).map_err(|e| format!("recipe file {s}: {e}"))
}

/// `maximally-mixed`, `basis:<labels>`, `random:<seed>` or a JSON file.
pub fn parse_state(s: &str) -> Result<DensityMatrix, String> {
    if s == "maximally-mixed" {
        return maximally_mixed(2).map_err(|e| e.to_string());
    }
    if let Some(labels) = s.strip_prefix("basis:") {
        let spins = Spin::parse_labels(labels).map_err(|e| e.to_string())?;
        if spins.len() != 2 {
            return Err(format!("basis state needs two labels, got {}", spins.len()));
        }
        return basis_state(&spins).map(|psi| psi.projector()).map_err(|e| e.to_string());
    }
    if let Some(seed) = s.strip_prefix("random:") {
        let seed: u64 = seed.parse().map_err(|e| format!("bad seed {seed:?}: {e}"))?;
        return random_density(2, seed).map_err(|e| e.to_string());
    }
    let text = read(s)?;
    let rho: DensityMatrix = serde_json::from_str(&text).map_err(|e| format!("state file {s}: {e}"))?;
    if rho.num_qubits() != 2 {
        return Err(format!("state file {s}: expected a two-qubit state"));
    }
    Ok(rho)
}

fn read(path: &str) -> Result<String, String> {
    if !Path::new(path).is_file() {
        return Err(format!("{path:?} is not a known name and no such file exists"));
    }
    fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert_eq!(parse_angle("0.25pi").unwrap(), FRAC_PI_4);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("-pi").unwrap(), -PI);
        assert!(parse_angle("abc").is_err());
        assert!(parse_angle("inf").is_err());
    }

    #[test]
    fn grids() {
        let g = parse_grid("0.25pi").unwrap();
        assert_eq!(g.theta_a.len().unwrap(), 1);
        let g = parse_grid("0.1:0.5:0.1,0.25pi").unwrap();
        assert_eq!(g.theta_a.len().unwrap(), 5);
        assert_eq!(g.theta_b.len().unwrap(), 1);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn recipes() {
        assert_eq!(parse_recipe("fig2").unwrap(), Recipe::optimal());
        assert_eq!(parse_recipe("RLR").unwrap(), Recipe::optimal());
        assert_eq!(parse_recipe("rrr").unwrap().directions(), "RRR");
        assert!(parse_recipe("rl").is_err());
    }

    #[test]
    fn states() {
        assert!((parse_state("maximally-mixed").unwrap().population(3) - 0.25).abs() < 1e-15);
        assert_eq!(parse_state("basis:dd").unwrap().population(3), 1.0);
        assert!(parse_state("basis:d").is_err());
        assert!(parse_state("random:7").is_ok());
        assert!(parse_state("random:x").is_err());
        assert!(parse_state("/no/such/file.json").is_err());
    }
}
