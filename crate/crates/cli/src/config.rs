//! Optional key=value config files and flag overrides for the harness
//! configuration.

use std::path::Path;

use curvidx_core::curvature::IntegralSchedule;
use curvidx_core::harness::HarnessConfig;

/// Apply a `key=value` config file (one pair per line, `#` comments) on top
/// of the given configuration.
pub fn apply_config_file(
    cfg: &mut HarnessConfig<f64>,
    path: &Path,
) -> Result<(), String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
    let mut r_level_min: u32 = r_level_of(cfg.schedule.r_values.first());
    let mut r_level_max: u32 = r_level_of(cfg.schedule.r_values.last());
    let mut schedule_touched = false;

    for (line_no, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key=value, got `{line}`", line_no + 1))?;
        let key = key.trim();
        let value = value.trim();
        let fail = |e: &dyn std::fmt::Display| format!("line {}: bad value for {key}: {e}", line_no + 1);
        match key {
            "max_n" => cfg.convergence.max_n = value.parse().map_err(|e| fail(&e))?,
            "tol" => cfg.convergence.tol = value.parse().map_err(|e| fail(&e))?,
            "window" => cfg.convergence.window = value.parse().map_err(|e| fail(&e))?,
            "accelerate" => cfg.convergence.accelerate = value.parse().map_err(|e| fail(&e))?,
            "quad_points" => {
                cfg.schedule.quad_points = value.parse().map_err(|e| fail(&e))?;
            }
            "neumann_eps" => cfg.schedule.neumann_eps = value.parse().map_err(|e| fail(&e))?,
            "r_level_min" => {
                r_level_min = value.parse().map_err(|e| fail(&e))?;
                schedule_touched = true;
            }
            "r_level_max" => {
                r_level_max = value.parse().map_err(|e| fail(&e))?;
                schedule_touched = true;
            }
            "identity_n" => cfg.identity_n = value.parse().map_err(|e| fail(&e))?,
            "identity_tol" => cfg.identity_tol = value.parse().map_err(|e| fail(&e))?,
            "theorem_tol" => cfg.theorem_tol = value.parse().map_err(|e| fail(&e))?,
            "b_constancy_tol" => cfg.b_constancy_tol = value.parse().map_err(|e| fail(&e))?,
            "purity_probes" => cfg.purity_probes = value.parse().map_err(|e| fail(&e))?,
            "purity_horizon" => cfg.purity_horizon = value.parse().map_err(|e| fail(&e))?,
            "purity_tol" => cfg.purity_tol = value.parse().map_err(|e| fail(&e))?,
            "b_probe" => cfg.b_probe = value.parse().map_err(|e| fail(&e))?,
            "emit_timings" => cfg.emit_timings = value.parse().map_err(|e| fail(&e))?,
            other => return Err(format!("line {}: unknown config key `{other}`", line_no + 1)),
        }
    }
    if schedule_touched {
        if r_level_min > r_level_max {
            return Err(format!("r_level_min {r_level_min} exceeds r_level_max {r_level_max}"));
        }
        cfg.schedule = IntegralSchedule::geometric(
            r_level_min..=r_level_max,
            cfg.schedule.quad_points,
            cfg.schedule.neumann_eps,
        );
    }
    Ok(())
}

fn r_level_of(r: Option<&f64>) -> u32 {
    // Invert r = 1 - 2^{-j}; defaults are exact powers of two.
    r.map_or(3, |&r| (-(1.0 - r).log2()).round().max(1.0) as u32)
}
