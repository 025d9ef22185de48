use serde_json::{json, Value};

use qcomposite::asymptotic::{self, ConnectivityDesign, SolveFor};
use qcomposite::sim;
use qcomposite::SchemeParams;

use crate::cli::{ConnectivityCriticalArgs, ConnectivitySimulateArgs};
use crate::commands::{resolve_format, sweep_f64, sweep_u64, DEFAULT_SEED, DEFAULT_TRIALS};
use crate::config::{config_json, ConfigFile};
use crate::errors::CliError;
use crate::output::{emit, num, Table};

pub fn run_critical(args: &ConnectivityCriticalArgs) -> Result<(), CliError> {
    let file = ConfigFile::load(args.common.config.as_deref())?;
    let solve: String = file.resolve_required(args.solve.clone(), "solve")?;
    let node_count: u64 = file.resolve_required(args.node_count, "n")?;
    let captures: u64 = file.resolve(args.captures, "m", 0)?;
    let overlap: u64 = file.resolve_required(args.overlap, "q")?;
    let seed: u64 = file.resolve(args.common.seed, "seed", DEFAULT_SEED)?;
    let format = resolve_format(&args.common.format, &file)?;

    let ring = || file.resolve_required(args.key_ring_size, "K");
    let pool = || file.resolve_required(args.key_pool_size, "P");
    let radius = || file.resolve_required(args.radius, "r");
    let solve_for = match solve.as_str() {
        "K" => SolveFor::KeyRingSize {
            key_pool_size: pool()?,
            radius: radius()?,
        },
        "P" => SolveFor::KeyPoolSize {
            key_ring_size: ring()?,
            radius: radius()?,
        },
        "r" => SolveFor::Radius {
            key_ring_size: ring()?,
            key_pool_size: pool()?,
        },
        other => {
            return Err(CliError::invalid(format!(
                "unknown solve target {other:?} (expected K, P or r)"
            )))
        }
    };
    let design = ConnectivityDesign {
        node_count,
        captured: captures,
        overlap_threshold: overlap,
        solve_for,
    };
    let critical = asymptotic::critical_parameter(&design)?;

    let (k_cell, p_cell, r_cell) = match solve_for {
        SolveFor::KeyRingSize {
            key_pool_size,
            radius,
        } => (num(critical), num(key_pool_size), num(radius)),
        SolveFor::KeyPoolSize {
            key_ring_size,
            radius,
        } => (num(key_ring_size), num(critical), num(radius)),
        SolveFor::Radius {
            key_ring_size,
            key_pool_size,
        } => (num(key_ring_size), num(key_pool_size), num(critical)),
    };
    let mut table = Table::new(&["n", "m", "q", "K", "P", "r", "solved", "critical_value"]);
    table.push(vec![
        json!(node_count),
        json!(captures),
        json!(overlap),
        k_cell,
        p_cell,
        r_cell,
        json!(solve),
        num(critical),
    ]);
    let config = config_json(
        "connectivity critical",
        format.name(),
        vec![
            ("n", json!(node_count)),
            ("m", json!(captures)),
            ("q", json!(overlap)),
            ("solve", json!(solve)),
            ("seed", json!(seed)),
        ],
    );
    emit(
        args.common.out.as_deref(),
        "connectivity-critical",
        format,
        &config,
        &table,
    )
}

pub fn run_simulate(args: &ConnectivitySimulateArgs) -> Result<(), CliError> {
    let file = ConfigFile::load(args.common.config.as_deref())?;
    let sweep: String = file.resolve_required(args.sweep.clone(), "sweep")?;
    let from: f64 = file.resolve_required(args.from, "from")?;
    let to: f64 = file.resolve_required(args.to, "to")?;
    let steps: u64 = file.resolve(args.steps, "steps", 10)?;
    let node_count: u64 = file.resolve_required(args.node_count, "n")?;
    let overlap: u64 = file.resolve_required(args.overlap, "q")?;
    let captures: u64 = file.resolve(args.captures, "m", 0)?;
    let trials: u64 = file.resolve(args.common.trials, "trials", DEFAULT_TRIALS)?;
    let seed: u64 = file.resolve(args.common.seed, "seed", DEFAULT_SEED)?;
    let format = resolve_format(&args.common.format, &file)?;

    // the swept parameter may omit its fixed flag
    let fixed_ring = file.resolve(args.key_ring_size, "K", 0)?;
    let fixed_pool = file.resolve(args.key_pool_size, "P", 0)?;
    let fixed_radius = file.resolve(args.radius, "r", f64::NAN)?;
    let require_fixed_u64 = |value: u64, name: &str| -> Result<u64, CliError> {
        if value == 0 {
            Err(CliError::invalid(format!("missing required parameter --{name}")))
        } else {
            Ok(value)
        }
    };
    let require_fixed_radius = || -> Result<f64, CliError> {
        if fixed_radius.is_nan() {
            Err(CliError::invalid("missing required parameter --r"))
        } else {
            Ok(fixed_radius)
        }
    };

    struct Point {
        ring: u64,
        pool: u64,
        radius: f64,
        captures: u64,
        swept: Value,
    }
    let points: Vec<Point> = match sweep.as_str() {
        "K" => {
            let pool = require_fixed_u64(fixed_pool, "P")?;
            let radius = require_fixed_radius()?;
            sweep_u64(from as u64, to as u64, steps)?
                .into_iter()
                .map(|k| Point {
                    ring: k,
                    pool,
                    radius,
                    captures,
                    swept: json!(k),
                })
                .collect()
        }
        "P" => {
            let ring = require_fixed_u64(fixed_ring, "K")?;
            let radius = require_fixed_radius()?;
            sweep_u64(from as u64, to as u64, steps)?
                .into_iter()
                .map(|p| Point {
                    ring,
                    pool: p,
                    radius,
                    captures,
                    swept: json!(p),
                })
                .collect()
        }
        "r" => {
            let ring = require_fixed_u64(fixed_ring, "K")?;
            let pool = require_fixed_u64(fixed_pool, "P")?;
            sweep_f64(from, to, steps)?
                .into_iter()
                .map(|r| Point {
                    ring,
                    pool,
                    radius: r,
                    captures,
                    swept: num(r),
                })
                .collect()
        }
        "m" => {
            let ring = require_fixed_u64(fixed_ring, "K")?;
            let pool = require_fixed_u64(fixed_pool, "P")?;
            let radius = require_fixed_radius()?;
            sweep_u64(from as u64, to as u64, steps)?
                .into_iter()
                .map(|m| Point {
                    ring,
                    pool,
                    radius,
                    captures: m,
                    swept: json!(m),
                })
                .collect()
        }
        other => {
            return Err(CliError::invalid(format!(
                "unknown sweep parameter {other:?} (expected K, P, r or m)"
            )))
        }
    };

    // analytic critical value of the swept parameter for the header
    let critical_value = critical_of_sweep(
        &sweep, node_count, captures, overlap, fixed_ring, fixed_pool, fixed_radius,
    );

    let mut table = Table::new(&[&sweep, "connectivity", "std_error"]);
    for point in &points {
        let params = SchemeParams::new(point.ring, point.pool, overlap)?
            .with_node_count(node_count)?;
        let estimate =
            sim::estimate_connectivity(&params, point.radius, trials, seed, point.captures)?;
        table.push(vec![
            point.swept.clone(),
            num(estimate.point_estimate),
            num(estimate.standard_error),
        ]);
    }

    let config = config_json(
        "connectivity simulate",
        format.name(),
        vec![
            ("sweep", json!(sweep)),
            ("from", num(from)),
            ("to", num(to)),
            ("steps", json!(steps)),
            ("n", json!(node_count)),
            ("K", json!(fixed_ring)),
            ("P", json!(fixed_pool)),
            ("q", json!(overlap)),
            ("r", num(fixed_radius)),
            ("m", json!(captures)),
            ("trials", json!(trials)),
            ("seed", json!(seed)),
            ("rng", json!(sim::RNG_ALGORITHM)),
            ("critical_value", critical_value),
        ],
    );
    emit(
        args.common.out.as_deref(),
        "connectivity-simulate",
        format,
        &config,
        &table,
    )
}

fn critical_of_sweep(
    sweep: &str,
    node_count: u64,
    captures: u64,
    overlap: u64,
    ring: u64,
    pool: u64,
    radius: f64,
) -> Value {
    let design = |solve_for| ConnectivityDesign {
        node_count,
        captured: captures,
        overlap_threshold: overlap,
        solve_for,
    };
    let solved = match sweep {
        "K" if pool > 0 && radius.is_finite() => {
            asymptotic::critical_parameter(&design(SolveFor::KeyRingSize {
                key_pool_size: pool as f64,
                radius,
            }))
            .ok()
        }
        "P" if ring > 0 && radius.is_finite() => {
            asymptotic::critical_parameter(&design(SolveFor::KeyPoolSize {
                key_ring_size: ring as f64,
                radius,
            }))
            .ok()
        }
        "r" if ring > 0 && pool > 0 => {
            asymptotic::critical_parameter(&design(SolveFor::Radius {
                key_ring_size: ring as f64,
                key_pool_size: pool as f64,
            }))
            .ok()
        }
        "m" if ring > 0 && pool > 0 && radius.is_finite() => asymptotic::critical_capture_count(
            node_count,
            ring as f64,
            pool as f64,
            radius,
            overlap,
        ),
        _ => None,
    };
    solved.map(num).unwrap_or(Value::Null)
}
