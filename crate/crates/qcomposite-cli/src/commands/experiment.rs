//! Canned experiments. Each preset picks representative in-capacity
//! parameters, records them in the output config, and emits plot data.

use serde_json::{json, Value};

use qcomposite::asymptotic::{self, ConnectivityDesign, SolveFor};
use qcomposite::replication::{self, ReplicationSpec};
use qcomposite::sim::{self, NeighborModel};
use qcomposite::SchemeParams;

use crate::cli::ExperimentArgs;
use crate::commands::resilience::{build_table, PoolSolve};
use crate::commands::{resolve_format, sweep_u64, WarningSink, DEFAULT_SEED, DEFAULT_TRIALS};
use crate::config::{config_json, ConfigFile};
use crate::errors::CliError;
use crate::output::{emit, num, Table};

pub fn run(args: &ExperimentArgs) -> Result<(), CliError> {
    let file = ConfigFile::load(args.common.config.as_deref())?;
    let seed: u64 = file.resolve(args.common.seed, "seed", DEFAULT_SEED)?;
    let trials: u64 = file.resolve(args.common.trials, "trials", DEFAULT_TRIALS)?;
    let format = resolve_format(&args.common.format, &file)?;

    let mut warnings = WarningSink::default();
    let (entries, table) = match args.preset.as_str() {
        "fig2" => fixed_ps_curves(0.05, &mut warnings)?,
        "fig3" => fixed_ps_curves(0.1, &mut warnings)?,
        "fig-connectivity-K" => connectivity_sweep(SweepKind::Ring, trials, seed)?,
        "fig-connectivity-P" => connectivity_sweep(SweepKind::Pool, trials, seed)?,
        "fig-connectivity-r" => connectivity_sweep(SweepKind::Radius, trials, seed)?,
        "fig-capture" => connectivity_sweep(SweepKind::Captures, trials, seed)?,
        "fig8" => replication_curves(trials, seed, &mut warnings)?,
        "table1" => threshold_table()?,
        "table2-ratio" => ratio_table()?,
        other => {
            return Err(CliError::invalid(format!(
                "unknown preset {other:?} (see --help for the list)"
            )))
        }
    };

    let mut all_entries = entries;
    all_entries.push(("preset", json!(args.preset)));
    all_entries.push(("seed", json!(seed)));
    let config = config_json(
        &format!("experiment {}", args.preset),
        format.name(),
        all_entries,
    );
    emit(
        args.common.out.as_deref(),
        &args.preset,
        format,
        &config,
        &table,
    )?;
    warnings.flush();
    Ok(())
}

/// Exact compromise against q at fixed K and p_s, with the historical
/// and asymptotic columns for comparison.
fn fixed_ps_curves(
    target_ps: f64,
    warnings: &mut WarningSink,
) -> Result<(Vec<(&'static str, Value)>, Table), CliError> {
    let captures = [10u64, 20, 40];
    let table = build_table(
        40,
        target_ps,
        &captures,
        1..=10,
        true,
        true,
        PoolSolve::Exact,
        warnings,
    )?;
    Ok((
        vec![
            ("K", json!(40)),
            ("ps", num(target_ps)),
            ("m", json!(captures)),
            ("q-min", json!(1)),
            ("q-max", json!(10)),
            ("pool-solve", json!("exact")),
        ],
        table,
    ))
}

#[derive(Clone, Copy)]
enum SweepKind {
    Ring,
    Pool,
    Radius,
    Captures,
}

/// Connectivity probability across one swept parameter at n = 1000,
/// with the analytic critical value recorded alongside.
fn connectivity_sweep(
    kind: SweepKind,
    trials: u64,
    seed: u64,
) -> Result<(Vec<(&'static str, Value)>, Table), CliError> {
    let node_count = 1000u64;
    let overlap = 1u64;
    let (ring, pool, radius, captures) = (30u64, 10_000u64, 0.15f64, 0u64);
    let design = |solve_for| ConnectivityDesign {
        node_count,
        captured: captures,
        overlap_threshold: overlap,
        solve_for,
    };

    let (name, values, critical): (&str, Vec<Value>, Value) = match kind {
        SweepKind::Ring => {
            let crit = asymptotic::critical_parameter(&design(SolveFor::KeyRingSize {
                key_pool_size: pool as f64,
                radius,
            }))?;
            let vals = sweep_u64(10, 60, 11)?.into_iter().map(|v| json!(v)).collect();
            ("K", vals, num(crit))
        }
        SweepKind::Pool => {
            let crit = asymptotic::critical_parameter(&design(SolveFor::KeyPoolSize {
                key_ring_size: ring as f64,
                radius,
            }))?;
            let vals = sweep_u64(2_000, 20_000, 10)?
                .into_iter()
                .map(|v| json!(v))
                .collect();
            ("P", vals, num(crit))
        }
        SweepKind::Radius => {
            let crit = asymptotic::critical_parameter(&design(SolveFor::Radius {
                key_ring_size: ring as f64,
                key_pool_size: pool as f64,
            }))?;
            let vals = (0..11)
                .map(|i| num(0.05 + 0.025 * i as f64))
                .collect();
            ("r", vals, num(crit))
        }
        SweepKind::Captures => {
            // wider radius so mid-size capture counts cross the threshold
            let crit = asymptotic::critical_capture_count(
                node_count,
                ring as f64,
                pool as f64,
                0.25,
                overlap,
            );
            let vals = sweep_u64(0, 600, 7)?.into_iter().map(|v| json!(v)).collect();
            ("m", vals, crit.map(num).unwrap_or(Value::Null))
        }
    };

    let fixed_radius = match kind {
        SweepKind::Captures => 0.25,
        _ => radius,
    };
    let mut table = Table::new(&[name, "connectivity", "std_error"]);
    for value in &values {
        let (k, p, r, m) = match kind {
            SweepKind::Ring => (value.as_u64().unwrap(), pool, fixed_radius, captures),
            SweepKind::Pool => (ring, value.as_u64().unwrap(), fixed_radius, captures),
            SweepKind::Radius => (ring, pool, value.as_f64().unwrap(), captures),
            SweepKind::Captures => (ring, pool, fixed_radius, value.as_u64().unwrap()),
        };
        let params = SchemeParams::new(k, p, overlap)?.with_node_count(node_count)?;
        let estimate = sim::estimate_connectivity(&params, r, trials, seed, m)?;
        table.push(vec![
            value.clone(),
            num(estimate.point_estimate),
            num(estimate.standard_error),
        ]);
    }
    Ok((
        vec![
            ("n", json!(node_count)),
            ("K", json!(ring)),
            ("P", json!(pool)),
            ("q", json!(overlap)),
            ("r", num(fixed_radius)),
            ("m", json!(captures)),
            ("trials", json!(trials)),
            ("rng", json!(sim::RNG_ALGORITHM)),
            ("critical_value", critical),
        ],
        table,
    ))
}

/// Replication-attack success against the replica count (parts a, b)
/// and against the payload size (parts c, d): exact, asymptotic and
/// simulated columns.
fn replication_curves(
    trials: u64,
    seed: u64,
    warnings: &mut WarningSink,
) -> Result<(Vec<(&'static str, Value)>, Table), CliError> {
    let (ring, pool) = (40u64, 40_000u64);
    let mut table = Table::new(&[
        "part", "q", "b", "c", "d", "p_exact", "p_asym", "p_sim", "std_error",
    ]);
    let mut add_row = |part: &str, q: u64, b: u64, c: u64, d: u64| -> Result<(), CliError> {
        let params = SchemeParams::new(ring, pool, q)?;
        let spec = ReplicationSpec::new(params.clone(), b, c, d)?;
        let exact = replication::replication_success(&spec)?;
        let asym = warnings.absorb(replication::replication_success_asymptotic(&spec));
        let estimate =
            sim::estimate_replication(&params, b, c, d, trials, seed, NeighborModel::Fixed)?;
        table.push(vec![
            json!(part),
            json!(q),
            json!(b),
            json!(c),
            json!(d),
            num(exact),
            num(asym),
            num(estimate.point_estimate),
            num(estimate.standard_error),
        ]);
        Ok(())
    };

    let c_values = [1u64, 2, 4, 8, 16, 32, 64];
    for (part, density) in [("a", 1u64), ("b", 8)] {
        for q in [1u64, 3] {
            for b in [100u64, 200] {
                for &c in &c_values {
                    add_row(part, q, b, c, density)?;
                }
            }
        }
    }
    let b_values = [50u64, 100, 150, 200, 250, 300];
    for (part, replicas) in [("c", 10u64), ("d", 1)] {
        for q in [1u64, 2, 3] {
            for &b in &b_values {
                add_row(part, q, b, replicas, 1)?;
            }
        }
    }
    Ok((
        vec![
            ("K", json!(ring)),
            ("P", json!(pool)),
            ("trials", json!(trials)),
            ("rng", json!(sim::RNG_ALGORITHM)),
        ],
        table,
    ))
}

/// Crossover ratios between neighboring preferred thresholds, with the
/// published rounded endpoints for comparison.
fn threshold_table() -> Result<(Vec<(&'static str, Value)>, Table), CliError> {
    let published = [0.5, 0.222, 0.094, 0.038, 0.016, 0.0053, 0.0023, 0.0009];
    let mut table = Table::new(&[
        "q",
        "boundary_analytic",
        "boundary_published",
        "q_sharp_at_midpoint",
    ]);
    for q in 1..=8u64 {
        let analytic = asymptotic::q_sharp_boundary(q);
        let printed = published[q as usize - 1];
        // interior point of the interval [boundary(q), boundary(q-1))
        let upper = if q == 1 {
            1.0
        } else {
            asymptotic::q_sharp_boundary(q - 1)
        };
        let midpoint = 0.5 * (analytic + upper);
        let adversary = asymptotic::BudgetAdversary::new(midpoint.min(1.0), 1.0, 64).unwrap();
        let q_sharp = asymptotic::optimal_q_given_target(&adversary, asymptotic::DEFAULT_Q_MAX);
        table.push(vec![
            json!(q),
            num(analytic),
            num(printed),
            json!(q_sharp),
        ]);
    }
    Ok((vec![("q-max", json!(8))], table))
}

/// Replica-count ratio law: halving the payload multiplies the replicas
/// needed by about 2^q.
fn ratio_table() -> Result<(Vec<(&'static str, Value)>, Table), CliError> {
    let (ring, pool, payload, density) = (10u64, 30_000u64, 30u64, 1u64);
    let mut table = Table::new(&[
        "q",
        "target",
        "b",
        "c_at_b",
        "c_at_2b",
        "ratio",
        "two_pow_q",
    ]);
    for q in 1..=3u64 {
        let params = SchemeParams::new(ring, pool, q)?;
        for target in [0.5f64, 0.9] {
            let c_b = replication::min_replicas(target, payload, density, &params)?;
            let c_2b = replication::min_replicas(target, 2 * payload, density, &params)?;
            table.push(vec![
                json!(q),
                num(target),
                json!(payload),
                json!(c_b),
                json!(c_2b),
                num(c_b as f64 / c_2b as f64),
                json!(1u64 << q),
            ]);
        }
    }
    Ok((
        vec![
            ("K", json!(ring)),
            ("P", json!(pool)),
            ("b", json!(payload)),
            ("d", json!(density)),
        ],
        table,
    ))
}

