use serde_json::json;

use qcomposite::replication::{self, ReplicationSpec};
use qcomposite::sim::{self, CompromiseOptions, NeighborModel};
use qcomposite::SchemeParams;

use crate::cli::{SimulateCompromiseArgs, SimulateReplicationArgs};
use crate::commands::{
    resolve_flag, resolve_format, sweep_u64, WarningSink, DEFAULT_SEED, DEFAULT_TRIALS,
};
use crate::config::{config_json, ConfigFile};
use crate::errors::CliError;
use crate::output::{emit, num, Table};

pub fn run_compromise(args: &SimulateCompromiseArgs) -> Result<(), CliError> {
    let file = ConfigFile::load(args.common.config.as_deref())?;
    let node_count: u64 = file.resolve_required(args.node_count, "n")?;
    let ring: u64 = file.resolve_required(args.key_ring_size, "K")?;
    let pool: u64 = file.resolve_required(args.key_pool_size, "P")?;
    let overlap: u64 = file.resolve_required(args.overlap, "q")?;
    let captures: u64 = file.resolve_required(args.captures, "m")?;
    let hardened = resolve_flag(args.hardened, &file, "hardened")?;
    let radius: f64 = file.resolve(args.radius, "radius", f64::NAN)?;
    let trials: u64 = file.resolve(args.common.trials, "trials", DEFAULT_TRIALS)?;
    let seed: u64 = file.resolve(args.common.seed, "seed", DEFAULT_SEED)?;
    let format = resolve_format(&args.common.format, &file)?;

    let params = SchemeParams::new(ring, pool, overlap)?.with_node_count(node_count)?;
    let options = CompromiseOptions {
        hardened,
        geometric_radius: radius.is_finite().then_some(radius),
    };
    let estimate = sim::estimate_compromise(&params, captures, trials, seed, options)?;

    let mut table = Table::new(&[
        "m",
        "compromised_fraction",
        "std_error",
        "effective_pairs",
        "degenerate",
    ]);
    table.push(vec![
        json!(captures),
        num(estimate.point_estimate),
        num(estimate.standard_error),
        json!(estimate.effective_samples),
        json!(estimate.is_degenerate()),
    ]);
    let config = config_json(
        "simulate compromise",
        format.name(),
        vec![
            ("n", json!(node_count)),
            ("K", json!(ring)),
            ("P", json!(pool)),
            ("q", json!(overlap)),
            ("m", json!(captures)),
            ("hardened", json!(hardened)),
            ("radius", num(radius)),
            ("trials", json!(trials)),
            ("seed", json!(seed)),
            ("rng", json!(sim::RNG_ALGORITHM)),
        ],
    );
    emit(
        args.common.out.as_deref(),
        "simulate-compromise",
        format,
        &config,
        &table,
    )
}

pub fn run_replication(args: &SimulateReplicationArgs) -> Result<(), CliError> {
    let file = ConfigFile::load(args.common.config.as_deref())?;
    let ring: u64 = file.resolve_required(args.key_ring_size, "K")?;
    let pool: u64 = file.resolve_required(args.key_pool_size, "P")?;
    let overlap: u64 = file.resolve_required(args.overlap, "q")?;
    let payload: u64 = file.resolve_required(args.payload, "b")?;
    let replicas: u64 = file.resolve_required(args.replicas, "c")?;
    let density: u64 = file.resolve(args.density, "d", 1)?;
    let poisson = resolve_flag(args.poisson, &file, "poisson")?;
    let sweep: Option<String> = match &args.sweep {
        Some(s) => Some(s.clone()),
        None => file.resolve(None, "sweep", String::new()).map(|s| {
            if s.is_empty() {
                None
            } else {
                Some(s)
            }
        })?,
    };
    let trials: u64 = file.resolve(args.common.trials, "trials", DEFAULT_TRIALS)?;
    let seed: u64 = file.resolve(args.common.seed, "seed", DEFAULT_SEED)?;
    let format = resolve_format(&args.common.format, &file)?;

    let neighbors = if poisson {
        NeighborModel::Poisson
    } else {
        NeighborModel::Fixed
    };

    // rows of (b, c) to evaluate
    let rows: Vec<(u64, u64)> = match sweep.as_deref() {
        None => vec![(payload, replicas)],
        Some("c") => {
            let from: u64 = file.resolve_required(args.from, "from")?;
            let to: u64 = file.resolve_required(args.to, "to")?;
            let steps: u64 = file.resolve(args.steps, "steps", 10)?;
            sweep_u64(from, to, steps)?
                .into_iter()
                .map(|c| (payload, c))
                .collect()
        }
        Some("b") => {
            let from: u64 = file.resolve_required(args.from, "from")?;
            let to: u64 = file.resolve_required(args.to, "to")?;
            let steps: u64 = file.resolve(args.steps, "steps", 10)?;
            sweep_u64(from, to, steps)?
                .into_iter()
                .map(|b| (b, replicas))
                .collect()
        }
        Some(other) => {
            return Err(CliError::invalid(format!(
                "unknown sweep parameter {other:?} (expected b or c)"
            )))
        }
    };

    let mut warnings = WarningSink::default();
    let base = SchemeParams::new(ring, pool, overlap)?;
    let mut table = Table::new(&["b", "c", "d", "p_exact", "p_asym", "p_sim", "std_error"]);
    for (b, c) in rows {
        let spec = ReplicationSpec::new(base.clone(), b, c, density)?;
        let exact = replication::replication_success(&spec)?;
        let asym = warnings.absorb(replication::replication_success_asymptotic(&spec));
        let estimate =
            sim::estimate_replication(&base, b, c, density, trials, seed, neighbors)?;
        table.push(vec![
            json!(b),
            json!(c),
            json!(density),
            num(exact),
            num(asym),
            num(estimate.point_estimate),
            num(estimate.standard_error),
        ]);
    }

    let config = config_json(
        "simulate replication",
        format.name(),
        vec![
            ("K", json!(ring)),
            ("P", json!(pool)),
            ("q", json!(overlap)),
            ("b", json!(payload)),
            ("c", json!(replicas)),
            ("d", json!(density)),
            ("poisson", json!(poisson)),
            ("sweep", sweep.map(|s| json!(s)).unwrap_or(serde_json::Value::Null)),
            ("trials", json!(trials)),
            ("seed", json!(seed)),
            ("rng", json!(sim::RNG_ALGORITHM)),
        ],
    );
    emit(
        args.common.out.as_deref(),
        "simulate-replication",
        format,
        &config,
        &table,
    )?;
    warnings.flush();
    Ok(())
}
