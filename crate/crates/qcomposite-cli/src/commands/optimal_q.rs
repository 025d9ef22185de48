use serde_json::json;

use qcomposite::asymptotic::{self, BudgetAdversary, DEFAULT_Q_MAX};

use crate::cli::{OptimalQBudgetArgs, OptimalQCaptureArgs};
use crate::commands::{resolve_format, DEFAULT_SEED};
use crate::config::{config_json, ConfigFile};
use crate::errors::CliError;
use crate::output::{emit, num, Table};

pub fn run_capture(args: &OptimalQCaptureArgs) -> Result<(), CliError> {
    let file = ConfigFile::load(args.common.config.as_deref())?;
    let key_ring_size: u64 = file.resolve_required(args.key_ring_size, "K")?;
    let captures: u64 = file.resolve_required(args.captures, "m")?;
    let seed: u64 = file.resolve(args.common.seed, "seed", DEFAULT_SEED)?;
    let format = resolve_format(&args.common.format, &file)?;
    if key_ring_size < 1 || captures < 1 {
        return Err(CliError::invalid("K and m must be at least 1"));
    }

    let best = asymptotic::optimal_q_given_captures(key_ring_size, captures);
    let ratio = asymptotic::compromise_ratio_asymptotic(captures, key_ring_size, best.q);

    let mut table = Table::new(&["K", "m", "q_star", "tie", "compromise_ratio_at_q_star"]);
    table.push(vec![
        json!(key_ring_size),
        json!(captures),
        json!(best.q),
        json!(best.tie),
        num(ratio),
    ]);
    let config = config_json(
        "optimal-q capture",
        format.name(),
        vec![
            ("K", json!(key_ring_size)),
            ("m", json!(captures)),
            ("seed", json!(seed)),
        ],
    );
    emit(
        args.common.out.as_deref(),
        "optimal-q-capture",
        format,
        &config,
        &table,
    )
}

pub fn run_budget(args: &OptimalQBudgetArgs) -> Result<(), CliError> {
    let file = ConfigFile::load(args.common.config.as_deref())?;
    let key_ring_size: u64 = file.resolve_required(args.key_ring_size, "K")?;
    let link_probability: f64 = file.resolve_required(args.ps, "ps")?;
    let target: f64 = file.resolve_required(args.pcomp, "pcomp")?;
    let q_max: u64 = file.resolve(args.q_max, "q-max", DEFAULT_Q_MAX)?;
    let seed: u64 = file.resolve(args.common.seed, "seed", DEFAULT_SEED)?;
    let format = resolve_format(&args.common.format, &file)?;

    let adversary = BudgetAdversary::new(target, link_probability, key_ring_size)?;
    let q_sharp = asymptotic::optimal_q_given_target(&adversary, q_max);
    let needed = asymptotic::required_captures(&adversary, q_sharp);

    let mut table = Table::new(&[
        "K",
        "ps",
        "pcomp",
        "ratio",
        "q_sharp",
        "required_captures",
    ]);
    table.push(vec![
        json!(key_ring_size),
        num(link_probability),
        num(target),
        num(adversary.ratio()),
        json!(q_sharp),
        num(needed),
    ]);
    let config = config_json(
        "optimal-q budget",
        format.name(),
        vec![
            ("K", json!(key_ring_size)),
            ("ps", json!(link_probability)),
            ("pcomp", json!(target)),
            ("q-max", json!(q_max)),
            ("seed", json!(seed)),
        ],
    );
    emit(
        args.common.out.as_deref(),
        "optimal-q-budget",
        format,
        &config,
        &table,
    )
}
