use serde_json::json;

use qcomposite::replication::{self, BudgetModel};

use crate::cli::ReplicationPlanArgs;
use crate::commands::{resolve_format, DEFAULT_SEED};
use crate::config::{config_json, ConfigFile};
use crate::errors::CliError;
use crate::output::{emit, num, Table};

pub fn run(args: &ReplicationPlanArgs) -> Result<(), CliError> {
    let file = ConfigFile::load(args.common.config.as_deref())?;
    let budget: f64 = file.resolve_required(args.budget, "budget")?;
    let exponent_b: f64 = file.resolve_required(args.pb, "pb")?;
    let exponent_c: f64 = file.resolve_required(args.pc, "pc")?;
    let overlap: u64 = file.resolve_required(args.overlap, "q")?;
    let seed: u64 = file.resolve(args.common.seed, "seed", DEFAULT_SEED)?;
    let format = resolve_format(&args.common.format, &file)?;
    if overlap < 1 {
        return Err(CliError::invalid("overlap threshold q must be at least 1"));
    }

    let model = BudgetModel::new(budget, exponent_b, exponent_c)?;
    let plan = replication::optimal_allocation(&model, overlap);
    let objective =
        (plan.keys_per_replica as f64).powi(overlap as i32) * plan.replica_count as f64;
    let cost = (plan.keys_per_replica as f64).powf(exponent_b)
        * (plan.replica_count as f64).powf(exponent_c);

    let mut table = Table::new(&[
        "budget",
        "pb",
        "pc",
        "q",
        "b",
        "c",
        "tie",
        "objective",
        "cost_used",
    ]);
    table.push(vec![
        num(budget),
        num(exponent_b),
        num(exponent_c),
        json!(overlap),
        json!(plan.keys_per_replica),
        json!(plan.replica_count),
        json!(plan.tie),
        num(objective),
        num(cost),
    ]);
    let config = config_json(
        "replication plan",
        format.name(),
        vec![
            ("budget", num(budget)),
            ("pb", num(exponent_b)),
            ("pc", num(exponent_c)),
            ("q", json!(overlap)),
            ("seed", json!(seed)),
        ],
    );
    emit(
        args.common.out.as_deref(),
        "replication-plan",
        format,
        &config,
        &table,
    )
}
