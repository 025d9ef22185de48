//! The fixed-p_s resilience table: one row per (q, m) with the solved
//! pool size and the exact (optionally historical and asymptotic)
//! link-compromise probability; the best q per capture count is marked.

use serde_json::{json, Value};

use qcomposite::asymptotic;
use qcomposite::exact;
use qcomposite::{ExactProbability, SchemeParams};

use crate::cli::ResilienceArgs;
use crate::commands::{resolve_flag, resolve_format, WarningSink, DEFAULT_SEED};
use crate::config::{config_json, parse_u64_list, ConfigFile};
use crate::errors::CliError;
use crate::output::{emit, num, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoolSolve {
    Exact,
    Asymptotic,
}

impl PoolSolve {
    fn parse(name: &str) -> Result<PoolSolve, CliError> {
        match name {
            "exact" => Ok(PoolSolve::Exact),
            "asymptotic" => Ok(PoolSolve::Asymptotic),
            other => Err(CliError::invalid(format!(
                "unknown pool-solve mode {other:?} (expected exact or asymptotic)"
            ))),
        }
    }

    fn name(self) -> &'static str {
        match self {
            PoolSolve::Exact => "exact",
            PoolSolve::Asymptotic => "asymptotic",
        }
    }

    pub fn solve(self, key_ring_size: u64, q: u64, target_ps: f64) -> Result<u64, CliError> {
        Ok(match self {
            PoolSolve::Exact => exact::find_pool_size(key_ring_size, q, target_ps)?,
            PoolSolve::Asymptotic => {
                asymptotic::pool_size_asymptotic(key_ring_size, q, target_ps)?
            }
        })
    }
}

pub fn run(args: &ResilienceArgs) -> Result<(), CliError> {
    let file = ConfigFile::load(args.common.config.as_deref())?;
    let key_ring_size: u64 = file.resolve_required(args.key_ring_size, "K")?;
    let target_ps: f64 = file.resolve_required(args.ps, "ps")?;
    let captures_raw: String = file.resolve_required(args.captures.clone(), "m")?;
    let captures = parse_u64_list(&captures_raw)?;
    let q_min: u64 = file.resolve(args.q_min, "q-min", 1)?;
    let q_max: u64 = file.resolve(args.q_max, "q-max", 10)?;
    let with_chan = resolve_flag(args.chan, &file, "chan")?;
    let with_asym = resolve_flag(args.asym, &file, "asym")?;
    let pool_solve = PoolSolve::parse(
        &file.resolve(args.pool_solve.clone(), "pool-solve", "exact".to_string())?,
    )?;
    let seed: u64 = file.resolve(args.common.seed, "seed", DEFAULT_SEED)?;
    let format = resolve_format(&args.common.format, &file)?;

    if captures.is_empty() || captures.contains(&0) {
        return Err(CliError::invalid(
            "capture counts must be positive (the compromise metric conditions on captures)",
        ));
    }
    if q_min < 1 || q_min > q_max || q_max > key_ring_size {
        return Err(CliError::invalid(format!(
            "need 1 <= q-min <= q-max <= K, got {q_min}..{q_max} with K={key_ring_size}"
        )));
    }

    let mut warnings = WarningSink::default();
    let table = build_table(
        key_ring_size,
        target_ps,
        &captures,
        q_min..=q_max,
        with_chan,
        with_asym,
        pool_solve,
        &mut warnings,
    )?;

    let config = config_json(
        "resilience",
        format.name(),
        vec![
            ("K", json!(key_ring_size)),
            ("ps", json!(target_ps)),
            ("m", json!(captures)),
            ("q-min", json!(q_min)),
            ("q-max", json!(q_max)),
            ("chan", json!(with_chan)),
            ("asym", json!(with_asym)),
            ("pool-solve", json!(pool_solve.name())),
            ("seed", json!(seed)),
        ],
    );
    emit(args.common.out.as_deref(), "resilience", format, &config, &table)?;
    warnings.flush();
    Ok(())
}

/// The fixed-p_s table itself; also used by the figure presets.
#[allow(clippy::too_many_arguments)]
pub fn build_table(
    key_ring_size: u64,
    target_ps: f64,
    captures: &[u64],
    q_range: std::ops::RangeInclusive<u64>,
    with_chan: bool,
    with_asym: bool,
    pool_solve: PoolSolve,
    warnings: &mut WarningSink,
) -> Result<Table, CliError> {
    let qs: Vec<u64> = q_range.collect();
    let mut pools = Vec::with_capacity(qs.len());
    for &q in &qs {
        pools.push(pool_solve.solve(key_ring_size, q, target_ps)?);
    }

    struct Row {
        q: u64,
        pool: u64,
        exact: ExactProbability,
        chan: Option<f64>,
        asym: Option<f64>,
    }
    let mut columns = vec!["q", "m", "P", "p_exact"];
    if with_chan {
        columns.push("p_chan");
    }
    if with_asym {
        columns.push("p_asym");
    }
    columns.push("min_for_m");
    let mut table = Table::new(&columns);

    for &m in captures {
        let mut rows = Vec::with_capacity(qs.len());
        for (&q, &pool) in qs.iter().zip(&pools) {
            let params = SchemeParams::new(key_ring_size, pool, q)?;
            let exact_value = exact::compromise_probability_exact(&params, m)?;
            let chan = with_chan
                .then(|| exact::compromise_probability_chan(&params, m).map(|p| p.as_f64()))
                .transpose()?;
            let asym = with_asym.then(|| {
                warnings.absorb(asymptotic::compromise_asymptotic(
                    m,
                    key_ring_size,
                    pool,
                    q,
                ))
            });
            rows.push(Row {
                q,
                pool,
                exact: exact_value,
                chan,
                asym,
            });
        }
        let best_q = rows
            .iter()
            .min_by(|a, b| a.exact.cmp(&b.exact))
            .map(|row| row.q)
            .expect("non-empty q range");
        for row in rows {
            let mut cells = vec![
                json!(row.q),
                json!(m),
                json!(row.pool),
                num(row.exact.as_f64()),
            ];
            if with_chan {
                cells.push(row.chan.map(num).unwrap_or(Value::Null));
            }
            if with_asym {
                cells.push(row.asym.map(num).unwrap_or(Value::Null));
            }
            cells.push(json!(row.q == best_q));
            table.push(cells);
        }
    }
    Ok(table)
}
