//! Benchmark grids: every combination of listed parameter values is
//! generated, solved with each requested engine, and reported as one row.
//!
//! ```toml
//! [[cell]]
//! family = "dag-chain"
//! engines = ["baseline", "accel"]
//! seeds = [0, 1]
//! [cell.params]
//! m = 4
//! depth = [10, 100, 1000]
//! width = 1
//! k = 2
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dag::{detect_positional_dag, extend_to_dag, solve_accelerated, solve_summarized};
use crate::gen::{generate, Family, Generated};
use crate::lar::{build_product, DEFAULT_BUDGET};
use crate::parity::ParityGame;
use crate::solve::{solve_baseline, solve_zielonka, SolveStats};

pub const CSV_COLUMNS: [&str; 10] = [
    "family",
    "params",
    "engine",
    "realNodes",
    "dagNodes",
    "fEvaluations",
    "attractorCost",
    "wallNanos",
    "evalRatio",
    "error",
];

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid grid: {0}")]
    Grid(#[from] toml::de::Error),
    #[error("cannot write results: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot write results: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot write results: {0}")]
    Io(#[from] std::io::Error),
}

/// Solvers available to the harness. `accel-summary` uses the closed-form
/// attractor for DAGs without `Exists` choices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BenchEngine {
    #[serde(rename = "baseline")]
    Baseline,
    #[serde(rename = "accel")]
    Accel,
    #[serde(rename = "accel-summary")]
    AccelSummary,
    #[serde(rename = "zielonka")]
    Zielonka,
}

impl fmt::Display for BenchEngine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchEngine::Baseline => "baseline",
            BenchEngine::Accel => "accel",
            BenchEngine::AccelSummary => "accel-summary",
            BenchEngine::Zielonka => "zielonka",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(u64),
    Many(Vec<u64>),
}

impl OneOrMany {
    fn values(&self) -> Vec<u64> {
        match self {
            OneOrMany::One(v) => vec![*v],
            OneOrMany::Many(vs) => vs.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridCell {
    pub family: String,
    pub engines: Vec<BenchEngine>,
    #[serde(default)]
    pub seeds: Option<OneOrMany>,
    #[serde(default)]
    pub params: BTreeMap<String, OneOrMany>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchGrid {
    #[serde(default, rename = "cell")]
    pub cells: Vec<GridCell>,
}

impl FromStr for BenchGrid {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(toml::from_str(s)?)
    }
}

/// One solver run on one instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BenchRecord {
    pub family: String,
    pub params: String,
    pub engine: String,
    pub real_nodes: Option<u64>,
    pub dag_nodes: Option<u64>,
    pub f_evaluations: Option<u64>,
    pub attractor_cost: Option<u64>,
    pub wall_nanos: Option<u64>,
    /// Baseline evaluations divided by this row's, on the same instance.
    pub eval_ratio: Option<f64>,
    pub error: Option<String>,
}

fn cartesian(params: &BTreeMap<String, OneOrMany>) -> Vec<BTreeMap<String, u64>> {
    let mut out = vec![BTreeMap::new()];
    for (name, values) in params {
        out = out
            .into_iter()
            .flat_map(|base| {
                values.values().into_iter().map(move |v| {
                    let mut m = base.clone();
                    m.insert(name.clone(), v);
                    m
                })
            })
            .collect();
    }
    out
}

fn describe(family: Option<Family>, params: &BTreeMap<String, u64>, seed: u64) -> String {
    let mut names: Vec<&str> = family.map(|f| f.params().to_vec()).unwrap_or_default();
    names.retain(|n| params.contains_key(*n));
    for k in params.keys() {
        if !names.contains(&k.as_str()) {
            names.push(k);
        }
    }
    let mut parts: Vec<String> = names.iter().map(|n| format!("{n}={}", params[*n])).collect();
    parts.push(format!("seed={seed}"));
    parts.join(" ")
}

fn instance(family: &str, params: &BTreeMap<String, u64>, seed: u64, budget: usize) -> Result<ParityGame, String> {
    let family: Family = family.parse().map_err(|e: crate::gen::GenError| e.to_string())?;
    match generate(family, params, seed).map_err(|e| e.to_string())? {
        Generated::Parity(g) => Ok(g),
        Generated::El(el) => {
            let all: Vec<usize> = (0..el.node_count()).collect();
            build_product(&el, &all, budget)
                .map(|p| p.parity().clone())
                .map_err(|e| e.to_string())
        }
    }
}

fn run_engine(game: &ParityGame, engine: BenchEngine) -> Result<(SolveStats, u64), String> {
    let start = Instant::now();
    let stats = match engine {
        BenchEngine::Baseline => solve_baseline(game).1,
        BenchEngine::Zielonka => {
            solve_zielonka(game);
            SolveStats::default()
        }
        BenchEngine::Accel => {
            let dag = detect_positional_dag(game.arena());
            let acc = solve_accelerated(game, &dag);
            extend_to_dag(game, &dag, &acc.exists_real);
            acc.stats
        }
        BenchEngine::AccelSummary => {
            let dag = detect_positional_dag(game.arena());
            let acc = solve_summarized(game, &dag)
                .ok_or_else(|| "DAG has an Exists choice; no closed form".to_string())?;
            extend_to_dag(game, &dag, &acc.exists_real);
            acc.stats
        }
    };
    Ok((stats, start.elapsed().as_nanos() as u64))
}

/// Runs every cell; failures become rows with `error` set.
pub fn run_bench(grid: &BenchGrid, budget: usize) -> Vec<BenchRecord> {
    let mut records = Vec::new();
    for cell in &grid.cells {
        let family = cell.family.parse::<Family>().ok();
        let seeds = cell.seeds.as_ref().map_or(vec![0], OneOrMany::values);
        for params in cartesian(&cell.params) {
            for &seed in &seeds {
                let label = describe(family, &params, seed);
                let row = |engine: String, error: Option<String>| BenchRecord {
                    family: cell.family.clone(),
                    params: label.clone(),
                    engine,
                    real_nodes: None,
                    dag_nodes: None,
                    f_evaluations: None,
                    attractor_cost: None,
                    wall_nanos: None,
                    eval_ratio: None,
                    error,
                };
                let game = match instance(&cell.family, &params, seed, budget) {
                    Ok(g) => g,
                    Err(e) => {
                        for engine in &cell.engines {
                            records.push(row(engine.to_string(), Some(e.clone())));
                        }
                        continue;
                    }
                };
                let dag = detect_positional_dag(game.arena());
                let first = records.len();
                for &engine in &cell.engines {
                    let mut r = row(engine.to_string(), None);
                    r.real_nodes = Some(dag.real_nodes().len() as u64);
                    r.dag_nodes = Some(dag.dag_nodes().len() as u64);
                    match run_engine(&game, engine) {
                        Ok((stats, nanos)) => {
                            r.f_evaluations = Some(stats.f_evaluations);
                            r.attractor_cost = Some(stats.attractor_cost);
                            r.wall_nanos = Some(nanos);
                        }
                        Err(e) => r.error = Some(e),
                    }
                    records.push(r);
                }
                let baseline = records[first..]
                    .iter()
                    .find(|r| r.engine == "baseline")
                    .and_then(|r| r.f_evaluations);
                if let Some(base) = baseline {
                    for r in &mut records[first..] {
                        r.eval_ratio = r
                            .f_evaluations
                            .filter(|&f| f > 0 && r.engine != "zielonka")
                            .map(|f| base as f64 / f as f64);
                    }
                }
            }
        }
    }
    records
}

pub fn run_bench_default(grid: &BenchGrid) -> Vec<BenchRecord> {
    run_bench(grid, DEFAULT_BUDGET)
}

/// Writes the header, then one line per record.
pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in records {
        w.write_record([
            r.family.clone(),
            r.params.clone(),
            r.engine.clone(),
            opt(r.real_nodes),
            opt(r.dag_nodes),
            opt(r.f_evaluations),
            opt(r.attractor_cost),
            opt(r.wall_nanos),
            r.eval_ratio.map(|x| format!("{x:.3}")).unwrap_or_default(),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(records: &[BenchRecord], out: W) -> Result<(), BenchError> {
    serde_json::to_writer_pretty(out, records)?;
    Ok(())
}
