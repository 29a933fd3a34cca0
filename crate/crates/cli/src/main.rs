use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use dagsolve::bench::{run_bench, write_csv, write_json, BenchGrid};
use dagsolve::dag::{detect_positional_dag, extend_to_dag, solve_accelerated};
use dagsolve::gen::{generate, Family, Generated};
use dagsolve::io::{
    el_from_game, parse_elgame, pg_from_game, read_el_game, read_parity_game, write_elgame,
    write_pgsolver, ParseError,
};
use dagsolve::lar::{build_product, el_oracle, solve_el_with, verify_el_strategy, BudgetError, DEFAULT_BUDGET};
use dagsolve::solve::verify_strategy;
use dagsolve::{solve_baseline, solve_zielonka, Engine, Player, SolveStats, WinnerMap};

const EXIT_INVALID: u8 = 1;
const EXIT_SYNTAX: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(name = "dagsolve", version, about = "Parity and Emerson-Lei game solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Pg,
    El,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Baseline,
    Accel,
    Zielonka,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::Baseline => Engine::Baseline,
            EngineArg::Accel => Engine::Accelerated,
            EngineArg::Zielonka => Engine::Zielonka,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve a game and print the winner of every node
    Solve {
        #[arg(long, value_enum, default_value = "accel")]
        engine: EngineArg,
        /// Input format; guessed from the header when omitted
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        json: bool,
        /// Cross-check against Zielonka and check strategies
        #[arg(long)]
        verify: bool,
        /// Largest product (Emerson-Lei games only)
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        file: PathBuf,
    },
    /// Write the later-appearance-record product of an Emerson-Lei game
    Convert {
        #[arg(long, value_enum)]
        to: ConvertTarget,
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Product node map (JSON); defaults to OUTPUT.map.json with -o
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Report the detected positional DAG
    Dag {
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        json: bool,
        file: PathBuf,
    },
    /// Generate a game
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        out_degree: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        depth: Option<u64>,
        #[arg(long)]
        width: Option<u64>,
        #[arg(long)]
        colors: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a benchmark grid
    Bench {
        #[arg(long)]
        spec: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Also write the records as JSON
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvertTarget {
    Pg,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Failure {
        Failure::new(e.exit_code() as u8, e.to_string())
    }
}

impl From<BudgetError> for Failure {
    fn from(e: BudgetError) -> Failure {
        Failure::new(EXIT_BUDGET, e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn guess_format(text: &str, given: Option<Format>) -> Result<Format, Failure> {
    if let Some(f) = given {
        return Ok(f);
    }
    let head = text.trim_start();
    if head.starts_with("parity") {
        Ok(Format::Pg)
    } else if head.starts_with("elgame") {
        Ok(Format::El)
    } else {
        Err(Failure::new(EXIT_SYNTAX, "line 1, column 1: expected `parity` or `elgame` header"))
    }
}

fn print_winners(winners: &WinnerMap, names: &[Option<String>], stats: &SolveStats, engine: Engine, as_json: bool) {
    if as_json {
        let ws: Vec<usize> = winners.0.iter().map(|p| p.index()).collect();
        println!("{}", json!({ "engine": engine.to_string(), "winners": ws, "stats": stats }));
        return;
    }
    for (v, p) in winners.0.iter().enumerate() {
        match names.get(v).and_then(Option::as_deref) {
            Some(name) => println!("{v} {p} \"{name}\""),
            None => println!("{v} {p}"),
        }
    }
}

fn solve_pg(text: &str, engine: Engine, verify: bool, as_json: bool) -> Result<(), Failure> {
    let parsed = read_parity_game(text)?;
    let game = &parsed.game;
    let (winners, stats) = match engine {
        Engine::Baseline => solve_baseline(game),
        Engine::Zielonka => (solve_zielonka(game).winners, SolveStats::default()),
        Engine::Accelerated => {
            let dag = detect_positional_dag(game.arena());
            let acc = solve_accelerated(game, &dag);
            (extend_to_dag(game, &dag, &acc.exists_real), acc.stats)
        }
    };
    print_winners(&winners, &parsed.names, &stats, engine, as_json);
    if verify {
        let z = solve_zielonka(game);
        if z.winners != winners {
            return Err(Failure::new(EXIT_VERIFY, "verification failed: winners differ from Zielonka"));
        }
        for player in [Player::Exists, Player::Forall] {
            let region = winners.region(player);
            match verify_strategy(game, &region, z.strategy(player), player) {
                Ok(true) => {}
                Ok(false) => {
                    return Err(Failure::new(
                        EXIT_VERIFY,
                        format!("verification failed: {player} strategy does not win its region"),
                    ))
                }
                Err(e) => return Err(Failure::new(EXIT_VERIFY, format!("verification failed: {e}"))),
            }
        }
        eprintln!("verified");
    }
    Ok(())
}

fn solve_el_file(text: &str, engine: Engine, verify: bool, as_json: bool, budget: usize) -> Result<(), Failure> {
    let file = parse_elgame(text)?;
    let game = file.to_game()?;
    let names: Vec<Option<String>> = file.nodes.iter().map(|n| n.name.clone()).collect();
    let sol = solve_el_with(&game, engine, budget)?;
    print_winners(&sol.winners, &names, &sol.stats, engine, as_json);
    if verify {
        let exists = sol.winners.region(Player::Exists);
        if !verify_el_strategy(&game, &sol.strategy, &exists) {
            return Err(Failure::new(EXIT_VERIFY, "verification failed: memory strategy does not win"));
        }
        let mut checked = 0;
        for v in 0..game.node_count() {
            // the brute-force oracle only runs where it stays small
            if let Ok(w) = el_oracle(&game, v) {
                checked += 1;
                if w != sol.winners.winner(v) {
                    return Err(Failure::new(
                        EXIT_VERIFY,
                        format!("verification failed: node {v} is won by {w} by exhaustive search"),
                    ));
                }
            }
        }
        eprintln!("verified ({checked} of {} nodes by exhaustive search)", game.node_count());
    }
    Ok(())
}

fn permutation_names(colors: &[String], order: impl Iterator<Item = usize>) -> Vec<String> {
    order.map(|c| colors[c].clone()).collect()
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve {
            engine,
            format,
            json,
            verify,
            budget,
            file,
        } => {
            let text = read(&file)?;
            match guess_format(&text, format)? {
                Format::Pg => solve_pg(&text, engine.into(), verify, json),
                Format::El => solve_el_file(&text, engine.into(), verify, json, budget),
            }
        }
        Command::Convert {
            to: ConvertTarget::Pg,
            file,
            output,
            map,
            budget,
        } => {
            let game = read_el_game(&read(&file)?)?;
            let all: Vec<usize> = (0..game.node_count()).collect();
            let product = build_product(&game, &all, budget)?;
            let mut pg = pg_from_game(product.parity());
            let colors = game.colors();
            let mut entries = Vec::with_capacity(product.node_count());
            for (id, node) in pg.nodes.iter_mut().enumerate() {
                let (v, pi) = product.state(id);
                let perm = permutation_names(colors, pi.order());
                node.name = Some(format!("{v}:{}", perm.join(",")));
                entries.push(json!({ "id": id, "node": v, "perm": perm }));
            }
            write_out(output.as_deref(), &write_pgsolver(&pg))?;
            let map_path = map.or_else(|| output.as_ref().map(|o| o.with_extension("map.json")));
            if let Some(path) = map_path {
                let initial = permutation_names(colors, product.initial_permutation().order());
                let doc = json!({ "colors": colors, "initial": initial, "nodes": entries });
                let text = serde_json::to_string_pretty(&doc).expect("json values serialize");
                write_out(Some(&path), &(text + "\n"))?;
            }
            Ok(())
        }
        Command::Dag { format, json, file } => {
            let text = read(&file)?;
            let arena = match guess_format(&text, format)? {
                Format::Pg => read_parity_game(&text)?.game.arena().clone(),
                Format::El => read_el_game(&text)?.arena().clone(),
            };
            let d = detect_positional_dag(&arena);
            if json {
                println!(
                    "{}",
                    json!({
                        "dagNodes": d.dag_nodes().len(),
                        "realNodes": d.real_nodes().len(),
                        "demotions": d.positionality_demotions(),
                        "cycleBreaks": d.cycle_breaks(),
                        "dag": d.dag_nodes().to_vec(),
                    })
                );
            } else {
                println!("dagNodes={}", d.dag_nodes().len());
                println!("realNodes={}", d.real_nodes().len());
                println!("demotions={}", d.positionality_demotions().len());
                println!("cycleBreaks={}", d.cycle_breaks().len());
            }
            Ok(())
        }
        Command::Gen {
            family,
            seed,
            n,
            out_degree,
            k,
            m,
            depth,
            width,
            colors,
            output,
        } => {
            let family: Family = family.parse().map_err(|e: dagsolve::gen::GenError| Failure::new(EXIT_INVALID, e.to_string()))?;
            let params: BTreeMap<String, u64> = [
                ("n", n),
                ("outDegree", out_degree),
                ("k", k),
                ("m", m),
                ("depth", depth),
                ("width", width),
                ("colors", colors),
            ]
            .into_iter()
            .filter_map(|(name, v)| v.map(|v| (name.to_string(), v)))
            .collect();
            let text = match generate(family, &params, seed).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))? {
                Generated::Parity(g) => write_pgsolver(&pg_from_game(&g)),
                Generated::El(g) => write_elgame(&el_from_game(&g)),
            };
            write_out(output.as_deref(), &text)
        }
        Command::Bench {
            spec,
            output,
            json,
            budget,
        } => {
            let grid: BenchGrid = read(&spec)?
                .parse()
                .map_err(|e: dagsolve::bench::BenchError| Failure::new(EXIT_SYNTAX, e.to_string()))?;
            let records = run_bench(&grid, budget);
            let io_fail = |e: dagsolve::bench::BenchError| Failure::new(EXIT_INVALID, e.to_string());
            let file = fs::File::create(&output)
                .map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", output.display())))?;
            write_csv(&records, file).map_err(io_fail)?;
            if let Some(path) = json {
                let file = fs::File::create(&path)
                    .map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", path.display())))?;
                write_json(&records, file).map_err(io_fail)?;
            }
            let failed = records.iter().filter(|r| r.error.is_some()).count();
            eprintln!("{} rows, {failed} failed", records.len());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
