use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use canvas_color::canvas::{inessential_separators, Canvas};
use canvas_color::demtwo::{derive_thom_via_two_twos, solve_canvas, solve_two_twos, Solution, SolveOutcome, Violation};
use canvas_color::harness::check::{run_theorem_check, CheckMode};
use canvas_color::harness::generate::enumerate_families;
use canvas_color::harness::instances::{corpus_graphs, generate_instance_suite, Target};
use canvas_color::harness::io::{read_json, solution_json, write_json, CanvasFile, ColoringFile, GraphFile};
use canvas_color::harness::{CorpusSpec, Family};
use canvas_color::oracle::{extract_critical, is_critical, solve_exact, verify, Coloring};
use canvas_color::thomassen::color_with_precolored_edge;

#[derive(Parser)]
#[command(name = "canvas-color", version, about = "List colouring of plane graph canvases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Colour a canvas with one of the constructive solvers.
    Solve {
        #[arg(long, value_enum, default_value = "demtwo")]
        mode: SolveMode,
        #[arg(long)]
        input: PathBuf,
        /// Print the full JSON result instead of a one-line outcome.
        #[arg(long)]
        json: bool,
    },
    /// Check a colouring file against a canvas.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
    },
    /// Exhaustive search.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Report whether a canvas is critical and which separators and short
    /// cycles break the properties critical canvases have.
    Critical {
        #[arg(long)]
        input: PathBuf,
    },
    /// Print corpus graphs or instances as JSON lines, or write them to a
    /// directory.
    Gen {
        #[arg(long, default_value = "graphs")]
        mode: String,
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a solver over the corpus and compare with the oracle. Exits with
    /// status 1 on any disagreement.
    Check {
        #[arg(long, default_value = "demtwo")]
        mode: String,
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Print the report as JSON lines.
        #[arg(long)]
        json: bool,
        /// Where to write counterexamples and archived witnesses.
        #[arg(long)]
        counterexamples: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Print some L-colouring, or null.
    Solve {
        #[arg(long)]
        input: PathBuf,
    },
    /// Print a critical subcanvas of an uncolourable canvas.
    Critical {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveMode {
    /// S is a path of equal 2-lists plus one isolated vertex.
    Demtwo,
    /// S is two isolated vertices with lists of size at least two.
    Twotwos,
    /// S is a precoloured edge; solved through the two-lists solver.
    ThomReduction,
    /// S is a precoloured edge; solved by boundary recursion.
    Thomassen,
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "max-n", default_value_t = 8)]
    max_n: usize,
    #[arg(long, default_value_t = 5)]
    palette: u32,
    /// Comma separated; all families when omitted.
    #[arg(long, value_delimiter = ',')]
    families: Vec<String>,
    #[arg(long, default_value_t = 3)]
    samples: usize,
    /// Number of random near-triangulations.
    #[arg(long, default_value_t = 1000)]
    random: usize,
    #[arg(long = "random-max-n", default_value_t = 14)]
    random_max_n: usize,
}

impl CorpusArgs {
    fn spec(&self) -> Result<CorpusSpec> {
        let families: BTreeSet<Family> = if self.families.is_empty() {
            Family::all().into_iter().collect()
        } else {
            self.families.iter().map(|f| f.parse()).collect::<Result<_, _>>()?
        };
        let spec = CorpusSpec {
            max_vertices: self.max_n,
            palette_size: self.palette,
            families,
            seed: self.seed,
            samples_per_shape: self.samples,
            random_instances: self.random,
            random_max_vertices: self.random_max_n,
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn load_canvas(path: &PathBuf) -> Result<std::result::Result<Canvas, canvas_color::CanvasViolation>> {
    let file: CanvasFile = read_json(path)?;
    Ok(file.to_canvas()?)
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", serde_json::to_string(value)?)?;
    Ok(())
}

fn colored(coloring: Coloring) -> Solution {
    Solution { outcome: SolveOutcome::Colored(coloring), trace: Vec::new() }
}

fn violation(v: Violation) -> Solution {
    Solution { outcome: SolveOutcome::Violation(v), trace: Vec::new() }
}

fn solve(mode: SolveMode, input: &PathBuf, json: bool) -> Result<ExitCode> {
    let canvas = match load_canvas(input)? {
        Ok(c) => c,
        Err(v) => {
            let sol = violation(Violation::Canvas(v));
            return report_solution(&sol, json);
        }
    };
    let g = &canvas.graph;
    let s = &canvas.s;
    let sol = match mode {
        SolveMode::Demtwo => solve_canvas(&canvas)?,
        SolveMode::Twotwos => {
            let vs: Vec<_> = s.vertices().into_iter().collect();
            if vs.len() != 2 {
                violation(Violation::Other("S must consist of exactly two vertices".into()))
            } else {
                match solve_two_twos(g, vs[0], vs[1], &canvas.lists) {
                    Ok(sol) => sol,
                    Err(canvas_color::demtwo::SolveError::Hypothesis(v)) => violation(v),
                    Err(e) => return Err(e.into()),
                }
            }
        }
        SolveMode::ThomReduction | SolveMode::Thomassen => {
            if s.path.len() != 2 || !s.isolated.is_empty() {
                violation(Violation::Other("S must be a single edge".into()))
            } else if let SolveMode::ThomReduction = mode {
                match derive_thom_via_two_twos(g, s.path[0], s.path[1], &canvas.lists) {
                    Ok(sol) => sol,
                    Err(canvas_color::demtwo::SolveError::Hypothesis(v)) => violation(v),
                    Err(e) => return Err(e.into()),
                }
            } else {
                match color_with_precolored_edge(g, s.path[0], s.path[1], &canvas.lists) {
                    Ok(c) => colored(c),
                    Err(e) => violation(Violation::Other(e.to_string())),
                }
            }
        }
    };
    report_solution(&sol, json)
}

fn report_solution(sol: &Solution, json: bool) -> Result<ExitCode> {
    if json {
        print_json(&solution_json(sol))?;
    } else {
        match &sol.outcome {
            SolveOutcome::Colored(c) => println!("colored {}", serde_json::to_string(c)?),
            SolveOutcome::Exception(cert) => println!("exception odd cycle {:?} with lists {:?}", cert.odd_cycle, cert.l0),
            SolveOutcome::Violation(v) => println!("violation {}: {v}", v.kind()),
        }
    }
    Ok(match sol.outcome {
        SolveOutcome::Violation(_) => ExitCode::from(2),
        _ => ExitCode::SUCCESS,
    })
}

fn verify_cmd(input: &PathBuf, coloring: &PathBuf) -> Result<ExitCode> {
    let file: CanvasFile = read_json(input)?;
    let (g, _, lists) = file.parts()?;
    let col: ColoringFile = read_json(coloring)?;
    let missing: Vec<_> = g.vertex_set().into_iter().filter(|&v| !col.coloring.contains(v)).collect();
    let ok = missing.is_empty() && verify(&g, &lists, &col.coloring);
    print_json(&json!({ "valid": ok, "uncolored": missing }))?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn oracle_cmd(command: &OracleCommand) -> Result<ExitCode> {
    match command {
        OracleCommand::Solve { input } => {
            let file: CanvasFile = read_json(input)?;
            let (g, _, lists) = file.parts()?;
            print_json(&json!({ "coloring": solve_exact(&g, &lists, &Coloring::new()) }))?;
        }
        OracleCommand::Critical { input } => {
            let canvas = load_canvas(input)?.map_err(|v| anyhow!("not a canvas: {v}"))?;
            let critical = extract_critical(&canvas)?;
            print_json(&serde_json::to_value(CanvasFile::from_canvas(&critical))?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn critical_cmd(input: &PathBuf) -> Result<ExitCode> {
    let canvas = load_canvas(input)?.map_err(|v| anyhow!("not a canvas: {v}"))?;
    let (cuts, chords) = inessential_separators(&canvas.graph, &canvas.s.vertices());
    let short: Vec<_> = canvas.graph.short_cycles_with_interior().into_iter().map(|(c, _)| c).collect();
    print_json(&json!({
        "critical": is_critical(&canvas),
        "inessential_cutvertices": cuts,
        "inessential_chords": chords,
        "short_cycles_with_interior": short,
    }))?;
    Ok(ExitCode::SUCCESS)
}

fn gen_cmd(mode: &str, corpus: &CorpusArgs, out: Option<&PathBuf>) -> Result<ExitCode> {
    let spec = corpus.spec()?;
    let items: Vec<(String, serde_json::Value)> = if mode == "graphs" {
        let graphs = if spec.families.contains(&Family::RandomNearTriangulations) {
            corpus_graphs(&spec)?
        } else {
            enumerate_families(spec.max_vertices, &spec.families)?
                .into_iter()
                .enumerate()
                .map(|(i, g)| ('e', i, g))
                .collect()
        };
        graphs
            .into_iter()
            .map(|(src, i, g)| (format!("graph-{src}{i:05}"), serde_json::to_value(GraphFile::from_graph(&g))))
            .map(|(id, v)| v.map(|v| (id, v)))
            .collect::<Result<_, _>>()?
    } else {
        let target: Target = mode.parse()?;
        generate_instance_suite(&spec, target)?
            .into_iter()
            .map(|inst| Ok((inst.id.clone(), serde_json::to_value(inst.to_file())?)))
            .collect::<Result<_>>()?
    };
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let ext = if mode == "graphs" { "pg.json" } else { "canvas.json" };
            for (id, value) in &items {
                write_json(&dir.join(format!("{id}.{ext}")), value)?;
            }
            eprintln!("wrote {} files to {}", items.len(), dir.display());
        }
        None => {
            for (id, value) in items {
                print_json(&json!({ "id": id, "instance": value }))?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn check_cmd(mode: &str, corpus: &CorpusArgs, json: bool, counterexamples: Option<&PathBuf>) -> Result<ExitCode> {
    let mode: CheckMode = mode.parse()?;
    let spec = corpus.spec()?;
    let report = run_theorem_check(&spec, mode)?;
    if json {
        print!("{}", report.to_json_lines());
    } else {
        let s = &report.summary;
        println!(
            "{}: {} instances, {} agree, {} disagree, {} skipped",
            s.mode, s.instances, s.agreements, s.disagreements, s.skipped
        );
        for r in report.records.iter().filter(|r| r.detail.is_some()) {
            println!("  {}: {}", r.id, r.detail.as_deref().unwrap_or_default());
        }
    }
    if let Some(dir) = counterexamples {
        let n = report.write_files(dir)?;
        if n > 0 {
            eprintln!("wrote {n} canvases to {}", dir.display());
        }
    }
    Ok(if report.ok() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Solve { mode, input, json } => solve(*mode, input, *json),
        Command::Verify { input, coloring } => verify_cmd(input, coloring),
        Command::Oracle { command } => oracle_cmd(command),
        Command::Critical { input } => critical_cmd(input),
        Command::Gen { mode, corpus, out } => gen_cmd(mode, corpus, out.as_ref()),
        Command::Check { mode, corpus, json, counterexamples } => {
            check_cmd(mode, corpus, *json, counterexamples.as_ref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
