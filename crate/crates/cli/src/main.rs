//! `trifree`: colour triangle-free plane graphs from the command line.
//!
//! Exit codes: 0 success, 1 I/O, parse or usage error (and a failed
//! `verify`), 2 triangle or non-planar rotation system, 3 invalid pair.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use trifree::discharging::audit;
use trifree::format::{parse, parse_coloring, serialize, GraphFile, ParseError, ParseErrorKind};
use trifree::generate::{generate, GenSpec};
use trifree::oracle::brute_force_3color;
use trifree::planar::{CycleRef, GraphError};
use trifree::solver::{extend, three_color, SolveError, SolverConfig, Trace};
use trifree::validity::ValidPair;

#[derive(Parser)]
#[command(
    name = "trifree",
    version,
    about = "3-colouring of triangle-free plane graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Colour the whole graph; prints `c <v> <colour>` lines.
    Color {
        file: PathBuf,
        /// Reduce all the way down instead of brute-forcing small instances.
        #[arg(long)]
        no_base_shortcut: bool,
        /// Write the reduction trace to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Extend the file's boundary colouring to the whole graph.
    Extend {
        file: PathBuf,
        #[arg(long)]
        no_base_shortcut: bool,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Check a colouring file against a graph file.
    Verify { file: PathBuf, coloring: PathBuf },
    /// Print the discharging report.
    Audit { file: PathBuf },
    /// Write a generated graph file.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        /// Size parameter (cycle/prism length, grid rows, hexpatch radius,
        /// random vertex count).
        #[arg(long)]
        n: Option<usize>,
        /// Grid columns (defaults to `--n`).
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Brute-force colouring, honouring any boundary colours in the file.
    Oracle { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Cycle,
    Prism,
    Grid,
    Hexpatch,
    Cube,
    Dodecahedron,
    #[value(alias = "random")]
    RandomInsertion,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(1, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| fail(1, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<GraphFile, Failure> {
    let text = read(path)?;
    parse(&text).map_err(|e: ParseError| {
        let code = match e.kind {
            ParseErrorKind::Graph(GraphError::NotSphere { .. }) => 2,
            _ => 1,
        };
        fail(code, format!("{}: {e}", path.display()))
    })
}

fn solve_failure(e: SolveError) -> Failure {
    match e {
        SolveError::TriangleFound(t) => {
            fail(2, format!("triangle found: {} {} {}", t[0], t[1], t[2]))
        }
        other => fail(1, format!("internal error: {other}")),
    }
}

fn config(no_base_shortcut: bool, trace: &Option<PathBuf>) -> SolverConfig {
    SolverConfig {
        use_brute_base: !no_base_shortcut,
        emit_trace: trace.is_some(),
        ..SolverConfig::default()
    }
}

fn save_trace(path: &Option<PathBuf>, trace: &Trace) -> Result<(), Failure> {
    match path {
        Some(p) => write(p, &trace.to_string()),
        None => Ok(()),
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Color {
            file,
            no_base_shortcut,
            trace,
        } => {
            let f = load(&file)?;
            let (c, t) =
                three_color(&f.graph, &config(no_base_shortcut, &trace)).map_err(solve_failure)?;
            save_trace(&trace, &t)?;
            print!("{c}");
        }
        Command::Extend {
            file,
            no_base_shortcut,
            trace,
        } => {
            let f = load(&file)?;
            let b = f
                .boundary
                .ok_or_else(|| fail(1, format!("{}: no color lines to extend", file.display())))?;
            let p = ValidPair::new(f.graph, b).map_err(|reason| match reason {
                trifree::validity::InvalidPair::Triangle(t) => {
                    fail(2, format!("triangle found: {} {} {}", t[0], t[1], t[2]))
                }
                reason => fail(3, format!("invalid pair: {reason}")),
            })?;
            let (c, t) = extend(&p, &config(no_base_shortcut, &trace)).map_err(solve_failure)?;
            save_trace(&trace, &t)?;
            print!("{c}");
        }
        Command::Verify { file, coloring } => {
            let f = load(&file)?;
            let text = read(&coloring)?;
            let c = parse_coloring(&text, f.graph.n())
                .map_err(|e| fail(1, format!("{}: {e}", coloring.display())))?;
            if let Some((u, v)) = c.first_conflict(&f.graph) {
                return Err(fail(
                    1,
                    format!("edge {u} {v}: both endpoints have colour {}", c.get(u)),
                ));
            }
            if let Some((v, want)) = f
                .boundary
                .iter()
                .flat_map(|b| b.iter())
                .find(|&(v, col)| c.get(v) != col)
            {
                return Err(fail(
                    1,
                    format!("vertex {v}: boundary colour {want}, found {}", c.get(v)),
                ));
            }
            println!("OK");
        }
        Command::Audit { file } => {
            let f = load(&file)?;
            let cycle = match &f.boundary {
                Some(b) => b.cycle().clone(),
                None => {
                    let mut seen = Vec::new();
                    for v in f.graph.outer_face().iter().flat_map(|w| w.vertices()) {
                        if !seen.contains(&v) {
                            seen.push(v);
                        }
                    }
                    CycleRef::new(seen)
                }
            };
            print!("{}", audit(&f.graph, &cycle));
        }
        Command::Gen {
            family,
            n,
            m,
            seed,
            output,
        } => {
            let need = |what: &str| n.ok_or_else(|| fail(1, format!("--n is required for {what}")));
            let spec = match family {
                Family::Cycle => GenSpec::Cycle(need("cycle")?),
                Family::Prism => GenSpec::Prism(need("prism")?),
                Family::Grid => {
                    let a = need("grid")?;
                    GenSpec::Grid(a, m.unwrap_or(a))
                }
                Family::Hexpatch => GenSpec::HexPatch(need("hexpatch")?),
                Family::Cube => GenSpec::Cube,
                Family::Dodecahedron => GenSpec::Dodecahedron,
                Family::RandomInsertion => GenSpec::RandomInsertion {
                    n: need("random_insertion")?,
                    seed,
                },
            };
            let g = generate(spec).map_err(|e| fail(1, e.to_string()))?;
            write(&output, &format!("# {spec}\n{}", serialize(&g, None)))?;
        }
        Command::Oracle { file } => {
            let f = load(&file)?;
            let pre = f.boundary.as_ref().map(|b| {
                let mut p = vec![None; f.graph.n()];
                for (v, c) in b.iter() {
                    p[v] = Some(c);
                }
                p
            });
            match brute_force_3color(&f.graph, pre.as_deref()) {
                Some(c) => print!("{c}"),
                None => println!("UNCOLORABLE"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    // Reductions recurse once per step; give deep instances room.
    let worker = std::thread::Builder::new()
        .stack_size(512 << 20)
        .spawn(move || run(cli.command))
        .expect("spawn worker thread");
    match worker.join().expect("worker thread panicked") {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("trifree: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
