//! Command-line front end: characteristic functions, census runs, scattering
//! grids, resonance tables, and the numeric asymptotics report.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qgc::census;
use qgc::charfun::{char_matrix_oracle, phi_dirichlet, phi_neumann, spectrum_families};
use qgc::error::QgcError;
use qgc::graph::{fixture, CombGraph, VertexSet};
use qgc::scattering::{jost_form, resonances, s_eval};
use qgc::slnumeric::{asymptotic_check, PotentialSample};

const EXIT_INVALID: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "qgc", about = "quantum-graph co-spectrality toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphSource {
    /// path to a graph JSON file {"n": .., "edges": [[u,v],..]}
    #[arg(long, conflicts_with = "fixture")]
    graph: Option<PathBuf>,
    /// named fixture (fig2-left, fig2-right, fig5-left, fig5-right)
    #[arg(long)]
    fixture: Option<String>,
}

impl GraphSource {
    fn load(&self) -> Result<CombGraph, QgcError> {
        match (&self.graph, &self.fixture) {
            (Some(path), None) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| QgcError::InvalidInput(format!("{}: {e}", path.display())))?;
                let v: serde_json::Value = serde_json::from_str(&text)
                    .map_err(|e| QgcError::InvalidInput(format!("graph JSON: {e}")))?;
                CombGraph::from_json(&v)
            }
            (None, Some(name)) => fixture(name),
            _ => Err(QgcError::InvalidInput(
                "exactly one of --graph and --fixture is required".into(),
            )),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Neumann,
    Dirichlet,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Graphs,
    Trees,
    Fuzzyballs,
}

#[derive(Subcommand)]
enum Command {
    /// Exact characteristic function and eigenvalue families
    Charfun {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_enum)]
        problem: Problem,
        /// Dirichlet vertices (repeatable)
        #[arg(long)]
        vstar: Vec<usize>,
        #[arg(long, default_value_t = 1.0)]
        ell: f64,
        #[arg(long, default_value_t = 100.0)]
        lambda_max: f64,
        /// re-derive via the edge-system determinant and fail on mismatch
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Co-spectrality census over a graph family
    Census {
        #[arg(long, value_enum)]
        family: Family,
        /// largest vertex count (graphs <= 6, trees <= 9)
        #[arg(long)]
        max_vertices: Option<usize>,
        /// bulk size for fuzzy balls (4..=8)
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// S-function on a lambda grid (CSV: lambda,re_S,im_S,abs_S)
    Scatter {
        #[command(flatten)]
        source: GraphSource,
        /// lead attachment vertex
        #[arg(long)]
        lead: usize,
        #[arg(long, default_value_t = 0.1)]
        lmin: f64,
        #[arg(long, default_value_t = 100.0)]
        lmax: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1.0)]
        ell: f64,
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Resonances in the principal strip (CSV: re_omega,im_omega,multiplicity)
    Resonances {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        lead: usize,
        #[arg(long, default_value_t = 1.0)]
        ell: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Asymptotic decay report for a sampled potential (CSV of x,q(x))
    Sl {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        lead: usize,
        /// potential file: CSV rows x,q(x) on a uniform grid
        #[arg(long)]
        potential: PathBuf,
        #[arg(long, default_value_t = 100.0)]
        lmin: f64,
        #[arg(long, default_value_t = 1e6)]
        lmax: f64,
        #[arg(long, default_value_t = 13)]
        samples: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), QgcError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| QgcError::InvalidInput(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| QgcError::Numeric(format!("stdout: {e}")))
        }
    }
}

fn load_potential(path: &PathBuf) -> Result<PotentialSample, QgcError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| QgcError::InvalidInput(format!("{}: {e}", path.display())))?;
    let mut xs = Vec::new();
    let mut qs = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("x,") {
            continue;
        }
        let mut parts = line.split(',');
        let bad = || QgcError::InvalidInput(format!("potential file line {}", ln + 1));
        let x: f64 = parts
            .next()
            .ok_or_else(bad)?
            .trim()
            .parse()
            .map_err(|_| bad())?;
        let q: f64 = parts
            .next()
            .ok_or_else(bad)?
            .trim()
            .parse()
            .map_err(|_| bad())?;
        xs.push(x);
        qs.push(q);
    }
    if xs.len() < 2 || xs[0] != 0.0 {
        return Err(QgcError::InvalidInput(
            "potential file needs at least two rows starting at x = 0".into(),
        ));
    }
    let ell = *xs.last().unwrap();
    let h = ell / (xs.len() - 1) as f64;
    for (i, &x) in xs.iter().enumerate() {
        if (x - i as f64 * h).abs() > 1e-9 * (1.0 + ell) {
            return Err(QgcError::InvalidInput(
                "potential file grid is not uniform".into(),
            ));
        }
    }
    PotentialSample::new(ell, qs)
}

/// Exit 3 when the edge-system oracle disagrees with the product formula.
fn oracle_check(g: &CombGraph, vstar: &VertexSet) -> Result<(), QgcError> {
    let direct = if vstar.is_empty() {
        phi_neumann(g)?
    } else {
        phi_dirichlet(g, vstar)?
    };
    let oracle = char_matrix_oracle(g, vstar)?;
    if !direct.trig_equal(&oracle) {
        return Err(QgcError::Structural(
            "edge-system oracle disagrees with the product formula".into(),
        ));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), QgcError> {
    match cli.command {
        Command::Charfun {
            source,
            problem,
            vstar,
            ell,
            lambda_max,
            oracle,
            output,
        } => {
            let g = source.load()?;
            let vset: VertexSet = vstar.into_iter().collect();
            let form = match problem {
                Problem::Neumann => {
                    if !vset.is_empty() {
                        return Err(QgcError::InvalidInput(
                            "--vstar applies only to the Dirichlet problem".into(),
                        ));
                    }
                    phi_neumann(&g)?
                }
                Problem::Dirichlet => phi_dirichlet(&g, &vset)?,
            };
            if oracle {
                oracle_check(&g, &vset)?;
            }
            let p = qgc::charfun::disc_char_poly(&g, &vset)?;
            let families = spectrum_families(&form)?;
            let doc = serde_json::json!({
                "graph": g.to_json(),
                "P": p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "phi": form,
                "spectrum": {
                    "families": families,
                    "eigenvalues_below": families.eigenvalues_below(ell, lambda_max),
                    "lambda_max": lambda_max,
                    "ell": ell,
                },
            });
            emit(
                &output,
                &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()),
            )
        }
        Command::Census {
            family,
            max_vertices,
            n,
            oracle,
            output,
        } => {
            let report = match family {
                Family::Graphs => {
                    let max = max_vertices.unwrap_or(6);
                    if max > 6 {
                        return Err(QgcError::InvalidInput(
                            "graph census supports at most 6 vertices".into(),
                        ));
                    }
                    let fam = census::graph_family(max)?;
                    census::census(&fam, &format!("graphs<={max}"))?
                }
                Family::Trees => {
                    let max = max_vertices.unwrap_or(9);
                    if max > 9 {
                        return Err(QgcError::InvalidInput(
                            "tree census supports at most 9 vertices".into(),
                        ));
                    }
                    let fam = census::tree_family(max)?;
                    census::census(&fam, &format!("trees<={max}"))?
                }
                Family::Fuzzyballs => {
                    let n = n.ok_or_else(|| {
                        QgcError::InvalidInput("--n is required for fuzzy balls".into())
                    })?;
                    census::fuzzy_ball_family(n)?
                }
            };
            if oracle {
                for gv in &report.graphs {
                    let g = CombGraph::from_json(gv)?;
                    if g.edge_count() <= 12 && g.edge_count() >= 1 {
                        oracle_check(&g, &VertexSet::new())?;
                    }
                }
            }
            let multi = report
                .classes
                .iter()
                .filter(|c| c.members.len() > 1)
                .count();
            println!(
                "family {}: {} graphs, {} classes, {} multi-member",
                report.family,
                report.graphs.len(),
                report.classes.len(),
                multi
            );
            emit(
                &output,
                &format!("{}\n", serde_json::to_string_pretty(&report).unwrap()),
            )
        }
        Command::Scatter {
            source,
            lead,
            lmin,
            lmax,
            samples,
            ell,
            oracle,
            output,
        } => {
            let g = source.load()?;
            let vset = VertexSet::from([lead]);
            if lead >= g.n() {
                return Err(QgcError::VertexOutOfRange {
                    vertex: lead,
                    n: g.n(),
                });
            }
            if oracle {
                oracle_check(&g, &vset)?;
            }
            let phi_n = phi_neumann(&g)?;
            let phi_d = phi_dirichlet(&g, &vset)?;
            if samples < 1 || lmin <= 0.0 || lmax <= lmin {
                return Err(QgcError::InvalidInput("bad lambda grid".into()));
            }
            let mut csv = String::from("lambda,re_S,im_S,abs_S\n");
            for k in 0..samples {
                let t = if samples == 1 {
                    0.0
                } else {
                    k as f64 / (samples - 1) as f64
                };
                let lam = lmin * (lmax / lmin).powf(t);
                let s = s_eval(&phi_n, &phi_d, ell, lam)?;
                csv.push_str(&format!(
                    "{:.12e},{:.12e},{:.12e},{:.12e}\n",
                    lam,
                    s.re,
                    s.im,
                    s.norm()
                ));
            }
            emit(&output, &csv)
        }
        Command::Resonances {
            source,
            lead,
            ell,
            tol,
            oracle,
            output,
        } => {
            let g = source.load()?;
            if lead >= g.n() {
                return Err(QgcError::VertexOutOfRange {
                    vertex: lead,
                    n: g.n(),
                });
            }
            let vset = VertexSet::from([lead]);
            if oracle {
                oracle_check(&g, &vset)?;
            }
            let phi_n = phi_neumann(&g)?;
            let phi_d = phi_dirichlet(&g, &vset)?;
            let j = jost_form(&phi_n, &phi_d, ell)?;
            let set = resonances(&j, tol)?;
            let mut csv = String::from("re_omega,im_omega,multiplicity\n");
            for m in &set.members {
                csv.push_str(&format!(
                    "{:.12e},{:.12e},{}\n",
                    m.omega.re, m.omega.im, m.multiplicity
                ));
            }
            emit(&output, &csv)
        }
        Command::Sl {
            source,
            lead,
            potential,
            lmin,
            lmax,
            samples,
            output,
        } => {
            let g = source.load()?;
            if lead >= g.n() {
                return Err(QgcError::VertexOutOfRange {
                    vertex: lead,
                    n: g.n(),
                });
            }
            let q = load_potential(&potential)?;
            if samples < 2 || lmin < 10.0 || lmax <= lmin {
                return Err(QgcError::InvalidInput("bad lambda grid".into()));
            }
            let lambdas: Vec<f64> = (0..samples)
                .map(|k| lmin * (lmax / lmin).powf(k as f64 / (samples - 1) as f64))
                .collect();
            let report = asymptotic_check(&q, &lambdas, &g, lead)?;
            emit(
                &output,
                &format!("{}\n", serde_json::to_string_pretty(&report).unwrap()),
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                QgcError::Structural(_) | QgcError::Numeric(_) => ExitCode::from(EXIT_INTERNAL),
                _ => ExitCode::from(EXIT_INVALID),
            }
        }
    }
}
