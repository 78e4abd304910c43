//! Argument parsing and dispatch for the `factorspace` binary.
//!
//! Every verb prints one JSON object. Exit status is 0 when the command
//! succeeds and the property it asks about holds, 1 when the property is
//! false, and 2 on unreadable or invalid input.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use factorspace::ci::{GraphoidReport, NORMALIZATION_TOL};
use factorspace::factorize::minimal_factorization_descent;
use factorspace::markov::{MarkovResult, MAX_CLIQUE_VERTICES};
use factorspace::suites::{self, SuiteReport};
use factorspace::{
    clique_complex, graphical_hull, graphoid_check, hc_check, markov_test, member,
    minimal_factorization, Antichain, CiResult, Covering, Graph, JointDistribution, MarkovMode,
    Membership, PositiveTable, Subset, DEFAULT_TOL,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "factorspace", version, about = "Coverings, factorisation spaces and Markov properties")]
pub struct Cli {
    /// Membership tolerance, relative on the log scale
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    /// Seed for randomized verbs
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Meet of two or more coverings
    Meet {
        #[arg(required = true, num_args = 2..)]
        coverings: Vec<PathBuf>,
    },
    /// Whether every member of A lies inside some member of B
    Leq { a: PathBuf, b: PathBuf },
    /// Downward closure of a covering
    Saturate { covering: PathBuf },
    /// Maximal elements of the saturation
    Canonical { covering: PathBuf },
    /// Whether a table factors over a covering
    Member { table: PathBuf, covering: PathBuf },
    /// Smallest covering a table factors over
    Minfac {
        table: PathBuf,
        #[arg(long, value_enum, default_value_t = MinfacMethod::Exact)]
        method: MinfacMethod,
    },
    /// Meet of the pair splits a table factors over
    Hull { table: PathBuf },
    /// Conditional independence X ⫫ Y | Z by both routes
    Ci {
        distribution: PathBuf,
        /// Comma-separated labels
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Conditioning labels, empty for marginal independence
        #[arg(long, default_value = "")]
        z: String,
    },
    /// Intersection property on variables W, X, Y, Z (positions 0..4)
    Graphoid { distribution: PathBuf },
    /// Pairwise or local Markov property with respect to a graph
    Markov {
        table: PathBuf,
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Pairwise)]
        mode: Mode,
    },
    /// Pairwise Markov, local Markov and clique factorisation side by side
    Hc { table: PathBuf, graph: PathBuf },
    /// Random rank-equality and meet-membership trials
    VerifyIntersection {
        /// Binary variables, at most 6
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Random covering pairs
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Clique lemma on every graph with at most n vertices
    VerifyCliques {
        /// Largest vertex count, at most 6
        #[arg(long, default_value_t = 6)]
        n: usize,
    },
    /// Every property suite
    Verify {
        /// Binary variables in the intersection and refactoring suites, at most 6
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Random trials per suite
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MinfacMethod {
    /// All antichains, at most 5 variables
    Exact,
    /// Greedy removal of maximal elements, any size
    Descent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Pairwise,
    Local,
}

/// What a verb printed and how it should exit.
#[derive(Debug)]
pub struct Outcome {
    pub holds: bool,
    pub report: Value,
}

impl Outcome {
    fn holds(holds: bool, report: Value) -> Self {
        Outcome { holds, report }
    }

    pub fn exit_code(&self) -> u8 {
        if self.holds {
            0
        } else {
            1
        }
    }
}

/// Input errors, reported with exit status 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<factorspace::Error> for InputError {
    fn from(e: factorspace::Error) -> Self {
        InputError(e.to_string())
    }
}

type Result<T> = std::result::Result<T, InputError>;

/// Scientific notation with 6 significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.5e}")
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> factorspace::Result<T>) -> Result<T> {
    parse(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn covering_json(c: &Covering) -> Value {
    json!(c.label_members())
}

fn antichain_json(a: &Antichain) -> Value {
    json!(a.label_members())
}

fn membership_json(m: &Membership) -> Value {
    json!({
        "member": m.member,
        "residual": sci(m.residual),
        "relative_residual": sci(m.relative()),
    })
}

fn ci_json(r: &CiResult) -> Value {
    json!({
        "independent": r.independent,
        "pointwise_residual": sci(r.residual),
        "membership": membership_json(&r.membership),
        "routes_agree": r.routes_agree,
    })
}

fn markov_json(r: &MarkovResult) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            json!({
                "covering": antichain_json(&c.covering.canonical()),
                "member": c.membership.member,
                "residual": sci(c.membership.residual),
            })
        })
        .collect();
    json!({
        "holds": r.holds,
        "worst_residual": sci(r.worst_residual),
        "checks": checks,
    })
}

fn suite_json(r: &SuiteReport) -> Value {
    let checks: Vec<Value> = r
        .counts
        .iter()
        .map(|c| json!({"check": c.check, "passed": c.passed, "total": c.total}))
        .collect();
    json!({
        "suite": r.name,
        "passed": r.passed(),
        "checks_run": r.total(),
        "checks_failed": r.failed(),
        "checks": checks,
        "worst_residual": sci(r.worst_residual),
        "failures": r.failures,
    })
}

fn labels(space_labels: &factorspace::IndexSet, text: &str) -> Result<Subset> {
    let names: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    Ok(space_labels.subset(names)?)
}

fn graphoid_json(r: &GraphoidReport) -> Value {
    let status = if !r.applicable {
        "not applicable"
    } else if r.holds {
        "holds"
    } else {
        "violated"
    };
    json!({
        "status": status,
        "antecedents": {
            "x_y_given_zw": ci_json(&r.x_y_given_zw),
            "x_w_given_zy": ci_json(&r.x_w_given_zy),
        },
        "consequent": {
            "x_yw_given_z": ci_json(&r.x_yw_given_z),
        },
        "antecedent_meet": antichain_json(&r.antecedent_meet),
        "meet_is_consequent": r.meet_is_consequent,
    })
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let tol = cli.tol;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(InputError(format!("--tol must be a positive number, got {tol}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    match &cli.command {
        Command::Meet { coverings } => {
            let family = coverings
                .iter()
                .map(|p| load(p, Covering::from_json))
                .collect::<Result<Vec<_>>>()?;
            let meet = Covering::family_meet(&family)?;
            Ok(Outcome::holds(true, json!({
                "index_set": meet.index_set().labels(),
                "meet": covering_json(&meet),
                "canonical": antichain_json(&meet.canonical()),
            })))
        }
        Command::Leq { a, b } => {
            let (a, b) = (load(a, Covering::from_json)?, load(b, Covering::from_json)?);
            let leq = a.leq(&b)?;
            Ok(Outcome::holds(leq, json!({
                "leq": leq,
                "equiv": a.equiv(&b)?,
                "a": antichain_json(&a.canonical()),
                "b": antichain_json(&b.canonical()),
            })))
        }
        Command::Saturate { covering } => {
            let c = load(covering, Covering::from_json)?;
            let sat = c.saturate();
            Ok(Outcome::holds(true, json!({
                "index_set": c.index_set().labels(),
                "size": sat.len(),
                "saturation": covering_json(&sat),
            })))
        }
        Command::Canonical { covering } => {
            let c = load(covering, Covering::from_json)?;
            Ok(Outcome::holds(true, json!({
                "index_set": c.index_set().labels(),
                "canonical": antichain_json(&c.canonical()),
                "text": c.canonical().to_string(),
            })))
        }
        Command::Member { table, covering } => {
            let f = load(table, PositiveTable::from_json)?;
            let c = load(covering, Covering::from_json)?;
            let m = member(&f, &c, tol)?;
            let mut report = membership_json(&m);
            report["covering"] = antichain_json(&c.canonical());
            report["tol"] = json!(sci(tol));
            Ok(Outcome::holds(m.member, report))
        }
        Command::Minfac { table, method } => {
            let f = load(table, PositiveTable::from_json)?;
            let (min, name) = match method {
                MinfacMethod::Exact => (minimal_factorization(&f, tol)?, "exact"),
                MinfacMethod::Descent => (minimal_factorization_descent(&f, tol)?, "descent"),
            };
            let check = member(&f, &min.to_covering(), tol)?;
            Ok(Outcome::holds(true, json!({
                "method": name,
                "minimal": antichain_json(&min),
                "text": min.to_string(),
                "residual": sci(check.residual),
            })))
        }
        Command::Hull { table } => {
            let f = load(table, PositiveTable::from_json)?;
            let hull = graphical_hull(&f, tol)?;
            Ok(Outcome::holds(true, json!({
                "hull": antichain_json(&hull),
                "text": hull.to_string(),
            })))
        }
        Command::Ci { distribution, x, y, z } => {
            let p = load(distribution, JointDistribution::from_json)?;
            let index = p.space().index_set();
            let (xs, ys, zs) = (labels(index, x)?, labels(index, y)?, labels(index, z)?);
            let r = p.ci_test(xs, ys, zs, tol)?;
            let mut report = ci_json(&r);
            report["x"] = json!(index.subset_labels(xs));
            report["y"] = json!(index.subset_labels(ys));
            report["z"] = json!(index.subset_labels(zs));
            Ok(Outcome::holds(r.independent && r.membership.member, report))
        }
        Command::Graphoid { distribution } => {
            let p = load(distribution, JointDistribution::from_json)?;
            let r = graphoid_check(&p, tol)?;
            Ok(Outcome::holds(r.holds, graphoid_json(&r)))
        }
        Command::Markov { table, graph, mode } => {
            let f = load(table, PositiveTable::from_json)?;
            let g = load(graph, Graph::from_json)?;
            let mode = match mode {
                Mode::Pairwise => MarkovMode::Pairwise,
                Mode::Local => MarkovMode::Local,
            };
            let r = markov_test(&f, &g, mode, tol)?;
            let mut report = markov_json(&r);
            report["mode"] = json!(match mode {
                MarkovMode::Pairwise => "pairwise",
                MarkovMode::Local => "local",
            });
            Ok(Outcome::holds(r.holds, report))
        }
        Command::Hc { table, graph } => {
            let f = load(table, PositiveTable::from_json)?;
            let g = load(graph, Graph::from_json)?;
            if g.len() > MAX_CLIQUE_VERTICES {
                return Err(factorspace::Error::TooManyVertices(g.len()).into());
            }
            let r = hc_check(&f, &g, tol)?;
            let cliques = clique_complex(&g)?;
            Ok(Outcome::holds(r.agree, json!({
                "agree": r.agree,
                "pairwise": markov_json(&r.pairwise),
                "local": markov_json(&r.local),
                "cliques": {
                    "maximal": antichain_json(cliques.maximal()),
                    "member": r.cliques.member,
                    "residual": sci(r.cliques.residual),
                },
            })))
        }
        Command::VerifyIntersection { n, trials } => {
            let r = suites::intersection(*n, *trials, tol, &mut rng)?;
            let mut report = suite_json(&r);
            report["n"] = json!(n);
            report["trials"] = json!(trials);
            report["seed"] = json!(cli.seed);
            Ok(Outcome::holds(r.passed(), report))
        }
        Command::VerifyCliques { n } => {
            let r = suites::cliques(*n)?;
            let mut report = suite_json(&r);
            report["n"] = json!(n);
            Ok(Outcome::holds(r.passed(), report))
        }
        Command::Verify { n, trials } => {
            let reports = vec![
                suites::covering_laws(3)?,
                suites::intersection(*n, *trials, tol, &mut rng)?,
                suites::refactor(*n, *trials, tol, &mut rng)?,
                suites::cliques(6)?,
                suites::hammersley_clifford(4, *trials, tol, &mut rng)?,
                suites::graphoid(*trials, tol, &mut rng)?,
                suites::minimal_factorizations(10, trials.div_ceil(10), tol, &mut rng)?,
                suites::ci_routes(*trials, tol, &mut rng)?,
            ];
            let passed = reports.iter().all(SuiteReport::passed);
            Ok(Outcome::holds(passed, json!({
                "passed": passed,
                "seed": cli.seed,
                "n": n,
                "trials": trials,
                "tol": sci(tol),
                "normalization_tol": sci(NORMALIZATION_TOL),
                "suites": reports.iter().map(suite_json).collect::<Vec<_>>(),
            })))
        }
    }
}
