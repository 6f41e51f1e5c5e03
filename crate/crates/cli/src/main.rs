use clap::{Parser, Subcommand};
use gcrossed_core::checks::check_all;
use gcrossed_core::diagram::parse_diagram;
use gcrossed_core::evaluator::evaluate;
use gcrossed_core::fusion::{modular_report, omega};
use gcrossed_core::kirby::kirby_fuzz;
use gcrossed_core::surgery::{linking_data, parse_link, tau_at, verlinde_rank};
use gcrossed_core::CategoryData;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "gcrossed", version, about = "Exact computations with pointed G-crossed ribbon categories")]
struct Cli {
    /// Print a JSON document instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify every axiom of a category file
    Check { category: PathBuf },
    /// S-matrix over the neutral labels, as CSV
    Smatrix { category: PathBuf },
    /// Coefficients of ω for a group element, as CSV
    Omega { category: PathBuf, element: String },
    /// Gauss sums, global dimension and rank, as CSV
    Gauss { category: PathBuf },
    /// Evaluate a colored diagram document
    EvalDiagram { category: PathBuf, diagram: PathBuf },
    /// Surgery invariant of a link document
    Tau {
        category: PathBuf,
        link: PathBuf,
        /// Append the contribution of every base coloring as CSV
        #[arg(long)]
        terms: bool,
    },
    /// Random Kirby move sequences checking that τ is unchanged
    KirbyFuzz {
        category: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of (presentation, move sequence) pairs
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Rank of the genus-n state space for commuting data α_i, β_i
    Verlinde {
        category: PathBuf,
        /// Comma-separated group elements
        #[arg(long, default_value = "")]
        alpha: String,
        #[arg(long, default_value = "")]
        beta: String,
    },
}

enum Failure {
    Io(String),
    Validation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Validation(_) => 2,
        }
    }
}

struct Output {
    text: String,
    ok: bool,
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_category(path: &Path) -> Result<CategoryData, Failure> {
    let text = read(path)?;
    CategoryData::load(&text).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn csv_text(rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(vec![]);
    for r in rows {
        w.write_record(r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8")
}

fn pretty(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json");
    s.push('\n');
    s
}

fn elements(c: &CategoryData, list: &str) -> Result<Vec<usize>, Failure> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| c.group.index(s).ok_or_else(|| Failure::Validation(format!("unknown group element {s}"))))
        .collect()
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let json = cli.json;
    match &cli.command {
        Command::Check { category } => {
            let c = load_category(category)?;
            let r = check_all(&c);
            let ok = r.passed();
            let text = if json {
                pretty(json!({ "passed": ok, "checked": r.checked, "failures": r.failures }))
            } else {
                let mut s = String::new();
                for l in r.summary_lines() {
                    s.push_str(&l);
                    s.push('\n');
                }
                for f in &r.failures {
                    s.push_str(&format!("failure: {} at {}: {} != {}\n", f.axiom, f.instance, f.lhs, f.rhs));
                }
                s.push_str(if ok { "result: pass\n" } else { "result: fail\n" });
                s
            };
            Ok(Output { text, ok })
        }
        Command::Smatrix { category } => {
            let c = load_category(category)?;
            let m = modular_report(&c);
            let names: Vec<String> = m.neutral_labels.iter().map(|&x| c.labels.name(x).to_string()).collect();
            let text = if json {
                let rows: Vec<Vec<String>> = m.s_matrix.iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect();
                pretty(json!({ "labels": names, "s_matrix": rows, "determinant": m.determinant.to_string(), "invertible": m.invertible }))
            } else {
                let mut rows = vec![std::iter::once(String::new()).chain(names.iter().cloned()).collect::<Vec<_>>()];
                for (name, r) in names.iter().zip(&m.s_matrix) {
                    rows.push(std::iter::once(name.clone()).chain(r.iter().map(|v| v.to_string())).collect());
                }
                csv_text(&rows)
            };
            Ok(Output { text, ok: true })
        }
        Command::Omega { category, element } => {
            let c = load_category(category)?;
            let g = elements(&c, element)?;
            if g.len() != 1 {
                return Err(Failure::Validation("omega takes one group element".into()));
            }
            let w = omega(&c, g[0]);
            let terms: Vec<(String, String)> = w.terms().map(|(x, v)| (c.labels.name(x).to_string(), v.to_string())).collect();
            let text = if json {
                let entries: Vec<_> = terms.iter().map(|(l, v)| json!({ "label": l, "coefficient": v })).collect();
                pretty(json!({ "element": c.group.name(g[0]), "terms": entries }))
            } else {
                let mut rows = vec![vec!["label".to_string(), "coefficient".to_string()]];
                rows.extend(terms.into_iter().map(|(l, v)| vec![l, v]));
                csv_text(&rows)
            };
            Ok(Output { text, ok: true })
        }
        Command::Gauss { category } => {
            let c = load_category(category)?;
            let m = modular_report(&c);
            let vals = [m.delta_plus.to_string(), m.delta_minus.to_string(), m.global_dim.to_string(), c.rank().to_string()];
            let text = if json {
                pretty(json!({ "delta_plus": vals[0], "delta_minus": vals[1], "global_dim": vals[2], "rank": vals[3] }))
            } else {
                let head = ["delta_plus", "delta_minus", "global_dim", "rank"].map(String::from).to_vec();
                csv_text(&[head, vals.to_vec()])
            };
            Ok(Output { text, ok: true })
        }
        Command::EvalDiagram { category, diagram } => {
            let c = load_category(category)?;
            let d = parse_diagram(&read(diagram)?, &c).map_err(|e| Failure::Validation(e.to_string()))?;
            let m = evaluate(&d, &c).map_err(|e| Failure::Validation(e.to_string()))?;
            let obj = |o: &[gcrossed_core::diagram::Strand]| {
                o.iter().map(|s| format!("({},{})", c.labels.name(s.label), s.sign.symbol())).collect::<Vec<_>>().join(" ")
            };
            let text = if json {
                pretty(json!({ "source": obj(&m.source), "target": obj(&m.target), "value": m.value.to_string() }))
            } else {
                format!("source={}\ntarget={}\nvalue={}\n", obj(&m.source), obj(&m.target), m.value)
            };
            Ok(Output { text, ok: true })
        }
        Command::Tau { category, link, terms } => {
            let c = load_category(category)?;
            let l = parse_link(&read(link)?, &c).map_err(|e| Failure::Validation(e.to_string()))?;
            let r = tau_at(&l, &l.default_sites(), &c, *terms).map_err(|e| Failure::Validation(e.to_string()))?;
            let data = linking_data(&l);
            let term_rows: Vec<(Vec<String>, String)> = r
                .terms
                .iter()
                .flatten()
                .map(|(base, v)| (base.iter().map(|&x| c.labels.name(x).to_string()).collect(), v.to_string()))
                .collect();
            let text = if json {
                let mut doc = json!({
                    "tau": r.tau.to_string(),
                    "f_value": r.f_value.to_string(),
                    "sigma": r.sigma,
                    "sigma_plus": data.sigma_plus,
                    "sigma_minus": data.sigma_minus,
                    "components": r.num_components,
                    "linking_matrix": r.linking_matrix,
                });
                if *terms {
                    doc["terms"] = term_rows.iter().map(|(b, v)| json!({ "labels": b, "value": v })).collect();
                }
                pretty(doc)
            } else {
                let mut s = format!(
                    "tau={}\nf_value={}\nsigma={}\nsigma_plus={}\nsigma_minus={}\ncomponents={}\nlinking_matrix={}\n",
                    r.tau,
                    r.f_value,
                    r.sigma,
                    data.sigma_plus,
                    data.sigma_minus,
                    r.num_components,
                    serde_json::to_string(&r.linking_matrix).expect("json")
                );
                if *terms {
                    let mut rows = vec![(0..r.num_components).map(|i| format!("label{i}")).chain(["term".to_string()]).collect()];
                    rows.extend(term_rows.into_iter().map(|(b, v)| b.into_iter().chain([v]).collect()));
                    s.push_str(&csv_text(&rows));
                }
                s
            };
            Ok(Output { text, ok: true })
        }
        Command::KirbyFuzz { category, seed, steps } => {
            let c = load_category(category)?;
            let r = kirby_fuzz(&c, *steps, *seed, 3);
            let ok = r.passed();
            let text = if json {
                pretty(serde_json::to_value(&r).expect("json"))
            } else {
                let mut s = format!("pairs={}\n", r.pairs);
                for (k, v) in &r.moves {
                    s.push_str(&format!("moves.{k}={v}\n"));
                }
                s.push_str(&format!("regaugings={}\nconjugations={}\nfailures={}\n", r.regaugings, r.conjugations, r.failures.len()));
                for f in &r.failures {
                    s.push_str(&format!("failure: {f}\n"));
                }
                s.push_str(if ok { "result: pass\n" } else { "result: fail\n" });
                s
            };
            Ok(Output { text, ok })
        }
        Command::Verlinde { category, alpha, beta } => {
            let c = load_category(category)?;
            let (a, b) = (elements(&c, alpha)?, elements(&c, beta)?);
            let n = verlinde_rank(&c, &a, &b).map_err(|e| Failure::Validation(e.to_string()))?;
            let text = if json { pretty(json!({ "genus": a.len(), "rank": n })) } else { format!("genus={}\nrank={n}\n", a.len()) };
            Ok(Output { text, ok: true })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match std::panic::catch_unwind(|| run(&cli)) {
        Ok(Ok(out)) => {
            print!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Ok(Err(f)) => {
            let (Failure::Io(m) | Failure::Validation(m)) = &f;
            eprintln!("error: {m}");
            ExitCode::from(f.code())
        }
        Err(_) => {
            eprintln!("error: internal invariant breach");
            ExitCode::from(3)
        }
    }
}
