use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ontoprob::geometry::{
    born_rule, lift_classical, lift_tfu, relative_born_ratio, DiagonalProjector, Signs, StateVector,
};
use ontoprob::prob::{probability, we_inequality_slack, ClassicalJoint, Event};
use ontoprob::qubit::{
    complexify, qubit_born, sg_probability, PolarState, QubitProjector, WeQuantumTable,
};
use ontoprob::repro::{reports_to_csv, reports_to_json, repro_all, repro_claim, CLAIMS};
use ontoprob::sim::{run, WorldSpec};
use ontoprob::tfu::{
    commutation_gap, strengthened_we_slack, tfu_label, RelEvent, SearchSupport, TfuJoint,
    ViolationSearch,
};

/// Slack below which an inequality counts as violated.
const SLACK_TOL: f64 = 1e-12;

#[derive(Parser)]
#[command(
    name = "ontoprob",
    version,
    about = "Relative (observability-conditioned) probability toolkit"
)]
struct Cli {
    /// RNG seed for randomized checks and simulation.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run the reproduction checks.
    Repro {
        /// Run every claim.
        #[arg(long, conflicts_with = "claim")]
        all: bool,
        /// Run one claim by id.
        #[arg(long)]
        claim: Option<String>,
        /// List claim ids and exit.
        #[arg(long)]
        list: bool,
    },
    /// Run a shielded-world simulation and emit the empirical joint.
    Simulate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
    },
    /// Compare [p][q]_p with [q][p]_q on a T/F/U joint.
    Noncommute {
        #[arg(long)]
        joint: PathBuf,
        #[arg(long, default_value = "0")]
        p: String,
        #[arg(long, default_value = "1")]
        q: String,
    },
    /// Map single-proposition (T, F, U) masses to polar angles and a qubit.
    Complexify {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        f: f64,
        #[arg(long)]
        u: f64,
    },
    /// Spin-1/2 joint probability p(N_alpha, S_beta).
    Sg {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        /// Angles are in degrees (default radians).
        #[arg(long)]
        degrees: bool,
    },
    /// Quantum side of the WE inequality at 0, 45 and 90 degrees.
    WeQuantum,
    /// Evaluate the WE inequality on a joint; fails when it is violated.
    WeCheck {
        #[arg(long)]
        joint: PathBuf,
        /// Treat the joint as T/F/U and use relative probabilities.
        #[arg(long)]
        tfu: bool,
        #[arg(long, default_value_t = 0)]
        a: usize,
        #[arg(long, default_value_t = 1)]
        b: usize,
        #[arg(long, default_value_t = 2)]
        c: usize,
    },
    /// Search for a T/F/U joint violating the relative WE inequality.
    SearchViolation {
        #[arg(long, default_value_t = 5)]
        resolution: u32,
        /// Restrict the search to joints without U mass.
        #[arg(long)]
        u_free: bool,
    },
    /// Square-root lift of a joint to a unit vector.
    Lift {
        #[arg(long)]
        joint: PathBuf,
        #[arg(long)]
        tfu: bool,
        /// Bit i flips the sign of component i.
        #[arg(long, default_value_t = 0)]
        signs: u64,
    },
    /// Born-rule value of an event on the lifted joint.
    Born {
        #[arg(long)]
        joint: PathBuf,
        /// Classical event such as "0 & !1 | 2", or a conjunction of
        /// literals with --tfu.
        #[arg(long)]
        event: String,
        #[arg(long)]
        tfu: bool,
    },
}

/// Command result: payloads for both formats and whether checks passed.
struct Output {
    json: Value,
    csv: String,
    pass: bool,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn kv_csv(rows: &[(&str, String)]) -> String {
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        out.push_str(&format!("{k},{v}\n"));
    }
    out
}

fn tfu_csv(joint: &TfuJoint) -> String {
    let mut out = String::from("state,weight\n");
    for (i, w) in joint.weights().iter().enumerate() {
        if *w != 0.0 {
            out.push_str(&format!("{},{w}\n", tfu_label(i, joint.n())));
        }
    }
    out
}

fn vector_output(s: &StateVector) -> Output {
    let rows: Vec<(String, f64)> = (0..s.dim())
        .map(|i| (s.basis().label(i), s.components()[i]))
        .collect();
    let mut csv = String::from("state,component\n");
    for (k, v) in &rows {
        csv.push_str(&format!("{k},{v}\n"));
    }
    Output {
        json: json!({
            "dim": s.dim(),
            "norm_sq": s.norm_sq(),
            "components": rows.iter().map(|(k, v)| json!({"state": k, "component": v})).collect::<Vec<_>>(),
        }),
        csv,
        pass: true,
    }
}

fn execute(cli: &Cli) -> Result<Output> {
    let seed = cli.seed.unwrap_or(0);
    Ok(match &cli.command {
        Command::Repro { all, claim, list } => {
            if *list {
                return Ok(Output {
                    json: json!(CLAIMS),
                    csv: format!("claim_id\n{}\n", CLAIMS.join("\n")),
                    pass: true,
                });
            }
            let reports = match (all, claim) {
                (_, Some(id)) => vec![repro_claim(id, seed)?],
                (true, None) => repro_all(seed)?,
                (false, None) => bail!("pass --all or --claim <id> (see --list)"),
            };
            let pass = reports.iter().all(|r| r.pass);
            Output {
                json: serde_json::from_str(&reports_to_json(&reports)?)?,
                csv: reports_to_csv(&reports)?,
                pass,
            }
        }
        Command::Simulate { spec, trials } => {
            let mut world: WorldSpec =
                serde_json::from_str(&read(spec)?).context("parsing world spec")?;
            if let Some(s) = cli.seed {
                world.seed = s;
            }
            let joint = run(&world, *trials)?.joint();
            Output {
                json: serde_json::from_str(&joint.to_json())?,
                csv: tfu_csv(&joint),
                pass: true,
            }
        }
        Command::Noncommute { joint, p, q } => {
            let joint = TfuJoint::from_json(&read(joint)?)?;
            let (p, q): (RelEvent, RelEvent) = (p.parse()?, q.parse()?);
            let g = commutation_gap(&joint, &p, &q)?;
            Output {
                json: json!({"p": p.to_string(), "q": q.to_string(), "left": g.left, "right": g.right, "gap": g.gap()}),
                csv: kv_csv(&[
                    ("left", g.left.to_string()),
                    ("right", g.right.to_string()),
                    ("gap", g.gap().to_string()),
                ]),
                pass: true,
            }
        }
        Command::Complexify { t, f, u } => {
            let polar = PolarState::from_masses(*t, *f, *u)?;
            let qubit = complexify(&polar);
            let (a, b) = qubit.amplitudes();
            let born = qubit_born(&qubit, &QubitProjector::truth());
            Output {
                json: json!({
                    "theta": polar.theta,
                    "phi": polar.phi,
                    "amplitudes": [[a.re, a.im], [b.re, b.im]],
                    "qubit_born": born,
                    "in_ratio_domain": polar.in_ratio_domain(),
                }),
                csv: kv_csv(&[
                    ("theta", polar.theta.to_string()),
                    ("phi", polar.phi.to_string()),
                    ("a_re", a.re.to_string()),
                    ("a_im", a.im.to_string()),
                    ("b_re", b.re.to_string()),
                    ("b_im", b.im.to_string()),
                    ("qubit_born", born.to_string()),
                    ("in_ratio_domain", polar.in_ratio_domain().to_string()),
                ]),
                pass: true,
            }
        }
        Command::Sg {
            alpha,
            beta,
            degrees,
        } => {
            let (a, b) = if *degrees {
                (alpha.to_radians(), beta.to_radians())
            } else {
                (*alpha, *beta)
            };
            let p = sg_probability(a, b);
            Output {
                json: json!({"alpha": alpha, "beta": beta, "degrees": degrees, "probability": p}),
                csv: kv_csv(&[("probability", p.to_string())]),
                pass: true,
            }
        }
        Command::WeQuantum => {
            let t = WeQuantumTable::compute();
            Output {
                json: json!({
                    "p_n0_s45": t.n0_s45,
                    "p_n45_s90": t.n45_s90,
                    "lhs": t.lhs,
                    "rhs": t.rhs,
                    "violated": t.violated(),
                }),
                csv: t.to_csv(),
                pass: t.violated(),
            }
        }
        Command::WeCheck {
            joint,
            tfu,
            a,
            b,
            c,
        } => {
            let text = read(joint)?;
            let (terms, slack) = if *tfu {
                let joint = TfuJoint::from_json(&text)?;
                let t = strengthened_we_slack(&joint, (*a).into(), (*b).into(), (*c).into())?;
                ([t.ab, t.not_b_c, t.ac], t.slack())
            } else {
                let joint = ClassicalJoint::from_json(&text)?;
                let (ea, eb, ec) = (Event::atom(*a), Event::atom(*b), Event::atom(*c));
                let pr = |e: Event| probability(&joint, &e);
                let terms = [
                    pr(ea.clone() & eb.clone())?,
                    pr(!eb.clone() & ec.clone())?,
                    pr(ea.clone() & ec.clone())?,
                ];
                (terms, we_inequality_slack(&joint, &ea, &eb, &ec)?)
            };
            let holds = slack >= -SLACK_TOL;
            Output {
                json: json!({"ab": terms[0], "not_b_c": terms[1], "ac": terms[2], "slack": slack, "holds": holds}),
                csv: kv_csv(&[
                    ("ab", terms[0].to_string()),
                    ("not_b_c", terms[1].to_string()),
                    ("ac", terms[2].to_string()),
                    ("slack", slack.to_string()),
                    ("holds", holds.to_string()),
                ]),
                pass: holds,
            }
        }
        Command::SearchViolation { resolution, u_free } => {
            if *resolution < 2 {
                bail!("resolution must be at least 2");
            }
            let search = ViolationSearch {
                resolution: *resolution,
                support: if *u_free {
                    SearchSupport::UFree
                } else {
                    SearchSupport::Full
                },
                seed,
                ..Default::default()
            };
            match search.run() {
                Some(w) => Output {
                    json: json!({
                        "found": true,
                        "joint": serde_json::from_str::<Value>(&w.joint.to_json())?,
                        "ab": w.terms.ab,
                        "not_b_c": w.terms.not_b_c,
                        "ac": w.terms.ac,
                        "slack": w.terms.slack(),
                        "source": format!("{:?}", w.source),
                    }),
                    csv: tfu_csv(&w.joint),
                    pass: true,
                },
                None => Output {
                    json: json!({"found": false}),
                    csv: "state,weight\n".to_string(),
                    pass: false,
                },
            }
        }
        Command::Lift { joint, tfu, signs } => {
            let text = read(joint)?;
            let s = if *tfu {
                let j = TfuJoint::from_json(&text)?;
                lift_tfu(&j, Some(&Signs::from_bits(j.dim(), *signs)))?
            } else {
                let j = ClassicalJoint::from_json(&text)?;
                lift_classical(&j, Some(&Signs::from_bits(j.dim(), *signs)))?
            };
            vector_output(&s)
        }
        Command::Born { joint, event, tfu } => {
            let text = read(joint)?;
            let (value, measure) = if *tfu {
                let j = TfuJoint::from_json(&text)?;
                let e: RelEvent = event.parse()?;
                e.validate(j.n())?;
                let n = j.n();
                let hat: Vec<bool> = (0..j.dim()).map(|i| e.holds(i, n)).collect();
                let bar: Vec<bool> = (0..j.dim()).map(|i| e.observable(i, n)).collect();
                let s = lift_tfu(&j, None)?;
                let ratio = relative_born_ratio(
                    &s,
                    &DiagonalProjector::from_mask(&hat),
                    &DiagonalProjector::from_mask(&bar),
                )?;
                (ratio, ontoprob::tfu::relative_probability(&j, &e)?)
            } else {
                let j = ClassicalJoint::from_json(&text)?;
                let e: Event = event.parse()?;
                let p = DiagonalProjector::from_event(j.n(), &e)?;
                (
                    born_rule(&lift_classical(&j, None)?, &p)?,
                    probability(&j, &e)?,
                )
            };
            let agree = (value - measure).abs() <= SLACK_TOL;
            Output {
                json: json!({"event": event, "born": value, "measure": measure, "agree": agree}),
                csv: kv_csv(&[
                    ("born", value.to_string()),
                    ("measure", measure.to_string()),
                    ("agree", agree.to_string()),
                ]),
                pass: agree,
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let mut text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&output.json).expect("serializable"),
        Format::Csv => output.csv,
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    let written = match &cli.out {
        Some(path) => fs::write(path, &text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if output.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
