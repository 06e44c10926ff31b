//! `zxfloquet` command-line front end.
//!
//! Exit status: 0 on success, 1 when a check is refuted (a witness file is
//! written), 2 on bad usage or unreadable input.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zxfloquet::circuit::random_circuit;
use zxfloquet::fault::{zx_distance, DistanceOptions};
use zxfloquet::floquet::{code_params, floquetify, measurement_schedule, parse_code, PeriodicSchedule};
use zxfloquet::flow::verify_flow;
use zxfloquet::pauli::PauliString;
use zxfloquet::rewrite::{rule, verify_distance_preserving_with, verify_semantics_with, RuleName, Verdict, VerifyOptions};
use zxfloquet::synth::{ancilla_bound, decompose_measurement, synthesise};
use zxfloquet::tableau::web_agreement;
use zxfloquet::tensor::{InterpretConfig, DEFAULT_TOL};
use zxfloquet::web::{stabiliser_strings, WebAnalysis};
use zxfloquet::{Error, ZXDiagram};

#[derive(Parser, Debug)]
#[command(name = "zxfloquet", version, about = "Distance-preserving ZX rewriting and Floquetification")]
struct Cli {
    /// Numerical tolerance for map comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Largest intermediate tensor rank allowed during contraction.
    #[arg(long, global = true, default_value_t = InterpretConfig::default().budget)]
    budget: usize,
    /// Seed for randomised checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Turn a stabiliser code into a periodic schedule of one- and
    /// two-qubit operations.
    Floquetify {
        code: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print every rewrite applied.
        #[arg(long)]
        audit: bool,
        #[arg(long, default_value = "floquetify.witness")]
        witness: PathBuf,
    },
    /// Code parameters of a schedule file.
    Params { schedule: PathBuf },
    /// Least weight of an undetectable, non-trivial error in a diagram.
    Distance {
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long)]
        wmax: usize,
        /// Comma-separated edge ids to restrict errors to.
        #[arg(long, value_delimiter = ',')]
        window: Option<Vec<usize>>,
    },
    /// Certify a library rule: semantics and distance preservation.
    CheckRule {
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Pauli web spaces of a diagram.
    Webs { diagram: PathBuf },
    /// Decompose a Pauli measurement into a low-weight circuit.
    Decompose {
        #[arg(long)]
        pauli: String,
    },
    /// Compare web class counts with tableau group sizes on random
    /// circuits.
    Bijection {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        qubits: usize,
        #[arg(long, default_value_t = 4)]
        ops: usize,
        #[arg(long, default_value = "bijection.witness")]
        witness: PathBuf,
    },
}

/// Outcome of a subcommand that ran to completion.
enum Outcome {
    Ok(String),
    Refuted { report: String, witness: PathBuf, body: String },
}

fn read(p: &Path) -> Result<String, Error> {
    fs::read_to_string(p).map_err(|e| Error::Parse {
        line: 0,
        msg: format!("cannot read {}: {e}", p.display()),
    })
}

fn diagram(p: &Path) -> Result<ZXDiagram, Error> {
    ZXDiagram::from_text(&read(p)?)
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let cfg = InterpretConfig {
        budget: cli.budget,
        ..InterpretConfig::default()
    };
    match &cli.cmd {
        Cmd::Floquetify {
            code,
            out,
            audit,
            witness,
        } => {
            let code = parse_code(&read(code)?)?;
            let before = code_params(&measurement_schedule(&code))?;
            let f = floquetify(&code)?;
            let mut s = String::new();
            if *audit {
                for line in &f.audit {
                    let _ = writeln!(s, "# {line}");
                }
            }
            let text = f.schedule.to_text();
            match out {
                Some(p) => fs::write(p, &text).map_err(|e| Error::Schedule(format!("cannot write {}: {e}", p.display())))?,
                None => s.push_str(&text),
            }
            let _ = writeln!(s, "# original {before}");
            let _ = writeln!(s, "# floquet {} (ancillas {}, extra {})", f.params, f.ancillas, f.extra);
            if before.k != f.params.k || before.d != f.params.d {
                let mut body = format!("# original {before}\n# floquet {}\n", f.params);
                if let Some((t, p)) = &f.params.witness {
                    let _ = writeln!(body, "logical {p} at step {t}");
                }
                return Ok(Outcome::Refuted {
                    report: s,
                    witness: witness.clone(),
                    body,
                });
            }
            Ok(Outcome::Ok(s))
        }
        Cmd::Params { schedule } => {
            let s = PeriodicSchedule::from_text(&read(schedule)?)?;
            let p = code_params(&s)?;
            let mut out = format!("{p}\nestablished at step {}\n", p.established);
            if let Some((t, w)) = &p.witness {
                let _ = writeln!(out, "least logical {w} at step {t}");
            }
            Ok(Outcome::Ok(out))
        }
        Cmd::Distance { diagram: p, wmax, window } => {
            let d = diagram(p)?;
            let mut opts = DistanceOptions::new(*wmax);
            opts.window = window.clone();
            opts.tol = cli.tol;
            opts.interpret = cfg;
            Ok(Outcome::Ok(zx_distance(&d, &opts)?.to_text(&d)))
        }
        Cmd::CheckRule { name, n, witness } => {
            let name: RuleName = name.parse()?;
            let r = rule(name, n.or(name.default_n()))?;
            let sem = verify_semantics_with(&r, cli.tol, &cfg)?;
            let opts = VerifyOptions {
                tol: cli.tol,
                interpret: cfg,
                ..VerifyOptions::default()
            };
            let rep = verify_distance_preserving_with(&r, &opts)?;
            let mut s = format!("semantics {}\n", if sem { "equal" } else { "differ" });
            let _ = writeln!(s, "{}", rep.summary());
            let _ = writeln!(
                s,
                "forward: {} checked, {} detectable, {} pushed",
                rep.forward.checked, rep.forward.detectable, rep.forward.pushed
            );
            let _ = writeln!(
                s,
                "backward: {} checked, {} detectable, {} pushed",
                rep.backward.checked, rep.backward.detectable, rep.backward.pushed
            );
            if !sem || rep.verdict == Verdict::Refuted {
                let body = rep.witness_text(&r).unwrap_or_else(|| format!("# {}: semantics differ\n", r.label()));
                let path = witness
                    .clone()
                    .unwrap_or_else(|| PathBuf::from(format!("{}.witness", name.as_str().replace('+', "plus"))));
                return Ok(Outcome::Refuted {
                    report: s,
                    witness: path,
                    body,
                });
            }
            Ok(Outcome::Ok(s))
        }
        Cmd::Webs { diagram: p } => {
            let d = diagram(p)?;
            let a = WebAnalysis::new(&d);
            let mut s = String::new();
            let _ = writeln!(s, "webs {}", a.all.len());
            let _ = writeln!(s, "detecting regions {}", a.detecting.len());
            let _ = writeln!(s, "stabilising classes 2^{}", a.stabilising_classes_log2());
            let _ = writeln!(s, "co-stabilising classes 2^{}", a.costabilising_classes_log2());
            let _ = writeln!(s, "logical classes 2^{}", a.logical_classes_log2());
            for p in stabiliser_strings(&d, &a) {
                let _ = writeln!(s, "stabiliser {p}");
            }
            for (i, w) in a.detecting.iter().enumerate() {
                let _ = writeln!(s, "# region {i}");
                s.push_str(&w.to_text(&d));
            }
            Ok(Outcome::Ok(s))
        }
        Cmd::Decompose { pauli } => {
            let p: PauliString = pauli.parse()?;
            let dec = decompose_measurement(&p)?;
            let (c, audit) = synthesise(&p)?;
            let mut s = c.to_text();
            let _ = writeln!(s, "# decomposition flow: {} paths", dec.flow.paths.len());
            for line in verify_flow(&dec.diagram, &dec.flow).to_string().lines() {
                let _ = writeln!(s, "# {line}");
            }
            for line in audit {
                let _ = writeln!(s, "# {line}");
            }
            let w = p.weight();
            let _ = writeln!(
                s,
                "# qubits {} = {} data + {} ancillas; ancilla bound {:.3}",
                c.qubits,
                p.num_qubits(),
                c.qubits - p.num_qubits(),
                ancilla_bound(w)
            );
            Ok(Outcome::Ok(s))
        }
        Cmd::Bijection {
            samples,
            qubits,
            ops,
            witness,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let (mut checked, mut skipped) = (0, 0);
            for i in 0..*samples {
                let c = random_circuit(&mut rng, *qubits, *ops);
                match web_agreement(&c, cli.tol)? {
                    None => skipped += 1,
                    Some(a) if a.holds() => checked += 1,
                    Some(a) => {
                        return Ok(Outcome::Refuted {
                            report: format!("sample {i} disagrees: {a:?}\n"),
                            witness: witness.clone(),
                            body: c.to_text(),
                        })
                    }
                }
            }
            Ok(Outcome::Ok(format!("{checked} circuits agree, {skipped} zero maps skipped\n")))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok(s)) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Refuted { report, witness, body }) => {
            print!("{report}");
            if let Err(e) = fs::write(&witness, body) {
                eprintln!("error: cannot write witness {}: {e}", witness.display());
            } else {
                println!("witness written to {}", witness.display());
            }
            ExitCode::from(1)
        }
        Err(Error::NotEstablished) => {
            eprintln!("error: {}", Error::NotEstablished);
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
