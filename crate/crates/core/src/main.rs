use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use reacert::certificate::Certificate;
use reacert::charpoly::Engine;
use reacert::checks::{self, ensure_range, Timer};
use reacert::error::{Error, Result};
use reacert::oracle::{self, EvalCheck, RepKind};
use reacert::qstruct::{EpsilonTensor, RHat};
use reacert::rea::RewriteSystem;
use reacert::ring::CanonicalText;

/// Exact certificates for characteristic identities of the GL_q(N)
/// reflection equation algebra.
#[derive(Parser)]
#[command(name = "reacert", version)]
struct Cli {
    /// Size N of the generator matrix.
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,
    /// Emit certificates as JSON lines.
    #[arg(long, global = true)]
    json: bool,
    /// Write output to FILE (`-` for standard output).
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<String>,
    /// Record wall time in each certificate.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum RepArg {
    Identity,
    Rsquared,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Newton,
    Cayley,
    Inverse,
    All,
}

#[derive(Subcommand)]
enum Cmd {
    /// Braid relation, Hecke condition, ε eigenrelation and norm, quantum trace.
    Axioms,
    /// Print R̂ in the operator dump format.
    DumpRhat,
    /// Print ε_q in the operator dump format.
    DumpEps,
    /// Relation rank and PBW leading words.
    Relations {
        /// Also print the rewrite rules.
        #[arg(long)]
        dump: bool,
    },
    /// Normal forms agree for every rewriting order on all words of a degree.
    Confluence {
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
    /// Centrality of s_q(i) and σ_q(i).
    Central {
        /// Also print the normal forms.
        #[arg(long)]
        values: bool,
    },
    /// Quantum Newton relations.
    Newton {
        /// Also check every telescoping step.
        #[arg(long)]
        telescoping: bool,
    },
    /// Product form of the characteristic polynomial against the σ form.
    Charpoly,
    /// Symmetrizer commutation and trace relations.
    Symmetrizer,
    /// The B-matrix relation.
    Bmatrix {
        /// Exponent b of the shift β = q^b.
        #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
        beta: i32,
        /// Also run the β = q³ negative control.
        #[arg(long)]
        control: bool,
    },
    /// Cayley–Hamilton identity in both orderings.
    Cayley,
    /// Inverse formula from the characteristic identity.
    Inverse,
    /// Recurrence for higher traces.
    Higher {
        #[arg(long, default_value_t = 1)]
        p: usize,
    },
    /// Normalising constants α_i.
    Alpha,
    /// The quantum determinant.
    Det,
    /// Evaluate identities in a concrete representation.
    Eval {
        #[arg(long, value_parser = parse_q_arg, default_value = "3/5")]
        q: BigRational,
        #[arg(long, value_enum, default_value = "identity")]
        rep: RepArg,
        #[arg(long, value_enum, default_value = "all")]
        check: CheckArg,
    },
    /// Classical check at q = 1 on a seeded random matrix.
    Classical {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Every check for one N.
    Suite,
}

fn parse_q_arg(s: &str) -> std::result::Result<BigRational, String> {
    oracle::parse_q(s).map_err(|e| e.to_string())
}

struct Output {
    lines: Vec<String>,
    certs: Vec<Certificate>,
}

impl Output {
    fn new() -> Self {
        Self {
            lines: Vec::new(),
            certs: Vec::new(),
        }
    }
}

fn symbolic(n: usize, what: &str) -> Result<RewriteSystem> {
    ensure_range(what, n, 2, 4)?;
    RewriteSystem::for_rank(n)
}

fn run(cli: &Cli, out: &mut Output) -> Result<()> {
    let n = cli.n;
    let t = Timer {
        enabled: cli.timing,
    };
    match &cli.cmd {
        Cmd::Axioms => out.certs = checks::axioms(n, t)?,
        Cmd::DumpRhat => {
            ensure_range("dump-rhat", n, 2, 5)?;
            out.lines
                .push(RHat::build(n)?.op().to_json().trim_end().to_string());
        }
        Cmd::DumpEps => {
            ensure_range("dump-eps", n, 2, 5)?;
            out.lines.push(
                EpsilonTensor::build(n)
                    .tensor()
                    .to_json()
                    .trim_end()
                    .to_string(),
            );
        }
        Cmd::Relations { dump } => {
            let sys = symbolic(n, "relations")?;
            if *dump {
                for (w, tail) in sys.rules() {
                    out.lines.push(if cli.json {
                        serde_json::json!({"lead": w.to_string(), "tail": tail.to_text()})
                            .to_string()
                    } else {
                        format!("{w} -> {}", tail.to_text())
                    });
                }
            }
            out.certs = checks::relations(&sys, t);
        }
        Cmd::Confluence { degree } => {
            let sys = symbolic(n, "confluence")?;
            if *degree > 6 {
                return Err(Error::InvalidInput(
                    "confluence degree must be at most 6".into(),
                ));
            }
            out.certs.push(checks::confluence(&sys, *degree, t));
        }
        Cmd::Central { values } => {
            let sys = symbolic(n, "central")?;
            let e = Engine::new(&sys)?;
            out.certs = checks::central(&e, t);
            if *values && !cli.json {
                out.lines = checks::central_values(&e);
            }
        }
        Cmd::Newton { telescoping } => {
            let sys = symbolic(n, "newton")?;
            let e = Engine::new(&sys)?;
            out.certs = checks::newton(&e, t);
            if *telescoping {
                out.certs.extend(checks::telescoping(&e, t));
            }
        }
        Cmd::Charpoly => {
            let sys = symbolic(n, "charpoly")?;
            out.certs.push(checks::charpoly(&Engine::new(&sys)?, t));
        }
        Cmd::Symmetrizer => {
            let sys = symbolic(n, "symmetrizer")?;
            out.certs = checks::symmetrizer(&Engine::new(&sys)?, t);
        }
        Cmd::Bmatrix { beta, control } => {
            let sys = symbolic(n, "bmatrix")?;
            let e = Engine::new(&sys)?;
            out.certs.push(checks::bmatrix(&e, *beta, t));
            if *control {
                out.certs.push(checks::bmatrix_control(&e, t));
            }
        }
        Cmd::Cayley => {
            let sys = symbolic(n, "cayley")?;
            out.certs = checks::cayley(&Engine::new(&sys)?, t);
        }
        Cmd::Inverse => {
            let sys = symbolic(n, "inverse")?;
            out.certs = checks::inverse(&Engine::new(&sys)?, t);
        }
        Cmd::Higher { p } => {
            let sys = symbolic(n, "higher")?;
            out.certs.push(checks::higher(&Engine::new(&sys)?, *p, t));
        }
        Cmd::Alpha => {
            out.certs = checks::alpha(n, t)?;
            if !cli.json {
                out.lines = checks::alpha_rows(n);
            }
        }
        Cmd::Det => {
            let sys = symbolic(n, "det")?;
            let e = Engine::new(&sys)?;
            if !cli.json {
                out.lines.push(format!("det = {}", e.det_l().to_text()));
            }
            out.certs = checks::det(&e, t)?;
        }
        Cmd::Eval { q, rep, check } => {
            let kind = match rep {
                RepArg::Identity => RepKind::Identity,
                RepArg::Rsquared => RepKind::RSquared,
            };
            let check = match check {
                CheckArg::Newton => EvalCheck::Newton,
                CheckArg::Cayley => EvalCheck::Cayley,
                CheckArg::Inverse => EvalCheck::Inverse,
                CheckArg::All => EvalCheck::All,
            };
            out.certs = checks::eval(n, q, kind, check, t)?;
        }
        Cmd::Classical { seed } => out.certs.push(checks::classical(n, *seed, t)?),
        Cmd::Suite => out.certs = checks::suite(n, t)?,
    }
    Ok(())
}

fn write_all(target: Option<&str>, text: &str) -> io::Result<()> {
    match target {
        None | Some("-") => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
        Some(path) => fs::write(path, text),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Output::new();
    if let Err(e) = run(&cli, &mut out) {
        eprintln!("error: {e}");
        return match e {
            Error::InvalidInput(_) | Error::Parse(_) => ExitCode::from(2),
            _ => ExitCode::from(1),
        };
    }
    let mut text = String::new();
    for l in &out.lines {
        text.push_str(l);
        text.push('\n');
    }
    for c in &out.certs {
        text.push_str(&if cli.json {
            c.to_json_line()
        } else {
            c.to_text_line()
        });
        text.push('\n');
    }
    if let Err(e) = write_all(cli.out.as_deref(), &text) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if out.certs.iter().all(Certificate::passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
