//! Acceptance suite: one line per criterion. All comparisons are exact
//! (tolerance 0); runtime budgets are checked on top.

use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::Zero;

use reacert::certificate::Certificate;
use reacert::charpoly::{AlphaTable, Engine};
use reacert::checks::{self, Timer};
use reacert::oracle::{self, EvalCheck, RepKind};
use reacert::qstruct::{solve_eps, EpsilonTensor, RHat};
use reacert::rea::{derive_relations, RewriteSystem, Word};
use reacert::ring::{eval_at, RatFunc};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const T: Timer = Timer { enabled: false };

fn all_pass(certs: &[Certificate]) -> Result<usize, String> {
    match certs.iter().find(|c| !c.passed()) {
        None => Ok(certs.len()),
        Some(c) => Err(c.to_text_line()),
    }
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    let e = start.elapsed();
    if e <= budget {
        Ok(())
    } else {
        Err(format!("took {e:?}, budget {budget:?}"))
    }
}

fn q(s: &str) -> BigRational {
    oracle::parse_q(s).unwrap()
}

/// Dense rank over Q of the relations evaluated at `q0`.
fn numeric_relation_rank(n: usize, q0: &BigRational) -> usize {
    let words = Word::all_of_length(n, 2);
    let mut rows: Vec<Vec<BigRational>> = derive_relations(n)
        .unwrap()
        .iter()
        .map(|r| {
            words
                .iter()
                .map(|w| {
                    r.coeff(w)
                        .map(|c| eval_at(c, q0).unwrap())
                        .unwrap_or_else(BigRational::zero)
                })
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..words.len() {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = &row[col] / &pivot[col];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn axioms() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for n in 2..=5 {
        let certs = checks::axioms(n, T).map_err(|e| e.to_string())?;
        // braid + Hecke for every n; ε checks are certificates 3 and 4
        let wanted: &[&str] = if n <= 4 {
            &[
                "rhat-yang-baxter",
                "rhat-hecke",
                "eps-eigenrelation",
                "eps-norm",
            ]
        } else {
            &["rhat-yang-baxter", "rhat-hecke"]
        };
        let subset: Vec<_> = certs
            .into_iter()
            .filter(|c| wanted.contains(&c.claim.as_str()))
            .collect();
        count += all_pass(&subset)?;
    }
    for n in 2..=4 {
        let (eps, dim) =
            solve_eps(&RHat::build(n).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        if dim != 1 || eps != EpsilonTensor::build(n) {
            return Err(format!(
                "eliminated epsilon differs from the closed form at n={n}"
            ));
        }
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!(
        "{count} certificates, eps kernel is one-dimensional for n=2..4"
    ))
}

fn flatness() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for (n, words) in [(2usize, 64usize), (3, 729)] {
        let sys = RewriteSystem::for_rank(n).map_err(|e| e.to_string())?;
        all_pass(&checks::relations(&sys, T))?;
        let c = checks::confluence(&sys, 3, T);
        all_pass(std::slice::from_ref(&c))?;
        if c.params["words"] != words.to_string() {
            return Err(format!(
                "confluence checked {} words at n={n}",
                c.params["words"]
            ));
        }
        let expected = n * n * (n * n - 1) / 2;
        for s in ["3/5", "7/2"] {
            let r = numeric_relation_rank(n, &q(s));
            if r != expected {
                return Err(format!("numeric rank {r} at q={s}, n={n}"));
            }
        }
        notes.push(format!("n={n}: rank {expected}, {words} words"));
    }
    within(start, Duration::from_secs(60))?;
    Ok(notes.join("; "))
}

fn with_engines(
    f: impl Fn(&Engine<'_, RewriteSystem>) -> Result<usize, String>,
) -> Result<usize, String> {
    let mut total = 0;
    for n in 2..=3 {
        let sys = RewriteSystem::for_rank(n).map_err(|e| e.to_string())?;
        let e = Engine::new(&sys).map_err(|e| e.to_string())?;
        total += f(&e)?;
    }
    Ok(total)
}

fn centrality() -> Outcome {
    let k = with_engines(|e| all_pass(&checks::central(e, T)))?;
    Ok(format!("{k} central elements commute with every generator"))
}

fn newton() -> Outcome {
    let start = Instant::now();
    let k = with_engines(|e| {
        let mut certs = checks::newton(e, T);
        certs.extend(checks::telescoping(e, T));
        all_pass(&certs)
    })?;
    within(start, Duration::from_secs(300))?;
    Ok(format!("{k} certificates including telescoping steps"))
}

fn charpoly() -> Outcome {
    let k = with_engines(|e| all_pass(&[checks::charpoly(e, T)]))?;
    Ok(format!("{k} coefficient-wise equalities"))
}

fn bmatrix() -> Outcome {
    let k = with_engines(|e| all_pass(&[checks::bmatrix(e, 2, T)]))?;
    let sys = RewriteSystem::for_rank(2).map_err(|e| e.to_string())?;
    let e = Engine::new(&sys).map_err(|e| e.to_string())?;
    if checks::bmatrix(&e, 3, T).passed() {
        return Err("beta = q^3 satisfied the relation at n=2".into());
    }
    Ok(format!(
        "{k} relations hold, beta=q^3 control fails as required"
    ))
}

fn cayley() -> Outcome {
    let start = Instant::now();
    let k = with_engines(|e| all_pass(&checks::cayley(e, T)))?;
    within(start, Duration::from_secs(600))?;
    Ok(format!("{k} orderings normal-form to zero"))
}

fn inverse_and_higher() -> Outcome {
    let k = with_engines(|e| {
        let mut certs = checks::inverse(e, T);
        certs.extend((0..=2).map(|p| checks::higher(e, p, T)));
        // s_q(N+1) from the recurrence matches the direct trace
        let n = e.n();
        let direct = e.s_q(n + 1);
        if e.higher_trace_expression(1) != direct {
            return Err(format!("s_q({}) recurrence mismatch", n + 1));
        }
        all_pass(&certs)
    })?;
    Ok(format!("{k} certificates"))
}

fn alpha() -> Outcome {
    for n in 1..=6 {
        all_pass(&checks::alpha(n, T).map_err(|e| e.to_string())?)?;
    }
    if *AlphaTable::closed_form(2).get(1) != RatFunc::q_pow(-2) {
        return Err("alpha_1 at n=2 is not q^-2".into());
    }
    Ok("closed form meets recursion and anchor for n=1..6".into())
}

fn oracle_soundness() -> Outcome {
    let mut count = 0;
    for n in 2..=3 {
        let sys = RewriteSystem::for_rank(n).map_err(|e| e.to_string())?;
        let e = Engine::new(&sys).map_err(|e| e.to_string())?;
        for kind in [RepKind::Identity, RepKind::RSquared] {
            for s in ["3/5", "7/2"] {
                let certs =
                    checks::eval(n, &q(s), kind, EvalCheck::All, T).map_err(|e| e.to_string())?;
                if kind == RepKind::Identity
                    && !certs.iter().any(|c| c.claim == "oracle-identity-rep-sigma")
                {
                    return Err("identity-rep value checks missing".into());
                }
                count += all_pass(&certs)?;
                count +=
                    all_pass(&checks::agreement(&e, &q(s), kind, T).map_err(|e| e.to_string())?)?;
            }
        }
    }
    Ok(format!("{count} exact evaluations"))
}

fn classical() -> Outcome {
    let r = oracle::classical_check_matrix(reacert::rea::Matrix::from_fn(2, |i, j| {
        reacert::ring::Rat::int([1, 2, 3, 4][i * 2 + j])
    }))
    .map_err(|e| e.to_string())?;
    let z = |v: i64| BigRational::from_integer(v.into());
    if !r.passed()
        || r.sigma_minors[1] != z(5)
        || r.sigma_minors[2] != z(-2)
        || r.s_trace[2] != z(29)
    {
        return Err(format!("worked example: {:?}", r.disagreements));
    }
    let mut count = 0;
    for n in 2..=4 {
        for seed in 0..20 {
            count += all_pass(&[oracle::classical_check(n, seed).map_err(|e| e.to_string())?])?;
        }
    }
    Ok(format!(
        "worked example and {count} seeded matrices agree on all paths"
    ))
}

fn determinism() -> Outcome {
    let run = |n: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_reacert"))
            .args(["suite", "--n", n, "--json"])
            .output()
            .map_err(|e| e.to_string())?;
        if o.status.code() != Some(0) {
            return Err(format!("suite --n {n} exited {:?}", o.status.code()));
        }
        Ok(o.stdout)
    };
    let mut notes = Vec::new();
    for n in ["2", "3"] {
        let (a, b) = (run(n)?, run(n)?);
        if a != b {
            return Err(format!("suite --n {n} output differs between runs"));
        }
        notes.push(format!("n={n}: {} bytes", a.len()));
    }
    Ok(notes.join(", "))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("axioms", axioms),
        ("flatness", flatness),
        ("centrality", centrality),
        ("quantum-newton", newton),
        ("charpoly-forms", charpoly),
        ("b-matrix", bmatrix),
        ("cayley-hamilton", cayley),
        ("inverse-higher-traces", inverse_and_higher),
        ("alpha-table", alpha),
        ("oracle-soundness", oracle_soundness),
        ("classical-limit", classical),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(note) => println!(
                "criterion {:>2} {name}: PASS (tolerance: exact, {ms} ms) {note}",
                k + 1
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "criterion {:>2} {name}: FAIL (tolerance: exact, {ms} ms) {why}",
                    k + 1
                );
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
