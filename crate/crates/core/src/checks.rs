//! Certificate builders for every checked claim, shared by the CLI and tests.

use std::time::Instant;

use num_rational::BigRational;

use crate::certificate::{Certificate, ElemText, Residual};
use crate::charpoly::{AlphaTable, Engine, Order};
use crate::error::{Error, Result};
use crate::oracle::{self, block_matrix, build_rep, eval_identity, EvalCheck, RepKind};
use crate::qstruct::{
    eps_eigen_residuals, eps_norm_residual, hecke_residual, qtrace_rhat_residual,
    yang_baxter_residual, EpsilonTensor, RHat,
};
use crate::rea::RewriteSystem;
use crate::ring::{RatFunc, Ring};

/// Default sample points for oracle evaluation.
pub fn default_q_samples() -> Vec<BigRational> {
    crate::certificate::Q_SAMPLES
        .iter()
        .map(|s| oracle::parse_q(s).expect("valid sample"))
        .collect()
}

/// Seeds used by the suite's classical checks.
pub const SUITE_SEEDS: std::ops::Range<u64> = 0..5;

/// Records per-certificate wall time when enabled.
#[derive(Clone, Copy, Debug, Default)]
pub struct Timer {
    pub enabled: bool,
}

impl Timer {
    pub fn run(&self, f: impl FnOnce() -> Certificate) -> Certificate {
        let start = Instant::now();
        let mut c = f();
        if self.enabled {
            c.wall_time_ms = Some(start.elapsed().as_millis() as u64);
        }
        c
    }

    pub fn run_many(
        &self,
        f: impl FnOnce() -> Result<Vec<Certificate>>,
    ) -> Result<Vec<Certificate>> {
        let start = Instant::now();
        let mut cs = f()?;
        if self.enabled {
            let ms = start.elapsed().as_millis() as u64;
            for c in &mut cs {
                c.wall_time_ms = Some(ms);
            }
        }
        Ok(cs)
    }
}

pub fn ensure_range(what: &str, n: usize, lo: usize, hi: usize) -> Result<()> {
    if n < lo || n > hi {
        return Err(Error::InvalidInput(format!(
            "{what}: N must be in {lo}..={hi}, got {n}"
        )));
    }
    Ok(())
}

/// Braid relation, Hecke condition, ε eigenrelation (both sides), ε norm and
/// the quantum trace of `R̂`.
pub fn axioms(n: usize, t: Timer) -> Result<Vec<Certificate>> {
    ensure_range("axioms", n, 2, 8)?;
    let r = RHat::unchecked(n);
    let eps = EpsilonTensor::build(n);
    let mut out = vec![
        t.run(|| Certificate::from_residual("rhat-yang-baxter", n, &yang_baxter_residual(&r))),
        t.run(|| Certificate::from_residual("rhat-hecke", n, &hecke_residual(&r))),
    ];
    let (left, right) = eps_eigen_residuals(&r, &eps)?;
    out.push(t.run(|| {
        let w = [left.witness(), right.witness()]
            .iter()
            .zip(["left", "right"])
            .filter(|(w, _)| !w.is_empty())
            .map(|(w, side)| format!("{side}: {w}"))
            .collect::<Vec<_>>()
            .join(" || ");
        Certificate::new("eps-eigenrelation", n, w).param("sides", "left,right")
    }));
    out.push(t.run(|| {
        Certificate::from_residual("eps-norm", n, &eps_norm_residual(&eps).expect("N >= 1"))
    }));
    out.push(
        t.run(|| Certificate::from_residual("rhat-quantum-trace", n, &qtrace_rhat_residual(&r))),
    );
    Ok(out)
}

/// Rank of the relation span and the PBW leading-word check.
pub fn relations(sys: &RewriteSystem, t: Timer) -> Vec<Certificate> {
    let n = sys.n();
    let expected = n * n * (n * n - 1) / 2;
    let rank = sys.relation_rank();
    let rank_w = if rank == expected {
        String::new()
    } else {
        format!("rank {rank}, expected {expected}")
    };
    vec![
        t.run(|| {
            Certificate::new("relation-rank", n, rank_w)
                .param("rank", rank)
                .param("expected", expected)
        }),
        // A system only exists once the leading words matched the inversions.
        t.run(|| {
            let rules = sys.num_rules();
            let w = if rules == expected {
                String::new()
            } else {
                format!("{rules} rules")
            };
            Certificate::new("pbw-leading-words", n, w).param("rules", rules)
        }),
    ]
}

/// Rules as text lines, `lead -> tail`.
pub fn dump_rules(sys: &RewriteSystem) -> Vec<String> {
    sys.rules()
        .map(|(w, tail)| format!("{w} -> {}", tail.text()))
        .collect()
}

/// Strategy independence over every word of length `degree`.
pub fn confluence(sys: &RewriteSystem, degree: usize, t: Timer) -> Certificate {
    t.run(|| {
        let rep = sys.check_confluence(degree);
        let w = match &rep.counterexample {
            None => String::new(),
            Some((word, a, b)) => format!("{word}: {} vs {}", a.text(), b.text()),
        };
        Certificate::new("confluence", sys.n(), w)
            .param("degree", degree)
            .param("words", rep.words_checked)
    })
}

/// Centrality of `s_q(i)` and `σ_q(i)`, `i = 1..N`.
pub fn central(e: &Engine<'_, RewriteSystem>, t: Timer) -> Vec<Certificate> {
    let n = e.n();
    let mut out = Vec::new();
    for i in 1..=n {
        for (name, is_s) in [("central-s", true), ("central-sigma", false)] {
            out.push(t.run(|| {
                let v = if is_s { e.s_q(i) } else { e.sigma_q(i) };
                let w = match e.algebra().is_central(&v) {
                    Ok(()) => String::new(),
                    Err((g, r)) => format!("[{}, x] = {}", g.name(), r.text()),
                };
                Certificate::new(name, n, w)
                    .param("i", i)
                    .param("terms", v.num_terms())
            }));
        }
    }
    out
}

/// Newton relations for `i = 1..N`, each checked with central factors on both sides.
pub fn newton(e: &Engine<'_, RewriteSystem>, t: Timer) -> Vec<Certificate> {
    let n = e.n();
    (1..=n)
        .map(|i| {
            t.run(|| {
                let r = e.newton_residual(i, Order::CentralRight).witness();
                let l = e.newton_residual(i, Order::CentralLeft).witness();
                let w = [(r, "s-sigma"), (l, "sigma-s")]
                    .into_iter()
                    .filter(|(w, _)| !w.is_empty())
                    .map(|(w, o)| format!("{o}: {w}"))
                    .collect::<Vec<_>>()
                    .join(" || ");
                Certificate::new("qnewton", n, w)
                    .param("i", i)
                    .param("orders", "s-sigma,sigma-s")
            })
        })
        .collect()
}

/// Term-by-term telescoping step for every `1 <= p < i <= N`.
pub fn telescoping(e: &Engine<'_, RewriteSystem>, t: Timer) -> Vec<Certificate> {
    let n = e.n();
    let mut out = Vec::new();
    for i in 2..=n {
        for p in 1..i {
            out.push(t.run(|| {
                Certificate::from_residual("qnewton-telescoping", n, &e.telescoping_residual(i, p))
                    .param("i", i)
                    .param("p", p)
            }));
        }
    }
    out
}

/// Closed form of α against its recursion and anchor.
pub fn alpha(n: usize, t: Timer) -> Result<Vec<Certificate>> {
    ensure_range("alpha", n, 1, 12)?;
    let table = AlphaTable::closed_form(n);
    Ok(vec![
        t.run(|| Certificate::from_residual("alpha-anchor", n, &table.anchor_residual())),
        t.run(|| Certificate::from_residual("alpha-recursion", n, &table.recursion_residuals())),
    ])
}

/// Rows of the α table as text.
pub fn alpha_rows(n: usize) -> Vec<String> {
    let table = AlphaTable::closed_form(n);
    (1..=n)
        .map(|i| format!("alpha_{i} = {}", table.get(i).text()))
        .collect()
}

/// `[S_N(L^i), R̂_k] = 0` and `ε S_N(L^i) = s_q(i) ε`, `i = 1..N`.
pub fn symmetrizer(e: &Engine<'_, RewriteSystem>, t: Timer) -> Vec<Certificate> {
    let n = e.n();
    let mut out = Vec::new();
    for i in 1..=n {
        out.push(t.run(|| {
            Certificate::from_residual(
                "symmetrizer-commutes",
                n,
                &e.symmetrizer_commutators(&e.l_power(i)),
            )
            .param("i", i)
        }));
        out.push(t.run(|| {
            Certificate::from_residual("symmetrizer-eps-trace", n, &e.symmetrizer_eps_residual(i))
                .param("i", i)
        }));
    }
    out
}

/// Product form of the characteristic polynomial against the σ form.
pub fn charpoly(e: &Engine<'_, RewriteSystem>, t: Timer) -> Certificate {
    t.run(|| {
        let a = e.charpoly_product_form();
        let b = e.charpoly_sigma_form();
        let diff: Vec<_> = a.iter().zip(&b).map(|(x, y)| x.sub(y)).collect();
        Certificate::from_residual("charpoly-product-form", e.n(), &diff)
            .param("ordering", "i=0..N-1 left to right")
    })
}

/// `(L − x)B ε = ε Δ(x)` with shift `β = q^{beta_exp}`.
pub fn bmatrix(e: &Engine<'_, RewriteSystem>, beta_exp: i32, t: Timer) -> Certificate {
    t.run(|| {
        Certificate::from_residual("b-matrix-relation", e.n(), &e.b_relation_residual(beta_exp))
            .param("beta", format!("q^{beta_exp}"))
    })
}

/// The relation must fail for `β = q³`; passes when the residual is nonzero.
pub fn bmatrix_control(e: &Engine<'_, RewriteSystem>, t: Timer) -> Certificate {
    t.run(|| {
        let res = e.b_relation_residual(3);
        let w = if res.is_zero() {
            "residual vanished for beta = q^3".to_string()
        } else {
            String::new()
        };
        Certificate::new("b-matrix-negative-control", e.n(), w).param("beta", "q^3")
    })
}

/// `Δ(L) = 0` with σ on either side of `L^i`.
pub fn cayley(e: &Engine<'_, RewriteSystem>, t: Timer) -> Vec<Certificate> {
    [
        (Order::CentralRight, "l-sigma"),
        (Order::CentralLeft, "sigma-l"),
    ]
    .into_iter()
    .map(|(o, tag)| {
        t.run(|| {
            Certificate::from_residual("cayley-hamilton", e.n(), &e.cayley_hamilton_residual(o))
                .param("order", tag)
        })
    })
    .collect()
}

/// `L·adj = adj·L = σ_q(N)·1`.
pub fn inverse(e: &Engine<'_, RewriteSystem>, t: Timer) -> Vec<Certificate> {
    let (l, r) = e.inverse_residuals();
    vec![
        t.run(|| Certificate::from_residual("inverse", e.n(), &l).param("side", "l-adj")),
        t.run(|| Certificate::from_residual("inverse", e.n(), &r).param("side", "adj-l")),
    ]
}

/// `Σ_i (−1)^i σ_q(N−i) s_q(i+p) = 0`.
pub fn higher(e: &Engine<'_, RewriteSystem>, p: usize, t: Timer) -> Certificate {
    t.run(|| {
        Certificate::from_residual("higher-trace", e.n(), &e.higher_trace_residual(p)).param("p", p)
    })
}

/// Determinant: central, `q^{1−N²}` in `L = 1`, classical `det A` at `q = 1`.
pub fn det(e: &Engine<'_, RewriteSystem>, t: Timer) -> Result<Vec<Certificate>> {
    let n = e.n();
    let d = e.det_l();
    let mut out = vec![t.run(|| {
        let w = match e.algebra().is_central(&d) {
            Ok(()) => String::new(),
            Err((g, r)) => format!("[{}, det] = {}", g.name(), r.text()),
        };
        Certificate::new("det-central", n, w)
    })];
    for q in default_q_samples() {
        let rep = oracle::rep_identity(n, &q)?;
        let got = rep.evaluate(&d);
        let expected = crate::ring::eval_at(&RatFunc::q_pow(1 - (n * n) as i32), &q)?;
        let w = got.sub(&oracle::RatMat::Scalar(expected)).witness();
        out.push(t.run(|| Certificate::new("det-identity-rep", n, w).param("q", &q)));
    }
    let a = oracle::random_matrix(n, 1);
    let classical = oracle::sigma_principal_minors(&a, n);
    let alg = oracle::Classical::new(a);
    let ce = Engine::new(&alg)?;
    let got = ce.det_l().0;
    let w = if got == classical {
        String::new()
    } else {
        format!("{got} != {classical}")
    };
    out.push(t.run(|| Certificate::new("det-classical", n, w).param("seed", 1)));
    Ok(out)
}

/// Oracle evaluations in the built-in representations.
pub fn eval(
    n: usize,
    q: &BigRational,
    kind: RepKind,
    check: EvalCheck,
    t: Timer,
) -> Result<Vec<Certificate>> {
    ensure_range("eval", n, 1, 4)?;
    t.run_many(|| {
        let rep = build_rep(kind, n, q)?;
        let mut out = eval_identity(&rep, check)?;
        if check == EvalCheck::All {
            let size = block_matrix(&rep).len();
            let deg = oracle::minimal_degree_report(&rep);
            out.push(
                Certificate::new("oracle-minimal-degree", n, String::new())
                    .param("rep", kind.name())
                    .param("q", q)
                    .param("degree", deg)
                    .param("block_size", size),
            );
        }
        Ok(out)
    })
}

/// Symbolic normal forms evaluated in a representation against direct values.
pub fn agreement(
    e: &Engine<'_, RewriteSystem>,
    q: &BigRational,
    kind: RepKind,
    t: Timer,
) -> Result<Vec<Certificate>> {
    t.run_many(|| {
        let rep = build_rep(kind, e.n(), q)?;
        oracle::symbolic_agreement(&rep, e)
    })
}

pub fn classical(n: usize, seed: u64, t: Timer) -> Result<Certificate> {
    ensure_range("classical", n, 1, 6)?;
    let start = Instant::now();
    let mut c = oracle::classical_check(n, seed)?;
    if t.enabled {
        c.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(c)
}

/// Every check for one `N`, in a fixed order.
pub fn suite(n: usize, t: Timer) -> Result<Vec<Certificate>> {
    ensure_range("suite", n, 2, 4)?;
    let mut out = axioms(n, t)?;
    let sys = RewriteSystem::for_rank(n)?;
    out.extend(relations(&sys, t));
    out.push(confluence(&sys, 3, t));
    let e = Engine::new(&sys)?;
    out.extend(central(&e, t));
    out.extend(newton(&e, t));
    out.extend(telescoping(&e, t));
    out.extend(alpha(n, t)?);
    out.extend(symmetrizer(&e, t));
    out.push(charpoly(&e, t));
    out.push(bmatrix(&e, 2, t));
    out.push(bmatrix_control(&e, t));
    out.extend(cayley(&e, t));
    out.extend(inverse(&e, t));
    out.push(higher(&e, 1, t));
    out.extend(det(&e, t)?);
    for kind in [RepKind::Identity, RepKind::RSquared] {
        for q in default_q_samples() {
            out.extend(eval(n, &q, kind, EvalCheck::All, t)?);
            out.extend(agreement(&e, &q, kind, t)?);
        }
    }
    for seed in SUITE_SEEDS {
        out.push(classical(n, seed, t)?);
    }
    Ok(out)
}

/// Human-readable normal forms of the central elements.
pub fn central_values(e: &Engine<'_, RewriteSystem>) -> Vec<String> {
    let mut out = Vec::new();
    for i in 1..=e.n() {
        out.push(format!("s_q({i}) = {}", e.s_q(i).text()));
        out.push(format!("sigma_q({i}) = {}", e.sigma_q(i).text()));
    }
    out
}
