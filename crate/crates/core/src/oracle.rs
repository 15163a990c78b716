//! Exact numeric evaluation in concrete representations, and the classical
//! `q = 1` cross-check against textbook formulas.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certificate::{Certificate, ElemText, Residual};
use crate::charpoly::{Algebra, Engine, Order};
use crate::error::{Error, Result};
use crate::linalg::{rref, SparseRow};
use crate::qstruct::RHat;
use crate::rea::{Generator, Matrix, NCPoly, RewriteSystem};
use crate::ring::{eval_at, qbinom, qnum, Rat, RatFunc, Ring};

/// A square rational matrix; multiples of the identity are kept as `Scalar`
/// so that every value has one representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RatMat {
    Scalar(BigRational),
    Dense { d: usize, data: Vec<BigRational> },
}

impl RatMat {
    pub fn from_rows(d: usize, data: Vec<BigRational>) -> Self {
        assert_eq!(data.len(), d * d);
        Self::canon(d, data)
    }

    fn canon(d: usize, data: Vec<BigRational>) -> Self {
        let c = data[0].clone();
        let scalar = (0..d).all(|i| {
            (0..d).all(|j| {
                let v = &data[i * d + j];
                if i == j {
                    *v == c
                } else {
                    v.is_zero()
                }
            })
        });
        if scalar {
            RatMat::Scalar(c)
        } else {
            RatMat::Dense { d, data }
        }
    }

    fn dense(&self, d: usize) -> Vec<BigRational> {
        match self {
            RatMat::Dense { data, .. } => data.clone(),
            RatMat::Scalar(c) => (0..d * d)
                .map(|k| {
                    if k % (d + 1) == 0 {
                        c.clone()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect(),
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> BigRational {
        match self {
            RatMat::Scalar(c) if i == j => c.clone(),
            RatMat::Scalar(_) => BigRational::zero(),
            RatMat::Dense { d, data } => data[i * d + j].clone(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        match (self, other) {
            (RatMat::Scalar(a), RatMat::Scalar(b)) => RatMat::Scalar(f(a, b)),
            (RatMat::Dense { d, .. }, _) | (_, RatMat::Dense { d, .. }) => {
                let (a, b) = (self.dense(*d), other.dense(*d));
                Self::canon(*d, a.iter().zip(&b).map(|(x, y)| f(x, y)).collect())
            }
        }
    }
}

impl Ring for RatMat {
    const COMMUTATIVE: bool = false;

    fn zero() -> Self {
        RatMat::Scalar(BigRational::zero())
    }

    fn one() -> Self {
        RatMat::Scalar(BigRational::one())
    }

    fn is_zero(&self) -> bool {
        matches!(self, RatMat::Scalar(c) if c.is_zero())
    }

    fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    fn neg(&self) -> Self {
        match self {
            RatMat::Scalar(c) => RatMat::Scalar(-c),
            RatMat::Dense { d, data } => RatMat::Dense {
                d: *d,
                data: data.iter().map(|v| -v).collect(),
            },
        }
    }

    fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (RatMat::Scalar(a), RatMat::Scalar(b)) => RatMat::Scalar(a * b),
            (RatMat::Scalar(a), RatMat::Dense { d, data })
            | (RatMat::Dense { d, data }, RatMat::Scalar(a)) => {
                if a.is_zero() {
                    return Self::zero();
                }
                RatMat::Dense {
                    d: *d,
                    data: data.iter().map(|v| v * a).collect(),
                }
            }
            (RatMat::Dense { d, data: x }, RatMat::Dense { d: e, data: y }) => {
                assert_eq!(d, e, "carrier dimensions differ");
                let d = *d;
                let mut out = vec![BigRational::zero(); d * d];
                for i in 0..d {
                    for k in 0..d {
                        let a = &x[i * d + k];
                        if a.is_zero() {
                            continue;
                        }
                        for j in 0..d {
                            out[i * d + j] += a * &y[k * d + j];
                        }
                    }
                }
                Self::canon(d, out)
            }
        }
    }
}

impl fmt::Display for RatMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatMat::Scalar(c) => write!(f, "{c}"),
            RatMat::Dense { d, data } => {
                let rows: Vec<String> = (0..*d)
                    .map(|i| {
                        let r: Vec<String> = (0..*d).map(|j| data[i * d + j].to_string()).collect();
                        format!("[{}]", r.join(", "))
                    })
                    .collect();
                write!(f, "[{}]", rows.join(", "))
            }
        }
    }
}

impl ElemText for RatMat {
    fn text(&self) -> String {
        self.to_string()
    }
}

/// Which built-in solution of the reflection equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepKind {
    Identity,
    RSquared,
}

impl RepKind {
    pub fn name(self) -> &'static str {
        match self {
            RepKind::Identity => "identity",
            RepKind::RSquared => "rsquared",
        }
    }
}

/// Placements tried for `rep_rsquared`, in order: `(L^a_b)^c_d = (R̂²)^{ca}_{db}`,
/// then `(R̂²)^{ac}_{bd}`.
pub const RSQUARED_PLACEMENTS: [&str; 2] = ["(R^2)^{ca}_{db}", "(R^2)^{ac}_{bd}"];

/// Exact images of the generators on a `d`-dimensional carrier at `q = qval`.
#[derive(Clone, Debug)]
pub struct Representation {
    n: usize,
    d: usize,
    qval: BigRational,
    kind: RepKind,
    placement: String,
    images: Vec<RatMat>,
}

impl Representation {
    fn verified(self) -> Result<Self> {
        let e = Engine::new(&self)?;
        let res = e.reflection_residual();
        if res.is_zero() {
            Ok(self)
        } else {
            Err(Error::BadRepresentation(format!(
                "{} ({}) violates the reflection equation: {}",
                self.kind.name(),
                self.placement,
                res.witness()
            )))
        }
    }

    fn check_q(n: usize, qval: &BigRational) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidInput("N must be at least 1".into()));
        }
        if qval.is_zero() {
            return Err(Error::InvalidInput("q must be nonzero".into()));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn carrier_dim(&self) -> usize {
        self.d
    }

    pub fn qval(&self) -> &BigRational {
        &self.qval
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn placement(&self) -> &str {
        &self.placement
    }

    pub fn image(&self, g: Generator) -> &RatMat {
        &self.images[g.row as usize * self.n + g.col as usize]
    }

    /// Image of a noncommutative polynomial.
    pub fn evaluate(&self, p: &NCPoly) -> RatMat {
        let mut acc = RatMat::zero();
        for (w, c) in p.terms() {
            let mut term = RatMat::Scalar(eval_at(c, &self.qval).expect("generic q"));
            for &g in w.0.iter() {
                term = term.mul(self.image(g));
            }
            acc = acc.add(&term);
        }
        acc
    }
}

impl Algebra for Representation {
    type Elem = RatMat;

    fn rank(&self) -> usize {
        self.n
    }

    fn scalar(&self, c: &RatFunc) -> RatMat {
        RatMat::Scalar(
            eval_at(c, &self.qval).expect("structure constants are regular at generic q"),
        )
    }

    fn generator(&self, g: Generator) -> RatMat {
        self.image(g).clone()
    }

    fn reduce(&self, x: &RatMat) -> RatMat {
        x.clone()
    }
}

/// `l^i_j ↦ δ^i_j` on a one-dimensional carrier.
pub fn rep_identity(n: usize, qval: &BigRational) -> Result<Representation> {
    Representation::check_q(n, qval)?;
    let images = (0..n * n)
        .map(|k| {
            RatMat::Scalar(if k % (n + 1) == 0 {
                BigRational::one()
            } else {
                BigRational::zero()
            })
        })
        .collect();
    Representation {
        n,
        d: 1,
        qval: qval.clone(),
        kind: RepKind::Identity,
        placement: "delta".into(),
        images,
    }
    .verified()
}

/// `L` built from the squared braiding with one auxiliary leg, `d = N`.
///
/// The placements in [`RSQUARED_PLACEMENTS`] are tried in order and the first
/// one that satisfies the reflection equation exactly is kept.
pub fn rep_rsquared(n: usize, qval: &BigRational) -> Result<Representation> {
    Representation::check_q(n, qval)?;
    let r = if n == 1 {
        RHat::unchecked(1)
    } else {
        RHat::build(n)?
    };
    let r2 = r.op().compose(r.op())?;
    let at = |row: [usize; 2], col: [usize; 2]| -> BigRational {
        r2.get(&row, &col)
            .map(|c| c.eval(qval).expect("nonzero q"))
            .unwrap_or_else(BigRational::zero)
    };
    let mut failures = Vec::new();
    for (which, label) in RSQUARED_PLACEMENTS.iter().enumerate() {
        let images = (0..n * n)
            .map(|k| {
                let (a, b) = (k / n, k % n);
                let data = (0..n * n)
                    .map(|m| {
                        let (c, d) = (m / n, m % n);
                        if which == 0 {
                            at([c, a], [d, b])
                        } else {
                            at([a, c], [b, d])
                        }
                    })
                    .collect();
                RatMat::from_rows(n, data)
            })
            .collect();
        let rep = Representation {
            n,
            d: n,
            qval: qval.clone(),
            kind: RepKind::RSquared,
            placement: label.to_string(),
            images,
        };
        match rep.verified() {
            Ok(rep) => return Ok(rep),
            Err(e) => failures.push(e.to_string()),
        }
    }
    Err(Error::BadRepresentation(failures.join("; ")))
}

pub fn build_rep(kind: RepKind, n: usize, qval: &BigRational) -> Result<Representation> {
    match kind {
        RepKind::Identity => rep_identity(n, qval),
        RepKind::RSquared => rep_rsquared(n, qval),
    }
}

/// Identity families evaluated by [`eval_identity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalCheck {
    Newton,
    Cayley,
    Inverse,
    All,
}

fn rep_cert(rep: &Representation, claim: &str, w: String) -> Certificate {
    Certificate::new(claim, rep.n, w)
        .param("rep", rep.kind.name())
        .param("q", &rep.qval)
        .param("placement", &rep.placement)
}

/// Evaluates the requested identities in `rep`; residuals must be exactly zero.
pub fn eval_identity(rep: &Representation, check: EvalCheck) -> Result<Vec<Certificate>> {
    let e = Engine::new(rep)?;
    let n = rep.n;
    let mut out = Vec::new();
    let all = check == EvalCheck::All;
    if all {
        out.push(rep_cert(
            rep,
            "oracle-reflection-equation",
            e.reflection_residual().witness(),
        ));
    }
    if all || check == EvalCheck::Newton {
        for i in 1..=n {
            for (order, tag) in [
                (Order::CentralRight, "s-sigma"),
                (Order::CentralLeft, "sigma-s"),
            ] {
                out.push(
                    rep_cert(rep, "oracle-qnewton", e.newton_residual(i, order).witness())
                        .param("i", i)
                        .param("order", tag),
                );
            }
        }
    }
    if all || check == EvalCheck::Cayley {
        for (order, tag) in [
            (Order::CentralRight, "l-sigma"),
            (Order::CentralLeft, "sigma-l"),
        ] {
            out.push(
                rep_cert(
                    rep,
                    "oracle-cayley-hamilton",
                    e.cayley_hamilton_residual(order).witness(),
                )
                .param("order", tag),
            );
        }
    }
    if all || check == EvalCheck::Inverse {
        let (l, r) = e.inverse_residuals();
        out.push(rep_cert(rep, "oracle-inverse", l.witness()).param("side", "l-adj"));
        out.push(rep_cert(rep, "oracle-inverse", r.witness()).param("side", "adj-l"));
    }
    if all && rep.kind == RepKind::Identity {
        out.extend(identity_rep_values(rep, &e)?);
    }
    Ok(out)
}

/// In `L = 1`: `s_q(i) = q^{1−N} N_q` and `σ_q(i) = q^{i(1−N)} [N choose i]_q`.
fn identity_rep_values(
    rep: &Representation,
    e: &Engine<'_, Representation>,
) -> Result<Vec<Certificate>> {
    let n = rep.n as i64;
    let q = &rep.qval;
    let mut out = Vec::new();
    let s_expected = RatMat::Scalar(qnum(n).shift(1 - n as i32).eval(q)?);
    for i in 1..=rep.n {
        let w = e.s_q(i).sub(&s_expected).witness();
        out.push(rep_cert(rep, "oracle-identity-rep-s", w).param("i", i));
        let sig = qbinom(n, i as i64)?.mul_ref(&RatFunc::q_pow((i as i64 * (1 - n)) as i32));
        let w = e
            .sigma_q(i)
            .sub(&RatMat::Scalar(eval_at(&sig, q)?))
            .witness();
        out.push(rep_cert(rep, "oracle-identity-rep-sigma", w).param("i", i));
    }
    Ok(out)
}

/// Evaluates the symbolic normal forms of `s_q(i)` and `σ_q(i)` in `rep` and
/// compares them with values computed directly in the representation.
pub fn symbolic_agreement(
    rep: &Representation,
    sym: &Engine<'_, RewriteSystem>,
) -> Result<Vec<Certificate>> {
    let e = Engine::new(rep)?;
    let mut out = Vec::new();
    for i in 1..=rep.n {
        let w = rep.evaluate(&sym.s_q(i)).sub(&e.s_q(i)).witness();
        out.push(rep_cert(rep, "oracle-normal-form-agreement-s", w).param("i", i));
        let w = rep.evaluate(&sym.sigma_q(i)).sub(&e.sigma_q(i)).witness();
        out.push(rep_cert(rep, "oracle-normal-form-agreement-sigma", w).param("i", i));
    }
    Ok(out)
}

/// The `dN × dN` block matrix whose `(a, b)` block is the image of `l^a_b`.
pub fn block_matrix(rep: &Representation) -> Vec<Vec<BigRational>> {
    let (n, d) = (rep.n, rep.d);
    (0..n * d)
        .map(|r| {
            (0..n * d)
                .map(|c| rep.image(Generator::new(r / d, c / d)).entry(r % d, c % d))
                .collect()
        })
        .collect()
}

/// Degree of the minimal polynomial of [`block_matrix`].
pub fn minimal_degree_report(rep: &Representation) -> usize {
    let m = block_matrix(rep);
    let size = m.len();
    let flatten = |p: &Vec<Vec<BigRational>>| -> SparseRow<Rat> {
        p.iter()
            .flatten()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k, Rat(v.clone())))
            .collect()
    };
    let mut power: Vec<Vec<BigRational>> = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut rows = vec![flatten(&power)];
    for k in 1..=size {
        power = (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| {
                        (0..size).fold(BigRational::zero(), |acc, t| acc + &power[i][t] * &m[t][j])
                    })
                    .collect()
            })
            .collect();
        rows.push(flatten(&power));
        if rref(rows.clone()).rank() < rows.len() {
            return k;
        }
    }
    size
}

/// Commuting substitution `l^i_j ↦ A_ij` at `q = 1`.
#[derive(Clone, Debug)]
pub struct Classical {
    a: Matrix<Rat>,
}

impl Classical {
    pub fn new(a: Matrix<Rat>) -> Self {
        Self { a }
    }

    pub fn matrix(&self) -> &Matrix<Rat> {
        &self.a
    }
}

impl Algebra for Classical {
    type Elem = Rat;

    fn rank(&self) -> usize {
        self.a.n()
    }

    fn scalar(&self, c: &RatFunc) -> Rat {
        Rat(eval_at(c, &BigRational::one()).expect("regular at q = 1"))
    }

    fn generator(&self, g: Generator) -> Rat {
        self.a.get(g.row as usize, g.col as usize).clone()
    }

    fn reduce(&self, x: &Rat) -> Rat {
        x.clone()
    }
}

/// Random `N × N` matrix with entries `p/r`, `|p| <= 10`, `1 <= r <= 10`,
/// drawn from `ChaCha8Rng::seed_from_u64(seed)` in row-major order.
pub fn random_matrix(n: usize, seed: u64) -> Matrix<Rat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vals: Vec<Rat> = (0..n * n)
        .map(|_| {
            let p: i64 = rng.gen_range(-10..=10);
            let r: i64 = rng.gen_range(1..=10);
            Rat(BigRational::new(BigInt::from(p), BigInt::from(r)))
        })
        .collect();
    Matrix::from_fn(n, |i, j| vals[i * n + j].clone())
}

fn det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let k = m.len();
    let mut acc = BigRational::one();
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| !m[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            acc = -acc;
        }
        let pivot = m[c][c].clone();
        acc *= &pivot;
        let (top, rest) = m.split_at_mut(c + 1);
        let prow = &top[c];
        for row in rest {
            let f = &row[c] / &pivot;
            if f.is_zero() {
                continue;
            }
            for (x, y) in row[c..].iter_mut().zip(&prow[c..]) {
                *x -= &f * y;
            }
        }
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .collect()
}

/// `σ(i)` as the sum of all `i × i` principal minors.
pub fn sigma_principal_minors(a: &Matrix<Rat>, i: usize) -> BigRational {
    subsets(a.n(), i)
        .into_iter()
        .map(|s| {
            det(s
                .iter()
                .map(|&r| s.iter().map(|&c| a.get(r, c).0.clone()).collect())
                .collect())
        })
        .fold(BigRational::zero(), |x, y| x + y)
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, i32)>) {
        let n = used.len();
        if prefix.len() == n {
            let inv = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| prefix[i] > prefix[j])
                .count();
            out.push((prefix.clone(), if inv % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, v| acc * BigInt::from(v))
}

/// `σ(i) = ε_{a₁…a_i c…} A^{a₁}_{b₁}⋯A^{a_i}_{b_i} ε^{b₁…b_i c…} / (i!(N−i)!)` with the
/// classical Levi-Civita symbol.
pub fn sigma_levi_civita(a: &Matrix<Rat>, i: usize) -> BigRational {
    let n = a.n();
    let perms = permutations(n);
    let mut acc = BigRational::zero();
    for (p, sp) in &perms {
        for (r, sr) in &perms {
            if p[i..] != r[i..] {
                continue;
            }
            let mut t = BigRational::from_integer(BigInt::from(sp * sr));
            for k in 0..i {
                t *= &a.get(p[k], r[k]).0;
            }
            acc += t;
        }
    }
    acc / BigRational::from_integer(factorial(i) * factorial(n - i))
}

/// `Tr A^i` by plain matrix powers.
pub fn power_trace(a: &Matrix<Rat>, i: usize) -> BigRational {
    let p = a.pow(i as u32);
    (0..a.n()).fold(BigRational::zero(), |acc, k| acc + &p.get(k, k).0)
}

/// Results of [`classical_check`]; `disagreements` is empty on success.
#[derive(Clone, Debug)]
pub struct ClassicalReport {
    pub n: usize,
    pub matrix: Matrix<Rat>,
    pub sigma_minors: Vec<BigRational>,
    pub sigma_levi_civita: Vec<BigRational>,
    pub sigma_engine: Vec<BigRational>,
    pub s_trace: Vec<BigRational>,
    pub s_engine: Vec<BigRational>,
    pub disagreements: Vec<String>,
}

impl ClassicalReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Compares the engine at `q = 1` with textbook formulas for the matrix `a`.
pub fn classical_check_matrix(a: Matrix<Rat>) -> Result<ClassicalReport> {
    let n = a.n();
    let alg = Classical::new(a.clone());
    let e = Engine::new(&alg)?;
    let sigma_minors: Vec<_> = (0..=n).map(|i| sigma_principal_minors(&a, i)).collect();
    let sigma_levi_civita: Vec<_> = (0..=n).map(|i| sigma_levi_civita(&a, i)).collect();
    let sigma_engine: Vec<_> = (0..=n).map(|i| e.sigma_q(i).0).collect();
    let s_trace: Vec<_> = (0..=n + 1).map(|i| power_trace(&a, i)).collect();
    let s_engine: Vec<_> = (0..=n + 1).map(|i| e.s_q(i).0).collect();
    let mut bad = Vec::new();
    for i in 0..=n {
        if sigma_minors[i] != sigma_levi_civita[i] {
            bad.push(format!(
                "sigma({i}): minors {} != levi-civita {}",
                sigma_minors[i], sigma_levi_civita[i]
            ));
        }
        if sigma_minors[i] != sigma_engine[i] {
            bad.push(format!(
                "sigma({i}): minors {} != engine {}",
                sigma_minors[i], sigma_engine[i]
            ));
        }
    }
    for i in 1..=n + 1 {
        if s_trace[i] != s_engine[i] {
            bad.push(format!(
                "s({i}): trace {} != engine {}",
                s_trace[i], s_engine[i]
            ));
        }
    }
    // i σ(i) + Σ_{k=1}^{i-1} (−1)^k s(k) σ(i−k) + (−1)^i s(i) = 0
    for i in 1..=n {
        let sign = |k: usize| {
            if k.is_multiple_of(2) {
                BigRational::one()
            } else {
                -BigRational::one()
            }
        };
        let mut r = BigRational::from_integer(BigInt::from(i)) * &sigma_minors[i];
        for k in 1..i {
            r += sign(k) * &s_trace[k] * &sigma_minors[i - k];
        }
        r += sign(i) * &s_trace[i];
        if !r.is_zero() {
            bad.push(format!("newton({i}) residual {r}"));
        }
        let w = e.newton_residual(i, Order::CentralRight).witness();
        if !w.is_empty() {
            bad.push(format!("engine newton({i}) residual {w}"));
        }
    }
    let mut ch = Matrix::<Rat>::zero(n);
    for i in 0..=n {
        let mut term = a
            .pow(i as u32)
            .scale_right(&Rat(sigma_minors[n - i].clone()));
        if i % 2 == 1 {
            term = term.scale_right(&Rat::int(-1));
        }
        ch = ch.add(&term)?;
    }
    if !ch.is_zero() {
        bad.push(format!("cayley-hamilton residual {}", ch.witness()));
    }
    let w = e.cayley_hamilton_residual(Order::CentralRight).witness();
    if !w.is_empty() {
        bad.push(format!("engine cayley-hamilton residual {w}"));
    }
    Ok(ClassicalReport {
        n,
        matrix: a,
        sigma_minors,
        sigma_levi_civita,
        sigma_engine,
        s_trace,
        s_engine,
        disagreements: bad,
    })
}

/// [`classical_check_matrix`] on a seeded random matrix.
pub fn classical_check(n: usize, seed: u64) -> Result<Certificate> {
    if n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    let report = classical_check_matrix(random_matrix(n, seed))?;
    Ok(
        Certificate::new("classical-limit", n, report.disagreements.join("; "))
            .param("seed", seed)
            .param("rng", "ChaCha8Rng::seed_from_u64")
            .param(
                "matrix",
                report
                    .matrix
                    .entries()
                    .iter()
                    .map(|v| v.0.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
    )
}

/// Parses `A/B` or an integer into a nonzero rational.
pub fn parse_q(s: &str) -> Result<BigRational> {
    let q = crate::ring::parse_rational(s)?;
    if q.is_zero() {
        return Err(Error::InvalidInput("q must be nonzero".into()));
    }
    if q.abs().is_one() {
        return Err(Error::InvalidInput("q = ±1 is not generic".into()));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        parse_q(s).unwrap()
    }

    fn ints(n: usize, v: &[i64]) -> Matrix<Rat> {
        Matrix::from_fn(n, |i, j| Rat::int(v[i * n + j]))
    }

    #[test]
    fn ratmat_scalar_canon() {
        let m = RatMat::from_rows(
            2,
            vec![
                BigRational::one(),
                BigRational::zero(),
                BigRational::zero(),
                BigRational::one(),
            ],
        );
        assert_eq!(m, RatMat::one());
        let x = RatMat::from_rows(
            2,
            vec![0, 1, 0, 0]
                .into_iter()
                .map(|v| BigRational::from_integer(v.into()))
                .collect(),
        );
        assert!(x.mul(&x).is_zero());
        assert_eq!(x.to_string(), "[[0, 1], [0, 0]]");
    }

    #[test]
    fn identity_rep_checks_pass() {
        for s in ["3/5", "7/2"] {
            for n in 1..=3 {
                let rep = rep_identity(n, &q(s)).unwrap();
                let certs = eval_identity(&rep, EvalCheck::All).unwrap();
                assert!(
                    certs.iter().all(Certificate::passed),
                    "{:?}",
                    certs.iter().find(|c| !c.passed())
                );
                assert_eq!(minimal_degree_report(&rep), 1);
            }
        }
    }

    #[test]
    fn rsquared_rep_checks_pass() {
        for n in 2..=3 {
            let rep = rep_rsquared(n, &q("3/5")).unwrap();
            let certs = eval_identity(&rep, EvalCheck::All).unwrap();
            assert!(
                certs.iter().all(Certificate::passed),
                "{:?}",
                certs.iter().find(|c| !c.passed())
            );
            let deg = minimal_degree_report(&rep);
            assert!(deg <= n, "degree {deg}");
        }
    }

    #[test]
    fn worked_classical_example() {
        let r = classical_check_matrix(ints(2, &[1, 2, 3, 4])).unwrap();
        assert!(r.passed(), "{:?}", r.disagreements);
        let z = |v: i64| BigRational::from_integer(v.into());
        assert_eq!(r.sigma_minors[1], z(5));
        assert_eq!(r.sigma_minors[2], z(-2));
        assert_eq!(r.s_trace[2], z(29));
    }

    #[test]
    fn classical_identity_matrix() {
        let r = classical_check_matrix(Matrix::identity(3)).unwrap();
        let z = |v: i64| BigRational::from_integer(v.into());
        assert_eq!(r.sigma_minors, vec![z(1), z(3), z(3), z(1)]);
        assert!(r.s_trace[1..].iter().all(|s| *s == z(3)));
    }

    #[test]
    fn random_matrices_are_seeded() {
        assert_eq!(random_matrix(3, 7), random_matrix(3, 7));
        assert_ne!(random_matrix(3, 7), random_matrix(3, 8));
        assert!(classical_check(3, 7).unwrap().passed());
    }

    #[test]
    fn nonzero_residual_fails() {
        let r = classical_check_matrix(ints(2, &[1, 2, 3, 4])).unwrap();
        assert!(r.passed());
        let rep = rep_identity(2, &q("3/5")).unwrap();
        let wrong = rep
            .evaluate(&NCPoly::generator(Generator::new(0, 0)))
            .sub(&RatMat::Scalar(q("2")));
        assert!(!wrong.witness().is_empty());
    }
}
