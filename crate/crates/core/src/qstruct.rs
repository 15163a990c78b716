//! Structure constants of `GL_q(N)`: the braiding `R̂`, the q-antisymmetric
//! tensor `ε_q` and the quantum-trace weights `D`, with their axiom checks.

use crate::error::{Error, Result};
use crate::linalg::{rref, SparseRow};
use crate::ring::{qfact, qnum, LaurentPoly, RatFunc, Ring};
use crate::tensor::{
    contract_left, contract_right, decode, encode, full_pairing, CoTensor, TensorOp,
};

/// Human-readable statement of the conventions fixed in this module.
pub const RHAT_CONVENTION: &str =
    "R^{ii}_{ii}=q; R^{ji}_{ij}=1 (i!=j); R^{ij}_{ij}=q-1/q (i<j); row multi-index upper";
pub const EPS_CONVENTION: &str = "eps^{1..N}=1; eps at permutation s = (-q)^{inversions(s)}";

/// The `GL_q(N)` braiding, a 2-leg operator satisfying the braid relation and
/// `R̂² = 1 + λR̂`.
#[derive(Clone, Debug, PartialEq)]
pub struct RHat {
    n: usize,
    op: TensorOp<LaurentPoly>,
}

impl RHat {
    /// Entries only, with no axiom checks.
    pub fn unchecked(n: usize) -> Self {
        let mut op = TensorOp::zero(n, 2);
        for i in 0..n {
            op.add_at(encode(n, &[i, i]), encode(n, &[i, i]), LaurentPoly::q());
            for j in 0..n {
                if i == j {
                    continue;
                }
                op.add_at(encode(n, &[j, i]), encode(n, &[i, j]), LaurentPoly::one());
                if i < j {
                    op.add_at(
                        encode(n, &[i, j]),
                        encode(n, &[i, j]),
                        LaurentPoly::lambda(),
                    );
                }
            }
        }
        Self { n, op }
    }

    /// Builds `R̂` and enforces the braid relation, the Hecke condition and
    /// the `ε_q` eigenrelations and norm. A failure here means a convention bug.
    pub fn build(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "R-matrix needs N >= 2, got {n}"
            )));
        }
        let r = Self::unchecked(n);
        if !yang_baxter_residual(&r).is_zero() {
            return Err(Error::AxiomFailure(format!(
                "braid relation fails at N = {n}"
            )));
        }
        if !hecke_residual(&r).is_zero() {
            return Err(Error::AxiomFailure(format!(
                "Hecke condition fails at N = {n}"
            )));
        }
        let eps = EpsilonTensor::build(n);
        let (left, right) = eps_eigen_residuals(&r, &eps)?;
        if left.iter().chain(&right).any(|v| !v.is_zero()) {
            return Err(Error::AxiomFailure(format!(
                "eps is not a (-1/q)-eigenvector of every R_i at N = {n}"
            )));
        }
        if !eps_norm_residual(&eps)?.is_zero() {
            return Err(Error::AxiomFailure(format!("eps norm mismatch at N = {n}")));
        }
        Ok(r)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn op(&self) -> &TensorOp<LaurentPoly> {
        &self.op
    }

    /// `R̂_i` acting on legs `i, i+1` of a `total`-leg space.
    pub fn on_legs(&self, i: usize, total: usize) -> Result<TensorOp<LaurentPoly>> {
        self.op.embed(i, total)
    }

    /// `R̂⁻¹ = R̂ − λ·1`.
    pub fn inverse(&self) -> TensorOp<LaurentPoly> {
        self.op
            .sub(&TensorOp::diagonal(self.n, 2, LaurentPoly::lambda()))
            .expect("same shape")
    }

    /// q-symmetric projector `(R̂ + 1/q) / 2_q`.
    pub fn p_plus(&self) -> TensorOp<RatFunc> {
        let shifted = self
            .op
            .add(&TensorOp::diagonal(self.n, 2, LaurentPoly::q_pow(-1)))
            .expect("same shape");
        let inv2 = RatFunc::from_laurent(qnum(2)).inv().expect("2_q != 0");
        shifted.map(|c| RatFunc::from_laurent(c.clone()).mul_ref(&inv2))
    }
}

/// `R̂₁R̂₂R̂₁ − R̂₂R̂₁R̂₂` on three legs.
pub fn yang_baxter_residual(r: &RHat) -> TensorOp<LaurentPoly> {
    let r1 = r.on_legs(1, 3).expect("fits");
    let r2 = r.on_legs(2, 3).expect("fits");
    let lhs = r1
        .compose(&r2)
        .and_then(|x| x.compose(&r1))
        .expect("same shape");
    let rhs = r2
        .compose(&r1)
        .and_then(|x| x.compose(&r2))
        .expect("same shape");
    lhs.sub(&rhs).expect("same shape")
}

/// `R̂² − 1 − λR̂`.
pub fn hecke_residual(r: &RHat) -> TensorOp<LaurentPoly> {
    let sq = r.op.compose(&r.op).expect("same shape");
    let rhs = TensorOp::identity(r.n, 2)
        .add(&r.op.scale_left(&LaurentPoly::lambda()))
        .expect("same shape");
    sq.sub(&rhs).expect("same shape")
}

/// The rank-`N` q-antisymmetric tensor, normalised to 1 on `(1, …, N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonTensor {
    n: usize,
    v: CoTensor<LaurentPoly>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn inversions(p: &[usize]) -> usize {
    (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count()
}

impl EpsilonTensor {
    /// Closed form: `(−q)^{ℓ(σ)}` at permutations, zero at repeated indices.
    pub fn build(n: usize) -> Self {
        let entries = permutations(n).into_iter().map(|p| {
            let l = inversions(&p);
            let sign = if l.is_multiple_of(2) { 1 } else { -1 };
            (p, LaurentPoly::monomial(sign, l as i32))
        });
        Self {
            n,
            v: CoTensor::from_entries(n, n, entries).expect("valid permutations"),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tensor(&self) -> &CoTensor<LaurentPoly> {
        &self.v
    }

    /// `|ε_q|² = Σ_I ε_I ε_I`.
    pub fn norm_squared(&self) -> LaurentPoly {
        full_pairing(&self.v, &self.v).expect("same shape")
    }
}

/// Expected `|ε_q|² = q^{N(N−1)/2} N_q!`.
pub fn expected_eps_norm(n: usize) -> LaurentPoly {
    qfact(n as u32).shift((n * (n - 1) / 2) as i32)
}

pub fn eps_norm_residual(eps: &EpsilonTensor) -> Result<LaurentPoly> {
    Ok(eps.norm_squared().sub_ref(&expected_eps_norm(eps.n)))
}

pub type EigenResiduals = (Vec<CoTensor<LaurentPoly>>, Vec<CoTensor<LaurentPoly>>);

/// Residuals `ε R̂_i + q⁻¹ε` (left) and `R̂_i ε + q⁻¹ε` (right), `i = 1..N−1`.
pub fn eps_eigen_residuals(r: &RHat, eps: &EpsilonTensor) -> Result<EigenResiduals> {
    let n = eps.n;
    let shifted = eps.v.scale_left(&LaurentPoly::q_pow(-1));
    let mut left = Vec::new();
    let mut right = Vec::new();
    for i in 1..n {
        let ri = r.on_legs(i, n)?;
        left.push(contract_left(&eps.v, &ri)?.add(&shifted)?);
        right.push(contract_right(&ri, &eps.v)?.add(&shifted)?);
    }
    Ok((left, right))
}

/// Joint left kernel of `R̂_i + q⁻¹`, `i = 1..N−1`, on rank-`N` cotensors,
/// computed by exact elimination. Returns the normalised kernel vector and
/// the kernel dimension; errors unless the kernel is one-dimensional.
pub fn solve_eps(r: &RHat) -> Result<(EpsilonTensor, usize)> {
    let n = r.n;
    let size = n.pow(n as u32);
    let mut rows: Vec<SparseRow<RatFunc>> = Vec::new();
    for i in 1..n {
        let a = r
            .on_legs(i, n)?
            .add(&TensorOp::diagonal(n, n, LaurentPoly::q_pow(-1)))?;
        let mut eqs: Vec<SparseRow<RatFunc>> = vec![SparseRow::new(); size];
        for (row, col, c) in a.entries() {
            // equation for output column `col`, unknown eps at `row`
            eqs[col as usize].insert(row as usize, RatFunc::from_laurent(c.clone()));
        }
        rows.extend(eqs.into_iter().filter(|e| !e.is_empty()));
    }
    let ech = rref(rows);
    let dim = size - ech.rank();
    if dim != 1 {
        return Err(Error::KernelDimension { found: dim });
    }
    let pivots = ech.pivots();
    let free = (0..size)
        .find(|k| pivots.binary_search(k).is_err())
        .expect("one free column");
    let mut sol: Vec<RatFunc> = vec![RatFunc::zero(); size];
    sol[free] = RatFunc::one();
    for (row, &p) in ech.rows.iter().zip(&pivots) {
        if let Some(c) = row.get(&free) {
            sol[p] = c.neg_ref();
        }
    }
    let anchor = encode(n, &(0..n).collect::<Vec<_>>()) as usize;
    let scale = sol[anchor]
        .inv()
        .map_err(|_| Error::AxiomFailure("kernel vector vanishes at (1..N)".into()))?;
    let mut entries = Vec::new();
    for (k, c) in sol.iter().enumerate() {
        let v = c.mul_ref(&scale);
        if v.is_zero() {
            continue;
        }
        let lp = v
            .as_laurent()
            .cloned()
            .ok_or_else(|| Error::AxiomFailure(format!("non-Laurent eps entry {v}")))?;
        entries.push((decode(n, n, k as u64), lp));
    }
    Ok((
        EpsilonTensor {
            n,
            v: CoTensor::from_entries(n, n, entries)?,
        },
        dim,
    ))
}

/// Quantum-trace weights `D = diag(q^{−N+1}, q^{−N+3}, …, q^{N−1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct DMatrix {
    diag: Vec<LaurentPoly>,
}

impl DMatrix {
    pub fn new(n: usize) -> Self {
        let n = n as i32;
        Self {
            diag: (0..n).map(|k| LaurentPoly::q_pow(2 * k - n + 1)).collect(),
        }
    }

    pub fn diag(&self) -> &[LaurentPoly] {
        &self.diag
    }

    pub fn trace(&self) -> LaurentPoly {
        self.diag
            .iter()
            .fold(LaurentPoly::zero(), |acc, d| acc.add_ref(d))
    }

    pub fn as_op(&self) -> TensorOp<LaurentPoly> {
        let n = self.diag.len();
        TensorOp::from_entries(
            n,
            1,
            self.diag
                .iter()
                .enumerate()
                .map(|(i, d)| (vec![i], vec![i], d.clone())),
        )
        .expect("diagonal fits")
    }
}

/// `Tr_q X = Σ_i D_i X^i_i`, weights on the left.
pub fn qtrace<C: Ring>(x: &TensorOp<C>, d: &[C]) -> Result<C> {
    if x.legs() != 1 || d.len() != x.dim() {
        return Err(Error::ShapeMismatch(format!(
            "q-trace of a {}-leg operator with {} weights",
            x.legs(),
            d.len()
        )));
    }
    let mut acc = C::zero();
    for (i, di) in d.iter().enumerate() {
        if let Some(v) = x.get(&[i], &[i]) {
            acc.add_assign(&di.mul(v));
        }
    }
    Ok(acc)
}

/// Contracts `D` into leg `leg` of `x` only.
pub fn qtrace_leg<C: Ring>(x: &TensorOp<C>, leg: usize, d: &[C]) -> Result<TensorOp<C>> {
    x.partial_trace(leg, d)
}

/// `Tr_{(2)} R̂ D_2 − q^N·1`, zero for a compatible pair `(R̂, D)`.
pub fn qtrace_rhat_residual(r: &RHat) -> TensorOp<LaurentPoly> {
    let d = DMatrix::new(r.n);
    let t = qtrace_leg(&r.op, 2, d.diag()).expect("two legs");
    t.sub(&TensorOp::diagonal(r.n, 1, LaurentPoly::q_pow(r.n as i32)))
        .expect("same shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{eval_at, CanonicalText, Rat};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn lp(t: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(t.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    #[test]
    fn rhat_n2_entries() {
        let r = RHat::build(2).unwrap();
        let op = r.op();
        assert_eq!(op.nnz(), 5);
        assert_eq!(op.get(&[0, 0], &[0, 0]), Some(&LaurentPoly::q()));
        assert_eq!(op.get(&[1, 1], &[1, 1]), Some(&LaurentPoly::q()));
        assert!(op.get(&[1, 0], &[0, 1]).unwrap().is_one());
        assert!(op.get(&[0, 1], &[1, 0]).unwrap().is_one());
        assert_eq!(op.get(&[0, 1], &[0, 1]), Some(&LaurentPoly::lambda()));
        assert!(RHat::build(1).is_err());
    }

    #[test]
    fn axioms_hold_n2_to_5() {
        for n in 2..=5 {
            let r = RHat::unchecked(n);
            assert!(yang_baxter_residual(&r).is_zero(), "YBE N={n}");
            assert!(hecke_residual(&r).is_zero(), "Hecke N={n}");
            assert!(qtrace_rhat_residual(&r).is_zero(), "q-trace N={n}");
        }
    }

    #[test]
    fn inverse_from_hecke() {
        let r = RHat::build(3).unwrap();
        let prod = r.op().compose(&r.inverse()).unwrap();
        assert_eq!(prod, TensorOp::identity(3, 2));
    }

    #[test]
    fn lambda_block_below_diagonal_breaks_norm() {
        // mirror placement (λ on i > j) gives the wrong sign of the norm exponent
        let n = 3;
        let mut op = TensorOp::zero(n, 2);
        for i in 0..n {
            op.add_at(encode(n, &[i, i]), encode(n, &[i, i]), LaurentPoly::q());
            for j in 0..n {
                if i != j {
                    op.add_at(encode(n, &[j, i]), encode(n, &[i, j]), LaurentPoly::one());
                }
                if i > j {
                    op.add_at(
                        encode(n, &[i, j]),
                        encode(n, &[i, j]),
                        LaurentPoly::lambda(),
                    );
                }
            }
        }
        let mirrored = RHat { n, op };
        let (e, _) = solve_eps(&mirrored).unwrap();
        assert_eq!(e.norm_squared(), qfact(3).shift(-3));
        assert_ne!(e.norm_squared(), expected_eps_norm(3));
    }

    #[test]
    fn eps_closed_form_values() {
        let e2 = EpsilonTensor::build(2);
        assert!(e2.tensor().get(&[0, 1]).unwrap().is_one());
        assert_eq!(
            e2.tensor().get(&[1, 0]),
            Some(&LaurentPoly::monomial(-1, 1))
        );
        assert_eq!(e2.tensor().nnz(), 2);
        let e3 = EpsilonTensor::build(3);
        assert_eq!(
            e3.tensor().get(&[2, 1, 0]),
            Some(&LaurentPoly::monomial(-1, 3))
        );
        assert_eq!(e3.tensor().get(&[0, 0, 1]), None);
    }

    #[test]
    fn eps_kernel_matches_closed_form() {
        for n in 2..=4 {
            let r = RHat::build(n).unwrap();
            let (solved, dim) = solve_eps(&r).unwrap();
            assert_eq!(dim, 1);
            assert_eq!(solved, EpsilonTensor::build(n), "N={n}");
        }
    }

    #[test]
    fn eps_eigenrelation_and_norm() {
        for n in 2..=4 {
            let r = RHat::build(n).unwrap();
            let e = EpsilonTensor::build(n);
            let (l, rr) = eps_eigen_residuals(&r, &e).unwrap();
            assert!(l.iter().chain(&rr).all(|v| v.is_zero()));
            assert!(eps_norm_residual(&e).unwrap().is_zero());
        }
        assert_eq!(
            EpsilonTensor::build(2).norm_squared(),
            lp(&[(0, 1), (2, 1)])
        );
    }

    #[test]
    fn eps_killed_by_symmetric_projector() {
        for n in 2..=4 {
            let r = RHat::build(n).unwrap();
            let e = EpsilonTensor::build(n)
                .tensor()
                .map(|c| RatFunc::from_laurent(c.clone()));
            let p = r.p_plus();
            for i in 1..n {
                assert!(contract_left(&e, &p.embed(i, n).unwrap())
                    .unwrap()
                    .is_zero());
            }
        }
    }

    #[test]
    fn d_matrix_and_qtrace() {
        for n in 1..=5 {
            let d = DMatrix::new(n);
            assert_eq!(d.trace(), qnum(n as i64));
            let id = TensorOp::<LaurentPoly>::identity(n, 1);
            assert_eq!(qtrace(&id, d.diag()).unwrap(), qnum(n as i64));
        }
        assert_eq!(DMatrix::new(3).diag()[0].to_text(), "1*q^-2");
        let r = RHat::build(2).unwrap();
        let t = qtrace_leg(r.op(), 2, DMatrix::new(2).diag()).unwrap();
        assert_eq!(t, TensorOp::diagonal(2, 1, LaurentPoly::q_pow(2)));
    }

    #[test]
    fn classical_limit() {
        let one = BigRational::from_integer(1.into());
        for n in 2..=4 {
            let r = RHat::build(n).unwrap();
            let at1 = r
                .op()
                .map(|c| Rat(eval_at(&RatFunc::from_laurent(c.clone()), &one).unwrap()));
            // permutation operator
            assert_eq!(at1.nnz(), n * n);
            for (row, col, c) in at1.entries() {
                let ri = decode(n, 2, row);
                let ci = decode(n, 2, col);
                assert_eq!(ri, vec![ci[1], ci[0]]);
                assert_eq!(c, &Rat::int(1));
            }
            for d in DMatrix::new(n).diag() {
                assert_eq!(d.eval(&one).unwrap(), one);
            }
            let e = EpsilonTensor::build(n);
            for (k, c) in e.tensor().entries() {
                let p = decode(n, n, k);
                let sign = if inversions(&p).is_multiple_of(2) {
                    1
                } else {
                    -1
                };
                assert_eq!(
                    c.eval(&one).unwrap(),
                    BigRational::from_integer(sign.into())
                );
            }
        }
    }
}
