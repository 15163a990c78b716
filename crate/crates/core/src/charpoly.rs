//! Central elements, the symmetrizer, the characteristic polynomial and the
//! matrix `B(L, x)`, with residuals for every identity they satisfy.
//!
//! The constructions are written once against [`Algebra`]: the symbolic
//! engine instantiates it with the rewrite system (elements are normal-formed
//! noncommutative polynomials), the oracle with concrete representations.

use std::collections::BTreeMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::qstruct::{DMatrix, EpsilonTensor, RHat};
use crate::rea::{Generator, Matrix, NCPoly, RewriteSystem};
use crate::ring::{qbinom, qnum, LaurentPoly, RatFunc, Ring, XPoly};
use crate::tensor::{contract_left, contract_right, full_pairing, CoTensor, TensorOp};

/// A target in which `L` and the structure constants can be realised.
pub trait Algebra: Sync {
    type Elem: Ring;

    /// Size `N` of the generator matrix.
    fn rank(&self) -> usize;
    /// Image of a scalar structure constant.
    fn scalar(&self, c: &RatFunc) -> Self::Elem;
    /// Image of the generator `l^i_j`.
    fn generator(&self, g: Generator) -> Self::Elem;
    /// Canonical representative; identity where elements are already canonical.
    fn reduce(&self, x: &Self::Elem) -> Self::Elem;
}

impl Algebra for RewriteSystem {
    type Elem = NCPoly;

    fn rank(&self) -> usize {
        self.n()
    }

    fn scalar(&self, c: &RatFunc) -> NCPoly {
        NCPoly::scalar(c.clone())
    }

    fn generator(&self, g: Generator) -> NCPoly {
        NCPoly::generator(g)
    }

    fn reduce(&self, x: &NCPoly) -> NCPoly {
        self.normal_form(x)
    }
}

/// Normalising constants `α_i`, `i = 1..N`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaTable {
    n: usize,
    eps_norm: RatFunc,
    alphas: Vec<RatFunc>,
}

impl AlphaTable {
    /// `α_i = [N choose i]_q q^{−i(N−i)} / |ε_q|²`.
    pub fn closed_form(n: usize) -> Self {
        let eps_norm = RatFunc::from_laurent(EpsilonTensor::build(n).norm_squared());
        let inv_norm = eps_norm.inv().expect("nonzero norm");
        let ni = n as i64;
        let alphas = (1..=ni)
            .map(|i| {
                qbinom(ni, i)
                    .expect("0 < i <= N")
                    .mul_ref(&RatFunc::q_pow((-i * (ni - i)) as i32))
                    .mul_ref(&inv_norm)
            })
            .collect();
        Self {
            n,
            eps_norm,
            alphas,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `α_i` for `1 <= i <= N`.
    pub fn get(&self, i: usize) -> &RatFunc {
        &self.alphas[i - 1]
    }

    /// `α_1 − q^{1−N} N_q / |ε_q|²`.
    pub fn anchor_residual(&self) -> RatFunc {
        let expected = RatFunc::from_laurent(qnum(self.n as i64).shift(1 - self.n as i32))
            .div(&self.eps_norm)
            .expect("nonzero norm");
        self.get(1).sub(&expected)
    }

    /// `α_p − q^{2p−1−N} ((N−p+1)_q / p_q) α_{p−1}` for `p = 2..N`.
    pub fn recursion_residuals(&self) -> Vec<RatFunc> {
        let n = self.n as i64;
        (2..=n)
            .map(|p| {
                let factor = RatFunc::new(qnum(n - p + 1).shift((2 * p - 1 - n) as i32), qnum(p))
                    .expect("p_q != 0");
                self.get(p as usize)
                    .sub(&factor.mul_ref(self.get(p as usize - 1)))
            })
            .collect()
    }
}

/// Which side central factors are multiplied on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    /// `L^i σ`, `s σ`: the printed order.
    CentralRight,
    /// `σ L^i`, `σ s`.
    CentralLeft,
}

/// Shared constructions over an [`Algebra`].
pub struct Engine<'a, A: Algebra> {
    alg: &'a A,
    n: usize,
    rhat: TensorOp<A::Elem>,
    eps: CoTensor<A::Elem>,
    eps_norm: RatFunc,
    d: Vec<A::Elem>,
    alphas: AlphaTable,
    powers: Mutex<Vec<Matrix<A::Elem>>>,
    s_cache: Mutex<BTreeMap<usize, A::Elem>>,
    sigma_cache: Mutex<BTreeMap<usize, A::Elem>>,
}

impl<'a, A: Algebra> Engine<'a, A> {
    pub fn new(alg: &'a A) -> Result<Self> {
        let n = alg.rank();
        if n == 0 {
            return Err(Error::InvalidInput("N must be at least 1".into()));
        }
        let r = if n == 1 {
            RHat::unchecked(1)
        } else {
            RHat::build(n)?
        };
        let eps_lp = EpsilonTensor::build(n);
        let lift = |c: &LaurentPoly| alg.scalar(&RatFunc::from_laurent(c.clone()));
        Ok(Self {
            alg,
            n,
            rhat: r.op().map(lift),
            eps: eps_lp.tensor().map(lift),
            eps_norm: RatFunc::from_laurent(eps_lp.norm_squared()),
            d: DMatrix::new(n).diag().iter().map(lift).collect(),
            alphas: AlphaTable::closed_form(n),
            powers: Mutex::new(vec![Matrix::identity(n)]),
            s_cache: Mutex::new(BTreeMap::new()),
            sigma_cache: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn algebra(&self) -> &A {
        self.alg
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphas(&self) -> &AlphaTable {
        &self.alphas
    }

    pub fn eps(&self) -> &CoTensor<A::Elem> {
        &self.eps
    }

    fn sc(&self, c: &RatFunc) -> A::Elem {
        self.alg.scalar(c)
    }

    fn q_pow(&self, k: i32) -> A::Elem {
        self.sc(&RatFunc::q_pow(k))
    }

    fn reduce(&self, x: &A::Elem) -> A::Elem {
        self.alg.reduce(x)
    }

    fn reduce_op(&self, op: &TensorOp<A::Elem>) -> TensorOp<A::Elem> {
        op.par_map(|c| self.alg.reduce(c))
    }

    fn reduce_xop(&self, op: &TensorOp<XPoly<A::Elem>>) -> TensorOp<XPoly<A::Elem>> {
        op.par_map(|p| p.map(|c| self.alg.reduce(c)))
    }

    fn compose(&self, a: &TensorOp<A::Elem>, b: &TensorOp<A::Elem>) -> TensorOp<A::Elem> {
        self.reduce_op(&a.compose(b).expect("same shape"))
    }

    /// The generator matrix `L`.
    pub fn l_matrix(&self) -> Matrix<A::Elem> {
        Matrix::from_fn(self.n, |i, j| self.alg.generator(Generator::new(i, j)))
    }

    /// `L^k`, every entry reduced.
    pub fn l_power(&self, k: usize) -> Matrix<A::Elem> {
        let mut powers = self.powers.lock().expect("power cache");
        if powers.len() == 1 {
            powers.push(self.l_matrix().map(|c| self.alg.reduce(c)));
        }
        while powers.len() <= k {
            let next = powers
                .last()
                .unwrap()
                .mul_reduced(&powers[1], |c| self.alg.reduce(c))
                .expect("same shape");
            powers.push(next);
        }
        powers[k].clone()
    }

    /// `X₁`: the matrix `X` acting on leg 1 of `legs` legs.
    pub fn on_leg1(&self, x: &Matrix<A::Elem>, legs: usize) -> TensorOp<A::Elem> {
        let n = self.n;
        let single = TensorOp::from_entries(
            n,
            1,
            (0..n).flat_map(|i| (0..n).map(move |j| (vec![i], vec![j], x.get(i, j).clone()))),
        )
        .expect("valid indices");
        single.embed(1, legs).expect("leg 1 fits")
    }

    /// `R̂_i` on `legs` legs.
    pub fn rhat_on(&self, i: usize, legs: usize) -> TensorOp<A::Elem> {
        self.rhat.embed(i, legs).expect("braiding fits")
    }

    /// `R̂₁R̂₂⋯R̂_upto` on `legs` legs; identity when `upto = 0`.
    pub fn chain(&self, legs: usize, upto: usize) -> TensorOp<A::Elem> {
        let mut acc = TensorOp::identity(self.n, legs);
        for i in 1..=upto {
            acc = acc.compose(&self.rhat_on(i, legs)).expect("same shape");
        }
        acc
    }

    /// `ε X₁X₂⋯X_k ε` for operators on the first `legs` legs, identity on
    /// the rest. `ε` is pushed through one factor at a time.
    fn eps_chain(&self, factors: &[&TensorOp<A::Elem>]) -> A::Elem {
        let mut v = self.eps.clone();
        for x in factors {
            let full = x.embed(1, self.n).expect("fits in N legs");
            v = contract_left(&v, &full)
                .expect("same shape")
                .map(|c| self.reduce(c));
        }
        self.reduce(&full_pairing(&v, &self.eps).expect("same shape"))
    }

    /// `s_q(i) = q^{1−N} Tr_q L^i`; `s_q(0) = q^{1−N} N_q`.
    pub fn s_q(&self, i: usize) -> A::Elem {
        if let Some(v) = self.s_cache.lock().expect("cache").get(&i) {
            return v.clone();
        }
        let li = self.l_power(i);
        let mut acc = A::Elem::zero();
        for a in 0..self.n {
            acc.add_assign(&self.d[a].mul(li.get(a, a)));
        }
        let v = self.reduce(&self.q_pow(1 - self.n as i32).mul(&acc));
        self.s_cache.lock().expect("cache").insert(i, v.clone());
        v
    }

    /// `σ_q(i) = α_i ε (L₁R̂₁⋯R̂_{i−1})^i ε`; `σ_q(0) = 1`.
    pub fn sigma_q(&self, i: usize) -> A::Elem {
        assert!(i <= self.n, "sigma_q index {i} exceeds N = {}", self.n);
        if i == 0 {
            return A::Elem::one();
        }
        if let Some(v) = self.sigma_cache.lock().expect("cache").get(&i) {
            return v.clone();
        }
        let m = self.compose(&self.on_leg1(&self.l_matrix(), i), &self.chain(i, i - 1));
        let v = self.reduce(
            &self
                .sc(self.alphas.get(i))
                .mul(&self.eps_chain(&vec![&m; i])),
        );
        self.sigma_cache.lock().expect("cache").insert(i, v.clone());
        v
    }

    /// Quantum determinant `q^{1−N} σ_q(N)`.
    pub fn det_l(&self) -> A::Elem {
        self.reduce(&self.q_pow(1 - self.n as i32).mul(&self.sigma_q(self.n)))
    }

    /// `S_N(X) = Σ_k R̂_k⋯R̂₁ X₁ R̂₁⋯R̂_k` on `N` legs.
    pub fn symmetrize(&self, x: &Matrix<A::Elem>) -> TensorOp<A::Elem> {
        let n = self.n;
        let mut term = self.on_leg1(x, n);
        let mut acc = term.clone();
        for k in 1..n {
            let rk = self.rhat_on(k, n);
            term = self.compose(&self.compose(&rk, &term), &rk);
            acc = acc.add(&term).expect("same shape");
        }
        self.reduce_op(&acc)
    }

    /// `[S_N(X), R̂_i]` for `i = 1..N−1`.
    pub fn symmetrizer_commutators(&self, x: &Matrix<A::Elem>) -> Vec<TensorOp<A::Elem>> {
        let s = self.symmetrize(x);
        (1..self.n)
            .map(|i| {
                let ri = self.rhat_on(i, self.n);
                self.compose(&s, &ri)
                    .sub(&self.compose(&ri, &s))
                    .expect("same shape")
            })
            .collect()
    }

    /// `ε S_N(L^i) − s_q(i) ε`.
    pub fn symmetrizer_eps_residual(&self, i: usize) -> CoTensor<A::Elem> {
        let s = self.symmetrize(&self.l_power(i));
        let lhs = contract_left(&self.eps, &s).expect("same shape");
        let rhs = self.eps.scale_right(&self.s_q(i));
        lhs.sub(&rhs).expect("same shape").map(|c| self.reduce(c))
    }

    fn central_product(&self, a: &A::Elem, b: &A::Elem, order: Order) -> A::Elem {
        match order {
            Order::CentralRight => a.mul(b),
            Order::CentralLeft => b.mul(a),
        }
    }

    /// `(i_q/q^{i−1}) σ_q(i) + Σ_{k=1}^{i−1} (−1)^k s_q(k) σ_q(i−k) + (−1)^i s_q(i)`.
    ///
    /// With [`Order::CentralLeft`] every product is taken as `σ s` instead.
    pub fn newton_residual(&self, i: usize, order: Order) -> A::Elem {
        let lead = RatFunc::from_laurent(qnum(i as i64).shift(1 - i as i32));
        let mut acc = self.sc(&lead).mul(&self.sigma_q(i));
        for k in 1..i {
            let t = self.central_product(&self.s_q(k), &self.sigma_q(i - k), order);
            acc = if k % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
        }
        let last = self.s_q(i);
        acc = if i.is_multiple_of(2) {
            acc.add(&last)
        } else {
            acc.sub(&last)
        };
        self.reduce(&acc)
    }

    /// `ε [(L^k)₁ R̂₁⋯R̂_c] [L₁ R̂₁⋯R̂_c]^r ε` with the operators on `c + 1` legs.
    fn bracket(&self, k: usize, c: usize, r: usize) -> A::Elem {
        let legs = c + 1;
        let ch = self.chain(legs, c);
        let first = self.compose(&self.on_leg1(&self.l_power(k), legs), &ch);
        let m = self.compose(&self.on_leg1(&self.l_matrix(), legs), &ch);
        let mut factors = vec![&first];
        factors.extend(std::iter::repeat_n(&m, r));
        self.eps_chain(&factors)
    }

    /// Residual of the telescoping step
    /// `s_q(i−p)σ_q(p) = α_p (p_q/q^{p−1}) T₁ + α_p ((N−p)_q/q^{N−p−1}) T₂`
    /// for `1 <= p <= i−1`, `i <= N`.
    pub fn telescoping_residual(&self, i: usize, p: usize) -> A::Elem {
        assert!(p >= 1 && p < i && i <= self.n);
        let n = self.n as i64;
        let pi = p as i64;
        let alpha = self.alphas.get(p);
        let c1 = alpha.mul_ref(&RatFunc::from_laurent(qnum(pi).shift(1 - p as i32)));
        let c2 = alpha.mul_ref(&RatFunc::from_laurent(
            qnum(n - pi).shift((pi + 1 - n) as i32),
        ));
        let t1 = self.bracket(i - p + 1, p - 1, p - 1);
        let t2 = self.bracket(i - p, p, p);
        let lhs = self.s_q(i - p).mul(&self.sigma_q(p));
        let rhs = self.sc(&c1).mul(&t1).add(&self.sc(&c2).mul(&t2));
        self.reduce(&lhs.sub(&rhs))
    }

    /// Coefficients of `Δ(x) = Σ_i (−x)^i σ_q(N−i)`, lowest power first.
    pub fn charpoly_sigma_form(&self) -> Vec<A::Elem> {
        (0..=self.n)
            .map(|i| {
                let s = self.sigma_q(self.n - i);
                if i % 2 == 0 {
                    s
                } else {
                    s.neg()
                }
            })
            .collect()
    }

    /// `(L₁ − q^e x·1)` on `N` legs.
    fn l_minus_x(&self, e: i32) -> TensorOp<XPoly<A::Elem>> {
        let n = self.n;
        let lx = self
            .on_leg1(&self.l_matrix(), n)
            .map(|c| XPoly::constant(c.clone()));
        let shift = TensorOp::diagonal(n, n, XPoly::monomial(self.q_pow(e), 1));
        lx.sub(&shift).expect("same shape")
    }

    /// `B(L,x) = R̂₁⋯R̂_{N−1} Π_{i=1}^{N−1} [(L − β^i x)R̂₁⋯R̂_{N−1}]` with `β = q^{beta_exp}`.
    pub fn b_matrix(&self, beta_exp: i32) -> TensorOp<XPoly<A::Elem>> {
        let n = self.n;
        let ch = self.chain(n, n - 1).map(|c| XPoly::constant(c.clone()));
        let mut acc = ch.clone();
        for i in 1..n {
            let f = self
                .l_minus_x(beta_exp * i as i32)
                .compose(&ch)
                .expect("same shape");
            acc = self.reduce_xop(&acc.compose(&f).expect("same shape"));
        }
        acc
    }

    /// `(L − x·1) B(L, x)` on `N` legs.
    pub fn lx_times_b(&self, beta_exp: i32) -> TensorOp<XPoly<A::Elem>> {
        let b = self.b_matrix(beta_exp);
        self.reduce_xop(&self.l_minus_x(0).compose(&b).expect("same shape"))
    }

    fn eps_x(&self) -> CoTensor<XPoly<A::Elem>> {
        self.eps.map(|c| XPoly::constant(c.clone()))
    }

    /// `(L − x)B ε − ε Δ(x)`, with `Δ` taken from the `σ_q` form.
    pub fn b_relation_residual(&self, beta_exp: i32) -> CoTensor<XPoly<A::Elem>> {
        let lhs = contract_right(&self.lx_times_b(beta_exp), &self.eps_x()).expect("same shape");
        let delta = XPoly::from_coeffs(self.charpoly_sigma_form());
        let rhs = self.eps_x().scale_right(&delta);
        lhs.sub(&rhs)
            .expect("same shape")
            .map(|p| p.map(|c| self.alg.reduce(c)))
    }

    /// `(1/|ε|²) ε Π_{i=0}^{N−1}[(L − q^{2i}x)R̂₁⋯R̂_{N−1}] ε`, lowest power of `x` first.
    pub fn charpoly_product_form(&self) -> Vec<A::Elem> {
        let v = contract_right(&self.lx_times_b(2), &self.eps_x()).expect("same shape");
        let total = full_pairing(&self.eps_x(), &v).expect("same shape");
        let inv = self.sc(&self.eps_norm.inv().expect("nonzero norm"));
        (0..=self.n)
            .map(|k| self.reduce(&inv.mul(&total.coeff(k))))
            .collect()
    }

    /// `Σ_{i=0}^{N} (−1)^i L^i σ_q(N−i)` (or `σ_q(N−i) L^i`).
    pub fn cayley_hamilton_residual(&self, order: Order) -> Matrix<A::Elem> {
        let mut acc = Matrix::zero(self.n);
        for i in 0..=self.n {
            let s = self.sigma_q(self.n - i);
            let li = self.l_power(i);
            let term = match order {
                Order::CentralRight => li.scale_right(&s),
                Order::CentralLeft => li.scale_left(&s),
            };
            acc = if i % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            }
            .expect("same shape");
        }
        acc.map(|c| self.alg.reduce(c))
    }

    /// `Σ_{i=0}^{N−1} (−1)^i L^i σ_q(N−i−1)`, the adjugate-like polynomial.
    pub fn adjugate(&self) -> Matrix<A::Elem> {
        let mut acc = Matrix::zero(self.n);
        for i in 0..self.n {
            let term = self.l_power(i).scale_right(&self.sigma_q(self.n - i - 1));
            acc = if i % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            }
            .expect("same shape");
        }
        acc.map(|c| self.alg.reduce(c))
    }

    /// `(L·adj − σ_q(N)·1, adj·L − σ_q(N)·1)`.
    pub fn inverse_residuals(&self) -> (Matrix<A::Elem>, Matrix<A::Elem>) {
        let adj = self.adjugate();
        let l = self.l_power(1);
        let det = Matrix::identity(self.n).scale_right(&self.sigma_q(self.n));
        let red = |c: &A::Elem| self.alg.reduce(c);
        let left = l
            .mul_reduced(&adj, red)
            .and_then(|m| m.sub(&det))
            .expect("same shape");
        let right = adj
            .mul_reduced(&l, red)
            .and_then(|m| m.sub(&det))
            .expect("same shape");
        (left.map(red), right.map(red))
    }

    /// `Σ_{i=0}^{N} (−1)^i σ_q(N−i) s_q(i+p)`, zero by the characteristic identity.
    pub fn higher_trace_residual(&self, p: usize) -> A::Elem {
        let mut acc = A::Elem::zero();
        for i in 0..=self.n {
            let t = self.sigma_q(self.n - i).mul(&self.s_q(i + p));
            acc = if i % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
        }
        self.reduce(&acc)
    }

    /// `s_q(N+p)` written through lower traces:
    /// `(−1)^{N+1} Σ_{i=0}^{N−1} (−1)^i σ_q(N−i) s_q(i+p)`.
    pub fn higher_trace_expression(&self, p: usize) -> A::Elem {
        let mut acc = A::Elem::zero();
        for i in 0..self.n {
            let t = self.sigma_q(self.n - i).mul(&self.s_q(i + p));
            acc = if i % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
        }
        if self.n.is_multiple_of(2) {
            acc = acc.neg();
        }
        self.reduce(&acc)
    }

    /// `L₁R̂L₁R̂ − R̂L₁R̂L₁` on two legs.
    pub fn reflection_residual(&self) -> TensorOp<A::Elem> {
        let l1 = self.on_leg1(&self.l_matrix(), 2);
        let r = &self.rhat;
        let lhs = l1
            .compose(r)
            .and_then(|x| x.compose(&l1))
            .and_then(|x| x.compose(r));
        let rhs = r
            .compose(&l1)
            .and_then(|x| x.compose(r))
            .and_then(|x| x.compose(&l1));
        self.reduce_op(
            &lhs.and_then(|a| a.sub(&rhs.expect("same shape")))
                .expect("same shape"),
        )
    }
}

/// Trace-like or determinant-like central generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CentralKind {
    S,
    Sigma,
}

/// A central element in normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralElement {
    pub kind: CentralKind,
    pub index: usize,
    pub value: NCPoly,
}

impl Engine<'_, RewriteSystem> {
    fn checked(&self, kind: CentralKind, index: usize, value: NCPoly) -> Result<CentralElement> {
        match self.alg.is_central(&value) {
            Ok(()) => Ok(CentralElement { kind, index, value }),
            Err((g, residual)) => Err(Error::NotCentral(format!(
                "{kind:?}({index}) fails to commute with {}: {residual}",
                g.name()
            ))),
        }
    }

    /// `s_q(i)` with its centrality asserted.
    pub fn central_s(&self, i: usize) -> Result<CentralElement> {
        self.checked(CentralKind::S, i, self.s_q(i))
    }

    /// `σ_q(i)` with its centrality asserted.
    pub fn central_sigma(&self, i: usize) -> Result<CentralElement> {
        self.checked(CentralKind::Sigma, i, self.sigma_q(i))
    }
}
