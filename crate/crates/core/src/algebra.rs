//! The Hall bialgebra with coefficients in `Q[v]/(v^2 - q)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{HallError, Result};
use crate::hall::{big, int, q_pow};
use crate::repspace::ModuleClass;
use crate::workbench::Workbench;

fn exact_root(q: u64) -> Option<u64> {
    let r = q.sqrt();
    (r * r == q).then_some(r)
}

/// `a + b v` with `v^2 = q`. When `q` is a perfect square, `v = -sqrt(q)` is
/// substituted and `b` stays zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HallCoeff {
    a: BigRational,
    b: BigRational,
    q: u64,
}

impl HallCoeff {
    pub fn new(q: u64, a: BigRational, b: BigRational) -> Self {
        match exact_root(q) {
            Some(r) => HallCoeff { a: a - b * int(r), b: BigRational::zero(), q },
            None => HallCoeff { a, b, q },
        }
    }

    pub fn zero(q: u64) -> Self {
        HallCoeff { a: BigRational::zero(), b: BigRational::zero(), q }
    }

    pub fn one(q: u64) -> Self {
        Self::from_rational(q, BigRational::one())
    }

    pub fn from_rational(q: u64, a: BigRational) -> Self {
        HallCoeff { a, b: BigRational::zero(), q }
    }

    pub fn from_int(q: u64, a: i64) -> Self {
        Self::from_rational(q, BigRational::from_integer(BigInt::from(a)))
    }

    pub fn v(q: u64) -> Self {
        Self::new(q, BigRational::zero(), BigRational::one())
    }

    /// `v^k = q^{floor(k/2)} v^{k mod 2}`.
    pub fn v_pow(q: u64, k: i64) -> Self {
        let half = q_pow(q, k.div_euclid(2));
        if k.rem_euclid(2) == 0 {
            Self::from_rational(q, half)
        } else {
            Self::new(q, BigRational::zero(), half)
        }
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        HallCoeff { a: &self.a * r, b: &self.b * r, q: self.q }
    }

    fn check(&self, other: &HallCoeff) {
        assert_eq!(self.q, other.q, "coefficients over different q");
    }
}

impl Add for &HallCoeff {
    type Output = HallCoeff;

    fn add(self, rhs: &HallCoeff) -> HallCoeff {
        self.check(rhs);
        HallCoeff { a: &self.a + &rhs.a, b: &self.b + &rhs.b, q: self.q }
    }
}

impl Sub for &HallCoeff {
    type Output = HallCoeff;

    fn sub(self, rhs: &HallCoeff) -> HallCoeff {
        self.check(rhs);
        HallCoeff { a: &self.a - &rhs.a, b: &self.b - &rhs.b, q: self.q }
    }
}

impl Mul for &HallCoeff {
    type Output = HallCoeff;

    fn mul(self, rhs: &HallCoeff) -> HallCoeff {
        self.check(rhs);
        let q = int(self.q);
        HallCoeff {
            a: &self.a * &rhs.a + &self.b * &rhs.b * q,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            q: self.q,
        }
    }
}

impl Neg for &HallCoeff {
    type Output = HallCoeff;

    fn neg(self) -> HallCoeff {
        HallCoeff { a: -&self.a, b: -&self.b, q: self.q }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for HallCoeff {
            type Output = HallCoeff;

            fn $m(self, rhs: HallCoeff) -> HallCoeff {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for HallCoeff {
    type Output = HallCoeff;

    fn neg(self) -> HallCoeff {
        -&self
    }
}

impl AddAssign<&HallCoeff> for HallCoeff {
    fn add_assign(&mut self, rhs: &HallCoeff) {
        self.check(rhs);
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl fmt::Display for HallCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*v", self.a, self.b)
    }
}

impl Serialize for HallCoeff {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Finitely supported combination of basis elements `u_[M]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallElement {
    q: u64,
    terms: BTreeMap<ModuleClass, HallCoeff>,
}

impl HallElement {
    pub fn zero(q: u64) -> Self {
        HallElement { q, terms: BTreeMap::new() }
    }

    pub fn basis(q: u64, m: ModuleClass) -> Self {
        Self::term(m, HallCoeff::one(q))
    }

    pub fn term(m: ModuleClass, c: HallCoeff) -> Self {
        let mut out = Self::zero(c.q());
        out.add_term(m, c);
        out
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn add_term(&mut self, m: ModuleClass, c: HallCoeff) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(|| HallCoeff::zero(c.q()));
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> &BTreeMap<ModuleClass, HallCoeff> {
        &self.terms
    }

    pub fn coeff(&self, m: &ModuleClass) -> HallCoeff {
        self.terms.get(m).cloned().unwrap_or_else(|| HallCoeff::zero(self.q))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &HallCoeff) -> Self {
        let mut out = Self::zero(self.q);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn add(&self, other: &HallElement) -> Self {
        let mut out = self.clone();
        for (m, x) in &other.terms {
            out.add_term(m.clone(), x.clone());
        }
        out
    }

    pub fn sub(&self, other: &HallElement) -> Self {
        self.add(&other.scale(&HallCoeff::from_int(self.q, -1)))
    }
}

impl fmt::Display for HallElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) u[{m}]")?;
        }
        Ok(())
    }
}

/// Finitely supported combination of `u_[M] (x) u_[N]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    q: u64,
    terms: BTreeMap<(ModuleClass, ModuleClass), HallCoeff>,
}

impl TensorElement {
    pub fn zero(q: u64) -> Self {
        TensorElement { q, terms: BTreeMap::new() }
    }

    pub fn basis(q: u64, m: ModuleClass, n: ModuleClass) -> Self {
        let mut out = Self::zero(q);
        out.add_term(m, n, HallCoeff::one(q));
        out
    }

    /// `u (x) w`.
    pub fn tensor(u: &HallElement, w: &HallElement) -> Self {
        let mut out = Self::zero(u.q());
        for (m, x) in u.terms() {
            for (n, y) in w.terms() {
                out.add_term(m.clone(), n.clone(), x * y);
            }
        }
        out
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn add_term(&mut self, m: ModuleClass, n: ModuleClass, c: HallCoeff) {
        if c.is_zero() {
            return;
        }
        let key = (m, n);
        let slot = self.terms.entry(key.clone()).or_insert_with(|| HallCoeff::zero(c.q()));
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> &BTreeMap<(ModuleClass, ModuleClass), HallCoeff> {
        &self.terms
    }

    pub fn coeff(&self, m: &ModuleClass, n: &ModuleClass) -> HallCoeff {
        self.terms.get(&(m.clone(), n.clone())).cloned().unwrap_or_else(|| HallCoeff::zero(self.q))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TensorElement) -> Self {
        let mut out = self.clone();
        for ((m, n), x) in &other.terms {
            out.add_term(m.clone(), n.clone(), x.clone());
        }
        out
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((m, n), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) u[{m}]*u[{n}]")?;
        }
        Ok(())
    }
}

/// Laurent polynomial in one variable with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly(BTreeMap<i64, BigInt>);

impl LaurentPoly {
    pub fn monomial(exp: i64, c: BigInt) -> Self {
        let mut out = LaurentPoly::default();
        out.add_monomial(exp, c);
        out
    }

    fn add_monomial(&mut self, exp: i64, c: BigInt) {
        let slot = self.0.entry(exp).or_default();
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&exp);
        }
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, BigInt> {
        &self.0
    }

    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly(self.0.iter().map(|(&e, c)| (e + k, c.clone())).collect())
    }

    pub fn add(&self, other: &LaurentPoly) -> Self {
        let mut out = self.clone();
        for (&e, c) in &other.0 {
            out.add_monomial(e, c.clone());
        }
        out
    }

    /// Value at `t = v^d`.
    pub fn eval_v_power(&self, q: u64, d: i64) -> HallCoeff {
        let mut out = HallCoeff::zero(q);
        for (&e, c) in &self.0 {
            out += &HallCoeff::v_pow(q, e * d).scale(&BigRational::from_integer(c.clone()));
        }
        out
    }
}

/// Symmetric Gaussian binomial `[n k]_t`, invariant under `t -> 1/t`.
pub fn gaussian_binomial(n: u32, k: u32) -> LaurentPoly {
    if k > n {
        return LaurentPoly::default();
    }
    if k == 0 || k == n {
        return LaurentPoly::monomial(0, BigInt::one());
    }
    let (n, k) = (n as i64, k as i64);
    gaussian_binomial(n as u32 - 1, k as u32)
        .shift(-k)
        .add(&gaussian_binomial(n as u32 - 1, k as u32 - 1).shift(n - k))
}

/// One coefficient of the bialgebra comparison set against Green's identity
/// for the same quadruple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreenAgreement {
    pub m_prime: ModuleClass,
    pub n_prime: ModuleClass,
    pub bialgebra: bool,
    pub green: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SerreOutcome {
    pub cartan: i64,
    pub residual: HallElement,
}

impl Workbench {
    pub fn unit(&self) -> HallElement {
        HallElement::basis(self.q(), self.zero_class())
    }

    pub fn basis(&self, m: &ModuleClass) -> HallElement {
        HallElement::basis(self.q(), m.clone())
    }

    /// `u_M * u_N = v^{<M,N>} sum_L g^L_{MN} u_L`.
    pub fn multiply_basis(&self, m: &ModuleClass, n: &ModuleClass) -> Result<HallElement> {
        let q = self.q();
        let table = self.hall_table(&m.dim, &n.dim)?;
        let dim = &m.dim + &n.dim;
        let twist = HallCoeff::v_pow(q, self.euler(&m.dim, &n.dim));
        let mut out = HallElement::zero(q);
        for &(l, g) in table.products(m.orbit, n.orbit) {
            out.add_term(ModuleClass { dim: dim.clone(), orbit: l }, twist.scale(&int(g)));
        }
        Ok(out)
    }

    pub fn multiply(&self, u: &HallElement, w: &HallElement) -> Result<HallElement> {
        let mut out = HallElement::zero(self.q());
        for (m, x) in u.terms() {
            for (n, y) in w.terms() {
                out = out.add(&self.multiply_basis(m, n)?.scale(&(x * y)));
            }
        }
        Ok(out)
    }

    /// `Delta(u_L) = sum v^{<M,N>} g^L_{MN} a_M a_N / a_L u_M (x) u_N`.
    pub fn comultiply_basis(&self, l: &ModuleClass) -> Result<TensorElement> {
        let q = self.q();
        let al = big(&self.aut_order(l)?);
        let mut out = TensorElement::zero(q);
        for (qd, sd) in self.orbits.splittings(&l.dim) {
            let table = self.hall_table(&qd, &sd)?;
            let twist = HallCoeff::v_pow(q, self.euler(&qd, &sd));
            for &(m, n, g) in table.splittings(l.orbit) {
                let mc = ModuleClass { dim: qd.clone(), orbit: m };
                let nc = ModuleClass { dim: sd.clone(), orbit: n };
                let ratio = big(&(self.aut_order(&mc)? * self.aut_order(&nc)?)) * int(g) / &al;
                out.add_term(mc, nc, twist.scale(&ratio));
            }
        }
        Ok(out)
    }

    pub fn comultiply(&self, u: &HallElement) -> Result<TensorElement> {
        let mut out = TensorElement::zero(self.q());
        for (l, x) in u.terms() {
            let d = self.comultiply_basis(l)?;
            for ((m, n), y) in d.terms() {
                out.add_term(m.clone(), n.clone(), x * y);
            }
        }
        Ok(out)
    }

    /// `u_M -> delta_{M,0}`.
    pub fn counit(&self, u: &HallElement) -> HallCoeff {
        u.coeff(&self.zero_class())
    }

    /// `(counit (x) id)`.
    pub fn counit_left(&self, t: &TensorElement) -> HallElement {
        let mut out = HallElement::zero(self.q());
        for ((m, n), c) in t.terms() {
            if m.dim.is_zero() {
                out.add_term(n.clone(), c.clone());
            }
        }
        out
    }

    /// `(id (x) counit)`.
    pub fn counit_right(&self, t: &TensorElement) -> HallElement {
        let mut out = HallElement::zero(self.q());
        for ((m, n), c) in t.terms() {
            if n.dim.is_zero() {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// `(u_{M1} (x) u_{M2}) (u_{N1} (x) u_{N2}) = v^{(M2,N1)} (u_{M1} u_{N1}) (x) (u_{M2} u_{N2})`.
    pub fn tensor_multiply(&self, s: &TensorElement, t: &TensorElement) -> Result<TensorElement> {
        let q = self.q();
        let mut out = TensorElement::zero(q);
        for ((m1, m2), x) in s.terms() {
            for ((n1, n2), y) in t.terms() {
                let twist = HallCoeff::v_pow(q, self.symmetric(&m2.dim, &n1.dim));
                let c = &(x * y) * &twist;
                let left = self.multiply_basis(m1, n1)?;
                let right = self.multiply_basis(m2, n2)?;
                for (a, ca) in left.terms() {
                    for (b, cb) in right.terms() {
                        out.add_term(a.clone(), b.clone(), &(&c * ca) * cb);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `Delta(u_M u_N)` and `Delta(u_M) Delta(u_N)`.
    pub fn bialgebra_sides(&self, m: &ModuleClass, n: &ModuleClass) -> Result<(TensorElement, TensorElement)> {
        let lhs = self.comultiply(&self.multiply_basis(m, n)?)?;
        let rhs = self.tensor_multiply(&self.comultiply_basis(m)?, &self.comultiply_basis(n)?)?;
        Ok((lhs, rhs))
    }

    pub fn bialgebra_check(&self, m: &ModuleClass, n: &ModuleClass) -> Result<bool> {
        let (lhs, rhs) = self.bialgebra_sides(m, n)?;
        Ok(lhs == rhs)
    }

    /// For every `(M', N')` of the total dimension, whether the bialgebra
    /// coefficient at `u_{M'} (x) u_{N'}` matches, next to the verdict of
    /// Green's identity for `(M, N, M', N')`.
    pub fn green_agreement(&self, m: &ModuleClass, n: &ModuleClass) -> Result<Vec<GreenAgreement>> {
        let (lhs, rhs) = self.bialgebra_sides(m, n)?;
        let total = &m.dim + &n.dim;
        let mut out = Vec::new();
        for (qd, sd) in self.orbits.splittings(&total) {
            for mp in self.classes(&qd)? {
                for np in self.classes(&sd)? {
                    let bialgebra = lhs.coeff(&mp, &np) == rhs.coeff(&mp, &np);
                    let green = self.green_raw_check(m, n, &mp, &np)?;
                    out.push(GreenAgreement { m_prime: mp.clone(), n_prime: np, bialgebra, green });
                }
            }
        }
        Ok(out)
    }

    /// Left side of the quantum Serre relation for vertex orbits `i != j`:
    /// `sum_k (-1)^k [1-c k]_{v_i} u_i^k u_j u_i^{1-c-k}` with
    /// `c = 2 (a_i, a_j) / (a_i, a_i)` and `v_i = v^{d_i}`.
    pub fn serre(&self, i: usize, j: usize) -> Result<SerreOutcome> {
        let q = self.q();
        let ai = self.orbits.simple_dim(i);
        let aj = self.orbits.simple_dim(j);
        let num = 2 * self.symmetric(&ai, &aj);
        let den = self.symmetric(&ai, &ai);
        if den == 0 || num % den != 0 || num / den > 0 {
            return Err(HallError::NonIntegerCartan(format!("2 * {num} / {den}")));
        }
        let c = num / den;
        let d = self.orbits.vertex_orbits[i].size as i64;
        let n = (1 - c) as u32;
        let ui = self.basis(&self.simple_class(i));
        let uj = self.basis(&self.simple_class(j));

        let mut powers = vec![self.unit()];
        for k in 1..=n as usize {
            let next = self.multiply(&powers[k - 1], &ui)?;
            powers.push(next);
        }
        let mut residual = HallElement::zero(q);
        for k in 0..=n {
            let mut coeff = gaussian_binomial(n, k).eval_v_power(q, d);
            if k % 2 == 1 {
                coeff = -coeff;
            }
            let term = self.multiply(&self.multiply(&powers[k as usize], &uj)?, &powers[(n - k) as usize])?;
            residual = residual.add(&term.scale(&coeff));
        }
        Ok(SerreOutcome { cartan: c, residual })
    }

    pub fn serre_check(&self, i: usize, j: usize) -> Result<bool> {
        Ok(self.serre(i, j)?.residual.is_zero())
    }
}

impl HallCoeff {
    /// Whether the coefficient is a nonnegative rational.
    pub fn is_nonnegative_rational(&self) -> bool {
        self.b.is_zero() && !self.a.is_negative()
    }
}
