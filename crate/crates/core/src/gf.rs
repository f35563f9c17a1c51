//! Arithmetic in a single ambient finite field `F_{q^N}`, `q = p^e`.
//!
//! Every field `F_{q^d}` with `d | N` is realized as the set of elements fixed
//! by the `d`-th power of the `q`-Frobenius. Elements are stored as their
//! base-`p` encoding `sum c_j p^j` over the polynomial basis `1, t, t^2, ...`
//! modulo the field's modulus, so the element order is the integer order of
//! that encoding.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HallError, Result};

/// Default bound on the number of elements of the ambient field.
pub const DEFAULT_FIELD_BOUND: u64 = 1 << 16;

/// Fields up to this many elements get a precomputed addition table.
const ADD_TABLE_LIMIT: u32 = 1 << 10;

/// An element of the ambient field, by its base-`p` encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Scalar(pub u32);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Neg,
    Inv,
}

/// The ambient field `F_{q^N}` together with its subfields and Frobenius.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    n: u32,
    degree: u32,
    order: u32,
    /// Monic modulus, lowest coefficient first, length `degree + 1`.
    modulus: Vec<u32>,
    add_table: Option<Vec<u32>>,
    neg_table: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `frob[k][x] = x^(q^k)` for `0 <= k < N`.
    frob: Vec<Vec<u32>>,
    subfields: BTreeMap<u32, Subfield>,
}

#[derive(Clone, Debug)]
struct Subfield {
    elements: Vec<Scalar>,
    /// Position of each ambient element inside `elements`, `u32::MAX` if absent.
    position: Vec<u32>,
    generator: Scalar,
    fp_basis: Vec<Scalar>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense polynomial helpers over `F_p`, lowest coefficient first.
pub(crate) mod poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        trim(out.into_iter().map(|c| c as u32).collect())
    }

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64 % p as u64;
        let mut k = p - 2;
        while k > 0 {
            if k & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            k >>= 1;
        }
        r as u32
    }

    /// Remainder of `a` modulo the nonzero polynomial `m`.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let m = trim(m.to_vec());
        let mut r = trim(a.to_vec());
        let lead_inv = inv_mod(*m.last().expect("nonzero modulus"), p);
        while r.len() >= m.len() {
            let shift = r.len() - m.len();
            let c = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
            for (i, &mi) in m.iter().enumerate() {
                let sub = (c as u64 * mi as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
            r = trim(r);
        }
        r
    }

    /// Irreducibility by trial division with every monic polynomial of degree
    /// `1..=deg/2`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let f = trim(f.to_vec());
        let deg = f.len().saturating_sub(1);
        if deg == 0 {
            return false;
        }
        for d in 1..=deg / 2 {
            let count = (p as u64).pow(d as u32);
            for idx in 0..count {
                let mut g = Vec::with_capacity(d + 1);
                let mut k = idx;
                for _ in 0..d {
                    g.push((k % p as u64) as u32);
                    k /= p as u64;
                }
                g.push(1);
                if rem(&f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

impl FieldSpec {
    /// Builds `F_{q^N}` for `q = p^e`, bounded by [`DEFAULT_FIELD_BOUND`].
    pub fn new(p: u32, e: u32, n: u32) -> Result<Self> {
        Self::with_bound(p, e, n, DEFAULT_FIELD_BOUND)
    }

    pub fn with_bound(p: u32, e: u32, n: u32, bound: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(HallError::NonPrime(p));
        }
        if e == 0 || n == 0 {
            return Err(HallError::FieldTooLarge { p, degree: 0 });
        }
        let degree = e.checked_mul(n).ok_or(HallError::FieldTooLarge { p, degree: u32::MAX })?;
        let order = (p as u64).checked_pow(degree);
        let order = match order {
            Some(o) if o <= bound && o <= u32::MAX as u64 => o as u32,
            _ => return Err(HallError::FieldTooLarge { p, degree }),
        };

        let modulus = find_modulus(p, degree).ok_or(HallError::NoIrreducibleFound { p, degree })?;

        let mut spec = FieldSpec {
            p,
            e,
            n,
            degree,
            order,
            modulus,
            add_table: None,
            neg_table: Vec::new(),
            exp: Vec::new(),
            log: Vec::new(),
            frob: Vec::new(),
            subfields: BTreeMap::new(),
        };
        spec.neg_table = (0..order).map(|a| spec.neg_slow(a)).collect();
        if order <= ADD_TABLE_LIMIT {
            let mut t = Vec::with_capacity((order * order) as usize);
            for a in 0..order {
                for b in 0..order {
                    t.push(spec.add_slow(a, b));
                }
            }
            spec.add_table = Some(t);
        }
        spec.build_log_tables();

        let q = (p as u64).pow(e);
        let qmod = (q % (order as u64 - 1).max(1)) as u32;
        let mut frob = Vec::with_capacity(n as usize);
        frob.push((0..order).collect::<Vec<u32>>());
        for k in 1..n as usize {
            let prev = &frob[k - 1];
            let next: Vec<u32> = prev.iter().map(|&x| spec.pow_index(x, qmod as u64, q)).collect();
            frob.push(next);
        }
        spec.frob = frob;

        for d in 1..=n {
            if n % d != 0 {
                continue;
            }
            let elements: Vec<Scalar> = (0..order)
                .map(Scalar)
                .filter(|&x| spec.frobenius(x, d) == x)
                .collect();
            let mut position = vec![u32::MAX; order as usize];
            for (i, x) in elements.iter().enumerate() {
                position[x.0 as usize] = i as u32;
            }
            let sub_order = elements.len() as u64;
            let generator = elements
                .iter()
                .copied()
                .find(|&x| !x.is_zero() && spec.multiplicative_order(x) == sub_order - 1)
                .unwrap_or(Scalar::ONE);
            let fp_basis = spec.greedy_fp_basis(&elements);
            spec.subfields.insert(d, Subfield { elements, position, generator, fp_basis });
        }
        Ok(spec)
    }

    fn neg_slow(&self, a: u32) -> u32 {
        let digits = self.digits(a);
        self.from_digits(digits.iter().map(|&c| (self.p - c) % self.p))
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let da = self.digits(a);
        let db = self.digits(b);
        self.from_digits(da.iter().zip(&db).map(|(&x, &y)| (x + y) % self.p))
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.degree as usize);
        for _ in 0..self.degree {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    fn from_digits(&self, digits: impl DoubleEndedIterator<Item = u32>) -> u32 {
        digits.rev().fold(0u32, |acc, c| acc * self.p + c)
    }

    /// Product of two encodings by polynomial multiplication and reduction.
    pub fn mul_by_reduction(&self, a: Scalar, b: Scalar) -> Scalar {
        let prod = poly::mul(&poly::trim(self.digits(a.0)), &poly::trim(self.digits(b.0)), self.p);
        let r = poly::rem(&prod, &self.modulus, self.p);
        let mut digits = r;
        digits.resize(self.degree as usize, 0);
        Scalar(self.from_digits(digits.into_iter()))
    }

    fn build_log_tables(&mut self) {
        let order = self.order;
        let group = order - 1;
        let mut gen = None;
        for cand in 1..order {
            let c = Scalar(cand);
            let mut x = c;
            let mut k = 1u32;
            while x != Scalar::ONE {
                x = self.mul_by_reduction(x, c);
                k += 1;
                if k > group {
                    break;
                }
            }
            if k == group && x == Scalar::ONE {
                gen = Some(c);
                break;
            }
        }
        let gen = gen.expect("a finite field has a primitive element");
        let mut exp = Vec::with_capacity(group as usize);
        let mut log = vec![u32::MAX; order as usize];
        let mut x = Scalar::ONE;
        for k in 0..group {
            exp.push(x.0);
            log[x.0 as usize] = k;
            x = self.mul_by_reduction(x, gen);
        }
        self.exp = exp;
        self.log = log;
    }

    /// `x^k` where `k_mod` is `k` reduced modulo `|F^*|` and `k` itself is only
    /// consulted to decide `0^0`.
    fn pow_index(&self, x: u32, k_mod: u64, k: u64) -> u32 {
        if x == 0 {
            return if k == 0 { 1 } else { 0 };
        }
        let group = (self.order - 1) as u64;
        self.exp[((self.log[x as usize] as u64 * k_mod) % group) as usize]
    }

    fn multiplicative_order(&self, x: Scalar) -> u64 {
        let group = (self.order - 1) as u64;
        let l = self.log[x.0 as usize] as u64;
        group / num_integer::gcd(group, l)
    }

    fn greedy_fp_basis(&self, elements: &[Scalar]) -> Vec<Scalar> {
        let mut basis = Vec::new();
        let mut span = vec![false; self.order as usize];
        span[0] = true;
        let mut members = vec![Scalar::ZERO];
        for &x in elements {
            if span[x.0 as usize] {
                continue;
            }
            basis.push(x);
            let mut grown = Vec::with_capacity(members.len() * self.p as usize);
            for &m in &members {
                let mut acc = m;
                for _ in 0..self.p {
                    if !span[acc.0 as usize] {
                        span[acc.0 as usize] = true;
                    }
                    grown.push(acc);
                    acc = self.add(acc, x);
                }
            }
            grown.sort();
            grown.dedup();
            members = grown;
        }
        basis
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// Degree `N` of the ambient field over `F_q`.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.e)
    }

    /// Number of elements of the ambient field.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Degree `e * N` of the ambient field over `F_p`.
    pub fn degree_over_prime(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn coeffs(&self, a: Scalar) -> Vec<u32> {
        self.digits(a.0)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Scalar {
        assert_eq!(coeffs.len(), self.degree as usize, "coefficient length");
        Scalar(self.from_digits(coeffs.iter().map(|&c| c % self.p)))
    }

    /// The image of an integer under `Z -> F_p -> F`.
    pub fn from_int(&self, c: i64) -> Scalar {
        Scalar(c.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = Scalar> {
        (0..self.order).map(Scalar)
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        if self.p == 2 {
            return Scalar(a.0 ^ b.0);
        }
        match &self.add_table {
            Some(t) => Scalar(t[(a.0 * self.order + b.0) as usize]),
            None => Scalar(self.add_slow(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        Scalar(self.neg_table[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        if a.0 == 0 || b.0 == 0 {
            return Scalar::ZERO;
        }
        let group = self.order - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        Scalar(self.exp[(if s >= group { s - group } else { s }) as usize])
    }

    pub fn inv(&self, a: Scalar) -> Result<Scalar> {
        if a.is_zero() {
            return Err(HallError::DivisionByZero);
        }
        let group = self.order - 1;
        let l = self.log[a.0 as usize];
        Ok(Scalar(self.exp[((group - l) % group) as usize]))
    }

    pub fn pow(&self, a: Scalar, k: u64) -> Scalar {
        let group = (self.order - 1) as u64;
        Scalar(self.pow_index(a.0, k % group, k))
    }

    pub fn arith(&self, op: ArithOp, a: Scalar, b: Option<Scalar>) -> Result<Scalar> {
        let rhs = || b.expect("binary operation needs a second operand");
        Ok(match op {
            ArithOp::Add => self.add(a, rhs()),
            ArithOp::Mul => self.mul(a, rhs()),
            ArithOp::Neg => self.neg(a),
            ArithOp::Inv => self.inv(a)?,
        })
    }

    /// `a^(q^k)`.
    #[inline]
    pub fn frobenius(&self, a: Scalar, k: u32) -> Scalar {
        Scalar(self.frob[(k % self.n) as usize][a.0 as usize])
    }

    fn subfield(&self, d: u32) -> &Subfield {
        self.subfields
            .get(&d)
            .unwrap_or_else(|| panic!("F_(q^{d}) is not a subfield of F_(q^{})", self.n))
    }

    pub fn has_subfield(&self, d: u32) -> bool {
        self.subfields.contains_key(&d)
    }

    /// Elements of `F_{q^d}` in increasing order. Panics unless `d | N`.
    pub fn subfield_elements(&self, d: u32) -> &[Scalar] {
        &self.subfield(d).elements
    }

    pub fn subfield_size(&self, d: u32) -> u32 {
        self.subfield(d).elements.len() as u32
    }

    pub fn subfield_position(&self, d: u32, a: Scalar) -> Option<u32> {
        match self.subfield(d).position[a.0 as usize] {
            u32::MAX => None,
            i => Some(i),
        }
    }

    pub fn in_subfield(&self, a: Scalar, d: u32) -> bool {
        self.frobenius(a, d) == a
    }

    /// Smallest generator of `F_{q^d}^*`.
    pub fn subfield_generator(&self, d: u32) -> Scalar {
        self.subfield(d).generator
    }

    /// An `F_p`-basis of `F_{q^d}`, chosen greedily in element order.
    pub fn subfield_fp_basis(&self, d: u32) -> &[Scalar] {
        &self.subfield(d).fp_basis
    }
}

/// Lexicographically smallest monic irreducible polynomial of the given degree.
fn find_modulus(p: u32, degree: u32) -> Option<Vec<u32>> {
    let count = (p as u64).checked_pow(degree)?;
    (0..count).find_map(|idx| {
        let mut f = Vec::with_capacity(degree as usize + 1);
        let mut k = idx;
        for _ in 0..degree {
            f.push((k % p as u64) as u32);
            k /= p as u64;
        }
        f.push(1);
        poly::is_irreducible(&f, p).then_some(f)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn necklace_count(p: u64, n: u32) -> u64 {
        // Number of monic irreducibles of degree n over F_p, via Mobius inversion.
        fn mobius(mut n: u32) -> i64 {
            let mut k = 0;
            let mut d = 2;
            while d * d <= n {
                if n % d == 0 {
                    n /= d;
                    if n % d == 0 {
                        return 0;
                    }
                    k += 1;
                }
                d += 1;
            }
            if n > 1 {
                k += 1;
            }
            if k % 2 == 0 {
                1
            } else {
                -1
            }
        }
        let mut s: i64 = 0;
        for d in 1..=n {
            if n % d == 0 {
                s += mobius(n / d) * (p as i64).pow(d);
            }
        }
        (s / n as i64) as u64
    }

    #[test]
    fn trial_division_matches_gauss_count() {
        for (p, n) in [(2u32, 1u32), (2, 2), (2, 3), (2, 4), (2, 6), (3, 2), (3, 3), (5, 2)] {
            let total = (p as u64).pow(n);
            let irreducible = (0..total)
                .filter(|&idx| {
                    let mut f = Vec::new();
                    let mut k = idx;
                    for _ in 0..n {
                        f.push((k % p as u64) as u32);
                        k /= p as u64;
                    }
                    f.push(1);
                    poly::is_irreducible(&f, p)
                })
                .count() as u64;
            assert_eq!(irreducible, necklace_count(p as u64, n), "p={p} n={n}");
        }
    }

    #[test]
    fn prime_field() {
        let f = FieldSpec::new(2, 1, 1).unwrap();
        assert_eq!(f.subfield_elements(1), &[Scalar(0), Scalar(1)]);
        assert_eq!(f.q(), 2);
    }

    #[test]
    fn f4_modulus_and_products() {
        let f = FieldSpec::new(2, 1, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert_eq!(f.subfield_elements(1).len(), 2);
        // t = encoding 2, t + 1 = encoding 3.
        let t = f.from_coeffs(&[0, 1]);
        assert_eq!(f.mul(t, t), f.from_coeffs(&[1, 1]));
        assert_eq!(f.frobenius(t, 1), f.from_coeffs(&[1, 1]));
    }

    #[test]
    fn f8_picks_smallest_modulus() {
        let f = FieldSpec::new(2, 1, 3).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn f9_subfields() {
        let f = FieldSpec::new(3, 1, 2).unwrap();
        assert_eq!(f.subfield_elements(2).len(), 9);
        assert_eq!(f.subfield_elements(1).len(), 3);
        let f = FieldSpec::new(2, 2, 1).unwrap();
        assert_eq!(f.q(), 4);
        assert_eq!(f.subfield_elements(1).len(), 4);
    }

    #[test]
    fn errors() {
        assert!(matches!(FieldSpec::new(4, 1, 1), Err(HallError::NonPrime(4))));
        assert!(matches!(FieldSpec::new(2, 1, 17), Err(HallError::FieldTooLarge { .. })));
        let f = FieldSpec::new(3, 1, 1).unwrap();
        assert!(matches!(f.inv(Scalar::ZERO), Err(HallError::DivisionByZero)));
        assert_eq!(f.inv(Scalar::ONE).unwrap(), Scalar::ONE);
        assert_eq!(f.arith(ArithOp::Add, Scalar(2), Some(Scalar::ZERO)).unwrap(), Scalar(2));
    }

    #[test]
    fn table_mul_matches_reduction_and_frobenius_laws() {
        for (p, e, n) in [(2, 1, 2), (2, 1, 4), (3, 1, 2), (2, 2, 2), (5, 1, 2), (2, 1, 10)] {
            let f = FieldSpec::new(p, e, n).unwrap();
            let elems: Vec<Scalar> = f.elements().collect();
            let step = (elems.len() / 40).max(1);
            for &a in elems.iter().step_by(step) {
                assert_eq!(f.frobenius(a, n), a);
                assert_eq!(f.frobenius(a, 0), a);
                for &b in elems.iter().step_by(step) {
                    assert_eq!(f.mul(a, b), f.mul_by_reduction(a, b));
                    assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
                    assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
                }
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Scalar::ONE);
                }
                assert_eq!(f.add(a, f.neg(a)), Scalar::ZERO);
                assert_eq!(f.frobenius(a, 1), f.pow(a, f.q()));
            }
        }
    }

    #[test]
    fn subfields_are_frobenius_kernels() {
        let f = FieldSpec::new(2, 1, 6).unwrap();
        for d in [1, 2, 3, 6] {
            let sub = f.subfield_elements(d);
            assert_eq!(sub.len() as u64, 2u64.pow(d));
            let kernel: Vec<Scalar> = f.elements().filter(|&x| f.frobenius(x, d) == x).collect();
            assert_eq!(sub, &kernel[..]);
            assert_eq!(f.subfield_fp_basis(d).len(), d as usize);
            let g = f.subfield_generator(d);
            let mut seen = std::collections::BTreeSet::new();
            let mut x = Scalar::ONE;
            for _ in 0..sub.len() - 1 {
                seen.insert(x);
                x = f.mul(x, g);
            }
            assert_eq!(seen.len(), sub.len() - 1);
        }
        for (d, d2) in [(1, 2), (1, 3), (2, 6), (3, 6)] {
            for x in f.subfield_elements(d) {
                assert!(f.subfield_elements(d2).contains(x));
            }
        }
    }
}
