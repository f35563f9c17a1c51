//! Invariant functions on `E_nu^F`, induction and restriction by counting,
//! and the rescaling `Phi` onto the Hall algebra.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use crate::algebra::{HallCoeff, HallElement, TensorElement};
use crate::error::{HallError, Result};
use crate::hall::big;
use crate::quiver::DimVector;
use crate::repspace::ModuleClass;
use crate::workbench::Workbench;

/// A `G_nu^F`-invariant function, stored by orbit id. Missing orbits are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvFunction {
    dim: DimVector,
    q: u64,
    values: BTreeMap<u32, HallCoeff>,
}

impl InvFunction {
    pub fn zero(q: u64, dim: DimVector) -> Self {
        InvFunction { dim, q, values: BTreeMap::new() }
    }

    /// `1_{O_M}`.
    pub fn indicator(q: u64, m: &ModuleClass) -> Self {
        let mut f = Self::zero(q, m.dim.clone());
        f.set(m.orbit, HallCoeff::one(q));
        f
    }

    pub fn dim(&self) -> &DimVector {
        &self.dim
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn set(&mut self, orbit: u32, c: HallCoeff) {
        if c.is_zero() {
            self.values.remove(&orbit);
        } else {
            self.values.insert(orbit, c);
        }
    }

    pub fn value(&self, orbit: u32) -> HallCoeff {
        self.values.get(&orbit).cloned().unwrap_or_else(|| HallCoeff::zero(self.q))
    }

    pub fn values(&self) -> &BTreeMap<u32, HallCoeff> {
        &self.values
    }

    pub fn add(&self, other: &InvFunction) -> Self {
        assert_eq!(self.dim, other.dim, "functions on different spaces");
        let mut out = self.clone();
        for (&o, c) in &other.values {
            out.set(o, &out.value(o) + c);
        }
        out
    }

    pub fn scale(&self, c: &HallCoeff) -> Self {
        let mut out = Self::zero(self.q, self.dim.clone());
        for (&o, x) in &self.values {
            out.set(o, x * c);
        }
        out
    }
}

/// A function on `E_{nu'}^F x E_{nu''}^F` for possibly several splittings,
/// stored by pairs of classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorFunction {
    q: u64,
    values: BTreeMap<(ModuleClass, ModuleClass), HallCoeff>,
}

impl TensorFunction {
    pub fn zero(q: u64) -> Self {
        TensorFunction { q, values: BTreeMap::new() }
    }

    pub fn add_term(&mut self, m: ModuleClass, n: ModuleClass, c: HallCoeff) {
        if c.is_zero() {
            return;
        }
        let key = (m, n);
        let slot = self.values.entry(key.clone()).or_insert_with(|| HallCoeff::zero(c.q()));
        *slot += &c;
        if slot.is_zero() {
            self.values.remove(&key);
        }
    }

    pub fn values(&self) -> &BTreeMap<(ModuleClass, ModuleClass), HallCoeff> {
        &self.values
    }

    pub fn value(&self, m: &ModuleClass, n: &ModuleClass) -> HallCoeff {
        self.values.get(&(m.clone(), n.clone())).cloned().unwrap_or_else(|| HallCoeff::zero(self.q))
    }

    pub fn add(&self, other: &TensorFunction) -> Self {
        let mut out = self.clone();
        for ((m, n), c) in &other.values {
            out.add_term(m.clone(), n.clone(), c.clone());
        }
        out
    }
}

impl fmt::Display for TensorFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.values.is_empty() {
            return write!(f, "0");
        }
        for (k, ((m, n), c)) in self.values.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) 1[{m}]*1[{n}]")?;
        }
        Ok(())
    }
}

impl Workbench {
    pub fn indicator(&self, m: &ModuleClass) -> InvFunction {
        InvFunction::indicator(self.q(), m)
    }

    /// `sum_I nu'_i nu''_i + sum_H nu'_{s(h)} nu''_{t(h)}`, the exponent of
    /// the induction normalization with sign flipped.
    fn ind_exponent(&self, quot: &DimVector, sub: &DimVector) -> i64 {
        self.quiver.vertex_pairing(quot, sub) + self.quiver.arrow_pairing(quot, sub)
    }

    /// `sum_I nu'_i nu''_i - sum_H nu'_{s(h)} nu''_{t(h)}`.
    fn res_exponent(&self, quot: &DimVector, sub: &DimVector) -> i64 {
        self.quiver.vertex_pairing(quot, sub) - self.quiver.arrow_pairing(quot, sub)
    }

    /// Induction of `f` on `E_{nu'}` and `g` on `E_{nu''}`. The flag space
    /// over a point `x` is a `G_{nu'}^F x G_{nu''}^F`-torsor over the
    /// `x`-stable rational subspaces of dimension `nu''`, so the raw
    /// pull-push count is that group order times the sum over subspaces.
    pub fn ind_fn(&self, f: &InvFunction, g: &InvFunction) -> Result<InvFunction> {
        if f.q() != self.q() || g.q() != self.q() {
            return Err(HallError::GradingMismatch("functions over a different q".into()));
        }
        let q = self.q();
        let dim = f.dim() + g.dim();
        let torsor = big(&(self.group_order(f.dim()) * self.group_order(g.dim())));
        let norm = HallCoeff::v_pow(q, -self.ind_exponent(f.dim(), g.dim())).scale(&(BigRational::one() / &torsor));
        let mut out = InvFunction::zero(q, dim.clone());
        for l in self.classes(&dim)? {
            let mut sum = HallCoeff::zero(q);
            for &(m, n) in self.submodule_pairs(&l, g.dim())?.iter() {
                sum += &(&f.value(m) * &g.value(n));
            }
            let raw = sum.scale(&torsor);
            out.set(l.orbit, &norm * &raw);
        }
        Ok(out)
    }

    /// Restriction of `f` to the splitting `(quot, sub)`, by enumerating the
    /// block-triangular middle points over each pair of representatives.
    pub fn res_fn(&self, f: &InvFunction, quot: &DimVector, sub: &DimVector) -> Result<TensorFunction> {
        let q = self.q();
        if &(quot + sub) != f.dim() {
            return Err(HallError::GradingMismatch(format!("{quot} + {sub} != {}", f.dim())));
        }
        let twist = HallCoeff::v_pow(q, self.res_exponent(quot, sub));
        let mut out = TensorFunction::zero(q);
        for m in self.classes(quot)? {
            for n in self.classes(sub)? {
                let mut sum = HallCoeff::zero(q);
                for (&l, &count) in self.fiber_counts(&m, &n)?.iter() {
                    sum += &f.value(l).scale(&crate::hall::int(count));
                }
                out.add_term(m.clone(), n, &twist * &sum);
            }
        }
        Ok(out)
    }

    /// Sum of `res_fn` over every splitting of `dim f`.
    pub fn delta_tilde(&self, f: &InvFunction) -> Result<TensorFunction> {
        let mut out = TensorFunction::zero(self.q());
        for (quot, sub) in self.orbits.splittings(f.dim()) {
            out = out.add(&self.res_fn(f, &quot, &sub)?);
        }
        Ok(out)
    }

    /// `(1_{M1} (x) 1_{M2}) (1_{N1} (x) 1_{N2}) = v^{(M2,N1)} ind(1_{M1}, 1_{N1}) (x) ind(1_{M2}, 1_{N2})`,
    /// extended bilinearly.
    pub fn tensor_fn_multiply(&self, s: &TensorFunction, t: &TensorFunction) -> Result<TensorFunction> {
        let q = self.q();
        let mut out = TensorFunction::zero(q);
        for ((m1, m2), x) in s.values() {
            for ((n1, n2), y) in t.values() {
                let c = &(x * y) * &HallCoeff::v_pow(q, self.symmetric(&m2.dim, &n1.dim));
                let left = self.ind_fn(&self.indicator(m1), &self.indicator(n1))?;
                let right = self.ind_fn(&self.indicator(m2), &self.indicator(n2))?;
                for (&a, ca) in left.values() {
                    for (&b, cb) in right.values() {
                        let ma = ModuleClass { dim: left.dim().clone(), orbit: a };
                        let mb = ModuleClass { dim: right.dim().clone(), orbit: b };
                        out.add_term(ma, mb, &(&c * ca) * cb);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `1_{O_M} -> v^{sum_i nu_i^2} u_M`.
    pub fn phi(&self, f: &InvFunction) -> HallElement {
        let c = HallCoeff::v_pow(self.q(), f.dim().square_sum());
        let mut out = HallElement::zero(self.q());
        for (&o, x) in f.values() {
            out.add_term(ModuleClass { dim: f.dim().clone(), orbit: o }, x * &c);
        }
        out
    }

    pub fn phi_tensor(&self, t: &TensorFunction) -> TensorElement {
        let q = self.q();
        let mut out = TensorElement::zero(q);
        for ((m, n), x) in t.values() {
            let c = HallCoeff::v_pow(q, m.dim.square_sum() + n.dim.square_sum());
            out.add_term(m.clone(), n.clone(), x * &c);
        }
        out
    }

    /// `Phi(ind(1_M, 1_N))` and `Phi(1_M) * Phi(1_N)`.
    pub fn phi_mult_sides(&self, m: &ModuleClass, n: &ModuleClass) -> Result<(HallElement, HallElement)> {
        let lhs = self.phi(&self.ind_fn(&self.indicator(m), &self.indicator(n))?);
        let rhs = self.multiply(&self.phi(&self.indicator(m)), &self.phi(&self.indicator(n)))?;
        Ok((lhs, rhs))
    }

    /// `(Phi (x) Phi)(Delta~(1_L))` and `Delta(Phi(1_L))`.
    pub fn phi_comult_sides(&self, l: &ModuleClass) -> Result<(TensorElement, TensorElement)> {
        let lhs = self.phi_tensor(&self.delta_tilde(&self.indicator(l))?);
        let rhs = self.comultiply(&self.phi(&self.indicator(l)))?;
        Ok((lhs, rhs))
    }

    pub fn phi_mult_check(&self, m: &ModuleClass, n: &ModuleClass) -> Result<bool> {
        let (a, b) = self.phi_mult_sides(m, n)?;
        Ok(a == b)
    }

    pub fn phi_comult_check(&self, l: &ModuleClass) -> Result<bool> {
        let (a, b) = self.phi_comult_sides(l)?;
        Ok(a == b)
    }

    /// `Delta~(1_M *~ 1_N)` and `Delta~(1_M) *~ Delta~(1_N)`.
    pub fn green_fn_sides(&self, m: &ModuleClass, n: &ModuleClass) -> Result<(TensorFunction, TensorFunction)> {
        let lhs = self.delta_tilde(&self.ind_fn(&self.indicator(m), &self.indicator(n))?)?;
        let rhs = self.tensor_fn_multiply(&self.delta_tilde(&self.indicator(m))?, &self.delta_tilde(&self.indicator(n))?)?;
        Ok((lhs, rhs))
    }

    pub fn green_fn_check(&self, m: &ModuleClass, n: &ModuleClass) -> Result<bool> {
        let (a, b) = self.green_fn_sides(m, n)?;
        Ok(a == b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::examples::*;

    #[test]
    fn a2_ind_and_res() {
        let wb = Workbench::new(a2(), 2, 1).unwrap();
        let q = wb.q();
        let s1 = wb.simple_class(0);
        let s2 = wb.simple_class(1);
        let d = wb.dim(vec![1, 1]).unwrap();
        let ss = ModuleClass { dim: d.clone(), orbit: 0 };
        let p = ModuleClass { dim: d.clone(), orbit: 1 };

        let ind = wb.ind_fn(&wb.indicator(&s1), &wb.indicator(&s2)).unwrap();
        assert_eq!(ind.value(0), HallCoeff::v_pow(q, -1));
        assert_eq!(ind.value(1), HallCoeff::v_pow(q, -1));
        let unit = wb.ind_fn(&wb.indicator(&p), &wb.indicator(&wb.zero_class())).unwrap();
        assert_eq!(unit, wb.indicator(&p));

        let res = wb.res_fn(&wb.indicator(&p), &s1.dim, &s2.dim).unwrap();
        assert_eq!(res.value(&s1, &s2), HallCoeff::v_pow(q, -1));
        let res0 = wb.res_fn(&wb.indicator(&ss), &s1.dim, &s2.dim).unwrap();
        assert_eq!(res0.value(&s1, &s2), HallCoeff::v_pow(q, -1));

        assert_eq!(wb.phi(&wb.indicator(&p)), HallElement::term(p.clone(), HallCoeff::from_int(q, 2)));
        assert_eq!(wb.phi(&wb.indicator(&wb.zero_class())), wb.unit());
    }

    #[test]
    fn a2_compatibility() {
        for p in [2, 3] {
            let wb = Workbench::new(a2(), p, 1).unwrap();
            let s1 = wb.simple_class(0);
            let s2 = wb.simple_class(1);
            assert!(wb.phi_mult_check(&s1, &s2).unwrap());
            assert!(wb.phi_mult_check(&s2, &s1).unwrap());
            for l in wb.classes(&wb.dim(vec![1, 1]).unwrap()).unwrap() {
                assert!(wb.phi_comult_check(&l).unwrap());
            }
            assert!(wb.green_fn_check(&s1, &s2).unwrap());
            assert!(wb.green_fn_check(&s1, &wb.zero_class()).unwrap());
        }
    }
}
