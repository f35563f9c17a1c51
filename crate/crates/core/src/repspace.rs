//! Fixed points `E_nu^F` of the representation space, the group `G_nu^F`
//! acting on them, orbit tables and Hom/Ext dimensions.
//!
//! A point stores one matrix per arrow-orbit representative `h`, with entries
//! in `F_{q^{d_h}}`; the matrix at `a^m(h)` is the entrywise `q^m`-power. A
//! group element likewise stores one invertible matrix per vertex-orbit
//! representative. The map between orbit slots is the identity in the
//! standard bases, so the Frobenius on `V` is entrywise `q`-power followed by
//! moving to the next vertex of the orbit.

use std::collections::VecDeque;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{HallError, Result};
use crate::gf::{FieldSpec, Scalar};
use crate::linalg::{rank_mod_p, Mat};
use crate::quiver::{DimVector, OrbitData};
use crate::workbench::Workbench;

/// A point of `E_nu^F`: one matrix `nu_{t(h)} x nu_{s(h)}` per arrow orbit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointE {
    pub mats: Vec<Mat>,
}

/// An element of `G_nu^F`: one invertible matrix per vertex orbit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElem {
    pub mats: Vec<Mat>,
}

/// An isomorphism class: a dimension vector and an orbit id in its table.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModuleClass {
    pub dim: DimVector,
    pub orbit: u32,
}

impl std::fmt::Display for ModuleClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}#{}", self.dim, self.orbit)
    }
}

#[derive(Clone, Debug)]
struct Block {
    rows: usize,
    cols: usize,
    degree: u32,
    radix: u64,
}

/// Shape of `E_nu^F` and the mixed-radix point encoding. Entries are read
/// row-major, arrow orbit by arrow orbit; the first entry is the most
/// significant digit, so code order is lexicographic order of entries.
#[derive(Clone, Debug)]
pub struct RepSpace {
    dim: DimVector,
    blocks: Vec<Block>,
    count: u64,
}

impl RepSpace {
    pub fn new(orbits: &OrbitData, field: &FieldSpec, dim: &DimVector, bound: u64) -> Result<Self> {
        let mut blocks = Vec::with_capacity(orbits.arrow_orbits.len());
        let mut count: u128 = 1;
        let nu = dim.entries();
        for ao in &orbits.arrow_orbits {
            let src = orbits.vertex_orbits[ao.source_orbit].members[ao.source_shift as usize];
            let tgt = orbits.vertex_orbits[ao.target_orbit].members[ao.target_shift as usize];
            let rows = nu[tgt] as usize;
            let cols = nu[src] as usize;
            let radix = field.subfield_size(ao.size) as u64;
            let entries = (rows * cols) as u32;
            let size = (radix as u128).checked_pow(entries).unwrap_or(u128::MAX);
            count = count.saturating_mul(size);
            blocks.push(Block { rows, cols, degree: ao.size, radix });
        }
        if count > bound as u128 {
            return Err(HallError::SpaceTooLarge { dim: dim.to_string(), count });
        }
        Ok(RepSpace { dim: dim.clone(), blocks, count: count as u64 })
    }

    pub fn dim(&self) -> &DimVector {
        &self.dim
    }

    /// `|E_nu^F|`.
    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn encode(&self, field: &FieldSpec, x: &PointE) -> u64 {
        let mut code = 0u64;
        for (b, m) in self.blocks.iter().zip(&x.mats) {
            debug_assert_eq!((m.rows(), m.cols()), (b.rows, b.cols));
            for &s in m.data() {
                let pos = field
                    .subfield_position(b.degree, s)
                    .unwrap_or_else(|| panic!("entry {s} is not in F_(q^{})", b.degree));
                code = code * b.radix + pos as u64;
            }
        }
        code
    }

    pub fn decode(&self, field: &FieldSpec, mut code: u64) -> PointE {
        let mut mats: Vec<Mat> = self.blocks.iter().map(|b| Mat::zeros(b.rows, b.cols)).collect();
        for (b, m) in self.blocks.iter().zip(mats.iter_mut()).rev() {
            let elems = field.subfield_elements(b.degree);
            for r in (0..b.rows).rev() {
                for c in (0..b.cols).rev() {
                    m[(r, c)] = elems[(code % b.radix) as usize];
                    code /= b.radix;
                }
            }
        }
        PointE { mats }
    }

    pub fn points<'a>(&'a self, field: &'a FieldSpec) -> impl Iterator<Item = PointE> + 'a {
        (0..self.count).map(move |c| self.decode(field, c))
    }
}

/// Orbit decomposition of `E_nu^F` under `G_nu^F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitTable {
    pub dim: DimVector,
    pub orbits: Vec<OrbitInfo>,
    /// Orbit id of every point, indexed by point code.
    pub point_orbit: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitInfo {
    /// Code of the least point in the orbit.
    pub representative: u64,
    pub size: u64,
    /// `|Aut|` of the corresponding module.
    pub aut_order: BigUint,
}

impl OrbitTable {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn orbit_of(&self, code: u64) -> u32 {
        self.point_orbit[code as usize]
    }
}

/// `prod_i prod_{j < nu_i} (Q^{nu_i} - Q^j)` with `Q = q^{d_i}`.
pub fn group_order(orbits: &OrbitData, q: u64, dim: &DimVector) -> BigUint {
    let mut total = BigUint::one();
    for vo in &orbits.vertex_orbits {
        let m = dim.entries()[vo.rep];
        let big_q = BigUint::from(q).pow(vo.size);
        let top = big_q.pow(m);
        for j in 0..m {
            total *= &top - big_q.pow(j);
        }
    }
    total
}

impl Workbench {
    pub fn space(&self, dim: &DimVector) -> Result<RepSpace> {
        RepSpace::new(&self.orbits, &self.field, dim, self.limits.space_bound)
    }

    pub fn group_order(&self, dim: &DimVector) -> BigUint {
        group_order(&self.orbits, self.q(), dim)
    }

    /// Points of `E_nu^F` in code order.
    pub fn enumerate_points(&self, dim: &DimVector) -> Result<Vec<PointE>> {
        let space = self.space(dim)?;
        Ok(space.points(&self.field).collect())
    }

    pub fn identity_element(&self, dim: &DimVector) -> GroupElem {
        GroupElem {
            mats: self
                .orbits
                .vertex_orbits
                .iter()
                .map(|vo| Mat::identity(dim.entries()[vo.rep] as usize))
                .collect(),
        }
    }

    /// `(g.x)_h = g_{t(h)} x_h g_{s(h)}^{-1}`, evaluated at arrow-orbit
    /// representatives with the vertex matrices moved along their orbits.
    pub fn act(&self, g: &GroupElem, x: &PointE) -> Result<PointE> {
        if g.mats.len() != self.orbits.vertex_orbits.len() || x.mats.len() != self.orbits.arrow_orbits.len() {
            return Err(HallError::DimensionMismatch {
                expected: self.orbits.arrow_orbits.len(),
                found: x.mats.len(),
            });
        }
        let f = &self.field;
        let mut out = Vec::with_capacity(x.mats.len());
        for (ao, xh) in self.orbits.arrow_orbits.iter().zip(&x.mats) {
            let gt = &g.mats[ao.target_orbit];
            let gs = &g.mats[ao.source_orbit];
            if gt.rows() != xh.rows() || gs.rows() != xh.cols() {
                return Err(HallError::DimensionMismatch { expected: gs.rows(), found: xh.cols() });
            }
            let gt = gt.frobenius(f, ao.target_shift);
            let gs_inv = gs
                .frobenius(f, ao.source_shift)
                .inverse(f)
                .expect("group elements are invertible");
            out.push(gt.mul(f, xh).mul(f, &gs_inv));
        }
        Ok(PointE { mats: out })
    }

    /// Group product `g * h` (apply `h` first).
    pub fn compose(&self, g: &GroupElem, h: &GroupElem) -> GroupElem {
        GroupElem {
            mats: g.mats.iter().zip(&h.mats).map(|(a, b)| a.mul(&self.field, b)).collect(),
        }
    }

    /// Transvections `I + c E_jk` for `c` in an `F_p`-basis of `F_{q^{d_i}}`
    /// and `diag(gamma, 1, ..., 1)`, per vertex orbit.
    pub fn generators(&self, dim: &DimVector) -> Vec<GroupElem> {
        let id = self.identity_element(dim);
        let mut gens = Vec::new();
        for (o, vo) in self.orbits.vertex_orbits.iter().enumerate() {
            let m = dim.entries()[vo.rep] as usize;
            if m == 0 {
                continue;
            }
            for &c in self.field.subfield_fp_basis(vo.size) {
                for j in 0..m {
                    for k in 0..m {
                        if j == k {
                            continue;
                        }
                        let mut g = id.clone();
                        g.mats[o][(j, k)] = c;
                        gens.push(g);
                    }
                }
            }
            let gamma = self.field.subfield_generator(vo.size);
            if gamma != Scalar::ONE {
                let mut g = id.clone();
                g.mats[o][(0, 0)] = gamma;
                gens.push(g);
            }
        }
        gens
    }

    /// Every element of `G_nu^F`; intended for small oracle computations.
    pub fn enumerate_group(&self, dim: &DimVector, bound: u64) -> Result<Vec<GroupElem>> {
        let order = self.group_order(dim);
        if order > BigUint::from(bound) {
            return Err(HallError::SpaceTooLarge { dim: dim.to_string(), count: order.to_u128().unwrap_or(u128::MAX) });
        }
        let f = &self.field;
        let mut per_orbit: Vec<Vec<Mat>> = Vec::new();
        for vo in &self.orbits.vertex_orbits {
            let m = dim.entries()[vo.rep] as usize;
            let elems = f.subfield_elements(vo.size);
            let radix = elems.len() as u64;
            let total = radix.pow((m * m) as u32);
            let mut mats = Vec::new();
            for mut code in 0..total {
                let mut data = vec![Scalar::ZERO; m * m];
                for slot in data.iter_mut().rev() {
                    *slot = elems[(code % radix) as usize];
                    code /= radix;
                }
                let mat = Mat::from_rows(m, m, data);
                if mat.rank(f) == m {
                    mats.push(mat);
                }
            }
            per_orbit.push(mats);
        }
        let mut out = vec![GroupElem { mats: Vec::new() }];
        for mats in per_orbit {
            let mut next = Vec::with_capacity(out.len() * mats.len());
            for g in &out {
                for m in &mats {
                    let mut h = g.clone();
                    h.mats.push(m.clone());
                    next.push(h);
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Orbit table for `nu`, built on first use.
    pub fn orbit_table(&self, dim: &DimVector) -> Result<Arc<OrbitTable>> {
        if let Some(t) = self.orbit_tables.read().unwrap().get(dim) {
            return Ok(t.clone());
        }
        let space = self.space(dim)?;
        let loaded = self.store.as_ref().and_then(|s| s.load_orbit_table(dim)).filter(|t| {
            &t.dim == dim && t.point_orbit.len() as u64 == space.count() && self.table_is_consistent(t)
        });
        let table = match loaded {
            Some(t) => t,
            None => {
                let t = self.build_orbit_table(&space)?;
                if let Some(s) = &self.store {
                    s.save_orbit_table(&t);
                }
                t
            }
        };
        let table = Arc::new(table);
        self.orbit_tables.write().unwrap().entry(dim.clone()).or_insert(table.clone());
        Ok(table)
    }

    fn table_is_consistent(&self, t: &OrbitTable) -> bool {
        let g = self.group_order(&t.dim);
        let sizes: u64 = t.orbits.iter().map(|o| o.size).sum();
        sizes == t.point_orbit.len() as u64
            && t.orbits.iter().enumerate().all(|(k, o)| {
                BigUint::from(o.size) * &o.aut_order == g
                    && t.point_orbit.get(o.representative as usize) == Some(&(k as u32))
            })
    }

    fn build_orbit_table(&self, space: &RepSpace) -> Result<OrbitTable> {
        let f = &self.field;
        let dim = space.dim();
        let gens = self.generators(dim);
        let group = self.group_order(dim);
        let n = space.count() as usize;
        let mut point_orbit = vec![u32::MAX; n];
        let mut orbits = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if point_orbit[start] != u32::MAX {
                continue;
            }
            let id = orbits.len() as u32;
            point_orbit[start] = id;
            queue.push_back(start as u64);
            let mut size = 0u64;
            while let Some(code) = queue.pop_front() {
                size += 1;
                let x = space.decode(f, code);
                for g in &gens {
                    let y = self.act(g, &x)?;
                    let c = space.encode(f, &y) as usize;
                    if point_orbit[c] == u32::MAX {
                        point_orbit[c] = id;
                        queue.push_back(c as u64);
                    }
                }
            }
            let size_big = BigUint::from(size);
            if !(&group % &size_big).is_zero() {
                return Err(HallError::NonExactDivision { orbit_size: size, group_order: group.to_string() });
            }
            orbits.push(OrbitInfo { representative: start as u64, size, aut_order: &group / &size_big });
        }
        Ok(OrbitTable { dim: dim.clone(), orbits, point_orbit })
    }

    /// All classes of dimension vector `nu`, by orbit id.
    pub fn classes(&self, dim: &DimVector) -> Result<Vec<ModuleClass>> {
        let t = self.orbit_table(dim)?;
        Ok((0..t.len() as u32).map(|orbit| ModuleClass { dim: dim.clone(), orbit }).collect())
    }

    pub fn classes_up_to(&self, max_total: u32) -> Result<Vec<ModuleClass>> {
        let mut out = Vec::new();
        for d in self.orbits.dims_up_to(max_total) {
            out.extend(self.classes(&d)?);
        }
        Ok(out)
    }

    pub fn zero_class(&self) -> ModuleClass {
        ModuleClass { dim: self.zero_dim(), orbit: 0 }
    }

    /// The semisimple class supported on one vertex orbit.
    pub fn simple_class(&self, vertex_orbit: usize) -> ModuleClass {
        ModuleClass { dim: self.orbits.simple_dim(vertex_orbit), orbit: 0 }
    }

    fn check_class(&self, m: &ModuleClass) -> Result<Arc<OrbitTable>> {
        let t = self.orbit_table(&m.dim)?;
        if m.orbit as usize >= t.len() {
            return Err(HallError::MissingOrbitTable(format!("{m}")));
        }
        Ok(t)
    }

    pub fn representative(&self, m: &ModuleClass) -> Result<PointE> {
        let t = self.check_class(m)?;
        let space = self.space(&m.dim)?;
        Ok(space.decode(&self.field, t.orbits[m.orbit as usize].representative))
    }

    pub fn aut_order(&self, m: &ModuleClass) -> Result<BigUint> {
        let t = self.check_class(m)?;
        Ok(t.orbits[m.orbit as usize].aut_order.clone())
    }

    /// Class of a point of `E_nu^F`.
    pub fn classify(&self, dim: &DimVector, x: &PointE) -> Result<ModuleClass> {
        let t = self.orbit_table(dim)?;
        let space = self.space(dim)?;
        Ok(ModuleClass { dim: dim.clone(), orbit: t.orbit_of(space.encode(&self.field, x)) })
    }

    /// The full tuple `(x_g)_{g in H}` with `x_{a^m(h)} = Frob^m(x_h)`.
    pub fn full_tuple(&self, x: &PointE) -> Vec<Mat> {
        let mut out = vec![Mat::zeros(0, 0); self.quiver.arrows().len()];
        for (ao, xh) in self.orbits.arrow_orbits.iter().zip(&x.mats) {
            for (m, &g) in ao.members.iter().enumerate() {
                out[g] = xh.frobenius(&self.field, m as u32);
            }
        }
        out
    }

    /// Whether the full tuple of `x` is fixed by `F`: `x_{a(g)} = Frob(x_g)`
    /// at every arrow, which includes closing up after `d_h` steps.
    pub fn is_frobenius_fixed(&self, x: &PointE) -> bool {
        let full = self.full_tuple(x);
        (0..full.len()).all(|g| full[self.quiver.aut_arrow(g)] == full[g].frobenius(&self.field, 1))
    }

    /// `dim_{F_q} Hom(M, N)` between the modules given by points `x` (of
    /// dimension `dm`) and `y` (of dimension `dn`). Unknown matrices are
    /// expanded over an `F_p`-basis of their field and the equations over the
    /// `F_p`-coordinates of the ambient field; the nullity is divided by `e`.
    pub fn hom_dim_points(&self, dm: &DimVector, x: &PointE, dn: &DimVector, y: &PointE) -> usize {
        let f = &self.field;
        let vos = &self.orbits.vertex_orbits;
        let shapes: Vec<(usize, usize)> = vos
            .iter()
            .map(|vo| (dn.entries()[vo.rep] as usize, dm.entries()[vo.rep] as usize))
            .collect();

        let mut columns: Vec<Vec<u32>> = Vec::new();
        for (o, vo) in vos.iter().enumerate() {
            let (r, c) = shapes[o];
            for &b in f.subfield_fp_basis(vo.size) {
                for i in 0..r {
                    for j in 0..c {
                        let mut unit: Vec<Mat> = shapes.iter().map(|&(r, c)| Mat::zeros(r, c)).collect();
                        unit[o][(i, j)] = b;
                        columns.push(self.intertwiner_defect(&unit, x, y));
                    }
                }
            }
        }
        let unknowns = columns.len();
        if unknowns == 0 {
            return 0;
        }
        let rank = rank_mod_p(columns, f.p());
        let nullity = unknowns - rank;
        assert_eq!(nullity % f.e() as usize, 0, "F_p-nullity of an F_q-linear map");
        nullity / f.e() as usize
    }

    /// `F_p`-coordinates of `(f_{t(h)} x_h - y_h f_{s(h)})_h`.
    fn intertwiner_defect(&self, maps: &[Mat], x: &PointE, y: &PointE) -> Vec<u32> {
        let f = &self.field;
        let mut coords = Vec::new();
        for ((ao, xh), yh) in self.orbits.arrow_orbits.iter().zip(&x.mats).zip(&y.mats) {
            let ft = maps[ao.target_orbit].frobenius(f, ao.target_shift);
            let fs = maps[ao.source_orbit].frobenius(f, ao.source_shift);
            let d = ft.mul(f, xh).sub(f, &yh.mul(f, &fs));
            for &s in d.data() {
                coords.extend(f.coeffs(s));
            }
        }
        coords
    }

    pub fn hom_dim(&self, m: &ModuleClass, n: &ModuleClass) -> Result<usize> {
        let x = self.representative(m)?;
        let y = self.representative(n)?;
        Ok(self.hom_dim_points(&m.dim, &x, &n.dim, &y))
    }

    /// `hom(M, N) - <dim M, dim N>`.
    pub fn ext_dim(&self, m: &ModuleClass, n: &ModuleClass) -> Result<usize> {
        let hom = self.hom_dim(m, n)? as i64;
        let ext = hom - self.euler(&m.dim, &n.dim);
        if ext < 0 {
            return Err(HallError::NegativeExt(ext));
        }
        Ok(ext as usize)
    }
}
