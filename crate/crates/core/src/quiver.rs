//! Quivers with an admissible automorphism, their orbit data, invariant
//! dimension vectors and the Euler form.

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{HallError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite quiver `(I, H, s, t)` with a pair of permutations of `I` and `H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverWithAut {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    aut_v: Vec<usize>,
    aut_h: Vec<usize>,
    order: usize,
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

fn cycle_len(perm: &[usize], start: usize) -> usize {
    let mut k = 1;
    let mut x = perm[start];
    while x != start {
        x = perm[x];
        k += 1;
    }
    k
}

fn lcm(a: usize, b: usize) -> usize {
    a / num_integer::gcd(a, b) * b
}

impl QuiverWithAut {
    /// Builds the quiver. Only well-formedness (indices in range, genuine
    /// permutations) is checked here; see [`QuiverWithAut::validate`].
    pub fn new(
        vertices: Vec<String>,
        arrows: Vec<Arrow>,
        aut_v: Vec<usize>,
        aut_h: Vec<usize>,
    ) -> Result<Self> {
        let nv = vertices.len();
        if aut_v.len() != nv || !is_permutation(&aut_v) {
            return Err(HallError::MalformedQuiver("vertex automorphism is not a permutation".into()));
        }
        if aut_h.len() != arrows.len() || !is_permutation(&aut_h) {
            return Err(HallError::MalformedQuiver("arrow automorphism is not a permutation".into()));
        }
        for a in &arrows {
            if a.source >= nv || a.target >= nv {
                return Err(HallError::MalformedQuiver(format!("arrow {} has an unknown endpoint", a.name)));
            }
        }
        let mut order = 1;
        for i in 0..nv {
            order = lcm(order, cycle_len(&aut_v, i));
        }
        for h in 0..arrows.len() {
            order = lcm(order, cycle_len(&aut_h, h));
        }
        Ok(QuiverWithAut { vertices, arrows, aut_v, aut_h, order })
    }

    /// The quiver with the identity automorphism.
    pub fn trivial(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        let nv = vertices.len();
        let nh = arrows.len();
        Self::new(vertices, arrows, (0..nv).collect(), (0..nh).collect())
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn aut_vertex(&self, i: usize) -> usize {
        self.aut_v[i]
    }

    pub fn aut_arrow(&self, h: usize) -> usize {
        self.aut_h[h]
    }

    /// Smallest `n >= 1` with `a^n = id` on vertices and arrows.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn validate(&self) -> Result<OrbitData> {
        for a in &self.arrows {
            if a.source == a.target {
                return Err(HallError::HasLoop(a.name.clone()));
            }
        }
        for (h, a) in self.arrows.iter().enumerate() {
            let ah = &self.arrows[self.aut_h[h]];
            if self.aut_v[a.source] != ah.source || self.aut_v[a.target] != ah.target {
                return Err(HallError::NotEquivariant(a.name.clone()));
            }
        }

        let mut vertex_orbits: Vec<VertexOrbit> = Vec::new();
        let mut vertex_slot = vec![(usize::MAX, 0u32); self.vertices.len()];
        for i in 0..self.vertices.len() {
            if vertex_slot[i].0 != usize::MAX {
                continue;
            }
            let id = vertex_orbits.len();
            let mut members = vec![i];
            let mut x = self.aut_v[i];
            while x != i {
                members.push(x);
                x = self.aut_v[x];
            }
            for (m, &v) in members.iter().enumerate() {
                vertex_slot[v] = (id, m as u32);
            }
            vertex_orbits.push(VertexOrbit { rep: i, size: members.len() as u32, members });
        }

        for a in &self.arrows {
            if vertex_slot[a.source].0 == vertex_slot[a.target].0 {
                return Err(HallError::NotAdmissible(a.name.clone()));
            }
        }

        let mut arrow_orbits: Vec<ArrowOrbit> = Vec::new();
        let mut arrow_seen = vec![false; self.arrows.len()];
        for h in 0..self.arrows.len() {
            if arrow_seen[h] {
                continue;
            }
            let mut members = vec![h];
            let mut x = self.aut_h[h];
            while x != h {
                members.push(x);
                x = self.aut_h[x];
            }
            for &g in &members {
                arrow_seen[g] = true;
            }
            let a = &self.arrows[h];
            let (so, ss) = vertex_slot[a.source];
            let (to, ts) = vertex_slot[a.target];
            arrow_orbits.push(ArrowOrbit {
                rep: h,
                size: members.len() as u32,
                members,
                source_orbit: so,
                source_shift: ss,
                target_orbit: to,
                target_shift: ts,
            });
        }

        let n = vertex_orbits
            .iter()
            .map(|o| o.size as usize)
            .chain(arrow_orbits.iter().map(|o| o.size as usize))
            .fold(1, lcm) as u32;

        Ok(OrbitData { vertex_orbits, arrow_orbits, vertex_slot, n })
    }

    /// `<a, b> = sum_i a_i b_i - sum_h a_{s(h)} b_{t(h)}` over all of `I` and `H`.
    pub fn euler_form(&self, a: &DimVector, b: &DimVector) -> Result<i64> {
        self.check_len(a)?;
        self.check_len(b)?;
        let diag: i64 = a.0.iter().zip(&b.0).map(|(&x, &y)| x as i64 * y as i64).sum();
        let off: i64 = self
            .arrows
            .iter()
            .map(|h| a.0[h.source] as i64 * b.0[h.target] as i64)
            .sum();
        Ok(diag - off)
    }

    /// `(a, b) = <a, b> + <b, a>`.
    pub fn symmetric_form(&self, a: &DimVector, b: &DimVector) -> Result<i64> {
        Ok(self.euler_form(a, b)? + self.euler_form(b, a)?)
    }

    /// `sum_i a_i b_i` over all vertices.
    pub fn vertex_pairing(&self, a: &DimVector, b: &DimVector) -> i64 {
        a.0.iter().zip(&b.0).map(|(&x, &y)| x as i64 * y as i64).sum()
    }

    /// `sum_h a_{s(h)} b_{t(h)}` over all arrows.
    pub fn arrow_pairing(&self, a: &DimVector, b: &DimVector) -> i64 {
        self.arrows
            .iter()
            .map(|h| a.0[h.source] as i64 * b.0[h.target] as i64)
            .sum()
    }

    fn check_len(&self, a: &DimVector) -> Result<()> {
        if a.0.len() != self.vertices.len() {
            return Err(HallError::DimensionMismatch { expected: self.vertices.len(), found: a.0.len() });
        }
        Ok(())
    }

    /// Checks length and `a`-invariance of raw entries.
    pub fn dim(&self, entries: Vec<u32>) -> Result<DimVector> {
        if entries.len() != self.vertices.len() {
            return Err(HallError::DimensionMismatch { expected: self.vertices.len(), found: entries.len() });
        }
        if (0..entries.len()).any(|i| entries[i] != entries[self.aut_v[i]]) {
            return Err(HallError::NotInvariant(entries));
        }
        Ok(DimVector(entries))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexOrbit {
    pub rep: usize,
    /// `members[m] = a^m(rep)`.
    pub members: Vec<usize>,
    pub size: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowOrbit {
    pub rep: usize,
    pub members: Vec<usize>,
    pub size: u32,
    /// Vertex orbit of `s(rep)`, and `m` with `s(rep) = a^m(orbit rep)`.
    pub source_orbit: usize,
    pub source_shift: u32,
    pub target_orbit: usize,
    pub target_shift: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitData {
    pub vertex_orbits: Vec<VertexOrbit>,
    pub arrow_orbits: Vec<ArrowOrbit>,
    /// For each vertex: its orbit index and its shift from the orbit representative.
    pub vertex_slot: Vec<(usize, u32)>,
    /// lcm of all vertex and arrow orbit sizes.
    pub n: u32,
}

impl OrbitData {
    pub fn num_vertices(&self) -> usize {
        self.vertex_slot.len()
    }

    /// Dimension vector taking value `values[o]` on vertex orbit `o`.
    pub fn dim_from_orbits(&self, values: &[u32]) -> DimVector {
        assert_eq!(values.len(), self.vertex_orbits.len());
        DimVector(self.vertex_slot.iter().map(|&(o, _)| values[o]).collect())
    }

    pub fn orbit_values(&self, d: &DimVector) -> Vec<u32> {
        self.vertex_orbits.iter().map(|o| d.0[o.rep]).collect()
    }

    /// Indicator vector of a vertex orbit.
    pub fn simple_dim(&self, orbit: usize) -> DimVector {
        let mut v = vec![0; self.vertex_orbits.len()];
        v[orbit] = 1;
        self.dim_from_orbits(&v)
    }

    /// All invariant `mu <= nu`, ordered lexicographically by orbit values.
    pub fn sub_dims(&self, nu: &DimVector) -> Vec<DimVector> {
        let bounds = self.orbit_values(nu);
        let mut out = Vec::new();
        let mut cur = vec![0u32; bounds.len()];
        loop {
            out.push(self.dim_from_orbits(&cur));
            let mut k = bounds.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur[k] < bounds[k] {
                    cur[k] += 1;
                    break;
                }
                cur[k] = 0;
            }
        }
    }

    /// All invariant dimension vectors with `sum_i nu_i <= max_total`.
    pub fn dims_up_to(&self, max_total: u32) -> Vec<DimVector> {
        let sizes: Vec<u32> = self.vertex_orbits.iter().map(|o| o.size).collect();
        let mut out = Vec::new();
        let mut cur = vec![0u32; sizes.len()];
        fn rec(k: usize, left: u32, sizes: &[u32], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if k == sizes.len() {
                out.push(cur.clone());
                return;
            }
            let mut m = 0;
            while m * sizes[k] <= left {
                cur[k] = m;
                rec(k + 1, left - m * sizes[k], sizes, cur, out);
                m += 1;
            }
            cur[k] = 0;
        }
        let mut raw = Vec::new();
        rec(0, max_total, &sizes, &mut cur, &mut raw);
        for v in raw {
            out.push(self.dim_from_orbits(&v));
        }
        out.sort_by(|a, b| a.total().cmp(&b.total()).then(a.cmp(b)));
        out
    }

    /// Splittings `nu = nu' + nu''` into invariant parts, ordered by `nu''`.
    pub fn splittings(&self, nu: &DimVector) -> Vec<(DimVector, DimVector)> {
        self.sub_dims(nu)
            .into_iter()
            .map(|sub| (nu.checked_sub(&sub).expect("sub_dims are bounded"), sub))
            .collect()
    }
}

/// A dimension vector invariant under the automorphism. Construct through
/// [`QuiverWithAut::dim`] or [`OrbitData`]; sums and differences of invariant
/// vectors stay invariant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DimVector(Vec<u32>);

impl DimVector {
    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// `sum_i nu_i` over all vertices.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn le(&self, other: &DimVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &DimVector) -> Option<DimVector> {
        if !other.le(self) {
            return None;
        }
        Some(DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn square_sum(&self) -> i64 {
        self.0.iter().map(|&x| x as i64 * x as i64).sum()
    }
}

impl Add for &DimVector {
    type Output = DimVector;

    fn add(self, rhs: &DimVector) -> DimVector {
        assert_eq!(self.0.len(), rhs.0.len(), "dimension vectors of different quivers");
        DimVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A refinement `(alpha_1, alpha_2, beta_1, beta_2)` of two splittings of the
/// same total dimension vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Lambda {
    pub alpha1: DimVector,
    pub alpha2: DimVector,
    pub beta1: DimVector,
    pub beta2: DimVector,
}

fn grading_check(alpha: &DimVector, beta: &DimVector, alpha_p: &DimVector, beta_p: &DimVector) -> Result<()> {
    if alpha + beta != alpha_p + beta_p {
        return Err(HallError::GradingMismatch(format!(
            "{alpha} + {beta} != {alpha_p} + {beta_p}"
        )));
    }
    Ok(())
}

/// Every invariant `lambda` with `alpha = a1 + a2`, `beta = b1 + b2`,
/// `alpha' = a1 + b1`, `beta' = a2 + b2`, in lexicographic order of `a1`.
pub fn enumerate_lambda(
    orbits: &OrbitData,
    alpha: &DimVector,
    beta: &DimVector,
    alpha_p: &DimVector,
    beta_p: &DimVector,
) -> Result<Vec<Lambda>> {
    grading_check(alpha, beta, alpha_p, beta_p)?;
    let mut out = Vec::new();
    for alpha1 in orbits.sub_dims(alpha) {
        if !alpha1.le(alpha_p) {
            continue;
        }
        let alpha2 = alpha.checked_sub(&alpha1).unwrap();
        let beta1 = alpha_p.checked_sub(&alpha1).unwrap();
        let Some(beta2) = beta.checked_sub(&beta1) else { continue };
        debug_assert_eq!(&(&alpha2 + &beta2), beta_p);
        out.push(Lambda { alpha1, alpha2, beta1, beta2 });
    }
    Ok(out)
}

/// The dimension bookkeeping for one `lambda`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftTerms {
    pub m: i64,
    pub r: i64,
    pub r_prime: i64,
    pub n_lambda: i64,
    pub twist: i64,
}

impl ShiftTerms {
    pub fn holds(&self) -> bool {
        self.m - 2 * self.r_prime == self.n_lambda - self.twist
    }
}

pub fn shift_terms(
    quiver: &QuiverWithAut,
    alpha: &DimVector,
    beta: &DimVector,
    alpha_p: &DimVector,
    beta_p: &DimVector,
    lambda: &Lambda,
) -> Result<ShiftTerms> {
    grading_check(alpha, beta, alpha_p, beta_p)?;
    let Lambda { alpha1, alpha2, beta1, beta2 } = lambda;
    if &(alpha1 + alpha2) != alpha
        || &(beta1 + beta2) != beta
        || &(alpha1 + beta1) != alpha_p
        || &(alpha2 + beta2) != beta_p
    {
        return Err(HallError::GradingMismatch("lambda does not refine the given splittings".into()));
    }
    let vp = |a: &DimVector, b: &DimVector| quiver.vertex_pairing(a, b);
    let ap = |a: &DimVector, b: &DimVector| quiver.arrow_pairing(a, b);

    let m = vp(alpha, beta) + ap(alpha, beta) - quiver.euler_form(alpha_p, beta_p)?;
    let r = ap(alpha1, alpha2) + ap(alpha1, beta2) + ap(beta1, beta2) + vp(alpha2, beta1);
    let r_prime = r - (ap(alpha1, alpha2) + ap(beta1, beta2));
    let n_lambda = -quiver.euler_form(alpha1, alpha2)? - quiver.euler_form(beta1, beta2)?
        + vp(alpha1, beta1)
        + vp(alpha2, beta2)
        + ap(alpha1, beta1)
        + ap(alpha2, beta2);
    let twist = quiver.symmetric_form(alpha2, beta1)?;
    Ok(ShiftTerms { m, r, r_prime, n_lambda, twist })
}

/// Whether `M - 2 r'_lambda = N_lambda - (alpha_2, beta_1)`.
pub fn shift_identity_check(
    quiver: &QuiverWithAut,
    alpha: &DimVector,
    beta: &DimVector,
    alpha_p: &DimVector,
    beta_p: &DimVector,
    lambda: &Lambda,
) -> Result<bool> {
    Ok(shift_terms(quiver, alpha, beta, alpha_p, beta_p, lambda)?.holds())
}

/// Small quivers used throughout tests and examples.
pub mod examples {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn arrow(name: &str, s: usize, t: usize) -> Arrow {
        Arrow { name: name.into(), source: s, target: t }
    }

    /// `1 -> 2`.
    pub fn a2() -> QuiverWithAut {
        QuiverWithAut::trivial(names(&["1", "2"]), vec![arrow("h", 0, 1)]).unwrap()
    }

    /// Two arrows `1 -> 2`.
    pub fn kronecker() -> QuiverWithAut {
        QuiverWithAut::trivial(names(&["1", "2"]), vec![arrow("h1", 0, 1), arrow("h2", 0, 1)]).unwrap()
    }

    /// `1 -> 2 <- 3` with the automorphism swapping `1, 3` and the two arrows.
    pub fn a3_fold() -> QuiverWithAut {
        QuiverWithAut::new(
            names(&["1", "2", "3"]),
            vec![arrow("h1", 0, 1), arrow("h3", 2, 1)],
            vec![2, 1, 0],
            vec![1, 0],
        )
        .unwrap()
    }

    /// `1 -> 2 <- 3` with the identity automorphism.
    pub fn a3() -> QuiverWithAut {
        QuiverWithAut::trivial(names(&["1", "2", "3"]), vec![arrow("h1", 0, 1), arrow("h3", 2, 1)]).unwrap()
    }
}
