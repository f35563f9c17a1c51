//! Exhaustive and sampled sweeps of the identity checks over all classes up
//! to a total dimension.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::HallCoeff;
use crate::error::Result;
use crate::hall::{big, int};
use crate::quiver::{enumerate_lambda, shift_terms, DimVector};
use crate::repspace::ModuleClass;
use crate::workbench::Workbench;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub inputs: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepOutcome {
    pub instances: u64,
    pub failures: Vec<Failure>,
    pub stats: BTreeMap<String, u64>,
}

impl SweepOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn absorb(&mut self, other: SweepOutcome) {
        self.instances += other.instances;
        self.failures.extend(other.failures);
        for (k, v) in other.stats {
            *self.stats.entry(k).or_default() += v;
        }
    }

    fn single(ok: bool, inputs: Vec<String>, lhs: impl ToString, rhs: impl ToString) -> Self {
        let failures = if ok { vec![] } else { vec![Failure { inputs, lhs: lhs.to_string(), rhs: rhs.to_string() }] };
        SweepOutcome { instances: 1, failures, stats: BTreeMap::new() }
    }
}

fn merge(parts: Vec<SweepOutcome>) -> SweepOutcome {
    let mut out = SweepOutcome::default();
    for p in parts {
        out.absorb(p);
    }
    out
}

fn names(cs: &[&ModuleClass]) -> Vec<String> {
    cs.iter().map(|c| c.to_string()).collect()
}

impl Workbench {
    /// Builds every orbit table up to `max_total` and returns all classes.
    pub fn prepare(&self, max_total: u32) -> Result<Vec<ModuleClass>> {
        self.classes_up_to(max_total)
    }

    /// Ordered pairs `(M, N)` with `|dim M| + |dim N| <= max_total`.
    pub fn class_pairs(&self, max_total: u32) -> Result<Vec<(ModuleClass, ModuleClass)>> {
        let classes = self.prepare(max_total)?;
        let mut out = Vec::new();
        for m in &classes {
            for n in &classes {
                if m.dim.total() + n.dim.total() <= max_total {
                    out.push((m.clone(), n.clone()));
                }
            }
        }
        Ok(out)
    }

    /// Pairs `(M', N')` with `dim M' + dim N' = total`.
    fn pairs_of_total(&self, total: &DimVector) -> Result<Vec<(ModuleClass, ModuleClass)>> {
        let mut out = Vec::new();
        for (qd, sd) in self.orbits.splittings(total) {
            for mp in self.classes(&qd)? {
                for np in self.classes(&sd)? {
                    out.push((mp.clone(), np));
                }
            }
        }
        Ok(out)
    }

    pub fn sweep_green(&self, max_total: u32) -> Result<SweepOutcome> {
        let pairs = self.class_pairs(max_total)?;
        let parts: Result<Vec<_>> = pairs
            .par_iter()
            .map(|(m, n)| {
                let mut out = SweepOutcome::default();
                for (mp, np) in self.pairs_of_total(&(&m.dim + &n.dim))? {
                    let s = self.green_raw(m, n, &mp, &np)?;
                    out.absorb(SweepOutcome::single(s.holds(), names(&[m, n, &mp, &np]), &s.lhs, &s.rhs));
                }
                Ok(out)
            })
            .collect();
        Ok(merge(parts?))
    }

    /// Bialgebra identity per pair, plus instance-by-instance agreement of
    /// each coefficient with Green's identity (`stats["disagreements"]`).
    pub fn sweep_bialgebra(&self, max_total: u32) -> Result<SweepOutcome> {
        let pairs = self.class_pairs(max_total)?;
        let parts: Result<Vec<_>> = pairs
            .par_iter()
            .map(|(m, n)| {
                let (lhs, rhs) = self.bialgebra_sides(m, n)?;
                let mut out = SweepOutcome::single(lhs == rhs, names(&[m, n]), &lhs, &rhs);
                let agreement = self.green_agreement(m, n)?;
                let disagree: Vec<_> = agreement.iter().filter(|a| a.bialgebra != a.green).collect();
                out.stats.insert("coefficients".into(), agreement.len() as u64);
                out.stats.insert("disagreements".into(), disagree.len() as u64);
                for a in disagree {
                    out.failures.push(Failure {
                        inputs: names(&[m, n, &a.m_prime, &a.n_prime]),
                        lhs: format!("bialgebra coefficient equal: {}", a.bialgebra),
                        rhs: format!("green identity holds: {}", a.green),
                    });
                }
                Ok(out)
            })
            .collect();
        Ok(merge(parts?))
    }

    /// Riedtmann-Peng for every `(M, N, L)`; `ext_counts` itself rejects
    /// non-integral extension counts.
    pub fn sweep_riedtmann_peng(&self, max_total: u32) -> Result<SweepOutcome> {
        let pairs = self.class_pairs(max_total)?;
        let parts: Result<Vec<_>> = pairs
            .par_iter()
            .map(|(m, n)| {
                let ext = self.ext_counts(m, n)?;
                let mut out = SweepOutcome::default();
                out.stats.insert("ext_values".into(), ext.by_middle.len() as u64);
                for l in self.classes(&(&m.dim + &n.dim))? {
                    let rp = self.riedtmann_peng(m, n, &l)?;
                    out.absorb(SweepOutcome::single(rp.holds(), names(&[m, n, &l]), rp.hall, &rp.predicted));
                }
                Ok(out)
            })
            .collect();
        Ok(merge(parts?))
    }

    /// `hom - ext = <M, N>` with `ext` read off the fiber, agreement of that
    /// with `ext_dim`, and `sum_L fiber_count(L) = |fiber|`.
    pub fn sweep_euler(&self, max_total: u32) -> Result<SweepOutcome> {
        let pairs = self.class_pairs(max_total)?;
        let parts: Result<Vec<_>> = pairs
            .par_iter()
            .map(|(m, n)| {
                let hom = self.hom_dim(m, n)? as i64;
                let ext_fiber = self.ext_dim_from_fiber(m, n)? as i64;
                let ext = self.ext_dim(m, n)? as i64;
                let euler = self.euler(&m.dim, &n.dim);
                let counts = self.fiber_counts(m, n)?;
                let mass: u64 = counts.values().sum();
                let size = self.fiber_size(&m.dim, &n.dim) as u64;
                let ok = hom - ext_fiber == euler && ext == ext_fiber && mass == size;
                Ok(SweepOutcome::single(
                    ok,
                    names(&[m, n]),
                    format!("hom={hom} ext(fiber)={ext_fiber} ext={ext} fiber mass={mass}"),
                    format!("euler={euler} fiber size={size}"),
                ))
            })
            .collect();
        Ok(merge(parts?))
    }

    /// `Phi` against multiplication on pairs and comultiplication on classes.
    pub fn sweep_phi(&self, max_total: u32) -> Result<SweepOutcome> {
        let pairs = self.class_pairs(max_total)?;
        let classes = self.prepare(max_total)?;
        let mult: Result<Vec<_>> = pairs
            .par_iter()
            .map(|(m, n)| {
                let (a, b) = self.phi_mult_sides(m, n)?;
                Ok(SweepOutcome::single(a == b, names(&[m, n]), &a, &b))
            })
            .collect();
        let comult: Result<Vec<_>> = classes
            .par_iter()
            .map(|l| {
                let (a, b) = self.phi_comult_sides(l)?;
                Ok(SweepOutcome::single(a == b, names(&[l]), &a, &b))
            })
            .collect();
        let mult = merge(mult?);
        let comult = merge(comult?);
        let mut out = SweepOutcome::default();
        out.stats.insert("mult_instances".into(), mult.instances);
        out.stats.insert("comult_instances".into(), comult.instances);
        out.absorb(mult);
        out.absorb(comult);
        Ok(out)
    }

    /// Induction against `v^{-e} sum_L g^L_{MN} 1_L`, restriction of `1_L`
    /// against `v^{3 sum nu'nu'' - sum_H nu'_s nu''_t} |Ext_L| / |Hom|`, and
    /// the fiber mass over each splitting against the point count of `E_nu`.
    pub fn sweep_ind_res(&self, max_total: u32) -> Result<SweepOutcome> {
        let q = self.q();
        let pairs = self.class_pairs(max_total)?;
        let parts: Result<Vec<_>> = pairs
            .par_iter()
            .map(|(m, n)| {
                let mut out = SweepOutcome::default();
                let dim = &m.dim + &n.dim;
                let ind = self.ind_fn(&self.indicator(m), &self.indicator(n))?;
                let e = self.quiver.vertex_pairing(&m.dim, &n.dim) + self.quiver.arrow_pairing(&m.dim, &n.dim);
                let table = self.hall_table(&m.dim, &n.dim)?;
                let mut ok = true;
                for l in self.classes(&dim)? {
                    let g = table.get(m.orbit, n.orbit, l.orbit);
                    let expected = HallCoeff::v_pow(q, -e).scale(&int(g));
                    ok &= ind.value(l.orbit) == expected;
                }
                out.absorb(SweepOutcome::single(ok, names(&[m, n]), "ind", "sum of Hall numbers"));

                let ext = self.ext_counts(m, n)?;
                let hom = BigUint::from(q).pow(ext.hom_dim as u32);
                let e3 = 3 * self.quiver.vertex_pairing(&m.dim, &n.dim) - self.quiver.arrow_pairing(&m.dim, &n.dim);
                for l in self.classes(&dim)? {
                    let res = self.res_fn(&self.indicator(&l), &m.dim, &n.dim)?;
                    let ext_l = ext.by_middle.get(&l.orbit).map_or_else(BigUint::default, |x| x.ext.clone());
                    let expected = HallCoeff::v_pow(q, e3).scale(&(big(&ext_l) / big(&hom)));
                    let got = res.value(m, n);
                    out.absorb(SweepOutcome::single(got == expected, names(&[&l, m, n]), &got, &expected));
                }
                Ok(out)
            })
            .collect();
        let mut out = merge(parts?);

        // Points (x', x'', y) whose middle term lies in O_L are the points of
        // O_L that keep the standard subspace stable, so
        // sum_{M,N} |O_M| |O_N| fiber_{MN}(L) * |Gr| = |O_L| * #(stable subspaces of L).
        for dim in self.orbits.dims_up_to(max_total) {
            for (qd, sd) in self.orbits.splittings(&dim) {
                let table = self.hall_table(&qd, &sd)?;
                let grassmannian = self.grassmannian_size(&dim, &sd);
                let mut lhs = vec![BigUint::default(); table.subspace_totals().len()];
                for m in self.classes(&qd)? {
                    for n in self.classes(&sd)? {
                        let om = self.group_order(&qd) / self.aut_order(&m)?;
                        let on = self.group_order(&sd) / self.aut_order(&n)?;
                        for (&l, &c) in self.fiber_counts(&m, &n)?.iter() {
                            lhs[l as usize] += &om * &on * BigUint::from(c) * &grassmannian;
                        }
                    }
                }
                for l in self.classes(&dim)? {
                    let ol = self.group_order(&dim) / self.aut_order(&l)?;
                    let rhs = ol * BigUint::from(table.subspace_totals()[l.orbit as usize]);
                    let got = &lhs[l.orbit as usize];
                    out.absorb(SweepOutcome::single(
                        *got == rhs,
                        vec![l.to_string(), qd.to_string(), sd.to_string()],
                        got,
                        &rhs,
                    ));
                }
            }
        }
        Ok(out)
    }

    pub fn sweep_green_fn(&self, max_total: u32) -> Result<SweepOutcome> {
        let pairs = self.class_pairs(max_total)?;
        let parts: Result<Vec<_>> = pairs
            .par_iter()
            .map(|(m, n)| {
                let (a, b) = self.green_fn_sides(m, n)?;
                Ok(SweepOutcome::single(a == b, names(&[m, n]), &a, &b))
            })
            .collect();
        Ok(merge(parts?))
    }

    /// Serre relations for every ordered pair of distinct vertex orbits.
    pub fn sweep_serre(&self) -> Result<SweepOutcome> {
        let k = self.orbits.vertex_orbits.len();
        let mut out = SweepOutcome::default();
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let s = self.serre(i, j)?;
                let inputs = vec![format!("i={}", self.simple_class(i)), format!("j={}", self.simple_class(j))];
                out.absorb(SweepOutcome::single(s.residual.is_zero(), inputs, &s.residual, "0"));
            }
        }
        Ok(out)
    }

    /// Orbit-stabilizer (`|G| = a_M * |orbit|`) and the partition of the
    /// point set, on every table up to `max_total`.
    pub fn sweep_orbits(&self, max_total: u32) -> Result<SweepOutcome> {
        let mut out = SweepOutcome::default();
        for dim in self.orbits.dims_up_to(max_total) {
            let t = self.orbit_table(&dim)?;
            let g = self.group_order(&dim);
            let stab = t.orbits.iter().all(|o| &o.aut_order * BigUint::from(o.size) == g);
            let total: u64 = t.orbits.iter().map(|o| o.size).sum();
            let points = self.space(&dim)?.count();
            let sizes_match = t.orbits.iter().enumerate().all(|(k, o)| {
                t.point_orbit.iter().filter(|&&x| x == k as u32).count() as u64 == o.size
            });
            out.absorb(SweepOutcome::single(
                stab && total == points && sizes_match,
                vec![dim.to_string()],
                format!("orbits={} covered={total}", t.len()),
                format!("points={points}"),
            ));
        }
        Ok(out)
    }

    /// The shift identity on `tuples` random invariant quadruples
    /// `(alpha, beta, alpha', beta')` with `|alpha| + |beta| <= max_total`,
    /// for every `lambda` of each.
    pub fn sweep_shift(&self, tuples: usize, max_total: u32, seed: u64) -> Result<SweepOutcome> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = self.orbits.vertex_orbits.len();
        let sizes: Vec<u32> = self.orbits.vertex_orbits.iter().map(|o| o.size).collect();
        let weight = |v: &[u32]| v.iter().zip(&sizes).map(|(x, s)| x * s).sum::<u32>();
        let mut out = SweepOutcome::default();
        let mut lambdas = 0u64;
        for _ in 0..tuples {
            let mut budget = rng.gen_range(0..=max_total);
            let mut slots: Vec<u32> = vec![0; 2 * k];
            let mut order: Vec<usize> = (0..2 * k).collect();
            order.shuffle(&mut rng);
            for idx in order {
                let size = sizes[idx % k];
                let x = rng.gen_range(0..=budget / size);
                slots[idx] = x;
                budget -= x * size;
            }
            let (alpha, beta) = (slots[..k].to_vec(), slots[k..].to_vec());
            debug_assert!(weight(&alpha) + weight(&beta) <= max_total);
            let alpha_p: Vec<u32> = (0..k).map(|i| rng.gen_range(0..=alpha[i] + beta[i])).collect();
            let beta_p: Vec<u32> = (0..k).map(|i| alpha[i] + beta[i] - alpha_p[i]).collect();
            let [a, b, ap, bp] = [alpha, beta, alpha_p, beta_p].map(|v| self.orbits.dim_from_orbits(&v));
            let mut ok = true;
            let mut bad = String::new();
            for lam in enumerate_lambda(&self.orbits, &a, &b, &ap, &bp)? {
                lambdas += 1;
                let t = shift_terms(&self.quiver, &a, &b, &ap, &bp, &lam)?;
                if !t.holds() && ok {
                    ok = false;
                    bad = format!("{lam:?}: {t:?}");
                }
            }
            out.absorb(SweepOutcome::single(
                ok,
                vec![a.to_string(), b.to_string(), ap.to_string(), bp.to_string()],
                bad,
                "M - 2r' = N - (alpha2, beta1)",
            ));
        }
        out.stats.insert("lambdas".into(), lambdas);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::examples::*;

    #[test]
    fn small_sweeps_pass() {
        let wb = Workbench::new(a2(), 2, 1).unwrap();
        for s in [
            wb.sweep_green(2).unwrap(),
            wb.sweep_bialgebra(2).unwrap(),
            wb.sweep_riedtmann_peng(2).unwrap(),
            wb.sweep_euler(2).unwrap(),
            wb.sweep_phi(2).unwrap(),
            wb.sweep_ind_res(2).unwrap(),
            wb.sweep_green_fn(2).unwrap(),
            wb.sweep_serre().unwrap(),
            wb.sweep_orbits(2).unwrap(),
            wb.sweep_shift(20, 2, 7).unwrap(),
        ] {
            assert!(s.passed(), "{:?}", s.failures);
            assert!(s.instances > 0);
        }
    }
}
