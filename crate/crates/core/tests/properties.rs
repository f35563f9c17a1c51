use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use hallq::algebra::{HallCoeff, HallElement, TensorElement};
use hallq::functions::InvFunction;
use hallq::quiver::examples::{a2, a3_fold, kronecker};
use hallq::quiver::{enumerate_lambda, DimVector};
use hallq::repspace::GroupElem;
use hallq::{ModuleClass, QuiverWithAut, Workbench};

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..20, 1i64..7).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn coeff(q: u64) -> impl Strategy<Value = HallCoeff> {
    (rational(), rational()).prop_map(move |(a, b)| HallCoeff::new(q, a, b))
}

fn triple() -> impl Strategy<Value = (HallCoeff, HallCoeff, HallCoeff)> {
    prop::sample::select(vec![2u64, 3, 4, 5, 9]).prop_flat_map(|q| (coeff(q), coeff(q), coeff(q)))
}

proptest! {
    #[test]
    fn coeff_ring_laws((x, y, z) in triple()) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert_eq!(&x * &HallCoeff::one(x.q()), x.clone());
        prop_assert!((&x + &(-&x)).is_zero());
    }

    #[test]
    fn v_powers_add(q in prop::sample::select(vec![2u64, 3, 4, 7]), a in -6i64..6, b in -6i64..6) {
        prop_assert_eq!(&HallCoeff::v_pow(q, a) * &HallCoeff::v_pow(q, b), HallCoeff::v_pow(q, a + b));
        prop_assert_eq!(&HallCoeff::v(q) * &HallCoeff::v(q), HallCoeff::from_int(q, q as i64));
    }
}

fn orbit_vector(quiver: &QuiverWithAut, max: u32) -> impl Strategy<Value = DimVector> {
    let od = quiver.validate().unwrap();
    let k = od.vertex_orbits.len();
    prop::collection::vec(0..=max, k).prop_map(move |v| od.dim_from_orbits(&v))
}

fn quivers() -> Vec<QuiverWithAut> {
    vec![a2(), kronecker(), a3_fold()]
}

proptest! {
    #[test]
    fn euler_form_is_bilinear(
        (qi, a, b, c) in (0usize..3).prop_flat_map(|i| {
            let q = quivers()[i].clone();
            (Just(i), orbit_vector(&q, 4), orbit_vector(&q, 4), orbit_vector(&q, 4))
        })
    ) {
        let quiver = &quivers()[qi];
        let e = |x: &DimVector, y: &DimVector| quiver.euler_form(x, y).unwrap();
        prop_assert_eq!(e(&(&a + &b), &c), e(&a, &c) + e(&b, &c));
        prop_assert_eq!(e(&a, &(&b + &c)), e(&a, &b) + e(&a, &c));
        prop_assert_eq!(quiver.symmetric_form(&a, &b).unwrap(), quiver.symmetric_form(&b, &a).unwrap());
        prop_assert_eq!(quiver.symmetric_form(&a, &a).unwrap(), 2 * e(&a, &a));
    }

    #[test]
    fn lambda_count_matches_brute_force(
        (qi, a, b, split) in (0usize..3).prop_flat_map(|i| {
            let q = quivers()[i].clone();
            (Just(i), orbit_vector(&q, 3), orbit_vector(&q, 3), prop::collection::vec(0u32..100, 3))
        })
    ) {
        let quiver = &quivers()[qi];
        let od = quiver.validate().unwrap();
        let total = &a + &b;
        let tv = od.orbit_values(&total);
        let ap_vals: Vec<u32> = tv.iter().zip(split.iter().cycle()).map(|(&t, &s)| s % (t + 1)).collect();
        let ap = od.dim_from_orbits(&ap_vals);
        let bp = total.checked_sub(&ap).unwrap();
        let lambdas = enumerate_lambda(&od, &a, &b, &ap, &bp).unwrap();

        let mut brute = 0;
        for a1 in od.sub_dims(&total) {
            for b1 in od.sub_dims(&total) {
                let (Some(a2v), Some(b2v)) = (a.checked_sub(&a1), b.checked_sub(&b1)) else { continue };
                if &a1 + &b1 == ap && &a2v + &b2v == bp {
                    brute += 1;
                }
            }
        }
        prop_assert_eq!(lambdas.len(), brute);
        for l in &lambdas {
            prop_assert_eq!(&l.alpha1 + &l.alpha2, a.clone());
            prop_assert_eq!(&l.beta1 + &l.beta2, b.clone());
        }
    }
}

fn workbenches() -> Vec<(Workbench, u32)> {
    vec![
        (Workbench::new(a2(), 2, 1).unwrap(), 3),
        (Workbench::new(kronecker(), 2, 1).unwrap(), 3),
        (Workbench::new(a3_fold(), 2, 1).unwrap(), 3),
    ]
}

#[test]
fn multiplication_is_associative_and_graded() {
    for (wb, max) in workbenches() {
        let classes = wb.classes_up_to(max).unwrap();
        for x in &classes {
            for y in &classes {
                for z in &classes {
                    if x.dim.total() + y.dim.total() + z.dim.total() > max {
                        continue;
                    }
                    let (ux, uy, uz) = (wb.basis(x), wb.basis(y), wb.basis(z));
                    let left = wb.multiply(&wb.multiply(&ux, &uy).unwrap(), &uz).unwrap();
                    let right = wb.multiply(&ux, &wb.multiply(&uy, &uz).unwrap()).unwrap();
                    assert_eq!(left, right, "{x} {y} {z}");
                    let total = &(&x.dim + &y.dim) + &z.dim;
                    assert!(left.terms().keys().all(|l| l.dim == total));
                }
            }
        }
    }
}

#[test]
fn comultiplication_is_coassociative_and_counital() {
    for (wb, max) in workbenches() {
        for l in wb.classes_up_to(max).unwrap() {
            let d = wb.comultiply_basis(&l).unwrap();
            assert_eq!(wb.counit_left(&d), wb.basis(&l));
            assert_eq!(wb.counit_right(&d), wb.basis(&l));
            assert!(d.terms().keys().all(|(m, n)| &m.dim + &n.dim == l.dim));

            // (Delta (x) id) Delta and (id (x) Delta) Delta as maps to triples.
            let mut left: BTreeMap<(ModuleClass, ModuleClass, ModuleClass), HallCoeff> = BTreeMap::new();
            let mut right = left.clone();
            for ((m, n), c) in d.terms() {
                for ((a, b), c2) in wb.comultiply_basis(m).unwrap().terms() {
                    let slot = left.entry((a.clone(), b.clone(), n.clone())).or_insert_with(|| HallCoeff::zero(wb.q()));
                    *slot += &(c * c2);
                }
                for ((a, b), c2) in wb.comultiply_basis(n).unwrap().terms() {
                    let slot = right.entry((m.clone(), a.clone(), b.clone())).or_insert_with(|| HallCoeff::zero(wb.q()));
                    *slot += &(c * c2);
                }
            }
            left.retain(|_, c| !c.is_zero());
            right.retain(|_, c| !c.is_zero());
            assert_eq!(left, right, "{l}");
        }
    }
}

#[test]
fn tensor_unit_is_neutral() {
    let wb = Workbench::new(a3_fold(), 2, 1).unwrap();
    let one = TensorElement::basis(wb.q(), wb.zero_class(), wb.zero_class());
    for l in wb.classes_up_to(3).unwrap() {
        let d = wb.comultiply_basis(&l).unwrap();
        assert_eq!(wb.tensor_multiply(&one, &d).unwrap(), d);
        assert_eq!(wb.tensor_multiply(&d, &one).unwrap(), d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Submodule data depends only on the orbit, not on the point chosen.
    #[test]
    fn hall_counts_are_group_invariant(which in 0usize..3, pick in any::<prop::sample::Index>(), gpick in any::<prop::sample::Index>()) {
        let (wb, max) = workbenches().swap_remove(which);
        let classes: Vec<ModuleClass> = wb.classes_up_to(max).unwrap().into_iter().filter(|c| !c.dim.is_zero()).collect();
        let l = pick.get(&classes).clone();
        let group: Vec<GroupElem> = wb.enumerate_group(&l.dim, 50_000).unwrap();
        let g = gpick.get(&group);
        let x = wb.representative(&l).unwrap();
        let y = wb.act(g, &x).unwrap();
        prop_assert_eq!(wb.classify(&l.dim, &y).unwrap(), l.clone());
        for sub in wb.orbit_data().sub_dims(&l.dim) {
            let key = |subs: Vec<hallq::hall::Submodule>| {
                let mut v: Vec<(u32, u32)> = subs.iter().map(|s| (s.quotient.orbit, s.sub.orbit)).collect();
                v.sort();
                v
            };
            let a = key(wb.submodules_of_point(&l.dim, &x, &sub).unwrap());
            let b = key(wb.submodules_of_point(&l.dim, &y, &sub).unwrap());
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn induction_is_bilinear(seed in prop::collection::vec(-3i64..4, 12)) {
        let wb = Workbench::new(a3_fold(), 2, 1).unwrap();
        let q = wb.q();
        let od = wb.orbit_data().clone();
        let outer = od.vertex_slot[0].0;
        let d1 = od.simple_dim(outer);
        let d2 = &od.simple_dim(1 - outer) + &od.simple_dim(1 - outer);
        let random = |dim: &DimVector, offset: usize| {
            let mut f = InvFunction::zero(q, dim.clone());
            for c in wb.classes(dim).unwrap() {
                f.set(c.orbit, HallCoeff::from_int(q, seed[(offset + c.orbit as usize) % seed.len()]));
            }
            f
        };
        let (f1, f2, g) = (random(&d1, 0), random(&d1, 5), random(&d2, 9));
        let k = HallCoeff::from_int(q, seed[3]);
        let lhs = wb.ind_fn(&f1.add(&f2.scale(&k)), &g).unwrap();
        let rhs = wb.ind_fn(&f1, &g).unwrap().add(&wb.ind_fn(&f2, &g).unwrap().scale(&k));
        prop_assert_eq!(lhs, rhs);
        let lhs = wb.ind_fn(&g, &f1.add(&f2)).unwrap();
        let rhs = wb.ind_fn(&g, &f1).unwrap().add(&wb.ind_fn(&g, &f2).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn phi_is_bijective_on_basis() {
    let wb = Workbench::new(a2(), 3, 1).unwrap();
    let mut seen = std::collections::BTreeSet::new();
    for l in wb.classes_up_to(3).unwrap() {
        let u = wb.phi(&wb.indicator(&l));
        assert_eq!(u.terms().len(), 1);
        let (m, c) = u.terms().iter().next().unwrap();
        assert_eq!(m, &l);
        assert_eq!(c, &HallCoeff::v_pow(wb.q(), l.dim.square_sum()));
        assert!(seen.insert(m.clone()));
    }
    let zero = HallElement::zero(wb.q());
    assert_eq!(wb.phi(&InvFunction::zero(wb.q(), wb.zero_dim())), zero);
}
