use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use heegner_lab::disc_form::{discriminant_form, enumerate_isometries, FiniteQuadraticForm};
use heegner_lab::hperp::{disc_group_omega1, PolarizationData};
use heegner_lab::lattice::{parse_description, GramLattice, IntMatrix};
use heegner_lab::reflection::{
    classify_reflection, enumerate_with_box, induced_disc_matrix, reflection_matrix, ExplicitPerp,
    GaloisLabel, SymbolicPerpVector,
};

fn lattices() -> Vec<GramLattice> {
    [
        "U ⊕ Z(-4)",
        "U ⊕ U ⊕ Z(-2) ⊕ Z(-6)",
        "E8(-1) ⊕ Z(2)",
        "U ⊕ Z(-10) ⊕ Z(-4)",
    ]
    .iter()
    .map(|d| parse_description(d).unwrap())
    .collect()
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Eichler transvection x ↦ x + (x·e)a − (x·a)e − ½a²(x·e)e for the
/// isotropic first basis vector e of a leading U and a ⊥ e.
fn transvection(l: &GramLattice, a: &[i64]) -> IntMatrix {
    let n = l.rank();
    let g = l.gram().to_i64_rows().unwrap();
    let dot = |x: &[i64], y: &[i64]| -> i64 {
        (0..n)
            .map(|i| (0..n).map(|j| x[i] * g[i][j] * y[j]).sum::<i64>())
            .sum()
    };
    let mut e = vec![0; n];
    e[0] = 1;
    assert_eq!(dot(&e, a), 0);
    let half_a2 = dot(a, a) / 2;
    let cols: Vec<Vec<i64>> = (0..n)
        .map(|j| {
            let mut x = vec![0; n];
            x[j] = 1;
            let xe = dot(&x, &e);
            let xa = dot(&x, a);
            (0..n)
                .map(|i| x[i] + xe * a[i] - xa * e[i] - half_a2 * xe * e[i])
                .collect()
        })
        .collect();
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| cols.iter().map(|c| c[i]).collect())
        .collect();
    IntMatrix::from_rows(&rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn pairing_is_symmetric_and_bilinear(
        idx in 0usize..4,
        x in prop::collection::vec(-20i64..20, 12),
        y in prop::collection::vec(-20i64..20, 12),
        z in prop::collection::vec(-20i64..20, 12),
        k in -9i64..9,
    ) {
        let l = &lattices()[idx];
        let n = l.rank();
        let (x, y, z) = (l.vector(big(&x[..n])).unwrap(), l.vector(big(&y[..n])).unwrap(), l.vector(big(&z[..n])).unwrap());
        prop_assert_eq!(x.pair(&y).unwrap(), y.pair(&x).unwrap());
        let lhs = x.scale(&BigInt::from(k)).add(&y).unwrap().pair(&z).unwrap();
        let rhs = BigInt::from(k) * x.pair(&z).unwrap() + y.pair(&z).unwrap();
        prop_assert_eq!(lhs, rhs);
        if !x.is_zero() {
            let div = x.divisibility().unwrap();
            prop_assert!((x.square() % div).is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn divisibility_is_isometry_invariant(
        idx in 0usize..4,
        x in prop::collection::vec(-12i64..12, 12),
        steps in prop::collection::vec((0usize..3, prop::collection::vec(-3i64..3, 12)), 1..4),
    ) {
        let l = &lattices()[idx];
        let n = l.rank();
        prop_assume!(x[..n].iter().any(|&c| c != 0));
        if !l.label().starts_with('U') {
            return Ok(());
        }
        let mut p = IntMatrix::identity(n);
        for (kind, a) in steps {
            let m = match kind {
                // e ↔ f in the leading U
                0 => {
                    let mut m = IntMatrix::identity(n);
                    m.set(0, 0, BigInt::zero());
                    m.set(1, 1, BigInt::zero());
                    m.set(0, 1, BigInt::one());
                    m.set(1, 0, BigInt::one());
                    m
                }
                1 => {
                    let mut m = IntMatrix::identity(n);
                    for i in 0..n {
                        m.set(i, i, BigInt::from(-1));
                    }
                    m
                }
                _ => {
                    // a ⊥ e: no f-component
                    let mut a = a[..n].to_vec();
                    a[1] = 0;
                    transvection(l, &a)
                }
            };
            prop_assert!(l.is_isometry(&m));
            p = m.mul(&p);
        }
        let v = l.vector(big(&x[..n])).unwrap();
        let w = v.apply(&p).unwrap();
        prop_assert_eq!(v.divisibility().unwrap(), w.divisibility().unwrap());
        prop_assert_eq!(v.square(), w.square());
    }
}

fn small_forms() -> Vec<FiniteQuadraticForm> {
    let mut out = Vec::new();
    for (t, d, g) in [
        (1, 1, 1),
        (2, 3, 1),
        (3, 2, 1),
        (2, 2, 1),
        (9, 15, 2),
        (3, 5, 2),
        (1, 9, 1),
    ] {
        out.push(
            disc_group_omega1(&PolarizationData::new(t, d, g, None).unwrap())
                .unwrap()
                .form()
                .clone(),
        );
    }
    out.push(
        discriminant_form(&parse_description("U ⊕ Z(-4) ⊕ Z(-4) ⊕ Z(-2)").unwrap())
            .unwrap()
            .form()
            .clone(),
    );
    out
}

#[test]
fn isometries_preserve_q_on_random_elements() {
    use proptest::strategy::ValueTree;
    use proptest::test_runner::TestRunner;
    let mut runner = TestRunner::deterministic();
    for f in small_forms() {
        let group = enumerate_isometries(&f, 20_000).unwrap();
        let n = f.cardinality();
        for g in &group {
            let strat = 0..n;
            for _ in 0..200 {
                let idx = strat.new_tree(&mut runner).unwrap().current();
                let x = f.element_at(idx);
                let diff = f.eval_q(&f.apply(g, &x)).unwrap() - f.eval_q(&x).unwrap();
                let two = BigRational::from_integer(BigInt::from(2));
                assert!((diff / two).is_integer());
            }
        }
    }
}

#[test]
fn isometry_groups_are_closed() {
    for f in small_forms().into_iter().filter(|f| f.cardinality() <= 300) {
        let group = enumerate_isometries(&f, 20_000).unwrap();
        let set: BTreeSet<_> = group.iter().cloned().collect();
        assert!(set.contains(&f.identity()));
        for a in &group {
            assert!(set.contains(&f.inverse(a).unwrap()));
            for b in &group {
                assert!(set.contains(&f.compose(a, b)));
            }
        }
    }
}

/// r_{gβ} = g r_β g⁻¹ for lattice isometries g of h⊥.
#[test]
fn reflections_conjugate_covariantly() {
    for (t, d) in [(1, 1), (2, 3), (3, 2), (2, 2), (3, 3), (2, 5)] {
        let o = ExplicitPerp::new(t, d).unwrap();
        let l = o.lattice();
        let f = o.split().form().clone();
        let mut isos = vec![
            o.sign_isometry(1, -1),
            o.sign_isometry(-1, 1),
            o.sign_isometry(-1, -1),
        ];
        isos.push(transvection(l, &[0, 0, 1, 1, 1, 0]));
        if t == d {
            // k ↔ ℓ
            let mut m = IntMatrix::identity(6);
            for (i, j) in [(4, 5), (5, 4)] {
                m.set(i, i, BigInt::zero());
                m.set(i, j, BigInt::one());
            }
            isos.push(m);
        }
        let classes = enumerate_with_box(t, d, 1).unwrap().all_classes;
        assert!(!classes.is_empty());
        for p in &isos {
            assert!(l.is_isometry(p));
            let g = o.induced_by(p).unwrap();
            let g_inv = f.inverse(&g).unwrap();
            for cls in &classes {
                let beta = l.vector(o.embed(&cls.witness)).unwrap();
                let moved = beta.apply(p).unwrap();
                let r = o.induced(&cls.witness).unwrap();
                let r_moved = o
                    .induced_by(&reflection_matrix(l, &moved).unwrap())
                    .unwrap();
                assert_eq!(
                    r_moved,
                    f.compose(&g, &f.compose(&r, &g_inv)),
                    "(t,d)=({t},{d}) {}",
                    cls.witness
                );
            }
        }
    }
}

/// The enumeration agrees with classifying every reflection in a box.
#[test]
fn enumeration_matches_direct_box_classification() {
    for (t, d) in [(1, 2), (1, 1), (2, 3)] {
        let e = enumerate_with_box(t, d, 1).unwrap();
        let listed: BTreeSet<(i64, Vec<u64>, GaloisLabel)> = e
            .all_classes
            .iter()
            .map(|c| (c.beta_sq, c.beta_star.coords.clone(), c.galois_label))
            .collect();
        let mut direct = BTreeSet::new();
        let r = 8;
        for a in -r..=r {
            let msqs: Vec<i64> = if a == 0 {
                vec![0]
            } else {
                (-24..=24).step_by(2).collect()
            };
            for &msq in &msqs {
                for b in -r..=r {
                    for c in -r..=r {
                        let Ok(v) = SymbolicPerpVector::new(a, msq, b, c) else {
                            continue;
                        };
                        let Ok(cls) = classify_reflection(t, d, &v) else {
                            continue;
                        };
                        let star = heegner_lab::reflection::canonical_star(t, d, &cls.beta_star);
                        direct.insert((cls.beta_sq, star.coords, cls.galois_label));
                    }
                }
            }
        }
        assert_eq!(listed, direct, "(t,d)=({t},{d})");
    }
}

#[test]
fn every_nontrivial_class_lands_in_a_nontrivial_coset() {
    let g = heegner_lab::moduli::galois_group(2, 2, 1, None, 20_000).unwrap();
    let form = disc_group_omega1(&PolarizationData::new(1, 2, 1, None).unwrap())
        .unwrap()
        .form()
        .clone();
    let e = enumerate_with_box(1, 2, 1).unwrap();
    assert!(g.order.unwrap() >= 1);
    for cls in &e.classes {
        let m = induced_disc_matrix(1, 2, &cls.witness).unwrap();
        let idx = g.coset_index(&form, &m).unwrap();
        assert_ne!(idx, 0, "{}", cls.witness);
    }
    for cls in e
        .all_classes
        .iter()
        .filter(|c| c.galois_label != GaloisLabel::Nontrivial)
    {
        let m = induced_disc_matrix(1, 2, &cls.witness).unwrap();
        assert_eq!(g.coset_index(&form, &m), Some(0));
    }
}
