//! Named facts re-derived by `verify-paper`.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::disc_form::{congruent, conjugate};
use crate::error::Result;
use crate::hperp::{disc_group_omega1, hat_image, perp_gram, PolarizationData};
use crate::moduli::{d1_uniqueness_check, galois_group, normality, ImageStatus, NormalityStatus};
use crate::reflection::{
    induced_disc_matrix, matrix_bucket, theorem_label, ExplicitPerp, GaloisLabel,
    SymbolicPerpVector,
};
use crate::report::analyze_report;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub checks: Vec<CheckResult>,
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn result(name: &str, outcome: Result<(bool, String)>) -> CheckResult {
    let (pass, detail) = outcome.unwrap_or_else(|e| (false, format!("error [{}]: {e}", e.tag())));
    CheckResult {
        name: name.to_string(),
        pass,
        detail,
    }
}

fn counterexample(budget: u64) -> Result<(bool, String)> {
    let pol = PolarizationData::new(9, 15, 2, None)?;
    let split = disc_group_omega1(&pol)?;
    let f = split.form();
    let q_ok = f.orders() == [15, 9]
        && congruent(&f.q_gen()[0], &frac(-2, 15), 2)
        && congruent(&f.q_gen()[1], &frac(-2, 9), 2);
    let g = f.map_from_rows(&[vec![1, 10], vec![6, 2]])?;
    let conj = conjugate(f, &g, &split.s())?;
    let expected = f.map_from_rows(&[vec![1, 5], vec![3, 2]])?;
    let verdict = normality(9, 15, 2, None, budget)?;
    let pass = q_ok
        && f.is_isometry_map(&g)
        && conj == expected
        && verdict.status == NormalityStatus::NotNormal;
    Ok((
        pass,
        format!(
            "A = Z/15 × Z/9, g = {g}, g⁻¹sg = {conj}, verdict {}",
            verdict.status
        ),
    ))
}

fn fourfold_d1(budget: u64) -> Result<(bool, String)> {
    let r = analyze_report(2, 1, 1, None, budget)?;
    let divisors = r.divisors.clone().unwrap_or_default();
    let pass = r.classes.len() == 1
        && divisors.len() == 1
        && divisors[0].cls.beta_sq == -4
        && divisors[0].cls.div == 2
        && divisors[0].cls.beta_star.coords == [1, 1]
        && divisors[0].disc_kperp == 4
        && divisors[0].image_status == ImageStatus::MeetsImage
        && r.galois_group.order == Some(2);
    Ok((
        pass,
        format!(
            "{} class(es); disc(K⊥) = {:?}; |G| = {:?}",
            r.classes.len(),
            divisors.iter().map(|x| x.disc_kperp).collect::<Vec<_>>(),
            r.galois_group.order
        ),
    ))
}

fn d1_uniqueness() -> Result<(bool, String)> {
    let r = d1_uniqueness_check(5)?;
    Ok((
        r.pass,
        format!(
            "{} primitive reflective vectors of square -4 with |coords| <= 5; counterexample {:?}",
            r.checked, r.counterexample
        ),
    ))
}

fn galois_z2(budget: u64) -> Result<(bool, String)> {
    let g = galois_group(2, 1, 1, None, budget)?;
    let beta = SymbolicPerpVector::new(0, 0, 1, 1)?;
    let form = disc_group_omega1(&PolarizationData::new(1, 1, 1, None)?)?
        .form()
        .clone();
    let r = induced_disc_matrix(1, 1, &beta)?;
    let idx = g.coset_index(&form, &r);
    Ok((
        g.order == Some(2) && idx == Some(1),
        format!("|G| = {:?}, class of r_(k+l) is coset {:?}", g.order, idx),
    ))
}

fn box_vectors(bound: i64, msq_bound: i64) -> Vec<SymbolicPerpVector> {
    let mut out = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                let msqs: Vec<i64> = if a == 0 {
                    vec![0]
                } else {
                    (-msq_bound..=msq_bound).step_by(2).collect()
                };
                for msq in msqs {
                    let v = SymbolicPerpVector { a, msq, b, c };
                    if !v.is_zero() && v.is_primitive() {
                        out.push(v);
                    }
                }
            }
        }
    }
    out
}

/// Numerical criterion and Gritsenko's −2 criterion against the explicit
/// oracle over a coefficient box.
fn theorem_equivalence(pairs: &[(u64, u64)], bound: i64, msq_bound: i64) -> Result<(bool, String)> {
    let vectors = box_vectors(bound, msq_bound);
    let mut checked = 0usize;
    let mut mismatches = Vec::new();
    for &(t, d) in pairs {
        let oracle = ExplicitPerp::new(t, d)?;
        let found = vectors
            .par_iter()
            .map(|v| -> Result<Option<(bool, String)>> {
                let sq = v.square(t, d)?;
                if sq >= 0 || !v.defines_reflection(t, d)? {
                    return Ok(None);
                }
                let m = oracle.induced(v)?;
                let bucket = matrix_bucket(oracle.split(), &m);
                let label = theorem_label(t, d, v)?;
                let formula = induced_disc_matrix(t, d, v)?;
                let ok = (label != GaloisLabel::Nontrivial) == bucket.is_some()
                    && (m == oracle.split().form().identity()) == (sq == -2)
                    && formula == m;
                Ok(Some((ok, format!("(t,d)=({t},{d}) β={v}"))))
            })
            .collect::<Result<Vec<_>>>()?;
        for (ok, what) in found.into_iter().flatten() {
            checked += 1;
            if !ok && mismatches.len() < 3 {
                mismatches.push(what);
            }
        }
    }
    Ok((
        mismatches.is_empty(),
        format!("{checked} reflections, mismatches {mismatches:?}"),
    ))
}

fn structural(budget: u64) -> Result<(bool, String)> {
    let mut tuples = Vec::new();
    for t in 1..=6u64 {
        for d in 1..=6u64 {
            for gamma in 1..=3u64 {
                for c in PolarizationData::admissible_c(t, d, gamma) {
                    tuples.push(PolarizationData::new(t, d, gamma, Some(c))?);
                }
            }
        }
    }
    let mut bad = Vec::new();
    for pol in &tuples {
        let (t, d, g) = (pol.t as i64, pol.d as i64, pol.gamma as i64);
        let perp = perp_gram(pol, 0)?;
        let det = perp.block().determinant();
        let disc = perp.disc_form()?;
        let (k1, k1_order) = perp.glue_generator()?;
        let q = disc.form().eval_q(&k1)?;
        let ok = det == BigInt::from(4 * d * t / (g * g))
            && disc.form().cardinality() as i64 == (2 * d / g) * (2 * t / g)
            && k1_order as i64 == 2 * d / g
            && congruent(&q, &frac(-g * g, 2 * d), 2)
            && 2 * d * (4 * d * t / (g * g)) == (2 * d / g).pow(2) * 2 * t;
        if !ok {
            bad.push((pol.t, pol.d, pol.gamma, pol.c));
        }
    }
    // the cube case: the image of Ô(Λ, h) exhausts O(A_{h⊥}) for (2, 2, 2, 1)
    let pol = PolarizationData::new(2, 2, 2, Some(1))?;
    let perp = perp_gram(&pol, 0)?;
    let disc = perp.disc_form()?;
    let (k1, _) = perp.glue_generator()?;
    let img = hat_image(disc.form(), &k1, 2, 2, budget)?;
    let cube_ok = img.image().len() as u64 == img.group_order;
    Ok((
        bad.is_empty() && tuples.len() >= 25 && cube_ok,
        format!(
            "{} tuples, failures {bad:?}; (2,2,2,1) image {} of {}",
            tuples.len(),
            img.image().len(),
            img.group_order
        ),
    ))
}

fn coprime_normality(budget: u64) -> Result<(bool, String)> {
    let mut checked = 0;
    let mut bad = Vec::new();
    for t in 2..=12u64 {
        for d in 1..=12u64 {
            if num_integer::gcd(t, d) != 1 || 4 * t * d > 300 {
                continue;
            }
            let pol = PolarizationData::new(t, d, 1, None)?;
            let split = disc_group_omega1(&pol)?;
            let r = crate::disc_form::is_k_normal(split.form(), budget)?;
            checked += 1;
            if !r.normal {
                bad.push((t, d));
            }
        }
    }
    Ok((
        bad.is_empty(),
        format!("{checked} coprime pairs, failures {bad:?}"),
    ))
}

fn invariance() -> Result<(bool, String)> {
    let mut checked = 0;
    let mut bad = Vec::new();
    for (t, d) in [(1u64, 1u64), (1, 2), (1, 5), (2, 3), (3, 2), (2, 5)] {
        let split = disc_group_omega1(&PolarizationData::new(t, d, 1, None)?)?;
        let f = split.form();
        let e = crate::reflection::enumerate_with_box(t, d, 1)?;
        for cls in &e.all_classes {
            let w = cls.witness;
            let label = theorem_label(t, d, &w)?;
            let r = induced_disc_matrix(t, d, &w)?;
            let mut ok = theorem_label(t, d, &w.neg())? == label
                && induced_disc_matrix(t, d, &w.neg())? == r;
            for (ek, el) in [(1i64, -1i64), (-1, 1), (-1, -1)] {
                let img = SymbolicPerpVector {
                    b: ek * w.b,
                    c: el * w.c,
                    ..w
                };
                let g = f.diagonal_map(&[ek, el]);
                let conj = f.compose(&f.compose(&g, &r), &f.inverse(&g)?);
                ok &=
                    theorem_label(t, d, &img)? == label && induced_disc_matrix(t, d, &img)? == conj;
            }
            checked += 1;
            if !ok {
                bad.push((t, d, w));
            }
        }
    }
    Ok((
        bad.is_empty(),
        format!("{checked} classes, failures {bad:?}"),
    ))
}

/// Runs every named fact; `pass` is the conjunction.
pub fn verify_paper(budget: u64) -> VerifyReport {
    let checks = vec![
        result("counterexample_9_15_2", counterexample(budget)),
        result("fourfold_d1_unique_divisor", fourfold_d1(budget)),
        result("d1_uniqueness_box", d1_uniqueness()),
        result("galois_group_z2", galois_z2(budget)),
        result(
            "reflection_criterion_oracle",
            theorem_equivalence(
                &[(1, 1), (1, 2), (1, 3), (2, 1), (2, 3), (3, 2), (2, 5)],
                3,
                12,
            ),
        ),
        result("structural_identities", structural(budget)),
        result("coprime_normality", coprime_normality(budget)),
        result("label_invariance", invariance()),
    ];
    VerifyReport {
        pass: checks.iter().all(|c| c.pass),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_paper_passes() {
        let r = verify_paper(20_000);
        for c in &r.checks {
            assert!(c.pass, "{}: {}", c.name, c.detail);
        }
    }
}
