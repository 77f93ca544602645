//! Exhaustive search for ramification classes (γ = 1).
//!
//! For each β² among the negative even divisors of 4·lcm(t, d) and each
//! div | 2·lcm(t, d) with β² | 2·div and div | β², the search runs over
//! (b, c) in a box with div | 2db, div | 2tc, and takes a = div (msq solved
//! exactly from β² = a²·msq − 2db² − 2tc²) or a = 0 (exact equation).
//! β_* only depends on (b, c) modulo div, so a box of half-width
//! 2·lcm(t, d) ≥ div already meets every class.

use std::collections::BTreeMap;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    canonical_star, classify_reflection, theorem_label, GaloisLabel, ReflectionClass,
    SymbolicPerpVector,
};
use crate::disc_form::DiscElement;
use crate::error::{Error, Result};
use crate::moduli::{normality, NormalityStatus};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    pub t: u64,
    pub d: u64,
    /// nontrivial classes, sorted by (−β², β_*)
    pub classes: Vec<ReflectionClass>,
    /// all reflection classes met in the box, any label, same order
    pub all_classes: Vec<ReflectionClass>,
    /// admissible (β², β_*) pairs with no witness in the box
    pub unwitnessed: Vec<(i64, DiscElement)>,
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|k| n.is_multiple_of(*k)).collect()
}

/// Ordering used to pick one witness per class.
fn witness_key(v: &SymbolicPerpVector) -> (i64, i64, i64, i64, i64, i64, SymbolicPerpVector) {
    (
        v.b.abs().max(v.c.abs()),
        v.a.abs(),
        v.b.abs(),
        v.c.abs(),
        v.msq.abs(),
        (v.b < 0) as i64 + (v.c < 0) as i64,
        *v,
    )
}

type Key = (i64, DiscElement);

struct Found {
    label: GaloisLabel,
    witness: Option<SymbolicPerpVector>,
}

fn search_square(t: u64, d: u64, n: u64, scale: i64) -> Result<BTreeMap<Key, Found>> {
    let l = t.lcm(&d);
    let bound = scale * 2 * l as i64;
    let (ti, di) = (t as i128, d as i128);
    let sq = -(n as i64);
    let mut found: BTreeMap<Key, Found> = BTreeMap::new();
    for div in divisors(2 * l) {
        if (2 * div) % n != 0 || !n.is_multiple_of(div) {
            continue;
        }
        let step_b = (div / div.gcd(&(2 * d))) as i64;
        let step_c = (div / div.gcd(&(2 * t))) as i64;
        let div_i = div as i128;
        let mut b = -(bound / step_b) * step_b;
        while b <= bound {
            let mut c = -(bound / step_c) * step_c;
            while c <= bound {
                let r = sq as i128 + 2 * di * (b as i128).pow(2) + 2 * ti * (c as i128).pow(2);
                let mut cands = Vec::with_capacity(2);
                if div_i.gcd(&(b as i128)).gcd(&(c as i128)) == 1 && r % (2 * div_i * div_i) == 0 {
                    let msq =
                        i64::try_from(r / (div_i * div_i)).map_err(|_| Error::Overflow("msq"))?;
                    cands.push(SymbolicPerpVector::new(div as i64, msq, b, c)?);
                }
                if r == 0
                    && b.gcd(&c) == 1
                    && (2 * di * b as i128).gcd(&(2 * ti * c as i128)) == div_i
                {
                    cands.push(SymbolicPerpVector::new(0, 0, b, c)?);
                }
                for v in cands {
                    debug_assert_eq!(v.square(t, d)?, sq);
                    debug_assert_eq!(v.divisibility(t, d)?, div as i64);
                    let star = v.star(t, d)?;
                    let canon = canonical_star(t, d, &star);
                    let label = theorem_label(t, d, &v)?;
                    let entry = found.entry((sq, canon.clone())).or_insert(Found {
                        label,
                        witness: None,
                    });
                    if entry.label != label {
                        return Err(Error::Unsupported(format!(
                            "labels {} and {label} met in one orbit (β² = {sq}, β_* = {canon})",
                            entry.label
                        )));
                    }
                    let v = v.canonical_sign();
                    if v.star(t, d)? == canon
                        && entry
                            .witness
                            .as_ref()
                            .is_none_or(|w| witness_key(&v) < witness_key(w))
                    {
                        entry.witness = Some(v);
                    }
                }
                c += step_c;
            }
            b += step_b;
        }
    }
    Ok(found)
}

/// Canonical representatives of elements of Z/2d × Z/2t of order div with
/// q ≡ β²/div² mod 2.
fn admissible(t: u64, d: u64, sq: i64, div: u64) -> Vec<DiscElement> {
    let (n1, n2) = (2 * d as i128, 2 * t as i128);
    let div = div as i128;
    let mut out = Vec::new();
    for x in 0..n1 {
        for y in 0..n2 {
            let ord = (n1 / x.gcd(&n1)).lcm(&(n2 / y.gcd(&n2)));
            if ord != div {
                continue;
            }
            // −x²/2d − y²/2t ≡ β²/div²  (mod 2), scaled by 2d·2t·div²
            let scale = n1 * n2 * div * div;
            let lhs = -(x * x * n2 + y * y * n1) * div * div;
            let rhs = sq as i128 * n1 * n2;
            if (lhs - rhs).rem_euclid(2 * scale) == 0 {
                let e = DiscElement::new(vec![x as u64, y as u64]);
                if canonical_star(t, d, &e) == e {
                    out.push(e);
                }
            }
        }
    }
    out
}

/// Runs the search with box half-width `scale · 2·lcm(t, d)`.
pub fn enumerate_with_box(t: u64, d: u64, scale: i64) -> Result<Enumeration> {
    if t == 0 || d == 0 || scale < 1 {
        return Err(Error::Unsupported(
            "t, d and the box scale must be positive".into(),
        ));
    }
    let l = t.lcm(&d);
    let squares: Vec<u64> = divisors(4 * l).into_iter().filter(|n| n % 2 == 0).collect();
    let parts = squares
        .par_iter()
        .map(|&n| search_square(t, d, n, scale))
        .collect::<Result<Vec<_>>>()?;

    let mut all_classes = Vec::new();
    let mut unwitnessed = Vec::new();
    for (&n, found) in squares.iter().zip(&parts) {
        let sq = -(n as i64);
        for ((_, canon), f) in found {
            let w = f.witness.ok_or_else(|| {
                Error::Unsupported(format!("orbit (β² = {sq}, β_* = {canon}) lost its witness"))
            })?;
            let mut cls = classify_reflection(t, d, &w)?;
            debug_assert_eq!(cls.galois_label, f.label);
            cls.beta_star = canon.clone();
            all_classes.push(cls);
        }
        for div in divisors(2 * l) {
            if (2 * div) % n != 0 || n % div != 0 {
                continue;
            }
            for e in admissible(t, d, sq, div) {
                if !found.contains_key(&(sq, e.clone())) {
                    unwitnessed.push((sq, e));
                }
            }
        }
    }
    all_classes.sort_by(|x, y| (-x.beta_sq, &x.beta_star).cmp(&(-y.beta_sq, &y.beta_star)));
    unwitnessed.sort_by(|x, y| (-x.0, &x.1).cmp(&(-y.0, &y.1)));
    let classes = all_classes
        .iter()
        .filter(|c| c.galois_label == GaloisLabel::Nontrivial)
        .cloned()
        .collect();
    Ok(Enumeration {
        t,
        d,
        classes,
        all_classes,
        unwitnessed,
    })
}

/// Ramification classes for Λ_{K3^[m]} with a γ = 1 polarization of
/// square 2d. Refused unless the normality of Ô(Λ, h) is established.
pub fn enumerate_ramification_classes(m: u64, d: u64, budget: u64) -> Result<Enumeration> {
    if m < 2 {
        return Err(Error::Unsupported(format!(
            "m = {m}: K3^[m] type needs m >= 2"
        )));
    }
    let t = m - 1;
    let verdict = normality(t, d, 1, None, budget)?;
    match verdict.status {
        NormalityStatus::NormalStable | NormalityStatus::Normal => {}
        _ => {
            return Err(Error::NormalityNotEstablished(format!(
                "status {} ({})",
                verdict.status, verdict.reason
            )))
        }
    }
    enumerate_with_box(t, d, 1)
}
