//! Fourfolds of K3^[2] type (t = 1) with a γ = 1 polarization of square 2d.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::disc_form::DiscElement;
use crate::error::{Error, Result};
use crate::lattice::GramLattice;
use crate::reflection::{ExplicitPerp, ReflectionClass, SymbolicPerpVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImageStatus {
    MeetsImage,
    PossiblyExcluded,
}

impl ImageStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ImageStatus::MeetsImage => "meets_image",
            ImageStatus::PossiblyExcluded => "possibly_excluded",
        }
    }
}

impl fmt::Display for ImageStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The hypersurface of discriminant 2d, 8d, 10d or 2d/5 containing the divisor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExcludedRule {
    #[serde(rename = "D_2d")]
    D2d,
    #[serde(rename = "D_8d")]
    D8d,
    #[serde(rename = "D_10d")]
    D10d,
    #[serde(rename = "D_2d_over_5")]
    D2dOver5,
}

impl ExcludedRule {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExcludedRule::D2d => "D_2d",
            ExcludedRule::D8d => "D_8d",
            ExcludedRule::D10d => "D_10d",
            ExcludedRule::D2dOver5 => "D_2d_over_5",
        }
    }
}

impl fmt::Display for ExcludedRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorReport {
    pub cls: ReflectionClass,
    #[serde(rename = "disc_Kperp")]
    pub disc_kperp: u64,
    pub image_status: ImageStatus,
    pub excluded_rule: Option<ExcludedRule>,
}

/// disc(⟨h, β⟩⊥) = −4d·β²/div(β)² in Λ_{K3^[2]}.
pub fn disc_kperp(d: u64, beta: &SymbolicPerpVector) -> Result<u64> {
    let sq = beta.square(1, d)? as i128;
    if sq >= 0 {
        return Err(Error::InvalidVector(format!("β² = {sq} is not negative")));
    }
    let div = beta.divisibility(1, d)? as i128;
    let num = -4 * d as i128 * sq;
    if num % (div * div) != 0 {
        return Err(Error::NotReflection(format!(
            "−4dβ²/div² = {num}/{} is not an integer",
            div * div
        )));
    }
    u64::try_from(num / (div * div)).map_err(|_| Error::Overflow("disc(K⊥)"))
}

/// |det| of ⟨h, β⟩⊥ computed in the materialized lattice
/// U³ ⊕ E8(−1)² ⊕ Z(−2) with h = e + df.
pub fn disc_kperp_explicit(d: u64, beta: &SymbolicPerpVector) -> Result<BigInt> {
    let u = GramLattice::hyperbolic_u();
    let e8 = GramLattice::e8_minus();
    let z = GramLattice::rank_one(-2)?;
    let lattice = GramLattice::direct_sum_all([&u, &u, &u, &e8, &e8, &z]).expect("nonempty");
    let n = lattice.rank();
    let mut h = vec![BigInt::from(0); n];
    h[0] = BigInt::from(1);
    h[1] = BigInt::from(d);
    // β = a(e₂ + (m²/2) f₂) + b(e − df) + cℓ
    let mut b = vec![BigInt::from(0); n];
    b[0] = BigInt::from(beta.b);
    b[1] = BigInt::from(-(beta.b as i128 * d as i128));
    b[2] = BigInt::from(beta.a);
    b[3] = BigInt::from(beta.a as i128 * (beta.msq / 2) as i128);
    b[n - 1] = BigInt::from(beta.c);
    let basis = lattice.orthogonal_complement(&[h, b])?;
    let perp = lattice.sublattice(&basis, "⟨h, β⟩⊥")?;
    Ok(perp.determinant().abs())
}

/// Whether disc(K⊥) lands in {2d, 8d, 10d, 2d/5 (d ≡ ±5 mod 25)}.
pub fn image_status(d: u64, cls: &ReflectionClass) -> Result<DivisorReport> {
    let disc = disc_kperp(d, &cls.witness)?;
    let rule = if disc == 2 * d {
        Some(ExcludedRule::D2d)
    } else if disc == 8 * d {
        Some(ExcludedRule::D8d)
    } else if disc == 10 * d {
        Some(ExcludedRule::D10d)
    } else if matches!(d % 25, 5 | 20) && 5 * disc == 2 * d {
        Some(ExcludedRule::D2dOver5)
    } else {
        None
    };
    Ok(DivisorReport {
        cls: cls.clone(),
        disc_kperp: disc,
        image_status: if rule.is_some() {
            ImageStatus::PossiblyExcluded
        } else {
            ImageStatus::MeetsImage
        },
        excluded_rule: rule,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub bound: i64,
    pub pass: bool,
    /// primitive vectors of square −4 defining a reflection
    pub checked: u64,
    pub counterexample: Option<Vec<i64>>,
}

/// Over U ⊕ U ⊕ Z(−2) ⊕ Z(−2) with coordinates in [−bound, bound]: every
/// primitive β with β² = −4 defining a reflection has div(β) = 2 and
/// β_* = k_* + ℓ_*.
pub fn d1_uniqueness_check(bound: i64) -> Result<UniquenessReport> {
    let oracle = ExplicitPerp::new(1, 1)?;
    let target = DiscElement::new(vec![1, 1]);
    let range: Vec<i64> = (-bound..=bound).collect();
    let results = range
        .par_iter()
        .map(|&x0| -> Result<(u64, Option<Vec<i64>>)> {
            let mut checked = 0u64;
            let mut bad = None;
            for &x1 in &range {
                for &x2 in &range {
                    for &x3 in &range {
                        for &x4 in &range {
                            for &x5 in &range {
                                let sq = 2 * (x0 * x1 + x2 * x3) - 2 * x4 * x4 - 2 * x5 * x5;
                                if sq != -4 {
                                    continue;
                                }
                                let g = [x1, x2, x3, x4, x5].iter().fold(x0, |g, &y| g.gcd(&y));
                                if g != 1 {
                                    continue;
                                }
                                let div = [x1, x2, x3, 2 * x4, 2 * x5]
                                    .iter()
                                    .fold(x0, |g, &y| g.gcd(&y));
                                if (2 * div) % 4 != 0 {
                                    continue;
                                }
                                checked += 1;
                                let v = oracle.lattice().vector_i64(&[x0, x1, x2, x3, x4, x5])?;
                                let star = oracle.class_of(v.star()?.coords())?;
                                if (div != 2 || star != target) && bad.is_none() {
                                    bad = Some(vec![x0, x1, x2, x3, x4, x5]);
                                }
                            }
                        }
                    }
                }
            }
            Ok((checked, bad))
        })
        .collect::<Result<Vec<_>>>()?;
    let checked = results.iter().map(|r| r.0).sum();
    let counterexample = results.into_iter().find_map(|r| r.1);
    Ok(UniquenessReport {
        bound,
        pass: counterexample.is_none(),
        checked,
        counterexample,
    })
}
