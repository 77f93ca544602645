//! K3^[m] specialization: normality of the image of Ô(Λ, h) in O(A_{h⊥}),
//! the Galois group of the cover, and image-of-period-map annotations for
//! fourfolds.

mod fourfold;

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

pub use fourfold::{
    d1_uniqueness_check, disc_kperp, disc_kperp_explicit, image_status, DivisorReport,
    ExcludedRule, ImageStatus, UniquenessReport,
};

use crate::disc_form::{
    enumerate_isometries, is_k_normal, DiscIsometry, FiniteQuadraticForm, NormalityWitness,
};
use crate::error::{Error, Result};
use crate::hperp::{disc_group_omega1, perp_gram, PolarizationData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalityStatus {
    /// Ô(L, h) = Õ(h⊥)
    NormalStable,
    Normal,
    NotNormal,
    Undecided,
}

impl NormalityStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            NormalityStatus::NormalStable => "normal_stable",
            NormalityStatus::Normal => "normal",
            NormalityStatus::NotNormal => "not_normal",
            NormalityStatus::Undecided => "undecided",
        }
    }

    pub fn is_normal(&self) -> bool {
        matches!(
            self,
            NormalityStatus::NormalStable | NormalityStatus::Normal
        )
    }
}

impl fmt::Display for NormalityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalityReason {
    #[serde(rename = "t1_or_gamma_gt2")]
    T1OrGammaGt2,
    CoprimeTd,
    BruteForce,
    #[serde(rename = "omega_ne_1_unsupported")]
    OmegaNe1Unsupported,
}

impl NormalityReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            NormalityReason::T1OrGammaGt2 => "t1_or_gamma_gt2",
            NormalityReason::CoprimeTd => "coprime_td",
            NormalityReason::BruteForce => "brute_force",
            NormalityReason::OmegaNe1Unsupported => "omega_ne_1_unsupported",
        }
    }
}

impl fmt::Display for NormalityReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalityVerdict {
    pub status: NormalityStatus,
    pub reason: NormalityReason,
    pub witness: Option<NormalityWitness>,
}

/// Rule order: t = 1 or γ > 2 gives normal_stable; γ ∈ {1, 2} with ω ≠ 1 is
/// undecided; coprime t, d gives normal; otherwise O(A_{h⊥}) is enumerated.
pub fn normality(
    t: u64,
    d: u64,
    gamma: u64,
    c: Option<u64>,
    budget: u64,
) -> Result<NormalityVerdict> {
    let pol = PolarizationData::new(t, d, gamma, c)?;
    let verdict = |status, reason| NormalityVerdict {
        status,
        reason,
        witness: None,
    };
    if t == 1 || gamma > 2 {
        return Ok(verdict(
            NormalityStatus::NormalStable,
            NormalityReason::T1OrGammaGt2,
        ));
    }
    if pol.omega() != 1 {
        return Ok(verdict(
            NormalityStatus::Undecided,
            NormalityReason::OmegaNe1Unsupported,
        ));
    }
    if t.gcd(&d) == 1 {
        return Ok(verdict(NormalityStatus::Normal, NormalityReason::CoprimeTd));
    }
    brute_force_normality(&pol, budget)
}

/// Decides normality of K = {id, s} in O(A_{h⊥}) by enumeration,
/// regardless of which rule would apply.
pub fn brute_force_normality(pol: &PolarizationData, budget: u64) -> Result<NormalityVerdict> {
    let split = disc_group_omega1(pol)?;
    let res = is_k_normal(split.form(), budget)?;
    Ok(NormalityVerdict {
        status: if res.normal {
            NormalityStatus::Normal
        } else {
            NormalityStatus::NotNormal
        },
        reason: NormalityReason::BruteForce,
        witness: res.witness,
    })
}

/// G = O(A_{h⊥}) / N with N = {±id} (t = 1 or γ > 2) or ⟨s, −id⟩.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisGroup {
    /// "O(A)/{±id}" or "O(A)/<s,-id>"
    pub quotient: String,
    /// which presentation of A_{h⊥} the matrices refer to: "split" or "smith"
    pub presentation: String,
    pub disc_orders: Vec<u64>,
    pub subgroup: Vec<DiscIsometry>,
    /// |O(A_{h⊥})|, absent when over budget
    pub group_order: Option<u64>,
    /// |G|, absent when over budget
    pub order: Option<u64>,
    /// least element of each coset, sorted; the first is the trivial coset
    pub coset_representatives: Option<Vec<DiscIsometry>>,
}

impl GaloisGroup {
    /// Index of the coset containing `g` among the representatives.
    pub fn coset_index(&self, form: &FiniteQuadraticForm, g: &DiscIsometry) -> Option<usize> {
        let reps = self.coset_representatives.as_ref()?;
        let coset: Vec<DiscIsometry> = self.subgroup.iter().map(|n| form.compose(g, n)).collect();
        let rep = coset.iter().min()?;
        reps.iter().position(|r| r == rep)
    }

    pub fn is_trivial_class(&self, g: &DiscIsometry) -> bool {
        self.subgroup.contains(g)
    }
}

/// The form the Galois-group matrices act on for (t, d, γ, c): the split
/// presentation when ω = 1, else the Smith presentation.
pub fn galois_form(pol: &PolarizationData) -> Result<(FiniteQuadraticForm, &'static str)> {
    if pol.omega() == 1 {
        Ok((disc_group_omega1(pol)?.form().clone(), "split"))
    } else {
        Ok((perp_gram(pol, 0)?.disc_form()?.form().clone(), "smith"))
    }
}

pub fn galois_group(
    m: u64,
    d: u64,
    gamma: u64,
    c: Option<u64>,
    budget: u64,
) -> Result<GaloisGroup> {
    if m < 2 {
        return Err(Error::Unsupported(format!(
            "m = {m}: K3^[m] type needs m >= 2"
        )));
    }
    let t = m - 1;
    let verdict = normality(t, d, gamma, c, budget)?;
    if !verdict.status.is_normal() {
        return Err(Error::NormalityNotEstablished(format!(
            "status {} ({})",
            verdict.status, verdict.reason
        )));
    }
    let pol = PolarizationData::new(t, d, gamma, c)?;
    let (form, presentation) = galois_form(&pol)?;
    let small = t == 1 || gamma > 2;
    let mut subgroup = vec![form.identity(), form.minus_identity()];
    if !small {
        let s = form.diagonal_map(&[1, -1]);
        subgroup.push(form.compose(&s, &form.minus_identity()));
        subgroup.push(s);
    }
    subgroup.sort();
    subgroup.dedup();
    let quotient = if small { "O(A)/{±id}" } else { "O(A)/<s,-id>" }.to_string();

    let (group_order, order, reps) = match enumerate_isometries(&form, budget) {
        Ok(group) => {
            let mut reps: Vec<DiscIsometry> = group
                .iter()
                .map(|g| {
                    subgroup
                        .iter()
                        .map(|n| form.compose(g, n))
                        .min()
                        .expect("nonempty subgroup")
                })
                .collect();
            let trivial = subgroup.iter().min().expect("nonempty subgroup").clone();
            reps.sort();
            reps.dedup();
            reps.retain(|r| *r != trivial);
            reps.insert(0, trivial);
            let n = group.len() as u64;
            (Some(n), Some(n / subgroup.len() as u64), Some(reps))
        }
        Err(Error::BudgetExceeded { .. }) => (None, None, None),
        Err(e) => return Err(e),
    };
    Ok(GaloisGroup {
        quotient,
        presentation: presentation.to_string(),
        disc_orders: form.orders().to_vec(),
        subgroup,
        group_order,
        order,
        coset_representatives: reps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normality_rules() {
        let v = normality(1, 7, 1, None, 1000).unwrap();
        assert_eq!(v.status, NormalityStatus::NormalStable);
        assert_eq!(v.reason, NormalityReason::T1OrGammaGt2);

        let v = normality(9, 15, 2, None, 1000).unwrap();
        assert_eq!(v.status, NormalityStatus::NotNormal);
        assert_eq!(v.reason, NormalityReason::BruteForce);
        let w = v.witness.unwrap();
        assert_eq!(w.g.matrix, vec![vec![1, 10], vec![6, 2]]);
        assert_eq!(w.conjugate.matrix, vec![vec![1, 5], vec![3, 2]]);

        let v = normality(2, 3, 1, None, 1000).unwrap();
        assert_eq!(v.status, NormalityStatus::Normal);
        assert_eq!(v.reason, NormalityReason::CoprimeTd);
        let pol = PolarizationData::new(2, 3, 1, None).unwrap();
        assert_eq!(
            brute_force_normality(&pol, 1000).unwrap().status,
            NormalityStatus::Normal
        );

        let v = normality(2, 2, 2, None, 1000).unwrap();
        assert_eq!(v.status, NormalityStatus::Undecided);
        assert_eq!(v.reason, NormalityReason::OmegaNe1Unsupported);

        assert_eq!(
            normality(1, 1, 2, None, 1000).unwrap_err().tag(),
            "unrealizable_polarization"
        );
    }

    #[test]
    fn reason_tags_serialize() {
        let s = serde_json::to_string(&NormalityReason::T1OrGammaGt2).unwrap();
        assert_eq!(s, "\"t1_or_gamma_gt2\"");
        let s = serde_json::to_string(&NormalityReason::OmegaNe1Unsupported).unwrap();
        assert_eq!(s, "\"omega_ne_1_unsupported\"");
        let s = serde_json::to_string(&NormalityStatus::NormalStable).unwrap();
        assert_eq!(s, "\"normal_stable\"");
    }

    #[test]
    fn galois_group_d1() {
        let g = galois_group(2, 1, 1, None, 1000).unwrap();
        assert_eq!(g.order, Some(2));
        assert_eq!(g.quotient, "O(A)/{±id}");
        let reps = g.coset_representatives.unwrap();
        assert_eq!(reps[1].matrix, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn galois_group_over_budget_keeps_quotient() {
        let g = galois_group(2, 600, 1, None, 100).unwrap();
        assert_eq!(g.order, None);
        assert_eq!(g.quotient, "O(A)/{±id}");
    }

    #[test]
    fn t_one_makes_s_trivial() {
        for d in 1..10 {
            let pol = PolarizationData::new(1, d, 1, None).unwrap();
            let split = disc_group_omega1(&pol).unwrap();
            assert_eq!(split.s(), split.form().identity());
        }
    }
}
