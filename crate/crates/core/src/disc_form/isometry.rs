//! Exhaustive search for isometries between finite quadratic forms.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{DiscElement, DiscIsometry, FiniteQuadraticForm};
use crate::error::{Error, Result};

/// A `g` with `g⁻¹ k g` outside the subgroup, and that conjugate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalityWitness {
    pub g: DiscIsometry,
    pub conjugate: DiscIsometry,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KNormality {
    pub normal: bool,
    pub group_order: u64,
    pub witness: Option<NormalityWitness>,
}

struct Search<'a> {
    src: &'a FiniteQuadraticForm,
    dst: &'a FiniteQuadraticForm,
    src_fac: i64,
    dst_fac: i64,
    modulus: i64,
    /// candidate images for each source generator
    candidates: Vec<Vec<DiscElement>>,
    check_kernel: bool,
}

impl Search<'_> {
    fn pairing_ok(&self, i: usize, y: &DiscElement, chosen: &[DiscElement]) -> bool {
        chosen.iter().enumerate().all(|(j, yj)| {
            let lhs = self.dst.b_scaled(y, yj) as i128 * self.dst_fac as i128;
            let rhs = self.src.b_num[j][i] as i128 * self.src_fac as i128;
            (lhs - rhs).rem_euclid(self.modulus as i128) == 0
        })
    }

    fn dfs(&self, chosen: &mut Vec<DiscElement>, out: &mut Vec<DiscIsometry>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        let i = chosen.len();
        if i == self.src.rank() {
            let m = self.src.map_to(self.dst, chosen);
            if !self.check_kernel || self.src.kernel_is_trivial(self.dst, &m) {
                out.push(m);
            }
            return;
        }
        for y in &self.candidates[i] {
            if self.pairing_ok(i, y, chosen) {
                chosen.push(y.clone());
                self.dfs(chosen, out, limit);
                chosen.pop();
                if out.len() >= limit {
                    return;
                }
            }
        }
    }
}

impl FiniteQuadraticForm {
    /// Matrix of the map sending source generator i to `images[i]`.
    fn map_to(&self, dst: &FiniteQuadraticForm, images: &[DiscElement]) -> DiscIsometry {
        DiscIsometry {
            matrix: (0..dst.rank())
                .map(|j| (0..self.rank()).map(|i| images[i].coords[j]).collect())
                .collect(),
        }
    }

    fn apply_to(
        &self,
        dst: &FiniteQuadraticForm,
        g: &DiscIsometry,
        x: &DiscElement,
    ) -> DiscElement {
        DiscElement::new(
            g.matrix
                .iter()
                .zip(dst.orders())
                .map(|(row, &n)| {
                    let n = n as u128;
                    row.iter()
                        .zip(&x.coords)
                        .fold(0u128, |acc, (&a, &b)| (acc + a as u128 * b as u128) % n)
                        as u64
                })
                .collect(),
        )
    }

    fn kernel_is_trivial(&self, dst: &FiniteQuadraticForm, g: &DiscIsometry) -> bool {
        let zero = dst.zero();
        self.elements()
            .skip(1)
            .all(|x| self.apply_to(dst, g, &x) != zero)
    }
}

fn check_budget(form: &FiniteQuadraticForm, budget: u64) -> Result<()> {
    let order = form.cardinality();
    if order > budget {
        return Err(Error::BudgetExceeded { order, budget });
    }
    Ok(())
}

/// All isometries `src → dst` (bijective, q-preserving), sorted
/// lexicographically by matrix, at most `limit` of them when given.
pub fn find_isomorphisms(
    src: &FiniteQuadraticForm,
    dst: &FiniteQuadraticForm,
    budget: u64,
    limit: Option<usize>,
) -> Result<Vec<DiscIsometry>> {
    check_budget(src, budget)?;
    check_budget(dst, budget)?;
    if src.cardinality() != dst.cardinality() {
        return Ok(Vec::new());
    }
    let common = src.scale().lcm(&dst.scale());
    let src_fac = common / src.scale();
    let dst_fac = common / dst.scale();
    let modulus2 = 2 * common as i128;

    let table: Vec<(DiscElement, u64, i128)> = dst
        .elements()
        .map(|y| {
            let o = dst.order_of(&y);
            let q = dst.q_scaled(&y) as i128 * dst_fac as i128 % modulus2;
            (y, o, q)
        })
        .collect();
    let candidates: Vec<Vec<DiscElement>> = (0..src.rank())
        .map(|i| {
            let want_q = src.q_num[i] as i128 * src_fac as i128 % modulus2;
            table
                .iter()
                .filter(|(_, o, q)| *o == src.orders()[i] && *q == want_q)
                .map(|(y, _, _)| y.clone())
                .collect()
        })
        .collect();

    let search = Search {
        src,
        dst,
        src_fac,
        dst_fac,
        modulus: common,
        candidates,
        check_kernel: !src.is_nondegenerate(),
    };

    let mut found = if src.rank() == 0 {
        vec![DiscIsometry { matrix: vec![] }]
    } else if let Some(limit) = limit {
        let mut out = Vec::new();
        search.dfs(&mut Vec::new(), &mut out, limit);
        out
    } else {
        search.candidates[0]
            .par_iter()
            .map(|y| {
                let mut out = Vec::new();
                search.dfs(&mut vec![y.clone()], &mut out, usize::MAX);
                out
            })
            .flatten()
            .collect()
    };
    found.sort();
    if let Some(limit) = limit {
        found.truncate(limit);
    }
    Ok(found)
}

/// The full orthogonal group O(A), sorted lexicographically by matrix.
pub fn enumerate_isometries(form: &FiniteQuadraticForm, budget: u64) -> Result<Vec<DiscIsometry>> {
    find_isomorphisms(form, form, budget, None)
}

/// `g⁻¹ k g`.
pub fn conjugate(
    form: &FiniteQuadraticForm,
    g: &DiscIsometry,
    k: &DiscIsometry,
) -> Result<DiscIsometry> {
    let inv = form.inverse(g)?;
    Ok(form.compose(&inv, &form.compose(k, g)))
}

/// First `g` in `group` (in the given order) with `g⁻¹ k g ∉ subgroup` for
/// some `k` in `subgroup`. `None` means the subgroup is normal in `group`.
pub fn normality_witness(
    form: &FiniteQuadraticForm,
    group: &[DiscIsometry],
    subgroup: &[DiscIsometry],
) -> Result<Option<NormalityWitness>> {
    // g⁻¹ k g ∈ K  ⟺  k g ∈ g K
    let bad = group.par_iter().position_first(|g| {
        let coset: Vec<DiscIsometry> = subgroup.iter().map(|k| form.compose(g, k)).collect();
        subgroup
            .iter()
            .any(|k| !coset.contains(&form.compose(k, g)))
    });
    let Some(pos) = bad else {
        return Ok(None);
    };
    let g = &group[pos];
    for k in subgroup {
        let c = conjugate(form, g, k)?;
        if !subgroup.contains(&c) {
            return Ok(Some(NormalityWitness {
                g: g.clone(),
                conjugate: c,
            }));
        }
    }
    unreachable!("witness search and conjugation disagree")
}

/// Whether K = {id, s}, s = diag(1, -1), is normal in O(A) for a form with
/// two generators. When it is not, the witness is an involution if one
/// exists, chosen with the lexicographically least conjugate (ties by g);
/// otherwise the least g.
pub fn is_k_normal(form: &FiniteQuadraticForm, budget: u64) -> Result<KNormality> {
    if form.rank() != 2 {
        return Err(Error::InvalidForm(format!(
            "K-normality needs a two-generator presentation, got {} generators",
            form.rank()
        )));
    }
    let group = enumerate_isometries(form, budget)?;
    let s = form.diagonal_map(&[1, -1]);
    let id = form.identity();
    let group_order = group.len() as u64;
    if s == id {
        return Ok(KNormality {
            normal: true,
            group_order,
            witness: None,
        });
    }
    // g⁻¹ s g ∈ {id, s}  ⟺  s g = g s, since s ≠ id
    let bad: Vec<&DiscIsometry> = group
        .par_iter()
        .filter(|g| form.compose(&s, g) != form.compose(g, &s))
        .collect();
    let involution = bad
        .iter()
        .filter(|g| form.compose(g, g) == id)
        .map(|g| (form.compose(g, &form.compose(&s, g)), (*g).clone()))
        .min();
    let witness = match involution {
        Some((conjugate, g)) => Some(NormalityWitness { g, conjugate }),
        None => match bad.first() {
            Some(g) => Some(NormalityWitness {
                g: (*g).clone(),
                conjugate: conjugate(form, g, &s)?,
            }),
            None => None,
        },
    };
    Ok(KNormality {
        normal: witness.is_none(),
        group_order,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn frac(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn split(t: i64, d: i64, gamma: i64) -> FiniteQuadraticForm {
        FiniteQuadraticForm::diagonal(
            vec![(2 * d / gamma) as u64, (2 * t / gamma) as u64],
            vec![frac(-gamma * gamma, 2 * d), frac(-gamma * gamma, 2 * t)],
        )
        .unwrap()
    }

    #[test]
    fn orthogonal_group_of_z2_squared() {
        let a = FiniteQuadraticForm::diagonal(vec![2, 2], vec![frac(-1, 2), frac(-1, 2)]).unwrap();
        let g = enumerate_isometries(&a, 100).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.contains(&a.identity()));
    }

    #[test]
    fn counterexample_is_not_normal() {
        let a = split(9, 15, 2);
        let res = is_k_normal(&a, 1000).unwrap();
        assert!(!res.normal);
        let w = res.witness.unwrap();
        assert_eq!(w.g, a.map_from_rows(&[vec![1, 10], vec![6, 2]]).unwrap());
        assert_eq!(
            w.conjugate,
            a.map_from_rows(&[vec![1, 5], vec![3, 2]]).unwrap()
        );
        assert!(a.is_isometry_map(&w.g));
        assert_eq!(
            conjugate(&a, &w.g, &a.diagonal_map(&[1, -1])).unwrap(),
            w.conjugate
        );
        assert_ne!(w.conjugate, a.identity());
        assert_ne!(w.conjugate, a.diagonal_map(&[1, -1]));
    }

    #[test]
    fn coprime_case_is_normal() {
        let a = split(3, 5, 1);
        let res = is_k_normal(&a, 1000).unwrap();
        assert!(res.normal);
        assert!(res.witness.is_none());
    }

    #[test]
    fn budget_is_enforced() {
        let a = split(9, 15, 2);
        assert_eq!(
            enumerate_isometries(&a, 100),
            Err(Error::BudgetExceeded {
                order: 135,
                budget: 100
            })
        );
    }

    #[test]
    fn isomorphism_between_presentations() {
        // Z/6 with q = -1/6 splits as q(3) = 1/2 on Z/2 and q(2) = 4/3 on Z/3
        let cyc = FiniteQuadraticForm::diagonal(vec![6], vec![frac(-1, 6)]).unwrap();
        let split =
            FiniteQuadraticForm::diagonal(vec![2, 3], vec![frac(1, 2), frac(4, 3)]).unwrap();
        let isos = find_isomorphisms(&cyc, &split, 100, Some(1)).unwrap();
        assert_eq!(isos.len(), 1);
        let bad = FiniteQuadraticForm::diagonal(vec![6], vec![frac(1, 6)]).unwrap();
        assert!(find_isomorphisms(&bad, &split, 100, Some(1))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn degenerate_forms_need_kernel_check() {
        let a = FiniteQuadraticForm::diagonal(vec![2, 2], vec![frac(0, 1), frac(0, 1)]).unwrap();
        // every invertible map of (Z/2)^2 preserves the zero form
        assert_eq!(enumerate_isometries(&a, 100).unwrap().len(), 6);
    }
}
