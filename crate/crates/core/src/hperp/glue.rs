//! Image of the isometries of L fixing h inside O(A_{h⊥}), computed by
//! gluing: L/(Zh ⊕ h⊥) = H sits in A_{Zh} ⊕ A_{h⊥} as the subgroup generated
//! by the class of f, and A_L = H⊥/H.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::disc_form::{enumerate_isometries, DiscElement, DiscIsometry, FiniteQuadraticForm};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HatImage {
    /// |O(A_{h⊥})|
    pub group_order: u64,
    /// isometries fixing k̄₁, i.e. those extending to L with h fixed
    pub extendable: Vec<DiscIsometry>,
    /// extendable isometries acting as +id on A_L
    pub plus: Vec<DiscIsometry>,
    /// extendable isometries acting as −id on A_L
    pub minus: Vec<DiscIsometry>,
}

impl HatImage {
    /// The image of Ô(L, h): isometries acting as ±id on A_L.
    pub fn image(&self) -> Vec<DiscIsometry> {
        let mut all: Vec<DiscIsometry> = self.plus.iter().chain(&self.minus).cloned().collect();
        all.sort();
        all.dedup();
        all
    }
}

/// `form` is A_{h⊥} in any presentation, `k1` the class of k₁ in it, and
/// h² = 2d with div(h) = γ.
pub fn hat_image(
    form: &FiniteQuadraticForm,
    k1: &DiscElement,
    d: u64,
    gamma: u64,
    budget: u64,
) -> Result<HatImage> {
    let two_d = 2 * d;
    let zh = FiniteQuadraticForm::diagonal(
        vec![two_d],
        vec![BigRational::new(BigInt::from(1), BigInt::from(two_d))],
    )?;
    let p = zh.direct_sum(form)?;
    let r = form.rank();

    // f = (γ/2d) h − k₁
    let mut eta = vec![(gamma % two_d) as i64];
    eta.extend(form.neg(k1).coords.iter().map(|&x| x as i64));
    let eta = p.element(&eta)?;
    let mut h_set = HashSet::new();
    let mut x = p.zero();
    loop {
        h_set.insert(x.clone());
        x = p.add(&x, &eta);
        if x == p.zero() {
            break;
        }
    }
    let zero_b = BigRational::from_integer(BigInt::from(0));
    let h_perp: Vec<DiscElement> = p
        .elements()
        .filter(|x| p.eval_b(x, &eta).map(|b| b == zero_b).unwrap_or(false))
        .collect();

    let group = enumerate_isometries(form, budget)?;
    let lift = |g: &DiscIsometry| -> DiscIsometry {
        let mut m = vec![vec![0u64; r + 1]; r + 1];
        m[0][0] = 1 % two_d;
        for i in 0..r {
            for j in 0..r {
                m[i + 1][j + 1] = g.matrix[i][j];
            }
        }
        DiscIsometry { matrix: m }
    };

    let mut out = HatImage {
        group_order: group.len() as u64,
        extendable: Vec::new(),
        plus: Vec::new(),
        minus: Vec::new(),
    };
    for g in &group {
        if form.apply(g, k1) != *k1 {
            continue;
        }
        out.extendable.push(g.clone());
        let big = lift(g);
        let images: Vec<DiscElement> = h_perp.iter().map(|x| p.apply(&big, x)).collect();
        if h_perp
            .iter()
            .zip(&images)
            .all(|(x, y)| h_set.contains(&p.sub(y, x)))
        {
            out.plus.push(g.clone());
        }
        if h_perp
            .iter()
            .zip(&images)
            .all(|(x, y)| h_set.contains(&p.add(y, x)))
        {
            out.minus.push(g.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hperp::{disc_group_omega1, perp_gram, PolarizationData};

    fn split_image(t: u64, d: u64, g: u64) -> (FiniteQuadraticForm, HatImage) {
        let pol = PolarizationData::new(t, d, g, None).unwrap();
        let split = disc_group_omega1(&pol).unwrap();
        let img = hat_image(split.form(), &split.k1(), d, g, 20_000).unwrap();
        (split.form().clone(), img)
    }

    #[test]
    fn plus_part_is_trivial_and_s_acts_as_minus() {
        for (t, d, g) in [
            (2, 3, 1),
            (3, 2, 1),
            (4, 5, 1),
            (9, 15, 2),
            (3, 5, 2),
            (6, 10, 1),
        ] {
            let (f, img) = split_image(t, d, g);
            assert_eq!(img.plus, vec![f.identity()], "(t,d,γ) = ({t},{d},{g})");
            let s = f.diagonal_map(&[1, -1]);
            assert!(img.minus.contains(&s));
            let mut expected = vec![f.identity(), s];
            expected.sort();
            expected.dedup();
            assert_eq!(img.image(), expected);
        }
    }

    #[test]
    fn t_one_image_is_trivial() {
        let (f, img) = split_image(1, 4, 1);
        assert_eq!(img.image(), vec![f.identity()]);
    }

    #[test]
    fn k3_cube_case_image_is_everything() {
        let pol = PolarizationData::new(2, 2, 2, Some(1)).unwrap();
        let perp = perp_gram(&pol, 0).unwrap();
        let a = perp.disc_form().unwrap();
        let (k1, _) = perp.glue_generator().unwrap();
        let img = hat_image(a.form(), &k1, 2, 2, 1000).unwrap();
        assert_eq!(img.image().len() as u64, img.group_order);
    }
}
