use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{DiscElement, DiscIsometry, FiniteQuadraticForm};
use crate::error::{Error, Result};
use crate::lattice::{GramLattice, IntMatrix};

/// The discriminant form A_L = L^∨/L of a lattice, with the Smith-normal-form
/// generators `v_i / d_i` (columns of V) for every elementary divisor `d_i > 1`.
#[derive(Clone, Debug)]
pub struct DiscriminantForm {
    lattice: GramLattice,
    form: FiniteQuadraticForm,
    /// lattice coordinates of the chosen lift of each generator
    lifts: Vec<Vec<BigRational>>,
    v_inv: IntMatrix,
    divisors: Vec<BigInt>,
    nontrivial: Vec<usize>,
}

fn ratio(a: &BigInt, b: &BigInt) -> BigRational {
    BigRational::new(a.clone(), b.clone())
}

pub fn discriminant_form(lattice: &GramLattice) -> Result<DiscriminantForm> {
    let n = lattice.rank();
    let snf = lattice.smith();
    let divisors = snf.elementary_divisors.clone();
    debug_assert_eq!(divisors.len(), n);
    let v_inv = snf
        .v
        .unimodular_inverse()
        .expect("Smith transform is unimodular");
    let nontrivial: Vec<usize> = (0..n).filter(|&i| !divisors[i].is_one()).collect();
    let lifts: Vec<Vec<BigRational>> = nontrivial
        .iter()
        .map(|&i| {
            snf.v
                .column(i)
                .iter()
                .map(|x| ratio(x, &divisors[i]))
                .collect()
        })
        .collect();
    let orders = nontrivial
        .iter()
        .map(|&i| {
            divisors[i]
                .to_u64()
                .ok_or(Error::Overflow("discriminant group order"))
        })
        .collect::<Result<Vec<_>>>()?;
    let r = lifts.len();
    let q: Vec<BigRational> = lifts
        .iter()
        .map(|x| lattice.pair_rational_coords(x, x))
        .collect();
    let pairing: Vec<Vec<BigRational>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| lattice.pair_rational_coords(&lifts[i], &lifts[j]))
                .collect()
        })
        .collect();
    let form = FiniteQuadraticForm::new(orders, q, pairing)?;
    Ok(DiscriminantForm {
        lattice: lattice.clone(),
        form,
        lifts,
        v_inv,
        divisors,
        nontrivial,
    })
}

impl DiscriminantForm {
    pub fn form(&self) -> &FiniteQuadraticForm {
        &self.form
    }

    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    /// Lattice coordinates of the lift of generator `i`.
    pub fn generator_lift(&self, i: usize) -> &[BigRational] {
        &self.lifts[i]
    }

    /// Class in A_L of a dual vector given in lattice coordinates.
    pub fn class_of(&self, x: &[BigRational]) -> Result<DiscElement> {
        if x.len() != self.lattice.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.lattice.rank(),
                got: x.len(),
            });
        }
        // x = V D⁻¹ z with z integral exactly when x is in the dual
        let y = self.v_inv.mul_rational_vec(x);
        let mut coords = Vec::with_capacity(self.nontrivial.len());
        for (i, yi) in y.iter().enumerate() {
            let z = yi * BigRational::from_integer(self.divisors[i].clone());
            if !z.is_integer() {
                return Err(Error::InvalidVector(
                    "vector is not in the dual lattice".into(),
                ));
            }
            if self.nontrivial.contains(&i) {
                let c = z.to_integer().mod_floor(&self.divisors[i]);
                coords.push(c.to_u64().expect("reduced below a u64 order"));
            }
        }
        Ok(DiscElement::new(coords))
    }

    /// A dual vector representing `x`.
    pub fn lift(&self, x: &DiscElement) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.lattice.rank()];
        for (c, lift) in x.coords.iter().zip(&self.lifts) {
            let c = BigRational::from_integer(BigInt::from(*c));
            for (o, l) in out.iter_mut().zip(lift) {
                *o += &c * l;
            }
        }
        out
    }

    /// The automorphism of A_L induced by a lattice isometry `p`.
    pub fn induced_isometry(&self, p: &IntMatrix) -> Result<DiscIsometry> {
        if !self.lattice.is_isometry(p) {
            return Err(Error::InvalidLattice(
                "matrix is not an isometry of the lattice".into(),
            ));
        }
        let images = self
            .lifts
            .iter()
            .map(|l| self.class_of(&p.mul_rational_vec(l)))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.form.map_from_images(&images))
    }

    /// The automorphism induced by a rational isometry of L ⊗ Q that
    /// preserves the dual lattice, given by its action on lattice coordinates.
    pub fn induced_by_rational(&self, p: &[Vec<BigRational>]) -> Result<DiscIsometry> {
        let images = self
            .lifts
            .iter()
            .map(|l| {
                let img: Vec<BigRational> = p
                    .iter()
                    .map(|row| {
                        row.iter()
                            .zip(l)
                            .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
                    })
                    .collect();
                self.class_of(&img)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.form.map_from_images(&images))
    }
}
