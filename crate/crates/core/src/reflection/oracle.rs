//! Independent route to the induced action: materialize h⊥ = U ⊕ U ⊕ Zk ⊕ Zℓ,
//! apply r_β to lifts of the generators of A_{h⊥} and reduce.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{reflection_matrix, SymbolicPerpVector};
use crate::disc_form::{discriminant_form, DiscElement, DiscIsometry, DiscriminantForm};
use crate::error::{Error, Result};
use crate::hperp::{disc_group_omega1, PolarizationData, SplitDiscForm};
use crate::lattice::{GramLattice, IntMatrix};

#[derive(Clone, Debug)]
pub struct ExplicitPerp {
    t: u64,
    d: u64,
    lattice: GramLattice,
    disc: DiscriminantForm,
    split: SplitDiscForm,
    to_split: HashMap<DiscElement, DiscElement>,
}

const K: usize = 4;
const L: usize = 5;

impl ExplicitPerp {
    /// h⊥ for γ = 1 with M = U ⊕ U; basis (e₁, f₁, e₂, f₂, k, ℓ).
    pub fn new(t: u64, d: u64) -> Result<Self> {
        let split = disc_group_omega1(&PolarizationData::new(t, d, 1, Some(0))?)?;
        let u = GramLattice::hyperbolic_u();
        let lattice = GramLattice::direct_sum_all([
            &u,
            &u,
            &GramLattice::rank_one(-2 * d as i64)?,
            &GramLattice::rank_one(-2 * t as i64)?,
        ])
        .expect("nonempty");
        let disc = discriminant_form(&lattice)?;
        let mut me = ExplicitPerp {
            t,
            d,
            lattice,
            disc,
            split,
            to_split: HashMap::new(),
        };
        for x in me.split.form().elements() {
            let smith = me.disc.class_of(&me.lift_split(&x))?;
            me.to_split.insert(smith, x);
        }
        if me.to_split.len() as u64 != me.split.form().cardinality() {
            return Err(Error::InvalidForm("k_*, ℓ_* do not generate A_{h⊥}".into()));
        }
        Ok(me)
    }

    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    pub fn split(&self) -> &SplitDiscForm {
        &self.split
    }

    /// x·k/2d + y·ℓ/2t in lattice coordinates.
    fn lift_split(&self, x: &DiscElement) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); 6];
        v[K] = BigRational::new(BigInt::from(x.coords[0]), BigInt::from(2 * self.d));
        v[L] = BigRational::new(BigInt::from(x.coords[1]), BigInt::from(2 * self.t));
        v
    }

    /// Split coordinates of the class of a dual vector.
    pub fn class_of(&self, v: &[BigRational]) -> Result<DiscElement> {
        let smith = self.disc.class_of(v)?;
        Ok(self.to_split[&smith].clone())
    }

    /// β with m = e₁ + (m²/2) f₁.
    pub fn embed(&self, beta: &SymbolicPerpVector) -> Vec<BigInt> {
        let a = BigInt::from(beta.a);
        vec![
            a.clone(),
            a * BigInt::from(beta.msq / 2),
            BigInt::zero(),
            BigInt::zero(),
            BigInt::from(beta.b),
            BigInt::from(beta.c),
        ]
    }

    pub fn square(&self, beta: &SymbolicPerpVector) -> Result<BigInt> {
        Ok(self.lattice.vector(self.embed(beta))?.square())
    }

    pub fn divisibility(&self, beta: &SymbolicPerpVector) -> Result<BigInt> {
        self.lattice.vector(self.embed(beta))?.divisibility()
    }

    /// Class of β/div(β).
    pub fn star(&self, beta: &SymbolicPerpVector) -> Result<DiscElement> {
        let v = self.lattice.vector(self.embed(beta))?;
        self.class_of(v.star()?.coords())
    }

    /// r_β as an integer matrix on lattice coordinates.
    pub fn reflection(&self, beta: &SymbolicPerpVector) -> Result<IntMatrix> {
        let v = self.lattice.vector(self.embed(beta))?;
        reflection_matrix(&self.lattice, &v)
    }

    /// The action of r_β on A_{h⊥} in the (k_*, ℓ_*) presentation.
    pub fn induced(&self, beta: &SymbolicPerpVector) -> Result<DiscIsometry> {
        let p = self.reflection(beta)?;
        self.induced_by(&p)
    }

    /// The action of any lattice isometry on A_{h⊥}.
    pub fn induced_by(&self, p: &IntMatrix) -> Result<DiscIsometry> {
        let f = self.split.form();
        let images = (0..2)
            .map(|i| self.class_of(&p.mul_rational_vec(&self.lift_split(&f.generator(i)))))
            .collect::<Result<Vec<_>>>()?;
        Ok(f.map_from_images(&images))
    }

    /// The isometry k ↦ εₖ k, ℓ ↦ εₗ ℓ fixing U ⊕ U.
    pub fn sign_isometry(&self, eps_k: i64, eps_l: i64) -> IntMatrix {
        let mut m = IntMatrix::identity(6);
        m.set(K, K, BigInt::from(eps_k));
        m.set(L, L, BigInt::from(eps_l));
        m
    }
}
