//! The polarization vector h in L_{2t} = M ⊕ U ⊕ Zℓ (ℓ² = −2t), its
//! orthogonal complement h⊥ = M ⊕ B, and the split presentation of A_{h⊥}.
//!
//! With h = γ(e + bf) + cℓ, the non-unimodular block B has basis
//! h₁ = e − bf, h₂ = c(2t/γ)f + ℓ.

mod glue;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

pub use glue::{hat_image, HatImage};

use crate::disc_form::{
    discriminant_form, DiscElement, DiscIsometry, DiscriminantForm, FiniteQuadraticForm,
};
use crate::error::{Error, Result};
use crate::lattice::{GramLattice, IntMatrix};

/// Rank of the unimodular part of Λ_{K3^[m]}: U² ⊕ E8(−1)².
pub const K3M_UNIMODULAR_RANK: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolarizationData {
    pub t: u64,
    pub d: u64,
    pub gamma: u64,
    pub c: u64,
    pub b: u64,
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl PolarizationData {
    /// Validates (t, d, γ, c). Without `c`, γ = 1 forces c = 0 and γ = 2
    /// forces c = 1; for γ > 2 the admissible c must be unique.
    pub fn new(t: u64, d: u64, gamma: u64, c: Option<u64>) -> Result<Self> {
        let unrealizable = |reason: String| Error::Unrealizable {
            t,
            d,
            gamma,
            reason,
        };
        if t == 0 || d == 0 || gamma == 0 {
            return Err(unrealizable("t, d and gamma must be positive".into()));
        }
        if !(2 * t).is_multiple_of(gamma) {
            return Err(unrealizable("gamma must divide 2t".into()));
        }
        let c = match c {
            Some(c) => c,
            None if gamma == 1 => 0,
            None if gamma == 2 => 1,
            None => {
                let cands = Self::admissible_c(t, d, gamma);
                match cands.as_slice() {
                    [] => return Err(unrealizable("no admissible c".into())),
                    [c] => *c,
                    _ => {
                        return Err(Error::AmbiguousC {
                            t,
                            d,
                            gamma,
                            candidates: cands,
                        })
                    }
                }
            }
        };
        if c >= gamma || c.gcd(&gamma) != 1 {
            return Err(unrealizable(format!(
                "c = {c} must satisfy 0 <= c < gamma and gcd(c, gamma) = 1"
            )));
        }
        let num = d as u128 + t as u128 * (c as u128).pow(2);
        let g2 = (gamma as u128).pow(2);
        if !num.is_multiple_of(g2) {
            let reason = if gamma == 2 {
                "d + t must be divisible by 4".to_string()
            } else {
                format!("gamma^2 = {g2} does not divide d + t c^2 = {num}")
            };
            return Err(unrealizable(reason));
        }
        let b = u64::try_from(num / g2).map_err(|_| Error::Overflow("polarization b"))?;
        Ok(PolarizationData { t, d, gamma, c, b })
    }

    /// All c in [0, γ) prime to γ with γ² | d + tc².
    pub fn admissible_c(t: u64, d: u64, gamma: u64) -> Vec<u64> {
        if gamma == 0 || !(2 * t).is_multiple_of(gamma) {
            return Vec::new();
        }
        let g2 = (gamma as u128).pow(2);
        (0..gamma)
            .filter(|&c| {
                c.gcd(&gamma) == 1
                    && (d as u128 + t as u128 * (c as u128).pow(2)).is_multiple_of(g2)
            })
            .collect()
    }

    /// ω = gcd(2t/γ, γ).
    pub fn omega(&self) -> u64 {
        (2 * self.t / self.gamma).gcd(&self.gamma)
    }

    /// Orders of k̄₁ and k̄₂: (2d/γ, 2t/γ).
    pub fn split_orders(&self) -> (u64, u64) {
        (2 * self.d / self.gamma, 2 * self.t / self.gamma)
    }

    /// |A_{h⊥}| = 4dt/γ².
    pub fn disc_order(&self) -> u64 {
        4 * self.d * self.t / (self.gamma * self.gamma)
    }

    /// Gram matrix of B in the basis (h₁, h₂).
    pub fn block_gram(&self) -> [[i64; 2]; 2] {
        let (t, c, g, b) = (
            self.t as i64,
            self.c as i64,
            self.gamma as i64,
            self.b as i64,
        );
        let off = 2 * t * c / g;
        [[-2 * b, off], [off, -2 * t]]
    }

    /// Coordinates of h in the basis (e, f, ℓ) of U ⊕ Zℓ.
    pub fn h_coords(&self) -> [i64; 3] {
        let g = self.gamma as i64;
        [g, g * self.b as i64, self.c as i64]
    }
}

/// h⊥ = M ⊕ B, with M of rank `m_rank` (U^{m_rank/2}, or U² ⊕ E8(−1)² for
/// rank 20) and B last in the basis.
#[derive(Clone, Debug)]
pub struct PerpLattice {
    pol: PolarizationData,
    m_rank: usize,
    block: GramLattice,
}

/// The even unimodular lattice used for M.
pub fn unimodular_part(m_rank: usize) -> Result<Option<GramLattice>> {
    if !m_rank.is_multiple_of(2) {
        return Err(Error::InvalidLattice(format!(
            "M must have even rank, got {m_rank}"
        )));
    }
    let u = GramLattice::hyperbolic_u();
    let e8 = GramLattice::e8_minus();
    let blocks: Vec<&GramLattice> = if m_rank == K3M_UNIMODULAR_RANK {
        vec![&u, &u, &e8, &e8]
    } else {
        vec![&u; m_rank / 2]
    };
    Ok(GramLattice::direct_sum_all(blocks))
}

pub fn perp_gram(pol: &PolarizationData, m_rank: usize) -> Result<PerpLattice> {
    unimodular_part(m_rank)?;
    let rows: Vec<Vec<i64>> = pol.block_gram().iter().map(|r| r.to_vec()).collect();
    let block = GramLattice::from_rows(&rows, "B")?;
    debug_assert_eq!(
        block.determinant(),
        BigInt::from(pol.disc_order()),
        "det B = 4dt/γ²"
    );
    Ok(PerpLattice {
        pol: *pol,
        m_rank,
        block,
    })
}

impl PerpLattice {
    pub fn pol(&self) -> &PolarizationData {
        &self.pol
    }

    pub fn m_rank(&self) -> usize {
        self.m_rank
    }

    pub fn block(&self) -> &GramLattice {
        &self.block
    }

    /// The full Gram matrix of M ⊕ B.
    pub fn full_lattice(&self) -> Result<GramLattice> {
        Ok(match unimodular_part(self.m_rank)? {
            Some(m) => m.direct_sum(&self.block),
            None => self.block.clone(),
        })
    }

    /// Coordinates in (h₁, h₂) of the vector pairing to `pairings` with them.
    fn dual_coords(&self, pairings: [i64; 2]) -> Vec<BigRational> {
        let inv = self
            .block
            .gram()
            .rational_inverse()
            .expect("B is nondegenerate");
        inv.iter()
            .map(|row| {
                row[0].clone() * frac(pairings[0], 1) + row[1].clone() * frac(pairings[1], 1)
            })
            .collect()
    }

    /// k₁ = (γ/2d)h − f, which pairs to (−1, 0) with (h₁, h₂).
    pub fn k1_lift(&self) -> Vec<BigRational> {
        self.dual_coords([-1, 0])
    }

    /// k₂ = cf + (γ/2t)ℓ, which pairs to (c, −γ) with (h₁, h₂).
    pub fn k2_lift(&self) -> Vec<BigRational> {
        self.dual_coords([self.pol.c as i64, -(self.pol.gamma as i64)])
    }

    /// A_{h⊥} = A_B in its Smith presentation.
    pub fn disc_form(&self) -> Result<DiscriminantForm> {
        discriminant_form(&self.block)
    }

    /// The class k̄₁ generating p(H), with its order.
    pub fn glue_generator(&self) -> Result<(DiscElement, u64)> {
        let a = self.disc_form()?;
        let k1 = a.class_of(&self.k1_lift())?;
        let order = a.form().order_of(&k1);
        Ok((k1, order))
    }
}

/// A_{h⊥} ≅ Z/(2d/γ) × Z/(2t/γ) with ordered generators (k̄₁, k̄₂), valid
/// when ω = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitDiscForm {
    pol: PolarizationData,
    form: FiniteQuadraticForm,
}

pub fn disc_group_omega1(pol: &PolarizationData) -> Result<SplitDiscForm> {
    let omega = pol.omega();
    if omega != 1 {
        return Err(Error::OmegaUnsupported { omega });
    }
    let (n1, n2) = pol.split_orders();
    let g2 = (pol.gamma * pol.gamma) as i64;
    let form = FiniteQuadraticForm::diagonal(
        vec![n1, n2],
        vec![frac(-g2, 2 * pol.d as i64), frac(-g2, 2 * pol.t as i64)],
    )?;
    Ok(SplitDiscForm { pol: *pol, form })
}

impl SplitDiscForm {
    pub fn pol(&self) -> &PolarizationData {
        &self.pol
    }

    pub fn form(&self) -> &FiniteQuadraticForm {
        &self.form
    }

    pub fn k1(&self) -> DiscElement {
        self.form.generator(0)
    }

    pub fn k2(&self) -> DiscElement {
        self.form.generator(1)
    }

    /// s = diag(1, −1).
    pub fn s(&self) -> DiscIsometry {
        self.form.diagonal_map(&[1, -1])
    }

    /// g extends to an isometry of L_{2t} fixing h iff g(k̄₁) = k̄₁.
    pub fn extends_to_l(&self, g: &DiscIsometry) -> bool {
        self.form.apply(g, &self.k1()) == self.k1()
    }

    /// The explicit isomorphism sending (k̄₁, k̄₂) to the classes of the
    /// lifts k₁, k₂ in the Smith presentation of A_B. Fails if those classes
    /// do not reproduce the split form.
    pub fn to_smith(&self, perp: &PerpLattice) -> Result<(DiscriminantForm, DiscIsometry)> {
        let a = perp.disc_form()?;
        let images = [a.class_of(&perp.k1_lift())?, a.class_of(&perp.k2_lift())?];
        let m = DiscIsometry {
            matrix: (0..a.form().rank())
                .map(|j| images.iter().map(|y| y.coords[j]).collect())
                .collect(),
        };
        let f = &self.form;
        let ok = (0..2).all(|i| {
            f.eval_q(&f.generator(i)).ok() == a.form().eval_q(&images[i]).ok()
                && a.form().order_of(&images[i]) == f.orders()[i]
        }) && a.form().eval_b(&images[0], &images[1]).ok()
            == f.eval_b(&f.generator(0), &f.generator(1)).ok()
            && f.cardinality() == a.form().cardinality();
        if !ok {
            return Err(Error::InvalidForm(
                "k1, k2 classes do not reproduce the split presentation".into(),
            ));
        }
        Ok((a, m))
    }
}

/// L_{2t} = U ⊕ Zℓ (M omitted) with basis (e, f, ℓ), h and an integral
/// basis of h⊥ computed as a kernel.
#[derive(Clone, Debug)]
pub struct ExplicitModel {
    pub lattice: GramLattice,
    pub h: Vec<BigInt>,
    pub perp_basis: Vec<Vec<BigInt>>,
    pub perp: GramLattice,
}

pub fn explicit_model(pol: &PolarizationData) -> Result<ExplicitModel> {
    let two_t = 2 * pol.t as i64;
    let lattice = GramLattice::hyperbolic_u().direct_sum(&GramLattice::rank_one(-two_t)?);
    let h: Vec<BigInt> = pol.h_coords().iter().map(|&x| BigInt::from(x)).collect();
    let perp_basis = lattice.orthogonal_complement(std::slice::from_ref(&h))?;
    let perp = lattice.sublattice(&perp_basis, "h⊥")?;
    Ok(ExplicitModel {
        lattice,
        h,
        perp_basis,
        perp,
    })
}

impl ExplicitModel {
    pub fn h_square(&self) -> BigInt {
        self.lattice.pair_coords(&self.h, &self.h)
    }

    pub fn h_divisibility(&self) -> Result<BigInt> {
        self.lattice.vector(self.h.clone())?.divisibility()
    }

    /// Class of h/div(h) in A_{L_{2t}} ≅ Z/2t (generator ℓ/2t).
    pub fn h_star_class(&self) -> Result<u64> {
        let v = self.lattice.vector(self.h.clone())?;
        let star = v.star()?;
        // e, f pair integrally; the ℓ-coordinate times 2t is the class
        let l = &star.coords()[2] * BigRational::from_integer(BigInt::from(2 * self.t_value()));
        let two_t = BigInt::from(2 * self.t_value());
        Ok(l.to_integer().mod_floor(&two_t).to_u64().unwrap_or(0))
    }

    fn t_value(&self) -> i64 {
        -self.lattice.gram().get(2, 2).to_i64().unwrap_or(0) / 2
    }

    pub fn perp_disc(&self) -> Result<DiscriminantForm> {
        discriminant_form(&self.perp)
    }
}

/// The rational matrix of an integer matrix, for convenience.
pub fn to_rational_rows(m: &IntMatrix) -> Vec<Vec<BigRational>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect()
}
