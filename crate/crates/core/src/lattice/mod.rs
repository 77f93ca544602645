//! Even lattices given by integer Gram matrices.

pub mod matrix;
mod parse;
pub mod smith;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use matrix::IntMatrix;
pub use parse::parse_description;
pub use smith::{smith_normal_form, SmithDecomposition};

use crate::error::{Error, Result};

/// A nondegenerate even lattice: a symmetric integer Gram matrix with even
/// diagonal and nonzero determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramLattice {
    gram: IntMatrix,
    label: String,
}

/// Gram matrix of E8(-1): the negated Cartan matrix of E8, Bourbaki node
/// order (chain 1-3-4-5-6-7-8 with node 2 attached to node 4).
const E8_EDGES: [(usize, usize); 7] = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];

impl GramLattice {
    pub fn new(gram: IntMatrix, label: impl Into<String>) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::InvalidLattice("Gram matrix is not square".into()));
        }
        if !gram.is_symmetric() {
            return Err(Error::InvalidLattice("Gram matrix is not symmetric".into()));
        }
        if let Some(i) = (0..gram.rows()).find(|&i| gram.get(i, i).is_odd()) {
            return Err(Error::InvalidLattice(format!(
                "diagonal entry {i} is odd; the lattice is not even"
            )));
        }
        if gram.determinant().is_zero() {
            return Err(Error::InvalidLattice("Gram matrix is degenerate".into()));
        }
        Ok(GramLattice {
            gram,
            label: label.into(),
        })
    }

    pub fn from_rows(rows: &[Vec<i64>], label: impl Into<String>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != rows.len()) {
            return Err(Error::InvalidLattice("Gram matrix is not square".into()));
        }
        Self::new(IntMatrix::from_rows(rows), label)
    }

    /// The hyperbolic plane U with basis (e, f), e² = f² = 0, e·f = 1.
    pub fn hyperbolic_u() -> Self {
        GramLattice {
            gram: IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]),
            label: "U".into(),
        }
    }

    pub fn e8_minus() -> Self {
        let mut rows = vec![vec![0i64; 8]; 8];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = -2;
        }
        for &(i, j) in &E8_EDGES {
            rows[i][j] = 1;
            rows[j][i] = 1;
        }
        GramLattice {
            gram: IntMatrix::from_rows(&rows),
            label: "E8(-1)".into(),
        }
    }

    /// The rank-one lattice Z(n), generator of square n.
    pub fn rank_one(n: i64) -> Result<Self> {
        if n == 0 || n % 2 != 0 {
            return Err(Error::InvalidLattice(format!(
                "Z({n}) is not an even nondegenerate lattice"
            )));
        }
        Ok(GramLattice {
            gram: IntMatrix::from_rows(&[vec![n]]),
            label: format!("Z({n})"),
        })
    }

    pub fn direct_sum(&self, other: &GramLattice) -> GramLattice {
        let label = match (self.label.is_empty(), other.label.is_empty()) {
            (true, _) => other.label.clone(),
            (_, true) => self.label.clone(),
            _ => format!("{} ⊕ {}", self.label, other.label),
        };
        GramLattice {
            gram: self.gram.block_diag(&other.gram),
            label,
        }
    }

    /// Direct sum of a sequence of blocks; `None` for an empty sequence.
    pub fn direct_sum_all<'a>(blocks: impl IntoIterator<Item = &'a GramLattice>) -> Option<Self> {
        blocks
            .into_iter()
            .fold(None, |acc: Option<GramLattice>, b| match acc {
                None => Some(b.clone()),
                Some(a) => Some(a.direct_sum(b)),
            })
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn determinant(&self) -> BigInt {
        self.gram.determinant()
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    /// Signature (n₊, n₋), from the signs of the leading principal minors
    /// after an exact congruence diagonalization.
    pub fn signature(&self) -> (usize, usize) {
        let n = self.rank();
        let mut a: Vec<Vec<BigRational>> = self
            .gram
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(BigRational::from_integer).collect())
            .collect();
        let (mut pos, mut neg) = (0, 0);
        for k in 0..n {
            if a[k][k].is_zero() {
                // bring a nonzero diagonal entry forward, or create one from an off-diagonal pair
                if let Some(p) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                    a.swap(k, p);
                    for row in a.iter_mut() {
                        row.swap(k, p);
                    }
                } else if let Some(p) = (k + 1..n).find(|&i| !a[k][i].is_zero()) {
                    // e_k += e_p: new diagonal entry 2·a[k][p]
                    for j in 0..n {
                        let v = a[p][j].clone();
                        a[k][j] += v;
                    }
                    for row in a.iter_mut() {
                        let v = row[p].clone();
                        row[k] += v;
                    }
                } else {
                    continue;
                }
            }
            let pivot = a[k][k].clone();
            if pivot.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in k + 1..n {
                let f = &a[i][k] / &pivot;
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = &f * &a[k][j];
                    a[i][j] -= v;
                }
                for row in a.iter_mut() {
                    let v = &f * &row[k];
                    row[i] -= v;
                }
            }
        }
        (pos, neg)
    }

    pub fn smith(&self) -> SmithDecomposition {
        smith_normal_form(&self.gram)
    }

    pub fn vector(&self, coords: Vec<BigInt>) -> Result<LatticeVector<'_>> {
        if coords.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: coords.len(),
            });
        }
        Ok(LatticeVector {
            lattice: self,
            coords,
        })
    }

    pub fn vector_i64(&self, coords: &[i64]) -> Result<LatticeVector<'_>> {
        self.vector(coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn basis_vector(&self, i: usize) -> LatticeVector<'_> {
        let mut coords = vec![BigInt::zero(); self.rank()];
        coords[i] = BigInt::one();
        LatticeVector {
            lattice: self,
            coords,
        }
    }

    pub fn rational_vector(&self, coords: Vec<BigRational>) -> Result<RationalVector<'_>> {
        if coords.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: coords.len(),
            });
        }
        Ok(RationalVector {
            lattice: self,
            coords,
        })
    }

    pub(crate) fn pair_coords(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let gy = self.gram.mul_vec(y);
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }

    pub(crate) fn pair_rational_coords(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let gy = self.gram.mul_rational_vec(y);
        x.iter()
            .zip(&gy)
            .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// True iff `p` is an integer matrix with `pᵀ · gram · p = gram` and
    /// `det p = ±1`.
    pub fn is_isometry(&self, p: &IntMatrix) -> bool {
        p.rows() == self.rank()
            && p.cols() == self.rank()
            && p.transpose().mul(&self.gram).mul(p) == self.gram
            && p.determinant().abs().is_one()
    }

    /// Basis (as coordinate columns) of the orthogonal complement of the span
    /// of `vectors`, computed as an integer kernel.
    pub fn orthogonal_complement(&self, vectors: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
        for v in vectors {
            if v.len() != self.rank() {
                return Err(Error::DimensionMismatch {
                    expected: self.rank(),
                    got: v.len(),
                });
            }
        }
        let rows: Vec<Vec<BigInt>> = vectors.iter().map(|v| self.gram.mul_vec(v)).collect();
        let a = IntMatrix::from_big_rows(rows);
        Ok(smith_normal_form(&a).kernel_basis())
    }

    /// The sublattice spanned by `basis`, with the restricted form.
    pub fn sublattice(
        &self,
        basis: &[Vec<BigInt>],
        label: impl Into<String>,
    ) -> Result<GramLattice> {
        let n = basis.len();
        let mut rows = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let v = self.pair_coords(&basis[i], &basis[j]);
                rows[i][j] = v.clone();
                rows[j][i] = v;
            }
        }
        GramLattice::new(IntMatrix::from_big_rows(rows), label)
    }
}

/// An integral vector of a specific lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeVector<'a> {
    lattice: &'a GramLattice,
    coords: Vec<BigInt>,
}

fn same_lattice(a: &GramLattice, b: &GramLattice) -> bool {
    std::ptr::eq(a, b) || a == b
}

fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

impl<'a> LatticeVector<'a> {
    pub fn lattice(&self) -> &'a GramLattice {
        self.lattice
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn pair(&self, other: &LatticeVector<'_>) -> Result<BigInt> {
        if !same_lattice(self.lattice, other.lattice) {
            return Err(Error::LatticeMismatch);
        }
        Ok(self.lattice.pair_coords(&self.coords, &other.coords))
    }

    pub fn square(&self) -> BigInt {
        self.lattice.pair_coords(&self.coords, &self.coords)
    }

    /// Positive generator of the ideal x·Λ ⊂ Z.
    pub fn divisibility(&self) -> Result<BigInt> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(gcd_all(&self.lattice.gram.mul_vec(&self.coords)))
    }

    pub fn is_primitive(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(gcd_all(&self.coords).is_one())
    }

    /// x / div(x), an element of the dual lattice.
    pub fn star(&self) -> Result<RationalVector<'a>> {
        let div = self.divisibility()?;
        Ok(RationalVector {
            lattice: self.lattice,
            coords: self
                .coords
                .iter()
                .map(|x| BigRational::new(x.clone(), div.clone()))
                .collect(),
        })
    }

    pub fn add(&self, other: &LatticeVector<'_>) -> Result<LatticeVector<'a>> {
        if !same_lattice(self.lattice, other.lattice) {
            return Err(Error::LatticeMismatch);
        }
        Ok(LatticeVector {
            lattice: self.lattice,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, k: &BigInt) -> LatticeVector<'a> {
        LatticeVector {
            lattice: self.lattice,
            coords: self.coords.iter().map(|a| a * k).collect(),
        }
    }

    pub fn neg(&self) -> LatticeVector<'a> {
        self.scale(&BigInt::from(-1))
    }

    /// Image under the linear map with matrix `p` (acting on coordinate columns).
    pub fn apply(&self, p: &IntMatrix) -> Result<LatticeVector<'a>> {
        if p.rows() != self.coords.len() || p.cols() != self.coords.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coords.len(),
                got: p.rows(),
            });
        }
        Ok(LatticeVector {
            lattice: self.lattice,
            coords: p.mul_vec(&self.coords),
        })
    }

    pub fn to_rational(&self) -> RationalVector<'a> {
        RationalVector {
            lattice: self.lattice,
            coords: self
                .coords
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect(),
        }
    }
}

/// A vector of Λ ⊗ Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalVector<'a> {
    lattice: &'a GramLattice,
    coords: Vec<BigRational>,
}

impl<'a> RationalVector<'a> {
    pub fn lattice(&self) -> &'a GramLattice {
        self.lattice
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigRational> {
        self.coords
    }

    pub fn pair(&self, other: &RationalVector<'_>) -> Result<BigRational> {
        if !same_lattice(self.lattice, other.lattice) {
            return Err(Error::LatticeMismatch);
        }
        Ok(self
            .lattice
            .pair_rational_coords(&self.coords, &other.coords))
    }

    pub fn square(&self) -> BigRational {
        self.lattice
            .pair_rational_coords(&self.coords, &self.coords)
    }

    /// Membership in Λ∨: pairs integrally with every basis vector.
    pub fn is_dual_member(&self) -> bool {
        self.lattice
            .gram
            .mul_rational_vec(&self.coords)
            .iter()
            .all(BigRational::is_integer)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(BigRational::is_integer)
    }

    pub fn to_lattice_vector(&self) -> Option<LatticeVector<'a>> {
        self.is_integral().then(|| LatticeVector {
            lattice: self.lattice,
            coords: self.coords.iter().map(BigRational::to_integer).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn hyperbolic_pairings() {
        let u = GramLattice::hyperbolic_u();
        let e = u.basis_vector(0);
        let f = u.basis_vector(1);
        assert_eq!(e.pair(&f).unwrap(), big(1));
        assert_eq!(e.pair(&e).unwrap(), big(0));
        assert_eq!(u.determinant(), big(-1));
        let zero = u.vector_i64(&[0, 0]).unwrap();
        assert_eq!(e.pair(&zero).unwrap(), big(0));
    }

    #[test]
    fn ell_square_in_l2t() {
        let l = GramLattice::hyperbolic_u().direct_sum(&GramLattice::rank_one(-18).unwrap());
        let ell = l.basis_vector(2);
        assert_eq!(ell.square(), big(-18));
    }

    #[test]
    fn e8_minus_is_even_unimodular_negative_definite() {
        let e8 = GramLattice::e8_minus();
        assert_eq!(e8.determinant(), big(1));
        assert_eq!(e8.signature(), (0, 8));
        assert!(GramLattice::new(e8.gram().clone(), "copy").is_ok());
    }

    #[test]
    fn rank_one_rejects_odd_and_zero() {
        assert!(GramLattice::rank_one(-3).is_err());
        assert!(GramLattice::rank_one(0).is_err());
        let s = GramLattice::hyperbolic_u().direct_sum(&GramLattice::rank_one(-2).unwrap());
        assert_eq!(s.determinant(), big(2));
    }

    #[test]
    fn constructor_rejects_odd_diagonal_and_degenerate() {
        assert!(GramLattice::from_rows(&[vec![1, 0], vec![0, 2]], "odd").is_err());
        assert!(GramLattice::from_rows(&[vec![2, 2], vec![2, 2]], "deg").is_err());
        assert!(GramLattice::from_rows(&[vec![2, 1], vec![0, 2]], "asym").is_err());
    }

    #[test]
    fn divisibility_examples() {
        // ℓ in U ⊕ Z(-2): divisibility 2t = 2
        let l = GramLattice::hyperbolic_u().direct_sum(&GramLattice::rank_one(-2).unwrap());
        assert_eq!(l.basis_vector(2).divisibility().unwrap(), big(2));
        // h = e + d f in U
        let u = GramLattice::hyperbolic_u();
        assert_eq!(
            u.vector_i64(&[1, 5]).unwrap().divisibility().unwrap(),
            big(1)
        );
        assert_eq!(
            u.vector_i64(&[0, 0]).unwrap().divisibility(),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn primitivity_examples() {
        let u = GramLattice::hyperbolic_u();
        assert!(u.vector_i64(&[1, 1]).unwrap().is_primitive().unwrap());
        assert!(!u.vector_i64(&[2, 2]).unwrap().is_primitive().unwrap());
        let l = u.direct_sum(&GramLattice::rank_one(-18).unwrap());
        // 2(e + 6f) + ℓ
        assert!(l.vector_i64(&[2, 12, 1]).unwrap().is_primitive().unwrap());
    }

    #[test]
    fn mismatched_lattices_are_rejected() {
        let u = GramLattice::hyperbolic_u();
        let z = GramLattice::rank_one(-2).unwrap();
        let x = u.basis_vector(0);
        let y = z.basis_vector(0);
        assert_eq!(x.pair(&y), Err(Error::LatticeMismatch));
    }

    #[test]
    fn star_of_ell_is_dual() {
        let l = GramLattice::hyperbolic_u().direct_sum(&GramLattice::rank_one(-6).unwrap());
        let s = l.basis_vector(2).star().unwrap();
        assert_eq!(s.coords()[2], BigRational::new(big(1), big(6)));
        assert!(s.is_dual_member());
        assert!(!s.is_integral());
    }

    #[test]
    fn signatures() {
        assert_eq!(GramLattice::hyperbolic_u().signature(), (1, 1));
        let l = GramLattice::hyperbolic_u()
            .direct_sum(&GramLattice::hyperbolic_u())
            .direct_sum(&GramLattice::rank_one(-4).unwrap());
        assert_eq!(l.signature(), (2, 3));
    }

    #[test]
    fn orthogonal_complement_of_h_in_u() {
        let u = GramLattice::hyperbolic_u();
        let h = vec![big(1), big(3)];
        let perp = u.orthogonal_complement(std::slice::from_ref(&h)).unwrap();
        assert_eq!(perp.len(), 1);
        let sub = u.sublattice(&perp, "h⊥").unwrap();
        assert_eq!(sub.determinant(), big(-6));
    }
}
