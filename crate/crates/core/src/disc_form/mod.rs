//! Finite quadratic forms (A, q) with q valued in Q/2Z and b valued in Q/Z.
//!
//! Values are stored as canonical rationals (q in [0, 2), b in [0, 1)) and
//! mirrored by an integer representation at a common scale `S`, so that
//! `q(x)·S` is an integer mod 2S and `b(x, y)·S` an integer mod S. All
//! enumeration work happens on the scaled integers.

mod from_lattice;
mod isometry;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use from_lattice::{discriminant_form, DiscriminantForm};
pub use isometry::{
    conjugate, enumerate_isometries, find_isomorphisms, is_k_normal, normality_witness, KNormality,
    NormalityWitness,
};

use crate::error::{Error, Result};

/// Default cap on |A| for exhaustive enumeration.
pub const DEFAULT_BUDGET: u64 = 20_000;

/// Largest scale we accept for the integer mirror of q and b.
const MAX_SCALE: i64 = 1 << 40;

/// An element of A, coordinates reduced modulo the generator orders.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiscElement {
    pub coords: Vec<u64>,
}

impl DiscElement {
    pub fn new(coords: Vec<u64>) -> Self {
        DiscElement { coords }
    }
}

impl fmt::Display for DiscElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// An endomorphism of A given on generator coordinates: column i is the
/// image of generator i, and row j is reduced modulo the j-th order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiscIsometry {
    pub matrix: Vec<Vec<u64>>,
}

impl DiscIsometry {
    pub fn size(&self) -> usize {
        self.matrix.len()
    }

    /// Image of generator `i`.
    pub fn column(&self, i: usize) -> DiscElement {
        DiscElement::new(self.matrix.iter().map(|row| row[i]).collect())
    }

    pub fn as_i64_rows(&self) -> Vec<Vec<i64>> {
        self.matrix
            .iter()
            .map(|r| r.iter().map(|&x| x as i64).collect())
            .collect()
    }
}

impl fmt::Display for DiscIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .matrix
            .iter()
            .map(|r| {
                r.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(f, "({})", rows.join(" / "))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct FormRepr {
    orders: Vec<u64>,
    q_gen: Vec<String>,
    pairing: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "FormRepr", into = "FormRepr")]
pub struct FiniteQuadraticForm {
    orders: Vec<u64>,
    q_gen: Vec<BigRational>,
    pairing: Vec<Vec<BigRational>>,
    scale: i64,
    q_num: Vec<i64>,
    b_num: Vec<Vec<i64>>,
}

impl PartialEq for FiniteQuadraticForm {
    fn eq(&self, other: &Self) -> bool {
        self.orders == other.orders && self.q_gen == other.q_gen && self.pairing == other.pairing
    }
}

impl Eq for FiniteQuadraticForm {}

/// Reduces `x` into `[0, m)`.
pub(crate) fn reduce_rational(x: &BigRational, m: i64) -> BigRational {
    let m = BigRational::from_integer(BigInt::from(m));
    let k = (x / &m).floor();
    x - k * m
}

pub(crate) fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl TryFrom<FormRepr> for FiniteQuadraticForm {
    type Error = Error;

    fn try_from(r: FormRepr) -> Result<Self> {
        let q = r
            .q_gen
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        let b = r
            .pairing
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteQuadraticForm::new(r.orders, q, b)
    }
}

impl From<FiniteQuadraticForm> for FormRepr {
    fn from(f: FiniteQuadraticForm) -> Self {
        FormRepr {
            orders: f.orders,
            q_gen: f.q_gen.iter().map(format_rational).collect(),
            pairing: f
                .pairing
                .iter()
                .map(|row| row.iter().map(format_rational).collect())
                .collect(),
        }
    }
}

fn scaled(x: &BigRational, scale: i64, modulus: i64) -> i64 {
    let v = x * BigRational::from_integer(BigInt::from(scale));
    debug_assert!(v.is_integer());
    v.to_integer()
        .mod_floor(&BigInt::from(modulus))
        .to_i64()
        .unwrap_or(0)
}

impl FiniteQuadraticForm {
    /// Validates and canonicalizes a form. `pairing` must be symmetric with
    /// diagonal congruent to `q_gen` modulo 1.
    pub fn new(
        orders: Vec<u64>,
        q_gen: Vec<BigRational>,
        pairing: Vec<Vec<BigRational>>,
    ) -> Result<Self> {
        let r = orders.len();
        if q_gen.len() != r || pairing.len() != r || pairing.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidForm(
                "orders, q_gen and pairing sizes disagree".into(),
            ));
        }
        if orders.contains(&0) {
            return Err(Error::InvalidForm(
                "generator orders must be positive".into(),
            ));
        }
        let q_gen: Vec<BigRational> = q_gen.iter().map(|x| reduce_rational(x, 2)).collect();
        let pairing: Vec<Vec<BigRational>> = pairing
            .iter()
            .map(|row| row.iter().map(|x| reduce_rational(x, 1)).collect())
            .collect();
        for i in 0..r {
            for j in 0..r {
                if pairing[i][j] != pairing[j][i] {
                    return Err(Error::InvalidForm("pairing is not symmetric".into()));
                }
            }
            if reduce_rational(&q_gen[i], 1) != pairing[i][i] {
                return Err(Error::InvalidForm(format!(
                    "q(g{i}) and b(g{i}, g{i}) disagree modulo 1"
                )));
            }
            let n = BigRational::from_integer(BigInt::from(orders[i]));
            if !reduce_rational(&(&n * &n * &q_gen[i]), 2).is_zero() {
                return Err(Error::InvalidForm(format!(
                    "q is not well defined on generator {i}"
                )));
            }
            for j in 0..r {
                if !(&n * &pairing[i][j]).is_integer() {
                    return Err(Error::InvalidForm(format!(
                        "b(g{i}, g{j}) is not killed by the order of g{i}"
                    )));
                }
            }
        }
        let scale = q_gen
            .iter()
            .chain(pairing.iter().flatten())
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let scale = scale
            .to_i64()
            .filter(|&s| s <= MAX_SCALE)
            .ok_or(Error::Overflow("finite quadratic form scale"))?;
        orders
            .iter()
            .try_fold(1u64, |acc, &n| acc.checked_mul(n))
            .ok_or(Error::Overflow("finite quadratic form cardinality"))?;
        let q_num = q_gen.iter().map(|x| scaled(x, scale, 2 * scale)).collect();
        let b_num = pairing
            .iter()
            .map(|row| row.iter().map(|x| scaled(x, scale, scale)).collect())
            .collect();
        Ok(FiniteQuadraticForm {
            orders,
            q_gen,
            pairing,
            scale,
            q_num,
            b_num,
        })
    }

    /// Convenience constructor from integer fractions `(num, den)`.
    pub fn from_fractions(
        orders: Vec<u64>,
        q_gen: &[(i64, i64)],
        pairing: &[Vec<(i64, i64)>],
    ) -> Result<Self> {
        let frac = |&(n, d): &(i64, i64)| BigRational::new(BigInt::from(n), BigInt::from(d));
        Self::new(
            orders,
            q_gen.iter().map(frac).collect(),
            pairing
                .iter()
                .map(|r| r.iter().map(frac).collect())
                .collect(),
        )
    }

    /// Orthogonal sum of cyclic factors `Z/n_i` with the given q values.
    pub fn diagonal(orders: Vec<u64>, q_gen: Vec<BigRational>) -> Result<Self> {
        let r = orders.len();
        let pairing = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        if i == j {
                            reduce_rational(&q_gen[i], 1)
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(orders, q_gen, pairing)
    }

    /// The trivial group.
    pub fn trivial() -> Self {
        Self::new(vec![], vec![], vec![]).expect("trivial form is valid")
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn q_gen(&self) -> &[BigRational] {
        &self.q_gen
    }

    pub fn pairing(&self) -> &[Vec<BigRational>] {
        &self.pairing
    }

    pub fn cardinality(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(&self, other: &FiniteQuadraticForm) -> Result<Self> {
        let r = self.rank() + other.rank();
        let mut pairing = vec![vec![BigRational::zero(); r]; r];
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                pairing[i][j] = self.pairing[i][j].clone();
            }
        }
        for i in 0..other.rank() {
            for j in 0..other.rank() {
                pairing[self.rank() + i][self.rank() + j] = other.pairing[i][j].clone();
            }
        }
        let orders = self.orders.iter().chain(&other.orders).copied().collect();
        let q = self.q_gen.iter().chain(&other.q_gen).cloned().collect();
        Self::new(orders, q, pairing)
    }

    // ----- elements -----

    pub fn zero(&self) -> DiscElement {
        DiscElement::new(vec![0; self.rank()])
    }

    pub fn generator(&self, i: usize) -> DiscElement {
        let mut c = vec![0; self.rank()];
        c[i] = 1 % self.orders[i];
        DiscElement::new(c)
    }

    /// Element from arbitrary integer coordinates, reduced.
    pub fn element(&self, coords: &[i64]) -> Result<DiscElement> {
        if coords.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: coords.len(),
            });
        }
        Ok(DiscElement::new(
            coords
                .iter()
                .zip(&self.orders)
                .map(|(&x, &n)| x.rem_euclid(n as i64) as u64)
                .collect(),
        ))
    }

    pub(crate) fn check(&self, x: &DiscElement) -> Result<()> {
        if x.coords.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: x.coords.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, x: &DiscElement, y: &DiscElement) -> DiscElement {
        DiscElement::new(
            x.coords
                .iter()
                .zip(&y.coords)
                .zip(&self.orders)
                .map(|((&a, &b), &n)| ((a as u128 + b as u128) % n as u128) as u64)
                .collect(),
        )
    }

    pub fn neg(&self, x: &DiscElement) -> DiscElement {
        DiscElement::new(
            x.coords
                .iter()
                .zip(&self.orders)
                .map(|(&a, &n)| (n - a % n) % n)
                .collect(),
        )
    }

    pub fn sub(&self, x: &DiscElement, y: &DiscElement) -> DiscElement {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, k: i64, x: &DiscElement) -> DiscElement {
        DiscElement::new(
            x.coords
                .iter()
                .zip(&self.orders)
                .map(|(&a, &n)| {
                    let k = k.rem_euclid(n as i64) as u128;
                    ((k * a as u128) % n as u128) as u64
                })
                .collect(),
        )
    }

    pub fn order_of(&self, x: &DiscElement) -> u64 {
        x.coords
            .iter()
            .zip(&self.orders)
            .fold(1u64, |acc, (&a, &n)| acc.lcm(&(n / a.gcd(&n))))
    }

    /// Mixed-radix index, last coordinate fastest.
    pub fn index_of(&self, x: &DiscElement) -> u64 {
        x.coords
            .iter()
            .zip(&self.orders)
            .fold(0u64, |acc, (&a, &n)| acc * n + a)
    }

    pub fn element_at(&self, mut idx: u64) -> DiscElement {
        let mut c = vec![0; self.rank()];
        for i in (0..self.rank()).rev() {
            c[i] = idx % self.orders[i];
            idx /= self.orders[i];
        }
        DiscElement::new(c)
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = DiscElement> + '_ {
        (0..self.cardinality()).map(move |i| self.element_at(i))
    }

    // ----- q and b -----

    pub(crate) fn scale(&self) -> i64 {
        self.scale
    }

    /// q(x)·S as an integer in [0, 2S).
    pub(crate) fn q_scaled(&self, x: &DiscElement) -> i64 {
        let s2 = 2 * self.scale as i128;
        let s1 = self.scale as i128;
        let c = &x.coords;
        let mut acc: i128 = 0;
        for i in 0..c.len() {
            let xi = c[i] as i128;
            acc = (acc + ((xi * xi) % s2) * self.q_num[i] as i128) % s2;
            for j in i + 1..c.len() {
                let xixj = (xi * c[j] as i128) % s1;
                acc = (acc + 2 * xixj * self.b_num[i][j] as i128) % s2;
            }
        }
        acc as i64
    }

    /// b(x, y)·S as an integer in [0, S).
    pub(crate) fn b_scaled(&self, x: &DiscElement, y: &DiscElement) -> i64 {
        let s1 = self.scale as i128;
        let mut acc: i128 = 0;
        for (i, &xi) in x.coords.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.coords.iter().enumerate() {
                let p = (xi as i128 * yj as i128) % s1;
                acc = (acc + p * self.b_num[i][j] as i128) % s1;
            }
        }
        acc as i64
    }

    /// q(x) in [0, 2).
    pub fn eval_q(&self, x: &DiscElement) -> Result<BigRational> {
        self.check(x)?;
        Ok(BigRational::new(
            BigInt::from(self.q_scaled(x)),
            BigInt::from(self.scale),
        ))
    }

    /// b(x, y) in [0, 1).
    pub fn eval_b(&self, x: &DiscElement, y: &DiscElement) -> Result<BigRational> {
        self.check(x)?;
        self.check(y)?;
        Ok(BigRational::new(
            BigInt::from(self.b_scaled(x, y)),
            BigInt::from(self.scale),
        ))
    }

    /// Nondegeneracy of b, checked by brute force over A.
    pub fn is_nondegenerate(&self) -> bool {
        let gens: Vec<DiscElement> = (0..self.rank()).map(|i| self.generator(i)).collect();
        self.elements()
            .skip(1)
            .all(|x| gens.iter().any(|g| self.b_scaled(&x, g) != 0))
    }

    // ----- endomorphisms -----

    pub fn identity(&self) -> DiscIsometry {
        self.diagonal_map(&vec![1; self.rank()])
    }

    pub fn minus_identity(&self) -> DiscIsometry {
        self.diagonal_map(&vec![-1; self.rank()])
    }

    pub fn diagonal_map(&self, entries: &[i64]) -> DiscIsometry {
        let r = self.rank();
        let mut m = vec![vec![0u64; r]; r];
        for i in 0..r {
            m[i][i] = entries[i].rem_euclid(self.orders[i] as i64) as u64;
        }
        DiscIsometry { matrix: m }
    }

    /// Reduces an integer matrix into the canonical representative.
    pub fn map_from_rows(&self, rows: &[Vec<i64>]) -> Result<DiscIsometry> {
        let r = self.rank();
        if rows.len() != r || rows.iter().any(|row| row.len() != r) {
            return Err(Error::DimensionMismatch {
                expected: r,
                got: rows.len(),
            });
        }
        Ok(DiscIsometry {
            matrix: rows
                .iter()
                .zip(&self.orders)
                .map(|(row, &n)| row.iter().map(|&x| x.rem_euclid(n as i64) as u64).collect())
                .collect(),
        })
    }

    /// Map sending generator i to `images[i]`.
    pub fn map_from_images(&self, images: &[DiscElement]) -> DiscIsometry {
        let r = self.rank();
        DiscIsometry {
            matrix: (0..r)
                .map(|j| (0..r).map(|i| images[i].coords[j]).collect())
                .collect(),
        }
    }

    pub fn apply(&self, g: &DiscIsometry, x: &DiscElement) -> DiscElement {
        DiscElement::new(
            g.matrix
                .iter()
                .zip(&self.orders)
                .map(|(row, &n)| {
                    let n = n as u128;
                    (row.iter()
                        .zip(&x.coords)
                        .fold(0u128, |acc, (&a, &b)| (acc + a as u128 * b as u128) % n))
                        as u64
                })
                .collect(),
        )
    }

    /// `a ∘ b`.
    pub fn compose(&self, a: &DiscIsometry, b: &DiscIsometry) -> DiscIsometry {
        let images: Vec<DiscElement> = (0..self.rank())
            .map(|i| self.apply(a, &b.column(i)))
            .collect();
        self.map_from_images(&images)
    }

    /// True iff `g` is a well-defined endomorphism: the image of each
    /// generator is killed by that generator's order.
    pub fn is_homomorphism(&self, g: &DiscIsometry) -> bool {
        g.size() == self.rank()
            && (0..self.rank()).all(|i| {
                let col = g.column(i);
                col.coords.len() == self.rank()
                    && col.coords.iter().zip(&self.orders).all(|(&a, &n)| a < n)
                    && self.mul(self.orders[i] as i64, &col) == self.zero()
            })
    }

    pub(crate) fn preserves_form(&self, g: &DiscIsometry) -> bool {
        let cols: Vec<DiscElement> = (0..self.rank()).map(|i| g.column(i)).collect();
        (0..self.rank()).all(|i| {
            self.q_scaled(&cols[i]) == self.q_num[i]
                && (i + 1..self.rank())
                    .all(|j| self.b_scaled(&cols[i], &cols[j]) == self.b_num[i][j])
        })
    }

    pub(crate) fn is_injective(&self, g: &DiscIsometry) -> bool {
        self.elements()
            .skip(1)
            .all(|x| self.apply(g, &x) != self.zero())
    }

    /// True iff the integer matrix defines an automorphism of A preserving q.
    pub fn is_isometry(&self, rows: &[Vec<i64>]) -> bool {
        let Ok(g) = self.map_from_rows(rows) else {
            return false;
        };
        self.is_isometry_map(&g)
    }

    pub fn is_isometry_map(&self, g: &DiscIsometry) -> bool {
        self.is_homomorphism(g) && self.preserves_form(g) && self.is_injective(g)
    }

    /// Inverse of an automorphism, found by preimage search over A.
    pub fn inverse(&self, g: &DiscIsometry) -> Result<DiscIsometry> {
        let mut pre: Vec<Option<DiscElement>> = vec![None; self.rank()];
        let targets: Vec<DiscElement> = (0..self.rank()).map(|i| self.generator(i)).collect();
        for x in self.elements() {
            let y = self.apply(g, &x);
            for (i, t) in targets.iter().enumerate() {
                if pre[i].is_none() && y == *t {
                    pre[i] = Some(x.clone());
                }
            }
            if pre.iter().all(Option::is_some) {
                break;
            }
        }
        let images = pre
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidForm("map is not surjective".into()))?;
        Ok(self.map_from_images(&images))
    }
}

impl fmt::Display for FiniteQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rank() == 0 {
            return write!(f, "trivial group");
        }
        let groups: Vec<String> = self.orders.iter().map(|n| format!("Z/{n}")).collect();
        let qs: Vec<String> = self.q_gen.iter().map(format_rational).collect();
        write!(
            f,
            "{} with q_gen ({}) mod 2",
            groups.join(" × "),
            qs.join(", ")
        )
    }
}

/// q value as a signed representative in (-2, 0] ∪ (0, 2) closest to zero,
/// for display.
pub fn signed_rep_mod2(x: &BigRational) -> BigRational {
    let one = BigRational::one();
    if x > &one {
        x - BigRational::from_integer(BigInt::from(2))
    } else {
        x.clone()
    }
}

/// True iff `a ≡ b` modulo `m`.
pub fn congruent(a: &BigRational, b: &BigRational, m: i64) -> bool {
    reduce_rational(&(a - b), m).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn z2z2() -> FiniteQuadraticForm {
        FiniteQuadraticForm::diagonal(vec![2, 2], vec![frac(-1, 2), frac(-1, 2)]).unwrap()
    }

    fn counterexample() -> FiniteQuadraticForm {
        FiniteQuadraticForm::diagonal(vec![15, 9], vec![frac(-2, 15), frac(-2, 9)]).unwrap()
    }

    #[test]
    fn eval_q_examples() {
        let a = z2z2();
        assert_eq!(a.eval_q(&a.zero()).unwrap(), frac(0, 1));
        let x = a.element(&[1, 1]).unwrap();
        assert!(congruent(&a.eval_q(&x).unwrap(), &frac(-1, 1), 2));
        let c = counterexample();
        let g1 = c.generator(0);
        assert!(congruent(&c.eval_q(&g1).unwrap(), &frac(-2, 15), 2));
        assert!(c.eval_q(&DiscElement::new(vec![1])).is_err());
    }

    #[test]
    fn q_is_canonical_in_zero_two() {
        let c = counterexample();
        assert_eq!(c.q_gen()[0], frac(28, 15));
        assert_eq!(c.q_gen()[1], frac(16, 9));
        assert_eq!(c.pairing()[0][0], frac(13, 15));
    }

    #[test]
    fn rejects_ill_defined_forms() {
        // q(2 g) = 4 · 1/3 is not 0 mod 2
        assert!(FiniteQuadraticForm::diagonal(vec![2], vec![frac(1, 3)]).is_err());
        assert!(FiniteQuadraticForm::diagonal(vec![0], vec![frac(0, 1)]).is_err());
        let asym = FiniteQuadraticForm::from_fractions(
            vec![2, 2],
            &[(1, 2), (1, 2)],
            &[vec![(1, 2), (1, 2)], vec![(0, 1), (1, 2)]],
        );
        assert!(asym.is_err());
    }

    #[test]
    fn counterexample_isometry_and_conjugate() {
        let c = counterexample();
        assert!(c.is_isometry(&[vec![1, 10], vec![6, 2]]));
        let g = c.map_from_rows(&[vec![1, 10], vec![6, 2]]).unwrap();
        assert_eq!(c.compose(&g, &g), c.identity());
        let s = c.diagonal_map(&[1, -1]);
        let conj = conjugate(&c, &g, &s).unwrap();
        assert_eq!(conj, c.map_from_rows(&[vec![1, 5], vec![3, 2]]).unwrap());
    }

    #[test]
    fn shear_is_not_an_isometry() {
        let a = z2z2();
        assert!(!a.is_isometry(&[vec![1, 1], vec![0, 1]]));
        assert!(a.is_isometry(&[vec![0, 1], vec![1, 0]]));
        assert!(a.is_isometry(&[vec![1, 0], vec![0, 1]]));
    }

    #[test]
    fn order_one_generators_are_allowed() {
        let a = FiniteQuadraticForm::diagonal(vec![3, 1], vec![frac(4, 3), frac(0, 1)]).unwrap();
        assert_eq!(a.cardinality(), 3);
        assert_eq!(a.diagonal_map(&[1, -1]), a.identity());
        assert_eq!(a.element(&[4, 7]).unwrap().coords, vec![1, 0]);
    }

    #[test]
    fn orders_and_indices() {
        let c = counterexample();
        assert_eq!(c.cardinality(), 135);
        assert_eq!(c.order_of(&c.element(&[5, 3]).unwrap()), 3);
        assert_eq!(c.order_of(&c.element(&[1, 1]).unwrap()), 45);
        for i in [0, 1, 17, 134] {
            assert_eq!(c.index_of(&c.element_at(i)), i);
        }
    }

    #[test]
    fn json_shape() {
        let c = counterexample();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["orders"], serde_json::json!([15, 9]));
        assert_eq!(v["q_gen"], serde_json::json!(["28/15", "16/9"]));
        assert_eq!(v["pairing"][0][1], serde_json::json!("0"));
        let back: FiniteQuadraticForm = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
        // non-canonical input is accepted and reduced
        let raw =
            r#"{"orders":[15,9],"q_gen":["-2/15","-2/9"],"pairing":[["-2/15","0"],["0","-2/9"]]}"#;
        let parsed: FiniteQuadraticForm = serde_json::from_str(raw).unwrap();
        assert_eq!(parsed, c);
    }
}
