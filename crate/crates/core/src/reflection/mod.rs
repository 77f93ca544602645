//! Reflections in h⊥ and the action they induce on A_{h⊥} for γ = 1.
//!
//! For γ = 1, h⊥ = M ⊕ Zk ⊕ Zℓ with k = e − df (k² = −2d) and ℓ² = −2t, and
//! A_{h⊥} = Z/2d × Z/2t generated by k_* = k/2d and ℓ_* = ℓ/2t.

mod enumerate;
mod oracle;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

pub use enumerate::{enumerate_ramification_classes, enumerate_with_box, Enumeration};
pub use oracle::ExplicitPerp;

use crate::disc_form::{DiscElement, DiscIsometry};
use crate::error::{Error, Result};
use crate::hperp::{disc_group_omega1, PolarizationData, SplitDiscForm};
use crate::lattice::{GramLattice, IntMatrix, LatticeVector};

/// β = a·m + b·k + c·ℓ with m a primitive vector of M of square `msq`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[i64; 4]", into = "[i64; 4]")]
pub struct SymbolicPerpVector {
    pub a: i64,
    pub msq: i64,
    pub b: i64,
    pub c: i64,
}

impl TryFrom<[i64; 4]> for SymbolicPerpVector {
    type Error = Error;

    fn try_from(v: [i64; 4]) -> Result<Self> {
        SymbolicPerpVector::new(v[0], v[1], v[2], v[3])
    }
}

impl From<SymbolicPerpVector> for [i64; 4] {
    fn from(v: SymbolicPerpVector) -> Self {
        [v.a, v.msq, v.b, v.c]
    }
}

impl fmt::Display for SymbolicPerpVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}]", self.a, self.msq, self.b, self.c)
    }
}

impl std::str::FromStr for SymbolicPerpVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .trim_matches(|c| c == '[' || c == ']' || c == '(' || c == ')')
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad integer `{}` in vector", p.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        let v: [i64; 4] = parts
            .try_into()
            .map_err(|_| Error::Parse("expected four integers a,msq,b,c".into()))?;
        SymbolicPerpVector::try_from(v)
    }
}

fn gcd3(a: i128, b: i128, c: i128) -> i128 {
    a.gcd(&b).gcd(&c)
}

fn narrow(x: i128, what: &'static str) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow(what))
}

impl SymbolicPerpVector {
    /// `msq` must be even; it is forced to 0 when a = 0.
    pub fn new(a: i64, msq: i64, b: i64, c: i64) -> Result<Self> {
        if msq % 2 != 0 {
            return Err(Error::InvalidVector(format!("m² = {msq} must be even")));
        }
        Ok(SymbolicPerpVector {
            a,
            msq: if a == 0 { 0 } else { msq },
            b,
            c,
        })
    }

    pub fn neg(&self) -> Self {
        SymbolicPerpVector {
            a: -self.a,
            msq: self.msq,
            b: -self.b,
            c: -self.c,
        }
    }

    /// Sign-normalized: first nonzero of (a, b, c) positive.
    pub fn canonical_sign(&self) -> Self {
        let first = [self.a, self.b, self.c].into_iter().find(|&x| x != 0);
        if first.is_some_and(|x| x < 0) {
            self.neg()
        } else {
            *self
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0 && self.c == 0
    }

    pub fn is_primitive(&self) -> bool {
        gcd3(self.a as i128, self.b as i128, self.c as i128) == 1
    }

    /// β² = a²m² − 2db² − 2tc².
    pub fn square(&self, t: u64, d: u64) -> Result<i64> {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        narrow(
            a * a * self.msq as i128 - 2 * d as i128 * b * b - 2 * t as i128 * c * c,
            "beta square",
        )
    }

    /// div(β) = gcd(a, 2db, 2tc).
    pub fn divisibility(&self, t: u64, d: u64) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        narrow(
            gcd3(a, 2 * d as i128 * b, 2 * t as i128 * c),
            "divisibility",
        )
    }

    /// β·k = −2db.
    pub fn dot_k(&self, d: u64) -> i128 {
        -2 * d as i128 * self.b as i128
    }

    /// β·ℓ = −2tc.
    pub fn dot_l(&self, t: u64) -> i128 {
        -2 * t as i128 * self.c as i128
    }

    /// The class β/div(β) in Z/2d × Z/2t.
    pub fn star(&self, t: u64, d: u64) -> Result<DiscElement> {
        let div = self.divisibility(t, d)? as i128;
        let x = (2 * d as i128 * self.b as i128 / div).rem_euclid(2 * d as i128);
        let y = (2 * t as i128 * self.c as i128 / div).rem_euclid(2 * t as i128);
        Ok(DiscElement::new(vec![x as u64, y as u64]))
    }

    /// β² | 2·div(β).
    pub fn defines_reflection(&self, t: u64, d: u64) -> Result<bool> {
        let sq = self.square(t, d)?;
        if sq == 0 {
            return Err(Error::InvalidVector("β is isotropic".into()));
        }
        let div = self.divisibility(t, d)?;
        Ok((2 * div as i128) % sq as i128 == 0)
    }
}

/// The Galois-group bucket of a reflection's induced action on A_{h⊥}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaloisLabel {
    Id,
    S,
    MinusS,
    MinusId,
    Nontrivial,
}

impl GaloisLabel {
    pub const TRIVIAL: [GaloisLabel; 4] = [
        GaloisLabel::Id,
        GaloisLabel::S,
        GaloisLabel::MinusS,
        GaloisLabel::MinusId,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            GaloisLabel::Id => "id",
            GaloisLabel::S => "s",
            GaloisLabel::MinusS => "minus_s",
            GaloisLabel::MinusId => "minus_id",
            GaloisLabel::Nontrivial => "nontrivial",
        }
    }

    /// Diagonal entries of the matrix for the four trivial labels.
    pub fn diagonal(&self) -> Option<[i64; 2]> {
        match self {
            GaloisLabel::Id => Some([1, 1]),
            GaloisLabel::S => Some([1, -1]),
            GaloisLabel::MinusS => Some([-1, 1]),
            GaloisLabel::MinusId => Some([-1, -1]),
            GaloisLabel::Nontrivial => None,
        }
    }
}

impl fmt::Display for GaloisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReflectionClass {
    pub beta_sq: i64,
    pub div: i64,
    pub beta_star: DiscElement,
    #[serde(rename = "label")]
    pub galois_label: GaloisLabel,
    pub witness: SymbolicPerpVector,
}

fn gamma_one(t: u64, d: u64) -> Result<SplitDiscForm> {
    disc_group_omega1(&PolarizationData::new(t, d, 1, Some(0))?)
}

fn check_reflection(t: u64, d: u64, beta: &SymbolicPerpVector) -> Result<(i64, i64)> {
    if !beta.is_primitive() {
        return Err(Error::InvalidVector(format!("{beta} is not primitive")));
    }
    let sq = beta.square(t, d)?;
    if sq >= 0 {
        return Err(Error::InvalidVector(format!("β² = {sq} is not negative")));
    }
    let div = beta.divisibility(t, d)?;
    if (2 * div) % sq != 0 {
        return Err(Error::NotReflection(format!(
            "β² = {sq} does not divide 2·div(β) = {}",
            2 * div
        )));
    }
    Ok((sq, div))
}

/// The matrix [[1 + 4db²/β², 4dbc/β²], [4tcb/β², 1 + 4tc²/β²]] acting on
/// Z/2d × Z/2t, rows reduced modulo 2d and 2t.
pub fn induced_disc_matrix(t: u64, d: u64, beta: &SymbolicPerpVector) -> Result<DiscIsometry> {
    let (sq, _) = check_reflection(t, d, beta)?;
    let (t, d, b, c, sq) = (
        t as i128,
        d as i128,
        beta.b as i128,
        beta.c as i128,
        sq as i128,
    );
    let exact = |num: i128| -> Result<i128> {
        if num % sq != 0 {
            return Err(Error::NotReflection(
                "induced matrix is not integral".into(),
            ));
        }
        Ok(num / sq)
    };
    let entries = [
        [1 + exact(4 * d * b * b)?, exact(4 * d * b * c)?],
        [exact(4 * t * c * b)?, 1 + exact(4 * t * c * c)?],
    ];
    let moduli = [2 * d, 2 * t];
    Ok(DiscIsometry {
        matrix: (0..2)
            .map(|i| {
                entries[i]
                    .iter()
                    .map(|&x| x.rem_euclid(moduli[i]) as u64)
                    .collect()
            })
            .collect(),
    })
}

/// The label predicted by the numerical criterion, first match wins:
/// id iff β² = −2; s iff β² = −2t and 2td | β·k; minus_s iff β² = −2d and
/// 2td | β·ℓ; minus_id iff β² = −2td, gcd(t, d) = 1 and 2td | gcd(β·k, β·ℓ).
pub fn theorem_label(t: u64, d: u64, beta: &SymbolicPerpVector) -> Result<GaloisLabel> {
    let sq = beta.square(t, d)? as i128;
    let (ti, di) = (t as i128, d as i128);
    let two_td = 2 * ti * di;
    let bk = beta.dot_k(d);
    let bl = beta.dot_l(t);
    Ok(if sq == -2 {
        GaloisLabel::Id
    } else if sq == -2 * ti && bk % two_td == 0 {
        GaloisLabel::S
    } else if sq == -2 * di && bl % two_td == 0 {
        GaloisLabel::MinusS
    } else if sq == -two_td && t.gcd(&d) == 1 && bk.gcd(&bl) % two_td == 0 {
        GaloisLabel::MinusId
    } else {
        GaloisLabel::Nontrivial
    })
}

/// Which of id, s, −s, −id (in that order) a matrix equals, if any.
pub fn matrix_bucket(split: &SplitDiscForm, m: &DiscIsometry) -> Option<GaloisLabel> {
    GaloisLabel::TRIVIAL.into_iter().find(|l| {
        split
            .form()
            .diagonal_map(&l.diagonal().expect("trivial label"))
            == *m
    })
}

/// True iff `label` is consistent with the induced matrix: a trivial label
/// must equal the matrix, and `nontrivial` must avoid all four.
pub fn label_matches_matrix(split: &SplitDiscForm, label: GaloisLabel, m: &DiscIsometry) -> bool {
    match label.diagonal() {
        Some(diag) => split.form().diagonal_map(&diag) == *m,
        None => matrix_bucket(split, m).is_none(),
    }
}

pub fn classify_reflection(t: u64, d: u64, beta: &SymbolicPerpVector) -> Result<ReflectionClass> {
    let (sq, div) = check_reflection(t, d, beta)?;
    let split = gamma_one(t, d)?;
    let label = theorem_label(t, d, beta)?;
    let m = induced_disc_matrix(t, d, beta)?;
    if !label_matches_matrix(&split, label, &m) {
        return Err(Error::Unsupported(format!(
            "numerical label {label} disagrees with induced matrix {m} for {beta}"
        )));
    }
    Ok(ReflectionClass {
        beta_sq: sq,
        div,
        beta_star: beta.star(t, d)?,
        galois_label: label,
        witness: *beta,
    })
}

/// The orbit representative of x under {±id, ±s}: the least of (x, y),
/// (x, −y), (−x, y), (−x, −y).
pub fn canonical_star(t: u64, d: u64, x: &DiscElement) -> DiscElement {
    let (n1, n2) = (2 * d, 2 * t);
    let neg = |v: u64, n: u64| (n - v % n) % n;
    let (a, b) = (x.coords[0], x.coords[1]);
    [
        (a, b),
        (a, neg(b, n2)),
        (neg(a, n1), b),
        (neg(a, n1), neg(b, n2)),
    ]
    .into_iter()
    .min()
    .map(|(a, b)| DiscElement::new(vec![a, b]))
    .expect("four candidates")
}

// ----- reflections in an explicit lattice -----

fn require_reflection_data(beta: &LatticeVector<'_>) -> Result<(BigInt, BigInt)> {
    if !beta.is_primitive()? {
        return Err(Error::InvalidVector("β is not primitive".into()));
    }
    let sq = beta.square();
    if sq.is_zero() {
        return Err(Error::InvalidVector("β is isotropic".into()));
    }
    Ok((sq, beta.divisibility()?))
}

/// β² | 2·div(β) for a primitive, non-isotropic β.
pub fn defines_reflection(beta: &LatticeVector<'_>) -> Result<bool> {
    let (sq, div) = require_reflection_data(beta)?;
    Ok((BigInt::from(2) * div % sq.abs()).is_zero())
}

/// r_β(x) = x − (2 x·β / β²) β.
pub fn reflect<'a>(beta: &LatticeVector<'a>, x: &LatticeVector<'a>) -> Result<LatticeVector<'a>> {
    let sq = beta.square();
    if sq.is_zero() {
        return Err(Error::InvalidVector("β is isotropic".into()));
    }
    let num = BigInt::from(2) * x.pair(beta)?;
    if !(&num % &sq).is_zero() {
        return Err(Error::NotReflection("r_β(x) is not integral".into()));
    }
    x.add(&beta.scale(&-(num / sq)))
}

/// The matrix of r_β on lattice coordinates (column i is r_β(e_i)).
pub fn reflection_matrix(lattice: &GramLattice, beta: &LatticeVector<'_>) -> Result<IntMatrix> {
    if !defines_reflection(beta)? {
        return Err(Error::NotReflection("β² does not divide 2·div(β)".into()));
    }
    let n = lattice.rank();
    let cols = (0..n)
        .map(|i| reflect(beta, &lattice.basis_vector(i)).map(LatticeVector::into_coords))
        .collect::<Result<Vec<_>>>()?;
    let rows = (0..n)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    Ok(IntMatrix::from_big_rows(rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a: i64, msq: i64, b: i64, c: i64) -> SymbolicPerpVector {
        SymbolicPerpVector::new(a, msq, b, c).unwrap()
    }

    #[test]
    fn symbolic_arithmetic() {
        let beta = v(0, 0, 1, 1);
        assert_eq!(beta.square(1, 1).unwrap(), -4);
        assert_eq!(beta.divisibility(1, 1).unwrap(), 2);
        assert_eq!(beta.star(1, 1).unwrap().coords, vec![1, 1]);
        assert!(beta.defines_reflection(1, 1).unwrap());
        let beta = v(0, 0, 1, 2);
        assert_eq!(beta.square(1, 2).unwrap(), -12);
        assert_eq!(beta.divisibility(1, 2).unwrap(), 4);
        assert!(!beta.defines_reflection(1, 2).unwrap());
        assert_eq!(v(0, 8, 1, 0).msq, 0);
        assert!(SymbolicPerpVector::new(1, 3, 0, 0).is_err());
        assert!("1,2,3".parse::<SymbolicPerpVector>().is_err());
        assert_eq!(
            "1, -2, 0, 3".parse::<SymbolicPerpVector>().unwrap(),
            v(1, -2, 0, 3)
        );
    }

    #[test]
    fn induced_matrix_examples() {
        let split = gamma_one(1, 1).unwrap();
        let m = induced_disc_matrix(1, 1, &v(0, 0, 1, 1)).unwrap();
        assert_eq!(
            m,
            split
                .form()
                .map_from_rows(&[vec![0, 1], vec![1, 0]])
                .unwrap()
        );
        let m = induced_disc_matrix(1, 2, &v(0, 0, 1, 0)).unwrap();
        assert_eq!(m.matrix, vec![vec![3, 0], vec![0, 1]]);
        let m = induced_disc_matrix(3, 2, &v(1, -2, 0, 0)).unwrap();
        assert_eq!(m, gamma_one(3, 2).unwrap().form().identity());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_reflection(1, 1, &v(0, 0, 1, 0))
                .unwrap()
                .galois_label,
            GaloisLabel::Id
        );
        let cls = classify_reflection(1, 1, &v(0, 0, 1, 1)).unwrap();
        assert_eq!(cls.galois_label, GaloisLabel::Nontrivial);
        assert_eq!((cls.beta_sq, cls.div), (-4, 2));
        assert_eq!(
            classify_reflection(1, 2, &v(0, 0, 1, 0))
                .unwrap()
                .galois_label,
            GaloisLabel::MinusS
        );
        let err = classify_reflection(1, 2, &v(0, 0, 1, 2)).unwrap_err();
        assert_eq!(err.tag(), "not_a_reflection");
        assert!(classify_reflection(1, 1, &v(0, 0, 2, 2)).is_err());
    }

    #[test]
    fn class_json_shape() {
        let cls = classify_reflection(1, 1, &v(0, 0, 1, 1)).unwrap();
        let s = serde_json::to_string(&cls).unwrap();
        assert_eq!(
            s,
            r#"{"beta_sq":-4,"div":2,"beta_star":[1,1],"label":"nontrivial","witness":[0,0,1,1]}"#
        );
        let back: ReflectionClass = serde_json::from_str(&s).unwrap();
        assert_eq!(back, cls);
    }

    #[test]
    fn lattice_reflections() {
        let l = GramLattice::from_rows(&[vec![-2, 0], vec![0, -2]], "Z(-2)+Z(-2)").unwrap();
        let beta = l.vector_i64(&[1, 1]).unwrap();
        assert!(defines_reflection(&beta).unwrap());
        assert_eq!(reflect(&beta, &beta).unwrap(), beta.neg());
        let orth = l.vector_i64(&[1, -1]).unwrap();
        assert_eq!(reflect(&beta, &orth).unwrap(), orth);
        let p = reflection_matrix(&l, &beta).unwrap();
        assert!(l.is_isometry(&p));
        assert_eq!(p.mul(&p), IntMatrix::identity(2));

        let l = GramLattice::from_rows(&[vec![-4, 0], vec![0, -2]], "Z(-4)+Z(-2)").unwrap();
        let beta = l.vector_i64(&[1, 2]).unwrap();
        assert!(!defines_reflection(&beta).unwrap());
        assert!(defines_reflection(&l.vector_i64(&[2, 2]).unwrap()).is_err());
    }

    #[test]
    fn canonical_star_orbit() {
        let x = DiscElement::new(vec![3, 1]);
        let c = canonical_star(2, 2, &x);
        assert_eq!(c.coords, vec![1, 1]);
        for y in [[1, 3], [3, 3], [1, 1]] {
            assert_eq!(canonical_star(2, 2, &DiscElement::new(y.to_vec())), c);
        }
    }
}
