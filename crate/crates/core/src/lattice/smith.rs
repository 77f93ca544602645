//! Smith normal form over the integers with explicit transforms.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;

/// `u · a · v = d` with `u`, `v` unimodular and `d` diagonal, the nonzero
/// diagonal entries positive and each dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// Nonzero diagonal entries of `d`, in order.
    pub elementary_divisors: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.elementary_divisors.len()
    }

    /// Columns of `v` spanning the integer kernel of the original matrix.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        (self.rank()..self.v.cols())
            .map(|j| self.v.column(j))
            .collect()
    }

    /// The elementary divisors as `u64`, when they all fit.
    pub fn divisors_u64(&self) -> Option<Vec<u64>> {
        use num_traits::ToPrimitive;
        self.elementary_divisors
            .iter()
            .map(ToPrimitive::to_u64)
            .collect()
    }
}

/// Serializable view used in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithSummary {
    pub elementary_divisors: Vec<String>,
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let rows = a.rows();
    let cols = a.cols();
    let mut m = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut rank = 0;

    'outer: for k in 0..rows.min(cols) {
        loop {
            // smallest nonzero |entry| in the trailing block, first in row-major order
            let mut pivot: Option<(usize, usize, BigInt)> = None;
            for i in k..rows {
                for j in k..cols {
                    let x = m.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    let ax = x.abs();
                    if pivot.as_ref().is_none_or(|(_, _, best)| ax < *best) {
                        pivot = Some((i, j, ax));
                    }
                }
            }
            let Some((pi, pj, _)) = pivot else {
                break 'outer;
            };
            m.swap_rows(k, pi);
            u.swap_rows(k, pi);
            m.swap_cols(k, pj);
            v.swap_cols(k, pj);

            let mut clean = true;
            for i in k + 1..rows {
                let q = m.get(i, k) / m.get(k, k);
                if !q.is_zero() {
                    let nq = -q;
                    m.add_row_multiple(i, k, &nq);
                    u.add_row_multiple(i, k, &nq);
                }
                if !m.get(i, k).is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..cols {
                let q = m.get(k, j) / m.get(k, k);
                if !q.is_zero() {
                    let nq = -q;
                    m.add_col_multiple(j, k, &nq);
                    v.add_col_multiple(j, k, &nq);
                }
                if !m.get(k, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }

            let p = m.get(k, k).clone();
            let offender =
                (k + 1..rows).find(|&i| (k + 1..cols).any(|j| !(m.get(i, j) % &p).is_zero()));
            if let Some(i) = offender {
                let one = BigInt::one();
                m.add_row_multiple(k, i, &one);
                u.add_row_multiple(k, i, &one);
                continue;
            }
            break;
        }
        if m.get(k, k).is_negative() {
            m.negate_row(k);
            u.negate_row(k);
        }
        rank = k + 1;
    }

    let elementary_divisors = (0..rank).map(|i| m.get(i, i).clone()).collect();
    SmithDecomposition {
        u,
        d: m,
        v,
        elementary_divisors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_identity(a: &IntMatrix) -> SmithDecomposition {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in s.elementary_divisors.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        s
    }

    #[test]
    fn hyperbolic_plane_is_unimodular() {
        let s = check_identity(&IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]));
        assert_eq!(
            s.elementary_divisors,
            vec![BigInt::from(1), BigInt::from(1)]
        );
    }

    #[test]
    fn counterexample_block() {
        let s = check_identity(&IntMatrix::from_rows(&[vec![-12, 9], vec![9, -18]]));
        assert_eq!(
            s.elementary_divisors,
            vec![BigInt::from(3), BigInt::from(45)]
        );
    }

    #[test]
    fn rank_one_minus_two() {
        let s = check_identity(&IntMatrix::from_rows(&[vec![-2]]));
        assert_eq!(s.elementary_divisors, vec![BigInt::from(2)]);
    }

    #[test]
    fn diagonal_non_chain_is_repaired() {
        let s = check_identity(&IntMatrix::from_rows(&[vec![4, 0], vec![0, 6]]));
        assert_eq!(
            s.elementary_divisors,
            vec![BigInt::from(2), BigInt::from(12)]
        );
    }

    #[test]
    fn rectangular_kernel() {
        let a = IntMatrix::from_rows(&[vec![2, 4, 6]]);
        let s = check_identity(&a);
        assert_eq!(s.elementary_divisors, vec![BigInt::from(2)]);
        let ker = s.kernel_basis();
        assert_eq!(ker.len(), 2);
        for k in ker {
            assert!(a.mul_vec(&k)[0].is_zero());
        }
    }
}
