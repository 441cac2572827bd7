//! Exact linear algebra: fraction-free (Bareiss) determinants over any
//! integral domain with exact division, and deterministic reduced-echelon
//! kernel bases over a cyclotomic field.

use crate::exactfield::CyclotomicElement;
use crate::poly::Poly;

/// The operations Bareiss elimination needs. `exact_div` may assume the
/// division is exact (guaranteed by the Sylvester identity) and panics
/// otherwise.
pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn exact_div(&self, o: &Self) -> Self;
}

impl Ring for CyclotomicElement {
    fn is_zero(&self) -> bool {
        CyclotomicElement::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, o: &Self) -> Self {
        self * &o.inv().expect("division by zero in field")
    }
}

impl Ring for Poly {
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Poly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Poly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Poly::mul(self, o)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn exact_div(&self, o: &Self) -> Self {
        Poly::exact_div(self, o)
    }
}

/// Fraction-free determinant of a square matrix (Bareiss).
pub fn det<R: Ring>(mut m: Vec<Vec<R>>) -> R {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n), "square matrix");
    let zero = m[0][0].sub(&m[0][0]);
    let mut sign_flip = false;
    let mut prev: Option<R> = None;
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return zero;
            };
            m.swap(k, swap);
            sign_flip = !sign_flip;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = match &prev {
                    Some(p) => num.exact_div(p),
                    None => num,
                };
            }
            m[i][k] = zero.clone();
        }
        if k + 1 < n {
            prev = Some(m[k][k].clone());
        }
    }
    let d = m[n - 1][n - 1].clone();
    if sign_flip {
        d.neg()
    } else {
        d
    }
}

/// Result of a fraction-free elimination over a field: the rank, the pivot
/// columns, and the reduced row echelon form.
pub struct Echelon {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub rref: Vec<Vec<CyclotomicElement>>,
}

/// Fraction-free forward elimination followed by normalization to reduced
/// row echelon form. Columns are processed left to right, so the result is
/// deterministic for a fixed row order.
pub fn echelonize(mut m: Vec<Vec<CyclotomicElement>>, ncols: usize) -> Echelon {
    let nrows = m.len();
    debug_assert!(m.iter().all(|r| r.len() == ncols));
    let mut pivots = Vec::new();
    let mut row = 0usize;
    let mut prev: Option<CyclotomicElement> = None;
    for col in 0..ncols {
        if row == nrows {
            break;
        }
        let Some(pr) = (row..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        for i in (row + 1)..nrows {
            for j in (col + 1)..ncols {
                let num = &(&m[row][col] * &m[i][j]) - &(&m[i][col] * &m[row][j]);
                m[i][j] = match &prev {
                    Some(p) => &num * &p.inv().expect("nonzero pivot"),
                    None => num,
                };
            }
            let z = &m[i][col] - &m[i][col];
            m[i][col] = z;
        }
        prev = Some(m[row][col].clone());
        pivots.push(col);
        row += 1;
    }
    let rank = pivots.len();

    // normalize pivot rows and clear entries above the pivots
    for (r, &pc) in pivots.iter().enumerate() {
        let inv = m[r][pc].inv().expect("nonzero pivot");
        for j in pc..ncols {
            m[r][j] = &m[r][j] * &inv;
        }
    }
    for (r, &pc) in pivots.iter().enumerate().rev() {
        for above in 0..r {
            if m[above][pc].is_zero() {
                continue;
            }
            let factor = m[above][pc].clone();
            for j in pc..ncols {
                let t = &factor * &m[r][j];
                m[above][j] = &m[above][j] - &t;
            }
        }
    }
    m.truncate(rank);
    Echelon {
        rank,
        pivots,
        rref: m,
    }
}

/// Deterministic kernel basis of a matrix over a field: one basis vector per
/// free column (in ascending column order), each with a 1 in its free slot.
pub fn kernel_basis(m: Vec<Vec<CyclotomicElement>>, ncols: usize) -> Vec<Vec<CyclotomicElement>> {
    if m.is_empty() {
        return Vec::new();
    }
    let zero = m[0][0].field().zero();
    let one = m[0][0].field().one();
    let ech = echelonize(m, ncols);
    let pivot_set: std::collections::HashSet<usize> = ech.pivots.iter().copied().collect();
    let mut basis = Vec::with_capacity(ncols - ech.rank);
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![zero.clone(); ncols];
        v[free] = one.clone();
        for (r, &pc) in ech.pivots.iter().enumerate() {
            if pc < free {
                v[pc] = -&ech.rref[r][free];
            }
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::CyclotomicField;

    fn qmat(rows: &[&[i64]]) -> Vec<Vec<CyclotomicElement>> {
        let f = CyclotomicField::rationals();
        rows.iter()
            .map(|r| r.iter().map(|&c| f.int(c)).collect())
            .collect()
    }

    #[test]
    fn determinant_small() {
        assert_eq!(det(qmat(&[&[2]]))
            .as_rat()
            .unwrap()
            .to_integer()
            .to_string(), "2");
        let d = det(qmat(&[&[1, 2], &[3, 4]]));
        assert_eq!(d, CyclotomicField::rationals().int(-2));
        let d3 = det(qmat(&[&[2, 0, 1], &[1, 1, 0], &[0, 3, 1]]));
        assert_eq!(d3, CyclotomicField::rationals().int(5));
        let singular = det(qmat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 0]]));
        assert!(singular.is_zero());
    }

    #[test]
    fn determinant_with_row_swap() {
        let d = det(qmat(&[&[0, 1], &[1, 0]]));
        assert_eq!(d, CyclotomicField::rationals().int(-1));
    }

    #[test]
    fn kernel_of_rank_deficient_matrix() {
        // x + y + z = 0 has a 2-dimensional kernel
        let basis = kernel_basis(qmat(&[&[1, 1, 1]]), 3);
        assert_eq!(basis.len(), 2);
        let f = CyclotomicField::rationals();
        for v in &basis {
            let s = v.iter().fold(f.zero(), |acc, c| &acc + c);
            assert!(s.is_zero());
        }
    }

    #[test]
    fn kernel_is_exact_annihilator() {
        let m = qmat(&[&[1, 2, 3, 4], &[0, 1, 1, 1], &[1, 3, 4, 5]]);
        let basis = kernel_basis(m.clone(), 4);
        assert_eq!(basis.len(), 2); // rank 2
        let f = CyclotomicField::rationals();
        for v in &basis {
            for row in &m {
                let dot = row
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| &acc + &(a * b));
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn full_rank_kernel_is_empty() {
        let basis = kernel_basis(qmat(&[&[1, 0], &[0, 1]]), 2);
        assert!(basis.is_empty());
    }

    #[test]
    fn polynomial_determinant_sylvester_style() {
        // resultant of (x^2 - 1) and (x - 2) via the 3x3 Sylvester matrix
        // equals (2^2 - 1) = 3
        let q = CyclotomicField::rationals();
        let p = |coeffs: &[i64]| {
            Poly::new(q.clone(), coeffs.iter().map(|&c| q.int(c)).collect())
        };
        let z = p(&[0]);
        let m = vec![
            vec![p(&[-1]), p(&[0]), p(&[1])],
            vec![p(&[-2]), p(&[1]), z.clone()],
            vec![z.clone(), p(&[-2]), p(&[1])],
        ];
        let d = det(m);
        assert_eq!(d, p(&[3]));
    }
}
