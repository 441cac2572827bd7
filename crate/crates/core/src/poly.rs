//! Dense univariate polynomials over a cyclotomic field.
//!
//! This carries exactly what the intersection machinery needs: Euclidean
//! division, monic gcds, the half-extended gcd used for quotient-ring
//! inverses, Yun's squarefree decomposition (characteristic 0), and
//! composition modulo a fixed modulus.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactfield::{CyclotomicElement, CyclotomicField};

/// Trimmed dense coefficients, constant term first. The zero polynomial has
/// an empty coefficient vector; the field handle keeps context available.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: CyclotomicField,
    coeffs: Vec<CyclotomicElement>,
}

impl Poly {
    pub fn new(field: CyclotomicField, mut coeffs: Vec<CyclotomicElement>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: &CyclotomicField) -> Self {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: CyclotomicElement) -> Self {
        let field = c.field().clone();
        Poly::new(field, vec![c])
    }

    pub fn one(field: &CyclotomicField) -> Self {
        Poly::constant(field.one())
    }

    /// The monomial x.
    pub fn x(field: &CyclotomicField) -> Self {
        Poly::new(field.clone(), vec![field.zero(), field.one()])
    }

    /// x - a
    pub fn x_minus(a: &CyclotomicElement) -> Self {
        Poly::new(a.field().clone(), vec![-a, a.field().one()])
    }

    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn coeffs(&self) -> &[CyclotomicElement] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> CyclotomicElement {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, or None for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> CyclotomicElement {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k);
            let b = other.coeffs.get(k);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::new(self.field.clone(), out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(self.field.clone(), out)
    }

    pub fn mul_scalar(&self, c: &CyclotomicElement) -> Self {
        if c.is_zero() {
            return Poly::zero(&self.field);
        }
        Poly::new(
            self.field.clone(),
            self.coeffs.iter().map(|a| a * c).collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, den: &Self) -> (Self, Self) {
        assert!(!den.is_zero(), "polynomial division by zero");
        let dd = den.deg().unwrap();
        if self.coeffs.len() <= dd {
            return (Poly::zero(&self.field), self.clone());
        }
        let lead_inv = den.lc().inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dj) in den.coeffs.iter().enumerate() {
                    rem[k + j] = &rem[k + j] - &(dj * &c);
                }
            }
            quot[k] = c;
        }
        (
            Poly::new(self.field.clone(), quot),
            Poly::new(self.field.clone(), rem),
        )
    }

    pub fn rem(&self, den: &Self) -> Self {
        self.div_rem(den).1
    }

    /// Division known to be exact; panics if a remainder appears.
    pub fn exact_div(&self, den: &Self) -> Self {
        let (q, r) = self.div_rem(den);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.lc();
        if lc.is_one() {
            return self.clone();
        }
        self.mul_scalar(&lc.inv().expect("nonzero leading coefficient"))
    }

    /// Divides out the rational content: the result has integer coordinate
    /// vectors with no common integer factor. This keeps pseudo-remainder
    /// sequences small without any field inversions.
    pub fn strip_content(&self) -> Self {
        use num_bigint::BigInt;
        use num_traits::{One, Signed, Zero};
        if self.is_zero() {
            return self.clone();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            for r in c.coords() {
                if r.numer().is_zero() {
                    continue;
                }
                num_gcd = num_integer::Integer::gcd(&num_gcd, &r.numer().abs());
                den_lcm = num_integer::Integer::lcm(&den_lcm, r.denom());
            }
        }
        if num_gcd.is_zero() {
            return self.clone();
        }
        let scale = crate::exactfield::Rat::new(den_lcm, num_gcd);
        Poly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c.scale(&scale)).collect(),
        }
    }

    /// Division-free pseudo-remainder: lc(b)^(da-db+1) a mod b up to the
    /// exact power actually needed.
    fn prem(&self, b: &Self) -> Self {
        let db = b.deg().expect("nonzero divisor");
        let lb = b.lc();
        let mut r = self.clone();
        while r.deg().map_or(false, |dr| dr >= db) {
            let dr = r.deg().unwrap();
            let lr = r.lc();
            // r <- lc(b) r - lc(r) x^(dr-db) b
            let mut scaled: Vec<CyclotomicElement> =
                r.coeffs.iter().map(|c| c * &lb).collect();
            for (k, bc) in b.coeffs.iter().enumerate() {
                let t = bc * &lr;
                scaled[k + dr - db] = &scaled[k + dr - db] - &t;
            }
            r = Poly::new(self.field.clone(), scaled);
            debug_assert!(r.deg().map_or(true, |d| d < dr));
        }
        r
    }

    /// Monic gcd via a content-stripped pseudo-remainder sequence; the only
    /// field inversion is the final normalization.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.strip_content();
        let mut b = other.strip_content();
        while !b.is_zero() {
            if a.deg() < b.deg() {
                std::mem::swap(&mut a, &mut b);
                continue;
            }
            let r = a.prem(&b).strip_content();
            a = std::mem::replace(&mut b, r);
        }
        a.monic()
    }

    /// Half-extended gcd: returns monic g = gcd(self, m) and u with
    /// u * self = g (mod m).
    pub fn half_ext_gcd(&self, m: &Self) -> (Self, Self) {
        let mut r0 = self.clone();
        let mut r1 = m.clone();
        let mut u0 = Poly::one(&self.field);
        let mut u1 = Poly::zero(&self.field);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let nu = u0.sub(&q.mul(&u1));
            r0 = std::mem::replace(&mut r1, r);
            u0 = std::mem::replace(&mut u1, nu);
        }
        if r0.is_zero() {
            return (r0, u0);
        }
        let scale = r0.lc().inv().expect("nonzero gcd leading coefficient");
        (r0.mul_scalar(&scale), u0.mul_scalar(&scale))
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero(&self.field);
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&crate::exactfield::rat_int(k as i64)))
            .collect();
        Poly::new(self.field.clone(), out)
    }

    pub fn eval(&self, x: &CyclotomicElement) -> CyclotomicElement {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// self(r) reduced modulo m, by Horner in the quotient ring.
    pub fn compose_mod(&self, r: &Self, m: &Self) -> Self {
        let mut acc = Poly::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(r).add(&Poly::constant(c.clone())).rem(m);
        }
        acc
    }

    /// Yun's squarefree decomposition over a characteristic-0 field:
    /// self = lc * prod factor^multiplicity with the factors monic,
    /// squarefree and pairwise coprime. Requires a nonzero input.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(Poly, u32)>> {
        if self.is_zero() {
            return Err(Error::InvalidArgument(
                "squarefree decomposition of the zero polynomial".into(),
            ));
        }
        let f = self.monic();
        if f.is_constant() {
            return Ok(Vec::new());
        }
        let fp = f.derivative();
        let g = f.gcd(&fp);
        let mut out = Vec::new();
        if g.is_constant() {
            out.push((f, 1));
            return Ok(out);
        }
        let mut c = f.exact_div(&g);
        let mut d = fp.exact_div(&g).sub(&c.derivative());
        let mut i = 1u32;
        while c.deg().unwrap_or(0) > 0 {
            let a = c.gcd(&d);
            if a.deg().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            c = c.exact_div(&a);
            d = d.exact_div(&a).sub(&c.derivative());
            i += 1;
        }
        Ok(out)
    }

    /// The product of the squarefree factors (the radical up to a unit).
    pub fn squarefree_part(&self) -> Result<Poly> {
        let mut acc = Poly::one(&self.field);
        for (f, _) in self.squarefree_decomposition()? {
            acc = acc.mul(&f);
        }
        Ok(acc)
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Deterministic total order for canonical sorting: conductor, then degree,
/// then coefficients from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.field
            .conductor()
            .cmp(&other.field.conductor())
            .then_with(|| self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| {
                for (a, b) in self.coeffs.iter().rev().zip(other.coeffs.iter().rev()) {
                    let c = a.cmp(b);
                    if c != std::cmp::Ordering::Equal {
                        return c;
                    }
                }
                std::cmp::Ordering::Equal
            })
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "({c})")?;
            } else if k == 1 {
                write!(f, "({c})*x")?;
            } else {
                write!(f, "({c})*x^{k}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rat_int;

    fn qq() -> CyclotomicField {
        CyclotomicField::rationals()
    }

    fn qpoly(coeffs: &[i64]) -> Poly {
        let f = qq();
        Poly::new(f.clone(), coeffs.iter().map(|&c| f.int(c)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (x^2 - 1) = (x - 1)(x + 1)
        let f = qpoly(&[-1, 0, 1]);
        let g = qpoly(&[-1, 1]);
        let (q, r) = f.div_rem(&g);
        assert!(r.is_zero());
        assert_eq!(q, qpoly(&[1, 1]));
        assert_eq!(f.gcd(&qpoly(&[1, 1])), qpoly(&[1, 1]));
    }

    #[test]
    fn half_extended_gcd_gives_inverses() {
        // invert x + 2 modulo x^2 + 1 over Q
        let a = qpoly(&[2, 1]);
        let m = qpoly(&[1, 0, 1]);
        let (g, u) = a.half_ext_gcd(&m);
        assert_eq!(g, qpoly(&[1]));
        assert_eq!(u.mul(&a).rem(&m), qpoly(&[1]));
    }

    #[test]
    fn yun_on_repeated_quadratic() {
        // (x^2 + x + 1)^2: one squarefree factor with multiplicity 2
        let base = qpoly(&[1, 1, 1]);
        let f = base.mul(&base);
        let dec = f.squarefree_decomposition().unwrap();
        assert_eq!(dec, vec![(base, 2)]);
    }

    #[test]
    fn yun_on_pure_power() {
        let f = qpoly(&[0, 0, 0, 0, 1]); // x^4
        let dec = f.squarefree_decomposition().unwrap();
        assert_eq!(dec, vec![(qpoly(&[0, 1]), 4)]);
    }

    #[test]
    fn yun_on_distinct_linears() {
        // x(x-1)(x+1)(x-2)
        let f = qpoly(&[0, 1])
            .mul(&qpoly(&[-1, 1]))
            .mul(&qpoly(&[1, 1]))
            .mul(&qpoly(&[-2, 1]));
        let dec = f.squarefree_decomposition().unwrap();
        assert_eq!(dec.len(), 1);
        assert_eq!(dec[0].1, 1);
        assert_eq!(dec[0].0.deg(), Some(4));
    }

    #[test]
    fn yun_mixed_multiplicities() {
        // x^1 (x-1)^2 (x+2)^3
        let f = qpoly(&[0, 1])
            .mul(&qpoly(&[-1, 1]).pow(2))
            .mul(&qpoly(&[2, 1]).pow(3));
        let dec = f.squarefree_decomposition().unwrap();
        assert_eq!(
            dec,
            vec![
                (qpoly(&[0, 1]), 1),
                (qpoly(&[-1, 1]), 2),
                (qpoly(&[2, 1]), 3)
            ]
        );
        // reconstruct
        let mut acc = Poly::one(&qq());
        for (p, e) in &dec {
            acc = acc.mul(&p.pow(*e));
        }
        assert_eq!(acc, f.monic());
    }

    #[test]
    fn compose_mod_matches_direct_substitution() {
        let f = qpoly(&[1, 2, 3]); // 3x^2 + 2x + 1
        let r = qpoly(&[1, 1]); // x + 1
        let m = qpoly(&[0, 0, 0, 1]); // x^3
        let direct = f
            .mul_scalar(&qq().one())
            .coeffs()
            .iter()
            .enumerate()
            .fold(Poly::zero(&qq()), |acc, (k, c)| {
                acc.add(&r.pow(k as u32).mul_scalar(c))
            })
            .rem(&m);
        assert_eq!(f.compose_mod(&r, &m), direct);
    }

    #[test]
    fn derivative_over_extension_field() {
        let f8 = CyclotomicField::new(8);
        let w = f8.zeta();
        // f = w x^2: f' = 2w x
        let f = Poly::new(f8.clone(), vec![f8.zero(), f8.zero(), w.clone()]);
        let expect = Poly::new(f8.clone(), vec![f8.zero(), w.scale(&rat_int(2))]);
        assert_eq!(f.derivative(), expect);
    }
}
