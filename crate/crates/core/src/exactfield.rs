//! Exact arithmetic in Q and in the cyclotomic fields Q(zeta_n).
//!
//! A field is represented as Q[t]/Phi_n(t) and an element as the dense
//! vector of its phi(n) rational coordinates over the power basis
//! 1, zeta, ..., zeta^(phi(n)-1). The rationals are the conductor-1 field.
//! Everything is immutable and uses arbitrary-precision integers; there is
//! no floating point in this module.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// Shorthand for a rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rat {
    Rat::from_integer(BigInt::from(num))
}

/// Parses "p/q" or "p" with arbitrary-precision integers.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::DataError(format!("bad rational `{s}`")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::DataError(format!("bad rational `{s}`")))?;
    if den.is_zero() {
        return Err(Error::DataError(format!("zero denominator in `{s}`")));
    }
    Ok(Rat::new(num, den))
}

pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back to a quotient of lossy conversions for huge values
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

// -- integer polynomial helpers for Phi_n ----------------------------------

fn int_poly_trim(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

/// Exact division of integer polynomials; the caller guarantees divisibility.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    let lead = den.last().unwrap().clone();
    assert!(rem.len() > dd, "division underflow");
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dd] / &lead;
        if !c.is_zero() {
            for (j, dj) in den.iter().enumerate() {
                let t = dj * &c;
                rem[k + j] -= t;
            }
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact division");
    int_poly_trim(&mut quot);
    quot
}

/// The n-th cyclotomic polynomial, ascending coefficients, monic of degree
/// phi(n). Computed as (t^n - 1) divided by Phi_d for the proper divisors d.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1);
    if n == 1 {
        return vec![BigInt::from(-1), BigInt::from(1)];
    }
    let mut acc = vec![BigInt::zero(); n as usize + 1];
    acc[0] = BigInt::from(-1);
    acc[n as usize] = BigInt::from(1);
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            acc = int_poly_div_exact(&acc, &phi_d);
        }
    }
    acc
}

// -- rational polynomial helpers (used only for inversion mod Phi_n) -------

fn rpoly_trim(p: &mut Vec<Rat>) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn rpoly_div_rem(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem = num.to_vec();
    rpoly_trim(&mut rem);
    let dd = den.len() - 1;
    let lead = den.last().unwrap();
    if rem.len() <= dd {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rat::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dd] / lead;
        if !c.is_zero() {
            for (j, dj) in den.iter().enumerate() {
                let t = dj * &c;
                rem[k + j] -= t;
            }
        }
        quot[k] = c;
    }
    rpoly_trim(&mut rem);
    rpoly_trim(&mut quot);
    (quot, rem)
}

fn rpoly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn rpoly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), Rat::zero());
    }
    for (j, bj) in b.iter().enumerate() {
        out[j] -= bj;
    }
    rpoly_trim(&mut out);
    out
}

// -- the field ---------------------------------------------------------------

struct FieldInner {
    conductor: u32,
    degree: usize,
    modulus: Vec<BigInt>,
    /// reduction[k] = coordinates of t^(degree+k) over the power basis,
    /// for k = 0 .. degree-2 (enough to reduce any product of two elements).
    reduction: Vec<Vec<Rat>>,
}

/// A cyclotomic field Q(zeta_n); cheap to clone, cached by conductor.
#[derive(Clone)]
pub struct CyclotomicField(Arc<FieldInner>);

fn field_cache() -> &'static Mutex<HashMap<u32, CyclotomicField>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, CyclotomicField>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl CyclotomicField {
    pub fn new(conductor: u32) -> Self {
        assert!(conductor >= 1, "conductor must be positive");
        let mut cache = field_cache().lock().unwrap();
        if let Some(f) = cache.get(&conductor) {
            return f.clone();
        }
        let modulus = cyclotomic_polynomial(conductor);
        let degree = modulus.len() - 1;
        debug_assert_eq!(degree as u32, euler_phi(conductor));

        // t^degree = -(c_0 + c_1 t + ... + c_{degree-1} t^{degree-1});
        // higher powers follow by shifting and reducing once more.
        let mut reduction: Vec<Vec<Rat>> = Vec::new();
        if degree > 0 {
            let base: Vec<Rat> = modulus[..degree]
                .iter()
                .map(|c| -Rat::from_integer(c.clone()))
                .collect();
            reduction.push(base);
            for k in 1..degree.saturating_sub(1) {
                let prev = &reduction[k - 1];
                let mut next = vec![Rat::zero(); degree];
                let top = prev[degree - 1].clone();
                for j in 1..degree {
                    next[j] = prev[j - 1].clone();
                }
                if !top.is_zero() {
                    for j in 0..degree {
                        let t = &reduction[0][j] * &top;
                        next[j] += t;
                    }
                }
                reduction.push(next);
            }
        }

        let field = CyclotomicField(Arc::new(FieldInner {
            conductor,
            degree,
            modulus,
            reduction,
        }));
        cache.insert(conductor, field.clone());
        field
    }

    /// The rationals, presented as the conductor-1 cyclotomic field.
    pub fn rationals() -> Self {
        Self::new(1)
    }

    pub fn conductor(&self) -> u32 {
        self.0.conductor
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Ascending integer coefficients of Phi_n.
    pub fn modulus(&self) -> &[BigInt] {
        &self.0.modulus
    }

    pub fn zero(&self) -> CyclotomicElement {
        CyclotomicElement {
            field: self.clone(),
            coords: vec![Rat::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> CyclotomicElement {
        self.from_rat(Rat::one())
    }

    pub fn int(&self, n: i64) -> CyclotomicElement {
        self.from_rat(rat_int(n))
    }

    pub fn from_rat(&self, r: Rat) -> CyclotomicElement {
        let mut coords = vec![Rat::zero(); self.degree()];
        coords[0] = r;
        CyclotomicElement {
            field: self.clone(),
            coords,
        }
    }

    /// The distinguished primitive root zeta_n (the class of t).
    pub fn zeta(&self) -> CyclotomicElement {
        self.zeta_pow(1)
    }

    /// zeta_n^k for any integer exponent k.
    pub fn zeta_pow(&self, k: i64) -> CyclotomicElement {
        let n = self.conductor() as i64;
        let k = k.rem_euclid(n) as usize;
        let d = self.degree();
        if k < d {
            let mut coords = vec![Rat::zero(); d];
            coords[k] = Rat::one();
            return CyclotomicElement {
                field: self.clone(),
                coords,
            };
        }
        // repeated multiplication by zeta keeps this exact and simple
        let mut acc = self.one();
        let z = self.zeta();
        for _ in 0..k {
            acc = &acc * &z;
        }
        acc
    }

    pub fn element_from_coords(&self, coords: Vec<Rat>) -> Result<CyclotomicElement> {
        if coords.len() != self.degree() {
            return Err(Error::DataError(format!(
                "expected {} coordinates for Q(zeta_{}), got {}",
                self.degree(),
                self.conductor(),
                coords.len()
            )));
        }
        Ok(CyclotomicElement {
            field: self.clone(),
            coords,
        })
    }
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.conductor() == other.conductor()
    }
}
impl Eq for CyclotomicField {}

impl Hash for CyclotomicField {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.conductor().hash(state);
    }
}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.conductor())
    }
}

// -- elements ----------------------------------------------------------------

/// An element of a cyclotomic field: phi(n) rational coordinates over the
/// power basis. Coordinates are always in lowest terms with positive
/// denominator (num-rational keeps them reduced), so equality and hashing
/// are plain coordinate comparisons.
#[derive(Clone)]
pub struct CyclotomicElement {
    field: CyclotomicField,
    coords: Vec<Rat>,
}

impl CyclotomicElement {
    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value if the element lies in Q.
    pub fn as_rat(&self) -> Option<&Rat> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    fn assert_same_field(&self, other: &Self) {
        assert_eq!(
            self.field.conductor(),
            other.field.conductor(),
            "field mismatch: operate on Q(zeta_{}) and Q(zeta_{})",
            self.field.conductor(),
            other.field.conductor()
        );
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        Ok(self * other)
    }

    pub fn checked_eq(&self, other: &Self) -> Result<bool> {
        self.check_field(other)?;
        Ok(self == other)
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.conductor(),
                other.field.conductor(),
            ));
        }
        Ok(())
    }

    pub fn scale(&self, r: &Rat) -> Self {
        CyclotomicElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// Phi_n; succeeds for every nonzero element since Phi_n is irreducible.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("cyclotomic inverse"));
        }
        if let Some(r) = self.as_rat() {
            let mut out = self.field.zero();
            out.coords[0] = r.recip();
            return Ok(out);
        }
        // half-extended gcd: track u with u * a = r (mod Phi)
        let modulus: Vec<Rat> = self
            .field
            .modulus()
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect();
        let mut a = self.coords.clone();
        rpoly_trim(&mut a);
        let mut r0 = a;
        let mut r1 = modulus;
        let mut u0 = vec![Rat::one()];
        let mut u1: Vec<Rat> = Vec::new();
        while !r1.is_empty() {
            let (q, r) = rpoly_div_rem(&r0, &r1);
            let nu = rpoly_sub(&u0, &rpoly_mul(&q, &u1));
            r0 = std::mem::replace(&mut r1, r);
            u0 = std::mem::replace(&mut u1, nu);
        }
        // r0 is a nonzero constant: the gcd of a and the irreducible Phi_n
        debug_assert_eq!(r0.len(), 1, "Phi_n must be coprime to a proper element");
        let g = r0[0].clone();
        let mut coords = vec![Rat::zero(); self.field.degree()];
        for (j, c) in u0.iter().enumerate() {
            coords[j] = c / &g;
        }
        let out = CyclotomicElement {
            field: self.field.clone(),
            coords,
        };
        debug_assert!((&out * self).is_one());
        Ok(out)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Image under zeta_m -> zeta_n^(n/m) into a field whose conductor is a
    /// multiple of this element's conductor. Identity when conductors match.
    pub fn embed(&self, target: &CyclotomicField) -> Result<Self> {
        let m = self.field.conductor();
        let n = target.conductor();
        if n % m != 0 {
            return Err(Error::BadEmbedding(m, n));
        }
        if n == m {
            return Ok(self.clone());
        }
        let step = (n / m) as i64;
        let mut acc = target.zero();
        let mut zp = target.one();
        let z = target.zeta_pow(step);
        for (j, c) in self.coords.iter().enumerate() {
            if j > 0 {
                zp = &zp * &z;
            }
            if !c.is_zero() {
                acc = &acc + &zp.scale(c);
            }
        }
        Ok(acc)
    }
}

impl PartialEq for CyclotomicElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coords == other.coords
    }
}
impl Eq for CyclotomicElement {}

impl Hash for CyclotomicElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.conductor().hash(state);
        self.coords.hash(state);
    }
}

impl PartialOrd for CyclotomicElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A total order used only for canonical sorting; conductor first, then the
/// coordinate vector lexicographically.
impl Ord for CyclotomicElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.field
            .conductor()
            .cmp(&other.field.conductor())
            .then_with(|| self.coords.cmp(&other.coords))
    }
}

impl Add for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn add(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        self.assert_same_field(rhs);
        CyclotomicElement {
            field: self.field.clone(),
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn sub(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        self.assert_same_field(rhs);
        CyclotomicElement {
            field: self.field.clone(),
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        CyclotomicElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn mul(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        self.assert_same_field(rhs);
        let d = self.field.degree();
        if d == 1 {
            return CyclotomicElement {
                field: self.field.clone(),
                coords: vec![&self.coords[0] * &rhs.coords[0]],
            };
        }
        let mut prod = vec![Rat::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] += a * b;
            }
        }
        let red = &self.field.0.reduction;
        let mut coords: Vec<Rat> = prod[..d].to_vec();
        for k in d..(2 * d - 1) {
            if prod[k].is_zero() {
                continue;
            }
            let row = &red[k - d];
            for j in 0..d {
                if !row[j].is_zero() {
                    let t = &row[j] * &prod[k];
                    coords[j] += t;
                }
            }
        }
        CyclotomicElement {
            field: self.field.clone(),
            coords,
        }
    }
}

// value-consuming convenience forms
impl Add for CyclotomicElement {
    type Output = CyclotomicElement;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}
impl Sub for CyclotomicElement {
    type Output = CyclotomicElement;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}
impl Mul for CyclotomicElement {
    type Output = CyclotomicElement;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}
impl Neg for CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> Self {
        -&self
    }
}

impl fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = c.is_negative();
            if first {
                if sign {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if j == 0 {
                write!(f, "{}", rat_to_string(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", rat_to_string(&mag))?;
                }
                if j == 1 {
                    write!(f, "z")?;
                } else {
                    write!(f, "z^{j}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in Q(zeta_{})", self, self.field.conductor())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_poly(coeffs: &[i64]) -> Vec<BigInt> {
        coeffs.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn cyclotomic_polynomials_small() {
        assert_eq!(cyclotomic_polynomial(1), int_poly(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), int_poly(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(3), int_poly(&[1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(4), int_poly(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(5), int_poly(&[1, 1, 1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(7), int_poly(&[1, 1, 1, 1, 1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(8), int_poly(&[1, 0, 0, 0, 1]));
        assert_eq!(
            cyclotomic_polynomial(15),
            int_poly(&[1, -1, 0, 1, -1, 1, 0, -1, 1])
        );
    }

    #[test]
    fn degree_equals_totient() {
        for n in 1..=30 {
            let f = CyclotomicField::new(n);
            assert_eq!(f.degree() as u32, euler_phi(n), "n = {n}");
        }
    }

    #[test]
    fn zeta8_squares_to_i() {
        // w = zeta_8 satisfies w^2 = i and w^4 = -1
        let f8 = CyclotomicField::new(8);
        let w = f8.zeta();
        let i8 = (&w * &w).clone();
        let f4 = CyclotomicField::new(4);
        let i_emb = f4.zeta().embed(&f8).unwrap();
        assert_eq!(i8, i_emb);
        assert_eq!(w.pow(4), f8.int(-1));
        assert_eq!(w.pow(8), f8.one());
    }

    #[test]
    fn inverse_of_one_plus_i() {
        // in Q(zeta_4): (1+i)^-1 = (1-i)/2, checked by hand
        let f4 = CyclotomicField::new(4);
        let one_plus_i = &f4.one() + &f4.zeta();
        let inv = one_plus_i.inv().unwrap();
        let expected = f4
            .element_from_coords(vec![rat(1, 2), rat(-1, 2)])
            .unwrap();
        assert_eq!(inv, expected);
        assert!((&one_plus_i * &inv).is_one());
    }

    #[test]
    fn inverse_of_zero_fails() {
        let f = CyclotomicField::new(8);
        assert!(matches!(
            f.zero().inv(),
            Err(Error::DivisionByZero(_))
        ));
    }

    #[test]
    fn field_mismatch_is_an_error() {
        let a = CyclotomicField::new(4).one();
        let b = CyclotomicField::new(8).one();
        assert!(matches!(a.checked_add(&b), Err(Error::FieldMismatch(4, 8))));
        assert!(matches!(a.checked_mul(&b), Err(Error::FieldMismatch(4, 8))));
    }

    #[test]
    fn rationals_embed_unchanged() {
        let q = CyclotomicField::rationals();
        let f7 = CyclotomicField::new(7);
        let x = q.from_rat(rat(3, 2));
        let y = x.embed(&f7).unwrap();
        assert_eq!(y.as_rat(), Some(&rat(3, 2)));
    }

    #[test]
    fn embed_is_identity_on_same_field() {
        let f8 = CyclotomicField::new(8);
        let w = f8.zeta();
        let sq = &w * &w;
        assert_eq!(sq.embed(&f8).unwrap(), sq);
    }

    #[test]
    fn embed_rejects_non_divisor() {
        let f4 = CyclotomicField::new(4);
        let f7 = CyclotomicField::new(7);
        assert!(matches!(
            f4.zeta().embed(&f7),
            Err(Error::BadEmbedding(4, 7))
        ));
    }

    // small deterministic generator for randomized algebra checks
    pub(crate) struct XorShift(u64);
    impl XorShift {
        pub(crate) fn new(seed: u64) -> Self {
            XorShift(seed.max(1))
        }
        pub(crate) fn next_u64(&mut self) -> u64 {
            let mut x = self.0;
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            self.0 = x;
            x
        }
        pub(crate) fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
            lo + (self.next_u64() % ((hi - lo + 1) as u64)) as i64
        }
    }

    pub(crate) fn random_element(
        f: &CyclotomicField,
        rng: &mut XorShift,
    ) -> CyclotomicElement {
        let coords = (0..f.degree())
            .map(|_| {
                let num = rng.int_in(-6, 6);
                let den = rng.int_in(1, 4);
                rat(num, den)
            })
            .collect();
        f.element_from_coords(coords).unwrap()
    }

    #[test]
    fn random_inverses_multiply_to_one() {
        let mut rng = XorShift::new(0x5eed);
        for n in [4u32, 7, 8, 15] {
            let f = CyclotomicField::new(n);
            for _ in 0..40 {
                let a = random_element(&f, &mut rng);
                if a.is_zero() {
                    continue;
                }
                let inv = a.inv().unwrap();
                assert!((&a * &inv).is_one(), "a = {a:?} in Q(zeta_{n})");
            }
        }
    }

    #[test]
    fn embed_is_a_ring_homomorphism() {
        let mut rng = XorShift::new(0xabcd);
        for (m, n) in [(4u32, 8u32), (1, 7), (3, 15), (5, 15)] {
            let src = CyclotomicField::new(m);
            let dst = CyclotomicField::new(n);
            for _ in 0..25 {
                let a = random_element(&src, &mut rng);
                let b = random_element(&src, &mut rng);
                let sum = (&a + &b).embed(&dst).unwrap();
                let prod = (&a * &b).embed(&dst).unwrap();
                let ea = a.embed(&dst).unwrap();
                let eb = b.embed(&dst).unwrap();
                assert_eq!(sum, &ea + &eb);
                assert_eq!(prod, &ea * &eb);
            }
        }
    }

    #[test]
    fn embed_tower_is_injective_on_samples() {
        let mut rng = XorShift::new(0x77);
        let f4 = CyclotomicField::new(4);
        let f8 = CyclotomicField::new(8);
        for _ in 0..20 {
            let a = random_element(&f4, &mut rng);
            let b = random_element(&f4, &mut rng);
            let ea = a.embed(&f8).unwrap();
            let eb = b.embed(&f8).unwrap();
            assert_eq!(a == b, ea == eb);
        }
    }

    #[test]
    fn field_axioms_on_random_samples() {
        let mut rng = XorShift::new(0xfeed);
        for n in [8u32, 7, 15] {
            let f = CyclotomicField::new(n);
            for _ in 0..30 {
                let a = random_element(&f, &mut rng);
                let b = random_element(&f, &mut rng);
                let c = random_element(&f, &mut rng);
                assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                assert_eq!(&a + &(-&a), f.zero());
                assert_eq!(&a * &f.one(), a);
            }
        }
    }

    #[test]
    fn parse_and_print_rationals() {
        assert_eq!(parse_rat("3/2").unwrap(), rat(3, 2));
        assert_eq!(parse_rat("-7").unwrap(), rat_int(-7));
        assert_eq!(rat_to_string(&rat(-3, 6)), "-1/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }
}
