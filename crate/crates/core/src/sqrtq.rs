//! Exact square roots in the quadratic tower Q ⊂ Q(i) ⊂ Q(zeta_8), with the
//! degree-2 step up to Q(zeta_24). Everything is closed-form rational
//! arithmetic: no factorization, no approximation, and every result is
//! verified by squaring before it is returned.

use num_integer::Roots;
use num_traits::Signed;

use crate::exactfield::{CyclotomicElement, CyclotomicField, Rat};

/// Exact rational square root.
pub(crate) fn sqrt_rational(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().sqrt();
    let den = r.denom().sqrt();
    if &(&num * &num) == r.numer() && &(&den * &den) == r.denom() {
        Some(Rat::new(num, den))
    } else {
        None
    }
}

/// Square root in Q(i), elements given over the power basis (1, i).
/// For u + vi with v != 0 the root is x + iy with x^2 = (u + |gamma|)/2,
/// where |gamma| must be rational.
fn sqrt_gaussian(g: &CyclotomicElement) -> Option<CyclotomicElement> {
    let f4 = g.field().clone();
    debug_assert_eq!(f4.conductor(), 4);
    let u = g.coords()[0].clone();
    let v = g.coords()[1].clone();
    if num_traits::Zero::is_zero(&v) {
        if let Some(x) = sqrt_rational(&u) {
            return Some(f4.from_rat(x));
        }
        if let Some(y) = sqrt_rational(&(-&u)) {
            return Some(f4.element_from_coords(vec![crate::exactfield::rat_int(0), y]).unwrap());
        }
        return None;
    }
    let norm = &(&u * &u) + &(&v * &v);
    let n = sqrt_rational(&norm)?;
    let half = crate::exactfield::rat(1, 2);
    let x2 = (&u + &n) * &half;
    let x = sqrt_rational(&x2)?;
    if num_traits::Zero::is_zero(&x) {
        return None;
    }
    let y = &v / &(&x + &x);
    let cand = f4.element_from_coords(vec![x, y]).unwrap();
    if &(&cand * &cand) == g {
        Some(cand)
    } else {
        None
    }
}

fn gaussian_part(e: &CyclotomicElement, lo: usize, hi: usize) -> CyclotomicElement {
    let f4 = CyclotomicField::new(4);
    f4.element_from_coords(vec![e.coords()[lo].clone(), e.coords()[hi].clone()])
        .unwrap()
}

fn from_gaussian_parts(a: &CyclotomicElement, b: &CyclotomicElement) -> CyclotomicElement {
    let f8 = CyclotomicField::new(8);
    f8.element_from_coords(vec![
        a.coords()[0].clone(),
        b.coords()[0].clone(),
        a.coords()[1].clone(),
        b.coords()[1].clone(),
    ])
    .unwrap()
}

/// Square root inside Q(zeta_8): write the target as alpha + beta zeta over
/// Q(i) and solve the two-case quadratic for the root's Q(i)-parts.
pub(crate) fn sqrt_zeta8(d: &CyclotomicElement) -> Option<CyclotomicElement> {
    debug_assert_eq!(d.field().conductor(), 8);
    if d.is_zero() {
        return Some(d.clone());
    }
    let f4 = CyclotomicField::new(4);
    let i = f4.zeta();
    let alpha = gaussian_part(d, 0, 2);
    let beta = gaussian_part(d, 1, 3);
    if beta.is_zero() {
        // y = a with a^2 = alpha, or y = b zeta with i b^2 = alpha
        if let Some(a) = sqrt_gaussian(&alpha) {
            return Some(from_gaussian_parts(&a, &f4.zero()));
        }
        let target = &alpha * &(-&i); // alpha / i
        if let Some(b) = sqrt_gaussian(&target) {
            return Some(from_gaussian_parts(&f4.zero(), &b));
        }
        return None;
    }
    // b^2 solves i t^2 - alpha t + beta^2/4 = 0
    let quarter = crate::exactfield::rat(1, 4);
    let disc = &(&alpha * &alpha) - &(&i * &(&beta * &beta));
    let s = sqrt_gaussian(&disc)?;
    let inv_2i = (&i + &i).inv().expect("2i is a unit");
    for sign in [1i64, -1] {
        let s_signed = s.scale(&crate::exactfield::rat_int(sign));
        let b2 = &(&alpha + &s_signed) * &inv_2i;
        let Some(b) = sqrt_gaussian(&b2) else {
            continue;
        };
        if b.is_zero() {
            continue;
        }
        let a = &beta * &(&b + &b).inv().expect("nonzero");
        let cand = from_gaussian_parts(&a, &b);
        if &(&cand * &cand) == d {
            return Some(cand);
        }
        let _ = quarter;
    }
    None
}

/// Square root of a Q(zeta_8) element inside Q(zeta_24): either the root is
/// already in Q(zeta_8), or it is sqrt(-d/3) * sqrt(-3) with the first
/// factor in Q(zeta_8). Returns the root embedded in Q(zeta_24).
pub(crate) fn sqrt_zeta8_in_zeta24(d: &CyclotomicElement) -> Option<CyclotomicElement> {
    debug_assert_eq!(d.field().conductor(), 8);
    let f24 = CyclotomicField::new(24);
    if let Some(y) = sqrt_zeta8(d) {
        return y.embed(&f24).ok();
    }
    let third = crate::exactfield::rat(-1, 3);
    let target = d.scale(&third);
    let a = sqrt_zeta8(&target)?;
    // sqrt(-3) = 1 + 2 zeta_3 and zeta_3 = zeta_24^8
    let omega = f24.zeta_pow(8);
    let sqrt_m3 = &f24.one() + &omega.scale(&crate::exactfield::rat_int(2));
    let y = &a.embed(&f24).ok()? * &sqrt_m3;
    debug_assert_eq!(&y * &y, d.embed(&f24).ok()?);
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{rat, rat_int};

    #[test]
    fn rational_roots() {
        assert_eq!(sqrt_rational(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(sqrt_rational(&rat(2, 1)), None);
        assert_eq!(sqrt_rational(&rat(-1, 1)), None);
        assert_eq!(sqrt_rational(&rat(0, 1)), Some(rat(0, 1)));
    }

    #[test]
    fn gaussian_roots() {
        let f4 = CyclotomicField::new(4);
        // sqrt(-4) = 2i
        let m4 = f4.int(-4);
        let r = sqrt_gaussian(&m4).unwrap();
        assert_eq!(&r * &r, m4);
        // sqrt(3 - 4i) = 2 - i
        let g = f4.element_from_coords(vec![rat_int(3), rat_int(-4)]).unwrap();
        let r = sqrt_gaussian(&g).unwrap();
        assert_eq!(&r * &r, g);
        // 1 + i is not a square in Q(i)
        let ni = f4.element_from_coords(vec![rat_int(1), rat_int(1)]).unwrap();
        assert!(sqrt_gaussian(&ni).is_none());
    }

    #[test]
    fn zeta8_roots() {
        let f8 = CyclotomicField::new(8);
        let mut rng = 0x1234u64;
        let mut next = move || {
            rng ^= rng << 13;
            rng ^= rng >> 7;
            rng ^= rng << 17;
            (rng % 11) as i64 - 5
        };
        for _ in 0..40 {
            let y = f8
                .element_from_coords((0..4).map(|_| rat_int(next())).collect())
                .unwrap();
            let d = &y * &y;
            let r = sqrt_zeta8(&d).expect("a square has a root");
            assert_eq!(&r * &r, d);
        }
        // i has the root zeta_8
        let i8 = f8.zeta_pow(2);
        let r = sqrt_zeta8(&i8).unwrap();
        assert_eq!(&r * &r, i8);
        // 3 is not a square in Q(zeta_8)
        assert!(sqrt_zeta8(&f8.int(3)).is_none());
    }

    #[test]
    fn zeta24_lift() {
        let f8 = CyclotomicField::new(8);
        let f24 = CyclotomicField::new(24);
        // -3 becomes a square upstairs
        let d = f8.int(-3);
        let y = sqrt_zeta8_in_zeta24(&d).unwrap();
        assert_eq!(&y * &y, d.embed(&f24).unwrap());
        // 3 = (-3) * (-1) also works via i * sqrt(-3)
        let d3 = f8.int(3);
        let y3 = sqrt_zeta8_in_zeta24(&d3).unwrap();
        assert_eq!(&y3 * &y3, d3.embed(&f24).unwrap());
        // 5 is a square nowhere in Q(zeta_24)
        assert!(sqrt_zeta8_in_zeta24(&f8.int(5)).is_none());
    }
}
