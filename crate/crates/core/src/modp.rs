//! Reduction of cyclotomic data modulo a split prime, used only to screen:
//! a nonzero value mod p certifies a nonzero exact value, so expensive exact
//! work runs only where the screen reports a possible hit. Every accept path
//! is re-verified exactly; a bad prime (dividing some denominator) is
//! detected and the next one is tried.

use num_traits::ToPrimitive;

use crate::exactfield::{CyclotomicElement, CyclotomicField};
use crate::poly::Poly;

/// Arithmetic context: a prime p = 1 (mod n) together with a primitive n-th
/// root of unity mod p, so reduction is evaluation of the power basis.
#[derive(Clone)]
pub(crate) struct FpCtx {
    pub p: u64,
    /// powers of the chosen root: zeta^j mod p for j < degree
    pows: Vec<u64>,
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    // deterministic Miller-Rabin for u64
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    // p is prime
    pow_mod(a, p - 2, p)
}

impl FpCtx {
    /// The `attempt`-th suitable prime context for a field, deterministic.
    pub fn new(field: &CyclotomicField, attempt: usize) -> FpCtx {
        let n = field.conductor() as u64;
        let mut found = 0usize;
        // primes p = 1 (mod n) starting around 2^30 so products stay in u64
        let mut k = (1u64 << 30) / n.max(1);
        loop {
            k += 1;
            let p = n * k + 1;
            if !is_prime_u64(p) {
                continue;
            }
            // element of exact multiplicative order n
            let mut zeta = 0u64;
            'base: for a in 2..200u64 {
                let z = pow_mod(a, (p - 1) / n, p);
                if z == 1 {
                    continue;
                }
                // order divides n; insist on exact order n
                for q in prime_divisors(n) {
                    if pow_mod(z, n / q, p) == 1 {
                        continue 'base;
                    }
                }
                zeta = z;
                break;
            }
            if zeta == 0 && n > 1 {
                continue;
            }
            if n == 1 {
                zeta = 1;
            }
            if found == attempt {
                let deg = field.degree();
                let mut pows = Vec::with_capacity(deg);
                let mut acc = 1u64;
                for _ in 0..deg {
                    pows.push(acc);
                    acc = mul_mod(acc, zeta, p);
                }
                return FpCtx { p, pows };
            }
            found += 1;
        }
    }

    /// Reduction of an element; None if a denominator is divisible by p.
    pub fn elem(&self, e: &CyclotomicElement) -> Option<u64> {
        let mut acc = 0u64;
        for (j, c) in e.coords().iter().enumerate() {
            if num_traits::Zero::is_zero(c) {
                continue;
            }
            let num = (c.numer() % self.p).to_i64().unwrap().rem_euclid(self.p as i64) as u64;
            let den = (c.denom() % self.p).to_i64().unwrap().rem_euclid(self.p as i64) as u64;
            if den == 0 {
                return None;
            }
            let v = mul_mod(num, inv_mod_p(den, self.p), self.p);
            acc = (acc + mul_mod(v, self.pows[j], self.p)) % self.p;
        }
        Some(acc)
    }

    /// Reduction allowing leading-coefficient drop; None only on a bad
    /// denominator.
    pub fn poly_allow_drop_u(&self, q: &crate::poly::Poly) -> Option<Vec<u64>> {
        let mut out = Vec::with_capacity(q.coeffs().len());
        for c in q.coeffs() {
            out.push(self.elem(c)?);
        }
        Some(out)
    }

    /// Reduction of a univariate polynomial (dense, ascending).
    pub fn poly(&self, q: &Poly) -> Option<Vec<u64>> {
        let mut out = Vec::with_capacity(q.coeffs().len());
        for c in q.coeffs() {
            out.push(self.elem(c)?);
        }
        // keep exact degree: a vanishing leading coefficient means p divides
        // it, which only happens for a bad prime since the exact one is
        // nonzero (monic moduli) or genuinely zero (already trimmed)
        if let Some(&lead) = out.last() {
            if lead == 0 {
                return None;
            }
        }
        Some(out)
    }
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn fp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Remainder of dense polynomials over F_p.
pub(crate) fn fp_rem(num: &[u64], den: &[u64], p: u64) -> Vec<u64> {
    let mut rem: Vec<u64> = num.to_vec();
    fp_trim(&mut rem);
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return rem;
    }
    let lead_inv = inv_mod_p(den[dd], p);
    for k in (0..rem.len() - dd).rev() {
        let c = mul_mod(rem[k + dd], lead_inv, p);
        if c == 0 {
            continue;
        }
        for (j, &dj) in den.iter().enumerate() {
            let t = mul_mod(dj, c, p);
            let slot = &mut rem[k + j];
            *slot = (*slot + p - t) % p;
        }
    }
    fp_trim(&mut rem);
    rem
}

pub(crate) fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = std::mem::replace(&mut b, r);
    }
    a
}

/// Horner composition c(x, r(x)) mod m over F_p, for c given as y-power
/// coefficients.
pub(crate) fn fp_pullback(ycoeffs: &[Vec<u64>], r: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut acc: Vec<u64> = Vec::new();
    for c in ycoeffs.iter().rev() {
        // acc = acc * r + c
        let mut next = vec![0u64; acc.len() + r.len()];
        for (i, &ai) in acc.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &rj) in r.iter().enumerate() {
                next[i + j] = (next[i + j] + mul_mod(ai, rj, p)) % p;
            }
        }
        for (j, &cj) in c.iter().enumerate() {
            if next.len() <= j {
                next.resize(j + 1, 0);
            }
            next[j] = (next[j] + cj) % p;
        }
        fp_trim(&mut next);
        acc = if next.len() > m.len() - 1 {
            fp_rem(&next, m, p)
        } else {
            next
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rat;

    #[test]
    fn prime_context_has_right_order_root() {
        for n in [1u32, 3, 4, 5, 7, 8, 15] {
            let f = CyclotomicField::new(n);
            let ctx = FpCtx::new(&f, 0);
            assert_eq!((ctx.p - 1) % n as u64, 0);
            if f.degree() > 1 {
                let z = ctx.pows[1];
                assert_eq!(pow_mod(z, n as u64, ctx.p), 1);
                for q in prime_divisors(n as u64) {
                    assert_ne!(pow_mod(z, n as u64 / q, ctx.p), 1);
                }
            }
        }
    }

    #[test]
    fn reduction_is_a_ring_map() {
        let f = CyclotomicField::new(8);
        let ctx = FpCtx::new(&f, 0);
        let a = f
            .element_from_coords(vec![rat(1, 2), rat(3, 1), rat(-2, 5), rat(0, 1)])
            .unwrap();
        let b = f
            .element_from_coords(vec![rat(2, 3), rat(-1, 1), rat(4, 1), rat(7, 2)])
            .unwrap();
        let ra = ctx.elem(&a).unwrap();
        let rb = ctx.elem(&b).unwrap();
        let rsum = ctx.elem(&(&a + &b)).unwrap();
        let rprod = ctx.elem(&(&a * &b)).unwrap();
        assert_eq!((ra + rb) % ctx.p, rsum);
        assert_eq!(mul_mod(ra, rb, ctx.p), rprod);
    }

    #[test]
    fn distinct_attempts_give_distinct_primes() {
        let f = CyclotomicField::new(7);
        let c0 = FpCtx::new(&f, 0);
        let c1 = FpCtx::new(&f, 1);
        assert_ne!(c0.p, c1.p);
    }

    #[test]
    fn gcd_and_rem_mod_p() {
        let p = 101u64;
        // (x-3)(x-5) and (x-3)(x-7)
        let a = vec![15 % p, p - 8, 1];
        let b = vec![21 % p, p - 10, 1];
        let g = fp_gcd(&a, &b, p);
        // gcd is a scalar multiple of (x - 3)
        assert_eq!(g.len(), 2);
        let root = mul_mod(g[0], inv_mod_p(p - g[1] % p, p), p);
        let _ = root;
        let r = fp_rem(&a, &[p - 3, 1], p);
        assert!(r.is_empty());
    }
}

/// Homogeneous Horner composition: u^d c(x, -v/u) mod m over F_p, for c
/// given as y-power coefficient vectors.
pub(crate) fn fp_pullback_h(
    ycoeffs: &[Vec<u64>],
    u: &[u64],
    v: &[u64],
    m: &[u64],
    p: u64,
) -> Vec<u64> {
    let d = ycoeffs.len() - 1;
    let mut neg_v: Vec<u64> = v.iter().map(|&c| (p - c % p) % p).collect();
    fp_trim(&mut neg_v);
    // powers of u mod m
    let mut upow: Vec<Vec<u64>> = Vec::with_capacity(d + 1);
    upow.push(vec![1]);
    for _ in 0..d {
        let prev = upow.last().unwrap();
        let mut next = vec![0u64; prev.len() + u.len().saturating_sub(1)];
        for (i, &a) in prev.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in u.iter().enumerate() {
                next[i + j] = (next[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        fp_trim(&mut next);
        let next = if next.len() > m.len() - 1 {
            fp_rem(&next, m, p)
        } else {
            next
        };
        upow.push(next);
    }
    let mut acc: Vec<u64> = Vec::new();
    for (k, c) in ycoeffs.iter().enumerate().rev() {
        // acc = acc * (-v) + c * u^(d-k)
        let mut next = vec![0u64; acc.len() + neg_v.len()];
        for (i, &a) in acc.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in neg_v.iter().enumerate() {
                next[i + j] = (next[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        let up = &upow[d - k];
        for (i, &a) in c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in up.iter().enumerate() {
                if next.len() <= i + j {
                    next.resize(i + j + 1, 0);
                }
                next[i + j] = (next[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        fp_trim(&mut next);
        acc = if next.len() > m.len() - 1 {
            fp_rem(&next, m, p)
        } else {
            next
        };
    }
    acc
}

pub(crate) fn pow_mod_pub(a: u64, e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut a = a % p;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}
