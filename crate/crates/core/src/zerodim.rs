//! Exact intersection of plane curves as Galois-stable point clusters.
//!
//! A cluster is a monic squarefree univariate polynomial m(x') together with
//! a parametrization y' = r(x') in a sheared affine chart, standing in for
//! the set of points { (a, r(a), 1) : m(a) = 0 }. Intersections are computed
//! from resultants, multiplicities from Yun's decomposition of the
//! resultant, and parametrizations from gcds over K[x']/(m) with
//! dynamic-evaluation splitting whenever a zero divisor blocks an inversion.
//! No polynomial factorization over a number field ever happens; gcd-driven
//! refinement reaches exactly the granularity the census needs.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactfield::{CyclotomicElement, CyclotomicField};
use crate::linalg;
use crate::plane::{PlaneCurve, ProjectivePoint};
use crate::poly::Poly;

/// Internal failure mode: a frame audit failed (retry with the next frame)
/// or a hard error occurred.
#[derive(Debug)]
pub(crate) enum ZErr {
    Frame(&'static str),
    Hard(Error),
}

impl From<Error> for ZErr {
    fn from(e: Error) -> Self {
        ZErr::Hard(e)
    }
}

pub(crate) fn zerr_to_error(e: ZErr) -> Error {
    match e {
        ZErr::Frame(what) => Error::InvalidArgument(format!("frame audit failure: {what}")),
        ZErr::Hard(e) => e,
    }
}

// -- frames -------------------------------------------------------------------

/// A unimodular coordinate change old = M . new with affine chart z' = 1.
/// The sequence starts with the pure shears x = x' + t y' and falls back to
/// changes that also mix z, for arrangements with intersections at infinity.
#[derive(Clone)]
pub struct ShearFrame {
    index: usize,
    descr: String,
    matrix: [[i64; 3]; 3],
    inverse: [[i64; 3]; 3],
}

const SHEARS_PER_FAMILY: usize = 11;
const ZMIX: [(i64, i64); 28] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (1, 1),
    (-1, 1),
    (2, 1),
    (1, 2),
    (-2, 1),
    (-1, 2),
    (2, 2),
    (3, 1),
    (1, 3),
    (-3, 1),
    (-1, 3),
    (3, 2),
    (2, 3),
    (-3, 2),
    (-2, 3),
    (4, 1),
    (1, 4),
    (-4, 1),
    (4, 3),
    (3, 4),
    (5, 1),
    (1, 5),
    (5, 2),
    (2, 5),
    (-5, 2),
];

/// Total number of frames tried before giving up.
pub const FRAME_CAP: usize = ZMIX.len() * SHEARS_PER_FAMILY;

fn mat_mul_i64(a: &[[i64; 3]; 3], b: &[[i64; 3]; 3]) -> [[i64; 3]; 3] {
    let mut out = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn shear_matrix(t: i64) -> [[i64; 3]; 3] {
    [[1, t, 0], [0, 1, 0], [0, 0, 1]]
}

fn zmix_matrix(p: i64, q: i64) -> [[i64; 3]; 3] {
    [[1, 0, 0], [0, 1, 0], [p, q, 1]]
}

impl ShearFrame {
    /// The deterministic frame sequence: index 0..FRAME_CAP. Frames come in
    /// families sharing a z-mix (p, q); within a family only the x-shear
    /// varies, so the line at infinity of the chart is a family invariant.
    pub fn by_index(index: usize) -> Option<ShearFrame> {
        if index >= FRAME_CAP {
            return None;
        }
        let (p, q) = ZMIX[index / SHEARS_PER_FAMILY];
        let t = (index % SHEARS_PER_FAMILY) as i64;
        Some(ShearFrame {
            index,
            descr: if (p, q) == (0, 0) {
                format!("x-shear t={t}")
            } else {
                format!("z-mix ({p},{q}) with x-shear t={t}")
            },
            matrix: mat_mul_i64(&zmix_matrix(p, q), &shear_matrix(t)),
            inverse: mat_mul_i64(&shear_matrix(-t), &zmix_matrix(-p, -q)),
        })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// The z-mix family of this frame.
    pub(crate) fn family(&self) -> (i64, i64) {
        ZMIX[self.index / SHEARS_PER_FAMILY]
    }

    pub fn describe(&self) -> &str {
        &self.descr
    }

    fn matrix_in(&self, field: &CyclotomicField) -> [[CyclotomicElement; 3]; 3] {
        self.matrix.map(|row| row.map(|e| field.int(e)))
    }

    /// New-chart coordinates of an old-coordinates point.
    fn pull_point(&self, p: &ProjectivePoint) -> [CyclotomicElement; 3] {
        let field = p.field();
        let c = p.coords();
        let mut out = [field.zero(), field.zero(), field.zero()];
        for i in 0..3 {
            for j in 0..3 {
                if self.inverse[i][j] != 0 {
                    let t = c[j].scale(&crate::exactfield::rat_int(self.inverse[i][j]));
                    out[i] = &out[i] + &t;
                }
            }
        }
        out
    }

    /// Old coordinates of a new-chart point.
    fn push_point(&self, new: &[CyclotomicElement; 3]) -> [CyclotomicElement; 3] {
        let field = new[0].field();
        let mut out = [field.zero(), field.zero(), field.zero()];
        for i in 0..3 {
            for j in 0..3 {
                if self.matrix[i][j] != 0 {
                    let t = new[j].scale(&crate::exactfield::rat_int(self.matrix[i][j]));
                    out[i] = &out[i] + &t;
                }
            }
        }
        out
    }
}

impl fmt::Debug for ShearFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "frame#{} ({})", self.index, self.descr)
    }
}

// -- framed curves -----------------------------------------------------------

/// A curve in a frame's affine chart: coefficients of powers of y', each a
/// polynomial in x'. The leading y'-coefficient is a nonzero constant for
/// every curve accepted by the frame audit.
#[derive(Clone)]
pub(crate) struct FramedCurve {
    pub ycoeffs: Vec<Poly>,
    pub degree: u32,
}

impl FramedCurve {
    fn deg_y(&self) -> usize {
        self.ycoeffs.len() - 1
    }
}

pub(crate) fn frame_curve(
    curve: &PlaneCurve,
    frame: &ShearFrame,
) -> std::result::Result<FramedCurve, ZErr> {
    let field = curve.field().clone();
    let m = frame.matrix_in(&field);
    let transformed = curve.transform(&m).map_err(ZErr::Hard)?;
    let d = curve.degree();
    // leading coefficient in y' = value at the chart's vertical direction;
    // it must be a nonzero constant
    let lead = transformed.coeff((0, d, 0));
    if lead.is_zero() {
        return Err(ZErr::Frame("curve passes through the vertical direction"));
    }
    let mut ycoeffs = vec![Vec::new(); d as usize + 1];
    for (&(a, b, _c), v) in transformed.coeffs() {
        let row: &mut Vec<CyclotomicElement> = &mut ycoeffs[b as usize];
        if row.len() <= a as usize {
            row.resize(a as usize + 1, field.zero());
        }
        row[a as usize] = &row[a as usize] + v;
    }
    Ok(FramedCurve {
        ycoeffs: ycoeffs
            .into_iter()
            .map(|c| Poly::new(field.clone(), c))
            .collect(),
        degree: d,
    })
}

/// Resultant with respect to y' of two framed curves, as a polynomial in
/// x'. Line and conic pairs use closed forms; larger degrees fall back to a
/// fraction-free Sylvester determinant. The overall sign is irrelevant for
/// the multiplicity structure consumed downstream.
pub(crate) fn resultant_y(a: &FramedCurve, b: &FramedCurve) -> Poly {
    let field = a.ycoeffs[0].field().clone();
    let n = a.deg_y();
    let m = b.deg_y();
    if n == 0 {
        return a.ycoeffs[0].pow(m as u32);
    }
    if m == 0 {
        return b.ycoeffs[0].pow(n as u32);
    }
    if n == 1 || m == 1 {
        // res(uy + v, B) = sum b_k (-v)^k u^(deg B - k) up to sign
        let (line, other) = if n == 1 { (a, b) } else { (b, a) };
        let u = &line.ycoeffs[1];
        let neg_v = line.ycoeffs[0].neg();
        let d = other.deg_y();
        let mut upow = Vec::with_capacity(d + 1);
        upow.push(Poly::one(&field));
        for _ in 0..d {
            let next = upow.last().unwrap().mul(u);
            upow.push(next);
        }
        let mut acc = Poly::zero(&field);
        for (k, coeff) in other.ycoeffs.iter().enumerate().rev() {
            acc = acc.mul(&neg_v);
            if !coeff.is_zero() {
                acc = acc.add(&coeff.mul(&upow[d - k]));
            }
        }
        return acc;
    }
    if n == 2 && m == 2 {
        // res = (a2 b0 - a0 b2)^2 - (a2 b1 - a1 b2)(a1 b0 - a0 b1)
        let (a0, a1, a2) = (&a.ycoeffs[0], &a.ycoeffs[1], &a.ycoeffs[2]);
        let (b0, b1, b2) = (&b.ycoeffs[0], &b.ycoeffs[1], &b.ycoeffs[2]);
        let e = a2.mul(b0).sub(&a0.mul(b2));
        let f = a2.mul(b1).sub(&a1.mul(b2));
        let g = a1.mul(b0).sub(&a0.mul(b1));
        return e.mul(&e).sub(&f.mul(&g));
    }
    let size = n + m;
    let zero = Poly::zero(&field);
    let mut s = vec![vec![zero.clone(); size]; size];
    for row in 0..m {
        for (k, c) in a.ycoeffs.iter().enumerate() {
            s[row][row + n - k] = c.clone();
        }
    }
    for row in 0..n {
        for (k, c) in b.ycoeffs.iter().enumerate() {
            s[m + row][row + m - k] = c.clone();
        }
    }
    linalg::det(s)
}

// -- dynamic evaluation (D5) --------------------------------------------------

enum InvOutcome {
    Inverse(Poly),
    /// A proper factor of the modulus was exposed.
    Split(Poly),
}

/// Attempt to invert a (nonzero, reduced) element of K[x]/(m).
fn inv_mod(a: &Poly, m: &Poly) -> InvOutcome {
    let (g, u) = a.half_ext_gcd(m);
    if g.deg() == Some(0) {
        InvOutcome::Inverse(u.rem(m))
    } else {
        InvOutcome::Split(g)
    }
}

/// A polynomial in y with coefficients in K[x]/(m).
#[derive(Clone)]
struct YPoly {
    c: Vec<Poly>,
}

impl YPoly {
    fn from_framed(f: &FramedCurve, m: &Poly) -> Self {
        let mut c: Vec<Poly> = f.ycoeffs.iter().map(|p| p.rem(m)).collect();
        while c.last().map_or(false, |p| p.is_zero()) {
            c.pop();
        }
        YPoly { c }
    }

    fn reduce(&self, m: &Poly) -> Self {
        let mut c: Vec<Poly> = self.c.iter().map(|p| p.rem(m)).collect();
        while c.last().map_or(false, |p| p.is_zero()) {
            c.pop();
        }
        YPoly { c }
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn deg_y(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn lc(&self) -> &Poly {
        self.c.last().expect("nonzero YPoly")
    }
}

/// Branches of the y-gcd of two framed curves over K[x]/(m): dynamic
/// evaluation splits the modulus whenever a leading coefficient is a zero
/// divisor. Every returned modulus divides m and the moduli are pairwise
/// coprime with product m.
fn gcd_mod(a: &YPoly, b: &YPoly, m: Poly) -> Vec<(Poly, YPoly)> {
    let mut a = a.reduce(&m);
    let mut b = b.reduce(&m);
    loop {
        if b.is_zero() {
            return vec![(m, a)];
        }
        if a.is_zero() {
            return vec![(m, b)];
        }
        if a.deg_y() < b.deg_y() {
            std::mem::swap(&mut a, &mut b);
        }
        match inv_mod(b.lc(), &m) {
            InvOutcome::Split(g) => {
                let rest = m.exact_div(&g);
                let mut out = gcd_mod(&a, &b, g);
                out.extend(gcd_mod(&a, &b, rest));
                return out;
            }
            InvOutcome::Inverse(inv) => {
                // a <- a mod b in (K[x]/m)[y]
                let db = b.deg_y().unwrap();
                let mut rem = a.clone();
                while rem.deg_y().map_or(false, |d| d >= db) {
                    let da = rem.deg_y().unwrap();
                    let factor = rem.lc().mul(&inv).rem(&m);
                    let shift = da - db;
                    let mut next = rem.c.clone();
                    for (k, bc) in b.c.iter().enumerate() {
                        let t = bc.mul(&factor).rem(&m);
                        next[k + shift] = next[k + shift].sub(&t).rem(&m);
                    }
                    next.pop();
                    while next.last().map_or(false, |p| p.is_zero()) {
                        next.pop();
                    }
                    rem = YPoly { c: next };
                }
                a = std::mem::replace(&mut b, rem);
            }
        }
    }
}

/// Clusters of one multiplicity class: the y-gcd on each branch must be
/// linear (one intersection point per x'-value); its monic root is the
/// parametrization.
fn linear_clusters(
    a: &YPoly,
    b: &YPoly,
    m: Poly,
) -> std::result::Result<Vec<(Poly, Poly)>, ZErr> {
    let mut out = Vec::new();
    for (mb, g) in gcd_mod(a, b, m) {
        match g.deg_y() {
            Some(1) => match inv_mod(&g.c[1], &mb) {
                InvOutcome::Inverse(inv) => {
                    let r = g.c[0].mul(&inv).neg().rem(&mb);
                    out.push((mb, r));
                }
                InvOutcome::Split(split) => {
                    let rest = mb.exact_div(&split);
                    out.extend(linear_clusters(a, b, split)?);
                    out.extend(linear_clusters(a, b, rest)?);
                }
            },
            _ => {
                return Err(ZErr::Frame(
                    "intersection cluster without a linear parametrization",
                ))
            }
        }
    }
    Ok(out)
}

// -- clusters ------------------------------------------------------------------

/// A Galois-stable set of intersection points in a frame's chart:
/// { (a, r(a), 1) : m(a) = 0 } with m monic squarefree and deg r < deg m.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointCluster {
    frame_index: usize,
    m: Poly,
    r: Poly,
}

impl PointCluster {
    pub fn degree(&self) -> u32 {
        self.m.deg().expect("nonconstant modulus") as u32
    }

    pub fn frame_index(&self) -> usize {
        self.frame_index
    }

    pub fn modulus(&self) -> &Poly {
        &self.m
    }

    pub fn parametrization(&self) -> &Poly {
        &self.r
    }

    /// Degree-1 clusters convert exactly to projective points.
    pub fn to_point(&self) -> Option<ProjectivePoint> {
        if self.degree() != 1 {
            return None;
        }
        let field = self.m.field().clone();
        let alpha = -&self.m.coeff(0);
        let beta = self.r.eval(&alpha);
        let frame = ShearFrame::by_index(self.frame_index).expect("stored frame");
        let old = frame.push_point(&[alpha, beta, field.one()]);
        Some(ProjectivePoint::new(old).expect("affine chart point"))
    }

    /// The degree-1 cluster of a point that is affine in the given frame.
    pub fn from_point(p: &ProjectivePoint, frame: &ShearFrame) -> Option<PointCluster> {
        let new = frame.pull_point(p);
        if new[2].is_zero() {
            return None;
        }
        let zinv = new[2].inv().expect("nonzero");
        let alpha = &new[0] * &zinv;
        let beta = &new[1] * &zinv;
        Some(PointCluster {
            frame_index: frame.index,
            m: Poly::x_minus(&alpha),
            r: Poly::constant(beta),
        })
    }
}

impl PartialOrd for PointCluster {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PointCluster {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.frame_index
            .cmp(&other.frame_index)
            .then_with(|| self.m.cmp(&other.m))
            .then_with(|| self.r.cmp(&other.r))
    }
}

impl fmt::Debug for PointCluster {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cluster(deg {}, m = {:?}, r = {:?})",
            self.degree(),
            self.m,
            self.r
        )
    }
}

/// All intersection clusters of one pair of curves, with the per-point
/// intersection multiplicity of each cluster.
pub struct PairIntersection {
    pub a_idx: usize,
    pub b_idx: usize,
    pub frame_index: usize,
    /// (cluster, per-point multiplicity)
    pub clusters: Vec<(PointCluster, u32)>,
}

impl PairIntersection {
    /// Total intersection number: must equal the product of the degrees.
    pub fn multiplicity_sum(&self) -> u32 {
        self.clusters
            .iter()
            .map(|(c, k)| c.degree() * k)
            .sum()
    }
}

/// Pseudo-division elimination in K[x][y] down to a linear form u y + v.
/// Every common zero of the two curves is a zero of u y + v, so over a
/// factor of the resultant where u is invertible the parametrization is a
/// single quotient-ring inversion, with no Euclidean loop in the quotient.
/// Returns None when the elimination degenerates (handled by the fallback).
fn eliminate_to_linear(a: &FramedCurve, b: &FramedCurve) -> Option<(Poly, Poly)> {
    let mut f: Vec<Poly> = a.ycoeffs.clone();
    let mut g: Vec<Poly> = b.ycoeffs.clone();
    let trim = |v: &mut Vec<Poly>| {
        while v.last().map_or(false, |p| p.is_zero()) {
            v.pop();
        }
    };
    trim(&mut f);
    trim(&mut g);
    loop {
        if f.len() < g.len() {
            std::mem::swap(&mut f, &mut g);
        }
        match g.len() {
            0 | 1 => return None,
            2 => return Some((g[1].clone(), g[0].clone())),
            _ => {}
        }
        // f <- lc(g) * f - lc(f) * y^(df-dg) * g
        let shift = f.len() - g.len();
        let lf = f.last().unwrap().clone();
        let lg = g.last().unwrap().clone();
        let mut next: Vec<Poly> = f.iter().map(|c| c.mul(&lg)).collect();
        for (k, gc) in g.iter().enumerate() {
            let t = gc.mul(&lf);
            next[k + shift] = next[k + shift].sub(&t);
        }
        next.pop();
        trim(&mut next);
        if next.is_empty() {
            return None;
        }
        f = next;
    }
}

/// A cluster in homogeneous form: points satisfy u(x) y + v(x) = 0 mod m
/// with u a unit mod m.
pub(crate) struct HomogCluster {
    pub m: Poly,
    pub u: Poly,
    pub v: Poly,
}

/// Parametrizations over a squarefree factor from the eliminated linear
/// form; dynamic evaluation splits on zero divisors, and the quotient-ring
/// gcd handles the branches the linear form cannot decide.
fn params_from_linear(
    ctx: Option<&crate::modp::FpCtx>,
    u: &Poly,
    v: &Poly,
    m: Poly,
    a: &FramedCurve,
    b: &FramedCurve,
) -> std::result::Result<Vec<HomogCluster>, ZErr> {
    let ur = u.rem(&m);
    if ur.is_zero() {
        // the linear form says nothing here: full quotient-ring gcd
        let ya = YPoly::from_framed(a, &m);
        let yb = YPoly::from_framed(b, &m);
        let one = Poly::one(m.field());
        return Ok(linear_clusters(&ya, &yb, m)?
            .into_iter()
            .map(|(m, r)| HomogCluster {
                m,
                u: one.clone(),
                v: r.neg(),
            })
            .collect());
    }
    let invertible = ctx.map_or(false, |c| certified_coprime(c, &ur, &m))
        || ur.gcd(&m).deg() == Some(0);
    if invertible {
        let vr = v.rem(&m);
        Ok(vec![HomogCluster { m, u: ur, v: vr }])
    } else {
        let g = ur.gcd(&m);
        if g.deg() == Some(0) {
            let vr = v.rem(&m);
            return Ok(vec![HomogCluster { m, u: ur, v: vr }]);
        }
        let rest = m.exact_div(&g);
        let mut out = params_from_linear(ctx, u, v, g, a, b)?;
        out.extend(params_from_linear(ctx, u, v, rest, a, b)?);
        Ok(out)
    }
}

/// All intersection clusters of a framed pair in homogeneous form, with
/// per-point multiplicities, Bezout-audited.
/// Certifies squarefreeness mod p: a trivial gcd of the reduction with its
/// derivative forces the exact discriminant to be nonzero. Returns None when
/// the certificate cannot be established (bad reduction or a true repeated
/// factor) and the exact decomposition must run.
fn certified_squarefree(ctx: &crate::modp::FpCtx, f: &Poly) -> bool {
    let Some(fbar) = ctx.poly(f) else {
        return false;
    };
    let mut deriv = Vec::with_capacity(fbar.len().saturating_sub(1));
    for (k, &c) in fbar.iter().enumerate().skip(1) {
        deriv.push(crate::modp::mul_mod(c, k as u64 % ctx.p, ctx.p));
    }
    crate::modp::fp_trim(&mut deriv);
    if deriv.is_empty() {
        return false;
    }
    crate::modp::fp_gcd(&fbar, &deriv, ctx.p).len() <= 1
}

/// Certifies coprimality mod p (sound in one direction, like above).
fn certified_coprime(ctx: &crate::modp::FpCtx, a: &Poly, b: &Poly) -> bool {
    let (Some(ab), Some(bb)) = (ctx.poly_allow_drop_u(a), ctx.poly_allow_drop_u(b)) else {
        return false;
    };
    if ab.is_empty() || bb.is_empty() {
        return false;
    }
    // a degree drop in the reduction of either side breaks the certificate
    if ab.len() != a.coeffs().len() || bb.len() != b.coeffs().len() {
        return false;
    }
    crate::modp::fp_gcd(&ab, &bb, ctx.p).len() <= 1
}

pub(crate) static RES_NS: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);
pub(crate) static YUN_NS: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);
pub(crate) static ELIM_NS: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);
pub(crate) static PARAM_NS: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);

pub(crate) fn intersect_framed_h(
    a: &FramedCurve,
    b: &FramedCurve,
    ctx: Option<&crate::modp::FpCtx>,
) -> std::result::Result<Vec<(HomogCluster, u32)>, ZErr> {
    let t0 = std::time::Instant::now();
    let res = resultant_y(a, b);
    RES_NS.fetch_add(t0.elapsed().as_nanos() as u64, std::sync::atomic::Ordering::Relaxed);
    if res.is_zero() {
        return Err(ZErr::Hard(Error::CommonComponent));
    }
    let expected = (a.degree * b.degree) as usize;
    if res.deg() != Some(expected) {
        return Err(ZErr::Frame(
            "resultant degree deficiency (intersections at infinity)",
        ));
    }
    let t1 = std::time::Instant::now();
    let decomp = if ctx.map_or(false, |c| certified_squarefree(c, &res)) {
        vec![(res.monic(), 1u32)]
    } else {
        res.squarefree_decomposition().map_err(ZErr::Hard)?
    };
    YUN_NS.fetch_add(t1.elapsed().as_nanos() as u64, std::sync::atomic::Ordering::Relaxed);
    let t2 = std::time::Instant::now();
    let linear = eliminate_to_linear(a, b);
    ELIM_NS.fetch_add(t2.elapsed().as_nanos() as u64, std::sync::atomic::Ordering::Relaxed);
    let mut clusters = Vec::new();
    let mut total = 0usize;
    let t3 = std::time::Instant::now();
    for (factor, mult) in decomp {
        let params = match &linear {
            Some((u, v)) => params_from_linear(ctx, u, v, factor, a, b)?,
            None => {
                let ya = YPoly::from_framed(a, &factor);
                let yb = YPoly::from_framed(b, &factor);
                let one = Poly::one(a.ycoeffs[0].field());
                linear_clusters(&ya, &yb, factor)?
                    .into_iter()
                    .map(|(m, r)| HomogCluster {
                        m,
                        u: one.clone(),
                        v: r.neg(),
                    })
                    .collect()
            }
        };
        for h in params {
            total += mult as usize * h.m.deg().unwrap_or(0);
            clusters.push((h, mult));
        }
    }
    PARAM_NS.fetch_add(t3.elapsed().as_nanos() as u64, std::sync::atomic::Ordering::Relaxed);
    // Bezout audit: the multiplicities of the clusters account for the
    // whole intersection cycle.
    if total != expected {
        return Err(ZErr::Frame(
            "multiplicity bookkeeping does not reach the Bezout bound",
        ));
    }
    Ok(clusters)
}

/// Exact intersection of two distinct curves in a fixed frame, with
/// explicit cluster parametrizations.
pub fn intersect_pair(
    a: &PlaneCurve,
    b: &PlaneCurve,
    frame: &ShearFrame,
) -> Result<PairIntersection> {
    if a.canonicalize() == b.canonicalize() {
        return Err(Error::CommonComponent);
    }
    let fa = frame_curve(a, frame).map_err(zerr_to_error)?;
    let fb = frame_curve(b, frame).map_err(zerr_to_error)?;
    let raw = intersect_framed_h(&fa, &fb, None).map_err(zerr_to_error)?;
    let mut clusters = Vec::with_capacity(raw.len());
    for (h, mult) in raw {
        let ur = h.u.rem(&h.m);
        let r = match inv_mod(&ur, &h.m) {
            InvOutcome::Inverse(inv) => h.v.neg().rem(&h.m).mul(&inv).rem(&h.m),
            InvOutcome::Split(_) => unreachable!("u is a unit on every cluster"),
        };
        clusters.push((
            PointCluster {
                frame_index: frame.index,
                m: h.m,
                r,
            },
            mult,
        ));
    }
    Ok(PairIntersection {
        a_idx: 0,
        b_idx: 1,
        frame_index: frame.index,
        clusters,
    })
}

/// C(x', r(x'), 1) mod m: the pullback of a framed curve to a cluster
/// with an explicit parametrization.
fn pullback(c: &FramedCurve, m: &Poly, r: &Poly) -> Poly {
    let field = m.field().clone();
    let mut acc = Poly::zero(&field);
    for coeff in c.ycoeffs.iter().rev() {
        acc = acc.mul(r).add(coeff).rem(m);
    }
    acc
}

/// The geometric points of a low-degree cluster, possibly after a quadratic
/// base change: degree-1 clusters convert directly; degree-2 clusters over
/// Q(zeta_8) are split over Q(zeta_24) when their discriminant admits an
/// exact square root there. Returns None when the points cannot be realized
/// in the supported tower.
pub fn cluster_points_split(cl: &PointCluster) -> Result<Option<Vec<ProjectivePoint>>> {
    if cl.degree() == 1 {
        return Ok(cl.to_point().map(|p| vec![p]));
    }
    if cl.degree() != 2 || cl.m.field().conductor() != 8 {
        return Ok(None);
    }
    let f24 = CyclotomicField::new(24);
    let b = cl.m.coeff(1);
    let c0 = cl.m.coeff(0);
    let disc = &(&b * &b) - &c0.scale(&crate::exactfield::rat_int(4));
    let Some(root) = crate::sqrtq::sqrt_zeta8_in_zeta24(&disc) else {
        return Ok(None);
    };
    let b24 = b.embed(&f24)?;
    let r24 = Poly::new(
        f24.clone(),
        cl.r
            .coeffs()
            .iter()
            .map(|e| e.embed(&f24))
            .collect::<Result<Vec<_>>>()?,
    );
    let frame = ShearFrame::by_index(cl.frame_index)
        .ok_or_else(|| Error::InvalidArgument("unknown frame index".into()))?;
    let half = crate::exactfield::rat(1, 2);
    let mut out = Vec::with_capacity(2);
    for sign in [1i64, -1] {
        let alpha = (&root.scale(&crate::exactfield::rat_int(sign)) - &b24).scale(&half);
        debug_assert!(Poly::new(
            f24.clone(),
            cl.m.coeffs()
                .iter()
                .map(|e| e.embed(&f24).expect("tower"))
                .collect::<Vec<_>>()
        )
        .eval(&alpha)
        .is_zero());
        let beta = r24.eval(&alpha);
        let old = frame.push_point(&[alpha, beta, f24.one()]);
        out.push(ProjectivePoint::new(old)?);
    }
    Ok(Some(out))
}

/// Membership of a curve on a cluster. The curve is defined over the base
/// field and the cluster is refined until membership is uniform, so this is
/// exact for census purposes.
pub fn contains_cluster(c: &PlaneCurve, cl: &PointCluster) -> Result<bool> {
    let frame = ShearFrame::by_index(cl.frame_index)
        .ok_or_else(|| Error::InvalidArgument("unknown frame index".into()))?;
    let fc = frame_curve(c, &frame).map_err(zerr_to_error)?;
    Ok(pullback(&fc, &cl.m, &cl.r).is_zero())
}

/// A cluster carrying the set of arrangement curves through it and the
/// tangential flag (some pair meets it with multiplicity above one).
#[derive(Clone, Debug)]
pub struct MergedCluster {
    pub cluster: PointCluster,
    /// Sorted indices of the curves containing the cluster.
    pub membership: Vec<usize>,
    pub tangential: bool,
}

/// Internal cluster with homogeneous parametrization u y + v = 0 (mod m),
/// u a unit mod m.
#[derive(Clone)]
struct Agg {
    m: Poly,
    u: Poly,
    v: Poly,
    tangential: bool,
}

struct RefinedAgg {
    m: Poly,
    u: Poly,
    v: Poly,
    tangential: bool,
    membership: Vec<usize>,
}

impl Agg {
    fn restricted(&self, m: &Poly) -> Agg {
        Agg {
            m: m.clone(),
            u: self.u.rem(m),
            v: self.v.rem(m),
            tangential: self.tangential,
        }
    }
}

/// The parametrizations of two clusters agree on a common factor g of their
/// moduli exactly when u1 v2 - u2 v1 vanishes mod g.
fn params_agree(a: &Agg, b: &Agg, g: &Poly) -> bool {
    a.u.mul(&b.v).sub(&b.u.mul(&a.v)).rem(g).is_zero()
}

/// The modular side of the screen: framed curves reduced mod p. Built once
/// per merge; a bad prime falls back to fully exact work per cluster.
struct FpScreen {
    ctx: crate::modp::FpCtx,
    curves_fp: Vec<Option<Vec<Vec<u64>>>>,
}

fn reduce_framed(ctx: &crate::modp::FpCtx, fc: &FramedCurve) -> Option<Vec<Vec<u64>>> {
    fc.ycoeffs
        .iter()
        .map(|c| {
            c.coeffs()
                .iter()
                .map(|e| ctx.elem(e))
                .collect::<Option<Vec<u64>>>()
        })
        .collect()
}

impl FpScreen {
    fn build(field: &CyclotomicField, framed: &[FramedCurve]) -> FpScreen {
        for attempt in 0..4 {
            let ctx = crate::modp::FpCtx::new(field, attempt);
            let curves_fp: Vec<Option<Vec<Vec<u64>>>> =
                framed.iter().map(|fc| reduce_framed(&ctx, fc)).collect();
            if curves_fp.iter().all(|c| c.is_some()) {
                return FpScreen { ctx, curves_fp };
            }
        }
        // keep the last attempt even if some curves failed to reduce; those
        // curves are handled exactly
        let ctx = crate::modp::FpCtx::new(field, 4);
        let curves_fp = framed.iter().map(|fc| reduce_framed(&ctx, fc)).collect();
        FpScreen { ctx, curves_fp }
    }

    fn poly(&self, q: &Poly) -> Option<Vec<u64>> {
        self.ctx.poly(q)
    }

    fn poly_allow_drop(&self, q: &Poly) -> Option<Vec<u64>> {
        q.coeffs().iter().map(|e| self.ctx.elem(e)).collect()
    }
}

/// Exact homogeneous pullback used by the refinement scan.
fn membership_pullback(fc: &FramedCurve, m: &Poly, u: &Poly, v: &Poly) -> Poly {
    let d = fc.ycoeffs.len() - 1;
    let neg_v = v.neg().rem(m);
    let ur = u.rem(m);
    // u^j mod m for j = 0..=d
    let mut upow = Vec::with_capacity(d + 1);
    upow.push(Poly::one(m.field()));
    for _ in 0..d {
        let next = upow.last().unwrap().mul(&ur).rem(m);
        upow.push(next);
    }
    let mut acc = Poly::zero(m.field());
    for (k, coeff) in fc.ycoeffs.iter().enumerate().rev() {
        acc = acc.mul(&neg_v).rem(m);
        if !coeff.is_zero() {
            acc = acc.add(&coeff.rem(m).mul(&upow[d - k]).rem(m));
        }
    }
    acc.rem(m)
}

/// Refines one cluster against every curve until membership is uniform,
/// splitting when a pullback shares a proper factor with the modulus. The
/// modular screen certifies the common no-membership case cheaply; every
/// hit is confirmed exactly. Decisions made for earlier curves hold for the
/// halves of a split (membership and coprimality pass to divisors), so the
/// scan resumes where it stopped instead of restarting.
static PULL_NS: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);
static PULL_CT: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);
static GCD_NS: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);
static SCREEN_NS: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);

/// Value of u^d C(x0, -v/u, 1) at a single field point; a cheap exact
/// witness that a candidate rational point lies on a curve.
fn homog_value_at(
    fc: &FramedCurve,
    alpha: &CyclotomicElement,
    u: &Poly,
    v: &Poly,
) -> CyclotomicElement {
    let ua = u.eval(alpha);
    let nva = -&v.eval(alpha);
    let field = alpha.field();
    let mut acc = field.zero();
    let d = fc.ycoeffs.len() - 1;
    let mut upow = Vec::with_capacity(d + 1);
    upow.push(field.one());
    for _ in 0..d {
        let next = upow.last().unwrap() * &ua;
        upow.push(next);
    }
    for (k, coeff) in fc.ycoeffs.iter().enumerate().rev() {
        acc = &(&acc * &nva) + &(&coeff.eval(alpha) * &upow[d - k]);
    }
    acc
}

fn refine_membership(
    agg: Agg,
    framed: &[FramedCurve],
    screen: &FpScreen,
    seen: &mut BTreeMap<Poly, (Poly, Poly)>,
    alpha_index: &mut BTreeMap<u64, Vec<CyclotomicElement>>,
    flag_merges: &mut Vec<Poly>,
    out: &mut Vec<RefinedAgg>,
) -> std::result::Result<(), ZErr> {
    struct Item {
        agg: Agg,
        next_curve: usize,
        membership: Vec<usize>,
    }
    let mut work: VecDeque<Item> = VecDeque::new();
    work.push_back(Item {
        agg,
        next_curve: 0,
        membership: Vec::new(),
    });
    'work: while let Some(item) = work.pop_front() {
        let c = item.agg;
        // the same geometric cluster reaches here once per source pair;
        // refine it once and only merge the tangential flags afterwards
        if let Some((u0, v0)) = seen.get(&c.m) {
            let rep = Agg {
                m: c.m.clone(),
                u: u0.clone(),
                v: v0.clone(),
                tangential: false,
            };
            if !params_agree(&c, &rep, &c.m) {
                return Err(ZErr::Frame("distinct points share an x'-value"));
            }
            if c.tangential {
                flag_merges.push(c.m.clone());
            }
            continue 'work;
        }
        let mut membership = item.membership;
        let m_fp = screen.poly(&c.m);
        let u_fp = screen.poly_allow_drop(&c.u.rem(&c.m));
        let v_fp = screen.poly_allow_drop(&c.v.rem(&c.m));
        for j in item.next_curve..framed.len() {
            if let (Some(mf), Some(uf), Some(vf), Some(cf)) =
                (&m_fp, &u_fp, &v_fp, &screen.curves_fp[j])
            {
                let t_s = std::time::Instant::now();
                let pb = crate::modp::fp_pullback_h(cf, uf, vf, mf, screen.ctx.p);
                let gbar = if pb.is_empty() {
                    None
                } else {
                    Some(crate::modp::fp_gcd(mf, &pb, screen.ctx.p))
                };
                SCREEN_NS.fetch_add(t_s.elapsed().as_nanos() as u64, std::sync::atomic::Ordering::Relaxed);
                match &gbar {
                    Some(g) if g.len() <= 1 => {
                        // certified: nonzero pullback coprime to the modulus
                        continue;
                    }
                    Some(g) if g.len() == 2 => {
                        // the split factor is linear mod p; an already-known
                        // rational point with this reduction can certify the
                        // exact split by plain evaluations
                        let p = screen.ctx.p;
                        let root = crate::modp::mul_mod(
                            (p - g[0] % p) % p,
                            crate::modp::pow_mod_pub(g[1], p - 2, p),
                            p,
                        );
                        let mut fast_split = None;
                        if let Some(cands) = alpha_index.get(&root) {
                            for alpha in cands {
                                if c.m.eval(alpha).is_zero()
                                    && homog_value_at(&framed[j], alpha, &c.u, &c.v).is_zero()
                                {
                                    fast_split = Some(alpha.clone());
                                    break;
                                }
                            }
                        }
                        if let Some(alpha) = fast_split {
                            let h = Poly::x_minus(&alpha);
                            let rest = c.m.exact_div(&h);
                            let mut on = membership.clone();
                            on.push(j);
                            work.push_back(Item {
                                agg: c.restricted(&h),
                                next_curve: j + 1,
                                membership: on,
                            });
                            work.push_back(Item {
                                agg: c.restricted(&rest),
                                next_curve: j + 1,
                                membership,
                            });
                            continue 'work;
                        }
                    }
                    _ => {}
                }
            }
            let t_pull = std::time::Instant::now();
            let pull = membership_pullback(&framed[j], &c.m, &c.u, &c.v);
            PULL_NS.fetch_add(t_pull.elapsed().as_nanos() as u64, std::sync::atomic::Ordering::Relaxed);
            PULL_CT.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            if pull.is_zero() {
                membership.push(j);
                continue;
            }
            let t_gcd = std::time::Instant::now();
            let h = c.m.gcd(&pull);
            GCD_NS.fetch_add(t_gcd.elapsed().as_nanos() as u64, std::sync::atomic::Ordering::Relaxed);
            if h.deg().map_or(false, |d| d > 0) {
                // the h-half lies on curve j, the rest is certified off it
                let rest = c.m.exact_div(&h);
                let mut on = membership.clone();
                on.push(j);
                work.push_back(Item {
                    agg: c.restricted(&h),
                    next_curve: j + 1,
                    membership: on,
                });
                work.push_back(Item {
                    agg: c.restricted(&rest),
                    next_curve: j + 1,
                    membership,
                });
                continue 'work;
            }
        }
        seen.insert(c.m.clone(), (c.u.clone(), c.v.clone()));
        if c.m.deg() == Some(1) {
            let alpha = -&c.m.coeff(0);
            if let Some(abar) = screen.ctx.elem(&alpha) {
                alpha_index.entry(abar).or_default().push(alpha);
            }
        }
        out.push(RefinedAgg {
            m: c.m,
            u: c.u,
            v: c.v,
            tangential: c.tangential,
            membership,
        });
    }
    Ok(())
}

/// Splits and merges the clusters of all pairs of an arrangement until:
/// curve membership is uniform on every cluster, the moduli are pairwise
/// coprime, and the parametrizations agree wherever moduli overlapped (the
/// cross-pair collision audit). Deterministic; explicit parametrizations
/// are computed once per final cluster at the very end.
fn merge_raw_clusters(
    raw: Vec<Agg>,
    framed: &[FramedCurve],
    frame: &ShearFrame,
) -> std::result::Result<Vec<MergedCluster>, ZErr> {
    let field = match framed.first() {
        Some(fc) => fc.ycoeffs[0].field().clone(),
        None => return Ok(Vec::new()),
    };
    let screen = FpScreen::build(&field, framed);
    let mut incoming: Vec<Agg> = raw;
    let mut merged: BTreeMap<Poly, RefinedAgg> = BTreeMap::new();
    let mut seen: BTreeMap<Poly, (Poly, Poly)> = BTreeMap::new();
    let mut alpha_index: BTreeMap<u64, Vec<CyclotomicElement>> = BTreeMap::new();
    loop {
        // stage A: membership refinement, then merge identical clusters
        let stage_a = std::time::Instant::now();
        let n_in = incoming.len();
        let mut refined = Vec::new();
        let mut flag_merges = Vec::new();
        for agg in incoming.drain(..) {
            refine_membership(
                agg,
                framed,
                &screen,
                &mut seen,
                &mut alpha_index,
                &mut flag_merges,
                &mut refined,
            )?;
        }
        crate::error::trace(|| {
            format!(
                "stage A: {} in, {} refined, {:?}; screen {}ms, pull {}x {}ms, gcd {}ms",
                n_in,
                refined.len(),
                stage_a.elapsed(),
                SCREEN_NS.load(std::sync::atomic::Ordering::Relaxed) / 1_000_000,
                PULL_CT.load(std::sync::atomic::Ordering::Relaxed),
                PULL_NS.load(std::sync::atomic::Ordering::Relaxed) / 1_000_000,
                GCD_NS.load(std::sync::atomic::Ordering::Relaxed) / 1_000_000,
            )
        });
        for r in refined {
            debug_assert!(!merged.contains_key(&r.m), "the seen-cache dedupes");
            merged.insert(r.m.clone(), r);
        }
        for m in flag_merges {
            if let Some(entry) = merged.get_mut(&m) {
                entry.tangential = true;
            }
        }

        // stage B: certify the moduli pairwise coprime; the product of all
        // reduced moduli is squarefree mod p exactly when they are pairwise
        // coprime and squarefree mod p, and any exact common factor survives
        // reduction, so only flagged clusters need exact resolution
        let keys: Vec<Poly> = merged.keys().cloned().collect();
        let fps: Vec<Option<Vec<u64>>> = keys.iter().map(|m| screen.poly(m)).collect();
        let p = screen.ctx.p;
        let mut product = vec![1u64];
        for f in fps.iter().flatten() {
            let mut next = vec![0u64; product.len() + f.len() - 1];
            for (i, &a) in product.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in f.iter().enumerate() {
                    next[i + j] = (next[i + j] + crate::modp::mul_mod(a, b, p)) % p;
                }
            }
            product = next;
        }
        let mut derivative = Vec::with_capacity(product.len().saturating_sub(1));
        for (k, &c) in product.iter().enumerate().skip(1) {
            derivative.push(crate::modp::mul_mod(c, k as u64 % p, p));
        }
        crate::modp::fp_trim(&mut derivative);
        let repeated = if derivative.is_empty() {
            product.clone()
        } else {
            crate::modp::fp_gcd(&product, &derivative, p)
        };
        let mut involved: Vec<Poly> = Vec::new();
        for (i, f) in fps.iter().enumerate() {
            match f {
                Some(f) => {
                    if repeated.len() > 1 && crate::modp::fp_gcd(f, &repeated, p).len() > 1 {
                        involved.push(keys[i].clone());
                    }
                }
                None => involved.push(keys[i].clone()),
            }
        }
        crate::error::trace(|| {
            format!(
                "stage B: {} clusters, {} involved",
                merged.len(),
                involved.len()
            )
        });
        if involved.is_empty() {
            break;
        }
        // exact resolution among the flagged clusters: overlap factors are
        // merged (with the collision audit) and everything touched goes
        // back through stage A
        let mut queue: VecDeque<Agg> = VecDeque::new();
        for key in &involved {
            let r = merged.remove(key).expect("flagged key present");
            seen.remove(key);
            queue.push_back(Agg {
                m: r.m,
                u: r.u,
                v: r.v,
                tangential: r.tangential,
            });
        }
        let mut settled: Vec<Agg> = Vec::new();
        let mut any_split = false;
        'outer: while let Some(c) = queue.pop_front() {
            if c.m.deg().map_or(true, |d| d == 0) {
                continue;
            }
            for i in 0..settled.len() {
                let g = c.m.gcd(&settled[i].m);
                if g.deg().map_or(true, |d| d == 0) {
                    continue;
                }
                any_split = true;
                let e = settled.swap_remove(i);
                if !params_agree(&c, &e, &g) {
                    return Err(ZErr::Frame("distinct points share an x'-value"));
                }
                let c_rest = c.m.exact_div(&g);
                let e_rest = e.m.exact_div(&g);
                let mut shared = c.restricted(&g);
                shared.tangential |= e.tangential;
                queue.push_back(shared);
                if c_rest.deg().map_or(false, |d| d > 0) {
                    queue.push_back(c.restricted(&c_rest));
                }
                if e_rest.deg().map_or(false, |d| d > 0) {
                    queue.push_back(e.restricted(&e_rest));
                }
                continue 'outer;
            }
            settled.push(c);
        }
        incoming = settled;
        if !any_split {
            // nothing actually overlapped (bad-prime noise): re-merge the
            // settled clusters and stop
            let mut refined = Vec::new();
            let mut flag_merges = Vec::new();
            for agg in incoming.drain(..) {
                refine_membership(
                    agg,
                    framed,
                    &screen,
                    &mut seen,
                    &mut alpha_index,
                    &mut flag_merges,
                    &mut refined,
                )?;
            }
            for r in refined {
                merged.insert(r.m.clone(), r);
            }
            for m in flag_merges {
                if let Some(entry) = merged.get_mut(&m) {
                    entry.tangential = true;
                }
            }
            break;
        }
    }

    // explicit parametrizations for the survivors, in parallel
    let finals: Vec<RefinedAgg> = merged.into_values().collect();
    let mut done: Vec<MergedCluster> = finals
        .par_iter()
        .map(|r| {
            let ur = r.u.rem(&r.m);
            let explicit = match inv_mod(&ur, &r.m) {
                InvOutcome::Inverse(inv) => r.v.neg().rem(&r.m).mul(&inv).rem(&r.m),
                InvOutcome::Split(_) => unreachable!("u is a unit on every refined cluster"),
            };
            MergedCluster {
                cluster: PointCluster {
                    frame_index: frame.index,
                    m: r.m.clone(),
                    r: explicit,
                },
                membership: r.membership.clone(),
                tangential: r.tangential,
            }
        })
        .collect();
    done.sort_by(|a, b| a.cluster.cmp(&b.cluster));
    Ok(done)
}

/// Public form of the refinement: re-frames the curves and merges clusters
/// that were produced pair by pair.
pub fn refine_and_merge(
    pairs: &[PairIntersection],
    curves: &[PlaneCurve],
) -> Result<Vec<MergedCluster>> {
    let Some(first) = pairs.first() else {
        return Ok(Vec::new());
    };
    let frame = ShearFrame::by_index(first.frame_index)
        .ok_or_else(|| Error::InvalidArgument("unknown frame index".into()))?;
    for p in pairs {
        if p.frame_index != frame.index() {
            return Err(Error::InvalidArgument(
                "pairs computed in inconsistent frames".into(),
            ));
        }
    }
    let framed = curves
        .iter()
        .map(|c| frame_curve(c, &frame))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(zerr_to_error)?;
    let raw: Vec<Agg> = pairs
        .iter()
        .flat_map(|p| {
            p.clusters.iter().map(|(c, k)| Agg {
                m: c.m.clone(),
                u: Poly::one(c.m.field()),
                v: c.r.neg(),
                tangential: *k > 1,
            })
        })
        .collect();
    merge_raw_clusters(raw, &framed, &frame).map_err(zerr_to_error)
}

/// The full arrangement pipeline under one frame: frame every curve, run
/// all pairs in parallel keeping homogeneous parametrizations, then refine
/// and merge. Frame failures bubble up as `ZErr::Frame` so the driver can
/// move to the next frame.
pub(crate) fn arrangement_clusters_in_frame(
    curves: &[PlaneCurve],
    frame: &ShearFrame,
) -> std::result::Result<Vec<MergedCluster>, ZErr> {
    let framed: Vec<FramedCurve> = curves
        .iter()
        .map(|c| frame_curve(c, frame))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let n = curves.len();
    let mut index_pairs = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            index_pairs.push((i, j));
        }
    }
    let field = curves[0].field().clone();
    let ctx = crate::modp::FpCtx::new(&field, 0);
    // short-circuits on the first frame rejection, so bad frames are cheap
    let per_pair: std::result::Result<Vec<Vec<(HomogCluster, u32)>>, ZErr> = index_pairs
        .par_iter()
        .map(|&(i, j)| intersect_framed_h(&framed[i], &framed[j], Some(&ctx)))
        .collect();
    let raw: Vec<Agg> = per_pair?
        .into_iter()
        .flatten()
        .map(|(h, mult)| Agg {
            m: h.m,
            u: h.u,
            v: h.v,
            tangential: mult > 1,
        })
        .collect();
    merge_raw_clusters(raw, &framed, frame)
}

/// Whether two binary forms share a projective root: a common root of the
/// dehomogenizations, or a simultaneous degree drop (a shared root at the
/// parameter's infinity).
fn binary_forms_share_root(
    a: &crate::tangency::BinaryForm,
    b: &crate::tangency::BinaryForm,
) -> bool {
    let field = a.coeffs[0].field().clone();
    let fa = Poly::new(field.clone(), a.coeffs.clone());
    let fb = Poly::new(field, b.coeffs.clone());
    let inf_a = a.degree as usize - fa.deg().unwrap_or(0);
    let inf_b = b.degree as usize - fb.deg().unwrap_or(0);
    if inf_a > 0 && inf_b > 0 {
        return true;
    }
    fa.gcd(&fb).deg().map_or(false, |d| d > 0)
}

/// A frame family is dead when some pair of curves intersects on the
/// family's line at infinity {p x + q y + z = 0}: no shear in the family
/// can then reach the Bezout bound. One cheap restriction test per family
/// avoids running the full pipeline against hopeless frames.
fn family_viable(curves: &[PlaneCurve], p: i64, q: i64) -> bool {
    let field = curves[0].field().clone();
    let Ok(kill_line) = PlaneCurve::new(
        field.clone(),
        1,
        [
            ((1, 0, 0), field.int(p)),
            ((0, 1, 0), field.int(q)),
            ((0, 0, 1), field.one()),
        ],
    ) else {
        return false;
    };
    let mut restrictions = Vec::with_capacity(curves.len());
    for c in curves {
        match crate::tangency::restrict_to_line(c, &kill_line) {
            Ok(form) => restrictions.push(form),
            // the line is a component of a member
            Err(_) => return false,
        }
    }
    let n = restrictions.len();
    let mut index_pairs = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            index_pairs.push((i, j));
        }
    }
    !index_pairs
        .par_iter()
        .any(|&(i, j)| binary_forms_share_root(&restrictions[i], &restrictions[j]))
}

/// Runs the pipeline over the deterministic frame sequence starting at
/// `start_index` and returns the first frame that passes every audit,
/// together with its merged clusters.
pub(crate) fn arrangement_clusters(
    curves: &[PlaneCurve],
    start_index: usize,
) -> Result<(ShearFrame, Vec<MergedCluster>)> {
    let mut family_ok: BTreeMap<(i64, i64), bool> = BTreeMap::new();
    let mut idx = start_index;
    while let Some(frame) = ShearFrame::by_index(idx) {
        let fam = frame.family();
        let viable = *family_ok
            .entry(fam)
            .or_insert_with(|| family_viable(curves, fam.0, fam.1));
        if !viable {
            crate::error::trace(|| format!("family {fam:?} skipped: intersections at infinity"));
            idx += 1;
            continue;
        }
        let started = std::time::Instant::now();
        match arrangement_clusters_in_frame(curves, &frame) {
            Ok(merged) => {
                crate::error::trace(|| {
                    format!(
                        "census of {} curves settled in {:?} ({:?}); res {}ms yun {}ms elim {}ms param {}ms",
                        curves.len(),
                        frame,
                        started.elapsed(),
                        RES_NS.load(std::sync::atomic::Ordering::Relaxed) / 1_000_000,
                        YUN_NS.load(std::sync::atomic::Ordering::Relaxed) / 1_000_000,
                        ELIM_NS.load(std::sync::atomic::Ordering::Relaxed) / 1_000_000,
                        PARAM_NS.load(std::sync::atomic::Ordering::Relaxed) / 1_000_000,
                    )
                });
                return Ok((frame, merged));
            }
            Err(ZErr::Frame(why)) => {
                crate::error::trace(|| {
                    format!("{frame:?} rejected after {:?}: {why}", started.elapsed())
                });
                idx += 1;
            }
            Err(ZErr::Hard(e)) => return Err(e),
        }
    }
    Err(Error::FrameExhausted(FRAME_CAP))
}

/// The smallest frame in the deterministic sequence under which the whole
/// arrangement pipeline passes its genericity audits.
pub fn choose_frame(curves: &[PlaneCurve]) -> Result<ShearFrame> {
    arrangement_clusters(curves, 0).map(|(f, _)| f)
}

// -- smoothness ----------------------------------------------------------------

/// Whether the three partial derivatives share a projective zero; drives
/// `PlaneCurve::is_smooth` for degree >= 3. The y-gcds here may have any
/// degree (partials meet very tangentially at singular points), so this path
/// never demands linear parametrizations.
pub(crate) fn partials_have_common_zero(curve: &PlaneCurve) -> Result<bool> {
    let [gx, gy, gz] = curve.gradient();
    let (Some(gx), Some(gy), Some(gz)) = (gx, gy, gz) else {
        // the curve misses a variable entirely: for degree >= 2 the
        // corresponding coordinate point is singular
        return Ok(curve.degree() >= 2);
    };
    let mut idx = 0usize;
    'frames: while let Some(frame) = ShearFrame::by_index(idx) {
        idx += 1;
        let fa = match frame_curve(&gx, &frame) {
            Ok(f) => f,
            Err(ZErr::Frame(_)) => continue 'frames,
            Err(ZErr::Hard(e)) => return Err(e),
        };
        let fb = match frame_curve(&gy, &frame) {
            Ok(f) => f,
            Err(ZErr::Frame(_)) => continue 'frames,
            Err(ZErr::Hard(e)) => return Err(e),
        };
        let fz = match frame_curve(&gz, &frame) {
            Ok(f) => f,
            Err(ZErr::Frame(_)) => continue 'frames,
            Err(ZErr::Hard(e)) => return Err(e),
        };
        let res = resultant_y(&fa, &fb);
        if res.is_zero() {
            // the first two partials share a whole component; it must meet
            // the zero locus of the third somewhere, and by the Euler
            // relation such a point is singular on the curve
            return Ok(true);
        }
        let expected = (fa.degree * fb.degree) as usize;
        if res.deg() != Some(expected) {
            continue 'frames;
        }
        let radical = res.squarefree_part()?;
        if radical.deg() == Some(0) {
            return Ok(false);
        }
        let ya = YPoly::from_framed(&fa, &radical);
        let yb = YPoly::from_framed(&fb, &radical);
        for (m, g) in gcd_mod(&ya, &yb, radical) {
            let yz = YPoly::from_framed(&fz, &m);
            for (_m2, w) in gcd_mod(&g, &yz, m.clone()) {
                match w.deg_y() {
                    // a common root in y above this branch: singular point
                    Some(d) if d >= 1 => return Ok(true),
                    // gcd is a unit: no common zero on this branch
                    Some(0) => {}
                    Some(_) | None => {
                        // zero gcd cannot happen: g is nonzero mod every
                        // branch by construction
                        return Ok(true);
                    }
                }
            }
        }
        return Ok(false);
    }
    Err(Error::FrameExhausted(FRAME_CAP))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane;

    fn qq() -> CyclotomicField {
        CyclotomicField::rationals()
    }

    fn conic(field: &CyclotomicField, coeffs: &[(plane::Mono, i64)]) -> PlaneCurve {
        PlaneCurve::new(
            field.clone(),
            2,
            coeffs
                .iter()
                .map(|&(m, c)| (m, field.int(c)))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn unit_circle(field: &CyclotomicField) -> PlaneCurve {
        conic(field, &[((2, 0, 0), 1), ((0, 2, 0), 1), ((0, 0, 2), -1)])
    }

    #[test]
    fn two_transverse_conics_meet_in_four_points() {
        // x^2+y^2-z^2 and xy-z^2: eliminating z gives x^2-xy+y^2 = 0, so the
        // four intersection points lie on the directions y = (primitive 6th
        // root) x where the gradients (2x,2y,-2z) and (y,x,-2z) are never
        // proportional: all four intersections are transverse.
        let f = qq();
        let a = unit_circle(&f);
        let b = conic(&f, &[((1, 1, 0), 1), ((0, 0, 2), -1)]);
        let (frame, merged) = arrangement_clusters(&[a.clone(), b.clone()], 0).unwrap();
        let pair = intersect_pair(&a, &b, &frame).unwrap();
        assert_eq!(pair.multiplicity_sum(), 4);
        let total: u32 = merged.iter().map(|c| c.cluster.degree()).sum();
        assert_eq!(total, 4);
        for c in &merged {
            assert_eq!(c.membership, vec![0, 1]);
            assert!(!c.tangential);
        }
    }

    #[test]
    fn tangent_conics_at_infinity_need_a_zmix_frame() {
        // x^2+y^2-z^2 and x^2+y^2-4z^2 touch at (1 : +-i : 0), so every pure
        // x-shear is rejected and a z-mixing frame takes over; the contact is
        // tangential of multiplicity 2 at each of the two conjugate points.
        let f = qq();
        let a = unit_circle(&f);
        let b = conic(&f, &[((2, 0, 0), 1), ((0, 2, 0), 1), ((0, 0, 2), -4)]);
        let (frame, merged) = arrangement_clusters(&[a.clone(), b.clone()], 0).unwrap();
        assert!(frame.index() >= SHEARS_PER_FAMILY, "pure shears cannot fix infinity");
        let pair = intersect_pair(&a, &b, &frame).unwrap();
        assert_eq!(pair.multiplicity_sum(), 4);
        // over Q the two conjugate points form one degree-2 cluster met with
        // multiplicity 2
        assert_eq!(merged.len(), 1);
        assert_eq!(merged[0].cluster.degree(), 2);
        assert!(merged[0].tangential);
        assert_eq!(merged[0].membership, vec![0, 1]);
    }

    #[test]
    fn three_concurrent_lines_form_one_cluster() {
        let f = qq();
        let mk_line = |a: i64, b: i64, c: i64| {
            PlaneCurve::new(
                f.clone(),
                1,
                [
                    ((1, 0, 0), f.int(a)),
                    ((0, 1, 0), f.int(b)),
                    ((0, 0, 1), f.int(c)),
                ],
            )
            .unwrap()
        };
        // all through (1 : 1 : 1)
        let lines = vec![mk_line(1, -1, 0), mk_line(1, 0, -1), mk_line(0, 1, -1)];
        let (_, merged) = arrangement_clusters(&lines, 0).unwrap();
        assert_eq!(merged.len(), 1);
        let only = &merged[0];
        assert_eq!(only.cluster.degree(), 1);
        assert_eq!(only.membership, vec![0, 1, 2]);
        assert!(!only.tangential);
        let p = only.cluster.to_point().unwrap();
        assert_eq!(p, ProjectivePoint::from_ints(&f, 1, 1, 1));
    }

    #[test]
    fn cluster_point_roundtrip() {
        let f = qq();
        let frame = ShearFrame::by_index(3).unwrap();
        let p = ProjectivePoint::from_ints(&f, 5, -7, 2);
        let cl = PointCluster::from_point(&p, &frame).unwrap();
        assert_eq!(cl.degree(), 1);
        assert_eq!(cl.to_point().unwrap(), p);
    }

    #[test]
    fn membership_coherence_after_merge() {
        let f = qq();
        let a = unit_circle(&f);
        let b = conic(&f, &[((1, 1, 0), 1), ((0, 0, 2), -1)]);
        let c = conic(&f, &[((2, 0, 0), 1), ((0, 2, 0), 3), ((0, 0, 2), -2)]);
        let curves = vec![a, b, c];
        let (frame, merged) = arrangement_clusters(&curves, 0).unwrap();
        for (i, x) in curves.iter().enumerate() {
            for y in &curves[i + 1..] {
                let pair = intersect_pair(x, y, &frame).unwrap();
                assert_eq!(pair.multiplicity_sum(), 4);
            }
        }
        for cl in &merged {
            assert!(cl.membership.len() >= 2);
            for (j, curve) in curves.iter().enumerate() {
                let member = contains_cluster(curve, &cl.cluster).unwrap();
                assert_eq!(member, cl.membership.contains(&j));
            }
        }
    }

    #[test]
    fn doubly_tangent_conics_lump_into_one_flagged_cluster() {
        // x^2 - yz and x^2 + yz touch at (0:0:1) and at (0:1:0), each with
        // multiplicity 2; one contact is at infinity so a z-mix frame is
        // required. Both points share multiplicity class and membership, so
        // gcd-driven refinement keeps them as a single degree-2 cluster --
        // exactly the granularity the census needs.
        let f = qq();
        let a = a2(&f);
        let b = b2(&f);
        let (frame, merged) = arrangement_clusters(&[a.clone(), b.clone()], 0).unwrap();
        assert!(frame.index() >= SHEARS_PER_FAMILY);
        let pair = intersect_pair(&a, &b, &frame).unwrap();
        assert_eq!(pair.multiplicity_sum(), 4);
        assert_eq!(merged.len(), 1);
        assert_eq!(merged[0].cluster.degree(), 2);
        assert!(merged[0].tangential);
        assert_eq!(merged[0].membership, vec![0, 1]);
        // a third conic through (0:0:1) but not (0:1:0) separates the points
        let sep = conic(&f, &[((2, 0, 0), 1), ((0, 2, 0), 1), ((1, 0, 1), -1)]);
        let (_, merged3) = arrangement_clusters(&[a2(&f), b2(&f), sep], 0).unwrap();
        let tangential: Vec<_> = merged3.iter().filter(|m| m.tangential).collect();
        assert_eq!(tangential.len(), 2);
        for t in &tangential {
            assert_eq!(t.cluster.degree(), 1);
        }
        let pts: Vec<ProjectivePoint> = tangential
            .iter()
            .map(|c| c.cluster.to_point().unwrap())
            .collect();
        assert!(pts.contains(&ProjectivePoint::from_ints(&f, 0, 0, 1)));
        assert!(pts.contains(&ProjectivePoint::from_ints(&f, 0, 1, 0)));
    }

    fn a2(f: &CyclotomicField) -> PlaneCurve {
        conic(f, &[((2, 0, 0), 1), ((0, 1, 1), -1)])
    }

    fn b2(f: &CyclotomicField) -> PlaneCurve {
        conic(f, &[((2, 0, 0), 1), ((0, 1, 1), 1)])
    }

    #[test]
    fn public_refine_and_merge_matches_pipeline() {
        let f = qq();
        let a = unit_circle(&f);
        let b = conic(&f, &[((1, 1, 0), 1), ((0, 0, 2), -1)]);
        let c = conic(&f, &[((2, 0, 0), 1), ((0, 2, 0), 3), ((0, 0, 2), -2)]);
        let curves = vec![a, b, c];
        let (frame, merged) = arrangement_clusters(&curves, 0).unwrap();
        let mut pairs = Vec::new();
        for i in 0..curves.len() {
            for j in (i + 1)..curves.len() {
                let mut pair = intersect_pair(&curves[i], &curves[j], &frame).unwrap();
                pair.a_idx = i;
                pair.b_idx = j;
                pairs.push(pair);
            }
        }
        let via_public = refine_and_merge(&pairs, &curves).unwrap();
        assert_eq!(via_public.len(), merged.len());
        for (x, y) in via_public.iter().zip(&merged) {
            assert_eq!(x.cluster, y.cluster);
            assert_eq!(x.membership, y.membership);
            assert_eq!(x.tangential, y.tangential);
        }
    }

    #[test]
    fn fermat_and_diagonal_cubic_are_smooth() {
        let f = qq();
        let fermat = PlaneCurve::new(
            f.clone(),
            4,
            [
                ((4, 0, 0), f.one()),
                ((0, 4, 0), f.one()),
                ((0, 0, 4), f.one()),
            ],
        )
        .unwrap();
        assert!(fermat.is_smooth().unwrap());
        let cubic = PlaneCurve::new(
            f.clone(),
            3,
            [
                ((3, 0, 0), f.one()),
                ((0, 3, 0), f.one()),
                ((0, 0, 3), f.one()),
            ],
        )
        .unwrap();
        assert!(cubic.is_smooth().unwrap());
    }

    #[test]
    fn nodal_and_cuspidal_cubics_are_singular() {
        let f = qq();
        // y^2 z = x^3 + x^2 z has a node at (0:0:1)
        let nodal = PlaneCurve::new(
            f.clone(),
            3,
            [
                ((0, 2, 1), f.one()),
                ((3, 0, 0), f.int(-1)),
                ((2, 0, 1), f.int(-1)),
            ],
        )
        .unwrap();
        assert!(!nodal.is_smooth().unwrap());
        // y^2 z = x^3 has a cusp at (0:0:1)
        let cuspidal = PlaneCurve::new(
            f.clone(),
            3,
            [((0, 2, 1), f.one()), ((3, 0, 0), f.int(-1))],
        )
        .unwrap();
        assert!(!cuspidal.is_smooth().unwrap());
        // xy (degree 2) is singular at (0:0:1)
        let two_lines = conic(&f, &[((1, 1, 0), 1)]);
        assert!(!two_lines.is_smooth().unwrap());
    }

    #[test]
    fn klein_quartic_is_smooth() {
        let f7 = CyclotomicField::new(7);
        let klein = PlaneCurve::new(
            f7.clone(),
            4,
            [
                ((3, 1, 0), f7.one()),
                ((0, 3, 1), f7.one()),
                ((1, 0, 3), f7.one()),
            ],
        )
        .unwrap();
        assert!(klein.is_smooth().unwrap());
    }

    #[test]
    fn common_component_is_a_hard_error() {
        let f = qq();
        let a = unit_circle(&f);
        let frame = ShearFrame::by_index(0).unwrap();
        assert!(matches!(
            intersect_pair(&a, &a, &frame),
            Err(Error::CommonComponent)
        ));
    }

    #[test]
    fn frame_invariance_of_cluster_statistics() {
        let f = qq();
        let a = unit_circle(&f);
        let b = conic(&f, &[((1, 1, 0), 1), ((0, 0, 2), -1)]);
        let c = conic(&f, &[((2, 0, 0), 1), ((0, 2, 0), 3), ((0, 0, 2), -2)]);
        let curves = vec![a, b, c];
        let (f1, m1) = arrangement_clusters(&curves, 0).unwrap();
        let (f2, m2) = arrangement_clusters(&curves, f1.index() + 1).unwrap();
        assert_ne!(f1.index(), f2.index());
        let stat = |m: &[MergedCluster]| {
            let mut v: Vec<(usize, u32, bool)> = m
                .iter()
                .map(|c| (c.membership.len(), c.cluster.degree(), c.tangential))
                .collect();
            v.sort();
            v
        };
        assert_eq!(stat(&m1), stat(&m2));
    }
}
