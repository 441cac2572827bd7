//! Classifying dual-plane points against a quartic by the multiplicity
//! partition of the quartic restricted to the corresponding line. Bitangents
//! show up as (2,2), flexes as (3,1), hyperflexes as (4) — identifying the
//! node/cusp/E6 points of the dual curve without ever computing it.
//!
//! Partitions come from gcd-based squarefree decomposition only; no root
//! finding anywhere.

use crate::error::{Error, Result};
use crate::exactfield::CyclotomicElement;
use crate::linalg;
use crate::plane::{PlaneCurve, ProjectivePoint};
use crate::poly::Poly;

/// A binary form of degree d: coefficients of s^i t^(d-i) for i = 0..=d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    pub degree: u32,
    pub coeffs: Vec<CyclotomicElement>,
}

impl BinaryForm {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// Root multiplicities of a binary form over the algebraic closure, sorted
/// descending; the entries sum to the degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TangencyPattern(Vec<u32>);

impl TangencyPattern {
    pub fn parts(&self) -> &[u32] {
        &self.0
    }
}

impl std::fmt::Display for TangencyPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Classification of a dual-plane point against a smooth quartic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DualPointLabel {
    Transverse,
    SimpleTangent,
    BitangentNode,
    FlexCusp,
    HyperflexE6,
    Other(TangencyPattern),
}

impl DualPointLabel {
    pub fn name(&self) -> &'static str {
        match self {
            DualPointLabel::Transverse => "transverse",
            DualPointLabel::SimpleTangent => "simple-tangent",
            DualPointLabel::BitangentNode => "bitangent-node",
            DualPointLabel::FlexCusp => "flex-cusp",
            DualPointLabel::HyperflexE6 => "hyperflex-E6",
            DualPointLabel::Other(_) => "other",
        }
    }
}

/// Deterministic parametrization of a line: the reduced-echelon kernel basis
/// of its coefficient row, giving two points p, q with (s,t) -> s p + t q.
fn line_parametrization(line: &PlaneCurve) -> Result<[[CyclotomicElement; 3]; 2]> {
    if line.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            got: line.degree(),
        });
    }
    let row = vec![
        line.coeff((1, 0, 0)),
        line.coeff((0, 1, 0)),
        line.coeff((0, 0, 1)),
    ];
    let basis = linalg::kernel_basis(vec![row], 3);
    debug_assert_eq!(basis.len(), 2);
    let mut it = basis.into_iter();
    let p: [CyclotomicElement; 3] = it.next().unwrap().try_into().unwrap();
    let q: [CyclotomicElement; 3] = it.next().unwrap().try_into().unwrap();
    Ok([p, q])
}

fn binary_mul(a: &[CyclotomicElement], b: &[CyclotomicElement]) -> Vec<CyclotomicElement> {
    let field = a[0].field();
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// Substitutes the line's parametrization into the curve, giving a binary
/// degree-d form. Errors when the line divides the curve (zero restriction).
pub fn restrict_to_line(curve: &PlaneCurve, line: &PlaneCurve) -> Result<BinaryForm> {
    let [p, q] = line_parametrization(line)?;
    let field = curve.field().clone();
    let d = curve.degree() as usize;
    // powers of the three binary linear forms s*p_i + t*q_i
    let mut pows: Vec<Vec<Vec<CyclotomicElement>>> = Vec::with_capacity(3);
    for i in 0..3 {
        let lin = vec![q[i].clone(), p[i].clone()]; // coefficient of t, then s
        let mut table = vec![vec![field.one()]];
        for k in 1..=d {
            let next = binary_mul(&table[k - 1], &lin);
            table.push(next);
        }
        pows.push(table);
    }
    let mut acc = vec![field.zero(); d + 1];
    for (&(a, b, c), coeff) in curve.coeffs() {
        let mut term = pows[0][a as usize].clone();
        term = binary_mul(&term, &pows[1][b as usize]);
        term = binary_mul(&term, &pows[2][c as usize]);
        for (k, v) in term.into_iter().enumerate() {
            acc[k] = &acc[k] + &(&v * coeff);
        }
    }
    let form = BinaryForm {
        degree: curve.degree(),
        coeffs: acc,
    };
    if form.is_zero() {
        return Err(Error::InvalidArgument(
            "the line is a component of the curve".into(),
        ));
    }
    Ok(form)
}

/// Multiplicity partition of a nonzero binary form: Yun decomposition of the
/// dehomogenization plus the multiplicity of the root at infinity.
pub fn multiplicity_partition(form: &BinaryForm) -> Result<TangencyPattern> {
    if form.is_zero() {
        return Err(Error::InvalidArgument(
            "zero binary form has no partition".into(),
        ));
    }
    let field = form.coeffs[0].field().clone();
    let f = Poly::new(field, form.coeffs.clone());
    let mut parts: Vec<u32> = Vec::new();
    let at_infinity = form.degree - f.deg().unwrap_or(0) as u32;
    if at_infinity > 0 {
        parts.push(at_infinity);
    }
    if f.deg().unwrap_or(0) > 0 {
        for (g, mult) in f.squarefree_decomposition()? {
            let count = g.deg().unwrap_or(0);
            parts.extend(std::iter::repeat(mult).take(count));
        }
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    debug_assert_eq!(parts.iter().sum::<u32>(), form.degree);
    Ok(TangencyPattern(parts))
}

/// The line of the dual plane corresponding to a point (a:b:c): ax+by+cz = 0.
pub fn dual_line(q: &ProjectivePoint) -> PlaneCurve {
    let c = q.coords();
    PlaneCurve::new(
        q.field().clone(),
        1,
        [
            ((1, 0, 0), c[0].clone()),
            ((0, 1, 0), c[1].clone()),
            ((0, 0, 1), c[2].clone()),
        ],
    )
    .expect("a point has a nonzero coordinate")
}

/// Classifies a dual-plane point against a smooth quartic via the partition
/// of the quartic restricted to the corresponding line.
pub fn classify_dual_point(
    q: &ProjectivePoint,
    quartic: &PlaneCurve,
) -> Result<(TangencyPattern, DualPointLabel)> {
    if quartic.degree() != 4 {
        return Err(Error::DegreeMismatch {
            expected: 4,
            got: quartic.degree(),
        });
    }
    let line = dual_line(q);
    let form = restrict_to_line(quartic, &line)?;
    let pattern = multiplicity_partition(&form)?;
    let label = match pattern.parts() {
        [1, 1, 1, 1] => DualPointLabel::Transverse,
        [2, 1, 1] => DualPointLabel::SimpleTangent,
        [2, 2] => DualPointLabel::BitangentNode,
        [3, 1] => DualPointLabel::FlexCusp,
        [4] => DualPointLabel::HyperflexE6,
        _ => DualPointLabel::Other(pattern.clone()),
    };
    Ok((pattern, label))
}

/// For each point: does the curve together with all three partials vanish?
pub fn verify_singular_on(curve: &PlaneCurve, points: &[ProjectivePoint]) -> Result<Vec<bool>> {
    let grad = curve.gradient();
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        let mut ok = curve.evaluate(p)?.is_zero();
        if ok {
            for g in grad.iter().flatten() {
                if !g.evaluate(p)?.is_zero() {
                    ok = false;
                    break;
                }
            }
        }
        out.push(ok);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::CyclotomicField;

    fn fermat(field: &CyclotomicField) -> PlaneCurve {
        PlaneCurve::new(
            field.clone(),
            4,
            [
                ((4, 0, 0), field.one()),
                ((0, 4, 0), field.one()),
                ((0, 0, 4), field.one()),
            ],
        )
        .unwrap()
    }

    fn line(field: &CyclotomicField, a: CyclotomicElement, b: CyclotomicElement, c: CyclotomicElement) -> PlaneCurve {
        PlaneCurve::new(
            field.clone(),
            1,
            [((1, 0, 0), a), ((0, 1, 0), b), ((0, 0, 1), c)],
        )
        .unwrap()
    }

    #[test]
    fn fermat_restricted_to_bitangent_line() {
        // restriction to x+y+z = 0 is 2(s^2+st+t^2)^2, worked out by hand
        // from s^4 + t^4 + (s+t)^4
        let f = CyclotomicField::rationals();
        let c = fermat(&f);
        let l = line(&f, f.one(), f.one(), f.one());
        let form = restrict_to_line(&c, &l).unwrap();
        let expect: Vec<i64> = vec![2, 4, 6, 4, 2];
        let got: Vec<CyclotomicElement> = expect.iter().map(|&k| f.int(k)).collect();
        assert_eq!(form.coeffs, got);
        let pat = multiplicity_partition(&form).unwrap();
        assert_eq!(pat.parts(), &[2, 2]);
    }

    #[test]
    fn fermat_restricted_to_hyperflex_line() {
        // on w y + z = 0 with w = zeta_8 the restriction collapses to s^4
        // because w^4 = -1
        let f8 = CyclotomicField::new(8);
        let c = fermat(&f8);
        let w = f8.zeta();
        let l = line(&f8, f8.zero(), w, f8.one());
        let form = restrict_to_line(&c, &l).unwrap();
        let pat = multiplicity_partition(&form).unwrap();
        assert_eq!(pat.parts(), &[4]);
    }

    #[test]
    fn generic_line_is_transverse() {
        let f = CyclotomicField::rationals();
        let c = fermat(&f);
        let l = line(&f, f.int(1), f.int(2), f.int(5));
        let form = restrict_to_line(&c, &l).unwrap();
        let pat = multiplicity_partition(&form).unwrap();
        assert_eq!(pat.parts(), &[1, 1, 1, 1]);
    }

    #[test]
    fn partition_examples() {
        let f = CyclotomicField::rationals();
        // s^4
        let s4 = BinaryForm {
            degree: 4,
            coeffs: vec![f.zero(), f.zero(), f.zero(), f.zero(), f.one()],
        };
        assert_eq!(multiplicity_partition(&s4).unwrap().parts(), &[4]);
        // s(s-t)(s+t)(s-2t) = s^4 - 2s^3 t - s^2 t^2 + 2 s t^3
        let distinct = BinaryForm {
            degree: 4,
            coeffs: vec![f.zero(), f.int(2), f.int(-1), f.int(-2), f.one()],
        };
        assert_eq!(
            multiplicity_partition(&distinct).unwrap().parts(),
            &[1, 1, 1, 1]
        );
        // s^3 t: a triple root and the root at infinity
        let s3t = BinaryForm {
            degree: 4,
            coeffs: vec![f.zero(), f.zero(), f.zero(), f.one(), f.zero()],
        };
        assert_eq!(multiplicity_partition(&s3t).unwrap().parts(), &[3, 1]);
        let zero = BinaryForm {
            degree: 2,
            coeffs: vec![f.zero(), f.zero(), f.zero()],
        };
        assert!(multiplicity_partition(&zero).is_err());
    }

    #[test]
    fn classify_fermat_points() {
        let f8 = CyclotomicField::new(8);
        let c = fermat(&f8);
        let node = ProjectivePoint::from_ints(&f8, 1, 1, 1);
        let (_, label) = classify_dual_point(&node, &c).unwrap();
        assert_eq!(label, DualPointLabel::BitangentNode);
        let w = f8.zeta();
        let e6 = ProjectivePoint::new([f8.zero(), w, f8.one()]).unwrap();
        let (_, label) = classify_dual_point(&e6, &c).unwrap();
        assert_eq!(label, DualPointLabel::HyperflexE6);
        let generic = ProjectivePoint::from_ints(&f8, 1, 2, 5);
        let (_, label) = classify_dual_point(&generic, &c).unwrap();
        assert_eq!(label, DualPointLabel::Transverse);
        // classification is scale invariant by canonical normalization
        let node2 = ProjectivePoint::new([f8.int(3), f8.int(3), f8.int(3)]).unwrap();
        let (_, l2) = classify_dual_point(&node2, &c).unwrap();
        assert_eq!(l2, DualPointLabel::BitangentNode);
    }

    #[test]
    fn line_component_is_an_error() {
        let f = CyclotomicField::rationals();
        let l = line(&f, f.one(), f.zero(), f.zero());
        let curve = crate::plane::curve_product(&[l.clone(), l.clone()]).unwrap();
        assert!(restrict_to_line(&curve, &l).is_err());
    }

    #[test]
    fn verify_singular_vacuous_and_negative() {
        let f = CyclotomicField::rationals();
        let c = fermat(&f);
        assert!(verify_singular_on(&c, &[]).unwrap().is_empty());
        // a smooth quartic is nowhere singular
        let p = ProjectivePoint::from_ints(&f, 1, 0, 0);
        assert_eq!(verify_singular_on(&c, &[p]).unwrap(), vec![false]);
    }
}
