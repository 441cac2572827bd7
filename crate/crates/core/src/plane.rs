//! Projective plane primitives: points with canonical coordinates,
//! homogeneous curves, evaluation, gradients, exact linear systems of
//! degree-d curves through prescribed points, conic irreducibility, products
//! and smoothness.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactfield::{CyclotomicElement, CyclotomicField};
use crate::linalg;

/// Exponent triple (a, b, c) of x^a y^b z^c. The derived tuple order is
/// lexicographic with x > y > z, which on a fixed total degree is the
/// graded-lex order used for canonical forms.
pub type Mono = (u32, u32, u32);

/// A point of the projective plane. Canonically normalized on construction:
/// the last nonzero coordinate equals one, so equality, hashing and ordering
/// are plain coordinate comparisons.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    coords: [CyclotomicElement; 3],
}

impl ProjectivePoint {
    pub fn new(coords: [CyclotomicElement; 3]) -> Result<Self> {
        let field = coords[0].field().clone();
        for c in &coords[1..] {
            if *c.field() != field {
                return Err(Error::FieldMismatch(
                    field.conductor(),
                    c.field().conductor(),
                ));
            }
        }
        let Some(last) = (0..3).rev().find(|&i| !coords[i].is_zero()) else {
            return Err(Error::InvalidArgument(
                "(0:0:0) is not a projective point".into(),
            ));
        };
        let inv = coords[last].inv().expect("nonzero coordinate");
        let normalized = [
            &coords[0] * &inv,
            &coords[1] * &inv,
            &coords[2] * &inv,
        ];
        Ok(ProjectivePoint {
            coords: normalized,
        })
    }

    pub fn from_ints(field: &CyclotomicField, x: i64, y: i64, z: i64) -> Self {
        ProjectivePoint::new([field.int(x), field.int(y), field.int(z)]).expect("nonzero point")
    }

    pub fn coords(&self) -> &[CyclotomicElement; 3] {
        &self.coords
    }

    pub fn field(&self) -> &CyclotomicField {
        self.coords[0].field()
    }

    pub fn embed(&self, target: &CyclotomicField) -> Result<Self> {
        ProjectivePoint::new([
            self.coords[0].embed(target)?,
            self.coords[1].embed(target)?,
            self.coords[2].embed(target)?,
        ])
    }
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} : {} : {})",
            self.coords[0], self.coords[1], self.coords[2]
        )
    }
}

/// A homogeneous plane curve of positive degree: a sparse map from exponent
/// triples to nonzero coefficients. Curves built through the public
/// constructors are canonical (graded-lex leading coefficient 1); gradients
/// keep their natural scaling so the Euler relation holds identically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlaneCurve {
    field: CyclotomicField,
    degree: u32,
    coeffs: BTreeMap<Mono, CyclotomicElement>,
}

impl PlaneCurve {
    /// Canonical constructor: validates homogeneity and rescales so the
    /// graded-lex leading coefficient is one.
    pub fn new(
        field: CyclotomicField,
        degree: u32,
        coeffs: impl IntoIterator<Item = (Mono, CyclotomicElement)>,
    ) -> Result<Self> {
        Ok(Self::raw(field, degree, coeffs)?.canonicalize())
    }

    /// As `new` but keeps the given scaling.
    pub(crate) fn raw(
        field: CyclotomicField,
        degree: u32,
        coeffs: impl IntoIterator<Item = (Mono, CyclotomicElement)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for ((a, b, c), v) in coeffs {
            if a + b + c != degree {
                return Err(Error::InvalidArgument(format!(
                    "monomial ({a},{b},{c}) does not have degree {degree}"
                )));
            }
            if *v.field() != field {
                return Err(Error::FieldMismatch(
                    field.conductor(),
                    v.field().conductor(),
                ));
            }
            if v.is_zero() {
                continue;
            }
            let slot = map.entry((a, b, c)).or_insert_with(|| field.zero());
            *slot = &*slot + &v;
            if slot.is_zero() {
                map.remove(&(a, b, c));
            }
        }
        if map.is_empty() {
            return Err(Error::InvalidArgument("zero curve".into()));
        }
        Ok(PlaneCurve {
            field,
            degree,
            coeffs: map,
        })
    }

    pub fn canonicalize(&self) -> Self {
        let (_, lead) = self.coeffs.last_key_value().expect("nonzero curve");
        if lead.is_one() {
            return self.clone();
        }
        let inv = lead.inv().expect("nonzero leading coefficient");
        PlaneCurve {
            field: self.field.clone(),
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, c)| (*m, c * &inv))
                .collect(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.coeffs
            .last_key_value()
            .map_or(false, |(_, c)| c.is_one())
    }

    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<Mono, CyclotomicElement> {
        &self.coeffs
    }

    pub fn coeff(&self, m: Mono) -> CyclotomicElement {
        self.coeffs
            .get(&m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn embed(&self, target: &CyclotomicField) -> Result<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for (m, c) in &self.coeffs {
            out.push((*m, c.embed(target)?));
        }
        PlaneCurve::new(target.clone(), self.degree, out)
    }

    /// Value of the form at the point's canonical coordinates; zero iff the
    /// point lies on the curve.
    pub fn evaluate(&self, p: &ProjectivePoint) -> Result<CyclotomicElement> {
        if *p.field() != self.field {
            return Err(Error::FieldMismatch(
                self.field.conductor(),
                p.field().conductor(),
            ));
        }
        let pows = coordinate_powers(p.coords(), self.degree);
        let mut acc = self.field.zero();
        for (&(a, b, c), coeff) in &self.coeffs {
            let m = &(&pows[0][a as usize] * &pows[1][b as usize]) * &pows[2][c as usize];
            acc = &acc + &(coeff * &m);
        }
        Ok(acc)
    }

    pub fn contains(&self, p: &ProjectivePoint) -> Result<bool> {
        Ok(self.evaluate(p)?.is_zero())
    }

    /// The three partial derivatives in their natural scaling, each
    /// homogeneous of degree d-1 (or zero, returned as None).
    pub fn gradient(&self) -> [Option<PlaneCurve>; 3] {
        let mut parts: [Vec<(Mono, CyclotomicElement)>; 3] = Default::default();
        for (&(a, b, c), coeff) in &self.coeffs {
            if a > 0 {
                parts[0].push((
                    (a - 1, b, c),
                    coeff.scale(&crate::exactfield::rat_int(a as i64)),
                ));
            }
            if b > 0 {
                parts[1].push((
                    (a, b - 1, c),
                    coeff.scale(&crate::exactfield::rat_int(b as i64)),
                ));
            }
            if c > 0 {
                parts[2].push((
                    (a, b, c - 1),
                    coeff.scale(&crate::exactfield::rat_int(c as i64)),
                ));
            }
        }
        parts.map(|list| {
            if list.is_empty() {
                None
            } else {
                Some(
                    PlaneCurve::raw(self.field.clone(), self.degree - 1, list)
                        .expect("derivative of a nonzero curve"),
                )
            }
        })
    }

    /// f(M v): substitution of the coordinate change given by the matrix
    /// rows, i.e. x -> m[0].(x,y,z) and so on.
    pub fn transform(&self, m: &[[CyclotomicElement; 3]; 3]) -> Result<Self> {
        let lin: Vec<BTreeMap<Mono, CyclotomicElement>> = (0..3)
            .map(|i| {
                let mut f = BTreeMap::new();
                for (j, mono) in [(0usize, (1, 0, 0)), (1, (0, 1, 0)), (2, (0, 0, 1))] {
                    if !m[i][j].is_zero() {
                        f.insert(mono, m[i][j].clone());
                    }
                }
                f
            })
            .collect();
        // powers of each substituted linear form, computed once
        let d = self.degree as usize;
        let mut pow_tables: Vec<Vec<BTreeMap<Mono, CyclotomicElement>>> = Vec::with_capacity(3);
        for l in &lin {
            let mut t = Vec::with_capacity(d + 1);
            let mut one = BTreeMap::new();
            one.insert((0, 0, 0), self.field.one());
            t.push(one);
            for k in 1..=d {
                let next = mono_map_mul(&t[k - 1], l, &self.field);
                t.push(next);
            }
            pow_tables.push(t);
        }
        let mut acc: BTreeMap<Mono, CyclotomicElement> = BTreeMap::new();
        for (&(a, b, c), coeff) in &self.coeffs {
            let mut term = pow_tables[0][a as usize].clone();
            term = mono_map_mul(&term, &pow_tables[1][b as usize], &self.field);
            term = mono_map_mul(&term, &pow_tables[2][c as usize], &self.field);
            for (mono, v) in term {
                let slot = acc.entry(mono).or_insert_with(|| self.field.zero());
                *slot = &*slot + &(&v * coeff);
            }
        }
        acc.retain(|_, v| !v.is_zero());
        if acc.is_empty() {
            return Err(Error::InvalidArgument(
                "singular substitution matrix annihilated the curve".into(),
            ));
        }
        Ok(PlaneCurve {
            field: self.field.clone(),
            degree: self.degree,
            coeffs: acc,
        })
    }

    /// True iff the conic is irreducible (equivalently smooth): the
    /// determinant of the associated symmetric matrix does not vanish.
    pub fn is_irreducible_conic(&self) -> Result<bool> {
        if self.degree != 2 {
            return Err(Error::DegreeMismatch {
                expected: 2,
                got: self.degree,
            });
        }
        Ok(!self.conic_matrix_det().is_zero())
    }

    fn conic_matrix_det(&self) -> CyclotomicElement {
        let half = crate::exactfield::rat(1, 2);
        let a = self.coeff((2, 0, 0));
        let b = self.coeff((0, 2, 0));
        let c = self.coeff((0, 0, 2));
        let d = self.coeff((1, 1, 0)).scale(&half);
        let e = self.coeff((1, 0, 1)).scale(&half);
        let f = self.coeff((0, 1, 1)).scale(&half);
        let m = vec![
            vec![a, d.clone(), e.clone()],
            vec![d, b, f.clone()],
            vec![e, f, c],
        ];
        linalg::det(m)
    }

    /// True iff the curve has no singular point. Conics and lines are decided
    /// directly; for degree >= 3 the caller guarantees the curve is reduced
    /// and the partials are intersected exactly.
    pub fn is_smooth(&self) -> Result<bool> {
        match self.degree {
            1 => Ok(true),
            2 => self.is_irreducible_conic(),
            _ => Ok(!crate::zerodim::partials_have_common_zero(self)?),
        }
    }
}

impl PartialOrd for PlaneCurve {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Deterministic total order for canonical curve sets: conductor, degree,
/// then the coefficient map.
impl Ord for PlaneCurve {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.field
            .conductor()
            .cmp(&other.field.conductor())
            .then_with(|| self.degree.cmp(&other.degree))
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Debug for PlaneCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&(a, b, c), coeff) in self.coeffs.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({coeff})")?;
            for (var, e) in [("x", a), ("y", b), ("z", c)] {
                if e == 1 {
                    write!(f, "*{var}")?;
                } else if e > 1 {
                    write!(f, "*{var}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

fn mono_map_mul(
    a: &BTreeMap<Mono, CyclotomicElement>,
    b: &BTreeMap<Mono, CyclotomicElement>,
    field: &CyclotomicField,
) -> BTreeMap<Mono, CyclotomicElement> {
    let mut out: BTreeMap<Mono, CyclotomicElement> = BTreeMap::new();
    for ((a1, b1, c1), va) in a {
        for ((a2, b2, c2), vb) in b {
            let mono = (a1 + a2, b1 + b2, c1 + c2);
            let slot = out.entry(mono).or_insert_with(|| field.zero());
            *slot = &*slot + &(va * vb);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// x^e for each coordinate up to the needed degree.
fn coordinate_powers(coords: &[CyclotomicElement; 3], degree: u32) -> [Vec<CyclotomicElement>; 3] {
    let field = coords[0].field();
    let build = |c: &CyclotomicElement| {
        let mut v = Vec::with_capacity(degree as usize + 1);
        v.push(field.one());
        for k in 1..=degree as usize {
            let next = &v[k - 1] * c;
            v.push(next);
        }
        v
    };
    [build(&coords[0]), build(&coords[1]), build(&coords[2])]
}

/// Monomials of total degree d in descending graded-lex order (x > y > z);
/// this fixes the column order of every incidence matrix.
pub fn monomials(d: u32) -> Vec<Mono> {
    let mut out = Vec::with_capacity(((d + 1) * (d + 2) / 2) as usize);
    for a in (0..=d).rev() {
        for b in (0..=(d - a)).rev() {
            out.push((a, b, d - a - b));
        }
    }
    out
}

/// Values of all degree-d monomials at a point, aligned with `monomials(d)`.
pub fn monomial_values(p: &ProjectivePoint, d: u32) -> Vec<CyclotomicElement> {
    let pows = coordinate_powers(p.coords(), d);
    monomials(d)
        .iter()
        .map(|&(a, b, c)| &(&pows[0][a as usize] * &pows[1][b as usize]) * &pows[2][c as usize])
        .collect()
}

/// The exact space of degree-d forms vanishing on a set of points.
pub struct DegreeLinearSystem {
    pub degree: u32,
    pub points: Vec<ProjectivePoint>,
    pub basis: Vec<PlaneCurve>,
}

impl DegreeLinearSystem {
    /// Projective dimension: basis size minus one.
    pub fn proj_dim(&self) -> isize {
        self.basis.len() as isize - 1
    }
}

/// Exact kernel of the point-evaluation matrix on degree-d monomials,
/// computed fraction-free and returned as a deterministic reduced-echelon
/// basis of canonical curves.
pub fn incidence_system(points: &[ProjectivePoint], d: u32) -> Result<DegreeLinearSystem> {
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            if p == q {
                return Err(Error::InvalidArgument(format!(
                    "duplicate constraint point {p:?}"
                )));
            }
        }
    }
    let Some(first) = points.first() else {
        return Err(Error::InvalidArgument(
            "incidence systems need at least one constraint point".into(),
        ));
    };
    let monos = monomials(d);
    let field = first.field().clone();
    let rows: Vec<Vec<CyclotomicElement>> =
        points.iter().map(|p| monomial_values(p, d)).collect();
    let kernel = linalg::kernel_basis(rows, monos.len());
    let basis = kernel
        .into_iter()
        .map(|v| {
            PlaneCurve::new(
                field.clone(),
                d,
                monos.iter().copied().zip(v).collect::<Vec<_>>(),
            )
            .expect("kernel vectors are nonzero")
        })
        .collect();
    Ok(DegreeLinearSystem {
        degree: d,
        points: points.to_vec(),
        basis,
    })
}

/// The line through two distinct points (cross product of coordinates).
pub fn line_through(p: &ProjectivePoint, q: &ProjectivePoint) -> Result<PlaneCurve> {
    if p == q {
        return Err(Error::InvalidArgument(
            "two distinct points are needed to span a line".into(),
        ));
    }
    let a = p.coords();
    let b = q.coords();
    let cross = [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ];
    let field = p.field().clone();
    PlaneCurve::new(
        field,
        1,
        [
            ((1, 0, 0), cross[0].clone()),
            ((0, 1, 0), cross[1].clone()),
            ((0, 0, 1), cross[2].clone()),
        ],
    )
}

/// Product of a nonempty list of curves, canonical-normalized.
pub fn curve_product(curves: &[PlaneCurve]) -> Result<PlaneCurve> {
    let first = curves
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty curve product".into()))?;
    let field = first.field().clone();
    let mut acc = first.coeffs.clone();
    let mut degree = first.degree;
    for c in &curves[1..] {
        acc = mono_map_mul(&acc, &c.coeffs, &field);
        degree += c.degree;
    }
    PlaneCurve::new(field, degree, acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rat;

    fn qq() -> CyclotomicField {
        CyclotomicField::rationals()
    }

    pub(crate) fn fermat_quartic(field: &CyclotomicField) -> PlaneCurve {
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

    #[test]
    fn point_normalization_last_nonzero_is_one() {
        let f = qq();
        let p = ProjectivePoint::new([f.int(2), f.int(4), f.int(2)]).unwrap();
        assert_eq!(p.coords()[2], f.one());
        assert_eq!(p.coords()[0], f.one());
        assert_eq!(p.coords()[1], f.int(2));
        // a point at infinity normalizes on its second coordinate
        let q = ProjectivePoint::new([f.int(3), f.int(6), f.zero()]).unwrap();
        assert_eq!(q.coords()[1], f.one());
        assert!(q.coords()[2].is_zero());
        // normalization is idempotent
        let again = ProjectivePoint::new(q.coords().clone()).unwrap();
        assert_eq!(again, q);
    }

    #[test]
    fn zero_point_rejected() {
        let f = qq();
        assert!(ProjectivePoint::new([f.zero(), f.zero(), f.zero()]).is_err());
    }

    #[test]
    fn evaluate_fermat_at_unit_point() {
        let f = qq();
        let c = fermat_quartic(&f);
        let p = ProjectivePoint::from_ints(&f, 1, 1, 1);
        assert_eq!(c.evaluate(&p).unwrap(), f.int(3));
    }

    #[test]
    fn evaluate_fermat_at_minus_one_minus_i() {
        // x^4+y^4+z^4 at (-1 : -i : 1) is (-1)^4 + (-i)^4 + 1 = 3
        let f8 = CyclotomicField::new(8);
        let c = fermat_quartic(&f8);
        let i = f8.zeta_pow(2);
        let p = ProjectivePoint::new([f8.int(-1), -&i, f8.one()]).unwrap();
        assert_eq!(c.evaluate(&p).unwrap(), f8.int(3));
    }

    #[test]
    fn gradient_of_fermat() {
        let f = qq();
        let c = fermat_quartic(&f);
        let [gx, gy, gz] = c.gradient();
        let expect = |mono: Mono| {
            PlaneCurve::raw(f.clone(), 3, [(mono, f.int(4))]).unwrap()
        };
        assert_eq!(gx.unwrap(), expect((3, 0, 0)));
        assert_eq!(gy.unwrap(), expect((0, 3, 0)));
        assert_eq!(gz.unwrap(), expect((0, 0, 3)));
    }

    #[test]
    fn euler_identity_klein() {
        // 4 f = x f_x + y f_y + z f_z for f = x^3 y + y^3 z + z^3 x
        let f = qq();
        let klein = PlaneCurve::new(
            f.clone(),
            4,
            [
                ((3, 1, 0), f.one()),
                ((0, 3, 1), f.one()),
                ((1, 0, 3), f.one()),
            ],
        )
        .unwrap();
        let mut sum: BTreeMap<Mono, CyclotomicElement> = BTreeMap::new();
        let [gx, gy, gz] = klein.gradient();
        for (shift, g) in [
            ((1u32, 0u32, 0u32), gx),
            ((0, 1, 0), gy),
            ((0, 0, 1), gz),
        ] {
            if let Some(g) = g {
                for (&(a, b, c), coeff) in g.coeffs() {
                    let mono = (a + shift.0, b + shift.1, c + shift.2);
                    let slot = sum.entry(mono).or_insert_with(|| f.zero());
                    *slot = &*slot + coeff;
                }
            }
        }
        for (&mono, coeff) in klein.coeffs() {
            let scaled = coeff.scale(&rat(4, 1));
            assert_eq!(sum.get(&mono), Some(&scaled));
        }
        assert_eq!(sum.len(), klein.coeffs().len());
    }

    #[test]
    fn five_general_points_give_unique_irreducible_conic() {
        let f = qq();
        let pts = vec![
            ProjectivePoint::from_ints(&f, 0, 0, 1),
            ProjectivePoint::from_ints(&f, 1, 0, 1),
            ProjectivePoint::from_ints(&f, 0, 1, 1),
            ProjectivePoint::from_ints(&f, 1, 1, 1),
            ProjectivePoint::from_ints(&f, 2, 3, 1),
        ];
        let sys = incidence_system(&pts, 2).unwrap();
        assert_eq!(sys.basis.len(), 1);
        assert_eq!(sys.proj_dim(), 0);
        let conic = &sys.basis[0];
        assert!(conic.is_canonical());
        for p in &pts {
            assert!(conic.contains(p).unwrap());
        }
        assert!(conic.is_irreducible_conic().unwrap());
    }

    #[test]
    fn four_generic_points_give_pencil() {
        let f = qq();
        let pts = vec![
            ProjectivePoint::from_ints(&f, 0, 0, 1),
            ProjectivePoint::from_ints(&f, 1, 0, 1),
            ProjectivePoint::from_ints(&f, 0, 1, 1),
            ProjectivePoint::from_ints(&f, 1, 1, 1),
        ];
        let sys = incidence_system(&pts, 2).unwrap();
        assert_eq!(sys.basis.len(), 2);
        for b in &sys.basis {
            for p in &pts {
                assert!(b.contains(p).unwrap());
            }
        }
    }

    #[test]
    fn five_points_with_four_collinear_give_pencil() {
        let f = qq();
        let pts = vec![
            ProjectivePoint::from_ints(&f, 0, 0, 1),
            ProjectivePoint::from_ints(&f, 1, 0, 1),
            ProjectivePoint::from_ints(&f, 2, 0, 1),
            ProjectivePoint::from_ints(&f, 3, 0, 1),
            ProjectivePoint::from_ints(&f, 0, 1, 1),
        ];
        let sys = incidence_system(&pts, 2).unwrap();
        assert_eq!(sys.basis.len(), 2);
    }

    #[test]
    fn rank_bound_holds() {
        let f = qq();
        let pts = vec![
            ProjectivePoint::from_ints(&f, 0, 0, 1),
            ProjectivePoint::from_ints(&f, 1, 2, 1),
            ProjectivePoint::from_ints(&f, 5, 1, 1),
        ];
        let sys = incidence_system(&pts, 2).unwrap();
        assert!(sys.basis.len() >= 6 - pts.len());
        assert_eq!(sys.basis.len(), 3); // independent conditions
    }

    #[test]
    fn conic_irreducibility_catalogue() {
        let f = qq();
        let smooth = PlaneCurve::new(
            f.clone(),
            2,
            [
                ((2, 0, 0), f.one()),
                ((0, 2, 0), f.one()),
                ((0, 0, 2), f.one()),
            ],
        )
        .unwrap();
        assert!(smooth.is_irreducible_conic().unwrap());
        let two_lines =
            PlaneCurve::new(f.clone(), 2, [((1, 1, 0), f.one())]).unwrap();
        assert!(!two_lines.is_irreducible_conic().unwrap());
        let double_line =
            PlaneCurve::new(f.clone(), 2, [((2, 0, 0), f.one())]).unwrap();
        assert!(!double_line.is_irreducible_conic().unwrap());
        let cubic = PlaneCurve::new(f.clone(), 3, [((3, 0, 0), f.one())]).unwrap();
        assert!(matches!(
            cubic.is_irreducible_conic(),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn line_through_unit_points() {
        let f = qq();
        let p = ProjectivePoint::from_ints(&f, 1, 0, 0);
        let q = ProjectivePoint::from_ints(&f, 0, 1, 0);
        let l = line_through(&p, &q).unwrap();
        assert_eq!(l, PlaneCurve::new(f.clone(), 1, [((0, 0, 1), f.one())]).unwrap());
        let a = ProjectivePoint::from_ints(&f, 1, 1, 1);
        let b = ProjectivePoint::from_ints(&f, 1, -1, 1);
        let l2 = line_through(&a, &b).unwrap();
        // x - z, normalized with leading coefficient 1
        let expect = PlaneCurve::new(
            f.clone(),
            1,
            [((1, 0, 0), f.one()), ((0, 0, 1), f.int(-1))],
        )
        .unwrap();
        assert_eq!(l2, expect);
        assert!(line_through(&a, &a).is_err());
    }

    #[test]
    fn products_multiply_degrees_and_coefficients() {
        let f = qq();
        let x = PlaneCurve::new(f.clone(), 1, [((1, 0, 0), f.one())]).unwrap();
        let y = PlaneCurve::new(f.clone(), 1, [((0, 1, 0), f.one())]).unwrap();
        let xy = curve_product(&[x, y]).unwrap();
        assert_eq!(xy, PlaneCurve::new(f.clone(), 2, [((1, 1, 0), f.one())]).unwrap());
        assert!(curve_product(&[]).is_err());
    }

    #[test]
    fn normalization_is_idempotent() {
        let f = qq();
        let c = PlaneCurve::new(
            f.clone(),
            2,
            [((2, 0, 0), f.int(3)), ((0, 0, 2), f.int(6))],
        )
        .unwrap();
        assert!(c.is_canonical());
        assert_eq!(c.canonicalize(), c);
        assert_eq!(c.coeff((0, 0, 2)), f.int(2));
    }

    #[test]
    fn transform_by_permutation_matrix() {
        let f = qq();
        // swap x and y in x^2 + 2 y z
        let c = PlaneCurve::new(
            f.clone(),
            2,
            [((2, 0, 0), f.one()), ((0, 1, 1), f.int(2))],
        )
        .unwrap();
        let m = [
            [f.zero(), f.one(), f.zero()],
            [f.one(), f.zero(), f.zero()],
            [f.zero(), f.zero(), f.one()],
        ];
        let t = c.transform(&m).unwrap();
        let expect = PlaneCurve::new(
            f.clone(),
            2,
            [((0, 2, 0), f.one()), ((1, 0, 1), f.int(2))],
        )
        .unwrap();
        assert_eq!(t.canonicalize(), expect);
    }
}
