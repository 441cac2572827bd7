//! Enumeration of all irreducible degree-d curves through at least k points
//! of a finite point set, with incidence profiles and configuration types.
//!
//! The conic search enumerates 5-subsets and keeps the subsets whose linear
//! system is a single conic: any irreducible conic through >= 6 of the
//! points contains no 3 collinear ones, so every 5-subset of its incident
//! points rediscovers it and the search is complete. Duplicates are absorbed
//! by a canonical ordered set.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactfield::{CyclotomicElement, CyclotomicField};
use crate::linalg;
use crate::plane::{self, PlaneCurve, ProjectivePoint};

/// A named, canonically sorted set of pairwise distinct points.
#[derive(Clone, Debug)]
pub struct PointSet {
    field: CyclotomicField,
    points: Vec<ProjectivePoint>,
    name: Option<String>,
}

impl PointSet {
    pub fn new(
        field: CyclotomicField,
        mut points: Vec<ProjectivePoint>,
        name: Option<String>,
    ) -> Result<Self> {
        for p in &points {
            if *p.field() != field {
                return Err(Error::FieldMismatch(
                    field.conductor(),
                    p.field().conductor(),
                ));
            }
        }
        points.sort();
        for w in points.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DataError(format!("duplicate point {:?}", w[0])));
            }
        }
        Ok(PointSet {
            field,
            points,
            name,
        })
    }

    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn contains(&self, p: &ProjectivePoint) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// The sub-point-set of all members not in `other`.
    pub fn complement(&self, other: &[ProjectivePoint]) -> Result<PointSet> {
        let drop: BTreeSet<&ProjectivePoint> = other.iter().collect();
        PointSet::new(
            self.field.clone(),
            self.points
                .iter()
                .filter(|p| !drop.contains(p))
                .cloned()
                .collect(),
            None,
        )
    }

    pub fn embed(&self, target: &CyclotomicField) -> Result<PointSet> {
        PointSet::new(
            target.clone(),
            self.points
                .iter()
                .map(|p| p.embed(target))
                .collect::<Result<Vec<_>>>()?,
            self.name.clone(),
        )
    }
}

/// Provenance of a curve search: what was enumerated, over which set.
#[derive(Clone, Debug, Default)]
pub struct Provenance {
    pub degree: u32,
    pub min_count: usize,
    pub source: Option<String>,
}

/// A canonically sorted set of pairwise distinct curves of one degree.
#[derive(Clone, Debug)]
pub struct CurveSet {
    curves: Vec<PlaneCurve>,
    pub provenance: Provenance,
}

impl CurveSet {
    pub fn from_curves(mut curves: Vec<PlaneCurve>, provenance: Provenance) -> Self {
        curves.sort();
        curves.dedup();
        CurveSet { curves, provenance }
    }

    pub fn curves(&self) -> &[PlaneCurve] {
        &self.curves
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }
}

/// Exact incidence counts between a point set and a curve set.
#[derive(Clone, Debug)]
pub struct IncidenceProfile {
    /// Number of set points on each curve (aligned with the curve set).
    pub per_curve: Vec<usize>,
    /// Number of set curves through each point (aligned with the point set).
    pub per_point: Vec<usize>,
}

impl IncidenceProfile {
    /// Histogram of points-per-curve: count -> how many curves.
    pub fn curve_histogram(&self) -> std::collections::BTreeMap<usize, usize> {
        let mut h = std::collections::BTreeMap::new();
        for &c in &self.per_curve {
            *h.entry(c).or_insert(0) += 1;
        }
        h
    }

    /// Histogram of curves-per-point: count -> how many points.
    pub fn point_histogram(&self) -> std::collections::BTreeMap<usize, usize> {
        let mut h = std::collections::BTreeMap::new();
        for &c in &self.per_point {
            *h.entry(c).or_insert(0) += 1;
        }
        h
    }
}

/// Incidence structure of a (points, curves) pair: uniform (n_r, m_s) when
/// every point lies on r curves and every curve holds s points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigurationType {
    Uniform {
        n: usize,
        r: usize,
        m: usize,
        s: usize,
    },
    NonUniform {
        point_histogram: std::collections::BTreeMap<usize, usize>,
        curve_histogram: std::collections::BTreeMap<usize, usize>,
    },
}

impl fmt::Display for ConfigurationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigurationType::Uniform { n, r, m, s } => write!(f, "({n}_{r}, {m}_{s})"),
            ConfigurationType::NonUniform {
                point_histogram,
                curve_histogram,
            } => write!(
                f,
                "non-uniform(points {point_histogram:?}, curves {curve_histogram:?})"
            ),
        }
    }
}

// -- subset enumeration --------------------------------------------------------

/// Calls `f` on every k-subset (ascending indices) of 0..n with a prefix
/// fixed by the two smallest elements; the (i, j) prefixes parallelize well.
fn for_each_subset_after<F: FnMut(&[usize])>(prefix: [usize; 2], k: usize, n: usize, f: &mut F) {
    debug_assert!(k >= 2);
    let mut idx: Vec<usize> = Vec::with_capacity(k);
    idx.extend_from_slice(&prefix);
    for r in 0..k - 2 {
        idx.push(prefix[1] + 1 + r);
    }
    if *idx.last().unwrap() >= n {
        return;
    }
    loop {
        f(&idx);
        // advance the suffix (positions 2..k) in lex order
        let mut pos = k;
        loop {
            if pos == 2 {
                return;
            }
            pos -= 1;
            if idx[pos] < n - (k - pos) {
                idx[pos] += 1;
                for q in pos + 1..k {
                    idx[q] = idx[q - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Parallel enumeration of k-subsets: map each subset to candidates, union
/// everything into a canonical ordered set.
fn parallel_subset_search<T, F>(n: usize, k: usize, per_subset: F) -> BTreeSet<T>
where
    T: Ord + Send,
    F: Fn(&[usize], &mut Vec<T>) + Sync,
{
    if n < k {
        return BTreeSet::new();
    }
    let mut prefixes = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            prefixes.push([i, j]);
        }
    }
    prefixes
        .par_iter()
        .map(|&prefix| {
            let mut local: Vec<T> = Vec::new();
            for_each_subset_after(prefix, k, n, &mut |idx| per_subset(idx, &mut local));
            local
        })
        .reduce(Vec::new, |mut a, mut b| {
            a.append(&mut b);
            a
        })
        .into_iter()
        .collect()
}

/// Modular pre-screen for subset searches: point rows reduced mod a split
/// prime. A full-rank subset whose span covers fewer than `min` point rows
/// mod p cannot reach `min` exactly, so the expensive exact kernel runs only
/// for surviving subsets (and for subsets that look degenerate mod p, which
/// are re-decided exactly).
struct SubsetScreen {
    p: u64,
    rows: Vec<Vec<u64>>,
}

impl SubsetScreen {
    fn build(exact_rows: &[Vec<CyclotomicElement>], field: &CyclotomicField) -> Option<SubsetScreen> {
        for attempt in 0..4 {
            let ctx = crate::modp::FpCtx::new(field, attempt);
            let rows: Option<Vec<Vec<u64>>> = exact_rows
                .iter()
                .map(|r| r.iter().map(|e| ctx.elem(e)).collect())
                .collect();
            if let Some(rows) = rows {
                return Some(SubsetScreen { p: ctx.p, rows });
            }
        }
        None
    }

    /// Fraction-free echelon form of the subset rows; returns pivot columns
    /// or None when the subset looks rank-deficient mod p.
    fn echelon(&self, idx: &[usize], ncols: usize) -> Option<Vec<Vec<u64>>> {
        let p = self.p;
        let mut m: Vec<Vec<u64>> = idx.iter().map(|&i| self.rows[i].clone()).collect();
        let k = m.len();
        let mut row = 0usize;
        for col in 0..ncols {
            if row == k {
                break;
            }
            let Some(pr) = (row..k).find(|&i| m[i][col] != 0) else {
                continue;
            };
            m.swap(row, pr);
            for i in (row + 1)..k {
                if m[i][col] == 0 {
                    continue;
                }
                let (a, b) = (m[row][col], m[i][col]);
                for j in col..ncols {
                    let t1 = crate::modp::mul_mod(a, m[i][j], p);
                    let t2 = crate::modp::mul_mod(b, m[row][j], p);
                    m[i][j] = (t1 + p - t2) % p;
                }
            }
            row += 1;
        }
        if row == k {
            Some(m)
        } else {
            None
        }
    }

    /// Whether a point row lies in the span of the echelon rows mod p.
    fn in_span(&self, echelon: &[Vec<u64>], point: usize, ncols: usize) -> bool {
        let p = self.p;
        let mut r = self.rows[point].clone();
        for er in echelon {
            let Some(col) = (0..ncols).find(|&j| er[j] != 0) else {
                continue;
            };
            if r[col] == 0 {
                continue;
            }
            let (a, b) = (er[col], r[col]);
            for j in 0..ncols {
                let t1 = crate::modp::mul_mod(a, r[j], p);
                let t2 = crate::modp::mul_mod(b, er[j], p);
                r[j] = (t1 + p - t2) % p;
            }
        }
        r.iter().all(|&v| v == 0)
    }

    /// Count of point rows in the subset's span, floored: None when the
    /// count certifiably stays below `min`.
    fn span_count_reaches(&self, echelon: &[Vec<u64>], ncols: usize, min: usize) -> bool {
        let n = self.rows.len();
        let mut count = 0usize;
        for point in 0..n {
            if count + (n - point) < min {
                return false;
            }
            if self.in_span(echelon, point, ncols) {
                count += 1;
                if count >= min {
                    return true;
                }
            }
        }
        count >= min
    }
}

/// Number of points of the set on the curve, using precomputed monomial
/// rows; stops early once the target is unreachable.
fn incident_count_with_floor(
    curve_row: &[CyclotomicElement],
    rows: &[Vec<CyclotomicElement>],
    field: &CyclotomicField,
    floor: usize,
) -> Option<usize> {
    let mut count = 0usize;
    for (seen, row) in rows.iter().enumerate() {
        let remaining = rows.len() - seen;
        if count + remaining < floor {
            return None;
        }
        let mut acc = field.zero();
        for (c, v) in curve_row.iter().zip(row) {
            if !c.is_zero() && !v.is_zero() {
                acc = &acc + &(c * v);
            }
        }
        if acc.is_zero() {
            count += 1;
        }
    }
    if count >= floor {
        Some(count)
    } else {
        None
    }
}

fn curve_coefficient_row(curve: &PlaneCurve, monos: &[plane::Mono]) -> Vec<CyclotomicElement> {
    monos.iter().map(|&m| curve.coeff(m)).collect()
}

/// All irreducible conics containing at least `min_count >= 6` points of the
/// set. Exact and complete by the 5-subset argument.
pub fn conics_through(points: &PointSet, min_count: usize) -> Result<CurveSet> {
    if min_count < 6 {
        return Err(Error::InvalidArgument(
            "conic searches need min_count >= 6".into(),
        ));
    }
    if points.len() < min_count {
        return Err(Error::InvalidArgument(format!(
            "{} points cannot contain {min_count} on a conic",
            points.len()
        )));
    }
    let monos = plane::monomials(2);
    let rows: Vec<Vec<CyclotomicElement>> = points
        .points()
        .iter()
        .map(|p| plane::monomial_values(p, 2))
        .collect();
    let field = points.field().clone();
    let screen = SubsetScreen::build(&rows, &field);
    let found = parallel_subset_search(points.len(), 5, |idx, out: &mut Vec<PlaneCurve>| {
        if let Some(s) = &screen {
            if let Some(ech) = s.echelon(idx, 6) {
                // full rank mod p: the exact kernel is one-dimensional;
                // reject when even the mod-p span misses the floor
                if !s.span_count_reaches(&ech, 6, min_count) {
                    return;
                }
            }
            // rank-deficient subsets fall through and are decided exactly
        }
        let sub: Vec<Vec<CyclotomicElement>> = idx.iter().map(|&i| rows[i].clone()).collect();
        let kernel = linalg::kernel_basis(sub, 6);
        if kernel.len() != 1 {
            return;
        }
        let conic = PlaneCurve::new(
            field.clone(),
            2,
            monos.iter().copied().zip(kernel.into_iter().next().unwrap()),
        )
        .expect("kernel vector is nonzero");
        let row = curve_coefficient_row(&conic, &monos);
        if incident_count_with_floor(&row, &rows, &field, min_count).is_some()
            && conic.is_irreducible_conic().expect("degree 2")
        {
            out.push(conic);
        }
    });
    Ok(CurveSet::from_curves(
        found.into_iter().collect(),
        Provenance {
            degree: 2,
            min_count,
            source: points.name().map(str::to_owned),
        },
    ))
}

/// All lines through at least `min_count >= 3` points of the set.
pub fn lines_through(points: &PointSet, min_count: usize) -> Result<CurveSet> {
    if min_count < 3 {
        return Err(Error::InvalidArgument(
            "line searches need min_count >= 3".into(),
        ));
    }
    if points.len() < 2 {
        return Err(Error::InvalidArgument(
            "line searches need at least two points".into(),
        ));
    }
    let monos = plane::monomials(1);
    let rows: Vec<Vec<CyclotomicElement>> = points
        .points()
        .iter()
        .map(|p| plane::monomial_values(p, 1))
        .collect();
    let field = points.field().clone();
    let pts = points.points();
    let found = parallel_subset_search(pts.len(), 2, |idx, out: &mut Vec<PlaneCurve>| {
        let line = plane::line_through(&pts[idx[0]], &pts[idx[1]]).expect("distinct points");
        let row = curve_coefficient_row(&line, &monos);
        if incident_count_with_floor(&row, &rows, &field, min_count).is_some() {
            out.push(line);
        }
    });
    Ok(CurveSet::from_curves(
        found.into_iter().collect(),
        Provenance {
            degree: 1,
            min_count,
            source: points.name().map(str::to_owned),
        },
    ))
}

/// Does the line divide the curve? Exact: the restriction of the curve to
/// the line vanishes identically.
fn line_divides(curve: &PlaneCurve, line: &PlaneCurve) -> bool {
    matches!(crate::tangency::restrict_to_line(curve, line), Err(_))
}

/// Rejects degree-3 candidates with a linear factor: a cubic through many
/// set points that factors must contain a line through at least two of its
/// incident points, so divisibility by those lines is tested.
fn cubic_is_irreducible(curve: &PlaneCurve, incident: &[&ProjectivePoint]) -> bool {
    for i in 0..incident.len() {
        for j in (i + 1)..incident.len() {
            let line = plane::line_through(incident[i], incident[j]).expect("distinct");
            if line_divides(curve, &line) {
                return false;
            }
        }
    }
    true
}

/// All irreducible degree-d curves through at least `min_count` points,
/// `min_count > d(d+3)/2`. Delegates to the line and conic searches for
/// d = 1, 2; for d = 3 enumerates 9-subsets (exhaustive and expensive).
pub fn curves_through(points: &PointSet, d: u32, min_count: usize) -> Result<CurveSet> {
    let dof = (d * (d + 3) / 2) as usize;
    if min_count <= dof {
        return Err(Error::InvalidArgument(format!(
            "degree-{d} searches need min_count > {dof}"
        )));
    }
    match d {
        0 => Err(Error::InvalidArgument("degree must be positive".into())),
        1 => lines_through(points, min_count),
        2 => conics_through(points, min_count),
        3 => {
            if points.len() < min_count {
                return Err(Error::InvalidArgument(format!(
                    "{} points cannot contain {min_count} on a cubic",
                    points.len()
                )));
            }
            let monos = plane::monomials(3);
            let rows: Vec<Vec<CyclotomicElement>> = points
                .points()
                .iter()
                .map(|p| plane::monomial_values(p, 3))
                .collect();
            let field = points.field().clone();
            let pts = points.points();
            let screen = SubsetScreen::build(&rows, &field);
            let found =
                parallel_subset_search(pts.len(), dof, |idx, out: &mut Vec<PlaneCurve>| {
                    if let Some(s) = &screen {
                        if let Some(ech) = s.echelon(idx, 10) {
                            if !s.span_count_reaches(&ech, 10, min_count) {
                                return;
                            }
                        }
                    }
                    let sub: Vec<Vec<CyclotomicElement>> =
                        idx.iter().map(|&i| rows[i].clone()).collect();
                    let kernel = linalg::kernel_basis(sub, 10);
                    if kernel.len() != 1 {
                        return;
                    }
                    let cubic = PlaneCurve::new(
                        field.clone(),
                        3,
                        monos
                            .iter()
                            .copied()
                            .zip(kernel.into_iter().next().unwrap()),
                    )
                    .expect("kernel vector is nonzero");
                    let row = curve_coefficient_row(&cubic, &monos);
                    let Some(_count) =
                        incident_count_with_floor(&row, &rows, &field, min_count)
                    else {
                        return;
                    };
                    let incident: Vec<&ProjectivePoint> = pts
                        .iter()
                        .filter(|p| {
                            cubic.contains(p).expect("same field")
                        })
                        .collect();
                    if cubic_is_irreducible(&cubic, &incident) {
                        out.push(cubic);
                    }
                });
            Ok(CurveSet::from_curves(
                found.into_iter().collect(),
                Provenance {
                    degree: 3,
                    min_count,
                    source: points.name().map(str::to_owned),
                },
            ))
        }
        _ => Err(Error::InvalidArgument(format!(
            "degree-{d} searches are not supported"
        ))),
    }
}

/// Exact membership counts between a point set and a curve set. Fields are
/// reconciled by embedding when one conductor divides the other.
pub fn incidence_profile(points: &PointSet, curves: &CurveSet) -> Result<IncidenceProfile> {
    let mut per_curve = vec![0usize; curves.len()];
    let mut per_point = vec![0usize; points.len()];
    if curves.is_empty() || points.is_empty() {
        return Ok(IncidenceProfile {
            per_curve,
            per_point,
        });
    }
    let pf = points.field().clone();
    let cf = curves.curves()[0].field().clone();
    let (pts, cvs): (Vec<ProjectivePoint>, Vec<PlaneCurve>) = if pf == cf {
        (points.points().to_vec(), curves.curves().to_vec())
    } else if cf.conductor() % pf.conductor() == 0 {
        (
            points
                .points()
                .iter()
                .map(|p| p.embed(&cf))
                .collect::<Result<_>>()?,
            curves.curves().to_vec(),
        )
    } else if pf.conductor() % cf.conductor() == 0 {
        (
            points.points().to_vec(),
            curves
                .curves()
                .iter()
                .map(|c| c.embed(&pf))
                .collect::<Result<_>>()?,
        )
    } else {
        return Err(Error::FieldMismatch(pf.conductor(), cf.conductor()));
    };
    let hits: Vec<Vec<usize>> = cvs
        .par_iter()
        .map(|c| {
            let mut on = Vec::new();
            for (i, p) in pts.iter().enumerate() {
                if c.contains(p).expect("fields reconciled") {
                    on.push(i);
                }
            }
            on
        })
        .collect();
    for (ci, on) in hits.iter().enumerate() {
        per_curve[ci] = on.len();
        for &pi in on {
            per_point[pi] += 1;
        }
    }
    debug_assert_eq!(
        per_curve.iter().sum::<usize>(),
        per_point.iter().sum::<usize>()
    );
    Ok(IncidenceProfile {
        per_curve,
        per_point,
    })
}

/// Uniform (n_r, m_s) when both histograms are single-valued.
pub fn configuration_type(profile: &IncidenceProfile) -> ConfigurationType {
    let ph = profile.point_histogram();
    let ch = profile.curve_histogram();
    if ph.len() == 1 && ch.len() == 1 {
        let (&r, _) = ph.first_key_value().unwrap();
        let (&s, _) = ch.first_key_value().unwrap();
        let n = profile.per_point.len();
        let m = profile.per_curve.len();
        debug_assert_eq!(n * r, m * s, "double counting");
        return ConfigurationType::Uniform { n, r, m, s };
    }
    ConfigurationType::NonUniform {
        point_histogram: ph,
        curve_histogram: ch,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qq() -> CyclotomicField {
        CyclotomicField::rationals()
    }

    fn grid_points(field: &CyclotomicField) -> PointSet {
        // the 3x3 affine grid: 8 lines carry 3 points each
        let mut pts = Vec::new();
        for x in 0..3 {
            for y in 0..3 {
                pts.push(ProjectivePoint::from_ints(field, x, y, 1));
            }
        }
        PointSet::new(field.clone(), pts, Some("grid3".into())).unwrap()
    }

    #[test]
    fn duplicate_points_rejected() {
        let f = qq();
        let p = ProjectivePoint::from_ints(&f, 1, 2, 1);
        let q = ProjectivePoint::new([f.int(2), f.int(4), f.int(2)]).unwrap();
        assert!(PointSet::new(f.clone(), vec![p, q], None).is_err());
    }

    #[test]
    fn grid_line_search() {
        let f = qq();
        let ps = grid_points(&f);
        let lines = lines_through(&ps, 3).unwrap();
        assert_eq!(lines.len(), 8, "3 rows + 3 columns + 2 diagonals");
        let profile = incidence_profile(&ps, &lines).unwrap();
        assert_eq!(profile.per_curve, vec![3; 8]);
        // corner points lie on 3 of the 8 lines, edge midpoints on 2... the
        // center lies on 4
        let hist = profile.point_histogram();
        assert_eq!(hist.get(&4), Some(&1));
        assert!(lines_through(&ps, 2).is_err());
        // raising the floor shrinks the set
        let none = lines_through(&ps, 4).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn conics_on_a_conic_with_extra_points() {
        // 6 points on the unit circle plus 2 strays: exactly one irreducible
        // conic holds 6 of them
        let f = qq();
        let mut pts = vec![
            ProjectivePoint::from_ints(&f, 1, 0, 1),
            ProjectivePoint::from_ints(&f, -1, 0, 1),
            ProjectivePoint::from_ints(&f, 0, 1, 1),
            ProjectivePoint::from_ints(&f, 0, -1, 1),
        ];
        // rational circle points (3,4,5)/(4,3,5)
        pts.push(ProjectivePoint::new([f.int(3), f.int(4), f.int(5)]).unwrap());
        pts.push(ProjectivePoint::new([f.int(4), f.int(3), f.int(5)]).unwrap());
        pts.push(ProjectivePoint::from_ints(&f, 2, 2, 1));
        pts.push(ProjectivePoint::from_ints(&f, 3, 1, 1));
        let ps = PointSet::new(f.clone(), pts, None).unwrap();
        let conics = conics_through(&ps, 6).unwrap();
        assert_eq!(conics.len(), 1);
        let circle = PlaneCurve::new(
            f.clone(),
            2,
            [
                ((2, 0, 0), f.one()),
                ((0, 2, 0), f.one()),
                ((0, 0, 2), f.int(-1)),
            ],
        )
        .unwrap();
        assert_eq!(conics.curves()[0], circle);
        let profile = incidence_profile(&ps, &conics).unwrap();
        assert_eq!(profile.per_curve, vec![6]);
    }

    #[test]
    fn degenerate_six_points_on_two_lines_give_no_conic() {
        // 6 points on a pair of lines meeting... points split 3+3: the only
        // conic through them is the reducible line pair, so the search finds
        // nothing irreducible
        let f = qq();
        let pts = vec![
            ProjectivePoint::from_ints(&f, 0, 0, 1),
            ProjectivePoint::from_ints(&f, 1, 0, 1),
            ProjectivePoint::from_ints(&f, 2, 0, 1),
            ProjectivePoint::from_ints(&f, 0, 1, 1),
            ProjectivePoint::from_ints(&f, 0, 2, 1),
            ProjectivePoint::from_ints(&f, 0, 3, 1),
        ];
        let ps = PointSet::new(f.clone(), pts, None).unwrap();
        let conics = conics_through(&ps, 6).unwrap();
        assert!(conics.is_empty());
    }

    #[test]
    fn five_subset_search_matches_bruteforce_oracle() {
        let f = qq();
        // a mildly structured 10-point set: two conics sharing points
        let mut pts = vec![
            ProjectivePoint::from_ints(&f, 1, 0, 1),
            ProjectivePoint::from_ints(&f, -1, 0, 1),
            ProjectivePoint::from_ints(&f, 0, 1, 1),
            ProjectivePoint::from_ints(&f, 0, -1, 1),
        ];
        pts.push(ProjectivePoint::new([f.int(3), f.int(4), f.int(5)]).unwrap());
        pts.push(ProjectivePoint::new([f.int(-3), f.int(4), f.int(5)]).unwrap());
        pts.push(ProjectivePoint::new([f.int(3), f.int(-4), f.int(5)]).unwrap());
        pts.push(ProjectivePoint::new([f.int(-3), f.int(-4), f.int(5)]).unwrap());
        pts.push(ProjectivePoint::from_ints(&f, 2, 1, 1));
        pts.push(ProjectivePoint::from_ints(&f, 5, 3, 1));
        let ps = PointSet::new(f.clone(), pts, None).unwrap();
        let fast = conics_through(&ps, 6).unwrap();
        let slow = crate::oracle::conics_through_six_bruteforce(&ps, 6).unwrap();
        assert_eq!(fast.curves(), slow.curves());
        assert_eq!(fast.len(), 1, "the circle through 8 of the 10 points");
        let profile = incidence_profile(&ps, &fast).unwrap();
        assert_eq!(profile.per_curve, vec![8]);
    }

    #[test]
    fn cubic_search_rejects_reducible_members() {
        // 4 collinear points plus 6 on a circle: the line-plus-circle cubic
        // passes through all 10 but is reducible, so nothing is found
        let f = qq();
        let pts = vec![
            ProjectivePoint::from_ints(&f, 1, 0, 1),
            ProjectivePoint::from_ints(&f, -1, 0, 1),
            ProjectivePoint::from_ints(&f, 0, 1, 1),
            ProjectivePoint::from_ints(&f, 0, -1, 1),
            ProjectivePoint::new([f.int(3), f.int(4), f.int(5)]).unwrap(),
            ProjectivePoint::new([f.int(-3), f.int(4), f.int(5)]).unwrap(),
            ProjectivePoint::from_ints(&f, 2, 3, 1),
            ProjectivePoint::from_ints(&f, 3, 3, 1),
            ProjectivePoint::from_ints(&f, 4, 3, 1),
            ProjectivePoint::from_ints(&f, 5, 3, 1),
        ];
        let ps = PointSet::new(f.clone(), pts, None).unwrap();
        let cubics = curves_through(&ps, 3, 10).unwrap();
        assert!(cubics.is_empty());
        // precondition: the floor must exceed the degrees of freedom
        assert!(curves_through(&ps, 3, 9).is_err());
    }

    #[test]
    fn degree_one_and_two_delegate() {
        let f = qq();
        let ps = grid_points(&f);
        let via_lines = lines_through(&ps, 3).unwrap();
        let via_curves = curves_through(&ps, 1, 3).unwrap();
        assert_eq!(via_lines.curves(), via_curves.curves());
    }

    #[test]
    fn uniform_configuration_detection() {
        let f = qq();
        let ps = grid_points(&f);
        let lines = lines_through(&ps, 3).unwrap();
        let profile = incidence_profile(&ps, &lines).unwrap();
        match configuration_type(&profile) {
            ConfigurationType::NonUniform {
                point_histogram, ..
            } => {
                assert_eq!(point_histogram.len(), 3);
            }
            u => panic!("the grid is not uniform, got {u}"),
        }
        // rows only: every point on exactly one row, every row holds 3
        let rows = CurveSet::from_curves(
            lines
                .curves()
                .iter()
                .filter(|l| l.coeff((1, 0, 0)).is_zero() && !l.coeff((0, 1, 0)).is_zero())
                .cloned()
                .collect(),
            Provenance::default(),
        );
        assert_eq!(rows.len(), 3);
        let profile = incidence_profile(&ps, &rows).unwrap();
        assert_eq!(
            configuration_type(&profile),
            ConfigurationType::Uniform {
                n: 9,
                r: 1,
                m: 3,
                s: 3
            }
        );
    }

    #[test]
    fn empty_curve_set_profile_is_zero() {
        let f = qq();
        let ps = grid_points(&f);
        let empty = CurveSet::from_curves(Vec::new(), Provenance::default());
        let profile = incidence_profile(&ps, &empty).unwrap();
        assert!(profile.per_curve.is_empty());
        assert_eq!(profile.per_point, vec![0; 9]);
    }

    #[test]
    fn monotonicity_in_the_floor() {
        let f = qq();
        let mut pts = grid_points(&f).points().to_vec();
        pts.push(ProjectivePoint::from_ints(&f, 5, 7, 1));
        let ps = PointSet::new(f.clone(), pts, None).unwrap();
        let at3 = lines_through(&ps, 3).unwrap();
        let at4 = lines_through(&ps, 4).unwrap();
        for c in at4.curves() {
            assert!(at3.curves().contains(c));
        }
    }
}
