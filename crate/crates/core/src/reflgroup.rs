//! Finite complex reflection groups acting on the plane: closure of catalog
//! generator matrices, extraction of mirror lines, and the fast census of a
//! line arrangement.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::census::{CensusCluster, SingularityCensus};
use crate::error::{Error, Result};
use crate::exactfield::{CyclotomicElement, CyclotomicField};
use crate::linalg;
use crate::plane::{PlaneCurve, ProjectivePoint};
use crate::zerodim::{PointCluster, ShearFrame, FRAME_CAP};

/// An invertible 3x3 matrix over a cyclotomic field; equality is exact
/// entry-wise comparison (the representation is linear, not projective).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    rows: [[CyclotomicElement; 3]; 3],
}

impl GroupElement {
    pub fn new(rows: [[CyclotomicElement; 3]; 3]) -> Self {
        GroupElement { rows }
    }

    pub fn from_ints(field: &CyclotomicField, rows: [[i64; 3]; 3]) -> Self {
        GroupElement {
            rows: rows.map(|r| r.map(|e| field.int(e))),
        }
    }

    pub fn identity(field: &CyclotomicField) -> Self {
        Self::from_ints(field, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    pub fn rows(&self) -> &[[CyclotomicElement; 3]; 3] {
        &self.rows
    }

    pub fn field(&self) -> &CyclotomicField {
        self.rows[0][0].field()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let field = self.field();
        let mut out: [[CyclotomicElement; 3]; 3] = [
            [field.zero(), field.zero(), field.zero()],
            [field.zero(), field.zero(), field.zero()],
            [field.zero(), field.zero(), field.zero()],
        ];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    out[i][j] = &out[i][j] + &(&self.rows[i][k] * &other.rows[k][j]);
                }
            }
        }
        GroupElement { rows: out }
    }

    pub fn transpose(&self) -> Self {
        let r = &self.rows;
        GroupElement {
            rows: [
                [r[0][0].clone(), r[1][0].clone(), r[2][0].clone()],
                [r[0][1].clone(), r[1][1].clone(), r[2][1].clone()],
                [r[0][2].clone(), r[1][2].clone(), r[2][2].clone()],
            ],
        }
    }

    pub fn det(&self) -> CyclotomicElement {
        linalg::det(self.rows.iter().map(|r| r.to_vec()).collect())
    }

    pub fn scale(&self, c: &CyclotomicElement) -> Self {
        GroupElement {
            rows: self.rows.clone().map(|r| r.map(|e| &e * c)),
        }
    }

    pub fn neg(&self) -> Self {
        GroupElement {
            rows: self.rows.clone().map(|r| r.map(|e| -&e)),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let d = self.det();
        if d.is_zero() {
            return Err(Error::InvalidArgument("singular group element".into()));
        }
        let dinv = d.inv()?;
        let r = &self.rows;
        let cof = |i1: usize, i2: usize, j1: usize, j2: usize| {
            &(&r[i1][j1] * &r[i2][j2]) - &(&r[i1][j2] * &r[i2][j1])
        };
        // adjugate transpose
        let out = [
            [cof(1, 2, 1, 2), -&cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-&cof(1, 2, 0, 2), cof(0, 2, 0, 2), -&cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -&cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ];
        Ok(GroupElement {
            rows: out.map(|row| row.map(|e| &e * &dinv)),
        })
    }

    pub fn apply(&self, p: &ProjectivePoint) -> ProjectivePoint {
        let c = p.coords();
        let field = self.field();
        let mut out = [field.zero(), field.zero(), field.zero()];
        for i in 0..3 {
            for j in 0..3 {
                out[i] = &out[i] + &(&self.rows[i][j] * &c[j]);
            }
        }
        ProjectivePoint::new(out).expect("invertible matrices preserve nonzero vectors")
    }

    /// Rank of (self - identity); a reflection of any order has rank 1.
    fn rank_minus_identity(&self) -> usize {
        let field = self.field();
        let one = field.one();
        let m: Vec<Vec<CyclotomicElement>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        if i == j {
                            &self.rows[i][j] - &one
                        } else {
                            self.rows[i][j].clone()
                        }
                    })
                    .collect()
            })
            .collect();
        linalg::echelonize(m, 3).rank
    }

    /// Multiplicative order, capped.
    pub fn order(&self, cap: u32) -> Option<u32> {
        let id = GroupElement::identity(self.field());
        let mut acc = self.clone();
        for k in 1..=cap {
            if acc == id {
                return Some(k);
            }
            acc = acc.mul(self);
        }
        None
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for r in &self.rows {
            writeln!(f, "  [{}, {}, {}]", r[0], r[1], r[2])?;
        }
        write!(f, "]")
    }
}

/// Breadth-first closure of the generators under multiplication; errors if
/// the element count exceeds `cap` (a sign of wrong generator data).
pub fn generate_group(generators: &[GroupElement], cap: usize) -> Result<Vec<GroupElement>> {
    let Some(first) = generators.first() else {
        return Err(Error::InvalidArgument("no generators".into()));
    };
    let field = first.field().clone();
    let id = GroupElement::identity(&field);
    let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for g in &frontier {
            for h in generators {
                let prod = g.mul(h);
                if seen.insert(prod.clone()) {
                    if seen.len() > cap {
                        return Err(Error::GroupCapExceeded(cap));
                    }
                    next.push(prod);
                }
            }
        }
        frontier = next;
    }
    Ok(seen.into_iter().collect())
}

/// A mirror line together with the orders of the reflections fixing it.
#[derive(Clone, Debug)]
pub struct Mirror {
    pub line: PlaneCurve,
    pub reflection_orders: BTreeSet<u32>,
}

/// The deduped mirror lines of a finite matrix group.
#[derive(Clone, Debug)]
pub struct MirrorSet {
    pub mirrors: Vec<Mirror>,
}

impl MirrorSet {
    pub fn len(&self) -> usize {
        self.mirrors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mirrors.is_empty()
    }

    pub fn lines(&self) -> Vec<PlaneCurve> {
        self.mirrors.iter().map(|m| m.line.clone()).collect()
    }

    /// Mirrors whose reflections include one of the given order.
    pub fn count_with_order(&self, order: u32) -> usize {
        self.mirrors
            .iter()
            .filter(|m| m.reflection_orders.contains(&order))
            .count()
    }
}

/// Extracts the mirrors: for every element with rank(M - I) = 1, the fixed
/// line's equation is any nonzero row of (M - I).
pub fn mirrors(elements: &[GroupElement]) -> MirrorSet {
    let mut by_line: BTreeMap<PlaneCurve, BTreeSet<u32>> = BTreeMap::new();
    for g in elements {
        if g.rank_minus_identity() != 1 {
            continue;
        }
        let field = g.field();
        let one = field.one();
        let mut line = None;
        for i in 0..3 {
            let row = [
                if i == 0 { &g.rows[i][0] - &one } else { g.rows[i][0].clone() },
                if i == 1 { &g.rows[i][1] - &one } else { g.rows[i][1].clone() },
                if i == 2 { &g.rows[i][2] - &one } else { g.rows[i][2].clone() },
            ];
            if row.iter().any(|e| !e.is_zero()) {
                line = Some(
                    PlaneCurve::new(
                        field.clone(),
                        1,
                        [
                            ((1, 0, 0), row[0].clone()),
                            ((0, 1, 0), row[1].clone()),
                            ((0, 0, 1), row[2].clone()),
                        ],
                    )
                    .expect("nonzero row"),
                );
                break;
            }
        }
        let line = line.expect("rank one matrix has a nonzero row");
        let order = g.order(1000).expect("finite group element");
        by_line.entry(line).or_default().insert(order);
    }
    MirrorSet {
        mirrors: by_line
            .into_iter()
            .map(|(line, reflection_orders)| Mirror {
                line,
                reflection_orders,
            })
            .collect(),
    }
}

/// Fast census of a line arrangement: every pair of distinct lines meets in
/// exactly one rational point, so the clusters are just grouped points.
pub fn line_census(lines: &[PlaneCurve]) -> Result<SingularityCensus> {
    if lines.len() < 2 {
        return Err(Error::InvalidArgument(
            "a line census needs at least two lines".into(),
        ));
    }
    for (i, l) in lines.iter().enumerate() {
        if l.degree() != 1 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                got: l.degree(),
            });
        }
        for m in &lines[i + 1..] {
            if l == m {
                return Err(Error::InvalidArgument("duplicate line".into()));
            }
        }
    }
    let mut by_point: BTreeMap<ProjectivePoint, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            let p = meet_lines(&lines[i], &lines[j])?;
            let entry = by_point.entry(p).or_default();
            entry.insert(i);
            entry.insert(j);
        }
    }
    // each point becomes a degree-1 cluster in the first frame that keeps
    // it affine; clusters are per-point data, so frames may differ
    let mut t: BTreeMap<u32, u64> = BTreeMap::new();
    let mut cens_clusters = Vec::with_capacity(by_point.len());
    for (p, members) in &by_point {
        let cl = (0..FRAME_CAP)
            .find_map(|idx| {
                let frame = ShearFrame::by_index(idx).expect("index below cap");
                PointCluster::from_point(p, &frame)
            })
            .ok_or(Error::FrameExhausted(FRAME_CAP))?;
        let membership: Vec<usize> = members.iter().copied().collect();
        let r = membership.len() as u32;
        *t.entry(r).or_insert(0) += 1;
        cens_clusters.push(CensusCluster {
            cluster: cl,
            membership,
            tangential: false,
        });
    }
    let census = SingularityCensus {
        t,
        total_degree: lines.len() as u32,
        member_count: lines.len(),
        tangential_count: 0,
        clusters: cens_clusters,
        frame_index: 0,
    };
    // double count: every pair of lines meets exactly once
    let pairs: u64 = census
        .t
        .iter()
        .map(|(&r, &tr)| (r as u64) * (r as u64 - 1) / 2 * tr)
        .sum();
    let expect = (lines.len() as u64) * (lines.len() as u64 - 1) / 2;
    debug_assert_eq!(pairs, expect, "line census double count");
    if pairs != expect {
        return Err(Error::InvalidArgument(
            "line census double count failed".into(),
        ));
    }
    Ok(census)
}

/// The unique intersection point of two distinct lines (cross product of
/// their coefficient vectors).
pub fn meet_lines(a: &PlaneCurve, b: &PlaneCurve) -> Result<ProjectivePoint> {
    let (u, v) = (
        [a.coeff((1, 0, 0)), a.coeff((0, 1, 0)), a.coeff((0, 0, 1))],
        [b.coeff((1, 0, 0)), b.coeff((0, 1, 0)), b.coeff((0, 0, 1))],
    );
    let cross = [
        &(&u[1] * &v[2]) - &(&u[2] * &v[1]),
        &(&u[2] * &v[0]) - &(&u[0] * &v[2]),
        &(&u[0] * &v[1]) - &(&u[1] * &v[0]),
    ];
    ProjectivePoint::new(cross)
        .map_err(|_| Error::InvalidArgument("the lines coincide".into()))
}

/// The points of given multiplicity in a line-arrangement census.
pub fn census_points(census: &SingularityCensus, multiplicity: u32) -> Vec<ProjectivePoint> {
    census
        .clusters
        .iter()
        .filter(|c| c.multiplicity() == multiplicity)
        .filter_map(|c| c.cluster.to_point())
        .collect()
}

/// Checks that each group element permutes the mirror lines.
pub fn mirrors_invariant_under(elements: &[GroupElement], mirror_set: &MirrorSet) -> Result<bool> {
    let lines: BTreeSet<PlaneCurve> = mirror_set.lines().into_iter().collect();
    for g in elements {
        let ginv = g.inverse()?;
        for line in &lines {
            // the image of {u . x = 0} under x -> g x has coefficients
            // u . g^{-1}
            let u = [
                line.coeff((1, 0, 0)),
                line.coeff((0, 1, 0)),
                line.coeff((0, 0, 1)),
            ];
            let r = &ginv.rows;
            let image = [
                &(&(&u[0] * &r[0][0]) + &(&u[1] * &r[1][0])) + &(&u[2] * &r[2][0]),
                &(&(&u[0] * &r[0][1]) + &(&u[1] * &r[1][1])) + &(&u[2] * &r[2][1]),
                &(&(&u[0] * &r[0][2]) + &(&u[1] * &r[1][2])) + &(&u[2] * &r[2][2]),
            ];
            let image_line = PlaneCurve::new(
                line.field().clone(),
                1,
                [
                    ((1, 0, 0), image[0].clone()),
                    ((0, 1, 0), image[1].clone()),
                    ((0, 0, 1), image[2].clone()),
                ],
            )?;
            if !lines.contains(&image_line) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub use line_arrangement_points::union_points;

mod line_arrangement_points {
    use super::*;

    /// All singular points of a line arrangement (multiplicity >= 2).
    pub fn union_points(census: &SingularityCensus) -> Vec<ProjectivePoint> {
        census
            .clusters
            .iter()
            .filter_map(|c| c.cluster.to_point())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qq() -> CyclotomicField {
        CyclotomicField::rationals()
    }

    #[test]
    fn identity_alone_generates_trivial_group() {
        let f = qq();
        let id = GroupElement::identity(&f);
        let g = generate_group(&[id], 10).unwrap();
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn coordinate_swaps_generate_s3() {
        let f = qq();
        let swap_xy = GroupElement::from_ints(&f, [[0, 1, 0], [1, 0, 0], [0, 0, 1]]);
        let swap_yz = GroupElement::from_ints(&f, [[1, 0, 0], [0, 0, 1], [0, 1, 0]]);
        let g = generate_group(&[swap_xy.clone(), swap_yz], 100).unwrap();
        assert_eq!(g.len(), 6);
        let ms = mirrors(&g);
        // the three reflections x=y, y=z, x=z
        assert_eq!(ms.len(), 3);
        assert_eq!(ms.count_with_order(2), 3);
        assert!(mirrors_invariant_under(&g, &ms).unwrap());
        assert_eq!(swap_xy.order(10), Some(2));
    }

    #[test]
    fn cap_exceeded_is_an_error() {
        let f = qq();
        // an infinite-order shear
        let shear = GroupElement::from_ints(&f, [[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
        assert!(matches!(
            generate_group(&[shear], 50),
            Err(Error::GroupCapExceeded(50))
        ));
    }

    #[test]
    fn three_generic_lines_census() {
        let f = qq();
        let mk = |a: i64, b: i64, c: i64| {
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
        let lines = vec![mk(1, 0, 0), mk(0, 1, 0), mk(1, 1, -1)];
        let census = line_census(&lines).unwrap();
        assert_eq!(census.t_of(2), 3);
        assert_eq!(census.total_points(), 3);
        // concurrent triple
        let pencil = vec![mk(1, 0, 0), mk(0, 1, 0), mk(1, 1, 0), mk(1, -1, 0)];
        let census = line_census(&pencil).unwrap();
        assert_eq!(census.t_of(4), 1);
        assert_eq!(census.total_points(), 1);
        let pts = census_points(&census, 4);
        assert_eq!(pts, vec![ProjectivePoint::from_ints(&f, 0, 0, 1)]);
    }

    #[test]
    fn parallel_lines_meet_at_infinity() {
        let f = qq();
        let mk = |a: i64, b: i64, c: i64| {
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
        // x = 0, x = z, x = 2z: concurrent at (0:1:0)
        let lines = vec![mk(1, 0, 0), mk(1, 0, -1), mk(1, 0, -2)];
        let census = line_census(&lines).unwrap();
        assert_eq!(census.t_of(3), 1);
        let pts = census_points(&census, 3);
        assert_eq!(pts, vec![ProjectivePoint::from_ints(&f, 0, 1, 0)]);
    }

    #[test]
    fn h3_root_representation() {
        // the rank-3 Coxeter group with a 5-fold braid: 120 elements and
        // 15 mirrors, over Q(zeta_5) via the golden ratio
        let f5 = CyclotomicField::new(5);
        let tau = -&(&f5.zeta_pow(2) + &f5.zeta_pow(3));
        let z = || f5.zero();
        let o = || f5.one();
        let n = || f5.int(-1);
        let s1 = GroupElement::new([
            [n(), tau.clone(), z()],
            [z(), o(), z()],
            [z(), z(), o()],
        ]);
        let s2 = GroupElement::new([
            [o(), z(), z()],
            [tau.clone(), n(), o()],
            [z(), z(), o()],
        ]);
        let s3 = GroupElement::new([
            [o(), z(), z()],
            [z(), o(), z()],
            [z(), o(), n()],
        ]);
        let g = generate_group(&[s1, s2, s3], 1500).unwrap();
        assert_eq!(g.len(), 120);
        let ms = mirrors(&g);
        assert_eq!(ms.len(), 15);
        assert_eq!(ms.count_with_order(2), 15);
        assert!(mirrors_invariant_under(&g, &ms).unwrap());
        let census = line_census(&ms.lines()).unwrap();
        assert_eq!(census.t_of(2), 15);
        assert_eq!(census.t_of(3), 10);
        assert_eq!(census.t_of(5), 6);
    }
}
