//! Singularity census of a curve arrangement: the counts t_r of points of
//! each multiplicity, the tangential (non-transverse) report, the ordinary
//! double-count identity for conic arrangements, and the H-constant.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactfield::{rat_int, rat_to_f64, Rat};
use crate::plane::PlaneCurve;
use crate::zerodim::{self, MergedCluster, ShearFrame};

/// Census entry for one merged cluster, kept for reporting and for scenarios
/// that consume the singular points themselves.
#[derive(Clone, Debug)]
pub struct CensusCluster {
    pub cluster: zerodim::PointCluster,
    /// Number of arrangement members through the cluster.
    pub membership: Vec<usize>,
    pub tangential: bool,
}

impl CensusCluster {
    pub fn degree(&self) -> u32 {
        self.cluster.degree()
    }

    pub fn multiplicity(&self) -> u32 {
        self.membership.len() as u32
    }
}

/// The singularity census of an arrangement of smooth curves. t_r counts
/// geometric points: a cluster of degree k whose points lie on r members
/// contributes k to t_r.
#[derive(Clone, Debug)]
pub struct SingularityCensus {
    /// r -> t_r for r >= 2.
    pub t: BTreeMap<u32, u64>,
    /// Sum of the degrees of the members.
    pub total_degree: u32,
    /// Number of members.
    pub member_count: usize,
    /// Geometric count of non-transverse (tangentially met) points.
    pub tangential_count: u64,
    pub clusters: Vec<CensusCluster>,
    /// Index of the frame that passed all audits.
    pub frame_index: usize,
}

impl SingularityCensus {
    pub fn total_points(&self) -> u64 {
        self.t.values().sum()
    }

    pub fn t_of(&self, r: u32) -> u64 {
        self.t.get(&r).copied().unwrap_or(0)
    }

    /// Clusters flagged tangential, as (membership size, degree) pairs.
    pub fn tangential_clusters(&self) -> Vec<(u32, u32)> {
        self.clusters
            .iter()
            .filter(|c| c.tangential)
            .map(|c| (c.multiplicity(), c.degree()))
            .collect()
    }
}

/// Exact Harbourne constant of a censused arrangement.
#[derive(Clone, Debug)]
pub struct HarbourneReport {
    pub h: Rat,
    pub h_approx: f64,
    pub total_degree: u32,
    pub singular_points: u64,
}

fn reject_singular_members(curves: &[PlaneCurve]) -> Result<()> {
    for (i, c) in curves.iter().enumerate() {
        if !c.is_smooth()? {
            return Err(Error::InvalidArgument(format!(
                "arrangement member {i} is singular; only smooth members are supported"
            )));
        }
    }
    Ok(())
}

fn check_distinct(curves: &[PlaneCurve]) -> Result<()> {
    for i in 0..curves.len() {
        for j in (i + 1)..curves.len() {
            if curves[i] == curves[j] {
                return Err(Error::InvalidArgument(format!(
                    "arrangement members {i} and {j} coincide"
                )));
            }
        }
    }
    Ok(())
}

fn assemble(
    curves: &[PlaneCurve],
    frame: ShearFrame,
    merged: Vec<MergedCluster>,
) -> SingularityCensus {
    let mut t: BTreeMap<u32, u64> = BTreeMap::new();
    let mut tangential_count = 0u64;
    let mut clusters = Vec::with_capacity(merged.len());
    for m in merged {
        let r = m.membership.len() as u32;
        let k = m.cluster.degree() as u64;
        debug_assert!(r >= 2, "every cluster lies on both curves of its pair");
        *t.entry(r).or_insert(0) += k;
        if m.tangential {
            tangential_count += k;
        }
        clusters.push(CensusCluster {
            cluster: m.cluster,
            membership: m.membership,
            tangential: m.tangential,
        });
    }
    SingularityCensus {
        t,
        total_degree: curves.iter().map(|c| c.degree()).sum(),
        member_count: curves.len(),
        tangential_count,
        clusters,
        frame_index: frame.index(),
    }
}

/// Full census of an arrangement of at least two pairwise distinct smooth
/// curves: frame search, all pairwise intersections, refinement, counting.
pub fn arrangement_census(curves: &[PlaneCurve]) -> Result<SingularityCensus> {
    arrangement_census_from(curves, 0)
}

/// As `arrangement_census` but starting the frame search at a given index;
/// used to check frame invariance.
pub fn arrangement_census_from(
    curves: &[PlaneCurve],
    start_frame: usize,
) -> Result<SingularityCensus> {
    if curves.len() < 2 {
        return Err(Error::InvalidArgument(
            "an arrangement census needs at least two curves".into(),
        ));
    }
    check_distinct(curves)?;
    reject_singular_members(curves)?;
    let (frame, merged) = zerodim::arrangement_clusters(curves, start_frame)?;
    Ok(assemble(curves, frame, merged))
}

/// Census of mixed lines and conics (or any smooth members): the same
/// pipeline over the concatenated list.
pub fn mixed_census(lines: &[PlaneCurve], conics: &[PlaneCurve]) -> Result<SingularityCensus> {
    let mut all = Vec::with_capacity(lines.len() + conics.len());
    all.extend_from_slice(lines);
    all.extend_from_slice(conics);
    arrangement_census(&all)
}

/// H = (d^2 - sum t_r r^2) / sum t_r, exactly.
pub fn harbourne(census: &SingularityCensus) -> Result<HarbourneReport> {
    let s = census.total_points();
    if s == 0 {
        return Err(Error::InvalidArgument(
            "the arrangement has no singular points".into(),
        ));
    }
    let d = rat_int(census.total_degree as i64);
    let mut num = &d * &d;
    for (&r, &tr) in &census.t {
        num -= rat_int((r as i64) * (r as i64)) * rat_int(tr as i64);
    }
    let h = num / rat_int(s as i64);
    Ok(HarbourneReport {
        h_approx: rat_to_f64(&h),
        h,
        total_degree: census.total_degree,
        singular_points: s,
    })
}

/// The double-count identity for k conics with ordinary singularities:
/// lhs = 4 C(k,2), rhs = sum C(r,2) t_r, defect = lhs - rhs (zero exactly
/// for transverse arrangements with distinct intersection points).
pub fn ordinary_identity(census: &SingularityCensus, k: usize) -> (u64, u64, i64) {
    let lhs = 4 * (k as u64) * (k as u64 - 1) / 2;
    let rhs: u64 = census
        .t
        .iter()
        .map(|(&r, &tr)| (r as u64) * (r as u64 - 1) / 2 * tr)
        .sum();
    (lhs, rhs, lhs as i64 - rhs as i64)
}

/// Summary of the tangentially-met clusters: geometric point count plus the
/// (membership, degree) profile.
#[derive(Clone, Debug)]
pub struct NonReducedReport {
    pub point_count: u64,
    pub clusters: Vec<(u32, u32)>,
}

pub fn nonreduced_report(census: &SingularityCensus) -> NonReducedReport {
    NonReducedReport {
        point_count: census.tangential_count,
        clusters: census.tangential_clusters(),
    }
}
