//! Independent brute-force references used by the verification suites.
//!
//! Nothing here is called from a production path: these routines recompute
//! search results along a different route (6-subsets instead of 5-subsets)
//! so the fast implementations can be checked against them on small inputs.

use crate::error::Result;
use crate::linalg;
use crate::plane::{self, PlaneCurve};
use crate::search::{CurveSet, PointSet, Provenance};

/// Every irreducible conic through at least `min_count >= 6` points, found
/// by testing all 6-subsets: six points lie on a conic exactly when their
/// 6x6 monomial matrix is singular.
pub fn conics_through_six_bruteforce(points: &PointSet, min_count: usize) -> Result<CurveSet> {
    let monos = plane::monomials(2);
    let rows: Vec<Vec<_>> = points
        .points()
        .iter()
        .map(|p| plane::monomial_values(p, 2))
        .collect();
    let field = points.field().clone();
    let n = points.len();
    let mut found: Vec<PlaneCurve> = Vec::new();
    let mut subsets: Vec<[usize; 6]> = Vec::new();
    // plain nested 6-subset enumeration
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                for d in (c + 1)..n {
                    for e in (d + 1)..n {
                        for g in (e + 1)..n {
                            subsets.push([a, b, c, d, e, g]);
                        }
                    }
                }
            }
        }
    }
    for idx in subsets {
        let sub: Vec<Vec<_>> = idx.iter().map(|&i| rows[i].clone()).collect();
        let kernel = linalg::kernel_basis(sub, 6);
        // a pencil through 6 distinct points has no irreducible member
        if kernel.len() != 1 {
            continue;
        }
        let conic = PlaneCurve::new(
            field.clone(),
            2,
            monos
                .iter()
                .copied()
                .zip(kernel.into_iter().next().unwrap()),
        )
        .expect("kernel vector is nonzero");
        if !conic.is_irreducible_conic()? {
            continue;
        }
        let count = points
            .points()
            .iter()
            .filter(|p| conic.contains(p).expect("same field"))
            .count();
        if count >= min_count {
            found.push(conic);
        }
    }
    Ok(CurveSet::from_curves(
        found,
        Provenance {
            degree: 2,
            min_count,
            source: points.name().map(str::to_owned),
        },
    ))
}
