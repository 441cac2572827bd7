//! The built-in exact datasets.
//!
//! Point coordinates for the quartic dual singularities over Q(zeta_8) are
//! literal data; the two dual point sets over Q(zeta_7) are orbits of two
//! hand-verified seeds (the bitangent x+y+z = 0 and the flex tangent y = 0)
//! under the quartic's symmetry group, and are re-verified on every load by
//! classifying all 52 points. Group generator matrices are data from the
//! classical constructions; their closures are verified against the known
//! orders and mirror counts before use.

use super::{CatalogEntry, Payload};
use crate::error::{Error, Result};
use crate::exactfield::{rat, rat_int, CyclotomicField};
use crate::plane::{Mono, PlaneCurve, ProjectivePoint};
use crate::reflgroup::{generate_group, mirrors, GroupElement};
use crate::search::PointSet;
use crate::tangency::{classify_dual_point, verify_singular_on, DualPointLabel};

fn curve(field: &CyclotomicField, degree: u32, terms: &[(Mono, i64)]) -> PlaneCurve {
    PlaneCurve::new(
        field.clone(),
        degree,
        terms
            .iter()
            .map(|&(m, c)| (m, field.int(c)))
            .collect::<Vec<_>>(),
    )
    .expect("valid catalog curve")
}

fn fermat_quartic() -> PlaneCurve {
    let f8 = CyclotomicField::new(8);
    curve(&f8, 4, &[((4, 0, 0), 1), ((0, 4, 0), 1), ((0, 0, 4), 1)])
}

/// The degree-12 dual equation of the diagonal quartic.
fn fermat_dual() -> PlaneCurve {
    let f8 = CyclotomicField::new(8);
    curve(
        &f8,
        12,
        &[
            ((12, 0, 0), 1),
            ((8, 4, 0), 3),
            ((4, 8, 0), 3),
            ((0, 12, 0), 1),
            ((8, 0, 4), 3),
            ((4, 4, 4), -21),
            ((0, 8, 4), 3),
            ((4, 0, 8), 3),
            ((0, 4, 8), 3),
            ((0, 0, 12), 1),
        ],
    )
}

/// The union of the 24 lines through triples of the 32 extra tacnodes of
/// the 56-conic arrangement, as one degree-24 equation.
fn fermat_l24() -> PlaneCurve {
    let f8 = CyclotomicField::new(8);
    curve(
        &f8,
        24,
        &[
            ((16, 8, 0), 1),
            ((12, 12, 0), 1),
            ((8, 16, 0), 1),
            ((16, 4, 4), 1),
            ((12, 8, 4), 2),
            ((8, 12, 4), 2),
            ((4, 16, 4), 1),
            ((16, 0, 8), 1),
            ((12, 4, 8), 2),
            ((8, 8, 8), 3),
            ((4, 12, 8), 2),
            ((0, 16, 8), 1),
            ((12, 0, 12), 1),
            ((8, 4, 12), 2),
            ((4, 8, 12), 2),
            ((0, 12, 12), 1),
            ((8, 0, 16), 1),
            ((4, 4, 16), 1),
            ((0, 8, 16), 1),
        ],
    )
}

/// The 16 nodes of the dual: (u : v : 1) with u, v ranging over the fourth
/// roots of unity.
fn fermat_p16() -> Result<PointSet> {
    let f8 = CyclotomicField::new(8);
    let i = f8.zeta_pow(2);
    let roots = [f8.int(-1), -&i, i.clone(), f8.one()];
    let mut points = Vec::with_capacity(16);
    for u in &roots {
        for v in &roots {
            points.push(ProjectivePoint::new([u.clone(), v.clone(), f8.one()])?);
        }
    }
    PointSet::new(f8, points, Some("fermat.P16".into()))
}

/// The 12 hyperflex points of the dual: w = zeta_8.
fn fermat_p12() -> Result<PointSet> {
    let f8 = CyclotomicField::new(8);
    let w = f8.zeta();
    let w3 = f8.zeta_pow(3);
    let zero = f8.zero();
    let one = f8.one();
    let mut points = Vec::with_capacity(12);
    for s in [&w, &w3] {
        for sign in [1i64, -1] {
            let v = s.scale(&rat_int(sign));
            points.push(ProjectivePoint::new([zero.clone(), v.clone(), one.clone()])?);
            points.push(ProjectivePoint::new([v.clone(), zero.clone(), one.clone()])?);
            points.push(ProjectivePoint::new([v, one.clone(), zero.clone()])?);
        }
    }
    PointSet::new(f8, points, Some("fermat.P12".into()))
}

fn fermat_p28() -> Result<PointSet> {
    let p16 = fermat_p16()?;
    let p12 = fermat_p12()?;
    let mut points = p16.points().to_vec();
    points.extend_from_slice(p12.points());
    PointSet::new(p16.field().clone(), points, Some("fermat.P28".into()))
}

fn klein_quartic() -> PlaneCurve {
    let f7 = CyclotomicField::new(7);
    curve(&f7, 4, &[((3, 1, 0), 1), ((0, 3, 1), 1), ((1, 0, 3), 1)])
}

// -- group generator data ------------------------------------------------------

fn g23_generators() -> Vec<GroupElement> {
    // rank-3 real reflection group with a 5-fold braid, in the root basis;
    // tau is the golden ratio
    let f5 = CyclotomicField::new(5);
    let tau = -&(&f5.zeta_pow(2) + &f5.zeta_pow(3));
    let z = || f5.zero();
    let o = || f5.one();
    let n = || f5.int(-1);
    vec![
        GroupElement::new([
            [n(), tau.clone(), z()],
            [z(), o(), z()],
            [z(), z(), o()],
        ]),
        GroupElement::new([
            [o(), z(), z()],
            [tau.clone(), n(), o()],
            [z(), z(), o()],
        ]),
        GroupElement::new([
            [o(), z(), z()],
            [z(), o(), z()],
            [z(), o(), n()],
        ]),
    ]
}

fn g24_generators() -> Vec<GroupElement> {
    // symmetries of x^3 y + y^3 z + z^3 x: the coordinate rotation, the
    // diagonal 7-torsion, and the quadratic-residue involution
    let f7 = CyclotomicField::new(7);
    let g = |k: i64| f7.zeta_pow(k);
    let z = || f7.zero();
    let o = || f7.one();
    let cyc = GroupElement::new([
        [z(), o(), z()],
        [z(), z(), o()],
        [o(), z(), z()],
    ]);
    let torus = GroupElement::new([
        [g(1), z(), z()],
        [z(), g(4), z()],
        [z(), z(), g(2)],
    ]);
    // sqrt(-7) = 1 + 2(g + g^2 + g^4); the involution is (1/sqrt(-7)) times
    // a circulant in the differences g^k - g^{-k}
    let sqrt_m7 = &f7.one() + &(&(&g(1) + &g(2)) + &g(4)).scale(&rat_int(2));
    let scale = sqrt_m7.scale(&rat(-1, 7));
    let d = |a: i64, b: i64| &(&g(a) - &g(b)) * &scale;
    let invol = GroupElement::new([
        [d(1, 6), d(2, 5), d(4, 3)],
        [d(2, 5), d(4, 3), d(1, 6)],
        [d(4, 3), d(1, 6), d(2, 5)],
    ]);
    vec![cyc, torus, invol]
}

fn g25_g26_generators(with_order_two: bool) -> Vec<GroupElement> {
    let f3 = CyclotomicField::new(3);
    let w = f3.zeta();
    let w2 = f3.zeta_pow(2);
    let z = || f3.zero();
    let o = || f3.one();
    let cyc = GroupElement::new([
        [z(), o(), z()],
        [z(), z(), o()],
        [o(), z(), z()],
    ]);
    let diag = GroupElement::new([
        [o(), z(), z()],
        [z(), w.clone(), z()],
        [z(), z(), w2.clone()],
    ]);
    // 1/sqrt(-3) times the order-3 character table
    let scale = (&w - &w2).scale(&rat(-1, 3));
    let fourier = GroupElement::new([
        [scale.clone(), scale.clone(), scale.clone()],
        [scale.clone(), &scale * &w, &scale * &w2],
        [scale.clone(), &scale * &w2, &scale * &w],
    ]);
    let refl3 = GroupElement::new([
        [o(), z(), z()],
        [z(), o(), z()],
        [z(), z(), w.clone()],
    ]);
    let mut gens = vec![diag, cyc, fourier, refl3];
    if with_order_two {
        gens.push(GroupElement::new([
            [o(), z(), z()],
            [z(), z(), o()],
            [z(), o(), z()],
        ]));
    }
    gens
}

fn g27_generators() -> Vec<GroupElement> {
    // the icosahedral rotations in their standard frame, extended by the
    // twisted coordinate swap of order 2
    let f15 = CyclotomicField::new(15);
    let om = f15.zeta_pow(5);
    let om2 = f15.zeta_pow(10);
    let tau = -&(&f15.zeta_pow(6) + &f15.zeta_pow(9));
    let tau_inv = &tau - &f15.one();
    let half = rat(1, 2);
    let z = || f15.zero();
    let o = || f15.one();
    let n = || f15.int(-1);
    let cyc = GroupElement::new([
        [z(), z(), o()],
        [o(), z(), z()],
        [z(), o(), z()],
    ]);
    let flip = GroupElement::new([
        [o(), z(), z()],
        [z(), n(), z()],
        [z(), z(), n()],
    ]);
    let rot5 = GroupElement::new([
        [tau_inv.scale(&half), (-&tau).scale(&half), f15.one().scale(&half)],
        [tau.scale(&half), f15.one().scale(&half), tau_inv.scale(&half)],
        [f15.int(-1).scale(&half), tau_inv.scale(&half), tau.scale(&half)],
    ]);
    let extender = GroupElement::new([
        [z(), -&om2, z()],
        [-&om, z(), z()],
        [z(), z(), o()],
    ]);
    vec![cyc, flip, rot5, extender]
}

/// Known closure orders and mirror counts, verified on load.
pub fn group_facts(name: &str) -> Option<(usize, usize)> {
    match name {
        "groups.G23" => Some((120, 15)),
        "groups.G24" => Some((336, 21)),
        "groups.G25" => Some((648, 12)),
        "groups.G26" => Some((1296, 21)),
        "groups.G27" => Some((2160, 45)),
        _ => None,
    }
}

fn verify_group(name: &'static str, gens: &[GroupElement]) -> Result<()> {
    let (order, mirror_count) = group_facts(name).expect("known group");
    let elements = generate_group(gens, order * 10)?;
    if elements.len() != order {
        return Err(Error::CatalogVerification {
            name: name.into(),
            reason: format!("closure has {} elements, expected {order}", elements.len()),
        });
    }
    let ms = mirrors(&elements);
    if ms.len() != mirror_count {
        return Err(Error::CatalogVerification {
            name: name.into(),
            reason: format!("{} mirrors, expected {mirror_count}", ms.len()),
        });
    }
    Ok(())
}

/// Orbit of a seed point under the transposed group action (the action on
/// dual coordinates).
fn dual_orbit(elements: &[GroupElement], seed: &ProjectivePoint) -> Vec<ProjectivePoint> {
    let mut orbit = std::collections::BTreeSet::new();
    for g in elements {
        orbit.insert(g.transpose().apply(seed));
    }
    orbit.into_iter().collect()
}

fn klein_dual_points(which: DualPointLabel) -> Result<PointSet> {
    let f7 = CyclotomicField::new(7);
    let quartic = klein_quartic();
    let gens = g24_generators();
    let elements = generate_group(&gens, 3360)?;
    let (seed, expected, name) = match which {
        DualPointLabel::BitangentNode => (
            ProjectivePoint::from_ints(&f7, 1, 1, 1),
            28usize,
            "klein.P28",
        ),
        DualPointLabel::FlexCusp => (
            ProjectivePoint::from_ints(&f7, 0, 1, 0),
            24,
            "klein.P24",
        ),
        _ => unreachable!("only nodes and cusps ship"),
    };
    let orbit = dual_orbit(&elements, &seed);
    if orbit.len() != expected {
        return Err(Error::CatalogVerification {
            name: name.into(),
            reason: format!("orbit has {} points, expected {expected}", orbit.len()),
        });
    }
    for p in &orbit {
        let (pattern, label) = classify_dual_point(p, &quartic)?;
        if label != which {
            return Err(Error::CatalogVerification {
                name: name.into(),
                reason: format!("{p:?} classifies as {} {pattern}", label.name()),
            });
        }
    }
    PointSet::new(f7, orbit, Some(name.into()))
}

fn verify_fermat_dual() -> Result<PlaneCurve> {
    let dual = fermat_dual();
    let p28 = fermat_p28()?;
    let flags = verify_singular_on(&dual, p28.points())?;
    if !flags.iter().all(|&b| b) {
        return Err(Error::CatalogVerification {
            name: "fermat.dual".into(),
            reason: "the dual equation is not singular on all 28 points".into(),
        });
    }
    Ok(dual)
}

fn verify_fermat_points(which: DualPointLabel, ps: PointSet) -> Result<PointSet> {
    let quartic = fermat_quartic();
    for p in ps.points() {
        let (pattern, label) = classify_dual_point(p, &quartic)?;
        if label != which {
            return Err(Error::CatalogVerification {
                name: ps.name().unwrap_or("fermat points").into(),
                reason: format!("{p:?} classifies as {} {pattern}", label.name()),
            });
        }
    }
    Ok(ps)
}

pub(super) fn build_entry(name: &'static str) -> Result<CatalogEntry> {
    let entry = match name {
        "fermat.quartic" => CatalogEntry {
            name,
            field: CyclotomicField::new(8),
            payload: Payload::Curve(fermat_quartic()),
            provenance: "literal data: the diagonal quartic",
        },
        "fermat.dual" => CatalogEntry {
            name,
            field: CyclotomicField::new(8),
            payload: Payload::Curve(verify_fermat_dual()?),
            provenance: "literal data; verified singular on all 28 dual points",
        },
        "fermat.P16" => CatalogEntry {
            name,
            field: CyclotomicField::new(8),
            payload: Payload::Points(verify_fermat_points(
                DualPointLabel::BitangentNode,
                fermat_p16()?,
            )?),
            provenance: "literal data; verified: all 16 points are bitangent nodes of the dual",
        },
        "fermat.P12" => CatalogEntry {
            name,
            field: CyclotomicField::new(8),
            payload: Payload::Points(verify_fermat_points(
                DualPointLabel::HyperflexE6,
                fermat_p12()?,
            )?),
            provenance: "literal data; verified: all 12 points are hyperflex points of the dual",
        },
        "fermat.P28" => CatalogEntry {
            name,
            field: CyclotomicField::new(8),
            payload: Payload::Points(fermat_p28()?),
            provenance: "union of fermat.P16 and fermat.P12",
        },
        "fermat.L24" => CatalogEntry {
            name,
            field: CyclotomicField::new(8),
            payload: Payload::Curve(fermat_l24()),
            provenance: "literal data: the union of 24 lines through the extra tacnodes",
        },
        "klein.quartic" => CatalogEntry {
            name,
            field: CyclotomicField::new(7),
            payload: Payload::Curve(klein_quartic()),
            provenance: "literal data",
        },
        "klein.P28" => CatalogEntry {
            name,
            field: CyclotomicField::new(7),
            payload: Payload::Points(klein_dual_points(DualPointLabel::BitangentNode)?),
            provenance: "orbit of the verified bitangent x+y+z = 0 under the symmetry group; \
                         all 28 points re-classified on load",
        },
        "klein.P24" => CatalogEntry {
            name,
            field: CyclotomicField::new(7),
            payload: Payload::Points(klein_dual_points(DualPointLabel::FlexCusp)?),
            provenance: "orbit of the verified flex tangent y = 0 under the symmetry group; \
                         all 24 points re-classified on load",
        },
        "groups.G23" => {
            let gens = g23_generators();
            verify_group(name, &gens)?;
            CatalogEntry {
                name,
                field: CyclotomicField::new(5),
                payload: Payload::Generators(gens),
                provenance: "root-basis reflection data; verified order 120 with 15 mirrors",
            }
        }
        "groups.G24" => {
            let gens = g24_generators();
            verify_group(name, &gens)?;
            CatalogEntry {
                name,
                field: CyclotomicField::new(7),
                payload: Payload::Generators(gens),
                provenance: "quartic symmetry data; verified order 336 with 21 mirrors",
            }
        }
        "groups.G25" => {
            let gens = g25_g26_generators(false);
            verify_group(name, &gens)?;
            CatalogEntry {
                name,
                field: CyclotomicField::new(3),
                payload: Payload::Generators(gens),
                provenance: "cubic-pencil symmetry data; verified order 648 with 12 mirrors",
            }
        }
        "groups.G26" => {
            let gens = g25_g26_generators(true);
            verify_group(name, &gens)?;
            CatalogEntry {
                name,
                field: CyclotomicField::new(3),
                payload: Payload::Generators(gens),
                provenance: "cubic-pencil symmetry data; verified order 1296 with 21 mirrors",
            }
        }
        "groups.G27" => {
            let gens = g27_generators();
            verify_group(name, &gens)?;
            CatalogEntry {
                name,
                field: CyclotomicField::new(15),
                payload: Payload::Generators(gens),
                provenance: "icosahedral frame with a twisted swap extension; \
                             verified order 2160 with 45 mirrors",
            }
        }
        "shioda.template" => CatalogEntry {
            name,
            field: CyclotomicField::rationals(),
            payload: Payload::Points(PointSet::new(
                CyclotomicField::rationals(),
                Vec::new(),
                Some("shioda.template".into()),
            )?),
            provenance: "placeholder: supply a 28-point rational file to run the \
                         shioda scenarios",
        },
        _ => return Err(Error::UnknownEntry(name.to_string())),
    };
    Ok(entry)
}
