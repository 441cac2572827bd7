//! Built-in exact datasets (point sets, curves, reflection group generators)
//! and the named reproduction scenarios binding them to expected results.
//!
//! Derived entries carry machine-checkable verification that runs on first
//! load: the dual point sets must classify correctly against their quartic,
//! and every group must close to its known order with its known mirror
//! count. Entries are cached per process after verification.

pub mod data;
pub mod scenario;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::exactfield::CyclotomicField;
use crate::plane::PlaneCurve;
use crate::reflgroup::GroupElement;
use crate::search::PointSet;

/// What a catalog entry holds.
#[derive(Clone)]
pub enum Payload {
    Points(PointSet),
    Curve(PlaneCurve),
    Generators(Vec<GroupElement>),
}

#[derive(Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub field: CyclotomicField,
    pub payload: Payload,
    /// Where the data comes from and how it is verified.
    pub provenance: &'static str,
}

impl CatalogEntry {
    pub fn points(&self) -> Result<&PointSet> {
        match &self.payload {
            Payload::Points(p) => Ok(p),
            _ => Err(Error::DataError(format!(
                "catalog entry `{}` is not a point set",
                self.name
            ))),
        }
    }

    pub fn curve(&self) -> Result<&PlaneCurve> {
        match &self.payload {
            Payload::Curve(c) => Ok(c),
            _ => Err(Error::DataError(format!(
                "catalog entry `{}` is not a curve",
                self.name
            ))),
        }
    }

    pub fn generators(&self) -> Result<&[GroupElement]> {
        match &self.payload {
            Payload::Generators(g) => Ok(g),
            _ => Err(Error::DataError(format!(
                "catalog entry `{}` is not a generator list",
                self.name
            ))),
        }
    }
}

fn entry_cache() -> &'static Mutex<HashMap<&'static str, Arc<CatalogEntry>>> {
    static CACHE: OnceLock<Mutex<HashMap<&'static str, Arc<CatalogEntry>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The catalog names, in display order.
pub fn entry_names() -> &'static [&'static str] {
    &[
        "fermat.quartic",
        "fermat.dual",
        "fermat.P16",
        "fermat.P12",
        "fermat.P28",
        "fermat.L24",
        "klein.quartic",
        "klein.P28",
        "klein.P24",
        "groups.G23",
        "groups.G24",
        "groups.G25",
        "groups.G26",
        "groups.G27",
        "shioda.template",
    ]
}

/// Loads (and on first use verifies) a catalog entry.
pub fn load_entry(name: &str) -> Result<Arc<CatalogEntry>> {
    let canonical = entry_names()
        .iter()
        .find(|&&n| n == name)
        .ok_or_else(|| Error::UnknownEntry(name.to_string()))?;
    {
        let cache = entry_cache().lock().unwrap();
        if let Some(e) = cache.get(canonical) {
            return Ok(e.clone());
        }
    }
    let entry = Arc::new(data::build_entry(canonical)?);
    entry_cache()
        .lock()
        .unwrap()
        .insert(canonical, entry.clone());
    Ok(entry)
}

/// Parses and validates a user-supplied point file (the shioda entry point):
/// {"field": {"cyclotomic": n}, "points": [[e, e, e], ...]} with every
/// element an array of phi(n) rational strings.
pub fn ingest_points(json: &str) -> Result<PointSet> {
    crate::io::point_set_from_json_str(json)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search;
    use crate::tangency::{classify_dual_point, DualPointLabel};

    #[test]
    fn unknown_entry_is_an_error() {
        assert!(matches!(
            load_entry("nope.nothing"),
            Err(Error::UnknownEntry(_))
        ));
    }

    #[test]
    fn fermat_point_sets() {
        let p16 = load_entry("fermat.P16").unwrap();
        let pts = p16.points().unwrap();
        assert_eq!(pts.len(), 16);
        let f8 = CyclotomicField::new(8);
        // canonical sort puts (-1 : -1 : 1) first
        let first = pts.points()[0].clone();
        assert_eq!(
            first,
            crate::plane::ProjectivePoint::from_ints(&f8, -1, -1, 1)
        );
        let p12 = load_entry("fermat.P12").unwrap();
        assert_eq!(p12.points().unwrap().len(), 12);
        // (0 : -w : 1) is among them
        let w = f8.zeta();
        let target =
            crate::plane::ProjectivePoint::new([f8.zero(), -&w, f8.one()]).unwrap();
        assert!(p12.points().unwrap().contains(&target));
        let p28 = load_entry("fermat.P28").unwrap();
        assert_eq!(p28.points().unwrap().len(), 28);
    }

    #[test]
    fn fermat_dual_is_singular_on_all_28_points() {
        let dual = load_entry("fermat.dual").unwrap();
        let p28 = load_entry("fermat.P28").unwrap();
        let flags = crate::tangency::verify_singular_on(
            dual.curve().unwrap(),
            p28.points().unwrap().points(),
        )
        .unwrap();
        assert!(flags.iter().all(|&b| b));
        // but not at a generic point
        let f8 = CyclotomicField::new(8);
        let generic = crate::plane::ProjectivePoint::from_ints(&f8, 1, 0, 0);
        let neg =
            crate::tangency::verify_singular_on(dual.curve().unwrap(), &[generic]).unwrap();
        assert_eq!(neg, vec![false]);
    }

    #[test]
    fn fermat_points_classify_as_advertised() {
        let quartic = load_entry("fermat.quartic").unwrap();
        let p16 = load_entry("fermat.P16").unwrap();
        for p in p16.points().unwrap().points() {
            let (_, label) = classify_dual_point(p, quartic.curve().unwrap()).unwrap();
            assert_eq!(label, DualPointLabel::BitangentNode);
        }
        let p12 = load_entry("fermat.P12").unwrap();
        for p in p12.points().unwrap().points() {
            let (_, label) = classify_dual_point(p, quartic.curve().unwrap()).unwrap();
            assert_eq!(label, DualPointLabel::HyperflexE6);
        }
    }

    #[test]
    fn klein_orbits_verify() {
        let p28 = load_entry("klein.P28").unwrap();
        assert_eq!(p28.points().unwrap().len(), 28);
        let p24 = load_entry("klein.P24").unwrap();
        assert_eq!(p24.points().unwrap().len(), 24);
        // disjoint
        for p in p24.points().unwrap().points() {
            assert!(!p28.points().unwrap().contains(p));
        }
    }

    #[test]
    fn group_entries_have_documented_sizes() {
        for (name, order, mirrors) in [
            ("groups.G23", 120usize, 15usize),
            ("groups.G24", 336, 21),
            ("groups.G25", 648, 12),
        ] {
            let e = load_entry(name).unwrap();
            let els =
                crate::reflgroup::generate_group(e.generators().unwrap(), order * 10).unwrap();
            assert_eq!(els.len(), order, "{name}");
            assert_eq!(crate::reflgroup::mirrors(&els).len(), mirrors, "{name}");
        }
    }

    #[test]
    fn shioda_template_is_empty() {
        let e = load_entry("shioda.template").unwrap();
        assert_eq!(e.points().unwrap().len(), 0);
    }

    #[test]
    fn ingest_rejects_bad_files() {
        assert!(ingest_points("{").is_err());
        assert!(ingest_points(r#"{"field": {"cyclotomic": 1}, "points": []}"#).is_err());
        // (0:0:0)
        assert!(ingest_points(
            r#"{"field": {"cyclotomic": 1}, "points": [[["0"],["0"],["0"]]]}"#
        )
        .is_err());
        // duplicates
        assert!(ingest_points(
            r#"{"field": {"cyclotomic": 1}, "points": [[["1"],["2"],["1"]],[["1"],["2"],["1"]]]}"#
        )
        .is_err());
        // good file
        let ps = ingest_points(
            r#"{"field": {"cyclotomic": 4}, "points": [[["1","0"],["0","1"],["1","0"]],[["0","0"],["1","0"],["1","0"]]]}"#,
        )
        .unwrap();
        assert_eq!(ps.len(), 2);
        assert_eq!(ps.field().conductor(), 4);
    }

    #[test]
    fn fermat_search_smoke() {
        // small but real: the 56 conics through the dozen hyperflex points
        let p12 = load_entry("fermat.P12").unwrap();
        let conics = search::conics_through(p12.points().unwrap(), 6).unwrap();
        assert_eq!(conics.len(), 56);
    }
}
