//! Named reproduction scenarios: each one runs a scripted pipeline over
//! catalog data and compares every computed number exactly against its
//! expected value. Reports are deterministic; expensive intermediates are
//! cached per process so overlapping scenarios share work.

use std::any::Any;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::census::{
    arrangement_census, harbourne, nonreduced_report, ordinary_identity, SingularityCensus,
};
use crate::error::{Error, Result};
use crate::exactfield::rat_to_string;
use crate::plane::{curve_product, incidence_system, PlaneCurve, ProjectivePoint};
use crate::reflgroup::{
    census_points, generate_group, line_census, mirrors, union_points, GroupElement, MirrorSet,
};
use crate::search::{
    configuration_type, conics_through, incidence_profile, lines_through, ConfigurationType,
    CurveSet, PointSet,
};
use crate::tangency::{classify_dual_point, DualPointLabel};

/// Options threaded through a scenario run; the shioda scenarios need an
/// externally derived 28-point data set and are skipped without one.
#[derive(Default, Clone)]
pub struct ScenarioOptions {
    pub shioda_points: Option<PointSet>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScenarioStatus {
    Passed,
    Failed,
    Skipped(String),
}

#[derive(Clone, Debug)]
pub struct Assertion {
    pub label: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct ScenarioReport {
    pub name: String,
    pub status: ScenarioStatus,
    pub assertions: Vec<Assertion>,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        matches!(self.status, ScenarioStatus::Passed)
    }
}

struct Checker {
    assertions: Vec<Assertion>,
}

impl Checker {
    fn new() -> Self {
        Checker {
            assertions: Vec::new(),
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, label: &str, expected: T, actual: T) {
        self.assertions.push(Assertion {
            label: label.to_string(),
            expected: format!("{expected:?}"),
            actual: format!("{actual:?}"),
            pass: expected == actual,
        });
    }

    fn is_true(&mut self, label: &str, actual: bool) {
        self.assertions.push(Assertion {
            label: label.to_string(),
            expected: "true".into(),
            actual: format!("{actual}"),
            pass: actual,
        });
    }

    fn into_report(self, name: &str) -> ScenarioReport {
        let status = if self.assertions.iter().all(|a| a.pass) {
            ScenarioStatus::Passed
        } else {
            ScenarioStatus::Failed
        };
        ScenarioReport {
            name: name.to_string(),
            status,
            assertions: self.assertions,
        }
    }
}

// -- the shared artifact cache ---------------------------------------------------

fn artifact_cache() -> &'static Mutex<HashMap<String, Arc<dyn Any + Send + Sync>>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<dyn Any + Send + Sync>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached<T, F>(key: &str, compute: F) -> Result<Arc<T>>
where
    T: Send + Sync + 'static,
    F: FnOnce() -> Result<T>,
{
    {
        let cache = artifact_cache().lock().unwrap();
        if let Some(v) = cache.get(key) {
            if let Ok(t) = v.clone().downcast::<T>() {
                return Ok(t);
            }
        }
    }
    let value = Arc::new(compute()?);
    artifact_cache()
        .lock()
        .unwrap()
        .insert(key.to_string(), value.clone());
    Ok(value)
}

fn catalog_points(name: &str) -> Result<PointSet> {
    Ok(super::load_entry(name)?.points()?.clone())
}

fn catalog_curve(name: &str) -> Result<PlaneCurve> {
    Ok(super::load_entry(name)?.curve()?.clone())
}

fn group_elements(name: &str) -> Result<Arc<Vec<GroupElement>>> {
    cached(&format!("{name}.elements"), || {
        let entry = super::load_entry(name)?;
        let (order, _) = super::data::group_facts(name).expect("known group");
        generate_group(entry.generators()?, order * 10)
    })
}

fn group_mirrors(name: &str) -> Result<Arc<MirrorSet>> {
    cached(&format!("{name}.mirrors"), || {
        Ok(mirrors(&group_elements(name)?))
    })
}

fn group_line_census(name: &str) -> Result<Arc<SingularityCensus>> {
    cached(&format!("{name}.line_census"), || {
        line_census(&group_mirrors(name)?.lines())
    })
}

fn conic_search(key: &str, points: &PointSet, min: usize) -> Result<Arc<CurveSet>> {
    cached(key, || conics_through(points, min))
}

fn census_of(key: &str, curves: &[PlaneCurve]) -> Result<Arc<SingularityCensus>> {
    let owned = curves.to_vec();
    cached(key, move || arrangement_census(&owned))
}

fn h_string(census: &SingularityCensus) -> Result<String> {
    Ok(rat_to_string(&harbourne(census)?.h))
}

fn config_string(ct: &ConfigurationType) -> String {
    format!("{ct}")
}

fn t_entries(census: &SingularityCensus) -> Vec<(u32, u64)> {
    census.t.iter().map(|(&r, &t)| (r, t)).collect()
}

/// Indices of the set points lying on the curve.
fn incident_indices(curve: &PlaneCurve, points: &PointSet) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, p) in points.points().iter().enumerate() {
        if curve.contains(p)? {
            out.push(i);
        }
    }
    Ok(out)
}

/// Subset of a curve set containing a given point.
fn curves_through_point(curves: &CurveSet, p: &ProjectivePoint) -> Result<Vec<PlaneCurve>> {
    let mut out = Vec::new();
    for c in curves.curves() {
        if c.contains(p)? {
            out.push(c.clone());
        }
    }
    Ok(out)
}

fn filter_by_count(
    curves: &CurveSet,
    points: &PointSet,
    count: usize,
) -> Result<Vec<PlaneCurve>> {
    let profile = incidence_profile(points, curves)?;
    Ok(curves
        .curves()
        .iter()
        .zip(&profile.per_curve)
        .filter(|(_, &c)| c == count)
        .map(|(c, _)| c.clone())
        .collect())
}

// -- scenarios -------------------------------------------------------------------

pub fn scenario_names() -> &'static [&'static str] {
    &[
        "fermat-P16",
        "fermat-P12",
        "fermat-complement-pairing",
        "fermat-P28",
        "fermat-P32",
        "fermat-C24",
        "klein-main",
        "klein-cusps",
        "klein-through-point",
        "g23",
        "g24",
        "g26-conics",
        "g27",
        "shioda-main",
        "shioda-P12-derivation",
        "shioda-63-sets",
        "shioda-complement-16",
    ]
}

pub fn run_scenario(name: &str, opts: &ScenarioOptions) -> Result<ScenarioReport> {
    let run: fn(&ScenarioOptions) -> Result<ScenarioReport> = match name {
        "fermat-P16" => fermat_p16,
        "fermat-P12" => fermat_p12,
        "fermat-complement-pairing" => fermat_complement_pairing,
        "fermat-P28" => fermat_p28,
        "fermat-P32" => fermat_p32,
        "fermat-C24" => fermat_c24,
        "klein-main" => klein_main,
        "klein-cusps" => klein_cusps,
        "klein-through-point" => klein_through_point,
        "g23" => g23,
        "g24" => g24,
        "g26-conics" => g26_conics,
        "g27" => g27,
        "shioda-main" => shioda_main,
        "shioda-P12-derivation" => shioda_p12_derivation,
        "shioda-63-sets" => shioda_63_sets,
        "shioda-complement-16" => shioda_complement_16,
        _ => return Err(Error::UnknownScenario(name.to_string())),
    };
    run(opts)
}

pub fn run_all(opts: &ScenarioOptions) -> Result<Vec<ScenarioReport>> {
    scenario_names()
        .iter()
        .map(|n| run_scenario(n, opts))
        .collect()
}

fn fermat_p16(_: &ScenarioOptions) -> Result<ScenarioReport> {
    let mut ck = Checker::new();
    let p16 = catalog_points("fermat.P16")?;
    let conics = conic_search("fermat.C64", &p16, 6)?;
    ck.eq("conics through >=6 of P16", 64, conics.len());
    let profile = incidence_profile(&p16, &conics)?;
    ck.eq(
        "configuration",
        "(16_24, 64_6)".to_string(),
        config_string(&configuration_type(&profile)),
    );
    let census = census_of("fermat.C64.census", conics.curves())?;
    ck.eq(
        "census",
        vec![(2u32, 2832u64), (3, 96), (4, 72), (24, 16)],
        t_entries(&census),
    );
    ck.eq("H", "-772/377".to_string(), h_string(&census)?);
    Ok(ck.into_report("fermat-P16"))
}

fn fermat_p12(_: &ScenarioOptions) -> Result<ScenarioReport> {
    let mut ck = Checker::new();
    let p12 = catalog_points("fermat.P12")?;
    let conics = conic_search("fermat.C56", &p12, 6)?;
    ck.eq("conics through >=6 of P12", 56, conics.len());
    let profile = incidence_profile(&p12, &conics)?;
    ck.eq(
        "configuration",
        "(12_28, 56_6)".to_string(),
        config_string(&configuration_type(&profile)),
    );
    let census = census_of("fermat.C56.census", conics.curves())?;
    ck.eq("census", vec![(2u32, 1520u64), (28, 12)], t_entries(&census));
    ck.eq("tangential points", 44, census.tangential_count as usize);
    ck.eq("H", "-736/383".to_string(), h_string(&census)?);
    ck.eq(
        "ordinary double-count identity",
        (6160u64, 6056u64, 104i64),
        ordinary_identity(&census, 56),
    );
    Ok(ck.into_report("fermat-P12"))
}

fn fermat_complement_pairing(_: &ScenarioOptions) -> Result<ScenarioReport> {
    let mut ck = Checker::new();
    let p12 = catalog_points("fermat.P12")?;
    let conics = conic_search("fermat.C56", &p12, 6)?;
    let mut by_support: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut supports = Vec::new();
    for c in conics.curves() {
        let s = incident_indices(c, &p12)?;
        *by_support.entry(s.clone()).or_insert(0) += 1;
        supports.push(s);
    }
    let all: BTreeSet<usize> = (0..p12.len()).collect();
    let paired = supports
        .iter()
        .filter(|s| {
            let comp: Vec<usize> = all
                .iter()
                .copied()
                .filter(|i| !s.contains(i))
                .collect();
            by_support.get(&comp) == Some(&1)
        })
        .count();
    ck.eq("conics with a unique complementary conic", 56, paired);
    Ok(ck.into_report("fermat-complement-pairing"))
}

fn fermat_p28(_: &ScenarioOptions) -> Result<ScenarioReport> {
    let mut ck = Checker::new();
    let p28 = catalog_points("fermat.P28")?;
    let p16 = catalog_points("fermat.P16")?;
    let conics = conic_search("fermat.C2736", &p28, 6)?;
    ck.eq("conics through >=6 of P28", 2736, conics.len());
    let profile = incidence_profile(&p28, &conics)?;
    ck.eq(
        "conic counts 6/7/8",
        vec![(6usize, 2616usize), (7, 96), (8, 24)],
        profile
            .curve_histogram()
            .into_iter()
            .collect::<Vec<_>>(),
    );
    let mut per_node = BTreeSet::new();
    let mut per_hyperflex = BTreeSet::new();
    for (p, &count) in p28.points().iter().zip(&profile.per_point) {
        if p16.contains(p) {
            per_node.insert(count);
        } else {
            per_hyperflex.insert(count);
        }
    }
    ck.eq("conics through each node", vec![546usize], per_node.into_iter().collect::<Vec<_>>());
    ck.eq(
        "conics through each hyperflex point",
        vec![652usize],
        per_hyperflex.into_iter().collect::<Vec<_>>(),
    );
    Ok(ck.into_report("fermat-P28"))
}

fn fermat_p32(_: &ScenarioOptions) -> Result<ScenarioReport> {
    let mut ck = Checker::new();
    let p12 = catalog_points("fermat.P12")?;
    let conics = conic_search("fermat.C56", &p12, 6)?;
    let census = census_of("fermat.C56.census", conics.curves())?;
    // the non-P12 tacnodes: tangentially met clusters on exactly two conics;
    // the two tangency points of a doubly tangent conic pair are conjugate
    // over the base field, so the clusters come in degree 2 and split over
    // the quadratic extension of conductor 24
    let tacnodes: Vec<_> = census
        .clusters
        .iter()
        .filter(|c| c.tangential && c.multiplicity() == 2)
        .collect();
    let total: u32 = tacnodes.iter().map(|c| c.degree()).sum();
    ck.eq("extra tacnode points", 32, total as usize);
    let mut pts: Vec<ProjectivePoint> = Vec::with_capacity(32);
    let mut split_ok = true;
    for c in &tacnodes {
        match crate::zerodim::cluster_points_split(&c.cluster)? {
            Some(cluster_pts) => {
                for p in cluster_pts {
                    pts.push(p.embed(&crate::exactfield::CyclotomicField::new(24))?);
                }
            }
            None => split_ok = false,
        }
    }
    ck.is_true("every tacnode cluster splits over the degree-2 extension", split_ok);
    ck.eq("extra tacnodes realized as points", 32, pts.len());
    let f24 = crate::exactfield::CyclotomicField::new(24);
    let p32 = PointSet::new(f24.clone(), pts, Some("fermat.P32".into()))?;
    let lines = lines_through(&p32, 3)?;
    ck.eq("lines through >=3 of P32", 24, lines.len());
    let product = curve_product(lines.curves())?;
    let expected = catalog_curve("fermat.L24")?.embed(&f24)?;
    ck.is_true("line union equals the catalog degree-24 curve", product == expected);
    let lcensus = line_census(lines.curves())?;
    ck.eq(
        "line census",
        vec![(2u32, 96u64), (3, 32), (8, 3)],
        t_entries(&lcensus),
    );
    ck.eq("H", "-288/131".to_string(), h_string(&lcensus)?);
    let profile = incidence_profile(&p32, &lines)?;
    ck.eq(
        "configuration",
        "(32_3, 24_4)".to_string(),
        config_string(&configuration_type(&profile)),
    );
    // every line carries 8 double, 4 triple and 1 octuple point
    let mut per_line_ok = 0;
    for j in 0..lines.len() {
        let mut hist: BTreeMap<u32, usize> = BTreeMap::new();
        for cl in &lcensus.clusters {
            if cl.membership.contains(&j) {
                *hist.entry(cl.multiplicity()).or_insert(0) += 1;
            }
        }
        if hist == BTreeMap::from([(2u32, 8usize), (3, 4), (8, 1)]) {
            per_line_ok += 1;
        }
    }
    ck.eq("lines with 8 double + 4 triple + 1 octuple points", 24, per_line_ok);
    Ok(ck.into_report("fermat-P32"))
}

fn fermat_c24(_: &ScenarioOptions) -> Result<ScenarioReport> {
    let mut ck = Checker::new();
    let p28 = catalog_points("fermat.P28")?;
    let p16 = catalog_points("fermat.P16")?;
    let p12 = catalog_points("fermat.P12")?;
    let all = conic_search("fermat.C2736", &p28, 6)?;
    let c24 = filter_by_count(&all, &p28, 8)?;
    ck.eq("conics through 8 of P28", 24, c24.len());
    let c24set = CurveSet::from_curves(c24.clone(), Default::default());
    let profile12 = incidence_profile(&p12, &c24set)?;
    ck.eq(
        "configuration with the hyperflex points",
        "(12_8, 24_4)".to_string(),
        config_string(&configuration_type(&profile12)),
    );
    let profile16 = incidence_profile(&p16, &c24set)?;
    ck.eq(
        "configuration with the nodes",
        "(16_6, 24_4)".to_string(),
        config_string(&configuration_type(&profile16)),
    );
    let census = census_of("fermat.C24.census", &c24)?;
    ck.eq(
        "census",
        vec![(2u32, 216u64), (4, 48), (6, 16), (8, 12)],
        t_entries(&census),
    );
    ck.eq("singular points", 292, census.total_points() as usize);
    let rep = nonreduced_report(&census);
    ck.eq("non-transverse points", 24, rep.point_count as usize);
    ck.is_true(
        "every non-transverse point lies on exactly two conics",
        rep.clusters.iter().all(|&(membership, _)| membership == 2),
    );
    ck.eq("H", "-168/73".to_string(), h_string(&census)?);
    Ok(ck.into_report("fermat-C24"))
}

fn klein_main(_: &ScenarioOptions) -> Result<ScenarioReport> {
    let mut ck = Checker::new();
    let quartic = catalog_curve("klein.quartic")?;
    let p28 = catalog_points("klein.P28")?;
    let p24 = catalog_points("klein.P24")?;
    let mut nodes = 0;
    let mut cusps = 0;
    for p in p28.points().iter().chain(p24.points()) {
        match classify_dual_point(p, &quartic)?.1 {
            DualPointLabel::BitangentNode => nodes += 1,
            DualPointLabel::FlexCusp => cusps += 1,
            _ => {}
        }
    }
    ck.eq("bitangent nodes among the 52 points", 28, nodes);
    ck.eq("flex cusps among the 52 points", 24, cusps);
    let lines = lines_through(&p28, 3)?;
    ck.eq("lines through >=3 of P28", 8, lines.len());
    let conics = conic_search("klein.C3129", &p28, 6)?;
    ck.eq("conics through >=6 of P28", 3129, conics.len());
    let c21 = filter_by_count(&conics, &p28, 8)?;
    ck.eq("conics through 8 of P28", 21, c21.len());
    let c21set = CurveSet::from_curves(c21.clone(), Default::default());
    let profile = incidence_profile(&p28, &c21set)?;
    ck.eq(
        "configuration",
        "(28_6, 21_8)".to_string(),
        config_string(&configuration_type(&profile)),
    );
    let census = census_of("klein.C21.census", &c21)?;
    ck.eq("census", vec![(2u32, 420u64), (6, 28)], t_entries(&census));
    ck.eq("tangential points", 0, census.tangential_count as usize);
    ck.eq(
        "double-count defect",
        0i64,
        ordinary_identity(&census, 21).2,
    );
    ck.eq("H", "-33/16".to_string(), h_string(&census)?);
    Ok(ck.into_report("klein-main"))
}

fn klein_c147(p24: &PointSet) -> Result<Arc<Vec<PlaneCurve>>> {
    let owned = p24.clone();
    cached("klein.C147", move || {
        let all = conics_through(&owned, 6)?;
        filter_by_count(&all, &owned, 8)
    })
}

fn klein_cusps(_: &ScenarioOptions) -> Result<ScenarioReport> {
    let mut ck = Checker::new();
    let p24 = catalog_points("klein.P24")?;
    let c147 = klein_c147(&p24)?;
    ck.eq("conics through 8 of P24", 147, c147.len());
    let set = CurveSet::from_curves(c147.to_vec(), Default::default());
    let profile = incidence_profile(&p24, &set)?;
    ck.eq(
        "configuration",
        "(24_49, 147_8)".to_string(),
        config_string(&configuration_type(&profile)),
    );
    let census = census_of("klein.C147.census", &c147)?;
    ck.eq(
        "census",
        vec![(2u32, 14280u64), (3, 42), (49, 24)],
        t_entries(&census),
    );
    ck.eq("H", "-4781/2391".to_string(), h_string(&census)?);
    ck.is_true("some non-ordinary points", census.tangential_count > 0);
    Ok(ck.into_report("klein-cusps"))
}

fn klein_through_point(_: &ScenarioOptions) -> Result<ScenarioReport> {
    let mut ck = Checker::new();
    let p24 = catalog_points("klein.P24")?;
    let c147 = klein_c147(&p24)?;
    let set = CurveSet::from_curves(c147.to_vec(), Default::default());
    let p0 = &p24.points()[0];
    let c49 = curves_through_point(&set, p0)?;
    ck.eq("conics of the family through one cusp", 49, c49.len());
    let census = census_of("klein.C49.census", &c49)?;
    ck.eq(
        "census",
        vec![(2u32, 1127u64), (14, 2), (15, 21), (49, 1)],
        t_entries(&census),
    );
    ck.eq("H", "-2422/1151".to_string(), h_string(&census)?);
    let rep = nonreduced_report(&census);
    ck.eq("non-ordinary points", 2, rep.point_count as usize);
    ck.is_true(
        "fourteen conics pass through each non-ordinary point",
        rep.clusters.iter().all(|&(membership, _)| membership == 14),
    );
    Ok(ck.into_report("klein-through-point"))
}

fn g23(_: &ScenarioOptions) -> Result<ScenarioReport> {
    let mut ck = Checker::new();
    let elements = group_elements("groups.G23")?;
    ck.eq("group order", 120, elements.len());
    let ms = group_mirrors("groups.G23")?;
    ck.eq("mirrors", 15, ms.len());
    let census = group_line_census("groups.G23")?;
    ck.eq(
        "line census",
        vec![(2u32, 15u64), (3, 10), (5, 6)],
        t_entries(&census),
    );
    let all_points = union_points(&census);
    ck.eq("singular points of the mirror union", 31, all_points.len());
    let field = ms.lines()[0].field().clone();
    let p31 = PointSet::new(field.clone(), all_points, Some("g23.P31".into()))?;
    let big = conic_search("g23.C2345", &p31, 6)?;
    ck.eq("conics through >=6 of the 31 points", 2345, big.len());
    let p10 = PointSet::new(field, census_points(&census, 3), Some("g23.P10".into()))?;
    ck.eq("triple points", 10, p10.len());
    let c25 = conic_search("g23.C25", &p10, 6)?;
    ck.eq("conics through >=6 of P10", 25, c25.len());
    let profile = incidence_profile(&p10, &c25)?;
    ck.eq(
        "configuration",
        "(10_15, 25_6)".to_string(),
        config_string(&configuration_type(&profile)),
    );
    let ccensus = census_of("g23.C25.census", c25.curves())?;
    ck.eq("conic census", vec![(2u32, 150u64), (15, 10)], t_entries(&ccensus));
    ck.eq("H", "-35/16".to_string(), h_string(&ccensus)?);
    Ok(ck.into_report("g23"))
}

fn g24(_: &ScenarioOptions) -> Result<ScenarioReport> {
    let mut ck = Checker::new();
    let elements = group_elements("groups.G24")?;
    ck.eq("group order", 336, elements.len());
    let ms = group_mirrors("groups.G24")?;
    ck.eq("mirrors", 21, ms.len());
    ck.eq("mirrors of order two", 21, ms.count_with_order(2));
    let census = group_line_census("groups.G24")?;
    ck.eq(
        "line census",
        vec![(3u32, 28u64), (4, 21)],
        t_entries(&census),
    );
    let field = ms.lines()[0].field().clone();
    let p21 = PointSet::new(
        field.clone(),
        census_points(&census, 4),
        Some("g24.P21".into()),
    )?;
    ck.eq("quadruple points", 21, p21.len());
    let all = conic_search("g24.C133", &p21, 6)?;
    ck.eq("conics through >=6 of P21", 133, all.len());
    let c21 = filter_by_count(&all, &p21, 8)?;
    ck.eq("conics through 8 of P21", 21, c21.len());
    let c21set = CurveSet::from_curves(c21.clone(), Default::default());
    let profile = incidence_profile(&p21, &c21set)?;
    ck.eq(
        "configuration",
        "(21_8, 21_8)".to_string(),
        config_string(&configuration_type(&profile)),
    );
    let ccensus = census_of("g24.C21.census", &c21)?;
    ck.eq("conic census", vec![(2u32, 168u64), (8, 21)], t_entries(&ccensus));
    ck.eq("H", "-4/3".to_string(), h_string(&ccensus)?);
    ck.is_true("non-ordinary points present", ccensus.tangential_count > 0);
    let mixed: Vec<PlaneCurve> = ms.lines().into_iter().chain(c21).collect();
    let mcensus = census_of("g24.mixed.census", &mixed)?;
    ck.eq(
        "mixed line-conic census",
        vec![(2u32, 378u64), (3, 28), (12, 21)],
        t_entries(&mcensus),
    );
    ck.eq("mixed H", "-117/61".to_string(), h_string(&mcensus)?);
    Ok(ck.into_report("g24"))
}

fn g26_conics(_: &ScenarioOptions) -> Result<ScenarioReport> {
    let mut ck = Checker::new();
    let elements = group_elements("groups.G26")?;
    ck.eq("group order", 1296, elements.len());
    let ms = group_mirrors("groups.G26")?;
    ck.eq("mirrors", 21, ms.len());
    ck.eq("mirrors of order three", 12, ms.count_with_order(3));
    let census = group_line_census("groups.G26")?;
    ck.eq(
        "line census",
        vec![(2u32, 36u64), (4, 9), (5, 12)],
        t_entries(&census),
    );
    let field = ms.lines()[0].field().clone();
    let p9 = PointSet::new(field.clone(), census_points(&census, 4), Some("g26.P9".into()))?;
    let p12 = PointSet::new(
        field.clone(),
        census_points(&census, 5),
        Some("g26.P12".into()),
    )?;
    ck.eq("quadruple points", 9, p9.len());
    ck.eq("quintuple points", 12, p12.len());
    let none9 = conics_through(&p9, 6)?;
    ck.eq("conics through >=6 of the quadruple points", 0, none9.len());
    let none12 = conics_through(&p12, 6)?;
    ck.eq("conics through >=6 of the quintuple points", 0, none12.len());
    let mut union = p9.points().to_vec();
    union.extend_from_slice(p12.points());
    let p21 = PointSet::new(field, union, Some("g26.P21".into()))?;
    let c108 = conic_search("g26.C108", &p21, 6)?;
    ck.eq("conics through >=6 of the 21 points", 108, c108.len());
    let profile9 = incidence_profile(&p9, &c108)?;
    ck.eq(
        "configuration with the quadruple points",
        "(9_24, 108_2)".to_string(),
        config_string(&configuration_type(&profile9)),
    );
    let profile12 = incidence_profile(&p12, &c108)?;
    ck.eq(
        "configuration with the quintuple points",
        "(12_36, 108_4)".to_string(),
        config_string(&configuration_type(&profile12)),
    );
    // the order-3 subgroup: its 12 mirrors are the order-3 mirrors of the
    // larger group and their 21 singular points are exactly the 21 points
    let g25_elements = group_elements("groups.G25")?;
    ck.eq("order-3 subgroup order", 648, g25_elements.len());
    let ms25 = group_mirrors("groups.G25")?;
    ck.eq("order-3 subgroup mirrors", 12, ms25.len());
    let lines26: BTreeSet<PlaneCurve> = ms.lines().into_iter().collect();
    ck.is_true(
        "the 12 mirrors are among the 21",
        ms25.lines().iter().all(|l| lines26.contains(l)),
    );
    let census25 = group_line_census("groups.G25")?;
    ck.eq(
        "12-line census",
        vec![(2u32, 12u64), (4, 9)],
        t_entries(&census25),
    );
    let pts25: BTreeSet<ProjectivePoint> = union_points(&census25).into_iter().collect();
    let pts21: BTreeSet<ProjectivePoint> = p21.points().iter().cloned().collect();
    ck.is_true("the 21 dozen-line singularities are the 21 points", pts25 == pts21);
    Ok(ck.into_report("g26-conics"))
}

fn g27(_: &ScenarioOptions) -> Result<ScenarioReport> {
    let mut ck = Checker::new();
    let elements = group_elements("groups.G27")?;
    ck.eq("group order", 2160, elements.len());
    let ms = group_mirrors("groups.G27")?;
    ck.eq("mirrors", 45, ms.len());
    let census = group_line_census("groups.G27")?;
    ck.eq(
        "line census",
        vec![(3u32, 120u64), (4, 45), (5, 36)],
        t_entries(&census),
    );
    let field = ms.lines()[0].field().clone();
    let p36 = PointSet::new(field, census_points(&census, 5), Some("g27.P36".into()))?;
    ck.eq("quintuple points", 36, p36.len());
    let all = conic_search("g27.C13062", &p36, 6)?;
    ck.eq("conics through >=6 of P36", 13062, all.len());
    let profile = incidence_profile(&p36, &all)?;
    ck.eq(
        "conics through each point",
        vec![2200usize],
        profile
            .point_histogram()
            .into_keys()
            .collect::<Vec<_>>(),
    );
    ck.eq(
        "per-conic point counts",
        vec![(6usize, 12720usize), (8, 270), (10, 72)],
        profile.curve_histogram().into_iter().collect::<Vec<_>>(),
    );
    let c72 = filter_by_count(&all, &p36, 10)?;
    let c72set = CurveSet::from_curves(c72.clone(), Default::default());
    let profile72 = incidence_profile(&p36, &c72set)?;
    ck.eq(
        "ten-point configuration",
        "(36_20, 72_10)".to_string(),
        config_string(&configuration_type(&profile72)),
    );
    let ccensus = census_of("g27.C72.census", &c72)?;
    ck.eq(
        "conic census",
        vec![(2u32, 3312u64), (20, 36)],
        t_entries(&ccensus),
    );
    ck.eq("tacnodes", 72, ccensus.tangential_count as usize);
    ck.eq("H", "-64/31".to_string(), h_string(&ccensus)?);
    let c270 = filter_by_count(&all, &p36, 8)?;
    let profile270 = incidence_profile(
        &p36,
        &CurveSet::from_curves(c270, Default::default()),
    )?;
    ck.eq(
        "eight-point configuration",
        "(36_60, 270_8)".to_string(),
        config_string(&configuration_type(&profile270)),
    );
    let c12720 = filter_by_count(&all, &p36, 6)?;
    let profile12720 = incidence_profile(
        &p36,
        &CurveSet::from_curves(c12720, Default::default()),
    )?;
    ck.eq(
        "six-point configuration",
        "(36_2120, 12720_6)".to_string(),
        config_string(&configuration_type(&profile12720)),
    );
    Ok(ck.into_report("g27"))
}

// -- the shioda suite -------------------------------------------------------------

fn shioda_key(points: &PointSet) -> String {
    use std::hash::{Hash, Hasher};
    let mut h = std::collections::hash_map::DefaultHasher::new();
    for p in points.points() {
        for c in p.coords() {
            c.hash(&mut h);
        }
    }
    format!("shioda.{}.{:x}", points.len(), h.finish())
}

fn skipped(name: &str) -> ScenarioReport {
    ScenarioReport {
        name: name.to_string(),
        status: ScenarioStatus::Skipped(
            "requires an ingested 28-point data set (pass a points file)".into(),
        ),
        assertions: Vec::new(),
    }
}

/// The per-conic derivation shared by the shioda scenarios: for each conic,
/// the 22 complementary points carry 152 conics whose through-point counts
/// split 12 x 51 and 10 x 30; the dozen 51-count points form the derived set.
struct ShiodaDerivation {
    c1008: CurveSet,
    /// Distinct derived 12-point sets, canonically sorted.
    p12_sets: Vec<Vec<ProjectivePoint>>,
    /// Conics whose derivation matched the expected 152 / (12, 10) split.
    split_ok: usize,
}

fn shioda_derivation(points: &PointSet) -> Result<Arc<ShiodaDerivation>> {
    let key = format!("{}.derivation", shioda_key(points));
    let owned = points.clone();
    cached(&key, move || {
        let c1008 = conics_through(&owned, 6)?;
        let mut p12_sets: BTreeSet<Vec<ProjectivePoint>> = BTreeSet::new();
        let mut split_ok = 0usize;
        for conic in c1008.curves() {
            let on: Vec<ProjectivePoint> = owned
                .points()
                .iter()
                .filter(|p| conic.contains(p).expect("same field"))
                .cloned()
                .collect();
            let complement = owned.complement(&on)?;
            if complement.len() != owned.len() - 6 {
                continue;
            }
            let sub = conics_through(&complement, 6)?;
            let profile = incidence_profile(&complement, &sub)?;
            let hist = profile.point_histogram();
            let good = sub.len() == 152
                && hist == BTreeMap::from([(30usize, 10usize), (51, 12)]);
            if good {
                split_ok += 1;
            }
            let p12: Vec<ProjectivePoint> = complement
                .points()
                .iter()
                .zip(&profile.per_point)
                .filter(|(_, &c)| c == 51)
                .map(|(p, _)| p.clone())
                .collect();
            p12_sets.insert(p12);
        }
        Ok(ShiodaDerivation {
            c1008,
            p12_sets: p12_sets.into_iter().collect(),
            split_ok,
        })
    })
}

fn shioda_main(opts: &ScenarioOptions) -> Result<ScenarioReport> {
    let Some(points) = &opts.shioda_points else {
        return Ok(skipped("shioda-main"));
    };
    let mut ck = Checker::new();
    ck.eq("ingested points", 28, points.len());
    let derivation = shioda_derivation(points)?;
    ck.eq("conics through >=6 points", 1008, derivation.c1008.len());
    let profile = incidence_profile(points, &derivation.c1008)?;
    ck.eq(
        "configuration",
        "(28_216, 1008_6)".to_string(),
        config_string(&configuration_type(&profile)),
    );
    let lines = lines_through(points, 3)?;
    ck.eq("no three points collinear", 0, lines.len());
    Ok(ck.into_report("shioda-main"))
}

fn shioda_p12_derivation(opts: &ScenarioOptions) -> Result<ScenarioReport> {
    let Some(points) = &opts.shioda_points else {
        return Ok(skipped("shioda-P12-derivation"));
    };
    let mut ck = Checker::new();
    let derivation = shioda_derivation(points)?;
    ck.eq(
        "conics with the 152-conic and 12/51 + 10/30 split",
        derivation.c1008.len(),
        derivation.split_ok,
    );
    ck.eq("distinct derived 12-point sets", 63, derivation.p12_sets.len());
    let c1008: BTreeSet<&PlaneCurve> = derivation.c1008.curves().iter().collect();
    let mut sets_ok = 0usize;
    let mut sub_ok = 0usize;
    for p12pts in &derivation.p12_sets {
        let p12 = PointSet::new(points.field().clone(), p12pts.clone(), None)?;
        let c32 = conics_through(&p12, 6)?;
        let profile = incidence_profile(&p12, &c32)?;
        let config = config_string(&configuration_type(&profile));
        let census = arrangement_census(c32.curves())?;
        let good = c32.len() == 32
            && c32.curves().iter().all(|c| c1008.contains(c))
            && config == "(12_16, 32_6)"
            && t_entries(&census) == vec![(2u32, 544u64), (16, 12)]
            && census.tangential_count == 0
            && h_string(&census)? == "-288/139";
        if good {
            sets_ok += 1;
        }
        // the sixteen conics through one point miss exactly one other point,
        // and the conics through that point are the complementary sixteen
        let p0 = &p12.points()[0];
        let through_p0: Vec<PlaneCurve> = c32
            .curves()
            .iter()
            .filter(|c| c.contains(p0).expect("same field"))
            .cloned()
            .collect();
        if through_p0.len() != 16 {
            continue;
        }
        let mut covered: BTreeSet<usize> = BTreeSet::new();
        for c in &through_p0 {
            for (i, p) in p12.points().iter().enumerate() {
                if c.contains(p)? {
                    covered.insert(i);
                }
            }
        }
        let missing: Vec<usize> = (0..12).filter(|i| !covered.contains(i)).collect();
        if missing.len() != 1 {
            continue;
        }
        let q0 = &p12.points()[missing[0]];
        let through_q0: BTreeSet<PlaneCurve> = c32
            .curves()
            .iter()
            .filter(|c| c.contains(q0).expect("same field"))
            .cloned()
            .collect();
        let p0set: BTreeSet<PlaneCurve> = through_p0.iter().cloned().collect();
        let complementary = through_q0.len() == 16 && p0set.is_disjoint(&through_q0);
        let sub_census = arrangement_census(&through_p0)?;
        let rest = PointSet::new(
            points.field().clone(),
            p12.points()
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != 0 && *i != missing[0])
                .map(|(_, p)| p.clone())
                .collect(),
            None,
        )?;
        let sub_profile = incidence_profile(
            &rest,
            &CurveSet::from_curves(through_p0, Default::default()),
        )?;
        let good_sub = complementary
            && t_entries(&sub_census) == vec![(2u32, 80u64), (8, 10), (16, 1)]
            && h_string(&sub_census)? == "-192/91"
            && config_string(&configuration_type(&sub_profile)) == "(10_8, 16_5)";
        if good_sub {
            sub_ok += 1;
        }
    }
    ck.eq("derived sets with the full 32-conic analysis", 63, sets_ok);
    ck.eq("derived sets with the split sub-configuration", 63, sub_ok);
    Ok(ck.into_report("shioda-P12-derivation"))
}

fn shioda_63_sets(opts: &ScenarioOptions) -> Result<ScenarioReport> {
    let Some(points) = &opts.shioda_points else {
        return Ok(skipped("shioda-63-sets"));
    };
    let mut ck = Checker::new();
    let derivation = shioda_derivation(points)?;
    ck.eq("distinct derived 12-point sets", 63, derivation.p12_sets.len());
    let mut cubics: BTreeSet<PlaneCurve> = BTreeSet::new();
    let mut unique_smooth = 0usize;
    for p12pts in &derivation.p12_sets {
        let sys = incidence_system(p12pts, 3)?;
        if sys.basis.len() == 1 && sys.basis[0].is_smooth()? {
            unique_smooth += 1;
            cubics.insert(sys.basis[0].clone());
        }
    }
    ck.eq("sets carrying a unique smooth cubic", 63, unique_smooth);
    ck.eq("distinct cubics", 63, cubics.len());
    let cubic_list: Vec<PlaneCurve> = cubics.into_iter().collect();
    let cubic_set = CurveSet::from_curves(cubic_list.clone(), Default::default());
    let profile = incidence_profile(points, &cubic_set)?;
    ck.eq(
        "configuration",
        "(28_27, 63_12)".to_string(),
        config_string(&configuration_type(&profile)),
    );
    let census = arrangement_census(&cubic_list)?;
    ck.eq(
        "census",
        vec![(2u32, 4725u64), (3, 1008), (27, 28)],
        t_entries(&census),
    );
    ck.eq("H", "-1809/823".to_string(), h_string(&census)?);
    Ok(ck.into_report("shioda-63-sets"))
}

fn shioda_complement_16(opts: &ScenarioOptions) -> Result<ScenarioReport> {
    let Some(points) = &opts.shioda_points else {
        return Ok(skipped("shioda-complement-16"));
    };
    let mut ck = Checker::new();
    let derivation = shioda_derivation(points)?;
    let mut good = 0usize;
    for p12pts in &derivation.p12_sets {
        let p16 = points.complement(p12pts)?;
        if p16.len() != 16 {
            continue;
        }
        let c16 = conics_through(&p16, 6)?;
        let profile = incidence_profile(&p16, &c16)?;
        let census = arrangement_census(c16.curves())?;
        if c16.len() == 16
            && config_string(&configuration_type(&profile)) == "(16_6, 16_6)"
            && t_entries(&census) == vec![(2u32, 240u64), (6, 16)]
            && census.tangential_count == 0
            && h_string(&census)? == "-2"
        {
            good += 1;
        }
    }
    ck.eq("complementary 16-point analyses passing", 63, good);
    Ok(ck.into_report("shioda-complement-16"))
}
