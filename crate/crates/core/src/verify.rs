//! Per-family verification suites.
//!
//! A suite samples an instance from the seeded parameter stream, runs the
//! family's checklist and returns a [`VerificationReport`] whose rows carry
//! `expected`, `actual` and a status. Rows marked `report-only` record
//! exploratory observations and never make a report fail.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::families::{
    hm_lines, t14_coordinate_change, t14_gl, t14_matrix, t14_vertex_square, t16_cubics, t17_matrix, t18_matrix,
    t18_translates, t110_block_swap, t110_matrix, verify_base_locus_lines, Family, FamilyError, FamilyId,
    FamilyInstance, Parameter,
};
use crate::field::{make_field, Field};
use crate::heisenberg::{
    invariant_subspace_under, make_heisenberg, orbit, orbit_under, span_rank, span_stable, GroupElement,
    ProjectivePoint, ShiftConvention, Variant,
};
use crate::linalg::Matrix;
use crate::mpoly::SparsePoly;
use crate::sample::{Retry, SampleError, Sampler};
use crate::scan::{find_singular_points, stabilize_count, ScanConfig, ScanError, ScanResult};
use crate::singular::{classify_t14, Analyzer, NodeClass, NodeVerdict};
use crate::torsion::{certify_translations, TranslationCertificate};

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    ReportOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Int(u64),
    Text(String),
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as u64)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRow {
    pub check_name: String,
    pub expected: Value,
    pub actual: Value,
    pub status: Status,
}

impl CheckRow {
    pub fn equal(name: &str, expected: impl Into<Value>, actual: impl Into<Value>) -> Self {
        let (expected, actual) = (expected.into(), actual.into());
        let status = if expected == actual { Status::Pass } else { Status::Fail };
        CheckRow { check_name: name.into(), expected, actual, status }
    }

    pub fn at_most(name: &str, cap: usize, actual: usize) -> Self {
        CheckRow {
            check_name: name.into(),
            expected: format!("<= {cap}").into(),
            actual: actual.into(),
            status: if actual <= cap { Status::Pass } else { Status::Fail },
        }
    }

    pub fn report_only(name: &str, expected: impl Into<Value>, actual: impl Into<Value>) -> Self {
        CheckRow { check_name: name.into(), expected: expected.into(), actual: actual.into(), status: Status::ReportOnly }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub family: Family,
    pub prime: u64,
    /// Largest extension degree scanned.
    pub ext: usize,
    pub seed: u64,
    /// Allow full scans of the large ambient spaces.
    pub deep: bool,
    pub jobs: usize,
    pub progress: bool,
}

impl VerifyConfig {
    pub fn new(family: Family, prime: u64, seed: u64) -> Self {
        VerifyConfig { family, prime, ext: 1, seed, deep: false, jobs: 1, progress: false }
    }

    fn scan_config(&self) -> ScanConfig {
        let mut c = ScanConfig { jobs: self.jobs.max(1), progress: self.progress, ..ScanConfig::default() };
        if self.deep {
            c.max_points = ScanConfig::DEEP_MAX_POINTS;
        }
        c
    }

    fn scans_by_default(&self) -> bool {
        matches!(self.family, Family::T14 | Family::Hm | Family::T16) || self.deep
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("no generic parameter after {} resamples", .retries.len().saturating_sub(1))]
    Exhausted { retries: Vec<Retry> },
    #[error("internal error: {0}")]
    Internal(String),
}

impl VerifyError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            VerifyError::Config(_) => 2,
            VerifyError::Exhausted { .. } => 3,
            VerifyError::Internal(_) => 1,
        }
    }
}

impl From<SampleError> for VerifyError {
    fn from(e: SampleError) -> Self {
        match e {
            SampleError::Config(e) => VerifyError::Config(e.to_string()),
            SampleError::Exhausted { retries } => VerifyError::Exhausted { retries },
        }
    }
}

impl From<ScanError> for VerifyError {
    fn from(e: ScanError) -> Self {
        match e {
            ScanError::TooManyPoints { .. } | ScanError::Field(_) => VerifyError::Config(e.to_string()),
            other => VerifyError::Internal(other.to_string()),
        }
    }
}

fn internal(e: impl std::fmt::Display) -> VerifyError {
    VerifyError::Internal(e.to_string())
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub schema_version: &'static str,
    pub family: FamilyId,
    pub prime: u64,
    pub ext: usize,
    pub seed: u64,
    pub instance: FamilyInstance,
    pub retries: Vec<Retry>,
    pub checks: Vec<CheckRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<TranslationCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second_orbit_seed: Option<ProjectivePoint>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckRow> {
        self.checks.iter().filter(|c| c.failed())
    }

    pub fn row(&self, name: &str) -> Option<&CheckRow> {
        self.checks.iter().find(|c| c.check_name == name)
    }
}

/// Canonical JSON: object keys sorted, two-space indentation, trailing newline.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report types serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

/// Field for a `(family, prime)` pair, rejecting primes without the needed root of unity.
pub fn family_field(family: Family, prime: u64) -> Result<Field, VerifyError> {
    let field = make_field(prime, 1).map_err(|e| VerifyError::Config(e.to_string()))?;
    if prime == 2 {
        return Err(VerifyError::Config("characteristic 2 is not supported".into()));
    }
    field
        .primitive_root_of_unity(family.root_order())
        .map_err(|e| VerifyError::Config(format!("{family} needs a primitive root of unity of order {}: {e}", family.root_order())))?;
    Ok(field)
}

/// Sampled instance for `construct`.
pub fn construct(family: Family, prime: u64, seed: u64) -> Result<(FamilyInstance, Vec<Retry>), VerifyError> {
    let field = family_field(family, prime)?;
    let mut sampler = Sampler::new(family, field, seed)?;
    let instance = sampler.next_instance()?;
    Ok((instance, sampler.retries))
}

/// Scan used by a suite, with the genericity verdict of its outcome.
fn suite_scan(instance: &FamilyInstance, config: &VerifyConfig) -> Result<ScanResult, VerifyError> {
    let scan = config.scan_config();
    Ok(if instance.family == Family::T14 {
        stabilize_count(instance, config.ext.max(1), &scan)?
    } else {
        find_singular_points(instance, instance.field, &scan)?
    })
}

fn scan_rejection(instance: &FamilyInstance, result: &ScanResult) -> Option<String> {
    if result.exceeds_expected {
        return Some(format!("scan found {} singular points, more than expected", result.counts.singular));
    }
    if result.counts.not_node + result.counts.unverifiable > 0 {
        return Some(format!(
            "scan found {} singular points that are not certified nodes",
            result.counts.not_node + result.counts.unverifiable
        ));
    }
    if instance.family == Family::Hm {
        let orbits = orbit_partition(instance, result);
        if orbits.len() > 2 {
            return Some(format!("singular points form {} orbits, more than two", orbits.len()));
        }
    }
    None
}

/// Orbit sizes of the scanned singular set under the instance's group, in scan order.
fn orbit_partition(instance: &FamilyInstance, result: &ScanResult) -> Vec<usize> {
    let mut remaining: BTreeSet<ProjectivePoint> = result.singular_points.iter().map(|r| r.point.clone()).collect();
    let mut sizes = Vec::new();
    while let Some(p) = remaining.iter().next().cloned() {
        let o = orbit(instance.group(), &p);
        for q in &o {
            remaining.remove(q);
        }
        sizes.push(o.len());
    }
    sizes
}

/// Runs the family's checklist.
pub fn verify(config: &VerifyConfig) -> Result<VerificationReport, VerifyError> {
    let family = config.family;
    let field = family_field(family, config.prime)?;
    let mut sampler = Sampler::new(family, field, config.seed)?;
    let (instance, scan) = loop {
        let instance = sampler.next_instance()?;
        if !config.scans_by_default() {
            break (instance, None);
        }
        log::info!("{family}: scanning singular locus over F_{}", config.prime);
        let result = suite_scan(&instance, config)?;
        match scan_rejection(&instance, &result) {
            None => break (instance, Some(result)),
            Some(reason) => {
                log::info!("{family}: rejecting parameter: {reason}");
                sampler.reject(&instance, reason);
                if !sampler.can_resample() {
                    return Err(VerifyError::Exhausted { retries: sampler.retries.clone() });
                }
            }
        }
    };
    let mut checks = Vec::new();
    let mut second_orbit_seed = None;
    match family {
        Family::T14 => t14_checks(&instance, scan.as_ref(), &mut checks)?,
        Family::Hm => second_orbit_seed = hm_checks(&instance, scan.as_ref(), &mut checks)?,
        Family::T16 => t16_checks(&instance, scan.as_ref(), &mut checks)?,
        Family::T17 => t17_checks(&instance, scan.as_ref(), &mut checks)?,
        Family::T18 => t18_checks(&instance, scan.as_ref(), &mut checks)?,
        Family::T110 => t110_checks(&instance, &mut checks)?,
    }
    let certificate = match family {
        Family::Hm | Family::T17 | Family::T18 | Family::T110 => {
            let cert = certify_translations(&instance, certificate_seed(config.seed)).map_err(internal)?;
            checks.push(CheckRow::equal("translation_certificate", "valid", if cert.valid { "valid" } else { "invalid" }));
            Some(cert)
        }
        _ => None,
    };
    let passed = !checks.iter().any(CheckRow::failed);
    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION,
        family: instance.id,
        prime: config.prime,
        ext: config.ext,
        seed: config.seed,
        retries: sampler.retries.clone(),
        instance,
        checks,
        certificate,
        scan,
        second_orbit_seed,
        passed,
    })
}

/// Every family at both of its default primes.
pub fn report_all(seed: u64, jobs: usize, progress: bool) -> Result<Vec<VerificationReport>, VerifyError> {
    let mut out = Vec::new();
    for family in Family::ALL {
        for prime in family.default_primes() {
            let config = VerifyConfig { jobs, progress, ..VerifyConfig::new(family, prime, seed) };
            out.push(verify(&config)?);
        }
    }
    Ok(out)
}

fn certificate_seed(seed: u64) -> u64 {
    seed ^ 0x9e37_79b9_7f4a_7c15
}

fn stable_labels(gens: &[SparsePoly], elements: &[GroupElement]) -> Result<String, VerifyError> {
    let mut labels = Vec::new();
    for g in elements {
        let verdict = if span_stable(gens, g).map_err(internal)?.is_stable() { "stable" } else { "not-stable" };
        labels.push(format!("{}:{}", g.label(), verdict));
    }
    Ok(labels.join(","))
}

fn all_stable(elements: &[GroupElement]) -> String {
    elements.iter().map(|g| format!("{}:stable", g.label())).collect::<Vec<_>>().join(",")
}

fn homogeneous_shape(instance: &FamilyInstance) -> String {
    let degrees: BTreeSet<String> = instance
        .generators
        .iter()
        .map(|g| match (g.is_homogeneous(), g.degree()) {
            (true, Some(d)) => d.to_string(),
            _ => "inhomogeneous".into(),
        })
        .collect();
    format!("{} x degree {}", instance.generators.len(), degrees.into_iter().collect::<Vec<_>>().join("/"))
}

fn expected_shape(family: Family) -> String {
    format!("{} x degree {}", family.generator_count(), family.generator_degree())
}

fn vanishes_on(gens: &[SparsePoly], points: &[ProjectivePoint]) -> usize {
    points.iter().filter(|p| gens.iter().all(|g| g.eval_unchecked(p.coords()).is_zero())).count()
}

fn node_count(analyzer: &Analyzer, points: &[ProjectivePoint], dim: usize) -> Result<usize, VerifyError> {
    let mut n = 0;
    for p in points {
        if analyzer.node_test(p, dim).map_err(internal)?.verdict == NodeVerdict::Node {
            n += 1;
        }
    }
    Ok(n)
}

fn alternating(ok: bool) -> &'static str {
    if ok {
        "alternating"
    } else {
        "not alternating"
    }
}

fn point_param(instance: &FamilyInstance) -> &ProjectivePoint {
    match &instance.parameter {
        Parameter::Point(p) => p,
        Parameter::Line(a, _) => a,
    }
}

fn t14_checks(instance: &FamilyInstance, scan: Option<&ScanResult>, checks: &mut Vec<CheckRow>) -> Result<(), VerifyError> {
    let field = instance.field;
    let Parameter::Line(a, b) = &instance.parameter else { return Err(internal("octic without a line parameter")) };
    let c = t14_coordinate_change(field);
    checks.push(CheckRow::equal("coordinate_change_det", 2u64, c.det().index()));
    let gl = t14_gl(a, b).map_err(internal)?;
    checks.push(CheckRow::equal("gl_degree", 16u64, gl.degree().map_or(0, u64::from)));
    let square = t14_vertex_square(field);
    let octic = &instance.generators[0];
    let exact = (octic * &square) == gl;
    checks.push(CheckRow::equal("gl_divisible_by_vertex_square", "exact", if exact { "exact" } else { "inexact" }));
    checks.push(CheckRow::equal("octic_degree", 8u64, octic.degree().map_or(0, u64::from)));

    let fiber_span = span_basis_of_entries(&t14_matrix(field));
    let group = instance.group();
    checks.push(CheckRow::report_only(
        "fiber_span_h4_stable",
        all_stable(&group.generators),
        format!("dim {}: {}", fiber_span.len(), stable_labels(&fiber_span, &group.generators)?),
    ));

    let analyzer = Analyzer::new(&instance.generators).map_err(internal)?;
    let mut vertex_nodes = 0usize;
    for i in 0..4 {
        let v = ProjectivePoint::new((0..4).map(|j| if i == j { field.one() } else { field.zero() }).collect())
            .map_err(internal)?;
        if analyzer.jacobian_rank_at(&v).map_err(internal)? == 0
            && analyzer.node_test(&v, 2).map_err(internal)?.verdict == NodeVerdict::Node
            && classify_t14(&v, &analyzer).map_err(internal)? == NodeClass::C
        {
            vertex_nodes += 1;
        }
    }
    checks.push(CheckRow::equal("vertex_nodes", 4usize, vertex_nodes));

    if let Some(scan) = scan {
        let counts = &scan.counts;
        checks.push(CheckRow::at_most("singular_total", 148, counts.singular));
        checks.push(CheckRow::at_most("class_a", 128, counts.class_a));
        checks.push(CheckRow::at_most("class_b", 16, counts.class_b));
        checks.push(CheckRow::equal("class_c", 4usize, counts.class_c));
        checks.push(CheckRow::equal("scan_nodes", counts.singular, counts.node));
        let matching = scan
            .singular_points
            .iter()
            .filter(|r| r.class == Some(class_by_coordinates(&r.point)))
            .count();
        checks.push(CheckRow::equal("class_criterion", counts.singular, matching));
        checks.push(CheckRow::report_only("nodes_found", 148usize, counts.singular));
    }
    Ok(())
}

/// Class from the vanishing of `z0 z1 z2 z3` and the number of zero coordinates.
fn class_by_coordinates(p: &ProjectivePoint) -> NodeClass {
    let product: crate::field::FieldElement = p.coords().iter().copied().product();
    if !product.is_zero() {
        NodeClass::A
    } else if p.coords().iter().filter(|c| !c.is_zero()).count() == 1 {
        NodeClass::C
    } else {
        NodeClass::B
    }
}

fn span_basis_of_entries(m: &crate::mpoly::PolyMatrix) -> Vec<SparsePoly> {
    crate::heisenberg::span_basis(&m.entries().iter().filter(|e| !e.is_zero()).cloned().collect::<Vec<_>>())
}

fn hm_checks(
    instance: &FamilyInstance,
    scan: Option<&ScanResult>,
    checks: &mut Vec<CheckRow>,
) -> Result<Option<ProjectivePoint>, VerifyError> {
    let field = instance.field;
    let y = point_param(instance);
    checks.push(CheckRow::equal("generator_shape", expected_shape(Family::Hm), homogeneous_shape(instance)));
    let group = instance.group();
    checks.push(CheckRow::equal(
        "quintic_span_stable",
        all_stable(&group.generators),
        stable_labels(&instance.generators, &group.generators)?,
    ));
    let h5 = make_heisenberg(5, field, ShiftConvention::BasisUp, Variant::Full).map_err(internal)?;
    let basis = invariant_subspace_under(&h5.generators, field, 5, 5).map_err(internal)?;
    checks.push(CheckRow::equal("invariant_quintic_dim", 6usize, basis.len()));
    let lines = hm_lines(field).map_err(internal)?;
    checks.push(CheckRow::equal("base_locus_line_count", 25usize, lines.len()));
    let passed = verify_base_locus_lines(instance, &basis).map_err(internal)?.iter().filter(|l| l.passed).count();
    checks.push(CheckRow::equal("base_locus_lines", 25usize, passed));

    let orb = orbit(group, y);
    checks.push(CheckRow::equal("orbit_size", 50usize, orb.len()));
    checks.push(CheckRow::equal("orbit_on_quintic", orb.len(), vanishes_on(&instance.generators, &orb)));
    let analyzer = Analyzer::new(&instance.generators).map_err(internal)?;
    checks.push(CheckRow::equal("orbit_nodes", orb.len(), node_count(&analyzer, &orb, 3)?));

    let Some(scan) = scan else { return Ok(None) };
    let singular: BTreeSet<ProjectivePoint> = scan.singular_points.iter().map(|r| r.point.clone()).collect();
    let first: BTreeSet<_> = orb.iter().cloned().collect();
    checks.push(CheckRow::equal("orbit_found_by_scan", first.len(), first.intersection(&singular).count()));
    let second_seed = singular.iter().find(|p| !first.contains(p)).cloned();
    let mut covered = first.clone();
    if let Some(s) = &second_seed {
        covered.extend(orbit(group, s));
    }
    let sizes = orbit_partition(instance, scan);
    checks.push(CheckRow::at_most("scan_orbit_count", 2, sizes.len()));
    let short = sizes.iter().filter(|&&s| s < 50).sum::<usize>();
    checks.push(CheckRow::report_only("short_orbit_nodes", 0usize, short));
    checks.push(CheckRow::equal("scan_points_outside_two_orbits", 0usize, singular.difference(&covered).count()));
    checks.push(CheckRow::at_most("scan_singular_total", 100, scan.counts.singular));
    checks.push(CheckRow::equal("scan_nodes", scan.counts.singular, scan.counts.node));
    Ok(second_seed)
}

fn t16_checks(instance: &FamilyInstance, scan: Option<&ScanResult>, checks: &mut Vec<CheckRow>) -> Result<(), VerifyError> {
    let field = instance.field;
    checks.push(CheckRow::equal("generator_shape", expected_shape(Family::T16), homogeneous_shape(instance)));
    let sub = make_heisenberg(6, field, ShiftConvention::CoordinateDown, Variant::Subgroup(2)).map_err(internal)?;
    let invariant = invariant_subspace_under(&sub.generators, field, 6, 3).map_err(internal)?;
    checks.push(CheckRow::equal("invariant_cubic_dim", 8usize, invariant.len()));
    let sigma = &instance.group().generators[0];
    let mut cubics: Vec<SparsePoly> = t16_cubics(field).to_vec();
    for i in 0..4 {
        let image = sigma.act_on_poly(&cubics[i]).map_err(internal)?;
        cubics.push(image);
    }
    let mut joint = invariant.clone();
    joint.extend(cubics.iter().cloned());
    checks.push(CheckRow::equal("cubic_basis_rank", 8usize, span_rank(&cubics)));
    checks.push(CheckRow::equal("cubic_basis_spans_invariants", invariant.len(), span_rank(&joint)));
    let inside = instance
        .generators
        .iter()
        .filter(|g| {
            let mut with = invariant.clone();
            with.push((*g).clone());
            span_rank(&with) == invariant.len()
        })
        .count();
    checks.push(CheckRow::equal("generators_invariant", 2usize, inside));
    let group = instance.group();
    checks.push(CheckRow::equal(
        "span_stable",
        all_stable(&group.generators),
        stable_labels(&instance.generators, &group.generators)?,
    ));
    if let Some(scan) = scan {
        checks.push(CheckRow::at_most("singular_total", 72, scan.counts.singular));
        checks.push(CheckRow::equal("scan_nodes", scan.counts.singular, scan.counts.node));
        let found: BTreeSet<ProjectivePoint> = scan.singular_points.iter().map(|r| r.point.clone()).collect();
        let closed = found.iter().all(|p| group.generators.iter().all(|g| found.contains(&g.apply_point(p))));
        checks.push(CheckRow::equal("singular_set_h6_stable", "stable", if closed { "stable" } else { "not stable" }));
        checks.push(CheckRow::report_only("nodes_found", 72usize, scan.counts.singular));
    }
    Ok(())
}

fn orbit_rows(
    instance: &FamilyInstance,
    expected_orbit: usize,
    jacobian_rank: usize,
    checks: &mut Vec<CheckRow>,
) -> Result<Vec<ProjectivePoint>, VerifyError> {
    let y = point_param(instance);
    let orb = orbit_under(&instance.group().generators[..2], y);
    checks.push(CheckRow::equal("orbit_size", expected_orbit, orb.len()));
    checks.push(CheckRow::equal("orbit_on_variety", orb.len(), vanishes_on(&instance.generators, &orb)));
    let analyzer = Analyzer::new(&instance.generators).map_err(internal)?;
    let mut ranks = 0usize;
    for p in &orb {
        if analyzer.jacobian_rank_at(p).map_err(internal)? == jacobian_rank {
            ranks += 1;
        }
    }
    checks.push(CheckRow::equal(&format!("orbit_jacobian_rank_{jacobian_rank}"), orb.len(), ranks));
    Ok(orb)
}

fn deep_scan_rows(scan: Option<&ScanResult>, orb: &[ProjectivePoint], total: usize, checks: &mut Vec<CheckRow>) {
    if let Some(scan) = scan {
        let found: BTreeSet<ProjectivePoint> = scan.singular_points.iter().map(|r| r.point.clone()).collect();
        checks.push(CheckRow::equal("orbit_found_by_scan", orb.len(), orb.iter().filter(|p| found.contains(p)).count()));
        checks.push(CheckRow::at_most("scan_singular_total", total, scan.counts.singular));
    }
}

fn t17_checks(instance: &FamilyInstance, scan: Option<&ScanResult>, checks: &mut Vec<CheckRow>) -> Result<(), VerifyError> {
    let y = point_param(instance);
    let m = t17_matrix(y).map_err(internal)?;
    checks.push(CheckRow::equal("matrix_alternating", "alternating", alternating(m.check_alternating().is_ok())));
    checks.push(CheckRow::equal("generator_shape", expected_shape(Family::T17), homogeneous_shape(instance)));
    checks.push(CheckRow::equal("generator_rank", 7usize, span_rank(&instance.generators)));
    let orb = orbit_rows(instance, 49, 2, checks)?;
    let analyzer = Analyzer::new(&instance.generators).map_err(internal)?;
    checks.push(CheckRow::equal("orbit_nodes", orb.len(), node_count(&analyzer, &orb, 3)?));
    let symmetries = crate::families::expected_symmetries(instance);
    checks.push(CheckRow::equal(
        "span_stable",
        all_stable(&symmetries),
        stable_labels(&instance.generators, &symmetries)?,
    ));
    deep_scan_rows(scan, &orb, 49, checks);
    Ok(())
}

fn t18_checks(instance: &FamilyInstance, scan: Option<&ScanResult>, checks: &mut Vec<CheckRow>) -> Result<(), VerifyError> {
    let field = instance.field;
    let y = point_param(instance);
    let m = t18_matrix(y).map_err(internal)?;
    let mut all_alternating = m.check_alternating().is_ok();
    for g in t18_translates(instance.group()) {
        let moved = m.map(|e| g.act_on_poly(e)).map_err(internal)?;
        all_alternating &= moved.check_alternating().is_ok();
    }
    checks.push(CheckRow::equal("matrices_alternating", "alternating", alternating(all_alternating)));
    checks.push(CheckRow::equal("generator_shape", expected_shape(Family::T18), homogeneous_shape(instance)));
    checks.push(CheckRow::equal("generator_rank", 4usize, span_rank(&instance.generators)));
    let orb = orbit_rows(instance, 64, 3, checks)?;
    let analyzer = Analyzer::new(&instance.generators).map_err(internal)?;
    checks.push(CheckRow::equal("orbit_nodes", orb.len(), node_count(&analyzer, &orb, 3)?));

    let sub = make_heisenberg(8, field, ShiftConvention::CoordinateDown, Variant::Subgroup(4)).map_err(internal)?;
    let invariant = invariant_subspace_under(&sub.generators, field, 8, 2).map_err(internal)?;
    let conditions = Matrix::from_fn(field, orb.len(), invariant.len(), |i, j| invariant[j].eval_unchecked(orb[i].coords()));
    let vanishing = invariant.len() - conditions.rank();
    checks.push(CheckRow::equal("invariant_quadric_dim", 4usize, vanishing));
    let mut joint = instance.generators.clone();
    joint.extend(invariant.iter().cloned());
    let inside = span_rank(&joint) == invariant.len();
    checks.push(CheckRow::equal(
        "generators_span_invariant_quadrics",
        "equal",
        if inside && span_rank(&instance.generators) == vanishing { "equal" } else { "different" },
    ));
    let symmetries = crate::families::expected_symmetries(instance);
    checks.push(CheckRow::equal(
        "span_stable",
        all_stable(&symmetries),
        stable_labels(&instance.generators, &symmetries)?,
    ));
    deep_scan_rows(scan, &orb, 64, checks);
    Ok(())
}

fn t110_checks(instance: &FamilyInstance, checks: &mut Vec<CheckRow>) -> Result<(), VerifyError> {
    let y = point_param(instance);
    let m = t110_matrix(y).map_err(internal)?;
    checks.push(CheckRow::equal("matrix_alternating", "alternating", alternating(m.check_alternating().is_ok())));
    checks.push(CheckRow::equal("generator_shape", expected_shape(Family::T110), homogeneous_shape(instance)));
    checks.push(CheckRow::equal("generator_rank", 10usize, span_rank(&instance.generators)));
    let group = instance.group();
    let mut symmetries = group.generators.clone();
    symmetries.push(t110_block_swap(group));
    checks.push(CheckRow::equal(
        "span_stable",
        all_stable(&symmetries),
        stable_labels(&instance.generators, &symmetries)?,
    ));
    let y = point_param(instance);
    let orb = orbit_under(&group.generators[..2], y);
    checks.push(CheckRow::equal("orbit_size", 100usize, orb.len()));
    let on = vanishes_on(&instance.generators, &orb);
    checks.push(CheckRow::report_only("orbit_on_variety", orb.len(), on));
    let analyzer = Analyzer::new(&instance.generators).map_err(internal)?;
    let mut singular = 0usize;
    for p in orb.iter().filter(|p| analyzer.vanishes(p.coords())) {
        if analyzer.jacobian_rank_at(p).map_err(internal)? < 6 {
            singular += 1;
        }
    }
    checks.push(CheckRow::report_only("orbit_singular", orb.len(), singular));
    Ok(())
}

/// Wraps a family error raised while building auxiliary objects.
impl From<FamilyError> for VerifyError {
    fn from(e: FamilyError) -> Self {
        VerifyError::Internal(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incompatible_prime_is_a_config_error() {
        let err = verify(&VerifyConfig::new(Family::Hm, 7, 1)).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert_eq!(family_field(Family::T17, 15).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn t18_suite_passes() {
        let report = verify(&VerifyConfig::new(Family::T18, 17, 1)).unwrap();
        let failures: Vec<_> = report.failures().collect();
        assert!(failures.is_empty(), "{failures:?}");
        let row = report.row("invariant_quadric_dim").unwrap();
        assert_eq!(row.expected, Value::Int(4));
    }

    #[test]
    fn canonical_json_sorts_keys() {
        let row = CheckRow::equal("b", 1usize, 1usize);
        let s = canonical_json(&row);
        let keys: Vec<_> = s.lines().filter_map(|l| l.trim().split('"').nth(1)).collect();
        assert_eq!(keys, ["actual", "check_name", "expected", "status"]);
    }
}
