//! Brute-force search for singular points over `P^n(F_q)`.
//!
//! A point is written `(prefix, t)` with `prefix` a normalized point of
//! `P^{n-1}` (or zero, for the last vertex) and `t` the last coordinate. For each
//! prefix the first generator becomes a univariate polynomial in `t`, evaluated
//! by Horner over the whole field; only its zeros reach the other generators
//! and the Jacobian test. Prefixes are cut into fixed chunks that are scanned in
//! parallel and merged in order, so output does not depend on the worker count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::families::{Family, FamilyInstance};
use crate::field::{make_field, Field, FieldElement, FieldError};
use crate::heisenberg::ProjectivePoint;
use crate::mpoly::SparsePoly;
use crate::singular::{Analyzer, NodeClass, NodeVerdict, SingularError, SingularityReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("P^{n} over a field of order {q} has {points} points, above the cap of {cap}")]
    TooManyPoints { n: usize, q: u64, points: u128, cap: u64 },
    #[error(transparent)]
    Singular(#[from] SingularError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("could not build worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    /// Points per work unit (rounded to whole prefixes).
    pub chunk_size: usize,
    /// Worker threads.
    pub jobs: usize,
    pub max_points: u64,
    /// Emit progress lines on stderr.
    pub progress: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { chunk_size: 1 << 16, jobs: 1, max_points: 50_000_000, progress: false }
    }
}

impl ScanConfig {
    /// Cap used when the caller opts into very large scans.
    pub const DEEP_MAX_POINTS: u64 = 2_000_000_000;
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ScanCounts {
    pub singular: usize,
    pub node: usize,
    pub not_node: usize,
    pub unverifiable: usize,
    #[serde(rename = "A")]
    pub class_a: usize,
    #[serde(rename = "B")]
    pub class_b: usize,
    #[serde(rename = "C")]
    pub class_c: usize,
}

impl ScanCounts {
    fn add(&mut self, r: &SingularityReport) {
        self.singular += 1;
        match r.is_node {
            NodeVerdict::Node => self.node += 1,
            NodeVerdict::NotNode => self.not_node += 1,
            NodeVerdict::Unverifiable => self.unverifiable += 1,
        }
        match r.class {
            Some(NodeClass::A) => self.class_a += 1,
            Some(NodeClass::B) => self.class_b += 1,
            Some(NodeClass::C) => self.class_c += 1,
            None => {}
        }
    }

    fn from_reports(reports: &[SingularityReport]) -> Self {
        let mut c = ScanCounts::default();
        for r in reports {
            c.add(r);
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanResult {
    pub singular_points: Vec<SingularityReport>,
    pub counts: ScanCounts,
    pub fields_scanned: Vec<(u64, usize)>,
    pub points_scanned: u64,
    /// Rational points of the variety (all generators vanish), last field scanned.
    pub zeros: u64,
    pub stabilized: bool,
    pub exceeds_expected: bool,
}

/// `(q^{n+1} - 1) / (q - 1)`.
pub fn projective_point_count(n: usize, q: u64) -> u128 {
    let q = q as u128;
    let mut total: u128 = 0;
    let mut pw: u128 = 1;
    for _ in 0..=n {
        total = total.saturating_add(pw);
        pw = pw.saturating_mul(q);
    }
    total
}

fn check_cap(n: usize, q: u64, cap: u64) -> Result<u64, ScanError> {
    let points = projective_point_count(n, q);
    if points > cap as u128 {
        return Err(ScanError::TooManyPoints { n, q, points, cap });
    }
    Ok(points as u64)
}

/// Normalized point of `P^{n-1}` with lexicographic rank `idx`; `None` past the end.
fn prefix_at(field: Field, len: usize, mut idx: u64) -> Option<Vec<FieldElement>> {
    let q = field.order();
    // leading position from the last slot to the first
    for lead in (0..len).rev() {
        let tail_len = len - 1 - lead;
        let block = q.pow(tail_len as u32);
        if idx < block {
            let mut v = vec![field.zero(); len];
            v[lead] = field.one();
            let mut rest = idx;
            for slot in (lead + 1..len).rev() {
                v[slot] = field.from_index(rest % q);
                rest /= q;
            }
            return Some(v);
        }
        idx -= block;
    }
    None
}

/// Every point of `P^n(F_q)` once, in ascending lexicographic order of the
/// normalized coordinates.
pub fn enumerate_projective(n: usize, field: Field, max_points: u64) -> Result<impl Iterator<Item = ProjectivePoint>, ScanError> {
    let total = check_cap(n, field.order(), max_points)?;
    let len = n + 1;
    Ok((0..total).map(move |i| ProjectivePoint::new(prefix_at(field, len, i).expect("index below count")).expect("nonzero")))
}

/// Terms of a polynomial grouped by the exponent of the last variable.
pub(crate) struct Split {
    /// For each power `d` of the last variable, the coefficient as a
    /// polynomial in the remaining variables (as term list).
    coeffs: Vec<Vec<([u8; 12], FieldElement)>>,
    max_exp: usize,
}

impl Split {
    pub(crate) fn new(g: &SparsePoly) -> Self {
        let n = g.nvars();
        let last = n - 1;
        let top = g.terms().iter().map(|(m, _)| m.exp(last) as usize).max().unwrap_or(0);
        let mut coeffs = vec![Vec::new(); top + 1];
        let mut max_exp = 0;
        for (m, c) in g.terms() {
            let mut e = m.0;
            let d = e[last] as usize;
            e[last] = 0;
            max_exp = max_exp.max(e.iter().copied().max().unwrap_or(0) as usize);
            coeffs[d].push((e, *c));
        }
        Split { coeffs, max_exp }
    }

    /// Univariate coefficients at `prefix` (low degree first).
    pub(crate) fn at(&self, prefix: &[FieldElement], out: &mut Vec<FieldElement>) {
        let field = prefix[0].field();
        let mut powers = vec![vec![field.one(); self.max_exp + 1]; prefix.len()];
        for (i, x) in prefix.iter().enumerate() {
            for e in 1..=self.max_exp {
                powers[i][e] = powers[i][e - 1] * *x;
            }
        }
        out.clear();
        for terms in &self.coeffs {
            let mut acc = field.zero();
            for (e, c) in terms {
                let mut t = *c;
                for (i, &ei) in e.iter().take(prefix.len()).enumerate() {
                    if ei != 0 {
                        t *= powers[i][ei as usize];
                    }
                }
                acc += t;
            }
            out.push(acc);
        }
    }
}

/// What to look for: generators, dimension of the variety, classification.
pub struct ScanTarget {
    pub analyzer: Analyzer,
    pub expected_dim: usize,
    pub classify: bool,
}

impl ScanTarget {
    pub fn for_instance(instance: &FamilyInstance, field: Field) -> Result<Self, ScanError> {
        let base = Analyzer::new(&instance.generators)?;
        let analyzer = if field.same(instance.field) { base } else { base.base_change(field)? };
        Ok(ScanTarget { analyzer, expected_dim: instance.family.variety_dim(), classify: instance.family == Family::T14 })
    }

    fn codim(&self) -> usize {
        self.analyzer.nvars() - 1 - self.expected_dim
    }

    fn examine(&self, point: Vec<FieldElement>, out: &mut Vec<SingularityReport>) -> Result<(), ScanError> {
        if !self.analyzer.generators()[1..].iter().all(|g| g.eval_unchecked(&point).is_zero()) {
            return Ok(());
        }
        if self.analyzer.jacobian(&point).rank() >= self.codim() {
            return Ok(());
        }
        let p = ProjectivePoint::new(point).expect("nonzero");
        out.push(self.analyzer.report(&p, self.expected_dim, self.classify)?);
        Ok(())
    }
}

struct ChunkOutcome {
    reports: Vec<SingularityReport>,
    zeros: u64,
}

fn scan_prefixes(target: &ScanTarget, split: &Split, elements: &[FieldElement], start: u64, end: u64) -> Result<ChunkOutcome, ScanError> {
    let field = target.analyzer.field();
    let n = target.analyzer.nvars();
    let mut reports = Vec::new();
    let mut zeros = 0;
    let mut coeffs = Vec::new();
    for idx in start..end {
        let prefix = prefix_at(field, n - 1, idx).expect("prefix index in range");
        split.at(&prefix, &mut coeffs);
        let constant = coeffs.iter().all(|c| c.is_zero());
        for &t in elements {
            if !constant {
                let mut acc = field.zero();
                for c in coeffs.iter().rev() {
                    acc = acc * t + *c;
                }
                if !acc.is_zero() {
                    continue;
                }
            }
            let mut point = prefix.clone();
            point.push(t);
            if target.analyzer.vanishes(&point) {
                zeros += 1;
            }
            target.examine(point, &mut reports)?;
        }
    }
    Ok(ChunkOutcome { reports, zeros })
}

/// All singular points of the target over `field`, in enumeration order.
pub fn scan_target(target: &ScanTarget, config: &ScanConfig) -> Result<ScanResult, ScanError> {
    let field = target.analyzer.field();
    let n = target.analyzer.nvars() - 1;
    let q = field.order();
    let points = check_cap(n, q, config.max_points)?;
    let split = Split::new(&target.analyzer.generators()[0]);
    let elements: Vec<FieldElement> = field.elements().collect();
    let prefixes = (projective_point_count(n - 1, q)) as u64;
    let per_chunk = ((config.chunk_size as u64) / q).max(1);
    let chunks: Vec<(u64, u64)> = (0..prefixes.div_ceil(per_chunk))
        .map(|c| (c * per_chunk, ((c + 1) * per_chunk).min(prefixes)))
        .collect();

    // The last vertex (0:...:0:1) comes first in lexicographic order.
    let mut vertex = vec![field.zero(); n + 1];
    vertex[n] = field.one();
    let mut head = Vec::new();
    let mut zeros = 0;
    if target.analyzer.vanishes(&vertex) {
        zeros += 1;
        target.examine(vertex, &mut head)?;
    }

    let done = AtomicUsize::new(0);
    let started = Instant::now();
    let report_every = (chunks.len() / 20).max(1);
    let run = |&(a, b): &(u64, u64)| {
        let out = scan_prefixes(target, &split, &elements, a, b);
        let d = done.fetch_add(1, Ordering::Relaxed) + 1;
        if config.progress && (d.is_multiple_of(report_every) || d == chunks.len()) {
            let secs = started.elapsed().as_secs_f64().max(1e-9);
            let pts = (d as u64 * per_chunk * q).min(points);
            eprintln!(
                "scan F_{}^{} P^{}: {}/{} chunks, {:.0} points/s",
                field.characteristic(),
                field.degree(),
                n,
                d,
                chunks.len(),
                pts as f64 / secs
            );
        }
        out
    };
    let outcomes: Vec<Result<ChunkOutcome, ScanError>> = if config.jobs <= 1 {
        chunks.iter().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| ScanError::Pool(e.to_string()))?;
        pool.install(|| chunks.par_iter().map(run).collect())
    };
    let mut singular_points = head;
    for o in outcomes {
        let o = o?;
        zeros += o.zeros;
        singular_points.extend(o.reports);
    }
    let counts = ScanCounts::from_reports(&singular_points);
    Ok(ScanResult {
        singular_points,
        counts,
        fields_scanned: vec![(field.characteristic(), field.degree())],
        points_scanned: points,
        zeros,
        stabilized: false,
        exceeds_expected: false,
    })
}

/// Singular points of the instance over `field` (a field of the same characteristic).
pub fn find_singular_points(instance: &FamilyInstance, field: Field, config: &ScanConfig) -> Result<ScanResult, ScanError> {
    let target = ScanTarget::for_instance(instance, field)?;
    let mut r = scan_target(&target, config)?;
    r.exceeds_expected = exceeds(instance, &r.counts);
    Ok(r)
}

fn exceeds(instance: &FamilyInstance, counts: &ScanCounts) -> bool {
    let e = &instance.expected;
    let cap = |c: char| e.type_counts.iter().find(|(k, _)| *k == c).map_or(usize::MAX, |(_, n)| *n);
    counts.singular > e.total || counts.class_a > cap('A') || counts.class_b > cap('B') || counts.class_c > cap('C')
}

/// Scans `F_{p^k}` for `k = 1..=k_max`, counting each point once, in the field
/// where it first appears (its minimal field of definition).
pub fn stabilize_count(instance: &FamilyInstance, k_max: usize, config: &ScanConfig) -> Result<ScanResult, ScanError> {
    let p = instance.field.characteristic();
    let mut all = Vec::new();
    let mut fields = Vec::new();
    let mut points = 0;
    let mut zeros = 0;
    let mut previous = None;
    let mut stabilized = false;
    for k in 1..=k_max {
        let field = make_field(p, k as u32)?;
        let r = find_singular_points(instance, field, config)?;
        points += r.points_scanned;
        zeros = r.zeros;
        fields.extend(r.fields_scanned);
        all.extend(r.singular_points.into_iter().filter(|s| s.point.minimal_degree() == k));
        if let Some(prev) = previous {
            stabilized = prev == all.len();
        }
        previous = Some(all.len());
    }
    let counts = ScanCounts::from_reports(&all);
    Ok(ScanResult {
        exceeds_expected: exceeds(instance, &counts),
        singular_points: all,
        counts,
        fields_scanned: fields,
        points_scanned: points,
        zeros,
        stabilized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::Monomial;

    #[test]
    fn point_counts() {
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(enumerate_projective(1, f3, 100).unwrap().count(), 4);
        assert_eq!(projective_point_count(3, 13), 2380);
        assert_eq!(projective_point_count(4, 11), 16105);
        assert!(matches!(enumerate_projective(4, f3, 10), Err(ScanError::TooManyPoints { .. })));
    }

    #[test]
    fn enumeration_is_sorted_and_distinct() {
        let f = make_field(5, 1).unwrap();
        let pts: Vec<_> = enumerate_projective(2, f, 1000).unwrap().collect();
        assert_eq!(pts.len(), 31);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(enumerate_projective(2, f4, 1000).unwrap().count(), 21);
    }

    #[test]
    fn smooth_quadric_has_no_singular_points() {
        let f = make_field(5, 1).unwrap();
        let g = SparsePoly::from_terms(
            f,
            4,
            vec![(Monomial::from_exponents(&[1, 1, 0, 0]), f.one()), (Monomial::from_exponents(&[0, 0, 1, 1]), f.one())],
        );
        let target = ScanTarget { analyzer: Analyzer::new(&[g]).unwrap(), expected_dim: 2, classify: false };
        let r = scan_target(&target, &ScanConfig::default()).unwrap();
        assert!(r.singular_points.is_empty());
        // (q+1)^2 points on a split quadric surface
        assert_eq!(r.zeros, 36);
    }

    #[test]
    fn cone_vertex_found() {
        let f = make_field(7, 1).unwrap();
        // x0 x1 - x2^2 in P^3 is a quadric cone: an A1 point at (0:0:0:1)
        let g = SparsePoly::from_terms(
            f,
            4,
            vec![(Monomial::from_exponents(&[1, 1, 0, 0]), f.one()), (Monomial::from_exponents(&[0, 0, 2, 0]), -f.one())],
        );
        let target = ScanTarget { analyzer: Analyzer::new(&[g]).unwrap(), expected_dim: 2, classify: false };
        let serial = scan_target(&target, &ScanConfig { chunk_size: 7, ..ScanConfig::default() }).unwrap();
        assert_eq!(serial.singular_points.len(), 1);
        assert_eq!(serial.singular_points[0].is_node, NodeVerdict::Node);
        let parallel = scan_target(&target, &ScanConfig { chunk_size: 7, jobs: 4, ..ScanConfig::default() }).unwrap();
        assert_eq!(serial, parallel);
    }
}
