//! Certificates that the Heisenberg quotient `Z_d + Z_d` acts on a family
//! by linear automorphisms.
//!
//! Three checks: (a) the defining span is stable under `sigma` and `tau`;
//! (b) the group they generate modulo scalars has order `d^2`, both generators
//! have order `d` there and their commutator is a scalar of exact order `d`;
//! (c) sampled points of the variety have orbits of size `d^2`.

use std::collections::{HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::families::{t110_matrix, Family, FamilyId, FamilyInstance};
use crate::field::FieldElement;
use crate::heisenberg::{orbit_under, span_stable, GroupElement, HeisenbergError, ProjectivePoint};
use crate::linalg::Matrix;
use crate::scan::Split;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorsionError {
    #[error("translation certificates are not defined for {0}")]
    WrongFamily(FamilyId),
    #[error(transparent)]
    Heisenberg(#[from] HeisenbergError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorCheck {
    pub generator: String,
    pub span_stable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationCertificate {
    pub family_id: FamilyId,
    pub d: usize,
    pub group_order_claimed: usize,
    pub generators_checked: Vec<GeneratorCheck>,
    pub span_stable_all: bool,
    pub quotient_order: usize,
    pub sigma_order: Option<usize>,
    pub tau_order: Option<usize>,
    pub commutator_order: Option<u64>,
    pub action_faithful: bool,
    pub sampled_points: Vec<ProjectivePoint>,
    pub orbit_sizes: Vec<usize>,
    pub orbit_free: bool,
    pub valid: bool,
}

/// Number of points of the variety used for check (c).
pub const SAMPLED_POINTS: usize = 3;

fn normalize(m: &Matrix) -> Vec<u64> {
    let lead = m.row_vecs().into_iter().flatten().find(|c| !c.is_zero()).expect("invertible");
    let inv = lead.inv().expect("nonzero");
    m.scale(inv).row_vecs().into_iter().flatten().map(|c| c.index()).collect()
}

/// Size of the group generated modulo scalars, stopping once it exceeds `cap`.
pub fn order_mod_scalars(generators: &[GroupElement], cap: usize) -> usize {
    let Some(first) = generators.first() else { return 1 };
    let id = Matrix::identity(first.matrix().field(), first.dim());
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(normalize(&id));
    queue.push_back(id);
    while let Some(m) = queue.pop_front() {
        for g in generators {
            let next = &m * g.matrix();
            if seen.insert(normalize(&next)) {
                if seen.len() > cap {
                    return seen.len();
                }
                queue.push_back(next);
            }
        }
    }
    seen.len()
}

/// Least `k >= 1` with `g^k` scalar, searched up to `bound`.
pub fn element_order_mod_scalars(g: &GroupElement, bound: usize) -> Option<usize> {
    let mut m = g.matrix().clone();
    for k in 1..=bound {
        if m.as_scalar().is_some() {
            return Some(k);
        }
        m = &m * g.matrix();
    }
    None
}

/// Random points of the variety over the instance's field.
pub fn sample_points(instance: &FamilyInstance, count: usize, seed: u64, max_tries: usize) -> Vec<ProjectivePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if instance.family == Family::T110 {
        if let Some(points) = sample_grassmann_points(instance, count, &mut rng, max_tries) {
            return points;
        }
    }
    let field = instance.field;
    let p = field.characteristic();
    let n = instance.ambient_nvars;
    let gens = &instance.generators;
    let split = Split::new(&gens[0]);
    let elements: Vec<FieldElement> = field.elements().collect();
    let mut found = Vec::new();
    let mut coeffs = Vec::new();
    for _ in 0..max_tries {
        let prefix: Vec<FieldElement> = (0..n - 1).map(|_| field.constant(rng.random_range(0..p))).collect();
        if prefix.iter().all(|c| c.is_zero()) {
            continue;
        }
        split.at(&prefix, &mut coeffs);
        for &t in &elements {
            let mut acc = field.zero();
            for c in coeffs.iter().rev() {
                acc = acc * t + *c;
            }
            if !acc.is_zero() {
                continue;
            }
            let mut point = prefix.clone();
            point.push(t);
            if gens[1..].iter().all(|g| g.eval_unchecked(&point).is_zero()) {
                let pt = ProjectivePoint::new(point).expect("nonzero prefix");
                if !found.contains(&pt) {
                    found.push(pt);
                }
            }
        }
        if found.len() >= count {
            found.truncate(count);
            break;
        }
    }
    found
}

/// Points of the Pfaffian Grassmannian are the preimages of decomposable
/// 2-vectors `u ^ v` under the linear map `x -> M_5(x, y)`; keep those where
/// the remaining generators vanish as well.
fn sample_grassmann_points(instance: &FamilyInstance, count: usize, rng: &mut ChaCha8Rng, max_tries: usize) -> Option<Vec<ProjectivePoint>> {
    let crate::families::Parameter::Point(y) = &instance.parameter else { return None };
    let field = instance.field;
    let p = field.characteristic();
    let m = t110_matrix(y).ok()?;
    let pairs: Vec<(usize, usize)> = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect();
    let linear = Matrix::from_fn(field, 10, 10, |r, k| {
        let (i, j) = pairs[r];
        m.get(i, j).coeff(&crate::mpoly::Monomial::var(k))
    });
    let inverse = linear.inverse()?;
    let mut found: Vec<ProjectivePoint> = Vec::new();
    for _ in 0..max_tries.saturating_mul(50) {
        let u: Vec<FieldElement> = (0..5).map(|_| field.constant(rng.random_range(0..p))).collect();
        let v: Vec<FieldElement> = (0..5).map(|_| field.constant(rng.random_range(0..p))).collect();
        let w: Vec<FieldElement> = pairs.iter().map(|&(i, j)| u[i] * v[j] - u[j] * v[i]).collect();
        if w.iter().all(|c| c.is_zero()) {
            continue;
        }
        let x = inverse.mul_vec(&w);
        if instance.generators.iter().all(|g| g.eval_unchecked(&x).is_zero()) {
            let pt = ProjectivePoint::new(x).expect("nonzero");
            if !found.contains(&pt) {
                found.push(pt);
                if found.len() == count {
                    break;
                }
            }
        }
    }
    Some(found)
}

pub fn certify_translations(instance: &FamilyInstance, seed: u64) -> Result<TranslationCertificate, TorsionError> {
    if !matches!(instance.family, Family::Hm | Family::T17 | Family::T18 | Family::T110) {
        return Err(TorsionError::WrongFamily(instance.id));
    }
    let d = instance.family.heisenberg_index();
    let group = instance.group();
    let sigma = group.generators[0].clone();
    let tau = group.generators[1].clone();

    let mut generators_checked = Vec::new();
    for g in [&sigma, &tau] {
        let stable = span_stable(&instance.generators, g)?.is_stable();
        generators_checked.push(GeneratorCheck { generator: g.label().to_string(), span_stable: stable });
    }
    let span_stable_all = generators_checked.iter().all(|c| c.span_stable);

    let pair = [sigma.clone(), tau.clone()];
    let quotient_order = order_mod_scalars(&pair, 4 * d * d);
    let sigma_order = element_order_mod_scalars(&sigma, 4 * d);
    let tau_order = element_order_mod_scalars(&tau, 4 * d);
    let commutator = sigma.compose(&tau).compose(&sigma.inverse()).compose(&tau.inverse());
    let commutator_order = commutator.matrix().as_scalar().and_then(|c| c.multiplicative_order());
    let action_faithful = quotient_order == d * d
        && sigma_order == Some(d)
        && tau_order == Some(d)
        && commutator_order == Some(d as u64);

    let sampled_points = sample_points(instance, SAMPLED_POINTS, seed, 400_000);
    let orbit_sizes: Vec<usize> = sampled_points.iter().map(|p| orbit_under(&pair, p).len()).collect();
    let orbit_free = sampled_points.len() >= SAMPLED_POINTS && orbit_sizes.iter().all(|&s| s == d * d);

    Ok(TranslationCertificate {
        family_id: instance.id,
        d,
        group_order_claimed: d * d,
        generators_checked,
        span_stable_all,
        quotient_order,
        sigma_order,
        tau_order,
        commutator_order,
        action_faithful,
        sampled_points,
        orbit_sizes,
        orbit_free,
        valid: span_stable_all && action_faithful && orbit_free,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_t14, build_t17};
    use crate::field::make_field;

    #[test]
    fn t17_certificate() {
        let f = make_field(29, 1).unwrap();
        let free: Vec<_> = [3, 5, 11].iter().map(|&v| f.constant(v)).collect();
        let inst = build_t17(&free).unwrap();
        let cert = certify_translations(&inst, 7).unwrap();
        assert!(cert.span_stable_all);
        assert!(cert.action_faithful, "{cert:?}");
        assert_eq!(cert.quotient_order, 49);
        assert!(cert.valid, "{cert:?}");
    }

    #[test]
    fn octic_has_no_certificate() {
        let f = make_field(13, 1).unwrap();
        let a = ProjectivePoint::new([1, 2, 3, 5].iter().map(|&v| f.constant(v)).collect()).unwrap();
        let b = ProjectivePoint::new([0, 1, 7, 4].iter().map(|&v| f.constant(v)).collect()).unwrap();
        let inst = build_t14(&a, &b).unwrap();
        assert_eq!(certify_translations(&inst, 1).unwrap_err(), TorsionError::WrongFamily(FamilyId::T14Octic));
    }
}
