//! Seeded parameter sampling with genericity gates.
//!
//! Parameters are drawn from a ChaCha stream keyed by the run seed. A draw that
//! fails a gate is logged and replaced by the next draw from the same stream;
//! after [`MAX_RESAMPLES`] replacements the sampler gives up.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::families::{build_hm, build_t110, build_t14, build_t16, build_t17, build_t18, Family, FamilyError, FamilyInstance};
use crate::field::{Field, FieldElement};
use crate::heisenberg::{orbit, orbit_under, HeisenbergError, ProjectivePoint};
use crate::mpoly::PolyError;
use crate::singular::{Analyzer, NodeVerdict};

pub const MAX_RESAMPLES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Retry {
    pub attempt: usize,
    pub raw_parameter: Vec<FieldElement>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SampleError {
    #[error(transparent)]
    Config(FamilyError),
    #[error("no generic parameter after {} resamples", .retries.len().saturating_sub(1))]
    Exhausted { retries: Vec<Retry> },
}

pub struct Sampler {
    family: Family,
    field: Field,
    rng: ChaCha8Rng,
    attempts: usize,
    pub retries: Vec<Retry>,
}

impl Sampler {
    /// Fails with a configuration error when the field lacks the family's root of unity.
    pub fn new(family: Family, field: Field, seed: u64) -> Result<Self, SampleError> {
        if field.characteristic() == 2 {
            return Err(SampleError::Config(FamilyError::DegenerateParameter("characteristic 2 is not supported".into())));
        }
        field
            .primitive_root_of_unity(family.root_order())
            .map_err(|e| SampleError::Config(e.into()))?;
        Ok(Sampler { family, field, rng: ChaCha8Rng::seed_from_u64(seed), attempts: 0, retries: Vec::new() })
    }

    /// The quintic parameter is drawn from the torus: a zero coordinate puts
    /// the coordinate vertices on the quintic.
    fn draw(&mut self) -> Vec<FieldElement> {
        let p = self.field.characteristic();
        let low = if self.family == Family::Hm { 1 } else { 0 };
        (0..self.family.parameter_len())
            .map(|_| self.field.constant(self.rng.random_range(low..p)))
            .collect()
    }

    fn build(&self, raw: &[FieldElement]) -> Result<FamilyInstance, FamilyError> {
        let point = |c: &[FieldElement]| ProjectivePoint::new(c.to_vec());
        match self.family {
            Family::T14 => build_t14(&point(&raw[..4])?, &point(&raw[4..])?),
            Family::Hm => build_hm(&point(raw)?),
            Family::T16 => build_t16(&point(raw)?),
            Family::T17 => build_t17(raw),
            Family::T18 => build_t18(raw),
            Family::T110 => build_t110(raw),
        }
    }

    /// Record a rejected instance (for gates evaluated after construction).
    pub fn reject(&mut self, instance: &FamilyInstance, reason: impl Into<String>) {
        let raw = match &instance.parameter {
            crate::families::Parameter::Point(p) => p.coords().to_vec(),
            crate::families::Parameter::Line(a, b) => a.coords().iter().chain(b.coords()).copied().collect(),
        };
        self.retries.push(Retry { attempt: self.attempts, raw_parameter: raw, reason: reason.into() });
    }

    fn exhausted(&self) -> bool {
        self.retries.len() > MAX_RESAMPLES
    }

    /// Next instance passing the construction-time gates.
    pub fn next_instance(&mut self) -> Result<FamilyInstance, SampleError> {
        loop {
            if self.exhausted() {
                return Err(SampleError::Exhausted { retries: self.retries.clone() });
            }
            self.attempts += 1;
            let raw = self.draw();
            let outcome = self.build(&raw).map_err(|e| match e {
                FamilyError::DegenerateParameter(_)
                | FamilyError::RankDeficientLine
                | FamilyError::Poly(PolyError::NotDivisible)
                | FamilyError::Heisenberg(HeisenbergError::ZeroVector) => Ok(e.to_string()),
                other => Err(other),
            });
            let reason = match outcome {
                Ok(instance) => match gate(&instance) {
                    None => return Ok(instance),
                    Some(r) => r,
                },
                Err(Ok(r)) => r,
                Err(Err(e)) => return Err(SampleError::Config(e)),
            };
            log::info!("{} attempt {} rejected: {}", self.family, self.attempts, reason);
            self.retries.push(Retry { attempt: self.attempts, raw_parameter: raw, reason });
        }
    }

    /// Whether a further resample is still allowed.
    pub fn can_resample(&self) -> bool {
        !self.exhausted()
    }
}

/// Construction-time genericity conditions; `Some(reason)` rejects.
fn gate(instance: &FamilyInstance) -> Option<String> {
    let family = instance.family;
    let Some(seed) = instance.expected.orbit_seed.first() else { return None };
    let expected_orbit = match family {
        Family::Hm => 50,
        Family::T17 => 49,
        Family::T18 => 64,
        Family::T110 => 100,
        _ => return None,
    };
    let size = match family {
        Family::Hm => orbit(instance.group(), seed).len(),
        _ => orbit_under(&instance.group().generators[..2], seed).len(),
    };
    if size != expected_orbit {
        return Some(format!("orbit of the parameter point has {size} points, expected {expected_orbit}"));
    }
    if matches!(family, Family::T110) {
        return None;
    }
    let analyzer = match Analyzer::new(&instance.generators) {
        Ok(a) => a,
        Err(e) => return Some(e.to_string()),
    };
    match family {
        Family::Hm => match analyzer.node_test(seed, 3) {
            Ok(t) if t.verdict == NodeVerdict::Node => None,
            Ok(t) => Some(format!("parameter point is not a node ({:?}, quadric rank {:?})", t.verdict, t.quadric_rank)),
            Err(e) => Some(format!("parameter point: {e}")),
        },
        _ => {
            let codim = instance.ambient_nvars - 1 - family.variety_dim();
            match analyzer.jacobian_rank_at(seed) {
                Ok(r) if r + 1 == codim => None,
                Ok(r) => Some(format!("Jacobian rank {r} at the parameter point, expected {}", codim - 1)),
                Err(e) => Some(format!("parameter point: {e}")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn missing_root_is_a_config_error() {
        let f = make_field(7, 1).unwrap();
        assert!(matches!(Sampler::new(Family::Hm, f, 1), Err(SampleError::Config(_))));
    }

    #[test]
    fn sampling_is_deterministic() {
        let f = make_field(29, 1).unwrap();
        let a = Sampler::new(Family::T17, f, 5).unwrap().next_instance().unwrap();
        let b = Sampler::new(Family::T17, f, 5).unwrap().next_instance().unwrap();
        assert_eq!(a.parameter, b.parameter);
        assert_eq!(a.generators, b.generators);
    }
}
