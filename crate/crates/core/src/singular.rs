//! Jacobian criterion and ordinary-double-point certification at exact points.

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, FieldElement};
use crate::heisenberg::ProjectivePoint;
use crate::linalg::Matrix;
use crate::mpoly::SparsePoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SingularError {
    #[error("a generator does not vanish at the point")]
    PointNotOnVariety,
    #[error("the point is not singular")]
    NotSingular,
    #[error("quadratic parts are undefined in characteristic 2")]
    CharacteristicTwo,
    #[error("point has {got} coordinates, generators use {expected}")]
    WrongArity { expected: usize, got: usize },
    #[error("no generators")]
    NoGenerators,
    #[error("expected dimension {dim} is too large for P^{ambient}")]
    BadDimension { dim: usize, ambient: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum NodeVerdict {
    Node,
    NotNode,
    Unverifiable,
}

/// Octic singular point classes: smooth locus, double locus, coordinate vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum NodeClass {
    A,
    B,
    C,
}

impl NodeClass {
    pub fn as_char(self) -> char {
        match self {
            NodeClass::A => 'A',
            NodeClass::B => 'B',
            NodeClass::C => 'C',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeTest {
    pub verdict: NodeVerdict,
    pub jacobian_rank: usize,
    /// Rank of the tangent-cone quadric on the tangent space, when one was formed.
    pub quadric_rank: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularityReport {
    pub point: ProjectivePoint,
    pub jacobian_rank: usize,
    pub expected_corank_ok: bool,
    pub is_node: NodeVerdict,
    pub quadric_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<NodeClass>,
}

/// Generators with their first and second partial derivatives precomputed.
#[derive(Clone, Debug)]
pub struct Analyzer {
    field: Field,
    nvars: usize,
    gens: Vec<SparsePoly>,
    grads: Vec<Vec<SparsePoly>>,
    hessians: Vec<Vec<Vec<SparsePoly>>>,
}

impl Analyzer {
    pub fn new(gens: &[SparsePoly]) -> Result<Self, SingularError> {
        let first = gens.first().ok_or(SingularError::NoGenerators)?;
        let field = first.field();
        if field.characteristic() == 2 {
            return Err(SingularError::CharacteristicTwo);
        }
        let nvars = first.nvars();
        let grads: Vec<Vec<SparsePoly>> = gens.iter().map(|g| (0..nvars).map(|i| g.derivative(i)).collect()).collect();
        let hessians = grads
            .iter()
            .map(|row| {
                (0..nvars)
                    .map(|i| (0..nvars).map(|j| if j < i { SparsePoly::zero(field, nvars) } else { row[i].derivative(j) }).collect())
                    .collect()
            })
            .collect();
        Ok(Analyzer { field, nvars, gens: gens.to_vec(), grads, hessians })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[SparsePoly] {
        &self.gens
    }

    /// Same analyzer over a larger field of the same characteristic.
    pub fn base_change(&self, target: Field) -> Result<Analyzer, SingularError> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.base_change(target))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| SingularError::WrongArity { expected: self.nvars, got: self.nvars })?;
        Analyzer::new(&gens)
    }

    fn check_point(&self, p: &[FieldElement]) -> Result<(), SingularError> {
        if p.len() != self.nvars {
            return Err(SingularError::WrongArity { expected: self.nvars, got: p.len() });
        }
        Ok(())
    }

    pub fn vanishes(&self, p: &[FieldElement]) -> bool {
        self.gens.iter().all(|g| g.eval_unchecked(p).is_zero())
    }

    /// Partial derivatives at `p`, one row per generator.
    pub fn jacobian(&self, p: &[FieldElement]) -> Matrix {
        Matrix::from_fn(self.field, self.gens.len(), self.nvars, |i, j| self.grads[i][j].eval_unchecked(p))
    }

    fn hessian(&self, g: usize, p: &[FieldElement]) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.nvars, self.nvars);
        for i in 0..self.nvars {
            for j in i..self.nvars {
                let v = self.hessians[g][i][j].eval_unchecked(p);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    }

    pub fn jacobian_rank_at(&self, p: &ProjectivePoint) -> Result<usize, SingularError> {
        self.check_point(p.coords())?;
        if !self.vanishes(p.coords()) {
            return Err(SingularError::PointNotOnVariety);
        }
        Ok(self.jacobian(p.coords()).rank())
    }

    /// Node certification in the affine chart of the first nonzero coordinate.
    ///
    /// With `c` the codimension, the chart Jacobian must have rank `c - 1`.
    /// For each choice of `c` generators realizing that rank, the combination
    /// of their quadratic parts killed by the Jacobian is restricted to the
    /// tangent space; full rank there certifies a node. With exactly `c`
    /// generators a failure means `NotNode`; with more it means
    /// `Unverifiable`, since the local ideal may need the other generators.
    pub fn node_test(&self, p: &ProjectivePoint, expected_dim: usize) -> Result<NodeTest, SingularError> {
        self.check_point(p.coords())?;
        let ambient = self.nvars - 1;
        if expected_dim >= ambient {
            return Err(SingularError::BadDimension { dim: expected_dim, ambient });
        }
        if !self.vanishes(p.coords()) {
            return Err(SingularError::PointNotOnVariety);
        }
        let codim = ambient - expected_dim;
        let pivot = p.pivot();
        let chart: Vec<usize> = (0..self.nvars).filter(|&j| j != pivot).collect();
        let full = self.jacobian(p.coords());
        let jac = Matrix::from_fn(self.field, self.gens.len(), chart.len(), |i, j| full[(i, chart[j])]);
        let rank = jac.rank();
        if rank >= codim {
            return Err(SingularError::NotSingular);
        }
        if rank + 1 < codim {
            return Ok(NodeTest { verdict: NodeVerdict::NotNode, jacobian_rank: rank, quadric_rank: None });
        }
        let tangent = jac.kernel();
        debug_assert_eq!(tangent.len(), expected_dim + 1);
        let hessians: Vec<Matrix> = (0..self.gens.len())
            .map(|g| {
                let h = self.hessian(g, p.coords());
                Matrix::from_fn(self.field, chart.len(), chart.len(), |i, j| h[(chart[i], chart[j])])
            })
            .collect();
        let restricted_rank = |subset: &[usize]| -> Option<usize> {
            let rows: Vec<Vec<FieldElement>> = subset.iter().map(|&g| jac.row(g).to_vec()).collect();
            let sub = Matrix::from_rows(self.field, &rows);
            if sub.rank() != rank {
                return None;
            }
            let lambda = sub.left_kernel();
            debug_assert_eq!(lambda.len(), 1);
            let mut q = Matrix::zeros(self.field, chart.len(), chart.len());
            for (&g, &l) in subset.iter().zip(&lambda[0]) {
                if !l.is_zero() {
                    let scaled = hessians[g].scale(l);
                    for i in 0..chart.len() {
                        for j in 0..chart.len() {
                            q[(i, j)] += scaled[(i, j)];
                        }
                    }
                }
            }
            let t = Matrix::from_rows(self.field, &tangent).transpose();
            let restricted = &(&t.transpose() * &q) * &t;
            Some(restricted.rank())
        };
        let ngens = self.gens.len();
        if ngens == codim {
            let all: Vec<usize> = (0..ngens).collect();
            let q = restricted_rank(&all).expect("full generator set realizes the rank");
            let verdict = if q == expected_dim + 1 { NodeVerdict::Node } else { NodeVerdict::NotNode };
            return Ok(NodeTest { verdict, jacobian_rank: rank, quadric_rank: Some(q) });
        }
        if ngens < codim {
            return Ok(NodeTest { verdict: NodeVerdict::Unverifiable, jacobian_rank: rank, quadric_rank: None });
        }
        let mut best = None;
        for subset in (0..ngens).combinations(codim) {
            if let Some(q) = restricted_rank(&subset) {
                if q == expected_dim + 1 {
                    return Ok(NodeTest { verdict: NodeVerdict::Node, jacobian_rank: rank, quadric_rank: Some(q) });
                }
                best = best.max(Some(q));
            }
        }
        Ok(NodeTest { verdict: NodeVerdict::Unverifiable, jacobian_rank: rank, quadric_rank: best })
    }

    /// Full report for a point already known to be singular.
    pub fn report(&self, p: &ProjectivePoint, expected_dim: usize, classify: bool) -> Result<SingularityReport, SingularError> {
        let codim = self.nvars - 1 - expected_dim;
        let t = self.node_test(p, expected_dim)?;
        let class = if classify { Some(classify_t14(p, self)?) } else { None };
        Ok(SingularityReport {
            point: p.clone(),
            jacobian_rank: t.jacobian_rank,
            expected_corank_ok: t.jacobian_rank + 1 == codim,
            is_node: t.verdict,
            quadric_rank: t.quadric_rank,
            class,
        })
    }
}

pub fn jacobian_rank_at(gens: &[SparsePoly], p: &ProjectivePoint) -> Result<usize, SingularError> {
    Analyzer::new(gens)?.jacobian_rank_at(p)
}

pub fn node_test(gens: &[SparsePoly], p: &ProjectivePoint, expected_dim: usize) -> Result<NodeVerdict, SingularError> {
    Ok(Analyzer::new(gens)?.node_test(p, expected_dim)?.verdict)
}

/// Class of a singular point of the octic: `C` at a coordinate vertex, `B` on
/// `z0 z1 z2 z3 = 0`, `A` otherwise.
pub fn classify_t14(p: &ProjectivePoint, analyzer: &Analyzer) -> Result<NodeClass, SingularError> {
    if analyzer.jacobian_rank_at(p)? != 0 {
        return Err(SingularError::NotSingular);
    }
    let nonzero = p.coords().iter().filter(|c| !c.is_zero()).count();
    Ok(if nonzero == 1 {
        NodeClass::C
    } else if nonzero < p.dim() {
        NodeClass::B
    } else {
        NodeClass::A
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::mpoly::Monomial;

    fn poly(field: Field, n: usize, terms: &[(i64, &[u8])]) -> SparsePoly {
        SparsePoly::from_terms(field, n, terms.iter().map(|(c, e)| (Monomial::from_exponents(e), field.from_i64(*c))).collect())
    }

    fn pt(field: Field, xs: &[i64]) -> ProjectivePoint {
        ProjectivePoint::new(xs.iter().map(|&x| field.from_i64(x)).collect()).unwrap()
    }

    #[test]
    fn conifold_is_a_node() {
        let f = make_field(11, 1).unwrap();
        // xw - yz homogenized with v: variables (x, y, z, w, v), point (0:0:0:0:1)
        let g = poly(f, 5, &[(1, &[1, 0, 0, 1, 0]), (-1, &[0, 1, 1, 0, 0])]);
        let p = pt(f, &[0, 0, 0, 0, 1]);
        assert_eq!(jacobian_rank_at(std::slice::from_ref(&g), &p).unwrap(), 0);
        assert_eq!(node_test(&[g], &p, 3).unwrap(), NodeVerdict::Node);
    }

    #[test]
    fn degenerate_quadric_is_not_a_node() {
        let f = make_field(11, 1).unwrap();
        // x^2 + y^2 + z^2 + w^3, homogenized by v
        let g = poly(
            f,
            5,
            &[(1, &[2, 0, 0, 0, 1]), (1, &[0, 2, 0, 0, 1]), (1, &[0, 0, 2, 0, 1]), (1, &[0, 0, 0, 3, 0])],
        );
        let p = pt(f, &[0, 0, 0, 0, 1]);
        assert_eq!(node_test(&[g], &p, 3).unwrap(), NodeVerdict::NotNode);
    }

    #[test]
    fn smooth_point_errors() {
        let f = make_field(11, 1).unwrap();
        // sum of squares in five variables; (1:1:3:0:0) has 1 + 1 + 9 = 11 = 0
        let g = poly(f, 5, &[(1, &[2, 0, 0, 0, 0]), (1, &[0, 2, 0, 0, 0]), (1, &[0, 0, 2, 0, 0]), (1, &[0, 0, 0, 2, 0]), (1, &[0, 0, 0, 0, 2])]);
        let p = pt(f, &[1, 1, 3, 0, 0]);
        assert_eq!(jacobian_rank_at(std::slice::from_ref(&g), &p).unwrap(), 1);
        assert_eq!(node_test(std::slice::from_ref(&g), &p, 3).unwrap_err(), SingularError::NotSingular);
        assert_eq!(jacobian_rank_at(&[g], &pt(f, &[1, 0, 0, 0, 0])).unwrap_err(), SingularError::PointNotOnVariety);
    }

    #[test]
    fn characteristic_two_rejected() {
        let f = make_field(2, 1).unwrap();
        let g = SparsePoly::var(f, 3, 0);
        assert_eq!(Analyzer::new(&[g]).unwrap_err(), SingularError::CharacteristicTwo);
    }
}
