//! Finite Heisenberg groups acting on projective space and on polynomials.
//!
//! A [`GroupElement`] stores the matrix acting on points, `P -> A P`. Polynomials
//! are acted on by the induced left action `g.f = f o g^-1`, so for the
//! coordinate-down convention the generators read `sigma.x_i = x_{i-1}` and
//! `tau.x_i = zeta^{-i} x_i` on coordinate functions.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::field::{Field, FieldElement, FieldError};
use crate::linalg::Matrix;
use crate::mpoly::{monomials_of_degree, Monomial, PolyError, SparsePoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeisenbergError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("group element matrix is singular")]
    SingularMatrix,
    #[error("expected {expected} coordinates, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("the zero vector is not a projective point")]
    ZeroVector,
}

/// Which way the cyclic shift runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ShiftConvention {
    /// Point action `(sigma P)_i = P_{i+1}`, so `sigma.x_i = x_{i-1}` on coordinates.
    CoordinateDown,
    /// Basis action `sigma e_i = e_{i+1}`, i.e. `(sigma P)_i = P_{i-1}`.
    BasisUp,
}

/// Invertible linear map of `k^n`, stored with its inverse.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupElement {
    label: String,
    matrix: Matrix,
    inverse: Matrix,
}

impl GroupElement {
    pub fn new(label: impl Into<String>, matrix: Matrix) -> Result<Self, HeisenbergError> {
        let inverse = matrix.inverse().ok_or(HeisenbergError::SingularMatrix)?;
        Ok(GroupElement { label: label.into(), matrix, inverse })
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let m = Matrix::identity(field, n);
        GroupElement { label: "id".into(), matrix: m.clone(), inverse: m }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &Matrix {
        &self.inverse
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `self o other`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            label: format!("{}*{}", self.label, other.label),
            matrix: &self.matrix * &other.matrix,
            inverse: &other.inverse * &self.inverse,
        }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement { label: format!("{}^-1", self.label), matrix: self.inverse.clone(), inverse: self.matrix.clone() }
    }

    pub fn pow(&self, e: u64) -> GroupElement {
        GroupElement { label: format!("{}^{e}", self.label), matrix: self.matrix.pow(e), inverse: self.inverse.pow(e) }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn apply(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        self.matrix.mul_vec(v)
    }

    pub fn apply_point(&self, p: &ProjectivePoint) -> ProjectivePoint {
        ProjectivePoint::new(self.apply(p.coords())).expect("invertible map keeps points nonzero")
    }

    /// `f o g^-1`.
    pub fn act_on_poly(&self, f: &SparsePoly) -> Result<SparsePoly, PolyError> {
        if f.nvars() != self.dim() {
            return Err(PolyError::ArityMismatch(f.nvars(), self.dim()));
        }
        f.substitute_linear_unchecked(&self.inverse)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?}", self.label, self.matrix)
    }
}

/// The cyclic shift on `n` coordinates.
pub fn sigma(field: Field, n: usize, convention: ShiftConvention) -> GroupElement {
    let m = Matrix::from_fn(field, n, n, |i, j| {
        let src = match convention {
            ShiftConvention::CoordinateDown => (i + 1) % n,
            ShiftConvention::BasisUp => (i + n - 1) % n,
        };
        if j == src {
            field.one()
        } else {
            field.zero()
        }
    });
    GroupElement::new("sigma", m).expect("permutation matrix")
}

/// `diag(zeta^i)` on points.
pub fn tau(field: Field, n: usize, zeta: FieldElement) -> GroupElement {
    let diag: Vec<_> = (0..n).map(|i| zeta.pow(i as u64)).collect();
    GroupElement::new("tau", Matrix::diagonal(field, &diag)).expect("diagonal of units")
}

/// Index negation `(iota P)_i = P_{-i}`.
pub fn iota(field: Field, n: usize) -> GroupElement {
    let m = Matrix::from_fn(field, n, n, |i, j| if j == (n - i) % n { field.one() } else { field.zero() });
    GroupElement::new("iota", m).expect("permutation matrix")
}

/// Which generators to include.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// `<sigma, tau>`.
    Full,
    /// `<sigma, tau, iota>`.
    WithInvolution,
    /// `<sigma^a, tau^a>`.
    Subgroup(u64),
}

#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub n: usize,
    pub label: String,
    pub convention: ShiftConvention,
    pub zeta: FieldElement,
    pub generators: Vec<GroupElement>,
}

impl GroupSpec {
    pub fn field(&self) -> Field {
        self.zeta.field()
    }

    pub fn generator(&self, label: &str) -> Option<&GroupElement> {
        self.generators.iter().find(|g| g.label == label)
    }
}

/// The Heisenberg group `H_n` (or a variant) with `zeta` the canonical primitive n-th root.
pub fn make_heisenberg(n: usize, field: Field, convention: ShiftConvention, variant: Variant) -> Result<GroupSpec, HeisenbergError> {
    let zeta = field.primitive_root_of_unity(n as u64)?;
    let s = sigma(field, n, convention);
    let t = tau(field, n, zeta);
    let (label, generators) = match variant {
        Variant::Full => (format!("H{n}"), vec![s, t]),
        Variant::WithInvolution => (format!("H{n}+iota"), vec![s, t, iota(field, n)]),
        Variant::Subgroup(a) => (
            format!("<sigma^{a},tau^{a}> in H{n}"),
            vec![s.pow(a).with_label(format!("sigma^{a}")), t.pow(a).with_label(format!("tau^{a}"))],
        ),
    };
    Ok(GroupSpec { n, label, convention, zeta, generators })
}

/// Projective point normalized so its first nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    coords: Vec<FieldElement>,
}

impl ProjectivePoint {
    pub fn new(mut coords: Vec<FieldElement>) -> Result<Self, HeisenbergError> {
        let lead = coords.iter().copied().find(|c| !c.is_zero()).ok_or(HeisenbergError::ZeroVector)?;
        if !lead.is_one() {
            let inv = lead.inv().expect("nonzero");
            for c in coords.iter_mut() {
                *c *= inv;
            }
        }
        Ok(ProjectivePoint { coords })
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn field(&self) -> Field {
        self.coords[0].field()
    }

    /// Index of the first nonzero coordinate (which equals 1).
    pub fn pivot(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).expect("normalized point is nonzero")
    }

    /// Largest minimal field degree among the coordinates.
    pub fn minimal_degree(&self) -> usize {
        self.coords.iter().map(|c| c.minimal_degree()).max().unwrap_or(1)
    }

    pub fn embed(&self, target: Field) -> Result<ProjectivePoint, FieldError> {
        let coords = self.coords.iter().map(|c| c.embed(target)).collect::<Result<Vec<_>, _>>()?;
        Ok(ProjectivePoint { coords })
    }
}

impl PartialOrd for ProjectivePoint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic in the canonical element order.
impl Ord for ProjectivePoint {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

/// Closure of `{p}` under the generators, sorted.
pub fn orbit(group: &GroupSpec, p: &ProjectivePoint) -> Vec<ProjectivePoint> {
    orbit_under(&group.generators, p)
}

pub fn orbit_under(generators: &[GroupElement], p: &ProjectivePoint) -> Vec<ProjectivePoint> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(p.clone());
    queue.push_back(p.clone());
    while let Some(q) = queue.pop_front() {
        for g in generators {
            let r = g.apply_point(&q);
            if seen.insert(r.clone()) {
                queue.push_back(r);
            }
        }
    }
    seen.into_iter().collect()
}

/// Coefficient matrix with one row per polynomial over the union of their supports.
pub fn coefficient_matrix(polys: &[SparsePoly]) -> (Vec<Monomial>, Option<Matrix>) {
    let support: BTreeSet<Monomial> = polys.iter().flat_map(|p| p.terms().iter().map(|(m, _)| *m)).collect();
    let monomials: Vec<Monomial> = support.into_iter().rev().collect();
    let Some(first) = polys.first() else { return (monomials, None) };
    let field = first.field();
    let rows: Vec<Vec<FieldElement>> = polys.iter().map(|p| monomials.iter().map(|m| p.coeff(m)).collect()).collect();
    let m = if monomials.is_empty() { None } else { Some(Matrix::from_rows(field, &rows)) };
    (monomials, m)
}

/// Dimension of the linear span of `polys`.
pub fn span_rank(polys: &[SparsePoly]) -> usize {
    coefficient_matrix(polys).1.map_or(0, |m| m.rank())
}

/// Row-reduced basis of the span of `polys`.
pub fn span_basis(polys: &[SparsePoly]) -> Vec<SparsePoly> {
    let (monomials, Some(m)) = coefficient_matrix(polys) else { return Vec::new() };
    let field = m.field();
    let nvars = polys[0].nvars();
    let (r, pivots) = m.rref();
    (0..pivots.len())
        .map(|i| {
            let terms = monomials.iter().zip(r.row(i)).map(|(mm, c)| (*mm, *c)).collect();
            SparsePoly::from_terms(field, nvars, terms)
        })
        .collect()
}

/// Basis (row-reduced, leading monomial first) of the polynomials of the
/// given degree fixed by every generator.
pub fn invariant_subspace(group: &GroupSpec, degree: u32) -> Result<Vec<SparsePoly>, HeisenbergError> {
    invariant_subspace_under(&group.generators, group.field(), group.n, degree)
}

pub fn invariant_subspace_under(
    generators: &[GroupElement],
    field: Field,
    nvars: usize,
    degree: u32,
) -> Result<Vec<SparsePoly>, HeisenbergError> {
    let basis = monomials_of_degree(nvars, degree);
    let index = |m: &Monomial| basis.binary_search_by(|b| m.cmp(b)).expect("action preserves degree");
    let k = basis.len();
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    for g in generators {
        // columns: image of each basis monomial minus itself
        let mut block = vec![vec![field.zero(); k]; k];
        for (j, m) in basis.iter().enumerate() {
            let image = g.act_on_poly(&SparsePoly::monomial(field.one(), *m, nvars))?;
            for (im, c) in image.terms() {
                block[index(im)][j] += *c;
            }
            block[j][j] -= field.one();
        }
        rows.extend(block);
    }
    let fixed = if rows.is_empty() {
        (0..k)
            .map(|j| (0..k).map(|i| if i == j { field.one() } else { field.zero() }).collect())
            .collect()
    } else {
        Matrix::from_rows(field, &rows).kernel()
    };
    if fixed.is_empty() {
        return Ok(Vec::new());
    }
    let (r, pivots) = Matrix::from_rows(field, &fixed).rref();
    Ok((0..pivots.len())
        .map(|i| {
            let terms = basis.iter().zip(r.row(i)).map(|(m, c)| (*m, *c)).collect();
            SparsePoly::from_terms(field, nvars, terms)
        })
        .collect())
}

/// Outcome of [`span_stable`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stability {
    /// `g.gens[i] = sum_j t[i][j] gens[j]`.
    Stable(Matrix),
    /// The image of `gens[index]` leaves the span.
    NotStable { index: usize },
}

impl Stability {
    pub fn is_stable(&self) -> bool {
        matches!(self, Stability::Stable(_))
    }
}

/// Whether `g` maps the span of `gens` into itself, with the transformation matrix.
pub fn span_stable(gens: &[SparsePoly], g: &GroupElement) -> Result<Stability, HeisenbergError> {
    let images = gens.iter().map(|f| g.act_on_poly(f)).collect::<Result<Vec<_>, _>>()?;
    let Some(first) = gens.first() else {
        return Ok(Stability::Stable(Matrix::zeros(g.matrix().field(), 0, 0)));
    };
    let field = first.field();
    let mut all = gens.to_vec();
    all.extend(images.iter().cloned());
    let (monomials, _) = coefficient_matrix(&all);
    let columns = Matrix::from_fn(field, monomials.len(), gens.len(), |i, j| gens[j].coeff(&monomials[i]));
    let mut t = Matrix::zeros(field, gens.len(), gens.len());
    for (i, image) in images.iter().enumerate() {
        let rhs: Vec<_> = monomials.iter().map(|m| image.coeff(m)).collect();
        match columns.solve(&rhs) {
            Some(x) => {
                for (j, v) in x.into_iter().enumerate() {
                    t[(i, j)] = v;
                }
            }
            None => return Ok(Stability::NotStable { index: i }),
        }
    }
    Ok(Stability::Stable(t))
}

/// Point of the negative eigenspace of the involution, `y_{-i} = -y_i`, from its
/// free coordinates `y_1, ..., y_{floor((n-1)/2)}`.
pub fn vminus_point(n: usize, free: &[FieldElement]) -> Result<ProjectivePoint, HeisenbergError> {
    let expected = (n - 1) / 2;
    if free.len() != expected {
        return Err(HeisenbergError::WrongArity { expected, got: free.len() });
    }
    let field = free.first().map(FieldElement::field).ok_or(HeisenbergError::ZeroVector)?;
    let mut coords = vec![field.zero(); n];
    for (i, &v) in free.iter().enumerate() {
        coords[i + 1] = v;
        coords[n - 1 - i] = -v;
    }
    ProjectivePoint::new(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn pt(field: Field, xs: &[i64]) -> ProjectivePoint {
        ProjectivePoint::new(xs.iter().map(|&x| field.from_i64(x)).collect()).unwrap()
    }

    #[test]
    fn generator_relations() {
        let f = make_field(11, 1).unwrap();
        let h = make_heisenberg(5, f, ShiftConvention::BasisUp, Variant::WithInvolution).unwrap();
        let (s, t, i) = (&h.generators[0], &h.generators[1], &h.generators[2]);
        assert!(s.pow(5).matrix().is_identity());
        assert!(!s.pow(1).matrix().is_identity());
        assert!(i.pow(2).matrix().is_identity());
        let comm = s.compose(t).compose(&s.inverse()).compose(&t.inverse());
        let c = comm.matrix().as_scalar().unwrap();
        assert_eq!(c.multiplicative_order(), Some(5));
        assert!(c == h.zeta || c == h.zeta.inv().unwrap());
    }

    #[test]
    fn coordinate_conventions() {
        let f = make_field(29, 1).unwrap();
        let h = make_heisenberg(7, f, ShiftConvention::CoordinateDown, Variant::Full).unwrap();
        let x: Vec<_> = (0..7).map(|i| SparsePoly::var(f, 7, i)).collect();
        let s = &h.generators[0];
        let t = &h.generators[1];
        assert_eq!(s.act_on_poly(&x[3]).unwrap(), x[2]);
        assert_eq!(s.act_on_poly(&x[0]).unwrap(), x[6]);
        assert_eq!(t.act_on_poly(&x[2]).unwrap(), x[2].scale(h.zeta.pow(2).inv().unwrap()));
        let basis_up = sigma(f, 7, ShiftConvention::BasisUp);
        let e0 = pt(f, &[1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(basis_up.apply_point(&e0), pt(f, &[0, 1, 0, 0, 0, 0, 0]));
    }

    #[test]
    fn action_is_a_left_action() {
        let f = make_field(13, 1).unwrap();
        let h = make_heisenberg(6, f, ShiftConvention::CoordinateDown, Variant::WithInvolution).unwrap();
        let x: Vec<_> = (0..6).map(|i| SparsePoly::var(f, 6, i)).collect();
        let poly = &(&x[0] * &x[1]) + &(&x[2] * &x[5]).scale(f.constant(3));
        for g in &h.generators {
            for k in &h.generators {
                let lhs = g.compose(k).act_on_poly(&poly).unwrap();
                let rhs = g.act_on_poly(&k.act_on_poly(&poly).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn invariant_dimensions() {
        let f = make_field(11, 1).unwrap();
        let h5 = make_heisenberg(5, f, ShiftConvention::BasisUp, Variant::Full).unwrap();
        let inv = invariant_subspace(&h5, 5).unwrap();
        assert_eq!(inv.len(), 6);
        for b in &inv {
            for g in &h5.generators {
                assert_eq!(&g.act_on_poly(b).unwrap(), b);
            }
        }
        assert_eq!(invariant_subspace(&h5, 0).unwrap().len(), 1);

        let g13 = make_field(13, 1).unwrap();
        let hp = make_heisenberg(6, g13, ShiftConvention::CoordinateDown, Variant::Subgroup(2)).unwrap();
        assert_eq!(invariant_subspace(&hp, 3).unwrap().len(), 8);
    }

    #[test]
    fn sigma_squared_fixes_x0x2x4() {
        let f = make_field(13, 1).unwrap();
        let s2 = sigma(f, 6, ShiftConvention::CoordinateDown).pow(2);
        let x: Vec<_> = (0..6).map(|i| SparsePoly::var(f, 6, i)).collect();
        let f3 = &(&x[0] * &x[2]) * &x[4];
        assert_eq!(s2.act_on_poly(&f3).unwrap(), f3);
    }

    #[test]
    fn span_stability_reports() {
        let f = make_field(11, 1).unwrap();
        let x: Vec<_> = (0..3).map(|i| SparsePoly::var(f, 3, i)).collect();
        let id = GroupElement::identity(f, 3);
        match span_stable(&x, &id).unwrap() {
            Stability::Stable(t) => assert!(t.is_identity()),
            other => panic!("{other:?}"),
        }
        let s = sigma(f, 3, ShiftConvention::CoordinateDown);
        assert!(span_stable(&x, &s).unwrap().is_stable());
        assert_eq!(span_stable(&x[..1], &s).unwrap(), Stability::NotStable { index: 0 });
    }

    #[test]
    fn orbits() {
        let f = make_field(11, 1).unwrap();
        let h = make_heisenberg(5, f, ShiftConvention::BasisUp, Variant::Full).unwrap();
        let t_only = [h.generators[1].clone()];
        assert_eq!(orbit_under(&t_only, &pt(f, &[1, 0, 0, 0, 0])).len(), 1);
        let o = orbit(&h, &pt(f, &[1, 2, 3, 4, 5]));
        assert_eq!(o.len(), 25);
        assert!(o.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn vminus_points() {
        let f = make_field(29, 1).unwrap();
        let free: Vec<_> = [1, 2, 3].iter().map(|&v| f.constant(v)).collect();
        let y = vminus_point(7, &free).unwrap();
        assert_eq!(y, pt(f, &[0, 1, 2, 3, -3, -2, -1]));
        let iy = iota(f, 7).apply(y.coords());
        assert!(iy.iter().zip(y.coords()).all(|(a, b)| *a == -*b));
        let free4: Vec<_> = [1, 2, 3, 4].iter().map(|&v| f.constant(v)).collect();
        let y10 = vminus_point(10, &free4).unwrap();
        assert!(y10.coords()[0].is_zero() && y10.coords()[5].is_zero());
        assert_eq!(vminus_point(8, &free4).unwrap_err(), HeisenbergError::WrongArity { expected: 3, got: 4 });
    }
}
