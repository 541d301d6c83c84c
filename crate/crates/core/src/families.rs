//! Constructors for the six Heisenberg-symmetric families.
//!
//! Every builder works over the field it is given; parameters are projective
//! points (or a line for the octic family) with coordinates in that field.

use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::field::{Field, FieldElement, FieldError};
use crate::heisenberg::{
    iota, make_heisenberg, span_rank, vminus_point, GroupElement, GroupSpec, HeisenbergError, ProjectivePoint,
    ShiftConvention, Variant,
};
use crate::linalg::Matrix;
use crate::mpoly::{Monomial, PolyError, PolyMatrix, SparsePoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Heisenberg(#[from] HeisenbergError),
    #[error("the two points do not span a line")]
    RankDeficientLine,
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),
    #[error("operation does not apply to {0}")]
    WrongFamily(FamilyId),
}

/// Identifier of a constructed variety.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    T14Octic,
    T14Fiber,
    HmQuintic,
    T16Cubics,
    T17Pfaffian,
    T18Quadrics,
    T110Grassmann,
}

impl FamilyId {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::T14Octic => "T14_octic",
            FamilyId::T14Fiber => "T14_fiber",
            FamilyId::HmQuintic => "HM_quintic",
            FamilyId::T16Cubics => "T16_cubics",
            FamilyId::T17Pfaffian => "T17_pfaffian",
            FamilyId::T18Quadrics => "T18_quadrics",
            FamilyId::T110Grassmann => "T110_grassmann",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for FamilyId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// The six families as selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    T14,
    Hm,
    T16,
    T17,
    T18,
    T110,
}

impl Family {
    pub const ALL: [Family; 6] = [Family::T14, Family::Hm, Family::T16, Family::T17, Family::T18, Family::T110];

    pub fn name(self) -> &'static str {
        match self {
            Family::T14 => "t14",
            Family::Hm => "hm",
            Family::T16 => "t16",
            Family::T17 => "t17",
            Family::T18 => "t18",
            Family::T110 => "t110",
        }
    }

    pub fn id(self) -> FamilyId {
        match self {
            Family::T14 => FamilyId::T14Octic,
            Family::Hm => FamilyId::HmQuintic,
            Family::T16 => FamilyId::T16Cubics,
            Family::T17 => FamilyId::T17Pfaffian,
            Family::T18 => FamilyId::T18Quadrics,
            Family::T110 => FamilyId::T110Grassmann,
        }
    }

    /// Order of the root of unity the family's group needs.
    pub fn root_order(self) -> u64 {
        match self {
            Family::T14 => 4,
            Family::Hm => 5,
            Family::T16 => 6,
            Family::T17 => 7,
            Family::T18 => 8,
            Family::T110 => 10,
        }
    }

    /// Heisenberg index `d` of the translation group `Z_d + Z_d`.
    pub fn heisenberg_index(self) -> usize {
        self.root_order() as usize
    }

    pub fn default_primes(self) -> [u64; 2] {
        match self {
            Family::T14 => [13, 17],
            Family::Hm => [11, 31],
            Family::T16 => [13, 19],
            Family::T17 => [29, 43],
            Family::T18 => [17, 41],
            Family::T110 => [11, 31],
        }
    }

    pub fn ambient_nvars(self) -> usize {
        match self {
            Family::T14 => 4,
            Family::Hm => 5,
            Family::T16 => 6,
            Family::T17 => 7,
            Family::T18 => 8,
            Family::T110 => 10,
        }
    }

    /// Dimension of the variety cut out by the generators.
    pub fn variety_dim(self) -> usize {
        match self {
            Family::T14 => 2,
            _ => 3,
        }
    }

    pub fn generator_count(self) -> usize {
        match self {
            Family::T14 | Family::Hm => 1,
            Family::T16 => 2,
            Family::T17 => 7,
            Family::T18 => 4,
            Family::T110 => 10,
        }
    }

    pub fn generator_degree(self) -> u32 {
        match self {
            Family::T14 => 8,
            Family::Hm => 5,
            Family::T16 | Family::T17 => 3,
            Family::T18 | Family::T110 => 2,
        }
    }

    pub fn convention(self) -> ShiftConvention {
        match self {
            Family::Hm => ShiftConvention::BasisUp,
            _ => ShiftConvention::CoordinateDown,
        }
    }

    /// Number of free parameter coordinates drawn when sampling.
    pub fn parameter_len(self) -> usize {
        match self {
            Family::T14 => 8,
            Family::Hm => 5,
            Family::T16 => 4,
            Family::T17 | Family::T18 => 3,
            Family::T110 => 4,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family '{s}' (expected one of t14, hm, t16, t17, t18, t110)"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parameter {
    Point(ProjectivePoint),
    Line(ProjectivePoint, ProjectivePoint),
}

impl Serialize for Parameter {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Parameter::Point(p) => {
                let mut st = s.serialize_struct("Parameter", 2)?;
                st.serialize_field("kind", "point")?;
                st.serialize_field("points", &[p])?;
                st.end()
            }
            Parameter::Line(a, b) => {
                let mut st = s.serialize_struct("Parameter", 2)?;
                st.serialize_field("kind", "line")?;
                st.serialize_field("points", &[a, b])?;
                st.end()
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct NodeExpectation {
    pub total: usize,
    /// Points whose group orbit should be (part of) the node set.
    pub orbit_seed: Vec<ProjectivePoint>,
    /// False when the node location is not asserted, only explored.
    pub orbit_confirmed: bool,
    pub group: GroupSpec,
    /// `(class, count)` pairs for the octic.
    pub type_counts: Vec<(char, usize)>,
}

impl Serialize for NodeExpectation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("NodeExpectation", 5)?;
        st.serialize_field("total", &self.total)?;
        st.serialize_field("orbit_seed", &self.orbit_seed)?;
        st.serialize_field("orbit_status", if self.orbit_confirmed { "asserted" } else { "UNCONFIRMED" })?;
        st.serialize_field("group", &self.group.label)?;
        let counts: std::collections::BTreeMap<String, usize> =
            self.type_counts.iter().map(|(c, n)| (c.to_string(), *n)).collect();
        st.serialize_field("type_counts", &counts)?;
        st.end()
    }
}

#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub family: Family,
    pub id: FamilyId,
    pub ambient_nvars: usize,
    pub field: Field,
    pub parameter: Parameter,
    pub generators: Vec<SparsePoly>,
    pub expected: NodeExpectation,
}

impl FamilyInstance {
    pub fn group(&self) -> &GroupSpec {
        &self.expected.group
    }
}

impl Serialize for FamilyInstance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FamilyInstance", 7)?;
        st.serialize_field("family_id", &self.id)?;
        st.serialize_field("ambient_nvars", &self.ambient_nvars)?;
        st.serialize_field("field", self.field)?;
        st.serialize_field("parameter", &self.parameter)?;
        st.serialize_field("convention", &self.expected.group.convention)?;
        st.serialize_field("generators", &self.generators)?;
        st.serialize_field("expected_nodes", &self.expected)?;
        st.end()
    }
}

fn vars(field: Field, n: usize) -> Vec<SparsePoly> {
    (0..n).map(|i| SparsePoly::var(field, n, i)).collect()
}

fn mono(field: Field, nvars: usize, exps: &[u8]) -> SparsePoly {
    SparsePoly::monomial(field.one(), Monomial::from_exponents(exps), nvars)
}

fn check_shape(family: Family, generators: &[SparsePoly]) -> Result<(), FamilyError> {
    for (i, g) in generators.iter().enumerate() {
        if g.is_zero() {
            return Err(FamilyError::DegenerateParameter(format!("generator {i} vanishes identically")));
        }
        debug_assert!(g.is_homogeneous() && g.degree() == Some(family.generator_degree()));
    }
    if span_rank(generators) != generators.len() {
        return Err(FamilyError::DegenerateParameter("generators are linearly dependent".into()));
    }
    Ok(())
}

fn ensure_field(points: &[&ProjectivePoint], field: Field, n: usize) -> Result<(), FamilyError> {
    for p in points {
        if p.dim() != n {
            return Err(HeisenbergError::WrongArity { expected: n, got: p.dim() }.into());
        }
        if !p.field().same(field) {
            return Err(FieldError::FieldMismatch.into());
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- octic (1,4)

/// Rows of the change of coordinates `z = C x`.
pub fn t14_coordinate_change(field: Field) -> Matrix {
    let rows: [[i64; 4]; 4] = [[1, 1, 0, 0], [1, 0, -1, 0], [0, 1, 0, 1], [0, -1, 0, 1]];
    let rows: Vec<Vec<_>> = rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect();
    Matrix::from_rows(field, &rows)
}

/// `z0^2 z1^2 z2^2 z3^2`.
pub fn t14_vertex_square(field: Field) -> SparsePoly {
    mono(field, 4, &[2, 2, 2, 2])
}

/// The 4x4 matrix `N = diag(z0^2 z1^2 z2^2 z3^2, N0)` in the z-coordinates.
pub fn t14_matrix(field: Field) -> PolyMatrix {
    let m = |e: [u8; 4]| mono(field, 4, &e);
    let z01 = m([2, 2, 0, 0]);
    let z23 = m([0, 0, 2, 2]);
    let z02 = m([2, 0, 2, 0]);
    let z13 = m([0, 2, 0, 2]);
    let z03 = m([2, 0, 0, 2]);
    let z12 = m([0, 2, 2, 0]);
    let a = &m([4, 4, 0, 0]) + &m([0, 0, 4, 4]);
    let b = &(&z01 + &z23) * &(&z13 - &z02);
    let c = &(&z01 - &z23) * &(&z03 - &z12);
    let d = &m([4, 0, 4, 0]) + &m([0, 4, 0, 4]);
    let e = &(&z02 + &z13) * &(&z03 + &z12);
    let f = &m([4, 0, 0, 4]) + &m([0, 4, 4, 0]);
    let zero = SparsePoly::zero(field, 4);
    let p = t14_vertex_square(field);
    let entries = vec![
        p, zero.clone(), zero.clone(), zero.clone(),
        zero.clone(), a, b.clone(), c.clone(),
        zero.clone(), b, d, e.clone(),
        zero, c, e, f,
    ];
    PolyMatrix::new(4, 4, entries).expect("consistent entries")
}

/// The octic `f_lambda = lambda N lambda^T`.
pub fn t14_fiber(lambda: &[FieldElement]) -> Result<SparsePoly, FamilyError> {
    if lambda.len() != 4 {
        return Err(HeisenbergError::WrongArity { expected: 4, got: lambda.len() }.into());
    }
    let field = lambda[0].field();
    let n = t14_matrix(field);
    let mut acc = SparsePoly::zero(field, 4);
    for i in 0..4 {
        for j in 0..4 {
            let c = lambda[i] * lambda[j];
            if !c.is_zero() {
                acc = &acc + &n.get(i, j).scale(c);
            }
        }
    }
    Ok(acc)
}

/// `g_l = det(M N M^T)` for the 2x4 matrix `M` whose rows span the line.
pub fn t14_gl(a: &ProjectivePoint, b: &ProjectivePoint) -> Result<SparsePoly, FamilyError> {
    let field = a.field();
    ensure_field(&[a, b], field, 4)?;
    let m = Matrix::from_rows(field, &[a.coords().to_vec(), b.coords().to_vec()]);
    if m.rank() < 2 {
        return Err(FamilyError::RankDeficientLine);
    }
    let mp = PolyMatrix::from_scalars(&m, 4);
    let mnmt = mp.mul(&t14_matrix(field))?.mul(&mp.transpose())?;
    Ok(mnmt.determinant()?)
}

/// The octic `B_l = g_l / (z0 z1 z2 z3)^2`.
pub fn build_t14(a: &ProjectivePoint, b: &ProjectivePoint) -> Result<FamilyInstance, FamilyError> {
    let field = a.field();
    let gl = t14_gl(a, b)?;
    if gl.is_zero() {
        return Err(FamilyError::DegenerateParameter("g_l vanishes identically".into()));
    }
    let bl = gl.exact_divide(&t14_vertex_square(field))?;
    let generators = vec![bl];
    check_shape(Family::T14, &generators)?;
    Ok(FamilyInstance {
        family: Family::T14,
        id: FamilyId::T14Octic,
        ambient_nvars: 4,
        field,
        parameter: Parameter::Line(a.clone(), b.clone()),
        generators,
        expected: NodeExpectation {
            total: 148,
            orbit_seed: Vec::new(),
            orbit_confirmed: false,
            group: t14_group(field)?,
            type_counts: vec![('A', 128), ('B', 16), ('C', 4)],
        },
    })
}

/// A single fiber `f_lambda = 0` as its own instance.
pub fn build_t14_fiber(lambda: &ProjectivePoint) -> Result<FamilyInstance, FamilyError> {
    let field = lambda.field();
    let f = t14_fiber(lambda.coords())?;
    if f.is_zero() {
        return Err(FamilyError::DegenerateParameter("f_lambda vanishes identically".into()));
    }
    Ok(FamilyInstance {
        family: Family::T14,
        id: FamilyId::T14Fiber,
        ambient_nvars: 4,
        field,
        parameter: Parameter::Point(lambda.clone()),
        generators: vec![f],
        expected: NodeExpectation {
            total: 0,
            orbit_seed: Vec::new(),
            orbit_confirmed: false,
            group: t14_group(field)?,
            type_counts: Vec::new(),
        },
    })
}

/// `H_4` acting on the z-coordinates: `C g C^-1` for the x-coordinate generators.
pub fn t14_group(field: Field) -> Result<GroupSpec, FamilyError> {
    let mut h = make_heisenberg(4, field, ShiftConvention::CoordinateDown, Variant::Full)?;
    let c = t14_coordinate_change(field);
    let c_inv = c.inverse().ok_or(PolyError::SingularMatrix)?;
    for g in h.generators.iter_mut() {
        let conj = &(&c * g.matrix()) * &c_inv;
        *g = GroupElement::new(g.label().to_string(), conj)?;
    }
    h.label = "H4 (z-coordinates)".into();
    Ok(h)
}

// ------------------------------------------------------- Horrocks-Mumford (1,5)

/// `M_y(x) = [x_{i+j} y_{i-j}]`.
pub fn hm_matrix(y: &ProjectivePoint) -> Result<PolyMatrix, FamilyError> {
    let field = y.field();
    ensure_field(&[y], field, 5)?;
    let x = vars(field, 5);
    let yc = y.coords();
    Ok(PolyMatrix::from_fn(5, 5, |i, j| x[(i + j) % 5].scale(yc[(i + 5 - j) % 5]))?)
}

pub fn hm_group(field: Field) -> Result<GroupSpec, FamilyError> {
    Ok(make_heisenberg(5, field, ShiftConvention::BasisUp, Variant::WithInvolution)?)
}

pub fn build_hm(y: &ProjectivePoint) -> Result<FamilyInstance, FamilyError> {
    let field = y.field();
    let det = hm_matrix(y)?.determinant()?;
    let generators = vec![det];
    check_shape(Family::Hm, &generators)?;
    Ok(FamilyInstance {
        family: Family::Hm,
        id: FamilyId::HmQuintic,
        ambient_nvars: 5,
        field,
        parameter: Parameter::Point(y.clone()),
        generators,
        expected: NodeExpectation {
            total: 100,
            orbit_seed: vec![y.clone()],
            orbit_confirmed: true,
            group: hm_group(field)?,
            type_counts: Vec::new(),
        },
    })
}

/// The 25 lines `sigma^i tau^j {x0 = x1 + x4 = x2 + x3 = 0}`, each as a
/// row-reduced pair of spanning vectors, deduplicated and sorted.
pub fn hm_lines(field: Field) -> Result<Vec<[Vec<FieldElement>; 2]>, FamilyError> {
    let h = make_heisenberg(5, field, ShiftConvention::BasisUp, Variant::Full)?;
    let s = &h.generators[0];
    let t = &h.generators[1];
    let u: Vec<_> = [0, 1, 0, 0, -1].iter().map(|&v| field.from_i64(v)).collect();
    let v: Vec<_> = [0, 0, 1, -1, 0].iter().map(|&v| field.from_i64(v)).collect();
    let mut lines = std::collections::BTreeSet::new();
    for i in 0..5 {
        for j in 0..5 {
            let g = s.pow(i).compose(&t.pow(j));
            let m = Matrix::from_rows(field, &[g.apply(&u), g.apply(&v)]);
            let (r, _) = m.rref();
            lines.insert([r.row(0).to_vec(), r.row(1).to_vec()]);
        }
    }
    Ok(lines.into_iter().collect())
}

/// Restriction of `f` to the line spanned by `u`, `v`, as a binary form in `(s, t)`.
pub fn restrict_to_line(f: &SparsePoly, u: &[FieldElement], v: &[FieldElement]) -> Result<SparsePoly, FamilyError> {
    let field = f.field();
    let images: Vec<SparsePoly> = u
        .iter()
        .zip(v)
        .map(|(&a, &b)| SparsePoly::linear_form(field, &[a, b]))
        .collect();
    Ok(f.substitute(&images)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct LineCheck {
    pub line: [Vec<FieldElement>; 2],
    pub passed: bool,
}

/// Checks that each invariant in `basis` vanishes on each of the 25 lines.
pub fn verify_base_locus_lines(instance: &FamilyInstance, basis: &[SparsePoly]) -> Result<Vec<LineCheck>, FamilyError> {
    if instance.family != Family::Hm {
        return Err(FamilyError::WrongFamily(instance.id));
    }
    hm_lines(instance.field)?
        .into_iter()
        .map(|line| {
            let passed = basis
                .iter()
                .map(|f| restrict_to_line(f, &line[0], &line[1]).map(|r| r.is_zero()))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .all(|b| b);
            Ok(LineCheck { line, passed })
        })
        .collect()
}

// ------------------------------------------------------------- cubics (1,6)

/// The four cubics `f0..f3`.
pub fn t16_cubics(field: Field) -> [SparsePoly; 4] {
    let m = |e: [u8; 6]| mono(field, 6, &e);
    let f0 = &(&m([3, 0, 0, 0, 0, 0]) + &m([0, 0, 3, 0, 0, 0])) + &m([0, 0, 0, 0, 3, 0]);
    let f1 = &(&m([0, 2, 0, 0, 1, 0]) + &m([1, 0, 0, 2, 0, 0])) + &m([0, 0, 1, 0, 0, 2]);
    let f2 = &(&m([0, 1, 1, 1, 0, 0]) + &m([0, 0, 0, 1, 1, 1])) + &m([1, 1, 0, 0, 0, 1]);
    let f3 = m([1, 0, 1, 0, 1, 0]);
    [f0, f1, f2, f3]
}

pub fn build_t16(t: &ProjectivePoint) -> Result<FamilyInstance, FamilyError> {
    let field = t.field();
    ensure_field(&[t], field, 4)?;
    let group = make_heisenberg(6, field, ShiftConvention::CoordinateDown, Variant::Full)?;
    let sigma = group.generators[0].clone();
    let cubics = t16_cubics(field);
    let mut a = SparsePoly::zero(field, 6);
    for (ti, f) in t.coords().iter().zip(&cubics) {
        a = &a + &f.scale(*ti);
    }
    let b = sigma.act_on_poly(&a)?;
    let generators = vec![a, b];
    check_shape(Family::T16, &generators)?;
    Ok(FamilyInstance {
        family: Family::T16,
        id: FamilyId::T16Cubics,
        ambient_nvars: 6,
        field,
        parameter: Parameter::Point(t.clone()),
        generators,
        expected: NodeExpectation { total: 72, orbit_seed: Vec::new(), orbit_confirmed: false, group, type_counts: Vec::new() },
    })
}

// ------------------------------------------------------- Pfaffian cubics (1,7)

/// `M'_7(x, y)` with half-indices `(i +- j)/2` read as `4(i +- j) mod 7`.
pub fn t17_matrix(y: &ProjectivePoint) -> Result<PolyMatrix, FamilyError> {
    let field = y.field();
    ensure_field(&[y], field, 7)?;
    let x = vars(field, 7);
    let yc = y.coords();
    Ok(PolyMatrix::from_fn(7, 7, |i, j| x[(4 * (i + j)) % 7].scale(yc[(4 * (i + 7 - j)) % 7]))?)
}

pub fn build_t17(y_free: &[FieldElement]) -> Result<FamilyInstance, FamilyError> {
    let y = vminus_point(7, y_free)?;
    let field = y.field();
    let m = t17_matrix(&y)?;
    m.check_alternating()?;
    let generators = m.principal_pfaffians()?;
    check_shape(Family::T17, &generators)?;
    let group = make_heisenberg(7, field, ShiftConvention::CoordinateDown, Variant::Full)?;
    Ok(FamilyInstance {
        family: Family::T17,
        id: FamilyId::T17Pfaffian,
        ambient_nvars: 7,
        field,
        parameter: Parameter::Point(y.clone()),
        generators,
        expected: NodeExpectation { total: 49, orbit_seed: vec![y], orbit_confirmed: true, group, type_counts: Vec::new() },
    })
}

// ----------------------------------------------------------- quadrics (1,8)

/// `M_4(x, y)` with the coordinate functions replaced by `images`.
pub fn t18_matrix_with(y: &ProjectivePoint, images: &[SparsePoly]) -> Result<PolyMatrix, FamilyError> {
    ensure_field(&[y], y.field(), 8)?;
    let yc = y.coords();
    Ok(PolyMatrix::from_fn(4, 4, |i, j| {
        &images[(i + j) % 8].scale(yc[(i + 8 - j) % 8]) + &images[(i + j + 4) % 8].scale(yc[(i + 12 - j) % 8])
    })?)
}

pub fn t18_matrix(y: &ProjectivePoint) -> Result<PolyMatrix, FamilyError> {
    t18_matrix_with(y, &vars(y.field(), 8))
}

/// Group elements whose translates of `Pf M_4(x, y)` form the generators.
pub fn t18_translates(group: &GroupSpec) -> Vec<GroupElement> {
    let s = group.generators[0].clone();
    let t = group.generators[1].clone();
    let st = s.compose(&t);
    vec![GroupElement::identity(group.field(), group.n), s, t, st]
}

pub fn build_t18(y_free: &[FieldElement]) -> Result<FamilyInstance, FamilyError> {
    let y = vminus_point(8, y_free)?;
    let field = y.field();
    let group = make_heisenberg(8, field, ShiftConvention::CoordinateDown, Variant::Full)?;
    let m = t18_matrix(&y)?;
    let base = m.pfaffian()?;
    let generators = t18_translates(&group)
        .iter()
        .map(|g| g.act_on_poly(&base))
        .collect::<Result<Vec<_>, _>>()?;
    check_shape(Family::T18, &generators)?;
    Ok(FamilyInstance {
        family: Family::T18,
        id: FamilyId::T18Quadrics,
        ambient_nvars: 8,
        field,
        parameter: Parameter::Point(y.clone()),
        generators,
        expected: NodeExpectation { total: 64, orbit_seed: vec![y], orbit_confirmed: true, group, type_counts: Vec::new() },
    })
}

// ------------------------------------------------------ Grassmannian (1,10)

pub fn t110_matrix(y: &ProjectivePoint) -> Result<PolyMatrix, FamilyError> {
    let field = y.field();
    ensure_field(&[y], field, 10)?;
    let x = vars(field, 10);
    let yc = y.coords();
    Ok(PolyMatrix::from_fn(5, 5, |i, j| {
        &x[(i + j) % 10].scale(yc[(i + 10 - j) % 10]) + &x[(i + j + 5) % 10].scale(yc[(i + 15 - j) % 10])
    })?)
}

/// `tau^5 = diag((-1)^i)`, exchanging the two Pfaffian blocks.
pub fn t110_block_swap(group: &GroupSpec) -> GroupElement {
    group.generators[1].pow(5).with_label("tau^5")
}

pub fn build_t110(y_free: &[FieldElement]) -> Result<FamilyInstance, FamilyError> {
    let y = vminus_point(10, y_free)?;
    let field = y.field();
    let group = make_heisenberg(10, field, ShiftConvention::CoordinateDown, Variant::Full)?;
    let m = t110_matrix(&y)?;
    m.check_alternating()?;
    let first = m.principal_pfaffians()?;
    let swap = t110_block_swap(&group);
    let mut generators = first.clone();
    for g in &first {
        generators.push(swap.act_on_poly(g)?);
    }
    check_shape(Family::T110, &generators)?;
    Ok(FamilyInstance {
        family: Family::T110,
        id: FamilyId::T110Grassmann,
        ambient_nvars: 10,
        field,
        parameter: Parameter::Point(y.clone()),
        generators,
        expected: NodeExpectation { total: 100, orbit_seed: vec![y], orbit_confirmed: false, group, type_counts: Vec::new() },
    })
}

/// Symmetries the generator span is expected to be stable under.
pub fn expected_symmetries(instance: &FamilyInstance) -> Vec<GroupElement> {
    let g = instance.group();
    match instance.family {
        Family::T17 | Family::T18 => {
            let mut v = g.generators.clone();
            v.push(iota(instance.field, g.n));
            v
        }
        Family::T110 => {
            let mut v = g.generators.clone();
            v.push(t110_block_swap(g));
            v
        }
        _ => g.generators.clone(),
    }
}
