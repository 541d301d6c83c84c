//! Sparse multivariate polynomials over a [`Field`] and polynomial matrices.
//!
//! Terms are kept in canonical form: sorted by descending graded-lexicographic
//! order (`x0 > x1 > ...`), no duplicate monomials, no zero coefficients. Two
//! polynomials are equal iff their term lists are equal.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::field::{Field, FieldElement};
use crate::linalg::Matrix;

/// Number of exponent slots in a [`Monomial`].
pub const MAX_VARS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("substitution matrix is singular")]
    SingularMatrix,
    #[error("polynomial is not divisible")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is not alternating (entry {0},{1})")]
    NotAlternating(usize, usize),
    #[error("alternating matrix of odd size {0} has zero Pfaffian by convention; expected even size")]
    OddSize(usize),
    #[error("principal Pfaffians need an odd-size matrix, got {0}")]
    EvenSize(usize),
    #[error("too many variables: {0} (at most 12)")]
    TooManyVariables(usize),
}

/// Exponent vector with graded-lexicographic order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u8; MAX_VARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; MAX_VARS]);

    pub fn var(i: usize) -> Self {
        let mut e = [0; MAX_VARS];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exps: &[u8]) -> Self {
        let mut e = [0; MAX_VARS];
        e[..exps.len()].copy_from_slice(exps);
        Monomial(e)
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = [0; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = self.0[i].checked_add(other.0[i]).expect("exponent overflow");
        }
        Monomial(e)
    }

    /// `self / other` when every exponent of `other` is at most that of `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = [0; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = self.0[i].checked_sub(other.0[i])?;
        }
        Some(Monomial(e))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// All monomials of total degree `d` in `nvars` variables, in descending order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(i: usize, nvars: usize, left: u32, cur: &mut [u8; MAX_VARS], out: &mut Vec<Monomial>) {
        if i + 1 == nvars {
            cur[i] = left as u8;
            out.push(Monomial(*cur));
            cur[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as u8;
            rec(i + 1, nvars, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::ONE);
        }
        return out;
    }
    rec(0, nvars, d, &mut [0; MAX_VARS], &mut out);
    out
}

#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    field: Field,
    nvars: usize,
    terms: Vec<(Monomial, FieldElement)>,
}

impl SparsePoly {
    pub fn zero(field: Field, nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        SparsePoly { field, nvars, terms: Vec::new() }
    }

    pub fn constant(c: FieldElement, nvars: usize) -> Self {
        Self::monomial(c, Monomial::ONE, nvars)
    }

    pub fn one(field: Field, nvars: usize) -> Self {
        Self::constant(field.one(), nvars)
    }

    pub fn var(field: Field, nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        Self::monomial(field.one(), Monomial::var(i), nvars)
    }

    pub fn monomial(c: FieldElement, m: Monomial, nvars: usize) -> Self {
        let mut p = Self::zero(c.field(), nvars);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    /// `sum_i coeffs[i] * x_i`.
    pub fn linear_form(field: Field, coeffs: &[FieldElement]) -> Self {
        let n = coeffs.len();
        let terms = coeffs.iter().enumerate().map(|(i, &c)| (Monomial::var(i), c)).collect();
        Self::from_terms(field, n, terms)
    }

    /// Canonicalizes an arbitrary term list (merging duplicates, dropping zeros).
    pub fn from_terms(field: Field, nvars: usize, mut terms: Vec<(Monomial, FieldElement)>) -> Self {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, FieldElement)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert!(c.field().same(field));
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        SparsePoly { field, nvars, terms: out }
    }

    fn from_map(field: Field, nvars: usize, map: HashMap<Monomial, FieldElement>) -> Self {
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        SparsePoly { field, nvars, terms }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, FieldElement)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<(Monomial, FieldElement)> {
        self.terms.first().copied()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.degree() {
            None => true,
            Some(d) => self.terms.iter().all(|(m, _)| m.degree() == d),
        }
    }

    /// Coefficient of `m` (zero if absent).
    pub fn coeff(&self, m: &Monomial) -> FieldElement {
        self.terms
            .binary_search_by(|(tm, _)| m.cmp(tm))
            .map_or(self.field.zero(), |i| self.terms[i].1)
    }

    fn check(&self, other: &SparsePoly) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::ArityMismatch(self.nvars, other.nvars));
        }
        if !self.field.same(other.field) {
            return Err(PolyError::FieldMismatch);
        }
        Ok(())
    }

    fn merge(&self, other: &SparsePoly, negate: bool) -> SparsePoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Less
            } else if j == b.len() {
                Ordering::Greater
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -b[j].1 } else { b[j].1 };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { a[i].1 - b[j].1 } else { a[i].1 + b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        SparsePoly { field: self.field, nvars: self.nvars, terms: out }
    }

    pub fn checked_add(&self, other: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.check(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.check(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(SparsePoly::zero(self.field, self.nvars));
        }
        if other.terms.len() == 1 {
            let (m, c) = other.terms[0];
            return Ok(self.mul_term(m, c));
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms[0];
            return Ok(other.mul_term(m, c));
        }
        let mut map: HashMap<Monomial, FieldElement> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let prod = *ca * *cb;
                map.entry(ma.mul(mb)).and_modify(|c| *c += prod).or_insert(prod);
            }
        }
        Ok(SparsePoly::from_map(self.field, self.nvars, map))
    }

    /// Multiplies by the single term `c * m` (order-preserving).
    pub fn mul_term(&self, m: Monomial, c: FieldElement) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(self.field, self.nvars);
        }
        let terms = self.terms.iter().map(|(tm, tc)| (tm.mul(&m), *tc * c)).collect();
        SparsePoly { field: self.field, nvars: self.nvars, terms }
    }

    pub fn scale(&self, c: FieldElement) -> SparsePoly {
        self.mul_term(Monomial::ONE, c)
    }

    pub fn pow(&self, mut e: u32) -> SparsePoly {
        let mut acc = SparsePoly::one(self.field, self.nvars);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::ArityMismatch(self.nvars, point.len()));
        }
        Ok(self.eval_unchecked(point))
    }

    /// Evaluation without the arity check; `point` must have `nvars` entries.
    pub fn eval_unchecked(&self, point: &[FieldElement]) -> FieldElement {
        let zero = self.field.zero();
        if self.terms.is_empty() {
            return zero;
        }
        let maxdeg = self.terms[0].0.degree() as usize;
        // powers[i][e] = point[i]^e
        let mut powers: [[FieldElement; 17]; MAX_VARS] = [[zero; 17]; MAX_VARS];
        let table = maxdeg < 17;
        if table {
            for (i, &x) in point.iter().enumerate() {
                powers[i][0] = self.field.one();
                for e in 1..=maxdeg {
                    powers[i][e] = powers[i][e - 1] * x;
                }
            }
        }
        let mut acc = zero;
        for (m, c) in &self.terms {
            let mut t = *c;
            for i in 0..self.nvars {
                let e = m.0[i];
                if e != 0 {
                    t *= if table { powers[i][e as usize] } else { point[i].pow(e as u64) };
                }
            }
            acc += t;
        }
        acc
    }

    /// Formal partial derivative in variable `var`.
    pub fn derivative(&self, var: usize) -> SparsePoly {
        assert!(var < self.nvars, "variable index out of range");
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[var] > 0)
            .map(|(m, c)| {
                let mut e = m.0;
                let k = e[var];
                e[var] -= 1;
                (Monomial(e), *c * self.field.constant(k as u64))
            })
            .collect();
        SparsePoly::from_terms(self.field, self.nvars, terms)
    }

    /// Substitutes `x_i -> images[i]`; the images share a variable count.
    pub fn substitute(&self, images: &[SparsePoly]) -> Result<SparsePoly, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::ArityMismatch(self.nvars, images.len()));
        }
        let target_vars = images.first().map_or(0, |p| p.nvars);
        for im in images {
            if im.nvars != target_vars {
                return Err(PolyError::ArityMismatch(target_vars, im.nvars));
            }
            if !im.field.same(self.field) {
                return Err(PolyError::FieldMismatch);
            }
        }
        let mut cache: Vec<Vec<SparsePoly>> = images.iter().map(|p| vec![SparsePoly::one(self.field, target_vars), p.clone()]).collect();
        let mut map: HashMap<Monomial, FieldElement> = HashMap::new();
        for (m, c) in &self.terms {
            let mut prod = SparsePoly::constant(*c, target_vars);
            for i in 0..self.nvars {
                let e = m.0[i] as usize;
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e {
                    let next = &cache[i][cache[i].len() - 1] * &images[i];
                    cache[i].push(next);
                }
                prod = &prod * &cache[i][e];
            }
            for (pm, pc) in prod.terms {
                map.entry(pm).and_modify(|x| *x += pc).or_insert(pc);
            }
        }
        Ok(SparsePoly::from_map(self.field, target_vars, map))
    }

    /// Returns `f(A x)`, i.e. substitutes `x_i -> sum_j A[i][j] x_j`.
    pub fn substitute_linear(&self, a: &Matrix) -> Result<SparsePoly, PolyError> {
        if a.rows() != self.nvars || a.cols() != self.nvars {
            return Err(PolyError::ArityMismatch(self.nvars, a.rows()));
        }
        if !a.field().same(self.field) {
            return Err(PolyError::FieldMismatch);
        }
        if a.det().is_zero() {
            return Err(PolyError::SingularMatrix);
        }
        self.substitute_linear_unchecked(a)
    }

    /// Like [`SparsePoly::substitute_linear`] but allows singular matrices.
    pub fn substitute_linear_unchecked(&self, a: &Matrix) -> Result<SparsePoly, PolyError> {
        let images: Vec<SparsePoly> = (0..a.rows()).map(|i| SparsePoly::linear_form(self.field, a.row(i))).collect();
        self.substitute(&images)
    }

    /// Exact quotient by leading-term cancellation.
    pub fn exact_divide(&self, g: &SparsePoly) -> Result<SparsePoly, PolyError> {
        self.check(g)?;
        let (lm, lc) = g.leading_term().ok_or(PolyError::DivisionByZeroPoly)?;
        let lc_inv = lc.inv().expect("leading coefficient is nonzero");
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(&lm).ok_or(PolyError::NotDivisible)?;
            let qc = rc * lc_inv;
            quot.push((qm, qc));
            rem = rem.merge(&g.mul_term(qm, qc), true);
        }
        // Quotient terms were produced in strictly decreasing order.
        Ok(SparsePoly { field: self.field, nvars: self.nvars, terms: quot })
    }

    /// Re-expresses a polynomial with prime-field coefficients over `target`.
    pub fn base_change(&self, target: Field) -> Result<SparsePoly, PolyError> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| c.embed(target).map(|c| (*m, c)).map_err(|_| PolyError::FieldMismatch))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SparsePoly { field: target, nvars: self.nvars, terms })
    }

    /// Makes the leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> SparsePoly {
        match self.leading_term() {
            Some((_, c)) => self.scale(c.inv().expect("nonzero")),
            None => self.clone(),
        }
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{m:?}")?;
        }
        Ok(())
    }
}

struct TermRef<'a>(&'a Monomial, &'a FieldElement, usize);

impl Serialize for TermRef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Term", 2)?;
        st.serialize_field("coeff", self.1)?;
        st.serialize_field("exps", &self.0 .0[..self.2])?;
        st.end()
    }
}

/// Serialized as `[{coeff, exps}, ...]` in descending monomial order.
impl Serialize for SparsePoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            seq.serialize_element(&TermRef(m, c, self.nvars))?;
        }
        seq.end()
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        self.checked_add(rhs).expect("polynomial addition")
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self.checked_sub(rhs).expect("polynomial subtraction")
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        self.checked_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        let terms = self.terms.iter().map(|(m, c)| (*m, -*c)).collect();
        SparsePoly { field: self.field, nvars: self.nvars, terms }
    }
}

/// Matrix of polynomials sharing a field and variable count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<SparsePoly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<SparsePoly>) -> Result<Self, PolyError> {
        assert_eq!(entries.len(), rows * cols, "entry count");
        if let Some(first) = entries.first() {
            for e in &entries {
                first.check(e)?;
            }
        }
        Ok(PolyMatrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> SparsePoly) -> Result<Self, PolyError> {
        let entries = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
        Self::new(rows, cols, entries)
    }

    /// Constant matrix lifted to polynomials in `nvars` variables.
    pub fn from_scalars(m: &Matrix, nvars: usize) -> Self {
        let entries = (0..m.rows())
            .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
            .map(|(i, j)| SparsePoly::constant(m[(i, j)], nvars))
            .collect();
        PolyMatrix { rows: m.rows(), cols: m.cols(), entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &SparsePoly {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[SparsePoly] {
        &self.entries
    }

    pub fn transpose(&self) -> PolyMatrix {
        let entries = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        PolyMatrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix, PolyError> {
        if self.cols != other.rows {
            return Err(PolyError::ArityMismatch(self.cols, other.rows));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.get(i, 0).checked_mul(other.get(0, j))?;
                for k in 1..self.cols {
                    let t = self.get(i, k).checked_mul(other.get(k, j))?;
                    acc = acc.checked_add(&t)?;
                }
                entries.push(acc);
            }
        }
        Ok(PolyMatrix { rows: self.rows, cols: other.cols, entries })
    }

    /// Applies `f` to every entry.
    pub fn map(&self, f: impl Fn(&SparsePoly) -> Result<SparsePoly, PolyError>) -> Result<PolyMatrix, PolyError> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>, _>>()?;
        PolyMatrix::new(self.rows, self.cols, entries)
    }

    /// Submatrix keeping the listed rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let entries = rows.iter().flat_map(|&i| cols.iter().map(move |&j| (i, j))).map(|(i, j)| self.get(i, j).clone()).collect();
        PolyMatrix { rows: rows.len(), cols: cols.len(), entries }
    }

    /// Checks `M^T = -M` with zero diagonal as a polynomial identity.
    pub fn check_alternating(&self) -> Result<(), PolyError> {
        if self.rows != self.cols {
            return Err(PolyError::NotSquare(self.rows, self.cols));
        }
        for i in 0..self.rows {
            if !self.get(i, i).is_zero() {
                return Err(PolyError::NotAlternating(i, i));
            }
            for j in i + 1..self.cols {
                if *self.get(i, j) != -self.get(j, i) {
                    return Err(PolyError::NotAlternating(i, j));
                }
            }
        }
        Ok(())
    }

    fn base(&self) -> (Field, usize) {
        let e = self.entries.first().expect("empty matrix has no field");
        (e.field, e.nvars)
    }

    /// Determinant by expansion along rows with minors memoized by column set.
    pub fn determinant(&self) -> Result<SparsePoly, PolyError> {
        if self.rows != self.cols {
            return Err(PolyError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Err(PolyError::NotSquare(0, 0));
        }
        assert!(n <= 16, "determinant expansion limited to 16x16");
        let (field, nvars) = self.base();
        let mut memo: HashMap<u32, SparsePoly> = HashMap::new();
        Ok(self.det_rec(0, n, field, nvars, &mut memo))
    }

    /// Minor on rows `used.count_ones()..n` and the columns not in `used`.
    fn det_rec(&self, used: u32, n: usize, field: Field, nvars: usize, memo: &mut HashMap<u32, SparsePoly>) -> SparsePoly {
        let row = used.count_ones() as usize;
        if row == n {
            return SparsePoly::one(field, nvars);
        }
        if let Some(p) = memo.get(&used) {
            return p.clone();
        }
        let mut acc = SparsePoly::zero(field, nvars);
        let mut position = 0;
        for c in 0..n {
            if used & (1 << c) != 0 {
                continue;
            }
            let entry = self.get(row, c);
            if !entry.is_zero() {
                let minor = self.det_rec(used | (1 << c), n, field, nvars, memo);
                let term = entry * &minor;
                acc = if position % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            position += 1;
        }
        memo.insert(used, acc.clone());
        acc
    }

    /// Pfaffian of an even-size alternating matrix, with `pf([[0,a],[-a,0]]) = a`.
    pub fn pfaffian(&self) -> Result<SparsePoly, PolyError> {
        self.check_alternating()?;
        let n = self.rows;
        if n % 2 == 1 {
            return Err(PolyError::OddSize(n));
        }
        assert!(n <= 24, "Pfaffian expansion limited to 24x24");
        let (field, nvars) = match self.entries.first() {
            Some(_) => self.base(),
            None => return Err(PolyError::NotSquare(0, 0)),
        };
        let mut memo: HashMap<u32, SparsePoly> = HashMap::new();
        let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        Ok(self.pf_rec(all, field, nvars, &mut memo))
    }

    fn pf_rec(&self, set: u32, field: Field, nvars: usize, memo: &mut HashMap<u32, SparsePoly>) -> SparsePoly {
        if set == 0 {
            return SparsePoly::one(field, nvars);
        }
        if let Some(p) = memo.get(&set) {
            return p.clone();
        }
        let i = set.trailing_zeros() as usize;
        let rest = set & !(1 << i);
        let mut acc = SparsePoly::zero(field, nvars);
        let mut position = 0;
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let entry = self.get(i, j);
            if !entry.is_zero() {
                let sub = self.pf_rec(rest & !(1 << j), field, nvars, memo);
                let term = entry * &sub;
                acc = if position % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            position += 1;
        }
        memo.insert(set, acc.clone());
        acc
    }

    /// The `m` Pfaffians of the principal submatrices obtained by deleting
    /// row and column `i`, each taken with sign +1.
    pub fn principal_pfaffians(&self) -> Result<Vec<SparsePoly>, PolyError> {
        self.check_alternating()?;
        let m = self.rows;
        if m.is_multiple_of(2) {
            return Err(PolyError::EvenSize(m));
        }
        (0..m)
            .map(|i| {
                let keep: Vec<usize> = (0..m).filter(|&j| j != i).collect();
                if keep.is_empty() {
                    let (field, nvars) = self.base();
                    return Ok(SparsePoly::one(field, nvars));
                }
                self.submatrix(&keep, &keep).pfaffian()
            })
            .collect()
    }
}
