#![allow(dead_code)]

use abelian_cy::field::{Field, FieldElement};
use abelian_cy::linalg::Matrix;
use abelian_cy::mpoly::{Monomial, PolyMatrix, SparsePoly};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rand_elem(rng: &mut ChaCha8Rng, field: Field) -> FieldElement {
    field.from_index(rng.random_range(0..field.order()))
}

pub fn rand_poly(rng: &mut ChaCha8Rng, field: Field, nvars: usize, max_deg: u8, max_terms: usize) -> SparsePoly {
    let n = rng.random_range(0..=max_terms);
    let terms = (0..n)
        .map(|_| {
            let mut e = [0u8; 12];
            for x in e.iter_mut().take(nvars) {
                *x = rng.random_range(0..=max_deg);
            }
            (Monomial(e), rand_elem(rng, field))
        })
        .collect();
    SparsePoly::from_terms(field, nvars, terms)
}

pub fn rand_matrix(rng: &mut ChaCha8Rng, field: Field, rows: usize, cols: usize) -> Matrix {
    let entries: Vec<Vec<_>> = (0..rows).map(|_| (0..cols).map(|_| rand_elem(rng, field)).collect()).collect();
    Matrix::from_rows(field, &entries)
}

pub fn rand_invertible(rng: &mut ChaCha8Rng, field: Field, n: usize) -> Matrix {
    loop {
        let m = rand_matrix(rng, field, n, n);
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// Alternating matrix whose upper entries are random constants or random linear forms.
pub fn rand_alternating(rng: &mut ChaCha8Rng, field: Field, n: usize, nvars: usize, polynomial: bool) -> PolyMatrix {
    let mut upper = vec![SparsePoly::zero(field, nvars); n * n];
    for i in 0..n {
        for j in i + 1..n {
            upper[i * n + j] = if polynomial {
                let c: Vec<_> = (0..nvars).map(|_| rand_elem(rng, field)).collect();
                SparsePoly::linear_form(field, &c)
            } else {
                SparsePoly::constant(rand_elem(rng, field), nvars)
            };
        }
    }
    PolyMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => upper[i * n + j].clone(),
        std::cmp::Ordering::Greater => -&upper[j * n + i],
        std::cmp::Ordering::Equal => SparsePoly::zero(field, nvars),
    })
    .unwrap()
}

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &PolyMatrix) -> SparsePoly {
    let n = m.rows();
    let field = m.get(0, 0).field();
    let nvars = m.get(0, 0).nvars();
    if n == 1 {
        return m.get(0, 0).clone();
    }
    let mut acc = SparsePoly::zero(field, nvars);
    for j in 0..n {
        let rows: Vec<usize> = (1..n).collect();
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let minor = cofactor_det(&m.submatrix(&rows, &cols));
        let term = m.get(0, j) * &minor;
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}
