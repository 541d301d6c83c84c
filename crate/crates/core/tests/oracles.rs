//! Independent recomputations checked against the library.

mod common;

use abelian_cy::families::{t14_coordinate_change, t14_matrix, t17_matrix};
use abelian_cy::field::{is_prime, make_field, Field};
use abelian_cy::heisenberg::vminus_point;
use abelian_cy::linalg::Matrix;
use abelian_cy::mpoly::PolyMatrix;
use common::*;
use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Leibniz formula over all permutations.
fn leibniz(m: &Matrix) -> abelian_cy::field::FieldElement {
    let n = m.rows();
    let field = m.field();
    let mut acc = field.zero();
    for perm in (0..n).permutations(n) {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        let term: abelian_cy::field::FieldElement = (0..n).map(|i| m[(i, perm[i])]).product();
        acc = if inversions % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

#[test]
fn gaussian_determinant_matches_leibniz() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (p, k) in [(101, 1), (5, 2), (2, 3)] {
        let f = make_field(p, k).unwrap();
        for n in 1..=6 {
            for _ in 0..10 {
                let m = rand_matrix(&mut rng, f, n, n);
                assert_eq!(m.det(), leibniz(&m));
                let as_poly = PolyMatrix::from_scalars(&m, 1);
                assert_eq!(as_poly.determinant().unwrap().coeff(&abelian_cy::mpoly::Monomial::ONE), m.det());
            }
        }
    }
}

#[test]
fn polynomial_determinant_matches_cofactors() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f = make_field(31, 1).unwrap();
    for n in 1..=5 {
        for _ in 0..20 {
            let entries = (0..n * n).map(|_| rand_poly(&mut rng, f, 3, 2, 3)).collect();
            let m = PolyMatrix::new(n, n, entries).unwrap();
            assert_eq!(m.determinant().unwrap(), cofactor_det(&m));
        }
    }
}

/// Brute-force irreducibility of a monic little-endian polynomial: no monic factor of degree 1..=k/2.
fn irreducible_by_search(field: Field, target: &[u64]) -> bool {
    let p = field.characteristic();
    let k = target.len() - 1;
    for d in 1..=k / 2 {
        for tail in (0..d).map(|_| 0..p).multi_cartesian_product() {
            let divisor: Vec<u64> = tail.into_iter().chain([1]).collect();
            if remainder_is_zero(target, &divisor, p) {
                return false;
            }
        }
    }
    true
}

fn remainder_is_zero(num: &[u64], den: &[u64], p: u64) -> bool {
    let mut r = num.to_vec();
    let d = den.len() - 1;
    while r.len() > d {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - d;
        for (i, c) in den.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - lead * c % p) % p;
        }
        r.pop();
    }
    r.iter().all(|&c| c == 0)
}

#[test]
fn chosen_moduli_are_irreducible() {
    for p in [2u64, 3, 5, 7, 11, 13, 17] {
        for k in 2..=4 {
            let f = make_field(p, k).unwrap();
            let modulus: Vec<u64> = f.modulus().iter().map(|&c| c as u64).collect();
            assert_eq!(modulus.len(), k as usize + 1);
            assert_eq!(modulus[k as usize], 1);
            assert!(irreducible_by_search(f, &modulus), "F_{p}^{k}");
        }
    }
    assert!(!remainder_is_zero(&[1, 0, 1], &[1, 1], 3));
    assert!(remainder_is_zero(&[2, 0, 1], &[1, 1], 3));
}

#[test]
fn primality_matches_trial_division() {
    for n in 0..2000u64 {
        let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
        assert_eq!(is_prime(n), trial, "{n}");
    }
}

#[test]
fn multiplicative_generator_has_full_order() {
    for (p, k) in [(13, 1), (11, 2), (3, 3), (2, 4)] {
        let f = make_field(p, k).unwrap();
        let g = f.multiplicative_generator();
        let order = f.order() - 1;
        let mut seen = std::collections::BTreeSet::new();
        let mut x = f.one();
        for _ in 0..order {
            seen.insert(x.index());
            x *= g;
        }
        assert_eq!(seen.len() as u64, order);
    }
}

#[test]
fn printed_matrices_match_their_formulas() {
    let f = make_field(13, 1).unwrap();
    let c = t14_coordinate_change(f);
    assert_eq!(c.det(), leibniz(&c));
    let n = t14_matrix(f);
    assert!(n.transpose() == n, "the fiber matrix is symmetric");

    let g = make_field(29, 1).unwrap();
    let y = vminus_point(7, &[3, 5, 11].map(|v| g.constant(v))).unwrap();
    let m = t17_matrix(&y).unwrap();
    let half = 4; // inverse of 2 mod 7
    for i in 0..7 {
        for j in 0..7 {
            let xi = (i + j) * half % 7;
            let yi = (i + 7 - j) * half % 7;
            let expected = abelian_cy::mpoly::SparsePoly::var(g, 7, xi).scale(y.coords()[yi]);
            assert_eq!(m.get(i, j), &expected);
        }
    }
}
