//! Seeded generators shared by the property and acceptance tests.
#![allow(dead_code)]

use rand::Rng;
use smash_core::coalgebra::{Comodule, Comonoid};
use smash_core::exact::{Field, Matrix};
use smash_core::monoidal::{Backend, Mor, Obj};

pub fn fields() -> [Field; 2] {
    [Field::Rational, Field::prime(5).unwrap()]
}

pub fn vect(field: Field, name: &str, n: usize) -> Obj {
    Obj::atom(Backend::Vect(field), (0..n).map(|i| format!("{name}{i}"))).unwrap()
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, field: Field) -> Matrix {
    let entries = (0..rows * cols).map(|_| field.from_i64(rng.gen_range(-3..=3))).collect();
    Matrix::new(rows, cols, field, entries).unwrap()
}

pub fn random_invertible(rng: &mut impl Rng, n: usize, field: Field) -> Matrix {
    loop {
        let m = random_matrix(rng, n, n, field);
        if m.rank() == n {
            return m;
        }
    }
}

/// `k[G]` for a set `G` of `n` group-like elements.
pub fn group_like(field: Field, name: &str, n: usize) -> Comonoid {
    Comonoid::group_like(&vect(field, name, n))
}

/// A `C`-bicomodule of dimension `dim`, graded on each side by random
/// group-likes, then moved to a random basis so the coactions are dense.
pub fn graded(rng: &mut impl Rng, c: &Comonoid, name: &str, dim: usize) -> Comodule {
    graded_with_endo(rng, c, name, dim).0
}

/// As [`graded`], with a random bicomodule endomorphism: degree-preserving
/// in the graded basis, then conjugated along.
pub fn graded_with_endo(rng: &mut impl Rng, c: &Comonoid, name: &str, dim: usize) -> (Comodule, Mor) {
    let field = c.carrier.backend().field().unwrap();
    let n = c.carrier.dim();
    let m = vect(field, name, dim);
    let right: Vec<usize> = (0..dim).map(|_| rng.gen_range(0..n)).collect();
    let left: Vec<usize> = (0..dim).map(|_| rng.gen_range(0..n)).collect();
    let rho = Mor::from_index_map(&m, &m.tensor(&c.carrier).unwrap(), |i| i * n + right[i]).unwrap();
    let lambda = Mor::from_index_map(&m, &c.carrier.tensor(&m).unwrap(), |i| left[i] * dim + i).unwrap();
    let mut t = random_matrix(rng, dim, dim, field);
    for i in 0..dim {
        for j in 0..dim {
            if left[i] != left[j] || right[i] != right[j] {
                t.set(i, j, field.zero());
            }
        }
    }
    let p = Mor::linear(&m, &m, random_invertible(rng, dim, field)).unwrap();
    let p_inv = p.inverse().unwrap();
    let id_c = c.id();
    let rho = p.tensor(&id_c).unwrap().after(&rho).unwrap().after(&p_inv).unwrap();
    let lambda = id_c.tensor(&p).unwrap().after(&lambda).unwrap().after(&p_inv).unwrap();
    let endo = p.after(&Mor::linear(&m, &m, t).unwrap()).unwrap().after(&p_inv).unwrap();
    (Comodule::bi(&m, c, lambda, c, rho), endo)
}

/// A group-like comonoid with 1 to 3 elements and two graded bicomodules over it.
pub fn graded_pair(rng: &mut impl Rng, field: Field, tag: &str) -> (Comonoid, Comodule, Comodule) {
    let c = group_like(field, &format!("{tag}g"), rng.gen_range(1..=3));
    let (dm, dn) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
    let m = graded(rng, &c, &format!("{tag}m"), dm);
    let n = graded(rng, &c, &format!("{tag}n"), dn);
    (c, m, n)
}
