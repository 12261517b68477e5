#![allow(dead_code)]

use radixtile::exact_linalg::{int_vec, IntMatrix, IntVector};
use radixtile::radix_system::{new_system, RadixSystem};

pub fn m(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows).unwrap()
}

pub fn vs(v: &[&[i64]]) -> Vec<IntVector> {
    v.iter().map(|x| int_vec(x)).collect()
}

/// `A` of the cloud examples; their radix base is `A^T`.
pub fn cloud_a() -> IntMatrix {
    m(&[vec![1, -2], vec![2, 1]])
}

pub fn cloud_l() -> Vec<IntVector> {
    vs(&[&[0, 0], &[3, 0], &[-3, 0], &[0, 2], &[0, -2]])
}

pub fn nine_digits() -> Vec<IntVector> {
    cloud_l()
}

pub fn three_digits() -> Vec<IntVector> {
    vs(&[&[0, 0], &[0, 1], &[0, -1], &[0, 2], &[0, -2]])
}

pub fn five_digits() -> Vec<IntVector> {
    vs(&[&[0, 0], &[3, 0], &[-3, 0], &[1, 0], &[-1, 0]])
}

pub fn twin_a() -> IntMatrix {
    m(&[vec![1, 1], vec![-1, 1]])
}

pub fn twin_digits() -> Vec<IntVector> {
    vs(&[&[0, 0], &[1, 0]])
}

pub fn system(a: &IntMatrix, d: Vec<IntVector>) -> RadixSystem {
    new_system(a.transpose(), d).unwrap()
}

pub fn cloud(d: Vec<IntVector>) -> RadixSystem {
    system(&cloud_a(), d)
}

pub fn twin() -> RadixSystem {
    system(&twin_a(), twin_digits())
}

pub fn one_d(b: i64, ds: &[i64]) -> RadixSystem {
    new_system(m(&[vec![b]]), ds.iter().map(|&d| int_vec(&[d])).collect()).unwrap()
}
