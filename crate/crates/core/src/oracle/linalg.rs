//! Small dense matrices over `F_p` (dimension at most 4), stored row-major
//! in a fixed array so they hash cheaply.

use crate::fqpoly::{FpPoly, PrimeField};

pub const MAX_DIM: usize = 4;

pub type Mat = [u8; MAX_DIM * MAX_DIM];
pub type Vector = [u8; MAX_DIM];

pub fn identity(n: usize) -> Mat {
    let mut m = [0u8; MAX_DIM * MAX_DIM];
    for i in 0..n {
        m[i * MAX_DIM + i] = 1;
    }
    m
}

pub fn get(m: &Mat, i: usize, j: usize) -> u32 {
    m[i * MAX_DIM + j] as u32
}

pub fn set(m: &mut Mat, i: usize, j: usize, v: u32) {
    m[i * MAX_DIM + j] = v as u8;
}

pub fn mat_mul(f: PrimeField, n: usize, a: &Mat, b: &Mat) -> Mat {
    let mut c = [0u8; MAX_DIM * MAX_DIM];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0u32;
            for k in 0..n {
                s += get(a, i, k) * get(b, k, j);
            }
            set(&mut c, i, j, s % f.p());
        }
    }
    c
}

pub fn mat_pow(f: PrimeField, n: usize, a: &Mat, mut e: u64) -> Mat {
    let mut base = *a;
    let mut acc = identity(n);
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(f, n, &acc, &base);
        }
        base = mat_mul(f, n, &base, &base);
        e >>= 1;
    }
    acc
}

pub fn apply(f: PrimeField, n: usize, a: &Mat, v: &Vector) -> Vector {
    let mut out = [0u8; MAX_DIM];
    for i in 0..n {
        let s: u32 = (0..n).map(|k| get(a, i, k) * v[k] as u32).sum();
        out[i] = (s % f.p()) as u8;
    }
    out
}

/// Multiplicative order; `None` if not invertible within `limit` steps.
pub fn mat_order(f: PrimeField, n: usize, a: &Mat, limit: u64) -> Option<u64> {
    let id = identity(n);
    let mut x = *a;
    for k in 1..=limit {
        if x == id {
            return Some(k);
        }
        x = mat_mul(f, n, &x, a);
    }
    None
}

/// Exponents `(s, u)` with `g^s` the `p'`-part and `g^u` the `p`-part of an
/// element of order `order`.
pub fn jordan_exponents(p: u64, order: u64) -> (u64, u64) {
    let mut pp = 1;
    let mut rest = order;
    while rest % p == 0 {
        rest /= p;
        pp *= p;
    }
    // s = 0 mod pp, s = 1 mod rest
    let s = (0..rest).map(|t| pp * t).find(|s| s % rest == 1 % rest).unwrap_or(0);
    let u = (order + 1 - s) % order.max(1);
    (s, u)
}

/// `det(X I - A)`, by cofactor expansion over `F_p[X]`.
pub fn charpoly(f: PrimeField, n: usize, a: &Mat) -> FpPoly {
    let entries: Vec<Vec<FpPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = f.neg(get(a, i, j));
                    if i == j {
                        FpPoly::new(f, vec![c, 1])
                    } else {
                        FpPoly::constant(f, c)
                    }
                })
                .collect()
        })
        .collect();
    det_poly(f, &entries)
}

fn det_poly(f: PrimeField, m: &[Vec<FpPoly>]) -> FpPoly {
    let n = m.len();
    if n == 0 {
        return FpPoly::one(f);
    }
    let mut acc = FpPoly::zero(f);
    for j in 0..n {
        let minor: Vec<Vec<FpPoly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = m[0][j].mul(&det_poly(f, &minor));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

pub fn det(f: PrimeField, n: usize, a: &Mat) -> u32 {
    // constant term of det(X - A) is (-1)^n det A
    let c = charpoly(f, n, a).coeff(0);
    if n % 2 == 0 {
        c
    } else {
        f.neg(c)
    }
}

/// Reduced row echelon form of the given rows; returns the nonzero rows.
pub fn row_reduce(f: PrimeField, n: usize, rows: &[Vector]) -> Vec<Vector> {
    let mut rows: Vec<Vector> = rows.to_vec();
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = f.inv(rows[rank][col] as u32).expect("nonzero pivot");
        for k in 0..n {
            rows[rank][k] = f.mul(rows[rank][k] as u32, inv) as u8;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let c = rows[r][col] as u32;
                for k in 0..n {
                    rows[r][k] = f.sub(rows[r][k] as u32, f.mul(c, rows[rank][k] as u32)) as u8;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

pub fn rank_of(f: PrimeField, n: usize, rows: &[Vector]) -> usize {
    row_reduce(f, n, rows).len()
}

/// Basis of `{v : A v = 0}`.
pub fn kernel(f: PrimeField, n: usize, a: &Mat) -> Vec<Vector> {
    let rows: Vec<Vector> = (0..n)
        .map(|i| {
            let mut r = [0u8; MAX_DIM];
            for j in 0..n {
                r[j] = get(a, i, j) as u8;
            }
            r
        })
        .collect();
    let red = row_reduce(f, n, &rows);
    let pivots: Vec<usize> = red
        .iter()
        .map(|r| (0..n).find(|&c| r[c] != 0).expect("nonzero row"))
        .collect();
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = [0u8; MAX_DIM];
        v[free] = 1;
        for (r, &pc) in red.iter().zip(&pivots) {
            v[pc] = f.neg(r[free] as u32) as u8;
        }
        basis.push(v);
    }
    basis
}

/// `A - c I`.
pub fn shift(f: PrimeField, n: usize, a: &Mat, c: u32) -> Mat {
    let mut m = *a;
    for i in 0..n {
        set(&mut m, i, i, f.sub(get(a, i, i), c));
    }
    m
}

pub fn all_vectors(p: u32, n: usize) -> impl Iterator<Item = Vector> {
    let total = (p as usize).pow(n as u32);
    (0..total).map(move |mut k| {
        let mut v = [0u8; MAX_DIM];
        for slot in v.iter_mut().take(n) {
            *slot = (k % p as usize) as u8;
            k /= p as usize;
        }
        v
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_of_companion() {
        let f = PrimeField::new(5).unwrap();
        // companion matrix of X^3 + 2X + 3
        let mut a = [0u8; 16];
        set(&mut a, 1, 0, 1);
        set(&mut a, 2, 1, 1);
        set(&mut a, 0, 2, f.neg(3));
        set(&mut a, 1, 2, f.neg(2));
        assert_eq!(charpoly(f, 3, &a), FpPoly::from_i64s(f, &[3, 2, 0, 1]));
        assert_eq!(det(f, 3, &a), f.neg(3));
    }

    #[test]
    fn kernel_and_rank() {
        let f = PrimeField::new(3).unwrap();
        let mut a = [0u8; 16];
        set(&mut a, 0, 0, 1);
        set(&mut a, 0, 1, 1);
        set(&mut a, 1, 0, 2);
        set(&mut a, 1, 1, 2);
        let k = kernel(f, 2, &a);
        assert_eq!(k.len(), 1);
        assert_eq!(apply(f, 2, &a, &k[0]), [0; 4]);
    }

    #[test]
    fn jordan_split_exponents() {
        for (p, o) in [(3u64, 12u64), (5, 10), (3, 9), (5, 4), (3, 1)] {
            let (s, u) = jordan_exponents(p, o);
            assert_eq!((s + u) % o, 1 % o);
            let mut pp = 1;
            while o % (pp * p) == 0 {
                pp *= p;
            }
            assert_eq!(s % pp, 0);
            assert_eq!(u % (o / pp), 0);
        }
    }
}
