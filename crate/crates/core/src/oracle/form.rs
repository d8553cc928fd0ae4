//! Diagonal quadratic forms of dimension 2 or 4 and their Witt class.

use super::linalg::{self, Mat, Vector, MAX_DIM};
use crate::error::{Error, Result};
use crate::fqpoly::PrimeField;
use serde::Serialize;

/// Split (`Plus`, class 0) or non-split (`Minus`, class 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WittType {
    Plus,
    Minus,
}

impl WittType {
    pub const BOTH: [WittType; 2] = [WittType::Plus, WittType::Minus];

    pub fn bit(self) -> u8 {
        match self {
            WittType::Plus => 0,
            WittType::Minus => 1,
        }
    }

    pub fn from_bit(b: u8) -> Self {
        if b % 2 == 0 {
            WittType::Plus
        } else {
            WittType::Minus
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadForm {
    pub field: PrimeField,
    pub coeffs: Vec<u32>,
    pub witt_type: WittType,
}

impl QuadForm {
    /// `(1, .., 1, c)` with `c` chosen to realise `t`; the type is then
    /// re-derived by searching for isotropic subspaces.
    pub fn standard(field: PrimeField, n: usize, t: WittType) -> Result<Self> {
        if n != 2 && n != 4 {
            return Err(Error::Invalid(format!("form dimension {n} (only 2 and 4)")));
        }
        let sign = if (n / 2) % 2 == 0 { 1 } else { field.minus_one() };
        // (-1)^(n/2) * c must be a square exactly for the split type
        let target = match t {
            WittType::Plus => 1,
            WittType::Minus => field.least_nonsquare(),
        };
        let last = field.mul(sign, target);
        let mut coeffs = vec![1; n - 1];
        coeffs.push(last);
        let form = QuadForm { field, coeffs, witt_type: t };
        let found = form.type_by_search();
        if found != t {
            return Err(Error::Invalid(format!("form {:?} searched as {found:?}", form.coeffs)));
        }
        Ok(form)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn q(&self, v: &Vector) -> u32 {
        let f = self.field;
        (0..self.dim()).fold(0, |acc, i| f.add(acc, f.mul(self.coeffs[i], f.mul(v[i] as u32, v[i] as u32))))
    }

    /// `B(x, y) = Q(x + y) - Q(x) - Q(y)`.
    pub fn b(&self, x: &Vector, y: &Vector) -> u32 {
        let f = self.field;
        let s = (0..self.dim()).fold(0, |acc, i| f.add(acc, f.mul(self.coeffs[i], f.mul(x[i] as u32, y[i] as u32))));
        f.add(s, s)
    }

    /// Split iff the maximal totally isotropic subspaces have dimension
    /// `N/2`, found by exhaustive search.
    pub fn type_by_search(&self) -> WittType {
        let f = self.field;
        let iso: Vec<Vector> = linalg::all_vectors(f.p(), self.dim())
            .filter(|v| v.iter().any(|&x| x != 0) && self.q(v) == 0)
            .collect();
        let split = match self.dim() {
            2 => !iso.is_empty(),
            _ => iso.iter().any(|v| {
                iso.iter()
                    .any(|w| self.b(v, w) == 0 && linalg::rank_of(f, self.dim(), &[*v, *w]) == 2)
            }),
        };
        if split {
            WittType::Plus
        } else {
            WittType::Minus
        }
    }

    /// Witt class of the restriction to a nondegenerate even-dimensional
    /// subspace: 0 iff `(-1)^(k/2) det(Gram)` is a square. The zero space
    /// has class 0.
    pub fn subspace_class(&self, basis: &[Vector]) -> Result<u8> {
        let f = self.field;
        let k = basis.len();
        if k == 0 {
            return Ok(0);
        }
        if k % 2 == 1 || k > MAX_DIM {
            return Err(Error::Invalid(format!("subspace of dimension {k}")));
        }
        let mut g: Mat = linalg::identity(0);
        let half = f.inv(2)?;
        for i in 0..k {
            for j in 0..k {
                linalg::set(&mut g, i, j, f.mul(half, self.b(&basis[i], &basis[j])));
            }
        }
        let det = linalg::det(f, k, &g);
        if det == 0 {
            return Err(Error::Invalid("degenerate subspace".into()));
        }
        let disc = if (k / 2) % 2 == 0 { det } else { f.neg(det) };
        Ok(if f.is_square(disc) { 0 } else { 1 })
    }

    /// Reflection `x -> x - B(x, v)/Q(v) v`.
    pub fn reflection(&self, v: &Vector) -> Result<Mat> {
        let f = self.field;
        let n = self.dim();
        let qinv = f.inv(self.q(v))?;
        let mut m = linalg::identity(n);
        for j in 0..n {
            let mut e = [0u8; MAX_DIM];
            e[j] = 1;
            let c = f.mul(self.b(&e, v), qinv);
            for i in 0..n {
                let entry = f.sub(linalg::get(&m, i, j), f.mul(c, v[i] as u32));
                linalg::set(&mut m, i, j, entry);
            }
        }
        Ok(m)
    }

    /// `|Spin| = |SO|` over `F_q`.
    pub fn spin_order(&self) -> u64 {
        let q = self.field.p() as u64;
        match (self.dim(), self.witt_type) {
            (2, WittType::Plus) => q - 1,
            (2, WittType::Minus) => q + 1,
            (_, WittType::Plus) => q * q * (q * q - 1) * (q * q - 1),
            (_, WittType::Minus) => q * q * (q.pow(4) - 1),
        }
    }

    pub fn preserves(&self, m: &Mat) -> bool {
        let f = self.field;
        let n = self.dim();
        linalg::all_vectors(f.p(), n).all(|v| self.q(&linalg::apply(f, n, m, &v)) == self.q(&v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn declared_types_are_realised() {
        for p in [3, 5, 7] {
            let f = PrimeField::new(p).unwrap();
            for n in [2, 4] {
                for t in WittType::BOTH {
                    let form = QuadForm::standard(f, n, t).unwrap();
                    assert_eq!(form.type_by_search(), t);
                    let basis: Vec<Vector> = (0..n)
                        .map(|i| {
                            let mut e = [0u8; MAX_DIM];
                            e[i] = 1;
                            e
                        })
                        .collect();
                    assert_eq!(form.subspace_class(&basis).unwrap(), t.bit());
                }
            }
        }
    }

    #[test]
    fn reflections_are_orthogonal_involutions() {
        let f = PrimeField::new(5).unwrap();
        let form = QuadForm::standard(f, 4, WittType::Minus).unwrap();
        let v = [1, 2, 0, 1];
        let r = form.reflection(&v).unwrap();
        assert!(form.preserves(&r));
        assert_eq!(linalg::mat_mul(f, 4, &r, &r), linalg::identity(4));
        assert_eq!(linalg::det(f, 4, &r), f.minus_one());
    }
}
