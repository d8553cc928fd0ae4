//! Clifford algebra of a diagonal form and the spin group inside it,
//! enumerated by closure.

use super::form::QuadForm;
use super::linalg::{self, Mat, MAX_DIM};
use crate::error::{Error, Result};
use crate::fqpoly::PrimeField;
use std::collections::HashMap;

/// Coefficients over the blades `e_S`, `S` a bitmask of `{0..N-1}`.
pub type Elem = [u8; 1 << MAX_DIM];

/// Multiplication table `e_S e_T = coef * e_(S xor T)`.
#[derive(Clone, Debug)]
pub struct Clifford {
    pub form: QuadForm,
    blades: usize,
    table: Vec<(u32, usize)>,
}

impl Clifford {
    pub fn new(form: QuadForm) -> Self {
        let f = form.field;
        let blades = 1usize << form.dim();
        let mut table = Vec::with_capacity(blades * blades);
        for s in 0..blades {
            for t in 0..blades {
                // move each e_j of T left past the larger indices of S
                let swaps: u32 = (0..form.dim())
                    .filter(|j| t >> j & 1 == 1)
                    .map(|j| (s >> (j + 1)).count_ones())
                    .sum();
                let mut c = if swaps % 2 == 0 { 1 } else { f.minus_one() };
                for i in 0..form.dim() {
                    if (s & t) >> i & 1 == 1 {
                        c = f.mul(c, form.coeffs[i]);
                    }
                }
                table.push((c, s ^ t));
            }
        }
        Clifford { form, blades, table }
    }

    pub fn field(&self) -> PrimeField {
        self.form.field
    }

    pub fn one(&self) -> Elem {
        let mut x = [0u8; 1 << MAX_DIM];
        x[0] = 1;
        x
    }

    pub fn scalar(&self, c: u32) -> Elem {
        let mut x = [0u8; 1 << MAX_DIM];
        x[0] = c as u8;
        x
    }

    pub fn vector(&self, v: &linalg::Vector) -> Elem {
        let mut x = [0u8; 1 << MAX_DIM];
        for i in 0..self.form.dim() {
            x[1 << i] = v[i];
        }
        x
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let p = self.field().p() as u64;
        let mut acc = [0u64; 1 << MAX_DIM];
        for s in 0..self.blades {
            if a[s] == 0 {
                continue;
            }
            for t in 0..self.blades {
                if b[t] == 0 {
                    continue;
                }
                let (c, u) = self.table[s * self.blades + t];
                acc[u] += a[s] as u64 * b[t] as u64 * c as u64;
            }
        }
        let mut out = [0u8; 1 << MAX_DIM];
        for (o, x) in out.iter_mut().zip(acc) {
            *o = (x % p) as u8;
        }
        out
    }

    pub fn scale(&self, a: &Elem, c: u32) -> Elem {
        let f = self.field();
        let mut out = *a;
        for x in out.iter_mut() {
            *x = f.mul(*x as u32, c) as u8;
        }
        out
    }

    /// The anti-automorphism reversing products of vectors.
    pub fn reversal(&self, a: &Elem) -> Elem {
        let f = self.field();
        let mut out = *a;
        for (s, x) in out.iter_mut().enumerate() {
            let k = s.count_ones();
            if (k * k.saturating_sub(1) / 2) % 2 == 1 {
                *x = f.neg(*x as u32) as u8;
            }
        }
        out
    }

    /// `x -> g x g^-1` on vectors, for `g` with `g g^rev = 1`.
    pub fn kappa(&self, g: &Elem) -> Mat {
        let n = self.form.dim();
        let gr = self.reversal(g);
        let mut m = linalg::identity(0);
        for i in 0..n {
            let mut e = [0u8; MAX_DIM];
            e[i] = 1;
            let img = self.mul(&self.mul(g, &self.vector(&e)), &gr);
            for j in 0..n {
                linalg::set(&mut m, j, i, img[1 << j] as u32);
            }
        }
        m
    }
}

/// An enumerated spin group with its conjugacy classes.
#[derive(Clone, Debug)]
pub struct SpinGroup {
    pub alg: Clifford,
    pub elems: Vec<Elem>,
    pub index: HashMap<Elem, usize>,
    pub gens: Vec<Elem>,
    /// Class id of every element; ids are dense and ordered by first member.
    pub class_of: Vec<usize>,
    pub class_reps: Vec<usize>,
}

fn closure(alg: &Clifford, gens: &[Elem], cap: usize) -> Result<(Vec<Elem>, HashMap<Elem, usize>)> {
    let one = alg.one();
    let mut elems = vec![one];
    let mut index = HashMap::from([(one, 0usize)]);
    let mut head = 0;
    while head < elems.len() {
        let x = elems[head];
        head += 1;
        for g in gens {
            let y = alg.mul(&x, g);
            if !index.contains_key(&y) {
                if elems.len() == cap {
                    return Err(Error::CapExceeded(format!("spin closure beyond {cap} elements")));
                }
                index.insert(y, elems.len());
                elems.push(y);
            }
        }
    }
    Ok((elems, index))
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl SpinGroup {
    /// Closes `vw/c` over vectors with `Q(v) Q(w) = c^2`, adding generators
    /// greedily until the expected order is reached. Exceeding it is a
    /// hard error.
    pub fn build(form: QuadForm) -> Result<Self> {
        let alg = Clifford::new(form.clone());
        let f = form.field;
        let expected = form.spin_order() as usize;
        let nu = f.least_nonsquare();
        let n = form.dim();
        // representatives of lines with Q in {1, nu}
        let mut reps: Vec<(linalg::Vector, u32)> = Vec::new();
        for v in linalg::all_vectors(f.p(), n) {
            let qv = form.q(&v);
            if qv == 1 || qv == nu {
                reps.push((v, qv));
            }
        }
        let mut gens: Vec<Elem> = Vec::new();
        let (mut elems, mut index) = closure(&alg, &gens, expected)?;
        'outer: for (v, qv) in &reps {
            for (w, qw) in &reps {
                if qv != qw {
                    continue;
                }
                let c_inv = f.inv(*qv)?;
                for sign in [1, f.minus_one()] {
                    let g = alg.scale(&alg.mul(&alg.vector(v), &alg.vector(w)), f.mul(c_inv, sign));
                    if index.contains_key(&g) {
                        continue;
                    }
                    gens.push(g);
                    (elems, index) = closure(&alg, &gens, expected)?;
                    if elems.len() == expected {
                        break 'outer;
                    }
                }
            }
        }
        if elems.len() != expected {
            return Err(Error::Invalid(format!("spin closure stopped at {} of {expected}", elems.len())));
        }
        let mut parent: Vec<usize> = (0..elems.len()).collect();
        let inv: Vec<Elem> = gens.iter().map(|g| alg.reversal(g)).collect();
        for (i, x) in elems.iter().enumerate() {
            for (g, gi) in gens.iter().zip(&inv) {
                let y = alg.mul(&alg.mul(g, x), gi);
                let j = *index.get(&y).ok_or_else(|| Error::Invalid("conjugate left the group".into()))?;
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut class_of = vec![0; elems.len()];
        let mut class_reps = Vec::new();
        let mut id_of_root = HashMap::new();
        for i in 0..elems.len() {
            let r = find(&mut parent, i);
            let id = *id_of_root.entry(r).or_insert_with(|| {
                class_reps.push(i);
                class_reps.len() - 1
            });
            class_of[i] = id;
        }
        Ok(SpinGroup { alg, elems, index, gens, class_of, class_reps })
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn class_count(&self) -> usize {
        self.class_reps.len()
    }

    pub fn delta(&self) -> Elem {
        self.alg.scalar(self.alg.field().minus_one())
    }

    pub fn elem_order(&self, g: &Elem) -> u64 {
        let one = self.alg.one();
        let mut x = *g;
        let mut k = 1;
        while x != one {
            x = self.alg.mul(&x, g);
            k += 1;
        }
        k
    }

    pub fn pow(&self, g: &Elem, mut e: u64) -> Elem {
        let mut base = *g;
        let mut acc = self.alg.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.alg.mul(&acc, &base);
            }
            base = self.alg.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Class id of the `delta`-translate of each class.
    pub fn delta_translates(&self) -> Vec<usize> {
        let d = self.delta();
        self.class_reps
            .iter()
            .map(|&r| {
                let y = self.alg.mul(&d, &self.elems[r]);
                self.class_of[self.index[&y]]
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::form::WittType;

    fn alg(p: u32, n: usize, t: WittType) -> Clifford {
        Clifford::new(QuadForm::standard(PrimeField::new(p).unwrap(), n, t).unwrap())
    }

    #[test]
    fn generators_square_and_anticommute() {
        let c = alg(5, 4, WittType::Minus);
        let f = c.field();
        for i in 0..4 {
            let mut ei = [0u8; MAX_DIM];
            ei[i] = 1;
            let vi = c.vector(&ei);
            assert_eq!(c.mul(&vi, &vi), c.scalar(c.form.coeffs[i]));
            for j in 0..4 {
                if i != j {
                    let mut ej = [0u8; MAX_DIM];
                    ej[j] = 1;
                    let vj = c.vector(&ej);
                    assert_eq!(c.mul(&vi, &vj), c.scale(&c.mul(&vj, &vi), f.minus_one()));
                }
            }
        }
    }

    #[test]
    fn multiplication_is_associative_on_samples() {
        use rand::{Rng, SeedableRng};
        let c = alg(3, 4, WittType::Plus);
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let mut rand_elem = || {
            let mut x = [0u8; 16];
            for v in x.iter_mut() {
                *v = rng.gen_range(0..3);
            }
            x
        };
        for _ in 0..200 {
            let (a, b, d) = (rand_elem(), rand_elem(), rand_elem());
            assert_eq!(c.mul(&c.mul(&a, &b), &d), c.mul(&a, &c.mul(&b, &d)));
        }
    }

    #[test]
    fn vector_squares_to_its_norm() {
        let c = alg(3, 4, WittType::Minus);
        for v in linalg::all_vectors(3, 4) {
            let x = c.vector(&v);
            assert_eq!(c.mul(&x, &x), c.scalar(c.form.q(&v)));
        }
    }

    #[test]
    fn small_torus() {
        let g = SpinGroup::build(QuadForm::standard(PrimeField::new(3).unwrap(), 2, WittType::Minus).unwrap()).unwrap();
        assert_eq!((g.order(), g.class_count()), (4, 4));
    }
}
