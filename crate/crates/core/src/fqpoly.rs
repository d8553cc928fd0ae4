//! Arithmetic over a prime field `F_p` (`p` odd), polynomials over it,
//! irreducible enumeration, and finite extension fields presented as
//! `F_p[X]/(f)`.

use crate::error::{Error, Result};
use num_bigint::BigUint;
use std::fmt;

/// Above this many candidates the sieve gives way to the per-polynomial
/// irreducibility test.
pub const SIEVE_LIMIT: u64 = 1_000_000;
/// Hard ceiling on `p^d` for `irreducibles`.
pub const ENUM_LIMIT: u64 = 20_000_000;

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        let prime = p >= 3 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0);
        if !prime || p % 2 == 0 || p >= 1 << 15 {
            return Err(Error::BadModulus(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(self) -> u32 {
        self.p
    }

    pub fn reduce(self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        a * b % self.p
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u32) -> Result<u32> {
        if a % self.p == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.p as u64 - 2))
    }

    /// Legendre symbol: 0, 1 or -1.
    pub fn legendre(self, a: u32) -> i8 {
        match self.pow(a, (self.p as u64 - 1) / 2) {
            0 => 0,
            1 => 1,
            _ => -1,
        }
    }

    pub fn is_square(self, a: u32) -> bool {
        self.legendre(a) >= 0
    }

    /// Least positive quadratic nonresidue.
    pub fn least_nonsquare(self) -> u32 {
        (2..self.p).find(|&a| self.legendre(a) == -1).expect("odd p has nonsquares")
    }

    /// `-1 mod p`.
    pub fn minus_one(self) -> u32 {
        self.p - 1
    }
}

/// Polynomial over `F_p`, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpPoly {
    field: PrimeField,
    coeffs: Vec<u32>,
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Serialized as its display form, e.g. `"X^2 + 1"`.
impl serde::Serialize for FpPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "X")?,
                (1, _) => write!(f, "{c}X")?,
                (_, 1) => write!(f, "X^{i}")?,
                _ => write!(f, "{c}X^{i}")?,
            }
        }
        Ok(())
    }
}

impl FpPoly {
    pub fn new(field: PrimeField, coeffs: Vec<u32>) -> Self {
        let mut f = FpPoly {
            field,
            coeffs: coeffs.into_iter().map(|c| c % field.p).collect(),
        };
        f.normalize();
        f
    }

    pub fn from_i64s(field: PrimeField, coeffs: &[i64]) -> Self {
        FpPoly::new(field, coeffs.iter().map(|&c| field.reduce(c)).collect())
    }

    pub fn zero(field: PrimeField) -> Self {
        FpPoly { field, coeffs: vec![] }
    }

    pub fn constant(field: PrimeField, c: u32) -> Self {
        FpPoly::new(field, vec![c])
    }

    pub fn one(field: PrimeField) -> Self {
        FpPoly::constant(field, 1)
    }

    pub fn x(field: PrimeField) -> Self {
        FpPoly::new(field, vec![0, 1])
    }

    /// `X - a`.
    pub fn linear(field: PrimeField, a: u32) -> Self {
        FpPoly::new(field, vec![field.neg(a % field.p), 1])
    }

    /// The monic polynomial of degree `d` whose lower coefficients are the
    /// base-`p` digits of `index` (least significant first).
    pub fn monic_from_index(field: PrimeField, d: usize, mut index: u64) -> Self {
        let mut c = Vec::with_capacity(d + 1);
        for _ in 0..d {
            c.push((index % field.p as u64) as u32);
            index /= field.p as u64;
        }
        c.push(1);
        FpPoly { field, coeffs: c }
    }

    /// Inverse of `monic_from_index` (the leading coefficient is ignored).
    pub fn index(&self) -> u64 {
        let d = self.coeffs.len().saturating_sub(1);
        self.coeffs[..d]
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.field.p as u64 + c as u64)
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn add(&self, o: &FpPoly) -> FpPoly {
        let f = self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        FpPoly::new(
            f,
            (0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect(),
        )
    }

    pub fn sub(&self, o: &FpPoly) -> FpPoly {
        let f = self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        FpPoly::new(
            f,
            (0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect(),
        )
    }

    pub fn neg(&self) -> FpPoly {
        let f = self.field;
        FpPoly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: u32) -> FpPoly {
        let f = self.field;
        FpPoly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, o: &FpPoly) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(self.field);
        }
        let p = self.field.p as u64;
        let mut acc = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                acc[i + j] += a as u64 * b as u64;
            }
        }
        FpPoly::new(self.field, acc.into_iter().map(|c| (c % p) as u32).collect())
    }

    pub fn pow(&self, e: usize) -> FpPoly {
        (0..e).fold(FpPoly::one(self.field), |acc, _| acc.mul(self))
    }

    /// Euclidean division; the divisor must be nonzero.
    pub fn divmod(&self, d: &FpPoly) -> Result<(FpPoly, FpPoly)> {
        let f = self.field;
        let dd = d.degree().ok_or(Error::ZeroInverse)?;
        let inv_lead = f.inv(d.lead())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((FpPoly::zero(f), self.clone()));
        }
        let mut quo = vec![0u32; rem.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = f.mul(rem[k + dd], inv_lead);
            quo[k] = c;
            if c != 0 {
                for (i, &b) in d.coeffs.iter().enumerate() {
                    rem[k + i] = f.sub(rem[k + i], f.mul(c, b));
                }
            }
        }
        rem.truncate(dd);
        Ok((FpPoly::new(f, quo), FpPoly::new(f, rem)))
    }

    pub fn rem(&self, d: &FpPoly) -> Result<FpPoly> {
        Ok(self.divmod(d)?.1)
    }

    /// Divides exactly, `None` if there is a remainder.
    pub fn div_exact(&self, d: &FpPoly) -> Option<FpPoly> {
        match self.divmod(d) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).expect("nonzero lead");
        self.scale(inv)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s)` with `g = gcd(self, m)` monic and `s * self = g mod m`.
    pub fn ext_gcd(&self, m: &FpPoly) -> (FpPoly, FpPoly) {
        let f = self.field;
        let (mut r0, mut r1) = (m.clone(), self.rem(m).expect("nonzero modulus"));
        let (mut s0, mut s1) = (FpPoly::zero(f), FpPoly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).expect("nonzero");
            let s = s0.sub(&q.mul(&s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.is_zero() {
            return (r0, s0);
        }
        let inv = f.inv(r0.lead()).expect("nonzero");
        (r0.scale(inv), s0.scale(inv))
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &FpPoly) -> Result<FpPoly> {
        let mut acc = FpPoly::one(self.field).rem(m)?;
        let base = self.rem(m)?;
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m)?;
            if e.bit(i) {
                acc = acc.mul(&base).rem(m)?;
            }
        }
        Ok(acc)
    }

    /// `f(-X)`, made monic.
    pub fn negate_var(&self) -> FpPoly {
        let f = self.field;
        FpPoly::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| if i % 2 == 1 { f.neg(c) } else { c })
                .collect(),
        )
        .monic()
    }

    /// `f(cX)`, made monic.
    pub fn scale_var(&self, c: u32) -> FpPoly {
        let f = self.field;
        let mut pw = 1;
        let mut out = Vec::with_capacity(self.coeffs.len());
        for &a in &self.coeffs {
            out.push(f.mul(a, pw));
            pw = f.mul(pw, c);
        }
        FpPoly::new(f, out).monic()
    }

    /// The monic reciprocal `X^d f(1/X) / f(0)`; needs `f(0) != 0`.
    pub fn reciprocal(&self) -> FpPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        FpPoly::new(self.field, c).monic()
    }

    pub fn is_self_reciprocal(&self) -> bool {
        self.coeff(0) != 0 && self.reciprocal() == self.monic()
    }

    /// Rabin's test.
    pub fn is_irreducible(&self) -> bool {
        let Some(d) = self.degree() else { return false };
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        let f = self.monic();
        let fld = self.field;
        let x = FpPoly::x(fld);
        let p = BigUint::from(fld.p);
        // X^{p^k} mod f for k = 1..=d by repeated p-th powers
        let mut powers = vec![x.clone()];
        for _ in 0..d {
            let last = powers.last().unwrap();
            powers.push(last.pow_mod(&p, &f).expect("nonzero"));
        }
        if powers[d] != x.rem(&f).unwrap() {
            return false;
        }
        prime_factors(d as u64).into_iter().all(|l| {
            let h = powers[d / l as usize].sub(&x);
            h.gcd(&f).is_one()
        })
    }
}

/// Distinct prime factors.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Number of monic irreducibles of degree `d` over `F_p`.
pub fn irreducible_count(p: u64, d: usize) -> u64 {
    let d = d as u64;
    let total: i128 = (1..=d)
        .filter(|e| d % e == 0)
        .map(|e| mobius(e) as i128 * (p as i128).pow((d / e) as u32))
        .sum();
    (total / d as i128) as u64
}

fn checked_pow(p: u64, d: usize) -> Option<u64> {
    p.checked_pow(d as u32)
}

/// All monic irreducibles of degree `d`, sorted by their index.
pub fn irreducibles(field: PrimeField, d: usize) -> Result<Vec<FpPoly>> {
    let table = irreducibles_upto(field, d)?;
    Ok(table.into_iter().nth(d).unwrap_or_default())
}

/// `out[k]` lists the monic irreducibles of degree `k` for `1 <= k <= d`.
pub fn irreducibles_upto(field: PrimeField, d: usize) -> Result<Vec<Vec<FpPoly>>> {
    if d == 0 {
        return Err(Error::Invalid("degree must be at least 1".into()));
    }
    let p = field.p as u64;
    if checked_pow(p, d).filter(|&s| s <= ENUM_LIMIT).is_none() {
        return Err(Error::CapExceeded(format!(
            "{p}^{d} candidates for irreducibles of degree {d}"
        )));
    }
    let mut out: Vec<Vec<FpPoly>> = vec![Vec::new()];
    for k in 1..=d {
        let size = p.pow(k as u32);
        let list = if size <= SIEVE_LIMIT {
            sieve_degree(field, k, &out)
        } else {
            (0..size)
                .map(|i| FpPoly::monic_from_index(field, k, i))
                .filter(|f| f.coeff(0) != 0 && f.is_irreducible())
                .collect()
        };
        debug_assert_eq!(list.len() as u64, irreducible_count(p, k));
        out.push(list);
    }
    Ok(out)
}

/// Marks every product `g * h` with `g` irreducible of degree `1..=k/2`.
fn sieve_degree(field: PrimeField, k: usize, lower: &[Vec<FpPoly>]) -> Vec<FpPoly> {
    let p = field.p as u64;
    let size = p.pow(k as u32) as usize;
    let mut composite = vec![false; size];
    for (m, irr) in lower.iter().enumerate().take(k / 2 + 1).skip(1) {
        let cof = p.pow((k - m) as u32);
        for g in irr {
            for h in 0..cof {
                let h = FpPoly::monic_from_index(field, k - m, h);
                composite[g.mul(&h).index() as usize] = true;
            }
        }
    }
    composite
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(i, _)| FpPoly::monic_from_index(field, k, i as u64))
        .collect()
}

/// Factorization into monic irreducibles with multiplicities, by trial
/// division with the supplied irreducible table (which must reach degree
/// `deg(f) / 2`). The leading coefficient is dropped.
pub fn factor_with(f: &FpPoly, table: &[Vec<FpPoly>]) -> Result<Vec<(FpPoly, usize)>> {
    let mut rest = f.monic();
    let mut out = Vec::new();
    let n = rest.deg();
    if table.len() <= n / 2 && n >= 2 {
        return Err(Error::CapExceeded(format!(
            "irreducible table up to degree {} cannot factor degree {n}",
            table.len().saturating_sub(1)
        )));
    }
    'outer: for (k, irr) in table.iter().enumerate().skip(1) {
        for g in irr {
            if 2 * k > rest.deg() {
                break 'outer;
            }
            let mut m = 0;
            while let Some(q) = rest.div_exact(g) {
                rest = q;
                m += 1;
            }
            if m > 0 {
                out.push((g.clone(), m));
            }
        }
    }
    if rest.deg() > 0 {
        out.push((rest, 1));
    }
    out.sort();
    Ok(out)
}

/// The field `F_p[X]/(f)` for `f` monic irreducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientRing {
    modulus: FpPoly,
}

impl QuotientRing {
    pub fn new(f: &FpPoly) -> Result<Self> {
        if !f.is_irreducible() {
            return Err(Error::Invalid(format!("{f} is not irreducible")));
        }
        Ok(QuotientRing { modulus: f.monic() })
    }

    pub fn modulus(&self) -> &FpPoly {
        &self.modulus
    }

    pub fn field(&self) -> PrimeField {
        self.modulus.field
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    /// Number of elements `p^d`.
    pub fn order(&self) -> BigUint {
        BigUint::from(self.field().p).pow(self.degree() as u32)
    }

    pub fn elem(&self, a: &FpPoly) -> FpPoly {
        a.rem(&self.modulus).expect("nonzero modulus")
    }

    /// The residue of `X`, a root of the modulus.
    pub fn root(&self) -> FpPoly {
        self.elem(&FpPoly::x(self.field()))
    }

    pub fn constant(&self, c: u32) -> FpPoly {
        FpPoly::constant(self.field(), c)
    }

    pub fn mul(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        self.elem(&a.mul(b))
    }

    pub fn add(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        a.add(b)
    }

    pub fn neg(&self, a: &FpPoly) -> FpPoly {
        a.neg()
    }

    pub fn inv(&self, a: &FpPoly) -> Result<FpPoly> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let (g, s) = a.ext_gcd(&self.modulus);
        debug_assert!(g.is_one());
        Ok(s)
    }

    pub fn pow(&self, a: &FpPoly, e: &BigUint) -> FpPoly {
        a.pow_mod(e, &self.modulus).expect("nonzero modulus")
    }

    pub fn pow_u64(&self, a: &FpPoly, e: u64) -> FpPoly {
        self.pow(a, &BigUint::from(e))
    }

    /// `r -> r^p`.
    pub fn frobenius(&self, a: &FpPoly) -> FpPoly {
        self.pow_u64(a, self.field().p as u64)
    }

    /// The distinct images `r, r^p, r^(p^2), ...`.
    pub fn conjugates(&self, r: &FpPoly) -> Vec<FpPoly> {
        let mut out = vec![r.clone()];
        loop {
            let next = self.frobenius(out.last().unwrap());
            if next == *r {
                return out;
            }
            out.push(next);
        }
    }

    /// Monic minimal polynomial of `r` over `F_p`.
    pub fn min_poly(&self, r: &FpPoly) -> FpPoly {
        let fld = self.field();
        // coefficients are elements of the quotient ring
        let mut acc: Vec<FpPoly> = vec![FpPoly::one(fld)];
        for c in self.conjugates(r) {
            let negc = c.neg();
            let mut next = vec![FpPoly::zero(fld); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i + 1] = next[i + 1].add(a);
                next[i] = next[i].add(&self.mul(a, &negc));
            }
            acc = next;
        }
        let coeffs = acc
            .iter()
            .map(|c| {
                assert!(c.deg() == 0, "minimal polynomial coefficient {c} outside F_p");
                c.coeff(0)
            })
            .collect();
        FpPoly::new(fld, coeffs)
    }

    /// `Some(s)` if `a` is the constant `s`.
    pub fn as_constant(&self, a: &FpPoly) -> Option<u32> {
        (a.deg() == 0).then(|| a.coeff(0))
    }
}

/// The quadratic extension `F_p[t]/(t^2 - n0)` with `n0` the least nonsquare.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fq2 {
    pub field: PrimeField,
    pub n0: u32,
}

/// `a + b t`.
pub type Fq2Elem = (u32, u32);

impl Fq2 {
    pub fn new(field: PrimeField) -> Self {
        Fq2 {
            field,
            n0: field.least_nonsquare(),
        }
    }

    pub fn mul(&self, x: Fq2Elem, y: Fq2Elem) -> Fq2Elem {
        let f = self.field;
        (
            f.add(f.mul(x.0, y.0), f.mul(self.n0, f.mul(x.1, y.1))),
            f.add(f.mul(x.0, y.1), f.mul(x.1, y.0)),
        )
    }

    pub fn add(&self, x: Fq2Elem, y: Fq2Elem) -> Fq2Elem {
        (self.field.add(x.0, y.0), self.field.add(x.1, y.1))
    }

    pub fn neg(&self, x: Fq2Elem) -> Fq2Elem {
        (self.field.neg(x.0), self.field.neg(x.1))
    }

    /// The `p`-power map, `t -> -t`.
    pub fn conj(&self, x: Fq2Elem) -> Fq2Elem {
        (x.0, self.field.neg(x.1))
    }

    pub fn pow(&self, x: Fq2Elem, mut e: u64) -> Fq2Elem {
        let mut acc = (1, 0);
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// All elements, in a fixed order.
    pub fn elements(&self) -> impl Iterator<Item = Fq2Elem> {
        let p = self.field.p();
        (0..p).flat_map(move |a| (0..p).map(move |b| (a, b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn rejects_bad_moduli() {
        for p in [0, 1, 2, 4, 9, 15] {
            assert_eq!(PrimeField::new(p), Err(Error::BadModulus(p)));
        }
    }

    #[test]
    fn small_irreducible_lists() {
        let f = f3();
        let one = irreducibles(f, 1).unwrap();
        assert_eq!(one.len(), 3);
        assert_eq!(irreducibles(f, 2).unwrap().len(), 3);
        assert_eq!(irreducibles(f, 3).unwrap().len(), 8);
        let quad: Vec<String> = irreducibles(f, 2).unwrap().iter().map(|g| g.to_string()).collect();
        assert_eq!(quad, ["X^2 + 1", "X^2 + X + 2", "X^2 + 2X + 2"]);
    }

    #[test]
    fn sieve_agrees_with_rabin_and_mobius() {
        for p in [3u32, 5, 7] {
            let f = PrimeField::new(p).unwrap();
            let table = irreducibles_upto(f, 4).unwrap();
            for (d, list) in table.iter().enumerate().skip(1) {
                assert_eq!(list.len() as u64, irreducible_count(p as u64, d));
                let brute = (0..(p as u64).pow(d as u32))
                    .map(|i| FpPoly::monic_from_index(f, d, i))
                    .filter(|g| g.is_irreducible())
                    .count();
                assert_eq!(brute, list.len());
            }
        }
    }

    #[test]
    fn enumerated_irreducibles_satisfy_the_frobenius_criterion() {
        let f = PrimeField::new(5).unwrap();
        let table = irreducibles_upto(f, 4).unwrap();
        let x = FpPoly::x(f);
        for (d, list) in table.iter().enumerate().skip(1) {
            for g in list {
                let full = x.pow_mod(&BigUint::from(5u32).pow(d as u32), g).unwrap();
                assert_eq!(full, x.rem(g).unwrap());
                for l in prime_factors(d as u64) {
                    let part = x
                        .pow_mod(&BigUint::from(5u32).pow(d as u32 / l as u32), g)
                        .unwrap();
                    assert_ne!(part, x.rem(g).unwrap());
                }
            }
        }
    }

    #[test]
    fn cap_is_refused() {
        let f = PrimeField::new(13).unwrap();
        assert!(matches!(irreducibles(f, 8), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn gaussian_integers_mod_three() {
        let f = f3();
        let r = QuotientRing::new(&FpPoly::from_i64s(f, &[1, 0, 1])).unwrap();
        let i = r.root();
        assert_eq!(r.min_poly(&i).to_string(), "X^2 + 1");
        assert_eq!(r.frobenius(&i), i.neg());
        // i = -(1+i)^2 and -1 = i^2 are squares in F_9, so i^((9-1)/2) = 1
        assert_eq!(r.pow_u64(&i, 4), r.constant(1));
        assert_eq!(r.mul(&i, &i), r.constant(2));
        assert!(r.inv(&FpPoly::zero(f)).is_err());
        let inv = r.inv(&i).unwrap();
        assert!(r.mul(&inv, &i).is_one());
    }

    #[test]
    fn factorization_round_trips() {
        let f = PrimeField::new(5).unwrap();
        let table = irreducibles_upto(f, 3).unwrap();
        let g = FpPoly::from_i64s(f, &[1, 1, 1]).pow(2).mul(&FpPoly::linear(f, 2));
        let fac = factor_with(&g, &table).unwrap();
        let back = fac
            .iter()
            .fold(FpPoly::one(f), |acc, (h, m)| acc.mul(&h.pow(*m)));
        assert_eq!(back, g);
        assert_eq!(fac.len(), 2);
    }

    #[test]
    fn fq2_conjugation_is_frobenius() {
        for p in [3, 5, 7] {
            let k = Fq2::new(PrimeField::new(p).unwrap());
            for x in k.elements() {
                assert_eq!(k.pow(x, p as u64), k.conj(x));
            }
        }
    }

    proptest! {
        #[test]
        fn frobenius_is_additive(a in proptest::collection::vec(0u32..5, 0..4),
                                 b in proptest::collection::vec(0u32..5, 0..4)) {
            let f = PrimeField::new(5).unwrap();
            let r = QuotientRing::new(&irreducibles(f, 4).unwrap()[7]).unwrap();
            let (a, b) = (r.elem(&FpPoly::new(f, a)), r.elem(&FpPoly::new(f, b)));
            prop_assert_eq!(r.frobenius(&a.add(&b)), r.frobenius(&a).add(&r.frobenius(&b)));
            prop_assert_eq!(r.frobenius(&r.mul(&a, &b)), r.mul(&r.frobenius(&a), &r.frobenius(&b)));
        }

        #[test]
        fn min_poly_degree_divides(a in proptest::collection::vec(0u32..3, 1..6)) {
            let f = PrimeField::new(3).unwrap();
            let r = QuotientRing::new(&irreducibles(f, 6).unwrap()[11]).unwrap();
            let x = r.elem(&FpPoly::new(f, a));
            let m = r.min_poly(&x);
            prop_assert_eq!(6 % m.deg(), 0);
            prop_assert!(m.is_irreducible());
            // m(x) = 0
            let mut acc = FpPoly::zero(f);
            for &c in m.coeffs().iter().rev() {
                acc = r.mul(&acc, &x).add(&FpPoly::constant(f, c));
            }
            prop_assert!(r.elem(&acc).is_zero());
        }

        #[test]
        fn divmod_reconstructs(a in proptest::collection::vec(0u32..7, 0..8),
                               b in proptest::collection::vec(0u32..7, 1..5)) {
            let f = PrimeField::new(7).unwrap();
            let (a, b) = (FpPoly::new(f, a), FpPoly::new(f, b));
            prop_assume!(!b.is_zero());
            let (q, r) = a.divmod(&b).unwrap();
            prop_assert_eq!(q.mul(&b).add(&r), a);
            prop_assert!(r.is_zero() || r.deg() < b.deg());
        }
    }
}
