//! Truncated power series in `X` whose coefficients are integer polynomials
//! in a formal symbol `q`.
//!
//! Everything is exact: coefficients are `BigInt`s and a series of truncation
//! `T` is arithmetic modulo `X^(T+1)`. Infinite products are built from their
//! factors with index `k <= T`; the remaining factors are `1 mod X^(T+1)`.

use crate::error::{Error, Result};
use crate::report::CheckReport;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;

/// Dense polynomial in `q` with integer coefficients, lowest degree first.
/// The zero polynomial is the empty vector.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CoeffPoly(Vec<BigInt>);

impl CoeffPoly {
    pub fn zero() -> Self {
        CoeffPoly(Vec::new())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        CoeffPoly::from_coeffs(vec![c.into()])
    }

    /// The monomial `q`.
    pub fn q() -> Self {
        CoeffPoly(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        CoeffPoly(coeffs)
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        CoeffPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// The value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.0.len() {
            0 => Some(BigInt::zero()),
            1 => Some(self.0[0].clone()),
            _ => None,
        }
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.0
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * q + c)
    }

    pub fn eval_i64(&self, q: i64) -> BigInt {
        self.eval(&BigInt::from(q))
    }

    fn normalize(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn add_assign(&mut self, other: &CoeffPoly) {
        if other.0.len() > self.0.len() {
            self.0.resize(other.0.len(), BigInt::zero());
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
        self.normalize();
    }

    pub fn sub_assign(&mut self, other: &CoeffPoly) {
        if other.0.len() > self.0.len() {
            self.0.resize(other.0.len(), BigInt::zero());
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a -= b;
        }
        self.normalize();
    }

    /// `self += a * b`.
    pub fn add_mul_assign(&mut self, a: &CoeffPoly, b: &CoeffPoly) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let len = a.0.len() + b.0.len() - 1;
        if len > self.0.len() {
            self.0.resize(len, BigInt::zero());
        }
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                self.0[i + j] += x * y;
            }
        }
        self.normalize();
    }

    pub fn scale(&self, c: &BigInt) -> CoeffPoly {
        CoeffPoly::from_coeffs(self.0.iter().map(|x| x * c).collect())
    }

    pub fn neg(&self) -> CoeffPoly {
        CoeffPoly(self.0.iter().map(|x| -x).collect())
    }

    pub fn mul(&self, other: &CoeffPoly) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        out.add_mul_assign(self, other);
        out
    }

    /// Exact division by an integer, `None` if some coefficient is not divisible.
    pub fn div_exact(&self, d: i64) -> Option<CoeffPoly> {
        let d = BigInt::from(d);
        let mut out = Vec::with_capacity(self.0.len());
        for c in &self.0 {
            let (quo, rem) = c.div_rem(&d);
            if !rem.is_zero() {
                return None;
            }
            out.push(quo);
        }
        Some(CoeffPoly(out))
    }
}

impl fmt::Display for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{i}")?,
            }
        }
        Ok(())
    }
}

/// A sign in `{+1, -1}`. Used for the parameter `u = (-1)^((q-1)/2)` and for
/// the sign of a substitution `X -> s X^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^((q-1)/2)` for odd `q`.
    pub fn for_q(q: u64) -> Sign {
        if q % 4 == 1 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn from_parity(bit: u64) -> Sign {
        if bit % 2 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn pow(self, n: usize) -> Sign {
        if n % 2 == 0 {
            Sign::Plus
        } else {
            self
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Power series truncated after `X^T`; `coeffs.len() == T + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSeries {
    coeffs: Vec<CoeffPoly>,
}

impl TSeries {
    pub fn zero(t: usize) -> Self {
        TSeries {
            coeffs: vec![CoeffPoly::zero(); t + 1],
        }
    }

    pub fn one(t: usize) -> Self {
        TSeries::monomial(t, CoeffPoly::constant(1), 0)
    }

    /// `c X^n` (zero if `n > t`).
    pub fn monomial(t: usize, c: CoeffPoly, n: usize) -> Self {
        let mut s = TSeries::zero(t);
        if n <= t {
            s.coeffs[n] = c;
        }
        s
    }

    /// Series with integer coefficients; entries beyond `t` are dropped.
    pub fn from_ints(t: usize, coeffs: &[i64]) -> Self {
        let mut s = TSeries::zero(t);
        for (n, &c) in coeffs.iter().enumerate().take(t + 1) {
            s.coeffs[n] = CoeffPoly::constant(c);
        }
        s
    }

    pub fn from_coeffs(t: usize, coeffs: Vec<CoeffPoly>) -> Self {
        let mut s = TSeries::zero(t);
        for (n, c) in coeffs.into_iter().enumerate().take(t + 1) {
            s.coeffs[n] = c;
        }
        s
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &CoeffPoly {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[CoeffPoly] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, n: usize, c: CoeffPoly) {
        self.coeffs[n] = c;
    }

    pub fn truncate(&self, t: usize) -> TSeries {
        let t = t.min(self.trunc());
        TSeries {
            coeffs: self.coeffs[..=t].to_vec(),
        }
    }

    pub fn add(&self, other: &TSeries) -> TSeries {
        let t = self.trunc().min(other.trunc());
        let mut out = self.truncate(t);
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            a.add_assign(b);
        }
        out
    }

    pub fn sub(&self, other: &TSeries) -> TSeries {
        let t = self.trunc().min(other.trunc());
        let mut out = self.truncate(t);
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            a.sub_assign(b);
        }
        out
    }

    pub fn neg(&self) -> TSeries {
        TSeries {
            coeffs: self.coeffs.iter().map(CoeffPoly::neg).collect(),
        }
    }

    pub fn scale(&self, c: i64) -> TSeries {
        let c = BigInt::from(c);
        TSeries {
            coeffs: self.coeffs.iter().map(|p| p.scale(&c)).collect(),
        }
    }

    pub fn scale_poly(&self, c: &CoeffPoly) -> TSeries {
        TSeries {
            coeffs: self.coeffs.iter().map(|p| p.mul(c)).collect(),
        }
    }

    pub fn mul(&self, other: &TSeries) -> TSeries {
        let t = self.trunc().min(other.trunc());
        let mut out = TSeries::zero(t);
        let nz: Vec<usize> = (0..=t).filter(|&j| !other.coeffs[j].is_zero()).collect();
        for i in 0..=t {
            let a = &self.coeffs[i];
            if a.is_zero() {
                continue;
            }
            for &j in &nz {
                if i + j > t {
                    break;
                }
                out.coeffs[i + j].add_mul_assign(a, &other.coeffs[j]);
            }
        }
        out
    }

    /// Multiplicative inverse; the constant term must be `+1` or `-1`.
    pub fn inv(&self) -> Result<TSeries> {
        let c0 = match self.coeffs[0].as_constant() {
            Some(c) if c.abs().is_one() => c,
            _ => return Err(Error::NonUnitConstant(self.coeffs[0].to_string())),
        };
        let t = self.trunc();
        let mut out = TSeries::zero(t);
        out.coeffs[0] = CoeffPoly::constant(c0.clone());
        let nz: Vec<usize> = (1..=t).filter(|&k| !self.coeffs[k].is_zero()).collect();
        for n in 1..=t {
            let mut acc = CoeffPoly::zero();
            for &k in &nz {
                if k > n {
                    break;
                }
                acc.add_mul_assign(&self.coeffs[k], &out.coeffs[n - k]);
            }
            // b_n = -c0 * sum, since 1/c0 = c0
            out.coeffs[n] = acc.scale(&(-&c0));
        }
        Ok(out)
    }

    /// Integer power; negative exponents go through `inv`.
    pub fn pow(&self, e: i32) -> Result<TSeries> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut out = TSeries::one(self.trunc());
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// The substitution `X -> sign * X^k`: `a_n` moves to index `n k` and is
    /// multiplied by `sign^n`.
    pub fn subst(&self, sign: Sign, k: usize) -> Result<TSeries> {
        if k == 0 {
            return Err(Error::ZeroExponent);
        }
        let t = self.trunc();
        let mut out = TSeries::zero(t);
        for n in 0..=t / k {
            let c = &self.coeffs[n];
            out.coeffs[n * k] = if sign.pow(n) == Sign::Minus {
                c.neg()
            } else {
                c.clone()
            };
        }
        Ok(out)
    }

    /// Exact division of every coefficient by `d`.
    pub fn div_exact(&self, d: i64) -> Result<TSeries> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for (n, c) in self.coeffs.iter().enumerate() {
            match c.div_exact(d) {
                Some(x) => out.push(x),
                None => {
                    return Err(Error::NonIntegral(format!(
                        "coefficient of X^{n} ({c}) is not divisible by {d}"
                    )))
                }
            }
        }
        Ok(TSeries { coeffs: out })
    }

    /// Multiply in place by `(1 - c X^k)^(-1)`.
    pub fn mul_geometric(&mut self, c: &CoeffPoly, k: usize) {
        let t = self.trunc();
        for n in k..=t {
            let (lo, hi) = self.coeffs.split_at_mut(n);
            let prev = &lo[n - k];
            if !prev.is_zero() {
                hi[0].add_mul_assign(c, prev);
            }
        }
    }

    /// Multiply in place by `(1 - c X^k)`.
    pub fn mul_binomial(&mut self, c: &CoeffPoly, k: usize) {
        let t = self.trunc();
        if k > t {
            return;
        }
        let negc = c.neg();
        for n in (k..=t).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(n);
            let prev = &lo[n - k];
            if !prev.is_zero() {
                hi[0].add_mul_assign(&negc, prev);
            }
        }
    }

    /// Evaluate every coefficient at the integer `q`.
    pub fn eval_q(&self, q: i64) -> Vec<BigInt> {
        self.coeffs.iter().map(|c| c.eval_i64(q)).collect()
    }

    /// Series with integer coefficients obtained by evaluating at `q`.
    pub fn specialize(&self, q: i64) -> TSeries {
        TSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| CoeffPoly::constant(c.eval_i64(q)))
                .collect(),
        }
    }

    /// First index where the two series differ (within the common truncation).
    pub fn first_difference(&self, other: &TSeries) -> Option<usize> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| a != b)
    }

    /// Integer coefficients as `i128`, failing on symbolic or oversized entries.
    pub fn to_i128(&self) -> Result<Vec<i128>> {
        self.coeffs
            .iter()
            .map(|c| {
                c.as_constant()
                    .and_then(|v| v.to_i128())
                    .ok_or_else(|| Error::Invalid(format!("coefficient {c} is not a small integer")))
            })
            .collect()
    }
}

impl fmt::Display for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})X^{n}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(X^{})", self.trunc() + 1)
    }
}

/// `prod_{k>=1} (1 - X^k)^(-1)`, the partition generating function.
pub fn make_psi(t: usize) -> TSeries {
    let mut s = TSeries::one(t);
    let one = CoeffPoly::constant(1);
    for k in 1..=t {
        s.mul_geometric(&one, k);
    }
    s
}

/// `prod_{k>=1} (1 - q X^k)^(-1)`.
pub fn make_psi_q(t: usize) -> TSeries {
    let mut s = TSeries::one(t);
    let q = CoeffPoly::q();
    for k in 1..=t {
        s.mul_geometric(&q, k);
    }
    s
}

/// `sum_{j in Z} X^(j^2)`.
pub fn make_theta(t: usize) -> TSeries {
    let mut s = TSeries::one(t);
    let two = CoeffPoly::constant(2);
    let mut j = 1;
    while j * j <= t {
        s.set_coeff(j * j, two.clone());
        j += 1;
    }
    s
}

/// `psi(sign * X^k)`.
pub fn psi_at(t: usize, sign: Sign, k: usize) -> TSeries {
    make_psi(t).subst(sign, k).expect("k >= 1")
}

/// `psi(sign * X^k)^(-1) = prod_j (1 - sign^j X^(jk))`.
pub fn psi_inv_at(t: usize, sign: Sign, k: usize) -> TSeries {
    let mut s = TSeries::one(t);
    for j in 1..=t / k {
        s.mul_binomial(&CoeffPoly::constant(sign.pow(j).value()), j * k);
    }
    s
}

/// Closed-form series used by the verifications. The names describe the
/// left-hand side each closed form is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Rhs {
    /// Monic polynomials with nonzero constant term fixed by a Frobenius twist:
    /// `(1-qX)^-1 (1-X)`.
    FixedMonicCount,
    /// Fixed self-reciprocal polynomials: `(1-qX^2)^-1`.
    FixedPalindromicCount,
    /// Self-reciprocal polynomials fixed by negation and Frobenius:
    /// `(1-qX^4)^-1 (1+X^2)`.
    FixedEvenPalindromicCount,
    /// Orbit product with halved exponents on split orbits, untwisted:
    /// `(1-qX)^-1 (1-X)^3`.
    HalvedSplitOrbits,
    /// Same for the twisted Frobenius: `(1-qX)^-1 (1-X)(1-X^2)`.
    HalvedSplitOrbitsTwisted,
    /// Plain orbit product, untwisted: `(1-qX^2)^-1 (1-X^2)^2`.
    OrbitSizes,
    /// Plain orbit product, twisted: `(1-qX^2)^-1 (1-X^4)`.
    OrbitSizesTwisted,
    /// Orbit product signed by the single-cycle flag: `1 - X^2`.
    CycleSignedOrbits,
    /// Orbit product signed by cycle flag and quadratic character: `1 - uX^2`.
    EpsilonSignedOrbits,
    /// Orbits of the group generated by inversion, negation and Frobenius,
    /// excluding the square roots of -1: `(1-qX^4)^-1 (1-X^4)^2`.
    FullSymmetryOrbits,
    /// `psi(-X)^-2 psi(X^2)`, the product side of Jacobi's identity.
    JacobiProduct,
    /// `psi(X^2)^3 psi(X^4)^-1`, equal to `psi(-X) psi(X)`.
    SquaresProduct,
    /// `psi(X^2)^2 psi(-X^4)^-2 psi(X^8)`, equal to `2 Lambda + psi(X^4)`.
    TauSeries,
    /// `psi(X^4) psi(X^2) (psi(-X)^-1 + psi(X)^-1)`, equal to `2 tilde-Lambda`.
    TildeTauSeries,
    /// `(1/4) psi(X^4)^2 (y_1 + 3 y_-1)`: generating function of `xi + eta`.
    XiPlusEta,
    /// `psi(X^4)^2 y_-1`: generating function of `eta`.
    Eta,
    /// `psi(X^4)^2 y_1`: generating function of `4 xi + eta`.
    FourXiPlusEta,
    /// Closed form of the spin-side class-count difference.
    SpinDifference,
    /// The dual-side sum assembled from its unipotent and diagonal parts.
    DualDifference,
    /// Closed form of the diagonal (negation-fixed) dual contribution.
    DualDiagonal,
    /// `psi(X^2)^-1 psi(X^4) psi_q(X^4)`: each unipotent dual contribution.
    DualUnipotent,
}

impl Rhs {
    pub const ALL: [Rhs; 21] = [
        Rhs::FixedMonicCount,
        Rhs::FixedPalindromicCount,
        Rhs::FixedEvenPalindromicCount,
        Rhs::HalvedSplitOrbits,
        Rhs::HalvedSplitOrbitsTwisted,
        Rhs::OrbitSizes,
        Rhs::OrbitSizesTwisted,
        Rhs::CycleSignedOrbits,
        Rhs::EpsilonSignedOrbits,
        Rhs::FullSymmetryOrbits,
        Rhs::JacobiProduct,
        Rhs::SquaresProduct,
        Rhs::TauSeries,
        Rhs::TildeTauSeries,
        Rhs::XiPlusEta,
        Rhs::Eta,
        Rhs::FourXiPlusEta,
        Rhs::SpinDifference,
        Rhs::DualDifference,
        Rhs::DualDiagonal,
        Rhs::DualUnipotent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rhs::FixedMonicCount => "fixed_monic_count",
            Rhs::FixedPalindromicCount => "fixed_palindromic_count",
            Rhs::FixedEvenPalindromicCount => "fixed_even_palindromic_count",
            Rhs::HalvedSplitOrbits => "halved_split_orbits",
            Rhs::HalvedSplitOrbitsTwisted => "halved_split_orbits_twisted",
            Rhs::OrbitSizes => "orbit_sizes",
            Rhs::OrbitSizesTwisted => "orbit_sizes_twisted",
            Rhs::CycleSignedOrbits => "cycle_signed_orbits",
            Rhs::EpsilonSignedOrbits => "epsilon_signed_orbits",
            Rhs::FullSymmetryOrbits => "full_symmetry_orbits",
            Rhs::JacobiProduct => "jacobi_product",
            Rhs::SquaresProduct => "squares_product",
            Rhs::TauSeries => "tau_series",
            Rhs::TildeTauSeries => "tilde_tau_series",
            Rhs::XiPlusEta => "xi_plus_eta",
            Rhs::Eta => "eta",
            Rhs::FourXiPlusEta => "four_xi_plus_eta",
            Rhs::SpinDifference => "spin_difference",
            Rhs::DualDifference => "dual_difference",
            Rhs::DualDiagonal => "dual_diagonal",
            Rhs::DualUnipotent => "dual_unipotent",
        }
    }

    pub fn from_name(name: &str) -> Result<Rhs> {
        Rhs::ALL
            .into_iter()
            .find(|r| r.name() == name)
            .ok_or_else(|| Error::Invalid(format!("unknown identity tag `{name}`")))
    }
}

/// `(1 - c X^k)` as a series.
fn binomial(t: usize, c: i64, k: usize) -> TSeries {
    let mut s = TSeries::one(t);
    s.mul_binomial(&CoeffPoly::constant(c), k);
    s
}

/// `(1 - q X^k)^-1`.
fn geometric_q(t: usize, k: usize) -> TSeries {
    let mut s = TSeries::one(t);
    s.mul_geometric(&CoeffPoly::q(), k);
    s
}

/// `y_1 = psi(-X^4)^-2 psi(X^8)` and `y_-1 = psi(X^4)^-2 psi(X^8)`.
fn y_pair(t: usize) -> (TSeries, TSeries) {
    let p8 = psi_at(t, Sign::Plus, 8);
    let mut ym = psi_inv_at(t, Sign::Minus, 4);
    ym = ym.mul(&ym).mul(&p8);
    let mut yp = psi_inv_at(t, Sign::Plus, 4);
    yp = yp.mul(&yp).mul(&p8);
    (ym, yp)
}

/// Builds the named closed form. `u` only matters for the forms that
/// involve the sign `(-1)^((q-1)/2)`.
pub fn rhs_build(name: Rhs, u: Sign, t: usize) -> Result<TSeries> {
    let s = match name {
        Rhs::FixedMonicCount => geometric_q(t, 1).mul(&binomial(t, 1, 1)),
        Rhs::FixedPalindromicCount => geometric_q(t, 2),
        Rhs::FixedEvenPalindromicCount => geometric_q(t, 4).mul(&binomial(t, -1, 2)),
        Rhs::HalvedSplitOrbits => geometric_q(t, 1).mul(&binomial(t, 1, 1).pow(3)?),
        Rhs::HalvedSplitOrbitsTwisted => geometric_q(t, 1)
            .mul(&binomial(t, 1, 1))
            .mul(&binomial(t, 1, 2)),
        Rhs::OrbitSizes => geometric_q(t, 2).mul(&binomial(t, 1, 2).pow(2)?),
        Rhs::OrbitSizesTwisted => geometric_q(t, 2).mul(&binomial(t, 1, 4)),
        Rhs::CycleSignedOrbits => binomial(t, 1, 2),
        Rhs::EpsilonSignedOrbits => binomial(t, u.value(), 2),
        Rhs::FullSymmetryOrbits => geometric_q(t, 4).mul(&binomial(t, 1, 4).pow(2)?),
        Rhs::JacobiProduct => {
            let a = psi_inv_at(t, Sign::Minus, 1);
            a.mul(&a).mul(&psi_at(t, Sign::Plus, 2))
        }
        Rhs::SquaresProduct => psi_at(t, Sign::Plus, 2)
            .pow(3)?
            .mul(&psi_inv_at(t, Sign::Plus, 4)),
        Rhs::TauSeries => {
            let (y1, _) = y_pair(t);
            psi_at(t, Sign::Plus, 2).pow(2)?.mul(&y1)
        }
        Rhs::TildeTauSeries => {
            let sum = psi_inv_at(t, Sign::Minus, 1).add(&psi_inv_at(t, Sign::Plus, 1));
            psi_at(t, Sign::Plus, 4)
                .mul(&psi_at(t, Sign::Plus, 2))
                .mul(&sum)
        }
        Rhs::XiPlusEta => {
            let (y1, ym1) = y_pair(t);
            psi_at(t, Sign::Plus, 4)
                .pow(2)?
                .mul(&y1.add(&ym1.scale(3)))
                .div_exact(4)?
        }
        Rhs::Eta => {
            let (_, ym1) = y_pair(t);
            psi_at(t, Sign::Plus, 4).pow(2)?.mul(&ym1)
        }
        Rhs::FourXiPlusEta => {
            let (y1, _) = y_pair(t);
            psi_at(t, Sign::Plus, 4).pow(2)?.mul(&y1)
        }
        Rhs::SpinDifference => spin_difference(t, u),
        Rhs::DualDifference => {
            let unip = rhs_build(Rhs::DualUnipotent, u, t)?;
            let diag = dual_diagonal_unsimplified(t, u)?;
            unip.scale(2).add(&diag.scale(6))
        }
        Rhs::DualDiagonal => {
            let pq = make_psi_q(t).subst(Sign::Plus, 4)?;
            let pu = psi_at(t, u, 2);
            let (y1, _) = y_pair(t);
            let a = pu.mul(&y1);
            let b = psi_inv_at(t, u, 2).mul(&psi_at(t, Sign::Plus, 4));
            a.add(&b).div_exact(2)?.mul(&pq)
        }
        Rhs::DualUnipotent => {
            let pq = make_psi_q(t).subst(Sign::Plus, 4)?;
            psi_inv_at(t, Sign::Plus, 2)
                .mul(&psi_at(t, Sign::Plus, 4))
                .mul(&pq)
        }
    };
    Ok(s)
}

/// `3 psi_q(X^4) psi(uX^2) psi(-X^4)^-2 psi(X^8) + 3 psi_q(X^4) psi(uX^2)^-1 psi(X^4)
///  + 2 psi_q(X^4) psi(X^2)^-1 psi(X^4)`.
fn spin_difference(t: usize, u: Sign) -> TSeries {
    let (y1, _) = y_pair(t);
    let p4 = psi_at(t, Sign::Plus, 4);
    let a = psi_at(t, u, 2).mul(&y1);
    let b = psi_inv_at(t, u, 2).mul(&p4);
    let c = psi_inv_at(t, Sign::Plus, 2).mul(&p4);
    let integral = a.scale(3).add(&b.scale(3)).add(&c.scale(2));
    let pq = make_psi_q(t).subst(Sign::Plus, 4).expect("k >= 1");
    integral.mul(&pq)
}

/// The diagonal part before the final simplification:
/// `psi_q(X^4) psi(X^4)^-2 d'` with
/// `d' = (1/2) psi(uX^2) psi(X^4)^2 y_1 + (1/2) psi(-uX^2) psi(X^8)`.
fn dual_diagonal_unsimplified(t: usize, u: Sign) -> Result<TSeries> {
    let (y1, _) = y_pair(t);
    let p4sq = psi_at(t, Sign::Plus, 4).pow(2)?;
    let d1 = psi_at(t, u, 2).mul(&p4sq).mul(&y1);
    let d2 = psi_at(t, u.flip(), 2).mul(&psi_at(t, Sign::Plus, 8));
    let dprime = d1.add(&d2).div_exact(2)?;
    let pq = make_psi_q(t).subst(Sign::Plus, 4)?;
    Ok(pq.mul(&psi_inv_at(t, Sign::Plus, 4).pow(2)?).mul(&dprime))
}

/// Identities checked purely from series primitives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SeriesIdentity {
    /// `theta(X) = psi(-X)^-2 psi(X^2)`.
    Jacobi,
    /// `psi(-X) psi(X) = psi(X^2)^3 psi(X^4)^-1`.
    SquaresProduct,
    /// The dual-side closed form equals the spin-side closed form.
    DualEqualsSpin,
    /// The `eta` series has coefficient `pi(n/4)` at `X^(2n)`, and the
    /// `xi + eta` series agrees with `xi` extracted from the `4 xi + eta` one.
    XiEtaConsistency,
}

impl SeriesIdentity {
    pub const ALL: [SeriesIdentity; 4] = [
        SeriesIdentity::Jacobi,
        SeriesIdentity::SquaresProduct,
        SeriesIdentity::DualEqualsSpin,
        SeriesIdentity::XiEtaConsistency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesIdentity::Jacobi => "jacobi_theta",
            SeriesIdentity::SquaresProduct => "psi_squares_product",
            SeriesIdentity::DualEqualsSpin => "dual_rhs_equals_spin_rhs",
            SeriesIdentity::XiEtaConsistency => "xi_eta_consistency",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            SeriesIdentity::Jacobi => "sum_j X^(j^2) = psi(-X)^-2 psi(X^2)",
            SeriesIdentity::SquaresProduct => "psi(-X) psi(X) = psi(X^2)^3 psi(X^4)^-1",
            SeriesIdentity::DualEqualsSpin => {
                "dual-side sum a0 + a1 + 6d equals the spin-side closed form over Z[q]"
            }
            SeriesIdentity::XiEtaConsistency => {
                "eta_n = pi(n/4) and (xi+eta) series agrees with xi from the (4xi+eta) series"
            }
        }
    }
}

fn identity_sides(name: SeriesIdentity, u: Sign, t: usize) -> Result<(TSeries, TSeries)> {
    Ok(match name {
        SeriesIdentity::Jacobi => (make_theta(t), rhs_build(Rhs::JacobiProduct, u, t)?),
        SeriesIdentity::SquaresProduct => (
            psi_at(t, Sign::Minus, 1).mul(&make_psi(t)),
            rhs_build(Rhs::SquaresProduct, u, t)?,
        ),
        SeriesIdentity::DualEqualsSpin => (
            rhs_build(Rhs::DualDifference, u, t)?,
            rhs_build(Rhs::SpinDifference, u, t)?,
        ),
        SeriesIdentity::XiEtaConsistency => {
            let eta_direct = eta_series(t);
            let eta = rhs_build(Rhs::Eta, u, t)?;
            let table = xi_eta(t / 2)?;
            let mut direct_sum = TSeries::zero(t);
            for row in &table {
                if 2 * row.n <= t {
                    direct_sum.set_coeff(2 * row.n, CoeffPoly::constant(row.xi + row.eta));
                }
            }
            let lhs = eta_direct.add(&direct_sum);
            let rhs = eta.add(&rhs_build(Rhs::XiPlusEta, u, t)?);
            (lhs, rhs)
        }
    })
}

/// `sum_n pi(n/4) X^(2n)`.
fn eta_series(t: usize) -> TSeries {
    let psi = make_psi(t / 8 + 1);
    let mut s = TSeries::zero(t);
    let mut m = 0;
    while 8 * m <= t {
        s.set_coeff(8 * m, psi.coeff(m).clone());
        m += 1;
    }
    s
}

/// Coefficient-wise comparison modulo `X^(T+1)` of the two sides of `name`.
pub fn verify_series_identity(name: SeriesIdentity, u: Sign, t: usize) -> CheckReport {
    CheckReport::timed(|| {
        let base = CheckReport::new(format!("series.{}", name.name()), name.statement())
            .param("u", u)
            .param("trunc", t);
        match identity_sides(name, u, t) {
            Err(e) => base.outcome(false, "well-formed series", e),
            Ok((lhs, rhs)) => match lhs.first_difference(&rhs) {
                None => base.outcome(true, format!("equal to X^{t}"), format!("equal to X^{t}")),
                Some(n) => base.outcome(
                    false,
                    format!("X^{n}: {}", rhs.coeff(n)),
                    format!("X^{n}: {}", lhs.coeff(n)),
                ),
            },
        }
    })
}

/// One row of the `(xi_n, eta_n)` table, `n` even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct XiEta {
    pub n: usize,
    pub xi: i128,
    pub eta: i128,
}

/// `eta_n = pi(n/4)` and `xi_n = (c_n - eta_n)/4` where `c_n` is the
/// coefficient of `X^(2n)` in `psi(X^4)^2 y_1`.
pub fn xi_eta(n_max: usize) -> Result<Vec<XiEta>> {
    let t = 2 * n_max;
    let c = rhs_build(Rhs::FourXiPlusEta, Sign::Plus, t)?.to_i128()?;
    let pi = partition_numbers(n_max / 4 + 1);
    let mut out = Vec::new();
    for n in (0..=n_max).step_by(2) {
        let eta = if n % 4 == 0 { pi[n / 4] } else { 0 };
        let four_xi = c[2 * n] - eta;
        if four_xi % 4 != 0 {
            return Err(Error::NonIntegral(format!("xi_{n} from coefficient {}", c[2 * n])));
        }
        let xi = four_xi / 4;
        if xi < 0 {
            return Err(Error::NonIntegral(format!("xi_{n} = {xi} is negative")));
        }
        out.push(XiEta { n, xi, eta });
    }
    Ok(out)
}

/// `pi(0), ..., pi(n)` by the standard coin-change recurrence.
pub fn partition_numbers(n: usize) -> Vec<i128> {
    let mut p = vec![0i128; n + 1];
    p[0] = 1;
    for k in 1..=n {
        for m in k..=n {
            p[m] += p[m - k];
        }
    }
    p
}

/// `pi(x)` for a rational `x = num/den`, zero unless `x` is a natural number.
pub fn pi_frac(table: &[i128], num: usize, den: usize) -> i128 {
    if num % den != 0 {
        0
    } else {
        table[num / den]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Partition count by explicit enumeration of non-increasing part lists.
    fn count_partitions(n: usize, max_part: usize) -> usize {
        if n == 0 {
            return 1;
        }
        (1..=max_part.min(n))
            .map(|k| count_partitions(n - k, k))
            .sum()
    }

    fn ints(s: &TSeries) -> Vec<i64> {
        s.to_i128().unwrap().into_iter().map(|x| x as i64).collect()
    }

    #[test]
    fn geometric_inverse() {
        let s = TSeries::from_ints(6, &[1, -1]).inv().unwrap();
        assert_eq!(ints(&s), vec![1; 7]);
    }

    #[test]
    fn inverse_rejects_non_unit() {
        let s = TSeries::from_ints(4, &[2, 1]);
        assert!(matches!(s.inv(), Err(Error::NonUnitConstant(_))));
        let sym = TSeries::from_coeffs(4, vec![CoeffPoly::q()]);
        assert!(sym.inv().is_err());
    }

    #[test]
    fn subst_examples() {
        let s = TSeries::from_ints(4, &[1, 1]).subst(Sign::Minus, 2).unwrap();
        assert_eq!(ints(&s), vec![1, 0, -1, 0, 0]);
        assert_eq!(
            TSeries::one(3).subst(Sign::Plus, 0),
            Err(Error::ZeroExponent)
        );
    }

    #[test]
    fn psi_inverse_matches_naive_convolution() {
        // naive oracle: invert psi by solving sum_k p(k) b(n-k) = [n == 0]
        let t = 30;
        let p: Vec<i64> = (0..=t).map(|n| count_partitions(n, n) as i64).collect();
        let mut b = vec![0i64; t + 1];
        b[0] = 1;
        for n in 1..=t {
            b[n] = -(1..=n).map(|k| p[k] * b[n - k]).sum::<i64>();
        }
        let inv = make_psi(t).inv().unwrap();
        assert_eq!(ints(&inv), b);
        assert_eq!(&b[..8], &[1, -1, -1, 0, 0, 1, 0, 1]);
    }

    #[test]
    fn psi_matches_partition_enumeration() {
        let psi = make_psi(20);
        for n in 0..=20 {
            assert_eq!(
                psi.coeff(n).as_constant().unwrap(),
                BigInt::from(count_partitions(n, n))
            );
        }
        assert_eq!(psi.coeff(5), &CoeffPoly::constant(7));
    }

    #[test]
    fn psi_q_low_order() {
        let s = make_psi_q(6);
        assert_eq!(s.coeff(0), &CoeffPoly::constant(1));
        assert_eq!(s.coeff(1), &CoeffPoly::q());
        assert_eq!(s.coeff(2), &CoeffPoly::from_i64s(&[0, 1, 1]));
        for n in 1..=6 {
            assert_eq!(s.coeff(n).degree(), Some(n));
        }
        // at q = 1 it collapses to psi
        assert_eq!(s.specialize(1), make_psi(6));
    }

    #[test]
    fn theta_low_order() {
        assert_eq!(ints(&make_theta(9))[..5], [1, 2, 0, 0, 2]);
        assert_eq!(ints(&make_theta(9))[9], 2);
    }

    #[test]
    fn spin_difference_low_coefficients() {
        for u in Sign::BOTH {
            let s = rhs_build(Rhs::SpinDifference, u, 8).unwrap();
            assert_eq!(s.coeff(0), &CoeffPoly::constant(8));
            assert_eq!(s.coeff(2), &CoeffPoly::constant(-2));
            assert_eq!(s.coeff(4), &CoeffPoly::from_i64s(&[12, 8]));
            assert!(s.coeff(1).is_zero() && s.coeff(3).is_zero());
        }
    }

    #[test]
    fn xi_eta_small_values() {
        let t = xi_eta(8).unwrap();
        assert_eq!((t[0].xi, t[0].eta), (0, 1));
        assert_eq!((t[1].xi, t[1].eta), (1, 0));
        assert_eq!(t[2].eta, 1);
    }

    #[test]
    fn identities_hold_at_moderate_truncation() {
        for id in SeriesIdentity::ALL {
            for u in Sign::BOTH {
                let r = verify_series_identity(id, u, 48);
                assert!(r.passed(), "{r}");
            }
        }
    }

    #[test]
    fn closed_forms_are_registered_and_named_uniquely() {
        for r in Rhs::ALL {
            assert_eq!(Rhs::from_name(r.name()).unwrap(), r);
            assert!(rhs_build(r, Sign::Minus, 12).is_ok());
        }
        assert!(Rhs::from_name("nope").is_err());
    }

    #[test]
    fn coeff_poly_display() {
        assert_eq!(CoeffPoly::from_i64s(&[12, 8]).to_string(), "8q + 12");
        assert_eq!(CoeffPoly::from_i64s(&[0, -1, 1]).to_string(), "q^2 - q");
        assert_eq!(CoeffPoly::zero().to_string(), "0");
    }

    fn small_series(t: usize) -> impl Strategy<Value = TSeries> {
        proptest::collection::vec(proptest::collection::vec(-5i64..=5, 0..3), t + 1)
            .prop_map(move |cs| {
                TSeries::from_coeffs(t, cs.iter().map(|c| CoeffPoly::from_i64s(c)).collect())
            })
    }

    proptest! {
        #[test]
        fn subst_is_ring_homomorphism(a in small_series(12), b in small_series(12),
                                      k in 1usize..4, neg in any::<bool>()) {
            let s = if neg { Sign::Minus } else { Sign::Plus };
            let lhs = a.mul(&b).subst(s, k).unwrap();
            let rhs = a.subst(s, k).unwrap().mul(&b.subst(s, k).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn inverse_is_two_sided(mut a in small_series(10), neg in any::<bool>()) {
            a.set_coeff(0, CoeffPoly::constant(if neg { -1 } else { 1 }));
            let inv = a.inv().unwrap();
            prop_assert_eq!(a.mul(&inv), TSeries::one(10));
            prop_assert_eq!(inv.mul(&a), TSeries::one(10));
        }

        #[test]
        fn psi_times_inverse_is_one(t in 0usize..80) {
            let p = make_psi(t);
            prop_assert_eq!(p.mul(&p.inv().unwrap()), TSeries::one(t));
        }

        #[test]
        fn mixed_truncation_uses_minimum(t1 in 0usize..10, t2 in 0usize..10) {
            let a = make_psi(t1);
            let b = make_psi(t2);
            prop_assert_eq!(a.mul(&b).trunc(), t1.min(t2));
            prop_assert_eq!(a.add(&b).trunc(), t1.min(t2));
        }
    }
}
