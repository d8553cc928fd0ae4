//! Characteristic-polynomial data `Delta`: monic polynomials with nonzero
//! constant term, fixed by a Frobenius twist, grouped into orbit blocks.
//!
//! Coordinates. A `gamma`-fixed polynomial has coefficients in `F_p` and is
//! stored as is. A `gamma_1`-fixed polynomial `D(X)` has odd-index
//! coefficients in `s F_p` (`s^2 = n0`, the least nonsquare); it is stored
//! through `s^(-N) D(sY)`, which lies in `F_p[Y]`. In that coordinate
//! inversion becomes `y -> 1/(n0 y)`, negation stays negation, and the
//! eigenvalues `+-1` become the roots of `Y^2 - 1/n0`.

pub mod torsor;

use crate::error::{Error, Result};
use crate::fqpoly::{factor_with, irreducibles_upto, FpPoly, PrimeField, QuotientRing};
use crate::orbits::{CensusSet, Group, Kind, OrbitSig, Twist};
use crate::report::CheckReport;
use serde::Serialize;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

/// Which fixed-point set is enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DeltaClass {
    /// Every monic polynomial with nonzero constant term.
    Monic,
    /// Inversion-stable with even multiplicity at `+-1`.
    Reciprocal,
    /// Inversion-stable without eigenvalues `+-1`.
    ReciprocalNoUnit,
    /// Inversion-stable, even multiplicities at `+-1`, and negation-stable.
    NegationFixed,
}

impl DeltaClass {
    pub const ALL: [DeltaClass; 4] = [
        DeltaClass::Monic,
        DeltaClass::Reciprocal,
        DeltaClass::ReciprocalNoUnit,
        DeltaClass::NegationFixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DeltaClass::Monic => "monic",
            DeltaClass::Reciprocal => "reciprocal",
            DeltaClass::ReciprocalNoUnit => "reciprocal_no_unit",
            DeltaClass::NegationFixed => "negation_fixed",
        }
    }

    /// The closed-form size of the class in degree `n`.
    pub fn expected_count(self, q: u64, n: usize) -> u64 {
        match self {
            DeltaClass::Monic if n == 0 => 1,
            DeltaClass::Monic => q.pow(n as u32) - q.pow(n as u32 - 1),
            _ if n % 2 == 1 => 0,
            DeltaClass::Reciprocal => q.pow(n as u32 / 2),
            DeltaClass::NegationFixed if n % 4 == 0 => q.pow(n as u32 / 4),
            DeltaClass::NegationFixed => q.pow((n as u32 - 2) / 4),
            // not a closed form of its own; derived from the unit split
            DeltaClass::ReciprocalNoUnit => unreachable!("no closed form for the unit-free class"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    Direct,
    CensusDp,
}

/// One inversion orbit of roots, seen through an irreducible factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Block {
    /// The smaller of the factor and its inversion partner.
    pub factor: FpPoly,
    /// Product of the factor and its partner (just the factor when they agree).
    pub canonical: FpPoly,
    pub kind: Kind,
    pub size: usize,
    pub mult: usize,
    pub contains_j: bool,
    /// Only in the untwisted coordinate.
    pub eps: Option<u8>,
}

/// An element of the reciprocal class in either coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Delta {
    pub twist: Twist,
    /// Expanded polynomial in the coordinate of `twist`.
    pub poly: FpPoly,
    /// Irreducible factorization (all factors, including the unit ones).
    pub factors: Vec<(FpPoly, usize)>,
    pub blocks: Vec<Block>,
    pub n1: usize,
    pub nm1: usize,
}

impl Delta {
    pub fn degree(&self) -> usize {
        self.poly.deg()
    }

    pub fn is_unit_free(&self) -> bool {
        self.n1 == 0 && self.nm1 == 0
    }

    /// Number of nonzero multiplicities among `n1, nm1`.
    pub fn k(&self) -> usize {
        usize::from(self.n1 > 0) + usize::from(self.nm1 > 0)
    }

    pub fn j(&self) -> u8 {
        (self
            .blocks
            .iter()
            .filter(|b| b.kind == Kind::Single)
            .map(|b| b.mult)
            .sum::<usize>()
            % 2) as u8
    }

    pub fn nj(&self) -> usize {
        self.blocks.iter().find(|b| b.contains_j).map_or(0, |b| b.mult)
    }

    pub fn orbit_mults(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().map(|b| b.mult)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaInvariants {
    pub j0: Option<u8>,
    pub j1: Option<u8>,
    pub eps: Option<u8>,
    pub nj: usize,
}

/// Invariant profile used to compare enumeration methods.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Profile {
    pub degree: usize,
    pub n1: usize,
    pub nm1: usize,
    pub j: Option<u8>,
    pub eps: Option<u8>,
    pub nj: Option<usize>,
}

/// Prime-field context: irreducible tables, coordinate constants and a cache
/// of orbit signs.
pub struct DeltaSpace {
    field: PrimeField,
    n0: u32,
    max_degree: usize,
    table: Vec<Vec<FpPoly>>,
    eps_cache: RefCell<HashMap<FpPoly, u8>>,
}

impl DeltaSpace {
    /// Supports polynomials up to degree `max_degree`.
    pub fn new(p: u32, max_degree: usize) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let table = irreducibles_upto(field, (max_degree / 2).max(1))?;
        Ok(DeltaSpace {
            field,
            n0: field.least_nonsquare(),
            max_degree,
            table,
            eps_cache: RefCell::new(HashMap::new()),
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn q(&self) -> u64 {
        self.field.p() as u64
    }

    pub fn n0(&self) -> u32 {
        self.n0
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    fn coord_scale(&self, t: Twist) -> u32 {
        match t {
            Twist::Plain => 1,
            Twist::Twisted => self.n0,
        }
    }

    /// The polynomial whose roots are the eigenvalues `+-1` (plain: two
    /// linear factors; twisted: one quadratic).
    pub fn unit_factors(&self, t: Twist) -> Vec<FpPoly> {
        let f = self.field;
        match t {
            Twist::Plain => vec![FpPoly::linear(f, 1), FpPoly::linear(f, f.minus_one())],
            Twist::Twisted => {
                let c = f.inv(self.n0).expect("nonzero");
                vec![FpPoly::new(f, vec![f.neg(c), 0, 1])]
            }
        }
    }

    /// The polynomial of the square roots of -1 in the coordinate of `t`.
    pub fn j_poly(&self, t: Twist) -> FpPoly {
        let f = self.field;
        let c = f.inv(self.coord_scale(t)).expect("nonzero");
        FpPoly::new(f, vec![c, 0, 1])
    }

    /// Image of the roots under inversion, as a monic polynomial.
    pub fn partner(&self, t: Twist, g: &FpPoly) -> FpPoly {
        let c = self.field.inv(self.coord_scale(t)).expect("nonzero");
        g.scale_var(c).reciprocal()
    }

    /// Coefficient test for inversion-stability without allocation:
    /// `d_(n-k) = d_k d_0 c^(n-k)`.
    fn is_inversion_stable(&self, t: Twist, d: &[u32]) -> bool {
        let f = self.field;
        let n = d.len() - 1;
        if d[0] == 0 {
            return false;
        }
        let c = self.coord_scale(t);
        let mut pw = 1u32;
        // pw = c^(n-k) for k running down from n
        let mut lhs_ok = true;
        for k in (0..=n).rev() {
            if f.mul(f.mul(d[k], d[0]), pw) != d[n - k] {
                lhs_ok = false;
                break;
            }
            pw = f.mul(pw, c);
        }
        lhs_ok
    }

    fn multiplicity(&self, poly: &FpPoly, g: &FpPoly) -> usize {
        let mut m = 0;
        let mut rest = poly.clone();
        while let Some(r) = rest.div_exact(g) {
            rest = r;
            m += 1;
        }
        m
    }

    fn unit_mults(&self, t: Twist, poly: &FpPoly) -> (usize, usize) {
        let u = self.unit_factors(t);
        match t {
            Twist::Plain => (self.multiplicity(poly, &u[0]), self.multiplicity(poly, &u[1])),
            Twist::Twisted => {
                let m = self.multiplicity(poly, &u[0]);
                (m, m)
            }
        }
    }

    /// Class membership of a monic polynomial in the coordinate of `t`.
    pub fn is_member(&self, t: Twist, poly: &FpPoly, class: DeltaClass) -> bool {
        let d = poly.coeffs();
        if !poly.is_monic() || d[0] == 0 {
            return false;
        }
        if class == DeltaClass::Monic {
            return true;
        }
        if !self.is_inversion_stable(t, d) {
            return false;
        }
        let (n1, nm1) = self.unit_mults(t, poly);
        match class {
            DeltaClass::Monic => true,
            DeltaClass::Reciprocal => n1 % 2 == 0 && nm1 % 2 == 0,
            DeltaClass::ReciprocalNoUnit => n1 == 0 && nm1 == 0,
            DeltaClass::NegationFixed => {
                n1 % 2 == 0 && nm1 % 2 == 0 && poly.negate_var() == *poly
            }
        }
    }

    /// Visits every monic coefficient vector of degree `n` in the coordinate
    /// of `t` and keeps the members of `class`.
    pub fn scan(&self, t: Twist, n: usize, class: DeltaClass, mut visit: impl FnMut(&FpPoly)) -> Result<()> {
        let f = self.field;
        let p = f.p();
        let total = (p as u64)
            .checked_pow(n as u32)
            .filter(|&s| s <= crate::fqpoly::ENUM_LIMIT)
            .ok_or_else(|| Error::CapExceeded(format!("{p}^{n} coefficient vectors")))?;
        let mut d = vec![0u32; n + 1];
        d[n] = 1;
        for _ in 0..total {
            let keep = d[0] != 0
                && (class == DeltaClass::Monic || self.is_inversion_stable(t, &d));
            if keep {
                let poly = FpPoly::new(f, d.clone());
                if self.is_member(t, &poly, class) {
                    visit(&poly);
                }
            }
            for slot in d.iter_mut().take(n) {
                *slot += 1;
                if *slot < p {
                    break;
                }
                *slot = 0;
            }
        }
        Ok(())
    }

    pub fn count_direct(&self, t: Twist, n: usize, class: DeltaClass) -> Result<u64> {
        let mut c = 0u64;
        self.scan(t, n, class, |_| c += 1)?;
        Ok(c)
    }

    /// All members of an inversion-stable class, as `Delta`s.
    pub fn enumerate(&self, t: Twist, n: usize, class: DeltaClass) -> Result<Vec<Delta>> {
        if class == DeltaClass::Monic {
            return Err(Error::Invalid("the monic class has no block structure".into()));
        }
        if n > self.max_degree {
            return Err(Error::CapExceeded(format!(
                "degree {n} beyond the space limit {}",
                self.max_degree
            )));
        }
        let mut polys = Vec::new();
        self.scan(t, n, class, |p| polys.push(p.clone()))?;
        polys.iter().map(|p| self.delta_from_poly(t, p)).collect()
    }

    pub fn delta_from_poly(&self, t: Twist, poly: &FpPoly) -> Result<Delta> {
        if poly.deg() > self.max_degree {
            return Err(Error::CapExceeded(format!("degree {}", poly.deg())));
        }
        let factors = factor_with(poly, &self.table)?;
        self.delta_from_factors(t, factors)
    }

    pub fn delta_from_factors(&self, t: Twist, mut factors: Vec<(FpPoly, usize)>) -> Result<Delta> {
        factors.sort();
        let field = self.field;
        let poly = factors
            .iter()
            .fold(FpPoly::one(field), |acc, (g, m)| acc.mul(&g.pow(*m)));
        let units = self.unit_factors(t);
        let mult_of = |g: &FpPoly| factors.iter().find(|(h, _)| h == g).map_or(0, |(_, m)| *m);
        let (n1, nm1) = match t {
            Twist::Plain => (mult_of(&units[0]), mult_of(&units[1])),
            Twist::Twisted => (mult_of(&units[0]), mult_of(&units[0])),
        };
        if n1 % 2 != 0 || nm1 % 2 != 0 {
            return Err(Error::NotFixed(format!("{poly}: odd multiplicity at +-1")));
        }
        let jp = self.j_poly(t);
        let mut blocks = Vec::new();
        for (g, m) in &factors {
            if units.contains(g) {
                continue;
            }
            if g.coeff(0) == 0 {
                return Err(Error::NotFixed(format!("{poly}: vanishes at 0")));
            }
            let h = self.partner(t, g);
            if mult_of(&h) != *m {
                return Err(Error::NotFixed(format!("{poly}: not inversion-stable")));
            }
            if h < *g {
                continue;
            }
            let (kind, canonical) = if h == *g {
                (Kind::Single, g.clone())
            } else {
                (Kind::Pair, g.mul(&h))
            };
            let eps = match t {
                Twist::Plain => Some(self.eps_of_factor(g, kind)?),
                Twist::Twisted => None,
            };
            blocks.push(Block {
                factor: g.clone(),
                size: canonical.deg(),
                canonical,
                kind,
                mult: *m,
                contains_j: jp.rem(g)?.is_zero(),
                eps,
            });
        }
        blocks.sort();
        Ok(Delta {
            twist: t,
            poly,
            factors,
            blocks,
            n1,
            nm1,
        })
    }

    /// `eps` of the orbit of a root of the irreducible `g` (untwisted).
    pub fn eps_of_factor(&self, g: &FpPoly, kind: Kind) -> Result<u8> {
        if let Some(&e) = self.eps_cache.borrow().get(g) {
            return Ok(e);
        }
        let f = self.field;
        let d = g.deg();
        let e = match kind {
            Kind::Single => {
                let ring = QuotientRing::new(g)?;
                crate::orbits::epsilon_of(&ring, &ring.root(), d, Kind::Single)?
            }
            Kind::Pair => {
                // the norm of a root is (-1)^d g(0)
                let norm = if d % 2 == 0 { g.coeff(0) } else { f.neg(g.coeff(0)) };
                u8::from(f.legendre(norm) == -1)
            }
        };
        self.eps_cache.borrow_mut().insert(g.clone(), e);
        Ok(e)
    }

    /// The negation image.
    pub fn beta(&self, d: &Delta) -> Result<Delta> {
        let factors = d
            .factors
            .iter()
            .map(|(g, m)| (g.negate_var(), *m))
            .collect();
        self.delta_from_factors(d.twist, factors)
    }

    pub fn is_beta_fixed(&self, d: &Delta) -> bool {
        d.poly.negate_var() == d.poly
    }

    /// Changes coordinate for a negation-stable `Delta` (fixed by both
    /// Frobenius twists): coefficient of `X^k` is multiplied by
    /// `c^((n-k)/2)` with `c = 1/n0` (to twisted) or `n0` (to plain).
    pub fn switch_coordinate(&self, d: &Delta) -> Result<Delta> {
        if !self.is_beta_fixed(d) {
            return Err(Error::NotFixed(format!("{} is not negation-stable", d.poly)));
        }
        let f = self.field;
        let (c, target) = match d.twist {
            Twist::Plain => (f.inv(self.n0)?, Twist::Twisted),
            Twist::Twisted => (self.n0, Twist::Plain),
        };
        let n = d.degree();
        let coeffs = (0..=n)
            .map(|k| f.mul(d.poly.coeff(k), f.pow(c, ((n - k) / 2) as u64)))
            .collect();
        self.delta_from_poly(target, &FpPoly::new(f, coeffs))
    }

    pub fn invariants(&self, d: &Delta) -> Result<DeltaInvariants> {
        let q = self.q();
        let other = if self.is_beta_fixed(d) {
            Some(self.switch_coordinate(d)?)
        } else {
            None
        };
        let (plain, twisted) = match d.twist {
            Twist::Plain => (Some(d), other.as_ref()),
            Twist::Twisted => (other.as_ref(), Some(d)),
        };
        let eps = plain.map(|p| {
            let s: usize = p.blocks.iter().map(|b| b.eps.unwrap_or(0) as usize * b.mult).sum();
            (((q - 1) as usize * p.nm1 / 4 + s) % 2) as u8
        });
        Ok(DeltaInvariants {
            j0: plain.map(Delta::j),
            j1: twisted.map(Delta::j),
            eps,
            nj: d.nj(),
        })
    }

    pub fn profile(&self, d: &Delta, class: DeltaClass) -> Result<Profile> {
        let inv = self.invariants(d)?;
        Ok(match class {
            DeltaClass::NegationFixed => Profile {
                degree: d.degree(),
                n1: d.n1,
                nm1: d.nm1,
                j: None,
                eps: None,
                nj: Some(inv.nj),
            },
            _ => Profile {
                degree: d.degree(),
                n1: d.n1,
                nm1: d.nm1,
                j: Some(d.j()),
                eps: inv.eps.filter(|_| d.twist == Twist::Plain),
                nj: Some(inv.nj),
            },
        })
    }

    /// Orbits of inversion, negation and Frobenius together, for a
    /// negation-stable untwisted `Delta`: (canonical polynomial, multiplicity,
    /// contains the square roots of -1).
    pub fn full_orbits(&self, d: &Delta) -> Result<Vec<(FpPoly, usize, bool)>> {
        if d.twist != Twist::Plain || !self.is_beta_fixed(d) {
            return Err(Error::NotFixed(format!("{} is not negation-stable", d.poly)));
        }
        let mut out: BTreeMap<FpPoly, (usize, bool)> = BTreeMap::new();
        for b in &d.blocks {
            let mut members = vec![b.factor.clone(), self.partner(Twist::Plain, &b.factor)];
            members.extend(members.clone().iter().map(FpPoly::negate_var).collect::<Vec<_>>());
            members.sort();
            members.dedup();
            let key = members
                .iter()
                .fold(FpPoly::one(self.field), |acc, g| acc.mul(g));
            out.insert(key, (b.mult, b.contains_j));
        }
        Ok(out.into_iter().map(|(k, (m, j))| (k, m, j)).collect())
    }
}

/// Knapsack over orbits: each orbit takes a multiplicity `m >= 0`, adding
/// `m * size` to the degree, updating a state and multiplying a weight.
/// Returns, per degree `<= n_max`, the weighted state tally.
pub fn orbit_dp<S, I, F, W>(orbits: I, n_max: usize, init: S, step: F, weight: W) -> Vec<BTreeMap<S, i128>>
where
    S: Ord + Clone,
    I: IntoIterator<Item = (OrbitSig, u64)>,
    F: Fn(&S, &OrbitSig, usize) -> S,
    W: Fn(usize) -> i128,
{
    let mut table: Vec<BTreeMap<S, i128>> = vec![BTreeMap::new(); n_max + 1];
    table[0].insert(init, 1);
    for (sig, count) in orbits {
        let s = sig.size;
        if s == 0 || s > n_max {
            continue;
        }
        for _ in 0..count {
            for deg in (s..=n_max).rev() {
                let mut add: Vec<(S, i128)> = Vec::new();
                for m in 1..=deg / s {
                    let w = weight(m);
                    if w == 0 {
                        continue;
                    }
                    for (st, &v) in &table[deg - m * s] {
                        add.push((step(st, &sig, m), v * w));
                    }
                }
                for (st, v) in add {
                    *table[deg].entry(st).or_default() += v;
                }
            }
        }
    }
    for row in &mut table {
        row.retain(|_, v| *v != 0);
    }
    table
}

/// Orbit part of a profile: (j, eps, nj).
type OrbitState = (u8, u8, usize);

fn orbit_state_dp(cs: &CensusSet, group: Group, n_max: usize) -> Vec<BTreeMap<OrbitState, i128>> {
    let census = cs.get(group);
    orbit_dp(
        census.orbits_upto(n_max).map(|(s, c)| (*s, c)),
        n_max,
        (0u8, 0u8, 0usize),
        |&(j, e, nj), sig, m| {
            let j = (j as usize + if sig.kind == Some(Kind::Single) { m } else { 0 }) % 2;
            let e = (e as usize + sig.eps.unwrap_or(0) as usize * m) % 2;
            (j as u8, e as u8, if sig.contains_j { m } else { nj })
        },
        |_| 1,
    )
}

/// Profile multiset from census counts alone.
pub fn profiles_dp(cs: &CensusSet, t: Twist, n: usize, class: DeltaClass) -> Result<BTreeMap<Profile, u64>> {
    if n > cs.cap {
        return Err(Error::CapExceeded(format!("degree {n} beyond census cap {}", cs.cap)));
    }
    let q = cs.p as usize;
    let mut out: BTreeMap<Profile, u64> = BTreeMap::new();
    let mut push = |p: Profile, c: i128| {
        if c != 0 {
            *out.entry(p).or_default() += c as u64;
        }
    };
    // unit multiplicity pairs allowed by the class
    let unit_pairs = |step: usize, tied: bool| -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for a in (0..=n).step_by(step) {
            if tied {
                if 2 * a <= n {
                    v.push((a, a));
                }
            } else {
                for b in (0..=n - a).step_by(step) {
                    v.push((a, b));
                }
            }
        }
        v
    };
    match class {
        DeltaClass::Monic => {
            let tab = orbit_dp(
                cs.get(Group::Frobenius(t)).orbits_upto(n).map(|(s, c)| (*s, c)),
                n,
                (),
                |_, _, _| (),
                |_| 1,
            );
            for (n1, nm1) in unit_pairs(1, t == Twist::Twisted) {
                let rest = n - n1 - nm1;
                if let Some(&c) = tab[rest].get(&()) {
                    push(
                        Profile { degree: n, n1, nm1, j: None, eps: None, nj: None },
                        c,
                    );
                }
            }
        }
        DeltaClass::Reciprocal | DeltaClass::ReciprocalNoUnit => {
            let tab = orbit_state_dp(cs, Group::InverseFrobenius(t), n);
            let pairs = if class == DeltaClass::ReciprocalNoUnit {
                vec![(0, 0)]
            } else {
                unit_pairs(2, t == Twist::Twisted)
            };
            for (n1, nm1) in pairs {
                let rest = n - n1 - nm1;
                for (&(j, e, nj), &c) in &tab[rest] {
                    let eps = match t {
                        Twist::Plain => Some(((e as usize + (q - 1) * nm1 / 4) % 2) as u8),
                        Twist::Twisted => None,
                    };
                    push(
                        Profile { degree: n, n1, nm1, j: Some(j), eps, nj: Some(nj) },
                        c,
                    );
                }
            }
        }
        DeltaClass::NegationFixed => {
            let census = cs.get(Group::Full);
            let tab = orbit_dp(
                census.orbits_upto(n).map(|(s, c)| (*s, c)),
                n,
                0usize,
                |&nj, sig, m| if sig.contains_j { m } else { nj },
                |_| 1,
            );
            for (n1, nm1) in unit_pairs(2, true) {
                let rest = n - n1 - nm1;
                for (&nj, &c) in &tab[rest] {
                    push(
                        Profile { degree: n, n1, nm1, j: None, eps: None, nj: Some(nj) },
                        c,
                    );
                }
            }
        }
    }
    Ok(out)
}

/// Profile multiset by enumerating coefficient vectors and factoring.
pub fn profiles_direct(space: &DeltaSpace, t: Twist, n: usize, class: DeltaClass) -> Result<BTreeMap<Profile, u64>> {
    let mut out = BTreeMap::new();
    if class == DeltaClass::Monic {
        space.scan(t, n, class, |p| {
            let (n1, nm1) = space.unit_mults(t, p);
            *out.entry(Profile { degree: n, n1, nm1, j: None, eps: None, nj: None })
                .or_default() += 1;
        })?;
        return Ok(out);
    }
    for d in space.enumerate(t, n, class)? {
        *out.entry(space.profile(&d, class)?).or_default() += 1;
    }
    Ok(out)
}

/// The count identities: every class size against its closed form, by
/// scanning coefficient vectors.
pub fn verify_counts(space: &DeltaSpace, n_max: usize) -> Vec<CheckReport> {
    let q = space.q();
    let mut out = Vec::new();
    for t in Twist::BOTH {
        for class in [DeltaClass::Monic, DeltaClass::Reciprocal, DeltaClass::NegationFixed] {
            for n in 1..=n_max {
                out.push(CheckReport::timed(|| {
                    let r = CheckReport::new(
                        format!("delta.count.{}", class.name()),
                        "size of the fixed class equals its closed form",
                    )
                    .param("q", q)
                    .param("e", t.bit())
                    .param("n", n);
                    match space.count_direct(t, n, class) {
                        Ok(c) => r.compare(class.expected_count(q, n), c),
                        Err(e) => r.outcome(false, class.expected_count(q, n), e),
                    }
                }));
            }
        }
    }
    out
}

/// `(x_(n;0), x_(n;1), x_n, [s_0, s_1])`: signed sums over the unit-free
/// reciprocal class; `s_e` uses the twisted class `e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignedSums {
    pub x0: i64,
    pub x1: i64,
    pub x: i64,
    pub s: [i64; 2],
}

pub fn signed_sums(space: &DeltaSpace, n: usize) -> Result<SignedSums> {
    let mut out = SignedSums { x0: 0, x1: 0, x: 0, s: [0, 0] };
    for t in Twist::BOTH {
        for d in space.enumerate(t, n, DeltaClass::ReciprocalNoUnit)? {
            let sign = if d.j() == 0 { 1 } else { -1 };
            out.s[t.bit() as usize] += sign;
            if t == Twist::Plain {
                let eps = space.invariants(&d)?.eps.expect("untwisted");
                if eps == 0 {
                    out.x0 += sign;
                    out.x += sign;
                } else {
                    out.x1 += sign;
                    out.x -= sign;
                }
            }
        }
    }
    Ok(out)
}

/// Closed values of the signed sums.
pub fn signed_sums_expected(q: u64, n: usize) -> SignedSums {
    let u: i64 = if q % 4 == 1 { 1 } else { -1 };
    match n {
        0 => SignedSums { x0: 1, x1: 0, x: 1, s: [1, 1] },
        2 => SignedSums { x0: (-1 - u) / 2, x1: (-1 + u) / 2, x: -u, s: [-1, -1] },
        _ => SignedSums { x0: 0, x1: 0, x: 0, s: [0, 0] },
    }
}

pub fn verify_signed_sums(space: &DeltaSpace, n: usize) -> CheckReport {
    CheckReport::timed(|| {
        let r = CheckReport::new(
            "delta.signed_sums",
            "signed sums of (-1)^j over unit-free reciprocal data, split by eps, take their closed values",
        )
        .param("q", space.q())
        .param("n", n);
        let exp = signed_sums_expected(space.q(), n);
        match signed_sums(space, n) {
            Ok(got) => r.compare(format!("{exp:?}"), format!("{got:?}")),
            Err(e) => r.outcome(false, format!("{exp:?}"), e),
        }
    })
}

/// The parity statement for data fixed by negation and Frobenius:
/// `j_e = n (q - (-1)^e) / 4 mod 2`.
pub fn negation_fixed_j_parity(space: &DeltaSpace, d: &Delta) -> Result<bool> {
    let q = space.q() as i64;
    let inv = space.invariants(d)?;
    let n = d.degree() as i64;
    let ok = |e: i64, j: Option<u8>| {
        let s = if e == 0 { 1 } else { -1 };
        j.map(|j| (n * (q - s) / 4).rem_euclid(2) == j as i64)
    };
    Ok(ok(0, inv.j0) == Some(true) && ok(1, inv.j1) == Some(true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::census_set;

    fn space(p: u32, n: usize) -> DeltaSpace {
        DeltaSpace::new(p, n).unwrap()
    }

    fn poly(p: u32, c: &[i64]) -> FpPoly {
        FpPoly::from_i64s(PrimeField::new(p).unwrap(), c)
    }

    #[test]
    fn small_counts() {
        let s = space(3, 6);
        assert_eq!(s.count_direct(Twist::Plain, 2, DeltaClass::Monic).unwrap(), 6);
        assert_eq!(s.count_direct(Twist::Plain, 4, DeltaClass::Reciprocal).unwrap(), 9);
        assert_eq!(s.count_direct(Twist::Plain, 6, DeltaClass::NegationFixed).unwrap(), 3);
        for t in Twist::BOTH {
            for n in [1, 3, 5] {
                assert_eq!(s.count_direct(t, n, DeltaClass::Reciprocal).unwrap(), 0);
            }
        }
    }

    #[test]
    fn counts_match_closed_forms() {
        for p in [3u32, 5] {
            let s = space(p, 6);
            for r in verify_counts(&s, 6) {
                assert!(r.passed(), "{r}");
            }
        }
    }

    #[test]
    fn invariants_examples() {
        let s = space(3, 8);
        let d = s.delta_from_poly(Twist::Plain, &poly(3, &[1, 0, 2, 0, 1])).unwrap();
        let inv = s.invariants(&d).unwrap();
        assert_eq!((inv.j0, inv.eps, inv.nj), (Some(0), Some(0), 2));
        for p in [3u32, 5, 7] {
            let s = space(p, 4);
            // (X-1)^2 (X+1)^2 = X^4 - 2X^2 + 1
            let d = s.delta_from_poly(Twist::Plain, &poly(p, &[1, 0, -2, 0, 1])).unwrap();
            let inv = s.invariants(&d).unwrap();
            assert_eq!((d.n1, d.nm1), (2, 2));
            assert_eq!(inv.j0, Some(0));
            assert_eq!(inv.eps, Some((((p - 1) / 2) % 2) as u8));
        }
        let one = s.delta_from_poly(Twist::Plain, &poly(3, &[1])).unwrap();
        let inv = s.invariants(&one).unwrap();
        assert_eq!((inv.j0, inv.j1, inv.eps, inv.nj), (Some(0), Some(0), Some(0), 0));
    }

    #[test]
    fn not_fixed_rejected() {
        let s = space(5, 4);
        assert!(matches!(
            s.delta_from_poly(Twist::Plain, &poly(5, &[2, 1])),
            Err(Error::NotFixed(_))
        ));
        assert!(matches!(
            s.delta_from_poly(Twist::Plain, &poly(5, &[-1, 1])),
            Err(Error::NotFixed(_))
        ));
    }

    #[test]
    fn twisted_units_and_j() {
        // at q = 3 the twisted square roots of -1 form a single cycle iff q = 1 mod 4: no
        let s = space(3, 4);
        for d in s.enumerate(Twist::Twisted, 2, DeltaClass::Reciprocal).unwrap() {
            if d.n1 > 0 {
                assert_eq!(d.poly, s.unit_factors(Twist::Twisted)[0]);
            }
        }
        let j = s.delta_from_poly(Twist::Twisted, &s.j_poly(Twist::Twisted)).unwrap();
        assert_eq!(j.nj(), 1);
        assert_eq!(j.blocks.len(), 1);
    }

    #[test]
    fn direct_and_census_profiles_agree() {
        for (p, n_max) in [(3u32, 8usize), (5, 6), (7, 4)] {
            let s = space(p, n_max);
            let cs = census_set(p, n_max).unwrap();
            for t in Twist::BOTH {
                for class in DeltaClass::ALL {
                    for n in 0..=n_max {
                        let a = profiles_direct(&s, t, n, class).unwrap();
                        let b = profiles_dp(&cs, t, n, class).unwrap();
                        assert_eq!(a, b, "p={p} e={} n={n} {class:?}", t.bit());
                    }
                }
            }
        }
    }

    #[test]
    fn j_is_negation_invariant() {
        for p in [3u32, 5] {
            let s = space(p, 6);
            for t in Twist::BOTH {
                for d in s.enumerate(t, 6, DeltaClass::Reciprocal).unwrap() {
                    let b = s.beta(&d).unwrap();
                    assert_eq!(d.j(), b.j());
                }
            }
        }
    }

    #[test]
    fn negation_fixed_parity() {
        for p in [3u32, 5, 7] {
            let s = space(p, 8);
            for n in (0..=8).step_by(2) {
                for d in s.enumerate(Twist::Plain, n, DeltaClass::NegationFixed).unwrap() {
                    assert!(negation_fixed_j_parity(&s, &d).unwrap(), "{}", d.poly);
                }
            }
        }
    }

    #[test]
    fn coordinate_switch_round_trip() {
        let s = space(5, 8);
        for d in s.enumerate(Twist::Plain, 8, DeltaClass::NegationFixed).unwrap() {
            let tw = s.switch_coordinate(&d).unwrap();
            assert_eq!(tw.twist, Twist::Twisted);
            assert_eq!(s.switch_coordinate(&tw).unwrap(), d);
            assert_eq!((tw.n1, tw.nm1), (d.n1, d.nm1));
        }
    }

    #[test]
    fn signed_sums_small() {
        for p in [3u32, 5, 7] {
            let s = space(p, 6);
            for n in (0..=6).step_by(2) {
                let r = verify_signed_sums(&s, n);
                assert!(r.passed(), "{r}");
            }
        }
        let s = space(3, 2);
        let got = signed_sums(&s, 2).unwrap();
        assert_eq!((got.x0, got.x1), (0, -1));
    }
}
