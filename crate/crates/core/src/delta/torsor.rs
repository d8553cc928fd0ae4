//! Parity transports on choice sets of roots.
//!
//! For unit-free reciprocal `Delta` of degree `n` with root multiplicities
//! `n_x`, a choice set `U` picks one root from each inversion pair. The
//! transport between choices is `n/2 + sum_{U cap U'} n_x (mod 2)`. We check
//! that it is a cocycle, that the negation transport does not depend on the
//! choice among negation-inversion-stable `U`, and that the twisted
//! Frobenius transport does not depend on the interval choice.
//!
//! Roots are modelled concretely: every orbit of inversion, negation and
//! Frobenius meeting the support is laid out inside the field generated by
//! one of its roots.

use super::{Delta, DeltaSpace};
use crate::error::{Error, Result};
use crate::fqpoly::{FpPoly, QuotientRing};
use crate::orbits::{orbit_follow, Map, Twist};
use crate::report::CheckReport;
use std::collections::HashMap;

/// Explicit finite model of the roots around `supp(Delta)`.
pub struct RootModel {
    pub n: Vec<usize>,
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    pub gamma: Vec<usize>,
    pub degree: usize,
}

const MAX_CONFIGS: u64 = 1 << 24;

impl RootModel {
    /// Builds the model for an untwisted, unit-free `Delta`.
    pub fn new(space: &DeltaSpace, d: &Delta) -> Result<Self> {
        if d.twist != Twist::Plain || !d.is_unit_free() {
            return Err(Error::Invalid("root model needs unit-free untwisted data".into()));
        }
        let mult: HashMap<&FpPoly, usize> = d.factors.iter().map(|(g, m)| (g, *m)).collect();
        let mut keys: Vec<FpPoly> = Vec::new();
        for (g, _) in &d.factors {
            let r = space.partner(Twist::Plain, g);
            let key = [g.clone(), r.clone(), g.negate_var(), r.negate_var()]
                .into_iter()
                .min()
                .unwrap();
            if !keys.contains(&key) {
                keys.push(key);
            }
        }
        let mut rings = Vec::new();
        let mut elems: Vec<(usize, FpPoly)> = Vec::new();
        let mut index: HashMap<(usize, FpPoly), usize> = HashMap::new();
        for (ci, key) in keys.iter().enumerate() {
            let ring = QuotientRing::new(key)?;
            let orbit = orbit_follow(&ring, &ring.root(), &[Map::Alpha, Map::Beta, Map::Gamma])?;
            for x in orbit.elements {
                index.insert((ci, x.clone()), elems.len());
                elems.push((ci, x));
            }
            rings.push(ring);
        }
        let perm = |m: Map| -> Result<Vec<usize>> {
            elems
                .iter()
                .map(|(ci, x)| {
                    let y = m.apply(&rings[*ci], x)?;
                    index
                        .get(&(*ci, y))
                        .copied()
                        .ok_or_else(|| Error::Invalid("orbit not closed".into()))
                })
                .collect()
        };
        let n = elems
            .iter()
            .map(|(ci, x)| {
                let min = orbit_follow(&rings[*ci], x, &[Map::Gamma])?
                    .canonical
                    .expect("Frobenius cycles have F_p coefficients");
                Ok(mult.get(&min).copied().unwrap_or(0))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RootModel {
            n,
            alpha: perm(Map::Alpha)?,
            beta: perm(Map::Beta)?,
            gamma: perm(Map::Gamma)?,
            degree: d.degree(),
        })
    }

    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n.is_empty()
    }

    fn twisted_frobenius(&self, e: Twist) -> Vec<usize> {
        match e {
            Twist::Plain => self.gamma.clone(),
            Twist::Twisted => self.gamma.iter().map(|&g| self.beta[g]).collect(),
        }
    }

    /// Orbits of the permutations `gens` that meet the support.
    fn orbits_meeting_support(&self, gens: &[&[usize]]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] || self.n[s] == 0 {
                continue;
            }
            let mut orbit = vec![s];
            seen[s] = true;
            let mut k = 0;
            while k < orbit.len() {
                let x = orbit[k];
                for g in gens {
                    let y = g[x];
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                    }
                }
                k += 1;
            }
            out.push(orbit);
        }
        out
    }

    fn sum(&self, w: &[usize], u: &[bool], v: &[bool]) -> usize {
        (0..self.len()).filter(|&x| u[x] && v[x]).map(|x| w[x]).sum::<usize>()
    }

    fn sum_in(&self, w: &[usize], u: &[bool]) -> usize {
        (0..self.len()).filter(|&x| u[x]).map(|x| w[x]).sum::<usize>()
    }

    /// Every combination of per-orbit options, as membership vectors; the
    /// extra value is carried along per combination.
    fn combine(&self, options: &[Vec<(Vec<usize>, usize)>]) -> Result<Vec<(Vec<bool>, usize)>> {
        let total = options
            .iter()
            .try_fold(1u64, |acc, o| acc.checked_mul(o.len() as u64))
            .filter(|&t| t <= MAX_CONFIGS)
            .ok_or_else(|| Error::CapExceeded("too many choice configurations".into()))?;
        let mut out = Vec::with_capacity(total as usize);
        for mut code in 0..total {
            let mut u = vec![false; self.len()];
            let mut extra = 0;
            for o in options {
                let (set, ex) = &o[(code % o.len() as u64) as usize];
                code /= o.len() as u64;
                for &x in set {
                    u[x] = true;
                }
                extra += ex;
            }
            out.push((u, extra));
        }
        Ok(out)
    }

    /// Choice sets picking one root of each inversion pair in the support.
    fn choices_on_support(&self) -> Result<Vec<Vec<bool>>> {
        let opts: Vec<Vec<(Vec<usize>, usize)>> = (0..self.len())
            .filter(|&x| self.n[x] > 0 && x < self.alpha[x])
            .map(|x| vec![(vec![x], 0), (vec![self.alpha[x]], 0)])
            .collect();
        Ok(self.combine(&opts)?.into_iter().map(|(u, _)| u).collect())
    }

    fn is_choice(&self, u: &[bool], domain: &[usize]) -> bool {
        domain.iter().all(|&x| u[x] != u[self.alpha[x]])
    }

    /// The cocycle identity over all triples of choices.
    pub fn check_cocycle(&self) -> Result<bool> {
        let us = self.choices_on_support()?;
        if (us.len() as u64).pow(3) > MAX_CONFIGS * 4 {
            return Err(Error::CapExceeded("too many triples".into()));
        }
        let n = &self.n;
        for a in &us {
            for b in &us {
                for c in &us {
                    let lhs = self.sum(n, a, b) + self.sum(n, b, c) + self.sum(n, c, a);
                    let rhs = self.sum_in(n, a) + self.sum_in(n, b) + self.sum_in(n, c);
                    if (lhs + rhs) % 2 != 0 {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    fn psi(&self, base: &[bool], u: &[bool]) -> usize {
        self.degree / 2 + self.sum(&self.n, base, u)
    }

    /// Independence of the negation transport over choices stable under
    /// `x -> -1/x`.
    pub fn check_negation_transport(&self) -> Result<bool> {
        let ab: Vec<usize> = (0..self.len()).map(|x| self.alpha[self.beta[x]]).collect();
        let orbits = self.orbits_meeting_support(&[&self.alpha, &self.beta]);
        let domain: Vec<usize> = orbits.concat();
        let mut opts = Vec::new();
        for o in &orbits {
            let x = o[0];
            let mut first = vec![x, ab[x]];
            first.dedup();
            let y = self.alpha[x];
            let mut second = vec![y, ab[y]];
            second.dedup();
            opts.push(vec![(first, 0), (second, 0)]);
        }
        let us: Vec<Vec<bool>> = self.combine(&opts)?.into_iter().map(|(u, _)| u).collect();
        if !us.iter().all(|u| self.is_choice(u, &domain)) {
            return Err(Error::Invalid("negation-stable choice is not a choice".into()));
        }
        let nb: Vec<usize> = (0..self.len()).map(|x| self.n[self.beta[x]]).collect();
        let half = self.degree / 2;
        let base = &us[0];
        for u in &us {
            for v in &us {
                // transported through u, evaluated at v; versus through v
                let via_u = half + self.sum(&nb, u, v) + half + self.psi(base, u);
                let via_v = half + self.psi(base, v);
                if (via_u + via_v) % 2 != 0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Independence of the `gamma_e` transport over interval choices.
    pub fn check_frobenius_transport(&self, e: Twist) -> Result<bool> {
        let ge = self.twisted_frobenius(e);
        let mut ge_inv = vec![0; self.len()];
        for (x, &y) in ge.iter().enumerate() {
            ge_inv[y] = x;
        }
        let cycle = |s: usize| {
            let mut c = vec![s];
            while ge[*c.last().unwrap()] != s {
                c.push(ge[*c.last().unwrap()]);
            }
            c
        };
        let orbits = self.orbits_meeting_support(&[&self.alpha, &ge]);
        let domain: Vec<usize> = orbits.concat();
        let mut opts = Vec::new();
        for o in &orbits {
            let c = cycle(o[0]);
            if c.contains(&self.alpha[o[0]]) {
                let len = c.len();
                let r = len / 2;
                opts.push(
                    (0..len)
                        .map(|a| {
                            let set = (0..r).map(|i| c[(a + i) % len]).collect();
                            let zeta = c[(a + len - 1) % len];
                            (set, self.n[zeta])
                        })
                        .collect(),
                );
            } else {
                opts.push(vec![(c.clone(), 0), (cycle(self.alpha[o[0]]), 0)]);
            }
        }
        let us = self.combine(&opts)?;
        if !us.iter().all(|(u, _)| self.is_choice(u, &domain)) {
            return Err(Error::Invalid("interval configuration is not a choice".into()));
        }
        let m: Vec<usize> = (0..self.len()).map(|x| self.n[ge_inv[x]]).collect();
        let half = self.degree / 2;
        let base = &us[0].0;
        let value = |u: &[bool], z: usize| z + self.psi(base, u);
        for (u, zu) in &us {
            for (v, zv) in &us {
                let lhs = value(v, *zv);
                let rhs = half + self.sum(&m, u, v) + value(u, *zu);
                if (lhs + rhs) % 2 != 0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// All three transports for one `Delta`.
pub fn torsor_checks(space: &DeltaSpace, d: &Delta) -> CheckReport {
    CheckReport::timed(|| {
        let r = CheckReport::new(
            "delta.torsor",
            "choice-set transports are cocycles and independent of the choice",
        )
        .param("q", space.q())
        .param("delta", &d.poly);
        let run = || -> Result<[bool; 4]> {
            let model = RootModel::new(space, d)?;
            Ok([
                model.check_cocycle()?,
                model.check_negation_transport()?,
                model.check_frobenius_transport(Twist::Plain)?,
                model.check_frobenius_transport(Twist::Twisted)?,
            ])
        };
        match run() {
            Ok(res) => r.outcome(res.iter().all(|&b| b), "[true, true, true, true]", format!("{res:?}")),
            Err(e) => r.outcome(false, "model built", e),
        }
    })
}

/// Runs the transports over every unit-free reciprocal `Delta` of degree `n`.
pub fn verify_torsors(space: &DeltaSpace, n: usize) -> CheckReport {
    CheckReport::timed(|| {
        let r = CheckReport::new(
            "delta.torsor_all",
            "choice-set transports hold for every unit-free reciprocal datum of the degree",
        )
        .param("q", space.q())
        .param("n", n);
        let ds = match space.enumerate(Twist::Plain, n, super::DeltaClass::ReciprocalNoUnit) {
            Ok(ds) => ds,
            Err(e) => return r.outcome(false, "enumeration", e),
        };
        let failed: Vec<String> = ds
            .iter()
            .filter(|d| !torsor_checks(space, d).passed())
            .map(|d| d.poly.to_string())
            .collect();
        r.param("checked", ds.len())
            .outcome(failed.is_empty(), "no failures", format!("{} failures {failed:?}", failed.len()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta::DeltaClass;
    use crate::fqpoly::PrimeField;
    use proptest::prelude::*;

    #[test]
    fn all_small_data_at_three() {
        let s = DeltaSpace::new(3, 6).unwrap();
        for n in (0..=6).step_by(2) {
            let r = verify_torsors(&s, n);
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn trivial_delta_is_vacuous() {
        let s = DeltaSpace::new(5, 2).unwrap();
        let one = s
            .delta_from_poly(Twist::Plain, &FpPoly::one(PrimeField::new(5).unwrap()))
            .unwrap();
        let m = RootModel::new(&s, &one).unwrap();
        assert!(m.is_empty());
        assert!(torsor_checks(&s, &one).passed());
    }

    #[test]
    fn model_sizes() {
        // X^2 + 1 at q = 3: one orbit {i, -i}
        let s = DeltaSpace::new(3, 4).unwrap();
        let f = PrimeField::new(3).unwrap();
        let d = s.delta_from_poly(Twist::Plain, &FpPoly::from_i64s(f, &[1, 0, 1])).unwrap();
        let m = RootModel::new(&s, &d).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.alpha, m.beta);
        let all = s.enumerate(Twist::Plain, 4, DeltaClass::ReciprocalNoUnit).unwrap();
        for d in all {
            let m = RootModel::new(&s, &d).unwrap();
            assert_eq!(m.n.iter().sum::<usize>(), 4);
        }
    }

    /// The shift identity on `Z/2r` behind the Frobenius transport: with
    /// `n(i) = n(i + r)` and intervals starting at `a`, `b`,
    /// `n(b-1) + sum_{U cap U'} n = sum_{U cap U' - 1} n + n(a-1) mod 2`.
    fn shift_identity(half: &[usize], a: usize, b: usize) -> bool {
        let r = half.len();
        let len = 2 * r;
        let n = |i: usize| half[i % r];
        let inter: Vec<usize> = (0..len)
            .filter(|&i| (i + len - a) % len < r && (i + len - b) % len < r)
            .collect();
        let lhs = n(b + len - 1) + inter.iter().map(|&i| n(i)).sum::<usize>();
        let rhs = inter.iter().map(|&i| n(i + len - 1)).sum::<usize>() + n(a + len - 1);
        (lhs + rhs) % 2 == 0
    }

    proptest! {
        #[test]
        fn interval_shift(half in proptest::collection::vec(0usize..5, 1..8), a in 0usize..16, b in 0usize..16) {
            let len = 2 * half.len();
            prop_assert!(shift_identity(&half, a % len, b % len));
        }
    }
}
