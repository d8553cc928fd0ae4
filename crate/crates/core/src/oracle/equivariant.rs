//! Random commutative group actions on finite sets, counted by brute force:
//! orbits by search, stabilizers by testing every group element, and
//! characters of each stabilizer as distinct restrictions of characters of
//! the whole group.

use crate::dualcount::irr_equivariant_count;
use crate::error::Result;
use crate::report::CheckReport;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::{BTreeMap, BTreeSet, HashSet};

/// `Z/m_1 x .. x Z/m_k` acting on a union of coset spaces `G/H_i`.
#[derive(Clone, Debug)]
pub struct Action {
    pub moduli: Vec<u32>,
    /// Generators of each `H_i`.
    pub subgroups: Vec<Vec<Vec<u32>>>,
}

type G = Vec<u32>;

impl Action {
    pub fn random(rng: &mut StdRng) -> Self {
        let k = rng.gen_range(1..=3);
        let moduli: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=6)).collect();
        let pieces = rng.gen_range(1..=4);
        let subgroups = (0..pieces)
            .map(|_| {
                let ngens = rng.gen_range(0..=2);
                (0..ngens)
                    .map(|_| moduli.iter().map(|&m| rng.gen_range(0..m)).collect())
                    .collect()
            })
            .collect();
        Action { moduli, subgroups }
    }

    pub fn order(&self) -> u64 {
        self.moduli.iter().map(|&m| m as u64).product()
    }

    pub fn elements(&self) -> Vec<G> {
        let mut out = vec![vec![]];
        for &m in &self.moduli {
            out = out
                .into_iter()
                .flat_map(|g: G| {
                    (0..m).map(move |x| {
                        let mut h = g.clone();
                        h.push(x);
                        h
                    })
                })
                .collect();
        }
        out
    }

    fn add(&self, a: &G, b: &G) -> G {
        a.iter().zip(b).zip(&self.moduli).map(|((x, y), m)| (x + y) % m).collect()
    }

    fn span(&self, gens: &[G]) -> BTreeSet<G> {
        let zero: G = vec![0; self.moduli.len()];
        let mut set = BTreeSet::from([zero.clone()]);
        let mut stack = vec![zero];
        while let Some(x) = stack.pop() {
            for g in gens {
                let y = self.add(&x, g);
                if set.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        set
    }

    /// The points `(i, g + H_i)`, each coset named by its least element.
    pub fn points(&self) -> Vec<(usize, G)> {
        let mut out = Vec::new();
        for (i, gens) in self.subgroups.iter().enumerate() {
            let h = self.span(gens);
            let mut seen = BTreeSet::new();
            for g in self.elements() {
                let coset = h.iter().map(|x| self.add(&g, x)).min().expect("nonempty");
                if seen.insert(coset.clone()) {
                    out.push((i, coset));
                }
            }
        }
        out
    }

    pub fn act(&self, g: &G, pt: &(usize, G)) -> (usize, G) {
        let h = self.span(&self.subgroups[pt.0]);
        let moved = self.add(g, &pt.1);
        (pt.0, h.iter().map(|x| self.add(&moved, x)).min().expect("nonempty"))
    }
}

/// Sum over orbits of the number of characters of the stabilizer.
pub fn count_by_enumeration(a: &Action) -> u64 {
    let elems = a.elements();
    let points = a.points();
    let lcm = a.moduli.iter().fold(1u32, |l, &m| num_integer::lcm(l, m));
    let mut done: HashSet<(usize, G)> = HashSet::new();
    let mut total = 0;
    for pt in &points {
        if done.contains(pt) {
            continue;
        }
        for g in &elems {
            done.insert(a.act(g, pt));
        }
        let stab: Vec<&G> = elems.iter().filter(|g| a.act(g, pt) == *pt).collect();
        // chi_s(g) = exp(2 pi i sum s_k g_k / m_k), recorded as a residue mod lcm
        let restrictions: HashSet<Vec<u32>> = elems
            .iter()
            .map(|s| {
                stab.iter()
                    .map(|g| {
                        g.iter()
                            .zip(s)
                            .zip(&a.moduli)
                            .map(|((x, y), m)| x * y * (lcm / m))
                            .sum::<u32>()
                            % lcm
                    })
                    .collect()
            })
            .collect();
        total += restrictions.len() as u64;
    }
    total
}

/// The closed count from the stabilizer-order profile.
pub fn count_by_formula(a: &Action) -> Result<i128> {
    let elems = a.elements();
    let mut z: BTreeMap<i128, i128> = BTreeMap::new();
    for pt in a.points() {
        let n = elems.iter().filter(|g| a.act(g, &pt) == pt).count() as i128;
        *z.entry(n).or_default() += 1;
    }
    irr_equivariant_count(a.order() as i128, &z)
}

pub fn verify_random(cases: usize, seed: u64) -> CheckReport {
    let r = CheckReport::new(
        "oracle.equivariant_count",
        "the stabilizer-profile count of irreducible equivariant systems equals direct orbit and character enumeration",
    )
    .param("cases", cases)
    .param("seed", seed);
    let mut rng = StdRng::seed_from_u64(seed);
    for case in 0..cases {
        let a = Action::random(&mut rng);
        let direct = count_by_enumeration(&a) as i128;
        match count_by_formula(&a) {
            Ok(v) if v == direct => {}
            Ok(v) => return r.param("case", case).compare(direct, v),
            Err(e) => return r.param("case", case).compare(direct, e),
        }
    }
    r.compare(cases, cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_and_trivial_actions() {
        // G acting on itself: one orbit, trivial stabilizer
        let a = Action { moduli: vec![2, 3], subgroups: vec![vec![]] };
        assert_eq!(count_by_enumeration(&a), 1);
        // G on a point: all |G| characters
        let a = Action { moduli: vec![2, 2], subgroups: vec![vec![vec![1, 0], vec![0, 1]]] };
        assert_eq!(count_by_enumeration(&a), 4);
        assert_eq!(count_by_formula(&a).unwrap(), 4);
    }

    #[test]
    fn random_actions_agree() {
        let r = verify_random(60, 11);
        assert!(r.passed(), "{r}");
    }
}
