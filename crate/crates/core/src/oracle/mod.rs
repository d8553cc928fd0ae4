//! Brute-force ground truth: spin and special orthogonal groups of small
//! diagonal forms, enumerated element by element, with per-`Delta` class
//! tallies compared against the closed formulas.
//!
//! The two Frobenius forms are realised by two forms of different Witt
//! type over `F_p` with the standard Frobenius, so every characteristic
//! polynomial below is an ordinary `F_p` polynomial.

pub mod clifford;
pub mod equivariant;
pub mod form;
pub mod linalg;

use crate::classcount::{alpha, double_a, f_delta, partition_stats, DeltaData, PartitionStats, Reading};
use crate::delta::{DeltaClass, DeltaSpace, Method};
use crate::error::{Error, Result};
use crate::fqpoly::{FpPoly, PrimeField};
use crate::orbits::Twist;
use crate::report::CheckReport;
use clifford::{Elem, SpinGroup};
use form::{QuadForm, WittType};
use linalg::{Mat, Vector, MAX_DIM};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// Largest `(p, N)` the oracle will build.
pub fn check_caps(p: u32, n: usize) -> Result<()> {
    if !(n == 2 || n == 4) || !(p == 3 || p == 5 || (n == 2 && p <= 13)) {
        return Err(Error::CapExceeded(format!("oracle supports N in {{2, 4}}, q in {{3, 5}}; got N={n}, q={p}")));
    }
    Ok(())
}

/// What the oracle records about one group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElemData {
    pub kappa: Mat,
    pub order: u64,
    pub semisimple: bool,
    /// Characteristic polynomial of the image of the semisimple part.
    pub delta: FpPoly,
    /// Jordan block sizes of the image at eigenvalue `+1`, then `-1`.
    pub jordan: [Vec<usize>; 2],
}

/// Jordan block sizes of `a` at eigenvalue `lambda`, from the ranks of
/// the powers of `a - lambda`.
pub fn jordan_blocks(f: PrimeField, n: usize, a: &Mat, lambda: u32) -> Vec<usize> {
    let b = linalg::shift(f, n, a, lambda);
    let rank = |m: &Mat| {
        let rows: Vec<Vector> = (0..n)
            .map(|i| {
                let mut r = [0u8; MAX_DIM];
                for j in 0..n {
                    r[j] = linalg::get(m, i, j) as u8;
                }
                r
            })
            .collect();
        linalg::rank_of(f, n, &rows)
    };
    let mut ranks = vec![n];
    let mut pw = linalg::identity(n);
    for _ in 0..=n {
        pw = linalg::mat_mul(f, n, &pw, &b);
        ranks.push(rank(&pw));
    }
    let mut sizes = Vec::new();
    for k in 1..=n {
        let at_least_k = ranks[k - 1] - ranks[k];
        let at_least_k1 = ranks[k] - ranks[k + 1];
        sizes.extend(std::iter::repeat(k).take(at_least_k - at_least_k1));
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

pub fn classify(g: &SpinGroup, x: &Elem) -> ElemData {
    let f = g.alg.field();
    let n = g.alg.form.dim();
    let order = g.elem_order(x);
    let (s, _) = linalg::jordan_exponents(f.p() as u64, order);
    let xs = g.pow(x, s);
    let kappa = g.alg.kappa(x);
    ElemData {
        kappa,
        order,
        semisimple: order % f.p() as u64 != 0,
        delta: linalg::charpoly(f, n, &g.alg.kappa(&xs)),
        jordan: [jordan_blocks(f, n, &kappa, 1), jordan_blocks(f, n, &kappa, f.minus_one())],
    }
}

/// Class tallies over one `Delta`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DeltaTally {
    pub delta_poly: String,
    pub semisimple_classes: u64,
    pub deltafixed_classes: u64,
    pub deltamoved_classes: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupReport {
    pub dim: usize,
    pub q: u32,
    pub witt_type: WittType,
    pub order: u64,
    pub class_count: u64,
    pub per_delta: Vec<DeltaTally>,
}

/// Per-class data of a built group, keyed by `Delta`.
pub fn tally(g: &SpinGroup) -> GroupReport {
    let translates = g.delta_translates();
    let mut by_delta: BTreeMap<FpPoly, DeltaTally> = BTreeMap::new();
    for (c, &rep) in g.class_reps.iter().enumerate() {
        let d = classify(g, &g.elems[rep]);
        let t = by_delta.entry(d.delta.clone()).or_insert_with(|| DeltaTally {
            delta_poly: d.delta.to_string(),
            ..Default::default()
        });
        t.semisimple_classes += d.semisimple as u64;
        if translates[c] == c {
            t.deltafixed_classes += 1;
        } else {
            t.deltamoved_classes += 1;
        }
    }
    GroupReport {
        dim: g.alg.form.dim(),
        q: g.alg.field().p(),
        witt_type: g.alg.form.witt_type,
        order: g.order() as u64,
        class_count: g.class_count() as u64,
        per_delta: by_delta.into_values().collect(),
    }
}

pub fn build_spin(p: u32, n: usize, t: WittType) -> Result<SpinGroup> {
    check_caps(p, n)?;
    SpinGroup::build(QuadForm::standard(PrimeField::new(p)?, n, t)?)
}

/// `SO` of a form with the reflection-product norm of every element.
#[derive(Clone, Debug)]
pub struct OrthoGroup {
    pub form: QuadForm,
    pub elems: Vec<Mat>,
    pub index: HashMap<Mat, usize>,
    /// `Q(w_1) .. Q(w_2k)` modulo squares for any reflection word.
    pub norm: Vec<u8>,
}

impl OrthoGroup {
    /// Breadth-first closure over `r_v0 r_w`; every edge re-checks that the
    /// norm bit is well defined.
    pub fn build(form: QuadForm) -> Result<Self> {
        let f = form.field;
        let n = form.dim();
        let mut v0 = [0u8; MAX_DIM];
        v0[0] = 1;
        let r0 = form.reflection(&v0)?;
        let mut gens: HashMap<Mat, u8> = HashMap::new();
        for w in linalg::all_vectors(f.p(), n) {
            let qw = form.q(&w);
            if qw == 0 {
                continue;
            }
            let m = linalg::mat_mul(f, n, &r0, &form.reflection(&w)?);
            let bit = u8::from(!f.is_square(f.mul(form.q(&v0), qw)));
            if let Some(b) = gens.insert(m, bit) {
                if b != bit {
                    return Err(Error::Invalid("reflection pair with two norms".into()));
                }
            }
        }
        let mut gens: Vec<(Mat, u8)> = gens.into_iter().collect();
        gens.sort();
        let id = linalg::identity(n);
        let mut elems = vec![id];
        let mut norm = vec![0u8];
        let mut index = HashMap::from([(id, 0usize)]);
        let cap = form.spin_order() as usize;
        let mut head = 0;
        while head < elems.len() {
            let (x, bx) = (elems[head], norm[head]);
            head += 1;
            for (g, bg) in &gens {
                let y = linalg::mat_mul(f, n, &x, g);
                let by = (bx + bg) % 2;
                match index.get(&y) {
                    Some(&k) if norm[k] != by => {
                        return Err(Error::Invalid("reflection norm is not well defined".into()));
                    }
                    Some(_) => {}
                    None => {
                        if elems.len() == cap {
                            return Err(Error::CapExceeded(format!("SO closure beyond {cap}")));
                        }
                        index.insert(y, elems.len());
                        elems.push(y);
                        norm.push(by);
                    }
                }
            }
        }
        if elems.len() != cap {
            return Err(Error::Invalid(format!("SO closure stopped at {} of {cap}", elems.len())));
        }
        Ok(OrthoGroup { form, elems, index, norm })
    }
}

/// Semisimple part of an orthogonal matrix, from its order.
pub fn semisimple_part(f: PrimeField, n: usize, y: &Mat) -> Result<Mat> {
    let order = linalg::mat_order(f, n, y, 1 << 16).ok_or_else(|| Error::Invalid("matrix of unbounded order".into()))?;
    let (s, _) = linalg::jordan_exponents(f.p() as u64, order);
    Ok(linalg::mat_pow(f, n, y, s))
}

/// `e' + eps_Delta` for one element: the Witt class of the `-1`
/// eigenspace of the semisimple part plus the sign invariant of its
/// characteristic polynomial.
pub fn predicted_norm(space: &DeltaSpace, form: &QuadForm, y: &Mat) -> Result<u8> {
    let f = form.field;
    let n = form.dim();
    let ys = semisimple_part(f, n, y)?;
    let d = space.delta_from_poly(Twist::Plain, &linalg::charpoly(f, n, &ys))?;
    let eps = space.invariants(&d)?.eps.ok_or_else(|| Error::Invalid("no sign invariant".into()))?;
    let minus = linalg::kernel(f, n, &linalg::shift(f, n, &ys, f.minus_one()));
    Ok((form.subspace_class(&minus)? + eps) % 2)
}

/// The norm formula on every element of `SO`, plus: the image of the spin
/// group is exactly the norm kernel, has index two, and the covering map
/// has kernel `{1, -1}`.
pub fn verify_spinor_norm(p: u32, n: usize, t: WittType) -> CheckReport {
    let r = CheckReport::new(
        "oracle.spinor_norm",
        "the reflection-product norm equals the eigenspace Witt class plus the sign invariant, and the spin image is its kernel",
    )
    .param("q", p)
    .param("N", n)
    .param("type", format!("{t:?}").to_lowercase());
    let run = || -> Result<Option<(String, String)>> {
        check_caps(p, n)?;
        let form = QuadForm::standard(PrimeField::new(p)?, n, t)?;
        let so = OrthoGroup::build(form.clone())?;
        let space = DeltaSpace::new(p, n)?;
        for (y, &bit) in so.elems.iter().zip(&so.norm) {
            let pred = predicted_norm(&space, &form, y)?;
            if pred != bit {
                return Ok(Some((format!("norm {bit}"), format!("predicted {pred} at {y:?}"))));
            }
        }
        let spin = SpinGroup::build(form)?;
        let mut image: HashMap<Mat, usize> = HashMap::new();
        for x in &spin.elems {
            *image.entry(spin.alg.kappa(x)).or_default() += 1;
        }
        let id = linalg::identity(n);
        let kernel: Vec<&Elem> = spin.elems.iter().filter(|x| spin.alg.kappa(x) == id).collect();
        let kernel_ok = kernel.len() == 2 && kernel.contains(&&spin.alg.one()) && kernel.contains(&&spin.delta());
        let kernel_zero = so.norm.iter().filter(|&&b| b == 0).count();
        let image_ok = image.len() == spin.order() / 2
            && image.values().all(|&c| c == 2)
            && image.len() == kernel_zero
            && image.keys().all(|m| so.index.get(m).is_some_and(|&k| so.norm[k] == 0));
        if !(kernel_ok && image_ok) {
            return Ok(Some((
                format!("kernel 2, image {}", spin.order() / 2),
                format!("kernel {}, image {}, norm kernel {kernel_zero}", kernel.len(), image.len()),
            )));
        }
        Ok(None)
    };
    match run() {
        Ok(None) => r.compare("consistent", "consistent"),
        Ok(Some((e, a))) => r.compare(e, a),
        Err(e) => r.compare("consistent", e),
    }
}

/// One `Delta` with oracle tallies next to the formulas.
#[derive(Clone, Debug, Serialize)]
pub struct ComparisonRow {
    pub delta: String,
    pub oracle: [DeltaTally; 2],
    pub f: [i128; 2],
    pub moved: [i128; 2],
    pub moved_literal: [i128; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub q: u32,
    pub dim: usize,
    pub groups: [GroupReport; 2],
    pub rows: Vec<ComparisonRow>,
    pub alpha: i128,
}

pub fn compare_counts(p: u32, n: usize) -> Result<Comparison> {
    check_caps(p, n)?;
    let groups = [
        tally(&build_spin(p, n, WittType::Plus)?),
        tally(&build_spin(p, n, WittType::Minus)?),
    ];
    let space = DeltaSpace::new(p, n)?;
    let st: PartitionStats = partition_stats(n)?;
    let mut oracle: [BTreeMap<String, DeltaTally>; 2] = Default::default();
    for (e, g) in groups.iter().enumerate() {
        for t in &g.per_delta {
            oracle[e].insert(t.delta_poly.clone(), t.clone());
        }
    }
    let mut rows = Vec::new();
    for d in space.enumerate(Twist::Plain, n, DeltaClass::Reciprocal)? {
        let data = DeltaData::from_delta(&space, &d, &st.pi)?;
        let key = d.poly.to_string();
        let mut get = |e: usize| {
            oracle[e].remove(&key).unwrap_or_else(|| DeltaTally { delta_poly: key.clone(), ..Default::default() })
        };
        let tallies = [get(0), get(1)];
        rows.push(ComparisonRow {
            delta: key,
            oracle: tallies,
            f: [f_delta(&data, 0), f_delta(&data, 1)],
            moved: [double_a(&data, 0, &st, Reading::Amended), double_a(&data, 1, &st, Reading::Amended)],
            moved_literal: [double_a(&data, 0, &st, Reading::Literal), double_a(&data, 1, &st, Reading::Literal)],
        });
    }
    if let Some(stray) = oracle.iter().flat_map(|m| m.keys()).next() {
        return Err(Error::Invalid(format!("oracle met {stray}, which is not an admissible Delta")));
    }
    Ok(Comparison { q: p, dim: n, groups, rows, alpha: alpha(p, n, Method::Direct)? })
}

fn first_mismatch<T: PartialEq + std::fmt::Debug>(
    rows: &[ComparisonRow],
    mut pick: impl FnMut(&ComparisonRow) -> (T, T),
) -> Option<(String, String)> {
    rows.iter().find_map(|r| {
        let (want, got) = pick(r);
        (want != got).then(|| (format!("{}: {want:?}", r.delta), format!("{}: {got:?}", r.delta)))
    })
}

impl Comparison {
    pub fn checks(&self) -> Vec<CheckReport> {
        let tag = |id: &str, s: &str| CheckReport::new(id, s).param("q", self.q).param("N", self.dim);
        let outcome = |r: CheckReport, m: Option<(String, String)>, n: usize| match m {
            Some((e, a)) => r.compare(e, a),
            None => r.compare(n, n),
        };
        let mut out = Vec::new();
        for g in &self.groups {
            let expected = QuadForm::standard(PrimeField::new(self.q).expect("prime"), self.dim, g.witt_type)
                .map(|f| f.spin_order())
                .unwrap_or(0);
            out.push(
                tag("oracle.order", "the enumerated spin group has the order of the orthogonal group")
                    .param("type", format!("{:?}", g.witt_type).to_lowercase())
                    .param("classes", g.class_count)
                    .compare(expected, g.order),
            );
        }
        let n = self.rows.len();
        out.push(outcome(
            tag("oracle.semisimple_per_delta", "semisimple class counts over each Delta match the case formula"),
            first_mismatch(&self.rows, |r| {
                (r.f, [r.oracle[0].semisimple_classes as i128, r.oracle[1].semisimple_classes as i128])
            }),
            n,
        ));
        out.push(outcome(
            tag("oracle.moved_per_delta", "classes moved by the central element over each Delta match the h-term sums"),
            first_mismatch(&self.rows, |r| {
                (r.moved, [r.oracle[0].deltamoved_classes as i128, r.oracle[1].deltamoved_classes as i128])
            }),
            n,
        ));
        out.push(outcome(
            tag("oracle.fixed_equal", "classes fixed by the central element over each Delta agree for the two forms"),
            first_mismatch(&self.rows, |r| (r.oracle[0].deltafixed_classes, r.oracle[1].deltafixed_classes)),
            n,
        ));
        out.push(
            tag("oracle.class_difference", "the difference of the total class counts equals alpha")
                .compare(self.alpha, self.groups[0].class_count as i128 - self.groups[1].class_count as i128),
        );
        out
    }
}

/// All oracle checks at one `(q, N)`.
pub fn oracle_checks(p: u32, n: usize) -> Vec<CheckReport> {
    match compare_counts(p, n) {
        Ok(c) => c.checks(),
        Err(e) => vec![CheckReport::new("oracle.compare_counts", "both spin groups could be built and tallied")
            .param("q", p)
            .param("N", n)
            .compare("built", e)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jordan_blocks_of_unipotent() {
        let f = PrimeField::new(3).unwrap();
        let mut a = linalg::identity(4);
        linalg::set(&mut a, 0, 1, 1);
        linalg::set(&mut a, 1, 2, 1);
        assert_eq!(jordan_blocks(f, 4, &a, 1), vec![3, 1]);
        assert_eq!(jordan_blocks(f, 4, &a, 2), Vec::<usize>::new());
        assert_eq!(jordan_blocks(f, 4, &linalg::identity(4), 1), vec![1, 1, 1, 1]);
    }

    #[test]
    fn identity_and_delta_classify_trivially() {
        let g = build_spin(3, 4, WittType::Plus).unwrap();
        let f = g.alg.field();
        let unit = FpPoly::from_i64s(f, &[-1, 1]).pow(4);
        for x in [g.alg.one(), g.delta()] {
            let d = classify(&g, &x);
            assert_eq!(d.kappa, linalg::identity(4));
            assert_eq!(d.delta, unit);
            assert_eq!(d.jordan[0], vec![1, 1, 1, 1]);
            assert!(d.semisimple);
        }
    }

    #[test]
    fn vector_pairs_map_to_reflection_pairs() {
        let g = build_spin(3, 4, WittType::Plus).unwrap();
        let form = &g.alg.form;
        let f = form.field;
        let (v, w) = ([1, 0, 0, 0], [0, 1, 0, 0]);
        let x = g.alg.mul(&g.alg.vector(&v), &g.alg.vector(&w));
        // conjugation by a vector is minus the reflection; the signs cancel in pairs
        let want = linalg::mat_mul(f, 4, &form.reflection(&v).unwrap(), &form.reflection(&w).unwrap());
        assert_eq!(g.alg.kappa(&x), want);
    }

    #[test]
    fn class_partition_is_conjugation_stable() {
        let g = build_spin(3, 4, WittType::Minus).unwrap();
        for (i, x) in g.elems.iter().enumerate() {
            for s in &g.elems[..40] {
                let y = g.alg.mul(&g.alg.mul(s, x), &g.alg.reversal(s));
                assert_eq!(g.class_of[g.index[&y]], g.class_of[i]);
            }
        }
    }

    #[test]
    fn spin_norm_identity_small() {
        for t in WittType::BOTH {
            let r = verify_spinor_norm(3, 4, t);
            assert!(r.passed(), "{r}");
        }
        let r = verify_spinor_norm(5, 2, WittType::Minus);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn rank_two_counts() {
        for p in [3, 5, 7] {
            let c = compare_counts(p, 2).unwrap();
            let counts: Vec<u64> = c.groups.iter().map(|g| g.class_count).collect();
            assert_eq!(counts, vec![p as u64 - 1, p as u64 + 1]);
            assert_eq!(c.alpha, -2);
            for r in c.checks() {
                assert!(r.passed(), "{r}");
            }
        }
    }

    #[test]
    fn rank_four_counts() {
        for (p, want, a) in [(3, [(576, 49), (720, 13)], 36), (5, [(14400, 81), (15600, 29)], 52)] {
            let c = compare_counts(p, 4).unwrap();
            let got: Vec<(u64, u64)> = c.groups.iter().map(|g| (g.order, g.class_count)).collect();
            assert_eq!(got, want);
            assert_eq!(c.alpha, a);
            for r in c.checks() {
                assert!(r.passed(), "{r}");
            }
        }
    }

    #[test]
    fn both_readings_agree_at_rank_four() {
        // the two readings of the h-terms only separate from degree 6 on
        let c = compare_counts(3, 4).unwrap();
        assert!(c.rows.iter().all(|r| r.moved_literal == r.moved));
    }

    fn spin_minus_3() -> &'static SpinGroup {
        static G: std::sync::OnceLock<SpinGroup> = std::sync::OnceLock::new();
        G.get_or_init(|| build_spin(3, 4, WittType::Minus).unwrap())
    }

    proptest::proptest! {
        #[test]
        fn kappa_is_multiplicative(i in 0usize..720, j in 0usize..720) {
            let g = spin_minus_3();
            let (x, y) = (&g.elems[i], &g.elems[j]);
            let f = g.alg.field();
            proptest::prop_assert_eq!(
                g.alg.kappa(&g.alg.mul(x, y)),
                linalg::mat_mul(f, 4, &g.alg.kappa(x), &g.alg.kappa(y))
            );
        }

        #[test]
        fn delta_is_central_and_permutes_classes(i in 0usize..720) {
            let g = spin_minus_3();
            let x = &g.elems[i];
            let d = g.delta();
            proptest::prop_assert_eq!(g.alg.mul(&d, x), g.alg.mul(x, &d));
            proptest::prop_assert_eq!(g.alg.mul(&d, &d), g.alg.one());
            let t = g.delta_translates();
            let moved = g.class_of[g.index[&g.alg.mul(&d, x)]];
            proptest::prop_assert_eq!(moved, t[g.class_of[i]]);
            proptest::prop_assert_eq!(t[moved], g.class_of[i]);
        }
    }
}
