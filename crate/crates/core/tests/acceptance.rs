//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! fails. Runs under `cargo test` (no libtest harness).

use spincount::classcount::{alpha_check, alpha_table, verify_f_totals, verify_partition_stats, Reading};
use spincount::delta::torsor::verify_torsors;
use spincount::delta::{verify_counts, verify_signed_sums, DeltaSpace, Method};
use spincount::dualcount::{ahat_series_check, final_identity, verify_h_modes};
use spincount::oracle::equivariant::verify_random;
use spincount::oracle::form::WittType;
use spincount::oracle::{compare_counts, verify_spinor_norm};
use spincount::orbits::{census_cached, verify_orbit_products, OrbitProduct};
use spincount::series::{verify_series_identity, SeriesIdentity, Sign};
use spincount::CheckReport;
use std::time::{Duration, Instant};

struct Outcome {
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { failures: Vec::new() }
    }

    fn check(&mut self, r: CheckReport) {
        if !r.passed() {
            self.failures.push(r.to_string());
        }
    }

    fn checks(&mut self, rs: impl IntoIterator<Item = CheckReport>) {
        rs.into_iter().for_each(|r| self.check(r));
    }

    fn expect(&mut self, what: &str, ok: bool) {
        if !ok {
            self.failures.push(what.to_string());
        }
    }
}

fn space(p: u32, n: usize) -> DeltaSpace {
    DeltaSpace::new(p, n).expect("irreducible tables")
}

fn series() -> Outcome {
    let mut o = Outcome::new();
    for id in [SeriesIdentity::Jacobi, SeriesIdentity::SquaresProduct, SeriesIdentity::DualEqualsSpin] {
        for u in [Sign::Plus, Sign::Minus] {
            o.check(verify_series_identity(id, u, 256));
        }
    }
    o
}

fn orbit_products() -> Outcome {
    let mut o = Outcome::new();
    for (p, t) in [(3, 12), (5, 10)] {
        match census_cached(p, t) {
            Ok(cs) => o.checks(OrbitProduct::ALL.iter().map(|&tag| verify_orbit_products(&cs, tag, t))),
            Err(e) => o.expect(&format!("census q={p}: {e}"), false),
        }
    }
    o
}

fn counts() -> Outcome {
    let mut o = Outcome::new();
    for p in [3, 5, 7] {
        o.checks(verify_counts(&space(p, 8), 8));
    }
    o
}

fn signed_sums() -> Outcome {
    let mut o = Outcome::new();
    for p in [3, 5, 7] {
        let s = space(p, 8);
        o.checks((0..=8).step_by(2).map(|n| verify_signed_sums(&s, n)));
    }
    o
}

fn torsors() -> Outcome {
    let mut o = Outcome::new();
    let s = space(3, 8);
    o.checks((0..=8).step_by(2).map(|n| verify_torsors(&s, n)));
    o
}

fn totals() -> Outcome {
    let mut o = Outcome::new();
    for p in [3, 5] {
        let s = space(p, 8);
        o.checks([2, 4, 6, 8].map(|n| verify_f_totals(&s, n)));
    }
    o
}

fn alpha_assembly() -> Outcome {
    let mut o = Outcome::new();
    for p in [3, 5] {
        o.check(alpha_check(p, 8, Method::Direct, Reading::Amended));
        let v = alpha_table(p, 8, Method::Direct, Reading::Amended).expect("alpha table").values;
        let q = p as i128;
        let low = [v[&0], v[&2], v[&4]];
        o.expect(&format!("low alpha terms at q={p}: {low:?}"), low == [8, -2, 8 * q + 12]);
    }
    o.check(alpha_check(3, 12, Method::CensusDp, Reading::Amended));
    o
}

fn dual_side() -> Outcome {
    let mut o = Outcome::new();
    for p in [3, 5] {
        let s = space(p, 8);
        o.checks((2..=8).step_by(2).map(|n| verify_h_modes(&s, n)));
        o.check(ahat_series_check(p, 8, Method::Direct));
        o.check(final_identity(p, 8, Method::Direct));
    }
    o.check(ahat_series_check(3, 12, Method::CensusDp));
    o.check(final_identity(3, 12, Method::CensusDp));
    o.check(verify_partition_stats(40));
    o
}

fn oracle() -> Outcome {
    let mut o = Outcome::new();
    let frozen = [(3, [(576, 49), (720, 13)], 36), (5, [(14400, 81), (15600, 29)], 52)];
    for (p, groups, diff) in frozen {
        match compare_counts(p, 4) {
            Ok(c) => {
                let got: Vec<(u64, u64)> = c.groups.iter().map(|g| (g.order, g.class_count)).collect();
                o.expect(&format!("Spin4 q={p}: {got:?}"), got == groups);
                o.expect(
                    &format!("alpha_4 at q={p}: {}", c.alpha),
                    c.alpha == diff && c.alpha == 8 * p as i128 + 12,
                );
                o.checks(c.checks());
            }
            Err(e) => o.expect(&format!("Spin4 q={p}: {e}"), false),
        }
        match compare_counts(p, 2) {
            Ok(c) => {
                let d = c.groups[0].class_count as i64 - c.groups[1].class_count as i64;
                o.expect(&format!("Spin2 difference at q={p}: {d}"), d == -2);
                o.checks(c.checks());
            }
            Err(e) => o.expect(&format!("Spin2 q={p}: {e}"), false),
        }
    }
    for t in WittType::BOTH {
        o.check(verify_spinor_norm(3, 4, t));
    }
    o
}

fn equivariant() -> Outcome {
    let mut o = Outcome::new();
    o.check(verify_random(60, 2024));
    o
}

fn main() {
    let criteria: [(&str, Option<Duration>, fn() -> Outcome); 10] = [
        ("1 series identities to X^256, both signs", Some(Duration::from_secs(5)), series),
        ("2 orbit-product identities (q=3 to X^12, q=5 to X^10)", Some(Duration::from_secs(60)), orbit_products),
        ("3 fixed-polynomial counts, q in {3,5,7}, n <= 8", None, counts),
        ("4 signed sums, q in {3,5,7}, even n <= 8", None, signed_sums),
        ("5 torsor transports at q=3, N <= 8", None, torsors),
        ("6 semisimple class totals, q in {3,5}, N in {2,4,6,8}", None, totals),
        ("7 alpha assembly (direct to 8, census to 12)", Some(Duration::from_secs(180)), alpha_assembly),
        ("8 dual side: H modes, ahat = alpha, partition statistics", None, dual_side),
        ("9 oracle ground truth", Some(Duration::from_secs(120)), oracle),
        ("10 equivariant count vs enumeration (60 random actions)", None, equivariant),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let mut outcome = run();
        let took = start.elapsed();
        if let Some(limit) = limit {
            if took > limit {
                outcome.failures.push(format!("took {took:.1?}, limit {limit:?}"));
            }
        }
        let tag = if outcome.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("{tag} criterion {name} ({took:.2?})");
        for f in &outcome.failures {
            println!("     {f}");
        }
        failed += usize::from(!outcome.failures.is_empty());
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
