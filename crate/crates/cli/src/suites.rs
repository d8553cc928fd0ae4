//! Named check suites, expanded into independent tasks.

use spincount::classcount::{alpha_check, verify_f_totals, verify_partition_stats, Reading};
use spincount::delta::torsor::verify_torsors;
use spincount::delta::{verify_counts, verify_signed_sums, DeltaSpace, Method};
use spincount::dualcount::{ahat_series_check, final_identity, verify_h_modes, verify_split};
use spincount::oracle::equivariant::verify_random;
use spincount::oracle::form::WittType;
use spincount::oracle::{oracle_checks, verify_spinor_norm};
use spincount::orbits::{census_cached, verify_orbit_products, OrbitProduct};
use spincount::series::{verify_series_identity, SeriesIdentity, Sign};
use spincount::CheckReport;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Series,
    Orbits,
    Delta,
    Classcount,
    Dualcount,
    Oracle,
    Identity,
    Selftest,
}

impl Suite {
    pub const ATOMIC: [Suite; 7] = [
        Suite::Series,
        Suite::Orbits,
        Suite::Delta,
        Suite::Classcount,
        Suite::Dualcount,
        Suite::Oracle,
        Suite::Identity,
    ];
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct RunConfig {
    pub primes: Vec<u32>,
    pub d_cap: BTreeMap<u32, usize>,
    pub n_max: usize,
    pub trunc: usize,
    pub suites: Vec<Suite>,
    /// Not reported: results do not depend on it.
    #[serde(skip)]
    pub jobs: usize,
}

/// Partition statistics are checked at least this far.
const PARTITION_N: usize = 40;
/// Random actions per equivariant-count check.
const EQUIVARIANT_CASES: usize = 60;
/// Torsor transports are checked up to this degree.
const TORSOR_N: usize = 8;

pub type Task = Box<dyn FnOnce() -> Vec<CheckReport> + Send>;

fn one(f: impl FnOnce() -> CheckReport + Send + 'static) -> Task {
    Box::new(move || vec![f()])
}

fn many(f: impl FnOnce() -> Vec<CheckReport> + Send + 'static) -> Task {
    Box::new(f)
}

fn space(p: u32, n: usize) -> Result<DeltaSpace, CheckReport> {
    DeltaSpace::new(p, n).map_err(|e| {
        CheckReport::new("delta.space", "irreducible tables could be built")
            .param("q", p)
            .outcome(false, "tables", e)
    })
}

fn with_space(p: u32, n: usize, f: impl FnOnce(&DeltaSpace) -> Vec<CheckReport> + Send + 'static) -> Task {
    many(move || match space(p, n) {
        Ok(s) => f(&s),
        Err(r) => vec![r],
    })
}

fn evens(n_max: usize) -> impl Iterator<Item = usize> {
    (2..=n_max).step_by(2)
}

pub fn tasks(suite: Suite, cfg: &RunConfig) -> Vec<Task> {
    let mut out: Vec<Task> = Vec::new();
    let n_max = cfg.n_max;
    match suite {
        Suite::Series => {
            for id in SeriesIdentity::ALL {
                for u in [Sign::Plus, Sign::Minus] {
                    let t = cfg.trunc;
                    out.push(one(move || verify_series_identity(id, u, t)));
                }
            }
        }
        Suite::Orbits => {
            for &p in &cfg.primes {
                let cap = cfg.d_cap[&p];
                out.push(many(move || match census_cached(p, cap) {
                    Ok(cs) => OrbitProduct::ALL.iter().map(|&tag| verify_orbit_products(&cs, tag, cap)).collect(),
                    Err(e) => vec![CheckReport::new("orbits.census", "the orbit census could be built")
                        .param("q", p)
                        .param("cap", cap)
                        .outcome(false, "census", e)],
                }));
            }
        }
        Suite::Delta => {
            for &p in &cfg.primes {
                out.push(with_space(p, n_max, move |s| verify_counts(s, n_max)));
                out.push(with_space(p, n_max, move |s| evens(n_max).map(|n| verify_signed_sums(s, n)).collect()));
                for n in evens(n_max.min(TORSOR_N)) {
                    out.push(with_space(p, n, move |s| vec![verify_torsors(s, n)]));
                }
            }
        }
        Suite::Classcount => {
            let pn = PARTITION_N.max(n_max + n_max % 2);
            out.push(one(move || verify_partition_stats(pn)));
            for &p in &cfg.primes {
                let cap = cfg.d_cap[&p];
                out.push(with_space(p, n_max, move |s| evens(n_max).map(|n| verify_f_totals(s, n)).collect()));
                out.push(one(move || alpha_check(p, n_max, Method::Direct, Reading::Amended)));
                out.push(one(move || alpha_check(p, cap, Method::CensusDp, Reading::Amended)));
            }
        }
        Suite::Dualcount => {
            for &p in &cfg.primes {
                let cap = cfg.d_cap[&p];
                for n in evens(n_max) {
                    out.push(with_space(p, n, move |s| vec![verify_h_modes(s, n)]));
                }
                out.push(one(move || ahat_series_check(p, n_max, Method::Direct)));
                out.push(one(move || ahat_series_check(p, cap, Method::CensusDp)));
                out.push(one(move || verify_split(p, n_max.min(cap))));
            }
        }
        Suite::Oracle => {
            for &p in &cfg.primes {
                out.push(many(move || oracle_checks(p, 2)));
                if p != 3 && p != 5 {
                    out.push(one(move || {
                        CheckReport::new("oracle.compare_counts", "both spin groups could be built and tallied")
                            .param("q", p)
                            .param("N", 4)
                            .skipped("rank-four groups are only built for q in {3, 5}")
                    }));
                } else {
                    out.push(many(move || oracle_checks(p, 4)));
                    for t in WittType::BOTH {
                        out.push(one(move || verify_spinor_norm(p, 4, t)));
                    }
                }
            }
            out.push(one(|| verify_random(EQUIVARIANT_CASES, 1)));
        }
        Suite::Identity => {
            for &p in &cfg.primes {
                let cap = cfg.d_cap[&p];
                out.push(one(move || final_identity(p, n_max, Method::Direct)));
                out.push(one(move || final_identity(p, cap, Method::CensusDp)));
                if p != 3 && p != 5 {
                    continue;
                }
                out.push(many(move || {
                    oracle_checks(p, 4)
                        .into_iter()
                        .filter(|r| r.check_id == "oracle.class_difference" || r.check_id == "oracle.compare_counts")
                        .map(|r| r.param("suite", "identity"))
                        .collect()
                }));
            }
        }
        Suite::Selftest => {
            for s in Suite::ATOMIC {
                out.extend(tasks(s, cfg));
            }
        }
    }
    out
}
