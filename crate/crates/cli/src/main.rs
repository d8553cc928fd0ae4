//! `spincount`: run verification suites and write a JSON report.
//!
//! Exit status: 0 when every check passes (skips allowed), 1 when any
//! check fails, 2 on a usage or configuration error.

mod suites;

use clap::Parser;
use spincount::orbits::default_cap;
use spincount::fqpoly::PrimeField;
use spincount::{CheckReport, Status};
use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;
use suites::{RunConfig, Suite, Task};

const REPORT_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "spincount", version, about = "Exact verification suites for spin-group class-count identities")]
struct Args {
    /// Odd primes to check, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "3,5")]
    q: Vec<u32>,
    /// Largest degree for direct enumeration (even).
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    /// Series truncation order.
    #[arg(long, default_value_t = 256)]
    trunc: usize,
    /// Orbit-census degree caps: one number for every prime, or `p:cap`
    /// pairs. Unlisted primes use the built-in default.
    #[arg(long, value_delimiter = ',')]
    d_cap: Vec<String>,
    /// Suites to run, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "selftest")]
    suite: Vec<Suite>,
    /// Report path (written atomically); stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every available core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Zero all runtimes so reports compare byte for byte.
    #[arg(long)]
    no_timing: bool,
    /// Print only the summary line.
    #[arg(long)]
    quiet: bool,
}

fn parse_caps(primes: &[u32], raw: &[String]) -> Result<BTreeMap<u32, usize>, String> {
    let mut caps: BTreeMap<u32, usize> = primes.iter().map(|&p| (p, default_cap(p))).collect();
    for item in raw {
        match item.split_once(':') {
            Some((p, c)) => {
                let p: u32 = p.trim().parse().map_err(|_| format!("bad prime in --d-cap entry `{item}`"))?;
                let c: usize = c.trim().parse().map_err(|_| format!("bad cap in --d-cap entry `{item}`"))?;
                if caps.contains_key(&p) {
                    caps.insert(p, c);
                }
            }
            None => {
                let c: usize = item.trim().parse().map_err(|_| format!("bad --d-cap value `{item}`"))?;
                caps.values_mut().for_each(|v| *v = c);
            }
        }
    }
    if let Some((p, _)) = caps.iter().find(|(_, &c)| c == 0) {
        return Err(format!("degree cap for q={p} must be positive"));
    }
    Ok(caps)
}

fn config(args: &Args) -> Result<RunConfig, String> {
    if args.q.is_empty() {
        return Err("no primes given".into());
    }
    for &p in &args.q {
        PrimeField::new(p).map_err(|e| e.to_string())?;
    }
    let mut primes = args.q.clone();
    primes.sort_unstable();
    primes.dedup();
    if args.n_max % 2 == 1 {
        return Err(format!("--n-max must be even, got {}", args.n_max));
    }
    let suites: BTreeSet<Suite> = args
        .suite
        .iter()
        .flat_map(|&s| if s == Suite::Selftest { Suite::ATOMIC.to_vec() } else { vec![s] })
        .collect();
    let jobs = match args.jobs {
        0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
        j => j,
    };
    Ok(RunConfig {
        d_cap: parse_caps(&primes, &args.d_cap)?,
        primes,
        n_max: args.n_max,
        trunc: args.trunc,
        suites: suites.into_iter().collect(),
        jobs,
    })
}

/// Runs tasks on `jobs` threads; results keep task order.
fn run(tasks: Vec<Task>, jobs: usize) -> Vec<CheckReport> {
    let n = tasks.len();
    let queue: Vec<Mutex<Option<Task>>> = tasks.into_iter().map(|t| Mutex::new(Some(t))).collect();
    let results: Vec<Mutex<Vec<CheckReport>>> = (0..n).map(|_| Mutex::new(Vec::new())).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..jobs.clamp(1, n.max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let task = queue[i].lock().expect("task slot").take().expect("task taken once");
                let start = Instant::now();
                let mut reports = task();
                let ms = start.elapsed().as_millis() as u64;
                for r in reports.iter_mut().filter(|r| r.runtime_ms == 0) {
                    r.runtime_ms = ms;
                }
                *results[i].lock().expect("result slot") = reports;
            });
        }
    });
    results.into_iter().flat_map(|m| m.into_inner().expect("result slot")).collect()
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match config(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("spincount: {e}");
            return ExitCode::from(2);
        }
    };
    let tasks: Vec<Task> = cfg.suites.iter().flat_map(|&s| suites::tasks(s, &cfg)).collect();
    let mut checks = run(tasks, cfg.jobs);
    checks.sort_by(|a, b| (&a.check_id, &a.params).cmp(&(&b.check_id, &b.params)));
    if args.no_timing {
        checks.iter_mut().for_each(|r| r.runtime_ms = 0);
    }
    let failed = checks.iter().filter(|r| r.status == Status::Fail).count();
    let skipped = checks.iter().filter(|r| r.status == Status::Skipped).count();
    if !args.quiet {
        for r in &checks {
            eprintln!("{r}");
        }
    }
    eprintln!(
        "{} checks: {} passed, {failed} failed, {skipped} skipped",
        checks.len(),
        checks.len() - failed - skipped
    );
    let report = serde_json::json!({ "version": REPORT_VERSION, "config": cfg, "checks": checks });
    let mut bytes = serde_json::to_vec_pretty(&report).expect("report serialises");
    bytes.push(b'\n');
    let written = match &args.out {
        Some(path) => write_atomic(path, &bytes),
        None => std::io::stdout().write_all(&bytes),
    };
    if let Err(e) = written {
        eprintln!("spincount: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(u8::from(failed > 0))
}
