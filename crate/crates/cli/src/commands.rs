//! One function per subcommand. Each returns the files to write and a short
//! stdout summary; nothing here touches the filesystem except `report`.

use std::collections::BTreeMap;
use std::path::Path;

use gapscope_core::dirichlet::{
    hb_rstar_check, large_value_experiment, perron_doubling, perron_window, LargeValueCounts, PerronParams,
};
use gapscope_core::exponent::{optimize_nu, parse_ledger, verify_all, Certificate, BUILTIN_LEDGER};
use gapscope_core::identity::{count_factorizations, verify_identity, IdentityConfig};
use gapscope_core::primes::{Sieve, SieveConfig, DEFAULT_CEILING};
use gapscope_core::report::{fmt_g, fmt_rational, rational_to_f64};
use gapscope_core::{Error, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::params::Params;

/// Ceiling used with `--allow-large`.
pub const LARGE_CEILING: u64 = 1 << 62;

pub const IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<(String, String)>,
    pub stdout: String,
    /// A verification step failed; exit code 3.
    pub failed: bool,
}

impl Outcome {
    fn json(&mut self, name: &str, v: &impl Serialize) -> Result<()> {
        let text = serde_json::to_string_pretty(v).map_err(|e| Error::Numerical(format!("serialize {name}: {e}")))?;
        self.files.push((name.into(), text + "\n"));
        Ok(())
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.stdout.push_str(s.as_ref());
        self.stdout.push('\n');
    }
}

pub fn defaults(command: &str) -> &'static [(&'static str, &'static str)] {
    match command {
        "gaps" => &[("limits", "10,100,1000,10000,100000,1000000"), ("allow-large", "false")],
        "identity" => &[("x", "50"), ("k", "2")],
        "largevalues" => &[("factors", "unit:4,unit:3"), ("c", "1.05"), ("t", "100,200,400"), ("slack", "100")],
        "perron" => &[("y", "2000.5"), ("tau", "10"), ("factors", "unit:7,log:3"), ("t0", "auto"), ("doublings", "3")],
        "verify" => &[("ledger", "builtin")],
        "optimize-nu" => &[("res", "1/64"), ("grid", "false")],
        "report" => &[],
        _ => &[],
    }
}

pub fn cmd_gaps(p: &Params) -> Result<Outcome> {
    let limits = p.u64_list("limits")?;
    let ceiling = if p.bool("allow-large")? { LARGE_CEILING } else { DEFAULT_CEILING };
    let sieve = Sieve::new(SieveConfig { ceiling, ..SieveConfig::default() });
    if let Some(&top) = limits.iter().max() {
        if top > ceiling {
            return Err(Error::Capacity(format!(
                "limit {top} exceeds the sieve ceiling {ceiling}; pass --allow-large to lift it"
            )));
        }
    }
    let rows = sieve.max_gap_table(&limits)?;
    let sums = sieve.gap_summaries(&limits)?;
    let mut o = Outcome::default();
    let mut csv = String::from("N,max_gap,at,ratio,sum_gap_sq,sum_gap_sq_over_x_5_4\n");
    let mut summary = Vec::new();
    for (r, s) in rows.iter().zip(&sums) {
        let scaled = s.sum_gap_sq as f64 / (r.n as f64).powf(1.25);
        csv.push_str(&format!("{},{},{},{},{},{}\n", r.n, r.max_gap, r.at, fmt_g(r.ratio, 12), s.sum_gap_sq, fmt_g(scaled, 12)));
        o.line(format!("{:>14} {:>6} {:>5}", r.n, r.max_gap, fmt_g(r.ratio, 12)));
        summary.push(json!({
            "N": r.n,
            "max_gap": r.max_gap,
            "at": r.at,
            "ratio": num(r.ratio),
            "count": s.count,
            "sum_gap": s.sum_gap,
            "sum_gap_sq": s.sum_gap_sq.to_string(),
            "sum_gap_sq_over_x_5_4": num(scaled),
        }));
    }
    o.files.push(("gaps.csv".into(), csv));
    o.json("gaps.json", &summary)?;
    Ok(o)
}

pub fn cmd_identity(p: &Params) -> Result<Outcome> {
    let k = u32::try_from(p.u64("k")?).map_err(|_| Error::InvalidArgument("k is too large".into()))?;
    let cfg = IdentityConfig::new(p.u64("x")?, k)?;
    let r = verify_identity(&cfg)?;
    let mut o = Outcome::default();
    o.failed = r.max_residual > IDENTITY_TOL;
    o.line(format!(
        "x={} k={} n in [{}, {}]: max residual {} at n={}",
        r.x,
        r.k,
        r.n_lo,
        r.n_hi,
        fmt_g(r.max_residual, 12),
        r.argmax_n
    ));
    let v = json!({
        "report": r,
        "mobius_cutoff": cfg.mobius_cutoff,
        "factorizations": count_factorizations(&cfg).to_string(),
        "tolerance": num(IDENTITY_TOL),
        "pass": !o.failed,
    });
    o.json("identity.json", &v)?;
    Ok(o)
}

pub fn cmd_largevalues(p: &Params) -> Result<Outcome> {
    let factors = p.factors("factors")?;
    let c = p.f64("c")?;
    let slack = p.f64("slack")?;
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let (mut mont_ok, mut rstar_ok, mut sandwich_ok) = (true, true, true);
    for t in p.f64_list("t")? {
        for row in large_value_experiment(&factors, c, t)? {
            let r = row.r as u128;
            let sandwich = r == 0 || (r * r <= row.r_star && row.r_star <= r * r * r);
            let mont = row.r as f64 <= slack * row.mont_rhs;
            let counts =
                LargeValueCounts { t, r: row.r, r_star: row.r_star, profile: None, x1: None, sigma_agg: None, mu: None };
            let hb = hb_rstar_check(&counts, row.n, row.sigma_prime, t, slack);
            sandwich_ok &= sandwich;
            mont_ok &= mont;
            rstar_ok &= hb.pass;
            checks.push(json!({"T": num(t), "profile": row.profile.iter().map(|&s| num(s)).collect::<Vec<_>>(), "sandwich": sandwich, "montgomery": mont, "rstar": hb}));
            rows.push(row);
        }
    }
    let mut o = Outcome::default();
    o.failed = !(mont_ok && rstar_ok && sandwich_ok);
    o.line(format!(
        "{} cells; sandwich {}, montgomery(slack {}) {}, rstar(slack {}) {}",
        rows.len(),
        verdict(sandwich_ok),
        fmt_g(slack, 12),
        verdict(mont_ok),
        fmt_g(slack, 12),
        verdict(rstar_ok)
    ));
    o.json("largevalues.json", &rows)?;
    o.json("largevalues_checks.json", &checks)?;
    Ok(o)
}

pub fn cmd_perron(p: &Params) -> Result<Outcome> {
    let factors = p.factors("factors")?;
    let mut params = PerronParams::new(p.f64("y")?, p.f64("tau")?)?;
    if p.get("t0")? != "auto" {
        params = params.with_t0(p.f64("t0")?);
    }
    let doublings = u32::try_from(p.u64("doublings")?).map_err(|_| Error::InvalidArgument("doublings too large".into()))?;
    let r = perron_window(&params, &factors)?;
    let mut o = Outcome::default();
    o.line(format!(
        "estimate {} direct {} residual {} envelope {} K {}",
        fmt_g(r.estimate, 12),
        fmt_g(r.direct, 12),
        fmt_g(r.residual, 12),
        fmt_g(r.envelope, 12),
        fmt_g(r.k, 12)
    ));
    o.json("perron.json", &r)?;
    if doublings > 0 {
        let d = perron_doubling(&params, &factors, doublings)?;
        o.line(format!("block sup over doublings: {}", d.block_sup.iter().map(|&v| fmt_g(v, 6)).collect::<Vec<_>>().join(" ")));
        o.json("perron_doubling.json", &json!({"params": params, "doubling": d}))?;
    }
    Ok(o)
}

pub fn cmd_verify(p: &Params) -> Result<Outcome> {
    let src = p.get("ledger")?;
    let text = if src == "builtin" {
        BUILTIN_LEDGER.to_string()
    } else {
        std::fs::read_to_string(src).map_err(|e| Error::InvalidArgument(format!("cannot read ledger {src}: {e}")))?
    };
    let claims = parse_ledger(&text)?;
    let mut o = Outcome::default();
    let mut out = Vec::new();
    let mut failures = 0;
    for (c, v) in claims.iter().zip(verify_all(&claims)) {
        match v {
            Ok(v) => {
                if !v.holds {
                    failures += 1;
                    if let Certificate::Counterexample(cx) = &v.certificate {
                        o.line(format!("FAIL {}: {cx}", c.id));
                    }
                }
                out.push(v.to_json());
            }
            Err(e @ Error::IllPosed { .. }) => {
                failures += 1;
                o.line(format!("FAIL {}: {e}", c.id));
                out.push(json!({"id": c.id, "holds": false, "error": e.to_string()}));
            }
            Err(e) => return Err(e),
        }
    }
    o.failed = failures > 0;
    o.line(format!("{} claims, {} hold, {} fail", claims.len(), claims.len() - failures, failures));
    o.json("verify.json", &out)?;
    Ok(o)
}

pub fn cmd_optimize_nu(p: &Params) -> Result<Outcome> {
    let res = p.rational("res")?;
    let r = optimize_nu(&res)?;
    let mut o = Outcome::default();
    o.line(format!("nu* = {} ({})", fmt_rational(&r.nu_star), fmt_g(rational_to_f64(&r.nu_star), 12)));
    o.line(format!(
        "argmax sigma = {}, mu = {}{}",
        r.argmax.0,
        r.argmax.1,
        if r.argmax_attained { "" } else { " (not attained)" }
    ));
    if r.below_floor {
        o.line(format!("unconstrained value {} lies below the floor {}", fmt_rational(&r.unconstrained), fmt_rational(&r.floor)));
    }
    o.json("optimize_nu.json", &r)?;
    if p.bool("grid")? {
        o.files.push(("nu_grid.csv".into(), r.grid_csv()));
    }
    Ok(o)
}

/// Bundle every JSON output in `dir` into report.json.
pub fn cmd_report(dir: &Path) -> Result<Outcome> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", dir.display())))?;
    let mut all = BTreeMap::new();
    for e in entries {
        let path = e.map_err(|e| Error::InvalidArgument(e.to_string()))?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default().to_string();
        if !name.ends_with(".json") || name == "report.json" {
            continue;
        }
        let text = std::fs::read_to_string(&path).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{name}: {e}")))?;
        all.insert(name.trim_end_matches(".json").to_string(), v);
    }
    let mut o = Outcome::default();
    for k in all.keys() {
        o.line(format!("included {k}"));
    }
    o.json("report.json", &all)?;
    Ok(o)
}

fn num(x: f64) -> Value {
    fmt_g(x, 12).parse::<serde_json::Number>().map_or(Value::Null, Value::Number)
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
