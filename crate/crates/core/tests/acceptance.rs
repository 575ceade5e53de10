//! Acceptance checks. Each criterion prints one `PASS`/`FAIL` line; the
//! process exits non-zero if any fail.

use std::fs;
use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use patsim::channel::{GammaGammaSampler, TurbulenceParams};
use patsim::devices::positioning::fuse_estimates;
use patsim::harness::{run_comparison, sign_test, ComparisonSummary, Mission};
use patsim::pat::build_scan_pattern;
use patsim::{AlgorithmVariant, Angle2, ScenarioConfig, SessionPhase};

use AlgorithmVariant::*;

type Paired = (&'static str, Vec<Option<f64>>, Vec<Option<f64>>);
type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn one_hour() -> ScenarioConfig {
    ScenarioConfig {
        mission_duration_s: 3600.0,
        ..ScenarioConfig::default()
    }
}

const RHOS: [f64; 2] = [0.4, 0.7];
const RUNS: usize = 200;

fn comparison() -> &'static ComparisonSummary {
    static CELLS: OnceLock<ComparisonSummary> = OnceLock::new();
    CELLS.get_or_init(|| {
        let base = ScenarioConfig {
            seed: 20_240,
            ..one_hour()
        };
        run_comparison(&base, &AlgorithmVariant::ALL, &RHOS, RUNS).expect("comparison")
    })
}

// Gamma-gamma density through the integral form of the modified Bessel
// function K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt.
fn bessel_k(nu: f64, z: f64) -> f64 {
    let t_max = (1.0 + 60.0 / z).acosh();
    let n = 1000;
    let h = t_max / n as f64;
    let f = |t: f64| (-z * t.cosh()).exp() * (nu * t).cosh();
    let mut s = f(0.0) + f(t_max);
    for i in 1..n {
        s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

fn gg_pdf(a: f64, b: f64, i: f64) -> f64 {
    let m = (a + b) / 2.0;
    let ln_c = (2.0f64).ln() + m * (a * b).ln() - ln_gamma(a) - ln_gamma(b);
    (ln_c + (m - 1.0) * i.ln()).exp() * bessel_k(a - b, 2.0 * (a * b * i).sqrt())
}

/// Tabulated CDF on a uniform grid by trapezoidal accumulation of the density.
struct NumericCdf {
    h: f64,
    values: Vec<f64>,
}

impl NumericCdf {
    fn build(a: f64, b: f64, upper: f64, n: usize) -> Self {
        let h = upper / n as f64;
        let mut values = Vec::with_capacity(n + 1);
        values.push(0.0);
        let mut prev = 0.0;
        for k in 1..=n {
            let p = gg_pdf(a, b, k as f64 * h);
            let last = *values.last().unwrap();
            values.push(last + 0.5 * h * (prev + p));
            prev = p;
        }
        Self { h, values }
    }

    fn at(&self, x: f64) -> f64 {
        let pos = x / self.h;
        let k = pos.floor() as usize;
        if k + 1 >= self.values.len() {
            return *self.values.last().unwrap();
        }
        let w = pos - k as f64;
        self.values[k] * (1.0 - w) + self.values[k + 1] * w
    }
}

fn gamma_gamma_sampler() -> Verdict {
    let (a, b) = (4.2, 1.4);
    let sampler = GammaGammaSampler::new(TurbulenceParams::new(a, b).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 1_000_000;
    let started = Instant::now();
    let mut xs: Vec<f64> = (0..n).map(|_| sampler.sample(&mut rng)).collect();
    let elapsed = started.elapsed().as_secs_f64();

    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let var_expected = (1.0 + 1.0 / a) * (1.0 + 1.0 / b) - 1.0;

    let cdf = NumericCdf::build(a, b, 30.0, 15_000);
    let mass = cdf.at(30.0);
    xs.sort_by(f64::total_cmp);
    let ks = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf.at(x);
            (f - i as f64 / n as f64)
                .abs()
                .max((f - (i + 1) as f64 / n as f64).abs())
        })
        .fold(0.0, f64::max);

    let pass = (mean - 1.0).abs() <= 0.01
        && (var / var_expected - 1.0).abs() <= 0.03
        && (var_expected - 1.1224).abs() < 1e-4
        && (mass - 1.0).abs() < 1e-3
        && ks < 0.01
        && elapsed < 5.0;
    verdict(
        pass,
        format!(
            "mean {mean:.5}, var {var:.5} (expected {var_expected:.5}), KS {ks:.5} (oracle mass {mass:.5}), sampling {elapsed:.2} s"
        ),
    )
}

fn pearson(xs: &[(f64, f64)]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = xs
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx).powi(2);
        syy += (y - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

fn correlated_sampler() -> Verdict {
    let sampler = GammaGammaSampler::new(TurbulenceParams::new(4.2, 1.4).unwrap()).unwrap();
    let n = 1_000_000;
    let draw = |rho: f64| -> Vec<(f64, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        (0..n)
            .map(|_| sampler.sample_correlated(rho, &mut rng).unwrap())
            .collect()
    };
    let identical = draw(1.0).iter().all(|(u, d)| u == d);
    let r0 = pearson(&draw(0.0));
    let mut vars = Vec::new();
    for rho in [0.0, 0.4, 0.7, 1.0] {
        let prods: Vec<f64> = draw(rho).iter().map(|(u, d)| u * d).collect();
        let m = prods.iter().sum::<f64>() / n as f64;
        vars.push(prods.iter().map(|p| (p - m).powi(2)).sum::<f64>() / (n - 1) as f64);
    }
    let increasing = vars.windows(2).all(|w| w[0] < w[1]);
    verdict(
        identical && r0.abs() < 0.01 && increasing,
        format!(
            "rho=1 identical {identical}, rho=0 Pearson {r0:+.5}, Var(Iu*Id) {:.4?}",
            vars
        ),
    )
}

fn fusion() -> Verdict {
    let (sg, sa) = (2.5e-3, 1.0e-3);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 100_000;
    let mut errs = Vec::with_capacity(2 * n);
    for _ in 0..n {
        let truth = Angle2::new(rng.random_range(-0.1..0.1), rng.random_range(-0.1..0.1));
        let g = truth
            + Angle2::new(
                sg * rng.sample::<f64, _>(StandardNormal),
                sg * rng.sample::<f64, _>(StandardNormal),
            );
        let a = truth
            + Angle2::new(
                sa * rng.sample::<f64, _>(StandardNormal),
                sa * rng.sample::<f64, _>(StandardNormal),
            );
        let (est, _) = fuse_estimates(g, sg, a, sa);
        let e = est - truth;
        errs.push(e.az);
        errs.push(e.el);
    }
    let m = errs.iter().sum::<f64>() / errs.len() as f64;
    let std = (errs.iter().map(|e| (e - m).powi(2)).sum::<f64>() / (errs.len() - 1) as f64).sqrt();
    let target = 0.9285e-3;
    verdict(
        (std / target - 1.0).abs() <= 0.02,
        format!(
            "empirical fused std {:.4} mrad vs {:.4} mrad",
            std * 1e3,
            target * 1e3
        ),
    )
}

fn scan_geometry() -> Verdict {
    let beacon = 5e-3;
    let overlap = ScenarioConfig::default().scan_overlap;
    let reach = overlap * beacon / 2.0;
    let step = 10e-6;
    let mut lens = Vec::new();
    let mut worst_gap: f64 = 0.0;
    for sigma in [0.93e-3, 2.5e-3] {
        let p = build_scan_pattern(sigma, beacon, overlap).unwrap();
        lens.push(p.len());
        let extent = 3.0 * sigma;
        let n = (extent / step).ceil() as i64;
        for i in -n..=n {
            for j in -n..=n {
                let q = Angle2::new(i as f64 * step, j as f64 * step);
                if q.norm() > extent {
                    continue;
                }
                let nearest = p
                    .dwells
                    .iter()
                    .map(|d| (*d - q).norm())
                    .fold(f64::INFINITY, f64::min);
                worst_gap = worst_gap.max(nearest - reach);
            }
        }
    }
    let covered = worst_gap <= 1e-12;
    verdict(
        covered && lens[0] < lens[1],
        format!(
            "dwells {} (0.93 mrad) vs {} (2.5 mrad), worst excess over footprint {:.3e} rad",
            lens[0],
            lens[1],
            worst_gap.max(0.0)
        ),
    )
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_patsim"))
            .args(["run", "--seed", "7", "--quiet", "--out"])
            .arg(dir.path().join(sub))
            .output()
            .unwrap();
        assert!(out.status.success());
        fs::read(dir.path().join(sub).join("trace.csv")).unwrap()
    };
    let identical = run("a") == run("b");

    let cfg = ScenarioConfig {
        seed: 7,
        ..one_hour()
    };
    let started = Instant::now();
    let out = Mission::new(&cfg).unwrap().run(cfg.seed, true);
    let mut csv = Vec::new();
    patsim::trace::write_csv(&out.trace, &mut csv).unwrap();
    let secs = started.elapsed().as_secs_f64();
    verdict(
        identical && out.trace.len() == 36_000 && secs < 5.0,
        format!(
            "byte-identical CSV {identical}; one-hour mission with trace: {} slots in {secs:.2} s",
            out.trace.len()
        ),
    )
}

fn legal_edge(from: SessionPhase, to: SessionPhase) -> bool {
    use SessionPhase::*;
    from == to
        || matches!(
            (from, to),
            (LinkRequest, Olcp)
                | (Olcp, WellConnected)
                | (WellConnected, FineTrackingOutage)
                | (FineTrackingOutage, WellConnected)
                | (FineTrackingOutage, LinkOutage)
                | (WellConnected, LinkOutage)
                | (LinkOutage, Olcp)
                // A failed handshake falls back to a fresh request.
                | (Olcp, LinkRequest)
                | (LinkOutage, LinkRequest)
        )
}

fn state_machine() -> Verdict {
    let cell = comparison()
        .cell(Proposed, ScenarioConfig::default().rho)
        .unwrap();
    let mut slots = [0u64; 5];
    let mut trans = [[0u64; 5]; 5];
    let mut illegal = Vec::new();
    for cell in &comparison().cells {
        for r in &cell.runs {
            for (f, row) in r.metrics.transitions.iter().enumerate() {
                for (t, &n) in row.iter().enumerate() {
                    if n > 0 && !legal_edge(SessionPhase::ALL[f], SessionPhase::ALL[t]) {
                        illegal.push((cell.variant, SessionPhase::ALL[f], SessionPhase::ALL[t]));
                    }
                }
            }
        }
    }
    for r in &cell.runs {
        for (p, row) in trans.iter_mut().enumerate() {
            slots[p] += r.metrics.phase_slots[p];
            for (t, n) in row.iter_mut().zip(r.metrics.transitions[p]) {
                *t += n;
            }
        }
    }
    use SessionPhase::*;
    let fto = FineTrackingOutage.index();
    let all_phases = slots.iter().all(|&n| n > 0);
    let fto_to_olcp = trans[fto][Olcp.index()];
    let fto_exits = trans[fto][WellConnected.index()] + trans[fto][LinkOutage.index()];
    let fto_entries: u64 = (0..5).filter(|&p| p != fto).map(|p| trans[p][fto]).sum();
    let pass = cell.runs.len() == RUNS
        && all_phases
        && illegal.is_empty()
        && fto_to_olcp == 0
        && fto_exits > 0;
    verdict(
        pass,
        format!(
            "{} runs, phase slots {:?}, illegal edges {:?}, FTO entries {fto_entries}, FTO->WC/LO {fto_exits}, FTO->Olcp {fto_to_olcp}",
            cell.runs.len(),
            slots,
            illegal.first()
        ),
    )
}

/// Two-sided exact sign test, computed directly from binomial terms.
fn sign_p(wins: u64, losses: u64) -> f64 {
    let n = wins + losses;
    let k = wins.min(losses);
    let mut term = 0.5f64.powi(n as i32);
    let mut tail = 0.0;
    for i in 0..=k {
        if i > 0 {
            term *= (n - i + 1) as f64 / i as f64;
        }
        tail += term;
    }
    (2.0 * tail).min(1.0)
}

fn paired(a: &[Option<f64>], b: &[Option<f64>]) -> (u64, u64) {
    let mut w = 0;
    let mut l = 0;
    for (x, y) in a.iter().zip(b) {
        if let (Some(x), Some(y)) = (x, y) {
            if x < y {
                w += 1;
            } else if x > y {
                l += 1;
            }
        }
    }
    (w, l)
}

fn ordinal_claims() -> Verdict {
    let s = comparison();
    let mut lines = Vec::new();
    let mut pass = true;
    for rho in RHOS {
        let get = |v: AlgorithmVariant| s.cell(v, rho).unwrap();
        let outages = |v| -> Vec<Option<f64>> {
            get(v)
                .per_run
                .link_outages
                .iter()
                .map(|&n| Some(n as f64))
                .collect()
        };
        let acq = |v| get(v).per_run.acq_time_mean_s.clone();
        let p95 = |v| get(v).per_run.err_p95_rad.clone();
        let checks: [Paired; 8] = [
            (
                "(a) outages ccr<baseline",
                outages(BaselineCcr),
                outages(Baseline),
            ),
            (
                "(a) outages proposed<aoa",
                outages(Proposed),
                outages(BaselineAoa),
            ),
            ("(b) acq aoa<baseline", acq(BaselineAoa), acq(Baseline)),
            ("(b) acq proposed<ccr", acq(Proposed), acq(BaselineCcr)),
            ("(c) p95 proposed<aoa", p95(Proposed), p95(BaselineAoa)),
            ("(c) p95 proposed<ccr", p95(Proposed), p95(BaselineCcr)),
            ("(c) p95 aoa<baseline", p95(BaselineAoa), p95(Baseline)),
            ("(c) p95 ccr<baseline", p95(BaselineCcr), p95(Baseline)),
        ];
        for (name, a, b) in checks {
            let (w, l) = paired(&a, &b);
            let p = sign_p(w, l);
            let lib = sign_test(a.iter().zip(&b).filter_map(|(x, y)| Some(((*x)?, (*y)?))));
            let ok = w > l && p < 0.05 && lib.wins == w && lib.losses == l;
            pass &= ok;
            lines.push(format!(
                "    rho {rho} {name}: {w}/{l} p={p:.2e} {}",
                if ok { "ok" } else { "NOT SUPPORTED" }
            ));
        }
    }
    let mut detail = format!("{} paired seeds per cell, 8 cells", s.seeds.len());
    for l in lines {
        detail.push('\n');
        detail.push_str(&l);
    }
    verdict(pass && s.seeds.len() >= RUNS, detail)
}

fn retro_invariant() -> Verdict {
    let s = comparison();
    let mut max_ccr: f64 = 0.0;
    let mut max_laser: f64 = 0.0;
    let mut runs = 0;
    for c in &s.cells {
        for r in &c.runs {
            if c.variant.uses_ccr() {
                max_ccr = max_ccr.max(r.max_ac_down_beacon_err_rad);
                runs += 1;
            } else {
                max_laser = max_laser.max(r.max_ac_down_beacon_err_rad);
            }
        }
    }
    verdict(
        max_ccr == 0.0 && max_laser > 0.0 && runs > 0,
        format!(
            "{runs} CCR runs, max aircraft contribution {max_ccr:e} rad (laser variants reach {:.3} mrad)",
            max_laser * 1e3
        ),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("gamma-gamma sampler", gamma_gamma_sampler),
        ("correlated sampler", correlated_sampler),
        ("position fusion", fusion),
        ("scan geometry", scan_geometry),
        ("determinism and speed", determinism),
        ("state machine", state_machine),
        ("ordinal claims", ordinal_claims),
        ("retroreflection invariant", retro_invariant),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (name, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let started = Instant::now();
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!(
            "acceptance {name}: {} ({:.1} s) {}",
            if v.pass { "PASS" } else { "FAIL" },
            started.elapsed().as_secs_f64(),
            v.detail
        );
    }
    if failed > 0 {
        println!("acceptance: {failed} criteria failed");
        std::process::exit(1);
    }
}
