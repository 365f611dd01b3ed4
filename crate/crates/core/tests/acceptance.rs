//! Acceptance suite. Runs every criterion at its stated tolerance, prints one
//! PASS/FAIL line per criterion and exits nonzero if any criterion fails.
//!
//! Set `SIGSPACE_JOBS` to change the worker count (default: all cores).

use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;
use sigspace::harness::{
    self, emit_csv, preset, run_experiment, Algorithm, ExperimentConfig, ResultTable,
};
use sigspace::linalg::{self, CMat, LinearOperator, C64};
use sigspace::model::{build_overcomplete_dft, gaussian_measurement, SeededRng};
use sigspace::projections::{sd_project, ProjectionKind};
use sigspace::signals::{generate_support, validate_support, StructureSpec};
use sigspace::solvers::{nomp, omp, SolverConfig};
use sigspace::SupportSet;

const GOLDEN: &str = include_str!("golden/fig1_clustered_seed42.csv");
const GOLDEN_TRIALS: usize = 2;

struct Criterion {
    details: Vec<String>,
    ok: bool,
}

impl Criterion {
    fn new() -> Self {
        Criterion {
            details: Vec::new(),
            ok: true,
        }
    }

    fn check(&mut self, pass: bool, what: String) {
        self.ok &= pass;
        self.details
            .push(format!("{} {what}", if pass { "ok  " } else { "MISS" }));
    }

    fn finish(self, id: usize, title: &str, started: Instant) -> bool {
        for d in &self.details {
            println!("      {d}");
        }
        println!(
            "{} criterion {id}: {title} ({:.0} s)",
            if self.ok { "PASS" } else { "FAIL" },
            started.elapsed().as_secs_f64()
        );
        self.ok
    }
}

fn jobs() -> usize {
    std::env::var("SIGSPACE_JOBS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn algs(ids: &[&str]) -> Vec<Algorithm> {
    ids.iter().map(|s| s.parse().unwrap()).collect()
}

fn run(cfg: ExperimentConfig) -> ResultTable {
    run_experiment(&cfg, jobs()).expect("experiment runs")
}

fn rate(t: &ResultTable, alg: &str, class: &str, grid: f64) -> f64 {
    t.rate(alg, class, grid)
        .unwrap_or_else(|| panic!("no row for {alg} / {class} / {grid}"))
}

/// Smallest grid value at which `alg` reaches 100%.
fn first_full(t: &ResultTable, alg: &str, class: &str) -> Option<f64> {
    t.config
        .sweep
        .values()
        .into_iter()
        .find(|&v| rate(t, alg, class, v) == 100.0)
}

fn near(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol
}

fn table1() -> ResultTable {
    run(preset("table1").unwrap())
}

fn criterion1(t: &ResultTable) -> Criterion {
    let mut c = Criterion::new();
    let all = harness::TABLE1_SIGNALS;
    let full = |c: &mut Criterion, alg: &str, classes: &[&str]| {
        for class in classes {
            let r = rate(t, alg, class, 100.0);
            c.check(r >= 95.0, format!("{alg} on {class}: {r}% (want 100 ± 5)"));
        }
    };
    full(&mut c, "nomp", &all);
    full(&mut c, "sscosamp_cosamp", &["clustered", "alternating"]);
    full(&mut c, "sscosamp_omp", &["spread"]);
    full(
        &mut c,
        "cosamp",
        &["clustered", "c_clusters:2", "alternating"],
    );
    full(&mut c, "l1", &["spread"]);
    let none = |c: &mut Criterion, alg: &str, classes: &[&str]| {
        for class in classes {
            let r = rate(t, alg, class, 100.0);
            c.check(r <= 10.0, format!("{alg} on {class}: {r}% (want ≤ 5 ± 5)"));
        }
    };
    none(
        &mut c,
        "sscosamp_cosamp",
        &["spread", "hybrid", "c_clusters:4", "pair_spread"],
    );
    none(
        &mut c,
        "sscosamp_omp",
        &[
            "clustered",
            "hybrid",
            "c_clusters:2",
            "c_clusters:4",
            "alternating",
        ],
    );
    none(&mut c, "omp", &["clustered"]);
    c
}

fn criterion2(t: &ResultTable) -> Criterion {
    let mut c = Criterion::new();
    let anchors: [(&str, &str, f64); 9] = [
        ("sscosamp_l1", "clustered", 20.0),
        ("sscosamp_l1", "hybrid", 30.0),
        ("sscosamp_l1", "c_clusters:4", 60.0),
        ("sscosamp_l1", "alternating", 25.0),
        ("sscosamp_l1", "pair_spread", 35.0),
        ("omp", "spread", 60.0),
        ("usscosamp_alt", "hybrid", 65.0),
        ("usscosamp_alt", "c_clusters:2", 80.0),
        ("usscosamp_alt", "c_clusters:4", 30.0),
    ];
    for (alg, class, want) in anchors {
        let r = rate(t, alg, class, 100.0);
        c.check(
            near(r, want, 20.0),
            format!("{alg} on {class}: {r}% (want {want} ± 20)"),
        );
    }
    c
}

fn criterion3() -> Criterion {
    let mut c = Criterion::new();
    let mut cfg = preset("fig3_uniform_sep").unwrap();
    cfg.algorithms = algs(&["sscosamp_omp", "l1", "sscosamp_cosamp"]);
    let t = run(cfg);
    for s in 0..=10 {
        let s = s as f64;
        for alg in ["sscosamp_omp", "l1"] {
            let r = rate(&t, alg, "uniform_sep", s);
            if s <= 3.0 {
                c.check(
                    r <= 10.0,
                    format!("{alg} at separation {s}: {r}% (want ≤ 10)"),
                );
            } else if s >= 5.0 {
                c.check(
                    r >= 90.0,
                    format!("{alg} at separation {s}: {r}% (want ≥ 90)"),
                );
            }
        }
        let r = rate(&t, "sscosamp_cosamp", "uniform_sep", s);
        if s == 0.0 {
            c.check(
                r >= 95.0,
                format!("sscosamp_cosamp at separation 0: {r}% (want ≥ 95)"),
            );
        } else if s >= 5.0 {
            c.check(
                r <= 10.0,
                format!("sscosamp_cosamp at separation {s}: {r}% (want ≤ 10)"),
            );
        }
    }
    c
}

fn criterion4() -> Criterion {
    let mut c = Criterion::new();
    let mut cfg = preset("fig3_two_cluster").unwrap();
    cfg.algorithms = algs(&["cosamp"]);
    let t = run(cfg);
    for s in 0..=10 {
        let r = rate(&t, "cosamp", "two_cluster_sep", s as f64);
        c.check(
            r >= 80.0,
            format!("cosamp at two-cluster separation {s}: {r}% (want ≥ 80)"),
        );
    }
    c
}

fn criterion5() -> Criterion {
    let mut c = Criterion::new();
    let mut cfg = preset("fig4_prune_vs_id").unwrap();
    cfg.sweep = harness::Sweep::Measurements { values: vec![100] };
    cfg.trials = 40;
    let t = run(cfg);
    let pairs = [
        (
            "clustered",
            "sscosamp_omp_id_cosamp_prune",
            "sscosamp_cosamp",
        ),
        ("spread", "sscosamp_cosamp_id_omp_prune", "sscosamp_omp"),
    ];
    for (class, mixed, pure) in pairs {
        let (a, b) = (rate(&t, mixed, class, 100.0), rate(&t, pure, class, 100.0));
        c.check(
            (a - b).abs() <= 15.0,
            format!("{class}: {mixed} {a}% vs {pure} {b}% (want |Δ| ≤ 15)"),
        );
    }
    c
}

fn criterion6() -> Criterion {
    let mut c = Criterion::new();
    for name in ["fig_uss_clustered", "fig_uss_spread"] {
        let mut cfg = preset(name).unwrap();
        cfg.algorithms = algs(&["usscosamp_alt", "usscosamp_union"]);
        cfg.trials = 40;
        let class = cfg.signals[0].to_string();
        let t = run(cfg);
        for alg in ["usscosamp_alt", "usscosamp_union"] {
            let worst = t
                .rows
                .iter()
                .filter(|r| r.algorithm == alg && r.grid_value >= 50.0)
                .map(|r| r.perfect_pct)
                .fold(100.0, f64::min);
            c.check(
                worst >= 95.0,
                format!("{alg} on {class}, m ≥ 50: worst {worst}% (want ≥ 95)"),
            );
        }
        if class == "spread" {
            let at = first_full(&t, "usscosamp_alt", &class);
            let pass = at.is_some_and(|m| (35.0..=45.0).contains(&m));
            c.check(
                pass,
                format!("usscosamp_alt first reaches 100% on spread at m = {at:?} (want 40 ± 5)"),
            );
        }
    }
    c
}

fn criterion7() -> Criterion {
    let mut c = Criterion::new();
    let mut cfg = preset("fig5_nomp").unwrap();
    cfg.algorithms = algs(&["nomp", "eps_omp"]);
    let t = run(cfg);
    for class in ["clustered", "spread", "hybrid"] {
        let at = first_full(&t, "nomp", class);
        let pass = at.is_some_and(|m| (44.0..=60.0).contains(&m));
        c.check(
            pass,
            format!("nomp first reaches 100% on {class} at m = {at:?} (want 52 ± 8)"),
        );
    }
    for m in t.config.sweep.values() {
        let (e, n) = (
            rate(&t, "eps_omp", "hybrid", m),
            rate(&t, "nomp", "hybrid", m),
        );
        if e < 100.0 {
            c.check(
                n > e,
                format!("hybrid m = {m}: nomp {n}% vs eps_omp {e}% (want nomp strictly higher)"),
            );
        }
    }
    c
}

fn random_cvec(rng: &mut SeededRng, len: usize) -> Vec<C64> {
    (0..len)
        .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect()
}

fn residual_outside(cols: &CMat, z: &[C64]) -> f64 {
    let p = linalg::project_onto_span(cols, z).unwrap();
    linalg::norm2(&linalg::sub(z, &p))
}

fn criterion8() -> Criterion {
    let mut c = Criterion::new();

    let mut worst_orth = 0.0f64;
    let mut worst_idem = 0.0f64;
    for seed in 0..200u64 {
        let mut rng = SeededRng::new(seed, &[8, 0]);
        let rows = 6 + (seed as usize % 10);
        let cols = 1 + (seed as usize % rows);
        let m = CMat::from_fn(rows, cols, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let b = random_cvec(&mut rng, rows);
        let beta = linalg::lstsq(&m, &b).unwrap();
        let r = linalg::sub(&b, &linalg::matvec(&m, &beta).unwrap());
        let g = linalg::adjoint_matvec(&m, &r).unwrap();
        worst_orth = worst_orth.max(linalg::norm_inf(&g) / linalg::norm2(&b));
        let p = linalg::project_onto_span(&m, &b).unwrap();
        let pp = linalg::project_onto_span(&m, &p).unwrap();
        worst_idem = worst_idem.max(linalg::norm2(&linalg::sub(&p, &pp)) / linalg::norm2(&b));
    }
    c.check(
        worst_orth <= 1e-10,
        format!("lstsq residual orthogonality, worst {worst_orth:.2e}"),
    );
    c.check(
        worst_idem <= 1e-10,
        format!("projector idempotency, worst {worst_idem:.2e}"),
    );

    let dict = build_overcomplete_dft(256, 4).unwrap();
    let mut worst_dirichlet = 0.0f64;
    for (i, j) in [
        (0, 1),
        (0, 2),
        (0, 3),
        (0, 4),
        (10, 17),
        (5, 1000),
        (100, 612),
        (0, 512),
        (3, 3),
    ] {
        let dot = linalg::dot(&dict.atom(i), &dict.atom(j)).norm();
        let delta = std::f64::consts::PI * (j as f64 - i as f64) / 1024.0;
        let want = if i == j {
            1.0
        } else {
            ((256.0 * delta).sin() / (256.0 * delta.sin())).abs()
        };
        worst_dirichlet = worst_dirichlet.max((dot - want).abs());
    }
    c.check(
        worst_dirichlet <= 1e-6,
        format!("Dirichlet correlations, worst error {worst_dirichlet:.2e}"),
    );

    let classes: Vec<StructureSpec> = [
        "clustered",
        "spread",
        "hybrid",
        "c_clusters:1",
        "c_clusters:2",
        "c_clusters:4",
        "alternating",
        "pair_spread",
        "uniform_sep:0",
        "uniform_sep:5",
        "two_cluster_sep:0",
        "two_cluster_sep:7",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect();
    for spec in &classes {
        let bad = (0..10_000u64)
            .filter(|&draw| {
                let mut rng = SeededRng::new(draw, &[8, 1]);
                let s = generate_support(spec, 8, 1024, &mut rng).unwrap();
                !validate_support(spec, &s, 8, 1024)
            })
            .count();
        c.check(
            bad == 0,
            format!("{spec}: {bad} of 10000 generated supports rejected"),
        );
    }

    let small = build_overcomplete_dft(64, 4).unwrap();
    let mut mismatched = 0;
    for seed in 0..50u64 {
        let rng = SeededRng::new(seed, &[8, 2]);
        let a = gaussian_measurement(40, 64, &mut rng.substream(0)).unwrap();
        let y = random_cvec(&mut rng.substream(1), 40);
        let phi = small.left_multiply(a.matrix()).unwrap();
        let cfg = SolverConfig::default();
        let o = omp(&phi, &y, 5, &cfg).unwrap();
        let n = nomp(&a, &small, &y, 5, 1, &cfg).unwrap();
        let same = o.support == n.support
            && o.alpha
                .iter()
                .zip(&n.alpha_hat)
                .all(|(p, q)| (p - q).norm() <= 1e-12);
        mismatched += usize::from(!same);
    }
    c.check(
        mismatched == 0,
        format!("nomp(w = 1) ≡ omp, {mismatched} of 50 instances differ"),
    );

    let tiny = build_overcomplete_dft(8, 2).unwrap();
    let cfg = SolverConfig::default();
    for s in 1..=2usize {
        let pairs: Vec<SupportSet> = if s == 1 {
            (0..16).map(|i| SupportSet::from_indices([i])).collect()
        } else {
            (0..16)
                .flat_map(|i| ((i + 1)..16).map(move |j| SupportSet::from_indices([i, j])))
                .collect()
        };
        for kind in ProjectionKind::ALL {
            let mut ratios = Vec::new();
            for seed in 0..100u64 {
                let z = random_cvec(&mut SeededRng::new(seed, &[8, 3]), 8);
                let best = pairs
                    .iter()
                    .map(|p| residual_outside(&tiny.columns(p).unwrap(), &z))
                    .fold(f64::INFINITY, f64::min);
                let got = sd_project(&tiny, &z, s, kind, &cfg).unwrap();
                ratios.push(residual_outside(&tiny.columns(&got).unwrap(), &z) / best);
            }
            let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = ratios.iter().cloned().fold(0.0, f64::max);
            let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
            let optimal = ratios.iter().filter(|r| **r <= 1.0 + 1e-9).count();
            c.check(
                min >= 1.0 - 1e-9 && max.is_finite(),
                format!(
                    "sd_project {kind} s = {s} vs exhaustive oracle: ratio mean {mean:.4}, max {max:.4}, optimal in {optimal}/100"
                ),
            );
        }
    }

    let mut sched = preset("fig3_uniform_sep").unwrap();
    sched.algorithms = algs(&[
        "sscosamp_cosamp",
        "sscosamp_omp",
        "cosamp",
        "omp",
        "nomp",
        "eps_omp",
    ]);
    sched.trials = 3;
    sched.record_timing = false;
    let csv_for = |p: usize| {
        let mut buf = Vec::new();
        emit_csv(&run_experiment(&sched, p).unwrap(), &mut buf).unwrap();
        buf
    };
    let serial = csv_for(1);
    let parallel = [2, 4, 8].iter().all(|&p| csv_for(p) == serial);
    c.check(
        parallel,
        "scheduling invariance: identical CSV bytes for 1, 2, 4, 8 workers".into(),
    );

    let mut golden = preset("fig1_clustered").unwrap();
    golden.trials = GOLDEN_TRIALS;
    golden.record_timing = false;
    let mut buf = Vec::new();
    emit_csv(&run_experiment(&golden, jobs()).unwrap(), &mut buf).unwrap();
    c.check(
        String::from_utf8(buf).unwrap() == GOLDEN,
        "fig1_clustered seed 42 CSV matches the golden snapshot".into(),
    );
    c
}

fn main() -> ExitCode {
    println!("acceptance suite, {} worker(s)", jobs());
    let mut results = Vec::new();

    let started = Instant::now();
    let t1 = table1();
    results.push(criterion1(&t1).finish(
        1,
        "recovery table hard anchors at m = 100 (±5 points)",
        started,
    ));
    results.push(criterion2(&t1).finish(
        2,
        "recovery table soft anchors at m = 100 (±20 points)",
        started,
    ));

    let steps: [(usize, &str, fn() -> Criterion); 6] = [
        (3, "separation transition", criterion3),
        (4, "two-cluster sweep", criterion4),
        (5, "prune dominance", criterion5),
        (6, "USSCoSaMP curves", criterion6),
        (7, "NOMP measurement threshold", criterion7),
        (8, "property suites", criterion8),
    ];
    for (id, title, f) in steps {
        let started = Instant::now();
        results.push(f().finish(id, title, started));
    }

    let passed = results.iter().filter(|r| **r).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
