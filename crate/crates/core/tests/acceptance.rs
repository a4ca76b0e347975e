//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p fidelity-ur --test acceptance`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fs;
use std::time::Instant;

use rayon::prelude::*;

use fidelity_ur::domains::{
    boundary_from_quadratic, g_boundary, h_boundary, in_domain, region_file_name, region_samples,
    write_region_csv, DomainSpec,
};
use fidelity_ur::fidelity::{fidelity, fidelity_oracle, purification_overlap_search};
use fidelity_ur::metrics::MetricKind;
use fidelity_ur::states::{
    partial_trace_aux, purify, sample_mixed, sample_observable, splitmix64, stream_seed,
    DensityMatrix, ProjectiveObservable, PureState,
};
use fidelity_ur::sweep::{run_sweep, Mixedness, SweepConfig};
use fidelity_ur::uncertainty::{check_ur, measure};

const KINDS: [MetricKind; 3] = MetricKind::ALL;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

/// Random state of dimension `n` with auxiliary dimension drawn from
/// `1..=n+1`, so pure, rank-deficient and full-rank states all occur.
fn random_state(n: usize, seed: u64) -> DensityMatrix {
    let aux = 1 + (splitmix64(seed ^ 0xA5A5) % (n as u64 + 1)) as usize;
    sample_mixed(n, aux, seed)
}

fn pair_seeds(n: usize, i: u64) -> (u64, u64) {
    let base = stream_seed(2024, ((n as u64) << 32) | i);
    (stream_seed(base, 1), stream_seed(base, 2))
}

fn ac1_path_equivalence() -> Outcome {
    let start = Instant::now();
    let worst = (2..=8usize)
        .into_par_iter()
        .map(|n| {
            (0..1000u64)
                .map(|i| {
                    let (s1, s2) = pair_seeds(n, i);
                    let rho = random_state(n, s1);
                    let sigma = random_state(n, s2);
                    (fidelity(&rho, &sigma).unwrap() - fidelity_oracle(&rho, &sigma).unwrap()).abs()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst < 1e-9 && secs < 30.0,
        format!("7000 pairs, max |F - F_oracle| = {worst:.3e} (< 1e-9), {secs:.2}s (< 30s)"),
    )
}

fn ac2_fidelity_properties() -> Outcome {
    let failures: Vec<String> = (2..=8usize)
        .into_par_iter()
        .flat_map_iter(|n| {
            (0..1000u64).filter_map(move |i| {
                let (s1, s2) = pair_seeds(n, i);
                let rho = random_state(n, s1);
                let sigma = random_state(n, s2);
                let f = fidelity(&rho, &sigma).unwrap();
                let f_rev = fidelity(&sigma, &rho).unwrap();
                let f_self = fidelity(&rho, &rho).unwrap();
                let diff = rho.matrix().max_abs_diff(sigma.matrix()).unwrap();
                if !(0.0..=1.0).contains(&f) {
                    return Some(format!("N={n} i={i}: F={f} outside [0,1]"));
                }
                if (f_self - 1.0).abs() >= 1e-10 {
                    return Some(format!("N={n} i={i}: F(ρ,ρ)={f_self}"));
                }
                if (f - 1.0).abs() < 1e-9 && diff >= 1e-6 {
                    return Some(format!("N={n} i={i}: F≈1 but max|ρ-σ|={diff}"));
                }
                if (f - f_rev).abs() >= 1e-10 {
                    return Some(format!("N={n} i={i}: asymmetry {}", (f - f_rev).abs()));
                }
                None
            })
        })
        .collect();
    outcome(
        failures.is_empty(),
        format!(
            "normalisation, identity, symmetry over 7000 pairs: {} failures{}",
            failures.len(),
            failures.first().map(|f| format!(", first: {f}")).unwrap_or_default()
        ),
    )
}

fn ac3_triangle_inequality() -> Outcome {
    let start = Instant::now();
    let per_dim: Vec<(usize, [f64; 3])> = (2..=8usize)
        .into_par_iter()
        .map(|n| {
            let mut min = [f64::INFINITY; 3];
            for i in 0..10_000u64 {
                let base = stream_seed(77, ((n as u64) << 32) | i);
                let rho = sample_mixed(n, n, stream_seed(base, 1));
                let sigma = sample_mixed(n, n, stream_seed(base, 2));
                let tau = sample_mixed(n, n, stream_seed(base, 3));
                let f_sr = fidelity(&sigma, &rho).unwrap();
                let f_tr = fidelity(&tau, &rho).unwrap();
                let f_st = fidelity(&sigma, &tau).unwrap();
                for (k, kind) in KINDS.iter().enumerate() {
                    let d = |f: f64| fidelity_ur::metrics::f_of(*kind, f).unwrap();
                    min[k] = min[k].min(d(f_sr) + d(f_tr) - d(f_st));
                }
            }
            (n, min)
        })
        .collect();
    let worst = per_dim.iter().flat_map(|(_, m)| m.iter().copied()).fold(f64::INFINITY, f64::min);
    let mins: Vec<String> = KINDS
        .iter()
        .enumerate()
        .map(|(k, kind)| {
            let m = per_dim.iter().map(|(_, m)| m[k]).fold(f64::INFINITY, f64::min);
            format!("{kind} {m:.3e}")
        })
        .collect();
    outcome(
        worst >= -1e-9,
        format!(
            "70000 triples, min slack per metric [{}] (≥ -1e-9), {:.1}s",
            mins.join(", "),
            start.elapsed().as_secs_f64()
        ),
    )
}

fn ac4_uncertainty_relation_sweep() -> Outcome {
    let start = Instant::now();
    let dims: Vec<usize> = (2..=10).collect();
    let per_dim = 100_000u64.div_ceil(dims.len() as u64);
    let config = SweepConfig {
        dims,
        trials_per_dim: per_dim,
        seed: 20_131_017,
        kinds: KINDS.to_vec(),
        mixedness: Mixedness::Both,
        tolerance: 1e-9,
    };
    let result = run_sweep(&config, 1, &|_, _| {}).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let per_kind: Vec<String> = result
        .by_kind
        .iter()
        .map(|k| format!("{} trials={} violations={} min_slack={:.3e}", k.kind, k.trials, k.violations, k.min_slack))
        .collect();
    outcome(
        result.violations == 0 && result.by_kind.iter().all(|k| k.trials >= 100_000) && secs < 600.0,
        format!("single worker, {secs:.1}s (< 600s): {}", per_kind.join("; ")),
    )
}

fn ac5_certainty_case() -> Outcome {
    let rho = PureState::basis(2, 0).unwrap().to_density();
    let r = check_ur(
        MetricKind::Angle,
        &ProjectiveObservable::computational(2),
        &ProjectiveObservable::fourier(2),
        &rho,
    )
    .unwrap();
    let analytic = (r.u_a - 0.0).abs() < 1e-12
        && (r.u_b - FRAC_PI_4).abs() < 1e-12
        && (r.bound - FRAC_1_SQRT_2.acos()).abs() < 1e-12;
    outcome(
        r.slack.abs() < 1e-12 && analytic,
        format!("u_a={} u_b={} bound={} slack={:.3e} (|slack| < 1e-12)", r.u_a, r.u_b, r.bound, r.slack),
    )
}

fn ac6_boundary_cross_derivation() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for c in [0.2, FRAC_1_SQRT_2, 0.95] {
        for kind in KINDS {
            for p in curved_grid(c) {
                let diff = (boundary_from_quadratic(kind, c, p).unwrap() - h_boundary(kind, c, p).unwrap()).abs();
                worst = worst.max(diff);
                points += 1;
            }
        }
    }
    outcome(worst < 1e-10, format!("{points} grid points, max |quadratic - closed form| = {worst:.3e} (< 1e-10)"))
}

/// `c²`, then the 10⁻³ grid points above it, then `1`.
fn curved_grid(c: f64) -> Vec<f64> {
    let c2 = c * c;
    let mut grid = vec![c2];
    grid.extend((0..=1000).map(|i| i as f64 * 1e-3).filter(|&p| p > c2));
    grid
}

fn ac7_domain_ordering() -> Outcome {
    // N = 25 keeps 1/√N ≤ 0.2, so the whole grid is inside the box
    let dim = 25;
    let mut violations = 0;
    let mut min_gap = f64::INFINITY;
    let mut endpoint_err: f64 = 0.0;
    for c in [0.2, FRAC_1_SQRT_2, 0.95] {
        let grid: Vec<f64> = (40..=1000).map(|i| i as f64 * 1e-3).collect();
        for &p in &grid {
            let g: Vec<f64> = KINDS.iter().map(|&k| g_boundary(k, c, p, dim).unwrap()).collect();
            if !(g[0] <= g[1] + 1e-9 && g[1] <= g[2] + 1e-9) {
                violations += 1;
            }
            min_gap = min_gap.min((g[1] - g[0]).min(g[2] - g[1]));
        }
        for kind in KINDS {
            endpoint_err = endpoint_err.max((g_boundary(kind, c, 1.0, dim).unwrap() - c * c).abs());
            endpoint_err = endpoint_err.max((g_boundary(kind, c, c * c, dim).unwrap() - 1.0).abs());
        }
    }
    outcome(
        violations == 0 && endpoint_err < 1e-10,
        format!(
            "g_A ≤ g_B ≤ g_RI: {violations} violations (min gap {min_gap:.3e}); endpoint error {endpoint_err:.3e} (< 1e-10)"
        ),
    )
}

fn ac8_figure_data() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let dim = 20;
    let overlaps = [1.0 / 20f64.sqrt(), 0.2f64.sqrt(), 0.4f64.sqrt()];
    let mut files = 0;
    let mut nesting_failures = 0;
    let mut degenerate_ok = true;
    for (panel, &c) in overlaps.iter().enumerate() {
        let mut columns: Vec<Vec<(f64, f64)>> = Vec::new();
        for kind in KINDS {
            let spec = DomainSpec::new(kind, c, dim).unwrap();
            let path = dir.path().join(region_file_name(&spec));
            let file = fs::File::create(&path).unwrap();
            write_region_csv(file, &region_samples(&spec, 1001).unwrap()).unwrap();
            files += 1;
            let text = fs::read_to_string(&path).unwrap();
            let mut lines = text.lines();
            assert_eq!(lines.next(), Some("p,g"));
            columns.push(
                lines
                    .map(|l| {
                        let (p, g) = l.split_once(',').unwrap();
                        (p.parse().unwrap(), g.parse().unwrap())
                    })
                    .collect(),
            );
        }
        for ((a, b), r) in columns[0].iter().zip(&columns[1]).zip(&columns[2]) {
            if !(a.1 <= b.1 + 1e-9 && b.1 <= r.1 + 1e-9) {
                nesting_failures += 1;
            }
        }
        if panel == 0 {
            // c² = 1/N: only the first grid point is on the flat branch
            for col in &columns {
                degenerate_ok &= (col[0].1 - 1.0).abs() < 1e-9 && col[1..].iter().all(|&(_, g)| g < 1.0);
            }
        }
    }
    outcome(
        files == 9 && nesting_failures == 0 && degenerate_ok,
        format!("{files} CSV files (N=20), nesting failures {nesting_failures}, panel (a) flat branch degenerate: {degenerate_ok}"),
    )
}

fn ac9_physical_realizability() -> Outcome {
    let exclusions: usize = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let base = stream_seed(99, i);
            let n = 2 + (splitmix64(base) % 9) as usize;
            let rho = random_state(n, stream_seed(base, 1));
            let a = sample_observable(n, stream_seed(base, 2));
            let b = sample_observable(n, stream_seed(base, 3));
            let m = measure(&a, &b, &rho).unwrap();
            KINDS
                .iter()
                .filter(|&&k| !in_domain(k, m.overlap_c, n, m.p_max_a.value, m.p_max_b.value))
                .count()
        })
        .sum();
    outcome(exclusions == 0, format!("10000 triples × 3 domains, {exclusions} exclusions"))
}

fn ac10_purification() -> Outcome {
    let worst_round_trip = (0..500u64)
        .into_par_iter()
        .map(|i| {
            let n = 2 + (i % 7) as usize;
            let rho = random_state(n, stream_seed(5, i));
            let psi = purify(&rho).unwrap();
            let back = partial_trace_aux(&psi, n, psi.dim() / n).unwrap();
            back.matrix().max_abs_diff(rho.matrix()).unwrap()
        })
        .reduce(|| 0.0, f64::max);
    let worst_excess = (0..500u64)
        .into_par_iter()
        .map(|i| {
            let n = 2 + (i % 4) as usize;
            let (s1, s2) = pair_seeds(n, i + 10_000);
            let rho = random_state(n, s1);
            let sigma = random_state(n, s2);
            let found = purification_overlap_search(&rho, &sigma, 20, i).unwrap();
            found - fidelity(&rho, &sigma).unwrap()
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    outcome(
        worst_round_trip < 1e-10 && worst_excess <= 1e-9,
        format!("round trip max err {worst_round_trip:.3e} (< 1e-10); max(search - F) = {worst_excess:.3e} (≤ 1e-9)"),
    )
}

fn ac11_determinism() -> Outcome {
    let config = SweepConfig {
        dims: vec![2, 3, 5, 8],
        trials_per_dim: 2000,
        seed: 11,
        kinds: KINDS.to_vec(),
        mixedness: Mixedness::Both,
        tolerance: 1e-9,
    };
    let first = serde_json::to_string(&run_sweep(&config, 1, &|_, _| {}).unwrap()).unwrap();
    let again = serde_json::to_string(&run_sweep(&config, 1, &|_, _| {}).unwrap()).unwrap();
    let parallel = serde_json::to_string(&run_sweep(&config, 4, &|_, _| {}).unwrap()).unwrap();
    outcome(
        first == again && first == parallel,
        format!("repeat identical: {}, parallel (4 workers) identical: {}", first == again, first == parallel),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("AC1 fidelity path equivalence", ac1_path_equivalence),
        ("AC2 fidelity properties 1-3", ac2_fidelity_properties),
        ("AC3 triangle inequality, three metrics", ac3_triangle_inequality),
        ("AC4 uncertainty relation sweep", ac4_uncertainty_relation_sweep),
        ("AC5 certainty-case equality", ac5_certainty_case),
        ("AC6 boundary cross-derivation", ac6_boundary_cross_derivation),
        ("AC7 domain ordering and endpoints", ac7_domain_ordering),
        ("AC8 N=20 region data", ac8_figure_data),
        ("AC9 physical realizability", ac9_physical_realizability),
        ("AC10 purification contracts", ac10_purification),
        ("AC11 sweep determinism", ac11_determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let result = run();
        let tag = if result.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {name}: {}", result.detail);
        if !result.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
