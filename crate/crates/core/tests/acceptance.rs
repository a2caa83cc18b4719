//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::time::{Duration, Instant};

use lipz_core::grid::ShearFn;
use lipz_core::rational::{self, Rational};
use lipz_core::rigidity::RayCase;
use lipz_core::sample::{random_map, MapShape};
use lipz_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN_COUNTS: &str = include_str!("data/counts.csv");

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Criterion 1: zero residual-bound violations over every bi-Lipschitz
/// bijection of [0, n), n <= 9, caps (k, k), k in {1, 2, 3}.
fn exhaustive_verification() -> Outcome {
    let mut checked = 0;
    let mut violations = 0;
    let mut slowest = Duration::ZERO;
    for n in 1..=9 {
        for k in 1..=3 {
            let spec = EnumSpec::integer(n, k, k).unwrap();
            let started = Instant::now();
            let result = verify_theorem_parallel(&spec, threads());
            slowest = slowest.max(started.elapsed());
            checked += result.count;
            violations += result.violations.len();
            for f in &result.violations {
                eprintln!("  violation: {}", serde_json::to_string(f).unwrap());
            }
        }
    }
    let pass = violations == 0 && slowest < Duration::from_secs(300);
    outcome(
        pass,
        format!(
            "{checked} maps checked, {violations} violations, slowest spec {:.2}s",
            slowest.as_secs_f64()
        ),
    )
}

fn golden_counts() -> Vec<(usize, Rational, Rational, u64)> {
    GOLDEN_COUNTS
        .lines()
        .skip(1)
        .map(|line| {
            let cols: Vec<&str> = line.split(',').collect();
            (
                cols[0].parse().unwrap(),
                rational::parse_rational(cols[1]).unwrap(),
                rational::parse_rational(cols[2]).unwrap(),
                cols[3].parse().unwrap(),
            )
        })
        .collect()
}

/// Criterion 2: pruned enumeration agrees with the naive filter and with
/// the frozen golden table.
fn oracle_equivalence() -> Outcome {
    let caps = [
        rational::int(1),
        Rational::new(3, 2),
        rational::int(2),
        rational::int(3),
    ];
    let golden = golden_counts();
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for n in 1..=7 {
        for &kf in &caps {
            for &kb in &caps {
                let spec = EnumSpec::new(n, kf, kb).unwrap();
                let fast = enumerate(&spec, |_| {}).count;
                let naive = naive_count(&spec).unwrap();
                let frozen = golden
                    .iter()
                    .find(|g| g.0 == n && g.1 == kf && g.2 == kb)
                    .map(|g| g.3);
                compared += 1;
                if fast != naive || frozen != Some(naive) {
                    mismatches.push(format!("n={n} caps=({kf},{kb}): enumerate {fast}, naive {naive}, golden {frozen:?}"));
                }
            }
        }
    }
    let fixed = [(3, 1, 2), (3, 2, 6), (4, 1, 2)];
    for (n, k, expected) in fixed {
        let spec = EnumSpec::integer(n, k, k).unwrap();
        let got = enumerate(&spec, |_| {}).count;
        if got != expected {
            mismatches.push(format!(
                "n={n} caps=({k},{k}): expected {expected}, got {got}"
            ));
        }
    }
    for m in &mismatches {
        eprintln!("  {m}");
    }
    outcome(
        mismatches.is_empty(),
        format!("{compared} specs compared, {} mismatches", mismatches.len()),
    )
}

/// Criterion 3: ray images on 1000 random maps, 20 cut points each.
fn ray_images() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let shape = MapShape {
        max_support: 20,
        max_residual: 10,
        ..MapShape::default()
    };
    let (mut total, mut centered, mut narrow, mut consistent) = (0, 0, 0, 0);
    for _ in 0..1000 {
        let f = random_map(&mut rng, shape);
        let (lo, hi) = f.support_hull().unwrap_or((0, 0));
        let xs: Vec<i64> = (0..20).map(|_| rng.gen_range(lo - 15..=hi + 15)).collect();
        let expected = RayCase::for_orientation(f.orientation());
        let mut all_same = ray_dichotomy_consistency(&f, &xs);
        for &x in &xs {
            let p = ray_profile(&f, x);
            total += 1;
            centered += usize::from(p.centered);
            all_same &= p.case == expected;
            if p.within_half_bound() {
                narrow += 1;
            } else {
                eprintln!(
                    "  width {} > ceil(C/2) for C={} at x={x}: {}",
                    p.width,
                    p.bound,
                    serde_json::to_string(&f).unwrap()
                );
            }
        }
        consistent += usize::from(all_same);
    }
    outcome(
        centered == total && consistent == 1000,
        format!(
            "centered {centered}/{total}, dichotomy consistent {consistent}/1000, width <= ceil(C/2) {narrow}/{total} (reported, not gated)"
        ),
    )
}

/// Criterion 4: adjacent-gap constants equal the all-pairs supremum.
fn adjacency_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = 0;
    for _ in 0..500 {
        let f = random_map(&mut rng, MapShape::default());
        let len = rng.gen_range(2..=200i64);
        let (lo, hi) = f.support_hull().unwrap_or((0, 0));
        let start = rng.gen_range(lo - len..=hi);
        let w = f.window(start, start + len - 1);
        let p = window_lipschitz(&w).unwrap();
        let points: Vec<(i64, i64)> = w.points().collect();
        let mut forward = rational::int(0);
        let mut backward = rational::int(0);
        for (i, &(x1, y1)) in points.iter().enumerate() {
            for &(x2, y2) in &points[i + 1..] {
                forward = forward.max(Rational::new((y1 - y2).abs(), (x1 - x2).abs()));
                backward = backward.max(Rational::new((x1 - x2).abs(), (y1 - y2).abs()));
            }
        }
        if p.forward != forward || p.backward != backward {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("500 windows, {failures} mismatches"))
}

/// Criterion 5: Følner ratios stay above `1 - 2D/(2n+1)`.
fn folner_convergence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut maps = Vec::new();
    while maps.len() < 100 {
        let max_residual = rng.gen_range(0..=5);
        let shape = MapShape {
            max_support: 12,
            max_residual,
            max_offset: 10 - 2 * max_residual,
            max_start: 60,
        };
        let f = random_map(&mut rng, shape);
        if folner_curve(&f, &[]).displacement <= 10 {
            maps.push(f);
        }
    }
    let (mut checks, mut failures, mut small_d) = (0, 0, 0);
    for f in &maps {
        let curve = folner_curve(f, &[50, 100, 200]);
        for p in &curve.points {
            checks += 1;
            if p.report.ratio < p.lower_bound {
                failures += 1;
            }
        }
        if curve.displacement <= 3 {
            small_d += 1;
            checks += 1;
            if curve.points[2].report.ratio < Rational::new(195, 201) {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0 && small_d > 0,
        format!("{checks} checks over 100 maps ({small_d} with D <= 3), {failures} failures"),
    )
}

/// Criterion 6: the shear `(x, y) ↦ (x, x + y)` drifts from every isometry
/// and keeps a quarter of the box outside.
fn grid_failures() -> Outcome {
    let shear = GridMap::Shear(ShearFn::linear(1, 0));
    let gaps: Vec<Rational> = [4, 8, 16, 32]
        .iter()
        .map(|&n| isometry_gap(&shear, n).value)
        .collect();
    let increasing = gaps.windows(2).all(|w| w[0] < w[1]);
    let gap16 = gaps[2];
    let n = 200i64;
    let ratio = grid_folner_ratio(&shear, n as u64).value;
    // column x keeps 2n + 1 - |x| points
    let side = 2 * n + 1;
    let closed_form = Rational::new(side * side - n * (n + 1), side * side);
    // area of {|u + v| <= 1} in [-1, 1]^2 over 4, by exact midpoint rule
    let cells = 400i64;
    let inside = (0..cells)
        .flat_map(|i| (0..cells).map(move |j| (i, j)))
        .filter(|&(i, j)| {
            let u = Rational::new(2 * i + 1, cells) - 1;
            let v = Rational::new(2 * j + 1, cells) - 1;
            (u + v) <= rational::int(1) && (u + v) >= rational::int(-1)
        })
        .count() as i64;
    let area_fraction = Rational::new(inside, cells * cells);
    let three_quarters = Rational::new(3, 4);
    let tolerance = Rational::new(1, 100);
    let pass = increasing
        && gap16 >= rational::int(8)
        && ratio == closed_form
        && rational::abs(&(ratio - three_quarters)) <= tolerance
        && rational::abs(&(area_fraction - three_quarters)) <= tolerance;
    outcome(
        pass,
        format!(
            "isometry gaps {:?} at n=4,8,16,32; box ratio at n=200 = {} ({:.5}), closed form {}, area estimate {}",
            gaps.iter().map(|g| g.to_integer()).collect::<Vec<_>>(),
            rational::to_fraction_string(&ratio),
            *ratio.numer() as f64 / *ratio.denom() as f64,
            rational::to_fraction_string(&closed_form),
            rational::to_fraction_string(&area_fraction),
        ),
    )
}

/// Criterion 7: group laws on random maps; parallel enumeration matches sequential.
fn group_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = 0;
    for _ in 0..1000 {
        let f = random_map(&mut rng, MapShape::default());
        let g = random_map(&mut rng, MapShape::default());
        let h = random_map(&mut rng, MapShape::default());
        let associative = f.compose(&g).compose(&h) == f.compose(&g.compose(&h));
        let inverse =
            f.compose(&f.invert()) == EventuallyAffineMap::identity() && f.invert().invert() == f;
        let (lo, hi) = f.support_hull().unwrap_or((0, 0));
        let reach = f.max_residual() + 1;
        let round_trip = (lo - reach..=hi + reach)
            .chain((1..=10).map(|k| hi + reach + 37 * k))
            .all(|x| f.invert().evaluate(f.evaluate(x)) == x);
        let homomorphism = f.compose(&g).orientation() == f.orientation() * g.orientation();
        if !(associative && inverse && round_trip && homomorphism) {
            failures += 1;
        }
    }
    let spec = EnumSpec::integer(8, 2, 2).unwrap();
    let sequential = enumerate(&spec, |_| {});
    let parallel: Vec<_> = [1, 2, 4, threads()]
        .iter()
        .map(|&t| enumerate_parallel(&spec, t, |_| {}))
        .collect();
    let deterministic = parallel
        .iter()
        .all(|p| p.count == sequential.count && p.stats == sequential.stats);
    outcome(
        failures == 0 && deterministic,
        format!(
            "1000 trials, {failures} failures; n=8 caps (2,2): sequential {} vs parallel {:?}",
            sequential.count,
            parallel.iter().map(|p| p.count).collect::<Vec<_>>()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 7] = [
        (
            "1 exhaustive residual-bound verification",
            exhaustive_verification,
        ),
        ("2 enumeration oracle equivalence", oracle_equivalence),
        ("3 ray images and width", ray_images),
        ("4 adjacency identity", adjacency_identity),
        ("5 folner convergence", folner_convergence),
        ("6 plane failure demonstrations", grid_failures),
        ("7 group laws and determinism", group_laws),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let started = Instant::now();
        let result = run();
        let tag = if result.pass { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] criterion {name}: {} ({:.2}s)",
            result.detail,
            started.elapsed().as_secs_f64()
        );
        failed += usize::from(!result.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
