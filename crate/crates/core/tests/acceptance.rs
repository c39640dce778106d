//! Acceptance gate: one pass/fail line per criterion.

use std::f64::consts::{FRAC_PI_8, PI};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use janus::classical::{conditional_probability_classical, probability};
use janus::cli::{parse_records, Scenario};
use janus::harness::{
    anticorrelated_state, classical_embedding, embedding_report, epr_joint_probabilities,
    epr_state, joint_frequencies, polarizer_observable, sample_outcomes, two_step_vs_direct,
    EprScenario, SampleMode,
};
use janus::hilbert::{ComplexMatrix, ComplexVector, Kron};
use janus::jpd::{behavior_from_quantum, chsh_value, jpd_feasible, BehaviorTable};
use janus::quantum::{
    bipartite_luders_update, is_separable_pure, joint_distribution, luders_update_at,
    site_probability, Observable, QuantumState,
};
use janus::random::{
    random_density, random_hermitian, random_pure, random_unitary, random_weights,
    random_with_spectrum, seeded, JanusRng,
};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn random_observable(label: &str, dim: usize, rng: &mut JanusRng) -> Observable {
    // every third observable gets a degenerate spectrum
    let m = if rng.gen_range(0..3) == 0 && dim > 2 {
        let mut values: Vec<f64> = (0..dim).map(|i| (i / 2) as f64 - 1.0).collect();
        values.rotate_left(rng.gen_range(0..dim));
        random_with_spectrum(&values, rng)
    } else {
        random_hermitian(dim, rng)
    };
    Observable::new(label, m).unwrap()
}

fn random_dims(rng: &mut JanusRng) -> (usize, usize) {
    (rng.gen_range(2..=4), rng.gen_range(2..=4))
}

fn criterion_1() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 0..37 {
        let d = k as f64 * PI / 36.0;
        let a = 0.4;
        let t = epr_joint_probabilities(&EprScenario::standard(a, a - d)).unwrap();
        let (c2, s2) = (0.5 * d.cos().powi(2), 0.5 * d.sin().powi(2));
        for (got, want) in [(t.pp, c2), (t.mm, c2), (t.pm, s2), (t.mp, s2)] {
            worst = worst.max((got - want).abs());
        }
    }
    check(
        worst <= 1e-10,
        format!("37 angles, max |p - closed form| = {worst:.3e}"),
    )
}

fn criterion_2() -> Outcome {
    let state = epr_state();
    let (mut worst_overlap, mut worst_p): (f64, f64) = (0.0, 0.0);
    for k in 0..12 {
        let a = k as f64 * PI / 12.0;
        let pol = polarizer_observable(a);
        worst_p = worst_p.max((site_probability(&state, 0, &pol, 1.0).unwrap() - 0.5).abs());
        let post = bipartite_luders_update(&state, &pol, 1.0).unwrap();
        let dir = ComplexVector::from_real(&[a.cos(), a.sin()]).unwrap();
        worst_overlap =
            worst_overlap.max((post.overlap_with(&dir.tensor(&dir)).unwrap() - 1.0).abs());
    }
    check(
        worst_overlap <= 1e-10 && worst_p <= 1e-12,
        format!(
            "12 angles, max |overlap - 1| = {worst_overlap:.3e}, max |p(+) - 1/2| = {worst_p:.3e}"
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = seeded(3003);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let (d1, d2) = random_dims(&mut rng);
        let state = QuantumState::pure(random_pure(d1 * d2, &mut rng), &[d1, d2]).unwrap();
        let a = random_observable("A", d1, &mut rng);
        let b = random_observable("B", d2, &mut rng);
        worst = worst.max(two_step_vs_direct(&state, &a, &b).unwrap().max_difference());
    }
    check(
        worst <= 1e-10,
        format!("200 states, max |p(x)p(y|x) - p(x,y)| = {worst:.3e}"),
    )
}

fn commuting_pair(d: usize, rng: &mut JanusRng) -> (Observable, Observable) {
    let u = random_unitary(d, rng);
    let conj = |v: &[f64]| {
        u.matmul(&ComplexMatrix::diagonal(v))
            .unwrap()
            .matmul(&u.adjoint())
            .unwrap()
    };
    let va: Vec<f64> = (0..d).map(|_| rng.gen_range(0..3) as f64).collect();
    let vb: Vec<f64> = (0..d).map(|_| rng.gen_range(0..3) as f64 - 1.0).collect();
    (
        Observable::new("F", conj(&va)).unwrap(),
        Observable::new("G", conj(&vb)).unwrap(),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = seeded(4004);
    let mut worst: f64 = 0.0;
    for k in 0..200 {
        let (d1, d2) = random_dims(&mut rng);
        let state = if k % 4 == 3 {
            QuantumState::density(random_density(d1 * d2, &mut rng), &[d1, d2]).unwrap()
        } else {
            QuantumState::pure(random_pure(d1 * d2, &mut rng), &[d1, d2]).unwrap()
        };
        let report = if k % 2 == 0 {
            let a = random_observable("A", d1, &mut rng);
            let b = random_observable("B", d2, &mut rng);
            embedding_report(&state, (&a, 0), (&b, 1)).unwrap()
        } else {
            let (f, g) = commuting_pair(d2, &mut rng);
            embedding_report(&state, (&f, 1), (&g, 1)).unwrap()
        };
        worst = worst.max(report.max_difference());
    }
    check(
        worst <= 1e-10,
        format!("200 configurations, max |classical - quantum| = {worst:.3e}"),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = seeded(5005);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let (d1, d2) = random_dims(&mut rng);
        let state =
            QuantumState::product(&[random_pure(d1, &mut rng), random_pure(d2, &mut rng)]).unwrap();
        let a = random_observable("A", d1, &mut rng);
        let b = random_observable("B", d2, &mut rng);
        for x in a.outcomes() {
            if site_probability(&state, 0, &a, x).unwrap() <= 1e-12 {
                continue;
            }
            let post = luders_update_at(&state, 0, &a, x).unwrap();
            for y in b.outcomes() {
                let diff = site_probability(&post, 1, &b, y).unwrap()
                    - site_probability(&state, 1, &b, y).unwrap();
                worst = worst.max(diff.abs());
            }
        }
    }
    let bell = anticorrelated_state();
    let n = Observable::diagonal("N", &[0.0, 1.0]).unwrap();
    let mut change: f64 = 0.0;
    for x in [0.0, 1.0] {
        let post = luders_update_at(&bell, 0, &n, x).unwrap();
        for y in [0.0, 1.0] {
            change = change.max(
                (site_probability(&post, 1, &n, y).unwrap()
                    - site_probability(&bell, 1, &n, y).unwrap())
                .abs(),
            );
        }
    }
    check(
        worst <= 1e-10 && change >= 0.4,
        format!("200 product states, max |p(y|x) - p(y)| = {worst:.3e}; anticorrelated state change = {change:.3}"),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = seeded(6006);
    let (mut quantum, mut classical): (f64, f64) = (0.0, 0.0);
    let mut entangled = 0;
    while entangled < 200 {
        let (d1, d2) = random_dims(&mut rng);
        let state = QuantumState::pure(random_pure(d1 * d2, &mut rng), &[d1, d2]).unwrap();
        if is_separable_pure(&state).unwrap().separable {
            continue;
        }
        entangled += 1;
        let a = random_observable("A", d1, &mut rng);
        let b = random_observable("B", d2, &mut rng);
        let emb = classical_embedding(&state, (&a, 0), (&b, 1)).unwrap();
        for y in b.outcomes() {
            let (mut q_avg, mut c_avg) = (0.0, 0.0);
            for x in a.outcomes() {
                let px = site_probability(&state, 0, &a, x).unwrap();
                if px > 1e-12 {
                    let post = luders_update_at(&state, 0, &a, x).unwrap();
                    q_avg += px * site_probability(&post, 1, &b, y).unwrap();
                }
                let cx = probability(&emb.space, &emb.first, x).unwrap();
                if cx > 1e-12 {
                    c_avg += cx
                        * conditional_probability_classical(
                            &emb.space,
                            (&emb.first, x),
                            (&emb.second, y),
                        )
                        .unwrap();
                }
            }
            quantum = quantum.max((q_avg - site_probability(&state, 1, &b, y).unwrap()).abs());
            classical =
                classical.max((c_avg - probability(&emb.space, &emb.second, y).unwrap()).abs());
        }
    }
    check(
        quantum <= 1e-10 && classical <= 1e-10,
        format!(
            "200 entangled states, max deviation quantum {quantum:.3e}, classical {classical:.3e}"
        ),
    )
}

fn random_behavior(k: usize, rng: &mut JanusRng) -> BehaviorTable {
    let pol = |rng: &mut JanusRng| polarizer_observable(rng.gen_range(0.0..PI));
    let quantum = |rng: &mut JanusRng| {
        let s = QuantumState::pure(random_pure(4, rng), &[2, 2]).unwrap();
        let (a1, a2, b1, b2) = (pol(rng), pol(rng), pol(rng), pol(rng));
        behavior_from_quantum(&s, [&a1, &a2], [&b1, &b2]).unwrap()
    };
    let local = |rng: &mut JanusRng| {
        let mut q = [0.0; 16];
        // sparse mixtures reach the faces of the local polytope
        let support = rng.gen_range(1..=16);
        let w = random_weights(support, rng);
        for wi in w {
            q[rng.gen_range(0..16)] += wi;
        }
        BehaviorTable::from_joint(&q).unwrap()
    };
    let near_optimal = |rng: &mut JanusRng| {
        let base = rng.gen_range(0.0..PI);
        let mut at =
            |deg: f64| polarizer_observable(base + (deg + rng.gen_range(-12.0..12.0)).to_radians());
        let (a1, a2, b1, b2) = (at(0.0), at(45.0), at(22.5), at(67.5));
        behavior_from_quantum(&epr_state(), [&a1, &a2], [&b1, &b2]).unwrap()
    };
    let pr_box = || {
        let labels = |p: &str| [format!("{p}1"), format!("{p}2")];
        let (c, a) = ([0.5, 0.0, 0.0, 0.5], [0.0, 0.5, 0.5, 0.0]);
        BehaviorTable::new(labels("A"), labels("B"), [[c, c], [c, a]]).unwrap()
    };
    match k % 5 {
        0 => quantum(rng),
        1 => local(rng),
        2 => {
            let l = rng.gen::<f64>();
            quantum(rng).mix(&local(rng), l).unwrap()
        }
        3 => near_optimal(rng),
        _ => {
            let l = rng.gen::<f64>();
            pr_box().mix(&local(rng), l).unwrap()
        }
    }
}

fn criterion_7() -> Outcome {
    let s = epr_state();
    let pol = |deg: f64| polarizer_observable(deg.to_radians());
    let b = behavior_from_quantum(&s, [&pol(0.0), &pol(45.0)], [&pol(22.5), &pol(67.5)]).unwrap();
    let max = chsh_value(&b).max_abs().1.abs();
    let verdict = jpd_feasible(&b).unwrap();
    let optimal_ok = (max - 2.8284271247).abs() <= 1e-8 && !verdict.exists;

    let mut rng = seeded(7007);
    let (mut agree, mut violating) = (0, 0);
    for k in 0..1000 {
        let v = jpd_feasible(&random_behavior(k, &mut rng)).unwrap();
        agree += v.methods_agree() as usize;
        violating += (!v.feasible_by_chsh) as usize;
    }
    check(
        optimal_ok && agree == 1000,
        format!(
            "max|S| = {max:.10}, exists = {}; search and CHSH agree on {agree}/1000 behaviors ({violating} nonlocal)",
            verdict.exists
        ),
    )
}

fn criterion_8() -> Outcome {
    let trials = 100_000u64;
    let seed = 0x4A4E5553;
    let scn = EprScenario::standard(FRAC_PI_8, 0.0);
    let (a, b) = scn.observables();
    let exact: Vec<f64> = joint_distribution(&scn.state, &a, &b)
        .unwrap()
        .entries()
        .iter()
        .map(|e| e.2)
        .collect();
    let mut worst_sigma: f64 = 0.0;
    for mode in [SampleMode::Direct, SampleMode::TwoStep] {
        let run = sample_outcomes(&scn.state, &a, &b, trials, seed, mode).unwrap();
        for (f, p) in joint_frequencies(&run).iter().zip(&exact) {
            let sigma = (p * (1.0 - p) / trials as f64).sqrt();
            worst_sigma = worst_sigma.max((f - p).abs() / sigma);
        }
    }
    let eq = EprScenario::standard(0.7, 0.7);
    let (a, b) = eq.observables();
    let mut discordant = 0;
    for mode in [SampleMode::Direct, SampleMode::TwoStep] {
        discordant += sample_outcomes(&eq.state, &a, &b, trials, seed, mode)
            .unwrap()
            .discordant();
    }
    check(
        worst_sigma <= 4.0 && discordant == 0,
        format!("1e5 trials per mode, worst cell {worst_sigma:.2} sigma; equal angles: {discordant} discordant records"),
    )
}

fn criterion_9() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_janus"))
            .args(args)
            .current_dir(&dir)
            .env_remove("JANUS_SEED")
            .output()
            .expect("binary runs")
    };
    let mut failures = Vec::new();
    let goldens: [(&str, &[&str], i32); 6] = [
        ("epr_30", &["epr", "--angle-a", "0", "--angle-b", "30"], 0),
        (
            "epr_sampled",
            &[
                "epr",
                "--angle-a",
                "10",
                "--angle-b",
                "32.5",
                "--trials",
                "2000",
            ],
            0,
        ),
        (
            "update_bell",
            &["update", "--scenario", "scenarios/bell.scn"],
            0,
        ),
        (
            "compare_epr",
            &["compare", "--scenario", "scenarios/epr.scn"],
            0,
        ),
        ("jpd_epr", &["jpd", "--scenario", "scenarios/epr.scn"], 4),
        (
            "sample_epr",
            &[
                "sample",
                "--scenario",
                "scenarios/epr.scn",
                "--trials",
                "3",
                "--seed",
                "7",
            ],
            0,
        ),
    ];
    for (name, args, code) in goldens {
        let out = run(args);
        let want = std::fs::read_to_string(dir.join("tests/golden").join(format!("{name}.txt")))
            .unwrap_or_default();
        if out.status.code() != Some(code) || String::from_utf8_lossy(&out.stdout) != want {
            failures.push(name.to_string());
        }
        if parse_records(&want).is_err() {
            failures.push(format!("{name} records"));
        }
    }
    let statuses: [(&[&str], i32); 5] = [
        (&["compare", "--scenario", "scenarios/incompatible.scn"], 3),
        (&["jpd", "--behavior", "scenarios/signaling.beh"], 5),
        (
            &[
                "update",
                "--scenario",
                "scenarios/product.scn",
                "--outcome",
                "1",
            ],
            1,
        ),
        (&["epr", "--trials", "0"], 2),
        (&["jpd", "--behavior", "scenarios/product.beh"], 0),
    ];
    for (args, code) in statuses {
        if run(args).status.code() != Some(code) {
            failures.push(format!("exit status of {}", args.join(" ")));
        }
    }
    for name in ["bell", "product", "epr", "incompatible", "same_site"] {
        let text =
            std::fs::read_to_string(dir.join("scenarios").join(format!("{name}.scn"))).unwrap();
        let s = Scenario::parse(&text).unwrap();
        let again = Scenario::parse(&s.to_text()).unwrap();
        if s.state.operator_distance(&again.state) > 1e-12 || s.to_text() != again.to_text() {
            failures.push(format!("round trip of {name}.scn"));
        }
    }
    check(
        failures.is_empty(),
        if failures.is_empty() {
            "6 golden outputs, 5 exit statuses, 5 scenario round trips".to_string()
        } else {
            format!("failed: {}", failures.join(", "))
        },
    )
}

/// Name, check, and optional runtime ceiling.
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "EPR formula reproduction",
            criterion_1,
            Some(Duration::from_secs(1)),
        ),
        ("projection onto |a,a>", criterion_2, None),
        (
            "two-step equals direct",
            criterion_3,
            Some(Duration::from_secs(10)),
        ),
        ("classical-quantum update identity", criterion_4, None),
        ("separable invariance, entangled change", criterion_5, None),
        ("no-signaling on average", criterion_6, None),
        ("jpd and CHSH", criterion_7, Some(Duration::from_secs(30))),
        (
            "Monte Carlo consistency",
            criterion_8,
            Some(Duration::from_secs(5)),
        ),
        ("CLI contract", criterion_9, None),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut out = f();
        let elapsed = start.elapsed();
        if let Some(limit) = limit {
            if elapsed > *limit {
                out.pass = false;
                out.detail
                    .push_str(&format!("; runtime over {:.0?}", limit));
            }
        }
        failed += (!out.pass) as usize;
        println!(
            "criterion {}: {} {name}: {} ({:.2?})",
            i + 1,
            if out.pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed
        );
    }
    println!("acceptance: {}/9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
