use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::error::Error;
use crate::format::{fmt_g, fmt_outcome};
use crate::harness::{
    conditional_statistics, embedding_report, epr_state, joint_frequencies, polarizer_observable,
    sample_outcomes, two_step_vs_direct, ComparisonReport, SampleMode, SampleRun,
};
use crate::hilbert::{spectral_decompose_with, ComplexMatrix, ComplexVector, Kron};
use crate::jpd::{
    behavior_from_quantum, chsh_value, jpd_feasible_with, BehaviorTable, Witness, CHSH_PATTERNS,
};
use crate::quantum::{
    born_probability, joint_distribution, luders_update, luders_update_at, marginal_state,
    site_probability, Observable, QuantumState, StateKind,
};
use crate::tolerance::Tolerances;

use super::behavior::parse_behavior;
use super::record::Record;
use super::scenario::Scenario;
use super::{
    CompareArgs, EprArgs, Failure, JpdArgs, SampleArgs, SpectralArgs, UpdateArgs, DEFAULT_SEED,
    EXIT_FAILURE, EXIT_NO_JPD, EXIT_OK,
};

type CmdResult = Result<i32, Failure>;

pub(super) struct Context {
    pub tol: Tolerances,
    pub env_seed: Option<u64>,
}

impl Context {
    fn seed(&self, flag: Option<u64>, task: Option<u64>) -> u64 {
        flag.or(task).or(self.env_seed).unwrap_or(DEFAULT_SEED)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| {
        Failure::Io(std::io::Error::new(
            e.kind(),
            format!("cannot read {}: {e}", path.display()),
        ))
    })
}

fn load_scenario(path: &Path, tol: &Tolerances) -> Result<Scenario, Failure> {
    Scenario::parse_with(&read(path)?, tol).map_err(|e| Failure::File(path.to_path_buf(), e))
}

fn fmt_complex(z: Complex64) -> String {
    let (re, im) = (fmt_g(z.re), fmt_g(z.im));
    if im == "0" {
        re
    } else {
        format!("{re},{im}")
    }
}

fn fmt_entries(zs: &[Complex64]) -> String {
    zs.iter()
        .map(|z| fmt_complex(*z))
        .collect::<Vec<_>>()
        .join(";")
}

fn ket_label(mut k: usize, dims: &[usize]) -> String {
    let mut digits = vec![0; dims.len()];
    for (slot, &d) in digits.iter_mut().zip(dims).rev() {
        *slot = k % d;
        k /= d;
    }
    let sep = if dims.iter().all(|&d| d <= 10) {
        ""
    } else {
        ","
    };
    let parts: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
    format!("|{}>", parts.join(sep))
}

fn write_state(out: &mut dyn Write, which: &str, state: &QuantumState) -> Result<(), Failure> {
    match state.kind() {
        StateKind::Pure(v) => {
            writeln!(out, "{which} state (pure)")?;
            for (k, z) in v.entries().iter().enumerate() {
                if z.norm() > 1e-12 {
                    writeln!(
                        out,
                        "  {:<8} {}",
                        ket_label(k, state.site_dims()),
                        fmt_complex(*z)
                    )?;
                }
            }
            writeln!(
                out,
                "{}",
                Record::new("state")
                    .text("which", which)
                    .text("kind", "pure")
                    .text("amplitudes", fmt_entries(v.entries()))
            )?;
        }
        StateKind::Density(m) => {
            writeln!(out, "{which} state (density)")?;
            write_matrix(out, m)?;
            writeln!(
                out,
                "{}",
                Record::new("state")
                    .text("which", which)
                    .text("kind", "density")
                    .text("entries", fmt_entries(m.entries()))
            )?;
        }
    }
    Ok(())
}

fn write_matrix(out: &mut dyn Write, m: &ComplexMatrix) -> Result<(), Failure> {
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|c| format!("{:>16}", fmt_complex(m.get(r, c))))
            .collect();
        writeln!(out, "  {}", row.join(" "))?;
    }
    Ok(())
}

fn write_report(out: &mut dyn Write, name: &str, report: &ComparisonReport) -> Result<(), Failure> {
    writeln!(out, "{report}")?;
    for r in report.rows() {
        writeln!(
            out,
            "{}",
            Record::new("row")
                .text("report", name)
                .text("label", r.label.replace(' ', ""))
                .text(&report.left_heading, fmt_g(r.left))
                .text(&report.right_heading, fmt_g(r.right))
                .num("diff", r.difference)
                .text("pass", r.pass)
        )?;
    }
    writeln!(
        out,
        "{}",
        Record::new("verdict")
            .text("report", name)
            .text("pass", report.passed())
            .num("max_diff", report.max_difference())
    )?;
    Ok(())
}

fn with_tol(obs: &Observable, label: &str, tol: &Tolerances) -> Result<Observable, Error> {
    Observable::with_tolerances(label, obs.matrix().clone(), *tol)
}

pub(super) fn epr(ctx: &Context, a: EprArgs, out: &mut dyn Write) -> CmdResult {
    if !a.angle_a.is_finite() || !a.angle_b.is_finite() {
        return Err(Failure::Usage("angles must be finite".into()));
    }
    let (ra, rb) = (a.angle_a.to_radians(), a.angle_b.to_radians());
    let state = epr_state();
    let obs_a = with_tol(&polarizer_observable(ra), "a", &ctx.tol)?;
    let obs_b = with_tol(&polarizer_observable(rb), "b", &ctx.tol)?;
    let joint = joint_distribution(&state, &obs_a, &obs_b)?;

    writeln!(
        out,
        "polarizer pair on (|xx> + |yy>)/sqrt2, a = {} deg, b = {} deg",
        fmt_g(a.angle_a),
        fmt_g(a.angle_b)
    )?;
    writeln!(out, "  {:<4} {:<4} {:>16}", "x", "y", "p(x,y)")?;
    for (x, y, p) in joint.entries().into_iter().rev() {
        writeln!(
            out,
            "  {:<4} {:<4} {:>16}",
            fmt_outcome(x),
            fmt_outcome(y),
            fmt_g(p)
        )?;
    }
    writeln!(
        out,
        "{}",
        Record::new("epr")
            .num("a_deg", a.angle_a)
            .num("b_deg", a.angle_b)
            .num("pp", joint.at(1, 1))
            .num("pm", joint.at(1, 0))
            .num("mp", joint.at(0, 1))
            .num("mm", joint.at(0, 0))
    )?;

    writeln!(out, "conditionals p(y | x)")?;
    let zero = ctx.tol.zero_prob;
    let mut posts = Vec::new();
    for &x in obs_a.outcomes().iter().rev() {
        let px = site_probability(&state, 0, &obs_a, x)?;
        if px <= zero {
            writeln!(out, "  x = {}: zero probability, no update", fmt_outcome(x))?;
            continue;
        }
        let post = luders_update_at(&state, 0, &obs_a, x)?;
        for &y in obs_b.outcomes().iter().rev() {
            let p = site_probability(&post, 1, &obs_b, y)?;
            writeln!(
                out,
                "  p({} | {}) = {}",
                fmt_outcome(y),
                fmt_outcome(x),
                fmt_g(p)
            )?;
            writeln!(
                out,
                "{}",
                Record::new("conditional")
                    .text("x", fmt_outcome(x))
                    .text("y", fmt_outcome(y))
                    .num("p", p)
            )?;
        }
        posts.push((x, px, post));
    }

    writeln!(out, "post-measurement states after site-1 outcome x")?;
    for (x, px, post) in posts {
        // |a,a> for +1, |a⊥,a⊥> for -1
        let dir = if x > 0.0 {
            [ra.cos(), ra.sin()]
        } else {
            [-ra.sin(), ra.cos()]
        };
        let d = ComplexVector::from_real(&dir)?;
        let overlap = post.overlap_with(&d.tensor(&d))?;
        let amps = post
            .as_pure()
            .map(|v| v.entries().to_vec())
            .unwrap_or_default();
        writeln!(
            out,
            "  x = {}: p = {}, |<a_x,a_x|psi>| = {}, amplitudes {}",
            fmt_outcome(x),
            fmt_g(px),
            fmt_g(overlap),
            fmt_entries(&amps)
        )?;
        writeln!(
            out,
            "{}",
            Record::new("post")
                .text("x", fmt_outcome(x))
                .num("p", px)
                .num("overlap", overlap)
                .text("amplitudes", fmt_entries(&amps))
        )?;
    }

    if let Some(trials) = a.trials {
        let seed = ctx.seed(a.seed, None);
        let run = sample_outcomes(&state, &obs_a, &obs_b, trials, seed, a.mode.into())?;
        write_summary(
            out,
            &run,
            &joint.entries().iter().map(|e| e.2).collect::<Vec<_>>(),
        )?;
    }
    Ok(EXIT_OK)
}

fn write_summary(out: &mut dyn Write, run: &SampleRun, exact: &[f64]) -> Result<(), Failure> {
    let discordant = run.discordant();
    writeln!(
        out,
        "sampled {} trials, seed {}, mode {}",
        run.trials, run.seed, run.mode
    )?;
    writeln!(
        out,
        "  {:<6} {:<6} {:>8} {:>16} {:>16}",
        "x", "y", "count", "freq", "exact"
    )?;
    let counts = run.counts();
    let freqs = joint_frequencies(run);
    let n2 = run.second_outcomes.len();
    for (k, (&c, &f)) in counts.iter().zip(&freqs).enumerate() {
        let (x, y) = (run.first_outcomes[k / n2], run.second_outcomes[k % n2]);
        writeln!(
            out,
            "  {:<6} {:<6} {:>8} {:>16} {:>16}",
            fmt_outcome(x),
            fmt_outcome(y),
            c,
            fmt_g(f),
            fmt_g(exact[k])
        )?;
        writeln!(
            out,
            "{}",
            Record::new("frequency")
                .text("x", fmt_outcome(x))
                .text("y", fmt_outcome(y))
                .text("count", c)
                .num("freq", f)
                .num("exact", exact[k])
        )?;
    }
    for &x in &run.first_outcomes {
        if let Ok(stats) = conditional_statistics(run, x) {
            for (y, f) in &stats.entries {
                writeln!(
                    out,
                    "{}",
                    Record::new("subensemble")
                        .text("x", fmt_outcome(x))
                        .text("size", stats.count)
                        .text("y", fmt_outcome(*y))
                        .num("freq", *f)
                )?;
            }
        }
    }
    writeln!(out, "  discordant records: {discordant}")?;
    writeln!(
        out,
        "{}",
        Record::new("summary")
            .text("trials", run.trials)
            .text("seed", run.seed)
            .text("mode", run.mode)
            .text("discordant", discordant)
    )?;
    Ok(())
}

/// Observable and zero-based site for a name, defaulting the site.
fn resolve<'a>(
    scn: &'a Scenario,
    name: &str,
    default_site: usize,
) -> Result<(&'a Observable, usize), Failure> {
    let (obs, site) = scn
        .lookup(name)
        .ok_or_else(|| Failure::Usage(format!("no setting or observable named `{name}`")))?;
    let site = site.unwrap_or(default_site.min(scn.sites.len() - 1));
    Ok((obs, site))
}

fn task_pair(scn: &Scenario) -> Result<(&str, &str), Failure> {
    match (&scn.task.first, &scn.task.second) {
        (Some(f), Some(s)) => Ok((f, s)),
        _ => Err(Failure::Usage(
            "scenario task needs `first` and `second`".into(),
        )),
    }
}

pub(super) fn update(ctx: &Context, a: UpdateArgs, out: &mut dyn Write) -> CmdResult {
    let scn = load_scenario(&a.scenario, &ctx.tol)?;
    let name = a
        .observable
        .clone()
        .or_else(|| scn.task.observable.clone())
        .or_else(|| scn.task.first.clone())
        .ok_or_else(|| Failure::Usage("no observable given (use --observable)".into()))?;
    let outcome = a
        .outcome
        .or(scn.task.outcome)
        .ok_or_else(|| Failure::Usage("no outcome given (use --outcome)".into()))?;
    let (obs, site) = resolve(&scn, &name, 0)?;
    let site = a.site.map(|s| s as usize - 1).unwrap_or(site);
    if site >= scn.sites.len() {
        return Err(Failure::Usage(format!("site {} does not exist", site + 1)));
    }
    let state = &scn.state;
    let composite = state.sites() > 1;
    let p = if composite {
        site_probability(state, site, obs, outcome)?
    } else {
        born_probability(state, obs, outcome)?
    };
    writeln!(
        out,
        "measure {} on site {}, outcome {}",
        obs.label(),
        site + 1,
        fmt_outcome(outcome)
    )?;
    writeln!(out, "  p = {}", fmt_g(p))?;
    writeln!(
        out,
        "{}",
        Record::new("born")
            .text("observable", obs.label())
            .text("site", site + 1)
            .text("outcome", fmt_outcome(outcome))
            .num("p", p)
    )?;
    let post = if composite {
        luders_update_at(state, site, obs, outcome)?
    } else {
        luders_update(state, obs, outcome)?
    };
    write_state(out, "pre", state)?;
    write_state(out, "post", &post)?;
    if composite {
        for s in 0..state.sites() {
            for (which, st) in [("pre", state), ("post", &post)] {
                let m = marginal_state(st, s)?.density_matrix();
                writeln!(out, "site {} marginal ({which})", s + 1)?;
                write_matrix(out, &m)?;
                writeln!(
                    out,
                    "{}",
                    Record::new("marginal")
                        .text("which", which)
                        .text("site", s + 1)
                        .text("entries", fmt_entries(m.entries()))
                )?;
            }
        }
    }
    Ok(EXIT_OK)
}

pub(super) fn compare(ctx: &Context, a: CompareArgs, out: &mut dyn Write) -> CmdResult {
    let scn = load_scenario(&a.scenario, &ctx.tol)?;
    let (f, s) = task_pair(&scn)?;
    let (obs1, site1) = resolve(&scn, f, 0)?;
    let (obs2, site2) = resolve(&scn, s, 1)?;
    let report = embedding_report(&scn.state, (obs1, site1), (obs2, site2))?;
    write_report(out, "classical_embedding", &report)?;
    let mut passed = report.passed();
    if (site1, site2) == (0, 1) {
        let two = two_step_vs_direct(&scn.state, obs1, obs2)?;
        write_report(out, "two_step_vs_direct", &two)?;
        passed &= two.passed();
    }
    Ok(if passed { EXIT_OK } else { EXIT_FAILURE })
}

fn behavior_from_scenario(scn: &Scenario) -> Result<BehaviorTable, Failure> {
    let names = scn
        .task
        .settings
        .as_ref()
        .ok_or_else(|| Failure::Usage("scenario task needs `settings = A1 A2 B1 B2`".into()))?;
    if scn.sites.len() != 2 {
        return Err(Error::SiteMismatch("behaviors need a two-site state".into()).into());
    }
    let mut obs = Vec::with_capacity(4);
    for (k, n) in names.iter().enumerate() {
        let want = k / 2;
        let (o, site) = resolve(scn, n, want)?;
        if site != want {
            return Err(Error::SiteMismatch(format!(
                "setting `{n}` must act on site {}",
                want + 1
            ))
            .into());
        }
        obs.push(o);
    }
    Ok(behavior_from_quantum(
        &scn.state,
        [obs[0], obs[1]],
        [obs[2], obs[3]],
    )?)
}

pub(super) fn jpd(ctx: &Context, a: JpdArgs, out: &mut dyn Write) -> CmdResult {
    let behavior = match (&a.source.behavior, &a.source.scenario) {
        (Some(path), _) => {
            parse_behavior(&read(path)?).map_err(|e| Failure::File(path.clone(), e))?
        }
        (None, Some(path)) => behavior_from_scenario(&load_scenario(path, &ctx.tol)?)?,
        (None, None) => return Err(Failure::Usage("give --behavior or --scenario".into())),
    };
    let (l1, l2) = (
        behavior.site1_labels().clone(),
        behavior.site2_labels().clone(),
    );
    writeln!(out, "behavior {} {} | {} {}", l1[0], l1[1], l2[0], l2[1])?;
    writeln!(
        out,
        "  {:<12} {:>14} {:>14} {:>14} {:>14} {:>14}",
        "settings", "p++", "p+-", "p-+", "p--", "E"
    )?;
    for i in 0..2 {
        for j in 0..2 {
            let t = behavior.table(i, j);
            let e = behavior.correlator(i, j);
            let pair = format!("{}/{}", l1[i], l2[j]);
            writeln!(
                out,
                "  {:<12} {:>14} {:>14} {:>14} {:>14} {:>14}",
                pair,
                fmt_g(t[0]),
                fmt_g(t[1]),
                fmt_g(t[2]),
                fmt_g(t[3]),
                fmt_g(e)
            )?;
            writeln!(
                out,
                "{}",
                Record::new("table")
                    .text("first", &l1[i])
                    .text("second", &l2[j])
                    .num("pp", t[0])
                    .num("pm", t[1])
                    .num("mp", t[2])
                    .num("mm", t[3])
                    .num("E", e)
            )?;
        }
    }
    let chsh = chsh_value(&behavior);
    writeln!(out, "CHSH combinations over (E11, E12, E21, E22)")?;
    for (k, (v, pattern)) in chsh.values.iter().zip(CHSH_PATTERNS).enumerate() {
        let signs: String = pattern
            .iter()
            .map(|&s| if s > 0 { '+' } else { '-' })
            .collect();
        writeln!(out, "  #{k} {signs} {:>16}", fmt_g(*v))?;
        writeln!(
            out,
            "{}",
            Record::new("chsh")
                .text("index", k)
                .text("signs", signs)
                .num("value", *v)
        )?;
    }
    let (idx, max) = chsh.max_abs();
    writeln!(out, "  max |S| = {} (#{idx})", fmt_g(max.abs()))?;
    writeln!(
        out,
        "{}",
        Record::new("chsh_max")
            .text("index", idx)
            .num("value", max)
            .num("abs", max.abs())
    )?;

    let verdict = jpd_feasible_with(&behavior, &ctx.tol)?;
    match &verdict.witness {
        Witness::Distribution(q) => {
            writeln!(out, "verdict: a joint distribution exists")?;
            writeln!(out, "  witness over (a1,a2,b1,b2), + before -:")?;
            for (k, w) in q.iter().enumerate() {
                if *w > 1e-12 {
                    let signs: String = (0..4)
                        .map(|b| if (k >> (3 - b)) & 1 == 0 { '+' } else { '-' })
                        .collect();
                    writeln!(out, "    {signs} {}", fmt_g(*w))?;
                }
            }
            let weights: Vec<String> = q.iter().map(|w| fmt_g(*w)).collect();
            writeln!(
                out,
                "{}",
                Record::new("witness")
                    .text("kind", "distribution")
                    .text("weights", weights.join(";"))
            )?;
        }
        Witness::ViolatedInequality { index, value } => {
            writeln!(out, "verdict: no joint distribution exists")?;
            writeln!(
                out,
                "  violated CHSH combination #{index} = {}",
                fmt_g(*value)
            )?;
            writeln!(
                out,
                "{}",
                Record::new("witness")
                    .text("kind", "inequality")
                    .text("index", index)
                    .num("value", *value)
            )?;
        }
    }
    if !verdict.methods_agree() {
        writeln!(
            out,
            "  warning: feasibility search and CHSH criterion disagree"
        )?;
    }
    writeln!(
        out,
        "{}",
        Record::new("verdict")
            .text("exists", verdict.exists)
            .text("search", verdict.feasible_by_search)
            .text("chsh", verdict.feasible_by_chsh)
            .text("agree", verdict.methods_agree())
    )?;
    Ok(if verdict.exists { EXIT_OK } else { EXIT_NO_JPD })
}

pub(super) fn sample(ctx: &Context, a: SampleArgs, out: &mut dyn Write) -> CmdResult {
    let scn = load_scenario(&a.scenario, &ctx.tol)?;
    let (f, s) = task_pair(&scn)?;
    let (obs1, site1) = resolve(&scn, f, 0)?;
    let (obs2, site2) = resolve(&scn, s, 1)?;
    if (site1, site2) != (0, 1) {
        return Err(Error::SiteMismatch(
            "sampling needs `first` on site 1 and `second` on site 2".into(),
        )
        .into());
    }
    let trials = a.trials.or(scn.task.trials).unwrap_or(1000);
    let seed = ctx.seed(a.seed, scn.task.seed);
    let mode: SampleMode = a
        .mode
        .map(Into::into)
        .or(scn.task.mode)
        .unwrap_or(SampleMode::Direct);
    let run = sample_outcomes(&scn.state, obs1, obs2, trials, seed, mode)?;
    if !a.no_records {
        for r in &run.records {
            writeln!(
                out,
                "{}",
                Record::new("trial")
                    .text("index", r.trial)
                    .text("x", fmt_outcome(r.first))
                    .text("y", fmt_outcome(r.second))
            )?;
        }
    }
    let joint = joint_distribution(&scn.state, obs1, obs2)?;
    write_summary(
        out,
        &run,
        &joint.entries().iter().map(|e| e.2).collect::<Vec<_>>(),
    )?;
    Ok(EXIT_OK)
}

pub(super) fn spectral(ctx: &Context, a: SpectralArgs, out: &mut dyn Write) -> CmdResult {
    let (label, matrix) = match (&a.matrix, &a.scenario, &a.observable) {
        (Some(text), _, _) => {
            let doc =
                format!("state:\n  sites = 1\n  amplitudes = 1\nobservables:\n  M = {text}\n");
            let scn = Scenario::parse_with(&doc, &ctx.tol).map_err(|e| match e {
                Error::Parse {
                    column, message, ..
                } => Failure::Lib(Error::InvalidArgument(format!(
                    "--matrix: {message} (column {})",
                    column.saturating_sub(6)
                ))),
                other => Failure::Lib(other),
            })?;
            ("M".to_string(), scn.observables[0].2.matrix().clone())
        }
        (None, Some(path), Some(name)) => {
            let scn = load_scenario(path, &ctx.tol)?;
            let (obs, _) = resolve(&scn, name, 0)?;
            (name.clone(), obs.matrix().clone())
        }
        _ => {
            return Err(Failure::Usage(
                "give --matrix, or --scenario with --observable".into(),
            ))
        }
    };
    let dec = spectral_decompose_with(&matrix, &ctx.tol)?;
    let err = dec.reconstruct().max_abs_diff(&matrix);
    writeln!(
        out,
        "spectral decomposition of {label} (dimension {})",
        dec.source_dim()
    )?;
    for (k, pair) in dec.pairs().iter().enumerate() {
        writeln!(
            out,
            "  eigenvalue {} (rank {})",
            fmt_g(pair.value),
            pair.rank()
        )?;
        write_matrix(out, &pair.projector)?;
        writeln!(
            out,
            "{}",
            Record::new("eigenspace")
                .text("index", k)
                .num("value", pair.value)
                .text("rank", pair.rank())
                .text("projector", fmt_entries(pair.projector.entries()))
        )?;
    }
    writeln!(out, "  reconstruction error {}", fmt_g(err))?;
    writeln!(
        out,
        "{}",
        Record::new("spectral")
            .text("observable", &label)
            .text("dim", dec.source_dim())
            .text("clusters", dec.len())
            .num("reconstruction_error", err)
    )?;
    Ok(EXIT_OK)
}
