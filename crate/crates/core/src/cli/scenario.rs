//! Scenario files.
//!
//! ```text
//! # Bell-type state with a number observable on each site
//! state:
//!   sites = 2 2
//!   amplitudes = 0 0.7071067811865476 0.7071067811865476 0
//!
//! observables:
//!   N = 0 0 0 1
//!
//! settings:
//!   A = N @ 1
//!   B = angle 22.5 @ 2
//!
//! task:
//!   first = A
//!   second = B
//!   trials = 1000
//! ```
//!
//! Complex numbers are written `re,im` or just `re`. Matrices are row-major
//! and their size is inferred from the entry count. `density = …` may replace
//! `amplitudes = …`; `normalize = true` rescales the amplitudes. Angles are in
//! degrees and sites are numbered from 1.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::format::fmt_g;
use crate::harness::{polarizer_observable, SampleMode};
use crate::hilbert::{ComplexMatrix, ComplexVector};
use crate::quantum::{Observable, QuantumState};
use crate::tolerance::Tolerances;

/// A whitespace-separated token and its 1-based column.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Token<'a> {
    pub col: usize,
    pub text: &'a str,
}

pub(crate) fn tokens(s: &str, offset: usize) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        if c.is_whitespace() {
            if let Some(st) = start.take() {
                out.push(Token {
                    col: offset + s[..st].chars().count(),
                    text: &s[st..i],
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(st) = start {
        out.push(Token {
            col: offset + s[..st].chars().count(),
            text: &s[st..],
        });
    }
    out
}

pub(crate) fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// One `key = value` line of a section.
#[derive(Debug, Clone)]
pub(crate) struct Entry<'a> {
    pub line: usize,
    pub key: &'a str,
    pub key_col: usize,
    pub value: &'a str,
    pub value_col: usize,
}

impl Entry<'_> {
    pub fn values(&self) -> Vec<Token<'_>> {
        tokens(self.value, self.value_col)
    }

    pub fn error(&self, col: usize, message: impl Into<String>) -> Error {
        parse_error(self.line, col, message)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Section<'a> {
    pub name: &'a str,
    pub line: usize,
    pub entries: Vec<Entry<'a>>,
}

/// Splits a document into `name:` sections of `key = value` entries.
pub(crate) fn sections(text: &str) -> Result<Vec<Section<'_>>> {
    let mut out: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.chars().take_while(|c| c.is_whitespace()).count();
        let col0 = indent + 1;
        if let Some(name) = trimmed.strip_suffix(':') {
            let name = name.trim();
            if name.is_empty() || name.contains(char::is_whitespace) || name.contains('=') {
                return Err(parse_error(line, col0, "malformed section header"));
            }
            out.push(Section {
                name,
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let Some(eq) = content.find('=') else {
            return Err(parse_error(
                line,
                col0,
                "expected `key = value` or `section:`",
            ));
        };
        let Some(section) = out.last_mut() else {
            return Err(parse_error(line, col0, "entry before any section header"));
        };
        let key = content[..eq].trim();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(parse_error(line, col0, "malformed key"));
        }
        let after = &content[eq + 1..];
        let lead = after.chars().take_while(|c| c.is_whitespace()).count();
        let value_col = content[..eq + 1].chars().count() + lead + 1;
        section.entries.push(Entry {
            line,
            key,
            key_col: col0,
            value: after.trim(),
            value_col,
        });
    }
    Ok(out)
}

pub(crate) fn parse_f64(tok: &Token, line: usize, what: &str) -> Result<f64> {
    tok.text
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| {
            parse_error(
                line,
                tok.col,
                format!("expected {what}, found `{}`", tok.text),
            )
        })
}

fn parse_complex(tok: &Token, line: usize) -> Result<Complex64> {
    let bad = || {
        parse_error(
            line,
            tok.col,
            format!("expected a complex number `re,im`, found `{}`", tok.text),
        )
    };
    let mut parts = tok.text.split(',');
    let re = parts
        .next()
        .ok_or_else(bad)?
        .parse::<f64>()
        .map_err(|_| bad())?;
    let im = match parts.next() {
        Some(s) => s.parse::<f64>().map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

fn complex_list(entry: &Entry) -> Result<Vec<Complex64>> {
    let toks = entry.values();
    if toks.is_empty() {
        return Err(entry.error(entry.value_col, "expected at least one number"));
    }
    toks.iter().map(|t| parse_complex(t, entry.line)).collect()
}

fn square_side(n: usize) -> Option<usize> {
    let d = (n as f64).sqrt().round() as usize;
    (d * d == n && d > 0).then_some(d)
}

fn fmt_complex(z: &Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{},{}", z.re, z.im)
    }
}

fn fmt_list(zs: &[Complex64]) -> String {
    zs.iter().map(fmt_complex).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateBody {
    Amplitudes(Vec<Complex64>),
    Density(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SettingSource {
    /// Polarizer at this many degrees.
    Angle(f64),
    /// Reference to an entry of the `observables` section.
    Named(String),
}

#[derive(Debug, Clone)]
pub struct Setting {
    pub name: String,
    pub source: SettingSource,
    /// Zero-based site, when given.
    pub site: Option<usize>,
    pub observable: Observable,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TaskSpec {
    pub first: Option<String>,
    pub second: Option<String>,
    pub settings: Option<[String; 4]>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub mode: Option<SampleMode>,
    pub observable: Option<String>,
    pub outcome: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub sites: Vec<usize>,
    pub body: StateBody,
    pub normalize: bool,
    pub state: QuantumState,
    pub observables: Vec<(String, Vec<Complex64>, Observable)>,
    pub settings: Vec<Setting>,
    pub task: TaskSpec,
}

pub fn parse_seed(text: &str) -> Option<u64> {
    let t = text.trim();
    match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16).ok(),
        None => t.parse().ok(),
    }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, &Tolerances::default())
    }

    pub fn parse_with(text: &str, tol: &Tolerances) -> Result<Self> {
        let secs = sections(text)?;
        let mut seen = Vec::new();
        for s in &secs {
            if !matches!(s.name, "state" | "observables" | "settings" | "task") {
                return Err(parse_error(
                    s.line,
                    1,
                    format!("unknown section `{}`", s.name),
                ));
            }
            if seen.contains(&s.name) {
                return Err(parse_error(
                    s.line,
                    1,
                    format!("duplicate section `{}`", s.name),
                ));
            }
            seen.push(s.name);
        }
        let find = |name: &str| secs.iter().find(|s| s.name == name);
        let state_sec =
            find("state").ok_or_else(|| parse_error(1, 1, "missing `state:` section"))?;
        let (sites, body, normalize, state) = parse_state(state_sec, tol)?;

        let mut observables: Vec<(String, Vec<Complex64>, Observable)> = Vec::new();
        if let Some(sec) = find("observables") {
            for e in &sec.entries {
                if observables.iter().any(|o| o.0 == e.key) {
                    return Err(e.error(e.key_col, format!("duplicate observable `{}`", e.key)));
                }
                let entries = complex_list(e)?;
                let d = square_side(entries.len()).ok_or_else(|| {
                    e.error(
                        e.value_col,
                        format!("{} entries do not form a square matrix", entries.len()),
                    )
                })?;
                let m = ComplexMatrix::new(d, d, entries.clone())
                    .map_err(|err| e.error(e.value_col, err.to_string()))?;
                let obs = Observable::with_tolerances(e.key, m, *tol)
                    .map_err(|err| e.error(e.value_col, err.to_string()))?;
                observables.push((e.key.to_string(), entries, obs));
            }
        }

        let mut settings: Vec<Setting> = Vec::new();
        if let Some(sec) = find("settings") {
            for e in &sec.entries {
                if settings.iter().any(|s| s.name == e.key)
                    || observables.iter().any(|o| o.0 == e.key)
                {
                    return Err(e.error(e.key_col, format!("name `{}` is already defined", e.key)));
                }
                settings.push(parse_setting(e, &observables, &sites, tol)?);
            }
        }

        let task = match find("task") {
            Some(sec) => parse_task(sec, &observables, &settings)?,
            None => TaskSpec::default(),
        };

        Ok(Self {
            sites,
            body,
            normalize,
            state,
            observables,
            settings,
            task,
        })
    }

    /// Observable and optional zero-based site for a setting or observable name.
    pub fn lookup(&self, name: &str) -> Option<(&Observable, Option<usize>)> {
        if let Some(s) = self.settings.iter().find(|s| s.name == name) {
            return Some((&s.observable, s.site));
        }
        self.observables
            .iter()
            .find(|o| o.0 == name)
            .map(|o| (&o.2, None))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("state:\n");
        let dims: Vec<String> = self.sites.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(s, "  sites = {}", dims.join(" "));
        match &self.body {
            StateBody::Amplitudes(a) => {
                let _ = writeln!(s, "  amplitudes = {}", fmt_list(a));
            }
            StateBody::Density(d) => {
                let _ = writeln!(s, "  density = {}", fmt_list(d));
            }
        }
        if self.normalize {
            s.push_str("  normalize = true\n");
        }
        if !self.observables.is_empty() {
            s.push_str("\nobservables:\n");
            for (name, entries, _) in &self.observables {
                let _ = writeln!(s, "  {name} = {}", fmt_list(entries));
            }
        }
        if !self.settings.is_empty() {
            s.push_str("\nsettings:\n");
            for set in &self.settings {
                let src = match &set.source {
                    SettingSource::Angle(deg) => format!("angle {deg}"),
                    SettingSource::Named(n) => n.clone(),
                };
                match set.site {
                    Some(site) => {
                        let _ = writeln!(s, "  {} = {src} @ {}", set.name, site + 1);
                    }
                    None => {
                        let _ = writeln!(s, "  {} = {src}", set.name);
                    }
                }
            }
        }
        let t = &self.task;
        if *t != TaskSpec::default() {
            s.push_str("\ntask:\n");
            if let Some(v) = &t.first {
                let _ = writeln!(s, "  first = {v}");
            }
            if let Some(v) = &t.second {
                let _ = writeln!(s, "  second = {v}");
            }
            if let Some(v) = &t.settings {
                let _ = writeln!(s, "  settings = {}", v.join(" "));
            }
            if let Some(v) = t.trials {
                let _ = writeln!(s, "  trials = {v}");
            }
            if let Some(v) = t.seed {
                let _ = writeln!(s, "  seed = {v}");
            }
            if let Some(v) = t.mode {
                let _ = writeln!(s, "  mode = {v}");
            }
            if let Some(v) = &t.observable {
                let _ = writeln!(s, "  observable = {v}");
            }
            if let Some(v) = t.outcome {
                let _ = writeln!(s, "  outcome = {}", fmt_g(v));
            }
        }
        s
    }
}

fn parse_state(
    sec: &Section,
    tol: &Tolerances,
) -> Result<(Vec<usize>, StateBody, bool, QuantumState)> {
    let mut sites: Option<(Vec<usize>, &Entry)> = None;
    let mut body: Option<(StateBody, &Entry)> = None;
    let mut normalize = false;
    for e in &sec.entries {
        match e.key {
            "sites" => {
                let dims = e
                    .values()
                    .iter()
                    .map(|t| {
                        t.text
                            .parse::<usize>()
                            .ok()
                            .filter(|&d| d > 0)
                            .ok_or_else(|| {
                                e.error(
                                    t.col,
                                    format!(
                                        "expected a positive site dimension, found `{}`",
                                        t.text
                                    ),
                                )
                            })
                    })
                    .collect::<Result<Vec<_>>>()?;
                if dims.is_empty() {
                    return Err(e.error(e.value_col, "expected at least one site dimension"));
                }
                sites = Some((dims, e));
            }
            "amplitudes" | "density" => {
                if body.is_some() {
                    return Err(e.error(e.key_col, "state given twice"));
                }
                let list = complex_list(e)?;
                let b = if e.key == "amplitudes" {
                    StateBody::Amplitudes(list)
                } else {
                    StateBody::Density(list)
                };
                body = Some((b, e));
            }
            "normalize" => {
                normalize = match e.value {
                    "true" | "yes" => true,
                    "false" | "no" => false,
                    other => {
                        return Err(e.error(
                            e.value_col,
                            format!("expected true or false, found `{other}`"),
                        ))
                    }
                };
            }
            other => return Err(e.error(e.key_col, format!("unknown state key `{other}`"))),
        }
    }
    let (dims, sites_entry) =
        sites.ok_or_else(|| parse_error(sec.line, 1, "state needs `sites = …`"))?;
    crate::hilbert::check_site_dims(&dims)
        .map_err(|err| sites_entry.error(sites_entry.value_col, err.to_string()))?;
    let (body, entry) = body
        .ok_or_else(|| parse_error(sec.line, 1, "state needs `amplitudes = …` or `density = …`"))?;
    let n: usize = dims.iter().product();
    let fail = |err: Error| entry.error(entry.value_col, err.to_string());
    let state = match &body {
        StateBody::Amplitudes(a) => {
            if a.len() != n {
                return Err(entry.error(
                    entry.value_col,
                    format!("expected {n} amplitudes, found {}", a.len()),
                ));
            }
            let v = ComplexVector::new(a.clone()).map_err(fail)?;
            if normalize {
                QuantumState::pure_normalized(v, &dims).map_err(fail)?
            } else {
                QuantumState::pure_with(v, &dims, tol).map_err(fail)?
            }
        }
        StateBody::Density(d) => {
            if d.len() != n * n {
                return Err(entry.error(
                    entry.value_col,
                    format!("expected {} density entries, found {}", n * n, d.len()),
                ));
            }
            let m = ComplexMatrix::new(n, n, d.clone()).map_err(fail)?;
            QuantumState::density_with(m, &dims, tol).map_err(fail)?
        }
    };
    Ok((dims, body, normalize, state))
}

fn parse_setting(
    e: &Entry,
    observables: &[(String, Vec<Complex64>, Observable)],
    sites: &[usize],
    tol: &Tolerances,
) -> Result<Setting> {
    let toks = e.values();
    let (main, site_tok) = match toks.iter().position(|t| t.text == "@") {
        Some(p) => {
            if p + 2 != toks.len() {
                return Err(e.error(toks[p].col, "expected a single site number after `@`"));
            }
            (&toks[..p], Some(toks[p + 1]))
        }
        None => (&toks[..], None),
    };
    let site = match site_tok {
        Some(t) => {
            let s = t
                .text
                .parse::<usize>()
                .ok()
                .filter(|&s| s >= 1 && s <= sites.len())
                .ok_or_else(|| {
                    e.error(t.col, format!("site must be between 1 and {}", sites.len()))
                })?;
            Some(s - 1)
        }
        None => None,
    };
    let (source, observable) = match main {
        [kw, deg] if kw.text == "angle" => {
            let d = parse_f64(deg, e.line, "an angle in degrees")?;
            let obs = polarizer_observable(d.to_radians());
            let obs = Observable::with_tolerances(e.key, obs.matrix().clone(), *tol)?;
            (SettingSource::Angle(d), obs)
        }
        [name] => {
            let found = observables
                .iter()
                .find(|o| o.0 == name.text)
                .ok_or_else(|| e.error(name.col, format!("unknown observable `{}`", name.text)))?;
            let obs = Observable::with_tolerances(e.key, found.2.matrix().clone(), *tol)?;
            (SettingSource::Named(name.text.to_string()), obs)
        }
        _ => {
            return Err(e.error(
                e.value_col,
                "expected `angle <degrees>` or an observable name",
            ))
        }
    };
    if let Some(s) = site {
        if sites[s] != observable.dim() {
            return Err(e.error(
                site_tok.map_or(e.value_col, |t| t.col),
                format!(
                    "site {} has dimension {}, observable has {}",
                    s + 1,
                    sites[s],
                    observable.dim()
                ),
            ));
        }
    }
    Ok(Setting {
        name: e.key.to_string(),
        source,
        site,
        observable,
    })
}

fn parse_task(
    sec: &Section,
    observables: &[(String, Vec<Complex64>, Observable)],
    settings: &[Setting],
) -> Result<TaskSpec> {
    let known = |name: &str| {
        settings.iter().any(|s| s.name == name) || observables.iter().any(|o| o.0 == name)
    };
    let single_name = |e: &Entry| -> Result<String> {
        let toks = e.values();
        match toks.as_slice() {
            [t] if known(t.text) => Ok(t.text.to_string()),
            [t] => Err(e.error(t.col, format!("unknown setting or observable `{}`", t.text))),
            _ => Err(e.error(e.value_col, "expected one name")),
        }
    };
    let mut task = TaskSpec::default();
    for e in &sec.entries {
        match e.key {
            "first" => task.first = Some(single_name(e)?),
            "second" => task.second = Some(single_name(e)?),
            "observable" => task.observable = Some(single_name(e)?),
            "settings" => {
                let toks = e.values();
                if toks.len() != 4 {
                    return Err(e.error(e.value_col, "expected four setting names A1 A2 B1 B2"));
                }
                for t in &toks {
                    if !known(t.text) {
                        return Err(
                            e.error(t.col, format!("unknown setting or observable `{}`", t.text))
                        );
                    }
                }
                task.settings = Some(std::array::from_fn(|i| toks[i].text.to_string()));
            }
            "trials" => {
                task.trials = Some(
                    e.value
                        .parse::<u64>()
                        .ok()
                        .filter(|&t| t >= 1)
                        .ok_or_else(|| e.error(e.value_col, "trials must be a positive integer"))?,
                );
            }
            "seed" => {
                task.seed = Some(
                    parse_seed(e.value)
                        .ok_or_else(|| e.error(e.value_col, "seed must be a 64-bit integer"))?,
                );
            }
            "mode" => {
                task.mode = Some(
                    e.value
                        .parse()
                        .map_err(|err: Error| e.error(e.value_col, err.to_string()))?,
                );
            }
            "outcome" => {
                let toks = e.values();
                let [t] = toks.as_slice() else {
                    return Err(e.error(e.value_col, "expected one outcome value"));
                };
                task.outcome = Some(parse_f64(t, e.line, "an outcome value")?);
            }
            other => return Err(e.error(e.key_col, format!("unknown task key `{other}`"))),
        }
    }
    Ok(task)
}
