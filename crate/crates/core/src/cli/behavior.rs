//! Behavior files: four labelled 2×2 tables in cell order `++ +- -+ --`.
//!
//! ```text
//! behavior:
//!   site1 = A1 A2
//!   site2 = B1 B2
//!   A1/B1 = 0.5 0 0 0.5
//!   A1/B2 = 0.5 0 0 0.5
//!   A2/B1 = 0.5 0 0 0.5
//!   A2/B2 = 0 0.5 0.5 0
//! ```

use std::fmt::Write as _;

use crate::error::Result;
use crate::jpd::BehaviorTable;

use super::scenario::{parse_error, parse_f64, sections};

/// Parses a behavior file. Tables are checked for normalization only, so
/// signaling data reaches the feasibility check.
pub fn parse_behavior(text: &str) -> Result<BehaviorTable> {
    let secs = sections(text)?;
    let [sec] = secs.as_slice() else {
        return Err(parse_error(
            secs.get(1).map_or(1, |s| s.line),
            1,
            "expected exactly one `behavior:` section",
        ));
    };
    if sec.name != "behavior" {
        return Err(parse_error(
            sec.line,
            1,
            format!("unknown section `{}`", sec.name),
        ));
    }
    let mut site1: Option<[String; 2]> = None;
    let mut site2: Option<[String; 2]> = None;
    for e in &sec.entries {
        if e.key == "site1" || e.key == "site2" {
            let toks = e.values();
            if toks.len() != 2 || toks[0].text == toks[1].text {
                return Err(e.error(e.value_col, "expected two distinct setting labels"));
            }
            let labels = [toks[0].text.to_string(), toks[1].text.to_string()];
            if e.key == "site1" {
                site1 = Some(labels)
            } else {
                site2 = Some(labels)
            }
        }
    }
    let site1 = site1.unwrap_or_else(|| ["A1".into(), "A2".into()]);
    let site2 = site2.unwrap_or_else(|| ["B1".into(), "B2".into()]);

    let mut tables = [[[0.0; 4]; 2]; 2];
    let mut filled = [[false; 2]; 2];
    for e in &sec.entries {
        if e.key == "site1" || e.key == "site2" {
            continue;
        }
        let Some((a, b)) = e.key.split_once('/') else {
            return Err(e.error(
                e.key_col,
                format!(
                    "expected `<site-1 label>/<site-2 label>`, found `{}`",
                    e.key
                ),
            ));
        };
        let i = site1.iter().position(|l| l == a);
        let j = site2.iter().position(|l| l == b);
        let (Some(i), Some(j)) = (i, j) else {
            return Err(e.error(e.key_col, format!("unknown setting pair `{}`", e.key)));
        };
        if filled[i][j] {
            return Err(e.error(e.key_col, format!("table `{}` given twice", e.key)));
        }
        let toks = e.values();
        if toks.len() != 4 {
            return Err(e.error(e.value_col, "expected four probabilities p++ p+- p-+ p--"));
        }
        for (c, t) in toks.iter().enumerate() {
            tables[i][j][c] = parse_f64(t, e.line, "a probability")?;
        }
        filled[i][j] = true;
    }
    for (i, row) in filled.iter().enumerate() {
        for (j, f) in row.iter().enumerate() {
            if !f {
                return Err(parse_error(
                    sec.line,
                    1,
                    format!("missing table `{}/{}`", site1[i], site2[j]),
                ));
            }
        }
    }
    BehaviorTable::raw(site1, site2, tables)
}

pub fn behavior_to_text(b: &BehaviorTable) -> String {
    let mut s = String::from("behavior:\n");
    let (l1, l2) = (b.site1_labels(), b.site2_labels());
    let _ = writeln!(s, "  site1 = {} {}", l1[0], l1[1]);
    let _ = writeln!(s, "  site2 = {} {}", l2[0], l2[1]);
    for i in 0..2 {
        for j in 0..2 {
            let t = b.table(i, j);
            let _ = writeln!(
                s,
                "  {}/{} = {} {} {} {}",
                l1[i], l2[j], t[0], t[1], t[2], t[3]
            );
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    const PR: &str = "behavior:\n  site1 = A1 A2\n  site2 = B1 B2\n  A1/B1 = 0.5 0 0 0.5\n  A1/B2 = 0.5 0 0 0.5\n  A2/B1 = 0.5 0 0 0.5\n  A2/B2 = 0 0.5 0.5 0\n";

    #[test]
    fn parse_and_round_trip() {
        let b = parse_behavior(PR).unwrap();
        assert_eq!(b.table(1, 1), &[0.0, 0.5, 0.5, 0.0]);
        assert_eq!(parse_behavior(&behavior_to_text(&b)).unwrap(), b);
    }

    #[test]
    fn errors() {
        let missing = PR.replace("  A2/B2 = 0 0.5 0.5 0\n", "");
        assert!(matches!(parse_behavior(&missing), Err(Error::Parse { .. })));
        let bad = PR.replace("A2/B1", "A3/B1");
        assert!(matches!(
            parse_behavior(&bad),
            Err(Error::Parse {
                line: 6,
                column: 3,
                ..
            })
        ));
        let unnormalized = PR.replace("0 0.5 0.5 0", "0 0.5 0.5 0.5");
        assert!(matches!(
            parse_behavior(&unnormalized),
            Err(Error::InvalidBehavior(_))
        ));
    }
}
