//! Plain-text split systems.
//!
//! ```text
//! # comment
//! taxa a b c d e
//! a b | c d
//! a e | b c d
//! ```
//!
//! The `taxa` line declares the universe and must precede every split.

use std::fmt::Write;
use std::sync::Arc;

use splitclosure::{PartialSplit, SplitSystem, TaxonUniverse};

use crate::error::CliError;

pub fn parse(path: &str, text: &str) -> Result<SplitSystem, CliError> {
    let err = |line: usize, message: String| CliError::SplitsFile {
        path: path.to_string(),
        line,
        message,
    };
    let mut system: Option<SplitSystem> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line
            .strip_prefix("taxa")
            .filter(|r| r.is_empty() || r.starts_with(char::is_whitespace))
        {
            if system.is_some() {
                return Err(err(line_no, "second taxa line".into()));
            }
            let universe = TaxonUniverse::new(rest.split_whitespace())
                .map_err(|e| err(line_no, e.to_string()))?;
            system = Some(SplitSystem::new(Arc::new(universe)));
            continue;
        }
        let Some(sys) = system.as_mut() else {
            return Err(err(line_no, "split before the taxa line".into()));
        };
        let (a, b) = line
            .split_once('|')
            .ok_or_else(|| err(line_no, format!("expected `labels | labels`, got {line:?}")))?;
        let universe = sys.universe().clone();
        let side = |s: &str| {
            universe
                .set_of(s.split_whitespace())
                .map_err(|e| err(line_no, e.to_string()))
        };
        let split =
            PartialSplit::new(side(a)?, side(b)?).map_err(|e| err(line_no, e.to_string()))?;
        sys.insert(split).map_err(|e| err(line_no, e.to_string()))?;
    }
    system.ok_or_else(|| err(0, "no taxa line".into()))
}

pub fn write(system: &SplitSystem) -> String {
    let u = system.universe();
    let mut out = format!("taxa {}\n", u.names().join(" "));
    for s in system.iter() {
        let _ = writeln!(
            out,
            "{} | {}",
            u.join(s.first(), " "),
            u.join(s.second(), " ")
        );
    }
    out
}
