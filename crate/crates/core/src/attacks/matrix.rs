use serde::{Deserialize, Serialize};

use crate::classfile::ClassFile;
use crate::config::WatermarkConfig;
use crate::extractor::{verify_model, Verdict};

use super::{
    attack_normalize_opcodes, attack_rename, attack_scramble_debug, attack_strip_debug, attack_trim, run_external,
    AttackError,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "attack", rename_all = "snake_case")]
pub enum Attack {
    Rename { seed: u64 },
    StripDebug,
    ScrambleDebug { seed: u64 },
    Trim { entry_points: Vec<String> },
    Normalize,
    External { command: String },
}

impl Attack {
    /// rename, strip, trim (no extra entry points) and normalize.
    pub fn builtin() -> Vec<Attack> {
        vec![
            Attack::Rename { seed: 0 },
            Attack::StripDebug,
            Attack::Trim { entry_points: Vec::new() },
            Attack::Normalize,
        ]
    }

    pub fn name(&self) -> String {
        match self {
            Attack::Rename { .. } => "rename".into(),
            Attack::StripDebug => "strip".into(),
            Attack::ScrambleDebug { .. } => "scramble".into(),
            Attack::Trim { .. } => "trim".into(),
            Attack::Normalize => "normalize".into(),
            Attack::External { command } => format!("external:{command}"),
        }
    }

    /// Attacked bytes of `input`. Only the external attack can see a file
    /// that does not parse.
    pub fn apply(&self, input: &[u8]) -> Result<Vec<u8>, AttackError> {
        if let Attack::External { command } = self {
            return run_external(command, input);
        }
        let cf = ClassFile::parse(input)?;
        let out = match self {
            Attack::Rename { seed } => attack_rename(&cf, *seed)?,
            Attack::StripDebug => attack_strip_debug(&cf),
            Attack::ScrambleDebug { seed } => attack_scramble_debug(&cf, *seed),
            Attack::Trim { entry_points } => {
                let e: Vec<&str> = entry_points.iter().map(String::as_str).collect();
                attack_trim(&cf, &e)?
            }
            Attack::Normalize => attack_normalize_opcodes(&cf),
            Attack::External { .. } => unreachable!(),
        };
        Ok(out.to_bytes()?)
    }
}

impl std::str::FromStr for Attack {
    type Err = String;

    /// `rename[:seed]`, `strip`, `scramble[:seed]`, `trim[:m1+m2]`,
    /// `normalize`, `external:<command>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let seed = |a: Option<&str>| a.map_or(Ok(0), |a| a.parse::<u64>().map_err(|e| format!("bad seed `{a}`: {e}")));
        match head {
            "rename" => Ok(Attack::Rename { seed: seed(arg)? }),
            "strip" => Ok(Attack::StripDebug),
            "scramble" => Ok(Attack::ScrambleDebug { seed: seed(arg)? }),
            "trim" => Ok(Attack::Trim {
                entry_points: arg.map(|a| a.split('+').filter(|x| !x.is_empty()).map(str::to_string).collect()).unwrap_or_default(),
            }),
            "normalize" => Ok(Attack::Normalize),
            "external" => match arg {
                Some(c) if !c.is_empty() => Ok(Attack::External { command: c.to_string() }),
                _ => Err("external attack needs a command: external:<command with {in} {out}>".into()),
            },
            _ => Err(format!("unknown attack `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "cell")]
pub enum Cell {
    Survived,
    Destroyed,
    Error { message: String },
}

impl Cell {
    pub fn label(&self) -> &'static str {
        match self {
            Cell::Survived => "Survived",
            Cell::Destroyed => "Destroyed",
            Cell::Error { .. } => "Error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub file: String,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurvivalMatrix {
    pub message: String,
    pub attacks: Vec<String>,
    pub rows: Vec<Row>,
}

impl SurvivalMatrix {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix serializes")
    }

    /// Aligned text table, one row per file.
    pub fn to_text(&self) -> String {
        let mut header = vec!["file".to_string()];
        header.extend(self.attacks.iter().cloned());
        let mut table = vec![header];
        for r in &self.rows {
            let mut line = vec![r.file.clone()];
            line.extend(r.cells.iter().map(|c| c.label().to_string()));
            table.push(line);
        }
        let widths: Vec<usize> =
            (0..table[0].len()).map(|c| table.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
        let mut s = String::new();
        for row in table {
            let cols: Vec<String> = row.iter().zip(&widths).map(|(x, w)| format!("{x:<w$}")).collect();
            s.push_str(cols.join("  ").trim_end());
            s.push('\n');
        }
        s
    }
}

fn cell(attack: &Attack, input: &[u8], message: &str, config: &WatermarkConfig) -> Cell {
    let bytes = match attack.apply(input) {
        Ok(b) => b,
        Err(e) => return Cell::Error { message: e.to_string() },
    };
    let cf = match ClassFile::parse(&bytes) {
        Ok(cf) => cf,
        Err(e) => return Cell::Error { message: format!("attacked file does not parse: {e}") },
    };
    match verify_model(&cf, message, config) {
        Ok(Verdict::Found { .. }) => Cell::Survived,
        Ok(Verdict::NotFound { .. }) => Cell::Destroyed,
        Err(e) => Cell::Error { message: e.to_string() },
    }
}

/// Applies every attack to every file and re-verifies `message`. Files are
/// processed on separate threads.
pub fn survival_matrix(
    corpus: &[(String, Vec<u8>)],
    attacks: &[Attack],
    message: &str,
    config: &WatermarkConfig,
) -> SurvivalMatrix {
    let rows = std::thread::scope(|s| {
        let handles: Vec<_> = corpus
            .iter()
            .map(|(file, bytes)| {
                s.spawn(move || Row {
                    file: file.clone(),
                    cells: attacks.iter().map(|a| cell(a, bytes, message, config)).collect(),
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("matrix worker")).collect()
    });
    SurvivalMatrix { message: message.to_string(), attacks: attacks.iter().map(Attack::name).collect(), rows }
}
