//! Run manifests and the JSON/CSV envelopes that carry them.

use serde::Serialize;

use crate::exact::Rational;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Enough to rerun a command and get byte-identical output.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub argv: Vec<String>,
    pub seed: u64,
    pub version: &'static str,
    /// Only recorded on request, since it breaks byte-for-byte reproducibility.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

impl RunManifest {
    pub fn new(subcommand: &str, argv: Vec<String>, seed: u64) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            argv,
            seed,
            version: ARTIFACT_VERSION,
            wall_time_ms: None,
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    manifest: &'a RunManifest,
    result: &'a T,
}

/// `{"manifest": .., "result": ..}`, pretty-printed with a trailing newline.
pub fn json_document<T: Serialize>(
    manifest: &RunManifest,
    result: &T,
) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(&Envelope { manifest, result })?;
    s.push('\n');
    Ok(s)
}

/// A CSV table preceded by a `# manifest: {...}` comment line.
#[derive(Clone, Debug, Default)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, manifest: &RunManifest) -> Result<String, Box<dyn std::error::Error>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let body = String::from_utf8(w.into_inner()?)?;
        Ok(format!(
            "# manifest: {}\n{body}",
            serde_json::to_string(manifest)?
        ))
    }
}

/// The two CSV cells of an exact rational.
pub fn rational_cells(r: &Rational) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_carries_manifest() {
        let m = RunManifest::new("zeta", vec!["zeta".into()], 7);
        let mut t = CsvTable::new(&["level", "zeta_num", "zeta_den"]);
        let [n, d] = rational_cells(&Rational::new(9, 4));
        t.push(vec!["1".into(), n, d]);
        let out = t.render(&m).unwrap();
        let mut lines = out.lines();
        assert!(lines
            .next()
            .unwrap()
            .starts_with("# manifest: {\"subcommand\":\"zeta\""));
        assert_eq!(lines.next(), Some("level,zeta_num,zeta_den"));
        assert_eq!(lines.next(), Some("1,9,4"));
    }

    #[test]
    fn json_skips_wall_time() {
        let m = RunManifest::new("bounds", vec![], 0);
        let doc = json_document(&m, &Rational::new(1, 3)).unwrap();
        assert!(!doc.contains("wall_time"));
        assert!(doc.contains("\"num\": \"1\""));
    }
}
