//! Result tables and their CSV/JSON renderings.

use crate::config::{Format, RunConfig};
use abfringe::CGS;
use serde::ser::{Serialize, Serializer};
use serde::Serialize as DeriveSerialize;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

impl Cell {
    /// Scientific notation with 12 significant digits.
    pub fn to_csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.11e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            _ => None,
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Num(v) if v.is_finite() => s.serialize_f64(*v),
            Cell::Num(_) | Cell::Missing => s.serialize_none(),
            Cell::Int(v) => s.serialize_i64(*v),
            Cell::Text(t) => s.serialize_str(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, DeriveSerialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn header(&self) -> String {
        format!("{}[{}]", self.name, self.unit)
    }
}

#[derive(Debug, Clone, PartialEq, DeriveSerialize)]
pub struct SummaryEntry {
    pub name: String,
    pub unit: String,
    pub value: Cell,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<SummaryEntry>,
}

#[derive(DeriveSerialize)]
struct Constants {
    hbar_erg_s: f64,
    c_cm_per_s: f64,
    #[serde(rename = "e_statC")]
    e_stat_c: f64,
    m_e_g: f64,
    #[serde(rename = "phase_per_flux_rad_per_G_cm2")]
    phase_per_flux: f64,
}

#[derive(DeriveSerialize)]
struct Metadata<'a> {
    experiment: &'a str,
    version: &'a str,
    constants: Constants,
    config: &'a RunConfig,
    summary: &'a [SummaryEntry],
}

#[derive(DeriveSerialize)]
struct Document<'a> {
    metadata: Metadata<'a>,
    columns: &'a [Column],
    rows: &'a [Vec<Cell>],
}

fn constants() -> Constants {
    Constants {
        hbar_erg_s: CGS.hbar,
        c_cm_per_s: CGS.c,
        e_stat_c: CGS.e,
        m_e_g: CGS.m_e,
        phase_per_flux: CGS.phase_per_flux(),
    }
}

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

impl ResultTable {
    pub fn new(columns: &[(&str, &str)]) -> Self {
        ResultTable {
            columns: columns
                .iter()
                .map(|(n, u)| Column {
                    name: n.to_string(),
                    unit: u.to_string(),
                })
                .collect(),
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn note(&mut self, name: &str, unit: &str, value: impl Into<Cell>) {
        self.summary.push(SummaryEntry {
            name: name.to_string(),
            unit: unit.to_string(),
            value: value.into(),
        });
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn render(&self, config: &RunConfig, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(config),
            Format::Json => self.to_json(config),
        }
    }

    pub fn to_csv(&self, config: &RunConfig) -> String {
        let mut out = String::new();
        let k = constants();
        out.push_str(&format!("# experiment: {}\n", config.experiment));
        out.push_str(&format!("# version: {VERSION}\n"));
        out.push_str(&format!(
            "# constants: hbar={:e} erg*s, c={:e} cm/s, e={:e} statC, m_e={:e} g\n",
            k.hbar_erg_s, k.c_cm_per_s, k.e_stat_c, k.m_e_g
        ));
        out.push_str(&format!(
            "# config: {}\n",
            serde_json::to_string(config).expect("config serialises")
        ));
        for s in &self.summary {
            out.push_str(&format!("# {}[{}]: {}\n", s.name, s.unit, s.value.to_csv()));
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(self.columns.iter().map(Column::header))
            .expect("writing to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv)).expect("writing to memory");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8"));
        out
    }

    pub fn to_json(&self, config: &RunConfig) -> String {
        let doc = Document {
            metadata: Metadata {
                experiment: config.experiment.as_str(),
                version: VERSION,
                constants: constants(),
                config,
                summary: &self.summary,
            },
            columns: &self.columns,
            rows: &self.rows,
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("document serialises");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Experiment;

    fn sample() -> ResultTable {
        let mut t = ResultTable::new(&[("B0", "G"), ("R", "cm"), ("regime", "-")]);
        t.push(vec![1.0.into(), 851.0963.into(), "marginal".into()]);
        t.push(vec![0.0.into(), Cell::Missing, "valid".into()]);
        t.note("peak_to_peak", "rad", 3.5);
        t
    }

    #[test]
    fn csv_layout() {
        let cfg = RunConfig::example(Experiment::Wb);
        let csv = sample().to_csv(&cfg);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# experiment: wb");
        assert!(lines.contains(&"# peak_to_peak[rad]: 3.50000000000e0"));
        let header = lines.iter().position(|l| !l.starts_with('#')).unwrap();
        assert_eq!(lines[header], "B0[G],R[cm],regime[-]");
        assert_eq!(lines[header + 1], "1.00000000000e0,8.51096300000e2,marginal");
        assert_eq!(lines[header + 2], "0.00000000000e0,,valid");
    }

    #[test]
    fn json_layout() {
        let cfg = RunConfig::example(Experiment::Wb);
        let v: serde_json::Value = serde_json::from_str(&sample().to_json(&cfg)).unwrap();
        assert_eq!(v["metadata"]["experiment"], "wb");
        assert_eq!(v["columns"][1]["unit"], "cm");
        assert!(v["rows"][1][1].is_null());
        assert_eq!(v["metadata"]["summary"][0]["value"], 3.5);
        let echoed = RunConfig::from_value(v["metadata"]["config"].clone()).unwrap();
        assert_eq!(echoed, cfg);
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(Cell::Num(-1.0 / 3.0).to_csv(), "-3.33333333333e-1");
        assert_eq!(Cell::Num(f64::NAN).to_csv(), "NaN");
    }
}
