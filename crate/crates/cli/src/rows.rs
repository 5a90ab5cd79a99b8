//! Result rows, the fixed CSV schema, and deterministic formatting.
//!
//! Every numeric field is quantized to 10 significant digits when a row is
//! constructed, so emitting and re-parsing a file reproduces the in-memory
//! rows exactly and repeated runs are byte-identical.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;
use uavris_core::EvalMode;

/// Column order of every emitted CSV file.
pub const CSV_HEADER: [&str; 17] = [
    "experiment",
    "user",
    "engine",
    "mode",
    "sweep_var",
    "sweep_value",
    "n_elements",
    "snr_db",
    "k",
    "L",
    "eps2",
    "plos",
    "ber",
    "ci_low",
    "ci_high",
    "trials",
    "seed",
];

/// Which evaluation produced a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Engine {
    Analytic,
    Upper,
    Mc,
    OmaAnalytic,
    OmaMc,
    NoRisAnalytic,
    NoRisMc,
}

impl Engine {
    pub fn as_str(&self) -> &'static str {
        match self {
            Engine::Analytic => "analytic",
            Engine::Upper => "upper",
            Engine::Mc => "mc",
            Engine::OmaAnalytic => "oma_analytic",
            Engine::OmaMc => "oma_mc",
            Engine::NoRisAnalytic => "no_ris_analytic",
            Engine::NoRisMc => "no_ris_mc",
        }
    }

    /// Whether rows from this engine carry a confidence interval.
    pub fn is_simulation(&self) -> bool {
        matches!(self, Engine::Mc | Engine::OmaMc | Engine::NoRisMc)
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "analytic" => Ok(Engine::Analytic),
            "upper" => Ok(Engine::Upper),
            "mc" => Ok(Engine::Mc),
            "oma_analytic" => Ok(Engine::OmaAnalytic),
            "oma_mc" => Ok(Engine::OmaMc),
            "no_ris_analytic" => Ok(Engine::NoRisAnalytic),
            "no_ris_mc" => Ok(Engine::NoRisMc),
            other => Err(format!("unknown engine `{other}`")),
        }
    }
}

/// One line of the output CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment: String,
    /// `u1`, `u2`, or `system`.
    pub user: String,
    pub engine: Engine,
    pub mode: EvalMode,
    pub sweep_var: String,
    pub sweep_value: f64,
    pub n_elements: usize,
    pub snr_db: f64,
    pub k: f64,
    pub cells: u32,
    pub eps2: f64,
    pub plos: f64,
    pub ber: f64,
    /// `None` for closed-form rows; Wilson 95% bounds for simulated rows.
    pub ci: Option<(f64, f64)>,
    pub trials: u64,
    pub seed: u64,
}

impl ResultRow {
    /// Quantizes every float field to its emitted precision.
    pub fn quantized(mut self) -> Self {
        self.sweep_value = quantize(self.sweep_value);
        self.snr_db = quantize(self.snr_db);
        self.k = quantize(self.k);
        self.eps2 = quantize(self.eps2);
        self.plos = quantize(self.plos);
        self.ber = quantize(self.ber);
        self.ci = self.ci.map(|(lo, hi)| (quantize(lo), quantize(hi)));
        self
    }

    fn fields(&self) -> [String; 17] {
        let (ci_low, ci_high) = match self.ci {
            Some((lo, hi)) => (fmt_sig10(lo), fmt_sig10(hi)),
            None => (String::new(), String::new()),
        };
        [
            self.experiment.clone(),
            self.user.clone(),
            self.engine.to_string(),
            self.mode.to_string(),
            self.sweep_var.clone(),
            fmt_sig10(self.sweep_value),
            self.n_elements.to_string(),
            fmt_sig10(self.snr_db),
            fmt_sig10(self.k),
            self.cells.to_string(),
            fmt_sig10(self.eps2),
            fmt_sig10(self.plos),
            fmt_sig10(self.ber),
            ci_low,
            ci_high,
            self.trials.to_string(),
            self.seed.to_string(),
        ]
    }
}

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("refusing to write an empty result set")]
    Empty,
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: csv::Error,
    },
    #[error("{path}: unexpected header {found:?}")]
    Header { path: String, found: Vec<String> },
    #[error("{path} record {record}: {message}")]
    Field {
        path: String,
        record: usize,
        message: String,
    },
}

/// Formats with 10 significant digits, plain decimal notation for moderate
/// exponents and scientific otherwise, trailing zeros trimmed.
pub fn fmt_sig10(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.9e}");
    let (mantissa, exponent) = sci.split_once('e').expect("{:e} always has an exponent");
    let e: i32 = exponent.parse().expect("float exponent is an integer");
    if (-4..10).contains(&e) {
        let decimals = (9 - e).max(0) as usize;
        let mut s = format!("{x:.decimals$}");
        if s.contains('.') {
            while s.ends_with('0') {
                s.pop();
            }
            if s.ends_with('.') {
                s.pop();
            }
        }
        s
    } else {
        let mut m = mantissa.to_string();
        if m.contains('.') {
            while m.ends_with('0') {
                m.pop();
            }
            if m.ends_with('.') {
                m.pop();
            }
        }
        format!("{m}e{e}")
    }
}

/// Rounds to the value that the emitted representation parses back to.
pub fn quantize(x: f64) -> f64 {
    fmt_sig10(x).parse().expect("formatted floats re-parse")
}

/// Total order used for emission: the documented (experiment, user,
/// sweep value) prefix, then every remaining parameter column so that ties
/// break deterministically.
pub fn sort_rows(rows: &mut [ResultRow]) {
    rows.sort_by(|a, b| {
        (&a.experiment, &a.user)
            .cmp(&(&b.experiment, &b.user))
            .then(a.sweep_value.total_cmp(&b.sweep_value))
            .then(a.engine.cmp(&b.engine))
            .then(a.mode.to_string().cmp(&b.mode.to_string()))
            .then(a.n_elements.cmp(&b.n_elements))
            .then(a.k.total_cmp(&b.k))
            .then(a.cells.cmp(&b.cells))
            .then(a.eps2.total_cmp(&b.eps2))
            .then(a.plos.total_cmp(&b.plos))
            .then(a.snr_db.total_cmp(&b.snr_db))
    });
}

/// Writes the rows (assumed sorted) with the fixed header.
pub fn write_csv(path: &Path, rows: &[ResultRow]) -> Result<(), CsvError> {
    if rows.is_empty() {
        return Err(CsvError::Empty);
    }
    let mut out = String::new();
    out.push_str(&CSV_HEADER.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.fields().join(","));
        out.push('\n');
    }
    let mut file = std::fs::File::create(path).map_err(|source| CsvError::Io {
        path: path.display().to_string(),
        source,
    })?;
    file.write_all(out.as_bytes()).map_err(|source| CsvError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses a file produced by [`write_csv`] back into rows.
pub fn read_csv(path: &Path) -> Result<Vec<ResultRow>, CsvError> {
    let mut reader = csv::Reader::from_path(path).map_err(|source| CsvError::Read {
        path: path.display().to_string(),
        source,
    })?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|source| CsvError::Read {
            path: path.display().to_string(),
            source,
        })?
        .iter()
        .map(str::to_string)
        .collect();
    if header != CSV_HEADER {
        return Err(CsvError::Header {
            path: path.display().to_string(),
            found: header,
        });
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|source| CsvError::Read {
            path: path.display().to_string(),
            source,
        })?;
        let field_err = |message: String| CsvError::Field {
            path: path.display().to_string(),
            record: i + 1,
            message,
        };
        let get = |j: usize| record.get(j).unwrap_or("").to_string();
        let num = |j: usize| -> Result<f64, CsvError> {
            get(j)
                .parse()
                .map_err(|_| field_err(format!("bad number in column {}", CSV_HEADER[j])))
        };
        let ci = match (get(13).is_empty(), get(14).is_empty()) {
            (true, true) => None,
            (false, false) => Some((num(13)?, num(14)?)),
            _ => return Err(field_err("half-empty confidence interval".into())),
        };
        rows.push(ResultRow {
            experiment: get(0),
            user: get(1),
            engine: get(2).parse().map_err(field_err)?,
            mode: get(3).parse().map_err(field_err)?,
            sweep_var: get(4),
            sweep_value: num(5)?,
            n_elements: get(6)
                .parse()
                .map_err(|_| field_err("bad n_elements".into()))?,
            snr_db: num(7)?,
            k: num(8)?,
            cells: get(9).parse().map_err(|_| field_err("bad L".into()))?,
            eps2: num(10)?,
            plos: num(11)?,
            ber: num(12)?,
            ci,
            trials: get(15).parse().map_err(|_| field_err("bad trials".into()))?,
            seed: get(16).parse().map_err(|_| field_err("bad seed".into()))?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // frozen oracle digits
mod tests {
    use super::*;

    #[test]
    fn ten_significant_digits_in_both_notations() {
        assert_eq!(fmt_sig10(0.0), "0");
        assert_eq!(fmt_sig10(50.0), "50");
        assert_eq!(fmt_sig10(0.2), "0.2");
        assert_eq!(fmt_sig10(1.0 / 3.0), "0.3333333333");
        assert_eq!(fmt_sig10(123456789.123), "123456789.1");
        assert_eq!(fmt_sig10(1.23e-7), "1.23e-7");
        assert_eq!(fmt_sig10(9.87654321049e14), "9.87654321e14");
        assert_eq!(fmt_sig10(-0.0024589281168268421), "-0.002458928117");
    }

    #[test]
    fn quantize_is_idempotent() {
        for x in [
            0.0,
            0.1,
            1.0 / 3.0,
            2.151523e-3,
            4.5997879656087384e-9,
            123456.789,
            -7.25e-33,
        ] {
            let q = quantize(x);
            assert_eq!(quantize(q), q);
            assert_eq!(fmt_sig10(q), fmt_sig10(x));
        }
    }

    fn sample_row() -> ResultRow {
        ResultRow {
            experiment: "fig2".into(),
            user: "u1".into(),
            engine: Engine::Mc,
            mode: EvalMode::Consistent,
            sweep_var: "snr".into(),
            sweep_value: 35.0,
            n_elements: 64,
            snr_db: 35.0,
            k: 0.15,
            cells: 3,
            eps2: 0.2,
            plos: 0.30552019957556742,
            ber: 0.0123456789,
            ci: Some((0.0119, 0.0128)),
            trials: 100_000,
            seed: 42,
        }
        .quantized()
    }

    #[test]
    fn csv_round_trip_reproduces_rows() {
        let dir = std::env::temp_dir().join(format!("rows-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("round_trip.csv");
        let mut rows = vec![sample_row()];
        rows.push(ResultRow {
            user: "u2".into(),
            engine: Engine::Analytic,
            ci: None,
            ber: 3.3e-12,
            ..sample_row()
        });
        write_csv(&path, &rows).unwrap();
        let back = read_csv(&path).unwrap();
        assert_eq!(back, rows);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn empty_row_set_is_rejected_without_touching_the_path() {
        let path = std::env::temp_dir().join("rows-test-never-created.csv");
        let err = write_csv(&path, &[]).unwrap_err();
        assert!(matches!(err, CsvError::Empty));
        assert!(!path.exists());
    }

    #[test]
    fn sort_is_total_and_stable_under_shuffles() {
        let mut a = sample_row();
        a.user = "u2".into();
        let mut b = sample_row();
        b.sweep_value = 30.0;
        b.snr_db = 30.0;
        let mut c = sample_row();
        c.engine = Engine::Analytic;
        c.ci = None;
        let mut first = vec![a.clone(), b.clone(), c.clone()];
        let mut second = vec![c, a, b];
        sort_rows(&mut first);
        sort_rows(&mut second);
        assert_eq!(first, second);
        assert_eq!(first[0].sweep_value, 30.0);
        assert_eq!(first[1].engine, Engine::Analytic);
    }
}
