use std::io::Write;

use serde::Serialize;

pub const TYPO_FLAG: &str = "paper-typo-suspected";

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub suite: String,
    pub chart: Option<String>,
    pub grid: [usize; 2],
    pub output: String,
    pub seed: u64,
    pub dump: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Flagged,
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub case_id: String,
    pub inputs: String,
    pub computed: f64,
    /// Value the computation is checked against (oracle or bound).
    pub expected: Option<f64>,
    pub paper_value: Option<f64>,
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
    pub tolerance: Option<f64>,
    pub status: Status,
    pub flag: Option<String>,
    pub note: Option<String>,
}

impl Row {
    /// Relative comparison against an oracle value.
    pub fn compare(case_id: impl Into<String>, inputs: impl Into<String>, computed: f64, expected: f64, tolerance: f64) -> Self {
        let abs = (computed - expected).abs();
        let rel = if expected != 0.0 { abs / expected.abs() } else { abs };
        let ok = rel <= tolerance;
        Row {
            case_id: case_id.into(),
            inputs: inputs.into(),
            computed,
            expected: Some(expected),
            paper_value: None,
            abs_err: Some(abs),
            rel_err: Some(rel),
            tolerance: Some(tolerance),
            status: if ok { Status::Pass } else { Status::Fail },
            flag: None,
            note: None,
        }
    }

    /// Absolute comparison, for quantities whose expected value is zero.
    pub fn absolute(case_id: impl Into<String>, inputs: impl Into<String>, computed: f64, expected: f64, tolerance: f64) -> Self {
        let abs = (computed - expected).abs();
        let mut r = Row::compare(case_id, inputs, computed, expected, tolerance);
        r.rel_err = None;
        r.status = if abs <= tolerance { Status::Pass } else { Status::Fail };
        r
    }

    /// Passes when computed ≤ bound.
    pub fn at_most(case_id: impl Into<String>, inputs: impl Into<String>, computed: f64, bound: f64) -> Self {
        Row {
            case_id: case_id.into(),
            inputs: inputs.into(),
            computed,
            expected: None,
            paper_value: None,
            abs_err: None,
            rel_err: None,
            tolerance: Some(bound),
            status: if computed <= bound { Status::Pass } else { Status::Fail },
            flag: None,
            note: None,
        }
    }

    /// Passes when computed ≥ bound.
    pub fn at_least(case_id: impl Into<String>, inputs: impl Into<String>, computed: f64, bound: f64) -> Self {
        let mut r = Row::at_most(case_id, inputs, computed, bound);
        r.status = if computed >= bound { Status::Pass } else { Status::Fail };
        r
    }

    /// Reported value without a reference; passes when finite.
    pub fn value(case_id: impl Into<String>, inputs: impl Into<String>, computed: f64) -> Self {
        let mut r = Row::at_most(case_id, inputs, computed, f64::INFINITY);
        r.tolerance = None;
        r.status = if computed.is_finite() { Status::Pass } else { Status::Fail };
        r
    }

    pub fn failed(case_id: impl Into<String>, inputs: impl Into<String>, error: impl Into<String>) -> Self {
        let mut r = Row::at_most(case_id, inputs, f64::NAN, 0.0);
        r.status = Status::Fail;
        r.note = Some(error.into());
        r
    }

    pub fn paper(mut self, value: f64) -> Self {
        self.paper_value = Some(value);
        self
    }

    /// The printed constant disagrees with the oracle. Flagged rows never fail
    /// the run; an oracle mismatch is still recorded in the note.
    pub fn typo(mut self, note: impl Into<String>) -> Self {
        let mut note = note.into();
        if self.status == Status::Fail {
            note.push_str("; oracle mismatch");
        }
        self.flag = Some(TYPO_FLAG.into());
        self.note = Some(note);
        self.status = Status::Flagged;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub flagged: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub rows: Vec<Row>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: RunConfig, rows: Vec<Row>) -> Self {
        let mut summary = Summary::default();
        for r in &rows {
            match r.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Flagged => summary.flagged += 1,
            }
        }
        Report { config, rows, summary }
    }

    pub fn ok(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.rows {
            out.serialize(r)?;
        }
        out.flush()
    }
}
