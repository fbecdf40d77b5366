//! Output records and writers. CSV prints `#`-prefixed settings-echo lines,
//! a header row, then data rows; JSON-lines prints one object per record
//! with a fixed key order. Rows carry an `error` field so sweeps can record
//! per-point failures in-stream and keep going. No timestamps appear unless
//! timings were requested, keeping repeated runs byte-identical.

use serde::{Deserialize, Serialize};

fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v}")
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// A record type that knows its CSV layout.
pub trait Row: Serialize {
    fn header(timings: bool) -> Vec<&'static str>;
    fn fields(&self, timings: bool) -> Vec<String>;
}

fn sanitize(err: &str) -> String {
    err.replace(',', ";").replace('\n', " ")
}

macro_rules! tail_fields {
    ($self:ident, $out:ident, $timings:ident) => {
        if $timings {
            $out.push(fmt_opt($self.wall_time_ms));
        }
        $out.push($self.error.as_deref().map(sanitize).unwrap_or_default());
    };
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwoPieceRecord {
    pub x: f64,
    pub s: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub method: String,
    pub value: Option<f64>,
    pub abs_error_est: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Row for TwoPieceRecord {
    fn header(timings: bool) -> Vec<&'static str> {
        let mut h = vec!["x", "s", "L", "T", "method", "value", "abs_error_est"];
        if timings {
            h.push("wall_time_ms");
        }
        h.push("error");
        h
    }
    fn fields(&self, timings: bool) -> Vec<String> {
        let mut out = vec![
            fmt_f64(self.x),
            fmt_f64(self.s),
            fmt_f64(self.l),
            fmt_f64(self.t),
            self.method.clone(),
            fmt_opt(self.value),
            fmt_opt(self.abs_error_est),
        ];
        tail_fields!(self, out, timings);
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NPieceRecord {
    #[serde(rename = "N")]
    pub n: u32,
    pub x: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub value: Option<f64>,
    #[serde(rename = "f_N")]
    pub f_n: Option<f64>,
    pub fit_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Row for NPieceRecord {
    fn header(timings: bool) -> Vec<&'static str> {
        let mut h = vec!["N", "x", "L", "T", "value", "f_N", "fit_residual"];
        if timings {
            h.push("wall_time_ms");
        }
        h.push("error");
        h
    }
    fn fields(&self, timings: bool) -> Vec<String> {
        let mut out = vec![
            self.n.to_string(),
            fmt_f64(self.x),
            fmt_f64(self.l),
            fmt_f64(self.t),
            fmt_opt(self.value),
            fmt_opt(self.f_n),
            fmt_opt(self.fit_residual),
        ];
        tail_fields!(self, out, timings);
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingRecord {
    #[serde(rename = "N")]
    pub n: u32,
    pub x: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "f_N")]
    pub f_n: Option<f64>,
    pub fit: f64,
    pub fit_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Row for ScalingRecord {
    fn header(timings: bool) -> Vec<&'static str> {
        let mut h = vec!["N", "x", "L", "f_N", "fit", "fit_residual"];
        if timings {
            h.push("wall_time_ms");
        }
        h.push("error");
        h
    }
    fn fields(&self, timings: bool) -> Vec<String> {
        let mut out = vec![
            self.n.to_string(),
            fmt_f64(self.x),
            fmt_f64(self.l),
            fmt_opt(self.f_n),
            fmt_f64(self.fit),
            fmt_opt(self.fit_residual),
        ];
        tail_fields!(self, out, timings);
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThermoRecord {
    pub s: u32,
    #[serde(rename = "T_II")]
    pub tension_ii: f64,
    pub beta: f64,
    #[serde(rename = "F")]
    pub free_energy: Option<f64>,
    pub casimir_term: Option<f64>,
    pub integral_term: Option<f64>,
    #[serde(rename = "U")]
    pub internal_energy: Option<f64>,
    #[serde(rename = "S")]
    pub entropy: Option<f64>,
    pub beta_c: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Row for ThermoRecord {
    fn header(timings: bool) -> Vec<&'static str> {
        let mut h = vec!["s", "T_II", "beta", "F", "casimir_term", "integral_term", "U", "S", "beta_c"];
        if timings {
            h.push("wall_time_ms");
        }
        h.push("error");
        h
    }
    fn fields(&self, timings: bool) -> Vec<String> {
        let mut out = vec![
            self.s.to_string(),
            fmt_f64(self.tension_ii),
            fmt_f64(self.beta),
            fmt_opt(self.free_energy),
            fmt_opt(self.casimir_term),
            fmt_opt(self.integral_term),
            fmt_opt(self.internal_energy),
            fmt_opt(self.entropy),
            fmt_f64(self.beta_c),
        ];
        tail_fields!(self, out, timings);
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HagedornRecord {
    pub s: u32,
    #[serde(rename = "T_II")]
    pub tension_ii: f64,
    pub t_mean: f64,
    pub beta_c: f64,
    pub beta_c_alt: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Row for HagedornRecord {
    fn header(timings: bool) -> Vec<&'static str> {
        let mut h = vec!["s", "T_II", "t_mean", "beta_c", "beta_c_alt"];
        if timings {
            h.push("wall_time_ms");
        }
        h.push("error");
        h
    }
    fn fields(&self, timings: bool) -> Vec<String> {
        let mut out = vec![
            self.s.to_string(),
            fmt_f64(self.tension_ii),
            fmt_f64(self.t_mean),
            fmt_f64(self.beta_c),
            fmt_f64(self.beta_c_alt),
        ];
        tail_fields!(self, out, timings);
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QftURecord {
    pub z: f64,
    pub u: Option<f64>,
    pub abs_error_est: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_mc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_mc_se: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl QftURecord {
    pub fn header_mc(timings: bool, mc: bool) -> Vec<&'static str> {
        let mut h = vec!["z", "u", "abs_error_est"];
        if mc {
            h.push("u_mc");
            h.push("u_mc_se");
        }
        if timings {
            h.push("wall_time_ms");
        }
        h.push("error");
        h
    }
    pub fn fields_mc(&self, timings: bool, mc: bool) -> Vec<String> {
        let mut out = vec![fmt_f64(self.z), fmt_opt(self.u), fmt_opt(self.abs_error_est)];
        if mc {
            out.push(fmt_opt(self.u_mc));
            out.push(fmt_opt(self.u_mc_se));
        }
        tail_fields!(self, out, timings);
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QftQRecord {
    pub kappa: f64,
    #[serde(rename = "Q")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Row for QftQRecord {
    fn header(timings: bool) -> Vec<&'static str> {
        let mut h = vec!["kappa", "Q"];
        if timings {
            h.push("wall_time_ms");
        }
        h.push("error");
        h
    }
    fn fields(&self, timings: bool) -> Vec<String> {
        let mut out = vec![fmt_f64(self.kappa), fmt_opt(self.q)];
        tail_fields!(self, out, timings);
        out
    }
}

/// Output format of the data rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

/// Accumulates rendered lines for one run.
pub struct Writer {
    pub format: Format,
    pub timings: bool,
    lines: Vec<String>,
}

impl Writer {
    pub fn new(format: Format, timings: bool) -> Self {
        Writer { format, timings, lines: Vec::new() }
    }

    /// `#`-prefixed settings echo (CSV only; JSON-lines stays pure).
    pub fn echo(&mut self, key: &str, value: &str) {
        if self.format == Format::Csv {
            self.lines.push(format!("# {key}: {value}"));
        }
    }

    pub fn header<R: Row>(&mut self) {
        if self.format == Format::Csv {
            self.lines.push(R::header(self.timings).join(","));
        }
    }

    pub fn row<R: Row>(&mut self, r: &R) {
        match self.format {
            Format::Csv => self.lines.push(r.fields(self.timings).join(",")),
            Format::Jsonl => self
                .lines
                .push(serde_json::to_string(r).expect("record serialization cannot fail")),
        }
    }

    pub fn raw_header(&mut self, cols: &[&str]) {
        if self.format == Format::Csv {
            self.lines.push(cols.join(","));
        }
    }

    pub fn raw_row<R: Serialize>(&mut self, r: &R, fields: Vec<String>) {
        match self.format {
            Format::Csv => self.lines.push(fields.join(",")),
            Format::Jsonl => self
                .lines
                .push(serde_json::to_string(r).expect("record serialization cannot fail")),
        }
    }

    pub fn finish(self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}
