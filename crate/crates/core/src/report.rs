//! Records, renderers and the end-to-end run used by the `ofnts` binary.
//!
//! Every renderer is a pure function of its records, so identical inputs
//! always give byte-identical output. Numbers in JSON are written with 17
//! significant digits; table cells are rounded half-even from the shortest
//! decimal form of each value.

use std::fmt::{self, Write as _};
use std::io;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::averages::{population_std_dev, std_dev, WeightScheme};
use crate::baselines::{build_ofn_mb, build_ofn_piasecki, OrderedPairTrapezoid};
use crate::error::{Error, Result};
use crate::ingest::{make_windows, parse_csv, Field, SeriesWindow, WindowSpec};
use crate::ofn::{build_ofn_new, BranchLine, Orientation, TrapezoidalOfn};
use crate::stats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Averages for the core, centers of mass for the support.
    New,
    /// Mass-balanced ordered fuzzy candlestick.
    Mb,
    /// Open/close translation of the candlestick.
    Piasecki,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::New => "new",
            Method::Mb => "mb",
            Method::Piasecki => "piasecki",
        }
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "new" => Ok(Method::New),
            "mb" => Ok(Method::Mb),
            "piasecki" => Ok(Method::Piasecki),
            other => Err(format!("unknown method `{other}` (expected new, mb or piasecki)")),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    /// One JSON array of records.
    Json,
    /// One record per line.
    JsonLines,
    Table,
    Csv,
    Svg,
    /// JSON array of statistics only.
    Stats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputSpec {
    pub path: PathBuf,
    pub label: String,
}

impl InputSpec {
    /// Labels the input with its file stem.
    pub fn from_path(path: impl Into<PathBuf>) -> Self {
        let path = path.into();
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        InputSpec { path, label }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub inputs: Vec<InputSpec>,
    pub field: Field,
    pub window: WindowSpec,
    /// Weighted average for the new construction, and `S2` source for `mb`.
    pub scheme: WeightScheme,
    /// `S1` source for `mb`.
    pub mb_first_scheme: WeightScheme,
    pub method: Method,
    pub format: OutputFormat,
    /// Print imprecision with 7 decimals in tables.
    pub extended_precision: bool,
}

impl RunConfig {
    pub fn new(inputs: Vec<InputSpec>, window: WindowSpec, method: Method, format: OutputFormat) -> Self {
        RunConfig {
            inputs,
            field: Field::Close,
            window,
            scheme: WeightScheme::default(),
            mb_first_scheme: WeightScheme::Simple,
            method,
            format,
            extended_precision: false,
        }
    }
}

/// Branch as `value = slope * alpha + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchCoefficients {
    pub slope: f64,
    pub intercept: f64,
}

impl From<BranchLine> for BranchCoefficients {
    fn from(line: BranchLine) -> Self {
        BranchCoefficients {
            slope: line.slope(),
            intercept: line.intercept(),
        }
    }
}

impl BranchCoefficients {
    pub fn at(&self, alpha: f64) -> f64 {
        self.intercept + alpha * self.slope
    }

    /// Caption form, e.g. `32.48α + 347.36` or `418.56 − 19.79α`.
    pub fn caption(&self) -> String {
        let slope = round_half_even(self.slope.abs(), 2);
        let intercept = round_half_even(self.intercept, 2);
        if self.slope < 0.0 {
            format!("{intercept} \u{2212} {slope}\u{3b1}")
        } else {
            format!("{slope}\u{3b1} + {intercept}")
        }
    }
}

/// One OFN built from one window of one input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OfnRecord {
    pub label: String,
    pub method: Method,
    pub field: String,
    pub scheme: String,
    pub window_start: String,
    pub window_end: String,
    pub n: usize,
    pub orientation: Orientation,
    pub proper: bool,
    pub a0_minus: f64,
    pub a1_minus: f64,
    pub a1_plus: f64,
    pub a0_plus: f64,
    pub up_branch: BranchCoefficients,
    pub down_branch: BranchCoefficients,
    pub sigma: f64,
    pub first_value: f64,
    pub last_value: f64,
    pub skew: Option<f64>,
    pub imprecision: Option<f64>,
    pub direction_strength: Option<f64>,
    pub area: Option<f64>,
    #[serde(skip)]
    pub sigma_population: f64,
}

impl OfnRecord {
    /// The record's endpoints as an OFN (proper or not).
    pub fn ofn(&self) -> TrapezoidalOfn {
        TrapezoidalOfn::new(
            self.a0_minus,
            self.a1_minus,
            self.a1_plus,
            self.a0_plus,
            self.orientation,
        )
    }
}

struct Shape {
    endpoints: [f64; 4],
    orientation: Orientation,
    up: BranchLine,
    down: BranchLine,
    ofn: Option<TrapezoidalOfn>,
}

impl From<TrapezoidalOfn> for Shape {
    fn from(ofn: TrapezoidalOfn) -> Self {
        use crate::ofn::Branch;
        Shape {
            endpoints: ofn.endpoints(),
            orientation: ofn.orientation(),
            up: ofn.branch(Branch::Up),
            down: ofn.branch(Branch::Down),
            ofn: ofn.is_proper().then_some(ofn),
        }
    }
}

impl From<OrderedPairTrapezoid> for Shape {
    fn from(pair: OrderedPairTrapezoid) -> Self {
        Shape {
            endpoints: pair.endpoints(),
            orientation: pair.orientation,
            up: pair.up(),
            down: pair.down(),
            ofn: pair.to_ofn().ok(),
        }
    }
}

/// Builds the record for one window.
pub fn build_record(
    label: &str,
    window: &SeriesWindow,
    method: Method,
    scheme: WeightScheme,
    mb_first_scheme: WeightScheme,
) -> Result<OfnRecord> {
    let values = window.values();
    let shape: Shape = match method {
        Method::New => build_ofn_new(values, scheme)?.into(),
        Method::Mb => build_ofn_mb(values, mb_first_scheme, scheme)?.into(),
        Method::Piasecki => build_ofn_piasecki(window)?.into(),
    };
    let scheme_name = match method {
        Method::New => scheme.to_string(),
        Method::Mb => format!("{mb_first_scheme}+{scheme}"),
        Method::Piasecki => "none".to_owned(),
    };
    let (skew, imprecision, direction_strength, area) = match &shape.ofn {
        Some(ofn) => (
            stats::skew(ofn)?,
            Some(stats::total_imprecision(ofn)?),
            Some(stats::direction_strength(ofn)?),
            Some(stats::total_area(ofn)?),
        ),
        None => (None, None, None, None),
    };
    let date = |d: Option<chrono::NaiveDate>| d.map(|d| d.format("%Y-%m-%d").to_string()).unwrap_or_default();
    let [a0_minus, a1_minus, a1_plus, a0_plus] = shape.endpoints;
    Ok(OfnRecord {
        label: label.to_owned(),
        method,
        field: window.field().to_string(),
        scheme: scheme_name,
        window_start: date(window.start_date()),
        window_end: date(window.end_date()),
        n: window.len(),
        orientation: shape.orientation,
        proper: shape.ofn.is_some(),
        a0_minus,
        a1_minus,
        a1_plus,
        a0_plus,
        up_branch: shape.up.into(),
        down_branch: shape.down.into(),
        sigma: std_dev(values)?,
        first_value: window.first_value().ok_or(Error::EmptySeries)?,
        last_value: window.last_value().ok_or(Error::EmptySeries)?,
        skew,
        imprecision,
        direction_strength,
        area,
        sigma_population: population_std_dev(values)?,
    })
}

/// Reads every input, windows it and builds one record per window, sorted
/// by label and then window start.
pub fn build_records(config: &RunConfig) -> Result<Vec<OfnRecord>> {
    let mut records = Vec::new();
    for input in &config.inputs {
        let bytes = std::fs::read(&input.path).map_err(|e| Error::Io {
            path: input.path.clone(),
            message: e.to_string(),
        })?;
        let in_file = |e: Error| e.in_file(&input.path);
        let bars = parse_csv(bytes.as_slice()).map_err(in_file)?;
        let windows = make_windows(&bars, config.window, config.field).map_err(in_file)?;
        for window in &windows {
            let record = build_record(
                &input.label,
                window,
                config.method,
                config.scheme,
                config.mb_first_scheme,
            )
            .map_err(|e| Error::InFile {
                path: input.path.clone(),
                source: Box::new(e),
            })?;
            records.push(record);
        }
    }
    records.sort_by(|a, b| (&a.label, &a.window_start).cmp(&(&b.label, &b.window_start)));
    Ok(records)
}

/// One output document; `name` is a suggested file name for multi-file formats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

/// Output of a full run, produced entirely in memory.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub records: Vec<OfnRecord>,
    pub artifacts: Vec<Artifact>,
}

pub fn run(config: &RunConfig) -> Result<RunOutput> {
    let records = build_records(config)?;
    let artifacts = match config.format {
        OutputFormat::Json => vec![Artifact {
            name: "records.json".into(),
            contents: emit_json(&records),
        }],
        OutputFormat::JsonLines => vec![Artifact {
            name: "records.jsonl".into(),
            contents: emit_json_lines(&records),
        }],
        OutputFormat::Stats => vec![Artifact {
            name: "stats.json".into(),
            contents: emit_stats_json(&records),
        }],
        OutputFormat::Table => vec![Artifact {
            name: "report.txt".into(),
            contents: emit_table(&records, config.extended_precision),
        }],
        OutputFormat::Csv => vec![Artifact {
            name: "report.csv".into(),
            contents: emit_csv(&records, config.extended_precision),
        }],
        OutputFormat::Svg => records
            .iter()
            .map(|r| {
                Ok(Artifact {
                    name: svg_file_name(r),
                    contents: emit_svg(r)?,
                })
            })
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(RunOutput { records, artifacts })
}

fn svg_file_name(record: &OfnRecord) -> String {
    let safe: String = record
        .label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    format!("{safe}_{}_{}.svg", record.method, record.window_start)
}

// ---------------------------------------------------------------------------
// Number formatting

/// Formats `v` like C's `%.17g`: 17 significant digits, trailing zeros
/// removed. Non-finite values become `null`.
pub fn format_g17(v: f64) -> String {
    if !v.is_finite() {
        return "null".to_owned();
    }
    if v == 0.0 {
        return "0.0".to_owned();
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        let mut s = format!("{v:.decimals$}");
        if s.contains('.') {
            let trimmed = s.trim_end_matches('0').len();
            s.truncate(trimmed);
            if s.ends_with('.') {
                s.push('0');
            }
        }
        s
    } else {
        let mut m = mantissa.to_owned();
        if m.contains('.') {
            let trimmed = m.trim_end_matches('0').trim_end_matches('.').len();
            m.truncate(trimmed);
        }
        format!("{m}e{exp}")
    }
}

/// Rounds the shortest decimal form of `v` to `places` decimals, ties to even.
pub fn round_half_even(v: f64, places: usize) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let repr = v.abs().to_string();
    let (int_part, frac_part) = repr.split_once('.').unwrap_or((&repr, ""));
    let mut digits: Vec<u8> = int_part.bytes().map(|b| b - b'0').collect();
    let frac: Vec<u8> = frac_part.bytes().map(|b| b - b'0').collect();
    digits.extend((0..places).map(|i| frac.get(i).copied().unwrap_or(0)));
    if frac.len() > places {
        let first = frac[places];
        let tail_nonzero = frac[places + 1..].iter().any(|&d| d != 0);
        let last_odd = digits.last().is_some_and(|d| d % 2 == 1);
        if first > 5 || (first == 5 && (tail_nonzero || last_odd)) {
            let mut i = digits.len();
            loop {
                if i == 0 {
                    digits.insert(0, 1);
                    break;
                }
                i -= 1;
                if digits[i] == 9 {
                    digits[i] = 0;
                } else {
                    digits[i] += 1;
                    break;
                }
            }
        }
    }
    let split = digits.len() - places;
    let mut out = String::new();
    let negative = v < 0.0 && digits.iter().any(|&d| d != 0);
    if negative {
        out.push('-');
    }
    out.extend(digits[..split].iter().map(|d| char::from(b'0' + d)));
    if places > 0 {
        out.push('.');
        out.extend(digits[split..].iter().map(|d| char::from(b'0' + d)));
    }
    out
}

struct G17Formatter;

impl serde_json::ser::Formatter for G17Formatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_g17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, G17Formatter);
    value.serialize(&mut ser).expect("records serialize to JSON");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

fn json_array(lines: impl Iterator<Item = String>) -> String {
    let lines: Vec<String> = lines.collect();
    if lines.is_empty() {
        return "[]\n".to_owned();
    }
    format!("[\n{}\n]\n", lines.join(",\n"))
}

// ---------------------------------------------------------------------------
// Renderers

/// JSON array, one record object per line.
pub fn emit_json(records: &[OfnRecord]) -> String {
    json_array(records.iter().map(to_json_line))
}

pub fn emit_json_lines(records: &[OfnRecord]) -> String {
    records.iter().map(|r| to_json_line(r) + "\n").collect()
}

#[derive(Serialize)]
struct StatsRow<'a> {
    label: &'a str,
    method: Method,
    window_start: &'a str,
    window_end: &'a str,
    orientation: Orientation,
    sigma: f64,
    first_value: f64,
    last_value: f64,
    skew: Option<f64>,
    imprecision: Option<f64>,
    direction_strength: Option<f64>,
    area: Option<f64>,
}

/// JSON array of the statistics columns only.
pub fn emit_stats_json(records: &[OfnRecord]) -> String {
    json_array(records.iter().map(|r| {
        to_json_line(&StatsRow {
            label: &r.label,
            method: r.method,
            window_start: &r.window_start,
            window_end: &r.window_end,
            orientation: r.orientation,
            sigma: r.sigma,
            first_value: r.first_value,
            last_value: r.last_value,
            skew: r.skew,
            imprecision: r.imprecision,
            direction_strength: r.direction_strength,
            area: r.area,
        })
    }))
}

pub const TABLE_COLUMNS: [&str; 11] = [
    "Label",
    "a0\u{2212}",
    "a0+",
    "S1",
    "S2",
    "\u{3c3}",
    "X_[1]",
    "X_[n]",
    "Skew",
    "Imprecision",
    "DirectionStrength",
];

const UNAVAILABLE: &str = "n/a";
const UNDEFINED: &str = "undef";

fn table_cells(r: &OfnRecord, extended: bool) -> Vec<String> {
    let price = |v: f64| round_half_even(v, 2);
    let stat = |v: Option<f64>| v.map_or_else(|| UNAVAILABLE.to_owned(), |v| round_half_even(v, 2));
    let skew = match (r.proper, r.skew) {
        (false, _) => UNAVAILABLE.to_owned(),
        (true, None) => UNDEFINED.to_owned(),
        (true, Some(s)) => round_half_even(s, 2),
    };
    let imprecision = r.imprecision.map_or_else(
        || UNAVAILABLE.to_owned(),
        |v| round_half_even(v, if extended { 7 } else { 2 }),
    );
    vec![
        r.label.clone(),
        price(r.a0_minus),
        price(r.a0_plus),
        price(r.a1_minus),
        price(r.a1_plus),
        price(r.sigma),
        price(r.first_value),
        price(r.last_value),
        skew,
        imprecision,
        stat(r.direction_strength),
    ]
}

/// Aligned text table. Prices and statistics are printed to 2 decimals;
/// `extended` prints imprecision to 7.
pub fn emit_table(records: &[OfnRecord], extended: bool) -> String {
    let rows: Vec<Vec<String>> = records.iter().map(|r| table_cells(r, extended)).collect();
    let widths: Vec<usize> = (0..TABLE_COLUMNS.len())
        .map(|c| {
            rows.iter()
                .map(|row| row[c].chars().count())
                .chain(std::iter::once(TABLE_COLUMNS[c].chars().count()))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    let mut line = |cells: &[&str]| {
        let mut s = String::new();
        for (c, cell) in cells.iter().enumerate() {
            if c == 0 {
                let _ = write!(s, "{cell:<w$}", w = widths[0]);
            } else {
                let _ = write!(s, "  {cell:>w$}", w = widths[c]);
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(&TABLE_COLUMNS);
    for row in &rows {
        let cells: Vec<&str> = row.iter().map(String::as_str).collect();
        line(&cells);
    }
    out
}

fn csv_escape(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_owned()
    }
}

/// Same cells as [`emit_table`], comma separated.
pub fn emit_csv(records: &[OfnRecord], extended: bool) -> String {
    let mut out = TABLE_COLUMNS.join(",");
    out.push('\n');
    for r in records {
        let cells: Vec<String> = table_cells(r, extended).iter().map(|c| csv_escape(c)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// SVG

const SVG_WIDTH: f64 = 480.0;
const SVG_HEIGHT: f64 = 360.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 40.0;
/// Fraction of the data range added on each side of both axes.
const AXIS_PAD: f64 = 0.05;
/// Where the direction arrows sit along each branch.
const ARROW_AT: [f64; 2] = [0.31, 0.71];

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

struct Plot {
    alpha_lo: f64,
    alpha_hi: f64,
    value_lo: f64,
    value_hi: f64,
}

impl Plot {
    fn x(&self, alpha: f64) -> f64 {
        MARGIN_LEFT
            + (alpha - self.alpha_lo) / (self.alpha_hi - self.alpha_lo) * (SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn y(&self, value: f64) -> f64 {
        MARGIN_TOP
            + (self.value_hi - value) / (self.value_hi - self.value_lo) * (SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }

    fn point(&self, alpha: f64, value: f64) -> String {
        format!("{:.2},{:.2}", self.x(alpha), self.y(value))
    }
}

/// Standalone SVG 1.1 figure of one OFN: membership level on the horizontal
/// axis, value on the vertical. The up branch is drawn from `alpha = 0` to 1,
/// the core segment at `alpha = 1`, and the down branch from 1 back to 0,
/// with arrowheads showing that traversal.
pub fn emit_svg(record: &OfnRecord) -> Result<String> {
    use crate::ofn::Branch;
    let ofn = record.ofn();
    if !record.proper || !ofn.is_proper() {
        return Err(Error::ImproperShape);
    }
    let lo = record.a0_minus;
    let hi = record.a0_plus;
    let span = hi - lo;
    let pad = if span > 0.0 {
        span * AXIS_PAD
    } else {
        lo.abs().max(1.0) * AXIS_PAD
    };
    let plot = Plot {
        alpha_lo: -AXIS_PAD,
        alpha_hi: 1.0 + AXIS_PAD,
        value_lo: lo - pad,
        value_hi: hi + pad,
    };
    let up = ofn.branch(Branch::Up);
    let down = ofn.branch(Branch::Down);
    let up_caption = BranchCoefficients::from(up).caption();
    let down_caption = BranchCoefficients::from(down).caption();

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">"#
    );
    let title = format!(
        "{} ({}, {}) {} to {}",
        record.label, record.method, record.orientation, record.window_start, record.window_end
    );
    let _ = writeln!(s, "  <title>{}</title>", escape_xml(&title));
    let _ = writeln!(
        s,
        r#"  <defs><marker id="arrow" viewBox="0 0 10 10" refX="5" refY="5" markerWidth="7" markerHeight="7" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="rgb(31,78,156)"/></marker></defs>"#
    );
    let _ = writeln!(
        s,
        r#"  <rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>"#
    );

    // axes
    let x0 = plot.x(plot.alpha_lo);
    let x1 = plot.x(plot.alpha_hi);
    let y0 = plot.y(plot.value_lo);
    let y1 = plot.y(plot.value_hi);
    let _ = writeln!(s, r#"  <g class="axes" stroke="black" stroke-width="1">"#);
    let _ = writeln!(s, r#"    <line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/>"#);
    let _ = writeln!(s, r#"    <line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}"/>"#);
    let _ = writeln!(s, "  </g>");
    let _ = writeln!(
        s,
        r#"  <g class="ticks" font-family="sans-serif" font-size="11" fill="black">"#
    );
    for alpha in [0.0, 0.5, 1.0] {
        let x = plot.x(alpha);
        let _ = writeln!(
            s,
            r#"    <line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            y0 + 4.0,
            y0 + 16.0,
            round_half_even(alpha, 1)
        );
    }
    for k in 0..=4 {
        let v = lo + span * f64::from(k) / 4.0;
        let y = plot.y(v);
        let _ = writeln!(
            s,
            r#"    <line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 4.0,
            x0 - 6.0,
            y + 4.0,
            round_half_even(v, 2)
        );
        if span == 0.0 {
            break;
        }
    }
    let _ = writeln!(
        s,
        r#"    <text x="{:.2}" y="{:.2}" text-anchor="middle">&#945;</text>"#,
        (x0 + x1) / 2.0,
        y0 + 32.0
    );
    let _ = writeln!(s, "  </g>");

    // Points are listed in traversal order so the mid-markers point along it.
    let polyline = |class: &str, line: &BranchLine, alphas: &[f64]| {
        let points: Vec<String> = alphas.iter().map(|&a| plot.point(a, line.eval(a))).collect();
        let (a_from, a_to) = (alphas[0], alphas[alphas.len() - 1]);
        format!(
            r#"  <polyline class="{class}" data-from="{a_from},{}" data-to="{a_to},{}" points="{}" fill="none" stroke="rgb(31,78,156)" stroke-width="2" marker-mid="url(#arrow)"/>"#,
            line.eval(a_from),
            line.eval(a_to),
            points.join(" ")
        )
    };
    let up_end = up.end();
    let down_end = down.end();
    let _ = writeln!(
        s,
        "{}",
        polyline("branch-up", &up, &[0.0, ARROW_AT[0], ARROW_AT[1], 1.0])
    );
    let core_mid = (up_end + down_end) / 2.0;
    let core_points = format!(
        "{} {} {}",
        plot.point(1.0, up_end),
        plot.point(1.0, core_mid),
        plot.point(1.0, down_end)
    );
    let _ = writeln!(
        s,
        r#"  <polyline class="core" data-from="1,{}" data-to="1,{}" points="{core_points}" fill="none" stroke="rgb(31,78,156)" stroke-width="2" marker-mid="url(#arrow)"/>"#,
        up_end, down_end
    );
    let _ = writeln!(
        s,
        "{}",
        polyline("branch-down", &down, &[1.0, ARROW_AT[1], ARROW_AT[0], 0.0])
    );

    let label_x = plot.x(plot.alpha_hi) + 10.0;
    let _ = writeln!(
        s,
        r#"  <g class="labels" font-family="sans-serif" font-size="12" fill="rgb(31,78,156)">"#
    );
    let _ = writeln!(
        s,
        r#"    <text class="label-up" x="{label_x:.2}" y="{:.2}">&#956;&#8593; = {}</text>"#,
        plot.y(up_end).clamp(MARGIN_TOP, SVG_HEIGHT - MARGIN_BOTTOM),
        up_caption
    );
    let _ = writeln!(
        s,
        r#"    <text class="label-down" x="{label_x:.2}" y="{:.2}">&#956;&#8595; = {}</text>"#,
        (plot.y(down_end) + 14.0).clamp(MARGIN_TOP, SVG_HEIGHT - MARGIN_BOTTOM),
        down_caption
    );
    let _ = writeln!(s, "  </g>");
    let _ = writeln!(
        s,
        r#"  <text class="caption" x="{:.2}" y="20" font-family="sans-serif" font-size="13" text-anchor="middle">A_{} = ({}, {})</text>"#,
        SVG_WIDTH / 2.0,
        escape_xml(&record.label),
        up_caption,
        down_caption
    );
    s.push_str("</svg>\n");
    Ok(s)
}
