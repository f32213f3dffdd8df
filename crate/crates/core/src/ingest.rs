//! OHLCV CSV ingestion and windowing.
//!
//! Prices are kept as scaled integers (cents for open/high/low/close,
//! micro-units for adjusted close) and only become `f64` when a scalar
//! series is extracted for a window.

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use chrono::NaiveDate;

use crate::error::{Error, Result};

/// A fixed-point decimal with `PLACES` fractional digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fixed<const PLACES: u32>(i64);

/// Price measured to the cent.
pub type Cents = Fixed<2>;
/// Price measured to six decimal places.
pub type Micros = Fixed<6>;

impl<const PLACES: u32> Fixed<PLACES> {
    pub const fn from_units(units: i64) -> Self {
        Fixed(units)
    }

    pub const fn units(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 10_i64.pow(PLACES) as f64
    }

    /// Parses a plain decimal literal, rounding half-even when the literal
    /// carries more than `PLACES` fractional digits. A leading `$` is accepted.
    pub fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        let text = text.strip_prefix('$').unwrap_or(text);
        let (negative, text) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text),
        };
        let (int_part, frac_part) = text.split_once('.').unwrap_or((text, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
            return None;
        }

        let places = PLACES as usize;
        let mut units: i64 = 0;
        for b in int_part.bytes() {
            units = units.checked_mul(10)?.checked_add(i64::from(b - b'0'))?;
        }
        let frac = frac_part.as_bytes();
        for i in 0..places {
            let digit = frac.get(i).map_or(0, |b| i64::from(b - b'0'));
            units = units.checked_mul(10)?.checked_add(digit)?;
        }
        if frac.len() > places {
            let rest = &frac[places..];
            let first = rest[0] - b'0';
            let tail_nonzero = rest[1..].iter().any(|&b| b != b'0');
            let round_up = first > 5 || (first == 5 && (tail_nonzero || units % 2 == 1));
            if round_up {
                units = units.checked_add(1)?;
            }
        }
        Some(Fixed(if negative { -units } else { units }))
    }
}

impl<const PLACES: u32> fmt::Display for Fixed<PLACES> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scale = 10_i64.pow(PLACES);
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        let scale = scale as u64;
        write!(
            f,
            "{sign}{}.{:0width$}",
            abs / scale,
            abs % scale,
            width = PLACES as usize
        )
    }
}

/// One dated observation. Only `date` and `close` are mandatory; the other
/// columns are optional in the input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OhlcBar {
    pub date: NaiveDate,
    pub open: Option<Cents>,
    pub high: Option<Cents>,
    pub low: Option<Cents>,
    pub close: Cents,
    pub volume: Option<u64>,
    pub adj_close: Option<Micros>,
}

impl OhlcBar {
    /// A bar carrying only a close price.
    pub fn close_only(date: NaiveDate, close: Cents) -> Self {
        OhlcBar {
            date,
            open: None,
            high: None,
            low: None,
            close,
            volume: None,
            adj_close: None,
        }
    }

    pub fn has_ohlc(&self) -> bool {
        self.open.is_some() && self.high.is_some() && self.low.is_some()
    }

    fn validate(&self) -> std::result::Result<(), String> {
        let prices = [Some(self.close), self.open, self.high, self.low];
        if prices.iter().flatten().any(|p| p.units() <= 0) {
            return Err("prices must be positive".into());
        }
        if let Some(adj) = self.adj_close {
            if adj.units() <= 0 {
                return Err("adjusted close must be positive".into());
            }
        }
        let body_low = self.open.map_or(self.close, |o| o.min(self.close));
        let body_high = self.open.map_or(self.close, |o| o.max(self.close));
        if let Some(low) = self.low {
            if low > body_low {
                return Err(format!("low {low} is above the open/close body"));
            }
        }
        if let Some(high) = self.high {
            if high < body_high {
                return Err(format!("high {high} is below the open/close body"));
            }
        }
        if let (Some(low), Some(high)) = (self.low, self.high) {
            if low > high {
                return Err(format!("low {low} exceeds high {high}"));
            }
        }
        Ok(())
    }
}

/// The scalar extracted from each bar to form a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Field {
    Open,
    High,
    Low,
    #[default]
    Close,
    AdjClose,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Open => "open",
            Field::High => "high",
            Field::Low => "low",
            Field::Close => "close",
            Field::AdjClose => "adj_close",
        }
    }

    pub fn value_of(self, bar: &OhlcBar) -> Option<f64> {
        match self {
            Field::Open => bar.open.map(Cents::to_f64),
            Field::High => bar.high.map(Cents::to_f64),
            Field::Low => bar.low.map(Cents::to_f64),
            Field::Close => Some(bar.close.to_f64()),
            Field::AdjClose => bar.adj_close.map(Micros::to_f64),
        }
    }
}

impl FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "open" => Ok(Field::Open),
            "high" => Ok(Field::High),
            "low" => Ok(Field::Low),
            "close" => Ok(Field::Close),
            "adj_close" | "adj-close" | "adjclose" | "adj close" => Ok(Field::AdjClose),
            other => Err(format!("unknown field `{other}`")),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Accepts `YYYY-MM-DD` and US `M/D/YYYY`.
pub fn parse_date(text: &str) -> Option<NaiveDate> {
    let text = text.trim();
    NaiveDate::parse_from_str(text, "%Y-%m-%d")
        .or_else(|_| NaiveDate::parse_from_str(text, "%m/%d/%Y"))
        .ok()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Column {
    Date,
    Open,
    High,
    Low,
    Close,
    Volume,
    AdjClose,
}

fn classify_header(name: &str) -> Option<Column> {
    match name.trim().to_ascii_lowercase().as_str() {
        "date" => Some(Column::Date),
        "open" => Some(Column::Open),
        "high" => Some(Column::High),
        "low" => Some(Column::Low),
        "close" | "close/last" => Some(Column::Close),
        "volume" => Some(Column::Volume),
        "adj close" | "adj_close" | "adjclose" => Some(Column::AdjClose),
        _ => None,
    }
}

#[derive(Debug, Default)]
struct ColumnMap {
    date: Option<usize>,
    open: Option<usize>,
    high: Option<usize>,
    low: Option<usize>,
    close: Option<usize>,
    volume: Option<usize>,
    adj_close: Option<usize>,
}

fn is_blank(cell: &str) -> bool {
    let cell = cell.trim();
    cell.is_empty() || cell.eq_ignore_ascii_case("null") || cell.eq_ignore_ascii_case("n/a")
}

fn parse_volume(cell: &str) -> Option<u64> {
    let cell = cell.trim();
    if let Ok(v) = cell.parse::<u64>() {
        return Some(v);
    }
    // Some exports write integral volumes as "1234.0".
    let (int, frac) = cell.split_once('.')?;
    if frac.bytes().all(|b| b == b'0') {
        int.parse().ok()
    } else {
        None
    }
}

/// Parses an OHLCV CSV with a header row. Columns are matched
/// case-insensitively in any order; `Date` and `Close` are required.
/// Bars come back sorted by date.
pub fn parse_csv<R: Read>(input: R) -> Result<Vec<OhlcBar>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(input);

    let headers = reader
        .headers()
        .map_err(|e| Error::MalformedRow {
            line: 1,
            reason: e.to_string(),
        })?
        .clone();
    let mut map = ColumnMap::default();
    for (idx, name) in headers.iter().enumerate() {
        let slot = match classify_header(name) {
            Some(Column::Date) => &mut map.date,
            Some(Column::Open) => &mut map.open,
            Some(Column::High) => &mut map.high,
            Some(Column::Low) => &mut map.low,
            Some(Column::Close) => &mut map.close,
            Some(Column::Volume) => &mut map.volume,
            Some(Column::AdjClose) => &mut map.adj_close,
            None => continue,
        };
        slot.get_or_insert(idx);
    }
    let date_col = map.date.ok_or(Error::MissingColumn("Date"))?;
    let close_col = map.close.ok_or(Error::MissingColumn("Close"))?;

    let mut bars = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::MalformedRow {
            line: e.position().map_or(0, |p| p.line()),
            reason: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let malformed = |reason: String| Error::MalformedRow { line, reason };
        let cell = |idx: usize| record.get(idx).unwrap_or("");

        let date = parse_date(cell(date_col)).ok_or_else(|| malformed(format!("bad date `{}`", cell(date_col))))?;
        let close =
            Cents::parse(cell(close_col)).ok_or_else(|| malformed(format!("bad close price `{}`", cell(close_col))))?;

        let optional_price = |col: Option<usize>, name: &str| -> Result<Option<Cents>> {
            match col.map(cell) {
                None => Ok(None),
                Some(c) if is_blank(c) => Ok(None),
                Some(c) => Cents::parse(c)
                    .map(Some)
                    .ok_or_else(|| malformed(format!("bad {name} price `{c}`"))),
            }
        };
        let open = optional_price(map.open, "open")?;
        let high = optional_price(map.high, "high")?;
        let low = optional_price(map.low, "low")?;
        let volume = match map.volume.map(cell) {
            None => None,
            Some(c) if is_blank(c) => None,
            Some(c) => Some(parse_volume(c).ok_or_else(|| malformed(format!("bad volume `{c}`")))?),
        };
        let adj_close = match map.adj_close.map(cell) {
            None => None,
            Some(c) if is_blank(c) => None,
            Some(c) => Some(Micros::parse(c).ok_or_else(|| malformed(format!("bad adjusted close `{c}`")))?),
        };

        let bar = OhlcBar {
            date,
            open,
            high,
            low,
            close,
            volume,
            adj_close,
        };
        bar.validate().map_err(&malformed)?;
        bars.push(bar);
    }

    bars.sort_by_key(|b| b.date);
    if let Some(dup) = bars.windows(2).find(|w| w[0].date == w[1].date) {
        return Err(Error::DuplicateDate(dup[0].date));
    }
    Ok(bars)
}

/// Writes bars in the layout [`parse_csv`] reads; absent values become empty cells.
pub fn write_csv(bars: &[OhlcBar]) -> String {
    fn opt<T: fmt::Display>(v: Option<T>) -> String {
        v.map(|v| v.to_string()).unwrap_or_default()
    }
    let mut out = String::from("Date,Open,High,Low,Close,Volume,Adj Close\n");
    for b in bars {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            b.date.format("%Y-%m-%d"),
            opt(b.open),
            opt(b.high),
            opt(b.low),
            b.close,
            opt(b.volume),
            opt(b.adj_close)
        ));
    }
    out
}

/// How to cut a bar sequence into windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowSpec {
    /// One window holding every bar dated within `[start, end]`.
    DateRange { start: NaiveDate, end: NaiveDate },
    /// Every full run of `size` consecutive bars, stepping by `stride`.
    Size { size: usize, stride: usize },
}

impl WindowSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            WindowSpec::DateRange { start, end } if start > end => {
                Err(Error::InvalidWindowSpec(format!("start {start} is after end {end}")))
            }
            WindowSpec::Size { size, .. } if size < 2 => {
                Err(Error::InvalidWindowSpec(format!("size must be at least 2, got {size}")))
            }
            WindowSpec::Size { stride: 0, .. } => Err(Error::InvalidWindowSpec("stride must be at least 1".into())),
            _ => Ok(()),
        }
    }
}

impl FromStr for WindowSpec {
    type Err = String;

    /// Parses a date range `START:END`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| format!("expected START:END, got `{s}`"))?;
        let start = parse_date(a).ok_or_else(|| format!("bad start date `{a}`"))?;
        let end = parse_date(b).ok_or_else(|| format!("bad end date `{b}`"))?;
        Ok(WindowSpec::DateRange { start, end })
    }
}

/// An ordered run of bars plus the scalar series extracted from them.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesWindow {
    bars: Vec<OhlcBar>,
    field: Field,
    values: Vec<f64>,
    start_index: usize,
}

impl SeriesWindow {
    /// Builds a window from consecutive bars. `start_index` is the position of
    /// the first bar in the source sequence.
    pub fn new(bars: Vec<OhlcBar>, field: Field, start_index: usize) -> Result<Self> {
        let values = bars
            .iter()
            .map(|b| {
                field.value_of(b).ok_or(Error::MissingField {
                    field: field.name(),
                    date: b.date,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SeriesWindow {
            bars,
            field,
            values,
            start_index,
        })
    }

    pub fn bars(&self) -> &[OhlcBar] {
        &self.bars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn start_index(&self) -> usize {
        self.start_index
    }

    pub fn start_date(&self) -> Option<NaiveDate> {
        self.bars.first().map(|b| b.date)
    }

    pub fn end_date(&self) -> Option<NaiveDate> {
        self.bars.last().map(|b| b.date)
    }

    pub fn first_value(&self) -> Option<f64> {
        self.values.first().copied()
    }

    pub fn last_value(&self) -> Option<f64> {
        self.values.last().copied()
    }
}

/// Cuts `bars` (sorted by date) into windows and extracts `field` from each.
pub fn make_windows(bars: &[OhlcBar], spec: WindowSpec, field: Field) -> Result<Vec<SeriesWindow>> {
    spec.validate()?;
    debug_assert!(bars.windows(2).all(|w| w[0].date < w[1].date));
    match spec {
        WindowSpec::DateRange { start, end } => {
            let first = bars.partition_point(|b| b.date < start);
            let last = bars.partition_point(|b| b.date <= end);
            let selected = &bars[first..last];
            if selected.len() < 2 {
                return Err(Error::EmptyWindow(selected.len()));
            }
            Ok(vec![SeriesWindow::new(selected.to_vec(), field, first)?])
        }
        WindowSpec::Size { size, stride } => {
            if size > bars.len() {
                return Err(Error::SizeExceedsData {
                    size,
                    available: bars.len(),
                });
            }
            (0..=bars.len() - size)
                .step_by(stride)
                .map(|start| SeriesWindow::new(bars[start..start + size].to_vec(), field, start))
                .collect()
        }
    }
}

/// Smallest and largest value of the window's series.
///
/// # Panics
///
/// Panics on an empty window; [`make_windows`] never produces one.
pub fn series_extrema(window: &SeriesWindow) -> (f64, f64) {
    extrema(window.values()).expect("series_extrema on an empty window")
}

pub(crate) fn extrema(values: &[f64]) -> Option<(f64, f64)> {
    let (&first, rest) = values.split_first()?;
    Some(rest.iter().fold((first, first), |(lo, hi), &v| (lo.min(v), hi.max(v))))
}
