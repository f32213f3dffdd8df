//! Reference representations: the ordered fuzzy candlestick with mass
//! balancing, the open/close translation of a candlestick into a trapezoid,
//! and the plain Japanese candlestick.

use std::fmt;

use serde::Serialize;

use crate::averages::{std_dev, weighted_average, WeightScheme};
use crate::error::{Error, Result};
use crate::ingest::{extrema, Cents, SeriesWindow};
use crate::ofn::{BranchLine, Interval, Orientation, TrapezoidalOfn};

/// Guarded sums of observations on either side of the core.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassStats {
    /// `1 + sum of x_i with x_i >= S2`.
    pub above: f64,
    /// `1 + sum of x_i with x_i <= S1`.
    pub below: f64,
}

/// Mass above `s2` and below `s1`, each with the `+1` guard. Both
/// inequalities are weak, so a value equal to an average is counted.
pub fn mass_stats(values: &[f64], s1: f64, s2: f64) -> MassStats {
    debug_assert!(s1 <= s2);
    let above = 1.0 + values.iter().filter(|&&x| x >= s2).sum::<f64>();
    let below = 1.0 + values.iter().filter(|&&x| x <= s1).sum::<f64>();
    MassStats { above, below }
}

/// A trapezoid given as two affine branches, without any requirement that
/// the core sits inside the support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderedPairTrapezoid {
    /// Up branch at `alpha = 0`.
    pub up_start: f64,
    /// Up branch at `alpha = 1`.
    pub up_end: f64,
    /// Down branch at `alpha = 0`.
    pub down_start: f64,
    /// Down branch at `alpha = 1`.
    pub down_end: f64,
    pub orientation: Orientation,
    pub proper: bool,
}

impl OrderedPairTrapezoid {
    fn new(up: BranchLine, down: BranchLine, orientation: Orientation) -> Self {
        let mut shape = OrderedPairTrapezoid {
            up_start: up.start(),
            up_end: up.end(),
            down_start: down.start(),
            down_end: down.end(),
            orientation,
            proper: false,
        };
        shape.proper = shape.as_ofn().is_proper();
        shape
    }

    pub fn up(&self) -> BranchLine {
        BranchLine::new(self.up_start, self.up_end)
    }

    pub fn down(&self) -> BranchLine {
        BranchLine::new(self.down_start, self.down_end)
    }

    /// `[a0-, a1-, a1+, a0+]` read off the branches by orientation, unchecked.
    pub fn endpoints(&self) -> [f64; 4] {
        match self.orientation {
            Orientation::Long => [self.up_start, self.up_end, self.down_end, self.down_start],
            Orientation::Short => [self.down_start, self.down_end, self.up_end, self.up_start],
        }
    }

    fn as_ofn(&self) -> TrapezoidalOfn {
        let [a, b, c, d] = self.endpoints();
        TrapezoidalOfn::new(a, b, c, d, self.orientation)
    }

    /// The equivalent [`TrapezoidalOfn`], if the shape is proper.
    pub fn to_ofn(&self) -> Result<TrapezoidalOfn> {
        let ofn = self.as_ofn();
        ofn.require_proper()?;
        Ok(ofn)
    }
}

/// Inputs to the mass-balanced candlestick.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MbParameters {
    pub s1: f64,
    pub s2: f64,
    pub sigma: f64,
    pub min: f64,
    pub max: f64,
    pub mass: MassStats,
    pub orientation: Orientation,
}

/// Computes the core from the two average sources (`S1` the smaller, `S2`
/// the larger), the sample standard deviation and the masses.
pub fn mb_parameters(values: &[f64], s1_source: WeightScheme, s2_source: WeightScheme) -> Result<MbParameters> {
    if values.is_empty() {
        return Err(Error::EmptyWindow(0));
    }
    let sigma = std_dev(values)?;
    let x = weighted_average(values, s1_source)?;
    let y = weighted_average(values, s2_source)?;
    let (s1, s2) = (x.min(y), x.max(y));
    let (min, max) = extrema(values).ok_or(Error::EmptySeries)?;
    let orientation = Orientation::from_endpoints(values[0], values[values.len() - 1]);
    Ok(MbParameters {
        s1,
        s2,
        sigma,
        min,
        max,
        mass: mass_stats(values, s1, s2),
        orientation,
    })
}

/// Branches of the mass-balanced candlestick for given parameters.
///
/// Long: the up branch starts at `min - sigma` and rises to `S1`; the down
/// branch starts at `(A / B)(S1 - (min - sigma)) + S2` and falls to `S2`.
/// Short mirrors this from `max + sigma` with `B / A`.
pub fn mb_from_parameters(p: &MbParameters) -> OrderedPairTrapezoid {
    let MassStats { above, below } = p.mass;
    match p.orientation {
        Orientation::Long => {
            let start = p.min - p.sigma;
            let c0 = above / below * (p.s1 - start) + p.s2;
            OrderedPairTrapezoid::new(
                BranchLine::new(start, p.s1),
                BranchLine::new(c0, p.s2),
                Orientation::Long,
            )
        }
        Orientation::Short => {
            let start = p.max + p.sigma;
            let c0 = below / above * (p.s2 - start) + p.s1;
            OrderedPairTrapezoid::new(
                BranchLine::new(start, p.s2),
                BranchLine::new(c0, p.s1),
                Orientation::Short,
            )
        }
    }
}

pub fn build_ofn_mb(values: &[f64], s1_source: WeightScheme, s2_source: WeightScheme) -> Result<OrderedPairTrapezoid> {
    Ok(mb_from_parameters(&mb_parameters(values, s1_source, s2_source)?))
}

fn require_ohlc(window: &SeriesWindow) -> Result<()> {
    if window.is_empty() || !window.bars().iter().all(|b| b.has_ohlc()) {
        Err(Error::MissingOhlc)
    } else {
        Ok(())
    }
}

/// Open/close translation: support `[min(X1, Xn), max(X1, Xn)]` from the
/// extracted series, core `[min(Xo, Xc), max(Xo, Xc)]` from the first open
/// and the last close. Orientation follows `X1` vs `Xn`. The core need not
/// lie inside the support; such results have `proper == false`.
pub fn build_ofn_piasecki(window: &SeriesWindow) -> Result<OrderedPairTrapezoid> {
    require_ohlc(window)?;
    let bars = window.bars();
    let x_open = bars[0].open.ok_or(Error::MissingOhlc)?.to_f64();
    let x_close = bars[bars.len() - 1].close.to_f64();
    let (first, last) = match (window.first_value(), window.last_value()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::MissingOhlc),
    };
    let support = Interval {
        lo: first.min(last),
        hi: first.max(last),
    };
    let core = Interval {
        lo: x_open.min(x_close),
        hi: x_open.max(x_close),
    };
    let orientation = Orientation::from_endpoints(first, last);
    let rising = BranchLine::new(support.lo, core.lo);
    let falling = BranchLine::new(support.hi, core.hi);
    Ok(match orientation {
        Orientation::Long => OrderedPairTrapezoid::new(rising, falling, orientation),
        Orientation::Short => OrderedPairTrapezoid::new(falling, rising, orientation),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CandleColor {
    Green,
    Red,
}

impl fmt::Display for CandleColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CandleColor::Green => "green",
            CandleColor::Red => "red",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CandlestickSummary {
    pub open: Cents,
    pub close: Cents,
    pub high: Cents,
    pub low: Cents,
    pub color: CandleColor,
}

/// Classical candlestick over the window's bars. Green when the close is at
/// or above the open.
pub fn japanese_candlestick(window: &SeriesWindow) -> Result<CandlestickSummary> {
    require_ohlc(window)?;
    let bars = window.bars();
    let open = bars[0].open.ok_or(Error::MissingOhlc)?;
    let close = bars[bars.len() - 1].close;
    let high = bars.iter().filter_map(|b| b.high).max().ok_or(Error::MissingOhlc)?;
    let low = bars.iter().filter_map(|b| b.low).min().ok_or(Error::MissingOhlc)?;
    let color = if close >= open {
        CandleColor::Green
    } else {
        CandleColor::Red
    };
    Ok(CandlestickSummary {
        open,
        close,
        high,
        low,
        color,
    })
}
