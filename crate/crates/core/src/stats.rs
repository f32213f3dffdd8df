//! Shape statistics of a trapezoidal OFN.
//!
//! Everything here is computed from the four endpoints alone; only the
//! [`OfnSummary`] carries values taken from the source series (sigma and the
//! first/last observation).

use crate::averages::std_dev;
use crate::error::{Error, Result};
use crate::ofn::{Branch, TrapezoidalOfn};

/// `((a0+ - a0-) + (a1+ - a1-)) / 2`.
pub fn total_area(ofn: &TrapezoidalOfn) -> Result<f64> {
    ofn.require_proper()?;
    Ok((ofn.support().width() + ofn.core().width()) / 2.0)
}

/// The orientation-signed integral of `down - up` over `alpha` in `[0, 1]`.
/// For a proper OFN this is the total area.
pub fn signed_branch_integral(ofn: &TrapezoidalOfn) -> f64 {
    ofn.orientation().sign() * (ofn.branch(Branch::Down).integral() - ofn.branch(Branch::Up).integral())
}

/// Area outside the core: half the sum of the two spreads.
pub fn total_imprecision(ofn: &TrapezoidalOfn) -> Result<f64> {
    ofn.require_proper()?;
    Ok((ofn.upper_spread() + ofn.lower_spread()) / 2.0)
}

/// Upper spread over lower spread. A point or rectangle has skew 1; a
/// positive upper spread over an empty lower one has no skew (`None`).
pub fn skew(ofn: &TrapezoidalOfn) -> Result<Option<f64>> {
    ofn.require_proper()?;
    let up0 = ofn.branch(Branch::Up).start();
    let down0 = ofn.branch(Branch::Down).start();
    let upper = up0.max(down0) - ofn.a1_plus();
    let lower = ofn.a1_minus() - up0.min(down0);
    Ok(if lower > 0.0 {
        Some(upper / lower)
    } else if upper > 0.0 {
        None
    } else {
        Some(1.0)
    })
}

/// Share of the total area taken by the core. A zero-area OFN has strength 1.
pub fn direction_strength(ofn: &TrapezoidalOfn) -> Result<f64> {
    let area = total_area(ofn)?;
    let core = (ofn.branch(Branch::Up).end() - ofn.branch(Branch::Down).end()).abs();
    Ok(if area > 0.0 { core / area } else { 1.0 })
}

/// One row of the summary tables.
#[derive(Debug, Clone, PartialEq)]
pub struct OfnSummary {
    pub label: String,
    pub a0_minus: f64,
    pub a0_plus: f64,
    pub s1: f64,
    pub s2: f64,
    pub sigma: f64,
    pub first_value: f64,
    pub last_value: f64,
    pub skew: Option<f64>,
    pub imprecision: f64,
    pub direction_strength: f64,
    pub area: f64,
}

/// Assembles the table row for an OFN built from `values`.
pub fn summarize(label: &str, values: &[f64], ofn: &TrapezoidalOfn) -> Result<OfnSummary> {
    let (first_value, last_value) = match values {
        [first, .., last] => (*first, *last),
        _ => return Err(Error::TooFewPoints(values.len())),
    };
    Ok(OfnSummary {
        label: label.to_owned(),
        a0_minus: ofn.a0_minus(),
        a0_plus: ofn.a0_plus(),
        s1: ofn.a1_minus(),
        s2: ofn.a1_plus(),
        sigma: std_dev(values)?,
        first_value,
        last_value,
        skew: skew(ofn)?,
        imprecision: total_imprecision(ofn)?,
        direction_strength: direction_strength(ofn)?,
        area: total_area(ofn)?,
    })
}
