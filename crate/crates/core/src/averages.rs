//! Simple, linear-weighted and exponential averages plus the sample
//! standard deviation.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A weighting with nondecreasing weights `w_1 <= ... <= w_n`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum WeightScheme {
    /// Equal weights.
    Simple,
    /// `w_i = i`.
    #[default]
    Linear,
    /// `w_i = (1 - gamma)^(n - i)`; `None` means `gamma = 2 / (n + 1)`.
    Exponential { gamma: Option<f64> },
}

impl WeightScheme {
    pub const EXPONENTIAL: WeightScheme = WeightScheme::Exponential { gamma: None };

    /// Short name used on the command line and in reports.
    pub fn code(&self) -> &'static str {
        match self {
            WeightScheme::Simple => "sa",
            WeightScheme::Linear => "lwa",
            WeightScheme::Exponential { .. } => "ea",
        }
    }

    /// The (unnormalized) weights this scheme assigns to a series of length `n`.
    pub fn weights(&self, n: usize) -> Result<Vec<f64>> {
        match *self {
            WeightScheme::Simple => Ok(vec![1.0; n]),
            WeightScheme::Linear => Ok((1..=n).map(|i| i as f64).collect()),
            WeightScheme::Exponential { gamma } => {
                let gamma = resolve_gamma(gamma, n)?;
                Ok((1..=n).map(|i| (1.0 - gamma).powi((n - i) as i32)).collect())
            }
        }
    }
}

impl FromStr for WeightScheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sa" | "simple" => Ok(WeightScheme::Simple),
            "lwa" | "linear" => Ok(WeightScheme::Linear),
            "ea" | "exponential" => Ok(WeightScheme::EXPONENTIAL),
            other => Err(format!("unknown weight scheme `{other}` (expected sa, lwa or ea)")),
        }
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightScheme::Exponential { gamma: Some(g) } => write!(f, "ea(gamma={g})"),
            other => f.write_str(other.code()),
        }
    }
}

pub fn default_gamma(n: usize) -> f64 {
    2.0 / (n as f64 + 1.0)
}

/// An explicit `gamma` is checked; the default `2 / (n + 1)` reaches 1 at
/// `n = 1`, where any valid value gives the same single unit weight.
fn resolve_gamma(gamma: Option<f64>, n: usize) -> Result<f64> {
    match gamma {
        Some(g) => check_gamma(g).map(|()| g),
        None if n <= 1 => Ok(0.5),
        None => Ok(default_gamma(n)),
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(Error::BadGamma(gamma))
    }
}

fn non_empty(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        Err(Error::EmptySeries)
    } else {
        Ok(())
    }
}

pub fn simple_average(values: &[f64]) -> Result<f64> {
    non_empty(values)?;
    Ok(weighted_mean(values.iter().map(|&x| (1.0, x))))
}

/// `sum(w x) / sum(w)` accumulated as offsets from the first value and
/// clamped to the value range, so constant inputs come back exactly and the
/// result never leaves `[min, max]`. Returns NaN for an empty input.
pub(crate) fn weighted_mean(pairs: impl Iterator<Item = (f64, f64)> + Clone) -> f64 {
    let Some((_, origin)) = pairs.clone().next() else {
        return f64::NAN;
    };
    let (mut num, mut den) = (0.0, 0.0);
    let (mut lo, mut hi) = (origin, origin);
    for (w, x) in pairs {
        num += w * (x - origin);
        den += w;
        lo = lo.min(x);
        hi = hi.max(x);
    }
    (origin + num / den).clamp(lo, hi)
}

/// `sum(i * x_i) / (n (n + 1) / 2)`.
pub fn linear_weighted_average(values: &[f64]) -> Result<f64> {
    non_empty(values)?;
    Ok(weighted_mean(
        values.iter().enumerate().map(|(i, &x)| ((i + 1) as f64, x)),
    ))
}

/// Normalized exponential average with weights `(1 - gamma)^(n - i)`.
///
/// The weight sum is accumulated directly rather than through
/// `(1 - (1 - gamma)^n) / gamma`, which cancels badly for small `gamma`.
pub fn exponential_average(values: &[f64], gamma: f64) -> Result<f64> {
    non_empty(values)?;
    check_gamma(gamma)?;
    let decay = 1.0 - gamma;
    // Newest observation first, so each weight is a running product.
    let weights = std::iter::successors(Some(1.0_f64), move |w| Some(w * decay));
    Ok(weighted_mean(weights.zip(values.iter().rev().copied())))
}

pub fn weighted_average(values: &[f64], scheme: WeightScheme) -> Result<f64> {
    match scheme {
        WeightScheme::Simple => simple_average(values),
        WeightScheme::Linear => linear_weighted_average(values),
        WeightScheme::Exponential { gamma } => exponential_average(values, resolve_gamma(gamma, values.len())?),
    }
}

/// Sample standard deviation (divisor `n - 1`).
pub fn std_dev(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::TooFewPoints(values.len()));
    }
    Ok((sum_sq_dev(values) / (values.len() - 1) as f64).sqrt())
}

/// Population standard deviation (divisor `n`).
pub fn population_std_dev(values: &[f64]) -> Result<f64> {
    non_empty(values)?;
    Ok((sum_sq_dev(values) / values.len() as f64).sqrt())
}

fn sum_sq_dev(values: &[f64]) -> f64 {
    let mean = weighted_mean(values.iter().map(|&x| (1.0, x)));
    values.iter().map(|x| (x - mean) * (x - mean)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    const RAMP: [f64; 5] = [1.0, 2.0, 3.0, 4.0, 5.0];

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    /// Both closed forms for the exponential average, summed term by term.
    fn ea_oracle(values: &[f64], gamma: f64) -> (f64, f64) {
        let n = values.len() as i32;
        let mut num = 0.0;
        let mut den = 0.0;
        let mut second = 0.0;
        for (idx, x) in values.iter().enumerate() {
            let i = idx as i32 + 1;
            let w = (1.0 - gamma).powi(n - i);
            num += w * x;
            den += w;
            second += gamma * w * x / (1.0 - (1.0 - gamma).powi(n));
        }
        (num / den, second)
    }

    #[test]
    fn simple() {
        assert_eq!(simple_average(&RAMP).unwrap(), 3.0);
        assert_eq!(simple_average(&[7.0]).unwrap(), 7.0);
        assert_eq!(simple_average(&[]), Err(Error::EmptySeries));
    }

    #[test]
    fn linear() {
        assert!(close(linear_weighted_average(&RAMP).unwrap(), 55.0 / 15.0, 1e-15));
        assert!(close(
            linear_weighted_average(&[5.0, 4.0, 3.0, 2.0, 1.0]).unwrap(),
            35.0 / 15.0,
            1e-15
        ));
        assert!(close(linear_weighted_average(&[4.2; 9]).unwrap(), 4.2, 1e-14));
        assert_eq!(linear_weighted_average(&[]), Err(Error::EmptySeries));
    }

    #[test]
    fn exponential() {
        let (form1, form2) = ea_oracle(&RAMP, 1.0 / 3.0);
        let got = exponential_average(&RAMP, 1.0 / 3.0).unwrap();
        assert!(close(got, 3.7582938388625586, 1e-12));
        assert!(((form1 - form2) / form1).abs() < 1e-12);
        assert!(((got - form1) / form1).abs() < 1e-12);

        for gamma in [0.01, 0.5, 0.99] {
            assert!(close(exponential_average(&[2.5; 6], gamma).unwrap(), 2.5, 1e-14));
        }
        assert!(close(exponential_average(&[0.0, 10.0], 2.0 / 3.0).unwrap(), 7.5, 1e-14));

        assert_eq!(exponential_average(&RAMP, 0.0), Err(Error::BadGamma(0.0)));
        assert_eq!(exponential_average(&RAMP, 1.0), Err(Error::BadGamma(1.0)));
        assert_eq!(exponential_average(&[], 0.5), Err(Error::EmptySeries));
    }

    #[test]
    fn tiny_gamma_stays_accurate() {
        let values: Vec<f64> = (0..50).map(|i| (i as f64 * 0.37).sin() + 10.0).collect();
        let gamma = 1e-12;
        let got = exponential_average(&values, gamma).unwrap();
        let sa = simple_average(&values).unwrap();
        assert!((got - sa).abs() < 1e-9);
    }

    #[test]
    fn dispatch() {
        assert_eq!(weighted_average(&[1.0, 2.0, 3.0], WeightScheme::Simple).unwrap(), 2.0);
        assert!(close(
            weighted_average(&RAMP, WeightScheme::Linear).unwrap(),
            55.0 / 15.0,
            1e-15
        ));
        // default gamma for n = 5 is 1/3
        assert!(close(
            weighted_average(&RAMP, WeightScheme::EXPONENTIAL).unwrap(),
            3.7582938388625586,
            1e-12
        ));
        assert_eq!(weighted_average(&[4.0], WeightScheme::EXPONENTIAL).unwrap(), 4.0);
        assert_eq!(WeightScheme::EXPONENTIAL.weights(1).unwrap(), [1.0]);
        assert_eq!(
            weighted_average(&RAMP, WeightScheme::Exponential { gamma: Some(1.5) }),
            Err(Error::BadGamma(1.5))
        );
    }

    #[test]
    fn weights_are_nondecreasing() {
        for scheme in [WeightScheme::Simple, WeightScheme::Linear, WeightScheme::EXPONENTIAL] {
            let w = scheme.weights(12).unwrap();
            assert!(w.windows(2).all(|p| p[0] <= p[1]), "{scheme}");
        }
    }

    #[test]
    fn standard_deviation() {
        // two-pass oracle: mean 3, squared deviations 4+1+0+1+4 = 10, /4
        assert!(close(std_dev(&RAMP).unwrap(), 2.5_f64.sqrt(), 1e-15));
        assert!(close(population_std_dev(&RAMP).unwrap(), 2.0_f64.sqrt(), 1e-15));
        assert_eq!(std_dev(&[3.0; 4]).unwrap(), 0.0);
        assert_eq!(std_dev(&[3.0]), Err(Error::TooFewPoints(1)));
    }

    #[test]
    fn scheme_names() {
        assert_eq!("EA".parse::<WeightScheme>().unwrap(), WeightScheme::EXPONENTIAL);
        assert_eq!("lwa".parse::<WeightScheme>().unwrap(), WeightScheme::Linear);
        assert!("wma".parse::<WeightScheme>().is_err());
    }
}
