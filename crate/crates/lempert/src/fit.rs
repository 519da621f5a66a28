//! Log-log slope fitting for asymptotic exponent checks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares fit of log(value) against log(eps).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesFit {
    pub slope: f64,
    pub intercept: f64,
    pub std_error: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Ordinary least squares on (log eps, log value). Needs at least three
/// points with positive values.
pub fn fit_exponent(series: &[(f64, f64)]) -> Result<SeriesFit> {
    if series.len() < 3 {
        return Err(Error::argument("exponent fit needs at least 3 points"));
    }
    if series.iter().any(|&(e, v)| !(e > 0.0) || !(v > 0.0)) {
        return Err(Error::argument("exponent fit needs positive data"));
    }
    let n = series.len() as f64;
    let xs: Vec<f64> = series.iter().map(|&(e, _)| e.ln()).collect();
    let ys: Vec<f64> = series.iter().map(|&(_, v)| v.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    if sxx <= 0.0 {
        return Err(Error::argument("exponent fit needs distinct eps values"));
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - ybar) * (y - ybar)).sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res <= 1e-20 {
        1.0
    } else {
        f64::NAN
    };
    let std_error = if series.len() > 2 {
        (ss_res / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(SeriesFit {
        slope,
        intercept,
        std_error,
        r_squared,
        points: series.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_log_linear_data() {
        let fit = fit_exponent(&[(1e-2, 1e-1), (1e-4, 1e-2), (1e-6, 1e-3)]).unwrap();
        assert_abs_diff_eq!(fit.slope, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.r_squared, 1.0, epsilon = 1e-12);
        assert!(fit.std_error < 1e-12);
    }

    #[test]
    fn constant_series() {
        let fit = fit_exponent(&[(1e-2, 3.0), (1e-3, 3.0), (1e-4, 3.0), (1e-5, 3.0)]).unwrap();
        assert_abs_diff_eq!(fit.slope, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(fit.r_squared, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fit_exponent(&[(1e-2, 1.0), (1e-3, 2.0)]).is_err());
        assert!(fit_exponent(&[(1e-2, 1.0), (1e-3, -2.0), (1e-4, 1.0)]).is_err());
        assert!(fit_exponent(&[(1e-2, 1.0), (1e-2, 2.0), (1e-2, 1.0)]).is_err());
    }

    #[test]
    fn noisy_power_law_recovers_slope() {
        let mut rng = crate::rng::seeded(1);
        let pts: Vec<(f64, f64)> = (0..20)
            .map(|i| {
                let e = 10f64.powf(-1.0 - 0.25 * i as f64);
                let noise = 1.0 + 0.01 * crate::rng::in_range(&mut rng, -1.0, 1.0);
                (e, 3.0 * e.powf(0.75) * noise)
            })
            .collect();
        let fit = fit_exponent(&pts).unwrap();
        assert!((fit.slope - 0.75).abs() < 0.01);
        assert!(fit.r_squared > 0.999);
    }
}
