use serde::Serialize;

use crate::{Error, Result};

/// Least-squares fit of `log e = slope log h + intercept`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateFit {
    pub abscissae: Vec<f64>,
    pub errors: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
    /// Points dropped because their abscissa is zero.
    pub excluded: usize,
}

/// Fits the points sorted by abscissa. Points with a zero abscissa are
/// excluded; at least three distinct abscissae with positive errors must remain.
pub fn fit(points: &[(f64, f64)]) -> Result<RateFit> {
    let mut pts: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.0 != 0.0).collect();
    let excluded = points.len() - pts.len();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    if pts.len() < 3 {
        return Err(Error::Config(format!(
            "rate fit needs at least 3 points, got {}",
            pts.len()
        )));
    }
    if pts.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::Config("rate fit abscissae must be distinct".into()));
    }
    if let Some(p) = pts
        .iter()
        .find(|p| !(p.0 > 0.0) || !(p.1 > 0.0) || !p.1.is_finite())
    {
        return Err(Error::Config(format!(
            "cannot take logarithms of point {p:?}"
        )));
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(RateFit {
        abscissae: pts.iter().map(|p| p.0).collect(),
        errors: pts.iter().map(|p| p.1).collect(),
        slope,
        intercept,
        residual,
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let pts: Vec<_> = [4e-3, 1e-3, 2e-3]
            .iter()
            .map(|&h: &f64| (h, 3.0 * h.powf(1.5)))
            .collect();
        let f = fit(&pts).unwrap();
        assert!((f.slope - 1.5).abs() < 1e-12);
        assert!((f.intercept - 3.0_f64.ln()).abs() < 1e-10);
        assert!(f.residual < 1e-12);
        assert_eq!(f.abscissae, vec![1e-3, 2e-3, 4e-3]);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(fit(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(fit(&[(1.0, 1.0), (1.0, 2.0), (3.0, 3.0)]).is_err());
        assert!(fit(&[(1.0, 0.0), (2.0, 2.0), (3.0, 3.0)]).is_err());
    }

    #[test]
    fn zero_abscissa_is_excluded() {
        let f = fit(&[(0.0, 1.0), (1e-2, 1e-1), (1e-4, 1e-2), (1e-6, 1e-3)]).unwrap();
        assert_eq!(f.excluded, 1);
        assert!((f.slope - 0.5).abs() < 1e-12);
    }
}
