//! `lo:step:hi` grids and comma-separated lists.

use std::str::FromStr;

/// Points `lo + i·step` for `i = 0..=N`, where `N` is the last index whose point
/// does not pass `hi` by more than rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, step, hi] = parts.as_slice() else {
            return Err(format!("expected lo:step:hi, got {s:?}"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        let (lo, step, hi) = (num(lo)?, num(step)?, num(hi)?);
        if !(lo.is_finite() && step.is_finite() && hi.is_finite()) {
            return Err(format!("grid {s:?} must be finite"));
        }
        if !(step > 0.0) {
            return Err(format!("grid step must be positive, got {step}"));
        }
        if hi < lo {
            return Err(format!("grid end {hi} is below its start {lo}"));
        }
        let count = ((hi - lo) / step + 1e-9).floor();
        if count > 1e7 {
            return Err(format!("grid {s:?} has too many points"));
        }
        Ok(Grid((0..=count as usize).map(|i| lo + i as f64 * step).collect()))
    }
}

/// Comma-separated numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct List(pub Vec<f64>);

impl FromStr for List {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()
            .map(List)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusive_endpoints() {
        assert_eq!("0:0.1:5".parse::<Grid>().unwrap().0.len(), 51);
        assert_eq!("0:0.3:1".parse::<Grid>().unwrap().0.len(), 4);
        assert_eq!("0:0.3:0.8".parse::<Grid>().unwrap().0.len(), 3);
        assert_eq!("2:1:2".parse::<Grid>().unwrap().0, vec![2.0]);
        let g = "0:0.1:5".parse::<Grid>().unwrap().0;
        assert_eq!(g[50], 5.0);
    }

    #[test]
    fn rejects_bad_grids() {
        for s in ["0:0:1", "1:0.1:0", "0:1", "a:1:2", "0:-1:2", "0:1:inf"] {
            assert!(s.parse::<Grid>().is_err(), "{s}");
        }
    }

    #[test]
    fn lists() {
        assert_eq!("0.5, 1,2".parse::<List>().unwrap().0, vec![0.5, 1.0, 2.0]);
        assert!("1,,2".parse::<List>().is_err());
    }
}
