use std::fmt;
use std::str::FromStr;

use crate::error::{GeomError, Result};
use crate::kernel::parameter_values;

/// A closed range `lo:hi:step`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamRange {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl ParamRange {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        let r = Self { lo, hi, step };
        r.validate()?;
        Ok(r)
    }

    /// Finite bounds, `lo <= hi`, positive step dividing the length within 1e-9.
    pub fn validate(&self) -> Result<()> {
        let ok = self.lo.is_finite() && self.hi.is_finite() && self.step > 0.0 && self.hi >= self.lo;
        if !ok {
            return Err(GeomError::InvalidConfig(format!("invalid range {self}")));
        }
        let ratio = (self.hi - self.lo) / self.step;
        if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) {
            return Err(GeomError::InvalidConfig(format!(
                "step {} does not divide the range {}:{}",
                self.step, self.lo, self.hi
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        self.validate()?;
        parameter_values(self.lo, self.hi, self.step)
    }
}

impl fmt::Display for ParamRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.step)
    }
}

impl FromStr for ParamRange {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| GeomError::InvalidConfig(format!("cannot parse `{t}` in range `{s}`")))
        };
        match parts.as_slice() {
            [lo, hi, step] => Self::new(parse(lo)?, parse(hi)?, parse(step)?),
            [v] => {
                let v = parse(v)?;
                Self::new(v, v, 1.0)
            }
            _ => Err(GeomError::InvalidConfig(format!("expected lo:hi:step, got `{s}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_enumerates() {
        let r: ParamRange = "-2:2:0.25".parse().unwrap();
        let v = r.values().unwrap();
        assert_eq!(v.len(), 17);
        assert_eq!(v[0], -2.0);
        assert_eq!(v[8], 0.0);
        assert_eq!(v[16], 2.0);
        let single: ParamRange = "1.5".parse().unwrap();
        assert_eq!(single.values().unwrap(), vec![1.5]);
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!("1:0:0.1".parse::<ParamRange>().is_err());
        assert!("0:1:0.3".parse::<ParamRange>().is_err());
        assert!("0:1".parse::<ParamRange>().is_err());
        assert!("a:1:0.1".parse::<ParamRange>().is_err());
        assert!("0:1:0".parse::<ParamRange>().is_err());
    }
}
