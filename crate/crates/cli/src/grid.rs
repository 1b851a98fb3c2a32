use std::fmt;
use std::str::FromStr;

/// An inclusive grid `lo:hi:steps` of `steps` evenly spaced points, or a
/// single value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Grid {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Self {
        Self { lo, hi, steps }
    }

    pub fn points(&self) -> Vec<f64> {
        remcode::numeric::linspace(self.lo, self.hi, self.steps)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.steps)
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |t: &str| -> Result<f64, String> {
            let v: f64 = t.parse().map_err(|_| format!("'{t}' is not a number"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("'{t}' is not finite"))
            }
        };
        match parts.as_slice() {
            [v] => {
                let v = num(v)?;
                Ok(Grid::new(v, v, 1))
            }
            [lo, hi, steps] => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                let steps: usize = steps
                    .parse()
                    .map_err(|_| format!("'{steps}' is not a point count"))?;
                if hi < lo {
                    return Err(format!("grid end {hi} is below its start {lo}"));
                }
                Ok(Grid::new(lo, hi, steps))
            }
            _ => Err(format!("expected lo:hi:steps or a single value, got '{s}'")),
        }
    }
}
