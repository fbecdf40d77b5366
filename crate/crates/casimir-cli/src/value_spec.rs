//! Sweep-aware numeric flag values: a scalar, an explicit comma list, or a
//! `start:stop:count[:log]` grid.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq)]
pub enum ValueSpec {
    Scalar(f64),
    List(Vec<f64>),
    Range { start: f64, stop: f64, count: usize, log: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseSpecError(pub String);

impl fmt::Display for ParseSpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid value spec: {}", self.0)
    }
}

impl std::error::Error for ParseSpecError {}

impl FromStr for ValueSpec {
    type Err = ParseSpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() < 3 || parts.len() > 4 {
                return Err(ParseSpecError(format!("expected start:stop:count[:log], got '{s}'")));
            }
            let start: f64 = parts[0].parse().map_err(|_| ParseSpecError(format!("bad start in '{s}'")))?;
            let stop: f64 = parts[1].parse().map_err(|_| ParseSpecError(format!("bad stop in '{s}'")))?;
            let count: usize = parts[2].parse().map_err(|_| ParseSpecError(format!("bad count in '{s}'")))?;
            let log = match parts.get(3) {
                None => false,
                Some(&"log") => true,
                Some(&"lin") => false,
                Some(other) => return Err(ParseSpecError(format!("unknown grid kind '{other}'"))),
            };
            if count == 0 {
                return Err(ParseSpecError("count must be >= 1".into()));
            }
            if count > 1 && !(start < stop) {
                return Err(ParseSpecError(format!("need start < stop for a range, got {start}:{stop}")));
            }
            if log && !(start > 0.0) {
                return Err(ParseSpecError("log grid needs start > 0".into()));
            }
            Ok(ValueSpec::Range { start, stop, count, log })
        } else if s.contains(',') {
            let vals: Result<Vec<f64>, _> = s.split(',').map(|p| p.trim().parse::<f64>()).collect();
            let vals = vals.map_err(|_| ParseSpecError(format!("bad list '{s}'")))?;
            if vals.is_empty() {
                return Err(ParseSpecError("empty list".into()));
            }
            Ok(ValueSpec::List(vals))
        } else {
            let v: f64 = s.trim().parse().map_err(|_| ParseSpecError(format!("bad number '{s}'")))?;
            Ok(ValueSpec::Scalar(v))
        }
    }
}

impl ValueSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            ValueSpec::Scalar(v) => vec![*v],
            ValueSpec::List(vs) => vs.clone(),
            ValueSpec::Range { start, stop, count, log } => {
                if *count == 1 {
                    return vec![*start];
                }
                (0..*count)
                    .map(|i| {
                        let t = i as f64 / (*count as f64 - 1.0);
                        if *log {
                            start * (stop / start).powf(t)
                        } else {
                            start + t * (stop - start)
                        }
                    })
                    .collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_and_list() {
        assert_eq!("0.5".parse::<ValueSpec>().unwrap().values(), vec![0.5]);
        assert_eq!(
            "1,2,3.5".parse::<ValueSpec>().unwrap().values(),
            vec![1.0, 2.0, 3.5]
        );
    }

    #[test]
    fn linear_and_log_grids() {
        let v = "0:1:5".parse::<ValueSpec>().unwrap().values();
        assert_eq!(v, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let v = "1e-2:1:3:log".parse::<ValueSpec>().unwrap().values();
        assert!((v[0] - 0.01).abs() < 1e-15);
        assert!((v[1] - 0.1).abs() < 1e-15);
        assert!((v[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_single_point_grid() {
        let v = "0.3:0.9:1".parse::<ValueSpec>().unwrap().values();
        assert_eq!(v, vec![0.3]);
    }

    #[test]
    fn rejects_malformed() {
        assert!("0.9:0.1:5".parse::<ValueSpec>().is_err()); // start >= stop
        assert!("1:2:0".parse::<ValueSpec>().is_err());
        assert!("a,b".parse::<ValueSpec>().is_err());
        assert!("1:2:3:weird".parse::<ValueSpec>().is_err());
    }
}
