//! Grid axes given on the command line.
//!
//! Accepted forms: a single value `0.5`, a list `0.1,2,5,inf`, a linear
//! range `start:stop:count` or a logarithmic range `start:stop:count:log`.

use std::str::FromStr;

/// Parses a number, accepting `inf` in any letter case.
pub fn parse_number(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("+inf") {
        return Ok(f64::INFINITY);
    }
    let v: f64 = t.parse().map_err(|_| format!("not a number: {t:?}"))?;
    if v.is_nan() || v.is_infinite() {
        return Err(format!("not a number: {t:?}"));
    }
    Ok(v)
}

/// Inverse temperature: positive, or `inf`.
pub fn parse_beta(s: &str) -> Result<f64, String> {
    let v = parse_number(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("beta must be positive or inf, got {s}"))
    }
}

pub fn parse_amplitude(s: &str) -> Result<f64, String> {
    let v = parse_number(s)?;
    if v.is_finite() && v != 0.0 {
        Ok(v)
    } else {
        Err(format!("amplitude must be finite and nonzero, got {s}"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    values: Vec<f64>,
}

impl Axis {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn linear(start: f64, stop: f64, count: usize) -> Result<Self, String> {
        check_range(start, stop, count)?;
        let step = if count > 1 {
            (stop - start) / (count - 1) as f64
        } else {
            0.0
        };
        let mut values: Vec<f64> = (0..count).map(|i| start + step * i as f64).collect();
        if count > 1 {
            values[count - 1] = stop;
        }
        Ok(Self { values })
    }

    pub fn log(start: f64, stop: f64, count: usize) -> Result<Self, String> {
        check_range(start, stop, count)?;
        if !(start > 0.0 && stop > 0.0) {
            return Err("log spacing needs positive endpoints".into());
        }
        let (a, b) = (start.ln(), stop.ln());
        let step = if count > 1 {
            (b - a) / (count - 1) as f64
        } else {
            0.0
        };
        let mut values: Vec<f64> = (0..count).map(|i| (a + step * i as f64).exp()).collect();
        values[0] = start;
        if count > 1 {
            values[count - 1] = stop;
        }
        Ok(Self { values })
    }
}

fn check_range(start: f64, stop: f64, count: usize) -> Result<(), String> {
    if count == 0 {
        return Err("axis count must be at least 1".into());
    }
    if !(start.is_finite() && stop.is_finite()) {
        return Err("range endpoints must be finite".into());
    }
    Ok(())
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [single] => {
                let values = single.split(',').map(parse_number).collect::<Result<Vec<_>, _>>()?;
                Ok(Self { values })
            }
            [start, stop, count] | [start, stop, count, "lin"] => {
                Axis::linear(parse_number(start)?, parse_number(stop)?, parse_count(count)?)
            }
            [start, stop, count, "log"] => {
                Axis::log(parse_number(start)?, parse_number(stop)?, parse_count(count)?)
            }
            _ => Err(format!(
                "bad axis {s:?}: expected VALUE, V1,V2,..., START:STOP:COUNT or START:STOP:COUNT:log"
            )),
        }
    }
}

fn parse_count(s: &str) -> Result<usize, String> {
    s.trim().parse().map_err(|_| format!("bad count {s:?}"))
}
