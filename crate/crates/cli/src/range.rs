//! `kind:start..end[:step]` sweeps over test-state families.

use std::fmt;
use std::str::FromStr;

use ongate::TestState;

pub const RANGE_GRAMMAR: &str =
    "fock:<n>[..<m>] | coherent:<x0>[..<x1>][:<step>] | squeezed:<dB>[..<dB>][:<step>]";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Fock,
    Coherent,
    Squeezed,
}

impl Family {
    fn default_step(self) -> f64 {
        match self {
            Family::Fock => 1.0,
            Family::Coherent | Family::Squeezed => 0.5,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Family::Fock => "fock",
            Family::Coherent => "coherent",
            Family::Squeezed => "squeezed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateRange {
    family: Family,
    start: f64,
    end: f64,
    step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeError(String);

impl fmt::Display for RangeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse '{}'; expected {RANGE_GRAMMAR}", self.0)
    }
}

impl std::error::Error for RangeError {}

impl FromStr for StateRange {
    type Err = RangeError;

    fn from_str(s: &str) -> Result<Self, RangeError> {
        let bad = || RangeError(s.to_string());
        let mut parts = s.trim().split(':');
        let family = match parts.next().ok_or_else(bad)? {
            "fock" => Family::Fock,
            "coherent" => Family::Coherent,
            "squeezed" => Family::Squeezed,
            _ => return Err(bad()),
        };
        let span = parts.next().ok_or_else(bad)?;
        let step = parts.next().map(|t| t.parse::<f64>().map_err(|_| bad())).transpose()?;
        if parts.next().is_some() {
            return Err(bad());
        }
        let (start, end) = match span.split_once("..") {
            Some((a, b)) => (a.parse::<f64>().map_err(|_| bad())?, b.parse::<f64>().map_err(|_| bad())?),
            None => {
                let v = span.parse::<f64>().map_err(|_| bad())?;
                (v, v)
            }
        };
        let step = step.unwrap_or(family.default_step());
        let integral = |v: f64| v.fract() == 0.0 && v >= 0.0;
        let ok = start.is_finite()
            && end >= start
            && step > 0.0
            && match family {
                Family::Fock => integral(start) && integral(end) && integral(step),
                Family::Squeezed => start >= 0.0,
                Family::Coherent => true,
            };
        if !ok {
            return Err(bad());
        }
        Ok(StateRange { family, start, end, step })
    }
}

impl fmt::Display for StateRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}..{}:{}", self.family.name(), self.start, self.end, self.step)
    }
}

impl StateRange {
    /// Members in increasing parameter order, endpoint included.
    pub fn states(&self) -> Vec<TestState> {
        let count = ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| {
                let v = self.start + k as f64 * self.step;
                // snap accumulated rounding onto the printed decimal grid
                let v = (v * 1e9).round() / 1e9;
                match self.family {
                    Family::Fock => TestState::Fock(v as usize),
                    Family::Coherent => TestState::Coherent(v),
                    Family::Squeezed => TestState::Squeezed(v),
                }
            })
            .collect()
    }
}
