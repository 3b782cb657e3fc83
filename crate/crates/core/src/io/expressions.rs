use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::timestepping::{SpaceTimeField, TraceData};
use crate::verification::standing_mode_solution;

/// Named data available to configuration files.
///
/// New entries need a name, and a trace or field form for the roles they
/// support; a name used in the wrong role is a configuration error.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Expression {
    /// Zero trace, field or source.
    Zero,
    /// Boundary trace `sin(10 t) exp(-10 y^2)`.
    DemoLeftPulse,
    /// The unit-square standing mode as initial data (its source is zero).
    StandingMode,
}

/// `sin(10 t) exp(-10 y^2)`.
pub fn demo_left_pulse(p: Point, t: f64) -> f64 {
    (10.0 * t).sin() * (-10.0 * p.y * p.y).exp()
}

impl Expression {
    pub const ALL: [Expression; 3] = [Expression::Zero, Expression::DemoLeftPulse, Expression::StandingMode];

    pub fn name(self) -> &'static str {
        match self {
            Expression::Zero => "zero",
            Expression::DemoLeftPulse => "demo_left_pulse",
            Expression::StandingMode => "standing_mode",
        }
    }

    fn wrong_role(self, role: &str) -> Error {
        Error::Config(format!("expression `{}` cannot be used as {role}", self.name()))
    }

    /// Tangential trace for an essential boundary condition.
    pub fn trace(self) -> Result<TraceData<'static>> {
        match self {
            Expression::Zero => Ok(Box::new(|_, _| 0.0)),
            Expression::DemoLeftPulse => Ok(Box::new(demo_left_pulse)),
            Expression::StandingMode => Err(self.wrong_role("a boundary trace")),
        }
    }

    /// Source term `f`; `None` stands for zero.
    pub fn source(self) -> Result<Option<SpaceTimeField<'static>>> {
        match self {
            Expression::Zero => Ok(None),
            Expression::StandingMode => Ok(standing_mode_solution().source.map(|f| f as SpaceTimeField)),
            Expression::DemoLeftPulse => Err(self.wrong_role("a source term")),
        }
    }

    /// Initial field and time derivative; `None` stands for zero.
    pub fn initial_data(self) -> Result<(Option<SpaceTimeField<'static>>, Option<SpaceTimeField<'static>>)> {
        match self {
            Expression::Zero => Ok((None, None)),
            Expression::StandingMode => {
                let s = standing_mode_solution();
                Ok((Some(s.field), Some(s.dt_field)))
            }
            Expression::DemoLeftPulse => Err(self.wrong_role("initial data")),
        }
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Expression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Expression::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| {
            let names: Vec<_> = Expression::ALL.iter().map(|e| e.name()).collect();
            Error::Config(format!("unknown expression `{s}` (known: {})", names.join(", ")))
        })
    }
}
