use std::fmt;
use std::str::FromStr;

use super::{Field, FiniteField, Rationals};
use crate::Error;

/// Which base field to work over, as written on the command line:
/// `Q`, `p` or `p^m`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
    Extension(u64, u32),
}

/// A constructed base field.
#[derive(Clone, Debug)]
pub enum FieldKind {
    Rationals(Rationals),
    Finite(FiniteField),
}

impl FieldSpec {
    /// Validate and build the field. Extension moduli are the least monic
    /// irreducible polynomials (see [`FiniteField::new`]).
    pub fn make(&self) -> Result<FieldKind, Error> {
        match *self {
            FieldSpec::Rationals => Ok(FieldKind::Rationals(Rationals)),
            FieldSpec::Prime(p) => FiniteField::prime(p).map(FieldKind::Finite),
            FieldSpec::Extension(p, m) => FiniteField::new(p, m).map(FieldKind::Finite),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) | FieldSpec::Extension(p, _) => p,
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::InvalidField(format!("unsupported field string {s:?}"));
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let spec = match s.split_once('^') {
            None => FieldSpec::Prime(s.parse().map_err(|_| bad())?),
            Some((p, m)) => {
                let p = p.trim().parse().map_err(|_| bad())?;
                match m.trim().parse().map_err(|_| bad())? {
                    1 => FieldSpec::Prime(p),
                    m => FieldSpec::Extension(p, m),
                }
            }
        };
        spec.make()?;
        Ok(spec)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "{p}"),
            FieldSpec::Extension(p, m) => write!(f, "{p}^{m}"),
        }
    }
}

impl FieldKind {
    pub fn label(&self) -> String {
        match self {
            FieldKind::Rationals(k) => k.label(),
            FieldKind::Finite(k) => k.label(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_field_strings() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("2".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(2));
        assert_eq!("2^2".parse::<FieldSpec>().unwrap(), FieldSpec::Extension(2, 2));
        assert_eq!("5^3".parse::<FieldSpec>().unwrap().to_string(), "5^3");
        assert!("4".parse::<FieldSpec>().is_err());
        assert!("3^0".parse::<FieldSpec>().is_err());
        assert!("R".parse::<FieldSpec>().is_err());
    }
}
