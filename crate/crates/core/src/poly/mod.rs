//! Root-form polynomials and their boundary norms.

mod norms;
mod quadrature;
mod root_poly;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use norms::{
    inverse_markov_factor, log_integral_over, log_norms, lq_norm, sup_norm, sup_norm_derivative,
    sup_on_boundary, NormRecord, SupNorm,
};
pub use quadrature::{gauss_legendre, QuadratureGrid, GL_ORDER};
pub use root_poly::{LogPair, RootPolynomial};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolyError {
    #[error("evaluation point {re}+{im}i coincides with a root")]
    SingularPoint { re: f64, im: f64 },
    #[error("the polynomial norm vanishes")]
    ZeroNorm,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("unsupported exponent {0}: q must be at least 1 or inf")]
    InvalidExponent(String),
}

/// The `q` of an `L^q` norm: a finite `q ≥ 1`, or the sup norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinity)
    }

    /// `q` as a float, with `∞` for the sup norm.
    pub fn value(&self) -> f64 {
        match self {
            Self::Finite(q) => *q,
            Self::Infinity => f64::INFINITY,
        }
    }
}

impl FromStr for Exponent {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Self::Infinity),
            t => match t.parse::<f64>() {
                Ok(q) if q >= 1.0 && q.is_finite() => Ok(Self::Finite(q)),
                _ => Err(PolyError::InvalidExponent(s.to_string())),
            },
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(q) => write!(f, "{q}"),
            Self::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Finite(q) => s.serialize_f64(*q),
            Self::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(q) if q >= 1.0 && q.is_finite() => Ok(Self::Finite(q)),
            Raw::Num(q) => Err(serde::de::Error::custom(format!("unsupported exponent {q}"))),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_parsing() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert_eq!("2".parse::<Exponent>().unwrap(), Exponent::Finite(2.0));
        assert!("0.5".parse::<Exponent>().is_err());
        let j = serde_json::to_string(&Exponent::Infinity).unwrap();
        assert_eq!(serde_json::from_str::<Exponent>(&j).unwrap(), Exponent::Infinity);
        assert_eq!(serde_json::from_str::<Exponent>("1.5").unwrap(), Exponent::Finite(1.5));
    }
}
