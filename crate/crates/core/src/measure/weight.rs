use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Atom weight: an exact rational when given as `"p/q"`, else a double.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    Exact(Ratio<u64>),
    Approx(f64),
}

impl Weight {
    pub fn to_f64(self) -> f64 {
        match self {
            Weight::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            Weight::Approx(x) => x,
        }
    }

    pub fn is_positive(self) -> bool {
        match self {
            Weight::Exact(r) => *r.numer() > 0,
            Weight::Approx(x) => x > 0.0 && x.is_finite(),
        }
    }

    /// Exact sum when every weight is rational; `None` on overflow or when
    /// any weight is a double.
    pub fn exact_sum(weights: &[Weight]) -> Option<Ratio<u128>> {
        let mut acc = Ratio::<u128>::from_integer(0);
        for w in weights {
            let Weight::Exact(r) = w else { return None };
            let term = Ratio::new(u128::from(*r.numer()), u128::from(*r.denom()));
            let num = acc.numer().checked_mul(*term.denom())?.checked_add(term.numer().checked_mul(*acc.denom())?)?;
            let den = acc.denom().checked_mul(*term.denom())?;
            acc = Ratio::new(num, den);
        }
        Some(acc)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Weight::Approx(x) => write!(f, "{x}"),
        }
    }
}

impl FromStr for Weight {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: u64 = p.trim().parse().map_err(|e| format!("bad numerator in {s:?}: {e}"))?;
            let q: u64 = q.trim().parse().map_err(|e| format!("bad denominator in {s:?}: {e}"))?;
            if q == 0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(Weight::Exact(Ratio::new(p, q)))
        } else {
            s.parse::<f64>().map(Weight::Approx).map_err(|e| format!("bad weight {s:?}: {e}"))
        }
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Weight::Exact(_) => s.serialize_str(&self.to_string()),
            Weight::Approx(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Weight::Approx(x)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}
