use std::f64::consts::PI;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An angle as written: an exact rational multiple of π, or plain radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleRepr {
    PiFraction { num: i64, den: i64 },
    Radians(f64),
}

impl AngleRepr {
    /// Reduced fraction `num/den` of π.
    pub fn pi_fraction(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Input("zero denominator in angle".into()));
        }
        let g = num.gcd(&den);
        let s = if den < 0 { -1 } else { 1 };
        Ok(Self::PiFraction { num: s * num / g, den: s * den / g })
    }

    #[must_use]
    pub fn radians(&self) -> f64 {
        match *self {
            Self::PiFraction { num, den } => PI * num as f64 / den as f64,
            Self::Radians(x) => x,
        }
    }

    #[must_use]
    pub fn is_exact(&self) -> bool {
        matches!(self, Self::PiFraction { .. })
    }
}

impl fmt::Display for AngleRepr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::PiFraction { num, den } => {
                match num {
                    0 => write!(f, "0")?,
                    1 => write!(f, "pi")?,
                    -1 => write!(f, "-pi")?,
                    n => write!(f, "{n}pi")?,
                }
                if den != 1 && num != 0 {
                    write!(f, "/{den}")?;
                }
                Ok(())
            }
            Self::Radians(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for AngleRepr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::PiFraction { .. } => s.serialize_str(&self.to_string()),
            Self::Radians(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for AngleRepr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Self::Radians(x)),
            Raw::Text(t) => parse_angle(&t).map_err(serde::de::Error::custom),
        }
    }
}

/// Parses `pi`, `2pi/3`, `2*pi/3`, `π/2`, `-pi/4` or decimal radians.
pub fn parse_angle(text: &str) -> Result<AngleRepr> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let t = t.replace('π', "pi").to_lowercase();
    if let Some(pos) = t.find("pi") {
        let head = t[..pos].trim_end_matches('*');
        let tail = &t[pos + 2..];
        let num: i64 = match head {
            "" | "+" => 1,
            "-" => -1,
            h => h.parse().map_err(|_| Error::Input(format!("bad angle multiplier in '{text}'")))?,
        };
        let den: i64 = match tail {
            "" => 1,
            s => s
                .strip_prefix('/')
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| Error::Input(format!("bad angle denominator in '{text}'")))?,
        };
        return AngleRepr::pi_fraction(num, den);
    }
    t.parse::<f64>().map(AngleRepr::Radians).map_err(|_| Error::Input(format!("cannot parse angle '{text}'")))
}

/// A rotation angle `phi ∈ (0, π]` with its derived `C = √(2 − 2cos φ)`.
///
/// When built from a cone or corner order `k`, `k` is retained and the
/// corner angle is `γ = π/k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleData {
    repr: AngleRepr,
    phi: f64,
    k: Option<u32>,
}

impl AngleData {
    /// `phi` must already lie in `(0, π]`.
    pub fn new(repr: AngleRepr) -> Result<Self> {
        let in_range = match repr {
            AngleRepr::PiFraction { num, den } => num > 0 && num <= den,
            AngleRepr::Radians(x) => x > 0.0 && x <= PI,
        };
        if !in_range {
            return Err(Error::Input(format!("rotation angle {repr} outside (0, pi]")));
        }
        Ok(Self { repr, phi: repr.radians(), k: None })
    }

    /// Decimal radians in `(0, π]`.
    pub fn from_radians(phi: f64) -> Result<Self> {
        Self::new(AngleRepr::Radians(phi))
    }

    /// Accepts `(0, 2π)` and folds `φ ↦ 2π − φ` onto `(0, π]`.
    pub fn canonical(repr: AngleRepr) -> Result<Self> {
        let folded = match repr {
            AngleRepr::PiFraction { num, den } if num > den && num < 2 * den => {
                AngleRepr::pi_fraction(2 * den - num, den)?
            }
            AngleRepr::Radians(x) if x > PI && x < 2.0 * PI => AngleRepr::Radians(2.0 * PI - x),
            r => r,
        };
        Self::new(folded)
    }

    /// The rotation by `2πj/k`, folded onto `(0, π]`.
    pub fn rotation(j: u32, k: u32) -> Result<Self> {
        if k == 0 || j.is_multiple_of(k) {
            return Err(Error::Input(format!("rotation 2pi*{j}/{k} is trivial")));
        }
        Self::canonical(AngleRepr::pi_fraction(2 * i64::from(j % k), i64::from(k))?)
    }

    /// Cone or corner of order `k`; `phi = 2π/k` folded, `γ = π/k`.
    pub fn order(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::Input(format!("order k = {k} must be at least 2")));
        }
        let mut a = Self::rotation(1, k)?;
        a.k = Some(k);
        Ok(a)
    }

    #[must_use]
    pub fn repr(&self) -> AngleRepr {
        self.repr
    }

    #[must_use]
    pub fn phi(&self) -> f64 {
        self.phi
    }

    #[must_use]
    pub fn k(&self) -> Option<u32> {
        self.k
    }

    /// `γ = π/k` when built from an order.
    #[must_use]
    pub fn gamma(&self) -> Option<f64> {
        self.k.map(|k| PI / f64::from(k))
    }

    #[must_use]
    pub fn is_pi(&self) -> bool {
        match self.repr {
            AngleRepr::PiFraction { num, den } => num == den,
            AngleRepr::Radians(x) => x == PI,
        }
    }

    #[must_use]
    pub fn cos_phi(&self) -> f64 {
        if self.is_pi() {
            -1.0
        } else {
            self.phi.cos()
        }
    }

    #[must_use]
    pub fn sin_phi(&self) -> f64 {
        if self.is_pi() {
            0.0
        } else {
            self.phi.sin()
        }
    }

    /// `C = 2 sin(φ/2)`.
    #[must_use]
    pub fn c(&self) -> f64 {
        if self.is_pi() {
            2.0
        } else {
            2.0 * (0.5 * self.phi).sin()
        }
    }

    #[must_use]
    pub fn c2(&self) -> f64 {
        let c = self.c();
        c * c
    }
}
