//! One-indexed exact sequences.
//!
//! A `Seq` is either finitely supported or a closed-form family with term
//! `c * k^p * r^k` (the catalogue's constant, power-law, geometric and
//! alternating kinds are all of this shape), optionally overridden on a
//! finite prefix. Indexing is 1-based throughout.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::scalar::{idx, Scalar};

/// The integration / differentiation decorations on sequence terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decoration {
    /// `(k * x_k)`
    Integrated,
    /// `(x_k / k)`
    Differentiated,
}

/// Closed-form term family: `term(k) = coeff * k^power * ratio^k`.
///
/// `ratio` is restricted to `|ratio| <= 1` and `ratio != 0`; the named
/// catalogue kinds map onto it as
/// `Constant(c)` = `(c, 0, 1)`, `PowerLaw(c, p)` = `(c, p, 1)`,
/// `Geometric(c, r)` = `(c, 0, r)` and `Alternating(c)` = `(c, 0, -1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub coeff: Scalar,
    pub power: i64,
    pub ratio: Scalar,
}

impl Family {
    pub fn term(&self, k: u64) -> Scalar {
        if self.coeff.is_zero() {
            return Scalar::zero();
        }
        &(&self.coeff * &idx(k).pow(self.power)) * &self.ratio.pow(k as i64)
    }

    /// Whether `ratio^k` decays (|r| < 1).
    pub fn geometric_decay(&self) -> bool {
        self.ratio.abs() < Scalar::one()
    }

    /// Whether terms have eventually constant sign (r > 0 or c == 0).
    pub fn sign_constant(&self) -> bool {
        self.coeff.is_zero() || self.ratio.is_positive()
    }
}

/// A one-indexed scalar sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Seq {
    /// Values at indices `1..=m`, implicitly zero beyond.
    Finite(Vec<Scalar>),
    /// Closed-form family; `prefix` overrides terms `1..=prefix.len()`.
    Family { family: Family, prefix: Vec<Scalar> },
}

impl Seq {
    pub fn finite(values: Vec<Scalar>) -> Self {
        Seq::Finite(values)
    }

    pub fn constant(c: Scalar) -> Self {
        Seq::Family {
            family: Family {
                coeff: c,
                power: 0,
                ratio: Scalar::one(),
            },
            prefix: Vec::new(),
        }
    }

    pub fn power_law(c: Scalar, p: i64) -> Self {
        Seq::Family {
            family: Family {
                coeff: c,
                power: p,
                ratio: Scalar::one(),
            },
            prefix: Vec::new(),
        }
    }

    /// `c * r^k` with `|r| < 1`, `r != 0`.
    pub fn geometric(c: Scalar, r: Scalar) -> Self {
        assert!(
            !r.is_zero() && r.abs() < Scalar::one(),
            "geometric ratio must satisfy 0 < |r| < 1"
        );
        Seq::Family {
            family: Family {
                coeff: c,
                power: 0,
                ratio: r,
            },
            prefix: Vec::new(),
        }
    }

    /// `c * (-1)^k`.
    pub fn alternating(c: Scalar) -> Self {
        Seq::Family {
            family: Family {
                coeff: c,
                power: 0,
                ratio: Scalar::from_int(-1),
            },
            prefix: Vec::new(),
        }
    }

    /// The unit vector `e^(k)`.
    pub fn unit(k: u64) -> Self {
        assert!(k >= 1);
        let mut v = vec![Scalar::zero(); k as usize];
        v[k as usize - 1] = Scalar::one();
        Seq::Finite(v)
    }

    pub fn zero() -> Self {
        Seq::Finite(Vec::new())
    }

    /// Exact term at index `k >= 1`.
    pub fn term(&self, k: u64) -> Scalar {
        assert!(k >= 1, "sequences are 1-indexed");
        match self {
            Seq::Finite(v) => v
                .get(k as usize - 1)
                .cloned()
                .unwrap_or_else(Scalar::zero),
            Seq::Family { family, prefix } => {
                if let Some(s) = prefix.get(k as usize - 1) {
                    s.clone()
                } else {
                    family.term(k)
                }
            }
        }
    }

    /// Support bound for finitely supported sequences, `None` for families
    /// with nonzero coefficient.
    pub fn support(&self) -> Option<u64> {
        match self {
            Seq::Finite(v) => Some(v.len() as u64),
            Seq::Family { family, prefix } => {
                if family.coeff.is_zero() {
                    Some(prefix.len() as u64)
                } else {
                    None
                }
            }
        }
    }

    /// Termwise `(k * x_k)` or `(x_k / k)`; families are remapped in closed
    /// form by shifting the power.
    pub fn decorate(&self, d: Decoration) -> Seq {
        let shift = match d {
            Decoration::Integrated => 1,
            Decoration::Differentiated => -1,
        };
        let scale = |k: u64, s: &Scalar| match d {
            Decoration::Integrated => s * &idx(k),
            Decoration::Differentiated => s / &idx(k),
        };
        match self {
            Seq::Finite(v) => Seq::Finite(
                v.iter()
                    .enumerate()
                    .map(|(i, s)| scale(i as u64 + 1, s))
                    .collect(),
            ),
            Seq::Family { family, prefix } => Seq::Family {
                family: Family {
                    coeff: family.coeff.clone(),
                    power: family.power + shift,
                    ratio: family.ratio.clone(),
                },
                prefix: prefix
                    .iter()
                    .enumerate()
                    .map(|(i, s)| scale(i as u64 + 1, s))
                    .collect(),
            },
        }
    }

    /// The section `x^[n] = (x_1, ..., x_n, 0, 0, ...)`.
    pub fn truncate(&self, n: u64) -> Seq {
        assert!(n >= 1);
        Seq::Finite((1..=n).map(|k| self.term(k)).collect())
    }

    /// First `n` terms as a vector.
    pub fn prefix_terms(&self, n: u64) -> Vec<Scalar> {
        (1..=n).map(|k| self.term(k)).collect()
    }

    /// Underlying family once prefix overrides are skipped, if any.
    pub fn family_part(&self) -> Option<(&Family, u64)> {
        match self {
            Seq::Finite(_) => None,
            Seq::Family { family, prefix } => {
                if family.coeff.is_zero() {
                    None
                } else {
                    Some((family, prefix.len() as u64))
                }
            }
        }
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Scalar]| {
            v.iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            Seq::Finite(v) => write!(f, "finite:[{}]", join(v)),
            Seq::Family { family, prefix } => {
                let one = Scalar::one();
                let minus_one = Scalar::from_int(-1);
                let head = if family.ratio == one && family.power == 0 {
                    format!("const:{}", family.coeff)
                } else if family.ratio == one {
                    format!("powerlaw:{},{}", family.coeff, family.power)
                } else if family.ratio == minus_one && family.power == 0 {
                    format!("alt:{}", family.coeff)
                } else if family.power == 0 {
                    format!("geom:{},{}", family.coeff, family.ratio)
                } else {
                    format!(
                        "family:{},{},{}",
                        family.coeff, family.power, family.ratio
                    )
                };
                if prefix.is_empty() {
                    write!(f, "{head}")
                } else {
                    write!(f, "{head};prefix=[{}]", join(prefix))
                }
            }
        }
    }
}

impl FromStr for Seq {
    type Err = Error;

    /// Sequence literal grammar:
    /// `finite:[p/q,...]`, `const:c`, `powerlaw:c,p`, `geom:c,r`, `alt:c`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected `kind:args` in `{s}`")))?;
        match kind {
            "finite" => {
                let inner = rest
                    .strip_prefix('[')
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| {
                        Error::Parse(format!("expected `finite:[...]`, got `{s}`"))
                    })?;
                let values = if inner.trim().is_empty() {
                    Vec::new()
                } else {
                    inner
                        .split(',')
                        .map(|t| t.parse::<Scalar>())
                        .collect::<Result<Vec<_>, _>>()?
                };
                Ok(Seq::Finite(values))
            }
            "const" => Ok(Seq::constant(rest.parse()?)),
            "powerlaw" => {
                let (c, p) = rest.split_once(',').ok_or_else(|| {
                    Error::Parse(format!("expected `powerlaw:c,p`, got `{s}`"))
                })?;
                let p: i64 = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("invalid exponent `{p}`")))?;
                Ok(Seq::power_law(c.parse()?, p))
            }
            "geom" => {
                let (c, r) = rest.split_once(',').ok_or_else(|| {
                    Error::Parse(format!("expected `geom:c,r`, got `{s}`"))
                })?;
                let r: Scalar = r.parse()?;
                if r.is_zero() || r.abs() >= Scalar::one() {
                    return Err(Error::Parse(format!(
                        "geometric ratio must satisfy 0 < |r| < 1, got `{r}`"
                    )));
                }
                Ok(Seq::geometric(c.parse()?, r))
            }
            "alt" => Ok(Seq::alternating(rest.parse()?)),
            other => Err(Error::Parse(format!("unknown sequence kind `{other}`"))),
        }
    }
}
