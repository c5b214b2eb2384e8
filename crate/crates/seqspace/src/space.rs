//! The twelve-space catalogue: eight base spaces closed under the
//! integration and differentiation decorations.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::seq::Decoration;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseSpace {
    L1,
    Linf,
    C,
    C0,
    Bv,
    Bs,
    Cs,
    C0s,
}

impl BaseSpace {
    pub fn token(self) -> &'static str {
        match self {
            BaseSpace::L1 => "l1",
            BaseSpace::Linf => "linf",
            BaseSpace::C => "c",
            BaseSpace::C0 => "c0",
            BaseSpace::Bv => "bv",
            BaseSpace::Bs => "bs",
            BaseSpace::Cs => "cs",
            BaseSpace::C0s => "c0s",
        }
    }
}

/// A catalogue space identifier: a base space with an optional decoration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpaceId {
    pub base: BaseSpace,
    pub decoration: Option<Decoration>,
}

impl SpaceId {
    pub fn plain(base: BaseSpace) -> Self {
        SpaceId {
            base,
            decoration: None,
        }
    }

    pub fn integrated(base: BaseSpace) -> Self {
        SpaceId {
            base,
            decoration: Some(Decoration::Integrated),
        }
    }

    pub fn differentiated(base: BaseSpace) -> Self {
        SpaceId {
            base,
            decoration: Some(Decoration::Differentiated),
        }
    }

    pub fn int_bv() -> Self {
        Self::integrated(BaseSpace::Bv)
    }

    pub fn d_bv() -> Self {
        Self::differentiated(BaseSpace::Bv)
    }

    pub fn int_l1() -> Self {
        Self::integrated(BaseSpace::L1)
    }

    pub fn d_l1() -> Self {
        Self::differentiated(BaseSpace::L1)
    }

    pub fn l1() -> Self {
        Self::plain(BaseSpace::L1)
    }
}

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.decoration {
            None => write!(f, "{}", self.base.token()),
            Some(Decoration::Integrated) => write!(f, "int_{}", self.base.token()),
            Some(Decoration::Differentiated) => write!(f, "d_{}", self.base.token()),
        }
    }
}

impl FromStr for SpaceId {
    type Err = Error;

    /// Space literal grammar: `l1`, `linf`, `c`, `c0`, `bv`, `bs`, `cs`,
    /// `c0s`, with prefixes `int_` and `d_`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let (decoration, rest) = if let Some(r) = s.strip_prefix("int_") {
            (Some(Decoration::Integrated), r)
        } else if let Some(r) = s.strip_prefix("d_") {
            (Some(Decoration::Differentiated), r)
        } else {
            (None, s)
        };
        let base = match rest {
            "l1" => BaseSpace::L1,
            "linf" => BaseSpace::Linf,
            "c" => BaseSpace::C,
            "c0" => BaseSpace::C0,
            "bv" => BaseSpace::Bv,
            "bs" => BaseSpace::Bs,
            "cs" => BaseSpace::Cs,
            "c0s" => BaseSpace::C0s,
            other => return Err(Error::Parse(format!("unknown space `{other}`"))),
        };
        Ok(SpaceId { base, decoration })
    }
}
