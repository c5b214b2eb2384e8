//! Multiplier-space (dual) membership for the two decorated bv spaces.
//!
//! Two independent paths are implemented and cross-checked: the analytic
//! path identifies the dual space and delegates to `member`, while the
//! matrix path builds the associated triangle and tests its class
//! conditions from entry data alone. The matrix path only upgrades
//! probe-bounded evidence to a verdict when entries stabilize, are
//! dominated by a convergent geometric series, are periodic, or grow by
//! increments bounded away from zero; everything else stays inconclusive.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::op::TriangleOp;
use crate::scalar::{idx, Scalar};
use crate::seq::{Decoration, Seq};
use crate::space::{BaseSpace, SpaceId};
use crate::spaces::{decorated, member};
use crate::verdict::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualKind {
    Alpha,
    Beta,
    Gamma,
}

impl fmt::Display for DualKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = match self {
            DualKind::Alpha => "alpha",
            DualKind::Beta => "beta",
            DualKind::Gamma => "gamma",
        };
        write!(f, "{t}")
    }
}

impl FromStr for DualKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "alpha" => Ok(DualKind::Alpha),
            "beta" => Ok(DualKind::Beta),
            "gamma" => Ok(DualKind::Gamma),
            other => Err(Error::Parse(format!("unknown dual kind `{other}`"))),
        }
    }
}

fn require_dualizable(space: SpaceId) -> Result<Decoration> {
    match (space.base, space.decoration) {
        (BaseSpace::Bv, Some(d)) => Ok(d),
        _ => Err(Error::NotNormable(
            space.to_string(),
            "duals are computed for int_bv and d_bv".into(),
        )),
    }
}

/// The identified dual space. The gamma dual of d_bv is exposed as int_bs;
/// the source text prints a transposed variant of that rule without proof,
/// which is documented here and not asserted.
pub fn dual_space(space: SpaceId, kind: DualKind) -> Result<SpaceId> {
    let deco = require_dualizable(space)?;
    let base = match (deco, kind) {
        (_, DualKind::Alpha) => BaseSpace::L1,
        (Decoration::Integrated, DualKind::Beta) => BaseSpace::Bs,
        (Decoration::Integrated, DualKind::Gamma) => BaseSpace::Bs,
        (Decoration::Differentiated, DualKind::Beta) => BaseSpace::Cs,
        (Decoration::Differentiated, DualKind::Gamma) => BaseSpace::Bs,
    };
    // duality swaps the decoration
    let dual_deco = match deco {
        Decoration::Integrated => Decoration::Differentiated,
        Decoration::Differentiated => Decoration::Integrated,
    };
    Ok(SpaceId {
        base,
        decoration: Some(dual_deco),
    })
}

/// Partial pairing data between a candidate multiplier and a sequence:
/// absolute sums (alpha), plain sums (beta), or the running sup of
/// absolute partial sums (gamma).
pub fn pairing_partial(a: &Seq, x: &Seq, mode: DualKind, n: u64) -> Scalar {
    assert!(n >= 1);
    let mut acc = Scalar::zero();
    let mut best = Scalar::zero();
    for k in 1..=n {
        let t = &a.term(k) * &x.term(k);
        match mode {
            DualKind::Alpha => acc += t.abs(),
            DualKind::Beta => acc += t,
            DualKind::Gamma => {
                acc += t;
                best = best.max(acc.abs());
            }
        }
    }
    match mode {
        DualKind::Gamma => best,
        _ => acc,
    }
}

/// A catalogue element of `space` whose pairing with `a` has eventually
/// sign-constant terms, for reproducible divergence traces.
pub fn pairing_witness(space: SpaceId, a: &Seq) -> Seq {
    let alternating = a
        .family_part()
        .map(|(f, _)| f.ratio.is_negative())
        .unwrap_or(false);
    match (space.decoration, alternating) {
        (Some(Decoration::Integrated), false) => {
            Seq::power_law(Scalar::one(), -1)
        }
        (Some(Decoration::Differentiated), false) => {
            Seq::power_law(Scalar::one(), 1)
        }
        // geometric decay lies in every space here; the negative ratio
        // lines the signs up with an alternating multiplier
        (_, true) => Seq::geometric(Scalar::one(), Scalar::ratio(-1, 2)),
        (None, false) => Seq::unit(1),
    }
}

// ---------------------------------------------------------------------------
// analytic path

/// Membership of `a` in the requested dual of `space`, decided on the
/// identified dual space.
pub fn dual_member(
    space: SpaceId,
    kind: DualKind,
    a: &Seq,
    probe: u64,
) -> Result<Verdict> {
    let target = dual_space(space, kind)?;
    let v = member(target, a, probe);
    Ok(v.with_context(&format!("{kind}-dual of {space} is {target}")))
}

// ---------------------------------------------------------------------------
// matrix path

/// The triangle realizing the pairing sums against transform coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixStyle {
    /// Rows `a_n / n`, columns `k <= n`.
    C,
    /// Rows `n * a_n`, columns `2 <= k <= n` per the source construction;
    /// column 1 is empty and the class test starts at column 2.
    D,
    /// Cumulative `e_nk = sum_{j=k}^{n} a_j j^weight`.
    E { weight: i64 },
}

#[derive(Clone, Debug)]
pub struct AssociatedMatrix {
    pub style: MatrixStyle,
    pub source: Seq,
}

impl AssociatedMatrix {
    pub fn entry(&self, n: u64, k: u64) -> Scalar {
        assert!(n >= 1 && k >= 1);
        if k > n {
            return Scalar::zero();
        }
        match self.style {
            MatrixStyle::C => &self.source.term(n) / &idx(n),
            MatrixStyle::D => {
                if k >= 2 {
                    &self.source.term(n) * &idx(n)
                } else {
                    Scalar::zero()
                }
            }
            MatrixStyle::E { weight } => {
                let mut acc = Scalar::zero();
                for j in k..=n {
                    acc += &self.source.term(j) * &idx(j).pow(weight);
                }
                acc
            }
        }
    }

    /// First column the class test ranges over.
    fn first_column(&self) -> u64 {
        match self.style {
            MatrixStyle::D => 2,
            _ => 1,
        }
    }
}

pub fn associated_matrix(
    space: SpaceId,
    kind: DualKind,
    a: &Seq,
) -> Result<AssociatedMatrix> {
    let deco = require_dualizable(space)?;
    let style = match (deco, kind) {
        (Decoration::Integrated, DualKind::Alpha) => MatrixStyle::C,
        (Decoration::Differentiated, DualKind::Alpha) => MatrixStyle::D,
        (Decoration::Integrated, _) => MatrixStyle::E { weight: -1 },
        (Decoration::Differentiated, _) => MatrixStyle::E { weight: 1 },
    };
    Ok(AssociatedMatrix {
        style,
        source: a.clone(),
    })
}

/// Membership via the associated matrix and its class conditions:
/// alpha needs columns summable uniformly, beta needs bounded entries with
/// column limits, gamma needs bounded entries.
pub fn dual_member_via_matrix(
    space: SpaceId,
    kind: DualKind,
    a: &Seq,
    probe: u64,
) -> Result<Verdict> {
    let target = dual_space(space, kind)?;
    let mat = associated_matrix(space, kind, a)?;
    // all three conditions are statements about the weighted sequence
    // b_j = a_j j^w, the increment of the matrix columns
    let b = decorated(target, a);
    let v = match b.family_part() {
        None => finite_matrix_verdict(&mat, kind, &b),
        Some((fam, prefix_len)) => {
            if fam.geometric_decay() {
                geometric_matrix_verdict(&b, fam.power, &fam.ratio, prefix_len)
            } else {
                unit_ratio_verdict(&mat, kind, fam, prefix_len, probe)
            }
        }
    };
    Ok(v.with_context(&format!("matrix path, {} condition", kind)))
}

/// Finite-support increments: every entry stabilizes and the condition
/// value is an exact finite computation.
fn finite_matrix_verdict(
    mat: &AssociatedMatrix,
    kind: DualKind,
    b: &Seq,
) -> Verdict {
    let m = b.support().unwrap_or(0).max(mat.first_column());
    match kind {
        DualKind::Alpha => {
            let mut sup = Scalar::zero();
            for k in mat.first_column()..=m {
                let mut col = Scalar::zero();
                for n in k..=m {
                    col += mat.entry(n, k).abs();
                }
                sup = sup.max(col);
            }
            Verdict::member_with_value(
                sup,
                "entries stabilize; exact column-sum sup",
            )
        }
        DualKind::Beta | DualKind::Gamma => {
            // rows repeat beyond the support, so the sup over all n, k is
            // attained on the leading block
            let mut sup = Scalar::zero();
            for n in 1..=m {
                for k in mat.first_column()..=n {
                    sup = sup.max(mat.entry(n, k).abs());
                }
            }
            let why = match kind {
                DualKind::Beta => {
                    "entries stabilize rowwise, so column limits exist; \
                     exact entry sup"
                }
                _ => "entries stabilize; exact entry sup",
            };
            Verdict::member_with_value(sup, why)
        }
    }
}

/// Geometric-decay increments: columns converge absolutely, and one
/// convergent series dominates every condition.
fn geometric_matrix_verdict(
    b: &Seq,
    power: i64,
    ratio: &Scalar,
    prefix_len: u64,
) -> Verdict {
    use crate::ratfn::Poly;
    use crate::series::poly_geom_tail;
    let q = ratio.abs();
    let mut bound = Scalar::zero();
    for j in 1..=prefix_len {
        bound += b.term(j).abs();
    }
    let p = power.max(0) as usize;
    let mut coeffs = vec![Scalar::zero(); p + 1];
    coeffs[p] = Scalar::one();
    let mono = Poly::from_coeffs(coeffs);
    // |b_j| <= |c| j^{max(p,0)} q^j beyond the prefix
    let c_abs = b
        .family_part()
        .map(|(f, _)| f.coeff.abs())
        .unwrap_or_else(Scalar::zero);
    bound += &c_abs * &poly_geom_tail(&mono, &q, prefix_len + 1);
    Verdict::member_with_value(
        bound,
        "columns dominated by a convergent geometric series; \
         value is the dominating bound",
    )
}

/// Increments `c k^p (+-1)^k`: decide from growth or periodicity when
/// possible, otherwise report the probe-bounded trace.
fn unit_ratio_verdict(
    mat: &AssociatedMatrix,
    kind: DualKind,
    fam: &crate::seq::Family,
    prefix_len: u64,
    probe: u64,
) -> Verdict {
    let p = fam.power;
    let alternating = fam.ratio.is_negative();
    let trace = matrix_trace(mat, kind, probe);
    if p >= 1 {
        return Verdict::non_member(format!(
            "diagonal-adjacent entries grow like n^{p}"
        ))
        .with_trace(trace);
    }
    if p == 0 {
        if !alternating {
            return Verdict::non_member(
                "column increments have constant sign and do not vanish; \
                 entries grow linearly",
            )
            .with_trace(trace);
        }
        return match kind {
            DualKind::Alpha => Verdict::non_member(
                "absolute column sums grow linearly",
            )
            .with_trace(trace),
            DualKind::Beta => Verdict::non_member(format!(
                "column entries oscillate by {} and have no limit",
                fam.coeff.abs()
            ))
            .with_trace(trace),
            DualKind::Gamma => {
                // entries are eventually 2-periodic in n and in k, so the
                // sup is attained on a small leading block
                let mut sup = Scalar::zero();
                for k in mat.first_column()..=prefix_len + 2 {
                    for n in k..=prefix_len + 4 {
                        sup = sup.max(mat.entry(n, k).abs());
                    }
                }
                Verdict::member_with_value(
                    sup,
                    "alternating entries are periodic; exact entry sup",
                )
            }
        };
    }
    Verdict::inconclusive(
        format!(
            "column increments vanish without geometric decay; \
             probe {probe} evidence only"
        ),
        trace,
    )
}

/// Condition evidence at probe marks 1, 2, 4, ..., probe: partial column
/// sums for alpha, the running entry sup for beta and gamma.
fn matrix_trace(
    mat: &AssociatedMatrix,
    kind: DualKind,
    probe: u64,
) -> Vec<(u64, Scalar)> {
    let mut marks = Vec::new();
    let mut n = 1;
    while n < probe {
        marks.push(n);
        n *= 2;
    }
    marks.push(probe);

    let mut out = Vec::new();
    match kind {
        DualKind::Alpha => {
            let k = mat.first_column();
            let mut acc = Scalar::zero();
            let mut row = 1;
            for &mark in &marks {
                while row <= mark {
                    acc += mat.entry(row, k).abs();
                    row += 1;
                }
                out.push((mark, acc.clone()));
            }
        }
        DualKind::Beta | DualKind::Gamma => {
            // with cumulative entries, sup_{k<=n} |e_nk| is a spread of
            // increment prefix sums; track their running extremes
            let weight = match mat.style {
                MatrixStyle::E { weight } => weight,
                _ => 0,
            };
            let mut prefix = Scalar::zero();
            let mut lo = Scalar::zero();
            let mut hi = Scalar::zero();
            let mut best = Scalar::zero();
            let mut row = 1;
            for &mark in &marks {
                while row <= mark {
                    let inc = match mat.style {
                        MatrixStyle::E { .. } => {
                            &mat.source.term(row) * &idx(row).pow(weight)
                        }
                        _ => mat.entry(row, 1),
                    };
                    prefix += inc;
                    let up = (&prefix - &lo).abs();
                    let down = (&hi - &prefix).abs();
                    best = best.max(up).max(down);
                    lo = lo.min(prefix.clone());
                    hi = hi.max(prefix.clone());
                    row += 1;
                }
                out.push((mark, best.clone()));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// multiplier matrices

/// `U D_alpha U^{-1}`, the matrix whose class membership in (lambda:lambda)
/// expresses that `alpha` multiplies the matrix domain into itself.
pub fn build_multiplier_matrix(
    u: &TriangleOp,
    alpha: &Seq,
    n_max: u64,
) -> Result<TriangleOp> {
    let inv = u.invert(n_max)?;
    Ok(TriangleOp::product(
        TriangleOp::product(u.clone(), TriangleOp::diag_seq(alpha.clone())),
        inv,
    ))
}
