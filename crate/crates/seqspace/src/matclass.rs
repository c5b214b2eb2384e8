//! Matrix class membership tests and the reductions that transport them
//! between l1-type classes and the decorated bv spaces.
//!
//! A matrix description is analyzed symbolically when possible: finitely
//! many diagonals, each with a rational entry rule in the row index, plus
//! an optional row-constant bulk filling the rest of the triangle. On such
//! shapes every class condition is decided exactly. Descriptions without
//! a symbolic shape fall back to probe-bounded evidence, which is never
//! upgraded to a verdict.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::dual::{dual_member, DualKind};
use crate::error::{Error, Result};
use crate::op::TriangleOp;
use crate::ratfn::{Limit, RationalFn, Sup, SumClass};
use crate::scalar::{idx, Scalar};
use crate::seq::Seq;
use crate::space::{BaseSpace, SpaceId};
use crate::verdict::{Status, Verdict};

/// A matrix admitted to class checks: the zero matrix, any triangle, or an
/// explicit band list whose offsets may be negative (entries above the
/// diagonal), covering the non-triangular classes.
#[derive(Clone)]
pub enum MatrixDesc {
    Zero,
    Op(TriangleOp),
    /// Bands at fixed offsets `n - k`; each rule is a function of the row.
    Banded(Vec<(i64, RationalFn)>),
}

impl MatrixDesc {
    pub fn entry(&self, n: u64, k: u64) -> Scalar {
        if n < 1 || k < 1 {
            return Scalar::zero();
        }
        match self {
            MatrixDesc::Zero => Scalar::zero(),
            MatrixDesc::Op(op) => op.entry(n, k),
            MatrixDesc::Banded(bands) => {
                let o = n as i64 - k as i64;
                bands
                    .iter()
                    .find(|(b, _)| *b == o)
                    .map(|(_, r)| r.eval_at(n))
                    .unwrap_or_else(Scalar::zero)
            }
        }
    }

    /// Largest column that can hold a nonzero entry in row `n`.
    pub fn row_max(&self, n: u64) -> u64 {
        match self {
            MatrixDesc::Zero => 0,
            MatrixDesc::Op(_) => n,
            MatrixDesc::Banded(bands) => {
                let up = bands.iter().map(|(o, _)| -*o).max().unwrap_or(0);
                if up > 0 {
                    n + up as u64
                } else {
                    n
                }
            }
        }
    }

    /// Row `n` as a finitely supported sequence.
    pub fn row_seq(&self, n: u64) -> Seq {
        let m = self.row_max(n);
        Seq::finite((1..=m).map(|k| self.entry(n, k)).collect())
    }

    pub fn describe(&self) -> String {
        match self {
            MatrixDesc::Zero => "zero".into(),
            MatrixDesc::Op(op) => op.describe(),
            MatrixDesc::Banded(bands) => format!("banded[{} bands]", bands.len()),
        }
    }
}

impl FromStr for MatrixDesc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "zero" {
            return Ok(MatrixDesc::Zero);
        }
        Ok(MatrixDesc::Op(s.parse()?))
    }
}

// ---------------------------------------------------------------------------
// symbolic shapes

/// Normal form for exact analysis.
#[derive(Clone, Debug)]
pub(crate) enum Shape {
    /// Finitely many nonzero entries.
    Cells(Vec<(u64, u64, Scalar)>),
    Sym(SymShape),
}

/// Diagonal rules in the row index plus an optional bulk: entries at
/// offset `n - k >= bulk threshold` not covered by a diagonal all equal
/// `rule(n)`.
#[derive(Clone, Debug)]
pub(crate) struct SymShape {
    diags: Vec<(i64, RationalFn)>,
    bulk: Option<(i64, RationalFn)>,
}

impl SymShape {
    fn effective_rule(&self, o: i64) -> RationalFn {
        if let Some((_, r)) = self.diags.iter().find(|(b, _)| *b == o) {
            return r.clone();
        }
        if let Some((t, r)) = &self.bulk {
            if o >= *t {
                return r.clone();
            }
        }
        RationalFn::zero()
    }

    fn min_offset(&self) -> i64 {
        let d = self.diags.iter().map(|(o, _)| *o).min();
        match (&self.bulk, d) {
            (Some((t, _)), Some(m)) => m.min(*t),
            (Some((t, _)), None) => *t,
            (None, Some(m)) => m,
            (None, None) => 0,
        }
    }

    fn max_diag_offset(&self) -> i64 {
        self.diags.iter().map(|(o, _)| *o).max().unwrap_or(0)
    }
}

fn add_diag(map: &mut BTreeMap<i64, RationalFn>, o: i64, r: RationalFn) {
    if r.is_zero() {
        return;
    }
    let cur = map.remove(&o).unwrap_or_else(RationalFn::zero);
    let sum = cur.add(&r);
    if !sum.is_zero() {
        map.insert(o, sum);
    }
}

fn sym(map: BTreeMap<i64, RationalFn>, bulk: Option<(i64, RationalFn)>) -> Shape {
    Shape::Sym(SymShape {
        diags: map.into_iter().collect(),
        bulk,
    })
}

/// Symbolic shape of a description, when one exists.
pub(crate) fn to_shape(a: &MatrixDesc) -> Option<Shape> {
    match a {
        MatrixDesc::Zero => Some(Shape::Cells(Vec::new())),
        MatrixDesc::Banded(bands) => {
            let mut map = BTreeMap::new();
            for (o, r) in bands {
                add_diag(&mut map, *o, r.clone());
            }
            Some(sym(map, None))
        }
        MatrixDesc::Op(op) => op_shape(op),
    }
}

fn op_shape(op: &TriangleOp) -> Option<Shape> {
    match op {
        TriangleOp::Banded { bands } => {
            // band rules are functions of the column; rewrite in the row
            let mut map = BTreeMap::new();
            for (o, r) in bands {
                add_diag(&mut map, *o as i64, r.shift(-(*o as i64)));
            }
            Some(sym(map, None))
        }
        TriangleOp::Bulk { rule, .. } => {
            Some(sym(BTreeMap::new(), Some((0, rule.clone()))))
        }
        TriangleOp::DiagSeq(alpha) => {
            let m = alpha.support()?;
            let cells = (1..=m)
                .filter_map(|n| {
                    let v = alpha.term(n);
                    (!v.is_zero()).then_some((n, n, v))
                })
                .collect();
            Some(Shape::Cells(cells))
        }
        TriangleOp::Product(a, b) => {
            let sa = banded_only(op_shape(a)?)?;
            let sb = banded_only(op_shape(b)?)?;
            product_shape(&sa, &sb)
        }
        TriangleOp::Inverse(_) => None,
    }
}

fn banded_only(s: Shape) -> Option<Vec<(i64, RationalFn)>> {
    match s {
        Shape::Sym(SymShape { diags, bulk: None }) => Some(diags),
        _ => None,
    }
}

/// Band product; only lower-triangular factors keep the path indices
/// inside the valid range, so negative offsets are rejected.
fn product_shape(
    a: &[(i64, RationalFn)],
    b: &[(i64, RationalFn)],
) -> Option<Shape> {
    if a.iter().chain(b).any(|(o, _)| *o < 0) {
        return None;
    }
    let mut map = BTreeMap::new();
    for (oa, ra) in a {
        for (ob, rb) in b {
            // path n -> j = n - oa -> k = j - ob
            add_diag(&mut map, oa + ob, ra.mul(&rb.shift(-oa)));
        }
    }
    Some(sym(map, None))
}

#[cfg(test)]
fn shape_entry(s: &Shape, n: u64, k: u64) -> Scalar {
    if n < 1 || k < 1 {
        return Scalar::zero();
    }
    match s {
        Shape::Cells(cells) => cells
            .iter()
            .find(|(cn, ck, _)| *cn == n && *ck == k)
            .map(|(_, _, v)| v.clone())
            .unwrap_or_else(Scalar::zero),
        Shape::Sym(sh) => {
            let o = n as i64 - k as i64;
            if let Some((b, r)) = sh.diags.iter().find(|(b, _)| *b == o) {
                let _ = b;
                return r.eval_at(n);
            }
            if let Some((t, r)) = &sh.bulk {
                if o >= *t {
                    return r.eval_at(n);
                }
            }
            Scalar::zero()
        }
    }
}

// ---------------------------------------------------------------------------
// derived entry transforms

/// Entry transforms that carry a class test across the space transforms:
/// post-composition with an inverse moves a decorated source to l1, and
/// pre-composition with a transform moves a decorated target to l1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Derived {
    /// `A * gamma_inv`: tail sums of `a_nj / j`.
    PostGammaInv,
    /// `A * sigma_inv`: tail sums of `j * a_nj`.
    PostSigmaInv,
    /// `gamma * A`: `n a_nk - (n-1) a_{n-1,k}`, row 1 keeping its own term.
    PreGamma,
    /// `sigma * A`: `a_nk / n - a_{n-1,k} / (n-1)`, row 1 likewise.
    PreSigma,
}

impl fmt::Display for Derived {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = match self {
            Derived::PostGammaInv => "post_gamma_inv",
            Derived::PostSigmaInv => "post_sigma_inv",
            Derived::PreGamma => "pre_gamma",
            Derived::PreSigma => "pre_sigma",
        };
        write!(f, "{t}")
    }
}

/// Exact derived entry.
pub fn derived(a: &MatrixDesc, flavor: Derived, n: u64, k: u64) -> Result<Scalar> {
    assert!(n >= 1 && k >= 1);
    let v = match flavor {
        Derived::PostGammaInv | Derived::PostSigmaInv => {
            let mut acc = Scalar::zero();
            for j in k..=self_row_max(a, n).max(k) {
                let w = match flavor {
                    Derived::PostGammaInv => idx(j).recip(),
                    _ => idx(j),
                };
                acc += &a.entry(n, j) * &w;
            }
            acc
        }
        Derived::PreGamma => {
            let own = &idx(n) * &a.entry(n, k);
            if n == 1 {
                own
            } else {
                own - &idx(n - 1) * &a.entry(n - 1, k)
            }
        }
        Derived::PreSigma => {
            let own = &a.entry(n, k) / &idx(n);
            if n == 1 {
                own
            } else {
                own - &a.entry(n - 1, k) / &idx(n - 1)
            }
        }
    };
    Ok(v)
}

fn self_row_max(a: &MatrixDesc, n: u64) -> u64 {
    a.row_max(n)
}

/// Symbolic shape of the derived matrix, when the base admits one.
pub(crate) fn derived_shape(a: &MatrixDesc, flavor: Derived) -> Option<Shape> {
    let base = to_shape(a)?;
    match flavor {
        Derived::PreGamma => pre_shape(&base, &TriangleOp::gamma()),
        Derived::PreSigma => pre_shape(&base, &TriangleOp::sigma()),
        Derived::PostGammaInv => post_inv_shape(&base, -1),
        Derived::PostSigmaInv => post_inv_shape(&base, 1),
    }
}

fn pre_shape(base: &Shape, left: &TriangleOp) -> Option<Shape> {
    let lb = banded_only(op_shape(left)?)?;
    match base {
        Shape::Sym(_) => {
            let bb = banded_only(base.clone())?;
            product_shape(&lb, &bb)
        }
        Shape::Cells(cells) => {
            // each cell (n, k, v) lands at (n, k) weighted by the left
            // diagonal and at (n + 1, k) weighted by the left subdiagonal
            let mut map: BTreeMap<(u64, u64), Scalar> = BTreeMap::new();
            for (n, k, v) in cells {
                for (o, r) in &lb {
                    let row = n + *o as u64;
                    *map.entry((row, *k))
                        .or_insert_with(Scalar::zero) += &r.eval_at(row) * v;
                }
            }
            Some(Shape::Cells(
                map.into_iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|((n, k), v)| (n, k, v))
                    .collect(),
            ))
        }
    }
}

/// `A * gamma_inv` (weight -1) or `A * sigma_inv` (weight +1): entries are
/// row tail sums with weight `j^w`. Along each row they are constant below
/// the band window, so the result is a window of diagonals plus a bulk.
fn post_inv_shape(base: &Shape, weight: i64) -> Option<Shape> {
    match base {
        Shape::Cells(cells) => {
            let mut map: BTreeMap<(u64, u64), Scalar> = BTreeMap::new();
            for (n, j, v) in cells {
                let w = if weight < 0 { idx(*j).recip() } else { idx(*j) };
                for k in 1..=*j {
                    *map.entry((*n, k)).or_insert_with(Scalar::zero) += v * &w;
                }
            }
            Some(Shape::Cells(
                map.into_iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|((n, k), v)| (n, k, v))
                    .collect(),
            ))
        }
        Shape::Sym(sh) => {
            if sh.bulk.is_some() || sh.diags.iter().any(|(o, _)| *o < 0) {
                return None;
            }
            let omin = sh.min_offset();
            let omax = sh.max_diag_offset();
            // partial tail sums change only inside the band window
            let partial = |up_to: i64| {
                let mut acc = RationalFn::zero();
                for (o, r) in &sh.diags {
                    if *o <= up_to {
                        // the summed column is j = n - o
                        let w = if weight < 0 {
                            RationalFn::inv_shifted(Scalar::one(), -o)
                        } else {
                            RationalFn::new(
                                crate::ratfn::Poly::from_coeffs(vec![
                                    Scalar::from_int(-o),
                                    Scalar::one(),
                                ]),
                                crate::ratfn::Poly::one(),
                            )
                        };
                        acc = acc.add(&r.mul(&w));
                    }
                }
                acc
            };
            let mut map = BTreeMap::new();
            for o in omin..omax {
                add_diag(&mut map, o, partial(o));
            }
            let full = partial(omax);
            let bulk = if full.is_zero() {
                None
            } else {
                Some((omax, full))
            };
            Some(sym(map, bulk))
        }
    }
}

// ---------------------------------------------------------------------------
// conditions

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    /// Entries uniformly bounded.
    SupEntry,
    /// Every column converges.
    ColumnLimits,
    /// Every column converges to zero.
    ColumnLimitsZero,
    /// Column absolute sums uniformly bounded.
    SupColumnSum,
    /// Column partial sums uniformly bounded.
    SupPartialColumnSum,
    /// Every column series converges.
    ColumnSeriesConverge,
    /// Every column series sums to zero.
    ColumnSeriesZero,
    /// Bounded double sums of forward column differences over finite
    /// row/column subsets.
    FiniteSubsetSupForward,
    /// Same with backward differences; column 1 is compared against zero.
    FiniteSubsetSupBackward,
    /// Rows tend to zero along the columns.
    EntryRowLimitZero,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = match self {
            Condition::SupEntry => "bounded entries",
            Condition::ColumnLimits => "column limits",
            Condition::ColumnLimitsZero => "null column limits",
            Condition::SupColumnSum => "bounded column abs-sums",
            Condition::SupPartialColumnSum => "bounded column partial sums",
            Condition::ColumnSeriesConverge => "convergent column series",
            Condition::ColumnSeriesZero => "null column series",
            Condition::FiniteSubsetSupForward => "bounded forward-difference subset sums",
            Condition::FiniteSubsetSupBackward => "bounded backward-difference subset sums",
            Condition::EntryRowLimitZero => "null row tails",
        };
        write!(f, "{t}")
    }
}

fn plain_base(s: SpaceId) -> Result<BaseSpace> {
    if s.decoration.is_some() {
        return Err(Error::Parse(format!(
            "class conditions are stated for undecorated spaces, got {s}"
        )));
    }
    Ok(s.base)
}

/// The characterizing condition list for the class (source : target).
pub fn conditions_for(source: SpaceId, target: SpaceId) -> Result<Vec<Condition>> {
    use BaseSpace::*;
    use Condition::*;
    let s = plain_base(source)?;
    let t = plain_base(target)?;
    let conds = match (s, t) {
        (L1, Linf) => vec![SupEntry],
        (L1, C) => vec![SupEntry, ColumnLimits],
        (L1, C0) => vec![SupEntry, ColumnLimitsZero],
        (L1, L1) => vec![SupColumnSum],
        (L1, Bs) => vec![SupPartialColumnSum],
        (L1, Cs) => vec![SupPartialColumnSum, ColumnSeriesConverge],
        (L1, C0s) => vec![SupPartialColumnSum, ColumnSeriesZero],
        (Linf | C | C0, L1) => vec![FiniteSubsetSupForward],
        (Bs, L1) => vec![EntryRowLimitZero, FiniteSubsetSupForward],
        (Cs, L1) => vec![FiniteSubsetSupBackward],
        (C0s, L1) => vec![FiniteSubsetSupForward],
        _ => {
            return Err(Error::Parse(format!(
                "class ({source}:{target}) is not characterized here"
            )))
        }
    };
    Ok(conds)
}

#[derive(Clone, Debug)]
pub struct CondOutcome {
    pub condition: Condition,
    pub status: Status,
    pub value: Option<Scalar>,
    pub note: String,
}

impl CondOutcome {
    fn member(condition: Condition, value: Option<Scalar>, note: String) -> Self {
        CondOutcome {
            condition,
            status: Status::Member,
            value,
            note,
        }
    }

    fn non_member(condition: Condition, note: String) -> Self {
        CondOutcome {
            condition,
            status: Status::NonMember,
            value: None,
            note,
        }
    }

    fn inconclusive(condition: Condition, note: String) -> Self {
        CondOutcome {
            condition,
            status: Status::Inconclusive,
            value: None,
            note,
        }
    }
}

fn evaluate(shape: &Shape, cond: Condition) -> CondOutcome {
    match shape {
        Shape::Cells(cells) => evaluate_cells(cells, cond),
        Shape::Sym(sh) => evaluate_sym(sh, cond),
    }
}

// ---- finitely many cells: everything is a finite exact computation

fn evaluate_cells(cells: &[(u64, u64, Scalar)], cond: Condition) -> CondOutcome {
    use Condition::*;
    match cond {
        SupEntry => {
            let sup = cells
                .iter()
                .map(|(_, _, v)| v.abs())
                .fold(Scalar::zero(), Scalar::max);
            CondOutcome::member(cond, Some(sup), "finitely many entries".into())
        }
        ColumnLimits | ColumnLimitsZero => CondOutcome::member(
            cond,
            Some(Scalar::zero()),
            "columns eventually zero; limits all 0".into(),
        ),
        SupColumnSum => {
            let mut cols: BTreeMap<u64, Scalar> = BTreeMap::new();
            for (_, k, v) in cells {
                *cols.entry(*k).or_insert_with(Scalar::zero) += v.abs();
            }
            let sup = cols.into_values().fold(Scalar::zero(), Scalar::max);
            CondOutcome::member(cond, Some(sup), "finitely many entries".into())
        }
        SupPartialColumnSum => {
            let mut cols: BTreeMap<u64, Vec<(u64, Scalar)>> = BTreeMap::new();
            for (n, k, v) in cells {
                cols.entry(*k).or_default().push((*n, v.clone()));
            }
            let mut sup = Scalar::zero();
            for col in cols.values_mut() {
                col.sort_by_key(|(n, _)| *n);
                let mut acc = Scalar::zero();
                for (_, v) in col.iter() {
                    acc += v.clone();
                    sup = sup.max(acc.abs());
                }
            }
            CondOutcome::member(cond, Some(sup), "finitely many entries".into())
        }
        ColumnSeriesConverge => CondOutcome::member(
            cond,
            None,
            "columns finitely supported".into(),
        ),
        ColumnSeriesZero => {
            let mut cols: BTreeMap<u64, Scalar> = BTreeMap::new();
            for (_, k, v) in cells {
                *cols.entry(*k).or_insert_with(Scalar::zero) += v.clone();
            }
            match cols.iter().find(|(_, v)| !v.is_zero()) {
                None => CondOutcome::member(
                    cond,
                    Some(Scalar::zero()),
                    "all column sums vanish".into(),
                ),
                Some((k, v)) => CondOutcome::non_member(
                    cond,
                    format!("column {k} sums to {v}, not zero"),
                ),
            }
        }
        FiniteSubsetSupForward | FiniteSubsetSupBackward => {
            let forward = cond == FiniteSubsetSupForward;
            let maxn = cells.iter().map(|(n, _, _)| *n).max().unwrap_or(0);
            let maxk = cells.iter().map(|(_, k, _)| *k).max().unwrap_or(0) + 1;
            let cell = |n: u64, k: u64| -> Scalar {
                cells
                    .iter()
                    .find(|(cn, ck, _)| *cn == n && *ck == k)
                    .map(|(_, _, v)| v.clone())
                    .unwrap_or_else(Scalar::zero)
            };
            let mut pos = Scalar::zero();
            let mut neg = Scalar::zero();
            for n in 1..=maxn {
                for k in 1..=maxk {
                    let d = if forward {
                        cell(n, k) - cell(n, k + 1)
                    } else if k >= 2 {
                        cell(n, k) - cell(n, k - 1)
                    } else {
                        cell(n, 1)
                    };
                    if d.is_positive() {
                        pos += d;
                    } else {
                        neg += d.abs();
                    }
                }
            }
            let sup = pos.max(neg);
            CondOutcome::member(
                cond,
                Some(sup),
                "difference cells finitely supported; sup from signed parts"
                    .into(),
            )
        }
        EntryRowLimitZero => CondOutcome::member(
            cond,
            None,
            "rows finitely supported".into(),
        ),
    }
}

// ---- symbolic shapes

fn evaluate_sym(sh: &SymShape, cond: Condition) -> CondOutcome {
    use Condition::*;
    match cond {
        SupEntry => sym_sup_entry(sh),
        ColumnLimits => sym_column_limits(sh, false),
        ColumnLimitsZero => sym_column_limits(sh, true),
        SupColumnSum => sym_sup_column_sum(sh),
        SupPartialColumnSum => sym_sup_partial_column_sum(sh),
        ColumnSeriesConverge => sym_column_series(sh, false),
        ColumnSeriesZero => sym_column_series(sh, true),
        FiniteSubsetSupForward => sym_subset_sup(sh, true),
        FiniteSubsetSupBackward => sym_subset_sup(sh, false),
        EntryRowLimitZero => CondOutcome::member(
            cond,
            None,
            "rows finitely supported".into(),
        ),
    }
}

fn valid_row_start(o: i64) -> u64 {
    // column n - o must be at least 1
    (o + 1).max(1) as u64
}

fn sym_sup_entry(sh: &SymShape) -> CondOutcome {
    let cond = Condition::SupEntry;
    let mut best = Scalar::zero();
    for (o, r) in &sh.diags {
        match r.sup_abs_from(valid_row_start(*o)) {
            Sup::Bounded { sup, .. } => best = best.max(sup),
            Sup::Unbounded => {
                return CondOutcome::non_member(
                    cond,
                    format!(
                        "entries at offset {o} follow {r:?} in the row and \
                         are unbounded"
                    ),
                )
            }
        }
    }
    if let Some((t, r)) = &sh.bulk {
        match r.sup_abs_from(valid_row_start(*t)) {
            Sup::Bounded { sup, .. } => best = best.max(sup),
            Sup::Unbounded => {
                return CondOutcome::non_member(
                    cond,
                    format!("bulk entries follow {r:?} and are unbounded"),
                )
            }
        }
    }
    CondOutcome::member(cond, Some(best), "exact entry sup".into())
}

fn sym_column_limits(sh: &SymShape, need_zero: bool) -> CondOutcome {
    let cond = if need_zero {
        Condition::ColumnLimitsZero
    } else {
        Condition::ColumnLimits
    };
    match &sh.bulk {
        None => CondOutcome::member(
            cond,
            Some(Scalar::zero()),
            "columns eventually zero; limits all 0".into(),
        ),
        Some((_, r)) => match r.limit() {
            Limit::Finite(l) => {
                if need_zero && !l.is_zero() {
                    CondOutcome::non_member(
                        cond,
                        format!("every column tends to {l}, not zero"),
                    )
                } else {
                    CondOutcome::member(
                        cond,
                        Some(l.clone()),
                        format!("every column tends to {l}"),
                    )
                }
            }
            Limit::Infinite(_) => CondOutcome::non_member(
                cond,
                format!("columns follow {r:?} and diverge"),
            ),
        },
    }
}

/// Rules of the column index: the diagonal at offset `o` meets column `k`
/// in row `k + o`.
fn column_rules(sh: &SymShape) -> Vec<(i64, RationalFn)> {
    sh.diags
        .iter()
        .map(|(o, r)| (*o, r.shift(*o)))
        .collect()
}

fn sym_sup_column_sum(sh: &SymShape) -> CondOutcome {
    let cond = Condition::SupColumnSum;
    if let Some((_, r)) = &sh.bulk {
        if !r.is_zero() {
            return match r.sum_class() {
                SumClass::Divergent => CondOutcome::non_member(
                    cond,
                    format!("every column abs-sum contains the divergent tail {r:?}"),
                ),
                _ => {
                    // convergent bulk tails; boundedness still needs the
                    // diagonal contributions bounded
                    for (o, f) in column_rules(sh) {
                        if let Sup::Unbounded = f.sup_abs_from(col_start(o)) {
                            return CondOutcome::non_member(
                                cond,
                                format!(
                                    "diagonal at offset {o} contributes {f:?} \
                                     per column, unbounded"
                                ),
                            );
                        }
                    }
                    CondOutcome::member(
                        cond,
                        None,
                        "column abs-sums bounded by a convergent tail plus \
                         bounded diagonal terms; value not rational"
                            .into(),
                    )
                }
            };
        }
    }
    // pure bands: the column abs-sum is an explicit function of the column
    let fs = column_rules(sh);
    let mut scan_to = 2u64;
    for (o, f) in &fs {
        scan_to = scan_to.max(f.stable_from()).max(col_start(*o) + 1);
    }
    let mut best = Scalar::zero();
    for k in 1..=scan_to {
        let mut sum = Scalar::zero();
        for (o, f) in &fs {
            if k >= col_start(*o) {
                sum += f.eval_at(k).abs();
            }
        }
        best = best.max(sum);
    }
    let mut tail = RationalFn::zero();
    for (_, f) in &fs {
        let s = f.eventual_sign();
        if s > 0 {
            tail = tail.add(f);
        } else if s < 0 {
            tail = tail.sub(f);
        }
    }
    match tail.sup_abs_from(scan_to + 1) {
        Sup::Unbounded => CondOutcome::non_member(
            cond,
            format!("column abs-sums eventually follow {tail:?} and are unbounded"),
        ),
        Sup::Bounded { sup, .. } => CondOutcome::member(
            cond,
            Some(best.max(sup)),
            "exact column abs-sum sup".into(),
        ),
    }
}

fn col_start(o: i64) -> u64 {
    // row k + o must be at least 1
    (1 - o).max(1) as u64
}

fn sym_sup_partial_column_sum(sh: &SymShape) -> CondOutcome {
    let cond = Condition::SupPartialColumnSum;
    if let Some((_, r)) = &sh.bulk {
        if !r.is_zero() {
            return match r.sum_class() {
                SumClass::Divergent => CondOutcome::non_member(
                    cond,
                    format!("column partial sums contain the divergent tail {r:?}"),
                ),
                _ => {
                    for (o, f) in column_rules(sh) {
                        if let Sup::Unbounded = f.sup_abs_from(col_start(o)) {
                            return CondOutcome::non_member(
                                cond,
                                format!(
                                    "diagonal at offset {o} contributes {f:?} \
                                     per column, unbounded"
                                ),
                            );
                        }
                    }
                    CondOutcome::member(
                        cond,
                        None,
                        "column partial sums bounded; value not rational".into(),
                    )
                }
            };
        }
    }
    // pure bands: partial sums per column step through band prefixes
    let fs = column_rules(sh);
    let boundary = fs.iter().map(|(o, _)| col_start(*o)).max().unwrap_or(1);
    let mut scan_to = boundary + 1;
    let mut prefixes: Vec<RationalFn> = Vec::new();
    let mut acc = RationalFn::zero();
    for (o, f) in &fs {
        let _ = o;
        acc = acc.add(f);
        prefixes.push(acc.clone());
        scan_to = scan_to.max(acc.stable_from());
    }
    let mut best = Scalar::zero();
    // small columns directly, from real entries
    for k in 1..=scan_to {
        let mut run = Scalar::zero();
        for (o, f) in &fs {
            if k >= col_start(*o) {
                run += f.eval_at(k);
                best = best.max(run.abs());
            }
        }
    }
    for p in &prefixes {
        match p.sup_abs_from(scan_to + 1) {
            Sup::Unbounded => {
                return CondOutcome::non_member(
                    cond,
                    format!(
                        "column partial sums eventually follow {p:?} and are \
                         unbounded"
                    ),
                )
            }
            Sup::Bounded { sup, .. } => best = best.max(sup),
        }
    }
    CondOutcome::member(cond, Some(best), "exact partial-sum sup".into())
}

fn sym_column_series(sh: &SymShape, need_zero: bool) -> CondOutcome {
    let cond = if need_zero {
        Condition::ColumnSeriesZero
    } else {
        Condition::ColumnSeriesConverge
    };
    if let Some((_, r)) = &sh.bulk {
        if !r.is_zero() {
            return match r.sum_class() {
                SumClass::Divergent => CondOutcome::non_member(
                    cond,
                    format!("column series contain the divergent tail {r:?}"),
                ),
                _ if need_zero => CondOutcome::inconclusive(
                    cond,
                    "column series converge but their sums are not rational \
                     computations here"
                        .into(),
                ),
                _ => CondOutcome::member(
                    cond,
                    None,
                    "column series converge absolutely".into(),
                ),
            };
        }
    }
    if !need_zero {
        return CondOutcome::member(
            cond,
            None,
            "columns finitely supported".into(),
        );
    }
    // total per column as a function of the column index
    let fs = column_rules(sh);
    let boundary = fs.iter().map(|(o, _)| col_start(*o)).max().unwrap_or(1);
    let mut total = RationalFn::zero();
    for (_, f) in &fs {
        total = total.add(f);
    }
    for k in 1..=boundary.max(1) {
        let mut sum = Scalar::zero();
        for (o, f) in &fs {
            if k >= col_start(*o) {
                sum += f.eval_at(k);
            }
        }
        if !sum.is_zero() {
            return CondOutcome::non_member(
                cond,
                format!("column {k} sums to {sum}, not zero"),
            );
        }
    }
    if total.is_zero() {
        CondOutcome::member(cond, Some(Scalar::zero()), "all column sums vanish".into())
    } else {
        let k = boundary + total.stable_from();
        CondOutcome::non_member(
            cond,
            format!("column sums follow {total:?}, nonzero at column {k}"),
        )
    }
}

/// Difference-cell analysis for the subset-sum conditions. Each difference
/// band is a rational function of the row: cells shrinking no faster than
/// 1/n admit a sparse row selection whose double sum diverges, cells with
/// a two-degree gap are absolutely summable, and identically zero cells
/// give the exact sup 0.
fn sym_subset_sup(sh: &SymShape, forward: bool) -> CondOutcome {
    let cond = if forward {
        Condition::FiniteSubsetSupForward
    } else {
        Condition::FiniteSubsetSupBackward
    };
    let omin = sh.min_offset();
    let omax = match &sh.bulk {
        Some((t, _)) => sh.max_diag_offset().max(*t),
        None => sh.max_diag_offset(),
    };
    let mut bands: Vec<(i64, RationalFn)> = Vec::new();
    if forward {
        for o in omin..=omax + 1 {
            let d = sh.effective_rule(o).sub(&sh.effective_rule(o - 1));
            if !d.is_zero() {
                bands.push((o, d));
            }
        }
    } else {
        for o in omin - 1..=omax {
            let d = sh.effective_rule(o).sub(&sh.effective_rule(o + 1));
            if !d.is_zero() {
                bands.push((o, d));
            }
        }
    }
    for (o, d) in &bands {
        if d.degree_gap().is_some_and(|g| g >= -1) {
            return CondOutcome::non_member(
                cond,
                format!(
                    "difference cells at offset {o} follow {d:?}; rows picked \
                     sparsely make the double sum diverge"
                ),
            );
        }
    }
    // backward differences compare column 1 against zero, adding the first
    // column itself as a cell family
    let mut first_col_cells: Vec<Scalar> = Vec::new();
    if !forward {
        if let Some((_, r)) = &sh.bulk {
            if !r.is_zero() {
                match r.sum_class() {
                    SumClass::Divergent => {
                        return CondOutcome::non_member(
                            cond,
                            format!(
                                "first-column cells follow {r:?} and sum \
                                 divergently"
                            ),
                        )
                    }
                    _ => {
                        return CondOutcome::member(
                            cond,
                            None,
                            "difference cells and first-column cells \
                             absolutely summable"
                                .into(),
                        )
                    }
                }
            }
        }
        for (o, r) in &sh.diags {
            if *o >= 0 {
                let n = (*o + 1) as u64;
                first_col_cells.push(r.eval_at(n));
            }
        }
    }
    if bands.is_empty() {
        let mut pos = Scalar::zero();
        let mut neg = Scalar::zero();
        for v in &first_col_cells {
            if v.is_positive() {
                pos += v.clone();
            } else {
                neg += v.abs();
            }
        }
        return CondOutcome::member(
            cond,
            Some(pos.max(neg)),
            "difference cells vanish; sup from signed first-column parts".into(),
        );
    }
    CondOutcome::member(
        cond,
        None,
        "difference cells absolutely summable (two-degree gap)".into(),
    )
}

// ---------------------------------------------------------------------------
// class checks

/// Probe evidence for descriptions without a symbolic shape, or to attach
/// to undecided verdicts: running condition data at probe marks.
fn evidence_trace(
    a: &MatrixDesc,
    cond: Condition,
    probe: u64,
) -> Vec<(u64, Scalar)> {
    let mut marks = Vec::new();
    let mut m = 1;
    while m < probe {
        marks.push(m);
        m *= 2;
    }
    marks.push(probe);
    let mut out = Vec::new();
    for &mark in &marks {
        let v = match cond {
            Condition::SupColumnSum => {
                let mut best = Scalar::zero();
                for k in 1..=mark {
                    let mut col = Scalar::zero();
                    for n in 1..=mark {
                        col += a.entry(n, k).abs();
                    }
                    best = best.max(col);
                }
                best
            }
            Condition::SupPartialColumnSum => {
                let mut best = Scalar::zero();
                for k in 1..=mark {
                    let mut run = Scalar::zero();
                    for n in 1..=mark {
                        run += a.entry(n, k);
                        best = best.max(run.abs());
                    }
                }
                best
            }
            Condition::FiniteSubsetSupForward
            | Condition::FiniteSubsetSupBackward => {
                let forward = cond == Condition::FiniteSubsetSupForward;
                let mut pos = Scalar::zero();
                let mut neg = Scalar::zero();
                for n in 1..=mark {
                    for k in 1..=mark {
                        let d = if forward {
                            a.entry(n, k) - a.entry(n, k + 1)
                        } else if k >= 2 {
                            a.entry(n, k) - a.entry(n, k - 1)
                        } else {
                            a.entry(n, 1)
                        };
                        if d.is_positive() {
                            pos += d;
                        } else {
                            neg += d.abs();
                        }
                    }
                }
                pos.max(neg)
            }
            _ => {
                let mut best = Scalar::zero();
                for n in 1..=mark {
                    for k in 1..=a.row_max(n).min(mark) {
                        best = best.max(a.entry(n, k).abs());
                    }
                }
                best
            }
        };
        out.push((mark, v));
    }
    out
}

fn combine(outcomes: Vec<CondOutcome>) -> Verdict {
    if let Some(bad) = outcomes.iter().find(|o| o.status == Status::NonMember) {
        let mut note = format!("{} fails: {}", bad.condition, bad.note);
        for o in &outcomes {
            if o.status == Status::Member {
                note.push_str(&format!("; {} holds", o.condition));
            }
        }
        return Verdict::non_member(note);
    }
    if outcomes.iter().any(|o| o.status == Status::Inconclusive) {
        let notes: Vec<String> = outcomes
            .iter()
            .map(|o| format!("{}: {}", o.condition, o.note))
            .collect();
        return Verdict::inconclusive(notes.join("; "), Vec::new());
    }
    let value = outcomes.iter().find_map(|o| o.value.clone());
    let notes: Vec<String> = outcomes
        .iter()
        .map(|o| format!("{}: {}", o.condition, o.note))
        .collect();
    match value {
        Some(v) => Verdict::member_with_value(v, notes.join("; ")),
        None => Verdict::member_classified(notes.join("; ")),
    }
}

fn check_shape(
    a: &MatrixDesc,
    shape: Option<&Shape>,
    conds: &[Condition],
    probe: u64,
) -> Verdict {
    match shape {
        Some(s) => {
            let outcomes: Vec<CondOutcome> =
                conds.iter().map(|c| evaluate(s, *c)).collect();
            let mut v = combine(outcomes);
            if v.status != Status::Member {
                v.trace = evidence_trace(a, conds[0], probe);
            }
            v
        }
        None => Verdict::inconclusive(
            format!(
                "no structural certificate for `{}`; probe {probe} evidence \
                 only",
                a.describe()
            ),
            evidence_trace(a, conds[0], probe),
        ),
    }
}

/// Membership of `A` in the class (source : target), certified exactly for
/// structurally analyzable descriptions.
pub fn class_check(
    a: &MatrixDesc,
    source: SpaceId,
    target: SpaceId,
    probe: u64,
) -> Result<Verdict> {
    let conds = conditions_for(source, target)?;
    let shape = to_shape(a);
    Ok(check_shape(a, shape.as_ref(), &conds, probe)
        .with_context(&format!("class ({source}:{target})")))
}

// ---------------------------------------------------------------------------
// reductions

/// A class with exactly one decorated bv side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReducedClass {
    pub source: SpaceId,
    pub target: SpaceId,
}

impl fmt::Display for ReducedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.source, self.target)
    }
}

impl FromStr for ReducedClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected `from:to`, got `{s}`")))?;
        let rc = ReducedClass {
            source: a.trim().parse()?,
            target: b.trim().parse()?,
        };
        rc.plan()?;
        Ok(rc)
    }
}

impl ReducedClass {
    fn is_decorated_bv(s: SpaceId) -> bool {
        s.base == BaseSpace::Bv && s.decoration.is_some()
    }

    /// The derived flavor and reduced l1 class for this reduction.
    pub fn plan(&self) -> Result<(Derived, SpaceId, SpaceId)> {
        use crate::seq::Decoration::*;
        let l1 = SpaceId::l1();
        if Self::is_decorated_bv(self.source) {
            plain_base(self.target)?;
            let flavor = match self.source.decoration.unwrap() {
                Integrated => Derived::PostGammaInv,
                Differentiated => Derived::PostSigmaInv,
            };
            return Ok((flavor, l1, self.target));
        }
        if Self::is_decorated_bv(self.target) {
            plain_base(self.source)?;
            let flavor = match self.target.decoration.unwrap() {
                Integrated => Derived::PreGamma,
                Differentiated => Derived::PreSigma,
            };
            return Ok((flavor, self.source, l1));
        }
        Err(Error::Parse(format!(
            "`{self}` has no decorated bv side to reduce"
        )))
    }
}

/// Classify `A` in a class with a decorated bv side by transporting it to
/// the matching l1 class through the derived entries. For decorated
/// sources the rows must first lie in the beta-dual of the source space.
pub fn reduce_and_check(
    a: &MatrixDesc,
    class: ReducedClass,
    probe: u64,
) -> Result<Verdict> {
    let (flavor, red_source, red_target) = class.plan()?;
    let mut context = format!("reduced ({class}) to ({red_source}:{red_target}) via {flavor}");
    if ReducedClass::is_decorated_bv(class.source) {
        let rows_checked = probe.min(32).max(1);
        for n in 1..=rows_checked {
            let row = a.row_seq(n);
            let v = dual_member(class.source, DualKind::Beta, &row, probe)?;
            if !v.is_member() {
                return Err(Error::RowNotInDual(n));
            }
        }
        context = format!(
            "rows 1..={rows_checked} verified in the beta-dual of {}; {context}",
            class.source
        );
    }
    let conds = conditions_for(red_source, red_target)?;
    let shape = derived_shape(a, flavor);
    let derived_desc = derived_as_desc(a, flavor);
    let v = check_shape(&derived_desc, shape.as_ref(), &conds, probe);
    Ok(v.with_context(&context))
}

/// The derived matrix as an entry provider, for probe traces.
fn derived_as_desc(a: &MatrixDesc, flavor: Derived) -> MatrixDesc {
    match flavor {
        Derived::PreGamma => match a {
            MatrixDesc::Op(op) => MatrixDesc::Op(TriangleOp::product(
                TriangleOp::gamma(),
                op.clone(),
            )),
            _ => a.clone(),
        },
        Derived::PreSigma => match a {
            MatrixDesc::Op(op) => MatrixDesc::Op(TriangleOp::product(
                TriangleOp::sigma(),
                op.clone(),
            )),
            _ => a.clone(),
        },
        Derived::PostGammaInv => match a {
            MatrixDesc::Op(op) => MatrixDesc::Op(TriangleOp::product(
                op.clone(),
                TriangleOp::gamma_inv(),
            )),
            _ => a.clone(),
        },
        Derived::PostSigmaInv => match a {
            MatrixDesc::Op(op) => MatrixDesc::Op(TriangleOp::product(
                op.clone(),
                TriangleOp::sigma_inv(),
            )),
            _ => a.clone(),
        },
    }
}

// ---------------------------------------------------------------------------
// corollary dispatch

/// The four families of transported characterizations: decorated source
/// with tail-sum entries, or decorated target with row-difference entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorollaryFamily {
    /// (int_bv : Y) for Y in {linf, c, c0, bs, cs, c0s}, items i..vi.
    IntSource,
    /// (d_bv : Y), same items.
    DSource,
    /// (Y : int_bv) for Y in {linf, bs, cs, c0s}, items i..iv.
    IntTarget,
    /// (Y : d_bv), same items; every item dispatches on the
    /// row-difference entries of the sigma transform.
    DTarget,
}

impl FromStr for CorollaryFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "int_source" => Ok(CorollaryFamily::IntSource),
            "d_source" => Ok(CorollaryFamily::DSource),
            "int_target" => Ok(CorollaryFamily::IntTarget),
            "d_target" => Ok(CorollaryFamily::DTarget),
            other => Err(Error::Parse(format!("unknown family `{other}`"))),
        }
    }
}

fn roman_index(item: &str) -> Result<usize> {
    match item.trim() {
        "i" => Ok(1),
        "ii" => Ok(2),
        "iii" => Ok(3),
        "iv" => Ok(4),
        "v" => Ok(5),
        "vi" => Ok(6),
        other => Err(Error::Parse(format!("unknown item `{other}`"))),
    }
}

/// The class named by a corollary family item.
pub fn corollary_class(family: CorollaryFamily, item: &str) -> Result<ReducedClass> {
    use BaseSpace::*;
    let idx = roman_index(item)?;
    let source_targets = [Linf, C, C0, Bs, Cs, C0s];
    let target_sources = [Linf, Bs, Cs, C0s];
    let plain = |b: BaseSpace| SpaceId::plain(b);
    match family {
        CorollaryFamily::IntSource | CorollaryFamily::DSource => {
            let y = *source_targets
                .get(idx - 1)
                .ok_or_else(|| Error::Parse(format!("item `{item}` out of range")))?;
            let source = if family == CorollaryFamily::IntSource {
                SpaceId::int_bv()
            } else {
                SpaceId::d_bv()
            };
            Ok(ReducedClass {
                source,
                target: plain(y),
            })
        }
        CorollaryFamily::IntTarget | CorollaryFamily::DTarget => {
            let y = *target_sources
                .get(idx - 1)
                .ok_or_else(|| Error::Parse(format!("item `{item}` out of range")))?;
            let target = if family == CorollaryFamily::IntTarget {
                SpaceId::int_bv()
            } else {
                SpaceId::d_bv()
            };
            Ok(ReducedClass {
                source: plain(y),
                target,
            })
        }
    }
}

/// Run the characterization named by a corollary family item.
pub fn corollary_suite(
    family: CorollaryFamily,
    a: &MatrixDesc,
    item: &str,
    probe: u64,
) -> Result<Verdict> {
    let class = corollary_class(family, item)?;
    reduce_and_check(a, class, probe)
}
