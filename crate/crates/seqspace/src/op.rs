//! Infinite lower-triangular matrix algebra.
//!
//! The built-in triangles are the forward difference matrix and the two
//! weighted-difference matrices tying the decorated bv-type spaces to l1,
//! together with diagonal matrices, symbolic products, and inverses
//! computed by forward substitution.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::ratfn::RationalFn;
use crate::scalar::{idx, Scalar};
use crate::seq::Seq;

/// Per-diagonal entry rule: entry at `(n, n - offset)` is `coef(k)` where
/// `k = n - offset` is the column index.
pub type Band = (u64, RationalFn);

#[derive(Clone)]
pub enum TriangleOp {
    /// Finitely many diagonals with rational entry rules in the column index.
    Banded { bands: Vec<Band> },
    /// Dense lower triangle whose entry depends on the row only:
    /// `entry(n, k) = rule(n)` for every `k <= n`.
    Bulk { name: &'static str, rule: RationalFn },
    /// Diagonal matrix with entries drawn from a sequence.
    DiagSeq(Seq),
    /// Symbolic product, composed left-to-right.
    Product(Arc<TriangleOp>, Arc<TriangleOp>),
    /// Inverse of a triangle, rows filled lazily by forward substitution.
    Inverse(Arc<InverseState>),
}

pub struct InverseState {
    base: TriangleOp,
    // completed rows only; extended under the write lock
    memo: RwLock<Vec<Vec<Scalar>>>,
}

impl TriangleOp {
    pub fn identity() -> Self {
        TriangleOp::Banded {
            bands: vec![(0, RationalFn::constant(Scalar::one()))],
        }
    }

    /// Forward difference: diagonal `1`, subdiagonal `-1`.
    pub fn delta() -> Self {
        TriangleOp::Banded {
            bands: vec![
                (0, RationalFn::constant(Scalar::one())),
                (1, RationalFn::constant(Scalar::from_int(-1))),
            ],
        }
    }

    /// Diagonal `k`, subdiagonal `-k` (as functions of the column).
    pub fn gamma() -> Self {
        TriangleOp::Banded {
            bands: vec![
                (0, RationalFn::var()),
                (1, RationalFn::var().neg()),
            ],
        }
    }

    /// Diagonal `1/k`, subdiagonal `-1/k`.
    pub fn sigma() -> Self {
        TriangleOp::Banded {
            bands: vec![
                (0, RationalFn::inv_shifted(Scalar::one(), 0)),
                (1, RationalFn::inv_shifted(Scalar::from_int(-1), 0)),
            ],
        }
    }

    /// Closed-form inverse of `gamma()`: entry `1/n` for every `k <= n`.
    pub fn gamma_inv() -> Self {
        TriangleOp::Bulk {
            name: "gamma_inv",
            rule: RationalFn::inv_shifted(Scalar::one(), 0),
        }
    }

    /// Closed-form inverse of `sigma()`: entry `n` for every `k <= n`.
    pub fn sigma_inv() -> Self {
        TriangleOp::Bulk {
            name: "sigma_inv",
            rule: RationalFn::var(),
        }
    }

    /// Diagonal matrix with rule `alpha(n)`.
    pub fn diag_rule(rule: RationalFn) -> Self {
        TriangleOp::Banded {
            bands: vec![(0, rule)],
        }
    }

    /// Diagonal matrix `D_alpha` with `alpha` an arbitrary sequence.
    pub fn diag_seq(alpha: Seq) -> Self {
        TriangleOp::DiagSeq(alpha)
    }

    pub fn product(a: TriangleOp, b: TriangleOp) -> Self {
        TriangleOp::Product(Arc::new(a), Arc::new(b))
    }

    /// Exact entry `a_nk`; zero when `k > n` or either index is below 1.
    pub fn entry(&self, n: u64, k: u64) -> Scalar {
        if n < 1 || k < 1 || k > n {
            return Scalar::zero();
        }
        match self {
            TriangleOp::Banded { bands } => {
                let off = n - k;
                bands
                    .iter()
                    .find(|(o, _)| *o == off)
                    .map(|(_, f)| f.eval_at(k))
                    .unwrap_or_else(Scalar::zero)
            }
            TriangleOp::Bulk { rule, .. } => rule.eval_at(n),
            TriangleOp::DiagSeq(alpha) => {
                if n == k {
                    alpha.term(n)
                } else {
                    Scalar::zero()
                }
            }
            TriangleOp::Product(a, b) => {
                let mut acc = Scalar::zero();
                for j in k..=n {
                    let aj = a.entry(n, j);
                    if aj.is_zero() {
                        continue;
                    }
                    acc += aj * b.entry(j, k);
                }
                acc
            }
            TriangleOp::Inverse(state) => state.entry(n, k),
        }
    }

    /// Largest offset with a (potentially) nonzero band, when banded.
    pub fn bandwidth(&self) -> Option<u64> {
        match self {
            TriangleOp::Banded { bands } => {
                Some(bands.iter().map(|(o, _)| *o).max().unwrap_or(0))
            }
            TriangleOp::DiagSeq(_) => Some(0),
            TriangleOp::Product(a, b) => Some(a.bandwidth()? + b.bandwidth()?),
            TriangleOp::Bulk { .. } | TriangleOp::Inverse(_) => None,
        }
    }

    /// `(Ax)_n = sum_k a_nk x_k`, a finite sum since rows of a triangle
    /// carry at most `n` entries.
    pub fn apply(&self, x: &Seq, n: u64) -> Scalar {
        assert!(n >= 1);
        let mut acc = Scalar::zero();
        match self {
            TriangleOp::Banded { bands } => {
                for (o, f) in bands {
                    if n > *o {
                        let k = n - o;
                        acc += f.eval_at(k) * x.term(k);
                    }
                }
            }
            _ => {
                for k in 1..=n {
                    let a = self.entry(n, k);
                    if !a.is_zero() {
                        acc += a * x.term(k);
                    }
                }
            }
        }
        acc
    }

    /// First `n_max` terms of `Ax` as a finite sequence.
    pub fn apply_prefix(&self, x: &Seq, n_max: u64) -> Seq {
        Seq::finite((1..=n_max).map(|n| self.apply(x, n)).collect())
    }

    /// `sum_{j=k}^{infinity} a_nj`, exact since row `n` ends at column `n`.
    pub fn row_tail_sum(&self, n: u64, k: u64) -> Scalar {
        assert!(n >= 1 && k >= 1);
        let mut acc = Scalar::zero();
        for j in k..=n {
            acc += self.entry(n, j);
        }
        acc
    }

    /// Diagonal entry `a_nn`.
    pub fn diag(&self, n: u64) -> Scalar {
        self.entry(n, n)
    }

    /// Inverse triangle; verifies a nonzero diagonal up to `n_max` and
    /// substitutes the known closed forms for the built-in triangles.
    pub fn invert(&self, n_max: u64) -> Result<TriangleOp> {
        for n in 1..=n_max {
            if self.diag(n).is_zero() {
                return Err(Error::SingularDiagonal(n));
            }
        }
        if self.same_bands(&TriangleOp::gamma()) {
            return Ok(TriangleOp::gamma_inv());
        }
        if self.same_bands(&TriangleOp::sigma()) {
            return Ok(TriangleOp::sigma_inv());
        }
        if self.same_bands(&TriangleOp::identity()) {
            return Ok(TriangleOp::identity());
        }
        Ok(TriangleOp::Inverse(Arc::new(InverseState {
            base: self.clone(),
            memo: RwLock::new(Vec::new()),
        })))
    }

    /// Inverse by forward substitution only, bypassing the closed-form
    /// registry. Test oracles use this path.
    pub fn invert_by_substitution(&self, n_max: u64) -> Result<TriangleOp> {
        for n in 1..=n_max {
            if self.diag(n).is_zero() {
                return Err(Error::SingularDiagonal(n));
            }
        }
        Ok(TriangleOp::Inverse(Arc::new(InverseState {
            base: self.clone(),
            memo: RwLock::new(Vec::new()),
        })))
    }

    fn same_bands(&self, other: &TriangleOp) -> bool {
        match (self, other) {
            (TriangleOp::Banded { bands: a }, TriangleOp::Banded { bands: b }) => {
                a.len() == b.len()
                    && a.iter().all(|(o, f)| {
                        b.iter().any(|(o2, f2)| o == o2 && f.sub(f2).is_zero())
                    })
            }
            _ => false,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            TriangleOp::Banded { .. } => {
                for (name, op) in [
                    ("delta", TriangleOp::delta()),
                    ("gamma", TriangleOp::gamma()),
                    ("sigma", TriangleOp::sigma()),
                    ("identity", TriangleOp::identity()),
                ] {
                    if self.same_bands(&op) {
                        return name.to_string();
                    }
                }
                "banded".to_string()
            }
            TriangleOp::Bulk { name, .. } => format!("closed:{name}"),
            TriangleOp::DiagSeq(alpha) => format!("diag_seq:{alpha}"),
            TriangleOp::Product(a, b) => {
                format!("prod:{},{}", a.describe(), b.describe())
            }
            TriangleOp::Inverse(state) => format!("inverse:{}", state.base.describe()),
        }
    }
}

impl InverseState {
    /// Entry of the inverse, filling memoized rows on demand. Concurrent
    /// readers see completed rows only.
    fn entry(&self, n: u64, k: u64) -> Scalar {
        {
            let memo = self.memo.read().unwrap();
            if let Some(row) = memo.get(n as usize - 1) {
                return row.get(k as usize - 1).cloned().unwrap_or_else(Scalar::zero);
            }
        }
        let mut memo = self.memo.write().unwrap();
        while (memo.len() as u64) < n {
            let m = memo.len() as u64 + 1; // next row to fill
            let diag = self.base.diag(m);
            assert!(
                !diag.is_zero(),
                "singular diagonal at index {m} during inversion"
            );
            let mut row = Vec::with_capacity(m as usize);
            for col in 1..=m {
                // v_mc = (delta_mc - sum_{j=col}^{m-1} a_mj v_jc) / a_mm
                let mut acc = if m == col {
                    Scalar::one()
                } else {
                    Scalar::zero()
                };
                for j in col..m {
                    let a = self.base.entry(m, j);
                    if a.is_zero() {
                        continue;
                    }
                    let v = memo[j as usize - 1]
                        .get(col as usize - 1)
                        .cloned()
                        .unwrap_or_else(Scalar::zero);
                    acc -= a * v;
                }
                row.push(acc / diag.clone());
            }
            memo.push(row);
        }
        memo[n as usize - 1]
            .get(k as usize - 1)
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }
}

/// Product entry `(AB)_nk = sum_{j=k}^{n} a_nj b_jk`.
pub fn compose_entry(a: &TriangleOp, b: &TriangleOp, n: u64, k: u64) -> Scalar {
    if n < 1 || k < 1 || k > n {
        return Scalar::zero();
    }
    let mut acc = Scalar::zero();
    for j in k..=n {
        let anj = a.entry(n, j);
        if anj.is_zero() {
            continue;
        }
        acc += anj * b.entry(j, k);
    }
    acc
}

/// The transform `y_1 = x_1`, `y_k = k x_k - (k-1) x_{k-1}` realized as the
/// first `n_max` rows.
pub fn gamma_transform(x: &Seq, n_max: u64) -> Seq {
    assert!(n_max >= 1);
    let mut out = Vec::with_capacity(n_max as usize);
    let mut prev = Scalar::zero();
    for k in 1..=n_max {
        let cur = &idx(k) * &x.term(k);
        out.push(&cur - &prev);
        prev = cur;
    }
    Seq::finite(out)
}

/// The transform `y_1 = x_1`, `y_k = x_k/k - x_{k-1}/(k-1)` realized as the
/// first `n_max` rows.
pub fn sigma_transform(x: &Seq, n_max: u64) -> Seq {
    assert!(n_max >= 1);
    let mut out = Vec::with_capacity(n_max as usize);
    let mut prev = Scalar::zero();
    for k in 1..=n_max {
        let cur = &x.term(k) / &idx(k);
        out.push(&cur - &prev);
        prev = cur;
    }
    Seq::finite(out)
}

impl fmt::Debug for TriangleOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl FromStr for TriangleOp {
    type Err = Error;

    /// Operator literal grammar: `delta`, `gamma`, `sigma`, `identity`,
    /// `diag:n`, `diag:1/n`, `diag:const:c`, `prod:<op>,<op>`,
    /// `closed:gamma_inv`, `closed:sigma_inv`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "delta" => return Ok(TriangleOp::delta()),
            "gamma" => return Ok(TriangleOp::gamma()),
            "sigma" => return Ok(TriangleOp::sigma()),
            "identity" => return Ok(TriangleOp::identity()),
            _ => {}
        }
        if let Some(rule) = s.strip_prefix("diag:") {
            let rule = match rule {
                "n" => RationalFn::var(),
                "1/n" => RationalFn::inv_shifted(Scalar::one(), 0),
                other => match other.strip_prefix("const:") {
                    Some(c) => RationalFn::constant(c.parse()?),
                    None => {
                        return Err(Error::Parse(format!(
                            "unknown diagonal rule `{other}`"
                        )))
                    }
                },
            };
            return Ok(TriangleOp::diag_rule(rule));
        }
        if let Some(rest) = s.strip_prefix("prod:") {
            let (a, b) = rest.split_once(',').ok_or_else(|| {
                Error::Parse(format!("expected `prod:<op>,<op>`, got `{s}`"))
            })?;
            return Ok(TriangleOp::product(a.parse()?, b.parse()?));
        }
        if let Some(name) = s.strip_prefix("closed:") {
            return match name {
                "gamma_inv" => Ok(TriangleOp::gamma_inv()),
                "sigma_inv" => Ok(TriangleOp::sigma_inv()),
                other => Err(Error::Parse(format!("unknown closed form `{other}`"))),
            };
        }
        Err(Error::Parse(format!("unknown operator `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    #[test]
    fn matrix_entries() {
        let g = TriangleOp::gamma();
        assert_eq!(g.entry(3, 3), s("3"));
        assert_eq!(g.entry(3, 2), s("-2"));
        assert_eq!(g.entry(3, 1), s("0"));
        let sg = TriangleOp::sigma();
        assert_eq!(sg.entry(4, 3), s("-1/3"));
        assert_eq!(sg.entry(4, 4), s("1/4"));
        let d = TriangleOp::delta();
        assert_eq!(d.entry(5, 4), s("-1"));
        assert_eq!(d.entry(5, 5), s("1"));
        assert_eq!(d.entry(1, 1), s("1"));
        assert_eq!(d.entry(4, 5), s("0"));
    }

    #[test]
    fn apply_rows() {
        let g = TriangleOp::gamma();
        let x = Seq::finite(vec![s("1"), s("1/2"), s("1/3")]);
        assert_eq!(g.apply(&x, 4), s("-1"));
        assert_eq!(g.apply(&Seq::power_law(s("1"), -1), 2), s("0"));
        assert_eq!(TriangleOp::delta().apply(&Seq::unit(1), 1), s("1"));
    }

    #[test]
    fn transforms_match_matrix_application() {
        let x = Seq::finite(vec![s("1"), s("1/2"), s("1/3")]);
        assert_eq!(
            gamma_transform(&x, 5),
            Seq::finite(vec![s("1"), s("0"), s("0"), s("-1"), s("0")])
        );
        assert_eq!(
            gamma_transform(&Seq::unit(1), 3),
            Seq::finite(vec![s("1"), s("-1"), s("0")])
        );
        assert_eq!(
            gamma_transform(&Seq::power_law(s("1"), -1), 4),
            Seq::finite(vec![s("1"), s("0"), s("0"), s("0")])
        );

        assert_eq!(
            sigma_transform(&Seq::finite(vec![s("1"), s("4")]), 4),
            Seq::finite(vec![s("1"), s("1"), s("-2"), s("0")])
        );
        assert_eq!(
            sigma_transform(&Seq::constant(s("1")), 3),
            Seq::finite(vec![s("1"), s("-1/2"), s("-1/6")])
        );
        assert_eq!(
            sigma_transform(&Seq::power_law(s("1"), 1), 3),
            Seq::finite(vec![s("1"), s("0"), s("0")])
        );

        // the explicit transforms agree with generic application
        for op_pair in [
            (TriangleOp::gamma(), gamma_transform as fn(&Seq, u64) -> Seq),
            (TriangleOp::sigma(), sigma_transform as fn(&Seq, u64) -> Seq),
        ] {
            let (op, tr) = op_pair;
            for x in [
                Seq::finite(vec![s("2"), s("-3"), s("5/7")]),
                Seq::power_law(s("2"), -1),
                Seq::alternating(s("1")),
            ] {
                assert_eq!(tr(&x, 12), op.apply_prefix(&x, 12));
            }
        }
    }

    #[test]
    fn closed_form_inverses() {
        let ginv = TriangleOp::gamma().invert(10).unwrap();
        assert_eq!(ginv.entry(4, 2), s("1/4"));
        let sinv = TriangleOp::sigma().invert(10).unwrap();
        assert_eq!(sinv.entry(3, 1), s("3"));
        let id_inv = TriangleOp::identity().invert(5).unwrap();
        assert_eq!(id_inv.entry(3, 3), s("1"));
        assert_eq!(id_inv.entry(3, 2), s("0"));
    }

    #[test]
    fn substitution_matches_closed_forms() {
        for (op, closed) in [
            (TriangleOp::gamma(), TriangleOp::gamma_inv()),
            (TriangleOp::sigma(), TriangleOp::sigma_inv()),
        ] {
            let sub = op.invert_by_substitution(20).unwrap();
            for n in 1..=20 {
                for k in 1..=n {
                    assert_eq!(sub.entry(n, k), closed.entry(n, k), "({n},{k})");
                }
            }
        }
    }

    #[test]
    fn inverse_is_two_sided() {
        let g = TriangleOp::gamma();
        let ginv = g.invert(50).unwrap();
        for n in 1..=50u64 {
            for k in 1..=n {
                let expect = if n == k { s("1") } else { s("0") };
                assert_eq!(compose_entry(&g, &ginv, n, k), expect);
                assert_eq!(compose_entry(&ginv, &g, n, k), expect);
            }
        }
        let sg = TriangleOp::sigma();
        let sinv = sg.invert(10).unwrap();
        assert_eq!(compose_entry(&sg, &sinv, 10, 4), s("0"));
    }

    #[test]
    fn singular_diagonal_detected() {
        let z = TriangleOp::diag_rule(RationalFn::constant(s("0")));
        assert_eq!(z.invert(3).err(), Some(Error::SingularDiagonal(1)));
    }

    #[test]
    fn compose_with_diagonal() {
        let d_alpha = TriangleOp::diag_rule(RationalFn::var());
        assert_eq!(
            compose_entry(&TriangleOp::delta(), &d_alpha, 3, 3),
            s("3")
        );
    }

    #[test]
    fn tail_sums() {
        let g = TriangleOp::gamma();
        assert_eq!(g.row_tail_sum(3, 1), s("1"));
        assert_eq!(g.row_tail_sum(3, 3), s("3"));
        assert_eq!(TriangleOp::delta().row_tail_sum(5, 5), s("1"));
    }

    #[test]
    fn operator_grammar() {
        for t in [
            "delta",
            "gamma",
            "sigma",
            "identity",
            "diag:n",
            "diag:1/n",
            "diag:const:3/2",
            "prod:delta,gamma",
            "closed:gamma_inv",
            "closed:sigma_inv",
        ] {
            assert!(t.parse::<TriangleOp>().is_ok(), "{t}");
        }
        assert!("diag:k".parse::<TriangleOp>().is_err());
        assert!("closed:foo".parse::<TriangleOp>().is_err());
        assert_eq!(
            "prod:delta,gamma".parse::<TriangleOp>().unwrap().describe(),
            "prod:delta,gamma"
        );
    }
}
