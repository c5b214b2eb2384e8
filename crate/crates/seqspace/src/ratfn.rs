//! Exact univariate polynomials and rational functions over `Scalar`.
//!
//! Matrix entries along a diagonal are rational functions of the row index.
//! Condition checks over infinite index ranges reduce to questions about
//! such functions: boundedness, suprema over integer arguments, limits,
//! eventual sign, and summability class. All of them are decided exactly
//! here. The key tool is a Cauchy-style root bound: beyond it a rational
//! function is monotone with constant sign, so a finite scan plus the limit
//! value settles its supremum.

use std::fmt;

use crate::scalar::{idx, Scalar};

/// Dense polynomial, coefficients ascending in degree. Zero = empty.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly(Vec<Scalar>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Scalar) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly(vec![c])
        }
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    /// The monomial `n`.
    pub fn var() -> Self {
        Poly(vec![Scalar::zero(), Scalar::one()])
    }

    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Self {
        let mut p = Poly(coeffs);
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.0.last().is_some_and(Scalar::is_zero) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.0.last()
    }

    pub fn coeff(&self, j: usize) -> Scalar {
        self.0.get(j).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn eval(&self, n: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * n) + c;
        }
        acc
    }

    pub fn eval_at(&self, n: u64) -> Scalar {
        self.eval(&idx(n))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.0.len().max(other.0.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.0.get(i).cloned().unwrap_or_else(Scalar::zero);
                let b = other.0.get(i).cloned().unwrap_or_else(Scalar::zero);
                a + b
            })
            .collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Scalar::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|a| a * c).collect())
    }

    /// Composition with `n + c`: returns `p(n + c)`.
    pub fn shift(&self, c: i64) -> Poly {
        let arg = Poly::from_coeffs(vec![Scalar::from_int(c), Scalar::one()]);
        let mut acc = Poly::zero();
        for coef in self.0.iter().rev() {
            acc = acc.mul(&arg).add(&Poly::constant(coef.clone()));
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly::zero();
        }
        Poly::from_coeffs(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Scalar::from_int(i as i64))
                .collect(),
        )
    }

    /// Cauchy bound: all real roots have absolute value below this.
    pub fn root_bound(&self) -> u64 {
        match self.leading() {
            None => 1,
            Some(lead) => {
                let mut m = Scalar::zero();
                for c in &self.0 {
                    m = m.max(&c.abs() / &lead.abs());
                }
                let b = (Scalar::one() + m).ceil_to_i64();
                b.max(1) as u64
            }
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*n"),
                _ => format!("{c}*n^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Limit of a rational function at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Limit {
    Finite(Scalar),
    /// Diverges; the payload is the eventual sign (+1 or -1).
    Infinite(i8),
}

/// Supremum of `|f(n)|` over integers `n >= n0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sup {
    /// Exact supremum; `attained_at` is `None` when only approached at
    /// infinity.
    Bounded {
        sup: Scalar,
        attained_at: Option<u64>,
    },
    /// `|f(n)|` grows without bound.
    Unbounded,
}

impl Sup {
    pub fn value(&self) -> Option<&Scalar> {
        match self {
            Sup::Bounded { sup, .. } => Some(sup),
            Sup::Unbounded => None,
        }
    }
}

/// Absolute-summability class of `sum_n |f(n)|` over integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumClass {
    /// Identically zero beyond every root: finite sum.
    FinitelySupported,
    /// Converges (degree gap >= 2); the value is generally irrational.
    Convergent,
    /// Diverges (degree gap <= 1).
    Divergent,
}

/// `num / den` with `den` not identically zero.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFn {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator polynomial");
        RationalFn { num, den }
    }

    pub fn zero() -> Self {
        RationalFn::new(Poly::zero(), Poly::one())
    }

    pub fn constant(c: Scalar) -> Self {
        RationalFn::new(Poly::constant(c), Poly::one())
    }

    /// The identity function `n`.
    pub fn var() -> Self {
        RationalFn::new(Poly::var(), Poly::one())
    }

    /// `c / (n + o)`.
    pub fn inv_shifted(c: Scalar, o: i64) -> Self {
        RationalFn::new(
            Poly::constant(c),
            Poly::from_coeffs(vec![Scalar::from_int(o), Scalar::one()]),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval_at(&self, n: u64) -> Scalar {
        let d = self.den.eval_at(n);
        assert!(!d.is_zero(), "rational function pole at n = {n}");
        self.num.eval_at(n) / d
    }

    pub fn add(&self, other: &RationalFn) -> RationalFn {
        RationalFn::new(
            self.num
                .mul(&other.den)
                .add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &RationalFn) -> RationalFn {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RationalFn {
        RationalFn::new(self.num.neg(), self.den.clone())
    }

    pub fn mul(&self, other: &RationalFn) -> RationalFn {
        RationalFn::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, c: &Scalar) -> RationalFn {
        RationalFn::new(self.num.scale(c), self.den.clone())
    }

    /// `f(n + c)`.
    pub fn shift(&self, c: i64) -> RationalFn {
        RationalFn::new(self.num.shift(c), self.den.shift(c))
    }

    /// `deg num - deg den`; `None` for the zero function.
    pub fn degree_gap(&self) -> Option<i64> {
        Some(self.num.degree()? as i64 - self.den.degree().unwrap_or(0) as i64)
    }

    pub fn limit(&self) -> Limit {
        match self.degree_gap() {
            None => Limit::Finite(Scalar::zero()),
            Some(g) if g < 0 => Limit::Finite(Scalar::zero()),
            Some(0) => Limit::Finite(
                self.num.leading().unwrap() / self.den.leading().unwrap(),
            ),
            Some(_) => {
                let r = self.num.leading().unwrap() / self.den.leading().unwrap();
                Limit::Infinite(if r.is_positive() { 1 } else { -1 })
            }
        }
    }

    /// Sign of `f(n)` for all integers beyond `stable_from()`.
    pub fn eventual_sign(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let r = self.num.leading().unwrap() / self.den.leading().unwrap();
        if r.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Integer bound beyond which the function is pole-free, sign-constant
    /// and monotone.
    pub fn stable_from(&self) -> u64 {
        // derivative numerator: num' den - num den'
        let dnum = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        self.num
            .root_bound()
            .max(self.den.root_bound())
            .max(dnum.root_bound())
            + 1
    }

    /// Exact supremum of `|f(n)|` over integers `n >= n0`, skipping any
    /// integer poles below the stable bound (callers only use functions
    /// whose domain excludes those indices).
    pub fn sup_abs_from(&self, n0: u64) -> Sup {
        if let Some(g) = self.degree_gap() {
            if g > 0 {
                return Sup::Unbounded;
            }
        }
        let scan_to = self.stable_from().max(n0) + 1;
        let mut best: Option<(Scalar, u64)> = None;
        for n in n0..=scan_to {
            if self.den.eval_at(n).is_zero() {
                continue;
            }
            let v = self.eval_at(n).abs();
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, n));
            }
        }
        let limit_abs = match self.limit() {
            Limit::Finite(l) => l.abs(),
            Limit::Infinite(_) => unreachable!("degree gap handled above"),
        };
        match best {
            Some((v, at)) if v >= limit_abs => Sup::Bounded {
                sup: v,
                attained_at: Some(at),
            },
            _ => Sup::Bounded {
                sup: limit_abs,
                attained_at: None,
            },
        }
    }

    /// Classification of `sum_{n >= n0} |f(n)|`.
    pub fn sum_class(&self) -> SumClass {
        match self.degree_gap() {
            None => SumClass::FinitelySupported,
            Some(g) if g <= -2 => SumClass::Convergent,
            Some(_) => SumClass::Divergent,
        }
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) || self.den.is_zero() {
            write!(f, "({:?})/{:?}", self.num, self.den)
        } else {
            write!(f, "({:?})/({:?})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    #[test]
    fn poly_eval_and_shift() {
        // p(n) = n^2 - 3n + 2
        let p = Poly::from_coeffs(vec![s("2"), s("-3"), s("1")]);
        assert_eq!(p.eval_at(4), s("6"));
        let q = p.shift(1); // (n+1)^2 - 3(n+1) + 2 = n^2 - n
        assert_eq!(q.eval_at(5), s("20"));
    }

    #[test]
    fn limits_and_signs() {
        // (2n + 1) / (n + 3) -> 2
        let f = RationalFn::new(
            Poly::from_coeffs(vec![s("1"), s("2")]),
            Poly::from_coeffs(vec![s("3"), s("1")]),
        );
        assert_eq!(f.limit(), Limit::Finite(s("2")));
        assert_eq!(f.eventual_sign(), 1);
        // -n^2 / (n + 1) diverges to -inf
        let g = RationalFn::new(
            Poly::from_coeffs(vec![s("0"), s("0"), s("-1")]),
            Poly::from_coeffs(vec![s("1"), s("1")]),
        );
        assert_eq!(g.limit(), Limit::Infinite(-1));
    }

    #[test]
    fn sup_over_integers() {
        // |1/n| on n >= 1 has sup 1 at n = 1
        let f = RationalFn::inv_shifted(Scalar::one(), 0);
        assert_eq!(
            f.sup_abs_from(1),
            Sup::Bounded {
                sup: s("1"),
                attained_at: Some(1)
            }
        );
        // (n-1)/n climbs toward 1 without attaining it
        let g = RationalFn::new(
            Poly::from_coeffs(vec![s("-1"), s("1")]),
            Poly::var(),
        );
        assert_eq!(
            g.sup_abs_from(1),
            Sup::Bounded {
                sup: s("1"),
                attained_at: None
            }
        );
        // n/2 is unbounded
        let h = RationalFn::new(Poly::var(), Poly::constant(s("2")));
        assert_eq!(h.sup_abs_from(1), Sup::Unbounded);
    }

    #[test]
    fn interior_maximum_is_found() {
        // f(n) = n / (n^2 - 6n + 10) peaks near n = 3 (f(3) = 3)
        let f = RationalFn::new(
            Poly::var(),
            Poly::from_coeffs(vec![s("10"), s("-6"), s("1")]),
        );
        match f.sup_abs_from(1) {
            Sup::Bounded { sup, attained_at } => {
                assert_eq!(sup, s("3"));
                assert_eq!(attained_at, Some(3));
            }
            Sup::Unbounded => panic!("bounded function"),
        }
    }

    #[test]
    fn sum_classes() {
        let harmonic = RationalFn::inv_shifted(Scalar::one(), 0);
        assert_eq!(harmonic.sum_class(), SumClass::Divergent);
        let sq = RationalFn::new(
            Poly::one(),
            Poly::var().mul(&Poly::var()),
        );
        assert_eq!(sq.sum_class(), SumClass::Convergent);
        assert_eq!(RationalFn::zero().sum_class(), SumClass::FinitelySupported);
    }
}
