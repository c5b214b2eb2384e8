//! Closed-form evaluation of polynomial-geometric series.
//!
//! For |r| < 1 and integer p >= 0 the series `sum_{k>=1} k^p r^k` has the
//! rational value `A_p(r) r / (1-r)^{p+1}` with `A_p` the Eulerian
//! polynomial; everything a family norm or tail needs reduces to that.

use crate::ratfn::Poly;
use crate::scalar::{idx, Scalar};

/// Eulerian number triangle up to row `p`.
fn eulerian_row(p: u64) -> Vec<Scalar> {
    let mut row = vec![Scalar::one()];
    for n in 1..=p {
        let mut next = vec![Scalar::zero(); n as usize + 1];
        for (k, v) in row.iter().enumerate() {
            // A(n, k) = (k+1) A(n-1, k) + (n-k) A(n-1, k-1)
            next[k] += &Scalar::from_int(k as i64 + 1) * v;
            next[k + 1] += &Scalar::from_int(n as i64 - k as i64 - 1) * v;
        }
        row = next;
    }
    row
}

/// `sum_{k>=1} k^p r^k` for `|r| < 1`.
pub fn power_geom_sum(p: u64, r: &Scalar) -> Scalar {
    assert!(r.abs() < Scalar::one(), "requires |r| < 1");
    if r.is_zero() {
        return Scalar::zero();
    }
    let one_minus = Scalar::one() - r.clone();
    let mut numer = Scalar::zero();
    for (j, a) in eulerian_row(p).iter().enumerate() {
        numer += a * &r.pow(j as i64);
    }
    &(&numer * r) / &one_minus.pow(p as i64 + 1)
}

/// `sum_{k>=1} poly(k) r^k` for `|r| < 1`.
pub fn poly_geom_sum(poly: &Poly, r: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    if let Some(d) = poly.degree() {
        for j in 0..=d {
            let c = poly.coeff(j);
            if !c.is_zero() {
                acc += &c * &power_geom_sum(j as u64, r);
            }
        }
    }
    acc
}

/// `sum_{k>=m} poly(k) r^k` for `|r| < 1`, exact.
pub fn poly_geom_tail(poly: &Poly, r: &Scalar, m: u64) -> Scalar {
    let mut acc = poly_geom_sum(poly, r);
    for k in 1..m {
        acc -= &poly.eval(&idx(k)) * &r.pow(k as i64);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    /// Brute-force partial sums converge to the closed form; run enough
    /// terms that the remaining tail is provably below the gap.
    fn check_tail(p: u64, r: &str, expect: &str) {
        let r: Scalar = r.parse().unwrap();
        let expect: Scalar = expect.parse().unwrap();
        assert_eq!(power_geom_sum(p, &r), expect);
        // independent oracle: partial sums plus a crude tail bound
        let mut partial = Scalar::zero();
        for k in 1..=200u64 {
            partial += &idx(k).pow(p as i64) * &r.pow(k as i64);
        }
        let gap = (&expect - &partial).abs();
        // |tail| <= sum_{k>200} k^p q^k <= q^200 * sum_{j>=0} (201+j)^p q^j
        // is tiny for the ratios used here; 2^-100 comfortably bounds it
        let tiny = Scalar::ratio(1, 2).pow(100);
        assert!(gap < tiny, "p={p} gap={gap}");
    }

    #[test]
    fn geometric_sums() {
        check_tail(0, "1/2", "1");
        check_tail(1, "1/2", "2");
        check_tail(2, "1/2", "6");
        check_tail(1, "-1/2", "-2/9");
        check_tail(3, "1/3", "33/8");
    }

    #[test]
    fn poly_sums_and_tails() {
        // sum (2k + 3) (1/2)^k = 2*2 + 3*1 = 7
        let p = Poly::from_coeffs(vec![s("3"), s("2")]);
        assert_eq!(poly_geom_sum(&p, &s("1/2")), s("7"));
        // tail from 2: subtract the k=1 term, 5/2
        assert_eq!(poly_geom_tail(&p, &s("1/2"), 2), s("9/2"));
        assert_eq!(poly_geom_tail(&p, &s("1/2"), 1), s("7"));
    }
}
