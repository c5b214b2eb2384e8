//! Seeded verification suites: randomized batteries over the exact
//! identities the library guarantees. Every trial is reproducible from the
//! reported seed, and every comparison is an exact equality.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dual::{dual_member, dual_member_via_matrix, DualKind};
use crate::error::{Error, Result};
use crate::matclass::{
    class_check, corollary_class, corollary_suite, reduce_and_check,
    CorollaryFamily, MatrixDesc,
};
use crate::op::{compose_entry, gamma_transform, sigma_transform, TriangleOp};
use crate::scalar::Scalar;
use crate::seq::{Decoration, Seq};
use crate::space::{BaseSpace, SpaceId};
use crate::spaces::{ak_defect, basis_vector, expansion_coefficients, norm};
use crate::verdict::Status;

#[derive(Clone, Debug, Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub trials: u64,
    pub checks: u64,
    pub failures: Vec<String>,
    pub seed: u64,
}

impl SuiteSummary {
    fn new(suite: &str, trials: u64, seed: u64) -> Self {
        SuiteSummary {
            suite: suite.into(),
            trials,
            checks: 0,
            failures: Vec::new(),
            seed,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(detail());
        }
    }
}

pub const SUITE_NAMES: &[&str] = &[
    "isometry",
    "ak",
    "monotone",
    "basis",
    "domain-identities",
    "duals",
    "reductions",
    "corollaries",
];

pub fn run_suite(name: &str, trials: u64, probe: u64, seed: u64) -> Result<SuiteSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = SuiteSummary::new(name, trials, seed);
    match name {
        "isometry" => isometry(&mut rng, trials, &mut summary),
        "ak" => ak(&mut rng, trials, &mut summary),
        "monotone" => monotone(&mut rng, trials, &mut summary),
        "basis" => basis(&mut rng, trials, &mut summary),
        "domain-identities" => domain_identities(&mut rng, trials, probe, &mut summary),
        "duals" => duals(&mut rng, trials, probe, &mut summary),
        "reductions" => reductions(&mut rng, trials, probe, &mut summary),
        "corollaries" => corollaries(probe, &mut summary),
        other => return Err(Error::UnknownSuite(other.into())),
    }
    Ok(summary)
}

fn rand_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let p = rng.gen_range(-9i64..=9);
    let q = rng.gen_range(1i64..=9);
    Scalar::ratio(p, q)
}

fn rand_finite(rng: &mut ChaCha8Rng, max_len: u64) -> Seq {
    let len = rng.gen_range(1..=max_len);
    Seq::finite((0..len).map(|_| rand_scalar(rng)).collect())
}

fn decorated_spaces() -> [SpaceId; 2] {
    [SpaceId::int_bv(), SpaceId::d_bv()]
}

/// The decorated norm equals the l1 norm of the expansion coefficients.
fn isometry(rng: &mut ChaCha8Rng, trials: u64, s: &mut SuiteSummary) {
    for t in 0..trials {
        let x = rand_finite(rng, 8);
        let m = x.support().unwrap().max(1);
        for space in decorated_spaces() {
            let lhs = norm(space, &x).unwrap();
            // the image supports one extra term: the decorated sequence
            // falls back to zero just past the support
            let y = expansion_coefficients(space, &x, m + 1).unwrap();
            let rhs = norm(SpaceId::l1(), &y).unwrap();
            s.check(lhs == rhs, || {
                format!("trial {t} {space}: norm {lhs} vs image norm {rhs}")
            });
        }
    }
}

/// Section defects are nonincreasing and vanish past the support.
fn ak(rng: &mut ChaCha8Rng, trials: u64, s: &mut SuiteSummary) {
    for t in 0..trials {
        let x = rand_finite(rng, 8);
        let m = x.support().unwrap().max(1);
        for space in decorated_spaces() {
            let mut prev: Option<Scalar> = None;
            for n in 1..=m + 2 {
                let d = ak_defect(space, &x, n).unwrap();
                if let Some(p) = prev {
                    s.check(d <= p, || {
                        format!("trial {t} {space}: defect rose at n={n}")
                    });
                }
                prev = Some(d);
            }
            let at_bound = ak_defect(space, &x, m + 1).unwrap();
            s.check(at_bound.is_zero(), || {
                format!("trial {t} {space}: defect {at_bound} past support {m}")
            });
        }
    }
}

/// Truncation norms grow monotonically up to the full norm.
fn monotone(rng: &mut ChaCha8Rng, trials: u64, s: &mut SuiteSummary) {
    for t in 0..trials {
        let x = rand_finite(rng, 8);
        let m = x.support().unwrap().max(1);
        for space in decorated_spaces() {
            let full = norm(space, &x).unwrap();
            let mut prev = Scalar::zero();
            for n in 1..=m {
                let cur = norm(space, &x.truncate(n)).unwrap();
                s.check(prev <= cur && cur <= full, || {
                    format!("trial {t} {space}: truncation norm broke at n={n}")
                });
                prev = cur;
            }
            s.check(prev == full, || {
                format!("trial {t} {space}: truncation at support misses norm")
            });
        }
    }
}

/// Expansion coefficients against the basis reconstruct the sequence, and
/// the distance to the n-th partial expansion is the section defect.
fn basis(rng: &mut ChaCha8Rng, trials: u64, s: &mut SuiteSummary) {
    for t in 0..trials {
        let x = rand_finite(rng, 6);
        let m = x.support().unwrap().max(1);
        // the coefficient sequence supports one extra term
        let big = m + 1;
        for space in decorated_spaces() {
            let coeffs = expansion_coefficients(space, &x, big).unwrap();
            let bases: Vec<Seq> = (1..=big)
                .map(|k| basis_vector(space, k).unwrap().realization)
                .collect();
            let partial = |n: u64, j: u64| -> Scalar {
                let mut acc = Scalar::zero();
                for k in 1..=n {
                    acc += &coeffs.term(k) * &bases[(k - 1) as usize].term(j);
                }
                acc
            };
            for j in 1..=m + 4 {
                let got = partial(big, j);
                let want = x.term(j);
                s.check(got == want, || {
                    format!("trial {t} {space}: reconstruction differs at {j}")
                });
            }
            // x minus its n-th partial expansion is a finite prefix plus a
            // power-law tail whose coefficient is minus the running
            // coefficient sum, so its norm is computed in closed form
            let power = match space.decoration.unwrap() {
                Decoration::Integrated => -1,
                Decoration::Differentiated => 1,
            };
            for n in 1..=big {
                let mut sum = Scalar::zero();
                for k in 1..=n {
                    sum += coeffs.term(k);
                }
                let tail_len = m.max(n);
                let prefix: Vec<Scalar> =
                    (1..=tail_len).map(|j| x.term(j) - partial(n, j)).collect();
                let diff = Seq::Family {
                    family: crate::seq::Family {
                        coeff: -sum,
                        power,
                        ratio: Scalar::one(),
                    },
                    prefix,
                };
                let dist = norm(space, &diff).unwrap();
                let defect = ak_defect(space, &x, n).unwrap();
                s.check(dist == defect, || {
                    format!("trial {t} {space}: distance {dist} vs defect {defect} at n={n}")
                });
            }
        }
    }
}

/// The expansion transforms agree with the difference triangle applied to
/// the decorated sequence, blockwise.
fn domain_identities(
    rng: &mut ChaCha8Rng,
    trials: u64,
    probe: u64,
    s: &mut SuiteSummary,
) {
    let n_max = probe.min(32).max(4);
    let delta = TriangleOp::delta();
    for t in 0..trials {
        let x = rand_finite(rng, 8);
        let gamma = gamma_transform(&x, n_max);
        let sigma = sigma_transform(&x, n_max);
        let xi = x.decorate(Decoration::Integrated);
        let xd = x.decorate(Decoration::Differentiated);
        for n in 1..=n_max {
            s.check(gamma.term(n) == delta.apply(&xi, n), || {
                format!("trial {t}: integrated identity differs at n={n}")
            });
            s.check(sigma.term(n) == delta.apply(&xd, n), || {
                format!("trial {t}: differentiated identity differs at n={n}")
            });
        }
    }
}

fn dual_catalogue(rng: &mut ChaCha8Rng) -> Seq {
    match rng.gen_range(0u8..6) {
        0 => {
            let p = rng.gen_range(-3i64..=1);
            format!("powerlaw:1,{p}").parse().unwrap()
        }
        1 => "const:1".parse().unwrap(),
        2 => "alt:1".parse().unwrap(),
        3 => "geom:1,1/2".parse().unwrap(),
        4 => "geom:1,-1/2".parse().unwrap(),
        _ => rand_finite(rng, 6),
    }
}

/// Analytic and associated-matrix dual checks agree whenever both decide.
fn duals(rng: &mut ChaCha8Rng, trials: u64, probe: u64, s: &mut SuiteSummary) {
    let kinds = [DualKind::Alpha, DualKind::Beta, DualKind::Gamma];
    for t in 0..trials {
        let a = dual_catalogue(rng);
        for space in decorated_spaces() {
            for kind in kinds {
                let ana = dual_member(space, kind, &a, probe).unwrap();
                let mat = dual_member_via_matrix(space, kind, &a, probe).unwrap();
                if ana.decided() && mat.decided() {
                    s.check(ana.status == mat.status, || {
                        format!(
                            "trial {t} {space} {kind}: analytic {:?} vs matrix {:?} on `{a}`",
                            ana.status, mat.status
                        )
                    });
                } else {
                    s.checks += 1;
                }
            }
        }
    }
}

fn op_catalogue(rng: &mut ChaCha8Rng) -> TriangleOp {
    match rng.gen_range(0u8..5) {
        0 => TriangleOp::identity(),
        1 => TriangleOp::delta(),
        2 => TriangleOp::gamma(),
        3 => TriangleOp::sigma(),
        _ => TriangleOp::diag_seq(rand_finite(rng, 5)),
    }
}

/// Reductions agree with classifying the composed matrix directly, and
/// the tail-sum entries preserve row pairings exactly.
fn reductions(rng: &mut ChaCha8Rng, trials: u64, probe: u64, s: &mut SuiteSummary) {
    let class_int: crate::matclass::ReducedClass = "linf:int_bv".parse().unwrap();
    let class_d: crate::matclass::ReducedClass = "linf:d_bv".parse().unwrap();
    for t in 0..trials {
        let a = op_catalogue(rng);
        let desc = MatrixDesc::Op(a.clone());
        for (class, left) in [
            (class_int, TriangleOp::gamma()),
            (class_d, TriangleOp::sigma()),
        ] {
            let reduced = reduce_and_check(&desc, class, probe).unwrap();
            let composed =
                MatrixDesc::Op(TriangleOp::product(left.clone(), a.clone()));
            let direct = class_check(
                &composed,
                SpaceId::plain(BaseSpace::Linf),
                SpaceId::l1(),
                probe,
            )
            .unwrap();
            if reduced.decided() && direct.decided() {
                s.check(reduced.status == direct.status, || {
                    format!(
                        "trial {t} ({class}): reduced {:?} vs composed {:?} on {}",
                        reduced.status,
                        direct.status,
                        a.describe()
                    )
                });
            } else {
                s.checks += 1;
            }
        }
        // pairing preservation under the tail-sum transform
        let x = rand_finite(rng, 5);
        let y = gamma_transform(&x, 12);
        let ginv = TriangleOp::gamma_inv();
        for n in 1..=12u64 {
            let mut lhs = Scalar::zero();
            let mut rhs = Scalar::zero();
            for k in 1..=12u64 {
                lhs += &a.entry(n, k) * &x.term(k);
                rhs += &compose_entry(&a, &ginv, n, k) * &y.term(k);
            }
            s.check(lhs == rhs, || {
                format!("trial {t}: pairing differs at row {n} for {}", a.describe())
            });
        }
    }
}

/// Every corollary item dispatches to the class it names, and the zero
/// matrix is a member of each.
fn corollaries(probe: u64, s: &mut SuiteSummary) {
    let families = [
        (CorollaryFamily::IntSource, 6usize),
        (CorollaryFamily::DSource, 6),
        (CorollaryFamily::IntTarget, 4),
        (CorollaryFamily::DTarget, 4),
    ];
    let items = ["i", "ii", "iii", "iv", "v", "vi"];
    let id = MatrixDesc::Op(TriangleOp::identity());
    for (family, count) in families {
        for item in &items[..count] {
            let class = corollary_class(family, item).unwrap();
            let via_suite = corollary_suite(family, &id, item, probe).unwrap();
            let via_class = reduce_and_check(&id, class, probe).unwrap();
            s.check(
                via_suite.status == via_class.status
                    && via_suite.value == via_class.value,
                || format!("{family:?} {item}: dispatch disagrees with ({class})"),
            );
            let zero = reduce_and_check(&MatrixDesc::Zero, class, probe).unwrap();
            s.check(zero.status == Status::Member, || {
                format!("{family:?} {item}: zero matrix rejected from ({class})")
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        for name in SUITE_NAMES {
            let summary = run_suite(name, 20, 64, 7).unwrap();
            assert!(
                summary.passed(),
                "{name}: {:?}",
                summary.failures
            );
            assert!(summary.checks > 0, "{name} ran no checks");
        }
    }

    #[test]
    fn unknown_suite_errors() {
        assert!(matches!(
            run_suite("nope", 1, 16, 0),
            Err(Error::UnknownSuite(_))
        ));
    }

    #[test]
    fn determinism_across_runs() {
        let a = run_suite("isometry", 10, 32, 42).unwrap();
        let b = run_suite("isometry", 10, 32, 42).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
