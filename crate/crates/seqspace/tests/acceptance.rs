//! End-to-end acceptance battery. Each criterion prints one pass/fail
//! line; the test fails if any criterion does.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use seqspace::dual::{
    dual_member, dual_member_via_matrix, pairing_partial, pairing_witness,
    DualKind,
};
use seqspace::matclass::{class_check, reduce_and_check, MatrixDesc, ReducedClass};
use seqspace::op::{compose_entry, gamma_transform, sigma_transform, TriangleOp};
use seqspace::ratfn::RationalFn;
use seqspace::scalar::idx;
use seqspace::seq::{Decoration, Family};
use seqspace::spaces::{ak_defect, basis_vector, expansion_coefficients, norm};
use seqspace::{BaseSpace, Scalar, Seq, SpaceId, Status};

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn s(t: &str) -> Scalar {
    t.parse().unwrap()
}

fn battery(seed: u64, count: usize, max_support: u64, max_mag: i64) -> Vec<Seq> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_support);
            Seq::finite(
                (0..len)
                    .map(|_| {
                        Scalar::ratio(
                            rng.gen_range(-max_mag..=max_mag),
                            rng.gen_range(1..=max_mag),
                        )
                    })
                    .collect(),
            )
        })
        .collect()
}

fn decorated_spaces() -> [SpaceId; 2] {
    [SpaceId::int_bv(), SpaceId::d_bv()]
}

fn transform_for(space: SpaceId, x: &Seq, n: u64) -> Seq {
    match space.decoration.unwrap() {
        Decoration::Integrated => gamma_transform(x, n),
        Decoration::Differentiated => sigma_transform(x, n),
    }
}

// 1. decorated norms equal the l1 norm of the transform image
fn criterion_isometry(battery: &[Seq]) -> Check {
    let start = Instant::now();
    for x in battery {
        let m = x.support().unwrap().max(1);
        for space in decorated_spaces() {
            let lhs = norm(space, x).map_err(|e| e.to_string())?;
            let y = transform_for(space, x, m + 1);
            let rhs = norm(SpaceId::l1(), &y).map_err(|e| e.to_string())?;
            ensure!(lhs == rhs, "{space}: {lhs} vs {rhs}");
        }
    }
    let elapsed = start.elapsed();
    ensure!(
        elapsed <= Duration::from_secs(10),
        "runtime {elapsed:?} over 10s"
    );
    Ok(())
}

// 2. inverse transforms restore the sequence; gamma composed with its
// inverse is the identity on the 50x50 block
fn criterion_round_trip(battery: &[Seq]) -> Check {
    let gamma = TriangleOp::gamma();
    let gamma_inv = TriangleOp::gamma_inv();
    let sigma = TriangleOp::sigma();
    let sigma_inv = TriangleOp::sigma_inv();
    for x in battery {
        let gy = gamma.apply_prefix(x, 64);
        let sy = sigma.apply_prefix(x, 64);
        for n in 1..=64u64 {
            ensure!(
                gamma_inv.apply(&gy, n) == x.term(n),
                "gamma round trip differs at {n}"
            );
            ensure!(
                sigma_inv.apply(&sy, n) == x.term(n),
                "sigma round trip differs at {n}"
            );
        }
    }
    for n in 1..=50u64 {
        for k in 1..=50u64 {
            let e = if n == k { Scalar::one() } else { Scalar::zero() };
            ensure!(
                compose_entry(&gamma, &gamma_inv, n, k) == e,
                "composition differs at ({n},{k})"
            );
        }
    }
    Ok(())
}

// 3. the transforms agree with the difference triangle on the decorated
// sequences, rowwise
fn criterion_domain_identities(battery: &[Seq]) -> Check {
    let delta = TriangleOp::delta();
    let gamma = TriangleOp::gamma();
    let sigma = TriangleOp::sigma();
    for x in battery {
        let xi = x.decorate(Decoration::Integrated);
        let xd = x.decorate(Decoration::Differentiated);
        for n in 1..=64u64 {
            ensure!(
                gamma.apply(x, n) == delta.apply(&xi, n),
                "integrated identity differs at {n}"
            );
            ensure!(
                sigma.apply(x, n) == delta.apply(&xd, n),
                "differentiated identity differs at {n}"
            );
        }
    }
    Ok(())
}

// 4. section defects decrease to zero past the support; truncation norms
// increase to the full norm
fn criterion_ak_monotone(battery: &[Seq]) -> Check {
    for x in battery {
        let m = x.support().unwrap().max(1);
        for space in decorated_spaces() {
            let mut prev: Option<Scalar> = None;
            for n in 1..=m + 2 {
                let d = ak_defect(space, x, n).map_err(|e| e.to_string())?;
                if let Some(p) = &prev {
                    ensure!(&d <= p, "{space}: defect rose at n={n}");
                }
                prev = Some(d);
            }
            let past = ak_defect(space, x, m + 1).map_err(|e| e.to_string())?;
            ensure!(past.is_zero(), "{space}: defect {past} past support {m}");

            // truncation norms, computed incrementally from the transform
            // image and cross-checked against the norm function
            let y = transform_for(space, x, m);
            let full = norm(space, x).map_err(|e| e.to_string())?;
            let mut run = Scalar::zero();
            let mut prev_norm = Scalar::zero();
            for n in 1..=m {
                run += y.term(n).abs();
                let closing = match space.decoration.unwrap() {
                    Decoration::Integrated => (&idx(n) * &x.term(n)).abs(),
                    Decoration::Differentiated => (&x.term(n) / &idx(n)).abs(),
                };
                let trunc = &run + &closing;
                if n % 8 == 0 || n == m {
                    let direct =
                        norm(space, &x.truncate(n)).map_err(|e| e.to_string())?;
                    ensure!(direct == trunc, "{space}: truncation norm mismatch at {n}");
                }
                ensure!(
                    prev_norm <= trunc && trunc <= full,
                    "{space}: truncation norm broke at {n}"
                );
                prev_norm = trunc;
            }
            ensure!(prev_norm == full, "{space}: truncations miss the norm");
        }
    }
    Ok(())
}

// 5. transforms send basis vectors to unit vectors; the distance to the
// n-th partial expansion equals the section defect
fn criterion_basis(seed: u64) -> Check {
    for space in decorated_spaces() {
        for k in 1..=16u64 {
            let b = basis_vector(space, k).map_err(|e| e.to_string())?;
            let image = transform_for(space, &b.realization, 64);
            for j in 1..=64u64 {
                let e = if j == k { Scalar::one() } else { Scalar::zero() };
                ensure!(
                    image.term(j) == e,
                    "{space}: basis {k} image differs at {j}"
                );
            }
        }
    }
    for x in battery(seed, 50, 12, 20) {
        let m = x.support().unwrap().max(1);
        let big = m + 1;
        for space in decorated_spaces() {
            let coeffs = expansion_coefficients(space, &x, big)
                .map_err(|e| e.to_string())?;
            let bases: Vec<Seq> = (1..=big)
                .map(|k| basis_vector(space, k).unwrap().realization)
                .collect();
            let power = match space.decoration.unwrap() {
                Decoration::Integrated => -1,
                Decoration::Differentiated => 1,
            };
            for n in 1..=big {
                let partial = |j: u64| -> Scalar {
                    let mut acc = Scalar::zero();
                    for k in 1..=n {
                        acc += &coeffs.term(k) * &bases[(k - 1) as usize].term(j);
                    }
                    acc
                };
                let mut sum = Scalar::zero();
                for k in 1..=n {
                    sum += coeffs.term(k);
                }
                let tail_len = m.max(n);
                let diff = Seq::Family {
                    family: Family {
                        coeff: -sum,
                        power,
                        ratio: Scalar::one(),
                    },
                    prefix: (1..=tail_len).map(|j| x.term(j) - partial(j)).collect(),
                };
                let dist = norm(space, &diff).map_err(|e| e.to_string())?;
                let defect = ak_defect(space, &x, n).map_err(|e| e.to_string())?;
                ensure!(
                    dist == defect,
                    "{space}: distance {dist} vs defect {defect} at n={n}"
                );
            }
        }
    }
    Ok(())
}

// 6. analytic and matrix dual paths agree on the fixed table; rejected
// multipliers show strictly growing pairings
fn criterion_duals() -> Check {
    let space = SpaceId::int_bv();
    let spike = Seq::unit(5);
    let cases: Vec<(&str, Seq, DualKind, Status)> = vec![
        ("harmonic/alpha", "powerlaw:1,-1".parse().unwrap(), DualKind::Alpha, Status::Member),
        ("constant/alpha", "const:1".parse().unwrap(), DualKind::Alpha, Status::NonMember),
        ("alternating/alpha", "alt:1".parse().unwrap(), DualKind::Alpha, Status::NonMember),
        ("spike/alpha", spike.clone(), DualKind::Alpha, Status::Member),
        ("powerlaw(-2)/alpha", "powerlaw:1,-2".parse().unwrap(), DualKind::Alpha, Status::Member),
        ("powerlaw(1)/alpha", "powerlaw:1,1".parse().unwrap(), DualKind::Alpha, Status::NonMember),
        ("harmonic/beta", "powerlaw:1,-1".parse().unwrap(), DualKind::Beta, Status::Member),
        ("constant/beta", "const:1".parse().unwrap(), DualKind::Beta, Status::NonMember),
        ("alternating/beta", "alt:1".parse().unwrap(), DualKind::Beta, Status::Member),
        ("spike/beta", spike, DualKind::Beta, Status::Member),
        ("powerlaw(-2)/beta", "powerlaw:1,-2".parse().unwrap(), DualKind::Beta, Status::Member),
        ("powerlaw(1)/beta", "powerlaw:1,1".parse().unwrap(), DualKind::Beta, Status::NonMember),
    ];
    for (name, a, kind, expected) in &cases {
        let analytic =
            dual_member(space, *kind, a, 128).map_err(|e| e.to_string())?;
        ensure!(
            analytic.status == *expected,
            "{name}: analytic {:?}, expected {expected:?}",
            analytic.status
        );
        let matrix =
            dual_member_via_matrix(space, *kind, a, 128).map_err(|e| e.to_string())?;
        ensure!(
            matrix.status == analytic.status || matrix.status == Status::Inconclusive,
            "{name}: matrix {:?} disagrees with analytic {:?}",
            matrix.status,
            analytic.status
        );
        if *expected == Status::NonMember {
            let w = pairing_witness(space, a);
            let mut prev: Option<Scalar> = None;
            for probe in [16u64, 32, 64, 128] {
                let v = pairing_partial(a, &w, *kind, probe).abs();
                if let Some(p) = &prev {
                    ensure!(&v > p, "{name}: pairing trace not increasing at {probe}");
                }
                prev = Some(v);
            }
        }
    }
    Ok(())
}

// 7. the three fixed class checks, exact and fast
fn criterion_classes() -> Check {
    let l1 = SpaceId::l1();
    let linf = SpaceId::plain(BaseSpace::Linf);
    let cases: Vec<(&str, MatrixDesc, SpaceId, Status, Option<Scalar>, &str)> = vec![
        ("delta", "delta".parse().unwrap(), l1, Status::Member, Some(s("2")), ""),
        ("gamma", "gamma".parse().unwrap(), l1, Status::NonMember, None, "2*n"),
        ("sigma", "sigma".parse().unwrap(), linf, Status::Member, Some(s("1")), ""),
    ];
    for (name, a, target, status, value, witness) in cases {
        let start = Instant::now();
        let v = class_check(&a, l1, target, 128).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        ensure!(v.status == status, "{name}: {:?}", v.status);
        ensure!(v.value == value, "{name}: value {:?}", v.value);
        if !witness.is_empty() {
            ensure!(
                v.certificate.contains(witness),
                "{name}: certificate `{}` lacks `{witness}`",
                v.certificate
            );
        }
        ensure!(
            elapsed <= Duration::from_secs(1),
            "{name}: took {elapsed:?}"
        );
    }
    Ok(())
}

fn random_banded(rng: &mut ChaCha8Rng) -> MatrixDesc {
    let bands = (0i64..rng.gen_range(1..=3))
        .map(|o| {
            let mut p = rng.gen_range(-5i64..=5);
            if p == 0 {
                p = 3;
            }
            let c = Scalar::ratio(p, rng.gen_range(1..=5));
            let rule = match rng.gen_range(0u8..3) {
                0 => RationalFn::constant(c),
                1 => RationalFn::var().scale(&c),
                _ => RationalFn::inv_shifted(c, rng.gen_range(0i64..=2)),
            };
            (o, rule)
        })
        .collect();
    MatrixDesc::Banded(bands)
}

// 8. the identity matrix reduction and the pairing-preserving identity of
// the tail-sum entries
fn criterion_reductions(seed: u64) -> Check {
    let class: ReducedClass = "int_bv:linf".parse().unwrap();
    let id: MatrixDesc = "identity".parse().unwrap();
    let v = reduce_and_check(&id, class, 128).map_err(|e| e.to_string())?;
    ensure!(v.status == Status::Member, "identity: {:?}", v.status);
    ensure!(v.value == Some(s("1")), "identity: value {:?}", v.value);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..100 {
        let a = random_banded(&mut rng);
        let len = rng.gen_range(1..=10u64);
        let x = Seq::finite(
            (0..len)
                .map(|_| Scalar::ratio(rng.gen_range(-9i64..=9), rng.gen_range(1..=9)))
                .collect(),
        );
        let y = gamma_transform(&x, len + 1);
        let kmax = 70u64;
        for n in 1..=64u64 {
            // row tail sums of a_nj / j, filled right to left
            let mut tail = vec![Scalar::zero(); kmax as usize + 2];
            for k in (1..=kmax).rev() {
                tail[k as usize] =
                    &tail[k as usize + 1] + &(&a.entry(n, k) / &idx(k));
            }
            let mut lhs = Scalar::zero();
            let mut rhs = Scalar::zero();
            for k in 1..=kmax {
                lhs += &a.entry(n, k) * &x.term(k);
                rhs += &tail[k as usize] * &y.term(k);
            }
            ensure!(lhs == rhs, "trial {t}: pairing differs at row {n}");
        }
    }
    Ok(())
}

// 9. partial column sums of the row-difference entries telescope
fn criterion_telescoping(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..100 {
        let a = random_banded(&mut rng);
        let k = rng.gen_range(1..=16u64);
        let mut acc = Scalar::zero();
        for m in 1..=64u64 {
            let own = &idx(m) * &a.entry(m, k);
            let hat = if m == 1 {
                own.clone()
            } else {
                &own - &(&idx(m - 1) * &a.entry(m - 1, k))
            };
            acc += hat;
            ensure!(acc == own, "trial {t}: telescoping broke at m={m}, k={k}");
        }
    }
    Ok(())
}

// 10. byte-identical JSON across repeated runs of every verb, and the
// exit-status contract end to end
fn criterion_cli() -> Check {
    let bin = env!("CARGO_BIN_EXE_seqspace");
    let verbs: Vec<Vec<&str>> = vec![
        vec!["transform", "--op", "gamma", "--seq", "powerlaw:1,-1", "--n", "4"],
        vec!["norm", "--space", "int_bv", "--seq", "finite:[1,1/2,1/3]"],
        vec!["member", "--space", "int_bv", "--seq", "powerlaw:1,-1"],
        vec!["dual-check", "--space", "int_bv", "--kind", "beta", "--seq", "alt:1"],
        vec!["classify", "--matrix", "delta", "--from", "l1", "--to", "l1"],
        vec!["reduce", "--matrix", "identity", "--class", "int_bv:linf"],
        vec!["basis", "--space", "int_bv", "--n", "2"],
        vec!["verify", "--suite", "isometry", "--trials", "20", "--probe", "64"],
    ];
    for verb in &verbs {
        let mut args: Vec<&str> = verb.clone();
        args.extend_from_slice(&["--seed", "7", "--json"]);
        let run = |args: &[&str]| {
            Command::new(bin)
                .args(args)
                .output()
                .map_err(|e| e.to_string())
        };
        let a = run(&args)?;
        let b = run(&args)?;
        ensure!(
            a.stdout == b.stdout && a.status == b.status,
            "{}: nondeterministic output",
            verb[0]
        );
        ensure!(
            serde_json::from_slice::<serde_json::Value>(&a.stdout).is_ok(),
            "{}: output is not JSON",
            verb[0]
        );
    }
    let exit_of = |args: &[&str]| -> Result<i32, String> {
        Command::new(bin)
            .args(args)
            .output()
            .map_err(|e| e.to_string())
            .map(|o| o.status.code().unwrap_or(-1))
    };
    let contract: Vec<(i32, Vec<&str>)> = vec![
        (0, vec!["member", "--space", "int_bv", "--seq", "powerlaw:1,-1"]),
        (1, vec!["classify", "--matrix", "gamma", "--from", "l1", "--to", "l1"]),
        (2, vec!["reduce", "--matrix", "diag:1/n", "--class", "int_bv:c0s"]),
        (64, vec!["norm", "--space", "l1", "--seq", "const:nope"]),
        (64, vec!["frobnicate"]),
    ];
    for (want, args) in &contract {
        let got = exit_of(args)?;
        ensure!(got == *want, "{args:?}: exit {got}, wanted {want}");
    }
    Ok(())
}

#[test]
fn acceptance() {
    let big_battery = battery(2024, 500, 64, 1000);
    let criteria: Vec<(&str, Box<dyn Fn() -> Check + '_>)> = vec![
        ("isometry", Box::new(|| criterion_isometry(&big_battery))),
        ("round-trip", Box::new(|| criterion_round_trip(&big_battery))),
        (
            "domain-identities",
            Box::new(|| criterion_domain_identities(&big_battery)),
        ),
        ("ak-monotone", Box::new(|| criterion_ak_monotone(&big_battery))),
        ("basis", Box::new(|| criterion_basis(5))),
        ("duals", Box::new(criterion_duals)),
        ("classes", Box::new(criterion_classes)),
        ("reductions", Box::new(|| criterion_reductions(8))),
        ("telescoping", Box::new(|| criterion_telescoping(9))),
        ("cli", Box::new(criterion_cli)),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .map_err(|_| "panicked".to_string())
            .and_then(|r| r);
        match outcome {
            Ok(()) => println!("criterion {:2} ({name}): pass", i + 1),
            Err(e) => {
                println!("criterion {:2} ({name}): FAIL - {e}", i + 1);
                failed.push(format!("{name}: {e}"));
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:#?}");
}
