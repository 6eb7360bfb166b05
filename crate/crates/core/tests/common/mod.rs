#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;

use susybi::builder::{
    build_dual_polynomials, build_eigenfunction, build_inhomogeneity, build_system, chi_by_minors,
    psi_by_minors, psi_from_duals_triangular,
};
use susybi::verify::check_biorthonormality;
use susybi::{Coefficient, LaurentSeries, Ring, SectorSign, Superpotential};

/// Seed shared by every randomized check in this crate's tests.
pub const SEED: [u8; 32] = *b"susybi-acceptance-seed-20261016!";

pub const Q: Ring = Ring::Rational;

pub fn rng() -> ChaCha8Rng {
    ChaCha8Rng::from_seed(SEED)
}

pub fn r(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

pub fn c(x: &Rational) -> Coefficient {
    Q.from_rational(x)
}

/// `K` random nonzero rationals `p/q`, `|p| ≤ 9`, `1 ≤ q ≤ 7`.
pub fn random_upsilon(rng: &mut impl Rng, k: usize) -> Vec<Rational> {
    (0..k)
        .map(|_| loop {
            let p: i64 = rng.gen_range(-9..=9);
            if p != 0 {
                break r(p, rng.gen_range(1..=7));
            }
        })
        .collect()
}

pub fn polynomial(ups: &[Rational]) -> Superpotential {
    Superpotential::polynomial(ups.iter().map(c).collect()).unwrap()
}

/// `υ_k` with `υ_k = 0` past the list.
fn u(ups: &[Rational], k: usize) -> Rational {
    ups.get(k.wrapping_sub(1)).cloned().unwrap_or_default()
}

fn pm(s: SectorSign) -> Rational {
    Rational::from(s.signum())
}

/// Reference rows at ν = 0: `c_{n,0..n}`.
pub fn table_chi_nu0(n: usize, s: SectorSign, ups: &[Rational]) -> Vec<Rational> {
    let (u1, u2, u3) = (u(ups, 1), u(ups, 2), u(ups, 3));
    let p = pm(s);
    match n {
        0 => vec![r(1, 1)],
        1 => vec![r(1, 1), p * u1],
        2 => vec![
            r(1, 1),
            p.clone() * r(1, 3) * &u1,
            p * r(1, 2) * u2 - r(1, 6) * u1.clone() * &u1,
        ],
        3 => vec![
            r(1, 1),
            p.clone() * r(1, 5) * &u1,
            p.clone() * r(1, 4) * &u2 - r(1, 10) * u1.clone() * &u1,
            p.clone() * r(1, 3) * u3 - r(3, 20) * u2 * &u1 - p * r(1, 30) * u1.clone() * &u1 * &u1,
        ],
        _ => unreachable!(),
    }
}

/// Reference `λ_n(k)` at ν = 0.
pub fn table_lambda_nu0(n: usize, s: SectorSign, ups: &[Rational], k: usize) -> Rational {
    let (u1, u2, u3) = (u(ups, 1), u(ups, 2), u(ups, 3));
    let p = pm(s);
    let uk = |m: usize| u(ups, k + m);
    match n {
        0 => p * uk(0),
        1 => u1 * uk(0) + p * uk(1),
        2 => {
            (r(1, 2) * u2 - p.clone() * r(1, 6) * u1.clone() * &u1) * uk(0)
                + r(1, 3) * u1 * uk(1)
                + p * uk(2)
        }
        3 => {
            (r(1, 3) * u3 - p.clone() * r(3, 20) * u2.clone() * &u1 - r(1, 30) * u1.clone() * &u1 * &u1) * uk(0)
                + (r(1, 4) * u2 - p.clone() * r(1, 10) * u1.clone() * &u1) * uk(1)
                + r(1, 5) * u1 * uk(2)
                + p * uk(3)
        }
        _ => unreachable!(),
    }
}

/// Reference rows for general ν.
pub fn table_chi_nu(n: usize, s: SectorSign, ups: &[Rational], nu: &Rational) -> Vec<Rational> {
    let (u1, u2, u3) = (u(ups, 1), u(ups, 2), u(ups, 3));
    let p = pm(s);
    let lin = |a: i64, b: i64| Rational::from(a) * nu + Rational::from(b);
    let inv = |x: Rational| Rational::from(1) / x;
    match n {
        0 => vec![r(1, 1)],
        1 => vec![r(1, 1), p * u1 * inv(lin(2, 1))],
        2 => vec![
            r(1, 1),
            p.clone() * &u1 * inv(lin(2, 3)),
            p * u2 * inv(lin(2, 2)) - u1.clone() * &u1 * inv(lin(4, 6)),
        ],
        3 => {
            let c33 = p.clone() * &u3 * inv(lin(2, 3))
                - lin(4, 9) * inv(r(6, 1) * lin(1, 2) * lin(2, 5)) * u2.clone() * &u1
                - p.clone() * u1.clone() * &u1 * &u1 * inv(r(2, 1) * lin(2, 3) * lin(2, 5));
            vec![
                r(1, 1),
                p.clone() * &u1 * inv(lin(2, 5)),
                p * u2 * inv(lin(2, 4)) - u1.clone() * &u1 * inv(lin(4, 10)),
                c33,
            ]
        }
        _ => unreachable!(),
    }
}

pub fn table_lambda_nu(n: usize, s: SectorSign, ups: &[Rational], nu: &Rational, k: usize) -> Rational {
    let (u1, u2, u3) = (u(ups, 1), u(ups, 2), u(ups, 3));
    let p = pm(s);
    let uk = |m: usize| u(ups, k + m);
    let lin = |a: i64, b: i64| Rational::from(a) * nu + Rational::from(b);
    let inv = |x: Rational| Rational::from(1) / x;
    match n {
        0 => p * uk(0),
        1 => u1 * uk(0) * inv(lin(2, 1)) + p * uk(1),
        2 => {
            (u2 * inv(lin(2, 2)) - p.clone() * u1.clone() * &u1 * inv(lin(4, 6))) * uk(0)
                + u1 * inv(lin(2, 3)) * uk(1)
                + p * uk(2)
        }
        3 => {
            let a = u3 * inv(lin(2, 3))
                - p.clone() * lin(4, 9) * inv(r(6, 1) * lin(1, 2) * lin(2, 5)) * u2.clone() * &u1
                - u1.clone() * &u1 * &u1 * inv(r(2, 1) * lin(2, 3) * lin(2, 5));
            a * uk(0)
                + (u2 * inv(lin(2, 4)) - p.clone() * u1.clone() * &u1 * inv(lin(4, 10))) * uk(1)
                + u1 * inv(lin(2, 5)) * uk(2)
                + p * uk(3)
        }
        _ => unreachable!(),
    }
}

/// Builder output for rows `n ≤ 3` against a table; returns the first mismatch.
pub fn compare_table<FC, FL>(ups: &[Rational], nu: &Rational, chi: FC, lambda: FL) -> Result<(), String>
where
    FC: Fn(usize, SectorSign) -> Vec<Rational>,
    FL: Fn(usize, SectorSign, usize) -> Rational,
{
    let pot = polynomial(ups);
    for n in 0..=3 {
        let duals = build_dual_polynomials(n, &pot, &c(nu)).map_err(|e| e.to_string())?;
        let lam = build_inhomogeneity(n, &duals, &pot).map_err(|e| e.to_string())?;
        for s in SectorSign::BOTH {
            let want: Vec<Coefficient> = chi(n, s).iter().map(c).collect();
            if duals.get(s).c != want {
                return Err(format!("chi n={n} s={s} nu={nu}: {:?} vs {:?}", duals.get(s).c, want));
            }
            let got = &lam.get(s).lambda;
            if lam.get(s).trunc_order.is_some() {
                return Err("lambda unexpectedly truncated".into());
            }
            for k in 1..=ups.len() + 3 {
                let g = got.get(k - 1).cloned().unwrap_or_else(|| Q.zero());
                let w = c(&lambda(n, s, k));
                if g != w {
                    return Err(format!("lambda n={n} s={s} k={k} nu={nu}: {g} vs {w}"));
                }
            }
        }
    }
    Ok(())
}

// ---- strategies ----

pub fn arb_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=9).prop_map(|(p, q)| r(p, q))
}

pub fn arb_nonzero_rational() -> impl Strategy<Value = Rational> {
    arb_rational().prop_filter("nonzero", |x| *x != 0)
}

/// Truncated series with `min_exp ∈ [−4, 2]`, up to 12 stored terms.
pub fn arb_series() -> impl Strategy<Value = LaurentSeries> {
    (-4i64..=2, prop::collection::vec(arb_rational(), 0..=12), any::<bool>()).prop_map(|(m, cs, exact)| {
        let len = cs.len() as i64;
        let cs: Vec<Coefficient> = cs.iter().map(c).collect();
        if exact {
            LaurentSeries::exact(Q, m, cs).unwrap()
        } else {
            LaurentSeries::truncated(Q, m, cs, m + len - 1).unwrap()
        }
    })
}

pub fn arb_exact_series() -> impl Strategy<Value = LaurentSeries> {
    (-4i64..=4, prop::collection::vec(arb_rational(), 0..=8))
        .prop_map(|(m, cs)| LaurentSeries::exact(Q, m, cs.iter().map(c).collect()).unwrap())
}

pub fn arb_upsilon(max_k: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(arb_rational(), 1..=max_k)
}

pub const NUS: [(i64, i64); 3] = [(0, 1), (1, 3), (-1, 5)];

pub fn arb_nu() -> impl Strategy<Value = Rational> {
    prop::sample::select(NUS.to_vec()).prop_map(|(p, q)| r(p, q))
}

// ---- properties ----

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

/// Coefficient-exact equality on the jointly determined range.
fn same(a: &LaurentSeries, b: &LaurentSeries, what: &str) -> Result<(), TestCaseError> {
    let d = a.sub(b).map_err(|e| fail(e.to_string()))?;
    if d.is_zero() {
        Ok(())
    } else {
        Err(fail(format!("{what}: {a} vs {b}")))
    }
}

pub fn prop_ring_laws(a: &LaurentSeries, b: &LaurentSeries, cc: &LaurentSeries) -> Result<(), TestCaseError> {
    let ok = |r: susybi::Result<LaurentSeries>| r.map_err(|e| fail(e.to_string()));
    same(&ok(ok(a.add(b))?.add(cc))?, &ok(a.add(&ok(b.add(cc))?))?, "associativity")?;
    same(&ok(a.mul(b))?, &ok(b.mul(a))?, "commutativity")?;
    same(&ok(a.mul(&ok(b.add(cc))?))?, &ok(ok(a.mul(b))?.add(&ok(a.mul(cc))?))?, "distributivity")?;
    let ab = ok(a.mul(b))?;
    let ba = ok(b.mul(a))?;
    prop_assert_eq!(ab.trunc_order(), ba.trunc_order());
    Ok(())
}

pub fn prop_leibniz(f: &LaurentSeries, g: &LaurentSeries) -> Result<(), TestCaseError> {
    let ok = |r: susybi::Result<LaurentSeries>| r.map_err(|e| fail(e.to_string()));
    let lhs = ok(f.mul(g))?.euler_derivative();
    let rhs = ok(ok(f.euler_derivative().mul(g))?.add(&ok(f.mul(&g.euler_derivative()))?))?;
    same(&lhs, &rhs, "Leibniz")
}

/// Symmetry and integration by parts, whenever the pairing is defined.
pub fn prop_pairing(f: &LaurentSeries, g: &LaurentSeries) -> Result<(), TestCaseError> {
    if let (Ok(x), Ok(y)) = (f.pairing(g), g.pairing(f)) {
        prop_assert_eq!(x, y);
        let a = f.pairing(&g.euler_derivative()).map_err(|e| fail(e.to_string()))?;
        let b = f.euler_derivative().pairing(g).map_err(|e| fail(e.to_string()))?;
        prop_assert_eq!(a, -&b);
    } else {
        prop_assert!(f.pairing(g).is_err() && g.pairing(f).is_err());
    }
    Ok(())
}

pub fn prop_sign_flip(ups: &[Rational], nu: &Rational, n: usize, depth: usize) -> Result<(), TestCaseError> {
    let u = polynomial(ups);
    let flipped = u.negated();
    let nu = c(nu);
    let e = |x: susybi::Error| fail(x.to_string());
    let a = build_dual_polynomials(n, &u, &nu).map_err(e)?;
    let b = build_dual_polynomials(n, &flipped, &nu).map_err(e)?;
    prop_assert_eq!(&a.minus.c, &b.plus.c);
    prop_assert_eq!(&a.plus.c, &b.minus.c);
    let la = build_inhomogeneity(n, &a, &u).map_err(e)?;
    let lb = build_inhomogeneity(n, &b, &flipped).map_err(e)?;
    prop_assert_eq!(&la.minus.lambda, &lb.plus.lambda);
    let pa = build_eigenfunction(n, &u, &nu, depth).map_err(e)?;
    let pb = build_eigenfunction(n, &flipped, &nu, depth).map_err(e)?;
    prop_assert_eq!(&pa.minus.a, &pb.plus.a);
    Ok(())
}

/// `c_{n,j}` ignores `υ_{k>j}`.
pub fn prop_locality(ups: &[Rational], nu: &Rational, n: usize, k: usize, bump: &Rational) -> Result<(), TestCaseError> {
    let u = polynomial(ups);
    let k = k.clamp(1, ups.len());
    let changed = u.with_coefficient(k, &u.upsilon(k).unwrap() + &c(bump)).unwrap();
    let e = |x: susybi::Error| fail(x.to_string());
    let a = build_dual_polynomials(n, &u, &c(nu)).map_err(e)?;
    let b = build_dual_polynomials(n, &changed, &c(nu)).map_err(e)?;
    for s in SectorSign::BOTH {
        for j in 0..k.min(n + 1) {
            prop_assert_eq!(&a.get(s).c[j], &b.get(s).c[j], "j={} k={}", j, k);
        }
    }
    Ok(())
}

/// Recursion, triangular route and both minor expansions agree.
pub fn prop_oracles(ups: &[Rational], nu: &Rational, n: usize, depth: usize) -> Result<(), TestCaseError> {
    let u = polynomial(ups);
    let nu = c(nu);
    let e = |x: susybi::Error| fail(x.to_string());
    let duals: Vec<_> = (0..=n + depth).map(|m| build_dual_polynomials(m, &u, &nu)).collect::<Result<_, _>>().map_err(e)?;
    let eig: Vec<_> = (0..=n).map(|m| build_eigenfunction(m, &u, &nu, n.max(depth))).collect::<Result<_, _>>().map_err(e)?;
    for s in SectorSign::BOTH {
        let ds: Vec<_> = duals.iter().map(|d| d.get(s).clone()).collect();
        let es: Vec<_> = eig.iter().map(|p| p.get(s).clone()).collect();
        let mut direct = es[n].clone();
        direct.a.truncate(depth + 1);
        let tri = psi_from_duals_triangular(n, &ds, depth).map_err(e)?;
        prop_assert_eq!(&tri, &direct);
        let minors = psi_by_minors(n, &ds, depth).map_err(e)?;
        prop_assert_eq!(&minors, &direct.as_series());
        let chi = chi_by_minors(n, &es, Q).map_err(e)?;
        prop_assert_eq!(&chi, &ds[n].as_series());
    }
    Ok(())
}

/// Adding 1 to any single `c_{n,j}` (j ≥ 1) breaks biorthonormality.
pub fn prop_failure_injection(n: usize, j: usize, s: SectorSign) -> Result<(), TestCaseError> {
    let u = Superpotential::morse(Q.one());
    let mut sys = build_system(&u, &Q.zero(), 4, 6).unwrap();
    let n = n.clamp(1, 4);
    let j = j.clamp(1, n);
    let cell = &mut sys.levels[n].chi.get_mut(s).c[j];
    *cell = &*cell + &Q.one();
    let rep = check_biorthonormality(&sys).map_err(|e| fail(e.to_string()))?;
    prop_assert!(!rep.passed(), "perturbing c_{{{},{}}}^{} went unnoticed", n, j, s);
    Ok(())
}

// ---- seeded runner shared by the property tests and the acceptance harness ----

use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config { cases, failure_persistence: None, ..Config::default() },
        TestRng::from_seed(RngAlgorithm::ChaCha, &SEED),
    )
}

pub const PROPERTIES: [&str; 7] = [
    "ring_laws",
    "leibniz",
    "pairing_by_parts",
    "sign_flip",
    "locality",
    "oracles",
    "failure_injection",
];

fn text<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

pub fn run_property(name: &str) -> Result<(), String> {
    match name {
        "ring_laws" => text(
            runner(256).run(&(arb_series(), arb_series(), arb_series()), |(a, b, c)| prop_ring_laws(&a, &b, &c)),
        ),
        "leibniz" => text(runner(256).run(&(arb_series(), arb_series()), |(f, g)| prop_leibniz(&f, &g))),
        "pairing_by_parts" => {
            text(runner(256).run(&(arb_series(), arb_series()), |(f, g)| prop_pairing(&f, &g)))?;
            text(runner(128).run(&(arb_exact_series(), arb_exact_series()), |(f, g)| prop_pairing(&f, &g)))
        }
        "sign_flip" => text(runner(64).run(&(arb_upsilon(4), arb_nu(), 0usize..=5, 0usize..=6), |(u, nu, n, j)| {
            prop_sign_flip(&u, &nu, n, j)
        })),
        "locality" => text(runner(64).run(
            &(arb_upsilon(4), arb_nu(), 1usize..=5, 1usize..=4, arb_nonzero_rational()),
            |(u, nu, n, k, b)| prop_locality(&u, &nu, n, k, &b),
        )),
        "oracles" => text(
            runner(48)
                .run(&(arb_upsilon(4), arb_nu(), 0usize..=5, 0usize..=6), |(u, nu, n, j)| prop_oracles(&u, &nu, n, j)),
        ),
        "failure_injection" => {
            let sector = prop_oneof![Just(SectorSign::Plus), Just(SectorSign::Minus)];
            text(runner(32).run(&(1usize..=4, 1usize..=4, sector), |(n, j, s)| prop_failure_injection(n, j, s)))
        }
        other => Err(format!("no property named {other}")),
    }
}
