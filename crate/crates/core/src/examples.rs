//! Closed forms for three solvable superpotentials, used as oracles for the
//! general recursions in [`builder`](crate::builder).
//!
//! * Morse: `U = μz`, Bessel-type eigenfunctions. With the normalization
//!   `Z_n = 2^n Γ(n+½)` every Gamma ratio collapses to a Pochhammer symbol of
//!   `n+½`, so all coefficients are rational.
//! * Singular: `U = z/(1−z)`, hypergeometric eigenfunctions whose parameters
//!   `1+m ± √(1+m²)` are surds. Only their sum and product enter the
//!   coefficient recurrence, so the series stays rational.
//! * Bessel quotient: `U = z J_1(z)/J_0(z)`, for which `V_+ = z²`.

use rug::{Float, Integer, Rational};

use crate::builder::{
    hamiltonian_apply, intertwine, potential_series, DualPolynomial, Eigenfunction, Scope, SectorPair, Superpotential,
};
use crate::coefficient::{Coefficient, Ring};
use crate::error::{Error, Result};
use crate::series::{LaurentSeries, SectorSign};
use crate::verify::{ReportBuilder, VerificationReport};

#[derive(Clone, Debug, PartialEq)]
pub struct MorseConfig {
    pub mu: Coefficient,
    pub n_max: usize,
    pub depth: usize,
}

impl MorseConfig {
    pub fn new(mu: Coefficient, n_max: usize, depth: usize) -> Result<Self> {
        if mu.is_zero() {
            return Err(Error::InvalidArgument("Morse scale μ must be nonzero".into()));
        }
        Ok(MorseConfig { mu, n_max, depth })
    }

    pub fn potential(&self) -> Superpotential {
        Superpotential::morse(self.mu.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularConfig {
    pub nu: Coefficient,
    pub n_max: usize,
    pub depth: usize,
}

impl SingularConfig {
    pub fn new(nu: Coefficient, n_max: usize, depth: usize) -> Result<Self> {
        // 1 + 2n + 2ν must avoid the non-positive integers for every level
        for n in 0..=n_max {
            hypergeometric_c(n, &nu)?;
        }
        Ok(SingularConfig { nu, n_max, depth })
    }

    /// `z/(1−z)` truncated with the default guard of two orders.
    pub fn potential(&self) -> Result<Superpotential> {
        Superpotential::singular(self.nu.ring(), self.n_max + self.depth + 2)
    }
}

/// `η_n^± = n χ_n^∓ − (−z d/dz ± U) χ_n^±`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsidiaryFunction {
    pub level: usize,
    pub sector: SectorSign,
    pub eta: LaurentSeries,
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn factorial(k: usize) -> Integer {
    Integer::from(Integer::factorial(k as u32))
}

/// `(x)_k`.
fn pochhammer(x: &Rational, k: usize) -> Rational {
    (0..k).fold(Rational::from(1), |acc, i| acc * (x.clone() + Rational::from(i as i64)))
}

fn power(mu: &Coefficient, j: usize) -> Coefficient {
    (0..j).fold(mu.ring().one(), |acc, _| &acc * mu)
}

/// `ψ_n^±` for `U = μz` from the Bessel series, scaled by `z → μz`.
pub fn morse_psi_closed(n: usize, mu: &Coefficient, depth: usize) -> SectorPair<Eigenfunction> {
    let ring = mu.ring();
    let half = q(2 * n as i64 + 1, 2);
    let coeff = |j: usize| -> Rational {
        let k = j / 2;
        let four_k = Integer::from(1) << (2 * k as u32);
        if j.is_multiple_of(2) {
            Rational::from(1) / (pochhammer(&half, k) * Rational::from(four_k * factorial(k)))
        } else {
            let two_k1 = Integer::from(1) << (2 * k as u32 + 1);
            Rational::from(1) / (pochhammer(&half, k + 1) * Rational::from(two_k1 * factorial(k)))
        }
    };
    let build = |s: SectorSign| Eigenfunction {
        level: n,
        sector: s,
        a: (0..=depth)
            .map(|j| {
                let mut c = coeff(j);
                if j % 2 == 1 && s == SectorSign::Plus {
                    c = -c;
                }
                &ring.from_rational(&c) * &power(mu, j)
            })
            .collect(),
    };
    SectorPair::new(build(SectorSign::Plus), build(SectorSign::Minus))
}

/// Morse dual polynomials with their scalar inhomogeneities `Λ_n^± = λ_n^± z`.
#[derive(Clone, Debug, PartialEq)]
pub struct MorseDuals {
    pub chi: SectorPair<DualPolynomial>,
    pub lambda: SectorPair<Coefficient>,
}

/// `Π_{i=from}^{to} (n − i + ½)`.
fn shifted_half_product(n: usize, from: usize, to: usize) -> Rational {
    (from..=to).fold(Rational::from(1), |acc, i| acc * q(2 * (n as i64 - i as i64) + 1, 2))
}

/// `χ_n^±` and `λ_n^±` for `U = μz` from the Gamma-series closed forms.
pub fn morse_chi_closed(n: usize, mu: &Coefficient) -> MorseDuals {
    let ring = mu.ring();
    let coeff = |j: usize| -> Rational {
        let k = j / 2;
        let sign = if k.is_multiple_of(2) { 1 } else { -1 };
        let (top, pow2) = if j.is_multiple_of(2) { (k, 2 * k) } else { (k + 1, 2 * k + 1) };
        let den = shifted_half_product(n, 1, top)
            * Rational::from(factorial(k) * (Integer::from(1) << pow2 as u32));
        Rational::from(sign) / den
    };
    let build = |s: SectorSign| DualPolynomial {
        level: n,
        sector: s,
        c: (0..=n)
            .map(|j| {
                let mut c = coeff(j);
                if j % 2 == 1 && s == SectorSign::Minus {
                    c = -c;
                }
                &ring.from_rational(&c) * &power(mu, j)
            })
            .collect(),
    };

    let m = n / 2;
    let mut lam = Rational::from(1);
    for i in m..n {
        lam *= q(2 * i as i64 + 1, 2);
    }
    lam = Rational::from(1) / (lam * Rational::from(factorial(m) * (Integer::from(1) << n as u32)));
    if m % 2 == 1 {
        lam = -lam;
    }
    let lam_minus = if n.is_multiple_of(2) { -lam.clone() } else { lam.clone() };
    let scale = power(mu, n + 1);
    MorseDuals {
        chi: SectorPair::new(build(SectorSign::Plus), build(SectorSign::Minus)),
        lambda: SectorPair::new(
            &ring.from_rational(&lam) * &scale,
            &ring.from_rational(&lam_minus) * &scale,
        ),
    }
}

/// `λ_n^± ((1 + (−1)^n n) z ∓ μ z²)`, the right side of `(H_± − n²) χ_n^±` for `U = μz`.
pub fn morse_second_order_rhs(
    n: usize,
    sector: SectorSign,
    lambda: &Coefficient,
    mu: &Coefficient,
) -> LaurentSeries {
    let ring = lambda.ring();
    let lin = if n.is_multiple_of(2) { 1 + n as i64 } else { 1 - n as i64 };
    let quad = (lambda * mu).mul_int(-sector.signum());
    LaurentSeries::exact(ring, 1, vec![lambda.mul_int(lin), quad]).expect("homogeneous")
}

/// `1 + 2n + 2ν`, rejected when it is a non-positive integer.
fn hypergeometric_c(n: usize, nu: &Coefficient) -> Result<Coefficient> {
    let c = &nu.mul_int(2) + &nu.ring().int(1 + 2 * n as i64);
    let bad = match &c {
        Coefficient::Rational(r) => *r.denom() == 1 && *r.numer() <= 0,
        Coefficient::Float(f) => f.is_integer() && *f <= 0,
    };
    if bad {
        return Err(Error::DegenerateDeterminant { which: "1+2n+2ν", n, j: 0, nu: nu.to_string() });
    }
    Ok(c)
}

/// `(a+b, ab)` of the hypergeometric parameters for `U = z/(1−z)`.
fn singular_parameters(n: usize, nu: &Coefficient, sector: SectorSign) -> (Coefficient, Coefficient) {
    let ring = nu.ring();
    let m = &ring.int(n as i64) + nu;
    match sector {
        SectorSign::Plus => ((&m + &ring.one()).mul_int(2), m.mul_int(2)),
        // ab = (2+m)² − 1 − m²
        SectorSign::Minus => ((&m + &ring.int(2)).mul_int(2), &m.mul_int(4) + &ring.int(3)),
    }
}

/// `₂F₁(a, b; c; z)` coefficients from `(a+b, ab)` alone.
fn hypergeometric_coefficients(
    sum: &Coefficient,
    prod: &Coefficient,
    c: &Coefficient,
    depth: usize,
) -> Result<Vec<Coefficient>> {
    let ring = c.ring();
    let mut out = vec![ring.one()];
    for k in 0..depth {
        let kk = ring.int(k as i64);
        // (a+k)(b+k) = ab + k(a+b) + k²
        let num = &(prod + &(&kk * sum)) + &(&kk * &kk);
        let den = &(c + &kk) * &ring.int(k as i64 + 1);
        out.push((&out[k] * &num).try_div(&den)?);
    }
    Ok(out)
}

/// `ψ_n^+ = z^n (1−z) ₂F₁(…)`, `ψ_n^− = z^n (1−z)² ₂F₁(…)` for `U = z/(1−z)`.
pub fn singular_psi_closed(
    n: usize,
    nu: &Coefficient,
    sector: SectorSign,
    depth: usize,
) -> Result<Eigenfunction> {
    let c = hypergeometric_c(n, nu)?;
    let (sum, prod) = singular_parameters(n, nu, sector);
    let f = hypergeometric_coefficients(&sum, &prod, &c, depth)?;
    let prefactor: &[i64] = match sector {
        SectorSign::Plus => &[1, -1],
        SectorSign::Minus => &[1, -2, 1],
    };
    let a = (0..=depth)
        .map(|j| {
            prefactor.iter().enumerate().filter(|(i, _)| *i <= j).fold(nu.ring().zero(), |acc, (i, &p)| {
                &acc + &f[j - i].mul_int(p)
            })
        })
        .collect();
    Ok(Eigenfunction { level: n, sector, a })
}

/// The same `₂F₁` coefficients evaluated with explicit surd parameters
/// `a, b = r ± σ√(r² − ab)` in the float ring; `root` picks σ.
pub fn singular_hypergeometric_surd(
    n: usize,
    nu: &Coefficient,
    sector: SectorSign,
    depth: usize,
    prec: u32,
    root: SectorSign,
) -> Result<Vec<Coefficient>> {
    let fl = |x: &Coefficient| x.to_float(prec);
    let (sum, prod) = singular_parameters(n, nu, sector);
    let c = fl(&hypergeometric_c(n, nu)?);
    let r = fl(&sum) / 2u32;
    let disc = Float::with_val(prec, &r * &r) - fl(&prod);
    let s = disc.sqrt() * root.signum() as i32;
    let a = Float::with_val(prec, &r + &s);
    let b = Float::with_val(prec, &r - &s);
    let mut out = vec![Float::with_val(prec, 1)];
    for k in 0..depth {
        let t = Float::with_val(prec, &a + k as u32) * Float::with_val(prec, &b + k as u32)
            / (Float::with_val(prec, &c + k as u32) * (k as u32 + 1));
        out.push(Float::with_val(prec, &out[k] * t));
    }
    Ok(out.into_iter().map(Coefficient::Float).collect())
}

/// `χ_n^±` of the singular model at `ν = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularDuals {
    pub chi: SectorPair<DualPolynomial>,
    /// `χ_n^+(1)` as the exact coefficient sum.
    pub plus_at_one: Coefficient,
    /// `χ_n^+(1)` from the Gamma formula in the float ring; `None` at `n = 0`,
    /// where that formula does not apply.
    pub plus_at_one_gamma: Option<Coefficient>,
}

/// `Π_{i=1}^{k} (1 + i(2n − i))`.
fn surd_pair_product(n: usize, k: usize) -> Integer {
    (1..=k as i64).fold(Integer::from(1), |acc, i| acc * (1 + i * (2 * n as i64 - i)))
}

/// `χ_n^+(1) = 2s Γ(n+s) / (Γ(1+2n) Γ(1−n+s))`, `s = √(1+n²)`, for `n ≥ 1`.
pub fn singular_chi_plus_at_one_gamma(n: usize, prec: u32) -> Option<Coefficient> {
    if n == 0 {
        return None;
    }
    let s = Float::with_val(prec, 1 + n * n).sqrt();
    let num = Float::with_val(prec, &s + n as u32).gamma() * Float::with_val(prec, &s * 2u32);
    let den = Float::with_val(prec, 1 + 2 * n as u32).gamma()
        * (Float::with_val(prec, &s + 1u32) - n as u32).gamma();
    Some(Coefficient::Float(num / den))
}

/// `d_j` in `χ_n^− = (1−z) z^{−n} Σ_{j<n} d_j z^j`.
pub fn singular_chi_minus_factor(n: usize) -> Vec<Rational> {
    (0..n)
        .map(|j| {
            let num = Integer::from(2 * (n - j)) * factorial(2 * n - j - 1) * surd_pair_product(n, j);
            Rational::from((num, factorial(j) * factorial(2 * n)))
        })
        .collect()
}

/// `χ_n^+` from the product formula, `χ_n^−` from
/// `χ_n^− = −(1/n)(z d/dz χ_n^+ + U (χ_n^+ − χ_n^+(1)))`.
pub fn singular_chi_closed(n: usize, ring: Ring) -> Result<SingularDuals> {
    let plus: Vec<Coefficient> = (0..=n)
        .map(|k| {
            if k == 0 {
                return ring.one();
            }
            let r = Rational::from((
                factorial(2 * n - k - 1) * surd_pair_product(n, k - 1),
                factorial(k) * factorial(2 * n - 1),
            ));
            ring.from_rational(&r)
        })
        .collect();
    let chi_plus = DualPolynomial { level: n, sector: SectorSign::Plus, c: plus };
    let series = chi_plus.as_series();
    let (at_one, _) = series.boundary_values()?;

    let minus = if n == 0 {
        vec![ring.one()]
    } else {
        let shifted = series.sub(&LaurentSeries::constant(at_one.clone()))?;
        let u_part = shifted.divide_by_one_minus_z()?.shift(1)?;
        let inner = series.euler_derivative().add(&u_part)?;
        let scale = ring.ratio(-1, n as i64);
        let s = inner.scale(&scale)?;
        (-(n as i64)..=0).map(|e| s.coeff(e).unwrap_or_else(|| ring.zero())).collect()
    };
    let prec = match ring {
        Ring::Float { prec } => prec,
        Ring::Rational => match Ring::default_float() {
            Ring::Float { prec } => prec,
            Ring::Rational => unreachable!(),
        },
    };
    Ok(SingularDuals {
        chi: SectorPair::new(chi_plus, DualPolynomial { level: n, sector: SectorSign::Minus, c: minus }),
        plus_at_one: at_one,
        plus_at_one_gamma: singular_chi_plus_at_one_gamma(n, prec),
    })
}

fn singular_scope(n: usize, u: &Superpotential) -> Scope {
    Scope { levels: n, depth: u.order(), nu: "0".into(), potential: u.describe() }
}

/// Second-order identities with the singular inhomogeneity (for `n = 0` the
/// minus one degenerates to `H_− χ_0^− = V_−`), the boundary
/// relations `χ_n^−(1) = 0` (`n ≥ 1`), `2χ_n^−′(1) = −n χ_n^+(1)`, the agreement of the
/// Gamma formula for `χ_n^+(1)`, and the first-order relations
/// `(z d/dz ± U) ψ_n^± = n ψ_n^∓`,
/// `(−z d/dz − U) χ_n^+ = n χ_n^− − U χ_n^+(1)`,
/// `(−z d/dz + U) χ_n^− = n χ_n^+ + U δ_{n0}`,
/// all on the window determined by `U` truncated at `order` (≥ `n + 1`).
pub fn singular_inhomogeneity_identities(n: usize, order: usize) -> Result<VerificationReport> {
    if order < n + 1 {
        return Err(Error::InsufficientTruncation { needed: n + 1, available: order });
    }
    let ring = Ring::Rational;
    let u = Superpotential::singular(ring, order)?;
    let us = u.as_series();
    let duals = singular_chi_closed(n, ring)?;
    let chi_p = duals.chi.plus.as_series();
    let chi_m = duals.chi.minus.as_series();
    let zero = ring.zero();
    let nn = ring.int(n as i64);
    let mut rb = ReportBuilder::default();

    let (m_at_one, m_deriv) = chi_m.boundary_values()?;
    if n > 0 {
        rb.expect_eq(format!("n={n} chi-(1)"), zero.clone(), m_at_one)?;
    }
    let target = -&(&nn * &duals.plus_at_one);
    rb.expect_eq(format!("n={n} 2chi-'(1)"), target, m_deriv.mul_int(2))?;
    if let Some(g) = &duals.plus_at_one_gamma {
        let Ring::Float { prec } = g.ring() else { unreachable!() };
        let exact = Coefficient::Float(duals.plus_at_one.to_float(prec));
        rb.expect_eq(format!("n={n} chi+(1) gamma"), exact, g.clone())?;
    }

    let n2 = &nn * &nn;
    let lhs = hamiltonian_apply(&chi_p, &u, &zero, SectorSign::Plus, false)?.sub(&chi_p.scale(&n2)?)?;
    rb.expect_series_eq(&format!("n={n} (H+ - n^2)chi+"), &lhs, &us.scale(&duals.plus_at_one)?)?;
    let lhs = hamiltonian_apply(&chi_m, &u, &zero, SectorSign::Minus, false)?.sub(&chi_m.scale(&n2)?)?;
    let rhs = if n == 0 {
        // χ_0^− = 1, so this is just V_−
        potential_series(&u, SectorSign::Minus)?
    } else {
        us.scale(&m_deriv.mul_int(2))?
    };
    rb.expect_series_eq(&format!("n={n} (H- - n^2)chi-"), &lhs, &rhs)?;

    for s in SectorSign::BOTH {
        let psi = singular_psi_closed(n, &zero, s, order)?.as_series();
        let other = singular_psi_closed(n, &zero, s.flip(), order)?.as_series();
        let lhs = intertwine(&psi, &u, &zero, s)?;
        rb.expect_series_eq(&format!("n={n} s={s} psi first order"), &lhs, &other.scale(&nn)?)?;
    }
    let lhs = intertwine(&chi_p, &u, &zero, SectorSign::Plus)?.neg();
    let rhs = chi_m.scale(&nn)?.sub(&us.scale(&duals.plus_at_one)?)?;
    rb.expect_series_eq(&format!("n={n} chi+ first order"), &lhs, &rhs)?;
    let lhs = intertwine(&chi_m, &u, &zero, SectorSign::Minus)?.neg();
    let mut rhs = chi_p.scale(&nn)?;
    if n == 0 {
        rhs = rhs.add(&us)?;
    }
    rb.expect_series_eq(&format!("n={n} chi- first order"), &lhs, &rhs)?;

    Ok(rb.finish("singular_inhomogeneity", singular_scope(n, &u)))
}

/// `η_n^s = n χ_n^{−s} − (−z d/dz + sU) χ_n^s` at `ν = 0`.
pub fn eta(
    n: usize,
    chi: &SectorPair<DualPolynomial>,
    u: &Superpotential,
    sector: SectorSign,
) -> Result<SubsidiaryFunction> {
    let ring = u.ring();
    let nn = ring.int(n as i64);
    // −(−D + sU)χ = (D − sU)χ
    let d = intertwine(&chi.get(sector).as_series(), u, &ring.zero(), sector.flip())?;
    let eta = chi.get(sector.flip()).as_series().scale(&nn)?.add(&d)?;
    Ok(SubsidiaryFunction { level: n, sector, eta })
}

/// `η_n^s` for the singular model together with the residual of
/// `(H_{−s} − n²) χ_n^s = −n η_n^{−s} − (−z d/dz − sU) η_n^s`.
pub fn singular_eta(
    n: usize,
    sector: SectorSign,
    order: usize,
) -> Result<(SubsidiaryFunction, VerificationReport)> {
    let ring = Ring::Rational;
    let u = Superpotential::singular(ring, order)?;
    let duals = singular_chi_closed(n, ring)?;
    let here = eta(n, &duals.chi, &u, sector)?;
    let there = eta(n, &duals.chi, &u, sector.flip())?;
    let nn = ring.int(n as i64);
    let zero = ring.zero();

    let chi = duals.chi.get(sector).as_series();
    let lhs = hamiltonian_apply(&chi, &u, &zero, sector.flip(), false)?.sub(&chi.scale(&(&nn * &nn))?)?;
    // −(−D − sU)η = (D + sU)η
    let rhs = intertwine(&here.eta, &u, &zero, sector)?.sub(&there.eta.scale(&nn)?)?;
    let mut rb = ReportBuilder::default();
    rb.expect_series_eq(&format!("n={n} s={s} eta second order", s = sector), &lhs, &rhs)?;
    Ok((here, rb.finish("singular_eta", singular_scope(n, &u))))
}

/// `U = z J_1/J_0` to order `order` and its partner `V_− = −z² − 2U²`.
#[derive(Clone, Debug, PartialEq)]
pub struct BesselModel {
    pub potential: Superpotential,
    pub v_minus: LaurentSeries,
}

/// Solves `k υ_k = δ_{k,2} + (U²)_k` term by term, i.e. `V_+ = z²`.
pub fn bessel_superpotential(order: usize) -> Result<BesselModel> {
    let order = order.max(2);
    let mut ups: Vec<Rational> = vec![Rational::new(); order + 1]; // index k
    for k in 1..=order {
        let mut acc = Rational::from(if k == 2 { 1 } else { 0 });
        for i in 1..k {
            acc += Rational::from(&ups[i] * &ups[k - i]);
        }
        ups[k] = acc / Rational::from(k as i64);
    }
    let ring = Ring::Rational;
    let potential = Superpotential::truncated(ups[1..].iter().map(|r| ring.from_rational(r)).collect())?;
    let us = potential.as_series();
    let z2 = LaurentSeries::monomial(ring.one(), 2);
    let v_minus = z2.neg().sub(&us.mul(&us)?.scale(&ring.int(2))?)?.truncate(order as i64);
    Ok(BesselModel { potential, v_minus })
}
