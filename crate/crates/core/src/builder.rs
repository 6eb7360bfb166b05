//! Construction of the supersymmetric biorthogonal system for a given
//! superpotential `U(z) = Σ_{k≥1} υ_k z^k` and magnetic shift `ν`.
//!
//! Three families are produced for every level `n` and both sectors:
//!
//! * dual polynomials `χ_n^± = z^{-n} Σ_{j=0}^{n} c_{n,j} z^j`, solving
//!   `(z d/dz − ν ± U) χ_n^± + (n+ν) χ_n^∓ = Λ_n^±` with `Λ_n^±` analytic and
//!   vanishing at the origin;
//! * the inhomogeneities `Λ_n^±(z) = Σ_{k≥1} λ_n^±(k) z^k`;
//! * eigenfunctions `ψ_n^± = z^n Σ_j a_{n,j} z^j`, solving
//!   `(z d/dz + ν ± U) ψ_n^± = (n+ν) ψ_n^∓`.
//!
//! Each coefficient comes from a 2×2 solve coupling the two sectors. The
//! triangular route ([`psi_from_duals_triangular`]) and the minor expansions
//! ([`psi_by_minors`], [`chi_by_minors`]) rebuild the same objects from the
//! other family and serve as independent cross-checks.

use serde::Serialize;

use crate::coefficient::{Coefficient, Ring};
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::series::{LaurentSeries, SectorSign};

/// A `(+, −)` pair of same-shaped objects.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorPair<T> {
    pub plus: T,
    pub minus: T,
}

impl<T> SectorPair<T> {
    pub fn new(plus: T, minus: T) -> Self {
        SectorPair { plus, minus }
    }

    pub fn get(&self, s: SectorSign) -> &T {
        match s {
            SectorSign::Plus => &self.plus,
            SectorSign::Minus => &self.minus,
        }
    }

    pub fn get_mut(&mut self, s: SectorSign) -> &mut T {
        match s {
            SectorSign::Plus => &mut self.plus,
            SectorSign::Minus => &mut self.minus,
        }
    }

    pub fn try_from_fn<F>(mut f: F) -> Result<Self>
    where
        F: FnMut(SectorSign) -> Result<T>,
    {
        Ok(SectorPair { plus: f(SectorSign::Plus)?, minus: f(SectorSign::Minus)? })
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, mut f: F) -> SectorPair<U> {
        SectorPair { plus: f(&self.plus), minus: f(&self.minus) }
    }
}

/// `U(z) = Σ_{k=1}^{K} υ_k z^k`, either exactly (a polynomial) or as the
/// truncation of an infinite series, in which case `υ_{k>K}` is unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct Superpotential {
    ring: Ring,
    upsilon: Vec<Coefficient>,
    exact: bool,
}

impl Superpotential {
    fn new(upsilon: Vec<Coefficient>, exact: bool) -> Result<Self> {
        let Some(first) = upsilon.first() else {
            return Err(Error::InvalidArgument("superpotential needs at least υ_1".into()));
        };
        let ring = first.ring();
        if let Some(c) = upsilon.iter().find(|c| !c.ring().compatible(ring)) {
            return Err(Error::RingMismatch { left: ring.kind(), right: c.ring().kind() });
        }
        Ok(Superpotential { ring, upsilon, exact })
    }

    /// Polynomial superpotential; `upsilon[0]` is `υ_1`.
    pub fn polynomial(upsilon: Vec<Coefficient>) -> Result<Self> {
        Self::new(upsilon, true)
    }

    /// First `K = upsilon.len()` terms of an infinite series.
    pub fn truncated(upsilon: Vec<Coefficient>) -> Result<Self> {
        Self::new(upsilon, false)
    }

    /// `U = 0`.
    pub fn free(ring: Ring) -> Self {
        Superpotential { ring, upsilon: vec![ring.zero()], exact: true }
    }

    /// Complex Morse model `U = μ z`.
    pub fn morse(mu: Coefficient) -> Self {
        Superpotential { ring: mu.ring(), upsilon: vec![mu], exact: true }
    }

    /// `U = z/(1 − z)` truncated at order `k`.
    pub fn singular(ring: Ring, k: usize) -> Result<Self> {
        Self::truncated(vec![ring.one(); k.max(1)])
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Highest stored power `K`.
    pub fn order(&self) -> usize {
        self.upsilon.len()
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// `υ_1..υ_K`.
    pub fn coefficients(&self) -> &[Coefficient] {
        &self.upsilon
    }

    /// `υ_k` for `k ≥ 1`; zero past `K` for a polynomial, an error otherwise.
    pub fn upsilon(&self, k: usize) -> Result<Coefficient> {
        debug_assert!(k >= 1);
        match self.upsilon.get(k - 1) {
            Some(c) => Ok(c.clone()),
            None if self.exact => Ok(self.ring.zero()),
            None => Err(Error::InsufficientTruncation { needed: k, available: self.order() }),
        }
    }

    fn known(&self, k: usize) -> Option<&Coefficient> {
        self.upsilon.get(k.wrapping_sub(1))
    }

    pub fn as_series(&self) -> LaurentSeries {
        let r = if self.exact {
            LaurentSeries::exact(self.ring, 1, self.upsilon.clone())
        } else {
            LaurentSeries::truncated(self.ring, 1, self.upsilon.clone(), self.order() as i64)
        };
        r.expect("homogeneous by construction")
    }

    /// `U → −U`, which exchanges the two sectors.
    pub fn negated(&self) -> Self {
        Superpotential { upsilon: self.upsilon.iter().map(|c| -c).collect(), ..self.clone() }
    }

    /// Same superpotential with `υ_k` replaced.
    pub fn with_coefficient(&self, k: usize, value: Coefficient) -> Result<Self> {
        let mut ups = self.upsilon.clone();
        if k == 0 {
            return Err(Error::InvalidArgument("υ index starts at 1".into()));
        }
        if ups.len() < k {
            ups.resize(k, self.ring.zero());
        }
        ups[k - 1] = value;
        Self::new(ups, self.exact)
    }

    pub fn describe(&self) -> String {
        let list: Vec<String> = self.upsilon.iter().map(|c| c.to_string()).collect();
        let kind = if self.exact { "polynomial" } else { "truncated" };
        format!("{kind} K={} upsilon=[{}]", self.order(), list.join(", "))
    }
}

/// `χ_n = z^{-n} Σ_{j=0}^{n} c_j z^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualPolynomial {
    pub level: usize,
    pub sector: SectorSign,
    /// `c_{n,0..=n}`.
    pub c: Vec<Coefficient>,
}

impl DualPolynomial {
    pub fn as_series(&self) -> LaurentSeries {
        let ring = self.c[0].ring();
        LaurentSeries::exact(ring, -(self.level as i64), self.c.clone()).expect("homogeneous")
    }
}

/// `Λ_n(z) = Σ_{k≥1} λ(k) z^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Inhomogeneity {
    pub level: usize,
    pub sector: SectorSign,
    /// `λ(1), λ(2), ...` as far as they are known.
    pub lambda: Vec<Coefficient>,
    /// `None` when every `λ(k)` past the stored ones is zero.
    pub trunc_order: Option<i64>,
    pub ring: Ring,
}

impl Inhomogeneity {
    pub fn as_series(&self) -> LaurentSeries {
        let r = match self.trunc_order {
            None => LaurentSeries::exact(self.ring, 1, self.lambda.clone()),
            Some(t) => LaurentSeries::truncated(self.ring, 1, self.lambda.clone(), t),
        };
        r.expect("homogeneous")
    }
}

/// `ψ_n = z^n Σ_{j=0}^{J} a_j z^j + O(z^{n+J+1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenfunction {
    pub level: usize,
    pub sector: SectorSign,
    /// `a_{n,0..=J}`.
    pub a: Vec<Coefficient>,
}

impl Eigenfunction {
    pub fn depth(&self) -> usize {
        self.a.len() - 1
    }

    pub fn as_series(&self) -> LaurentSeries {
        let ring = self.a[0].ring();
        let n = self.level as i64;
        LaurentSeries::truncated(ring, n, self.a.clone(), n + self.depth() as i64)
            .expect("homogeneous")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Level {
    pub n: usize,
    pub chi: SectorPair<DualPolynomial>,
    pub lambda: SectorPair<Inhomogeneity>,
    pub psi: SectorPair<Eigenfunction>,
}

/// All `χ_n^±`, `Λ_n^±`, `ψ_n^±` for `n = 0..=N`, `ψ` to depth `J`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiorthogonalSystem {
    pub nu: Coefficient,
    pub potential: Superpotential,
    pub max_level: usize,
    pub depth: usize,
    pub levels: Vec<Level>,
}

/// Short description used in verification reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scope {
    pub levels: usize,
    pub depth: usize,
    pub nu: String,
    pub potential: String,
}

impl BiorthogonalSystem {
    pub fn ring(&self) -> Ring {
        self.nu.ring()
    }

    pub fn level(&self, n: usize) -> Result<&Level> {
        self.levels.get(n).ok_or(Error::MissingLevel(n))
    }

    pub fn scope(&self) -> Scope {
        Scope {
            levels: self.max_level,
            depth: self.depth,
            nu: self.nu.to_string(),
            potential: self.potential.describe(),
        }
    }
}

fn shifted_level(ring: Ring, n: usize, nu: &Coefficient) -> Coefficient {
    &ring.int(n as i64) + nu
}

fn degenerate(which: &'static str, n: usize, j: usize, nu: &Coefficient) -> Error {
    Error::DegenerateDeterminant { which, n, j, nu: nu.to_string() }
}

/// `c_{n,j}^±` from the coupled recursion
/// `c_{n,j}^± = ±Σ_k υ_k((j−n−ν)c_{n,j−k}^± + (n+ν)c_{n,j−k}^∓) / (j(2n+2ν−j))`.
pub fn build_dual_polynomials(
    n: usize,
    u: &Superpotential,
    nu: &Coefficient,
) -> Result<SectorPair<DualPolynomial>> {
    let ring = u.ring().join(nu.ring())?;
    let m = shifted_level(ring, n, nu);
    let two_m = m.mul_int(2);
    let mut plus = vec![ring.one()];
    let mut minus = vec![ring.one()];
    for j in 1..=n {
        let det = (&two_m - &ring.int(j as i64)).mul_int(j as i64);
        if det.is_zero() {
            return Err(degenerate("j(2n+2ν−j)", n, j, nu));
        }
        let lead = &ring.int(j as i64) - &m; // j − n − ν
        let mut sp = ring.zero();
        let mut sm = ring.zero();
        for k in 1..=j {
            let ups = u.upsilon(k)?;
            if ups.is_zero() {
                continue;
            }
            let (p, q) = (&plus[j - k], &minus[j - k]);
            sp = &sp + &(&ups * &(&(&lead * p) + &(&m * q)));
            sm = &sm + &(&ups * &(&(&lead * q) + &(&m * p)));
        }
        plus.push(sp.try_div(&det)?);
        minus.push((-&sm).try_div(&det)?);
    }
    Ok(SectorPair::new(
        DualPolynomial { level: n, sector: SectorSign::Plus, c: plus },
        DualPolynomial { level: n, sector: SectorSign::Minus, c: minus },
    ))
}

/// `λ_n^±(k) = ±Σ_{j=0}^{n} υ_{k+n−j} c_{n,j}^±`.
///
/// For a polynomial `U` the sum is exact and vanishes past `k = K`; for a
/// truncated `U` only `k ≤ K − n` is determined.
pub fn build_inhomogeneity(
    n: usize,
    chi: &SectorPair<DualPolynomial>,
    u: &Superpotential,
) -> Result<SectorPair<Inhomogeneity>> {
    for s in SectorSign::BOTH {
        let d = chi.get(s);
        if d.level != n {
            return Err(Error::LevelMismatch { expected: n, found: d.level });
        }
        if d.sector != s {
            return Err(Error::SectorMismatch);
        }
    }
    let ring = u.ring().join(chi.plus.c[0].ring())?;
    let kmax = u.order();
    let (count, trunc) = if u.is_exact() {
        (kmax, None)
    } else {
        if kmax < n + 1 {
            return Err(Error::InsufficientTruncation { needed: n + 1, available: kmax });
        }
        (kmax - n, Some((kmax - n) as i64))
    };
    SectorPair::try_from_fn(|s| {
        let c = &chi.get(s).c;
        let lambda = (1..=count)
            .map(|k| {
                let mut acc = ring.zero();
                for (j, cj) in c.iter().enumerate() {
                    if let Some(ups) = u.known(k + n - j) {
                        acc = &acc + &(ups * cj);
                    }
                }
                if s == SectorSign::Minus {
                    acc = -&acc;
                }
                acc
            })
            .collect();
        Ok(Inhomogeneity { level: n, sector: s, lambda, trunc_order: trunc, ring })
    })
}

/// `a_{n,j}^±` from the coupled recursion
/// `a_{n,j}^± = ∓Σ_k υ_k((n+j+ν)a_{n,j−k}^± − (n+ν)a_{n,j−k}^∓) / (j(2n+2ν+j))`.
pub fn build_eigenfunction(
    n: usize,
    u: &Superpotential,
    nu: &Coefficient,
    depth: usize,
) -> Result<SectorPair<Eigenfunction>> {
    let ring = u.ring().join(nu.ring())?;
    if !u.is_exact() && depth > u.order() {
        return Err(Error::InsufficientTruncation { needed: depth, available: u.order() });
    }
    let m = shifted_level(ring, n, nu);
    let two_m = m.mul_int(2);
    let mut plus = vec![ring.one()];
    let mut minus = vec![ring.one()];
    for j in 1..=depth {
        let jj = ring.int(j as i64);
        let det = (&two_m + &jj).mul_int(j as i64);
        if det.is_zero() {
            return Err(degenerate("j(2n+2ν+j)", n, j, nu));
        }
        let lead = &m + &jj; // n + j + ν
        let mut sp = ring.zero();
        let mut sm = ring.zero();
        for k in 1..=j.min(u.order()) {
            let ups = u.upsilon(k)?;
            if ups.is_zero() {
                continue;
            }
            let (p, q) = (&plus[j - k], &minus[j - k]);
            sp = &sp + &(&ups * &(&(&lead * p) - &(&m * q)));
            sm = &sm + &(&ups * &(&(&lead * q) - &(&m * p)));
        }
        plus.push((-&sp).try_div(&det)?);
        minus.push(sm.try_div(&det)?);
    }
    Ok(SectorPair::new(
        Eigenfunction { level: n, sector: SectorSign::Plus, a: plus },
        Eigenfunction { level: n, sector: SectorSign::Minus, a: minus },
    ))
}

fn find_level<T, F>(items: &[T], level: usize, key: F) -> Result<&T>
where
    F: Fn(&T) -> usize,
{
    items.iter().find(|d| key(d) == level).ok_or(Error::MissingLevel(level))
}

fn common_sector<T, F>(items: &[T], sector: F) -> Result<SectorSign>
where
    F: Fn(&T) -> SectorSign,
{
    let s = items.first().map(&sector).ok_or(Error::InvalidArgument("no inputs".into()))?;
    if items.iter().any(|d| sector(d) != s) {
        return Err(Error::SectorMismatch);
    }
    Ok(s)
}

/// Forward substitution of `Σ_{j=0}^{m} c_{n+m,m−j} a_{n,j} = δ_{m0}`.
pub fn psi_from_duals_triangular(
    n: usize,
    duals: &[DualPolynomial],
    depth: usize,
) -> Result<Eigenfunction> {
    let sector = common_sector(duals, |d| d.sector)?;
    let mut a: Vec<Coefficient> = Vec::with_capacity(depth + 1);
    for m in 0..=depth {
        let d = find_level(duals, n + m, |d| d.level)?;
        let ring = d.c[0].ring();
        let mut acc = if m == 0 { ring.one() } else { ring.zero() };
        for (j, aj) in a.iter().enumerate() {
            acc = &acc - &(&d.c[m - j] * aj);
        }
        a.push(acc.try_div(&d.c[0])?);
    }
    Ok(Eigenfunction { level: n, sector, a })
}

/// Determinant by Gaussian elimination (exact pivot search for rationals,
/// largest-magnitude pivot for floats).
pub fn determinant(mut m: Vec<Vec<Coefficient>>, ring: Ring) -> Result<Coefficient> {
    let size = m.len();
    let mut det = ring.one();
    for col in 0..size {
        let pivot = match ring {
            Ring::Rational => (col..size).find(|&r| !m[r][col].is_zero()),
            Ring::Float { .. } => (col..size)
                .filter(|&r| !m[r][col].is_zero())
                .max_by(|&a, &b| m[a][col].to_f64().abs().total_cmp(&m[b][col].to_f64().abs())),
        };
        let Some(p) = pivot else {
            return Ok(ring.zero());
        };
        if p != col {
            m.swap(p, col);
            det = -&det;
        }
        let piv = m[col][col].clone();
        det = &det * &piv;
        for r in col + 1..size {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].try_div(&piv)?;
            for c in col..size {
                let delta = &factor * &m[col][c];
                m[r][c] = &m[r][c] - &delta;
            }
        }
    }
    Ok(det)
}

/// `(−1)^j det[x_{r, r−i}]` for `r = 1..=j`, `i = 0..j`, where `entry(r, d)`
/// supplies `x_{r,d}` (with `d = 0` on the superdiagonal).
fn signed_minor<F>(j: usize, ring: Ring, entry: F) -> Result<Coefficient>
where
    F: Fn(usize, usize) -> Result<Coefficient>,
{
    if j == 0 {
        return Ok(ring.one());
    }
    let mut rows = Vec::with_capacity(j);
    for r in 1..=j {
        let mut row = Vec::with_capacity(j);
        for i in 0..j {
            row.push(if r >= i { entry(r, r - i)? } else { ring.zero() });
        }
        rows.push(row);
    }
    let d = determinant(rows, ring)?;
    Ok(if j % 2 == 1 { -&d } else { d })
}

/// `ψ_n` from the minors of the `c`-matrix of levels `n+1..=n+J`.
pub fn psi_by_minors(n: usize, duals: &[DualPolynomial], depth: usize) -> Result<LaurentSeries> {
    let first = find_level(duals, n + 1.min(depth), |d| d.level)?;
    let ring = first.c[0].ring();
    common_sector(duals, |d| d.sector)?;
    let coeffs = (0..=depth)
        .map(|j| {
            signed_minor(j, ring, |r, d| {
                let dual = find_level(duals, n + r, |x| x.level)?;
                Ok(dual.c[d].clone())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    LaurentSeries::truncated(ring, n as i64, coeffs, (n + depth) as i64)
}

/// `χ_n` from the minors of the `a`-matrix of levels `0..n` (each to depth ≥ its distance from `n`).
pub fn chi_by_minors(n: usize, eigen: &[Eigenfunction], ring: Ring) -> Result<LaurentSeries> {
    if n > 0 {
        common_sector(eigen, |e| e.sector)?;
    }
    let coeffs = (0..=n)
        .map(|j| {
            signed_minor(j, ring, |r, d| {
                let ef = find_level(eigen, n - r, |e| e.level)?;
                ef.a.get(d).cloned().ok_or(Error::InsufficientTruncation { needed: d, available: ef.depth() })
            })
        })
        .collect::<Result<Vec<_>>>()?;
    LaurentSeries::exact(ring, -(n as i64), coeffs)
}

/// Inputs accepted by [`determinant_oracles`].
pub enum OracleInput<'a> {
    /// Dual polynomials for levels `n+1..=n+J`; yields `ψ_n` to depth `J`.
    Duals(&'a [DualPolynomial]),
    /// Eigenfunctions for levels `0..n`; yields `χ_n`.
    Eigenfunctions(&'a [Eigenfunction], Ring),
}

pub fn determinant_oracles(n: usize, depth: usize, input: OracleInput<'_>) -> Result<LaurentSeries> {
    match input {
        OracleInput::Duals(d) => psi_by_minors(n, d, depth),
        OracleInput::Eigenfunctions(e, ring) => chi_by_minors(n, e, ring),
    }
}

/// `V_± = −U² ± z U'`.
pub fn potential_series(u: &Superpotential, sector: SectorSign) -> Result<LaurentSeries> {
    let us = u.as_series();
    let sq = us.mul(&us)?;
    let du = us.euler_derivative();
    let du = if sector == SectorSign::Plus { du } else { du.neg() };
    du.sub(&sq)
}

/// `(z d/dz + shift + sign·U) f`.
pub fn intertwine(
    f: &LaurentSeries,
    u: &Superpotential,
    shift: &Coefficient,
    sign: SectorSign,
) -> Result<LaurentSeries> {
    let uf = u.as_series().mul(f)?;
    let uf = if sign == SectorSign::Plus { uf } else { uf.neg() };
    f.euler_derivative().add(&f.scale(shift)?)?.add(&uf)
}

fn align(a: &LaurentSeries, b: &LaurentSeries) -> (LaurentSeries, LaurentSeries) {
    match (a.trunc_order(), b.trunc_order()) {
        (None, None) => (a.clone(), b.clone()),
        (x, y) => {
            let t = x.unwrap_or(i64::MAX).min(y.unwrap_or(i64::MAX));
            (a.truncate(t), b.truncate(t))
        }
    }
}

/// `H_± f` (or `H̃_± f` when `dual`), computed through the factorization
/// `(z d/dz + ν ∓ U)(z d/dz + ν ± U)` and cross-checked against the expanded
/// form `(z d/dz + ν)² + V_±`.
pub fn hamiltonian_apply(
    f: &LaurentSeries,
    u: &Superpotential,
    nu: &Coefficient,
    sector: SectorSign,
    dual: bool,
) -> Result<LaurentSeries> {
    let shift = if dual { -nu } else { nu.clone() };
    let inner = intertwine(f, u, &shift, sector)?;
    let factored = intertwine(&inner, u, &shift, sector.flip())?;

    let df = f.euler_derivative().add(&f.scale(&shift)?)?;
    let d2f = df.euler_derivative().add(&df.scale(&shift)?)?;
    let expanded = d2f.add(&potential_series(u, sector)?.mul(f)?)?;

    let (a, b) = align(&factored, &expanded);
    if a != b {
        return Err(Error::Inconsistent(format!(
            "factored and expanded Hamiltonian disagree: {a} vs {b}"
        )));
    }
    Ok(a)
}

/// Build every level `0..=max_level` in both sectors, eigenfunctions to `depth`.
pub fn build_system(
    u: &Superpotential,
    nu: &Coefficient,
    max_level: usize,
    depth: usize,
) -> Result<BiorthogonalSystem> {
    build_system_with(u, nu, max_level, depth, Execution::default())
}

pub fn build_system_with(
    u: &Superpotential,
    nu: &Coefficient,
    max_level: usize,
    depth: usize,
    exec: Execution,
) -> Result<BiorthogonalSystem> {
    u.ring().join(nu.ring())?;
    let nu = nu.clone();
    let levels = exec.try_map((0..=max_level).collect(), |n| -> Result<Level> {
        let chi = build_dual_polynomials(n, u, &nu)?;
        let lambda = build_inhomogeneity(n, &chi, u)?;
        let psi = build_eigenfunction(n, u, &nu, depth)?;
        Ok(Level { n, chi, lambda, psi })
    })?;
    Ok(BiorthogonalSystem { nu, potential: u.clone(), max_level, depth, levels })
}
