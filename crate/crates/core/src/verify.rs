//! Structural checks on a built [`BiorthogonalSystem`].
//!
//! Every check compares coefficients: exactly in the rational ring, to
//! [`FLOAT_REL_TOL`](crate::coefficient::FLOAT_REL_TOL) relative in the float ring.

use serde::Serialize;

use crate::builder::{hamiltonian_apply, intertwine, BiorthogonalSystem, Scope};
use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::series::{LaurentSeries, SectorSign};

/// At most this many individual failures are kept per report.
pub const MAX_RECORDED_FAILURES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub indices: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub scope: Scope,
    pub status: Status,
    /// Largest `|expected − actual|` seen (as f64); 0 for an exact pass.
    pub worst_defect: f64,
    /// Number of mismatches, including ones beyond the recorded list.
    pub failure_count: usize,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// One comparison outcome.
pub(crate) struct Entry {
    pub indices: String,
    pub expected: Coefficient,
    pub actual: Coefficient,
}

/// Accumulates comparisons into a [`VerificationReport`].
#[derive(Default)]
pub(crate) struct ReportBuilder {
    worst: f64,
    count: usize,
    failures: Vec<Failure>,
}

impl ReportBuilder {
    pub fn push(&mut self, e: Entry) -> Result<()> {
        let (ok, defect) = e.actual.agrees_with(&e.expected)?;
        self.worst = self.worst.max(defect);
        if !ok {
            self.count += 1;
            if self.failures.len() < MAX_RECORDED_FAILURES {
                self.failures.push(Failure {
                    indices: e.indices,
                    expected: e.expected.to_string(),
                    actual: e.actual.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn expect_eq(&mut self, indices: impl Into<String>, expected: Coefficient, actual: Coefficient) -> Result<()> {
        self.push(Entry { indices: indices.into(), expected, actual })
    }

    /// `lhs − rhs` must vanish wherever both are determined.
    pub fn expect_series_eq(&mut self, label: &str, lhs: &LaurentSeries, rhs: &LaurentSeries) -> Result<()> {
        for e in vanishing(label, &lhs.sub(rhs)?) {
            self.push(e)?;
        }
        Ok(())
    }

    pub fn finish(self, name: &str, scope: Scope) -> VerificationReport {
        VerificationReport {
            check_name: name.to_string(),
            scope,
            status: if self.count == 0 { Status::Pass } else { Status::Fail },
            worst_defect: self.worst,
            failure_count: self.count,
            failures: self.failures,
        }
    }
}

fn collect(
    name: &str,
    sys: &BiorthogonalSystem,
    chunks: Vec<Vec<Entry>>,
) -> Result<VerificationReport> {
    let mut t = ReportBuilder::default();
    for e in chunks.into_iter().flatten() {
        t.push(e)?;
    }
    Ok(t.finish(name, sys.scope()))
}

/// Every stored coefficient of `residual` must vanish.
fn vanishing(label: &str, residual: &LaurentSeries) -> Vec<Entry> {
    let zero = residual.ring().zero();
    residual
        .iter()
        .map(|(e, c)| Entry {
            indices: format!("{label} e={e}"),
            expected: zero.clone(),
            actual: c.clone(),
        })
        .collect()
}

fn kron(sys: &BiorthogonalSystem, k: usize, n: usize) -> Coefficient {
    if k == n {
        sys.ring().one()
    } else {
        sys.ring().zero()
    }
}

fn level_shift(sys: &BiorthogonalSystem, n: usize) -> Coefficient {
    &sys.ring().int(n as i64) + &sys.nu
}

/// Series views of `χ_n^s`, `ψ_n^s` prepared once per check.
struct Views {
    chi: Vec<[LaurentSeries; 2]>,
    psi: Vec<[LaurentSeries; 2]>,
}

fn idx(s: SectorSign) -> usize {
    match s {
        SectorSign::Plus => 0,
        SectorSign::Minus => 1,
    }
}

impl Views {
    fn new(sys: &BiorthogonalSystem) -> Self {
        let chi = sys
            .levels
            .iter()
            .map(|l| [l.chi.plus.as_series(), l.chi.minus.as_series()])
            .collect();
        let psi = sys
            .levels
            .iter()
            .map(|l| [l.psi.plus.as_series(), l.psi.minus.as_series()])
            .collect();
        Views { chi, psi }
    }

    fn chi(&self, n: usize, s: SectorSign) -> &LaurentSeries {
        &self.chi[n][idx(s)]
    }

    fn psi(&self, n: usize, s: SectorSign) -> &LaurentSeries {
        &self.psi[n][idx(s)]
    }
}

fn pairs(sys: &BiorthogonalSystem) -> Vec<(SectorSign, usize)> {
    SectorSign::BOTH.iter().flat_map(|&s| (0..=sys.max_level).map(move |n| (s, n))).collect()
}

/// `⟨χ_k^s, ψ_n^s⟩ = δ_{kn}` for all `k, n ≤ N`.
pub fn check_biorthonormality(sys: &BiorthogonalSystem) -> Result<VerificationReport> {
    check_biorthonormality_with(sys, Execution::default())
}

pub fn check_biorthonormality_with(
    sys: &BiorthogonalSystem,
    exec: Execution,
) -> Result<VerificationReport> {
    let v = Views::new(sys);
    let chunks = exec.try_map(pairs(sys), |(s, n)| -> Result<Vec<Entry>> {
        (0..=sys.max_level)
            .map(|k| {
                Ok(Entry {
                    indices: format!("s={s} k={k} n={n}"),
                    expected: kron(sys, k, n),
                    actual: v.chi(k, s).pairing(v.psi(n, s))?,
                })
            })
            .collect()
    })?;
    collect("biorthonormality", sys, chunks)
}

/// Coefficient of `z^p w^{-q}` in `Σ_n χ_n(w) ψ_n(z)` equals `δ_{pq}` for `p, q ≤ P`.
pub fn check_completeness(sys: &BiorthogonalSystem, p_max: usize) -> Result<VerificationReport> {
    if p_max > sys.max_level || p_max > sys.depth {
        return Err(Error::InvalidArgument(format!(
            "completeness window P = {p_max} exceeds N = {} or J = {}",
            sys.max_level, sys.depth
        )));
    }
    let ring = sys.ring();
    let mut chunk = Vec::new();
    for s in SectorSign::BOTH {
        for p in 0..=p_max {
            for q in 0..=p_max {
                let mut acc = ring.zero();
                for n in q..=p.min(sys.max_level) {
                    let l = &sys.levels[n];
                    acc = &acc + &(&l.chi.get(s).c[n - q] * &l.psi.get(s).a[p - n]);
                }
                chunk.push(Entry {
                    indices: format!("s={s} p={p} q={q}"),
                    expected: kron(sys, p, q),
                    actual: acc,
                });
            }
        }
    }
    collect("completeness", sys, vec![chunk])
}

/// `H_s ψ_n^s = (n+ν)² ψ_n^s` on the determined window.
pub fn check_eigen_residual(sys: &BiorthogonalSystem) -> Result<VerificationReport> {
    check_eigen_residual_with(sys, Execution::default())
}

pub fn check_eigen_residual_with(
    sys: &BiorthogonalSystem,
    exec: Execution,
) -> Result<VerificationReport> {
    let v = Views::new(sys);
    let chunks = exec.try_map(pairs(sys), |(s, n)| -> Result<Vec<Entry>> {
        let psi = v.psi(n, s);
        let m = level_shift(sys, n);
        let h = hamiltonian_apply(psi, &sys.potential, &sys.nu, s, false)?;
        let r = h.sub(&psi.scale(&(&m * &m))?)?;
        Ok(vanishing(&format!("s={s} n={n}"), &r))
    })?;
    collect("eigen_residual", sys, chunks)
}

/// `(H̃_s − (n+ν)²) χ_n^s = (z d/dz − ν − sU) Λ_n^s − (n+ν) Λ_n^{−s}`,
/// with the right side supported on positive powers only.
pub fn check_dual_second_order(sys: &BiorthogonalSystem) -> Result<VerificationReport> {
    check_dual_second_order_with(sys, Execution::default())
}

pub fn check_dual_second_order_with(
    sys: &BiorthogonalSystem,
    exec: Execution,
) -> Result<VerificationReport> {
    let v = Views::new(sys);
    let chunks = exec.try_map(pairs(sys), |(s, n)| -> Result<Vec<Entry>> {
        let l = &sys.levels[n];
        let chi = v.chi(n, s);
        let m = level_shift(sys, n);
        let lhs = hamiltonian_apply(chi, &sys.potential, &sys.nu, s, true)?
            .sub(&chi.scale(&(&m * &m))?)?;
        let lam = l.lambda.get(s).as_series();
        let lam_other = l.lambda.get(s.flip()).as_series();
        let rhs = intertwine(&lam, &sys.potential, &(-&sys.nu), s.flip())?
            .sub(&lam_other.scale(&m)?)?;
        let label = format!("s={s} n={n}");
        let mut out = vanishing(&label, &lhs.sub(&rhs)?);
        let ring = sys.ring();
        for (e, c) in rhs.iter().filter(|(e, _)| *e < 1) {
            out.push(Entry {
                indices: format!("{label} rhs support e={e}"),
                expected: ring.zero(),
                actual: c.clone(),
            });
        }
        Ok(out)
    })?;
    collect("dual_second_order", sys, chunks)
}

/// `⟨χ_k^{−s}, (z d/dz + ν + sU) ψ_n^s⟩ = (n+ν) δ_{kn}`.
pub fn check_b_expansion(sys: &BiorthogonalSystem) -> Result<VerificationReport> {
    check_b_expansion_with(sys, Execution::default())
}

pub fn check_b_expansion_with(
    sys: &BiorthogonalSystem,
    exec: Execution,
) -> Result<VerificationReport> {
    let v = Views::new(sys);
    let chunks = exec.try_map(pairs(sys), |(s, n)| -> Result<Vec<Entry>> {
        let lifted = intertwine(v.psi(n, s), &sys.potential, &sys.nu, s)?;
        let m = level_shift(sys, n);
        (0..=sys.max_level)
            .map(|k| {
                let expected = if k == n { m.clone() } else { sys.ring().zero() };
                Ok(Entry {
                    indices: format!("s={s} k={k} n={n}"),
                    expected,
                    actual: v.chi(k, s.flip()).pairing(&lifted)?,
                })
            })
            .collect()
    })?;
    collect("b_expansion", sys, chunks)
}

/// `(n+ν)⟨χ_k^s, ψ_n^s⟩ = (k+ν)⟨χ_k^{−s}, ψ_n^{−s}⟩` for `k ≠ n`, which holds
/// from the first-order equations alone.
pub fn check_orthogonality_by_parts(sys: &BiorthogonalSystem) -> Result<VerificationReport> {
    let v = Views::new(sys);
    let mut chunk = Vec::new();
    for s in SectorSign::BOTH {
        for n in 0..=sys.max_level {
            for k in (0..=sys.max_level).filter(|&k| k != n) {
                let left = &level_shift(sys, n) * &v.chi(k, s).pairing(v.psi(n, s))?;
                let right =
                    &level_shift(sys, k) * &v.chi(k, s.flip()).pairing(v.psi(n, s.flip()))?;
                chunk.push(Entry { indices: format!("s={s} k={k} n={n}"), expected: left, actual: right });
            }
        }
    }
    collect("orthogonality_by_parts", sys, vec![chunk])
}

/// Residuals of the first-order equations for `ψ` and `χ`.
pub fn check_intertwining(sys: &BiorthogonalSystem) -> Result<VerificationReport> {
    let v = Views::new(sys);
    let chunks = Execution::default().try_map(pairs(sys), |(s, n)| -> Result<Vec<Entry>> {
        let m = level_shift(sys, n);
        let u = &sys.potential;
        let psi_res = intertwine(v.psi(n, s), u, &sys.nu, s)?.sub(&v.psi(n, s.flip()).scale(&m)?)?;
        let lam = sys.levels[n].lambda.get(s).as_series();
        let chi_res = intertwine(v.chi(n, s), u, &(-&sys.nu), s)?
            .add(&v.chi(n, s.flip()).scale(&m)?)?
            .sub(&lam)?;
        let mut out = vanishing(&format!("psi s={s} n={n}"), &psi_res);
        out.extend(vanishing(&format!("chi s={s} n={n}"), &chi_res));
        Ok(out)
    })?;
    collect("intertwining", sys, chunks)
}

/// Names of the checks run by [`run_suite`], in order.
pub const SUITE: [&str; 5] =
    ["biorthonormality", "completeness", "eigen_residual", "dual_second_order", "b_expansion"];

/// The five core checks; completeness uses the window `P = min(N, J, p_max)`.
pub fn run_suite(sys: &BiorthogonalSystem, p_max: usize) -> Result<Vec<VerificationReport>> {
    run_suite_with(sys, p_max, Execution::default())
}

pub fn run_suite_with(
    sys: &BiorthogonalSystem,
    p_max: usize,
    exec: Execution,
) -> Result<Vec<VerificationReport>> {
    let p = p_max.min(sys.max_level).min(sys.depth);
    exec.try_map(SUITE.to_vec(), |name| match name {
        "biorthonormality" => check_biorthonormality_with(sys, exec),
        "completeness" => check_completeness(sys, p),
        "eigen_residual" => check_eigen_residual_with(sys, exec),
        "dual_second_order" => check_dual_second_order_with(sys, exec),
        "b_expansion" => check_b_expansion_with(sys, exec),
        _ => unreachable!(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{build_system, Superpotential};
    use crate::coefficient::Ring;

    const Q: Ring = Ring::Rational;

    fn morse(n: usize, j: usize) -> BiorthogonalSystem {
        build_system(&Superpotential::morse(Q.one()), &Q.zero(), n, j).unwrap()
    }

    #[test]
    fn morse_system_passes_suite() {
        let sys = morse(4, 12);
        for r in run_suite(&sys, 4).unwrap() {
            assert!(r.passed(), "{}: {:?}", r.check_name, r.failures);
            assert_eq!(r.worst_defect, 0.0);
        }
        assert!(check_intertwining(&sys).unwrap().passed());
        assert!(check_orthogonality_by_parts(&sys).unwrap().passed());
    }

    #[test]
    fn free_system_passes_suite() {
        let sys = build_system(&Superpotential::free(Q), &Q.ratio(2, 5), 3, 3).unwrap();
        assert!(run_suite(&sys, 3).unwrap().iter().all(VerificationReport::passed));
    }

    #[test]
    fn short_depth_is_an_error() {
        let sys = morse(4, 2);
        assert!(matches!(check_biorthonormality(&sys), Err(Error::UndeterminedPairing { .. })));
        assert!(check_completeness(&sys, 3).is_err());
    }

    #[test]
    fn completeness_first_off_diagonal() {
        // a_{0,1} + c_{1,1} = 0
        let sys = morse(2, 4);
        let l0 = &sys.levels[0];
        let l1 = &sys.levels[1];
        for s in SectorSign::BOTH {
            assert!((&l0.psi.get(s).a[1] + &l1.chi.get(s).c[1]).is_zero());
        }
    }

    #[test]
    fn perturbation_is_detected() {
        let mut sys = morse(3, 6);
        let one = Q.one();
        let c = &mut sys.levels[2].chi.minus.c[1];
        *c = &*c + &one;
        let r = check_biorthonormality(&sys).unwrap();
        assert_eq!(r.status, Status::Fail);
        assert!(r.failure_count > 0);
        assert_eq!(r.failures.len(), r.failure_count.min(MAX_RECORDED_FAILURES));
    }

    #[test]
    fn report_serializes() {
        let r = check_completeness(&morse(2, 2), 2).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["status"], "pass");
        assert_eq!(v["check_name"], "completeness");
    }
}
