//! Partition function `Z[ν] = Σ_{n∈ℤ} e^{−(n+ν)²}` of the spectrum `(n+ν)²`
//! at unit inverse temperature, assembled from one-sided theta sums
//! `θ[ν] = Σ_{n≥0} e^{−n²−2nν}`.
//!
//! At `ν = 0` only the `n ≥ 0` tower survives, giving `Z₀ = θ[0]`; the
//! generic-ν trace tends to `2Z₀ − 1` instead, a jump of `Z₀ − 1`.
//! (`θ[ν]` is a one-sided Jacobi `ϑ₃` at nome `1/e`; no `ϑ₃` machinery is used.)

use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::Execution;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThetaSum {
    pub value: f64,
    /// Number of summed terms `M` (indices `0..M`).
    pub terms: usize,
    /// Rigorous bound on the omitted tail `Σ_{n≥M}`.
    pub tail_bound: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PartitionResult {
    pub nu: f64,
    pub z_value: f64,
    pub theta_plus: f64,
    pub theta_minus: f64,
    pub terms_used: usize,
    pub tail_bound: f64,
    /// Direct two-sided sum, kept as a consistency check.
    pub z_direct: f64,
}

const MAX_TERMS: usize = 1 << 20;

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// `θ[ν]` with tail bound `e^{−M²−2Mν} / (1 − e^{−(2M+1+2ν)}) < tol`.
pub fn theta(nu: f64, tol: f64) -> Result<ThetaSum> {
    check_tol(tol)?;
    if !nu.is_finite() {
        return Err(Error::InvalidArgument(format!("nu must be finite, got {nu}")));
    }
    let term = |n: f64| (-n * n - 2.0 * n * nu).exp();
    let mut sum = 0.0f64;
    for m in 0..MAX_TERMS {
        let mf = m as f64;
        let ratio_exp = 2.0 * mf + 1.0 + 2.0 * nu;
        if ratio_exp > 0.0 {
            let bound = term(mf) / (1.0 - (-ratio_exp).exp());
            if bound < tol {
                if !sum.is_finite() || tol < 4.0 * f64::EPSILON * sum {
                    return Err(Error::ToleranceUnreachable { tol, value: sum });
                }
                return Ok(ThetaSum { value: sum, terms: m, tail_bound: bound });
            }
        }
        sum += term(mf);
        if !sum.is_finite() {
            return Err(Error::ToleranceUnreachable { tol, value: sum });
        }
    }
    Err(Error::ToleranceUnreachable { tol, value: sum })
}

/// `Σ_{|n|≤M} e^{−(n+ν)²}`, smallest terms first.
fn direct_sum(nu: f64, m: usize) -> f64 {
    let m = m as i64;
    let mut terms: Vec<f64> = (-m..=m).map(|n| (-(n as f64 + nu).powi(2)).exp()).collect();
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

/// `Z[ν] = e^{−ν²}(θ[ν] + θ[−ν] − 1)`, cross-checked against the direct
/// two-sided sum to `10·tol`.
pub fn partition_z(nu: f64, tol: f64) -> Result<PartitionResult> {
    check_tol(tol)?;
    let plus = theta(nu, tol / 2.0)?;
    let minus = theta(-nu, tol / 2.0)?;
    let w = (-nu * nu).exp();
    let z_value = w * (plus.value + minus.value - 1.0);
    let terms_used = plus.terms.max(minus.terms);
    let z_direct = direct_sum(nu, terms_used + nu.abs().ceil() as usize + 1);
    if (z_direct - z_value).abs() >= 10.0 * tol {
        return Err(Error::Inconsistent(format!(
            "theta assembly {z_value} and direct sum {z_direct} differ at nu = {nu}"
        )));
    }
    Ok(PartitionResult {
        nu,
        z_value,
        theta_plus: plus.value,
        theta_minus: minus.value,
        terms_used,
        tail_bound: w * (plus.tail_bound + minus.tail_bound),
        z_direct,
    })
}

/// `Z₀ = θ[0]`, the sum over the non-negative tower only.
pub fn z0(tol: f64) -> Result<f64> {
    Ok(theta(0.0, tol)?.value)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiscontinuityRow {
    pub eps: f64,
    pub z: f64,
    /// `Z[ε] − (2Z₀ − 1)`.
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscontinuityReport {
    pub z0: f64,
    /// `lim_{ν→0} Z[ν] = 2Z₀ − 1`.
    pub limit: f64,
    /// `limit − Z₀ = Z₀ − 1`.
    pub jump: f64,
    pub rows: Vec<DiscontinuityRow>,
}

pub fn discontinuity_report(eps_ladder: &[f64], tol: f64) -> Result<DiscontinuityReport> {
    discontinuity_report_with(eps_ladder, tol, Execution::default())
}

pub fn discontinuity_report_with(
    eps_ladder: &[f64],
    tol: f64,
    exec: Execution,
) -> Result<DiscontinuityReport> {
    if let Some(e) = eps_ladder.iter().find(|&&e| !(e > 0.0 && e <= 0.25)) {
        return Err(Error::InvalidArgument(format!("eps must lie in (0, 1/4], got {e}")));
    }
    let z0 = z0(tol)?;
    let limit = 2.0 * z0 - 1.0;
    let rows = exec.try_map(eps_ladder.to_vec(), |eps| -> Result<DiscontinuityRow> {
        let z = partition_z(eps, tol)?.z_value;
        Ok(DiscontinuityRow { eps, z, deviation: z - limit })
    })?;
    Ok(DiscontinuityReport { z0, limit, jump: limit - z0, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_at_zero() {
        let t = theta(0.0, 1e-14).unwrap();
        assert!((t.value - 1.386_318_602_413_326).abs() < 1e-12, "{}", t.value);
        assert!(t.tail_bound < 1e-14);
    }

    #[test]
    fn theta_partial_sums() {
        // M = 1, 2, 3 terms
        let parts: Vec<f64> = (1..=3).map(|m| (0..m).map(|n| (-(n * n) as f64).exp()).sum()).collect();
        assert!((parts[1] - 1.367_879_441).abs() < 1e-9);
        assert!((parts[2] - 1.386_195_080_060).abs() < 1e-11);
    }

    #[test]
    fn theta_large_nu_is_one() {
        assert!((theta(40.0, 1e-12).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bad_tolerances() {
        assert!(matches!(theta(0.0, 0.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(theta(0.0, -1.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(theta(0.0, 1e-20), Err(Error::ToleranceUnreachable { .. })));
    }

    #[test]
    fn half_integer_value() {
        let z = partition_z(0.5, 1e-13).unwrap().z_value;
        let direct: f64 = 2.0 * (0..20).map(|n| (-(n as f64 + 0.5).powi(2)).exp()).sum::<f64>();
        assert!((z - direct).abs() < 1e-12);
        assert!((z - 1.772_270_496_984).abs() < 1e-11);
    }

    #[test]
    fn symmetry_and_periodicity() {
        for nu in [0.1, 0.3, 0.45] {
            let a = partition_z(nu, 1e-13).unwrap().z_value;
            assert!((a - partition_z(-nu, 1e-13).unwrap().z_value).abs() < 1e-12);
            assert!((a - partition_z(nu + 1.0, 1e-13).unwrap().z_value).abs() < 1e-12);
        }
    }

    #[test]
    fn jump_at_zero() {
        let rep = discontinuity_report(&[0.25, 1e-2, 1e-6], 1e-13).unwrap();
        assert!((rep.jump - (rep.z0 - 1.0)).abs() < 1e-15);
        assert!(rep.rows[2].deviation.abs() < 1e-5);
        assert!(rep.rows[0].z > 1.0);
        assert!(discontinuity_report(&[0.3], 1e-12).is_err());
    }
}
