mod common;

use common::*;
use rug::Rational;
use susybi::SectorSign;

fn samples() -> Vec<Vec<Rational>> {
    let mut g = rng();
    (0..3).map(|_| random_upsilon(&mut g, 4)).collect()
}

#[test]
fn nu_zero_rows_match_builder() {
    let zero = Rational::new();
    for ups in samples() {
        compare_table(
            &ups,
            &zero,
            |n, s| table_chi_nu0(n, s, &ups),
            |n, s, k| table_lambda_nu0(n, s, &ups, k),
        )
        .unwrap();
    }
}

#[test]
fn nu_rows_match_builder() {
    for nu in [r(1, 3), r(-1, 5)] {
        for ups in samples() {
            compare_table(
                &ups,
                &nu,
                |n, s| table_chi_nu(n, s, &ups, &nu),
                |n, s, k| table_lambda_nu(n, s, &ups, &nu, k),
            )
            .unwrap();
        }
    }
}

#[test]
fn nu_rows_reduce_to_nu_zero_rows() {
    let zero = Rational::new();
    for ups in samples() {
        for n in 0..=3 {
            for s in SectorSign::BOTH {
                assert_eq!(table_chi_nu(n, s, &ups, &zero), table_chi_nu0(n, s, &ups));
                for k in 1..=6 {
                    assert_eq!(table_lambda_nu(n, s, &ups, &zero, k), table_lambda_nu0(n, s, &ups, k));
                }
            }
        }
    }
}

/// `c_{1,1} = υ_1/(2ν+1)`, not `υ_1/(ν+1)`.
#[test]
fn first_row_denominator() {
    let ups = vec![r(1, 1)];
    let nu = r(1, 3);
    let pot = polynomial(&ups);
    let duals = susybi::build_dual_polynomials(1, &pot, &c(&nu)).unwrap();
    assert_eq!(duals.plus.c[1], c(&r(3, 5)));
    assert_ne!(duals.plus.c[1], c(&r(3, 4)));
}
