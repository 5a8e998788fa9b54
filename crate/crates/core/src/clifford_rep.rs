//! Exact unitary representations of the classical Clifford algebra generators.

use crate::linalg_exact::{GaussianInt, GaussianMatrix};
use crate::verifier::{CheckBuilder, VerificationReport};

/// `n` pairwise anticommuting unitary matrices squaring to `−I`, in dimension
/// `2^⌊n/2⌋` (a Hurwitz-Radon family).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaFamily {
    pub n: usize,
    pub dim: usize,
    pub matrices: Vec<GaussianMatrix>,
}

/// Doubles the dimension of a `(2m+1)`-member family, returning `2m+3` members:
/// `diag(γ, −γ)` for each input, then `[[0, I], [−I, 0]]` and `[[0, iI], [iI, 0]]`.
fn double_family(family: &[GaussianMatrix], dim: usize) -> Vec<GaussianMatrix> {
    let z = GaussianMatrix::diagonal(&[GaussianInt::ONE, GaussianInt::new(-1, 0)]);
    let j = GaussianMatrix::from_real(&[&[0, 1], &[-1, 0]]).expect("2x2");
    let k = GaussianMatrix::from_pairs(&[vec![(0, 0), (0, 1)], vec![(0, 1), (0, 0)]]).expect("2x2");
    let id = GaussianMatrix::identity(dim);
    let mut out: Vec<GaussianMatrix> = family.iter().map(|g| z.kron(g)).collect();
    out.push(j.kron(&id));
    out.push(k.kron(&id));
    out
}

/// Canonical Hurwitz-Radon family with `n` members.
///
/// Starts from `{[[i]]}` in dimension 1 and doubles until the family has at
/// least `n` members, then keeps the first `n`. The first doubling yields
/// `{diag(i,−i), [[0,1],[−1,0]], [[0,i],[i,0]]}`.
pub fn gamma_family(n: usize) -> GammaFamily {
    let levels = n / 2;
    let mut dim = 1;
    let mut family = vec![GaussianMatrix::scalar_identity(1, GaussianInt::I)];
    for _ in 0..levels {
        family = double_family(&family, dim);
        dim *= 2;
        debug_assert!(verify_hr_family(&family).passed);
    }
    family.truncate(n);
    GammaFamily {
        n,
        dim,
        matrices: family,
    }
}

/// Checks unitarity, `A² = −I` and pairwise anticommutation, exactly.
pub fn verify_hr_family(mats: &[GaussianMatrix]) -> VerificationReport {
    verify_hr_family_verbose(mats, false)
}

pub fn verify_hr_family_verbose(mats: &[GaussianMatrix], verbose: bool) -> VerificationReport {
    let mut report = VerificationReport::new();

    let mut shape = CheckBuilder::new("square matrices of equal size", verbose);
    if let Some(first) = mats.first() {
        for (i, m) in mats.iter().enumerate() {
            if !m.is_square() || m.rows() != first.rows() {
                shape.violation(format!("matrix {} is {}x{}", i + 1, m.rows(), m.cols()));
            }
        }
    }
    let shapes_ok = shape.passed();
    report.push(shape);
    if !shapes_ok {
        return report;
    }

    let minus_one = GaussianInt::new(-1, 0);
    let mut unitary = CheckBuilder::new("unitary", verbose);
    let mut squares = CheckBuilder::new("squares to -I", verbose);
    for (i, m) in mats.iter().enumerate() {
        if !m.is_unitary() {
            unitary.violation(format!("matrix {} is not unitary", i + 1));
        }
        if !m.mul_square(m).is_scalar_identity(minus_one) {
            squares.violation(format!("matrix {} does not square to -I", i + 1));
        }
    }
    report.push(unitary);
    report.push(squares);

    let mut anti = CheckBuilder::new("pairwise anticommutation", verbose);
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            let sum = mats[i]
                .mul_square(&mats[j])
                .add(&mats[j].mul_square(&mats[i]))
                .expect("equal sizes");
            if !sum.is_zero() {
                anti.violation(format!("pair ({}, {}) does not anticommute", i + 1, j + 1));
            }
        }
    }
    report.push(anti);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gi(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    #[test]
    fn single_member_is_i() {
        let f = gamma_family(1);
        assert_eq!(f.dim, 1);
        assert_eq!(f.matrices, vec![GaussianMatrix::scalar_identity(1, GaussianInt::I)]);
    }

    #[test]
    fn empty_family() {
        let f = gamma_family(0);
        assert_eq!((f.n, f.dim, f.matrices.len()), (0, 1, 0));
        assert!(verify_hr_family(&f.matrices).passed);
    }

    #[test]
    fn three_member_base_family() {
        let f = gamma_family(3);
        assert_eq!(f.dim, 2);
        let expected = vec![
            GaussianMatrix::diagonal(&[gi(0, 1), gi(0, -1)]),
            GaussianMatrix::from_real(&[&[0, 1], &[-1, 0]]).unwrap(),
            GaussianMatrix::from_pairs(&[vec![(0, 0), (0, 1)], vec![(0, 1), (0, 0)]]).unwrap(),
        ];
        assert_eq!(f.matrices, expected);
        // relations by direct multiplication of every ordered pair
        let minus_i2 = GaussianMatrix::scalar_identity(2, gi(-1, 0));
        for (a, x) in expected.iter().enumerate() {
            for (b, y) in expected.iter().enumerate() {
                let xy = x.mat_mul(y).unwrap();
                if a == b {
                    assert_eq!(xy, minus_i2);
                } else {
                    assert_eq!(xy, y.mat_mul(x).unwrap().neg());
                }
            }
        }
    }

    #[test]
    fn five_members_in_dim_four() {
        let f = gamma_family(5);
        assert_eq!((f.matrices.len(), f.dim), (5, 4));
        let minus = GaussianMatrix::scalar_identity(4, gi(-1, 0));
        for i in 0..5 {
            for j in 0..5 {
                let xy = f.matrices[i].mat_mul(&f.matrices[j]).unwrap();
                let yx = f.matrices[j].mat_mul(&f.matrices[i]).unwrap();
                if i == j {
                    assert_eq!(xy, minus);
                } else {
                    assert!(xy.add(&yx).unwrap().is_zero(), "({i},{j})");
                }
            }
        }
    }

    #[test]
    fn families_up_to_nine() {
        for n in 0..=9 {
            let f = gamma_family(n);
            assert_eq!(f.matrices.len(), n);
            assert_eq!(f.dim, 1 << (n / 2));
            assert!(f.matrices.iter().all(|m| m.rows() == f.dim && m.has_unit_entries()));
            assert!(verify_hr_family(&f.matrices).passed, "n={n}");
        }
    }

    #[test]
    fn doubling_preserves_relations_at_every_level() {
        let mut family = vec![GaussianMatrix::scalar_identity(1, GaussianInt::I)];
        let mut dim = 1;
        for _ in 0..4 {
            assert!(verify_hr_family(&family).passed);
            family = double_family(&family, dim);
            dim *= 2;
        }
        assert!(verify_hr_family(&family).passed);
        assert_eq!(family.len(), 9);
    }

    #[test]
    fn even_member_family_passes() {
        assert!(verify_hr_family(&gamma_family(4).matrices).passed);
    }

    #[test]
    fn identity_is_rejected() {
        let report = verify_hr_family(&[GaussianMatrix::identity(2)]);
        assert!(!report.passed);
        assert!(!report.check("squares to -I").unwrap().passed);
    }

    #[test]
    fn commuting_duplicates_are_rejected() {
        let d = GaussianMatrix::diagonal(&[gi(0, 1), gi(0, -1)]);
        let report = verify_hr_family(&[d.clone(), d]);
        let anti = report.check("pairwise anticommutation").unwrap();
        assert!(!anti.passed);
        assert_eq!(anti.witness.as_deref(), Some("pair (1, 2) does not anticommute"));
    }

    #[test]
    fn mixed_sizes_are_rejected() {
        let report = verify_hr_family(&[GaussianMatrix::identity(2), GaussianMatrix::identity(4)]);
        assert!(!report.passed);
    }
}
