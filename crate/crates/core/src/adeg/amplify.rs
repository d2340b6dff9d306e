use super::poly::UnivariatePoly;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn binom<T: Scalar>(n: usize, k: usize) -> T {
    (0..k).fold(T::one(), |acc, i| {
        acc * T::from_usize(n - i).unwrap() / T::from_usize(i + 1).unwrap()
    })
}

fn check_odd(m: usize) -> Result<()> {
    if m % 2 == 0 {
        return Err(Error::InvalidArgument(format!("amplification degree must be odd, got {m}")));
    }
    Ok(())
}

/// The majority polynomial `A_m(x) = ∑_{j>m/2} C(m,j) x^j (1-x)^(m-j)`:
/// the probability that most of `m` independent `x`-coins land heads.
/// Returned in monomial form; use [`amplify_eval`] for stable evaluation.
pub fn amplify_poly<T: Scalar>(m: usize) -> Result<UnivariatePoly<T>> {
    check_odd(m)?;
    let mut coeffs = vec![T::zero(); m + 1];
    for j in m / 2 + 1..=m {
        let cj: T = binom(m, j);
        for i in 0..=m - j {
            let term = cj.clone() * binom::<T>(m - j, i);
            coeffs[j + i] = if i % 2 == 0 {
                coeffs[j + i].clone() + term
            } else {
                coeffs[j + i].clone() - term
            };
        }
    }
    Ok(UnivariatePoly::new(coeffs))
}

/// `A_m(x)` evaluated as the Bernstein sum.
pub fn amplify_eval<T: Scalar>(m: usize, x: &T) -> Result<T> {
    check_odd(m)?;
    let y = T::one() - x.clone();
    Ok((m / 2 + 1..=m).fold(T::zero(), |acc, j| {
        acc + binom::<T>(m, j) * x.powu(j as u32) * y.powu((m - j) as u32)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert_eq!(amplify_poly::<f64>(1).unwrap().coeffs(), &[0.0, 1.0]);
        // A_3 = 3x^2 - 2x^3
        assert_eq!(amplify_poly::<f64>(3).unwrap().coeffs(), &[0.0, 0.0, 3.0, -2.0]);
        assert!(amplify_poly::<f64>(4).is_err());
        assert!(amplify_eval::<f64>(0, &0.5).is_err());
    }

    #[test]
    fn half_is_fixed_exactly() {
        let half = Rational::ratio(1, 2);
        for m in (1..30).step_by(2) {
            let a = amplify_poly::<Rational>(m).unwrap();
            assert_eq!(a.degree(), m);
            assert_eq!(a.eval(&half), half);
        }
    }

    #[test]
    fn nine_fold_majority_at_thirds() {
        // Independent oracle: tail of Bin(9, 1/3) counted over all 2^9 outcomes.
        let mut tail = Rational::ratio(0, 1);
        for mask in 0u32..512 {
            let heads = mask.count_ones();
            if heads >= 5 {
                tail += Rational::ratio(1, 3).powu(heads) * Rational::ratio(2, 3).powu(9 - heads);
            }
        }
        let a = amplify_poly::<Rational>(9).unwrap();
        assert_eq!(a.eval(&Rational::ratio(1, 3)), tail);
        let low = amplify_eval::<f64>(9, &(1.0 / 3.0)).unwrap();
        let high = amplify_eval::<f64>(9, &(2.0 / 3.0)).unwrap();
        assert!(low < 0.15 && high > 0.85, "{low} {high}");
        assert!((low + high - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decays_below_exponential_bound() {
        for m in (1..=61).step_by(2) {
            let v = amplify_eval::<f64>(m, &(1.0 / 3.0)).unwrap();
            assert!(v <= (-(m as f64) / 36.0).exp(), "m={m}: {v}");
        }
    }

    proptest! {
        #[test]
        fn maps_unit_interval_into_itself(m in (0usize..20).prop_map(|k| 2 * k + 1), x in 0.0f64..=1.0) {
            let v = amplify_eval(m, &x).unwrap();
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&v));
            // The monomial form cancels badly at high degree.
            if m <= 15 {
                let mono = amplify_poly::<f64>(m).unwrap().eval(&x);
                prop_assert!((mono - v).abs() < 1e-9);
            }
        }
    }
}
