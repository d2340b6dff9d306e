use crate::error::{Error, Result};
use crate::func::SymmetricSpectrum;

/// Paturi's parameter: take the value-change position `k` (where
/// `f_k ≠ f_{k+1}`) closest to `n/2`; `γ = k` if `k ≤ n/2`, else `n - k`.
pub fn paturi_gamma(spec: &SymmetricSpectrum) -> Result<usize> {
    if !spec.is_total() {
        return Err(Error::InvalidArgument("paturi_gamma needs a total spectrum".into()));
    }
    let n = spec.arity();
    let k = (0..n)
        .filter(|&k| spec.at(k) != spec.at(k + 1))
        .min_by_key(|&k| (2 * k).abs_diff(n))
        .ok_or_else(|| Error::InvalidArgument("paturi_gamma needs a non-constant spectrum".into()))?;
    Ok(if 2 * k <= n { k } else { n - k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::zoo;

    fn gamma_of(f: crate::func::PartialFn) -> usize {
        paturi_gamma(&SymmetricSpectrum::of(&f).unwrap()).unwrap()
    }

    #[test]
    fn standard_values() {
        for n in 1..=9 {
            assert_eq!(gamma_of(zoo::or(n).unwrap()), 0);
            assert_eq!(gamma_of(zoo::xor(n).unwrap()), n / 2);
            if n % 2 == 1 {
                assert_eq!(gamma_of(zoo::maj(n).unwrap()), n / 2);
            }
        }
    }

    #[test]
    fn rejects_constant_and_partial() {
        assert!(paturi_gamma(&SymmetricSpectrum::total(&[true; 4]).unwrap()).is_err());
        assert!(paturi_gamma(&SymmetricSpectrum::new(vec![Some(false), Some(true), None]).unwrap()).is_err());
    }
}
