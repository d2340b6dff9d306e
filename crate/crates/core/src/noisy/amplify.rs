use super::oracle::QueryOracle;
use crate::adeg::amplify_eval;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Bias of the majority of `k` independent bits of bias `γ`:
/// `2·Pr[Bin(k, (1+γ)/2) > k/2] - 1`, exact for exact scalars.
pub fn amplify_bias_exact<T: Scalar>(gamma: &T, k: usize) -> Result<T> {
    if k % 2 == 0 {
        return Err(Error::InvalidArgument(format!("majority size must be odd, got {k}")));
    }
    let p = (T::one() + gamma.clone()) / T::from_u8(2).unwrap();
    Ok(T::from_u8(2).unwrap() * amplify_eval(k, &p)? - T::one())
}

/// Majority of `k` fresh queries at bias `γ`; the oracle ledger grows by
/// `kγ²`.
pub fn amplify_bias_sample(oracle: &mut dyn QueryOracle, i: usize, gamma: f64, k: usize) -> Result<bool> {
    if k % 2 == 0 {
        return Err(Error::InvalidArgument(format!("majority size must be odd, got {k}")));
    }
    let mut ones = 0;
    for _ in 0..k {
        ones += oracle.query(i, gamma)? as usize;
    }
    Ok(2 * ones > k)
}

/// Smallest odd `k` whose majority turns bias `gamma` into at least
/// `target`, searched up to `max_k`.
pub fn majority_size_for(gamma: f64, target: f64, max_k: usize) -> Result<(usize, f64)> {
    let mut k = 1;
    while k <= max_k {
        let g = amplify_bias_exact(&gamma, k)?;
        if g >= target {
            return Ok((k, g));
        }
        k += 2;
    }
    Err(Error::InvalidArgument(format!(
        "no majority of at most {max_k} bits lifts bias {gamma} to {target}"
    )))
}
