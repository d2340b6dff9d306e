use super::{Limits, PartialFn};
use crate::error::{Error, Result};
use std::collections::BTreeMap;

impl PartialFn {
    /// `1 - f(x)` on the domain.
    pub fn negate(&self) -> PartialFn {
        PartialFn {
            arity: self.arity,
            defined: self.defined.clone(),
            values: self.values.not().and(&self.defined),
        }
    }

    /// `x -> f(x XOR shift)`.
    pub fn xor_shift(&self, shift: usize) -> Result<PartialFn> {
        if shift >= self.size() {
            return Err(Error::InvalidArgument(format!(
                "shift {shift:#b} out of range for arity {}",
                self.arity
            )));
        }
        PartialFn::from_fn(self.arity, |x| self.eval(x ^ shift))
    }

    /// Moves variable `i` to position `perm[i]`: the result `g` satisfies
    /// `g(y) = f(x)` where `x_i = y_{perm[i]}`.
    pub fn permute(&self, perm: &[usize]) -> Result<PartialFn> {
        let n = self.arity;
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidArgument(format!(
                "{perm:?} is not a permutation of 0..{n}"
            )));
        }
        PartialFn::from_fn(n, |y| {
            let x = (0..n).fold(0, |acc, i| acc | ((y >> perm[i]) & 1) << i);
            self.eval(x)
        })
    }

    /// Fixes the given variables; the remaining ones keep their relative
    /// order and are renumbered from 0.
    pub fn restrict(&self, fixing: &BTreeMap<usize, bool>) -> Result<PartialFn> {
        if let Some((&i, _)) = fixing.iter().find(|(&i, _)| i >= self.arity) {
            return Err(Error::InvalidArgument(format!(
                "fixed variable {i} out of range for arity {}",
                self.arity
            )));
        }
        let free: Vec<usize> = (0..self.arity).filter(|i| !fixing.contains_key(i)).collect();
        let base = fixing
            .iter()
            .filter(|(_, &b)| b)
            .fold(0usize, |acc, (&i, _)| acc | 1 << i);
        PartialFn::from_fn(free.len(), |y| {
            let x = free
                .iter()
                .enumerate()
                .fold(base, |acc, (k, &i)| acc | ((y >> k) & 1) << i);
            self.eval(x)
        })
    }

    /// Keeps only the listed inputs in the domain.
    pub fn restrict_domain(&self, keep: impl IntoIterator<Item = usize>) -> PartialFn {
        let mut defined = crate::bits::BitTable::zeros(self.size());
        for x in keep {
            if self.is_defined(x) {
                defined.set(x, true);
            }
        }
        PartialFn {
            arity: self.arity,
            values: self.values.and(&defined),
            defined,
        }
    }

    /// Generalised composition `f ∘ (g_1, …, g_n)`.
    ///
    /// Inner function `g_i` reads the `i`-th consecutive block of input
    /// variables, blocks laid out from the least significant bit upwards.
    /// The output is `*` when some block is outside `Dom(g_i)` or the tuple
    /// of inner values is outside `Dom(f)`.
    pub fn compose(&self, inner: &[PartialFn]) -> Result<PartialFn> {
        self.compose_with(Limits::default(), inner)
    }

    pub fn compose_with(&self, limits: Limits, inner: &[PartialFn]) -> Result<PartialFn> {
        if inner.len() != self.arity {
            return Err(Error::InvalidArgument(format!(
                "outer arity {} but {} inner functions",
                self.arity,
                inner.len()
            )));
        }
        let total: usize = inner.iter().map(|g| g.arity).sum();
        limits.check(total)?;
        let blocks: Vec<(usize, usize)> = inner
            .iter()
            .scan(0, |off, g| {
                let b = (*off, (1usize << g.arity) - 1);
                *off += g.arity;
                Some(b)
            })
            .collect();
        PartialFn::from_fn_with(limits, total, |x| {
            let mut y = 0usize;
            for (i, (g, &(off, mask))) in inner.iter().zip(&blocks).enumerate() {
                match g.eval((x >> off) & mask) {
                    Some(true) => y |= 1 << i,
                    Some(false) => {}
                    None => return None,
                }
            }
            self.eval(y)
        })
    }

    /// `f ∘ g` with the same inner function in every slot.
    pub fn compose_uniform(&self, g: &PartialFn) -> Result<PartialFn> {
        self.compose(&vec![g.clone(); self.arity])
    }
}
