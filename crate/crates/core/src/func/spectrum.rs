use super::{weight, PartialFn};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Value profile of a symmetric function: `profile[w]` is the value on
/// inputs of Hamming weight `w`, `None` for `*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymmetricSpectrum {
    profile: Vec<Option<bool>>,
}

impl SymmetricSpectrum {
    pub fn new(profile: Vec<Option<bool>>) -> Result<Self> {
        if profile.is_empty() {
            return Err(Error::InvalidArgument("spectrum needs n + 1 >= 1 entries".into()));
        }
        Ok(Self { profile })
    }

    pub fn total(values: &[bool]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Some(v)).collect())
    }

    /// The total spectrum on `n` variables whose weight-`w` entry is bit `w`
    /// of `bits`.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        Self {
            profile: (0..=n).map(|w| Some(bits >> w & 1 == 1)).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.profile.len() - 1
    }

    pub fn profile(&self) -> &[Option<bool>] {
        &self.profile
    }

    #[inline]
    pub fn at(&self, w: usize) -> Option<bool> {
        self.profile[w]
    }

    pub fn is_total(&self) -> bool {
        self.profile.iter().all(Option::is_some)
    }

    pub fn is_constant(&self) -> bool {
        let mut vals = self.profile.iter().flatten();
        match vals.next() {
            None => true,
            Some(&first) => vals.all(|&v| v == first),
        }
    }

    pub fn to_fn(&self) -> Result<PartialFn> {
        PartialFn::from_fn(self.arity(), |x| self.profile[weight(x)])
    }

    /// Reads the spectrum off a function, if it is symmetric.
    pub fn of(f: &PartialFn) -> Option<Self> {
        let mut profile: Vec<Option<Option<bool>>> = vec![None; f.arity() + 1];
        for x in 0..f.size() {
            let v = f.eval(x);
            match &mut profile[weight(x)] {
                slot @ None => *slot = Some(v),
                Some(prev) if *prev != v => return None,
                _ => {}
            }
        }
        Some(Self {
            profile: profile.into_iter().map(|v| v.flatten()).collect(),
        })
    }
}

/// A `k`-junta symmetric function: the value depends on the assignment to
/// the junta variables and on the Hamming weight of the whole input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JuntaSymmetricSpec {
    arity: usize,
    junta: Vec<usize>,
    /// Indexed by junta assignment `a`, with bit `j` of `a` the value of
    /// variable `junta[j]`.
    table: Vec<SymmetricSpectrum>,
}

impl JuntaSymmetricSpec {
    pub fn new(arity: usize, junta: Vec<usize>, table: Vec<SymmetricSpectrum>) -> Result<Self> {
        let k = junta.len();
        if k > arity {
            return Err(Error::InvalidArgument(format!("junta of size {k} exceeds arity {arity}")));
        }
        let mut sorted = junta.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != k || junta.iter().any(|&j| j >= arity) {
            return Err(Error::InvalidArgument(format!(
                "junta {junta:?} must be distinct variables below {arity}"
            )));
        }
        if table.len() != 1 << k {
            return Err(Error::InvalidArgument(format!(
                "junta of size {k} needs {} spectra, got {}",
                1usize << k,
                table.len()
            )));
        }
        if let Some(s) = table.iter().find(|s| s.arity() != arity) {
            return Err(Error::InvalidArgument(format!(
                "spectrum of length {} does not cover weights 0..={arity}",
                s.arity() + 1
            )));
        }
        Ok(Self {
            arity,
            junta,
            table,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn junta(&self) -> &[usize] {
        &self.junta
    }

    pub fn table(&self) -> &[SymmetricSpectrum] {
        &self.table
    }

    pub fn junta_assignment(&self, x: usize) -> usize {
        self.junta
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &v)| acc | ((x >> v) & 1) << j)
    }

    pub fn eval(&self, x: usize) -> Option<bool> {
        self.table[self.junta_assignment(x)].at(weight(x))
    }

    pub fn to_fn(&self) -> Result<PartialFn> {
        PartialFn::from_fn(self.arity, |x| self.eval(x))
    }

    /// The symmetric function on the `n - k` free variables left after
    /// fixing the junta to `a`.
    pub fn restricted_spectrum(&self, a: usize) -> SymmetricSpectrum {
        let offset = (a as u64).count_ones() as usize;
        let free = self.arity - self.junta.len();
        SymmetricSpectrum {
            profile: (0..=free).map(|w| self.table[a].at(w + offset)).collect(),
        }
    }

    /// Some junta assignment leaves a non-constant symmetric function.
    pub fn is_strong(&self) -> bool {
        (0..self.table.len()).any(|a| !self.restricted_spectrum(a).is_constant())
    }
}
