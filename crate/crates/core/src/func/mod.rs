//! Total and partial Boolean functions as packed truth tables.
//!
//! Input index `i` encodes the assignment whose variable `x_1` is the least
//! significant bit of `i`, `x_2` the next, and so on. Variables are 0-based
//! in the API: variable `j` is bit `j` of the index.

mod ops;
mod spec_file;
mod spectrum;
pub mod zoo;

pub use spec_file::{FnSpec, SpecKind};
pub use spectrum::{JuntaSymmetricSpec, SymmetricSpectrum};

use crate::bits::BitTable;
use crate::error::{Error, Result};
use std::fmt;

/// Default upper bound on truth-table arity.
pub const DEFAULT_MAX_ARITY: usize = 24;

/// Size limits applied when building functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_arity: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_arity: DEFAULT_MAX_ARITY,
        }
    }
}

impl Limits {
    pub fn check(&self, arity: usize) -> Result<()> {
        if arity > self.max_arity {
            Err(Error::ArityBound {
                arity,
                bound: self.max_arity,
            })
        } else {
            Ok(())
        }
    }
}

/// Hamming weight of an input index.
#[inline]
pub fn weight(x: usize) -> usize {
    x.count_ones() as usize
}

/// A partial Boolean function `{0,1}^n -> {0,1,*}`.
///
/// `values` is always zero outside `defined`, so two functions are equal
/// exactly when their tables are bit-equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartialFn {
    arity: usize,
    defined: BitTable,
    values: BitTable,
}

/// A total Boolean function.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    arity: usize,
    table: BitTable,
}

impl TruthTable {
    pub fn from_fn(arity: usize, f: impl FnMut(usize) -> bool) -> Result<Self> {
        Limits::default().check(arity)?;
        Ok(Self {
            arity,
            table: BitTable::from_fn(1 << arity, f),
        })
    }

    pub fn from_bits(arity: usize, table: BitTable) -> Result<Self> {
        Limits::default().check(arity)?;
        if table.len() != 1 << arity {
            return Err(Error::InvalidArgument(format!(
                "table has {} entries, arity {arity} needs {}",
                table.len(),
                1usize << arity
            )));
        }
        Ok(Self { arity, table })
    }

    /// Function whose table is the low `2^arity` bits of `bits`.
    pub fn from_u64(arity: usize, bits: u64) -> Self {
        assert!(arity <= 6);
        Self {
            arity,
            table: BitTable::from_fn(1 << arity, |i| bits >> i & 1 == 1),
        }
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity
    }

    #[inline]
    pub fn eval(&self, x: usize) -> bool {
        self.table.get(x)
    }

    pub fn table(&self) -> &BitTable {
        &self.table
    }

    pub fn to_partial(&self) -> PartialFn {
        PartialFn::from(self.clone())
    }
}

impl From<TruthTable> for PartialFn {
    fn from(t: TruthTable) -> Self {
        PartialFn {
            arity: t.arity,
            defined: BitTable::ones(1 << t.arity),
            values: t.table,
        }
    }
}

impl PartialFn {
    /// Builds a function from a closure returning `None` for `*`.
    pub fn from_fn(arity: usize, mut f: impl FnMut(usize) -> Option<bool>) -> Result<Self> {
        Self::from_fn_with(Limits::default(), arity, |x| f(x))
    }

    pub fn from_fn_with(
        limits: Limits,
        arity: usize,
        mut f: impl FnMut(usize) -> Option<bool>,
    ) -> Result<Self> {
        limits.check(arity)?;
        let size = 1usize << arity;
        let mut defined = BitTable::zeros(size);
        let mut values = BitTable::zeros(size);
        for x in 0..size {
            if let Some(v) = f(x) {
                defined.set(x, true);
                values.set(x, v);
            }
        }
        Ok(Self {
            arity,
            defined,
            values,
        })
    }

    /// Builds from raw tables, canonicalising `values` against `defined`.
    pub fn from_tables(arity: usize, defined: BitTable, values: BitTable) -> Result<Self> {
        Limits::default().check(arity)?;
        let size = 1usize << arity;
        if defined.len() != size || values.len() != size {
            return Err(Error::InvalidArgument(format!(
                "tables must have {size} entries for arity {arity}"
            )));
        }
        let values = values.and(&defined);
        Ok(Self {
            arity,
            defined,
            values,
        })
    }

    pub fn constant(arity: usize, v: bool) -> Result<Self> {
        Self::from_fn(arity, |_| Some(v))
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of points in `{0,1}^n`.
    #[inline]
    pub fn size(&self) -> usize {
        1 << self.arity
    }

    /// Value at `x`, `None` for `*`.
    #[inline]
    pub fn eval(&self, x: usize) -> Option<bool> {
        if self.defined.get(x) {
            Some(self.values.get(x))
        } else {
            None
        }
    }

    #[inline]
    pub fn is_defined(&self, x: usize) -> bool {
        self.defined.get(x)
    }

    pub fn defined(&self) -> &BitTable {
        &self.defined
    }

    pub fn values(&self) -> &BitTable {
        &self.values
    }

    /// `|Dom(f)|`.
    pub fn domain_size(&self) -> usize {
        self.defined.count_ones()
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.defined.iter_ones()
    }

    pub fn is_total(&self) -> bool {
        self.defined.all()
    }

    pub fn to_total(&self) -> Option<TruthTable> {
        self.is_total().then(|| TruthTable {
            arity: self.arity,
            table: self.values.clone(),
        })
    }

    /// The common value if `f` is constant on its (non-empty) domain.
    pub fn constant_value(&self) -> Option<bool> {
        let ones = self.values.count_ones();
        let dom = self.domain_size();
        if dom == 0 {
            None
        } else if ones == 0 {
            Some(false)
        } else if ones == dom {
            Some(true)
        } else {
            None
        }
    }

    /// True when `f` takes both values on its domain.
    pub fn is_non_constant(&self) -> bool {
        let ones = self.values.count_ones();
        ones > 0 && ones < self.domain_size()
    }
}

struct Star(Option<bool>);

impl fmt::Display for Star {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(true) => f.write_str("1"),
            Some(false) => f.write_str("0"),
            None => f.write_str("*"),
        }
    }
}

impl fmt::Debug for PartialFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialFn({}; ", self.arity)?;
        if self.arity <= 6 {
            for x in 0..self.size() {
                write!(f, "{}", Star(self.eval(x)))?;
            }
        } else {
            write!(f, "|Dom|={}", self.domain_size())?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable({}; {})", self.arity, self.table.to_hex())
    }
}
