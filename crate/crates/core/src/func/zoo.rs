//! Named function families.

use super::{weight, JuntaSymmetricSpec, PartialFn, SymmetricSpectrum};
use crate::error::{Error, Result};

pub fn identity() -> PartialFn {
    PartialFn::from_fn(1, |x| Some(x == 1)).unwrap()
}

pub fn or(n: usize) -> Result<PartialFn> {
    PartialFn::from_fn(n, |x| Some(x != 0))
}

pub fn and(n: usize) -> Result<PartialFn> {
    PartialFn::from_fn(n, |x| Some(x == (1 << n) - 1))
}

pub fn xor(n: usize) -> Result<PartialFn> {
    PartialFn::from_fn(n, |x| Some(weight(x) % 2 == 1))
}

/// Strict majority: 1 iff more than half the bits are set.
pub fn maj(n: usize) -> Result<PartialFn> {
    PartialFn::from_fn(n, |x| Some(2 * weight(x) > n))
}

/// Promise-OR: 0 on the all-zeros input, 1 on weight-one inputs, `*` elsewhere.
pub fn pror(n: usize) -> Result<PartialFn> {
    PartialFn::from_fn(n, |x| match weight(x) {
        0 => Some(false),
        1 => Some(true),
        _ => None,
    })
}

/// `y -> PrOR_n(y XOR a)`.
pub fn pror_shifted(n: usize, a: usize) -> Result<PartialFn> {
    pror(n)?.xor_shift(a)
}

/// Parameters of the gap-majority promise `GapMaj_t`, `t = 4s^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapMaj {
    t: usize,
    s: usize,
}

impl GapMaj {
    /// Accepts exactly `t = 4s^2` with `s >= 2`, where both promised
    /// weights `t/2 ± 2√t = 2s^2 ± 4s` are integers inside `[0, t]`.
    pub fn new(t: usize) -> Result<Self> {
        let s = (0..=t).find(|s| 4 * s * s >= t).unwrap_or(0);
        if s < 2 || 4 * s * s != t {
            return Err(Error::InadmissibleGapMaj(t));
        }
        Ok(Self { t, s })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn sqrt_t(&self) -> usize {
        2 * self.s
    }

    pub fn low_weight(&self) -> usize {
        2 * self.s * self.s - 4 * self.s
    }

    pub fn high_weight(&self) -> usize {
        2 * self.s * self.s + 4 * self.s
    }

    pub fn eval_weight(&self, w: usize) -> Option<bool> {
        if w == self.high_weight() {
            Some(true)
        } else if w == self.low_weight() {
            Some(false)
        } else {
            None
        }
    }
}

pub fn gapmaj(t: usize) -> Result<PartialFn> {
    let g = GapMaj::new(t)?;
    PartialFn::from_fn(t, |x| g.eval_weight(weight(x)))
}

/// Multiplexer on `k + 2^k` variables: address bits `x_0..x_{k-1}` first
/// (`x_0` least significant), then data bits `y_0..y_{2^k-1}`.
pub fn mux(k: usize) -> Result<PartialFn> {
    let n = k + (1usize << k);
    PartialFn::from_fn(n, |x| {
        let addr = x & ((1 << k) - 1);
        Some((x >> (k + addr)) & 1 == 1)
    })
}

/// Variable index of edge `(i, j)`, `i < j`, 0-based vertices, in the
/// lexicographic order `(0,1), (0,2), …, (0,k-1), (1,2), …`.
pub fn sink_edge_index(k: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < k);
    i * (2 * k - i - 1) / 2 + (j - i - 1)
}

/// Whether vertex `v` is a sink of the tournament `x`. Edge variable
/// `x_ij = 1` (for `i < j`) orients the edge from `i` to `j`.
pub fn is_sink_vertex(k: usize, x: usize, v: usize) -> bool {
    (0..k).filter(|&u| u != v).all(|u| {
        if u < v {
            (x >> sink_edge_index(k, u, v)) & 1 == 1
        } else {
            (x >> sink_edge_index(k, v, u)) & 1 == 0
        }
    })
}

/// SINK on `k(k-1)/2` edge variables.
pub fn sink(k: usize) -> Result<PartialFn> {
    if k < 2 {
        return Err(Error::InvalidArgument("sink needs k >= 2".into()));
    }
    let n = k * (k - 1) / 2;
    PartialFn::from_fn(n, |x| Some((0..k).any(|v| is_sink_vertex(k, x, v))))
}

/// The inner Rubinstein predicate: exactly two set bits, adjacent.
pub fn rub_inner(k: usize) -> Result<PartialFn> {
    PartialFn::from_fn(k, |x| Some(weight(x) == 2 && x & (x >> 1) != 0))
}

/// Rubinstein's function `OR_k ∘ g` on `k^2` variables.
pub fn rub(k: usize) -> Result<PartialFn> {
    or(k)?.compose_uniform(&rub_inner(k)?)
}

pub fn from_spectrum(s: &SymmetricSpectrum) -> Result<PartialFn> {
    s.to_fn()
}

pub fn from_junta_spec(s: &JuntaSymmetricSpec) -> Result<PartialFn> {
    s.to_fn()
}

/// Parses identifiers such as `or:4`, `sink:4`, `pror:3`, `mux:1`, `id`,
/// `const0:2`, `pror_shifted:3:5`.
pub fn by_name(name: &str) -> Result<PartialFn> {
    let mut parts = name.trim().split(':');
    let kind = parts.next().unwrap_or_default().to_ascii_lowercase();
    let args: Vec<usize> = parts
        .map(|p| {
            p.parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("bad parameter {p:?} in {name:?}")))
        })
        .collect::<Result<_>>()?;
    let one = |what: &str| -> Result<usize> {
        match args.as_slice() {
            [n] => Ok(*n),
            _ => Err(Error::InvalidArgument(format!("{what} takes one parameter: {name:?}"))),
        }
    };
    match kind.as_str() {
        "id" | "identity" => Ok(identity()),
        "or" => or(one("or")?),
        "and" => and(one("and")?),
        "xor" => xor(one("xor")?),
        "maj" => maj(one("maj")?),
        "pror" => pror(one("pror")?),
        "gapmaj" => gapmaj(one("gapmaj")?),
        "mux" => mux(one("mux")?),
        "sink" => sink(one("sink")?),
        "rub" => rub(one("rub")?),
        "const0" => PartialFn::constant(one("const0")?, false),
        "const1" => PartialFn::constant(one("const1")?, true),
        "pror_shifted" => match args.as_slice() {
            [n, a] => pror_shifted(*n, *a),
            _ => Err(Error::InvalidArgument(format!("pror_shifted takes n:a: {name:?}"))),
        },
        _ => Err(Error::InvalidArgument(format!("unknown zoo function {name:?}"))),
    }
}
