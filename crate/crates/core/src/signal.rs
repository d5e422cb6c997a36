//! Test-signal generators with a compact text syntax:
//!
//! ```text
//! constant:c
//! indicator:level:prefix
//! walsh:n | kaczmarz:n
//! dirichlet:n[:walsh|kaczmarz]
//! step:cell=value,cell=value,...
//! random:seed[:level]
//! ```
//!
//! `step` holds each value from its cell up to the next breakpoint; cells
//! before the first breakpoint are zero. `random` draws uniform values in
//! `[-1, 1]`, constant on level-`level` intervals (default: every cell).

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dyadic::{DyadicInterval, GridFunction, Resolution};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::summability::dirichlet_kernel;
use crate::systems::{sample, SystemKind};

#[derive(Clone, Debug, PartialEq)]
pub enum SignalSpec {
    Constant(f64),
    Indicator { level: u32, prefix: usize },
    System { system: SystemKind, n: usize },
    Dirichlet { n: usize, system: SystemKind },
    Step(Vec<(usize, f64)>),
    Random { seed: u64, level: Option<u32> },
}

fn bad(text: &str, why: impl fmt::Display) -> Error {
    Error::InvalidParameter(format!("signal `{text}`: {why}"))
}

fn parse_field<V: FromStr>(text: &str, field: &str, what: &str) -> Result<V> {
    field
        .trim()
        .parse()
        .map_err(|_| bad(text, format!("cannot read {what} from `{field}`")))
}

impl FromStr for SignalSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut parts = text.trim().split(':');
        let kind = parts.next().unwrap_or_default();
        let args: Vec<&str> = parts.collect();
        let arity = |lo: usize, hi: usize| -> Result<()> {
            if (lo..=hi).contains(&args.len()) {
                Ok(())
            } else {
                Err(bad(text, format!("`{kind}` takes {lo}..={hi} arguments")))
            }
        };
        match kind {
            "constant" => {
                arity(1, 1)?;
                Ok(SignalSpec::Constant(parse_field(text, args[0], "value")?))
            }
            "indicator" => {
                arity(2, 2)?;
                Ok(SignalSpec::Indicator {
                    level: parse_field(text, args[0], "level")?,
                    prefix: parse_field(text, args[1], "prefix")?,
                })
            }
            "walsh" | "kaczmarz" => {
                arity(1, 1)?;
                Ok(SignalSpec::System {
                    system: kind.parse()?,
                    n: parse_field(text, args[0], "index")?,
                })
            }
            "dirichlet" => {
                arity(1, 2)?;
                let system = match args.get(1) {
                    Some(s) => s.parse()?,
                    None => SystemKind::Walsh,
                };
                Ok(SignalSpec::Dirichlet {
                    n: parse_field(text, args[0], "order")?,
                    system,
                })
            }
            "step" => {
                arity(1, 1)?;
                let mut points = Vec::new();
                for item in args[0].split(',').filter(|s| !s.trim().is_empty()) {
                    let (cell, value) = item
                        .split_once('=')
                        .ok_or_else(|| bad(text, format!("expected cell=value, got `{item}`")))?;
                    points.push((
                        parse_field(text, cell, "cell")?,
                        parse_field(text, value, "value")?,
                    ));
                }
                if points.is_empty() {
                    return Err(bad(text, "step needs at least one breakpoint"));
                }
                if points.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return Err(bad(text, "step breakpoints must be strictly increasing"));
                }
                Ok(SignalSpec::Step(points))
            }
            "random" => {
                arity(1, 2)?;
                let level = args
                    .get(1)
                    .map(|l| parse_field(text, l, "level"))
                    .transpose()?;
                Ok(SignalSpec::Random {
                    seed: parse_field(text, args[0], "seed")?,
                    level,
                })
            }
            _ => Err(bad(text, format!("unknown generator `{kind}`"))),
        }
    }
}

impl fmt::Display for SignalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignalSpec::Constant(c) => write!(f, "constant:{c}"),
            SignalSpec::Indicator { level, prefix } => write!(f, "indicator:{level}:{prefix}"),
            SignalSpec::System { system, n } => write!(f, "{system}:{n}"),
            SignalSpec::Dirichlet { n, system } => write!(f, "dirichlet:{n}:{system}"),
            SignalSpec::Step(points) => {
                write!(f, "step:")?;
                for (i, (cell, value)) in points.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{cell}={value}")?;
                }
                Ok(())
            }
            SignalSpec::Random { seed, level: None } => write!(f, "random:{seed}"),
            SignalSpec::Random {
                seed,
                level: Some(l),
            } => write!(f, "random:{seed}:{l}"),
        }
    }
}

/// `2^level` uniform values in `[-1, 1]`, each repeated over its interval.
pub fn random_grid<T: Scalar>(seed: u64, level: u32, res: Resolution) -> Result<GridFunction<T>> {
    if level > res.bits() {
        return Err(Error::LevelOutOfRange {
            level,
            n_bits: res.bits(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = 1usize << (res.bits() - level);
    let mut values = Vec::with_capacity(res.size());
    for _ in 0..(1usize << level) {
        let v = T::lit(rng.gen_range(-1.0..=1.0));
        values.extend(std::iter::repeat_n(v, width));
    }
    GridFunction::new(res, values)
}

impl SignalSpec {
    pub fn generate<T: Scalar>(&self, res: Resolution) -> Result<GridFunction<T>> {
        match *self {
            SignalSpec::Constant(c) => {
                if !c.is_finite() {
                    return Err(Error::NonFinite(0));
                }
                Ok(GridFunction::constant(res, T::lit(c)))
            }
            SignalSpec::Indicator { level, prefix } => {
                GridFunction::indicator(res, DyadicInterval::new(level, prefix)?)
            }
            SignalSpec::System { system, n } => sample(system, n, res),
            SignalSpec::Dirichlet { n, system } => dirichlet_kernel(n, system, res),
            SignalSpec::Step(ref points) => {
                let size = res.size();
                if let Some(&(cell, _)) = points.iter().find(|(cell, _)| *cell >= size) {
                    return Err(Error::IndexOutOfRange { index: cell, bound: size });
                }
                let mut values = vec![T::zero(); size];
                for (i, &(start, v)) in points.iter().enumerate() {
                    let end = points.get(i + 1).map_or(size, |p| p.0);
                    values[start..end].fill(T::lit(v));
                }
                GridFunction::new(res, values)
            }
            SignalSpec::Random { seed, level } => {
                random_grid(seed, level.unwrap_or(res.bits()), res)
            }
        }
    }
}
