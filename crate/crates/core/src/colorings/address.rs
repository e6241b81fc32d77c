use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{random_tripartite_coloring, Oracle, PhiQ, Product, Rainbow, TripartiteDraw};

/// Colors of the random tripartite base of a product coloring when the
/// address does not set `colors`.
const DEFAULT_PRODUCT_BASE_COLORS: u32 = 54;

/// A coloring named by an address string `name:key=value,...`:
///
/// - `phi-q:q=6`
/// - `product:q=2,N=4,seed=7` (optionally `colors=54`, the number of colors of
///   the random tripartite base coloring on `[N]`; `q` is the dimension)
/// - `tripartite:q=54,N=16,seed=1`
/// - `rainbow:N=6`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum OracleSpec {
    PhiQ { q: u32 },
    Product { q: u32, n: u64, seed: u64, colors: u32 },
    Tripartite { q: u32, n: u64, seed: u64 },
    Rainbow { n: u64 },
}

impl fmt::Display for OracleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            OracleSpec::PhiQ { q } => write!(f, "phi-q:q={q}"),
            OracleSpec::Product { q, n, seed, colors } => write!(f, "product:q={q},N={n},seed={seed},colors={colors}"),
            OracleSpec::Tripartite { q, n, seed } => write!(f, "tripartite:q={q},N={n},seed={seed}"),
            OracleSpec::Rainbow { n } => write!(f, "rainbow:N={n}"),
        }
    }
}

impl FromStr for OracleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidParam(format!("oracle address {s:?}: {msg}"));
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params: BTreeMap<&str, u64> = BTreeMap::new();
        for item in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| bad(format!("expected key=value, got {item:?}")))?;
            let v = v.trim().parse().map_err(|_| bad(format!("{k} is not a nonnegative integer")))?;
            if params.insert(k.trim(), v).is_some() {
                return Err(bad(format!("{k} given twice")));
            }
        }
        let mut take = |k: &str| params.remove(k).ok_or_else(|| bad(format!("missing {k}")));
        let small = |k: &str, v: u64| u32::try_from(v).map_err(|_| bad(format!("{k} is too large")));
        let spec = match name.trim() {
            "phi-q" => OracleSpec::PhiQ { q: small("q", take("q")?)? },
            "product" => {
                let (q, n, seed) = (small("q", take("q")?)?, take("N")?, take("seed")?);
                let colors = match params.remove("colors") {
                    Some(c) => small("colors", c)?,
                    None => DEFAULT_PRODUCT_BASE_COLORS,
                };
                OracleSpec::Product { q, n, seed, colors }
            }
            "tripartite" => OracleSpec::Tripartite { q: small("q", take("q")?)?, n: take("N")?, seed: take("seed")? },
            "rainbow" => OracleSpec::Rainbow { n: take("N")? },
            other => return Err(bad(format!("unknown coloring {other:?}"))),
        };
        if let Some(k) = params.keys().next() {
            return Err(bad(format!("unexpected key {k}")));
        }
        Ok(spec)
    }
}

fn draw_total(q: u32, n: u64, seed: u64) -> Result<super::RandomTripartite> {
    match random_tripartite_coloring(q, n, seed)? {
        TripartiteDraw::Total(c) => Ok(c),
        TripartiteDraw::Failed { uncolored, .. } => Err(Error::Domain(format!(
            "seed {seed} leaves {} triples uncolored with {q} colors on {n} vertices; try another seed",
            uncolored.len()
        ))),
    }
}

pub fn build_oracle(spec: &OracleSpec) -> Result<Box<dyn Oracle>> {
    Ok(match *spec {
        OracleSpec::PhiQ { q } => Box::new(PhiQ::new(q)?),
        OracleSpec::Product { q, n, seed, colors } => {
            let base = draw_total(colors, n, seed)?;
            Box::new(Product::new(Box::new(base), q)?.with_name(spec.to_string()))
        }
        OracleSpec::Tripartite { q, n, seed } => Box::new(draw_total(q, n, seed)?),
        OracleSpec::Rainbow { n } => Box::new(Rainbow::new(n)?),
    })
}

#[cfg(test)]
mod tests {
    use super::super::ColorLabel;
    use super::*;

    #[test]
    fn parses_addresses() {
        assert_eq!("phi-q:q=6".parse::<OracleSpec>().unwrap(), OracleSpec::PhiQ { q: 6 });
        assert_eq!(
            "product:q=2,N=4,seed=7".parse::<OracleSpec>().unwrap(),
            OracleSpec::Product { q: 2, n: 4, seed: 7, colors: 54 }
        );
        assert_eq!(
            "tripartite:q=54,N=16,seed=1".parse::<OracleSpec>().unwrap(),
            OracleSpec::Tripartite { q: 54, n: 16, seed: 1 }
        );
        assert_eq!("rainbow:N=6".parse::<OracleSpec>().unwrap(), OracleSpec::Rainbow { n: 6 });
        for bad in ["phi-q", "phi-q:q=x", "rainbow:N=6,N=7", "rainbow:N=6,q=1", "mystery:q=1", "rainbow:N"] {
            assert!(bad.parse::<OracleSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        for s in ["phi-q:q=6", "product:q=2,N=4,seed=7,colors=54", "tripartite:q=54,N=16,seed=1", "rainbow:N=6"] {
            let spec: OracleSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
    }

    #[test]
    fn builds_oracles() {
        let phi = build_oracle(&"phi-q:q=4".parse().unwrap()).unwrap();
        assert_eq!(phi.eval([1, 4, 6]).unwrap(), ColorLabel::Pair { t: 1, s: 1 });
        assert_eq!(phi.name(), "phi-q:q=4");
        let p = build_oracle(&"product:q=2,N=4,seed=7".parse().unwrap()).unwrap();
        assert_eq!(p.domain_size(), 16);
        assert_eq!(p.color_count(), 4 + 54);
        assert!(build_oracle(&"phi-q:q=3".parse().unwrap()).is_err());
        assert!(build_oracle(&"tripartite:q=1,N=6,seed=3".parse().unwrap()).is_err());
    }
}
