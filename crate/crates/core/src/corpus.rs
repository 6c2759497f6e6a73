//! Deterministic random gentle pairs and skew-gentle triples.
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`. Instance `i` of a corpus draws from stream `i`
//! (`set_stream(i)`), so instances are independent of each other and of the
//! corpus size.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gentle::{admissible_special, check_gentle, check_skew_gentle, SkewGentleTriple};
use crate::quiver::{Arrow, QuiverSpec, RelationExpr};

/// Attempts per instance before generation gives up.
pub const RETRY_BUDGET: usize = 200;

/// A probability `num / den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Density {
    pub num: u32,
    pub den: u32,
}

impl Density {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::InvalidConfig(format!("density {num}/{den} is not in [0, 1]")));
        }
        Ok(Density { num, den })
    }

    fn sample(self, rng: &mut ChaCha8Rng) -> bool {
        self.num > 0 && rng.gen_ratio(self.num, self.den)
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Density {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("cannot read density {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => Density::new(n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?),
            None if s.trim() == "0" => Density::new(0, 1),
            None if s.trim() == "1" => Density::new(1, 1),
            None => Err(bad()),
        }
    }
}

impl From<Density> for String {
    fn from(d: Density) -> String {
        d.to_string()
    }
}

impl TryFrom<String> for Density {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub seed: u64,
    pub n_vertices: RangeInclusive<usize>,
    pub n_arrows: RangeInclusive<usize>,
    /// Chance that a lone composable pair becomes a relation.
    pub relation_density: Density,
    /// Chance that an admissible vertex is made special.
    pub special_density: Density,
    pub count: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 42,
            n_vertices: 1..=5,
            n_arrows: 0..=6,
            relation_density: Density { num: 1, den: 2 },
            special_density: Density { num: 1, den: 2 },
            count: 10,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_vertices.is_empty() || *self.n_vertices.start() == 0 {
            return Err(Error::InvalidConfig("vertex range must be nonempty and positive".into()));
        }
        if self.n_arrows.is_empty() {
            return Err(Error::InvalidConfig("arrow range must be nonempty".into()));
        }
        Density::new(self.relation_density.num, self.relation_density.den)?;
        Density::new(self.special_density.num, self.special_density.den)?;
        Ok(())
    }

    pub fn rng_for(&self, instance: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(instance as u64);
        rng
    }
}

/// Arrow names `a`, ..., `z`, then `a1`, ..., `z1`, and so on.
pub fn arrow_name(i: usize) -> String {
    let letter = (b'a' + (i % 26) as u8) as char;
    match i / 26 {
        0 => letter.to_string(),
        k => format!("{letter}{k}"),
    }
}

/// One attempt: arrows inserted one at a time inside the in/out budget of
/// 2 per vertex, then relations chosen vertex by vertex so that every arrow
/// has at most one relation and one non-relation on each side.
fn attempt(config: &GenConfig, rng: &mut ChaCha8Rng) -> QuiverSpec {
    let n = rng.gen_range(config.n_vertices.clone());
    let m = rng.gen_range(config.n_arrows.clone());
    let mut spec = QuiverSpec { vertices: (1..=n).map(|i| i.to_string()).collect(), ..Default::default() };
    let mut outdeg = vec![0usize; n];
    let mut indeg = vec![0usize; n];
    for i in 0..m {
        let sources: Vec<usize> = (0..n).filter(|&v| outdeg[v] < 2).collect();
        let targets: Vec<usize> = (0..n).filter(|&v| indeg[v] < 2).collect();
        let (Some(&s), Some(&t)) = (sources.choose(rng), targets.choose(rng)) else {
            break;
        };
        outdeg[s] += 1;
        indeg[t] += 1;
        spec.arrows.push(Arrow { name: arrow_name(i), source: s, target: t });
    }
    for v in 0..n {
        let ins = spec.in_arrows(v);
        let outs = spec.out_arrows(v);
        let pick: Vec<(usize, usize)> = match (ins.as_slice(), outs.as_slice()) {
            ([a], [b]) => {
                if config.relation_density.sample(rng) {
                    vec![(*a, *b)]
                } else {
                    Vec::new()
                }
            }
            ([a], [b1, b2]) => vec![(*a, if rng.gen_bool(0.5) { *b1 } else { *b2 })],
            ([a1, a2], [b]) => vec![(if rng.gen_bool(0.5) { *a1 } else { *a2 }, *b)],
            ([a1, a2], [b1, b2]) => {
                if rng.gen_bool(0.5) {
                    vec![(*a1, *b1), (*a2, *b2)]
                } else {
                    vec![(*a1, *b2), (*a2, *b1)]
                }
            }
            _ => Vec::new(),
        };
        for (a, b) in pick {
            spec.relations.push(RelationExpr::monomial(vec![a, b]));
        }
    }
    spec
}

/// The gentle pair for instance `index`.
pub fn generate_gentle_instance(config: &GenConfig, index: usize) -> Result<QuiverSpec> {
    let mut rng = config.rng_for(index);
    generate_with(config, &mut rng)
}

fn generate_with(config: &GenConfig, rng: &mut ChaCha8Rng) -> Result<QuiverSpec> {
    config.validate()?;
    for _ in 0..RETRY_BUDGET {
        let spec = attempt(config, rng);
        if check_gentle(&spec)?.is_gentle {
            return Ok(spec);
        }
    }
    Err(Error::RetryBudget { attempts: RETRY_BUDGET })
}

/// `config.count` gentle pairs, one per stream.
pub fn generate_gentle(config: &GenConfig) -> impl Iterator<Item = Result<QuiverSpec>> + '_ {
    (0..config.count).map(move |i| generate_gentle_instance(config, i))
}

/// The triple with `Sp = ∅`, followed by a triple whose special set is a
/// random subset of the admissible vertices when that subset is nonempty.
/// Sampled vertices that would break admissibility of the set are dropped.
pub fn attach_special(spec: &QuiverSpec, config: &GenConfig, rng: &mut ChaCha8Rng) -> Result<Vec<SkewGentleTriple>> {
    let mut base = spec.clone();
    base.special.clear();
    let admissible = admissible_special(&base)?;
    let sampled: Vec<usize> = admissible.into_iter().filter(|_| config.special_density.sample(rng)).collect();
    let mut out = vec![check_skew_gentle(&base)?
        .triple()
        .ok_or_else(|| Error::InvalidConfig("generated pair is not gentle".into()))?];
    // Singly admissible loops can still combine into an infinite path, so
    // each sampled vertex is kept only if the set so far stays admissible.
    let mut with = base.clone();
    let mut last = None;
    for v in sampled {
        let mut trial = with.clone();
        trial.special.push(v);
        if let Some(t) = check_skew_gentle(&trial)?.triple() {
            with = trial;
            last = Some(t);
        }
    }
    out.extend(last);
    Ok(out)
}

/// Instance `index` of a corpus: a gentle pair with a sampled special set,
/// possibly empty.
pub fn corpus_instance(config: &GenConfig, index: usize) -> Result<SkewGentleTriple> {
    let mut rng = config.rng_for(index);
    let spec = generate_with(config, &mut rng)?;
    let mut triples = attach_special(&spec, config, &mut rng)?;
    Ok(triples.pop().expect("attach_special emits at least one triple"))
}

pub fn corpus(config: &GenConfig) -> Result<Vec<SkewGentleTriple>> {
    (0..config.count).map(|i| corpus_instance(config, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::dsl::serialize;

    #[test]
    fn densities_parse() {
        assert_eq!("3/4".parse::<Density>().unwrap(), Density { num: 3, den: 4 });
        assert_eq!("1".parse::<Density>().unwrap(), Density { num: 1, den: 1 });
        assert!("5/4".parse::<Density>().is_err());
        assert!("x".parse::<Density>().is_err());
    }

    #[test]
    fn names() {
        assert_eq!(arrow_name(0), "a");
        assert_eq!(arrow_name(25), "z");
        assert_eq!(arrow_name(27), "b1");
    }

    #[test]
    fn deterministic_and_valid() {
        let config = GenConfig { count: 40, ..Default::default() };
        let first: Vec<String> = corpus(&config).unwrap().iter().map(|t| serialize(&t.base)).collect();
        let second: Vec<String> = corpus(&config).unwrap().iter().map(|t| serialize(&t.base)).collect();
        assert_eq!(first, second);
        for t in corpus(&config).unwrap() {
            assert!(check_gentle(&t.base).unwrap().is_gentle);
            assert!(check_skew_gentle(&t.base).unwrap().is_valid());
        }
        let other = GenConfig { seed: 43, ..config.clone() };
        let third: Vec<String> = corpus(&other).unwrap().iter().map(|t| serialize(&t.base)).collect();
        assert_ne!(first, third);
        assert!(corpus(&config).unwrap().iter().any(|t| !t.special_vertices.is_empty()));
    }

    #[test]
    fn instances_do_not_depend_on_count() {
        let small = GenConfig { count: 3, ..Default::default() };
        let large = GenConfig { count: 9, ..Default::default() };
        assert_eq!(corpus(&small).unwrap(), corpus(&large).unwrap()[..3].to_vec());
    }

    #[test]
    fn jointly_inadmissible_loops_are_dropped() {
        let spec = crate::quiver::dsl::parse("vertices 1 2;\narrow a: 1->2;\narrow c: 2->1;\nrel a*c;\nrel c*a;\n").unwrap();
        assert_eq!(admissible_special(&spec).unwrap(), vec![0, 1]);
        let mut both = spec.clone();
        both.special = vec![0, 1];
        assert!(!check_skew_gentle(&both).unwrap().is_valid());
        let config = GenConfig { special_density: Density { num: 1, den: 1 }, ..Default::default() };
        let triples = attach_special(&spec, &config, &mut config.rng_for(0)).unwrap();
        assert_eq!(triples[1].special_vertices, vec![0]);
    }

    #[test]
    fn saturated_vertex_admits_no_special_loop() {
        let spec = crate::quiver::dsl::parse(
            "vertices 1 2 3 4 5;\narrow a: 1->3;\narrow b: 2->3;\narrow c: 3->4;\narrow d: 3->5;\nrel a*c;\nrel b*d;\n",
        )
        .unwrap();
        assert!(check_gentle(&spec).unwrap().is_gentle);
        assert_eq!(admissible_special(&spec).unwrap(), vec![0, 1, 3, 4]);
        let config = GenConfig { special_density: Density { num: 1, den: 1 }, ..Default::default() };
        let triples = attach_special(&spec, &config, &mut config.rng_for(0)).unwrap();
        assert_eq!(triples.len(), 2);
        assert!(triples[0].special_vertices.is_empty());
        assert_eq!(triples[1].special_vertices, vec![0, 1, 3, 4]);
    }
}
