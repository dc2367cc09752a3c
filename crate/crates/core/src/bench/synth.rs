//! Seeded generator for a desk-scale world and a query log over it whose
//! distinct queries fall into fixed shares of query classes.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::derive::{LogEntry, TypedQuery};
use crate::store::{fixture, Dataset, DatasetBuilder, Value};

/// Shape of a query as seen through typing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QueryClass {
    /// One recognized value and nothing else.
    SingleEntity,
    /// One recognized value plus other words.
    EntityAttribute,
    /// Two recognized values and nothing else.
    TwoEntity,
    /// Two or more values with other words, or three or more values.
    Complex,
    /// No recognized value.
    Other,
}

pub fn classify(typed: &TypedQuery) -> QueryClass {
    let slots = typed.template.slots().count();
    let literals = typed.template.items.len() - slots;
    match (slots, literals) {
        (0, _) => QueryClass::Other,
        (1, 0) => QueryClass::SingleEntity,
        (1, _) => QueryClass::EntityAttribute,
        (2, 0) => QueryClass::TwoEntity,
        _ => QueryClass::Complex,
    }
}

#[derive(Clone, Debug)]
pub struct SynthConfig {
    pub distinct_queries: usize,
    pub persons: usize,
    pub movies: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            distinct_queries: 200,
            persons: 60,
            movies: 60,
            seed: 42,
        }
    }
}

/// Target shares of distinct queries, in percent.
pub const SHARES: [(QueryClass, usize); 5] = [
    (QueryClass::SingleEntity, 38),
    (QueryClass::EntityAttribute, 20),
    (QueryClass::TwoEntity, 2),
    (QueryClass::Complex, 2),
    (QueryClass::Other, 38),
];

const PERSON_WORDS: [&str; 7] = [
    "movies",
    "biography",
    "photos",
    "awards",
    "quotes",
    "news",
    "spouse",
];
const MOVIE_WORDS: [&str; 7] = [
    "cast",
    "plot",
    "trailer",
    "soundtrack",
    "reviews",
    "showtimes",
    "quotes",
];
const OTHER_WORDS: [&str; 16] = [
    "best",
    "films",
    "oscar",
    "winners",
    "box",
    "office",
    "top",
    "comedies",
    "new",
    "releases",
    "upcoming",
    "horror",
    "classic",
    "westerns",
    "funny",
    "documentaries",
];

pub struct SynthLog {
    pub dataset: Dataset,
    pub log: Vec<LogEntry>,
    /// Intended class of every log query.
    pub classes: BTreeMap<String, QueryClass>,
}

/// Pronounceable made-up words that cannot collide with the vocabulary.
fn pseudo_words(rng: &mut ChaCha8Rng, n: usize) -> Vec<String> {
    const C: &[u8] = b"bdfgklmnprstvz";
    const V: &[u8] = b"aeiou";
    let mut seen = BTreeSet::new();
    while seen.len() < n {
        let w: String = (0..3)
            .flat_map(|_| {
                [
                    C[rng.gen_range(0..C.len())] as char,
                    V[rng.gen_range(0..V.len())] as char,
                ]
            })
            .collect();
        seen.insert(w);
    }
    let mut words: Vec<String> = seen.into_iter().collect();
    words.shuffle(rng);
    words
}

fn world(config: &SynthConfig, rng: &mut ChaCha8Rng) -> (Dataset, Vec<String>, Vec<String>) {
    let words = pseudo_words(rng, config.persons * 2 + config.movies + 1);
    let persons: Vec<String> = words[..config.persons * 2]
        .chunks(2)
        .map(|p| p.join(" "))
        .collect();
    let movies: Vec<String> =
        words[config.persons * 2..config.persons * 2 + config.movies].to_vec();
    let role = words[words.len() - 1].clone();
    let mut b = DatasetBuilder::new(fixture::schema());
    for (i, p) in persons.iter().enumerate() {
        b.insert(
            "person",
            vec![Value::Int(i as i64 + 1), Value::Text(p.clone())],
        )
        .expect("generated row fits the schema");
    }
    for (i, m) in movies.iter().enumerate() {
        let year = 1950 + rng.gen_range(0..70);
        b.insert(
            "movie",
            vec![
                Value::Int(i as i64 + 1),
                Value::Text(m.clone()),
                Value::Int(year),
            ],
        )
        .expect("generated row fits the schema");
    }
    for i in 0..config.movies.max(config.persons) {
        let row = vec![
            Value::Int(i as i64 + 1),
            Value::Int((i % config.movies) as i64 + 1),
            Value::Int((i % config.persons) as i64 + 1),
            Value::Text(role.clone()),
        ];
        b.insert("cast", row)
            .expect("generated row fits the schema");
    }
    (
        b.finalize().expect("generated keys resolve"),
        persons,
        movies,
    )
}

fn quota(total: usize) -> Vec<(QueryClass, usize)> {
    let mut out: Vec<(QueryClass, usize)> =
        SHARES.iter().map(|&(c, p)| (c, total * p / 100)).collect();
    let assigned: usize = out.iter().map(|(_, n)| n).sum();
    out[4].1 += total - assigned;
    out
}

pub fn synth_log(config: &SynthConfig) -> SynthLog {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (dataset, persons, movies) = world(config, &mut rng);
    let mut classes = BTreeMap::new();
    let mut log = Vec::new();
    for (class, n) in quota(config.distinct_queries) {
        let mut made = 0;
        let mut attempts = 0;
        while made < n {
            attempts += 1;
            assert!(
                attempts < 100_000,
                "world too small for {n} {class:?} queries"
            );
            let p = persons.choose(&mut rng).expect("persons");
            let m = movies.choose(&mut rng).expect("movies");
            let (query, frequency) = match class {
                QueryClass::SingleEntity => {
                    let q = if rng.gen_bool(0.5) {
                        p.clone()
                    } else {
                        m.clone()
                    };
                    (q, rng.gen_range(1..=5))
                }
                QueryClass::EntityAttribute => {
                    // Cycling through the attribute words keeps every
                    // template populated.
                    let k = made % (PERSON_WORDS.len() + MOVIE_WORDS.len());
                    let q = if k < PERSON_WORDS.len() {
                        format!("{p} {}", PERSON_WORDS[k])
                    } else {
                        format!("{m} {}", MOVIE_WORDS[k - PERSON_WORDS.len()])
                    };
                    (q, rng.gen_range(2..=6))
                }
                QueryClass::TwoEntity => (format!("{p} {m}"), 1),
                QueryClass::Complex => {
                    let w = MOVIE_WORDS.choose(&mut rng).expect("words");
                    (format!("{p} {m} {w}"), 1)
                }
                QueryClass::Other => {
                    let a = OTHER_WORDS.choose(&mut rng).expect("words");
                    let b = OTHER_WORDS.choose(&mut rng).expect("words");
                    if a == b {
                        continue;
                    }
                    (format!("{a} {b}"), 1)
                }
            };
            if classes.contains_key(&query) {
                continue;
            }
            classes.insert(query.clone(), class);
            log.push(LogEntry { query, frequency });
            made += 1;
        }
    }
    SynthLog {
        dataset,
        log,
        classes,
    }
}

/// Share of distinct log queries per class, in percent.
pub fn class_shares(
    log: &[LogEntry],
    index: &crate::store::ValueIndex,
) -> BTreeMap<QueryClass, f64> {
    let distinct: BTreeSet<String> = log
        .iter()
        .map(|e| crate::text::normalize(&e.query))
        .collect();
    let mut counts: BTreeMap<QueryClass, usize> = SHARES.iter().map(|&(c, _)| (c, 0)).collect();
    for q in &distinct {
        *counts
            .entry(classify(&crate::derive::type_query(q, index)))
            .or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(c, n)| (c, 100.0 * n as f64 / distinct.len().max(1) as f64))
        .collect()
}
