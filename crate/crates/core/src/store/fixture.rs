//! The bundled "mini-imdb" dataset: person, movie, cast, genre, locations
//! and info, small enough for exhaustive oracles.
//!
//! `movie.title` is the title column; some query vocabulary calls it
//! `movie.name`.

use super::{Dataset, DatasetBuilder, Schema};

pub const SCHEMA: &str = include_str!("../../fixtures/mini-imdb/schema.txt");
pub const PERSON: &str = include_str!("../../fixtures/mini-imdb/person.tsv");
pub const MOVIE: &str = include_str!("../../fixtures/mini-imdb/movie.tsv");
pub const CAST: &str = include_str!("../../fixtures/mini-imdb/cast.tsv");
pub const GENRE: &str = include_str!("../../fixtures/mini-imdb/genre.tsv");
pub const LOCATIONS: &str = include_str!("../../fixtures/mini-imdb/locations.tsv");
pub const INFO: &str = include_str!("../../fixtures/mini-imdb/info.tsv");
pub const MANUAL_QUNITS: &str = include_str!("../../fixtures/mini-imdb/manual.qunit");
pub const QUERY_LOG: &str = include_str!("../../fixtures/mini-imdb/query_log.tsv");
pub const ROLLUP_LOG: &str = include_str!("../../fixtures/mini-imdb/rollup_log.tsv");
pub const GOLD: &str = include_str!("../../fixtures/mini-imdb/gold.tsv");
pub const PERSON_PAGES: &str = include_str!("../../fixtures/mini-imdb/person_pages.txt");

pub fn schema() -> Schema {
    Schema::parse(SCHEMA).expect("fixture schema is valid")
}

pub fn mini_imdb() -> Dataset {
    let mut b = DatasetBuilder::new(schema());
    for (table, text) in [
        ("person", PERSON),
        ("movie", MOVIE),
        ("cast", CAST),
        ("genre", GENRE),
        ("locations", LOCATIONS),
        ("info", INFO),
    ] {
        b.ingest_table(table, text).expect("fixture table parses");
    }
    b.finalize().expect("fixture is referentially intact")
}
