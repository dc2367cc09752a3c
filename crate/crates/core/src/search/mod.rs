//! Query answering over materialized qunit instances: segment the query,
//! pick the definitions it most resembles, then rank their instances.

mod index;
mod rank;
mod segment;

pub use index::{build_index, IndexedDoc, InvertedIndex};
pub use rank::{
    explain, match_definitions, search, DefinitionMatch, Explanation, RankedResult, SearchConfig,
};
pub use segment::{segment, Segment, Segmentation};

use crate::qunit::{enumerate_instances, QunitDefinition, QunitInstance};
use crate::store::{Dataset, ValueIndex};
use crate::{Result, Scalar};

/// Everything a query needs, built once from a dataset and definitions.
#[derive(Clone, Debug)]
pub struct Engine {
    pub values: ValueIndex,
    pub definitions: Vec<QunitDefinition>,
    pub index: InvertedIndex,
}

impl Engine {
    /// Validates the definitions, materializes every instance and indexes it.
    pub fn build(dataset: &Dataset, definitions: Vec<QunitDefinition>) -> Result<Self> {
        for d in &definitions {
            d.validate(dataset.schema())?;
        }
        let instances: Vec<_> = definitions
            .iter()
            .flat_map(|d| enumerate_instances(d, dataset))
            .collect();
        Self::from_instances(ValueIndex::build(dataset), definitions, &instances)
    }

    /// Reassembles an engine from previously materialized instances.
    pub fn from_instances(
        values: ValueIndex,
        definitions: Vec<QunitDefinition>,
        instances: &[QunitInstance],
    ) -> Result<Self> {
        Ok(Engine {
            values,
            index: build_index(instances)?,
            definitions,
        })
    }

    pub fn search<S: Scalar>(&self, query: &str, config: &SearchConfig<S>) -> Vec<RankedResult<S>> {
        search(query, &self.values, &self.index, &self.definitions, config)
    }

    pub fn explain<S: Scalar>(&self, query: &str, config: &SearchConfig<S>) -> Explanation<S> {
        explain(query, &self.values, &self.index, &self.definitions, config)
    }
}
