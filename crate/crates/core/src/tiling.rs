use crate::catalog::catalog;
use crate::dimer::{characteristic_polygon, perfect_matchings, validate_and_build, DimerModel, LatticePolygon, MatchingSet, Quiver};
use crate::error::{Error, Result};
use crate::model::ModelFile;
use crate::reps::{weight_lattice, PatternTable, WeightLattice};

/// A validated non-degenerate dimer model with everything that does not
/// depend on the stability parameter.
#[derive(Clone, Debug)]
pub struct Tiling {
    pub quiver: Quiver,
    pub matchings: MatchingSet,
    pub polygon: LatticePolygon,
    pub lattice: WeightLattice,
    pub patterns: PatternTable,
}

impl Tiling {
    pub fn new(model: &DimerModel) -> Result<Tiling> {
        let quiver = validate_and_build(model)?;
        let matchings = perfect_matchings(model)?;
        if !matchings.non_degenerate {
            return Err(Error::DegenerateModel(
                matchings
                    .unmatched_edges
                    .iter()
                    .map(|&e| model.edges[e].id.clone())
                    .collect(),
            ));
        }
        let polygon = characteristic_polygon(&matchings)?;
        let lattice = weight_lattice(&quiver, &matchings)?;
        let patterns = PatternTable::new(&quiver)?;
        Ok(Tiling {
            quiver,
            matchings,
            polygon,
            lattice,
            patterns,
        })
    }

    pub fn from_file(file: &ModelFile) -> Result<Tiling> {
        Tiling::new(&file.to_model()?)
    }

    pub fn catalog(name: &str) -> Result<Tiling> {
        Tiling::from_file(&catalog(name)?)
    }

    pub fn name(&self) -> &str {
        &self.quiver.model.name
    }

    pub fn num_vertices(&self) -> usize {
        self.quiver.num_vertices
    }
}
