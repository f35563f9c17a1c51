//! The shared context: field, quiver, orbit data and lazily built tables.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use crate::error::Result;
use crate::gf::{FieldSpec, DEFAULT_FIELD_BOUND};
use crate::hall::HallTable;
use crate::quiver::{DimVector, OrbitData, QuiverWithAut};
use crate::repspace::{ModuleClass, OrbitTable};

/// Default bound on the number of points of a representation space, and on
/// the number of fiber points enumerated for a single extension count.
pub const DEFAULT_SPACE_BOUND: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub field_bound: u64,
    pub space_bound: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { field_bound: DEFAULT_FIELD_BOUND, space_bound: DEFAULT_SPACE_BOUND }
    }
}

/// Persistence hook for computed tables. Loaded tables are sanity-checked by
/// the workbench and discarded when they do not fit.
pub trait TableStore: Send + Sync {
    fn load_orbit_table(&self, dim: &DimVector) -> Option<OrbitTable>;
    fn save_orbit_table(&self, table: &OrbitTable);
    fn load_hall_table(&self, quotient: &DimVector, sub: &DimVector) -> Option<HallTable>;
    fn save_hall_table(&self, table: &HallTable);
}

pub struct Workbench {
    pub(crate) field: FieldSpec,
    pub(crate) quiver: QuiverWithAut,
    pub(crate) orbits: OrbitData,
    pub(crate) limits: Limits,
    pub(crate) orbit_tables: RwLock<HashMap<DimVector, Arc<OrbitTable>>>,
    pub(crate) hall_tables: RwLock<HashMap<(DimVector, DimVector), Arc<HallTable>>>,
    pub(crate) store: Option<Arc<dyn TableStore>>,
    /// `(quotient, sub)` orbit ids of every stable subspace, per `(L, sub dim)`.
    pub(crate) submodule_pairs: RwLock<HashMap<(ModuleClass, DimVector), Arc<Vec<(u32, u32)>>>>,
    /// Middle-term classes over `(M, N)`, counted per orbit id.
    pub(crate) fibers: RwLock<HashMap<(ModuleClass, ModuleClass), Arc<BTreeMap<u32, u64>>>>,
}

impl std::fmt::Debug for Workbench {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Workbench")
            .field("field", &self.field)
            .field("quiver", &self.quiver)
            .finish_non_exhaustive()
    }
}

impl Workbench {
    /// Validates the quiver and builds the ambient field `F_{q^N}` with
    /// `q = p^e` and `N` the lcm of the orbit sizes.
    pub fn new(quiver: QuiverWithAut, p: u32, e: u32) -> Result<Self> {
        Self::with_limits(quiver, p, e, Limits::default())
    }

    pub fn with_limits(quiver: QuiverWithAut, p: u32, e: u32, limits: Limits) -> Result<Self> {
        let orbits = quiver.validate()?;
        let field = FieldSpec::with_bound(p, e, orbits.n, limits.field_bound)?;
        Ok(Workbench {
            field,
            quiver,
            orbits,
            limits,
            orbit_tables: RwLock::new(HashMap::new()),
            hall_tables: RwLock::new(HashMap::new()),
            store: None,
            submodule_pairs: RwLock::new(HashMap::new()),
            fibers: RwLock::new(HashMap::new()),
        })
    }

    pub fn with_store(mut self, store: Arc<dyn TableStore>) -> Self {
        self.store = Some(store);
        self
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn quiver(&self) -> &QuiverWithAut {
        &self.quiver
    }

    pub fn orbit_data(&self) -> &OrbitData {
        &self.orbits
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    pub fn dim(&self, entries: Vec<u32>) -> Result<DimVector> {
        self.quiver.dim(entries)
    }

    pub fn zero_dim(&self) -> DimVector {
        DimVector::zero(self.quiver.num_vertices())
    }

    pub fn euler(&self, a: &DimVector, b: &DimVector) -> i64 {
        self.quiver.euler_form(a, b).expect("dimension vectors of this quiver")
    }

    pub fn symmetric(&self, a: &DimVector, b: &DimVector) -> i64 {
        self.quiver.symmetric_form(a, b).expect("dimension vectors of this quiver")
    }
}
