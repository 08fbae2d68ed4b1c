//! Shared, memoized construction of presentations and truncations.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::Result;
use crate::kaehler::{OmegaPresentation, OmegaTruncation, PartitionOfUnity};
use crate::polyalg::GroebnerConfig;
use crate::simplicial::{SimplicialComplex, Subcomplex};
use crate::sullivan::ATruncation;

struct Cache<K, V> {
    map: Mutex<HashMap<K, Arc<V>>>,
}

impl<K: Eq + Hash, V> Default for Cache<K, V> {
    fn default() -> Self {
        Cache { map: Mutex::new(HashMap::new()) }
    }
}

impl<K: Eq + Hash + Clone, V> Cache<K, V> {
    fn get_or_try_insert(&self, key: &K, build: impl FnOnce() -> Result<V>) -> Result<Arc<V>> {
        if let Some(v) = self.map.lock().expect("poisoned").get(key) {
            return Ok(v.clone());
        }
        let v = Arc::new(build()?);
        Ok(self.map.lock().expect("poisoned").entry(key.clone()).or_insert(v).clone())
    }
}

/// A complex together with caches for everything built on its subcomplexes.
pub struct Engine {
    complex: SimplicialComplex,
    cfg: GroebnerConfig,
    presentations: Cache<Subcomplex, OmegaPresentation>,
    omega: Cache<(Subcomplex, usize, usize), OmegaTruncation>,
    sullivan: Cache<(Subcomplex, usize, usize), ATruncation>,
    partition: OnceLock<Arc<PartitionOfUnity>>,
}

impl Engine {
    pub fn new(complex: SimplicialComplex) -> Self {
        Self::with_config(complex, GroebnerConfig::default())
    }

    pub fn with_config(complex: SimplicialComplex, cfg: GroebnerConfig) -> Self {
        Engine {
            complex,
            cfg,
            presentations: Cache::default(),
            omega: Cache::default(),
            sullivan: Cache::default(),
            partition: OnceLock::new(),
        }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn whole(&self) -> &Subcomplex {
        self.complex.as_subcomplex()
    }

    pub fn presentation(&self, y: &Subcomplex) -> Result<Arc<OmegaPresentation>> {
        self.presentations.get_or_try_insert(y, || OmegaPresentation::new(y, self.cfg))
    }

    /// `F_D Ωᵠ(Y)`.
    pub fn omega(&self, y: &Subcomplex, q: usize, bound: usize) -> Result<Arc<OmegaTruncation>> {
        self.omega.get_or_try_insert(&(y.clone(), q, bound), || OmegaTruncation::new(self.presentation(y)?, q, bound))
    }

    /// `F_D Aᵠ(Y)`.
    pub fn sullivan(&self, y: &Subcomplex, q: usize, bound: usize) -> Result<Arc<ATruncation>> {
        self.sullivan.get_or_try_insert(&(y.clone(), q, bound), || ATruncation::new(y, q, bound))
    }

    /// The partition of unity of the whole complex.
    pub fn partition(&self) -> Result<Arc<PartitionOfUnity>> {
        if let Some(p) = self.partition.get() {
            return Ok(p.clone());
        }
        let p = Arc::new(PartitionOfUnity::new(&*self.presentation(self.whole())?)?);
        Ok(self.partition.get_or_init(|| p).clone())
    }
}
