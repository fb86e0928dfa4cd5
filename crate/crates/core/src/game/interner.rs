use std::hash::Hash;

use dashmap::DashMap;
use parking_lot::RwLock;

/// Concurrent hash-consing table: equal values always receive the same dense id.
#[derive(Debug)]
pub struct Interner<T: Hash + Eq + Clone> {
    ids: DashMap<T, u32>,
    values: RwLock<Vec<T>>,
}

impl<T: Hash + Eq + Clone> Default for Interner<T> {
    fn default() -> Self {
        Interner {
            ids: DashMap::new(),
            values: RwLock::new(Vec::new()),
        }
    }
}

impl<T: Hash + Eq + Clone> Interner<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// The id of `value`, and whether this call allocated it.
    pub fn intern(&self, value: &T) -> (u32, bool) {
        if let Some(id) = self.ids.get(value) {
            return (*id, false);
        }
        let mut fresh = false;
        let id = *self.ids.entry(value.clone()).or_insert_with(|| {
            // Allocation happens under the shard lock, so ids stay dense and in push order.
            let mut values = self.values.write();
            values.push(value.clone());
            fresh = true;
            (values.len() - 1) as u32
        });
        (id, fresh)
    }

    pub fn id(&self, value: &T) -> Option<u32> {
        self.ids.get(value).map(|id| *id)
    }

    pub fn get(&self, id: u32) -> T {
        self.values.read()[id as usize].clone()
    }

    pub fn with<R>(&self, id: u32, f: impl FnOnce(&T) -> R) -> R {
        f(&self.values.read()[id as usize])
    }

    pub fn len(&self) -> usize {
        self.values.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
