use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Mutex;

use crate::oracle::{OResult, OracleError};

/// Write-once cache. The value is computed outside the lock; a racing writer
/// must produce the same value, which is checked.
pub struct Memo<K, V> {
    map: Mutex<HashMap<K, V>>,
    enabled: bool,
}

impl<K: Eq + Hash + Clone, V: Clone + PartialEq> Memo<K, V> {
    pub fn new(enabled: bool) -> Self {
        Memo {
            map: Mutex::new(HashMap::new()),
            enabled,
        }
    }

    pub fn get_or(&self, key: K, compute: impl FnOnce() -> OResult<V>) -> OResult<V> {
        if !self.enabled {
            return compute();
        }
        if let Some(v) = self.map.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = compute()?;
        let mut map = self.map.lock().unwrap();
        match map.get(&key) {
            Some(existing) if *existing != v => Err(OracleError::contract(
                "memoized value computed twice with different results",
            )),
            Some(existing) => Ok(existing.clone()),
            None => {
                map.insert(key, v.clone());
                Ok(v)
            }
        }
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
