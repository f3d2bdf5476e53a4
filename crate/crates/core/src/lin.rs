//! Finite formal linear combinations with exact coefficients.

use std::collections::hash_map::Entry;
use std::hash::Hash;

use rustc_hash::FxHashMap;

use crate::rat::Rat;

/// A finite `Rat`-linear combination of keys. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lin<K: Hash + Eq> {
    terms: FxHashMap<K, Rat>,
}

impl<K: Hash + Eq> Default for Lin<K> {
    fn default() -> Self {
        Lin { terms: FxHashMap::default() }
    }
}

impl<K: Hash + Eq + Clone> Lin<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(k: K, c: Rat) -> Self {
        let mut l = Self::new();
        l.add_term(k, c);
        l
    }

    pub fn add_term(&mut self, k: K, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Lin<K>, c: &Rat) {
        if c.is_zero() {
            return;
        }
        if self.terms.is_empty() {
            self.terms.reserve(other.terms.len());
        }
        for (k, v) in &other.terms {
            let x = if c.is_one() { v.clone() } else { v * c };
            // look up by reference first so existing keys are never cloned
            if let Some(e) = self.terms.get_mut(k) {
                *e += &x;
                if e.is_zero() {
                    self.terms.remove(k);
                }
            } else {
                self.terms.insert(k.clone(), x);
            }
        }
    }

    pub fn add(&mut self, other: &Lin<K>) {
        self.add_scaled(other, &Rat::one());
    }

    pub fn sub(&mut self, other: &Lin<K>) {
        self.add_scaled(other, &Rat::from_int(-1));
    }

    /// Releases spare hash capacity; used before a value is cached.
    pub fn compacted(mut self) -> Lin<K> {
        self.terms.shrink_to_fit();
        self
    }

    pub fn scaled(&self, c: &Rat) -> Lin<K> {
        let mut out = Lin::new();
        out.add_scaled(self, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: &K) -> Rat {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rat)> {
        self.terms.iter()
    }

    pub fn into_iter_terms(self) -> impl Iterator<Item = (K, Rat)> {
        self.terms.into_iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    /// Applies a linear map given on keys.
    pub fn map_linear<K2, F>(&self, mut f: F) -> Lin<K2>
    where
        K2: Hash + Eq + Clone,
        F: FnMut(&K) -> Lin<K2>,
    {
        let mut out = Lin::new();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k), c);
        }
        out
    }
}

impl<K: Hash + Eq + Clone + Ord> Lin<K> {
    /// Terms sorted by key, for deterministic output.
    pub fn sorted(&self) -> Vec<(K, Rat)> {
        let mut v: Vec<_> = self.terms.iter().map(|(k, c)| (k.clone(), c.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }
}

impl<K: Hash + Eq + Clone> FromIterator<(K, Rat)> for Lin<K> {
    fn from_iter<I: IntoIterator<Item = (K, Rat)>>(it: I) -> Self {
        let mut l = Lin::new();
        for (k, c) in it {
            l.add_term(k, c);
        }
        l
    }
}
