//! Exhaustive breadth-first enumeration of group balls.
//!
//! Elements are identified by their canonical key (the lexicographically
//! least geodesic word), so layer counts are exact and the layer an element
//! first appears in is its true distance from the identity.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::pack::{pack_u64, unpack_u64, MAX_PACKED_U64};
use super::{canonical_key, Letter, Presentation, Word};
use crate::error::{Error, Result};
use crate::tol;

pub const NO_ELEMENT: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct BallOptions {
    /// Hard cap on the radius; enumeration is exponential.
    pub cap: u32,
    /// Whether to record the full element-by-letter transition table.
    pub transitions: bool,
}

impl Default for BallOptions {
    fn default() -> Self {
        BallOptions {
            cap: tol::BFS_CAP,
            transitions: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SphereSummary {
    pub radius: u32,
    pub count: u64,
    /// A few normal forms from the sphere, for reports.
    pub sample_normal_forms: Vec<String>,
}

/// The ball of a fixed radius with exact equality testing.
pub struct Ball {
    radius: u32,
    alphabet: usize,
    /// Canonical key (packed normal form) per element id; ids are assigned
    /// in breadth-first shortlex order, so id 0 is the identity.
    keys: Vec<u64>,
    depth: Vec<u8>,
    index: HashMap<u64, u32>,
    /// `trans[id * alphabet + letter]`, `NO_ELEMENT` when the product falls
    /// outside the ball. Empty if transitions were not requested.
    trans: Vec<u32>,
    /// `sphere_start[d]..sphere_start[d+1]` are the ids at distance `d`.
    sphere_start: Vec<u32>,
}

impl Ball {
    pub fn build(p: &Presentation, radius: u32, opts: &BallOptions) -> Result<Self> {
        if radius > opts.cap {
            return Err(Error::RadiusTooLarge {
                requested: radius,
                cap: opts.cap,
            });
        }
        if radius as usize + 1 > MAX_PACKED_U64 {
            return Err(Error::RadiusTooLarge {
                requested: radius,
                cap: MAX_PACKED_U64 as u32 - 1,
            });
        }
        let alphabet = p.alphabet_size();
        let mut keys: Vec<u64> = vec![pack_u64(&[])];
        let mut depth: Vec<u8> = vec![0];
        let mut index: HashMap<u64, u32> = HashMap::new();
        index.insert(keys[0], 0);
        // Resolved transition rows (parent id, targets per letter).
        let mut rows: Vec<Vec<u32>> = Vec::new();
        let mut sphere_start: Vec<u32> = vec![0, 1];

        let mut frontier: Vec<u32> = vec![0];
        for d in 1..=radius + 1 {
            let last_layer = d == radius + 1;
            if last_layer && !opts.transitions {
                break;
            }
            // Canonical keys of frontier-times-letter products, computed in
            // parallel; merged sequentially in (parent id, letter) order so
            // discovery order is shortlex and independent of thread count.
            let products: Vec<Vec<u64>> = frontier
                .par_iter()
                .map(|&id| {
                    let w = unpack_u64(keys[id as usize]);
                    (0..alphabet)
                        .map(|l| {
                            let mut wl = w.clone();
                            wl.push(Letter(l as u8));
                            let key = canonical_key(&wl, p).expect("reducible family");
                            pack_u64(&key.0)
                        })
                        .collect()
                })
                .collect();

            let mut next_frontier = Vec::new();
            for prods in &products {
                let mut row = Vec::with_capacity(alphabet);
                for &key in prods {
                    let target = if last_layer {
                        index.get(&key).copied().unwrap_or(NO_ELEMENT)
                    } else {
                        *index.entry(key).or_insert_with(|| {
                            let nid = keys.len() as u32;
                            keys.push(key);
                            depth.push(d as u8);
                            next_frontier.push(nid);
                            nid
                        })
                    };
                    row.push(target);
                }
                if opts.transitions {
                    rows.push(row);
                }
            }
            if !last_layer {
                sphere_start.push(keys.len() as u32);
            }
            frontier = next_frontier;
        }

        let trans = if opts.transitions {
            let mut t = vec![NO_ELEMENT; keys.len() * alphabet];
            // Rows were produced in id order (0, 1, 2, ...) layer by layer.
            for (id, row) in rows.into_iter().enumerate() {
                t[id * alphabet..(id + 1) * alphabet].copy_from_slice(&row);
            }
            t
        } else {
            Vec::new()
        };

        Ok(Ball {
            radius,
            alphabet,
            keys,
            depth,
            index,
            trans,
            sphere_start,
        })
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn depth_of(&self, id: u32) -> u32 {
        self.depth[id as usize] as u32
    }

    /// Breadth-first shortlex normal form of an element.
    pub fn normal_form(&self, id: u32) -> Word {
        unpack_u64(self.keys[id as usize])
    }

    /// Looks up the element of an arbitrary word, if it lies in the ball.
    pub fn lookup(&self, w: &Word, p: &Presentation) -> Result<Option<u32>> {
        let key = canonical_key(w, p)?;
        if key.len() > self.radius as usize {
            return Ok(None);
        }
        Ok(self.index.get(&pack_u64(&key.0)).copied())
    }

    /// One multiplication step through the precomputed table.
    pub fn step(&self, id: u32, l: Letter) -> u32 {
        debug_assert!(!self.trans.is_empty(), "ball built without transitions");
        self.trans[id as usize * self.alphabet + l.index()]
    }

    pub fn has_transitions(&self) -> bool {
        !self.trans.is_empty()
    }

    pub fn sphere_ids(&self, d: u32) -> std::ops::Range<u32> {
        self.sphere_start[d as usize]..self.sphere_start[d as usize + 1]
    }

    pub fn sphere_count(&self, d: u32) -> u64 {
        (self.sphere_start[d as usize + 1] - self.sphere_start[d as usize]) as u64
    }

    pub fn sphere_counts(&self) -> Vec<u64> {
        (0..=self.radius).map(|d| self.sphere_count(d)).collect()
    }

    /// Per-radius summary with a few representative normal forms.
    pub fn summary(&self, p: &Presentation, samples_per_sphere: usize) -> Vec<SphereSummary> {
        (0..=self.radius)
            .map(|d| SphereSummary {
                radius: d,
                count: self.sphere_count(d),
                sample_normal_forms: self
                    .sphere_ids(d)
                    .take(samples_per_sphere)
                    .map(|id| self.normal_form(id).display(p))
                    .collect(),
            })
            .collect()
    }
}
