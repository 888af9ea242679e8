//! Shared domain types, distance computation and top-k merging.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;

use crate::error::{Error, Result};

/// A fixed-dimension feature vector. Components are stored in 32-bit floats;
/// all distance arithmetic accumulates in 64-bit floats so that every node
/// computes bit-identical distances for the same inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    components: Vec<f32>,
}

impl FeatureVector {
    /// Builds a vector, rejecting NaN and infinite components.
    pub fn new(components: Vec<f32>) -> Result<Self> {
        for (i, c) in components.iter().enumerate() {
            if !c.is_finite() {
                return Err(Error::NonFiniteComponent { position: i });
            }
        }
        Ok(FeatureVector { components })
    }

    /// Builds a vector that is already known to be finite.
    pub(crate) fn from_checked(components: Vec<f32>) -> Self {
        debug_assert!(components.iter().all(|c| c.is_finite()));
        FeatureVector { components }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[f32] {
        &self.components
    }

    pub fn into_components(self) -> Vec<f32> {
        self.components
    }
}

/// Position of an image inside one partition. Indexes are dense: the n-th
/// appended image of a partition has index n-1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ImageIndex(pub u64);

impl fmt::Display for ImageIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Per-image product attributes as stored in the forward index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductAttributes {
    pub product_id: u64,
    pub sales: u64,
    pub praise: u64,
    pub price: u64,
    pub url: String,
}

/// Numeric fields addressable by a single-field update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumericField {
    ProductId,
    Sales,
    Praise,
    Price,
}

/// One attribute change inside an `AttributeUpdate` message.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldChange {
    Sales(u64),
    Praise(u64),
    Price(u64),
    Available(bool),
}

/// Product-level numeric attributes carried by an add message; each image of
/// the product shares them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductInfo {
    pub product_id: u64,
    pub sales: u64,
    pub praise: u64,
    pub price: u64,
}

/// A product event from the update stream. The same messages drive both the
/// periodic full build and real-time indexing.
#[derive(Debug, Clone, PartialEq)]
pub enum UpdateMessage {
    AttributeUpdate {
        product_id: u64,
        changes: Vec<FieldChange>,
    },
    ProductAdd {
        info: ProductInfo,
        urls: Vec<String>,
    },
    ProductRemove {
        product_id: u64,
    },
}

impl UpdateMessage {
    pub fn product_id(&self) -> u64 {
        match self {
            UpdateMessage::AttributeUpdate { product_id, .. } => *product_id,
            UpdateMessage::ProductAdd { info, .. } => info.product_id,
            UpdateMessage::ProductRemove { product_id } => *product_id,
        }
    }
}

/// A single search result: where the image lives, how far it is from the
/// query, its ranking score and an attribute snapshot taken at scan time.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchHit {
    pub image_index: ImageIndex,
    pub partition_id: u32,
    pub distance: f64,
    pub score: f64,
    pub attributes: ProductAttributes,
}

/// The total result order: ascending distance, ties broken by
/// (partition_id, image_index) ascending.
pub fn hit_order(a: &SearchHit, b: &SearchHit) -> Ordering {
    a.distance
        .total_cmp(&b.distance)
        .then(a.partition_id.cmp(&b.partition_id))
        .then(a.image_index.cmp(&b.image_index))
}

/// Euclidean distance between two vectors of the same dimension.
///
/// Accumulates the squared differences in f64, in component order, and
/// reports the square root. Dimension mismatch signals a corrupted index or
/// a misconfigured query and is a hard error.
pub fn euclidean_distance(a: &FeatureVector, b: &FeatureVector) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(squared_distance(a.components(), b.components()).sqrt())
}

/// Squared Euclidean distance over raw component slices. Callers guarantee
/// equal lengths; this is the scan-loop kernel.
#[inline]
pub fn squared_distance(a: &[f32], b: &[f32]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0f64;
    for i in 0..a.len() {
        let d = a[i] as f64 - b[i] as f64;
        acc += d * d;
    }
    acc
}

/// Merges per-partition sorted hit lists into the global top k.
///
/// Each input list must already be sorted ascending under [`hit_order`]; the
/// output is the k globally smallest hits in that same order. A k-way heap
/// merge keeps this independent of the concatenate-and-sort oracle used to
/// check it.
pub fn merge_top_k(partials: Vec<Vec<SearchHit>>, k: usize) -> Vec<SearchHit> {
    struct Cursor {
        list: Vec<SearchHit>,
        pos: usize,
    }

    // Max-heap on Reverse ordering: peek is the globally smallest head.
    struct HeapEntry {
        head: SearchHit,
        cursor: usize,
    }
    impl PartialEq for HeapEntry {
        fn eq(&self, other: &Self) -> bool {
            hit_order(&self.head, &other.head) == Ordering::Equal
        }
    }
    impl Eq for HeapEntry {}
    impl PartialOrd for HeapEntry {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for HeapEntry {
        fn cmp(&self, other: &Self) -> Ordering {
            hit_order(&other.head, &self.head)
        }
    }

    let mut cursors: Vec<Cursor> = partials
        .into_iter()
        .map(|list| Cursor { list, pos: 0 })
        .collect();
    let mut heap = BinaryHeap::with_capacity(cursors.len());
    for (i, c) in cursors.iter_mut().enumerate() {
        if !c.list.is_empty() {
            let head = c.list[0].clone();
            c.pos = 1;
            heap.push(HeapEntry { head, cursor: i });
        }
    }

    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let Some(entry) = heap.pop() else { break };
        out.push(entry.head);
        let c = &mut cursors[entry.cursor];
        if c.pos < c.list.len() {
            let head = c.list[c.pos].clone();
            c.pos += 1;
            heap.push(HeapEntry {
                head,
                cursor: entry.cursor,
            });
        }
    }
    out
}
