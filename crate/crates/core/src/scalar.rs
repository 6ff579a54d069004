//! Integer capacity types.
//!
//! Every flow, cut and tree routine in this crate is generic over [`Capacity`].
//! Only exact integer types qualify: min-cut equalities are checked with `==`,
//! and flow decompositions rely on integrality.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{PrimInt, Signed};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// A signed integer capacity/flow value.
///
/// Signed because edge flows on undirected edges carry an orientation.
pub trait Capacity:
    PrimInt
    + Signed
    + Sum
    + Debug
    + Display
    + FromStr
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    fn from_usize(v: usize) -> Self {
        Self::from(v).expect("value does not fit the capacity type")
    }

    fn as_usize(self) -> usize {
        num_traits::ToPrimitive::to_usize(&self).expect("negative or oversized capacity")
    }

    fn saturating_sum<I: IntoIterator<Item = Self>>(it: I) -> Self {
        it.into_iter().fold(Self::zero(), |a, b| a.saturating_add(b))
    }
}

impl Capacity for i32 {}
impl Capacity for i64 {}
impl Capacity for i128 {}
