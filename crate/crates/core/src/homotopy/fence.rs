//! Assembling a certificate chain into one map on `dom × J_k`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::models;
use crate::multimap::MultiMap;
use crate::space::FiniteSpace;

use super::one_step_unchecked;

/// A homotopy realized on the literal product with a fence.
#[derive(Debug, Clone)]
pub struct FenceHomotopy {
    /// `dom × J_k ⇉ cod`, slice `t` at points `(x, t)`.
    pub map: MultiMap,
    pub k: usize,
    /// Index into the certificate for every fence slice.
    pub slices: Vec<usize>,
}

/// Lays certificate entries on consecutive fence points.
///
/// In `J_k` the odd points are open, so slice `2j+1` must be one step from
/// both slices `2j` and `2j+2`. When a certificate step points the other way
/// the previous entry is repeated once to flip parity, so `k` can exceed
/// `certificate.len() - 1`.
pub fn fence_homotopy(certificate: &[MultiMap]) -> Result<FenceHomotopy> {
    let first = certificate.first().ok_or(Error::EmptySubset)?;
    let cod = first.cod().clone();
    let mut slices = vec![0usize];
    for (i, entry) in certificate.iter().enumerate().skip(1) {
        if *entry.dom() != *first.dom() || *entry.cod() != cod {
            return Err(Error::DomainMismatch(
                "certificate entries disagree on spaces".into(),
            ));
        }
        let prev = &certificate[*slices.last().unwrap()];
        let into_open = slices.len() % 2 == 1;
        let fits = |into_open: bool| {
            if into_open {
                one_step_unchecked(&cod, prev, entry)
            } else {
                one_step_unchecked(&cod, entry, prev)
            }
        };
        if !fits(into_open) {
            if !fits(!into_open) {
                return Err(Error::NotContinuous(format!("certificate step {i}")));
            }
            slices.push(*slices.last().unwrap());
        }
        slices.push(i);
    }
    let k = slices.len() - 1;
    let dom = first.dom();
    let product = Arc::new(FiniteSpace::product(dom, &models::fence(k))?);
    let map = MultiMap::new(
        product,
        cod,
        (0..dom.len())
            .flat_map(|x| slices.iter().map(move |&s| certificate[s].value(x)))
            .collect(),
    )?;
    Ok(FenceHomotopy { map, k, slices })
}
