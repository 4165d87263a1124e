//! Exhaustive homomorphism enumeration between finite abelian groups.
//!
//! Elements are residue tuples against a list of cyclic orders. Checks that
//! need an external direct sum use the concatenated order list rather than a
//! canonical form so that coordinate projections stay trivial.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::group::{hom_group, FgGroup};

pub const DEFAULT_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("the oracle only handles finite groups")]
    InfiniteGroup,
    #[error("bound exceeded: {count} homomorphisms")]
    BoundExceeded { count: BigUint },
    #[error("group order does not fit in a machine word")]
    TooLarge,
}

/// A homomorphism given by the images of the source generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteHom {
    pub source: Vec<u64>,
    pub target: Vec<u64>,
    pub images: Vec<Vec<u64>>,
}

impl FiniteHom {
    pub fn is_well_defined(&self) -> bool {
        self.images.len() == self.source.len()
            && self.source.iter().zip(&self.images).all(|(&d, x)| {
                x.len() == self.target.len() && x.iter().zip(&self.target).all(|(&xi, &e)| xi < e && (d * xi) % e == 0)
            })
    }

    pub fn apply(&self, element: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.target.len()];
        for (&k, image) in element.iter().zip(&self.images) {
            for ((o, &x), &e) in out.iter_mut().zip(image).zip(&self.target) {
                *o = (*o + k % e * x) % e;
            }
        }
        out
    }

    pub fn add(&self, other: &FiniteHom) -> FiniteHom {
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(x, y)| x.iter().zip(y).zip(&self.target).map(|((a, b), e)| (a + b) % e).collect())
            .collect();
        FiniteHom { source: self.source.clone(), target: self.target.clone(), images }
    }

    /// `other` after `self`.
    pub fn then(&self, other: &FiniteHom) -> FiniteHom {
        let images = self.images.iter().map(|x| other.apply(x)).collect();
        FiniteHom { source: self.source.clone(), target: other.target.clone(), images }
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().flatten().all(|&x| x == 0)
    }

    pub fn order(&self) -> u64 {
        self.images.iter().fold(1, |acc, x| acc.lcm(&element_order(x, &self.target)))
    }

    /// Coordinates `range` of the target.
    fn project(&self, range: core::ops::Range<usize>) -> FiniteHom {
        FiniteHom {
            source: self.source.clone(),
            target: self.target[range.clone()].to_vec(),
            images: self.images.iter().map(|x| x[range.clone()].to_vec()).collect(),
        }
    }
}

fn element_order(x: &[u64], orders: &[u64]) -> u64 {
    x.iter().zip(orders).fold(1, |acc, (&xi, &e)| acc.lcm(&(e / xi.gcd(&e))))
}

fn orders(g: &FgGroup) -> Result<Vec<u64>, OracleError> {
    if !g.is_finite() {
        return Err(OracleError::InfiniteGroup);
    }
    g.invariant_factors().iter().map(|d| d.to_u64().ok_or(OracleError::TooLarge)).collect()
}

/// `prod_ij gcd(d_i, e_j)`.
pub fn hom_count(a: &FgGroup, b: &FgGroup) -> Result<BigUint, OracleError> {
    Ok(count(&orders(a)?, &orders(b)?))
}

fn count(src: &[u64], dst: &[u64]) -> BigUint {
    src.iter().flat_map(|d| dst.iter().map(move |e| BigUint::from(d.gcd(e)))).fold(BigUint::one(), |acc, g| acc * g)
}

fn check_bound(count: BigUint, bound: u64) -> Result<(), OracleError> {
    if count > BigUint::from(bound) {
        Err(OracleError::BoundExceeded { count })
    } else {
        Ok(())
    }
}

/// All homomorphisms, lexicographic in the image tuples.
pub fn enumerate_homs(a: &FgGroup, b: &FgGroup, bound: u64) -> Result<Vec<FiniteHom>, OracleError> {
    enumerate_raw(&orders(a)?, &orders(b)?, bound)
}

fn enumerate_raw(src: &[u64], dst: &[u64], bound: u64) -> Result<Vec<FiniteHom>, OracleError> {
    check_bound(count(src, dst), bound)?;
    // admissible image coordinates: multiples of e / gcd(d, e)
    let choices: Vec<Vec<u64>> = src
        .iter()
        .flat_map(|&d| {
            dst.iter().map(move |&e| {
                let step = e / d.gcd(&e);
                (0..e).step_by(step as usize).collect()
            })
        })
        .collect();
    let mut out = Vec::new();
    let mut cursor = vec![0usize; choices.len()];
    loop {
        let flat: Vec<u64> = cursor.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
        let images = if dst.is_empty() {
            vec![Vec::new(); src.len()]
        } else {
            flat.chunks(dst.len()).map(<[u64]>::to_vec).collect()
        };
        out.push(FiniteHom { source: src.to_vec(), target: dst.to_vec(), images });
        // odometer, last coordinate fastest
        let mut k = choices.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            cursor[k] += 1;
            if cursor[k] < choices[k].len() {
                break;
            }
            cursor[k] = 0;
        }
    }
}

fn elements(orders: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &e in orders {
        out = out
            .into_iter()
            .flat_map(|x| {
                (0..e).map(move |v| {
                    let mut y = x.clone();
                    y.push(v);
                    y
                })
            })
            .collect();
    }
    out
}

fn order_multiset(orders: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = elements(orders).iter().map(|x| element_order(x, orders)).collect();
    out.sort_unstable();
    out
}

/// Element orders of the enumerated group under pointwise addition equal
/// those of the computed `Hom(a, b)`.
pub fn hom_structure_check(a: &FgGroup, b: &FgGroup, bound: u64) -> Result<bool, OracleError> {
    let homs = enumerate_homs(a, b, bound)?;
    let mut enumerated: Vec<u64> = homs.iter().map(FiniteHom::order).collect();
    enumerated.sort_unstable();
    let predicted = orders(&hom_group(a, b))?;
    Ok(enumerated == order_multiset(&predicted))
}

/// `Hom(a, b (+) c)` is in bijection with `Hom(a, b) x Hom(a, c)` through
/// the coordinate projections.
pub fn finite_sum_additivity_check(a: &FgGroup, b: &FgGroup, c: &FgGroup, bound: u64) -> Result<bool, OracleError> {
    let src = orders(a)?;
    let (ob, oc) = (orders(b)?, orders(c)?);
    let hb: BTreeSet<FiniteHom> = enumerate_raw(&src, &ob, bound)?.into_iter().collect();
    let hc: BTreeSet<FiniteHom> = enumerate_raw(&src, &oc, bound)?.into_iter().collect();
    let sum: Vec<u64> = ob.iter().chain(&oc).copied().collect();
    let hs = enumerate_raw(&src, &sum, bound)?;
    if hs.len() != hb.len() * hc.len() {
        return Ok(false);
    }
    let split = ob.len();
    let mut pairs = BTreeSet::new();
    for h in &hs {
        let (pb, pc) = (h.project(0..split), h.project(split..sum.len()));
        if !hb.contains(&pb) || !hc.contains(&pc) || !pairs.insert((pb, pc)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every `a -> b^(n)` decomposes uniquely into `n` coordinate maps and its
/// image lies in the sub-sum over the coordinates where it is nonzero.
pub fn image_support_check(a: &FgGroup, b: &FgGroup, n: usize, bound: u64) -> Result<bool, OracleError> {
    let src = orders(a)?;
    let ob = orders(b)?;
    let order_a: u64 = src.iter().product();
    if order_a > bound {
        return Err(OracleError::BoundExceeded { count: BigUint::from(order_a) });
    }
    let single: BTreeSet<FiniteHom> = enumerate_raw(&src, &ob, bound)?.into_iter().collect();
    let power: Vec<u64> = ob.iter().copied().cycle().take(ob.len() * n).collect();
    let homs = enumerate_raw(&src, &power, bound)?;
    if BigUint::from(homs.len()) != BigUint::from(single.len()).pow(n as u32) {
        return Ok(false);
    }
    let all_a = elements(&src);
    let w = ob.len();
    let mut seen = BTreeSet::new();
    for h in &homs {
        let parts: Vec<FiniteHom> = (0..n).map(|k| h.project(k * w..(k + 1) * w)).collect();
        if parts.iter().any(|p| !single.contains(p)) || !seen.insert(parts.clone()) {
            return Ok(false);
        }
        let support: Vec<bool> = parts.iter().map(|p| !p.is_zero()).collect();
        for x in &all_a {
            let y = h.apply(x);
            let outside = (0..n).any(|k| !support[k] && y[k * w..(k + 1) * w].iter().any(|&v| v != 0));
            if outside {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
