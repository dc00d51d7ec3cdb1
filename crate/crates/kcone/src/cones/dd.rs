//! Double description: exact conversion from an inequality description to
//! extreme rays (and back, for facet enumeration).
//!
//! The lineality space is split off first so the incremental step only ever
//! sees pointed cones, where the combinatorial adjacency test is valid. The
//! dimensions in this crate are at most ten and constraint counts stay
//! small, so clarity wins over large-scale tricks (no preordering of
//! constraints, dense exact arithmetic).

use num_traits::{One, Signed, Zero};

use crate::arith::{dot, ints_to_rats, primitive_integer, Int, QMat, QVec, Rat};
use crate::error::{Error, Result};

use super::{PairingForm, RationalCone};

/// Generator description of a cone: extreme rays of the pointed part plus a
/// basis of the lineality space. Vectors are primitive integers, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VRep {
    pub lineality: Vec<Vec<Int>>,
    pub rays: Vec<Vec<Int>>,
}

impl VRep {
    /// All generators, with lineality emitted as +/- pairs.
    pub fn generators(&self) -> Vec<QVec> {
        let mut out: Vec<QVec> = Vec::new();
        for l in &self.lineality {
            out.push(ints_to_rats(l));
            out.push(ints_to_rats(&l.iter().map(|x| -x.clone()).collect::<Vec<_>>()));
        }
        for r in &self.rays {
            out.push(ints_to_rats(r));
        }
        out
    }

    pub fn is_trivial(&self) -> bool {
        self.lineality.is_empty() && self.rays.is_empty()
    }
}

/// Extreme rays and lineality of {x : n·x >= 0 for all n in normals}.
pub fn extreme_rays(normals: &[QVec], dim: usize) -> VRep {
    assert!(normals.iter().all(|n| n.len() == dim));
    assert!(normals.len() <= 128, "active sets are tracked in a u128");
    if normals.is_empty() {
        let lineality = (0..dim).map(|i| unit_int(dim, i)).collect();
        return VRep { lineality, rays: Vec::new() };
    }

    // Lineality = kernel of the constraint matrix.
    let mat = QMat::from_rows(normals.to_vec());
    let kernel = mat.kernel_basis();

    // Complement of the lineality inside the coordinate subspace spanned by
    // the non-pivot columns of the kernel's row echelon form.
    let keep: Vec<usize> = if kernel.is_empty() {
        (0..dim).collect()
    } else {
        let mut km = QMat::from_rows(kernel.clone());
        let pivots = km.rref();
        (0..dim).filter(|c| !pivots.contains(c)).collect()
    };

    let restricted: Vec<QVec> = normals
        .iter()
        .map(|n| keep.iter().map(|&c| n[c].clone()).collect())
        .collect();
    let pointed = pointed_extreme_rays(&restricted, keep.len());

    // Lift back to the full space (scatter into the kept coordinates).
    let mut rays: Vec<Vec<Int>> = pointed
        .into_iter()
        .map(|r| {
            let mut full = vec![Rat::zero(); dim];
            for (slot, &c) in keep.iter().enumerate() {
                full[c] = r[slot].clone();
            }
            primitive_integer(&full)
        })
        .collect();
    rays.sort();

    let mut lineality: Vec<Vec<Int>> = kernel
        .iter()
        .map(|v| {
            let mut p = primitive_integer(v);
            if let Some(first) = p.iter().find(|x| !x.is_zero()) {
                if first.is_negative() {
                    p = p.iter().map(|x| -x.clone()).collect();
                }
            }
            p
        })
        .collect();
    lineality.sort();

    VRep { lineality, rays }
}

fn unit_int(dim: usize, i: usize) -> Vec<Int> {
    let mut v = vec![Int::zero(); dim];
    v[i] = Int::one();
    v
}

/// Incremental double description for a pointed cone (the constraint matrix
/// has full column rank).
fn pointed_extreme_rays(normals: &[QVec], dim: usize) -> Vec<QVec> {
    if dim == 0 {
        return Vec::new();
    }
    // Pick dim linearly independent constraints for the initial simplicial
    // cone {x : Bx >= 0}, whose extreme rays are the columns of B^{-1}.
    let mut chosen: Vec<usize> = Vec::new();
    {
        let mut work = QMat::from_rows(normals.to_vec());
        let mut rank = 0usize;
        let mut row_of: Vec<usize> = (0..normals.len()).collect();
        for c in 0..dim {
            let Some(pr) = (rank..normals.len()).find(|&i| !work.at(i, c).is_zero()) else {
                continue;
            };
            work.swap_rows(rank, pr);
            row_of.swap(rank, pr);
            let inv = work.at(rank, c).recip();
            for j in 0..dim {
                let v = work.at(rank, j) * &inv;
                *work.at_mut(rank, j) = v;
            }
            for i in 0..normals.len() {
                if i != rank && !work.at(i, c).is_zero() {
                    let f = work.at(i, c).clone();
                    for j in 0..dim {
                        let v = work.at(i, j) - &f * work.at(rank, j);
                        *work.at_mut(i, j) = v;
                    }
                }
            }
            chosen.push(row_of[rank]);
            rank += 1;
            if rank == dim {
                break;
            }
        }
        assert_eq!(rank, dim, "pointed cone requires full-rank constraints");
    }
    chosen.sort();

    let basis = QMat::from_rows(chosen.iter().map(|&i| normals[i].clone()).collect());
    let mut rays: Vec<QVec> = (0..dim)
        .map(|j| {
            let mut rhs = vec![Rat::zero(); dim];
            rhs[j] = Rat::one();
            let col = basis.solve(&rhs).expect("initial basis is invertible");
            ints_to_rats(&primitive_integer(&col))
        })
        .collect();

    // Processing order: the chosen rows first, then the rest in input order.
    let mut order: Vec<usize> = chosen.clone();
    order.extend((0..normals.len()).filter(|i| !chosen.contains(i)));

    // active bit k <=> ray is tight on order[k]
    let mut active: Vec<u128> = (0..dim)
        .map(|j| {
            let mut bits = 0u128;
            for (k, &_row) in chosen.iter().enumerate() {
                if k != j {
                    bits |= 1 << k;
                }
            }
            bits
        })
        .collect();

    for step in dim..order.len() {
        let n = &normals[order[step]];
        let vals: Vec<Rat> = rays.iter().map(|r| dot(n, r)).collect();
        if !vals.iter().any(|v| v.is_negative()) {
            for (j, v) in vals.iter().enumerate() {
                if v.is_zero() {
                    active[j] |= 1 << step;
                }
            }
            continue;
        }

        let mut new_rays: Vec<QVec> = Vec::new();
        let mut new_active: Vec<u128> = Vec::new();
        for (j, v) in vals.iter().enumerate() {
            if !v.is_negative() {
                new_rays.push(rays[j].clone());
                new_active.push(active[j] | if v.is_zero() { 1 << step } else { 0 });
            }
        }
        for (p, vp) in vals.iter().enumerate() {
            if !vp.is_positive() {
                continue;
            }
            for (q, vq) in vals.iter().enumerate() {
                if !vq.is_negative() {
                    continue;
                }
                let common = active[p] & active[q];
                let adjacent = (0..rays.len())
                    .all(|o| o == p || o == q || (active[o] & common) != common);
                if !adjacent {
                    continue;
                }
                // vp*rq - vq*rp: positive combination landing on the wall
                let combined: QVec = rays[p]
                    .iter()
                    .zip(&rays[q])
                    .map(|(rp, rq)| vp * rq - vq * rp)
                    .collect();
                let combined = ints_to_rats(&primitive_integer(&combined));
                let mut bits = 1u128 << step;
                for (k, &row) in order[..step].iter().enumerate() {
                    if dot(&normals[row], &combined).is_zero() {
                        bits |= 1 << k;
                    }
                }
                new_rays.push(combined);
                new_active.push(bits);
            }
        }
        rays = new_rays;
        active = new_active;
    }
    rays
}

/// Facet covectors (standard dot) of the cone generated by `rays`:
/// inequality normals plus +/- pairs for the equations cutting the span.
pub fn facet_normals(rays: &[QVec], dim: usize) -> Vec<QVec> {
    let vrep = extreme_rays(rays, dim);
    vrep.generators()
}

/// The dual cone {y : <y, r> >= 0 for all generators r} under the given
/// form, with both generator and inequality descriptions.
pub fn dual_cone(cone: &RationalCone, form: PairingForm) -> Result<RationalCone> {
    if cone.rays().is_empty() {
        return Err(Error::Degenerate);
    }
    if cone.rays().len() > 128 {
        return Err(Error::Malformed("at most 128 generators are supported".into()));
    }
    let dim = cone.dim();
    let normals: Vec<QVec> = cone.rays().iter().map(|r| form.normal_of(r)).collect();
    let vrep = extreme_rays(&normals, dim);
    if vrep.is_trivial() {
        // the dual is the origin; represent it with no usable generators
        return Err(Error::Degenerate);
    }
    let generators = vrep.generators();
    if generators.len() > 128 {
        return Err(Error::Malformed("dual has too many extreme rays for facet enumeration".into()));
    }
    let facets = facet_normals(&generators, dim);
    Ok(RationalCone::from_rays(generators)?.with_facets(facets))
}
