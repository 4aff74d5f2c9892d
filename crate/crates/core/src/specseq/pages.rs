use std::collections::BTreeMap;

use serde::Serialize;

use crate::linalg::{Matrix, Subspace};

use super::filtered::{quotient_coords, FilteredComplex};
use super::SpecSeqError;

/// One nonzero group `E_r^{s,t}` with `s + t` the total degree and `-t` the
/// filtration index, together with the rank of `d_r` out of it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PageEntry {
    pub r: u32,
    pub s: i64,
    pub t: i64,
    pub dim: usize,
    pub d_rank: usize,
}

/// `E_r^{f,k} = Z_ρ^{f,k} / (Z_{ρ-1}^{f+1,k} + B_ρ^{f,k})` with `ρ = r - 1`,
/// stored with a basis of representatives and the matrix of `d_r`.
#[derive(Debug, Clone)]
pub struct Group {
    pub filtration: i64,
    pub degree: i32,
    pub numerator: Subspace,
    pub denominator: Subspace,
    pub basis: Vec<Vec<u64>>,
    /// Matrix of `d_r` into `E_r^{f+ρ, k+1}` in the two bases.
    pub differential: Matrix,
}

impl Group {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// The page `E_r`, indexed so that `E_2^{s,t} = H^{s+t}(gr^{-t} C)` and
/// `d_r` has bidegree `(r, 1 - r)`. Relative to the usual `E_1 = H(gr)`
/// numbering for decreasing filtrations, `r` is one larger: `d_r` raises the
/// filtration index by `r - 1`.
#[derive(Debug, Clone)]
pub struct SpectralPage {
    pub r: u32,
    groups: BTreeMap<(i64, i32), Group>,
}

/// `Z_ρ^{f,k} = F^f ∩ d^{-1}(F^{f+ρ})`.
fn z_r(fc: &FilteredComplex, f: i64, k: i32, rho: i64) -> Subspace {
    let src = fc.f(k, f);
    if fc.dim(k + 1) == 0 {
        return src;
    }
    Subspace::preimage(&fc.diff(k), &fc.f(k + 1, f + rho)).intersect(&src)
}

/// `B_ρ^{f,k} = F^f ∩ d(F^{f-ρ+1})`.
fn b_r(fc: &FilteredComplex, f: i64, k: i32, rho: i64) -> Subspace {
    let n = fc.dim(k);
    if fc.dim(k - 1) == 0 || n == 0 {
        return Subspace::zero(fc.field(), n);
    }
    fc.f(k - 1, f - rho + 1).map(&fc.diff(k - 1)).intersect(&fc.f(k, f))
}

/// The page `E_r` for `r ≥ 2`, computed from the definition.
pub fn page(fc: &FilteredComplex, r: u32) -> SpectralPage {
    assert!(r >= 2, "pages start at r = 2");
    let rho = r as i64 - 1;
    let top = fc.top() as i64;
    let mut groups = BTreeMap::new();
    for k in fc.degrees() {
        for f in 0..=top {
            let numerator = z_r(fc, f, k, rho);
            let denominator = z_r(fc, f + 1, k, rho - 1).sum(&b_r(fc, f, k, rho));
            let basis = denominator.complement_in(&numerator);
            groups.insert(
                (f, k),
                Group {
                    filtration: f,
                    degree: k,
                    numerator,
                    denominator,
                    basis,
                    differential: Matrix::zeros(fc.field(), 0, 0),
                },
            );
        }
    }
    let keys: Vec<(i64, i32)> = groups.keys().copied().collect();
    for (f, k) in keys {
        let target = groups.get(&(f + rho, k + 1));
        let (tden, tbasis) = match target {
            Some(g) => (g.denominator.clone(), g.basis.clone()),
            None => (Subspace::zero(fc.field(), fc.dim(k + 1)), Vec::new()),
        };
        let g = &groups[&(f, k)];
        let d = fc.diff(k);
        let cols: Vec<Vec<u64>> = g
            .basis
            .iter()
            .map(|x| {
                if tbasis.is_empty() {
                    return Vec::new();
                }
                quotient_coords(&tden, &tbasis, &d.apply(x)).expect("d_r lands in the next group")
            })
            .collect();
        let m = Matrix::from_columns(fc.field(), tbasis.len(), &cols);
        groups.get_mut(&(f, k)).expect("present").differential = m;
    }
    SpectralPage { r, groups }
}

impl SpectralPage {
    pub fn group(&self, filtration: i64, degree: i32) -> Option<&Group> {
        self.groups.get(&(filtration, degree))
    }

    pub fn groups(&self) -> impl Iterator<Item = &Group> {
        self.groups.values()
    }

    /// Nonzero entries in `(s, t)` coordinates.
    pub fn entries(&self) -> Vec<PageEntry> {
        self.groups
            .values()
            .filter(|g| g.dim() > 0)
            .map(|g| {
                let t = -g.filtration;
                PageEntry {
                    r: self.r,
                    s: g.degree as i64 - t,
                    t,
                    dim: g.dim(),
                    d_rank: g.differential.rank(),
                }
            })
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.groups.values().map(Group::dim).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Whether every `d_r` vanishes.
    pub fn degenerate(&self) -> bool {
        self.groups.values().all(|g| g.differential.is_zero())
    }

    pub fn d_rank_total(&self) -> usize {
        self.groups.values().map(|g| g.differential.rank()).sum()
    }

    /// Rows `r s t dim d_rank`, one line per nonzero entry.
    pub fn to_table(&self) -> String {
        let mut out = format!("E_{}:\n", self.r);
        for e in self.entries() {
            out.push_str(&format!("  (s={}, t={}) dim {} d_rank {}\n", e.s, e.t, e.dim, e.d_rank));
        }
        out
    }
}

/// `E_2^{s,t} = H^{s+t}(gr^{-t} C)`.
pub fn initial_page(fc: &FilteredComplex) -> SpectralPage {
    page(fc, 2)
}

/// `E_{r+1}`, checked against `ker d_r / im d_r` at every bidegree.
pub fn turn_page(prev: &SpectralPage, fc: &FilteredComplex) -> Result<SpectralPage, SpecSeqError> {
    let next = page(fc, prev.r + 1);
    let rho = prev.r as i64 - 1;
    for g in next.groups() {
        let here = prev.group(g.filtration, g.degree).expect("same bidegrees");
        let incoming = prev
            .group(g.filtration - rho, g.degree - 1)
            .map_or(0, |s| s.differential.rank());
        let expect = here.dim() - here.differential.rank() - incoming;
        if expect != g.dim() {
            return Err(SpecSeqError::Inconsistent(format!(
                "E_{} at (f={}, k={}) has dim {} but ker/im gives {expect}",
                next.r,
                g.filtration,
                g.degree,
                g.dim()
            )));
        }
    }
    Ok(next)
}

/// All pages `E_2, …, E_{N+2}`; from `E_{N+2}` on every `d_r` leaves the
/// filtration range, so the last page is `E_∞`.
pub fn all_pages(fc: &FilteredComplex) -> Result<Vec<SpectralPage>, SpecSeqError> {
    let mut pages = vec![initial_page(fc)];
    while pages.last().expect("nonempty").r < fc.top() as u32 + 2 {
        let next = turn_page(pages.last().expect("nonempty"), fc)?;
        pages.push(next);
    }
    Ok(pages)
}

pub fn infinity_page(fc: &FilteredComplex) -> SpectralPage {
    page(fc, fc.top() as u32 + 2)
}

/// `E_∞^{f,k}` against `gr^f H^k(C)` computed directly, at every bidegree.
pub fn converges(fc: &FilteredComplex) -> bool {
    let inf = infinity_page(fc);
    inf.groups().all(|g| g.dim() == fc.induced_gr_dim(g.degree, g.filtration))
        && fc.degrees().all(|k| {
            inf.groups().filter(|g| g.degree == k).map(Group::dim).sum::<usize>() == fc.cohomology_dim(k)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Modulus;

    fn two_step(p: u64) -> FilteredComplex {
        let f = Modulus::new(p, 1).unwrap();
        let d = Matrix::from_rows(f, &[vec![1]]);
        FilteredComplex::from_levels(p, 0, vec![d], vec![vec![0], vec![1]], 1).unwrap()
    }

    #[test]
    fn two_step_example() {
        let fc = two_step(3);
        let e2 = initial_page(&fc);
        let entries = e2.entries();
        assert_eq!(entries.len(), 2);
        // E_2^{0,0} → E_2^{2,-1} is an isomorphism
        let src = entries.iter().find(|e| e.s == 0 && e.t == 0).unwrap();
        assert_eq!((src.dim, src.d_rank), (1, 1));
        assert!(entries.iter().any(|e| e.s == 2 && e.t == -1 && e.dim == 1));
        let e3 = turn_page(&e2, &fc).unwrap();
        assert!(e3.is_zero());
        assert!(infinity_page(&fc).is_zero());
        assert!(converges(&fc));
    }

    #[test]
    fn graded_complex_degenerates() {
        let f = Modulus::new(2, 1).unwrap();
        let d0 = Matrix::from_rows(f, &[vec![1, 0], vec![0, 0]]);
        let fc = FilteredComplex::from_levels(2, 0, vec![d0], vec![vec![0, 1], vec![0, 1]], 1).unwrap();
        let e2 = initial_page(&fc);
        assert!(e2.degenerate());
        assert_eq!(e2.total_dim(), 2);
        assert_eq!(infinity_page(&fc).entries(), {
            let mut e = e2.entries();
            for x in &mut e {
                x.r = 3;
            }
            e
        });
    }

    #[test]
    fn zero_complex() {
        let fc = FilteredComplex::from_levels(2, 0, vec![], vec![vec![]], 0).unwrap();
        assert!(initial_page(&fc).entries().is_empty());
    }
}
