//! Integral monoids: a finite generating set inside the monoid's own group
//! completion, stored in invariant-factor coordinates. Everything here is
//! exact; membership is decided by a graded search after the unit part is
//! split off, never by heuristics.

use crate::MonoidError;
use cones::{dual_cone, lineality_space, RationalCone};
use lattice::{
    cokernel, image_subgroup, kernel_lattice, smith_normal_form, solve_integer, subgroup_contains,
    FinAbGroup, GroupHom, IntMatrix,
};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::HashSet;

/// Default cap on bounded searches (certificate rewriting for unit
/// coefficients). Generous for every non-pathological input.
pub const DEFAULT_SEARCH_BOUND: u64 = 4096;

/// A finitely generated integral monoid `P`, embedded in its group
/// completion. The ambient group *is* the group completion: the generators
/// always generate it, which `new` checks. Generators are stored reduced,
/// deduplicated, nonzero, and sorted, so equal values are structurally equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralMonoid {
    ambient: FinAbGroup,
    generators: Vec<Vec<BigInt>>,
}

impl IntegralMonoid {
    pub fn new(ambient: FinAbGroup, generators: Vec<Vec<BigInt>>) -> Result<Self, MonoidError> {
        let m = Self::raw(ambient, generators)?;
        let hom = GroupHom::new(
            FinAbGroup::free(m.generators.len()),
            m.ambient.clone(),
            m.gen_matrix(),
        )
        .expect("a free source has no relations to kill");
        if !cokernel(&hom).0.is_trivial() {
            return Err(MonoidError::Precondition(
                "generators do not generate the ambient group".into(),
            ));
        }
        Ok(m)
    }

    /// Cleaning without the spanning check, for internal scratch monoids.
    fn raw(ambient: FinAbGroup, generators: Vec<Vec<BigInt>>) -> Result<Self, MonoidError> {
        let mut cleaned: Vec<Vec<BigInt>> = Vec::new();
        for g in &generators {
            if g.len() != ambient.coords() {
                return Err(MonoidError::Shape(format!(
                    "generator length {} does not match the {} ambient coordinates",
                    g.len(),
                    ambient.coords()
                )));
            }
            let r = ambient.reduce(g);
            if r.iter().all(Zero::is_zero) {
                continue;
            }
            if !cleaned.contains(&r) {
                cleaned.push(r);
            }
        }
        cleaned.sort();
        Ok(IntegralMonoid { ambient, generators: cleaned })
    }

    /// The trivial monoid. Its group completion is the trivial group, so the
    /// empty generator list is consistent with the spanning invariant.
    pub fn trivial() -> Self {
        IntegralMonoid { ambient: FinAbGroup::trivial(), generators: Vec::new() }
    }

    /// `Z≥0^r` inside `Z^r`.
    pub fn nonneg(r: usize) -> Self {
        let mut generators = Vec::new();
        for i in 0..r {
            let mut e = vec![BigInt::zero(); r];
            e[i] = BigInt::from(1);
            generators.push(e);
        }
        generators.sort();
        IntegralMonoid { ambient: FinAbGroup::free(r), generators }
    }

    /// `Z^r` as a monoid: both signs of every basis vector.
    pub fn free_group(r: usize) -> Self {
        let mut generators = Vec::new();
        for i in 0..r {
            let mut e = vec![BigInt::zero(); r];
            e[i] = BigInt::from(1);
            generators.push(e.clone());
            e[i] = BigInt::from(-1);
            generators.push(e);
        }
        generators.sort();
        IntegralMonoid { ambient: FinAbGroup::free(r), generators }
    }

    /// A whole finite-or-free group viewed as a monoid: every basis vector in
    /// both signs (torsion coordinates need only one).
    pub fn full_group(g: FinAbGroup) -> Self {
        let n = g.coords();
        let mut generators = Vec::new();
        for i in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::from(1);
            generators.push(e.clone());
            if i < g.free_rank() {
                e[i] = BigInt::from(-1);
                generators.push(e);
            }
        }
        generators.sort();
        IntegralMonoid { ambient: g, generators }
    }

    /// The monoid generated by `elements` of an ambient group, re-based onto
    /// the subgroup they generate (which becomes the group completion).
    /// Returns the monoid and the inclusion of its ambient into the original
    /// group.
    pub fn spanning(
        ambient: &FinAbGroup,
        elements: &[Vec<BigInt>],
    ) -> Result<(Self, GroupHom), MonoidError> {
        for e in elements {
            if e.len() != ambient.coords() {
                return Err(MonoidError::Shape(format!(
                    "element length {} does not match the {} ambient coordinates",
                    e.len(),
                    ambient.coords()
                )));
            }
        }
        let cols: Vec<Vec<BigInt>> = elements.iter().map(|e| ambient.reduce(e)).collect();
        let mat = IntMatrix::from_columns(ambient.coords(), &cols);
        let hom = GroupHom::new(FinAbGroup::free(elements.len()), ambient.clone(), mat)
            .expect("a free source has no relations to kill");
        let (sub, incl, proj) = image_subgroup(&hom);
        let gens: Vec<Vec<BigInt>> = (0..elements.len())
            .map(|j| sub.reduce(&proj.matrix().column(j)))
            .collect();
        let m = Self::new(sub, gens).expect("images of the elements span their subgroup");
        Ok((m, incl))
    }

    /// The monoid generated by integer points of `Z^d`.
    pub fn from_lattice_points(
        dim: usize,
        points: &[Vec<BigInt>],
    ) -> Result<(Self, GroupHom), MonoidError> {
        Self::spanning(&FinAbGroup::free(dim), points)
    }

    pub fn ambient(&self) -> &FinAbGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn is_trivial_monoid(&self) -> bool {
        self.generators.is_empty()
    }

    /// coords × s matrix whose columns are the generators.
    pub(crate) fn gen_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.ambient.coords(), &self.generators)
    }

    /// The cone in the free part of the ambient spanned by the generators'
    /// free coordinates.
    pub fn recession_cone(&self) -> RationalCone {
        let r = self.ambient.free_rank();
        let rays = self.generators.iter().map(|g| g[..r].to_vec()).collect();
        RationalCone::new(r, rays).expect("generator free parts have the right length")
    }

    /// Indices of generators whose free part lies in the lineality space of
    /// the recession cone. These span exactly the unit group.
    fn unit_generator_indices(&self) -> Vec<usize> {
        unit_indices(&self.ambient, &self.generators)
    }

    /// Generators that are invertible inside the monoid.
    pub fn unit_generators(&self) -> Vec<Vec<BigInt>> {
        self.unit_generator_indices()
            .into_iter()
            .map(|i| self.generators[i].clone())
            .collect()
    }

    /// The unit group `P ∩ (-P)` as an abstract group with its inclusion
    /// into the ambient. A sum of generators is invertible exactly when each
    /// summand is, so the unit generators span the whole unit group.
    pub fn units(&self) -> UnitsGroup {
        let cols = self.unit_generators();
        let mat = IntMatrix::from_columns(self.ambient.coords(), &cols);
        let hom = GroupHom::new(FinAbGroup::free(cols.len()), self.ambient.clone(), mat)
            .expect("a free source has no relations to kill");
        let (group, inclusion, _) = image_subgroup(&hom);
        UnitsGroup { group, inclusion }
    }

    pub fn is_sharp(&self) -> bool {
        self.unit_generator_indices().is_empty()
    }

    /// Exact membership: is `a` a nonnegative integer combination of the
    /// generators?
    pub fn member(&self, a: &[BigInt]) -> Result<bool, MonoidError> {
        if a.len() != self.ambient.coords() {
            return Err(MonoidError::Shape(format!(
                "element length {} does not match the {} ambient coordinates",
                a.len(),
                self.ambient.coords()
            )));
        }
        Ok(span_contains(&self.ambient, &self.generators, a))
    }

    /// Membership with an exponent certificate over the stored generator
    /// order. Deciding membership is exact and unbounded; only rewriting the
    /// unit part of a certificate into nonnegative exponents searches, and
    /// that search is capped by `bound`.
    pub fn member_certificate(
        &self,
        a: &[BigInt],
        bound: u64,
    ) -> Result<Option<Vec<BigInt>>, MonoidError> {
        if a.len() != self.ambient.coords() {
            return Err(MonoidError::Shape(format!(
                "element length {} does not match the {} ambient coordinates",
                a.len(),
                self.ambient.coords()
            )));
        }
        let cert = span_certificate(&self.ambient, &self.generators, a, bound)?;
        if let Some(c) = &cert {
            debug_assert!(self.combination_equals(c, a), "certificate recombines to the input");
        }
        Ok(cert)
    }

    fn combination_equals(&self, cert: &[BigInt], a: &[BigInt]) -> bool {
        let mut acc = vec![BigInt::zero(); self.ambient.coords()];
        for (c, g) in cert.iter().zip(&self.generators) {
            for (t, x) in acc.iter_mut().zip(g) {
                *t += c * x;
            }
        }
        self.ambient.elems_equal(&acc, a)
    }

    /// Equality as submonoids of a common ambient group: same ambient and
    /// mutual membership of generators.
    pub fn same_submonoid(&self, other: &IntegralMonoid) -> bool {
        self.ambient == other.ambient
            && other
                .generators
                .iter()
                .all(|g| span_contains(&self.ambient, &self.generators, g))
            && self
                .generators
                .iter()
                .all(|g| span_contains(&other.ambient, &other.generators, g))
    }

    /// Drops every generator that the remaining ones already produce. The
    /// sweep is deterministic (ascending over the sorted list), so equal
    /// monoids minimalize identically.
    pub fn minimalized(&self) -> Self {
        let mut keep = self.generators.clone();
        let mut i = 0;
        while i < keep.len() {
            let mut others: Vec<Vec<BigInt>> = Vec::with_capacity(keep.len() - 1);
            for (j, g) in keep.iter().enumerate() {
                if j != i {
                    others.push(g.clone());
                }
            }
            if span_contains(&self.ambient, &others, &keep[i]) {
                keep.remove(i);
            } else {
                i += 1;
            }
        }
        IntegralMonoid { ambient: self.ambient.clone(), generators: keep }
    }

    /// Structure flags. Fineness and integrality are invariants of the
    /// representation itself — they are reported for completeness, not
    /// computed.
    pub fn predicates(&self) -> MonoidPredicates {
        let sat = crate::ops::saturate(self);
        let is_saturated = sat
            .generators()
            .iter()
            .all(|g| span_contains(&self.ambient, &self.generators, g));
        let is_sharp = self.is_sharp();
        MonoidPredicates {
            is_fine: true,
            is_integral: true,
            is_saturated,
            is_sharp,
            is_toric: is_saturated && is_sharp,
        }
    }
}

/// The unit group of an integral monoid, as an abstract group plus its
/// inclusion into the monoid's ambient group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitsGroup {
    pub group: FinAbGroup,
    pub inclusion: GroupHom,
}

impl UnitsGroup {
    pub fn contains(&self, x: &[BigInt]) -> bool {
        subgroup_contains(&self.inclusion, x)
    }
}

/// Structure flags of an integral monoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidPredicates {
    pub is_fine: bool,
    pub is_integral: bool,
    pub is_saturated: bool,
    pub is_sharp: bool,
    pub is_toric: bool,
}

impl Serialize for IntegralMonoid {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = ser.serialize_struct("IntegralMonoid", 2)?;
        s.serialize_field("ambient", &self.ambient)?;
        let gens: Vec<Vec<String>> = self
            .generators
            .iter()
            .map(|g| lattice::decimal::encode_vec(g))
            .collect();
        s.serialize_field("generators", &gens)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for IntegralMonoid {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            ambient: FinAbGroup,
            generators: Vec<Vec<String>>,
        }
        let raw = Raw::deserialize(de)?;
        let mut gens = Vec::new();
        for g in &raw.generators {
            gens.push(lattice::decimal::decode_vec(g).map_err(D::Error::custom)?);
        }
        IntegralMonoid::new(raw.ambient, gens).map_err(|e| D::Error::custom(e.to_string()))
    }
}

fn rank_of(m: &IntMatrix) -> usize {
    smith_normal_form(m).rank()
}

/// Indices of the generators whose free part lies in the span of the
/// lineality space of the cone generated by all free parts. (Torsion-only
/// generators qualify: their free part is zero.)
pub(crate) fn unit_indices(ambient: &FinAbGroup, gens: &[Vec<BigInt>]) -> Vec<usize> {
    let r = ambient.free_rank();
    let rays: Vec<Vec<BigInt>> = gens.iter().map(|g| g[..r].to_vec()).collect();
    let cone = RationalCone::new(r, rays).expect("free parts have the right length");
    let lin = lineality_space(&cone);
    let lin_rank = rank_of(&IntMatrix::from_columns(r, &lin));
    let mut out = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let mut cols = lin.clone();
        cols.push(g[..r].to_vec());
        if rank_of(&IntMatrix::from_columns(r, &cols)) == lin_rank {
            out.push(i);
        }
    }
    out
}

/// Exact membership of `a` in the nonnegative span of `gens` inside
/// `ambient`. Unit generators are split off through the quotient by the
/// subgroup they generate; what remains is sharp and is searched with a
/// strictly decreasing grading.
pub(crate) fn span_contains(ambient: &FinAbGroup, gens: &[Vec<BigInt>], a: &[BigInt]) -> bool {
    let a = ambient.reduce(a);
    if a.iter().all(Zero::is_zero) {
        return true;
    }
    if gens.is_empty() {
        return false;
    }
    let units = unit_indices(ambient, gens);
    if units.is_empty() {
        return sharp_member(ambient, gens, &a).is_some();
    }
    let (abar_grp, pibar, _) = unit_quotient(ambient, gens, &units);
    let img: Vec<Vec<BigInt>> = gens
        .iter()
        .enumerate()
        .filter(|(i, _)| !units.contains(i))
        .map(|(_, g)| pibar.apply(g))
        .collect();
    // Membership descends to the sharp quotient: the fiber over any class of
    // the quotient differs from a monoid element by a unit, which is itself
    // in the monoid.
    let abar = pibar.apply(&a);
    span_contains(&abar_grp, &img, &abar)
}

/// Quotient of the ambient by the subgroup spanned by the unit generators:
/// `(quotient group, projection, unit columns hom)`.
fn unit_quotient(
    ambient: &FinAbGroup,
    gens: &[Vec<BigInt>],
    units: &[usize],
) -> (FinAbGroup, GroupHom, GroupHom) {
    let cols: Vec<Vec<BigInt>> = units.iter().map(|&i| gens[i].clone()).collect();
    let mat = IntMatrix::from_columns(ambient.coords(), &cols);
    let w_hom = GroupHom::new(FinAbGroup::free(cols.len()), ambient.clone(), mat)
        .expect("a free source has no relations to kill");
    let (_ugrp, uincl, _) = image_subgroup(&w_hom);
    let (abar_grp, pibar) = cokernel(&uincl);
    (abar_grp, pibar, w_hom)
}

/// Membership with certificate. The sharp part is exact; rewriting the unit
/// coefficients into nonnegative exponents may search for a strictly
/// positive relation among the unit generators, capped by `bound`.
pub(crate) fn span_certificate(
    ambient: &FinAbGroup,
    gens: &[Vec<BigInt>],
    a: &[BigInt],
    bound: u64,
) -> Result<Option<Vec<BigInt>>, MonoidError> {
    let a = ambient.reduce(a);
    if a.iter().all(Zero::is_zero) {
        return Ok(Some(vec![BigInt::zero(); gens.len()]));
    }
    if gens.is_empty() {
        return Ok(None);
    }
    let units = unit_indices(ambient, gens);
    if units.is_empty() {
        return Ok(sharp_member(ambient, gens, &a));
    }
    let (abar_grp, pibar, w_hom) = unit_quotient(ambient, gens, &units);
    let mut img: Vec<Vec<BigInt>> = Vec::new();
    let mut img_src: Vec<usize> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if !units.contains(&i) {
            img.push(pibar.apply(g));
            img_src.push(i);
        }
    }
    let abar = pibar.apply(&a);
    let c_img = match sharp_member(&abar_grp, &img, &abar) {
        None => return Ok(None),
        Some(c) => c,
    };
    let mut cert = vec![BigInt::zero(); gens.len()];
    for (c, &i) in c_img.iter().zip(&img_src) {
        cert[i] = c.clone();
    }
    // The residue after the sharp part is a unit; write it over the unit
    // generators with integer exponents first.
    let mut w = a.clone();
    for (c, g) in cert.iter().zip(gens) {
        for (t, x) in w.iter_mut().zip(g) {
            *t -= c * x;
        }
    }
    let w = ambient.reduce(&w);
    let aug = w_hom.matrix().hstack(&ambient.relation_matrix());
    let sol = solve_integer(&aug, &w)
        .expect("the sharp-quotient residue lies in the unit subgroup");
    let mut m: Vec<BigInt> = sol[..units.len()].to_vec();
    if m.iter().any(Signed::is_negative) {
        // Shift by a strictly positive relation among the unit generators;
        // one exists because their nonnegative span is a group.
        let klat = kernel_lattice(&w_hom);
        let kvec = positive_kernel_vector(&klat, bound)?;
        let mut shift = BigInt::zero();
        for (mj, kj) in m.iter().zip(&kvec) {
            if mj.is_negative() {
                let need = (-mj + kj - 1) / kj; // ceil(-mj / kj), kj ≥ 1
                if need > shift {
                    shift = need;
                }
            }
        }
        for (mj, kj) in m.iter_mut().zip(&kvec) {
            *mj += &shift * kj;
        }
    }
    for (mj, &i) in m.iter().zip(&units) {
        cert[i] = &cert[i] + mj;
    }
    Ok(Some(cert))
}

/// A vector in the column span of `klat` with every component ≥ 1, found by
/// scanning coefficient combinations in growing max-norm shells. At most
/// `bound` combinations are examined.
fn positive_kernel_vector(klat: &IntMatrix, bound: u64) -> Result<Vec<BigInt>, MonoidError> {
    let q = klat.cols();
    if q == 0 {
        return Err(MonoidError::BoundExceeded(
            "no relations among the unit generators".into(),
        ));
    }
    let mut examined: u64 = 0;
    let one = BigInt::from(1);
    for shell in 1i64.. {
        let mut coeff = vec![-shell; q];
        loop {
            if coeff.iter().any(|c| c.abs() == shell) {
                examined += 1;
                if examined > bound {
                    return Err(MonoidError::BoundExceeded(format!(
                        "no strictly positive unit relation within {bound} candidates"
                    )));
                }
                let y: Vec<BigInt> = coeff.iter().map(|&c| BigInt::from(c)).collect();
                let v = klat.apply(&y);
                if v.iter().all(|x| *x >= one) {
                    return Ok(v);
                }
            }
            // odometer over [-shell, shell]^q
            let mut pos = 0;
            loop {
                if pos == q {
                    break;
                }
                coeff[pos] += 1;
                if coeff[pos] > shell {
                    coeff[pos] = -shell;
                    pos += 1;
                } else {
                    break;
                }
            }
            if pos == q {
                break;
            }
        }
    }
    unreachable!("the shell loop only exits by returning")
}

/// Membership search in a monoid with no unit generators. The grading — the
/// sum of the dual cone's generators paired with the free part — is at least
/// 1 on every generator, so subtraction strictly descends; memoizing failed
/// residues keeps the search polynomial in the searched region.
fn sharp_member(ambient: &FinAbGroup, gens: &[Vec<BigInt>], a: &[BigInt]) -> Option<Vec<BigInt>> {
    let r = ambient.free_rank();
    debug_assert!(r > 0 || gens.is_empty(), "a sharp monoid with generators has a free part");
    let rays: Vec<Vec<BigInt>> = gens.iter().map(|g| g[..r].to_vec()).collect();
    let cone = RationalCone::new(r, rays).expect("free parts have the right length");
    let dual = dual_cone(&cone);
    let mut failed: HashSet<Vec<BigInt>> = HashSet::new();
    go(ambient, gens, dual.rays(), a, &mut failed)
}

fn go(
    ambient: &FinAbGroup,
    gens: &[Vec<BigInt>],
    dual_rays: &[Vec<BigInt>],
    res: &[BigInt],
    failed: &mut HashSet<Vec<BigInt>>,
) -> Option<Vec<BigInt>> {
    if res.iter().all(Zero::is_zero) {
        return Some(vec![BigInt::zero(); gens.len()]);
    }
    if failed.contains(res) {
        return None;
    }
    let r = ambient.free_rank();
    for (i, g) in gens.iter().enumerate() {
        let diff: Vec<BigInt> = res.iter().zip(g).map(|(x, y)| x - y).collect();
        let next = ambient.reduce(&diff);
        // Prune: every member's free part lies in the cone.
        let inside = dual_rays
            .iter()
            .all(|d| !dot(d, &next[..r]).is_negative());
        if !inside {
            continue;
        }
        if let Some(mut c) = go(ambient, gens, dual_rays, &next, failed) {
            c[i] += 1;
            return Some(c);
        }
    }
    failed.insert(res.to_vec());
    None
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
