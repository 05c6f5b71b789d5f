//! Homomorphisms of integral monoids: generator images that land in the
//! target and respect every relation. Each hom carries the induced map of
//! group completions, which is what most structure tests reduce to.

use crate::monoid::{span_contains, UnitsGroup};
use crate::{fmt_vec, IntegralMonoid, MonoidError};
use cones::{dual_cone, integer_point_generators, RationalCone};
use lattice::{kernel_lattice, kernel_subgroup, section_onto_free, solve_integer, FinAbGroup, GroupHom, IntMatrix};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A homomorphism of integral monoids, given by the images of the source's
/// generators. Construction checks that images are members of the target and
/// that every additive relation among the source generators is preserved, so
/// a value of this type is always an actual homomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidHom {
    source: IntegralMonoid,
    target: IntegralMonoid,
    images: Vec<Vec<BigInt>>,
    gp: GroupHom,
}

impl MonoidHom {
    pub fn new(
        source: IntegralMonoid,
        target: IntegralMonoid,
        images: Vec<Vec<BigInt>>,
    ) -> Result<Self, MonoidError> {
        if images.len() != source.generators().len() {
            return Err(MonoidError::Shape(format!(
                "{} images for {} generators",
                images.len(),
                source.generators().len()
            )));
        }
        let mut reduced = Vec::with_capacity(images.len());
        for img in &images {
            if img.len() != target.ambient().coords() {
                return Err(MonoidError::Shape(format!(
                    "image length {} does not match the {} target coordinates",
                    img.len(),
                    target.ambient().coords()
                )));
            }
            reduced.push(target.ambient().reduce(img));
        }
        for (g, img) in source.generators().iter().zip(&reduced) {
            if !target.member(img)? {
                return Err(MonoidError::Precondition(format!(
                    "image {} of generator {} is not in the target monoid",
                    fmt_vec(img),
                    fmt_vec(g)
                )));
            }
        }
        // Relations among the source generators must map to relations: for
        // every integer vector k with Σ k_i·g_i = 0, also Σ k_i·u(g_i) = 0.
        let free_src = GroupHom::new(
            FinAbGroup::free(source.generators().len()),
            source.ambient().clone(),
            source.gen_matrix(),
        )
        .expect("a free source has no relations to kill");
        let klat = kernel_lattice(&free_src);
        for j in 0..klat.cols() {
            let k = klat.column(j);
            let mut acc = vec![BigInt::zero(); target.ambient().coords()];
            for (c, img) in k.iter().zip(&reduced) {
                for (t, x) in acc.iter_mut().zip(img) {
                    *t += c * x;
                }
            }
            if !target.ambient().reduce(&acc).iter().all(Zero::is_zero) {
                return Err(MonoidError::Precondition(format!(
                    "generator images break the relation with exponents {}",
                    fmt_vec(&k)
                )));
            }
        }
        let gp = induced_group_hom(&source, &target, &reduced);
        for (g, img) in source.generators().iter().zip(&reduced) {
            debug_assert_eq!(&gp.apply(g), img, "induced group map restricts to the images");
        }
        Ok(MonoidHom { source, target, images: reduced, gp })
    }

    pub fn identity(p: &IntegralMonoid) -> Self {
        MonoidHom::new(p.clone(), p.clone(), p.generators().to_vec())
            .expect("generators are members and relations are preserved")
    }

    /// The `n`-th power map `p ↦ n·p` from a monoid to itself.
    pub fn multiplication(p: &IntegralMonoid, n: u64) -> Self {
        let images = p
            .generators()
            .iter()
            .map(|g| g.iter().map(|x| x * n).collect())
            .collect();
        MonoidHom::new(p.clone(), p.clone(), images)
            .expect("multiples of generators stay in the monoid")
    }

    pub fn source(&self) -> &IntegralMonoid {
        &self.source
    }

    pub fn target(&self) -> &IntegralMonoid {
        &self.target
    }

    /// Images of the source generators, in the source's stored order.
    pub fn images(&self) -> &[Vec<BigInt>] {
        &self.images
    }

    /// The induced homomorphism of group completions.
    pub fn gp_hom(&self) -> &GroupHom {
        &self.gp
    }

    /// Value on an arbitrary ambient element (monoid members included).
    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.gp.apply(x)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MonoidHom) -> Result<MonoidHom, MonoidError> {
        if inner.target != self.source {
            return Err(MonoidError::Shape(
                "composition needs inner target = outer source".into(),
            ));
        }
        let images = inner.images.iter().map(|img| self.apply(img)).collect();
        MonoidHom::new(inner.source.clone(), self.target.clone(), images)
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.gp.is_identity()
    }
}

/// Extends generator images to the whole group completion: each ambient basis
/// vector is written as an integer combination of generators (possible, since
/// they span), and the combination is pushed through the images. The result
/// does not depend on the chosen combination because the images preserve
/// relations.
fn induced_group_hom(
    source: &IntegralMonoid,
    target: &IntegralMonoid,
    images: &[Vec<BigInt>],
) -> GroupHom {
    let n = source.ambient().coords();
    let aug = source
        .gen_matrix()
        .hstack(&source.ambient().relation_matrix());
    let mut m = IntMatrix::zero(target.ambient().coords(), n);
    for j in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[j] = BigInt::from(1);
        let sol = solve_integer(&aug, &e).expect("generators span the ambient group");
        let mut col = vec![BigInt::zero(); target.ambient().coords()];
        for (c, img) in sol[..images.len()].iter().zip(images) {
            for (t, x) in col.iter_mut().zip(img) {
                *t += c * x;
            }
        }
        for (i, x) in target.ambient().reduce(&col).into_iter().enumerate() {
            m.set(i, j, x);
        }
    }
    GroupHom::new(source.ambient().clone(), target.ambient().clone(), m)
        .expect("a map defined through spanning generators kills the source relations")
}

impl Serialize for MonoidHom {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = ser.serialize_struct("MonoidHom", 3)?;
        s.serialize_field("source", &self.source)?;
        s.serialize_field("target", &self.target)?;
        let images: Vec<Vec<String>> = self
            .images
            .iter()
            .map(|img| lattice::decimal::encode_vec(img))
            .collect();
        s.serialize_field("images", &images)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for MonoidHom {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            source: IntegralMonoid,
            target: IntegralMonoid,
            images: Vec<Vec<String>>,
        }
        let raw = Raw::deserialize(de)?;
        let mut images = Vec::new();
        for img in &raw.images {
            images.push(lattice::decimal::decode_vec(img).map_err(D::Error::custom)?);
        }
        MonoidHom::new(raw.source, raw.target, images)
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Structure flags of a monoid homomorphism `u: P → Q`.
///
/// * `injective`, `surjective` — as a map of monoids.
/// * `local` — `u⁻¹(Q*) = P*`: only units map to units.
/// * `sharp` — the restriction `P* → Q*` is an isomorphism.
/// * `strict` — the induced map of sharpenings `P/P* → Q/Q*` is an
///   isomorphism of monoids.
/// * `exact` — `P` is exactly the preimage of `Q` under the map of group
///   completions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomFlags {
    pub injective: bool,
    pub surjective: bool,
    pub local: bool,
    pub sharp: bool,
    pub strict: bool,
    pub exact: bool,
}

/// Computes all six structure flags. The exactness test writes the preimage
/// monoid down by generators, which needs the target saturated; homs into
/// non-saturated targets are rejected rather than half-answered.
pub fn hom_properties(u: &MonoidHom) -> Result<HomFlags, MonoidError> {
    if !u.target().predicates().is_saturated {
        return Err(MonoidError::Precondition(
            "structure flags are only decided over saturated targets".into(),
        ));
    }
    let injective = kernel_subgroup(u.gp_hom()).0.is_trivial();
    let surjective = u
        .target()
        .generators()
        .iter()
        .all(|tg| span_contains(u.target().ambient(), u.images(), tg));

    let p_units = u.source().units();
    let q_units = u.target().units();
    // A unit's image is a unit, and "maps to a unit" cuts out a face, so the
    // generator level decides locality.
    let local = u
        .source()
        .generators()
        .iter()
        .all(|g| !q_units.contains(&u.apply(g)) || p_units.contains(g));

    let restriction = restrict_to_units(u, &p_units, &q_units);
    let sharp = restriction.is_injective() && restriction.is_surjective();

    let strict = is_strict(u);
    let exact = is_exact(u);
    Ok(HomFlags { injective, surjective, local, sharp, strict, exact })
}

/// The map `P* → Q*` induced by `u`, in the abstract coordinates of the two
/// unit groups.
fn restrict_to_units(u: &MonoidHom, p_units: &UnitsGroup, q_units: &UnitsGroup) -> GroupHom {
    let aug = q_units
        .inclusion
        .matrix()
        .hstack(&u.target().ambient().relation_matrix());
    let k = p_units.group.coords();
    let qc = q_units.group.coords();
    let mut m = IntMatrix::zero(qc, k);
    for j in 0..k {
        let mut e = vec![BigInt::zero(); k];
        e[j] = BigInt::from(1);
        let y = u.apply(&p_units.inclusion.apply(&e));
        let sol = solve_integer(&aug, &y).expect("images of units are units");
        for (i, x) in q_units.group.reduce(&sol[..qc]).into_iter().enumerate() {
            m.set(i, j, x);
        }
    }
    GroupHom::new(p_units.group.clone(), q_units.group.clone(), m)
        .expect("the unit restriction kills torsion relations")
}

/// Whether the induced map of sharpenings is an isomorphism of monoids.
fn is_strict(u: &MonoidHom) -> bool {
    let (pbar, pi_p) = crate::ops::sharpen(u.source());
    let (qbar, pi_q) = crate::ops::sharpen(u.target());
    // Induced group map on the sharpened ambients: lift a basis vector
    // through the surjection pi_p, push it through u, project by pi_q. The
    // choice of lift is irrelevant: its ambiguity is a unit, which pi_q
    // kills.
    let aug = pi_p
        .gp_hom()
        .matrix()
        .hstack(&pbar.ambient().relation_matrix());
    let n = pbar.ambient().coords();
    let mut m = IntMatrix::zero(qbar.ambient().coords(), n);
    for j in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[j] = BigInt::from(1);
        let sol = solve_integer(&aug, &e).expect("sharpening projections are surjective");
        let lift = &sol[..u.source().ambient().coords()];
        for (i, x) in pi_q.apply(&u.apply(lift)).into_iter().enumerate() {
            m.set(i, j, x);
        }
    }
    let ubar = GroupHom::new(pbar.ambient().clone(), qbar.ambient().clone(), m)
        .expect("the sharpened map kills the sharpened relations");
    if !ubar.is_injective() || !ubar.is_surjective() {
        return false;
    }
    let mapped: Vec<Vec<BigInt>> = pbar.generators().iter().map(|g| ubar.apply(g)).collect();
    mapped
        .iter()
        .all(|y| span_contains(qbar.ambient(), qbar.generators(), y))
        && qbar
            .generators()
            .iter()
            .all(|tg| span_contains(qbar.ambient(), &mapped, tg))
}

/// Whether `P` equals the full preimage of `Q` in `P`'s group completion.
/// The preimage's free part is the lattice region mapped into `Q`'s
/// recession cone — a finitely generated monoid whose generators are checked
/// for membership; the torsion part always maps into `Q`.
fn is_exact(u: &MonoidHom) -> bool {
    let rp = u.source().ambient().free_rank();
    let rq = u.target().ambient().free_rank();
    // A relation-respecting matrix has no torsion-to-free block, so the free
    // part of the image depends only on the free part of the argument.
    let gp = u.gp_hom().matrix();
    let target_dual = dual_cone(&u.target().recession_cone());
    let mut pulled: Vec<Vec<BigInt>> = Vec::new();
    for c in target_dual.rays() {
        let mut row = vec![BigInt::zero(); rp];
        for (k, ck) in c.iter().enumerate().take(rq) {
            for (i, slot) in row.iter_mut().enumerate() {
                *slot += ck * gp.at(k, i);
            }
        }
        pulled.push(row);
    }
    let pulled_cone =
        RationalCone::new(rp, pulled).expect("pulled-back constraints have the right length");
    let preimage_cone = dual_cone(&pulled_cone);
    let coords = u.source().ambient().coords();
    let mut pre_gens: Vec<Vec<BigInt>> = Vec::new();
    for g in integer_point_generators(&preimage_cone) {
        let mut full = g;
        full.resize(coords, BigInt::zero());
        pre_gens.push(full);
    }
    for i in rp..coords {
        let mut e = vec![BigInt::zero(); coords];
        e[i] = BigInt::from(1);
        pre_gens.push(e);
    }
    pre_gens
        .iter()
        .all(|g| span_contains(u.source().ambient(), u.source().generators(), g))
}

/// A section of a surjection onto a toric monoid: given `u: P → Q` with `Q`
/// toric, `u` surjective, and every generator of `ker(u^gp)` inside `P`,
/// produces `s: Q → P` with `u ∘ s = id`. Any group-theoretic section works:
/// for `q = u(p)`, the difference `s(q) − p` lies in the kernel, hence in
/// `P`, so `s(q)` is a member.
pub fn split_sharp(u: &MonoidHom) -> Result<MonoidHom, MonoidError> {
    if !u.target().predicates().is_toric {
        return Err(MonoidError::Precondition(
            "splitting needs a toric target".into(),
        ));
    }
    for tg in u.target().generators() {
        if !span_contains(u.target().ambient(), u.images(), tg) {
            return Err(MonoidError::Precondition(format!(
                "target generator {} is not hit: the map is not surjective",
                fmt_vec(tg)
            )));
        }
    }
    let klat = kernel_lattice(u.gp_hom());
    for j in 0..klat.cols() {
        let k = klat.column(j);
        if !u.source().member(&k)? {
            return Err(MonoidError::Precondition(format!(
                "kernel generator {} lies outside the source monoid",
                fmt_vec(&k)
            )));
        }
    }
    let s0 = section_onto_free(u.gp_hom())?;
    let images: Vec<Vec<BigInt>> = u
        .target()
        .generators()
        .iter()
        .map(|q| s0.apply(q))
        .collect();
    let s = MonoidHom::new(u.target().clone(), u.source().clone(), images)?;
    debug_assert!(
        u.compose(&s).expect("composable").gp_hom().is_identity(),
        "the section splits the surjection"
    );
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use lattice::FinAbGroup;

    fn biv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn numeric(ambient: FinAbGroup, gens: &[&[i64]]) -> IntegralMonoid {
        let gens = gens.iter().map(|g| biv(g)).collect();
        IntegralMonoid::new(ambient, gens).unwrap()
    }

    fn half_torsion() -> IntegralMonoid {
        // Z≥0 ⊕ Z/2.
        numeric(FinAbGroup::new(1, vec![BigInt::from(2)]).unwrap(), &[&[1, 0], &[0, 1]])
    }

    fn cylinder() -> IntegralMonoid {
        // Z≥0 ⊕ Z.
        numeric(FinAbGroup::free(2), &[&[1, 0], &[0, 1], &[0, -1]])
    }

    fn projection_to_first(source: &IntegralMonoid) -> MonoidHom {
        let images = source
            .generators()
            .iter()
            .map(|g| vec![g[0].clone()])
            .collect();
        MonoidHom::new(source.clone(), IntegralMonoid::nonneg(1), images).unwrap()
    }

    #[test]
    fn constructor_rejects_images_outside_the_target() {
        let r = MonoidHom::new(
            IntegralMonoid::nonneg(1),
            IntegralMonoid::nonneg(1),
            vec![biv(&[-1])],
        );
        assert!(matches!(r, Err(MonoidError::Precondition(_))));
    }

    #[test]
    fn constructor_rejects_relation_breaking_images() {
        // The generator of Z/2 satisfies 2g = 0; its image must too.
        let src = IntegralMonoid::full_group(FinAbGroup::cyclic(2));
        let r = MonoidHom::new(src, IntegralMonoid::nonneg(1), vec![biv(&[1])]);
        assert!(matches!(r, Err(MonoidError::Precondition(_))));
    }

    #[test]
    fn composition_multiplies_multiplications() {
        let two = MonoidHom::multiplication(&IntegralMonoid::nonneg(1), 2);
        let three = MonoidHom::multiplication(&IntegralMonoid::nonneg(1), 3);
        let six = three.compose(&two).unwrap();
        assert_eq!(six.images(), &[biv(&[6])]);
        assert_eq!(six.apply(&biv(&[5])), biv(&[30]));
    }

    #[test]
    fn group_completion_of_the_torsion_projection() {
        let u = projection_to_first(&half_torsion());
        assert_eq!(u.apply(&biv(&[1, 1])), biv(&[1]));
        assert_eq!(u.gp_hom().matrix().at(0, 0), &BigInt::from(1));
        assert_eq!(u.gp_hom().matrix().at(0, 1), &BigInt::zero());
    }

    #[test]
    fn multiplication_by_two_flags() {
        let u = MonoidHom::multiplication(&IntegralMonoid::nonneg(1), 2);
        let f = hom_properties(&u).unwrap();
        assert!(f.injective && f.local && f.sharp && f.exact);
        assert!(!f.surjective && !f.strict);
    }

    #[test]
    fn identity_flags_are_all_true() {
        let u = MonoidHom::identity(&IntegralMonoid::nonneg(2));
        let f = hom_properties(&u).unwrap();
        assert!(f.injective && f.surjective && f.local && f.sharp && f.strict && f.exact);
    }

    #[test]
    fn inclusion_into_the_group_is_not_exact() {
        let u = MonoidHom::new(
            IntegralMonoid::nonneg(1),
            IntegralMonoid::free_group(1),
            vec![biv(&[1])],
        )
        .unwrap();
        let f = hom_properties(&u).unwrap();
        assert!(f.injective);
        assert!(!f.surjective && !f.local && !f.sharp && !f.strict && !f.exact);
    }

    #[test]
    fn cylinder_projection_flags() {
        let u = projection_to_first(&cylinder());
        let f = hom_properties(&u).unwrap();
        assert!(f.surjective && f.local && f.strict && f.exact);
        assert!(!f.injective && !f.sharp);
    }

    #[test]
    fn flags_require_a_saturated_target() {
        let two_three = numeric(FinAbGroup::free(1), &[&[2], &[3]]);
        let u = MonoidHom::identity(&two_three);
        assert!(matches!(
            hom_properties(&u),
            Err(MonoidError::Precondition(_))
        ));
    }

    #[test]
    fn splitting_the_torsion_projection() {
        let u = projection_to_first(&half_torsion());
        let s = split_sharp(&u).unwrap();
        assert_eq!(s.images(), &[biv(&[1, 0])]);
        assert!(u.compose(&s).unwrap().is_identity());
    }

    #[test]
    fn splitting_the_cylinder_projection() {
        let u = projection_to_first(&cylinder());
        let s = split_sharp(&u).unwrap();
        assert_eq!(s.images(), &[biv(&[1, 0])]);
        assert!(u.compose(&s).unwrap().is_identity());
    }

    #[test]
    fn splitting_the_identity() {
        let u = MonoidHom::identity(&IntegralMonoid::nonneg(2));
        let s = split_sharp(&u).unwrap();
        assert!(s.is_identity());
    }

    #[test]
    fn splitting_rejects_a_non_surjection() {
        let u = MonoidHom::multiplication(&IntegralMonoid::nonneg(1), 2);
        assert!(matches!(split_sharp(&u), Err(MonoidError::Precondition(_))));
    }

    #[test]
    fn splitting_rejects_a_kernel_outside_the_source() {
        // (a, b) ↦ a + b: the kernel is generated by (1, -1) ∉ Z≥0².
        let u = MonoidHom::new(
            IntegralMonoid::nonneg(2),
            IntegralMonoid::nonneg(1),
            vec![biv(&[1]), biv(&[1])],
        )
        .unwrap();
        assert!(matches!(split_sharp(&u), Err(MonoidError::Precondition(_))));
    }

    #[test]
    fn hom_json_roundtrip() {
        let u = MonoidHom::multiplication(&IntegralMonoid::nonneg(1), 2);
        let json = serde_json::to_string(&u).unwrap();
        assert_eq!(
            json,
            concat!(
                r#"{"source":{"ambient":{"free_rank":1,"torsion":[]},"generators":[["1"]]},"#,
                r#""target":{"ambient":{"free_rank":1,"torsion":[]},"generators":[["1"]]},"#,
                r#""images":[["2"]]}"#
            )
        );
        let back: MonoidHom = serde_json::from_str(&json).unwrap();
        assert_eq!(back, u);
    }
}
