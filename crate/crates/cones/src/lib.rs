//! Rational polyhedral cones given by generating rays: dual cones, membership
//! through dual inequalities, lineality spaces, and Hilbert bases of pointed
//! cones. All arithmetic is exact over arbitrary-precision integers; rays are
//! kept primitive and deduplicated.

use std::error::Error;
use std::fmt;

use lattice::{column_hermite, kernel_basis, lattice_quotient, smith_normal_form, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeError {
    /// A documented precondition does not hold (e.g. Hilbert basis of an
    /// unpointed cone).
    Precondition(String),
    /// Structurally malformed input.
    Shape(String),
}

impl fmt::Display for ConeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeError::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            ConeError::Shape(msg) => write!(f, "shape error: {msg}"),
        }
    }
}

impl Error for ConeError {}

/// Divides a vector by the gcd of its entries (direction preserved). Zero
/// vectors stay zero.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// A rational polyhedral cone in `Z^d`, generated by finitely many rays.
/// Rays are stored primitive, deduplicated, and sorted; they need not be
/// extreme. Lineality is expressed by rays in opposite directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCone {
    dim: usize,
    rays: Vec<Vec<BigInt>>,
}

impl RationalCone {
    pub fn new(dim: usize, rays: Vec<Vec<BigInt>>) -> Result<Self, ConeError> {
        let mut cleaned: Vec<Vec<BigInt>> = Vec::new();
        for r in &rays {
            if r.len() != dim {
                return Err(ConeError::Shape(format!(
                    "ray length {} does not match ambient dimension {dim}",
                    r.len()
                )));
            }
            let p = primitive(r);
            if p.iter().all(|x| x.is_zero()) {
                continue;
            }
            if !cleaned.contains(&p) {
                cleaned.push(p);
            }
        }
        cleaned.sort();
        Ok(RationalCone { dim, rays: cleaned })
    }

    pub fn from_i64(dim: usize, rays: &[&[i64]]) -> Self {
        let rays = rays
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::new(dim, rays).expect("literal rays are well formed")
    }

    /// The zero cone in `Z^d`.
    pub fn zero(dim: usize) -> Self {
        RationalCone { dim, rays: Vec::new() }
    }

    /// The nonnegative orthant in `Z^d`.
    pub fn orthant(dim: usize) -> Self {
        let mut rays = Vec::new();
        for i in 0..dim {
            let mut e = vec![BigInt::zero(); dim];
            e[i] = BigInt::from(1);
            rays.push(e);
        }
        Self::new(dim, rays).expect("orthant rays are well formed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn is_zero_cone(&self) -> bool {
        self.rays.is_empty()
    }

    /// Matrix whose rows are the rays.
    fn ray_row_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zero(self.rays.len(), self.dim);
        for (i, r) in self.rays.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn is_pointed(&self) -> bool {
        lineality_space(self).is_empty()
    }
}

impl Serialize for RationalCone {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = ser.serialize_struct("RationalCone", 2)?;
        s.serialize_field("dim", &self.dim)?;
        let rays: Vec<Vec<String>> = self
            .rays
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        s.serialize_field("rays", &rays)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for RationalCone {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            dim: usize,
            rays: Vec<Vec<String>>,
        }
        let raw = Raw::deserialize(de)?;
        let mut rays = Vec::with_capacity(raw.rays.len());
        for r in &raw.rays {
            let mut v = Vec::with_capacity(r.len());
            for s in r {
                let x: BigInt = s
                    .parse()
                    .map_err(|_| D::Error::custom(format!("bad integer literal: {s:?}")))?;
                v.push(x);
            }
            rays.push(v);
        }
        RationalCone::new(raw.dim, rays).map_err(|e| D::Error::custom(e.to_string()))
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rank_of_rows(rows: &[&Vec<BigInt>], dim: usize) -> usize {
    let mut m = IntMatrix::zero(rows.len(), dim);
    for (i, r) in rows.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            m.set(i, j, x.clone());
        }
    }
    smith_normal_form(&m).rank()
}

/// The dual cone `{y : ⟨r, y⟩ ≥ 0 for every ray r}`, returned by generators:
/// a basis of its lineality space in both directions plus the extreme rays of
/// its pointed part, each reduced to a canonical representative modulo the
/// lineality lattice.
pub fn dual_cone(c: &RationalCone) -> RationalCone {
    let d = c.dim();
    let rows: Vec<&Vec<BigInt>> = c.rays.iter().collect();
    let s = rank_of_rows(&rows, d);
    // Lineality of the dual: vectors orthogonal to every ray.
    let lin = column_hermite(&IntMatrix::from_columns(
        d,
        &kernel_basis(&c.ray_row_matrix()),
    ));
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for j in 0..lin.cols() {
        let b = lin.column(j);
        gens.push(b.iter().map(|x| -x).collect());
        gens.push(b);
    }
    if s > 0 {
        // Extreme rays of the pointed part: one per subset of s-1 linearly
        // independent active constraints, oriented by the sign test.
        let reducer = ModLinealityReducer::new(d, &lin);
        let k = c.rays.len();
        let mut found: Vec<Vec<BigInt>> = Vec::new();
        for subset in subsets_of_size(k, s - 1) {
            let sel: Vec<&Vec<BigInt>> = subset.iter().map(|&i| &c.rays[i]).collect();
            if rank_of_rows(&sel, d) != s - 1 {
                continue;
            }
            let mut m = IntMatrix::zero(subset.len(), d);
            for (i, r) in sel.iter().enumerate() {
                for (j, x) in r.iter().enumerate() {
                    m.set(i, j, x.clone());
                }
            }
            for w in kernel_basis(&m) {
                let Some(w) = reducer.reduce(&w) else { continue };
                let vals: Vec<BigInt> = c.rays.iter().map(|r| dot(r, &w)).collect();
                let any_pos = vals.iter().any(|x| x.is_positive());
                let any_neg = vals.iter().any(|x| x.is_negative());
                let keep = match (any_pos, any_neg) {
                    (true, false) => Some(w),
                    (false, true) => Some(w.iter().map(|x| -x).collect()),
                    _ => None,
                };
                if let Some(w) = keep {
                    if !found.contains(&w) {
                        found.push(w);
                    }
                }
            }
        }
        gens.extend(found);
    }
    RationalCone::new(d, gens).expect("dual generators are well formed")
}

/// Canonical representatives of rays modulo a lineality lattice: project to
/// the quotient, primitivize there, lift back along a fixed section.
struct ModLinealityReducer {
    proj: IntMatrix,
    lift: IntMatrix,
}

impl ModLinealityReducer {
    fn new(dim: usize, lineality: &IntMatrix) -> Self {
        let q = lattice_quotient(dim, lineality);
        assert!(
            q.group.is_free(),
            "a lineality lattice is saturated, so the quotient is free"
        );
        ModLinealityReducer { proj: q.proj, lift: q.lift }
    }

    /// `None` when the vector lies in the lineality lattice.
    fn reduce(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = primitive(&self.proj.apply(v));
        if y.iter().all(|x| x.is_zero()) {
            return None;
        }
        Some(self.lift.apply(&y))
    }
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Membership via the dual inequalities: `v ∈ C` iff every generator of the
/// dual cone is nonnegative on `v`.
pub fn contains(c: &RationalCone, v: &[BigInt]) -> bool {
    assert_eq!(v.len(), c.dim(), "vector length must match ambient dimension");
    let dual = dual_cone(c);
    dual.rays().iter().all(|a| !dot(a, v).is_negative())
}

/// Integer basis of the lineality space `C ∩ -C`, in Hermite-echelon columns.
/// Empty exactly when the cone is pointed.
pub fn lineality_space(c: &RationalCone) -> Vec<Vec<BigInt>> {
    // The lineality space is the orthogonal complement of the span of the
    // dual generators, and the dual's generators are computable without
    // reference to lineality of the primal: they are the solutions of the
    // primal inequalities. To avoid mutual recursion, use the rank argument
    // directly: C ∩ -C = {x : ⟨a, x⟩ = 0 for all a ∈ dual(C)}.
    let dual = dual_cone(c);
    let mut rows = IntMatrix::zero(dual.rays().len(), c.dim());
    for (i, r) in dual.rays().iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            rows.set(i, j, x.clone());
        }
    }
    let h = column_hermite(&IntMatrix::from_columns(c.dim(), &kernel_basis(&rows)));
    (0..h.cols()).map(|j| h.column(j)).collect()
}

/// Canonical form: every ray reduced modulo the lineality lattice and made
/// primitive, redundant generators dropped, the lineality expressed by a
/// Hermite basis in both directions, everything sorted. Two generator
/// descriptions of the same cone canonicalize identically.
pub fn canonicalize(c: &RationalCone) -> RationalCone {
    let d = c.dim();
    let lin_basis = lineality_space(c);
    let lin = IntMatrix::from_columns(d, &lin_basis);
    let reducer = ModLinealityReducer::new(d, &lin);
    let mut pointed: Vec<Vec<BigInt>> = Vec::new();
    for r in c.rays() {
        if let Some(p) = reducer.reduce(r) {
            if !pointed.contains(&p) {
                pointed.push(p);
            }
        }
    }
    // Drop generators expressible inside the remaining ones (with the
    // lineality available on both sides).
    let mut keep: Vec<Vec<BigInt>> = pointed.clone();
    let mut i = 0;
    while i < keep.len() {
        let mut gens: Vec<Vec<BigInt>> = Vec::new();
        for (j, r) in keep.iter().enumerate() {
            if j != i {
                gens.push(r.clone());
            }
        }
        for b in &lin_basis {
            gens.push(b.clone());
            gens.push(b.iter().map(|x| -x).collect());
        }
        let sub = RationalCone::new(d, gens).expect("subcone generators are well formed");
        if contains(&sub, &keep[i]) {
            keep.remove(i);
        } else {
            i += 1;
        }
    }
    let mut gens = keep;
    for b in &lin_basis {
        gens.push(b.clone());
        gens.push(b.iter().map(|x| -x).collect());
    }
    RationalCone::new(d, gens).expect("canonical generators are well formed")
}

/// Minimal generating set of the monoid `C ∩ Z^d` for a pointed cone:
/// triangulate into simplicial subcones, collect half-open parallelotope
/// lattice points and the rays, then discard every reducible element.
pub fn hilbert_basis(c: &RationalCone) -> Result<Vec<Vec<BigInt>>, ConeError> {
    if !c.is_pointed() {
        return Err(ConeError::Precondition(
            "Hilbert basis requires a pointed cone".into(),
        ));
    }
    if c.is_zero_cone() {
        return Ok(Vec::new());
    }
    let canon = canonicalize(c);
    let mut pool: Vec<Vec<BigInt>> = Vec::new();
    for simplex in triangulate(&canon) {
        for p in parallelotope_points(&simplex, c.dim()) {
            if !p.iter().all(|x| x.is_zero()) && !pool.contains(&p) {
                pool.push(p);
            }
        }
        for r in simplex {
            if !pool.contains(&r) {
                pool.push(r);
            }
        }
    }
    // Irreducibility sweep: x stays iff no other pool element h has x - h in
    // the cone. Every irreducible element of the monoid is in the pool, so
    // testing against the pool decides reducibility.
    let dual = dual_cone(&canon);
    let in_cone = |v: &[BigInt]| dual.rays().iter().all(|a| !dot(a, v).is_negative());
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    for x in &pool {
        let reducible = pool.iter().any(|h| {
            if h == x {
                return false;
            }
            let diff: Vec<BigInt> = x.iter().zip(h).map(|(a, b)| a - b).collect();
            if diff.iter().all(|t| t.is_zero()) {
                return false;
            }
            in_cone(&diff)
        });
        if !reducible {
            basis.push(x.clone());
        }
    }
    basis.sort();
    Ok(basis)
}

/// Generating set of the monoid `C ∩ Z^d` for an arbitrary rational cone:
/// a lattice basis of the lineality space in both signs, plus lifts of the
/// Hilbert basis of the pointed image cone modulo lineality. The lifts land
/// in `C` because `C + lineality = C`, so the combined set generates every
/// integer point. Sorted; empty exactly for the zero cone (or `d = 0`).
pub fn integer_point_generators(c: &RationalCone) -> Vec<Vec<BigInt>> {
    let d = c.dim();
    if d == 0 {
        return Vec::new();
    }
    let lin_basis = lineality_space(c);
    let lin = IntMatrix::from_columns(d, &lin_basis);
    let reducer = ModLinealityReducer::new(d, &lin);
    // Image cone in quotient coordinates; pointed by construction.
    let qdim = reducer.proj.rows();
    let mut image_rays: Vec<Vec<BigInt>> = Vec::new();
    for r in c.rays() {
        image_rays.push(reducer.proj.apply(r));
    }
    let image =
        RationalCone::new(qdim, image_rays).expect("projected rays keep the ambient dimension");
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for b in &lin_basis {
        gens.push(b.clone());
        gens.push(b.iter().map(|x| -x).collect());
    }
    for h in hilbert_basis(&image).expect("the image cone modulo lineality is pointed") {
        let lifted = reducer.lift.apply(&h);
        if !gens.contains(&lifted) {
            gens.push(lifted);
        }
    }
    gens.sort();
    gens.dedup();
    gens
}

/// Splits a pointed cone (given canonically, so its rays are extreme) into
/// simplicial subcones by pulling the lexicographically first ray across the
/// facets that avoid it.
fn triangulate(c: &RationalCone) -> Vec<Vec<Vec<BigInt>>> {
    let rays = c.rays();
    if rays.is_empty() {
        return Vec::new();
    }
    let refs: Vec<&Vec<BigInt>> = rays.iter().collect();
    if rank_of_rows(&refs, c.dim()) == rays.len() {
        return vec![rays.to_vec()];
    }
    let apex = &rays[0];
    let dual = dual_cone(c);
    let mut pieces = Vec::new();
    for a in dual.rays() {
        if !dot(a, apex).is_positive() {
            continue; // facet contains the apex (or a is lineality-paired)
        }
        let facet_rays: Vec<Vec<BigInt>> = rays
            .iter()
            .filter(|r| dot(a, r).is_zero())
            .cloned()
            .collect();
        if facet_rays.is_empty() {
            continue;
        }
        let facet = RationalCone::new(c.dim(), facet_rays).expect("facet rays are well formed");
        for mut piece in triangulate(&canonicalize(&facet)) {
            piece.push(apex.clone());
            pieces.push(piece);
        }
    }
    pieces
}

/// Lattice points of the half-open parallelotope `{Σ λ_i u_i : 0 ≤ λ_i < 1}`
/// spanned by linearly independent vectors, by exhaustive search of the
/// bounding box with an exact Cramer test.
fn parallelotope_points(u: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let t = u.len();
    // Select t coordinate rows on which the vectors stay independent.
    let full = {
        let mut m = IntMatrix::zero(dim, t);
        for (j, v) in u.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    };
    let rows = independent_rows(&full, t);
    let mut square = IntMatrix::zero(t, t);
    for (a, &i) in rows.iter().enumerate() {
        for j in 0..t {
            square.set(a, j, full.at(i, j).clone());
        }
    }
    let det = lattice::determinant(&square);
    assert!(!det.is_zero(), "parallelotope spanners must be independent");
    // Bounding box of the closed parallelotope, per coordinate.
    let mut lo = vec![BigInt::zero(); dim];
    let mut hi = vec![BigInt::zero(); dim];
    for v in u {
        for (i, x) in v.iter().enumerate() {
            if x.is_positive() {
                hi[i] += x;
            } else {
                lo[i] += x;
            }
        }
    }
    let mut out = Vec::new();
    let mut cursor = lo.clone();
    'scan: loop {
        if let Some(p) = cramer_accept(&full, &square, &rows, &det, &cursor, t) {
            out.push(p);
        }
        // Odometer increment over the box.
        for i in 0..dim {
            cursor[i] += 1;
            if cursor[i] <= hi[i] {
                continue 'scan;
            }
            cursor[i] = lo[i].clone();
        }
        break;
    }
    out
}

/// Accepts a candidate point when its (rational) coordinates in the spanning
/// basis all lie in `[0, 1)` and the point really is in the span. Returns the
/// point itself for convenience.
fn cramer_accept(
    full: &IntMatrix,
    square: &IntMatrix,
    rows: &[usize],
    det: &BigInt,
    x: &[BigInt],
    t: usize,
) -> Option<Vec<BigInt>> {
    // Solve the selected t×t system by Cramer; λ_j = det_j / det.
    let mut dets = Vec::with_capacity(t);
    for j in 0..t {
        let mut m = square.clone();
        for (a, &i) in rows.iter().enumerate() {
            m.set(a, j, x[i].clone());
        }
        let dj = lattice::determinant(&m);
        // 0 ≤ dj/det < 1 in exact arithmetic.
        let same_sign = if det.is_positive() { !dj.is_negative() } else { !dj.is_positive() };
        if !same_sign || dj.magnitude() >= det.magnitude() {
            return None;
        }
        dets.push(dj);
    }
    // Verify the full system: det·x == Σ det_j · u_j on every coordinate.
    for (i, xi) in x.iter().enumerate() {
        let lhs = det * xi;
        let rhs: BigInt = (0..t).map(|j| &dets[j] * full.at(i, j)).sum();
        if lhs != rhs {
            return None;
        }
    }
    Some(x.to_vec())
}

/// Indices of `t` rows of `m` on which the columns remain independent.
fn independent_rows(m: &IntMatrix, t: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..m.rows() {
        if chosen.len() == t {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(i);
        let mut sub = IntMatrix::zero(trial.len(), m.cols());
        for (a, &r) in trial.iter().enumerate() {
            for j in 0..m.cols() {
                sub.set(a, j, m.at(r, j).clone());
            }
        }
        if smith_normal_form(&sub).rank() == trial.len() {
            chosen = trial;
        }
    }
    assert_eq!(chosen.len(), t, "column rank must reach the spanner count");
    chosen
}
