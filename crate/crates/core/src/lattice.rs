//! Exact geometry of a point configuration on a height-one hyperplane: the
//! group it generates, the rational cone over it, face structure, and the
//! minimality condition on the distinguished subset.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{
    self, dot, dot_i64, left_kernel_basis, mat_vec, primitive_normalize, row_hnf,
    solve_in_row_lattice, solve_integer_columns, to_bigint_matrix, unimodular_with_last_row, Hnf,
    IMat,
};
use crate::polytope::{Ineq, IneqSystem};

/// Hermite-form basis of the group generated by the configuration points.
#[derive(Clone, Serialize)]
pub struct ZaGroup {
    /// Basis rows, in canonical echelon form (string-encoded integers).
    pub basis: Vec<Vec<String>>,
    pub rank: usize,
    #[serde(skip)]
    hnf_rows: IMat,
    #[serde(skip)]
    pivots: Vec<usize>,
}

impl ZaGroup {
    fn from_points(points: &[Vec<i64>]) -> Self {
        let m = to_bigint_matrix(points);
        let hnf = row_hnf(&m);
        let rows: IMat = (0..hnf.rank).map(|r| hnf.h[r].clone()).collect();
        ZaGroup {
            basis: rows
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect(),
            rank: hnf.rank,
            pivots: hnf.pivots.clone(),
            hnf_rows: rows,
        }
    }

    fn as_hnf(&self) -> Hnf {
        Hnf {
            h: self.hnf_rows.clone(),
            transform: Vec::new(),
            rank: self.rank,
            pivots: self.pivots.clone(),
        }
    }

    /// Integer coordinates of `v` with respect to the basis, if `v` lies in
    /// the group.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        solve_in_row_lattice(&self.as_hnf(), v)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Rational coordinates with respect to the basis, if `v` lies in the
    /// rational span.
    pub fn rational_coordinates(&self, v: &[BigRational]) -> Option<Vec<BigRational>> {
        let mut rem = v.to_vec();
        let mut coeffs = vec![BigRational::zero(); self.rank];
        for r in 0..self.rank {
            let pc = self.pivots[r];
            let piv = BigRational::from_integer(self.hnf_rows[r][pc].clone());
            let q = rem[pc].clone() / piv;
            for c in 0..rem.len() {
                let s = BigRational::from_integer(self.hnf_rows[r][c].clone()) * q.clone();
                rem[c] -= s;
            }
            coeffs[r] = q;
        }
        if rem.iter().all(|x| x.is_zero()) {
            Some(coeffs)
        } else {
            None
        }
    }

    pub fn ambient(&self, coords: &[BigInt]) -> Vec<BigInt> {
        let n = self.hnf_rows.first().map(|r| r.len()).unwrap_or(0);
        let mut v = vec![BigInt::zero(); n];
        for (r, x) in coords.iter().enumerate() {
            for c in 0..n {
                let s = &self.hnf_rows[r][c] * x;
                v[c] += s;
            }
        }
        v
    }
}

/// The rational cone over the configuration, held in coordinates with
/// respect to the group basis (where it is full-dimensional and pointed).
#[derive(Clone, Serialize)]
pub struct Cone {
    /// Facet functionals in span coordinates: primitive, nonnegative on all
    /// generators, lexicographically sorted.
    pub facets: Vec<Vec<String>>,
    pub span_dim: usize,
    #[serde(skip)]
    facet_rows: IMat,
    #[serde(skip)]
    group: ZaGroup,
    #[serde(skip)]
    gen_coords: IMat,
}

impl Cone {
    fn from_generators(points: &[Vec<i64>], group: &ZaGroup) -> Result<Self> {
        let r = group.rank;
        let gen_coords: IMat = points
            .iter()
            .map(|p| {
                let pv: Vec<BigInt> = p.iter().map(|&x| BigInt::from(x)).collect();
                group
                    .coordinates(&pv)
                    .ok_or_else(|| Error::InvalidConfig("generator outside its own group".into()))
            })
            .collect::<Result<_>>()?;
        let facet_rows = facet_normals(&gen_coords, r);
        Ok(Cone {
            facets: facet_rows
                .iter()
                .map(|f| f.iter().map(|x| x.to_string()).collect())
                .collect(),
            span_dim: r,
            facet_rows,
            group: group.clone(),
            gen_coords,
        })
    }

    /// Closed-cone membership of a rational ambient vector.
    pub fn contains(&self, v: &[BigRational]) -> bool {
        match self.group.rational_coordinates(v) {
            None => false,
            Some(x) => self
                .facet_rows
                .iter()
                .all(|f| dot_rational(f, &x) >= BigRational::zero()),
        }
    }

    /// Relative-interior membership of a rational ambient vector.
    pub fn relative_interior_contains(&self, v: &[BigRational]) -> bool {
        match self.group.rational_coordinates(v) {
            None => false,
            Some(x) => self
                .facet_rows
                .iter()
                .all(|f| dot_rational(f, &x) > BigRational::zero()),
        }
    }

    pub fn contains_int(&self, v: &[i64]) -> bool {
        self.contains(&to_rational(v))
    }

    pub fn relative_interior_contains_int(&self, v: &[i64]) -> bool {
        self.relative_interior_contains(&to_rational(v))
    }
}

fn to_rational(v: &[i64]) -> Vec<BigRational> {
    v.iter()
        .map(|&x| BigRational::from_integer(BigInt::from(x)))
        .collect()
}

fn dot_rational(f: &[BigInt], x: &[BigRational]) -> BigRational {
    f.iter()
        .zip(x)
        .map(|(a, b)| BigRational::from_integer(a.clone()) * b.clone())
        .sum()
}

/// Facet normals of the cone over `gens` (full-dimensional in `R^r`):
/// every facet is spanned by generators, so candidate normals are kernels of
/// `(r-1)`-subsets of generators, kept when they have constant sign.
fn facet_normals(gens: &IMat, r: usize) -> IMat {
    let n = gens.len();
    let mut found: std::collections::BTreeSet<Vec<BigInt>> = Default::default();
    if r == 0 {
        return Vec::new();
    }
    let take = r - 1;
    let mut subset: Vec<usize> = (0..take).collect();
    loop {
        let rows: IMat = subset.iter().map(|&i| gens[i].clone()).collect();
        if let Some(mut normal) = kernel_line(&rows, r) {
            primitive_normalize(&mut normal);
            let mut pos = false;
            let mut neg = false;
            for g in gens {
                match dot(&normal, g).sign() {
                    num_bigint::Sign::Plus => pos = true,
                    num_bigint::Sign::Minus => neg = true,
                    num_bigint::Sign::NoSign => {}
                }
            }
            if !(pos && neg) {
                if neg {
                    for x in normal.iter_mut() {
                        *x = -x.clone();
                    }
                }
                if !(pos || neg) && r > 1 {
                    // normal vanishes on every generator: not a facet of a
                    // full-dimensional cone
                } else {
                    found.insert(normal);
                }
            }
        }
        // next (r-1)-subset of 0..n
        if take == 0 {
            break;
        }
        let mut i = take;
        loop {
            if i == 0 {
                subset.clear();
                break;
            }
            i -= 1;
            if subset[i] != i + n - take {
                subset[i] += 1;
                for j in i + 1..take {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
        if subset.is_empty() || (take > 0 && subset[take - 1] >= n) {
            break;
        }
    }
    if r == 1 {
        // single coordinate: the ray direction gives the unique functional
        let sign_pos = gens.iter().any(|g| g[0].is_positive());
        return vec![vec![if sign_pos {
            BigInt::one()
        } else {
            -BigInt::one()
        }]];
    }
    found.into_iter().collect()
}

/// One-dimensional kernel of a set of row vectors in `R^r`, if the rank is
/// exactly `r - 1`.
fn kernel_line(rows: &IMat, r: usize) -> Option<Vec<BigInt>> {
    // transpose: kernel {x : rows * x = 0} is the left kernel of rows^T
    let t: IMat = (0..r)
        .map(|c| rows.iter().map(|row| row[c].clone()).collect())
        .collect();
    let ker = left_kernel_basis(&t);
    if ker.len() == 1 {
        Some(ker[0].clone())
    } else {
        None
    }
}

/// The smallest closed face of the cone containing a distinguished vector.
#[derive(Clone)]
pub struct Face {
    /// Indices (into `Cone::facets`) of the facets vanishing on the face.
    pub vanishing_facets: Vec<usize>,
    /// For each configuration point, whether it lies on the face.
    pub generator_on_face: Vec<bool>,
    /// The face as a cone in its own right (for relative-interior tests).
    pub cone: Cone,
}

/// A point configuration with a distinguished leading subset.
///
/// Internally the distinguished points are stored first; `index_map` keeps
/// the original positions for reporting.
#[derive(Clone)]
pub struct LatticeConfig {
    pub name: String,
    dim: usize,
    points: Vec<Vec<i64>>,
    aprime_len: usize,
    index_map: Vec<usize>,
    beta: Vec<i64>,
    height: Vec<i64>,
    group: ZaGroup,
    cone: Cone,
    beta_face: Face,
}

impl LatticeConfig {
    /// Build and validate a configuration. `aprime` holds 0-based indices
    /// into `points`; `height` is an optional covector with `c.a_j = 1` for
    /// all `j` (found automatically when omitted).
    pub fn new(
        name: impl Into<String>,
        points: Vec<Vec<i64>>,
        aprime: &[usize],
        height: Option<Vec<i64>>,
    ) -> Result<Self> {
        let n_points = points.len();
        if n_points == 0 {
            return Err(Error::InvalidConfig("no points given".into()));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::InvalidConfig("points have dimension zero".into()));
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
        }
        for i in 0..n_points {
            for j in i + 1..n_points {
                if points[i] == points[j] {
                    return Err(Error::InvalidConfig(format!(
                        "points {i} and {j} coincide"
                    )));
                }
            }
        }
        if aprime.is_empty() {
            return Err(Error::InvalidConfig(
                "the distinguished subset must be nonempty".into(),
            ));
        }
        let mut seen = vec![false; n_points];
        for &i in aprime {
            if i >= n_points {
                return Err(Error::InvalidConfig(format!(
                    "distinguished index {i} out of range"
                )));
            }
            if seen[i] {
                return Err(Error::InvalidConfig(format!(
                    "distinguished index {i} repeated"
                )));
            }
            seen[i] = true;
        }

        // reorder so the distinguished subset comes first
        let mut index_map: Vec<usize> = aprime.to_vec();
        for i in 0..n_points {
            if !seen[i] {
                index_map.push(i);
            }
        }
        let points: Vec<Vec<i64>> = index_map.iter().map(|&i| points[i].clone()).collect();
        let aprime_len = aprime.len();

        // height covector: validate or solve
        let height = match height {
            Some(c) => {
                if c.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: c.len(),
                    });
                }
                for p in &points {
                    if dot_i64(&c, p) != 1 {
                        return Err(Error::InvalidConfig(
                            "height covector does not evaluate to 1 on every point".into(),
                        ));
                    }
                }
                c
            }
            None => {
                // last-coordinate covector first, then a general integer solve
                if points.iter().all(|p| p[dim - 1] == 1) {
                    let mut c = vec![0i64; dim];
                    c[dim - 1] = 1;
                    c
                } else {
                    let m = to_bigint_matrix(&points);
                    let b = vec![BigInt::one(); n_points];
                    let c = solve_integer_columns(&m, &b).ok_or(Error::NoHeightCovector)?;
                    c.iter()
                        .map(|x| i64::try_from(x).map_err(|_| Error::NoHeightCovector))
                        .collect::<Result<Vec<i64>>>()?
                }
            }
        };

        let mut beta = vec![0i64; dim];
        for p in points.iter().take(aprime_len) {
            for (b, x) in beta.iter_mut().zip(p) {
                *b += x;
            }
        }

        let group = ZaGroup::from_points(&points);
        let cone = Cone::from_generators(&points, &group)?;
        let beta_face = build_face(&cone, &points, &group, &beta)?;

        Ok(LatticeConfig {
            name: name.into(),
            dim,
            points,
            aprime_len,
            index_map,
            beta,
            height,
            group,
            cone,
            beta_face,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    /// Points in internal order (distinguished subset first).
    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn aprime_len(&self) -> usize {
        self.aprime_len
    }

    pub fn index_map(&self) -> &[usize] {
        &self.index_map
    }

    pub fn beta(&self) -> &[i64] {
        &self.beta
    }

    pub fn height_covector(&self) -> &[i64] {
        &self.height
    }

    /// Height of a vector: the value of the covector on it.
    pub fn height_of(&self, v: &[i64]) -> i64 {
        dot_i64(&self.height, v)
    }

    pub fn group(&self) -> &ZaGroup {
        &self.group
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn beta_face(&self) -> &Face {
        &self.beta_face
    }

    /// Whether beta lies in the relative interior of the whole cone (the
    /// face it generates is everything).
    pub fn beta_interior(&self) -> bool {
        self.beta_face.vanishing_facets.is_empty()
    }

    /// Group membership of an ambient integer vector.
    pub fn za_member(&self, v: &[i64]) -> Result<bool> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        let vb: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        Ok(self.group.contains(&vb))
    }

    /// The face of the cone generated by an arbitrary member vector.
    pub fn face_of(&self, v: &[i64]) -> Result<Face> {
        if !self.cone.contains_int(v) {
            return Err(Error::NotInCone);
        }
        build_face(&self.cone, &self.points, &self.group, v)
    }

    /// Minimality of the distinguished subset: no proper subset sums into
    /// the relative interior of the beta face.
    pub fn aprime_minimal(&self) -> Result<bool> {
        let m = self.aprime_len;
        if m > 20 {
            return Err(Error::SubsetCapExceeded {
                needed: 1usize << m,
                cap: 20,
            });
        }
        for mask in 1..((1usize << m) - 1) {
            let mut sum = vec![0i64; self.dim];
            for (j, p) in self.points.iter().take(m).enumerate() {
                if mask & (1 << j) != 0 {
                    for (s, x) in sum.iter_mut().zip(p) {
                        *s += x;
                    }
                }
            }
            if self
                .beta_face
                .cone
                .relative_interior_contains_int(&sum)
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Nonnegative-combination membership in the semigroup generated by the
    /// points, searched up to a total-degree cap.
    pub fn semigroup_member(&self, v: &[i64], degree_cap: i64) -> Result<SemigroupAnswer> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        let h = self.height_of(v);
        if h < 0 {
            return Ok(SemigroupAnswer::No);
        }
        if h > degree_cap {
            return Ok(SemigroupAnswer::Unknown);
        }
        // heights force the total degree exactly; DFS over the points
        let reps = self.semigroup_representations_capped(v, Some(1));
        match reps.into_iter().next() {
            Some(l) => Ok(SemigroupAnswer::Yes(l)),
            None => Ok(SemigroupAnswer::No),
        }
    }

    /// All representations of `v` as a nonnegative integer combination of
    /// the points (finite because every point has height one).
    pub fn semigroup_representations(&self, v: &[i64]) -> Vec<Vec<i64>> {
        self.semigroup_representations_capped(v, None)
    }

    fn semigroup_representations_capped(&self, v: &[i64], limit: Option<usize>) -> Vec<Vec<i64>> {
        let h = self.height_of(v);
        let mut out = Vec::new();
        if h < 0 {
            return out;
        }
        let mut l = vec![0i64; self.points.len()];
        let target: Vec<i64> = v.to_vec();
        self.semigroup_dfs(0, &target, h, &mut l, &mut out, limit);
        out
    }

    fn semigroup_dfs(
        &self,
        j: usize,
        target: &[i64],
        budget: i64,
        l: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
        limit: Option<usize>,
    ) {
        if let Some(cap) = limit {
            if out.len() >= cap {
                return;
            }
        }
        let n = self.points.len();
        if j == n {
            if budget == 0 && target.iter().all(|&x| x == 0) {
                out.push(l.clone());
            }
            return;
        }
        if j == n - 1 {
            // the last multiplicity is forced by the height budget
            let p = &self.points[j];
            let ok = (0..self.dim).all(|c| target[c] == budget * p[c]);
            if ok {
                l[j] = budget;
                out.push(l.clone());
                l[j] = 0;
            }
            return;
        }
        let p = self.points[j].clone();
        let mut rem: Vec<i64> = target.to_vec();
        for k in 0..=budget {
            if k > 0 {
                for c in 0..self.dim {
                    rem[c] = target[c] - k * p[c];
                }
            }
            l[j] = k;
            let r = if k == 0 { target.to_vec() } else { rem.clone() };
            self.semigroup_dfs(j + 1, &r, budget - k, l, out, limit);
            l[j] = 0;
            if let Some(cap) = limit {
                if out.len() >= cap {
                    return;
                }
            }
        }
    }

    /// Integer points of the relative interior of the beta face at a fixed
    /// height, intersected with the group. Returned in lexicographic order
    /// of their ambient coordinates.
    pub fn interior_points_at_height(&self, h: i64) -> Result<Vec<Vec<i64>>> {
        let r = self.group.rank;
        let mut sys = IneqSystem::new(r);
        let vanishing: std::collections::BTreeSet<usize> =
            self.beta_face.vanishing_facets.iter().copied().collect();
        for (i, f) in self.cone.facet_rows.iter().enumerate() {
            if vanishing.contains(&i) {
                sys.push_eq(f.clone(), BigInt::zero());
            } else {
                sys.push(Ineq::gt(f.clone(), BigInt::zero()));
            }
        }
        // height equality in span coordinates
        let cb: Vec<BigInt> = self.height.iter().map(|&x| BigInt::from(x)).collect();
        let hcoeffs: Vec<BigInt> = self
            .group
            .hnf_rows
            .iter()
            .map(|row| dot(row, &cb))
            .collect();
        sys.push_eq(hcoeffs, BigInt::from(h));
        let pts = sys.lattice_points()?;
        let mut out: Vec<Vec<i64>> = pts
            .iter()
            .map(|x| {
                let xb: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
                self.group
                    .ambient(&xb)
                    .iter()
                    .map(|b| i64::try_from(b).expect("interior point fits in i64"))
                    .collect()
            })
            .collect();
        out.sort();
        Ok(out)
    }

    /// Apply a unimodular transform to every point (and the height data).
    fn transformed(&self, t: &IMat, name: String) -> Result<LatticeConfig> {
        let points: Vec<Vec<i64>> = self
            .points
            .iter()
            .map(|p| {
                let pb: Vec<BigInt> = p.iter().map(|&x| BigInt::from(x)).collect();
                mat_vec(t, &pb)
                    .iter()
                    .map(|x| i64::try_from(x).map_err(|_| Error::InvalidConfig("overflow".into())))
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<_>>()?;
        // points are already in internal order; keep the subset designation
        let aprime: Vec<usize> = (0..self.aprime_len).collect();
        let mut cfg = LatticeConfig::new(name, points, &aprime, None)?;
        cfg.index_map = self.index_map.clone();
        Ok(cfg)
    }
}

/// Outcome of a capped semigroup search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemigroupAnswer {
    Yes(Vec<i64>),
    No,
    Unknown,
}

fn build_face(
    cone: &Cone,
    points: &[Vec<i64>],
    group: &ZaGroup,
    v: &[i64],
) -> Result<Face> {
    let vb: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
    let coords = group
        .coordinates(&vb)
        .or_else(|| {
            // allow rational cone members outside the group: scale away
            None
        })
        .ok_or(Error::NotInCone)?;
    let vanishing: Vec<usize> = cone
        .facet_rows
        .iter()
        .enumerate()
        .filter(|(_, f)| dot(f, &coords).is_zero())
        .map(|(i, _)| i)
        .collect();
    let on_face: Vec<bool> = cone
        .gen_coords
        .iter()
        .map(|g| vanishing.iter().all(|&i| dot(&cone.facet_rows[i], g).is_zero()))
        .collect();
    let face_points: Vec<Vec<i64>> = points
        .iter()
        .zip(&on_face)
        .filter(|(_, &keep)| keep)
        .map(|(p, _)| p.clone())
        .collect();
    if face_points.is_empty() {
        return Err(Error::NotInCone);
    }
    let face_group = ZaGroup::from_points(&face_points);
    let face_cone = Cone::from_generators(&face_points, &face_group)?;
    Ok(Face {
        vanishing_facets: vanishing,
        generator_on_face: on_face,
        cone: face_cone,
    })
}

/// Transform the configuration so every point has last coordinate one.
/// Returns the transformed configuration and the unimodular matrix used.
pub fn hyperplane_normalize(cfg: &LatticeConfig) -> Result<(LatticeConfig, IMat)> {
    let n = cfg.dim();
    let c: Vec<BigInt> = cfg.height.iter().map(|&x| BigInt::from(x)).collect();
    let already = cfg.points.iter().all(|p| p[n - 1] == 1);
    if already {
        return Ok((cfg.clone(), matrix::identity(n)));
    }
    let t = unimodular_with_last_row(&c)?;
    let out = cfg.transformed(&t, format!("{}-normalized", cfg.name))?;
    debug_assert!(out.points.iter().all(|p| p[n - 1] == 1));
    Ok((out, t))
}

#[cfg(test)]
pub mod fixtures {
    use super::*;

    /// Cubic-surface configuration: six points in `Z^5`, leading pair
    /// distinguished.
    pub fn cubic_surface() -> LatticeConfig {
        LatticeConfig::new(
            "cubic-surface",
            vec![
                vec![1, 1, 1, 0, 1],
                vec![0, 1, 1, 1, 1],
                vec![3, 0, 0, 0, 1],
                vec![0, 3, 0, 0, 1],
                vec![0, 0, 3, 0, 1],
                vec![0, 0, 0, 3, 1],
            ],
            &[0, 1],
            None,
        )
        .unwrap()
    }

    /// Seven-point configuration attached to the ratios
    /// `(30m)! m! / ((15m)! (10m)! (6m)!)`.
    pub fn config_30_15_10_6() -> LatticeConfig {
        LatticeConfig::new(
            "f30-15-10-6",
            vec![
                vec![1, 0, 0, 0, 0, 0],
                vec![0, 1, 0, 0, 0, 0],
                vec![0, 0, 1, 0, 0, 0],
                vec![0, 0, 0, 1, 0, 0],
                vec![0, 0, 0, 0, 1, 0],
                vec![0, 0, 0, 0, 0, 1],
                vec![1, 30, 1, -15, -10, -6],
            ],
            &[0, 1, 2],
            None,
        )
        .unwrap()
    }

    /// Two points in the plane with both distinguished; the smallest
    /// configuration whose sum lies interior to the cone.
    pub fn smallest() -> LatticeConfig {
        LatticeConfig::new(
            "smallest",
            vec![vec![0, 1], vec![1, 1]],
            &[0, 1],
            None,
        )
        .unwrap()
    }
}
