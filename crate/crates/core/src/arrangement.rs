//! Central hyperplane arrangements with integer normals and their covectors.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::complex::{Complex, ComplexBuilder, FaceId};
use crate::error::{Error, Result};

/// Largest arrangement accepted by face enumeration.
pub const MAX_HYPERPLANES: usize = 16;
pub const MAX_DIMENSION: usize = 6;

/// A covector: one entry in `{-1, 0, 1}` per hyperplane.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(pub Vec<i8>);

impl SignVector {
    pub fn parse(text: &str) -> Result<Self> {
        text.chars()
            .map(|ch| match ch {
                '+' => Ok(1),
                '-' => Ok(-1),
                '0' => Ok(0),
                other => Err(Error::BadParameter(format!("sign `{other}`"))),
            })
            .collect::<Result<Vec<i8>>>()
            .map(SignVector)
    }

    /// Composition: `x_H` where nonzero, else `y_H`.
    pub fn compose(&self, other: &SignVector) -> SignVector {
        SignVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| if a != 0 { a } else { b })
                .collect(),
        )
    }

    /// `self` is a face of `other`.
    pub fn le(&self, other: &SignVector) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || a == b)
    }

    pub fn is_chamber(&self) -> bool {
        self.0.iter().all(|&x| x != 0)
    }

    /// Bitmask of hyperplanes not containing the face.
    pub fn support(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn neg(&self) -> SignVector {
        SignVector(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &x in &self.0 {
            f.write_str(match x {
                1 => "+",
                -1 => "-",
                _ => "0",
            })?;
        }
        Ok(())
    }
}

type Q = Ratio<i128>;

/// Rank of an integer matrix.
pub fn matrix_rank(rows: &[Vec<i64>]) -> usize {
    rref(rows).1.len()
}

/// Reduced row echelon form over the rationals with its pivot columns.
fn rref(rows: &[Vec<i64>]) -> (Vec<Vec<Q>>, Vec<usize>) {
    let cols = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Q::from_integer(x as i128)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let lead = m[row][col];
        for x in &mut m[row] {
            *x /= lead;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let factor = m[i][col];
                for j in 0..cols {
                    let delta = factor * m[row][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    m.truncate(row);
    (m, pivots)
}

/// Integer basis of `{x : rows·x = 0}` in `dim` variables.
fn nullspace(rows: &[Vec<i64>], dim: usize) -> Vec<Vec<i128>> {
    if rows.is_empty() {
        return (0..dim)
            .map(|i| (0..dim).map(|j| i128::from(i == j)).collect())
            .collect();
    }
    let (m, pivots) = rref(rows);
    let mut basis = Vec::new();
    for free in (0..dim).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); dim];
        v[free] = Q::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -m[r][free];
        }
        let lcm = v.iter().fold(1i128, |acc, x| acc.lcm(x.denom()));
        basis.push(
            v.iter()
                .map(|x| (x * Q::from_integer(lcm)).to_integer())
                .collect(),
        );
    }
    basis
}

fn normalize(row: &mut [i128]) {
    let g = row.iter().fold(0i128, |acc, x| acc.gcd(x));
    if g > 1 {
        for x in row.iter_mut() {
            *x /= g;
        }
    }
}

/// Whether `rows · y > 0` (all strict) has a solution, by Fourier–Motzkin.
fn strictly_feasible(mut rows: Vec<Vec<i128>>) -> bool {
    let vars = rows.first().map_or(0, Vec::len);
    for var in 0..vars {
        if rows.iter().any(|r| r.iter().all(Zero::is_zero)) {
            return false;
        }
        let (mut pos, mut neg, mut keep) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            match r[var].signum() {
                1 => pos.push(r),
                -1 => neg.push(r),
                _ => keep.push(r),
            }
        }
        if pos.is_empty() || neg.is_empty() {
            // the variable can be pushed far enough to satisfy every row using it
            rows = keep;
        } else {
            for p in &pos {
                for n in &neg {
                    let (a, b) = (p[var], -n[var]);
                    let mut r: Vec<i128> = p.iter().zip(n).map(|(x, y)| b * x + a * y).collect();
                    normalize(&mut r);
                    keep.push(r);
                }
            }
            keep.sort_unstable();
            keep.dedup();
            rows = keep;
        }
    }
    rows.is_empty()
}

/// A central arrangement given by integer normals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    pub dim: usize,
    pub normals: Vec<Vec<i64>>,
}

/// Reflection families with a Coxeter arrangement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoxeterFamily {
    A,
    B,
    D,
}

impl std::str::FromStr for CoxeterFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(CoxeterFamily::A),
            "B" | "b" => Ok(CoxeterFamily::B),
            "D" | "d" => Ok(CoxeterFamily::D),
            _ => Err(Error::BadParameter(format!("coxeter family `{s}`"))),
        }
    }
}

impl Arrangement {
    pub fn new(normals: Vec<Vec<i64>>) -> Result<Self> {
        let dim = normals
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::EmptyInput("no hyperplanes".into()))?;
        for (i, n) in normals.iter().enumerate() {
            if n.len() != dim {
                return Err(Error::DegenerateNormal(format!(
                    "hyperplane {i} has {} coordinates, expected {dim}",
                    n.len()
                )));
            }
            if n.iter().all(|&x| x == 0) {
                return Err(Error::DegenerateNormal(format!("hyperplane {i} is zero")));
            }
            for (j, m) in normals[..i].iter().enumerate() {
                if matrix_rank(&[n.clone(), m.clone()]) == 1 {
                    return Err(Error::DegenerateNormal(format!(
                        "hyperplanes {j} and {i} are parallel"
                    )));
                }
            }
        }
        Ok(Arrangement { dim, normals })
    }

    /// `hyperplane a1 a2 ...` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut normals = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut toks = line.split_whitespace();
            if toks.next() != Some("hyperplane") {
                return Err(Error::Parse {
                    line: i + 1,
                    message: "expected `hyperplane a1 a2 ...`".into(),
                });
            }
            let row = toks
                .map(|t| {
                    t.parse::<i64>().map_err(|_| Error::Parse {
                        line: i + 1,
                        message: format!("bad integer `{t}`"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            normals.push(row);
        }
        Arrangement::new(normals)
    }

    pub fn to_text(&self) -> String {
        self.normals
            .iter()
            .map(|n| {
                let parts: Vec<String> = n.iter().map(i64::to_string).collect();
                format!("hyperplane {}\n", parts.join(" "))
            })
            .collect()
    }

    /// Dimension of the span of the normals.
    pub fn rank(&self) -> usize {
        matrix_rank(&self.normals)
    }

    pub fn is_essential(&self) -> bool {
        self.rank() == self.dim
    }

    /// Coordinate hyperplanes `x_i = 0` in dimension `n`.
    pub fn boolean(n: usize) -> Result<Self> {
        Arrangement::new(
            (0..n)
                .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
                .collect(),
        )
    }

    /// Reflection arrangement of type `A_{n-1}`, `B_n` or `D_n`.
    ///
    /// Type A is written in the coordinates `y_i = x_i - x_{n-1}` of the
    /// sum-zero quotient: `x_i = x_j` becomes `y_i = y_j` for `i < j < n-1`
    /// and `x_i = x_{n-1}` becomes `y_i = 0`.
    pub fn coxeter(family: CoxeterFamily, n: usize) -> Result<Self> {
        let (lo, hi) = match family {
            CoxeterFamily::A => (2, 6),
            CoxeterFamily::B => (1, 4),
            CoxeterFamily::D => (2, 4),
        };
        if n < lo {
            return Err(Error::BadParameter(format!(
                "{family:?}{n} needs n >= {lo}"
            )));
        }
        if n > hi {
            return Err(Error::ScaleExceeded(format!(
                "{family:?} with n = {n} > {hi}"
            )));
        }
        let unit = |d: usize, i: usize| -> Vec<i64> { (0..d).map(|j| i64::from(i == j)).collect() };
        let pair = |d: usize, i: usize, j: usize, s: i64| -> Vec<i64> {
            let mut v = unit(d, i);
            v[j] += s;
            v
        };
        let mut normals = Vec::new();
        match family {
            CoxeterFamily::A => {
                let d = n - 1;
                for i in 0..d {
                    for j in i + 1..d {
                        normals.push(pair(d, i, j, -1));
                    }
                }
                for i in 0..d {
                    normals.push(unit(d, i));
                }
            }
            CoxeterFamily::B | CoxeterFamily::D => {
                if family == CoxeterFamily::B {
                    for i in 0..n {
                        normals.push(unit(n, i));
                    }
                }
                for i in 0..n {
                    for j in i + 1..n {
                        normals.push(pair(n, i, j, -1));
                        normals.push(pair(n, i, j, 1));
                    }
                }
            }
        }
        Arrangement::new(normals)
    }

    /// Arrangement for a type name such as `A3`, `B3` or `D4`, where the
    /// number is the rank of the reflection group.
    pub fn coxeter_type(name: &str) -> Result<Self> {
        let bad = || Error::BadParameter(format!("coxeter type `{name}`"));
        let split = name.char_indices().nth(1).map(|(i, _)| i).ok_or_else(bad)?;
        let (fam, rank) = name.split_at(split);
        let family: CoxeterFamily = fam.parse()?;
        let rank: usize = rank.parse().map_err(|_| bad())?;
        match family {
            CoxeterFamily::A => Arrangement::coxeter(family, rank + 1),
            _ => Arrangement::coxeter(family, rank),
        }
    }

    /// Order of the reflection group, which is the chamber count.
    pub fn coxeter_order(family: CoxeterFamily, n: usize) -> usize {
        let fact: usize = (1..=n).product();
        match family {
            CoxeterFamily::A => fact,
            CoxeterFamily::B => fact << n,
            CoxeterFamily::D => fact << (n - 1),
        }
    }

    /// Whether some point has exactly the signs `s` on the first `s.len()`
    /// hyperplanes.
    pub fn is_realizable(&self, s: &[i8]) -> bool {
        let zero: Vec<Vec<i64>> = s
            .iter()
            .enumerate()
            .filter(|(_, &x)| x == 0)
            .map(|(i, _)| self.normals[i].clone())
            .collect();
        let basis = nullspace(&zero, self.dim);
        if basis.is_empty() {
            return s.iter().all(|&x| x == 0);
        }
        let mut rows: Vec<Vec<i128>> = s
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| {
                let a = &self.normals[i];
                let mut r: Vec<i128> = basis
                    .iter()
                    .map(|b| {
                        let dot: i128 = a.iter().zip(b).map(|(&p, &q)| p as i128 * q).sum();
                        dot * x as i128
                    })
                    .collect();
                normalize(&mut r);
                r
            })
            .collect();
        rows.sort_unstable();
        rows.dedup();
        strictly_feasible(rows)
    }

    /// All covectors, by inserting hyperplanes one at a time and keeping the
    /// realizable pieces of each existing face.
    pub fn enumerate_faces(&self) -> Result<FaceEnumeration> {
        if self.normals.len() > MAX_HYPERPLANES || self.dim > MAX_DIMENSION {
            return Err(Error::ScaleExceeded(format!(
                "{} hyperplanes in dimension {}",
                self.normals.len(),
                self.dim
            )));
        }
        let mut faces: Vec<Vec<i8>> = vec![Vec::new()];
        for k in 0..self.normals.len() {
            let mut next = Vec::with_capacity(faces.len() * 2);
            for f in &faces {
                for s in [-1i8, 0, 1] {
                    let mut g = f.clone();
                    g.push(s);
                    if self.is_realizable(&g) {
                        next.push(g);
                    }
                }
            }
            faces = next;
            debug_assert!(faces.iter().all(|f| f.len() == k + 1));
        }
        let mut covectors: Vec<SignVector> = faces.into_iter().map(SignVector).collect();
        covectors.sort_by_key(|s| (s.0.iter().filter(|&&x| x != 0).count(), s.clone()));
        let euler: i64 = covectors
            .iter()
            .map(|s| if self.face_dim(s) % 2 == 0 { 1 } else { -1 })
            .sum();
        let expected = if self.dim % 2 == 0 { 1 } else { -1 };
        if euler != expected {
            return Err(Error::EulerMismatch(format!(
                "alternating face count {euler}, expected {expected}"
            )));
        }
        Ok(FaceEnumeration::new(covectors))
    }

    /// Dimension of the cone with sign vector `s`.
    pub fn face_dim(&self, s: &SignVector) -> usize {
        let zero: Vec<Vec<i64>> =
            s.0.iter()
                .enumerate()
                .filter(|(_, &x)| x == 0)
                .map(|(i, _)| self.normals[i].clone())
                .collect();
        self.dim - matrix_rank(&zero)
    }

    /// Hyperplanes spanned by facets of a chamber.
    pub fn walls(&self, faces: &FaceEnumeration, chamber: &SignVector) -> Vec<usize> {
        (0..self.normals.len())
            .filter(|&h| {
                let mut f = chamber.clone();
                f.0[h] = 0;
                faces.index_of(&f).is_some()
            })
            .collect()
    }

    /// A chamber is simplicial when it has exactly `rank` walls with
    /// independent normals. Returns the first chamber that is not.
    pub fn non_simplicial_chamber(&self, faces: &FaceEnumeration) -> Option<SignVector> {
        let r = self.rank();
        faces.chambers().find_map(|c| {
            let walls = self.walls(faces, &faces.covectors[c]);
            let normals: Vec<Vec<i64>> = walls.iter().map(|&h| self.normals[h].clone()).collect();
            (walls.len() != r || matrix_rank(&normals) != r).then(|| faces.covectors[c].clone())
        })
    }

    pub fn is_simplicial(&self, faces: &FaceEnumeration) -> bool {
        self.non_simplicial_chamber(faces).is_none()
    }

    /// The simplicial complex whose vertices are the rays and whose chambers
    /// are the chambers of an essential simplicial arrangement. Vertices are
    /// typed when the types propagate consistently across facets.
    pub fn complex(&self, faces: &FaceEnumeration) -> Result<ArrangementComplex> {
        if !self.is_essential() {
            return Err(Error::NotSimplicial("arrangement is not essential".into()));
        }
        if let Some(c) = self.non_simplicial_chamber(faces) {
            return Err(Error::NotSimplicial(format!("chamber {c}")));
        }
        let rays: Vec<usize> = (0..faces.len())
            .filter(|&i| self.face_dim(&faces.covectors[i]) == 1)
            .collect();
        let chambers: Vec<usize> = faces.chambers().collect();
        let chamber_rays: Vec<Vec<usize>> = chambers
            .iter()
            .map(|&c| {
                rays.iter()
                    .copied()
                    .filter(|&r| faces.covectors[r].le(&faces.covectors[c]))
                    .collect()
            })
            .collect();
        let types = propagate_types(&chamber_rays, faces.len(), self.dim);
        let mut b = ComplexBuilder::new();
        for &r in &rays {
            let name = faces.covectors[r].to_string();
            let ty = types.as_ref().map(|t| (t[r] + 1).to_string());
            b.vertex(&name, ty.as_deref())?;
        }
        for (i, &c) in chambers.iter().enumerate() {
            let names: Vec<String> = chamber_rays[i]
                .iter()
                .map(|&r| faces.covectors[r].to_string())
                .collect();
            b.chamber(Some(&faces.covectors[c].to_string()), &names)?;
        }
        let complex = b.build()?;
        let mut face_covector = vec![0; complex.num_faces()];
        let mut covector_face = vec![None; faces.len()];
        for f in 0..complex.num_faces() {
            let mut s = SignVector(vec![0; self.normals.len()]);
            for &v in complex.face(f) {
                let ray = SignVector::parse(complex.vertex_name(v))?;
                s = s.compose(&ray);
            }
            let idx = faces
                .index_of(&s)
                .ok_or_else(|| Error::RealizabilityFailure(format!("join {s} is not a face")))?;
            face_covector[f] = idx;
            covector_face[idx] = Some(f);
        }
        if covector_face.iter().any(Option::is_none) {
            return Err(Error::Inconsistent(
                "some covector is not a simplex of the ray complex".into(),
            ));
        }
        Ok(ArrangementComplex {
            complex,
            face_covector,
            covector_face: covector_face
                .into_iter()
                .map(|x| x.expect("checked"))
                .collect(),
        })
    }
}

/// Type each ray so that every chamber sees each type once, if possible.
fn propagate_types(chamber_rays: &[Vec<usize>], n: usize, rank: usize) -> Option<Vec<usize>> {
    let mut ty = vec![usize::MAX; n];
    for (i, &r) in chamber_rays.first()?.iter().enumerate() {
        ty[r] = i;
    }
    let mut done = vec![false; chamber_rays.len()];
    let mut queue = VecDeque::from([0usize]);
    done[0] = true;
    while let Some(c) = queue.pop_front() {
        for (d, rays) in chamber_rays.iter().enumerate() {
            if done[d] {
                continue;
            }
            let shared = rays.iter().filter(|r| chamber_rays[c].contains(r)).count();
            if shared + 1 != rank {
                continue;
            }
            let missing: usize = (0..rank)
                .find(|t| !rays.iter().any(|&r| ty[r] == *t))
                .unwrap_or(usize::MAX);
            for &r in rays {
                if ty[r] == usize::MAX {
                    ty[r] = missing;
                }
            }
            done[d] = true;
            queue.push_back(d);
        }
    }
    let ok = chamber_rays.iter().all(|rays| {
        let mut seen = vec![false; rank];
        rays.iter()
            .all(|&r| ty[r] < rank && !std::mem::replace(&mut seen[ty[r]], true))
    });
    ok.then_some(ty)
}

/// Covectors of an arrangement, sorted by support size then sign pattern.
#[derive(Debug, Clone)]
pub struct FaceEnumeration {
    pub covectors: Vec<SignVector>,
    index: HashMap<SignVector, usize>,
}

impl FaceEnumeration {
    fn new(covectors: Vec<SignVector>) -> Self {
        let index = covectors
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        FaceEnumeration { covectors, index }
    }

    pub fn len(&self) -> usize {
        self.covectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covectors.is_empty()
    }

    pub fn index_of(&self, s: &SignVector) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn chambers(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.covectors[i].is_chamber())
    }

    pub fn num_chambers(&self) -> usize {
        self.chambers().count()
    }

    /// Composition of two covectors, which must again be a covector.
    pub fn product(&self, x: usize, y: usize) -> Result<usize> {
        let s = self.covectors[x].compose(&self.covectors[y]);
        self.index_of(&s)
            .ok_or_else(|| Error::RealizabilityFailure(format!("{s} is not a face")))
    }
}

/// A simplicial arrangement as a complex, with the face correspondence.
#[derive(Debug, Clone)]
pub struct ArrangementComplex {
    pub complex: Complex,
    /// Complex face id to covector index.
    pub face_covector: Vec<usize>,
    /// Covector index to complex face id.
    pub covector_face: Vec<FaceId>,
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Covectors by scanning all 3^m sign patterns.
    fn brute_force(a: &Arrangement) -> usize {
        let m = a.normals.len();
        (0..3usize.pow(m as u32))
            .filter(|&code| {
                let s: Vec<i8> = (0..m)
                    .map(|i| (code / 3usize.pow(i as u32) % 3) as i8 - 1)
                    .collect();
                a.is_realizable(&s)
            })
            .count()
    }

    #[test]
    fn boolean_cube() {
        let a = Arrangement::boolean(3).unwrap();
        let f = a.enumerate_faces().unwrap();
        assert_eq!((f.len(), f.num_chambers()), (27, 8));
        let ac = a.complex(&f).unwrap();
        assert_eq!(ac.complex.num_faces(), 27);
        assert!(ac.complex.is_labelled());
    }

    #[test]
    fn braid_a2() {
        let a = Arrangement::new(vec![vec![1, -1, 0], vec![0, 1, -1], vec![1, 0, -1]]).unwrap();
        let f = a.enumerate_faces().unwrap();
        assert_eq!(f.len(), brute_force(&a));
        assert_eq!((f.len(), f.num_chambers()), (13, 6));
        assert!(!a.is_essential());
    }

    #[test]
    fn generic_four_planes() {
        let a = Arrangement::new(vec![
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![1, 1, 1],
        ])
        .unwrap();
        let f = a.enumerate_faces().unwrap();
        assert_eq!(f.len(), brute_force(&a));
        assert_eq!(f.num_chambers(), 14);
        // V - E + F on the sphere: 12 rays, 24 two-dimensional cones
        let by_dim = |d| f.covectors.iter().filter(|s| a.face_dim(s) == d).count();
        assert_eq!((by_dim(1), by_dim(2), by_dim(3)), (12, 24, 14));
        assert!(!a.is_simplicial(&f));
        assert!(matches!(a.complex(&f), Err(Error::NotSimplicial(_))));
    }

    #[test]
    fn composition() {
        let x = SignVector::parse("0+0").unwrap();
        let y = SignVector::parse("--+").unwrap();
        assert_eq!(x.compose(&y).to_string(), "-++");
        assert_eq!(x.compose(&x), x);
    }

    #[test]
    fn coxeter_counts() {
        for (fam, n, hyper) in [
            (CoxeterFamily::A, 4, 6),
            (CoxeterFamily::B, 3, 9),
            (CoxeterFamily::D, 4, 12),
        ] {
            let a = Arrangement::coxeter(fam, n).unwrap();
            assert_eq!(a.normals.len(), hyper);
            let f = a.enumerate_faces().unwrap();
            assert_eq!(f.num_chambers(), Arrangement::coxeter_order(fam, n));
            assert!(a.is_simplicial(&f));
        }
        assert!(matches!(
            Arrangement::coxeter(CoxeterFamily::B, 5),
            Err(Error::ScaleExceeded(_))
        ));
    }

    #[test]
    fn coxeter_type_names() {
        let a3 = Arrangement::coxeter_type("A3").unwrap();
        assert_eq!((a3.normals.len(), a3.rank()), (6, 3));
        assert_eq!(Arrangement::coxeter_type("d4").unwrap().normals.len(), 12);
        assert!(matches!(
            Arrangement::coxeter_type("E8"),
            Err(Error::BadParameter(_))
        ));
        assert!(matches!(
            Arrangement::coxeter_type("B"),
            Err(Error::BadParameter(_))
        ));
    }

    #[test]
    fn degenerate_rejected() {
        assert!(matches!(
            Arrangement::new(vec![vec![1, 0], vec![0, 0]]),
            Err(Error::DegenerateNormal(_))
        ));
        assert!(matches!(
            Arrangement::new(vec![vec![1, 2], vec![-2, -4]]),
            Err(Error::DegenerateNormal(_))
        ));
        let a = Arrangement::parse("hyperplane 1 0\nhyperplane 0 1\n").unwrap();
        assert_eq!(Arrangement::parse(&a.to_text()).unwrap(), a);
    }
}
