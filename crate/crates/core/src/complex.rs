//! Finite pure simplicial complexes with the gallery metric.
//!
//! Rank means vertex count: a chamber has `rank` vertices and the empty
//! face has rank 0. Dimension is rank minus one.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::report::Check;

pub type VertexId = u32;
pub type ChamberId = usize;
pub type FaceId = usize;

/// Face id of the empty face in every complex.
pub const EMPTY_FACE: FaceId = 0;

/// Chambers with more vertices than this are rejected.
pub const MAX_RANK: usize = 16;

const UNREACHABLE: u32 = u32::MAX;

#[derive(Debug, Default, Clone)]
pub struct ComplexBuilder {
    vertex_names: Vec<String>,
    vertex_index: HashMap<String, VertexId>,
    vertex_types: Vec<Option<String>>,
    chambers: Vec<(Option<String>, Vec<VertexId>)>,
}

impl ComplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declare a vertex. Redeclaring a name is an error.
    pub fn vertex(&mut self, name: &str, ty: Option<&str>) -> Result<VertexId> {
        if self.vertex_index.contains_key(name) {
            return Err(Error::Duplicate(format!("vertex {name}")));
        }
        Ok(self.insert_vertex(name, ty))
    }

    fn insert_vertex(&mut self, name: &str, ty: Option<&str>) -> VertexId {
        let id = self.vertex_names.len() as VertexId;
        self.vertex_names.push(name.to_string());
        self.vertex_index.insert(name.to_string(), id);
        self.vertex_types.push(ty.map(str::to_string));
        id
    }

    /// Add a chamber; undeclared vertices are declared untyped.
    pub fn chamber<S: AsRef<str>>(&mut self, name: Option<&str>, vertices: &[S]) -> Result<()> {
        let mut ids = Vec::with_capacity(vertices.len());
        for v in vertices {
            let v = v.as_ref();
            let id = match self.vertex_index.get(v) {
                Some(&id) => id,
                None => self.insert_vertex(v, None),
            };
            ids.push(id);
        }
        self.chambers.push((name.map(str::to_string), ids));
        Ok(())
    }

    pub fn build(self) -> Result<Complex> {
        if self.chambers.is_empty() {
            return Err(Error::EmptyInput("no chambers".into()));
        }
        let typed = self.vertex_types.iter().filter(|t| t.is_some()).count();
        if typed != 0 && typed != self.vertex_types.len() {
            let v = self
                .vertex_types
                .iter()
                .position(Option::is_none)
                .expect("some vertex is untyped");
            return Err(Error::BadLabelling(format!(
                "vertex {} has no type while others do",
                self.vertex_names[v]
            )));
        }
        let mut labels: Vec<String> = Vec::new();
        let vertex_types = if typed == 0 {
            None
        } else {
            let mut out = Vec::with_capacity(self.vertex_types.len());
            for t in &self.vertex_types {
                let t = t.as_deref().expect("all typed");
                let idx = match labels.iter().position(|l| l == t) {
                    Some(i) => i,
                    None => {
                        labels.push(t.to_string());
                        labels.len() - 1
                    }
                };
                out.push(idx as u8);
            }
            Some(out)
        };

        let mut chambers = Vec::with_capacity(self.chambers.len());
        let mut chamber_names = Vec::with_capacity(self.chambers.len());
        let rank = {
            let mut v = self.chambers[0].1.clone();
            v.sort_unstable();
            v.dedup();
            v.len()
        };
        if rank == 0 {
            return Err(Error::EmptyInput("chamber with no vertices".into()));
        }
        if rank > MAX_RANK {
            return Err(Error::ScaleExceeded(format!("rank {rank} > {MAX_RANK}")));
        }
        for (name, ids) in self.chambers {
            let mut sorted = ids.clone();
            sorted.sort_unstable();
            sorted.dedup();
            let default_name = sorted
                .iter()
                .map(|&v| self.vertex_names[v as usize].as_str())
                .collect::<Vec<_>>()
                .join("_");
            let name = name.unwrap_or(default_name);
            if sorted.len() != rank {
                return Err(Error::NotPure {
                    chamber: name,
                    found: sorted.len(),
                    expected: rank,
                });
            }
            chambers.push(sorted);
            chamber_names.push(name);
        }
        if labels.len() > 32 {
            return Err(Error::BadLabelling("more than 32 labels".into()));
        }
        if let Some(types) = &vertex_types {
            if labels.len() != rank {
                return Err(Error::BadLabelling(format!(
                    "{} labels for chambers of rank {rank}",
                    labels.len()
                )));
            }
            for (c, ch) in chambers.iter().enumerate() {
                let mut seen = 0u32;
                for &v in ch {
                    let bit = 1u32 << types[v as usize];
                    if seen & bit != 0 {
                        return Err(Error::BadLabelling(format!(
                            "chamber {} repeats type {}",
                            chamber_names[c], labels[types[v as usize] as usize]
                        )));
                    }
                    seen |= bit;
                }
            }
        }
        Complex::assemble(
            self.vertex_names,
            vertex_types,
            labels,
            chamber_names,
            chambers,
            rank,
        )
    }
}

/// A finite pure simplicial complex, immutable after construction.
#[derive(Debug)]
pub struct Complex {
    vertex_names: Vec<String>,
    vertex_index: HashMap<String, VertexId>,
    vertex_types: Option<Vec<u8>>,
    labels: Vec<String>,
    chamber_names: Vec<String>,
    chamber_index: HashMap<String, ChamberId>,
    chambers: Vec<Vec<VertexId>>,
    faces: Vec<Vec<VertexId>>,
    face_index: HashMap<Vec<VertexId>, FaceId>,
    rank: usize,
    chamber_faces: Vec<Vec<FaceId>>,
    residues: Vec<Vec<ChamberId>>,
    adjacency: Vec<Vec<ChamberId>>,
    distances: OnceLock<Vec<Vec<u32>>>,
}

impl Clone for Complex {
    fn clone(&self) -> Self {
        Complex {
            vertex_names: self.vertex_names.clone(),
            vertex_index: self.vertex_index.clone(),
            vertex_types: self.vertex_types.clone(),
            labels: self.labels.clone(),
            chamber_names: self.chamber_names.clone(),
            chamber_index: self.chamber_index.clone(),
            chambers: self.chambers.clone(),
            faces: self.faces.clone(),
            face_index: self.face_index.clone(),
            rank: self.rank,
            chamber_faces: self.chamber_faces.clone(),
            residues: self.residues.clone(),
            adjacency: self.adjacency.clone(),
            distances: OnceLock::new(),
        }
    }
}

impl Complex {
    fn assemble(
        vertex_names: Vec<String>,
        vertex_types: Option<Vec<u8>>,
        labels: Vec<String>,
        chamber_names: Vec<String>,
        chambers: Vec<Vec<VertexId>>,
        rank: usize,
    ) -> Result<Self> {
        let mut chamber_index = HashMap::new();
        for (i, n) in chamber_names.iter().enumerate() {
            if chamber_index.insert(n.clone(), i).is_some() {
                return Err(Error::Duplicate(format!("chamber name {n}")));
            }
        }
        let mut seen = HashMap::new();
        for (i, c) in chambers.iter().enumerate() {
            if let Some(j) = seen.insert(c.clone(), i) {
                return Err(Error::Duplicate(format!(
                    "chambers {} and {} have the same vertices",
                    chamber_names[j], chamber_names[i]
                )));
            }
        }

        let full = 1usize << rank;
        let mut all: BTreeSet<(usize, Vec<VertexId>)> = BTreeSet::new();
        for c in &chambers {
            for mask in 0..full {
                let f = subset(c, mask);
                all.insert((f.len(), f));
            }
        }
        let faces: Vec<Vec<VertexId>> = all.into_iter().map(|(_, f)| f).collect();
        let face_index: HashMap<Vec<VertexId>, FaceId> = faces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        let mut residues = vec![Vec::new(); faces.len()];
        let mut chamber_faces = Vec::with_capacity(chambers.len());
        for (ci, c) in chambers.iter().enumerate() {
            let row: Vec<FaceId> = (0..full).map(|m| face_index[&subset(c, m)]).collect();
            for &f in &row {
                residues[f].push(ci);
            }
            chamber_faces.push(row);
        }
        let mut adjacency = vec![Vec::new(); chambers.len()];
        for (f, face) in faces.iter().enumerate() {
            if face.len() + 1 == rank {
                let res = &residues[f];
                for &a in res {
                    for &b in res {
                        if a != b {
                            adjacency[a].push(b);
                        }
                    }
                }
            }
        }
        for a in &mut adjacency {
            a.sort_unstable();
            a.dedup();
        }
        let vertex_index = vertex_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i as VertexId))
            .collect();
        Ok(Complex {
            vertex_names,
            vertex_index,
            vertex_types,
            labels,
            chamber_names,
            chamber_index,
            chambers,
            faces,
            face_index,
            rank,
            chamber_faces,
            residues,
            adjacency,
            distances: OnceLock::new(),
        })
    }

    /// Unlabelled complex on integer vertex names.
    pub fn from_chambers(chambers: &[Vec<usize>]) -> Result<Self> {
        let mut b = ComplexBuilder::new();
        let mut verts: Vec<usize> = chambers.iter().flatten().copied().collect();
        verts.sort_unstable();
        verts.dedup();
        for v in verts {
            b.vertex(&v.to_string(), None)?;
        }
        for c in chambers {
            let names: Vec<String> = c.iter().map(usize::to_string).collect();
            b.chamber(None, &names)?;
        }
        b.build()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn num_chambers(&self) -> usize {
        self.chambers.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn is_labelled(&self) -> bool {
        self.vertex_types.is_some()
    }

    /// Labels in first-appearance order; bit `i` of a type mask is `labels()[i]`.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v as usize]
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn vertex_type(&self, v: VertexId) -> Option<usize> {
        self.vertex_types.as_ref().map(|t| t[v as usize] as usize)
    }

    pub fn chamber_name(&self, c: ChamberId) -> &str {
        &self.chamber_names[c]
    }

    pub fn chamber_names(&self) -> &[String] {
        &self.chamber_names
    }

    pub fn chamber_id(&self, name: &str) -> Option<ChamberId> {
        self.chamber_index.get(name).copied()
    }

    pub fn chamber(&self, c: ChamberId) -> &[VertexId] {
        &self.chambers[c]
    }

    pub fn chamber_face(&self, c: ChamberId) -> FaceId {
        self.chamber_faces[c][(1 << self.rank) - 1]
    }

    /// Faces of chamber `c` indexed by vertex subset mask.
    pub fn chamber_faces(&self, c: ChamberId) -> &[FaceId] {
        &self.chamber_faces[c]
    }

    pub fn face(&self, f: FaceId) -> &[VertexId] {
        &self.faces[f]
    }

    pub fn face_rank(&self, f: FaceId) -> usize {
        self.faces[f].len()
    }

    pub fn face_id(&self, vertices: &[VertexId]) -> Option<FaceId> {
        let mut v = vertices.to_vec();
        v.sort_unstable();
        v.dedup();
        self.face_index.get(&v).copied()
    }

    /// Face from a comma-separated vertex list, `-` for the empty face.
    pub fn parse_face(&self, text: &str) -> Result<FaceId> {
        if text == "-" {
            return Ok(EMPTY_FACE);
        }
        let mut ids = Vec::new();
        for name in text.split(',') {
            ids.push(
                self.vertex_id(name)
                    .ok_or_else(|| Error::UnknownName(name.to_string()))?,
            );
        }
        self.face_id(&ids)
            .ok_or_else(|| Error::NotAFace(text.to_string()))
    }

    pub fn face_name(&self, f: FaceId) -> String {
        if self.faces[f].is_empty() {
            return "-".into();
        }
        self.faces[f]
            .iter()
            .map(|&v| self.vertex_name(v))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Label bitmask of a face.
    pub fn face_type(&self, f: FaceId) -> Option<u32> {
        let types = self.vertex_types.as_ref()?;
        Some(
            self.faces[f]
                .iter()
                .fold(0u32, |m, &v| m | 1 << types[v as usize]),
        )
    }

    pub fn type_name(&self, mask: u32) -> String {
        let parts: Vec<&str> = (0..self.labels.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.labels[i].as_str())
            .collect();
        format!("{{{}}}", parts.join(","))
    }

    pub fn faces_of_rank(&self, r: usize) -> impl Iterator<Item = FaceId> + '_ {
        (0..self.faces.len()).filter(move |&f| self.faces[f].len() == r)
    }

    /// `g` is a face of `f`.
    pub fn face_le(&self, g: FaceId, f: FaceId) -> bool {
        is_subset(&self.faces[g], &self.faces[f])
    }

    pub fn is_face_of(&self, f: FaceId, c: ChamberId) -> bool {
        self.residues[f].binary_search(&c).is_ok()
    }

    /// Bitmask over the vertices of chamber `c` selecting those in face `f`.
    pub fn mask_in(&self, c: ChamberId, f: FaceId) -> Option<usize> {
        let ch = &self.chambers[c];
        let mut mask = 0;
        for v in &self.faces[f] {
            mask |= 1 << ch.binary_search(v).ok()?;
        }
        Some(mask)
    }

    /// Vertex intersection of two chambers as a face.
    pub fn meet(&self, c: ChamberId, d: ChamberId) -> FaceId {
        let (a, b) = (&self.chambers[c], &self.chambers[d]);
        let mask = a
            .iter()
            .enumerate()
            .filter(|(_, v)| b.binary_search(v).is_ok())
            .fold(0usize, |m, (i, _)| m | 1 << i);
        self.chamber_faces[c][mask]
    }

    /// Chambers containing `f`, in increasing order.
    pub fn residue(&self, f: FaceId) -> &[ChamberId] {
        &self.residues[f]
    }

    /// Codimension-one faces of a chamber, in vertex-removal order.
    pub fn facets_of(&self, c: ChamberId) -> Vec<FaceId> {
        let full = (1usize << self.rank) - 1;
        (0..self.rank)
            .map(|i| self.chamber_faces[c][full ^ (1 << i)])
            .collect()
    }

    pub fn adjacent(&self, c: ChamberId) -> &[ChamberId] {
        &self.adjacency[c]
    }

    fn distance_matrix(&self) -> &Vec<Vec<u32>> {
        self.distances
            .get_or_init(|| (0..self.num_chambers()).map(|c| self.bfs_from(c)).collect())
    }

    fn bfs_from(&self, c: ChamberId) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.num_chambers()];
        dist[c] = 0;
        let mut queue = VecDeque::from([c]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adjacency[x] {
                if dist[y] == UNREACHABLE {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.distance_matrix()[0].iter().all(|&d| d != UNREACHABLE)
    }

    /// Gallery distance, `None` across components.
    pub fn try_distance(&self, c: ChamberId, d: ChamberId) -> Option<usize> {
        let x = self.distance_matrix()[c][d];
        (x != UNREACHABLE).then_some(x as usize)
    }

    pub fn gallery_distance(&self, c: ChamberId, d: ChamberId) -> Result<usize> {
        self.try_distance(c, d).ok_or_else(|| {
            Error::Disconnected(self.chamber_names[c].clone(), self.chamber_names[d].clone())
        })
    }

    /// Shortest distance, panicking on disconnected pairs. For callers that
    /// checked connectivity.
    pub fn distance(&self, c: ChamberId, d: ChamberId) -> usize {
        self.try_distance(c, d).expect("connected complex")
    }

    /// A geodesic gallery from `c` to `d`, preferring smaller chamber ids.
    pub fn geodesic(&self, c: ChamberId, d: ChamberId) -> Result<Vec<ChamberId>> {
        let mut len = self.gallery_distance(c, d)?;
        let mut path = vec![c];
        let mut cur = c;
        while cur != d {
            len -= 1;
            cur = *self.adjacency[cur]
                .iter()
                .find(|&&x| self.distance(x, d) == len)
                .expect("bfs layers are consistent");
            path.push(cur);
        }
        Ok(path)
    }

    /// All geodesic galleries from `c` to `d`; errors when more than `cap`.
    pub fn geodesics(&self, c: ChamberId, d: ChamberId, cap: usize) -> Result<Vec<Vec<ChamberId>>> {
        let len = self.gallery_distance(c, d)?;
        let mut out = Vec::new();
        let mut path = vec![c];
        if !self.extend_geodesics(d, len, &mut path, &mut out, cap) {
            return Err(Error::CapExceeded {
                from: self.chamber_names[c].clone(),
                to: self.chamber_names[d].clone(),
                cap,
            });
        }
        Ok(out)
    }

    fn extend_geodesics(
        &self,
        d: ChamberId,
        remaining: usize,
        path: &mut Vec<ChamberId>,
        out: &mut Vec<Vec<ChamberId>>,
        cap: usize,
    ) -> bool {
        let cur = *path.last().expect("nonempty path");
        if remaining == 0 {
            if out.len() >= cap {
                return false;
            }
            out.push(path.clone());
            return true;
        }
        for &x in &self.adjacency[cur] {
            if self.distance(x, d) == remaining - 1 {
                path.push(x);
                let ok = self.extend_geodesics(d, remaining - 1, path, out, cap);
                path.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    /// Chambers lying on some geodesic from `c` to `d`.
    pub fn interval(&self, c: ChamberId, d: ChamberId) -> Vec<ChamberId> {
        let Some(total) = self.try_distance(c, d) else {
            return Vec::new();
        };
        (0..self.num_chambers())
            .filter(|&x| {
                matches!(
                    (self.try_distance(c, x), self.try_distance(x, d)),
                    (Some(a), Some(b)) if a + b == total
                )
            })
            .collect()
    }

    /// `None` when every facet lies in exactly two chambers, else the first
    /// offending facet.
    pub fn thinness_witness(&self) -> Option<FaceId> {
        self.faces_of_rank(self.rank - 1)
            .find(|&f| self.residues[f].len() != 2)
    }

    pub fn is_thin(&self) -> bool {
        self.thinness_witness().is_none()
    }

    /// Nearest-chamber gates for every (face, chamber) pair plus a check of
    /// uniqueness and distance additivity.
    pub fn check_gate_property(&self) -> GateReport {
        let mut check = Check::new("gate");
        let n = self.num_chambers();
        let mut gates = vec![vec![None; n]; self.num_faces()];
        for f in 0..self.num_faces() {
            let res = &self.residues[f];
            for c in 0..n {
                check.case();
                let dists: Vec<Option<usize>> =
                    res.iter().map(|&e| self.try_distance(c, e)).collect();
                let Some(best) = dists.iter().flatten().min().copied() else {
                    check.fail(vec![
                        format!("F={}", self.face_name(f)),
                        format!("C={}", self.chamber_name(c)),
                        "unreachable".into(),
                    ]);
                    continue;
                };
                let nearest: Vec<ChamberId> = res
                    .iter()
                    .zip(&dists)
                    .filter(|(_, d)| **d == Some(best))
                    .map(|(&e, _)| e)
                    .collect();
                if nearest.len() != 1 {
                    check.fail(vec![
                        format!("F={}", self.face_name(f)),
                        format!("C={}", self.chamber_name(c)),
                        format!(
                            "nearest={}",
                            nearest
                                .iter()
                                .map(|&e| self.chamber_name(e))
                                .collect::<Vec<_>>()
                                .join("|")
                        ),
                    ]);
                    continue;
                }
                let d = nearest[0];
                let bad = res.iter().zip(&dists).find(|(&e, de)| match de {
                    Some(de) => self.try_distance(d, e).map(|x| best + x) != Some(*de),
                    None => true,
                });
                match bad {
                    Some((&e, _)) => check.fail(vec![
                        format!("F={}", self.face_name(f)),
                        format!("C={}", self.chamber_name(c)),
                        format!("D={}", self.chamber_name(d)),
                        format!("E={}", self.chamber_name(e)),
                        "non-additive".into(),
                    ]),
                    None => gates[f][c] = Some(d),
                }
            }
        }
        GateReport { check, gates }
    }

    /// Every chamber on a geodesic between two chambers of a residue lies in
    /// that residue.
    pub fn check_residue_convexity(&self) -> Check {
        let mut check = Check::new("convexity");
        for f in 0..self.num_faces() {
            let res = &self.residues[f];
            for &d in res {
                for &e in res {
                    if d >= e {
                        continue;
                    }
                    let escaped = self
                        .interval(d, e)
                        .into_iter()
                        .find(|x| res.binary_search(x).is_err());
                    check.expect(escaped.is_none(), || {
                        vec![
                            format!("F={}", self.face_name(f)),
                            format!("D={}", self.chamber_name(d)),
                            format!("E={}", self.chamber_name(e)),
                            format!("via={}", self.chamber_name(escaped.unwrap_or(d))),
                        ]
                    });
                }
            }
        }
        check
    }

    /// Subcomplex generated by the given chambers, keeping names and types.
    pub fn subcomplex(&self, chambers: &[ChamberId]) -> Result<Complex> {
        let mut b = ComplexBuilder::new();
        let mut used: Vec<VertexId> = chambers
            .iter()
            .flat_map(|&c| self.chambers[c].iter().copied())
            .collect();
        used.sort_unstable();
        used.dedup();
        for v in used {
            let ty = self.vertex_type(v).map(|t| self.labels[t].as_str());
            b.vertex(self.vertex_name(v), ty)?;
        }
        for &c in chambers {
            let names: Vec<&str> = self.chambers[c]
                .iter()
                .map(|&v| self.vertex_name(v))
                .collect();
            b.chamber(Some(self.chamber_name(c)), &names)?;
        }
        b.build()
    }

    /// Link of a non-maximal face. Chambers keep the names of the chambers
    /// they come from.
    pub fn link(&self, f: FaceId) -> Result<Complex> {
        if self.face_rank(f) >= self.rank {
            return Err(Error::BadParameter(format!(
                "link of the chamber {} is empty",
                self.face_name(f)
            )));
        }
        let face = &self.faces[f];
        let mut b = ComplexBuilder::new();
        for v in 0..self.num_vertices() as VertexId {
            if face.contains(&v) {
                continue;
            }
            if self.residues[f]
                .iter()
                .any(|&c| self.chambers[c].contains(&v))
            {
                let ty = self.vertex_type(v).map(|t| self.labels[t].as_str());
                b.vertex(self.vertex_name(v), ty)?;
            }
        }
        for &c in &self.residues[f] {
            let names: Vec<&str> = self.chambers[c]
                .iter()
                .filter(|v| !face.contains(v))
                .map(|&v| self.vertex_name(v))
                .collect();
            b.chamber(Some(self.chamber_name(c)), &names)?;
        }
        b.build()
    }

    /// Number of faces of each rank `0..=rank`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut out = vec![0; self.rank + 1];
        for f in &self.faces {
            out[f.len()] += 1;
        }
        out
    }

    /// Reduced Euler characteristic of the faces of rank at most `k`, with
    /// the empty face contributing `-1`.
    pub fn reduced_euler(&self, k: usize) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .take(k + 1)
            .map(|(r, &n)| if r % 2 == 1 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Parse the text format:
    ///
    /// ```text
    /// # comment
    /// vertex a s
    /// vertex b t
    /// chamber ab: a b
    /// ```
    pub fn parse(text: &str) -> Result<Complex> {
        let mut b = ComplexBuilder::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: &str| Error::Parse {
                line: i + 1,
                message: message.to_string(),
            };
            let mut toks = line.split_whitespace();
            match toks.next() {
                Some("vertex") => {
                    let name = toks.next().ok_or_else(|| err("vertex needs a name"))?;
                    let ty = toks.next();
                    if toks.next().is_some() {
                        return Err(err("trailing tokens after vertex type"));
                    }
                    b.vertex(name, ty)?;
                }
                Some("chamber") => {
                    let rest: Vec<&str> = toks.collect();
                    let (name, verts) = match rest.first() {
                        Some(t) if t.ends_with(':') => (Some(&t[..t.len() - 1]), &rest[1..]),
                        _ => (None, &rest[..]),
                    };
                    if verts.is_empty() {
                        return Err(err("chamber needs vertices"));
                    }
                    let mut sorted = verts.to_vec();
                    sorted.sort_unstable();
                    if sorted.windows(2).any(|w| w[0] == w[1]) {
                        return Err(err("chamber repeats a vertex"));
                    }
                    b.chamber(name, verts)?;
                }
                Some(other) => return Err(err(&format!("unknown declaration `{other}`"))),
                None => {}
            }
        }
        b.build()
    }

    /// Canonical text form; `parse(to_text())` rebuilds the same complex.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in 0..self.num_vertices() as VertexId {
            match self.vertex_type(v) {
                Some(t) => writeln!(out, "vertex {} {}", self.vertex_name(v), self.labels[t]),
                None => writeln!(out, "vertex {}", self.vertex_name(v)),
            }
            .expect("write to string");
        }
        for c in 0..self.num_chambers() {
            let verts: Vec<&str> = self.chambers[c]
                .iter()
                .map(|&v| self.vertex_name(v))
                .collect();
            writeln!(out, "chamber {}: {}", self.chamber_name(c), verts.join(" "))
                .expect("write to string");
        }
        out
    }
}

/// Gates found by [`Complex::check_gate_property`], indexed `[face][chamber]`.
#[derive(Debug, Clone)]
pub struct GateReport {
    pub check: Check,
    pub gates: Vec<Vec<Option<ChamberId>>>,
}

impl GateReport {
    pub fn passed(&self) -> bool {
        self.check.passed()
    }
}

fn subset(c: &[VertexId], mask: usize) -> Vec<VertexId> {
    c.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &v)| v)
        .collect()
}

fn is_subset(a: &[VertexId], b: &[VertexId]) -> bool {
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Complex {
        let ch: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        Complex::from_chambers(&ch).unwrap()
    }

    /// Faces by brute-force subset closure.
    fn closure_count(chambers: &[Vec<usize>]) -> usize {
        let mut all = BTreeSet::new();
        for c in chambers {
            for m in 0..1usize << c.len() {
                let mut f: Vec<usize> = (0..c.len())
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| c[i])
                    .collect();
                f.sort_unstable();
                all.insert(f);
            }
        }
        all.len()
    }

    #[test]
    fn triangle_boundary() {
        let t = cycle(3);
        assert_eq!((t.rank(), t.num_chambers(), t.num_faces()), (2, 3, 7));
        assert!(t.is_thin());
    }

    #[test]
    fn impure_rejected() {
        let err = Complex::from_chambers(&[vec![0, 1], vec![1, 2], vec![0, 2, 3]]).unwrap_err();
        assert!(matches!(
            err,
            Error::NotPure {
                found: 3,
                expected: 2,
                ..
            }
        ));
    }

    #[test]
    fn hexagon_faces_and_distances() {
        let ch: Vec<Vec<usize>> = (0..6).map(|i| vec![i, (i + 1) % 6]).collect();
        let h = Complex::from_chambers(&ch).unwrap();
        assert_eq!(h.num_faces(), closure_count(&ch));
        assert_eq!(h.num_faces(), 13);
        for c in 0..6 {
            assert_eq!(h.distance(c, c), 0);
            // on a 6-cycle of edges the distance is the cyclic index gap
            for d in 0..6 {
                let gap = (c + 6 - d) % 6;
                assert_eq!(h.distance(c, d), gap.min(6 - gap));
            }
        }
        assert_eq!(h.distance(0, 3), 3);
        assert_eq!(h.geodesics(0, 3, 10).unwrap().len(), 2);
        assert!(matches!(
            h.geodesics(0, 3, 1),
            Err(Error::CapExceeded { .. })
        ));
        let v = h.face_id(&[1]).unwrap();
        assert_eq!(h.residue(v), &[0, 1]);
        assert_eq!(h.residue(EMPTY_FACE).len(), 6);
        let gate = h.check_gate_property();
        assert!(gate.passed());
        assert_eq!(gate.check.cases, 13 * 6);
        assert!(h.check_residue_convexity().passed());
    }

    #[test]
    fn cube_antipodes() {
        // octants of R^3 as triangles on the rays ±e_i
        let mut ch = Vec::new();
        for s in 0..8usize {
            ch.push((0..3).map(|i| 2 * i + (s >> i & 1)).collect::<Vec<_>>());
        }
        let b = Complex::from_chambers(&ch).unwrap();
        for a in 0..8 {
            for c in 0..8 {
                let hamming = (0..3).filter(|i| (a >> i & 1) != (c >> i & 1)).count();
                let ca = b
                    .chamber_id(
                        &ch[a]
                            .iter()
                            .map(usize::to_string)
                            .collect::<Vec<_>>()
                            .join("_"),
                    )
                    .unwrap();
                let cc = b
                    .chamber_id(
                        &ch[c]
                            .iter()
                            .map(usize::to_string)
                            .collect::<Vec<_>>()
                            .join("_"),
                    )
                    .unwrap();
                assert_eq!(b.distance(ca, cc), hamming);
            }
        }
        assert!(b.is_thin());
        assert!(b.check_gate_property().passed());
    }

    #[test]
    fn single_chamber() {
        let s = Complex::from_chambers(&[vec![0, 1, 2]]).unwrap();
        assert!(!s.is_thin());
        assert!(s.check_gate_property().passed());
        assert_eq!(s.reduced_euler(3), 0);
    }

    #[test]
    fn labelling_validated() {
        let bad = Complex::parse("vertex a s\nvertex b s\nchamber a b\n").unwrap_err();
        assert!(matches!(bad, Error::BadLabelling(_)));
        let mixed = Complex::parse("vertex a s\nvertex b\nchamber a b\n").unwrap_err();
        assert!(matches!(mixed, Error::BadLabelling(_)));
        let dup = Complex::parse("vertex a\nvertex a\n").unwrap_err();
        assert!(matches!(dup, Error::Duplicate(_)));
        assert!(matches!(
            Complex::parse("# nothing\n"),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn text_round_trip() {
        let src = "vertex a s\nvertex b t\nvertex c s\nchamber x: a b\nchamber b c\n";
        let c = Complex::parse(src).unwrap();
        assert_eq!(c.chamber_name(1), "b_c");
        let again = Complex::parse(&c.to_text()).unwrap();
        assert_eq!(again.to_text(), c.to_text());
        assert_eq!(
            c.type_name(c.face_type(c.chamber_face(0)).unwrap()),
            "{s,t}"
        );
    }

    #[test]
    fn link_of_vertex() {
        let h = cycle(6);
        let l = h.link(h.face_id(&[0]).unwrap()).unwrap();
        assert_eq!((l.rank(), l.num_chambers()), (1, 2));
        assert_eq!(h.reduced_euler(2), -1);
    }
}
