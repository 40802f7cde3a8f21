//! Projection tables, restriction families and order families: their axiom
//! checkers, the conversions between them, and the opposite axioms.

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{ChamberId, Complex, FaceId, EMPTY_FACE};
use crate::error::{Error, Result};
use crate::order::{reachability, PartialOrder};
use crate::report::{Check, Report};
use crate::shelling::verify_shelling;

/// Down-sets visited by the uniform extension sampler before it falls back
/// to random topological sorts.
pub const SAMPLER_STATES: usize = 200_000;

/// A poset of faces with a distinguished set of maximal elements, enough
/// structure to state the projection axioms.
pub trait FaceSystem {
    fn num_faces(&self) -> usize;
    fn num_chambers(&self) -> usize;
    fn empty_face(&self) -> FaceId;
    fn chamber_face(&self, c: ChamberId) -> FaceId;
    /// `f <= g` in the face order.
    fn le(&self, f: FaceId, g: FaceId) -> bool;
    /// Every face below chamber `c`, including `c` itself.
    fn faces_below(&self, c: ChamberId) -> Vec<FaceId>;
    /// Faces covered by chamber `c`.
    fn facets(&self, c: ChamberId) -> Vec<FaceId>;
    /// Chambers above face `f`.
    fn chambers_above(&self, f: FaceId) -> Vec<ChamberId>;
    fn face_label(&self, f: FaceId) -> String;
    fn chamber_label(&self, c: ChamberId) -> String;
}

impl FaceSystem for Complex {
    fn num_faces(&self) -> usize {
        Complex::num_faces(self)
    }
    fn num_chambers(&self) -> usize {
        Complex::num_chambers(self)
    }
    fn empty_face(&self) -> FaceId {
        EMPTY_FACE
    }
    fn chamber_face(&self, c: ChamberId) -> FaceId {
        Complex::chamber_face(self, c)
    }
    fn le(&self, f: FaceId, g: FaceId) -> bool {
        self.face_le(f, g)
    }
    fn faces_below(&self, c: ChamberId) -> Vec<FaceId> {
        self.chamber_faces(c).to_vec()
    }
    fn facets(&self, c: ChamberId) -> Vec<FaceId> {
        self.facets_of(c)
    }
    fn chambers_above(&self, f: FaceId) -> Vec<ChamberId> {
        self.residue(f).to_vec()
    }
    fn face_label(&self, f: FaceId) -> String {
        self.face_name(f)
    }
    fn chamber_label(&self, c: ChamberId) -> String {
        self.chamber_name(c).to_string()
    }
}

/// `table[f][c]` is the chamber `FC`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionTable {
    pub table: Vec<Vec<ChamberId>>,
}

impl ProjectionTable {
    pub fn get(&self, f: FaceId, c: ChamberId) -> ChamberId {
        self.table[f][c]
    }
}

/// `r[c][d]` is the face `R_C(D)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictionFamily {
    pub r: Vec<Vec<FaceId>>,
}

impl RestrictionFamily {
    pub fn get(&self, c: ChamberId, d: ChamberId) -> FaceId {
        self.r[c][d]
    }
}

/// `orders[c]` is the partial order `<=_C` on chambers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderFamily {
    pub orders: Vec<PartialOrder>,
}

impl OrderFamily {
    pub fn same_orders(&self, other: &OrderFamily) -> bool {
        self.orders.len() == other.orders.len()
            && self
                .orders
                .iter()
                .zip(&other.orders)
                .all(|(a, b)| a.same_order(b))
    }
}

/// `map[c]` is the chamber opposite `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OppositionMap {
    pub map: Vec<ChamberId>,
}

fn cycle_error(c: &Complex, cycle: Vec<usize>) -> Error {
    Error::NotAPartialOrder {
        cycle: cycle
            .into_iter()
            .map(|x| c.chamber_name(x).to_string())
            .collect(),
    }
}

fn tok(key: &str, value: impl AsRef<str>) -> String {
    format!("{key}={}", value.as_ref())
}

/// Projection axioms P1 (three parts), P2 and P3.
pub fn check_p<S: FaceSystem>(s: &S, p: &ProjectionTable) -> Report {
    let n = s.num_chambers();
    let nf = s.num_faces();
    let mut p1i = Check::new("P1(i)");
    let mut p1ii = Check::new("P1(ii)");
    let mut p1iii = Check::new("P1(iii)");
    let mut p2 = Check::new("P2");
    let mut p3 = Check::new("P3");
    let below: Vec<Vec<FaceId>> = (0..n).map(|c| s.faces_below(c)).collect();
    let facets: Vec<Vec<FaceId>> = (0..n).map(|c| s.facets(c)).collect();
    let above: Vec<Vec<ChamberId>> = (0..nf).map(|f| s.chambers_above(f)).collect();

    for f in 0..nf {
        for c in 0..n {
            let d = p.get(f, c);
            p1i.expect(s.le(f, s.chamber_face(d)), || {
                vec![
                    tok("F", s.face_label(f)),
                    tok("C", s.chamber_label(c)),
                    tok("FC", s.chamber_label(d)),
                ]
            });
        }
    }
    for c in 0..n {
        for &f in &below[c] {
            let got = p.get(f, c);
            p1ii.expect(got == c, || {
                vec![
                    tok("F", s.face_label(f)),
                    tok("C", s.chamber_label(c)),
                    tok("FC", s.chamber_label(got)),
                ]
            });
        }
    }
    for c in 0..n {
        for f in 0..nf {
            let d = p.get(f, c);
            if !s.le(f, s.chamber_face(d)) {
                continue;
            }
            for &g in &below[d] {
                if g != f && s.le(f, g) {
                    let got = p.get(g, c);
                    p1iii.expect(got == d, || {
                        vec![
                            tok("F", s.face_label(f)),
                            tok("G", s.face_label(g)),
                            tok("C", s.chamber_label(c)),
                            tok("D", s.chamber_label(d)),
                            tok("GC", s.chamber_label(got)),
                        ]
                    });
                }
            }
        }
    }
    for c in 0..n {
        for d in 0..n {
            for &f in &below[d] {
                let premise = facets[d]
                    .iter()
                    .filter(|&&g| s.le(f, g))
                    .all(|&g| p.get(g, c) == d);
                if premise {
                    let got = p.get(f, c);
                    p2.expect(got == d, || {
                        vec![
                            tok("F", s.face_label(f)),
                            tok("C", s.chamber_label(c)),
                            tok("D", s.chamber_label(d)),
                            tok("FC", s.chamber_label(got)),
                        ]
                    });
                }
            }
        }
    }
    for c in 0..n {
        let mut succ = vec![Vec::new(); n];
        let mut by_target = vec![Vec::new(); n];
        for f in 0..nf {
            let d = p.get(f, c);
            by_target[d].push(f);
            if s.le(f, s.chamber_face(d)) {
                succ[d].extend(above[f].iter().copied());
            }
        }
        for row in &mut succ {
            row.sort_unstable();
            row.dedup();
        }
        let reach = reachability(&succ);
        for c1 in 0..n {
            for d in reach[c1].ones() {
                for &f in &by_target[d] {
                    let got = p.get(f, c1);
                    p3.expect(got == d, || {
                        vec![
                            tok("F", s.face_label(f)),
                            tok("C", s.chamber_label(c)),
                            tok("C1", s.chamber_label(c1)),
                            tok("D", s.chamber_label(d)),
                            tok("FC1", s.chamber_label(got)),
                        ]
                    });
                }
            }
        }
    }
    let mut report = Report::new();
    for check in [p1i, p1ii, p1iii, p2, p3] {
        report.push(check);
    }
    report
}

/// Chambers reachable from each chamber through `R_C(E) <= X` steps.
fn restriction_reach(c: &Complex, r: &RestrictionFamily, base: ChamberId) -> Vec<FixedBitSet> {
    let succ: Vec<Vec<usize>> = (0..c.num_chambers())
        .map(|e| c.residue(r.get(base, e)).to_vec())
        .collect();
    reachability(&succ)
}

/// Restriction axioms R1, R2 and R3.
pub fn check_r(c: &Complex, r: &RestrictionFamily) -> Report {
    let n = c.num_chambers();
    let mut r1 = Check::new("R1");
    let mut r2 = Check::new("R2");
    let mut r3 = Check::new("R3");
    for base in 0..n {
        r1.expect(r.get(base, base) == EMPTY_FACE, || {
            vec![
                tok("C", c.chamber_name(base)),
                tok("R", c.face_name(r.get(base, base))),
            ]
        });
        for d in 0..n {
            r1.expect(c.is_face_of(r.get(base, d), d), || {
                vec![
                    tok("C", c.chamber_name(base)),
                    tok("D", c.chamber_name(d)),
                    tok("R", c.face_name(r.get(base, d))),
                ]
            });
        }
    }
    for base in 0..n {
        let mut owners = vec![Vec::new(); c.num_faces()];
        for d in 0..n {
            let rd = r.get(base, d);
            for &f in c.chamber_faces(d) {
                if c.face_le(rd, f) {
                    owners[f].push(d);
                }
            }
        }
        for (f, own) in owners.iter().enumerate() {
            r2.expect(own.len() == 1, || {
                let list: Vec<&str> = own.iter().map(|&d| c.chamber_name(d)).collect();
                vec![
                    tok("C", c.chamber_name(base)),
                    tok("F", c.face_name(f)),
                    tok(
                        "owners",
                        if list.is_empty() {
                            "none".into()
                        } else {
                            list.join("|")
                        },
                    ),
                ]
            });
        }
    }
    for base in 0..n {
        let reach = restriction_reach(c, r, base);
        for c1 in 0..n {
            for d in reach[c1].ones() {
                let ok = c.face_le(r.get(c1, d), r.get(base, d));
                r3.expect(ok, || {
                    vec![
                        tok("C", c.chamber_name(base)),
                        tok("C1", c.chamber_name(c1)),
                        tok("D", c.chamber_name(d)),
                    ]
                });
            }
        }
    }
    let mut report = Report::new();
    for check in [r1, r2, r3] {
        report.push(check);
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum S2Mode {
    #[default]
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SOptions {
    pub mode: S2Mode,
    pub cap: usize,
    pub seed: u64,
}

impl Default for SOptions {
    fn default() -> Self {
        SOptions {
            mode: S2Mode::Exhaustive,
            cap: 10_000,
            seed: 0,
        }
    }
}

/// Shelling axioms S1, S2 and S3.
pub fn check_s(c: &Complex, s: &OrderFamily, opts: SOptions) -> Report {
    let n = c.num_chambers();
    let mut s1 = Check::new("S1");
    let mut s2 = Check::new("S2");
    let mut s3 = Check::new("S3");
    for base in 0..n {
        let ord = &s.orders[base];
        for f in 0..c.num_faces() {
            let mins = ord.minimal_in(c.residue(f));
            let ok = mins.len() == 1 && (f != EMPTY_FACE || mins[0] == base);
            s1.expect(ok, || {
                let list: Vec<&str> = mins.iter().map(|&d| c.chamber_name(d)).collect();
                vec![
                    tok("C", c.chamber_name(base)),
                    tok("F", c.face_name(f)),
                    tok("minimal", list.join("|")),
                ]
            });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (mut exhaustive, mut uniform, mut fallback) = (0, 0, 0);
    for base in 0..n {
        let ord = &s.orders[base];
        let verify = |seq: &[usize], check: &mut Check| {
            check.case();
            if let Err(e) = verify_shelling(c, seq) {
                let names: Vec<&str> = seq.iter().map(|&d| c.chamber_name(d)).collect();
                check.fail(vec![
                    tok("C", c.chamber_name(base)),
                    tok("order", names.join(",")),
                    e.to_string().replace(' ', "_"),
                ]);
            }
        };
        let all = match opts.mode {
            S2Mode::Exhaustive => ord.linear_extensions(opts.cap),
            S2Mode::Sampled => None,
        };
        match all {
            Some(all) => {
                exhaustive += 1;
                for seq in &all {
                    verify(seq, &mut s2);
                }
            }
            None => {
                verify(&ord.first_extension(), &mut s2);
                match ord.extension_counter(SAMPLER_STATES) {
                    Some(counter) => {
                        uniform += 1;
                        for _ in 0..opts.cap {
                            verify(&counter.sample(&mut rng), &mut s2);
                        }
                    }
                    None => {
                        fallback += 1;
                        for _ in 0..opts.cap {
                            verify(&ord.random_topological_sort(&mut rng), &mut s2);
                        }
                    }
                }
            }
        }
    }
    let mut note = format!("exhaustive for {exhaustive} of {n} base chambers");
    if uniform + fallback > 0 {
        let _ = write!(
            note,
            "; sampled {} extensions for {uniform} (uniform) and {fallback} (topological) base chambers",
            opts.cap
        );
    }
    s2.note = Some(note);

    for base in 0..n {
        let ord = &s.orders[base];
        for d in 0..n {
            for d1 in ord.up(d).ones() {
                let mut missing = ord.up(d1).clone();
                missing.difference_with(s.orders[d].up(d1));
                let bad = missing.ones().next();
                s3.expect(bad.is_none(), || {
                    vec![
                        tok("C", c.chamber_name(base)),
                        tok("D", c.chamber_name(d)),
                        tok("D1", c.chamber_name(d1)),
                        tok("D2", c.chamber_name(bad.unwrap_or(d1))),
                    ]
                });
            }
        }
    }
    let mut report = Report::new();
    for check in [s1, s2, s3] {
        report.push(check);
    }
    report
}

/// `R_C(D)` spanned by the vertices `v` of `D` with `(D \ v)C != D`.
pub fn p_to_r(c: &Complex, p: &ProjectionTable) -> RestrictionFamily {
    let n = c.num_chambers();
    let full = (1usize << c.rank()) - 1;
    let r = (0..n)
        .map(|base| {
            (0..n)
                .map(|d| {
                    let faces = c.chamber_faces(d);
                    let mask = (0..c.rank())
                        .filter(|i| p.get(faces[full ^ (1 << i)], base) != d)
                        .fold(0usize, |m, i| m | 1 << i);
                    faces[mask]
                })
                .collect()
        })
        .collect();
    RestrictionFamily { r }
}

/// `<=_C` generated by `E <= D` whenever `R_C(E) <= D`.
pub fn r_to_s(c: &Complex, r: &RestrictionFamily) -> Result<OrderFamily> {
    let n = c.num_chambers();
    let orders = (0..n)
        .map(|base| {
            let pairs = (0..n).flat_map(|e| c.residue(r.get(base, e)).iter().map(move |&d| (e, d)));
            PartialOrder::from_pairs(n, pairs).map_err(|cyc| cycle_error(c, cyc))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OrderFamily { orders })
}

/// `FC` is the `<=_C`-minimum of the chambers containing `F`.
pub fn s_to_p(c: &Complex, s: &OrderFamily) -> Result<ProjectionTable> {
    let n = c.num_chambers();
    let mut table = vec![vec![0; n]; c.num_faces()];
    for (f, row) in table.iter_mut().enumerate() {
        for (base, slot) in row.iter_mut().enumerate() {
            let mins = s.orders[base].minimal_in(c.residue(f));
            match mins.as_slice() {
                [m] => *slot = *m,
                _ => {
                    return Err(Error::NoUniqueMinimum {
                        face: c.face_name(f),
                        chamber: c.chamber_name(base).to_string(),
                    })
                }
            }
        }
    }
    Ok(ProjectionTable { table })
}

/// `Des(C, D)`: vertices `v` of `D` such that a geodesic from `C` can enter
/// `D` through the facet opposite `v`.
pub fn descent_face(c: &Complex, base: ChamberId, d: ChamberId) -> FaceId {
    let full = (1usize << c.rank()) - 1;
    let faces = c.chamber_faces(d);
    let dist = c.distance(base, d);
    let mask = (0..c.rank())
        .filter(|i| {
            let facet = faces[full ^ (1 << i)];
            c.residue(facet)
                .iter()
                .any(|&e| e != d && c.distance(base, e) + 1 == dist)
        })
        .fold(0usize, |m, i| m | 1 << i);
    faces[mask]
}

/// `D <=_C E` iff some geodesic from `C` to `E` passes through `D`.
pub fn geodesic_order(c: &Complex, base: ChamberId) -> PartialOrder {
    let n = c.num_chambers();
    let mut pairs = Vec::new();
    for d in 0..n {
        for &e in c.adjacent(d) {
            if c.distance(base, e) == c.distance(base, d) + 1 {
                pairs.push((d, e));
            }
        }
    }
    PartialOrder::from_pairs(n, pairs).expect("distance strictly increases")
}

#[derive(Debug, Clone)]
pub struct MetricStructure {
    pub projections: ProjectionTable,
    pub restrictions: RestrictionFamily,
    pub orders: OrderFamily,
}

/// Gates, descent faces and geodesic orders of a complex with the gate
/// property.
pub fn metric_structure(c: &Complex) -> Result<MetricStructure> {
    let gate = c.check_gate_property();
    if let Some(w) = gate.check.witnesses.first() {
        let strip = |k: &str| {
            w.iter()
                .find_map(|t| t.strip_prefix(k).map(str::to_string))
                .unwrap_or_default()
        };
        return Err(Error::GatePropertyFails {
            face: strip("F="),
            chamber: strip("C="),
            reason: w[2..].join(" "),
        });
    }
    let n = c.num_chambers();
    let table = gate
        .gates
        .into_iter()
        .map(|row| row.into_iter().map(|g| g.expect("gate exists")).collect())
        .collect();
    let r = (0..n)
        .map(|base| (0..n).map(|d| descent_face(c, base, d)).collect())
        .collect();
    let orders = (0..n).map(|base| geodesic_order(c, base)).collect();
    Ok(MetricStructure {
        projections: ProjectionTable { table },
        restrictions: RestrictionFamily { r },
        orders: OrderFamily { orders },
    })
}

/// Each conversion applied to one structure reproduces the next one.
pub fn check_consistency(
    c: &Complex,
    p: &ProjectionTable,
    r: &RestrictionFamily,
    s: &OrderFamily,
) -> Report {
    let mut report = Report::new();
    let mut pr = Check::new("p_to_r");
    let got = p_to_r(c, p);
    for base in 0..c.num_chambers() {
        for d in 0..c.num_chambers() {
            pr.expect(got.get(base, d) == r.get(base, d), || {
                vec![tok("C", c.chamber_name(base)), tok("D", c.chamber_name(d))]
            });
        }
    }
    report.push(pr);
    let mut rs = Check::new("r_to_s");
    match r_to_s(c, r) {
        Ok(got) => {
            for base in 0..c.num_chambers() {
                rs.expect(got.orders[base].same_order(&s.orders[base]), || {
                    vec![tok("C", c.chamber_name(base))]
                });
            }
        }
        Err(e) => {
            rs.case();
            rs.fail(vec![e.to_string()]);
        }
    }
    report.push(rs);
    let mut sp = Check::new("s_to_p");
    match s_to_p(c, s) {
        Ok(got) => {
            for f in 0..c.num_faces() {
                for base in 0..c.num_chambers() {
                    sp.expect(got.get(f, base) == p.get(f, base), || {
                        vec![tok("F", c.face_name(f)), tok("C", c.chamber_name(base))]
                    });
                }
            }
        }
        Err(e) => {
            sp.case();
            sp.fail(vec![e.to_string()]);
        }
    }
    report.push(sp);
    report
}

/// For each `C` the unique `D` with `R_C(D) = D`.
pub fn find_opposition(c: &Complex, r: &RestrictionFamily) -> Result<OppositionMap> {
    let n = c.num_chambers();
    let mut map = Vec::with_capacity(n);
    for base in 0..n {
        let cands: Vec<ChamberId> = (0..n)
            .filter(|&d| r.get(base, d) == c.chamber_face(d))
            .collect();
        match cands.as_slice() {
            [d] => map.push(*d),
            [] => return Err(Error::NoOpposite(c.chamber_name(base).to_string())),
            _ => {
                return Err(Error::MultipleOpposites {
                    chamber: c.chamber_name(base).to_string(),
                    candidates: cands
                        .iter()
                        .map(|&d| c.chamber_name(d).to_string())
                        .collect(),
                })
            }
        }
    }
    Ok(OppositionMap { map })
}

/// Opposite axioms P4, R4 and S4, plus the involution property.
pub fn check_opposite(
    c: &Complex,
    p: &ProjectionTable,
    r: &RestrictionFamily,
    s: &OrderFamily,
    opp: &OppositionMap,
) -> Report {
    let n = c.num_chambers();
    let mut inv = Check::new("involution");
    let mut p4 = Check::new("P4");
    let mut r4 = Check::new("R4");
    let mut s4 = Check::new("S4");
    for base in 0..n {
        let o = opp.map[base];
        inv.expect(opp.map[o] == base, || {
            vec![
                tok("C", c.chamber_name(base)),
                tok("opp", c.chamber_name(o)),
                tok("opp2", c.chamber_name(opp.map[o])),
            ]
        });
        for g in c.faces_of_rank(c.rank() - 1) {
            p4.expect(p.get(g, base) != p.get(g, o), || {
                vec![tok("G", c.face_name(g)), tok("C", c.chamber_name(base))]
            });
        }
        for d in 0..n {
            let (a, b) = (r.get(base, d), r.get(o, d));
            let ok = match (c.face_type(a), c.face_type(b)) {
                (Some(ta), Some(tb)) => {
                    let all = (1u32 << c.labels().len()) - 1;
                    ta & tb == 0 && ta | tb == all
                }
                _ => {
                    let ma = c.mask_in(d, a).unwrap_or(usize::MAX);
                    let mb = c.mask_in(d, b).unwrap_or(usize::MAX);
                    ma & mb == 0 && ma | mb == (1 << c.rank()) - 1
                }
            };
            r4.expect(ok, || {
                vec![
                    tok("C", c.chamber_name(base)),
                    tok("D", c.chamber_name(d)),
                    tok("R", c.face_name(a)),
                    tok("Ropp", c.face_name(b)),
                ]
            });
        }
        s4.expect(s.orders[base].is_dual_of(&s.orders[o]), || {
            vec![
                tok("C", c.chamber_name(base)),
                tok("opp", c.chamber_name(o)),
            ]
        });
    }
    let mut report = Report::new();
    let verdict = |ch: &Check| if ch.passed() { "PASS" } else { "FAIL" };
    report.info(format!(
        "opposite pattern P4={} R4={} S4={} thin={}",
        verdict(&p4),
        verdict(&r4),
        verdict(&s4),
        c.is_thin()
    ));
    for check in [inv, p4, r4, s4] {
        report.push(check);
    }
    report
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Contents of a structure file. Each present table is total.
#[derive(Debug, Clone, Default)]
pub struct StructureFile {
    pub projections: Option<ProjectionTable>,
    pub restrictions: Option<RestrictionFamily>,
    pub orders: Option<OrderFamily>,
}

/// Parse `proj`, `restr` and `order` lines against a complex.
pub fn parse_structure(c: &Complex, text: &str) -> Result<StructureFile> {
    let n = c.num_chambers();
    let chamber = |line: usize, name: &str| {
        c.chamber_id(name)
            .ok_or_else(|| parse_err(line, format!("unknown chamber {name}")))
    };
    let mut proj: Vec<Vec<Option<ChamberId>>> = Vec::new();
    let mut restr: Vec<Vec<Option<FaceId>>> = Vec::new();
    let mut pairs: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut seen_order = vec![false; n];
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "proj" => {
                let [_, f, cc, "->", d] = toks[..] else {
                    return Err(parse_err(
                        ln,
                        "expected `proj <face> <chamber> -> <chamber>`",
                    ));
                };
                if proj.is_empty() {
                    proj = vec![vec![None; n]; c.num_faces()];
                }
                let f = c.parse_face(f).map_err(|e| parse_err(ln, e.to_string()))?;
                let slot = &mut proj[f][chamber(ln, cc)?];
                if slot.is_some() {
                    return Err(parse_err(ln, "duplicate proj entry"));
                }
                *slot = Some(chamber(ln, d)?);
            }
            "restr" => {
                let [_, cc, d, "->", f] = toks[..] else {
                    return Err(parse_err(ln, "expected `restr <C> <D> -> <face>`"));
                };
                if restr.is_empty() {
                    restr = vec![vec![None; n]; n];
                }
                let f = c.parse_face(f).map_err(|e| parse_err(ln, e.to_string()))?;
                let slot = &mut restr[chamber(ln, cc)?][chamber(ln, d)?];
                if slot.is_some() {
                    return Err(parse_err(ln, "duplicate restr entry"));
                }
                *slot = Some(f);
            }
            "order" => {
                let (head, rest) = match toks.get(1) {
                    Some(t) if t.ends_with(':') => (&t[..t.len() - 1], &toks[2..]),
                    _ => return Err(parse_err(ln, "expected `order <C>: <E> < <D>`")),
                };
                if pairs.is_empty() {
                    pairs = vec![Vec::new(); n];
                }
                let base = chamber(ln, head)?;
                seen_order[base] = true;
                match rest {
                    [] => {}
                    [e, "<", d] => pairs[base].push((chamber(ln, e)?, chamber(ln, d)?)),
                    _ => return Err(parse_err(ln, "expected `order <C>: <E> < <D>`")),
                }
            }
            other => return Err(parse_err(ln, format!("unknown declaration `{other}`"))),
        }
    }
    let mut out = StructureFile::default();
    if !proj.is_empty() {
        let mut table = vec![vec![0; n]; c.num_faces()];
        for f in 0..c.num_faces() {
            for x in 0..n {
                table[f][x] = proj[f][x].ok_or_else(|| {
                    parse_err(
                        0,
                        format!("missing proj {} {}", c.face_name(f), c.chamber_name(x)),
                    )
                })?;
            }
        }
        out.projections = Some(ProjectionTable { table });
    }
    if !restr.is_empty() {
        let mut r = vec![vec![EMPTY_FACE; n]; n];
        for x in 0..n {
            for d in 0..n {
                r[x][d] = restr[x][d].ok_or_else(|| {
                    parse_err(
                        0,
                        format!("missing restr {} {}", c.chamber_name(x), c.chamber_name(d)),
                    )
                })?;
            }
        }
        out.restrictions = Some(RestrictionFamily { r });
    }
    if !pairs.is_empty() {
        if let Some(x) = seen_order.iter().position(|s| !s) {
            return Err(parse_err(
                0,
                format!("missing order for {}", c.chamber_name(x)),
            ));
        }
        let orders = pairs
            .into_iter()
            .map(|ps| PartialOrder::from_pairs(n, ps).map_err(|cyc| cycle_error(c, cyc)))
            .collect::<Result<Vec<_>>>()?;
        out.orders = Some(OrderFamily { orders });
    }
    Ok(out)
}

/// Text form of whichever tables are given, in chamber and face id order.
pub fn write_structure(
    c: &Complex,
    p: Option<&ProjectionTable>,
    r: Option<&RestrictionFamily>,
    s: Option<&OrderFamily>,
) -> String {
    let n = c.num_chambers();
    let mut out = String::new();
    if let Some(p) = p {
        for f in 0..c.num_faces() {
            for x in 0..n {
                let _ = writeln!(
                    out,
                    "proj {} {} -> {}",
                    c.face_name(f),
                    c.chamber_name(x),
                    c.chamber_name(p.get(f, x))
                );
            }
        }
    }
    if let Some(r) = r {
        for x in 0..n {
            for d in 0..n {
                let _ = writeln!(
                    out,
                    "restr {} {} -> {}",
                    c.chamber_name(x),
                    c.chamber_name(d),
                    c.face_name(r.get(x, d))
                );
            }
        }
    }
    if let Some(s) = s {
        for x in 0..n {
            let _ = writeln!(out, "order {}:", c.chamber_name(x));
            for &(e, d) in s.orders[x].generators() {
                let _ = writeln!(
                    out,
                    "order {}: {} < {}",
                    c.chamber_name(x),
                    c.chamber_name(e),
                    c.chamber_name(d)
                );
            }
        }
    }
    out
}
