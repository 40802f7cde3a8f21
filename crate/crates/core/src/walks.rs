//! Sums of faces by rank or type, commutativity and uniformity of their
//! products, and chamber walks driven by face weights.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arrangement::{Arrangement, ArrangementComplex};
use crate::complex::{ChamberId, Complex, FaceId};
use crate::error::{Error, Result};
use crate::flags::{flag_vectors, local_flags};
use crate::lrb::Lrb;
use crate::order::reachability;
use crate::report::{Check, Report};
use crate::structures::{metric_structure, p_to_r, ProjectionTable};

/// A rank or type class of faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Class {
    Rank(usize),
    Type(u32),
}

enum Source<'a> {
    Band(&'a Lrb),
    Projections {
        chamber_of: Vec<Option<ChamberId>>,
        chamber_face: Vec<FaceId>,
        proj: ProjectionTable,
    },
}

struct Attached<'a> {
    complex: &'a Complex,
    face_of: Vec<FaceId>,
    elem_of: Vec<usize>,
}

/// Elements graded by rank, optionally typed, with whatever product is
/// available: a full band, or projections onto chambers only.
pub struct Graded<'a> {
    source: Source<'a>,
    names: Vec<String>,
    rank: Vec<usize>,
    types: Option<Vec<u32>>,
    top: usize,
    chambers: Vec<usize>,
    is_chamber: Vec<bool>,
    attached: Option<Attached<'a>>,
}

/// Coefficient of every element in a product of two class sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaCoefficients {
    pub left: Class,
    pub right: Class,
    pub coeff: Vec<u64>,
}

impl SigmaCoefficients {
    pub fn total(&self) -> u64 {
        self.coeff.iter().sum()
    }
}

impl<'a> Graded<'a> {
    fn assemble(
        source: Source<'a>,
        names: Vec<String>,
        rank: Vec<usize>,
        types: Option<Vec<u32>>,
        chambers: Vec<usize>,
        attached: Option<Attached<'a>>,
    ) -> Self {
        let top = chambers.first().map_or(0, |&c| rank[c]);
        let mut is_chamber = vec![false; names.len()];
        for &c in &chambers {
            is_chamber[c] = true;
        }
        Graded {
            source,
            names,
            rank,
            types,
            top,
            chambers,
            is_chamber,
            attached,
        }
    }

    /// A band graded by longest chains.
    pub fn from_lrb(lrb: &'a Lrb) -> Result<Self> {
        let rank = lrb.ranks()?;
        let names = (0..lrb.len()).map(|x| lrb.name(x).to_string()).collect();
        Ok(Graded::assemble(
            Source::Band(lrb),
            names,
            rank,
            None,
            lrb.chambers().to_vec(),
            None,
        ))
    }

    /// A covector band with the types and faces of its simplicial complex.
    pub fn from_arrangement(lrb: &'a Lrb, ac: &'a ArrangementComplex) -> Result<Self> {
        let mut g = Graded::from_lrb(lrb)?;
        let c = &ac.complex;
        if c.is_labelled() {
            g.types = Some(
                ac.covector_face
                    .iter()
                    .map(|&f| c.face_type(f).expect("labelled"))
                    .collect(),
            );
        }
        g.attached = Some(Attached {
            complex: c,
            face_of: ac.covector_face.clone(),
            elem_of: ac.face_covector.clone(),
        });
        Ok(g)
    }

    /// The faces of a complex with the gate projections onto chambers.
    pub fn from_complex(c: &'a Complex) -> Result<Self> {
        let proj = metric_structure(c)?.projections;
        let n = c.num_faces();
        let chamber_face: Vec<FaceId> = (0..c.num_chambers()).map(|d| c.chamber_face(d)).collect();
        let mut chamber_of = vec![None; n];
        for (d, &f) in chamber_face.iter().enumerate() {
            chamber_of[f] = Some(d);
        }
        let names = (0..n).map(|f| c.face_name(f)).collect();
        let rank = (0..n).map(|f| c.face_rank(f)).collect();
        let types = c
            .is_labelled()
            .then(|| (0..n).map(|f| c.face_type(f).expect("labelled")).collect());
        let attached = Attached {
            complex: c,
            face_of: (0..n).collect(),
            elem_of: (0..n).collect(),
        };
        Ok(Graded::assemble(
            Source::Projections {
                chamber_of,
                chamber_face: chamber_face.clone(),
                proj,
            },
            names,
            rank,
            types,
            chamber_face,
            Some(attached),
        ))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn chambers(&self) -> &[usize] {
        &self.chambers
    }

    pub fn is_labelled(&self) -> bool {
        self.types.is_some()
    }

    /// Element named as in a weights file: a face of the attached complex
    /// (`-` or comma-separated vertices) or an element name.
    pub fn element(&self, name: &str) -> Result<usize> {
        if let Some(a) = &self.attached {
            if let Ok(f) = a.complex.parse_face(name) {
                return Ok(a.elem_of[f]);
            }
        }
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn class_label(&self, class: Class) -> String {
        match class {
            Class::Rank(j) => j.to_string(),
            Class::Type(m) => match &self.attached {
                Some(a) => a.complex.type_name(m),
                None => format!("{m:#b}"),
            },
        }
    }

    pub fn members(&self, class: Class) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| match class {
                Class::Rank(j) => self.rank[x] == j,
                Class::Type(m) => self.types.as_ref().is_some_and(|t| t[x] == m),
            })
            .collect()
    }

    fn full_class(&self) -> Class {
        match &self.types {
            Some(_) => Class::Type(((1u64 << self.top) - 1) as u32),
            None => Class::Rank(self.top),
        }
    }

    pub fn mul(&self, x: usize, y: usize) -> Result<usize> {
        match &self.source {
            Source::Band(l) => Ok(l.mul(x, y)),
            Source::Projections {
                chamber_of,
                chamber_face,
                proj,
            } => {
                if chamber_of[x].is_some() {
                    Ok(x)
                } else if let Some(d) = chamber_of[y] {
                    Ok(chamber_face[proj.get(x, d)])
                } else {
                    Err(Error::ProductUndefined(format!(
                        "{} {} (projections reach chambers only)",
                        self.names[x], self.names[y]
                    )))
                }
            }
        }
    }

    /// `σ_left σ_right` expanded over the elements.
    pub fn sigma_product(&self, left: Class, right: Class) -> Result<SigmaCoefficients> {
        let mut coeff = vec![0u64; self.len()];
        let rs = self.members(right);
        for x in self.members(left) {
            for &y in &rs {
                coeff[self.mul(x, y)?] += 1;
            }
        }
        Ok(SigmaCoefficients { left, right, coeff })
    }

    fn projections_on_complex(&self) -> Option<(ProjectionTable, &Complex)> {
        let a = self.attached.as_ref()?;
        let c = a.complex;
        let mut chamber_id = vec![usize::MAX; c.num_faces()];
        for d in 0..c.num_chambers() {
            chamber_id[c.chamber_face(d)] = d;
        }
        let table = (0..c.num_faces())
            .map(|f| {
                (0..c.num_chambers())
                    .map(|d| {
                        let p = self
                            .mul(a.elem_of[f], a.elem_of[c.chamber_face(d)])
                            .expect("chamber product");
                        chamber_id[a.face_of[p]]
                    })
                    .collect()
            })
            .collect();
        Some((ProjectionTable { table }, c))
    }

    fn chamber_id(&self, x: usize) -> Option<ChamberId> {
        let a = self.attached.as_ref()?;
        let f = a.face_of[x];
        (0..a.complex.num_chambers()).find(|&d| a.complex.chamber_face(d) == f)
    }
}

fn compare(check: &mut Check, g: &Graded, a: &SigmaCoefficients, b: &SigmaCoefficients) {
    for x in 0..g.len() {
        check.expect(a.coeff[x] == b.coeff[x], || {
            vec![
                format!("H={}", g.name(x)),
                format!("lr={}", a.coeff[x]),
                format!("rl={}", b.coeff[x]),
            ]
        });
    }
}

/// `C(i,j)` for ranks `1 <= i < j <= n`, or `σ_I σ_J = σ_J σ_I` for every
/// proper nonempty type `J`; with an attached complex also the equivalence
/// with uniform local flag vectors and `coefficient = f_J(D)`.
pub fn check_commutativity(g: &Graded, labelled: bool) -> Result<Report> {
    if labelled && !g.is_labelled() {
        return Err(Error::NeedsLabels);
    }
    let n = g.top;
    let mut report = Report::new();
    let mut against_top = true;
    if labelled {
        let full = g.full_class();
        for mask in 1..(1u32 << n) - 1 {
            let j = Class::Type(mask);
            let mut check = Check::new(format!("C({})", g.class_label(j)));
            let a = g.sigma_product(full, j)?;
            let b = g.sigma_product(j, full)?;
            compare(&mut check, g, &a, &b);
            against_top &= check.passed();
            report.push(check);
        }
    } else {
        for i in 1..=n {
            for j in i + 1..=n {
                let mut check = Check::new(format!("C({i},{j})"));
                let a = g.sigma_product(Class::Rank(i), Class::Rank(j))?;
                let b = g.sigma_product(Class::Rank(j), Class::Rank(i))?;
                compare(&mut check, g, &a, &b);
                if j == n {
                    against_top &= check.passed();
                }
                report.push(check);
            }
        }
    }
    if let Some((proj, c)) = g.projections_on_complex() {
        let r = p_to_r(c, &proj);
        let local = local_flags(c, &r, labelled)?;
        let global = flag_vectors(c, labelled)?;
        let uniform = local.is_uniform(&global);
        let mut equi = Check::new("commuting<=>uniform-h");
        equi.expect(against_top == uniform, || {
            vec![
                format!("commuting={against_top}"),
                format!("uniform={uniform}"),
            ]
        });
        let mut sf = Check::new("sigma=f");
        let keys: Vec<(usize, Class)> = if labelled {
            (0..1usize << n)
                .map(|m| (m, Class::Type(m as u32)))
                .collect()
        } else {
            (0..=n).map(|j| (j, Class::Rank(j))).collect()
        };
        let full = g.full_class();
        for (k, class) in keys {
            let s = g.sigma_product(class, full)?;
            for &x in g.chambers() {
                let d = g.chamber_id(x).expect("attached chamber");
                sf.expect(s.coeff[x] as i64 == local.f[d][k], || {
                    vec![
                        format!("D={}", g.name(x)),
                        format!("J={}", g.class_label(class)),
                        format!("sigma={}", s.coeff[x]),
                        format!("f={}", local.f[d][k]),
                    ]
                });
            }
        }
        report.push(equi);
        report.push(sf);
    }
    Ok(report)
}

/// Condition U: for all ranks `i, j >= 1` every chamber has the same
/// coefficient in `σ_i σ_j`.
pub fn check_uniformity(g: &Graded) -> Result<Check> {
    let mut check = Check::new("U");
    for i in 1..=g.top {
        for j in 1..=g.top {
            let s = g.sigma_product(Class::Rank(i), Class::Rank(j))?;
            let Some(&first) = g.chambers().first() else {
                continue;
            };
            let base = s.coeff[first];
            let odd = g.chambers().iter().copied().find(|&x| s.coeff[x] != base);
            check.expect(odd.is_none(), || {
                let x = odd.expect("mismatch");
                vec![
                    format!("i={i}"),
                    format!("j={j}"),
                    format!("D={}", g.name(first)),
                    format!("E={}", g.name(x)),
                    format!("{base}!={}", s.coeff[x]),
                ]
            });
        }
    }
    Ok(check)
}

/// One representative per support class.
fn support_representatives(lrb: &Lrb) -> Vec<usize> {
    let mut reps: Vec<usize> = Vec::new();
    for x in 0..lrb.len() {
        if !reps.iter().any(|&r| lrb.supp_le(r, x) && lrb.supp_le(x, r)) {
            reps.push(x);
        }
    }
    reps
}

/// U on every `S_{<=X}`, the commutativity it implies, coefficient
/// invariance under restriction to `S_{<= supp H}`, and `FG` chamber iff
/// `GF` chamber.
pub fn uniformity_harness(lrb: &Lrb) -> Result<Report> {
    let g = Graded::from_lrb(lrb)?;
    let n = g.top;
    let mut report = Report::new();
    let mut local_u = Check::new("U(S<=X)");
    let mut invariance = Check::new("supp-invariance");
    let mut all_u = true;
    let products: Vec<Vec<SigmaCoefficients>> = (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| g.sigma_product(Class::Rank(i), Class::Rank(j)))
                .collect()
        })
        .collect::<Result<_>>()?;
    for x in support_representatives(lrb) {
        let elems = lrb.support_ideal(x);
        let sub = lrb.below_support(x);
        let sg = Graded::from_lrb(&sub)?;
        let u = check_uniformity(&sg)?;
        all_u &= u.passed();
        local_u.expect(u.passed(), || {
            let mut w = vec![format!("X={}", lrb.name(x))];
            w.extend(u.witnesses.first().cloned().unwrap_or_default());
            w
        });
        for i in 1..=n {
            for j in 1..=n {
                let s = sg.sigma_product(Class::Rank(i), Class::Rank(j))?;
                for (local, &h) in elems.iter().enumerate() {
                    if !lrb.supp_le(x, h) {
                        continue;
                    }
                    let global = products[i - 1][j - 1].coeff[h];
                    invariance.expect(s.coeff[local] == global, || {
                        vec![
                            format!("H={}", lrb.name(h)),
                            format!("i={i}"),
                            format!("j={j}"),
                        ]
                    });
                }
            }
        }
    }
    let mut swap = Check::new("FG<=>GF-chamber");
    for f in 0..lrb.len() {
        for h in 0..lrb.len() {
            let a = lrb.chamber_id(lrb.mul(f, h)).is_some();
            let b = lrb.chamber_id(lrb.mul(h, f)).is_some();
            swap.expect(a == b, || {
                vec![format!("F={}", lrb.name(f)), format!("G={}", lrb.name(h))]
            });
        }
    }
    let commutativity = check_commutativity(&g, false)?;
    let all_c = commutativity.passed();
    let mut implication = Check::new("U=>C");
    implication.expect(!all_u || all_c, || {
        vec!["U-everywhere".into(), "C-fails".into()]
    });
    report.push(local_u);
    report.push(invariance);
    report.push(swap);
    report.extend(commutativity);
    report.push(implication);
    Ok(report)
}

/// Transition matrix and unique stationary distribution of a chamber walk.
#[derive(Debug, Clone)]
pub struct WalkChain {
    pub chambers: Vec<String>,
    pub transition: Vec<Vec<BigRational>>,
    pub stationary: Vec<BigRational>,
}

fn ratio_text(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

impl WalkChain {
    pub fn is_uniform(&self) -> bool {
        self.stationary.windows(2).all(|w| w[0] == w[1])
    }

    /// `pi <chamber> = <num>/<den>` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, p) in self.chambers.iter().zip(&self.stationary) {
            let _ = writeln!(out, "pi {name} = {}", ratio_text(p));
        }
        out
    }
}

pub type FaceWeights = Vec<(usize, BigRational)>;

/// Equal weight on every member of a class.
pub fn uniform_weights(g: &Graded, class: Class) -> Result<FaceWeights> {
    let members = g.members(class);
    if members.is_empty() {
        return Err(Error::BadWeights(format!(
            "class {} is empty",
            g.class_label(class)
        )));
    }
    let w = BigRational::new(BigInt::one(), BigInt::from(members.len()));
    Ok(members.into_iter().map(|x| (x, w.clone())).collect())
}

/// `w <face|-> <num>/<den>` lines.
pub fn parse_weights(g: &Graded, text: &str) -> Result<FaceWeights> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: i + 1,
            message,
        };
        let toks: Vec<&str> = line.split_whitespace().collect();
        let ["w", face, value] = toks[..] else {
            return Err(err("expected `w <face> <num>/<den>`".into()));
        };
        let x = g.element(face)?;
        let q: BigRational = value
            .parse()
            .map_err(|_| err(format!("bad rational {value}")))?;
        if out.iter().any(|(y, _)| *y == x) {
            return Err(err(format!("face {face} weighted twice")));
        }
        out.push((x, q));
    }
    Ok(out)
}

pub fn weights_to_text(g: &Graded, w: &FaceWeights) -> String {
    let mut out = String::new();
    for (x, q) in w {
        let _ = writeln!(out, "w {} {}", g.name(*x), ratio_text(q));
    }
    out
}

/// `P(C,D) = Σ_{FC=D} w_F`, solved exactly for `π P = π`, `Σ π = 1`.
pub fn walk(g: &Graded, weights: &FaceWeights) -> Result<WalkChain> {
    let mut total = BigRational::zero();
    for (x, q) in weights {
        if *q < BigRational::zero() {
            return Err(Error::BadWeights(format!(
                "negative weight on {}",
                g.name(*x)
            )));
        }
        total += q;
    }
    if !total.is_one() {
        return Err(Error::BadWeights(format!(
            "weights sum to {}",
            ratio_text(&total)
        )));
    }
    let m = g.chambers.len();
    let mut index = vec![usize::MAX; g.len()];
    for (i, &x) in g.chambers.iter().enumerate() {
        index[x] = i;
    }
    let mut p = vec![vec![BigRational::zero(); m]; m];
    for (i, &c) in g.chambers.iter().enumerate() {
        for (f, q) in weights {
            if q.is_zero() {
                continue;
            }
            let d = g.mul(*f, c)?;
            if !g.is_chamber[d] {
                return Err(Error::ProductUndefined(format!(
                    "{}·{} is not a chamber",
                    g.name(*f),
                    g.name(c)
                )));
            }
            p[i][index[d]] += q;
        }
    }
    let succ: Vec<Vec<usize>> = p
        .iter()
        .map(|row| (0..m).filter(|&j| !row[j].is_zero()).collect())
        .collect();
    let reach = reachability(&succ);
    let closed: Vec<usize> = (0..m)
        .filter(|&i| reach[i].ones().all(|j| reach[j].contains(i)))
        .collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &i in &closed {
        if !classes.iter().any(|cl| reach[cl[0]].contains(i)) {
            classes.push(reach[i].ones().collect());
        }
    }
    if classes.len() > 1 {
        return Err(Error::ReducibleChain {
            classes: classes
                .iter()
                .map(|cl| {
                    cl.iter()
                        .map(|&i| g.name(g.chambers[i]).to_string())
                        .collect()
                })
                .collect(),
        });
    }
    let stationary = solve_stationary(&p)?;
    Ok(WalkChain {
        chambers: g.chambers.iter().map(|&x| g.name(x).to_string()).collect(),
        transition: p,
        stationary,
    })
}

fn solve_stationary(p: &[Vec<BigRational>]) -> Result<Vec<BigRational>> {
    let m = p.len();
    // row j: Σ_i π_i P(i,j) − π_j = 0, last row replaced by Σ π_i = 1
    let mut a: Vec<Vec<BigRational>> = (0..m)
        .map(|j| {
            let mut row: Vec<BigRational> = (0..m).map(|i| p[i][j].clone()).collect();
            row[j] -= BigRational::one();
            row.push(BigRational::zero());
            row
        })
        .collect();
    if let Some(last) = a.last_mut() {
        *last = vec![BigRational::one(); m + 1];
    }
    for col in 0..m {
        let pivot = (col..m)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Inconsistent("singular stationary system".into()))?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &factor * pv;
                }
            }
        }
    }
    Ok(a.into_iter().map(|row| row[m].clone()).collect())
}

/// Uniform walk on a class; its stationary distribution is uniform iff the
/// class sum commutes with the chamber sum.
pub fn check_walk(g: &Graded, class: Class) -> Result<(WalkChain, Report)> {
    let chain = walk(g, &uniform_weights(g, class)?)?;
    let full = g.full_class();
    let a = g.sigma_product(full, class)?;
    let b = g.sigma_product(class, full)?;
    let commutes = a.coeff == b.coeff;
    let uniform = chain.is_uniform();
    let mut report = Report::new();
    report.info(format!(
        "walk class {} uniform={uniform} commutes={commutes}",
        g.class_label(class)
    ));
    let mut check = Check::new("pi-uniform<=>commutes");
    check.expect(uniform == commutes, || {
        vec![format!("uniform={uniform}"), format!("commutes={commutes}")]
    });
    report.push(check);
    Ok((chain, report))
}

/// Simpliciality against `C(1,2)`, `C(1,3)`, `C(2,3)` and the vertex walk
/// for a rank-3 arrangement.
pub fn rank3_harness(a: &Arrangement) -> Result<Report> {
    let r = a.rank();
    if r != 3 {
        return Err(Error::RankMismatch {
            expected: 3,
            found: r,
        });
    }
    let faces = a.enumerate_faces()?;
    let simplicial = a.is_simplicial(&faces);
    let lrb = Lrb::from_faces(faces)?;
    let g = Graded::from_lrb(&lrb)?;
    let commutativity = check_commutativity(&g, false)?;
    let verdicts: Vec<bool> = ["C(1,2)", "C(1,3)", "C(2,3)"]
        .iter()
        .map(|id| commutativity.get(id).is_some_and(Check::passed))
        .collect();
    let chain = walk(&g, &uniform_weights(&g, Class::Rank(1))?)?;
    let uniform = chain.is_uniform();
    let mut report = Report::new();
    report.info(format!(
        "simplicial={simplicial} C(1,2)={} C(1,3)={} C(2,3)={} walk-uniform={uniform}",
        verdicts[0], verdicts[1], verdicts[2]
    ));
    let mut simp = Check::new("simplicial");
    simp.expect(simplicial, || {
        vec![format!(
            "chamber={}",
            a.non_simplicial_chamber(lrb_faces(&lrb))
                .map_or(String::new(), |s| s.to_string())
        )]
    });
    let mut eq = Check::new("rank3-equivalence");
    eq.expect(verdicts.iter().all(|&v| v == simplicial), || {
        vec![format!("simplicial={simplicial}")]
    });
    let mut w = Check::new("walk-uniform<=>simplicial");
    w.expect(uniform == simplicial, || vec![format!("uniform={uniform}")]);
    report.push(simp);
    report.extend(commutativity);
    report.push(eq);
    report.push(w);
    Ok(report)
}

fn lrb_faces(lrb: &Lrb) -> &crate::arrangement::FaceEnumeration {
    lrb.faces().expect("covector band")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::CoxeterFamily;

    fn ngon(n: usize) -> Complex {
        let chambers: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        Complex::from_chambers(&chambers).unwrap()
    }

    #[test]
    fn free_two_by_table_scan() {
        let f2 = Lrb::free(2).unwrap();
        assert_eq!(f2.len(), 5);
        let g = Graded::from_lrb(&f2).unwrap();
        // oracle: scan every pair of words directly
        let words: [&[u8]; 5] = [&[], &[1], &[2], &[1, 2], &[2, 1]];
        let concat = |a: &[u8], b: &[u8]| {
            let mut w = a.to_vec();
            for &l in b {
                if !w.contains(&l) {
                    w.push(l);
                }
            }
            w
        };
        for i in 0..=2 {
            for j in 0..=2 {
                let s = g.sigma_product(Class::Rank(i), Class::Rank(j)).unwrap();
                for (k, target) in words.iter().enumerate() {
                    let want = words
                        .iter()
                        .filter(|a| a.len() == i)
                        .flat_map(|a| words.iter().filter(|b| b.len() == j).map(move |b| (*a, *b)))
                        .filter(|(a, b)| concat(a, b) == *target)
                        .count() as u64;
                    let x = f2.word(target).unwrap();
                    assert_eq!(s.coeff[x], want, "i={i} j={j} target={k}");
                }
            }
        }
        assert!(check_commutativity(&g, false).unwrap().passed());
    }

    #[test]
    fn hexagon_commutes_labelled() {
        let mut b = crate::ComplexBuilder::new();
        for i in 0..6 {
            b.vertex(&format!("v{i}"), Some(if i % 2 == 0 { "s" } else { "t" }))
                .unwrap();
        }
        for i in 0..6 {
            b.chamber(None, &[format!("v{i}"), format!("v{}", (i + 1) % 6)])
                .unwrap();
        }
        let c = b.build().unwrap();
        let g = Graded::from_complex(&c).unwrap();
        let rep = check_commutativity(&g, true).unwrap();
        assert!(rep.passed(), "{rep}");
        let rep = check_commutativity(&g, false).unwrap();
        assert!(rep.passed(), "{rep}");
        assert!(matches!(
            g.sigma_product(Class::Rank(1), Class::Rank(1)),
            Err(Error::ProductUndefined(_))
        ));
    }

    #[test]
    fn b3_sigma_matches_local_flags() {
        let a = Arrangement::coxeter(CoxeterFamily::B, 3).unwrap();
        let faces = a.enumerate_faces().unwrap();
        let ac = a.complex(&faces).unwrap();
        let lrb = Lrb::from_faces(faces).unwrap();
        let g = Graded::from_arrangement(&lrb, &ac).unwrap();
        let s = g.sigma_product(Class::Rank(1), Class::Rank(3)).unwrap();
        for &d in g.chambers() {
            // each of the 3 vertices of D, paired with chambers C whose projection is D
            assert!(s.coeff[d] > 0);
        }
        assert_eq!(s.total(), 26 * 48);
        let rep = check_commutativity(&g, false).unwrap();
        assert!(rep.passed(), "{rep}");
        let rep = check_commutativity(&g, true).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn b3_octants_walk() {
        let a = Arrangement::boolean(3).unwrap();
        let lrb = Lrb::from_faces(a.enumerate_faces().unwrap()).unwrap();
        let g = Graded::from_lrb(&lrb).unwrap();
        let chain = walk(&g, &uniform_weights(&g, Class::Rank(1)).unwrap()).unwrap();
        let eighth = BigRational::new(BigInt::one(), BigInt::from(8));
        assert!(chain.stationary.iter().all(|p| *p == eighth));
        for row in &chain.transition {
            assert!(row.iter().fold(BigRational::zero(), |s, v| s + v).is_one());
        }
        assert!(chain.to_text().contains(" = 1/8"));
    }

    #[test]
    fn point_mass_absorbs() {
        let a = Arrangement::boolean(2).unwrap();
        let lrb = Lrb::from_faces(a.enumerate_faces().unwrap()).unwrap();
        let g = Graded::from_lrb(&lrb).unwrap();
        let d = g.chambers()[2];
        let chain = walk(&g, &vec![(d, BigRational::one())]).unwrap();
        for (i, &x) in g.chambers().iter().enumerate() {
            let want = if x == d {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            assert_eq!(chain.stationary[i], want);
        }
        let e = g.chambers()[0];
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let err = walk(
            &g,
            &vec![(e, half.clone()), (e, half.clone() / BigInt::from(2))],
        );
        assert!(matches!(err, Err(Error::BadWeights(_))));
        let id = g.members(Class::Rank(0))[0];
        let err = walk(&g, &vec![(id, BigRational::one())]);
        assert!(matches!(err, Err(Error::ReducibleChain { .. })));
    }

    #[test]
    fn rank3_cases() {
        let b3 = Arrangement::coxeter(CoxeterFamily::B, 3).unwrap();
        let rep = rank3_harness(&b3).unwrap();
        assert!(rep.passed(), "{rep}");
        let generic = Arrangement::new(vec![
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![1, 1, 1],
        ])
        .unwrap();
        let rep = rank3_harness(&generic).unwrap();
        for id in ["simplicial", "C(1,2)", "C(1,3)", "C(2,3)"] {
            assert!(!rep.get(id).unwrap().passed(), "{id}");
        }
        assert!(rep.get("rank3-equivalence").unwrap().passed());
        assert!(rep.get("walk-uniform<=>simplicial").unwrap().passed());
        let b2 = Arrangement::boolean(2).unwrap();
        assert!(matches!(
            rank3_harness(&b2),
            Err(Error::RankMismatch {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn uniformity_on_free_band() {
        let f3 = Lrb::free(3).unwrap();
        let rep = uniformity_harness(&f3).unwrap();
        assert!(rep.passed(), "{rep}");
        let single = Lrb::free(1).unwrap();
        let g = Graded::from_lrb(&single).unwrap();
        assert!(check_uniformity(&g).unwrap().passed());
    }

    #[test]
    fn hexagon_walk_matches_commutation() {
        let c = ngon(6);
        let g = Graded::from_complex(&c).unwrap();
        let (chain, rep) = check_walk(&g, Class::Rank(1)).unwrap();
        assert!(rep.passed(), "{rep}");
        assert!(chain.is_uniform());
        let w = parse_weights(&g, "w 0 1/2\nw 3 1/2\n").unwrap();
        let text = weights_to_text(&g, &w);
        assert_eq!(parse_weights(&g, &text).unwrap(), w);
    }
}
