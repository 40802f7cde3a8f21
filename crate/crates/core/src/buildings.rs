//! The flag complex of subspaces of `F_q^n`: apartments from frames,
//! Weyl distances, retractions, apartment counts and flag h-polynomials.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::complex::{ChamberId, Complex, ComplexBuilder, FaceId};
use crate::error::{Error, Result};
use crate::flags::flag_vectors;
use crate::report::{Check, Report};
use crate::structures::descent_face;

/// Largest chamber count built.
pub const MAX_CHAMBERS: usize = 2500;

/// Polynomial in `q` with integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QPolynomial {
    coeffs: Vec<i64>,
}

impl QPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval_int(&self, q: i64) -> i64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * q + c)
    }

    pub fn eval(&self, q: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, &c| {
                acc * q + BigRational::from_integer(BigInt::from(c))
            })
    }

    /// `q^n p(1/q)`, if that is a polynomial.
    pub fn reciprocal(&self, n: usize) -> Option<QPolynomial> {
        if self.coeffs.len() > n + 1 {
            return None;
        }
        let mut out = vec![0; n + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[n - k] = c;
        }
        Some(QPolynomial::new(out))
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| {
                let mono = match k {
                    0 => String::new(),
                    1 => "q".to_string(),
                    _ => format!("q^{k}"),
                };
                match (c, k) {
                    (_, 0) => c.to_string(),
                    (1, _) => mono,
                    (-1, _) => format!("-{mono}"),
                    _ => format!("{c}{mono}"),
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

fn is_prime(q: u32) -> bool {
    q >= 2 && (2..q).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

/// `[n]_q! = Π_{k=1}^{n} (1 + q + ... + q^{k-1})`.
pub fn q_factorial(n: usize, q: u64) -> u64 {
    (1..=n)
        .map(|k| (0..k).map(|i| q.pow(i as u32)).sum::<u64>())
        .product()
}

/// Number of unordered bases up to scaling.
pub fn frame_count(n: usize, q: u64) -> u64 {
    let num: u64 = (0..n).map(|k| q.pow(n as u32) - q.pow(k as u32)).product();
    let den: u64 = (q - 1).pow(n as u32) * (1..=n as u64).product::<u64>();
    num / den
}

pub fn inversions(p: &[usize]) -> usize {
    let mut count = 0;
    for j in 0..p.len() {
        for k in j + 1..p.len() {
            if p[j] > p[k] {
                count += 1;
            }
        }
    }
    count
}

/// Descent set as a mask: bit `i-1` when `p(i) > p(i+1)`.
pub fn descent_mask(p: &[usize]) -> u32 {
    (0..p.len().saturating_sub(1))
        .filter(|&i| p[i] > p[i + 1])
        .fold(0, |m, i| m | 1 << i)
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return out;
        };
        let j = (i + 1..n)
            .rev()
            .find(|&j| p[j] > p[i])
            .expect("successor exists");
        p.swap(i, j);
        p[i + 1..].reverse();
    }
}

/// `Σ_{w : Des(w) = J} q^{inv(w)}` for every mask `J`.
pub fn descent_polynomials(n: usize) -> Vec<QPolynomial> {
    let top = n * n.saturating_sub(1) / 2;
    let mut coeffs = vec![vec![0i64; top + 1]; 1 << n.saturating_sub(1)];
    for w in permutations(n) {
        coeffs[descent_mask(&w) as usize][inversions(&w)] += 1;
    }
    coeffs.into_iter().map(QPolynomial::new).collect()
}

/// The building of type `A_{n-1}` over the prime field `F_q`.
#[derive(Debug)]
pub struct Building {
    pub n: usize,
    pub q: u32,
    digits: Vec<Vec<u32>>,
    subspaces: Vec<u128>,
    dims: Vec<usize>,
    names: Vec<String>,
    index: HashMap<u128, usize>,
    flags: Vec<Vec<usize>>,
    flag_index: HashMap<Vec<usize>, usize>,
    frames: Vec<Vec<usize>>,
    frame_index: HashMap<Vec<usize>, usize>,
    frame_chambers: Vec<Vec<usize>>,
    chamber_frames: Vec<Vec<usize>>,
    complex: Complex,
}

impl Building {
    pub fn new(n: usize, q: u32) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NonPrimeField(q));
        }
        if n < 2 {
            return Err(Error::BadParameter(format!("dimension {n} < 2")));
        }
        let size = (q as u128).checked_pow(n as u32).filter(|&s| s <= 128);
        let chambers = q_factorial(n, q as u64);
        let Some(size) = size.filter(|_| chambers <= MAX_CHAMBERS as u64) else {
            return Err(Error::ScaleExceeded(format!("n={n} q={q}")));
        };
        let size = size as usize;
        let digits: Vec<Vec<u32>> = (0..size)
            .map(|mut v| {
                let mut d = vec![0u32; n];
                for slot in d.iter_mut().rev() {
                    *slot = (v % q as usize) as u32;
                    v /= q as usize;
                }
                d
            })
            .collect();
        let mut b = Building {
            n,
            q,
            digits,
            subspaces: Vec::new(),
            dims: Vec::new(),
            names: Vec::new(),
            index: HashMap::new(),
            flags: Vec::new(),
            flag_index: HashMap::new(),
            frames: Vec::new(),
            frame_index: HashMap::new(),
            frame_chambers: Vec::new(),
            chamber_frames: Vec::new(),
            complex: Complex::from_chambers(&[vec![0]])?,
        };
        b.enumerate_subspaces();
        b.enumerate_flags();
        b.complex = b.build_complex()?;
        b.enumerate_frames();
        Ok(b)
    }

    fn encode(&self, d: &[u32]) -> usize {
        d.iter()
            .fold(0usize, |acc, &x| acc * self.q as usize + x as usize)
    }

    fn combine(&self, a: usize, c: u32, v: usize) -> usize {
        let d: Vec<u32> = self.digits[a]
            .iter()
            .zip(&self.digits[v])
            .map(|(&x, &y)| (x + c * y) % self.q)
            .collect();
        self.encode(&d)
    }

    fn span_with(&self, mask: u128, v: usize) -> u128 {
        let mut out = mask;
        for s in (0..self.digits.len()).filter(|&s| mask >> s & 1 == 1) {
            for c in 1..self.q {
                out |= 1u128 << self.combine(s, c, v);
            }
        }
        out
    }

    fn dim_of(&self, mask: u128) -> usize {
        let mut size = mask.count_ones();
        let mut d = 0;
        while size > 1 {
            size /= self.q;
            d += 1;
        }
        d
    }

    fn rref_name(&self, mask: u128) -> String {
        let mut rows: Vec<Vec<u32>> = Vec::new();
        let mut span = 1u128;
        for v in 0..self.digits.len() {
            if mask >> v & 1 == 1 && span >> v & 1 == 0 {
                span = self.span_with(span, v);
                rows.push(self.digits[v].clone());
            }
        }
        let q = self.q;
        let inv = |x: u32| (1..q).find(|y| x * y % q == 1).expect("prime field");
        let mut lead = 0;
        for r in 0..rows.len() {
            while lead < self.n && (r..rows.len()).all(|i| rows[i][lead] == 0) {
                lead += 1;
            }
            let p = (r..rows.len())
                .find(|&i| rows[i][lead] != 0)
                .expect("independent rows");
            rows.swap(r, p);
            let s = inv(rows[r][lead]);
            for x in rows[r].iter_mut() {
                *x = *x * s % q;
            }
            for i in 0..rows.len() {
                if i != r && rows[i][lead] != 0 {
                    let f = rows[i][lead];
                    for k in 0..self.n {
                        rows[i][k] = (rows[i][k] + (q - f) * rows[r][k]) % q;
                    }
                }
            }
            lead += 1;
        }
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|&x| char::from_digit(x, 36).expect("digit"))
                    .collect::<String>()
            })
            .collect::<Vec<_>>()
            .join(".")
    }

    fn enumerate_subspaces(&mut self) {
        let full = if self.digits.len() == 128 {
            u128::MAX
        } else {
            (1u128 << self.digits.len()) - 1
        };
        let mut found: Vec<u128> = vec![1];
        let mut seen: std::collections::HashSet<u128> = found.iter().copied().collect();
        let mut frontier = found.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &s in &frontier {
                for v in 0..self.digits.len() {
                    if s >> v & 1 == 0 {
                        let t = self.span_with(s, v);
                        if seen.insert(t) {
                            next.push(t);
                        }
                    }
                }
            }
            found.extend(next.iter().copied());
            frontier = next;
        }
        let mut proper: Vec<(usize, String, u128)> = found
            .into_iter()
            .filter(|&s| s != 1 && s != full)
            .map(|s| (self.dim_of(s), self.rref_name(s), s))
            .collect();
        proper.sort();
        for (i, (d, name, s)) in proper.into_iter().enumerate() {
            self.index.insert(s, i);
            self.subspaces.push(s);
            self.dims.push(d);
            self.names.push(name);
        }
    }

    fn enumerate_flags(&mut self) {
        let by_dim: Vec<Vec<usize>> = (0..self.n)
            .map(|d| {
                (0..self.subspaces.len())
                    .filter(|&i| self.dims[i] == d)
                    .collect()
            })
            .collect();
        let mut partial: Vec<Vec<usize>> = by_dim[1].iter().map(|&l| vec![l]).collect();
        for d in 2..self.n {
            let mut next = Vec::new();
            for f in &partial {
                let last = self.subspaces[*f.last().expect("nonempty")];
                for &s in &by_dim[d] {
                    if last & !self.subspaces[s] == 0 {
                        let mut g = f.clone();
                        g.push(s);
                        next.push(g);
                    }
                }
            }
            partial = next;
        }
        for (i, f) in partial.iter().enumerate() {
            self.flag_index.insert(f.clone(), i);
        }
        self.flags = partial;
    }

    fn build_complex(&self) -> Result<Complex> {
        let mut b = ComplexBuilder::new();
        for (i, name) in self.names.iter().enumerate() {
            b.vertex(name, Some(&self.dims[i].to_string()))?;
        }
        for f in &self.flags {
            let vs: Vec<&str> = f.iter().map(|&s| self.names[s].as_str()).collect();
            b.chamber(Some(&vs.join("|")), &vs)?;
        }
        let c = b.build()?;
        if (0..self.flags.len()).any(|k| c.chamber_id(&self.chamber_label(k)) != Some(k)) {
            return Err(Error::Inconsistent(
                "chamber order differs from flag order".into(),
            ));
        }
        Ok(c)
    }

    fn line_vector(&self, line: usize) -> usize {
        let m = self.subspaces[line];
        (1..self.digits.len())
            .find(|&v| m >> v & 1 == 1)
            .expect("nonzero vector")
    }

    fn enumerate_frames(&mut self) {
        let lines: Vec<usize> = (0..self.subspaces.len())
            .filter(|&i| self.dims[i] == 1)
            .collect();
        let mut frames = Vec::new();
        let mut stack: Vec<(Vec<usize>, u128, usize)> = vec![(Vec::new(), 1, 0)];
        while let Some((chosen, span, start)) = stack.pop() {
            if chosen.len() == self.n {
                frames.push(chosen);
                continue;
            }
            for (k, &l) in lines.iter().enumerate().skip(start).rev() {
                if self.subspaces[l] & !span != 0 {
                    let mut c = chosen.clone();
                    c.push(l);
                    stack.push((c, self.span_with(span, self.line_vector(l)), k + 1));
                }
            }
        }
        frames.sort();
        let perms = permutations(self.n);
        let mut chamber_frames = vec![Vec::new(); self.flags.len()];
        let mut frame_chambers = Vec::with_capacity(frames.len());
        for (i, fr) in frames.iter().enumerate() {
            self.frame_index.insert(fr.clone(), i);
            let mut cs = Vec::with_capacity(perms.len());
            for p in &perms {
                let ch = self.frame_chamber(fr, p);
                chamber_frames[ch].push(i);
                cs.push(ch);
            }
            frame_chambers.push(cs);
        }
        self.frames = frames;
        self.frame_chambers = frame_chambers;
        self.chamber_frames = chamber_frames;
    }

    /// Chamber `V_k = span(l_{p(1)}, ..., l_{p(k)})` of a frame.
    fn frame_chamber(&self, frame: &[usize], p: &[usize]) -> usize {
        let mut span = 1u128;
        let mut flag = Vec::with_capacity(self.n - 1);
        for &i in &p[..self.n - 1] {
            span = self.span_with(span, self.line_vector(frame[i]));
            flag.push(self.index[&span]);
        }
        self.flag_index[&flag]
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn num_chambers(&self) -> usize {
        self.flags.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.subspaces.len()
    }

    pub fn num_apartments(&self) -> usize {
        self.frames.len()
    }

    pub fn chamber_label(&self, c: ChamberId) -> String {
        self.flags[c]
            .iter()
            .map(|&s| self.names[s].as_str())
            .collect::<Vec<_>>()
            .join("|")
    }

    /// Apartments containing a chamber.
    pub fn apartments_of(&self, c: ChamberId) -> &[usize] {
        &self.chamber_frames[c]
    }

    /// Chambers of an apartment, indexed like `permutations(n)`.
    pub fn apartment(&self, frame: usize) -> &[ChamberId] {
        &self.frame_chambers[frame]
    }

    pub fn apartments_containing(&self, c: ChamberId, d: ChamberId) -> usize {
        let other = &self.chamber_frames[d];
        self.chamber_frames[c]
            .iter()
            .filter(|f| other.binary_search(f).is_ok())
            .count()
    }

    /// The frame of unit vectors.
    pub fn coordinate_frame(&self) -> usize {
        let mut lines: Vec<usize> = (0..self.n)
            .map(|i| {
                let mut d = vec![0u32; self.n];
                d[i] = 1;
                self.index[&self.span_with(1, self.encode(&d))]
            })
            .collect();
        lines.sort();
        self.frame_index[&lines]
    }

    /// For a chamber of the coordinate apartment, the unit vector index
    /// added at each step.
    fn coordinate_order(&self, d: ChamberId) -> Vec<usize> {
        let flag = self.full_flag(d);
        (1..=self.n)
            .map(|k| {
                let new = flag[k] & !flag[k - 1];
                (0..self.n)
                    .find(|&i| {
                        let mut u = vec![0u32; self.n];
                        u[i] = 1;
                        new >> self.encode(&u) & 1 == 1
                    })
                    .expect("coordinate apartment")
            })
            .collect()
    }

    /// `span(e_1) < span(e_1,e_2) < ...` and its reverse.
    pub fn standard_pair(&self) -> (ChamberId, ChamberId) {
        let unit = |i: usize| {
            let mut d = vec![0u32; self.n];
            d[i] = 1;
            self.encode(&d)
        };
        let chamber = |order: Vec<usize>| {
            let mut span = 1u128;
            let flag: Vec<usize> = order[..self.n - 1]
                .iter()
                .map(|&i| {
                    span = self.span_with(span, unit(i));
                    self.index[&span]
                })
                .collect();
            self.flag_index[&flag]
        };
        (
            chamber((0..self.n).collect()),
            chamber((0..self.n).rev().collect()),
        )
    }

    fn full_flag(&self, c: ChamberId) -> Vec<u128> {
        let full = if self.digits.len() == 128 {
            u128::MAX
        } else {
            (1u128 << self.digits.len()) - 1
        };
        let mut out = vec![1u128];
        out.extend(self.flags[c].iter().map(|&s| self.subspaces[s]));
        out.push(full);
        out
    }

    /// Jordan–Hölder permutation: `p[j] = i` when the `j`-th step of `D`
    /// enters at the `i`-th step of `C` (0-based).
    pub fn w_distance(&self, c: ChamberId, d: ChamberId) -> Vec<usize> {
        let (cf, df) = (self.full_flag(c), self.full_flag(d));
        let n = self.n;
        let dim = |i: usize, j: usize| self.dim_of(cf[i] & df[j]) as i64;
        let mut p = vec![0; n];
        for j in 1..=n {
            for i in 1..=n {
                if dim(i, j) - dim(i - 1, j) - dim(i, j - 1) + dim(i - 1, j - 1) == 1 {
                    p[j - 1] = i - 1;
                }
            }
        }
        p
    }

    pub fn longest(&self) -> Vec<usize> {
        (0..self.n).rev().collect()
    }

    pub fn is_opposite(&self, c: ChamberId, d: ChamberId) -> bool {
        self.w_distance(c, d) == self.longest()
    }

    /// The apartment spanned by two opposite chambers: lines
    /// `E_k ∩ F_{n+1-k}`.
    pub fn frame_of_opposites(&self, e: ChamberId, f: ChamberId) -> Result<usize> {
        if !self.is_opposite(e, f) {
            return Err(Error::NotOpposite(
                self.chamber_label(e),
                self.chamber_label(f),
            ));
        }
        let (ef, ff) = (self.full_flag(e), self.full_flag(f));
        let mut lines: Vec<usize> = (1..=self.n)
            .map(|k| self.index[&(ef[k] & ff[self.n + 1 - k])])
            .collect();
        lines.sort();
        Ok(self.frame_index[&lines])
    }

    /// The chamber of the apartment with the same Weyl distance from `c`.
    pub fn retraction(&self, frame: usize, c: ChamberId, d: ChamberId) -> Result<ChamberId> {
        if !self.frame_chambers[frame].contains(&c) {
            return Err(Error::NotInApartment(self.chamber_label(c)));
        }
        let w = self.w_distance(c, d);
        Ok(*self.frame_chambers[frame]
            .iter()
            .find(|&&e| self.w_distance(c, e) == w)
            .expect("apartment realizes every Weyl distance"))
    }

    fn face_type(&self, f: FaceId) -> u32 {
        self.complex.face_type(f).expect("typed")
    }

    fn gate(&self, f: FaceId, c: ChamberId) -> ChamberId {
        *self
            .complex
            .residue(f)
            .iter()
            .min_by_key(|&&x| self.complex.distance(x, c))
            .expect("nonempty residue")
    }

    /// Counts, Weyl distance against gallery distance, and the apartment
    /// identities around the standard opposite pair.
    pub fn counts_report(&self) -> Result<Report> {
        let n = self.n;
        let q = self.q as u64;
        let top = n * (n - 1) / 2;
        let mut report = Report::new();
        report.info(format!(
            "building n={n} q={q}: {} vertices, {} chambers, {} apartments",
            self.num_vertices(),
            self.num_chambers(),
            self.num_apartments()
        ));
        let mut chambers = Check::new("chambers=[n]_q!");
        chambers.expect(self.num_chambers() as u64 == q_factorial(n, q), || {
            vec![format!("found={}", self.num_chambers())]
        });
        let mut apts = Check::new("apartments");
        apts.expect(self.num_apartments() as u64 == frame_count(n, q), || {
            vec![format!("found={}", self.num_apartments())]
        });
        let per = q.pow(top as u32) as usize;
        let mut ac = Check::new("|A_C|=q^binom(n,2)");
        for c in 0..self.num_chambers() {
            ac.expect(self.chamber_frames[c].len() == per, || {
                vec![
                    format!("C={}", self.chamber_label(c)),
                    format!("found={}", self.chamber_frames[c].len()),
                ]
            });
        }
        let mut incidence = Check::new("incidence");
        let fact: usize = (1..=n).product();
        incidence.expect(
            self.num_apartments() * fact == self.num_chambers() * per,
            || vec![],
        );
        let mut delta = Check::new("distance=inv(delta)");
        let mut identity = Check::new("delta(C,C)=id");
        for c in 0..self.num_chambers() {
            identity.expect(self.w_distance(c, c) == (0..n).collect::<Vec<_>>(), || {
                vec![format!("C={}", self.chamber_label(c))]
            });
            for d in 0..self.num_chambers() {
                let w = self.w_distance(c, d);
                delta.expect(self.complex.distance(c, d) == inversions(&w), || {
                    vec![
                        format!("C={}", self.chamber_label(c)),
                        format!("D={}", self.chamber_label(d)),
                    ]
                });
            }
        }
        let mut thick = Check::new("facet-residues=q+1");
        for f in self.complex.faces_of_rank(n - 2) {
            thick.expect(self.complex.residue(f).len() == self.q as usize + 1, || {
                vec![format!("F={}", self.complex.face_name(f))]
            });
        }
        for check in [chambers, apts, ac, incidence, identity, delta, thick] {
            report.push(check);
        }
        let (c, cbar) = self.standard_pair();
        report.extend(self.apartment_count_identity(self.coordinate_frame(), c, cbar)?);
        report.extend(self.retraction_report(self.coordinate_frame(), c, cbar)?);
        Ok(report)
    }

    /// `|A_{C,D}| |A_{D,C̄}| = |A_D|` for every `D` in the apartment of `C`
    /// and `C̄`, the inversion formulas on the coordinate frame, and the
    /// bijection pairing opposite chambers with apartments through `D`.
    pub fn apartment_count_identity(
        &self,
        frame: usize,
        c: ChamberId,
        cbar: ChamberId,
    ) -> Result<Report> {
        if !self.is_opposite(c, cbar) {
            return Err(Error::NotOpposite(
                self.chamber_label(c),
                self.chamber_label(cbar),
            ));
        }
        for x in [c, cbar] {
            if !self.frame_chambers[frame].contains(&x) {
                return Err(Error::NotInApartment(self.chamber_label(x)));
            }
        }
        let q = self.q as usize;
        let w0 = self.longest();
        let mut product = Check::new("|A_CD||A_DC'|=|A_D|");
        let mut formula = Check::new("inversion-formulas");
        let mut additive = Check::new("delta-additivity");
        let mut bijection = Check::new("opposite-pairs->A_D");
        let mut fiber = Check::new("A'_CD=delta-fiber");
        let coordinate = frame == self.coordinate_frame() && (c, cbar) == self.standard_pair();
        let c_op: Vec<ChamberId> = (0..self.num_chambers())
            .filter(|&e| self.is_opposite(c, e))
            .collect();
        for &d in &self.frame_chambers[frame] {
            let label = || vec![format!("D={}", self.chamber_label(d))];
            let acd = self.apartments_containing(c, d);
            let adc = self.apartments_containing(d, cbar);
            let ad = self.chamber_frames[d].len();
            product.expect(acd * adc == ad, label);
            if coordinate {
                let i = &self.coordinate_order(d);
                let up = inversions(&i.iter().rev().copied().collect::<Vec<_>>());
                let down = inversions(i);
                formula.expect(acd == q.pow(up as u32) && adc == q.pow(down as u32), label);
            }
            let u = self.w_distance(c, d);
            let w = self.w_distance(d, cbar);
            let composed: Vec<usize> = (0..self.n).map(|j| u[w[j]]).collect();
            additive.expect(
                composed == w0 && inversions(&u) + inversions(&w) == inversions(&w0),
                label,
            );
            let xs: Vec<ChamberId> = (0..self.num_chambers())
                .filter(|&e| self.w_distance(d, e) == w)
                .collect();
            let back = self.w_distance(d, c);
            let ys: Vec<ChamberId> = (0..self.num_chambers())
                .filter(|&e| self.w_distance(d, e) == back)
                .collect();
            let mut hit: Vec<usize> = Vec::new();
            let mut ok = true;
            for &e in &xs {
                for &ebar in &ys {
                    match self.frame_of_opposites(e, ebar) {
                        Ok(f) if self.frame_chambers[f].contains(&d) => hit.push(f),
                        _ => ok = false,
                    }
                }
            }
            hit.sort_unstable();
            let injective = hit.windows(2).all(|p| p[0] != p[1]);
            bijection.expect(ok && injective && hit == self.chamber_frames[d], label);
            let prime: Vec<ChamberId> = c_op
                .iter()
                .copied()
                .filter(|&e| {
                    self.frame_of_opposites(c, e)
                        .is_ok_and(|f| self.frame_chambers[f].contains(&d))
                })
                .collect();
            fiber.expect(prime == xs && prime.len() == acd, label);
        }
        let mut report = Report::new();
        report.push(product);
        if coordinate {
            report.push(formula);
        }
        for check in [additive, bijection, fiber] {
            report.push(check);
        }
        Ok(report)
    }

    /// Retraction onto an apartment from `c`: type preservation of the
    /// restriction faces, the size of the fiber over `c̄`, and
    /// `ρ(F) C = ρ(F C)` for every face.
    pub fn retraction_report(&self, frame: usize, c: ChamberId, cbar: ChamberId) -> Result<Report> {
        let cx = &self.complex;
        let mut fibers = Check::new("retraction-fibers");
        let mut fixed = Check::new("retraction-fixes-apartment");
        let mut opposite = Check::new("|rho^-1(C')|=|C^op|=|A_C|");
        let mut compat = Check::new("rho(F)C=rho(FC)");
        let mut image = vec![0usize; self.num_chambers()];
        for x in 0..self.num_chambers() {
            image[x] = self.retraction(frame, c, x)?;
            let t = self.face_type(descent_face(cx, c, x));
            let s = self.face_type(descent_face(cx, c, image[x]));
            fibers.expect(t == s, || vec![format!("D={}", self.chamber_label(x))]);
        }
        for &d in &self.frame_chambers[frame] {
            fixed.expect(image[d] == d, || {
                vec![format!("D={}", self.chamber_label(d))]
            });
        }
        let over = image.iter().filter(|&&e| e == cbar).count();
        let c_op = (0..self.num_chambers())
            .filter(|&e| self.is_opposite(c, e))
            .count();
        opposite.expect(over == c_op && c_op == self.chamber_frames[c].len(), || {
            vec![format!("fiber={over}"), format!("opposite={c_op}")]
        });
        let retract_face = |f: FaceId| {
            let x = cx.residue(f)[0];
            let mask = cx.face_type(f).expect("typed");
            let e = image[x];
            let vs: Vec<_> = cx
                .chamber(e)
                .iter()
                .copied()
                .filter(|&v| mask >> cx.vertex_type(v).expect("typed") & 1 == 1)
                .collect();
            cx.face_id(&vs).expect("face of a chamber")
        };
        for f in 0..cx.num_faces() {
            let lhs = self.gate(retract_face(f), c);
            let rhs = image[self.gate(f, c)];
            compat.expect(lhs == rhs, || vec![format!("F={}", cx.face_name(f))]);
        }
        let mut report = Report::new();
        for check in [fibers, fixed, opposite, compat] {
            report.push(check);
        }
        Ok(report)
    }

    /// Gate property of the whole building, and agreement on the
    /// coordinate apartment with the product of ordered set partitions.
    pub fn gate_report(&self) -> Report {
        let cx = &self.complex;
        let mut report = Report::new();
        let gate = cx.check_gate_property();
        report.push(gate.check);
        let frame = self.coordinate_frame();
        let chambers = &self.frame_chambers[frame];
        let perms = permutations(self.n);
        let lines = &self.frames[frame];
        let mut check = Check::new("apartment-product");
        let mut faces: Vec<FaceId> = chambers
            .iter()
            .flat_map(|&c| cx.chamber_faces(c).iter().copied())
            .collect();
        faces.sort_unstable();
        faces.dedup();
        for &f in &faces {
            // blocks of frame indices between successive subspaces of F
            let mut chain: Vec<u128> = cx
                .face(f)
                .iter()
                .map(|&v| self.subspaces[v as usize])
                .collect();
            chain.sort_by_key(|m| m.count_ones());
            let block_of = |i: usize| {
                let l = self.subspaces[lines[i]];
                chain
                    .iter()
                    .position(|&m| l & !m == 0)
                    .unwrap_or(chain.len())
            };
            for (k, &c) in chambers.iter().enumerate() {
                let mut order: Vec<usize> = perms[k].clone();
                order.sort_by_key(|&i| (block_of(i), perms[k].iter().position(|&x| x == i)));
                let want = self.frame_chamber(lines, &order);
                let got = gate.gates[f][c];
                check.expect(got == Some(want), || {
                    vec![
                        format!("F={}", cx.face_name(f)),
                        format!("C={}", self.chamber_label(c)),
                    ]
                });
            }
        }
        report.push(check);
        report
    }

    /// `h_J` from restriction types at a base chamber, by mask.
    pub fn restriction_counts(&self, base: ChamberId) -> Vec<i64> {
        let mut out = vec![0i64; 1 << (self.n - 1)];
        for d in 0..self.num_chambers() {
            out[self.face_type(descent_face(&self.complex, base, d)) as usize] += 1;
        }
        out
    }

    /// Flag h-polynomials from descent statistics, checked against
    /// restriction counts, retraction fibers and the apartment, with the
    /// duality `h_J(q) = h_I(q) h_{I∖J}(1/q)`.
    pub fn hq_polynomials(&self) -> Result<(Vec<QPolynomial>, Report)> {
        let n = self.n;
        let top = n * (n - 1) / 2;
        let full = (1usize << (n - 1)) - 1;
        let polys = descent_polynomials(n);
        let (c, cbar) = self.standard_pair();
        let frame = self.coordinate_frame();
        let counts = self.restriction_counts(c);
        for (j, p) in polys.iter().enumerate() {
            if p.eval_int(self.q as i64) != counts[j] {
                return Err(Error::OracleMismatch(format!(
                    "h[{}]: descent polynomial gives {} but restriction counts give {}",
                    self.complex.type_name(j as u32),
                    p.eval_int(self.q as i64),
                    counts[j]
                )));
            }
        }
        let mut via_fibers = vec![0i64; full + 1];
        let mut sets = Check::new("H_J(C)=H_I-J(C')");
        for &d in &self.frame_chambers[frame] {
            let j = self.face_type(descent_face(&self.complex, c, d)) as usize;
            let jbar = self.face_type(descent_face(&self.complex, cbar, d)) as usize;
            sets.expect(jbar == full ^ j, || {
                vec![format!("D={}", self.chamber_label(d))]
            });
            let ad = self.chamber_frames[d].len() as i64;
            let acd = self.apartments_containing(c, d) as i64;
            if ad % acd != 0 {
                return Err(Error::OracleMismatch(format!("|A_D|/|A_CD| = {ad}/{acd}")));
            }
            via_fibers[j] += ad / acd;
        }
        if via_fibers != counts {
            return Err(Error::OracleMismatch(
                "fiber sums differ from restriction counts".into(),
            ));
        }
        let apt = self.complex.subcomplex(&self.frame_chambers[frame])?;
        let h_apt = flag_vectors(&apt, true)?.h;
        let mut at_one = Check::new("h_J(1)=h_J(apartment)");
        let mut duality = Check::new("h_J(q)=q^N h_I-J(1/q)");
        let mut laurent = Check::new("h_J=h_I h_I-J(1/q) at points");
        let points: Vec<BigRational> = [(2, 1), (3, 1), (1, 2), (-2, 3)]
            .iter()
            .map(|&(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b)))
            .collect();
        for j in 0..=full {
            let name = || vec![format!("J={}", self.complex.type_name(j as u32))];
            at_one.expect(polys[j].eval_int(1) == h_apt[j], name);
            duality.expect(
                polys[full ^ j].reciprocal(top).as_ref() == Some(&polys[j]),
                name,
            );
            for x in &points {
                let lhs = polys[j].eval(x);
                let rhs = polys[full].eval(x) * polys[full ^ j].eval(&x.recip());
                laurent.expect(lhs == rhs, name);
            }
        }
        let mut hi = Check::new("h_I=q^binom(n,2)");
        let mut monomial = vec![0i64; top + 1];
        monomial[top] = 1;
        hi.expect(polys[full] == QPolynomial::new(monomial), || {
            vec![polys[full].to_string()]
        });
        let mut report = Report::new();
        for (j, p) in polys.iter().enumerate() {
            report.info(format!("h[{}] = {p}", self.complex.type_name(j as u32)));
        }
        report.info(format!(
            "h_J at q={}: {}",
            self.q,
            counts
                .iter()
                .map(i64::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        ));
        for check in [sets, at_one, duality, laurent, hi] {
            report.push(check);
        }
        Ok((polys, report))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let b = Building::new(3, 2).unwrap();
        assert_eq!(b.num_vertices(), 14);
        assert_eq!(b.num_chambers(), 21);
        assert_eq!(b.num_apartments(), 28);
        // 7 lines, ordered independent triples / 3!
        assert_eq!(7 * 6 * 4 / 6, 28);
        let (c, _) = b.standard_pair();
        assert_eq!(b.apartments_of(c).len(), 8);
        assert!(!b.complex().is_thin());
        let rep = b.counts_report().unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn weyl_distance_basics() {
        let b = Building::new(3, 2).unwrap();
        let (c, cbar) = b.standard_pair();
        assert_eq!(b.w_distance(c, c), vec![0, 1, 2]);
        assert_eq!(b.w_distance(c, cbar), vec![2, 1, 0]);
        let frame = b.coordinate_frame();
        assert_eq!(b.retraction(frame, c, cbar).unwrap(), cbar);
        let off = (0..b.num_chambers())
            .find(|&x| !b.apartment(frame).contains(&x))
            .unwrap();
        assert!(matches!(
            b.retraction(frame, off, c),
            Err(Error::NotInApartment(_))
        ));
        assert!(matches!(
            b.apartment_count_identity(frame, c, c),
            Err(Error::NotOpposite(..))
        ));
    }

    #[test]
    fn polynomials_n3() {
        let b = Building::new(3, 2).unwrap();
        let (polys, rep) = b.hq_polynomials().unwrap();
        assert!(rep.passed(), "{rep}");
        assert_eq!(polys[1].to_string(), "q + q^2");
        assert_eq!(polys[3].to_string(), "q^3");
        let b3 = Building::new(3, 3).unwrap();
        assert!(b3.hq_polynomials().unwrap().1.passed());
        assert!(b.gate_report().passed());
    }

    #[test]
    fn descent_oracle_by_brute_force() {
        // independent count over all words of 0..n with distinct letters
        let n = 4;
        let polys = descent_polynomials(n);
        let mut total = 0;
        for p in &polys {
            total += p.eval_int(1);
        }
        assert_eq!(total, 24);
        for a in 0..4usize {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let w = [a, b, c, d];
                        let mut s = w.to_vec();
                        s.sort_unstable();
                        s.dedup();
                        if s.len() < 4 {
                            continue;
                        }
                        let mut m = 0;
                        for i in 0..3 {
                            if w[i] > w[i + 1] {
                                m |= 1 << i;
                            }
                        }
                        assert!(polys[m].coeffs()[inversions(&w)] > 0);
                    }
                }
            }
        }
    }

    #[test]
    fn errors_and_display() {
        assert!(matches!(Building::new(3, 4), Err(Error::NonPrimeField(4))));
        assert!(matches!(Building::new(5, 2), Err(Error::ScaleExceeded(_))));
        assert_eq!(
            QPolynomial::new(vec![0, 0, 1, 1, 2, 1]).to_string(),
            "q^2 + q^3 + 2q^4 + q^5"
        );
        assert_eq!(QPolynomial::new(vec![1]).to_string(), "1");
        assert_eq!(
            QPolynomial::new(vec![0, 1, 1])
                .reciprocal(3)
                .unwrap()
                .to_string(),
            "q + q^2"
        );
        assert_eq!(q_factorial(4, 2), 315);
        assert_eq!(frame_count(4, 2), 840);
    }
}
