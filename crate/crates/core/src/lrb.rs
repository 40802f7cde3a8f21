//! Left regular bands: free bands on letters, covector semigroups of
//! arrangements, and explicit product tables.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;

use crate::arrangement::FaceEnumeration;
use crate::complex::{ChamberId, FaceId};
use crate::error::{Error, Result};
use crate::report::{Check, Report};
use crate::structures::{check_p, FaceSystem, ProjectionTable};

/// Largest alphabet for the free band.
pub const MAX_FREE_LETTERS: usize = 7;

#[derive(Debug, Clone)]
enum Product {
    Table(Vec<Vec<usize>>),
    Words {
        words: Vec<Vec<u8>>,
        index: HashMap<Vec<u8>, usize>,
    },
    Signs(FaceEnumeration),
}

/// A finite semigroup presented by its elements and product.
#[derive(Debug)]
pub struct Lrb {
    names: Vec<String>,
    product: Product,
    supports: Option<Vec<u64>>,
    chambers: Vec<usize>,
    chamber_of: Vec<Option<ChamberId>>,
    order: OnceLock<Vec<FixedBitSet>>,
}

impl Lrb {
    fn assemble(names: Vec<String>, product: Product, supports: Option<Vec<u64>>) -> Self {
        let mut lrb = Lrb {
            names,
            product,
            supports,
            chambers: Vec::new(),
            chamber_of: Vec::new(),
            order: OnceLock::new(),
        };
        let chambers: Vec<usize> = match &lrb.product {
            Product::Words { words, .. } => {
                let top = words.iter().map(Vec::len).max().unwrap_or(0);
                (0..lrb.len()).filter(|&x| words[x].len() == top).collect()
            }
            Product::Signs(f) => f.chambers().collect(),
            Product::Table(_) => (0..lrb.len())
                .filter(|&x| (0..lrb.len()).all(|y| lrb.mul(x, y) == x))
                .collect(),
        };
        let mut chamber_of = vec![None; lrb.len()];
        for (i, &x) in chambers.iter().enumerate() {
            chamber_of[x] = Some(i);
        }
        lrb.chambers = chambers;
        lrb.chamber_of = chamber_of;
        lrb
    }

    /// The free band with identity on `n` letters: duplicate-free words,
    /// multiplied by concatenating and deleting repeated letters.
    pub fn free(n: usize) -> Result<Self> {
        if n > MAX_FREE_LETTERS {
            return Err(Error::ScaleExceeded(format!(
                "free band on {n} > {MAX_FREE_LETTERS} letters"
            )));
        }
        let mut words: Vec<Vec<u8>> = vec![Vec::new()];
        let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &layer {
                for letter in 1..=n as u8 {
                    if !w.contains(&letter) {
                        let mut v = w.clone();
                        v.push(letter);
                        next.push(v);
                    }
                }
            }
            words.extend(next.iter().cloned());
            layer = next;
        }
        let names = words.iter().map(|w| word_name(w)).collect();
        let supports = words
            .iter()
            .map(|w| w.iter().fold(0u64, |m, &l| m | 1 << l))
            .collect();
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Ok(Lrb::assemble(
            names,
            Product::Words { words, index },
            Some(supports),
        ))
    }

    /// The covector semigroup of an arrangement under composition.
    pub fn from_faces(faces: FaceEnumeration) -> Result<Self> {
        if faces.covectors.first().map_or(0, |s| s.0.len()) > 64 {
            return Err(Error::ScaleExceeded("more than 64 hyperplanes".into()));
        }
        for x in 0..faces.len() {
            for y in 0..faces.len() {
                faces.product(x, y)?;
            }
        }
        let names = faces.covectors.iter().map(ToString::to_string).collect();
        let supports = faces.covectors.iter().map(|s| s.support()).collect();
        Ok(Lrb::assemble(names, Product::Signs(faces), Some(supports)))
    }

    /// An explicit product table over named elements.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::EmptyInput("no elements".into()));
        }
        if table.len() != n
            || table
                .iter()
                .any(|r| r.len() != n || r.iter().any(|&z| z >= n))
        {
            return Err(Error::ProductUndefined(
                "table is not square over the elements".into(),
            ));
        }
        Ok(Lrb::assemble(names, Product::Table(table), None))
    }

    /// `elem <name>` and `prod <x> <y> -> <z>` lines; every product required.
    pub fn parse(text: &str) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[..] {
                ["elem", name] => {
                    if index.insert(name.to_string(), names.len()).is_some() {
                        return Err(Error::Duplicate(format!("element {name}")));
                    }
                    names.push(name.to_string());
                }
                ["prod", x, y, "->", z] => entries.push((ln, x, y, z)),
                _ => {
                    return Err(Error::Parse {
                        line: ln,
                        message: "expected `elem <name>` or `prod <x> <y> -> <z>`".into(),
                    })
                }
            }
        }
        let n = names.len();
        let mut table = vec![vec![usize::MAX; n]; n];
        for (ln, x, y, z) in entries {
            let get = |s: &str| {
                index.get(s).copied().ok_or_else(|| Error::Parse {
                    line: ln,
                    message: format!("unknown element {s}"),
                })
            };
            let (x, y, z) = (get(x)?, get(y)?, get(z)?);
            if table[x][y] != usize::MAX {
                return Err(Error::Parse {
                    line: ln,
                    message: "duplicate product".into(),
                });
            }
            table[x][y] = z;
        }
        for x in 0..n {
            for y in 0..n {
                if table[x][y] == usize::MAX {
                    return Err(Error::ProductUndefined(format!(
                        "{} {}",
                        names[x], names[y]
                    )));
                }
            }
        }
        Lrb::from_table(names, table)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for name in &self.names {
            let _ = writeln!(out, "elem {name}");
        }
        for x in 0..self.len() {
            for y in 0..self.len() {
                let _ = writeln!(
                    out,
                    "prod {} {} -> {}",
                    self.names[x],
                    self.names[y],
                    self.names[self.mul(x, y)]
                );
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Element for a word given as letters.
    pub fn word(&self, letters: &[u8]) -> Option<usize> {
        match &self.product {
            Product::Words { index, .. } => index.get(letters).copied(),
            _ => None,
        }
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        match &self.product {
            Product::Table(t) => t[x][y],
            Product::Words { words, index } => {
                let mut w = words[x].clone();
                for &l in &words[y] {
                    if !w.contains(&l) {
                        w.push(l);
                    }
                }
                index[&w]
            }
            Product::Signs(f) => f.product(x, y).expect("closure verified at construction"),
        }
    }

    pub fn identity(&self) -> Option<usize> {
        (0..self.len())
            .find(|&e| (0..self.len()).all(|x| self.mul(e, x) == x && self.mul(x, e) == x))
    }

    /// `x <= y` iff `xy = y`.
    pub fn le(&self, x: usize, y: usize) -> bool {
        self.mul(x, y) == y
    }

    fn order_rows(&self) -> &Vec<FixedBitSet> {
        self.order.get_or_init(|| {
            (0..self.len())
                .map(|x| {
                    let mut row = FixedBitSet::with_capacity(self.len());
                    for y in 0..self.len() {
                        if self.le(x, y) {
                            row.insert(y);
                        }
                    }
                    row
                })
                .collect()
        })
    }

    /// Elements strictly below `y` with nothing strictly between.
    pub fn lower_covers(&self, y: usize) -> Vec<usize> {
        let rows = self.order_rows();
        let below: Vec<usize> = (0..self.len())
            .filter(|&x| x != y && rows[x].contains(y))
            .collect();
        below
            .iter()
            .copied()
            .filter(|&x| !below.iter().any(|&z| z != x && rows[x].contains(z)))
            .collect()
    }

    pub fn chambers(&self) -> &[usize] {
        &self.chambers
    }

    pub fn chamber_id(&self, x: usize) -> Option<ChamberId> {
        self.chamber_of[x]
    }

    pub fn explicit_supports(&self) -> Option<&[u64]> {
        self.supports.as_deref()
    }

    /// `supp x <= supp y`, from explicit supports or as `yx = y`.
    pub fn supp_le(&self, x: usize, y: usize) -> bool {
        match &self.supports {
            Some(s) => s[x] & !s[y] == 0,
            None => self.mul(y, x) == y,
        }
    }

    /// Rank of every element by longest chains from below; errors unless
    /// every cover raises rank by one and all chambers share a rank.
    pub fn ranks(&self) -> Result<Vec<usize>> {
        let rows = self.order_rows();
        let n = self.len();
        let mut by_size: Vec<usize> = (0..n).collect();
        let below_count: Vec<usize> = (0..n)
            .map(|y| (0..n).filter(|&x| rows[x].contains(y)).count())
            .collect();
        by_size.sort_by_key(|&y| below_count[y]);
        let mut rank = vec![0usize; n];
        let covers: Vec<Vec<usize>> = (0..n).map(|y| self.lower_covers(y)).collect();
        for &y in &by_size {
            rank[y] = covers[y].iter().map(|&x| rank[x] + 1).max().unwrap_or(0);
        }
        for y in 0..n {
            if let Some(&x) = covers[y].iter().find(|&&x| rank[x] + 1 != rank[y]) {
                return Err(Error::NotGraded(format!(
                    "{} covers {} across ranks {} and {}",
                    self.names[y], self.names[x], rank[y], rank[x]
                )));
            }
        }
        if let Some(&c0) = self.chambers.first() {
            if let Some(&c) = self.chambers.iter().find(|&&c| rank[c] != rank[c0]) {
                return Err(Error::NotGraded(format!(
                    "chambers {} and {} have ranks {} and {}",
                    self.names[c0], self.names[c], rank[c0], rank[c]
                )));
            }
        }
        Ok(rank)
    }

    /// Projection table `FC` over the chambers.
    pub fn projections(&self) -> Result<ProjectionTable> {
        let table = (0..self.len())
            .map(|f| {
                self.chambers
                    .iter()
                    .map(|&c| {
                        let p = self.mul(f, c);
                        self.chamber_of[p].ok_or_else(|| {
                            Error::ProductUndefined(format!(
                                "{}·{} = {} is not a chamber",
                                self.names[f], self.names[c], self.names[p]
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ProjectionTable { table })
    }

    /// Elements whose support lies below that of `x`.
    pub fn support_ideal(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.supp_le(y, x)).collect()
    }

    /// The covectors, for a band built from an arrangement.
    pub fn faces(&self) -> Option<&FaceEnumeration> {
        match &self.product {
            Product::Signs(f) => Some(f),
            _ => None,
        }
    }

    /// The sub-band on `support_ideal(x)`, in the same element order.
    pub fn below_support(&self, x: usize) -> Lrb {
        let elems = self.support_ideal(x);
        let local: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &y)| (y, i)).collect();
        let table = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| local[&self.mul(a, b)]).collect())
            .collect();
        let names = elems.iter().map(|&y| self.names[y].clone()).collect();
        let supports = self
            .supports
            .as_ref()
            .map(|s| elems.iter().map(|&y| s[y]).collect());
        Lrb::assemble(names, Product::Table(table), supports)
    }
}

fn word_name(w: &[u8]) -> String {
    let parts: Vec<String> = w.iter().map(u8::to_string).collect();
    format!("({})", parts.join(","))
}

impl FaceSystem for Lrb {
    fn num_faces(&self) -> usize {
        self.len()
    }
    fn num_chambers(&self) -> usize {
        self.chambers.len()
    }
    fn empty_face(&self) -> FaceId {
        self.identity().expect("band with identity")
    }
    fn chamber_face(&self, c: ChamberId) -> FaceId {
        self.chambers[c]
    }
    fn le(&self, f: FaceId, g: FaceId) -> bool {
        self.order_rows()[f].contains(g)
    }
    fn faces_below(&self, c: ChamberId) -> Vec<FaceId> {
        let top = self.chambers[c];
        (0..self.len())
            .filter(|&x| FaceSystem::le(self, x, top))
            .collect()
    }
    fn facets(&self, c: ChamberId) -> Vec<FaceId> {
        self.lower_covers(self.chambers[c])
    }
    fn chambers_above(&self, f: FaceId) -> Vec<ChamberId> {
        (0..self.chambers.len())
            .filter(|&c| FaceSystem::le(self, f, self.chambers[c]))
            .collect()
    }
    fn face_label(&self, f: FaceId) -> String {
        self.names[f].clone()
    }
    fn chamber_label(&self, c: ChamberId) -> String {
        self.names[self.chambers[c]].clone()
    }
}

/// Band identities, support homomorphism, and the projection axioms on the
/// face poset.
pub fn check_lrb(s: &Lrb) -> Report {
    let n = s.len();
    let name = |x: usize| s.name(x).to_string();
    let mut idem = Check::new("idempotent");
    let mut deletion = Check::new("deletion");
    let mut assoc = Check::new("associative");
    let mut hom = Check::new("supp-hom");
    let mut sdel = Check::new("supp-delete");
    let mut ideal = Check::new("left-ideal");
    let mut grow = Check::new("F<=FF'");
    for x in 0..n {
        idem.expect(s.mul(x, x) == x, || vec![tok("x", name(x))]);
    }
    for x in 0..n {
        for y in 0..n {
            let xy = s.mul(x, y);
            deletion.expect(s.mul(xy, x) == xy, || {
                vec![tok("x", name(x)), tok("y", name(y))]
            });
            for z in 0..n {
                assoc.expect(s.mul(xy, z) == s.mul(x, s.mul(y, z)), || {
                    vec![tok("x", name(x)), tok("y", name(y)), tok("z", name(z))]
                });
            }
            let joined = match s.explicit_supports() {
                Some(m) => m[xy] == m[x] | m[y],
                None => {
                    s.supp_le(x, xy)
                        && s.supp_le(y, xy)
                        && (0..n).all(|z| !(s.supp_le(x, z) && s.supp_le(y, z)) || s.supp_le(xy, z))
                }
            };
            hom.expect(joined, || vec![tok("x", name(x)), tok("y", name(y))]);
            if s.supp_le(y, x) {
                sdel.expect(xy == x, || vec![tok("x", name(x)), tok("y", name(y))]);
            }
            grow.expect(s.le(x, xy), || vec![tok("F", name(x)), tok("F'", name(y))]);
        }
        for &c in s.chambers() {
            let p = s.mul(x, c);
            ideal.expect(s.chamber_id(p).is_some(), || {
                vec![tok("F", name(x)), tok("C", name(c))]
            });
        }
    }
    let mut report = Report::new();
    for check in [idem, deletion, assoc, hom, sdel, ideal, grow] {
        report.push(check);
    }
    match (s.identity(), s.projections()) {
        (Some(_), Ok(p)) => report.extend(check_p(s, &p)),
        (None, _) => report.info("no identity element; projection axioms skipped"),
        (_, Err(e)) => report.info(format!("projection axioms skipped: {e}")),
    }
    report
}

fn tok(key: &str, value: String) -> String {
    format!("{key}={value}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::Arrangement;

    #[test]
    fn free_product_example() {
        let f6 = Lrb::free(6).unwrap();
        let x = f6.word(&[2, 1]).unwrap();
        let y = f6.word(&[3, 5, 4, 1, 6]).unwrap();
        assert_eq!(f6.name(f6.mul(x, y)), "(2,1,3,5,4,6)");
        let e = f6.identity().unwrap();
        assert_eq!(f6.name(e), "()");
        assert_eq!((f6.mul(x, e), f6.mul(e, x)), (x, x));
        assert!(matches!(Lrb::free(8), Err(Error::ScaleExceeded(_))));
    }

    #[test]
    fn free_three() {
        let f3 = Lrb::free(3).unwrap();
        // Σ_l 3!/(3-l)! words
        let expected: usize = (0..=3).map(|l| (4 - l..=3).product::<usize>()).sum();
        assert_eq!(f3.len(), expected);
        assert_eq!(f3.len(), 16);
        assert_eq!(f3.chambers().len(), 6);
        for &c in f3.chambers() {
            assert_eq!(f3.lower_covers(c).len(), 1);
        }
        let rep = check_lrb(&f3);
        for id in [
            "idempotent",
            "deletion",
            "associative",
            "supp-hom",
            "supp-delete",
            "P1(i)",
            "P1(ii)",
            "P1(iii)",
            "P3",
        ] {
            assert!(rep.get(id).unwrap().passed(), "{id}: {rep}");
        }
        let p2 = rep.get("P2").unwrap();
        assert!(!p2.passed());
        assert!(p2.has_witness(&["F=(1)", "C=(1,3,2)", "D=(1,2,3)"]));
        assert_eq!(f3.ranks().unwrap()[f3.word(&[2, 3]).unwrap()], 2);
    }

    #[test]
    fn covector_band() {
        let a = Arrangement::boolean(3).unwrap();
        let s = Lrb::from_faces(a.enumerate_faces().unwrap()).unwrap();
        let rep = check_lrb(&s);
        assert!(rep.passed(), "{rep}");
        let ranks = s.ranks().unwrap();
        assert_eq!(ranks.iter().filter(|&&r| r == 1).count(), 6);
    }

    #[test]
    fn planted_deletion_failure() {
        // {e, a, b}: ab = a, ba = b but aba forced to b
        let names = vec!["e".to_string(), "a".into(), "b".into()];
        let table = vec![vec![0, 1, 2], vec![1, 1, 2], vec![2, 1, 2]];
        let s = Lrb::from_table(names, table).unwrap();
        let rep = check_lrb(&s);
        assert!(!rep.get("deletion").unwrap().passed());
        let text = s.to_text();
        let back = Lrb::parse(&text).unwrap();
        assert_eq!(back.to_text(), text);
        assert!(matches!(
            Lrb::parse("elem a\n"),
            Err(Error::ProductUndefined(_))
        ));
    }

    #[test]
    fn ungraded_rejected() {
        // e < a < c and e < c directly with b: chain e<a<c plus e<b with b maximal
        let names = vec!["e".to_string(), "a".into(), "c".into(), "b".into()];
        // c and b both chambers; a below c; b directly above e
        let table = vec![
            vec![0, 1, 2, 3],
            vec![1, 1, 2, 2],
            vec![2, 2, 2, 2],
            vec![3, 3, 3, 3],
        ];
        let s = Lrb::from_table(names, table).unwrap();
        assert!(matches!(s.ranks(), Err(Error::NotGraded(_))));
    }
}
