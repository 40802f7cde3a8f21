//! Flag f- and h-vectors, restriction counts and their local versions.
//!
//! Labelled vectors are indexed by a bitmask `J` over the complex's labels
//! (first-appearance order). Unlabelled vectors are indexed by rank
//! `0..=n`.

use crate::complex::{ChamberId, Complex, FaceId};
use crate::error::{Error, Result};
use crate::report::{Check, Report};
use crate::structures::RestrictionFamily;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagVector {
    pub labelled: bool,
    /// Rank of the complex.
    pub n: usize,
    pub f: Vec<i64>,
    pub h: Vec<i64>,
}

/// `binom(n, k)` for any integers, zero outside `0 <= k <= n` except that
/// `binom(-1, 0) = 1`.
pub fn binom(n: i64, k: i64) -> i64 {
    if k == 0 {
        return 1;
    }
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

impl FlagVector {
    fn keys(&self) -> usize {
        if self.labelled {
            1 << self.n
        } else {
            self.n + 1
        }
    }

    /// Inverse of `h_from_f`: `f_J = Σ_{K⊆J} h_K`, or the binomial form.
    pub fn f_from_h(labelled: bool, n: usize, h: &[i64]) -> Vec<i64> {
        if labelled {
            (0..1usize << n)
                .map(|j| submasks(j).map(|k| h[k]).sum())
                .collect()
        } else {
            (0..=n)
                .map(|j| {
                    (0..=j)
                        .map(|k| binom((n - k) as i64, (n - j) as i64) * h[k])
                        .sum()
                })
                .collect()
        }
    }

    pub fn h_from_f(labelled: bool, n: usize, f: &[i64]) -> Vec<i64> {
        if labelled {
            (0..1usize << n)
                .map(|j| {
                    submasks(j)
                        .map(|k| {
                            let sign = if (j ^ k).count_ones() % 2 == 0 { 1 } else { -1 };
                            sign * f[k]
                        })
                        .sum()
                })
                .collect()
        } else {
            let mut h = vec![0i64; n + 1];
            for j in 0..=n {
                let lower: i64 = (0..j)
                    .map(|k| binom((n - k) as i64, (n - j) as i64) * h[k])
                    .sum();
                h[j] = f[j] - lower;
            }
            h
        }
    }

    fn from_f(labelled: bool, n: usize, f: Vec<i64>) -> Result<Self> {
        let h = Self::h_from_f(labelled, n, &f);
        if Self::f_from_h(labelled, n, &h) != f {
            return Err(Error::Inconsistent(
                "f/h inversion does not round-trip".into(),
            ));
        }
        Ok(FlagVector { labelled, n, f, h })
    }

    /// Index of the complementary key: `I \ J` or `n - j`.
    pub fn complement(&self, k: usize) -> usize {
        if self.labelled {
            ((1 << self.n) - 1) ^ k
        } else {
            self.n - k
        }
    }

    pub fn key_name(&self, c: &Complex, k: usize) -> String {
        if self.labelled {
            c.type_name(k as u32)
        } else {
            k.to_string()
        }
    }

    /// `f[J] = x` then `h[J] = x` lines in key order.
    pub fn table(&self, c: &Complex) -> Vec<String> {
        let mut out = Vec::with_capacity(2 * self.keys());
        for (name, v) in [("f", &self.f), ("h", &self.h)] {
            for k in 0..self.keys() {
                out.push(format!("{name}[{}] = {}", self.key_name(c, k), v[k]));
            }
        }
        out
    }
}

fn submasks(j: usize) -> impl Iterator<Item = usize> {
    let mut next = Some(j);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & j) };
        Some(cur)
    })
}

fn key_of(c: &Complex, f: FaceId, labelled: bool) -> usize {
    if labelled {
        c.face_type(f).expect("labelled complex") as usize
    } else {
        c.face_rank(f)
    }
}

fn need_labels(c: &Complex, labelled: bool) -> Result<()> {
    if labelled && !c.is_labelled() {
        return Err(Error::NeedsLabels);
    }
    Ok(())
}

/// Face counts by type (labelled) or by rank, with the derived h-vector.
pub fn flag_vectors(c: &Complex, labelled: bool) -> Result<FlagVector> {
    need_labels(c, labelled)?;
    let n = c.rank();
    let keys = if labelled { 1 << n } else { n + 1 };
    let mut f = vec![0i64; keys];
    for face in 0..c.num_faces() {
        f[key_of(c, face, labelled)] += 1;
    }
    FlagVector::from_f(labelled, n, f)
}

/// Counts of chambers `D` by the type (or rank) of `R_C(D)`.
pub fn beta(
    c: &Complex,
    r: &RestrictionFamily,
    base: ChamberId,
    labelled: bool,
) -> Result<Vec<i64>> {
    need_labels(c, labelled)?;
    let keys = if labelled {
        1 << c.rank()
    } else {
        c.rank() + 1
    };
    let mut out = vec![0i64; keys];
    for d in 0..c.num_chambers() {
        out[key_of(c, r.get(base, d), labelled)] += 1;
    }
    Ok(out)
}

/// Restriction counts from every base chamber agree with the h-vector.
pub fn check_beta(c: &Complex, r: &RestrictionFamily, labelled: bool) -> Result<Report> {
    let fv = flag_vectors(c, labelled)?;
    let mut check = Check::new(if labelled { "beta=h" } else { "beta=h(rank)" });
    for base in 0..c.num_chambers() {
        let b = beta(c, r, base, labelled)?;
        check.expect(b == fv.h, || {
            let k = (0..b.len()).find(|&k| b[k] != fv.h[k]).unwrap_or(0);
            vec![
                format!("C={}", c.chamber_name(base)),
                format!("J={}", fv.key_name(c, k)),
                format!("beta={}", b[k]),
                format!("h={}", fv.h[k]),
            ]
        });
    }
    let mut report = Report::new();
    report.push(check);
    Ok(report)
}

/// `h[D][J] = |{C : R_C(D) has type J}|` and `f[D][J] = Σ_{K⊆J} h[D][K]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFlagTable {
    pub labelled: bool,
    pub n: usize,
    pub h: Vec<Vec<i64>>,
    pub f: Vec<Vec<i64>>,
}

pub fn local_flags(c: &Complex, r: &RestrictionFamily, labelled: bool) -> Result<LocalFlagTable> {
    need_labels(c, labelled)?;
    let n = c.rank();
    let keys = if labelled { 1 << n } else { n + 1 };
    let chambers = c.num_chambers();
    let mut h = vec![vec![0i64; keys]; chambers];
    for base in 0..chambers {
        for (d, row) in h.iter_mut().enumerate() {
            row[key_of(c, r.get(base, d), labelled)] += 1;
        }
    }
    let f = h
        .iter()
        .map(|row| FlagVector::f_from_h(labelled, n, row))
        .collect();
    Ok(LocalFlagTable { labelled, n, h, f })
}

impl LocalFlagTable {
    /// Per-chamber sums and the averaging identities against `global`.
    pub fn check(&self, c: &Complex, global: &FlagVector) -> Report {
        let chambers = self.h.len() as i64;
        let mut sum = Check::new("local-sum");
        let mut inv = Check::new("local-f");
        for d in 0..self.h.len() {
            sum.expect(self.h[d].iter().sum::<i64>() == chambers, || {
                vec![format!("D={}", c.chamber_name(d))]
            });
            let back = FlagVector::h_from_f(self.labelled, self.n, &self.f[d]);
            inv.expect(back == self.h[d], || {
                vec![format!("D={}", c.chamber_name(d))]
            });
        }
        let mut avg_h = Check::new("average-h");
        let mut avg_f = Check::new("average-f");
        for k in 0..global.h.len() {
            let th: i64 = self.h.iter().map(|row| row[k]).sum();
            let tf: i64 = self.f.iter().map(|row| row[k]).sum();
            avg_h.expect(th == chambers * global.h[k], || {
                vec![format!("J={}", global.key_name(c, k)), format!("sum={th}")]
            });
            avg_f.expect(tf == chambers * global.f[k], || {
                vec![format!("J={}", global.key_name(c, k)), format!("sum={tf}")]
            });
        }
        let mut report = Report::new();
        for check in [sum, inv, avg_h, avg_f] {
            report.push(check);
        }
        report
    }

    /// `h_J(D) = h_{I∖J}(D)` for every chamber.
    pub fn check_finer_ds(&self, c: &Complex) -> Check {
        let mut check = Check::new("finer-DS");
        let keys = self.h.first().map_or(0, Vec::len);
        for (d, row) in self.h.iter().enumerate() {
            for k in 0..keys {
                let comp = if self.labelled {
                    (keys - 1) ^ k
                } else {
                    self.n - k
                };
                if k > comp {
                    continue;
                }
                check.expect(row[k] == row[comp], || {
                    vec![format!("D={}", c.chamber_name(d)), format!("J={k}")]
                });
            }
        }
        check
    }

    /// Every chamber has the same local vector as the complex.
    pub fn is_uniform(&self, global: &FlagVector) -> bool {
        self.h.iter().all(|row| row == &global.h)
    }
}

/// `h_J = h_{I∖J}`, or `h_j = h_{n-j}` unlabelled. One info line per pair.
pub fn ds_check(c: &Complex, fv: &FlagVector) -> Report {
    let mut report = Report::new();
    let mut check = Check::new(if fv.labelled { "DS" } else { "DS(rank)" });
    for k in 0..fv.h.len() {
        let comp = fv.complement(k);
        if k > comp {
            continue;
        }
        let ok = fv.h[k] == fv.h[comp];
        report.info(format!(
            "DS {} | {}: {} {} {}",
            fv.key_name(c, k),
            fv.key_name(c, comp),
            fv.h[k],
            if ok { "=" } else { "!=" },
            fv.h[comp]
        ));
        check.expect(ok, || {
            vec![
                format!("J={}", fv.key_name(c, k)),
                format!("h={}", fv.h[k]),
                format!("comp={}", fv.key_name(c, comp)),
                format!("h={}", fv.h[comp]),
            ]
        });
    }
    report.push(check);
    report
}

/// `Σ_{i=0}^{k} binom(n-i-1, k-i) β_i` for rank counts `beta`.
pub fn skeleton_formula(beta: &[i64], k: usize) -> i64 {
    let n = beta.len() as i64 - 1;
    (0..=k)
        .map(|i| binom(n - i as i64 - 1, (k - i) as i64) * beta[i])
        .sum()
}

/// Spheres in the skeleton of faces of rank at most `k`, checked against
/// its reduced Euler characteristic.
pub fn skeleton_spheres(c: &Complex, beta: &[i64], k: usize) -> Result<i64> {
    if k == 0 || k > c.rank() {
        return Err(Error::BadParameter(format!(
            "skeleton rank {k} outside 1..={}",
            c.rank()
        )));
    }
    if beta.len() != c.rank() + 1 {
        return Err(Error::RankMismatch {
            expected: c.rank() + 1,
            found: beta.len(),
        });
    }
    let count = skeleton_formula(beta, k);
    let sign = if k % 2 == 1 { 1 } else { -1 };
    let chi = c.reduced_euler(k);
    if chi != sign * count {
        return Err(Error::EulerMismatch(format!(
            "skeleton of rank {k}: reduced euler {chi}, formula {count}"
        )));
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::metric_structure;
    use proptest::prelude::*;

    fn labelled_hexagon() -> Complex {
        let mut text = String::new();
        for i in 0..6 {
            text += &format!("vertex v{i} {}\n", if i % 2 == 0 { "s" } else { "t" });
        }
        for i in 0..6 {
            text += &format!("chamber v{i} v{}\n", (i + 1) % 6);
        }
        Complex::parse(&text).unwrap()
    }

    #[test]
    fn hexagon_flags() {
        let h = labelled_hexagon();
        let fv = flag_vectors(&h, true).unwrap();
        assert_eq!(fv.f, vec![1, 3, 3, 6]);
        assert_eq!(fv.h, vec![1, 2, 2, 1]);
        assert_eq!(fv.table(&h)[7], "h[{s,t}] = 1");
        let m = metric_structure(&h).unwrap();
        assert!(check_beta(&h, &m.restrictions, true).unwrap().passed());
        let local = local_flags(&h, &m.restrictions, true).unwrap();
        assert!(local.check(&h, &fv).passed());
        assert!(local.is_uniform(&fv));
        assert!(local.check_finer_ds(&h).passed());
        assert!(ds_check(&h, &fv).passed());
    }

    #[test]
    fn ngon_unlabelled() {
        for n in 3..9 {
            let ch: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
            let c = Complex::from_chambers(&ch).unwrap();
            let fv = flag_vectors(&c, false).unwrap();
            assert_eq!(fv.f, vec![1, n as i64, n as i64]);
            assert_eq!(fv.h, vec![1, n as i64 - 2, 1]);
            assert!(matches!(flag_vectors(&c, true), Err(Error::NeedsLabels)));
            assert_eq!(skeleton_spheres(&c, &fv.h, 1).unwrap(), n as i64 - 1);
            assert_eq!(skeleton_spheres(&c, &fv.h, 2).unwrap(), 1);
        }
    }

    #[test]
    fn single_chamber_is_a_cone() {
        let c = Complex::parse("vertex a x\nvertex b y\nvertex c z\nchamber a b c\n").unwrap();
        let fv = flag_vectors(&c, true).unwrap();
        assert_eq!(fv.h[0], 1);
        assert!(fv.h[1..].iter().all(|&x| x == 0));
    }

    #[test]
    fn binomial_conventions() {
        assert_eq!(binom(-1, 0), 1);
        assert_eq!(binom(0, 0), 1);
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(2, 3), 0);
        assert_eq!(binom(-1, 1), 0);
    }

    proptest! {
        #[test]
        fn inversion_round_trips(h in proptest::collection::vec(-50i64..50, 8), u in proptest::collection::vec(-50i64..50, 5)) {
            let f = FlagVector::f_from_h(true, 3, &h);
            prop_assert_eq!(FlagVector::h_from_f(true, 3, &f), h);
            let f = FlagVector::f_from_h(false, 4, &u);
            prop_assert_eq!(FlagVector::h_from_f(false, 4, &f), u);
        }

        #[test]
        fn aggregation(h in proptest::collection::vec(0i64..20, 8)) {
            // rank aggregates of a labelled vector solve the unlabelled system
            let f = FlagVector::f_from_h(true, 3, &h);
            let agg = |v: &[i64]| (0..=3).map(|j| (0..8usize).filter(|k| k.count_ones() as usize == j).map(|k| v[k]).sum()).collect::<Vec<i64>>();
            prop_assert_eq!(FlagVector::h_from_f(false, 3, &agg(&f)), agg(&h));
        }
    }
}
