//! End-to-end acceptance run: one PASS/FAIL line per criterion, each under
//! its time limit.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use shellings::arrangement::{Arrangement, CoxeterFamily};
use shellings::buildings::Building;
use shellings::catalog::{self, CatalogEntry};
use shellings::flags::{beta, ds_check, flag_vectors, local_flags, skeleton_spheres};
use shellings::lrb::{check_lrb, Lrb};
use shellings::shelling::{restriction_to_order, reverse_shelling_check};
use shellings::structures::{
    check_p, check_r, check_s, metric_structure, p_to_r, r_to_s, s_to_p, S2Mode, SOptions,
};
use shellings::walks::{check_commutativity, rank3_harness, uniform_weights, walk, Class, Graded};
use shellings::Complex;

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return i64::from(k == 0 && n == -1);
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn thin_entries() -> Vec<CatalogEntry> {
    let mut refs: Vec<String> = vec!["hexagon".into(), "triangle".into()];
    refs.extend((3..=8).map(|n| format!("ngon:{n}")));
    refs.extend((2..=4).map(|d| format!("simplex:{d}")));
    refs.extend(["boolean:3", "coxeter:A3", "coxeter:B3"].map(String::from));
    refs.iter().map(|r| catalog::resolve(r).unwrap()).collect()
}

/// Words without repeats; the product appends unseen letters.
fn free_product(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut w = a.to_vec();
    for &l in b {
        if !w.contains(&l) {
            w.push(l);
        }
    }
    w
}

fn word_name(w: &[u8]) -> String {
    let parts: Vec<String> = w.iter().map(|l| l.to_string()).collect();
    format!("({})", parts.join(","))
}

fn criterion_1() {
    let f6 = Lrb::free(6).unwrap();
    let x = f6.index_of("(2,1)").unwrap();
    let y = f6.index_of("(3,5,4,1,6)").unwrap();
    assert_eq!(f6.name(f6.mul(x, y)), "(2,1,3,5,4,6)");
    assert_eq!(
        word_name(&free_product(&[2, 1], &[3, 5, 4, 1, 6])),
        "(2,1,3,5,4,6)"
    );

    let f3 = Lrb::free(3).unwrap();
    // injective words on 3 letters
    let count: usize = (0..=3).map(|k| (3 - k + 1..=3).product::<usize>()).sum();
    assert_eq!(f3.len(), count);
    assert_eq!(f3.len(), 16);
    assert_eq!(f3.chambers().len(), 6);
    for a in 0..f3.len() {
        for b in 0..f3.len() {
            let wa = parse_word(f3.name(a));
            let wb = parse_word(f3.name(b));
            assert_eq!(f3.name(f3.mul(a, b)), word_name(&free_product(&wa, &wb)));
        }
    }
    let report = check_lrb(&f3);
    let p2 = report.get("P2").unwrap();
    assert!(!p2.passed());
    assert!(!p2.witnesses.is_empty());
}

fn parse_word(name: &str) -> Vec<u8> {
    name.trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().unwrap())
        .collect()
}

fn criterion_2() {
    let mut refs: Vec<String> = vec!["hexagon".into()];
    refs.extend((5..=8).map(|n| format!("ngon:{n}")));
    refs.extend(["coxeter:A3", "coxeter:B3"].map(String::from));
    for r in refs {
        let e = catalog::resolve(&r).unwrap();
        let c = &e.complex;
        let st = e.structures().unwrap();
        let p = &st.projections;
        let round = s_to_p(c, &r_to_s(c, &p_to_r(c, p)).unwrap()).unwrap();
        for f in 0..c.num_faces() {
            for x in 0..c.num_chambers() {
                assert_eq!(
                    round.get(f, x),
                    p.get(f, x),
                    "{r}: F={} C={}",
                    c.face_name(f),
                    c.chamber_name(x)
                );
            }
        }
        assert!(check_p(c, p).passed(), "{r} P");
        assert!(check_r(c, &st.restrictions).passed(), "{r} R");
        let opts = if e.arrangement.is_some() {
            SOptions {
                mode: S2Mode::Sampled,
                cap: 200,
                seed: 7,
            }
        } else {
            SOptions::default()
        };
        let s = check_s(c, &st.orders, opts);
        assert!(s.passed(), "{r} S: {s}");
    }
}

/// Distances by breadth-first search over shared facets.
fn bfs(c: &Complex, from: usize) -> Vec<usize> {
    let n = c.num_chambers();
    let mut dist = vec![usize::MAX; n];
    dist[from] = 0;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        for y in 0..n {
            let shared = c
                .chamber(x)
                .iter()
                .filter(|v| c.chamber(y).contains(v))
                .count();
            if shared + 1 == c.rank() && dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Gate oracle: every residue has a unique nearest chamber that lies on a
/// geodesic to every other chamber of the residue.
fn gated(c: &Complex) -> bool {
    let n = c.num_chambers();
    let dist: Vec<Vec<usize>> = (0..n).map(|x| bfs(c, x)).collect();
    (0..c.num_faces()).all(|f| {
        let res = c.residue(f);
        (0..n).all(|x| {
            let best = res.iter().map(|&y| dist[x][y]).min().unwrap();
            let near: Vec<usize> = res
                .iter()
                .copied()
                .filter(|&y| dist[x][y] == best)
                .collect();
            near.len() == 1 && res.iter().all(|&y| dist[x][y] == best + dist[near[0]][y])
        })
    })
}

fn criterion_3() {
    let mut refs: Vec<String> = vec!["hexagon".into(), "triangle".into(), "petersen".into()];
    refs.extend((3..=8).map(|n| format!("ngon:{n}")));
    refs.extend((2..=4).map(|d| format!("simplex:{d}")));
    refs.extend(["boolean:3", "coxeter:A3", "coxeter:B3", "building:3:2"].map(String::from));
    for r in &refs {
        let e = catalog::resolve(r).unwrap();
        let c = &e.complex;
        let gate = c.check_gate_property().passed();
        assert_eq!(gate, gated(c), "{r}: gate oracle");
        assert_eq!(metric_structure(c).is_ok(), gate, "{r}");
    }
    let e = catalog::gen_petersen().unwrap();
    assert!(metric_structure(&e.complex).is_err());
    let report = catalog::check_petersen(&e);
    assert!(report.info[0].ends_with("10 vertices, 15 chambers, 10 apartments"));
    for id in [
        "counts",
        "apartments-per-chamber=4",
        "apartment-is-6-cycle",
        "two-nearest-two-apartments",
    ] {
        assert!(report.get(id).unwrap().passed(), "{id}");
    }
    let gate = report.get("gate").unwrap();
    assert!(!gate.passed());
    let w = &gate.witnesses[0];
    let nearest = w.iter().find_map(|t| t.strip_prefix("nearest=")).unwrap();
    assert_eq!(nearest.split('|').count(), 2);
}

fn criterion_4() {
    for e in thin_entries() {
        let Ok(st) = e.structures() else { continue };
        let c = &e.complex;
        for base in 0..c.num_chambers() {
            let refined = restriction_to_order(c, &st.restrictions.r[base], true).unwrap();
            let plain = restriction_to_order(c, &st.restrictions.r[base], false).unwrap();
            assert!(
                refined.same_order(&plain),
                "{} C={}",
                e.name,
                c.chamber_name(base)
            );
        }
    }
}

fn criterion_5() {
    let e = catalog::hexagon().unwrap();
    let c = &e.complex;
    // f by types, then alternating inversion over submasks
    let mut f = [0i64; 4];
    for face in 0..c.num_faces() {
        let mask: usize = c
            .face(face)
            .iter()
            .map(|&v| 1usize << c.vertex_type(v).unwrap())
            .sum();
        f[mask] += 1;
    }
    let h: Vec<i64> = (0..4usize)
        .map(|j| {
            (0..4usize)
                .filter(|k| k & !j == 0)
                .map(|k| {
                    let sign = if (j ^ k).count_ones() % 2 == 0 { 1 } else { -1 };
                    sign * f[k]
                })
                .sum()
        })
        .collect();
    assert_eq!(h, vec![1, 2, 2, 1]);
    assert_eq!(flag_vectors(c, true).unwrap().h, h);
    let st = e.structures().unwrap();
    for base in 0..c.num_chambers() {
        assert_eq!(beta(c, &st.restrictions, base, true).unwrap(), h);
    }

    let b = catalog::resolve("boolean:3").unwrap();
    assert_eq!(b.complex.num_chambers(), 8);
    let st = b.structures().unwrap();
    let table = local_flags(&b.complex, &st.restrictions, false).unwrap();
    for row in &table.h {
        assert_eq!(row, &(0..=3).map(|j| binom(3, j)).collect::<Vec<_>>());
    }
}

fn criterion_6() {
    for e in thin_entries() {
        let c = &e.complex;
        let orders: Vec<Vec<usize>> = match e.structures() {
            Ok(st) => st
                .orders
                .orders
                .iter()
                .map(|o| o.first_extension())
                .collect(),
            Err(_) => vec![(0..c.num_chambers()).collect()],
        };
        for seq in orders {
            let report = reverse_shelling_check(c, &seq).unwrap();
            assert!(report.passed(), "{}: {report}", e.name);
        }
        let fv = flag_vectors(c, c.is_labelled()).unwrap();
        assert!(ds_check(c, &fv).passed(), "{}", e.name);
        for k in 0..fv.h.len() {
            assert_eq!(fv.h[k], fv.h[fv.complement(k)], "{}", e.name);
        }
    }
    let b = Building::new(3, 2).unwrap();
    let fv = flag_vectors(b.complex(), true).unwrap();
    assert_eq!((fv.h[0], fv.h[3]), (1, 8));
    assert!(!ds_check(b.complex(), &fv).passed());
}

fn commutativity(family: CoxeterFamily, n: usize) -> (usize, usize, Vec<(String, bool)>) {
    let a = Arrangement::coxeter(family, n).unwrap();
    let faces = a.enumerate_faces().unwrap();
    let chambers = faces.num_chambers();
    let lrb = Lrb::from_faces(faces).unwrap();
    let g = Graded::from_lrb(&lrb).unwrap();
    let report = check_commutativity(&g, false).unwrap();
    let verdicts = report
        .checks
        .iter()
        .map(|c| (c.id.clone(), c.passed()))
        .collect();
    (a.normals.len(), chambers, verdicts)
}

fn criterion_7() {
    for (fam, n) in [(CoxeterFamily::A, 4), (CoxeterFamily::B, 3)] {
        let (_, _, verdicts) = commutativity(fam, n);
        assert_eq!(verdicts.len(), 3);
        assert!(
            verdicts.iter().all(|(_, ok)| *ok),
            "{fam:?}{n}: {verdicts:?}"
        );
    }
    let (hyperplanes, chambers, verdicts) = commutativity(CoxeterFamily::D, 4);
    assert_eq!((hyperplanes, chambers), (12, 192));
    assert_eq!(verdicts.len(), 6);
    assert!(
        verdicts.iter().any(|(_, ok)| !ok),
        "D4 satisfies every C(i,j): {verdicts:?}"
    );
}

fn criterion_8() {
    let generic = Arrangement::new(vec![
        vec![1, 0, 0],
        vec![0, 1, 0],
        vec![0, 0, 1],
        vec![1, 1, 1],
    ])
    .unwrap();
    let cases = [
        (
            "B3",
            Arrangement::coxeter(CoxeterFamily::B, 3).unwrap(),
            true,
        ),
        (
            "A3",
            Arrangement::coxeter(CoxeterFamily::A, 4).unwrap(),
            true,
        ),
        ("generic", generic, false),
    ];
    for (name, a, simplicial) in cases {
        assert_eq!(a.rank(), 3);
        let faces = a.enumerate_faces().unwrap();
        if !simplicial {
            // generic central planes in dimension 3: 2 (1 + 3 + 3) regions
            assert_eq!(faces.num_chambers(), 14);
        }
        assert_eq!(a.is_simplicial(&faces), simplicial, "{name}");
        let report = rank3_harness(&a).unwrap();
        for id in ["C(1,2)", "C(1,3)", "C(2,3)"] {
            assert_eq!(report.get(id).unwrap().passed(), simplicial, "{name} {id}");
        }
        let lrb = Lrb::from_faces(faces).unwrap();
        let g = Graded::from_lrb(&lrb).unwrap();
        let chain = walk(&g, &uniform_weights(&g, Class::Rank(1)).unwrap()).unwrap();
        let first = &chain.stationary[0];
        let uniform = chain.stationary.iter().all(|p| p == first);
        assert_eq!(uniform, simplicial, "{name} walk");
    }
}

fn q_factorial(n: u64, q: u64) -> u64 {
    (1..=n)
        .map(|i| (0..i).map(|k| q.pow(k as u32)).sum::<u64>())
        .product()
}

/// Inversions of a word, counted pair by pair.
fn inv(w: &[usize]) -> usize {
    (0..w.len())
        .flat_map(|j| (j + 1..w.len()).map(move |k| (j, k)))
        .filter(|&(j, k)| w[j] > w[k])
        .count()
}

fn criterion_9() {
    for (n, chambers, apartments, per) in [(3usize, 21usize, 28usize, 8usize), (4, 315, 840, 64)] {
        let q = 2u64;
        let top = (n * (n - 1) / 2) as u32;
        assert_eq!(q_factorial(n as u64, q) as usize, chambers);
        let factorial: u64 = (1..=n as u64).product();
        assert_eq!(
            (q.pow(top) * q_factorial(n as u64, q) / factorial) as usize,
            apartments
        );
        assert_eq!(q.pow(top) as usize, per);

        let b = Building::new(n, 2).unwrap();
        assert_eq!(b.num_chambers(), chambers);
        assert_eq!(b.num_apartments(), apartments);
        for c in 0..b.num_chambers() {
            assert_eq!(b.apartments_of(c).len(), per);
        }
        let (c, cbar) = b.standard_pair();
        let frame = b.coordinate_frame();
        let report = b.apartment_count_identity(frame, c, cbar).unwrap();
        assert!(report.passed(), "{report}");
        assert!(report.get("inversion-formulas").unwrap().passed());
        for &d in b.apartment(frame) {
            let acd = b.apartments_containing(c, d);
            let adc = b.apartments_containing(d, cbar);
            assert_eq!(acd * adc, per);
            let delta = b.w_distance(c, d);
            let l = inv(&delta) as u32;
            assert_eq!(acd as u64, q.pow(top - l));
            assert_eq!(adc as u64, q.pow(l));
        }
    }
}

/// Descent-set generating polynomials by brute force: `out[mask][inv]`.
fn descent_table(n: usize) -> Vec<Vec<i64>> {
    let top = n * (n - 1) / 2;
    let mut out = vec![vec![0i64; top + 1]; 1 << (n - 1)];
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mask: usize = (0..n - 1)
            .filter(|&i| perm[i] > perm[i + 1])
            .map(|i| 1 << i)
            .sum();
        out[mask][inv(&perm)] += 1;
        // next lexicographic permutation
        let Some(i) = (0..n - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    out
}

fn trim(mut v: Vec<i64>) -> Vec<i64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn criterion_10() {
    let b4 = Building::new(4, 2).unwrap();
    let (polys, report) = b4.hq_polynomials().unwrap();
    assert!(report.passed(), "{report}");
    let expected: [(usize, &[i64]); 8] = [
        (0b000, &[1]),
        (0b001, &[0, 1, 1, 1]),
        (0b100, &[0, 1, 1, 1]),
        (0b010, &[0, 1, 2, 1, 1]),
        (0b011, &[0, 0, 0, 1, 1, 1]),
        (0b110, &[0, 0, 0, 1, 1, 1]),
        (0b101, &[0, 0, 1, 1, 2, 1]),
        (0b111, &[0, 0, 0, 0, 0, 0, 1]),
    ];
    for (mask, coeffs) in expected {
        assert_eq!(polys[mask].coeffs(), coeffs, "mask {mask:b}");
    }
    assert_eq!(polys[0b101].to_string(), "q^2 + q^3 + 2q^4 + q^5");

    for (n, qs) in [(3usize, vec![2u32, 3]), (4, vec![2])] {
        let table = descent_table(n);
        let top = n * (n - 1) / 2;
        let full = (1 << (n - 1)) - 1;
        for (mask, row) in table.iter().enumerate() {
            let comp = &table[full ^ mask];
            for k in 0..=top {
                assert_eq!(row[k], comp[top - k], "n={n} mask {mask:b} q^{k}");
            }
        }
        for q in qs {
            let b = Building::new(n, q).unwrap();
            let (polys, report) = b.hq_polynomials().unwrap();
            assert!(report.passed(), "n={n} q={q}: {report}");
            for (mask, row) in table.iter().enumerate() {
                assert_eq!(polys[mask].coeffs(), trim(row.clone()).as_slice());
            }
            for base in [0, b.num_chambers() - 1] {
                let counts = b.restriction_counts(base);
                for (mask, row) in table.iter().enumerate() {
                    let value: i64 = row.iter().rev().fold(0, |acc, &c| acc * i64::from(q) + c);
                    assert_eq!(counts[mask], value, "n={n} q={q} mask {mask:b}");
                }
            }
        }
    }
}

/// Reduced Euler characteristic of the faces of rank at most `k`, from a
/// direct face count.
fn reduced_euler(c: &Complex, k: usize) -> i64 {
    let mut f = vec![0i64; c.rank() + 1];
    for face in 0..c.num_faces() {
        f[c.face(face).len()] += 1;
    }
    (0..=k).map(|r| if r % 2 == 1 { f[r] } else { -f[r] }).sum()
}

fn criterion_11() {
    let mut refs: Vec<String> = vec!["hexagon".into()];
    refs.extend((3..=8).map(|n| format!("ngon:{n}")));
    refs.push("coxeter:B3".into());
    for r in refs {
        let e = catalog::resolve(&r).unwrap();
        let c = &e.complex;
        let st = e.structures().unwrap();
        let n = c.rank() as i64;
        for base in 0..c.num_chambers() {
            let b = beta(c, &st.restrictions, base, false).unwrap();
            for k in 1..=c.rank() {
                let spheres: i64 = (0..=k as i64)
                    .map(|i| binom(n - i - 1, k as i64 - i) * b[i as usize])
                    .sum();
                let sign = if k % 2 == 1 { 1 } else { -1 };
                assert_eq!(reduced_euler(c, k), sign * spheres, "{r} k={k}");
                assert_eq!(skeleton_spheres(c, &b, k).unwrap(), spheres);
            }
        }
    }
}

type Criterion = (usize, &'static str, fn(), Duration);

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 11] = [
        (1, "free band product and P2 failure", criterion_1, secs(1)),
        (2, "structure round trip", criterion_2, secs(10)),
        (3, "gates and Petersen", criterion_3, secs(5)),
        (4, "refined closures", criterion_4, secs(5)),
        (5, "flag vectors", criterion_5, secs(5)),
        (6, "reversal duality", criterion_6, secs(10)),
        (7, "commutativity", criterion_7, secs(300)),
        (8, "rank 3", criterion_8, secs(30)),
        (9, "building counts", criterion_9, secs(300)),
        (10, "building duality", criterion_10, secs(300)),
        (11, "skeleton spheres", criterion_11, secs(5)),
    ];
    let filter: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (id, title, run, limit) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let verdict = match outcome {
            Ok(()) if elapsed <= limit => "PASS".to_string(),
            Ok(()) => format!("FAIL (time limit {limit:?} exceeded)"),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                format!("FAIL ({})", msg.lines().next().unwrap_or(""))
            }
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!(
            "criterion {id:>2} {title}: {verdict} [{:.2}s]",
            elapsed.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
