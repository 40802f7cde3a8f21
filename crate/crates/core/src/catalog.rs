//! Bundled example complexes, addressed by short references such as
//! `ngon:7`, `coxeter:B3` or `building:3:2`.

use crate::arrangement::Arrangement;
use crate::buildings::Building;
use crate::complex::{ChamberId, Complex, ComplexBuilder, FaceId};
use crate::error::{Error, Result};
use crate::order::PartialOrder;
use crate::report::{Check, Report};
use crate::structures::{check_p, metric_structure, p_to_r, s_to_p, MetricStructure, OrderFamily};

/// Reference forms accepted by [`resolve`].
pub const REFERENCES: &[&str] = &[
    "hexagon",
    "triangle",
    "petersen",
    "ngon:<n>",
    "simplex:<d>",
    "boolean:<n>",
    "coxeter:<A|B|D><n>",
    "building:<n>:<q>",
];

/// A generated complex with the structure it is meant to carry.
#[derive(Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub complex: Complex,
    /// Shelling orders defining a non-metric structure; `None` means the
    /// structure comes from gates.
    pub orders: Option<OrderFamily>,
    pub arrangement: Option<Arrangement>,
}

impl CatalogEntry {
    fn plain(name: impl Into<String>, complex: Complex) -> Self {
        CatalogEntry {
            name: name.into(),
            complex,
            orders: None,
            arrangement: None,
        }
    }

    /// Projections, restrictions and orders: derived from the bundled
    /// orders when present, otherwise from gates.
    pub fn structures(&self) -> Result<MetricStructure> {
        match &self.orders {
            Some(s) => {
                let projections = s_to_p(&self.complex, s)?;
                let restrictions = p_to_r(&self.complex, &projections);
                Ok(MetricStructure {
                    projections,
                    restrictions,
                    orders: s.clone(),
                })
            }
            None => metric_structure(&self.complex),
        }
    }
}

/// Cycle of `n` edges `e<i> = {i, i+1}`, typed `s`/`t` when `n` is even,
/// carrying the clockwise orders `e_i < e_{i+1} < ... < e_{i-1}`.
pub fn gen_ngon(n: usize) -> Result<CatalogEntry> {
    let complex = cycle(n)?;
    let orders = (0..n)
        .map(|c| {
            let seq: Vec<usize> = (0..n).map(|k| (c + k) % n).collect();
            PartialOrder::chain(n, &seq).map_err(|_| Error::Inconsistent("chain".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let entry = CatalogEntry {
        name: format!("ngon:{n}"),
        complex,
        orders: Some(OrderFamily { orders }),
        arrangement: None,
    };
    let p = entry.structures()?.projections;
    let rep = check_p(&entry.complex, &p);
    if !rep.passed() {
        return Err(Error::Inconsistent(format!(
            "clockwise structure fails: {:?}",
            rep.failed_ids()
        )));
    }
    Ok(entry)
}

fn cycle(n: usize) -> Result<Complex> {
    if n < 3 {
        return Err(Error::BadN(n));
    }
    let mut b = ComplexBuilder::new();
    for i in 0..n {
        let ty = (n % 2 == 0).then_some(if i % 2 == 0 { "s" } else { "t" });
        b.vertex(&i.to_string(), ty)?;
    }
    for i in 0..n {
        b.chamber(
            Some(&format!("e{i}")),
            &[i.to_string(), ((i + 1) % n).to_string()],
        )?;
    }
    b.build()
}

/// The labelled 6-cycle with its gate structure.
pub fn hexagon() -> Result<CatalogEntry> {
    Ok(CatalogEntry::plain("hexagon", cycle(6)?))
}

/// Boundary of the `d`-simplex: all `d`-subsets of `0..=d`.
pub fn simplex(d: usize) -> Result<CatalogEntry> {
    if d < 1 {
        return Err(Error::BadParameter(
            "simplex dimension must be at least 1".into(),
        ));
    }
    if d > 12 {
        return Err(Error::ScaleExceeded(format!("simplex:{d}")));
    }
    let chambers: Vec<Vec<usize>> = (0..=d)
        .map(|skip| (0..=d).filter(|&v| v != skip).collect())
        .collect();
    Ok(CatalogEntry::plain(
        format!("simplex:{d}"),
        Complex::from_chambers(&chambers)?,
    ))
}

/// Vertices `p<i><j>` for 2-subsets of `1..=5`, chambers the disjoint pairs.
pub fn gen_petersen() -> Result<CatalogEntry> {
    let pairs: Vec<(usize, usize)> = (1..=5)
        .flat_map(|i| (i + 1..=5).map(move |j| (i, j)))
        .collect();
    let name = |(i, j): (usize, usize)| format!("p{i}{j}");
    let mut b = ComplexBuilder::new();
    for &p in &pairs {
        b.vertex(&name(p), None)?;
    }
    for (k, &a) in pairs.iter().enumerate() {
        for &c in &pairs[k + 1..] {
            if a.0 != c.0 && a.0 != c.1 && a.1 != c.0 && a.1 != c.1 {
                b.chamber(None, &[name(a), name(c)])?;
            }
        }
    }
    Ok(CatalogEntry::plain("petersen", b.build()?))
}

/// Chamber sets of the 6-cycles of a graph-like rank-2 complex.
pub fn hexagon_apartments(c: &Complex) -> Vec<Vec<ChamberId>> {
    let nv = c.num_vertices();
    let mut edge = vec![vec![None; nv]; nv];
    for ch in 0..c.num_chambers() {
        let [a, b] = c.chamber(ch) else { continue };
        edge[*a as usize][*b as usize] = Some(ch);
        edge[*b as usize][*a as usize] = Some(ch);
    }
    let mut out = Vec::new();
    for start in 0..nv {
        let mut stack: Vec<Vec<usize>> = vec![vec![start]];
        while let Some(path) = stack.pop() {
            let last = *path.last().expect("nonempty");
            if path.len() == 6 {
                if edge[last][start].is_some() && path[1] < path[5] {
                    let mut chs: Vec<ChamberId> = (0..6)
                        .map(|k| edge[path[k]][path[(k + 1) % 6]].expect("edge"))
                        .collect();
                    chs.sort_unstable();
                    out.push(chs);
                }
                continue;
            }
            for next in (start + 1..nv).filter(|&v| edge[last][v].is_some() && !path.contains(&v)) {
                let mut p = path.clone();
                p.push(next);
                stack.push(p);
            }
        }
    }
    out.sort();
    out
}

/// Apartment counts, hexagon shape, and the failure of the gate property
/// with exactly two nearest chambers in two apartments.
pub fn check_petersen(entry: &CatalogEntry) -> Report {
    let c = &entry.complex;
    let apts = hexagon_apartments(c);
    let mut report = Report::new();
    report.info(format!(
        "petersen: {} vertices, {} chambers, {} apartments",
        c.num_vertices(),
        c.num_chambers(),
        apts.len()
    ));
    let mut counts = Check::new("counts");
    counts.expect(
        c.num_vertices() == 10 && c.num_chambers() == 15 && apts.len() == 10,
        || {
            vec![
                format!("vertices={}", c.num_vertices()),
                format!("chambers={}", c.num_chambers()),
                format!("apartments={}", apts.len()),
            ]
        },
    );
    let mut per = Check::new("apartments-per-chamber=4");
    for ch in 0..c.num_chambers() {
        let k = apts.iter().filter(|a| a.contains(&ch)).count();
        per.expect(k == 4, || {
            vec![format!("C={}", c.chamber_name(ch)), format!("found={k}")]
        });
    }
    let mut shape = Check::new("apartment-is-6-cycle");
    for a in &apts {
        let ok = c.subcomplex(a).is_ok_and(|s| {
            s.num_vertices() == 6 && s.num_chambers() == 6 && s.is_thin() && s.is_connected()
        });
        shape.expect(ok, || {
            vec![a
                .iter()
                .map(|&x| c.chamber_name(x))
                .collect::<Vec<_>>()
                .join(",")]
        });
    }
    report.push(counts);
    report.push(per);
    report.push(shape);
    let gate = c.check_gate_property();
    let mut two = Check::new("two-nearest-two-apartments");
    for f in c.faces_of_rank(1) {
        for ch in 0..c.num_chambers() {
            let res = c.residue(f);
            let best = res
                .iter()
                .map(|&x| c.distance(x, ch))
                .min()
                .expect("nonempty");
            let nearest = res.iter().filter(|&&x| c.distance(x, ch) == best).count();
            if nearest == 1 {
                continue;
            }
            let through = apartments_through(c, &apts, f, ch);
            two.expect(nearest == 2 && through == 2, || {
                vec![
                    format!("F={}", c.face_name(f)),
                    format!("C={}", c.chamber_name(ch)),
                    format!("nearest={nearest}"),
                    format!("apartments={through}"),
                ]
            });
        }
    }
    report.push(gate.check);
    report.push(two);
    report
}

fn apartments_through(c: &Complex, apts: &[Vec<ChamberId>], f: FaceId, ch: ChamberId) -> usize {
    apts.iter()
        .filter(|a| a.contains(&ch) && a.iter().any(|&x| c.is_face_of(f, x)))
        .count()
}

/// Complex of a simplicial arrangement.
pub fn arrangement_entry(name: String, a: Arrangement) -> Result<CatalogEntry> {
    let faces = a.enumerate_faces()?;
    let ac = a.complex(&faces)?;
    Ok(CatalogEntry {
        name,
        complex: ac.complex,
        orders: None,
        arrangement: Some(a),
    })
}

/// Bundled orders against gate orders; the first disagreeing base chamber
/// and pair is the witness.
pub fn non_metric_witness(entry: &CatalogEntry) -> Option<Vec<String>> {
    let bundled = entry.orders.as_ref()?;
    let c = &entry.complex;
    let metric = metric_structure(c).ok()?;
    for base in 0..c.num_chambers() {
        let diff = bundled.orders[base].difference(&metric.orders.orders[base]);
        if let Some(&(x, y)) = diff.first() {
            return Some(vec![
                format!("C={}", c.chamber_name(base)),
                format!("{}<{}", c.chamber_name(x), c.chamber_name(y)),
            ]);
        }
    }
    None
}

/// Look up a catalog reference, with or without a leading `@`.
pub fn resolve(reference: &str) -> Result<CatalogEntry> {
    let r = reference.strip_prefix('@').unwrap_or(reference);
    let parts: Vec<&str> = r.split(':').collect();
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::BadParameter(format!("`{s}` in catalog reference {reference}")))
    };
    match parts[..] {
        ["hexagon"] => hexagon(),
        ["triangle"] => Ok(CatalogEntry::plain("triangle", cycle(3)?)),
        ["petersen"] => gen_petersen(),
        ["ngon", n] => gen_ngon(num(n)?),
        ["simplex", d] => simplex(num(d)?),
        ["boolean", n] => arrangement_entry(format!("boolean:{n}"), Arrangement::boolean(num(n)?)?),
        ["coxeter", spec] => {
            arrangement_entry(format!("coxeter:{spec}"), Arrangement::coxeter_type(spec)?)
        }
        ["building", n, q] => {
            let q = u32::try_from(num(q)?)
                .map_err(|_| Error::BadParameter(format!("q in {reference}")))?;
            let b = Building::new(num(n)?, q)?;
            Ok(CatalogEntry::plain(
                format!("building:{n}:{q}"),
                b.complex().clone(),
            ))
        }
        _ => Err(Error::UnknownName(format!(
            "catalog reference {reference} (known: {})",
            REFERENCES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flags::{ds_check, flag_vectors};
    use crate::structures::{check_s, SOptions};

    #[test]
    fn ngon_structures() {
        for n in 3..=8 {
            let e = gen_ngon(n).unwrap();
            assert_eq!(e.complex.num_chambers(), n);
            let s = e.structures().unwrap();
            assert!(check_s(&e.complex, &s.orders, SOptions::default()).passed());
            let c = &e.complex;
            // clockwise restriction: empty at C, whole anticlockwise neighbour, else the new vertex
            for base in 0..n {
                for k in 0..n {
                    let d = (base + k) % n;
                    let r = s.restrictions.get(base, d);
                    let want = match k {
                        0 => "-".to_string(),
                        _ if k == n - 1 => c.face_name(c.chamber_face(d)),
                        _ => ((d + 1) % n).to_string(),
                    };
                    assert_eq!(c.face_name(r), want, "n={n} C=e{base} D=e{d}");
                }
            }
        }
        assert!(matches!(gen_ngon(2), Err(Error::BadN(2))));
    }

    #[test]
    fn hexagon_clockwise_is_not_metric() {
        let e = gen_ngon(6).unwrap();
        assert!(e.complex.check_gate_property().passed());
        assert!(non_metric_witness(&e).is_some());
        assert!(non_metric_witness(&hexagon().unwrap()).is_none());
    }

    #[test]
    fn pentagon_h_vector() {
        let e = gen_ngon(5).unwrap();
        let fv = flag_vectors(&e.complex, false).unwrap();
        assert_eq!(fv.h, vec![1, 3, 1]);
        assert!(ds_check(&e.complex, &fv).passed());
    }

    #[test]
    fn petersen_counts() {
        let e = gen_petersen().unwrap();
        let rep = check_petersen(&e);
        assert!(rep.get("counts").unwrap().passed(), "{rep}");
        assert!(rep.get("apartments-per-chamber=4").unwrap().passed());
        assert!(rep.get("apartment-is-6-cycle").unwrap().passed());
        assert!(
            rep.get("two-nearest-two-apartments").unwrap().passed(),
            "{rep}"
        );
        let gate = rep.get("gate").unwrap();
        assert!(!gate.passed());
        let w = &gate.witnesses[0];
        let nearest = w.iter().find_map(|t| t.strip_prefix("nearest=")).unwrap();
        assert_eq!(nearest.split('|').count(), 2);
    }

    #[test]
    fn references() {
        for r in [
            "@hexagon",
            "triangle",
            "@ngon:7",
            "@petersen",
            "@boolean:3",
            "@coxeter:A3",
            "@building:3:2",
            "@simplex:3",
        ] {
            let e = resolve(r).unwrap();
            assert!(e.complex.num_chambers() > 0, "{r}");
        }
        assert_eq!(resolve("@simplex:3").unwrap().complex.num_chambers(), 4);
        assert!(matches!(
            resolve("@dodecahedron"),
            Err(Error::UnknownName(_))
        ));
        assert!(matches!(
            resolve("@coxeter:E8"),
            Err(Error::BadParameter(_))
        ));
    }
}
