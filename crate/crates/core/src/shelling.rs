//! Shelling verification, restriction maps read off a shelling, and the
//! orders they generate.

use crate::complex::{ChamberId, Complex, FaceId, EMPTY_FACE};
use crate::error::{Error, Result};
use crate::order::PartialOrder;
use crate::report::{Check, Report};

/// What a valid shelling records about each chamber. Per-chamber vectors are
/// indexed by chamber id, not by position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShellingCertificate {
    pub order: Vec<ChamberId>,
    pub position: Vec<usize>,
    /// Bit `i` set when the facet opposite the `i`-th vertex of the chamber
    /// lies in an earlier chamber.
    pub covered: Vec<usize>,
    pub restriction: Vec<FaceId>,
}

impl ShellingCertificate {
    /// Facets of `d` shared with earlier chambers.
    pub fn new_facets(&self, c: &Complex, d: ChamberId) -> Vec<FaceId> {
        let full = (1usize << c.rank()) - 1;
        (0..c.rank())
            .filter(|i| self.covered[d] >> i & 1 == 1)
            .map(|i| c.chamber_faces(d)[full ^ (1 << i)])
            .collect()
    }

    /// `R <chamber> -> <face>` lines in shelling order.
    pub fn to_text(&self, c: &Complex) -> String {
        self.order
            .iter()
            .map(|&d| {
                format!(
                    "R {} -> {}\n",
                    c.chamber_name(d),
                    c.face_name(self.restriction[d])
                )
            })
            .collect()
    }
}

/// One chamber name per line; blank lines and `#` comments are skipped.
pub fn parse_order(c: &Complex, text: &str) -> Result<Vec<ChamberId>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.split_whitespace().count() != 1 {
            return Err(Error::Parse {
                line: i + 1,
                message: "expected one chamber name".into(),
            });
        }
        out.push(
            c.chamber_id(line)
                .ok_or_else(|| Error::UnknownName(line.to_string()))?,
        );
    }
    Ok(out)
}

fn positions(c: &Complex, order: &[ChamberId]) -> Result<Vec<usize>> {
    let n = c.num_chambers();
    if order.len() != n {
        return Err(Error::NotAPermutation(format!(
            "{} chambers listed, complex has {n}",
            order.len()
        )));
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &d) in order.iter().enumerate() {
        if d >= n {
            return Err(Error::NotAPermutation(format!("chamber id {d}")));
        }
        if pos[d] != usize::MAX {
            return Err(Error::NotAPermutation(format!(
                "{} listed twice",
                c.chamber_name(d)
            )));
        }
        pos[d] = i;
    }
    Ok(pos)
}

/// Check that each chamber meets the union of its predecessors in a
/// nonempty union of its facets.
pub fn verify_shelling(c: &Complex, order: &[ChamberId]) -> Result<ShellingCertificate> {
    let position = positions(c, order)?;
    let n = c.num_chambers();
    let full = (1usize << c.rank()) - 1;
    let mut covered = vec![0usize; n];
    let mut restriction = vec![EMPTY_FACE; n];
    for (k, &d) in order.iter().enumerate() {
        let faces = c.chamber_faces(d);
        let mut mask = 0;
        for i in 0..c.rank() {
            let facet = faces[full ^ (1 << i)];
            if c.residue(facet).iter().any(|&e| position[e] < k) {
                mask |= 1 << i;
            }
        }
        covered[d] = mask;
        let r = faces[mask];
        restriction[d] = r;
        if k == 0 {
            continue;
        }
        // D ∩ E lies in a covered facet exactly when E misses R(D)
        if let Some(&e) = c.residue(r).iter().find(|&&e| position[e] < k) {
            return Err(Error::NotAShelling {
                chamber: c.chamber_name(d).to_string(),
                witness: c.face_name(c.meet(d, e)),
            });
        }
    }
    Ok(ShellingCertificate {
        order: order.to_vec(),
        position,
        covered,
        restriction,
    })
}

/// Transitive closure of `E < D` whenever `R(E) ⊆ D`, optionally also
/// requiring `E` and `D` to be adjacent.
pub fn restriction_to_order(c: &Complex, r: &[FaceId], refined: bool) -> Result<PartialOrder> {
    let empties = r.iter().filter(|&&f| f == EMPTY_FACE).count();
    if empties != 1 {
        return Err(Error::BadRestrictionMap(empties));
    }
    let mut pairs = Vec::new();
    for e in 0..c.num_chambers() {
        if refined {
            for &d in c.adjacent(e) {
                if c.is_face_of(r[e], d) {
                    pairs.push((e, d));
                }
            }
        } else {
            pairs.extend(c.residue(r[e]).iter().map(|&d| (e, d)));
        }
    }
    PartialOrder::from_pairs(c.num_chambers(), pairs).map_err(|cycle| Error::NotAPartialOrder {
        cycle: cycle
            .iter()
            .map(|&x| c.chamber_name(x).to_string())
            .collect(),
    })
}

/// The shelling of a link induced by a shelling of the whole complex.
#[derive(Debug, Clone)]
pub struct LinkShelling {
    pub link: Complex,
    pub certificate: ShellingCertificate,
    /// Link facets newly covered agree with the facets of the chamber that
    /// contain the face and were covered.
    pub check: Check,
}

pub fn link_shelling(c: &Complex, cert: &ShellingCertificate, f: FaceId) -> Result<LinkShelling> {
    let link = c.link(f)?;
    let face = c.face(f);
    // link chambers carry the names of the chambers they come from
    let mut order: Vec<ChamberId> = c.residue(f).to_vec();
    order.sort_by_key(|&d| cert.position[d]);
    let link_order: Vec<ChamberId> = order
        .iter()
        .map(|&d| link.chamber_id(c.chamber_name(d)).expect("link chamber"))
        .collect();
    let lc = verify_shelling(&link, &link_order)
        .map_err(|e| Error::Inconsistent(format!("induced order does not shell the link: {e}")))?;
    let mut check = Check::new("link-facets");
    for &d in &order {
        let ld = link.chamber_id(c.chamber_name(d)).expect("link chamber");
        let expected: Vec<String> = c
            .chamber(d)
            .iter()
            .enumerate()
            .filter(|(i, v)| cert.covered[d] >> i & 1 == 1 && !face.contains(v))
            .map(|(_, &v)| c.vertex_name(v).to_string())
            .collect();
        let got: Vec<String> = link
            .chamber(ld)
            .iter()
            .enumerate()
            .filter(|(i, _)| lc.covered[ld] >> i & 1 == 1)
            .map(|(_, &v)| link.vertex_name(v).to_string())
            .collect();
        check.expect(expected == got, || {
            vec![
                format!("F={}", c.face_name(f)),
                format!("D={}", c.chamber_name(d)),
            ]
        });
    }
    Ok(LinkShelling {
        link,
        certificate: lc,
        check,
    })
}

/// Number of chambers whose restriction is the whole chamber, cross-checked
/// against the reduced Euler characteristic.
pub fn sphere_count(c: &Complex, cert: &ShellingCertificate) -> Result<usize> {
    let count = (0..c.num_chambers())
        .filter(|&d| cert.restriction[d] == c.chamber_face(d))
        .count();
    let sign = if c.rank() % 2 == 1 { 1 } else { -1 };
    let chi = c.reduced_euler(c.rank());
    if chi != sign * count as i64 {
        return Err(Error::EulerMismatch(format!(
            "reduced euler characteristic {chi}, {count} spheres"
        )));
    }
    Ok(count)
}

/// Reverse a shelling of a thin complex and compare the two restriction maps.
pub fn reverse_shelling_check(c: &Complex, order: &[ChamberId]) -> Result<Report> {
    if let Some(f) = c.thinness_witness() {
        return Err(Error::ThinnessRequired(c.face_name(f)));
    }
    let cert = verify_shelling(c, order)?;
    let mut report = Report::new();
    let reversed: Vec<ChamberId> = order.iter().rev().copied().collect();
    let mut rev_check = Check::new("reverse-shelling");
    rev_check.case();
    let rev = match verify_shelling(c, &reversed) {
        Ok(r) => Some(r),
        Err(Error::NotAShelling { chamber, witness }) => {
            rev_check.fail(vec![format!("D={chamber}"), format!("meet={witness}")]);
            None
        }
        Err(e) => return Err(e),
    };
    report.push(rev_check);
    let mut comp = Check::new("restriction-complement");
    let mut facets = Check::new("reverse-facets");
    let mut types = c.is_labelled().then(|| Check::new("type-complement"));
    if let Some(rev) = &rev {
        let full = (1usize << c.rank()) - 1;
        let all_types = (1u32 << c.labels().len()) - 1;
        for d in 0..c.num_chambers() {
            comp.expect(cert.covered[d] ^ rev.covered[d] == full, || {
                vec![
                    format!("D={}", c.chamber_name(d)),
                    format!("R={}", c.face_name(cert.restriction[d])),
                    format!("Rrev={}", c.face_name(rev.restriction[d])),
                ]
            });
            facets.expect(rev.covered[d] == full & !cert.covered[d], || {
                vec![format!("D={}", c.chamber_name(d))]
            });
            if let Some(types) = types.as_mut() {
                let a = c.face_type(cert.restriction[d]).expect("labelled");
                let b = c.face_type(rev.restriction[d]).expect("labelled");
                types.expect(a ^ b == all_types && a & b == 0, || {
                    vec![format!("D={}", c.chamber_name(d))]
                });
            }
        }
    }
    report.push(comp);
    report.push(facets);
    if let Some(types) = types {
        report.push(types);
    }
    Ok(report)
}
