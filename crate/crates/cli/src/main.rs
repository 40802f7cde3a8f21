use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use shellings::arrangement::Arrangement;
use shellings::buildings::Building;
use shellings::catalog::{self, CatalogEntry, REFERENCES};
use shellings::flags::{
    beta, check_beta, ds_check, flag_vectors, local_flags, skeleton_formula, skeleton_spheres,
};
use shellings::lrb::{check_lrb, Lrb};
use shellings::shelling::{parse_order, reverse_shelling_check, sphere_count, verify_shelling};
use shellings::structures::{
    check_consistency, check_opposite, check_p, check_r, check_s, find_opposition, p_to_r,
    parse_structure, r_to_s, s_to_p, write_structure, MetricStructure, S2Mode, SOptions,
};
use shellings::walks::{
    check_commutativity, check_uniformity, check_walk, parse_weights, rank3_harness,
    uniform_weights, uniformity_harness, walk, Class, Graded,
};
use shellings::{Check, Complex, Error, Format, Report, Result};

#[derive(Parser)]
#[command(
    name = "shellings",
    version,
    about = "Check projection, restriction and shelling structures on chamber complexes"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,
    /// Cap on enumerated linear extensions and geodesics
    #[arg(long, global = true, default_value_t = 10_000)]
    cap: usize,
    /// Seed for sampled checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Exit 0 when some check fails and 1 when all pass
    #[arg(long, global = true)]
    expect_fail: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Check P, R and S axioms and the conversions between them
    CheckAxioms {
        /// Complex file or catalog reference (`@hexagon`)
        complex: String,
        /// `auto`, `metric`, `bundled`, or a structure file
        #[arg(long, default_value = "auto")]
        structure: String,
        /// Also check the opposite axioms
        #[arg(long)]
        opposite: bool,
        /// Sample linear extensions instead of enumerating them
        #[arg(long)]
        sampled: bool,
        /// Print the derived tables
        #[arg(long)]
        emit: bool,
    },
    /// Verify a shelling order and print its restriction certificate
    Shell {
        complex: String,
        /// Shelling order file; defaults to a linear extension of the base order
        #[arg(long)]
        order: Option<String>,
        /// Base chamber for the default order
        #[arg(long)]
        base: Option<String>,
        /// Also verify the reversed order
        #[arg(long)]
        reverse: bool,
    },
    /// Flag f- and h-vectors, Dehn-Sommerville and restriction counts
    Hvector {
        complex: String,
        /// Index by type instead of rank
        #[arg(long)]
        labelled: bool,
        /// Per-chamber local tables
        #[arg(long)]
        local: bool,
        /// Skeleton sphere counts
        #[arg(long)]
        skeleton: bool,
        /// `auto`, `metric`, `bundled`, or a structure file
        #[arg(long, default_value = "auto")]
        structure: String,
    },
    /// Stationary distribution of a face random walk
    Walk {
        /// Complex file or catalog reference; arrangement references walk on the face band
        source: Option<String>,
        /// LRB table file
        #[arg(long, conflicts_with = "source")]
        lrb: Option<String>,
        /// Weights file; defaults to uniform weights on the chosen class
        #[arg(long)]
        weights: Option<String>,
        /// Rank class for uniform weights
        #[arg(long)]
        rank: Option<usize>,
        /// Type class for uniform weights, comma-separated labels
        #[arg(long = "type", conflicts_with = "rank")]
        ty: Option<String>,
    },
    /// Face band checks on a hyperplane arrangement
    Arrangement {
        /// Arrangement file
        file: Option<String>,
        /// Coxeter arrangement such as `D4`
        #[arg(long, conflicts_with_all = ["file", "boolean"])]
        coxeter: Option<String>,
        /// Coordinate arrangement in dimension n
        #[arg(long, conflicts_with = "file")]
        boolean: Option<usize>,
        #[arg(long, value_enum, default_value_t = ArrCheck::Commutativity)]
        check: ArrCheck,
    },
    /// Type A building over a prime field
    Building {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum, default_value_t = BuildingCheck::Counts)]
        check: BuildingCheck,
    },
    /// List catalog references or emit and check an entry
    Catalog {
        reference: Option<String>,
        #[arg(long, value_enum, default_value_t = Emit::Complex)]
        emit: Emit,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ArrCheck {
    Commutativity,
    Rank3,
    Uniformity,
    Lrb,
    Faces,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildingCheck {
    Duality,
    Counts,
    Gate,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Complex,
    Structure,
    Check,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.global.format {
        OutFormat::Text => Format::Text,
        OutFormat::Tsv => Format::Tsv,
    };
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.render(format));
            if report.passed() != cli.global.expect_fail {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_internal() { 3 } else { 2 })
        }
    }
}

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::BadParameter(format!("{path}: {e}")))
}

fn load(source: &str) -> Result<CatalogEntry> {
    if source.starts_with('@') {
        return catalog::resolve(source);
    }
    Ok(CatalogEntry {
        name: source.to_string(),
        complex: Complex::parse(&read(source)?)?,
        orders: None,
        arrangement: None,
    })
}

/// The structure named by `--structure`, completed from whichever tables
/// the file supplies.
fn structure(entry: &CatalogEntry, choice: &str) -> Result<MetricStructure> {
    let c = &entry.complex;
    match choice {
        "auto" => entry.structures(),
        "metric" => shellings::structures::metric_structure(c),
        "bundled" => match entry.orders {
            Some(_) => entry.structures(),
            None => Err(Error::BadParameter(format!(
                "{} has no bundled structure",
                entry.name
            ))),
        },
        path => {
            let file = parse_structure(c, &read(path)?)?;
            let (p, r, s) = match (file.projections, file.restrictions, file.orders) {
                (Some(p), r, s) => {
                    let r = r.unwrap_or_else(|| p_to_r(c, &p));
                    let s = match s {
                        Some(s) => s,
                        None => r_to_s(c, &r)?,
                    };
                    (p, r, s)
                }
                (None, Some(r), s) => {
                    let s = match s {
                        Some(s) => s,
                        None => r_to_s(c, &r)?,
                    };
                    (s_to_p(c, &s)?, r, s)
                }
                (None, None, Some(s)) => {
                    let p = s_to_p(c, &s)?;
                    (p.clone(), p_to_r(c, &p), s)
                }
                (None, None, None) => return Err(Error::EmptyInput(path.to_string())),
            };
            Ok(MetricStructure {
                projections: p,
                restrictions: r,
                orders: s,
            })
        }
    }
}

fn chamber(c: &Complex, name: &str) -> Result<usize> {
    c.chamber_id(name)
        .ok_or_else(|| Error::UnknownName(name.to_string()))
}

fn run(cli: &Cli) -> Result<Report> {
    let g = &cli.global;
    match &cli.command {
        Command::CheckAxioms {
            complex,
            structure: choice,
            opposite,
            sampled,
            emit,
        } => {
            let entry = load(complex)?;
            let c = &entry.complex;
            let st = structure(&entry, choice)?;
            let mut report = Report::new();
            report.info(format!(
                "complex {}: {} vertices, {} chambers, rank {}",
                entry.name,
                c.num_vertices(),
                c.num_chambers(),
                c.rank()
            ));
            if *emit {
                let text = write_structure(
                    c,
                    Some(&st.projections),
                    Some(&st.restrictions),
                    Some(&st.orders),
                );
                report.info.extend(text.lines().map(str::to_string));
            }
            report.extend(check_p(c, &st.projections));
            report.extend(check_r(c, &st.restrictions));
            let opts = SOptions {
                mode: if *sampled {
                    S2Mode::Sampled
                } else {
                    S2Mode::Exhaustive
                },
                cap: g.cap,
                seed: g.seed,
            };
            report.extend(check_s(c, &st.orders, opts));
            report.extend(check_consistency(
                c,
                &st.projections,
                &st.restrictions,
                &st.orders,
            ));
            if *opposite {
                let opp = find_opposition(c, &st.restrictions)?;
                report.extend(check_opposite(
                    c,
                    &st.projections,
                    &st.restrictions,
                    &st.orders,
                    &opp,
                ));
            }
            Ok(report)
        }
        Command::Shell {
            complex,
            order,
            base,
            reverse,
        } => {
            let entry = load(complex)?;
            let c = &entry.complex;
            let seq = match order {
                Some(path) => parse_order(c, &read(path)?)?,
                None => {
                    let b = match base {
                        Some(name) => chamber(c, name)?,
                        None => 0,
                    };
                    entry.structures()?.orders.orders[b].first_extension()
                }
            };
            let mut report = Report::new();
            let mut check = Check::new("shelling");
            check.case();
            match verify_shelling(c, &seq) {
                Ok(cert) => {
                    report
                        .info
                        .extend(cert.to_text(c).lines().map(str::to_string));
                    report.info(format!("spheres = {}", sphere_count(c, &cert)?));
                }
                Err(Error::NotAShelling { chamber, witness }) => {
                    check.fail(vec![format!("D={chamber}"), format!("meet={witness}")]);
                }
                Err(e) => return Err(e),
            }
            let ok = check.passed();
            report.push(check);
            if *reverse && ok {
                report.extend(reverse_shelling_check(c, &seq)?);
            }
            Ok(report)
        }
        Command::Hvector {
            complex,
            labelled,
            local,
            skeleton,
            structure: choice,
        } => {
            let entry = load(complex)?;
            let c = &entry.complex;
            let fv = flag_vectors(c, *labelled)?;
            let mut report = Report::new();
            report.info.extend(fv.table(c));
            report.extend(ds_check(c, &fv));
            if c.check_gate_property().passed() || entry.orders.is_some() || choice != "auto" {
                let st = structure(&entry, choice)?;
                report.extend(check_beta(c, &st.restrictions, *labelled)?);
                if *local {
                    let table = local_flags(c, &st.restrictions, *labelled)?;
                    report.extend(table.check(c, &fv));
                }
                if *skeleton {
                    let b = beta(c, &st.restrictions, 0, false)?;
                    let mut check = Check::new("skeleton");
                    for k in 1..=c.rank() {
                        check.case();
                        match skeleton_spheres(c, &b, k) {
                            Ok(s) => report.info(format!("spheres[{k}] = {s}")),
                            Err(Error::EulerMismatch(m)) => {
                                check.fail(vec![
                                    format!("k={k}"),
                                    format!("formula={}", skeleton_formula(&b, k)),
                                    m,
                                ]);
                            }
                            Err(e) => return Err(e),
                        }
                    }
                    report.push(check);
                }
            } else {
                report.info("no gate structure; restriction counts skipped");
            }
            Ok(report)
        }
        Command::Walk {
            source,
            lrb,
            weights,
            rank,
            ty,
        } => {
            let band;
            let entry;
            let faces_band;
            let ac;
            let graded = match (lrb, source) {
                (Some(path), _) => {
                    band = Lrb::parse(&read(path)?)?;
                    Graded::from_lrb(&band)?
                }
                (None, Some(src)) => {
                    entry = load(src)?;
                    match &entry.arrangement {
                        Some(a) => {
                            let faces = a.enumerate_faces()?;
                            ac = a.complex(&faces)?;
                            faces_band = Lrb::from_faces(faces)?;
                            Graded::from_arrangement(&faces_band, &ac)?
                        }
                        None => Graded::from_complex(&entry.complex)?,
                    }
                }
                (None, None) => {
                    return Err(Error::BadParameter("walk needs a complex or --lrb".into()))
                }
            };
            let class = match (rank, ty) {
                (_, Some(t)) => Class::Type(type_mask(&entry_labels(source, &graded)?, t)?),
                (Some(k), None) => Class::Rank(*k),
                (None, None) => Class::Rank(1),
            };
            let mut report = Report::new();
            match weights {
                Some(path) => {
                    let w = parse_weights(&graded, &read(path)?)?;
                    let chain = walk(&graded, &w)?;
                    report
                        .info
                        .extend(chain.to_text().lines().map(str::to_string));
                }
                None => {
                    let (chain, rep) = check_walk(&graded, class)?;
                    report
                        .info
                        .extend(chain.to_text().lines().map(str::to_string));
                    report.extend(rep);
                    let w = uniform_weights(&graded, class)?;
                    report.info(format!("weights {} faces", w.len()));
                }
            }
            Ok(report)
        }
        Command::Arrangement {
            file,
            coxeter,
            boolean,
            check,
        } => {
            let a = match (file, coxeter, boolean) {
                (Some(path), _, _) => Arrangement::parse(&read(path)?)?,
                (None, Some(choice), _) => Arrangement::coxeter_type(choice)?,
                (None, None, Some(n)) => Arrangement::boolean(*n)?,
                _ => {
                    return Err(Error::BadParameter(
                        "arrangement needs a file, --coxeter or --boolean".into(),
                    ))
                }
            };
            arrangement(&a, *check)
        }
        Command::Building { n, q, check } => {
            let b = Building::new(*n, *q)?;
            match check {
                BuildingCheck::Duality => {
                    let (_, report) = b.hq_polynomials()?;
                    Ok(report)
                }
                BuildingCheck::Counts => {
                    let mut report = b.counts_report()?;
                    let (c, cbar) = b.standard_pair();
                    let frame = b.coordinate_frame();
                    report.extend(b.apartment_count_identity(frame, c, cbar)?);
                    report.extend(b.retraction_report(frame, c, cbar)?);
                    Ok(report)
                }
                BuildingCheck::Gate => Ok(b.gate_report()),
            }
        }
        Command::Catalog { reference, emit } => {
            let mut report = Report::new();
            let Some(r) = reference else {
                report.info.extend(REFERENCES.iter().map(|s| s.to_string()));
                return Ok(report);
            };
            let entry = catalog::resolve(r)?;
            let c = &entry.complex;
            match emit {
                Emit::Complex => report.info.extend(c.to_text().lines().map(str::to_string)),
                Emit::Structure => {
                    let st = entry.structures()?;
                    let text = write_structure(
                        c,
                        Some(&st.projections),
                        Some(&st.restrictions),
                        Some(&st.orders),
                    );
                    report.info.extend(text.lines().map(str::to_string));
                }
                Emit::Check => {
                    if entry.name == "petersen" {
                        report.extend(catalog::check_petersen(&entry));
                    } else {
                        let gate = c.check_gate_property();
                        let gated = gate.passed();
                        report.push(gate.check);
                        if gated || entry.orders.is_some() {
                            let st = entry.structures()?;
                            report.extend(check_p(c, &st.projections));
                            report.extend(check_consistency(
                                c,
                                &st.projections,
                                &st.restrictions,
                                &st.orders,
                            ));
                        }
                        if let Some(w) = catalog::non_metric_witness(&entry) {
                            report.info(format!("non-metric: {}", w.join(" ")));
                        }
                    }
                }
            }
            Ok(report)
        }
    }
}

fn entry_labels(source: &Option<String>, g: &Graded) -> Result<Vec<String>> {
    if !g.is_labelled() {
        return Err(Error::NeedsLabels);
    }
    let entry = load(source.as_deref().expect("labelled source is a complex"))?;
    let labels = match &entry.arrangement {
        Some(a) => a.complex(&a.enumerate_faces()?)?.complex.labels().to_vec(),
        None => entry.complex.labels().to_vec(),
    };
    Ok(labels)
}

fn type_mask(labels: &[String], choice: &str) -> Result<u32> {
    let mut mask = 0;
    for t in choice
        .trim_matches(|c| c == '{' || c == '}')
        .split(',')
        .filter(|t| !t.is_empty())
    {
        let i = labels
            .iter()
            .position(|l| l == t)
            .ok_or_else(|| Error::UnknownName(format!("type {t}")))?;
        mask |= 1 << i;
    }
    Ok(mask)
}

fn arrangement(a: &Arrangement, check: ArrCheck) -> Result<Report> {
    let faces = a.enumerate_faces()?;
    let mut report = Report::new();
    report.info(format!(
        "arrangement: {} hyperplanes, rank {}, {} faces, {} chambers",
        a.normals.len(),
        a.rank(),
        faces.len(),
        faces.num_chambers()
    ));
    match check {
        ArrCheck::Rank3 => report.extend(rank3_harness(a)?),
        ArrCheck::Faces => {
            let lrb = Lrb::from_faces(faces)?;
            let ranks = lrb.ranks()?;
            let mut counts = vec![0usize; ranks.iter().max().map_or(0, |m| m + 1)];
            for r in ranks {
                counts[r] += 1;
            }
            for (r, n) in counts.iter().enumerate() {
                report.info(format!("faces[{r}] = {n}"));
            }
        }
        ArrCheck::Lrb => report.extend(check_lrb(&Lrb::from_faces(faces)?)),
        ArrCheck::Uniformity => {
            let lrb = Lrb::from_faces(faces)?;
            report.push(check_uniformity(&Graded::from_lrb(&lrb)?)?);
            report.extend(uniformity_harness(&lrb)?);
        }
        ArrCheck::Commutativity => {
            let lrb = Lrb::from_faces(faces)?;
            report.extend(check_commutativity(&Graded::from_lrb(&lrb)?, false)?);
        }
    }
    Ok(report)
}
