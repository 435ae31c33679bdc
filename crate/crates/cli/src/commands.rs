use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use isodrum::catalog;
use isodrum::geometry::{build_assembly, export_mesh, extrude_prism, Assembly, BaseTile, MeshFormat};
use isodrum::spectra::{
    assemble_laplacian, compare_values, format_significant, lowest_eigenvalues, rasterize, spectrum_csv, EigenOptions,
    SolverKind, Spectrum,
};
use isodrum::tiling::{parse_gluing_file, FamilyPair, GluingGraph, SignConvention};
use isodrum::transplant::{decomposition_signature, is_nontrivial, solve_family, solve_transplantation, verify_transplantation};

use crate::error::CliError;
use crate::{Class, Command, DomainArgs, OutputFormat, SideArgs, SolverArgs};

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Families { family } => families(family.as_deref()),
        Command::Transplant {
            family,
            convention,
            self_pair,
            out,
        } => {
            let pair = load_family(&family.family)?;
            let pair = if self_pair {
                FamilyPair::new(pair.family_id.clone(), pair.left.clone(), pair.left.clone())?
            } else {
                pair
            };
            emit(&transplant_report(&pair, convention)?, out.as_deref())
        }
        Command::Unfold2d {
            family,
            side,
            base,
            out,
        } => {
            let pair = load_family(&family.family)?;
            let tile = base_tile(&base)?;
            let a = build_assembly(graph(&pair, side.class), &tile, side.root)?;
            emit(&polygon_list(&pair, side.class, &a)?, out.as_deref())
        }
        Command::Build3d {
            family,
            side,
            base,
            prism,
            out,
            format,
        } => {
            let format = out.as_deref().map(|p| mesh_format(format, p)).transpose()?;
            let pair = load_family(&family.family)?;
            let a = assemble(&pair, &side, &base, prism)?;
            print!("{}", assembly_summary(&pair, side.class, &a));
            if let (Some(path), Some(format)) = (out, format) {
                let bytes = export_mesh(&a, format)?;
                write_file(&path, &bytes)?;
                println!("mesh: {}", path.display());
            }
            Ok(())
        }
        Command::Spectrum {
            family,
            side,
            domain,
            solver,
        } => {
            validate(&domain, &solver)?;
            let pair = load_family(&family.family)?;
            let a = assemble(&pair, &side, &domain.base, domain.prism)?;
            let s = spectrum(&a, &domain, &solver)?;
            emit(&spectrum_csv(&s.eigenvalues, None), solver.out.as_deref())
        }
        Command::Compare { family, domain, solver } => {
            validate(&domain, &solver)?;
            let pair = load_family(&family.family)?;
            let (sa, sb) = both_sides(&pair, &domain, &solver)?;
            let report = compare_values(&sa.eigenvalues, &sb.eigenvalues, solver.modes)?;
            eprintln!(
                "max |lambda_A - lambda_B| = {:.4e}, L2 difference = {:.4e}",
                report.max_abs_diff, report.l2_diff
            );
            emit(&spectrum_csv(&sa.eigenvalues, Some(&sb.eigenvalues)), solver.out.as_deref())
        }
        Command::Report { table, domain, solver } => {
            validate(&domain, &solver)?;
            let id = format!("7_{table}");
            let pair = load_family(&id)?;
            let (sa, sb) = both_sides(&pair, &domain, &solver)?;
            let report = compare_values(&sa.eigenvalues, &sb.eigenvalues, solver.modes)?;
            let csv = spectrum_csv(&sa.eigenvalues, Some(&sb.eigenvalues));
            if solver.format == Some(OutputFormat::Csv) && solver.out.is_none() {
                print!("{csv}");
                return Ok(());
            }
            let mut text = String::new();
            writeln!(text, "Table {table}: class {id}, h = {}, {} modes, {} interior nodes", domain.h, solver.modes, sa.info.n)
                .expect("write to string");
            writeln!(text, "{:>3}  {:>16}  {:>16}  {:>12}", "k", format!("{id} #A"), format!("{id} #B"), "Difference")
                .expect("write to string");
            for (k, d) in report.diffs.iter().enumerate() {
                writeln!(
                    text,
                    "{:>3}  {:>16}  {:>16}  {:>12.4e}",
                    k + 1,
                    format_significant(sa.eigenvalues[k], 10),
                    format_significant(sb.eigenvalues[k], 10),
                    d
                )
                .expect("write to string");
            }
            writeln!(text, "max |lambda_A - lambda_B| = {:.4e}", report.max_abs_diff).expect("write to string");
            writeln!(text, "L2 difference = {:.4e}", report.l2_diff).expect("write to string");
            print!("{text}");
            if let Some(path) = &solver.out {
                write_file(path, csv.as_bytes())?;
            }
            Ok(())
        }
    }
}

fn families(filter: Option<&str>) -> Result<(), CliError> {
    let ids: Vec<&str> = match filter {
        Some(id) if catalog::family(id).is_some() => vec![id],
        Some(id) => return Err(CliError::UnknownFamily(id.to_string())),
        None => catalog::family_ids().collect(),
    };
    println!("{:<6} {:>5}  {:<10} status", "family", "tiles", "signature");
    for id in ids {
        let pair = catalog::family(id).expect("shipped family");
        let basis = solve_family(&pair, SignConvention::Dirichlet);
        let sig = match decomposition_signature(&basis).counts {
            Some((k, m)) => format!("({k},{m})"),
            None => "-".to_string(),
        };
        let status = format!("{:?}", pair.status).to_lowercase();
        println!("{:<6} {:>5}  {:<10} {}", id, pair.n_tiles(), sig, status);
    }
    Ok(())
}

fn load_family(spec: &str) -> Result<FamilyPair, CliError> {
    if let Some(pair) = catalog::family(spec) {
        return Ok(pair);
    }
    let path = Path::new(spec);
    if !path.is_file() {
        return Err(CliError::UnknownFamily(spec.to_string()));
    }
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(parse_gluing_file(&bytes)?)
}

fn graph(pair: &FamilyPair, class: Class) -> &GluingGraph {
    match class {
        Class::A => &pair.left,
        Class::B => &pair.right,
    }
}

fn base_tile(spec: &str) -> Result<BaseTile, CliError> {
    Ok(match spec {
        "simplex" => BaseTile::basic_simplex(),
        "wall" => BaseTile::wall(),
        "cube" => BaseTile::unit_cube(),
        "right-isosceles" => BaseTile::right_isosceles(),
        "30-60-90" => BaseTile::thirty_sixty_ninety(),
        "equilateral" => BaseTile::equilateral(),
        file => {
            let path = PathBuf::from(file);
            let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io { path, source })?;
            BaseTile::parse(&text)?
        }
    })
}

fn assemble(pair: &FamilyPair, side: &SideArgs, base: &str, prism: Option<f64>) -> Result<Assembly, CliError> {
    let tile = base_tile(base)?;
    let a = build_assembly(graph(pair, side.class), &tile, side.root)?;
    match prism {
        Some(height) => Ok(extrude_prism(&a, height)?),
        None => Ok(a),
    }
}

fn validate(domain: &DomainArgs, solver: &SolverArgs) -> Result<(), CliError> {
    if !(domain.h > 0.0 && domain.h.is_finite()) {
        return Err(CliError::Usage(format!("--h must be positive, got {}", domain.h)));
    }
    if solver.modes == 0 {
        return Err(CliError::Usage("--modes must be at least 1".into()));
    }
    if !(solver.tol > 0.0 && solver.tol < 1.0) {
        return Err(CliError::Usage(format!("--tol must lie in (0, 1), got {}", solver.tol)));
    }
    if matches!(solver.format, Some(OutputFormat::Obj | OutputFormat::Stl)) {
        return Err(CliError::Usage("spectra are written as csv".into()));
    }
    Ok(())
}

fn spectrum(a: &Assembly, domain: &DomainArgs, solver: &SolverArgs) -> Result<Spectrum, CliError> {
    let r = rasterize(a, domain.h)?;
    if !r.is_commensurate() {
        eprintln!(
            "warning: tile vertices do not lie on the h = {} lattice; the grid boundary only approximates the domain",
            domain.h
        );
    }
    let l = assemble_laplacian(&r)?;
    let opts = EigenOptions {
        tol: solver.tol,
        seed: solver.seed,
        ..EigenOptions::default()
    };
    let s = lowest_eigenvalues(&l, solver.modes, &opts)?;
    let worst = s.info.residuals.iter().copied().fold(0.0, f64::max);
    let kind = match s.info.kind {
        SolverKind::Dense => "dense",
        SolverKind::ShiftInvertKrylov => "shift-invert block Krylov",
    };
    eprintln!(
        "n = {}, solver = {kind}, iterations = {}, worst relative residual = {worst:.2e}",
        s.info.n, s.info.iterations
    );
    Ok(s)
}

fn both_sides(pair: &FamilyPair, domain: &DomainArgs, solver: &SolverArgs) -> Result<(Spectrum, Spectrum), CliError> {
    let side = |class| SideArgs { class, root: 0 };
    let a = assemble(pair, &side(Class::A), &domain.base, domain.prism)?;
    let b = assemble(pair, &side(Class::B), &domain.base, domain.prism)?;
    Ok((spectrum(&a, domain, solver)?, spectrum(&b, domain, solver)?))
}

fn transplant_report(pair: &FamilyPair, convention: SignConvention) -> Result<String, CliError> {
    let a = pair.left.to_signed_matrices(convention);
    let b = pair.right.to_signed_matrices(convention);
    let basis = solve_transplantation(&a, &b)?;
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "# family {} ({} tiles, {convention})", pair.family_id, pair.n_tiles()).expect("write to string");
    writeln!(w, "# dimension {}", basis.dimension()).expect("write to string");
    let sig = decomposition_signature(&basis);
    match sig.counts {
        Some((k, m)) => writeln!(w, "# signature ({k},{m})"),
        None => writeln!(w, "# signature none"),
    }
    .expect("write to string");
    let nontrivial = is_nontrivial(&basis);
    writeln!(w, "# nontrivial {}", if nontrivial { "yes" } else { "no" }).expect("write to string");
    if !nontrivial {
        writeln!(w, "# warning: trivial pair, the span contains a scaled signed permutation (the sides are congruent)").expect("write to string");
    }
    for (i, t) in basis.matrices().iter().enumerate() {
        let residual = verify_transplantation(&t.to_rational(), &a, &b)?;
        let status = if residual.is_zero() { "zero" } else { "nonzero" };
        writeln!(w, "# basis {i}, residual {status}").expect("write to string");
        write!(w, "{t}").expect("write to string");
    }
    if let Some((tk, tm)) = &sig.representatives {
        writeln!(w, "# T_k").expect("write to string");
        write!(w, "{tk}").expect("write to string");
        writeln!(w, "# T_m").expect("write to string");
        write!(w, "{tm}").expect("write to string");
    }
    Ok(out)
}

fn polygon_list(pair: &FamilyPair, class: Class, a: &Assembly) -> Result<String, CliError> {
    let g = graph(pair, class);
    let mut out = String::new();
    writeln!(out, "# family {} class {class:?}, {} tiles, overlapping {}", pair.family_id, g.n_tiles(), a.is_overlapping())
        .expect("write to string");
    for (t, poly) in a.polygons()?.iter().enumerate() {
        let pts: Vec<String> = poly.iter().map(|p| format!("{} {}", fmt_coord(p.x), fmt_coord(p.y))).collect();
        writeln!(out, "tile {} {}", g.label(t), pts.join("  ")).expect("write to string");
    }
    Ok(out)
}

fn fmt_coord(x: f64) -> String {
    // avoid printing -0
    let x = if x.abs() < 1e-12 { 0.0 } else { x };
    let s = format_significant(x, 12);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn assembly_summary(pair: &FamilyPair, class: Class, a: &Assembly) -> String {
    let g = graph(pair, class);
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "family {} class {class:?}", pair.family_id).expect("write to string");
    writeln!(w, "tiles {}", a.tiles().len()).expect("write to string");
    writeln!(w, "boundary faces {}", a.boundary_faces().len()).expect("write to string");
    writeln!(w, "slit pairs {}", a.coincident_faces().len()).expect("write to string");
    for (p, q) in a.coincident_faces() {
        writeln!(w, "  slit tile {} face {} / tile {} face {}", g.label(p.tile), p.face, g.label(q.tile), q.face)
            .expect("write to string");
    }
    writeln!(w, "overlapping {}", a.is_overlapping()).expect("write to string");
    for t in a.tiles() {
        let pts: Vec<String> = t
            .vertices
            .iter()
            .map(|p| format!("({} {} {})", fmt_coord(p.x), fmt_coord(p.y), fmt_coord(p.z)))
            .collect();
        writeln!(w, "tile {} {}", g.label(t.index), pts.join(" ")).expect("write to string");
    }
    out
}

fn mesh_format(format: Option<OutputFormat>, path: &Path) -> Result<MeshFormat, CliError> {
    match format {
        Some(OutputFormat::Obj) => Ok(MeshFormat::Obj),
        Some(OutputFormat::Stl) => Ok(MeshFormat::Stl),
        Some(OutputFormat::Csv) => Err(CliError::Usage("meshes are written as obj or stl".into())),
        None => {
            let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
            Ok(ext.parse::<MeshFormat>()?)
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
