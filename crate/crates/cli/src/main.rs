use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pinwheel::aorta::{aorta_chain, box_counting_dimension, dyadic_scales, exact_dimension, verify_ifs_invariance};
use pinwheel::census::{aorta_component_census, boundary_dangle, orientation_census, uniformity_report};
use pinwheel::fixed::{
    identity_fixed, origin_configuration, reflection_fixed, symmetric_cycles, classes_at_germ,
};
use pinwheel::fractile::{catalog, classified_faces, count_classes, kite_domino_triangles, triangle_patch};
use pinwheel::gallery::{gallery, marked_faces_scene, GHOST_CLASS};
use pinwheel::io::{catalog_json, chain_json, isometry_json, patch_json, point_json, save_patch};
use pinwheel::marking::mark_patch;
use pinwheel::render::{add_chain, add_marking, add_patch, HalfCache, RenderSpec, Scene, AORTA_COLOR};
use pinwheel::spectral::{catalog_spectrum, to_f64};
use pinwheel::substitution::{fuse_kite_domino, supertile};
use pinwheel::{pinwheel_rule, Patch, ProtoId};

#[derive(Parser)]
#[command(name = "pinwheel", about = "Pinwheel tilings, aorta markings and fractiles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Svg,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Chirality {
    On,
    Off,
}

#[derive(clap::Args, Clone)]
struct Common {
    /// Output file (or directory for `gallery`); standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Triangle, kite or domino supertile.
    Supertile {
        #[arg(long, default_value = "triangle")]
        proto: ProtoId,
        #[arg(long, default_value_t = 2)]
        level: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Fuse a triangle supertile into kites and dominoes.
    Fuse {
        #[arg(long, default_value = "triangle")]
        proto: ProtoId,
        #[arg(long, default_value_t = 2)]
        level: u32,
        #[command(flatten)]
        common: Common,
    },
    /// The aorta polyline and its dimension.
    Aorta {
        #[arg(long, default_value_t = 6)]
        depth: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Kite-domino marking of a supertile.
    Mark {
        #[arg(long, default_value = "kite")]
        proto: ProtoId,
        #[arg(long, default_value_t = 2)]
        level: u32,
        #[arg(long, default_value_t = 4)]
        depth: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Fractile classes of a level-`level` kite marking.
    Fractiles {
        #[arg(long, default_value_t = 3)]
        level: u32,
        #[arg(long, value_enum, default_value = "off")]
        chirality: Chirality,
        #[arg(long, default_value_t = 2)]
        depth: u32,
        #[command(flatten)]
        common: Common,
    },
    /// The fractile substitution matrix.
    SubstMatrix {
        #[arg(long, value_enum, default_value = "off")]
        chirality: Chirality,
        #[command(flatten)]
        common: Common,
    },
    /// Perron eigenvalue, areas and frequencies.
    Spectral {
        #[arg(long, value_enum)]
        chirality: Option<Chirality>,
        /// 13 or 18, an alternative to --chirality.
        #[arg(long)]
        prototiles: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Fixed and periodic configurations.
    FixedPoints {
        #[command(flatten)]
        common: Common,
    },
    /// Orientations of triangles along the aorta of a supertile.
    Orientations {
        #[arg(long, default_value_t = 6)]
        level: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Fractiles of one class on the boundary of a supertile of that class.
    Dangle {
        #[arg(long, default_value_t = 4)]
        level: u32,
        #[arg(long, default_value_t = GHOST_CLASS)]
        class: usize,
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Aorta component sizes and equidistribution of orientations.
    Census {
        #[arg(long, default_value_t = 5)]
        level: u32,
        /// Accepted for reproducible sharding; the census is deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Every figure as SVG.
    Gallery {
        #[arg(long, default_value = "gallery")]
        out: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: u32,
    },
}

type Res<T> = Result<T, pinwheel::Error>;

fn write_atomic(path: &Path, body: &str) -> Res<()> {
    let tmp = path.with_extension("tmp~");
    let io = |e: std::io::Error| pinwheel::Error::Invariant(format!("{}: {e}", path.display()));
    fs::write(&tmp, body).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

fn emit(common: &Common, value: Value, svg: impl FnOnce() -> Res<String>) -> Res<()> {
    let body = match common.format {
        Format::Json => serde_json::to_string_pretty(&value).expect("values serialize") + "\n",
        Format::Svg => svg()?,
    };
    match &common.out {
        Some(p) => write_atomic(p, &body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn no_svg() -> Res<String> {
    Err(pinwheel::Error::Invariant("this subcommand has no SVG output".into()))
}

fn chiral(c: Chirality) -> bool {
    c == Chirality::On
}

fn patch_svg(p: &Patch) -> String {
    let mut s = Scene::new();
    add_patch(&mut s, p);
    s.render(&RenderSpec::default())
}

fn run(cmd: Command) -> Res<()> {
    match cmd {
        Command::Supertile { proto, level, common } => {
            let p = if proto == ProtoId::Triangle {
                supertile(proto, level, pinwheel_rule())?
            } else {
                supertile(proto, level, pinwheel::kite_domino_rule())?
            };
            if common.format == Format::Json {
                let body = save_patch(&p) + "\n";
                return match &common.out {
                    Some(path) => write_atomic(path, &body),
                    None => {
                        print!("{body}");
                        Ok(())
                    }
                };
            }
            emit(&common, Value::Null, || Ok(patch_svg(&p)))
        }
        Command::Fuse { proto, level, common } => {
            let tris = triangle_patch(proto, level);
            let fused = fuse_kite_domino(&Patch::triangles(tris))?;
            let v = json!({
                "tiles": patch_json(&fused.patch)["tiles"],
                "unpaired": fused.unpaired.iter().map(isometry_json).collect::<Vec<_>>(),
            });
            emit(&common, v, || Ok(patch_svg(&fused.patch)))
        }
        Command::Aorta { depth, common } => {
            let c = aorta_chain(depth)?;
            let pts: Vec<(f64, f64)> = aorta_chain(depth.max(10))?.to_f64();
            let est = box_counting_dimension(&pts, &dyadic_scales(2, 7))?;
            let v = json!({
                "chain": chain_json(&c),
                "ifs_invariant": verify_ifs_invariance(depth.min(11))?,
                "dimension": exact_dimension(),
                "box_counting": est.dimension,
            });
            emit(&common, v, || {
                let mut s = Scene::new();
                add_chain(&mut s, &c, AORTA_COLOR, 0.01);
                Ok(s.render(&RenderSpec { origin_marker: true, ..RenderSpec::default() }))
            })
        }
        Command::Mark { proto, level, depth, common } => {
            let tris = triangle_patch(proto, level);
            let marked = mark_patch(&tris)?;
            let (kite, domino) = marked.paired_centers();
            let v = json!({
                "triangles": tris.len(),
                "fragments": marked.fragments.len(),
                "kite_centers": kite.iter().map(point_json).collect::<Vec<_>>(),
                "domino_centers": domino.iter().map(point_json).collect::<Vec<_>>(),
                "unpaired_centers": marked.unpaired_centers().iter().map(point_json).collect::<Vec<_>>(),
            });
            emit(&common, v, || {
                let mut s = Scene::new();
                add_patch(&mut s, &Patch::triangles(tris.clone()));
                add_marking(&mut s, &marked, &HalfCache::new(depth)?, 0.02);
                Ok(s.render(&RenderSpec::default()))
            })
        }
        Command::Fractiles { level, chirality, depth, common } => {
            if !(2..=3).contains(&level) {
                return Err(pinwheel::Error::DepthOverflow { depth: level, max: 3 });
            }
            let tris = kite_domino_triangles(ProtoId::Kite, level - 1);
            let faces = classified_faces(&tris)?;
            let counts = count_classes(&faces);
            let classes = if chiral(chirality) { counts.chiral } else { counts.achiral };
            let v = json!({ "level": level, "faces": counts.faces, "classes": classes, "chiral": counts.chiral, "achiral": counts.achiral });
            emit(&common, v, || Ok(marked_faces_scene(catalog(), &tris, depth)?.render(&RenderSpec::default())))
        }
        Command::SubstMatrix { chirality, common } => {
            let m = catalog().matrix(chiral(chirality));
            emit(&common, json!({ "entries": m.entries }), no_svg)
        }
        Command::Spectral { chirality, prototiles, common } => {
            let ch = match (chirality, prototiles) {
                (Some(c), _) => chiral(c),
                (None, Some(18)) => true,
                (None, Some(13)) | (None, None) => false,
                (None, Some(n)) => return Err(pinwheel::Error::Invariant(format!("no {n}-class catalog"))),
            };
            let s = catalog_spectrum(catalog(), ch)?;
            let v = json!({
                "perron": s.perron,
                "areas": s.areas.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                "frequencies": s.frequencies,
                "exact_frequencies": s.exact_frequencies.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                "exact_frequencies_f64": s.exact_frequencies.iter().map(to_f64).collect::<Vec<_>>(),
                "primitivity_exponent": s.primitivity_exponent,
            });
            emit(&common, v, no_svg)
        }
        Command::FixedPoints { common } => {
            let cat = catalog();
            let ids: Vec<Value> = identity_fixed(cat)
                .iter()
                .map(|f| json!({ "class": f.class, "chiral": f.chiral_index, "fixed_translation": point_json(&f.fixed_translation) }))
                .collect();
            let origin: Vec<Value> = origin_configuration(cat, 4)?
                .iter()
                .map(|f| json!({ "class": f.class, "chiral": f.chiral_index, "placement": isometry_json(&f.classified.placement) }))
                .collect();
            let mut cycles = Vec::new();
            for c in symmetric_cycles(4)? {
                let mut at_origin = Vec::new();
                for g in &c.germs {
                    let fs = classes_at_germ(cat, g, 2 * c.period() as u32)?;
                    let mut cls: Vec<usize> = fs.iter().map(|f| f.class).collect();
                    cls.dedup();
                    at_origin.push(cls);
                }
                cycles.push(json!({ "period": c.period(), "reflection_symmetric": c.reflection_symmetric, "classes_at_origin": at_origin }));
            }
            let v = json!({
                "identity_fixed": ids,
                "origin_configuration": origin,
                "reflection_fixed": reflection_fixed(cat),
                "half_turn_cycles": cycles,
            });
            emit(&common, v, no_svg)
        }
        Command::Orientations { level, common } => {
            let c = orientation_census(level)?;
            let mut v = serde_json::to_value(&c)?;
            v["distinct"] = json!(c.distinct());
            emit(&common, v, no_svg)
        }
        Command::Dangle { level, class, depth, common } => {
            let cat = catalog();
            let d = boundary_dangle(cat, class, level)?;
            let v = json!({
                "class": d.class,
                "level": d.level,
                "count": d.faces.len(),
                "orientations": d.orientations,
                "faces": d.faces.iter().map(|f| json!({ "chiral": f.chiral_index, "placement": isometry_json(&f.placement) })).collect::<Vec<_>>(),
            });
            emit(&common, v, || {
                let cache = HalfCache::new(depth)?;
                let mut s = Scene::new();
                let faces: Vec<_> = d
                    .faces
                    .iter()
                    .map(|f| (pinwheel::fixed::placed_face(cat, f.chiral_index, &f.placement), d.class))
                    .collect();
                pinwheel::render::add_faces(&mut s, &faces, &cache, 0.05);
                s.polyline(4, cache.face(&d.boundary), pinwheel::render::Style::line("#000000", 0.05));
                Ok(s.render(&RenderSpec::default()))
            })
        }
        Command::Census { level, seed, common } => {
            let c = aorta_component_census(level)?;
            let u = uniformity_report(&[100, 1000, 10000])?;
            let v = json!({
                "seed": seed,
                "components": serde_json::to_value(&c)?,
                "interior_sizes_odd": c.interior_sizes_odd(),
                "uniformity": serde_json::to_value(&u)?,
            });
            emit(&common, v, no_svg)
        }
        Command::Gallery { out, depth } => {
            let io = |e: std::io::Error| pinwheel::Error::Invariant(format!("{}: {e}", out.display()));
            fs::create_dir_all(&out).map_err(io)?;
            let figs = gallery(depth)?;
            let mut index = Vec::new();
            for f in &figs {
                write_atomic(&out.join(format!("{}.svg", f.name)), &f.svg)?;
                index.push(json!({ "file": format!("{}.svg", f.name), "title": f.title }));
            }
            write_atomic(&out.join("catalog.json"), &(serde_json::to_string_pretty(&catalog_json(catalog()))? + "\n"))?;
            write_atomic(&out.join("index.json"), &(serde_json::to_string_pretty(&index)? + "\n"))?;
            eprintln!("wrote {} figures to {}", figs.len(), out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
