use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use clap::ValueEnum;
use manifold_tv::io::{
    lch_image_to_rgb, read_csv, read_mvf, read_ppm, rgb_image_to_lch, write_csv, write_glyph_json,
    write_hue_ppm, write_mvf, write_ppm, RawMvf,
};
use manifold_tv::metrics::{delta_snr, psnr_rgb, MetricReport};
use nalgebra::Vector3;
use manifold_tv::solvers::TracePoint;
use manifold_tv::synth::{
    dti_ls_fit, rician_corrupt_all, stejskal_tanner_forward, synth_pos3_image, synth_s2_image,
    synth_so3_series, tangent_gaussian_noise, vmf_noise, DwiProtocol, RNG_NAME,
};
use manifold_tv::{
    functional_value, with_manifold, Algorithm, DataTerm, DenoiseParams, Euclidean, Execution,
    Huber, Image, LambdaSchedule, Lch, Manifold, ManifoldKind, MeanConfig, Regularizer, Rotations,
    Shape, Spd, Sphere,
};
use serde_json::Value;

use crate::args::*;
use crate::report::{CliError, CliResult, Report};

fn name<E: ValueEnum>(e: E) -> String {
    e.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

fn path_value(p: &Path) -> Value {
    Value::String(p.display().to_string())
}

fn parse_shape(s: &str) -> CliResult<Shape> {
    let dims = s
        .split([',', 'x'])
        .map(|d| d.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::usage(format!("--shape {s:?} is not `n` or `rows,cols`")))?;
    Shape::from_dims(&dims).map_err(|_| CliError::usage(format!("--shape {s:?} needs 1 or 2 sizes")))
}

fn extension(p: &Path) -> String {
    p.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase()
}

fn require_kind(raw: &RawMvf, want: &ManifoldKind, flag: &str) -> CliResult<()> {
    if &raw.kind != want {
        return Err(CliError::usage(format!("{flag} needs a {want} image, got {}", raw.kind)));
    }
    Ok(())
}

pub fn synth(a: &SynthArgs, report: &mut Report) -> CliResult<()> {
    let default = match a.phantom {
        Phantom::Dti => "8,8",
        Phantom::S2 => "32,32",
        Phantom::So3 => "130",
    };
    let shape = parse_shape(a.shape.as_deref().unwrap_or(default))?;
    report
        .param("phantom", name(a.phantom))
        .param("shape", shape.to_string())
        .param("output", path_value(&a.output));
    let raw = match (a.phantom, shape) {
        (Phantom::Dti, Shape::Grid { rows, cols }) => {
            RawMvf::from_image(&Spd, &synth_pos3_image(rows, cols)?)
        }
        (Phantom::S2, Shape::Grid { rows, cols }) => {
            RawMvf::from_image(&Sphere, &synth_s2_image(rows, cols)?)
        }
        (Phantom::So3, Shape::Signal(n)) => RawMvf::from_image(&Rotations, &synth_so3_series(n)?),
        (p, s) => {
            return Err(CliError::usage(format!(
                "--shape {s} does not suit the {} phantom ({} expects {})",
                name(p),
                name(p),
                if p == Phantom::So3 { "`n`" } else { "`rows,cols`" }
            )))
        }
    };
    write_mvf(&a.output, &raw)?;
    report.result("manifold", raw.kind.tag()).result("pixels", raw.shape.len());
    Ok(())
}

pub fn noise(a: &NoiseArgs, report: &mut Report) -> CliResult<()> {
    report
        .param("model", name(a.model))
        .param("seed", a.seed)
        .param("rng", RNG_NAME)
        .param("input", path_value(&a.input))
        .param("output", path_value(&a.output));
    let raw = read_mvf(&a.input)?;
    report.param("manifold", raw.kind.tag());
    let sigma = |report: &mut Report| -> CliResult<f64> {
        let s = a.sigma.ok_or_else(|| {
            CliError::usage(format!("--model {} requires --sigma", name(a.model)))
        })?;
        report.param("sigma", s);
        Ok(s)
    };
    let out = match a.model {
        NoiseModel::Rician => {
            require_kind(&raw, &ManifoldKind::Spd, "--model rician")?;
            let s = sigma(report)?;
            report.param("b", a.b).param("a0", a.a0).param("dirs", a.dirs);
            let proto = DwiProtocol::with_directions(a.dirs, a.b, a.a0)?;
            let dwis = stejskal_tanner_forward(&raw.to_image(&Spd)?, &proto);
            let noisy = rician_corrupt_all(&dwis, s, a.seed)?;
            RawMvf::from_image(&Spd, &dti_ls_fit(&noisy, &proto)?)
        }
        NoiseModel::Vmf => {
            require_kind(&raw, &ManifoldKind::Sphere, "--model vmf")?;
            let kappa = a.kappa.ok_or_else(|| CliError::usage("--model vmf requires --kappa"))?;
            report.param("kappa", kappa);
            let img = vmf_noise(&raw.to_image(&Sphere)?, kappa, a.seed, Execution::Parallel)?;
            RawMvf::from_image(&Sphere, &img)
        }
        NoiseModel::Tangent | NoiseModel::Wrapped => {
            if a.model == NoiseModel::Wrapped {
                require_kind(&raw, &ManifoldKind::Circle, "--model wrapped")?;
            }
            let s = match (a.sigma, a.kappa) {
                (Some(_), Some(_)) => {
                    return Err(CliError::usage("give either --sigma or --kappa, not both"))
                }
                (None, Some(k)) if k > 0.0 => {
                    report.param("kappa", k);
                    1.0 / k.sqrt()
                }
                (None, Some(k)) => {
                    return Err(CliError::usage(format!("--kappa must be positive, got {k}")))
                }
                _ => sigma(report)?,
            };
            report.param("sigma", s);
            with_manifold!(&raw.kind, m => {
                let img = tangent_gaussian_noise(&m, &raw.to_image(&m)?, s, a.seed, Execution::Parallel)?;
                CliResult::Ok(RawMvf::from_image(&m, &img))
            })?
        }
    };
    write_mvf(&a.output, &out)?;
    report.result("pixels", out.shape.len());
    Ok(())
}

struct Solved {
    output: RawMvf,
    trace: Vec<TracePoint>,
    initial: f64,
    fallbacks: usize,
}

fn solve<M: Manifold>(m: &M, start: &RawMvf, data: &RawMvf, params: &DenoiseParams) -> CliResult<Solved> {
    let x0 = start.to_image(m)?;
    let f = data.to_image(m)?;
    let initial = functional_value(m, &x0, &f, params)?;
    let report = manifold_tv::solvers::denoise_from(m, &f, &x0, params)?;
    Ok(Solved {
        output: RawMvf::from_image(m, &report.output),
        trace: report.trace,
        initial,
        fallbacks: report.mean_fallbacks,
    })
}

pub fn denoise(a: &DenoiseArgs, report: &mut Report) -> CliResult<()> {
    let huber = Huber::new(a.tau, a.huber_omega)?;
    let data_term = match a.data {
        DataKind::L1 => DataTerm::L1,
        DataKind::L2 => DataTerm::L2,
        DataKind::Huber => DataTerm::Huber(huber),
    };
    let regularizer = match a.reg {
        RegKind::Tv => Regularizer::Tv,
        RegKind::Tv2 => Regularizer::Tv2,
        RegKind::Huber => Regularizer::Huber(huber),
    };
    let algorithm = match a.algo {
        Algo::Cyclic => Algorithm::Cyclic,
        Algo::Parallel => Algorithm::Parallel,
        Algo::ParallelFast => Algorithm::ParallelFast,
    };
    let params = DenoiseParams {
        data_term,
        regularizer,
        alpha: a.alpha,
        schedule: LambdaSchedule { c: a.lambda_c, omega: a.lambda_omega },
        iterations: a.iters,
        algorithm,
        mean: MeanConfig { tol: a.mean_tol, max_iter: a.mean_iters },
        execution: Execution::Parallel,
    };
    let data_path = a.data_image.as_ref().unwrap_or(&a.input);
    report
        .param("input", path_value(&a.input))
        .param("data_image", path_value(data_path))
        .param("output", path_value(&a.output))
        .param("data", name(a.data))
        .param("reg", name(a.reg))
        .param("alpha", a.alpha)
        .param("iters", a.iters)
        .param("algo", name(a.algo))
        .param("lambda_c", a.lambda_c)
        .param("lambda_omega", a.lambda_omega);
    if a.data == DataKind::Huber || a.reg == RegKind::Huber {
        report.param("tau", a.tau).param("huber_omega", a.huber_omega);
    }
    if algorithm == Algorithm::Parallel {
        report.param("mean_tol", a.mean_tol).param("mean_iters", a.mean_iters);
    }
    if let Some(t) = &a.trace {
        report.param("trace", path_value(t));
    }
    params.validate()?;

    let start = read_mvf(&a.input)?;
    let data = match &a.data_image {
        Some(p) => read_mvf(p)?,
        None => start.clone(),
    };
    report.param("manifold", start.kind.tag()).param("shape", start.shape.to_string());
    if data.kind != start.kind || data.shape != start.shape {
        return Err(manifold_tv::Error::Format(format!(
            "data image is {} {} but the input is {} {}",
            data.kind, data.shape, start.kind, start.shape
        ))
        .into());
    }

    let clock = Instant::now();
    let solved = with_manifold!(&start.kind, m => solve(&m, &start, &data, &params))?;
    let seconds = clock.elapsed().as_secs_f64();
    write_mvf(&a.output, &solved.output)?;
    if let Some(path) = &a.trace {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "iteration,functional")?;
        for p in &solved.trace {
            writeln!(w, "{},{}", p.iteration, p.value)?;
        }
        w.flush()?;
    }
    let last = solved.trace.last().map(|p| p.value).unwrap_or(solved.initial);
    report
        .result("initial_functional", solved.initial)
        .result("final_functional", last)
        .result("mean_fallbacks", solved.fallbacks)
        .result("seconds", seconds);
    Ok(())
}

fn rgb_image(raw: &RawMvf, flag: &str) -> CliResult<Image<Vector3<f64>>> {
    if raw.kind == ManifoldKind::lch() {
        return Ok(lch_image_to_rgb(&raw.to_image(&Lch::new())?).0);
    }
    require_kind(raw, &ManifoldKind::Euclidean(3), flag)?;
    let img = raw.to_image(&Euclidean::new(3))?;
    Ok(img.map(|p| Vector3::new(p[0], p[1], p[2])))
}

fn metric_results(report: &mut Report, m: &MetricReport) {
    report
        .result(&m.name, m.value.to_string())
        .result("value_db", serde_json::to_value(m.value).unwrap_or(Value::Null))
        .result("pixels", m.pixel_count);
}

pub fn metric(a: &MetricArgs, report: &mut Report) -> CliResult<()> {
    report.param("kind", name(a.kind)).param("g", path_value(&a.g)).param("x", path_value(&a.x));
    let g = read_mvf(&a.g)?;
    let x = read_mvf(&a.x)?;
    let m = match a.kind {
        MetricKind::Dsnr => {
            let f_path = a.f.as_ref().ok_or_else(|| CliError::usage("--kind dsnr requires -f"))?;
            report.param("f", path_value(f_path));
            let f = read_mvf(f_path)?;
            if f.kind != g.kind || x.kind != g.kind {
                return Err(manifold_tv::Error::Format(format!(
                    "manifolds differ: g {}, f {}, x {}",
                    g.kind, f.kind, x.kind
                ))
                .into());
            }
            report.param("manifold", g.kind.tag());
            with_manifold!(&g.kind, m => {
                CliResult::Ok(delta_snr(&m, &g.to_image(&m)?, &f.to_image(&m)?, &x.to_image(&m)?)?)
            })?
        }
        MetricKind::Psnr => psnr_rgb(&rgb_image(&g, "-g")?, &rgb_image(&x, "-x")?)?,
    };
    metric_results(report, &m);
    Ok(())
}

pub fn convert(a: &ConvertArgs, report: &mut Report) -> CliResult<()> {
    let (from, to) = (extension(&a.input), extension(&a.output));
    report
        .param("input", path_value(&a.input))
        .param("output", path_value(&a.output));
    if let Some(c) = a.color {
        report.param("color", name(c));
    }
    let create = |p: &Path| -> CliResult<BufWriter<File>> { Ok(BufWriter::new(File::create(p)?)) };
    let written = match (from.as_str(), to.as_str()) {
        ("mvf", "csv") => {
            let raw = read_mvf(&a.input)?;
            let mut w = create(&a.output)?;
            write_csv(&raw, &mut w)?;
            w.flush()?;
            "csv"
        }
        ("mvf", "json") => {
            let raw = read_mvf(&a.input)?;
            let mut w = create(&a.output)?;
            write_glyph_json(&raw, &mut w)?;
            w.flush()?;
            "glyph/1"
        }
        ("mvf", "ppm") => {
            let raw = read_mvf(&a.input)?;
            let mut w = create(&a.output)?;
            if raw.kind == ManifoldKind::Circle {
                write_hue_ppm(&raw, &mut w)?;
            } else {
                let kind = raw.kind.clone();
                let rgb = rgb_image(&raw, "-i").map_err(|_| {
                    CliError::usage(format!("PPM export needs an s1, lch or euclidean:3 image, got {kind}"))
                })?;
                write_ppm(&rgb, &mut w)?;
            }
            w.flush()?;
            "ppm"
        }
        ("mvf", "mvf") => {
            let raw = read_mvf(&a.input)?;
            let out = match a.color {
                Some(Color::Rgb) if raw.kind == ManifoldKind::lch() => {
                    let (rgb, clamped) = lch_image_to_rgb(&raw.to_image(&Lch::new())?);
                    report.result("clamped_pixels", clamped);
                    let e = Euclidean::new(3);
                    RawMvf::from_image(&e, &rgb.map(|p| nalgebra::DVector::from_column_slice(p.as_slice())))
                }
                Some(Color::Lch) if raw.kind == ManifoldKind::Euclidean(3) => {
                    let rgb = rgb_image(&raw, "-i")?;
                    RawMvf::from_image(&Lch::new(), &rgb_image_to_lch(&rgb))
                }
                _ => {
                    return Err(CliError::usage(format!(
                        "MVF to MVF conversion needs --color rgb (from lch) or --color lch (from euclidean:3); input is {}",
                        raw.kind
                    )))
                }
            };
            write_mvf(&a.output, &out)?;
            "mvf"
        }
        ("csv", "mvf") => {
            let tag = a
                .manifold
                .as_deref()
                .ok_or_else(|| CliError::usage("CSV input requires --manifold"))?;
            let kind = ManifoldKind::from_tag(tag).map_err(|e| CliError::usage(format!("--manifold: {e}")))?;
            let shape = a.shape.as_deref().map(parse_shape).transpose()?;
            report.param("manifold", kind.tag());
            let raw = read_csv(BufReader::new(File::open(&a.input)?), kind, shape)?;
            raw.validate()?;
            write_mvf(&a.output, &raw)?;
            "mvf"
        }
        ("ppm", "mvf") => {
            let rgb = read_ppm(&std::fs::read(&a.input)?)?;
            let raw = match a.color.unwrap_or(Color::Lch) {
                Color::Lch => RawMvf::from_image(&Lch::new(), &rgb_image_to_lch(&rgb)),
                Color::Rgb => RawMvf::from_image(
                    &Euclidean::new(3),
                    &rgb.map(|p| nalgebra::DVector::from_column_slice(p.as_slice())),
                ),
            };
            write_mvf(&a.output, &raw)?;
            "mvf"
        }
        (f, t) => {
            return Err(CliError::usage(format!(
                "no conversion from .{f} to .{t}; supported: mvf->csv|json|ppm|mvf, csv->mvf, ppm->mvf"
            )))
        }
    };
    report.result("format", written);
    Ok(())
}
