//! One function per command.

use std::fmt::Write;

use hilbert_kit::dynamics::limit_set::{coverage_gap, limit_set_approx, LimitSetOptions};
use hilbert_kit::dynamics::probes::{shadow_lemma_probe, SHADOW_LEMMA};
use hilbert_kit::dynamics::shadow::{shadow_contains, ShadowQuery};
use hilbert_kit::dynamics::GroupExample;
use hilbert_kit::faces::{face_of_chart, FaceKey};
use hilbert_kit::facts::{
    closure_ball_sample, fact_suite, semicontinuity_probe, standard_semicontinuity_suite, BallRatio,
    FACE_IN_SCALED_BALL, SCALED_BALL_IN_BALL,
};
use hilbert_kit::omega_f::{almost_continuity_points, grain_of_sand_probe, GrainStatus, OmegaFShape, StepFunction};
use hilbert_kit::svg::{body_svg, omega_f_svg, VerticalMark};
use hilbert_kit::{extended_distance, ClosurePoint, ConvexBody};
use nalgebra::DVector;
use serde_json::{json, Value};

use crate::config::{Command, RunConfig};
use crate::output::{json_document, json_num, num, sibling, svg_document, Artifact, Csv};
use crate::{CliError, Outcome};

pub const LOWER_SEMICONTINUITY: &str = "the extended metric is lower semi-continuous";
pub const GRAIN_OF_SAND: &str = "a small ball near a continuity anchor is covered by nearby large balls";

fn point(body: &ConvexBody, v: &[f64], name: &str) -> Result<DVector<f64>, CliError> {
    if v.len() != body.dim() {
        return Err(CliError::Config(format!(
            "`{name}` has {} coordinates, the body has dimension {}",
            v.len(),
            body.dim()
        )));
    }
    Ok(DVector::from_column_slice(v))
}

fn coords(v: &DVector<f64>) -> Vec<String> {
    v.iter().map(|&c| num(c)).collect()
}

fn coord_header(d: usize) -> Vec<String> {
    ["x", "y", "z", "w"]
        .iter()
        .take(d)
        .map(|s| s.to_string())
        .chain((4..d).map(|k| format!("u{k}")))
        .collect()
}

fn json_vec(v: &DVector<f64>) -> Value {
    Value::Array(v.iter().map(|&c| json_num(c)).collect())
}

struct Run<'a> {
    config: &'a RunConfig,
    summary: String,
    failures: Vec<String>,
    artifacts: Vec<Artifact>,
}

impl<'a> Run<'a> {
    fn say(&mut self, line: impl AsRef<str>) {
        self.summary.push_str(line.as_ref());
        self.summary.push('\n');
    }

    fn fail(&mut self, statement: &str, detail: impl AsRef<str>) {
        self.failures.push(format!("{statement}: {}", detail.as_ref()));
    }

    fn emit(&mut self, contents: String) {
        if let Some(path) = &self.config.output {
            self.artifacts.push(Artifact {
                path: path.clone(),
                contents,
            });
        }
    }

    fn emit_svg(&mut self, svg: &str) {
        if let Some(path) = &self.config.output {
            let path = if path.extension().is_some_and(|e| e == "svg") {
                path.clone()
            } else {
                sibling(path, "svg")
            };
            self.artifacts.push(Artifact {
                path,
                contents: svg_document(self.config, svg),
            });
        }
    }

    fn finish(self) -> Outcome {
        Outcome {
            pass: self.failures.is_empty(),
            summary: self.summary,
            failures: self.failures,
            artifacts: self.artifacts,
        }
    }
}

pub fn execute(config: &RunConfig) -> Result<Outcome, CliError> {
    let mut run = Run {
        config,
        summary: String::new(),
        failures: Vec::new(),
        artifacts: Vec::new(),
    };
    match config.command()? {
        Command::Distance => distance(&mut run)?,
        Command::Face => face(&mut run)?,
        Command::Ball => ball(&mut run)?,
        Command::Shadow => shadow(&mut run)?,
        Command::Limitset => limitset(&mut run)?,
        Command::Coverage => coverage(&mut run)?,
        Command::VerifyFacts => verify_facts(&mut run)?,
        Command::GrainProbe => grain_probe(&mut run)?,
        Command::OmegafBuild => omegaf_build(&mut run)?,
        Command::ShadowLemma => shadow_lemma(&mut run)?,
    }
    Ok(run.finish())
}

fn distance(run: &mut Run) -> Result<(), CliError> {
    let cfg = run.config;
    let body = cfg.load_body()?;
    let x = ClosurePoint::locate_chart(&body, &point(&body, cfg.x.as_ref().unwrap(), "x")?)?;
    let y = ClosurePoint::locate_chart(&body, &point(&body, cfg.y.as_ref().unwrap(), "y")?)?;
    let d = extended_distance(&body, &x, &y)?.value();
    run.say(format!("{d}"));
    run.emit(json_document(cfg, &json!({ "distance": json_num(d) })));
    Ok(())
}

fn face(run: &mut Run) -> Result<(), CliError> {
    let cfg = run.config;
    let body = cfg.load_body()?;
    let u = point(&body, cfg.x.as_ref().unwrap(), "x")?;
    let f = face_of_chart(&body, &u)?;
    let kind = match f.key() {
        FaceKey::Interior => "interior",
        FaceKey::Facets(_) => "facet intersection",
        FaceKey::Point(_) => "extremal point",
        FaceKey::Vertical(_) => "vertical segment",
    };
    let diameter = if f.dim() > 0 && !f.is_interior() {
        Some(f.diameter())
    } else {
        None
    };
    run.say(format!("dimension {} ({kind})", f.dim()));
    let result = json!({
        "dimension": f.dim(),
        "kind": kind,
        "vertices": f.vertices().iter().map(json_vec).collect::<Vec<_>>(),
        "diameter": diameter.map(json_num),
        "distance_to_relative_boundary": (!f.is_interior() && f.dim() > 0).then(|| json_num(f.relative_boundary_distance(&u))),
    });
    run.emit(json_document(cfg, &result));
    Ok(())
}

fn ball(run: &mut Run) -> Result<(), CliError> {
    let cfg = run.config;
    let body = cfg.load_body()?;
    let x = ClosurePoint::locate_chart(&body, &point(&body, cfg.x.as_ref().unwrap(), "x")?)?;
    let pts = closure_ball_sample(&body, &x, cfg.radius.unwrap(), cfg.samples.unwrap())?;
    let header = coord_header(body.dim());
    let mut csv = Csv::new(cfg, &header.iter().map(String::as_str).collect::<Vec<_>>());
    for p in &pts {
        csv.row(&coords(p.chart()));
    }
    run.say(format!("{} ball samples", pts.len()));
    run.emit(csv.finish());
    if body.dim() == 2 {
        let arc: Vec<DVector<f64>> = pts.iter().map(|p| p.chart().clone()).collect();
        run.emit_svg(&body_svg(&body, &[], &[arc])?);
    }
    Ok(())
}

fn shadow(run: &mut Run) -> Result<(), CliError> {
    let cfg = run.config;
    let body = cfg.load_body()?;
    let x = point(&body, cfg.x.as_ref().unwrap(), "x")?;
    let y = point(&body, cfg.y.as_ref().unwrap(), "y")?;
    let q = ShadowQuery::from_chart(&body, &x, &y, cfg.radius.unwrap())?;
    let boundary = body.boundary_samples(cfg.samples.unwrap());
    let mut header = coord_header(body.dim());
    header.extend(["contained".to_string(), "min_distance".to_string()]);
    let mut csv = Csv::new(cfg, &header.iter().map(String::as_str).collect::<Vec<_>>());
    let mut inside = Vec::new();
    for xi in &boundary {
        let r = shadow_contains(&body, &q, xi);
        let mut row = coords(xi);
        row.push(u8::from(r.contained).to_string());
        row.push(num(r.min_distance));
        csv.row(&row);
        if r.contained {
            inside.push(xi.clone());
        }
    }
    run.say(format!("{} of {} boundary samples in the shadow", inside.len(), boundary.len()));
    run.emit(csv.finish());
    if body.dim() == 2 {
        run.emit_svg(&body_svg(&body, &[x, y], &[inside])?);
    }
    Ok(())
}

fn limit_options(cfg: &RunConfig, group: &GroupExample) -> LimitSetOptions {
    LimitSetOptions {
        group_id: group.id.clone(),
        involutions: group.involutions.clone(),
        invariance_tol: cfg.invariance_tol_for(group),
        ..LimitSetOptions::default()
    }
}

fn limitset(run: &mut Run) -> Result<(), CliError> {
    let cfg = run.config;
    let group = cfg.load_group()?;
    let lim = limit_set_approx(&group.body, &group.generators, cfg.length.unwrap(), &limit_options(cfg, &group))?;
    let mut header = coord_header(group.body.dim());
    header.extend(["word_length".to_string(), "word".to_string()]);
    let mut csv = Csv::new(cfg, &header.iter().map(String::as_str).collect::<Vec<_>>());
    for p in &lim.points {
        let mut row: Vec<String> = p.chart.iter().map(|&c| num(c)).collect();
        row.push(p.word_length.to_string());
        row.push(p.word.clone());
        csv.row(&row);
    }
    run.say(format!("{}: {} limit points up to length {}", group.id, lim.len(), lim.max_length));
    run.emit(csv.finish());
    if group.body.dim() == 2 {
        run.emit_svg(&body_svg(&group.body, &lim.chart_points(), &[])?);
    }
    Ok(())
}

fn coverage(run: &mut Run) -> Result<(), CliError> {
    let cfg = run.config;
    let group = cfg.load_group()?;
    let samples = group.body.boundary_samples(cfg.samples.unwrap());
    let opts = limit_options(cfg, &group);
    let mut csv = Csv::new(cfg, &["length", "points", "gap"]);
    for &l in cfg.lengths.as_ref().unwrap() {
        let lim = limit_set_approx(&group.body, &group.generators, l, &opts)?;
        let gap = match coverage_gap(&lim, &samples) {
            Ok(g) => g,
            Err(hilbert_kit::Error::EmptyLimitSet) => f64::INFINITY,
            Err(e) => return Err(e.into()),
        };
        csv.row(&[l.to_string(), lim.len().to_string(), num(gap)]);
        run.say(format!("L = {l:2}  points = {:5}  gap = {gap:.6}", lim.len()));
    }
    run.emit(csv.finish());
    Ok(())
}

fn verify_facts(run: &mut Run) -> Result<(), CliError> {
    let cfg = run.config;
    let rule = cfg.ratio.unwrap();
    let suite = fact_suite(cfg.configurations.unwrap(), cfg.seed, rule, cfg.samples.unwrap())?;
    let n = suite.configurations;
    run.say(format!("{FACE_IN_SCALED_BALL}: {} of {n} configurations violated", suite.face_violations));
    let rule_name = match rule {
        BallRatio::Stated => "stated",
        BallRatio::Tight => "tight",
    };
    run.say(format!(
        "{SCALED_BALL_IN_BALL} ({rule_name} ratio): {} of {n} configurations violated",
        suite.ball_violations
    ));
    if suite.face_violations > 0 {
        run.fail(FACE_IN_SCALED_BALL, format!("{} of {n} configurations violated", suite.face_violations));
    }
    if suite.ball_violations > 0 {
        run.fail(
            SCALED_BALL_IN_BALL,
            format!("{} of {n} configurations violated with the {rule_name} ratio", suite.ball_violations),
        );
    }
    let mut semi = Vec::new();
    for (name, body, seqs) in standard_semicontinuity_suite()? {
        let rep = semicontinuity_probe(&body, &seqs, cfg.tol.unwrap())?;
        run.say(format!("{LOWER_SEMICONTINUITY} on {name}: {} violations", rep.violations));
        for row in rep.rows.iter().filter(|r| !r.pass) {
            run.fail(
                LOWER_SEMICONTINUITY,
                format!("{name}, {}: tail {} below limit {}", row.label, row.tail_min, row.limit),
            );
        }
        semi.push(json!({ "body": name, "report": rep }));
    }
    run.emit(json_document(cfg, &json!({ "containment": suite, "semicontinuity": semi })));
    Ok(())
}

fn grain_probe(run: &mut Run) -> Result<(), CliError> {
    let cfg = run.config;
    let f = StepFunction::from_spec(cfg.step_function.as_ref().unwrap()).map_err(|e| CliError::Config(e.to_string()))?;
    let g = cfg.grain.as_ref().unwrap();
    let rep = grain_of_sand_probe(&f, g)?;
    run.say(format!("status {:?}: {} of {} perturbed points covered", rep.status, rep.covered, rep.checked));
    if rep.status == GrainStatus::Fail {
        run.fail(
            GRAIN_OF_SAND,
            format!("{} of {} perturbed points uncovered, worst margin {}", rep.checked - rep.covered, rep.checked, rep.worst_margin),
        );
    }
    run.emit(json_document(cfg, &rep));
    Ok(())
}

fn omegaf_build(run: &mut Run) -> Result<(), CliError> {
    let cfg = run.config;
    let f = StepFunction::from_spec(cfg.step_function.as_ref().unwrap()).map_err(|e| CliError::Config(e.to_string()))?;
    let shape = OmegaFShape::build(f.clone(), cfg.grid_n.unwrap())?;
    let hull = shape.hull();
    let mut text = String::new();
    let _ = write!(
        text,
        "{} grid angles, {} vertices, {} facets",
        shape.angles().len(),
        hull.vertices().len(),
        hull.num_facets()
    );
    run.say(text);
    let marks: Vec<VerticalMark> = f
        .breakpoints()
        .iter()
        .map(|&t| {
            let h = f.eval(t);
            VerticalMark { theta: t, lo: -h, hi: h }
        })
        .collect();
    let result = json!({
        "grid_angles": shape.angles().len(),
        "vertices": hull.vertices().len(),
        "facets": hull.num_facets(),
        "breakpoints": f.breakpoints(),
        "special_angles": f.special_angles(),
        "continuity_anchors": almost_continuity_points(&f, 1e-9),
        "max_height": f.max_value(),
    });
    run.emit(json_document(cfg, &result));
    run.emit_svg(&omega_f_svg(&shape, &marks));
    Ok(())
}

fn shadow_lemma(run: &mut Run) -> Result<(), CliError> {
    let cfg = run.config;
    let group = cfg.load_group()?;
    let lim = limit_set_approx(&group.body, &group.generators, cfg.length.unwrap(), &limit_options(cfg, &group))?;
    let rep = shadow_lemma_probe(&group.body, &lim, cfg.radii.as_ref().unwrap(), cfg.trials.unwrap(), cfg.seed)?;
    for row in &rep.rows {
        run.say(format!("R = {:4}  hits {:4} / {}", row.radius, row.hits, row.trials));
    }
    match rep.threshold {
        Some(r) => run.say(format!("threshold R* = {r}")),
        None => run.fail(SHADOW_LEMMA, "no grid radius covers every sampled pair"),
    }
    let result = json!({
        "statement": rep.statement,
        "limit_points": rep.limit_points,
        "rows": rep.rows,
        "threshold": rep.threshold,
        "sufficient_radius": json_num(rep.sufficient_radius),
    });
    run.emit(json_document(cfg, &result));
    Ok(())
}
