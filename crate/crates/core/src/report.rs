//! End-to-end classification report for a parsed instance.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::arith::Int;
use crate::mukai::{MukaiError, MukaiVector, TwistParameter};
use crate::roots::lie_algebra_dimension;
use crate::schema::{mukai_to_json, rat_to_json, ParsedInstance, SchemaError};
use crate::singularity::{
    check_retained_triples, classify_singularity, psi_sets, validate_stratum, DualGraph, SingularityError, StratumData,
};
use crate::walls::{curve_classes, enumerate_walls, locate, slope_condition, u_prime, weyl_chamber, WallError, WallVector};

pub const EMBEDDING_CAVEAT: &str =
    "primitive embeddability of the Picard lattice into the K3 lattice is assumed, not verified";

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Wall(#[from] WallError),
    #[error(transparent)]
    Singularity(#[from] SingularityError),
    #[error(transparent)]
    Mukai(#[from] MukaiError),
}

impl PipelineError {
    pub fn is_schema(&self) -> bool {
        matches!(self, PipelineError::Schema(_))
    }
}

#[derive(Debug, Clone, Default)]
pub struct PipelineOptions {
    /// Skip the wall enumeration (it grows quickly with `rk v`).
    pub skip_walls: bool,
    /// Input index of the node to delete; defaults to the lowest-index mark-1 node.
    pub deleted_node: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputSummary {
    pub picard_rank: usize,
    pub picard_signature: [usize; 3],
    pub polarization_square: Value,
    pub mukai_vector: Value,
    pub mukai_square: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationSummary {
    pub ok: bool,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NodeJson {
    pub label: String,
    pub index: usize,
    pub self_intersection: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeJson {
    pub source: String,
    pub target: String,
    pub multiplicity: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DualGraphJson {
    pub nodes: Vec<NodeJson>,
    pub edges: Vec<EdgeJson>,
}

impl From<&DualGraph> for DualGraphJson {
    fn from(g: &DualGraph) -> Self {
        DualGraphJson {
            nodes: g.nodes.iter().map(|n| NodeJson { label: n.label.clone(), index: n.index, self_intersection: n.self_intersection }).collect(),
            edges: g
                .edges
                .iter()
                .map(|e| EdgeJson { source: format!("C_{}", e.a), target: format!("C_{}", e.b), multiplicity: e.multiplicity })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveClassJson {
    pub curve: String,
    pub class: Value,
    pub image_rank: Value,
    pub locus: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SingularityJson {
    pub affine_type: String,
    pub finite_type: String,
    pub node_perm: Vec<usize>,
    pub marks: Vec<i64>,
    pub deleted_node: usize,
    pub exceptional_curves: usize,
    pub dual_graph: DualGraphJson,
    pub psi_plus_count: usize,
    pub psi_plus: Vec<Value>,
    pub v_minus_psi_plus: Vec<Value>,
    pub lie_algebra_dimension: usize,
    pub chamber_word: String,
    pub curve_classes: Vec<CurveClassJson>,
    #[serde(skip)]
    pub dot: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct WallJson {
    pub index: usize,
    pub u: Value,
    pub pairing_with_v: Value,
    pub in_u_prime: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WallSummary {
    pub count: usize,
    pub u_prime_count: usize,
    pub generic_polarization: bool,
    pub walls: Vec<WallJson>,
    /// Whether `Ψ₊ ∐ (v - Ψ₊)` is contained in the wall list (when both exist).
    pub psi_in_walls: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChamberJson {
    pub alpha: Value,
    pub signs: Vec<i8>,
    pub on_walls: Vec<usize>,
    pub generic: Option<bool>,
    pub weyl_word: Option<String>,
    pub slope_condition: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub input: InputSummary,
    pub validation: Option<ValidationSummary>,
    pub singularity: Option<SingularityJson>,
    pub walls: Option<WallSummary>,
    pub chamber: Option<ChamberJson>,
    pub caveats: Vec<String>,
}

impl Report {
    pub fn validation_failed(&self) -> bool {
        self.validation.as_ref().is_some_and(|v| !v.ok)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable report");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let i = &self.input;
        let _ = writeln!(out, "v = {}  <v,v> = {}", compact(&i.mukai_vector), compact(&i.mukai_square));
        let _ = writeln!(out, "Picard rank {}  signature {:?}  (H^2) = {}", i.picard_rank, i.picard_signature, compact(&i.polarization_square));
        if let Some(v) = &self.validation {
            if v.ok {
                let _ = writeln!(out, "stratum: valid");
            } else {
                let _ = writeln!(out, "stratum: INVALID");
                for x in &v.violations {
                    let _ = writeln!(out, "  - {x}");
                }
            }
        }
        if let Some(s) = &self.singularity {
            let _ = writeln!(out, "affine type {}  marks {:?}  deleted node {}", s.affine_type, s.marks, s.deleted_node);
            let _ = writeln!(out, "singularity {}  exceptional curves {}  |Psi+| = {}  dim g = {}", s.finite_type, s.exceptional_curves, s.psi_plus_count, s.lie_algebra_dimension);
            for e in &s.dual_graph.edges {
                let _ = writeln!(out, "  {} -- {} ({})", e.source, e.target, e.multiplicity);
            }
            let _ = writeln!(out, "chamber word {}", s.chamber_word);
            for c in &s.curve_classes {
                let _ = writeln!(out, "  PD[{}] = {}  ({})", c.curve, compact(&c.class), c.locus);
            }
        }
        if let Some(w) = &self.walls {
            let _ = writeln!(out, "walls: {} (U': {})  generic polarization: {}", w.count, w.u_prime_count, w.generic_polarization);
            for x in &w.walls {
                let _ = writeln!(out, "  [{}] u = {}  <v,u> = {}", x.index, compact(&x.u), compact(&x.pairing_with_v));
            }
        }
        if let Some(c) = &self.chamber {
            let _ = writeln!(out, "alpha = {}  generic: {:?}  on walls {:?}", compact(&c.alpha), c.generic, c.on_walls);
            let _ = writeln!(out, "  signs {:?}", c.signs);
            if let Some(w) = &c.weyl_word {
                let _ = writeln!(out, "  weyl word {w}");
            }
            if let Some(s) = c.slope_condition {
                let _ = writeln!(out, "  slope condition {s}");
            }
        }
        for c in &self.caveats {
            let _ = writeln!(out, "note: {c}");
        }
        out
    }
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn wall_json(index: usize, w: &WallVector, v: &MukaiVector) -> WallJson {
    let p = v.pair(w.u());
    WallJson { index, u: mukai_to_json(w.u()), pairing_with_v: rat_to_json(&p), in_u_prime: num::Zero::is_zero(&p) }
}

pub fn input_summary(p: &ParsedInstance) -> InputSummary {
    let sig = p.lattice.signature();
    let hh = p.lattice.norm(&p.h).expect("polarization length checked by the schema");
    InputSummary {
        picard_rank: p.lattice.rank(),
        picard_signature: [sig.pos, sig.neg, sig.null],
        polarization_square: rat_to_json(&hh),
        mukai_vector: mukai_to_json(&p.v),
        mukai_square: rat_to_json(&p.v.square()),
    }
}

pub fn walls_of(p: &ParsedInstance) -> Result<Vec<WallVector>, PipelineError> {
    Ok(enumerate_walls(&p.lattice, &p.h, &p.v)?)
}

pub fn wall_summary(walls: &[WallVector], v: &MukaiVector) -> WallSummary {
    WallSummary {
        count: walls.len(),
        u_prime_count: u_prime(walls, v).len(),
        generic_polarization: walls.is_empty(),
        walls: walls.iter().enumerate().map(|(i, w)| wall_json(i, w, v)).collect(),
        psi_in_walls: None,
    }
}

pub fn twist_of(p: &ParsedInstance) -> Result<Option<TwistParameter>, PipelineError> {
    match &p.alpha_c1 {
        None => Ok(None),
        Some(d) => Ok(Some(TwistParameter::from_divisor(&p.v, &p.h, d)?)),
    }
}

/// Validation, typing, dual graph, Ψ-sets, curve classes, walls and chamber
/// position, in a fixed order.
pub fn pipeline_classify(p: &ParsedInstance, opts: &PipelineOptions) -> Result<Report, PipelineError> {
    let input = input_summary(p);
    let alpha = twist_of(p)?;
    let walls = if opts.skip_walls { None } else { Some(walls_of(p)?) };
    let mut validation = None;
    let mut singularity = None;
    let mut psi_all: Option<Vec<MukaiVector>> = None;
    let mut stratum_word = None;
    let mut slope = None;
    if let Some(strata) = &p.strata {
        let s = StratumData::new(p.lattice.clone(), p.h.clone(), p.v.clone(), strata.clone());
        match validate_stratum(&s) {
            Err(v) => {
                validation = Some(ValidationSummary { ok: false, violations: v.iter().map(ToString::to_string).collect() });
            }
            Ok(()) => {
                validation = Some(ValidationSummary { ok: true, violations: Vec::new() });
                let rep = classify_singularity(&s, opts.deleted_node)?;
                check_retained_triples(&s, &rep)?;
                let (psi, comp) = psi_sets(&s, &rep)?;
                let basis: Vec<MukaiVector> = rep.retained.iter().map(|&i| s.strata[i].0.clone()).collect();
                let word = match &alpha {
                    Some(a) => {
                        let (_, red) = weyl_chamber(a, &basis)?;
                        let retained: Vec<(MukaiVector, Int)> = rep.retained.iter().map(|&i| s.strata[i].clone()).collect();
                        slope = Some(slope_condition(a, &p.v, &retained));
                        red.word.inverse()
                    }
                    None => crate::roots::WeylWord::identity(),
                };
                let classes = curve_classes(&p.v, &basis, &word)?;
                stratum_word = Some(word.to_string());
                singularity = Some(SingularityJson {
                    affine_type: rep.affine.type_name(),
                    finite_type: rep.finite.type_name(),
                    node_perm: rep.affine.node_perm.clone(),
                    marks: rep.marks.clone(),
                    deleted_node: rep.deleted_node,
                    exceptional_curves: rep.dual_graph.nodes.len(),
                    dual_graph: (&rep.dual_graph).into(),
                    psi_plus_count: psi.len(),
                    psi_plus: psi.iter().map(mukai_to_json).collect(),
                    v_minus_psi_plus: comp.iter().map(mukai_to_json).collect(),
                    lie_algebra_dimension: lie_algebra_dimension(&rep.finite),
                    chamber_word: word.to_string(),
                    curve_classes: rep
                        .retained
                        .iter()
                        .zip(&classes)
                        .map(|(&i, c)| CurveClassJson {
                            curve: format!("C_{i}"),
                            class: mukai_to_json(&c.representative),
                            image_rank: rat_to_json(c.image.r()),
                            locus: c.side.locus().to_string(),
                        })
                        .collect(),
                    dot: rep.dual_graph.to_dot(),
                });
                psi_all = Some(psi.into_iter().chain(comp).collect());
            }
        }
    }
    let wall_section = walls.as_ref().map(|ws| {
        let mut summary = wall_summary(ws, &p.v);
        if let Some(psi) = &psi_all {
            summary.psi_in_walls = Some(psi.iter().all(|x| ws.iter().any(|w| w.u() == x)));
        }
        summary
    });
    let chamber = alpha.as_ref().map(|a| {
        let pos = walls.as_ref().map(|ws| locate(a, ws, &p.v));
        ChamberJson {
            alpha: mukai_to_json(a.alpha()),
            signs: pos.as_ref().map(|c| c.signs.iter().map(|(_, s)| *s).collect()).unwrap_or_default(),
            on_walls: pos
                .as_ref()
                .map(|c| c.signs.iter().enumerate().filter(|(_, (_, s))| *s == 0).map(|(i, _)| i).collect())
                .unwrap_or_default(),
            generic: pos.as_ref().map(|c| c.is_generic()),
            weyl_word: stratum_word.clone(),
            slope_condition: slope,
        }
    });
    let mut caveats = vec![EMBEDDING_CAVEAT.to_string()];
    if opts.skip_walls {
        caveats.push("wall enumeration skipped".into());
    }
    if p.strata.is_some() && alpha.is_none() {
        caveats.push("no twist supplied: curve classes are given for the fundamental chamber".into());
    }
    Ok(Report { input, validation, singularity, walls: wall_section, chamber, caveats })
}

/// `pipeline_classify` from raw JSON text.
pub fn pipeline_classify_text(text: &str, opts: &PipelineOptions) -> Result<Report, PipelineError> {
    let p = crate::schema::parse_instance(text)?;
    pipeline_classify(&p, opts)
}
