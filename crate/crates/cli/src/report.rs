//! Machine-readable report document with a versioned schema and
//! deterministic serialization.

use serde::Serialize;

use radform_core::transform::TransformOutcome;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct TowerStepDoc {
    pub generator: String,
    pub index: u32,
    pub radicand: String,
}

#[derive(Debug, Serialize)]
pub struct ParametrizationDoc {
    pub variables: Vec<String>,
    pub components: Vec<ComponentDoc>,
    pub generators: Vec<ComponentDoc>,
    pub strategy: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct ComponentDoc {
    pub name: String,
    pub expression: String,
}

#[derive(Debug, Serialize)]
pub struct TermDoc {
    pub monomial: String,
    pub coefficient: String,
}

#[derive(Debug, Serialize)]
pub struct EquationDoc {
    pub text: String,
    pub terms: Vec<TermDoc>,
}

#[derive(Debug, Serialize)]
pub struct TracingDoc {
    pub tower_degree: u32,
    pub image_degree: u32,
    pub index: u32,
    pub certified: bool,
    pub retries: u32,
}

#[derive(Debug, Serialize)]
pub struct OracleDoc {
    pub samples: usize,
    pub max_relative_residual: f64,
    pub precision_bits: u32,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub version: u32,
    pub status: String,
    pub tower: Vec<TowerStepDoc>,
    pub parametrization: Option<ParametrizationDoc>,
    pub inverse: Option<Vec<ComponentDoc>>,
    pub transformed: Vec<EquationDoc>,
    pub back_substitution: Vec<String>,
    pub tracing: Option<TracingDoc>,
    pub oracle: Option<OracleDoc>,
    pub normalization_unit: Vec<String>,
    pub timings: Option<TimingsDoc>,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct TimingsDoc {
    pub total_ms: u128,
}

pub fn build_report(out: &TransformOutcome, total_ms: Option<u128>) -> ReportDocument {
    let reg = match &out.parametrization {
        Some(q) => q.x_components[0].registry().clone(),
        None => out.tower.registry().clone(),
    };
    let tower = out
        .tower
        .steps()
        .iter()
        .map(|s| TowerStepDoc {
            generator: out.tower.registry().name(s.var).to_owned(),
            index: s.index,
            radicand: s.radicand.to_string(),
        })
        .collect();
    let parametrization = out.parametrization.as_ref().map(|q| ParametrizationDoc {
        variables: out.z_names.clone(),
        components: out
            .symbols
            .vars
            .iter()
            .zip(&q.x_components)
            .map(|(n, c)| ComponentDoc {
                name: n.clone(),
                expression: c.to_string(),
            })
            .collect(),
        generators: out
            .tower
            .steps()
            .iter()
            .zip(&q.d_components)
            .map(|(s, c)| ComponentDoc {
                name: out.tower.registry().name(s.var).to_owned(),
                expression: c.to_string(),
            })
            .collect(),
        strategy: q.trace.clone(),
    });
    let inverse = out.inverse.as_ref().map(|h| {
        h.iter()
            .zip(&out.z_names)
            .map(|(c, z)| ComponentDoc {
                name: z.clone(),
                expression: c.to_string(),
            })
            .collect()
    });
    let transformed_texts = out.transformed_texts();
    let transformed = out
        .transformed
        .iter()
        .zip(&transformed_texts)
        .map(|(g, text)| EquationDoc {
            text: text.clone(),
            terms: g
                .terms
                .iter()
                .map(|(m, c)| TermDoc {
                    monomial: m.to_string(),
                    coefficient: radform_core::kernel::RatFunc::new(
                        c.num.clone(),
                        c.den.clone(),
                    )
                    .to_string(),
                })
                .collect(),
        })
        .collect();
    let _ = reg;
    ReportDocument {
        version: SCHEMA_VERSION,
        status: out.status.as_str().to_owned(),
        tower,
        parametrization,
        inverse,
        transformed,
        back_substitution: out.back_substitution_texts(),
        tracing: out.tracing.as_ref().map(|t| TracingDoc {
            tower_degree: t.tower_degree,
            image_degree: t.image_degree,
            index: t.index,
            certified: t.certified,
            retries: t.retries,
        }),
        oracle: out.oracle.as_ref().map(|o| OracleDoc {
            samples: o.samples,
            max_relative_residual: o.max_residual_approx(),
            precision_bits: o.precision,
            threshold: 2f64.powi(o.threshold_log2.clamp(-1000, 1000) as i32),
            pass: o.pass,
        }),
        normalization_unit: out.units.iter().map(|u| u.to_string()).collect(),
        timings: total_ms.map(|t| TimingsDoc { total_ms: t }),
        warnings: out.warnings.clone(),
        notes: out.notes.clone(),
    }
}

/// Serializes and writes atomically (write to a sibling temp file, rename).
pub fn write_report(doc: &ReportDocument, path: &std::path::Path) -> std::io::Result<()> {
    let json = serde_json::to_string_pretty(doc).expect("report serializes");
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, json.as_bytes())?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
