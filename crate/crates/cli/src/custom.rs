//! Custom state files and plan strings.
//!
//! State file schema (JSON):
//! ```json
//! {
//!   "signature": [
//!     {"mode": {"axis": "x", "electron": 0}},
//!     {"spin": {"electron": 0}}
//!   ],
//!   "terms": [
//!     {"amplitude": [0.7071, 0.0],
//!      "ket": [{"fock": 0, "displacement": [0.0, 0.0]}, {"spin": "up"}]}
//!   ]
//! }
//! ```
//! Amplitudes and displacements are `[re, im]` pairs; the state is
//! renormalized on load.
//!
//! Plan strings list one comma-separated token per signature factor:
//! `t` (trace), `m` (position marginal at the grid point; exactly the three
//! modes of one electron), `pm:<q>`, `mm:<p>`, `f:<q>:<p>`, `e` or
//! `e:<group>` (equal-angle spin), `a:<theta>:<phi>` (fixed sphere angle).

use crate::{CliError, CliResult};
use num_complex::Complex64;
use serde::Deserialize;
use std::path::Path;
use wigviz::engine::{Directive, ReductionPlan};
use wigviz::kernels::{ModeEntry, PhasePoint, SpinAngle};
use wigviz::scene::{FigureRecipe, GridSpec, OpacityMode};
use wigviz::states::{
    Axis, Factor, FactorState, ProductKet, SpinState, StateVector, SystemSignature,
};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Deserialize)]
struct StateDocument {
    signature: Vec<FactorDocument>,
    terms: Vec<TermDocument>,
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum FactorDocument {
    Mode { axis: Axis, electron: u8 },
    Spin { electron: u8 },
}

#[derive(Deserialize)]
struct TermDocument {
    amplitude: [f64; 2],
    ket: Vec<EntryDocument>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EntryDocument {
    Mode {
        fock: u32,
        #[serde(default)]
        displacement: [f64; 2],
    },
    Spin {
        spin: SpinState,
    },
}

pub fn load_state(path: &Path) -> CliResult<StateVector> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("--state-file: cannot read {}: {e}", path.display())))?;
    let doc: StateDocument = serde_json::from_str(&text)
        .map_err(|e| usage(format!("--state-file: invalid JSON: {e}")))?;

    let factors: Vec<Factor> = doc
        .signature
        .iter()
        .map(|f| match f {
            FactorDocument::Mode { axis, electron } => Factor::Mode { axis: *axis, electron: *electron },
            FactorDocument::Spin { electron } => Factor::Spin { electron: *electron },
        })
        .collect();
    let signature = SystemSignature::new(factors).map_err(CliError::Run)?;

    let mut terms = Vec::with_capacity(doc.terms.len());
    for term in &doc.terms {
        let entries: Vec<FactorState> = term
            .ket
            .iter()
            .map(|e| match e {
                EntryDocument::Mode { fock, displacement } => FactorState::Mode(
                    ModeEntry::displaced(Complex64::new(displacement[0], displacement[1]), *fock),
                ),
                EntryDocument::Spin { spin } => FactorState::Spin(*spin),
            })
            .collect();
        terms.push((
            Complex64::new(term.amplitude[0], term.amplitude[1]),
            ProductKet::new(entries),
        ));
    }
    StateVector::normalized(signature, terms).map_err(CliError::Run)
}

fn parse_number(token: &str, what: &str) -> CliResult<f64> {
    token
        .parse()
        .map_err(|_| usage(format!("--plan: bad {what} in `{token}`")))
}

/// Turn a plan string into a figure recipe for `state`.
pub fn build_recipe(
    state: &StateVector,
    plan_text: &str,
    opacity: OpacityMode,
) -> CliResult<FigureRecipe> {
    let sig = state.signature();
    let tokens: Vec<&str> = plan_text.split(',').map(str::trim).collect();
    if tokens.len() != sig.len() {
        return Err(usage(format!(
            "--plan has {} tokens but the state has {} factors",
            tokens.len(),
            sig.len()
        )));
    }

    let mut directives = Vec::with_capacity(tokens.len());
    let mut grid_marked: Vec<usize> = Vec::new();
    for (i, token) in tokens.iter().enumerate() {
        let parts: Vec<&str> = token.split(':').collect();
        let directive = match parts.as_slice() {
            ["t"] => Directive::Trace,
            ["m"] => {
                grid_marked.push(i);
                Directive::PositionMarginal(0.0)
            }
            ["pm", q] => Directive::PositionMarginal(parse_number(q, "position")?),
            ["mm", p] => Directive::MomentumMarginal(parse_number(p, "momentum")?),
            ["f", q, p] => Directive::Fixed(
                PhasePoint::new(parse_number(q, "position")?, parse_number(p, "momentum")?)
                    .map_err(CliError::Run)?,
            ),
            ["e"] => Directive::EqualAngle(0),
            ["e", g] => Directive::EqualAngle(
                g.parse()
                    .map_err(|_| usage(format!("--plan: bad group in `{token}`")))?,
            ),
            ["a", t, p] => Directive::SphereAngle(
                SpinAngle::new(parse_number(t, "theta")?, parse_number(p, "phi")?)
                    .map_err(CliError::Run)?,
            ),
            _ => return Err(usage(format!("--plan: unknown token `{token}`"))),
        };
        directives.push(directive);
    }

    // `m` tokens must cover exactly the three modes of one electron
    let display_electron = if grid_marked.is_empty() {
        None
    } else {
        let electron = match sig.factors()[grid_marked[0]] {
            Factor::Mode { electron, .. } => electron,
            Factor::Spin { .. } => {
                return Err(usage("--plan: `m` applies to mode factors only".to_string()))
            }
        };
        let expected = sig.mode_indices(electron).ok_or_else(|| {
            usage(format!("--plan: electron {electron} lacks a full mode triple"))
        })?;
        let mut marked = grid_marked.clone();
        marked.sort_unstable();
        let mut wanted = expected.to_vec();
        wanted.sort_unstable();
        if marked != wanted {
            return Err(usage(
                "--plan: `m` must mark exactly the x, y, z modes of one electron".to_string(),
            ));
        }
        Some(electron)
    };

    let plan = ReductionPlan::new(directives);
    plan.validate(sig).map_err(CliError::Run)?;

    Ok(FigureRecipe {
        grid: GridSpec::default(),
        sphere_samples: (24, 12),
        opacity,
        threshold: 0.1,
        plan,
        display_electron,
        arrows: false,
    })
}
