//! Sphere-glyph scenes: a planar lattice of spheres whose opacity encodes
//! the position marginal and whose surface colors encode the conditional
//! spin Wigner function at that point.

mod colormap;
mod json;
mod render;

pub use colormap::diverging_rgb;
pub use json::{export_scene, import_scene, SCENE_VERSION};
pub use render::{render, Image, OrthoCamera};

use crate::engine::{bloch_field, evaluate, Directive, ReductionPlan, SpinSection};
use crate::kernels::SpinAngle;
use crate::states::DensityOperator;
use crate::{Error, Result};
use rayon::prelude::*;

/// Square grid in the xz-plane (`y = 0`): `count x count` points covering
/// `[-extent, extent]` on both axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub count: usize,
    pub extent: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        // wide enough to hold >99.9% of the 2S probability mass
        Self { count: 61, extent: 4.5 }
    }
}

impl GridSpec {
    fn spacing(&self) -> f64 {
        if self.count > 1 {
            2.0 * self.extent / (self.count - 1) as f64
        } else {
            2.0 * self.extent
        }
    }

    fn point(&self, ix: usize, iz: usize) -> [f64; 3] {
        if self.count == 1 {
            return [0.0; 3];
        }
        let h = self.spacing();
        [-self.extent + ix as f64 * h, 0.0, -self.extent + iz as f64 * h]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpacityMode {
    /// Opacity follows the position marginal, scaled so the peak is 1.
    Marginal,
    /// Every glyph fully opaque (used to expose correlations the marginal
    /// would wash out).
    Constant,
}

/// Everything needed to turn a state into a glyph lattice.
#[derive(Debug, Clone)]
pub struct FigureRecipe {
    pub grid: GridSpec,
    /// Sphere texture resolution `(n_theta, n_phi)`.
    pub sphere_samples: (usize, usize),
    pub opacity: OpacityMode,
    /// Glyphs with opacity below this are dropped.
    pub threshold: f64,
    /// Plan template: directives for every factor. The displayed electron's
    /// mode directives are overwritten with the grid point per glyph.
    pub plan: ReductionPlan,
    /// Electron whose position sweeps the grid; `None` for spin-only states
    /// (a single glyph at the origin).
    pub display_electron: Option<u8>,
    /// Attach conditional Bloch arrows (first displayed spin).
    pub arrows: bool,
}

impl FigureRecipe {
    /// Template with everything traced except the listed equal-angle spins;
    /// the display electron's modes follow the grid.
    pub fn new(
        rho: &DensityOperator,
        display_electron: Option<u8>,
        displayed_spins: &[u8],
    ) -> Result<Self> {
        let sig = rho.signature();
        let mut plan = ReductionPlan::trace_all(sig);
        if let Some(e) = display_electron {
            plan.set_position_marginal(sig, e, [0.0; 3])?;
        }
        for &e in displayed_spins {
            plan.set_equal_angle(sig, e, 0)?;
        }
        Ok(Self {
            grid: GridSpec::default(),
            sphere_samples: (24, 12),
            opacity: OpacityMode::Marginal,
            threshold: 0.1,
            plan,
            display_electron,
            arrows: false,
        })
    }

    fn validate(&self) -> Result<()> {
        if self.grid.count < 1 {
            return Err(Error::OutOfRange { what: "grid count", detail: "zero".into() });
        }
        if self.sphere_samples.0 < 2 || self.sphere_samples.1 < 2 {
            return Err(Error::OutOfRange {
                what: "sphere samples",
                detail: format!("{:?} (need at least 2x2)", self.sphere_samples),
            });
        }
        if !(0.0..1.0).contains(&self.threshold) {
            return Err(Error::OutOfRange {
                what: "threshold",
                detail: format!("{} not in [0, 1)", self.threshold),
            });
        }
        Ok(())
    }
}

/// One sphere of the lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneGlyph {
    pub center: [f64; 3],
    pub radius: f64,
    pub opacity: f64,
    /// Row-major `n_theta x n_phi` conditional Wigner values.
    pub texture: Vec<f64>,
    pub arrow: Option<[f64; 3]>,
}

/// A glyph lattice plus the metadata the renderer and the JSON schema need.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub sphere_samples: (usize, usize),
    pub plane_value: f64,
    pub glyphs: Vec<SceneGlyph>,
}

/// Sphere-surface sample directions, row-major over `(theta, phi)` cells.
fn surface_angles(samples: (usize, usize)) -> Vec<SpinAngle> {
    let (n_theta, n_phi) = samples;
    let mut out = Vec::with_capacity(n_theta * n_phi);
    for i in 0..n_theta {
        let cap_theta = std::f64::consts::PI * (i as f64 + 0.5) / n_theta as f64;
        for j in 0..n_phi {
            let cap_phi = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / n_phi as f64;
            out.push(SpinAngle::from_surface(cap_theta, cap_phi).expect("cell centers in range"));
        }
    }
    out
}

/// Build the glyph lattice for `rho` under `recipe`.
///
/// Per grid point: the position marginal sets the opacity
/// (`alpha = W(q)/W_max`, or 1 in constant mode; glyphs below the threshold
/// are dropped), and the sphere texture holds the *conditional* spin Wigner
/// function, the equal-angle slice at kernel angles `(Theta/2, Phi/2)`
/// normalized by the marginal so every sphere is directly comparable with
/// the reference panels. Grid points are processed in parallel; output order
/// and all sums are fixed, so scenes are identical for any thread count.
pub fn build_scene(rho: &DensityOperator, recipe: &FigureRecipe) -> Result<Scene> {
    recipe.validate()?;
    recipe.plan.validate(rho.signature())?;
    let sig = rho.signature();
    let count = if recipe.display_electron.is_some() { recipe.grid.count } else { 1 };
    let points: Vec<[f64; 3]> = (0..count * count)
        .map(|idx| recipe.grid.point(idx % count, idx / count))
        .collect();

    let plan_at = |q: [f64; 3]| -> Result<ReductionPlan> {
        let mut plan = recipe.plan.clone();
        if let Some(e) = recipe.display_electron {
            plan.set_position_marginal(sig, e, q)?;
        }
        Ok(plan)
    };

    // spin-traced marginal at every grid point (the opacity reference)
    let marginal_plan_at = |q: [f64; 3]| -> Result<ReductionPlan> {
        let mut plan = plan_at(q)?;
        for i in sig.spin_indices() {
            plan.set(i, Directive::Trace);
        }
        Ok(plan)
    };
    let densities: Vec<f64> = points
        .par_iter()
        .map(|&q| Ok(evaluate(rho, &marginal_plan_at(q)?, &[])?.value))
        .collect::<Result<_>>()?;
    let w_max = densities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !w_max.is_finite() || w_max <= 0.0 {
        return Err(Error::AllZeroMarginal);
    }

    let angles = surface_angles(recipe.sphere_samples);
    let radius = if count > 1 { 0.5 * recipe.grid.spacing() } else { 0.5 * recipe.grid.extent };
    let arrow_spin = recipe
        .plan
        .directives()
        .iter()
        .position(|d| matches!(d, Directive::EqualAngle(_)))
        .and_then(|i| match sig.factors()[i] {
            crate::states::Factor::Spin { electron } => Some(electron),
            _ => None,
        });

    let glyphs: Vec<Option<SceneGlyph>> = points
        .par_iter()
        .zip(densities.par_iter())
        .map(|(&q, &density)| -> Result<Option<SceneGlyph>> {
            let alpha = match recipe.opacity {
                OpacityMode::Marginal => density / w_max,
                OpacityMode::Constant => 1.0,
            };
            if alpha < recipe.threshold {
                return Ok(None);
            }
            let section = SpinSection::contract(rho, &plan_at(q)?)?;
            let weight = section.trace().re;
            let texture: Vec<f64> = if weight.abs() < 1e-300 {
                vec![0.0; angles.len()]
            } else {
                angles
                    .iter()
                    .map(|a| Ok(section.wigner_at(std::slice::from_ref(a))?.value / weight))
                    .collect::<Result<_>>()?
            };
            let arrow = match (recipe.arrows, arrow_spin, recipe.display_electron) {
                (true, Some(spin_e), Some(pos_e)) => {
                    let sample = bloch_field(rho, spin_e, pos_e, q)?;
                    (!sample.underflow).then_some(sample.vector)
                }
                _ => None,
            };
            Ok(Some(SceneGlyph { center: q, radius, opacity: alpha.min(1.0), texture, arrow }))
        })
        .collect::<Result<_>>()?;

    Ok(Scene {
        sphere_samples: recipe.sphere_samples,
        plane_value: 0.0,
        glyphs: glyphs.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests;
