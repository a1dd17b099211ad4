//! Versioned scene JSON document.
//!
//! Schema:
//! `{version, colormap: {name, range: [-1, 1]}, plane: {axis: "y", value},
//!   glyphs: [{center: [x,y,z], radius, opacity,
//!             texture: {n_theta, n_phi, values (row-major)},
//!             arrow: [x,y,z] | null}]}`

use super::{Scene, SceneGlyph};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const SCENE_VERSION: u32 = 1;
const COLORMAP_NAME: &str = "red_white_blue";

#[derive(Debug, Serialize, Deserialize)]
struct SceneDocument {
    version: u32,
    colormap: ColormapMeta,
    plane: PlaneMeta,
    glyphs: Vec<GlyphDocument>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ColormapMeta {
    name: String,
    range: [f64; 2],
}

#[derive(Debug, Serialize, Deserialize)]
struct PlaneMeta {
    axis: String,
    value: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct GlyphDocument {
    center: [f64; 3],
    radius: f64,
    opacity: f64,
    texture: TextureDocument,
    arrow: Option<[f64; 3]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TextureDocument {
    n_theta: usize,
    n_phi: usize,
    values: Vec<f64>,
}

fn to_document(scene: &Scene) -> SceneDocument {
    SceneDocument {
        version: SCENE_VERSION,
        colormap: ColormapMeta { name: COLORMAP_NAME.into(), range: [-1.0, 1.0] },
        plane: PlaneMeta { axis: "y".into(), value: scene.plane_value },
        glyphs: scene
            .glyphs
            .iter()
            .map(|g| GlyphDocument {
                center: g.center,
                radius: g.radius,
                opacity: g.opacity,
                texture: TextureDocument {
                    n_theta: scene.sphere_samples.0,
                    n_phi: scene.sphere_samples.1,
                    values: g.texture.clone(),
                },
                arrow: g.arrow,
            })
            .collect(),
    }
}

/// Write the scene as a versioned UTF-8 JSON document.
pub fn export_scene(scene: &Scene, path: &Path) -> Result<()> {
    let doc = to_document(scene);
    let text = serde_json::to_string_pretty(&doc)?;
    std::fs::write(path, text)?;
    Ok(())
}

/// Read a scene document back; rejects unknown schema versions.
pub fn import_scene(path: &Path) -> Result<Scene> {
    let text = std::fs::read_to_string(path)?;
    let doc: SceneDocument = serde_json::from_str(&text)?;
    if doc.version != SCENE_VERSION {
        return Err(Error::OutOfRange {
            what: "scene version",
            detail: format!("{} (supported: {SCENE_VERSION})", doc.version),
        });
    }
    let sphere_samples = doc
        .glyphs
        .first()
        .map(|g| (g.texture.n_theta, g.texture.n_phi))
        .unwrap_or((0, 0));
    Ok(Scene {
        sphere_samples,
        plane_value: doc.plane.value,
        glyphs: doc
            .glyphs
            .into_iter()
            .map(|g| SceneGlyph {
                center: g.center,
                radius: g.radius,
                opacity: g.opacity,
                texture: g.texture.values,
                arrow: g.arrow,
            })
            .collect(),
    })
}
