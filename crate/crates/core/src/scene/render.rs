//! Deterministic raster rendering of glyph scenes.
//!
//! Orthographic view along the y axis (the lattice plane seen face-on),
//! painter's compositing back-to-front in glyph order, no lighting. Every
//! pixel value is a pure function of the scene, so identical scenes render
//! to identical bytes.

use super::colormap::diverging_rgb;
use super::Scene;
use crate::{Error, Result};
use std::io::Write;
use std::path::Path;

pub const DEFAULT_BACKGROUND: [u8; 3] = [170, 170, 170];

/// Axis-aligned orthographic camera looking along -y; world x maps to
/// screen right, world z to screen up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthoCamera {
    pub width: u32,
    pub height: u32,
    pub background: [u8; 3],
}

impl Default for OrthoCamera {
    fn default() -> Self {
        Self { width: 768, height: 768, background: DEFAULT_BACKGROUND }
    }
}

impl OrthoCamera {
    pub fn with_canvas(width: u32, height: u32) -> Self {
        Self { width, height, ..Self::default() }
    }
}

/// 8-bit RGB raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<u8>,
}

impl Image {
    fn filled(width: u32, height: u32, rgb: [u8; 3]) -> Self {
        let mut pixels = Vec::with_capacity((width * height * 3) as usize);
        for _ in 0..width * height {
            pixels.extend_from_slice(&rgb);
        }
        Self { width, height, pixels }
    }

    fn blend(&mut self, x: i64, y: i64, rgb: [u8; 3], alpha: f64) {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            return;
        }
        let idx = ((y as u32 * self.width + x as u32) * 3) as usize;
        for (channel, &src) in rgb.iter().enumerate() {
            let dst = self.pixels[idx + channel] as f64;
            let out = alpha * src as f64 + (1.0 - alpha) * dst;
            self.pixels[idx + channel] = out.round().clamp(0.0, 255.0) as u8;
        }
    }

    /// Binary PPM (P6, maxval 255).
    pub fn encode_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn write_ppm(&self, path: &Path) -> Result<()> {
        let mut file = std::fs::File::create(path)?;
        file.write_all(&self.encode_ppm())?;
        Ok(())
    }

    pub fn write_png(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut encoder = png::Encoder::new(std::io::BufWriter::new(file), self.width, self.height);
        encoder.set_color(png::ColorType::Rgb);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder.write_header().map_err(|e| Error::Png(e.to_string()))?;
        writer
            .write_image_data(&self.pixels)
            .map_err(|e| Error::Png(e.to_string()))?;
        Ok(())
    }

    /// Pick the writer from the extension: `.png` encodes PNG, everything
    /// else gets the always-available PPM.
    pub fn write_auto(&self, path: &Path) -> Result<()> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("png") => self.write_png(path),
            _ => self.write_ppm(path),
        }
    }
}

struct Projection {
    scale: f64,
    origin_x: f64, // world x at screen center
    origin_z: f64,
    half_w: f64,
    half_h: f64,
}

impl Projection {
    fn to_screen(&self, wx: f64, wz: f64) -> (f64, f64) {
        (
            self.half_w + (wx - self.origin_x) * self.scale,
            self.half_h - (wz - self.origin_z) * self.scale,
        )
    }
}

fn fit_projection(scene: &Scene, camera: &OrthoCamera) -> Option<Projection> {
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_z = f64::INFINITY;
    let mut max_z = f64::NEG_INFINITY;
    for g in &scene.glyphs {
        min_x = min_x.min(g.center[0] - g.radius);
        max_x = max_x.max(g.center[0] + g.radius);
        min_z = min_z.min(g.center[2] - g.radius);
        max_z = max_z.max(g.center[2] + g.radius);
    }
    if scene.glyphs.is_empty() {
        return None;
    }
    let span_x = (max_x - min_x).max(1e-12);
    let span_z = (max_z - min_z).max(1e-12);
    let scale = ((camera.width as f64) / span_x).min((camera.height as f64) / span_z);
    Some(Projection {
        scale,
        origin_x: 0.5 * (min_x + max_x),
        origin_z: 0.5 * (min_z + max_z),
        half_w: 0.5 * camera.width as f64,
        half_h: 0.5 * camera.height as f64,
    })
}

fn draw_line(image: &mut Image, from: (f64, f64), to: (f64, f64), rgb: [u8; 3], alpha: f64) {
    // Bresenham on rounded endpoints
    let (mut x0, mut y0) = (from.0.round() as i64, from.1.round() as i64);
    let (x1, y1) = (to.0.round() as i64, to.1.round() as i64);
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    loop {
        image.blend(x0, y0, rgb, alpha);
        if x0 == x1 && y0 == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x0 += sx;
        }
        if e2 <= dx {
            err += dx;
            y0 += sy;
        }
    }
}

/// Rasterize a scene. Glyph spheres show the front hemisphere (towards the
/// camera at -y); each pixel looks up the nearest texture cell for the
/// surface direction and maps it through the diverging colormap.
pub fn render(scene: &Scene, camera: &OrthoCamera) -> Result<Image> {
    if camera.width < 64 || camera.height < 64 {
        return Err(Error::DegenerateCamera(format!(
            "canvas {}x{} below the 64x64 minimum",
            camera.width, camera.height
        )));
    }
    let mut image = Image::filled(camera.width, camera.height, camera.background);
    let Some(projection) = fit_projection(scene, camera) else {
        return Ok(image); // empty scene: uniform background
    };
    let (n_theta, n_phi) = scene.sphere_samples;

    for glyph in &scene.glyphs {
        let (cx, cy) = projection.to_screen(glyph.center[0], glyph.center[2]);
        let r_px = glyph.radius * projection.scale;
        if r_px <= 0.0 {
            continue;
        }
        let x_lo = (cx - r_px).floor().max(0.0) as i64;
        let x_hi = (cx + r_px).ceil().min(camera.width as f64 - 1.0) as i64;
        let y_lo = (cy - r_px).floor().max(0.0) as i64;
        let y_hi = (cy + r_px).ceil().min(camera.height as f64 - 1.0) as i64;
        for py in y_lo..=y_hi {
            for px in x_lo..=x_hi {
                let dx = (px as f64 + 0.5 - cx) / r_px;
                let dz = (cy - (py as f64 + 0.5)) / r_px;
                let rho2 = dx * dx + dz * dz;
                if rho2 > 1.0 {
                    continue;
                }
                // unit surface normal; camera side has n_y <= 0
                let ny = -(1.0 - rho2).max(0.0).sqrt();
                let cap_theta = dz.clamp(-1.0, 1.0).acos();
                let mut cap_phi = ny.atan2(dx);
                if cap_phi < 0.0 {
                    cap_phi += 2.0 * std::f64::consts::PI;
                }
                let ti = ((cap_theta / std::f64::consts::PI) * n_theta as f64) as usize;
                let ti = ti.min(n_theta - 1);
                let pj =
                    ((cap_phi / (2.0 * std::f64::consts::PI)) * n_phi as f64) as usize % n_phi;
                let value = glyph.texture[ti * n_phi + pj];
                image.blend(px, py, diverging_rgb(value), glyph.opacity);
            }
        }
        if let Some(arrow) = glyph.arrow {
            let len = 0.85 * r_px;
            let (ax, az) = (arrow[0], arrow[2]);
            let norm = (ax * ax + az * az).sqrt();
            if norm > 1e-9 {
                let (ux, uz) = (ax / norm * len, az / norm * len);
                let tip = (cx + ux, cy - uz);
                draw_line(&mut image, (cx - ux, cy + uz), tip, [0, 0, 0], glyph.opacity);
                // stub arrowhead
                image.blend(tip.0.round() as i64 + 1, tip.1.round() as i64, [0, 0, 0], glyph.opacity);
                image.blend(tip.0.round() as i64 - 1, tip.1.round() as i64, [0, 0, 0], glyph.opacity);
                image.blend(tip.0.round() as i64, tip.1.round() as i64 + 1, [0, 0, 0], glyph.opacity);
                image.blend(tip.0.round() as i64, tip.1.round() as i64 - 1, [0, 0, 0], glyph.opacity);
            } else {
                image.blend(cx.round() as i64, cy.round() as i64, [0, 0, 0], glyph.opacity);
            }
        }
    }
    Ok(image)
}
