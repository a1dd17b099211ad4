//! Fixed diverging colormap over [-1, 1]: red below zero, white at zero,
//! blue above, matching the reference colorbar. Values outside clamp.

/// Map a Wigner value to RGB. Odd-symmetric by construction: `v` and `-v`
/// produce exact red/blue mirror colors (the R and B channels swap).
pub fn diverging_rgb(value: f64) -> [u8; 3] {
    let v = if value.is_nan() { 0.0 } else { value.clamp(-1.0, 1.0) };
    if v >= 0.0 {
        let fade = (255.0 * (1.0 - v)).round() as u8;
        [fade, fade, 255]
    } else {
        let fade = (255.0 * (1.0 + v)).round() as u8;
        [255, fade, fade]
    }
}
