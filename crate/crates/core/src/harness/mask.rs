//! Seeded observation masks and image corruption.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::{ObservationMask, ObservedImage};
use crate::Image;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaskPattern {
    /// `round(phi * N * M)` missing pixels drawn uniformly without replacement.
    Random,
    /// Pixels under a rasterized block of text are missing; `phi` is unused.
    TextOverlay,
}

impl std::str::FromStr for MaskPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(MaskPattern::Random),
            "text" | "text-overlay" => Ok(MaskPattern::TextOverlay),
            _ => Err(Error::Config(format!("unknown mask pattern {s:?}; expected random or text-overlay"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaskSpec {
    pub missing_ratio: f64,
    pub seed: u64,
    pub pattern: MaskPattern,
}

impl MaskSpec {
    pub fn random(missing_ratio: f64, seed: u64) -> Self {
        Self { missing_ratio, seed, pattern: MaskPattern::Random }
    }

    pub fn text(seed: u64) -> Self {
        Self { missing_ratio: 0.0, seed, pattern: MaskPattern::TextOverlay }
    }
}

/// Number of missing pixels a random mask of this ratio has on `len` pixels.
pub fn missing_pixels(missing_ratio: f64, len: usize) -> usize {
    ((missing_ratio * len as f64).round() as usize).min(len)
}

pub fn gen_mask(dims: (usize, usize), spec: &MaskSpec) -> Result<ObservationMask> {
    let phi = spec.missing_ratio;
    if phi >= 1.0 {
        return Err(Error::InsufficientData(format!("missing ratio {phi} leaves no observed pixels")));
    }
    if !(phi >= 0.0) {
        return Err(Error::Config(format!("missing ratio must lie in [0, 1), got {phi}")));
    }
    let (n, m) = dims;
    match spec.pattern {
        MaskPattern::Random => {
            let len = n * m;
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let missing = rand::seq::index::sample(&mut rng, len, missing_pixels(phi, len));
            let mut mask = ObservationMask::all(n, m);
            for k in missing.iter() {
                // Indices are column-major like the mask storage.
                mask.set(k % n, k / n, false);
            }
            Ok(mask)
        }
        MaskPattern::TextOverlay => Ok(text_overlay(dims, spec.seed)),
    }
}

/// Zero the unobserved pixels of `image`.
pub fn corrupt(image: &Image, mask: &ObservationMask) -> Result<ObservedImage> {
    ObservedImage::new(image.clone(), mask.clone())
}

const PHRASE: &str = "LOREM IPSUM DOLOR SIT AMET ";
const GLYPH_W: usize = 5;
const GLYPH_H: usize = 7;

fn glyph(c: char) -> [&'static str; GLYPH_H] {
    match c {
        'A' => [" ### ", "#   #", "#   #", "#####", "#   #", "#   #", "#   #"],
        'D' => ["#### ", "#   #", "#   #", "#   #", "#   #", "#   #", "#### "],
        'E' => ["#####", "#    ", "#    ", "#### ", "#    ", "#    ", "#####"],
        'I' => ["#####", "  #  ", "  #  ", "  #  ", "  #  ", "  #  ", "#####"],
        'L' => ["#    ", "#    ", "#    ", "#    ", "#    ", "#    ", "#####"],
        'M' => ["#   #", "## ##", "# # #", "# # #", "#   #", "#   #", "#   #"],
        'O' => [" ### ", "#   #", "#   #", "#   #", "#   #", "#   #", " ### "],
        'P' => ["#### ", "#   #", "#   #", "#### ", "#    ", "#    ", "#    "],
        'R' => ["#### ", "#   #", "#   #", "#### ", "# #  ", "#  # ", "#   #"],
        'S' => [" ####", "#    ", "#    ", " ### ", "    #", "    #", "#### "],
        'T' => ["#####", "  #  ", "  #  ", "  #  ", "  #  ", "  #  ", "  #  "],
        'U' => ["#   #", "#   #", "#   #", "#   #", "#   #", "#   #", " ### "],
        _ => ["     "; GLYPH_H],
    }
}

/// Lines of the built-in phrase in a 5x7 font, scaled by `min(N, M) / 64`
/// (at least 1), wrapped continuously across the image. The seed rotates the
/// starting character.
fn text_overlay(dims: (usize, usize), seed: u64) -> ObservationMask {
    let (n, m) = dims;
    let scale = (n.min(m) / 64).max(1);
    let advance = (GLYPH_W + 1) * scale;
    let line_height = (GLYPH_H + 4) * scale;
    let chars: Vec<char> = PHRASE.chars().collect();
    let mut next = (seed % chars.len() as u64) as usize;

    let mut mask = ObservationMask::all(n, m);
    let mut top = 2 * scale;
    while top + GLYPH_H * scale <= n {
        let mut left = scale;
        while left + GLYPH_W * scale <= m {
            let rows = glyph(chars[next % chars.len()]);
            next += 1;
            for (gi, row) in rows.iter().enumerate() {
                for (gj, cell) in row.bytes().enumerate() {
                    if cell != b'#' {
                        continue;
                    }
                    for di in 0..scale {
                        for dj in 0..scale {
                            mask.set(top + gi * scale + di, left + gj * scale + dj, false);
                        }
                    }
                }
            }
            left += advance;
        }
        top += line_height;
    }
    mask
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinality_and_determinism() {
        assert_eq!(gen_mask((10, 10), &MaskSpec::random(0.0, 3)).unwrap(), ObservationMask::all(10, 10));
        assert_eq!(gen_mask((10, 10), &MaskSpec::random(0.99, 3)).unwrap().observed_count(), 1);
        for (dims, phi) in [((7, 13), 0.37), ((64, 64), 0.9), ((1, 5), 0.5)] {
            let mask = gen_mask(dims, &MaskSpec::random(phi, 11)).unwrap();
            assert_eq!(mask.missing_count(), missing_pixels(phi, dims.0 * dims.1));
            assert_eq!(mask, gen_mask(dims, &MaskSpec::random(phi, 11)).unwrap());
        }
        let a = gen_mask((32, 32), &MaskSpec::random(0.5, 1)).unwrap();
        let b = gen_mask((32, 32), &MaskSpec::random(0.5, 2)).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn ratio_bounds() {
        assert!(matches!(gen_mask((4, 4), &MaskSpec::random(1.0, 0)), Err(Error::InsufficientData(_))));
        assert!(gen_mask((4, 4), &MaskSpec::random(-0.1, 0)).is_err());
    }

    #[test]
    fn text_overlay_is_partial() {
        let mask = gen_mask((128, 128), &MaskSpec::text(0)).unwrap();
        let missing = mask.missing_count() as f64 / (128.0 * 128.0);
        assert!(missing > 0.1 && missing < 0.5, "{missing}");
        assert_eq!(mask, gen_mask((128, 128), &MaskSpec::text(0)).unwrap());
        assert_ne!(mask, gen_mask((128, 128), &MaskSpec::text(1)).unwrap());
    }

    #[test]
    fn corrupt_zeroes_missing() {
        let image = Image::from_element(4, 4, 9.0);
        assert_eq!(corrupt(&image, &ObservationMask::all(4, 4)).unwrap().data(), &image);
        assert_eq!(corrupt(&image, &ObservationMask::none(4, 4)).unwrap().data(), &Image::zeros(4, 4));
        let half = gen_mask((4, 4), &MaskSpec::random(0.5, 0)).unwrap();
        let observed = corrupt(&image, &half).unwrap();
        assert_eq!(observed.data().iter().filter(|&&v| v == 0.0).count(), 8);
    }
}
