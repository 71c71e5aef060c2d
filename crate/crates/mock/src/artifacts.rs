//! Per-artifact drawing and the analytic geometry behind each drawing.
//!
//! The geometry helpers are public so calibration code can derive reader
//! parameters (pivot, scale ends, zero row, fixture slots) from a placement
//! the same way an operator would measure them on screen.

use panel_imaging::{BoundingBox, ImageBuffer, Point2};

use crate::error::Result;
use crate::font;
use crate::raster::{direction, Canvas, Rgb};
use crate::spec::{
    CircularGaugeStyle, FixturePose, KnobStyle, LampColor, LinearGaugeStyle, MockArtifact,
    Orientation, PartState, ToggleState, VesselStyle,
};

pub const FIXTURE_SLOTS: usize = 6;
/// Half extents of the nominal fixture search box around a slot center.
pub const FIXTURE_BOX_HALF: (usize, usize) = (20, 18);
/// Smallest bed that keeps every slot's search area inside the bed.
pub const FIXTURE_BED_MIN: (usize, usize) = (180, 110);

const NEEDLE: Rgb = [25, 25, 28];

/// Continuous extent `(x0, y0, x1, y1)` of a pixel box.
fn edges(b: BoundingBox) -> (f64, f64, f64, f64) {
    (
        b.x as f64 - 0.5,
        b.y as f64 - 0.5,
        (b.x + b.width) as f64 - 0.5,
        (b.y + b.height) as f64 - 0.5,
    )
}

/// Geometric center of a box in pixel-center coordinates.
pub fn box_center(b: BoundingBox) -> Point2 {
    Point2::new(
        b.x as f64 + (b.width as f64 - 1.0) / 2.0,
        b.y as f64 + (b.height as f64 - 1.0) / 2.0,
    )
}

pub fn dial_radius(b: BoundingBox) -> f64 {
    b.width.min(b.height) as f64 / 2.0 - 2.0
}

/// Needle angle (radians, counter-clockwise, y up) for a gauge value.
pub fn gauge_angle(style: &CircularGaugeStyle, value: f64) -> f64 {
    let f = (value - style.min) / (style.max - style.min);
    (style.min_angle_deg + f * (style.max_angle_deg - style.min_angle_deg)).to_radians()
}

/// Pixel coordinate along the travel axis of the scale minimum and maximum.
///
/// Horizontal gauges grow to the right, vertical ones grow upward.
pub fn linear_scale_ends(b: BoundingBox, style: &LinearGaugeStyle) -> (f64, f64) {
    let (x0, y0, x1, y1) = edges(b);
    match style.orientation {
        Orientation::Horizontal => (x0 + style.margin, x1 - style.margin),
        Orientation::Vertical => (y1 - style.margin, y0 + style.margin),
    }
}

pub fn linear_needle_position(b: BoundingBox, style: &LinearGaugeStyle, value: f64) -> f64 {
    let (lo, hi) = linear_scale_ends(b, style);
    lo + (value - style.min) / (style.max - style.min) * (hi - lo)
}

/// Seven-segment geometry as fractions of one digit cell.
pub mod seven {
    pub const LEFT: f64 = 0.15;
    pub const RIGHT: f64 = 0.85;
    pub const TOP: f64 = 0.1;
    pub const BOTTOM: f64 = 0.9;
    pub const MID: f64 = 0.5;
    /// Stroke thickness as a fraction of cell width.
    pub const STROKE: f64 = 0.16;

    pub const LIT: [u8; 3] = [255, 60, 60];
    pub const UNLIT: [u8; 3] = [62, 24, 24];
    pub const BACKGROUND: [u8; 3] = [18, 18, 20];

    /// Canonical lit segments per digit, `a..g` as bits 0..6.
    pub fn encoding(digit: u8) -> u8 {
        const A: u8 = 1;
        const B: u8 = 2;
        const C: u8 = 4;
        const D: u8 = 8;
        const E: u8 = 16;
        const F: u8 = 32;
        const G: u8 = 64;
        match digit {
            0 => A | B | C | D | E | F,
            1 => B | C,
            2 => A | B | D | E | G,
            3 => A | B | C | D | G,
            4 => B | C | F | G,
            5 => A | C | D | F | G,
            6 => A | C | D | E | F | G,
            7 => A | B | C,
            8 => 0x7f,
            9 => A | B | C | D | F | G,
            _ => 0,
        }
    }

    /// Segment rectangle `(x0, y0, x1, y1)` in cell fractions for a cell aspect `w / h`.
    pub fn segment_rect(segment: usize, aspect: f64) -> (f64, f64, f64, f64) {
        let tx = STROKE;
        let ty = STROKE * aspect;
        match segment {
            0 => (LEFT + tx, TOP, RIGHT - tx, TOP + ty),
            1 => (RIGHT - tx, TOP + ty, RIGHT, MID - ty / 2.0),
            2 => (RIGHT - tx, MID + ty / 2.0, RIGHT, BOTTOM - ty),
            3 => (LEFT + tx, BOTTOM - ty, RIGHT - tx, BOTTOM),
            4 => (LEFT, MID + ty / 2.0, LEFT + tx, BOTTOM - ty),
            5 => (LEFT, TOP + ty, LEFT + tx, MID - ty / 2.0),
            _ => (LEFT + tx, MID - ty / 2.0, RIGHT - tx, MID + ty / 2.0),
        }
    }
}

/// Digit shown at position `i` once all flips at `i` are applied, `'?'` if the
/// resulting segment set is not a digit.
pub fn flipped_digit(original: char, flips: &[(usize, char)], i: usize) -> char {
    let Some(d) = original.to_digit(10) else { return '?' };
    let set = flips
        .iter()
        .filter(|(fi, _)| *fi == i)
        .fold(seven::encoding(d as u8), |acc, &(_, s)| acc ^ (1 << (s as u8 - b'a')));
    (0..10u8)
        .find(|&d| seven::encoding(d) == set)
        .map_or('?', |d| (b'0' + d) as char)
}

/// Digit cell boxes: the placement split into `n` equal columns.
pub fn digit_cells(b: BoundingBox, n: usize) -> Vec<(f64, f64, f64, f64)> {
    let (x0, y0, x1, y1) = edges(b);
    let cw = (x1 - x0) / n as f64;
    (0..n)
        .map(|i| (x0 + i as f64 * cw, y0, x0 + (i + 1) as f64 * cw, y1))
        .collect()
}

/// Lamp centers and radius, top to bottom red, yellow, green.
pub fn lamp_layout(b: BoundingBox) -> ([(LampColor, Point2); 3], f64) {
    let c = box_center(b);
    let (_, y0, _, y1) = edges(b);
    let h = y1 - y0;
    let r = (b.width as f64 / 2.0).min(h / 6.0) - 4.0;
    let at = |k: f64| Point2::new(c.x, y0 + k * h / 6.0);
    (
        [
            (LampColor::Red, at(1.0)),
            (LampColor::Yellow, at(3.0)),
            (LampColor::Green, at(5.0)),
        ],
        r,
    )
}

pub mod lamp {
    pub const HOUSING: [u8; 3] = [44, 44, 48];

    pub fn lit(color: super::LampColor) -> [u8; 3] {
        match color {
            super::LampColor::Red => [230, 32, 28],
            super::LampColor::Yellow => [240, 205, 36],
            super::LampColor::Green => [34, 212, 64],
        }
    }

    pub fn unlit(color: super::LampColor) -> [u8; 3] {
        match color {
            super::LampColor::Red => [72, 28, 26],
            super::LampColor::Yellow => [72, 64, 24],
            super::LampColor::Green => [24, 66, 32],
        }
    }
}

/// Vessel interior and the rows (continuous y) of the scale minimum and maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VesselGeometry {
    pub interior: (f64, f64, f64, f64),
    pub zero_row: f64,
    pub full_row: f64,
}

pub const VESSEL_WALL: f64 = 3.0;
pub const VESSEL_HEADROOM: f64 = 12.0;

pub fn vessel_geometry(b: BoundingBox) -> VesselGeometry {
    let (x0, y0, x1, y1) = edges(b);
    let interior = (x0 + VESSEL_WALL, y0 + VESSEL_WALL, x1 - VESSEL_WALL, y1 - VESSEL_WALL);
    VesselGeometry {
        interior,
        zero_row: interior.3 - VESSEL_HEADROOM,
        full_row: interior.1 + VESSEL_HEADROOM,
    }
}

pub fn liquid_surface_row(b: BoundingBox, style: &VesselStyle, level: f64) -> f64 {
    let g = vessel_geometry(b);
    let f = (level - style.min) / (style.max - style.min);
    g.zero_row - f * (g.zero_row - g.full_row)
}

/// Nominal fixture centers: three columns by two rows.
pub fn fixture_slots(b: BoundingBox) -> [Point2; FIXTURE_SLOTS] {
    let (x0, y0, x1, y1) = edges(b);
    let (w, h) = (x1 - x0, y1 - y0);
    std::array::from_fn(|i| {
        let (col, row) = (i % 3, i / 3);
        Point2::new(
            (x0 + (col as f64 + 0.5) * w / 3.0).round(),
            (y0 + (row as f64 + 0.5) * h / 2.0).round(),
        )
    })
}

/// Pixel box around a slot center in which a nominal fixture sits.
pub fn fixture_box(center: Point2) -> BoundingBox {
    let (hx, hy) = FIXTURE_BOX_HALF;
    BoundingBox::new(
        center.x as usize - hx,
        center.y as usize - hy,
        2 * hx + 1,
        2 * hy + 1,
    )
}

pub(crate) fn draw(canvas: &mut Canvas<'_>, b: BoundingBox, artifact: &MockArtifact) {
    match artifact {
        MockArtifact::CircularGauge { value, style } => draw_circular_gauge(canvas, b, style, *value),
        MockArtifact::LinearGauge { value, style } => draw_linear_gauge(canvas, b, style, *value),
        MockArtifact::SevenSegment { text, flips } => draw_seven_segment(canvas, b, text, flips),
        MockArtifact::GlyphText { text, scale } => draw_glyph_text(canvas, b, text, *scale),
        MockArtifact::Knob { state, style } => draw_knob(canvas, b, style, state),
        MockArtifact::Toggle { state } => draw_toggle(canvas, b, *state),
        MockArtifact::SafetyLight { lit } => draw_safety_light(canvas, b, lit),
        MockArtifact::LiquidVessel { level, style } => draw_vessel(canvas, b, style, *level),
        MockArtifact::FixtureBed { fixtures } => draw_fixture_bed(canvas, b, fixtures),
        MockArtifact::Part { state } => draw_part(canvas, b, *state),
    }
}

fn draw_circular_gauge(c: &mut Canvas<'_>, b: BoundingBox, style: &CircularGaugeStyle, value: f64) {
    let center = box_center(b);
    let r = dial_radius(b);
    c.fill_circle(center, r, [238, 238, 232]);
    c.fill_ring(center, r - 3.0, r, [120, 124, 130]);
    for i in 0..=10 {
        let v = style.min + (style.max - style.min) * i as f64 / 10.0;
        let d = direction(gauge_angle(style, v));
        let p0 = Point2::new(center.x + 0.80 * r * d.x, center.y + 0.80 * r * d.y);
        let p1 = Point2::new(center.x + 0.92 * r * d.x, center.y + 0.92 * r * d.y);
        c.line(p0, p1, 2.0, [150, 150, 150]);
    }
    let d = direction(gauge_angle(style, value));
    let tip = Point2::new(center.x + 0.72 * r * d.x, center.y + 0.72 * r * d.y);
    c.line(center, tip, 3.0, NEEDLE);
    c.fill_circle(center, 4.0, NEEDLE);
}

fn draw_linear_gauge(c: &mut Canvas<'_>, b: BoundingBox, style: &LinearGaugeStyle, value: f64) {
    let (x0, y0, x1, y1) = edges(b);
    c.fill_rect(x0, y0, x1, y1, [236, 236, 230]);
    let (lo, hi) = linear_scale_ends(b, style);
    let pos = linear_needle_position(b, style, value);
    let center = box_center(b);
    let tick = [160, 160, 160];
    match style.orientation {
        Orientation::Horizontal => {
            c.fill_rect(lo, center.y - 1.0, hi, center.y + 1.0, tick);
            for i in 0..=10 {
                let x = lo + (hi - lo) * i as f64 / 10.0;
                c.fill_rect(x - 0.75, y1 - 10.0, x + 0.75, y1 - 3.0, tick);
            }
            c.line(Point2::new(pos, y0 + 6.0), Point2::new(pos, y1 - 6.0), 3.0, NEEDLE);
        }
        Orientation::Vertical => {
            c.fill_rect(center.x - 1.0, hi, center.x + 1.0, lo, tick);
            for i in 0..=10 {
                let y = lo + (hi - lo) * i as f64 / 10.0;
                c.fill_rect(x1 - 10.0, y - 0.75, x1 - 3.0, y + 0.75, tick);
            }
            c.line(Point2::new(x0 + 6.0, pos), Point2::new(x1 - 6.0, pos), 3.0, NEEDLE);
        }
    }
}

fn draw_seven_segment(c: &mut Canvas<'_>, b: BoundingBox, text: &str, flips: &[(usize, char)]) {
    let (x0, y0, x1, y1) = edges(b);
    c.fill_rect(x0, y0, x1, y1, seven::BACKGROUND);
    let digits: Vec<u8> = text.bytes().map(|d| d - b'0').collect();
    for (i, cell) in digit_cells(b, digits.len()).into_iter().enumerate() {
        let mut lit = seven::encoding(digits[i]);
        for &(fi, seg) in flips {
            if fi == i {
                lit ^= 1 << (seg as u8 - b'a');
            }
        }
        let (cx0, cy0, cx1, cy1) = cell;
        let (cw, ch) = (cx1 - cx0, cy1 - cy0);
        for s in 0..7 {
            let (fx0, fy0, fx1, fy1) = seven::segment_rect(s, cw / ch);
            let color = if lit & (1 << s) != 0 { seven::LIT } else { seven::UNLIT };
            c.fill_rect(cx0 + fx0 * cw, cy0 + fy0 * ch, cx0 + fx1 * cw, cy0 + fy1 * ch, color);
        }
    }
}

pub const LCD_BACKGROUND: Rgb = [170, 190, 150];
pub const LCD_INK: Rgb = [30, 40, 30];

fn draw_glyph_text(c: &mut Canvas<'_>, b: BoundingBox, text: &str, scale: usize) {
    let (x0, y0, x1, y1) = edges(b);
    c.fill_rect(x0, y0, x1, y1, LCD_BACKGROUND);
    let gx = b.x + 2;
    let gy = b.y + (b.height - font::GLYPH_H * scale) / 2;
    for (i, ch) in text.chars().enumerate() {
        let Some(rows) = font::glyph(ch) else { continue };
        let ox = gx + i * (font::GLYPH_W + 1) * scale;
        for row in 0..font::GLYPH_H {
            for col in 0..font::GLYPH_W {
                if font::is_set(&rows, col, row) {
                    let px = (ox + col * scale) as f64 - 0.5;
                    let py = (gy + row * scale) as f64 - 0.5;
                    c.fill_rect(px, py, px + scale as f64, py + scale as f64, LCD_INK);
                }
            }
        }
    }
}

/// Knob pointer angle for a state label.
pub fn knob_angle(style: &KnobStyle, state: &str) -> Option<f64> {
    style
        .detents
        .iter()
        .find(|d| d.label == state)
        .map(|d| d.angle_deg.to_radians())
}

fn draw_knob(c: &mut Canvas<'_>, b: BoundingBox, style: &KnobStyle, state: &str) {
    let center = box_center(b);
    let r = dial_radius(b);
    c.fill_circle(center, r, [112, 112, 118]);
    c.fill_circle(center, r - 2.5, [214, 214, 210]);
    for d in &style.detents {
        let u = direction(d.angle_deg.to_radians());
        let p0 = Point2::new(center.x + 0.82 * r * u.x, center.y + 0.82 * r * u.y);
        let p1 = Point2::new(center.x + 0.95 * r * u.x, center.y + 0.95 * r * u.y);
        c.line(p0, p1, 2.0, [150, 150, 150]);
    }
    if let Some(a) = knob_angle(style, state) {
        let u = direction(a);
        let tip = Point2::new(center.x + 0.7 * r * u.x, center.y + 0.7 * r * u.y);
        c.line(center, tip, 4.0, [30, 30, 34]);
    }
    c.fill_circle(center, 5.0, [30, 30, 34]);
}

fn draw_toggle(c: &mut Canvas<'_>, b: BoundingBox, state: ToggleState) {
    let (x0, y0, x1, y1) = edges(b);
    let (w, h) = (x1 - x0, y1 - y0);
    let center = box_center(b);
    c.fill_rect(x0, y0, x1, y1, [190, 190, 196]);
    c.fill_rect(center.x - 0.15 * w, y0 + 0.2 * h, center.x + 0.15 * w, y1 - 0.2 * h, [118, 118, 124]);
    let end_y = match state {
        ToggleState::Up => y0 + 0.22 * h,
        ToggleState::Down => y1 - 0.22 * h,
    };
    let lever = [36, 36, 42];
    c.line(center, Point2::new(center.x, end_y), 0.25 * w, lever);
    c.fill_circle(Point2::new(center.x, end_y), 0.2 * w, lever);
}

fn draw_safety_light(c: &mut Canvas<'_>, b: BoundingBox, lit: &[LampColor]) {
    let (x0, y0, x1, y1) = edges(b);
    c.fill_rect(x0, y0, x1, y1, lamp::HOUSING);
    let (lamps, r) = lamp_layout(b);
    for (color, center) in lamps {
        let fill = if lit.contains(&color) { lamp::lit(color) } else { lamp::unlit(color) };
        c.fill_circle(center, r, fill);
    }
}

pub const VESSEL_EMPTY: Rgb = [226, 226, 228];
pub const VESSEL_LIQUID: Rgb = [40, 92, 200];

fn draw_vessel(c: &mut Canvas<'_>, b: BoundingBox, style: &VesselStyle, level: f64) {
    let (x0, y0, x1, y1) = edges(b);
    c.fill_rect(x0, y0, x1, y1, [70, 70, 76]);
    let g = vessel_geometry(b);
    let (ix0, iy0, ix1, iy1) = g.interior;
    c.fill_rect(ix0, iy0, ix1, iy1, VESSEL_EMPTY);
    let surface = liquid_surface_row(b, style, level);
    c.fill_rect(ix0, surface, ix1, iy1, VESSEL_LIQUID);
}

pub const BED: Rgb = [150, 152, 158];
pub const FIXTURE: Rgb = [46, 50, 62];

/// Fixture silhouette in local coordinates (center at origin, unrotated):
/// a bar with an upright tab on its right end and a bolt hole on its left.
fn in_fixture(x: f64, y: f64) -> bool {
    let bar = x.abs() <= 15.0 && y.abs() <= 6.0;
    let tab = (9.0..=15.0).contains(&x) && (-14.0..=-6.0).contains(&y);
    let hole = (x + 8.0).hypot(y) <= 3.0;
    (bar || tab) && !hole
}

fn draw_fixture_bed(c: &mut Canvas<'_>, b: BoundingBox, fixtures: &[FixturePose]) {
    let (x0, y0, x1, y1) = edges(b);
    c.fill_rect(x0, y0, x1, y1, BED);
    let slots = fixture_slots(b);
    for (pose, slot) in fixtures.iter().zip(slots) {
        let cx = slot.x + pose.offset[0];
        let cy = slot.y + pose.offset[1];
        let (s, co) = (-pose.rotation_deg.to_radians()).sin_cos();
        let reach = 22.0;
        let bounds = (
            (cx - reach).max(x0),
            (cy - reach).max(y0),
            (cx + reach).min(x1),
            (cy + reach).min(y1),
        );
        // Rotation is counter-clockwise on screen; undo it to test membership.
        c.fill_shape(bounds, 4, FIXTURE, |px, py| {
            let (dx, dy) = (px - cx, py - cy);
            in_fixture(co * dx + s * dy, -s * dx + co * dy)
        });
    }
}

pub const TRAY: Rgb = [205, 205, 200];
pub const METAL: Rgb = [92, 92, 100];
pub const THREAD: Rgb = [182, 182, 188];

fn draw_part(c: &mut Canvas<'_>, b: BoundingBox, state: PartState) {
    let (x0, y0, x1, y1) = edges(b);
    c.fill_rect(x0, y0, x1, y1, TRAY);
    let (w, h) = (x1 - x0, y1 - y0);
    let cx = box_center(b).x;
    let fy = |f: f64| y0 + f * h;
    match state {
        PartState::Empty => {}
        PartState::Unmachined => {
            c.fill_rect(cx - 0.22 * w, fy(0.08), cx + 0.22 * w, fy(0.9), METAL);
        }
        PartState::Partial | PartState::Good => {
            c.fill_rect(cx - 0.32 * w, fy(0.08), cx + 0.32 * w, fy(0.28), METAL);
            let shank = if state == PartState::Good { 0.14 } else { 0.2 };
            c.fill_rect(cx - shank * w, fy(0.28), cx + shank * w, fy(0.9), METAL);
            let thread_end = if state == PartState::Good { 0.86 } else { 0.5 };
            let mut t = 0.33;
            while t < thread_end {
                c.fill_rect(cx - shank * w, fy(t), cx + shank * w, fy(t + 0.025), THREAD);
                t += 0.07;
            }
        }
    }
}

/// Renders one artifact alone on a canvas the size of its placement.
pub fn render_artifact(artifact: &MockArtifact, width: usize, height: usize) -> Result<ImageBuffer> {
    let b = BoundingBox::new(0, 0, width, height);
    artifact.validate("artifact", b)?;
    let mut img = ImageBuffer::filled_rgb(width, height, [0, 0, 0])?;
    draw(&mut Canvas::new(&mut img), b, artifact);
    Ok(img)
}

macro_rules! render_fn {
    ($(#[$m:meta])* $name:ident($($arg:ident: $ty:ty),*) => $build:expr) => {
        $(#[$m])*
        pub fn $name($($arg: $ty,)* width: usize, height: usize) -> Result<ImageBuffer> {
            render_artifact(&$build, width, height)
        }
    };
}

render_fn!(render_circular_gauge(value: f64, style: CircularGaugeStyle) => MockArtifact::CircularGauge { value, style });
render_fn!(render_linear_gauge(value: f64, style: LinearGaugeStyle) => MockArtifact::LinearGauge { value, style });
render_fn!(render_seven_segment(text: &str) => MockArtifact::SevenSegment { text: text.to_string(), flips: Vec::new() });
render_fn!(render_knob(state: &str, style: KnobStyle) => MockArtifact::Knob { state: state.to_string(), style });
render_fn!(render_toggle(state: ToggleState) => MockArtifact::Toggle { state });
render_fn!(render_safety_light(lit: Vec<LampColor>) => MockArtifact::SafetyLight { lit });
render_fn!(render_liquid_vessel(level: f64, style: VesselStyle) => MockArtifact::LiquidVessel { level, style });
render_fn!(render_fixture_bed(fixtures: Vec<FixturePose>) => MockArtifact::FixtureBed { fixtures });
render_fn!(
    /// `unmachined`, `partial` or `good` (or an empty tray).
    render_part(state: PartState) => MockArtifact::Part { state }
);

/// Angle in `(-pi, pi]` of `p` around `center`, counter-clockwise with y up.
pub fn screen_angle(center: Point2, p: Point2) -> f64 {
    (-(p.y - center.y)).atan2(p.x - center.x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seven_segment_encodings_are_injective() {
        let mut seen = std::collections::HashSet::new();
        for d in 0..10 {
            assert!(seen.insert(seven::encoding(d)));
        }
        assert_eq!(seven::encoding(0), 0b0111111);
        assert_eq!(seven::encoding(7), 0b0000111);
    }

    #[test]
    fn flips_resolve_to_digits_or_unknown() {
        // 8 without g is 0; 1 plus d is not a digit.
        assert_eq!(flipped_digit('8', &[(0, 'g')], 0), '0');
        assert_eq!(flipped_digit('1', &[(2, 'd')], 2), '?');
        assert_eq!(flipped_digit('1', &[(2, 'd')], 0), '1');
    }

    #[test]
    fn gauge_midpoint_angle() {
        let style = CircularGaugeStyle::default();
        let mid = gauge_angle(&style, 50.0).to_degrees();
        assert!((mid - 90.0).abs() < 1e-9);
    }

    #[test]
    fn zero_level_surface_sits_on_zero_row() {
        let b = BoundingBox::new(10, 10, 40, 200);
        let g = vessel_geometry(b);
        assert_eq!(liquid_surface_row(b, &VesselStyle::default(), 0.0), g.zero_row);
        assert_eq!(liquid_surface_row(b, &VesselStyle::default(), 100.0), g.full_row);
    }

    #[test]
    fn fixture_silhouette_is_asymmetric() {
        assert!(in_fixture(12.0, -10.0));
        assert!(!in_fixture(-12.0, -10.0));
        assert!(!in_fixture(-8.0, 0.0));
    }

    #[test]
    fn lamp_layout_stacks_vertically() {
        let (lamps, r) = lamp_layout(BoundingBox::new(0, 0, 40, 120));
        assert!(r > 5.0);
        assert!(lamps[0].1.y < lamps[1].1.y && lamps[1].1.y < lamps[2].1.y);
    }
}
