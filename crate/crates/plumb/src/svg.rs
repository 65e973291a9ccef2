//! Deterministic SVG rendering of edge regions and the profile contour
//! plot. All geometry stays exact until the final print step, where
//! coordinates are formatted from rationals at a fixed 6 decimal places,
//! so emitted documents are byte-identical across platforms.

use crate::model::{BoundaryPiece, ModelConstants, Point, ToricRegion};
use crate::rat::Rat;

const CANVAS: i64 = 512;

struct Mapper {
    x_min: Rat,
    y_max: Rat,
    scale: Rat,
    height: Rat,
}

impl Mapper {
    fn from_bbox(x_min: Rat, x_max: Rat, y_min: Rat, y_max: Rat) -> Mapper {
        // pad each dimension by 10%
        let pad_x = &(&x_max - &x_min) / &Rat::int(10);
        let pad_y = &(&y_max - &y_min) / &Rat::int(10);
        let x_min = &x_min - &pad_x;
        let x_max = &x_max + &pad_x;
        let y_min = &y_min - &pad_y;
        let y_max = &y_max + &pad_y;
        let width = &x_max - &x_min;
        let scale = &Rat::int(CANVAS) / &width;
        let height = &(&y_max - &y_min) * &scale;
        Mapper {
            x_min,
            y_max,
            scale,
            height,
        }
    }

    fn x(&self, v: &Rat) -> String {
        (&(v - &self.x_min) * &self.scale).to_decimal(6)
    }

    fn y(&self, v: &Rat) -> String {
        (&(&self.y_max - v) * &self.scale).to_decimal(6)
    }

    fn pt(&self, p: &Point) -> (String, String) {
        (self.x(&p.0), self.y(&p.1))
    }
}

fn line(out: &mut String, m: &Mapper, a: &Point, b: &Point, class: &str) {
    let (x1, y1) = m.pt(a);
    let (x2, y2) = m.pt(b);
    out.push_str(&format!(
        "  <line class=\"{class}\" x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\"/>\n"
    ));
}

fn quad(out: &mut String, m: &Mapper, from: &Point, control: &Point, to: &Point, class: &str) {
    let (x1, y1) = m.pt(from);
    let (cx, cy) = m.pt(control);
    let (x2, y2) = m.pt(to);
    out.push_str(&format!(
        "  <path class=\"{class}\" d=\"M {x1} {y1} Q {cx} {cy} {x2} {y2}\"/>\n"
    ));
}

fn text(out: &mut String, m: &Mapper, at: &Point, dx: i64, dy: i64, content: &str) {
    let (x, y) = m.pt(at);
    out.push_str(&format!(
        "  <text x=\"{x}\" y=\"{y}\" dx=\"{dx}\" dy=\"{dy}\">{content}</text>\n"
    ));
}

const STYLE: &str = "  <style>\n    line, path, polygon { stroke: #000; fill: none; stroke-width: 1.5 }\n    .clip { stroke: #555; stroke-dasharray: 6 4 }\n    .sub { stroke: #888; stroke-dasharray: 2 3 }\n    .band { stroke: #999; stroke-dasharray: 6 4 }\n    text { font: 13px sans-serif; fill: #000; stroke: none }\n    circle { fill: #000; stroke: none }\n  </style>\n";

/// Moment image of one edge region, Fig.-2 style: the two axis edges,
/// the profile level pieces with the smoothing arc, the clipping lines
/// dashed, and the two collar parallelograms dotted.
pub fn emit_region_svg(region: &ToricRegion, labels: bool) -> String {
    let mut pts: Vec<&Point> = vec![&region.anchor];
    for piece in &region.boundary {
        match piece {
            BoundaryPiece::Segment { from, to, .. } => {
                pts.push(from);
                pts.push(to);
            }
            BoundaryPiece::Arc { from, control, to } => {
                pts.push(from);
                pts.push(control);
                pts.push(to);
            }
        }
    }
    for p in region.subregion_v.iter().chain(&region.subregion_v_prime) {
        pts.push(p);
    }
    let x_min = pts.iter().map(|p| &p.0).min().unwrap().clone();
    let x_max = pts.iter().map(|p| &p.0).max().unwrap().clone();
    let y_min = pts.iter().map(|p| &p.1).min().unwrap().clone();
    let y_max = pts.iter().map(|p| &p.1).max().unwrap().clone();
    let m = Mapper::from_bbox(x_min, x_max, y_min, y_max);

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\">\n",
        CANVAS,
        m.height.to_decimal(6)
    ));
    out.push_str(STYLE);

    // clipping line segments, from the axis corner to the profile level
    let clip_v_end = match &region.boundary[2] {
        BoundaryPiece::Segment { from, .. } => from.clone(),
        _ => region.clip_v.point.clone(),
    };
    let clip_vp_end = match &region.boundary[4] {
        BoundaryPiece::Segment { to, .. } => to.clone(),
        _ => region.clip_v_prime.point.clone(),
    };
    line(&mut out, &m, &region.clip_v.point, &clip_v_end, "clip");
    line(&mut out, &m, &region.clip_v_prime.point, &clip_vp_end, "clip");

    for piece in &region.boundary {
        match piece {
            BoundaryPiece::Segment { from, to, .. } => line(&mut out, &m, from, to, "edge"),
            BoundaryPiece::Arc { from, control, to } => {
                quad(&mut out, &m, from, control, to, "edge")
            }
        }
    }

    for corners in [&region.subregion_v, &region.subregion_v_prime] {
        let order = [0usize, 1, 3, 2];
        let points: Vec<String> = order
            .iter()
            .map(|&i| {
                let (x, y) = m.pt(&corners[i]);
                format!("{x},{y}")
            })
            .collect();
        out.push_str(&format!(
            "  <polygon class=\"sub\" points=\"{}\"/>\n",
            points.join(" ")
        ));
    }

    let (ax, ay) = m.pt(&region.anchor);
    out.push_str(&format!("  <circle cx=\"{ax}\" cy=\"{ay}\" r=\"3\"/>\n"));

    if labels {
        text(&mut out, &m, &region.anchor, 6, 14, "(z_v, z_v')");
        let mid_v = Point(
            region.subregion_v[0].0.clone(),
            (&region.subregion_v[0].1 + &region.subregion_v[1].1) / Rat::int(2),
        );
        text(&mut out, &m, &mid_v, 8, 0, "R_{e,v}");
        let mid_vp = Point(
            (&region.subregion_v_prime[0].0 + &region.subregion_v_prime[1].0) / Rat::int(2),
            region.subregion_v_prime[0].1.clone(),
        );
        text(&mut out, &m, &mid_vp, 0, -8, "R_{e,v'}");
        if let BoundaryPiece::Segment { to, .. } = &region.boundary[4] {
            text(&mut out, &m, to, 6, 0, "g_e^{-1}(delta)");
        }
    }

    out.push_str("</svg>\n");
    out
}

/// Schematic contour plot of the profile function on the quadrant:
/// straight level pieces outside the band |y - x| <= gamma, smoothing
/// arcs inside, band boundaries dashed. Five contour levels.
pub fn emit_profile_svg(consts: &ModelConstants) -> String {
    let eps = &consts.epsilon;
    let gamma = &consts.gamma;
    let side = Rat::int(3) * eps;
    let m = Mapper::from_bbox(Rat::zero(), side.clone(), Rat::zero(), side.clone());

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\">\n",
        CANVAS,
        m.height.to_decimal(6)
    ));
    out.push_str(STYLE);

    // axes
    line(
        &mut out,
        &m,
        &Point(Rat::zero(), Rat::zero()),
        &Point(side.clone(), Rat::zero()),
        "edge",
    );
    line(
        &mut out,
        &m,
        &Point(Rat::zero(), Rat::zero()),
        &Point(Rat::zero(), side.clone()),
        "edge",
    );

    // band boundaries y = x +- gamma
    line(
        &mut out,
        &m,
        &Point(Rat::zero(), gamma.clone()),
        &Point(&side - gamma, side.clone()),
        "band",
    );
    line(
        &mut out,
        &m,
        &Point(gamma.clone(), Rat::zero()),
        &Point(side.clone(), &side - gamma),
        "band",
    );

    // five contour levels t = k * eps / 2; each is symmetric about y = x
    for k in 1..=5i64 {
        let t = &(Rat::int(k) * eps) / &Rat::int(2);
        let top = Point(t.clone(), side.clone());
        let knee_v = Point(t.clone(), &t + gamma);
        let corner = Point(t.clone(), t.clone());
        let knee_h = Point(&t + gamma, t.clone());
        let right = Point(side.clone(), t.clone());
        line(&mut out, &m, &top, &knee_v, "edge");
        quad(&mut out, &m, &knee_v, &corner, &knee_h, "edge");
        line(&mut out, &m, &knee_h, &right, "edge");
    }

    out.push_str("</svg>\n");
    out
}
