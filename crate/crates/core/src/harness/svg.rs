//! Standalone SVG rendering of trial traces: the arena rectangle, labeled
//! buttons, one polyline pair per replication, start markers, and a marker
//! wherever the assistant began pointing.

use std::fmt::Write as _;

use crate::engine::TraceRecord;
use crate::geometry::Vec2;
use crate::world::{ArenaSpec, ButtonId};

const SCALE: f64 = 200.0; // px per meter
const MARGIN: f64 = 40.0;

/// Dash patterns cycled per replication so overlapping trials stay
/// distinguishable.
const DASHES: [&str; 4] = ["", "7 4", "2 4", "10 3 3 3"];

const HUMAN_COLOR: &str = "#c0392b";
const ASSISTANT_COLOR: &str = "#2563a8";
const POINT_MARKER_COLOR: &str = "#f2b01e";

struct Frame {
    width_px: f64,
    height_px: f64,
    half_w: f64,
    half_h: f64,
}

impl Frame {
    fn new(arena: &ArenaSpec) -> Frame {
        Frame {
            width_px: arena.width * SCALE + 2.0 * MARGIN,
            height_px: arena.height * SCALE + 2.0 * MARGIN,
            half_w: arena.width / 2.0,
            half_h: arena.height / 2.0,
        }
    }

    fn to_px(&self, p: Vec2) -> (f64, f64) {
        (
            MARGIN + (p.x + self.half_w) * SCALE,
            MARGIN + (self.half_h - p.y) * SCALE,
        )
    }
}

/// Renders the replications of one experiment cell into a standalone SVG
/// document. An assistant that never moved is drawn as a point marker
/// instead of a degenerate polyline.
pub fn render_svg(traces: &[Vec<TraceRecord>], arena: &ArenaSpec) -> String {
    let frame = Frame::new(arena);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}">"#,
        frame.width_px, frame.height_px, frame.width_px, frame.height_px
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{:.0}" height="{:.0}" fill="white"/>"#,
        frame.width_px, frame.height_px
    );
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN:.1}" y="{MARGIN:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black" stroke-width="2"/>"#,
        arena.width * SCALE,
        arena.height * SCALE
    );

    for button in [ButtonId::L, ButtonId::R] {
        let (cx, cy) = frame.to_px(arena.button_pos(button));
        let r = arena.press_radius * SCALE;
        let _ = writeln!(
            out,
            r##"<circle cx="{cx:.1}" cy="{cy:.1}" r="{r:.1}" fill="#eeeeee" stroke="#555555" stroke-width="1.5"/>"##
        );
        let _ = writeln!(
            out,
            r#"<text x="{cx:.1}" y="{:.1}" font-family="sans-serif" font-size="18" text-anchor="middle">{}</text>"#,
            cy + 6.0,
            button.label()
        );
    }

    for (replication, trace) in traces.iter().enumerate() {
        if trace.is_empty() {
            continue;
        }
        let dash = DASHES[replication % DASHES.len()];
        draw_agent(
            &mut out,
            &frame,
            trace.iter().map(|r| r.human_pos),
            HUMAN_COLOR,
            dash,
        );
        draw_agent(
            &mut out,
            &frame,
            trace.iter().map(|r| r.assistant_pos),
            ASSISTANT_COLOR,
            dash,
        );
        draw_pointing_markers(&mut out, &frame, trace);
    }

    let _ = writeln!(out, "</svg>");
    out
}

fn draw_agent(
    out: &mut String,
    frame: &Frame,
    positions: impl Iterator<Item = Vec2> + Clone,
    color: &str,
    dash: &str,
) {
    let mut iter = positions.clone();
    let Some(start) = iter.next() else { return };
    let moved = iter.clone().any(|p| p.distance(start) > 1e-6);
    if moved {
        let mut points = String::new();
        for p in positions {
            let (x, y) = frame.to_px(p);
            let _ = write!(points, "{x:.1},{y:.1} ");
        }
        let dash_attr = if dash.is_empty() {
            String::new()
        } else {
            format!(r#" stroke-dasharray="{dash}""#)
        };
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2" stroke-opacity="0.85"{dash_attr}/>"#,
            points.trim_end()
        );
    } else {
        // Stationary agent: the polyline degenerates to a point marker.
        let (x, y) = frame.to_px(start);
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.1}" cy="{y:.1}" r="5" fill="{color}" fill-opacity="0.85"/>"#
        );
    }
    let (sx, sy) = frame.to_px(start);
    let _ = writeln!(
        out,
        r#"<circle cx="{sx:.1}" cy="{sy:.1}" r="3.5" fill="{color}" stroke="white" stroke-width="1"/>"#
    );
}

/// A small triangle at the assistant's position on every tick where a
/// pointing gesture begins or switches buttons.
fn draw_pointing_markers(out: &mut String, frame: &Frame, trace: &[TraceRecord]) {
    let mut previous = None;
    for record in trace {
        if record.assistant_pointing.is_some() && record.assistant_pointing != previous {
            let (x, y) = frame.to_px(record.assistant_pos);
            let _ = writeln!(
                out,
                r##"<polygon points="{:.1},{:.1} {:.1},{:.1} {:.1},{:.1}" fill="{POINT_MARKER_COLOR}" stroke="#7a5200" stroke-width="1"/>"##,
                x,
                y - 7.0,
                x - 6.0,
                y + 5.0,
                x + 6.0,
                y + 5.0
            );
        }
        previous = record.assistant_pointing;
    }
}
