//! SVG drawings of scenes, rays and candidates in world coordinates.
//!
//! Geometry sits inside `<g transform="scale(1,-1)">`, so every coordinate
//! in the file is a world coordinate and `y` points up on screen.

use std::fmt::Write;

use sparseloc::{CandidatePose, Point2, Polygon, Pose, Scene, TrialSetup};

const PAD_FRACTION: f64 = 0.05;

fn ring_path(out: &mut String, ring: &[Point2]) {
    for (i, p) in ring.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(out, "{cmd}{} {} ", p.x, p.y);
    }
    out.push('Z');
}

fn polygon_path(p: &Polygon) -> String {
    let mut d = String::new();
    for (i, (_, r)) in p.rings().enumerate() {
        if i > 0 {
            d.push(' ');
        }
        ring_path(&mut d, r);
    }
    d
}

fn pose_marker(out: &mut String, q: &Pose, class: &str, r: f64) {
    let tip = q.position + q.heading() * (2.5 * r);
    let _ = writeln!(
        out,
        "    <g class=\"{class}\"><circle cx=\"{}\" cy=\"{}\" r=\"{r}\"/><line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/></g>",
        q.position.x, q.position.y, q.position.x, q.position.y, tip.x, tip.y
    );
}

/// Renders `scene`, and optionally the trial's rays and candidate poses.
/// Output depends only on the inputs.
pub fn render_svg(scene: &Scene, trial: Option<&TrialSetup>, candidates: &[CandidatePose]) -> String {
    let b = scene.workspace.aabb();
    let pad = PAD_FRACTION * b.diameter();
    let (w, h) = (b.width() + 2.0 * pad, b.height() + 2.0 * pad);
    let stroke = b.diameter() / 500.0;
    let marker = b.diameter() / 100.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {w} {h}\" width=\"800\" height=\"{}\">",
        b.min.x - pad,
        -(b.max.y + pad),
        (800.0 * h / w).round()
    );
    let _ = writeln!(
        s,
        "  <style>.workspace{{fill:#f7f7f2;stroke:#222;stroke-width:{stroke}}} \
.obstacle{{fill:#c66;stroke:#822;stroke-width:{stroke}}} \
.ray{{stroke-width:{stroke}}} .static{{stroke:#36c}} .dynamic{{stroke:#e80;stroke-dasharray:{0} {0}}} \
.truth{{fill:#2a2;stroke:#2a2;stroke-width:{stroke}}} .candidate{{fill:none;stroke:#a0a;stroke-width:{stroke}}}</style>",
        4.0 * stroke
    );
    s.push_str("  <g transform=\"scale(1,-1)\">\n");
    let _ = writeln!(
        s,
        "    <path class=\"workspace\" fill-rule=\"evenodd\" d=\"{}\"/>",
        polygon_path(&scene.workspace)
    );
    for o in scene.placed_obstacles(0.0) {
        let _ = writeln!(s, "    <path class=\"obstacle\" fill-rule=\"evenodd\" d=\"{}\"/>", polygon_path(&o));
    }
    if let Some(t) = trial {
        for (m, &is_static) in t.measurements.iter().zip(&t.static_flags) {
            let sensor = m.sensor_pose(&t.ground_truth);
            let end = sensor.position + sensor.heading() * m.d;
            let class = if is_static { "static" } else { "dynamic" };
            let _ = writeln!(
                s,
                "    <line class=\"ray {class}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                sensor.position.x, sensor.position.y, end.x, end.y
            );
        }
        pose_marker(&mut s, &t.ground_truth, "truth", marker);
    }
    for c in candidates {
        pose_marker(&mut s, &c.pose, "candidate", marker);
    }
    s.push_str("  </g>\n</svg>\n");
    s
}
