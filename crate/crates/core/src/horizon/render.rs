use super::{EventKind, EventTimeline, HorizonError, Particle};
use std::fmt::Write;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagramFormat {
    Svg,
    Ascii,
}

impl FromStr for DiagramFormat {
    type Err = HorizonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "svg" => Ok(Self::Svg),
            "ascii" | "txt" => Ok(Self::Ascii),
            _ => Err(HorizonError::UnsupportedFormat(s.to_string())),
        }
    }
}

impl DiagramFormat {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Svg => "svg",
            Self::Ascii => "txt",
        }
    }
}

/// Render a timeline. Output depends only on the timeline, so identical
/// input gives identical bytes.
pub fn emit_diagram(
    timeline: &EventTimeline,
    format: DiagramFormat,
) -> Result<String, HorizonError> {
    if !timeline.positions_finite() {
        return Err(HorizonError::Invalid(
            "timeline positions must be finite".into(),
        ));
    }
    Ok(match format {
        DiagramFormat::Svg => svg(timeline),
        DiagramFormat::Ascii => ascii(timeline),
    })
}

/// Spatial extent of the drawing, padded by 5 percent.
fn extent(t: &EventTimeline) -> (f64, f64) {
    let mut lo = t
        .events
        .iter()
        .map(|e| e.position)
        .fold(f64::INFINITY, f64::min);
    let mut hi = t
        .events
        .iter()
        .map(|e| e.position)
        .fold(f64::NEG_INFINITY, f64::max);
    if let Some(rg) = t.horizon {
        lo = lo.min(rg).min(0.0);
        hi = hi.max(rg);
    }
    if hi - lo < 1e-12 {
        lo -= 0.5;
        hi += 0.5;
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn time_span(t: &EventTimeline) -> f64 {
    t.events.iter().map(|e| e.time).fold(0.0, f64::max).max(1.0)
}

/// Two decimals, never `-0.00`.
fn num(v: f64) -> String {
    let r = (v * 100.0).round() / 100.0;
    format!("{:.2}", if r == 0.0 { 0.0 } else { r })
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 600.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 360.0;

fn svg(t: &EventTimeline) -> String {
    let (lo, hi) = extent(t);
    let tmax = time_span(t);
    let px = |r: f64| LEFT + (r - lo) / (hi - lo) * (RIGHT - LEFT);
    let py = |time: f64| BOTTOM - time / tmax * (BOTTOM - TOP);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        WIDTH, HEIGHT, WIDTH, HEIGHT
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    // axes
    let _ = writeln!(
        s,
        r#"<line class="axis" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1"/>"#,
        num(LEFT),
        num(BOTTOM),
        num(RIGHT),
        num(BOTTOM)
    );
    let _ = writeln!(
        s,
        r#"<line class="axis" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1"/>"#,
        num(LEFT),
        num(BOTTOM),
        num(LEFT),
        num(TOP)
    );
    let _ = writeln!(
        s,
        r#"<text class="axis-label" x="{}" y="{}" font-size="14">{}</text>"#,
        num(RIGHT + 10.0),
        num(BOTTOM + 5.0),
        t.axis
    );
    let _ = writeln!(
        s,
        r#"<text class="axis-label" x="{}" y="{}" font-size="14">t</text>"#,
        num(LEFT - 4.0),
        num(TOP - 10.0)
    );
    if let Some(rg) = t.horizon {
        let x = px(rg);
        let _ = writeln!(
            s,
            r#"<line class="horizon" x1="{}" y1="{}" x2="{}" y2="{}" stroke="gray" stroke-width="1.5" stroke-dasharray="6 4"/>"#,
            num(x),
            num(BOTTOM),
            num(x),
            num(TOP)
        );
        let _ = writeln!(
            s,
            r#"<text class="horizon-label" x="{}" y="{}" font-size="12">r_g = {}</text>"#,
            num(x + 4.0),
            num(TOP + 12.0),
            num(rg)
        );
    }
    for seg in &t.segments {
        let (a, b) = (&t.events[seg.from], &t.events[seg.to]);
        let (x1, y1, x2, y2) = (px(a.position), py(a.time), px(b.position), py(b.time));
        let color = match seg.particle {
            Particle::PairPositron => "firebrick",
            _ => "navy",
        };
        let _ = writeln!(
            s,
            r#"<line class="worldline" data-particle="{}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="2"/>"#,
            particle_name(seg.particle),
            num(x1),
            num(y1),
            num(x2),
            num(y2),
            color
        );
        let _ = writeln!(
            s,
            r#"<text class="label" data-particle="{}" x="{}" y="{}" font-size="14" fill="{}">{}</text>"#,
            particle_name(seg.particle),
            num(0.5 * (x1 + x2) + 8.0),
            num(0.5 * (y1 + y2)),
            color,
            seg.particle.label()
        );
        if b.kind == EventKind::Escape {
            let _ = writeln!(
                s,
                r#"<path class="arrow" d="{}" fill="{}"/>"#,
                arrowhead(x1, y1, x2, y2),
                color
            );
        }
    }
    for e in &t.events {
        if matches!(e.kind, EventKind::PairCreation | EventKind::Annihilation) {
            let _ = writeln!(
                s,
                r#"<circle class="vertex" data-event="{}" cx="{}" cy="{}" r="4" fill="black"/>"#,
                event_name(e.kind),
                num(px(e.position)),
                num(py(e.time))
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Closed triangle at `(x2, y2)` pointing along the segment.
fn arrowhead(x1: f64, y1: f64, x2: f64, y2: f64) -> String {
    let (dx, dy) = (x2 - x1, y2 - y1);
    let len = (dx * dx + dy * dy).sqrt().max(1e-9);
    let (ux, uy) = (dx / len, dy / len);
    let (bx, by) = (x2 - 10.0 * ux, y2 - 10.0 * uy);
    let (nx, ny) = (-uy * 4.0, ux * 4.0);
    format!(
        "M {} {} L {} {} L {} {} Z",
        num(x2),
        num(y2),
        num(bx + nx),
        num(by + ny),
        num(bx - nx),
        num(by - ny)
    )
}

fn particle_name(p: Particle) -> &'static str {
    match p {
        Particle::Original => "original",
        Particle::PairElectron => "pair-electron",
        Particle::PairPositron => "pair-positron",
    }
}

fn event_name(k: EventKind) -> &'static str {
    match k {
        EventKind::OriginalStart => "start",
        EventKind::PairCreation => "creation",
        EventKind::Annihilation => "annihilation",
        EventKind::Escape => "escape",
    }
}

const COLS: usize = 61;
const ROWS_PER_UNIT: usize = 4;

fn ascii(t: &EventTimeline) -> String {
    let (lo, hi) = extent(t);
    let tmax = time_span(t);
    let rows = (tmax * ROWS_PER_UNIT as f64).round() as usize + 1;
    let col = |r: f64| (((r - lo) / (hi - lo)) * (COLS - 1) as f64).round() as usize;
    let mut grid = vec![vec![' '; COLS]; rows];
    let row_of = |time: f64| rows - 1 - (time / tmax * (rows - 1) as f64).round() as usize;
    if let Some(rg) = t.horizon {
        let c = col(rg);
        for line in grid.iter_mut() {
            line[c] = ':';
        }
    }
    for seg in &t.segments {
        let (a, b) = (&t.events[seg.from], &t.events[seg.to]);
        let mark = match seg.particle {
            Particle::Original => '#',
            Particle::PairElectron => '*',
            Particle::PairPositron => '+',
        };
        let (ra, rb) = (row_of(a.time), row_of(b.time));
        for row in rb..=ra {
            let time = (rows - 1 - row) as f64 / (rows - 1) as f64 * tmax;
            let f = if b.time > a.time {
                (time - a.time) / (b.time - a.time)
            } else {
                0.0
            };
            grid[row][col(a.position + f * (b.position - a.position))] = mark;
        }
        if b.kind == EventKind::Escape {
            grid[rb][col(b.position)] = if b.position >= a.position { '>' } else { '<' };
        }
    }
    for e in &t.events {
        if matches!(e.kind, EventKind::PairCreation | EventKind::Annihilation) {
            grid[row_of(e.time)][col(e.position)] = '@';
        }
    }
    let mut s = String::new();
    for (i, line) in grid.iter().enumerate() {
        let time = (rows - 1 - i) as f64 / (rows - 1) as f64 * tmax;
        let body: String = line.iter().collect();
        let _ = writeln!(s, "t={} |{}", num(time), body.trim_end());
    }
    let _ = writeln!(s, "       +{}", "-".repeat(COLS));
    let _ = writeln!(
        s,
        "        {}{:>w$}  {}",
        num(lo),
        num(hi),
        t.axis,
        w = COLS - num(lo).len()
    );
    s.push('\n');
    let _ = writeln!(
        s,
        "# original e-   + pair e+   * pair e-   @ vertex   > escape"
    );
    if let Some(rg) = t.horizon {
        let _ = writeln!(s, ": horizon at r_g = {}", num(rg));
    }
    for seg in &t.segments {
        let (a, b) = (&t.events[seg.from], &t.events[seg.to]);
        let _ = writeln!(
            s,
            "{} {}: {} {} -> {} ({} -> {})",
            seg.particle.ascii_label(),
            particle_name(seg.particle),
            t.axis,
            num(a.position),
            num(b.position),
            event_name(a.kind),
            event_name(b.kind)
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::horizon::{flat_space_analogue, scenario_timeline, HorizonScenario};

    fn ok_scenario() -> EventTimeline {
        scenario_timeline(&HorizonScenario::new(1.0, 0.5, 1.5, 0.7, 10.0)).unwrap()
    }

    #[test]
    fn svg_structure() {
        let svg = emit_diagram(&ok_scenario(), DiagramFormat::Svg).unwrap();
        assert_eq!(svg.matches("stroke-dasharray").count(), 1);
        assert_eq!(svg.matches(r#"class="horizon""#).count(), 1);
        assert_eq!(svg.matches(r#"class="worldline""#).count(), 3);
        assert_eq!(svg.matches(r#"class="label""#).count(), 3);
        assert_eq!(svg.matches("e\u{207a}</text>").count(), 1);
        assert_eq!(svg.matches("e\u{207b}</text>").count(), 2);
        assert_eq!(svg.matches(r#"class="vertex""#).count(), 2);
        assert_eq!(svg.matches(r#"class="arrow""#).count(), 1);
    }

    #[test]
    fn flat_svg_has_no_horizon() {
        let svg =
            emit_diagram(&flat_space_analogue(0.0, 0.4, 0.1, 0.5), DiagramFormat::Svg).unwrap();
        assert!(!svg.contains("stroke-dasharray"));
        assert!(!svg.contains("horizon"));
        assert_eq!(svg.matches(r#"class="worldline""#).count(), 3);
    }

    #[test]
    fn deterministic_bytes() {
        for f in [DiagramFormat::Svg, DiagramFormat::Ascii] {
            assert_eq!(
                emit_diagram(&ok_scenario(), f).unwrap(),
                emit_diagram(&ok_scenario(), f).unwrap()
            );
        }
    }

    #[test]
    fn ascii_marks() {
        let txt = emit_diagram(&ok_scenario(), DiagramFormat::Ascii).unwrap();
        assert_eq!(txt.matches('@').count(), 3); // two vertices plus the legend
        assert!(txt.contains('>'));
        assert!(txt.contains(": horizon at r_g = 1.00"));
        let flat = emit_diagram(
            &flat_space_analogue(0.0, 0.4, 0.1, 0.5),
            DiagramFormat::Ascii,
        )
        .unwrap();
        assert!(!flat.contains("horizon"));
        assert!(flat.lines().take(13).all(|l| !l.contains(':')));
    }

    #[test]
    fn formats() {
        assert_eq!("SVG".parse::<DiagramFormat>().unwrap(), DiagramFormat::Svg);
        assert_eq!(
            "ascii".parse::<DiagramFormat>().unwrap(),
            DiagramFormat::Ascii
        );
        assert_eq!(
            "png".parse::<DiagramFormat>(),
            Err(HorizonError::UnsupportedFormat("png".into()))
        );
        let bad = flat_space_analogue(f64::NAN, 0.4, 0.1, 0.5);
        assert!(emit_diagram(&bad, DiagramFormat::Svg).is_err());
    }
}
