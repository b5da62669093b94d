use super::{validate_scenario, HorizonError, HorizonScenario};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    /// The original electron at its initial radius.
    OriginalStart,
    PairCreation,
    Annihilation,
    Escape,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Event {
    pub kind: EventKind,
    pub position: f64,
    /// Schematic time: events are equally spaced in the order
    /// start, creation, annihilation, escape.
    pub time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Particle {
    Original,
    PairElectron,
    PairPositron,
}

impl Particle {
    pub fn label(self) -> &'static str {
        match self {
            Particle::PairPositron => "e\u{207a}",
            _ => "e\u{207b}",
        }
    }

    pub fn ascii_label(self) -> &'static str {
        match self {
            Particle::PairPositron => "e+",
            _ => "e-",
        }
    }
}

/// A straight worldline between two events.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment {
    pub particle: Particle,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventTimeline {
    pub events: Vec<Event>,
    pub segments: Vec<Segment>,
    pub horizon: Option<f64>,
    /// Name of the spatial axis, `r` or `x`.
    pub axis: &'static str,
}

impl EventTimeline {
    fn build(
        axis: &'static str,
        horizon: Option<f64>,
        start: f64,
        creation: f64,
        annihilation: f64,
        escape: f64,
    ) -> Self {
        let ev = |kind, position, time| Event {
            kind,
            position,
            time,
        };
        let events = vec![
            ev(EventKind::OriginalStart, start, 0.0),
            ev(EventKind::PairCreation, creation, 1.0),
            ev(EventKind::Annihilation, annihilation, 2.0),
            ev(EventKind::Escape, escape, 3.0),
        ];
        let seg = |particle, from, to| Segment { particle, from, to };
        let segments = vec![
            seg(Particle::Original, 0, 2),
            seg(Particle::PairPositron, 1, 2),
            seg(Particle::PairElectron, 1, 3),
        ];
        Self {
            events,
            segments,
            horizon,
            axis,
        }
    }

    pub fn event(&self, kind: EventKind) -> Option<(usize, &Event)> {
        self.events.iter().enumerate().find(|(_, e)| e.kind == kind)
    }

    /// Number of segments ending or starting at event `index`.
    pub fn vertex_degree(&self, index: usize) -> usize {
        self.segments
            .iter()
            .filter(|s| s.from == index || s.to == index)
            .count()
    }

    /// Segments that start outside the horizon and end inside it.
    pub fn inward_crossings(&self) -> Vec<Segment> {
        self.crossings(|a, b, rg| a > rg && b < rg)
    }

    pub fn outward_crossings(&self) -> Vec<Segment> {
        self.crossings(|a, b, rg| a < rg && b > rg)
    }

    fn crossings(&self, test: impl Fn(f64, f64, f64) -> bool) -> Vec<Segment> {
        let Some(rg) = self.horizon else {
            return Vec::new();
        };
        self.segments
            .iter()
            .filter(|s| test(self.events[s.from].position, self.events[s.to].position, rg))
            .copied()
            .collect()
    }

    pub fn positions_finite(&self) -> bool {
        self.events.iter().all(|e| e.position.is_finite())
            && self.horizon.is_none_or(f64::is_finite)
    }
}

/// Timeline of a validated horizon scenario.
pub fn scenario_timeline(s: &HorizonScenario) -> Result<EventTimeline, HorizonError> {
    let v = validate_scenario(s)?;
    if !v.is_ok() {
        return Err(HorizonError::Invalid(v.violations.join("; ")));
    }
    Ok(EventTimeline::build(
        "r",
        Some(s.r_g),
        s.r,
        s.r1,
        s.r2,
        s.r_prime,
    ))
}

/// The same exchange on a line without a horizon: original particle at `x`,
/// pair created at `x1`, annihilation at `x2`, survivor ending at `x_prime`.
pub fn flat_space_analogue(x: f64, x1: f64, x2: f64, x_prime: f64) -> EventTimeline {
    EventTimeline::build("x", None, x, x1, x2, x_prime)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_topology() {
        let t = scenario_timeline(&HorizonScenario::new(1.0, 0.5, 1.5, 0.7, 10.0)).unwrap();
        assert_eq!(t.segments.len(), 3);
        let (ann, _) = t.event(EventKind::Annihilation).unwrap();
        assert_eq!(t.vertex_degree(ann), 2);
        let joined: Vec<_> = t
            .segments
            .iter()
            .filter(|s| s.to == ann)
            .map(|s| s.particle)
            .collect();
        assert_eq!(joined, vec![Particle::Original, Particle::PairPositron]);
        let (esc, e) = t.event(EventKind::Escape).unwrap();
        assert_eq!(e.position, 10.0);
        assert_eq!(
            t.segments.iter().find(|s| s.to == esc).unwrap().particle,
            Particle::PairElectron
        );
        let inward = t.inward_crossings();
        assert_eq!(inward.len(), 1);
        assert_eq!(inward[0].particle, Particle::PairPositron);
        assert!(t.outward_crossings().is_empty());
    }

    #[test]
    fn invalid_scenarios_have_no_timeline() {
        let err = scenario_timeline(&HorizonScenario::new(1.0, 0.5, 0.9, 0.7, 10.0)).unwrap_err();
        assert_eq!(err, HorizonError::Invalid("r1 > r_g".into()));
    }

    #[test]
    fn flat_analogue() {
        let t = flat_space_analogue(0.0, 0.4, 0.1, 0.5);
        assert_eq!(t.segments.len(), 3);
        assert!(t.horizon.is_none());
        assert_eq!(t.event(EventKind::Escape).unwrap().1.position, 0.5);
        let annihilations = (0..t.events.len())
            .filter(|&i| t.events[i].kind == EventKind::Annihilation && t.vertex_degree(i) == 2)
            .count();
        assert_eq!(annihilations, 1);
        // coincident creation and annihilation points keep the topology
        let d = flat_space_analogue(0.0, 0.3, 0.3, 0.5);
        assert_eq!(d.vertex_degree(2), 2);
        assert_eq!(d.segments.len(), 3);
    }
}
