use super::DynamicsError;
use crate::linalg::Vec3;
use std::io::{Read, Write};

pub const COLUMNS: [&str; 8] = ["t", "x1", "x2", "x3", "j1", "j2", "j3", "norm"];

/// Sampled `<x>(t)`, `<j>(t)` and norm of a propagated packet.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub position: Vec<Vec3>,
    pub current: Vec<Vec3>,
    pub norm: Vec<f64>,
}

impl TrajectoryRecord {
    pub fn push(&mut self, t: f64, x: Vec3, j: Vec3, norm: f64) {
        self.times.push(t);
        self.position.push(x);
        self.current.push(j);
        self.norm.push(norm);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_norm_defect(&self) -> f64 {
        self.norm
            .iter()
            .map(|n| (n - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Time average of `<j>`.
    pub fn mean_current(&self) -> Vec3 {
        let n = self.len().max(1) as f64;
        let mut m = [0.0; 3];
        for j in &self.current {
            for i in 0..3 {
                m[i] += j[i] / n;
            }
        }
        m
    }

    /// Largest deviation of any `<j>` component from its time average.
    pub fn current_excursion(&self) -> f64 {
        let m = self.mean_current();
        self.current
            .iter()
            .flat_map(|j| (0..3).map(move |i| (j[i] - m[i]).abs()))
            .fold(0.0, f64::max)
    }

    /// Worst `|d<x>/dt - <j>|` over interior samples and the first `axes`
    /// components, relative to `max |<j>|`, with a fourth-order central
    /// difference. Needs uniform sampling. A 1D grid resolves only the x
    /// axis; transverse currents there have no position to match.
    pub fn continuity_defect(&self, axes: usize) -> f64 {
        let n = self.len();
        if n < 5 {
            return f64::NAN;
        }
        let dt = self.times[1] - self.times[0];
        let scale = self
            .current
            .iter()
            .flat_map(|j| j[..axes].iter().map(|x| x.abs()))
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let mut worst = 0.0f64;
        for k in 2..n - 2 {
            for i in 0..axes {
                let x = |o: usize| self.position[o][i];
                let dx = (-x(k + 2) + 8.0 * x(k + 1) - 8.0 * x(k - 1) + x(k - 2)) / (12.0 * dt);
                worst = worst.max((dx - self.current[k][i]).abs() / scale);
            }
        }
        worst
    }

    /// Comma-separated with a header row; values in 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), DynamicsError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(COLUMNS)
            .map_err(|e| DynamicsError::Format(e.to_string()))?;
        for k in 0..self.len() {
            let x = self.position[k];
            let j = self.current[k];
            let row = [
                self.times[k],
                x[0],
                x[1],
                x[2],
                j[0],
                j[1],
                j[2],
                self.norm[k],
            ];
            w.write_record(row.iter().map(|v| format!("{v:.16e}")))
                .map_err(|e| DynamicsError::Format(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self, DynamicsError> {
        let mut r = csv::Reader::from_reader(input);
        let header = r
            .headers()
            .map_err(|e| DynamicsError::Format(e.to_string()))?;
        if header.iter().map(str::trim).ne(COLUMNS) {
            return Err(DynamicsError::Format(format!(
                "expected columns {}, found {}",
                COLUMNS.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut rec = Self::default();
        for (line, row) in r.records().enumerate() {
            let row = row.map_err(|e| DynamicsError::Format(e.to_string()))?;
            let v: Vec<f64> = row
                .iter()
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| DynamicsError::Format(format!("row {}: {e}", line + 2)))?;
            if v.len() != 8 {
                return Err(DynamicsError::Format(format!(
                    "row {}: expected 8 fields",
                    line + 2
                )));
            }
            rec.push(v[0], [v[1], v[2], v[3]], [v[4], v[5], v[6]], v[7]);
        }
        Ok(rec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn csv_roundtrip_is_exact(rows in proptest::collection::vec(proptest::array::uniform8(-1e6f64..1e6), 0..20)) {
            let mut rec = TrajectoryRecord::default();
            for r in &rows {
                rec.push(r[0], [r[1], r[2], r[3]], [r[4], r[5], r[6]], r[7]);
            }
            let mut buf = Vec::new();
            rec.write_csv(&mut buf).unwrap();
            let back = TrajectoryRecord::read_csv(buf.as_slice()).unwrap();
            prop_assert_eq!(back, rec);
        }
    }

    #[test]
    fn rejects_wrong_header() {
        let text = "t,x,y\n0,1,2\n";
        assert!(matches!(
            TrajectoryRecord::read_csv(text.as_bytes()),
            Err(DynamicsError::Format(_))
        ));
    }

    #[test]
    fn continuity_of_linear_motion() {
        let mut rec = TrajectoryRecord::default();
        for k in 0..10 {
            let t = k as f64 * 0.1;
            rec.push(t, [0.5 * t, 0.0, 0.0], [0.5, 0.0, 0.0], 1.0);
        }
        assert!(rec.continuity_defect(3) < 1e-12);
        assert_eq!(rec.max_norm_defect(), 0.0);
    }
}
