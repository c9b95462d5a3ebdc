//! Sweep axes.

use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    SnrDb,
    TrainLen,
    QOverPDb,
    Alpha,
    N,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    /// Evenly spaced in decibels, i.e. geometric in the value itself.
    LogDb,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub scale: Scale,
}

impl SweepSpec {
    pub fn new(axis: Axis, start: f64, stop: f64, points: usize, scale: Scale) -> Result<Self, UsageError> {
        if !(start.is_finite() && stop.is_finite()) || start >= stop {
            return Err(UsageError(format!("{axis:?} sweep needs start < stop, got {start}..{stop}")));
        }
        if points < 2 {
            return Err(UsageError(format!("{axis:?} sweep needs at least 2 points")));
        }
        if scale == Scale::LogDb && start <= 0.0 {
            return Err(UsageError(format!("{axis:?} log sweep needs a positive start")));
        }
        Ok(Self { axis, start, stop, points, scale })
    }

    /// Grid values, endpoints included exactly.
    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    return self.stop;
                }
                match self.scale {
                    Scale::Linear => self.start + i as f64 * ((self.stop - self.start) / last),
                    Scale::LogDb => self.start * (self.stop / self.start).powf(i as f64 / last),
                }
            })
            .collect()
    }

    /// Grid rounded to distinct integers, for length axes.
    pub fn integer_values(&self) -> Vec<u64> {
        let mut values: Vec<u64> = self.values().into_iter().map(|v| v.round().max(1.0) as u64).collect();
        values.dedup();
        values
    }
}

/// Decade grid `m·10^k` for the usual 1-1.2-1.5-2-... mantissas, clipped to
/// `[lo, hi]`.
pub fn decade_grid(lo: u64, hi: u64) -> Vec<u64> {
    const MANTISSAS: [f64; 12] = [1.0, 1.2, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0];
    let mut grid = Vec::new();
    let mut decade = 1.0;
    while decade <= hi as f64 {
        for m in MANTISSAS {
            let n = (m * decade).round() as u64;
            if n >= lo && n <= hi {
                grid.push(n);
            }
        }
        decade *= 10.0;
    }
    grid.dedup();
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_snr_grid_is_half_db() {
        let values = SweepSpec::new(Axis::SnrDb, -5.0, 40.0, 91, Scale::Linear).unwrap().values();
        assert_eq!(values.len(), 91);
        assert_eq!(values[0], -5.0);
        assert_eq!(values[10], 0.0);
        assert_eq!(values[46], 18.0);
        assert_eq!(values[90], 40.0);
        assert!(values.iter().all(|v| (v * 2.0).fract() == 0.0));
    }

    #[test]
    fn log_sweep_is_geometric() {
        let values = SweepSpec::new(Axis::N, 10.0, 1000.0, 3, Scale::LogDb).unwrap().values();
        assert!((values[1] - 100.0).abs() < 1e-9);
        let ints = SweepSpec::new(Axis::TrainLen, 1.0, 2.0, 5, Scale::Linear).unwrap().integer_values();
        assert_eq!(ints, vec![1, 2]);
    }

    #[test]
    fn malformed_sweeps_rejected() {
        assert!(SweepSpec::new(Axis::Alpha, 1.0, 0.0, 10, Scale::Linear).is_err());
        assert!(SweepSpec::new(Axis::Alpha, 0.0, 1.0, 1, Scale::Linear).is_err());
        assert!(SweepSpec::new(Axis::QOverPDb, 0.0, 1.0, 5, Scale::LogDb).is_err());
    }

    #[test]
    fn decade_grid_contents() {
        let grid = decade_grid(10, 10_000);
        assert_eq!(grid.len(), 37);
        assert_eq!(grid[0], 10);
        assert!(grid.contains(&500));
        assert_eq!(*grid.last().unwrap(), 10_000);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }
}
