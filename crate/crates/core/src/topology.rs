//! RIS deployment geometry and its feasibility bounds.

use crate::error::{Constraint, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopologyKind {
    /// RIS moves on a line parallel to the DS–DU axis at lateral offset `y`.
    Parallel,
    /// RIS moves on an ellipse with DS and DU at the foci.
    Elliptical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Topology {
    pub kind: TopologyKind,
    pub d_sd: f64,
    pub y: f64,
    pub eccentricity: f64,
    /// Minimum RIS–terminal separation δ.
    pub min_separation: f64,
}

/// Far-field distance `2 f L² / c`.
pub fn fraunhofer_distance(frequency_hz: f64, aperture_m: f64, speed_of_light: f64) -> f64 {
    2.0 * frequency_hz * aperture_m * aperture_m / speed_of_light
}

impl Topology {
    pub fn parallel(d_sd: f64, y: f64, min_separation: f64) -> Self {
        Self {
            kind: TopologyKind::Parallel,
            d_sd,
            y,
            eccentricity: 1.0,
            min_separation,
        }
    }

    pub fn elliptical(d_sd: f64, eccentricity: f64, min_separation: f64) -> Self {
        Self {
            kind: TopologyKind::Elliptical,
            d_sd,
            y: 0.0,
            eccentricity,
            min_separation,
        }
    }

    /// Sum of RIS distances to the two foci (elliptical only).
    pub fn major_axis(&self) -> f64 {
        self.d_sd / self.eccentricity
    }

    /// Checks the geometric parameters, independent of feasibility.
    pub fn validate(&self) -> Result<()> {
        if !(self.d_sd > 0.0 && self.d_sd.is_finite()) {
            return Err(Error::Domain(format!("d_sd must be positive, got {}", self.d_sd)));
        }
        if !(self.min_separation > 0.0 && self.min_separation.is_finite()) {
            return Err(Error::Domain(format!(
                "min_separation must be positive, got {}",
                self.min_separation
            )));
        }
        match self.kind {
            TopologyKind::Parallel if !(self.y >= 0.0 && self.y.is_finite()) => {
                Err(Error::Domain(format!("y must be non-negative, got {}", self.y)))
            }
            TopologyKind::Elliptical if !(self.eccentricity > 0.0 && self.eccentricity <= 1.0) => {
                Err(Error::Domain(format!(
                    "eccentricity must lie in (0, 1], got {}",
                    self.eccentricity
                )))
            }
            _ => Ok(()),
        }
    }

    /// Closed feasible interval `[lower, upper]` for the placement coordinate `d`.
    pub fn feasible_interval(&self) -> Result<(f64, f64)> {
        self.validate()?;
        let delta = self.min_separation;
        match self.kind {
            TopologyKind::Parallel => {
                let disc = delta * delta - self.y * self.y;
                if disc < 0.0 {
                    return Err(Error::constraint(
                        Constraint::C4,
                        format!(
                            "min_separation {delta} is below the lateral offset {}; boundary points do not exist",
                            self.y
                        ),
                    ));
                }
                let lower = disc.sqrt();
                let upper = self.d_sd - lower;
                if lower > upper {
                    return Err(Error::constraint(
                        Constraint::C5,
                        format!("empty interval: lower bound {lower} exceeds upper bound {upper}"),
                    ));
                }
                Ok((lower, upper))
            }
            TopologyKind::Elliptical => {
                let upper = self.major_axis() - delta;
                if delta > upper {
                    return Err(Error::constraint(
                        Constraint::C7,
                        format!("empty interval: lower bound {delta} exceeds upper bound {upper}"),
                    ));
                }
                Ok((delta, upper))
            }
        }
    }

    /// Errors naming the violated bound when `d` lies outside the feasible interval.
    pub fn check_feasible(&self, d: f64) -> Result<()> {
        let (lo, hi) = self.feasible_interval()?;
        let slack = 1e-12 * self.d_sd.max(1.0);
        let (c_lo, c_hi) = match self.kind {
            TopologyKind::Parallel => (Constraint::C4, Constraint::C5),
            TopologyKind::Elliptical => (Constraint::C6, Constraint::C7),
        };
        if !d.is_finite() || d < lo - slack {
            return Err(Error::constraint(
                c_lo,
                format!("d = {d} is below the lower bound {lo}"),
            ));
        }
        if d > hi + slack {
            return Err(Error::constraint(
                c_hi,
                format!("d = {d} is above the upper bound {hi}"),
            ));
        }
        Ok(())
    }

    /// Distances `(d_sr, d_rd)` for placement coordinate `d`, without feasibility checks.
    pub fn ris_distances(&self, d: f64) -> (f64, f64) {
        match self.kind {
            TopologyKind::Parallel => {
                let y2 = self.y * self.y;
                ((d * d + y2).sqrt(), ((self.d_sd - d).powi(2) + y2).sqrt())
            }
            TopologyKind::Elliptical => (d, self.major_axis() - d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_interval() {
        let t = Topology::parallel(5.0, 0.5, 0.75);
        let (lo, hi) = t.feasible_interval().unwrap();
        assert!((lo - (0.5625f64 - 0.25).sqrt()).abs() < 1e-15);
        assert!((hi - (5.0 - lo)).abs() < 1e-15);
        let (sr, rd) = t.ris_distances(lo);
        assert!((sr - 0.75).abs() < 1e-12);
        assert!(rd > 0.75);
    }

    #[test]
    fn degenerate_parallel_names_constraint() {
        let t = Topology::parallel(5.0, 1.0, 0.75);
        match t.feasible_interval() {
            Err(Error::Constraint { constraint, .. }) => assert_eq!(constraint, Constraint::C4),
            other => panic!("unexpected {other:?}"),
        }
        let t = Topology::parallel(1.0, 0.1, 0.9);
        assert!(matches!(
            t.feasible_interval(),
            Err(Error::Constraint { constraint: Constraint::C5, .. })
        ));
    }

    #[test]
    fn elliptical_bounds() {
        let t = Topology::elliptical(5.0, 0.5, 0.75);
        assert_eq!(t.feasible_interval().unwrap(), (0.75, 9.25));
        assert!(matches!(
            t.check_feasible(0.5),
            Err(Error::Constraint { constraint: Constraint::C6, .. })
        ));
        assert!(matches!(
            t.check_feasible(9.5),
            Err(Error::Constraint { constraint: Constraint::C7, .. })
        ));
    }

    #[test]
    fn fraunhofer() {
        assert!((fraunhofer_distance(3e9, 0.1, 3e8) - 0.2).abs() < 1e-12);
    }
}
