//! Seeded run of the integral inequalities over random curves.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{random_closed_disk_curve, random_open_profile, CurveGeometry};

use super::inequalities::{est_dxu1_check, length_ratio_holds, WillmoreCheck};
use super::AnalysisError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct InequalityStat {
    pub trials: usize,
    pub violations: usize,
    /// Smallest `rhs − lhs` (or largest error for identities) seen.
    pub worst: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalitySuite {
    pub seed: u64,
    pub est_dxu1: InequalityStat,
    pub length_ratio: InequalityStat,
    pub fenchel: InequalityStat,
    /// `worst` is the largest relative error between the two Willmore values.
    pub willmore: InequalityStat,
}

impl InequalitySuite {
    pub fn violations(&self) -> usize {
        self.est_dxu1.violations + self.length_ratio.violations + self.fenchel.violations + self.willmore.violations
    }
}

/// `trials` random curves for each inequality, `willmore_trials` profiles at `N = 512` for the identity.
pub fn inequality_suite(seed: u64, trials: usize, willmore_trials: usize) -> Result<InequalitySuite, AnalysisError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let margin = |s: &mut InequalityStat, m: f64| {
        s.trials += 1;
        if s.trials == 1 || m < s.worst {
            s.worst = m;
        }
        if !(m >= 0.0) {
            s.violations += 1;
        }
    };
    let mut est = InequalityStat::default();
    let mut ratio = InequalityStat::default();
    let mut fenchel = InequalityStat::default();
    for _ in 0..trials {
        let u = random_open_profile(&mut rng, 256);
        let (lhs, rhs) = est_dxu1_check(&u)?;
        margin(&mut est, rhs - lhs);
        let c = random_closed_disk_curve(&mut rng, 256);
        let (lh, le, _) = length_ratio_holds(&c)?;
        margin(&mut ratio, lh - 2.0 * le);
        let e = CurveGeometry::new(&c)?.energy();
        margin(&mut fenchel, lh - 4.0 * PI * PI / e);
    }
    let mut willmore = InequalityStat::default();
    for _ in 0..willmore_trials {
        let u = random_open_profile(&mut rng, 512);
        let w = WillmoreCheck::new(&u)?;
        willmore.trials += 1;
        willmore.worst = willmore.worst.max(w.rel_error);
        if !(w.rel_error < 1e-3) {
            willmore.violations += 1;
        }
    }
    Ok(InequalitySuite { seed, est_dxu1: est, length_ratio: ratio, fenchel, willmore })
}
