use super::SpaceError;

/// Strictly increasing list of entourage scales `r_1 < ... < r_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaleSchedule {
    scales: Vec<u64>,
}

impl ScaleSchedule {
    pub fn new(scales: Vec<u64>) -> Result<Self, SpaceError> {
        if scales.is_empty() {
            return Err(SpaceError::InvalidSchedule("empty schedule".into()));
        }
        if scales.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SpaceError::InvalidSchedule(format!(
                "scales must be strictly increasing: {scales:?}"
            )));
        }
        Ok(Self { scales })
    }

    /// Same as [`new`](Self::new) but also requires `r_m <= max_window / 4`.
    pub fn for_window(scales: Vec<u64>, max_window: u64) -> Result<Self, SpaceError> {
        let s = Self::new(scales)?;
        s.check_window(max_window)?;
        Ok(s)
    }

    pub fn check_window(&self, window: u64) -> Result<(), SpaceError> {
        if 4 * self.max_scale() > window {
            Err(SpaceError::InvalidSchedule(format!(
                "largest scale {} exceeds window/4 for window {window}",
                self.max_scale()
            )))
        } else {
            Ok(())
        }
    }

    pub fn scales(&self) -> &[u64] {
        &self.scales
    }

    pub fn max_scale(&self) -> u64 {
        *self.scales.last().expect("nonempty")
    }
}
