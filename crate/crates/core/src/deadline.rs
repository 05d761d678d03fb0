use std::time::{Duration, Instant};

/// Cooperative time budget checked at coarse intervals inside the mining
/// and rule-generation loops. `Deadline::none()` never expires.
#[derive(Debug, Clone, Copy)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn none() -> Deadline {
        Deadline(None)
    }

    pub fn after(budget: Duration) -> Deadline {
        Deadline(Some(Instant::now() + budget))
    }

    pub fn at(instant: Instant) -> Deadline {
        Deadline(Some(instant))
    }

    pub fn expired(&self) -> bool {
        self.0.is_some_and(|t| Instant::now() >= t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn none_never_expires() {
        assert!(!Deadline::none().expired());
    }

    #[test]
    fn past_instant_is_expired() {
        assert!(Deadline::at(Instant::now()).expired());
        assert!(!Deadline::after(Duration::from_secs(3600)).expired());
    }
}
