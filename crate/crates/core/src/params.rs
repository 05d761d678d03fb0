use crate::fraction::Fraction;

/// Thresholds controlling a mining run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MiningParams {
    /// Minimum support in [0, 1]; an itemset with count m qualifies when
    /// m/n >= support.
    pub support: Fraction,
    /// Minimum rule confidence in [0, 1], same >= convention.
    pub confidence: Fraction,
    /// Ubiquitousness cutoff in (0, 1]; items with support strictly above
    /// it are dropped before mining. `None` disables the filter.
    pub ubiquitousness: Option<Fraction>,
    /// Optional cap on mined itemset size.
    pub max_itemset_len: Option<usize>,
}

impl MiningParams {
    pub fn new(support: Fraction, confidence: Fraction) -> MiningParams {
        MiningParams {
            support,
            confidence,
            ubiquitousness: None,
            max_itemset_len: None,
        }
    }

    pub fn with_ubiquitousness(mut self, u: Fraction) -> MiningParams {
        self.ubiquitousness = Some(u);
        self
    }

    pub fn with_max_itemset_len(mut self, len: usize) -> MiningParams {
        self.max_itemset_len = Some(len);
        self
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        if !self.support.in_unit_interval() {
            return Err(ParamsError::SupportRange(self.support));
        }
        if !self.confidence.in_unit_interval() {
            return Err(ParamsError::ConfidenceRange(self.confidence));
        }
        if let Some(u) = self.ubiquitousness {
            if u.is_zero() || !u.in_unit_interval() {
                return Err(ParamsError::UbiquitousnessRange(u));
            }
            // support > u would leave every kept item infrequent by
            // construction: anything above the support floor was removed.
            if self.support > u {
                return Err(ParamsError::SupportAboveUbiquitousness {
                    support: self.support,
                    ubiquitousness: u,
                });
            }
        }
        if self.max_itemset_len == Some(0) {
            return Err(ParamsError::ZeroMaxItemsetLen);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ParamsError {
    #[error("support must lie in [0, 1], got {0}")]
    SupportRange(Fraction),
    #[error("confidence must lie in [0, 1], got {0}")]
    ConfidenceRange(Fraction),
    #[error("ubiquitousness must lie in (0, 1], got {0}")]
    UbiquitousnessRange(Fraction),
    #[error("support {support} exceeds ubiquitousness {ubiquitousness}; no itemset can qualify")]
    SupportAboveUbiquitousness {
        support: Fraction,
        ubiquitousness: Fraction,
    },
    #[error("max itemset length must be at least 1")]
    ZeroMaxItemsetLen,
}
