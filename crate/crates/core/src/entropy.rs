#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum EntropyError {
    #[error("probability {0} lies outside [0, 1]")]
    OutOfRange(f64),
}

/// Binary entropy of an item present in a fraction `p` of transactions:
/// -p*log2(p) - (1-p)*log2(1-p), with 0*log2(0) taken as 0. Items at
/// p = 0 or p = 1 carry no information and score 0.
pub fn item_entropy(p: f64) -> Result<f64, EntropyError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(EntropyError::OutOfRange(p));
    }
    Ok(entropy_term(p) + entropy_term(1.0 - p))
}

fn entropy_term(p: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}
