//! Product-to-sum identities behind the closed forms.
//!
//! For `x, y ∈ R^f`:
//!
//! ```text
//! Π cos(x_i − y_i) =      Σ_μ          Π c^{1−μ_i}(x_i) c^{1−μ_i}(y_i) s^{μ_i}(x_i) s^{μ_i}(y_i)
//! Π cos(x_i + y_i) =      Σ_μ (−1)^|μ| Π ...
//! Π cos(x−y) + Π cos(x+y) = 2 Σ_{|μ| even} Π ...
//! Π cos(x−y) − Π cos(x+y) = 2 Σ_{|μ| odd}  Π ...
//! ```
//!
//! with `μ` ranging over `{0,1}^f`. The sums have `2^f` terms, so this is a
//! test-support routine only.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const TRIG_IDENTITY_MAX_F: usize = 12;

/// `|LHS − RHS|` for the four identities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigResiduals {
    pub difference: f64,
    pub sum: f64,
    pub even: f64,
    pub odd: f64,
}

impl TrigResiduals {
    pub fn max(&self) -> f64 {
        self.difference.max(self.sum).max(self.even).max(self.odd)
    }
}

pub fn trig_identity_check(x: &[f64], y: &[f64]) -> Result<TrigResiduals> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), actual: y.len() });
    }
    let f = x.len();
    if f > TRIG_IDENTITY_MAX_F {
        return Err(Error::InvalidArgument(format!("f = {f} exceeds the cap of {TRIG_IDENTITY_MAX_F}")));
    }
    let minus: f64 = x.iter().zip(y).map(|(a, b)| (a - b).cos()).product();
    let plus: f64 = x.iter().zip(y).map(|(a, b)| (a + b).cos()).product();

    let (mut even, mut odd) = (0.0, 0.0);
    for mu in 0u32..(1 << f) {
        let term: f64 = (0..f)
            .map(|i| if (mu >> i) & 1 == 1 { x[i].sin() * y[i].sin() } else { x[i].cos() * y[i].cos() })
            .product();
        if mu.count_ones() % 2 == 0 {
            even += term;
        } else {
            odd += term;
        }
    }
    Ok(TrigResiduals {
        difference: (minus - (even + odd)).abs(),
        sum: (plus - (even - odd)).abs(),
        even: (minus + plus - 2.0 * even).abs(),
        odd: (minus - plus - 2.0 * odd).abs(),
    })
}
