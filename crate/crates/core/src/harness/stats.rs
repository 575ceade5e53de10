use serde::Serialize;
use statrs::function::factorial::ln_binomial;

/// Paired sign test of "first < second". Exact ties are dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignTest {
    pub wins: u64,
    pub losses: u64,
    pub ties: u64,
    /// Two-sided exact binomial p-value.
    pub p_value: f64,
}

impl SignTest {
    /// Significant at `alpha` and in the direction of the claim.
    pub fn supports_less(&self, alpha: f64) -> bool {
        self.wins > self.losses && self.p_value < alpha
    }
}

pub fn sign_test<I: IntoIterator<Item = (f64, f64)>>(pairs: I) -> SignTest {
    let (mut wins, mut losses, mut ties) = (0u64, 0u64, 0u64);
    for (a, b) in pairs {
        if a < b {
            wins += 1;
        } else if a > b {
            losses += 1;
        } else {
            ties += 1;
        }
    }
    let n = wins + losses;
    let k = wins.min(losses);
    let tail: f64 = (0..=k)
        .map(|i| (ln_binomial(n, i) - n as f64 * std::f64::consts::LN_2).exp())
        .sum();
    SignTest {
        wins,
        losses,
        ties,
        p_value: (2.0 * tail).min(1.0),
    }
}
