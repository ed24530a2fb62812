use crate::runs::RunProfile;

/// Run-based entropy `H = Σ (r_i/n) · log2(n / r_i)` of a run profile.
///
/// A single run has entropy 0; `ρ` equal runs have entropy `log2 ρ`.
pub fn run_entropy(profile: &RunProfile) -> f64 {
    let n = profile.n() as f64;
    profile
        .lengths()
        .iter()
        .map(|&r| {
            let r = r as f64;
            (r / n) * (n / r).log2()
        })
        .sum()
}
