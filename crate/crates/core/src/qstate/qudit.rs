use crate::error::{invalid, Result};

/// Alphabet size `d = 2 * [p(p+1)/2] * [l(l+1)/2]` for superpositions over
/// radial orders up to `p_max` and azimuthal orders up to `l_max`.
pub fn qudit_dimension(p_max: u32, l_max: u32) -> Result<u64> {
    if p_max == 0 {
        return Err(invalid("p_max", "must be at least 1"));
    }
    if l_max == 0 {
        return Err(invalid("l_max", "must be at least 1"));
    }
    let tri = |n: u64| n * (n + 1) / 2;
    Ok(2 * tri(u64::from(p_max)) * tri(u64::from(l_max)))
}

/// Bits carried per photon, `log2(d)`.
pub fn qudit_bits(p_max: u32, l_max: u32) -> Result<f64> {
    Ok((qudit_dimension(p_max, l_max)? as f64).log2())
}
