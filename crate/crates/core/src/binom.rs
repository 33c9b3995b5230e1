//! Binomial coefficients reduced mod 2.
//!
//! Every coefficient in the engine (Nishida, Adem for `Q^i` and `Sq^i`, the
//! action on stunted projective spaces) goes through [`binom_mod2`], so the
//! convention for out-of-range arguments lives here and nowhere else:
//! `binom(a, b) = 0` whenever `a < 0`, `b < 0` or `b > a`.

/// `C(a, b) mod 2` by Lucas' theorem: odd iff the bits of `b` are a subset of
/// the bits of `a`.
#[inline]
pub fn binom_mod2(a: i64, b: i64) -> bool {
    if a < 0 || b < 0 || b > a {
        return false;
    }
    a & b == b
}
