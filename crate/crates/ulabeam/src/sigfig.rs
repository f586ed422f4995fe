//! Fixed-significant-digit decimal formatting for CSV output.
//!
//! Reproduces C's `%.6g`: six significant digits, fixed notation while the
//! decimal exponent lies in `[-4, 6)`, scientific otherwise, trailing
//! fractional zeros removed, exponent printed with a sign and at least two
//! digits. Rounding happens exactly once (in the exponential pre-format), so
//! values that round across a power of ten pick their notation from the
//! rounded exponent, like `%g` does.

/// Formats `x` with six significant digits, `%.6g`-style.
pub(crate) fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    // One correctly-rounded conversion; everything after is digit shuffling.
    let s = format!("{:.5e}", x);
    let (mant, exp) = s.split_once('e').expect("exponential format");
    let exp: i32 = exp.parse().expect("exponent digits");
    let neg = mant.starts_with('-');
    let digits: Vec<u8> = mant
        .bytes()
        .filter(|b| b.is_ascii_digit())
        .collect();
    debug_assert_eq!(digits.len(), 6);

    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if (-4..6).contains(&exp) {
        if exp < 0 {
            out.push_str("0.");
            for _ in 0..(-exp - 1) {
                out.push('0');
            }
            let frac = trim_zeros(&digits);
            out.push_str(std::str::from_utf8(frac).unwrap());
        } else {
            let split = (exp + 1) as usize;
            out.push_str(std::str::from_utf8(&digits[..split]).unwrap());
            let frac = trim_zeros(&digits[split..]);
            if !frac.is_empty() {
                out.push('.');
                out.push_str(std::str::from_utf8(frac).unwrap());
            }
        }
    } else {
        out.push(digits[0] as char);
        let frac = trim_zeros(&digits[1..]);
        if !frac.is_empty() {
            out.push('.');
            out.push_str(std::str::from_utf8(frac).unwrap());
        }
        let sign = if exp < 0 { '-' } else { '+' };
        out.push('e');
        out.push(sign);
        out.push_str(&format!("{:02}", exp.abs()));
    }
    out
}

fn trim_zeros(digits: &[u8]) -> &[u8] {
    let mut end = digits.len();
    while end > 0 && digits[end - 1] == b'0' {
        end -= 1;
    }
    &digits[..end]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_and_simple_fractions() {
        assert_eq!(format_sig6(0.0), "0");
        assert_eq!(format_sig6(1.0), "1");
        assert_eq!(format_sig6(30.0), "30");
        assert_eq!(format_sig6(8000.0), "8000");
        assert_eq!(format_sig6(0.1), "0.1");
        assert_eq!(format_sig6(1.5), "1.5");
        assert_eq!(format_sig6(-2.25), "-2.25");
    }

    #[test]
    fn six_significant_digits() {
        assert_eq!(format_sig6(14.7712125472), "14.7712");
        assert_eq!(format_sig6(-86.55078), "-86.5508");
        assert_eq!(format_sig6(4287.5), "4287.5");
        assert_eq!(format_sig6(1.0 / 29.0), "0.0344828");
        assert_eq!(format_sig6(123456.4), "123456");
    }

    #[test]
    fn fixed_to_scientific_crossover() {
        assert_eq!(format_sig6(0.000123456789), "0.000123457");
        assert_eq!(format_sig6(0.0000123456789), "1.23457e-05");
        assert_eq!(format_sig6(999999.0), "999999");
        assert_eq!(format_sig6(1234567.89), "1.23457e+06");
        assert_eq!(format_sig6(1.23456789e-7), "1.23457e-07");
        assert_eq!(format_sig6(-1.0e9), "-1e+09");
    }

    #[test]
    fn rounding_happens_before_notation_choice() {
        // 999999.5 rounds (to even) to 1.00000e6, which is scientific
        // territory, and 0.99999999 rounds to plain 1.
        assert_eq!(format_sig6(999999.6), "1e+06");
        assert_eq!(format_sig6(0.99999999), "1");
        assert_eq!(format_sig6(9.9999999), "10");
        assert_eq!(format_sig6(0.000099999999), "0.0001");
    }

    #[test]
    fn matches_reference_formatter_on_random_values() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(56);
        for _ in 0..2000 {
            let exp = rng.gen_range(-9..9);
            let x: f64 = rng.gen_range(-1.0..1.0) * 10f64.powi(exp);
            let got = format_sig6(x);
            // Round-trip: the printed value re-parses within half an ulp of
            // the sixth significant digit.
            let back: f64 = got.parse().unwrap();
            let mag = x.abs().max(back.abs());
            let tol = 10f64.powi(mag.log10().floor() as i32 - 5) * 0.500001;
            assert!(
                (back - x).abs() <= tol,
                "{x} printed as {got}, reparsed {back}"
            );
            // And never more than six significant digits.
            let sig = got
                .trim_start_matches('-')
                .split('e')
                .next()
                .unwrap()
                .chars()
                .filter(|c| c.is_ascii_digit())
                .collect::<String>()
                .trim_start_matches('0')
                .len();
            assert!(sig <= 6, "{x} printed as {got}");
        }
    }
}
