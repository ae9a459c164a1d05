//! Significant-figure presentation of metric values.

/// Formats `x` to `sig` significant figures, rounding half away from zero.
///
/// The value is first rounded to 12 significant digits so that binary
/// representation noise (0.175 is stored as 0.17499999999999998...) does not
/// flip a decimal half-way case.
pub fn format_sig(x: f64, sig: usize) -> String {
    assert!(sig >= 1, "at least one significant figure");
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let cleaned = format!("{:.11e}", x.abs());
    let (mantissa, exponent) = cleaned.split_once('e').expect("exponent form");
    let mut exponent: i32 = exponent.parse().expect("integer exponent");
    let digits: Vec<u8> = mantissa
        .bytes()
        .filter(u8::is_ascii_digit)
        .map(|b| b - b'0')
        .collect();

    let mut kept: Vec<u8> = digits[..sig.min(digits.len())].to_vec();
    if digits.get(sig).is_some_and(|&d| d >= 5) {
        let mut i = kept.len();
        loop {
            if i == 0 {
                kept.insert(0, 1);
                kept.pop();
                exponent += 1;
                break;
            }
            i -= 1;
            if kept[i] == 9 {
                kept[i] = 0;
            } else {
                kept[i] += 1;
                break;
            }
        }
    }

    let digits: String = kept.iter().map(|d| char::from(b'0' + d)).collect();
    let sig = sig as i32;
    let body = if exponent < 0 {
        format!("0.{}{}", "0".repeat((-exponent - 1) as usize), digits)
    } else if exponent >= sig - 1 {
        format!("{}{}", digits, "0".repeat((exponent - sig + 1) as usize))
    } else {
        let split = (exponent + 1) as usize;
        format!("{}.{}", &digits[..split], &digits[split..])
    };
    if x < 0.0 {
        format!("-{body}")
    } else {
        body
    }
}
