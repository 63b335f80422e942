//! Exact decimal rendering of rationals and fixed significant-digit output
//! for floats.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

/// `x` with exactly `digits` fractional digits, rounded half to even.
pub fn render_decimal(x: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10u8).pow(digits as u32);
    let scaled = x.abs() * BigRational::from_integer(scale.clone());
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let twice = &r * 2u8;
    let rounded = match twice.cmp(scaled.denom()) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1u8,
        std::cmp::Ordering::Equal if q.is_even() => q,
        std::cmp::Ordering::Equal => q + 1u8,
    };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if x.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    let frac = frac_part.to_string();
    format!("{sign}{int_part}.{}{frac}", "0".repeat(digits - frac.len()))
}

/// Parses `"0.0478"`, `"-3"`, `"1/3"` or `"2.5e-2"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        return (!d.is_zero()).then(|| BigRational::new(n, d));
    }
    let (mantissa, exponent) = match text.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let whole: BigInt = format!("0{int}{frac}").parse().ok()?;
    let exp = exponent - frac.len() as i32;
    let ten = BigInt::from(10u8);
    let mut value = BigRational::from_integer(whole);
    if exp >= 0 {
        value *= BigRational::from_integer(ten.pow(exp as u32));
    } else {
        value /= BigRational::from_integer(ten.pow(exp.unsigned_abs()));
    }
    Some(if neg { -value } else { value })
}

/// Float rounded to `sig` significant digits, as the shortest decimal that
/// round-trips.
pub fn round_sig(x: f64, sig: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", sig.saturating_sub(1), x).parse().unwrap_or(x)
}

/// Text form of [`round_sig`] with 6 significant digits.
pub fn render_float(x: f64) -> String {
    format!("{}", round_sig(x, 6))
}

/// Exact `num/den` form (`"3"` for integers).
pub fn render_fraction(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Terminating decimal when the denominator has only factors 2 and 5,
/// otherwise `num/den`. Always re-parses to `x` via [`parse_rational`].
pub fn render_exact(x: &BigRational) -> String {
    let mut d = x.denom().clone();
    let (two, five) = (BigInt::from(2u8), BigInt::from(5u8));
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return render_fraction(x);
    }
    render_decimal(x, twos.max(fives))
}
