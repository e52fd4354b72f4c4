//! Parsers for the command-line literals.
//!
//! ```text
//! complex := [sign] decimal [ (+|-) decimal "i" ]
//! decimal := digits [ "." digits? ] [ exponent ] | "." digits [ exponent ]
//! exponent := (e|E) [sign] digits
//! ```
//!
//! Whitespace is not allowed anywhere inside a literal.

use num_complex::Complex64;

/// Length of the decimal starting at `s[0]`, or `None` if there is none.
fn decimal_len(s: &[u8]) -> Option<usize> {
    let digits = |from: usize| s[from..].iter().take_while(|c| c.is_ascii_digit()).count();
    let int = digits(0);
    let mut end = int;
    let mut frac = 0;
    if s.get(end) == Some(&b'.') {
        frac = digits(end + 1);
        end += 1 + frac;
    }
    if int == 0 && frac == 0 {
        return None;
    }
    if matches!(s.get(end), Some(b'e' | b'E')) {
        let mut k = end + 1;
        if matches!(s.get(k), Some(b'+' | b'-')) {
            k += 1;
        }
        let exp = digits(k);
        if exp == 0 {
            return None;
        }
        end = k + exp;
    }
    Some(end)
}

fn parse_f64(text: &str, what: &str) -> Result<f64, String> {
    text.parse::<f64>()
        .map_err(|_| format!("invalid {what} `{text}`"))
        .and_then(|x| {
            if x.is_finite() {
                Ok(x)
            } else {
                Err(format!("{what} `{text}` is not finite"))
            }
        })
}

pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let bad = || format!("invalid complex literal `{text}` (expected a, a+bi or a-bi)");
    let b = text.as_bytes();
    let mut pos = usize::from(matches!(b.first(), Some(b'+' | b'-')));
    pos += decimal_len(&b[pos..]).ok_or_else(bad)?;
    let re = parse_f64(&text[..pos], "real part")?;
    if pos == b.len() {
        return Ok(Complex64::new(re, 0.0));
    }
    if !matches!(b[pos], b'+' | b'-') {
        return Err(bad());
    }
    let start = pos;
    pos += 1;
    pos += decimal_len(&b[pos..]).ok_or_else(bad)?;
    if &b[pos..] != b"i" {
        return Err(bad());
    }
    let im = parse_f64(&text[start..pos], "imaginary part")?;
    Ok(Complex64::new(re, im))
}

/// `X,Y` with two real numbers.
pub fn parse_pair(text: &str) -> Result<(f64, f64), String> {
    let (x, y) = text
        .split_once(',')
        .ok_or_else(|| format!("expected X,Y, got `{text}`"))?;
    Ok((parse_f64(x, "coordinate")?, parse_f64(y, "coordinate")?))
}

/// `WxH` with two positive integers.
pub fn parse_resolution(text: &str) -> Result<(u32, u32), String> {
    let (w, h) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, got `{text}`"))?;
    let dim = |s: &str| {
        s.parse::<u32>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| format!("invalid dimension `{s}` in `{text}`"))
    };
    Ok((dim(w)?, dim(h)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepted_literals() {
        let c = |re, im| Complex64::new(re, im);
        for (text, want) in [
            ("20", c(20.0, 0.0)),
            ("-20", c(-20.0, 0.0)),
            ("+1.5", c(1.5, 0.0)),
            ("1+2i", c(1.0, 2.0)),
            ("1-2i", c(1.0, -2.0)),
            ("-0.5-.25i", c(-0.5, -0.25)),
            ("1e-3+2E2i", c(1e-3, 200.0)),
            ("3.", c(3.0, 0.0)),
        ] {
            assert_eq!(parse_complex(text).unwrap(), want, "{text}");
        }
    }

    #[test]
    fn rejected_literals() {
        for text in [
            "", "i", "2i", "1+i", "1 + 2i", " 1", "1+2", "1+2j", "1+2ii", "--1", "1e", "inf",
            "NaN", ".", "1e999",
        ] {
            assert!(parse_complex(text).is_err(), "{text}");
        }
    }

    #[test]
    fn pairs_and_resolutions() {
        assert_eq!(parse_pair("-1.5,2").unwrap(), (-1.5, 2.0));
        assert!(parse_pair("1;2").is_err());
        assert_eq!(parse_resolution("400x300").unwrap(), (400, 300));
        assert!(parse_resolution("0x3").is_err());
        assert!(parse_resolution("400").is_err());
    }
}
