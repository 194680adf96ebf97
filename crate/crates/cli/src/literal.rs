//! Complex literals: "0.25", "0.3i", "-0.1+0.2i", "i", "-i", "1e-3-2i".

use painleve::Complex;

fn number(tok: &str, whole: &str) -> Result<f64, String> {
    match tok {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => tok.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
            let bare = tok.trim_start_matches(['+', '-']);
            format!("invalid number '{bare}' in complex literal '{whole}'")
        }),
    }
}

/// Parses `s`; errors name the offending token.
pub fn parse_complex(s: &str) -> Result<Complex, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    let Some(body) = t.strip_suffix('i') else {
        let re = t.parse::<f64>().ok().filter(|v| v.is_finite());
        return re.map(|r| Complex::new(r, 0.0)).ok_or_else(|| format!("invalid complex literal '{t}'"));
    };
    // The sign separating the parts is the last one not at the start and not
    // inside an exponent.
    let bytes = body.as_bytes();
    let split =
        (1..bytes.len()).rev().find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(p) => {
            let re_tok = &body[..p];
            if re_tok.is_empty() {
                return Err(format!("missing real part in complex literal '{t}'"));
            }
            let re = re_tok
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("invalid number '{re_tok}' in complex literal '{t}'"))?;
            Ok(Complex::new(re, number(&body[p..], t)?))
        }
        None => Ok(Complex::new(0.0, number(body, t)?)),
    }
}
