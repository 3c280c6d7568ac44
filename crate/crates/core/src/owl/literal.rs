use crate::model::Datatype;

/// Canonical lexical form of `lexical` read as a `dt` value, or `None` if it
/// is not in the lexical space. Equal values have equal canonical forms:
/// integers drop signs and leading zeros (`"+01"` is `"1"`), decimals also
/// drop trailing fraction zeros (`"2.50"` is `"2.5"`, `"3"` is `"3.0"`),
/// booleans are lower case with `1`/`0` mapped to `true`/`false`.
pub fn canonical_lexical(dt: Datatype, lexical: &str) -> Option<String> {
    match dt {
        Datatype::String => Some(lexical.to_string()),
        Datatype::Boolean => match lexical.to_ascii_lowercase().as_str() {
            "true" | "1" => Some("true".into()),
            "false" | "0" => Some("false".into()),
            _ => None,
        },
        Datatype::Integer => {
            let (neg, digits) = split_sign(lexical);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            let digits = strip_leading_zeros(digits);
            Some(if neg && digits != "0" {
                format!("-{digits}")
            } else {
                digits.to_string()
            })
        }
        Datatype::Decimal => {
            let (neg, body) = split_sign(lexical);
            let (int, frac) = body.split_once('.').unwrap_or((body, ""));
            if int.is_empty() && frac.is_empty() {
                return None;
            }
            if !int.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit())
            {
                return None;
            }
            let int = if int.is_empty() {
                "0"
            } else {
                strip_leading_zeros(int)
            };
            let frac = frac.trim_end_matches('0');
            let frac = if frac.is_empty() { "0" } else { frac };
            let zero = int == "0" && frac == "0";
            Some(format!(
                "{}{int}.{frac}",
                if neg && !zero { "-" } else { "" }
            ))
        }
    }
}

fn split_sign(s: &str) -> (bool, &str) {
    if let Some(rest) = s.strip_prefix('-') {
        (true, rest)
    } else {
        (false, s.strip_prefix('+').unwrap_or(s))
    }
}

fn strip_leading_zeros(s: &str) -> &str {
    let t = s.trim_start_matches('0');
    if t.is_empty() {
        "0"
    } else {
        t
    }
}
