//! Grid and list flag syntax.

use num_bigint::BigInt;
use polydisc_core::{Error, Result};

/// `geometric:<lo>:<hi>:<count>` or a comma list, returned sorted ascending
/// without duplicates.
pub fn parse_real_grid(s: &str) -> Result<Vec<f64>> {
    let mut v = if let Some(rest) = s.strip_prefix("geometric:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidInput(format!("expected geometric:<lo>:<hi>:<count>, got `{s}`")));
        }
        let lo = parse_real(parts[0])?;
        let hi = parse_real(parts[1])?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| Error::InvalidInput(format!("invalid point count `{}`", parts[2])))?;
        if !(lo > 0.0 && hi > 0.0) {
            return Err(Error::InvalidInput("geometric grid endpoints must be positive".into()));
        }
        match count {
            0 => return Err(Error::InvalidInput("geometric grid needs at least one point".into())),
            1 => vec![lo],
            _ => {
                let (a, b) = (lo.ln(), hi.ln());
                (0..count)
                    .map(|i| match i {
                        0 => lo,
                        i if i == count - 1 => hi,
                        i => (a + (b - a) * i as f64 / (count - 1) as f64).exp(),
                    })
                    .collect()
            }
        }
    } else {
        s.split(',').map(|t| parse_real(t.trim())).collect::<Result<Vec<f64>>>()?
    };
    if v.iter().any(|x| *x < 0.0) {
        return Err(Error::InvalidInput(format!("grid values must be nonnegative: `{s}`")));
    }
    v.sort_by(f64::total_cmp);
    v.dedup();
    Ok(v)
}

fn parse_real(s: &str) -> Result<f64> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(Error::InvalidInput(format!("invalid number `{s}`"))),
    }
}

/// Comma list of nonnegative decimal integers, sorted ascending.
pub fn parse_thresholds(s: &str) -> Result<Vec<BigInt>> {
    let mut v = Vec::new();
    for t in s.split(',') {
        let t = t.trim();
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::InvalidInput(format!("threshold `{t}` is not a nonnegative decimal integer")));
        }
        v.push(t.parse::<BigInt>().map_err(|_| Error::InvalidInput(format!("invalid threshold `{t}`")))?);
    }
    v.sort();
    v.dedup();
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_endpoints_exact() {
        let g = parse_real_grid("geometric:1e-5:1e-2:4").unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g[0], 1e-5);
        assert_eq!(g[3], 1e-2);
        assert!((g[1] / 1e-4 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn descending_geometric_is_sorted() {
        let g = parse_real_grid("geometric:1:0.01:3").unwrap();
        assert_eq!(g.first(), Some(&0.01));
        assert_eq!(g.last(), Some(&1.0));
    }

    #[test]
    fn lists() {
        assert_eq!(parse_real_grid("0.5, 0, 2").unwrap(), vec![0.0, 0.5, 2.0]);
        assert!(parse_real_grid("1,x").is_err());
        assert!(parse_real_grid("-1").is_err());
        assert!(parse_real_grid("geometric:0:1:3").is_err());
        assert!(parse_real_grid("geometric:1:2").is_err());
    }

    #[test]
    fn thresholds_are_exact_integers() {
        let x = parse_thresholds("123456789012345678901234567890,4").unwrap();
        assert_eq!(x[0], BigInt::from(4));
        assert_eq!(x[1].to_string(), "123456789012345678901234567890");
        assert!(parse_thresholds("1e3").is_err());
        assert!(parse_thresholds("-4").is_err());
        assert!(parse_thresholds("4.0").is_err());
    }
}
