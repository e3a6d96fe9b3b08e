//! Complex numbers on the wire: `[re, im]`, with bare numbers accepted as real.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Deserialize)]
#[serde(untagged)]
enum Wire {
    Real(f64),
    Pair([f64; 2]),
}

impl From<Wire> for Complex64 {
    fn from(w: Wire) -> Self {
        match w {
            Wire::Real(x) => Complex64::new(x, 0.0),
            Wire::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

pub fn to_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub mod one {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        to_pair(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        Wire::deserialize(d).map(Complex64::from)
    }
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|z| to_pair(*z)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        Ok(Vec::<Wire>::deserialize(d)?.into_iter().map(Complex64::from).collect())
    }
}

pub mod opt_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Vec<Complex64>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|v| v.iter().map(|z| to_pair(*z)).collect::<Vec<_>>()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Complex64>>, D::Error> {
        Ok(Option::<Vec<Wire>>::deserialize(d)?.map(|v| v.into_iter().map(Complex64::from).collect()))
    }
}

pub mod opt_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &Option<Vec<Vec<Complex64>>>, s: S) -> Result<S::Ok, S::Error> {
        m.as_ref()
            .map(|m| m.iter().map(|r| r.iter().map(|z| to_pair(*z)).collect::<Vec<_>>()).collect::<Vec<_>>())
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Vec<Complex64>>>, D::Error> {
        Ok(Option::<Vec<Vec<Wire>>>::deserialize(d)?
            .map(|m| m.into_iter().map(|r| r.into_iter().map(Complex64::from).collect()).collect()))
    }
}

/// Parses `"1.5"`, `"-2"`, `"0.3+0.1i"` or `"0.3-0.1i"`.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    if let Ok(x) = s.parse::<f64>() {
        return Some(Complex64::new(x, 0.0));
    }
    let body = s.strip_suffix('i')?;
    let split = body.char_indices().skip(1).filter(|&(i, c)| (c == '+' || c == '-') && !body[..i].ends_with(['e', 'E'])).last()?.0;
    let re = body[..split].parse::<f64>().ok()?;
    let im_str = &body[split..];
    let im = match im_str {
        "+" => 1.0,
        "-" => -1.0,
        _ => im_str.parse::<f64>().ok()?,
    };
    Some(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_complex_literals() {
        assert_eq!(parse_complex("1.5"), Some(Complex64::new(1.5, 0.0)));
        assert_eq!(parse_complex("0.3-0.1i"), Some(Complex64::new(0.3, -0.1)));
        assert_eq!(parse_complex("-1e-3+2e+1i"), Some(Complex64::new(-1e-3, 20.0)));
        assert_eq!(parse_complex("2+i"), Some(Complex64::new(2.0, 1.0)));
        assert_eq!(parse_complex("x"), None);
    }
}
