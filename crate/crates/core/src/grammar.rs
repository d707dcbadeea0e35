//! One-line text forms for catalog functions, regions and numbers.
//!
//! ```text
//! function  := name [":" key "=" value ("," key "=" value)*]
//! region    := "disc:c=<z>,r=<x>"
//!            | "polydisc:[c=<z;z;…>,]r=<x;x;…>"
//!            | "segment:a=<z;…>,b=<z;…>"
//!            | "box:[c=<z;…>,]r=<x>,a=<x;x;…>"
//!            | "polytope:v=<z;…>|<z;…>|…"
//! z         := real | real "+" real "i" | real "-" real "i" | real "i" | "i" | "-i"
//! ```
//!
//! Lists use `;`, matrix rows and polytope vertices use `|`.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::catalog::{catalog_lookup, PshFunction};
use crate::error::{Error, Result};
use crate::types::{AnisotropicBox, ComplexVector, ConvexPolytope, Polydisc, Region, Segment};

fn bad(what: &str, s: &str) -> Error {
    Error::InvalidParameter(format!("cannot parse {what} from `{s}`"))
}

pub fn parse_real(s: &str) -> Result<f64> {
    let t = s.trim();
    let v: f64 = t.parse().map_err(|_| bad("a real number", s))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad("a finite real number", s))
    }
}

pub fn parse_complex(s: &str) -> Result<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad("a complex number", s));
    }
    let imag_unit = t.ends_with('i') || t.ends_with('j');
    if !imag_unit {
        return Ok(C64::new(parse_real(&t)?, 0.0));
    }
    let body = &t[..t.len() - 1];
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag_part = |x: &str| -> Result<f64> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => parse_real(x),
        }
    };
    let parsed: Result<C64> = match split {
        Some(k) => parse_real(&body[..k]).and_then(|re| Ok(C64::new(re, imag_part(&body[k..])?))),
        None => imag_part(body).map(|im| C64::new(0.0, im)),
    };
    parsed.map_err(|_| bad("a complex number", s))
}

pub fn parse_real_list(s: &str) -> Result<Vec<f64>> {
    s.split(';').map(parse_real).collect()
}

pub fn parse_complex_list(s: &str) -> Result<Vec<C64>> {
    s.split(';').map(parse_complex).collect()
}

/// Splits `name:k=v,k=v` into the name and an ordered key/value map.
pub fn parse_spec(s: &str) -> Result<(String, BTreeMap<String, String>)> {
    let (name, rest) = match s.split_once(':') {
        Some((n, r)) => (n.trim(), r),
        None => (s.trim(), ""),
    };
    if name.is_empty() {
        return Err(bad("a name", s));
    }
    Ok((name.to_string(), parse_kv(rest)?))
}

/// `k=v,k=v` → map; duplicate keys are rejected.
pub fn parse_kv(s: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| bad("key=value", item))?;
        if out.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(Error::InvalidParameter(format!("duplicate key `{}`", k.trim())));
        }
    }
    Ok(out)
}

pub fn parse_function(s: &str) -> Result<PshFunction> {
    let (name, params) = parse_spec(s)?;
    catalog_lookup(&name, &params)
}

fn take<'a>(m: &'a BTreeMap<String, String>, key: &str, region: &str) -> Result<&'a str> {
    m.get(key).map(String::as_str).ok_or_else(|| Error::InvalidParameter(format!("{region} needs {key}=")))
}

fn only_keys(m: &BTreeMap<String, String>, allowed: &[&str], region: &str) -> Result<()> {
    match m.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::InvalidParameter(format!("unknown key `{k}` for {region}"))),
        None => Ok(()),
    }
}

pub fn parse_region(s: &str) -> Result<Region> {
    let (kind, m) = parse_spec(s)?;
    match kind.as_str() {
        "disc" => {
            only_keys(&m, &["c", "r"], "disc")?;
            let c = m.get("c").map(|x| parse_complex(x)).transpose()?.unwrap_or_default();
            let r = parse_real(take(&m, "r", "disc")?)?;
            if !(r > 0.0) {
                return Err(Error::InvalidParameter("disc radius must be positive".into()));
            }
            Ok(Region::Disc { center: c, radius: r })
        }
        "polydisc" => {
            only_keys(&m, &["c", "r"], "polydisc")?;
            let r = parse_real_list(take(&m, "r", "polydisc")?)?;
            let c = match m.get("c") {
                Some(c) => ComplexVector::new(parse_complex_list(c)?)?,
                None => ComplexVector::zeros(r.len()),
            };
            Ok(Region::Polydisc(Polydisc::new(c, r)?))
        }
        "segment" => {
            only_keys(&m, &["a", "b"], "segment")?;
            let a = ComplexVector::new(parse_complex_list(take(&m, "a", "segment")?)?)?;
            let b = ComplexVector::new(parse_complex_list(take(&m, "b", "segment")?)?)?;
            Ok(Region::Segment(Segment::new(a, b)?))
        }
        "box" => {
            only_keys(&m, &["c", "r", "a"], "box")?;
            let a = parse_real_list(take(&m, "a", "box")?)?;
            let r = parse_real(take(&m, "r", "box")?)?;
            let c = match m.get("c") {
                Some(c) => ComplexVector::new(parse_complex_list(c)?)?,
                None => ComplexVector::zeros(a.len()),
            };
            Ok(Region::AnisotropicBox(AnisotropicBox::new(c, r, a)?))
        }
        "polytope" => {
            only_keys(&m, &["v"], "polytope")?;
            let verts = take(&m, "v", "polytope")?
                .split('|')
                .map(|v| parse_complex_list(v).map(|cs| cs.iter().flat_map(|c| [c.re, c.im]).collect()))
                .collect::<Result<Vec<Vec<f64>>>>()?;
            Ok(Region::ConvexPolytope(ConvexPolytope::new(verts)?))
        }
        other => Err(Error::InvalidParameter(format!("unknown region kind `{other}` (expected disc, polydisc, segment, box, polytope)"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let cases = [
            ("1", C64::new(1.0, 0.0)),
            ("-2.5", C64::new(-2.5, 0.0)),
            ("i", C64::new(0.0, 1.0)),
            ("-i", C64::new(0.0, -1.0)),
            ("2i", C64::new(0.0, 2.0)),
            ("1+2i", C64::new(1.0, 2.0)),
            ("1-i", C64::new(1.0, -1.0)),
            ("1e-3-2.5e+1i", C64::new(1e-3, -25.0)),
            ("-0.27846", C64::new(-0.27846, 0.0)),
        ];
        for (s, want) in cases {
            assert_eq!(parse_complex(s).unwrap(), want, "{s}");
        }
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn region_forms() {
        let r = parse_region("disc:c=0,r=1").unwrap();
        assert_eq!(r, Region::Disc { center: C64::new(0.0, 0.0), radius: 1.0 });
        let p = parse_region("polydisc:c=0;0,r=0.5;0.25").unwrap();
        assert_eq!(p.dim(), 2);
        let s = parse_region("segment:a=-0.27846,b=1").unwrap();
        assert_eq!(s.dim(), 1);
        let b = parse_region("box:r=0.01,a=1;2").unwrap();
        assert_eq!(b.dim(), 2);
        let t = parse_region("polytope:v=0|1|i").unwrap();
        assert_eq!(t.dim(), 1);
        assert!(parse_region("ball:r=1").is_err());
        assert!(parse_region("disc:r=1,extra=2").is_err());
    }

    #[test]
    fn function_forms() {
        let f = parse_function("quadratic:c=1").unwrap();
        assert_eq!(f.dim, 1);
        let g = parse_function("log_poly:roots=1;-1,mult=2;1").unwrap();
        assert_eq!(g.degree(), Some(3));
        assert!(parse_function("log_abs:dim=1,dim=2").is_err());
    }
}
