//! `n` lists: `a:b`, `a:b:s`, `a:b:*k`, a single value, or any
//! comma-separated mix of those.

pub fn parse_n_list(spec: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        out.extend(parse_part(part)?);
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(format!("empty n range '{spec}'"));
    }
    if out[0] == 0 {
        return Err("n must be at least 1".into());
    }
    Ok(out)
}

fn num(s: &str) -> Result<usize, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("'{s}' is not a nonnegative integer"))
}

fn parse_part(part: &str) -> Result<Vec<usize>, String> {
    let fields: Vec<&str> = part.split(':').collect();
    let (a, b) = match fields.as_slice() {
        [v] => return Ok(vec![num(v)?]),
        [a, b] | [a, b, _] => (num(a)?, num(b)?),
        _ => return Err(format!("bad range '{part}'")),
    };
    if a > b {
        return Err(format!("range '{part}' is decreasing"));
    }
    match fields.get(2).map(|s| s.trim()) {
        None => Ok((a..=b).collect()),
        Some(step) => match step.strip_prefix('*') {
            Some(k) => geometric(a, b, num(k)?),
            None => {
                let s = num(step)?;
                if s == 0 {
                    return Err("step must be positive".into());
                }
                Ok((a..=b).step_by(s).collect())
            }
        },
    }
}

/// `n_{i+1} = r + k (n_i - r)` with `r = a mod 2`, which keeps the parity of
/// `a`: `51:3201:*2` gives 51, 101, 201, ..., 3201.
fn geometric(a: usize, b: usize, k: usize) -> Result<Vec<usize>, String> {
    if k < 2 {
        return Err("geometric factor must be at least 2".into());
    }
    let r = a % 2;
    if a <= r {
        return Err("geometric range must start above 1".into());
    }
    let mut out = vec![a];
    let mut n = a;
    while let Some(next) = (n - r).checked_mul(k).map(|v| v + r).filter(|&v| v <= b) {
        out.push(next);
        n = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_n_list("3:6").unwrap(), vec![3, 4, 5, 6]);
        assert_eq!(parse_n_list("10:20:5").unwrap(), vec![10, 15, 20]);
        assert_eq!(parse_n_list("7").unwrap(), vec![7]);
        assert_eq!(parse_n_list("9, 3:4,3").unwrap(), vec![3, 4, 9]);
    }

    #[test]
    fn geometric_keeps_parity() {
        let odd = parse_n_list("51:3201:*2").unwrap();
        assert_eq!(odd, vec![51, 101, 201, 401, 801, 1601, 3201]);
        assert_eq!(parse_n_list("51:3201:*4").unwrap(), vec![51, 201, 801, 3201]);
        assert_eq!(parse_n_list("10:100:*3").unwrap(), vec![10, 30, 90]);
    }

    #[test]
    fn rejects() {
        for bad in ["", "5:1", "a:3", "1:2:0", "1:2:3:4", "0:4", "3:9:*1", "1:9:*2"] {
            assert!(parse_n_list(bad).is_err(), "{bad}");
        }
    }
}
