use super::{FiniteGroup, GroupError};

pub const BUILTIN_NAMES: &[&str] = &["z2", "z4", "z2xz2", "s3", "d4", "q8", "heis3", "d8_16"];

/// Looks up one of the bundled example groups.
pub fn builtin(name: &str) -> Result<FiniteGroup, GroupError> {
    let group = match name {
        "z2" => cyclic(2, &["e", "t"]),
        "z4" => cyclic(4, &["e", "a", "a2", "a3"]),
        "z2xz2" => klein(),
        "s3" => s3(),
        "d4" => dihedral(4),
        "q8" => quaternion(),
        "heis3" => heisenberg(3),
        "d8_16" => dihedral(8),
        _ => return Err(GroupError::UnknownName(name.to_string())),
    }?;
    Ok(group.with_name(name))
}

fn from_fn(
    labels: Vec<String>,
    mul: impl Fn(usize, usize) -> usize,
) -> Result<FiniteGroup, GroupError> {
    let k = labels.len();
    let table = (0..k)
        .map(|a| (0..k).map(|b| mul(a, b)).collect())
        .collect();
    FiniteGroup::from_table(labels, table)
}

fn owned(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn cyclic(n: usize, names: &[&str]) -> Result<FiniteGroup, GroupError> {
    from_fn(owned(names), |a, b| (a + b) % n)
}

fn klein() -> Result<FiniteGroup, GroupError> {
    from_fn(owned(&["e", "a", "b", "ab"]), |a, b| a ^ b)
}

/// Elements `r^a s^b` at index `a + n*b`, with `s r s = r^-1`.
fn dihedral(n: usize) -> Result<FiniteGroup, GroupError> {
    let labels = (0..2 * n)
        .map(|i| {
            let (a, b) = (i % n, i / n);
            let rot = match a {
                0 => String::new(),
                1 => "r".to_string(),
                _ => format!("r{a}"),
            };
            match (rot.is_empty(), b) {
                (true, 0) => "e".to_string(),
                (_, 0) => rot,
                (_, _) => format!("{rot}s"),
            }
        })
        .collect();
    from_fn(labels, |x, y| {
        let (a, b) = (x % n, x / n);
        let (c, d) = (y % n, y / n);
        let rot = if b == 0 { a + c } else { a + n - c } % n;
        rot + n * ((b + d) % 2)
    })
}

/// Permutations of {0,1,2} generated by the 3-cycle `r` and a transposition
/// `s`, laid out like the dihedral group of order 6.
fn s3() -> Result<FiniteGroup, GroupError> {
    from_fn(owned(&["e", "r", "r2", "s", "rs", "r2s"]), |x, y| {
        let (a, b) = (x % 3, x / 3);
        let (c, d) = (y % 3, y / 3);
        let rot = if b == 0 { a + c } else { a + 3 - c } % 3;
        rot + 3 * ((b + d) % 2)
    })
}

/// Unit quaternions in the order 1, -1, i, -i, j, -j, k, -k.
fn quaternion() -> Result<FiniteGroup, GroupError> {
    // (basis, sign) with basis 0..4 = 1, i, j, k.
    fn split(x: usize) -> (usize, bool) {
        (x / 2, x % 2 == 1)
    }
    fn basis_mul(p: usize, q: usize) -> (usize, bool) {
        match (p, q) {
            (0, q) => (q, false),
            (p, 0) => (p, false),
            (p, q) if p == q => (0, true),
            (1, 2) => (3, false),
            (2, 3) => (1, false),
            (3, 1) => (2, false),
            (2, 1) => (3, true),
            (3, 2) => (1, true),
            (1, 3) => (2, true),
            _ => unreachable!(),
        }
    }
    from_fn(
        owned(&["1", "-1", "i", "-i", "j", "-j", "k", "-k"]),
        |x, y| {
            let (p, sp) = split(x);
            let (q, sq) = split(y);
            let (r, sr) = basis_mul(p, q);
            2 * r + usize::from(sp ^ sq ^ sr)
        },
    )
}

/// Triples `(a, b, c)` over Z/p with `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')`.
fn heisenberg(p: usize) -> Result<FiniteGroup, GroupError> {
    let idx = |a: usize, b: usize, c: usize| (a * p + b) * p + c;
    let labels = (0..p * p * p)
        .map(|i| format!("{}{}{}", i / (p * p), (i / p) % p, i % p))
        .collect();
    from_fn(labels, |x, y| {
        let (a, b, c) = (x / (p * p), (x / p) % p, x % p);
        let (a2, b2, c2) = (y / (p * p), (y / p) % p, y % p);
        idx((a + a2) % p, (b + b2) % p, (c + c2 + a * b2) % p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_orders() {
        let expect = [
            ("z2", 2),
            ("z4", 4),
            ("z2xz2", 4),
            ("s3", 6),
            ("d4", 8),
            ("q8", 8),
            ("heis3", 27),
            ("d8_16", 16),
        ];
        for (name, order) in expect {
            let g = builtin(name).unwrap();
            assert_eq!(g.order(), order, "{name}");
            assert_eq!(g.name(), name);
        }
        assert_eq!(
            builtin("foo").unwrap_err(),
            GroupError::UnknownName("foo".into())
        );
    }

    #[test]
    fn dihedral_labels() {
        let d4 = builtin("d4").unwrap();
        assert_eq!(d4.labels(), ["e", "r", "r2", "r3", "s", "rs", "r2s", "r3s"]);
        let rs = d4.index_of("rs").unwrap();
        assert_eq!(
            d4.mul(d4.index_of("r").unwrap(), d4.index_of("s").unwrap()),
            rs
        );
    }

    #[test]
    fn abelian_flags() {
        for (name, abelian) in [
            ("z2", true),
            ("z4", true),
            ("z2xz2", true),
            ("q8", false),
            ("heis3", false),
        ] {
            assert_eq!(builtin(name).unwrap().is_abelian(), abelian, "{name}");
        }
    }
}
