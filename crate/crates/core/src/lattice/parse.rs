use serde::Deserialize;

use super::GramLattice;
use crate::error::{Error, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockList {
    blocks: Vec<String>,
}

fn parse_block(name: &str) -> Result<GramLattice> {
    let name = name.trim();
    match name {
        "U" => return Ok(GramLattice::hyperbolic_u()),
        "E8(-1)" => return Ok(GramLattice::e8_minus()),
        _ => {}
    }
    let inner = name
        .strip_prefix("Z(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("unknown lattice block `{name}`")))?;
    let n: i64 = inner
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer in `{name}`")))?;
    GramLattice::rank_one(n)
}

/// Parses a lattice description: either a JSON object
/// `{"blocks": ["U", "E8(-1)", "Z(-4)"]}` or the same blocks joined by `⊕`
/// (or `,`), e.g. `U ⊕ U ⊕ Z(-4)`.
pub fn parse_description(desc: &str) -> Result<GramLattice> {
    let desc = desc.trim();
    let names: Vec<String> = if desc.starts_with('{') {
        let list: BlockList =
            serde_json::from_str(desc).map_err(|e| Error::Parse(format!("lattice JSON: {e}")))?;
        list.blocks
    } else {
        desc.split(['⊕', ','])
            .map(str::to_owned)
            .filter(|s| !s.trim().is_empty())
            .collect()
    };
    let blocks = names
        .iter()
        .map(|n| parse_block(n))
        .collect::<Result<Vec<_>>>()?;
    GramLattice::direct_sum_all(&blocks)
        .ok_or_else(|| Error::Parse("empty lattice description".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn json_and_text_agree() {
        let a = parse_description(r#"{"blocks": ["U","U","E8(-1)","Z(-4)"]}"#).unwrap();
        let b = parse_description("U ⊕ U ⊕ E8(-1) ⊕ Z(-4)").unwrap();
        assert_eq!(a.gram(), b.gram());
        assert_eq!(a.rank(), 13);
        assert_eq!(a.determinant(), BigInt::from(-4));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_description("Q(3)").is_err());
        assert!(parse_description("Z(3)").is_err());
        assert!(parse_description("").is_err());
        assert!(parse_description(r#"{"blocks": ["U"], "extra": 1}"#).is_err());
    }
}
