//! Isomorphism classes of small models and the morphisms between two of them.

use gaft::engine::{enumerate_homs, enumerate_size, EnumBudget};
use gaft::kinds;

fn main() -> gaft::Result<()> {
    for kind in [kinds::semilattice(), kinds::monoid(), kinds::group()] {
        let counts = (1..=5)
            .map(|n| enumerate_size(&kind, n, EnumBudget::default()).map(|v| v.len().to_string()))
            .collect::<gaft::Result<Vec<_>>>()?;
        println!("{:<12} sizes 1..5: {}", kind.name(), counts.join(", "));
    }

    let three = enumerate_size(&kinds::semilattice(), 3, EnumBudget::default())?;
    for a in three.iter() {
        for b in three.iter() {
            println!(
                "{} -> {}: {} morphisms",
                a.to_json()["tables"]["join"],
                b.to_json()["tables"]["join"],
                enumerate_homs(a, b)?.len()
            );
        }
    }
    Ok(())
}
