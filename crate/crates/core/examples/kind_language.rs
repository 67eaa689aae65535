//! Declaring a kind in the text format, printing it back, and reading a
//! positioned diagnostic.

use gaft::dsl::{parse_kind, print_kind};

const BANDS: &str = "
# Idempotent semigroups.
kind Band {
  op mul/2;
  vars x y z;
  eq mul(mul(x, y), z) = mul(x, mul(y, z));
  eq mul(x, x) = x;
}";

fn main() {
    let band = parse_kind(BANDS).expect("valid kind");
    println!("{}", print_kind(&band));
    match parse_kind("kind Oops {\n  op mul/2;\n  vars x;\n  eq mul(x) = x;\n}") {
        Ok(_) => println!("unexpectedly parsed"),
        Err(d) => println!("diagnostic at {}:{}: {} ({})", d.line, d.col, d.message, d.kind),
    }
}
