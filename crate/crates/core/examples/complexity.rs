//! Operation counts and the smallest key order for a brute-force target.

use sebq::analysis::{opcount_report, secure_order_report};

fn main() -> sebq::Result<()> {
    let r = opcount_report(4, 4, 16)?;
    println!("encrypt {} ops, round trip {} ops", r.encrypt_ops, r.total_ops);
    println!("{}", r.note);
    for bits in [80, 128, 192, 256] {
        let s = secure_order_report(bits, 380)?;
        println!("{bits:>3} bits: exact counts {:>2}, lower bound {:>2}", s.exact_table, s.lower_bound);
    }
    Ok(())
}
