//! Fixes the conventions by measurement and prints the record as JSON.

use hkcontact::calibration::calibrate;
use hkcontact::numerics::DEFAULT_FD_STEP;

fn main() {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1);
    let (_, record) = calibrate(n, 42, DEFAULT_FD_STEP).expect("calibration");
    println!("{}", serde_json::to_string_pretty(&record).expect("record serializes"));
}
