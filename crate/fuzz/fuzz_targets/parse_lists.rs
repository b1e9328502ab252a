#![no_main]

use charsum::parse::{format_tuple, parse_int_list, parse_sign_list};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(xs) = parse_int_list(data) {
        assert!(!xs.is_empty());
        assert_eq!(parse_int_list(&format_tuple(&xs).replace(';', ",")).ok(), Some(xs));
    }
    if let Ok(bits) = parse_sign_list(data) {
        assert!(bits.iter().all(|&b| b <= 1));
    }
});
