#![no_main]

use charsum::SumResult;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok((r, p)) = SumResult::from_json(data) else { return };
    let (again, q) = SumResult::from_json(&r.to_json(p)).expect("re-encoded result must decode");
    assert_eq!(p, q);
    assert_eq!(again.as_exact(), r.as_exact());
});
