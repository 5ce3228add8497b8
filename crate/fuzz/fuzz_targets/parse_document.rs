#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Must never panic on arbitrary bytes; errors are fine.
    let _ = perigid::doc::parse_and_validate(data);
});
