#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = satiab::expcli::read_table(data, "fuzz");
});
