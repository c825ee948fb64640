#![no_main]

use libfuzzer_sys::fuzz_target;
use reread::tasks::{all_tasks, parse_dataset_line};

fuzz_target!(|data: &[u8]| {
    let Some((selector, rest)) = data.split_first() else { return };
    let tasks = all_tasks();
    let task = &tasks[*selector as usize % tasks.len()];
    if let Ok(line) = std::str::from_utf8(rest) {
        if let Ok(item) = parse_dataset_line(line, task) {
            assert!(!item.question.trim().is_empty());
        }
    }
});
