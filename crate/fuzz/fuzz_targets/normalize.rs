#![no_main]

use libfuzzer_sys::fuzz_target;
use reread::extract::normalize;
use reread::tasks::AnswerKind;

fuzz_target!(|data: &[u8]| {
    let Some((selector, rest)) = data.split_first() else { return };
    let kind = match selector % 4 {
        0 => AnswerKind::Number,
        1 => AnswerKind::MultipleChoice,
        2 => AnswerKind::YesNo,
        _ => AnswerKind::Date,
    };
    if let Ok(raw) = std::str::from_utf8(rest) {
        if let Some(canonical) = normalize(raw, kind) {
            assert_eq!(normalize(&canonical, kind).as_deref(), Some(canonical.as_str()));
        }
    }
});
