#![no_main]

use libfuzzer_sys::fuzz_target;
use reread::extract::{extract_answer, normalize};
use reread::tasks::AnswerKind;

fuzz_target!(|data: &[u8]| {
    let Some((selector, rest)) = data.split_first() else { return };
    let kind = match selector % 4 {
        0 => AnswerKind::Number,
        1 => AnswerKind::MultipleChoice,
        2 => AnswerKind::YesNo,
        _ => AnswerKind::Date,
    };
    if let Ok(text) = std::str::from_utf8(rest) {
        if let Some(answer) = extract_answer(text, kind) {
            // Extracted answers are canonical: normalizing again is a no-op.
            assert_eq!(normalize(&answer, kind).as_deref(), Some(answer.as_str()));
        }
    }
});
