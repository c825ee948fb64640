#![no_main]

use libfuzzer_sys::fuzz_target;
use reread::prompts::StrategyConfig;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(config) = text.parse::<StrategyConfig>() {
            let canonical = config.to_string();
            let reparsed: StrategyConfig = canonical.parse().unwrap();
            assert_eq!(config, reparsed);
        }
    }
});
