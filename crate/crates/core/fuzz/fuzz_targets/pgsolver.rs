#![no_main]

use dagsolve::io::{parse_pgsolver, pg_from_game, read_parity_game, write_pgsolver};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = parse_pgsolver(text) else {
        return;
    };
    let printed = write_pgsolver(&file);
    let again = parse_pgsolver(&printed).expect("printed files parse");
    assert_eq!(write_pgsolver(&again), printed);
    if let Ok(parsed) = read_parity_game(text) {
        let canonical = write_pgsolver(&pg_from_game(&parsed.game));
        let reread = read_parity_game(&canonical).expect("canonical files parse");
        assert_eq!(reread.game, parsed.game);
    }
});
