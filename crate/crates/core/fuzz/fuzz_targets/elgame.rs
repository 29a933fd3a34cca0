#![no_main]

use dagsolve::io::{el_from_game, parse_elgame, read_el_game, write_elgame};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = parse_elgame(text) else {
        return;
    };
    let printed = write_elgame(&file);
    let again = parse_elgame(&printed).expect("printed files parse");
    assert_eq!(write_elgame(&again), printed);
    if let Ok(game) = read_el_game(text) {
        let canonical = write_elgame(&el_from_game(&game));
        assert_eq!(read_el_game(&canonical).expect("canonical files parse"), game);
    }
});
