use proptest::prelude::*;
use trispace::spacefile::{parse, render};
use trispace::survey::gen_random;
use trispace::{Error, FieldCtx};

proptest! {
    #[test]
    fn render_parse_round_trip(seed in any::<u64>(), qi in 0..4usize, n in 1..4usize, d in 0..6usize) {
        let f = FieldCtx::of_order([3, 5, 9, 25][qi]).unwrap();
        let s = gen_random(n, &f, d.min(n * n), seed).unwrap();
        let text = render(&s);
        prop_assert_eq!(parse(&text, true).unwrap(), s.clone());
        // rendering is canonical
        prop_assert_eq!(render(&parse(&text, false).unwrap()), text);
    }
}

#[test]
fn error_positions() {
    let text = "field GF(5)\nn 2\ndim 1\nmat 1 2 3 x\n";
    match parse(text, false) {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (4, 11)),
        other => panic!("{other:?}"),
    }
}
