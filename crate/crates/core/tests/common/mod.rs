use glkr::{parse, Formula};

/// A fixed 50-formula suite: theorems, non-theorems, axiom instances of the
/// almost-sure schemes and assorted formulas over at most three atoms.
pub const FIFTY: [&str; 50] = [
    "[][][]false",
    "[]([]p1 -> p1) -> []p1",
    "[]p1 -> [][]p1",
    "[]p1 -> p1",
    "<>true -> <>(p1 & p2)",
    "<>true -> <>(p1 & ~p2)",
    "<><>true -> <>((p1 & p2) & <>(p1 & p2))",
    "<><>true -> <>((p1 & p2) & <>(p1 & ~p2))",
    "<><>true & <>(<>true & []p1) -> [](<>true -> <>p1)",
    "<><>true & <>(<>true & []p1) & <>(<>true & []p2) -> [](<>true -> <>(p1 & p2))",
    "<><>true & <>([]false & p1) -> <><>p1",
    "<><>true & <>([]false & p1) & <>([]false & p2) -> <>(<>p1 & <>p2)",
    "<>true",
    "<>p1",
    "<>true -> <>p1",
    "p1 | ~p1",
    "(p1 & p2) -> p1",
    "~(p1 & ~p1)",
    "~(<>p1 & []~p1)",
    "<>p1 -> <>(p1 & []~p1)",
    "[](p1 -> p2) -> ([]p1 -> []p2)",
    "[](p1 & p2) -> []p1 & []p2",
    "[]p1 & []p2 -> [](p1 & p2)",
    "<>(p1 | p2) -> <>p1 | <>p2",
    "[]p1 | []p2 -> [](p1 | p2)",
    "[](p1 | p2) -> []p1 | []p2",
    "<>p1 -> []p1",
    "[]false",
    "~[]false",
    "<>[]false",
    "[]<>true -> []false",
    "[][]false -> [][][]false",
    "<><>true",
    "<><><>true",
    "[]<>true",
    "[]([]p1 -> p1)",
    "[]p1 -> []([]p1 -> p1)",
    "p1 -> []<>p1",
    "<>[]p1 -> []<>p1",
    "[](p1 -> <>p1) -> []~p1",
    "<>true -> <>~p1",
    "<>true -> <>(p1 & p2 & p3)",
    "<><>true -> <>(p1 & <>p2)",
    "[](p1 -> p2) & [](p2 -> p1) -> ([]p1 -> []p2)",
    "~~p1 -> p1",
    "p1 -> (p2 -> p1)",
    "(p1 -> (p2 -> p3)) -> ((p1 -> p2) -> (p1 -> p3))",
    "<>(p1 & p2) -> <>p1",
    "[][]p1 -> []p1",
    "<>p3 & []p2 -> <>(p2 & p3)",
];

pub fn fifty() -> Vec<Formula> {
    FIFTY
        .iter()
        .map(|s| parse(s).unwrap_or_else(|e| panic!("{s}: {e}")))
        .collect()
}
