//! The user guide (`book/` at the repository root), compiled into the
//! crate documentation so that every code block in the chapters runs as
//! a doctest: the book cannot drift out of sync with the library.

macro_rules! chapter {
    ($name:ident, $path:literal) => {
        #[doc = include_str!($path)]
        pub mod $name {}
    };
}

chapter!(introduction, "../../../book/src/introduction.md");
chapter!(symbols, "../../../book/src/symbols.md");
chapter!(determinants, "../../../book/src/determinants.md");
chapter!(condensation, "../../../book/src/condensation.md");
chapter!(biorthogonal, "../../../book/src/biorthogonal.md");
chapter!(riemann_hilbert, "../../../book/src/riemann-hilbert.md");
chapter!(asymptotics, "../../../book/src/asymptotics.md");
chapter!(cli, "../../../book/src/cli.md");
