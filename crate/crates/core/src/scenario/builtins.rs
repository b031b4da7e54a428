//! Scenario documents shipped with the crate.

/// `(name, document)` pairs, in listing order.
pub const BUILTINS: &[(&str, &str)] = &[
    ("ensemble-A-pure", include_str!("../../scenarios/ensemble-A-pure.toml")),
    ("ensemble-B-pure", include_str!("../../scenarios/ensemble-B-pure.toml")),
    ("balanced-mixture-x", include_str!("../../scenarios/balanced-mixture-x.toml")),
    ("balanced-mixture-z", include_str!("../../scenarios/balanced-mixture-z.toml")),
    ("maximally-mixed", include_str!("../../scenarios/maximally-mixed.toml")),
    ("fh-single-spin-mixed", include_str!("../../scenarios/fh-single-spin-mixed.toml")),
    ("v-state", include_str!("../../scenarios/v-state.toml")),
    ("fh-comparison", include_str!("../../scenarios/fh-comparison.toml")),
    ("stern-gerlach-x", include_str!("../../scenarios/stern-gerlach-x.toml")),
];

pub fn builtin(name: &str) -> Option<&'static str> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTINS.iter().map(|(n, _)| *n)
}
