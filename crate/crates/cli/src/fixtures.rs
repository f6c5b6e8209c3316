//! Instances bundled into the binary, addressable by name when no file of
//! that name exists.

pub const STAR: &str = include_str!("../fixtures/fig4_star.toml");
pub const STAR_CHOICES: &str = include_str!("../fixtures/star_choices.toml");

const BUNDLED: [(&str, &str); 2] = [("fig4_star", STAR), ("star_choices", STAR_CHOICES)];

pub fn bundled(name: &str) -> Option<&'static str> {
    let stem = name.strip_suffix(".toml").unwrap_or(name);
    BUNDLED.iter().find(|(n, _)| *n == stem).map(|(_, text)| *text)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}
