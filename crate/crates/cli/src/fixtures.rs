//! The bundled constructions, compiled into the binary.

pub const IDS: [&str; 6] = ["11_2", "11_25", "11_59", "11_27", "11_18", "11_53"];

pub fn source(id: &str) -> Option<&'static str> {
    Some(match id {
        "11_2" => include_str!("../../../fixtures/11_2.cfg"),
        "11_25" => include_str!("../../../fixtures/11_25.cfg"),
        "11_59" => include_str!("../../../fixtures/11_59.cfg"),
        "11_27" => include_str!("../../../fixtures/11_27.cfg"),
        "11_18" => include_str!("../../../fixtures/11_18.cfg"),
        "11_53" => include_str!("../../../fixtures/11_53.cfg"),
        _ => return None,
    })
}
