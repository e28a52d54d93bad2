use slitmap::circular_aut::Classification;

pub struct Fixture {
    pub name: &'static str,
    pub json: &'static str,
    /// Expected automorphism class for circular fixtures with a finite group.
    pub expected: Option<Classification>,
}

pub const DOMAINS: &[Fixture] = &[
    Fixture {
        name: "annulus",
        json: include_str!("../fixtures/annulus.json"),
        expected: None,
    },
    Fixture {
        name: "t_domain",
        json: include_str!("../fixtures/t_domain.json"),
        expected: Some(Classification::TauOnly),
    },
    Fixture {
        name: "t_perturbed",
        json: include_str!("../fixtures/t_perturbed.json"),
        expected: Some(Classification::Rigid),
    },
    Fixture {
        name: "six_element",
        json: include_str!("../fixtures/six_element.json"),
        expected: Some(Classification::SixElement),
    },
    Fixture {
        name: "four_connected",
        json: include_str!("../fixtures/four_connected.json"),
        expected: Some(Classification::TauOnly),
    },
    Fixture {
        name: "ellipse",
        json: include_str!("../fixtures/ellipse.json"),
        expected: None,
    },
];

pub const ANNULUS_FAMILY: &str = include_str!("../fixtures/annulus_family.json");
