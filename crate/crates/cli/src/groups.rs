use clap::ValueEnum;
use serde_json::{json, Value};

use nilhoro::facet::Abelianized;
use nilhoro::{Ex1Element, Example1, H3Element, Heisenberg, Result, ZdElement, ZdGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupId {
    H3,
    Example1,
    Z1,
    Z2,
    Z3,
}

/// What the commands need beyond [`Group`]: text input, JSON and CSV output.
pub trait CliGroup: Abelianized {
    fn parse(&self, s: &str) -> Result<Self::Element>;
    fn to_json(&self, g: &Self::Element) -> Value;
    fn csv_header(&self) -> Vec<String>;
    fn csv_fields(&self, g: &Self::Element) -> Vec<String>;
}

impl CliGroup for Heisenberg {
    fn parse(&self, s: &str) -> Result<H3Element> {
        s.parse()
    }

    fn to_json(&self, g: &H3Element) -> Value {
        serde_json::to_value(g).expect("plain struct")
    }

    fn csv_header(&self) -> Vec<String> {
        ["x", "y", "z"].map(String::from).to_vec()
    }

    fn csv_fields(&self, g: &H3Element) -> Vec<String> {
        vec![g.x.to_string(), g.y.to_string(), g.z.to_string()]
    }
}

impl CliGroup for Example1 {
    fn parse(&self, s: &str) -> Result<Ex1Element> {
        s.parse()
    }

    fn to_json(&self, g: &Ex1Element) -> Value {
        serde_json::to_value(g).expect("plain struct")
    }

    fn csv_header(&self) -> Vec<String> {
        ["i", "j", "k", "l", "m"].map(String::from).to_vec()
    }

    fn csv_fields(&self, g: &Ex1Element) -> Vec<String> {
        [&g.i, &g.j, &g.k, &g.l, &g.m].iter().map(|v| v.to_string()).collect()
    }
}

impl CliGroup for ZdGroup {
    fn parse(&self, s: &str) -> Result<ZdElement> {
        self.parse_element(s)
    }

    fn to_json(&self, g: &ZdElement) -> Value {
        json!(g.0.iter().map(big_json).collect::<Vec<_>>())
    }

    fn csv_header(&self) -> Vec<String> {
        (0..self.dim()).map(|i| format!("x{i}")).collect()
    }

    fn csv_fields(&self, g: &ZdElement) -> Vec<String> {
        g.0.iter().map(|v| v.to_string()).collect()
    }
}

/// Integers that fit in `i64` as JSON numbers, others as strings.
pub fn big_json(v: &num_bigint::BigInt) -> Value {
    use num_traits::ToPrimitive;
    match v.to_i64() {
        Some(small) => json!(small),
        None => json!(v.to_string()),
    }
}

/// Runs `$body` with `$g` bound to the concrete group for `$id`.
#[macro_export]
macro_rules! with_group {
    ($id:expr, |$g:ident| $body:expr) => {
        match $id {
            $crate::groups::GroupId::H3 => {
                let $g = nilhoro::Heisenberg::new();
                $body
            }
            $crate::groups::GroupId::Example1 => {
                let $g = nilhoro::Example1::new();
                $body
            }
            $crate::groups::GroupId::Z1 => {
                let $g = nilhoro::ZdGroup::standard(1).expect("standard generators");
                $body
            }
            $crate::groups::GroupId::Z2 => {
                let $g = nilhoro::ZdGroup::standard(2).expect("standard generators");
                $body
            }
            $crate::groups::GroupId::Z3 => {
                let $g = nilhoro::ZdGroup::standard(3).expect("standard generators");
                $body
            }
        }
    };
}

pub fn group_name(id: GroupId) -> &'static str {
    match id {
        GroupId::H3 => "h3",
        GroupId::Example1 => "example1",
        GroupId::Z1 => "z1",
        GroupId::Z2 => "z2",
        GroupId::Z3 => "z3",
    }
}
