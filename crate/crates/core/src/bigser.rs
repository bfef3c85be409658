//! Serde helpers writing big integers as JSON numbers when they fit in a
//! `u64` and as decimal strings otherwise.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serializer};

#[derive(Deserialize)]
#[serde(untagged)]
enum Repr {
    Num(u64),
    Text(String),
}

fn from_repr<E: serde::de::Error>(r: Repr) -> Result<BigUint, E> {
    match r {
        Repr::Num(n) => Ok(BigUint::from(n)),
        Repr::Text(s) => s.parse().map_err(E::custom),
    }
}

fn write<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(n) => s.serialize_u64(n),
        None => s.serialize_str(&v.to_string()),
    }
}

pub mod one {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        write(v, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        from_repr(Repr::deserialize(d)?)
    }
}

pub mod opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => write(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        Option::<Repr>::deserialize(d)?.map(from_repr).transpose()
    }
}
