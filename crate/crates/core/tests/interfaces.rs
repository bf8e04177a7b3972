use mpdist::experiments::{ExperimentConfig, SampleMode};
use mpdist::formats::{pack, read_text_streams, unpack};
use mpdist::types::{encode_state, parse_rational};
use mpdist::{BitStream, BitVector, Dichotomy, Error, MPSystem, SeparationWitness};

#[test]
fn system_json_round_trip() {
    let text = r#"{"n":2,"units":[{"weights":["1/2","-3"],"theta":"0"},{"weights":["0","1"],"theta":"7/3"}]}"#;
    let s = MPSystem::from_json(text).unwrap();
    assert_eq!(s.arity(), 2);
    assert_eq!(s.units()[1].theta(), &parse_rational("7/3").unwrap());
    assert_eq!(MPSystem::from_json(&s.to_json()).unwrap(), s);
}

#[test]
fn system_json_errors_point_at_the_field() {
    let bad = r#"{"n":2,"units":[{"weights":["1","0"],"theta":"0"},{"weights":["0","x"],"theta":"0"}]}"#;
    let msg = MPSystem::from_json(bad).unwrap_err().to_string();
    assert!(msg.contains("units[1].weights[1]"), "{msg}");

    let wrong_arity = r#"{"n":2,"units":[{"weights":["1"],"theta":"0"},{"weights":["0","1"],"theta":"0"}]}"#;
    assert!(MPSystem::from_json(wrong_arity).is_err());

    let zero_den = r#"{"n":1,"units":[{"weights":["1/0"],"theta":"0"}]}"#;
    assert!(MPSystem::from_json(zero_den).is_err());

    let syntax = "{\"n\":1,\n\"units\":[}";
    assert!(MPSystem::from_json(syntax).unwrap_err().to_string().contains("line 2"));
}

#[test]
fn dichotomy_json() {
    let d: Dichotomy = serde_json::from_str(r#"{"n":3,"positive":["000","010","000"],"negative":["110"]}"#).unwrap();
    assert_eq!(d.positive().len(), 2);
    let back: serde_json::Value = serde_json::to_value(&d).unwrap();
    assert_eq!(back["positive"], serde_json::json!(["000", "010"]));
    assert!(serde_json::from_str::<Dichotomy>(r#"{"n":2,"positive":["000"],"negative":[]}"#).is_err());
}

#[test]
fn witness_json() {
    let w: SeparationWitness = serde_json::from_str(r#"{"coefficients":["1","-1/2","1/3"]}"#).unwrap();
    assert_eq!(w.dimension(), 2);
    assert_eq!(w.threshold(), &parse_rational("1/3").unwrap());
    let v = serde_json::to_value(&w).unwrap();
    assert_eq!(v["coefficients"][1], "-1/2");
    assert!(serde_json::from_str::<SeparationWitness>(r#"{"coefficients":["1"]}"#).is_err());
}

#[test]
fn state_encoding_is_lsb_first() {
    assert_eq!(encode_state(5, 3).unwrap().to_string(), "101");
    assert_eq!(encode_state(1, 4).unwrap().to_string(), "1000");
    assert!(encode_state(8, 3).is_err());
}

#[test]
fn text_and_packed_streams() {
    let streams = read_text_streams("0101\n\n 11 \n".as_bytes()).unwrap();
    assert_eq!(streams.len(), 2);
    assert_eq!(streams[1].to_string(), "11");
    let err = read_text_streams("01\n012\n".as_bytes()).unwrap_err().to_string();
    assert!(err.contains("line 2"), "{err}");

    let y: BitStream = "1011001".parse().unwrap();
    let bytes = pack(&y);
    assert_eq!(&bytes[..8], &7u64.to_le_bytes());
    assert_eq!(bytes[8], 0b0100_1101);
    assert_eq!(unpack(&bytes).unwrap(), y);

    let mut dirty = bytes.clone();
    dirty[8] |= 0x80;
    assert!(unpack(&dirty).is_err());
    assert!(unpack(&bytes[..8]).is_err());
}

#[test]
fn config_defaults_and_derived_sizes() {
    let c = ExperimentConfig::from_json(r#"{"n":4,"trials":10,"rng_seed":1}"#).unwrap();
    assert_eq!(c.weight_bound, 8);
    assert_eq!(c.mode, SampleMode::Single);
    assert_eq!(c.stream_length().unwrap(), 40);
    assert_eq!(c.sample_count().unwrap(), 10);
    let c = ExperimentConfig::from_json(r#"{"n":4,"trials":10,"rng_seed":1,"epsilon":"1/4","mode":"multi"}"#).unwrap();
    assert_eq!(c.stream_length().unwrap(), 36);
    assert_eq!(c.sample_count().unwrap(), 9);
}

#[test]
fn bitvector_rejects_garbage() {
    assert!("".parse::<BitVector>().is_err());
    assert!("10a".parse::<BitVector>().is_err());
    assert!(matches!(BitVector::from_bits(&[0, 2]), Err(Error::Domain(_))));
}
