//! Single-rule mutations of the encoded parking space booking model.

use std::path::{Path, PathBuf};

use lemma2jolie::diagnostic::RuleId;
use lemma2jolie::encoder::encode_model;
use lemma2jolie::jolie::{render, reparse_subset, JolieDocument};
use lemma2jolie::lemma::parse_file;

pub fn booking_model_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/BookingManagement.data")
}

pub fn invalid_validator_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/InvalidValidator.data")
}

/// Rendered encoding of the booking model.
pub fn base_text() -> String {
    let (model, diags) = parse_file(&booking_model_path());
    assert!(diags.is_empty(), "{diags:?}");
    render(&encode_model(&model.unwrap()).unwrap().document)
}

/// (rule, from, to): replacing `from` by `to` in the base text must trigger
/// exactly `rule`.
pub const MUTATIONS: &[(RuleId, &str, &str)] = &[
    (
        RuleId::FactoryInputContainsProduct,
        "type create_type {\n    timeSlot: TimeSlot\n",
        "type create_type {\n    timeSlot: TimeSlot\n    previous: ParkingSpaceBooking\n",
    ),
    (
        RuleId::FactoryResponseNotType,
        "create(create_type)(ParkingSpaceBooking)",
        "create(create_type)(string)",
    ),
    (
        RuleId::ValidatorResponseNotBool,
        "isExpired(isExpired_type)(bool)",
        "isExpired(isExpired_type)(int)",
    ),
    (
        RuleId::ValidatorMissingSpecification,
        "///@specification\ntype isExpired_type",
        "type isExpired_type",
    ),
    (
        RuleId::ValidatorArity,
        "    booking: ParkingSpaceBooking\n}\n\ninterface BookingExpiration_interface",
        "    booking: ParkingSpaceBooking\n    other: ParkingSpaceBooking\n}\n\ninterface BookingExpiration_interface",
    ),
    (
        RuleId::CrossContextLeaf,
        "    description: undefined\n",
        "    description: undefined\n    lastBooking: ParkingSpaceBooking\n",
    ),
    (
        RuleId::CrossContextOperation,
        "isAvailable(ParkingSpace)(bool)",
        "isAvailable(ParkingSpace)(ParkingSpaceBooking)",
    ),
    (
        RuleId::AggregateWithoutEntity,
        "///@aggregate\n///@entity\ntype ParkingSpaceBooking",
        "///@aggregate\ntype ParkingSpaceBooking",
    ),
    (
        RuleId::PartNotEntityOrVo,
        "///@valueObject\ntype TimeSlot {",
        "type TimeSlot {",
    ),
];

pub fn mutant(base: &str, from: &str, to: &str) -> JolieDocument {
    assert_eq!(
        base.matches(from).count(),
        1,
        "mutation site `{from}` must be unique"
    );
    let text = base.replacen(from, to, 1);
    let (doc, diags) = reparse_subset(&text);
    assert!(diags.is_empty(), "{diags:?}");
    doc.unwrap()
}
