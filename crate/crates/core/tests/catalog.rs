use num_rational::BigRational;

use pinwheel::fractile::{catalog, continuation_classes, triangle_patch};
use pinwheel::io::{load_catalog, save_catalog};
use pinwheel::spectral::catalog_spectrum;
use pinwheel::ProtoId;

#[test]
fn catalog_round_trips_through_json() {
    let cat = catalog();
    assert_eq!(&load_catalog(&save_catalog(cat)).unwrap(), cat);
}

#[test]
fn chiral_frequencies_split_evenly() {
    let cat = catalog();
    let plain = catalog_spectrum(cat, false).unwrap();
    let chiral = catalog_spectrum(cat, true).unwrap();
    let two = BigRational::from_integer(2.into());
    for (class, f) in cat.classes.iter().zip(&plain.exact_frequencies) {
        let parts: Vec<&BigRational> = class.chiral.iter().map(|&c| &chiral.exact_frequencies[c - 1]).collect();
        match parts.as_slice() {
            [one] => assert_eq!(*one, f),
            [a, b] => {
                assert_eq!(*a, *b);
                assert_eq!(&(*a * &two), f);
            }
            _ => panic!("class {} has {} chiral forms", class.index, parts.len()),
        }
    }
}

#[test]
fn mirror_symmetric_classes_have_one_chiral_form() {
    for class in &catalog().classes {
        assert_eq!(class.mirror_symmetric, class.chiral.len() == 1, "class {}", class.index);
    }
}

#[test]
fn continuation_faces_are_catalog_classes_five_times_larger() {
    let tris = triangle_patch(ProtoId::Kite, 3);
    let counts = continuation_classes(catalog(), &tris).unwrap();
    assert_eq!(counts.values().sum::<usize>(), 24);
    assert_eq!(counts.keys().copied().collect::<Vec<_>>(), vec![1, 4, 5, 6, 7, 8, 9, 11]);
}
