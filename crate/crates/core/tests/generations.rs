use std::collections::BTreeSet;

use sigdev_core::freeprob::{
    catalan, dyck_from_partition, dyck_words, generation_labels, generation_lemma_check, insert_generation,
    nc2_enumerate, partition_from_dyck, DyckWord,
};

#[test]
fn lemma_holds_up_to_length_ten() {
    assert!(generation_lemma_check(10).unwrap());
}

#[test]
fn generation_sets_partition_all_words() {
    // every word of length 2k lies in exactly one G(d) with d one pair shorter
    // or more, so the union over all generations recovers all Dyck words
    let mut seen = BTreeSet::new();
    let mut frontier = BTreeSet::from([DyckWord::empty()]);
    while !frontier.is_empty() {
        let mut next = BTreeSet::new();
        for d in &frontier {
            for w in insert_generation(d).into_iter().filter(|w| w.len() <= 8) {
                assert_eq!(generation_labels(&w).word_generation, generation_labels(d).word_generation + 1);
                next.insert(w);
            }
        }
        seen.extend(next.iter().cloned());
        frontier = next;
    }
    for n in (2..=8).step_by(2) {
        for d in dyck_words(n).unwrap() {
            assert!(seen.contains(&d), "{d} not generated");
        }
    }
}

#[test]
fn counts_and_bijection() {
    for k in 0..=6u32 {
        let parts = nc2_enumerate(2 * k as usize).unwrap();
        assert_eq!(parts.len() as u64, catalan(k).unwrap());
        for p in parts {
            assert_eq!(partition_from_dyck(&dyck_from_partition(&p)), p);
        }
    }
}
