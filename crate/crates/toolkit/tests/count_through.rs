use ittm_core::{run, Program, RunBudget, Verdict, Word};
use ittm_testkit::relation::{code, is_well_order};
use ittm_toolkit::count::count_through;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

fn decide(p: &Program, rel: &[Vec<bool>]) -> bool {
    let out = run(p, &Word::finite(code(rel)), &RunBudget::default(), None).unwrap();
    match out.verdict {
        Verdict::Halted { output, .. } => {
            assert!(output.is_zero() || output == Word::finite(vec![true]), "{output}");
            !output.is_zero()
        }
        v => panic!("{rel:?}: {v:?}"),
    }
}

fn relation(m: usize, bits: u32) -> Vec<Vec<bool>> {
    (0..m).map(|n| (0..m).map(|k| bits >> (n * m + k) & 1 == 1).collect()).collect()
}

#[test]
fn every_relation_on_three_elements() {
    let p = count_through();
    let mut orders = 0;
    for bits in 0..1u32 << 9 {
        let rel = relation(3, bits);
        let want = is_well_order(&rel);
        orders += want as usize;
        assert_eq!(decide(&p, &rel), want, "{rel:?}");
    }
    // the empty order, 3 singletons, 6 two-element and 6 three-element orders
    assert_eq!(orders, 16);
}

#[test]
fn every_order_on_subsets_of_four() {
    let p = count_through();
    let mut count = 0;
    for set in 0..16u32 {
        let elems: Vec<usize> = (0..4).filter(|i| set >> i & 1 == 1).collect();
        let mut perm = elems.clone();
        permutations(&mut perm, 0, &mut |order| {
            let mut rel = vec![vec![false; 4]; 4];
            for (i, &a) in order.iter().enumerate() {
                for &b in &order[i..] {
                    rel[a][b] = true;
                }
            }
            assert!(is_well_order(&rel));
            assert!(decide(&p, &rel), "{order:?}");
            count += 1;
        });
    }
    assert_eq!(count, 1 + 4 + 12 + 24 + 24);
}

fn permutations(v: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
    if i == v.len() {
        f(v);
        return;
    }
    for j in i..v.len() {
        v.swap(i, j);
        permutations(v, i + 1, f);
        v.swap(i, j);
    }
}

#[test]
fn random_relations_on_four_elements() {
    let p = count_through();
    let mut runner = TestRunner::new(Config { cases: 3600, ..Config::default() });
    runner
        .run(&any::<u16>(), |bits| {
            let rel = relation(4, bits as u32);
            prop_assert_eq!(decide(&p, &rel), is_well_order(&rel));
            Ok(())
        })
        .unwrap();
}
