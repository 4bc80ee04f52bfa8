use proptest::prelude::*;
use satmod::graph::{standard_type, standard_word};
use satmod::group::analysis::{eliminate, find_dehn_twist_candidates, restrict};
use satmod::seed::FramedMatrix;
use satmod::*;

/// Skew-symmetrizable matrices `ε_ij = s_ij d_j` with `s` skew-symmetric.
fn matrix_strategy(max_n: usize, weighted: bool) -> impl Strategy<Value = ExchangeMatrix> {
    (2..=max_n).prop_flat_map(move |n| {
        let weights = if weighted {
            prop::collection::vec(1i64..=2, n).boxed()
        } else {
            Just(vec![1i64; n]).boxed()
        };
        (prop::collection::vec(-2i64..=2, n * (n - 1) / 2), weights).prop_map(move |(upper, d)| {
            let mut s = vec![vec![0i64; n]; n];
            let mut it = upper.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    let v = it.next().unwrap();
                    s[i][j] = v;
                    s[j][i] = -v;
                }
            }
            let rows = (0..n).map(|i| (0..n).map(|j| s[i][j] * d[j]).collect()).collect();
            ExchangeMatrix::new(rows, Some(d.clone()), &[]).unwrap()
        })
    })
}

fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn word_strategy(n: usize, len: usize) -> impl Strategy<Value = MutationWord> {
    let token = prop_oneof![
        3 => (0..n).prop_map(Token::Mutate),
        1 => perm_strategy(n).prop_map(Token::Perm),
    ];
    prop::collection::vec(token, 0..=len).prop_map(move |t| MutationWord::from_tokens(n, t).unwrap())
}

fn with_word(max_n: usize, weighted: bool, len: usize) -> impl Strategy<Value = (ExchangeMatrix, MutationWord)> {
    matrix_strategy(max_n, weighted).prop_flat_map(move |m| {
        let n = m.n();
        (Just(m), word_strategy(n, len))
    })
}

fn small_entries(m: &ExchangeMatrix) -> bool {
    m.max_abs_entry() <= 1 << 20
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn mutation_is_involutive(m in matrix_strategy(6, true), k in 0usize..6) {
        let k = k % m.n();
        prop_assert_eq!(m.mutate(k).unwrap().mutate(k).unwrap(), m);
    }

    #[test]
    fn mutation_commutes_with_relabeling((m, s) in matrix_strategy(6, true).prop_flat_map(|m| { let n = m.n(); (Just(m), perm_strategy(n)) }), k in 0usize..6) {
        let k = k % m.n();
        let left = m.relabel(&s).unwrap().mutate(s.apply(k)).unwrap();
        let right = m.mutate(k).unwrap().relabel(&s).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn mutation_preserves_skew_symmetrizability((m, w) in with_word(5, true, 8)) {
        let out = match m.apply_word(&w) {
            Ok(out) => out,
            Err(Error::Overflow(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let d = out.weights().to_vec();
        for i in 0..out.n() {
            for j in 0..out.n() {
                prop_assert_eq!(out.get(i, j) * d[i], -out.get(j, i) * d[j]);
            }
        }
        prop_assert!(ExchangeMatrix::new(out.rows(), Some(d), &[]).is_ok());
    }

    #[test]
    fn canonical_form_is_relabeling_invariant((m, s) in matrix_strategy(6, true).prop_flat_map(|m| { let n = m.n(); (Just(m), perm_strategy(n)) })) {
        let a = canonical_form(&m);
        let b = canonical_form(&m.relabel(&s).unwrap());
        prop_assert_eq!(&a.matrix, &b.matrix);
        prop_assert_eq!(&m.relabel(&a.witness).unwrap(), &a.matrix);
        for g in automorphisms(&m) {
            prop_assert_eq!(&m.relabel(&g).unwrap(), &m);
        }
    }

    #[test]
    fn normal_form_has_the_same_action((m, w) in with_word(5, true, 10)) {
        prop_assume!(small_entries(&m));
        let nf = w.normalize();
        prop_assert!(nf.tokens().iter().skip(1).all(|t| matches!(t, Token::Mutate(_))));
        let a = FramedMatrix::new(m.clone()).apply_word(&w);
        let b = FramedMatrix::new(m.clone()).apply_word(&nf);
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(Error::Overflow(_)), Err(Error::Overflow(_))) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a.err(), b.err()),
        }
        prop_assert_eq!(w.inverse().inverse(), w.clone());
        prop_assert!(FramedMatrix::new(m.clone()).apply_word(&w.then_after(&w.inverse())).map(|f| f.c_is_identity() && f.matrix == m).unwrap_or(true));
    }

    #[test]
    fn c_matrices_stay_sign_coherent((m, w) in with_word(5, true, 10)) {
        match FramedMatrix::new(m).apply_word(&w) {
            Ok(f) => prop_assert!(f.incoherent_columns().is_empty()),
            Err(Error::Overflow(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Walks stop once an entry exceeds 3: beyond that, exact variables on
    /// wild quivers grow too fast for a property test.
    #[test]
    fn cluster_variables_are_laurent(
        (m, ks) in prop_oneof![
            matrix_strategy(4, true),
            prop::sample::select(catalog::names()).prop_map(|n| catalog::get(n).unwrap()),
        ].prop_flat_map(|m| { let n = m.n(); (Just(m), prop::collection::vec(0..n, 0..=6)) })
    ) {
        let mut seed = Seed::initial(m);
        for k in ks {
            if seed.matrix().max_abs_entry() > 3 || seed.matrix().is_frozen(k) {
                break;
            }
            seed = seed.mutate_at(k).unwrap();
        }
        for a in &seed.a {
            prop_assert!(a.has_monomial_denominator(), "{:?}", a);
        }
    }

    /// Loops built from standard relations (trivial) and Dehn twist steps
    /// (nontrivial), conjugated by a random path.
    #[test]
    fn triviality_modes_agree(
        name in prop::sample::select(vec!["a2", "markov", "j", "x7", "g2"]),
        path in prop::collection::vec(0usize..7, 0..=3),
        pick in 0usize..64,
        twist_power in 0i64..=1,
    ) {
        let base = catalog::get(name).unwrap();
        let n = base.n();
        let p = MutationWord::mutations(n, &path.iter().map(|k| k % n).collect::<Vec<_>>());
        let here = base.apply_word(&p).unwrap();
        let mut pairs = Vec::new();
        for k in 0..n {
            for l in 0..n {
                if let Some((_, h)) = standard_type(&here, k, l) {
                    pairs.push(standard_word(n, k, l, h));
                }
            }
        }
        let mut inner = pairs.get(pick % pairs.len().max(1)).cloned().unwrap_or_else(|| MutationWord::empty(n));
        let class = MutationClass::enumerate(&here, DEFAULT_CAP).unwrap();
        if let Some(t) = find_dehn_twist_candidates(&class).unwrap().into_iter().find(|d| d.class == 0).and_then(|d| d.twist) {
            inner = inner.then_after(&t.pow(twist_power));
        }
        let lp = p.inverse().then_after(&inner).then_after(&p);
        let cm = is_trivial_loop(&base, &lp, Mode::CMatrix).unwrap().trivial;
        let full = is_trivial_loop(&base, &lp, Mode::Full).unwrap().trivial;
        prop_assert_eq!(cm, full);
    }

    #[test]
    fn elimination_is_a_homomorphism(
        a in prop::collection::vec(prop_oneof![(0usize..3).prop_map(Some), Just(None)], 0..6),
        b in prop::collection::vec(prop_oneof![(0usize..3).prop_map(Some), Just(None)], 0..6),
    ) {
        // Words in the subgroup fixing {0,1,2} of X7: mutations at 0..3 and
        // the relabelings (0 1 2) and (3 5)(4 6).
        let build = |spec: &[Option<usize>]| {
            let mut w = MutationWord::empty(7);
            for (i, s) in spec.iter().enumerate() {
                let t = match s {
                    Some(k) => MutationWord::mutation(7, *k),
                    None if i % 2 == 0 => MutationWord::parse(7, "(0 1 2)").unwrap(),
                    None => MutationWord::parse(7, "(3 5)(4 6)").unwrap(),
                };
                w = t.then_after(&w);
            }
            w
        };
        let (wa, wb) = (build(&a), build(&b));
        let keep = [0, 1, 2];
        let lhs = eliminate(&wa.then_after(&wb), &keep).unwrap();
        let rhs = eliminate(&wa, &keep).unwrap().then_after(&eliminate(&wb, &keep).unwrap());
        prop_assert_eq!(lhs.normalize(), rhs.normalize());
        let x7 = catalog::get("x7").unwrap();
        let j = restrict(&x7, &keep).unwrap();
        let moved = restrict(&x7.apply_word(&wa).unwrap(), &keep).unwrap();
        prop_assert_eq!(j.apply_word(&eliminate(&wa, &keep).unwrap()).unwrap(), moved);
    }
}
