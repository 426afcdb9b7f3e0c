//! Named self-checks grouped into suites, shared by the CLI and the
//! acceptance harness.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::Poly;
use crate::apps::{
    check_contravariant_det, check_varchenko_det, check_varchenko_det_modular, check_varchenko_exponents,
    contravariant_closed_matrix, contravariant_matches_gram, contravariant_matrix, varchenko_matches_gram,
    BilinearData,
};
use crate::det::{
    brute_det, det_divides, det_formula, det_one_param, grid_certificate, positivity_check,
    random_hermitian_point, similarity,
};
use crate::fock::{check_ccr, inner_product, Weight, Word};
use crate::gram::{
    build, build_degenerate, build_generic, embed_degenerate, factor_a_m, factor_c, factor_c_unimodal, factor_d,
    mult_factor, q_sym_diag, rhat, Basis, OpExpansion,
};
use crate::inverse::{
    check_box_coverage, check_inv_factor_d, check_solomon_euler, chain_term_count, inv_degenerate, inv_full,
    is_inverse, lambda_template, modular_check, zagier_check, DenominatorMode, InverseMethod, LambdaAlgo,
};
use crate::lattice::{
    c_nk, enumerate_bracketings, enumerate_chains, schroeder_counts, schroeder_lagrange_form, schroeder_sqrt_form,
    underdiagonal_paths,
};
use crate::perm::{is_tree_like, Perm};
use crate::det::Prime31;

#[derive(Debug, thiserror::Error)]
#[error("unknown suite {0:?}")]
pub struct UnknownSuite(String);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Matrices,
    Factorization,
    Determinant,
    Inverse,
    Zagier,
    Counting,
    Oracle,
    Applications,
    Positivity,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Matrices,
        Suite::Factorization,
        Suite::Determinant,
        Suite::Inverse,
        Suite::Zagier,
        Suite::Counting,
        Suite::Oracle,
        Suite::Applications,
        Suite::Positivity,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Matrices => "matrices",
            Suite::Factorization => "factorization",
            Suite::Determinant => "det",
            Suite::Inverse => "inverse",
            Suite::Zagier => "zagier",
            Suite::Counting => "counting",
            Suite::Oracle => "oracle",
            Suite::Applications => "apps",
            Suite::Positivity => "positivity",
        })
    }
}

impl FromStr for Suite {
    type Err = UnknownSuite;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.to_string() == s).ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

struct Runner<'a> {
    suite: Suite,
    out: Vec<Check>,
    sink: &'a mut dyn FnMut(&Check),
}

impl Runner<'_> {
    fn run(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<(bool, String), String>) {
        let start = Instant::now();
        let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        let c = Check { suite: self.suite.to_string(), name: name.into(), passed, detail, millis: start.elapsed().as_millis() };
        (self.sink)(&c);
        self.out.push(c);
    }

    fn flag(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<bool, String>) {
        self.run(name, || f().map(|b| (b, String::new())));
    }
}

fn err(e: impl fmt::Display) -> String {
    e.to_string()
}

/// One degenerate weight per shape: multiplicities a partition of `n`
/// (other than `1^n`) placed on labels `1, 2, …`.
fn degenerate_shapes(n: usize) -> Vec<Weight> {
    fn rec(left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=left.min(max)).rev() {
            cur.push(k);
            rec(left - k, k, cur, out);
            cur.pop();
        }
    }
    let mut parts = Vec::new();
    rec(n, n, &mut Vec::new(), &mut parts);
    parts
        .into_iter()
        .filter(|p| p.iter().any(|&k| k > 1))
        .map(|p| Weight::from_multiplicities(p.into_iter().enumerate().map(|(i, k)| (i as u8 + 1, k))))
        .collect()
}

/// The generic weight of size `n`, then one weight per degenerate shape.
fn weights(n: usize) -> Vec<Weight> {
    let mut v = vec![Weight::generic(n)];
    v.extend(degenerate_shapes(n));
    v
}

fn t(a: usize, b: usize, n: usize) -> Perm {
    Perm::cycle(a, b, n).expect("1 ≤ a ≤ b ≤ n")
}

/// Runs one suite for sizes up to `max_n`.
pub fn run_suite(suite: Suite, max_n: usize, seed: u64) -> Vec<Check> {
    run_suite_with(suite, max_n, seed, &mut |_| {})
}

/// As [`run_suite`], reporting each check to `sink` as it completes.
pub fn run_suite_with(suite: Suite, max_n: usize, seed: u64, sink: &mut dyn FnMut(&Check)) -> Vec<Check> {
    let mut r = Runner { suite, out: Vec::new(), sink };
    match suite {
        Suite::Matrices => matrices(&mut r, max_n),
        Suite::Factorization => factorization(&mut r, max_n),
        Suite::Determinant => determinant(&mut r, max_n),
        Suite::Inverse => inverse(&mut r, max_n),
        Suite::Zagier => zagier(&mut r, max_n),
        Suite::Counting => counting(&mut r, max_n),
        Suite::Oracle => oracle(&mut r, max_n),
        Suite::Applications => applications(&mut r, max_n, seed),
        Suite::Positivity => positivity(&mut r, max_n, seed),
    }
    r.out
}

pub fn run_all(max_n: usize, seed: u64) -> Vec<Check> {
    Suite::ALL.into_iter().flat_map(|s| run_suite(s, max_n, seed)).collect()
}

fn matrices(r: &mut Runner<'_>, max_n: usize) {
    for n in 1..=max_n {
        for nu in weights(n) {
            r.flag(format!("shape {nu}"), || {
                let a = build(&nu).map_err(err)?;
                let unit = !nu.is_generic() || (0..a.size()).all(|i| a.get(i, i).is_one());
                Ok(unit && a.is_hermitian() && a.is_reversal_symmetric())
            });
        }
        r.flag(format!("sum of deformed permutations n={n}"), || {
            let nu = Weight::generic(n);
            let basis = Basis::new(&nu);
            let mut s = OpExpansion::zero(basis.clone());
            for g in Perm::all(n) {
                s = s.plus(&rhat(&basis, &g).map_err(err)?);
            }
            Ok(s.to_dense().rows() == build_generic(&nu).map_err(err)?.rows())
        });
        for nu in degenerate_shapes(n) {
            r.flag(format!("transfer from generic model {nu}"), || {
                let e = embed_degenerate(&nu);
                let big = build_generic(e.model()).map_err(err)?;
                let sub = e.substitution();
                let a = e.transfer(&big, |p| p.substitute(&sub)).map_err(err)?;
                Ok(a.rows() == build_degenerate(&nu).map_err(err)?.rows())
            });
        }
    }
}

fn factorization(r: &mut Runner<'_>, max_n: usize) {
    for n in 2..=max_n {
        let basis = Basis::generic(n);
        let all = Perm::all(n);
        let rh = |g: &Perm| rhat(&basis, g).expect("generic basis");
        r.flag(format!("multiplication factor n={n}"), || {
            Ok(all.iter().all(|g1| {
                all.iter().all(|g2| {
                    let g = g1.compose(g2);
                    rh(g1).times(&rh(g2)) == rh(&g).scale_left(&mult_factor(&basis, g1, g2))
                })
            }))
        });
        r.flag(format!("quasimultiplicativity n={n}"), || {
            Ok(all.iter().all(|g1| {
                all.iter().all(|g2| {
                    let g = g1.compose(g2);
                    g.length() != g1.length() + g2.length() || rh(g1).times(&rh(g2)) == rh(&g)
                })
            }))
        });
        r.flag(format!("braid relations n={n}"), || {
            let s = |a: usize| rh(&t(a, a + 1, n));
            let three = (1..n.saturating_sub(1))
                .all(|a| s(a).times(&s(a + 1)).times(&s(a)) == s(a + 1).times(&s(a)).times(&s(a + 1)));
            let far = (1..n).all(|a| (a + 2..n).all(|b| s(a).times(&s(b)) == s(b).times(&s(a))));
            Ok(three && far)
        });
        r.flag(format!("right multiplication by cycles n={n}"), || {
            Ok(all.iter().all(|g| {
                (1..=n).all(|a| {
                    (a + 1..=n).all(|b| {
                        let mut d = basis.diag(|_| Poly::one());
                        for i in a..b {
                            if g.at(i) > g.at(b) {
                                d = d.times(&q_sym_diag(&basis, g.at(b), g.at(i)));
                            }
                        }
                        let tab = t(a, b, n);
                        rh(g).times(&rh(&tab)) == rh(&g.compose(&tab)).scale_left(&d)
                    })
                })
            }))
        });
        r.flag(format!("commutation of cycles n={n}"), || {
            let mut ok = true;
            for m in 2..=n {
                for a in 1..m {
                    for a2 in a..m {
                        let lhs = rh(&t(a2, m, n)).times(&rh(&t(a, m, n)));
                        let rhs =
                            rh(&t(a, m - 1, n)).times(&rh(&t(a2 + 1, m, n))).scale_left(&q_sym_diag(&basis, m - 1, m));
                        ok &= lhs == rhs;
                    }
                }
            }
            Ok(ok)
        });
        r.flag(format!("longest element rules n={n}"), || {
            let w = Perm::longest(1, n, n).map_err(err)?;
            Ok(all.iter().all(|g| {
                let mut d = basis.diag(|_| Poly::one());
                let gi = g.inverse();
                for a in 1..=n {
                    for b in a + 1..=n {
                        if gi.at(a) < gi.at(b) {
                            d = d.times(&q_sym_diag(&basis, a, b));
                        }
                    }
                }
                let want = rh(g).scale_left(&d);
                rh(&g.compose(&w)).times(&rh(&w)) == want && rh(&w).times(&rh(&w.compose(g))) == want
            }))
        });
        r.flag(format!("products of cycles n={n}"), || {
            let mut ok = true;
            for m in 2..=n {
                for mask in 1u32..1 << (m - 1) {
                    let a: Vec<usize> = (1..m).filter(|k| mask >> (k - 1) & 1 == 1).collect();
                    let mut lhs = OpExpansion::identity(basis.clone());
                    let mut g = Perm::identity(n);
                    for &k in &a {
                        lhs = lhs.times(&rh(&t(k, m, n)));
                        g = g.compose(&t(k, m, n));
                    }
                    ok &= lhs == rh(&g);
                }
            }
            Ok(ok)
        });
        r.flag(format!("A = A^1 A^2 ... A^n n={n}"), || {
            let mut p = OpExpansion::identity(basis.clone());
            for m in 1..=n {
                p = p.times(&factor_a_m(&basis, m).map_err(err)?);
            }
            Ok(p.to_dense().rows() == build_generic(&Weight::generic(n)).map_err(err)?.rows())
        });
        r.flag(format!("A^m C^m = D^(m-1) n={n}"), || {
            let mut ok = true;
            for m in 2..=n {
                let lhs = factor_a_m(&basis, m).map_err(err)?.times(&factor_c(&basis, m).map_err(err)?);
                ok &= lhs == factor_d(&basis, m - 1).map_err(err)?;
            }
            Ok(ok)
        });
        r.flag(format!("unimodal expansion of C^m n={n}"), || {
            let mut ok = true;
            for m in 1..=n {
                ok &= factor_c(&basis, m).map_err(err)? == factor_c_unimodal(&basis, m).map_err(err)?;
            }
            Ok(ok)
        });
    }
}

fn determinant(r: &mut Runner<'_>, max_n: usize) {
    for n in 1..=max_n.min(3) {
        r.flag(format!("symbolic elimination n={n}"), || {
            let nu = Weight::generic(n);
            Ok(brute_det(&build_generic(&nu).map_err(err)?) == det_formula(&nu).map_err(err)?.expand())
        });
    }
    if max_n >= 4 {
        r.run("grid certificate n=4", || {
            let g = grid_certificate(4).map_err(err)?;
            Ok((g.passed(), format!("{} orbit points, {} mismatches", g.orbit_representatives, g.mismatches)))
        });
    }
    for n in 2..=max_n.min(5) {
        r.flag(format!("similarity to symmetric form n={n}"), || similarity(n).map(|_| true).map_err(err));
    }
    for n in 1..=max_n {
        r.flag(format!("one-parameter specialisation n={n}"), || {
            Ok(det_formula(&Weight::generic(n)).map_err(err)?.one_param() == det_one_param(n))
        });
    }
    for n in 2..=max_n.min(4) {
        for nu in degenerate_shapes(n) {
            r.flag(format!("degenerate divides generic {nu}"), || det_divides(&nu).map_err(err));
        }
    }
}

fn inverse(r: &mut Runner<'_>, max_n: usize) {
    for n in 1..=max_n.min(4) {
        let nu = Weight::generic(n);
        for m in InverseMethod::ALL.into_iter().filter(|&m| n <= 3 || m != InverseMethod::Brute) {
            r.flag(format!("{m} is an inverse n={n}"), || is_inverse(&inv_full(&nu, m).map_err(err)?).map_err(err));
        }
        r.flag(format!("coefficient algorithms agree n={n}"), || {
            Ok(Perm::all(n).iter().all(|g| {
                let base = lambda_template(g, LambdaAlgo::Recursive);
                LambdaAlgo::ALL.iter().all(|&a| lambda_template(g, a) == base)
            }))
        });
        r.flag(format!("coefficients vanish off tree-like n={n}"), || {
            Ok(Perm::all(n).iter().all(|g| lambda_template(g, LambdaAlgo::Fast).is_zero() != is_tree_like(g)))
        });
        r.flag(format!("coefficients are real n={n}"), || {
            Ok(Perm::all(n).iter().all(|g| {
                let l = lambda_template(g, LambdaAlgo::Fast);
                l.conjugate() == l
            }))
        });
        let basis = Basis::generic(n);
        if n >= 2 {
            r.flag(format!("[D^m]^-1 D^m = I n={n}"), || {
                Ok((1..n).all(|m| check_inv_factor_d(&basis, m).unwrap_or(false)))
            });
        }
        r.flag(format!("alternating shuffle sum n={n}"), || check_solomon_euler(&basis).map_err(err));
    }
    for n in 2..=max_n.min(4) {
        for nu in degenerate_shapes(n) {
            r.flag(format!("degenerate inverse {nu}"), || {
                let x = inv_degenerate(&nu, InverseMethod::Fast).map_err(err)?;
                let a = build(&nu).map_err(err)?.map(|p| crate::algebra::BoxFraction::from_poly(p.clone()));
                Ok(a.mul(&x).is_identity())
            });
        }
    }
    if max_n >= 5 {
        r.run("modular inverse n=5", || {
            let rep = modular_check(5, LambdaAlgo::Fast, None, Prime31::LIST[0], 5).map_err(err)?;
            Ok((rep.passed(), format!("{} compared, {} mismatches", rep.compared, rep.mismatches.len())))
        });
    }
}

fn zagier(r: &mut Runner<'_>, max_n: usize) {
    for n in 2..=max_n.min(6) {
        for mode in [DenominatorMode::Multi, DenominatorMode::ExtendedMulti, DenominatorMode::OneParam] {
            r.run(format!("{mode} denominator n={n}"), || {
                let rep = zagier_check(n, mode);
                Ok((rep.passed(), format!("{} coefficients, {} failures", rep.checks.len(), rep.failures().len())))
            });
        }
        r.flag(format!("original conjecture n={n}"), || Ok(zagier_check(n, DenominatorMode::OriginalConjecture).passed()));
        r.flag(format!("every interval box is needed n={n}"), || Ok(check_box_coverage(n)));
    }
}

fn counting(r: &mut Runner<'_>, max_n: usize) {
    let n_max = max_n.max(6);
    let c = schroeder_counts(n_max);
    r.run("recursion", || {
        let want: Vec<BigInt> = [1, 1, 3, 11, 45, 197].into_iter().map(BigInt::from).collect();
        Ok((c[..6] == want[..], format!("{:?}", &c[..6])))
    });
    for n in 2..=n_max {
        r.flag(format!("closed forms n={n}"), || {
            Ok(schroeder_sqrt_form(n) == c[n - 1]
                && schroeder_lagrange_form(n) == c[n - 1]
                && underdiagonal_paths(n) == &c[n - 1] * 2
                && (0..n).map(|k| c_nk(n, k)).sum::<BigInt>() == c[n - 1])
        });
    }
    for n in 1..=n_max.min(7) {
        r.flag(format!("chains and bracketings n={n}"), || {
            let cn = &c[n - 1];
            Ok(BigInt::from(enumerate_chains(n).len()) == *cn
                && BigInt::from(enumerate_bracketings(n).len()) == *cn
                && BigInt::from(chain_term_count(n)) == *cn)
        });
    }
    for n in 2..=max_n.min(7) {
        r.flag(format!("tree-like permutations n={n}"), || {
            Ok(BigInt::from(Perm::all(n).iter().filter(|g| is_tree_like(g)).count()) == &c[n - 1] * 2)
        });
    }
}

fn words_up_to(alphabet: &[u8], len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for &c in alphabet {
                let mut v: Word = w.clone();
                v.push(c);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn oracle(r: &mut Runner<'_>, max_n: usize) {
    for n in 1..=max_n.min(5) {
        for nu in weights(n) {
            r.flag(format!("entries match the creation-annihilation form {nu}"), || {
                let a = build(&nu).map_err(err)?;
                let words = a.basis().words();
                Ok(words.iter().enumerate().all(|(i, wi)| {
                    words.iter().enumerate().all(|(j, wj)| *a.get(i, j) == inner_product(wi, wj))
                }))
            });
        }
    }
    let alphabet: Vec<u8> = (1..=3).collect();
    r.flag("commutation relations on words of length ≤ 4", || {
        Ok(words_up_to(&alphabet, 4.min(max_n)).iter().all(|w| {
            alphabet.iter().all(|&i| alphabet.iter().all(|&j| check_ccr(i, j, w)))
        }))
    });
}

fn applications(r: &mut Runner<'_>, max_n: usize, seed: u64) {
    for n in 1..=max_n.min(5) {
        r.flag(format!("Varchenko matrix is the symmetric Gram matrix n={n}"), || {
            varchenko_matches_gram(n).map_err(err)
        });
        r.flag(format!("edge exponents n={n}"), || check_varchenko_exponents(n).map_err(err));
        if n <= 3 {
            r.flag(format!("Varchenko determinant n={n}"), || check_varchenko_det(n).map_err(err));
        } else if n <= 4 {
            r.flag(format!("Varchenko determinant mod p n={n}"), || check_varchenko_det_modular(n, 3, seed).map_err(err));
        }
    }
    for n in 1..=max_n.min(4) {
        r.flag(format!("contravariant recursion matches closed form n={n}"), || {
            Ok(contravariant_matrix(n).map_err(err)? == contravariant_closed_matrix(n))
        });
        r.flag(format!("contravariant form is the Gram matrix n={n}"), || contravariant_matches_gram(n).map_err(err));
        r.flag(format!("contravariant determinant n={n}"), || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
            let mut b = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in i..n {
                    let x = rand::Rng::gen_range(&mut rng, -3..=3);
                    b[i][j] = x;
                    b[j][i] = x;
                }
            }
            let b = BilinearData::new(b).map_err(err)?;
            Ok(check_contravariant_det(&b).map_err(err)? && check_contravariant_det(&BilinearData::constant(n, 2)).map_err(err)?)
        });
    }
}

fn positivity(r: &mut Runner<'_>, max_n: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in 1..=max_n.min(4) {
        for nu in weights(n) {
            let labels = nu.labels();
            let point = random_hermitian_point(&labels, 0.95, &mut rng);
            r.run(format!("positive definite at a random point {nu}"), || {
                let p = positivity_check(&nu, &point, 1e-9).map_err(err)?;
                Ok((p.positive, format!("min eigenvalue {:.3e}", p.min_eigenvalue)))
            });
        }
    }
}
