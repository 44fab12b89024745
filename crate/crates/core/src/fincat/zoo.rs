//! Small named categories used by instances, tests and the CLI.

use std::collections::HashMap;

use super::{assemble, FinCategory, Mo, Ob};

pub fn terminal() -> FinCategory {
    preorder("1", &["*"], &[])
}

pub fn discrete(n: usize) -> FinCategory {
    let names: Vec<String> = (0..n).map(|i| format!("d{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    preorder(&format!("disc{n}"), &refs, &[])
}

/// `0 → 1`.
pub fn walking_arrow() -> FinCategory {
    chain(2).with_name("arrow")
}

/// `0 ≤ 1 ≤ … ≤ n-1`.
pub fn chain(n: usize) -> FinCategory {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut rel = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            rel.push((refs[i], refs[j]));
        }
    }
    preorder(&format!("chain{n}"), &refs, &rel)
}

/// The Boolean lattice on two atoms: `bot ≤ a, b ≤ top`.
pub fn square_lattice() -> FinCategory {
    preorder(
        "square",
        &["bot", "a", "b", "top"],
        &[("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")],
    )
}

/// A lex preorder that is not skeletal: `0 ≤ t ≅ u`.
/// Terminal objects and products come with genuine choices here.
pub fn twin_top() -> FinCategory {
    preorder(
        "twintop",
        &["0", "t", "u"],
        &[("0", "t"), ("t", "u"), ("u", "t")],
    )
}

/// `a ≤ c ≥ b`, a poset without products of `a` and `b`.
pub fn cospan_poset() -> FinCategory {
    preorder("vee", &["a", "b", "c"], &[("a", "c"), ("b", "c")])
}

/// Preorder generated by `rel` (reflexive-transitive closure). Morphism
/// `x<=y` exists exactly when `x ≤ y`.
pub fn preorder(name: &str, elems: &[&str], rel: &[(&str, &str)]) -> FinCategory {
    let n = elems.len();
    let pos: HashMap<&str, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut le = vec![vec![false; n]; n];
    for i in 0..n {
        le[i][i] = true;
    }
    for &(a, b) in rel {
        le[pos[a]][pos[b]] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    let mut index = HashMap::new();
    let (mut names, mut src, mut tgt) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..n {
        for j in 0..n {
            if le[i][j] {
                index.insert((i, j), names.len() as Mo);
                names.push(if i == j {
                    format!("id_{}", elems[i])
                } else {
                    format!("{}<={}", elems[i], elems[j])
                });
                src.push(i as Ob);
                tgt.push(j as Ob);
            }
        }
    }
    let ident = (0..n).map(|i| index[&(i, i)]).collect();
    let mut comp = HashMap::new();
    for (&(i, j), &f) in &index {
        for k in 0..n {
            if let Some(&g) = index.get(&(j, k)) {
                comp.insert((g, f), index[&(i, k)]);
            }
        }
    }
    assemble(
        name.into(),
        elems.iter().map(|e| e.to_string()).collect(),
        names,
        src,
        tgt,
        ident,
        comp,
    )
    .expect("preorder tables are valid")
}

/// Skeleton of finite sets on the sizes `0..=max`: every function `k → m`,
/// named by its value list, e.g. `f2to2[10]` is the swap.
pub fn finset_skeleton(max: usize) -> FinCategory {
    let mut funcs: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for k in 0..=max {
        for m in 0..=max {
            let count = m.pow(k as u32);
            for code in 0..count {
                let mut v = Vec::with_capacity(k);
                let mut c = code;
                for _ in 0..k {
                    v.push(c % m);
                    c /= m;
                }
                funcs.push((k, m, v));
            }
        }
    }
    let index: HashMap<(usize, usize, Vec<usize>), Mo> = funcs
        .iter()
        .enumerate()
        .map(|(i, f)| (f.clone(), i as Mo))
        .collect();
    let names = funcs
        .iter()
        .map(|(k, m, v)| {
            let digits: String = v
                .iter()
                .map(|d| char::from_digit(*d as u32, 36).unwrap())
                .collect();
            format!("f{k}to{m}[{digits}]")
        })
        .collect();
    let src = funcs.iter().map(|f| f.0 as Ob).collect();
    let tgt = funcs.iter().map(|f| f.1 as Ob).collect();
    let ident = (0..=max)
        .map(|k| index[&(k, k, (0..k).collect())])
        .collect();
    let mut comp = HashMap::new();
    for (i, (k, m, f)) in funcs.iter().enumerate() {
        for (j, (m2, n, g)) in funcs.iter().enumerate() {
            if m2 == m {
                let h: Vec<usize> = f.iter().map(|&x| g[x]).collect();
                comp.insert((j as Mo, i as Mo), index[&(*k, *n, h)]);
            }
        }
    }
    assemble(
        format!("finset{max}"),
        (0..=max).map(|k| k.to_string()).collect(),
        names,
        src,
        tgt,
        ident,
        comp,
    )
    .expect("function tables are valid")
}

/// Two objects and an inverse pair `i`, `j`.
pub fn walking_iso() -> FinCategory {
    let mut comp = HashMap::new();
    // 0 = id_a, 1 = id_b, 2 = i: a→b, 3 = j: b→a
    comp.insert((3, 2), 0);
    comp.insert((2, 3), 1);
    assemble(
        "iso".into(),
        vec!["a".into(), "b".into()],
        vec!["id_a".into(), "id_b".into(), "i".into(), "j".into()],
        vec![0, 1, 0, 1],
        vec![0, 1, 1, 0],
        vec![0, 1],
        comp,
    )
    .expect("walking isomorphism is valid")
}

/// Two parallel arrows `u, v: a → b`.
pub fn parallel_pair() -> FinCategory {
    assemble(
        "parallel".into(),
        vec!["a".into(), "b".into()],
        vec!["id_a".into(), "id_b".into(), "u".into(), "v".into()],
        vec![0, 1, 0, 0],
        vec![0, 1, 1, 1],
        vec![0, 1],
        HashMap::new(),
    )
    .expect("parallel pair is valid")
}

/// A finite group presented as a one-object category; `mul[a][b] = a·b`.
pub fn group_category(name: &str, elem_names: &[String], mul: &[Vec<usize>]) -> FinCategory {
    let n = elem_names.len();
    let e = (0..n)
        .find(|&a| (0..n).all(|b| mul[a][b] == b))
        .expect("group has a unit");
    let mut comp = HashMap::new();
    for g in 0..n {
        for f in 0..n {
            comp.insert((g as Mo, f as Mo), mul[g][f] as Mo);
        }
    }
    assemble(
        name.into(),
        vec!["*".into()],
        elem_names.to_vec(),
        vec![0; n],
        vec![0; n],
        vec![e as Mo],
        comp,
    )
    .expect("group table is a category")
}
