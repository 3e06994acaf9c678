//! Finite Coxeter systems: enumeration, canonical ShortLex words, descent
//! sets, Bruhat order, generator conjugacy classes and conjugacy classes.
//!
//! Elements are enumerated breadth-first from the identity, folding the
//! braid relations into a coset-table scan as each element is created. For
//! a Coxeter presentation scanned in this order no coincidences arise, so
//! ids double as ShortLex ranks: the discovery path of an element is its
//! ShortLex-least reduced word. The builder still cross-checks every
//! deduction and fails loudly rather than fold two ids together.

use crate::error::{Error, Result};

/// A group element, identified by its ShortLex rank in the enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(pub u32);

impl Element {
    pub const IDENTITY: Element = Element(0);
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone)]
pub struct CoxeterSystem {
    gen_names: Vec<String>,
    matrix: Vec<Vec<u32>>,
    class_of_gen: Vec<usize>,
    class_labels: Vec<String>,
    rmul: Vec<u32>, // size * ngens
    lmul: Vec<u32>,
    inv: Vec<u32>,
    len: Vec<u32>,
    words: Vec<Vec<u8>>,
}

/// One partially scanned relation row, tracking `lelt . w[i..] = w[..j+1]
/// applied backwards from relt`.
struct ScanRow {
    i: usize,
    j: usize,
    lelt: u32,
    relt: u32,
}

fn validate_matrix(n: usize, matrix: &[Vec<u32>]) -> Result<()> {
    if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidMatrix("matrix shape does not match generators".into()));
    }
    for (i, row) in matrix.iter().enumerate() {
        for (j, &m) in row.iter().enumerate() {
            if i == j && m != 1 {
                return Err(Error::InvalidMatrix(format!("diagonal entry m[{i}][{i}] must be 1")));
            }
            if i != j && m == 1 {
                return Err(Error::InvalidMatrix(format!(
                    "off-diagonal entry m[{i}][{j}] must be 0 (infinite) or >= 2"
                )));
            }
            if matrix[j][i] != m {
                return Err(Error::InvalidMatrix("matrix must be symmetric".into()));
            }
        }
    }
    Ok(())
}

/// Generator conjugacy classes: connected components of the graph with an
/// edge {s,t} whenever m_st is odd. Classes are ordered by least generator.
fn generator_classes(matrix: &[Vec<u32>]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let n = matrix.len();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if class_of[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut stack = vec![start];
        let mut members = Vec::new();
        class_of[start] = id;
        while let Some(g) = stack.pop() {
            members.push(g);
            for h in 0..n {
                if h != g && class_of[h] == usize::MAX && matrix[g][h] % 2 == 1 {
                    class_of[h] = id;
                    stack.push(h);
                }
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    (class_of, classes)
}

impl CoxeterSystem {
    /// Enumerates the group up to `cap` elements.
    pub fn build(gen_names: Vec<String>, matrix: Vec<Vec<u32>>, cap: usize) -> Result<Self> {
        let n = gen_names.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("need at least one generator".into()));
        }
        validate_matrix(n, &matrix)?;
        for (i, a) in gen_names.iter().enumerate() {
            if gen_names[i + 1..].contains(a) {
                return Err(Error::InvalidMatrix(format!("duplicate generator name `{a}`")));
            }
        }
        if matrix.iter().flatten().any(|&m| m == 0) {
            // An infinite bond makes the whole group infinite.
            return Err(Error::NotFinite { cap });
        }

        // Relation words (st)^m for each bonded pair.
        let mut rel_words: Vec<Vec<u8>> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let m = matrix[i][j] as usize;
                let mut w = Vec::with_capacity(2 * m);
                for _ in 0..m {
                    w.push(i as u8);
                    w.push(j as u8);
                }
                rel_words.push(w);
            }
        }

        let mut succ: Vec<Vec<Option<u32>>> = vec![vec![None; n]];
        let mut words: Vec<Vec<u8>> = vec![Vec::new()];
        let mut len: Vec<u32> = vec![0];
        let mut rows: Vec<Vec<ScanRow>> = (0..rel_words.len()).map(|_| Vec::new()).collect();
        for (r, w) in rel_words.iter().enumerate() {
            rows[r].push(ScanRow { i: 0, j: w.len() - 1, lelt: 0, relt: 0 });
        }

        let mut e = 0usize;
        while e < succ.len() {
            for g in 0..n {
                if succ[e][g].is_some() {
                    continue;
                }
                if succ.len() >= cap {
                    return Err(Error::NotFinite { cap });
                }
                let x = succ.len() as u32;
                succ.push(vec![None; n]);
                succ[e][g] = Some(x);
                succ[x as usize][g] = Some(e as u32);
                let mut w = words[e].clone();
                w.push(g as u8);
                words.push(w);
                len.push(len[e] + 1);
                for (r, word) in rel_words.iter().enumerate() {
                    rows[r].push(ScanRow { i: 0, j: word.len() - 1, lelt: x, relt: x });
                }
                saturate(&mut succ, &rel_words, &mut rows)?;
            }
            e += 1;
        }

        let size = succ.len();
        let rmul: Vec<u32> = succ
            .iter()
            .flat_map(|r| r.iter().map(|o| o.expect("multiplication table is total")))
            .collect();
        // Edge sanity: every generator step changes length by exactly one.
        for x in 0..size {
            for g in 0..n {
                let y = rmul[x * n + g] as usize;
                if len[x].abs_diff(len[y]) != 1 {
                    return Err(Error::Internal("length-graded Cayley graph violated".into()));
                }
            }
        }

        let mut inv = vec![0u32; size];
        for x in 0..size {
            let mut acc = 0usize;
            for &g in words[x].iter().rev() {
                acc = rmul[acc * n + g as usize] as usize;
            }
            inv[x] = acc as u32;
        }
        for x in 0..size {
            if inv[inv[x] as usize] != x as u32 || len[inv[x] as usize] != len[x] {
                return Err(Error::Internal("inversion table inconsistent".into()));
            }
        }
        let mut lmul = vec![0u32; size * n];
        for x in 0..size {
            for g in 0..n {
                lmul[x * n + g] = inv[rmul[inv[x] as usize * n + g] as usize];
            }
        }

        let (class_of_gen, classes) = generator_classes(&matrix);
        let class_labels = classes.iter().map(|c| gen_names[c[0]].clone()).collect();

        Ok(CoxeterSystem {
            gen_names,
            matrix,
            class_of_gen,
            class_labels,
            rmul,
            lmul,
            inv,
            len,
            words,
        })
    }

    /// Overrides the derived class labels (one per class, in class order).
    pub fn with_class_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.class_labels.len() {
            return Err(Error::InvalidMatrix(format!(
                "expected {} class labels, got {}",
                self.class_labels.len(),
                labels.len()
            )));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[i + 1..].contains(a) {
                return Err(Error::InvalidMatrix(format!("duplicate class label `{a}`")));
            }
        }
        self.class_labels = labels;
        Ok(self)
    }

    pub fn num_generators(&self) -> usize {
        self.gen_names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn coxeter_matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.len.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.size() as u32).map(Element)
    }

    pub fn num_classes(&self) -> usize {
        self.class_labels.len()
    }

    pub fn class_labels(&self) -> &[String] {
        &self.class_labels
    }

    pub fn class_of_generator(&self, g: usize) -> usize {
        self.class_of_gen[g]
    }

    pub fn generator(&self, g: usize) -> Element {
        self.right_mul(Element::IDENTITY, g)
    }

    pub fn right_mul(&self, x: Element, g: usize) -> Element {
        Element(self.rmul[x.index() * self.num_generators() + g])
    }

    pub fn left_mul(&self, g: usize, x: Element) -> Element {
        Element(self.lmul[x.index() * self.num_generators() + g])
    }

    pub fn multiply(&self, x: Element, y: Element) -> Element {
        let mut acc = x;
        for &g in &self.words[y.index()] {
            acc = self.right_mul(acc, g as usize);
        }
        acc
    }

    pub fn inverse(&self, x: Element) -> Element {
        Element(self.inv[x.index()])
    }

    pub fn length(&self, x: Element) -> usize {
        self.len[x.index()] as usize
    }

    /// ShortLex-least reduced word, as generator indices.
    pub fn word(&self, x: Element) -> &[u8] {
        &self.words[x.index()]
    }

    pub fn right_descents(&self, x: Element) -> Vec<usize> {
        (0..self.num_generators())
            .filter(|&g| self.length(self.right_mul(x, g)) < self.length(x))
            .collect()
    }

    pub fn left_descents(&self, x: Element) -> Vec<usize> {
        (0..self.num_generators())
            .filter(|&g| self.length(self.left_mul(g, x)) < self.length(x))
            .collect()
    }

    /// Bruhat order by the standard descent recursion.
    pub fn bruhat_leq(&self, x: Element, y: Element) -> bool {
        if x == Element::IDENTITY {
            return true;
        }
        if self.length(x) > self.length(y) {
            return false;
        }
        let s = self.left_descents(y)[0];
        let sy = self.left_mul(s, y);
        let sx = self.left_mul(s, x);
        if self.length(sx) < self.length(x) {
            self.bruhat_leq(sx, sy)
        } else {
            self.bruhat_leq(x, sy)
        }
    }

    pub fn longest_element(&self) -> Element {
        let max = *self.len.iter().max().expect("nonempty group");
        let mut at_max = (0..self.size()).filter(|&x| self.len[x] == max);
        let w0 = at_max.next().expect("nonempty group");
        assert!(at_max.next().is_none(), "longest element must be unique");
        Element(w0 as u32)
    }

    /// Class-length vector: occurrences of each generator class in a
    /// reduced word (independent of the reduced word chosen).
    pub fn multi_length(&self, x: Element) -> Vec<i64> {
        let mut counts = vec![0i64; self.num_classes()];
        for &g in self.word(x) {
            counts[self.class_of_gen[g as usize]] += 1;
        }
        counts
    }

    /// Conjugacy classes as orbits of generator conjugation, each sorted,
    /// ordered by least member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<Element>> {
        let mut seen = vec![false; self.size()];
        let mut classes = Vec::new();
        for start in 0..self.size() {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(x) = stack.pop() {
                for g in 0..self.num_generators() {
                    let y = self.left_mul(g, self.right_mul(Element(x as u32), g)).index();
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                        stack.push(y);
                    }
                }
            }
            orbit.sort_unstable();
            classes.push(orbit.into_iter().map(|x| Element(x as u32)).collect());
        }
        classes
    }

    /// Renders an element as dot-joined generator names; identity is `e`.
    pub fn render(&self, x: Element) -> String {
        if x == Element::IDENTITY {
            return "e".into();
        }
        self.word(x)
            .iter()
            .map(|&g| self.gen_names[g as usize].as_str())
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Parses a dot-joined word (not necessarily reduced) into an element.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let trimmed = text.trim();
        if trimmed == "e" || trimmed.is_empty() {
            return Ok(Element::IDENTITY);
        }
        let mut acc = Element::IDENTITY;
        for part in trimmed.split('.') {
            let g = self
                .gen_names
                .iter()
                .position(|n| n == part.trim())
                .ok_or_else(|| Error::Parse(format!("unknown generator `{part}`")))?;
            acc = self.right_mul(acc, g);
        }
        Ok(acc)
    }

    /// Resolves a generator or class label to a class index.
    pub fn class_by_label(&self, label: &str) -> Option<usize> {
        if let Some(c) = self.class_labels.iter().position(|l| l == label) {
            return Some(c);
        }
        self.gen_names
            .iter()
            .position(|n| n == label)
            .map(|g| self.class_of_gen[g])
    }
}

fn saturate(
    succ: &mut Vec<Vec<Option<u32>>>,
    rel_words: &[Vec<u8>],
    rows: &mut [Vec<ScanRow>],
) -> Result<()> {
    loop {
        let mut progressed = false;
        for (r, word) in rel_words.iter().enumerate() {
            let mut keep = Vec::new();
            for mut row in rows[r].drain(..) {
                loop {
                    while row.i <= row.j {
                        let g = word[row.i] as usize;
                        match succ[row.lelt as usize][g] {
                            Some(next) => {
                                row.lelt = next;
                                row.i += 1;
                            }
                            None => break,
                        }
                    }
                    while row.j > row.i {
                        let g = word[row.j] as usize;
                        match succ[row.relt as usize][g] {
                            Some(prev) => {
                                row.relt = prev;
                                row.j -= 1;
                            }
                            None => break,
                        }
                    }
                    if row.i > row.j {
                        if row.lelt != row.relt {
                            return Err(Error::Internal(
                                "relation scan produced a coincidence".into(),
                            ));
                        }
                        progressed = true;
                        break;
                    }
                    if row.i == row.j {
                        let g = word[row.i] as usize;
                        let (a, b) = (row.lelt as usize, row.relt);
                        match succ[a][g] {
                            Some(existing) if existing != b => {
                                return Err(Error::Internal(
                                    "relation scan produced a coincidence".into(),
                                ));
                            }
                            Some(_) => {}
                            None => {
                                succ[a][g] = Some(b);
                                succ[b as usize][g] = Some(a as u32);
                                progressed = true;
                            }
                        }
                        row.i += 1;
                        row.lelt = b;
                        continue;
                    }
                    keep.push(row);
                    break;
                }
            }
            rows[r] = keep;
        }
        if !progressed {
            return Ok(());
        }
    }
}

/// Built-in Coxeter systems by name: `I2(m)`, `An`, `Bn`, `F4`.
pub fn builtin(name: &str, cap: usize) -> Result<CoxeterSystem> {
    let name = name.trim();
    let mk = |names: Vec<&str>, matrix: Vec<Vec<u32>>| {
        CoxeterSystem::build(names.into_iter().map(String::from).collect(), matrix, cap)
    };
    if let Some(rest) = name.strip_prefix("I2(").and_then(|r| r.strip_suffix(')')) {
        let m: u32 = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad dihedral order in `{name}`")))?;
        if m < 2 {
            return Err(Error::Parse("I2(m) needs m >= 2".into()));
        }
        return mk(vec!["s", "t"], vec![vec![1, m], vec![m, 1]]);
    }
    if let Some(rest) = name.strip_prefix('A') {
        let n: usize = rest.parse().map_err(|_| Error::Parse(format!("bad rank in `{name}`")))?;
        if n == 0 {
            return Err(Error::Parse("An needs n >= 1".into()));
        }
        let names: Vec<String> = (1..=n).map(|i| format!("s{i}")).collect();
        let mut matrix = vec![vec![2u32; n]; n];
        for i in 0..n {
            matrix[i][i] = 1;
            if i + 1 < n {
                matrix[i][i + 1] = 3;
                matrix[i + 1][i] = 3;
            }
        }
        return CoxeterSystem::build(names, matrix, cap);
    }
    if let Some(rest) = name.strip_prefix('B') {
        let n: usize = rest.parse().map_err(|_| Error::Parse(format!("bad rank in `{name}`")))?;
        if n < 2 {
            return Err(Error::Parse("Bn needs n >= 2".into()));
        }
        // t - 4 - s1 - 3 - s2 - ... - s(n-1)
        let mut names = vec!["t".to_string()];
        names.extend((1..n).map(|i| format!("s{i}")));
        let mut matrix = vec![vec![2u32; n]; n];
        for i in 0..n {
            matrix[i][i] = 1;
        }
        matrix[0][1] = 4;
        matrix[1][0] = 4;
        for i in 1..n - 1 {
            matrix[i][i + 1] = 3;
            matrix[i + 1][i] = 3;
        }
        let system = CoxeterSystem::build(names, matrix, cap)?;
        return if n > 2 {
            system.with_class_labels(vec!["t".into(), "s".into()])
        } else {
            Ok(system)
        };
    }
    if name == "F4" {
        // s2 - 3 - s1 - 4 - t1 - 3 - t2
        let names = vec!["s1", "s2", "t1", "t2"];
        let mut matrix = vec![vec![2u32; 4]; 4];
        for i in 0..4 {
            matrix[i][i] = 1;
        }
        let bonds = [(0, 1, 3u32), (0, 2, 4), (2, 3, 3)];
        for (i, j, m) in bonds {
            matrix[i][j] = m;
            matrix[j][i] = m;
        }
        return mk(names, matrix)?.with_class_labels(vec!["s".into(), "t".into()]);
    }
    Err(Error::Parse(format!("unknown built-in group `{name}`")))
}

/// Brute-force subword test against the canonical word of `y`; test oracle
/// for the descent recursion.
pub fn bruhat_leq_subword_oracle(system: &CoxeterSystem, x: Element, y: Element) -> bool {
    let target = system.word(y);
    // Products of subwords of a reduced word of y are exactly the lower
    // Bruhat interval.
    let mut reachable = vec![Element::IDENTITY];
    for &g in target {
        let mut next: Vec<Element> =
            reachable.iter().map(|&u| system.right_mul(u, g as usize)).collect();
        next.extend_from_slice(&reachable);
        next.sort_unstable();
        next.dedup();
        reachable = next;
    }
    reachable.contains(&x)
}

/// Random other reduced words of `x` (descent walks), for reduced-word
/// independence tests.
pub fn random_reduced_word(system: &CoxeterSystem, x: Element, seed: &mut u64) -> Vec<u8> {
    let mut word = Vec::with_capacity(system.length(x));
    let mut cur = x;
    while cur != Element::IDENTITY {
        let descents = system.right_descents(cur);
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let g = descents[(*seed >> 33) as usize % descents.len()];
        word.push(g as u8);
        cur = system.right_mul(cur, g);
    }
    word.reverse();
    word
}
