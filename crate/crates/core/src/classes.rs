//! Communicating classes of the transition digraph.

/// Strongly connected components, found with an iterative Tarjan so deep
/// chains do not exhaust the call stack. Components come out in reverse
/// topological order of the condensation.
pub fn strongly_connected_components(successors: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = successors.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut counter = 0;
    // (vertex, next successor position)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = successors[v].get(*pos) {
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut component = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component.push(w);
                    if w == v {
                        break;
                    }
                }
                components.push(component);
            }
        }
    }
    components
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassKind {
    Closed,
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CommClass {
    /// Sorted ascending.
    pub states: Vec<usize>,
    pub kind: ClassKind,
}

impl CommClass {
    pub fn is_closed(&self) -> bool {
        self.kind == ClassKind::Closed
    }

    pub fn is_trivial(&self) -> bool {
        self.states.len() == 1
    }

    pub fn lowest(&self) -> usize {
        self.states[0]
    }

    pub fn highest(&self) -> usize {
        *self.states.last().expect("classes are nonempty")
    }
}

/// Which member of a class stands in for it when the rest are collapsed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Representative {
    #[default]
    Lowest,
    Highest,
}

impl Representative {
    pub fn pick(self, class: &CommClass) -> usize {
        match self {
            Representative::Lowest => class.lowest(),
            Representative::Highest => class.highest(),
        }
    }
}

/// Partition of the states into communicating classes, ordered by lowest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPartition {
    n: usize,
    classes: Vec<CommClass>,
    class_of: Vec<usize>,
}

impl ClassPartition {
    /// `successors[j]` lists the states reachable from `j` in one step; self-loops are ignored.
    pub fn from_successors(successors: &[Vec<usize>]) -> Self {
        let n = successors.len();
        let mut comps = strongly_connected_components(successors);
        for c in comps.iter_mut() {
            c.sort_unstable();
        }
        comps.sort_unstable_by_key(|c| c[0]);
        let mut class_of = vec![0; n];
        for (k, comp) in comps.iter().enumerate() {
            for &s in comp {
                class_of[s] = k;
            }
        }
        let classes = comps
            .into_iter()
            .enumerate()
            .map(|(k, states)| {
                let leaves = states
                    .iter()
                    .any(|&j| successors[j].iter().any(|&i| class_of[i] != k));
                CommClass {
                    states,
                    kind: if leaves { ClassKind::Open } else { ClassKind::Closed },
                }
            })
            .collect();
        ClassPartition {
            n,
            classes,
            class_of,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[CommClass] {
        &self.classes
    }

    pub fn class_of(&self, state: usize) -> &CommClass {
        &self.classes[self.class_of[state]]
    }

    pub fn closed_classes(&self) -> impl Iterator<Item = &CommClass> + '_ {
        self.classes.iter().filter(|c| c.is_closed())
    }

    pub fn num_closed(&self) -> usize {
        self.closed_classes().count()
    }

    pub fn is_regular(&self) -> bool {
        self.num_closed() == 1
    }

    pub fn is_irreducible(&self) -> bool {
        self.classes.len() == 1
    }

    pub fn all_trivial(&self) -> bool {
        self.classes.iter().all(CommClass::is_trivial)
    }

    /// States in no closed class, ascending.
    pub fn transient_states(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&s| !self.class_of(s).is_closed())
            .collect()
    }

    pub fn is_transient(&self, state: usize) -> bool {
        !self.class_of(state).is_closed()
    }

    /// Every state of a closed class except one representative per closed class.
    pub fn all_but_closed_class_representatives(&self, choice: Representative) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .closed_classes()
            .flat_map(|c| {
                let rep = choice.pick(c);
                c.states.iter().copied().filter(move |&s| s != rep)
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Every state except one representative per communicating class.
    pub fn all_but_class_representatives(&self, choice: Representative) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .classes
            .iter()
            .flat_map(|c| {
                let rep = choice.pick(c);
                c.states.iter().copied().filter(move |&s| s != rep)
            })
            .collect();
        out.sort_unstable();
        out
    }
}
