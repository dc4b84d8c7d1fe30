//! Cognitive categories: finite state sets with exactly one morphism per
//! ordered pair of states.
//!
//! Morphisms are never stored. A hom-set is a singleton, so `(dom, cod)`
//! determines the morphism and composition is just `(dom(f), cod(g))`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Dense ordinal of a state inside its category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(u32);

impl StateId {
    pub fn new(ordinal: usize) -> Self {
        StateId(u32::try_from(ordinal).expect("state ordinal exceeds u32"))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone)]
pub struct CognitiveCategory {
    name: String,
    labels: Vec<String>,
    by_label: HashMap<String, StateId>,
}

impl PartialEq for CognitiveCategory {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.labels == other.labels
    }
}

impl Eq for CognitiveCategory {}

impl CognitiveCategory {
    /// Builds a category whose state ordinals follow the order of `labels`.
    pub fn new<I, S>(name: impl Into<String>, labels: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyCategory);
        }
        let mut by_label = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::EmptyLabel);
            }
            if by_label.insert(label.clone(), StateId::new(i)).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Arc::new(CognitiveCategory {
            name: name.into(),
            labels,
            by_label,
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of states `n`.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false: categories have at least one state.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn states(&self) -> impl ExactSizeIterator<Item = StateId> + Clone {
        (0..self.labels.len()).map(StateId::new)
    }

    pub fn label(&self, state: StateId) -> &str {
        &self.labels[state.index()]
    }

    pub fn contains(&self, state: StateId) -> bool {
        state.index() < self.labels.len()
    }

    pub fn state(&self, label: &str) -> Result<StateId> {
        self.by_label
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownState {
                category: self.name.clone(),
                state: label.to_string(),
            })
    }

    pub(crate) fn check(&self, state: StateId) -> Result<()> {
        if self.contains(state) {
            Ok(())
        } else {
            Err(Error::UnknownState {
                category: self.name.clone(),
                state: state.to_string(),
            })
        }
    }

    /// `n²`: one morphism per ordered pair.
    pub fn morphism_count(&self) -> usize {
        self.len() * self.len()
    }

    pub fn hom(self: &Arc<Self>, dom: StateId, cod: StateId) -> Result<Morphism> {
        self.check(dom)?;
        self.check(cod)?;
        Ok(Morphism {
            category: Arc::clone(self),
            dom,
            cod,
        })
    }

    pub fn identity(self: &Arc<Self>, state: StateId) -> Result<Morphism> {
        self.hom(state, state)
    }

    /// Every morphism of the category, dom-major.
    pub fn morphisms(self: &Arc<Self>) -> impl Iterator<Item = Morphism> + '_ {
        self.states().flat_map(move |a| {
            self.states().map(move |b| Morphism {
                category: Arc::clone(self),
                dom: a,
                cod: b,
            })
        })
    }
}

/// Same category by identity or by structure.
pub(crate) fn same_category(a: &Arc<CognitiveCategory>, b: &Arc<CognitiveCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn ensure_same(a: &Arc<CognitiveCategory>, b: &Arc<CognitiveCategory>) -> Result<()> {
    if same_category(a, b) {
        Ok(())
    } else {
        Err(Error::CategoryMismatch {
            left: a.name().to_string(),
            right: b.name().to_string(),
        })
    }
}

/// The unique transformation `dom → cod`.
#[derive(Debug, Clone)]
pub struct Morphism {
    category: Arc<CognitiveCategory>,
    dom: StateId,
    cod: StateId,
}

impl PartialEq for Morphism {
    fn eq(&self, other: &Self) -> bool {
        self.dom == other.dom
            && self.cod == other.cod
            && same_category(&self.category, &other.category)
    }
}

impl Eq for Morphism {}

impl Morphism {
    pub fn dom(&self) -> StateId {
        self.dom
    }

    pub fn cod(&self) -> StateId {
        self.cod
    }

    pub fn category(&self) -> &Arc<CognitiveCategory> {
        &self.category
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod
    }

    /// `next ∘ self`: first `self`, then `next`.
    pub fn then(&self, next: &Morphism) -> Result<Morphism> {
        compose(self, next)
    }

    /// Every morphism is invertible; the inverse of `A → B` is `B → A`.
    pub fn inverse(&self) -> Morphism {
        Morphism {
            category: Arc::clone(&self.category),
            dom: self.cod,
            cod: self.dom,
        }
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {}",
            self.category.label(self.dom),
            self.category.label(self.cod)
        )
    }
}

/// `g ∘ f`, defined when `cod(f) = dom(g)`.
pub fn compose(f: &Morphism, g: &Morphism) -> Result<Morphism> {
    ensure_same(&f.category, &g.category)?;
    if f.cod != g.dom {
        return Err(Error::NotComposable {
            cod: f.category.label(f.cod).to_string(),
            dom: g.category.label(g.dom).to_string(),
        });
    }
    Ok(Morphism {
        category: Arc::clone(&f.category),
        dom: f.dom,
        cod: g.cod,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s4() -> Arc<CognitiveCategory> {
        CognitiveCategory::new("S4", ["s1", "s2", "s3", "s4"]).unwrap()
    }

    #[test]
    fn construction() {
        let s = s4();
        assert_eq!(s.len(), 4);
        assert_eq!(s.state("s3").unwrap(), StateId::new(2));
        let one = CognitiveCategory::new("one", ["x"]).unwrap();
        assert_eq!(one.morphisms().count(), 1);
        assert!(one.morphisms().next().unwrap().is_identity());
        assert_eq!(
            CognitiveCategory::new("bad", ["a", "a"]).unwrap_err(),
            Error::DuplicateLabel("a".into())
        );
        assert_eq!(
            CognitiveCategory::new("bad", Vec::<String>::new()).unwrap_err(),
            Error::EmptyCategory
        );
        assert_eq!(
            CognitiveCategory::new("bad", ["a", ""]).unwrap_err(),
            Error::EmptyLabel
        );
    }

    #[test]
    fn hom_and_compose() {
        let s = s4();
        let [s1, s2, s3, s4] = [0, 1, 2, 3].map(StateId::new);
        let t12 = s.hom(s1, s2).unwrap();
        let t23 = s.hom(s2, s3).unwrap();
        assert_eq!(compose(&t12, &t23).unwrap(), s.hom(s1, s3).unwrap());
        assert_eq!(compose(&t12, &s.identity(s2).unwrap()).unwrap(), t12);
        assert!(s.hom(s1, s1).unwrap().is_identity());
        assert!(matches!(
            compose(&t12, &s.hom(s3, s4).unwrap()),
            Err(Error::NotComposable { .. })
        ));
        assert!(matches!(
            s.hom(StateId::new(8), s1),
            Err(Error::UnknownState { .. })
        ));
        assert!(s.state("s9").is_err());
    }

    #[test]
    fn mixed_categories_do_not_compose() {
        let a = s4();
        let b = CognitiveCategory::new("T", ["s1", "s2"]).unwrap();
        let f = a.hom(StateId::new(0), StateId::new(1)).unwrap();
        let g = b.hom(StateId::new(1), StateId::new(0)).unwrap();
        assert!(matches!(
            compose(&f, &g),
            Err(Error::CategoryMismatch { .. })
        ));
    }

    #[test]
    fn morphism_counts() {
        assert_eq!(s4().morphism_count(), 16);
        for n in 1..=8 {
            let c = CognitiveCategory::new("c", (0..n).map(|i| format!("x{i}"))).unwrap();
            let mut pairs = std::collections::HashSet::new();
            for m in c.morphisms() {
                pairs.insert((m.dom(), m.cod()));
            }
            assert_eq!(pairs.len(), n * n);
            assert_eq!(c.morphism_count(), n * n);
        }
    }

    #[test]
    fn category_laws_exhaustive() {
        for n in 1..=5 {
            let c = CognitiveCategory::new("c", (0..n).map(|i| format!("x{i}"))).unwrap();
            let ms: Vec<_> = c.morphisms().collect();
            for f in &ms {
                let id_dom = c.identity(f.dom()).unwrap();
                let id_cod = c.identity(f.cod()).unwrap();
                assert_eq!(&compose(&id_dom, f).unwrap(), f);
                assert_eq!(&compose(f, &id_cod).unwrap(), f);
                assert_eq!(compose(f, &f.inverse()).unwrap(), id_dom);
                for g in ms.iter().filter(|g| g.dom() == f.cod()) {
                    for h in ms.iter().filter(|h| h.dom() == g.cod()) {
                        let left = compose(&compose(f, g).unwrap(), h).unwrap();
                        let right = compose(f, &compose(g, h).unwrap()).unwrap();
                        assert_eq!(left, right);
                    }
                }
            }
        }
    }
}
