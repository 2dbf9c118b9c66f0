//! Formal contexts and the derivation operators between object and
//! attribute sets.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::bitset::{BitSet, Ones};

/// Which side of the context a name or index refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NameKind {
    Object,
    Attribute,
}

impl fmt::Display for NameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NameKind::Object => "object",
            NameKind::Attribute => "attribute",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ContextError {
    #[error("duplicate {kind} name {name:?}")]
    DuplicateName { kind: NameKind, name: String },
    #[error("unknown {kind} name {name:?}")]
    UnknownName { kind: NameKind, name: String },
    #[error("{kind} names must be non-empty")]
    EmptyName { kind: NameKind },
    #[error("{kind} index {index} out of range (context has {bound})")]
    IndexOutOfRange { kind: NameKind, index: usize, bound: usize },
    #[error("{kind} set built for {found} elements used on a context with {expected}")]
    UniverseMismatch {
        kind: NameKind,
        expected: usize,
        found: usize,
    },
    #[error("incidence has {found} rows of width {width}, expected {objects} rows of width {attributes}")]
    DimensionMismatch {
        objects: usize,
        attributes: usize,
        found: usize,
        width: usize,
    },
}

macro_rules! index_set {
    ($(#[$meta:meta])* $name:ident, $kind:expr) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(BitSet);

        impl $name {
            pub const KIND: NameKind = $kind;

            pub fn empty(universe: usize) -> Self {
                $name(BitSet::empty(universe))
            }

            pub fn full(universe: usize) -> Self {
                $name(BitSet::full(universe))
            }

            pub fn from_indices<I>(universe: usize, indices: I) -> Result<Self, ContextError>
            where
                I: IntoIterator<Item = usize>,
            {
                BitSet::try_from_indices(universe, indices)
                    .map($name)
                    .map_err(|index| ContextError::IndexOutOfRange {
                        kind: $kind,
                        index,
                        bound: universe,
                    })
            }

            pub fn from_bits(bits: BitSet) -> Self {
                $name(bits)
            }

            pub fn bits(&self) -> &BitSet {
                &self.0
            }

            pub fn into_bits(self) -> BitSet {
                self.0
            }

            pub fn universe(&self) -> usize {
                self.0.universe()
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn contains(&self, i: usize) -> bool {
                self.0.contains(i)
            }

            pub fn is_subset(&self, other: &Self) -> bool {
                self.0.is_subset(&other.0)
            }

            pub fn iter(&self) -> Ones<'_> {
                self.0.iter()
            }

            pub fn to_vec(&self) -> Vec<usize> {
                self.0.to_vec()
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Debug::fmt(&self.0, f)
            }
        }
    };
}

index_set!(
    /// A subset of the objects of one context, by position.
    ObjectSet,
    NameKind::Object
);
index_set!(
    /// A subset of the attributes of one context, by position.
    AttributeSet,
    NameKind::Attribute
);

/// Objects (data structures) × attributes (field names) with a boolean
/// incidence. Immutable: every edit produces a new context.
#[derive(Clone, PartialEq, Eq)]
pub struct FormalContext {
    objects: Vec<String>,
    attributes: Vec<String>,
    object_index: BTreeMap<String, usize>,
    attribute_index: BTreeMap<String, usize>,
    // rows[g] ranges over attributes, cols[m] over objects
    rows: Vec<BitSet>,
    cols: Vec<BitSet>,
}

fn index_names(names: &[String], kind: NameKind) -> Result<BTreeMap<String, usize>, ContextError> {
    let mut index = BTreeMap::new();
    for (i, name) in names.iter().enumerate() {
        if name.is_empty() {
            return Err(ContextError::EmptyName { kind });
        }
        if index.insert(name.clone(), i).is_some() {
            return Err(ContextError::DuplicateName {
                kind,
                name: name.clone(),
            });
        }
    }
    Ok(index)
}

impl FormalContext {
    /// Builds a context from declared names and the `(object, attribute)`
    /// pairs that are incident.
    pub fn build<O, A, P, S, T>(objects: O, attributes: A, pairs: P) -> Result<Self, ContextError>
    where
        O: IntoIterator,
        O::Item: Into<String>,
        A: IntoIterator,
        A::Item: Into<String>,
        P: IntoIterator<Item = (S, T)>,
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let objects: Vec<String> = objects.into_iter().map(Into::into).collect();
        let attributes: Vec<String> = attributes.into_iter().map(Into::into).collect();
        let object_index = index_names(&objects, NameKind::Object)?;
        let attribute_index = index_names(&attributes, NameKind::Attribute)?;
        let mut rows = alloc::vec![BitSet::empty(attributes.len()); objects.len()];
        for (g, m) in pairs {
            let (g, m) = (g.as_ref(), m.as_ref());
            let gi = *object_index.get(g).ok_or_else(|| ContextError::UnknownName {
                kind: NameKind::Object,
                name: g.into(),
            })?;
            let mi = *attribute_index.get(m).ok_or_else(|| ContextError::UnknownName {
                kind: NameKind::Attribute,
                name: m.into(),
            })?;
            rows[gi].insert(mi);
        }
        Ok(Self::assemble(objects, attributes, object_index, attribute_index, rows))
    }

    /// Builds a context from one attribute bit row per object.
    pub fn from_rows(objects: Vec<String>, attributes: Vec<String>, rows: Vec<BitSet>) -> Result<Self, ContextError> {
        let object_index = index_names(&objects, NameKind::Object)?;
        let attribute_index = index_names(&attributes, NameKind::Attribute)?;
        if rows.len() != objects.len() || rows.iter().any(|r| r.universe() != attributes.len()) {
            let width = rows
                .iter()
                .map(BitSet::universe)
                .find(|&w| w != attributes.len())
                .unwrap_or(attributes.len());
            return Err(ContextError::DimensionMismatch {
                objects: objects.len(),
                attributes: attributes.len(),
                found: rows.len(),
                width,
            });
        }
        Ok(Self::assemble(objects, attributes, object_index, attribute_index, rows))
    }

    /// Like [`from_rows`](Self::from_rows) with each row given as attribute
    /// indices.
    pub fn from_row_indices(
        objects: Vec<String>,
        attributes: Vec<String>,
        rows: Vec<Vec<usize>>,
    ) -> Result<Self, ContextError> {
        let width = attributes.len();
        let rows = rows
            .into_iter()
            .map(|r| {
                BitSet::try_from_indices(width, r).map_err(|index| ContextError::IndexOutOfRange {
                    kind: NameKind::Attribute,
                    index,
                    bound: width,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(objects, attributes, rows)
    }

    pub fn empty() -> Self {
        Self::assemble(Vec::new(), Vec::new(), BTreeMap::new(), BTreeMap::new(), Vec::new())
    }

    fn assemble(
        objects: Vec<String>,
        attributes: Vec<String>,
        object_index: BTreeMap<String, usize>,
        attribute_index: BTreeMap<String, usize>,
        rows: Vec<BitSet>,
    ) -> Self {
        let mut cols = alloc::vec![BitSet::empty(objects.len()); attributes.len()];
        for (g, row) in rows.iter().enumerate() {
            for m in row.iter() {
                cols[m].insert(g);
            }
        }
        FormalContext {
            objects,
            attributes,
            object_index,
            attribute_index,
            rows,
            cols,
        }
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn attribute_count(&self) -> usize {
        self.attributes.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.object_index.get(name).copied()
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attribute_index.get(name).copied()
    }

    /// The attributes of object `g`.
    pub fn row(&self, g: usize) -> &BitSet {
        &self.rows[g]
    }

    pub fn rows(&self) -> &[BitSet] {
        &self.rows
    }

    /// The objects having attribute `m`.
    pub fn column(&self, m: usize) -> &BitSet {
        &self.cols[m]
    }

    pub fn incident(&self, g: usize, m: usize) -> bool {
        self.rows[g].contains(m)
    }

    pub fn incidence_count(&self) -> usize {
        self.rows.iter().map(BitSet::len).sum()
    }

    pub fn all_objects(&self) -> ObjectSet {
        ObjectSet::full(self.objects.len())
    }

    pub fn all_attributes(&self) -> AttributeSet {
        AttributeSet::full(self.attributes.len())
    }

    pub fn object_set<I: IntoIterator<Item = usize>>(&self, indices: I) -> Result<ObjectSet, ContextError> {
        ObjectSet::from_indices(self.objects.len(), indices)
    }

    pub fn attribute_set<I: IntoIterator<Item = usize>>(&self, indices: I) -> Result<AttributeSet, ContextError> {
        AttributeSet::from_indices(self.attributes.len(), indices)
    }

    pub fn objects_named<I, S>(&self, names: I) -> Result<ObjectSet, ContextError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = ObjectSet::empty(self.objects.len());
        for n in names {
            let n = n.as_ref();
            let i = self.object_index(n).ok_or_else(|| ContextError::UnknownName {
                kind: NameKind::Object,
                name: n.into(),
            })?;
            set.0.insert(i);
        }
        Ok(set)
    }

    pub fn attributes_named<I, S>(&self, names: I) -> Result<AttributeSet, ContextError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = AttributeSet::empty(self.attributes.len());
        for n in names {
            let n = n.as_ref();
            let i = self.attribute_index(n).ok_or_else(|| ContextError::UnknownName {
                kind: NameKind::Attribute,
                name: n.into(),
            })?;
            set.0.insert(i);
        }
        Ok(set)
    }

    pub fn object_names<'a>(&'a self, set: &'a ObjectSet) -> impl Iterator<Item = &'a str> + 'a {
        set.iter().map(move |g| self.objects[g].as_str())
    }

    pub fn attribute_names<'a>(&'a self, set: &'a AttributeSet) -> impl Iterator<Item = &'a str> + 'a {
        set.iter().map(move |m| self.attributes[m].as_str())
    }

    fn check_attributes(&self, set: &AttributeSet) -> Result<(), ContextError> {
        if set.universe() != self.attributes.len() {
            return Err(ContextError::UniverseMismatch {
                kind: NameKind::Attribute,
                expected: self.attributes.len(),
                found: set.universe(),
            });
        }
        Ok(())
    }

    fn check_objects(&self, set: &ObjectSet) -> Result<(), ContextError> {
        if set.universe() != self.objects.len() {
            return Err(ContextError::UniverseMismatch {
                kind: NameKind::Object,
                expected: self.objects.len(),
                found: set.universe(),
            });
        }
        Ok(())
    }

    /// Objects having every attribute in `attrs`.
    pub fn extent(&self, attrs: &AttributeSet) -> Result<ObjectSet, ContextError> {
        self.check_attributes(attrs)?;
        Ok(ObjectSet(self.extent_bits(attrs.bits())))
    }

    /// Attributes shared by every object in `objs`.
    pub fn intent(&self, objs: &ObjectSet) -> Result<AttributeSet, ContextError> {
        self.check_objects(objs)?;
        Ok(AttributeSet(self.intent_bits(objs.bits())))
    }

    /// `intent(extent(attrs))`
    pub fn attr_closure(&self, attrs: &AttributeSet) -> Result<AttributeSet, ContextError> {
        self.check_attributes(attrs)?;
        Ok(AttributeSet(self.intent_bits(&self.extent_bits(attrs.bits()))))
    }

    /// `extent(intent(objs))`
    pub fn obj_closure(&self, objs: &ObjectSet) -> Result<ObjectSet, ContextError> {
        self.check_objects(objs)?;
        Ok(ObjectSet(self.extent_bits(&self.intent_bits(objs.bits()))))
    }

    pub fn is_concept(&self, objs: &ObjectSet, attrs: &AttributeSet) -> Result<bool, ContextError> {
        self.check_objects(objs)?;
        self.check_attributes(attrs)?;
        Ok(self.extent_bits(attrs.bits()) == *objs.bits() && self.intent_bits(objs.bits()) == *attrs.bits())
    }

    pub(crate) fn extent_bits(&self, attrs: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.objects.len());
        for m in attrs.iter() {
            out.intersect_with(&self.cols[m]);
        }
        out
    }

    pub(crate) fn intent_bits(&self, objs: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.attributes.len());
        for g in objs.iter() {
            out.intersect_with(&self.rows[g]);
        }
        out
    }
}

impl fmt::Debug for FormalContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FormalContext {}x{}", self.objects.len(), self.attributes.len())?;
        for (name, row) in self.objects.iter().zip(&self.rows) {
            write!(f, "  {name}:")?;
            for m in row.iter() {
                write!(f, " {}", self.attributes[m])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::toy;

    #[test]
    fn toy_dimensions() {
        let ctx = toy();
        assert_eq!(ctx.object_count(), 3);
        assert_eq!(ctx.attribute_count(), 8);
        assert_eq!(ctx.incidence_count(), 12);
    }

    #[test]
    fn empty_context_builds() {
        let ctx = FormalContext::build(Vec::<String>::new(), Vec::<String>::new(), Vec::<(&str, &str)>::new()).unwrap();
        assert_eq!((ctx.object_count(), ctx.attribute_count()), (0, 0));
        assert_eq!(ctx, FormalContext::empty());
    }

    #[test]
    fn duplicate_object_rejected() {
        let err = FormalContext::build(["Storage", "Storage"], ["a"], [("Storage", "a")]).unwrap_err();
        assert_eq!(
            err,
            ContextError::DuplicateName {
                kind: NameKind::Object,
                name: "Storage".into()
            }
        );
    }

    #[test]
    fn unknown_pair_rejected() {
        let err = FormalContext::build(["g"], ["a"], [("g", "b")]).unwrap_err();
        assert!(matches!(
            err,
            ContextError::UnknownName {
                kind: NameKind::Attribute,
                ..
            }
        ));
    }

    #[test]
    fn empty_name_rejected() {
        let err = FormalContext::build(["g"], [""], Vec::<(&str, &str)>::new()).unwrap_err();
        assert_eq!(
            err,
            ContextError::EmptyName {
                kind: NameKind::Attribute
            }
        );
    }

    #[test]
    fn names_are_case_sensitive() {
        let ctx = FormalContext::build(["g"], ["Time", "time"], [("g", "time")]).unwrap();
        assert!(!ctx.incident(0, 0));
        assert!(ctx.incident(0, 1));
    }

    #[test]
    fn extent_examples() {
        let ctx = toy();
        let b = ctx.attributes_named(["time", "used", "max"]).unwrap();
        let a = ctx.extent(&b).unwrap();
        assert_eq!(ctx.object_names(&a).collect::<Vec<_>>(), ["Storage", "DBTablespace"]);
        assert_eq!(ctx.extent(&AttributeSet::empty(8)).unwrap(), ctx.all_objects());
        let b = ctx.attributes_named(["time", "timestamp"]).unwrap();
        assert!(ctx.extent(&b).unwrap().is_empty());
    }

    #[test]
    fn intent_examples() {
        let ctx = toy();
        let a = ctx.objects_named(["Storage", "DBTablespace"]).unwrap();
        let b = ctx.intent(&a).unwrap();
        assert_eq!(ctx.attribute_names(&b).collect::<Vec<_>>(), ["time", "used", "max"]);
        assert_eq!(ctx.intent(&ObjectSet::empty(3)).unwrap(), ctx.all_attributes());
        let a = ctx.objects_named(["Storage", "ServiceCall"]).unwrap();
        assert!(ctx.intent(&a).unwrap().is_empty());
    }

    #[test]
    fn attr_closure_examples() {
        let ctx = toy();
        let tum = ctx.attributes_named(["time", "used", "max"]).unwrap();
        assert_eq!(ctx.attr_closure(&tum).unwrap(), tum);
        let used = ctx.attributes_named(["used"]).unwrap();
        assert_eq!(ctx.attr_closure(&used).unwrap(), tum);

        let single = FormalContext::build(["g"], ["a", "b"], [("g", "a"), ("g", "b")]).unwrap();
        assert_eq!(
            single.attr_closure(&AttributeSet::empty(2)).unwrap(),
            single.all_attributes()
        );
    }

    #[test]
    fn obj_closure_examples() {
        let ctx = toy();
        let sd = ctx.objects_named(["Storage", "DBTablespace"]).unwrap();
        assert_eq!(ctx.obj_closure(&sd).unwrap(), sd);
        assert_eq!(ctx.obj_closure(&ctx.all_objects()).unwrap(), ctx.all_objects());
        let sc = ctx.objects_named(["Storage", "ServiceCall"]).unwrap();
        assert_eq!(ctx.obj_closure(&sc).unwrap(), ctx.all_objects());
    }

    #[test]
    fn is_concept_examples() {
        let ctx = toy();
        let sd = ctx.objects_named(["Storage", "DBTablespace"]).unwrap();
        let tum = ctx.attributes_named(["time", "used", "max"]).unwrap();
        assert!(ctx.is_concept(&sd, &tum).unwrap());
        assert!(!ctx.is_concept(&ObjectSet::empty(3), &AttributeSet::empty(8)).unwrap());
        let s = ctx.objects_named(["Storage"]).unwrap();
        assert!(!ctx.is_concept(&s, &tum).unwrap());
    }

    #[test]
    fn foreign_sets_rejected() {
        let ctx = toy();
        let err = ctx.extent(&AttributeSet::empty(3)).unwrap_err();
        assert!(matches!(
            err,
            ContextError::UniverseMismatch {
                kind: NameKind::Attribute,
                ..
            }
        ));
        let err = ctx.object_set([3]).unwrap_err();
        assert_eq!(
            err,
            ContextError::IndexOutOfRange {
                kind: NameKind::Object,
                index: 3,
                bound: 3
            }
        );
    }

    #[test]
    fn from_rows_checks_dimensions() {
        let err = FormalContext::from_rows(
            alloc::vec!["g".into()],
            alloc::vec!["a".into()],
            alloc::vec![BitSet::empty(2)],
        )
        .unwrap_err();
        assert!(matches!(err, ContextError::DimensionMismatch { .. }));
    }
}
