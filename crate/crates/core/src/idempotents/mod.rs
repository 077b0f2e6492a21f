//! Idempotent pairs `α: A → 𝒪` in symmetric monoidal categories, the
//! preorder between them, and ⊗-coreflections.
//!
//! Everything here is written against [`MonoidalContext`]; the derived
//! category of a finite ring and finite preordered sets are the two
//! instances.

pub mod derived;
pub mod preorder;

use serde::Serialize;

use crate::error::{Error, Result};

pub use derived::DerivedContext;
pub use preorder::PreorderedContext;

pub trait MonoidalContext {
    type Obj: Clone;
    type Mor: Clone;

    fn unit(&self) -> Self::Obj;
    fn same_object(&self, a: &Self::Obj, b: &Self::Obj) -> bool;
    fn tensor(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Self::Obj>;
    fn tensor_mor(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;
    /// `g ∘ f`.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor>;
    fn identity(&self, a: &Self::Obj) -> Self::Mor;
    fn source(&self, f: &Self::Mor) -> Self::Obj;
    fn target(&self, f: &Self::Mor) -> Self::Obj;
    /// `l_A: 𝒪 ⊗ A → A`.
    fn left_unitor(&self, a: &Self::Obj) -> Result<Self::Mor>;
    /// `r_A: A ⊗ 𝒪 → A`.
    fn right_unitor(&self, a: &Self::Obj) -> Result<Self::Mor>;
    /// `s_{A,B}: A ⊗ B → B ⊗ A`.
    fn symmetry(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Self::Mor>;
    /// `a: (A ⊗ B) ⊗ C → A ⊗ (B ⊗ C)`.
    fn associator(&self, a: &Self::Obj, b: &Self::Obj, c: &Self::Obj) -> Result<Self::Mor>;
    fn is_iso(&self, f: &Self::Mor) -> Result<bool>;
    fn mor_eq(&self, f: &Self::Mor, g: &Self::Mor) -> Result<bool>;
    /// Every morphism `a → b`, when the context can list them.
    fn hom_set(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Option<Vec<Self::Mor>>>;

    /// Injectivity and surjectivity of `φ ↦ h ∘ φ` on `Hom(x, source h)`.
    fn post_compose_bijectivity(&self, x: &Self::Obj, h: &Self::Mor) -> Result<Option<(bool, bool)>> {
        let (Some(dom), Some(cod)) = (self.hom_set(x, &self.source(h))?, self.hom_set(x, &self.target(h))?) else {
            return Ok(None);
        };
        let images = dom.iter().map(|f| self.compose(h, f)).collect::<Result<Vec<_>>>()?;
        let mut injective = true;
        for i in 0..images.len() {
            for j in 0..i {
                if self.mor_eq(&images[i], &images[j])? {
                    injective = false;
                }
            }
        }
        let mut surjective = true;
        for g in &cod {
            let mut hit = false;
            for f in &images {
                if self.mor_eq(f, g)? {
                    hit = true;
                    break;
                }
            }
            surjective &= hit;
        }
        Ok(Some((injective, surjective)))
    }
}

/// A map `α: A → 𝒪`; idempotence is a property checked separately.
#[derive(Clone, Debug)]
pub struct Pair<O, M> {
    pub obj: O,
    pub alpha: M,
}

pub type CtxPair<C> = Pair<<C as MonoidalContext>::Obj, <C as MonoidalContext>::Mor>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdempotentReport {
    /// `r ∘ (1 ⊗ α)` is an isomorphism.
    pub right_iso: bool,
    /// `l ∘ (α ⊗ 1)` is an isomorphism.
    pub left_iso: bool,
    pub composites_equal: bool,
    /// `s_{A,A} = 1`.
    pub symmetry_identity: bool,
    /// `j_{A,A}`, `j_{A,𝒪}` injective and `j_{𝒪,A}` surjective.
    pub j_criterion: Option<bool>,
    pub idempotent: bool,
}

/// `ι(E) = l_E ∘ (α ⊗ 1_E): A ⊗ E → E`.
pub fn iota<C: MonoidalContext>(ctx: &C, p: &CtxPair<C>, e: &C::Obj) -> Result<C::Mor> {
    let f = ctx.tensor_mor(&p.alpha, &ctx.identity(e))?;
    ctx.compose(&ctx.left_unitor(e)?, &f)
}

/// The composites `r ∘ (1 ⊗ α)` and `l ∘ (α ⊗ 1)` on `A ⊗ A`.
pub fn composites<C: MonoidalContext>(ctx: &C, p: &CtxPair<C>) -> Result<(C::Mor, C::Mor)> {
    let a = &p.obj;
    let one = ctx.identity(a);
    let right = ctx.compose(&ctx.right_unitor(a)?, &ctx.tensor_mor(&one, &p.alpha)?)?;
    let left = iota(ctx, p, a)?;
    Ok((right, left))
}

/// `j_{F,G}: Hom(A ⊗ F, A ⊗ G) → Hom(A ⊗ F, G)`, post-composition with `ι(G)`.
fn j_map<C: MonoidalContext>(ctx: &C, p: &CtxPair<C>, f: &C::Obj, g: &C::Obj) -> Result<Option<(bool, bool)>> {
    let af = ctx.tensor(&p.obj, f)?;
    ctx.post_compose_bijectivity(&af, &iota(ctx, p, g)?)
}

pub fn is_idempotent<C: MonoidalContext>(ctx: &C, p: &CtxPair<C>) -> Result<IdempotentReport> {
    let a = &p.obj;
    if !ctx.same_object(&ctx.target(&p.alpha), &ctx.unit()) || !ctx.same_object(&ctx.source(&p.alpha), a) {
        return Err(Error::NotAMorphism("α must be a map A → 𝒪".into()));
    }
    let (right, left) = composites(ctx, p)?;
    let right_iso = ctx.is_iso(&right)?;
    let left_iso = ctx.is_iso(&left)?;
    let composites_equal = ctx.mor_eq(&right, &left)?;
    let symmetry_identity = ctx.mor_eq(&ctx.symmetry(a, a)?, &ctx.identity(&ctx.tensor(a, a)?))?;
    let u = ctx.unit();
    let j_criterion = match (j_map(ctx, p, a, a)?, j_map(ctx, p, a, &u)?, j_map(ctx, p, &u, a)?) {
        (Some(aa), Some(ao), Some(oa)) => Some(aa.0 && ao.0 && oa.1),
        _ => None,
    };
    Ok(IdempotentReport {
        right_iso,
        left_iso,
        composites_equal,
        symmetry_identity,
        j_criterion,
        idempotent: right_iso && left_iso && composites_equal,
    })
}

/// `(A ⊗ B, μ ∘ (α ⊗ β))` with `μ = l_𝒪: 𝒪 ⊗ 𝒪 → 𝒪`.
pub fn tensor_pairs<C: MonoidalContext>(ctx: &C, a: &CtxPair<C>, b: &CtxPair<C>) -> Result<CtxPair<C>> {
    let obj = ctx.tensor(&a.obj, &b.obj)?;
    let ab = ctx.tensor_mor(&a.alpha, &b.alpha)?;
    let alpha = ctx.compose(&ctx.left_unitor(&ctx.unit())?, &ab)?;
    Ok(Pair { obj, alpha })
}

/// `B ≼ A`: `l_B ∘ (α ⊗ 1_B): A ⊗ B → B` is an isomorphism.
pub fn leq<C: MonoidalContext>(ctx: &C, b: &CtxPair<C>, a: &CtxPair<C>) -> Result<bool> {
    ctx.is_iso(&iota(ctx, a, &b.obj)?)
}

/// Every `λ: B → A` with `α ∘ λ = β`.
pub fn hom_pairs<C: MonoidalContext>(ctx: &C, b: &CtxPair<C>, a: &CtxPair<C>) -> Result<Vec<C::Mor>> {
    let maps = ctx
        .hom_set(&b.obj, &a.obj)?
        .ok_or_else(|| Error::NotImplemented("context cannot enumerate morphisms".into()))?;
    let mut out = Vec::new();
    for l in maps {
        if ctx.mor_eq(&ctx.compose(&a.alpha, &l)?, &b.alpha)? {
            out.push(l);
        }
    }
    Ok(out)
}

/// `E ∈ D_A`: `ι(E)` is an isomorphism.
pub fn membership<C: MonoidalContext>(ctx: &C, a: &CtxPair<C>, e: &C::Obj) -> Result<bool> {
    ctx.is_iso(&iota(ctx, a, e)?)
}

/// Checks that `Γ = A ⊗ −` with `ι` is a coreflection on the samples:
/// `Γι(E) = ιΓ(E)` are equal isomorphisms and `Hom(ΓF, ΓE) → Hom(ΓF, E)`
/// is bijective. Returns the violated instances.
pub fn coreflection_check<C: MonoidalContext>(ctx: &C, p: &CtxPair<C>, samples: &[C::Obj]) -> Result<Vec<String>> {
    let a = &p.obj;
    let mut out = Vec::new();
    for (k, e) in samples.iter().enumerate() {
        let ie = iota(ctx, p, e)?;
        let ge = ctx.tensor(a, e)?;
        let g_iota = ctx.tensor_mor(&ctx.identity(a), &ie)?;
        let iota_g = iota(ctx, p, &ge)?;
        if !ctx.is_iso(&g_iota)? {
            out.push(format!("sample {k}: Γ(ι) is not an isomorphism"));
        }
        if !ctx.is_iso(&iota_g)? {
            out.push(format!("sample {k}: ι(Γ) is not an isomorphism"));
        }
        if !ctx.mor_eq(&g_iota, &iota_g)? {
            out.push(format!("sample {k}: Γ(ι) ≠ ι(Γ)"));
        }
        for (m, f) in samples.iter().enumerate() {
            let gf = ctx.tensor(a, f)?;
            match ctx.post_compose_bijectivity(&gf, &ie)? {
                Some((true, true)) | None => {}
                Some(_) => out.push(format!("samples ({m}, {k}): Hom(ΓF, ΓE) → Hom(ΓF, E) is not bijective")),
            }
        }
    }
    Ok(out)
}

/// Violations of the coherence axioms on every triple drawn from `objs`.
pub fn coherence_violations<C: MonoidalContext>(ctx: &C, objs: &[C::Obj]) -> Result<Vec<String>> {
    let u = ctx.unit();
    let mut out = Vec::new();
    for (i, a) in objs.iter().enumerate() {
        // l ∘ s = r on A ⊗ 𝒪
        let ls = ctx.compose(&ctx.left_unitor(a)?, &ctx.symmetry(a, &u)?)?;
        if !ctx.mor_eq(&ls, &ctx.right_unitor(a)?)? {
            out.push(format!("unit symmetry fails on object {i}"));
        }
        for (j, b) in objs.iter().enumerate() {
            let ab = ctx.tensor(a, b)?;
            let ss = ctx.compose(&ctx.symmetry(b, a)?, &ctx.symmetry(a, b)?)?;
            if !ctx.mor_eq(&ss, &ctx.identity(&ab))? {
                out.push(format!("s ∘ s ≠ 1 on ({i}, {j})"));
            }
            // (1 ⊗ l) ∘ a = r ⊗ 1 on (A ⊗ 𝒪) ⊗ B
            let lhs = ctx.compose(&ctx.tensor_mor(&ctx.identity(a), &ctx.left_unitor(b)?)?, &ctx.associator(a, &u, b)?)?;
            let rhs = ctx.tensor_mor(&ctx.right_unitor(a)?, &ctx.identity(b))?;
            if !ctx.mor_eq(&lhs, &rhs)? {
                out.push(format!("triangle fails on ({i}, {j})"));
            }
            for (k, c) in objs.iter().enumerate() {
                let bc = ctx.tensor(b, c)?;
                // a ∘ s ∘ a = (1 ⊗ s) ∘ a ∘ (s ⊗ 1)
                let top = ctx.compose(
                    &ctx.associator(b, c, a)?,
                    &ctx.compose(&ctx.symmetry(a, &bc)?, &ctx.associator(a, b, c)?)?,
                )?;
                let bottom = ctx.compose(
                    &ctx.tensor_mor(&ctx.identity(b), &ctx.symmetry(a, c)?)?,
                    &ctx.compose(&ctx.associator(b, a, c)?, &ctx.tensor_mor(&ctx.symmetry(a, b)?, &ctx.identity(c))?)?,
                )?;
                if !ctx.mor_eq(&top, &bottom)? {
                    out.push(format!("hexagon fails on ({i}, {j}, {k})"));
                }
                // pentagon on (A, B, C, A)
                let d = a;
                let p1 = ctx.compose(&ctx.associator(a, b, &ctx.tensor(c, d)?)?, &ctx.associator(&ab, c, d)?)?;
                let p2 = ctx.compose(
                    &ctx.tensor_mor(&ctx.identity(a), &ctx.associator(b, c, d)?)?,
                    &ctx.compose(
                        &ctx.associator(a, &bc, d)?,
                        &ctx.tensor_mor(&ctx.associator(a, b, c)?, &ctx.identity(d))?,
                    )?,
                )?;
                if !ctx.mor_eq(&p1, &p2)? {
                    out.push(format!("pentagon fails on ({i}, {j}, {k}, {i})"));
                }
            }
        }
    }
    Ok(out)
}
