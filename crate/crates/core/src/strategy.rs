//! Name-addressable registries: analysis engines and instance families.
//!
//! Both registries hold trait objects so that the CLI, the self-check and
//! tests select an implementation by the same string they accept on the
//! command line.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::PeriodResult;
use crate::boolmatrix::{oracle_signature, PowerSignature};
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::gadgets::{self, GadgetInstance};
use crate::index::index_of_convergence;
use crate::period::period_general;

/// Computes the period and index of convergence of a digraph.
pub trait SignatureEngine: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    fn period(&self, g: &Digraph) -> PeriodResult {
        self.signature(g).period
    }

    fn signature(&self, g: &Digraph) -> PowerSignature;
}

/// Lifted-graph period test plus residue-path index characterization.
pub struct LiftedEngine;

impl SignatureEngine for LiftedEngine {
    fn name(&self) -> &'static str {
        "lifted"
    }

    fn description(&self) -> &'static str {
        "structural: residue-lifted reachability per component, lcm over components"
    }

    fn period(&self, g: &Digraph) -> PeriodResult {
        period_general(g)
    }

    fn signature(&self, g: &Digraph) -> PowerSignature {
        index_of_convergence(g)
    }
}

/// Explicit Boolean matrix powers.
pub struct OracleEngine;

impl SignatureEngine for OracleEngine {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn description(&self) -> &'static str {
        "brute force: explicit Boolean matrix powers up to n^2 and beyond"
    }

    fn signature(&self, g: &Digraph) -> PowerSignature {
        oracle_signature(g)
    }
}

fn unknown(kind: &'static str, name: &str, known: Vec<&'static str>) -> Error {
    Error::UnknownName { kind, name: name.to_string(), known: known.join(", ") }
}

pub struct EngineRegistry {
    engines: Vec<Box<dyn SignatureEngine>>,
}

impl Default for EngineRegistry {
    fn default() -> Self {
        Self::empty().with(LiftedEngine).with(OracleEngine)
    }
}

impl EngineRegistry {
    pub fn empty() -> Self {
        EngineRegistry { engines: Vec::new() }
    }

    /// Adds an engine; a later engine with the same name shadows earlier ones.
    pub fn with(mut self, engine: impl SignatureEngine + 'static) -> Self {
        self.engines.retain(|e| e.name() != engine.name());
        self.engines.push(Box::new(engine));
        self
    }

    pub fn get(&self, name: &str) -> Result<&dyn SignatureEngine> {
        self.engines
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| unknown("algorithm", name, self.names()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.engines.iter().map(|e| e.name()).collect()
    }
}

impl fmt::Debug for EngineRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names()).finish()
    }
}

/// Parameters shared by all families; each family reads what it needs.
#[derive(Clone, Debug, Default)]
pub struct FamilyParams {
    pub n: Option<usize>,
    pub edge_probability: Option<f64>,
    pub seed: u64,
    /// Named path for the order gadget, first vertex first.
    pub order: Option<Vec<String>>,
    pub s_name: Option<String>,
    pub t_name: Option<String>,
    /// Explicit reachability instance `(graph, s, t)` for the st-gadgets.
    pub base: Option<(Digraph, usize, usize)>,
}

impl FamilyParams {
    fn require_n(&self, family: &str) -> Result<usize> {
        self.n.ok_or_else(|| Error::InvalidParameter(format!("{family} requires --n")))
    }

    fn probability(&self) -> f64 {
        self.edge_probability.unwrap_or(0.3)
    }

    /// Independent stream for the `index`-th instance of a batch.
    fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }
}

/// A named family of generated instances.
pub trait GeneratorFamily: Send + Sync {
    fn name(&self) -> &'static str;

    /// The `index`-th instance for these parameters; deterministic.
    fn generate(&self, params: &FamilyParams, index: u64) -> Result<GadgetInstance>;
}

struct CycleFamily;

impl GeneratorFamily for CycleFamily {
    fn name(&self) -> &'static str {
        "cycle"
    }

    fn generate(&self, params: &FamilyParams, _index: u64) -> Result<GadgetInstance> {
        gadgets::cycle_instance(params.require_n(self.name())?)
    }
}

struct WielandtFamily;

impl GeneratorFamily for WielandtFamily {
    fn name(&self) -> &'static str {
        "wielandt"
    }

    fn generate(&self, params: &FamilyParams, _index: u64) -> Result<GadgetInstance> {
        gadgets::wielandt_instance(params.require_n(self.name())?)
    }
}

struct RandomFamily;

impl GeneratorFamily for RandomFamily {
    fn name(&self) -> &'static str {
        "random"
    }

    fn generate(&self, params: &FamilyParams, index: u64) -> Result<GadgetInstance> {
        let n = params.require_n(self.name())?;
        let p = params.probability();
        let mut inst = gadgets::random_instance(n, p, params.seed)?;
        if index > 0 {
            inst.graph = gadgets::random_digraph(&mut params.rng(index), n, p)?;
            inst.source = format!("n={n} p={p} seed={} stream={index}", params.seed);
        }
        Ok(inst)
    }
}

/// Shared by the two reachability gadgets: explicit base or random base.
fn st_gadget(
    params: &FamilyParams,
    index: u64,
    build: fn(&Digraph, usize, usize, usize) -> Result<GadgetInstance>,
) -> Result<GadgetInstance> {
    let (base, s, t, origin) = match &params.base {
        Some((g, s, t)) => (g.clone(), *s, *t, "input".to_string()),
        None => {
            let n = params.n.unwrap_or(6);
            let p = params.probability();
            let (g, s, t) = gadgets::random_st_instance(&mut params.rng(index), n, p)?;
            (g, s, t, format!("random n={n} p={p} seed={} stream={index}", params.seed))
        }
    };
    let norm = gadgets::normalize_streach(&base, s, t)?;
    let mut inst = build(&norm.graph, norm.s, norm.t, norm.t_prime)?;
    inst.special.insert("s'".into(), norm.s_prime);
    inst.source = format!("st-reachability {origin} s={s} t={t} reachable={}", base.reaches(s, t));
    Ok(inst)
}

struct PeriodGadgetFamily;

impl GeneratorFamily for PeriodGadgetFamily {
    fn name(&self) -> &'static str {
        "period-gadget"
    }

    fn generate(&self, params: &FamilyParams, index: u64) -> Result<GadgetInstance> {
        st_gadget(params, index, gadgets::gen_period_gadget)
    }
}

struct ExponentGadgetFamily;

impl GeneratorFamily for ExponentGadgetFamily {
    fn name(&self) -> &'static str {
        "exponent-gadget"
    }

    fn generate(&self, params: &FamilyParams, index: u64) -> Result<GadgetInstance> {
        st_gadget(params, index, gadgets::gen_exponent_gadget)
    }
}

struct OrdGadgetFamily;

impl GeneratorFamily for OrdGadgetFamily {
    fn name(&self) -> &'static str {
        "ord-gadget"
    }

    fn generate(&self, params: &FamilyParams, index: u64) -> Result<GadgetInstance> {
        let Some(order) = &params.order else {
            let len = params.n.unwrap_or(6);
            let mut inst = gadgets::random_ord_gadget(&mut params.rng(index), len)?;
            inst.source = format!("random path n={len} seed={} stream={index}; {}", params.seed, inst.source);
            return Ok(inst);
        };
        let s_name = params.s_name.as_deref().unwrap_or("s");
        let t_name = params.t_name.as_deref().unwrap_or("t");
        let id = |name: &str| order.iter().position(|x| x == name);
        for (i, name) in order.iter().enumerate() {
            if id(name) != Some(i) {
                return Err(Error::InvalidOrder(format!("vertex `{name}` repeats")));
            }
        }
        let (Some(s), Some(t)) = (id(s_name), id(t_name)) else {
            return Err(Error::InvalidOrder(format!("`{s_name}` and `{t_name}` must appear in the order")));
        };
        let pairs: Vec<(usize, usize)> = (1..order.len()).map(|i| (i - 1, i)).collect();
        let mut inst = gadgets::gen_ord_gadget(&pairs, s, t)?;
        inst.source = format!("order={} s={s_name} t={t_name}", order.join(","));
        Ok(inst)
    }
}

pub struct FamilyRegistry {
    families: Vec<Box<dyn GeneratorFamily>>,
}

impl Default for FamilyRegistry {
    fn default() -> Self {
        FamilyRegistry {
            families: vec![
                Box::new(CycleFamily),
                Box::new(WielandtFamily),
                Box::new(RandomFamily),
                Box::new(PeriodGadgetFamily),
                Box::new(OrdGadgetFamily),
                Box::new(ExponentGadgetFamily),
            ],
        }
    }
}

impl FamilyRegistry {
    pub fn register(&mut self, family: Box<dyn GeneratorFamily>) {
        self.families.retain(|f| f.name() != family.name());
        self.families.push(family);
    }

    pub fn get(&self, name: &str) -> Result<&dyn GeneratorFamily> {
        self.families
            .iter()
            .find(|f| f.name() == name)
            .map(|f| f.as_ref())
            .ok_or_else(|| unknown("family", name, self.names()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.families.iter().map(|f| f.name()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::Label;

    #[test]
    fn engines_by_name() {
        let reg = EngineRegistry::default();
        assert_eq!(reg.names(), vec!["lifted", "oracle"]);
        let w = gadgets::gen_wielandt(4).unwrap();
        for name in reg.names() {
            let sig = reg.get(name).unwrap().signature(&w);
            assert_eq!((sig.index, sig.period.to_u64()), (10, Some(1)), "{name}");
        }
        assert!(matches!(reg.get("balcer"), Err(Error::UnknownName { .. })));
    }

    #[test]
    fn registering_shadows_by_name() {
        struct Fake;
        impl SignatureEngine for Fake {
            fn name(&self) -> &'static str {
                "oracle"
            }
            fn description(&self) -> &'static str {
                "fake"
            }
            fn signature(&self, _: &Digraph) -> PowerSignature {
                PowerSignature { index: 0, period: PeriodResult::one() }
            }
        }
        let reg = EngineRegistry::default().with(Fake);
        assert_eq!(reg.names(), vec!["lifted", "oracle"]);
        assert_eq!(reg.get("oracle").unwrap().description(), "fake");
    }

    #[test]
    fn families_by_name() {
        let reg = FamilyRegistry::default();
        let params = FamilyParams { n: Some(5), ..Default::default() };
        let inst = reg.get("wielandt").unwrap().generate(&params, 0).unwrap();
        assert_eq!(inst.graph.edge_count(), 6);
        assert!(reg.get("nope").is_err());
        assert!(reg.get("cycle").unwrap().generate(&FamilyParams::default(), 0).is_err());
    }

    #[test]
    fn named_order_gadget() {
        let reg = FamilyRegistry::default();
        let order = ["v", "t", "s", "vp"].map(String::from).to_vec();
        let params = FamilyParams { order: Some(order), ..Default::default() };
        let inst = reg.get("ord-gadget").unwrap().generate(&params, 0).unwrap();
        assert_eq!(inst.labels, vec![Label::Period(1)]);
        assert!(inst.to_edgelist().contains("# label: period=1\n"));
        assert_eq!(inst.source, "order=v,t,s,vp s=s t=t");

        let bad = FamilyParams { order: Some(vec!["v".into(), "s".into(), "s".into()]), ..Default::default() };
        assert!(reg.get("ord-gadget").unwrap().generate(&bad, 0).is_err());
    }

    #[test]
    fn random_families_are_deterministic() {
        let reg = FamilyRegistry::default();
        let params = FamilyParams { n: Some(5), seed: 11, ..Default::default() };
        for name in ["random", "period-gadget", "exponent-gadget", "ord-gadget"] {
            let fam = reg.get(name).unwrap();
            let a = fam.generate(&params, 3).unwrap();
            assert_eq!(a, fam.generate(&params, 3).unwrap(), "{name}");
        }
    }
}
