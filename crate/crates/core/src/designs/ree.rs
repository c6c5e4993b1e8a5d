use std::collections::{BTreeSet, HashMap};

use crate::gf::FieldCtx;
use crate::matrep::{gen_sl2, proj_points, projectivize, MatrepError, PointIndex, ProjPoint};
use crate::permgroup::{Perm, PermGroup};

use super::{DesignError, IncidenceStructure};

/// R(3) on the 28 cosets of a Sylow-3 normalizer in PSL(2, 8).
#[derive(Clone, Debug)]
pub struct ReeUnital {
    pub space: IncidenceStructure,
    /// PSL(2, 8) on the cosets.
    pub socle: PermGroup,
    /// The socle extended by the field automorphism x ↦ x².
    pub extended: PermGroup,
    /// The Frobenius-invariant Sylow-3 subgroup whose normalizer is the
    /// stabilizer of coset 0, as permutations of PG(1, 8).
    pub sylow3: Vec<Perm>,
}

fn internal(msg: String) -> DesignError {
    DesignError::Internal(msg)
}

pub fn build_ree_unital_3() -> Result<ReeUnital, DesignError> {
    let ctx = FieldCtx::new(2, 3).map_err(MatrepError::from)?;
    let line = proj_points(&ctx, 2);
    let psl = projectivize(&ctx, &gen_sl2(&ctx), &line)?;
    let index = PointIndex::new(&line);
    let frob_images = line
        .iter()
        .map(|p| {
            let img: Vec<_> = p.coords().iter().map(|&c| ctx.frobenius(c, 1)).collect();
            index
                .position(&ProjPoint::normalize(&ctx, &img).expect("nonzero"))
                .expect("Frobenius permutes PG(1, 8)")
        })
        .collect();
    let frob = Perm::from_images(frob_images)?;
    let sigma = |g: &Perm| g.conjugate_by(&frob);

    let elems = psl.elements()?;
    if elems.len() != 504 {
        return Err(internal(format!("PSL(2,8) closure has {} elements", elems.len())));
    }
    let sylows: BTreeSet<Vec<Perm>> = elems
        .iter()
        .filter(|g| g.order() == 9)
        .map(|g| {
            let mut s: Vec<Perm> = (0..9).map(|i| g.pow(i)).collect();
            s.sort_unstable();
            s
        })
        .collect();
    if sylows.len() != 28 {
        return Err(internal(format!("{} Sylow 3-subgroups, expected 28", sylows.len())));
    }
    let sylow = sylows
        .into_iter()
        .find(|s| s.iter().all(|x| s.binary_search(&sigma(x)).is_ok()))
        .ok_or_else(|| internal("no Frobenius-invariant Sylow 3-subgroup".into()))?;
    let gen9 = sylow.iter().find(|x| x.order() == 9).expect("cyclic of order 9");
    let normalizer: Vec<Perm> = elems
        .iter()
        .filter(|g| sylow.binary_search(&gen9.conjugate_by(g)).is_ok())
        .cloned()
        .collect();
    if normalizer.len() != 18 {
        return Err(internal(format!("Sylow normalizer has order {}", normalizer.len())));
    }
    if normalizer.iter().any(|h| normalizer.binary_search(&sigma(h)).is_err()) {
        return Err(internal("Sylow normalizer is not Frobenius-invariant".into()));
    }

    // left cosets gH, numbered by their least element; the identity comes
    // first, so coset 0 is H itself
    let mut coset_of: HashMap<&Perm, u32> = HashMap::new();
    let mut reps: Vec<&Perm> = Vec::new();
    for g in elems {
        if coset_of.contains_key(g) {
            continue;
        }
        let c = reps.len() as u32;
        for h in &normalizer {
            let gh = g.compose(h);
            let key = elems.binary_search(&gh).map(|i| &elems[i]).expect("closed under products");
            coset_of.insert(key, c);
        }
        reps.push(g);
    }
    if reps.len() != 28 {
        return Err(internal(format!("{} cosets, expected 28", reps.len())));
    }
    let on_cosets = |f: &dyn Fn(&Perm) -> Perm| -> Result<Perm, DesignError> {
        let images = reps.iter().map(|r| coset_of[&f(r)]).collect();
        Ok(Perm::from_images(images)?)
    };
    let socle_gens = psl
        .generators()
        .iter()
        .map(|s| on_cosets(&|r: &Perm| s.compose(r)))
        .collect::<Result<Vec<_>, _>>()?;
    let frob28 = on_cosets(&|r: &Perm| sigma(r))?;
    let socle = PermGroup::new(28, socle_gens.clone())?;
    if socle.order() != 504 {
        return Err(internal(format!("coset action has order {}", socle.order())));
    }

    let mut lines = BTreeSet::new();
    let mut involutions = 0;
    for t in psl.involutions()? {
        involutions += 1;
        let fixed: Vec<u32> = on_cosets(&|r: &Perm| t.compose(r))?.fixed_points();
        if fixed.len() != 4 {
            return Err(internal(format!("involution fixes {} cosets", fixed.len())));
        }
        lines.insert(fixed);
    }
    if involutions != 63 || lines.len() != 63 {
        return Err(internal(format!(
            "{involutions} involutions with {} distinct fixed sets",
            lines.len()
        )));
    }
    let space = IncidenceStructure::new(28, lines.into_iter().collect())?;

    let mut ext_gens = socle_gens;
    ext_gens.push(frob28);
    let extended = PermGroup::new(28, ext_gens)?;
    if extended.order() != 1512 {
        return Err(internal(format!("extended group has order {}", extended.order())));
    }
    Ok(ReeUnital {
        space,
        socle,
        extended,
        sylow3: sylow,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::{check_flag_transitive, check_line_transitive, cnp_check, SpaceParams};

    #[test]
    fn ree_unital_structure() {
        let r = build_ree_unital_3().unwrap();
        assert!(r.space.is_linear_space().passed());
        assert_eq!(r.space.space_params().unwrap(), SpaceParams { b: 63, v: 28, k: 4, r: 9 });
        assert_eq!(r.space.significant_primes().unwrap(), vec![3]);
        assert_eq!(r.space.line_orbit_sizes(&r.socle).unwrap(), vec![63]);
        assert!(check_flag_transitive(&r.space, &r.extended).unwrap());
        assert!(check_line_transitive(&r.space, &r.extended).unwrap());
    }

    #[test]
    fn base_coset_stabilizer_is_the_sylow_normalizer() {
        let r = build_ree_unital_3().unwrap();
        let stab = r.socle.stabilizer(0).unwrap();
        assert_eq!(stab.order(), 18);
        let cnp = cnp_check(&r.space, &r.socle, 3).unwrap();
        assert!(cnp.holds);
        assert_eq!(cnp.normalizer_order, 18);
    }

    #[test]
    fn socle_is_flag_transitive() {
        let r = build_ree_unital_3().unwrap();
        assert_eq!(r.space.flag_orbit_sizes(&r.socle).unwrap(), vec![252]);
        // independent count: the stabilizer of coset 0 has order 18 and must be
        // transitive on the 9 lines through 0
        let stab = r.socle.stabilizer(0).unwrap();
        let through: Vec<Vec<u32>> = r.space.lines().iter().filter(|l| l.contains(&0)).cloned().collect();
        assert_eq!(through.len(), 9);
        let elems = stab.elements().unwrap();
        let mut images: Vec<Vec<u32>> = elems
            .iter()
            .map(|g| {
                let mut img: Vec<u32> = through[0].iter().map(|&x| g.apply(x)).collect();
                img.sort_unstable();
                img
            })
            .collect();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), 9);
    }

    #[test]
    fn sylow_is_frobenius_invariant_of_order_9() {
        let r = build_ree_unital_3().unwrap();
        assert_eq!(r.sylow3.len(), 9);
    }
}
