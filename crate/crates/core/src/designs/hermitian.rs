use crate::gf::FieldCtx;
use crate::matrep::{gen_su3, hermitian_field, hermitian_isotropic_points, proj_points, projectivize, ProjPoint};
use crate::permgroup::PermGroup;

use super::{DesignError, IncidenceStructure};

/// H(q) with PSU(3, q) acting on its points.
#[derive(Debug)]
pub struct HermitianUnital {
    pub q: u64,
    pub field: FieldCtx,
    pub points: Vec<ProjPoint>,
    pub space: IncidenceStructure,
    pub group: PermGroup,
    /// PG(2, q²) lines meeting the point set in exactly one point.
    pub tangents: usize,
}

fn on_line(ctx: &FieldCtx, line: &ProjPoint, pt: &ProjPoint) -> bool {
    line.coords()
        .iter()
        .zip(pt.coords())
        .fold(ctx.zero(), |acc, (&a, &x)| ctx.add(acc, ctx.mul(a, x)))
        .is_zero()
}

/// Isotropic points of the Hermitian form in PG(2, q²) with the secant
/// lines of the plane as blocks; `q ∈ {2, 3, 4}`.
pub fn build_hermitian_unital(q: u64) -> Result<HermitianUnital, DesignError> {
    if !(2..=4).contains(&q) {
        return Err(crate::matrep::MatrepError::UnsupportedQ(q).into());
    }
    let ctx = hermitian_field(q)?;
    let points = hermitian_isotropic_points(&ctx, q)?;
    let mut lines = Vec::new();
    let mut tangents = 0;
    for dual in proj_points(&ctx, 3) {
        let meet: Vec<u32> = points
            .iter()
            .enumerate()
            .filter(|(_, p)| on_line(&ctx, &dual, p))
            .map(|(i, _)| i as u32)
            .collect();
        match meet.len() {
            0 => {}
            1 => tangents += 1,
            n if n as u64 == q + 1 => lines.push(meet),
            n => {
                return Err(DesignError::Internal(format!(
                    "secant meets the unital in {n} points, expected {}",
                    q + 1
                )))
            }
        }
    }
    if tangents as u64 != q * q * q + 1 {
        return Err(DesignError::Internal(format!("{tangents} tangent lines")));
    }
    let space = IncidenceStructure::from_unsorted(points.len(), lines)?;
    let group = projectivize(&ctx, &gen_su3(&ctx, q)?, &points)?;
    Ok(HermitianUnital {
        q,
        field: ctx,
        points,
        space,
        group,
        tangents,
    })
}
