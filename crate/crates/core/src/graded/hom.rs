//! Sign-carrying constructions on maps: tensor products of maps, shifts,
//! duals, pairings and evaluation of tensors of functionals.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::map::all_words;
use crate::graded::perm::{sign_of, Permutation};
use crate::graded::tensor::{permute_basis_word, word_degree};
use crate::graded::{GradedSpace, MultiMap, Space, Tensor, Vector, Word, Q};

/// `τ(σ)` on `V_1 ⊗ … ⊗ V_n` as an explicit map.
pub fn tau(perm: &Permutation, spaces: &[Space]) -> Result<MultiMap> {
    if perm.len() != spaces.len() {
        return Err(Error::Dimension("permutation size differs from the number of factors".into()));
    }
    let codomain = perm.permute_slice(spaces);
    let mut m = MultiMap::zero(spaces.to_vec(), codomain, 0);
    for w in all_words(spaces) {
        let (v, s) = permute_basis_word(perm, spaces, &w);
        m.push(w, v, Q::from_integer(s.into()));
    }
    Ok(m)
}

fn check_unary(f: &MultiMap, name: &str) -> Result<()> {
    if f.arity() != 1 || f.codomain().len() != 1 {
        return Err(Error::Dimension(format!("{name} must be a map between single spaces")));
    }
    Ok(())
}

/// `Λ(f ⊗ g)`, the map `v ⊗ w ↦ (-1)^{|g||v|} f(v) ⊗ g(w)`.
pub fn tensor_of_maps(f: &MultiMap, g: &MultiMap) -> Result<MultiMap> {
    check_unary(f, "f")?;
    check_unary(g, "g")?;
    let domain = vec![f.domain()[0].clone(), g.domain()[0].clone()];
    let codomain = vec![f.codomain()[0].clone(), g.codomain()[0].clone()];
    let mut out = MultiMap::zero(domain, codomain, f.degree() + g.degree());
    let g_odd = g.degree() & 1 != 0;
    for (v, fv) in f.entries() {
        let flip = g_odd && f.input_degree(v) & 1 != 0;
        for (w, gw) in g.entries() {
            let input: Word = Word::from_slice(&[v[0], w[0]]);
            for (a, x) in fv {
                for (b, y) in gw {
                    let c = x * y;
                    out.push(
                        input.clone(),
                        Word::from_slice(&[a[0], b[0]]),
                        if flip { -c } else { c },
                    );
                }
            }
        }
    }
    Ok(out)
}

/// `f[m]` between `V[m]` and `W[m]`: the same entries multiplied by
/// `(-1)^{m|f|}`.
pub fn shift_map(f: &MultiMap, m: i64) -> Result<MultiMap> {
    check_unary(f, "f")?;
    let domain = shifted(&f.domain()[0], m);
    let codomain = shifted(&f.codomain()[0], m);
    let scale = Q::from_integer(sign_of(m * f.degree()).into());
    f.scaled(&scale).reinterpret(vec![domain], vec![codomain], f.degree())
}

/// Shifts a space, undoing the symbol decoration when shifting back.
fn shifted(v: &Space, m: i64) -> Space {
    if m == 0 {
        return v.clone();
    }
    let basis = v
        .basis()
        .iter()
        .map(|b| {
            let (stem, prior) = split_shift(&b.symbol);
            let total = prior + m;
            let symbol = if total == 0 {
                stem.to_string()
            } else {
                format!("{stem}[{total}]")
            };
            crate::graded::BasisElement::new(symbol, b.degree - m)
        })
        .collect();
    GradedSpace::new(basis).expect("shift keeps symbols distinct").into_shared()
}

fn split_shift(symbol: &str) -> (&str, i64) {
    if let Some(open) = symbol.rfind('[') {
        if symbol.ends_with(']') {
            if let Ok(k) = symbol[open + 1..symbol.len() - 1].parse::<i64>() {
                return (&symbol[..open], k);
            }
        }
    }
    (symbol, 0)
}

/// `(f_1 ⊗ … ⊗ f_n)(v_1 ⊗ … ⊗ v_n) = (-1)^{Σ_{i<j} |f_j||v_i|} Π f_i(v_i)`.
///
/// Each `f_i` is a vector of the dual of the space of `v_i`, in the dual
/// basis. All arguments must be homogeneous.
pub fn apply_functionals(functionals: &[Vector], vectors: &[Vector]) -> Result<Q> {
    if functionals.len() != vectors.len() {
        return Err(Error::Dimension(format!(
            "{} functionals against {} vectors",
            functionals.len(),
            vectors.len()
        )));
    }
    let mut fdeg = Vec::with_capacity(functionals.len());
    let mut vdeg = Vec::with_capacity(vectors.len());
    for (i, (f, v)) in functionals.iter().zip(vectors).enumerate() {
        if f.arity() != 1 || v.arity() != 1 {
            return Err(Error::Dimension(format!("slot {i} is not a vector")));
        }
        let (fs, vs) = (&f.factors()[0], &v.factors()[0]);
        let dual_ok = fs.dim() == vs.dim()
            && (0..fs.dim()).all(|k| fs.degree(k) == -vs.degree(k));
        if !dual_ok {
            return Err(Error::SpaceMismatch(format!(
                "functional {i} does not live in the dual of vector {i}'s space"
            )));
        }
        fdeg.push(f.homogeneous_degree()?);
        vdeg.push(v.homogeneous_degree()?);
    }
    let mut value = Q::one();
    for (f, v) in functionals.iter().zip(vectors) {
        let mut x = Q::zero();
        for (w, c) in f.terms() {
            x += c * v.coeff(w);
        }
        if x.is_zero() {
            return Ok(Q::zero());
        }
        value *= x;
    }
    let mut e = 0;
    for j in 0..functionals.len() {
        for i in 0..j {
            e += fdeg[j].unwrap_or(0) * vdeg[i].unwrap_or(0);
        }
    }
    Ok(if sign_of(e) < 0 { -value } else { value })
}

/// The pairing `λ: V_1# ⊗ … ⊗ V_n# → (V_1 ⊗ … ⊗ V_n)#` evaluated on basis
/// words: `λ(e_u*)(e_v) = δ_{uv} (-1)^{Σ_{i<j} |e_{u_i}||e_{u_j}|}`.
pub fn dual_pairing_sign(spaces: &[Space], word: &[usize]) -> i32 {
    let mut e = 0i64;
    let mut prefix = 0i64;
    for (s, &i) in spaces.iter().zip(word) {
        let d = s.degree(i);
        e += prefix * d;
        prefix += d;
    }
    sign_of(e)
}

/// `f#: W# → V#`, `f#(h) = (-1)^{|f||h|} h ∘ f`, in dual bases.
pub fn dual_map(f: &MultiMap) -> Result<MultiMap> {
    check_unary(f, "f")?;
    let v = f.domain()[0].clone();
    let w = f.codomain()[0].clone();
    let vd = v.dual().into_shared();
    let wd = w.dual().into_shared();
    let mut out = MultiMap::zero(vec![wd], vec![vd], f.degree());
    for (x, img) in f.entries() {
        for (y, c) in img {
            // f(e_x) has coefficient c on e_y, so (e_y* ∘ f)(e_x) = c
            let h_deg = -w.degree(y[0]);
            let s = sign_of(f.degree() * h_deg);
            out.push(y.clone(), x.clone(), if s < 0 { -c } else { c.clone() });
        }
    }
    Ok(out)
}

/// Degree of a basis word of a tensor product of spaces.
pub fn degree_of(spaces: &[Space], word: &[usize]) -> i64 {
    word_degree(spaces, word)
}

/// Tensor power `V^{⊗n}` as a list of factors.
pub fn power(space: &Space, n: usize) -> Vec<Space> {
    vec![space.clone(); n]
}

pub fn basis_vector(space: &Space, i: usize) -> Vector {
    Tensor::basis(vec![space.clone()], &[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::q;

    fn v() -> Space {
        GradedSpace::from_pairs(&[("x", 0), ("y", 1)]).unwrap().into_shared()
    }

    fn odd_map(v: &Space) -> MultiMap {
        let mut g = MultiMap::zero(vec![v.clone()], vec![v.clone()], 1);
        g.add_entry(&[0], &[1], q(1)).unwrap();
        g
    }

    #[test]
    fn identity_tensor_identity() {
        let v = v();
        let id = MultiMap::identity(v.clone());
        assert_eq!(
            tensor_of_maps(&id, &id).unwrap(),
            MultiMap::identity_on(vec![v.clone(), v])
        );
    }

    #[test]
    fn odd_map_past_odd_vector() {
        let v = v();
        let id = MultiMap::identity(v.clone());
        let g = odd_map(&v);
        let t = tensor_of_maps(&id, &g).unwrap();
        assert_eq!(t.coeff(&[1, 0], &[1, 1]), q(-1));
        assert_eq!(t.coeff(&[0, 0], &[0, 1]), q(1));
    }

    #[test]
    fn shift_signs() {
        let v = v();
        let g = odd_map(&v);
        let even = shift_map(&g, 2).unwrap();
        assert_eq!(even.coeff(&[0], &[1]), q(1));
        let odd = shift_map(&g, 1).unwrap();
        assert_eq!(odd.coeff(&[0], &[1]), q(-1));
        let back = shift_map(&odd, -1).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn functionals_on_dual_basis() {
        let v = GradedSpace::from_pairs(&[("e1", 0), ("e2", 0)]).unwrap().into_shared();
        let vd = v.dual().into_shared();
        let f1 = basis_vector(&vd, 0);
        let f2 = basis_vector(&vd, 1);
        let e1 = basis_vector(&v, 0);
        let e2 = basis_vector(&v, 1);
        assert_eq!(apply_functionals(&[f1.clone(), f2.clone()], &[e1.clone(), e2.clone()]).unwrap(), q(1));
        assert_eq!(apply_functionals(&[f2, f1], &[e1, e2]).unwrap(), q(0));
    }

    #[test]
    fn functional_space_is_checked() {
        let v = v();
        let e = basis_vector(&v, 1);
        assert!(matches!(
            apply_functionals(&[e.clone()], &[e]),
            Err(Error::SpaceMismatch(_))
        ));
    }
}
