//! Finite-group machinery on four letters: the embedding of the symmetric
//! group into SO(3) through the cube's diagonals, the tetrahedral action on
//! R^3, the coordinate-permutation action on R^4, the signed edge action on
//! R^6 with its invariant split V + W, subgroup classification, fixed
//! points, and numerical equivariance certification.

use crate::rotations::{Mat3, Rotation, Vec3};
use nalgebra::{DMatrix, DVector, SMatrix, SVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub type Vec6 = SVector<f64, 6>;
pub type Mat6 = SMatrix<f64, 6, 6>;

#[derive(Debug, Error)]
pub enum GroupsError {
    #[error("map output has dimension {map}, action expects {action}")]
    DimensionMismatch { map: usize, action: usize },
}

/// A permutation of the four letters `{0, 1, 2, 3}` (displayed 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: [usize; 4],
}

impl Permutation {
    pub fn identity() -> Self {
        Permutation {
            images: [0, 1, 2, 3],
        }
    }

    pub fn from_images(images: [usize; 4]) -> Option<Self> {
        let mut seen = [false; 4];
        for &i in &images {
            if i > 3 || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Permutation { images })
    }

    pub fn transposition(i: usize, j: usize) -> Self {
        let mut images = [0, 1, 2, 3];
        images.swap(i, j);
        Permutation { images }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> [usize; 4] {
        self.images
    }

    /// `(self * other)(i) = self(other(i))`: `other` acts first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let mut images = [0; 4];
        for (slot, &through) in images.iter_mut().zip(other.images.iter()) {
            *slot = self.images[through];
        }
        Permutation { images }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = [0; 4];
        for (i, &image) in self.images.iter().enumerate() {
            images[image] = i;
        }
        Permutation { images }
    }

    pub fn sign(&self) -> f64 {
        let mut inversions = 0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if self.images[i] > self.images[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn is_even(&self) -> bool {
        self.sign() > 0.0
    }

    pub fn order(&self) -> usize {
        let mut p = *self;
        let mut n = 1;
        while p != Permutation::identity() {
            p = p.compose(self);
            n += 1;
        }
        n
    }

    /// All 24 permutations in lexicographic image order.
    pub fn all() -> Vec<Permutation> {
        let mut out = Vec::with_capacity(24);
        let mut letters = [0, 1, 2, 3];
        permute_rec(&mut letters, 0, &mut out);
        out.sort();
        out
    }
}

fn permute_rec(letters: &mut [usize; 4], k: usize, out: &mut Vec<Permutation>) {
    if k == 4 {
        out.push(Permutation { images: *letters });
        return;
    }
    for i in k..4 {
        letters.swap(k, i);
        permute_rec(letters, k + 1, out);
        letters.swap(k, i);
    }
}

impl std::fmt::Display for Permutation {
    /// Disjoint cycle notation on the letters 1..4.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut seen = [false; 4];
        let mut wrote = false;
        for start in 0..4 {
            if seen[start] || self.images[start] == start {
                seen[start] = true;
                continue;
            }
            write!(f, "(")?;
            let mut i = start;
            loop {
                seen[i] = true;
                write!(f, "{}", i + 1)?;
                i = self.images[i];
                if i == start {
                    break;
                }
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "e")?;
        }
        Ok(())
    }
}

/// Unit vertex directions of the regular tetrahedron inscribed in the unit
/// sphere, chosen as alternating cube diagonals.
pub fn tetra_vertices() -> [Vec3; 4] {
    let s = 1.0 / 3.0f64.sqrt();
    [
        Vec3::new(s, s, s),
        Vec3::new(s, -s, -s),
        Vec3::new(-s, s, -s),
        Vec3::new(-s, -s, s),
    ]
}

/// The orthogonal map permuting the tetrahedron vertices as `sigma`:
/// `T v_i = v_{sigma(i)}`, with determinant equal to the permutation sign.
pub fn tetra_action(sigma: &Permutation) -> Mat3 {
    let v = tetra_vertices();
    let mut basis = Mat3::zeros();
    let mut image = Mat3::zeros();
    for col in 0..3 {
        basis.set_column(col, &v[col]);
        image.set_column(col, &v[sigma.apply(col)]);
    }
    image
        * basis
            .try_inverse()
            .expect("tetra vertex basis is invertible")
}

/// The rotation group embedding: for even permutations the orthogonal
/// extension of the vertex permutation, for odd ones its negative. Always
/// a rotation.
pub fn iota(sigma: &Permutation) -> Rotation {
    let m = tetra_action(sigma) * sigma.sign();
    Rotation::from_matrix(&m)
}

/// The 24 rotations `iota(sigma)`, which form the rotation group of the
/// cube whose diagonals are the tetrahedron directions.
pub fn rotation_group() -> Vec<Rotation> {
    Permutation::all().iter().map(iota).collect()
}

/// Index pairs `(i, j)` with `i < j` for the basis `e_ij` of R^6, in the
/// fixed order `(12, 13, 14, 23, 24, 34)` (0-based here).
pub const EDGE_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn edge_index(i: usize, j: usize) -> (usize, f64) {
    if i < j {
        (EDGE_PAIRS.iter().position(|&p| p == (i, j)).unwrap(), 1.0)
    } else {
        (EDGE_PAIRS.iter().position(|&p| p == (j, i)).unwrap(), -1.0)
    }
}

/// The signed edge action on R^6:
/// `tau6(sigma) e_ij = sign(sigma) e_{sigma(i) sigma(j)}` with the
/// convention `e_ji = -e_ij`.
pub fn tau6(sigma: &Permutation) -> Mat6 {
    let mut m = Mat6::zeros();
    let sign = sigma.sign();
    for (col, &(i, j)) in EDGE_PAIRS.iter().enumerate() {
        let (row, flip) = edge_index(sigma.apply(i), sigma.apply(j));
        m[(row, col)] = sign * flip;
    }
    m
}

/// A finite-dimensional orthogonal representation of the permutation group,
/// presented as explicit matrices.
pub trait GroupAction: Sync {
    fn dim(&self) -> usize;
    fn matrix(&self, sigma: &Permutation) -> DMatrix<f64>;

    /// Max deviation of the homomorphism property over all 576 pairs.
    fn homomorphism_deviation(&self) -> f64 {
        let perms = Permutation::all();
        let mats: Vec<DMatrix<f64>> = perms.iter().map(|p| self.matrix(p)).collect();
        let mut worst: f64 = 0.0;
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                let pq = p.compose(q);
                let k = perms.iter().position(|r| *r == pq).unwrap();
                worst = worst.max((&mats[i] * &mats[j] - &mats[k]).norm());
            }
        }
        worst
    }
}

/// Tetrahedral action on R^3 (determinant = permutation sign).
pub struct TetraAction;

impl GroupAction for TetraAction {
    fn dim(&self) -> usize {
        3
    }
    fn matrix(&self, sigma: &Permutation) -> DMatrix<f64> {
        let m = tetra_action(sigma);
        DMatrix::from_fn(3, 3, |i, j| m[(i, j)])
    }
}

/// Coordinate permutation on R^4: basis vector `e_k` goes to `e_{sigma(k)}`.
pub struct PermutationAction;

impl GroupAction for PermutationAction {
    fn dim(&self) -> usize {
        4
    }
    fn matrix(&self, sigma: &Permutation) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(4, 4);
        for k in 0..4 {
            m[(sigma.apply(k), k)] = 1.0;
        }
        m
    }
}

/// The signed edge action on R^6.
pub struct Tau6Action;

impl GroupAction for Tau6Action {
    fn dim(&self) -> usize {
        6
    }
    fn matrix(&self, sigma: &Permutation) -> DMatrix<f64> {
        let m = tau6(sigma);
        DMatrix::from_fn(6, 6, |i, j| m[(i, j)])
    }
}

/// A conjugacy class of subgroups.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub label: &'static str,
    /// Elements of one representative subgroup.
    pub elements: Vec<Permutation>,
    /// A small generating set of the representative.
    pub generators: Vec<Permutation>,
    /// Number of subgroups in the class.
    pub class_size: usize,
}

impl SubgroupClass {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

fn closure(generators: &[Permutation]) -> Vec<Permutation> {
    let mut elems: Vec<Permutation> = vec![Permutation::identity()];
    let mut frontier: Vec<Permutation> = generators.to_vec();
    while let Some(g) = frontier.pop() {
        if elems.contains(&g) {
            continue;
        }
        elems.push(g);
        let snapshot = elems.clone();
        for h in &snapshot {
            frontier.push(g.compose(h));
            frontier.push(h.compose(&g));
        }
    }
    elems.sort();
    elems
}

fn label_for(elements: &[Permutation]) -> &'static str {
    match elements.len() {
        1 => "C1",
        2 => "C2",
        3 => "C3",
        4 => {
            if elements.iter().any(|p| p.order() == 4) {
                "C4"
            } else {
                "D2"
            }
        }
        6 => "D3",
        8 => "D4",
        12 => "A4",
        24 => "S4",
        _ => unreachable!("no subgroup of the 4-letter symmetric group has this order"),
    }
}

/// The eleven conjugacy classes of subgroups, ordered by subgroup order and
/// then by canonical representative. Every subgroup here is generated by at
/// most two elements, so brute-force closure over element pairs finds all of
/// them without any reference tables.
pub fn subgroup_classes() -> Vec<SubgroupClass> {
    let perms = Permutation::all();
    let mut subgroups: Vec<Vec<Permutation>> = Vec::new();
    let push_unique = |g: Vec<Permutation>, store: &mut Vec<Vec<Permutation>>| {
        if !store.contains(&g) {
            store.push(g);
        }
    };
    for p in &perms {
        push_unique(closure(&[*p]), &mut subgroups);
        for q in &perms {
            push_unique(closure(&[*p, *q]), &mut subgroups);
        }
    }

    // Bucket by conjugacy: canonical form is the lexicographically smallest
    // conjugate element list.
    let canonical = |h: &Vec<Permutation>| -> Vec<Permutation> {
        let mut best: Option<Vec<Permutation>> = None;
        for t in &perms {
            let tinv = t.inverse();
            let mut conj: Vec<Permutation> =
                h.iter().map(|g| t.compose(g).compose(&tinv)).collect();
            conj.sort();
            if best.as_ref().is_none_or(|b| &conj < b) {
                best = Some(conj);
            }
        }
        best.unwrap()
    };

    let mut classes: Vec<(Vec<Permutation>, usize)> = Vec::new();
    for h in &subgroups {
        let c = canonical(h);
        match classes.iter_mut().find(|(rep, _)| *rep == c) {
            Some((_, count)) => *count += 1,
            None => classes.push((c, 1)),
        }
    }
    classes.sort_by(|a, b| {
        (a.0.len(), label_rank(label_for(&a.0)), a.0.clone()).cmp(&(
            b.0.len(),
            label_rank(label_for(&b.0)),
            b.0.clone(),
        ))
    });

    classes
        .into_iter()
        .map(|(elements, class_size)| {
            let generators = find_generators(&elements);
            SubgroupClass {
                label: label_for(&elements),
                elements,
                generators,
                class_size,
            }
        })
        .collect()
}

fn label_rank(label: &str) -> usize {
    // cyclic before dihedral at equal order
    match label {
        "C1" | "C2" | "C3" | "C4" => 0,
        _ => 1,
    }
}

fn find_generators(elements: &[Permutation]) -> Vec<Permutation> {
    for g in elements {
        if closure(&[*g]) == elements {
            return vec![*g];
        }
    }
    for g in elements {
        for h in elements {
            if closure(&[*g, *h]) == elements {
                return vec![*g, *h];
            }
        }
    }
    elements.to_vec()
}

/// Orthonormal bases of the invariant split of R^6 under the signed edge
/// action, plus the raw spanning vectors of each side.
#[derive(Clone, Debug)]
pub struct VwDecomposition {
    pub v_basis: [Vec6; 3],
    pub w_basis: [Vec6; 3],
    /// The four spanning vectors `e_i1 + e_i2 + e_i3` style sums (any three
    /// span V; they sum to zero).
    pub v_span: [Vec6; 4],
    /// The four spanning vectors of W, permuted faithfully by the action.
    pub w_span: [Vec6; 4],
}

/// The invariant 3-spaces of the signed edge action: V collects the
/// "gradient" edge patterns of the four vertices, W is its orthogonal
/// complement.
pub fn vw_decomposition() -> VwDecomposition {
    // coordinates in the order (12, 13, 14, 23, 24, 34)
    let v_span = [
        Vec6::from_row_slice(&[1.0, 1.0, 1.0, 0.0, 0.0, 0.0]),
        Vec6::from_row_slice(&[-1.0, 0.0, 0.0, 1.0, 1.0, 0.0]),
        Vec6::from_row_slice(&[0.0, -1.0, 0.0, -1.0, 0.0, 1.0]),
        Vec6::from_row_slice(&[0.0, 0.0, -1.0, 0.0, -1.0, -1.0]),
    ];
    let w_span = [
        Vec6::from_row_slice(&[0.0, 0.0, 0.0, 1.0, -1.0, 1.0]),
        Vec6::from_row_slice(&[0.0, -1.0, 1.0, 0.0, 0.0, -1.0]),
        Vec6::from_row_slice(&[1.0, 0.0, -1.0, 0.0, 1.0, 0.0]),
        Vec6::from_row_slice(&[-1.0, 1.0, 0.0, -1.0, 0.0, 0.0]),
    ];
    let v_basis = orthonormalize([v_span[0], v_span[1], v_span[2]]);
    let w_basis = orthonormalize([w_span[0], w_span[1], w_span[2]]);
    VwDecomposition {
        v_basis,
        w_basis,
        v_span,
        w_span,
    }
}

fn orthonormalize(vs: [Vec6; 3]) -> [Vec6; 3] {
    let mut out = vs;
    for k in 0..3 {
        for j in 0..k {
            let prev = out[j];
            let d = out[k].dot(&prev);
            out[k] -= prev * d;
        }
        out[k] = out[k].normalize();
    }
    out
}

/// A common unit fixed vector of the tetrahedral action restricted to the
/// given elements, or `None` when the joint fixed space is trivial. Found
/// as the intersection of the eigenvalue-1 eigenspaces.
pub fn fixed_point(subgroup: &[Permutation]) -> Option<Vec3> {
    let rows = 3 * subgroup.len().max(1);
    let mut m = DMatrix::<f64>::zeros(rows.max(3), 3);
    for (k, sigma) in subgroup.iter().enumerate() {
        let t = tetra_action(sigma) - Mat3::identity();
        for i in 0..3 {
            for j in 0..3 {
                m[(3 * k + i, j)] = t[(i, j)];
            }
        }
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("svd requested v_t");
    let smax = svd.singular_values[0];
    let mut fixed: Option<Vec3> = None;
    for k in 0..3 {
        let s = svd.singular_values[k];
        if smax <= 1e-12 || s <= 1e-9 * smax {
            let x = Vec3::new(v_t[(k, 0)], v_t[(k, 1)], v_t[(k, 2)]);
            fixed = Some(x);
            break; // deterministic: first nullspace direction
        }
    }
    fixed.map(|x| {
        // canonical sign: largest-magnitude component positive
        let mut idx = 0;
        for i in 1..3 {
            if x[i].abs() > x[idx].abs() {
                idx = i;
            }
        }
        if x[idx] < 0.0 {
            -x.normalize()
        } else {
            x.normalize()
        }
    })
}

/// Certifies equivariance of `map` between right multiplication by the
/// embedded group on SO(3) and the given representation: returns
/// `max |map(A * iota(sigma^-1)) - action(sigma) map(A)|` over `samples`
/// Haar-random rotations and all 24 permutations. Right multiplication
/// composes contravariantly, hence the inverse in the argument.
pub fn check_equivariance<F>(
    map: F,
    action: &dyn GroupAction,
    samples: usize,
    seed: u64,
) -> Result<f64, GroupsError>
where
    F: Fn(&Rotation) -> DVector<f64>,
{
    let probe = map(&Rotation::identity());
    if probe.len() != action.dim() {
        return Err(GroupsError::DimensionMismatch {
            map: probe.len(),
            action: action.dim(),
        });
    }
    let perms = Permutation::all();
    let mats: Vec<DMatrix<f64>> = perms.iter().map(|p| action.matrix(p)).collect();
    let rotations: Vec<Rotation> = perms.iter().map(|p| iota(&p.inverse())).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let a = Rotation::sample_uniform(&mut rng);
        let fa = map(&a);
        for (k, _) in perms.iter().enumerate() {
            let lhs = map(&a.compose(&rotations[k]));
            let rhs = &mats[k] * &fa;
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst)
}

/// Verifies the section identity for the frame maps `s_i(A) = i-th row of
/// A's matrix` (equivalently `A^-1 e_i`): for every rotation `g` in the
/// even-permutation image, `s_i(A g) = g^-1 s_i(A)` exactly. Returns the
/// max deviation over `samples` random rotations.
pub fn frame_sections_check(samples: usize, seed: u64) -> f64 {
    let even: Vec<Rotation> = Permutation::all()
        .iter()
        .filter(|p| p.is_even())
        .map(iota)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let a = Rotation::sample_uniform(&mut rng);
        let ma = a.matrix();
        for g in &even {
            let ag = a.compose(g).matrix();
            let ginv = g.inverse().matrix();
            for i in 0..3 {
                let lhs: Vec3 = ag.row(i).transpose();
                let rhs: Vec3 = ginv * ma.row(i).transpose();
                worst = worst.max((lhs - rhs).norm());
            }
        }
    }
    worst
}
