//! Kronecker products, vec and commutation permutations.

use exrot::tensor::{commutation_apply, delta2, kron, symmetrize, vec, DenseMatrix, IndexPermutation};

fn main() -> exrot::Result<()> {
    let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]])?;
    let b = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])?;
    let ab = kron(&a, &b);
    println!("A ⊗ B is {}x{}", ab.rows(), ab.cols());

    // vec(ABC) = (Cᵀ ⊗ A) vec(B)
    let c = DenseMatrix::from_rows(&[vec![2.0, 0.0], vec![1.0, 1.0]])?;
    let lhs = vec(&a.matmul(&b)?.matmul(&c)?);
    let rhs = kron(&c.transpose(), &a).matmul(&vec(&b))?;
    println!("vec identity residual {:.1e}", lhs.sub(&rhs)?.max_abs());

    // swapping the factors of x ⊗ y gives y ⊗ x
    let x = DenseMatrix::column(vec![1.0, 2.0, 3.0]);
    let y = DenseMatrix::column(vec![5.0, 7.0]);
    let p = IndexPermutation::new(vec![3, 2], vec![1, 0])?;
    let swapped = commutation_apply(&p, &kron(&x, &y))?;
    println!("K(x⊗y) = {:?}", swapped.as_slice());
    println!("y⊗x    = {:?}", kron(&y, &x).as_slice());

    let s = symmetrize(&kron(&x, &x.scale(0.0).add(&DenseMatrix::column(vec![1.0, 0.0, 0.0]))?), 3, 2)?;
    println!("sym(x ⊗ e1) = {:?}", s.as_slice());
    println!("δ₂(3) = {:?}", delta2(3).as_slice());
    Ok(())
}
