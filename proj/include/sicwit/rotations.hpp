#pragma once

#include <string>

#include "sicwit/operator_core.hpp"

namespace sicwit {

// Orthogonal matrix on R^{d^2} with the axis n = (1,...,1)/d as a +-1
// eigenvector; equivalently all row and column sums equal the sign.
struct AxisRotation {
  int dim = 0;        // the qudit dimension d; matrix is d^2 x d^2
  RMat matrix;
  int sign = +1;      // O n = sign * n

  int size() const { return dim * dim; }
};

RVec axis_vector(int dim);             // d^2 entries, each 1/d
RMat complement_basis(int dim);        // d^2 x (d^2-1), orthonormal, _|_ n

// Worst deviation over O^T O = I and O n = s n.
double rotation_violation(const AxisRotation& r);

AxisRotation identity_rotation(int dim);

// Haar-random orthogonal block on the complement of n, embedded.
// sign = +1, -1, or 0 for a random sign.
AxisRotation random_axis_rotation(int dim, std::uint64_t seed, int sign = +1);
AxisRotation random_axis_rotation(int dim, std::mt19937_64& rng, int sign = +1);

// O = s n n^T + V r V^T with V the deterministic complement basis.
AxisRotation rotation_from_complement(int dim, const RMat& r, int sign);
RMat extract_complement(const AxisRotation& rot);

// Loads a d^2 x d^2 real matrix and validates the invariants at `tol`.
// With repair=true the matrix is re-orthogonalized (polar decomposition)
// and n is made an exact eigenvector before validation at 1e-10.
AxisRotation load_rotation(const std::string& path, int dim, double tol,
                           bool repair = false);

AxisRotation repair_rotation(const RMat& m, int dim);

}  // namespace sicwit
