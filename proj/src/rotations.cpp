#include "sicwit/rotations.hpp"

#include <cmath>

namespace sicwit {

RVec axis_vector(int dim) {
  return RVec::Constant(dim * dim, 1.0 / dim);
}

RMat complement_basis(int dim) {
  // Gram-Schmidt of e_0 .. e_{m-2} against n. Every prefix is independent
  // because n has a nonzero last component.
  const int m = dim * dim;
  const RVec n = axis_vector(dim);
  RMat basis(m, m - 1);
  for (int i = 0; i < m - 1; ++i) {
    RVec v = RVec::Zero(m);
    v(i) = 1.0;
    v -= n.dot(v) * n;
    for (int j = 0; j < i; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    basis.col(i) = v / v.norm();
  }
  return basis;
}

double rotation_violation(const AxisRotation& r) {
  const int m = r.size();
  const RVec n = axis_vector(r.dim);
  const double orth =
      (r.matrix.transpose() * r.matrix - RMat::Identity(m, m))
          .cwiseAbs()
          .maxCoeff();
  const double axis = (r.matrix * n - r.sign * n).cwiseAbs().maxCoeff();
  return std::max(orth, axis);
}

AxisRotation identity_rotation(int dim) {
  if (dim < 2) throw DimensionError("identity_rotation: dim must be >= 2");
  return {dim, RMat::Identity(dim * dim, dim * dim), +1};
}

AxisRotation rotation_from_complement(int dim, const RMat& r, int sign) {
  const int m = dim * dim;
  if (r.rows() != m - 1 || r.cols() != m - 1)
    throw DimensionError("rotation_from_complement: block must be (d^2-1)^2");
  if ((r.transpose() * r - RMat::Identity(m - 1, m - 1)).cwiseAbs().maxCoeff() >
      1e-10)
    throw ValidationError("rotation_from_complement: block is not orthogonal");
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("rotation_from_complement: sign must be +-1");
  const RVec n = axis_vector(dim);
  const RMat v = complement_basis(dim);
  AxisRotation out;
  out.dim = dim;
  out.sign = sign;
  out.matrix = sign * (n * n.transpose()) + v * r * v.transpose();
  return out;
}

RMat extract_complement(const AxisRotation& rot) {
  const RMat v = complement_basis(rot.dim);
  return v.transpose() * rot.matrix * v;
}

AxisRotation random_axis_rotation(int dim, std::mt19937_64& rng, int sign) {
  if (dim < 2) throw DimensionError("random_axis_rotation: dim must be >= 2");
  const int m = dim * dim - 1;
  std::normal_distribution<double> gauss(0.0, 1.0);
  RMat g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<RMat> qr(g);
  RMat q = qr.householderQ();
  RMat rr = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < m; ++i)
    if (rr(i, i) < 0) q.col(i) = -q.col(i);
  int s = sign;
  if (s == 0) s = (rng() & 1) ? +1 : -1;
  return rotation_from_complement(dim, q, s);
}

AxisRotation random_axis_rotation(int dim, std::uint64_t seed, int sign) {
  std::mt19937_64 rng(seed);
  return random_axis_rotation(dim, rng, sign);
}

AxisRotation repair_rotation(const RMat& m, int dim) {
  const int sz = dim * dim;
  if (m.rows() != sz || m.cols() != sz)
    throw DimensionError("repair_rotation: matrix is not d^2 x d^2");
  // Polar factor, then force n to be an exact eigenvector by
  // re-orthogonalizing the complement block.
  Eigen::JacobiSVD<RMat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  RMat polar = svd.matrixU() * svd.matrixV().transpose();
  const RVec n = axis_vector(dim);
  const int s = (n.dot(polar * n) >= 0) ? +1 : -1;
  const RMat v = complement_basis(dim);
  RMat block = v.transpose() * polar * v;
  Eigen::JacobiSVD<RMat> svd2(block,
                              Eigen::ComputeFullU | Eigen::ComputeFullV);
  block = svd2.matrixU() * svd2.matrixV().transpose();
  return rotation_from_complement(dim, block, s);
}

AxisRotation load_rotation(const std::string& path, int dim, double tol,
                           bool repair) {
  const Mat raw = load_matrix(path);
  const int sz = dim * dim;
  if (raw.rows() != sz || raw.cols() != sz)
    throw DimensionError("load_rotation: expected a " + std::to_string(sz) +
                         "x" + std::to_string(sz) + " matrix");
  if (raw.imag().cwiseAbs().maxCoeff() > 0)
    throw ParseError("load_rotation: rotation entries must be real");
  const RMat m = raw.real();

  if (repair) {
    AxisRotation fixed = repair_rotation(m, dim);
    if (rotation_violation(fixed) > 1e-10)
      throw ValidationError("load_rotation: repair failed");
    return fixed;
  }

  const RVec n = axis_vector(dim);
  const int s = (n.dot(m * n) >= 0) ? +1 : -1;
  AxisRotation rot{dim, m, s};

  int worst_row = 0, worst_col = 0;
  double row_dev = 0.0, col_dev = 0.0;
  for (int i = 0; i < sz; ++i) {
    const double rd = std::abs(m.row(i).sum() - s);
    const double cd = std::abs(m.col(i).sum() - s);
    if (rd > row_dev) { row_dev = rd; worst_row = i; }
    if (cd > col_dev) { col_dev = cd; worst_col = i; }
  }
  if (rotation_violation(rot) > tol)
    throw ValidationError(
        "load_rotation: invariants violated beyond tol (worst row " +
        std::to_string(worst_row + 1) + " sum dev " + std::to_string(row_dev) +
        ", worst column " + std::to_string(worst_col + 1) + " sum dev " +
        std::to_string(col_dev) + ")");
  return rot;
}

}  // namespace sicwit
