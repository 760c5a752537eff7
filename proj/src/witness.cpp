#include "sicwit/witness.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace sicwit {

PositiveMapSpec make_map_spec(Povm povm, AxisRotation rotation) {
  if (povm.dim != rotation.dim)
    throw DimensionError("make_map_spec: POVM and rotation dimensions differ");
  return {std::move(povm), std::move(rotation)};
}

double witness_constant(PovmKind kind, int dim, double a) {
  if (kind == PovmKind::SIC) return 2.0 / (dim * (dim + 1.0));
  return (a * dim * dim + 1.0) / (dim * (dim + 1.0));
}

Mat apply_map(const PositiveMapSpec& spec, const Mat& x) {
  const int d = spec.dim();
  if (x.rows() != d || x.cols() != d)
    throw DimensionError("apply_map: operator dimension mismatch");
  const int n = d * d;
  const cplx tr = x.trace();

  Eigen::VectorXcd bracket(n);
  for (int l = 0; l < n; ++l)
    bracket(l) = (x * spec.povm.elements[l]).trace() - tr / double(n);

  Eigen::VectorXcd coeff = spec.rotation.matrix.cast<cplx>() * bracket;
  Mat out = Mat::Identity(d, d) * (tr / double(d));
  const double factor = (d + 1.0) / (d - 1.0);
  for (int k = 0; k < n; ++k)
    out -= factor * coeff(k) * spec.povm.elements[k];
  return out;
}

BallReport ball_check(const PositiveMapSpec& spec, int samples,
                      std::uint64_t seed) {
  const int d = spec.dim();
  BallReport rep;
  rep.bound = 1.0 / (d - 1.0);
  rep.max_purity = 0.0;
  rep.min_purity = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const Vec v = random_pure_state(d, rng).amplitudes;
    const Mat img = apply_map(spec, v * v.adjoint());
    const double purity = (img * img).trace().real();
    rep.max_purity = std::max(rep.max_purity, purity);
    rep.min_purity = std::min(rep.min_purity, purity);
    rep.max_trace_dev =
        std::max(rep.max_trace_dev, std::abs(img.trace() - cplx(1.0)));
    rep.max_herm_dev = std::max(rep.max_herm_dev,
                                (img - img.adjoint()).cwiseAbs().maxCoeff());
  }
  return rep;
}

WitnessOperator build_witness(const Povm& povm, const AxisRotation& rotation,
                              double validate_tol) {
  if (povm.dim != rotation.dim)
    throw DimensionError("build_witness: POVM and rotation dimensions differ");
  if (validate_tol < 1.0) {
    const PovmReport rep = validate_povm(povm, validate_tol);
    if (rep.max_violation > validate_tol)
      throw ValidationError("build_witness: POVM fails certification, "
                            "max violation " +
                            std::to_string(rep.max_violation));
  }
  const int d = povm.dim;
  const int n = d * d;
  WitnessOperator w;
  w.spec = {povm, rotation};
  w.c = witness_constant(povm.kind, d, povm.a);
  w.matrix = w.c * Mat::Identity(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const double o = rotation.matrix(k, l);
      if (o != 0.0)
        w.matrix -= o * tensor(povm.elements[l].conjugate(),
                               povm.elements[k]);
    }
  return w;
}

double evaluate(const WitnessOperator& w, const DensityMatrix& rho) {
  if (rho.dim() != w.dim() * w.dim())
    throw DimensionError("evaluate: state must live on the bipartite space");
  const cplx tr = (w.matrix * rho.op).trace();
  if (std::abs(tr.imag()) > 1e-10)
    throw ValidationError("evaluate: expectation has imaginary residual " +
                          std::to_string(tr.imag()));
  return tr.real();
}

ChoiReport choi_consistency(const PositiveMapSpec& spec) {
  const int d = spec.dim();
  const int n = d * d;
  Mat choi = Mat::Zero(n, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Mat unit = Mat::Zero(d, d);
      unit(i, j) = 1.0;
      choi += tensor(unit, apply_map(spec, unit));
    }
  choi *= (d - 1.0) / (d + 1.0);

  const WitnessOperator w = build_witness(spec.povm, spec.rotation, 1.0);
  const Mat delta = choi - w.matrix;
  const double kappa = delta.trace().real() / n;
  ChoiReport rep;
  rep.eq3_constant = w.c;
  rep.kappa = kappa;
  rep.choi_constant = w.c + kappa;
  rep.residual =
      (delta - kappa * Mat::Identity(n, n)).cwiseAbs().maxCoeff();
  return rep;
}

namespace {

// (I (x) <b|) W (I (x) |b>) and its partner for the see-saw.
Mat contract_b(const Mat& w, const Vec& b) {
  const int d = static_cast<int>(b.size());
  Mat out = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      cplx acc = 0.0;
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          acc += std::conj(b(k)) * w(i * d + k, j * d + l) * b(l);
      out(i, j) = acc;
    }
  return out;
}

Mat contract_a(const Mat& w, const Vec& a) {
  const int d = static_cast<int>(a.size());
  Mat out = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      cplx acc = 0.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          acc += std::conj(a(i)) * w(i * d + k, j * d + l) * a(j);
      out(k, l) = acc;
    }
  return out;
}

Vec min_eigvec(const Mat& herm) {
  Eigen::SelfAdjointEigenSolver<Mat> es((herm + herm.adjoint()) / 2.0);
  return es.eigenvectors().col(0);
}

}  // namespace

double min_product_expectation(const WitnessOperator& w, int restarts,
                               std::uint64_t seed) {
  const int d = w.dim();
  std::mt19937_64 rng(seed);
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Vec b = random_pure_state(d, rng).amplitudes;
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 500; ++it) {
      const Mat mb = contract_b(w.matrix, b);
      const Vec a = min_eigvec(mb);
      const Mat ma = contract_a(w.matrix, a);
      b = min_eigvec(ma);
      const double val = (contract_b(w.matrix, b) * (a * a.adjoint()))
                             .trace()
                             .real();
      if (std::abs(prev - val) <= 1e-12) {
        prev = val;
        break;
      }
      prev = val;
    }
    best = std::min(best, prev);
  }
  return best;
}

double min_eigenvalue(const WitnessOperator& w) {
  return eig_hermitian(w.matrix).values.minCoeff();
}

RMat witness_expectation_matrix(const Povm& povm, const DensityMatrix& rho) {
  const int d = povm.dim;
  if (rho.dim() != d * d)
    throw DimensionError(
        "witness_expectation_matrix: state must live on the bipartite space");
  const int n = d * d;
  RMat mmat(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const Mat kron = tensor(povm.elements[l].conjugate(), povm.elements[k]);
      // Tr(K rho) as an elementwise sum
      mmat(k, l) = kron.transpose().cwiseProduct(rho.op).sum().real();
    }
  return mmat;
}

OptimizedRotation optimize_rotation(const Povm& povm,
                                    const DensityMatrix& rho) {
  const int d = povm.dim;
  const RMat mmat = witness_expectation_matrix(povm, rho);
  const RVec n = axis_vector(d);
  const double axis_part = n.dot(mmat * n);
  const int sign = (axis_part >= 0) ? +1 : -1;
  const RMat v = complement_basis(d);
  const RMat block = v.transpose() * mmat * v;
  Eigen::JacobiSVD<RMat> svd(block,
                             Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RMat r = svd.matrixU() * svd.matrixV().transpose();
  const double c = witness_constant(povm.kind, d, povm.a);
  OptimizedRotation out;
  out.rotation = rotation_from_complement(d, r, sign);
  out.value =
      c - sign * axis_part - svd.singularValues().sum();
  return out;
}

Vec max_entangled_vector(int d) {
  Vec v = Vec::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(double(d));
  return v;
}

DensityMatrix max_entangled_state(int d) {
  const Vec v = max_entangled_vector(d);
  return {v * v.adjoint(), 1e-9};
}

DensityMatrix isotropic_state(int d, double alpha) {
  const int n = d * d;
  const Vec v = max_entangled_vector(d);
  Mat op = alpha * (v * v.adjoint()) +
           (1.0 - alpha) / n * Mat::Identity(n, n);
  return {op, 1e-9};
}

Vec bell_basis_vector(int d, int shift, int clock) {
  const Mat u = [&] {
    Mat m = Mat::Identity(d, d);
    const Mat x = weyl_shift(d), z = weyl_clock(d);
    for (int i = 0; i < shift; ++i) m = x * m;
    for (int i = 0; i < clock; ++i) m = z * m;
    return m;
  }();
  return tensor(u, Mat::Identity(d, d)) * max_entangled_vector(d);
}

DensityMatrix bell_diagonal_state(int d, double p) {
  const int n = d * d;
  Mat op = Mat::Zero(n, n);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      const Vec b = bell_basis_vector(d, j, k);
      const double weight = (j == 0 && k == 0) ? p : (1.0 - p) / (n - 1);
      op += weight * (b * b.adjoint());
    }
  return {op, 1e-9};
}

IsotropicScan scan_isotropic(const Povm& povm, const AxisRotation& rotation,
                             const std::vector<double>& alphas) {
  const WitnessOperator w = build_witness(povm, rotation);
  const int d = povm.dim;
  IsotropicScan scan;
  for (double a : alphas) {
    const double val = evaluate(w, isotropic_state(d, a));
    scan.rows.push_back({a, val, val < 0.0});
  }
  auto f = [&](double a) { return evaluate(w, isotropic_state(d, a)); };
  double lo = 0.0, hi = 1.0 - 1e-12;
  if (f(lo) * f(hi) > 0) {
    scan.threshold = std::numeric_limits<double>::quiet_NaN();
    return scan;
  }
  while (hi - lo > 1e-10) {
    const double mid = (lo + hi) / 2;
    if (f(lo) * f(mid) <= 0)
      hi = mid;
    else
      lo = mid;
  }
  scan.threshold = (lo + hi) / 2;
  return scan;
}

BellDiagonalScan scan_bell_diagonal(const Povm& povm,
                                    const AxisRotation& rotation,
                                    const std::vector<double>& ps) {
  const WitnessOperator w = build_witness(povm, rotation);
  const int d = povm.dim;
  auto f = [&](double p) { return evaluate(w, bell_diagonal_state(d, p)); };
  const double v0 = f(0.0), v1 = f(1.0), vh = f(0.5);
  if (std::abs(vh - (v0 + v1) / 2.0) > 1e-12)
    throw ValidationError(
        "scan_bell_diagonal: value is not affine in p (three-point check)");
  BellDiagonalScan scan;
  for (double p : ps) {
    const double val = v0 + (v1 - v0) * p;
    scan.rows.push_back({p, val, val < 0.0});
  }
  scan.affine_root = v0 / (v0 - v1);
  const double a = povm.a;
  scan.caption_value =
      (a * d * d + 1.0) / (a * d * d * (d + 1.0));
  scan.difference = scan.affine_root - scan.caption_value;
  return scan;
}

void save_witness(const WitnessOperator& w, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  char head[64];
  std::snprintf(head, sizeof(head), "witness d=%d c=%.17g", w.dim(), w.c);
  out << head << '\n' << serialize_matrix(w.matrix);
}

}  // namespace sicwit
