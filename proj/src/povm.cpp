#include "sicwit/povm.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace sicwit {

namespace {

std::vector<Mat> displacement_ops(int d) {
  // X^j Z^k for (j,k) != (0,0), row-major in (j,k)
  const Mat x = weyl_shift(d), z = weyl_clock(d);
  std::vector<Mat> ops;
  Mat xj = Mat::Identity(d, d);
  for (int j = 0; j < d; ++j) {
    Mat u = xj;
    for (int k = 0; k < d; ++k) {
      if (j || k) ops.push_back(u);
      u = u * z;
    }
    xj = xj * x;
  }
  return ops;
}

Vec builtin_fiducial(int d) {
  if (d == 2) {
    // Bloch vector (1,1,1)/sqrt(3)
    const double c = std::sqrt((3.0 + std::sqrt(3.0)) / 6.0);
    const double s = std::sqrt((3.0 - std::sqrt(3.0)) / 6.0);
    Vec f(2);
    f << c, std::polar(s, M_PI / 4.0);
    return f;
  }
  if (d == 3) {
    Vec f(3);
    f << 0.0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    return f;
  }
  throw DimensionError(
      "build_sic: no built-in fiducial for dim " + std::to_string(d) +
      "; use load_povm or fiducial_search");
}

}  // namespace

Povm sic_from_fiducial(const Vec& fiducial) {
  const int d = static_cast<int>(fiducial.size());
  const Mat x = weyl_shift(d), z = weyl_clock(d);
  Povm p;
  p.dim = d;
  p.kind = PovmKind::SIC;
  p.a = 1.0 / (d * d);
  Mat xj = Mat::Identity(d, d);
  for (int j = 0; j < d; ++j) {
    Mat u = xj;
    for (int k = 0; k < d; ++k) {
      Vec v = u * fiducial;
      p.elements.push_back(v * v.adjoint() / static_cast<double>(d));
      u = u * z;
    }
    xj = xj * x;
  }
  return p;
}

Povm build_sic(int dim) {
  Povm p = sic_from_fiducial(builtin_fiducial(dim));
  const PovmReport rep = validate_povm(p, 1e-10);
  if (rep.kind_confirmed != PovmKind::SIC)
    throw ValidationError("build_sic: construction failed certification, "
                          "max violation " + std::to_string(rep.max_violation));
  return p;
}

double fiducial_objective(int dim, const Vec& fiducial) {
  const double target = 1.0 / (dim + 1);
  double obj = 0.0;
  for (const Mat& dop : displacement_ops(dim)) {
    const double t = std::norm(cplx(fiducial.adjoint() * dop * fiducial));
    obj += (t - target) * (t - target);
  }
  return obj;
}

Povm fiducial_search(int dim, std::uint64_t seed, double tol, int restarts) {
  if (dim < 2) throw DimensionError("fiducial_search: dim must be >= 2");
  const auto ops = displacement_ops(dim);
  const double target = 1.0 / (dim + 1);
  std::mt19937_64 rng(seed);
  double best_obj = std::numeric_limits<double>::infinity();

  for (int r = 0; r < restarts; ++r) {
    Vec v = random_pure_state(dim, rng).amplitudes;
    double obj = fiducial_objective(dim, v);
    double lr = 0.1;
    for (int it = 0; it < 20000 && obj > tol * 1e-2 && lr > 1e-16; ++it) {
      Vec grad = Vec::Zero(dim);
      for (const Mat& dop : ops) {
        const cplx g = cplx(v.adjoint() * dop * v);
        const double t = std::norm(g);
        grad += 2.0 * (t - target) *
                (std::conj(g) * (dop * v) + g * (dop.adjoint() * v));
      }
      Vec cand = v - lr * grad;
      cand /= cand.norm();
      const double cand_obj = fiducial_objective(dim, cand);
      if (cand_obj < obj) {
        v = cand;
        obj = cand_obj;
        lr *= 1.2;
      } else {
        lr *= 0.5;
      }
    }
    best_obj = std::min(best_obj, obj);
    if (obj <= tol) {
      Povm p = sic_from_fiducial(v);
      const PovmReport rep = validate_povm(p, std::sqrt(tol));
      if (rep.max_violation <= std::sqrt(tol)) return p;
    }
  }
  throw ValidationError("fiducial_search: no SIC found for dim " +
                        std::to_string(dim) + "; best residual " +
                        std::to_string(best_obj));
}

Povm build_gsic(const Povm& sic, double a) {
  const int d = sic.dim;
  const double lo = 1.0 / (d * d * d), hi = 1.0 / (d * d);
  if (!(a > lo && a <= hi + 1e-15))
    throw ValidationError("build_gsic: a must lie in (1/d^3, 1/d^2]");
  const double mu = std::sqrt((a * d * d * d - 1.0) / (d - 1.0));
  Povm p;
  p.dim = d;
  p.kind = PovmKind::GSIC;
  p.a = a;
  const Mat depol = Mat::Identity(d, d) * ((1.0 - mu) / (d * d));
  for (const Mat& el : sic.elements) p.elements.push_back(mu * el + depol);
  return p;
}

Povm build_gsic(int dim, double a) { return build_gsic(build_sic(dim), a); }

PovmReport validate_povm(const Povm& p, double tol) {
  const int d = p.dim;
  const int n = p.count();
  PovmReport rep;
  if (n == 0) {
    rep.max_violation = 1.0;
    return rep;
  }

  double base = 0.0;
  Mat sum = Mat::Zero(d, d);
  for (const Mat& el : p.elements) {
    sum += el;
    base = std::max(base, std::abs(el.trace().real() - 1.0 / d));
    base = std::max(base, std::abs(el.trace().imag()));
    base = std::max(base, (el - el.adjoint()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Mat> es((el + el.adjoint()) / 2.0);
    base = std::max(base, std::max(0.0, -es.eigenvalues().minCoeff()));
  }
  base = std::max(base, (sum - Mat::Identity(d, d)).cwiseAbs().maxCoeff());
  if (n != d * d) base = std::max(base, 1.0);

  // Gram pattern
  double diag_mean = 0.0;
  for (const Mat& el : p.elements) diag_mean += (el * el).trace().real();
  diag_mean /= n;
  rep.measured_a = diag_mean;

  double sic_dev = 0.0, gsic_dev = 0.0;
  const double sic_diag = 1.0 / (d * d);
  const double sic_off = 1.0 / (d * d * (d + 1.0));
  const double gsic_off = (1.0 - d * diag_mean) / (d * (d * d - 1.0));
  for (int j = 0; j < n; ++j)
    for (int k = j; k < n; ++k) {
      const double g = (p.elements[j] * p.elements[k]).trace().real();
      if (j == k) {
        sic_dev = std::max(sic_dev, std::abs(g - sic_diag));
        gsic_dev = std::max(gsic_dev, std::abs(g - diag_mean));
      } else {
        sic_dev = std::max(sic_dev, std::abs(g - sic_off));
        gsic_dev = std::max(gsic_dev, std::abs(g - gsic_off));
      }
    }

  const bool a_in_range =
      diag_mean > 1.0 / (d * d * d) && diag_mean <= 1.0 / (d * d) + tol;
  const double sic_total = std::max(base, sic_dev);
  const double gsic_total = std::max(base, gsic_dev);

  if (sic_total <= tol)
    rep.kind_confirmed = PovmKind::SIC;
  else if (gsic_total <= tol && a_in_range)
    rep.kind_confirmed = PovmKind::GSIC;

  // Violation against the declared kind
  if (p.kind == PovmKind::SIC)
    rep.max_violation = sic_total;
  else
    rep.max_violation = std::max(gsic_total, std::abs(diag_mean - p.a));
  return rep;
}

double index_of_coincidence(const Povm& p, const DensityMatrix& rho) {
  if (p.dim != rho.dim())
    throw DimensionError("index_of_coincidence: dimension mismatch");
  double sum = 0.0;
  for (const Mat& el : p.elements) {
    const double prob = (el * rho.op).trace().real();
    sum += prob * prob;
  }
  return sum;
}

void save_povm(const Povm& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  char head[128];
  if (p.kind == PovmKind::SIC)
    std::snprintf(head, sizeof(head), "povm d=%d n=%d kind=SIC", p.dim,
                  p.count());
  else
    std::snprintf(head, sizeof(head), "povm d=%d n=%d kind=GSIC:a=%.17g",
                  p.dim, p.count(), p.a);
  out << head << '\n';
  for (const Mat& el : p.elements) out << '\n' << serialize_matrix(el);
}

Povm load_povm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line, header;
  std::vector<std::string> blocks;
  std::string current;
  bool have_header = false;
  while (std::getline(in, line)) {
    std::string stripped = line;
    const auto pos = stripped.find_first_not_of(" \t\r");
    stripped = (pos == std::string::npos) ? "" : stripped.substr(pos);
    if (!stripped.empty() && stripped[0] == '#') continue;
    if (!have_header) {
      if (stripped.empty()) continue;
      header = stripped;
      have_header = true;
      continue;
    }
    if (stripped.empty()) {
      if (!current.empty()) blocks.push_back(current);
      current.clear();
    } else {
      current += line + '\n';
    }
  }
  if (!current.empty()) blocks.push_back(current);

  int d = 0, n = 0;
  char kindbuf[64] = {0};
  if (!have_header ||
      std::sscanf(header.c_str(), "povm d=%d n=%d kind=%63s", &d, &n,
                  kindbuf) != 3)
    throw ParseError("load_povm: bad header '" + header + "'");
  Povm p;
  p.dim = d;
  const std::string kind(kindbuf);
  if (kind == "SIC") {
    p.kind = PovmKind::SIC;
    p.a = 1.0 / (d * d);
  } else if (kind.rfind("GSIC:a=", 0) == 0) {
    p.kind = PovmKind::GSIC;
    p.a = std::stod(kind.substr(7));
  } else {
    throw ParseError("load_povm: unknown kind '" + kind + "'");
  }
  if (n != d * d || static_cast<int>(blocks.size()) != n)
    throw ParseError("load_povm: expected d^2=" + std::to_string(d * d) +
                     " elements, got " + std::to_string(blocks.size()));
  for (const auto& b : blocks) {
    Mat el = parse_matrix(b);
    if (el.rows() != d || el.cols() != d)
      throw ParseError("load_povm: element is not " + std::to_string(d) + "x" +
                       std::to_string(d));
    p.elements.push_back(el);
  }
  return p;
}

}  // namespace sicwit
