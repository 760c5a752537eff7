#include "sicwit/operator_core.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace sicwit {

bool is_hermitian(const Mat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Mat tensor(const Mat& a, const Mat& b) {
  const auto ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  Mat out(ra * rb, ca * cb);
  for (Eigen::Index i = 0; i < ra; ++i)
    for (Eigen::Index j = 0; j < ca; ++j)
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
  return out;
}

Mat partial_transpose(const Mat& w, int dim_a, int dim_b, Subsystem which) {
  if (w.rows() != w.cols() ||
      w.rows() != static_cast<Eigen::Index>(dim_a) * dim_b)
    throw DimensionError("partial_transpose: matrix is not dim_a*dim_b square");
  Mat out(w.rows(), w.cols());
  for (int i = 0; i < dim_a; ++i)
    for (int j = 0; j < dim_a; ++j) {
      auto block = w.block(i * dim_b, j * dim_b, dim_b, dim_b);
      if (which == Subsystem::B)
        out.block(i * dim_b, j * dim_b, dim_b, dim_b) = block.transpose();
      else
        out.block(j * dim_b, i * dim_b, dim_b, dim_b) = block;
    }
  return out;
}

EigResult eig_hermitian(const Mat& a) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if (!is_hermitian(a, 1e-12 * scale))
    throw ValidationError("eig_hermitian: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> solver(a);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eig_hermitian: eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

PureState random_pure_state(int dim, std::mt19937_64& rng) {
  if (dim < 1) throw DimensionError("random_pure_state: dim must be >= 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cplx(gauss(rng), gauss(rng));
  v /= v.norm();
  return {dim, v};
}

PureState random_pure_state(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_pure_state(dim, rng);
}

DensityMatrix make_density(const Mat& op, double validation_tol) {
  if (op.rows() != op.cols())
    throw DimensionError("make_density: matrix is not square");
  if (!is_hermitian(op, std::max(validation_tol, 1e-12)))
    throw ValidationError("make_density: matrix is not Hermitian");
  const double tr = op.trace().real();
  if (std::abs(tr - 1.0) > validation_tol)
    throw ValidationError("make_density: trace " + std::to_string(tr) +
                          " deviates from 1 beyond tolerance");
  Mat herm = (op + op.adjoint()) / 2.0;
  const double min_eig = eig_hermitian(herm).values.minCoeff();
  if (min_eig < -validation_tol)
    throw ValidationError("make_density: smallest eigenvalue " +
                          std::to_string(min_eig) + " below -tolerance");
  return {op, validation_tol};
}

RepairedDensity repair_density(const Mat& op) {
  if (op.rows() != op.cols())
    throw DimensionError("repair_density: matrix is not square");
  Mat herm = (op + op.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Mat> solver(herm);
  RVec vals = solver.eigenvalues().cwiseMax(0.0);
  Mat repaired =
      solver.eigenvectors() * vals.asDiagonal() * solver.eigenvectors().adjoint();
  const double tr = repaired.trace().real();
  if (tr <= 0.0)
    throw ValidationError("repair_density: matrix has no positive part");
  repaired /= tr;
  const double dist = (repaired - op).norm();
  return {DensityMatrix{repaired, 1e-9}, dist};
}

DensityMatrix pure_density(const PureState& psi) {
  Mat op = psi.amplitudes * psi.amplitudes.adjoint();
  return {op, 1e-9};
}

DensityMatrix random_density(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
  Mat op = g * g.adjoint();
  op /= op.trace().real();
  return {op, 1e-9};
}

Mat weyl_shift(int d) {
  Mat x = Mat::Zero(d, d);
  for (int j = 0; j < d; ++j) x((j + 1) % d, j) = 1.0;
  return x;
}

Mat weyl_clock(int d) {
  Mat z = Mat::Zero(d, d);
  for (int j = 0; j < d; ++j)
    z(j, j) = std::polar(1.0, 2.0 * M_PI * j / d);
  return z;
}

namespace {

cplx parse_entry(const std::string& token, int row, int col) {
  auto fail = [&]() -> cplx {
    throw ParseError("malformed entry '" + token + "' at row " +
                     std::to_string(row + 1) + ", column " +
                     std::to_string(col + 1));
  };
  const char* s = token.c_str();
  char* end = nullptr;
  const double re = std::strtod(s, &end);
  if (end == s) return fail();
  if (*end == '\0') return cplx(re, 0.0);
  if (*end != '+' && *end != '-') return fail();
  char* end2 = nullptr;
  const double im = std::strtod(end, &end2);
  if (end2 == end || *end2 != 'i' || *(end2 + 1) != '\0') return fail();
  return cplx(re, im);
}

}  // namespace

Mat parse_matrix(const std::string& text) {
  std::vector<std::vector<cplx>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    std::vector<cplx> row;
    bool comment = false;
    while (ls >> tok) {
      if (tok[0] == '#') {
        comment = true;
        break;
      }
      row.push_back(parse_entry(tok, static_cast<int>(rows.size()),
                                static_cast<int>(row.size())));
    }
    if (comment && row.empty()) continue;
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty matrix");
  const size_t cols = rows[0].size();
  for (size_t r = 1; r < rows.size(); ++r)
    if (rows[r].size() != cols)
      throw ParseError("ragged row " + std::to_string(r + 1) + ": expected " +
                       std::to_string(cols) + " entries, got " +
                       std::to_string(rows[r].size()));
  Mat m(rows.size(), cols);
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  return m;
}

std::string serialize_matrix(const Mat& m) {
  std::string out;
  char buf[80];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const cplx z = m(i, j);
      if (z.imag() == 0.0)
        std::snprintf(buf, sizeof(buf), "%.17g", z.real());
      else
        std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", z.real(), z.imag());
      if (j) out += ' ';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

Mat load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_matrix(ss.str());
}

void save_matrix(const Mat& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << serialize_matrix(m);
}

}  // namespace sicwit
