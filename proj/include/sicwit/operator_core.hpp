#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace sicwit {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Thrown on malformed text input (matrix/POVM/rotation files).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when data fails a structural check (non-Hermitian, not a POVM,
// not orthogonal, not a density matrix, ...).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

bool is_hermitian(const Mat& a, double tol = 1e-12);

// Kronecker product, row-major block convention:
// result[(i*db+k),(j*db+l)] = a(i,j) * b(k,l).
Mat tensor(const Mat& a, const Mat& b);

enum class Subsystem { A, B };

Mat partial_transpose(const Mat& w, int dim_a, int dim_b, Subsystem which);

struct EigResult {
  RVec values;  // ascending
  Mat vectors;  // columns, orthonormal
};

// Hermitian eigendecomposition. Throws ValidationError on non-Hermitian input.
EigResult eig_hermitian(const Mat& a);

struct PureState {
  int dim;
  Vec amplitudes;  // unit norm
};

PureState random_pure_state(int dim, std::mt19937_64& rng);
PureState random_pure_state(int dim, std::uint64_t seed);

struct DensityMatrix {
  Mat op;  // Hermitian, unit trace, PSD within validation_tol
  double validation_tol = 1e-9;

  int dim() const { return static_cast<int>(op.rows()); }
};

// Validates Hermiticity, trace and positivity; throws ValidationError.
DensityMatrix make_density(const Mat& op, double validation_tol = 1e-9);

struct RepairedDensity {
  DensityMatrix rho;
  double repair_distance;  // Frobenius distance from the input
};

// Projects onto the nearest PSD unit-trace matrix: Hermitize, clip negative
// eigenvalues, renormalize the trace.
RepairedDensity repair_density(const Mat& op);

DensityMatrix pure_density(const PureState& psi);
DensityMatrix random_density(int dim, std::mt19937_64& rng);

// Weyl-Heisenberg generators on C^d: shift X|j> = |j+1 mod d>,
// clock Z|j> = w^j |j> with w = exp(2 pi i / d).
Mat weyl_shift(int d);
Mat weyl_clock(int d);

// Text format: '#' comment lines, one row per line, entries `R`, `R+Ii`
// or `R-Ii` with decimal or scientific literals.
Mat parse_matrix(const std::string& text);
std::string serialize_matrix(const Mat& m);  // 17 significant digits

Mat load_matrix(const std::string& path);
void save_matrix(const Mat& m, const std::string& path);

}  // namespace sicwit
