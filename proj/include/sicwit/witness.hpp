#pragma once

#include <string>
#include <vector>

#include "sicwit/povm.hpp"
#include "sicwit/rotations.hpp"

namespace sicwit {

// The positive map
//   Phi(X) = (1/d) Tr(X) I
//            - (d+1)/(d-1) sum_{k,l} O_kl [Tr(X P_l) - Tr(X)/d^2] P_k.
struct PositiveMapSpec {
  Povm povm;
  AxisRotation rotation;

  int dim() const { return povm.dim; }
};

PositiveMapSpec make_map_spec(Povm povm, AxisRotation rotation);

// W = c I (x) I - sum_{k,l} O_kl conj(P_l) (x) P_k, acting on C^d (x) C^d.
// c = 2/(d(d+1)) for a SIC, (a d^2 + 1)/(d(d+1)) for a GSIC(a).
struct WitnessOperator {
  PositiveMapSpec spec;
  double c = 0.0;
  Mat matrix;

  int dim() const { return spec.dim(); }
};

double witness_constant(PovmKind kind, int dim, double a);

Mat apply_map(const PositiveMapSpec& spec, const Mat& x);

struct BallReport {
  double max_purity = 0.0;   // max Tr((Phi P)^2) over sampled projectors
  double min_purity = 0.0;
  double bound = 0.0;        // 1/(d-1)
  double max_trace_dev = 0.0;
  double max_herm_dev = 0.0;

  bool inside() const { return max_purity < bound; }
};

BallReport ball_check(const PositiveMapSpec& spec, int samples,
                      std::uint64_t seed);

// validate_tol gates the POVM certificate; pass a large value to build a
// witness from uncertified (e.g. rounded) POVM data.
WitnessOperator build_witness(const Povm& povm, const AxisRotation& rotation,
                              double validate_tol = 1e-8);

// Tr(W rho); negative certifies entanglement.
double evaluate(const WitnessOperator& w, const DensityMatrix& rho);

struct ChoiReport {
  double choi_constant = 0.0;  // identity coefficient of the Choi-side witness
  double eq3_constant = 0.0;   // c of the constructed witness
  double kappa = 0.0;          // choi_constant - eq3_constant
  double residual = 0.0;       // entrywise |(C - kappa I) - W|
};

ChoiReport choi_consistency(const PositiveMapSpec& spec);

// See-saw minimum of <a(x)b|W|a(x)b> over product states.
double min_product_expectation(const WitnessOperator& w, int restarts,
                               std::uint64_t seed);

double min_eigenvalue(const WitnessOperator& w);

// M_kl = Re Tr((conj(P_l) (x) P_k) rho); Tr(W(O) rho) = c - sum O_kl M_kl.
RMat witness_expectation_matrix(const Povm& povm, const DensityMatrix& rho);

struct OptimizedRotation {
  AxisRotation rotation;
  double value = 0.0;  // minimized Tr(W(O) rho)
};

// Closed-form minimizer over axis-fixing rotations (Procrustes on the
// complement block of M).
OptimizedRotation optimize_rotation(const Povm& povm,
                                    const DensityMatrix& rho);

struct ScanRow {
  double parameter = 0.0;
  double value = 0.0;
  bool entangled = false;
};

struct IsotropicScan {
  std::vector<ScanRow> rows;
  double threshold = 0.0;  // bisection root of Tr(W rho_iso(alpha)); NaN if none
};

IsotropicScan scan_isotropic(const Povm& povm, const AxisRotation& rotation,
                             const std::vector<double>& alphas);

struct BellDiagonalScan {
  std::vector<ScanRow> rows;
  double affine_root = 0.0;     // exact root of the (affine) value in p
  double caption_value = 0.0;   // (a d^2 + 1)/(a d^2 (d+1)) for comparison
  double difference = 0.0;
};

BellDiagonalScan scan_bell_diagonal(const Povm& povm,
                                    const AxisRotation& rotation,
                                    const std::vector<double>& ps);

// State families on C^d (x) C^d.
Vec max_entangled_vector(int d);
DensityMatrix max_entangled_state(int d);
DensityMatrix isotropic_state(int d, double alpha);
Vec bell_basis_vector(int d, int shift, int clock);
// p |B_0><B_0| + (1-p)/(d^2-1) sum_{j != 0} |B_j><B_j|
DensityMatrix bell_diagonal_state(int d, double p);

// File format: header `witness d=<d> c=<c>` then the d^2 x d^2 matrix.
void save_witness(const WitnessOperator& w, const std::string& path);

}  // namespace sicwit
