#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sicwit/operator_core.hpp"

namespace sicwit {

enum class PovmKind { SIC, GSIC };

// d^2 positive operators with trace 1/d each, summing to the identity.
// SIC: Tr(P_j^2) = 1/d^2, Tr(P_j P_k) = 1/(d^2(d+1)) for j != k.
// GSIC(a): Tr(P_j^2) = a, Tr(P_j P_k) = (1 - d a)/(d(d^2-1)) for j != k,
// with a in (1/d^3, 1/d^2].
struct Povm {
  int dim = 0;
  std::vector<Mat> elements;  // ordered by (shift index, clock index)
  PovmKind kind = PovmKind::SIC;
  double a = 0.0;  // common purity; 1/d^2 for a SIC

  int count() const { return static_cast<int>(elements.size()); }
};

struct PovmReport {
  std::optional<PovmKind> kind_confirmed;  // empty if nothing fits at tol
  double measured_a = 0.0;                 // mean of Tr(P_j^2)
  double max_violation = 0.0;              // worst deviation over all checks
};

// Weyl-Heisenberg orbit of a built-in fiducial; supported for d in {2, 3}.
// Output is self-certified with validate_povm at 1e-10.
Povm build_sic(int dim);

// Orbit of an explicit unit fiducial vector (no certification).
Povm sic_from_fiducial(const Vec& fiducial);

// Random-restart minimization of
//   sum_{m != 0} (|<f| X^j Z^k |f>|^2 - 1/(d+1))^2
// over unit fiducials. Throws ValidationError if no restart reaches tol.
Povm fiducial_search(int dim, std::uint64_t seed, double tol,
                     int restarts = 20);

double fiducial_objective(int dim, const Vec& fiducial);

// Depolarized SIC: P'_j = mu P_j + (1-mu) I/d^2, mu = sqrt((a d^3-1)/(d-1)).
Povm build_gsic(const Povm& sic, double a);
Povm build_gsic(int dim, double a);

PovmReport validate_povm(const Povm& p, double tol);

// sum_i [Tr(P_i rho)]^2.
double index_of_coincidence(const Povm& p, const DensityMatrix& rho);

// File format: header `povm d=<d> n=<n> kind=<SIC|GSIC:a=<a>>`, then n
// matrices in the matrix text format separated by blank lines.
Povm load_povm(const std::string& path);
void save_povm(const Povm& p, const std::string& path);

}  // namespace sicwit
