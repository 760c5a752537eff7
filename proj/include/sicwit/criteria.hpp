#pragma once

#include <string>
#include <vector>

#include "sicwit/witness.hpp"

namespace sicwit {

enum class Verdict { Entangled, Inconclusive };

struct CriterionReport {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  Verdict verdict = Verdict::Inconclusive;
};

std::string to_string(Verdict v);
std::string format_report(const CriterionReport& r);   // `name value threshold verdict`
std::string format_report_csv(const CriterionReport& r);

// P(j,j) convention for the SIC joint-probability criterion:
// Plain uses Tr((P_j (x) P_j) rho), Conjugated uses Tr((conj(P_j) (x) P_j) rho).
enum class GConvention { Plain, Conjugated };

// Pinned by a golden test against the published example value.
inline constexpr GConvention kDefaultGConvention = GConvention::Conjugated;

// Separable states satisfy sum_j P(j,j) <= 2/(d(d+1)); a larger value
// certifies entanglement.
CriterionReport g_criterion(const Povm& povm, const DensityMatrix& rho,
                            GConvention convention = kDefaultGConvention);

// Smallest eigenvalue of rho^{T_B}; negative certifies entanglement.
CriterionReport ppt_check(const DensityMatrix& rho, int dim_a, int dim_b);

// Witness (given rotation), witness (optimized rotation), G, and PPT.
std::vector<CriterionReport> compare(const Povm& povm,
                                     const AxisRotation& rotation,
                                     const DensityMatrix& rho);

}  // namespace sicwit
