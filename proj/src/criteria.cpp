#include "sicwit/criteria.hpp"

#include <cstdio>

namespace sicwit {

std::string to_string(Verdict v) {
  return v == Verdict::Entangled ? "entangled" : "inconclusive";
}

std::string format_report(const CriterionReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s %.9g %.9g %s", r.name.c_str(), r.value,
                r.threshold, to_string(r.verdict).c_str());
  return buf;
}

std::string format_report_csv(const CriterionReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s,%.9g,%.9g,%s", r.name.c_str(), r.value,
                r.threshold, to_string(r.verdict).c_str());
  return buf;
}

CriterionReport g_criterion(const Povm& povm, const DensityMatrix& rho,
                            GConvention convention) {
  const int d = povm.dim;
  if (rho.dim() != d * d)
    throw DimensionError("g_criterion: state must live on the bipartite space");
  double value = 0.0;
  for (const Mat& p : povm.elements) {
    const Mat left = (convention == GConvention::Conjugated)
                         ? Mat(p.conjugate())
                         : p;
    const Mat kron = tensor(left, p);
    value += kron.transpose().cwiseProduct(rho.op).sum().real();
  }
  CriterionReport rep;
  rep.name = convention == GConvention::Conjugated ? "g-criterion"
                                                   : "g-criterion-plain";
  rep.value = value;
  rep.threshold = 2.0 / (d * (d + 1.0));
  rep.verdict =
      value > rep.threshold ? Verdict::Entangled : Verdict::Inconclusive;
  return rep;
}

CriterionReport ppt_check(const DensityMatrix& rho, int dim_a, int dim_b) {
  const Mat pt = partial_transpose(rho.op, dim_a, dim_b, Subsystem::B);
  CriterionReport rep;
  rep.name = "ppt";
  rep.value = eig_hermitian(pt).values.minCoeff();
  rep.threshold = 0.0;
  rep.verdict =
      rep.value < -1e-10 ? Verdict::Entangled : Verdict::Inconclusive;
  return rep;
}

std::vector<CriterionReport> compare(const Povm& povm,
                                     const AxisRotation& rotation,
                                     const DensityMatrix& rho) {
  std::vector<CriterionReport> out;

  const WitnessOperator w = build_witness(povm, rotation);
  const double wval = evaluate(w, rho);
  out.push_back({"witness", wval, 0.0,
                 wval < 0.0 ? Verdict::Entangled : Verdict::Inconclusive});

  const OptimizedRotation opt = optimize_rotation(povm, rho);
  out.push_back({"witness-optimized", opt.value, 0.0,
                 opt.value < 0.0 ? Verdict::Entangled
                                 : Verdict::Inconclusive});

  out.push_back(g_criterion(povm, rho));
  out.push_back(ppt_check(rho, povm.dim, povm.dim));
  return out;
}

}  // namespace sicwit
