#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sicwit/criteria.hpp"

using namespace sicwit;

namespace {

#ifndef SICWIT_DATA_DIR
#define SICWIT_DATA_DIR "data"
#endif

struct Options {
  int d = 3;
  std::string povm = "builtin";        // builtin | gsic:a=<a> | file:<path>
  std::string rotation = "identity";   // identity | random:<seed> | file:<path> | optimize
  bool transpose_rotation = false;
  std::string state;                   // maxent | maxmixed | isotropic:alpha=<a> | bell:p=<p> | file:<path>
  bool repair = false;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  std::string output;
};

double suffix_value(const std::string& s, const std::string& prefix) {
  if (s.rfind(prefix, 0) != 0)
    throw std::invalid_argument("expected '" + prefix + "<value>', got '" + s +
                                "'");
  return std::stod(s.substr(prefix.size()));
}

Povm resolve_povm(const Options& opt) {
  if (opt.povm == "builtin") return build_sic(opt.d);
  if (opt.povm.rfind("gsic:a=", 0) == 0)
    return build_gsic(opt.d, std::stod(opt.povm.substr(7)));
  if (opt.povm.rfind("file:", 0) == 0) {
    Povm p = load_povm(opt.povm.substr(5));
    const PovmReport rep = validate_povm(p, opt.repair ? 1.0 : opt.tol);
    if (!opt.repair && rep.max_violation > opt.tol)
      throw ValidationError("POVM file fails validation, max violation " +
                            std::to_string(rep.max_violation));
    return p;
  }
  throw std::invalid_argument("unknown POVM source '" + opt.povm + "'");
}

AxisRotation resolve_rotation(const Options& opt, const Povm& povm,
                              const DensityMatrix* rho) {
  AxisRotation rot;
  if (opt.rotation == "identity") {
    rot = identity_rotation(opt.d);
  } else if (opt.rotation.rfind("random", 0) == 0) {
    std::uint64_t seed = opt.seed;
    if (opt.rotation.size() > 7) seed = std::stoull(opt.rotation.substr(7));
    rot = random_axis_rotation(opt.d, seed);
  } else if (opt.rotation.rfind("file:", 0) == 0) {
    rot = load_rotation(opt.rotation.substr(5), opt.d,
                        opt.repair ? 1.0 : opt.tol, opt.repair);
  } else if (opt.rotation == "optimize") {
    if (!rho)
      throw std::invalid_argument("rotation=optimize needs a state");
    rot = optimize_rotation(povm, *rho).rotation;
  } else {
    throw std::invalid_argument("unknown rotation source '" + opt.rotation +
                                "'");
  }
  if (opt.transpose_rotation) {
    rot.matrix.transposeInPlace();
  }
  return rot;
}

DensityMatrix resolve_state(const Options& opt) {
  const int d = opt.d;
  if (opt.state == "maxent") return max_entangled_state(d);
  if (opt.state == "maxmixed") return isotropic_state(d, 0.0);
  if (opt.state.rfind("isotropic:alpha=", 0) == 0)
    return isotropic_state(d, suffix_value(opt.state, "isotropic:alpha="));
  if (opt.state.rfind("bell:p=", 0) == 0)
    return bell_diagonal_state(d, suffix_value(opt.state, "bell:p="));
  if (opt.state.rfind("file:", 0) == 0) {
    const Mat m = load_matrix(opt.state.substr(5));
    if (opt.repair) {
      const RepairedDensity rd = repair_density(m);
      std::fprintf(stderr, "# state repaired, distance %.3g\n",
                   rd.repair_distance);
      return rd.rho;
    }
    return make_density(m, 2.5e-2);
  }
  throw std::invalid_argument("unknown state source '" + opt.state + "'");
}

std::vector<double> parse_grid(const std::string& spec) {
  // a:b:step
  const auto c1 = spec.find(':');
  const auto c2 = spec.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw std::invalid_argument("grid must be <start>:<stop>:<step>");
  const double a = std::stod(spec.substr(0, c1));
  const double b = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
  const double step = std::stod(spec.substr(c2 + 1));
  if (step <= 0) throw std::invalid_argument("grid step must be positive");
  std::vector<double> grid;
  for (double x = a; x <= b + 1e-12; x += step) grid.push_back(x);
  return grid;
}

std::ostream& open_output(const Options& opt, std::ofstream& file) {
  if (opt.output.empty()) return std::cout;
  file.open(opt.output);
  if (!file) throw std::runtime_error("cannot open " + opt.output);
  return file;
}

int cmd_check_povm(const Options& opt) {
  const Povm p = [&] {
    if (opt.povm.rfind("file:", 0) == 0) return load_povm(opt.povm.substr(5));
    Options o = opt;
    o.repair = false;
    return resolve_povm(o);
  }();
  const PovmReport rep = validate_povm(p, opt.tol);
  const char* kind = !rep.kind_confirmed          ? "none"
                     : *rep.kind_confirmed == PovmKind::SIC ? "SIC"
                                                            : "GSIC";
  std::printf("elements %d  dim %d\n", p.count(), p.dim);
  std::printf("kind_confirmed %s\n", kind);
  std::printf("measured_a %.12g\n", rep.measured_a);
  std::printf("max_violation %.3e  (tol %.3e)\n", rep.max_violation, opt.tol);
  return rep.max_violation <= opt.tol ? 0 : 2;
}

int cmd_eval(const Options& opt) {
  const Povm povm = resolve_povm(opt);
  const DensityMatrix rho = resolve_state(opt);
  const AxisRotation rot = resolve_rotation(opt, povm, &rho);
  const WitnessOperator w =
      build_witness(povm, rot, opt.repair ? 1.0 : opt.tol);
  const double value = evaluate(w, rho);
  std::printf("witness value %.7f\n", value);
  std::printf("verdict %s\n", value < 0 ? "entangled" : "inconclusive");
  if (!opt.output.empty()) save_witness(w, opt.output);
  return 0;
}

int cmd_scan(const Options& opt, const std::string& family,
             const std::string& grid_spec) {
  const Povm povm = resolve_povm(opt);
  const AxisRotation rot = resolve_rotation(opt, povm, nullptr);
  const std::vector<double> grid = parse_grid(grid_spec);
  std::ofstream file;
  std::ostream& out = open_output(opt, file);
  char buf[160];
  if (family == "isotropic") {
    const IsotropicScan scan = scan_isotropic(povm, rot, grid);
    out << "alpha,value,verdict\n";
    for (const auto& row : scan.rows) {
      std::snprintf(buf, sizeof(buf), "%.6g,%.12g,%s\n", row.parameter,
                    row.value, row.entangled ? "entangled" : "inconclusive");
      out << buf;
    }
    std::snprintf(buf, sizeof(buf), "# threshold %.9f\n", scan.threshold);
    out << buf;
  } else if (family == "bell-diagonal") {
    const BellDiagonalScan scan = scan_bell_diagonal(povm, rot, grid);
    out << "p,value,verdict,affine_root,caption_value,difference\n";
    for (const auto& row : scan.rows) {
      std::snprintf(buf, sizeof(buf), "%.6g,%.12g,%s,%.12g,%.12g,%.12g\n",
                    row.parameter, row.value,
                    row.entangled ? "entangled" : "inconclusive",
                    scan.affine_root, scan.caption_value, scan.difference);
      out << buf;
    }
  } else {
    throw std::invalid_argument("unknown family '" + family + "'");
  }
  return 0;
}

int cmd_optimize(const Options& opt) {
  const Povm povm = resolve_povm(opt);
  const DensityMatrix rho = resolve_state(opt);
  const OptimizedRotation best = optimize_rotation(povm, rho);
  const WitnessOperator wid = build_witness(povm, identity_rotation(opt.d));
  std::printf("optimized value %.7f\n", best.value);
  std::printf("identity value  %.7f\n", evaluate(wid, rho));
  std::printf("verdict %s\n",
              best.value < 0 ? "entangled" : "inconclusive");
  if (!opt.output.empty()) {
    save_matrix(best.rotation.matrix.cast<cplx>(), opt.output);
    std::printf("rotation written to %s\n", opt.output.c_str());
  }
  return 0;
}

int cmd_compare(const Options& opt) {
  const Povm povm = resolve_povm(opt);
  const DensityMatrix rho = resolve_state(opt);
  const AxisRotation rot = resolve_rotation(opt, povm, &rho);
  for (const auto& rep : compare(povm, rot, rho))
    std::printf("%s\n", format_report(rep).c_str());
  return 0;
}

void print_check(const char* label, double got, double expect, double tol) {
  const bool ok = std::abs(got - expect) <= tol;
  std::printf("%-34s computed %12.7f  expected %12.7f  %s\n", label, got,
              expect, ok ? "pass" : "FAIL");
}

int cmd_demo(int which, const std::string& data_dir) {
  if (which == 1) {
    std::printf("maximally entangled states, identity rotation\n");
    for (int d : {2, 3}) {
      const WitnessOperator w =
          build_witness(build_sic(d), identity_rotation(d));
      const double val = evaluate(w, max_entangled_state(d));
      char label[64];
      std::snprintf(label, sizeof(label), "d=%d  Tr(W phi+)", d);
      print_check(label, val, (1.0 - d) / (d * (d + 1.0)), 1e-12);
    }
    return 0;
  }
  if (which == 2) {
    std::printf("isotropic noise thresholds, identity rotation\n");
    for (int d : {2, 3}) {
      const Povm sic = build_sic(d);
      std::vector<double> grid;
      for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
      const IsotropicScan scan =
          scan_isotropic(sic, identity_rotation(d), grid);
      char label[64];
      std::snprintf(label, sizeof(label), "d=%d  threshold alpha", d);
      print_check(label, scan.threshold, 1.0 / (d + 1.0), 1e-8);
      std::snprintf(label, sizeof(label), "d=%d  value at alpha=0", d);
      print_check(label, scan.rows[0].value,
                  2.0 / (d * (d + 1.0)) - 1.0 / (d * d), 1e-12);
    }
    return 0;
  }
  if (which == 3) {
    std::printf("two-qutrit example state\n");
    const RepairedDensity rho =
        repair_density(load_matrix(data_dir + "/example3_rho.txt"));
    std::printf("state repaired, distance %.4g\n", rho.repair_distance);
    AxisRotation rot =
        load_rotation(data_dir + "/appendix_O.txt", 3, 5e-3, /*repair=*/true);
    // The published witness matrix matches the transposed index convention
    // for this rotation; apply it the same way.
    rot.matrix.transposeInPlace();
    const Povm appendix = load_povm(data_dir + "/appendix_sic.txt");
    const WitnessOperator w = build_witness(appendix, rot, 1.0);
    print_check("Tr(W rho), appendix POVM", evaluate(w, rho.rho), -0.0152221,
                5e-3);

    const Povm sic = build_sic(3);
    const CriterionReport g = g_criterion(sic, rho.rho);
    print_check("G - 1/6", g.value - 1.0 / 6.0, -0.011341, 2e-3);
    std::printf("G verdict: %s (threshold %.7f)\n",
                to_string(g.verdict).c_str(), g.threshold);
    const CriterionReport ppt = ppt_check(rho.rho, 3, 3);
    std::printf("PPT min eigenvalue %.6f -> %s\n", ppt.value,
                to_string(ppt.verdict).c_str());
    const WitnessOperator wb = build_witness(sic, rot);
    std::printf("built-in SIC witness value %.7f (for reference)\n",
                evaluate(wb, rho.rho));
    return 0;
  }
  throw std::invalid_argument("demo number must be 1, 2 or 3");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SIC-POVM entanglement witness toolkit"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool with_state) {
    sub->add_option("--d", opt.d, "qudit dimension");
    sub->add_option("--povm", opt.povm,
                    "builtin | gsic:a=<a> | file:<path>");
    sub->add_option("--rotation", opt.rotation,
                    "identity | random[:<seed>] | file:<path> | optimize");
    sub->add_flag("--transpose-rotation", opt.transpose_rotation,
                  "apply the rotation in the transposed index convention");
    sub->add_flag("--repair", opt.repair,
                  "repair rounded inputs (PSD-project states, "
                  "re-orthogonalize rotations)");
    sub->add_option("--tol", opt.tol, "validation tolerance");
    sub->add_option("--seed", opt.seed, "random seed");
    sub->add_option("-o,--output", opt.output, "output file");
    if (with_state)
      sub->add_option("--state", opt.state,
                      "maxent | maxmixed | isotropic:alpha=<a> | "
                      "bell:p=<p> | file:<path>")
          ->required();
  };

  auto* check = app.add_subcommand("check-povm", "validate a POVM");
  int builtin_d = 0, gsic_d = 0;
  double gsic_a = 0.0;
  std::string povm_file;
  check->add_option("--builtin-sic", builtin_d, "built-in SIC for dimension");
  check->add_option("--gsic", gsic_d, "built-in GSIC for dimension");
  check->add_option("--a", gsic_a, "GSIC purity parameter");
  check->add_option("--file", povm_file, "POVM file");
  check->add_option("--tol", opt.tol, "certification tolerance");

  auto* eval = app.add_subcommand("eval", "evaluate a witness on a state");
  add_common(eval, true);

  auto* scan = app.add_subcommand("scan", "sweep a state family");
  std::string family, alpha_grid = "0:1:0.01", p_grid = "0:1:0.01";
  double scan_a = 0.0;
  scan->add_option("--family", family, "isotropic | bell-diagonal")
      ->required();
  scan->add_option("--alpha", alpha_grid, "alpha grid start:stop:step");
  scan->add_option("--p", p_grid, "p grid start:stop:step");
  scan->add_option("--a", scan_a, "use a GSIC with this purity");
  add_common(scan, false);

  auto* optimize =
      app.add_subcommand("optimize", "closed-form rotation optimization");
  add_common(optimize, true);

  auto* demo = app.add_subcommand("demo", "reproduce a worked example");
  int demo_n = 0;
  std::string data_dir = SICWIT_DATA_DIR;
  demo->add_option("number", demo_n, "example number (1-3)")->required();
  demo->add_option("--data-dir", data_dir, "fixture directory");

  auto* cmp = app.add_subcommand("compare", "run all criteria on a state");
  add_common(cmp, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) {
      if (builtin_d) {
        opt.d = builtin_d;
        opt.povm = "builtin";
      } else if (gsic_d) {
        char spec[48];
        std::snprintf(spec, sizeof(spec), "gsic:a=%.17g", gsic_a);
        opt.d = gsic_d;
        opt.povm = spec;
      } else if (!povm_file.empty()) {
        opt.povm = "file:" + povm_file;
      } else {
        std::fprintf(stderr, "check-povm: no POVM source given\n");
        return 1;
      }
      return cmd_check_povm(opt);
    }
    if (eval->parsed()) return cmd_eval(opt);
    if (scan->parsed()) {
      if (scan_a > 0.0) {
        char spec[48];
        std::snprintf(spec, sizeof(spec), "gsic:a=%.17g", scan_a);
        opt.povm = spec;
      }
      return cmd_scan(opt, family,
                      family == "isotropic" ? alpha_grid : p_grid);
    }
    if (optimize->parsed()) return cmd_optimize(opt);
    if (demo->parsed()) return cmd_demo(demo_n, data_dir);
    if (cmp->parsed()) return cmd_compare(opt);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return 3;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return 2;
  } catch (const DimensionError& e) {
    std::fprintf(stderr, "dimension error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 1;
}
