#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "sicwit/witness.hpp"

using namespace sicwit;

namespace {

const std::string kDataDir = SICWIT_DATA_DIR;

double rotation_value(const Povm& povm, const RMat& m, const AxisRotation& o) {
  return witness_constant(povm.kind, povm.dim, povm.a) -
         (o.matrix.transpose() * m).trace();
}

}  // namespace

TEST_CASE("the map is unital") {
  for (int d : {2, 3}) {
    const PositiveMapSpec spec =
        make_map_spec(build_sic(d), random_axis_rotation(d, std::uint64_t{4}));
    const Mat img = apply_map(spec, Mat::Identity(d, d));
    CHECK((img - Mat::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("image purity of projectors is the closed-form constant") {
  const int d = 3;
  const PositiveMapSpec spec =
      make_map_spec(build_sic(d), identity_rotation(d));
  std::mt19937_64 rng(41);
  const double expect = 1.0 / d + 1.0 / (std::pow(d, 3) * (d - 1.0));
  CHECK(expect == doctest::Approx(19.0 / 54.0).epsilon(1e-12));
  for (int trial = 0; trial < 100; ++trial) {
    const Vec v = random_pure_state(d, rng).amplitudes;
    const Mat img = apply_map(spec, v * v.adjoint());
    CHECK((img * img).trace().real() == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("the map preserves traces") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int d : {2, 3}) {
    const PositiveMapSpec spec =
        make_map_spec(build_sic(d), random_axis_rotation(d, rng));
    for (int trial = 0; trial < 100; ++trial) {
      Mat x(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) x(i, j) = cplx(g(rng), g(rng));
      CHECK(std::abs(apply_map(spec, x).trace() - x.trace()) < 1e-10);
    }
  }
}

TEST_CASE("ball check") {
  SUBCASE("d=3, identity") {
    const BallReport rep = ball_check(
        make_map_spec(build_sic(3), identity_rotation(3)), 2000, 5);
    CHECK(rep.bound == doctest::Approx(0.5));
    CHECK(rep.max_purity == doctest::Approx(19.0 / 54.0).epsilon(1e-9));
    CHECK(rep.inside());
    CHECK(rep.max_trace_dev < 1e-10);
    CHECK(rep.max_herm_dev < 1e-10);
  }
  SUBCASE("d=2, random rotation") {
    const BallReport rep = ball_check(
        make_map_spec(build_sic(2), random_axis_rotation(2, std::uint64_t{6})),
        2000, 7);
    CHECK(rep.max_purity == doctest::Approx(0.625).epsilon(1e-9));
    CHECK(rep.inside());
  }
  SUBCASE("purity does not depend on the rotation") {
    std::mt19937_64 rng(43);
    const Povm sic = build_sic(3);
    double lo = 1.0, hi = 0.0;
    for (int r = 0; r < 5; ++r) {
      const BallReport rep =
          ball_check(make_map_spec(sic, random_axis_rotation(3, rng)), 200, r);
      lo = std::min(lo, rep.min_purity);
      hi = std::max(hi, rep.max_purity);
    }
    CHECK(hi - lo < 1e-9);
  }
}

TEST_CASE("witness constants") {
  CHECK(build_witness(build_sic(3), identity_rotation(3)).c ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(build_witness(build_gsic(3, 1.0 / 9.0), identity_rotation(3)).c ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(build_witness(build_gsic(3, 1.0 / 12.0), identity_rotation(3)).c ==
        doctest::Approx((0.75 + 1.0) / 12.0).epsilon(1e-12));
}

TEST_CASE("GSIC constant is the pure-state coincidence maximum") {
  std::mt19937_64 rng(44);
  const Povm g = build_gsic(3, 1.0 / 12.0);
  double max_coincidence = 0.0;
  for (int trial = 0; trial < 2000; ++trial) {
    const DensityMatrix psi = pure_density(random_pure_state(3, rng));
    max_coincidence =
        std::max(max_coincidence, index_of_coincidence(g, psi));
  }
  CHECK(std::abs(max_coincidence - (0.75 + 1.0) / 12.0) < 1e-6);
}

TEST_CASE("witness matrix is Hermitian and matches its definition") {
  const Povm sic = build_sic(3);
  const AxisRotation rot = random_axis_rotation(3, std::uint64_t{8});
  const WitnessOperator w = build_witness(sic, rot);
  CHECK((w.matrix - w.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  Mat expect = w.c * Mat::Identity(9, 9);
  for (int k = 0; k < 9; ++k)
    for (int l = 0; l < 9; ++l)
      expect -= rot.matrix(k, l) *
                tensor(sic.elements[l].conjugate(), sic.elements[k]);
  CHECK((w.matrix - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("maximally entangled states are detected") {
  for (int d : {2, 3}) {
    const WitnessOperator w = build_witness(build_sic(d), identity_rotation(d));
    CHECK(evaluate(w, max_entangled_state(d)) ==
          doctest::Approx((1.0 - d) / (d * (d + 1.0))).epsilon(1e-12));
  }
}

TEST_CASE("isotropic states follow the closed form") {
  const WitnessOperator w = build_witness(build_sic(3), identity_rotation(3));
  for (double alpha : {0.0, 0.1, 0.25, 0.5, 0.9}) {
    const double expect = 1.0 / 6.0 - (2.0 * alpha + 1.0) / 9.0;
    CHECK(evaluate(w, isotropic_state(3, alpha)) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(evaluate(w, isotropic_state(3, 0.25)) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("choi consistency gap") {
  for (int d : {2, 3}) {
    const PositiveMapSpec spec = make_map_spec(
        build_sic(d), d == 2 ? random_axis_rotation(2, std::uint64_t{9})
                             : identity_rotation(3));
    const ChoiReport rep = choi_consistency(spec);
    const double kappa = (d - 1.0) * (d - 1.0) / (d * d * (d + 1.0));
    CHECK(rep.kappa == doctest::Approx(kappa).epsilon(1e-10));
    CHECK(rep.residual < 1e-12);
    CHECK(rep.choi_constant ==
          doctest::Approx((d * d + 1.0) / (d * d * (d + 1.0))).epsilon(1e-10));
  }
}

TEST_CASE("see-saw certifies block positivity") {
  const WitnessOperator w = build_witness(build_sic(3), identity_rotation(3));
  const double min_id = min_product_expectation(w, 50, 11);
  CHECK(min_id >= -1e-8);
  CHECK(min_id <= 1e-6);  // the bound is tight at O = I

  std::mt19937_64 rng(45);
  for (int r = 0; r < 5; ++r) {
    const WitnessOperator wr =
        build_witness(build_sic(2), random_axis_rotation(2, rng));
    CHECK(min_product_expectation(wr, 30, r) >= -1e-8);
  }

  // negative control: shifting the witness down moves the minimum with it
  WitnessOperator shifted = w;
  shifted.matrix -= 0.01 * Mat::Identity(9, 9);
  const double min_shifted = min_product_expectation(shifted, 30, 13);
  CHECK(min_shifted == doctest::Approx(min_id - 0.01).epsilon(1e-6));
}

TEST_CASE("the witness has negative eigenvalues") {
  for (int d : {2, 3}) {
    const WitnessOperator w = build_witness(build_sic(d), identity_rotation(d));
    CHECK(min_eigenvalue(w) <= -1.0 / 6.0 + 1e-9);
  }
  // negative control: a huge constant makes the operator positive
  WitnessOperator fat = build_witness(build_sic(3), identity_rotation(3));
  fat.matrix += (10.0 - fat.c) * Mat::Identity(9, 9);
  CHECK(min_eigenvalue(fat) > 0.0);
}

TEST_CASE("expectation matrix reproduces evaluate") {
  std::mt19937_64 rng(46);
  const Povm sic = build_sic(3);
  const DensityMatrix rho = random_density(9, rng);
  const RMat m = witness_expectation_matrix(sic, rho);
  for (int r = 0; r < 5; ++r) {
    const AxisRotation o = random_axis_rotation(3, rng);
    const WitnessOperator w = build_witness(sic, o);
    CHECK(rotation_value(sic, m, o) ==
          doctest::Approx(evaluate(w, rho)).epsilon(1e-10));
  }
}

TEST_CASE("rotation optimization") {
  const Povm sic = build_sic(3);

  SUBCASE("maximally entangled state: identity is already optimal") {
    const OptimizedRotation best =
        optimize_rotation(sic, max_entangled_state(3));
    CHECK(best.value == doctest::Approx(-1.0 / 6.0).epsilon(1e-10));
    CHECK(rotation_violation(best.rotation) < 1e-9);
  }

  SUBCASE("maximally mixed state is never flagged") {
    const OptimizedRotation best =
        optimize_rotation(sic, isotropic_state(3, 0.0));
    CHECK(best.value == doctest::Approx(2.0 / 36.0).epsilon(1e-12));
  }

  SUBCASE("dominates random rotations") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 5; ++trial) {
      const DensityMatrix rho = random_density(9, rng);
      const RMat m = witness_expectation_matrix(sic, rho);
      const OptimizedRotation best = optimize_rotation(sic, rho);
      for (int r = 0; r < 100; ++r) {
        const int sign = (r & 1) ? -1 : 1;
        CHECK(best.value <=
              rotation_value(sic, m, random_axis_rotation(3, rng, sign)) +
                  1e-9);
      }
    }
  }
}

TEST_CASE("isotropic scan") {
  const Povm sic = build_sic(3);
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  const IsotropicScan scan = scan_isotropic(sic, identity_rotation(3), grid);
  CHECK(scan.rows.front().value == doctest::Approx(1.0 / 18.0).epsilon(1e-12));
  CHECK(scan.rows[10].value == doctest::Approx(-1.0 / 18.0).epsilon(1e-12));
  CHECK(!scan.rows.front().entangled);
  CHECK(scan.rows[10].entangled);
  CHECK(scan.threshold == doctest::Approx(0.25).epsilon(1e-8));

  // GSIC threshold is a-independent
  const IsotropicScan gs =
      scan_isotropic(build_gsic(3, 1.0 / 12.0), identity_rotation(3), grid);
  CHECK(gs.threshold == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("bell-diagonal scan") {
  const Povm sic = build_sic(3);
  std::vector<double> grid{0.0, 1.0 / 9.0, 1.0 / 3.0, 0.5, 1.0};
  const BellDiagonalScan scan =
      scan_bell_diagonal(sic, identity_rotation(3), grid);
  // p = 1/d^2 reproduces the maximally mixed state
  CHECK(scan.rows[1].value == doctest::Approx(2.0 / 36.0).epsilon(1e-12));
  CHECK(scan.rows[4].value == doctest::Approx(-1.0 / 6.0).epsilon(1e-12));
  CHECK(scan.affine_root == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(scan.caption_value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("expectations on Hermitian states are real") {
  std::mt19937_64 rng(48);
  const WitnessOperator w =
      build_witness(build_sic(3), random_axis_rotation(3, rng));
  for (int trial = 0; trial < 20; ++trial)
    CHECK_NOTHROW(evaluate(w, random_density(9, rng)));
}

TEST_CASE("separable states are never flagged (spot check)") {
  std::mt19937_64 rng(49);
  const Povm sic = build_sic(3);
  std::vector<WitnessOperator> witnesses;
  witnesses.push_back(build_witness(sic, identity_rotation(3)));
  for (int r = 0; r < 3; ++r)
    witnesses.push_back(build_witness(sic, random_axis_rotation(3, rng)));
  for (int trial = 0; trial < 100; ++trial) {
    const DensityMatrix a = random_density(3, rng);
    const DensityMatrix b = random_density(3, rng);
    const DensityMatrix prod{tensor(a.op, b.op), 1e-9};
    for (const auto& w : witnesses) CHECK(evaluate(w, prod) >= -1e-8);
  }
}

TEST_CASE("witness file header") {
  const WitnessOperator w = build_witness(build_sic(2), identity_rotation(2));
  const std::string path = "witness_out.txt";
  save_witness(w, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("witness d=2 c=0.33", 0) == 0);
  std::string rest((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  const Mat m = parse_matrix(rest);
  CHECK((m - w.matrix).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}
