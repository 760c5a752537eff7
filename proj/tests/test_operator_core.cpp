#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "sicwit/operator_core.hpp"

using namespace sicwit;

namespace {

Mat random_complex(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

Mat random_hermitian(int dim, std::mt19937_64& rng) {
  const Mat g = random_complex(dim, dim, rng);
  return (g + g.adjoint()) / 2.0;
}

}  // namespace

TEST_CASE("tensor basics") {
  const Mat i2 = Mat::Identity(2, 2);
  CHECK((tensor(i2, i2) - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

  Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
  a(0, 0) = 1.0;
  b(1, 1) = 1.0;
  Mat expect = Mat::Zero(4, 4);
  expect(1, 1) = 1.0;
  CHECK((tensor(a, b) - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("tensor trace is multiplicative") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat a = random_complex(3, 3, rng), b = random_complex(3, 3, rng);
    const Mat t = tensor(a, b);
    // independent oracle: expand the trace entry by entry
    cplx tr = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) tr += a(i, i) * b(k, k);
    CHECK(std::abs(t.trace() - tr) < 1e-12);
    CHECK(std::abs(t.trace() - a.trace() * b.trace()) < 1e-12);
  }
}

TEST_CASE("tensor associativity") {
  std::mt19937_64 rng(8);
  const Mat a = random_complex(2, 2, rng), b = random_complex(3, 3, rng),
            c = random_complex(2, 2, rng);
  CHECK((tensor(tensor(a, b), c) - tensor(a, tensor(b, c)))
            .cwiseAbs()
            .maxCoeff() < 1e-14);
}

TEST_CASE("partial transpose of a product") {
  std::mt19937_64 rng(9);
  const Mat a = random_complex(2, 2, rng), b = random_complex(3, 3, rng);
  const Mat w = tensor(a, b);
  CHECK((partial_transpose(w, 2, 3, Subsystem::B) - tensor(a, b.transpose()))
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  CHECK((partial_transpose(w, 2, 3, Subsystem::A) - tensor(a.transpose(), b))
            .cwiseAbs()
            .maxCoeff() < 1e-15);
}

TEST_CASE("partial transpose of phi+ has min eigenvalue -1/d") {
  const int d = 3;
  Vec phi = Vec::Zero(d * d);
  for (int i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(double(d));
  const Mat pt = partial_transpose(phi * phi.adjoint(), d, d, Subsystem::B);
  CHECK(eig_hermitian(pt).values.minCoeff() == doctest::Approx(-1.0 / d).epsilon(1e-12));
}

TEST_CASE("partial transpose is an involution") {
  std::mt19937_64 rng(10);
  const Mat w = random_hermitian(6, rng);
  const Mat twice = partial_transpose(
      partial_transpose(w, 2, 3, Subsystem::B), 2, 3, Subsystem::B);
  CHECK((twice - w).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(partial_transpose(w, 2, 2, Subsystem::B), DimensionError);
}

TEST_CASE("eig_hermitian on simple inputs") {
  Mat d3 = Mat::Zero(3, 3);
  d3(0, 0) = 3.0;
  d3(1, 1) = 1.0;
  d3(2, 2) = 2.0;
  const EigResult r = eig_hermitian(d3);
  CHECK(r.values(0) == doctest::Approx(1.0));
  CHECK(r.values(1) == doctest::Approx(2.0));
  CHECK(r.values(2) == doctest::Approx(3.0));

  Vec phi = Vec::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  const EigResult p = eig_hermitian(phi * phi.adjoint());
  CHECK(p.values.head(3).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(p.values(3) == doctest::Approx(1.0));

  Mat bad = Mat::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(eig_hermitian(bad), ValidationError);
}

TEST_CASE("eig_hermitian residuals and reconstruction") {
  std::mt19937_64 rng(11);
  for (int dim = 2; dim <= 16; ++dim) {
    const Mat a = random_hermitian(dim, rng);
    const double scale = a.cwiseAbs().maxCoeff();
    const EigResult r = eig_hermitian(a);
    Mat recon = Mat::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      const Vec v = r.vectors.col(i);
      CHECK((a * v - r.values(i) * v).norm() <= 1e-10 * scale);
      recon += r.values(i) * (v * v.adjoint());
    }
    CHECK((recon - a).cwiseAbs().maxCoeff() <= 1e-9 * scale);
    CHECK((r.vectors.adjoint() * r.vectors - Mat::Identity(dim, dim))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
  }
}

TEST_CASE("random pure states") {
  const PureState one = random_pure_state(1, std::uint64_t{42});
  CHECK(std::abs(std::abs(one.amplitudes(0)) - 1.0) < 1e-12);

  std::mt19937_64 rng(5);
  double mean = 0.0;
  const int samples = 100000;
  for (int s = 0; s < samples; ++s) {
    const PureState psi = random_pure_state(3, rng);
    CHECK(std::abs(psi.amplitudes.norm() - 1.0) < 1e-12);
    mean += std::norm(psi.amplitudes(0));
  }
  mean /= samples;
  CHECK(std::abs(mean - 1.0 / 3.0) < 5e-3);  // unitary invariance

  // deterministic given seed
  const PureState a = random_pure_state(4, std::uint64_t{77});
  const PureState b = random_pure_state(4, std::uint64_t{77});
  CHECK((a.amplitudes - b.amplitudes).norm() == 0.0);
}

TEST_CASE("matrix parsing") {
  const Mat i2 = parse_matrix("1 0\n0 1");
  CHECK((i2 - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);

  const Mat ex = parse_matrix("0.18 0.19-0.015i\n0.19+0.015i 0.21");
  CHECK(ex(0, 1) == cplx(0.19, -0.015));
  CHECK(ex(1, 0) == cplx(0.19, 0.015));
  CHECK(ex(1, 1) == cplx(0.21, 0.0));

  const Mat sci = parse_matrix("1.5e-3+2e-4i");
  CHECK(sci(0, 0) == cplx(1.5e-3, 2e-4));

  const Mat commented = parse_matrix("# header\n1 0\n0 1");
  CHECK(commented.rows() == 2);

  CHECK_THROWS_WITH_AS(parse_matrix("1 2\n3"), doctest::Contains("ragged"),
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_matrix("1 banana\n0 1"),
                       doctest::Contains("row 1, column 2"), ParseError);
  CHECK_THROWS_AS(parse_matrix("1+2"), ParseError);
  CHECK_THROWS_AS(parse_matrix(""), ParseError);
}

TEST_CASE("serialize round-trips exactly") {
  std::mt19937_64 rng(13);
  const Mat a = random_complex(4, 4, rng);
  const Mat back = parse_matrix(serialize_matrix(a));
  CHECK((back - a).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("density validation") {
  CHECK_NOTHROW(make_density(Mat::Identity(3, 3) / 3.0, 1e-6));

  Mat bad = Mat::Zero(2, 2);
  bad(0, 0) = 1.1;
  bad(1, 1) = -0.1;
  CHECK_THROWS_AS(make_density(bad, 1e-6), ValidationError);

  const RepairedDensity fixed = repair_density(bad);
  CHECK(fixed.rho.op.trace().real() == doctest::Approx(1.0));
  CHECK(eig_hermitian(fixed.rho.op).values.minCoeff() >= -1e-14);
  CHECK(fixed.repair_distance > 0.0);
}
