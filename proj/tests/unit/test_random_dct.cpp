#include <doctest.h>

#include <vector>

#include "entromin/dct.hpp"
#include "entromin/random.hpp"
#include "oracles.hpp"

using namespace entromin;

TEST_CASE("engines are reproducible per (master, stream)") {
  Engine a = make_engine({42, 3}), b = make_engine({42, 3}), c = make_engine({42, 4});
  const Vector va = gaussian_vector(a, 16), vb = gaussian_vector(b, 16), vc = gaussian_vector(c, 16);
  CHECK(va == vb);
  CHECK(va != vc);
}

TEST_CASE("derive_seed depends on every path element") {
  const auto s = derive_seed(1, {1, 2, 3});
  CHECK(s == derive_seed(1, {1, 2, 3}));
  CHECK(s != derive_seed(2, {1, 2, 3}));
  CHECK(s != derive_seed(1, {1, 2, 4}));
  CHECK(s != derive_seed(1, {2, 1, 3}));
}

TEST_CASE("format_double round-trips and names non-finite values") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
  const double v = 1.0 / 3.0;
  CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("orthonormal DCT matches the cosine matrix") {
  for (Index n : {Index{1}, Index{2}, Index{7}, Index{16}, Index{33}}) {
    CAPTURE(n);
    OrthonormalDct dct(n);
    const Eigen::MatrixXd c = oracle::dct_matrix(n);
    Engine eng = make_engine({5, static_cast<std::uint64_t>(n)});
    const Vector x = gaussian_vector(eng, n);
    Vector fx(n), back(n);
    dct.forward({x.data(), static_cast<size_t>(n)}, {fx.data(), static_cast<size_t>(n)});
    CHECK((fx - c * x).norm() < 1e-12 * (1 + x.norm()));
    dct.inverse({fx.data(), static_cast<size_t>(n)}, {back.data(), static_cast<size_t>(n)});
    CHECK((back - x).norm() < 1e-12 * (1 + x.norm()));
    CHECK(std::abs(fx.norm() - x.norm()) < 1e-10);
  }
}
