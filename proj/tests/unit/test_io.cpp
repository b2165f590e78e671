#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "entromin/config.hpp"
#include "entromin/experiments.hpp"
#include "entromin/pgm.hpp"

using namespace entromin;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "entromin_unit";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("PGM round trip and crop") {
  GrayImage img;
  img.width = 5;
  img.height = 3;
  img.pixels = Vector::LinSpaced(15, -10.0, 300.0);
  const auto path = scratch("rt.pgm");
  write_pgm(path, img);
  const auto back = read_pgm(path);
  CHECK(back.width == 5);
  CHECK(back.height == 3);
  CHECK(back.pixels(0) == 0.0);
  CHECK(back.pixels(14) == 255.0);
  for (Index i = 1; i < 14; ++i) CHECK(back.pixels(i) == std::round(std::clamp(img.pixels(i), 0.0, 255.0)));
  const auto c = crop_square(back, 3);
  CHECK(c.width == 3);
  CHECK(c.pixels(3) == back.pixels(5));
  CHECK_THROWS_AS(crop_square(back, 4), DomainError);
}

TEST_CASE("PGM errors") {
  CHECK_THROWS_AS(read_pgm(scratch("does_not_exist.pgm")), FormatError);
  {
    std::ofstream(scratch("p2.pgm")) << "P2\n2 2\n255\n1 2 3 4\n";
  }
  CHECK_THROWS_AS(read_pgm(scratch("p2.pgm")), FormatError);
  {
    std::ofstream(scratch("short.pgm"), std::ios::binary) << "P5\n4 4\n255\nabc";
  }
  CHECK_THROWS_AS(read_pgm(scratch("short.pgm")), FormatError);
  {
    std::ofstream(scratch("deep.pgm"), std::ios::binary) << "P5\n1 1\n65535\nab";
  }
  CHECK_THROWS_AS(read_pgm(scratch("deep.pgm")), FormatError);
}

TEST_CASE("bundled test image") {
  const auto img = read_pgm(fs::path(ENTROMIN_TEST_DATA) / "camera64.pgm");
  CHECK(img.width == 64);
  CHECK(img.height == 64);
}

TEST_CASE("solver config JSON round trip") {
  SolverConfig c;
  c.regularizer = RegularizerSpec::ref(1.1, 1.3);
  c.lambda0 = 0.25;
  c.continuation_ratio.reset();
  c.acceleration = Acceleration::None;
  c.init_lambda = 1e-3;
  const json j = to_json(c);
  const SolverConfig back = solver_config_from_json(j);
  CHECK(back.regularizer == c.regularizer);
  CHECK(back.lambda0 == c.lambda0);
  CHECK_FALSE(back.continuation_ratio.has_value());
  CHECK_FALSE(back.kappa.has_value());
  CHECK(back.acceleration == Acceleration::None);
  CHECK(back.init_lambda == c.init_lambda);
  CHECK(to_json(back).dump() == j.dump());
}

TEST_CASE("experiment configs round trip") {
  const auto g = desk_phase_transition_grid();
  CHECK(to_json(experiment_grid_from_json(to_json(g))).dump() == to_json(g).dump());
  const auto n = desk_noisy_sweep();
  CHECK(to_json(noisy_sweep_from_json(to_json(n))).dump() == to_json(n).dump());
  const auto im = desk_image_experiment();
  CHECK(to_json(image_experiment_from_json(to_json(im))).dump() == to_json(im).dump());
  const auto d = make_srm(10, 20, {3, 4}).descriptor();
  const auto d2 = operator_descriptor_from_json(to_json(d));
  CHECK(d2.generator == "srm");
  CHECK(d2.seed == d.seed);
}

TEST_CASE("unknown keys and bad values are rejected") {
  CHECK_THROWS_AS(solver_config_from_json(json::parse(R"({"outer_tol": 1e-6, "outr_max_iters": 3})")), FormatError);
  CHECK_THROWS_AS(solver_config_from_json(json::parse(R"({"outer_tol": "small"})")), FormatError);
  CHECK_THROWS_AS(regularizer_from_json(json::parse(R"({"p": 1.0})")), FormatError);
  CHECK_THROWS_AS(regularizer_from_json(json::parse(R"({"kind": "sef", "p": -1.0})")), DomainError);
  const auto partial = solver_config_from_json(json::parse(R"({"regularizer": {"kind": "lpp", "p": 0.5}})"));
  CHECK(partial.regularizer.kind() == RegularizerKind::LpP);
  CHECK(partial.outer_tol == SolverConfig{}.outer_tol);
}
