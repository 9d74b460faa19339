#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "excursion/errors.hpp"
#include "excursion/io.hpp"
#include "support.hpp"

using namespace excursion;

TEST_CASE("PBM round trip keeps orientation and grid") {
  const auto z = testing::binary_from_rows({"0011", "0110", "1100", "1000"}, 1.5);
  std::stringstream buffer;
  io::write_pbm(buffer, z);
  const std::string text = buffer.str();
  CHECK(text.rfind("P1\n# t=1.5 epsilon=1\n4 4\n0 0 1 1\n", 0) == 0);
  const auto back = io::read_pbm(buffer);
  CHECK(back.spec() == z.spec());
  CHECK((back.values() == z.values()).all());
}

TEST_CASE("PBM without grid comment is read in pixel units") {
  std::stringstream in("P1\n3 3\n1 0 0\n0 1 0\n0 0 1\n");
  const auto z = io::read_pbm(in);
  CHECK(z.size() == 3);
  CHECK(z.spec().pixel_width() == 1.0);
  CHECK(z(0, 2) == 1);
  CHECK(z(2, 0) == 1);
  CHECK(z(0, 0) == 0);
}

TEST_CASE("malformed PBM is an I/O error") {
  std::stringstream bad_magic("P4\n2 2\n");
  CHECK_THROWS_AS(io::read_pbm(bad_magic), IoError);
  std::stringstream not_square("P1\n2 3\n0 0\n0 0\n0 0\n");
  CHECK_THROWS_AS(io::read_pbm(not_square), IoError);
  std::stringstream short_data("P1\n2 2\n0 1 1\n");
  CHECK_THROWS_AS(io::read_pbm(short_data), IoError);
  std::stringstream bad_pixel("P1\n2 2\n0 1 2 0\n");
  CHECK_THROWS_AS(io::read_pbm(bad_pixel), IoError);
  CHECK_THROWS_AS(io::load_pbm("/nonexistent/file.pbm"), IoError);
}

TEST_CASE("GRF1 round trip is bit exact") {
  const auto spec = GridSpec::from_half_width(2.5, 33);
  const auto f = ScalarField::sample(spec, [](double x, double y) { return std::sin(3 * x) * std::exp(y) / 7.0; });
  std::stringstream buffer;
  io::write_grf1(buffer, f);
  const auto back = io::read_grf1(buffer);
  CHECK(back.spec() == spec);
  CHECK((back.values() == f.values()).all());

  const auto path = std::filesystem::temp_directory_path() / "excursion_io_roundtrip.grf1";
  io::save_grf1(path.string(), f);
  CHECK((io::load_grf1(path.string()).values() == f.values()).all());
  std::filesystem::remove(path);
}

TEST_CASE("truncated GRF1 is an I/O error") {
  const auto spec = GridSpec::from_half_width(1.0, 4);
  const auto f = ScalarField::sample(spec, [](double x, double) { return x; });
  std::stringstream buffer;
  io::write_grf1(buffer, f);
  const std::string text = buffer.str();
  std::stringstream cut(text.substr(0, text.size() - 3));
  CHECK_THROWS_AS(io::read_grf1(cut), IoError);
  std::stringstream header("GRF1 rows=4 cols=5 t=1 epsilon=0.5\n");
  CHECK_THROWS_AS(io::read_grf1(header), IoError);
}

TEST_CASE("decimal formatting round trips") {
  for (double x : {0.1, 1.0 / 3.0, 5.0 / 511.0, -2.5, 1e-300, 123456789.125}) {
    CHECK(std::stod(io::format_decimal(x)) == x);
  }
  CHECK(io::format_decimal(1.5) == "1.5");
}
