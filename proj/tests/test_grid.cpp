#include <doctest.h>

#include "core/grid.hpp"
#include "core/rng.hpp"

#include <cstdio>
#include <fstream>
#include <string>

using namespace fmpos;

namespace {

GridField random_field(const GridSpec& spec, int components, uint64_t seed) {
  Rng rng(seed);
  GridField f = zero_field(spec, components);
  for (auto& comp : f.data)
    for (Complex& v : comp) v = Complex(rng.normal(), rng.normal());
  return f;
}

struct TempPath {
  std::string path;
  explicit TempPath(const std::string& name) : path("/tmp/fmpos_test_" + name) {}
  ~TempPath() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("grid validation") {
  GridSpec ok;
  ok.dim = 2;
  ok.samples = 16;
  ok.length = 4.0;
  CHECK_NOTHROW(validate_grid(ok));

  GridSpec bad = ok;
  bad.dim = 4;
  CHECK_THROWS_AS(validate_grid(bad), ToolkitError);
  bad = ok;
  bad.samples = 12;  // not a power of two
  CHECK_THROWS_AS(validate_grid(bad), ToolkitError);
  bad = ok;
  bad.samples = 4;  // below 8
  CHECK_THROWS_AS(validate_grid(bad), ToolkitError);
  bad = ok;
  bad.length = 0.0;
  CHECK_THROWS_AS(validate_grid(bad), ToolkitError);
}

TEST_CASE("coordinates and frequencies on a pinned grid") {
  GridSpec s;
  s.dim = 1;
  s.samples = 8;
  s.length = 8.0;
  CHECK(spacing(s) == 1.0);
  CHECK(coordinate(s, 0) == -4.0);
  CHECK(coordinate(s, 7) == 3.0);
  CHECK(freq_spacing(s) == doctest::Approx(2.0 * M_PI / 8.0));
  CHECK(frequency(s, 4) == 0.0);
  CHECK(frequency(s, 0) == doctest::Approx(-4.0 * 2.0 * M_PI / 8.0));
  CHECK(total_points(s) == 8);
}

TEST_CASE("flatten and unflatten are inverse") {
  GridSpec s;
  s.dim = 3;
  s.samples = 8;
  s.length = 2.0;
  CHECK(total_points(s) == 512);
  for (long flat : {0L, 1L, 63L, 100L, 511L}) {
    int idx[3];
    unflatten(s, flat, idx);
    CHECK(flatten(s, idx) == flat);
  }
  int idx[3] = {1, 2, 3};
  // row-major: last axis fastest
  CHECK(flatten(s, idx) == 1 * 64 + 2 * 8 + 3);
  RVector p = point_at(s, flatten(s, idx));
  CHECK(p(0) == doctest::Approx(coordinate(s, 1)));
  CHECK(p(2) == doctest::Approx(coordinate(s, 3)));
}

TEST_CASE("field statistics") {
  GridSpec s;
  s.dim = 1;
  s.samples = 8;
  s.length = 8.0;
  GridField f = zero_field(s, 2);
  f.data[0][3] = Complex(-2.5, 0.0);
  f.data[1][5] = Complex(4.0, 0.25);
  CHECK(field_max_abs(f) == doctest::Approx(std::abs(Complex(4.0, 0.25))));
  int comp = -1;
  long flat = -1;
  CHECK(field_min_real(f, &comp, &flat) == -2.5);
  CHECK(comp == 0);
  CHECK(flat == 3);
  CHECK(field_max_imag_abs(f) == 0.25);
}

TEST_CASE("binary container roundtrip is exact") {
  GridSpec s;
  s.dim = 2;
  s.samples = 16;
  s.length = 5.0;
  GridField f = random_field(s, 3, 99);
  TempPath tmp("roundtrip.mplb");
  write_field(f, tmp.path);
  GridField g = read_field(tmp.path);
  CHECK(g.spec.dim == 2);
  CHECK(g.spec.samples == 16);
  CHECK(g.spec.length == 5.0);
  CHECK(g.components == 3);
  for (int c = 0; c < 3; ++c)
    for (long i = 0; i < total_points(s); ++i)
      CHECK(g.data[c][i] == f.data[c][i]);
}

TEST_CASE("binary container rejects corruption") {
  GridSpec s;
  s.dim = 1;
  s.samples = 8;
  s.length = 1.0;
  GridField f = random_field(s, 1, 7);
  TempPath tmp("corrupt.mplb");
  write_field(f, tmp.path);

  // truncate
  {
    std::ifstream in(tmp.path, std::ios::binary);
    std::string all((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
    std::ofstream out(tmp.path, std::ios::binary | std::ios::trunc);
    out.write(all.data(), static_cast<long>(all.size()) - 9);
  }
  CHECK_THROWS_AS(read_field(tmp.path), ToolkitError);

  // bad magic
  {
    std::ofstream out(tmp.path, std::ios::binary | std::ios::trunc);
    out << "NOPE garbage";
  }
  CHECK_THROWS_AS(read_field(tmp.path), ToolkitError);

  CHECK_THROWS_AS(read_field("/tmp/fmpos_no_such_file.mplb"), ToolkitError);
}

TEST_CASE("csv slice export") {
  GridSpec s;
  s.dim = 2;
  s.samples = 8;
  s.length = 4.0;
  GridField f = zero_field(s, 2);
  // axis-0 line through row center: j = (i, N/2)
  for (int i = 0; i < 8; ++i) {
    int idx[2] = {i, 4};
    f.data[0][flatten(s, idx)] = Complex(i, -i);
    f.data[1][flatten(s, idx)] = Complex(0.5, 0.0);
  }
  TempPath tmp("slice.csv");
  export_csv_slice(f, tmp.path);
  std::ifstream in(tmp.path);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "x,re_0,im_0,re_1,im_1");
  // first row is x = -2 with component 0 value (0, 0)
  CHECK(first.substr(0, 3) == "-2,");
  int rows = 1;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 8);
}
