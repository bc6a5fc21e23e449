#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>
#include <sstream>

#include "emanakey/error.hpp"
#include "emanakey/presets.hpp"
#include "emanakey/trace_io.hpp"

using namespace emanakey;

namespace {

EmanationTrace random_trace(std::size_t n) {
  std::mt19937 rng(1);
  std::normal_distribution<float> g;
  EmanationTrace t;
  t.sample_rate = 250e6;
  t.samples.resize(n);
  for (auto& v : t.samples) v = g(rng);
  return t;
}

std::string serialize(const EmanationTrace& t) {
  std::ostringstream out;
  write_trace(t, out);
  return out.str();
}

EmanationTrace parse(const std::string& bytes) {
  std::istringstream in(bytes);
  return read_trace(in);
}

SweepReport sample_report() {
  SweepReport r;
  r.config = R"({"repeats":3,"seed":7})";
  r.rows = {{"open-space-3m", 4.05, 1e-5, "a", 3, 3, 1.0, 0.0333},
            {"open-space-3m", 4.05, 1e-5, ",", 3, 2, 0.9812345678901234, 0.01},
            {"say \"hi\"", -1.5, 0.0, "ENTER", 3, 0, 0.5, -0.25}};
  return r;
}

}  // namespace

TEST_CASE("trace round trip") {
  auto t = random_trace(1'000'000);
  t.ground_truth = KeyId::from_label("q");
  t.preset = open_space_preset(3.0);
  t.seed = 0xDEADBEEFCAFEULL;
  const auto bytes = serialize(t);
  CHECK(bytes.size() > kTraceHeaderSize + 4'000'000);
  CHECK(bytes.substr(0, 4) == "EMTR");
  CHECK(parse(bytes) == t);

  SUBCASE("without metadata") {
    const auto bare = random_trace(10);
    CHECK(parse(serialize(bare)) == bare);
  }
  SUBCASE("file path") {
    const auto path = std::filesystem::temp_directory_path() / "emanakey_io_test.emtr";
    write_trace(t, path);
    CHECK(read_trace(path) == t);
    CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_trace(path), IoError);
  }
}

TEST_CASE("trace header layout") {
  const auto bytes = serialize(random_trace(3));
  CHECK(static_cast<unsigned char>(bytes[4]) == 1);  // version
  std::uint64_t rate = 0, count = 0;
  std::memcpy(&rate, bytes.data() + 6, 8);
  std::memcpy(&count, bytes.data() + 15, 8);
  CHECK(rate == 250'000'000);
  CHECK(static_cast<unsigned char>(bytes[14]) == 1);  // channels
  CHECK(count == 3);
}

TEST_CASE("malformed trace files") {
  const auto bytes = serialize(random_trace(100));
  CHECK_THROWS_AS(parse("EMRF" + bytes.substr(4)), FormatError);
  auto v = bytes;
  v[4] = 2;
  CHECK_THROWS_AS(parse(v), VersionMismatch);
  CHECK_THROWS_AS(parse(bytes.substr(0, 10)), TruncatedFile);
  CHECK_THROWS_AS(parse(bytes.substr(0, kTraceHeaderSize + 50)), TruncatedFile);
  CHECK_THROWS_AS(parse(bytes.substr(0, bytes.size() - 1)), TruncatedFile);
  CHECK_THROWS_AS(parse(""), TruncatedFile);
  auto bad_rate = random_trace(4);
  bad_rate.sample_rate = 1000.5;
  CHECK_THROWS_AS(serialize(bad_rate), InvalidArgument);
}

TEST_CASE("CSV import") {
  SUBCASE("plain samples") {
    std::istringstream in("0.5\n-1e-3\n\n2\n");
    const auto t = import_csv(in, 100e6);
    CHECK(t.samples == std::vector<float>{0.5f, -1e-3f, 2.0f});
    CHECK(t.sample_rate == 100e6);
    CHECK_FALSE(t.ground_truth.has_value());
  }
  SUBCASE("header line") {
    std::istringstream in("volts\n1\n2\n");
    CHECK(import_csv(in, 1e6).samples == std::vector<float>{1.0f, 2.0f});
  }
  SUBCASE("bad line is reported by number") {
    std::istringstream in("v\n1\n2\n3\n4\n5\nabc\n");
    try {
      import_csv(in, 1e6);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 7);
    }
  }
  SUBCASE("empty input") {
    std::istringstream in("");
    CHECK(import_csv(in, 1e6).samples.empty());
  }
}

TEST_CASE("sweep report") {
  const auto r = sample_report();
  const auto agg = r.aggregates();
  REQUIRE(agg.size() == 2);
  CHECK(agg[0].trials == 6);
  CHECK(agg[0].correct == 5);
  CHECK(agg[1].accuracy() == 0.0);

  for (auto fmt : {ReportFormat::Csv, ReportFormat::Json}) {
    std::stringstream buf;
    write_report(r, buf, fmt);
    CHECK(read_report(buf, fmt) == r);
  }

  std::ostringstream csv;
  write_report(r, csv, ReportFormat::Csv);
  const auto text = csv.str();
  CHECK(text.rfind("# config: ", 0) == 0);
  CHECK(text.find("\",\"") != std::string::npos);
  CHECK(text.find("\"say \"\"hi\"\"\"") != std::string::npos);

  CHECK_THROWS_AS(write_report(SweepReport{}, csv, ReportFormat::Csv), InvalidArgument);
  std::istringstream junk("{not json");
  CHECK_THROWS_AS(read_report(junk, ReportFormat::Json), ParseError);
}
