#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "emanakey/presets.hpp"
#include "emanakey/reference_set.hpp"
#include "emanakey/trace_io.hpp"

namespace fs = std::filesystem;
using namespace emanakey;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

class Sandbox {
 public:
  Sandbox() : dir_(fs::temp_directory_path() / ("emanakey_cli_" + std::to_string(::getpid()))) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Sandbox() { fs::remove_all(dir_); }
  fs::path operator/(const fs::path& name) const { return dir_ / name; }

  Run run(const std::string& args, const std::string& env = "") const {
    const auto log = dir_ / "out.txt";
    const std::string cmd = env + " \"" EMANAKEY_CLI "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(log);
    return r;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

 private:
  fs::path dir_;
};

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("usage errors") {
  Sandbox box;
  CHECK(box.run("").code == 2);
  CHECK(box.run("frobnicate").code == 2);
  CHECK(box.run("gen-refs").code == 2);
  CHECK(box.run("gen-refs --method magic --out x").code == 2);
  CHECK(box.run("--help").code == 0);
}

TEST_CASE("gen-refs") {
  Sandbox box;
  const auto a = box / "a.emrf", p = box / "p.emrf";
  const auto r = box.run("gen-refs --method analytic --out " + q(a));
  CHECK(r.code == 0);
  CHECK(contains(r.out, "closest pair '0' / '6' at distance 4"));
  std::ifstream in(a, std::ios::binary);
  CHECK(read_reference_file(in).size() == 70);
  CHECK(box.run("gen-refs --method pipeline --out " + q(p)).code == 0);
  CHECK(Sandbox::slurp(a) == Sandbox::slurp(p));
  const auto again = box.run("gen-refs --out " + q(a));
  CHECK(again.code == 2);
  CHECK(contains(again.out, "--force"));
  CHECK(box.run("gen-refs --force --out " + q(a)).code == 0);
}

TEST_CASE("synth") {
  Sandbox box;
  CHECK(box.run("synth --keys all --repeats 2 --seed 3 --out-dir " + q(box / "d1")).code == 0);
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(box / "d1")) n += e.path().extension() == ".emtr";
  CHECK(n == 140);
  CHECK(box.run("synth --keys a,ENTER --repeats 2 --seed 3 --out-dir " + q(box / "d2")).code == 0);
  CHECK(box.run("synth --keys a,ENTER --repeats 2 --seed 3 --out-dir " + q(box / "d4")).code == 0);
  for (const char* f : {"key10-r000.emtr", "key10-r001.emtr", "key69-r000.emtr", "key69-r001.emtr"}) {
    CHECK(Sandbox::slurp(box / "d2" / f) == Sandbox::slurp(box / "d4" / f));
  }
  CHECK(box.run("synth --keys a --out-dir " + q(box / "d2")).code == 2);

  const auto bad = box.run("synth --preset nowhere --out-dir " + q(box / "d3"));
  CHECK(bad.code == 2);
  CHECK(contains(bad.out, "open-space-3.8m"));
  CHECK_FALSE(fs::exists(box / "d3"));

  CHECK(box.run("synth --keys a --out-dir " + q(box / "e1"), "EMANAKEY_SEED=11").code == 0);
  CHECK(box.run("synth --keys a --seed 11 --out-dir " + q(box / "e2")).code == 0);
  CHECK(Sandbox::slurp(box / "e1/key10-r000.emtr") == Sandbox::slurp(box / "e2/key10-r000.emtr"));
  std::ifstream in(box / "e1/key10-r000.emtr", std::ios::binary);
  CHECK(read_trace(in).seed == derive_seed(11, 0));
}

TEST_CASE("detect") {
  Sandbox box;
  ChannelPreset identity;
  identity.name = "identity";
  std::ofstream(box / "identity.json") << preset_to_json(identity);
  REQUIRE(box.run("synth --keys ENTER --preset " + q(box / "identity.json") + " --out-dir " + q(box / "t")).code == 0);

  const auto r = box.run("detect --trace " + q(box / "t/key69-r000.emtr"));
  CHECK(r.code == 0);
  CHECK(contains(r.out, "key: ENTER\n"));
  CHECK(contains(r.out, "score: 1.000000\n"));

  REQUIRE(box.run("gen-refs --out " + q(box / "r.emrf")).code == 0);
  CHECK(box.run("detect --trace " + q(box / "t/key69-r000.emtr") + " --refs " + q(box / "r.emrf")).code == 0);

  EmanationTrace zero;
  zero.sample_rate = 250e6;
  zero.samples.assign(3500, 0.0f);
  write_trace(zero, box / "zero.emtr");
  const auto ns = box.run("detect --trace " + q(box / "zero.emtr"));
  CHECK(ns.code == 4);
  CHECK_FALSE(contains(ns.out, "key:"));

  std::ofstream(box / "junk.emrf") << "not a reference file";
  CHECK(box.run("detect --trace " + q(box / "zero.emtr") + " --refs " + q(box / "junk.emrf")).code == 3);
  CHECK(box.run("detect --trace " + q(box / "missing.emtr")).code == 1);

  std::ofstream(box / "cfg.json") << R"({"no_such_field": 1})";
  CHECK(box.run("detect --trace " + q(box / "zero.emtr") + " --config " + q(box / "cfg.json")).code == 3);

  REQUIRE(box.run("synth --keys a,b --repeats 2 --preset open-space-3m --out-dir " + q(box / "t")).code == 0);
  const auto batch = box.run("detect --trace " + q(box / "t"));
  CHECK(batch.code == 0);
  CHECK(contains(batch.out, "key11-r001.emtr\tb\tb\t"));
  CHECK(contains(batch.out, "accuracy: 5/5 (100.00%)"));
}

TEST_CASE("show-frame") {
  Sandbox box;
  const auto bits = box.run("show-frame --key a --format bits");
  CHECK(bits.code == 0);
  CHECK(contains(bits.out, "packet 0: IN pid 0x69 crc5 0x0B, 32 bits, 0 stuffed\n"));
  CHECK(contains(bits.out, "packet 1: DATA0 pid 0xC3 crc16 0x70BE, 96 bits, 0 stuffed\n"));
  CHECK(contains(bits.out, "packet 2: ACK pid 0xD2, 16 bits, 0 stuffed\n"));
  CHECK(contains(bits.out, "capture window: 120 slots, 96 edges\n"));

  // symbols = stuffed bits + 3 EOP symbols, for a key whose report needs stuffing
  const auto sb = box.run("show-frame --key CTRL --format bits").out;
  const auto ss = box.run("show-frame --key CTRL --format symbols").out;
  auto field_len = [](const std::string& text, const std::string& tag, std::size_t nth) {
    std::size_t pos = 0;
    for (std::size_t i = 0; i <= nth; ++i) pos = text.find(tag, pos) + tag.size();
    return text.find('\n', pos) - pos;
  };
  for (std::size_t p = 0; p < 3; ++p) {
    CHECK(field_len(ss, ") ", p) == field_len(sb, "  stuffed ", p) + 3);
  }

  const auto hex = box.run("show-frame --key a --format hex").out;
  CHECK(contains(hex, "  bytes   80 C3 00 00 04 00 00 00 00 00 BE 70\n"));

  const auto bad = box.run("show-frame --key nope");
  CHECK(bad.code == 2);
  CHECK(contains(bad.out, "BACKSPACE"));
}

TEST_CASE("sweep and bench") {
  Sandbox box;
  const auto r = box.run("sweep --noise-grid 1e-5,4e-5 --keys a,z --repeats 2 --out " + q(box / "s.csv"),
                         "EMANAKEY_SEED=21");
  CHECK(r.code == 0);
  const auto csv = Sandbox::slurp(box / "s.csv");
  CHECK(csv.rfind("# config: {", 0) == 0);
  CHECK(contains(csv, "\"seed\":21"));
  CHECK(contains(csv, "preset,gain_db,noise_density,key,repeats,correct,mean_score,mean_margin\n"));
  std::ifstream in(box / "s.csv");
  CHECK(read_report(in, ReportFormat::Csv).rows.size() == 4);

  CHECK(box.run("sweep --preset-grid open-space-0.5m,office-12m --keys q --repeats 1 --out " + q(box / "s.json")).code == 0);
  std::ifstream js(box / "s.json");
  CHECK(read_report(js, ReportFormat::Json).aggregates().size() == 2);
  CHECK(box.run("sweep --noise-grid 1e-5 --glitch-grid 1 --keys q").code == 2);
  CHECK(box.run("sweep --noise-grid 1e-5,abc --keys q").code == 2);

  const auto b = box.run("bench --traces 10 --rounds 1");
  CHECK(b.code == 0);
  CHECK(contains(b.out, "real-time budget 1 ms: "));
}

TEST_CASE("key table") {
  Sandbox box;
  CHECK(box.run("keys --out " + q(box / "keys.tsv")).code == 0);
  std::ifstream in(box / "keys.tsv");
  CHECK(read_key_table(in) == key_table());
}

TEST_CASE("checked-in data files match the built-ins") {
  const fs::path root(EMANAKEY_SOURCE_DIR);
  std::ifstream keys(root / "data/keys.tsv");
  CHECK(read_key_table(keys) == key_table());
  for (const auto& p : builtin_presets()) {
    CHECK(load_preset((root / "presets" / (p.name + ".json")).string()) == p);
  }
  Sandbox box;
  CHECK(box.run("presets --out-dir " + q(box / "p")).code == 0);
  CHECK(Sandbox::slurp(box / "p/office-12m.json") == Sandbox::slurp(root / "presets/office-12m.json"));
}
