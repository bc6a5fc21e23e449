#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "emanakey/bench.hpp"
#include "emanakey/crc.hpp"
#include "emanakey/detector.hpp"
#include "emanakey/error.hpp"
#include "emanakey/kernels.hpp"
#include "emanakey/presets.hpp"
#include "emanakey/reference_set.hpp"
#include "emanakey/sweep.hpp"
#include "emanakey/trace_io.hpp"

namespace fs = std::filesystem;
using namespace emanakey;
using nlohmann::json;

namespace {

enum Exit : int { kOk = 0, kFailure = 1, kUsage = 2, kData = 3, kNoSignal = 4 };

constexpr std::uint64_t kDefaultSeed = 1;

// Errors raised by flag checks that happen after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// "," itself is a key, so a literal ",," or a leading/trailing comma names it.
std::vector<KeyId> parse_keys(const std::string& text) {
  if (text == "all") return {KeyId::all().begin(), KeyId::all().end()};
  std::vector<KeyId> keys;
  std::string item;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || (text[i] == ',' && !item.empty())) {
      if (!item.empty()) keys.push_back(KeyId::from_label(item));
      item.clear();
    } else {
      item += text[i];
    }
  }
  if (keys.empty()) throw UsageError("--keys names no keys");
  return keys;
}

template <typename T>
std::vector<T> parse_numbers(const std::string& text, const char* flag) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) {
    T v{};
    const auto* end = item.data() + item.size();
    const auto [ptr, ec] = std::from_chars(item.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw UsageError(std::string(flag) + ": bad number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(std::string(flag) + " is empty");
  return out;
}

std::string fixed(double v, int digits = 6) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::string hex(unsigned v, int width) {
  std::ostringstream s;
  s << "0x" << std::hex << std::uppercase << std::setw(width) << std::setfill('0') << v;
  return s.str();
}

ReferenceSet load_refs(const std::string& path) {
  if (path.empty()) return build_reference_set(ReferenceMethod::Analytic);
  return read_reference_file(fs::path(path));
}

DetectorConfig load_config(const std::string& path) {
  return path.empty() ? DetectorConfig{} : load_detector_config(path);
}

EmanationTrace load_any_trace(const fs::path& path, double csv_rate) {
  if (path.extension() == ".csv") {
    if (!(csv_rate > 0.0)) throw UsageError("CSV traces need --sample-rate");
    return import_csv(path, csv_rate);
  }
  return read_trace(path);
}

void refuse_overwrite(const fs::path& path, bool force) {
  if (!force && fs::exists(path)) {
    throw UsageError(path.string() + " exists; pass --force to overwrite");
  }
}

// ---------------------------------------------------------------- gen-refs

struct GenRefsArgs {
  std::string method = "analytic";
  std::string out;
  bool force = false;
};

int run_gen_refs(const GenRefsArgs& a) {
  refuse_overwrite(a.out, a.force);
  const auto method = a.method == "analytic" ? ReferenceMethod::Analytic : ReferenceMethod::WiredPipeline;
  const auto refs = build_reference_set(method);
  write_reference_file(refs, fs::path(a.out));
  const auto cp = min_pairwise_distance(refs);
  std::size_t lo = 1000, hi = 0;
  for (const auto& e : refs.entries()) {
    lo = std::min(lo, e.edge_count());
    hi = std::max(hi, e.edge_count());
  }
  std::cout << "wrote " << refs.size() << " references (" << to_string(method) << ") to " << a.out << "\n"
            << "edges per key: " << lo << ".." << hi << ", longest series " << refs.max_length()
            << " slots, closest pair '" << cp.a.label() << "' / '" << cp.b.label() << "' at distance " << cp.distance << "\n";
  return kOk;
}

// ------------------------------------------------------------------- synth

struct SynthArgs {
  std::string keys = "all";
  std::string preset = "open-space-3.8m";
  std::size_t repeats = 1;
  std::uint64_t seed = kDefaultSeed;
  std::string out_dir;
  bool force = false;
};

std::string trace_name(KeyId key, std::size_t rep) {
  std::ostringstream s;
  s << "key" << std::setw(2) << std::setfill('0') << key.index() << "-r" << std::setw(3) << rep << ".emtr";
  return s.str();
}

int run_synth(const SynthArgs& a) {
  SynthRequest req;
  req.keys = parse_keys(a.keys);
  req.preset = load_preset(a.preset);
  req.repeats = a.repeats;
  req.master_seed = a.seed;
  const fs::path dir(a.out_dir);
  for (std::size_t j = 0; j < req.keys.size() * req.repeats; ++j) {
    refuse_overwrite(dir / trace_name(req.keys[j / req.repeats], j % req.repeats), a.force);
  }
  const auto traces = synth_dataset(req);
  fs::create_directories(dir);
  for (std::size_t j = 0; j < traces.size(); ++j) {
    write_trace(traces[j], dir / trace_name(req.keys[j / req.repeats], j % req.repeats));
  }
  std::cout << "wrote " << traces.size() << " traces (" << req.keys.size() << " keys x " << req.repeats
            << ", preset " << req.preset.name << ", seed " << a.seed << ") to " << dir.string() << "\n";
  return kOk;
}

// ------------------------------------------------------------------ detect

struct DetectArgs {
  std::string trace;
  std::string refs;
  std::string config;
  double sample_rate = 0.0;
};

void print_result(const DetectionResult& r) {
  std::cout << "key: " << r.key.label() << "\n"
            << "score: " << fixed(r.score) << "\n"
            << "runner_up: " << r.runner_up.label() << "\n"
            << "runner_up_score: " << fixed(r.runner_up_score) << "\n"
            << "margin: " << fixed(r.margin()) << "\n"
            << "tie: " << (r.tie ? "yes" : "no") << "\n"
            << "edges: " << r.detected_edges.edge_count() << "\n"
            << "alignment_offset: " << fixed(r.alignment_offset, 3) << "\n";
}

int run_detect(const DetectArgs& a) {
  const auto refs = load_refs(a.refs);
  const auto cfg = load_config(a.config);
  const fs::path target(a.trace);
  if (!fs::exists(target)) throw IoError("no such trace: " + a.trace);

  if (!fs::is_directory(target)) {
    const auto trace = load_any_trace(target, a.sample_rate);
    const Detector det(cfg, trace.sample_rate);
    try {
      print_result(det.detect(trace, refs));
    } catch (const NoSignal& e) {
      std::cout << e.what() << "\n";
      return kNoSignal;
    }
    if (trace.ground_truth) std::cout << "truth: " << trace.ground_truth->label() << "\n";
    return kOk;
  }

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(target)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".emtr" || ext == ".csv")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw UsageError("no .emtr or .csv traces in " + a.trace);

  std::size_t labelled = 0, correct = 0, silent = 0;
  std::cout << "file\tkey\ttruth\tscore\tmargin\n";
  for (const auto& f : files) {
    const auto trace = load_any_trace(f, a.sample_rate);
    const std::string truth = trace.ground_truth ? std::string(trace.ground_truth->label()) : "-";
    std::cout << f.filename().string() << "\t";
    try {
      const auto r = Detector(cfg, trace.sample_rate).detect(trace, refs);
      std::cout << r.key.label() << "\t" << truth << "\t" << fixed(r.score) << "\t" << fixed(r.margin()) << "\n";
      if (trace.ground_truth) correct += r.key == *trace.ground_truth;
    } catch (const NoSignal&) {
      std::cout << "no-signal\t" << truth << "\t-\t-\n";
      ++silent;
    }
    labelled += trace.ground_truth.has_value();
  }
  std::cout << "traces: " << files.size() << ", no signal: " << silent << "\n";
  if (labelled > 0) {
    std::cout << "accuracy: " << correct << "/" << labelled << " ("
              << fixed(100.0 * static_cast<double>(correct) / static_cast<double>(labelled), 2) << "%)\n";
  }
  return kOk;
}

// ------------------------------------------------------------------- sweep

struct SweepArgs {
  std::string preset_grid;
  std::string noise_grid;
  std::string glitch_grid;
  std::string body_grid;
  std::string preset = "open-space-3.8m";
  std::string keys = "all";
  std::size_t repeats = 10;
  std::uint64_t seed = kDefaultSeed;
  std::string config;
  std::string out;
  std::string format;
  bool force = false;
};

struct GridPoint {
  ChannelPreset preset;
  std::size_t extra_glitches = 0;
};

std::string with_suffix(const std::string& base, const std::string& what, const std::string& value) {
  return base + "@" + what + "=" + value;
}

int run_sweep(const SweepArgs& a) {
  const int grids = !a.preset_grid.empty() + !a.noise_grid.empty() + !a.glitch_grid.empty() + !a.body_grid.empty();
  if (grids != 1) {
    throw UsageError("give exactly one of --preset-grid, --noise-grid, --glitch-grid, --body-grid");
  }
  const auto keys = parse_keys(a.keys);
  auto exp = Experiment::defaults();
  exp.detector = load_config(a.config);
  ReportFormat format = ReportFormat::Csv;
  const std::string fmt = !a.format.empty() ? a.format : (fs::path(a.out).extension() == ".json" ? "json" : "csv");
  if (fmt == "json") format = ReportFormat::Json;
  if (!a.out.empty()) refuse_overwrite(a.out, a.force);

  std::vector<GridPoint> points;
  json grid;
  if (!a.preset_grid.empty()) {
    for (const auto& name : split_list(a.preset_grid)) points.push_back({load_preset(name), 0});
    grid = {{"kind", "preset"}, {"values", split_list(a.preset_grid)}};
  } else {
    const auto base = load_preset(a.preset);
    if (!a.noise_grid.empty()) {
      const auto values = parse_numbers<double>(a.noise_grid, "--noise-grid");
      for (double d : values) {
        auto p = base;
        p.noise_density = d;
        std::ostringstream v;
        v << d;
        p.name = with_suffix(base.name, "noise", v.str());
        points.push_back({p, 0});
      }
      grid = {{"kind", "noise_density"}, {"values", values}};
    } else if (!a.glitch_grid.empty()) {
      const auto values = parse_numbers<std::size_t>(a.glitch_grid, "--glitch-grid");
      for (auto n : values) {
        auto p = base;
        p.name = with_suffix(base.name, "glitches", std::to_string(n));
        points.push_back({p, n});
      }
      grid = {{"kind", "extra_glitches"}, {"values", values}, {"glitch_factor", exp.extra_glitch_factor}};
    } else {
      const auto values = parse_numbers<double>(a.body_grid, "--body-grid");
      for (double g : values) {
        auto p = base;
        p.body_coupling_gain = g;
        std::ostringstream v;
        v << g;
        p.name = with_suffix(base.name, "body", v.str());
        points.push_back({p, 0});
      }
      grid = {{"kind", "body_coupling_gain"}, {"values", values}};
    }
  }
  for (const auto& pt : points) pt.preset.validate();

  json config;
  config["command"] = "sweep";
  config["grid"] = grid;
  config["repeats"] = a.repeats;
  config["seed"] = a.seed;
  std::vector<std::string> labels;
  for (auto k : keys) labels.emplace_back(k.label());
  config["keys"] = labels;
  config["detector"] = json::parse(detector_config_to_json(exp.detector));
  config["presets"] = json::array();
  for (const auto& pt : points) config["presets"].push_back(json::parse(preset_to_json(pt.preset)));

  SweepReport report;
  report.config = config.dump();
  std::cout << "preset\taccuracy\tmean_margin\tno_signal\n";
  for (const auto& pt : points) {
    exp.extra_glitches = pt.extra_glitches;
    // every grid point replays the same channel draws, so neighbours differ
    // only by the swept parameter
    const auto outcomes = run_trials(exp, pt.preset, keys, a.repeats, a.seed);
    const auto rows = summarize(pt.preset, outcomes);
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    const auto silent = std::count_if(outcomes.begin(), outcomes.end(), [](const TrialOutcome& o) { return !o.result; });
    std::cout << pt.preset.name << "\t" << fixed(100.0 * accuracy(outcomes), 2) << "%\t"
              << fixed(mean_margin(outcomes)) << "\t" << silent << "\n";
  }
  if (!a.out.empty()) {
    write_report(report, fs::path(a.out), format);
    std::cout << "report: " << a.out << " (" << report.rows.size() << " rows)\n";
  }
  return kOk;
}

// ------------------------------------------------------------------- bench

struct BenchArgs {
  std::size_t traces = 70;
  std::size_t rounds = 5;
  std::string preset = "open-space-3.8m";
  std::uint64_t seed = kDefaultSeed;
};

template <typename F>
double time_it(F&& f, int reps) {
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / reps;
}

int run_bench(const BenchArgs& a) {
  const auto exp = Experiment::defaults();
  const auto preset = load_preset(a.preset);

  auto clean = radiate(build_keystroke_transaction(KeyId::from_label("a")), exp.pulse, exp.layout);
  const Detector det(exp.detector, exp.layout.sample_rate);
  const auto& taps = det.taps();
  volatile double sink = 0.0;
  const double fir_serial = time_it([&] { sink = sink + dsp::fir_same_serial(clean, taps)[100]; }, 50);
  const double fir_fast = time_it([&] { sink = sink + dsp::fir_same(clean, taps)[100]; }, 50);
  std::vector<EdgeSeries> cands(exp.refs.entries().begin(), exp.refs.entries().end());
  const double sm_serial = time_it([&] { sink = sink + score_matrix_serial(cands, exp.refs)[1]; }, 50);
  const double sm_fast = time_it([&] { sink = sink + score_matrix(cands, exp.refs)[1]; }, 50);

  std::cout << "fir " << taps.size() << " taps x " << clean.size() << " samples: serial "
            << fixed(fir_serial * 1e6, 1) << " us, folded " << fixed(fir_fast * 1e6, 1) << " us\n"
            << "score matrix 70x70: serial " << fixed(sm_serial * 1e6, 1) << " us, packed "
            << fixed(sm_fast * 1e6, 1) << " us\n";

  const auto r = measure_detect_latency(exp, preset, a.traces, a.rounds, a.seed);
  std::cout << "detect(): " << r.calls << " calls on " << r.traces << " traces (" << preset.name
            << "), mean " << fixed(r.mean_seconds * 1e3, 4) << " ms, min " << fixed(r.min_seconds * 1e3, 4)
            << " ms, max " << fixed(r.max_seconds * 1e3, 4) << " ms\n"
            << "real-time budget 1 ms: " << (r.within_budget() ? "within budget" : "over budget") << "\n";
  return kOk;
}

// -------------------------------------------------------------- show-frame

struct ShowFrameArgs {
  std::string key;
  std::string format = "bits";
  std::string toggle = "data0";
  int gap_bits = 2;
};

std::string bytes_hex(const BitStream& bits) {
  std::ostringstream s;
  for (std::size_t i = 0; i + 8 <= bits.size(); i += 8) {
    unsigned v = 0;
    for (int b = 0; b < 8; ++b) v |= static_cast<unsigned>(bits.bits[i + b]) << b;
    s << (i ? " " : "") << std::hex << std::uppercase << std::setw(2) << std::setfill('0') << v;
  }
  return s.str();
}

int run_show_frame(const ShowFrameArgs& a) {
  const auto key = KeyId::from_label(a.key);
  FrameConfig fc;
  fc.gap_bits = a.gap_bits;
  const auto frame = build_keystroke_transaction(key, a.toggle == "data1" ? PacketKind::Data1 : PacketKind::Data0, fc);
  const auto report = hid_report_for_key(key);
  std::cout << "key " << key.label() << " (index " << key.index() << "), report " << bytes_hex(bits_from_bytes(report.bytes()))
            << "\n";
  for (std::size_t i = 0; i < frame.packets.size(); ++i) {
    const auto& p = frame.packets[i];
    const auto raw = p.raw_bits();
    const auto stuffed = p.stuffed_bits();
    std::cout << "packet " << i << ": " << to_string(p.kind) << " pid "
              << hex(pid_code(p.kind) | ((~pid_code(p.kind) & 0x0Fu) << 4), 2);
    if (is_token(p.kind)) std::cout << " crc5 " << hex(p.crc, 2);
    if (is_data(p.kind)) std::cout << " crc16 " << hex(p.crc, 4);
    std::cout << ", " << raw.size() << " bits, " << stuffed.size() - raw.size() << " stuffed\n";
    if (a.format == "bits") {
      std::cout << "  raw     " << to_string(raw) << "\n  stuffed " << to_string(stuffed) << "\n";
    } else if (a.format == "symbols") {
      const auto sym = p.line_symbols();
      std::cout << "  symbols (" << sym.size() << ") " << to_string(sym) << "\n";
    } else {
      std::cout << "  bytes   " << bytes_hex(raw) << "\n";
    }
    if (i + 1 < frame.packets.size()) std::cout << "  gap " << frame.gaps[i] << " bit times\n";
  }
  const auto edges = edges_analytic(frame);
  std::cout << "capture window: " << edges.size() << " slots, " << edges.edge_count() << " edges\n"
            << "  " << to_string(edges) << "\n"
            << "frame duration: " << fixed(frame.duration() * 1e6, 3) << " us\n";
  return kOk;
}

// -------------------------------------------------------------------- keys

int run_keys(const std::string& out, bool force) {
  if (out.empty()) {
    write_key_table(std::cout);
    return kOk;
  }
  refuse_overwrite(out, force);
  std::ofstream f(out);
  if (!f) throw IoError("cannot write " + out);
  write_key_table(f);
  return kOk;
}

// ----------------------------------------------------------------- presets

int run_presets(const std::string& out_dir, bool force) {
  if (out_dir.empty()) {
    for (const auto& p : builtin_presets()) {
      std::cout << p.name << "\t" << fixed(p.gain_db, 2) << " dB\t" << p.description << "\n";
    }
    return kOk;
  }
  const fs::path dir(out_dir);
  for (const auto& p : builtin_presets()) refuse_overwrite(dir / (p.name + ".json"), force);
  fs::create_directories(dir);
  for (const auto& p : builtin_presets()) {
    std::ofstream f(dir / (p.name + ".json"));
    if (!(f << preset_to_json(p) << "\n")) throw IoError("cannot write " + (dir / (p.name + ".json")).string());
  }
  std::cout << "wrote " << builtin_presets().size() << " presets to " << dir.string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"USB keyboard emanation toolkit: references, channel synthesis and keystroke detection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "emanakey 0.1.0");

  auto* seed_help = "master seed (env EMANAKEY_SEED)";

  GenRefsArgs gen;
  auto* c_gen = app.add_subcommand("gen-refs", "build the 70 reference edge series and save them");
  c_gen->add_option("--method", gen.method, "analytic or pipeline")
      ->check(CLI::IsMember({"analytic", "pipeline"}))
      ->capture_default_str();
  c_gen->add_option("--out", gen.out, "output reference file")->required();
  c_gen->add_flag("--force", gen.force, "overwrite an existing file");

  SynthArgs syn;
  auto* c_syn = app.add_subcommand("synth", "synthesize labelled antenna traces");
  c_syn->add_option("--keys", syn.keys, "comma-separated labels or 'all'")->capture_default_str();
  c_syn->add_option("--preset", syn.preset, "built-in preset name or preset JSON path")->capture_default_str();
  c_syn->add_option("--repeats", syn.repeats, "traces per key")->check(CLI::PositiveNumber)->capture_default_str();
  c_syn->add_option("--seed", syn.seed, seed_help)->envname("EMANAKEY_SEED")->capture_default_str();
  c_syn->add_option("--out-dir", syn.out_dir, "directory for .emtr files")->required();
  c_syn->add_flag("--force", syn.force, "overwrite existing traces");

  DetectArgs det;
  auto* c_det = app.add_subcommand("detect", "classify one trace or every trace in a directory");
  c_det->add_option("--trace", det.trace, ".emtr/.csv file or directory")->required();
  c_det->add_option("--refs", det.refs, "reference file (default: analytic references)");
  c_det->add_option("--config", det.config, "detector config JSON");
  c_det->add_option("--sample-rate", det.sample_rate, "sample rate for CSV traces, Hz");

  SweepArgs sw;
  auto* c_sw = app.add_subcommand("sweep", "accuracy over a grid of channel settings");
  c_sw->add_option("--preset-grid", sw.preset_grid, "comma-separated preset names or paths");
  c_sw->add_option("--noise-grid", sw.noise_grid, "noise densities, V/sqrt(Hz), applied to --preset");
  c_sw->add_option("--glitch-grid", sw.glitch_grid, "extra glitch counts per trace, applied to --preset");
  c_sw->add_option("--body-grid", sw.body_grid, "body coupling gains, applied to --preset");
  c_sw->add_option("--preset", sw.preset, "base preset for the parameter grids")->capture_default_str();
  c_sw->add_option("--keys", sw.keys, "comma-separated labels or 'all'")->capture_default_str();
  c_sw->add_option("--repeats", sw.repeats, "trials per key and grid point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_sw->add_option("--seed", sw.seed, seed_help)->envname("EMANAKEY_SEED")->capture_default_str();
  c_sw->add_option("--config", sw.config, "detector config JSON");
  c_sw->add_option("--out", sw.out, "report file (.csv or .json)");
  c_sw->add_option("--format", sw.format, "csv or json (default: from --out extension)")
      ->check(CLI::IsMember({"csv", "json"}));
  c_sw->add_flag("--force", sw.force, "overwrite an existing report");

  BenchArgs bn;
  auto* c_bn = app.add_subcommand("bench", "time the kernels and mean detect() latency");
  c_bn->add_option("--traces", bn.traces, "distinct traces")->check(CLI::PositiveNumber)->capture_default_str();
  c_bn->add_option("--rounds", bn.rounds, "passes over the traces")->check(CLI::PositiveNumber)->capture_default_str();
  c_bn->add_option("--preset", bn.preset, "channel for the timed traces")->capture_default_str();
  c_bn->add_option("--seed", bn.seed, seed_help)->envname("EMANAKEY_SEED")->capture_default_str();

  ShowFrameArgs sf;
  auto* c_sf = app.add_subcommand("show-frame", "dump the packets and edge series of one keystroke");
  c_sf->add_option("--key", sf.key, "key label, e.g. a, ENTER, SPACE")->required();
  c_sf->add_option("--format", sf.format, "bits, symbols or hex")
      ->check(CLI::IsMember({"bits", "symbols", "hex"}))
      ->capture_default_str();
  c_sf->add_option("--toggle", sf.toggle, "data0 or data1")->check(CLI::IsMember({"data0", "data1"}))->capture_default_str();
  c_sf->add_option("--gap-bits", sf.gap_bits, "idle bits between packets")->check(CLI::NonNegativeNumber)->capture_default_str();

  std::string keys_out;
  bool keys_force = false;
  auto* c_keys = app.add_subcommand("keys", "print or save the key table");
  c_keys->add_option("--out", keys_out, "output file (default: stdout)");
  c_keys->add_flag("--force", keys_force, "overwrite an existing file");

  std::string presets_out;
  bool presets_force = false;
  auto* c_pre = app.add_subcommand("presets", "list the built-in channel presets or save them as JSON");
  c_pre->add_option("--out-dir", presets_out, "directory for <name>.json files");
  c_pre->add_flag("--force", presets_force, "overwrite existing files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (c_gen->parsed()) return run_gen_refs(gen);
    if (c_syn->parsed()) return run_synth(syn);
    if (c_det->parsed()) return run_detect(det);
    if (c_sw->parsed()) return run_sweep(sw);
    if (c_bn->parsed()) return run_bench(bn);
    if (c_sf->parsed()) return run_show_frame(sf);
    if (c_keys->parsed()) return run_keys(keys_out, keys_force);
    if (c_pre->parsed()) return run_presets(presets_out, presets_force);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NoSignal& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoSignal;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const TruncatedFile& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const VersionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
