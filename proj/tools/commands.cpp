/*
Copyright 2026 The dipsad Authors. All rights reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#include "commands.hpp"

#include <fmt/core.h>

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "dipsad/audio_io.hpp"
#include "dipsad/combo_features.hpp"
#include "dipsad/demo.hpp"
#include "dipsad/error.hpp"
#include "dipsad/pipeline.hpp"
#include "dipsad/report.hpp"
#include "dipsad/scoring.hpp"

namespace dipsad::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

struct ConfigError : Error {
  using Error::Error;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  if (!f) throw Error("write failed: " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

unsigned resolve_jobs(unsigned jobs, std::size_t tasks) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(jobs, tasks)));
}

// Runs task(i) for i in [0, n) on a small pool. Callers store results by
// index, so output order never depends on scheduling.
template <class F>
void parallel_for(std::size_t n, unsigned jobs, F&& task) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) task(i);
  };
  if (jobs <= 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
}

// ---- detect ----

struct DetectConfig {
  std::vector<std::string> inputs;
  std::string manifest;
  std::string out_dir = ".";
  std::string backend = "dip";
  double alpha = 0.05;
  std::size_t bootstrap = 2000;
  std::uint64_t seed = 0;
  bool smooth = false;
  bool features = false;
  unsigned jobs = 1;
};

struct DetectOutcome {
  std::string error;
  std::size_t frames = 0;
  std::size_t speech_frames = 0;
  std::size_t clusters = 0;
  bool fallback = false;
};

DetectOutcome detect_one(const ManifestEntry& e, const PipelineOptions& opt, const DetectConfig& cfg) {
  DetectOutcome o;
  try {
    const AudioBuffer audio = read_wav(e.audio);
    const UtteranceResult r = process_audio(audio, opt, e.id);
    std::vector<std::uint8_t> labels = r.detection.labels;  // empty when degenerate
    std::ostringstream tsv;
    write_segments(tsv, labels_to_segments(labels, r.grid, r.duration));
    const fs::path base = fs::path(cfg.out_dir) / e.id;
    write_text(base.string() + ".tsv", tsv.str());
    write_text(base.string() + ".json", utterance_report(r, opt).dump(2) + "\n");
    if (cfg.features && !r.degenerate) {
      std::ostringstream feat;
      write_feature_tsv(feat, r.raw, r.combo);
      write_text(base.string() + ".features.tsv", feat.str());
    }
    o.frames = labels.size();
    for (auto l : labels) o.speech_frames += l ? 1 : 0;
    o.clusters = r.detection.clusters ? r.detection.clusters->size() : 0;
    o.fallback = r.detection.fallback_used;
  } catch (const std::exception& ex) {
    o.error = ex.what();
  }
  return o;
}

std::vector<ManifestEntry> gather_inputs(const std::vector<std::string>& inputs, const std::string& manifest) {
  std::vector<ManifestEntry> entries;
  if (!manifest.empty()) entries = read_manifest(manifest);
  for (const auto& p : inputs) entries.push_back({fs::path(p).stem().string(), p, {}});
  std::set<std::string> seen;
  for (const auto& e : entries) {
    if (!seen.insert(e.id).second) throw ConfigError("duplicate utterance id '" + e.id + "'");
  }
  return entries;
}

int cmd_detect(const DetectConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("--alpha must lie in (0, 1)");
  if (cfg.bootstrap == 0) throw ConfigError("--bootstrap must be positive");
  PipelineOptions opt;
  opt.backend = parse_backend(cfg.backend);
  opt.modes.alpha = cfg.alpha;
  opt.modes.bootstrap = cfg.bootstrap;
  opt.modes.seed = cfg.seed;
  opt.smooth = cfg.smooth;

  const std::vector<ManifestEntry> entries = gather_inputs(cfg.inputs, cfg.manifest);
  if (entries.empty()) throw ConfigError("no inputs");
  fs::create_directories(cfg.out_dir);

  std::vector<DetectOutcome> results(entries.size());
  parallel_for(entries.size(), resolve_jobs(cfg.jobs, entries.size()),
               [&](std::size_t i) { results[i] = detect_one(entries[i], opt, cfg); });

  std::size_t failed = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& r = results[i];
    if (!r.error.empty()) {
      ++failed;
      err << fmt::format("error: {}: {}\n", entries[i].id, r.error);
      continue;
    }
    out << fmt::format("{}\tframes={}\tspeech={}\tclusters={}{}\n", entries[i].id, r.frames, r.speech_frames,
                       r.clusters, r.fallback ? "\tfallback" : "");
  }
  if (failed > 0) {
    err << fmt::format("{} of {} utterances failed\n", failed, entries.size());
    return kExitPartial;
  }
  return kExitOk;
}

// ---- score ----

struct ScoreConfig {
  std::string hyp_dir;
  std::string ref_dir;
  std::string manifest;
  std::string baseline_dir;
  std::string out_file;
  std::string group_sep = "_";
  double collar = 2.0;
};

std::string group_of(const std::string& id, const std::string& sep) {
  if (sep.empty()) return id;
  const auto at = id.find(sep);
  return at == std::string::npos ? id : id.substr(0, at);
}

bool is_hypothesis_file(const fs::path& p) {
  const std::string name = p.filename().string();
  return p.extension() == ".tsv" && !name.ends_with(".features.tsv");
}

// Frame labels of a hypothesis file, on the grid stored next to it when
// present, otherwise the default grid over `fallback_duration`.
std::vector<std::uint8_t> hypothesis_labels(const fs::path& dir, const std::string& id, const SegmentList& ref,
                                            FrameGrid& grid) {
  const fs::path tsv = dir / (id + ".tsv");
  if (!fs::exists(tsv)) throw Error("missing hypothesis " + tsv.string());
  const fs::path json = dir / (id + ".json");
  double duration = ref.duration;
  if (fs::exists(json)) {
    grid = grid_from_report(nlohmann::json::parse(read_text(json)), &duration);
  }
  std::ifstream in(tsv);
  const SegmentList hyp = parse_reference(in, {}, tsv.string());
  if (!fs::exists(json)) {
    duration = std::max(duration, hyp.duration);
    grid = grid_for_duration(duration);
  }
  return frame_labels(hyp, grid);
}

struct Scored {
  std::vector<DcfReport> reports;
  std::vector<std::string> errors;
};

Scored score_dir(const fs::path& hyp_dir, const std::vector<std::pair<std::string, fs::path>>& refs,
                 double collar) {
  Scored s;
  for (const auto& [id, ref_path] : refs) {
    try {
      const SegmentList ref = load_reference(ref_path);
      FrameGrid grid;
      const auto hyp = hypothesis_labels(hyp_dir, id, ref, grid);
      // Clip the reference to the audio the hypothesis covers.
      double duration = grid.num_frames == 0 ? ref.duration
                                             : std::max(ref.duration, grid.center(grid.num_frames - 1));
      std::ifstream again(ref_path);
      const SegmentList clipped = parse_reference(again, duration, ref_path.string());
      s.reports.push_back(score_against(hyp, clipped, grid, collar, id));
    } catch (const std::exception& ex) {
      s.errors.push_back(id + ": " + ex.what());
    }
  }
  return s;
}

ojson summary_json(const std::vector<GroupSummary>& groups) {
  ojson a = ojson::array();
  for (const auto& g : groups) a.push_back(to_json(g));
  return a;
}

int cmd_score(const ScoreConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.collar < 0.0) throw ConfigError("--collar must be non-negative");
  if (cfg.hyp_dir.empty()) throw ConfigError("--hyp is required");
  if (cfg.ref_dir.empty() == cfg.manifest.empty()) throw ConfigError("give exactly one of --ref and --manifest");

  // Reference set, keyed by utterance id.
  std::map<std::string, fs::path> refs;
  if (!cfg.manifest.empty()) {
    for (const auto& e : read_manifest(cfg.manifest)) {
      if (e.reference.empty()) throw ConfigError("manifest entry '" + e.id + "' has no reference column");
      refs[e.id] = e.reference;
    }
  } else {
    if (!fs::is_directory(cfg.ref_dir)) throw ConfigError("not a directory: " + cfg.ref_dir);
    for (const auto& p : fs::directory_iterator(cfg.ref_dir)) {
      if (is_hypothesis_file(p.path())) refs[p.path().stem().string()] = p.path();
    }
  }
  if (!fs::is_directory(cfg.hyp_dir)) throw ConfigError("not a directory: " + cfg.hyp_dir);
  std::set<std::string> hyps;
  for (const auto& p : fs::directory_iterator(cfg.hyp_dir)) {
    if (is_hypothesis_file(p.path())) hyps.insert(p.path().stem().string());
  }

  std::vector<std::string> missing_hyp, missing_ref;
  std::vector<std::pair<std::string, fs::path>> common;
  for (const auto& [id, path] : refs) {
    if (hyps.contains(id)) {
      common.emplace_back(id, path);
    } else {
      missing_hyp.push_back(id);
    }
  }
  for (const auto& id : hyps) {
    if (!refs.contains(id)) missing_ref.push_back(id);
  }
  for (const auto& id : missing_hyp) err << fmt::format("id mismatch: {} has a reference but no hypothesis\n", id);
  for (const auto& id : missing_ref) err << fmt::format("id mismatch: {} has a hypothesis but no reference\n", id);
  if (common.empty()) throw ConfigError("no inputs: hypothesis and reference ids do not overlap");

  const Scored sys = score_dir(cfg.hyp_dir, common, cfg.collar);
  std::optional<Scored> base;
  if (!cfg.baseline_dir.empty()) base = score_dir(cfg.baseline_dir, common, cfg.collar);
  bool failed = !missing_hyp.empty() || !missing_ref.empty() || !sys.errors.empty();
  for (const auto& e : sys.errors) err << "error: " << e << "\n";
  if (base) {
    for (const auto& e : base->errors) err << "error (baseline): " << e << "\n";
    failed = failed || !base->errors.empty();
  }
  if (sys.reports.empty()) {
    err << "nothing could be scored\n";
    return kExitPartial;
  }

  auto key = [&](const DcfReport& r) { return group_of(r.id, cfg.group_sep); };
  const auto groups = aggregate(sys.reports, key);
  const auto overall = aggregate(sys.reports, [](const DcfReport&) { return std::string("overall"); });

  ojson report;
  report["collar"] = cfg.collar;
  ojson files = ojson::array();
  for (const auto& r : sys.reports) files.push_back(to_json(r));
  report["files"] = files;
  report["groups"] = summary_json(groups);
  report["overall"] = to_json(overall.front());
  report["missing_hypotheses"] = missing_hyp;
  report["missing_references"] = missing_ref;

  out << fmt::format("{:<24} {:>6} {:>9} {:>9} {:>9}\n", "group", "files", "p_miss", "p_fa", "dcf");
  for (const auto& g : groups) {
    out << fmt::format("{:<24} {:>6} {:>9.4f} {:>9.4f} {:>9.4f}\n", g.key, g.files, g.mean_p_miss, g.mean_p_fa,
                       g.mean_dcf);
  }
  const auto& all = overall.front();
  out << fmt::format("{:<24} {:>6} {:>9.4f} {:>9.4f} {:>9.4f}\n", "overall", all.files, all.mean_p_miss,
                     all.mean_p_fa, all.mean_dcf);

  if (base && !base->reports.empty()) {
    const auto bgroups = aggregate(base->reports, key);
    std::map<std::string, double> bmean;
    for (const auto& g : bgroups) bmean[g.key] = g.mean_dcf;
    const double boverall = aggregate(base->reports, [](const DcfReport&) { return std::string(); }).front().mean_dcf;

    ojson rows = ojson::array();
    out << fmt::format("\n{:<24} {:>9} {:>9} {:>10}\n", "group", "baseline", "system", "rel_impr%");
    auto row = [&](const std::string& name, double b, double s) {
      ojson r;
      r["group"] = name;
      r["baseline_dcf"] = b;
      r["system_dcf"] = s;
      if (b > 0.0) {
        const double ri = relative_improvement(b, s);
        r["relative_improvement"] = ri;
        out << fmt::format("{:<24} {:>9.4f} {:>9.4f} {:>+10.2f}\n", name, b, s, ri);
      } else {
        r["relative_improvement"] = nullptr;
        out << fmt::format("{:<24} {:>9.4f} {:>9.4f} {:>10}\n", name, b, s, "n/a");
      }
      rows.push_back(r);
    };
    for (const auto& g : groups) {
      if (auto it = bmean.find(g.key); it != bmean.end()) row(g.key, it->second, g.mean_dcf);
    }
    row("overall", boverall, all.mean_dcf);
    report["comparison"] = {{"baseline", cfg.baseline_dir}, {"rows", rows}};
  }

  const fs::path out_file = cfg.out_file.empty() ? fs::path(cfg.hyp_dir) / "score.json" : fs::path(cfg.out_file);
  write_text(out_file, report.dump(2) + "\n");
  return failed ? kExitPartial : kExitOk;
}

// ---- dump-dist ----

struct DumpConfig {
  std::string input;
  std::string out_file;
  std::size_t bins = 50;
};

int cmd_dump_dist(const DumpConfig& cfg, std::ostream& out) {
  if (cfg.bins == 0) throw ConfigError("--bins must be positive");
  const AudioBuffer at8k = resample_to_8k(read_wav(cfg.input));
  const FrameSequence frames = frame_signal(at8k);
  std::vector<double> combo;
  if (!frames.degenerate()) {
    combo = pca_first_component(mvn_normalize(extract_raw_features(frames)), frame_log_energy(frames)).values;
  }
  std::ostringstream text;
  write_distribution(text, combo, cfg.bins);
  if (cfg.out_file.empty() || cfg.out_file == "-") {
    out << text.str();
  } else {
    write_text(cfg.out_file, text.str());
  }
  return kExitOk;
}

// ---- synth ----

struct SynthConfig {
  std::string out_dir;
  std::size_t count = 4;
  double seconds = 30.0;
  std::uint64_t seed = 1;
  double noise = 0.02;
};

int cmd_synth(const SynthConfig& cfg, std::ostream& out) {
  if (cfg.count == 0) throw ConfigError("--count must be positive");
  if (!(cfg.seconds > 0.0)) throw ConfigError("--seconds must be positive");
  const fs::path root(cfg.out_dir);
  fs::create_directories(root / "audio");
  fs::create_directories(root / "ref");
  std::ostringstream manifest;
  manifest << "# id\taudio\treference\n";
  for (std::size_t k = 0; k < cfg.count; ++k) {
    DemoOptions d;
    d.seconds = cfg.seconds;
    d.seed = cfg.seed + k;
    d.noise_level = cfg.noise;
    const DemoUtterance u = make_demo_utterance(d);
    const std::string id = fmt::format("synth_{:03d}", k);
    write_wav(root / "audio" / (id + ".wav"), u.audio);
    std::ostringstream ref;
    write_segments(ref, u.reference);
    write_text(root / "ref" / (id + ".tsv"), ref.str());
    manifest << id << "\taudio/" << id << ".wav\tref/" << id << ".tsv\n";
  }
  write_text(root / "manifest.tsv", manifest.str());
  out << fmt::format("wrote {} utterances to {}\n", cfg.count, root.string());
  return kExitOk;
}

}  // namespace

std::vector<ManifestEntry> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read manifest " + path.string());
  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
  std::vector<ManifestEntry> entries;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, '\t');) cols.push_back(c);
    if (cols.size() < 2 || cols.size() > 3 || cols[0].empty() || cols[1].empty()) {
      throw ConfigError(fmt::format("{}:{}: expected id<TAB>audio[<TAB>reference]", path.string(), lineno));
    }
    ManifestEntry e{cols[0], resolve(cols[1]), {}};
    if (cols.size() == 3 && !cols[2].empty()) e.reference = resolve(cols[2]);
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_distribution(std::ostream& out, std::span<const double> values, std::size_t bins) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  out << "# histogram\nbin_center\tcount\n";
  if (!v.empty()) {
    const double lo = v.front(), hi = v.back();
    if (hi == lo) {
      out << fmt::format("{:.9g}\t{}\n", lo, v.size());
    } else {
      const double width = (hi - lo) / static_cast<double>(bins);
      std::vector<std::size_t> counts(bins, 0);
      for (double x : v) {
        const auto b = static_cast<std::size_t>((x - lo) / width);
        ++counts[std::min(b, bins - 1)];
      }
      for (std::size_t b = 0; b < bins; ++b) {
        out << fmt::format("{:.9g}\t{}\n", lo + (static_cast<double>(b) + 0.5) * width, counts[b]);
      }
    }
  }
  out << "# ecdf\nvalue\tF\n";
  const double n = static_cast<double>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i + 1 < v.size() && v[i + 1] == v[i]) continue;
    out << fmt::format("{:.9g}\t{:.9g}\n", v[i], static_cast<double>(i + 1) / n);
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unsupervised speech activity detection with dip-test clustering"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dipsad 0.1.0");

  DetectConfig dc;
  auto* detect = app.add_subcommand("detect", "label speech in WAV files");
  detect->add_option("inputs", dc.inputs, "WAV files (id = file stem)");
  detect->add_option("-m,--manifest", dc.manifest, "TSV manifest: id, audio[, reference]")->envname("DIPSAD_MANIFEST");
  detect->add_option("-o,--out", dc.out_dir, "output directory")->envname("DIPSAD_OUT");
  detect->add_option("-b,--backend", dc.backend, "dip or gmm")->check(CLI::IsMember({"dip", "gmm"}))->envname("DIPSAD_BACKEND");
  detect->add_option("--alpha", dc.alpha, "dip test significance level")->envname("DIPSAD_ALPHA");
  detect->add_option("--bootstrap", dc.bootstrap, "null replicates per sample size")->envname("DIPSAD_BOOTSTRAP");
  detect->add_option("--seed", dc.seed, "seed for the null tables")->envname("DIPSAD_SEED");
  detect->add_flag("--smooth", dc.smooth, "majority-vote smoothing over +-5 frames")->envname("DIPSAD_SMOOTH");
  detect->add_flag("--features", dc.features, "also write <id>.features.tsv");
  detect->add_option("-j,--jobs", dc.jobs, "worker threads (0 = all cores)")->envname("DIPSAD_JOBS");

  ScoreConfig sc;
  auto* score = app.add_subcommand("score", "frame-level DCF of hypotheses against references");
  score->add_option("--hyp", sc.hyp_dir, "directory of <id>.tsv hypotheses")->required();
  score->add_option("--ref", sc.ref_dir, "directory of <id>.tsv references");
  score->add_option("-m,--manifest", sc.manifest, "manifest with a reference column")->envname("DIPSAD_MANIFEST");
  score->add_option("--baseline", sc.baseline_dir, "second hypothesis directory to compare against");
  score->add_option("--collar", sc.collar, "seconds ignored around each speech boundary")->envname("DIPSAD_COLLAR");
  score->add_option("--group-sep", sc.group_sep, "group key is the id prefix before this separator");
  score->add_option("-o,--out", sc.out_file, "report path (default <hyp>/score.json)");

  DumpConfig du;
  auto* dump = app.add_subcommand("dump-dist", "histogram and ECDF of the combo feature");
  dump->add_option("input", du.input, "WAV file")->required();
  dump->add_option("--bins", du.bins, "histogram bins");
  dump->add_option("-o,--out", du.out_file, "output TSV (default stdout)");

  SynthConfig sy;
  auto* synth = app.add_subcommand("synth", "write synthetic labelled utterances and a manifest");
  synth->add_option("-o,--out", sy.out_dir, "output directory")->required();
  synth->add_option("--count", sy.count, "number of utterances");
  synth->add_option("--seconds", sy.seconds, "length of each utterance");
  synth->add_option("--seed", sy.seed, "seed of the first utterance")->envname("DIPSAD_SEED");
  synth->add_option("--noise", sy.noise, "rms level of the background noise");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*detect) return cmd_detect(dc, out, err);
    if (*score) return cmd_score(sc, out, err);
    if (*dump) return cmd_dump_dist(du, out);
    if (*synth) return cmd_synth(sy, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitPartial;
  }
  return kExitConfig;
}

}  // namespace dipsad::cli
