#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "jamscan/jamscan.hpp"

namespace {

using namespace jamscan;

constexpr int kExitNone = 0;
constexpr int kExitJamming = 10;
constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;
constexpr int kExitUnexpected = 1;

void setup_logging() {
  auto logger = spdlog::stderr_logger_mt("jamscan");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("JAMSCAN_LOG_LEVEL")) {
    const auto lvl = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only accept it when asked for
    if (lvl != spdlog::level::off || std::string(env) == "off") spdlog::set_level(lvl);
    else spdlog::warn("ignoring unknown JAMSCAN_LOG_LEVEL '{}'", env);
  }
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text;
  else io::write_text(path, text);
}

std::optional<io::IqFile> load_input(const std::string& path) {
  if (path.empty()) return std::nullopt;
  spdlog::info("reading IQ records from {}", path);
  return io::parse_iq_file(io::read_file(path));
}

void export_heatmap(const localize::Heatmap& map, const std::string& path, bool binary, const std::string& plot) {
  const auto grid = io::to_grid(map);
  if (!path.empty()) {
    if (binary) io::write_file(path, io::write_grid(grid));
    else io::write_text(path, io::write_grid_csv(grid));
    spdlog::info("heatmap written to {}", path);
  }
  if (!plot.empty()) {
    io::write_file(plot, io::render_ppm(grid));
    spdlog::info("raster written to {}", plot);
  }
}

void log_summary(const io::PipelineResult& r) {
  std::size_t h1 = 0;
  for (const auto& rep : r.reports) h1 += rep.decision == detect::Decision::H1_jamming;
  spdlog::info("{} snapshots, {} flagged; class {}; {} tracks", r.reports.size(), h1,
               detect::to_string(r.final_class.label), r.tracks.size());
  if (r.estimate)
    spdlog::info("source centroid ({:.1f}, {:.1f}) m, confidence {:.3f}", r.estimate->centroid.x,
                 r.estimate->centroid.y, r.estimate->confidence);
}

struct Common {
  std::string mission;
  std::string input;
  std::string output;
};

int run(int argc, char** argv) {
  CLI::App app{"GNSS jamming detection, classification and localization from IQ snapshots"};
  app.require_subcommand(1);

  // synth
  std::string spec_path, synth_out, band = "L1";
  double rate = 15e6, center = 1575.42e6, cadence = 2.0, sigma2 = 0.0, start_tow = 0.0;
  std::size_t samples = 4096, snapshots = 1;
  std::optional<double> jnr;
  std::uint64_t seed = 1;
  auto* synth = app.add_subcommand("synth", "Synthesize a waveform into an IQ record file");
  synth->add_option("--spec", spec_path, "Waveform JSON (kind, bandwidth_hz, sweep_time_s, ...)")->required();
  synth->add_option("-o,--output", synth_out, "Output IQ record file")->required();
  synth->add_option("--rate", rate, "Sample rate, Hz")->capture_default_str();
  synth->add_option("--center", center, "Center frequency tag, Hz")->capture_default_str();
  synth->add_option("--band", band, "Band tag: L1, L2, L5 or OTHER")->capture_default_str();
  synth->add_option("--samples", samples, "Samples per snapshot")->capture_default_str();
  synth->add_option("--snapshots", snapshots, "Number of snapshots")->capture_default_str();
  synth->add_option("--cadence", cadence, "Seconds between snapshots")->capture_default_str();
  synth->add_option("--start-tow", start_tow, "Tow of the first snapshot, s")->capture_default_str();
  synth->add_option("--sigma2", sigma2, "AWGN power per sample")->capture_default_str();
  synth->add_option("--jnr", jnr, "Jammer-to-noise ratio in dB; overrides the spec power");
  synth->add_option("--seed", seed, "Random seed")->capture_default_str();

  // simulate
  Common sim;
  std::string poses_out;
  auto* simulate = app.add_subcommand("simulate", "Simulate a mission into scan poses and IQ records");
  simulate->add_option("-m,--mission", sim.mission, "Mission JSON")->required();
  simulate->add_option("--poses-out", poses_out, "Scan pose JSON output");
  simulate->add_option("--records-out", sim.output, "IQ record file output");

  // detect / classify
  Common det, cls;
  auto* detect_cmd = app.add_subcommand("detect", "Per-snapshot jamming detection");
  auto* classify_cmd = app.add_subcommand("classify", "Detection, peak tracking and jammer classification");
  for (auto [cmd, c] : {std::pair{detect_cmd, &det}, std::pair{classify_cmd, &cls}}) {
    cmd->add_option("-m,--mission", c->mission, "Mission JSON")->required();
    cmd->add_option("-i,--input", c->input, "IQ record file (default: the mission's simulated stream)");
    cmd->add_option("-o,--output", c->output, "JSON Lines output (default: stdout)");
  }

  // fuse
  Common fus;
  std::string poses_in, fuse_map, fuse_plot;
  bool fuse_binary = false;
  auto* fuse = app.add_subcommand("fuse", "Fuse directional scans into a heatmap and extract the source");
  fuse->add_option("-m,--mission", fus.mission, "Mission JSON (pattern, grid, localization)")->required();
  fuse->add_option("--poses", poses_in, "Scan pose JSON (default: simulated from the mission)");
  fuse->add_option("-o,--output", fus.output, "Source record output (default: stdout)");
  fuse->add_option("--heatmap-out", fuse_map, "Heatmap grid output (CSV unless --binary)");
  fuse->add_flag("--binary", fuse_binary, "Write the heatmap in the binary grid format");
  fuse->add_option("--plot", fuse_plot, "Render the heatmap to a PPM image");

  // report
  Common rep;
  std::string rep_map, rep_plot;
  bool rep_binary = false;
  auto* report = app.add_subcommand("report", "Full pipeline: detection, tracks, class, heatmap and source");
  report->add_option("-m,--mission", rep.mission, "Mission JSON")->required();
  report->add_option("-i,--input", rep.input, "IQ record file (default: the mission's simulated stream)");
  report->add_option("-o,--output", rep.output, "JSON Lines output (default: stdout)");
  report->add_option("--heatmap-out", rep_map, "Heatmap grid output (CSV unless --binary)");
  report->add_flag("--binary", rep_binary, "Write the heatmap in the binary grid format");
  report->add_option("--plot", rep_plot, "Render the heatmap to a PPM image");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitNone : kExitConfig;
  }

  if (synth->parsed()) {
    io::MissionFile m;
    m.scenario.jammer_spec = io::waveform_from_json(io::Json::parse(io::read_text(spec_path)));
    m.stream.sample_rate_hz = rate;
    m.stream.center_freq_hz = center;
    m.stream.band = band_from_string(band);
    m.stream.snapshot_len = samples;
    m.stream.snapshots = snapshots;
    m.stream.cadence_s = cadence;
    m.stream.start_tow = start_tow;
    m.stream.noise_sigma2 = sigma2;
    m.stream.jnr_db = jnr;
    m.stream.seed = seed;
    if (jnr && !(sigma2 > 0.0)) throw ConfigurationError("--jnr needs a positive --sigma2");
    synth::validate(m.scenario.jammer_spec, rate);
    io::write_file(synth_out, io::write_iq(io::simulate_stream(m)));
    spdlog::info("{} snapshots of {} samples written to {}", snapshots, samples, synth_out);
    return kExitNone;
  }

  if (simulate->parsed()) {
    const auto m = io::load_mission(sim.mission);
    if (poses_out.empty() && sim.output.empty()) throw ConfigurationError("nothing to do: give --poses-out or --records-out");
    if (!poses_out.empty()) {
      if (m.scenario.scan_poses.empty()) throw ConfigurationError("mission has no scan poses");
      const auto poses = synth::simulate_scan(m.scenario, m.pattern.build());
      io::write_text(poses_out, io::poses_to_json(poses).dump(2) + "\n");
    }
    if (!sim.output.empty()) io::write_file(sim.output, io::write_iq(io::simulate_stream(m)));
    return kExitNone;
  }

  if (detect_cmd->parsed() || classify_cmd->parsed()) {
    const bool full = classify_cmd->parsed();
    const auto& c = full ? cls : det;
    auto m = io::load_mission(c.mission);
    m.scenario.scan_poses.clear();
    const auto res = io::run_pipeline(m, load_input(c.input));
    log_summary(res);
    std::vector<io::Json> records;
    if (full) {
      records = io::pipeline_records(res);
      records.pop_back();  // no localization here
    } else {
      for (const auto& r : res.reports) records.push_back(io::to_json(r));
    }
    emit(c.output, io::to_json_lines(records));
    return res.jamming() ? kExitJamming : kExitNone;
  }

  if (fuse->parsed()) {
    const auto m = io::load_mission(fus.mission);
    const auto pattern = m.pattern.build();
    std::vector<localize::ScanPose> poses;
    if (!poses_in.empty()) {
      const auto text = io::read_text(poses_in);
      try {
        poses = io::poses_from_json(io::Json::parse(text));
      } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("pose file is not valid JSON: ") + e.what());
      }
    } else {
      if (m.scenario.scan_poses.empty()) throw ConfigurationError("mission has no scan poses and no --poses given");
      poses = synth::simulate_scan(m.scenario, pattern);
    }
    const auto map = localize::fuse_scans(poses, pattern, m.grid, m.localization.mode);
    const auto est = localize::extract_source(map, m.localization.quantile);
    export_heatmap(map, fuse_map, fuse_binary, fuse_plot);
    emit(fus.output, io::to_json_lines({est ? io::to_json(*est) : io::no_source_json()}));
    return kExitNone;
  }

  if (report->parsed()) {
    const auto m = io::load_mission(rep.mission);
    const auto res = io::run_pipeline(m, load_input(rep.input));
    log_summary(res);
    if (res.heatmap) export_heatmap(*res.heatmap, rep_map, rep_binary, rep_plot);
    else if (!rep_map.empty() || !rep_plot.empty()) spdlog::warn("no heatmap: no poses or no jamming detected");
    emit(rep.output, io::to_json_lines(io::pipeline_records(res)));
    return res.jamming() ? kExitJamming : kExitNone;
  }
  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  try {
    return run(argc, argv);
  } catch (const jamscan::ConfigurationError& e) {
    spdlog::error("configuration error: {}", e.what());
    return kExitConfig;
  } catch (const jamscan::InputError& e) {
    spdlog::error("input error: {}", e.what());
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    spdlog::error("configuration error: {}", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    spdlog::error("unexpected failure: {}", e.what());
    return kExitUnexpected;
  }
}
