// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "jamscan/jamscan.hpp"
#include "oracles.hpp"
#include "scenarios.hpp"

namespace {

using namespace jamscan;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. FAM against the brute-force cyclic periodogram.
Outcome fam_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  const std::size_t windows[] = {64, 128, 256};
  int passed = 0;
  double worst = 0.0;
  std::size_t checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2048, 4096)(rng);
    const std::size_t nw = windows[std::uniform_int_distribution<int>(0, 2)(rng)];
    const std::size_t hops[] = {nw / 2, nw / 4, nw / 8, 3 * nw / 8};
    const std::size_t hop = hops[std::uniform_int_distribution<int>(0, 3)(rng)];
    const double fs = scenarios::kFs;
    std::uniform_real_distribution<double> off(-5e6, 5e6);

    IqSnapshot s;
    switch (trial % 4) {
      case 0: s = synth::synth_waveform(scenarios::cw(off(rng)), n / fs, fs, trial); break;
      case 1: s = synth::synth_waveform(scenarios::chirp(4e6, 40e-6, off(rng) / 5), n / fs, fs, trial); break;
      case 2: s = synth::synth_waveform(scenarios::bpsk(8e6, 1.023e6, 1023), n / fs, fs, trial); break;
      default: s = synth::silence(n, fs); break;
    }
    s = synth::add_awgn(std::move(s), trial % 4 == 3 ? 1.0 : 0.1, 1000 + trial);

    const auto scd = cyclo::fam_scd(s, {nw, hop});
    const auto ref = oracle::cyclic_periodogram(s.samples, nw, hop);
    const double floor = 0.01 * scd.max_value();
    bool ok = ref.frames == scd.frames;
    const int h = static_cast<int>(nw / 2);
    for (int k1 = -h; k1 < h; ++k1) {
      for (int k2 = -h; k2 <= k1; ++k2) {
        const double want = ref.at(k1, k2);
        const std::size_t row = static_cast<std::size_t>(k1 + k2 + static_cast<int>(nw));
        const std::size_t col = static_cast<std::size_t>(k1 - k2) * scd.cols_per_bin;
        const double got = scd.at(row, col);
        if (std::max(want, got) < floor) continue;
        ++checked;
        const double rel = std::abs(got - want) / want;
        worst = std::max(worst, rel);
        if (!(rel <= 0.05)) ok = false;
      }
    }
    passed += ok;
  }
  const double t = seconds_since(t0);
  return {passed == 20 && t < 60.0,
          fmt("%d/20 inputs agree, %zu bins checked, worst relative error %.2e, %.1f s", passed, checked, worst, t)};
}

// Shared noise calibration for criteria 2 and 3.
struct Calib {
  detect::Thresholds th;
  double peak = 0.0;
};

Calib calibrate(std::size_t n, std::uint64_t seed0) {
  std::vector<IqSnapshot> benign;
  for (std::uint64_t i = 0; i < 100; ++i) benign.push_back(scenarios::benign(n, seed0 + i));
  const auto c = io::calibrate_from(benign, cyclo::FamParams{}, 1.0);
  return {c.thresholds, c.peak_threshold};
}

detect::JammerClass classify_snapshot(const IqSnapshot& s, const Calib& cal) {
  const auto scd = cyclo::fam_scd(s, cyclo::FamParams{});
  const auto profile = cyclo::alpha_profile(scd);
  auto peaks = detect::find_peaks(scd, std::max(cal.peak, 0.1 * scd.max_value()));
  if (peaks.size() > 16) peaks.resize(16);
  detect::PeakTracker tracker({1e6, 2});
  tracker.update(peaks, s.tow);
  detect::ClassifierOptions opt;
  opt.profile_threshold = cal.th.profile;
  return detect::classify(tracker.tracks(), profile, cyclo::coherence(scd), cyclo::cyclic_autocorr(s), opt);
}

// 2. Laboratory signatures, 10 seeds each.
Outcome signatures() {
  constexpr std::size_t n = 4096;
  constexpr double jnr = 10.0;
  const Calib cal = calibrate(n, 500000);
  const double alpha_bin = cyclo::fam_scd(scenarios::benign(n, 1), {}).alpha_bin_hz();
  std::string detail;
  bool all = true;
  for (const auto& [name, spec] : scenarios::lab_set()) {
    if (name == "Chirp_W_O") continue;
    int ok = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto snap = scenarios::jammed(spec, n, jnr, seed);
      const auto cls = classify_snapshot(snap, cal);
      bool good = false;
      if (name == "CW_1") {
        good = cls.label == detect::Label::CW_TONE;
      } else if (name == "BPSK_W") {
        const double err = std::abs(cls.evidence.at("comb_spacing_hz") - *spec.chip_rate_cps) / alpha_bin;
        worst = std::max(worst, err);
        good = cls.label == detect::Label::BPSK_PRN && err <= 1.0;
      } else {
        const double expected = *spec.sweep_time_s * scenarios::kFs;
        const double err = std::abs(cls.evidence.at("sweep_period_samples") - expected);
        worst = std::max(worst, err);
        good = cls.label == detect::Label::CHIRP && err <= 1.0;
      }
      ok += good;
    }
    all = all && ok == 10;
    detail += fmt("%s %d/10", name.c_str(), ok);
    if (name != "CW_1") detail += fmt(" (worst %.2f %s)", worst, name == "BPSK_W" ? "alpha bins" : "samples");
    detail += "; ";
  }
  detail.resize(detail.size() - 2);
  return {all, detail};
}

// 3. Detection rates at 10 dB JNR and on fresh noise.
Outcome detection_roc() {
  const auto t0 = Clock::now();
  constexpr std::size_t n = 2048;
  const Calib cal = calibrate(n, 600000);
  const auto set = scenarios::lab_set();
  int hits = 0, alarms = 0;
  for (int t = 0; t < 200; ++t) {
    const auto& spec = set[static_cast<std::size_t>(t) % set.size()].spec;
    const auto snap = scenarios::jammed(spec, n, 10.0, 700000 + static_cast<std::uint64_t>(t));
    const auto rep = detect::detect(snap, cyclo::alpha_profile(cyclo::fam_scd(snap, {})), cal.th);
    hits += rep.decision == detect::Decision::H1_jamming;

    const auto clean = scenarios::benign(n, 800000 + static_cast<std::uint64_t>(t));
    const auto rep0 = detect::detect(clean, cyclo::alpha_profile(cyclo::fam_scd(clean, {})), cal.th);
    alarms += rep0.decision == detect::Decision::H1_jamming;
  }
  const double t = seconds_since(t0);
  return {hits >= 190 && alarms <= 10 && t < 120.0,
          fmt("detected %d/200 at 10 dB, false alarms %d/200, %.1f s", hits, alarms, t)};
}

// Five poses on a ring around the jammer with jittered angles and radii.
synth::MissionScenario ring_mission(std::mt19937_64& rng, localize::Point jammer, double r_lo, double r_hi) {
  synth::MissionScenario sc;
  sc.jammer_position = jammer;
  sc.jammer_spec = scenarios::with_power(scenarios::cw(), 70.0);
  sc.noise_floor = 1.0;
  std::uniform_real_distribution<double> jitter(-0.4, 0.4), radius(r_lo, r_hi), start(0.0, oracle::kTau);
  const double a0 = start(rng);
  for (int i = 0; i < 5; ++i) {
    const double a = a0 + oracle::kTau * (i + jitter(rng)) / 5.0;
    const double r = radius(rng);
    sc.scan_poses.push_back({{jammer.x + r * std::sin(a), jammer.y + r * std::cos(a)}, localize::uniform_headings(36)});
  }
  return sc;
}

// 4. Localization on the 3 km grid and on a fine 200 m grid.
Outcome localization() {
  const auto t0 = Clock::now();
  const auto pattern = localize::make_pattern(oracle::kTau / 6.0, 0.01);
  std::mt19937_64 rng(4242);
  int coarse_ok = 0, fine_ok = 0;
  double coarse_worst = 0.0, fine_worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    std::uniform_real_distribution<double> pos(-700.0, 700.0);
    const localize::Point jammer{pos(rng), pos(rng)};
    const auto sc = ring_mission(rng, jammer, 200.0, 700.0);
    const localize::GridSpec grid;  // 300 x 300 cells of 10 m
    const auto map = localize::fuse_scans(synth::simulate_scan(sc, pattern), pattern, grid);
    const auto est = localize::extract_source(map);
    const double err = est ? localize::distance(est->centroid, jammer) : 1e9;
    coarse_worst = std::max(coarse_worst, err);
    coarse_ok += err <= 2.0 * grid.cell_size;
  }
  for (int t = 0; t < 20; ++t) {
    std::uniform_real_distribution<double> pos(-20.0, 20.0);
    const localize::Point jammer{pos(rng), pos(rng)};
    const auto sc = ring_mission(rng, jammer, 25.0, 60.0);
    const auto grid = localize::centered_grid({0.0, 0.0}, 2.0, 100);
    const auto map = localize::fuse_scans(synth::simulate_scan(sc, pattern), pattern, grid);
    const auto est = localize::extract_source(map);
    const double err = est ? localize::distance(est->centroid, jammer) : 1e9;
    fine_worst = std::max(fine_worst, err);
    fine_ok += err <= 3.0 * grid.cell_size;
  }
  const double t = seconds_since(t0);
  return {coarse_ok >= 18 && fine_ok == 20 && t < 60.0,
          fmt("10 m grid: %d/20 within 20 m (worst %.1f m); 2 m grid: %d/20 within 6 m (worst %.2f m); %.1f s",
              coarse_ok, coarse_worst, fine_ok, fine_worst, t)};
}

struct Cell {
  long r, c;
};

Cell argmax_cell(const localize::Heatmap& m) {
  const auto it = std::max_element(m.values.begin(), m.values.end());
  const auto i = static_cast<long>(it - m.values.begin());
  return {i / static_cast<long>(m.grid.cols), i % static_cast<long>(m.grid.cols)};
}

localize::Point rotate(localize::Point p, double th) {
  // clockwise in the east/north frame, so bearings grow by th
  return {p.x * std::cos(th) + p.y * std::sin(th), -p.x * std::sin(th) + p.y * std::cos(th)};
}

// 5. Fusion invariants.
Outcome fusion_invariants() {
  const auto pattern = localize::make_pattern(oracle::kTau / 6.0, 0.01);
  const auto grid = localize::centered_grid({0.0, 0.0}, 10.0, 120);
  std::mt19937_64 rng(777);
  int norm_ok = 0, rot_ok = 0, trans_ok = 0, zero_ok = 0;
  constexpr int kTrials = 25;
  for (int t = 0; t < kTrials; ++t) {
    std::uniform_real_distribution<double> pos(-150.0, 150.0);
    const localize::Point jammer{pos(rng), pos(rng)};
    const auto sc = ring_mission(rng, jammer, 150.0, 350.0);
    const auto poses = synth::simulate_scan(sc, pattern);
    const auto base = localize::fuse_scans(poses, pattern, grid);

    // N identical scans
    {
      std::vector<localize::ScanPose> rep;
      for (int k = 0; k < 4; ++k) rep.push_back(poses.front());
      const auto many = localize::fuse_scans(rep, pattern, grid);
      const auto one = localize::fuse_scans(std::vector<localize::ScanPose>{poses.front()}, pattern, grid);
      bool same = true;
      for (std::size_t i = 0; i < one.values.size() && same; ++i)
        same = std::abs(many.values[i] - one.values[i]) <= 1e-12 * std::max(1.0, std::abs(one.values[i]));
      norm_ok += same;
    }

    // rotation about the grid center
    {
      const double th = std::uniform_real_distribution<double>(-oracle::kTau / 2, oracle::kTau / 2)(rng);
      auto rsc = sc;
      rsc.jammer_position = rotate(sc.jammer_position, th);
      for (auto& p : rsc.scan_poses) {
        p.position = rotate(p.position, th);
        for (auto& h : p.headings) h = wrap_angle(h + th);
      }
      const auto rmap = localize::fuse_scans(synth::simulate_scan(rsc, pattern), pattern, grid);
      const Cell a = argmax_cell(base);
      const auto expect = rotate(grid.cell_center(static_cast<std::size_t>(a.r), static_cast<std::size_t>(a.c)), th);
      const Cell b = argmax_cell(rmap);
      const auto got = grid.cell_center(static_cast<std::size_t>(b.r), static_cast<std::size_t>(b.c));
      rot_ok += std::abs(got.x - expect.x) <= grid.cell_size && std::abs(got.y - expect.y) <= grid.cell_size;
    }

    // translation by whole cells
    {
      const long dx = std::uniform_int_distribution<long>(-8, 8)(rng);
      const long dy = std::uniform_int_distribution<long>(-8, 8)(rng);
      auto tsc = sc;
      const localize::Point shift{static_cast<double>(dx) * grid.cell_size, static_cast<double>(dy) * grid.cell_size};
      tsc.jammer_position = {sc.jammer_position.x + shift.x, sc.jammer_position.y + shift.y};
      for (auto& p : tsc.scan_poses) p.position = {p.position.x + shift.x, p.position.y + shift.y};
      const auto tmap = localize::fuse_scans(synth::simulate_scan(tsc, pattern), pattern, grid);
      const Cell a = argmax_cell(base), b = argmax_cell(tmap);
      trans_ok += std::abs(b.r - (a.r + dy)) <= 1 && std::abs(b.c - (a.c + dx)) <= 1;
    }

    // a pose that measured nothing
    {
      auto extra = poses;
      localize::ScanPose silent;
      silent.position = {pos(rng), pos(rng)};
      silent.headings = localize::uniform_headings(36);
      silent.energies.assign(36, 0.0);
      extra.push_back(silent);
      const auto zmap = localize::fuse_scans(extra, pattern, grid);
      const Cell a = argmax_cell(base), b = argmax_cell(zmap);
      const double f = static_cast<double>(poses.size()) / static_cast<double>(extra.size());
      bool scaled = true;
      for (std::size_t i = 0; i < base.values.size() && scaled; ++i)
        scaled = std::abs(zmap.values[i] - f * base.values[i]) <= 1e-9 * std::max(1.0, base.values[i]);
      zero_ok += a.r == b.r && a.c == b.c && scaled;
    }
  }
  const bool pass = norm_ok == kTrials && rot_ok == kTrials && trans_ok == kTrials && zero_ok == kTrials;
  return {pass, fmt("normalization %d/%d, rotation %d/%d, translation %d/%d, zero-energy pose %d/%d", norm_ok, kTrials,
                    rot_ok, kTrials, trans_ok, kTrials, zero_ok, kTrials)};
}

// Mission for the slow swept jammer: a tone walking up 10 MHz in 25 s,
// sampled every ~2 s.
io::MissionFile swept_mission() {
  io::MissionFile m;
  synth::WaveformSpec s;
  s.kind = synth::WaveformKind::SWEPT;
  s.bandwidth_hz = 10e6;
  s.sweep_time_s = 25.0;
  s.power_dbm = 10.0;
  m.scenario.jammer_spec = s;
  m.tracking.gate_hz = 1.5e6;
  return m;
}

// 6. One dominant, monotone track for a swept jammer.
Outcome tracking_continuity() {
  constexpr std::size_t n = 2048;
  const Calib cal = calibrate(n, 900000);
  auto m = swept_mission();
  m.detection.thresholds = cal.th;
  m.detection.peak_threshold = cal.peak;
  int ok = 0;
  std::size_t shortest = 10;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> start(0.0, 5.0), jitter(-0.2, 0.2);
    io::IqFile f;
    f.header = {scenarios::kFs, 1575.42e6, Band::L1};
    double tow = start(rng);
    for (int i = 0; i < 10; ++i) {
      auto snap = synth::synth_waveform(m.scenario.jammer_spec, n / scenarios::kFs, scenarios::kFs, seed, tow);
      snap = synth::add_awgn(std::move(snap), 1.0, seed * 1000 + static_cast<std::uint64_t>(i));
      snap.center_freq_hz = f.header.center_freq_hz;
      f.snapshots.push_back(std::move(snap));
      tow += 2.0 + jitter(rng);
    }
    const auto res = io::run_pipeline(m, f);
    const auto dom = detect::dominant_tracks(res.tracks);
    const bool good = dom.size() == 1 && dom.front()->monotone_direction() == 1;
    if (dom.size() == 1) shortest = std::min(shortest, dom.front()->history.size());
    ok += good;
  }
  return {ok >= 95, fmt("%d/100 seeds give one dominant monotone track (shortest dominant track %zu points)", ok,
                        shortest)};
}

// 7. Byte-exact round-trips and deterministic pipeline output.
Outcome roundtrip_determinism() {
  bool ok = true;
  std::string detail;

  std::vector<IqSnapshot> snaps;
  for (int i = 0; i < 3; ++i) {
    auto s = scenarios::jammed(scenarios::bpsk(8e6, 1.023e6, 1023), 1000 + 17 * static_cast<std::size_t>(i), 5.0,
                               static_cast<std::uint64_t>(i + 1), 2.0 * i);
    s.center_freq_hz = 1575.42e6;
    snaps.push_back(std::move(s));
  }
  const auto iq = io::write_iq(snaps);
  const bool iq_ok = io::write_iq(io::parse_iq_file(iq)) == iq;
  ok = ok && iq_ok;

  const auto scd = cyclo::fam_scd(snaps.front(), {128, 32});
  const auto grid = io::write_grid(io::to_grid(scd));
  const bool grid_ok = io::write_grid(io::parse_grid(grid)) == grid;
  ok = ok && grid_ok;

  io::MissionFile m;
  m.scenario.jammer_spec = scenarios::bpsk(8e6, 1.023e6, 1023);
  m.scenario.jammer_position = {120.0, -80.0};
  m.scenario.jammer_spec.power_dbm = 60.0;
  std::mt19937_64 rng(5);
  m.scenario.scan_poses = ring_mission(rng, m.scenario.jammer_position, 200.0, 500.0).scan_poses;
  m.stream.snapshot_len = 2048;
  m.stream.snapshots = 4;
  m.stream.jnr_db = 10.0;
  m.detection.calibration = io::CalibrationConfig{20, 0, 1.0, 3};
  const auto a = io::run_pipeline(m);
  const auto b = io::run_pipeline(m);
  const auto ja = io::to_json_lines(io::pipeline_records(a));
  const auto jb = io::to_json_lines(io::pipeline_records(b));
  const bool det_ok = ja == jb && a.heatmap && b.heatmap &&
                      io::write_grid(io::to_grid(*a.heatmap)) == io::write_grid(io::to_grid(*b.heatmap));
  ok = ok && det_ok;
  detail = fmt("IQ file %s, binary grid %s, pipeline output %s (%zu bytes of records)", iq_ok ? "identical" : "differs",
               grid_ok ? "identical" : "differs", det_ok ? "identical" : "differs", ja.size());
  return {ok, detail};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"1 FAM oracle equivalence", fam_oracle},
      {"2 signature reproduction", signatures},
      {"3 detection ROC", detection_roc},
      {"4 localization accuracy", localization},
      {"5 fusion invariants", fusion_invariants},
      {"6 peak-tracking continuity", tracking_continuity},
      {"7 round-trips and determinism", roundtrip_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
