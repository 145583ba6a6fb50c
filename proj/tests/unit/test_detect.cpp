#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "jamscan/jamscan.hpp"
#include "scenarios.hpp"

using namespace jamscan;
using detect::Decision;

namespace {

cyclo::SpectralCorrelation flat_surface(std::size_t rows, std::size_t cols, double v = 0.0) {
  cyclo::SpectralCorrelation s;
  s.rows = rows;
  s.cols = cols;
  s.values.assign(rows * cols, v);
  for (std::size_t r = 0; r < rows; ++r) s.freq_axis.push_back(1e3 * static_cast<double>(r));
  for (std::size_t c = 0; c < cols; ++c) s.alpha_axis.push_back(0.01 * static_cast<double>(c));
  return s;
}

detect::Peak peak_at(double f, double mag = 1.0) {
  detect::Peak p;
  p.freq_center_hz = f;
  p.magnitude = mag;
  return p;
}

struct Calibrated {
  detect::Thresholds th;
  double peak = 0.0;
};

const Calibrated& noise_calibration() {
  static const Calibrated c = [] {
    std::vector<IqSnapshot> benign;
    for (std::uint64_t i = 0; i < 40; ++i) benign.push_back(scenarios::benign(4096, 3000 + i));
    const auto cal = io::calibrate_from(benign, cyclo::FamParams{}, 1.0);
    return Calibrated{cal.thresholds, cal.peak_threshold};
  }();
  return c;
}

detect::JammerClass classify_one(const IqSnapshot& s) {
  const auto& cal = noise_calibration();
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

}  // namespace

TEST(BandEnergy, Examples) {
  EXPECT_EQ(detect::band_energy(synth::silence(64, 1e6)), 0.0);
  const auto tone = synth::synth_waveform(scenarios::cw(1e6), 1e-3, scenarios::kFs, 1);
  EXPECT_NEAR(detect::band_energy(tone), 1.0, 1e-12);
  EXPECT_NEAR(detect::band_energy(synth::noise_snapshot(100000, 1e6, 2.0, 5)), 2.0, 0.1);
  EXPECT_THROW(detect::band_energy(IqSnapshot{}), InsufficientDataError);
}

TEST(EnergyDecide, StrictlyAboveThreshold) {
  EXPECT_EQ(detect::energy_decide(1.0, 1.0), Decision::H0_benign);
  EXPECT_EQ(detect::energy_decide(std::nextafter(1.0, 2.0), 1.0), Decision::H1_jamming);
  EXPECT_EQ(detect::energy_decide(0.5, 1.0), Decision::H0_benign);
  EXPECT_EQ(detect::energy_decide(0.0, 1e-9), Decision::H0_benign);
  EXPECT_THROW(detect::energy_decide(1.0, 0.0), ConfigurationError);
  EXPECT_THROW(detect::energy_decide(1.0, std::numeric_limits<double>::quiet_NaN()), ConfigurationError);
}

TEST(Calibrate, MarginTimesBenignMaximum) {
  const std::vector<double> b{0.2, 0.3, 0.25};
  EXPECT_DOUBLE_EQ(detect::calibrate_threshold(b, 1.0), 0.3);
  EXPECT_DOUBLE_EQ(detect::calibrate_threshold(b, 1.5), 0.45);
  EXPECT_THROW(detect::calibrate_threshold(std::vector<double>{}, 1.0), CalibrationError);
  EXPECT_THROW(detect::calibrate_threshold(b, 0.5), CalibrationError);
}

TEST(Calibrate, ZeroBenignDataRejected) {
  cyclo::AlphaProfile p;
  p.values = {0.0, 0.0};
  const std::vector<cyclo::AlphaProfile> profiles{p};
  const std::vector<double> energies{0.0};
  EXPECT_THROW(detect::calibrate_thresholds(profiles, energies, 1.0), CalibrationError);
}

TEST(Policy, EitherAndBoth) {
  using detect::Policy;
  EXPECT_EQ(detect::policy_from_string("either"), Policy::Either);
  EXPECT_EQ(detect::policy_from_string("both"), Policy::Both);
  const auto h0 = Decision::H0_benign, h1 = Decision::H1_jamming;
  EXPECT_EQ(detect::combine(h1, h0, Policy::Either), h1);
  EXPECT_EQ(detect::combine(h0, h1, Policy::Either), h1);
  EXPECT_EQ(detect::combine(h0, h0, Policy::Either), h0);
  EXPECT_EQ(detect::combine(h1, h0, Policy::Both), h0);
  EXPECT_EQ(detect::combine(h1, h1, Policy::Both), h1);
}

TEST(Detect, MonotoneInJammerPower) {
  const auto& cal = noise_calibration();
  bool seen_h1 = false;
  for (double jnr = -20.0; jnr <= 20.0; jnr += 5.0) {
    const auto s = scenarios::jammed(scenarios::cw(1e6), 4096, jnr, 77);
    const auto prof = cyclo::alpha_profile(cyclo::fam_scd(s, cyclo::FamParams{}));
    const bool h1 = detect::detect(s, prof, cal.th).decision == Decision::H1_jamming;
    EXPECT_FALSE(seen_h1 && !h1) << "detection lost at " << jnr << " dB";
    seen_h1 = seen_h1 || h1;
  }
  EXPECT_TRUE(seen_h1);
}

TEST(FindPeaks, SingleInjectedPeak) {
  auto s = flat_surface(9, 11);
  s.at(4, 7) = 5.0;
  const auto p = detect::find_peaks(s, 1.0);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].row, 4u);
  EXPECT_EQ(p[0].col, 7u);
  EXPECT_EQ(p[0].magnitude, 5.0);
  EXPECT_DOUBLE_EQ(p[0].freq_center_hz, 4e3);
  EXPECT_DOUBLE_EQ(p[0].alpha_center, 0.07);
}

TEST(FindPeaks, TwoPeaksStrongestFirst) {
  auto s = flat_surface(9, 11);
  s.at(1, 1) = 2.0;
  s.at(7, 9) = 3.0;
  const auto p = detect::find_peaks(s, 1.0);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0].row, 7u);
  EXPECT_EQ(p[1].row, 1u);
  EXPECT_TRUE(detect::find_peaks(s, 2.5).size() == 1u);
}

TEST(FindPeaks, PlateauKeepsOneCell) {
  auto s = flat_surface(5, 5);
  s.at(2, 2) = s.at(2, 3) = s.at(3, 2) = 4.0;
  const auto p = detect::find_peaks(s, 1.0);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].row, 2u);
  EXPECT_EQ(p[0].col, 2u);
}

TEST(FindPeaks, Idempotent) {
  const auto scd = cyclo::fam_scd(scenarios::jammed(scenarios::bpsk(8e6, 1.023e6, 1023), 4096, 5.0, 2),
                                  cyclo::FamParams{});
  const double thr = 0.2 * scd.max_value();
  const auto a = detect::find_peaks(scd, thr);
  auto only = flat_surface(scd.rows, scd.cols);
  only.freq_axis = scd.freq_axis;
  only.alpha_axis = scd.alpha_axis;
  for (const auto& p : a) only.at(p.row, p.col) = p.magnitude;
  const auto b = detect::find_peaks(only, thr);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].row, b[i].row);
    EXPECT_EQ(a[i].col, b[i].col);
  }
}

TEST(FindPeaks, ToneWithinOneBin) {
  const double f0 = 2.1e6;
  const auto scd = cyclo::fam_scd(scenarios::jammed(scenarios::cw(f0), 4096, 10.0, 4), cyclo::FamParams{});
  const auto p = detect::find_peaks(scd, 0.5 * scd.max_value());
  ASSERT_FALSE(p.empty());
  EXPECT_NEAR(p[0].freq_center_hz, f0, scd.bin_hz());
  EXPECT_NEAR(p[0].alpha_center, 0.0, 1e-12);
}

TEST(FindPeaks, ProfilePeaks) {
  cyclo::AlphaProfile prof;
  prof.values = {0.0, 1.0, 3.0, 1.0, 2.0, 2.0, 0.0};
  for (std::size_t i = 0; i < prof.values.size(); ++i) prof.alpha_axis.push_back(0.1 * static_cast<double>(i));
  const auto p = detect::find_peaks(prof, 0.5);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0].col, 2u);
  EXPECT_EQ(p[1].col, 4u);
}

TEST(Tracker, ExtendsInsideTheGate) {
  detect::PeakTracker t({100e3, 2});
  t.update({peak_at(1.00e6)}, 0.0);
  t.update({peak_at(1.01e6)}, 1.0);
  ASSERT_EQ(t.tracks().size(), 1u);
  EXPECT_EQ(t.tracks()[0].history.size(), 2u);
  EXPECT_EQ(t.tracks()[0].monotone_direction(), 1);
  EXPECT_NEAR(t.tracks()[0].mean_step_hz(), 10e3, 1e-6);
}

TEST(Tracker, OpensOutsideTheGate) {
  detect::PeakTracker t({100e3, 2});
  t.update({peak_at(1e6)}, 0.0);
  t.update({peak_at(5e6)}, 1.0);
  ASSERT_EQ(t.tracks().size(), 2u);
  EXPECT_NE(t.tracks()[0].track_id, t.tracks()[1].track_id);
  EXPECT_EQ(t.tracks()[0].status, detect::TrackStatus::Coasting);
}

TEST(Tracker, CoastsThenCloses) {
  detect::PeakTracker t({100e3, 2});
  t.update({peak_at(1e6)}, 0.0);
  t.update({}, 1.0);
  EXPECT_EQ(t.tracks()[0].status, detect::TrackStatus::Coasting);
  t.update({}, 2.0);
  EXPECT_EQ(t.tracks()[0].status, detect::TrackStatus::Coasting);
  t.update({}, 3.0);
  EXPECT_EQ(t.tracks()[0].status, detect::TrackStatus::Closed);
  // a closed track is never resumed
  t.update({peak_at(1e6)}, 4.0);
  ASSERT_EQ(t.tracks().size(), 2u);
  EXPECT_EQ(t.tracks()[0].history.size(), 1u);
}

TEST(Tracker, RevivesWhileCoasting) {
  detect::PeakTracker t({100e3, 2});
  t.update({peak_at(1e6)}, 0.0);
  t.update({}, 1.0);
  t.update({peak_at(1.02e6)}, 2.0);
  ASSERT_EQ(t.tracks().size(), 1u);
  EXPECT_EQ(t.tracks()[0].status, detect::TrackStatus::Active);
  EXPECT_EQ(t.tracks()[0].misses, 0);
}

TEST(Tracker, TimestampsMustIncrease) {
  detect::PeakTracker t;
  t.update({peak_at(1e6)}, 5.0);
  EXPECT_THROW(t.update({peak_at(1e6)}, 5.0), SequencingError);
  EXPECT_THROW(t.update({peak_at(1e6)}, 4.0), SequencingError);
  std::vector<detect::PeakTrack> tracks;
  int id = 0;
  EXPECT_THROW(detect::track_peaks(tracks, {}, 0.0, {0.0, 2}, id), ConfigurationError);
}

TEST(Tracker, JitterInsideQuarterGateNeverSplits) {
  const double gate = 100e3;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-gate / 4, gate / 4);
    detect::PeakTracker t({gate, 2});
    for (int k = 0; k < 30; ++k) t.update({peak_at(3e6 + jitter(rng))}, static_cast<double>(k));
    ASSERT_EQ(t.tracks().size(), 1u) << "seed " << seed;
    EXPECT_EQ(t.tracks()[0].history.size(), 30u);
  }
}

TEST(Tracker, DominantTrackHasMostMagnitude) {
  detect::PeakTracker t({100e3, 2});
  for (int k = 0; k < 5; ++k) t.update({peak_at(1e6, 1.0), peak_at(4e6, 3.0)}, static_cast<double>(k));
  const auto* d = detect::dominant_track(t.tracks());
  ASSERT_NE(d, nullptr);
  EXPECT_NEAR(d->last_freq(), 4e6, 1e-6);
}

TEST(Classify, CwTone) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto c = classify_one(scenarios::jammed(scenarios::cw(), 4096, 10.0, seed));
    EXPECT_EQ(c.label, detect::Label::CW_TONE) << detect::to_string(c.label);
  }
}

TEST(Classify, BpskComb) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto c = classify_one(scenarios::jammed(scenarios::bpsk(8e6, 1.023e6, 1023), 4096, 10.0, seed));
    EXPECT_EQ(c.label, detect::Label::BPSK_PRN) << detect::to_string(c.label);
    EXPECT_GT(c.evidence.at("comb_spacing_hz"), 0.0);
  }
}

TEST(Classify, NoiseIsNone) {
  for (std::uint64_t seed = 0; seed < 5; ++seed)
    EXPECT_EQ(classify_one(scenarios::benign(4096, 8000 + seed)).label, detect::Label::NONE);
}

TEST(Classify, AmplitudeInvariant) {
  // stream and benign calibration scaled together
  auto scaled = [](IqSnapshot s, double c) {
    for (auto& z : s.samples) z *= c;
    return s;
  };
  const std::vector<synth::WaveformSpec> specs{scenarios::cw(), scenarios::chirp(5e6, 100e-6),
                                               scenarios::bpsk(8e6, 1.023e6, 1023)};
  for (double c : {1.0, 3.0, 100.0}) {
    std::vector<IqSnapshot> benign;
    for (std::uint64_t i = 0; i < 20; ++i) benign.push_back(scaled(scenarios::benign(4096, 3000 + i), c));
    const auto cal = io::calibrate_from(benign, cyclo::FamParams{}, 1.0);
    for (std::size_t k = 0; k < specs.size(); ++k) {
      const auto s = scaled(scenarios::jammed(specs[k], 4096, 10.0, 21 + k), c);
      const auto scd = cyclo::fam_scd(s, cyclo::FamParams{});
      detect::PeakTracker tracker({1e6, 2});
      tracker.update(detect::find_peaks(scd, std::max(cal.peak_threshold, 0.1 * scd.max_value())), 0.0);
      detect::ClassifierOptions opt;
      opt.profile_threshold = cal.thresholds.profile;
      const auto label = detect::classify(tracker.tracks(), cyclo::alpha_profile(scd), cyclo::coherence(scd),
                                          cyclo::cyclic_autocorr(s), opt)
                             .label;
      const auto ref = classify_one(scenarios::jammed(specs[k], 4096, 10.0, 21 + k)).label;
      EXPECT_EQ(label, ref) << "scale " << c << " spec " << k;
      EXPECT_NE(label, detect::Label::NONE);
    }
  }
}

TEST(Calibrate, HeldOutFalseAlarmRate) {
  const double sigma2 = 2.0;
  const cyclo::FamParams fam{};
  std::vector<IqSnapshot> benign;
  for (std::uint64_t i = 0; i < 100; ++i) benign.push_back(synth::noise_snapshot(2048, scenarios::kFs, sigma2, 100 + i));
  const auto cal = io::calibrate_from(benign, fam, 1.0);
  int alarms = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto s = synth::noise_snapshot(2048, scenarios::kFs, sigma2, 50000 + i);
    const auto prof = cyclo::alpha_profile(cyclo::fam_scd(s, fam));
    alarms += detect::detect(s, prof, cal.thresholds).decision == Decision::H1_jamming;
  }
  EXPECT_LE(alarms, 10);
}

TEST(Classify, LabelNamesRoundTrip) {
  using detect::Label;
  for (Label l : {Label::NONE, Label::CW_TONE, Label::CHIRP, Label::SWEPT, Label::BPSK_PRN, Label::COMPOUND})
    EXPECT_EQ(detect::label_from_string(detect::to_string(l)), l);
  EXPECT_THROW(detect::label_from_string("AM"), FormatError);
}
