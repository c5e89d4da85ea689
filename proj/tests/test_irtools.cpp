#include <doctest.h>

#include "tfdiff/error.hpp"
#include "tfdiff/irtools.hpp"
#include "tfdiff/processor.hpp"
#include "tfdiff/random.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace tfdiff;
using doctest::Approx;

namespace {

MultichannelIr impulses(std::size_t channels, std::size_t n) {
  MultichannelIr ir;
  ir.channels.assign(channels, std::vector<double>(n, 0.0));
  for (auto& c : ir.channels) c[0] = 0.5;
  return ir;
}

MultichannelIr tone(double f, std::size_t n, double fs = 48000.0) {
  MultichannelIr ir;
  ir.sample_rate = fs;
  ir.channels.assign(1, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) ir.channels[0][i] = std::sin(2.0 * std::numbers::pi * f * i / fs);
  return ir;
}

std::string header_bytes(std::uint16_t format, std::uint16_t bits) {
  std::ostringstream os;
  auto p16 = [&](std::uint16_t v) { os.put(static_cast<char>(v & 0xFF)).put(static_cast<char>(v >> 8)); };
  auto p32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xFF));
  };
  os.write("RIFF", 4);
  p32(36 + 4);
  os.write("WAVEfmt ", 8);
  p32(16);
  p16(format);
  p16(1);
  p32(48000);
  p32(48000u * bits / 8);
  p16(bits / 8);
  p16(bits);
  os.write("data", 4);
  p32(4);
  os.write("\0\0\0\0", 4);
  return os.str();
}

// Half spectrum whose band bins carry free-field snapshots of the given rays,
// each arriving with its own delay.
Eigen::MatrixXcd band_half_spectrum(const ArraySpec& array, const std::vector<PlaneWave>& rays,
                                    const std::vector<double>& delays, const BandSpec& band, std::size_t n,
                                    double fs) {
  Eigen::MatrixXcd half = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n / 2 + 1),
                                                 static_cast<Eigen::Index>(array.size()));
  const double df = fs / static_cast<double>(n);
  for (std::size_t k = 1; k < n / 2; ++k) {
    const double f = static_cast<double>(k) * df;
    if (f < band.lower() || f >= band.upper()) continue;
    std::vector<PlaneWave> delayed = rays;
    for (std::size_t i = 0; i < delayed.size(); ++i) delayed[i].phase -= 2.0 * std::numbers::pi * f * delays[i];
    half.row(static_cast<Eigen::Index>(k)) = synth_free(array, Scene{delayed, f}, Medium{}).p.transpose();
  }
  return half;
}

}  // namespace

TEST_CASE("24-channel float WAV round trip") {
  const auto ir = impulses(24, 2048);
  std::stringstream ss;
  write_wav(ss, ir);
  const auto back = read_wav(ss);
  REQUIRE(back.channel_count() == 24);
  CHECK(back.length() == 2048);
  CHECK(back.sample_rate == 48000.0);
  for (const auto& c : back.channels) {
    CHECK(std::max_element(c.begin(), c.end()) - c.begin() == 0);
    CHECK(c[0] == 0.5);
  }
  CHECK_NOTHROW(check_channel_map(back, make_tf24()));
}

TEST_CASE("PCM encodings") {
  MultichannelIr ir;
  ir.channels = {{1.0, -1.0, 0.25, 0.0}};
  for (auto enc : {WavEncoding::Pcm16, WavEncoding::Pcm24, WavEncoding::Pcm32}) {
    std::stringstream ss;
    write_wav(ss, ir, enc);
    const auto back = read_wav(ss);
    const int bits = enc == WavEncoding::Pcm16 ? 16 : enc == WavEncoding::Pcm24 ? 24 : 32;
    CHECK(back.channels[0][0] == 1.0 - std::ldexp(1.0, 1 - bits));
    CHECK(back.channels[0][1] == -1.0);
    CHECK(back.channels[0][2] == 0.25);
    CHECK(back.channels[0][3] == 0.0);
  }
}

TEST_CASE("WAV errors") {
  SUBCASE("channel count mismatch") {
    CHECK_THROWS_AS(check_channel_map(impulses(1, 64), make_tf24()), DomainError);
  }
  SUBCASE("unsupported encoding") {
    std::istringstream is(header_bytes(6, 8));  // A-law
    CHECK_THROWS_AS(read_wav(is), FormatError);
  }
  SUBCASE("8-bit PCM is rejected") {
    std::istringstream is(header_bytes(1, 8));
    CHECK_THROWS_AS(read_wav(is), FormatError);
  }
  SUBCASE("truncated data") {
    std::stringstream ss;
    write_wav(ss, impulses(4, 256));
    const std::string full = ss.str();
    std::istringstream is(full.substr(0, full.size() - 10));
    CHECK_THROWS_AS(read_wav(is), IoError);
  }
  SUBCASE("not RIFF") {
    std::istringstream is("hello world, this is not a wave file at all");
    CHECK_THROWS_AS(read_wav(is), FormatError);
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(load_wav("/nonexistent/ir.wav"), IoError); }
}

TEST_CASE("band spectra") {
  SUBCASE("a 1 kHz tone lands in the 1 kHz band") {
    const auto ir = tone(1000.0, 4800);
    const double total = signal_energy(ir);
    const double in_band = band_spectra(ir, octave_band(1000)).energy();
    CHECK(in_band > 0.99 * total);
    CHECK(band_spectra(ir, octave_band(4000)).energy() < 1e-6 * total);
  }
  SUBCASE("silence") {
    MultichannelIr ir;
    ir.channels = {std::vector<double>(4800, 0.0)};
    const auto s = band_spectra(ir, octave_band(500));
    CHECK(s.X.norm() == 0.0);
    CHECK(s.energy() == 0.0);
  }
  SUBCASE("band energies never exceed the total") {
    Rng rng = Rng::derive(11, {1});
    MultichannelIr ir;
    ir.channels.assign(3, std::vector<double>(9600));
    for (auto& c : ir.channels) {
      for (auto& x : c) x = rng.uniform(-1.0, 1.0);
    }
    double sum = 0.0;
    for (double b : standard_bands()) sum += band_spectra(ir, octave_band(b)).energy();
    CHECK(sum <= signal_energy(ir) * (1.0 + 1e-12));
    CHECK(sum > 0.5 * signal_energy(ir));
  }
  SUBCASE("a band above Nyquist") {
    auto ir = tone(100.0, 4800, 16000.0);
    CHECK_THROWS_AS(band_spectra(ir, octave_band(16000)), DomainError);
  }
  SUBCASE("a response shorter than one period") {
    CHECK_THROWS_AS(band_spectra(tone(100.0, 256), octave_band(63)), DomainError);
  }
  SUBCASE("half-spectrum inverse") {
    Rng rng = Rng::derive(8, {1});
    const std::size_t n = 1000;
    Eigen::MatrixXcd half(static_cast<Eigen::Index>(n / 2 + 1), 2);
    for (Eigen::Index k = 0; k < half.rows(); ++k) {
      for (Eigen::Index c = 0; c < 2; ++c) half(k, c) = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    }
    half.row(0) = half.row(0).real().cast<std::complex<double>>();
    half.row(static_cast<Eigen::Index>(n / 2)) = half.row(static_cast<Eigen::Index>(n / 2)).real().cast<std::complex<double>>();
    const auto ir = ir_from_half_spectrum(half, n, 48000.0);
    const auto s = band_spectra(ir, octave_band(1000));
    REQUIRE(s.X.rows() > 0);
    const Eigen::MatrixXcd expect = half.middleRows(static_cast<Eigen::Index>(s.first_bin), s.X.rows());
    CHECK((s.X - expect).norm() < 1e-12 * expect.norm());
    CHECK_THROWS_AS(ir_from_half_spectrum(half, n + 2, 48000.0), DomainError);
  }
}

TEST_CASE("energy-ratio mixing") {
  Rng rng = Rng::derive(5, {2});
  MultichannelIr a, b;
  a.channels.assign(2, std::vector<double>(4800));
  b.channels.assign(2, std::vector<double>(4800));
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < 4800; ++i) {
      a.channels[c][i] = rng.uniform(-1.0, 1.0);
      b.channels[c][i] = 3.0 * rng.uniform(-1.0, 1.0);
    }
  }
  const auto sa = band_spectra(a, octave_band(2000));
  const auto sb = band_spectra(b, octave_band(2000));

  const auto m1 = mix_by_ratio(sa, sb, 1.0);
  CHECK(m1.diffuse_gain == 0.0);
  CHECK(m1.mixed.energy() == Approx(1.0).epsilon(1e-12));
  const auto m0 = mix_by_ratio(sa, sb, 0.0);
  CHECK(m0.beam_gain == 0.0);
  CHECK((m0.mixed.X - m0.diffuse_gain * sb.X).norm() == 0.0);
  const auto mh = mix_by_ratio(sa, sb, 0.5);
  CHECK(std::abs(mh.beam_energy - mh.diffuse_energy) < 1e-9);
  CHECK(mh.beam_energy == Approx(0.5));

  // Linear in the inputs: scaling either response leaves the mix unchanged.
  auto sa2 = sa;
  sa2.X *= 7.0;
  const auto mh2 = mix_by_ratio(sa2, sb, 0.5);
  CHECK((mh2.mixed.X - mh.mixed.X).norm() < 1e-12 * mh.mixed.X.norm());

  CHECK_THROWS_AS(mix_by_ratio(sa, sb, 1.5), DomainError);
  auto silent = sa;
  silent.X.setZero();
  CHECK_THROWS_AS(mix_by_ratio(silent, sb, 0.5), DomainError);
  CHECK_NOTHROW(mix_by_ratio(silent, sb, 0.0));
}

TEST_CASE("impulse-response mixing matches the snapshot pipeline") {
  const ArraySpec array = make_tf24();
  const double fs = 48000.0;
  const std::size_t n = 48000;
  const BandSpec band = octave_band(1000);

  Rng rng = Rng::derive(21, {3});
  const std::vector<PlaneWave> beam{wave_from_incidence(Direction::from_angles(30.0, 70.0))};
  const std::vector<PlaneWave> diffuse = diffuse_rays(400, rng);
  std::vector<double> delays(diffuse.size());
  for (auto& d : delays) d = rng.uniform(0.0, 0.5);
  const auto hb = band_half_spectrum(array, beam, {0.002}, band, n, fs);
  const auto hd = band_half_spectrum(array, diffuse, delays, band, n, fs);
  const auto ir_b = ir_from_half_spectrum(hb, n, fs);
  const auto ir_d = ir_from_half_spectrum(hd, n, fs);

  std::stringstream wb, wd;
  write_wav(wb, ir_b);
  write_wav(wd, ir_d);

  IrMixConfig cfg;
  cfg.bands = {1000};
  cfg.etas = {0.0, 0.5, 1.0};
  const auto res = run_irmix(read_wav(wb), read_wav(wd), array, cfg);
  REQUIRE(res.points.size() == 3);

  // Reference: mix the snapshots directly with the same energy shares.
  const ArrayProcessor proc(array, Medium{}, {});
  double eb = 0.0, ed = 0.0;
  for (Eigen::Index k = 0; k < hb.rows(); ++k) {
    eb += 2.0 * hb.row(k).squaredNorm() / static_cast<double>(n);
    ed += 2.0 * hd.row(k).squaredNorm() / static_cast<double>(n);
  }
  for (const auto& p : res.points) {
    const double eta = *p.eta;
    BandAccumulator acc(proc);
    for (Eigen::Index k = 0; k < hb.rows(); ++k) {
      if (hb.row(k).norm() == 0.0) continue;
      const Eigen::VectorXcd x = (std::sqrt(eta / eb) * hb.row(k) + std::sqrt((1.0 - eta) / ed) * hd.row(k)).transpose();
      acc.add(proc.analyze(PressureSnapshot{static_cast<double>(k) * fs / static_cast<double>(n), x}));
    }
    const auto ref = acc.report(1000);
    INFO("eta = " << eta);
    CHECK(p.report.psi_ie == Approx(ref.psi_ie).epsilon(0.02).scale(1.0));
    CHECK(p.report.psi_com == Approx(ref.psi_com).epsilon(0.02).scale(1.0));
  }
  CHECK(res.points.back().report.psi_com < 0.05);
  CHECK(res.points.front().report.psi_com > 0.8);

  MultichannelIr shorter = ir_d;
  for (auto& c : shorter.channels) c.resize(n / 2);
  CHECK_THROWS_AS(run_irmix(ir_b, shorter, array, cfg), DomainError);
}
