// SPDX-License-Identifier: Apache-2.0
#include "tfdiff/irtools.hpp"

#include "tfdiff/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>

namespace tfdiff {

void MultichannelIr::validate() const {
  if (!(sample_rate > 0.0)) throw DomainError("sample rate must be positive");
  if (channels.empty()) throw DomainError("impulse response has no channels");
  for (const auto& c : channels) {
    if (c.size() != channels.front().size()) throw DomainError("impulse response channels differ in length");
  }
}

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t le32(const unsigned char* b) {
  return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
         static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}
std::uint16_t le16(const unsigned char* b) { return static_cast<std::uint16_t>(b[0] | b[1] << 8); }

void read_exact(std::istream& is, unsigned char* dst, std::size_t n, const char* what) {
  is.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(is.gcount()) != n) throw IoError(std::string("truncated WAV file (") + what + ")");
}

double decode_sample(const unsigned char* b, std::uint16_t format, int bits) {
  if (format == kFormatFloat) {
    const std::uint32_t u = le32(b);
    float f;
    std::memcpy(&f, &u, sizeof f);
    return f;
  }
  std::int32_t v = 0;
  switch (bits) {
    case 16: v = static_cast<std::int16_t>(le16(b)); break;
    case 24: {
      std::uint32_t u = static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
                        static_cast<std::uint32_t>(b[2]) << 16;
      if (u & 0x800000u) u |= 0xFF000000u;
      v = static_cast<std::int32_t>(u);
      break;
    }
    case 32: v = static_cast<std::int32_t>(le32(b)); break;
  }
  return static_cast<double>(v) / std::ldexp(1.0, bits - 1);
}

}  // namespace

MultichannelIr read_wav(std::istream& is) {
  std::array<unsigned char, 12> riff{};
  read_exact(is, riff.data(), riff.size(), "header");
  if (std::memcmp(riff.data(), "RIFF", 4) != 0 || std::memcmp(riff.data() + 8, "WAVE", 4) != 0) {
    throw FormatError("not a RIFF/WAVE file");
  }
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  for (;;) {
    std::array<unsigned char, 8> hdr{};
    is.read(reinterpret_cast<char*>(hdr.data()), 8);
    if (is.gcount() == 0) throw FormatError("WAV file has no data chunk");
    if (is.gcount() != 8) throw IoError("truncated WAV file (chunk header)");
    const std::uint32_t size = le32(hdr.data() + 4);
    if (std::memcmp(hdr.data(), "fmt ", 4) == 0) {
      if (size < 16) throw FormatError("WAV fmt chunk too short");
      std::vector<unsigned char> fmt(size + (size & 1));
      read_exact(is, fmt.data(), fmt.size(), "fmt chunk");
      format = le16(fmt.data());
      channels = le16(fmt.data() + 2);
      rate = le32(fmt.data() + 4);
      bits = le16(fmt.data() + 14);
      if (format == kFormatExtensible) {
        if (size < 40) throw FormatError("WAV extensible fmt chunk too short");
        format = le16(fmt.data() + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(hdr.data(), "data", 4) == 0) {
      if (!have_fmt) throw FormatError("WAV data chunk before fmt chunk");
      const bool pcm_ok = format == kFormatPcm && (bits == 16 || bits == 24 || bits == 32);
      const bool float_ok = format == kFormatFloat && bits == 32;
      if (!pcm_ok && !float_ok) {
        throw FormatError("unsupported WAV encoding (format " + std::to_string(format) + ", " +
                          std::to_string(bits) + " bits)");
      }
      if (channels == 0 || rate == 0) throw FormatError("WAV header with zero channels or rate");
      const std::size_t frame = static_cast<std::size_t>(channels) * (bits / 8);
      if (size % frame != 0) throw IoError("WAV data chunk is not a whole number of frames");
      std::vector<unsigned char> data(size);
      read_exact(is, data.data(), size, "data chunk");
      const std::size_t frames = size / frame;
      MultichannelIr ir;
      ir.sample_rate = rate;
      ir.channels.assign(channels, std::vector<double>(frames));
      for (std::size_t n = 0; n < frames; ++n) {
        for (std::size_t c = 0; c < channels; ++c) {
          ir.channels[c][n] = decode_sample(data.data() + n * frame + c * (bits / 8), format, bits);
        }
      }
      return ir;
    } else {
      is.ignore(static_cast<std::streamsize>(size + (size & 1)));
      if (static_cast<std::uint32_t>(is.gcount()) != size + (size & 1)) throw IoError("truncated WAV chunk");
    }
  }
}

MultichannelIr load_wav(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open WAV file: " + path);
  return read_wav(f);
}

namespace {

void put16(std::ostream& os, std::uint16_t v) {
  const unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
  os.write(reinterpret_cast<const char*>(b), 2);
}
void put32(std::ostream& os, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

}  // namespace

void write_wav(std::ostream& os, const MultichannelIr& ir, WavEncoding enc) {
  ir.validate();
  const int bits = enc == WavEncoding::Pcm16 ? 16 : enc == WavEncoding::Pcm24 ? 24 : 32;
  const std::uint16_t format = enc == WavEncoding::Float32 ? kFormatFloat : kFormatPcm;
  const auto channels = static_cast<std::uint16_t>(ir.channel_count());
  const std::uint32_t block = channels * static_cast<std::uint32_t>(bits / 8);
  const auto data_size = static_cast<std::uint32_t>(block * ir.length());
  os.write("RIFF", 4);
  put32(os, 36 + data_size);
  os.write("WAVEfmt ", 8);
  put32(os, 16);
  put16(os, format);
  put16(os, channels);
  put32(os, static_cast<std::uint32_t>(std::lround(ir.sample_rate)));
  put32(os, static_cast<std::uint32_t>(std::lround(ir.sample_rate)) * block);
  put16(os, static_cast<std::uint16_t>(block));
  put16(os, static_cast<std::uint16_t>(bits));
  os.write("data", 4);
  put32(os, data_size);
  const double full = std::ldexp(1.0, bits - 1);
  for (std::size_t n = 0; n < ir.length(); ++n) {
    for (const auto& ch : ir.channels) {
      const double x = ch[n];
      if (enc == WavEncoding::Float32) {
        const float f = static_cast<float>(x);
        std::uint32_t u;
        std::memcpy(&u, &f, sizeof u);
        put32(os, u);
        continue;
      }
      const auto v = static_cast<std::int64_t>(std::clamp(std::round(x * full), -full, full - 1.0));
      const auto u = static_cast<std::uint32_t>(v);
      const unsigned char b[4] = {static_cast<unsigned char>(u), static_cast<unsigned char>(u >> 8),
                                  static_cast<unsigned char>(u >> 16), static_cast<unsigned char>(u >> 24)};
      os.write(reinterpret_cast<const char*>(b), bits / 8);
    }
  }
  if (!os) throw IoError("failed writing WAV data");
}

void save_wav(const std::string& path, const MultichannelIr& ir, WavEncoding enc) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot create WAV file: " + path);
  write_wav(f, ir, enc);
}

void check_channel_map(const MultichannelIr& ir, const ArraySpec& array) {
  if (ir.channel_count() != array.size()) {
    throw DomainError("impulse response has " + std::to_string(ir.channel_count()) + " channels, array '" +
                      array.name + "' has " + std::to_string(array.size()) + " sensors");
  }
}

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

BandSpectra band_spectra(const MultichannelIr& ir, const BandSpec& band) {
  ir.validate();
  const std::size_t n = ir.length();
  const double nyquist = ir.sample_rate / 2.0;
  if (band.lower() >= nyquist) throw DomainError("band lies above the Nyquist frequency");
  if (static_cast<double>(n) < ir.sample_rate / band.lower()) {
    throw DomainError("impulse response shorter than one period of the band's lower edge");
  }
  const double df = ir.sample_rate / static_cast<double>(n);
  const auto k_lo = static_cast<std::size_t>(std::ceil(band.lower() / df));
  const auto k_hi = std::min(static_cast<std::size_t>(std::ceil(band.upper() / df)), n / 2 + 1);

  BandSpectra out;
  out.band_hz = band.nominal_hz;
  out.fft_length = n;
  out.first_bin = k_lo;
  for (std::size_t k = k_lo; k < k_hi; ++k) out.frequencies.push_back(static_cast<double>(k) * df);
  out.X.resize(static_cast<Eigen::Index>(out.frequencies.size()), static_cast<Eigen::Index>(ir.channel_count()));

  std::vector<double> in(n);
  std::vector<std::complex<double>> spec(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), reinterpret_cast<fftw_complex*>(spec.data()),
                                FFTW_ESTIMATE);
  }
  for (std::size_t c = 0; c < ir.channel_count(); ++c) {
    std::copy(ir.channels[c].begin(), ir.channels[c].end(), in.begin());
    fftw_execute(plan);
    for (std::size_t k = k_lo; k < k_hi; ++k) {
      out.X(static_cast<Eigen::Index>(k - k_lo), static_cast<Eigen::Index>(c)) = spec[k];
    }
  }
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

double BandSpectra::energy() const {
  if (fft_length == 0) return 0.0;
  double e = 0.0;
  for (Eigen::Index k = 0; k < X.rows(); ++k) {
    // DC and the Nyquist bin appear once in the full spectrum.
    const std::size_t bin = first_bin + static_cast<std::size_t>(k);
    const double w = (bin == 0 || (fft_length % 2 == 0 && bin == fft_length / 2)) ? 1.0 : 2.0;
    e += w * X.row(k).squaredNorm();
  }
  return e / static_cast<double>(fft_length);
}

double signal_energy(const MultichannelIr& ir) {
  double e = 0.0;
  for (const auto& c : ir.channels) {
    for (double x : c) e += x * x;
  }
  return e;
}

MultichannelIr ir_from_half_spectrum(const Eigen::MatrixXcd& half, std::size_t n, double sample_rate) {
  if (static_cast<std::size_t>(half.rows()) != n / 2 + 1) throw DomainError("half spectrum must have N/2+1 rows");
  MultichannelIr ir;
  ir.sample_rate = sample_rate;
  ir.channels.assign(static_cast<std::size_t>(half.cols()), std::vector<double>(n));
  std::vector<std::complex<double>> spec(n / 2 + 1);
  std::vector<double> out(n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(spec.data()), out.data(),
                                FFTW_ESTIMATE);
  }
  for (Eigen::Index c = 0; c < half.cols(); ++c) {
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] = half(static_cast<Eigen::Index>(k), c);
    fftw_execute(plan);  // c2r overwrites its input; it is refilled per channel
    for (std::size_t i = 0; i < n; ++i) ir.channels[static_cast<std::size_t>(c)][i] = out[i] / static_cast<double>(n);
  }
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return ir;
}

MixedSpectra mix_by_ratio(const BandSpectra& beam, const BandSpectra& diffuse, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("energy ratio must be in [0, 1]");
  if (beam.X.rows() != diffuse.X.rows() || beam.X.cols() != diffuse.X.cols() ||
      beam.fft_length != diffuse.fft_length || beam.first_bin != diffuse.first_bin) {
    throw DomainError("beam and diffuse responses have incompatible spectra");
  }
  const double eb = beam.energy();
  const double ed = diffuse.energy();
  if ((eta > 0.0 && !(eb > 0.0)) || (eta < 1.0 && !(ed > 0.0))) {
    throw DomainError("cannot scale a silent band to a nonzero energy share");
  }
  MixedSpectra m;
  m.beam_gain = eta > 0.0 ? std::sqrt(eta / eb) : 0.0;
  m.diffuse_gain = eta < 1.0 ? std::sqrt((1.0 - eta) / ed) : 0.0;
  m.beam_energy = m.beam_gain * m.beam_gain * eb;
  m.diffuse_energy = m.diffuse_gain * m.diffuse_gain * ed;
  m.mixed = beam;
  m.mixed.X = m.beam_gain * beam.X + m.diffuse_gain * diffuse.X;
  return m;
}

CaseResult run_irmix(const MultichannelIr& beam, const MultichannelIr& diffuse, const ArraySpec& array,
                     const IrMixConfig& cfg) {
  check_channel_map(beam, array);
  check_channel_map(diffuse, array);
  if (beam.sample_rate != diffuse.sample_rate) throw DomainError("beam and diffuse sample rates differ");
  if (beam.length() != diffuse.length()) throw DomainError("beam and diffuse responses differ in length");
  const ArrayProcessor proc(array, cfg.medium, cfg.processor);
  CaseResult res;
  res.case_id = 0;
  res.name = "irmix";
  res.array = array.name;
  for (double nominal : cfg.bands) {
    const BandSpec band = octave_band(nominal);
    const BandSpectra sb = band_spectra(beam, band);
    const BandSpectra sd = band_spectra(diffuse, band);
    for (std::size_t e = 0; e < cfg.etas.size(); ++e) {
      const MixedSpectra m = mix_by_ratio(sb, sd, cfg.etas[e]);
      BandAccumulator acc(proc);
      for (Eigen::Index k = 0; k < m.mixed.X.rows(); ++k) {
        const PressureSnapshot snap{m.mixed.frequencies[static_cast<std::size_t>(k)], m.mixed.X.row(k).transpose()};
        acc.add(proc.analyze(snap));
      }
      PointResult r;
      r.band_hz = nominal;
      r.point = e;
      r.eta = cfg.etas[e];
      r.report = acc.report(nominal);
      res.points.push_back(std::move(r));
    }
  }
  summarize(res);
  return res;
}

}  // namespace tfdiff
