// SPDX-License-Identifier: Apache-2.0
//
// Multichannel impulse responses: WAV input/output, octave-band spectra and
// energy-ratio mixing of an anechoic ("beam") and a reverberant response.
#pragma once

#include "tfdiff/arrays.hpp"
#include "tfdiff/benchmarks.hpp"
#include "tfdiff/wavefield.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <vector>

namespace tfdiff {

enum class WavEncoding { Pcm16, Pcm24, Pcm32, Float32 };

struct MultichannelIr {
  double sample_rate = 48000.0;
  std::vector<std::vector<double>> channels;  // equal lengths, full scale = 1

  std::size_t channel_count() const { return channels.size(); }
  std::size_t length() const { return channels.empty() ? 0 : channels.front().size(); }
  void validate() const;  // throws DomainError
};

// PCM 16/24/32-bit and IEEE float32, plain or WAVE_FORMAT_EXTENSIBLE.
// Unsupported encodings throw FormatError; short reads throw IoError.
MultichannelIr read_wav(std::istream& is);
MultichannelIr load_wav(const std::string& path);
void write_wav(std::ostream& os, const MultichannelIr& ir, WavEncoding enc = WavEncoding::Float32);
void save_wav(const std::string& path, const MultichannelIr& ir, WavEncoding enc = WavEncoding::Float32);

// Channel c feeds sensor c; a count mismatch throws DomainError.
void check_channel_map(const MultichannelIr& ir, const ArraySpec& array);

struct BandSpectra {
  double band_hz = 0.0;
  std::size_t fft_length = 0;
  std::size_t first_bin = 0;
  std::vector<double> frequencies;  // one per bin in the band
  Eigen::MatrixXcd X;               // bins x channels, unnormalized DFT

  // (2/N) sum |X|^2 over bins and channels: the band's share of sum x^2.
  double energy() const;
};

// Full-length real DFT without windowing, restricted to the band edges
// (clipped at Nyquist). Throws DomainError when the band starts at or above
// Nyquist or the response is shorter than one period of the lower edge.
BandSpectra band_spectra(const MultichannelIr& ir, const BandSpec& band);

double signal_energy(const MultichannelIr& ir);

// Inverse of band_spectra for a full half-spectrum: bins 0..N/2 x channels.
MultichannelIr ir_from_half_spectrum(const Eigen::MatrixXcd& half, std::size_t n, double sample_rate);

struct MixedSpectra {
  BandSpectra mixed;
  double beam_gain = 0.0;
  double diffuse_gain = 0.0;
  double beam_energy = 0.0;     // after scaling: eta
  double diffuse_energy = 0.0;  // after scaling: 1 - eta
};

// Scales each input so its band energy becomes eta and 1 - eta, then sums.
MixedSpectra mix_by_ratio(const BandSpectra& beam, const BandSpectra& diffuse, double eta);

struct IrMixConfig {
  std::vector<double> bands;
  std::vector<double> etas;
  Medium medium;
  ProcessorOptions processor;
};

// Every band bin is one snapshot through the array's estimator chain.
CaseResult run_irmix(const MultichannelIr& beam, const MultichannelIr& diffuse, const ArraySpec& array,
                     const IrMixConfig& cfg);

}  // namespace tfdiff
