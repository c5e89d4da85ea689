// SPDX-License-Identifier: Apache-2.0
#include "tfdiff/tfdiff.h"

#include "tfdiff/arrays.hpp"
#include "tfdiff/benchmarks.hpp"
#include "tfdiff/config.hpp"
#include "tfdiff/error.hpp"
#include "tfdiff/processor.hpp"
#include "tfdiff/report.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <sstream>
#include <string>

struct tfd_config {
  tfdiff::RunConfig cfg;
  std::string echo;
};

struct tfd_result {
  tfdiff::CaseResult result;
};

struct tfd_array {
  tfdiff::ArraySpec spec;
  std::unique_ptr<tfdiff::ArrayProcessor> proc;
};

namespace {

thread_local std::string g_last_error;

tfd_status status_of(tfdiff::ErrorClass cls) {
  using tfdiff::ErrorClass;
  switch (cls) {
    case ErrorClass::Usage: return TFD_ERR_USAGE;
    case ErrorClass::Domain: return TFD_ERR_DOMAIN;
    case ErrorClass::Io: return TFD_ERR_IO;
    case ErrorClass::Format: return TFD_ERR_FORMAT;
    case ErrorClass::Config: return TFD_ERR_CONFIG;
    case ErrorClass::UndefinedField: return TFD_ERR_UNDEFINED;
    case ErrorClass::Fit: return TFD_ERR_FIT;
    case ErrorClass::WrongModel: return TFD_ERR_WRONG_MODEL;
    case ErrorClass::MissingOrder: return TFD_ERR_MISSING_ORDER;
  }
  return TFD_ERR_INTERNAL;
}

template <typename F>
tfd_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const tfdiff::Error& e) {
    g_last_error = e.what();
    return status_of(e.error_class());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return TFD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TFD_ERR_INTERNAL;
  }
}

tfd_status null_arg(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return TFD_ERR_USAGE;
}

}  // namespace

extern "C" {

const char* tfd_version(void) { return "1.0.0"; }

const char* tfd_status_name(tfd_status status) {
  switch (status) {
    case TFD_OK: return "ok";
    case TFD_ERR_USAGE: return "usage";
    case TFD_ERR_DOMAIN: return "domain";
    case TFD_ERR_IO: return "io";
    case TFD_ERR_FORMAT: return "format";
    case TFD_ERR_CONFIG: return "config";
    case TFD_ERR_UNDEFINED: return "undefined";
    case TFD_ERR_FIT: return "fit";
    case TFD_ERR_WRONG_MODEL: return "wrong-model";
    case TFD_ERR_MISSING_ORDER: return "missing-order";
    case TFD_HELP: return "help";
    case TFD_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* tfd_last_error(void) { return g_last_error.c_str(); }

tfd_status tfd_config_parse(int argc, const char* const* argv, tfd_config** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  if (argc > 0 && !argv) return null_arg("argv");
  return guarded([&] {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i] ? argv[i] : "");
    auto h = std::make_unique<tfd_config>();
    h->cfg = tfdiff::parse_config(args);
    h->echo = h->cfg.command == "help" ? std::string("{}") : h->cfg.echo_json();
    const bool help = h->cfg.command == "help";
    *out = h.release();
    return help ? TFD_HELP : TFD_OK;
  });
}

const char* tfd_config_command(const tfd_config* cfg) { return cfg ? cfg->cfg.command.c_str() : ""; }
const char* tfd_config_help(const tfd_config* cfg) { return cfg ? cfg->cfg.help_text.c_str() : ""; }
const char* tfd_config_echo_json(const tfd_config* cfg) { return cfg ? cfg->echo.c_str() : ""; }
void tfd_config_free(tfd_config* cfg) { delete cfg; }

tfd_status tfd_execute(const tfd_config* cfg, FILE* log) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] {
    std::ostringstream os;
    tfdiff::execute(cfg->cfg, os);
    if (log) std::fputs(os.str().c_str(), log);
    return TFD_OK;
  });
}

tfd_status tfd_run(const tfd_config* cfg, tfd_result** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    if (cfg->cfg.case_cfg.case_id == 0) throw tfdiff::UsageError("tfd_run needs a case1/case2/case3 config");
    auto h = std::make_unique<tfd_result>();
    h->result = tfdiff::run_case(cfg->cfg.case_cfg);
    *out = h.release();
    return TFD_OK;
  });
}

tfd_status tfd_result_write(const tfd_result* res, const tfd_config* cfg, const char* dir) {
  if (!res) return null_arg("res");
  if (!cfg) return null_arg("cfg");
  if (!dir) return null_arg("dir");
  return guarded([&] {
    tfdiff::write_reports(res->result, dir, cfg->echo);
    return TFD_OK;
  });
}

size_t tfd_result_point_count(const tfd_result* res) { return res ? res->result.points.size() : 0; }

tfd_status tfd_result_summary_value(const tfd_result* res, double band_hz, const char* index, const char* field,
                                    double* value) {
  if (!res) return null_arg("res");
  if (!index || !field || !value) return null_arg("index/field/value");
  return guarded([&] {
    const tfdiff::SummaryRow* row = res->result.find(band_hz, index);
    if (!row) throw tfdiff::DomainError(std::string("no summary row for index '") + index + "' in that band");
    const std::string f(field);
    std::optional<double> v;
    if (f == "mean") v = row->mean;
    else if (f == "max") v = row->max;
    else if (f == "max_abs_err") v = row->max_abs_err;
    else if (f == "pearson_r") v = row->pearson_r;
    else throw tfdiff::UsageError("unknown summary field '" + f + "'");
    if (!v) throw tfdiff::UndefinedFieldError("summary field '" + f + "' does not apply to this case");
    *value = *v;
    return TFD_OK;
  });
}

void tfd_result_free(tfd_result* res) { delete res; }

namespace {

tfd_status make_array_handle(tfdiff::ArraySpec spec, tfd_array** out) {
  auto h = std::make_unique<tfd_array>();
  h->proc = std::make_unique<tfdiff::ArrayProcessor>(spec, tfdiff::Medium{});
  h->spec = std::move(spec);
  *out = h.release();
  return TFD_OK;
}

}  // namespace

tfd_status tfd_array_create(const char* name, tfd_array** out) {
  if (!name) return null_arg("name");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { return make_array_handle(tfdiff::make_array(tfdiff::parse_array_kind(name)), out); });
}

tfd_status tfd_array_load(const char* path, tfd_array** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { return make_array_handle(tfdiff::load_array_file(path), out); });
}

tfd_status tfd_array_save(const tfd_array* array, const char* path) {
  if (!array) return null_arg("array");
  if (!path) return null_arg("path");
  return guarded([&] {
    tfdiff::write_text_file(path, tfdiff::array_to_json(array->spec) + "\n");
    return TFD_OK;
  });
}

size_t tfd_array_sensor_count(const tfd_array* array) { return array ? array->spec.size() : 0; }

tfd_status tfd_array_sensor_position(const tfd_array* array, size_t index, double xyz[3]) {
  if (!array) return null_arg("array");
  if (!xyz) return null_arg("xyz");
  if (index >= array->spec.size()) {
    g_last_error = "sensor index out of range";
    return TFD_ERR_DOMAIN;
  }
  const auto& p = array->spec.sensors[index].position;
  xyz[0] = p.x();
  xyz[1] = p.y();
  xyz[2] = p.z();
  return TFD_OK;
}

void tfd_array_free(tfd_array* array) { delete array; }

tfd_status tfd_simulate_plane_wave(const tfd_array* array, double azimuth_deg, double zenith_deg,
                                   double frequency_hz, double* re, double* im, size_t n) {
  if (!array) return null_arg("array");
  if (!re || !im) return null_arg("re/im");
  return guarded([&] {
    if (n != array->spec.size()) throw tfdiff::DomainError("output length does not match the sensor count");
    const tfdiff::Scene scene{{tfdiff::wave_from_incidence(tfdiff::Direction::from_angles(azimuth_deg, zenith_deg))},
                              frequency_hz};
    const auto snap = tfdiff::synthesize(array->spec, scene, array->proc->medium());
    for (size_t i = 0; i < n; ++i) {
      re[i] = snap.p(static_cast<Eigen::Index>(i)).real();
      im[i] = snap.p(static_cast<Eigen::Index>(i)).imag();
    }
    return TFD_OK;
  });
}

tfd_status tfd_analyze_snapshot(const tfd_array* array, double frequency_hz, const double* re, const double* im,
                                size_t n, tfd_indices* out) {
  if (!array) return null_arg("array");
  if (!re || !im || !out) return null_arg("re/im/out");
  return guarded([&] {
    if (!(frequency_hz > 0.0)) throw tfdiff::DomainError("frequency must be positive");
    tfdiff::PressureSnapshot snap{frequency_hz, Eigen::VectorXcd(static_cast<Eigen::Index>(n))};
    for (size_t i = 0; i < n; ++i) snap.p(static_cast<Eigen::Index>(i)) = {re[i], im[i]};
    tfdiff::BandAccumulator acc(*array->proc);
    acc.add(array->proc->analyze(snap));
    const auto r = acc.report(frequency_hz);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out->psi_ie = r.psi_ie;
    out->psi_ave = r.psi_ave.value_or(nan);
    out->psi_pr = r.psi_pr.normalized;
    out->psi_pr_raw = r.psi_pr.raw;
    out->psi_com = r.psi_com;
    for (int i = 0; i < 3; ++i) {
      out->lambda[i] = r.eigenvalues(i);
      out->intensity[i] = r.intensity(i);
    }
    out->doa_az = r.doa ? r.doa->angles().azimuth_deg : nan;
    out->doa_zen = r.doa ? r.doa->angles().zenith_deg : nan;
    out->clamp_count = r.clamp_count;
    return TFD_OK;
  });
}

tfd_status tfd_psi_from_eigenvalues(const double* lambda, size_t k, double* psi_pr, double* psi_pr_raw,
                                    double* psi_com) {
  if (!lambda) return null_arg("lambda");
  return guarded([&] {
    const std::span<const double> l(lambda, k);
    const auto pr = tfdiff::psi_pr(l);
    if (psi_pr) *psi_pr = pr.normalized;
    if (psi_pr_raw) *psi_pr_raw = pr.raw;
    if (psi_com) *psi_com = tfdiff::psi_com(l);
    return TFD_OK;
  });
}

tfd_status tfd_frame_constant(const double* rows_xyz, size_t n, double* a, double* max_offdiag, int* is_tight) {
  if (!rows_xyz) return null_arg("rows_xyz");
  return guarded([&] {
    tfdiff::DirectionMatrix R(static_cast<Eigen::Index>(n), 3);
    for (size_t i = 0; i < n; ++i) {
      for (int j = 0; j < 3; ++j) R(static_cast<Eigen::Index>(i), j) = rows_xyz[3 * i + static_cast<size_t>(j)];
    }
    const auto fc = tfdiff::frame_constant(R);
    if (a) *a = fc.A;
    if (max_offdiag) *max_offdiag = fc.max_offdiag;
    if (is_tight) *is_tight = fc.is_tight ? 1 : 0;
    return TFD_OK;
  });
}

}  // extern "C"
