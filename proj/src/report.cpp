// SPDX-License-Identifier: Apache-2.0
#include "tfdiff/report.hpp"

#include "tfdiff/error.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

namespace tfdiff {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

}  // namespace

std::string results_csv(const CaseResult& result) {
  std::string out =
      "case,array,band_hz,point,az_deg,zen_deg,eta,index_name,value,lambda1,lambda2,lambda3,"
      "ix,iy,iz,doa_az,doa_zen,doa_err_deg,clamp_count\n";
  for (const auto& p : result.points) {
    const auto& r = p.report;
    std::string tail;
    for (int i = 0; i < 3; ++i) tail += "," + num(r.eigenvalues(i));
    for (int i = 0; i < 3; ++i) tail += "," + num(r.intensity(i));
    if (r.doa) {
      const Angles a = r.doa->angles();
      tail += "," + num(a.azimuth_deg) + "," + num(a.zenith_deg);
    } else {
      tail += ",,";
    }
    tail += "," + opt(p.doa_error_deg) + "," + std::to_string(r.clamp_count) + "\n";
    const std::string head = result.name + "," + result.array + "," + num(p.band_hz) + "," +
                             std::to_string(p.point) + "," + opt(p.azimuth) + "," + opt(p.zenith) + "," +
                             opt(p.eta) + ",";
    for (const auto& [name, value] : index_values(result.case_id, p)) {
      out += head + name + "," + num(value) + tail;
    }
  }
  return out;
}

std::string summary_csv(const CaseResult& result) {
  std::string out = "case,array,band_hz,index_name,mean,max,max_abs_err,pearson_r,count\n";
  for (const auto& s : result.summary) {
    out += result.name + "," + s.array + "," + num(s.band_hz) + "," + s.index + "," + num(s.mean) + "," +
           num(s.max) + "," + opt(s.max_abs_err) + "," + opt(s.pearson_r) + "," + std::to_string(s.count) + "\n";
  }
  return out;
}

std::string report_to_json(const DiffusenessReport& r) {
  nlohmann::ordered_json j;
  j["band_hz"] = r.band_hz;
  j["psi_ie"] = r.psi_ie;
  if (r.psi_ave) j["psi_ave"] = *r.psi_ave;
  j["psi_pr"] = r.psi_pr.normalized;
  j["psi_pr_raw"] = r.psi_pr.raw;
  j["psi_com"] = r.psi_com;
  if (r.psi_pr_pu) j["psi_pr_pu"] = r.psi_pr_pu->normalized;
  if (r.psi_com_pu) j["psi_com_pu"] = *r.psi_com_pu;
  if (r.psi_com_hoa) j["psi_com_hoa"] = *r.psi_com_hoa;
  j["eigenvalues"] = {r.eigenvalues(0), r.eigenvalues(1), r.eigenvalues(2)};
  j["intensity"] = {r.intensity(0), r.intensity(1), r.intensity(2)};
  j["energy"] = r.energy;
  if (r.doa) {
    const Angles a = r.doa->angles();
    j["doa_az"] = a.azimuth_deg;
    j["doa_zen"] = a.zenith_deg;
  }
  j["clamp_count"] = r.clamp_count;
  return j.dump(2);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path);
  f << text;
  f.close();
  if (!f) throw IoError("failed writing " + path);
}

void write_reports(const CaseResult& result, const std::string& dir, const std::string& config_echo_json) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory " + dir);
  const std::filesystem::path base(dir);
  write_text_file((base / "results.csv").string(), results_csv(result));
  write_text_file((base / "summary.csv").string(), summary_csv(result));
  write_text_file((base / "config.echo.json").string(), config_echo_json + "\n");
}

}  // namespace tfdiff
