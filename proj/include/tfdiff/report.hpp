// SPDX-License-Identifier: Apache-2.0
//
// CSV/JSON writers. Columns are fixed; numbers use 9 significant digits and
// lines end in LF, so identical results give byte-identical files.
//
// results.csv (long format, one row per point and index):
//   case,array,band_hz,point,az_deg,zen_deg,eta,index_name,value,
//   lambda1,lambda2,lambda3,ix,iy,iz,doa_az,doa_zen,doa_err_deg,clamp_count
// summary.csv (one row per band and index):
//   case,array,band_hz,index_name,mean,max,max_abs_err,pearson_r,count
// Fields that do not apply to a case are left empty.
#pragma once

#include "tfdiff/benchmarks.hpp"
#include "tfdiff/processor.hpp"

#include <string>

namespace tfdiff {

std::string results_csv(const CaseResult& result);
std::string summary_csv(const CaseResult& result);
std::string report_to_json(const DiffusenessReport& report);

// Writes results.csv, summary.csv and config.echo.json into `dir`, creating
// it if needed. Failures throw IoError.
void write_reports(const CaseResult& result, const std::string& dir, const std::string& config_echo_json);

// Writes `text` to `path` verbatim (binary mode). Throws IoError.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace tfdiff
