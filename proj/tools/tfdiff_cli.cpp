// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Everything goes through the C interface so the
// binary exercises exactly what external callers see.
#include "tfdiff/tfdiff.h"

#include <cstdio>

int main(int argc, char** argv) {
  tfd_config* cfg = nullptr;
  tfd_status st = tfd_config_parse(argc, argv, &cfg);
  if (st == TFD_HELP) {
    std::fputs(tfd_config_help(cfg), stdout);
    tfd_config_free(cfg);
    return 0;
  }
  if (st == TFD_OK) st = tfd_execute(cfg, stdout);
  tfd_config_free(cfg);
  if (st != TFD_OK) {
    std::fprintf(stderr, "error[%s]: %s\n", tfd_status_name(st), tfd_last_error());
    return st == TFD_ERR_USAGE ? 2 : 1;
  }
  return 0;
}
