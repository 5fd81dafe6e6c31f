// SPDX-License-Identifier: Apache-2.0
#include "hom4/hom4.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "errors.hpp"
#include "harness.hpp"
#include "io.hpp"
#include "parallel.hpp"

struct hom4_config {
  hom4::ExperimentConfig cfg;
};
struct hom4_cell {
  hom4::Tensor4Field a;
  hom4::CellData data;
};
struct hom4_report {
  hom4::ConvergenceReport report;
};

namespace {

thread_local std::string t_last_error;

hom4_status fail(hom4_status s, const std::string& msg) {
  t_last_error = msg;
  return s;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
hom4_status guarded(F&& body) {
  try {
    t_last_error.clear();
    body();
    return HOM4_OK;
  } catch (const hom4::Error& e) {
    return fail(static_cast<hom4_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(HOM4_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HOM4_INTERNAL, e.what());
  } catch (...) {
    return fail(HOM4_INTERNAL, "unknown failure");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool cond, const char* what) {
  if (!cond) throw hom4::Error(hom4::ErrorCode::BadArgument, what);
}

}  // namespace

extern "C" {

const char* hom4_version(void) { return "1.0.0"; }

const char* hom4_last_error(void) { return t_last_error.c_str(); }

const char* hom4_status_name(hom4_status s) {
  if (s == HOM4_OK) return "Ok";
  if (s == HOM4_INTERNAL) return "Internal";
  if (s >= HOM4_BAD_ARGUMENT && s <= HOM4_IO) return hom4::error_code_name(static_cast<hom4::ErrorCode>(s));
  return "Unknown";
}

hom4_status hom4_set_threads(int threads) {
  return guarded([&] {
    require(threads >= 0, "threads must be >= 0");
    hom4::set_thread_count(threads);
  });
}

void hom4_string_free(char* s) { std::free(s); }

hom4_status hom4_config_default(hom4_config** out) {
  return guarded([&] {
    require(out, "null output");
    *out = new hom4_config{};
  });
}

hom4_status hom4_config_load(const char* path, hom4_config** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new hom4_config{hom4::load_config(path)};
  });
}

hom4_status hom4_config_parse(const char* json_text, hom4_config** out) {
  return guarded([&] {
    require(json_text && out, "null argument");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
      throw hom4::Error(hom4::ErrorCode::BadArgument, std::string("config is not valid JSON: ") + e.what());
    }
    *out = new hom4_config{hom4::config_from_json(j)};
  });
}

void hom4_config_free(hom4_config* cfg) { delete cfg; }

hom4_status hom4_config_set_seed(hom4_config* cfg, uint64_t seed) {
  return guarded([&] {
    require(cfg, "null config");
    cfg->cfg.seed = seed;
  });
}

hom4_status hom4_config_set_dealias(hom4_config* cfg, int dealias) {
  return guarded([&] {
    require(cfg, "null config");
    cfg->cfg.dealias = dealias != 0;
  });
}

hom4_status hom4_config_set_output_dir(hom4_config* cfg, const char* dir) {
  return guarded([&] {
    require(cfg && dir, "null argument");
    cfg->cfg.output.dir = dir;
  });
}

hom4_status hom4_config_get_output_dir(const hom4_config* cfg, char** out) {
  return guarded([&] {
    require(cfg && out, "null argument");
    *out = dup_string(cfg->cfg.output.dir);
  });
}

hom4_status hom4_config_get_threads(const hom4_config* cfg, int* out) {
  return guarded([&] {
    require(cfg && out, "null argument");
    *out = cfg->cfg.threads;
  });
}

hom4_status hom4_config_eps_count(const hom4_config* cfg, int* out) {
  return guarded([&] {
    require(cfg && out, "null argument");
    *out = static_cast<int>(cfg->cfg.eps.size());
  });
}

hom4_status hom4_config_eps_inverse(const hom4_config* cfg, int index, int* out) {
  return guarded([&] {
    require(cfg && out, "null argument");
    const auto inv = cfg->cfg.eps_inverse();
    require(index >= 0 && index < static_cast<int>(inv.size()), "eps index out of range");
    *out = inv[index];
  });
}

hom4_status hom4_config_to_json(const hom4_config* cfg, char** out) {
  return guarded([&] {
    require(cfg && out, "null argument");
    *out = dup_string(hom4::config_to_json(cfg->cfg).dump(2));
  });
}

hom4_status hom4_cell_solve(const hom4_config* cfg, hom4_cell** out) {
  return guarded([&] {
    require(cfg && out, "null argument");
    hom4::Tensor4Field a = hom4::config_coefficients(cfg->cfg);
    hom4::CellOptions opt;
    opt.tol = cfg->cfg.tolerances.cell;
    opt.max_iter = cfg->cfg.tolerances.max_iter;
    opt.dealias = cfg->cfg.dealias;
    hom4::CellData data = hom4::cell_pipeline(a, opt);
    *out = new hom4_cell{std::move(a), std::move(data)};
  });
}

void hom4_cell_free(hom4_cell* cell) { delete cell; }

hom4_status hom4_cell_dim(const hom4_cell* cell, int* out) {
  return guarded([&] {
    require(cell && out, "null argument");
    *out = cell->data.dim();
  });
}

hom4_status hom4_cell_a_hat(const hom4_cell* cell, double* out, size_t len) {
  return guarded([&] {
    require(cell && out, "null argument");
    const auto comp = cell->data.a_hat.components();
    require(len >= comp.size(), "output buffer shorter than d^4");
    std::copy(comp.begin(), comp.end(), out);
  });
}

hom4_status hom4_cell_lambda0(const hom4_cell* cell, double* out) {
  return guarded([&] {
    require(cell && out, "null argument");
    *out = hom4::lambda0_diagnostic(cell->data);
  });
}

hom4_status hom4_cell_to_json(const hom4_cell* cell, char** out) {
  return guarded([&] {
    require(cell && out, "null argument");
    *out = dup_string(hom4::cell_to_json(cell->data).dump(2));
  });
}

hom4_status hom4_cell_write(const hom4_cell* cell, const char* dir) {
  return guarded([&] {
    require(cell && dir, "null argument");
    hom4::write_cell(cell->data, dir);
  });
}

hom4_status hom4_solve(const hom4_config* cfg, const hom4_cell* cell, int n, const char* dir, double errors[5]) {
  return guarded([&] {
    require(cfg && cell, "null argument");
    require(n >= 2, "n = 1/eps must be >= 2");
    const hom4::ApproximantBundle b = hom4::config_bundle(cfg->cfg, cell->a, cell->data, n);
    const hom4::BundleErrors e = hom4::bundle_errors(b);
    if (dir) hom4::write_bundle(b, e, dir);
    if (errors) {
      errors[0] = e.err_u_hat_L2;
      errors[1] = e.err_u_tilde_H2;
      errors[2] = e.err_w_L2;
      errors[3] = e.err_w_printed_L2;
      errors[4] = e.residual_Hminus2;
    }
  });
}

hom4_status hom4_converge(const hom4_config* cfg, hom4_report** out) {
  return guarded([&] {
    require(cfg && out, "null argument");
    *out = new hom4_report{hom4::run_converge(cfg->cfg)};
  });
}

void hom4_report_free(hom4_report* r) { delete r; }

hom4_status hom4_report_rows(const hom4_report* r, int* out) {
  return guarded([&] {
    require(r && out, "null argument");
    *out = static_cast<int>(r->report.rows.size());
  });
}

hom4_status hom4_report_slope(const hom4_report* r, const char* column, double* out) {
  return guarded([&] {
    require(r && column && out, "null argument");
    auto it = r->report.slopes.find(column);
    require(it != r->report.slopes.end() && it->second.valid, "no fitted slope for this column");
    *out = it->second.slope;
  });
}

hom4_status hom4_report_value(const hom4_report* r, int row, const char* column, double* out) {
  return guarded([&] {
    require(r && column && out, "null argument");
    require(row >= 0 && row < static_cast<int>(r->report.rows.size()), "row out of range");
    *out = hom4::column_value(r->report.rows[row], column);
  });
}

hom4_status hom4_report_to_json(const hom4_report* r, char** out) {
  return guarded([&] {
    require(r && out, "null argument");
    *out = dup_string(hom4::report_to_json(r->report).dump(2));
  });
}

hom4_status hom4_report_to_csv(const hom4_report* r, char** out) {
  return guarded([&] {
    require(r && out, "null argument");
    *out = dup_string(hom4::report_to_csv(r->report));
  });
}

hom4_status hom4_report_write(const hom4_report* r, const char* dir) {
  return guarded([&] {
    require(r && dir, "null argument");
    hom4::write_report(r->report, dir);
  });
}

hom4_status hom4_check(uint64_t seed, int trials, const char* fault, int* passed, char** table) {
  return guarded([&] {
    require(passed, "null argument");
    const hom4::CheckReport rep = hom4::run_check(seed, trials, hom4::fault_from_string(fault ? fault : ""));
    *passed = rep.passed() ? 1 : 0;
    if (table) *table = dup_string(rep.table());
  });
}

hom4_status hom4_kernel_chi(int k, double s, double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = hom4::kernel_chi(k, s);
  });
}

hom4_status hom4_gamma(int k, double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = hom4::gamma_coefficient(k);
  });
}

hom4_status hom4_kernels_table(int samples, char** out) {
  return guarded([&] {
    require(out, "null argument");
    require(samples >= 2, "samples must be >= 2");
    *out = dup_string(hom4::kernels_table(samples));
  });
}

}  // extern "C"
