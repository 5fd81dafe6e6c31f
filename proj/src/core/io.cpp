// SPDX-License-Identifier: Apache-2.0
#include "io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace hom4 {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create directory " + dir.string() + ": " + ec.message());
}

json field_entry(const ScalarField& u, const fs::path& dir, const std::string& name) {
  write_binary(dir / (name + ".bin"), u.values());
  return {{"file", name + ".bin"}, {"points", u.grid().points}, {"dim", u.grid().dim}};
}

std::string idx_name(const char* stem, std::initializer_list<int> idx) {
  std::string s = stem;
  for (int i : idx) s += std::to_string(i);
  return s;
}

}  // namespace

void write_binary(const fs::path& path, std::span<const double> values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<unsigned char> buf(values.size() * 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(values[i]);
    for (int b = 0; b < 8; ++b) buf[i * 8 + b] = static_cast<unsigned char>(bits >> (8 * b));
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::vector<double> read_binary(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() % 8 != 0) throw Error(ErrorCode::Io, path.string() + " is not a float64 array");
  std::vector<double> v(buf.size() / 8);
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(buf[i * 8 + b]) << (8 * b);
    v[i] = std::bit_cast<double>(bits);
  }
  return v;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << v;
  return os.str();
}

json cell_to_json(const CellData& cell) {
  const int d = cell.dim();
  json j;
  j["version"] = 1;
  j["dim"] = d;
  j["grid"] = cell.grid.points;
  j["a_hat"] = cell.a_hat.components();
  std::vector<double> b;
  for (int i = 0; i < d; ++i)
    for (int jj = 0; jj < d; ++jj)
      for (int k = 0; k < d; ++k)
        for (int p = 0; p < d; ++p)
          for (int q = 0; q < d; ++q) b.push_back(cell.b_of(i, jj, k)(p, q));
  j["b"] = b;
  j["c"] = cell.c;
  j["lambda0"] = lambda0_diagnostic(cell);
  j["a_hat_asymmetry"] = cell.a_hat_asymmetry;
  json rep = json::array();
  for (const auto& s : cell.solver_report)
    rep.push_back({{"problem", s.problem}, {"iterations", s.iterations}, {"residual", s.residual}});
  j["solver_report"] = rep;
  return j;
}

void write_cell(const CellData& cell, const fs::path& dir) {
  ensure_dir(dir);
  const int d = cell.dim();
  json j = cell_to_json(cell);
  json fields;
  fields["layout"] =
      "row-major little-endian float64 on the cell grid; indices are 0-based; N2ij for i<=j, N3ijk for i<=j, "
      "g2ij_pq and g3ijk_pq for p<=q, G2ij_st_km and G3ijk_st_km for s<=t and k<=m";
  json n2, n3, g2, g3, G2, G3;
  for (int i = 0; i < d; ++i)
    for (int jj = i; jj < d; ++jj) {
      n2[idx_name("N", {i, jj})] = field_entry(cell.n2(i, jj), dir, idx_name("N", {i, jj}));
      const int r = pair_index(d, i, jj);
      for (int p = 0; p < d; ++p)
        for (int q = p; q < d; ++q) {
          const std::string gn = idx_name("g", {i, jj}) + "_" + idx_name("", {p, q});
          g2[gn] = field_entry(cell.g2[r].entry(p, q), dir, gn);
        }
      for (int st = 0; st < pair_count(d); ++st)
        for (int km = 0; km < pair_count(d); ++km) {
          auto [s, t] = pair_of(d, st);
          auto [k, m] = pair_of(d, km);
          const std::string gn =
              idx_name("G", {i, jj}) + "_" + idx_name("", {s, t}) + "_" + idx_name("", {k, m});
          G2[gn] = field_entry(cell.G2[r][st].pair(km), dir, gn);
        }
      for (int k = 0; k < d; ++k) {
        const int t3 = cell.triple_index(i, jj, k);
        n3[idx_name("N", {i, jj, k})] = field_entry(cell.N3[t3], dir, idx_name("N", {i, jj, k}));
        for (int p = 0; p < d; ++p)
          for (int q = p; q < d; ++q) {
            const std::string gn = idx_name("g", {i, jj, k}) + "_" + idx_name("", {p, q});
            g3[gn] = field_entry(cell.g3[t3].entry(p, q), dir, gn);
          }
        for (int st = 0; st < pair_count(d); ++st)
          for (int km = 0; km < pair_count(d); ++km) {
            auto [s, t] = pair_of(d, st);
            auto [kk, m] = pair_of(d, km);
            const std::string gn =
                idx_name("G", {i, jj, k}) + "_" + idx_name("", {s, t}) + "_" + idx_name("", {kk, m});
            G3[gn] = field_entry(cell.G3[t3][st].pair(km), dir, gn);
          }
      }
    }
  fields["N2"] = n2;
  fields["N3"] = n3;
  fields["g2"] = g2;
  fields["g3"] = g3;
  fields["G2"] = G2;
  fields["G3"] = G3;
  j["fields"] = fields;
  std::ofstream out(dir / "cell.json");
  if (!out) throw Error(ErrorCode::Io, "cannot write cell.json");
  out << j.dump(2) << "\n";
}

json bundle_manifest(const ApproximantBundle& b, const BundleErrors& e) {
  json j;
  j["version"] = 1;
  j["eps"] = b.eps;
  j["torus_points"] = b.f.grid().points;
  j["dim"] = b.f.grid().dim;
  j["norms"] = {{"f_L2", e.norm_f},
                {"err_u_hat_L2", e.err_u_hat_L2},
                {"err_u_tilde_H2", e.err_u_tilde_H2},
                {"err_w_L2", e.err_w_L2},
                {"err_w_printed_L2", e.err_w_printed_L2},
                {"residual_Hminus2", e.residual_Hminus2},
                {"u_eps_H2", sobolev_norm(b.u_eps, Space::H2)},
                {"u_hat_eps_H4", sobolev_norm(b.u_hat_eps, Space::H4)}};
  j["solver"] = {{"iterations", b.oracle.iterations}, {"residual", b.oracle.residual}};
  return j;
}

void write_bundle(const ApproximantBundle& b, const BundleErrors& e, const fs::path& dir) {
  ensure_dir(dir);
  json j = bundle_manifest(b, e);
  json fields;
  auto put = [&](const char* name, const ScalarField& u) {
    if (!u.empty()) fields[name] = field_entry(u, dir, name);
  };
  put("f", b.f);
  put("u_eps", b.u_eps);
  put("u_hat", b.u_hat);
  put("u_hat_eps", b.u_hat_eps);
  put("u_tilde", b.u_tilde);
  put("w", b.w);
  put("residual", b.residual);
  j["fields"] = fields;
  std::ofstream out(dir / "manifest.json");
  if (!out) throw Error(ErrorCode::Io, "cannot write manifest.json");
  out << j.dump(2) << "\n";
}

}  // namespace hom4
