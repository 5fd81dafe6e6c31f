// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cell.hpp"
#include "resolvent.hpp"

namespace hom4 {

/// Writes values as little-endian float64, row-major.
void write_binary(const std::filesystem::path& path, std::span<const double> values);
std::vector<double> read_binary(const std::filesystem::path& path);

/// CellData document: {"version":1, "dim", "grid", "a_hat" (d^4 row-major),
/// "b" (d^5: b^{ijk}_{pq} at ((((i d + j) d + k) d + p) d + q)), "c" (d^6),
/// "lambda0", "solver_report", "fields"}. "fields" maps every periodic field
/// to its sidecar file and the layout of the indices.
nlohmann::json cell_to_json(const CellData& cell);
/// Writes cell.json plus one .bin sidecar per field into `dir`.
void write_cell(const CellData& cell, const std::filesystem::path& dir);

/// Manifest {eps, norms, solver iterations} plus sidecar arrays of every
/// field in the bundle.
nlohmann::json bundle_manifest(const ApproximantBundle& b, const BundleErrors& e);
void write_bundle(const ApproximantBundle& b, const BundleErrors& e, const std::filesystem::path& dir);

/// Numbers are printed with 17 significant digits in the C locale.
std::string format_double(double v);

}  // namespace hom4
