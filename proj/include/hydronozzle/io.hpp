#pragma once

// CSV and JSON artifacts. Numbers in CSV use 17 significant digits; JSON uses
// the shortest round-trip representation.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hydronozzle/field.hpp"
#include "hydronozzle/kinematics.hpp"
#include "hydronozzle/slice_solver.hpp"

namespace hydronozzle::io {

std::string format_number(double x);

/// Two numeric columns; non-numeric leading lines (headers) are skipped.
std::pair<std::vector<double>, std::vector<double>> read_two_columns(const std::filesystem::path& path);

/// Columns x1,x2,y2,phi,v1,v2,p,omega, column-major in x1.
void write_field_csv(const std::filesystem::path& path, const FlowField& flow);
/// Inverse of write_field_csv; c, gamma_bar and flux are recomputed or left for the caller.
FlowField read_field_csv(const std::filesystem::path& path);

void write_slice_csv(const std::filesystem::path& path, const SliceSolution& slice);
void write_trace_csv(const std::filesystem::path& path, const PathTrace& trace);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace hydronozzle::io
