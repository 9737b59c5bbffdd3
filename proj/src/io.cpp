#include "hydronozzle/io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "hydronozzle/errors.hpp"

namespace hydronozzle::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, fmt::format("cannot write '{}'", path.string()));
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, fmt::format("cannot read '{}'", path.string()));
  return in;
}

std::vector<double> split_numbers(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(cell, &used));
  }
  return out;
}

}  // namespace

std::string format_number(double x) { return fmt::format("{:.17g}", x); }

std::pair<std::vector<double>, std::vector<double>> read_two_columns(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<double> a, b;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    try {
      row = split_numbers(line);
    } catch (const std::exception&) {
      if (a.empty()) continue;
      throw Error(ErrorCode::IoError, fmt::format("{}:{}: not numeric", path.string(), lineno));
    }
    if (row.size() < 2) throw Error(ErrorCode::IoError, fmt::format("{}:{}: need two columns", path.string(), lineno));
    a.push_back(row[0]);
    b.push_back(row[1]);
  }
  return {std::move(a), std::move(b)};
}

void write_field_csv(const std::filesystem::path& path, const FlowField& flow) {
  auto out = open_out(path);
  out << "x1,x2,y2,phi,v1,v2,p,omega\n";
  for (std::size_t i = 0; i < flow.columns(); ++i) {
    for (std::size_t j = 0; j < flow.rows(); ++j) {
      const std::size_t k = flow.index(i, j);
      out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", flow.x1[k], flow.x2[k],
                         flow.y2[j], flow.phi[k], flow.v1[k], flow.v2[k], flow.p[k], flow.omega[k]);
    }
  }
}

FlowField read_field_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != "x1,x2,y2,phi,v1,v2,p,omega") {
    throw Error(ErrorCode::IoError, fmt::format("'{}' is not a field CSV", path.string()));
  }
  FlowField f;
  std::vector<double> y2_all;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    try {
      row = split_numbers(line);
    } catch (const std::exception&) {
      row.clear();
    }
    if (row.size() != 8) throw Error(ErrorCode::IoError, fmt::format("{}:{}: malformed row", path.string(), lineno));
    if (f.y1.empty() || row[0] != f.y1.back()) f.y1.push_back(row[0]);
    f.x1.push_back(row[0]);
    f.x2.push_back(row[1]);
    y2_all.push_back(row[2]);
    f.phi.push_back(row[3]);
    f.v1.push_back(row[4]);
    f.v2.push_back(row[5]);
    f.p.push_back(row[6]);
    f.omega.push_back(row[7]);
  }
  if (f.y1.empty() || y2_all.size() % f.y1.size() != 0) {
    throw Error(ErrorCode::IoError, fmt::format("'{}' is not a tensor grid", path.string()));
  }
  const std::size_t rows = y2_all.size() / f.y1.size();
  f.y2.assign(y2_all.begin(), y2_all.begin() + static_cast<long>(rows));
  f.flux.resize(f.columns());
  for (std::size_t i = 0; i < f.columns(); ++i) f.flux[i] = mass_flux_at(f, i);
  return f;
}

void write_slice_csv(const std::filesystem::path& path, const SliceSolution& slice) {
  auto out = open_out(path);
  out << "y2,phi,dphi,d2phi\n";
  for (std::size_t j = 0; j < slice.y2.size(); ++j) {
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", slice.y2[j], slice.phi[j], slice.dphi[j], slice.d2phi[j]);
  }
}

void write_trace_csv(const std::filesystem::path& path, const PathTrace& trace) {
  auto out = open_out(path);
  out << "t,x1,x2,phi,omega\n";
  for (std::size_t k = 0; k < trace.points.size(); ++k) {
    const auto& p = trace.points[k];
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", p.t, p.x1, p.x2, trace.phi_along[k],
                       trace.omega_along[k]);
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::IoError, fmt::format("'{}': {}", path.string(), e.what()));
  }
}

}  // namespace hydronozzle::io
