#include "lamb/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lamb/error.hpp"

namespace lamb {

namespace fs = std::filesystem;

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
  return out;
}

}  // namespace

void write_table(const fs::path& path, const std::string& x_name, const std::vector<Column>& columns) {
  if (columns.empty()) throw Error(ErrorCode::GridError, "empty table");
  const GridFunction& first = *columns.front().values;
  for (const Column& c : columns) {
    if (c.values->size() != first.size()) throw Error(ErrorCode::GridError, "column " + c.name + " has the wrong length");
  }
  std::ofstream out = open_out(path);
  out << x_name;
  for (const Column& c : columns) {
    for (std::size_t k = 0; k < c.values->dim(); ++k) out << ',' << c.name << '_' << (k + 1);
  }
  out << '\n';
  for (std::size_t i = 0; i < first.size(); ++i) {
    out << format_double(first.time(i));
    for (const Column& c : columns) {
      for (double v : (*c.values)[i]) out << ',' << format_double(v);
    }
    out << '\n';
  }
}

void write_grid_csv(const fs::path& path, const GridFunction& f) { write_table(path, "x", {{"f", &f}}); }

GridFunction read_grid_csv(const fs::path& path, double t0, double h, Centering centering) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  const auto dim = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
  if (dim == 0) throw Error(ErrorCode::ConfigError, path.string() + ": no value columns");
  std::vector<double> samples;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    std::size_t got = 0;
    while (std::getline(row, cell, ',')) {
      samples.push_back(std::stod(cell));
      ++got;
    }
    if (got != dim) throw Error(ErrorCode::ConfigError, path.string() + ": ragged row");
  }
  return GridFunction(t0, h, dim, std::move(samples), centering);
}

void write_json(const fs::path& path, const Json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
}

Json to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const Json& j) {
  if (j.is_number()) return Vec::Constant(1, j.get<double>());
  if (!j.is_array()) throw Error(ErrorCode::ConfigError, "expected a number or an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::ConfigError, "expected a number");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

namespace {

Json limits_record(const SymmetricWindow& w, std::size_t dim, const Vec& plus, const Vec& minus) {
  Json j;
  j["h"] = w.h();
  j["half_steps"] = w.half();
  j["dim"] = dim;
  j["plus"] = to_json(plus);
  j["minus"] = to_json(minus);
  return j;
}

struct Limits {
  double h;
  double L;
  Vec plus;
  Vec minus;
};

Limits read_limits(const fs::path& path) {
  const Json j = read_json(path);
  try {
    const double h = j.at("h").get<double>();
    const auto half = j.at("half_steps").get<std::size_t>();
    return {h, static_cast<double>(half) * h, vec_from_json(j.at("plus")), vec_from_json(j.at("minus"))};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
}

}  // namespace

void write_asymptotic_state(const fs::path& dir, const std::string& stem, const AsymptoticState& psi) {
  write_grid_csv(dir / (stem + "_psi0.csv"), psi.psi0());
  write_grid_csv(dir / (stem + "_psi1.csv"), psi.psi1());
  write_json(dir / (stem + "_limits.json"), limits_record(psi.window(), psi.dim(), psi.psi0_plus(), psi.psi0_minus()));
}

AsymptoticState read_asymptotic_state(const fs::path& dir, const std::string& stem) {
  const Limits lim = read_limits(dir / (stem + "_limits.json"));
  GridFunction p0 = read_grid_csv(dir / (stem + "_psi0.csv"), -lim.L, lim.h, Centering::Node);
  GridFunction p1 = read_grid_csv(dir / (stem + "_psi1.csv"), -lim.L, lim.h, Centering::Cell);
  return {std::move(p0), std::move(p1), lim.plus, lim.minus};
}

void write_energy_state(const fs::path& dir, const std::string& stem, const EnergyState& state) {
  write_grid_csv(dir / (stem + "_u0.csv"), state.u0());
  write_grid_csv(dir / (stem + "_v0.csv"), state.v0());
  write_json(dir / (stem + "_limits.json"), limits_record(state.window(), state.dim(), state.u0_plus(), state.u0_minus()));
}

EnergyState read_energy_state(const fs::path& dir, const std::string& stem) {
  const Limits lim = read_limits(dir / (stem + "_limits.json"));
  GridFunction u0 = read_grid_csv(dir / (stem + "_u0.csv"), -lim.L, lim.h, Centering::Node);
  GridFunction v0 = read_grid_csv(dir / (stem + "_v0.csv"), -lim.L, lim.h, Centering::Cell);
  Vec mean = v0.integral();
  return {std::move(u0), std::move(v0), lim.plus, lim.minus, std::move(mean)};
}

}  // namespace lamb
