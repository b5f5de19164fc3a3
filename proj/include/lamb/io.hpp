#pragma once
// CSV and JSON output. CSV has a header row, ',' separator and 17
// significant digits; JSON keys keep insertion order.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "lamb/function_spaces.hpp"

namespace lamb {

using Json = nlohmann::ordered_json;

std::string format_double(double x);

/// Named columns on one grid; a column of dimension n expands to
/// name_1..name_n.
struct Column {
  std::string name;
  const GridFunction* values;
};

/// Table with first column `x_name` holding grid locations. All columns
/// must share the size of the first one.
void write_table(const std::filesystem::path& path, const std::string& x_name,
                 const std::vector<Column>& columns);

/// Header x,f_1..f_n.
void write_grid_csv(const std::filesystem::path& path, const GridFunction& f);

/// Values of a file written by write_grid_csv; the grid comes from the
/// caller since the x column is rounded.
GridFunction read_grid_csv(const std::filesystem::path& path, double t0, double h,
                           Centering centering);

void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

Json to_json(const Vec& v);
Vec vec_from_json(const Json& j);

/// <stem>_psi0.csv, <stem>_psi1.csv and <stem>_limits.json.
void write_asymptotic_state(const std::filesystem::path& dir, const std::string& stem,
                            const AsymptoticState& psi);
AsymptoticState read_asymptotic_state(const std::filesystem::path& dir, const std::string& stem);

/// <stem>_u0.csv, <stem>_v0.csv and <stem>_limits.json.
void write_energy_state(const std::filesystem::path& dir, const std::string& stem,
                        const EnergyState& state);
EnergyState read_energy_state(const std::filesystem::path& dir, const std::string& stem);

}  // namespace lamb
