#pragma once

// JSON and CSV formats. Column numbers in every external format are 1-based.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cbmai/catalog.hpp"
#include "cbmai/harness.hpp"
#include "cbmai/hardness.hpp"

namespace cbmai {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"K", "K0", "L", "r", "c" (L arrays of K), "c_bar", "sigma_r", "sigma_c", "name"}
nlohmann::json instance_to_json(const Instance& instance);
/// Throws FormatError on missing keys or an invalid instance.
Instance instance_from_json(const nlohmann::json& j);

Instance load_instance(const std::string& path);
void save_instance(const Instance& instance, const std::string& path);

/// {"kind": "grid_noise" | "hard_cluster" | "random_uniform", "seed": n, ...}
/// with the generator fields as optional keys.
struct GeneratorRequest {
  GeneratorSpec spec;
  std::uint64_t seed = 0;
};
GeneratorRequest generator_from_json(const nlohmann::json& j);

nlohmann::json gap_report_to_json(const Instance& instance, const GapReport& report,
                                  const RateBounds& rates);
nlohmann::json rate_bounds_to_json(const RateBounds& rates);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

inline constexpr const char* kCsvHeader =
    "instance,algorithm,budget,trials,errors,error_rate,ci_low,ci_high,base_seed";

void write_csv(std::ostream& out, std::span<const CellResult> results);
/// Throws FormatError on a wrong header or malformed row.
std::vector<CellResult> read_csv(std::istream& in);

}  // namespace cbmai
