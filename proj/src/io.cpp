#include "cbmai/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace cbmai {

using nlohmann::json;

namespace {

json nullable(double value) { return std::isfinite(value) ? json(value) : json(nullptr); }

json one_based(const std::vector<int>& cols) {
  json out = json::array();
  for (int c : cols) out.push_back(c + 1);
  return out;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

json instance_to_json(const Instance& instance) {
  json j;
  j["name"] = instance.name;
  j["K"] = instance.K;
  j["K0"] = instance.K0;
  j["L"] = instance.L;
  j["r"] = instance.rewards;
  json costs = json::array();
  for (int l = 0; l < instance.L; ++l) {
    std::vector<double> row(instance.K);
    for (int a = 0; a < instance.K; ++a) row[a] = instance.costs(l, a);
    costs.push_back(row);
  }
  j["c"] = costs;
  j["c_bar"] = instance.cost_bounds;
  j["sigma_r"] = instance.sigma_r;
  j["sigma_c"] = instance.sigma_c;
  return j;
}

Instance instance_from_json(const json& j) {
  try {
    Instance inst;
    inst.name = get_or<std::string>(j, "name", "unnamed");
    inst.K = j.at("K").get<int>();
    inst.K0 = j.at("K0").get<int>();
    inst.L = j.at("L").get<int>();
    inst.rewards = j.at("r").get<std::vector<double>>();
    const auto rows = j.at("c").get<std::vector<std::vector<double>>>();
    if (static_cast<int>(rows.size()) != inst.L) throw FormatError("'c' must hold L rows");
    inst.costs = Matrix(inst.L, inst.K);
    for (int l = 0; l < inst.L; ++l) {
      if (static_cast<int>(rows[l].size()) != inst.K) throw FormatError("each row of 'c' must hold K entries");
      for (int a = 0; a < inst.K; ++a) inst.costs(l, a) = rows[l][a];
    }
    inst.cost_bounds = j.at("c_bar").get<std::vector<double>>();
    inst.sigma_r = j.at("sigma_r").get<double>();
    inst.sigma_c = j.at("sigma_c").get<double>();
    inst.validate();
    return inst;
  } catch (const json::exception& e) {
    throw FormatError(std::string("instance json: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  return instance_from_json(j);
}

void save_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << instance_to_json(instance).dump(2) << '\n';
}

GeneratorRequest generator_from_json(const json& j) {
  try {
    GeneratorRequest req;
    req.seed = get_or<std::uint64_t>(j, "seed", 0);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "grid_noise") {
      GridNoise g;
      const std::string noise = get_or<std::string>(j, "noise", "permutation");
      if (noise == "permutation") {
        g.noise = NoiseMode::Permutation;
      } else if (noise == "iid") {
        g.noise = NoiseMode::Iid;
      } else {
        throw FormatError("noise must be 'permutation' or 'iid'");
      }
      const std::string rule = get_or<std::string>(j, "rule", "D1");
      if (rule == "D1") {
        g.rule = RewardRule::D1;
      } else if (rule == "D2") {
        g.rule = RewardRule::D2;
      } else if (rule == "D3") {
        g.rule = RewardRule::D3;
      } else {
        throw FormatError("rule must be D1, D2 or D3");
      }
      g.bump = get_or(j, "bump", g.bump);
      req.spec = g;
    } else if (kind == "hard_cluster") {
      HardCluster h;
      h.K = get_or(j, "K", h.K);
      h.cost_bound = get_or(j, "cost_bound", h.cost_bound);
      h.low_cost = get_or(j, "low_cost", h.low_cost);
      h.low_reward = get_or(j, "low_reward", h.low_reward);
      h.high_cost = get_or(j, "high_cost", h.high_cost);
      h.high_reward = get_or(j, "high_reward", h.high_reward);
      h.cluster_cost = get_or(j, "cluster_cost", h.cluster_cost);
      h.cluster_gap = get_or(j, "cluster_gap", h.cluster_gap);
      h.sigma_r = get_or(j, "sigma_r", h.sigma_r);
      h.sigma_c = get_or(j, "sigma_c", h.sigma_c);
      req.spec = h;
    } else if (kind == "random_uniform") {
      RandomUniform u;
      u.K = get_or(j, "K", u.K);
      u.K0 = get_or(j, "K0", u.K);
      u.L = get_or(j, "L", u.L);
      u.reward_low = get_or(j, "reward_low", u.reward_low);
      u.reward_high = get_or(j, "reward_high", u.reward_high);
      u.cost_low = get_or(j, "cost_low", u.cost_low);
      u.cost_high = get_or(j, "cost_high", u.cost_high);
      u.cost_bound = get_or(j, "cost_bound", u.cost_bound);
      u.sigma_r = get_or(j, "sigma_r", u.sigma_r);
      u.sigma_c = get_or(j, "sigma_c", u.sigma_c);
      req.spec = u;
    } else {
      throw FormatError("unknown generator kind '" + kind + "'");
    }
    return req;
  } catch (const json::exception& e) {
    throw FormatError(std::string("generator json: ") + e.what());
  }
}

json rate_bounds_to_json(const RateBounds& rates) {
  return {{"sfsr_exponent_coeff", nullable(rates.sfsr_exponent_coeff)},
          {"lower_bound_rate", nullable(rates.lower_bound_rate)},
          {"uslp_rate", nullable(rates.uslp_rate)}};
}

json gap_report_to_json(const Instance& instance, const GapReport& report, const RateBounds& rates) {
  json j;
  j["instance"] = instance.name;
  j["optimal_basis"] = one_based(report.optimal_basis.indices());
  j["delta0_sq"] = nullable(report.delta0_sq);
  json bases = json::array();
  for (const BasisGap& bg : report.basis_gaps) {
    bases.push_back({{"basis", one_based(bg.basis.indices())}, {"delta_sq", nullable(bg.delta_sq)}});
  }
  j["basis_gaps"] = bases;
  json arms = json::array();
  for (double g : report.arm_gaps) arms.push_back(nullable(g));
  j["arm_gaps"] = arms;
  json sorted = json::array();
  for (double g : report.sorted_gaps) sorted.push_back(nullable(g));
  j["sorted_gaps"] = sorted;
  j["sorted_columns"] = one_based(report.sorted_columns);
  j["n_tilde_coefficient"] = report.n_tilde_coefficient;
  j["rates"] = rate_bounds_to_json(rates);
  return j;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, std::span<const CellResult> results) {
  out << kCsvHeader << '\n';
  for (const CellResult& c : results) {
    out << c.instance << ',' << algorithm_name(c.algorithm) << ',' << c.budget << ',' << c.trials
        << ',' << c.errors << ',' << format_double(c.error_rate) << ',' << format_double(c.ci_low)
        << ',' << format_double(c.ci_high) << ',' << c.base_seed << '\n';
  }
}

namespace {

template <class T>
T parse_field(const std::string& field) {
  T value{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw FormatError("csv: cannot parse '" + field + "'");
  }
  return value;
}

}  // namespace

std::vector<CellResult> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw FormatError("csv: unexpected header");
  std::vector<CellResult> results;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 9) throw FormatError("csv: expected 9 fields in '" + line + "'");
    CellResult c;
    c.instance = fields[0];
    try {
      c.algorithm = parse_algorithm(fields[1]);
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
    c.budget = parse_field<long>(fields[2]);
    c.trials = parse_field<long>(fields[3]);
    c.errors = parse_field<long>(fields[4]);
    c.error_rate = parse_field<double>(fields[5]);
    c.ci_low = parse_field<double>(fields[6]);
    c.ci_high = parse_field<double>(fields[7]);
    c.base_seed = parse_field<std::uint64_t>(fields[8]);
    results.push_back(c);
  }
  return results;
}

}  // namespace cbmai
