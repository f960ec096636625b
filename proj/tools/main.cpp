// Command-line front end: fidelity tables, encodings, finite measurement
// construction/verification, and protocol simulation with JSON/CSV output.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spindir/errors.hpp"
#include "spindir/fidelity.hpp"
#include "spindir/io.hpp"
#include "spindir/povm.hpp"
#include "spindir/simulate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;  // verification or computation failure
constexpr int kExitUsage = 2;    // bad invocation

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NRange {
  int lo = 0;
  int hi = 0;
};

NRange parse_n_range(const std::string& text) {
  NRange range;
  const auto sep = text.find("..");
  try {
    if (sep == std::string::npos) {
      range.lo = range.hi = std::stoi(text);
    } else {
      range.lo = std::stoi(text.substr(0, sep));
      range.hi = std::stoi(text.substr(sep + 2));
    }
  } catch (const std::exception&) {
    throw UsageError("cannot parse spin-count range '" + text + "' (expected N or A..B)");
  }
  if (range.lo < 1 || range.hi < range.lo) {
    throw UsageError("invalid spin-count range '" + text + "'");
  }
  return range;
}

spindir::HalfInt parse_half_integer(double value, const std::string& flag) {
  const double twice = 2.0 * value;
  const long long rounded = std::llround(twice);
  if (std::abs(twice - static_cast<double>(rounded)) > 1e-9) {
    throw UsageError(flag + " must be an integer or half-integer, got " +
                     std::to_string(value));
  }
  return spindir::HalfInt::from_twice(static_cast<int>(rounded));
}

spindir::EffectiveState make_state(int n, const std::string& encoding,
                                   std::optional<int> twice_m) {
  if (encoding == "parallel") return spindir::parallel_state(n);
  if (encoding == "antiparallel") return spindir::antiparallel_state(n);
  if (encoding == "optimal") return spindir::optimal_state(n).state;
  if (encoding == "product") {
    if (!twice_m) throw UsageError("--encoding product requires --twice-m");
    return spindir::product_state(n, spindir::HalfInt::from_twice(*twice_m));
  }
  throw UsageError("unknown encoding '" + encoding +
                   "' (expected parallel, antiparallel, product or optimal)");
}

spindir::WeightedDirectionSet make_set(const std::string& source) {
  if (source == "tetrahedron" || source == "octahedron") {
    return spindir::platonic_set(source);
  }
  if (source.rfind("construct:", 0) == 0) {
    const spindir::HalfInt j =
        parse_half_integer(std::stod(source.substr(10)), "--set construct:J");
    return spindir::construct_isotropic_set(j);
  }
  return spindir::load_direction_set(source);
}

// ----------------------------------------------------------------- table
int cmd_table(const std::string& range_text, const std::string& format, int nodes) {
  const NRange range = parse_n_range(range_text);
  std::vector<spindir::FidelityReport> rows;
  for (int n = range.lo; n <= range.hi; ++n) {
    rows.push_back(spindir::table_row(n, nodes));
  }
  if (format == "csv") {
    std::cout << spindir::fidelity_csv_header() << "\n";
    for (const auto& row : rows) std::cout << spindir::fidelity_csv_row(row) << "\n";
  } else if (format == "json") {
    if (rows.size() == 1) {
      std::cout << spindir::to_json(rows.front()).dump(2) << "\n";
    } else {
      nlohmann::json out = nlohmann::json::array();
      for (const auto& row : rows) out.push_back(spindir::to_json(row));
      std::cout << out.dump(2) << "\n";
    }
  } else {
    std::printf("%4s %8s %8s %8s %8s %8s %8s\n", "N", "F_P", "F_A", "F_O", "I_P", "I_A",
                "I_O");
    for (const auto& row : rows) {
      std::printf("%4d %8.4f %8.4f %8.4f %8.4f %8.4f %8.4f\n", row.N, row.f_parallel,
                  row.f_antiparallel, row.f_optimal, row.i_parallel, row.i_antiparallel,
                  row.i_optimal);
    }
  }
  return kExitOk;
}

// ------------------------------------------------------------------- maf
int cmd_maf(int n, const std::string& encoding, std::optional<int> twice_m,
            const std::string& method, std::optional<int> nodes, const std::string& format) {
  const spindir::EffectiveState state = make_state(n, encoding, twice_m);
  double value = 0.0;
  if (method == "closed") {
    value = spindir::maf_closed_form(state);
  } else if (method == "quadrature") {
    const int node_count = nodes.value_or((state.J().twice() + 4 + 1) / 2 + 2);
    value = spindir::maf_quadrature(state, node_count);
  } else {
    throw UsageError("unknown method '" + method + "' (expected closed or quadrature)");
  }
  if (format == "json") {
    nlohmann::json out{{"N", n},
                       {"encoding", encoding},
                       {"twice_m", state.m().twice()},
                       {"method", method},
                       {"maf", value}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::printf("maf(N=%d, %s) = %.12f\n", n, encoding.c_str(), value);
  }
  return kExitOk;
}

// -------------------------------------------------------------- infogain
int cmd_infogain(int n, const std::string& encoding, std::optional<int> twice_m, int nodes,
                 const std::string& format) {
  const spindir::EffectiveState state = make_state(n, encoding, twice_m);
  const double value = spindir::info_gain(state, nodes);
  if (format == "json") {
    nlohmann::json out{{"N", n},
                       {"encoding", encoding},
                       {"twice_m", state.m().twice()},
                       {"nodes", nodes},
                       {"info_gain_bits", value}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::printf("info_gain(N=%d, %s) = %.12f bits\n", n, encoding.c_str(), value);
  }
  return kExitOk;
}

// ----------------------------------------------------------- asymptotics
int cmd_asymptotics(int n, const std::string& order, const std::string& format) {
  spindir::AsymptoticOrder parsed;
  if (order == "leading") {
    parsed = spindir::AsymptoticOrder::leading;
  } else if (order == "next") {
    parsed = spindir::AsymptoticOrder::next;
  } else {
    throw UsageError("unknown order '" + order + "' (expected leading or next)");
  }
  const double value = spindir::asymptotic_maf(n, parsed);
  const double exact = spindir::antiparallel_even_maf(n / 2);
  const double residual = std::abs(exact - value);
  if (format == "json") {
    nlohmann::json out{
        {"N", n}, {"order", order}, {"value", value}, {"exact", exact}, {"residual", residual}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::printf("approx = %.12f   exact = %.12f   |residual| = %.3e\n", value, exact,
                residual);
  }
  return kExitOk;
}

// ---------------------------------------------------------- povm construct
int cmd_povm_construct(double j_value, const std::string& output_path) {
  const spindir::HalfInt j = parse_half_integer(j_value, "--j");
  const spindir::WeightedDirectionSet set = spindir::construct_isotropic_set(j);
  spindir::save_direction_set(set, output_path);
  nlohmann::json out{{"requested_J2", j.twice()},
                     {"directions", set.size()},
                     {"total_weight", set.total_weight()},
                     {"file", output_path}};
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

// ------------------------------------------------------------- povm verify
int cmd_povm_verify(double j_value, const std::string& source, double tolerance) {
  const spindir::HalfInt j = parse_half_integer(j_value, "--j");
  const spindir::WeightedDirectionSet set = make_set(source);
  const spindir::MultipoleReport report = spindir::verify_isotropy(set, j, tolerance);
  std::cout << spindir::to_json(report).dump(2) << "\n";
  return report.pass ? kExitOk : kExitFailure;
}

// --------------------------------------------------------------- simulate
int cmd_simulate(int n, const std::string& encoding, std::optional<int> twice_m,
                 const std::string& set_source, std::uint64_t trials,
                 std::optional<std::uint64_t> seed, const std::string& format) {
  const spindir::EffectiveState state = make_state(n, encoding, twice_m);
  const spindir::WeightedDirectionSet set = make_set(set_source);
  std::uint64_t actual_seed = 0;
  if (seed) {
    actual_seed = *seed;
  } else {
    std::random_device rd;
    actual_seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::cerr << "note: no --seed given; using fresh seed " << actual_seed << "\n";
  }
  const spindir::SimulationReport report = spindir::run_protocol(state, set, trials, actual_seed);
  if (format == "json") {
    std::cout << spindir::to_json(report).dump(2) << "\n";
  } else {
    std::printf("mean fidelity = %.6f +/- %.6f   (%llu trials, seed %llu)\n",
                report.mean_fidelity, report.std_error,
                static_cast<unsigned long long>(report.trials),
                static_cast<unsigned long long>(report.seed));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-direction communication toolkit: encode a spatial direction in a "
               "few spins, decode it with a finite measurement"};
  app.require_subcommand(1);

  std::string format = "text";
  std::string range_text = "2..7";
  int table_nodes = 800;
  auto* table = app.add_subcommand("table", "Fidelities and information gains per N");
  table->add_option("--n", range_text, "Spin count N or range A..B");
  table->add_option("--nodes", table_nodes, "Information-gain quadrature nodes");
  table->add_option("--format", format, "Output format: text, csv or json");

  int n = 2;
  std::string encoding = "antiparallel";
  std::optional<int> twice_m;
  std::string method = "closed";
  std::optional<int> maf_nodes;
  auto* maf = app.add_subcommand("maf", "Maximal average fidelity of one encoding");
  maf->add_option("--n", n, "Spin count")->required();
  maf->add_option("--encoding", encoding, "parallel, antiparallel, product or optimal");
  maf->add_option("--twice-m", twice_m, "2m for product encodings (kept exact)");
  maf->add_option("--method", method, "closed or quadrature");
  maf->add_option("--nodes", maf_nodes, "Quadrature nodes (quadrature method)");
  maf->add_option("--format", format, "Output format: text or json");

  int info_nodes = 800;
  auto* infogain = app.add_subcommand("infogain", "Information gain of one encoding (bits)");
  infogain->add_option("--n", n, "Spin count")->required();
  infogain->add_option("--encoding", encoding, "parallel, antiparallel, product or optimal");
  infogain->add_option("--twice-m", twice_m, "2m for product encodings");
  infogain->add_option("--nodes", info_nodes, "Quadrature nodes (doubled for the check)");
  infogain->add_option("--format", format, "Output format: text or json");

  std::string order = "next";
  auto* asym = app.add_subcommand("asymptotics", "Large-N antiparallel fidelity laws");
  asym->add_option("--n", n, "Even spin count")->required();
  asym->add_option("--order", order, "leading or next");
  asym->add_option("--format", format, "Output format: text or json");

  auto* povm = app.add_subcommand("povm", "Finite isotropic measurements");
  povm->require_subcommand(1);
  double j_value = 1.0;
  std::string output_path = "set.csv";
  auto* construct = povm->add_subcommand("construct", "Build a weighted isotropic grid");
  construct->add_option("--j", j_value, "Isotropy order J (half-integers round up)")
      ->required();
  construct->add_option("-o,--output", output_path, "Destination CSV")->required();

  std::string set_source;
  double tolerance = 1e-10;
  auto* verify = povm->add_subcommand("verify", "Check multipole isotropy of a set");
  verify->add_option("--j", j_value, "Isotropy order J to verify")->required();
  verify->add_option("set", set_source, "CSV path, tetrahedron, or octahedron")->required();
  verify->add_option("--tol", tolerance, "Moment tolerance");

  std::uint64_t trials = 1000000;
  std::optional<std::uint64_t> seed;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo protocol run");
  simulate->add_option("--n", n, "Spin count")->required();
  simulate->add_option("--encoding", encoding, "parallel, antiparallel, product or optimal");
  simulate->add_option("--twice-m", twice_m, "2m for product encodings");
  simulate->add_option("--set", set_source,
                       "tetrahedron, octahedron, construct:J, or a CSV path")
      ->required();
  simulate->add_option("--trials", trials, "Number of trials");
  simulate->add_option("--seed", seed, "64-bit seed (fresh one drawn when absent)");
  simulate->add_option("--format", format, "Output format: text or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (table->parsed()) return cmd_table(range_text, format, table_nodes);
    if (maf->parsed()) return cmd_maf(n, encoding, twice_m, method, maf_nodes, format);
    if (infogain->parsed()) return cmd_infogain(n, encoding, twice_m, info_nodes, format);
    if (asym->parsed()) return cmd_asymptotics(n, order, format);
    if (povm->parsed()) {
      if (construct->parsed()) return cmd_povm_construct(j_value, output_path);
      if (verify->parsed()) return cmd_povm_verify(j_value, set_source, tolerance);
    }
    if (simulate->parsed()) {
      return cmd_simulate(n, encoding, twice_m, set_source, trials, seed, format);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
