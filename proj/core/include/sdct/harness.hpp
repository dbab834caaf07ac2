#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sdct/epidemic.hpp"
#include "sdct/stats.hpp"

namespace sdct {

enum class Model { kHnmDde, kRbTreeDdeNr, kRet };
enum class Algorithm { kLs, kLsPlus, kLsV2, kLsPlusV2, kRandomDmp, kSg };

const char* to_string(Model m);
const char* to_string(Algorithm a);
Model parse_model(const std::string& s);
Algorithm parse_algorithm(const std::string& s);

inline constexpr const char* kCsvSchema = "sdct-csv v1";

struct GridPoint {
  double p_i = 0.1;
  double p_a = 0.5;
  double p_h = 0.2;
  std::size_t d_c = 3;
  std::size_t d_h = 2;
  std::size_t n = 399;
};

struct ExperimentConfig {
  Model model = Model::kHnmDde;
  std::vector<Algorithm> algorithms{Algorithm::kLs, Algorithm::kLsPlus};

  // Each list is one axis of the grid; a single value means fixed.
  std::vector<double> p_i{0.1};
  std::vector<double> p_a{0.5};
  std::vector<double> p_h{0.2};
  std::vector<std::size_t> d_c{3};
  std::vector<std::size_t> d_h{2};
  std::vector<std::size_t> n{399};

  Day T_E = 3;
  Day T_P = 2;
  Day T_I = 14;
  Day T_H = 5;

  std::size_t replicates = 100;
  std::size_t sg_replicates = 0;  // 0: same as replicates
  std::uint64_t base_seed = 7;
  std::optional<bool> freeze_epidemic;  // default: on for RB trees, off otherwise
  std::size_t threads = 1;
  double dmp_epsilon = 0.01;
  std::size_t k1 = 5;
  std::size_t k2 = 5;
  std::size_t ret_runs = 100000;  // stopped-RET runs per point (compare-theory, ret)
  std::string output;             // prefix; <output>.records.csv, <output>.summary.csv

  /// Flat-key JSON object; unknown keys are rejected.
  static ExperimentConfig from_json(const std::string& text);
  std::string to_json() const;

  void validate() const;
  std::vector<GridPoint> grid() const;
  EpidemicParams epidemic_params(const GridPoint& g) const;
  bool frozen() const;
  std::size_t sg_count() const { return sg_replicates ? sg_replicates : replicates; }
};

struct ExperimentRecord {
  std::size_t grid_index = 0;
  GridPoint point;
  Algorithm algorithm = Algorithm::kLs;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  bool success_source = false;
  bool success_first_symptomatic = false;
  std::size_t tests = 0;
  std::size_t edges = 0;
  Day days = 0;
  std::size_t path_length = 0;
  bool predicate_ls = false;
  bool predicate_ls_plus = false;
};

struct SummaryRow {
  std::size_t grid_index = 0;
  GridPoint point;
  Algorithm algorithm = Algorithm::kLs;
  std::size_t replicates = 0;
  Interval success;
  Interval first_symptomatic;
  Interval tests;
  Interval edges;
  double days = 0.0;
};

struct ExperimentResult {
  std::vector<ExperimentRecord> records;  // by grid point, replicate, algorithm
  std::vector<SummaryRow> summary;
};

/// Runs every algorithm on the same sampled worlds. Deterministic in the
/// config regardless of the thread count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

std::vector<SummaryRow> summarize(const std::vector<ExperimentRecord>& records,
                                  const ExperimentConfig& cfg);

void write_records_csv(std::ostream& out, const ExperimentResult& result,
                       const ExperimentConfig& cfg);
void write_summary_csv(std::ostream& out, const ExperimentResult& result,
                       const ExperimentConfig& cfg);

struct TheoryRow {
  GridPoint point;
  double p = 0.0;  // probability that an infected node is not reported
  std::size_t replicates = 0;
  Interval ls;
  double ls_theory = 0.0;
  bool ls_in_ci = false;
  Interval ls_plus;
  double ls_plus_bound = 0.0;
  bool ls_plus_bound_violated = false;
  double boe = 0.0;
  double ls_approx = 0.0;       // path length from the RET approximation
  double ls_plus_approx = 0.0;
  double mean_path_length = 0.0;
};

/// Theory against simulation for rbtree_ddenr (LS / LS+ runs) or ret
/// (stopped RET path lengths only; empirical LS columns stay empty).
std::vector<TheoryRow> compare_theory(const ExperimentConfig& cfg);
void write_theory_csv(std::ostream& out, const std::vector<TheoryRow>& rows,
                      const ExperimentConfig& cfg);

/// Reshapes a summary CSV into one `x,mean,lo,hi` file per (metric,
/// algorithm) along the swept parameter `x_key`. Returns the written paths.
std::vector<std::string> emit_plot_data(std::istream& summary, const std::string& x_key,
                                        const std::string& out_prefix);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Fast self-checks of the invariants the library relies on.
std::vector<CheckResult> run_validation(std::uint64_t seed);

}  // namespace sdct
