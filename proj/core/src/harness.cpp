#include "sdct/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "sdct/analytic.hpp"
#include "sdct/detect.hpp"
#include "sdct/dmp.hpp"
#include "sdct/ret_sim.hpp"
#include "sdct/size_gain.hpp"

namespace sdct {

using nlohmann::json;

namespace {

constexpr std::pair<Model, const char*> kModels[] = {
    {Model::kHnmDde, "hnm_dde"},
    {Model::kRbTreeDdeNr, "rbtree_ddenr"},
    {Model::kRet, "ret"},
};

constexpr std::pair<Algorithm, const char*> kAlgorithms[] = {
    {Algorithm::kLs, "ls"},           {Algorithm::kLsPlus, "ls+"},
    {Algorithm::kLsV2, "lsv2"},       {Algorithm::kLsPlusV2, "ls+v2"},
    {Algorithm::kRandomDmp, "random_dmp"}, {Algorithm::kSg, "sg"},
};

std::string fmt(double x) {
  if (std::isnan(x)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

template <class T>
std::vector<T> as_list(const json& v, const std::string& key) {
  auto one = [&](const json& x) -> T {
    if constexpr (std::is_same_v<T, double>) {
      if (!x.is_number()) throw ParameterError("config: " + key + " must be a number");
      return x.get<double>();
    } else {
      if (!x.is_number_integer() || x.get<long long>() < 0)
        throw ParameterError("config: " + key + " must be a nonnegative integer");
      return static_cast<T>(x.get<unsigned long long>());
    }
  };
  std::vector<T> out;
  if (v.is_array()) {
    for (const auto& x : v) out.push_back(one(x));
  } else {
    out.push_back(one(v));
  }
  return out;
}

template <class T>
T scalar(const json& v, const std::string& key) {
  auto list = as_list<T>(v, key);
  if (list.size() != 1 || v.is_array()) throw ParameterError("config: " + key + " must be a scalar");
  return list.front();
}

template <class F>
void parallel_for(std::size_t count, std::size_t threads, F&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::uint64_t point_seed(std::uint64_t base, std::size_t grid_index) {
  return mix_seed(base + 0x9E3779B97F4A7C15ull * (grid_index + 1));
}

struct World {
  std::shared_ptr<const ContactNetwork> network;
  Outbreak outbreak;
  std::uint64_t continuation = 0;
  std::size_t path_length = 0;
  PathPredicates predicates;
};

World sample_world(const ExperimentConfig& cfg, const GridPoint& gp,
                   const EpidemicParams& params, std::uint64_t seed) {
  Rng rng(seed);
  constexpr int kAttempts = 100000;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    std::shared_ptr<const ContactNetwork> net;
    NodeId source = 0;
    if (cfg.model == Model::kHnmDde) {
      net = std::make_shared<Graph>(generate_hnm(NetworkParams{gp.n, gp.d_h, gp.d_c}, rng()));
      source = static_cast<NodeId>(uniform_index(rng, gp.n));
    } else {
      net = std::make_shared<RBTree>(gp.d_c, gp.d_h);
      source = RBTree::kRoot;
    }
    auto outbreak = run_until_first_hospitalization(*net, source, params, rng);
    if (!outbreak) continue;
    World w;
    const auto path = transmission_path(outbreak->state, outbreak->h);
    w.path_length = path.size() - 1;
    w.predicates = ls_success_predicate(path, outbreak->state, *net);
    w.network = std::move(net);
    w.outbreak = std::move(*outbreak);
    w.continuation = rng();
    return w;
  }
  throw NoOutbreakError("no outbreak reached a hospitalization");
}

bool contains(const std::vector<Algorithm>& v, Algorithm a) {
  return std::find(v.begin(), v.end(), a) != v.end();
}

std::vector<ExperimentRecord> run_replicate(const ExperimentConfig& cfg, std::size_t grid_index,
                                            const GridPoint& gp, std::size_t replicate) {
  const auto params = cfg.epidemic_params(gp);
  const auto seed = replicate_seed(point_seed(cfg.base_seed, grid_index), replicate);
  const World world = sample_world(cfg, gp, params, seed);

  SessionOptions options;
  options.freeze_epidemic = cfg.frozen();
  options.population = gp.n;
  auto session = [&] {
    return Session(world.network, params, world.outbreak, world.continuation, options);
  };

  const auto& algos = cfg.algorithms;
  const bool sg_here = contains(algos, Algorithm::kSg) && replicate < cfg.sg_count();
  // LS+ fixes the sensor budget of random+DMP; LS and LS+ together fix SG's deadline.
  std::optional<LsOutcome> ls, ls_plus;
  if (contains(algos, Algorithm::kLs) || sg_here) {
    auto s = session();
    ls = run_ls(s, LsConfig{});
  }
  if (contains(algos, Algorithm::kLsPlus) || contains(algos, Algorithm::kRandomDmp) || sg_here) {
    auto s = session();
    ls_plus = run_ls(s, LsConfig{.plus = true});
  }

  std::vector<ExperimentRecord> out;
  for (Algorithm a : algos) {
    ExperimentRecord r;
    r.grid_index = grid_index;
    r.point = gp;
    r.algorithm = a;
    r.replicate = replicate;
    r.seed = seed;
    r.path_length = world.path_length;
    r.predicate_ls = world.predicates.ls;
    r.predicate_ls_plus = world.predicates.ls_plus;
    EstimateCheck check;
    Ledger ledger;
    Day finish = 0;
    switch (a) {
      case Algorithm::kLs:
      case Algorithm::kLsPlus: {
        const auto& o = a == Algorithm::kLs ? *ls : *ls_plus;
        check = o.success;
        ledger = o.ledger;
        finish = o.finish_day;
        break;
      }
      case Algorithm::kLsV2:
      case Algorithm::kLsPlusV2: {
        auto s = session();
        const auto o = run_ls(s, LsConfig{.plus = a == Algorithm::kLsPlusV2, .v2 = true});
        check = o.success;
        ledger = o.ledger;
        finish = o.finish_day;
        break;
      }
      case Algorithm::kRandomDmp: {
        auto s = session();
        RandomDmpConfig dc;
        dc.sensors = ls_plus->ledger.tests + 1;
        dc.feasible.k1 = cfg.k1;
        dc.feasible.k2 = cfg.k2;
        dc.dmp.epsilon = cfg.dmp_epsilon;
        dc.seed = mix_seed(world.continuation + 1);
        const auto o = run_random_dmp(s, dc);
        check = o.success;
        ledger = o.ledger;
        finish = o.finish_day;
        break;
      }
      case Algorithm::kSg: {
        if (!sg_here) continue;
        auto s = session();
        SgConfig sc;
        sc.deadline_day = std::max(ls->finish_day, ls_plus->finish_day);
        sc.seed = mix_seed(world.continuation + 2);
        const auto o = run_sg(s, sc);
        check = o.success;
        ledger = o.ledger;
        finish = o.finish_day;
        break;
      }
    }
    r.success_source = check.source;
    r.success_first_symptomatic = check.first_symptomatic;
    r.tests = ledger.tests;
    r.edges = ledger.edges_revealed;
    r.days = finish - world.outbreak.t_h;
    out.push_back(r);
  }
  return out;
}

void write_header(std::ostream& out, const char* kind, const ExperimentConfig& cfg) {
  out << "# " << kCsvSchema << ' ' << kind << '\n';
  out << "# config " << json::parse(cfg.to_json()).dump() << '\n';
}

void write_point(std::ostream& out, const GridPoint& g) {
  out << fmt(g.p_i) << ',' << fmt(g.p_a) << ',' << fmt(g.p_h) << ',' << g.d_c << ',' << g.d_h
      << ',' << g.n;
}

std::string interval_cols(const Interval& i) {
  return fmt(i.mean) + ',' + fmt(i.lo) + ',' + fmt(i.hi);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string file_safe(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '+') {
      out += "plus";
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace

const char* to_string(Model m) {
  for (auto [k, name] : kModels) {
    if (k == m) return name;
  }
  return "?";
}

const char* to_string(Algorithm a) {
  for (auto [k, name] : kAlgorithms) {
    if (k == a) return name;
  }
  return "?";
}

Model parse_model(const std::string& s) {
  for (auto [k, name] : kModels) {
    if (s == name) return k;
  }
  throw ParameterError("unknown model: " + s);
}

Algorithm parse_algorithm(const std::string& s) {
  for (auto [k, name] : kAlgorithms) {
    if (s == name) return k;
  }
  throw ParameterError("unknown algorithm: " + s);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ParameterError("config: expected a JSON object");
  ExperimentConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "model") {
      c.model = parse_model(v.get<std::string>());
    } else if (key == "algorithms" || key == "algo") {
      c.algorithms.clear();
      if (v.is_array()) {
        for (const auto& a : v) c.algorithms.push_back(parse_algorithm(a.get<std::string>()));
      } else {
        c.algorithms.push_back(parse_algorithm(v.get<std::string>()));
      }
    } else if (key == "p_i") {
      c.p_i = as_list<double>(v, key);
    } else if (key == "p_a") {
      c.p_a = as_list<double>(v, key);
    } else if (key == "p_h") {
      c.p_h = as_list<double>(v, key);
    } else if (key == "d_c") {
      c.d_c = as_list<std::size_t>(v, key);
    } else if (key == "d_h") {
      c.d_h = as_list<std::size_t>(v, key);
    } else if (key == "n") {
      c.n = as_list<std::size_t>(v, key);
    } else if (key == "T_E") {
      c.T_E = scalar<Day>(v, key);
    } else if (key == "T_P") {
      c.T_P = scalar<Day>(v, key);
    } else if (key == "T_I") {
      c.T_I = scalar<Day>(v, key);
    } else if (key == "T_H") {
      c.T_H = scalar<Day>(v, key);
    } else if (key == "replicates") {
      c.replicates = scalar<std::size_t>(v, key);
    } else if (key == "sg_replicates") {
      c.sg_replicates = scalar<std::size_t>(v, key);
    } else if (key == "base_seed" || key == "seed") {
      c.base_seed = scalar<std::uint64_t>(v, key);
    } else if (key == "freeze_epidemic") {
      if (!v.is_boolean()) throw ParameterError("config: freeze_epidemic must be a boolean");
      c.freeze_epidemic = v.get<bool>();
    } else if (key == "threads") {
      c.threads = scalar<std::size_t>(v, key);
    } else if (key == "dmp_epsilon") {
      c.dmp_epsilon = scalar<double>(v, key);
    } else if (key == "k1") {
      c.k1 = scalar<std::size_t>(v, key);
    } else if (key == "k2") {
      c.k2 = scalar<std::size_t>(v, key);
    } else if (key == "ret_runs") {
      c.ret_runs = scalar<std::size_t>(v, key);
    } else if (key == "output") {
      c.output = v.get<std::string>();
    } else {
      throw ParameterError("config: unknown key " + key);
    }
  }
  c.validate();
  return c;
}

std::string ExperimentConfig::to_json() const {
  json j;
  j["model"] = to_string(model);
  auto& a = j["algorithms"] = json::array();
  for (auto x : algorithms) a.push_back(to_string(x));
  j["p_i"] = p_i;
  j["p_a"] = p_a;
  j["p_h"] = p_h;
  j["d_c"] = d_c;
  j["d_h"] = d_h;
  j["n"] = n;
  j["T_E"] = T_E;
  j["T_P"] = T_P;
  j["T_I"] = T_I;
  j["T_H"] = T_H;
  j["replicates"] = replicates;
  j["sg_replicates"] = sg_replicates;
  j["base_seed"] = base_seed;
  if (freeze_epidemic) j["freeze_epidemic"] = *freeze_epidemic;
  j["dmp_epsilon"] = dmp_epsilon;
  j["k1"] = k1;
  j["k2"] = k2;
  j["ret_runs"] = ret_runs;
  // threads and output do not change results and stay out of the metadata.
  return j.dump(2);
}

void ExperimentConfig::validate() const {
  if (replicates < 1) throw ParameterError("config: replicates must be >= 1");
  if (algorithms.empty() && model != Model::kRet) throw ParameterError("config: no algorithm");
  if (p_i.empty() || p_a.empty() || p_h.empty() || d_c.empty() || d_h.empty() || n.empty())
    throw ParameterError("config: every grid axis needs at least one value");
  if (model == Model::kRbTreeDdeNr) {
    for (auto a : algorithms) {
      if (a == Algorithm::kRandomDmp || a == Algorithm::kSg)
        throw ParameterError("config: baselines need a finite network (model hnm_dde)");
    }
  }
  for (const auto& g : grid()) {
    epidemic_params(g).validate();
    if (model == Model::kHnmDde) NetworkParams{g.n, g.d_h, g.d_c}.validate();
    if (g.n == 0) throw ParameterError("config: n must be positive");
  }
  if (dmp_epsilon < 0 || dmp_epsilon >= 1) throw ParameterError("config: dmp_epsilon in [0,1)");
  if (k1 < 1 || k2 < 1) throw ParameterError("config: k1, k2 must be >= 1");
}

std::vector<GridPoint> ExperimentConfig::grid() const {
  std::vector<GridPoint> out;
  for (auto a : p_i)
    for (auto b : p_a)
      for (auto c : p_h)
        for (auto dc : d_c)
          for (auto dh : d_h)
            for (auto nn : n) out.push_back(GridPoint{a, b, c, dc, dh, nn});
  return out;
}

EpidemicParams ExperimentConfig::epidemic_params(const GridPoint& g) const {
  EpidemicParams p;
  p.p_i = g.p_i;
  p.p_a = g.p_a;
  p.p_h = g.p_h;
  p.T_E = T_E;
  p.T_P = T_P;
  p.T_I = T_I;
  p.T_H = T_H;
  return model == Model::kRbTreeDdeNr ? p.no_recovery_variant() : p;
}

bool ExperimentConfig::frozen() const {
  return freeze_epidemic.value_or(model == Model::kRbTreeDdeNr);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.model == Model::kRet) throw ParameterError("run_experiment: ret has no detection runs");
  const auto grid = cfg.grid();
  const std::size_t jobs = grid.size() * cfg.replicates;
  std::vector<std::vector<ExperimentRecord>> slots(jobs);
  parallel_for(jobs, cfg.threads, [&](std::size_t i) {
    const auto gi = i / cfg.replicates;
    slots[i] = run_replicate(cfg, gi, grid[gi], i % cfg.replicates);
  });
  ExperimentResult result;
  for (auto& s : slots) {
    for (auto& r : s) result.records.push_back(r);
  }
  result.summary = summarize(result.records, cfg);
  return result;
}

std::vector<SummaryRow> summarize(const std::vector<ExperimentRecord>& records,
                                  const ExperimentConfig& cfg) {
  const auto grid = cfg.grid();
  std::vector<SummaryRow> out;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    for (Algorithm a : cfg.algorithms) {
      std::size_t k_src = 0, k_first = 0;
      std::vector<double> tests, edges;
      double days = 0;
      for (const auto& r : records) {
        if (r.grid_index != gi || r.algorithm != a) continue;
        k_src += r.success_source;
        k_first += r.success_first_symptomatic;
        tests.push_back(static_cast<double>(r.tests));
        edges.push_back(static_cast<double>(r.edges));
        days += r.days;
      }
      if (tests.empty()) continue;
      SummaryRow row;
      row.grid_index = gi;
      row.point = grid[gi];
      row.algorithm = a;
      row.replicates = tests.size();
      row.success = wilson_interval(k_src, tests.size());
      row.first_symptomatic = wilson_interval(k_first, tests.size());
      row.tests = student_t_interval(tests);
      row.edges = student_t_interval(edges);
      row.days = days / static_cast<double>(tests.size());
      out.push_back(row);
    }
  }
  return out;
}

void write_records_csv(std::ostream& out, const ExperimentResult& result,
                       const ExperimentConfig& cfg) {
  write_header(out, "records", cfg);
  out << "grid_index,p_i,p_a,p_h,d_c,d_h,n,algorithm,replicate,seed,success_source,"
         "success_first_symptomatic,tests,edges,days,path_length,predicate_ls,"
         "predicate_ls_plus\n";
  for (const auto& r : result.records) {
    out << r.grid_index << ',';
    write_point(out, r.point);
    out << ',' << to_string(r.algorithm) << ',' << r.replicate << ',' << r.seed << ','
        << r.success_source << ',' << r.success_first_symptomatic << ',' << r.tests << ','
        << r.edges << ',' << r.days << ',' << r.path_length << ',' << r.predicate_ls << ','
        << r.predicate_ls_plus << '\n';
  }
  if (!out) throw std::ios_base::failure("write failed");
}

void write_summary_csv(std::ostream& out, const ExperimentResult& result,
                       const ExperimentConfig& cfg) {
  write_header(out, "summary", cfg);
  out << "grid_index,p_i,p_a,p_h,d_c,d_h,n,algorithm,replicates,success,success_lo,"
         "success_hi,first_symptomatic,first_symptomatic_lo,first_symptomatic_hi,tests,"
         "tests_lo,tests_hi,edges,edges_lo,edges_hi,days\n";
  for (const auto& r : result.summary) {
    out << r.grid_index << ',';
    write_point(out, r.point);
    out << ',' << to_string(r.algorithm) << ',' << r.replicates << ','
        << interval_cols(r.success) << ',' << interval_cols(r.first_symptomatic) << ','
        << interval_cols(r.tests) << ',' << interval_cols(r.edges) << ',' << fmt(r.days)
        << '\n';
  }
  if (!out) throw std::ios_base::failure("write failed");
}

std::vector<TheoryRow> compare_theory(const ExperimentConfig& cfg_in) {
  auto cfg = cfg_in;
  if (cfg.model == Model::kHnmDde)
    throw ParameterError("compare_theory: model must be rbtree_ddenr or ret");
  const auto grid = cfg.grid();
  std::vector<TheoryRow> rows(grid.size());

  ExperimentResult sim;
  if (cfg.model == Model::kRbTreeDdeNr) {
    cfg.algorithms = {Algorithm::kLs, Algorithm::kLsPlus};
    sim = run_experiment(cfg);
  }

  parallel_for(grid.size(), cfg.model == Model::kRet ? cfg.threads : 1, [&](std::size_t gi) {
    const auto& g = grid[gi];
    TheoryRow& row = rows[gi];
    row.point = g;
    row.p = p_cond(g.p_a, g.p_h);
    const auto rb = RBTreeParams::from(g.d_c, g.d_h);
    RETParams ret;
    ret.d_r = static_cast<double>(g.d_c + g.d_h);
    ret.d = static_cast<double>(g.d_c + g.d_h - 1);
    ret.p_i = rescaled_p_i(g.p_i, cfg.T_E);
    ret.p_a = g.p_a;
    ret.p_h = g.p_h;

    PathLengthDist empirical;
    const double nan = std::nan("");
    row.ls = row.ls_plus = Interval{nan, nan, nan};
    if (cfg.model == Model::kRbTreeDdeNr) {
      std::vector<std::size_t> lengths;
      std::size_t k_ls = 0, k_plus = 0;
      for (const auto& r : sim.records) {
        if (r.grid_index != gi) continue;
        if (r.algorithm == Algorithm::kLs) {
          lengths.push_back(r.path_length);
          k_ls += r.success_source;
        } else {
          k_plus += r.success_source;
        }
      }
      row.replicates = lengths.size();
      empirical = PathLengthDist::empirical(lengths);
      row.ls = wilson_interval(k_ls, lengths.size());
      row.ls_plus = wilson_interval(k_plus, lengths.size());
    } else {
      empirical = stopped_ret_histogram(ret, cfg.ret_runs, point_seed(cfg.base_seed, gi));
      row.replicates = cfg.ret_runs;
    }
    double mean = 0;
    for (std::size_t l = 0; l < empirical.pmf.size(); ++l) mean += l * empirical.pmf[l];
    row.mean_path_length = mean;
    row.ls_theory = ls_success(empirical, row.p);
    row.ls_plus_bound = ls_plus_success_lb(empirical, row.p, rb);
    if (cfg.model == Model::kRbTreeDdeNr) {
      row.ls_in_ci = row.ls.contains(row.ls_theory);
      row.ls_plus_bound_violated =
          row.ls_plus.mean < row.ls_plus_bound - row.ls_plus.half_width();
    }
    row.boe = boe_success(ret.d, ret.p_i, g.p_a, g.p_h);
    const auto approx = ret_path_length_approx(ret);
    row.ls_approx = ls_success(approx, row.p);
    row.ls_plus_approx = ls_plus_success_lb(approx, row.p, rb);
  });
  return rows;
}

void write_theory_csv(std::ostream& out, const std::vector<TheoryRow>& rows,
                      const ExperimentConfig& cfg) {
  write_header(out, "theory", cfg);
  out << "p_i,p_a,p_h,d_c,d_h,n,p,replicates,mean_path_length,ls,ls_lo,ls_hi,ls_theory,"
         "ls_in_ci,ls_plus,ls_plus_lo,ls_plus_hi,ls_plus_bound,ls_plus_bound_violated,boe,"
         "ls_approx,ls_plus_approx\n";
  const bool empirical = cfg.model == Model::kRbTreeDdeNr;
  for (const auto& r : rows) {
    write_point(out, r.point);
    out << ',' << fmt(r.p) << ',' << r.replicates << ',' << fmt(r.mean_path_length) << ','
        << interval_cols(r.ls) << ',' << fmt(r.ls_theory) << ','
        << (empirical ? std::to_string(r.ls_in_ci) : "") << ',' << interval_cols(r.ls_plus)
        << ',' << fmt(r.ls_plus_bound) << ','
        << (empirical ? std::to_string(r.ls_plus_bound_violated) : "") << ',' << fmt(r.boe)
        << ',' << fmt(r.ls_approx) << ',' << fmt(r.ls_plus_approx) << '\n';
  }
  if (!out) throw std::ios_base::failure("write failed");
}

std::vector<std::string> emit_plot_data(std::istream& summary, const std::string& x_key,
                                        const std::string& out_prefix) {
  static const std::vector<std::string> kAxes{"p_i", "p_a", "p_h", "d_c", "d_h", "n"};
  static const std::vector<std::string> kMetrics{"success", "first_symptomatic", "tests",
                                                 "edges"};
  if (std::find(kAxes.begin(), kAxes.end(), x_key) == kAxes.end())
    throw ParameterError("plot-data: x must be one of p_i, p_a, p_h, d_c, d_h, n");

  std::string line;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(summary, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_csv(line);
    if (header.empty()) {
      header = std::move(cells);
      continue;
    }
    if (cells.size() != header.size())
      throw ParameterError("plot-data: malformed summary row: " + line);
    rows.push_back(std::move(cells));
  }
  auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParameterError("plot-data: summary lacks column " + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto algo_col = col("algorithm");
  const auto x_col = col(x_key);

  // Curves are keyed by algorithm plus every axis other than x.
  std::map<std::string, std::vector<const std::vector<std::string>*>> curves;
  std::vector<std::string> order;
  std::map<std::string, std::string> algo_of;
  std::map<std::string, std::set<std::string>> contexts;
  for (const auto& r : rows) {
    std::string ctx;
    for (const auto& a : kAxes) {
      if (a != x_key) ctx += a + "=" + r[col(a)] + ";";
    }
    const auto key = r[algo_col] + "|" + ctx;
    if (!curves.count(key)) order.push_back(key);
    curves[key].push_back(&r);
    algo_of[key] = r[algo_col];
    contexts[r[algo_col]].insert(ctx);
  }

  std::vector<std::string> written;
  std::map<std::string, std::size_t> seen_per_algo;
  for (const auto& key : order) {
    const auto& algo = algo_of[key];
    std::string suffix;
    if (contexts[algo].size() > 1) suffix = "_g" + std::to_string(seen_per_algo[algo]++);
    for (const auto& m : kMetrics) {
      const auto path = out_prefix + "_" + m + "_" + file_safe(algo) + suffix + ".csv";
      std::ofstream f(path);
      if (!f) throw std::ios_base::failure("cannot write " + path);
      f << "x,mean,lo,hi\n";
      const auto mc = col(m), lo = col(m + "_lo"), hi = col(m + "_hi");
      for (const auto* r : curves[key]) {
        f << (*r)[x_col] << ',' << (*r)[mc] << ',' << (*r)[lo] << ',' << (*r)[hi] << '\n';
      }
      if (!f) throw std::ios_base::failure("cannot write " + path);
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace sdct
