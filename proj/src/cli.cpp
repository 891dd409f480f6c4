#include "cdpp/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "cdpp/bruteforce.hpp"
#include "cdpp/dpp.hpp"
#include "cdpp/matroid.hpp"
#include "cdpp/mixed.hpp"
#include "cdpp/parallel.hpp"

namespace cdpp::cli {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct KernelInput {
  int m = 0;
  bool is_factor = false;
  Eigen::MatrixXd dense;   // L or V
  QMatrix exact;           // same data, exact
};

Rational entry_to_rational(const json& v) {
  if (v.is_number_integer()) return Rational(static_cast<long>(v.get<long long>()));
  if (v.is_number_float()) return rational_from_double(v.get<double>());
  if (v.is_string()) {
    auto q = parse_rational(v.get<std::string>());
    require(q.has_value(), ErrorCode::ParseError,
            "cannot parse matrix entry '" + v.get<std::string>() + "'");
    return *q;
  }
  fail(ErrorCode::ParseError, "matrix entries must be numbers or strings");
}

QMatrix parse_matrix(const json& rows) {
  require(rows.is_array() && !rows.empty(), ErrorCode::ParseError,
          "matrix must be a nonempty array of rows");
  const int r = static_cast<int>(rows.size());
  require(rows[0].is_array() && !rows[0].empty(), ErrorCode::ParseError,
          "matrix rows must be nonempty arrays");
  const int c = static_cast<int>(rows[0].size());
  QMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    require(rows[static_cast<std::size_t>(i)].is_array() &&
                static_cast<int>(rows[static_cast<std::size_t>(i)].size()) == c,
            ErrorCode::ParseError, "ragged matrix");
    for (int j = 0; j < c; ++j)
      m(i, j) = entry_to_rational(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  }
  return m;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::ParseError, "cannot open file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    fail(ErrorCode::ParseError, std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return doc;
}

KernelInput load_kernel(const std::string& path) {
  json doc = load_json_file(path);
  KernelInput k;
  if (doc.contains("L")) {
    k.exact = parse_matrix(doc["L"]);
    require(k.exact.rows() == k.exact.cols(), ErrorCode::ParseError,
            "kernel matrix must be square");
    k.is_factor = false;
  } else if (doc.contains("V")) {
    k.exact = parse_matrix(doc["V"]);
    k.is_factor = true;
  } else {
    fail(ErrorCode::ParseError, "kernel file needs an \"L\" or \"V\" matrix");
  }
  k.m = k.exact.rows();
  if (doc.contains("m"))
    require(doc["m"].get<int>() == k.m, ErrorCode::ParseError,
            "declared m does not match the matrix");
  k.dense = k.exact.to_double();
  return k;
}

std::vector<long long> parse_int_list(const std::string& text) {
  std::vector<long long> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    require(!item.empty(), ErrorCode::ParseError, "empty entry in integer list");
    try {
      out.push_back(std::stoll(item));
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "cannot parse integer '" + item + "'");
    }
  }
  require(!out.empty(), ErrorCode::ParseError, "empty integer list");
  return out;
}

counting::PartitionFamily parse_partition(const std::string& parts_text,
                                          const std::string& quotas_text, int m) {
  counting::PartitionFamily fam;
  fam.arity = m;
  std::string part;
  std::istringstream in(parts_text);
  while (std::getline(in, part, '|')) {
    auto elems = parse_int_list(part);
    std::vector<int> zero_based;
    for (long long e : elems) {
      require(e >= 1 && e <= m, ErrorCode::ParseError,
              "partition elements are 1-indexed in [1, m]");
      zero_based.push_back(static_cast<int>(e - 1));
    }
    fam.parts.push_back(std::move(zero_based));
  }
  for (long long q : parse_int_list(quotas_text))
    fam.quotas.push_back(static_cast<int>(q));
  counting::validate_partition(fam);
  return fam;
}

counting::LinearFamily parse_linear_file(const std::string& path, int m) {
  json doc = load_json_file(path);
  require(doc.is_array() && !doc.empty(), ErrorCode::ParseError,
          "linear constraint file must be a nonempty array");
  counting::LinearFamily fam;
  fam.arity = m;
  for (const auto& entry : doc) {
    counting::LinearConstraint con;
    require(entry.contains("c") && entry["c"].is_array(), ErrorCode::ParseError,
            "constraint needs a cost vector \"c\"");
    for (const auto& v : entry["c"]) con.c.push_back(v.get<long long>());
    require(static_cast<int>(con.c.size()) == m, ErrorCode::ParseError,
            "constraint arity does not match the kernel");
    require(entry.contains("K"), ErrorCode::ParseError,
            "constraint needs an admissible set \"K\"");
    const auto& k = entry["K"];
    if (k.contains("set")) {
      std::vector<long long> vals;
      for (const auto& v : k["set"]) vals.push_back(v.get<long long>());
      con.K = counting::IntSet::of(std::move(vals));
    } else if (k.contains("interval")) {
      require(k["interval"].is_array() && k["interval"].size() == 2,
              ErrorCode::ParseError, "interval needs [lo, hi]");
      con.K = counting::IntSet::interval(k["interval"][0].get<long long>(),
                                         k["interval"][1].get<long long>());
    } else {
      fail(ErrorCode::ParseError, "K must contain \"set\" or \"interval\"");
    }
    fam.constraints.push_back(std::move(con));
  }
  return fam;
}

Backend backend_from(const std::string& flag) {
  std::string value = flag;
  if (value.empty()) {
    const char* env = std::getenv("CDPP_BACKEND");
    value = env ? env : "float";
  }
  if (value == "float") return Backend::Float;
  if (value == "exact") return Backend::Exact;
  fail(ErrorCode::ParseError, "backend must be 'float' or 'exact'");
}

struct ConstraintFlags {
  std::string budget_cost, equality_cost, partition, quotas, linear_file;
  long long budget = 0, target = 0;
  bool has_budget = false, has_target = false;

  counting::FamilySpec build(int m) const {
    int kinds = 0;
    if (!budget_cost.empty()) ++kinds;
    if (!equality_cost.empty()) ++kinds;
    if (!partition.empty()) ++kinds;
    if (!linear_file.empty()) ++kinds;
    require(kinds <= 1, ErrorCode::ParseError,
            "give at most one constraint kind");
    if (!budget_cost.empty()) {
      require(has_budget, ErrorCode::ParseError, "--budget-cost needs --budget");
      counting::BudgetConstraint b;
      b.c = parse_int_list(budget_cost);
      require(static_cast<int>(b.c.size()) == m, ErrorCode::ParseError,
              "cost vector arity does not match the kernel");
      b.C = budget;
      return b;
    }
    if (!equality_cost.empty()) {
      require(has_target, ErrorCode::ParseError, "--equality-cost needs --target");
      counting::LinearFamily fam;
      fam.arity = m;
      counting::LinearConstraint con;
      con.c = parse_int_list(equality_cost);
      require(static_cast<int>(con.c.size()) == m, ErrorCode::ParseError,
              "cost vector arity does not match the kernel");
      con.K = counting::IntSet::singleton(target);
      fam.constraints.push_back(std::move(con));
      return fam;
    }
    if (!partition.empty()) {
      require(!quotas.empty(), ErrorCode::ParseError, "--partition needs --quotas");
      return parse_partition(partition, quotas, m);
    }
    if (!linear_file.empty()) return parse_linear_file(linear_file, m);
    return std::monostate{};
  }
};

void add_constraint_flags(CLI::App* cmd, ConstraintFlags& flags) {
  cmd->add_option("--budget-cost", flags.budget_cost,
                  "comma-separated integer costs");
  auto* b = cmd->add_option("--budget", flags.budget, "budget C (cost <= C)");
  cmd->add_option("--equality-cost", flags.equality_cost,
                  "comma-separated integer costs");
  auto* t = cmd->add_option("--target", flags.target, "target C (cost == C)");
  cmd->add_option("--partition", flags.partition,
                  "parts as 1-indexed lists, e.g. \"1,2|3,4\"");
  cmd->add_option("--quotas", flags.quotas, "comma-separated quotas per part");
  cmd->add_option("--linear", flags.linear_file,
                  "JSON file with [{\"c\":[...],\"K\":{...}}, ...]");
  b->each([&flags](const std::string&) { flags.has_budget = true; });
  t->each([&flags](const std::string&) { flags.has_target = true; });
}

json samples_to_json(const std::vector<sampling::SampleOutcome>& outcomes) {
  json arr = json::array();
  for (const auto& s : outcomes) {
    json one = json::array();
    for (int e : s.subset) one.push_back(e + 1);  // 1-indexed
    arr.push_back(std::move(one));
  }
  return arr;
}

struct CommonFlags {
  std::string backend;
  std::uint64_t seed = 0;
  int n_samples = 1;
  int threads = 0;
  bool timings = false;
};

dpp::ConstrainedDPP make_dpp(const KernelInput& k,
                             const counting::FamilySpec& family) {
  return k.is_factor ? dpp::ConstrainedDPP::from_factor_exact(k.exact, family)
                     : dpp::ConstrainedDPP::from_kernel_exact(k.exact, family);
}

json run_count(const KernelInput& k, const counting::FamilySpec& family,
               Backend backend) {
  json out;
  auto d = make_dpp(k, family);
  if (backend == Backend::Exact) {
    out["count"] = to_fraction_string(d.count_exact().value);
  } else {
    out["count"] = format_double(d.count().value);
  }
  return out;
}

json run_sample(const KernelInput& k, const counting::FamilySpec& family,
                Backend backend, std::uint64_t seed, int n) {
  auto d = make_dpp(k, family);
  auto outcomes = backend == Backend::Exact ? d.sample_exact(seed, n)
                                            : d.sample(seed, n);
  json out;
  out["samples"] = samples_to_json(outcomes);
  return out;
}

int run(const std::vector<std::string>& args, std::string& out_json) {
  CLI::App app{"constrained determinantal counting and sampling"};
  app.require_subcommand(1);

  CommonFlags common;
  app.add_option("--threads", common.threads, "cap worker threads");

  // count
  auto* count_cmd = app.add_subcommand("count", "constrained kernel mass");
  std::string kernel_path;
  ConstraintFlags count_flags;
  count_cmd->add_option("--kernel", kernel_path, "kernel JSON file")->required();
  add_constraint_flags(count_cmd, count_flags);
  count_cmd->add_option("--backend", common.backend, "float | exact");
  count_cmd->add_flag("--timings", common.timings, "include wall_time_ms");

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "constrained kernel sampling");
  std::string sample_kernel_path;
  ConstraintFlags sample_flags;
  sample_cmd->add_option("--kernel", sample_kernel_path, "kernel JSON file")
      ->required();
  add_constraint_flags(sample_cmd, sample_flags);
  sample_cmd->add_option("--backend", common.backend, "float | exact");
  sample_cmd->add_option("--seed", common.seed, "64-bit seed");
  sample_cmd->add_option("--n", common.n_samples, "number of draws");
  sample_cmd->add_flag("--timings", common.timings, "include wall_time_ms");

  // matroid
  auto* matroid_cmd = app.add_subcommand("matroid", "regular-matroid bases");
  std::string graph_path, tu_path;
  std::string matroid_cost;
  long long matroid_budget = 0;
  bool matroid_has_budget = false;
  auto* mcount = matroid_cmd->add_subcommand("count", "count feasible bases");
  auto* msample = matroid_cmd->add_subcommand("sample", "sample a feasible basis");
  auto* mpm = matroid_cmd->add_subcommand("pm", "perfect matchings via the spanning-tree reduction");
  matroid_cmd->require_subcommand(1);
  for (CLI::App* sub : {mcount, msample, mpm}) {
    sub->add_option("--graph", graph_path, "edge-list file (u v [cost])");
    sub->add_option("--tu", tu_path, "JSON file with {\"A\": [[...]]}");
    sub->add_option("--backend", common.backend, "float | exact");
    sub->add_flag("--timings", common.timings, "include wall_time_ms");
  }
  mcount->add_option("--cost", matroid_cost, "comma-separated edge costs");
  msample->add_option("--cost", matroid_cost, "comma-separated edge costs");
  auto* mb1 = mcount->add_option("--budget", matroid_budget, "budget C");
  auto* mb2 = msample->add_option("--budget", matroid_budget, "budget C");
  mb1->each([&](const std::string&) { matroid_has_budget = true; });
  mb2->each([&](const std::string&) { matroid_has_budget = true; });
  msample->add_option("--seed", common.seed, "64-bit seed");
  msample->add_option("--n", common.n_samples, "number of draws");

  // mixed
  auto* mixed_cmd = app.add_subcommand("mixed", "mixed characteristic workflows");
  std::string matrices_path;
  int kmax = -1;
  auto* mchar = mixed_cmd->add_subcommand("charpoly", "top coefficients");
  auto* mdisc = mixed_cmd->add_subcommand("discriminant", "mixed discriminant");
  mixed_cmd->require_subcommand(1);
  for (CLI::App* sub : {mchar, mdisc}) {
    sub->add_option("--matrices", matrices_path, "JSON file with {\"matrices\": [...]}")
        ->required();
    sub->add_flag("--timings", common.timings, "include wall_time_ms");
  }
  mchar->add_option("--kmax", kmax, "compute coefficients of x^{d-k}, k <= kmax");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    json err;
    err["error"] = "ParseError";
    err["message"] = e.what();
    out_json = err.dump(2) + "\n";
    return 1;
  }

  if (common.threads > 0) set_max_threads(common.threads);
  auto started = std::chrono::steady_clock::now();
  json out;

  if (count_cmd->parsed()) {
    Backend backend = backend_from(common.backend);
    KernelInput k = load_kernel(kernel_path);
    out = run_count(k, count_flags.build(k.m), backend);
    out["backend"] = backend_name(backend);
  } else if (sample_cmd->parsed()) {
    Backend backend = backend_from(common.backend);
    KernelInput k = load_kernel(sample_kernel_path);
    out = run_sample(k, sample_flags.build(k.m), backend, common.seed,
                     common.n_samples);
    out["backend"] = backend_name(backend);
    out["seed"] = common.seed;
  } else if (matroid_cmd->parsed()) {
    Backend backend = backend_from(common.backend);
    matroid::MatroidOptions opts;
    opts.backend = backend;
    Graph graph;
    matroid::TUMatrix rep;
    if (!graph_path.empty()) {
      graph = parse_edge_list_file(graph_path);
      if (!mpm->parsed()) rep = matroid::graphic_representation(graph);
    } else if (!tu_path.empty()) {
      require(!mpm->parsed(), ErrorCode::ParseError,
              "the matching reduction needs --graph");
      json doc = load_json_file(tu_path);
      require(doc.contains("A"), ErrorCode::ParseError,
              "TU file needs an \"A\" matrix");
      QMatrix a = parse_matrix(doc["A"]);
      Eigen::MatrixXi ai(a.rows(), a.cols());
      for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
          require(a(i, j).get_den() == 1, ErrorCode::ParseError,
                  "TU entries must be integers");
          ai(i, j) = static_cast<int>(a(i, j).get_num().get_si());
        }
      rep = matroid::make_tu(ai);
    } else {
      fail(ErrorCode::ParseError, "matroid commands need --graph or --tu");
    }
    std::vector<long long> costs;
    if (!matroid_cost.empty()) {
      costs = parse_int_list(matroid_cost);
    } else if (!graph_path.empty() && graph.has_costs()) {
      costs = graph.costs;
    } else {
      costs.assign(static_cast<std::size_t>(rep.ground_size()), 0);
    }
    if (!mpm->parsed())
      require(static_cast<int>(costs.size()) == rep.ground_size(),
              ErrorCode::ParseError, "cost vector arity mismatch");
    long long budget = matroid_has_budget
                           ? matroid_budget
                           : std::numeric_limits<long long>::max() / 4;
    if (mcount->parsed()) {
      Integer n = matroid::count_bases_budgeted(
          rep, std::span<const long long>(costs), budget, opts);
      out["count"] = n.get_str();
      out["backend"] = backend_name(backend);
    } else if (msample->parsed()) {
      std::vector<sampling::SampleOutcome> outcomes;
      for (int i = 0; i < common.n_samples; ++i) {
        sampling::SampleOutcome one;
        one.subset = matroid::sample_basis_budgeted(
            rep, std::span<const long long>(costs), budget,
            mix_seed(common.seed, static_cast<std::uint64_t>(i)), opts);
        outcomes.push_back(std::move(one));
      }
      out["samples"] = samples_to_json(outcomes);
      out["backend"] = backend_name(backend);
      out["seed"] = common.seed;
    } else {
      Integer pm = matroid::count_pm_via_reduction(graph, opts);
      out["count"] = pm.get_str();
      out["backend"] = backend_name(backend);
    }
  } else if (mixed_cmd->parsed()) {
    json doc = load_json_file(matrices_path);
    require(doc.contains("matrices") && doc["matrices"].is_array() &&
                !doc["matrices"].empty(),
            ErrorCode::ParseError, "matrices file needs a nonempty array");
    std::vector<Eigen::MatrixXd> mats;
    for (const auto& entry : doc["matrices"])
      mats.push_back(parse_matrix(entry).to_double());
    auto tuple = mixed::make_tuple(std::move(mats));
    if (mchar->parsed()) {
      int k = kmax < 0 ? tuple.dim : kmax;
      auto coeffs = mixed::mixed_char_top_coeffs(tuple, k);
      json arr = json::array();
      for (double c : coeffs.coeffs) arr.push_back(format_double(c));
      out["dim"] = tuple.dim;
      out["coeffs"] = arr;
    } else {
      double v = mixed::mixed_discriminant_bruteforce(tuple);
      out["mixed_discriminant"] = format_double(v);
    }
  }

  if (common.timings) {
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
    out["wall_time_ms"] = static_cast<long long>(elapsed);
  }
  out_json = out.dump(2) + "\n";
  return 0;
}

}  // namespace

DispatchResult dispatch(const std::vector<std::string>& args) {
  DispatchResult result;
  try {
    result.exit_code = run(args, result.json);
  } catch (const Error& e) {
    json err;
    err["error"] = error_code_name(e.code());
    err["message"] = e.what();
    result.json = err.dump(2) + "\n";
    result.exit_code = 1;
  } catch (const std::exception& e) {
    json err;
    err["error"] = "ParseError";
    err["message"] = e.what();
    result.json = err.dump(2) + "\n";
    result.exit_code = 1;
  }
  return result;
}

}  // namespace cdpp::cli
