#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cdpp/dpp.hpp"
#include "cdpp/matroid.hpp"
#include "cdpp/mixed.hpp"
#include "cdpp/parallel.hpp"

namespace py = pybind11;
using namespace cdpp;

namespace {

Backend backend_of(const std::string& name) {
  if (name == "float") return Backend::Float;
  if (name == "exact") return Backend::Exact;
  throw py::value_error("backend must be 'float' or 'exact'");
}

counting::FamilySpec family_of(const py::object& constraint, int m) {
  if (constraint.is_none()) return std::monostate{};
  py::dict d = constraint.cast<py::dict>();
  std::string kind = d["kind"].cast<std::string>();
  if (kind == "budget") {
    counting::BudgetConstraint b;
    b.c = d["costs"].cast<std::vector<long long>>();
    b.C = d["budget"].cast<long long>();
    return b;
  }
  if (kind == "equality") {
    counting::LinearFamily fam;
    fam.arity = m;
    counting::LinearConstraint con;
    con.c = d["costs"].cast<std::vector<long long>>();
    con.K = counting::IntSet::singleton(d["target"].cast<long long>());
    fam.constraints.push_back(std::move(con));
    return fam;
  }
  if (kind == "partition") {
    counting::PartitionFamily fam;
    fam.arity = m;
    for (const auto& part : d["parts"].cast<std::vector<std::vector<int>>>())
      fam.parts.push_back(part);
    fam.quotas = d["quotas"].cast<std::vector<int>>();
    return fam;
  }
  if (kind == "linear") {
    counting::LinearFamily fam;
    fam.arity = m;
    for (const auto& item :
         d["constraints"].cast<std::vector<py::dict>>()) {
      counting::LinearConstraint con;
      con.c = item["c"].cast<std::vector<long long>>();
      if (item.contains("set")) {
        con.K = counting::IntSet::of(item["set"].cast<std::vector<long long>>());
      } else {
        auto iv = item["interval"].cast<std::pair<long long, long long>>();
        con.K = counting::IntSet::interval(iv.first, iv.second);
      }
      fam.constraints.push_back(std::move(con));
    }
    return fam;
  }
  throw py::value_error("unknown constraint kind: " + kind);
}

matroid::TUMatrix tu_from_graph(const std::vector<std::pair<int, int>>& edges,
                                int n) {
  Graph g;
  g.n = n;
  for (auto [u, v] : edges) g.edges.emplace_back(u - 1, v - 1);  // 1-indexed in
  return matroid::graphic_representation(g);
}

}  // namespace

PYBIND11_MODULE(_cdpp, m) {
  m.doc() = "exact counting and sampling for constrained determinantal "
            "measures and regular-matroid bases";

  py::register_exception<Error>(m, "EngineError");

  py::class_<dpp::ConstrainedDPP>(m, "DPP")
      .def(py::init([](const Eigen::MatrixXd& l, const py::object& constraint) {
             return dpp::ConstrainedDPP::from_kernel(
                 genpoly::Kernel{l}, family_of(constraint, static_cast<int>(l.rows())));
           }),
           py::arg("kernel"), py::arg("constraint") = py::none())
      .def_static(
          "from_factor",
          [](const Eigen::MatrixXd& v, const py::object& constraint) {
            return dpp::ConstrainedDPP::from_factor(
                genpoly::FeatureMatrix{v},
                family_of(constraint, static_cast<int>(v.rows())));
          },
          py::arg("factor"), py::arg("constraint") = py::none())
      .def_property_readonly("ground_size", &dpp::ConstrainedDPP::ground_size)
      .def(
          "count",
          [](const dpp::ConstrainedDPP& d, const std::string& backend) -> py::object {
            if (backend_of(backend) == Backend::Exact)
              return py::str(to_fraction_string(d.count_exact().value));
            return py::float_(d.count().value);
          },
          py::arg("backend") = "float",
          "Constrained total mass; the exact backend returns a fraction string.")
      .def(
          "sample",
          [](const dpp::ConstrainedDPP& d, int n, std::uint64_t seed,
             const std::string& backend) {
            auto outcomes = backend_of(backend) == Backend::Exact
                                ? d.sample_exact(seed, n)
                                : d.sample(seed, n);
            std::vector<std::vector<int>> out;
            for (const auto& s : outcomes) {
              std::vector<int> one;
              for (int e : s.subset) one.push_back(e + 1);
              out.push_back(std::move(one));
            }
            return out;
          },
          py::arg("n") = 1, py::arg("seed") = 0, py::arg("backend") = "float",
          "Exact draws; returns 1-indexed element lists.");

  m.def(
      "validate_psd",
      [](const Eigen::MatrixXd& l) {
        auto report = dpp::validate_psd(l);
        py::dict out;
        out["ok"] = report.ok;
        out["min_eigenvalue"] = report.min_eigenvalue;
        out["symmetry_defect"] = report.symmetry_defect;
        out["message"] = report.message;
        return out;
      },
      py::arg("kernel"));

  m.def(
      "count_spanning_trees",
      [](const std::vector<std::pair<int, int>>& edges, int n,
         const py::object& costs, const py::object& budget,
         const std::string& backend) {
        auto rep = tu_from_graph(edges, n);
        std::vector<long long> c =
            costs.is_none() ? std::vector<long long>(edges.size(), 0)
                            : costs.cast<std::vector<long long>>();
        long long C = budget.is_none()
                          ? std::numeric_limits<long long>::max() / 4
                          : budget.cast<long long>();
        matroid::MatroidOptions opts;
        opts.backend = backend_of(backend);
        return matroid::count_bases_budgeted(rep, c, C, opts).get_str();
      },
      py::arg("edges"), py::arg("n"), py::arg("costs") = py::none(),
      py::arg("budget") = py::none(), py::arg("backend") = "float",
      "Number of spanning trees (1-indexed edges) within the budget.");

  m.def(
      "sample_spanning_tree",
      [](const std::vector<std::pair<int, int>>& edges, int n,
         const py::object& costs, const py::object& budget, std::uint64_t seed) {
        auto rep = tu_from_graph(edges, n);
        std::vector<long long> c =
            costs.is_none() ? std::vector<long long>(edges.size(), 0)
                            : costs.cast<std::vector<long long>>();
        long long C = budget.is_none()
                          ? std::numeric_limits<long long>::max() / 4
                          : budget.cast<long long>();
        auto basis = matroid::sample_basis_budgeted(rep, c, C, seed);
        for (int& e : basis) ++e;  // 1-indexed edge ids
        return basis;
      },
      py::arg("edges"), py::arg("n"), py::arg("costs") = py::none(),
      py::arg("budget") = py::none(), py::arg("seed") = 0);

  m.def(
      "count_perfect_matchings",
      [](const std::vector<std::pair<int, int>>& edges, int n) {
        Graph g;
        g.n = n;
        for (auto [u, v] : edges) g.edges.emplace_back(u - 1, v - 1);
        return matroid::count_pm_via_reduction(g).get_str();
      },
      py::arg("edges"), py::arg("n"),
      "Perfect matchings via the budgeted spanning-tree reduction.");

  m.def(
      "mixed_discriminant",
      [](const std::vector<Eigen::MatrixXd>& mats, const std::string& method) {
        auto t = mixed::make_tuple(mats);
        if (method == "ecount") return mixed::mixed_disc_via_ecount(t);
        if (method == "bruteforce") return mixed::mixed_discriminant_bruteforce(t);
        throw py::value_error("method must be 'ecount' or 'bruteforce'");
      },
      py::arg("matrices"), py::arg("method") = "ecount");

  m.def(
      "mixed_char_coeffs",
      [](const std::vector<Eigen::MatrixXd>& mats, int k_max) {
        auto t = mixed::make_tuple(mats);
        if (k_max < 0) k_max = t.dim;
        return mixed::mixed_char_top_coeffs(t, k_max).coeffs;
      },
      py::arg("matrices"), py::arg("k_max") = -1,
      "Coefficients of x^{d-k} for k = 0..k_max.");

  m.def("set_max_threads", &set_max_threads, py::arg("n"));
}
