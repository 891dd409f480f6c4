#include "cdpp/counting.hpp"

namespace cdpp::counting {

void validate_partition(const PartitionFamily& fam) {
  const int m = fam.arity;
  require(!fam.parts.empty(), ErrorCode::ParseError, "partition has no parts");
  require(fam.parts.size() == fam.quotas.size(), ErrorCode::ParseError,
          "one quota per part is required");
  std::vector<char> seen(static_cast<std::size_t>(m), 0);
  for (std::size_t j = 0; j < fam.parts.size(); ++j) {
    const auto& part = fam.parts[j];
    require(!part.empty(), ErrorCode::ParseError, "empty partition part");
    for (int i : part) {
      require(i >= 0 && i < m, ErrorCode::ParseError,
              "partition element out of range");
      require(!seen[static_cast<std::size_t>(i)], ErrorCode::ParseError,
              "partition parts are not disjoint");
      seen[static_cast<std::size_t>(i)] = 1;
    }
    require(fam.quotas[j] >= 0 &&
                fam.quotas[j] <= static_cast<int>(part.size()),
            ErrorCode::ParseError, "quota out of range for its part");
  }
  for (int i = 0; i < m; ++i)
    require(seen[static_cast<std::size_t>(i)], ErrorCode::ParseError,
            "partition does not cover the ground set");
}

LinearFamily to_linear(const BudgetConstraint& b) {
  LinearFamily fam;
  fam.arity = static_cast<int>(b.c.size());
  LinearConstraint con;
  con.c = b.c;
  // Reachable costs live in [-sum |c_i|, sum |c_i|]; clip the half line there.
  long long s = detail::l1_norm(b.c);
  con.K = IntSet::interval(-s, std::min(b.C, s));
  fam.constraints.push_back(std::move(con));
  return fam;
}

LinearFamily to_linear(const PartitionFamily& fam) {
  validate_partition(fam);
  LinearFamily lin;
  lin.arity = fam.arity;
  for (std::size_t j = 0; j < fam.parts.size(); ++j) {
    LinearConstraint con;
    con.c.assign(static_cast<std::size_t>(fam.arity), 0);
    for (int i : fam.parts[j]) con.c[static_cast<std::size_t>(i)] = 1;
    con.K = IntSet::singleton(fam.quotas[j]);
    lin.constraints.push_back(std::move(con));
  }
  return lin;
}

LinearFamily to_linear(const FamilySpec& fam, int arity) {
  if (std::holds_alternative<std::monostate>(fam)) {
    LinearFamily lin;
    lin.arity = arity;
    return lin;
  }
  if (const auto* b = std::get_if<BudgetConstraint>(&fam)) {
    require(static_cast<int>(b->c.size()) == arity, ErrorCode::ArityMismatch,
            "budget constraint arity mismatch");
    return to_linear(*b);
  }
  if (const auto* l = std::get_if<LinearFamily>(&fam)) {
    require(l->arity == arity, ErrorCode::ArityMismatch,
            "linear family arity mismatch");
    return *l;
  }
  const auto& p = std::get<PartitionFamily>(fam);
  require(p.arity == arity, ErrorCode::ArityMismatch,
          "partition family arity mismatch");
  return to_linear(p);
}

}  // namespace cdpp::counting
