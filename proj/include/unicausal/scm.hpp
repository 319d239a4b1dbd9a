#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "unicausal/causal.hpp"
#include "unicausal/error.hpp"

namespace unicausal {

inline constexpr double probability_tolerance = 1e-9;

/// A discrete Bayesian network read as a structural causal model.
///
/// `tables[v][row][value]` is P(v = value | parents = row), where `row` is the
/// mixed-radix code of the parent values in `dag.parents(v)` order with the
/// first parent most significant.
class DiscreteScm {
 public:
  DiscreteScm() = default;

  /// Validates shapes and row sums; throws `Error`.
  static DiscreteScm create(CausalDag dag, std::vector<std::size_t> cardinalities,
                            std::vector<std::vector<std::vector<double>>> tables);

  const CausalDag& dag() const noexcept { return dag_; }
  std::size_t cardinality(std::size_t v) const { return card_.at(v); }
  const std::vector<std::size_t>& cardinalities() const noexcept { return card_; }
  const std::vector<std::vector<double>>& table(std::size_t v) const { return tables_.at(v); }
  /// Parentless variables.
  std::vector<std::size_t> exogenous() const;

  /// Row of `v`'s table selected by a full assignment.
  std::size_t row_index(std::size_t v, const std::vector<std::size_t>& assignment) const;
  double factor(std::size_t v, const std::vector<std::size_t>& assignment) const {
    return tables_[v][row_index(v, assignment)][assignment[v]];
  }

 private:
  CausalDag dag_;
  std::vector<std::size_t> card_;
  std::vector<std::vector<std::vector<double>>> tables_;
};

/// Dense distribution over the product of the listed variables; the first
/// variable is the most significant digit of the flat index.
class JointTable {
 public:
  JointTable() = default;
  JointTable(std::vector<std::string> variables, std::vector<std::size_t> cardinalities, std::vector<double> probs);

  const std::vector<std::string>& variables() const noexcept { return variables_; }
  const std::vector<std::size_t>& cardinalities() const noexcept { return card_; }
  const std::vector<double>& probabilities() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  std::size_t position(const std::string& variable) const;

  std::vector<std::size_t> decode(std::size_t flat) const;
  std::size_t encode(const std::vector<std::size_t>& assignment) const;
  double at(const std::vector<std::size_t>& assignment) const { return probs_.at(encode(assignment)); }
  double total() const;

  /// Marginal over `keep`, in the given order.
  JointTable marginal(const std::vector<std::string>& keep) const;

 private:
  std::vector<std::string> variables_;
  std::vector<std::size_t> card_;
  std::vector<double> probs_;
};

JointTable joint_distribution(const DiscreteScm& m, const Limits& limits = {});

/// Truncated factorization; the table ranges over the non-intervened variables.
JointTable do_distribution(const DiscreteScm& m, const std::map<std::string, std::size_t>& assignment,
                           const Limits& limits = {});

struct CiResult {
  bool holds = false;
  double max_deviation = 0.0;
};

/// max |P(x | y, z) - P(x | z)| over assignments with P(y, z) > 0.
CiResult ci_check(const JointTable& j, const std::vector<std::string>& x, const std::vector<std::string>& y,
                  const std::vector<std::string>& z);

/// sum_z P(Y | X = x, Z = z) P(Z = z). Throws naming the stratum on a positivity violation.
std::vector<double> adjustment_estimate(const DiscreteScm& m, const std::string& x, std::size_t x_value,
                                        const std::string& y, const std::vector<std::string>& z,
                                        const Limits& limits = {});

/// E[Y | do(X=1)] - E[Y | do(X=0)]. `y_values` maps codes of Y to numbers;
/// the codes themselves are used when it is empty.
double ate_exact(const DiscreteScm& m, const std::string& x, const std::string& y,
                 const std::vector<double>& y_values = {}, const Limits& limits = {});

struct ConfoundingReport {
  bool confounded = false;
  double max_gap = 0.0;
  /// Treatment values with P(X = x) = 0, excluded from the comparison.
  std::vector<std::size_t> skipped;
};

ConfoundingReport is_confounded(const DiscreteScm& m, const std::string& x, const std::string& y,
                                const Limits& limits = {});

struct Dataset {
  std::vector<std::string> columns;
  std::vector<std::vector<std::size_t>> rows;
  std::uint64_t seed = 0;

  std::size_t column(const std::string& name) const;
};

/// Ancestral sampling with a 64-bit Mersenne twister.
Dataset sample(const DiscreteScm& m, std::size_t n, std::uint64_t seed);

void write_csv(std::ostream& out, const Dataset& d);
Dataset read_csv(std::istream& in);

/// Known probability of treatment = 1 for each covariate stratum.
struct PropensityModel {
  std::vector<std::string> covariates;
  std::map<std::vector<std::size_t>, double> strata;
};

/// The treatment CPT read as a propensity over the treatment's parents.
PropensityModel true_propensity(const DiscreteScm& m, const std::string& treatment);

double ht_estimate(const Dataset& d, const std::string& treatment, const std::string& outcome,
                   const PropensityModel& propensity);

/// CPT rows drawn uniformly from the simplex with every entry at least `floor`.
DiscreteScm random_scm(const CausalDag& dag, const std::vector<std::size_t>& cardinalities, std::uint64_t seed,
                       double floor = 0.05);

}  // namespace unicausal
