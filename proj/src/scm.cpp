#include "unicausal/scm.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

namespace unicausal {

namespace {

std::size_t product(const std::vector<std::size_t>& card) {
  std::size_t n = 1;
  for (std::size_t c : card) n = detail::sat_mul(n, c);
  return n;
}

// Advances a mixed-radix counter (last digit fastest); false after the last value.
bool advance(std::vector<std::size_t>& digits, const std::vector<std::size_t>& radix) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < radix[i]) return true;
    digits[i] = 0;
  }
  return false;
}

std::string format_value(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

DiscreteScm DiscreteScm::create(CausalDag dag, std::vector<std::size_t> cardinalities,
                                std::vector<std::vector<std::vector<double>>> tables) {
  const std::size_t n = dag.size();
  if (cardinalities.size() != n) throw Error("cardinalities do not cover the variables");
  if (tables.size() != n) throw Error("conditional tables do not cover the variables");
  for (std::size_t v = 0; v < n; ++v) {
    if (cardinalities[v] == 0) throw Error("variable '" + dag.name(v) + "' has cardinality 0");
  }
  for (std::size_t v = 0; v < n; ++v) {
    const std::string& name = dag.name(v);
    std::size_t rows = 1;
    for (std::size_t p : dag.parents(v)) rows = detail::sat_mul(rows, cardinalities[p]);
    if (tables[v].size() != rows) {
      throw Error("table of '" + name + "' has " + std::to_string(tables[v].size()) + " rows, expected " +
                  std::to_string(rows));
    }
    for (std::size_t r = 0; r < rows; ++r) {
      const auto& row = tables[v][r];
      if (row.size() != cardinalities[v]) throw Error("row " + std::to_string(r) + " of '" + name + "' has wrong width");
      double sum = 0.0;
      for (double p : row) {
        if (!(p >= 0.0)) throw Error("row " + std::to_string(r) + " of '" + name + "' has a negative entry");
        sum += p;
      }
      if (std::abs(sum - 1.0) > probability_tolerance) {
        throw Error("row " + std::to_string(r) + " of '" + name + "' sums to " + format_value(sum));
      }
    }
  }
  DiscreteScm m;
  m.dag_ = std::move(dag);
  m.card_ = std::move(cardinalities);
  m.tables_ = std::move(tables);
  return m;
}

std::vector<std::size_t> DiscreteScm::exogenous() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < dag_.size(); ++v) {
    if (dag_.parents(v).empty()) out.push_back(v);
  }
  return out;
}

std::size_t DiscreteScm::row_index(std::size_t v, const std::vector<std::size_t>& assignment) const {
  std::size_t r = 0;
  for (std::size_t p : dag_.parents(v)) r = r * card_[p] + assignment[p];
  return r;
}

JointTable::JointTable(std::vector<std::string> variables, std::vector<std::size_t> cardinalities,
                       std::vector<double> probs)
    : variables_(std::move(variables)), card_(std::move(cardinalities)), probs_(std::move(probs)) {
  if (variables_.size() != card_.size()) throw Error("joint table shape mismatch");
  if (probs_.size() != product(card_)) throw Error("joint table has the wrong number of entries");
}

std::size_t JointTable::position(const std::string& variable) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i] == variable) return i;
  }
  throw Error("variable '" + variable + "' is not in the table");
}

std::vector<std::size_t> JointTable::decode(std::size_t flat) const {
  std::vector<std::size_t> a(card_.size());
  for (std::size_t i = card_.size(); i-- > 0;) {
    a[i] = flat % card_[i];
    flat /= card_[i];
  }
  return a;
}

std::size_t JointTable::encode(const std::vector<std::size_t>& assignment) const {
  if (assignment.size() != card_.size()) throw Error("assignment has the wrong length");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < card_.size(); ++i) {
    if (assignment[i] >= card_[i]) throw Error("value out of range for '" + variables_[i] + "'");
    flat = flat * card_[i] + assignment[i];
  }
  return flat;
}

double JointTable::total() const {
  double s = 0.0;
  for (double p : probs_) s += p;
  return s;
}

JointTable JointTable::marginal(const std::vector<std::string>& keep) const {
  std::vector<std::size_t> pos;
  std::vector<std::size_t> card;
  std::set<std::size_t> seen;
  for (const auto& k : keep) {
    pos.push_back(position(k));
    if (!seen.insert(pos.back()).second) throw Error("variable '" + k + "' listed twice");
    card.push_back(card_[pos.back()]);
  }
  JointTable out(keep, card, std::vector<double>(product(card), 0.0));
  std::vector<std::size_t> sub(pos.size());
  for (std::size_t flat = 0; flat < probs_.size(); ++flat) {
    const auto a = decode(flat);
    for (std::size_t i = 0; i < pos.size(); ++i) sub[i] = a[pos[i]];
    out.probs_[out.encode(sub)] += probs_[flat];
  }
  return out;
}

JointTable joint_distribution(const DiscreteScm& m, const Limits& limits) {
  return do_distribution(m, {}, limits);
}

JointTable do_distribution(const DiscreteScm& m, const std::map<std::string, std::size_t>& assignment,
                           const Limits& limits) {
  const auto& g = m.dag();
  std::vector<std::size_t> full(g.size(), 0);
  std::vector<bool> clamped(g.size(), false);
  for (const auto& [name, value] : assignment) {
    const std::size_t v = g.index(name);
    if (value >= m.cardinality(v)) {
      throw Error("value " + std::to_string(value) + " out of range for '" + name + "'");
    }
    clamped[v] = true;
    full[v] = value;
  }
  std::vector<std::size_t> free_vars;
  std::vector<std::string> names;
  std::vector<std::size_t> card;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (clamped[v]) continue;
    free_vars.push_back(v);
    names.push_back(g.name(v));
    card.push_back(m.cardinality(v));
  }
  const std::size_t size = product(card);
  detail::guard("max_assignments", limits.max_assignments, size);

  std::vector<double> probs;
  probs.reserve(size);
  std::vector<std::size_t> digits(free_vars.size(), 0);
  do {
    for (std::size_t i = 0; i < free_vars.size(); ++i) full[free_vars[i]] = digits[i];
    double p = 1.0;
    for (std::size_t v : free_vars) p *= m.factor(v, full);
    probs.push_back(p);
  } while (advance(digits, card));
  return JointTable(std::move(names), std::move(card), std::move(probs));
}

namespace {

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

void require_disjoint(const std::vector<std::vector<std::string>>& sets) {
  std::set<std::string> seen;
  for (const auto& s : sets) {
    for (const auto& v : s) {
      if (!seen.insert(v).second) throw Error("variable sets overlap at '" + v + "'");
    }
  }
}

std::vector<std::size_t> concat_values(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<std::size_t> slice(const std::vector<std::size_t>& a, std::size_t from, std::size_t count) {
  return {a.begin() + static_cast<std::ptrdiff_t>(from), a.begin() + static_cast<std::ptrdiff_t>(from + count)};
}

std::string describe_stratum(const std::vector<std::string>& names, const std::vector<std::size_t>& values) {
  std::string s;
  for (std::size_t i = 0; i < names.size(); ++i) {
    s += (i ? ", " : "") + names[i] + "=" + std::to_string(values[i]);
  }
  return s.empty() ? "(empty stratum)" : s;
}

}  // namespace

CiResult ci_check(const JointTable& j, const std::vector<std::string>& x, const std::vector<std::string>& y,
                  const std::vector<std::string>& z) {
  require_disjoint({x, y, z});
  const JointTable pxyz = j.marginal(concat(concat(x, y), z));
  const JointTable pyz = j.marginal(concat(y, z));
  const JointTable pxz = j.marginal(concat(x, z));
  const JointTable pz = j.marginal(z);

  CiResult r;
  for (std::size_t flat = 0; flat < pxyz.size(); ++flat) {
    const auto a = pxyz.decode(flat);
    const auto ax = slice(a, 0, x.size());
    const auto ay = slice(a, x.size(), y.size());
    const auto az = slice(a, x.size() + y.size(), z.size());
    const double mass_yz = pyz.at(concat_values(ay, az));
    if (mass_yz <= 0.0) continue;
    const double lhs = pxyz.probabilities()[flat] / mass_yz;
    const double rhs = pxz.at(concat_values(ax, az)) / pz.at(az);
    r.max_deviation = std::max(r.max_deviation, std::abs(lhs - rhs));
  }
  r.holds = r.max_deviation <= probability_tolerance;
  return r;
}

std::vector<double> adjustment_estimate(const DiscreteScm& m, const std::string& x, std::size_t x_value,
                                        const std::string& y, const std::vector<std::string>& z,
                                        const Limits& limits) {
  require_disjoint({{x}, {y}, z});
  const auto& g = m.dag();
  const std::size_t xi = g.index(x);
  if (x_value >= m.cardinality(xi)) throw Error("value " + std::to_string(x_value) + " out of range for '" + x + "'");
  const JointTable joint = joint_distribution(m, limits);
  const JointTable pxzy = joint.marginal(concat(concat({x}, z), {y}));
  const JointTable pxz = joint.marginal(concat({x}, z));
  const JointTable pz = joint.marginal(z);
  const std::size_t ny = m.cardinality(g.index(y));

  std::vector<double> out(ny, 0.0);
  for (std::size_t flat = 0; flat < pz.size(); ++flat) {
    const double mass_z = pz.probabilities()[flat];
    if (mass_z <= 0.0) continue;
    const auto az = pz.decode(flat);
    std::vector<std::size_t> key{x_value};
    key.insert(key.end(), az.begin(), az.end());
    const double mass_xz = pxz.at(key);
    if (mass_xz <= 0.0) {
      throw Error("positivity violation: P(" + x + "=" + std::to_string(x_value) + " | " + describe_stratum(z, az) +
                  ") = 0");
    }
    key.push_back(0);
    for (std::size_t yv = 0; yv < ny; ++yv) {
      key.back() = yv;
      out[yv] += pxzy.at(key) / mass_xz * mass_z;
    }
  }
  return out;
}

namespace {

std::vector<double> do_marginal(const DiscreteScm& m, const std::string& x, std::size_t x_value, const std::string& y,
                                const Limits& limits) {
  if (x == y) {
    std::vector<double> point(m.cardinality(m.dag().index(y)), 0.0);
    point[x_value] = 1.0;
    return point;
  }
  return do_distribution(m, {{x, x_value}}, limits).marginal({y}).probabilities();
}

}  // namespace

double ate_exact(const DiscreteScm& m, const std::string& x, const std::string& y, const std::vector<double>& y_values,
                 const Limits& limits) {
  const std::size_t xi = m.dag().index(x);
  if (m.cardinality(xi) != 2) throw Error("treatment '" + x + "' is not binary");
  const std::size_t ny = m.cardinality(m.dag().index(y));
  if (!y_values.empty() && y_values.size() != ny) throw Error("outcome value map does not cover every value");
  auto value = [&](std::size_t k) { return y_values.empty() ? static_cast<double>(k) : y_values[k]; };

  double expect[2] = {0.0, 0.0};
  for (std::size_t t = 0; t < 2; ++t) {
    const auto p = do_marginal(m, x, t, y, limits);
    for (std::size_t k = 0; k < ny; ++k) expect[t] += value(k) * p[k];
  }
  return expect[1] - expect[0];
}

ConfoundingReport is_confounded(const DiscreteScm& m, const std::string& x, const std::string& y,
                                const Limits& limits) {
  if (x == y) throw Error("treatment and outcome must differ");
  const std::size_t nx = m.cardinality(m.dag().index(x));
  const std::size_t ny = m.cardinality(m.dag().index(y));
  const JointTable pxy = joint_distribution(m, limits).marginal({x, y});

  ConfoundingReport r;
  for (std::size_t xv = 0; xv < nx; ++xv) {
    double mass_x = 0.0;
    for (std::size_t yv = 0; yv < ny; ++yv) mass_x += pxy.at({xv, yv});
    if (mass_x <= 0.0) {
      r.skipped.push_back(xv);
      continue;
    }
    const auto p_do = do_marginal(m, x, xv, y, limits);
    for (std::size_t yv = 0; yv < ny; ++yv) {
      r.max_gap = std::max(r.max_gap, std::abs(p_do[yv] - pxy.at({xv, yv}) / mass_x));
    }
  }
  r.confounded = r.max_gap > probability_tolerance;
  return r;
}

std::size_t Dataset::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw Error("dataset has no column '" + name + "'");
}

namespace {

// 53 random bits mapped to [0, 1); identical on every platform.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t inverse_cdf(const std::vector<double>& row, double u) {
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (row[k] <= 0.0) continue;
    last_positive = k;
    acc += row[k];
    if (u < acc) return k;
  }
  return last_positive;
}

}  // namespace

Dataset sample(const DiscreteScm& m, std::size_t n, std::uint64_t seed) {
  const auto& g = m.dag();
  Dataset d{g.variables(), {}, seed};
  d.rows.reserve(n);
  std::mt19937_64 rng(seed);
  const auto order = g.topological_order();
  std::vector<std::size_t> a(g.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t v : order) a[v] = inverse_cdf(m.table(v)[m.row_index(v, a)], unit_draw(rng));
    d.rows.push_back(a);
  }
  return d;
}

void write_csv(std::ostream& out, const Dataset& d) {
  for (std::size_t i = 0; i < d.columns.size(); ++i) out << (i ? "," : "") << d.columns[i];
  out << '\n';
  for (const auto& row : d.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

Dataset read_csv(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream s(line);
    std::string cell;
    while (std::getline(s, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  Dataset d;
  std::string line;
  if (!std::getline(in, line)) throw Error("csv is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  d.columns = split(line);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != d.columns.size()) throw Error("csv line " + std::to_string(lineno) + " has the wrong width");
    std::vector<std::size_t> row;
    for (const auto& c : cells) {
      std::size_t used = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(c, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != c.size() || c.front() == '-') {
        throw Error("csv line " + std::to_string(lineno) + ": '" + c + "' is not a value code");
      }
      row.push_back(static_cast<std::size_t>(v));
    }
    d.rows.push_back(std::move(row));
  }
  return d;
}

PropensityModel true_propensity(const DiscreteScm& m, const std::string& treatment) {
  const auto& g = m.dag();
  const std::size_t t = g.index(treatment);
  if (m.cardinality(t) != 2) throw Error("treatment '" + treatment + "' is not binary");
  PropensityModel p;
  std::vector<std::size_t> radix;
  for (std::size_t q : g.parents(t)) {
    p.covariates.push_back(g.name(q));
    radix.push_back(m.cardinality(q));
  }
  std::vector<std::size_t> digits(radix.size(), 0);
  std::size_t row = 0;
  do {
    p.strata[digits] = m.table(t)[row++][1];
  } while (advance(digits, radix));
  return p;
}

double ht_estimate(const Dataset& d, const std::string& treatment, const std::string& outcome,
                   const PropensityModel& propensity) {
  if (d.rows.empty()) throw Error("no rows");
  const std::size_t t = d.column(treatment);
  const std::size_t y = d.column(outcome);
  std::vector<std::size_t> cov;
  for (const auto& c : propensity.covariates) cov.push_back(d.column(c));

  double sum = 0.0;
  std::vector<std::size_t> stratum(cov.size());
  for (std::size_t i = 0; i < d.rows.size(); ++i) {
    const auto& row = d.rows[i];
    for (std::size_t k = 0; k < cov.size(); ++k) stratum[k] = row[cov[k]];
    auto it = propensity.strata.find(stratum);
    if (it == propensity.strata.end()) {
      throw Error("no propensity for stratum " + describe_stratum(propensity.covariates, stratum));
    }
    const double e = it->second;
    if (!(e > 0.0 && e < 1.0)) {
      throw Error("propensity " + format_value(e) + " at stratum " + describe_stratum(propensity.covariates, stratum) +
                  " gives an unbounded weight");
    }
    if (row[t] > 1) throw Error("treatment column is not binary at row " + std::to_string(i));
    const double yv = static_cast<double>(row[y]);
    sum += row[t] == 1 ? yv / e : -yv / (1.0 - e);
  }
  return sum / static_cast<double>(d.rows.size());
}

DiscreteScm random_scm(const CausalDag& dag, const std::vector<std::size_t>& cardinalities, std::uint64_t seed,
                       double floor) {
  if (cardinalities.size() != dag.size()) throw Error("cardinalities do not cover the variables");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::vector<double>>> tables(dag.size());
  for (std::size_t v = 0; v < dag.size(); ++v) {
    const std::size_t k = cardinalities[v];
    if (floor * static_cast<double>(k) >= 1.0) throw Error("probability floor leaves no mass to distribute");
    std::size_t rows = 1;
    for (std::size_t p : dag.parents(v)) rows *= cardinalities[p];
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<double> w(k);
      double total = 0.0;
      for (auto& x : w) {
        x = -std::log1p(-unit_draw(rng));
        total += x;
      }
      for (auto& x : w) x = floor + (1.0 - floor * static_cast<double>(k)) * x / total;
      tables[v].push_back(std::move(w));
    }
  }
  return DiscreteScm::create(dag, cardinalities, std::move(tables));
}

}  // namespace unicausal
