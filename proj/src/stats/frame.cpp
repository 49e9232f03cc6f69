#include "essaylens/stats/frame.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "essaylens/error.hpp"

namespace essaylens::stats {

void Frame::add(std::string name, Column col, std::size_t n) {
  if (name.empty()) throw InputError("frame: empty column name");
  if (index_.count(name)) throw InputError(fmt::format("frame: duplicate column '{}'", name));
  if (!names_.empty() && n != rows_)
    throw InputError(fmt::format("frame: column '{}' has {} rows, expected {}", name, n, rows_));
  rows_ = n;
  index_.emplace(name, columns_.size());
  names_.push_back(std::move(name));
  columns_.push_back(std::move(col));
}

void Frame::add_numeric(std::string name, Numeric values) {
  const auto n = values.size();
  add(std::move(name), Column(std::in_place_type<Numeric>, std::move(values)), n);
}

void Frame::add_numeric(std::string name, const std::vector<double>& values) {
  add_numeric(std::move(name), Numeric(values.begin(), values.end()));
}

void Frame::add_factor(std::string name, Factor values) {
  const auto n = values.size();
  add(std::move(name), Column(std::in_place_type<Factor>, std::move(values)), n);
}

bool Frame::has(std::string_view name) const { return index_.find(name) != index_.end(); }

const Frame::Column& Frame::column(std::string_view name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) throw InputError(fmt::format("frame: no column '{}'", name));
  return columns_[it->second];
}

bool Frame::is_factor(std::string_view name) const { return std::holds_alternative<Factor>(column(name)); }

const Frame::Numeric& Frame::numeric(std::string_view name) const {
  const auto& c = column(name);
  if (!std::holds_alternative<Numeric>(c)) throw InputError(fmt::format("frame: column '{}' is not numeric", name));
  return std::get<Numeric>(c);
}

const Frame::Factor& Frame::factor(std::string_view name) const {
  const auto& c = column(name);
  if (!std::holds_alternative<Factor>(c)) throw InputError(fmt::format("frame: column '{}' is not a factor", name));
  return std::get<Factor>(c);
}

Frame Frame::take(const std::vector<std::size_t>& rows) const {
  Frame out;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    std::visit(
        [&](const auto& col) {
          std::decay_t<decltype(col)> sub;
          sub.reserve(rows.size());
          for (auto r : rows) {
            if (r >= rows_) throw InputError(fmt::format("frame: row {} out of range", r));
            sub.push_back(col[r]);
          }
          out.add(names_[c], Column(std::move(sub)), rows.size());
        },
        columns_[c]);
  }
  if (columns_.empty()) out.rows_ = 0;
  return out;
}

std::string Term::label() const {
  std::string s;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) s += ':';
    s += vars[i];
  }
  return s;
}

ModelSpec& ModelSpec::add(std::string var) {
  terms.push_back({{std::move(var)}, false});
  return *this;
}

ModelSpec& ModelSpec::add_interaction(std::string a, std::string b, bool standalone) {
  terms.push_back({{std::move(a), std::move(b)}, standalone});
  return *this;
}

ModelSpec& ModelSpec::reference(std::string factor, std::string level) {
  reference_levels[std::move(factor)] = std::move(level);
  return *this;
}

void ModelSpec::validate() const {
  if (outcome.empty()) throw InputError("model spec: no outcome");
  std::set<std::string> mains;
  std::set<std::vector<std::string>> seen;
  for (const auto& t : terms) {
    if (t.vars.empty()) throw InputError("model spec: empty term");
    for (const auto& v : t.vars) {
      if (v.empty()) throw InputError("model spec: empty variable name");
      if (v == outcome) throw InputError(fmt::format("model spec: outcome '{}' used as a predictor", v));
    }
    auto key = t.vars;
    std::sort(key.begin(), key.end());
    if (std::adjacent_find(key.begin(), key.end()) != key.end())
      throw InputError(fmt::format("model spec: term '{}' repeats a variable", t.label()));
    if (!seen.insert(key).second) throw InputError(fmt::format("model spec: duplicate term '{}'", t.label()));
    if (t.vars.size() == 1) mains.insert(t.vars[0]);
  }
  for (const auto& t : terms) {
    if (t.vars.size() < 2 || t.standalone) continue;
    for (const auto& v : t.vars)
      if (!mains.count(v))
        throw InputError(fmt::format("model spec: interaction '{}' needs main effect '{}'", t.label(), v));
  }
}

std::string dummy_name(std::string_view factor, std::string_view level) { return fmt::format("{}[{}]", factor, level); }

namespace {

// Columns contributed by one variable: (name, values over kept rows).
struct VarColumns {
  std::vector<std::string> names;
  std::vector<Eigen::VectorXd> values;
};

}  // namespace

Design build_design(const Frame& frame, const ModelSpec& spec) {
  spec.validate();
  std::vector<std::string> vars;
  for (const auto& t : spec.terms)
    for (const auto& v : t.vars)
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  if (frame.is_factor(spec.outcome)) throw InputError(fmt::format("outcome '{}' must be numeric", spec.outcome));
  for (const auto& [f, lvl] : spec.reference_levels) {
    (void)lvl;
    if (std::find(vars.begin(), vars.end(), f) != vars.end() && !frame.is_factor(f))
      throw InputError(fmt::format("reference level given for non-factor '{}'", f));
  }

  Design d;
  const auto& yv = frame.numeric(spec.outcome);
  for (std::size_t r = 0; r < frame.rows(); ++r) {
    bool ok = yv[r].has_value();
    for (const auto& v : vars) {
      if (!ok) break;
      ok = frame.is_factor(v) ? frame.factor(v)[r].has_value() : frame.numeric(v)[r].has_value();
    }
    if (ok)
      d.rows.push_back(r);
    else
      ++d.dropped;
  }
  const auto n = Eigen::Index(d.rows.size());
  if (n == 0) throw InputError("model has no complete cases");

  std::map<std::string, VarColumns> cols;
  for (const auto& v : vars) {
    VarColumns vc;
    if (frame.is_factor(v)) {
      const auto& f = frame.factor(v);
      std::set<std::string> levels;
      for (auto r : d.rows) levels.insert(*f[r]);
      std::string ref = *levels.begin();
      if (auto it = spec.reference_levels.find(v); it != spec.reference_levels.end()) {
        if (!levels.count(it->second))
          throw InputError(fmt::format("reference level '{}' of '{}' is not observed", it->second, v));
        ref = it->second;
      }
      for (const auto& lvl : levels) {
        if (lvl == ref) continue;
        Eigen::VectorXd x(n);
        for (Eigen::Index i = 0; i < n; ++i) x(i) = (*f[d.rows[i]] == lvl) ? 1.0 : 0.0;
        vc.names.push_back(dummy_name(v, lvl));
        vc.values.push_back(std::move(x));
      }
    } else {
      const auto& c = frame.numeric(v);
      Eigen::VectorXd x(n);
      for (Eigen::Index i = 0; i < n; ++i) x(i) = *c[d.rows[i]];
      vc.names.push_back(v);
      vc.values.push_back(std::move(x));
    }
    cols.emplace(v, std::move(vc));
  }

  std::vector<Eigen::VectorXd> xs;
  if (spec.intercept) {
    d.columns.emplace_back(kIntercept);
    xs.push_back(Eigen::VectorXd::Ones(n));
  }
  for (const auto& t : spec.terms) {
    // Cartesian product of each variable's columns.
    std::vector<std::string> names{""};
    std::vector<Eigen::VectorXd> values{Eigen::VectorXd::Ones(n)};
    for (const auto& v : t.vars) {
      const auto& vc = cols.at(v);
      std::vector<std::string> nn;
      std::vector<Eigen::VectorXd> nv;
      for (std::size_t a = 0; a < names.size(); ++a)
        for (std::size_t b = 0; b < vc.names.size(); ++b) {
          nn.push_back(names[a].empty() ? vc.names[b] : names[a] + ":" + vc.names[b]);
          nv.push_back(values[a].cwiseProduct(vc.values[b]));
        }
      names = std::move(nn);
      values = std::move(nv);
    }
    for (std::size_t k = 0; k < names.size(); ++k) {
      d.columns.push_back(names[k]);
      xs.push_back(std::move(values[k]));
    }
  }
  d.X.resize(n, Eigen::Index(xs.size()));
  for (std::size_t k = 0; k < xs.size(); ++k) d.X.col(Eigen::Index(k)) = xs[k];
  d.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) d.y(i) = *yv[d.rows[i]];
  return d;
}

}  // namespace essaylens::stats
