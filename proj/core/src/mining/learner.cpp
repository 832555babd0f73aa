#include "sacre/mining/learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "sacre/reqmodel/eval.hpp"

namespace sacre::mining {

using reqmodel::AtomicCondition;
using reqmodel::CmpOp;

EvalMeasures confusion_measures(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
  EvalMeasures m;
  m.precision = (tp + fp) ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  m.recall = (tp + fn) ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  m.f_measure = (m.precision + m.recall > 0.0)
                    ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                    : 0.0;
  return m;
}

namespace {

// Columnar view of a dataset: numeric columns as-is, nominal columns as the
// index of the value in the attribute's declared list.
struct Columns {
  std::vector<std::vector<double>> values;  // per non-class attribute
  std::vector<char> active;                 // class column
  const std::vector<Attribute>* attrs = nullptr;

  explicit Columns(const Dataset& ds) {
    const std::size_t cls = ds.class_index();
    attrs = &ds.attributes();
    values.resize(cls);
    for (std::size_t a = 0; a < cls; ++a) values[a].reserve(ds.size());
    active.reserve(ds.size());
    for (std::size_t r = 0; r < ds.size(); ++r) {
      const auto& row = ds.records()[r];
      for (std::size_t a = 0; a < cls; ++a) {
        if (const auto* d = std::get_if<double>(&row[a])) {
          values[a].push_back(*d);
        } else {
          const auto& v = std::get<std::string>(row[a]);
          const auto& allowed = (*attrs)[a].values;
          auto it = std::find(allowed.begin(), allowed.end(), v);
          values[a].push_back(static_cast<double>(it - allowed.begin()));
        }
      }
      active.push_back(ds.row_is_active(r) ? 1 : 0);
    }
  }

  std::size_t attr_count() const { return values.size(); }
  bool is_numeric(std::size_t a) const {
    return (*attrs)[a].kind == Attribute::Kind::Numeric;
  }
};

bool cond_holds_value(const AtomicCondition& c, double v) {
  switch (c.op) {
    case CmpOp::Ge: return v >= c.threshold;
    case CmpOp::Le: return v <= c.threshold;
    case CmpOp::Gt: return v > c.threshold;
    case CmpOp::Lt: return v < c.threshold;
    case CmpOp::Eq: return v == c.threshold;
  }
  return false;
}

// Condition with the attribute resolved to a column index.
struct BoundCondition {
  std::size_t attr;
  CmpOp op;
  double threshold;
};

bool rule_covers(const Columns& cols, const std::vector<BoundCondition>& conds,
                 std::size_t row) {
  for (const auto& c : conds) {
    const double v = cols.values[c.attr][row];
    switch (c.op) {
      case CmpOp::Ge: if (!(v >= c.threshold)) return false; break;
      case CmpOp::Le: if (!(v <= c.threshold)) return false; break;
      case CmpOp::Gt: if (!(v > c.threshold)) return false; break;
      case CmpOp::Lt: if (!(v < c.threshold)) return false; break;
      case CmpOp::Eq: if (!(v == c.threshold)) return false; break;
    }
  }
  return true;
}

void count_covered(const Columns& cols, const std::vector<BoundCondition>& conds,
                   const std::vector<std::size_t>& rows, std::size_t& p,
                   std::size_t& n) {
  p = n = 0;
  for (std::size_t r : rows) {
    if (!rule_covers(cols, conds, r)) continue;
    if (cols.active[r]) ++p; else ++n;
  }
}

// Class-boundary midpoints over a (value, active) sample. A midpoint between
// two distinct adjacent values qualifies when records of both classes exist
// across the pair.
std::vector<double> boundary_midpoints(std::vector<std::pair<double, char>> samples) {
  std::vector<double> out;
  if (samples.empty()) return out;
  std::sort(samples.begin(), samples.end());
  // Collapse distinct values into class masks: bit0 inactive, bit1 active.
  std::vector<std::pair<double, unsigned>> distinct;
  for (const auto& [v, a] : samples) {
    const unsigned bit = a ? 2u : 1u;
    if (!distinct.empty() && distinct.back().first == v)
      distinct.back().second |= bit;
    else
      distinct.emplace_back(v, bit);
  }
  for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
    if ((distinct[i].second | distinct[i + 1].second) == 3u)
      out.push_back((distinct[i].first + distinct[i + 1].first) / 2.0);
  }
  return out;
}

struct GrowCandidate {
  BoundCondition cond;
  double gain = -std::numeric_limits<double>::infinity();
  std::size_t p1 = 0, n1 = 0;
};

// Best single-condition extension of the current rule over the covered grow
// rows. Ties are broken by scan order for determinism.
GrowCandidate best_extension(const Columns& cols,
                             const std::vector<std::size_t>& covered,
                             std::size_t p0, std::size_t n0) {
  GrowCandidate best;
  for (std::size_t a = 0; a < cols.attr_count(); ++a) {
    if (cols.is_numeric(a)) {
      std::vector<std::pair<double, char>> samples;
      samples.reserve(covered.size());
      for (std::size_t r : covered)
        samples.emplace_back(cols.values[a][r], cols.active[r]);
      // Prefix-count arrays over the sorted samples make each threshold O(log n).
      std::sort(samples.begin(), samples.end());
      const std::size_t m = samples.size();
      std::vector<std::size_t> act_prefix(m + 1, 0);
      for (std::size_t i = 0; i < m; ++i)
        act_prefix[i + 1] = act_prefix[i] + (samples[i].second ? 1 : 0);
      const std::size_t total_act = act_prefix[m];

      for (double t : boundary_midpoints(samples)) {
        // Index of the first sample with value > t (none equals a midpoint).
        const std::size_t idx =
            static_cast<std::size_t>(std::lower_bound(samples.begin(), samples.end(),
                                                      std::make_pair(t, char(0))) -
                                     samples.begin());
        const std::size_t act_ge = total_act - act_prefix[idx];
        const std::size_t cov_ge = m - idx;
        const std::size_t act_le = act_prefix[idx];
        const std::size_t cov_le = idx;
        const struct { CmpOp op; std::size_t p1, n1; } options[2] = {
            {CmpOp::Ge, act_ge, cov_ge - act_ge},
            {CmpOp::Le, act_le, cov_le - act_le},
        };
        for (const auto& o : options) {
          const double g = foil_gain(p0, n0, o.p1, o.n1);
          if (g > best.gain) best = {{a, o.op, t}, g, o.p1, o.n1};
        }
      }
    } else {
      const auto& allowed = (*cols.attrs)[a].values;
      for (std::size_t vi = 0; vi < allowed.size(); ++vi) {
        std::size_t p1 = 0, n1 = 0;
        for (std::size_t r : covered) {
          if (cols.values[a][r] != static_cast<double>(vi)) continue;
          if (cols.active[r]) ++p1; else ++n1;
        }
        const double g = foil_gain(p0, n0, p1, n1);
        if (g > best.gain) best = {{a, CmpOp::Eq, static_cast<double>(vi)}, g, p1, n1};
      }
    }
  }
  return best;
}

// Inserts a grown condition, merging with an existing bound on the same
// attribute so a rule never carries two lower (or two upper) bounds. A chosen
// extension always shrinks coverage, so the incoming bound is the tighter one.
void add_condition_merged(std::vector<BoundCondition>& conds, const BoundCondition& c) {
  auto is_lower = [](CmpOp op) { return op == CmpOp::Ge || op == CmpOp::Gt; };
  auto is_upper = [](CmpOp op) { return op == CmpOp::Le || op == CmpOp::Lt; };
  if (c.op == CmpOp::Eq) {
    std::erase_if(conds, [&](const BoundCondition& e) { return e.attr == c.attr; });
    conds.push_back(c);
    return;
  }
  for (auto& e : conds) {
    if (e.attr != c.attr) continue;
    if ((is_lower(e.op) && is_lower(c.op)) || (is_upper(e.op) && is_upper(c.op))) {
      e = c;
      return;
    }
  }
  conds.push_back(c);
}

double prune_metric(const Columns& cols, const std::vector<BoundCondition>& conds,
                    const std::vector<std::size_t>& prune_rows) {
  std::size_t p = 0, n = 0;
  count_covered(cols, conds, prune_rows, p, n);
  if (p + n == 0) return -1.0;
  return (static_cast<double>(p) - static_cast<double>(n)) /
         static_cast<double>(p + n);
}

Rule to_rule(const Columns& cols, const std::vector<BoundCondition>& conds) {
  Rule rule;
  for (const auto& c : conds)
    rule.conditions.push_back({(*cols.attrs)[c.attr].name, c.op, c.threshold});
  return rule;
}

// Tightens each numeric bound of an accepted rule to the midpoint of the
// full-dataset gap adjacent to the rule's covered positives. Keeps every
// covered positive covered and can only shed covered negatives, so training
// recall is preserved and precision never drops.
void refine_bounds(const Columns& cols, std::vector<BoundCondition>& conds) {
  const std::size_t rows = cols.active.size();
  std::vector<std::size_t> covered_pos;
  for (std::size_t r = 0; r < rows; ++r)
    if (cols.active[r] && rule_covers(cols, conds, r)) covered_pos.push_back(r);
  if (covered_pos.empty()) return;

  for (auto& c : conds) {
    if (c.op != CmpOp::Ge && c.op != CmpOp::Le) continue;
    if (!cols.is_numeric(c.attr)) continue;
    const auto& column = cols.values[c.attr];
    if (c.op == CmpOp::Ge) {
      double m = std::numeric_limits<double>::infinity();
      for (std::size_t r : covered_pos) m = std::min(m, column[r]);
      double below = -std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows; ++r)
        if (column[r] < m) below = std::max(below, column[r]);
      const double tightened = std::isinf(below) ? m : (below + m) / 2.0;
      c.threshold = std::max(c.threshold, tightened);
    } else {
      double m = -std::numeric_limits<double>::infinity();
      for (std::size_t r : covered_pos) m = std::max(m, column[r]);
      double above = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows; ++r)
        if (column[r] > m) above = std::min(above, column[r]);
      const double tightened = std::isinf(above) ? m : (above + m) / 2.0;
      c.threshold = std::min(c.threshold, tightened);
    }
  }
}

// Stratified shuffle of row ids: actives and inactives shuffled separately.
void stratified_shuffle(const Columns& cols, std::vector<std::size_t>& rows,
                        std::mt19937_64& rng, std::vector<std::size_t>& pos_out,
                        std::vector<std::size_t>& neg_out) {
  pos_out.clear();
  neg_out.clear();
  for (std::size_t r : rows)
    (cols.active[r] ? pos_out : neg_out).push_back(r);
  std::shuffle(pos_out.begin(), pos_out.end(), rng);
  std::shuffle(neg_out.begin(), neg_out.end(), rng);
}

}  // namespace

bool Rule::matches(const Dataset& ds, std::size_t row) const {
  const auto& attrs = ds.attributes();
  const auto& rec = ds.records()[row];
  for (const auto& cond : conditions) {
    std::size_t a = 0;
    while (a < attrs.size() && attrs[a].name != cond.variable) ++a;
    if (a == attrs.size()) return false;  // condition on an unknown column
    double v;
    if (const auto* d = std::get_if<double>(&rec[a])) {
      v = *d;
    } else {
      const auto& allowed = attrs[a].values;
      auto it = std::find(allowed.begin(), allowed.end(), std::get<std::string>(rec[a]));
      v = static_cast<double>(it - allowed.begin());
    }
    if (!cond_holds_value(cond, v)) return false;
  }
  return true;
}

bool RuleSet::classify_active(const Dataset& ds, std::size_t row) const {
  for (const auto& rule : rules)
    if (rule.matches(ds, row)) return true;
  return default_class == kClassActive;
}

std::vector<double> candidate_thresholds(const Dataset& ds, std::size_t attr) {
  if (ds.attributes().at(attr).kind != Attribute::Kind::Numeric)
    throw std::invalid_argument("candidate_thresholds requires a numeric attribute");
  std::vector<std::pair<double, char>> samples;
  samples.reserve(ds.size());
  for (std::size_t r = 0; r < ds.size(); ++r)
    samples.emplace_back(std::get<double>(ds.records()[r][attr]),
                         ds.row_is_active(r) ? 1 : 0);
  return boundary_midpoints(std::move(samples));
}

double foil_gain(std::size_t p0, std::size_t n0, std::size_t p1, std::size_t n1) {
  if (p1 == 0) return 0.0;
  const double before = std::log2(static_cast<double>(p0) / static_cast<double>(p0 + n0));
  const double after = std::log2(static_cast<double>(p1) / static_cast<double>(p1 + n1));
  return static_cast<double>(p1) * (after - before);
}

RuleSet learn_ruleset(const Dataset& ds, std::uint64_t seed) {
  const Columns cols(ds);
  const std::size_t total_pos = ds.count_active();
  const std::size_t total_neg = ds.size() - total_pos;

  if (total_pos == 0 || total_neg == 0) {
    RuleSet rs;
    rs.degenerate = true;
    rs.default_class = (total_pos > 0 && total_neg == 0) ? kClassActive : kClassInactive;
    return rs;
  }

  std::mt19937_64 rng(seed);
  RuleSet rs;

  std::vector<std::size_t> remaining(ds.size());
  std::iota(remaining.begin(), remaining.end(), 0);

  std::vector<std::size_t> pos, neg;
  const std::size_t max_rules = ds.size();  // covering strictly shrinks remaining

  while (rs.rules.size() < max_rules) {
    stratified_shuffle(cols, remaining, rng, pos, neg);
    if (pos.empty()) break;

    // 2:1 grow/prune split, stratified.
    std::vector<std::size_t> grow, prune;
    auto deal = [&](const std::vector<std::size_t>& src) {
      const std::size_t cut = (src.size() * 2 + 2) / 3;
      grow.insert(grow.end(), src.begin(), src.begin() + cut);
      prune.insert(prune.end(), src.begin() + cut, src.end());
    };
    deal(pos);
    deal(neg);

    // Grow: greedy FOIL-gain conjunction until pure on the grow set.
    std::vector<BoundCondition> conds;
    std::vector<std::size_t> covered = grow;
    std::size_t p = 0, n = 0;
    for (std::size_t r : covered) (cols.active[r] ? p : n)++;
    while (n > 0) {
      GrowCandidate c = best_extension(cols, covered, p, n);
      if (!(c.gain > 0.0)) break;
      add_condition_merged(conds, c.cond);
      std::vector<std::size_t> next;
      next.reserve(covered.size());
      for (std::size_t r : covered)
        if (rule_covers(cols, {c.cond}, r)) next.push_back(r);
      covered.swap(next);
      p = c.p1;
      n = c.n1;
    }
    if (conds.empty() || p == 0) break;  // nothing learnable from what remains

    // Prune: drop trailing conditions only when the prune-set metric strictly
    // improves. Ties keep the condition: the prune set is often too small to
    // witness the few records that justified it on the grow set, and dropping
    // on a tie erases grow-set evidence.
    while (conds.size() > 1) {
      const double with = prune_metric(cols, conds, prune);
      std::vector<BoundCondition> shorter(conds.begin(), conds.end() - 1);
      if (prune_metric(cols, shorter, prune) > with)
        conds.pop_back();
      else
        break;
    }

    refine_bounds(cols, conds);

    // Acceptance: prune-set precision >= 0.5; vacuous coverage passes.
    std::size_t pp = 0, pn = 0;
    count_covered(cols, conds, prune, pp, pn);
    if (pp + pn > 0 &&
        static_cast<double>(pp) / static_cast<double>(pp + pn) < 0.5)
      break;

    // The accepted rule must make progress on the remaining positives.
    std::size_t rp = 0, rn = 0;
    count_covered(cols, conds, remaining, rp, rn);
    if (rp == 0) break;

    rs.rules.push_back(to_rule(cols, conds));
    std::vector<std::size_t> kept;
    kept.reserve(remaining.size());
    for (std::size_t r : remaining)
      if (!rule_covers(cols, conds, r)) kept.push_back(r);
    remaining.swap(kept);

    bool positives_left = false;
    for (std::size_t r : remaining)
      if (cols.active[r]) { positives_left = true; break; }
    if (!positives_left) break;
  }
  return rs;
}

EvalMeasures cross_validate(const Dataset& ds, int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("cross_validate requires k >= 2");
  if (ds.size() < static_cast<std::size_t>(k))
    throw std::invalid_argument("cross_validate: dataset has " +
                                std::to_string(ds.size()) + " records, fewer than k=" +
                                std::to_string(k));

  // Stratified fold assignment: shuffle each class, deal round-robin.
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> pos, neg;
  for (std::size_t r = 0; r < ds.size(); ++r)
    (ds.row_is_active(r) ? pos : neg).push_back(r);
  std::shuffle(pos.begin(), pos.end(), rng);
  std::shuffle(neg.begin(), neg.end(), rng);
  std::vector<int> fold_of(ds.size());
  int next = 0;
  for (std::size_t r : pos) fold_of[r] = next++ % k;
  for (std::size_t r : neg) fold_of[r] = next++ % k;

  std::uint64_t tp = 0, fp = 0, fn = 0;
  for (int f = 0; f < k; ++f) {
    Dataset train(ds.relation_name(), ds.attributes());
    std::vector<std::size_t> test;
    for (std::size_t r = 0; r < ds.size(); ++r) {
      if (fold_of[r] == f) test.push_back(r);
      else train.append(ds.records()[r]);
    }
    const RuleSet rs = learn_ruleset(train, seed + static_cast<std::uint64_t>(f) + 1);
    for (std::size_t r : test) {
      const bool predicted = rs.classify_active(ds, r);
      const bool actual = ds.row_is_active(r);
      if (predicted && actual) ++tp;
      else if (predicted && !actual) ++fp;
      else if (!predicted && actual) ++fn;
    }
  }
  return confusion_measures(tp, fp, fn);
}

reqmodel::Operationalization ruleset_to_operationalization(const RuleSet& rs) {
  std::vector<reqmodel::Conjunction> clauses;
  for (const auto& rule : rs.rules) clauses.push_back(rule.conditions);
  return reqmodel::Operationalization(std::move(clauses));
}

double operationalization_agreement(const reqmodel::Operationalization& a,
                                    const reqmodel::Operationalization& b,
                                    const Dataset& ds) {
  if (ds.size() == 0) return 1.0;
  const std::size_t cls = ds.class_index();
  std::size_t agree = 0;
  for (std::size_t r = 0; r < ds.size(); ++r) {
    reqmodel::EnvironmentSnapshot snap;
    std::set<std::string> vars;
    for (std::size_t i = 0; i < cls; ++i) {
      if (const auto* d = std::get_if<double>(&ds.records()[r][i])) {
        snap.values[ds.attributes()[i].name] = *d;
        vars.insert(ds.attributes()[i].name);
      }
    }
    const bool va = reqmodel::eval_operationalization(a, snap, vars) ==
                    reqmodel::Ternary::True;
    const bool vb = reqmodel::eval_operationalization(b, snap, vars) ==
                    reqmodel::Ternary::True;
    if (va == vb) ++agree;
  }
  return static_cast<double>(agree) / static_cast<double>(ds.size());
}

}  // namespace sacre::mining
