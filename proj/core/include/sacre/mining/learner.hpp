#pragma once

#include <cstdint>
#include <vector>

#include "sacre/mining/dataset.hpp"
#include "sacre/mining/measures.hpp"
#include "sacre/reqmodel/types.hpp"

namespace sacre::mining {

// Conjunction of conditions predicting class "active". The inactive default
// lives in RuleSet, not here.
struct Rule {
  std::vector<reqmodel::AtomicCondition> conditions;

  bool matches(const Dataset& ds, std::size_t row) const;
};

struct RuleSet {
  std::vector<Rule> rules;
  // True when the training data was single-class and no covering was possible.
  bool degenerate = false;
  // Class predicted when no rule fires. "inactive" except for the
  // all-active degenerate dataset.
  std::string default_class = kClassInactive;

  bool classify_active(const Dataset& ds, std::size_t row) const;
};

// Midpoints between consecutive distinct sorted values of `attr` whose
// adjacent records differ in class; deduplicated, ascending.
std::vector<double> candidate_thresholds(const Dataset& ds, std::size_t attr);

// FOIL information gain for extending a rule: p1*(log2(p1/(p1+n1)) -
// log2(p0/(p0+n0))); 0 when p1 == 0.
double foil_gain(std::size_t p0, std::size_t n0, std::size_t p1, std::size_t n1);

// RIPPER-style sequential covering targeting class "active": seeded
// stratified 2:1 grow/prune split, greedy FOIL-gain growth, reduced-error
// pruning on (p-n)/(p+n), rule accepted while prune-set precision >= 0.5.
// Deterministic for a fixed (dataset, seed).
RuleSet learn_ruleset(const Dataset& ds, std::uint64_t seed);

// Stratified k-fold cross-validation with micro-averaged tp/fp/fn.
EvalMeasures cross_validate(const Dataset& ds, int k, std::uint64_t seed);

// Each rule becomes one DNF clause, in rule order.
reqmodel::Operationalization ruleset_to_operationalization(const RuleSet& rs);

// Classification agreement between two operationalizations over the records
// of a dataset (the Table 7 comparison: semantic, not textual).
double operationalization_agreement(const reqmodel::Operationalization& a,
                                    const reqmodel::Operationalization& b,
                                    const Dataset& ds);

}  // namespace sacre::mining
