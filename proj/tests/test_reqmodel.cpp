#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sacre/reqmodel/eval.hpp"
#include "sacre/reqmodel/text.hpp"
#include "sacre/sim/catalog.hpp"

using namespace sacre::reqmodel;

namespace {

VariableSpec hbpm_spec() {
  return {"heartBeatsPerMinute", 0.0, 120.0, 0.3, 1.0};
}

Operationalization ctx1_oper() {
  return Operationalization{{{{"perclos", CmpOp::Ge, 0.15},
                              {"heartBeatsPerMinute", CmpOp::Le, 0.60},
                              {"heartBeatsPerMinute", CmpOp::Ge, 0.56}}}};
}

Operationalization ctx2_oper() {
  return Operationalization{{{{"perclos", CmpOp::Ge, 0.21},
                              {"facePosition", CmpOp::Eq, 1.0},
                              {"heartBeatsPerMinute", CmpOp::Le, 0.55},
                              {"heartBeatsPerMinute", CmpOp::Ge, 0.46}}}};
}

Operationalization ctx3_oper() {
  return Operationalization{{{{"perclos", CmpOp::Gt, 0.30},
                              {"facePosition", CmpOp::Eq, 1.0},
                              {"heartBeatsPerMinute", CmpOp::Le, 0.45},
                              {"handsOnSteeringWheel", CmpOp::Lt, 1.0}}}};
}

EnvironmentSnapshot snap(std::map<std::string, double> values, std::int64_t tick = 0) {
  EnvironmentSnapshot s;
  s.tick = tick;
  s.values = values;
  s.preclamp = std::move(values);
  return s;
}

const std::set<std::string> kAllVars = {"perclos", "facePosition",
                                        "heartBeatsPerMinute",
                                        "handsOnSteeringWheel"};

}  // namespace

TEST_CASE("normalization examples") {
  auto spec = hbpm_spec();
  CHECK(normalize(120.0, spec) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(normalize(66.0, spec) == doctest::Approx(0.55).epsilon(1e-12));
  CHECK(normalize(0.0, spec) == doctest::Approx(0.0).epsilon(1e-12));
  // Clamping at both ends.
  CHECK(normalize(130.0, spec) == 1.0);
  CHECK(normalize(-5.0, spec) == 0.0);
  // The unclamped intermediate keeps out-of-range values visible.
  CHECK(normalize_unclamped(168.0, spec) == doctest::Approx(1.4).epsilon(1e-12));
  CHECK(normalize_unclamped(-12.0, spec) == doctest::Approx(-0.1).epsilon(1e-12));
}

TEST_CASE("normalize is monotone with exact endpoints") {
  auto spec = hbpm_spec();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> raw(-20.0, 150.0);
  for (int i = 0; i < 2000; ++i) {
    double a = raw(rng), b = raw(rng);
    if (a > b) std::swap(a, b);
    CHECK(normalize(a, spec) <= normalize(b, spec));
  }
  CHECK(normalize(spec.raw_min, spec) == 0.0);
  CHECK(normalize(spec.raw_max, spec) == 1.0);
}

TEST_CASE("perclos preprocessing examples") {
  std::vector<double> w1 = {0.1, 0.1, 0.9, 0.9};
  CHECK(preprocess_perclos(w1, 4) == doctest::Approx(0.5).epsilon(1e-12));

  std::vector<double> w2(10, 0.5);
  CHECK(preprocess_perclos(w2, 10) == 0.0);

  std::vector<double> w3(60, 0.8);
  for (int i = 0; i < 9; ++i) w3[static_cast<std::size_t>(i) * 6] = 0.05;
  CHECK(preprocess_perclos(w3, 60) == doctest::Approx(0.15).epsilon(1e-12));

  CHECK(preprocess_perclos({}, 60) == 0.0);
}

TEST_CASE("perclos times window size is an integer") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> eye(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    int window = 1 + static_cast<int>(rng() % 90);
    std::vector<double> w(static_cast<std::size_t>(window));
    for (auto& v : w) v = eye(rng);
    double p = preprocess_perclos(w, window);
    double scaled = p * window;
    CHECK(std::abs(scaled - std::round(scaled)) < 1e-12);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
}

TEST_CASE("operationalization evaluation examples") {
  auto s = snap({{"perclos", 0.20},
                 {"heartBeatsPerMinute", 0.58},
                 {"facePosition", 1.0},
                 {"handsOnSteeringWheel", 1.0}});
  CHECK(eval_operationalization(ctx1_oper(), s, kAllVars) == Ternary::True);
  CHECK(eval_operationalization(Operationalization{}, s, kAllVars) == Ternary::Unknown);

  auto missing_face = snap({{"perclos", 0.35},
                            {"heartBeatsPerMinute", 0.40},
                            {"handsOnSteeringWheel", 0.0}});
  CHECK(eval_operationalization(ctx3_oper(), missing_face, kAllVars) == Ternary::Unknown);

  // Inactive variable behaves like an absent one.
  auto all = snap({{"perclos", 0.35},
                   {"facePosition", 1.0},
                   {"heartBeatsPerMinute", 0.40},
                   {"handsOnSteeringWheel", 0.0}});
  std::set<std::string> without_face = {"perclos", "heartBeatsPerMinute",
                                        "handsOnSteeringWheel"};
  CHECK(eval_operationalization(ctx3_oper(), all, kAllVars) == Ternary::True);
  CHECK(eval_operationalization(ctx3_oper(), all, without_face) == Ternary::Unknown);
}

TEST_CASE("condition tolerance on continuous comparisons") {
  AtomicCondition ge{"perclos", CmpOp::Ge, 0.15};
  CHECK(condition_holds(ge, 0.15));
  CHECK(condition_holds(ge, 0.15 - 1e-12));
  CHECK_FALSE(condition_holds(ge, 0.1499));
  AtomicCondition eq{"facePosition", CmpOp::Eq, 1.0};
  CHECK(condition_holds(eq, 1.0));
  CHECK_FALSE(condition_holds(eq, 0.0));
  AtomicCondition lt{"handsOnSteeringWheel", CmpOp::Lt, 1.0};
  CHECK(condition_holds(lt, 0.5));
  CHECK_FALSE(condition_holds(lt, 1.0));
}

TEST_CASE("clause addition is monotone in the True direction") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const std::vector<std::string> vars(kAllVars.begin(), kAllVars.end());
  const std::vector<CmpOp> ops = {CmpOp::Ge, CmpOp::Le, CmpOp::Gt, CmpOp::Lt};
  for (int trial = 0; trial < 500; ++trial) {
    auto random_clause = [&] {
      Conjunction c;
      int n = 1 + static_cast<int>(rng() % 3);
      std::set<std::pair<std::string, int>> used;
      for (int i = 0; i < n; ++i) {
        const auto& v = vars[rng() % vars.size()];
        CmpOp op = ops[rng() % ops.size()];
        // One direction per variable per clause keeps the ctor happy.
        int dir = (op == CmpOp::Ge || op == CmpOp::Gt) ? 0 : 1;
        if (!used.insert({v, dir}).second) continue;
        c.push_back({v, op, uni(rng)});
      }
      return c;
    };
    std::vector<Conjunction> clauses = {random_clause()};
    Operationalization base{clauses};
    clauses.push_back(random_clause());
    Operationalization extended{clauses};

    auto s = snap({{"perclos", uni(rng)},
                   {"facePosition", rng() % 2 ? 1.0 : 0.0},
                   {"heartBeatsPerMinute", uni(rng)},
                   {"handsOnSteeringWheel", uni(rng) * 2.0}});
    if (eval_operationalization(base, s, kAllVars) == Ternary::True)
      CHECK(eval_operationalization(extended, s, kAllVars) == Ternary::True);
  }
}

TEST_CASE("operationalization constructor rejects contradictory clauses") {
  auto make = [](std::vector<Conjunction> clauses) {
    return Operationalization{std::move(clauses)};
  };
  CHECK_THROWS_AS(
      make({{{"perclos", CmpOp::Ge, 0.1}, {"perclos", CmpOp::Ge, 0.2}}}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      make({{{"facePosition", CmpOp::Eq, 1.0}, {"facePosition", CmpOp::Eq, 0.0}}}),
      std::invalid_argument);
}

TEST_CASE("satisfaction assessment covers Table 2") {
  ContextualRequirement cr1{"cr1", "drowsinessLevel1", ctx1_oper(), "seat_vibration"};

  auto verdict = assess_satisfaction(cr1, Ternary::True,
                                     BehaviorState{"seat_vibration", false, true});
  REQUIRE(verdict.uncertainty.has_value());
  CHECK(kind_of(*verdict.uncertainty) == CaseKind::Case3);
  CHECK(case_requirement(*verdict.uncertainty) == "cr1");
  CHECK_FALSE(verdict.satisfied);

  verdict = assess_satisfaction(cr1, Ternary::False,
                                BehaviorState{"seat_vibration", false, false});
  CHECK(verdict.satisfied);
  CHECK_FALSE(verdict.uncertainty.has_value());

  verdict = assess_satisfaction(cr1, Ternary::False,
                                BehaviorState{"seat_vibration", true, false});
  REQUIRE(verdict.uncertainty.has_value());
  CHECK(kind_of(*verdict.uncertainty) == CaseKind::Case4);

  verdict = assess_satisfaction(cr1, Ternary::True,
                                BehaviorState{"seat_vibration", true, false});
  CHECK(verdict.satisfied);

  ContextualRequirement empty{"cr9", "x", Operationalization{}, "seat_vibration"};
  verdict = assess_satisfaction(empty, Ternary::Unknown,
                                BehaviorState{"seat_vibration", false, false});
  REQUIRE(verdict.uncertainty.has_value());
  CHECK(kind_of(*verdict.uncertainty) == CaseKind::Case1);
}

TEST_CASE("exactly one verdict per assessment") {
  ContextualRequirement cr1{"cr1", "drowsinessLevel1", ctx1_oper(), "seat_vibration"};
  for (Ternary ctx : {Ternary::False, Ternary::True}) {
    for (bool active : {false, true}) {
      auto v = assess_satisfaction(cr1, ctx, BehaviorState{"seat_vibration", active, false});
      CHECK(v.satisfied == !v.uncertainty.has_value());
    }
  }
}

TEST_CASE("sensor anomaly state machine") {
  auto spec = hbpm_spec();

  auto decal = snap({{"heartBeatsPerMinute", 0.25}});
  auto r = detect_sensor_anomaly(spec, decal, SensorStatus::Healthy);
  REQUIRE(r.uncertainty.has_value());
  CHECK(kind_of(*r.uncertainty) == CaseKind::Case2b);
  CHECK(case_variable(*r.uncertainty) == "heartBeatsPerMinute");
  CHECK(r.status == SensorStatus::Decalibrated);

  auto absent = snap({});
  r = detect_sensor_anomaly(spec, absent, SensorStatus::Healthy);
  REQUIRE(r.uncertainty.has_value());
  CHECK(kind_of(*r.uncertainty) == CaseKind::Case2a);
  CHECK(r.status == SensorStatus::Lost);

  auto ok = snap({{"heartBeatsPerMinute", 0.55}});
  r = detect_sensor_anomaly(spec, ok, SensorStatus::Decalibrated);
  REQUIRE(r.uncertainty.has_value());
  CHECK(kind_of(*r.uncertainty) == CaseKind::Case2c);
  CHECK(r.status == SensorStatus::Healthy);

  r = detect_sensor_anomaly(spec, ok, SensorStatus::Lost);
  REQUIRE(r.uncertainty.has_value());
  CHECK(kind_of(*r.uncertainty) == CaseKind::Case2c);
  CHECK(r.status == SensorStatus::Healthy);
}

TEST_CASE("Case2c never fires from a Healthy prior") {
  auto spec = hbpm_spec();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> raw(-30.0, 170.0);
  SensorStatus status = SensorStatus::Healthy;
  for (int i = 0; i < 3000; ++i) {
    EnvironmentSnapshot s;
    if (rng() % 6 != 0) {
      double v = raw(rng);
      s.values["heartBeatsPerMinute"] = std::clamp(normalize_unclamped(v, spec), 0.0, 1.0);
      s.preclamp["heartBeatsPerMinute"] = normalize_unclamped(v, spec);
    }
    SensorStatus prior = status;
    auto r = detect_sensor_anomaly(spec, s, prior);
    if (r.uncertainty && kind_of(*r.uncertainty) == CaseKind::Case2c)
      CHECK(prior != SensorStatus::Healthy);
    // Healthy report never carries an uncertainty besides 2c.
    if (r.status == SensorStatus::Healthy && prior == SensorStatus::Healthy)
      CHECK_FALSE(r.uncertainty.has_value());
    status = r.status;
  }
}

TEST_CASE("strip_variable examples and idempotence") {
  auto stripped = strip_variable(ctx2_oper(), "facePosition");
  Operationalization expected{{{{"perclos", CmpOp::Ge, 0.21},
                                {"heartBeatsPerMinute", CmpOp::Le, 0.55},
                                {"heartBeatsPerMinute", CmpOp::Ge, 0.46}}}};
  CHECK(stripped == expected);
  CHECK_FALSE(stripped.references("facePosition"));

  // Variable not present: no-op.
  CHECK(strip_variable(ctx1_oper(), "facePosition") == ctx1_oper());

  // Stripping the only variable leaves the empty operationalization.
  Operationalization single{{{{"facePosition", CmpOp::Eq, 1.0}}}};
  CHECK(strip_variable(single, "facePosition").empty());

  // Idempotence.
  CHECK(strip_variable(stripped, "facePosition") == stripped);
  CHECK(strip_variable(strip_variable(ctx3_oper(), "handsOnSteeringWheel"),
                       "handsOnSteeringWheel") ==
        strip_variable(ctx3_oper(), "handsOnSteeringWheel"));
}

TEST_CASE("text grammar formats Table 5 exactly") {
  auto aliases = sacre::sim::drowsiness_aliases();
  CHECK(format_operationalization(ctx1_oper(), aliases) ==
        "perclos>=0.15 AND hbpm<=0.6 AND hbpm>=0.56");
  CHECK(format_operationalization(ctx2_oper(), aliases) ==
        "perclos>=0.21 AND facePosition=1 AND hbpm<=0.55 AND hbpm>=0.46");
  CHECK(format_operationalization(ctx3_oper(), aliases) ==
        "perclos>0.3 AND facePosition=1 AND hbpm<=0.45 AND hosw<1");

  Operationalization two{{{{"perclos", CmpOp::Ge, 0.1}},
                          {{"facePosition", CmpOp::Eq, 0.0},
                           {"heartBeatsPerMinute", CmpOp::Ge, 0.56}}}};
  CHECK(format_operationalization(two, aliases) ==
        "perclos>=0.1 OR facePosition=0 AND hbpm>=0.56");
}

TEST_CASE("text grammar round-trips") {
  auto aliases = sacre::sim::drowsiness_aliases();
  for (const auto& op : {ctx1_oper(), ctx2_oper(), ctx3_oper()}) {
    auto text = format_operationalization(op, aliases);
    CHECK(parse_operationalization(text, aliases) == op);
  }
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Conjunction> clauses;
    int nclauses = 1 + static_cast<int>(rng() % 3);
    for (int c = 0; c < nclauses; ++c) {
      Conjunction clause;
      clause.push_back({"perclos", rng() % 2 ? CmpOp::Ge : CmpOp::Gt, uni(rng)});
      if (rng() % 2)
        clause.push_back({"heartBeatsPerMinute", rng() % 2 ? CmpOp::Le : CmpOp::Lt, uni(rng)});
      clauses.push_back(clause);
    }
    Operationalization op{clauses};
    auto text = format_operationalization(op, aliases);
    CHECK(parse_operationalization(text, aliases) == op);
  }
}

TEST_CASE("text grammar rejects malformed input") {
  CHECK_THROWS_AS(parse_operationalization("perclos >= 0.15"),
                  OperationalizationParseError);
  CHECK_THROWS_AS(parse_operationalization("perclos>=abc"),
                  OperationalizationParseError);
  CHECK_THROWS_AS(parse_operationalization("perclos>=0.1 AND"),
                  OperationalizationParseError);
  CHECK(parse_operationalization("").empty());
  CHECK_THROWS_AS(parse_operationalization("perclos==0.1"),
                  OperationalizationParseError);
}

TEST_CASE("format_number uses '.' decimals and shortest form") {
  CHECK(format_number(0.15) == "0.15");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.6) == "0.6");
  CHECK(format_number(0.5549999999999999) == "0.5549999999999999");
}

TEST_CASE("behavior state rejects disabled-and-active") {
  CHECK_THROWS_AS(BehaviorState("seat_vibration", true, true), std::invalid_argument);
}
