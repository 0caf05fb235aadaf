#include "helpers.hpp"

using namespace testing;

namespace {

Json parse(const char* text) { return Json::parse(text); }

std::vector<std::string> violations(const Json& raw) {
  try {
    parse_system(raw);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::MalformedInput);
    return err.details();
  }
  return {};
}

}  // namespace

TEST_CASE("valid spec files") {
  const auto sys = parse_system(parse(R"({"alphabet": 2, "constraint": {"depth": 0, "dim": 1, "words": {"0": ["1"]}}})"));
  CHECK(sys.sft.alphabet_size() == 2);
  CHECK(sys.sft.allows(1, 1));
  CHECK(sys.potential.depth() == 0);
  CHECK(sys.potential.default_value() == 0.0);
  CHECK(sys.constraint(Word{0}) == RationalVec{q(1)});
  CHECK(sys.constraint(Word{1}) == RationalVec{q(0)});

  const auto golden = validate_spec(parse(R"({"alphabet": 2, "transitions": [[1, 1], [1, 0]]})"));
  CHECK_FALSE(golden.allows(1, 1));
  CHECK(build_graph(golden, Potential(0, 0.0), Constraint(0, RationalVec{q(0)})).strongly_connected());

  const auto exact = parse_system(parse(
      R"({"alphabet": 2, "potential": {"depth": 1, "default": "1/4", "words": {"0,1": 2.5}},
          "constraint": {"depth": 0, "dim": 2, "default": ["1/3", 2], "words": {"1": ["-7/9", "0"]}}})"));
  CHECK(exact.potential(Word{0, 0}) == 0.25);
  CHECK(exact.potential(Word{0, 1}) == 2.5);
  CHECK(exact.constraint(Word{0}) == RationalVec{q(1, 3), q(2)});
  CHECK(exact.constraint(Word{1}) == RationalVec{q(-7, 9), q(0)});
}

TEST_CASE("every violation is reported") {
  const auto v = violations(parse(R"({"alphabet": 2, "transitions": [[1, 1], [1]],
      "potential": {"depth": 1, "words": {"0": 1, "0,x": 2}},
      "constraint": {"depth": 0, "dim": 1, "default": ["1/0"], "words": {"0": ["0.5"]}}})"));
  REQUIRE(v.size() >= 5);
  auto mentions = [&](const std::string& needle) {
    for (const auto& s : v) {
      if (s.find(needle) != std::string::npos) return true;
    }
    return false;
  };
  CHECK(mentions("transitions row 1"));
  CHECK(mentions("expected depth + 1"));
  CHECK(mentions("invalid word \"0,x\""));
  CHECK(mentions("constraint default"));
  CHECK(mentions("constraint word \"0\""));

  CHECK(violations(parse(R"({"alphabet": 0, "constraint": {"dim": 1}})")).size() == 1);
  CHECK(violations(parse(R"({"alphabet": 2})")).size() == 1);
  CHECK(violations(parse(R"({"alphabet": 2, "transitions": [[1, 2], [1, 1]], "constraint": {"dim": 1}})")).size() == 1);
  const auto forbidden = violations(parse(
      R"({"alphabet": 2, "transitions": [[1, 1], [1, 0]], "constraint": {"depth": 1, "dim": 1, "words": {"1,1": ["1"]}}})"));
  REQUIRE(forbidden.size() == 1);
  CHECK(forbidden[0].find("not allowed") != std::string::npos);
  CHECK(violations(parse(R"({"alphabet": 2, "constraint": {"dim": 1, "words": {"5": ["1"]}}})")).size() == 1);
}

TEST_CASE("spec round trip") {
  Rng rng(61);
  for (int i = 0; i < 20; ++i) {
    InstanceOptions opt;
    opt.dim = 1 + i % 2;
    const auto sys = random_system(rng, opt);
    const auto back = parse_system(Json::parse(to_json(sys).dump()));
    CHECK(back.sft.transitions() == sys.sft.transitions());
    CHECK(back.potential.values() == sys.potential.values());
    CHECK(back.constraint.values() == sys.constraint.values());
    CHECK(back.constraint.default_value() == sys.constraint.default_value());
  }
}

TEST_CASE("emitted documents satisfy their schema") {
  const auto g = build_graph(three_shift_example());
  const RationalVec h{q(1, 2)};
  CHECK(validate_document("rotation-set", rotation_set_to_json(rotation_set_exact(g))).empty());
  const auto beta_doc = beta_to_json(g, h, solve_beta_primal(g, h));
  CHECK(validate_document("beta", Json::parse(beta_doc.dump())).empty());
  CHECK(beta_doc["measure"]["edges"].contains("1,2"));
  const auto sub = calibrated_subaction(g, g.potential_weights());
  CHECK(validate_document("subaction", subaction_to_json(g, sub, contact_locus(g, sub))).empty());
  CHECK(validate_document("trajectory", trajectory_to_json(g, optimal_trajectory(g, sub, 0, 5))).empty());
  PeriodicQuery query{{q(1, 3)}, 6};
  const auto res = best_periodic_with_rotation(g, query);
  const auto pdoc = periodic_to_json(g, query.r, 6, res);
  CHECK(validate_document("periodic", Json::parse(pdoc.dump())).empty());
  CHECK(pdoc["orbit"]["rotation_vector"][0] == "1/3");
  CHECK(validate_document("error", error_to_json(Error(ErrorCode::InfeasibleR, "x", {{"r", "2"}}))).empty());

  CHECK_FALSE(validate_document("beta", Json::parse(R"({"h": ["x"], "status": "Optimal"})")).empty());
  CHECK_FALSE(validate_document("nope", Json::object()).empty());
}
