#include <doctest.h>

#include <cmath>

#include "argexp/errors.hpp"
#include "argexp/expectation.hpp"
#include "support/model.hpp"
#include "support/oracles.hpp"

using namespace argexp;
using namespace argexp::testing;

namespace {

std::vector<SynthSentence> arrest_corpus() {
  std::vector<SynthSentence> c;
  for (int i = 0; i < 4; ++i) {
    c.push_back(transitive("policeman", "arrest", "burglar"));
    c.push_back(transitive("policeman", "arrest", "thief"));
    c.push_back(transitive("officer", "arrest", "burglar"));
    c.push_back(transitive("policeman", "catch", "thief"));
    c.push_back(transitive("singer", "sing", "song"));
    c.push_back(transitive("choir", "sing", "song"));
    c.push_back(transitive("singer", "perform", "anthem"));
  }
  c.push_back(transitive("officer", "interview", "singer"));
  return c;
}

struct Model {
  BuiltSpaces built;
  ModelSpaces spaces;
};

Model model_of(const std::vector<SynthSentence>& corpus) {
  Model m{library_spaces(corpus), {}};
  m.spaces = m.built.spaces.view(BoaVectors::dependency);
  return m;
}

ModelVariant variant(ModelKind kind, std::size_t k, Composition op = Composition::sum) { return {kind, k, op}; }

}  // namespace

TEST_CASE("variant labels") {
  CHECK(variant(ModelKind::deps, 20).label() == "DEPS-SUM");
  CHECK(variant(ModelKind::bow, 20, Composition::mult).label() == "BOW-MULT");
  auto parsed = ModelVariant::parse("BOA-MULT", 30);
  REQUIRE(parsed);
  CHECK(parsed->kind == ModelKind::boa);
  CHECK(parsed->op == Composition::mult);
  CHECK(parsed->k == 30);
  CHECK(!ModelVariant::parse("DEPS", 20));
  CHECK(!ModelVariant::parse("FOO-SUM", 20));
  CHECK(is_replication_k(40));
  CHECK(!is_replication_k(15));
}

TEST_CASE("slot validation") {
  CHECK_NOTHROW(validate_slot(ModelKind::deps, "VERB"));
  CHECK_NOTHROW(validate_slot(ModelKind::deps, "sbj_inv"));
  CHECK_THROWS_AS(validate_slot(ModelKind::deps, "WINDOW"), QueryError);
  CHECK_THROWS_AS(validate_slot(ModelKind::deps, "ARG"), QueryError);
  CHECK_NOTHROW(validate_slot(ModelKind::boa, "ARG_inv"));
  CHECK_THROWS_AS(validate_slot(ModelKind::boa, "obj"), QueryError);
  CHECK_NOTHROW(validate_slot(ModelKind::bow, "WINDOW"));
  CHECK_THROWS_AS(validate_slot(ModelKind::bow, "VERB"), QueryError);
}

TEST_CASE("k = 1 prototype is the top filler's vector") {
  const auto m = model_of(arrest_corpus());
  const auto proto = build_prototype(m.spaces, variant(ModelKind::deps, 1), {"arrest-v", "obj"});
  REQUIRE(proto.fillers.size() == 1);
  const auto& top = proto.fillers[0].filler;
  CHECK(proto.vector == m.built.spaces.dependency.vector_of(top));
  CHECK(proto.fillers[0].rank == 1);
  CHECK(score_filler(m.built.spaces.dependency, proto, top).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("k = 3 prototype is the hand sum of filler vectors") {
  const auto m = model_of(random_corpus(300, 8));
  const auto& space = m.built.spaces.dependency;
  for (const auto& input : {"verb0-v", "verb1-v", "verb2-v"}) {
    const auto proto = build_prototype(m.spaces, variant(ModelKind::deps, 3), {input, "obj"});
    const auto top = space.top_k_fillers(input, "obj", 3);
    CHECK(proto.fillers.size() == top.fillers.size());
    std::map<std::uint32_t, double> sum;
    for (const auto& f : top.fillers) {
      const auto& v = space.vector_of(f);
      for (std::size_t i = 0; i < v.size(); ++i) sum[v.ids()[i]] += v.values()[i];
    }
    CHECK(proto.vector.size() == sum.size());
    for (const auto& [id, value] : sum) CHECK(std::fabs(proto.vector.at(id) - value) <= 1e-12 * value);
    CHECK(recompute(space, proto) == proto.vector);
  }
}

TEST_CASE("composition laws") {
  const auto m = model_of(arrest_corpus());
  const auto a = build_prototype(m.spaces, variant(ModelKind::deps, 5), {"policeman-n", "VERB"});
  const auto b = build_prototype(m.spaces, variant(ModelKind::deps, 5), {"arrest-v", "obj"});
  const auto s = build_prototype(m.spaces, variant(ModelKind::deps, 5), {"sing-v", "obj"});

  const auto ab = compose(a, b, Composition::sum);
  const auto ba = compose(b, a, Composition::sum);
  CHECK(ab.vector == ba.vector);
  CHECK(ab.op == Composition::sum);
  REQUIRE(ab.left);
  CHECK(ab.left->queries == a.queries);
  CHECK(compose(a, b, Composition::mult).vector == compose(b, a, Composition::mult).vector);
  CHECK(recompute(m.built.spaces.dependency, ab) == ab.vector);

  // Disjoint supports multiply to the zero vector.
  const auto disjoint = compose(a, s, Composition::mult);
  CHECK(disjoint.vector.empty());
  const auto zero_score = score_filler(m.built.spaces.dependency, disjoint, "burglar-n");
  CHECK(zero_score.value == 0.0);
  CHECK(zero_score.degenerate);

  Prototype zero;
  zero.space_id = a.space_id;
  CHECK(compose(a, zero, Composition::sum).vector == a.vector);

  Prototype other = a;
  other.space_id = "elsewhere";
  CHECK_THROWS_AS(compose(a, other, Composition::sum), SpaceMismatchError);
}

TEST_CASE("policemen arrest burglars, not singers") {
  const auto corpus = arrest_corpus();
  const auto m = model_of(corpus);
  const std::vector<SlotQuery> inputs{{"policeman-n", "VERB"}, {"arrest-v", "obj"}};
  const auto oracle = oracle_model(corpus);
  for (auto op : {Composition::sum, Composition::mult}) {
    const auto v = variant(ModelKind::deps, 20, op);
    const auto burglar = expectation_update(m.spaces, v, inputs, "burglar-n");
    const auto singer = expectation_update(m.spaces, v, inputs, "singer-n");
    CHECK(burglar.score.value > singer.score.value);
    const std::string ops = op == Composition::sum ? "SUM" : "MULT";
    const std::vector<std::pair<std::string, std::string>> oi{{"policeman-n", "VERB"}, {"arrest-v", "obj"}};
    CHECK(std::fabs(burglar.score.value - static_cast<double>(oracle_expectation(oracle, "DEPS", ops, 20, oi, "burglar-n"))) <= 1e-12);
    CHECK(std::fabs(singer.score.value - static_cast<double>(oracle_expectation(oracle, "DEPS", ops, 20, oi, "singer-n"))) <= 1e-12);
    CHECK(burglar.prototype_sizes.size() == 2);
    CHECK(burglar.fillers_used.size() == 2);
  }
}

TEST_CASE("single input equals score_filler") {
  const auto m = model_of(arrest_corpus());
  const auto v = variant(ModelKind::deps, 10);
  const SlotQuery q{"arrest-v", "obj"};
  const auto proto = build_prototype(m.spaces, v, q);
  const auto direct = score_filler(m.built.spaces.dependency, proto, "thief-n");
  CHECK(expectation_update(m.spaces, v, std::span(&q, 1), "thief-n").score.value == direct.value);
}

TEST_CASE("input order does not matter for SUM") {
  const auto m = model_of(random_corpus(300, 4));
  for (auto kind : {ModelKind::deps, ModelKind::boa, ModelKind::bow}) {
    const std::string slot = kind == ModelKind::deps ? "obj" : kind == ModelKind::boa ? "ARG" : "WINDOW";
    const std::vector<SlotQuery> ab{{"verb0-v", slot}, {"verb1-v", slot}};
    const std::vector<SlotQuery> ba{{"verb1-v", slot}, {"verb0-v", slot}};
    for (auto op : {Composition::sum, Composition::mult}) {
      const auto v = variant(kind, 20, op);
      const auto x = expectation_update(m.spaces, v, ab, "noun0-n").score.value;
      const auto y = expectation_update(m.spaces, v, ba, "noun0-n").score.value;
      CHECK(std::fabs(x - y) <= 1e-12);
    }
  }
}

TEST_CASE("errors") {
  const auto m = model_of(arrest_corpus());
  const auto v = variant(ModelKind::deps, 20);
  const std::vector<SlotQuery> ok{{"arrest-v", "obj"}};
  CHECK_THROWS_AS(expectation_update(m.spaces, v, ok, "blorf-n"), OutOfVocabularyError);
  const std::vector<SlotQuery> oov{{"blorf-n", "obj"}};
  CHECK_THROWS_AS(expectation_update(m.spaces, v, oov, "thief-n"), OutOfVocabularyError);
  const std::vector<SlotQuery> empty{{"thief-n", "obj"}};
  try {
    expectation_update(m.spaces, v, empty, "burglar-n");
    FAIL("expected EmptyPrototypeError");
  } catch (const EmptyPrototypeError& e) {
    CHECK(e.input() == "thief-n");
    CHECK(e.slot() == "obj");
  }
  const std::vector<SlotQuery> bad_slot{{"arrest-v", "WINDOW"}};
  CHECK_THROWS_AS(expectation_update(m.spaces, v, bad_slot, "thief-n"), QueryError);
  CHECK_THROWS_AS(expectation_update(m.spaces, v, std::span<const SlotQuery>{}, "thief-n"), QueryError);
}

TEST_CASE("DEPS distinguishes role order") {
  const auto crafted = crafted_chow(5);
  const auto m = model_of(crafted.corpus);
  const auto v = variant(ModelKind::deps, 20);
  for (const auto& item : crafted.items) {
    const std::vector<SlotQuery> normal{{item.noun1, "sbj_inv"}, {item.noun2, "obj_inv"}};
    const std::vector<SlotQuery> reversed{{item.noun2, "sbj_inv"}, {item.noun1, "obj_inv"}};
    CHECK(expectation_update(m.spaces, v, normal, item.verb).score.value >
          expectation_update(m.spaces, v, reversed, item.verb).score.value);
  }
}

TEST_CASE("every variant matches the brute-force recomputation") {
  const auto corpus = random_corpus(250, 31);
  const auto m = model_of(corpus);
  const auto oracle = oracle_model(corpus);
  struct Case {
    ModelKind kind;
    std::string label;
    std::string s1, s2;
  };
  const Case cases[] = {{ModelKind::deps, "DEPS", "VERB", "obj"},
                        {ModelKind::boa, "BOA", "ARG", "ARG"},
                        {ModelKind::bow, "BOW", "WINDOW", "WINDOW"}};
  std::size_t checked = 0;
  for (const auto& c : cases) {
    for (auto op : {Composition::sum, Composition::mult}) {
      for (std::size_t k : {1, 3, 10}) {
        for (std::size_t n = 0; n < 4; ++n) {
          const auto agent = noun_name(n), verb = verb_name(n % 3);
          const auto candidate = noun_name(n + 1) + "-n";
          const std::vector<SlotQuery> inputs{{agent + "-n", c.s1}, {verb + "-v", c.s2}};
          const auto expected = oracle_expectation(oracle, c.label, op == Composition::sum ? "SUM" : "MULT", k,
                                                   {{agent + "-n", c.s1}, {verb + "-v", c.s2}}, candidate);
          if (expected < 0) {
            CHECK_THROWS_AS(expectation_update(m.spaces, variant(c.kind, k, op), inputs, candidate), EmptyPrototypeError);
            continue;
          }
          const auto got = expectation_update(m.spaces, variant(c.kind, k, op), inputs, candidate).score.value;
          CHECK(std::fabs(got - static_cast<double>(expected)) <= 1e-12);
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 40);
}
