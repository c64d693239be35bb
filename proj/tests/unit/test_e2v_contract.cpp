// Contract between the acoustic inference sidecar and this library: the
// committed sample must pass the same schema checker the pipeline uses.

#include <gtest/gtest.h>

#include "pathoscope/error.hpp"
#include "pathoscope/json_io.hpp"

namespace {

using namespace pathoscope;

const std::filesystem::path kFixtures = PATHOSCOPE_FIXTURE_DIR;

TEST(E2vContract, CommittedSampleValidates) {
  const std::string text = read_text_file(kFixtures / "e2v_probs_sample.json");
  const auto doc = parse_e2v_probs(text);
  EXPECT_FALSE(doc.probs.empty());
  EXPECT_EQ(doc.meta.at("model_id"), "emotion2vec_plus_large");

  // Raw values, before any renormalization by the checker.
  const Json raw = Json::parse(text);
  for (const auto& [id, probs] : raw.items()) {
    if (id == "_meta") continue;
    ASSERT_EQ(probs.size(), kNumEmotionClasses) << id;
    double sum = 0;
    for (auto c : kEmotionClasses) {
      ASSERT_TRUE(probs.contains(std::string(to_string(c)))) << id;
      sum += probs[std::string(to_string(c))].get<double>();
    }
    EXPECT_NEAR(sum, 1.0, 1e-6) << id;
    EXPECT_TRUE(doc.probs.contains(id));
  }
}

TEST(E2vContract, RejectsBrokenMaps) {
  Json raw = Json::parse(read_text_file(kFixtures / "e2v_probs_sample.json"));
  const std::string id = std::prev(raw.end()).key();

  Json missing = raw;
  missing[id].erase("other");
  EXPECT_THROW(parse_e2v_probs(missing.dump()), SchemaError);

  Json extra = raw;
  extra[id]["calm"] = 0.0;
  EXPECT_THROW(parse_e2v_probs(extra.dump()), SchemaError);

  Json off = raw;
  off[id]["neutral"] = off[id]["neutral"].get<double>() + 0.1;
  EXPECT_THROW(parse_e2v_probs(off.dump()), SchemaError);

  Json negative = raw;
  negative[id]["sad"] = -0.2;
  EXPECT_THROW(parse_e2v_probs(negative.dump()), SchemaError);

  EXPECT_THROW(parse_e2v_probs("[]"), SchemaError);
  EXPECT_TRUE(parse_e2v_probs("{}").probs.empty());
}

}  // namespace
