#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rendermem/pipeline.hpp"
#include "test_scenes.hpp"

using namespace rendermem;

namespace {

const SceneState& room() {
  static const SceneState scene = load_scene(room_fixture_document());
  return scene;
}

PipelineConfig fast_config() {
  PipelineConfig cfg;
  cfg.width = 128;
  cfg.height = 128;
  cfg.view_count = 6;
  return cfg;
}

}  // namespace

TEST_CASE("rendering decision gate") {
  const auto& objects = object_list(room());

  SUBCASE("count questions are answered directly") {
    const RenderDecision d = decide_rendering(Question::count("Chair"), objects);
    REQUIRE(!d.request_rendering());
    CHECK(d.direct->text == "2");
    CHECK(decide_rendering(Question::count("Tv"), objects).direct->text == "2");
    CHECK(decide_rendering(Question::count("Sofa"), objects).direct->text == "1");
  }
  SUBCASE("attribute and visibility always request rendering") {
    CHECK(decide_rendering(Question::attribute("Tv_0", "toggled"), objects)
              .request_rendering());
    CHECK(decide_rendering(Question::visibility("Sofa_0", "Tv_0"), objects)
              .request_rendering());
  }
  SUBCASE("unknown references") {
    CHECK_THROWS_AS(decide_rendering(Question::visibility("Ghost_0", "Tv_0"), objects),
                    UnknownObject);
    CHECK_THROWS_AS(decide_rendering(Question::count("Unicorn"), objects),
                    UnknownObject);
    CHECK_THROWS_AS(decide_rendering(Question::attribute("Tv_0", "volume"), objects),
                    UnknownAttribute);
  }
}

TEST_CASE("rendering specification carries mode-matched anchors") {
  const auto& objects = object_list(room());
  const RenderSpec surround =
      specify_rendering(Question::attribute("Tv_0", "toggled"), objects);
  CHECK(surround.mode == RenderMode::Surround);
  CHECK(surround.object_id == "Tv_0");
  CHECK(surround.alpha >= 1.0);
  CHECK(surround.view_count >= 1);

  const RenderSpec directional =
      specify_rendering(Question::visibility("Sofa_0", "Tv_0"), objects);
  CHECK(directional.mode == RenderMode::Directional);
  CHECK(directional.source_id == "Sofa_0");
  CHECK(directional.target_id == "Tv_0");

  CHECK_THROWS_AS(specify_rendering(Question::count("Chair"), objects),
                  AnchorArityError);
}

TEST_CASE("oracle answer: count path renders nothing") {
  OracleReasoner oracle;
  const auto [ans, trace] = answer(Question::count("Chair"), room(), oracle,
                                   Strategy::TwoStep, fast_config());
  CHECK(ans.text == "2");
  CHECK(!trace.requested_rendering);
  CHECK(trace.render_count == 0);
  CHECK(trace.poses.empty());
  CHECK(!trace.spec.has_value());
}

TEST_CASE("oracle answer: unobstructed visibility is yes with one pose") {
  OracleReasoner oracle;
  const auto [ans, trace] = answer(Question::visibility("Sofa_0", "Tv_0"), room(),
                                   oracle, Strategy::TwoStep, fast_config());
  CHECK(ans.text == "yes");
  CHECK(trace.requested_rendering);
  CHECK(trace.render_count == 1);
  REQUIRE(trace.poses.size() == 1);
  REQUIRE(trace.spec.has_value());
  CHECK(trace.spec->mode == RenderMode::Directional);
  // camera sits on the source sphere surface
  const ObjectRecord& sofa = room().get("Sofa_0");
  CHECK(std::abs((trace.poses[0].position - sofa.sphere.center).norm() -
                 sofa.sphere.radius) < 1e-9);
}

TEST_CASE("oracle answer: walled-off target is no") {
  OracleReasoner oracle;
  const auto [ans, trace] = answer(Question::visibility("Sofa_0", "Tv_1"), room(),
                                   oracle, Strategy::TwoStep, fast_config());
  CHECK(ans.text == "no");
  CHECK(trace.render_count == 1);
}

TEST_CASE("oracle answer: attribute reading tracks interactions immediately") {
  OracleReasoner oracle;
  const Question q = Question::attribute("Tv_0", "toggled");
  const auto before = answer(q, room(), oracle, Strategy::TwoStep, fast_config());
  CHECK(before.first.text == "off");
  CHECK(before.second.render_count == fast_config().view_count);
  CHECK(before.second.poses.size() == static_cast<size_t>(fast_config().view_count));

  // no memory-update call: the same scene object, one interaction applied
  const SceneState toggled =
      apply_interaction(room(), {"Tv_0", InteractionAction::Toggle});
  const auto after = answer(q, toggled, oracle, Strategy::TwoStep, fast_config());
  CHECK(after.first.text == "on");

  // and every other attribute answer stays put
  const auto other = answer(Question::attribute("Tv_1", "toggled"), toggled, oracle,
                            Strategy::TwoStep, fast_config());
  CHECK(other.first.text == "off");
}

TEST_CASE("oracle answers are deterministic and strategy-invariant") {
  OracleReasoner oracle;
  const PipelineConfig cfg = fast_config();
  const std::vector<Question> questions = {
      Question::count("Chair"), Question::attribute("Tv_0", "toggled"),
      Question::visibility("Sofa_0", "Tv_0"), Question::visibility("Sofa_0", "Tv_1")};
  for (const Question& q : questions) {
    const auto one = answer(q, room(), oracle, Strategy::OneStep, cfg);
    const auto two = answer(q, room(), oracle, Strategy::TwoStep, cfg);
    const auto three = answer(q, room(), oracle, Strategy::ThreeStep, cfg);
    CHECK(one.first.text == two.first.text);
    CHECK(two.first.text == three.first.text);
    CHECK(one.second.strategy == Strategy::OneStep);
    CHECK(two.second.strategy == Strategy::TwoStep);
    CHECK(three.second.strategy == Strategy::ThreeStep);
    const auto again = answer(q, room(), oracle, Strategy::TwoStep, cfg);
    CHECK(again.first.text == two.first.text);
  }
}

TEST_CASE("oracle_reason thresholds on synthetic views") {
  PipelineConfig cfg;
  const SceneState& scene = room();
  const uint16_t tv = scene.get("Tv_0").numeric_id;

  RenderedView view;
  view.width = 256;
  view.height = 256;
  view.rgb.assign(view.pixel_count() * 3, 0);
  view.ids.assign(view.pixel_count(), 0);
  view.depth.assign(view.pixel_count(), kDepthMiss);

  SUBCASE("zero target pixels -> no") {
    const Answer a =
        oracle_reason(Question::visibility("Sofa_0", "Tv_0"), {view}, scene, cfg);
    CHECK(a.text == "no");
  }
  SUBCASE("500 well-colored target pixels -> yes") {
    const Rgb c = effective_color(scene.get("Tv_0"));
    for (size_t p = 0; p < 500; ++p) {
      view.ids[p] = tv;
      view.rgb[p * 3 + 0] = c.r;
      view.rgb[p * 3 + 1] = c.g;
      view.rgb[p * 3 + 2] = c.b;
      view.depth[p] = 3.0;
    }
    const Answer a =
        oracle_reason(Question::visibility("Sofa_0", "Tv_0"), {view}, scene, cfg);
    CHECK(a.text == "yes");
  }
  SUBCASE("labels whose color no longer matches the object -> no") {
    const uint16_t sofa = scene.get("Sofa_0").numeric_id;
    for (size_t p = 0; p < 500; ++p) {
      view.ids[p] = sofa;
      view.rgb[p * 3 + 0] = 40;  // background gray, not the sofa blue
      view.rgb[p * 3 + 1] = 40;
      view.rgb[p * 3 + 2] = 40;
      view.depth[p] = 3.0;
    }
    const Answer a =
        oracle_reason(Question::visibility("Tv_0", "Sofa_0"), {view}, scene, cfg);
    CHECK(a.text == "no");
  }
  SUBCASE("attribute with no visible pixels abstains") {
    const Answer a =
        oracle_reason(Question::attribute("Tv_0", "toggled"), {view}, scene, cfg);
    CHECK(a.text == "unknown");
  }
}

TEST_CASE("question JSON round-trip and text templates") {
  const Question q1 = question_from_json({{"kind", "count"}, {"category", "Chair"}});
  CHECK(q1.kind == QuestionKind::Count);
  CHECK(question_text(q1) == "How many instances of Chair are in the room?");

  const Question q2 = question_from_json(
      {{"kind", "attribute"}, {"object_id", "Tv_0"}, {"attribute", "toggled"}});
  CHECK(question_text(q2) == "What is the toggled state of Tv_0?");

  const Question q3 = question_from_json(
      {{"kind", "visibility"}, {"source", "Sofa_0"}, {"target", "Tv_0"}});
  CHECK(question_text(q3) == "Is Tv_0 visible from Sofa_0?");

  for (const Question& q : {q1, q2, q3}) {
    const Question back = question_from_json(question_to_json(q));
    CHECK(back.kind == q.kind);
    CHECK(back.category == q.category);
    CHECK(back.object_id == q.object_id);
    CHECK(back.attribute_name == q.attribute_name);
    CHECK(back.source_id == q.source_id);
    CHECK(back.target_id == q.target_id);
  }

  CHECK_THROWS_AS(question_from_json({{"kind", "poetry"}}), SchemaError);
  CHECK_THROWS_AS(question_from_json({{"kind", "count"}}), SchemaError);
}
