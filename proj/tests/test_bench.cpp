#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <fstream>

#include "rendermem/bench.hpp"
#include "test_scenes.hpp"

using namespace rendermem;

namespace {

GeneratorConfig small_config() {
  GeneratorConfig cfg;
  cfg.room_width = 8;
  cfg.room_depth = 6;
  cfg.object_count_min = 6;
  cfg.object_count_max = 8;
  cfg.count_questions = 2;
  cfg.attribute_questions = 2;
  cfg.visibility_questions = 3;
  return cfg;
}

PipelineConfig fast_pipeline() {
  PipelineConfig cfg;
  cfg.width = 128;
  cfg.height = 128;
  cfg.view_count = 6;
  return cfg;
}

}  // namespace

TEST_CASE("binary match normalization") {
  const Question vis = Question::visibility("Sofa_0", "Tv_0");
  const Question cnt = Question::count("Chair");
  const Question attr = Question::attribute("Tv_0", "toggled");
  const Question battr = Question::attribute("Plate_0", "broken");

  CHECK(binary_match("Yes.", "yes", vis) == 1);
  CHECK(binary_match("Visible", "yes", vis) == 1);
  CHECK(binary_match("Not visible.", "no", vis) == 1);
  CHECK(binary_match("no", "yes", vis) == 0);
  CHECK(binary_match("maybe", "yes", vis) == 0);

  CHECK(binary_match("there are two chairs", "2", cnt) == 1);
  CHECK(binary_match("2", "2", cnt) == 1);
  CHECK(binary_match("3", "2", cnt) == 0);
  CHECK(binary_match("Twenty", "20", cnt) == 1);
  CHECK(binary_match("several", "2", cnt) == 0);

  CHECK(binary_match("on", "on", attr) == 1);
  CHECK(binary_match("On!", "on", attr) == 1);
  CHECK(binary_match("off", "on", attr) == 0);

  // boolean-valued attribute truths collapse with yes/no synonyms
  CHECK(binary_match("yes", "true", battr) == 1);
  CHECK(binary_match("false", "true", battr) == 0);

  // reflexivity on canonical answers
  for (const char* canonical : {"yes", "no", "on", "off", "true", "false", "3"}) {
    CHECK(binary_match(canonical, canonical, attr) == 1);
  }
  CHECK(binary_match("", "yes", vis) == 0);
}

TEST_CASE("visibility fraction: clear vs walled sightlines in the fixture") {
  const SceneState scene = load_scene(room_fixture_document());
  // the TV is a thin panel, so only a modest share of sphere-aimed rays can
  // hit it even with a clear line of sight
  const double open =
      visibility_fraction(scene, scene.get("Sofa_0"), scene.get("Tv_0"), 512);
  const double blocked =
      visibility_fraction(scene, scene.get("Sofa_0"), scene.get("Tv_1"), 512);
  CHECK(open >= 0.04);
  CHECK(blocked < 0.01);
}

TEST_CASE("generator determinism: identical bytes for identical inputs") {
  const auto [scene_a, suite_a] = generate_suite(small_config(), 42);
  const auto [scene_b, suite_b] = generate_suite(small_config(), 42);
  CHECK(scene_a == scene_b);
  CHECK(save_suite(suite_a) == save_suite(suite_b));

  const auto [scene_c, suite_c] = generate_suite(small_config(), 43);
  CHECK(scene_a != scene_c);
}

TEST_CASE("occluder-free scenes only emit clearly visible pairs") {
  GeneratorConfig cfg = small_config();
  cfg.occluder_density = 0.0;
  for (uint64_t seed : {1u, 7u, 42u}) {
    const auto [scene_text, suite] = generate_suite(cfg, seed);
    const SceneState scene = load_scene(scene_text);
    int vis_items = 0;
    for (const QAItem& item : suite.items) {
      if (item.question.kind != QuestionKind::Visibility) continue;
      ++vis_items;
      CHECK(item.truth == "yes");
      // re-derive the truth with the ray oracle
      const double f = visibility_fraction(scene, scene.get(item.question.source_id),
                                           scene.get(item.question.target_id), 512);
      CHECK(f >= cfg.tau * cfg.margin_hi);
    }
    CHECK(vis_items == cfg.visibility_questions);
  }
}

TEST_CASE("full occlusion walls force truth no") {
  GeneratorConfig cfg = small_config();
  cfg.occluder_density = 1.0;
  const auto [scene_text, suite] = generate_suite(cfg, 11);
  const SceneState scene = load_scene(scene_text);
  int vis_items = 0;
  for (const QAItem& item : suite.items) {
    if (item.question.kind != QuestionKind::Visibility) continue;
    ++vis_items;
    CHECK(item.truth == "no");
    const double f = visibility_fraction(scene, scene.get(item.question.source_id),
                                         scene.get(item.question.target_id), 512);
    CHECK(f < cfg.tau * cfg.margin_lo);
  }
  CHECK(vis_items == cfg.visibility_questions);
}

TEST_CASE("generated truths are canonical and well-formed") {
  const auto [scene_text, suite] = generate_suite(small_config(), 99);
  const SceneState scene = load_scene(scene_text);
  for (const QAItem& item : suite.items) {
    CHECK(!item.truth.empty());
    CHECK(!item.truth_provenance.empty());
    switch (item.question.kind) {
      case QuestionKind::Count:
        CHECK(std::all_of(item.truth.begin(), item.truth.end(),
                          [](unsigned char c) { return std::isdigit(c); }));
        break;
      case QuestionKind::Visibility:
        CHECK((item.truth == "yes" || item.truth == "no"));
        break;
      case QuestionKind::Attribute: {
        const ObjectRecord& o = scene.get(item.question.object_id);
        const auto& domain = o.attributes.at(item.question.attribute_name).domain;
        CHECK(std::find(domain.begin(), domain.end(), item.truth) != domain.end());
        break;
      }
    }
  }
}

TEST_CASE("suite save/load round-trip") {
  const auto [scene_text, suite] = generate_suite(small_config(), 5);
  const std::string saved = save_suite(suite);
  const std::string path = "/tmp/rendermem_suite_roundtrip.json";
  {
    std::ofstream out(path, std::ios::binary);
    out << saved;
  }
  const QASuite loaded = load_suite_file(path);
  CHECK(loaded.seed == suite.seed);
  REQUIRE(loaded.items.size() == suite.items.size());
  for (size_t i = 0; i < suite.items.size(); ++i) {
    CHECK(loaded.items[i].truth == suite.items[i].truth);
    CHECK(loaded.items[i].question.kind == suite.items[i].question.kind);
    CHECK(loaded.items[i].interactions.size() == suite.items[i].interactions.size());
  }
  CHECK(save_suite(loaded) == saved);
  std::remove(path.c_str());
}

TEST_CASE("oracle run: counts are exact, zero-perturbation equals baseline") {
  const auto [scene_text, suite] = generate_suite(small_config(), 2024);
  OracleReasoner oracle;
  const Report base = run_suite(suite, oracle, std::nullopt, fast_pipeline());

  REQUIRE(base.aggregate.count("count"));
  CHECK(base.aggregate.at("count").accuracy == 1.0);

  // aggregate equals the mean of item matches
  for (const auto& [kind, stats] : base.aggregate) {
    double sum = 0;
    int n = 0;
    for (const ReportItem& item : base.items) {
      if (item.kind == kind) {
        sum += item.match;
        ++n;
      }
    }
    CHECK(stats.n == n);
    CHECK(stats.accuracy == doctest::Approx(sum / n).epsilon(1e-12));
  }

  // count items never render (trace-verified)
  for (const ReportItem& item : base.items) {
    if (item.kind == "count") {
      CHECK(!item.rendered);
      CHECK(item.poses == 0);
    }
  }

  PerturbConfig zero;
  zero.rng_seed = 9;
  const Report same = run_suite(suite, oracle, zero, fast_pipeline());
  REQUIRE(same.items.size() == base.items.size());
  for (size_t i = 0; i < base.items.size(); ++i) {
    CHECK(same.items[i].prediction == base.items[i].prediction);
    CHECK(same.items[i].match == base.items[i].match);
  }
}

TEST_CASE("item order does not change any prediction") {
  const auto [scene_text, suite] = generate_suite(small_config(), 31);
  QASuite reversed = suite;
  std::reverse(reversed.items.begin(), reversed.items.end());

  OracleReasoner oracle;
  const Report a = run_suite(suite, oracle, std::nullopt, fast_pipeline());
  const Report b = run_suite(reversed, oracle, std::nullopt, fast_pipeline());
  REQUIRE(a.items.size() == b.items.size());
  const size_t n = a.items.size();
  for (size_t i = 0; i < n; ++i) {
    CHECK(a.items[i].prediction == b.items[n - 1 - i].prediction);
    CHECK(a.items[i].match == b.items[n - 1 - i].match);
  }
}

TEST_CASE("per-item failures are recorded, not fatal") {
  auto [scene_text, suite] = generate_suite(small_config(), 8);
  QAItem bad;
  bad.question = Question::visibility("Ghost_77", "Ghost_78");
  bad.truth = "yes";
  suite.items.push_back(bad);
  OracleReasoner oracle;
  const Report report = run_suite(suite, oracle, std::nullopt, fast_pipeline());
  const ReportItem& last = report.items.back();
  CHECK(last.match == 0);
  CHECK(!last.error.empty());
}

TEST_CASE("sweep produces one report per axis value and a CSV") {
  GeneratorConfig cfg = small_config();
  cfg.count_questions = 1;
  cfg.attribute_questions = 1;
  cfg.visibility_questions = 1;
  const auto [scene_text, suite] = generate_suite(cfg, 3);
  OracleReasoner oracle;
  SweepGrid grid;
  grid.lambda = {0.0, 0.4};
  const auto points = run_sweep(suite, oracle, grid, 77, fast_pipeline());
  REQUIRE(points.size() == 2);
  CHECK(points[0].axis == "lambda");
  CHECK(points[0].value == 0.0);
  CHECK(points[1].value == 0.4);

  const std::string csv = sweep_csv(points);
  CHECK(csv.rfind("kind,axis,value,accuracy,n\n", 0) == 0);
  // one row per (point, kind)
  size_t rows = 0;
  for (char c : csv) rows += c == '\n';
  size_t kinds = 0;
  for (const auto& point : points) kinds += point.report.aggregate.size();
  CHECK(rows == kinds + 1);
}

TEST_CASE("report JSON carries aggregates, items and perturb settings") {
  GeneratorConfig cfg = small_config();
  cfg.visibility_questions = 1;
  const auto [scene_text, suite] = generate_suite(cfg, 17);
  OracleReasoner oracle;
  PerturbConfig p;
  p.delta = 0.25;
  p.rng_seed = 5;
  const Report report = run_suite(suite, oracle, p, fast_pipeline());
  const auto doc = report_to_json(report);
  CHECK(doc.contains("aggregate"));
  CHECK(doc["items"].size() == suite.items.size());
  CHECK(doc["perturb"]["delta"] == 0.25);
}
