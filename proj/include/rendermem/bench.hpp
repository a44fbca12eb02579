#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rendermem/perturb.hpp"
#include "rendermem/pipeline.hpp"

namespace rendermem {

struct QAItem {
  Question question;
  std::vector<InteractionEvent> interactions;  // applied before the question
  std::string truth;
  std::string truth_provenance;
};

struct QASuite {
  std::string scene_path;      // reference to a scene file, may be empty
  std::string scene_document;  // resolved scene JSON text
  std::vector<QAItem> items;
  uint64_t seed = 0;
};

// Deterministic normalization + equivalence: yes/no synonym collapse for
// yes/no questions, numeral extraction for counts, token equality for
// attribute values. Unparseable predictions score 0.
int binary_match(const std::string& prediction, const std::string& truth,
                 const Question& question);

struct GeneratorConfig {
  double room_width = 10.0;
  double room_depth = 8.0;
  double room_height = 3.0;
  int object_count_min = 8;
  int object_count_max = 12;
  double wall_margin = 1.5;       // object keep-out from walls
  double occluder_density = 0.5;  // fraction of visibility pairs walled off
  int count_questions = 3;
  int attribute_questions = 5;
  int visibility_questions = 6;
  double dynamic_fraction = 0.5;  // attribute items preceded by interactions

  // Visibility ground truth: stratified rays over the target sphere's
  // camera-facing hemisphere; visible iff the fraction first-hitting the
  // target reaches tau. Items inside [tau*margin_lo, tau*margin_hi) are
  // ambiguous and regenerated.
  double tau = 0.02;
  int visibility_rays = 512;
  double margin_lo = 0.5;
  double margin_hi = 4.0;

  int max_retries = 64;
};

// Fraction of stratified hemisphere rays from the directional camera
// position whose first hit is the target's own surface. Independent of the
// rendering pipeline; this is the benchmark's ground-truth visibility.
double visibility_fraction(const SceneState& scene, const ObjectRecord& source,
                           const ObjectRecord& target, int rays, double near = 0.05);

// Procedural room + QA items with generator-owned ground truth. Byte-stable
// for a fixed (config, seed).
std::pair<std::string, QASuite> generate_suite(const GeneratorConfig& config,
                                               uint64_t seed);

struct ReportItem {
  size_t index = 0;
  std::string kind;
  std::string prediction;
  std::string truth;
  int match = 0;
  bool rendered = false;
  int poses = 0;
  std::string error;
};

struct KindStats {
  double accuracy = 0.0;
  int n = 0;
};

struct Report {
  std::vector<ReportItem> items;
  std::map<std::string, KindStats> aggregate;  // per question kind
  PerturbConfig perturb;
};

// Runs every item on a fresh scene copy; sphere noise is drawn once per call
// (lambda), image corruption is applied to rendered evidence before the
// reasoner sees it (delta, gamma; an op runs only when its knob is > 0).
// Per-item failures score 0 with an error tag and never abort the suite.
Report run_suite(const QASuite& suite, Reasoner& reasoner,
                 const std::optional<PerturbConfig>& perturb = std::nullopt,
                 const PipelineConfig& pipeline_config = {},
                 Strategy strategy = Strategy::TwoStep, Reasoner* judge = nullptr);

struct SweepGrid {
  std::vector<double> delta;
  std::vector<double> gamma;
  std::vector<double> lambda;
};

struct SweepPoint {
  std::string axis;
  double value = 0.0;
  Report report;
};

// One run per (axis, value) with the other knobs at zero.
std::vector<SweepPoint> run_sweep(const QASuite& suite, Reasoner& reasoner,
                                  const SweepGrid& grid, uint64_t perturb_seed,
                                  const PipelineConfig& pipeline_config = {},
                                  Strategy strategy = Strategy::TwoStep);

// Serialization.
QASuite load_suite_file(const std::string& path);
std::string save_suite(const QASuite& suite);
nlohmann::json report_to_json(const Report& report);
std::string sweep_csv(const std::vector<SweepPoint>& points);
SweepGrid load_sweep_file(const std::string& path);

}  // namespace rendermem
