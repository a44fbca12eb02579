#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rendermem/reasoner.hpp"
#include "rendermem/render.hpp"
#include "rendermem/scene.hpp"
#include "rendermem/viewpoint.hpp"

namespace rendermem {

enum class QuestionKind { Attribute, Count, Visibility };

struct Question {
  QuestionKind kind = QuestionKind::Count;
  std::string object_id;        // attribute
  std::string attribute_name;   // attribute
  std::string category;         // count
  std::string source_id;        // visibility
  std::string target_id;        // visibility

  static Question attribute(std::string object_id, std::string attribute_name);
  static Question count(std::string category);
  static Question visibility(std::string source_id, std::string target_id);
};

Question question_from_json(const nlohmann::json& j);
nlohmann::json question_to_json(const Question& q);
std::string kind_name(QuestionKind kind);

// Natural-language rendering used on the wire protocol.
std::string question_text(const Question& q);

struct Answer {
  std::string text;
  std::optional<double> confidence;
};

// Outcome of the rendering-decision stage: either a direct answer or a
// request for visual evidence.
struct RenderDecision {
  std::optional<Answer> direct;
  bool request_rendering() const { return !direct.has_value(); }
};

enum class Strategy { OneStep = 1, TwoStep = 2, ThreeStep = 3 };

std::string strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

struct QueryTrace {
  bool requested_rendering = false;
  std::optional<RenderSpec> spec;
  std::vector<CameraPose> poses;
  std::vector<std::string> view_paths;
  std::string reasoner_name;
  Strategy strategy = Strategy::TwoStep;
  int render_count = 0;
};

struct PipelineConfig {
  int width = 256;
  int height = 256;
  double fov_v = 1.5707963267948966;  // 90 deg vertical
  double near = 0.05;
  double alpha = 1.5;
  int view_count = 8;
  double elevation = 0.3490658503988659;  // 20 deg

  // Oracle visibility: minimum target-ID pixel count at 256x256, scaled with
  // pixel count.
  double p_min = 10.0;
  // Oracle color verification: min cosine between the aggregated target
  // pixels and the expected appearance direction in RGB space.
  double color_match_min_cos = 0.95;

  int render_threads = 0;  // 0 = hardware concurrency
  std::string trace_dir;   // when set, evidence views are written here

  // Evidence corruption hook, applied to each rendered view before it
  // reaches the reasoner (bench wires blur/ghosting through this).
  std::function<void(RenderedView&)> view_filter;
};

// The rendering-decision gate: count questions are answered directly from
// the object list; attribute and visibility questions request rendering.
RenderDecision decide_rendering(const Question& question,
                                const std::vector<ObjectRecord>& objects);

// Mode and anchors for a question that requested rendering.
RenderSpec specify_rendering(const Question& question,
                             const std::vector<ObjectRecord>& objects,
                             const PipelineConfig& config = {});

// Deterministic geometric stand-in for a vision-language model: answers from
// the ID buffers, RGB evidence, and the scene's state -> color tables.
Answer oracle_reason(const Question& question, const std::vector<RenderedView>& views,
                     const SceneState& scene, const PipelineConfig& config = {});

// Full two-stage pipeline: gate, specify, synthesize viewpoints, render,
// reason. For wire bindings the strategy controls how many exchanges carry
// the decisions; the oracle plans deterministically under every strategy.
std::pair<Answer, QueryTrace> answer(const Question& question, const SceneState& scene,
                                     Reasoner& reasoner,
                                     Strategy strategy = Strategy::TwoStep,
                                     const PipelineConfig& config = {});

}  // namespace rendermem
