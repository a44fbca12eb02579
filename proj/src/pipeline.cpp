#include "rendermem/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "rendermem/image_io.hpp"

namespace rendermem {

using nlohmann::json;

Question Question::attribute(std::string object_id, std::string attribute_name) {
  Question q;
  q.kind = QuestionKind::Attribute;
  q.object_id = std::move(object_id);
  q.attribute_name = std::move(attribute_name);
  return q;
}

Question Question::count(std::string category) {
  Question q;
  q.kind = QuestionKind::Count;
  q.category = std::move(category);
  return q;
}

Question Question::visibility(std::string source_id, std::string target_id) {
  Question q;
  q.kind = QuestionKind::Visibility;
  q.source_id = std::move(source_id);
  q.target_id = std::move(target_id);
  return q;
}

Question question_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw SchemaError("question needs a string 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  const auto str = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_string() || j[key].get<std::string>().empty()) {
      throw SchemaError(std::string("question missing field '") + key + "'");
    }
    return j[key].get<std::string>();
  };
  if (kind == "count") {
    return Question::count(str("category"));
  }
  if (kind == "attribute") {
    return Question::attribute(str("object_id"), str("attribute"));
  }
  if (kind == "visibility") {
    return Question::visibility(str("source"), str("target"));
  }
  throw SchemaError("question kind must be count | attribute | visibility");
}

json question_to_json(const Question& q) {
  switch (q.kind) {
    case QuestionKind::Count:
      return {{"kind", "count"}, {"category", q.category}};
    case QuestionKind::Attribute:
      return {{"kind", "attribute"}, {"object_id", q.object_id},
              {"attribute", q.attribute_name}};
    case QuestionKind::Visibility:
      return {{"kind", "visibility"}, {"source", q.source_id}, {"target", q.target_id}};
  }
  throw std::logic_error("unreachable");
}

std::string question_text(const Question& q) {
  switch (q.kind) {
    case QuestionKind::Count:
      return "How many instances of " + q.category + " are in the room?";
    case QuestionKind::Attribute:
      return "What is the " + q.attribute_name + " state of " + q.object_id + "?";
    case QuestionKind::Visibility:
      return "Is " + q.target_id + " visible from " + q.source_id + "?";
  }
  throw std::logic_error("unreachable");
}

std::string kind_name(QuestionKind kind) {
  switch (kind) {
    case QuestionKind::Attribute: return "attribute";
    case QuestionKind::Count: return "count";
    case QuestionKind::Visibility: return "visibility";
  }
  return "?";
}

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::OneStep: return "1step";
    case Strategy::TwoStep: return "2step";
    case Strategy::ThreeStep: return "3step";
  }
  return "?";
}

Strategy strategy_from_name(const std::string& name) {
  if (name == "1step" || name == "1") return Strategy::OneStep;
  if (name == "2step" || name == "2") return Strategy::TwoStep;
  if (name == "3step" || name == "3") return Strategy::ThreeStep;
  throw DomainError("unknown strategy '" + name + "'");
}

namespace {

const ObjectRecord& require_object(const std::vector<ObjectRecord>& objects,
                                   const std::string& id) {
  for (const ObjectRecord& o : objects) {
    if (o.id == id) return o;
  }
  throw UnknownObject("no object with id '" + id + "'");
}

void validate_question(const Question& q, const std::vector<ObjectRecord>& objects) {
  switch (q.kind) {
    case QuestionKind::Count: {
      const std::string wanted = q.category;
      const bool present = std::any_of(objects.begin(), objects.end(),
                                       [&](const ObjectRecord& o) {
                                         return category_of(o.id) == wanted;
                                       });
      if (!present) {
        throw UnknownObject("no objects of category '" + wanted + "'");
      }
      return;
    }
    case QuestionKind::Attribute: {
      const ObjectRecord& o = require_object(objects, q.object_id);
      if (!o.attributes.count(q.attribute_name)) {
        throw UnknownAttribute("object '" + q.object_id + "' has no attribute '" +
                               q.attribute_name + "'");
      }
      return;
    }
    case QuestionKind::Visibility:
      require_object(objects, q.source_id);
      require_object(objects, q.target_id);
      return;
  }
}

struct ColorDirection {
  double r = 0.0, g = 0.0, b = 0.0;
  double norm() const { return std::sqrt(r * r + g * g + b * b); }
};

double direction_cosine(const ColorDirection& a, const ColorDirection& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return -1.0;
  return (a.r * b.r + a.g * b.g + a.b * b.b) / (na * nb);
}

// Aggregated RGB mass of all pixels labeled with `numeric_id`.
std::pair<size_t, ColorDirection> collect_object_pixels(
    const std::vector<RenderedView>& views, uint16_t numeric_id) {
  size_t count = 0;
  ColorDirection sum;
  for (const RenderedView& view : views) {
    for (size_t p = 0; p < view.pixel_count(); ++p) {
      if (view.ids[p] != numeric_id) continue;
      ++count;
      sum.r += view.rgb[p * 3 + 0];
      sum.g += view.rgb[p * 3 + 1];
      sum.b += view.rgb[p * 3 + 2];
    }
  }
  return {count, sum};
}

}  // namespace

RenderDecision decide_rendering(const Question& question,
                                const std::vector<ObjectRecord>& objects) {
  validate_question(question, objects);
  if (question.kind == QuestionKind::Count) {
    const auto n = std::count_if(objects.begin(), objects.end(),
                                 [&](const ObjectRecord& o) {
                                   return category_of(o.id) == question.category;
                                 });
    return {Answer{std::to_string(n), std::nullopt}};
  }
  return {};  // attribute and visibility need visual evidence
}

RenderSpec specify_rendering(const Question& question,
                             const std::vector<ObjectRecord>& objects,
                             const PipelineConfig& config) {
  validate_question(question, objects);
  RenderSpec spec;
  spec.alpha = config.alpha;
  spec.view_count = config.view_count;
  spec.elevation = config.elevation;
  switch (question.kind) {
    case QuestionKind::Count:
      throw AnchorArityError("count questions never reach the specification stage");
    case QuestionKind::Attribute:
      spec.mode = RenderMode::Surround;
      spec.object_id = question.object_id;
      return spec;
    case QuestionKind::Visibility:
      spec.mode = RenderMode::Directional;
      spec.source_id = question.source_id;
      spec.target_id = question.target_id;
      return spec;
  }
  throw std::logic_error("unreachable");
}

Answer oracle_reason(const Question& question, const std::vector<RenderedView>& views,
                     const SceneState& scene, const PipelineConfig& config) {
  if (question.kind == QuestionKind::Count) {
    throw std::logic_error("count questions are answered before rendering");
  }
  if (views.empty()) {
    return {"unknown", std::nullopt};
  }

  if (question.kind == QuestionKind::Visibility) {
    const ObjectRecord& target = scene.get(question.target_id);
    const auto [count, sum] = collect_object_pixels(views, target.numeric_id);
    const double pixels = static_cast<double>(views[0].width) * views[0].height;
    const auto p_min = std::max<long>(1, std::lround(config.p_min * pixels / 65536.0));
    if (count < static_cast<size_t>(p_min)) {
      return {"no", std::nullopt};
    }
    // The labeled pixels must still look like the target; corrupted evidence
    // that buries the appearance defeats recognition.
    const Rgb expected = effective_color(target);
    const int brightness = expected.r + expected.g + expected.b;
    if (brightness >= 30) {
      const ColorDirection want{static_cast<double>(expected.r),
                                static_cast<double>(expected.g),
                                static_cast<double>(expected.b)};
      if (direction_cosine(sum, want) < config.color_match_min_cos) {
        return {"no", std::nullopt};
      }
    }
    return {"yes", std::nullopt};
  }

  // Attribute: read the dominant observed color and invert the state -> color
  // table over every possible assignment of the color-mapped attributes.
  const ObjectRecord& object = scene.get(question.object_id);
  const auto it = object.attributes.find(question.attribute_name);
  if (it == object.attributes.end()) {
    throw UnknownAttribute("object '" + object.id + "' has no attribute '" +
                           question.attribute_name + "'");
  }
  const auto [count, sum] = collect_object_pixels(views, object.numeric_id);
  if (count == 0) {
    return {"unknown", std::nullopt};
  }
  if (it->second.colors.empty()) {
    return {"unknown", std::nullopt};  // attribute has no visual encoding
  }

  std::vector<const std::string*> names;
  std::vector<const AttributeSpec*> specs;
  for (const auto& [name, spec] : object.attributes) {
    if (!spec.colors.empty()) {
      names.push_back(&name);
      specs.push_back(&spec);
    }
  }
  std::vector<size_t> pick(specs.size(), 0);
  double best_cos = -2.0;
  std::string best_value;
  for (;;) {
    double acc[3] = {0.0, 0.0, 0.0};
    for (size_t a = 0; a < specs.size(); ++a) {
      const Rgb c = specs[a]->colors.at(specs[a]->domain[pick[a]]);
      acc[0] += c.r;
      acc[1] += c.g;
      acc[2] += c.b;
    }
    const ColorDirection blend{acc[0] / specs.size(), acc[1] / specs.size(),
                               acc[2] / specs.size()};
    const double cos = direction_cosine(sum, blend);
    if (cos > best_cos) {
      best_cos = cos;
      for (size_t a = 0; a < specs.size(); ++a) {
        if (*names[a] == question.attribute_name) {
          best_value = specs[a]->domain[pick[a]];
        }
      }
    }
    size_t a = 0;
    while (a < pick.size()) {
      if (++pick[a] < specs[a]->domain.size()) break;
      pick[a] = 0;
      ++a;
    }
    if (a == pick.size()) break;
  }
  if (best_value.empty()) {
    return {"unknown", std::nullopt};
  }
  return {best_value, std::nullopt};
}

namespace {

std::vector<RenderedView> synthesize_and_render(const SceneState& scene,
                                                const RenderSpec& spec,
                                                const PipelineConfig& config,
                                                QueryTrace& trace) {
  CameraIntrinsics intrinsics;
  intrinsics.fov_v = config.fov_v;
  intrinsics.aspect = static_cast<double>(config.width) / config.height;
  intrinsics.near = config.near;

  std::vector<CameraPose> poses;
  std::optional<uint16_t> self_skip;
  if (spec.mode == RenderMode::Surround) {
    const ObjectRecord& anchor = scene.get(spec.object_id);
    poses = surround_poses(anchor.sphere, intrinsics, spec.alpha, spec.view_count,
                           spec.elevation, scene.declared_up);
  } else {
    const ObjectRecord& source = scene.get(spec.source_id);
    const ObjectRecord& target = scene.get(spec.target_id);
    poses.push_back(
        directional_pose(source.sphere, target.sphere.center, scene.declared_up));
    self_skip = source.numeric_id;
  }

  std::vector<RenderedView> views;
  views.reserve(poses.size());
  for (const CameraPose& pose : poses) {
    RenderedView view = render(scene, pose, intrinsics, config.width, config.height,
                               self_skip, config.render_threads);
    ++trace.render_count;
    if (config.view_filter) {
      config.view_filter(view);
    }
    views.push_back(std::move(view));
  }
  trace.poses = poses;

  if (!config.trace_dir.empty()) {
    std::filesystem::create_directories(config.trace_dir);
    for (size_t i = 0; i < views.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "view_%02zu", i);
      const std::string rgb_path = config.trace_dir + "/" + name + ".ppm";
      const std::string id_path = config.trace_dir + "/" + name + ".ids.pgm";
      write_view(views[i], rgb_path, id_path);
      trace.view_paths.push_back(rgb_path);
    }
  }
  return views;
}

json object_list_json(const std::vector<ObjectRecord>& objects) {
  json list = json::array();
  for (const ObjectRecord& o : objects) {
    list.push_back({{"id", o.id},
                    {"center", {o.sphere.center.x, o.sphere.center.y, o.sphere.center.z}},
                    {"radius", o.sphere.radius}});
  }
  return list;
}

std::string wire_exchange(Reasoner& reasoner, const std::string& text,
                          const json& images, const json& object_list,
                          Strategy strategy, int stage) {
  const json request = {{"role", "reason"},       {"question", text},
                        {"images", images},       {"object_list", object_list},
                        {"strategy", strategy_name(strategy)}, {"stage", stage}};
  const json response = reasoner.exchange(request);
  if (!response.is_object() || !response.contains("answer") ||
      !response["answer"].is_string()) {
    throw ProtocolError("reasoner response must be {\"answer\": string}");
  }
  return response["answer"].get<std::string>();
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> tokens;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    tokens.push_back(tok);
  }
  return tokens;
}

// "surround <object>" or "directional <source> <target>".
void parse_mode_anchors(const std::vector<std::string>& tokens, RenderSpec& spec) {
  if (tokens.size() == 2 && tokens[0] == "surround") {
    spec.mode = RenderMode::Surround;
    spec.object_id = tokens[1];
    return;
  }
  if (tokens.size() == 3 && tokens[0] == "directional") {
    spec.mode = RenderMode::Directional;
    spec.source_id = tokens[1];
    spec.target_id = tokens[2];
    return;
  }
  throw ProtocolError("cannot parse rendering specification from reasoner reply");
}

}  // namespace

std::pair<Answer, QueryTrace> answer(const Question& question, const SceneState& scene,
                                     Reasoner& reasoner, Strategy strategy,
                                     const PipelineConfig& config) {
  const std::vector<ObjectRecord>& objects = object_list(scene);
  validate_question(question, objects);

  QueryTrace trace;
  trace.strategy = strategy;
  trace.reasoner_name = reasoner.name();

  if (reasoner.is_oracle()) {
    const RenderDecision decision = decide_rendering(question, objects);
    trace.requested_rendering = decision.request_rendering();
    if (!decision.request_rendering()) {
      return {*decision.direct, trace};
    }
    const RenderSpec spec = specify_rendering(question, objects, config);
    trace.spec = spec;
    const auto views = synthesize_and_render(scene, spec, config, trace);
    return {oracle_reason(question, views, scene, config), trace};
  }

  // Wire binding: the strategy fixes how many exchanges carry the decisions.
  const std::string text = question_text(question);
  const json objects_json = object_list_json(objects);
  const json no_images = json::array();
  int stage = 1;

  RenderSpec spec;
  spec.alpha = config.alpha;
  spec.view_count = config.view_count;
  spec.elevation = config.elevation;

  if (strategy == Strategy::OneStep) {
    const std::string reply =
        wire_exchange(reasoner, text, no_images, objects_json, strategy, stage++);
    const auto tokens = split_tokens(reply);
    if (!tokens.empty() && tokens[0] == "direct") {
      if (tokens.size() < 2) {
        throw ProtocolError("'direct' reply carries no answer");
      }
      std::string direct = tokens[1];
      for (size_t i = 2; i < tokens.size(); ++i) {
        direct += " " + tokens[i];
      }
      trace.requested_rendering = false;
      return {Answer{direct, std::nullopt}, trace};
    }
    parse_mode_anchors(tokens, spec);
  } else {
    const std::string necessity =
        wire_exchange(reasoner, text, no_images, objects_json, strategy, stage++);
    if (necessity != "render") {
      trace.requested_rendering = false;
      return {Answer{necessity, std::nullopt}, trace};
    }
    if (strategy == Strategy::TwoStep) {
      const std::string reply =
          wire_exchange(reasoner, text, no_images, objects_json, strategy, stage++);
      parse_mode_anchors(split_tokens(reply), spec);
    } else {
      const std::string mode =
          wire_exchange(reasoner, text, no_images, objects_json, strategy, stage++);
      const std::string anchors =
          wire_exchange(reasoner, text, no_images, objects_json, strategy, stage++);
      const auto anchor_tokens = split_tokens(anchors);
      if (mode == "surround" && anchor_tokens.size() == 1) {
        spec.mode = RenderMode::Surround;
        spec.object_id = anchor_tokens[0];
      } else if (mode == "directional" && anchor_tokens.size() == 2) {
        spec.mode = RenderMode::Directional;
        spec.source_id = anchor_tokens[0];
        spec.target_id = anchor_tokens[1];
      } else {
        throw ProtocolError("cannot parse mode/anchor replies from reasoner");
      }
    }
  }

  trace.requested_rendering = true;
  trace.spec = spec;
  const auto views = synthesize_and_render(scene, spec, config, trace);

  json images = json::array();
  for (const RenderedView& view : views) {
    images.push_back(base64_encode(encode_ppm(view.width, view.height, view.rgb)));
  }
  const std::string final_reply =
      wire_exchange(reasoner, text, images, objects_json, strategy, stage);
  return {Answer{final_reply, std::nullopt}, trace};
}

}  // namespace rendermem
