#include "rendermem/bench.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "rendermem/image_io.hpp"
#include "rendermem/render.hpp"
#include "rendermem/rng.hpp"

namespace rendermem {

using nlohmann::json;

namespace {

std::string normalize_answer(const std::string& s) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : s) {
    if (std::isalnum(c)) {
      if (pending_space && !out.empty()) out += ' ';
      pending_space = false;
      out += static_cast<char>(std::tolower(c));
    } else {
      pending_space = true;
    }
  }
  return out;
}

// First integer-valued token: digits or a word numeral zero..twenty. -1 when
// none is found.
long parse_count_value(const std::string& normalized) {
  static const std::map<std::string, long> words = {
      {"zero", 0},     {"one", 1},       {"two", 2},      {"three", 3},
      {"four", 4},     {"five", 5},      {"six", 6},      {"seven", 7},
      {"eight", 8},    {"nine", 9},      {"ten", 10},     {"eleven", 11},
      {"twelve", 12},  {"thirteen", 13}, {"fourteen", 14},{"fifteen", 15},
      {"sixteen", 16}, {"seventeen", 17},{"eighteen", 18},{"nineteen", 19},
      {"twenty", 20}};
  std::istringstream in(normalized);
  std::string tok;
  while (in >> tok) {
    if (!tok.empty() && tok.size() <= 9 &&
        std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); })) {
      return std::stol(tok);
    }
    const auto it = words.find(tok);
    if (it != words.end()) {
      return it->second;
    }
  }
  return -1;
}

// 1 = yes-class, 0 = no-class, -1 = neither.
int yes_no_class(const std::string& normalized) {
  if (normalized == "yes" || normalized == "true" || normalized == "visible") return 1;
  if (normalized == "no" || normalized == "false" || normalized == "not visible") return 0;
  return -1;
}

}  // namespace

int binary_match(const std::string& prediction, const std::string& truth,
                 const Question& question) {
  if (prediction.empty() || truth.empty()) return 0;
  const std::string np = normalize_answer(prediction);
  const std::string nt = normalize_answer(truth);
  if (question.kind == QuestionKind::Count) {
    const long vp = parse_count_value(np);
    const long vt = parse_count_value(nt);
    return (vp >= 0 && vp == vt) ? 1 : 0;
  }
  const bool yes_no = question.kind == QuestionKind::Visibility || yes_no_class(nt) != -1;
  if (yes_no) {
    const int cp = yes_no_class(np);
    return (cp != -1 && cp == yes_no_class(nt)) ? 1 : 0;
  }
  return np == nt ? 1 : 0;
}

double visibility_fraction(const SceneState& scene, const ObjectRecord& source,
                           const ObjectRecord& target, int rays, double near) {
  const Vec3 to_target = target.sphere.center - source.sphere.center;
  const double dist = to_target.norm();
  if (!(dist > source.sphere.radius)) {
    throw DegenerateAnchors("target center inside the source sphere");
  }
  // Camera point: source sphere surface nearest the target (recomputed here
  // so the ground truth does not depend on the viewpoint module).
  const Vec3 dir_st = to_target * (1.0 / dist);
  const Vec3 camera = source.sphere.center + dir_st * source.sphere.radius;

  const Vec3 w = (camera - target.sphere.center).normalized();
  const Vec3 ref = std::abs(w.y) < 0.9 ? Vec3{0.0, 1.0, 0.0} : Vec3{1.0, 0.0, 0.0};
  const Vec3 a = w.cross(ref).normalized();
  const Vec3 b = w.cross(a);

  const int slices = 32;
  const int bands = std::max(1, rays / slices);
  const double two_pi = 6.283185307179586476925286766559;
  int hits = 0;
  int cast = 0;
  for (int j = 0; j < bands; ++j) {
    const double cos_t = (j + 0.5) / bands;  // camera-facing hemisphere
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
    for (int i = 0; i < slices; ++i) {
      const double phi = two_pi * (i + 0.5) / slices;
      const Vec3 n = w * cos_t + (a * std::cos(phi) + b * std::sin(phi)) * sin_t;
      const Vec3 p = target.sphere.center + n * target.sphere.radius;
      const Vec3 offset = p - camera;
      if (offset.norm() < 1e-9) continue;
      ++cast;
      const auto hit = ray_cast(scene, camera, offset.normalized(),
                                source.numeric_id, 2.0 * near);
      if (hit && hit->object_numeric_id == target.numeric_id) {
        ++hits;
      }
    }
  }
  return cast == 0 ? 0.0 : static_cast<double>(hits) / cast;
}

namespace {

struct AttrTemplate {
  const char* name;
  const char* values[2];
  Rgb colors[2];
};

struct CategoryTemplate {
  const char* name;
  bool sphere;
  Rgb base;
  std::vector<AttrTemplate> attrs;
};

const std::vector<CategoryTemplate>& category_templates() {
  static const std::vector<CategoryTemplate> table = {
      {"Chair", false, {150, 90, 40}, {}},
      {"Table", false, {120, 80, 50}, {}},
      {"Sofa", false, {60, 60, 140}, {}},
      {"Box", false, {160, 140, 100}, {}},
      {"Ball", true, {220, 60, 30}, {}},
      {"Tv", false, {70, 70, 80},
       {{"toggled", {"off", "on"}, {{70, 70, 80}, {40, 220, 60}}}}},
      {"Lamp", false, {90, 90, 120},
       {{"toggled", {"off", "on"}, {{90, 90, 120}, {255, 220, 60}}}}},
      {"Laptop", false, {60, 60, 65},
       {{"toggled", {"off", "on"}, {{60, 60, 65}, {80, 160, 250}}}}},
      {"Fridge", false, {180, 180, 190},
       {{"open", {"closed", "open"}, {{180, 180, 190}, {230, 120, 30}}}}},
      {"Cabinet", false, {140, 100, 60},
       {{"open", {"closed", "open"}, {{140, 100, 60}, {60, 200, 200}}}}},
      {"Plate", false, {220, 220, 220},
       {{"broken", {"false", "true"}, {{220, 220, 220}, {200, 40, 40}}},
        {"dirty", {"false", "true"}, {{210, 210, 230}, {120, 90, 20}}}}},
      {"Mug", false, {90, 160, 220},
       {{"dirty", {"false", "true"}, {{90, 160, 220}, {100, 70, 30}}}}},
      {"Vase", true, {170, 60, 170},
       {{"broken", {"false", "true"}, {{170, 60, 170}, {240, 160, 60}}}}},
  };
  return table;
}

json rgb_json(const Rgb& c) { return json::array({c.r, c.g, c.b}); }
json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json mesh_json(const TriangleMesh& mesh, const Rgb& color) {
  json verts = json::array();
  for (const Vec3& v : mesh.vertices) {
    verts.push_back(vec3_json(v));
  }
  json tris = json::array();
  for (const auto& t : mesh.triangles) {
    tris.push_back(json::array({t[0], t[1], t[2]}));
  }
  return {{"vertices", verts}, {"triangles", tris}, {"color", rgb_json(color)}};
}

json quad_json(const Vec3& v0, const Vec3& v1, const Vec3& v2, const Vec3& v3,
               const Rgb& color) {
  return {{"vertices", json::array({vec3_json(v0), vec3_json(v1), vec3_json(v2),
                                    vec3_json(v3)})},
          {"triangles", json::array({json::array({0, 1, 2}), json::array({0, 2, 3})})},
          {"color", rgb_json(color)}};
}

struct PlacedObject {
  std::string id;
  const CategoryTemplate* tpl = nullptr;
  Vec3 center;
  double radius = 0.0;  // conservative footprint for separation tests
};

json interaction_json(const InteractionEvent& ev) {
  return {{"action", action_name(ev.action)}, {"target", ev.target_id}};
}

}  // namespace

std::pair<std::string, QASuite> generate_suite(const GeneratorConfig& config,
                                               uint64_t seed) {
  if (config.object_count_min < 2 || config.object_count_max < config.object_count_min) {
    throw ConfigError("object count range must allow at least two objects");
  }
  if (config.room_width <= 2.0 * config.wall_margin ||
      config.room_depth <= 2.0 * config.wall_margin) {
    throw ConfigError("room too small for the wall margin");
  }
  Rng rng(seed);
  const auto& categories = category_templates();
  std::vector<size_t> attr_category_indices;
  for (size_t i = 0; i < categories.size(); ++i) {
    if (!categories[i].attrs.empty()) attr_category_indices.push_back(i);
  }

  json doc;
  doc["up"] = json::array({0.0, 1.0, 0.0});
  json objects = json::array();

  const double hw = config.room_width / 2.0;
  const double hd = config.room_depth / 2.0;
  const double h = config.room_height;

  const int n = static_cast<int>(rng.uniform_int(config.object_count_min,
                                                 config.object_count_max));
  std::vector<PlacedObject> placed;
  std::map<std::string, int> category_counts;

  for (int i = 0; i < n; ++i) {
    bool ok = false;
    for (int attempt = 0; attempt < config.max_retries && !ok; ++attempt) {
      // The first two objects come from attribute-bearing categories so
      // attribute items always have targets.
      const CategoryTemplate* tpl;
      if (config.attribute_questions > 0 && i < 2) {
        tpl = &categories[attr_category_indices[static_cast<size_t>(
            rng.uniform_int(0, static_cast<int64_t>(attr_category_indices.size()) - 1))]];
      } else {
        tpl = &categories[static_cast<size_t>(
            rng.uniform_int(0, static_cast<int64_t>(categories.size()) - 1))];
      }
      Vec3 half{0, 0, 0};
      double footprint = 0.0;
      double yaw = 0.0;
      double sphere_radius = 0.0;
      if (tpl->sphere) {
        sphere_radius = rng.uniform(0.16, 0.30);
        footprint = sphere_radius;
      } else {
        half = {rng.uniform(0.15, 0.32), rng.uniform(0.15, 0.32), rng.uniform(0.15, 0.32)};
        yaw = rng.uniform(0.0, 6.283185307179586);
        footprint = half.norm();
      }
      const Vec3 center{rng.uniform(-hw + config.wall_margin, hw - config.wall_margin),
                        tpl->sphere ? sphere_radius : half.y,
                        rng.uniform(-hd + config.wall_margin, hd - config.wall_margin)};
      bool clear = true;
      for (const PlacedObject& other : placed) {
        if ((other.center - center).norm() < other.radius + footprint + 0.25) {
          clear = false;
          break;
        }
      }
      if (!clear) continue;

      const int index = category_counts[tpl->name]++;
      PlacedObject po;
      po.id = std::string(tpl->name) + "_" + std::to_string(index);
      po.tpl = tpl;
      po.center = center;
      po.radius = footprint;
      placed.push_back(po);

      json jo;
      jo["id"] = po.id;
      jo["base_color"] = rgb_json(tpl->base);
      if (tpl->sphere) {
        jo["primitive"] = {{"kind", "sphere"}, {"center", vec3_json(center)},
                           {"radius", sphere_radius}};
      } else {
        jo["primitive"] = {{"kind", "box"}, {"center", vec3_json(center)},
                           {"half_extents", vec3_json(half)}, {"yaw", yaw}};
      }
      if (!tpl->attrs.empty()) {
        json attrs;
        for (const AttrTemplate& at : tpl->attrs) {
          attrs[at.name] = {{"domain", json::array({at.values[0], at.values[1]})},
                            {"initial", at.values[0]},
                            {"colors", {{at.values[0], rgb_json(at.colors[0])},
                                        {at.values[1], rgb_json(at.colors[1])}}}};
        }
        jo["attributes"] = attrs;
      }
      objects.push_back(jo);
      ok = true;
    }
    if (!ok) {
      throw ConfigError("could not place object " + std::to_string(i) +
                        " after bounded retries");
    }
  }
  doc["objects"] = objects;

  json structure = json::array();
  const Rgb floor_color{95, 95, 95};
  const Rgb wall_color{120, 120, 125};
  structure.push_back(quad_json({-hw, 0, -hd}, {hw, 0, -hd}, {hw, 0, hd}, {-hw, 0, hd},
                                floor_color));
  structure.push_back(quad_json({-hw, 0, -hd}, {hw, 0, -hd}, {hw, h, -hd}, {-hw, h, -hd},
                                wall_color));
  structure.push_back(quad_json({-hw, 0, hd}, {hw, 0, hd}, {hw, h, hd}, {-hw, h, hd},
                                wall_color));
  structure.push_back(quad_json({-hw, 0, -hd}, {-hw, 0, hd}, {-hw, h, hd}, {-hw, h, -hd},
                                wall_color));
  structure.push_back(quad_json({hw, 0, -hd}, {hw, 0, hd}, {hw, h, hd}, {hw, h, -hd},
                                wall_color));
  doc["structure"] = structure;

  QASuite suite;
  suite.seed = seed;

  // --- count items -------------------------------------------------------
  std::vector<std::string> present;
  for (const auto& [cat, cnt] : category_counts) {
    (void)cnt;
    present.push_back(cat);
  }
  std::vector<std::string> remaining = present;
  for (int k = 0; k < config.count_questions && !remaining.empty(); ++k) {
    const size_t pick = static_cast<size_t>(
        rng.uniform_int(0, static_cast<int64_t>(remaining.size()) - 1));
    const std::string cat = remaining[pick];
    remaining.erase(remaining.begin() + static_cast<long>(pick));
    QAItem item;
    item.question = Question::count(cat);
    item.truth = std::to_string(category_counts.at(cat));
    item.truth_provenance = "generator:object-list";
    suite.items.push_back(item);
  }

  // --- attribute items ----------------------------------------------------
  SceneState base_scene = load_scene(doc.dump());
  std::vector<const PlacedObject*> attr_objects;
  for (const PlacedObject& po : placed) {
    if (!po.tpl->attrs.empty()) attr_objects.push_back(&po);
  }
  for (int k = 0; k < config.attribute_questions && !attr_objects.empty(); ++k) {
    const PlacedObject& po = *attr_objects[static_cast<size_t>(
        rng.uniform_int(0, static_cast<int64_t>(attr_objects.size()) - 1))];
    const AttrTemplate& at = po.tpl->attrs[static_cast<size_t>(
        rng.uniform_int(0, static_cast<int64_t>(po.tpl->attrs.size()) - 1))];
    QAItem item;
    item.question = Question::attribute(po.id, at.name);
    if (rng.uniform01() < config.dynamic_fraction) {
      const std::string attr = at.name;
      std::vector<std::vector<InteractionAction>> options;
      if (attr == "toggled") {
        options = {{InteractionAction::Toggle},
                   {InteractionAction::Toggle, InteractionAction::Toggle}};
      } else if (attr == "open") {
        options = {{InteractionAction::Open},
                   {InteractionAction::Close},
                   {InteractionAction::Open, InteractionAction::Close}};
      } else if (attr == "broken") {
        options = {{InteractionAction::Break}};
      } else if (attr == "sliced") {
        options = {{InteractionAction::Slice}};
      } else if (attr == "dirty") {
        options = {{InteractionAction::Dirty},
                   {InteractionAction::Clean},
                   {InteractionAction::Dirty, InteractionAction::Clean}};
      }
      if (!options.empty()) {
        const auto& actions = options[static_cast<size_t>(
            rng.uniform_int(0, static_cast<int64_t>(options.size()) - 1))];
        for (InteractionAction a : actions) {
          item.interactions.push_back({po.id, a});
        }
      }
    }
    SceneState scratch = base_scene;
    for (const InteractionEvent& ev : item.interactions) {
      scratch = apply_interaction(scratch, ev);
    }
    item.truth = scratch.get(po.id).state.at(at.name);
    item.truth_provenance = "generator:scene-state";
    suite.items.push_back(item);
  }

  // --- visibility items ---------------------------------------------------
  SceneState current = base_scene;
  struct AcceptedPair {
    std::string source, target;
    bool visible;
  };
  std::vector<AcceptedPair> accepted;
  const auto classify = [&](double fraction) -> int {
    if (fraction >= config.tau * config.margin_hi) return 1;
    if (fraction < config.tau * config.margin_lo) return 0;
    return -1;  // ambiguous, too close to the tau boundary
  };
  std::set<std::pair<std::string, std::string>> used_pairs;

  for (int k = 0; k < config.visibility_questions && placed.size() >= 2; ++k) {
    bool ok = false;
    for (int attempt = 0; attempt < config.max_retries && !ok; ++attempt) {
      const size_t si = static_cast<size_t>(
          rng.uniform_int(0, static_cast<int64_t>(placed.size()) - 1));
      size_t ti = static_cast<size_t>(
          rng.uniform_int(0, static_cast<int64_t>(placed.size()) - 2));
      if (ti >= si) ++ti;
      const bool want_occluded = rng.uniform01() < config.occluder_density;
      const PlacedObject& src = placed[si];
      const PlacedObject& tgt = placed[ti];
      if (used_pairs.count({src.id, tgt.id})) continue;

      const ObjectRecord& src_rec = current.get(src.id);
      const ObjectRecord& tgt_rec = current.get(tgt.id);
      const Vec3 gap = tgt_rec.sphere.center - src_rec.sphere.center;
      if (gap.norm() < src_rec.sphere.radius + tgt_rec.sphere.radius + 0.3) continue;

      json candidate_doc = doc;
      if (want_occluded) {
        // Thin wall panel across the sightline midpoint, conservatively
        // sized to cover the cone from the camera to the target sphere.
        const Vec3 camera =
            src_rec.sphere.center + gap.normalized() * src_rec.sphere.radius;
        const Vec3 axis = tgt_rec.sphere.center - camera;
        const double dist = axis.norm();
        if (dist < 4.0 * tgt_rec.sphere.radius) continue;
        const Vec3 dir = axis * (1.0 / dist);
        const Vec3 mid = camera + dir * (dist / 2.0);
        if (std::abs(mid.x) > hw - 0.15 || std::abs(mid.z) > hd - 0.15) continue;
        const double eta = std::asin(std::min(1.0, tgt_rec.sphere.radius / dist));
        const double cone_r = (dist / 2.0) * std::tan(eta) * 1.8 + 0.4;
        const double horiz = std::hypot(dir.x, dir.z);
        if (horiz < 1e-6) continue;
        const double yaw = std::atan2(-dir.z / horiz, dir.x / horiz);
        const double top = std::min(h - 0.05, mid.y + cone_r);
        const Vec3 panel_center{mid.x, (0.05 + top) / 2.0, mid.z};
        const Vec3 panel_half{0.02, (top - 0.05) / 2.0, cone_r + 0.3};
        const TriangleMesh panel =
            box_mesh(panel_center, panel_half, yaw, 0, {110, 110, 115});
        candidate_doc["structure"].push_back(mesh_json(panel, {110, 110, 115}));
      }

      SceneState candidate = load_scene(candidate_doc.dump());
      const double fraction =
          visibility_fraction(candidate, candidate.get(src.id), candidate.get(tgt.id),
                              config.visibility_rays);
      const int cls = classify(fraction);
      if (cls != (want_occluded ? 0 : 1)) continue;

      if (want_occluded) {
        bool priors_stable = true;
        for (const AcceptedPair& prior : accepted) {
          const double pf =
              visibility_fraction(candidate, candidate.get(prior.source),
                                  candidate.get(prior.target), config.visibility_rays);
          if (classify(pf) != (prior.visible ? 1 : 0)) {
            priors_stable = false;
            break;
          }
        }
        if (!priors_stable) continue;
      }

      doc = std::move(candidate_doc);
      current = std::move(candidate);
      used_pairs.insert({src.id, tgt.id});
      accepted.push_back({src.id, tgt.id, cls == 1});
      QAItem item;
      item.question = Question::visibility(src.id, tgt.id);
      item.truth = cls == 1 ? "yes" : "no";
      item.truth_provenance = "generator:ray-sampling";
      suite.items.push_back(item);
      ok = true;
    }
    if (!ok) {
      throw ConfigError("could not build visibility item " + std::to_string(k) +
                        " after bounded retries");
    }
  }

  const std::string scene_text = doc.dump(2) + "\n";
  suite.scene_document = scene_text;
  return {scene_text, suite};
}

namespace {

int judge_match(Reasoner& judge, const QAItem& item, const std::string& prediction) {
  const json request = {
      {"role", "judge"},
      {"question", "Question: " + question_text(item.question) + " | Prediction: " +
                       prediction + " | Truth: " + item.truth +
                       " | Reply 1 if the prediction answers the question correctly, else 0."},
      {"images", json::array()},
      {"object_list", json::array()},
      {"strategy", ""},
      {"stage", 1}};
  const json response = judge.exchange(request);
  if (!response.is_object() || !response.contains("answer") ||
      !response["answer"].is_string()) {
    throw ProtocolError("judge response must be {\"answer\": string}");
  }
  const std::string verdict = normalize_answer(response["answer"].get<std::string>());
  return (verdict == "1" || verdict == "yes" || verdict == "true") ? 1 : 0;
}

}  // namespace

Report run_suite(const QASuite& suite, Reasoner& reasoner,
                 const std::optional<PerturbConfig>& perturb,
                 const PipelineConfig& pipeline_config, Strategy strategy,
                 Reasoner* judge) {
  if (suite.scene_document.empty()) {
    throw ConfigError("suite carries no scene document");
  }
  SceneState base = load_scene(suite.scene_document);

  const PerturbConfig p = perturb.value_or(PerturbConfig{});
  if (p.lambda > 0.0) {
    // One localization draw per (scene, lambda, seed), shared by every item.
    Rng rng(p.rng_seed);
    for (ObjectRecord& o : base.objects) {
      o.sphere = perturb_sphere(o.sphere, p.lambda, rng);
    }
  }

  PipelineConfig cfg = pipeline_config;
  if (p.corrupts_images()) {
    const double delta = p.delta;
    const double gamma = p.gamma;
    cfg.view_filter = [delta, gamma](RenderedView& view) {
      if (delta > 0.0) {
        view.rgb = apply_blur(view.rgb, view.width, view.height, delta);
      }
      if (gamma > 0.0) {
        view.rgb = apply_ghosting(view.rgb, view.width, view.height, gamma,
                                  default_ghost_offsets(view.width));
      }
    };
  }

  Report report;
  report.perturb = p;
  std::map<std::string, std::pair<double, int>> sums;
  for (size_t i = 0; i < suite.items.size(); ++i) {
    const QAItem& item = suite.items[i];
    ReportItem ri;
    ri.index = i;
    ri.kind = kind_name(item.question.kind);
    ri.truth = item.truth;
    try {
      SceneState scene = base;
      for (const InteractionEvent& ev : item.interactions) {
        scene = apply_interaction(scene, ev);
      }
      const auto [ans, trace] = answer(item.question, scene, reasoner, strategy, cfg);
      ri.prediction = ans.text;
      ri.rendered = trace.requested_rendering;
      ri.poses = static_cast<int>(trace.poses.size());
      ri.match = (judge && !judge->is_oracle())
                     ? judge_match(*judge, item, ans.text)
                     : binary_match(ans.text, item.truth, item.question);
    } catch (const std::exception& e) {
      ri.match = 0;
      ri.error = e.what();
    }
    sums[ri.kind].first += ri.match;
    sums[ri.kind].second += 1;
    report.items.push_back(std::move(ri));
  }
  for (const auto& [kind, sum] : sums) {
    report.aggregate[kind] = {sum.second ? sum.first / sum.second : 0.0, sum.second};
  }
  return report;
}

std::vector<SweepPoint> run_sweep(const QASuite& suite, Reasoner& reasoner,
                                  const SweepGrid& grid, uint64_t perturb_seed,
                                  const PipelineConfig& pipeline_config,
                                  Strategy strategy) {
  std::vector<SweepPoint> points;
  const auto run_axis = [&](const std::string& axis, const std::vector<double>& values) {
    for (double value : values) {
      PerturbConfig p;
      p.rng_seed = perturb_seed;
      if (axis == "delta") p.delta = value;
      if (axis == "gamma") p.gamma = value;
      if (axis == "lambda") p.lambda = value;
      points.push_back({axis, value, run_suite(suite, reasoner, p, pipeline_config,
                                               strategy)});
    }
  };
  run_axis("delta", grid.delta);
  run_axis("gamma", grid.gamma);
  run_axis("lambda", grid.lambda);
  return points;
}

QASuite load_suite_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open suite file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("suite is not valid JSON: ") + e.what());
  }
  QASuite suite;
  if (doc.contains("seed")) {
    suite.seed = doc["seed"].get<uint64_t>();
  }
  if (doc.contains("scene_path")) {
    suite.scene_path = doc["scene_path"].get<std::string>();
    const auto resolved =
        std::filesystem::path(path).parent_path() / suite.scene_path;
    std::ifstream scene_in(resolved, std::ios::binary);
    if (!scene_in) {
      throw IoError("cannot open referenced scene '" + resolved.string() + "'");
    }
    std::ostringstream scene_buf;
    scene_buf << scene_in.rdbuf();
    suite.scene_document = scene_buf.str();
  } else if (doc.contains("scene")) {
    suite.scene_document = doc["scene"].dump();
  } else {
    throw SchemaError("suite needs 'scene_path' or an inline 'scene'");
  }
  if (!doc.contains("items") || !doc["items"].is_array()) {
    throw SchemaError("suite needs an 'items' array");
  }
  for (const json& ji : doc["items"]) {
    QAItem item;
    item.question = question_from_json(ji.at("question"));
    if (ji.contains("interactions")) {
      for (const json& je : ji["interactions"]) {
        item.interactions.push_back(
            {je.at("target").get<std::string>(),
             parse_action(je.at("action").get<std::string>())});
      }
    }
    item.truth = ji.at("truth").get<std::string>();
    if (ji.contains("truth_provenance")) {
      item.truth_provenance = ji["truth_provenance"].get<std::string>();
    }
    suite.items.push_back(std::move(item));
  }
  return suite;
}

std::string save_suite(const QASuite& suite) {
  json doc;
  doc["seed"] = suite.seed;
  if (!suite.scene_path.empty()) {
    doc["scene_path"] = suite.scene_path;
  } else {
    doc["scene"] = json::parse(suite.scene_document);
  }
  json items = json::array();
  for (const QAItem& item : suite.items) {
    json ji;
    ji["question"] = question_to_json(item.question);
    if (!item.interactions.empty()) {
      json evs = json::array();
      for (const InteractionEvent& ev : item.interactions) {
        evs.push_back(interaction_json(ev));
      }
      ji["interactions"] = evs;
    }
    ji["truth"] = item.truth;
    ji["truth_provenance"] = item.truth_provenance;
    items.push_back(ji);
  }
  doc["items"] = items;
  return doc.dump(2) + "\n";
}

json report_to_json(const Report& report) {
  json doc;
  json agg;
  for (const auto& [kind, stats] : report.aggregate) {
    agg[kind] = {{"accuracy", stats.accuracy}, {"n", stats.n}};
  }
  doc["aggregate"] = agg;
  doc["perturb"] = {{"delta", report.perturb.delta},
                    {"gamma", report.perturb.gamma},
                    {"lambda", report.perturb.lambda},
                    {"seed", report.perturb.rng_seed}};
  json items = json::array();
  for (const ReportItem& ri : report.items) {
    json ji = {{"index", ri.index},   {"kind", ri.kind},
               {"prediction", ri.prediction}, {"truth", ri.truth},
               {"match", ri.match},   {"rendered", ri.rendered},
               {"poses", ri.poses}};
    if (!ri.error.empty()) {
      ji["error"] = ri.error;
    }
    items.push_back(ji);
  }
  doc["items"] = items;
  return doc;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::ostringstream out;
  out << "kind,axis,value,accuracy,n\n";
  char line[160];
  for (const SweepPoint& point : points) {
    for (const auto& [kind, stats] : point.report.aggregate) {
      std::snprintf(line, sizeof(line), "%s,%s,%g,%.6f,%d\n", kind.c_str(),
                    point.axis.c_str(), point.value, stats.accuracy, stats.n);
      out << line;
    }
  }
  return out.str();
}

SweepGrid load_sweep_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open sweep file '" + path + "'");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("sweep config is not valid JSON: ") + e.what());
  }
  SweepGrid grid;
  const auto read_axis = [&](const char* key, std::vector<double>& into) {
    if (!doc.contains(key)) return;
    for (const json& v : doc[key]) {
      into.push_back(v.get<double>());
    }
  };
  read_axis("delta", grid.delta);
  read_axis("gamma", grid.gamma);
  read_axis("lambda", grid.lambda);
  return grid;
}

}  // namespace rendermem
