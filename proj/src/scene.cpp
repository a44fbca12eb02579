#include "rendermem/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"

namespace rendermem {

using nlohmann::json;

namespace {

constexpr uint32_t kChunkTriangles = 16;

const std::regex& id_pattern() {
  static const std::regex re("^[A-Za-z][A-Za-z0-9]*_[0-9]+$");
  return re;
}

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& context) {
  if (!obj.is_object()) {
    throw SchemaError(context + ": expected a JSON object");
  }
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw SchemaError(context + ": unexpected field '" + item.key() + "'");
    }
  }
}

const json& require_field(const json& obj, const std::string& key,
                          const std::string& context) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw SchemaError(context + ": missing field '" + key + "'");
  }
  return *it;
}

double get_number(const json& v, const std::string& context) {
  if (!v.is_number()) {
    throw SchemaError(context + ": expected a number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw SchemaError(context + ": non-finite number");
  }
  return d;
}

Vec3 get_vec3(const json& v, const std::string& context) {
  if (!v.is_array() || v.size() != 3) {
    throw SchemaError(context + ": expected [x, y, z]");
  }
  return {get_number(v[0], context), get_number(v[1], context),
          get_number(v[2], context)};
}

Rgb get_rgb(const json& v, const std::string& context) {
  if (!v.is_array() || v.size() != 3) {
    throw SchemaError(context + ": expected [r, g, b]");
  }
  Rgb c;
  uint8_t* ch[3] = {&c.r, &c.g, &c.b};
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number_integer()) {
      throw SchemaError(context + ": color channels must be integers");
    }
    const int64_t raw = v[i].get<int64_t>();
    if (raw < 0 || raw > 255) {
      throw SchemaError(context + ": color channel out of [0, 255]");
    }
    *ch[i] = static_cast<uint8_t>(raw);
  }
  return c;
}

json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
json rgb_json(const Rgb& c) { return json::array({c.r, c.g, c.b}); }

TriangleMesh parse_raw_mesh(const json& m, uint16_t owner, Rgb color,
                            const std::string& context) {
  TriangleMesh mesh;
  mesh.owner = owner;
  mesh.color = color;
  const json& verts = require_field(m, "vertices", context);
  if (!verts.is_array() || verts.empty()) {
    throw SchemaError(context + ": vertices must be a non-empty array");
  }
  for (const json& v : verts) {
    mesh.vertices.push_back(get_vec3(v, context + ".vertices"));
  }
  const json& tris = require_field(m, "triangles", context);
  if (!tris.is_array() || tris.empty()) {
    throw SchemaError(context + ": at least one triangle is required");
  }
  for (const json& t : tris) {
    if (!t.is_array() || t.size() != 3) {
      throw SchemaError(context + ": triangles must be [i, j, k] triples");
    }
    std::array<uint32_t, 3> tri{};
    for (int k = 0; k < 3; ++k) {
      if (!t[k].is_number_integer() || t[k].get<int64_t>() < 0) {
        throw SchemaError(context + ": triangle indices must be non-negative integers");
      }
      const uint64_t idx = t[k].get<uint64_t>();
      if (idx >= mesh.vertices.size()) {
        throw InvalidIndex(context + ": triangle index out of range");
      }
      tri[k] = static_cast<uint32_t>(idx);
    }
    mesh.triangles.push_back(tri);
  }
  return mesh;
}

std::map<std::string, AttributeSpec> parse_attributes(const json& a,
                                                      const std::string& context) {
  std::map<std::string, AttributeSpec> specs;
  if (!a.is_object()) {
    throw SchemaError(context + ": attributes must be an object");
  }
  for (const auto& item : a.items()) {
    const std::string actx = context + ".attributes." + item.key();
    require_keys(item.value(), {"domain", "initial", "colors"}, actx);
    AttributeSpec spec;
    const json& domain = require_field(item.value(), "domain", actx);
    if (!domain.is_array() || domain.size() < 2) {
      throw SchemaError(actx + ": domain needs at least two values");
    }
    for (const json& v : domain) {
      if (!v.is_string()) {
        throw SchemaError(actx + ": domain values must be strings");
      }
      const std::string s = v.get<std::string>();
      if (std::find(spec.domain.begin(), spec.domain.end(), s) != spec.domain.end()) {
        throw SchemaError(actx + ": duplicate domain value '" + s + "'");
      }
      spec.domain.push_back(s);
    }
    if (item.value().contains("colors")) {
      const json& colors = item.value()["colors"];
      if (!colors.is_object()) {
        throw SchemaError(actx + ": colors must be an object");
      }
      for (const auto& centry : colors.items()) {
        if (std::find(spec.domain.begin(), spec.domain.end(), centry.key()) ==
            spec.domain.end()) {
          throw SchemaError(actx + ": color for undeclared value '" + centry.key() + "'");
        }
        spec.colors[centry.key()] = get_rgb(centry.value(), actx + ".colors");
      }
      for (const std::string& v : spec.domain) {
        if (!spec.colors.count(v)) {
          throw SchemaError(actx + ": colors must cover the whole domain (missing '" +
                            v + "')");
        }
      }
    }
    specs[item.key()] = spec;
  }
  return specs;
}

}  // namespace

InteractionAction parse_action(const std::string& name) {
  if (name == "toggle") return InteractionAction::Toggle;
  if (name == "open") return InteractionAction::Open;
  if (name == "close") return InteractionAction::Close;
  if (name == "break") return InteractionAction::Break;
  if (name == "slice") return InteractionAction::Slice;
  if (name == "clean") return InteractionAction::Clean;
  if (name == "dirty") return InteractionAction::Dirty;
  throw SchemaError("unknown interaction action '" + name + "'");
}

std::string action_name(InteractionAction action) {
  switch (action) {
    case InteractionAction::Toggle: return "toggle";
    case InteractionAction::Open: return "open";
    case InteractionAction::Close: return "close";
    case InteractionAction::Break: return "break";
    case InteractionAction::Slice: return "slice";
    case InteractionAction::Clean: return "clean";
    case InteractionAction::Dirty: return "dirty";
  }
  return "?";
}

std::string category_of(const std::string& object_id) {
  const auto pos = object_id.rfind('_');
  if (pos == std::string::npos) {
    throw SchemaError("object id '" + object_id + "' has no category separator");
  }
  return object_id.substr(0, pos);
}

const ObjectRecord* SceneState::find(const std::string& id) const {
  for (const ObjectRecord& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

const ObjectRecord& SceneState::get(const std::string& id) const {
  const ObjectRecord* o = find(id);
  if (!o) {
    throw UnknownObject("no object with id '" + id + "'");
  }
  return *o;
}

const ObjectRecord* SceneState::find_numeric(uint16_t numeric_id) const {
  for (const ObjectRecord& o : objects) {
    if (o.numeric_id == numeric_id) return &o;
  }
  return nullptr;
}

const std::vector<ObjectRecord>& object_list(const SceneState& scene) {
  return scene.objects;
}

Rgb effective_color(const ObjectRecord& object) {
  double acc[3] = {0.0, 0.0, 0.0};
  int mapped = 0;
  for (const auto& [name, spec] : object.attributes) {
    if (spec.colors.empty()) continue;
    const Rgb c = spec.colors.at(object.state.at(name));
    acc[0] += c.r;
    acc[1] += c.g;
    acc[2] += c.b;
    ++mapped;
  }
  if (mapped == 0) return object.base_color;
  return {static_cast<uint8_t>(std::lround(acc[0] / mapped)),
          static_cast<uint8_t>(std::lround(acc[1] / mapped)),
          static_cast<uint8_t>(std::lround(acc[2] / mapped))};
}

SceneState apply_interaction(const SceneState& scene, const InteractionEvent& event) {
  SceneState next = scene;
  ObjectRecord* target = nullptr;
  for (ObjectRecord& o : next.objects) {
    if (o.id == event.target_id) {
      target = &o;
      break;
    }
  }
  if (!target) {
    throw UnknownObject("no object with id '" + event.target_id + "'");
  }

  const auto set_value = [&](const std::string& attr, const std::string& value) {
    auto it = target->attributes.find(attr);
    if (it == target->attributes.end()) {
      throw InapplicableAction("object '" + target->id + "' has no attribute '" +
                               attr + "'");
    }
    const auto& domain = it->second.domain;
    if (std::find(domain.begin(), domain.end(), value) == domain.end()) {
      throw InapplicableAction("value '" + value + "' not in domain of '" + attr +
                               "' on '" + target->id + "'");
    }
    target->state[attr] = value;
  };

  switch (event.action) {
    case InteractionAction::Toggle: {
      auto it = target->attributes.find("toggled");
      if (it == target->attributes.end() || it->second.domain.size() != 2) {
        throw InapplicableAction("object '" + target->id +
                                 "' has no two-valued 'toggled' attribute");
      }
      const auto& domain = it->second.domain;
      const std::string& cur = target->state.at("toggled");
      target->state["toggled"] = (cur == domain[0]) ? domain[1] : domain[0];
      break;
    }
    case InteractionAction::Open: set_value("open", "open"); break;
    case InteractionAction::Close: set_value("open", "closed"); break;
    case InteractionAction::Break: set_value("broken", "true"); break;
    case InteractionAction::Slice: set_value("sliced", "true"); break;
    case InteractionAction::Clean: set_value("dirty", "false"); break;
    case InteractionAction::Dirty: set_value("dirty", "true"); break;
  }
  return next;
}

std::array<Vec3, 8> box_corners(const Vec3& center, const Vec3& half_extents,
                                double yaw) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  std::array<Vec3, 8> corners;
  for (int i = 0; i < 8; ++i) {
    const double lx = ((i >> 0) & 1) ? half_extents.x : -half_extents.x;
    const double ly = ((i >> 1) & 1) ? half_extents.y : -half_extents.y;
    const double lz = ((i >> 2) & 1) ? half_extents.z : -half_extents.z;
    // rotation about +Y
    corners[i] = {center.x + lx * c + lz * s, center.y + ly,
                  center.z - lx * s + lz * c};
  }
  return corners;
}

TriangleMesh box_mesh(const Vec3& center, const Vec3& half_extents, double yaw,
                      uint16_t owner, Rgb color) {
  TriangleMesh mesh;
  mesh.owner = owner;
  mesh.color = color;
  const auto corners = box_corners(center, half_extents, yaw);
  mesh.vertices.assign(corners.begin(), corners.end());
  mesh.triangles = {
      {0, 2, 6}, {0, 6, 4},  // -x
      {1, 3, 7}, {1, 7, 5},  // +x
      {0, 1, 5}, {0, 5, 4},  // -y
      {2, 3, 7}, {2, 7, 6},  // +y
      {0, 1, 3}, {0, 3, 2},  // -z
      {4, 5, 7}, {4, 7, 6},  // +z
  };
  return mesh;
}

TriangleMesh sphere_mesh(const Vec3& center, double radius, int stacks,
                         int slices, uint16_t owner, Rgb color) {
  if (stacks < 2 || slices < 3 || radius <= 0.0) {
    throw DomainError("sphere_mesh: need stacks >= 2, slices >= 3, radius > 0");
  }
  TriangleMesh mesh;
  mesh.owner = owner;
  mesh.color = color;
  const double pi = 3.14159265358979323846;
  mesh.vertices.push_back(center + Vec3{0, radius, 0});  // top pole = 0
  for (int i = 1; i < stacks; ++i) {
    const double theta = pi * i / stacks;
    for (int j = 0; j < slices; ++j) {
      const double phi = 2.0 * pi * j / slices;
      mesh.vertices.push_back(center + Vec3{radius * std::sin(theta) * std::cos(phi),
                                            radius * std::cos(theta),
                                            radius * std::sin(theta) * std::sin(phi)});
    }
  }
  const uint32_t bottom = static_cast<uint32_t>(mesh.vertices.size());
  mesh.vertices.push_back(center + Vec3{0, -radius, 0});
  const auto ring = [&](int i, int j) {
    return static_cast<uint32_t>(1 + (i - 1) * slices + (j % slices));
  };
  for (int j = 0; j < slices; ++j) {
    mesh.triangles.push_back({0, ring(1, j), ring(1, j + 1)});
  }
  for (int i = 1; i + 1 < stacks; ++i) {
    for (int j = 0; j < slices; ++j) {
      mesh.triangles.push_back({ring(i, j), ring(i + 1, j), ring(i + 1, j + 1)});
      mesh.triangles.push_back({ring(i, j), ring(i + 1, j + 1), ring(i, j + 1)});
    }
  }
  for (int j = 0; j < slices; ++j) {
    mesh.triangles.push_back({bottom, ring(stacks - 1, j + 1), ring(stacks - 1, j)});
  }
  return mesh;
}

void SceneState::finalize() {
  if (!declared_up.is_finite() || std::abs(declared_up.norm() - 1.0) > 1e-9) {
    throw SchemaError("declared_up must be a unit vector");
  }
  std::set<std::string> ids;
  std::set<uint16_t> numeric_ids;
  for (const ObjectRecord& o : objects) {
    if (!std::regex_match(o.id, id_pattern())) {
      throw SchemaError("object id '" + o.id + "' is not of the form Category_index");
    }
    if (!ids.insert(o.id).second) {
      throw DuplicateObjectId("duplicate object id '" + o.id + "'");
    }
    if (o.numeric_id == 0 || !numeric_ids.insert(o.numeric_id).second) {
      throw SchemaError("object '" + o.id + "' needs a unique numeric_id >= 1");
    }
    if (!o.sphere.center.is_finite() || !std::isfinite(o.sphere.radius) ||
        o.sphere.radius < 0.0) {
      throw SchemaError("object '" + o.id + "' has an invalid bounding sphere");
    }
    for (const auto& [name, spec] : o.attributes) {
      auto it = o.state.find(name);
      if (it == o.state.end()) {
        throw SchemaError("object '" + o.id + "' missing state for attribute '" +
                          name + "'");
      }
      if (std::find(spec.domain.begin(), spec.domain.end(), it->second) ==
          spec.domain.end()) {
        throw SchemaError("object '" + o.id + "' state '" + it->second +
                          "' outside domain of '" + name + "'");
      }
    }
    for (const auto& [name, value] : o.state) {
      (void)value;
      if (!o.attributes.count(name)) {
        throw SchemaError("object '" + o.id + "' has undeclared attribute '" + name +
                          "'");
      }
    }
  }

  for (TriangleMesh& mesh : meshes) {
    if (mesh.triangles.empty()) {
      throw SchemaError("mesh without triangles");
    }
    if (mesh.owner != 0 && !numeric_ids.count(mesh.owner)) {
      throw DanglingMeshOwner("mesh owner " + std::to_string(mesh.owner) +
                              " does not name an object");
    }
    for (const Vec3& v : mesh.vertices) {
      if (!v.is_finite()) {
        throw SchemaError("mesh vertex is not finite");
      }
    }
    Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
            std::numeric_limits<double>::max()};
    Vec3 hi{-std::numeric_limits<double>::max(), -std::numeric_limits<double>::max(),
            -std::numeric_limits<double>::max()};
    for (const auto& tri : mesh.triangles) {
      for (uint32_t idx : tri) {
        if (idx >= mesh.vertices.size()) {
          throw InvalidIndex("triangle index out of range");
        }
      }
    }
    for (const Vec3& v : mesh.vertices) {
      lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
      hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
    }
    mesh.bounds.center = (lo + hi) * 0.5;
    mesh.bounds.radius = 0.0;
    for (const Vec3& v : mesh.vertices) {
      mesh.bounds.radius = std::max(mesh.bounds.radius, (v - mesh.bounds.center).norm());
    }
    mesh.chunks.clear();
    const uint32_t n = static_cast<uint32_t>(mesh.triangles.size());
    for (uint32_t begin = 0; begin < n; begin += kChunkTriangles) {
      TriangleMesh::Chunk chunk;
      chunk.begin = begin;
      chunk.end = std::min(begin + kChunkTriangles, n);
      Vec3 clo = mesh.vertices[mesh.triangles[begin][0]];
      Vec3 chi = clo;
      for (uint32_t t = begin; t < chunk.end; ++t) {
        for (uint32_t idx : mesh.triangles[t]) {
          const Vec3& v = mesh.vertices[idx];
          clo = {std::min(clo.x, v.x), std::min(clo.y, v.y), std::min(clo.z, v.z)};
          chi = {std::max(chi.x, v.x), std::max(chi.y, v.y), std::max(chi.z, v.z)};
        }
      }
      chunk.bounds.center = (clo + chi) * 0.5;
      chunk.bounds.radius = 0.0;
      for (uint32_t t = begin; t < chunk.end; ++t) {
        for (uint32_t idx : mesh.triangles[t]) {
          chunk.bounds.radius = std::max(
              chunk.bounds.radius, (mesh.vertices[idx] - chunk.bounds.center).norm());
        }
      }
      mesh.chunks.push_back(chunk);
    }
  }
}

SceneState load_scene(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("scene document is not valid JSON: ") + e.what());
  }
  require_keys(doc, {"up", "objects", "structure"}, "scene");

  SceneState scene;
  if (doc.contains("up")) {
    const Vec3 up = get_vec3(doc["up"], "scene.up");
    if (up.norm() == 0.0) {
      throw SchemaError("scene.up must be non-zero");
    }
    scene.declared_up = up.normalized();
  }

  uint16_t next_numeric = 1;
  if (doc.contains("objects")) {
    if (!doc["objects"].is_array()) {
      throw SchemaError("scene.objects must be an array");
    }
    for (const json& jo : doc["objects"]) {
      require_keys(jo, {"id", "primitive", "mesh", "sphere", "base_color", "attributes"},
                   "object");
      ObjectRecord rec;
      const json& jid = require_field(jo, "id", "object");
      if (!jid.is_string()) {
        throw SchemaError("object.id must be a string");
      }
      rec.id = jid.get<std::string>();
      const std::string ctx = "object '" + rec.id + "'";
      if (next_numeric == 0) {
        throw SchemaError("too many objects for 16-bit ids");
      }
      rec.numeric_id = next_numeric++;
      if (jo.contains("base_color")) {
        rec.base_color = get_rgb(jo["base_color"], ctx + ".base_color");
      }
      if (jo.contains("attributes")) {
        rec.attributes = parse_attributes(jo["attributes"], ctx);
        for (const auto& [name, spec] : rec.attributes) {
          const json& ja = jo["attributes"][name];
          const json& init = require_field(ja, "initial", ctx + ".attributes." + name);
          if (!init.is_string()) {
            throw SchemaError(ctx + ": attribute initial value must be a string");
          }
          const std::string v = init.get<std::string>();
          if (std::find(spec.domain.begin(), spec.domain.end(), v) == spec.domain.end()) {
            throw SchemaError(ctx + ": initial value '" + v + "' outside domain of '" +
                              name + "'");
          }
          rec.state[name] = v;
        }
      }

      const bool has_primitive = jo.contains("primitive");
      const bool has_mesh = jo.contains("mesh");
      if (has_primitive == has_mesh) {
        throw SchemaError(ctx + ": exactly one of 'primitive' or 'mesh' is required");
      }
      std::optional<BoundingSphere> explicit_sphere;
      if (jo.contains("sphere")) {
        const json& js = jo["sphere"];
        require_keys(js, {"center", "radius"}, ctx + ".sphere");
        explicit_sphere = BoundingSphere{
            get_vec3(require_field(js, "center", ctx + ".sphere"), ctx + ".sphere"),
            get_number(require_field(js, "radius", ctx + ".sphere"), ctx + ".sphere")};
        if (explicit_sphere->radius < 0.0) {
          throw SchemaError(ctx + ".sphere: radius must be >= 0");
        }
      }

      if (has_primitive) {
        const json& jp = jo["primitive"];
        const json& jkind = require_field(jp, "kind", ctx + ".primitive");
        const std::string kind = jkind.is_string() ? jkind.get<std::string>() : "";
        if (kind == "box") {
          require_keys(jp, {"kind", "center", "half_extents", "yaw"}, ctx + ".primitive");
          const Vec3 center =
              get_vec3(require_field(jp, "center", ctx + ".primitive"), ctx);
          const Vec3 half =
              get_vec3(require_field(jp, "half_extents", ctx + ".primitive"), ctx);
          if (half.x <= 0.0 || half.y <= 0.0 || half.z <= 0.0) {
            throw SchemaError(ctx + ": half_extents must be positive");
          }
          double yaw = 0.0;
          if (jp.contains("yaw")) {
            yaw = get_number(jp["yaw"], ctx + ".primitive.yaw");
          }
          rec.sphere = explicit_sphere
                           ? *explicit_sphere
                           : compute_bounding_sphere(box_corners(center, half, yaw));
          scene.meshes.push_back(
              box_mesh(center, half, yaw, rec.numeric_id, rec.base_color));
        } else if (kind == "sphere") {
          require_keys(jp, {"kind", "center", "radius", "stacks", "slices"},
                       ctx + ".primitive");
          const Vec3 center =
              get_vec3(require_field(jp, "center", ctx + ".primitive"), ctx);
          const double radius =
              get_number(require_field(jp, "radius", ctx + ".primitive"), ctx);
          if (radius <= 0.0) {
            throw SchemaError(ctx + ": sphere radius must be positive");
          }
          int stacks = 10;
          int slices = 16;
          if (jp.contains("stacks")) stacks = jp["stacks"].get<int>();
          if (jp.contains("slices")) slices = jp["slices"].get<int>();
          rec.sphere = explicit_sphere ? *explicit_sphere : BoundingSphere{center, radius};
          scene.meshes.push_back(
              sphere_mesh(center, radius, stacks, slices, rec.numeric_id, rec.base_color));
        } else {
          throw SchemaError(ctx + ": primitive.kind must be 'box' or 'sphere'");
        }
      } else {
        require_keys(jo["mesh"], {"vertices", "triangles"}, ctx + ".mesh");
        TriangleMesh mesh =
            parse_raw_mesh(jo["mesh"], rec.numeric_id, rec.base_color, ctx + ".mesh");
        if (explicit_sphere) {
          rec.sphere = *explicit_sphere;
        } else {
          Vec3 lo = mesh.vertices[0];
          Vec3 hi = mesh.vertices[0];
          for (const Vec3& v : mesh.vertices) {
            lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
            hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
          }
          rec.sphere = compute_bounding_sphere(
              box_corners((lo + hi) * 0.5, (hi - lo) * 0.5, 0.0));
        }
        scene.meshes.push_back(std::move(mesh));
      }

      for (const ObjectRecord& existing : scene.objects) {
        if (existing.id == rec.id) {
          throw DuplicateObjectId("duplicate object id '" + rec.id + "'");
        }
      }
      scene.objects.push_back(std::move(rec));
    }
  }

  if (doc.contains("structure")) {
    if (!doc["structure"].is_array()) {
      throw SchemaError("scene.structure must be an array");
    }
    for (const json& js : doc["structure"]) {
      require_keys(js, {"vertices", "triangles", "color", "owner"}, "structure");
      Rgb color{120, 120, 120};
      if (js.contains("color")) {
        color = get_rgb(js["color"], "structure.color");
      }
      uint16_t owner = 0;
      if (js.contains("owner")) {
        if (!js["owner"].is_number_integer() || js["owner"].get<int64_t>() < 0 ||
            js["owner"].get<int64_t>() > 65535) {
          throw SchemaError("structure.owner must be an integer in [0, 65535]");
        }
        owner = static_cast<uint16_t>(js["owner"].get<int64_t>());
      }
      scene.meshes.push_back(parse_raw_mesh(js, owner, color, "structure"));
    }
  }

  scene.finalize();
  return scene;
}

SceneState load_scene_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open scene file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scene(buf.str());
}

std::string save_scene(const SceneState& scene) {
  json doc;
  doc["up"] = vec3_json(scene.declared_up);
  json objects = json::array();
  for (const ObjectRecord& o : scene.objects) {
    json jo;
    jo["id"] = o.id;
    jo["base_color"] = rgb_json(o.base_color);
    jo["sphere"] = {{"center", vec3_json(o.sphere.center)}, {"radius", o.sphere.radius}};
    if (!o.attributes.empty()) {
      json attrs;
      for (const auto& [name, spec] : o.attributes) {
        json ja;
        ja["domain"] = spec.domain;
        ja["initial"] = o.state.at(name);
        if (!spec.colors.empty()) {
          json colors;
          for (const auto& [value, c] : spec.colors) {
            colors[value] = rgb_json(c);
          }
          ja["colors"] = colors;
        }
        attrs[name] = ja;
      }
      jo["attributes"] = attrs;
    }
    // Geometry is always saved as an inline mesh; primitives were expanded
    // at load time.
    const TriangleMesh* owned = nullptr;
    for (const TriangleMesh& m : scene.meshes) {
      if (m.owner == o.numeric_id) {
        owned = &m;
        break;
      }
    }
    if (owned) {
      json verts = json::array();
      for (const Vec3& v : owned->vertices) {
        verts.push_back(vec3_json(v));
      }
      json tris = json::array();
      for (const auto& t : owned->triangles) {
        tris.push_back(json::array({t[0], t[1], t[2]}));
      }
      jo["mesh"] = {{"vertices", verts}, {"triangles", tris}};
    }
    objects.push_back(jo);
  }
  doc["objects"] = objects;

  json structure = json::array();
  for (const TriangleMesh& m : scene.meshes) {
    if (m.owner != 0) continue;
    json js;
    json verts = json::array();
    for (const Vec3& v : m.vertices) {
      verts.push_back(vec3_json(v));
    }
    json tris = json::array();
    for (const auto& t : m.triangles) {
      tris.push_back(json::array({t[0], t[1], t[2]}));
    }
    js["vertices"] = verts;
    js["triangles"] = tris;
    js["color"] = rgb_json(m.color);
    structure.push_back(js);
  }
  doc["structure"] = structure;
  return doc.dump(2) + "\n";
}

}  // namespace rendermem
