#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rendermem/geometry.hpp"

namespace rendermem {

struct Rgb {
  uint8_t r = 0;
  uint8_t g = 0;
  uint8_t b = 0;
  bool operator==(const Rgb&) const = default;
};

// Current attribute values, e.g. {"toggled": "on", "dirty": "false"}.
using AttributeMap = std::map<std::string, std::string>;

// Declared domain for one attribute, with an optional value -> color table.
// When `colors` is non-empty it must cover every domain value; the object's
// rendered color then depends on this attribute (see effective_color).
struct AttributeSpec {
  std::vector<std::string> domain;
  std::map<std::string, Rgb> colors;
  bool operator==(const AttributeSpec&) const = default;
};

struct ObjectRecord {
  std::string id;        // Category_index, e.g. Chair_0
  BoundingSphere sphere;
  uint16_t numeric_id = 0;  // renderer label, >= 1; 0 is background
  AttributeMap state;
  std::map<std::string, AttributeSpec> attributes;
  Rgb base_color{200, 200, 200};

  bool operator==(const ObjectRecord&) const = default;
};

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<uint32_t, 3>> triangles;
  uint16_t owner = 0;  // 0 = static structure
  Rgb color{120, 120, 120};  // used when owner == 0

  bool operator==(const TriangleMesh& o) const {
    return vertices == o.vertices && triangles == o.triangles &&
           owner == o.owner && color == o.color;
  }

  // Derived acceleration data, rebuilt by SceneState::finalize(); not part of
  // structural equality or serialization.
  struct Chunk {
    uint32_t begin = 0;
    uint32_t end = 0;
    BoundingSphere bounds;
  };
  BoundingSphere bounds;
  std::vector<Chunk> chunks;
};

enum class InteractionAction { Toggle, Open, Close, Break, Slice, Clean, Dirty };

struct InteractionEvent {
  std::string target_id;
  InteractionAction action = InteractionAction::Toggle;
};

InteractionAction parse_action(const std::string& name);
std::string action_name(InteractionAction action);

// Immutable snapshot of the renderable scene. Mutation happens by copying
// (apply_interaction); concurrent readers need no locking.
struct SceneState {
  std::vector<ObjectRecord> objects;
  std::vector<TriangleMesh> meshes;
  Vec3 declared_up{0.0, 1.0, 0.0};

  const ObjectRecord* find(const std::string& id) const;
  const ObjectRecord& get(const std::string& id) const;  // throws UnknownObject
  const ObjectRecord* find_numeric(uint16_t numeric_id) const;

  // Validates invariants and rebuilds mesh acceleration data.
  void finalize();

  // Structural equality: objects, meshes, declared_up (derived data ignored).
  bool operator==(const SceneState& o) const {
    return objects == o.objects && meshes == o.meshes && declared_up == o.declared_up;
  }
};

// Object category is the id prefix before the final underscore.
std::string category_of(const std::string& object_id);

// Insertion-order object list; the sole object-level context for pipeline
// decisions.
const std::vector<ObjectRecord>& object_list(const SceneState& scene);

// Copy-on-write state mutation; the input scene is left untouched.
SceneState apply_interaction(const SceneState& scene, const InteractionEvent& event);

// Current render color of an object: the rounded mean over its color-mapped
// attributes' current value colors, or base_color when none are mapped.
Rgb effective_color(const ObjectRecord& object);

// Scene document (JSON text, schema in docs/scene_schema.md).
SceneState load_scene(const std::string& json_text);
SceneState load_scene_file(const std::string& path);
std::string save_scene(const SceneState& scene);

// 8 corners of a box, rotated by yaw about +Y, then translated to center.
std::array<Vec3, 8> box_corners(const Vec3& center, const Vec3& half_extents,
                                double yaw);

// 12-triangle mesh for a box; vertex order matches box_corners.
TriangleMesh box_mesh(const Vec3& center, const Vec3& half_extents, double yaw,
                      uint16_t owner, Rgb color);

// Latitude/longitude tessellated sphere mesh.
TriangleMesh sphere_mesh(const Vec3& center, double radius, int stacks,
                         int slices, uint16_t owner, Rgb color);

}  // namespace rendermem
