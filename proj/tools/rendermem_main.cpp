// Command-line surface: render, ask, bench, gen, perturb.
//
// Exit codes: 0 success, 2 argument errors, 3 scene/question errors,
// 4 I/O errors, 5 reasoner unavailable.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rendermem/bench.hpp"
#include "rendermem/image_io.hpp"
#include "rendermem/perturb.hpp"
#include "rendermem/pipeline.hpp"

namespace rm = rendermem;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

struct RenderArgs {
  std::string scene;
  std::string mode = "surround";
  std::string object;
  std::string target;
  double alpha = 1.5;
  int views = 8;
  double phi_deg = 20.0;
  double fov_deg = 90.0;
  std::string res = "256x256";
  std::string out;
};

struct AskArgs {
  std::string scene;
  std::string question;
  std::string reasoner;
  std::string strategy = "2";
  std::string trace;
  std::vector<std::string> interact;
  std::string res = "256x256";
  double alpha = 1.5;
  int views = 8;
  double phi_deg = 20.0;
  double fov_deg = 90.0;
};

struct BenchArgs {
  std::string suite;
  std::string reasoner;
  std::string judge;
  std::string sweep;
  std::string report;
  std::string strategy = "2";
  double delta = 0.0;
  double gamma = 0.0;
  double lambda = 0.0;
  uint64_t perturb_seed = 0;
  std::string res = "256x256";
};

struct GenArgs {
  uint64_t seed = 0;
  int items = 14;
  std::string out;
  int objects_min = 6;
  int objects_max = 10;
  double occluders = 0.5;
  double room_width = 8.0;
  double room_depth = 6.0;
};

struct PerturbArgs {
  std::string in;
  std::string out;
  double delta = -1.0;
  double gamma = -1.0;
  std::vector<int> ghost;
  };

void parse_resolution(const std::string& res, int& width, int& height) {
  const auto x = res.find('x');
  if (x == std::string::npos) {
    throw CLI::ValidationError("--res", "expected WIDTHxHEIGHT");
  }
  try {
    width = std::stoi(res.substr(0, x));
    height = std::stoi(res.substr(x + 1));
  } catch (...) {
    throw CLI::ValidationError("--res", "expected WIDTHxHEIGHT");
  }
  if (width < 1 || height < 1) {
    throw CLI::ValidationError("--res", "resolution must be positive");
  }
}

std::string resolve_reasoner(const std::string& flag_value) {
  if (!flag_value.empty()) {
    return flag_value;
  }
  if (const char* env = std::getenv("RENDERMEM_REASONER_URL"); env && *env) {
    return env;
  }
  return "oracle";
}

json pose_json(const rm::CameraPose& pose) {
  return {{"position", {pose.position.x, pose.position.y, pose.position.z}},
          {"forward", {pose.forward.x, pose.forward.y, pose.forward.z}},
          {"up", {pose.up.x, pose.up.y, pose.up.z}}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw rm::IoError("cannot open '" + path + "' for writing");
  }
  out << text;
  if (!out) {
    throw rm::IoError("failed writing '" + path + "'");
  }
}

int cmd_render(const RenderArgs& args) {
  int width = 0, height = 0;
  parse_resolution(args.res, width, height);
  const rm::SceneState scene = rm::load_scene_file(args.scene);

  rm::CameraIntrinsics intrinsics;
  intrinsics.fov_v = args.fov_deg * kDegToRad;
  intrinsics.aspect = static_cast<double>(width) / height;

  std::vector<rm::CameraPose> poses;
  std::optional<uint16_t> self_skip;
  if (args.mode == "surround") {
    const rm::ObjectRecord& anchor = scene.get(args.object);
    poses = rm::surround_poses(anchor.sphere, intrinsics, args.alpha, args.views,
                               args.phi_deg * kDegToRad, scene.declared_up);
  } else {
    const rm::ObjectRecord& source = scene.get(args.object);
    const rm::ObjectRecord& target = scene.get(args.target);
    poses.push_back(rm::directional_pose(source.sphere, target.sphere.center,
                                         scene.declared_up));
    self_skip = source.numeric_id;
  }

  fs::create_directories(args.out);
  json meta;
  meta["mode"] = args.mode;
  meta["alpha"] = args.alpha;
  meta["K"] = static_cast<int>(poses.size());
  meta["phi_deg"] = args.phi_deg;
  json views = json::array();
  for (size_t i = 0; i < poses.size(); ++i) {
    const rm::RenderedView view =
        rm::render(scene, poses[i], intrinsics, width, height, self_skip);
    char name[32];
    std::snprintf(name, sizeof(name), "view_%02zu", i);
    const std::string rgb_path = args.out + "/" + name + ".ppm";
    const std::string id_path = args.out + "/" + name + ".ids.pgm";
    rm::write_view(view, rgb_path, id_path);
    json jv = pose_json(poses[i]);
    jv["index"] = i;
    jv["rgb"] = std::string(name) + ".ppm";
    jv["ids"] = std::string(name) + ".ids.pgm";
    views.push_back(jv);
  }
  meta["views"] = views;
  write_text(args.out + "/poses.json", meta.dump(2) + "\n");
  return 0;
}

int cmd_ask(const AskArgs& args) {
  int width = 0, height = 0;
  parse_resolution(args.res, width, height);
  rm::SceneState scene = rm::load_scene_file(args.scene);

  for (const std::string& spec : args.interact) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
      throw CLI::ValidationError("--interact", "expected action:ObjectId");
    }
    scene = rm::apply_interaction(
        scene, {spec.substr(colon + 1), rm::parse_action(spec.substr(0, colon))});
  }

  std::ifstream qin(args.question, std::ios::binary);
  if (!qin) {
    throw rm::IoError("cannot open question file '" + args.question + "'");
  }
  json qdoc;
  try {
    qdoc = json::parse(qin);
  } catch (const json::parse_error& e) {
    throw rm::SchemaError(std::string("question file is not valid JSON: ") + e.what());
  }
  const rm::Question question = rm::question_from_json(qdoc);

  rm::PipelineConfig config;
  config.width = width;
  config.height = height;
  config.fov_v = args.fov_deg * kDegToRad;
  config.alpha = args.alpha;
  config.view_count = args.views;
  config.elevation = args.phi_deg * kDegToRad;
  config.trace_dir = args.trace;

  const auto reasoner = rm::make_reasoner(resolve_reasoner(args.reasoner));
  const auto [answer, trace] =
      rm::answer(question, scene, *reasoner, rm::strategy_from_name(args.strategy),
                 config);
  std::cout << answer.text << "\n";

  if (!args.trace.empty()) {
    json jt;
    jt["question"] = rm::question_to_json(question);
    jt["requested_rendering"] = trace.requested_rendering;
    jt["reasoner"] = trace.reasoner_name;
    jt["strategy"] = rm::strategy_name(trace.strategy);
    jt["render_count"] = trace.render_count;
    if (trace.spec) {
      json js;
      js["mode"] = trace.spec->mode == rm::RenderMode::Surround ? "surround"
                                                                : "directional";
      if (trace.spec->mode == rm::RenderMode::Surround) {
        js["object"] = trace.spec->object_id;
      } else {
        js["source"] = trace.spec->source_id;
        js["target"] = trace.spec->target_id;
      }
      js["alpha"] = trace.spec->alpha;
      js["K"] = trace.spec->view_count;
      js["phi"] = trace.spec->elevation;
      jt["spec"] = js;
    }
    json poses = json::array();
    for (const rm::CameraPose& pose : trace.poses) {
      poses.push_back(pose_json(pose));
    }
    jt["poses"] = poses;
    jt["view_paths"] = trace.view_paths;
    jt["answer"] = answer.text;
    write_text(args.trace + "/trace.json", jt.dump(2) + "\n");
  }
  return 0;
}

int cmd_bench(const BenchArgs& args) {
  int width = 0, height = 0;
  parse_resolution(args.res, width, height);
  const rm::QASuite suite = rm::load_suite_file(args.suite);
  const auto reasoner = rm::make_reasoner(resolve_reasoner(args.reasoner));
  std::unique_ptr<rm::Reasoner> judge;
  if (!args.judge.empty()) {
    judge = rm::make_reasoner(args.judge);
  }

  rm::PipelineConfig config;
  config.width = width;
  config.height = height;
  const rm::Strategy strategy = rm::strategy_from_name(args.strategy);

  if (!args.sweep.empty()) {
    const rm::SweepGrid grid = rm::load_sweep_file(args.sweep);
    const auto points =
        rm::run_sweep(suite, *reasoner, grid, args.perturb_seed, config, strategy);
    json doc = json::array();
    for (const rm::SweepPoint& point : points) {
      json jp;
      jp["axis"] = point.axis;
      jp["value"] = point.value;
      jp["report"] = rm::report_to_json(point.report);
      doc.push_back(jp);
    }
    write_text(args.report, doc.dump(2) + "\n");
    const fs::path csv_path = fs::path(args.report).replace_extension(".csv");
    write_text(csv_path.string(), rm::sweep_csv(points));
    for (const rm::SweepPoint& point : points) {
      for (const auto& [kind, stats] : point.report.aggregate) {
        std::printf("%s %s=%g accuracy %.4f (n=%d)\n", kind.c_str(),
                    point.axis.c_str(), point.value, stats.accuracy, stats.n);
      }
    }
    return 0;
  }

  std::optional<rm::PerturbConfig> perturb;
  if (args.delta > 0.0 || args.gamma > 0.0 || args.lambda > 0.0) {
    rm::PerturbConfig p;
    p.delta = args.delta;
    p.gamma = args.gamma;
    p.lambda = args.lambda;
    p.rng_seed = args.perturb_seed;
    perturb = p;
  }
  const rm::Report report =
      rm::run_suite(suite, *reasoner, perturb, config, strategy, judge.get());
  write_text(args.report, rm::report_to_json(report).dump(2) + "\n");
  for (const auto& [kind, stats] : report.aggregate) {
    std::printf("%s accuracy %.4f (n=%d)\n", kind.c_str(), stats.accuracy, stats.n);
  }
  return 0;
}

int cmd_gen(const GenArgs& args) {
  rm::GeneratorConfig config;
  config.object_count_min = args.objects_min;
  config.object_count_max = args.objects_max;
  config.occluder_density = args.occluders;
  config.room_width = args.room_width;
  config.room_depth = args.room_depth;
  // Item mix: ~20% count, ~35% attribute, rest visibility.
  config.count_questions = std::max(1, static_cast<int>(args.items * 0.2));
  config.attribute_questions = std::max(1, static_cast<int>(args.items * 0.35));
  config.visibility_questions =
      std::max(0, args.items - config.count_questions - config.attribute_questions);

  auto [scene_text, suite] = rm::generate_suite(config, args.seed);
  fs::create_directories(args.out);
  write_text(args.out + "/scene.json", scene_text);
  suite.scene_path = "scene.json";
  write_text(args.out + "/suite.json", rm::save_suite(suite));
  std::printf("scene with %zu QA items -> %s\n", suite.items.size(), args.out.c_str());
  return 0;
}

int cmd_perturb(const PerturbArgs& args) {
  const rm::RgbImage img = rm::read_ppm(args.in);
  std::vector<uint8_t> pixels = img.pixels;
  if (args.delta >= 0.0) {
    pixels = rm::apply_blur(pixels, img.width, img.height, args.delta);
  }
  if (args.gamma >= 0.0) {
    rm::GhostOffsets offsets = rm::default_ghost_offsets(img.width);
    if (!args.ghost.empty()) {
      if (args.ghost.size() != 4) {
        throw CLI::ValidationError("--ghost", "expected dx1,dy1,dx2,dy2");
      }
      offsets = {args.ghost[0], args.ghost[1], args.ghost[2], args.ghost[3]};
    }
    pixels = rm::apply_ghosting(pixels, img.width, img.height, args.gamma, offsets);
  }
  rm::write_ppm(args.out, img.width, img.height, pixels);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rendermem: a 3D scene store whose read operation is rendering"};
  app.require_subcommand(1);
  app.set_config("--config");

  RenderArgs render_args;
  auto* render_cmd = app.add_subcommand("render", "Render query-conditioned views");
  render_cmd->add_option("--scene", render_args.scene, "Scene JSON file")->required();
  render_cmd->add_option("--mode", render_args.mode, "surround | directional")
      ->check(CLI::IsMember({"surround", "directional"}));
  render_cmd->add_option("--object", render_args.object,
                         "Anchor object (surround) or source (directional)")
      ->required();
  render_cmd->add_option("--target", render_args.target, "Directional target object");
  render_cmd->add_option("--alpha", render_args.alpha, "Distance scale, >= 1");
  render_cmd->add_option("-K,--views", render_args.views, "Surround view count");
  render_cmd->add_option("--phi", render_args.phi_deg, "Surround elevation (degrees)");
  render_cmd->add_option("--fov", render_args.fov_deg, "Vertical FOV (degrees)");
  render_cmd->add_option("--res", render_args.res, "Resolution WxH");
  render_cmd->add_option("--out", render_args.out, "Output directory")->required();

  AskArgs ask_args;
  auto* ask_cmd = app.add_subcommand("ask", "Answer one structured question");
  ask_cmd->add_option("--scene", ask_args.scene, "Scene JSON file")->required();
  ask_cmd->add_option("--question", ask_args.question, "Question JSON file")->required();
  ask_cmd->add_option("--reasoner", ask_args.reasoner,
                      "oracle | http(s) URL | stdio:<command>");
  ask_cmd->add_option("--strategy", ask_args.strategy, "1 | 2 | 3 (query steps)")
      ->check(CLI::IsMember({"1", "2", "3", "1step", "2step", "3step"}));
  ask_cmd->add_option("--trace", ask_args.trace, "Directory for views + trace.json");
  ask_cmd->add_option("--interact", ask_args.interact,
                      "Pre-question interaction action:ObjectId (repeatable)");
  ask_cmd->add_option("--res", ask_args.res, "Evidence resolution WxH");
  ask_cmd->add_option("--alpha", ask_args.alpha, "Surround distance scale");
  ask_cmd->add_option("-K,--views", ask_args.views, "Surround view count");
  ask_cmd->add_option("--phi", ask_args.phi_deg, "Surround elevation (degrees)");
  ask_cmd->add_option("--fov", ask_args.fov_deg, "Vertical FOV (degrees)");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Run a QA suite and report accuracy");
  bench_cmd->add_option("--suite", bench_args.suite, "Suite JSON file")->required();
  bench_cmd->add_option("--reasoner", bench_args.reasoner,
                        "oracle | http(s) URL | stdio:<command>");
  bench_cmd->add_option("--judge", bench_args.judge,
                        "External judge binding (default: deterministic matcher)");
  bench_cmd->add_option("--sweep", bench_args.sweep, "Sweep grid JSON file");
  bench_cmd->add_option("--report", bench_args.report, "Report output path")->required();
  bench_cmd->add_option("--strategy", bench_args.strategy, "1 | 2 | 3")
      ->check(CLI::IsMember({"1", "2", "3", "1step", "2step", "3step"}));
  bench_cmd->add_option("--delta", bench_args.delta, "Blur severity");
  bench_cmd->add_option("--gamma", bench_args.gamma, "Ghosting intensity");
  bench_cmd->add_option("--lambda", bench_args.lambda, "Sphere noise magnitude");
  bench_cmd->add_option("--perturb-seed", bench_args.perturb_seed, "Perturbation seed");
  bench_cmd->add_option("--res", bench_args.res, "Evidence resolution WxH");

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic scene + QA suite");
  gen_cmd->add_option("--seed", gen_args.seed, "Generator seed")->required();
  gen_cmd->add_option("-n,--items", gen_args.items, "Approximate QA item count");
  gen_cmd->add_option("--out", gen_args.out, "Output directory")->required();
  gen_cmd->add_option("--objects-min", gen_args.objects_min, "Min object count");
  gen_cmd->add_option("--objects-max", gen_args.objects_max, "Max object count");
  gen_cmd->add_option("--occluders", gen_args.occluders,
                      "Fraction of visibility pairs walled off");
  gen_cmd->add_option("--room-width", gen_args.room_width, "Room width (m)");
  gen_cmd->add_option("--room-depth", gen_args.room_depth, "Room depth (m)");

  PerturbArgs perturb_args;
  auto* perturb_cmd = app.add_subcommand("perturb", "Corrupt a PPM image");
  perturb_cmd->add_option("--in", perturb_args.in, "Input PPM")->required();
  perturb_cmd->add_option("--out", perturb_args.out, "Output PPM")->required();
  perturb_cmd->add_option("--delta", perturb_args.delta,
                          "Blur severity (sigma = 0.5 + 6*delta)");
  perturb_cmd->add_option("--gamma", perturb_args.gamma, "Ghosting intensity [0,1]");
  perturb_cmd->add_option("--ghost", perturb_args.ghost,
                          "Ghost offsets dx1 dy1 dx2 dy2")
      ->expected(4);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(render_cmd)) {
      if (render_args.mode == "directional" && render_args.target.empty()) {
        std::fprintf(stderr, "error: --mode directional requires --target\n");
        return 2;
      }
      return cmd_render(render_args);
    }
    if (app.got_subcommand(ask_cmd)) return cmd_ask(ask_args);
    if (app.got_subcommand(bench_cmd)) return cmd_bench(bench_args);
    if (app.got_subcommand(gen_cmd)) return cmd_gen(gen_args);
    if (app.got_subcommand(perturb_cmd)) return cmd_perturb(perturb_args);
    return 2;
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const rm::ReasonerError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 5;
  } catch (const rm::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const rm::SceneError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
