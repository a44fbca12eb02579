#pragma once

// Scripted stand-in for an external reasoner, shared by the stdio helper
// binary and the in-process HTTP test server. Decisions are parsed from the
// natural-language question text; answers are canned.

#include <regex>
#include <string>
#include <vector>

#include "json.hpp"

inline nlohmann::json fake_reason_reply(const nlohmann::json& request) {
  const auto answer = [](const std::string& text) {
    return nlohmann::json{{"answer", text}};
  };
  if (request.value("role", "") == "judge") {
    return answer("1");
  }
  const std::string question = request.value("question", "");
  const std::string strategy = request.value("strategy", "");
  const int stage = request.value("stage", 0);

  std::vector<std::string> ids;
  static const std::regex id_re("[A-Za-z][A-Za-z0-9]*_[0-9]+");
  for (auto it = std::sregex_iterator(question.begin(), question.end(), id_re);
       it != std::sregex_iterator(); ++it) {
    ids.push_back(it->str());
  }

  const bool is_count = question.rfind("How many", 0) == 0;
  const bool is_visibility = question.find("visible") != std::string::npos;

  if (!request.value("images", nlohmann::json::array()).empty()) {
    if (is_count) return answer("2");
    if (is_visibility) return answer("yes");
    return answer("on");
  }

  // decision stages; in the question template the target id precedes the
  // source id ("Is <target> visible from <source>?")
  const std::string anchors =
      is_visibility && ids.size() >= 2 ? ids[1] + " " + ids[0]
                                       : (ids.empty() ? "" : ids[0]);
  if (strategy == "1step") {
    if (is_count) return answer("direct 4");
    return answer((is_visibility ? "directional " : "surround ") + anchors);
  }
  if (stage == 1) {
    return answer(is_count ? "4" : "render");
  }
  if (strategy == "2step") {
    return answer((is_visibility ? "directional " : "surround ") + anchors);
  }
  // 3step
  if (stage == 2) {
    return answer(is_visibility ? "directional" : "surround");
  }
  return answer(anchors);
}
