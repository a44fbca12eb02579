#pragma once

#include <memory>
#include <string>

#include "json.hpp"

namespace rendermem {

// A reasoner binding. The oracle binding answers in-process from rendered
// buffers (see pipeline::oracle_reason); wire bindings forward single JSON
// exchanges to an external process or endpoint:
//
//   request  {"role": "reason"|"judge", "question": str, "images": [base64 PPM],
//             "object_list": [{"id", "center", "radius"}],
//             "strategy": str, "stage": int}
//   response {"answer": str}
class Reasoner {
 public:
  virtual ~Reasoner() = default;
  virtual std::string name() const = 0;
  virtual bool is_oracle() const { return false; }
  virtual nlohmann::json exchange(const nlohmann::json& request) = 0;
};

class OracleReasoner : public Reasoner {
 public:
  std::string name() const override { return "oracle"; }
  bool is_oracle() const override { return true; }
  nlohmann::json exchange(const nlohmann::json&) override;
};

// HTTP POST of one JSON object per exchange, 30 s timeout.
class HttpReasoner : public Reasoner {
 public:
  explicit HttpReasoner(const std::string& url, int timeout_seconds = 30);
  std::string name() const override { return "http:" + url_; }
  nlohmann::json exchange(const nlohmann::json& request) override;

 private:
  std::string url_;
  int timeout_seconds_;
};

// Line-delimited JSON over the stdin/stdout of a spawned command.
class StdioReasoner : public Reasoner {
 public:
  explicit StdioReasoner(const std::string& command);
  ~StdioReasoner() override;
  StdioReasoner(const StdioReasoner&) = delete;
  StdioReasoner& operator=(const StdioReasoner&) = delete;

  std::string name() const override { return "stdio:" + command_; }
  nlohmann::json exchange(const nlohmann::json& request) override;

 private:
  std::string command_;
  int child_pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
};

// "oracle", an http(s):// URL, or "stdio:<command>".
std::unique_ptr<Reasoner> make_reasoner(const std::string& binding);

std::string base64_encode(const std::string& bytes);

}  // namespace rendermem
