#include "rendermem/reasoner.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cstring>

#include "httplib.h"
#include "rendermem/errors.hpp"

namespace rendermem {

using nlohmann::json;

nlohmann::json OracleReasoner::exchange(const nlohmann::json&) {
  throw std::logic_error("the oracle binding answers in-process, not over the wire");
}

std::string base64_encode(const std::string& bytes) {
  static const char table[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  size_t i = 0;
  while (i + 3 <= bytes.size()) {
    const uint32_t v = (static_cast<uint8_t>(bytes[i]) << 16) |
                       (static_cast<uint8_t>(bytes[i + 1]) << 8) |
                       static_cast<uint8_t>(bytes[i + 2]);
    out.push_back(table[(v >> 18) & 63]);
    out.push_back(table[(v >> 12) & 63]);
    out.push_back(table[(v >> 6) & 63]);
    out.push_back(table[v & 63]);
    i += 3;
  }
  const size_t rest = bytes.size() - i;
  if (rest == 1) {
    const uint32_t v = static_cast<uint8_t>(bytes[i]) << 16;
    out.push_back(table[(v >> 18) & 63]);
    out.push_back(table[(v >> 12) & 63]);
    out.push_back('=');
    out.push_back('=');
  } else if (rest == 2) {
    const uint32_t v = (static_cast<uint8_t>(bytes[i]) << 16) |
                       (static_cast<uint8_t>(bytes[i + 1]) << 8);
    out.push_back(table[(v >> 18) & 63]);
    out.push_back(table[(v >> 12) & 63]);
    out.push_back(table[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

HttpReasoner::HttpReasoner(const std::string& url, int timeout_seconds)
    : url_(url), timeout_seconds_(timeout_seconds) {}

nlohmann::json HttpReasoner::exchange(const nlohmann::json& request) {
  const auto scheme_end = url_.find("://");
  if (scheme_end == std::string::npos) {
    throw ReasonerUnavailable("reasoner URL '" + url_ + "' has no scheme");
  }
  const auto path_start = url_.find('/', scheme_end + 3);
  const std::string base = path_start == std::string::npos ? url_ : url_.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : url_.substr(path_start);

  httplib::Client client(base);
  client.set_connection_timeout(timeout_seconds_, 0);
  client.set_read_timeout(timeout_seconds_, 0);
  client.set_write_timeout(timeout_seconds_, 0);
  const auto result = client.Post(path, request.dump(), "application/json");
  if (!result) {
    throw ReasonerUnavailable("reasoner at '" + url_ + "' unreachable: " +
                              httplib::to_string(result.error()));
  }
  if (result->status != 200) {
    throw ReasonerUnavailable("reasoner at '" + url_ + "' returned HTTP " +
                              std::to_string(result->status));
  }
  try {
    return json::parse(result->body);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("reasoner response is not valid JSON: ") + e.what());
  }
}

StdioReasoner::StdioReasoner(const std::string& command) : command_(command) {
  int to_pipe[2];
  int from_pipe[2];
  if (pipe(to_pipe) != 0 || pipe(from_pipe) != 0) {
    throw ReasonerUnavailable("cannot create pipes for stdio reasoner");
  }
  const pid_t pid = fork();
  if (pid < 0) {
    throw ReasonerUnavailable("cannot fork stdio reasoner");
  }
  if (pid == 0) {
    dup2(to_pipe[0], STDIN_FILENO);
    dup2(from_pipe[1], STDOUT_FILENO);
    close(to_pipe[0]);
    close(to_pipe[1]);
    close(from_pipe[0]);
    close(from_pipe[1]);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(to_pipe[0]);
  close(from_pipe[1]);
  child_pid_ = pid;
  to_child_ = to_pipe[1];
  from_child_ = from_pipe[0];
}

StdioReasoner::~StdioReasoner() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  if (child_pid_ > 0) {
    int status = 0;
    waitpid(child_pid_, &status, 0);
  }
}

nlohmann::json StdioReasoner::exchange(const nlohmann::json& request) {
  const std::string line = request.dump() + "\n";
  size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = write(to_child_, line.data() + written, line.size() - written);
    if (n <= 0) {
      throw ReasonerUnavailable("stdio reasoner closed its input");
    }
    written += static_cast<size_t>(n);
  }
  std::string response;
  char ch = 0;
  for (;;) {
    const ssize_t n = read(from_child_, &ch, 1);
    if (n <= 0) {
      throw ReasonerUnavailable("stdio reasoner closed its output");
    }
    if (ch == '\n') break;
    response.push_back(ch);
  }
  try {
    return json::parse(response);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("stdio reasoner emitted invalid JSON: ") + e.what());
  }
}

std::unique_ptr<Reasoner> make_reasoner(const std::string& binding) {
  if (binding == "oracle") {
    return std::make_unique<OracleReasoner>();
  }
  if (binding.rfind("http://", 0) == 0 || binding.rfind("https://", 0) == 0) {
    return std::make_unique<HttpReasoner>(binding);
  }
  if (binding.rfind("stdio:", 0) == 0) {
    return std::make_unique<StdioReasoner>(binding.substr(6));
  }
  throw DomainError("unknown reasoner binding '" + binding +
                    "' (expected 'oracle', an http URL, or 'stdio:<command>')");
}

}  // namespace rendermem
