#include "certus/provider.hpp"

#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <thread>

#include "certus/diagnostics.hpp"
#include "json.hpp"

extern char** environ;

namespace certus {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

json to_json(const MacroRequest& request, long id) {
  json children = json::array();
  for (const auto& c : request.children) {
    json child{{"id", c.id}, {"kind", c.kind}};
    child["confidence"] = c.confidence ? json(*c.confidence) : json(nullptr);
    children.push_back(std::move(child));
  }
  return json{{"id", id},
              {"macro", request.macro},
              {"node", {{"id", request.node_id}, {"kind", request.node_kind}}},
              {"children", std::move(children)},
              {"args", request.args}};
}

}  // namespace

MacroProvider::MacroProvider(std::string command, std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {}

MacroProvider::~MacroProvider() { stop(); }

void MacroProvider::fail(const std::string& message) {
  broken_ = true;
  stop();
  throw MacroError(std::string(codes::provider_failure), "macro provider '" + command_ + "': " + message);
}

void MacroProvider::stop() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
  if (pid_ > 0) {
    // Closing the socket is the shutdown signal; give the process a moment to exit.
    int status = 0;
    for (int i = 0; i < 20; ++i) {
      if (::waitpid(pid_, &status, WNOHANG) == pid_) {
        pid_ = -1;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
  }
}

void MacroProvider::start() {
  if (started_) return;
  if (broken_) fail("provider is no longer usable after an earlier failure");

  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
    fail(std::string("cannot create socket pair: ") + std::strerror(errno));
  }
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, fds[1], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, fds[1], STDOUT_FILENO);

  std::string shell = "/bin/sh";
  std::string flag = "-c";
  char* argv[] = {shell.data(), flag.data(), command_.data(), nullptr};
  pid_t pid = 0;
  const int rc = ::posix_spawn(&pid, "/bin/sh", &actions, nullptr, argv, environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(fds[1]);
  fd_ = fds[0];
  if (rc != 0) fail(std::string("cannot launch: ") + std::strerror(rc));
  pid_ = pid;

  send_line(json{{"certus-macro-protocol", 1}}.dump());
  json reply;
  try {
    reply = json::parse(read_line());
  } catch (const json::parse_error&) {
    fail("handshake reply is not valid JSON");
  }
  if (!reply.is_object() || reply.value("ok", false) != true || !reply.contains("macros") ||
      !reply["macros"].is_array()) {
    fail("handshake rejected; expected {\"ok\": true, \"macros\": [...]}");
  }
  for (const auto& m : reply["macros"]) {
    if (!m.is_string()) fail("handshake lists a macro name that is not a string");
    macros_.push_back(m.get<std::string>());
  }
  started_ = true;
}

bool MacroProvider::provides(std::string_view macro) {
  start();
  return std::find(macros_.begin(), macros_.end(), macro) != macros_.end();
}

void MacroProvider::send_line(const std::string& line) {
  std::string data = line + "\n";
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail("provider exited or closed its input");
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::string MacroProvider::read_line() {
  const auto deadline = Clock::now() + timeout_;
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (left.count() <= 0) {
      fail("timed out after " + std::to_string(timeout_.count()) + " ms waiting for a reply");
    }
    pollfd p{fd_, POLLIN, 0};
    const int ready = ::poll(&p, 1, static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      fail(std::string("poll failed: ") + std::strerror(errno));
    }
    if (ready == 0) continue;
    char chunk[4096];
    const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail(std::string("read failed: ") + std::strerror(errno));
    }
    if (n == 0) fail("provider exited before replying");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::string MacroProvider::invoke(const MacroRequest& request) {
  start();
  const long id = next_id_++;
  send_line(to_json(request, id).dump());
  json reply;
  try {
    reply = json::parse(read_line());
  } catch (const json::parse_error&) {
    fail("reply to #" + request.macro + " is not valid JSON");
  }
  if (!reply.is_object() || !reply.contains("id") || reply["id"] != id) {
    fail("reply to #" + request.macro + " does not carry request id " + std::to_string(id));
  }
  if (auto e = reply.find("error"); e != reply.end()) {
    throw MacroError(std::string(codes::provider_failure),
                     "macro provider '" + command_ + "' failed on #" + request.macro + " at '" + request.node_id +
                         "': " + (e->is_string() ? e->get<std::string>() : e->dump()));
  }
  auto c = reply.find("cases");
  if (c == reply.end() || !c->is_string()) fail("reply to #" + request.macro + " has neither 'cases' nor 'error'");
  return c->get<std::string>();
}

ProviderPool::ProviderPool(std::vector<std::string> commands, std::chrono::milliseconds timeout) {
  for (auto& c : commands) providers_.push_back(std::make_unique<MacroProvider>(std::move(c), timeout));
}

MacroProvider* ProviderPool::find(std::string_view macro) {
  for (auto& p : providers_) {
    if (p->provides(macro)) return p.get();
  }
  return nullptr;
}

}  // namespace certus
