#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "certus/macro.hpp"

namespace certus {

inline constexpr std::chrono::milliseconds kDefaultProviderTimeout{10000};

/// External macro provider: a shell command speaking line-delimited JSON on
/// its standard input and output. One request is in flight at a time.
///
/// Failures throw MacroError with code MAC002. After a timeout or transport
/// failure the process is killed and the handle stays unusable.
class MacroProvider {
 public:
  explicit MacroProvider(std::string command, std::chrono::milliseconds timeout = kDefaultProviderTimeout);
  ~MacroProvider();
  MacroProvider(const MacroProvider&) = delete;
  MacroProvider& operator=(const MacroProvider&) = delete;

  const std::string& command() const { return command_; }

  /// Launches the process and completes the handshake; no-op once started.
  void start();
  bool started() const { return started_; }
  /// Names announced in the handshake.
  const std::vector<std::string>& macros() const { return macros_; }
  bool provides(std::string_view macro);

  /// Sends one request and returns the `cases` text of the response.
  std::string invoke(const MacroRequest& request);

 private:
  void send_line(const std::string& line);
  std::string read_line();
  [[noreturn]] void fail(const std::string& message);
  void stop();

  std::string command_;
  std::chrono::milliseconds timeout_;
  int pid_ = -1;
  int fd_ = -1;
  bool started_ = false;
  bool broken_ = false;
  long next_id_ = 1;
  std::string buffer_;
  std::vector<std::string> macros_;
};

/// Providers in registration order, launched lazily on first lookup.
class ProviderPool {
 public:
  explicit ProviderPool(std::vector<std::string> commands = {},
                        std::chrono::milliseconds timeout = kDefaultProviderTimeout);

  bool empty() const { return providers_.empty(); }
  /// First provider announcing `macro`, or nullptr.
  MacroProvider* find(std::string_view macro);

 private:
  std::vector<std::unique_ptr<MacroProvider>> providers_;
};

}  // namespace certus
